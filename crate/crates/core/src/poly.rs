//! Polynomials over F_q, constant term first.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};

#[derive(Clone)]
pub struct Poly {
    field: FieldSpec,
    coeffs: Vec<Elem>,
}

impl Poly {
    /// Builds a polynomial from coefficients, constant term first. Trailing zeros are
    /// dropped; coefficients must be residues below `q`.
    pub fn new(field: &FieldSpec, coeffs: Vec<Elem>) -> Result<Self> {
        if let Some(&c) = coeffs.iter().find(|&&c| c as u32 >= field.q()) {
            return Err(Error::domain(format!(
                "coefficient {c} is not a residue mod {}",
                field.q()
            )));
        }
        Ok(Self::from_raw(field, coeffs))
    }

    pub(crate) fn from_raw(field: &FieldSpec, mut coeffs: Vec<Elem>) -> Self {
        trim(&mut coeffs);
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &FieldSpec) -> Self {
        Self::from_raw(field, Vec::new())
    }

    pub fn one(field: &FieldSpec) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: &FieldSpec, c: Elem) -> Self {
        Self::from_raw(field, vec![c])
    }

    /// The indeterminate `T`.
    pub fn t(field: &FieldSpec) -> Self {
        Self::from_raw(field, vec![0, 1])
    }

    /// `T + a`.
    pub fn linear(field: &FieldSpec, a: Elem) -> Self {
        Self::from_raw(field, vec![a, 1])
    }

    /// The monic polynomial of degree `deg` whose lower coefficients are the base-q
    /// digits of `code` (least significant digit = constant term).
    pub fn from_monic_code(field: &FieldSpec, deg: usize, mut code: u64) -> Self {
        let q = field.q() as u64;
        let mut coeffs = Vec::with_capacity(deg + 1);
        for _ in 0..deg {
            coeffs.push((code % q) as Elem);
            code /= q;
        }
        coeffs.push(1);
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    /// Inverse of [`Poly::from_monic_code`]: base-q encoding of the non-leading coefficients.
    pub fn monic_code(&self) -> u64 {
        let q = self.field.q() as u64;
        let n = self.coeffs.len().saturating_sub(1);
        self.coeffs[..n]
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * q + c as u64)
    }

    #[inline]
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    #[inline]
    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// Coefficient of `T^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0; only for callers that excluded zero.
    #[inline]
    pub(crate) fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<Elem> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 1
    }

    /// `|f| = q^deg f`, and `|0| = 0`.
    pub fn norm(&self) -> u128 {
        match self.degree() {
            None => 0,
            Some(d) => (self.field.q() as u128)
                .checked_pow(d as u32)
                .expect("norm overflows u128"),
        }
    }

    /// `ln |f|`, i.e. `deg f * ln q`.
    pub fn log_norm(&self) -> f64 {
        self.deg() as f64 * (self.field.q() as f64).ln()
    }

    fn check_field(&self, other: &Poly) -> Result<()> {
        if self.field.same_field(&other.field) {
            Ok(())
        } else {
            Err(Error::config(format!(
                "mixed fields: q={} and q={}",
                self.field.q(),
                other.field.q()
            )))
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.add(self.coeff(i), other.coeff(i)))
            .collect();
        Ok(Self::from_raw(f, coeffs))
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        Ok(Self::from_raw(
            &self.field,
            mul_slices(&self.field, &self.coeffs, &other.coeffs),
        ))
    }

    pub fn scale(&self, c: Elem) -> Poly {
        let f = &self.field;
        Self::from_raw(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Euclidean division: `self = quot * divisor + rem` with `deg rem < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check_field(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        let db = divisor.deg();
        let inv_lead = f.inv(divisor.coeffs[db]).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut quot = vec![0; rem.len() - db];
        for i in (db..rem.len()).rev() {
            let c = f.mul(rem[i], inv_lead);
            if c == 0 {
                continue;
            }
            quot[i - db] = c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[i - db + j] = f.sub(rem[i - db + j], f.mul(c, b));
            }
        }
        rem.truncate(db);
        Ok((Self::from_raw(f, quot), Self::from_raw(f, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        self.check_field(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut r = self.coeffs.clone();
        rem_assign(&self.field, &mut r, &divisor.coeffs);
        Ok(Self::from_raw(&self.field, r))
    }

    /// Scales to leading coefficient 1; the zero polynomial is returned unchanged.
    pub fn to_monic(&self) -> Poly {
        match self.leading() {
            None | Some(1) => self.clone(),
            Some(c) => self.scale(self.field.inv(c).expect("nonzero")),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::domain("gcd(0, 0) is undefined"));
        }
        let mut a = self.coeffs.clone();
        let mut b = other.coeffs.clone();
        while !b.is_empty() {
            rem_assign(&self.field, &mut a, &b);
            std::mem::swap(&mut a, &mut b);
        }
        Ok(Self::from_raw(&self.field, a).to_monic())
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let p = f.characteristic();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| {
                let m = (i as u32 % p) as Elem;
                // i mod p embeds in the prime subfield, whose residues are 0..p in every encoding
                f.mul(c, m)
            })
            .collect();
        Self::from_raw(f, coeffs)
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u128, modulus: &Poly) -> Result<Poly> {
        let f = &self.field;
        let mut base = self.rem(modulus)?.coeffs;
        let mut acc = vec![1];
        rem_assign(f, &mut acc, &modulus.coeffs);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_slices(f, &acc, &base);
                rem_assign(f, &mut acc, &modulus.coeffs);
            }
            e >>= 1;
            if e > 0 {
                base = mul_slices(f, &base, &base);
                rem_assign(f, &mut base, &modulus.coeffs);
            }
        }
        Ok(Self::from_raw(f, acc))
    }

    pub fn eval(&self, x: Elem) -> Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Canonical text form `q<q>:<c0>,<c1>,...`; the zero polynomial is `q<q>:0`.
    pub fn encode(&self) -> String {
        self.to_string()
    }

    /// Parses the canonical encoding, building the field from the `q` prefix.
    pub fn parse(s: &str) -> Result<Poly> {
        let (q, _) = split_encoding(s)?;
        let field = FieldSpec::new(q)?;
        Self::parse_in(&field, s)
    }

    /// Parses the canonical encoding, requiring its `q` to match `field`.
    pub fn parse_in(field: &FieldSpec, s: &str) -> Result<Poly> {
        let (q, body) = split_encoding(s)?;
        if q != field.q() {
            return Err(Error::config(format!(
                "polynomial {s} is over F_{q}, expected F_{}",
                field.q()
            )));
        }
        let coeffs = body
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad coefficient {c:?} in {s}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() > 1 && coeffs.last() == Some(&0) {
            return Err(Error::Parse(format!(
                "non-canonical encoding {s}: leading coefficient is zero"
            )));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= q) {
            return Err(Error::Parse(format!("coefficient {c} out of range in {s}")));
        }
        Ok(Self::from_raw(
            field,
            coeffs.into_iter().map(|c| c as Elem).collect(),
        ))
    }
}

fn split_encoding(s: &str) -> Result<(u32, &str)> {
    let s = s.trim();
    let rest = s
        .strip_prefix('q')
        .ok_or_else(|| Error::Parse(format!("polynomial encoding {s:?} must start with 'q'")))?;
    let (q, body) = rest
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("polynomial encoding {s:?} lacks ':'")))?;
    let q = q
        .parse::<u32>()
        .map_err(|_| Error::Parse(format!("bad field order in {s:?}")))?;
    if body.is_empty() {
        return Err(Error::Parse(format!("empty coefficient list in {s:?}")));
    }
    Ok((q, body))
}

pub(crate) fn trim(coeffs: &mut Vec<Elem>) {
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
}

pub(crate) fn mul_slices(f: &FieldSpec, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// `a <- a mod b` for trimmed `b != 0`; leaves `a` trimmed.
pub(crate) fn rem_assign(f: &FieldSpec, a: &mut Vec<Elem>, b: &[Elem]) {
    trim(a);
    let db = b.len() - 1;
    let lead = b[db];
    let inv_lead = f.inv(lead).expect("trimmed divisor");
    while a.len() > db {
        let top = a.len() - 1;
        let c = f.mul(a[top], inv_lead);
        let shift = top - db;
        for (j, &bj) in b.iter().enumerate() {
            a[shift + j] = f.sub(a[shift + j], f.mul(c, bj));
        }
        trim(a);
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.field.q() == other.field.q() && self.coeffs == other.coeffs
    }
}

impl Eq for Poly {}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.q().hash(state);
        self.coeffs.hash(state);
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by degree, then by coefficients from the leading term down; for monic
/// polynomials of equal degree this is the order of [`Poly::monic_code`].
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.field
            .q()
            .cmp(&other.field.q())
            .then(self.coeffs.len().cmp(&other.coeffs.len()))
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}:", self.field.q())?;
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Poly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Poly::parse(s)
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::from_raw(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

// Operator forms panic on mixed fields; use the `try_*` methods to get an error instead.
impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("polynomials over the same field")
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("polynomials over the same field")
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("polynomials over the same field")
    }
}

/// The `q^n` monic polynomials of degree `n` in increasing [`Poly::monic_code`] order.
///
/// Cheap to clone; [`MonicIter::range`] positions the stream for sharding.
#[derive(Clone, Debug)]
pub struct MonicIter {
    field: FieldSpec,
    degree: usize,
    next: u64,
    end: u64,
}

impl MonicIter {
    pub fn count_for(field: &FieldSpec, degree: usize) -> u64 {
        (field.q() as u64).pow(degree as u32)
    }

    /// Restricts the stream to codes in `start..end`.
    pub fn range(mut self, start: u64, end: u64) -> Self {
        self.next = start.min(self.end);
        self.end = end.min(self.end);
        self
    }
}

impl Iterator for MonicIter {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        if self.next >= self.end {
            return None;
        }
        let p = Poly::from_monic_code(&self.field, self.degree, self.next);
        self.next += 1;
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.next) as usize;
        (n, Some(n))
    }

    fn nth(&mut self, n: usize) -> Option<Poly> {
        self.next = self.next.saturating_add(n as u64).min(self.end);
        self.next()
    }
}

impl ExactSizeIterator for MonicIter {}

pub fn enumerate_monic(field: &FieldSpec, degree: usize) -> MonicIter {
    MonicIter {
        field: field.clone(),
        degree,
        next: 0,
        end: MonicIter::count_for(field, degree),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u32) -> FieldSpec {
        FieldSpec::new(q).unwrap()
    }

    fn p(field: &FieldSpec, c: &[Elem]) -> Poly {
        Poly::new(field, c.to_vec()).unwrap()
    }

    #[test]
    fn multiplication_examples() {
        let f3 = f(3);
        assert_eq!(&Poly::t(&f3) * &Poly::linear(&f3, 1), p(&f3, &[0, 1, 1]));
        let g = p(&f3, &[2, 0, 1, 1]);
        assert_eq!(&g * &Poly::one(&f3), g);
        // (T+1)(T+2) = T^2 + 3T + 2 = T^2 + 2 over F_3
        assert_eq!(
            &Poly::linear(&f3, 1) * &Poly::linear(&f3, 2),
            p(&f3, &[2, 0, 1])
        );
    }

    #[test]
    fn mixed_fields_are_a_config_error() {
        let a = Poly::t(&f(3));
        let b = Poly::t(&f(5));
        assert!(matches!(a.try_mul(&b), Err(Error::Config(_))));
        assert!(matches!(a.div_rem(&b), Err(Error::Config(_))));
        assert!(matches!(a.gcd(&b), Err(Error::Config(_))));
    }

    #[test]
    fn division_examples() {
        let f3 = f(3);
        let (q, r) = p(&f3, &[1, 0, 1]).div_rem(&Poly::t(&f3)).unwrap();
        assert_eq!(q, Poly::t(&f3));
        assert_eq!(r, Poly::one(&f3));

        let g = p(&f3, &[1, 2, 0, 1]);
        let (q, r) = g.div_rem(&g).unwrap();
        assert!(q.is_one() && r.is_zero());

        // remainder theorem at T = -1: (-1)^3 + (-1) + 1 = -1 = 2
        let (q, r) = p(&f3, &[1, 1, 0, 1]).div_rem(&Poly::linear(&f3, 1)).unwrap();
        assert_eq!(r, Poly::constant(&f3, 2));
        assert_eq!(&(&q * &Poly::linear(&f3, 1)) + &r, p(&f3, &[1, 1, 0, 1]));

        assert!(matches!(
            g.div_rem(&Poly::zero(&f3)),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn gcd_examples() {
        let f3 = f(3);
        let t = Poly::t(&f3);
        assert_eq!(p(&f3, &[0, 0, 1]).gcd(&t).unwrap(), t);
        assert!(p(&f3, &[2, 1, 1]).gcd(&Poly::one(&f3)).unwrap().is_one());
        assert_eq!(
            p(&f3, &[1, 2, 1]).gcd(&Poly::linear(&f3, 1)).unwrap(),
            Poly::linear(&f3, 1)
        );
        assert!(matches!(
            Poly::zero(&f3).gcd(&Poly::zero(&f3)),
            Err(Error::Domain(_))
        ));
        // non-monic inputs still give a monic gcd
        assert_eq!(t.scale(2).gcd(&p(&f3, &[0, 2, 2])).unwrap(), t);
    }

    #[test]
    fn derivative_examples() {
        let f3 = f(3);
        assert!(p(&f3, &[0, 0, 0, 1]).derivative().is_zero());
        assert!(Poly::linear(&f3, 1).derivative().is_one());
        assert_eq!(p(&f3, &[0, 1, 1]).derivative(), p(&f3, &[1, 2]));
        // characteristic kills T^9 over F_9 as well
        let f9 = f(9);
        let mut c = vec![0; 10];
        c[9] = 5;
        c[2] = 1;
        assert_eq!(p(&f9, &c).derivative(), p(&f9, &[0, 2]));
    }

    #[test]
    fn enumerate_monic_counts_and_order() {
        let f3 = f(3);
        let deg0: Vec<_> = enumerate_monic(&f3, 0).collect();
        assert_eq!(deg0, vec![Poly::one(&f3)]);
        let deg1: Vec<_> = enumerate_monic(&f3, 1).collect();
        assert_eq!(
            deg1,
            vec![Poly::t(&f3), Poly::linear(&f3, 1), Poly::linear(&f3, 2)]
        );
        assert_eq!(enumerate_monic(&f(5), 3).count(), 125);
        let all: std::collections::HashSet<_> = enumerate_monic(&f(5), 3).collect();
        assert_eq!(all.len(), 125);
        let a: Vec<_> = enumerate_monic(&f3, 3).collect();
        let b: Vec<_> = enumerate_monic(&f3, 3).collect();
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        let shard: Vec<_> = enumerate_monic(&f3, 3).range(5, 9).collect();
        assert_eq!(shard, a[5..9].to_vec());
        assert_eq!(enumerate_monic(&f3, 3).nth(7), Some(a[7].clone()));
    }

    #[test]
    fn encoding() {
        let f3 = f(3);
        let g = p(&f3, &[1, 0, 2]);
        assert_eq!(g.encode(), "q3:1,0,2");
        assert_eq!(Poly::parse("q3:1,0,2").unwrap(), g);
        assert_eq!(Poly::zero(&f3).encode(), "q3:0");
        assert!(Poly::parse("q3:0").unwrap().is_zero());
        assert!(Poly::parse("q3:1,0,0").is_err());
        assert!(Poly::parse("q3:1,3").is_err());
        assert!(Poly::parse("3:1").is_err());
        assert!(Poly::parse_in(&f(5), "q3:1,1").is_err());
    }

    #[test]
    fn norm() {
        let f3 = f(3);
        assert_eq!(Poly::zero(&f3).norm(), 0);
        assert_eq!(Poly::one(&f3).norm(), 1);
        assert_eq!(p(&f3, &[1, 0, 2]).norm(), 9);
    }

    #[test]
    fn monic_code_round_trip() {
        let f5 = f(5);
        for code in [0, 1, 17, 124] {
            let g = Poly::from_monic_code(&f5, 3, code);
            assert_eq!(g.degree(), Some(3));
            assert_eq!(g.monic_code(), code);
        }
    }
}
