//! The quadratic residue symbol over `F_q[T]` and the characters `chi_D = (D / .)`.

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};
use crate::poly::{rem_assign, Poly};
use crate::primes::{is_irreducible, PrimeTable};

/// `(f / P)` for a monic prime `P`, by Euler's criterion `f^{(|P|-1)/2} mod P`.
pub fn legendre_prime(f: &Poly, p: &Poly) -> Result<i8> {
    if !p.is_monic() || p.deg() == 0 {
        return Err(Error::domain(format!("{p} is not a monic prime")));
    }
    if !is_irreducible(p)? {
        return Err(Error::domain(format!("{p} is reducible")));
    }
    let r = f.rem(p)?;
    if r.is_zero() {
        return Ok(0);
    }
    let e = (p.norm() - 1) / 2;
    let v = r.pow_mod(e, p)?;
    if v.is_one() {
        Ok(1)
    } else if v == Poly::constant(f.field(), f.field().minus_one()) {
        Ok(-1)
    } else {
        unreachable!("Euler criterion produced {v}")
    }
}

/// Jacobi symbol `(c / d)` for monic `c`, `d`, computed Euclid-style with reciprocity
/// and the constant rule; no factorization involved.
pub fn jacobi(c: &Poly, d: &Poly) -> Result<i8> {
    check_monic_pair(c, d)?;
    Ok(symbol_raw(
        c.field(),
        c.coeffs().to_vec(),
        d.coeffs().to_vec(),
        None,
    ))
}

/// Like [`jacobi`], also returning a human-readable trace of the reduction steps.
pub fn jacobi_with_trace(c: &Poly, d: &Poly) -> Result<(i8, Vec<String>)> {
    check_monic_pair(c, d)?;
    let mut trace = Vec::new();
    let v = symbol_raw(
        c.field(),
        c.coeffs().to_vec(),
        d.coeffs().to_vec(),
        Some(&mut trace),
    );
    Ok((v, trace))
}

fn check_monic_pair(c: &Poly, d: &Poly) -> Result<()> {
    if !c.field().same_field(d.field()) {
        return Err(Error::config("symbol arguments over different fields"));
    }
    for (name, x) in [("numerator", c), ("denominator", d)] {
        if !x.is_monic() {
            return Err(Error::domain(format!("{name} {x} must be monic and nonzero")));
        }
    }
    Ok(())
}

/// `(a / b)` for monic `b` and arbitrary `a`.
pub(crate) fn symbol_raw(
    field: &FieldSpec,
    mut a: Vec<Elem>,
    mut b: Vec<Elem>,
    mut trace: Option<&mut Vec<String>>,
) -> i8 {
    let q = field.q();
    let half_odd = ((q - 1) / 2) % 2 == 1;
    let show = |v: &[Elem]| Poly::from_raw(field, v.to_vec()).to_string();
    let mut sign: i8 = 1;
    loop {
        if b.len() == 1 {
            if let Some(t) = trace.as_deref_mut() {
                t.push(format!("denominator is 1: result {sign}"));
            }
            return sign;
        }
        rem_assign(field, &mut a, &b);
        if a.is_empty() {
            if let Some(t) = trace.as_deref_mut() {
                t.push(format!("numerator vanishes mod {}: result 0", show(&b)));
            }
            return 0;
        }
        let deg_b = b.len() - 1;
        let lead = *a.last().expect("nonzero");
        if lead != 1 {
            let inv = field.inv(lead).expect("nonzero");
            for x in a.iter_mut() {
                *x = field.mul(*x, inv);
            }
            if deg_b % 2 == 1 {
                sign *= field.quadratic_character(lead);
            }
            if let Some(t) = trace.as_deref_mut() {
                t.push(format!(
                    "constant rule: ({lead} / {}) = {}^{deg_b}",
                    show(&b),
                    field.quadratic_character(lead)
                ));
            }
        }
        let deg_a = a.len() - 1;
        if deg_a == 0 {
            if let Some(t) = trace.as_deref_mut() {
                t.push(format!("numerator is 1: result {sign}"));
            }
            return sign;
        }
        let flip = half_odd && deg_a % 2 == 1 && deg_b % 2 == 1;
        if flip {
            sign = -sign;
        }
        if let Some(t) = trace.as_deref_mut() {
            t.push(format!(
                "reciprocity: ({} / {}) = ({} / {}) * {}",
                show(&a),
                show(&b),
                show(&b),
                show(&a),
                if flip { -1 } else { 1 }
            ));
        }
        std::mem::swap(&mut a, &mut b);
    }
}

/// `chi_D(f) = (D / f)` for monic nonzero `f`.
pub fn chi_eval(d: &Poly, f: &Poly) -> Result<i8> {
    if f.is_zero() {
        return Err(Error::domain("chi_D(0) is undefined"));
    }
    jacobi(d, f)
}

/// `chi_D` with its values at every prime of a [`PrimeTable`] cached at construction.
#[derive(Clone, Debug)]
pub struct QuadraticCharacter {
    modulus: Poly,
    max_deg: usize,
    /// `values[d][i] = chi_D(P)` for the `i`-th prime of degree `d`.
    values: Vec<Vec<i8>>,
}

impl QuadraticCharacter {
    /// Fills the cache with the Euclid-style symbol, one call per prime.
    pub fn new(modulus: &Poly, table: &PrimeTable) -> Result<Self> {
        Self::check_modulus(modulus, table.field())?;
        let field = table.field();
        let values = (0..=table.max_deg())
            .map(|d| {
                table
                    .primes_of_degree(d)
                    .map(|p| symbol_raw(field, modulus.coeffs().to_vec(), p.coeffs().to_vec(), None))
                    .collect()
            })
            .collect();
        Ok(QuadraticCharacter {
            modulus: modulus.clone(),
            max_deg: table.max_deg(),
            values,
        })
    }

    /// Fills the cache by evaluating `D` at a root of each prime (see [`PrimeRoots`]).
    pub fn with_roots(modulus: &Poly, roots: &PrimeRoots) -> Result<Self> {
        Self::with_roots_to(modulus, roots, roots.max_deg())
    }

    /// As [`QuadraticCharacter::with_roots`], only for primes of degree `<= max_deg`.
    pub fn with_roots_to(modulus: &Poly, roots: &PrimeRoots, max_deg: usize) -> Result<Self> {
        Self::check_modulus(modulus, &roots.field)?;
        if max_deg > roots.max_deg() {
            return Err(Error::config(format!(
                "root tables reach degree {}, not {max_deg}",
                roots.max_deg()
            )));
        }
        let mut values = vec![Vec::new()];
        for ext in &roots.degrees[..max_deg] {
            values.push(ext.symbols(modulus.coeffs()));
        }
        Ok(QuadraticCharacter {
            modulus: modulus.clone(),
            max_deg,
            values,
        })
    }

    fn check_modulus(modulus: &Poly, field: &FieldSpec) -> Result<()> {
        if !modulus.field().same_field(field) {
            return Err(Error::config("modulus and prime table use different fields"));
        }
        if !modulus.is_monic() {
            return Err(Error::domain(format!("modulus {modulus} must be monic")));
        }
        Ok(())
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn max_deg(&self) -> usize {
        self.max_deg
    }

    /// Cached values at the degree-`d` primes, in table order.
    pub fn values_of_degree(&self, d: usize) -> &[i8] {
        self.values.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn prime_value(&self, table: &PrimeTable, p: &Poly) -> Option<i8> {
        let idx = table.index_of(p)?;
        Some(self.values[p.deg()][idx])
    }

    /// `chi_D(f)` from the factorization of `f` and the cached prime values.
    pub fn eval_multiplicative(&self, table: &PrimeTable, f: &Poly) -> Result<i8> {
        if !f.is_monic() {
            return Err(Error::domain(format!("{f} must be monic")));
        }
        let fac = table.factorize(f)?;
        let mut v = 1i8;
        for (p, e) in &fac.factors {
            let x = match self.prime_value(table, p) {
                Some(x) => x,
                None => symbol_raw(f.field(), self.modulus.coeffs().to_vec(), p.coeffs().to_vec(), None),
            };
            v *= x.pow(*e);
        }
        Ok(v)
    }

    /// `chi_D(f)` directly.
    pub fn eval(&self, f: &Poly) -> Result<i8> {
        chi_eval(&self.modulus, f)
    }
}

const ZERO: u32 = u32::MAX;

/// For each degree `d`, the field `F_{q^d} = F_q[T]/(M_d)` with `T` primitive, in
/// log/Zech form, and a root (as a discrete log) of every degree-`d` prime.
///
/// Then `chi_D(P) = (D / P)` is the quadratic character of `D(beta_P)` in `F_{q^d}`,
/// i.e. the parity of its discrete log.
#[derive(Clone, Debug)]
pub struct PrimeRoots {
    field: FieldSpec,
    degrees: Vec<ExtField>,
}

#[derive(Clone, Debug)]
struct ExtField {
    order: u32,
    half: u32,
    zech: Vec<u32>,
    const_log: Vec<u32>,
    roots: Vec<u32>,
}

impl PrimeRoots {
    /// Builds root tables for primes of degree `1..=max_deg` (at most the table's degree).
    pub fn new(table: &PrimeTable, max_deg: usize) -> Result<Self> {
        if max_deg > table.max_deg() {
            return Err(Error::config(format!(
                "prime table through degree {} cannot supply roots through {max_deg}",
                table.max_deg()
            )));
        }
        let field = table.field().clone();
        let q = field.q() as u64;
        if q.checked_pow(max_deg as u32).map_or(true, |s| s > (1 << 31)) {
            return Err(Error::config(format!(
                "root tables for q={q}, degree {max_deg} are too large"
            )));
        }
        let degrees = (1..=max_deg)
            .map(|d| ExtField::build(&field, table, d))
            .collect::<Result<_>>()?;
        Ok(PrimeRoots { field, degrees })
    }

    pub fn max_deg(&self) -> usize {
        self.degrees.len()
    }
}

impl ExtField {
    fn build(field: &FieldSpec, table: &PrimeTable, d: usize) -> Result<Self> {
        let q = field.q();
        let size = (q as u64).pow(d as u32) as usize;
        let order = (size - 1) as u32;
        let t = Poly::t(field);
        let factors = distinct_prime_factors(order as u64);
        let modulus = table
            .primes_of_degree(d)
            .find(|m| {
                t.pow_mod(order as u128, m).expect("nonzero modulus").is_one()
                    && factors.iter().all(|&r| {
                    !t.pow_mod((order as u64 / r) as u128, m)
                        .expect("nonzero modulus")
                        .is_one()
                })
            })
            .ok_or_else(|| Error::config(format!("no primitive prime of degree {d}")))?;
        let m = modulus.coeffs();

        // exp[l] = code of T^l mod M
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![ZERO; size];
        let mut x = vec![0 as Elem; d];
        x[0] = 1;
        for (l, slot) in exp.iter_mut().enumerate() {
            let code = x.iter().rev().fold(0u32, |acc, &c| acc * q + c as u32);
            *slot = code;
            log[code as usize] = l as u32;
            let top = x[d - 1];
            for j in (1..d).rev() {
                x[j] = x[j - 1];
            }
            x[0] = 0;
            if top != 0 {
                let ntop = field.neg(top);
                for j in 0..d {
                    x[j] = field.add(x[j], field.mul(ntop, m[j]));
                }
            }
        }
        let zech: Vec<u32> = exp
            .iter()
            .map(|&code| {
                let c0 = code % q;
                let shifted = code - c0 + field.add(c0 as Elem, 1) as u32;
                log[shifted as usize]
            })
            .collect();
        let const_log: Vec<u32> = (0..q).map(|c| log[c as usize]).collect();

        let mut ext = ExtField {
            order,
            half: order / 2,
            zech,
            const_log,
            roots: vec![ZERO; table.count(d)],
        };

        // Walk Frobenius orbits; an orbit of size d is the root set of a degree-d prime.
        let mut seen = vec![false; order as usize];
        // the prime T has the root 0, which has no discrete log; ZERO already encodes it
        let mut found = usize::from(d == 1);
        let codes = table.codes(d);
        for l in 0..order {
            if seen[l as usize] {
                continue;
            }
            let mut orbit = vec![l];
            let mut c = (l as u64 * q as u64 % order as u64) as u32;
            while c != l {
                orbit.push(c);
                c = (c as u64 * q as u64 % order as u64) as u32;
            }
            for &c in &orbit {
                seen[c as usize] = true;
            }
            if orbit.len() != d {
                continue;
            }
            let minpoly = ext.minimal_polynomial(&orbit);
            let coeffs: Vec<Elem> = minpoly
                .iter()
                .map(|&lg| {
                    let code = if lg == ZERO { 0 } else { exp[lg as usize] };
                    debug_assert!(code < q, "minimal polynomial left F_q");
                    code as Elem
                })
                .collect();
            let code = coeffs[..d]
                .iter()
                .rev()
                .fold(0u64, |acc, &c| acc * q as u64 + c as u64);
            let idx = codes
                .binary_search(&code)
                .map_err(|_| Error::Numerical(format!("orbit polynomial missing from table at degree {d}")))?;
            ext.roots[idx] = l;
            found += 1;
            if found == codes.len() {
                break;
            }
        }
        if found != codes.len() {
            return Err(Error::Numerical(format!(
                "found roots for {found} of {} primes of degree {d}",
                codes.len()
            )));
        }
        Ok(ext)
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == ZERO || b == ZERO {
            return ZERO;
        }
        let s = a + b;
        if s >= self.order {
            s - self.order
        } else {
            s
        }
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        if a == ZERO {
            return b;
        }
        if b == ZERO {
            return a;
        }
        let diff = if b >= a { b - a } else { b + self.order - a };
        let z = self.zech[diff as usize];
        if z == ZERO {
            ZERO
        } else {
            self.mul(a, z)
        }
    }

    #[inline]
    fn neg(&self, a: u32) -> u32 {
        self.mul(a, self.half)
    }

    /// `prod (X - g^l)` over the orbit, as logs of the coefficients, constant term first.
    fn minimal_polynomial(&self, orbit: &[u32]) -> Vec<u32> {
        let mut poly = vec![0u32]; // the constant 1
        for &root in orbit {
            let nr = self.neg(root);
            let mut next = vec![ZERO; poly.len() + 1];
            for (i, &c) in poly.iter().enumerate() {
                next[i + 1] = self.add(next[i + 1], c);
                next[i] = self.add(next[i], self.mul(c, nr));
            }
            poly = next;
        }
        poly
    }

    /// `(D / P)` for every prime `P` of this degree.
    fn symbols(&self, d_coeffs: &[Elem]) -> Vec<i8> {
        let logs: Vec<u32> = d_coeffs
            .iter()
            .map(|&c| if c == 0 { ZERO } else { self.const_log[c as usize] })
            .collect();
        self.roots
            .iter()
            .map(|&beta| {
                let mut acc = ZERO;
                for &c in logs.iter().rev() {
                    acc = self.add(self.mul(acc, beta), c);
                }
                if acc == ZERO {
                    0
                } else if acc % 2 == 0 {
                    1
                } else {
                    -1
                }
            })
            .collect()
    }
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::enumerate_monic;
    use crate::primes::{enumerate_h, factorize};

    fn f(q: u32) -> FieldSpec {
        FieldSpec::new(q).unwrap()
    }

    #[test]
    fn legendre_examples() {
        let f3 = f(3);
        let t = Poly::t(&f3);
        assert_eq!(legendre_prime(&Poly::linear(&f3, 1), &t).unwrap(), 1);
        assert_eq!(legendre_prime(&t, &t).unwrap(), 0);
        assert_eq!(legendre_prime(&t, &Poly::linear(&f3, 1)).unwrap(), -1);
        let reducible = Poly::new(&f3, vec![2, 0, 1]).unwrap();
        assert!(matches!(legendre_prime(&t, &reducible), Err(Error::Domain(_))));
    }

    #[test]
    fn jacobi_examples() {
        let f3 = f(3);
        let t = Poly::t(&f3);
        let t1 = Poly::linear(&f3, 1);
        assert_eq!(jacobi(&t, &t1).unwrap(), -1);
        // reciprocity route: (T+1 / T) * (-1)^{1*1*1}
        assert_eq!(jacobi(&t1, &t).unwrap() * -1, -1);
        let c = &t * &t1;
        assert_eq!(jacobi(&c, &t).unwrap(), 0);
        let sq = &t1 * &t1;
        let d = Poly::new(&f3, vec![1, 0, 1]).unwrap();
        assert_eq!(jacobi(&sq, &d).unwrap(), 1);
        assert!(matches!(jacobi(&t.scale(2), &t1), Err(Error::Domain(_))));
    }

    #[test]
    fn chi_examples() {
        let f3 = f(3);
        let t = Poly::t(&f3);
        assert_eq!(chi_eval(&t, &Poly::one(&f3)).unwrap(), 1);
        assert_eq!(chi_eval(&t, &Poly::linear(&f3, 2)).unwrap(), 1);
        assert!(chi_eval(&t, &Poly::zero(&f3)).is_err());
        let g = Poly::linear(&f3, 1);
        assert_eq!(chi_eval(&t, &(&g * &g)).unwrap(), 1);
    }

    /// Oracle: multiply Euler-criterion symbols over the factorization of `d`.
    fn jacobi_by_factoring(c: &Poly, d: &Poly) -> i8 {
        factorize(d)
            .unwrap()
            .factors
            .iter()
            .map(|(p, e)| legendre_prime(c, p).unwrap().pow(*e))
            .product()
    }

    #[test]
    fn jacobi_matches_factorization_oracle_q3() {
        let f3 = f(3);
        let polys: Vec<Poly> = (0..=4).flat_map(|n| enumerate_monic(&f3, n)).collect();
        for d in &polys {
            for c in &polys {
                assert_eq!(jacobi(c, d).unwrap(), jacobi_by_factoring(c, d), "({c} / {d})");
            }
        }
    }

    #[test]
    fn trace_reports_steps() {
        let f3 = f(3);
        let (v, trace) = jacobi_with_trace(&Poly::t(&f3), &Poly::linear(&f3, 1)).unwrap();
        assert_eq!(v, -1);
        assert!(!trace.is_empty());
    }

    #[test]
    fn cached_character_matches_symbol() {
        for q in [3, 5, 9] {
            let field = f(q);
            let table = PrimeTable::build(&field, 4).unwrap();
            let roots = PrimeRoots::new(&table, 4).unwrap();
            for d in enumerate_h(&field, 1).step_by(7) {
                let slow = QuadraticCharacter::new(&d, &table).unwrap();
                let fast = QuadraticCharacter::with_roots(&d, &roots).unwrap();
                for n in 1..=4 {
                    assert_eq!(slow.values_of_degree(n), fast.values_of_degree(n), "D={d} deg {n}");
                }
                for (n, p) in table.iter().enumerate().step_by(5) {
                    let _ = n;
                    let v = slow.prime_value(&table, &p).unwrap();
                    assert_eq!(v, legendre_prime(&d, &p).unwrap());
                    assert_eq!(v == 0, d.rem(&p).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn multiplicative_evaluation_matches_direct() {
        let field = f(5);
        let table = PrimeTable::build(&field, 3).unwrap();
        for d in enumerate_h(&field, 1).step_by(11) {
            let chi = QuadraticCharacter::new(&d, &table).unwrap();
            for g in (1..=4).flat_map(|n| enumerate_monic(&field, n)).step_by(3) {
                assert_eq!(
                    chi.eval_multiplicative(&table, &g).unwrap(),
                    chi.eval(&g).unwrap(),
                    "D={d} f={g}"
                );
            }
        }
    }
}
