//! Primes of A = F_q[T] (monic irreducibles), factorization and the arithmetic
//! functions built on it.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};
use crate::poly::{enumerate_monic, mul_slices, Poly};

/// Rabin's test. Constant polynomials are rejected with a domain error.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    let n = match f.degree() {
        None | Some(0) => {
            return Err(Error::domain(format!(
                "irreducibility of the constant {f} is undefined"
            )))
        }
        Some(n) => n,
    };
    if n == 1 {
        return Ok(true);
    }
    let f = f.to_monic();
    let field = f.field();
    let t = Poly::t(field);
    let q = field.q() as u128;

    // frob[j] = T^{q^j} mod f
    let mut frob = vec![t.rem(&f)?];
    for j in 1..=n {
        let next = frob[j - 1].pow_mod(q, &f)?;
        frob.push(next);
    }
    if frob[n] != t.rem(&f)? {
        return Ok(false);
    }
    for r in prime_divisors(n) {
        let h = frob[n / r].try_sub(&t)?;
        if h.is_zero() || !h.gcd(&f)?.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
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

/// All monic irreducibles of degree `1..=max_deg`, each degree sorted by monic code.
#[derive(Clone, Debug)]
pub struct PrimeTable {
    field: FieldSpec,
    max_deg: usize,
    /// `codes[d]` holds the monic codes of the degree-`d` primes; `codes[0]` is empty.
    codes: Vec<Vec<u64>>,
}

impl PrimeTable {
    /// Sieve construction: every reducible monic of degree `n` is `P * g` with
    /// `deg P <= n/2`, so marking those products leaves exactly the primes.
    pub fn build(field: &FieldSpec, max_deg: usize) -> Result<Self> {
        if max_deg == 0 {
            return Err(Error::domain("prime table needs max_deg >= 1"));
        }
        let q = field.q() as u64;
        let mut codes: Vec<Vec<u64>> = vec![Vec::new()];
        for n in 1..=max_deg {
            let size = q
                .checked_pow(n as u32)
                .filter(|&s| s <= 1 << 34)
                .ok_or_else(|| Error::config(format!("prime sieve for q={q}, degree {n} is too large")))?;
            let mut composite = vec![0u64; size.div_ceil(64) as usize];
            let mut g = vec![0 as Elem; 0];
            for (i, primes) in codes.iter().enumerate().take(n / 2 + 1).skip(1) {
                let cofactor_deg = n - i;
                for &pc in primes {
                    let p = Poly::from_monic_code(field, i, pc);
                    for gc in 0..q.pow(cofactor_deg as u32) {
                        decode_monic_into(field, cofactor_deg, gc, &mut g);
                        let prod = mul_slices(field, p.coeffs(), &g);
                        let code = encode_monic(q, &prod);
                        composite[(code / 64) as usize] |= 1 << (code % 64);
                    }
                }
            }
            let primes: Vec<u64> = (0..size)
                .filter(|&c| composite[(c / 64) as usize] & (1 << (c % 64)) == 0)
                .collect();
            codes.push(primes);
        }
        Ok(PrimeTable {
            field: field.clone(),
            max_deg,
            codes,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn max_deg(&self) -> usize {
        self.max_deg
    }

    /// `pi_q(d)`; zero outside `1..=max_deg`.
    pub fn count(&self, d: usize) -> usize {
        self.codes.get(d).map_or(0, Vec::len)
    }

    /// Codes of the degree-`d` primes (see [`Poly::from_monic_code`]).
    pub fn codes(&self, d: usize) -> &[u64] {
        self.codes.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn primes_of_degree(&self, d: usize) -> impl Iterator<Item = Poly> + '_ {
        self.codes(d)
            .iter()
            .map(move |&c| Poly::from_monic_code(&self.field, d, c))
    }

    /// All primes, by degree then code.
    pub fn iter(&self) -> impl Iterator<Item = Poly> + '_ {
        (1..=self.max_deg).flat_map(move |d| self.primes_of_degree(d))
    }

    pub fn len(&self) -> usize {
        self.codes.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, p: &Poly) -> bool {
        match p.degree() {
            Some(d) if d >= 1 && d <= self.max_deg && p.is_monic() => {
                self.codes[d].binary_search(&p.monic_code()).is_ok()
            }
            _ => false,
        }
    }

    /// Position of `p` within its degree class.
    pub fn index_of(&self, p: &Poly) -> Option<usize> {
        let d = p.degree()?;
        if d == 0 || d > self.max_deg || !p.is_monic() {
            return None;
        }
        self.codes[d].binary_search(&p.monic_code()).ok()
    }

    /// `sum_{d | n} d * pi_q(d)`, which must equal `q^n`.
    pub fn necklace_sum(&self, n: usize) -> u128 {
        (1..=n)
            .filter(|d| n % d == 0)
            .map(|d| d as u128 * self.count(d) as u128)
            .sum()
    }

    /// Trial division by the table. Exact whenever `max_deg >= deg(f) / 2`.
    pub fn factorize(&self, f: &Poly) -> Result<Factorization> {
        if f.is_zero() {
            return Err(Error::domain("cannot factor the zero polynomial"));
        }
        let n = f.deg();
        if self.max_deg < n / 2 {
            return Err(Error::config(format!(
                "prime table through degree {} cannot factor degree {n}",
                self.max_deg
            )));
        }
        let unit = f.leading().expect("nonzero");
        let mut rest = f.to_monic();
        let mut factors = Vec::new();
        'outer: for d in 1..=self.max_deg {
            for p in self.primes_of_degree(d) {
                if 2 * d > rest.deg() {
                    break 'outer;
                }
                let e = strip_factor(&mut rest, &p)?;
                if e > 0 {
                    factors.push((p, e));
                }
            }
        }
        if rest.deg() > 0 {
            factors.push((rest, 1));
        }
        factors.sort();
        Ok(Factorization {
            input: f.clone(),
            unit,
            factors,
        })
    }

    /// Cache file name for `(q, max_deg)`.
    pub fn cache_path(dir: &Path, q: u32, max_deg: usize) -> PathBuf {
        dir.join(format!("primes_q{q}_d{max_deg}.txt"))
    }

    /// Header `q=<q> maxdeg=<d>`, then one canonical encoding per line by (degree, code).
    pub fn write_to(&self, w: &mut impl Write) -> Result<()> {
        writeln!(w, "q={} maxdeg={}", self.field.q(), self.max_deg)?;
        for p in self.iter() {
            writeln!(w, "{p}")?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        let mut w = BufWriter::new(fs::File::create(path)?);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn read_from(field: &FieldSpec, r: impl BufRead) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty prime table file".into()))??;
        let (q, max_deg) = parse_header(&header)?;
        if q != field.q() {
            return Err(Error::config(format!(
                "prime table is for q={q}, expected q={}",
                field.q()
            )));
        }
        let mut codes = vec![Vec::new(); max_deg + 1];
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let p = Poly::parse_in(field, &line)?;
            let d = p.deg();
            if !p.is_monic() || d == 0 || d > max_deg {
                return Err(Error::Parse(format!("invalid prime entry {line}")));
            }
            let c = p.monic_code();
            if codes[d].last().is_some_and(|&last| last >= c) {
                return Err(Error::Parse(format!("prime table not sorted at {line}")));
            }
            codes[d].push(c);
        }
        Ok(PrimeTable {
            field: field.clone(),
            max_deg,
            codes,
        })
    }

    /// Loads the cached table for `(q, max_deg)` from `dir`, building and saving it on a miss.
    pub fn load_or_build(field: &FieldSpec, max_deg: usize, dir: &Path) -> Result<Self> {
        let path = Self::cache_path(dir, field.q(), max_deg);
        if path.exists() {
            let table = Self::read_from(field, BufReader::new(fs::File::open(&path)?))?;
            if table.max_deg == max_deg {
                return Ok(table);
            }
        }
        let table = Self::build(field, max_deg)?;
        table.save(&path)?;
        Ok(table)
    }
}

fn parse_header(line: &str) -> Result<(u32, usize)> {
    let bad = || Error::Parse(format!("bad prime table header {line:?}"));
    let mut parts = line.split_whitespace();
    let q = parts
        .next()
        .and_then(|s| s.strip_prefix("q="))
        .and_then(|s| s.parse().ok())
        .ok_or_else(bad)?;
    let d = parts
        .next()
        .and_then(|s| s.strip_prefix("maxdeg="))
        .and_then(|s| s.parse().ok())
        .ok_or_else(bad)?;
    Ok((q, d))
}

fn decode_monic_into(field: &FieldSpec, deg: usize, mut code: u64, out: &mut Vec<Elem>) {
    let q = field.q() as u64;
    out.clear();
    for _ in 0..deg {
        out.push((code % q) as Elem);
        code /= q;
    }
    out.push(1);
}

fn encode_monic(q: u64, coeffs: &[Elem]) -> u64 {
    let n = coeffs.len() - 1;
    coeffs[..n]
        .iter()
        .rev()
        .fold(0, |acc, &c| acc * q + c as u64)
}

/// Divides out every power of `p` from `rest`, returning the exponent.
fn strip_factor(rest: &mut Poly, p: &Poly) -> Result<u32> {
    let mut e = 0;
    loop {
        let (quot, r) = rest.div_rem(p)?;
        if !r.is_zero() {
            return Ok(e);
        }
        *rest = quot;
        e += 1;
    }
}

/// `unit * prod P_i^{e_i}` with the `P_i` distinct monic primes, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub input: Poly,
    pub unit: Elem,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn product(&self) -> Poly {
        let field = self.input.field();
        let mut acc = Poly::constant(field, self.unit);
        for (p, e) in &self.factors {
            for _ in 0..*e {
                acc = &acc * p;
            }
        }
        acc
    }

    pub fn mobius(&self) -> i8 {
        if self.factors.iter().any(|&(_, e)| e > 1) {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Number of prime powers dividing the input, with multiplicity.
    pub fn omega(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn divisor_count(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Whether the monic part is a perfect square.
    pub fn is_square(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e % 2 == 0)
    }

    pub fn distinct_primes(&self) -> impl Iterator<Item = &Poly> {
        self.factors.iter().map(|(p, _)| p)
    }
}

/// Trial division by monic polynomials of increasing degree. Needs no prime table;
/// only primes can divide the cofactor by the time they are reached.
pub fn factorize(f: &Poly) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::domain("cannot factor the zero polynomial"));
    }
    let field = f.field();
    let unit = f.leading().expect("nonzero");
    let mut rest = f.to_monic();
    let mut factors = Vec::new();
    let mut d = 1;
    while 2 * d <= rest.deg() {
        for p in enumerate_monic(field, d) {
            if 2 * d > rest.deg() {
                break;
            }
            let e = strip_factor(&mut rest, &p)?;
            if e > 0 {
                factors.push((p, e));
            }
        }
        d += 1;
    }
    if rest.deg() > 0 {
        factors.push((rest, 1));
    }
    factors.sort();
    Ok(Factorization {
        input: f.clone(),
        unit,
        factors,
    })
}

/// `gcd(f, f') = 1`, falling back to factorization when `f' = 0`.
pub fn is_squarefree(f: &Poly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::domain("squarefreeness of 0 is undefined"));
    }
    if f.deg() == 0 {
        return Ok(true);
    }
    let d = f.derivative();
    if d.is_zero() {
        return Ok(factorize(f)?.is_squarefree());
    }
    Ok(f.gcd(&d)?.is_one())
}

fn require_monic(f: &Poly) -> Result<()> {
    if f.is_monic() {
        Ok(())
    } else {
        Err(Error::domain(format!("{f} is not monic")))
    }
}

pub fn mobius(f: &Poly) -> Result<i8> {
    require_monic(f)?;
    Ok(factorize(f)?.mobius())
}

pub fn omega(f: &Poly) -> Result<u32> {
    require_monic(f)?;
    Ok(factorize(f)?.omega())
}

pub fn divisor_count(f: &Poly) -> Result<u64> {
    require_monic(f)?;
    Ok(factorize(f)?.divisor_count())
}

/// `|H_{2g+1,q}|`: `q^{2g+1} - q^{2g}` for `g >= 1`, and `q` for `g = 0`.
pub fn family_size(q: u32, g: usize) -> u128 {
    let q = q as u128;
    if g == 0 {
        q
    } else {
        q.pow(2 * g as u32 + 1) - q.pow(2 * g as u32)
    }
}

/// Monic codes of the squarefree monic polynomials of degree `2g + 1`, ascending.
pub fn family_codes(field: &FieldSpec, g: usize) -> Vec<u64> {
    let n = 2 * g + 1;
    enumerate_monic(field, n)
        .filter(|f| is_squarefree(f).expect("nonzero"))
        .map(|f| f.monic_code())
        .collect()
}

/// The family `H_{2g+1,q}` of monic squarefree polynomials of degree `2g + 1`,
/// in monic-code order.
pub fn enumerate_h(field: &FieldSpec, g: usize) -> impl Iterator<Item = Poly> {
    enumerate_monic(field, 2 * g + 1).filter(|f| is_squarefree(f).expect("nonzero"))
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
    fn irreducibility_examples() {
        let f3 = f(3);
        assert!(is_irreducible(&Poly::linear(&f3, 1)).unwrap());
        assert!(!is_irreducible(&p(&f3, &[0, 0, 1])).unwrap());
        assert!(is_irreducible(&p(&f3, &[1, 0, 1])).unwrap());
        assert!(!is_irreducible(&p(&f3, &[2, 0, 1])).unwrap()); // (T+1)(T+2)
        assert!(matches!(
            is_irreducible(&Poly::constant(&f3, 2)),
            Err(Error::Domain(_))
        ));
        // x^4 + 1 = (x^2+x+2)(x^2+2x+2) over F_3: no roots, still reducible
        assert!(!is_irreducible(&p(&f3, &[1, 0, 0, 0, 1])).unwrap());
    }

    #[test]
    fn rabin_agrees_with_brute_force() {
        for q in [3, 5] {
            let field = f(q);
            for n in 1..=4 {
                for g in enumerate_monic(&field, n) {
                    let brute = factorize(&g).unwrap().factors == vec![(g.clone(), 1)];
                    assert_eq!(is_irreducible(&g).unwrap(), brute, "{g}");
                }
            }
        }
    }

    #[test]
    fn prime_table_counts() {
        let t3 = PrimeTable::build(&f(3), 3).unwrap();
        assert_eq!(t3.count(1), 3);
        assert_eq!(t3.count(2), 3);
        assert_eq!(t3.count(3), 8);
        let t5 = PrimeTable::build(&f(5), 4).unwrap();
        assert_eq!(t5.count(4), 150);
        for p in t3.iter() {
            assert!(is_irreducible(&p).unwrap());
        }
        let t9 = PrimeTable::build(&f(9), 3).unwrap();
        for p in t9.iter() {
            assert!(is_irreducible(&p).unwrap());
        }
        assert_eq!(t9.count(2), (81 - 9) / 2);
    }

    #[test]
    fn prime_table_cache_round_trip() {
        let field = f(5);
        let dir = tempfile::tempdir().unwrap();
        let built = PrimeTable::load_or_build(&field, 3, dir.path()).unwrap();
        let path = PrimeTable::cache_path(dir.path(), 5, 3);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("q=5 maxdeg=3\nq5:0,1\n"));
        let loaded = PrimeTable::load_or_build(&field, 3, dir.path()).unwrap();
        assert_eq!(loaded.codes, built.codes);
        assert!(PrimeTable::read_from(&f(3), text.as_bytes()).is_err());
    }

    #[test]
    fn squarefree_examples() {
        let f3 = f(3);
        assert!(is_squarefree(&p(&f3, &[0, 1, 1])).unwrap());
        assert!(!is_squarefree(&p(&f3, &[1, 2, 1])).unwrap());
        assert!(is_squarefree(&p(&f3, &[0, 2, 0, 1])).unwrap());
        // derivative vanishes: T^3 + 1 = (T+1)^3
        assert!(!is_squarefree(&p(&f3, &[1, 0, 0, 1])).unwrap());
    }

    #[test]
    fn factorization_examples() {
        let f3 = f(3);
        let fac = factorize(&p(&f3, &[1, 2, 1])).unwrap();
        assert_eq!(fac.factors, vec![(Poly::linear(&f3, 1), 2)]);
        let prime = p(&f3, &[1, 0, 1]);
        assert_eq!(factorize(&prime).unwrap().factors, vec![(prime.clone(), 1)]);
        let g = p(&f3, &[0, 0, 1, 0, 1]); // T^4 + T^2 = T^2 (T^2 + 1)
        let fac = factorize(&g).unwrap();
        assert_eq!(fac.factors, vec![(Poly::t(&f3), 2), (prime, 1)]);
        assert_eq!(fac.mobius(), 0);
        assert_eq!(fac.omega(), 3);
        assert_eq!(fac.divisor_count(), 6);
        let table = PrimeTable::build(&f3, 2).unwrap();
        assert_eq!(table.factorize(&g).unwrap(), fac);
        // non-monic input keeps its unit
        let h = g.scale(2);
        let fac = factorize(&h).unwrap();
        assert_eq!(fac.unit, 2);
        assert_eq!(fac.product(), h);
    }

    #[test]
    fn arithmetic_function_examples() {
        let f3 = f(3);
        let one = Poly::one(&f3);
        assert_eq!(mobius(&one).unwrap(), 1);
        assert_eq!(omega(&one).unwrap(), 0);
        assert_eq!(divisor_count(&one).unwrap(), 1);
        let g = p(&f3, &[0, 1, 1]); // T(T+1)
        assert_eq!(mobius(&g).unwrap(), 1);
        assert_eq!(divisor_count(&g).unwrap(), 4);
        assert!(mobius(&g.scale(2)).is_err());
    }

    #[test]
    fn family_enumeration() {
        let f3 = f(3);
        let h0: Vec<_> = enumerate_h(&f3, 0).collect();
        assert_eq!(
            h0,
            vec![Poly::t(&f3), Poly::linear(&f3, 1), Poly::linear(&f3, 2)]
        );
        assert_eq!(enumerate_h(&f3, 1).count(), 18);
        assert_eq!(enumerate_h(&f(5), 1).count(), 100);
        assert_eq!(family_codes(&f3, 2).len() as u128, family_size(3, 2));
        assert_eq!(family_size(3, 0), 3);
    }

    #[test]
    fn squarefree_matches_mobius_exhaustively() {
        let f3 = f(3);
        for n in 0..=5 {
            for g in enumerate_monic(&f3, n) {
                assert_eq!(is_squarefree(&g).unwrap(), mobius(&g).unwrap() != 0, "{g}");
            }
        }
    }
}
