//! Checks of the prime-sum estimates, the family averages of `(D/f)`, and the explicit
//! upper bounds for `log |L|`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lfunction::{character_sum_of_degree, reduce_angle, zeta_abs_at_angle, LPolynomial};
use crate::moments::bar_theta;
use crate::poly::{enumerate_monic, Poly};
use crate::primes::{factorize, Factorization, PrimeTable};
use crate::sweep::{Family, KahanSum, SweepOptions};
use crate::symbol::{chi_eval, QuadraticCharacter};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MertensReport {
    pub q: u32,
    /// `x = q^n`.
    pub n: usize,
    /// `sum_{|P| <= x} ln|P| / |P|`.
    pub sum: f64,
    /// `ln x`.
    pub main: f64,
    pub residual: f64,
    /// `sum_{|P| <= x} 1/|P| - ln ln x`.
    pub b_estimate: f64,
}

fn check_depth(table: &PrimeTable, n: usize) -> Result<()> {
    if table.max_deg() < n {
        return Err(Error::config(format!(
            "prime table through degree {} is too short for cutoff q^{n}",
            table.max_deg()
        )));
    }
    Ok(())
}

/// `sum_{|P| <= q^n} ln|P|/|P|` against `ln x`.
pub fn mertens_log(table: &PrimeTable, n: usize) -> Result<MertensReport> {
    check_depth(table, n)?;
    let q = table.field().q();
    let lq = (q as f64).ln();
    let mut sum = KahanSum::new();
    let mut recip = KahanSum::new();
    for d in 1..=n {
        let w = table.count(d) as f64 / (q as f64).powi(d as i32);
        sum.add(w * d as f64 * lq);
        recip.add(w);
    }
    let main = n as f64 * lq;
    Ok(MertensReport {
        q,
        n,
        sum: sum.value(),
        main,
        residual: sum.value() - main,
        b_estimate: recip.value() - main.ln(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MertensCosReport {
    pub q: u32,
    pub n: usize,
    pub alpha: f64,
    /// `sum_{|P| <= x} cos(alpha ln|P|) / |P|`.
    pub sum: f64,
    /// `ln |zeta_A(1 + 1/ln x + i alpha)|`.
    pub zeta_term: f64,
    /// `ln min(ln x, 1/bar(alpha ln q))`.
    pub min_term: f64,
    pub residual_zeta: f64,
    pub residual_min: f64,
}

pub fn mertens_cos(table: &PrimeTable, n: usize, alpha: f64) -> Result<MertensCosReport> {
    check_depth(table, n)?;
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::domain(format!("alpha = {alpha} must be nonnegative")));
    }
    let q = table.field().q();
    let lq = (q as f64).ln();
    // the sum only sees alpha ln q modulo 2 pi
    let phi = reduce_angle(alpha * lq);
    let mut sum = KahanSum::new();
    for d in 1..=n {
        sum.add(table.count(d) as f64 * (d as f64 * phi).cos() / (q as f64).powi(d as i32));
    }
    let lx = n as f64 * lq;
    let zeta_term = zeta_abs_at_angle(q, phi, lx).ln();
    let b = bar_theta(phi);
    let min_term = if b == 0.0 { lx } else { lx.min(1.0 / b) }.ln();
    Ok(MertensCosReport {
        q,
        n,
        alpha,
        sum: sum.value(),
        zeta_term,
        min_term,
        residual_zeta: sum.value() - zeta_term,
        residual_min: sum.value() - min_term,
    })
}

/// `I(f) = prod_{P | f} (1 - 1/(2|P|))`.
pub fn i_weight(fac: &Factorization) -> f64 {
    fac.distinct_primes()
        .map(|p| 1.0 - 0.5 / p.norm() as f64)
        .product()
}

/// The weights of the explicit bound for `sum_j a_j log|I(D) L(sigma + i t_j)|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightFunctions {
    pub q: u32,
    pub a: Vec<f64>,
    pub theta: Vec<f64>,
    /// Cutoff `x = q^n`.
    pub n: usize,
}

impl WeightFunctions {
    pub fn new(q: u32, a: Vec<f64>, theta: Vec<f64>, n: usize) -> Result<Self> {
        if a.len() != theta.len() || a.is_empty() {
            return Err(Error::domain("need matching nonempty a and theta"));
        }
        if a.iter().any(|x| !(*x >= 0.0)) {
            return Err(Error::domain("exponents must be nonnegative"));
        }
        if n == 0 {
            return Err(Error::domain("cutoff x must be at least q"));
        }
        Ok(WeightFunctions { q, a, theta, n })
    }

    /// `a = sum a_j`.
    pub fn a_total(&self) -> f64 {
        self.a.iter().sum()
    }

    /// `H(f) = (1/2) Re sum_m a_m |f|^{-i t_m}`, which depends only on `deg f`.
    pub fn h(&self, deg: usize) -> f64 {
        0.5 * self
            .a
            .iter()
            .zip(&self.theta)
            .map(|(a, t)| a * (t * deg as f64).cos())
            .sum::<f64>()
    }

    /// `s(P, x) = ln(x/|P|) / ln x`.
    pub fn s(&self, deg: usize) -> f64 {
        (self.n as f64 - deg as f64) / self.n as f64
    }

    /// `|P|^{-1/ln x}`.
    fn damp(&self, deg: usize) -> f64 {
        (-(deg as f64) / self.n as f64).exp()
    }

    /// `H(P, x) = 2 H(P) / (a |P|^{1/ln x})`.
    pub fn h_px(&self, deg: usize) -> f64 {
        2.0 * self.h(deg) / self.a_total() * self.damp(deg)
    }

    /// `H_1(P, x) = 4 H(P^2) / (a^2 |P|^{2/ln x})`.
    pub fn h1_px(&self, deg: usize) -> f64 {
        4.0 * self.h(2 * deg) / self.a_total().powi(2) * self.damp(deg).powi(2)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharAvgReport {
    pub q: u32,
    pub g: usize,
    pub f: String,
    pub k: f64,
    pub lhs: f64,
    pub main: f64,
    pub residual: f64,
    /// `X^{1/2} |f|^{1/4}`.
    pub scale: f64,
    pub normalized: f64,
    /// Bound on the error of the truncated Euler product in `main` (0 if exact).
    pub truncation: f64,
}

fn require_monic_nonzero(f: &Poly) -> Result<()> {
    if !f.is_monic() {
        return Err(Error::domain(format!("{f} must be monic and nonzero")));
    }
    Ok(())
}

fn scale(x: f64, f: &Poly) -> f64 {
    x.sqrt() * (f.norm() as f64).powf(0.25)
}

/// `sum_D (D/f)` against `delta_{f = square} X/zeta_A(2) prod_{P|f} |P|/(|P|+1)`.
pub fn charavg_plain(family: &Family, f: &Poly) -> Result<CharAvgReport> {
    require_monic_nonzero(f)?;
    let lhs: i64 = (0..family.len())
        .map(|i| chi_eval(&family.discriminant(i), f).map(i64::from))
        .sum::<Result<i64>>()?;
    let fac = factorize(f)?;
    let q = family.q() as f64;
    let main = if fac.is_square() {
        family.x() * (1.0 - 1.0 / q)
            * fac
                .distinct_primes()
                .map(|p| {
                    let n = p.norm() as f64;
                    n / (n + 1.0)
                })
                .product::<f64>()
    } else {
        0.0
    };
    let residual = lhs as f64 - main;
    let scale = scale(family.x(), f);
    Ok(CharAvgReport {
        q: family.q(),
        g: family.g(),
        f: f.encode(),
        k: 0.0,
        lhs: lhs as f64,
        main,
        residual,
        scale,
        normalized: residual.abs() / scale,
        truncation: 0.0,
    })
}

/// `ln[(1 - y)(1 + y (1 - y/2)^{-k})]` for `y = 1/|P|`.
fn weighted_local_log(y: f64, k: f64) -> f64 {
    (-y).ln_1p() + (y * (1.0 - y / 2.0).powf(-k)).ln_1p()
}

/// Bound on `sum_{deg P > cutoff} |weighted_local_log(1/|P|)|`, using `pi_q(d) <= q^d/d`
/// and `|ln F(y)| <= y^2 [(k/2)(1-y/2)^{-k-1} + 1/(2(1-y)) + (1-y/2)^{-2k}/2]`.
pub fn weighted_tail_bound(q: u32, cutoff: usize, k: f64) -> f64 {
    let q = q as f64;
    let y0 = q.powi(-(cutoff as i32 + 1));
    let c = k / 2.0 * (1.0 - y0 / 2.0).powf(-k - 1.0)
        + 0.5 / (1.0 - y0)
        + 0.5 * (1.0 - y0 / 2.0).powf(-2.0 * k);
    c * y0 / ((cutoff + 1) as f64 * (1.0 - 1.0 / q))
}

/// `sum_D I(D)^{-k} (D/f)` against the main term
/// `delta X prod_P (1 - |P|^{-1})(1 + I(P)^{-k}|P|^{-1}) prod_{P|f} (1 + I(P)^{-k}|P|^{-1})^{-1}`,
/// with the product over `P` truncated at `deg P <= cutoff` (the table must reach it).
pub fn charavg_weighted(family: &Family, table: &PrimeTable, f: &Poly, k: f64, cutoff: usize) -> Result<CharAvgReport> {
    require_monic_nonzero(f)?;
    check_depth(table, cutoff)?;
    let mut lhs = KahanSum::new();
    for i in 0..family.len() {
        let d = family.discriminant(i);
        let chi = chi_eval(&d, f)?;
        if chi != 0 {
            let w = i_weight(&family.table().factorize(&d)?).powf(-k);
            lhs.add(w * chi as f64);
        }
    }
    let fac = factorize(f)?;
    let q = family.q();
    let (main, truncation) = if fac.is_square() {
        let mut log = KahanSum::new();
        for d in 1..=cutoff {
            let y = (q as f64).powi(-(d as i32));
            log.add(table.count(d) as f64 * weighted_local_log(y, k));
        }
        let local: f64 = fac
            .distinct_primes()
            .map(|p| {
                let y = 1.0 / p.norm() as f64;
                1.0 / (1.0 + y * (1.0 - y / 2.0).powf(-k))
            })
            .product();
        let main = family.x() * log.value().exp() * local;
        (main, main * weighted_tail_bound(q, cutoff, k).exp_m1())
    } else {
        (0.0, 0.0)
    };
    let residual = lhs.value() - main;
    let scale = scale(family.x(), f);
    Ok(CharAvgReport {
        q,
        g: family.g(),
        f: f.encode(),
        k,
        lhs: lhs.value(),
        main,
        residual,
        scale,
        normalized: residual.abs() / scale,
        truncation,
    })
}

/// Largest normalized residual of [`charavg_plain`] over all monic `f` with `deg f <= max_deg`.
pub fn charavg_sweep(family: &Family, max_deg: usize) -> Result<(f64, Vec<CharAvgReport>)> {
    let mut reports = Vec::new();
    for n in 0..=max_deg {
        for f in enumerate_monic(family.field(), n) {
            reports.push(charavg_plain(family, &f)?);
        }
    }
    let worst = reports.iter().map(|r| r.normalized).fold(0.0, f64::max);
    Ok((worst, reports))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prop31Check {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    /// `L` vanishes at the point, so `lhs = -inf`.
    pub vanished: bool,
}

/// Sums `chi_D(P)` and `chi_D(P)^2` over the primes of each degree.
fn degree_sums(chi: &QuadraticCharacter, top: usize) -> (Vec<i64>, Vec<i64>) {
    let mut s1 = vec![0; top + 1];
    let mut s2 = vec![0; top + 1];
    for d in 1..=top {
        for &v in chi.values_of_degree(d) {
            s1[d] += v as i64;
            s2[d] += (v * v) as i64;
        }
    }
    (s1, s2)
}

/// `log|L(sigma + it)| <= m/h + (1/h) Re sum_{j deg P <= h} chi_D(P^j) ln q^{h - j deg P}
/// / (|P|^{j(sigma + it + 1/(h ln q))} ln q^j)` with `m = 2g + 1` and `theta = t ln q`.
pub fn prop31_check(l: &LPolynomial, chi: &QuadraticCharacter, h: usize, sigma: f64, theta: f64) -> Result<Prop31Check> {
    let m = 2 * l.g + 1;
    if h == 0 || h > m {
        return Err(Error::domain(format!("h = {h} must lie in 1..={m}")));
    }
    if !(sigma >= 0.5) {
        return Err(Error::domain(format!("sigma = {sigma} is below 1/2")));
    }
    if chi.max_deg() < h {
        return Err(Error::config(format!(
            "character cache through degree {} is too short for h = {h}",
            chi.max_deg()
        )));
    }
    let q = l.q as f64;
    let u = num_complex::Complex64::from_polar(q.powf(-sigma), -theta);
    let value = l.eval_u(u).norm();
    let vanished = value == 0.0;
    let lhs = value.ln();
    let (s1, s2) = degree_sums(chi, h);
    let mut sum = KahanSum::new();
    for d in 1..=h {
        for j in 1..=h / d {
            let jd = (j * d) as f64;
            let chi_sum = if j % 2 == 1 { s1[d] } else { s2[d] } as f64;
            let weight = (h - j * d) as f64 / j as f64;
            let decay = q.powf(-jd * sigma) * (-jd / h as f64).exp() * (jd * theta).cos();
            sum.add(chi_sum * weight * decay);
        }
    }
    let rhs = m as f64 / h as f64 + sum.value() / h as f64;
    Ok(Prop31Check {
        lhs,
        rhs,
        slack: rhs - lhs,
        vanished,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prop31Summary {
    pub q: u32,
    pub g: usize,
    pub checked: u64,
    pub vanished: u64,
    pub min_slack: f64,
    pub violations: u64,
    /// `(D, h, theta)` at the smallest slack.
    pub worst: Option<(String, usize, f64)>,
}

/// Runs [`prop31_check`] over the family on a grid of `h` and `theta` (at `sigma = 1/2`).
pub fn prop31_suite(family: &Family, hs: &[usize], thetas: &[f64], opts: &SweepOptions) -> Result<Prop31Summary> {
    #[derive(Serialize, Deserialize)]
    struct Part {
        checked: u64,
        vanished: u64,
        min_slack: f64,
        violations: u64,
        worst: Option<(usize, usize, f64)>,
    }
    let task = format!("prop31 h={hs:?} theta={thetas:?}");
    let parts = family.run(opts, &task, |range| {
        let mut p = Part {
            checked: 0,
            vanished: 0,
            min_slack: f64::INFINITY,
            violations: 0,
            worst: None,
        };
        for i in range {
            let chi = family.character(i);
            let l = crate::lfunction::lpoly_from_character(&chi, family.g())?;
            for &h in hs {
                for &t in thetas {
                    let c = prop31_check(&l, &chi, h, 0.5, t)?;
                    p.checked += 1;
                    p.vanished += u64::from(c.vanished);
                    if c.slack < -1e-9 {
                        p.violations += 1;
                    }
                    if c.slack < p.min_slack {
                        p.min_slack = c.slack;
                        p.worst = Some((i, h, t));
                    }
                }
            }
        }
        Ok(p)
    })?;
    let mut s = Prop31Summary {
        q: family.q(),
        g: family.g(),
        checked: 0,
        vanished: 0,
        min_slack: f64::INFINITY,
        violations: 0,
        worst: None,
    };
    for p in parts {
        s.checked += p.checked;
        s.vanished += p.vanished;
        s.violations += p.violations;
        if p.min_slack < s.min_slack {
            s.min_slack = p.min_slack;
            s.worst = p.worst.map(|(i, h, t)| (family.discriminant(i).encode(), h, t));
        }
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prop32Report {
    pub q: u32,
    pub g: usize,
    pub n: usize,
    pub sigma: f64,
    pub a: Vec<f64>,
    pub theta: Vec<f64>,
    pub max_delta: f64,
    pub min_delta: f64,
    pub argmax: Option<String>,
    /// Discriminants skipped because `L` vanished at a shift.
    pub vanished: u64,
}

/// `Delta(D) = sum_j a_j log|I(D) L(sigma + i t_j)|` minus the explicit terms
/// `2 sum_{|P|<=x} H(P) chi_D(P) |P|^{-sigma-1/ln x} ln(x/|P|)/ln x
///  + sum_{|P|<=x^{1/2}} H(P^2)|P|^{-2 sigma} + a ln X/ln x`, maximized over the family.
pub fn prop32_residual(family: &Family, w: &WeightFunctions, sigma: f64, opts: &SweepOptions) -> Result<Prop32Report> {
    let g = family.g();
    if w.n > 2 * g + 1 {
        return Err(Error::domain(format!("x = q^{} exceeds X = q^{}", w.n, 2 * g + 1)));
    }
    if !(sigma >= 0.5) {
        return Err(Error::domain(format!("sigma = {sigma} is below 1/2")));
    }
    if w.q != family.q() {
        return Err(Error::config("weight functions and family use different q"));
    }
    let q = family.q() as f64;
    let table = family.table();
    // the prime-square sum does not depend on D
    let mut squares = KahanSum::new();
    for d in 1..=w.n / 2 {
        squares.add(table.count(d) as f64 * w.h(2 * d) * q.powf(-2.0 * d as f64 * sigma));
    }
    let constant = squares.value() + w.a_total() * (2 * g + 1) as f64 / w.n as f64;
    #[derive(Serialize, Deserialize)]
    struct Part {
        max: f64,
        min: f64,
        argmax: Option<usize>,
        vanished: u64,
    }
    let task = format!("prop32 n={} sigma={sigma} a={:?} theta={:?}", w.n, w.a, w.theta);
    let parts = family.run(opts, &task, |range| {
        let mut p = Part {
            max: f64::NEG_INFINITY,
            min: f64::INFINITY,
            argmax: None,
            vanished: 0,
        };
        for i in range {
            let chi = family.character(i);
            let l = crate::lfunction::lpoly_from_character(&chi, g)?;
            let log_i = i_weight(&table.factorize(chi.modulus())?).ln();
            let mut lhs = 0.0;
            let mut zero = false;
            for (&a, &t) in w.a.iter().zip(&w.theta) {
                let u = num_complex::Complex64::from_polar(q.powf(-sigma), -t);
                let v = l.eval_u(u).norm();
                if v == 0.0 {
                    zero = true;
                }
                lhs += a * (log_i + v.ln());
            }
            if zero {
                p.vanished += 1;
                continue;
            }
            let mut primes = KahanSum::new();
            for d in 1..=w.n {
                let s1: i64 = chi.values_of_degree(d).iter().map(|&v| v as i64).sum();
                primes.add(
                    2.0 * w.h(d) * s1 as f64 * q.powf(-(d as f64) * sigma) * (-(d as f64) / w.n as f64).exp() * w.s(d),
                );
            }
            let delta = lhs - (primes.value() + constant);
            if delta > p.max {
                p.max = delta;
                p.argmax = Some(i);
            }
            p.min = p.min.min(delta);
        }
        Ok(p)
    })?;
    let mut r = Prop32Report {
        q: family.q(),
        g,
        n: w.n,
        sigma,
        a: w.a.clone(),
        theta: w.theta.clone(),
        max_delta: f64::NEG_INFINITY,
        min_delta: f64::INFINITY,
        argmax: None,
        vanished: 0,
    };
    for p in parts {
        r.vanished += p.vanished;
        r.min_delta = r.min_delta.min(p.min);
        if p.max > r.max_delta {
            r.max_delta = p.max;
            r.argmax = p.argmax.map(|i| family.discriminant(i).encode());
        }
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub q: u32,
    pub g: usize,
    pub checked: u64,
    pub violations: u64,
}

/// For each `D`: `sum_{deg f = n} chi_D(f) = 0` for `2g < n <= 2g + 3`, and the prefix sums
/// from the L-coefficients equal direct enumeration for every `N <= 2g + 2`.
pub fn tail_suite(family: &Family, opts: &SweepOptions) -> Result<TailReport> {
    let g = family.g();
    let parts = family.run(opts, "tail", |range| {
        let mut checked = 0u64;
        let mut violations = 0u64;
        for i in range {
            let d = family.discriminant(i);
            let l = family.lpoly(i)?;
            for n in 2 * g + 1..=2 * g + 3 {
                checked += 1;
                violations += u64::from(character_sum_of_degree(&d, n) != 0);
            }
            let mut running = 0i64;
            for n in 0..=2 * g + 2 {
                for f in enumerate_monic(family.field(), n) {
                    running += chi_eval(&d, &f)? as i64;
                }
                checked += 1;
                violations += u64::from(running != l.prefix_sum(n));
            }
        }
        Ok((checked, violations))
    })?;
    Ok(TailReport {
        q: family.q(),
        g,
        checked: parts.iter().map(|p| p.0).sum(),
        violations: parts.iter().map(|p| p.1).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::sweep::DEFAULT_BUDGET;
    use std::f64::consts::PI;

    fn poly(q: u32, c: &[u16]) -> Poly {
        Poly::new(&FieldSpec::new(q).unwrap(), c.to_vec()).unwrap()
    }

    #[test]
    fn mertens_examples() {
        let table = PrimeTable::build(&FieldSpec::new(3).unwrap(), 8).unwrap();
        let r = mertens_log(&table, 1).unwrap();
        assert!((r.sum - 3f64.ln()).abs() < 1e-15);
        assert!(r.residual.abs() < 1e-15);
        for n in 1..=8 {
            assert!(mertens_log(&table, n).unwrap().residual.abs() < 1.0);
        }
        assert!(mertens_log(&table, 9).is_err());
        let c0 = mertens_cos(&table, 8, 0.0).unwrap();
        let recip: f64 = (1..=8).map(|d| table.count(d) as f64 / 3f64.powi(d as i32)).sum();
        assert!((c0.sum - recip).abs() < 1e-14);
        let step = TAU / 3f64.ln();
        let a = mertens_cos(&table, 8, 0.7).unwrap();
        let b = mertens_cos(&table, 8, 0.7 + step).unwrap();
        assert!((a.sum - b.sum).abs() < 1e-12);
        assert!((a.zeta_term - b.zeta_term).abs() < 1e-12);
        assert!(mertens_cos(&table, 8, -1.0).is_err());
    }

    use std::f64::consts::TAU;

    #[test]
    fn lemma23_instance() {
        let fam = Family::new(3, 1, DEFAULT_BUDGET).unwrap();
        let r = charavg_plain(&fam, &poly(3, &[0, 0, 1])).unwrap();
        assert_eq!(r.lhs, 14.0);
        assert!((r.main - 13.5).abs() < 1e-12);
        assert!((r.residual - 0.5).abs() < 1e-12);
        assert!((r.scale - 9.0).abs() < 1e-12);
        assert!((r.normalized - 0.5 / 9.0).abs() < 1e-12);
        let one = charavg_plain(&fam, &poly(3, &[1])).unwrap();
        assert_eq!(one.lhs, 18.0);
        assert!(one.residual.abs() < 1e-12);
        let t = charavg_plain(&fam, &poly(3, &[0, 1])).unwrap();
        assert_eq!(t.main, 0.0);
        assert!(t.lhs.abs() <= t.scale);
        assert!(charavg_plain(&fam, &poly(3, &[0, 2])).is_err());
    }

    #[test]
    fn weighted_average() {
        let fam = Family::new(3, 1, DEFAULT_BUDGET).unwrap();
        let table = PrimeTable::build(fam.field(), 12).unwrap();
        let f = poly(3, &[0, 0, 1]);
        let plain = charavg_plain(&fam, &f).unwrap();
        let w0 = charavg_weighted(&fam, &table, &f, 0.0, 12).unwrap();
        assert_eq!(w0.lhs, plain.lhs);
        assert!((w0.main - plain.main).abs() <= w0.truncation + 1e-9);
        let one = poly(3, &[1]);
        let coarse = charavg_weighted(&fam, &table, &one, 1.0, 4).unwrap();
        let fine = charavg_weighted(&fam, &table, &one, 1.0, 12).unwrap();
        assert!((coarse.main - fine.main).abs() <= coarse.truncation);
        let brute: f64 = (0..fam.len())
            .map(|i| 1.0 / i_weight(&factorize(&fam.discriminant(i)).unwrap()))
            .sum();
        assert!((fine.lhs - brute).abs() < 1e-12);
        let t = charavg_weighted(&fam, &table, &poly(3, &[0, 1]), 1.0, 4).unwrap();
        assert_eq!(t.main, 0.0);
    }

    #[test]
    fn weight_function_invariants() {
        let w = WeightFunctions::new(3, vec![1.0, 0.5], vec![0.3, 2.0], 4).unwrap();
        for d in 0..10 {
            assert!(w.h(d).abs() <= w.a_total() / 2.0 + 1e-15);
            assert!(w.h_px(d).abs() <= 1.0);
        }
        for d in 0..=4 {
            assert!((0.0..=1.0).contains(&w.s(d)));
        }
        let fac = factorize(&poly(3, &[0, 1, 1])).unwrap();
        let i = i_weight(&fac);
        assert!(i > 0.0 && i <= 1.0);
        assert!((i - (1.0 - 1.0 / 6.0) * (1.0 - 1.0 / 6.0)).abs() < 1e-15);
    }

    #[test]
    fn prop31_trivial_and_small() {
        let fam = Family::new(3, 0, DEFAULT_BUDGET).unwrap();
        let chi = fam.character(0);
        let l = fam.lpoly(0).unwrap();
        let c = prop31_check(&l, &chi, 1, 0.5, 0.0).unwrap();
        assert_eq!((c.lhs, c.rhs, c.slack), (0.0, 1.0, 1.0));
        assert!(prop31_check(&l, &chi, 2, 0.5, 0.0).is_err());
        let fam = Family::new(3, 1, DEFAULT_BUDGET).unwrap();
        let thetas: Vec<f64> = (0..8).map(|k| k as f64 * PI / 4.0).collect();
        let s = prop31_suite(&fam, &[1, 2, 3], &thetas, &SweepOptions::default()).unwrap();
        assert_eq!(s.checked, 18 * 3 * 8);
        assert_eq!(s.violations, 0, "{s:?}");
    }

    #[test]
    fn prop32_runs() {
        let fam = Family::new(3, 0, DEFAULT_BUDGET).unwrap();
        let w = WeightFunctions::new(3, vec![1.0], vec![0.0], 1).unwrap();
        let r = prop32_residual(&fam, &w, 0.5, &SweepOptions::default()).unwrap();
        assert!(r.max_delta.is_finite() && r.max_delta <= 0.0);
        let fam = Family::new(3, 1, DEFAULT_BUDGET).unwrap();
        let w = WeightFunctions::new(3, vec![1.0], vec![0.0], 3).unwrap();
        let a = prop32_residual(&fam, &w, 0.5, &SweepOptions::with_shards(1)).unwrap();
        let b = prop32_residual(&fam, &w, 0.5, &SweepOptions::with_shards(4)).unwrap();
        assert_eq!(a.max_delta, b.max_delta);
        let far = WeightFunctions::new(3, vec![1.0], vec![0.0], 4).unwrap();
        assert!(prop32_residual(&fam, &far, 0.5, &SweepOptions::default()).is_err());
    }

    #[test]
    fn tail_small() {
        let fam = Family::new(3, 1, DEFAULT_BUDGET).unwrap();
        let r = tail_suite(&fam, &SweepOptions::default()).unwrap();
        assert_eq!(r.violations, 0);
        assert_eq!(r.checked, 18 * (3 + 5));
    }
}
