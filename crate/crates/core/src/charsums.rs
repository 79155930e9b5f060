//! Moments of the character sums `sum_{|f| <= Y} chi_D(f)` and of
//! `int_0^{2 pi} |L(e^{it}/sqrt q, chi_D)| dt` over the family.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lfunction::{lpoly_direct, LPolynomial};
use crate::poly::Poly;
use crate::sweep::{Family, KahanSum, SweepOptions};

/// Smallest `m` the moment bound is stated for.
pub const MIN_M: f64 = 1.5;

/// `sum_{deg f <= n} chi_D(f)` via the L-coefficients (`c_k = 0` for `k > 2g`).
pub fn char_prefix_sum(d: &Poly, n: usize) -> Result<i64> {
    Ok(lpoly_direct(d)?.prefix_sum(n))
}

/// The same prefix sum read off numerically as
/// `(1 / 2 pi i) oint L(u) du / ((1 - u) u^{n+1})` over `|u| = q^{-1/2}`.
pub fn prefix_sum_contour(l: &LPolynomial, n: usize) -> f64 {
    let r = (l.q as f64).powf(-0.5);
    let points = 8 * (l.coeffs.len() + n) + 64;
    let mut acc = KahanSum::new();
    for k in 0..points {
        let u = Complex64::from_polar(r, TAU * k as f64 / points as f64);
        let v = l.eval_u(u) / ((1.0 - u) * u.powi(n as i32));
        acc.add(v.re);
    }
    acc.value() / points as f64
}

/// Checks [`prefix_sum_contour`] against the exact prefix sum to `1e-8`.
pub fn check_contour(l: &LPolynomial, n: usize) -> Result<f64> {
    let exact = l.prefix_sum(n) as f64;
    let numeric = prefix_sum_contour(l, n);
    let err = (numeric - exact).abs();
    if err > 1e-8 {
        return Err(Error::Assertion(format!(
            "contour value {numeric} differs from prefix sum {exact} for D = {}, N = {n}",
            l.discriminant
        )));
    }
    Ok(err)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharSumSpec {
    pub q: u32,
    pub g: usize,
    pub m: f64,
    /// `N = log_q Y`.
    pub n: usize,
}

impl CharSumSpec {
    /// Requires `m >= 3/2`.
    pub fn new(q: u32, g: usize, m: f64, n: usize) -> Result<Self> {
        if !(m >= MIN_M) {
            return Err(Error::config(format!("m = {m} is below {MIN_M}")));
        }
        Ok(CharSumSpec { q, g, m, n })
    }

    /// Any `m > 0`, with a warning when `m < 3/2`.
    pub fn exploratory(q: u32, g: usize, m: f64, n: usize) -> Result<(Self, Option<String>)> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::config(format!("m = {m} must be positive")));
        }
        let warning = (m < MIN_M).then(|| format!("m = {m} is below {MIN_M}; exploration only"));
        Ok((CharSumSpec { q, g, m, n }, warning))
    }

    pub fn x(&self) -> f64 {
        (self.q as f64).powi(2 * self.g as i32 + 1)
    }

    pub fn y(&self) -> f64 {
        (self.q as f64).powi(self.n as i32)
    }
}

/// `X Y^m (ln X)^{2m^2 - m + 1}`.
pub fn theorem2_bound(spec: &CharSumSpec) -> f64 {
    spec.x() * spec.y().powf(spec.m) * log_power(spec.q, spec.g, spec.m)
}

/// `X (ln X)^{2m^2 - m + 1}`, the bound for the circle-integral moment.
pub fn circle_bound(q: u32, g: usize, m: f64) -> f64 {
    (q as f64).powi(2 * g as i32 + 1) * log_power(q, g, m)
}

fn log_power(q: u32, g: usize, m: f64) -> f64 {
    let lx = (2 * g + 1) as f64 * (q as f64).ln();
    lx.powf(2.0 * m * m - m + 1.0)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PrefixHistogram {
    pub max_abs: u64,
    pub mean_abs: f64,
    /// Number of discriminants with each prefix-sum value.
    pub counts: BTreeMap<i64, u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharSumReport {
    pub spec: CharSumSpec,
    pub value: f64,
    /// Exact value when `2m` is an integer.
    pub exact: Option<u128>,
    pub bound: f64,
    pub ratio: f64,
    pub family_size: u64,
    pub histogram: PrefixHistogram,
    pub warnings: Vec<String>,
    /// Per-discriminant prefix sums in family order.
    #[serde(skip)]
    pub prefix_sums: Vec<i64>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
struct Partial {
    prefix: Vec<i64>,
    float_sum: KahanSum,
    int_sum: u128,
}

fn integer_exponent(m: f64) -> Option<u32> {
    let e = 2.0 * m;
    (e.fract() == 0.0 && e >= 0.0 && e <= 64.0).then_some(e as u32)
}

/// `|s|^{2m}` as a float.
pub fn power_contribution(s: i64, m: f64) -> f64 {
    (s.unsigned_abs() as f64).powf(2.0 * m)
}

/// `S_m(q, g, Y) = sum_D |sum_{deg f <= N} chi_D(f)|^{2m}`.
pub fn s_m_moment(family: &Family, spec: &CharSumSpec, opts: &SweepOptions) -> Result<CharSumReport> {
    if family.q() != spec.q || family.g() != spec.g {
        return Err(Error::config("family does not match the character-sum spec"));
    }
    let exp = integer_exponent(spec.m);
    let overflow = || Error::Numerical("exact character-sum moment overflow".into());
    let task = format!("charsum m={} n={}", spec.m, spec.n);
    let parts = family.run(opts, &task, |range| {
        let mut p = Partial::default();
        for i in range {
            let s = family.lpoly(i)?.prefix_sum(spec.n);
            p.prefix.push(s);
            p.float_sum.add(power_contribution(s, spec.m));
            if let Some(e) = exp {
                let t = (s.unsigned_abs() as u128).checked_pow(e).ok_or_else(overflow)?;
                p.int_sum = p.int_sum.checked_add(t).ok_or_else(overflow)?;
            }
        }
        Ok(p)
    })?;
    let mut total = KahanSum::new();
    let mut exact = exp.map(|_| 0u128);
    let mut prefix_sums = Vec::with_capacity(family.len());
    for p in parts {
        total.merge(&p.float_sum);
        if let Some(x) = exact.as_mut() {
            *x = x.checked_add(p.int_sum).ok_or_else(overflow)?;
        }
        prefix_sums.extend(p.prefix);
    }
    let value = exact.map_or(total.value(), |x| x as f64);
    let bound = theorem2_bound(spec);
    let mut histogram = PrefixHistogram::default();
    let mut abs_sum = 0u64;
    for &s in &prefix_sums {
        *histogram.counts.entry(s).or_default() += 1;
        histogram.max_abs = histogram.max_abs.max(s.unsigned_abs());
        abs_sum += s.unsigned_abs();
    }
    histogram.mean_abs = abs_sum as f64 / prefix_sums.len().max(1) as f64;
    let mut warnings = Vec::new();
    if spec.m < MIN_M {
        warnings.push(format!("m = {} is below {MIN_M}", spec.m));
    }
    Ok(CharSumReport {
        spec: spec.clone(),
        value,
        exact,
        bound,
        ratio: value / bound,
        family_size: family.len() as u64,
        histogram,
        warnings,
        prefix_sums,
    })
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j - 1) as f64 * z * p2 - (j - 1) as f64 * p3) / j as f64;
            }
            dp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / dp;
            if (z - z1).abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Caches Gauss-Legendre rules by order.
#[derive(Default)]
pub struct QuadratureCache {
    rules: HashMap<usize, (Vec<f64>, Vec<f64>)>,
}

impl QuadratureCache {
    fn rule(&mut self, n: usize) -> &(Vec<f64>, Vec<f64>) {
        self.rules.entry(n).or_insert_with(|| gauss_legendre(n))
    }
}

/// `int_0^{2 pi} |L(e^{it}/sqrt q)| dt` with about `points` nodes.
///
/// The integrand has kinks at the zeros of `L`, which all lie on the circle, so the
/// interval is split at their angles and each arc gets its own Gauss-Legendre rule.
/// Between zeros the integrand is the restriction of an entire function.
pub fn circle_integral(l: &LPolynomial, points: usize, cache: &mut QuadratureCache) -> Result<f64> {
    if l.degree().unwrap_or(0) == 0 {
        let v = l.coeffs.first().copied().unwrap_or(0).unsigned_abs() as f64;
        return Ok(TAU * v);
    }
    let mut cuts: Vec<f64> = l
        .roots()?
        .iter()
        .map(|r| r.value.arg().rem_euclid(TAU))
        .collect();
    cuts.push(0.0);
    cuts.push(TAU);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|b, a| (*b - *a).abs() < 1e-12);
    if let Some(last) = cuts.last_mut() {
        *last = TAU;
    }
    let mut acc = KahanSum::new();
    for arc in cuts.windows(2) {
        let (a, b) = (arc[0], arc[1]);
        let n = ((points as f64 * (b - a) / TAU).ceil() as usize).max(8);
        let (x, w) = cache.rule(n);
        let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
        for (xi, wi) in x.iter().zip(w) {
            acc.add(half * wi * l.eval_theta(mid + half * xi).norm());
        }
    }
    Ok(acc.value())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleReport {
    pub q: u32,
    pub g: usize,
    pub m: f64,
    pub points: usize,
    pub value: f64,
    pub bound: f64,
    pub ratio: f64,
    pub family_size: u64,
}

/// `sum_D (int_0^{2 pi} |L(e^{it}/sqrt q, chi_D)| dt)^{2m}`.
pub fn circle_integral_moment(
    family: &Family,
    m: f64,
    points: usize,
    opts: &SweepOptions,
) -> Result<CircleReport> {
    if points < 64 {
        return Err(Error::config(format!("{points} quadrature points; at least 64 are required")));
    }
    let task = format!("circle m={m} points={points}");
    let parts = family.run(opts, &task, |range| {
        let mut cache = QuadratureCache::default();
        let mut acc = KahanSum::new();
        for i in range {
            let v = circle_integral(&family.lpoly(i)?, points, &mut cache)?;
            acc.add(v.powf(2.0 * m));
        }
        Ok(acc)
    })?;
    let mut total = KahanSum::new();
    for p in &parts {
        total.merge(p);
    }
    let bound = circle_bound(family.q(), family.g(), m);
    Ok(CircleReport {
        q: family.q(),
        g: family.g(),
        m,
        points,
        value: total.value(),
        bound,
        ratio: total.value() / bound,
        family_size: family.len() as u64,
    })
}
