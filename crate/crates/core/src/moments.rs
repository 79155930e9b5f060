//! Shifted moments `sum_D prod_j |L(1/2 + i t_j, chi_D)|^{a_j}` over `H_{2g+1,q}` and the
//! matching upper bound with its `zeta_A` factors.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lfunction::{reduce_angle, zeta_abs_at_angle, LPolynomial};
use crate::primes::family_size;
use crate::sweep::{check_budget, Family, KahanSum, SweepOptions};

/// Values of `|L|` below this count as zeros.
pub const ZERO_THRESHOLD: f64 = 1e-14;

/// Distance from `theta` to the nearest multiple of `2 pi`.
pub fn bar_theta(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    r.min(TAU - r)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentSpec {
    pub q: u32,
    pub g: usize,
    pub a: Vec<f64>,
    /// Shift angles `theta_j = t_j ln q`, reduced to `[0, 2 pi)`.
    pub theta: Vec<f64>,
}

impl MomentSpec {
    pub fn new(q: u32, g: usize, a: Vec<f64>, theta: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::domain("at least one shift is required"));
        }
        if a.len() != theta.len() {
            return Err(Error::domain(format!(
                "{} exponents but {} shifts",
                a.len(),
                theta.len()
            )));
        }
        if let Some(x) = a.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::domain(format!("exponent {x} is not positive")));
        }
        if let Some(t) = theta.iter().find(|t| !t.is_finite()) {
            return Err(Error::domain(format!("shift {t} is not finite")));
        }
        Ok(MomentSpec {
            q,
            g,
            a,
            theta: theta.into_iter().map(reduce_angle).collect(),
        })
    }

    /// Shifts given as `t_j`, converted by `theta = t ln q`.
    pub fn from_t(q: u32, g: usize, a: Vec<f64>, t: Vec<f64>) -> Result<Self> {
        let lq = (q as f64).ln();
        Self::new(q, g, a, t.into_iter().map(|t| t * lq).collect())
    }

    pub fn k(&self) -> usize {
        self.a.len()
    }

    /// `ln X = (2g + 1) ln q`.
    pub fn log_x(&self) -> f64 {
        (2 * self.g + 1) as f64 * (self.q as f64).ln()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundVariant {
    Zeta,
    Min,
}

/// Upper bound for the shifted moment, without its implied constant:
/// `X (ln X)^{sum a^2/4}` times pair factors at `theta_j -+ theta_l` and diagonal factors
/// at `2 theta_j`. `Zeta` uses `|zeta_A(1 + i alpha/ln q + 1/ln X)|`, `Min` uses
/// `min(ln X, 1/bar_theta(alpha))`.
pub fn theorem1_bound(spec: &MomentSpec, variant: BoundVariant) -> f64 {
    let lx = spec.log_x();
    let factor = |alpha: f64| match variant {
        BoundVariant::Zeta => zeta_abs_at_angle(spec.q, alpha, lx),
        BoundVariant::Min => {
            let b = bar_theta(alpha);
            if b == 0.0 {
                lx
            } else {
                lx.min(1.0 / b)
            }
        }
    };
    let k = spec.k();
    let (a, th) = (&spec.a, &spec.theta);
    let sum_sq: f64 = a.iter().map(|x| x * x).sum();
    let mut log_bound = (2 * spec.g + 1) as f64 * (spec.q as f64).ln() + sum_sq / 4.0 * lx.ln();
    for j in 0..k {
        for l in j + 1..k {
            let e = a[j] * a[l] / 2.0;
            log_bound += e * factor(th[j] - th[l]).ln() + e * factor(th[j] + th[l]).ln();
        }
        log_bound += (a[j] * a[j] / 4.0 + a[j] / 2.0) * factor(2.0 * th[j]).ln();
    }
    log_bound.exp()
}

/// `prod_j |L(theta_j)|^{a_j}`, or `None` when some `|L(theta_j)|` is below
/// [`ZERO_THRESHOLD`].
pub fn moment_term(l: &LPolynomial, a: &[f64], theta: &[f64]) -> Option<f64> {
    let mut prod = 1.0;
    for (&aj, &tj) in a.iter().zip(theta) {
        let v = l.eval_theta(tj).norm();
        if v < ZERO_THRESHOLD {
            return None;
        }
        prod *= v.powf(aj);
    }
    Some(prod)
}

/// Family sum of [`moment_term`] with the number of discriminants whose `L` vanished at a
/// shift (they contribute 0).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentSum {
    pub value: f64,
    pub zeros: u64,
}

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
struct Partial {
    sum: KahanSum,
    zeros: u64,
}

fn check_family(family: &Family, q: u32, g: usize) -> Result<()> {
    if family.q() != q || family.g() != g {
        return Err(Error::config(format!(
            "family (q={}, g={}) does not match spec (q={q}, g={g})",
            family.q(),
            family.g()
        )));
    }
    if family.is_empty() {
        return Err(Error::domain(format!("H_{{{},{q}}} is empty", 2 * g + 1)));
    }
    Ok(())
}

pub fn shifted_moment_in(family: &Family, spec: &MomentSpec, opts: &SweepOptions) -> Result<MomentSum> {
    check_family(family, spec.q, spec.g)?;
    let task = format!("moment a={:?} theta={:?}", spec.a, spec.theta);
    let parts = family.run(opts, &task, |range| {
        let mut p = Partial::default();
        for i in range {
            match moment_term(&family.lpoly(i)?, &spec.a, &spec.theta) {
                Some(v) => p.sum.add(v),
                None => p.zeros += 1,
            }
        }
        Ok(p)
    })?;
    let mut total = KahanSum::new();
    let mut zeros = 0;
    for p in &parts {
        total.merge(&p.sum);
        zeros += p.zeros;
    }
    Ok(MomentSum {
        value: total.value(),
        zeros,
    })
}

/// Builds the family and sums over it on one shard.
pub fn shifted_moment(spec: &MomentSpec) -> Result<f64> {
    let opts = SweepOptions::default();
    let family = Family::new(spec.q, spec.g, opts.budget)?;
    Ok(shifted_moment_in(&family, spec, &opts)?.value)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub spec: MomentSpec,
    pub empirical: f64,
    pub bound_zeta: f64,
    pub bound_min: f64,
    pub ratio_zeta: f64,
    pub ratio_min: f64,
    pub family_size: u64,
    pub zeros_detected: u64,
}

pub fn moment_report(family: &Family, spec: &MomentSpec, opts: &SweepOptions) -> Result<MomentReport> {
    let sum = shifted_moment_in(family, spec, opts)?;
    let bound_zeta = theorem1_bound(spec, BoundVariant::Zeta);
    let bound_min = theorem1_bound(spec, BoundVariant::Min);
    Ok(MomentReport {
        spec: spec.clone(),
        empirical: sum.value,
        bound_zeta,
        bound_min,
        ratio_zeta: sum.value / bound_zeta,
        ratio_min: sum.value / bound_min,
        family_size: family.len() as u64,
        zeros_detected: sum.zeros,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioSweep {
    pub reports: Vec<MomentReport>,
    /// Steps in `g` where `ratio_zeta` more than doubled.
    pub warnings: Vec<String>,
}

/// One report per `g`, with growth warnings. All sizes are checked before any work.
pub fn moment_ratio_sweep(
    q: u32,
    gs: &[usize],
    a: &[f64],
    theta: &[f64],
    opts: &SweepOptions,
) -> Result<RatioSweep> {
    if gs.is_empty() {
        return Err(Error::config("empty range of g"));
    }
    for &g in gs {
        check_budget(q, g, opts.budget)?;
    }
    let mut reports = Vec::new();
    for &g in gs {
        let spec = MomentSpec::new(q, g, a.to_vec(), theta.to_vec())?;
        let family = Family::new(q, g, opts.budget)?;
        reports.push(moment_report(&family, &spec, opts)?);
    }
    let warnings = growth_warnings(&reports);
    Ok(RatioSweep { reports, warnings })
}

fn growth_warnings(reports: &[MomentReport]) -> Vec<String> {
    reports
        .windows(2)
        .filter_map(|w| {
            let (r0, r1) = (w[0].ratio_zeta, w[1].ratio_zeta);
            let steps = w[1].spec.g.abs_diff(w[0].spec.g).max(1) as f64;
            (r1 > r0 * 2f64.powf(steps)).then(|| {
                format!(
                    "ratio grew from {r0:.6e} (g={}) to {r1:.6e} (g={})",
                    w[0].spec.g, w[1].spec.g
                )
            })
        })
        .collect()
}

/// `|H_{2g+1,q}|` as the empirical value of the trivial case `g = 0`.
pub fn trivial_moment(q: u32) -> f64 {
    family_size(q, 0) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::lfunction::lpoly_direct;
    use crate::primes::enumerate_h;
    use std::f64::consts::PI;

    #[test]
    fn bar_theta_examples() {
        assert_eq!(bar_theta(0.0), 0.0);
        assert!(bar_theta(TAU) < 1e-15);
        assert!((bar_theta(7.0) - (7.0 - TAU)).abs() < 1e-15);
        assert!((bar_theta(7.0) - 0.71681).abs() < 1e-5);
        assert!((bar_theta(-1.0) - 1.0).abs() < 1e-15);
        assert!((bar_theta(PI) - PI).abs() < 1e-15);
    }

    #[test]
    fn spec_validation() {
        assert!(MomentSpec::new(3, 1, vec![], vec![]).is_err());
        assert!(MomentSpec::new(3, 1, vec![1.0], vec![0.0, 1.0]).is_err());
        assert!(MomentSpec::new(3, 1, vec![0.0], vec![0.0]).is_err());
        let s = MomentSpec::new(3, 1, vec![1.0], vec![-1.0]).unwrap();
        assert!((s.theta[0] - (TAU - 1.0)).abs() < 1e-15);
        let s = MomentSpec::from_t(3, 1, vec![1.0], vec![1.0]).unwrap();
        assert!((s.theta[0] - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn bound_examples() {
        let spec = MomentSpec::new(3, 2, vec![1.0], vec![0.0]).unwrap();
        let lx = 243f64.ln();
        let z = 1.0 / (1.0 - (-0.2f64).exp());
        let expected = 243.0 * lx.powf(0.25) * z.powf(0.75);
        assert!((theorem1_bound(&spec, BoundVariant::Zeta) / expected - 1.0).abs() < 1e-12);
        assert!((243.0 * 5.493f64.powf(0.25) * 5.5167f64.powf(0.75) / expected - 1.0).abs() < 1e-4);
        let expected_min = 243.0 * lx.powf(0.25) * lx.powf(0.75);
        assert!((theorem1_bound(&spec, BoundVariant::Min) / expected_min - 1.0).abs() < 1e-12);

        let spec = MomentSpec::new(3, 2, vec![1.0, 1.0], vec![0.0, PI]).unwrap();
        let pair = (1.0 / PI).min(lx);
        // pair factors at 0 - pi and 0 + pi, diagonal at 0 and 2 pi
        let expected = 243.0 * lx.powf(0.5) * pair.powf(0.5) * pair.powf(0.5) * lx.powf(0.75) * lx.powf(0.75);
        assert!((theorem1_bound(&spec, BoundVariant::Min) / expected - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trivial_family() {
        let spec = MomentSpec::new(3, 0, vec![2.0], vec![0.0]).unwrap();
        assert_eq!(shifted_moment(&spec).unwrap(), 3.0);
        assert_eq!(trivial_moment(3), 3.0);
        let fam = Family::new(3, 0, 100).unwrap();
        let r = moment_report(&fam, &spec, &SweepOptions::default()).unwrap();
        assert!(r.bound_zeta >= 3.0 && r.bound_min >= 3.0);
    }

    #[test]
    fn matches_brute_force() {
        let field = FieldSpec::new(3).unwrap();
        let brute: f64 = enumerate_h(&field, 1)
            .map(|d| {
                let c = lpoly_direct(&d).unwrap().coeffs;
                c[0] as f64 + c[1] as f64 / 3f64.sqrt() + c[2] as f64 / 3.0
            })
            .sum();
        let spec = MomentSpec::new(3, 1, vec![1.0], vec![0.0]).unwrap();
        let v = shifted_moment(&spec).unwrap();
        assert!((v / brute - 1.0).abs() < 1e-13);
    }

    #[test]
    fn symmetries_and_sharding() {
        let fam = Family::new(3, 1, 1000).unwrap();
        let one = SweepOptions::with_shards(1);
        let four = SweepOptions::with_shards(4);
        let s = MomentSpec::new(3, 1, vec![1.0, 1.0], vec![0.0, PI / 2.0]).unwrap();
        let c = MomentSpec::new(3, 1, vec![1.0, 1.0], vec![0.0, -PI / 2.0]).unwrap();
        let p = MomentSpec::new(3, 1, vec![1.0, 1.0], vec![TAU, PI / 2.0 + TAU]).unwrap();
        let v = shifted_moment_in(&fam, &s, &one).unwrap().value;
        let vc = shifted_moment_in(&fam, &c, &one).unwrap().value;
        let vp = shifted_moment_in(&fam, &p, &one).unwrap().value;
        let v4 = shifted_moment_in(&fam, &s, &four).unwrap().value;
        assert!(v > 0.0);
        assert!((v / vc - 1.0).abs() < 1e-12);
        assert!((v / vp - 1.0).abs() < 1e-12);
        assert!((v / v4 - 1.0).abs() < 1e-12);
        assert_eq!(v, shifted_moment_in(&fam, &s, &one).unwrap().value);
    }

    #[test]
    fn ratio_sweep_refuses_large_g() {
        let r = moment_ratio_sweep(3, &[1, 9], &[1.0], &[0.0], &SweepOptions::default());
        assert!(matches!(r, Err(Error::Infeasible { .. })));
        let ok = moment_ratio_sweep(3, &[1, 2], &[1.0], &[0.0], &SweepOptions::default()).unwrap();
        assert_eq!(ok.reports.len(), 2);
        assert!(ok.reports.iter().all(|r| r.ratio_zeta.is_finite() && r.ratio_zeta > 0.0));
    }
}
