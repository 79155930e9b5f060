//! Frozen regression constants.
//!
//! The moment bounds and the `O(1)` terms of the prime-sum estimates carry constants that
//! cannot be computed. Instead, a first run records the empirical constants in a JSON
//! file, and later runs must reproduce them to a relative `1e-9`.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::charsums::{circle_integral_moment, s_m_moment, CharSumSpec};
use crate::error::Result;
use crate::field::FieldSpec;
use crate::moments::{moment_report, theorem1_bound, BoundVariant, MomentSpec};
use crate::primes::PrimeTable;
use crate::sweep::{Family, SweepOptions};
use crate::verify::{charavg_sweep, charavg_weighted, mertens_cos, mertens_log, prop32_residual, WeightFunctions};

/// Location of the checked-in baseline file.
pub const DEFAULT_PATH: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/baselines/baselines.json");

/// Relative tolerance for re-runs.
pub const TOLERANCE: f64 = 1e-9;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Baselines {
    pub schema_version: u32,
    pub entries: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub key: String,
    pub frozen: Option<f64>,
    pub fresh: f64,
}

impl Baselines {
    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    /// Loads, or starts empty when the file does not exist.
    pub fn load_or_default(path: &Path) -> Result<Self> {
        if path.exists() {
            Self::load(path)
        } else {
            Ok(Baselines {
                schema_version: SCHEMA_VERSION,
                entries: BTreeMap::new(),
            })
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        fs::write(path, s)?;
        Ok(())
    }

    pub fn update(&mut self, fresh: &BTreeMap<String, f64>) {
        self.schema_version = SCHEMA_VERSION;
        self.entries.extend(fresh.iter().map(|(k, v)| (k.clone(), *v)));
    }

    /// Entries of `fresh` that are missing here or differ by more than `rel`.
    pub fn compare(&self, fresh: &BTreeMap<String, f64>, rel: f64) -> Vec<Mismatch> {
        fresh
            .iter()
            .filter_map(|(k, &v)| {
                let frozen = self.entries.get(k).copied();
                match frozen {
                    Some(f) if close(f, v, rel) => None,
                    _ => Some(Mismatch {
                        key: k.clone(),
                        frozen,
                        fresh: v,
                    }),
                }
            })
            .collect()
    }
}

/// `|a - b| <= rel * max(|a|, |b|)`, with exact equality for zero.
pub fn close(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs())
}

fn fmt_list(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",")
}

/// Residuals of `sum ln|P|/|P| = ln x + O(1)` for `n = 1..=n_max` and their maximum `C1`;
/// residuals of the cosine sum over the grid `alpha = 0, 0.1, ..., 2 pi/ln q` and their
/// maxima `C2`. The `b` estimates are reported, not frozen.
pub fn mertens_entries(q: u32, n_max: usize) -> Result<BTreeMap<String, f64>> {
    let table = PrimeTable::build(&FieldSpec::new(q)?, n_max)?;
    let mut out = BTreeMap::new();
    let mut c1 = 0.0f64;
    for n in 1..=n_max {
        let r = mertens_log(&table, n)?;
        out.insert(format!("mertens_log/q={q}/n={n}/residual"), r.residual);
        c1 = c1.max(r.residual.abs());
    }
    out.insert(format!("mertens_log/q={q}/n<={n_max}/C1"), c1);
    let (mut c2z, mut c2m) = (0.0f64, 0.0f64);
    let top = TAU / (q as f64).ln();
    let mut k = 0;
    loop {
        let alpha = k as f64 * 0.1;
        if alpha > top + 1e-12 {
            break;
        }
        let r = mertens_cos(&table, n_max, alpha)?;
        c2z = c2z.max(r.residual_zeta.abs());
        c2m = c2m.max(r.residual_min.abs());
        k += 1;
    }
    out.insert(format!("mertens_cos/q={q}/n={n_max}/C2_zeta"), c2z);
    out.insert(format!("mertens_cos/q={q}/n={n_max}/C2_min"), c2m);
    Ok(out)
}

/// `C3`: largest normalized residual of the plain average over monic `f` of degree
/// `<= max_deg`, plus the weighted average at `f = 1, k = 1`.
pub fn charavg_entries(q: u32, g: usize, max_deg: usize, opts: &SweepOptions) -> Result<BTreeMap<String, f64>> {
    let family = Family::new(q, g, opts.budget)?;
    let (c3, _) = charavg_sweep(&family, max_deg)?;
    let mut out = BTreeMap::new();
    out.insert(format!("charavg/q={q}/g={g}/degf<={max_deg}/C3"), c3);
    let table = PrimeTable::build(family.field(), 12)?;
    let one = crate::poly::Poly::one(family.field());
    let w = charavg_weighted(&family, &table, &one, 1.0, 12)?;
    out.insert(format!("charavg_weighted/q={q}/g={g}/k=1/f=1/normalized"), w.normalized);
    Ok(out)
}

/// Largest residual of the explicit `log|I(D) L|` bound over the family.
pub fn prop32_entries(q: u32, g: usize, n: usize, a: &[f64], theta: &[f64], opts: &SweepOptions) -> Result<BTreeMap<String, f64>> {
    let family = Family::new(q, g, opts.budget)?;
    let w = WeightFunctions::new(q, a.to_vec(), theta.to_vec(), n)?;
    let r = prop32_residual(&family, &w, 0.5, opts)?;
    let mut out = BTreeMap::new();
    let key = format!("prop32/q={q}/g={g}/n={n}/a={}/theta={}", fmt_list(a), fmt_list(theta));
    out.insert(format!("{key}/max_delta"), r.max_delta);
    Ok(out)
}

/// Shifted moment, both bound ratios, and the spread between the two bound variants.
pub fn theorem1_entries(q: u32, g: usize, a: &[f64], theta: &[f64], opts: &SweepOptions) -> Result<BTreeMap<String, f64>> {
    let family = Family::new(q, g, opts.budget)?;
    let spec = MomentSpec::new(q, g, a.to_vec(), theta.to_vec())?;
    let r = moment_report(&family, &spec, opts)?;
    let key = format!("theorem1/q={q}/a={}/theta={}/g={g}", fmt_list(a), fmt_list(theta));
    let mut out = BTreeMap::new();
    out.insert(format!("{key}/empirical"), r.empirical);
    out.insert(format!("{key}/ratio_zeta"), r.ratio_zeta);
    out.insert(format!("{key}/ratio_min"), r.ratio_min);
    out.insert(format!("{key}/zeros"), r.zeros_detected as f64);
    Ok(out)
}

/// Largest `max(B_zeta/B_min, B_min/B_zeta)` over `theta_2` on a grid of 64 angles.
pub fn bound_variant_entries(q: u32, g: usize) -> Result<BTreeMap<String, f64>> {
    let mut c = 1.0f64;
    for k in 0..64 {
        let spec = MomentSpec::new(q, g, vec![1.0, 1.0], vec![0.0, TAU * k as f64 / 64.0])?;
        let r = theorem1_bound(&spec, BoundVariant::Zeta) / theorem1_bound(&spec, BoundVariant::Min);
        c = c.max(r).max(1.0 / r);
    }
    Ok(BTreeMap::from([(format!("bound_variants/q={q}/g={g}/a=1,1/C"), c)]))
}

/// `S_m` at `N = n` and the circle-integral moment, each with its bound ratio.
pub fn theorem2_entries(q: u32, g: usize, m: f64, n: usize, points: usize, opts: &SweepOptions) -> Result<BTreeMap<String, f64>> {
    let family = Family::new(q, g, opts.budget)?;
    let s = s_m_moment(&family, &CharSumSpec::exploratory(q, g, m, n)?.0, opts)?;
    let c = circle_integral_moment(&family, m, points, opts)?;
    let mut out = BTreeMap::new();
    out.insert(format!("theorem2/q={q}/m={m}/g={g}/N={n}/S_m"), s.value);
    out.insert(format!("theorem2/q={q}/m={m}/g={g}/N={n}/ratio"), s.ratio);
    out.insert(format!("circle/q={q}/m={m}/g={g}/points={points}/value"), c.value);
    out.insert(format!("circle/q={q}/m={m}/g={g}/points={points}/ratio"), c.ratio);
    Ok(out)
}

/// Every frozen constant of the regression suite.
pub fn compute_all(opts: &SweepOptions) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for q in [3, 5] {
        out.extend(mertens_entries(q, 8)?);
    }
    for g in [1, 2] {
        out.extend(charavg_entries(3, g, 4, opts)?);
        out.extend(prop32_entries(3, g, 3, &[1.0], &[0.0], opts)?);
    }
    for g in 1..=3 {
        out.extend(theorem1_entries(5, g, &[1.0], &[0.0], opts)?);
        out.extend(theorem1_entries(5, g, &[1.0, 1.0], &[0.0, PI / 2.0], opts)?);
        out.extend(bound_variant_entries(5, g)?);
        out.extend(theorem2_entries(3, g, 1.5, g, 256, opts)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compare_and_update() {
        let mut b = Baselines::default();
        let fresh = BTreeMap::from([("x".to_string(), 1.0), ("y".to_string(), 0.0)]);
        assert_eq!(b.compare(&fresh, TOLERANCE).len(), 2);
        b.update(&fresh);
        assert!(b.compare(&fresh, TOLERANCE).is_empty());
        let moved = BTreeMap::from([("x".to_string(), 1.0 + 1e-8)]);
        assert_eq!(b.compare(&moved, TOLERANCE).len(), 1);
        let near = BTreeMap::from([("x".to_string(), 1.0 + 1e-11)]);
        assert!(b.compare(&near, TOLERANCE).is_empty());
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("b.json");
        let mut b = Baselines::load_or_default(&path).unwrap();
        b.update(&mertens_entries(3, 4).unwrap());
        b.save(&path).unwrap();
        assert_eq!(Baselines::load(&path).unwrap(), b);
    }
}
