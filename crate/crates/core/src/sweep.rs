//! Deterministic sharded sweeps over `H_{2g+1,q}`.
//!
//! The family is listed in monic-code order and cut into contiguous shards. Each shard
//! is processed sequentially by one worker and results are merged in shard order, so a
//! fixed shard count gives bit-identical floating output whatever the thread count.

use std::collections::BTreeMap;
use std::fs;
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::lfunction::{lpoly_from_character, LPolynomial};
use crate::poly::Poly;
use crate::primes::{family_codes, family_size, PrimeTable};
use crate::symbol::{PrimeRoots, QuadraticCharacter};

/// Default limit on the number of discriminants in one sweep.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Splits `0..n` into `workers` contiguous ranges whose lengths differ by at most one,
/// longer ranges first.
pub fn shard_plan(n: usize, workers: usize) -> Vec<Range<usize>> {
    let w = workers.max(1);
    let (base, extra) = (n / w, n % w);
    let mut out = Vec::with_capacity(w);
    let mut start = 0;
    for i in 0..w {
        let len = base + usize::from(i < extra);
        out.push(start..start + len);
        start += len;
    }
    out
}

/// Worker count: explicit request, else `FFM_THREADS`, else available parallelism.
pub fn thread_count(requested: Option<usize>) -> usize {
    requested
        .or_else(|| std::env::var("FFM_THREADS").ok()?.trim().parse().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Compensated (Kahan) accumulator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    /// Folds another accumulator in, keeping its compensation term.
    pub fn merge(&mut self, other: &KahanSum) {
        self.add(other.sum);
        self.add(-other.comp);
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

impl FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut k = KahanSum::new();
        for x in iter {
            k.add(x);
        }
        k
    }
}

/// How a sweep is cut up and run.
#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub shards: usize,
    pub threads: Option<usize>,
    pub budget: u128,
    pub checkpoint: Option<PathBuf>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            shards: 1,
            threads: None,
            budget: DEFAULT_BUDGET,
            checkpoint: None,
        }
    }
}

impl SweepOptions {
    pub fn with_shards(shards: usize) -> Self {
        SweepOptions {
            shards,
            ..Self::default()
        }
    }
}

/// Refuses a family larger than `budget`, with a rough cost estimate.
pub fn check_budget(q: u32, g: usize, budget: u128) -> Result<()> {
    let size = family_size(q, g);
    if size <= budget {
        return Ok(());
    }
    // one symbol per prime of degree <= 2g, about q^d / d of each
    let per_d: f64 = (1..=2 * g).map(|d| (q as f64).powi(d as i32) / d as f64).sum();
    let ops = size as f64 * per_d.max(1.0);
    Err(Error::Infeasible {
        family_size: size,
        budget,
        estimate: format!(
            "about {ops:.2e} prime symbol evaluations (~{:.1e} s at 10 ns each)",
            ops * 1e-8
        ),
    })
}

/// The family `H_{2g+1,q}` with the tables needed to compute `chi_D` quickly.
pub struct Family {
    field: FieldSpec,
    g: usize,
    codes: Vec<u64>,
    table: PrimeTable,
    roots: PrimeRoots,
}

impl Family {
    /// Builds the family after a budget check. Primes are tabulated through degree `2g + 1`.
    pub fn new(q: u32, g: usize, budget: u128) -> Result<Self> {
        Self::build(q, g, budget, None)
    }

    /// As [`Family::new`], reading or writing the prime table under `cache_dir`.
    pub fn with_cache(q: u32, g: usize, budget: u128, cache_dir: Option<&Path>) -> Result<Self> {
        Self::build(q, g, budget, cache_dir)
    }

    fn build(q: u32, g: usize, budget: u128, cache_dir: Option<&Path>) -> Result<Self> {
        let field = FieldSpec::new(q)?;
        check_budget(q, g, budget)?;
        let deg = 2 * g + 1;
        let table = match cache_dir {
            Some(dir) => PrimeTable::load_or_build(&field, deg, dir)?,
            None => PrimeTable::build(&field, deg)?,
        };
        let roots = PrimeRoots::new(&table, deg)?;
        let codes = family_codes(&field, g);
        Ok(Family {
            field,
            g,
            codes,
            table,
            roots,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn g(&self) -> usize {
        self.g
    }

    /// `X = q^{2g+1}`.
    pub fn x(&self) -> f64 {
        (self.q() as f64).powi(2 * self.g as i32 + 1)
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn table(&self) -> &PrimeTable {
        &self.table
    }

    pub fn discriminant(&self, i: usize) -> Poly {
        Poly::from_monic_code(&self.field, 2 * self.g + 1, self.codes[i])
    }

    /// `chi_D` at every prime of degree `<= 2g + 1`.
    pub fn character(&self, i: usize) -> QuadraticCharacter {
        QuadraticCharacter::with_roots(&self.discriminant(i), &self.roots)
            .expect("family members are monic over the family field")
    }

    /// `chi_D` at every prime of degree `<= max_deg` (at most `2g + 1`).
    pub fn character_to(&self, i: usize, max_deg: usize) -> Result<QuadraticCharacter> {
        QuadraticCharacter::with_roots_to(&self.discriminant(i), &self.roots, max_deg)
    }

    pub fn lpoly(&self, i: usize) -> Result<LPolynomial> {
        lpoly_from_character(&self.character_to(i, 2 * self.g)?, self.g)
    }

    /// Runs `f` on every shard of `0..len` and returns the shard results in order.
    /// `task` names the computation for checkpoint matching.
    pub fn run<T, F>(&self, opts: &SweepOptions, task: &str, f: F) -> Result<Vec<T>>
    where
        T: Send + Serialize + DeserializeOwned,
        F: Fn(Range<usize>) -> Result<T> + Sync,
    {
        let config = format!("q={} g={} n={} {task}", self.q(), self.g, self.len());
        run_sharded(self.len(), opts, &config, f)
    }
}

/// Saved progress of a sweep: finished shard results keyed by shard index.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepCheckpoint {
    pub config_hash: String,
    pub shards: usize,
    pub completed: BTreeMap<usize, serde_json::Value>,
}

impl SweepCheckpoint {
    pub fn load(path: &Path) -> Result<Option<Self>> {
        match fs::read_to_string(path) {
            Ok(s) => Ok(Some(serde_json::from_str(&s)?)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_vec(self)?)?;
        fs::rename(tmp, path)?;
        Ok(())
    }
}

/// SHA-256 of a configuration string, hex encoded.
pub fn config_hash(config: &str) -> String {
    Sha256::digest(config.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Sharded map over `0..n`. With a checkpoint path, finished shards are saved as they
/// complete and reused on the next run with the same `config` and shard count.
pub fn run_sharded<T, F>(n: usize, opts: &SweepOptions, config: &str, f: F) -> Result<Vec<T>>
where
    T: Send + Serialize + DeserializeOwned,
    F: Fn(Range<usize>) -> Result<T> + Sync,
{
    let plan = shard_plan(n, opts.shards);
    let hash = config_hash(&format!("{config} shards={}", plan.len()));
    let mut done: BTreeMap<usize, serde_json::Value> = BTreeMap::new();
    if let Some(path) = &opts.checkpoint {
        if let Some(cp) = SweepCheckpoint::load(path)? {
            if cp.config_hash == hash && cp.shards == plan.len() {
                done = cp.completed;
            }
        }
    }
    let state = Mutex::new(SweepCheckpoint {
        config_hash: hash,
        shards: plan.len(),
        completed: done.clone(),
    });
    let work = |(i, range): (usize, &Range<usize>)| -> Result<(usize, T)> {
        if let Some(v) = done.get(&i) {
            return Ok((i, serde_json::from_value(v.clone())?));
        }
        let out = f(range.clone())?;
        if let Some(path) = &opts.checkpoint {
            let mut cp = state.lock().expect("checkpoint lock");
            cp.completed.insert(i, serde_json::to_value(&out)?);
            cp.save(path)?;
        }
        Ok((i, out))
    };
    let threads = thread_count(opts.threads);
    let results: Vec<Result<(usize, T)>> = if threads <= 1 || plan.len() <= 1 {
        plan.iter().enumerate().map(work).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::config(format!("thread pool: {e}")))?;
        pool.install(|| plan.par_iter().enumerate().map(work).collect())
    };
    let mut out = Vec::with_capacity(results.len());
    for r in results {
        out.push(r?.1);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shard_plan_examples() {
        assert_eq!(shard_plan(18, 1), vec![0..18]);
        assert_eq!(shard_plan(18, 4), vec![0..5, 5..10, 10..14, 14..18]);
        assert_eq!(shard_plan(2, 4), vec![0..1, 1..2, 2..2, 2..2]);
        assert_eq!(shard_plan(0, 3).iter().map(|r| r.len()).sum::<usize>(), 0);
    }

    #[test]
    fn kahan_recovers_small_terms() {
        let mut k = KahanSum::new();
        k.add(1.0);
        for _ in 0..10_000 {
            k.add(1e-16);
        }
        assert!((k.value() - (1.0 + 1e-12)).abs() < 1e-15);
    }

    #[test]
    fn budget_refusal() {
        match check_budget(3, 9, DEFAULT_BUDGET) {
            Err(Error::Infeasible { family_size, .. }) => {
                assert_eq!(family_size, 3u128.pow(19) - 3u128.pow(18))
            }
            other => panic!("expected refusal, got {other:?}"),
        }
        assert!(check_budget(3, 3, DEFAULT_BUDGET).is_ok());
    }

    #[test]
    fn family_lpolys_match_table_path() {
        let fam = Family::new(5, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(fam.len(), 100);
        let table = PrimeTable::build(fam.field(), 2).unwrap();
        for i in 0..fam.len() {
            let d = fam.discriminant(i);
            assert_eq!(fam.lpoly(i).unwrap(), crate::lfunction::lpoly_euler(&d, &table).unwrap());
        }
    }

    #[test]
    fn checkpoint_resume() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cp.json");
        let opts = SweepOptions {
            shards: 4,
            threads: Some(1),
            checkpoint: Some(path.clone()),
            ..Default::default()
        };
        let full: Vec<u64> =
            run_sharded(20, &opts, "t", |r| Ok(r.map(|i| i as u64 * 3).sum())).unwrap();
        fs::remove_file(&path).unwrap();
        // interrupted at shard 2
        let partial = run_sharded(20, &opts, "t", |r: Range<usize>| {
            if r.start == 10 {
                Err(Error::Numerical("interrupted".into()))
            } else {
                Ok(r.map(|i| i as u64 * 3).sum::<u64>())
            }
        });
        assert!(partial.is_err());
        let cp = SweepCheckpoint::load(&path).unwrap().unwrap();
        assert!(!cp.completed.contains_key(&2));
        assert_eq!(cp.completed.len(), 3);
        let calls = std::sync::atomic::AtomicUsize::new(0);
        let resumed: Vec<u64> = run_sharded(20, &opts, "t", |r: Range<usize>| {
            calls.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
            assert_eq!(r.start, 10);
            Ok(r.map(|i| i as u64 * 3).sum())
        })
        .unwrap();
        assert_eq!(calls.into_inner(), 1);
        assert_eq!(full, resumed);
        // a different config ignores the checkpoint
        let other: Vec<u64> = run_sharded(20, &opts, "u", |r| Ok(r.len() as u64)).unwrap();
        assert_eq!(other.iter().sum::<u64>(), 20);
    }
}
