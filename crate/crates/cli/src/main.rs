mod config;
mod output;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use quadlab::baselines::{self, Baselines};
use quadlab::charsums::{check_contour, circle_integral_moment, power_contribution, s_m_moment, CharSumSpec};
use quadlab::lfunction::{family_genus, lpoly_direct, rh_check, LPolynomial};
use quadlab::moments::{moment_ratio_sweep, moment_report, MomentReport, MomentSpec};
use quadlab::primes::PrimeTable;
use quadlab::sweep::{thread_count, Family, SweepOptions};
use quadlab::symbol::{chi_eval, jacobi_with_trace};
use quadlab::verify::{mertens_log, prop31_suite, tail_suite};
use quadlab::{Error, FieldSpec, Poly};

use output::{fmt_f, Format, Output};

#[derive(Parser, Debug)]
#[command(name = "quadlab", version, about = "Quadratic L-functions over F_q[T]: exact sweeps and checks")]
struct Cli {
    /// Worker threads (default: FFM_THREADS, else available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Number of family shards (default: the thread count).
    #[arg(long, global = true)]
    shards: Option<usize>,
    /// Directory for prime tables and L-coefficient files.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Largest family size to sweep.
    #[arg(long, global = true, default_value = "1e7", value_parser = parse_budget)]
    budget: u128,
    /// JSON file supplying any flag; command-line flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Save finished shards here and resume from it.
    #[arg(long, global = true)]
    checkpoint: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate monic irreducibles through a degree.
    Primes {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        max_deg: usize,
        /// List every prime, not just the counts.
        #[arg(long)]
        list: bool,
    },
    /// Evaluate the quadratic symbol (D/f).
    Symbol {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        d: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        trace: bool,
    },
    /// L-polynomial coefficients.
    Lfun {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        g: usize,
        #[arg(long, conflicts_with = "all")]
        d: Option<String>,
        #[arg(long)]
        all: bool,
        /// Use direct summation over f instead of the Euler product.
        #[arg(long)]
        direct: bool,
    },
    /// Distance of every L-root from |u| = q^{-1/2}.
    RhCheck {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        g: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        d: Option<String>,
    },
    /// Shifted moments against their upper bound.
    Moments {
        #[arg(long)]
        q: u32,
        /// A genus, a list `1,2,3`, or a range `1..3`.
        #[arg(long)]
        g: String,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        a: Vec<f64>,
        /// Shift angles theta = t ln q.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "t")]
        theta: Option<Vec<f64>>,
        /// Shifts t, converted to angles.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        t: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value_t = Variant::Both)]
        variant: Variant,
    },
    /// Moments of the character sums over |f| <= Y.
    Charsums {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        g: usize,
        #[arg(long, default_value_t = 1.5)]
        m: f64,
        /// N with Y = q^N.
        #[arg(long = "logq-y")]
        logq_y: usize,
        /// Allow m below 3/2.
        #[arg(long)]
        explore: bool,
        /// Also check every prefix sum against a numerical contour integral.
        #[arg(long)]
        contour: bool,
    },
    /// Moments of the integral of |L| over the critical circle.
    CircleMoment {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        g: usize,
        #[arg(long, default_value_t = 1.5)]
        m: f64,
        #[arg(long, default_value_t = 256)]
        points: usize,
    },
    /// Run a verification suite, against frozen baselines where it has them.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 3)]
        q: u32,
        #[arg(long, default_value_t = 1)]
        g: usize,
        /// Suite cutoff: Mertens degree, largest deg f, or x = q^n.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        update_baselines: bool,
        #[arg(long)]
        baselines: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Variant {
    Zeta,
    Min,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Mertens,
    Charavg,
    Prop31,
    Prop32,
    Tail,
    Theorem1,
    Theorem2,
    All,
}

fn parse_budget(s: &str) -> Result<u128, String> {
    if let Ok(n) = s.parse::<u128>() {
        return Ok(n);
    }
    match s.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.is_finite() => Ok(x as u128),
        _ => Err(format!("invalid budget {s:?}")),
    }
}

fn parse_genera(s: &str) -> Result<Vec<usize>, Error> {
    let bad = || Error::Config(format!("invalid genus list {s:?}"));
    let num = |x: &str| x.trim().parse::<usize>().map_err(|_| bad());
    if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(num).collect()
}

fn parse_poly(field: &FieldSpec, s: &str) -> Result<Poly, Error> {
    if s.starts_with('q') {
        Poly::parse_in(field, s)
    } else {
        Poly::parse_in(field, &format!("q{}:{s}", field.q()))
    }
}

/// Exit status for an error: 2 for bad input or configuration, 1 otherwise.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Domain(_) | Error::Parse(_) | Error::Infeasible { .. } => 2,
        _ => 1,
    }
}

struct Ctx {
    opts: SweepOptions,
    cache_dir: Option<PathBuf>,
}

impl Ctx {
    fn family(&self, q: u32, g: usize) -> Result<Family, Error> {
        Family::with_cache(q, g, self.opts.budget, self.cache_dir.as_deref())
    }
}

/// A finished command: its report and whether a checked property failed.
struct Outcome {
    output: Output,
    failure: Option<String>,
}

impl From<Output> for Outcome {
    fn from(output: Output) -> Self {
        Outcome { output, failure: None }
    }
}

fn main() -> ExitCode {
    let args = match config::merge(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::parse_from(args);
    let threads = thread_count(cli.threads);
    let ctx = Ctx {
        opts: SweepOptions {
            shards: cli.shards.unwrap_or(threads).max(1),
            threads: Some(threads),
            budget: cli.budget,
            checkpoint: cli.checkpoint.clone(),
        },
        cache_dir: cli.cache_dir.clone(),
    };
    match run(&cli.command, &ctx) {
        Ok(outcome) => {
            if let Err(e) = outcome.output.emit(cli.format, cli.out.as_deref()) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(1);
            }
            match outcome.failure {
                Some(msg) => {
                    eprintln!("assertion failed: {msg}");
                    ExitCode::from(1)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cmd: &Command, ctx: &Ctx) -> Result<Outcome, Error> {
    match cmd {
        Command::Primes { q, max_deg, list } => primes(ctx, *q, *max_deg, *list).map(Into::into),
        Command::Symbol { q, d, f, trace } => symbol(*q, d, f, *trace).map(Into::into),
        Command::Lfun { q, g, d, all, direct } => lfun(ctx, *q, *g, d.as_deref(), *all, *direct).map(Into::into),
        Command::RhCheck { q, g, tol, d } => rh(ctx, *q, *g, *tol, d.as_deref()),
        Command::Moments { q, g, a, theta, t, variant } => {
            moments(ctx, *q, g, a, theta.as_deref(), t.as_deref(), *variant).map(Into::into)
        }
        Command::Charsums { q, g, m, logq_y, explore, contour } => {
            charsums(ctx, *q, *g, *m, *logq_y, *explore, *contour)
        }
        Command::CircleMoment { q, g, m, points } => {
            let family = ctx.family(*q, *g)?;
            let r = circle_integral_moment(&family, *m, *points, &ctx.opts)?;
            let text = format!(
                "q={} g={} m={} points={}\nvalue {}\nbound {}\nratio {}\n",
                r.q, r.g, r.m, r.points, fmt_f(r.value), fmt_f(r.bound), fmt_f(r.ratio)
            );
            Ok(Output::new("circle-moment", serde_json::to_value(&r)?).text(text).into())
        }
        Command::Verify { suite, q, g, n, update_baselines, baselines } => {
            verify(ctx, *suite, *q, *g, *n, *update_baselines, baselines.as_deref())
        }
    }
}

fn primes(ctx: &Ctx, q: u32, max_deg: usize, list: bool) -> Result<Output, Error> {
    let field = FieldSpec::new(q)?;
    let table = match &ctx.cache_dir {
        Some(dir) => PrimeTable::load_or_build(&field, max_deg, dir)?,
        None => PrimeTable::build(&field, max_deg)?,
    };
    let counts: Vec<usize> = (1..=max_deg).map(|d| table.count(d)).collect();
    let necklace_ok = (1..=max_deg).all(|n| table.necklace_sum(n) == (q as u128).pow(n as u32));
    let mut json = json!({ "q": q, "max_deg": max_deg, "counts": counts, "necklace_ok": necklace_ok });
    let mut text: String = counts
        .iter()
        .enumerate()
        .map(|(i, c)| format!("degree {}: {c}\n", i + 1))
        .collect();
    text.push_str(&format!("necklace identity: {}\n", if necklace_ok { "ok" } else { "FAILED" }));
    let out = if list {
        let rows: Vec<Vec<String>> = table
            .iter()
            .map(|p| vec![p.degree().unwrap_or(0).to_string(), p.encode()])
            .collect();
        json["primes"] = json!(rows.iter().map(|r| r[1].clone()).collect::<Vec<_>>());
        for r in &rows {
            text.push_str(&format!("{}\n", r[1]));
        }
        Output::new("primes", json).table(&["degree", "prime"], rows)
    } else {
        let rows = counts
            .iter()
            .enumerate()
            .map(|(i, c)| vec![(i + 1).to_string(), c.to_string()])
            .collect();
        Output::new("primes", json).table(&["degree", "count"], rows)
    };
    Ok(out.text(text))
}

fn symbol(q: u32, d: &str, f: &str, trace: bool) -> Result<Output, Error> {
    let field = FieldSpec::new(q)?;
    let (d, f) = (parse_poly(&field, d)?, parse_poly(&field, f)?);
    let (value, steps) = if trace {
        let (v, t) = jacobi_with_trace(&d, &f)?;
        (v, Some(t))
    } else {
        (chi_eval(&d, &f)?, None)
    };
    let mut text = format!("({d} / {f}) = {value}\n");
    if let Some(t) = &steps {
        for s in t {
            text.push_str(&format!("  {s}\n"));
        }
    }
    let json = json!({ "d": d.encode(), "f": f.encode(), "value": value, "trace": steps });
    Ok(Output::new("symbol", json).text(text))
}

fn coeff_rows(ls: &[LPolynomial]) -> Vec<Vec<String>> {
    ls.iter()
        .map(|l| {
            std::iter::once(l.discriminant.encode())
                .chain(l.coeffs.iter().map(|c| c.to_string()))
                .collect()
        })
        .collect()
}

fn lfun(ctx: &Ctx, q: u32, g: usize, d: Option<&str>, all: bool, direct: bool) -> Result<Output, Error> {
    let field = FieldSpec::new(q)?;
    let ls: Vec<LPolynomial> = match (d, all) {
        (Some(s), _) => {
            let d = parse_poly(&field, s)?;
            let dg = family_genus(&d)?;
            if dg != g {
                return Err(Error::Config(format!("{d} has genus {dg}, not {g}")));
            }
            vec![lpoly_direct(&d)?]
        }
        (None, true) => {
            let family = ctx.family(q, g)?;
            let parts = family.run(&ctx.opts, &format!("lfun direct={direct}"), |range| {
                range
                    .map(|i| if direct { lpoly_direct(&family.discriminant(i)) } else { family.lpoly(i) })
                    .collect::<Result<Vec<_>, _>>()
            })?;
            parts.into_iter().flatten().collect()
        }
        (None, false) => return Err(Error::Config("give --d POLY or --all".into())),
    };
    let header: Vec<String> = std::iter::once("D".to_string())
        .chain((0..=2 * g).map(|n| format!("c_{n}")))
        .collect();
    let rows = coeff_rows(&ls);
    if let (Some(dir), true) = (&ctx.cache_dir, all) {
        fs::create_dir_all(dir)?;
        let mut csv = header.join(",");
        csv.push('\n');
        for r in &rows {
            csv.push_str(&r.join(","));
            csv.push('\n');
        }
        fs::write(dir.join(format!("lcoeffs_q{q}_g{g}.csv")), csv)?;
    }
    let text = rows.iter().map(|r| format!("{}: {}\n", r[0], r[1..].join(" "))).collect();
    let json = json!({ "q": q, "g": g, "lpolys": ls });
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    Ok(Output::new("lfun", json).table(&header, rows).text(text))
}

fn rh(ctx: &Ctx, q: u32, g: usize, tol: f64, d: Option<&str>) -> Result<Outcome, Error> {
    let (checked, max_dev, worst) = match d {
        Some(s) => {
            let d = parse_poly(&FieldSpec::new(q)?, s)?;
            let r = rh_check(&lpoly_direct(&d)?, f64::INFINITY)?;
            (1u64, r.max_deviation, Some(d.encode()))
        }
        None => {
            let family = ctx.family(q, g)?;
            let parts = family.run(&ctx.opts, "rh", |range| {
                let mut best = (0u64, 0.0f64, None::<usize>);
                for i in range {
                    let r = rh_check(&family.lpoly(i)?, f64::INFINITY)?;
                    best.0 += 1;
                    if best.2.is_none() || r.max_deviation > best.1 {
                        best.1 = r.max_deviation;
                        best.2 = Some(i);
                    }
                }
                Ok(best)
            })?;
            let mut acc = (0u64, 0.0f64, None);
            for (n, dev, i) in parts {
                acc.0 += n;
                if i.is_some() && (acc.2.is_none() || dev > acc.1) {
                    acc.1 = dev;
                    acc.2 = i.map(|i| family.discriminant(i).encode());
                }
            }
            acc
        }
    };
    let ok = max_dev < tol;
    let json = json!({ "q": q, "g": g, "tol": tol, "checked": checked, "max_deviation": max_dev, "worst": worst, "passed": ok });
    let text = format!(
        "checked {checked} L-polynomials (q={q}, g={g})\nmax deviation {}\n{}\n",
        fmt_f(max_dev),
        if ok { "ok" } else { "FAILED" }
    );
    Ok(Outcome {
        output: Output::new("rh-check", json).text(text),
        failure: (!ok).then(|| format!("max deviation {max_dev:e} >= tolerance {tol:e}")),
    })
}

fn moment_row(r: &MomentReport) -> Vec<String> {
    vec![
        r.spec.g.to_string(),
        r.family_size.to_string(),
        fmt_f(r.empirical),
        fmt_f(r.bound_zeta),
        fmt_f(r.bound_min),
        fmt_f(r.ratio_zeta),
        fmt_f(r.ratio_min),
        r.zeros_detected.to_string(),
    ]
}

fn moments(
    ctx: &Ctx,
    q: u32,
    g: &str,
    a: &[f64],
    theta: Option<&[f64]>,
    t: Option<&[f64]>,
    variant: Variant,
) -> Result<Output, Error> {
    let gs = parse_genera(g)?;
    let theta: Vec<f64> = match (theta, t) {
        (Some(th), _) => th.to_vec(),
        (None, Some(t)) => t.iter().map(|x| x * (q as f64).ln()).collect(),
        (None, None) => vec![0.0; a.len()],
    };
    let (reports, warnings) = if gs.len() == 1 {
        let spec = MomentSpec::new(q, gs[0], a.to_vec(), theta)?;
        (vec![moment_report(&ctx.family(q, gs[0])?, &spec, &ctx.opts)?], Vec::new())
    } else {
        let s = moment_ratio_sweep(q, &gs, a, &theta, &ctx.opts)?;
        (s.reports, s.warnings)
    };
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let rows: Vec<Vec<String>> = reports.iter().map(moment_row).collect();
    let mut text = String::new();
    for r in &reports {
        text.push_str(&format!("g={} |H|={} empirical {}", r.spec.g, r.family_size, fmt_f(r.empirical)));
        if variant != Variant::Min {
            text.push_str(&format!(" ratio_zeta {}", fmt_f(r.ratio_zeta)));
        }
        if variant != Variant::Zeta {
            text.push_str(&format!(" ratio_min {}", fmt_f(r.ratio_min)));
        }
        if r.zeros_detected > 0 {
            text.push_str(&format!(" zeros {}", r.zeros_detected));
        }
        text.push('\n');
    }
    let json = if reports.len() == 1 {
        serde_json::to_value(&reports[0])?
    } else {
        json!({ "reports": reports, "warnings": warnings })
    };
    Ok(Output::new("moments", json)
        .table(
            &["g", "family_size", "empirical", "bound_zeta", "bound_min", "ratio_zeta", "ratio_min", "zeros_detected"],
            rows,
        )
        .text(text))
}

fn charsums(ctx: &Ctx, q: u32, g: usize, m: f64, n: usize, explore: bool, contour: bool) -> Result<Outcome, Error> {
    let spec = if explore {
        let (s, w) = CharSumSpec::exploratory(q, g, m, n)?;
        if let Some(w) = w {
            eprintln!("warning: {w}");
        }
        s
    } else {
        CharSumSpec::new(q, g, m, n)?
    };
    let family = ctx.family(q, g)?;
    let r = s_m_moment(&family, &spec, &ctx.opts)?;
    let mut failure = None;
    if contour {
        for i in 0..family.len() {
            if let Err(e) = check_contour(&family.lpoly(i)?, n) {
                failure = Some(e.to_string());
                break;
            }
        }
    }
    let rows = r
        .prefix_sums
        .iter()
        .enumerate()
        .map(|(i, &s)| vec![family.discriminant(i).encode(), s.to_string(), fmt_f(power_contribution(s, m))])
        .collect();
    let text = format!(
        "q={q} g={g} m={m} N={n} |H|={}\nS_m {}\nbound {}\nratio {}\nmax |prefix| {}\n",
        r.family_size,
        fmt_f(r.value),
        fmt_f(r.bound),
        fmt_f(r.ratio),
        r.histogram.max_abs
    );
    let prefix_col = format!("prefix_sum({n})");
    let output = Output::new("charsums", serde_json::to_value(&r)?)
        .table(&["D", &prefix_col, "contribution"], rows)
        .text(text);
    Ok(Outcome { output, failure })
}

fn verify(
    ctx: &Ctx,
    suite: Suite,
    q: u32,
    g: usize,
    n: Option<usize>,
    update: bool,
    path: Option<&Path>,
) -> Result<Outcome, Error> {
    let mut entries: BTreeMap<String, f64> = BTreeMap::new();
    let mut checks = serde_json::Map::new();
    let mut failures = Vec::new();
    let opts = &ctx.opts;
    match suite {
        Suite::Mertens => {
            let n = n.unwrap_or(8);
            entries = baselines::mertens_entries(q, n)?;
            let table = PrimeTable::build(&FieldSpec::new(q)?, n)?;
            let b: Vec<f64> = (1..=n).map(|k| mertens_log(&table, k).map(|r| r.b_estimate)).collect::<Result<_, _>>()?;
            checks.insert("b_estimates".into(), json!(b));
        }
        Suite::Charavg => entries = baselines::charavg_entries(q, g, n.unwrap_or(4), opts)?,
        Suite::Prop32 => {
            let n = n.unwrap_or(3.min(2 * g + 1));
            entries = baselines::prop32_entries(q, g, n, &[1.0], &[0.0], opts)?;
        }
        Suite::Theorem1 => {
            entries = baselines::theorem1_entries(q, g, &[1.0], &[0.0], opts)?;
            entries.extend(baselines::theorem1_entries(q, g, &[1.0, 1.0], &[0.0, PI / 2.0], opts)?);
        }
        Suite::Theorem2 => entries = baselines::theorem2_entries(q, g, 1.5, n.unwrap_or(g), 256, opts)?,
        Suite::All => entries = baselines::compute_all(opts)?,
        Suite::Prop31 => {
            let family = ctx.family(q, g)?;
            let hs: Vec<usize> = (1..=2 * g + 1).collect();
            let thetas: Vec<f64> = (0..8).map(|k| k as f64 * PI / 4.0).collect();
            let s = prop31_suite(&family, &hs, &thetas, opts)?;
            if s.violations > 0 {
                failures.push(format!("{} violations, worst {:?} with slack {:e}", s.violations, s.worst, s.min_slack));
            }
            checks.insert("prop31".into(), serde_json::to_value(&s)?);
        }
        Suite::Tail => {
            let family = ctx.family(q, g)?;
            let r = tail_suite(&family, opts)?;
            if r.violations > 0 {
                failures.push(format!("{} tail violations", r.violations));
            }
            checks.insert("tail".into(), serde_json::to_value(&r)?);
        }
    }
    let path = path.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(baselines::DEFAULT_PATH));
    let mut frozen = Baselines::load_or_default(&path)?;
    let mut unfrozen = Vec::new();
    let mut mismatches = Vec::new();
    if update {
        frozen.update(&entries);
        if !entries.is_empty() {
            frozen.save(&path)?;
        }
    } else {
        for m in frozen.compare(&entries, baselines::TOLERANCE) {
            match m.frozen {
                None => unfrozen.push(m.key),
                Some(f) => {
                    failures.push(format!("{} moved from {f:e} to {:e}", m.key, m.fresh));
                    mismatches.push(json!({ "key": m.key, "frozen": f, "fresh": m.fresh }));
                }
            }
        }
    }
    let mut text = String::new();
    for (k, v) in &entries {
        text.push_str(&format!("{k} = {}\n", fmt_f(*v)));
    }
    for (k, v) in &checks {
        text.push_str(&format!("{k}: {v}\n"));
    }
    for k in &unfrozen {
        text.push_str(&format!("not frozen: {k}\n"));
    }
    text.push_str(if failures.is_empty() { "ok\n" } else { "FAILED\n" });
    let rows = entries.iter().map(|(k, v)| vec![k.clone(), fmt_f(*v)]).collect();
    let json = json!({
        "suite": format!("{suite:?}").to_lowercase(),
        "q": q,
        "g": g,
        "entries": entries,
        "checks": checks,
        "mismatches": mismatches,
        "unfrozen": unfrozen,
        "updated": update,
        "passed": failures.is_empty(),
    });
    Ok(Outcome {
        output: Output::new("verify", json).table(&["key", "value"], rows).text(text),
        failure: (!failures.is_empty()).then(|| failures.join("; ")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_lists() {
        assert_eq!(parse_genera("2").unwrap(), vec![2]);
        assert_eq!(parse_genera("1..3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_genera("1..=2").unwrap(), vec![1, 2]);
        assert_eq!(parse_genera("1,3").unwrap(), vec![1, 3]);
        assert!(parse_genera("3..1").is_err());
    }

    #[test]
    fn budgets() {
        assert_eq!(parse_budget("1e7").unwrap(), 10_000_000);
        assert_eq!(parse_budget("500").unwrap(), 500);
        assert!(parse_budget("x").is_err());
    }

    #[test]
    fn float_format_has_17_digits() {
        assert_eq!(fmt_f(0.1), "1.0000000000000001e-1");
    }
}
