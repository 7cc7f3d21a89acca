mod config_json;
mod svg;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use heilbronn::certifier::{certify, Budget, CertifierOracle, Status};
use heilbronn::enhancements::{derive_y_bounds, y_bound_table_exact, EnhancementSet, Frac, Groups};
use heilbronn::geometry::{canonicalize, min_triangle_area, Configuration};
use heilbronn::heuristics::{
    bounds_for, known_configuration, local_refine, registry_upper, sample_lower_bound, BoundsH, BoundsPolicy,
    StepSchedule, DEFAULT_SAMPLES,
};
use heilbronn::model::{build_approach1, build_approach2, build_approach3, export, FormulationModel};
use serde_json::{json, Value};

/// Formulate, search and certify point placements for the Heilbronn triangle problem.
#[derive(Parser)]
#[command(name = "heilbronn", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Recompute the smallest triangle of a configuration file.
    Verify { file: PathBuf },
    /// Sample random placements, optionally refine the best, and save it.
    Heuristic {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Local refinement iterations applied to the best sample.
        #[arg(long, default_value_t = 0)]
        refine: usize,
        #[arg(long)]
        seed: u64,
        /// Witness file, `heuristic_n<N>_seed<SEED>.json` by default.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run record file, next to the witness by default.
        #[arg(long)]
        record: Option<PathBuf>,
    },
    /// Write an LP model for one of the three formulations.
    Export {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        approach: u8,
        /// Dyadic digits per coordinate; required by approach 3.
        #[arg(long)]
        bits: Option<usize>,
        /// Use the McCormick relaxation of the digit products (approach 3).
        #[arg(long)]
        relaxed: bool,
        /// Enhancement groups: 1 bounds and symmetry, 2 boundary, 4 packing.
        #[arg(long, default_value_t = 7)]
        mask: u8,
        #[arg(long, value_enum, default_value_t = BoundsSource::Registry)]
        bounds: BoundsSource,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Prove an upper bound by interval branch and bound.
    Certify {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 7)]
        mask: u8,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        /// Wall-clock budget in seconds.
        #[arg(long)]
        time: Option<f64>,
        #[arg(long)]
        nodes: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
        /// Start from sampled placements with this seed instead of the stored ones.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Result JSON file; printed to stdout either way.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "results.csv")]
        csv: PathBuf,
        /// Run record file.
        #[arg(long)]
        record: Option<PathBuf>,
    },
    /// Print the compiled y bounds next to the ones derived from strip capacities.
    BoundsTable {
        #[arg(long)]
        n: usize,
        /// Skip the derivation and print the compiled bounds only.
        #[arg(long)]
        no_derive: bool,
        /// Seconds allowed for each strip subproblem.
        #[arg(long, default_value_t = 60.0)]
        time: f64,
    },
    /// Draw a configuration as SVG with its smallest triangle filled.
    Plot {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a stored configuration to a file.
    Known {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundsSource {
    /// Stored placement as the lower bound.
    Registry,
    /// A million samples with the default seed.
    Sampled,
}

/// Failure carrying the process exit code.
struct Fail(u8, String);

impl From<String> for Fail {
    fn from(s: String) -> Self {
        Fail(2, s)
    }
}

impl From<heilbronn::HeilbronnError> for Fail {
    fn from(e: heilbronn::HeilbronnError) -> Self {
        Fail(2, e.to_string())
    }
}

type CmdResult = Result<u8, Fail>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.cmd {
        Cmd::Verify { file } => verify(&file),
        Cmd::Heuristic { n, samples, refine, seed, out, record } => heuristic(n, samples, refine, seed, out, record),
        Cmd::Export { n, approach, bits, relaxed, mask, bounds, out_dir } => {
            export_cmd(n, approach, bits, relaxed, mask, bounds, &out_dir)
        }
        Cmd::Certify { n, mask, tol, time, nodes, threads, seed, samples, out, csv, record } => {
            certify_cmd(CertifyArgs { n, mask, tol, time, nodes, threads, seed, samples, out, csv, record })
        }
        Cmd::BoundsTable { n, no_derive, time } => bounds_table(n, !no_derive, time),
        Cmd::Plot { file, out } => plot(&file, &out),
        Cmd::Known { n, out } => known(n, &out),
    };
    match r {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

/// Stored configuration for `n`, read from `HEILBRONN_DATA_DIR/n<N>.json` when that exists.
fn registry_configuration(n: usize) -> Result<Configuration, Fail> {
    if let Ok(dir) = std::env::var("HEILBRONN_DATA_DIR") {
        let path = Path::new(&dir).join(format!("n{n}.json"));
        if path.exists() {
            let (c, _) = config_json::read(&path)?;
            if c.n() != n {
                return Err(Fail(2, format!("{} holds {} points, expected {n}", path.display(), c.n())));
            }
            return Ok(c);
        }
    }
    Ok(known_configuration(n)?.points)
}

fn registry_bounds(n: usize) -> Result<BoundsH, Fail> {
    let c = canonicalize(&registry_configuration(n)?);
    let (upper, prov) = registry_upper(n);
    Ok(BoundsH::from_witness(c.clone(), upper.max(c.min_abs()), prov)?)
}

fn unix_time() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn write_record(path: &Path, command: &str, parameters: Value, seed: Option<u64>, outputs: Value, wall: Duration) -> Result<(), Fail> {
    let rec = json!({
        "command": command,
        "parameters": parameters,
        "seed": seed,
        "outputs": outputs,
        "wall_time": wall.as_secs_f64(),
        "tool_version": env!("CARGO_PKG_VERSION"),
        "timestamp": unix_time(),
    });
    std::fs::write(path, serde_json::to_string_pretty(&rec).unwrap() + "\n")
        .map_err(|e| Fail(2, format!("cannot write {}: {e}", path.display())))
}

fn verify(file: &Path) -> CmdResult {
    let (c, _) = config_json::read(file)?;
    let t = min_triangle_area(&c);
    let (i, j, k) = t.argmin;
    println!("min area: {:.7}", t.min_abs);
    println!("argmin: {} {} {}", i + 1, j + 1, k + 1);
    println!("{}", json!({"n": c.n(), "min_area": t.min_abs, "argmin": [i + 1, j + 1, k + 1]}));
    Ok(0)
}

fn heuristic(n: usize, samples: usize, refine: usize, seed: u64, out: Option<PathBuf>, record: Option<PathBuf>) -> CmdResult {
    let clock = Instant::now();
    let s = sample_lower_bound(n, samples, seed)?;
    let mut c = s.witness;
    if refine > 0 {
        c = local_refine(&c, refine, StepSchedule::default(), seed);
    }
    let bound = c.min_abs();
    let wall = clock.elapsed();
    let out = out.unwrap_or_else(|| PathBuf::from(format!("heuristic_n{n}_seed{seed}.json")));
    let meta = json!({"source": "heuristic", "samples": samples, "refine": refine, "seed": seed, "min_area": bound});
    config_json::write(&out, &c, &meta)?;
    let record = record.unwrap_or_else(|| out.with_extension("run.json"));
    write_record(
        &record,
        "heuristic",
        json!({"n": n, "samples": samples, "refine": refine}),
        Some(seed),
        json!({"lower": bound, "witness": out.display().to_string()}),
        wall,
    )?;
    println!("lower bound: {:.7} ({})", bound, config_json::fmt17(bound));
    println!("witness: {}", out.display());
    Ok(0)
}

fn export_cmd(n: usize, approach: u8, bits: Option<usize>, relaxed: bool, mask: u8, source: BoundsSource, dir: &Path) -> CmdResult {
    if approach == 3 && bits.is_none() {
        return Err(Fail(2, "approach 3 needs --bits".into()));
    }
    if approach != 3 && (bits.is_some() || relaxed) {
        return Err(Fail(2, "--bits and --relaxed only apply to approach 3".into()));
    }
    let bounds = match source {
        BoundsSource::Registry => registry_bounds(n)?,
        BoundsSource::Sampled => bounds_for(n, &BoundsPolicy::Standard)?,
    };
    let enh = EnhancementSet::new(Groups::from_mask(mask)?, bounds.clone())?;
    let model: FormulationModel = match approach {
        1 => build_approach1(n, &bounds, &enh)?,
        2 => build_approach2(n, &bounds, &enh)?,
        _ => build_approach3(n, &bounds, bits.unwrap(), relaxed, &enh)?,
    };
    std::fs::create_dir_all(dir).map_err(|e| Fail(2, format!("cannot create {}: {e}", dir.display())))?;
    let path = export(&model, dir).map_err(|e| Fail(2, format!("cannot write model: {e}")))?;
    println!("{}", path.display());
    println!(
        "variables {} binaries {} linear {} quadratic {}",
        model.num_variables(),
        model.num_binaries(),
        model.linear.len(),
        model.quadratic.len()
    );
    Ok(0)
}

struct CertifyArgs {
    n: usize,
    mask: u8,
    tol: f64,
    time: Option<f64>,
    nodes: Option<u64>,
    threads: Option<usize>,
    seed: Option<u64>,
    samples: usize,
    out: Option<PathBuf>,
    csv: PathBuf,
    record: Option<PathBuf>,
}

fn certify_cmd(a: CertifyArgs) -> CmdResult {
    let n = a.n;
    let start = match a.seed {
        Some(seed) => {
            let s = sample_lower_bound(n, a.samples, seed)?;
            canonicalize(&local_refine(&s.witness, 100_000, StepSchedule::default(), seed))
        }
        None => canonicalize(&registry_configuration(n).map_err(|Fail(_, m)| {
            Fail(2, format!("{m}; pass --seed to start from sampled placements"))
        })?),
    };
    let (upper, prov) = registry_upper(n);
    let bounds = BoundsH::from_witness(start.clone(), upper.max(start.min_abs()), prov)?;
    let enh = EnhancementSet::new(Groups::from_mask(a.mask)?, bounds)?;
    if let Some(t) = a.time {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Fail(2, format!("--time must be positive, got {t}")));
        }
    }
    let budget = Budget {
        max_nodes: a.nodes,
        max_time: a.time.map(Duration::from_secs_f64),
        threads: a.threads,
    };
    let r = certify(n, &enh, &start, a.tol, &budget)?;
    let secs = r.wall_time.as_secs_f64();
    let incumbent: Vec<Value> = r.incumbent.points().iter().map(|p| json!({"x": p.x, "y": p.y})).collect();
    let result = json!({
        "n": n,
        "mask": a.mask,
        "tol": a.tol,
        "status": r.status.as_str(),
        "lower": r.incumbent_lower,
        "upper": r.proven_upper,
        "nodes": r.nodes_explored,
        "seconds": secs,
        "incumbent": incumbent,
    });
    let text = serde_json::to_string_pretty(&result).unwrap();
    println!("{text}");
    if let Some(out) = &a.out {
        std::fs::write(out, text + "\n").map_err(|e| Fail(2, format!("cannot write {}: {e}", out.display())))?;
    }
    append_csv(&a.csv, n, r.incumbent_lower, r.proven_upper, r.nodes_explored, secs, r.status.as_str())?;
    if let Some(rec) = &a.record {
        write_record(
            rec,
            "certify",
            json!({"n": n, "mask": a.mask, "tol": a.tol, "time": a.time, "nodes": a.nodes, "samples": a.samples}),
            a.seed,
            json!({"lower": r.incumbent_lower, "upper": r.proven_upper, "status": r.status.as_str(), "nodes": r.nodes_explored}),
            r.wall_time,
        )?;
    }
    eprintln!("{}: [{:.7}, {:.7}] after {} nodes", r.status.as_str(), r.incumbent_lower, r.proven_upper, r.nodes_explored);
    Ok(if r.status == Status::Certified { 0 } else { 1 })
}

fn append_csv(path: &Path, n: usize, lb: f64, ub: f64, nodes: u64, secs: f64, status: &str) -> Result<(), Fail> {
    let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let mut f = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Fail(2, format!("cannot open {}: {e}", path.display())))?;
    let mut line = String::new();
    if fresh {
        line.push_str("n,lb,ub,nodes,seconds,status\n");
    }
    line.push_str(&format!("{n},{lb},{ub},{nodes},{secs:.6},{status}\n"));
    f.write_all(line.as_bytes())
        .map_err(|e| Fail(2, format!("cannot write {}: {e}", path.display())))
}

fn frac(r: Frac) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn bounds_table(n: usize, derive: bool, secs: f64) -> CmdResult {
    let embedded = match y_bound_table_exact(n) {
        Ok(t) => t,
        Err(e) => {
            println!("{e}");
            return Ok(0);
        }
    };
    let derived = if derive {
        if !(secs > 0.0 && secs.is_finite()) {
            return Err(Fail(2, format!("--time must be positive, got {secs}")));
        }
        let h = registry_configuration(n)?.min_abs();
        let mut oracle = CertifierOracle::new(Budget::time(Duration::from_secs_f64(secs)));
        Some(derive_y_bounds(n, h, &mut oracle)?)
    } else {
        None
    };
    println!("{:>3}  {:>8} {:>8}  {:>8} {:>8}", "i", "lo", "hi", "der. lo", "der. hi");
    let mut mismatches = 0;
    for (i, &(lo, hi)) in embedded.iter().enumerate() {
        let (dl, dh, mark) = match &derived {
            Some(d) => {
                let (a, b) = d.bounds[i];
                let same = (a, b) == (lo, hi);
                mismatches += usize::from(!same);
                (frac(a), frac(b), if same { "" } else { "  differs" })
            }
            None => ("-".into(), "-".into(), ""),
        };
        println!("{:>3}  {:>8} {:>8}  {:>8} {:>8}{mark}", i + 1, frac(lo), frac(hi), dl, dh);
    }
    if let Some(d) = &derived {
        let caps: Vec<String> = d.capacities.iter().map(|c| format!("m{}={}", c.kappa, c.capacity)).collect();
        println!("strip capacities: {}", caps.join(" "));
        if d.inconclusive {
            println!("derivation inconclusive: some capacities were not settled within the budget");
            return Ok(1);
        }
        if mismatches > 0 {
            println!("{mismatches} rows differ from the compiled bounds");
        }
    }
    Ok(0)
}

fn plot(file: &Path, out: &Path) -> CmdResult {
    let (c, _) = config_json::read(file)?;
    let (doc, (i, j, k)) = svg::render(&c);
    std::fs::write(out, doc).map_err(|e| Fail(2, format!("cannot write {}: {e}", out.display())))?;
    println!("smallest triangle: {} {} {}", i + 1, j + 1, k + 1);
    Ok(0)
}

fn known(n: usize, out: &Path) -> CmdResult {
    let k = known_configuration(n)?;
    let meta = json!({"source": "registry", "published_area": k.published_area});
    config_json::write(out, &k.points, &meta)?;
    println!("{}", out.display());
    Ok(0)
}
