use std::fs::{self, OpenOptions};
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use semieq::census::{self, CensusReport};
use semieq::io::{self as mapio, IoError, MapFile};
use semieq::reps::{self, RepError, RepParams};
use semieq::walkers;
use semieq::{canonical_form, MapType, PolygonalMap, Vertex};

#[derive(Parser)]
#[command(name = "semieq", version, about = "Semi-equivelar maps on the Klein bottle")]
struct Cli {
    /// Largest n the enumerator may touch (SEMIEQ_BUDGET wins if set).
    #[arg(long, global = true, default_value_t = census::DEFAULT_BUDGET)]
    budget: usize,
    /// Worker threads for census sweeps.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Seed for the order in which census jobs are scheduled.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Off,
    Dot,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a map from a representation, e.g. planar:7,4,1 or mobius:plain,7,3.
    Build {
        #[arg(long = "type")]
        ty: MapType,
        #[arg(long)]
        rep: RepParams,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Check a map file and print its invariants.
    Verify { file: PathBuf },
    /// Decide isomorphism of two map files, or print digests.
    Iso {
        #[arg(required = true, num_args = 1..=2)]
        files: Vec<PathBuf>,
        /// Print the canonical-form digest of each file.
        #[arg(long)]
        digest: bool,
    },
    /// Write the dual map.
    Dual {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Classify the strip around a cycle: a vertex list `0,1,2,...`, or
    /// `row:i` / `core:i` for maps that carry their representation.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        cycle: String,
    },
    /// Evaluate the counting formula.
    Count {
        #[arg(long = "type")]
        ty: MapType,
        #[arg(long)]
        n: usize,
    },
    /// Compare the counting formula with constructed classes over a range of n.
    Census {
        /// A dotted type name or `all`.
        #[arg(long = "type")]
        ty: String,
        /// A single n or a range `a..b` (inclusive).
        #[arg(long, conflicts_with = "n_range")]
        n: Option<String>,
        #[arg(long)]
        n_range: Option<String>,
        /// Append the reports to this file, one JSON document per line.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Domain(String),
    Io(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Json(_) | IoError::Format(_) => Failure::Io(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

impl From<RepError> for Failure {
    fn from(e: RepError) -> Self {
        Failure::Domain(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let budget = if std::env::var_os("SEMIEQ_BUDGET").is_some() { census::budget_from_env() } else { cli.budget };
    if cli.workers == Some(0) {
        return Err(Failure::Domain("workers must be at least 1".into()));
    }
    if budget == 0 {
        return Err(Failure::Domain("budget must be at least 1".into()));
    }
    match cli.cmd {
        Cmd::Build { ty, rep, out, format } => {
            let built = reps::build(ty, rep)?;
            summary(&built.map, ty);
            emit(&built.map, ty, Some(rep), out.as_deref(), format)
        }
        Cmd::Verify { file } => {
            let mf = read_map(&file)?;
            summary(&mf.map, mf.map_type);
            let report = mf.map.klein_report(mf.map_type);
            if !report.ok() {
                return Err(Failure::Domain("not a semi-equivelar map on the Klein bottle".into()));
            }
            if let Some(rep) = mf.rep {
                match reps::build_unchecked(mf.map_type, rep) {
                    Ok(b) if b.map.normalized_faces() == mf.map.normalized_faces() => println!("rep: {rep} (faces agree)"),
                    _ => println!("rep: {rep} (faces differ from a fresh build)"),
                }
            }
            println!("ok");
            Ok(())
        }
        Cmd::Iso { files, digest } => {
            let maps = files.iter().map(|f| read_map(f)).collect::<Result<Vec<_>, _>>()?;
            if digest {
                for (f, m) in files.iter().zip(&maps) {
                    println!("{}  {}", canonical_form(&m.map).digest(), f.display());
                }
            }
            if let [a, b] = maps.as_slice() {
                match semieq::isomorphism(&a.map, &b.map) {
                    Some(phi) => {
                        println!("isomorphic");
                        let pairs: Vec<String> = phi.iter().enumerate().map(|(v, w)| format!("{v}->{w}")).collect();
                        println!("witness: {}", pairs.join(" "));
                    }
                    None => println!("not isomorphic"),
                }
            }
            Ok(())
        }
        Cmd::Dual { file, out, format } => {
            let mf = read_map(&file)?;
            let d = semieq::dual(&mf.map).map_err(|e| Failure::Domain(e.to_string()))?;
            let ty = d.detect_type().ok_or_else(|| Failure::Domain(format!("the dual of a {} map is not semi-equivelar", mf.map_type)))?;
            summary(&d, ty);
            emit(&d, ty, None, out.as_deref(), format)
        }
        Cmd::Decompose { file, cycle } => {
            let mf = read_map(&file)?;
            let c = parse_cycle(&mf, &cycle)?;
            let cls = walkers::classify_strip(&mf.map, &c).map_err(|e| Failure::Domain(e.to_string()))?;
            println!("{}", serde_json::to_string(&cls).expect("classification serializes"));
            Ok(())
        }
        Cmd::Count { ty, n } => {
            println!("{}", census::formula_count(ty, n));
            Ok(())
        }
        Cmd::Census { ty, n, n_range, out } => {
            let arg = n.or(n_range).ok_or_else(|| Failure::Domain("give --n or --n-range".into()))?;
            let range = parse_range(&arg)?;
            let types: Vec<MapType> = if ty == "all" {
                MapType::ALL.to_vec()
            } else {
                vec![ty.parse().map_err(|e: semieq::types::UnknownType| Failure::Domain(e.to_string()))?]
            };
            let mut ns: Vec<usize> = range.collect();
            ns.shuffle(&mut ChaCha8Rng::seed_from_u64(cli.seed));
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(cli.workers.unwrap_or(0))
                .build()
                .map_err(|e| Failure::Io(e.to_string()))?;
            let mut reports = Vec::new();
            for t in types {
                let mut r: CensusReport = pool
                    .install(|| census::concordance(t, ns.iter().copied(), budget))
                    .map_err(|e| Failure::Domain(e.to_string()))?;
                r.entries.sort_by_key(|e| e.n);
                reports.push(r);
            }
            let text: String = reports.iter().map(|r| serde_json::to_string(r).expect("report serializes") + "\n").collect();
            match out {
                Some(p) => {
                    let mut f = OpenOptions::new().create(true).append(true).open(&p).map_err(|e| io_err(&p, e))?;
                    f.write_all(text.as_bytes()).map_err(|e| io_err(&p, e))?;
                    for r in &reports {
                        let bad = r.entries.iter().filter(|e| e.verdict == census::Verdict::Mismatch).count();
                        println!("{}: {} entries, {} mismatches", r.map_type, r.entries.len(), bad);
                    }
                }
                None => print!("{text}"),
            }
            Ok(())
        }
    }
}

fn io_err(p: &Path, e: std::io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", p.display()))
}

fn read_map(p: &Path) -> Result<MapFile, Failure> {
    let text = fs::read_to_string(p).map_err(|e| io_err(p, e))?;
    mapio::from_json(&text).map_err(|e| match Failure::from(e) {
        Failure::Io(m) => Failure::Io(format!("{}: {m}", p.display())),
        Failure::Domain(m) => Failure::Domain(format!("{}: {m}", p.display())),
    })
}

/// Invariants go to stderr when the map itself is written to stdout.
fn summary(m: &PolygonalMap, ty: MapType) {
    let line = format!(
        "type={} n={} E={} F={} chi={} orientable={}",
        ty.name(),
        m.n_vertices(),
        m.n_edges(),
        m.n_faces(),
        m.euler_characteristic(),
        m.is_orientable()
    );
    eprintln!("{line}");
}

fn emit(m: &PolygonalMap, ty: MapType, rep: Option<RepParams>, out: Option<&Path>, format: Format) -> Result<(), Failure> {
    let text = match format {
        Format::Json => mapio::to_json(m, ty, rep),
        Format::Off => mapio::to_off(m),
        Format::Dot => mapio::to_dot(m),
    };
    match out {
        Some(p) => fs::write(p, text).map_err(|e| io_err(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, Failure> {
    let bad = || Failure::Domain(format!("`{s}` is not n or a..b"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a > b {
                return Err(bad());
            }
            Ok(a..=b)
        }
        None => {
            let n = num(s)?;
            Ok(n..=n)
        }
    }
}

fn parse_cycle(mf: &MapFile, arg: &str) -> Result<Vec<Vertex>, Failure> {
    if let Some((which, idx)) = arg.split_once(':') {
        let i: usize = idx.parse().map_err(|_| Failure::Domain(format!("bad index in `{arg}`")))?;
        let rep = mf.rep.ok_or_else(|| Failure::Domain("the map file has no meta.rep".into()))?;
        let b = reps::build_unchecked(mf.map_type, rep)?;
        if b.map.normalized_faces() != mf.map.normalized_faces() {
            return Err(Failure::Domain(format!("the map was not built from {rep}")));
        }
        let list = match which {
            "row" => &b.rows,
            "core" => &b.cores,
            _ => return Err(Failure::Domain(format!("expected row:i or core:i, got `{arg}`"))),
        };
        return list.get(i).cloned().ok_or_else(|| Failure::Domain(format!("{rep} has {} {which}s", list.len())));
    }
    arg.split(',')
        .map(|t| t.trim().parse::<Vertex>().map_err(|_| Failure::Domain(format!("`{t}` is not a vertex"))))
        .collect()
}
