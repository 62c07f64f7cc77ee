mod commands;
mod corpus;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use fsplit_core::field::is_prime;
use fsplit_core::scan::{curve_record, random_smooth_cubics};
use fsplit_core::witt::{cache, cache_stats};
use fsplit_core::Error;

use commands::{Direction, HeightFlags, HeightMethod};
use corpus::{algebra_from, parse_corpus, CorpusRecord, Kind};
use report::{RecordResult, RunReport, Runtime};

#[derive(Parser, Debug)]
#[command(name = "fsplit", version, about = "Quasi-F-split heights, Witt vector checks and Cartier modules over F_p")]
struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
enum Command {
    /// Quasi-F-split heights of algebras, cubics and products of elliptic curves.
    Height {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 3)]
        nmax: usize,
        #[arg(long, default_value_t = 6)]
        pole_bound: u32,
        #[arg(long, value_enum, default_value_t = HeightMethod::Auto)]
        method: HeightMethod,
    },
    /// Witt ring identity suite, ghost check and exact sequences.
    WittIdentities {
        #[arg(long)]
        p: Option<u32>,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Algebra such as `F_4` or `F_2[x]/(x^2)`; defaults to F_p.
        #[arg(long, conflicts_with = "corpus")]
        algebra: Option<String>,
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Compare the truncated Cartier box product with Witt vectors of the tensor product.
    BoxCheck {
        #[arg(long, required_unless_present = "a")]
        corpus: Option<PathBuf>,
        #[arg(long, requires = "b", conflicts_with = "corpus")]
        a: Option<String>,
        #[arg(long, requires = "a")]
        b: Option<String>,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Build a quasi-F-splitting of A ⊗ B, or certify that none exists.
    ProductDemo {
        #[arg(long, required_unless_present = "a")]
        corpus: Option<PathBuf>,
        #[arg(long, requires = "b", conflicts_with = "corpus")]
        a: Option<String>,
        #[arg(long, requires = "a")]
        b: Option<String>,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Direction::Build)]
        direction: Direction,
    },
    /// Random smooth plane cubics: point counts, p-rank and heights by each method.
    CurveScan {
        #[arg(long, value_delimiter = ',', default_values_t = vec![2, 3, 5])]
        p: Vec<u32>,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        nmax: usize,
        #[arg(long, default_value_t = 6)]
        pole_bound: u32,
    },
    /// Manage the structure polynomial disk cache.
    Cache {
        #[arg(value_enum)]
        action: CacheAction,
        #[arg(long, default_value_t = 5)]
        pmax: u32,
        #[arg(long, default_value_t = 3)]
        nmax: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum CacheAction {
    Show,
    Clear,
    Warm,
}

/// A fatal input problem: the run does not start.
struct InputError(String);

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(e.to_string())
    }
}

fn read_corpus(path: &PathBuf) -> Result<(Vec<u8>, Vec<CorpusRecord>), InputError> {
    let bytes = fs::read(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let recs = parse_corpus(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    Ok((bytes, recs))
}

/// A corpus restricted to one record kind.
fn read_corpus_kind(path: &PathBuf, kind: Kind) -> Result<(Vec<u8>, Vec<CorpusRecord>), InputError> {
    let (bytes, mut recs) = read_corpus(path)?;
    recs.retain(|r| r.kind == kind);
    Ok((bytes, recs))
}

/// Records for commands that take either `--corpus` or a pair of flags.
fn pair_records(corpus: &Option<PathBuf>, a: &Option<String>, b: &Option<String>) -> Result<(Vec<u8>, Vec<CorpusRecord>), InputError> {
    match (corpus, a, b) {
        (Some(path), _, _) => read_corpus_kind(path, Kind::CartierPair),
        (None, Some(a), Some(b)) => {
            let rec = CorpusRecord {
                id: format!("{a} x {b}"),
                kind: Kind::CartierPair,
                payload: json!({"a": a, "b": b}),
                expected: None,
            };
            Ok((Vec::new(), vec![rec]))
        }
        _ => Err(InputError("give --corpus or both --a and --b".into())),
    }
}

/// Nested `expected` scopes; `height` reads the remaining top-level keys.
const SCOPES: &[&str] = &["witt-identities", "box-check", "product-demo-build", "product-demo-refute"];

/// `expected` keys apply to `height`; other commands read `expected[scope]`.
fn scoped_expected(expected: Option<&Value>, scope: &str) -> Option<Value> {
    let obj = expected?.as_object()?;
    if scope != "height" {
        return obj.get(scope).filter(|v| v.is_object()).cloned();
    }
    let top: serde_json::Map<String, Value> = obj
        .iter()
        .filter(|(k, _)| !SCOPES.contains(&k.as_str()))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    (!top.is_empty()).then_some(Value::Object(top))
}

fn run_records(
    records: &[CorpusRecord],
    scope: &str,
    f: impl Fn(&CorpusRecord) -> commands::Outcome + Sync,
) -> Vec<RecordResult> {
    records
        .par_iter()
        .map(|r| {
            let kind = serde_json::to_value(r.kind).unwrap().as_str().unwrap_or_default().to_string();
            let expected = scoped_expected(r.expected.as_ref(), scope);
            RecordResult::from_outcome(&r.id, &kind, f(r), expected.as_ref())
        })
        .collect()
}

fn run(cli: &Cli) -> Result<Value, InputError> {
    let start = Instant::now();
    let command = serde_json::to_value(&cli.command).expect("command serializes");
    let (input, records) = match &cli.command {
        Command::Height {
            corpus,
            nmax,
            pole_bound,
            method,
        } => {
            let (input, recs) = read_corpus(corpus)?;
            let flags = HeightFlags {
                n_max: *nmax,
                pole_bound: *pole_bound,
                method: *method,
            };
            (input, run_records(&recs, "height", |r| commands::height(r, flags)))
        }
        Command::WittIdentities {
            p,
            n,
            algebra,
            corpus,
            seed,
        } => {
            let (input, recs) = match (corpus, algebra, p) {
                (Some(path), _, _) => read_corpus_kind(path, Kind::Algebra)?,
                (None, Some(spec), _) => (Vec::new(), vec![algebra_record(spec)]),
                (None, None, Some(p)) => (Vec::new(), vec![algebra_record(&format!("F_{p}"))]),
                (None, None, None) => return Err(InputError("give --p, --algebra or --corpus".into())),
            };
            let results = run_records(&recs, "witt-identities", |r| match r.kind {
                Kind::Algebra => {
                    let a = algebra_from(&r.payload)?;
                    if let Some(p) = p {
                        if a.p() != *p {
                            return Err(Error::RingMismatch(format!("--p {p} but {} has characteristic {}", a.name(), a.p())));
                        }
                    }
                    commands::witt_identities(&a, *n, *seed)
                }
                _ => Err(Error::Invalid("witt-identities takes algebra records".into())),
            });
            (input, results)
        }
        Command::BoxCheck { corpus, a, b, n } => {
            let (input, recs) = pair_records(corpus, a, b)?;
            (
                input,
                run_records(&recs, "box-check", |r| {
                    let (a, b) = commands::pair_record(r)?;
                    commands::box_check(&a, &b, *n)
                }),
            )
        }
        Command::ProductDemo {
            corpus,
            a,
            b,
            n,
            direction,
        } => {
            let (input, recs) = pair_records(corpus, a, b)?;
            let scope = match direction {
                Direction::Build => "product-demo-build",
                Direction::Refute => "product-demo-refute",
            };
            (
                input,
                run_records(&recs, scope, |r| {
                    let (a, b) = commands::pair_record(r)?;
                    commands::product_demo(&a, &b, *n, *direction)
                }),
            )
        }
        Command::CurveScan {
            p,
            count,
            seed,
            nmax,
            pole_bound,
        } => {
            let mut curves = Vec::new();
            for &q in p {
                for (i, c) in random_smooth_cubics(q, *count, *seed)?.into_iter().enumerate() {
                    curves.push((format!("p{q}-{i:04}"), c));
                }
            }
            let results = curves
                .par_iter()
                .map(|(id, c)| {
                    let out = curve_record(c, *nmax, *pole_bound).map(|r| {
                        let ok = r.agree;
                        (serde_json::to_value(r).expect("record serializes"), ok)
                    });
                    RecordResult::from_outcome(id, "curve", out, None)
                })
                .collect();
            (Vec::new(), results)
        }
        Command::Cache { action, pmax, nmax } => return cache_admin(*action, *pmax, *nmax),
    };
    let input = if input.is_empty() { command.to_string().into_bytes() } else { input };
    let runtime = Runtime {
        elapsed_ms: start.elapsed().as_millis(),
        jobs: rayon::current_num_threads(),
        cache: cache_stats(),
    };
    let report = RunReport::new(command, &input, records, runtime);
    Ok(json!({"exit": report.exit_code(), "report": report}))
}

fn algebra_record(spec: &str) -> CorpusRecord {
    CorpusRecord {
        id: spec.to_string(),
        kind: Kind::Algebra,
        payload: Value::String(spec.to_string()),
        expected: None,
    }
}

fn cache_admin(action: CacheAction, pmax: u32, nmax: usize) -> Result<Value, InputError> {
    let dir = cache::cache_dir();
    let mut out = json!({"action": action, "dir": dir.display().to_string()});
    match action {
        CacheAction::Show => {}
        CacheAction::Clear => {
            out["removed"] = json!(cache::clear(&dir)?);
        }
        CacheAction::Warm => {
            let keys: Vec<(u32, usize)> = (2..=pmax)
                .filter(|&p| is_prime(p))
                .flat_map(|p| (2..=nmax).map(move |n| (p, n)))
                .collect();
            keys.par_iter()
                .map(|&(p, n)| cache::load_or_compute(&dir, p, n).map(|_| ()))
                .collect::<Result<Vec<()>, Error>>()?;
            out["warmed"] = json!(keys.len());
        }
    }
    let entries: Vec<Value> = cache::list_entries(&dir)
        .into_iter()
        .map(|(p, n)| json!({"p": p, "n": n}))
        .collect();
    out["entries"] = Value::Array(entries);
    Ok(json!({"exit": 0, "report": out}))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
        log::warn!("worker pool: {e}");
    }
    let outcome = match run(&cli) {
        Ok(v) => v,
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let code = outcome["exit"].as_i64().unwrap_or(2) as u8;
    let text = serde_json::to_string_pretty(&outcome["report"]).expect("report serializes") + "\n";
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}
