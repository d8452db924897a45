//! Command-line surface for the multideviation toolkit.
//!
//! Exit codes: 0 on success, 1 when a computation succeeds but the checked
//! property is false (an inequality evaluates negative, a Γ is not tight, a
//! constraint fails), 2 on usage, parse, or domain errors.

use clap::{Parser, Subcommand};
use multidev::algebra::format_rational;
use multidev::contexts::EventSpace;
use multidev::error::Error;
use multidev::{json, pioneer, quantum, tbic};
use num_traits::Signed;
use serde::Serialize;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "multidev", version, about = "Multideviation analysis of Bell scenarios")]
struct Cli {
    /// Worker threads for parallel sections (defaults to available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count or enumerate pioneer sets.
    Pioneer {
        #[command(subcommand)]
        cmd: PioneerCmd,
    },
    /// Build, lift, and evaluate Bell inequalities.
    Ineq {
        #[command(subcommand)]
        cmd: IneqCmd,
    },
    /// Verify tight-Bell-inequality conditions.
    Tbic {
        #[command(subcommand)]
        cmd: TbicCmd,
    },
    /// Project an omni-joint distribution onto multiple-context statistics.
    Project {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        dist: PathBuf,
    },
    /// Enumerate all facets of the 2x2x2 Bell polytope.
    Facets {
        #[arg(long, default_value = "jsonl", value_parser = ["json", "jsonl"])]
        format: String,
    },
    /// Quantum violation curves for the even-correlation state.
    Qm {
        #[command(subcommand)]
        cmd: QmCmd,
    },
    /// Multideviation transforms and constraint checks.
    Md {
        #[command(subcommand)]
        cmd: MdCmd,
    },
}

#[derive(Subcommand)]
enum PioneerCmd {
    /// Print total and top-level pioneer counts.
    Count {
        #[arg(long)]
        observers: usize,
    },
    /// Stream every pioneer spec as JSONL.
    Enumerate {
        #[arg(long)]
        observers: usize,
        #[arg(long)]
        top_level_only: bool,
    },
}

#[derive(Subcommand)]
enum IneqCmd {
    /// Inequality of a pioneer spec, with its dependence function attached.
    FromPioneer {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Lift a binary-space inequality to a larger event space.
    Lift {
        #[arg(long)]
        ineq: PathBuf,
        #[arg(long)]
        space: PathBuf,
        /// JSON file {"p": [ids], "q": [ids], "alpha": [[id, [outcomes]], ..]}.
        #[arg(long)]
        lift: PathBuf,
    },
    /// Evaluate an inequality against observed statistics.
    Eval {
        #[arg(long)]
        ineq: PathBuf,
        #[arg(long)]
        space: Option<PathBuf>,
        #[arg(long)]
        dist: PathBuf,
    },
}

#[derive(Subcommand)]
enum TbicCmd {
    /// Check whether Γ defines a tight Bell inequality.
    Check {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        gamma: PathBuf,
    },
}

#[derive(Subcommand)]
enum QmCmd {
    /// Reproduce the maximal-violation table.
    Table {
        /// Comma-separated observer counts.
        #[arg(long, default_value = "2,3,4,5,10,100,1000")]
        rows: String,
        #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
        format: String,
    },
    /// Maximal violation for one observer count.
    MaxViolation {
        #[arg(long)]
        observers: usize,
    },
}

#[derive(Subcommand)]
enum MdCmd {
    /// Multideviation table of a function over a product set.
    Transform {
        #[arg(long)]
        dist: PathBuf,
    },
    /// Probability-constraint check of a multideviation table.
    Check {
        #[arg(long)]
        table: PathBuf,
    },
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("malformed JSON in {}: {e}", path.display()))
}

fn load_space(path: &Path) -> Result<EventSpace, String> {
    let j: json::EventSpaceJson = read_json(path)?;
    json::space_from_json(&j).map_err(|e| e.to_string())
}

/// Rounds to 12 significant digits; output is the shortest representation
/// of the rounded value.
fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (11 - mag).clamp(0, 17) as usize;
    format!("{x:.decimals$}").parse().unwrap_or(x)
}

fn fmt12(x: f64) -> String {
    let r = round12(x);
    let mut s = serde_json::Number::from_f64(r)
        .map(|n| n.to_string())
        .unwrap_or_else(|| r.to_string());
    if !s.contains('.') && !s.contains('e') && !s.contains("inf") && !s.contains("nan") {
        s.push_str(".0");
    }
    s
}

#[derive(Serialize)]
struct CountsOut {
    total: u64,
    top_level: u64,
}

#[derive(Serialize)]
struct ViolationOut {
    observers: usize,
    d_over_pi: f64,
    value: f64,
    /// Coarse minimum of the two-parameter (a, d) form; reported so any
    /// value below the d-open curve is visible rather than asserted away.
    full_scan_value: f64,
}

#[derive(Serialize)]
struct EvalOut {
    value: String,
    satisfied: bool,
}

fn run(command: Command) -> Result<i32, String> {
    match command {
        Command::Pioneer { cmd } => match cmd {
            PioneerCmd::Count { observers } => {
                let c = pioneer::count_pioneers(observers).map_err(stringify)?;
                println!(
                    "{}",
                    serde_json::to_string(&CountsOut { total: c.total, top_level: c.top_level })
                        .unwrap()
                );
                Ok(0)
            }
            PioneerCmd::Enumerate { observers, top_level_only } => {
                let specs =
                    pioneer::enumerate_pioneers(observers, top_level_only).map_err(stringify)?;
                for spec in &specs {
                    println!("{}", serde_json::to_string(&json::pioneer_to_json(spec)).unwrap());
                }
                Ok(0)
            }
        },
        Command::Ineq { cmd } => match cmd {
            IneqCmd::FromPioneer { spec } => {
                let j: json::PioneerSpecJson = read_json(&spec)?;
                let spec = json::pioneer_from_json(&j).map_err(stringify)?;
                let ineq = pioneer::coefficients(&spec).map_err(stringify)?;
                println!("{}", serde_json::to_string(&json::inequality_to_json(&ineq)).unwrap());
                Ok(0)
            }
            IneqCmd::Lift { ineq, space, lift } => {
                let ij: json::BellInequalityJson = read_json(&ineq)?;
                let source = json::inequality_from_json(&ij, None).map_err(stringify)?;
                let target = load_space(&space)?;
                #[derive(serde::Deserialize)]
                struct LiftJson {
                    p: Vec<u32>,
                    q: Vec<u32>,
                    alpha: Vec<(u32, Vec<u32>)>,
                }
                let lj: LiftJson = read_json(&lift)?;
                let mut alpha = std::collections::BTreeMap::new();
                for (id, outcomes) in &lj.alpha {
                    let mut mask = 0u64;
                    for o in outcomes {
                        if *o == 0 {
                            return Err("alpha outcomes are 1-based".into());
                        }
                        mask |= 1u64 << (o - 1);
                    }
                    alpha.insert(*id, mask);
                }
                let lifted =
                    pioneer::lift(&source, &target, &lj.p, &lj.q, &alpha).map_err(stringify)?;
                println!(
                    "{}",
                    serde_json::to_string(&json::inequality_to_json(&lifted)).unwrap()
                );
                Ok(0)
            }
            IneqCmd::Eval { ineq, space, dist } => {
                let ij: json::BellInequalityJson = read_json(&ineq)?;
                let fallback = match &space {
                    Some(p) => Some(load_space(p)?),
                    None => None,
                };
                let ineq =
                    json::inequality_from_json(&ij, fallback.as_ref()).map_err(stringify)?;
                let dj: json::DistributionJson = read_json(&dist)?;
                let d = json::distribution_from_json(ineq.space(), &dj).map_err(stringify)?;
                let value = ineq.evaluate(&d).map_err(stringify)?;
                let satisfied = !value.is_negative();
                println!(
                    "{}",
                    serde_json::to_string(&EvalOut {
                        value: format_rational(&value),
                        satisfied,
                    })
                    .unwrap()
                );
                Ok(if satisfied { 0 } else { 1 })
            }
        },
        Command::Tbic { cmd } => match cmd {
            TbicCmd::Check { space, gamma } => {
                let s = load_space(&space)?;
                let gj: json::GammaJson = read_json(&gamma)?;
                let g = json::gamma_from_json(&s, &gj).map_err(stringify)?;
                let verdict = tbic::tbic_check(&s, &g).map_err(stringify)?;
                println!("{}", serde_json::to_string(&json::verdict_to_json(&verdict)).unwrap());
                Ok(if verdict.is_tight() { 0 } else { 1 })
            }
        },
        Command::Project { space, dist } => {
            let s = load_space(&space)?;
            let dj: json::DistVectorJson = read_json(&dist)?;
            let mu = json::dist_vector_from_json(&dj, true).map_err(stringify)?;
            let projected = multidev::contexts::project_omni(&s, &mu).map_err(stringify)?;
            println!(
                "{}",
                serde_json::to_string(&json::distribution_to_json(&projected)).unwrap()
            );
            Ok(0)
        }
        Command::Facets { format } => {
            let space = EventSpace::binary(2);
            let facets = tbic::brute_force_facets(&space).map_err(stringify)?;
            let docs: Vec<json::BellInequalityJson> =
                facets.iter().map(json::inequality_to_json).collect();
            if format == "json" {
                println!("{}", serde_json::to_string(&docs).unwrap());
            } else {
                for d in &docs {
                    println!("{}", serde_json::to_string(d).unwrap());
                }
            }
            Ok(0)
        }
        Command::Qm { cmd } => match cmd {
            QmCmd::Table { rows, format } => {
                let observers: Vec<usize> = rows
                    .split(',')
                    .map(|s| s.trim().parse::<usize>().map_err(|e| format!("bad --rows: {e}")))
                    .collect::<Result<_, String>>()?;
                let table = quantum::violation_table(&observers).map_err(stringify)?;
                if format == "csv" {
                    println!("observers,d_over_pi,value");
                    for r in &table {
                        println!("{},{},{}", r.observers, fmt12(r.d_over_pi), fmt12(r.value));
                    }
                } else {
                    #[derive(Serialize)]
                    struct RowOut {
                        observers: usize,
                        d_over_pi: f64,
                        value: f64,
                    }
                    let rows: Vec<RowOut> = table
                        .iter()
                        .map(|r| RowOut {
                            observers: r.observers,
                            d_over_pi: round12(r.d_over_pi),
                            value: round12(r.value),
                        })
                        .collect();
                    println!("{}", serde_json::to_string(&rows).unwrap());
                }
                Ok(0)
            }
            QmCmd::MaxViolation { observers } => {
                let (d, value) = quantum::maximize_violation(observers).map_err(stringify)?;
                let (_, _, scanned) = quantum::full_scan_min(observers, 600);
                println!(
                    "{}",
                    serde_json::to_string(&ViolationOut {
                        observers,
                        d_over_pi: round12(d / std::f64::consts::PI),
                        value: round12(value),
                        full_scan_value: round12(scanned),
                    })
                    .unwrap()
                );
                Ok(0)
            }
        },
        Command::Md { cmd } => match cmd {
            MdCmd::Transform { dist } => {
                let dj: json::DistVectorJson = read_json(&dist)?;
                let f = json::dist_vector_from_json(&dj, false).map_err(stringify)?;
                let table = multidev::multidev::transform(&f);
                println!("{}", serde_json::to_string(&json::table_to_json(&table)).unwrap());
                Ok(0)
            }
            MdCmd::Check { table } => {
                let tj: json::MultidevTableJson = read_json(&table)?;
                let t = json::table_from_json(&tj).map_err(stringify)?;
                match multidev::multidev::check_constraints(&t).map_err(stringify)? {
                    None => {
                        println!("{{\"holds\":true}}");
                        Ok(0)
                    }
                    Some(w) => {
                        #[derive(Serialize)]
                        struct WitnessOut {
                            holds: bool,
                            at: Vec<(u32, u32)>,
                            value: String,
                        }
                        let at =
                            w.at.pairs().map(|(i, o)| (i as u32, o + 1)).collect();
                        println!(
                            "{}",
                            serde_json::to_string(&WitnessOut {
                                holds: false,
                                at,
                                value: format_rational(&w.value),
                            })
                            .unwrap()
                        );
                        Ok(1)
                    }
                }
            }
        },
    }
}

fn stringify(e: Error) -> String {
    e.to_string()
}

fn main() {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().ok();
    }
    match run(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
    }
}
