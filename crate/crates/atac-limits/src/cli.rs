//! Command-line front end. The binary in `src/bin/atac.rs` only calls
//! [`run`]; everything else lives here so the commands are testable.
//!
//! Exit codes: 0 on success, 1 on a domain error (bad design, failed
//! verification, exceeded budget), 2 on a usage error.

use std::fs;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::bounds::{bound_report, BoundReport};
use crate::construct::{
    affine_plane, almost_plane_screen, almost_projective_plane, classify, hjelmslev_plane,
    near_pencil, plane_existence, projective_plane, transversal_design,
};
use crate::design::CoveringDesign;
use crate::limit::{data_limit, LimitCertificate};
use crate::planner::{plan, ItemSpec, Items, PlanRequest};
use crate::search::exact_limit;

#[derive(Parser)]
#[command(name = "atac", version, about = "Data limits of covering designs for all-to-all comparison")]
struct Cli {
    /// Emit machine-readable JSON on standard out.
    #[arg(long, global = true)]
    json: bool,
    /// Write the primary output to a file instead of standard out.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the exact data limit of a design with its certificate.
    Limit { design: PathBuf },
    /// Report the closed-form bounds for a block count or a range.
    Bounds {
        m: Option<usize>,
        /// Inclusive range of block counts.
        #[arg(long, num_args = 2, value_names = ["FROM", "TO"])]
        range: Option<Vec<usize>>,
        /// Format the report as CSV.
        #[arg(long)]
        csv: bool,
    },
    /// Build a named design family and print it as JSON.
    Construct {
        #[command(subcommand)]
        family: FamilyArg,
    },
    /// Report every structural class a design belongs to.
    Classify { design: PathBuf },
    /// Screen a projective plane order against nonexistence results.
    Existence { order: usize },
    /// Compute L(m) exactly by exhaustive enumeration (small m).
    Search {
        m: usize,
        /// Time budget in seconds; required for m = 7.
        #[arg(long)]
        budget: Option<u64>,
        /// Write the witness design to a file.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Plan item placement on a machine count and emit the manifest.
    Plan {
        #[arg(long)]
        machines: usize,
        /// Number of equal-size items.
        #[arg(long, conflicts_with = "items_file")]
        items: Option<usize>,
        /// JSON file with a list of {"id", "size"} items.
        #[arg(long)]
        items_file: Option<PathBuf>,
    },
    /// Re-check a stored certificate against a design.
    VerifyCertificate {
        design: PathBuf,
        certificate: PathBuf,
    },
}

#[derive(Subcommand)]
enum FamilyArg {
    Projective { order: usize },
    Affine { order: usize },
    NearPencil { points: usize },
    AlmostProjective { order: usize },
    Transversal { k: usize, n: usize },
    Hjelmslev { p: usize },
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes, not usage errors.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(message) => {
            eprintln!("error: {message}");
            1
        }
    }
}

fn execute(cli: Cli) -> Result<(), String> {
    let output = match cli.command {
        Command::Limit { design } => {
            let design = read_design(&design)?;
            let certificate = data_limit(&design);
            if cli.json {
                to_json(&certificate)
            } else {
                let mut text = format!("limit: {}\nweighting:\n", certificate.limit);
                for (label, weight) in certificate.weighting.iter() {
                    text.push_str(&format!("  {label}: {weight}\n"));
                }
                text.push_str("block transversal:\n");
                for (i, t) in certificate.transversal.iter().enumerate() {
                    text.push_str(&format!("  block {}: {t}\n", i + 1));
                }
                text
            }
        }
        Command::Bounds { m, range, csv } => {
            let (from, to) = match (m, range) {
                (Some(m), None) => (m, m),
                (None, Some(r)) => (r[0], r[1]),
                _ => return Err("give either a single block count or --range".to_string()),
            };
            if from > to {
                return Err(format!("empty range {from}..{to}"));
            }
            let reports = (from..=to)
                .map(bound_report)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.to_string())?;
            if cli.json {
                to_json(&reports)
            } else if csv {
                bounds_csv(&reports)
            } else {
                bounds_text(&reports)
            }
        }
        Command::Construct { family } => {
            let design = match family {
                FamilyArg::Projective { order } => projective_plane(order),
                FamilyArg::Affine { order } => affine_plane(order),
                FamilyArg::NearPencil { points } => near_pencil(points),
                FamilyArg::AlmostProjective { order } => almost_projective_plane(order),
                FamilyArg::Transversal { k, n } => transversal_design(k, n),
                FamilyArg::Hjelmslev { p } => hjelmslev_plane(p),
            }
            .map_err(|e| e.to_string())?;
            to_json(&design)
        }
        Command::Classify { design } => {
            let design = read_design(&design)?;
            let labels = classify(&design);
            if cli.json {
                to_json(&labels)
            } else if labels.is_empty() {
                "no recognised structure\n".to_string()
            } else {
                labels
                    .iter()
                    .map(|l| format!("{l}\n"))
                    .collect::<String>()
            }
        }
        Command::Existence { order } => {
            let plane = plane_existence(order);
            let almost = almost_plane_screen(order);
            if cli.json {
                to_json(&json!({
                    "order": order,
                    "projectivePlane": plane,
                    "almostProjectivePlane": almost,
                }))
            } else {
                format!(
                    "projective plane of order {order}: {plane:?}\nalmost projective plane of order {order}: {almost:?}\n"
                )
            }
        }
        Command::Search { m, budget, witness } => {
            let budget = budget.map(Duration::from_secs);
            let result = exact_limit(m, budget).map_err(|e| e.to_string())?;
            eprintln!("examined {} designs, pruned {}", result.examined, result.pruned);
            if let Some(path) = witness {
                write_out(&path, &serde_json::to_string_pretty(&result.witness).unwrap())?;
            }
            if cli.json {
                to_json(&result)
            } else {
                format!("L({m}) = {}\n", result.limit)
            }
        }
        Command::Plan {
            machines,
            items,
            items_file,
        } => {
            let items = match (items, items_file) {
                (Some(n), None) => Items::Count(n),
                (None, Some(path)) => {
                    let raw = fs::read_to_string(&path)
                        .map_err(|e| format!("{}: {e}", path.display()))?;
                    let specs: Vec<ItemJson> =
                        serde_json::from_str(&raw).map_err(|e| e.to_string())?;
                    Items::Sized(
                        specs
                            .into_iter()
                            .map(|s| ItemSpec {
                                id: s.id,
                                size: s.size,
                            })
                            .collect(),
                    )
                }
                _ => return Err("give either --items or --items-file".to_string()),
            };
            let manifest = plan(&PlanRequest { machines, items }).map_err(|e| e.to_string())?;
            if cli.json {
                to_json(&manifest)
            } else {
                let mut text = format!(
                    "limit: {}\nachieved max load: {}\n",
                    manifest.limit, manifest.achieved_max_load
                );
                for (i, machine) in manifest.machines.iter().enumerate() {
                    text.push_str(&format!(
                        "machine {}: {} items, load {}\n",
                        i + 1,
                        machine.items.len(),
                        machine.load
                    ));
                }
                if !manifest.empty_groups.is_empty() {
                    text.push_str(&format!(
                        "empty groups: {}\n",
                        manifest.empty_groups.join(", ")
                    ));
                }
                text
            }
        }
        Command::VerifyCertificate {
            design,
            certificate,
        } => {
            let design = read_design(&design)?;
            let raw = fs::read_to_string(&certificate)
                .map_err(|e| format!("{}: {e}", certificate.display()))?;
            let certificate: LimitCertificate =
                serde_json::from_str(&raw).map_err(|e| e.to_string())?;
            certificate.verify(&design).map_err(|e| e.to_string())?;
            if cli.json {
                to_json(&json!({"valid": true, "limit": certificate.limit}))
            } else {
                format!("certificate valid: limit {}\n", certificate.limit)
            }
        }
    };
    match cli.out {
        Some(path) => write_out(&path, &output),
        None => {
            print!("{output}");
            Ok(())
        }
    }
}

#[derive(serde::Deserialize)]
struct ItemJson {
    id: String,
    size: u64,
}

fn read_design(path: &PathBuf) -> Result<CoveringDesign, String> {
    let raw = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&raw).map_err(|e| e.to_string())
}

fn write_out(path: &PathBuf, content: &str) -> Result<(), String> {
    fs::write(path, content).map_err(|e| format!("{}: {e}", path.display()))
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).unwrap();
    s.push('\n');
    s
}

fn bounds_csv(reports: &[BoundReport]) -> String {
    let mut out = String::from("m,s,hktBound,newBoundLower,knownExact\n");
    for r in reports {
        let known = r
            .known_exact
            .as_ref()
            .map(|k| k.to_string())
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.m,
            r.s,
            r.hkt_bound,
            r.new_bound_lower.to_decimal_string(6),
            known
        ));
    }
    out
}

fn bounds_text(reports: &[BoundReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let known = r
            .known_exact
            .as_ref()
            .map(|k| format!(", exact {k}"))
            .unwrap_or_default();
        out.push_str(&format!(
            "m={}: s={}, floor bound {}, lower bound {} (~{}){}\n",
            r.m,
            r.s,
            r.hkt_bound,
            r.new_bound,
            r.new_bound_lower.to_decimal_string(6),
            known
        ));
    }
    out
}
