//! The `hilbconf` command line.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::charts::{self, ChartTarget, WMode};
use crate::classify::{self, Status};
use crate::enrichment::{parse_notation, sub, sup, Enrichment};
use crate::incidence::{incidence_closure, witness_split, DEFAULT_MAX_ARITY};
use crate::poly::{colon_ideal, Budget, Ideal, MonomialOrder, VarTable};
use crate::strata::{self, StratumConfig};
use crate::structure::{enumerate_structures, Structure};
use crate::symmetry::{acting_group, orbit, pointwise_stabilizer_h, stabilizer_g};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Parser)]
#[command(name = "hilbconf", version, about = "Enrichments, incidence and charts for triples of points")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the canonical structures over {1..n}.
    Structures {
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        max_level: usize,
    },
    /// Evaluate I(σ, targets), or list every incidence inside `--eta`.
    Incidence {
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long, conflicts_with_all = ["sigma", "targets"])]
        eta: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_ARITY)]
        max_arity: usize,
        #[arg(required_unless_present = "eta")]
        sigma: Option<String>,
        targets: Vec<String>,
    },
    /// The S_n-orbit of an enrichment.
    Orbit {
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long, visible_alias = "model")]
        eta: String,
    },
    /// G_η, H_η and the acting group G_η/H_η.
    Groups {
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long, visible_alias = "model")]
        eta: String,
    },
    /// Classify one enrichment.
    Classify {
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long, visible_alias = "model")]
        eta: String,
        /// Saturate with a random rule order drawn from this seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Classify every enrichment up to a level.
    ClassifyAll {
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        max_level: usize,
    },
    /// The quotient table of the models.
    Quotients,
    /// Conf(η).
    Strata {
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long, visible_alias = "model")]
        eta: String,
        /// Keep only configurations passing the consistency filter.
        #[arg(long)]
        consistent: bool,
    },
    /// Fibers of the restriction Conf(big) → Conf(eta).
    Preimage {
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long)]
        eta: String,
        #[arg(long)]
        big: String,
        /// A configuration of `--eta` in JSON; all fibers when absent.
        #[arg(long)]
        config: Option<String>,
    },
    /// Forgetful morphisms between the models.
    Diagram {
        #[arg(long, default_value_t = 3)]
        n: u32,
    },
    /// Recompute the incidence loci of the charts.
    VerifyCharts {
        #[arg(long)]
        target: Option<String>,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value = "substituted")]
        mode: String,
        /// Also probe the colength of I_123 at ten random points.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// The colon ideal (ideal : by) over the listed variables.
    Residual {
        #[arg(long, default_value = "x,y")]
        vars: String,
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        by: String,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => m,
        }
    }
}

fn domain<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Domain(e.to_string())
}

/// Accepts `{"n":…,"structures":[…]}`, a bare array of structures, or the
/// compact `R^…_…` notation.
pub fn parse_enrichment(input: &str, n: u32) -> Result<Enrichment, String> {
    let text = input.trim();
    if text.starts_with('{') || text.starts_with('[') {
        let value: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if value.is_object() {
            return Enrichment::from_json(&value).map_err(|e| e.to_string());
        }
        let items = value.as_array().expect("array");
        let structures =
            items.iter().map(|v| Structure::from_json(v, n)).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
        return Enrichment::new(structures, n).map_err(|e| e.to_string());
    }
    parse_notation(text, n).map_err(|e| e.to_string())
}

/// Accepts nested-array JSON, `_12` / `sigma_12`, or `^1` / `sigma^123`.
pub fn parse_structure(input: &str, n: u32) -> Result<Structure, String> {
    let text = input.trim();
    let body = text.trim_start_matches("sigma").trim_start_matches('σ');
    if let Some(d) = body.strip_prefix('_') {
        return sub(d.trim_matches(['{', '}']), n).map_err(|e| e.to_string());
    }
    if let Some(d) = body.strip_prefix('^') {
        return sup(d.trim_matches(['{', '}']), n).map_err(|e| e.to_string());
    }
    let value: Value = serde_json::from_str(text).map_err(|e| format!("`{text}`: {e}"))?;
    Structure::from_json(&value, n).map_err(|e| e.to_string())
}

fn enrichment_arg(input: &str, n: u32) -> Result<Enrichment, CliError> {
    parse_enrichment(input, n).map_err(CliError::Domain)
}

fn name_of(eta: &Enrichment) -> String {
    eta.model_name().map(|m| m.0).unwrap_or_else(|| eta.to_string())
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json renders") + "\n"
}

fn no_dot(format: Format, command: &str) -> Result<(), CliError> {
    if format == Format::Dot {
        return Err(CliError::Usage(format!("--format dot is not available for `{command}`")));
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<String, CliError> {
    let format = cli.format;
    match &cli.command {
        Command::Structures { n, max_level } => {
            no_dot(format, "structures")?;
            let all = enumerate_structures(*n, *max_level).map_err(domain)?;
            Ok(match format {
                Format::Json => pretty(&Value::Array(
                    all.iter()
                        .map(|s| json!({"structure": s.to_json(), "signature": s.signature().levels(), "level": s.level()}))
                        .collect(),
                )),
                _ => all.iter().map(|s| format!("{}\t{}\t{}\n", s.level(), s.signature(), s.compact())).collect(),
            })
        }
        Command::Incidence { n, eta, max_arity, sigma, targets } => {
            no_dot(format, "incidence")?;
            if let Some(eta) = eta {
                let eta = enrichment_arg(eta, *n)?;
                let found = incidence_closure(&eta, *max_arity);
                return Ok(match format {
                    Format::Json => pretty(&serde_json::to_value(&found).expect("serializes")),
                    _ => found
                        .iter()
                        .map(|i| format!("{} <= {}\n", i.sigma.compact(), i.targets.iter().map(Structure::compact).join(" + ")))
                        .collect(),
                });
            }
            let sigma = parse_structure(sigma.as_deref().expect("required by clap"), *n).map_err(CliError::Domain)?;
            let targets: Vec<Structure> =
                targets.iter().map(|t| parse_structure(t, *n)).collect::<Result<_, _>>().map_err(CliError::Domain)?;
            let split = witness_split(&sigma, &targets);
            Ok(match format {
                Format::Json => pretty(&json!({
                    "sigma": sigma.to_json(),
                    "targets": targets.iter().map(Structure::to_json).collect::<Vec<_>>(),
                    "incident": split.is_some(),
                    "split": split,
                })),
                _ => format!("{}\n", split.is_some()),
            })
        }
        Command::Orbit { n, eta } => {
            no_dot(format, "orbit")?;
            let eta = enrichment_arg(eta, *n)?;
            let members = orbit(&eta);
            Ok(match format {
                Format::Json => pretty(&Value::Array(members.iter().map(Enrichment::to_json).collect())),
                _ => members.iter().map(|m| format!("{m}\n")).collect(),
            })
        }
        Command::Groups { n, eta } => {
            no_dot(format, "groups")?;
            let eta = enrichment_arg(eta, *n)?;
            let (g, h, a) = (stabilizer_g(&eta), pointwise_stabilizer_h(&eta), acting_group(&eta));
            Ok(match format {
                Format::Json => pretty(&json!({
                    "eta": name_of(&eta),
                    "G": g,
                    "H": h,
                    "acting": a.label,
                    "acting_representatives": a.elements,
                })),
                _ => format!("G = {} (order {})\nH = {} (order {})\nG/H = {}\n", g.label, g.order(), h.label, h.order(), a.label),
            })
        }
        Command::Classify { n, eta, seed } => {
            no_dot(format, "classify")?;
            let eta = enrichment_arg(eta, *n)?;
            if let Some(seed) = seed {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let sat = classify::saturate_random(&eta, &mut rng).map_err(domain)?;
                let fixed = classify::saturate(&eta).map_err(domain)?;
                let confluent = sat.closure.set_equal(&fixed.closure);
                return Ok(match format {
                    Format::Json => pretty(&json!({
                        "input": eta.to_json(),
                        "seed": seed,
                        "closure": sat.closure.sorted().to_json(),
                        "trace": sat.trace,
                        "confluent": confluent,
                    })),
                    _ => format!("{} (confluent: {confluent})\n", sat.closure.sorted()),
                });
            }
            let report = classify::classify(&eta).map_err(domain)?;
            Ok(match format {
                Format::Json => pretty(&report.to_json()),
                _ => match &report.status {
                    Status::Admissible { model, g, reduced, .. } => {
                        let note = if *reduced { " (reduced to level two)" } else { "" };
                        format!("admissible: {model} via {:?}{note}\n", g.images())
                    }
                    Status::NonAdmissible(hit) => format!("non-admissible: {:?} ({})\n", hit.tag, hit.witness),
                },
            })
        }
        Command::ClassifyAll { n, max_level } => {
            no_dot(format, "classify-all")?;
            let summary = classify::classify_all(*n, *max_level).map_err(domain)?;
            Ok(match format {
                Format::Json => pretty(&serde_json::to_value(&summary).expect("serializes")),
                _ => {
                    let mut out = format!(
                        "total {} admissible {} non-admissible {} incomplete {} classes {}\n",
                        summary.total, summary.admissible, summary.non_admissible, summary.incomplete, summary.classes
                    );
                    for (model, count) in &summary.per_model {
                        out.push_str(&format!("  {model}: {count}\n"));
                    }
                    for (tag, count) in &summary.per_detector {
                        out.push_str(&format!("  {tag}: {count}\n"));
                    }
                    out
                }
            })
        }
        Command::Quotients => {
            no_dot(format, "quotients")?;
            let rows = classify::quotient_table().map_err(domain)?;
            Ok(match format {
                Format::Json => pretty(&serde_json::to_value(&rows).expect("serializes")),
                _ => rows
                    .iter()
                    .map(|r| {
                        let how = match &r.invariant {
                            classify::InvariantCheck::Verified => "verified".to_string(),
                            classify::InvariantCheck::Repaired { dropped, detector } => format!(
                                "repaired: dropped {} ({detector:?})",
                                dropped.iter().map(Structure::compact).join(" ")
                            ),
                        };
                        format!("{}\tG={}\tG/H={}\tquotient {}\t{how}\n", r.model, r.group.label, r.acting_label, r.quotient)
                    })
                    .collect(),
            })
        }
        Command::Strata { n, eta, consistent } => {
            no_dot(format, "strata")?;
            let eta = enrichment_arg(eta, *n)?;
            let configs = if *consistent { strata::conf_space_filtered(&eta) } else { strata::conf_space(&eta) };
            Ok(match format {
                Format::Json => pretty(&json!({
                    "eta": eta.to_json(),
                    "count": configs.len(),
                    "general": strata::general_stratum(&eta).to_json(),
                    "special": strata::special_stratum(&eta).to_json(),
                    "configs": configs.iter().map(StratumConfig::to_json).collect::<Vec<_>>(),
                })),
                _ => configs.iter().map(|c| format!("{c}\n")).collect(),
            })
        }
        Command::Preimage { n, eta, big, config } => {
            let small = enrichment_arg(eta, *n)?;
            let big = enrichment_arg(big, *n)?;
            if format == Format::Dot {
                return strata::restriction_dot(&small, &big).map_err(domain);
            }
            let configs = match config {
                Some(text) => {
                    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Domain(e.to_string()))?;
                    vec![StratumConfig::from_json(&value, &small).map_err(domain)?]
                }
                None => strata::conf_space(&small),
            };
            let mut fibers = Vec::new();
            for c in &configs {
                fibers.push((c, strata::preimage_strata(c, &small, &big).map_err(domain)?));
            }
            Ok(match format {
                Format::Json => pretty(&Value::Array(
                    fibers
                        .iter()
                        .map(|(c, f)| {
                            json!({"config": c.to_json(), "preimage": f.iter().map(StratumConfig::to_json).collect::<Vec<_>>()})
                        })
                        .collect(),
                )),
                _ => fibers.iter().map(|(c, f)| format!("{c}\t{}\n", f.len())).collect(),
            })
        }
        Command::Diagram { n } => {
            let diagram = classify::forgetful_diagram(&classify::models(*n)).map_err(domain)?;
            Ok(match format {
                Format::Dot => diagram.to_dot(),
                Format::Json => pretty(&serde_json::to_value(&diagram).expect("serializes")),
                Format::Text => diagram
                    .edges
                    .iter()
                    .map(|&(a, b)| format!("{} -> {}\n", diagram.nodes[a], diagram.nodes[b]))
                    .collect(),
            })
        }
        Command::VerifyCharts { target, dim, mode, seed } => {
            no_dot(format, "verify-charts")?;
            let mode: WMode = mode.parse().map_err(|e: String| CliError::Usage(format!("--mode: {e}")))?;
            let targets: Vec<ChartTarget> = match target {
                Some(t) => vec![t.parse().map_err(|e: charts::ChartError| CliError::Usage(format!("--target: {e}")))?],
                None => ChartTarget::ALL.to_vec(),
            };
            let mut reports = Vec::new();
            for t in &targets {
                reports.push(charts::verify_chart(*t, *dim, mode).map_err(domain)?);
            }
            let probe = match seed {
                Some(s) => Some(charts::hilb3_colength_samples(*s, 10).map_err(domain)?),
                None => None,
            };
            Ok(match format {
                Format::Json => {
                    let mut values: Vec<Value> = reports.iter().map(|r| r.to_json()).collect();
                    if let Some(p) = &probe {
                        for v in &mut values {
                            v["colength_probe"] = json!(p);
                        }
                    }
                    if values.len() == 1 {
                        pretty(&values[0])
                    } else {
                        pretty(&Value::Array(values))
                    }
                }
                _ => {
                    let mut out: String = reports
                        .iter()
                        .map(|r| {
                            format!(
                                "{}: rank {} over {} variables, dimension {} (expected {}), listed generators contained: {}, extra absorbed: {}, free {{{}}}\n",
                                r.target,
                                r.jacobian_rank,
                                r.nvars,
                                r.smooth_dimension,
                                r.expected_dimension,
                                r.stated_generators_contained,
                                r.extra_generators_absorbed,
                                r.free_variables.join(",")
                            )
                        })
                        .collect();
                    if let Some(p) = probe {
                        out.push_str(&format!("colength probe: {p:?}\n"));
                    }
                    out
                }
            })
        }
        Command::Residual { vars, ideal, by } => {
            no_dot(format, "residual")?;
            let names: Vec<&str> = vars.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            let table = VarTable::new("residual", &names).map_err(domain)?;
            let split = |s: &str| -> Vec<String> { s.split(',').map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect() };
            let i = Ideal::parse(table.clone(), &split(ideal)).map_err(domain)?;
            let j = Ideal::parse(table.clone(), &split(by)).map_err(domain)?;
            let order = MonomialOrder::graded_lex((0..table.len()).collect());
            let gens = colon_ideal(&i.gens, &j.gens, &order, &Budget::default()).map_err(domain)?;
            let result = Ideal::new(table, gens);
            Ok(match format {
                Format::Json => pretty(&result.to_json()),
                _ => format!("({})\n", result.display_gens().join(", ")),
            })
        }
    }
}

/// Runs the command line on `argv` (including the program name), writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = execute(&cli).and_then(|text| match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Domain(format!("{}: {e}", path.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::Domain(e.to_string())),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("hilbconf").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn groups_of_max() {
        let (code, out, _) = run_capture(&["groups", "--model", "max", "--format", "json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["acting"], "S_3");
    }

    #[test]
    fn usage_and_domain_errors() {
        let (code, _, err) = run_capture(&["classify", "--bogus"]);
        assert_eq!(code, 2);
        assert!(err.contains("--bogus"));
        let (code, _, _) = run_capture(&["classify", "--eta", "R_{9}"]);
        assert_eq!(code, 1);
        let (code, _, err) = run_capture(&["orbit", "--eta", "R_123", "--format", "dot"]);
        assert_eq!(code, 2);
        assert!(err.contains("--format"));
    }

    #[test]
    fn structure_arguments() {
        assert_eq!(parse_structure("_12", 3).unwrap(), sub("12", 3).unwrap());
        assert_eq!(parse_structure("sigma^123", 3).unwrap(), sup("123", 3).unwrap());
        assert_eq!(parse_structure("[[1,2],[1,3]]", 3).unwrap(), sup("1", 3).unwrap());
        let (code, out, _) = run_capture(&["incidence", "^1", "_12", "_23"]);
        assert_eq!((code, out.as_str()), (0, "true\n"));
    }

    #[test]
    fn residual_command() {
        let (code, out, _) = run_capture(&["residual", "--ideal", "x^2,x*y,y^2", "--by", "x,y"]);
        assert_eq!(code, 0);
        assert_eq!(out, "(y, x)\n");
    }
}
