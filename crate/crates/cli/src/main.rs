//! `dilateq`: load semirings and kernels from files, dispatch the exact
//! checkers, and print deterministic reports.
//!
//! Exit codes: 0 when every check holds (or every reproduction case
//! matches), 1 when some property fails or a case mismatches, 2 on usage or
//! I/O errors. Output is byte-identical across runs for identical inputs.

use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use dilateq_core::axioms::{
    audit_equivalences, check_pes_instance, check_positivity_instance,
    check_relative_positivity_instance,
};
use dilateq_core::dilation::{
    check_dmi_instance, dilational_equal, find_broadcasting, is_noncreative, verify_dilation,
    verify_initial, Dilation, SearchOpts,
};
use dilateq_core::semiring::table::FiniteTable;
use dilateq_core::semiring::Strategy;
use dilateq_core::{cases, Error, FinSet, Kernel, Semiring, Verdict};

#[derive(Parser)]
#[command(name = "dilateq", version, about = "Exact semiring-kernel axiom checker")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Semiring-level property checks.
    Semiring {
        #[command(subcommand)]
        cmd: SemiringCmd,
    },
    /// Kernel algebra: composition, tensor, marginals, conditionals.
    Kernel {
        #[command(subcommand)]
        cmd: KernelCmd,
    },
    /// Information-flow axiom instances.
    Axiom {
        #[command(subcommand)]
        cmd: AxiomCmd,
    },
    /// Dilation-level checks.
    Dilation {
        #[command(subcommand)]
        cmd: DilationCmd,
    },
    /// Re-run frozen reproduction cases against their expected observations.
    Repro {
        /// Case id to run.
        case_id: Option<String>,
        /// Run every registered case.
        #[arg(long, conflicts_with = "case_id")]
        all: bool,
        /// Only run cases carrying this tag.
        #[arg(long, conflicts_with = "case_id")]
        tag: Option<String>,
    },
}

#[derive(Subcommand)]
enum SemiringCmd {
    /// Check algebraic properties of a bundled or file-defined semiring.
    Check {
        /// Built-in name (e.g. `rational`, `ideal-z2i`, `chain-4`) or a path
        /// to a finite-table semiring file.
        name: String,
        #[arg(long, value_enum, default_value_t = Property::All)]
        property: Property,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Property {
    Zerosumfree,
    Entire,
    Causality,
    All,
}

#[derive(Subcommand)]
enum KernelCmd {
    /// g∘f: apply --f first, then --g.
    Compose {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// f⊗g on the tensor of domains and codomains.
    Tensor {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Marginalize a kernel onto the kept codomain factors.
    Marginal {
        #[arg(long)]
        kernel: String,
        /// Comma-separated factor indices to keep (0-based).
        #[arg(long, value_delimiter = ',', required = true)]
        keep: Vec<usize>,
    },
    /// Decide exact determinism (copy-preservation).
    Deterministic {
        #[arg(long)]
        kernel: String,
    },
    /// Conditional of a joint kernel on its first `--x-factors` codomain
    /// factors (division semirings only).
    Conditional {
        #[arg(long)]
        kernel: String,
        #[arg(long)]
        x_factors: usize,
    },
}

#[derive(Args)]
struct SearchArgs {
    /// Largest environment size searched.
    #[arg(long, default_value_t = 3)]
    max_env: usize,
    /// Seed for the randomized tail of the dilation search.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random dilations drawn per environment size.
    #[arg(long, default_value_t = 16)]
    random_samples: usize,
}

impl SearchArgs {
    fn opts(&self) -> Result<SearchOpts, Error> {
        if self.max_env < 1 {
            return Err(Error::Usage("--max-env must be ≥ 1".into()));
        }
        Ok(SearchOpts {
            max_env: self.max_env,
            seed: self.seed,
            random_samples: self.random_samples,
        })
    }
}

#[derive(Subcommand)]
enum AxiomCmd {
    /// Positivity for a composable pair with deterministic composite.
    Positivity {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Parametrized equality strengthening for (h₁, h₂, p).
    Pes {
        #[arg(long)]
        h1: String,
        #[arg(long)]
        h2: String,
        #[arg(long)]
        p: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Positivity relative to a prior p : Θ → A.
    Relpos {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        p: String,
    },
    /// Deterministic marginal independence of a dilation (--total over --base).
    Dmi {
        #[arg(long)]
        total: String,
        #[arg(long)]
        base: String,
    },
    /// Sampled audit that three positivity formulations agree.
    Audit {
        /// Semiring name or file.
        #[arg(long)]
        semiring: String,
        /// Largest object size drawn.
        #[arg(long, default_value_t = 3)]
        size_bound: usize,
        /// Seed (required: the audit is sampled).
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10000)]
        sample_count: usize,
    },
}

#[derive(Subcommand)]
enum DilationCmd {
    /// Verify that --total dilates --base (marginal check).
    Verify {
        #[arg(long)]
        total: String,
        #[arg(long)]
        base: String,
    },
    /// Initiality of the dilation --total of --base among enumerated
    /// dilations.
    Initial {
        #[arg(long)]
        total: String,
        #[arg(long)]
        base: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Non-creativity of a kernel against enumerated dilations.
    Noncreative {
        #[arg(long)]
        p: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Solve the broadcasting constraints over an object of given size.
    Broadcasting {
        /// Semiring name or file.
        #[arg(long)]
        semiring: String,
        /// Object size; labels are x1..xN.
        #[arg(long)]
        size: usize,
    },
    /// Dilational equality of --f and --g over the state/kernel --p.
    Dileq {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        p: String,
        #[command(flatten)]
        search: SearchArgs,
    },
}

/// One named entry of the report; `failed` drives the exit code.
struct Entry {
    name: String,
    body: Json,
    failed: bool,
}

impl Entry {
    fn verdict(name: &str, v: Verdict) -> Entry {
        Entry { name: name.to_string(), failed: v.failed(), body: v.to_json() }
    }

    fn kernel(name: &str, k: &Kernel) -> Entry {
        Entry { name: name.to_string(), failed: false, body: k.to_json() }
    }
}

fn resolve_semiring(selector: &str) -> Result<Arc<Semiring>, Error> {
    if selector.ends_with(".json") || Path::new(selector).is_file() {
        let text = std::fs::read_to_string(selector)?;
        let v: Json = serde_json::from_str(&text)?;
        let table = FiniteTable::from_json(&v)?;
        let stem = Path::new(selector)
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or(selector);
        Ok(Arc::new(Semiring::from_table(stem, table)))
    } else {
        Semiring::by_name(selector).map(Arc::new)
    }
}

fn load_kernel(path: &str) -> Result<Kernel, Error> {
    let text = std::fs::read_to_string(path)?;
    let v: Json = serde_json::from_str(&text)?;
    Kernel::from_json(&v, &resolve_semiring)
}

fn run(cli: &Cli) -> Result<Vec<Entry>, Error> {
    Ok(match &cli.command {
        Command::Semiring { cmd: SemiringCmd::Check { name, property } } => {
            let sr = resolve_semiring(name)?;
            let mut entries = Vec::new();
            let mut push = |prop: Property| {
                let (label, verdict) = match prop {
                    Property::Zerosumfree => {
                        ("zerosumfree", sr.check_zerosumfree(Strategy::Certified))
                    }
                    Property::Entire => ("entire", sr.check_entire(Strategy::Certified)),
                    Property::Causality => {
                        ("causality", sr.check_causality_criterion(Strategy::Certified))
                    }
                    Property::All => unreachable!(),
                };
                entries.push(Entry::verdict(&format!("{}.{label}", sr.name), verdict));
            };
            match property {
                Property::All => {
                    push(Property::Zerosumfree);
                    push(Property::Entire);
                    push(Property::Causality);
                }
                one => push(*one),
            }
            entries
        }
        Command::Kernel { cmd } => match cmd {
            KernelCmd::Compose { f, g } => {
                let composite = Kernel::compose(&load_kernel(g)?, &load_kernel(f)?)?;
                vec![Entry::kernel("compose", &composite)]
            }
            KernelCmd::Tensor { f, g } => {
                let t = load_kernel(f)?.tensor_with(&load_kernel(g)?)?;
                vec![Entry::kernel("tensor", &t)]
            }
            KernelCmd::Marginal { kernel, keep } => {
                let m = load_kernel(kernel)?.marginalize(keep)?;
                vec![Entry::kernel("marginal", &m)]
            }
            KernelCmd::Deterministic { kernel } => {
                vec![Entry::verdict("deterministic", load_kernel(kernel)?.is_deterministic())]
            }
            KernelCmd::Conditional { kernel, x_factors } => {
                let c = load_kernel(kernel)?.conditional(*x_factors)?;
                vec![Entry::kernel("conditional", &c)]
            }
        },
        Command::Axiom { cmd } => match cmd {
            AxiomCmd::Positivity { f, g } => {
                let report = check_positivity_instance(&load_kernel(f)?, &load_kernel(g)?)?;
                vec![Entry {
                    name: "positivity".into(),
                    failed: report.verdict.failed(),
                    body: report.to_json(),
                }]
            }
            AxiomCmd::Pes { h1, h2, p, search } => {
                let report = check_pes_instance(
                    &load_kernel(h1)?,
                    &load_kernel(h2)?,
                    &load_kernel(p)?,
                    &search.opts()?,
                )?;
                vec![Entry {
                    name: "pes".into(),
                    failed: report.verdict.failed(),
                    body: report.to_json(),
                }]
            }
            AxiomCmd::Relpos { f, g, p } => {
                let report = check_relative_positivity_instance(
                    &load_kernel(f)?,
                    &load_kernel(g)?,
                    &load_kernel(p)?,
                )?;
                vec![Entry {
                    name: "relative-positivity".into(),
                    failed: report.verdict.failed(),
                    body: report.to_json(),
                }]
            }
            AxiomCmd::Dmi { total, base } => {
                let d = Dilation::new(load_kernel(total)?, load_kernel(base)?)?;
                vec![Entry::verdict("dmi", check_dmi_instance(&d)?)]
            }
            AxiomCmd::Audit { semiring, size_bound, seed, sample_count } => {
                let sr = resolve_semiring(semiring)?;
                let report = audit_equivalences(&sr, *size_bound, *seed, *sample_count)?;
                vec![Entry {
                    name: "audit".into(),
                    failed: report.verdict.failed(),
                    body: report.to_json(),
                }]
            }
        },
        Command::Dilation { cmd } => match cmd {
            DilationCmd::Verify { total, base } => {
                vec![Entry::verdict(
                    "dilation",
                    verify_dilation(&load_kernel(total)?, &load_kernel(base)?)?,
                )]
            }
            DilationCmd::Initial { total, base, search } => {
                let d = Dilation::new(load_kernel(total)?, load_kernel(base)?)?;
                vec![Entry::verdict("initial", verify_initial(&d, &search.opts()?)?)]
            }
            DilationCmd::Noncreative { p, search } => {
                vec![Entry::verdict(
                    "noncreative",
                    is_noncreative(&load_kernel(p)?, &search.opts()?)?,
                )]
            }
            DilationCmd::Broadcasting { semiring, size } => {
                let sr = resolve_semiring(semiring)?;
                let labels: Vec<String> = (1..=*size).map(|i| format!("x{i}")).collect();
                let x = FinSet::new(&labels.iter().map(String::as_str).collect::<Vec<_>>());
                let report = find_broadcasting(&sr, &x)?;
                vec![Entry {
                    name: "broadcasting".into(),
                    failed: report.uniqueness.failed(),
                    body: json!({
                        "solutions": report.solutions.iter().map(Kernel::to_json).collect::<Vec<_>>(),
                        "uniqueness": report.uniqueness.to_json(),
                    }),
                }]
            }
            DilationCmd::Dileq { f, g, p, search } => {
                vec![Entry::verdict(
                    "dileq",
                    dilational_equal(
                        &load_kernel(f)?,
                        &load_kernel(g)?,
                        &load_kernel(p)?,
                        &search.opts()?,
                    )?,
                )]
            }
        },
        Command::Repro { case_id, all, tag } => {
            let results = match (case_id, all, tag) {
                (Some(id), _, _) => vec![cases::run_case(id)?],
                (None, _, Some(tag)) => cases::run_all(Some(tag))?,
                (None, true, None) => cases::run_all(None)?,
                (None, false, None) => {
                    return Err(Error::Usage(
                        "repro needs a case id, --all, or --tag".into(),
                    ))
                }
            };
            results
                .into_iter()
                .map(|r| Entry {
                    name: r.case_id.clone(),
                    failed: !r.matched,
                    body: r.to_json(),
                })
                .collect()
        }
    })
}

fn render(entries: &[Entry], format: Format) -> String {
    match format {
        Format::Json => {
            if entries.is_empty() {
                return "{\"results\": []}".to_string();
            }
            let results: Vec<Json> = entries
                .iter()
                .map(|e| json!({"name": e.name, "report": e.body}))
                .collect();
            serde_json::to_string_pretty(&json!({"schema": 1, "results": results})).unwrap()
        }
        Format::Text => {
            let mut out = String::new();
            for e in entries {
                let status = e.body.get("status").or_else(|| {
                    e.body.get("verdict").and_then(|v| v.get("status"))
                });
                match status.and_then(Json::as_str) {
                    Some(s) => {
                        let cert = e
                            .body
                            .get("certificate")
                            .or_else(|| e.body.get("verdict").and_then(|v| v.get("certificate")))
                            .and_then(Json::as_str)
                            .unwrap_or("-");
                        let line = match s {
                            "holds" => format!("{}: HOLDS ({cert})", e.name),
                            "fails" => format!("{}: FAILS", e.name),
                            _ => format!("{}: UNKNOWN ({cert})", e.name),
                        };
                        out.push_str(&line);
                        out.push('\n');
                        if s == "fails" {
                            let witness = e
                                .body
                                .get("witness")
                                .or_else(|| e.body.get("verdict").and_then(|v| v.get("witness")));
                            if let Some(w) = witness.filter(|w| !w.is_null()) {
                                out.push_str("  witness: ");
                                out.push_str(&serde_json::to_string(w).unwrap());
                                out.push('\n');
                            }
                        }
                    }
                    None => {
                        // non-verdict payloads (kernels, case results)
                        if let Some(matched) = e.body.get("match").and_then(Json::as_bool) {
                            out.push_str(&format!(
                                "{}: {}\n",
                                e.name,
                                if matched { "MATCH" } else { "MISMATCH" }
                            ));
                            if !matched {
                                out.push_str("  actual: ");
                                out.push_str(&serde_json::to_string(&e.body["actual"]).unwrap());
                                out.push('\n');
                            }
                        } else {
                            out.push_str(&format!(
                                "{}: {}\n",
                                e.name,
                                serde_json::to_string(&e.body).unwrap()
                            ));
                        }
                    }
                }
            }
            out
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(entries) => {
            print!("{}", render(&entries, cli.format));
            if entries.iter().any(|e| e.failed) {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
