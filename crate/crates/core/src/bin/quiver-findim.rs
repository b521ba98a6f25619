use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use quiver_findim::findim::{self, Strategy};
use quiver_findim::format::{parse_element, parse_file, AlgebraSpec};
use quiver_findim::modules::{self, ProjDim, Representation};
use quiver_findim::quiver::ArrowId;
use quiver_findim::removal::{classify_generating_set, remove_arrow, strict_groebner_witness};
use quiver_findim::{selftest, Algebra, Error, Result};

#[derive(Parser)]
#[command(
    name = "quiver-findim",
    version,
    about = "Gröbner bases, arrow removal and finitistic-dimension bounds for bound quiver algebras"
)]
struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// A `.quiv` presentation.
    file: PathBuf,
}

#[derive(Args)]
struct ArrowArg {
    /// Name of the arrow to remove.
    #[arg(long)]
    arrow: String,
}

#[derive(Args)]
struct ModuleArg {
    /// `S<v>` (simple), `P<v>` (indecomposable projective) or `ideal:<arrow>`.
    #[arg(long)]
    module: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Larger,
    Sources,
    Sinks,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Larger => Strategy::Larger,
            StrategyArg::Sources => Strategy::SourcesFirst,
            StrategyArg::Sinks => Strategy::SinksFirst,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Gröbner basis of the relation ideal.
    Gb {
        #[command(flatten)]
        input: Input,
        /// Print the reduced basis instead of the completed one.
        #[arg(long)]
        reduced: bool,
    },
    /// Basis of non-tip paths and the dimension of the algebra.
    Basis {
        #[command(flatten)]
        input: Input,
    },
    /// Normal form of an element.
    Nf {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        elem: String,
    },
    /// Checks that the presentation defines a bound quiver algebra.
    Admissible {
        #[command(flatten)]
        input: Input,
    },
    /// Classifies the generating set (or the reduced basis) for removing an arrow.
    Classify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        arrow: ArrowArg,
        /// Classify the reduced Gröbner basis instead of the given relations.
        #[arg(long)]
        groebner: bool,
    },
    /// Writes the presentation of the quotient by an arrow.
    Remove {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        arrow: ArrowArg,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Minimal projective resolution of a module.
    Resolve {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        module: ModuleArg,
        #[arg(long, default_value_t = findim::DEFAULT_CUTOFF)]
        max: usize,
    },
    /// Projective dimension of a module.
    Pd {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        module: ModuleArg,
        #[arg(long, default_value_t = findim::DEFAULT_CUTOFF)]
        cutoff: usize,
    },
    /// Injective dimension of a module.
    Injdim {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        module: ModuleArg,
        #[arg(long, default_value_t = findim::DEFAULT_CUTOFF)]
        cutoff: usize,
    },
    /// Finitistic-dimension bound through removing an arrow.
    Bound {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        arrow: ArrowArg,
        #[arg(long, default_value_t = findim::DEFAULT_CUTOFF)]
        cutoff: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::Larger)]
        strategy: StrategyArg,
    },
    /// The bound together with per-simple homological data.
    Report {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        arrow: ArrowArg,
        #[arg(long, default_value_t = findim::DEFAULT_CUTOFF)]
        cutoff: usize,
    },
    /// Runs the bundled examples against their stored expectations.
    Selftest {
        /// Samples per randomized property.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// What a command produced: JSON, its text rendering, and the exit code.
struct Output {
    json: Value,
    text: String,
    code: u8,
}

impl Output {
    fn ok(json: Value, text: String) -> Output {
        Output { json, text, code: 0 }
    }
}

fn load(input: &Input) -> Result<(AlgebraSpec, Algebra)> {
    let spec = parse_file(&input.file)?;
    let alg = spec.algebra()?;
    Ok((spec, alg))
}

fn arrow(alg: &Algebra, name: &str) -> Result<ArrowId> {
    alg.quiver()
        .arrow(name)
        .ok_or_else(|| Error::InvalidArgument(format!("no arrow named {name}")))
}

fn module(alg: &Algebra, spec: &str) -> Result<Representation> {
    modules::named(alg, spec)
}

fn rendered(alg: &Algebra, elements: &[quiver_findim::element::FreeElement]) -> Vec<String> {
    elements.iter().map(|z| alg.render(z)).collect()
}

fn lines(items: &[String]) -> String {
    items.iter().map(|s| format!("{s}\n")).collect()
}

fn pd_json(d: ProjDim) -> Value {
    match d {
        ProjDim::Exact(n) => json!({ "exact": n }),
        ProjDim::AtLeast(n) => json!({ "at_least": n }),
    }
}

fn gamma_spec(gamma: &Algebra) -> AlgebraSpec {
    let q = gamma.quiver();
    let precedence = if gamma.order().is_default() {
        Vec::new()
    } else {
        gamma
            .order()
            .precedence()
            .into_iter()
            .map(|i| q.arrow_name(q.arrow_at(i)).to_string())
            .collect()
    };
    AlgebraSpec {
        field: gamma.field(),
        quiver: q.clone(),
        precedence,
        relations: gamma.generators().to_vec(),
    }
}

fn file_stem(path: &FsPath) -> Option<String> {
    path.file_stem().map(|s| s.to_string_lossy().into_owned())
}

fn run(command: Command) -> Result<Output> {
    match command {
        Command::Gb { input, reduced } => {
            let (_, alg) = load(&input)?;
            let gb = if reduced { alg.groebner() } else { alg.completed() };
            let elems = rendered(&alg, gb.elements());
            Ok(Output::ok(
                json!({ "reduced": reduced, "rounds": gb.rounds(), "elements": elems }),
                lines(&elems),
            ))
        }
        Command::Basis { input } => {
            let (_, alg) = load(&input)?;
            let q = alg.quiver();
            let paths: Vec<String> = alg.basis().paths().iter().map(|p| q.path_name(p)).collect();
            Ok(Output::ok(
                json!({ "dimension": alg.dim(), "loewy_length": alg.loewy_length(), "paths": paths }),
                format!("dim {}\n{}", alg.dim(), lines(&paths)),
            ))
        }
        Command::Nf { input, elem } => {
            let (_, alg) = load(&input)?;
            let z = parse_element(alg.quiver(), alg.field(), &elem)?;
            let nf = alg.render(&alg.normal_form(&z));
            Ok(Output::ok(
                json!({ "input": elem, "normal_form": nf }),
                format!("{nf}\n"),
            ))
        }
        Command::Admissible { input } => {
            let (_, alg) = load(&input)?;
            Ok(Output::ok(
                json!({ "admissible": true, "dimension": alg.dim() }),
                format!("admissible, dimension {}\n", alg.dim()),
            ))
        }
        Command::Classify {
            input,
            arrow: a,
            groebner,
        } => {
            let (spec, alg) = load(&input)?;
            let alpha = arrow(&alg, &a.arrow)?;
            let cert = if groebner {
                strict_groebner_witness(&alg, alpha)
            } else {
                classify_generating_set(&alg, &spec.relations, alpha)?
            };
            let value = cert.to_json(&alg);
            let pq = match &cert.pq {
                Some((p, q)) => format!(
                    " with p = {}, q = {}",
                    alg.quiver().path_name(p),
                    alg.quiver().path_name(q)
                ),
                None => String::new(),
            };
            let text = format!("{}{pq}\n", value["level"].as_str().unwrap_or_default());
            Ok(Output::ok(value, text))
        }
        Command::Remove {
            input,
            arrow: a,
            output,
        } => {
            let (_, alg) = load(&input)?;
            let removal = remove_arrow(&alg, arrow(&alg, &a.arrow)?)?;
            let text = gamma_spec(&removal.gamma).print();
            std::fs::write(&output, &text)?;
            Ok(Output::ok(
                json!({
                    "output": output.display().to_string(),
                    "dimension": removal.gamma.dim(),
                    "ideal_dimension": removal.ideal_basis.len(),
                    "notes": removal.notes,
                }),
                format!("wrote {} (dimension {})\n", output.display(), removal.gamma.dim()),
            ))
        }
        Command::Resolve { input, module: m, max } => {
            let (_, alg) = load(&input)?;
            let res = modules::resolve(&alg, &module(&alg, &m.module)?, max)?;
            res.check_exactness().map_err(Error::Invariant)?;
            let names: Vec<&str> = alg.quiver().vertices().map(|v| alg.quiver().vertex_name(v)).collect();
            let terms: Vec<String> = res
                .multiplicities
                .iter()
                .enumerate()
                .map(|(n, mult)| {
                    let parts: Vec<String> = mult
                        .iter()
                        .enumerate()
                        .filter(|(_, k)| **k > 0)
                        .map(|(v, k)| {
                            if *k == 1 {
                                format!("e{}Λ", names[v])
                            } else {
                                format!("(e{}Λ)^{k}", names[v])
                            }
                        })
                        .collect();
                    format!("P{n} = {}", parts.join(" + "))
                })
                .collect();
            Ok(Output::ok(
                json!({
                    "module": m.module,
                    "dimension_vector": res.module.dims(),
                    "multiplicities": res.multiplicities,
                    "syzygy_dimension_vectors": res.syzygies.iter().map(|s| s.dims().to_vec()).collect::<Vec<_>>(),
                    "projective_dimension": pd_json(res.projective_dimension()),
                    "minimal": res.minimal,
                    "truncated": res.truncated,
                }),
                format!("{}pd {}\n", lines(&terms), res.projective_dimension()),
            ))
        }
        Command::Pd {
            input,
            module: m,
            cutoff,
        } => {
            let (_, alg) = load(&input)?;
            let d = modules::pd(&alg, &module(&alg, &m.module)?, cutoff)?;
            Ok(Output::ok(
                json!({ "module": m.module, "pd": pd_json(d) }),
                format!("{d}\n"),
            ))
        }
        Command::Injdim {
            input,
            module: m,
            cutoff,
        } => {
            let (_, alg) = load(&input)?;
            let d = modules::injdim(&alg.opposite()?, &module(&alg, &m.module)?, cutoff)?;
            Ok(Output::ok(
                json!({ "module": m.module, "injdim": pd_json(d) }),
                format!("{d}\n"),
            ))
        }
        Command::Bound {
            input,
            arrow: a,
            cutoff,
            strategy,
        } => {
            let (_, alg) = load(&input)?;
            let mut report = findim::main_bound(&alg, arrow(&alg, &a.arrow)?, cutoff)?;
            report.algebra = file_stem(&input.file);
            if !matches!(strategy, StrategyArg::Larger) {
                if let Ok(removal) = remove_arrow(&alg, arrow(&alg, &a.arrow)?) {
                    let t = findim::triangular_reduction_with(removal.gamma.quiver(), strategy.into());
                    report.gamma_bound = t.bound;
                    report.lambda_bound = report.lambda_bound.and(t.bound.map(|b| b + 2));
                    report.fpd_upper = report.lambda_bound;
                    report.triangular = Some(t);
                }
            }
            bound_output(serde_json::to_value(&report).expect("serializable"), &report)
        }
        Command::Report {
            input,
            arrow: a,
            cutoff,
        } => {
            let (_, alg) = load(&input)?;
            let mut report = findim::main_bound(&alg, arrow(&alg, &a.arrow)?, cutoff)?;
            report.algebra = file_stem(&input.file);
            let reduced = findim::reducedness_report(&alg, cutoff)?;
            let mut out = bound_output(json!({ "bound": report, "reducedness": reduced }), &report)?;
            for s in &reduced.simples {
                out.text
                    .push_str(&format!("S{}: pd {}, injdim {}\n", s.vertex, s.pd, s.injdim));
            }
            out.text.push_str(&format!("Loewy length {}\n", reduced.loewy_length));
            Ok(out)
        }
        Command::Selftest { samples, seed } => {
            let checks = selftest::run(samples, seed);
            let mut text = String::new();
            for c in &checks {
                let status = match (c.passed, c.known_discrepancy) {
                    (true, _) => "PASS".to_string(),
                    (false, Some(why)) => format!("FAIL (known discrepancy: {why})"),
                    (false, None) => "FAIL".to_string(),
                };
                text.push_str(&format!("[{}] {}: {status} ({})\n", c.criterion, c.name, c.detail));
            }
            let unexpected = checks.iter().filter(|c| c.unexpected()).count();
            Ok(Output {
                json: json!({ "checks": checks, "unexpected_failures": unexpected }),
                text,
                code: if unexpected == 0 { 0 } else { 5 },
            })
        }
    }
}

fn bound_output(json: Value, report: &findim::FindimReport) -> Result<Output> {
    let mut text = String::new();
    if let Some(w) = &report.fpd_positive {
        text.push_str(&format!(
            "fpd > 0: the simple left module at {} is not in the socle\n",
            w.vertex
        ));
    }
    if let Some(t) = &report.triangular {
        text.push_str(&format!(
            "triangular reduction of the quotient: {} steps, bound {}\n",
            t.steps,
            t.bound.map_or("unknown".into(), |b| b.to_string())
        ));
    }
    match (report.fpd_upper, &report.failed_stage) {
        (Some(u), _) => text.push_str(&format!("{} <= fpd <= {u}\n", report.fpd_lower)),
        (None, stage) => text.push_str(&format!(
            "no bound: {} ({stage:?})\n",
            report.failure.as_deref().unwrap_or("not certified")
        )),
    }
    for n in &report.notes {
        text.push_str(&format!("note: {n}\n"));
    }
    let code = if report.fpd_upper.is_some() { 0 } else { 4 };
    Ok(Output { json, text, code })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_mode = cli.json;
    match run(cli.command) {
        Ok(out) => {
            if json_mode {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            if json_mode {
                let v = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
                println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
