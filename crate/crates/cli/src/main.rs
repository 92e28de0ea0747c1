//! Command-line interface: exact maximality/extremality verdicts, the grid
//! search, conversions from Gomory-Johnson functions, plots, the compendium,
//! and the two application formulas.
//!
//! Exit codes: 0 success (maximal/extreme), 1 negative verdict, 2
//! inconclusive, 3 parse or parameter errors, 4 internal errors.

mod svg;

use clap::{Parser, Subcommand};
use dff_core::rational::{format_rational, parse_rational, Rational};
use dff_core::{compendium, extremality, gjlink, maximality, pwl, search};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dff", about = "Exact tools for dual-feasible functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test maximality of a function file.
    Maximality { file: PathBuf },
    /// Test extremality of a maximal function file.
    Extremality { file: PathBuf },
    /// Enumerate polytope vertices on the grid 1/q and filter extreme ones.
    Search {
        #[arg(long)]
        q: u32,
        #[arg(long, default_value = "continuous")]
        mode: String,
        #[arg(long)]
        out: PathBuf,
        /// Also compute the irredundant constraint count (exact LP).
        #[arg(long)]
        minimize: bool,
    },
    /// Convert a built-in Gomory-Johnson function to a general DFF.
    Convert {
        #[arg(long)]
        family: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        lambda: String,
        /// Restrict to [0,1] and emit a classical function instead.
        #[arg(long)]
        restrict: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render the complex diagram of a function as SVG.
    Plot {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Color additive faces by covered component.
        #[arg(long)]
        components: bool,
        #[arg(long, default_value_t = 720)]
        size: u32,
    },
    /// List or construct compendium functions.
    Compendium {
        #[command(subcommand)]
        action: CompendiumAction,
    },
    /// Packing-ratio lower bound for item sizes uniform on [a,b].
    Bound {
        file: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Apply a general DFF to a row, producing a valid inequality.
    Cut {
        file: PathBuf,
        #[arg(long)]
        row: String,
        #[arg(long)]
        rhs: String,
    },
}

#[derive(Subcommand)]
enum CompendiumAction {
    List,
    Get {
        name: String,
        /// Parameters as KEY=P/Q, repeatable.
        #[arg(long = "param")]
        params: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

const EXIT_NEGATIVE: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_BAD_INPUT: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn load_pwl(path: &PathBuf) -> Result<pwl::PwlFunction, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    pwl::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Maximality { file } => cmd_maximality(&file),
        Command::Extremality { file } => cmd_extremality(&file),
        Command::Search {
            q,
            mode,
            out,
            minimize,
        } => cmd_search(q, &mode, &out, minimize),
        Command::Convert {
            family,
            b,
            lambda,
            restrict,
            out,
        } => cmd_convert(&family, &b, &lambda, restrict, out.as_ref()),
        Command::Plot {
            file,
            out,
            components,
            size,
        } => cmd_plot(&file, &out, components, size),
        Command::Compendium { action } => cmd_compendium(action),
        Command::Bound { file, a, b } => cmd_bound(&file, &a, &b),
        Command::Cut { file, row, rhs } => cmd_cut(&file, &row, &rhs),
    }
}

fn violation_json(v: &maximality::Violation) -> serde_json::Value {
    let kind = match v.kind {
        maximality::ViolationKind::Range => "range",
        maximality::ViolationKind::AtZero => "at_zero",
        maximality::ViolationKind::Superadditivity => "superadditivity",
        maximality::ViolationKind::Symmetry => "symmetry",
        maximality::ViolationKind::ContinuityAt0 => "continuity_at_0",
        maximality::ViolationKind::ContinuityAt1 => "continuity_at_1",
    };
    let location = match &v.location {
        maximality::Location::Point(x) => json!({ "x": format_rational(x) }),
        maximality::Location::Vertex { x, y, .. } => {
            json!({ "x": format_rational(x), "y": format_rational(y) })
        }
    };
    json!({ "kind": kind, "location": location, "slack": format_rational(&v.slack) })
}

fn cmd_maximality(file: &PathBuf) -> ExitCode {
    let f = match load_pwl(file) {
        Ok(f) => f,
        Err(e) => return fail(EXIT_BAD_INPUT, e),
    };
    let verdict = maximality::maximality_test(&f);
    let out = json!({
        "is_maximal": verdict.is_maximal,
        "violations": verdict.violations.iter().map(violation_json).collect::<Vec<_>>(),
    });
    println!("{out}");
    if verdict.is_maximal {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NEGATIVE)
    }
}

fn interval_json(iv: &(Rational, Rational)) -> serde_json::Value {
    json!([format_rational(&iv.0), format_rational(&iv.1)])
}

fn cmd_extremality(file: &PathBuf) -> ExitCode {
    let f = match load_pwl(file) {
        Ok(f) => f,
        Err(e) => return fail(EXIT_BAD_INPUT, e),
    };
    let verdict = match extremality::extremality_test(&f) {
        Ok(v) => v,
        Err(extremality::ExtremalityError::NotMaximal) => {
            println!("{}", json!({ "status": "not_maximal" }));
            return ExitCode::from(EXIT_NEGATIVE);
        }
        Err(e) => return fail(EXIT_INTERNAL, e),
    };
    let cover = json!({
        "components": verdict.cover.components.iter()
            .map(|c| c.iter().map(interval_json).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "uncovered": verdict.cover.uncovered.iter().map(interval_json).collect::<Vec<_>>(),
    });
    match verdict.status {
        extremality::Status::Extreme => {
            println!("{}", json!({ "status": "extreme", "cover": cover }));
            ExitCode::SUCCESS
        }
        extremality::Status::NotExtreme(p) => {
            let tilde: serde_json::Value =
                serde_json::from_str(&pwl::to_json(&p.phi_tilde)).expect("valid json");
            println!(
                "{}",
                json!({
                    "status": "not_extreme",
                    "cover": cover,
                    "witness": {
                        "epsilon": format_rational(&p.epsilon),
                        "phi_tilde": tilde,
                    }
                })
            );
            ExitCode::from(EXIT_NEGATIVE)
        }
        extremality::Status::Inconclusive(reason) => {
            println!(
                "{}",
                json!({ "status": "inconclusive", "reason": reason, "cover": cover })
            );
            ExitCode::from(EXIT_INCONCLUSIVE)
        }
    }
}

fn cmd_search(q: u32, mode: &str, out: &PathBuf, minimize: bool) -> ExitCode {
    let mode = match mode {
        "continuous" => search::Mode::Continuous,
        "discontinuous" => search::Mode::Discontinuous,
        other => return fail(EXIT_BAD_INPUT, format!("unknown mode `{other}`")),
    };
    match search::search_extreme(q, mode, Some(out), minimize) {
        Ok(report) => {
            println!("{}", report.to_json());
            ExitCode::SUCCESS
        }
        Err(search::SearchError::BadQ) => fail(EXIT_BAD_INPUT, search::SearchError::BadQ),
        Err(e) => fail(EXIT_INTERNAL, e),
    }
}

fn cmd_convert(
    family: &str,
    b: &str,
    lambda: &str,
    restrict: bool,
    out: Option<&PathBuf>,
) -> ExitCode {
    let (b, lambda) = match (parse_rational(b), parse_rational(lambda)) {
        (Ok(b), Ok(l)) => (b, l),
        _ => return fail(EXIT_BAD_INPUT, "b and lambda must be rationals like 7/2"),
    };
    let pi = match family {
        "sawtooth" => gjlink::sawtooth(&b),
        "staircase3" => gjlink::staircase_three_slope(&b),
        "staircase4" => gjlink::staircase_four_slope(&b),
        other => return fail(EXIT_BAD_INPUT, format!("unknown family `{other}`")),
    };
    let pi = match pi {
        Ok(pi) => pi,
        Err(e) => return fail(EXIT_BAD_INPUT, e),
    };
    let psi = match gjlink::gj_to_gdff(&pi, &lambda) {
        Ok(psi) => psi,
        Err(e) => return fail(EXIT_BAD_INPUT, e),
    };
    let mut summary = json!({
        "family": family,
        "b": format_rational(&b),
        "lambda": format_rational(&lambda),
        "restricted": restrict,
    });
    let text = if restrict {
        let phi = match gjlink::restrict_to_unit(&psi) {
            Ok(phi) => phi,
            Err(e) => return fail(EXIT_INTERNAL, e),
        };
        summary["maximal"] = json!(maximality::maximality_test(&phi).is_maximal);
        let status = match extremality::extremality_test(&phi) {
            Ok(v) => match v.status {
                extremality::Status::Extreme => "extreme",
                extremality::Status::NotExtreme(_) => "not_extreme",
                extremality::Status::Inconclusive(_) => "inconclusive",
            },
            Err(_) => "not_maximal",
        };
        summary["extremality"] = json!(status);
        pwl::to_json(&phi)
    } else {
        gjlink::gdff_to_json(&psi)
    };
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                return fail(EXIT_INTERNAL, e);
            }
            summary["out"] = json!(path.display().to_string());
            println!("{summary}");
        }
        None => println!("{text}"),
    }
    ExitCode::SUCCESS
}

fn cmd_plot(file: &PathBuf, out: &PathBuf, components: bool, size: u32) -> ExitCode {
    let f = match load_pwl(file) {
        Ok(f) => f,
        Err(e) => return fail(EXIT_BAD_INPUT, e),
    };
    let spec = svg::PlotSpec {
        color_by_component: components,
        canvas_size: size,
        ..svg::PlotSpec::default()
    };
    let rendered = svg::render(&f, &spec);
    if let Err(e) = std::fs::write(out, rendered) {
        return fail(EXIT_INTERNAL, e);
    }
    ExitCode::SUCCESS
}

fn cmd_compendium(action: CompendiumAction) -> ExitCode {
    let registry = compendium::Registry::default();
    match action {
        CompendiumAction::List => {
            for name in registry.list() {
                println!("{name}");
            }
            ExitCode::SUCCESS
        }
        CompendiumAction::Get { name, params, out } => {
            let mut map = compendium::Params::new();
            for p in &params {
                let Some((k, v)) = p.split_once('=') else {
                    return fail(EXIT_BAD_INPUT, format!("parameter `{p}` is not KEY=P/Q"));
                };
                match parse_rational(v) {
                    Ok(r) => map.insert(k.to_owned(), r),
                    Err(e) => return fail(EXIT_BAD_INPUT, e),
                };
            }
            match registry.get(&name, &map) {
                Ok(f) => {
                    let text = pwl::to_json(&f);
                    match out {
                        Some(path) => {
                            if let Err(e) = std::fs::write(path, text) {
                                return fail(EXIT_INTERNAL, e);
                            }
                        }
                        None => println!("{text}"),
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => fail(EXIT_BAD_INPUT, e),
            }
        }
    }
}

fn cmd_bound(file: &PathBuf, a: &str, b: &str) -> ExitCode {
    let f = match load_pwl(file) {
        Ok(f) => f,
        Err(e) => return fail(EXIT_BAD_INPUT, e),
    };
    let (a, b) = match (parse_rational(a), parse_rational(b)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return fail(EXIT_BAD_INPUT, "a and b must be rationals"),
    };
    match gjlink::lueker_bound(&f, &a, &b) {
        Ok(v) => {
            println!("{}", json!({ "bound": format_rational(&v) }));
            ExitCode::SUCCESS
        }
        Err(e) => fail(EXIT_BAD_INPUT, e),
    }
}

fn cmd_cut(file: &PathBuf, row: &str, rhs: &str) -> ExitCode {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_BAD_INPUT, format!("{}: {e}", file.display())),
    };
    let psi = match gjlink::gdff_from_json(&text) {
        Ok(p) => p,
        Err(e) => return fail(EXIT_BAD_INPUT, e),
    };
    let coeffs: Result<Vec<Rational>, _> = row.split(',').map(parse_rational).collect();
    let (coeffs, rhs) = match (coeffs, parse_rational(rhs)) {
        (Ok(c), Ok(r)) => (c, r),
        _ => return fail(EXIT_BAD_INPUT, "row and rhs must be rationals"),
    };
    let (cut, cut_rhs) = gjlink::generate_cut(&psi, &coeffs, &rhs);
    println!(
        "{}",
        json!({
            "coefficients": cut.iter().map(format_rational).collect::<Vec<_>>(),
            "rhs": format_rational(&cut_rhs),
        })
    );
    ExitCode::SUCCESS
}
