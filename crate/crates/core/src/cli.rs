//! The `jetcone` command line.
//!
//! Every command resolves its arguments into a [`Request`], runs it, and can
//! write a JSON manifest holding the tolerances, the request and the result.
//! `jetcone replay MANIFEST` reruns the request and reproduces the manifest
//! byte for byte.
//!
//! Exit codes: 0 pass or solution, 1 error or failed check, 2 evidence of
//! nonexistence, 3 indeterminate.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::catalog::{self, Params};
use crate::cone::offset_distance;
use crate::error::{ConeError, FigureError, SolveError};
use crate::figure::{self, FigureSpec, Style, Which};
use crate::ge::{canonical_pair, classify_type, diamond, is_generalized_equation, TypeLabel};
use crate::grid::{Domain, Grid};
use crate::identities::duality_suite;
use crate::solver::{nonuniqueness_witness, run_problem, GeSolveOptions, Problem, ProblemResult, SolveStatus, Verdict};
use crate::tol::Tolerances;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_NO_SOLUTION: i32 = 2;
pub const EXIT_INDETERMINATE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Figure(#[from] FigureError),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Cone(ConeError::Indeterminate(_))
            | CliError::Solve(SolveError::Cone(ConeError::Indeterminate(_)))
            | CliError::Figure(FigureError::Cone(ConeError::Indeterminate(_))) => EXIT_INDETERMINATE,
            _ => EXIT_FAIL,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "jetcone", version, about = "Subequations, generalized equations and their Dirichlet problems")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Seed for sampled directions.
    #[arg(long, global = true, default_value_t = Tolerances::default().seed)]
    pub seed: u64,
    /// Half-width of the boundary band in membership tests.
    #[arg(long, global = true, default_value_t = Tolerances::default().member)]
    pub tol_member: f64,
    /// Slack in boundary-graph containment.
    #[arg(long, global = true, default_value_t = Tolerances::default().contain)]
    pub tol_contain: f64,
    /// Sampled trace-free directions.
    #[arg(long, global = true, default_value_t = Tolerances::default().dirs)]
    pub dirs: usize,
    /// Write the JSON manifest here (`-` for standard output).
    #[arg(long, global = true)]
    pub json_out: Option<PathBuf>,
    /// Write SVG output here (figure only).
    #[arg(long, global = true)]
    pub svg_out: Option<PathBuf>,
}

impl Global {
    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            member: self.tol_member,
            contain: self.tol_contain,
            dirs: self.dirs,
            seed: self.seed,
        }
    }
}

/// A catalog entry and its parameters.
#[derive(Debug, Clone, Args)]
pub struct EntryArgs {
    /// Catalog entry name (see `jetcone catalog`).
    pub entry: String,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub r1: Option<f64>,
    #[arg(long)]
    pub r2: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub l: Option<usize>,
    /// `e,g` with e, g in {p, ptilde}.
    #[arg(long)]
    pub pair: Option<String>,
    /// One of p, ptilde, delta.
    #[arg(long)]
    pub f: Option<String>,
    /// Parameters as a JSON object; flags override its fields.
    #[arg(long)]
    pub params: Option<String>,
}

impl EntryArgs {
    fn resolve(&self) -> Result<(String, Params), CliError> {
        let mut p: Params = match &self.params {
            Some(s) => serde_json::from_str(s).map_err(|e| CliError::Input(format!("--params: {e}")))?,
            None => Params::default(),
        };
        macro_rules! take {
            ($($f:ident),*) => { $( if self.$f.is_some() { p.$f = self.$f.clone(); } )* };
        }
        take!(n, r, r1, r2, lambda, k, l, pair, f);
        Ok((self.entry.clone(), p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// Duality identities over the subequation suite.
    DualitySuite,
    /// Classifier output against every catalog entry's known type.
    CatalogTypes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DomainArg {
    Square,
    Disk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WhichArg {
    Set,
    H,
    HStar,
    E,
    G,
    EMin,
    GMax,
    GTildeMax,
}

impl From<WhichArg> for Which {
    fn from(w: WhichArg) -> Which {
        match w {
            WhichArg::Set => Which::Set,
            WhichArg::H => Which::H,
            WhichArg::HStar => Which::HStar,
            WhichArg::E => Which::E,
            WhichArg::G => Which::G,
            WhichArg::EMin => Which::EMin,
            WhichArg::GMax => Which::GMax,
            WhichArg::GTildeMax => Which::GTildeMax,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List catalog entries, or describe one.
    Catalog {
        entry: Option<String>,
        #[arg(long)]
        params: Option<String>,
    },
    /// Type I-IV of an entry's generalized equation.
    Classify(EntryArgs),
    /// Canonical pair of an entry's set, with closed forms when known.
    Canonical(EntryArgs),
    /// Smallest generalized equation containing an entry's set.
    Diamond {
        #[command(flatten)]
        entry: EntryArgs,
        /// Sampled points in the two-sided membership comparison.
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
    /// Solve a Dirichlet problem read from JSON.
    Solve {
        problem: PathBuf,
        /// Also write the solution values as CSV (`x,y,u`).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Two harmonics with the same boundary values.
    Witness {
        #[command(flatten)]
        entry: EntryArgs,
        #[arg(long, value_enum, default_value_t = DomainArg::Square)]
        domain: DomainArg,
        #[arg(long, default_value_t = 33)]
        nodes: usize,
    },
    /// Run a named check suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Dimensions to cover.
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        dims: Vec<usize>,
    },
    /// Eigenvalue-plane SVG of a planar set.
    Figure {
        #[command(flatten)]
        entry: EntryArgs,
        #[arg(long, value_enum, default_value_t = WhichArg::H)]
        which: WhichArg,
        #[arg(long, default_value_t = 3.0)]
        window: f64,
        #[arg(long, default_value_t = 160)]
        resolution: usize,
        #[arg(long)]
        fill: Option<String>,
        #[arg(long)]
        stroke: Option<String>,
    },
    /// Rerun the request stored in a manifest.
    Replay { manifest: PathBuf },
}

/// A fully resolved command, as stored in manifests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Request {
    Catalog {
        entry: Option<String>,
        #[serde(default)]
        params: Params,
    },
    Classify {
        entry: String,
        #[serde(default)]
        params: Params,
    },
    Canonical {
        entry: String,
        #[serde(default)]
        params: Params,
    },
    Diamond {
        entry: String,
        #[serde(default)]
        params: Params,
        samples: usize,
    },
    Solve {
        problem: Problem,
    },
    Witness {
        entry: String,
        #[serde(default)]
        params: Params,
        domain: Domain,
        nodes: usize,
    },
    Verify {
        suite: Suite,
        dims: Vec<usize>,
    },
    Figure {
        spec: FigureSpec,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub tolerances: Tolerances,
    pub request: Request,
    pub exit_code: i32,
    pub result: Value,
}

/// Result of running a request.
pub struct Outcome {
    pub exit_code: i32,
    pub text: String,
    pub result: Value,
    pub svg: Option<String>,
    pub csv: Option<String>,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable result")
}

fn entry_with_dim(name: &str, params: &Params) -> Result<catalog::CatalogEntry, CliError> {
    let mut p = params.clone();
    p.n.get_or_insert(2);
    Ok(catalog::lookup(name, &p)?)
}

/// Runs a request.
pub fn execute(req: &Request, tol: &Tolerances) -> Result<Outcome, CliError> {
    let mut text = String::new();
    let mut svg = None;
    let mut csv = None;
    let (exit_code, result) = match req {
        Request::Catalog { entry: None, .. } => {
            for (name, desc) in catalog::NAMES {
                let _ = writeln!(text, "{name:<24} {desc}");
            }
            let list: Vec<Value> = catalog::NAMES
                .iter()
                .map(|(n, d)| json!({"name": n, "description": d}))
                .collect();
            (EXIT_OK, json!({ "entries": list }))
        }
        Request::Catalog {
            entry: Some(name),
            params,
        } => {
            let e = entry_with_dim(name, params)?;
            let _ = writeln!(text, "{}: {}", e.name, e.summary);
            let _ = writeln!(text, "  H = {}", e.h);
            let _ = writeln!(text, "  E = {}", e.ge.e());
            let _ = writeln!(text, "  G = {}", e.ge.g());
            if let Some(t) = e.expected_type {
                let _ = writeln!(text, "  expected type {t}");
            }
            (EXIT_OK, to_value(&e))
        }
        Request::Classify { entry, params } => {
            let e = entry_with_dim(entry, params)?;
            let report = classify_type(&e.ge, tol)?;
            let _ = writeln!(text, "{} ({}): type {}", e.name, e.summary, report.label);
            let _ = writeln!(text, "  E in G: {}", report.e_in_g.holds());
            let _ = writeln!(text, "  G in E: {}", report.g_in_e.holds());
            let _ = writeln!(text, "  uniqueness: {}", report.uniqueness());
            let _ = writeln!(text, "  existence: {}", report.existence());
            if let Some(w) = &report.int_h_witness {
                let _ = writeln!(text, "  point of Int H: {:?}", w.rows());
            }
            if let Some(w) = &report.int_h_star_witness {
                let _ = writeln!(text, "  point of Int H*: {:?}", w.rows());
            }
            for n in &report.notes {
                let _ = writeln!(text, "  note: {n}");
            }
            let code = if report.label == TypeLabel::Unclassified {
                EXIT_INDETERMINATE
            } else {
                EXIT_OK
            };
            let result = json!({
                "entry": e.name,
                "expected_type": e.expected_type,
                "report": report,
            });
            (code, result)
        }
        Request::Canonical { entry, params } => {
            let e = entry_with_dim(entry, params)?;
            let cp = canonical_pair(&e.h);
            let _ = writeln!(text, "{}: canonical pair of {}", e.name, e.h);
            let _ = writeln!(text, "  E_min  = {}", cp.e_min);
            let _ = writeln!(text, "  G_max  = {}", cp.g_max);
            let _ = writeln!(text, "  G~_max = {}", cp.g_tilde_max);
            let mut distances = Value::Null;
            if let Some(cf) = &e.closed_forms {
                let d = [
                    offset_distance(&cp.e_min, &cf.e_min, tol)?,
                    offset_distance(&cp.g_max, &cf.g_max, tol)?,
                    offset_distance(&cp.g_tilde_max, &cf.g_tilde_max, tol)?,
                ];
                let _ = writeln!(text, "  closed forms:");
                let _ = writeln!(text, "    E_min  = {}  (distance {:.2e})", cf.e_min, d[0]);
                let _ = writeln!(text, "    G_max  = {}  (distance {:.2e})", cf.g_max, d[1]);
                let _ = writeln!(text, "    G~_max = {}  (distance {:.2e})", cf.g_tilde_max, d[2]);
                distances = json!({"e_min": d[0], "g_max": d[1], "g_tilde_max": d[2]});
            }
            let result = json!({
                "entry": e.name,
                "generic": cp,
                "closed_forms": e.closed_forms,
                "distances": distances,
            });
            (EXIT_OK, result)
        }
        Request::Diamond {
            entry,
            params,
            samples,
        } => {
            let e = entry_with_dim(entry, params)?;
            let d = diamond(&e.h);
            let check = is_generalized_equation(&e.h, *samples, tol)?;
            let _ = writeln!(text, "{}: diamond of {}", e.name, e.h);
            let _ = writeln!(text, "  E = {}", d.e());
            let _ = writeln!(text, "  G = {}", d.g());
            let _ = writeln!(
                text,
                "  H is a generalized equation: {} ({} of {} samples disagree)",
                check.is_ge, check.disagreements, check.samples
            );
            if let Some(w) = &check.witness {
                let _ = writeln!(text, "  point of the diamond outside H: {:?}", w.rows());
            }
            let result = json!({"entry": e.name, "diamond": d, "check": check});
            (EXIT_OK, result)
        }
        Request::Solve { problem } => {
            let res = run_problem(problem, &GeSolveOptions::default())?;
            let (code, sol) = match &res {
                ProblemResult::Ge(r) => {
                    let _ = writeln!(text, "{} on {:?} with phi = {}", problem.entry, problem.domain, problem.phi);
                    let _ = writeln!(text, "  E operator: {}", r.h_e.operator);
                    let _ = writeln!(text, "  G operator: {}", r.h_g.operator);
                    let _ = writeln!(text, "  |h_E - h_G| = {:.3e} (tol_exist {:.1e})", r.gap, r.tol_exist);
                    let code = match r.verdict {
                        Verdict::Solution => {
                            let _ = writeln!(text, "  verdict: solution");
                            EXIT_OK
                        }
                        Verdict::NoSolutionEvidence { gap } => {
                            let _ = writeln!(text, "  verdict: evidence of no solution (gap {gap:.4})");
                            EXIT_NO_SOLUTION
                        }
                        Verdict::Unverified { .. } => {
                            let _ = writeln!(text, "  verdict: h_E = h_G but the harmonic check failed");
                            EXIT_INDETERMINATE
                        }
                    };
                    for n in &r.notes {
                        let _ = writeln!(text, "  note: {n}");
                    }
                    (code, &r.h_e.solution)
                }
                ProblemResult::E(r) | ProblemResult::G(r) => {
                    let _ = writeln!(
                        text,
                        "{} ({}): {:?} after {} iterations, residual {:.2e}",
                        problem.entry, r.operator, r.status, r.iterations, r.residual
                    );
                    let code = if r.status == SolveStatus::Converged {
                        EXIT_OK
                    } else {
                        EXIT_INDETERMINATE
                    };
                    (code, &r.solution)
                }
            };
            let mut out = String::from("x,y,u\n");
            for (i, j) in sol.grid.indices() {
                if sol.grid.kind(i, j) != crate::grid::NodeKind::Outside {
                    let (x, y) = sol.grid.coords(i, j);
                    let _ = writeln!(out, "{x},{y},{}", sol.get(i, j));
                }
            }
            csv = Some(out);
            (code, to_value(&res))
        }
        Request::Witness {
            entry,
            params,
            domain,
            nodes,
        } => {
            let e = entry_with_dim(entry, params)?;
            let grid = Grid::new(domain.clone(), *nodes).map_err(SolveError::from)?;
            let w = nonuniqueness_witness(&e.ge, &grid, tol)?;
            let _ = writeln!(text, "{}: h1 = <Ax,x>/2 with A = {:?}", e.name, w.a.rows());
            let _ = writeln!(
                text,
                "  ball radius {:.3e}, bump amplitude {:.3e} at ({}, {}) radius {}",
                w.delta, w.epsilon, w.center.0, w.center.1, w.radius
            );
            let _ = writeln!(
                text,
                "  sup |h1 - h2| = {:.3e}; same boundary values: {}; both harmonic: {}",
                w.sup_difference,
                w.same_boundary,
                w.checks.iter().all(|c| c.pass)
            );
            let code = if w.pass() { EXIT_OK } else { EXIT_FAIL };
            (code, to_value(&w))
        }
        Request::Verify { suite, dims } => match suite {
            Suite::DualitySuite => {
                let mut rows = Vec::new();
                for &n in dims {
                    rows.extend(duality_suite(n, tol)?);
                }
                for r in &rows {
                    let _ = writeln!(
                        text,
                        "{} n={} {:<22} residual {:.1e} <= {:.0e} violations {}  {}",
                        if r.pass { "PASS" } else { "FAIL" },
                        r.n,
                        r.identity.formula(),
                        r.residual,
                        r.resolution,
                        r.violations,
                        r.set
                    );
                }
                let pass = rows.iter().all(|r| r.pass);
                let _ = writeln!(text, "{} of {} rows pass", rows.iter().filter(|r| r.pass).count(), rows.len());
                (if pass { EXIT_OK } else { EXIT_FAIL }, json!({"pass": pass, "rows": rows}))
            }
            Suite::CatalogTypes => {
                let mut rows = Vec::new();
                let mut pass = true;
                for (name, _) in catalog::NAMES {
                    let e = entry_with_dim(name, &Params::default())?;
                    let report = classify_type(&e.ge, tol)?;
                    let ok = e.expected_type.is_none_or(|t| t == report.label);
                    pass &= ok;
                    let _ = writeln!(
                        text,
                        "{} {name:<24} expected {:<6} computed {}",
                        if ok { "PASS" } else { "FAIL" },
                        e.expected_type.map_or("-".into(), |t| t.to_string()),
                        report.label
                    );
                    rows.push(json!({"entry": name, "expected": e.expected_type, "computed": report.label, "pass": ok}));
                }
                (if pass { EXIT_OK } else { EXIT_FAIL }, json!({"pass": pass, "rows": rows}))
            }
        },
        Request::Figure { spec } => {
            let (set, caption) = figure::resolve(spec)?;
            let fig = figure::render(&set, spec.window, spec.resolution, &spec.style, &caption)?;
            let report = figure::membership_match(&fig, &set, 10_000, figure::default_band(&fig), tol.seed);
            let _ = writeln!(text, "{caption}: {set}");
            let _ = writeln!(
                text,
                "  drawn region matches membership at {:.2}% of {} scored points",
                100.0 * report.fraction,
                report.samples - report.excluded
            );
            if let Some(w) = fig.thickened {
                let _ = writeln!(text, "  no sampled interior; drawn thickened by {w}");
            }
            let code = if report.fraction >= 0.995 { EXIT_OK } else { EXIT_FAIL };
            let result = json!({
                "set": set,
                "thickened": fig.thickened,
                "match": report,
            });
            svg = Some(fig.svg);
            (code, result)
        }
    };
    Ok(Outcome {
        exit_code,
        text,
        result,
        svg,
        csv,
    })
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write(path: &PathBuf, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// The resolved request and tolerances for parsed arguments.
pub fn request(cli: &Cli) -> Result<(Request, Tolerances), CliError> {
    let tol = cli.global.tolerances();
    let req = match &cli.command {
        Command::Catalog { entry, params } => Request::Catalog {
            entry: entry.clone(),
            params: match params {
                Some(s) => serde_json::from_str(s).map_err(|e| CliError::Input(format!("--params: {e}")))?,
                None => Params::default(),
            },
        },
        Command::Classify(a) => {
            let (entry, params) = a.resolve()?;
            Request::Classify { entry, params }
        }
        Command::Canonical(a) => {
            let (entry, params) = a.resolve()?;
            Request::Canonical { entry, params }
        }
        Command::Diamond { entry, samples } => {
            let (entry, params) = entry.resolve()?;
            Request::Diamond {
                entry,
                params,
                samples: *samples,
            }
        }
        Command::Solve { problem, .. } => {
            let src = read(problem)?;
            let problem: Problem =
                serde_json::from_str(&src).map_err(|e| CliError::Input(format!("{}: {e}", problem.display())))?;
            Request::Solve { problem }
        }
        Command::Witness { entry, domain, nodes } => {
            let (entry, params) = entry.resolve()?;
            let domain = match domain {
                DomainArg::Square => Domain::unit_square(),
                DomainArg::Disk => Domain::Disk {
                    cx: 0.5,
                    cy: 0.5,
                    r: 0.5,
                },
            };
            Request::Witness {
                entry,
                params,
                domain,
                nodes: *nodes,
            }
        }
        Command::Verify { suite, dims } => Request::Verify {
            suite: *suite,
            dims: dims.clone(),
        },
        Command::Figure {
            entry,
            which,
            window,
            resolution,
            fill,
            stroke,
        } => {
            let (name, params) = entry.resolve()?;
            let mut style = Style::default();
            if let Some(f) = fill {
                style.fill = f.clone();
            }
            if let Some(s) = stroke {
                style.stroke = s.clone();
            }
            Request::Figure {
                spec: FigureSpec {
                    entry: name,
                    params,
                    which: (*which).into(),
                    window: *window,
                    resolution: *resolution,
                    style,
                },
            }
        }
        Command::Replay { manifest } => {
            let src = read(manifest)?;
            let m: Manifest =
                serde_json::from_str(&src).map_err(|e| CliError::Input(format!("{}: {e}", manifest.display())))?;
            return Ok((m.request, m.tolerances));
        }
    };
    Ok((req, tol))
}

/// The manifest JSON for a finished request.
pub fn manifest_json(req: &Request, tol: &Tolerances, out: &Outcome) -> String {
    let m = Manifest {
        tool: "jetcone".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        tolerances: *tol,
        request: req.clone(),
        exit_code: out.exit_code,
        result: out.result.clone(),
    };
    let mut s = serde_json::to_string_pretty(&m).expect("serializable manifest");
    s.push('\n');
    s
}

fn run_cli(cli: &Cli) -> Result<i32, CliError> {
    let (req, tol) = request(cli)?;
    let out = execute(&req, &tol)?;
    let svg_to_stdout = out.svg.is_some() && cli.global.svg_out.is_none();
    if svg_to_stdout {
        eprint!("{}", out.text);
    } else {
        print!("{}", out.text);
    }
    if let (Some(svg), Some(path)) = (&out.svg, &cli.global.svg_out) {
        write(path, svg)?;
    } else if let Some(svg) = &out.svg {
        print!("{svg}");
    }
    if let (Command::Solve { csv: Some(path), .. }, Some(csv)) = (&cli.command, &out.csv) {
        write(path, csv)?;
    }
    if let Some(path) = &cli.global.json_out {
        let json = manifest_json(&req, &tol, &out);
        if path.as_os_str() == "-" {
            print!("{json}");
        } else {
            write(path, &json)?;
        }
    }
    Ok(out.exit_code)
}

/// Entry point for the binary; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match run_cli(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (Request, Tolerances, Outcome) {
        let cli = Cli::try_parse_from(std::iter::once("jetcone").chain(args.iter().copied())).unwrap();
        let (req, tol) = request(&cli).unwrap();
        let out = execute(&req, &tol).unwrap();
        (req, tol, out)
    }

    #[test]
    fn classify_examples() {
        let (_, _, out) = run(&["classify", "constrained-laplacian", "--r", "1"]);
        assert_eq!(out.result["report"]["label"], "II");
        let (_, _, out) = run(&["classify", "elementary", "--pair", "ptilde,p"]);
        assert_eq!(out.result["report"]["label"], "III");
        let (_, _, out) = run(&["classify", "determined", "--f", "delta"]);
        assert_eq!(out.result["report"]["label"], "I");
    }

    #[test]
    fn manifests_replay_byte_for_byte() {
        let (req, tol, out) = run(&["--dirs", "50", "canonical", "segment"]);
        let first = manifest_json(&req, &tol, &out);
        let m: Manifest = serde_json::from_str(&first).unwrap();
        let again = execute(&m.request, &m.tolerances).unwrap();
        assert_eq!(manifest_json(&m.request, &m.tolerances, &again), first);
    }

    #[test]
    fn params_json_and_flags_merge() {
        let cli = Cli::try_parse_from(["jetcone", "classify", "quasi-band", "--params", r#"{"r1": 2.0, "r2": 3.0}"#, "--r2", "1"]).unwrap();
        let (req, _) = request(&cli).unwrap();
        let Request::Classify { params, .. } = req else {
            panic!("wrong request")
        };
        assert_eq!((params.r1, params.r2), (Some(2.0), Some(1.0)));
    }

    #[test]
    fn indeterminate_errors_get_their_own_code() {
        let e = CliError::Cone(ConeError::Indeterminate("x".into()));
        assert_eq!(e.exit_code(), EXIT_INDETERMINATE);
        assert_eq!(CliError::Input("x".into()).exit_code(), EXIT_FAIL);
    }
}
