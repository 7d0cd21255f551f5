//! Command-line front end.
//!
//! [`run`] takes the full argument vector and returns the exit code with the
//! text destined for standard output and standard error, which keeps the
//! binary a two-line shim and lets tests drive every subcommand in-process.
//!
//! Exit codes: 0 success, 1 check failure, 2 input error, 3 resource cap.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use solspace::bits::format_bits;
use solspace::constructions::{simplicial_to_vertexset, to_3sat, to_kpn322, vertexset_to_cnf, ReductionResult, SimplicialComplex};
use solspace::cubical::{induce_complex_capped, CubicalComplex, FACE_MAX};
use solspace::formula::{emit_dimacs, parse_csp, parse_dimacs, Formula};
use solspace::homology::{homology, Coefficients, HomologyProfile};
use solspace::relations::{parse_relations, schaefer_classify, Relation};
use solspace::solution_space::{enumerate_solutions_capped, project, VertexSet, D_MAX};
use solspace::verify::{run_check, CheckExtras, CheckKind, CheckReport, Flavor, GeneratorParams};

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "solspace", version, about = "Topology of boolean CSP solution spaces")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Lower the dimension cap; for `verify` this is the largest generated dimension.
    #[arg(long, global = true, value_name = "D")]
    max_dim: Option<usize>,
    /// Lower the face cap for complex construction.
    #[arg(long, global = true, value_name = "N")]
    max_faces: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
struct FormulaInput {
    /// DIMACS CNF, CSP text, or `vset` file; `-` reads standard input.
    input: PathBuf,
    /// Relation file resolving names in CSP input.
    #[arg(long)]
    relations: Option<PathBuf>,
    /// Allow constant arguments in CSP input.
    #[arg(long)]
    constants: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide tractability of a relation set.
    Classify {
        relations: PathBuf,
        /// Classify SAT with constants (conditions 3 to 6 only).
        #[arg(long)]
        constants: bool,
    },
    /// Enumerate the solutions of a formula.
    Solve(FormulaInput),
    /// Homology and f-vector of the induced complex.
    Betti {
        #[command(flatten)]
        input: FormulaInput,
        /// Coefficients: Z, Z2 or Q.
        #[arg(long, default_value = "Z")]
        coeffs: String,
    },
    /// Project solutions away from the given 1-based dimensions.
    Project {
        #[command(flatten)]
        input: FormulaInput,
        /// Comma-separated 1-based dimensions.
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
    },
    /// Split long clauses into a 3-CNF with auxiliary variables.
    Reduce3 { input: PathBuf },
    /// Rewrite a 3-CNF into clauses with at most two positive and two negative literals.
    Reduce322 { input: PathBuf },
    /// Realize a simplicial complex as a CNF formula.
    Realize { input: PathBuf },
    /// Run a randomized check.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// tractable-homology, affine-structure, wedge-union, trivially-valid,
    /// one-in-three, projection, reductions or structural.
    check: String,
    #[arg(long)]
    flavor: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Wedge count for wedge-union.
    #[arg(long)]
    wedges: Option<usize>,
    #[arg(long)]
    min_dim: Option<usize>,
    #[arg(long)]
    min_count: Option<usize>,
    #[arg(long)]
    max_count: Option<usize>,
    /// Relation file for trivially-valid.
    #[arg(long)]
    relations: Option<PathBuf>,
    /// TOML file with per-check settings.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Per-check settings in a TOML config; tables are keyed by check name.
#[derive(Debug, Default, Deserialize)]
struct VerifyConfig {
    seed: Option<u64>,
    #[serde(flatten)]
    checks: BTreeMap<String, CheckConfig>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct CheckConfig {
    trials: Option<usize>,
    seed: Option<u64>,
    flavor: Option<String>,
    wedges: Option<usize>,
    min_dim: Option<usize>,
    max_dim: Option<usize>,
    min_count: Option<usize>,
    max_count: Option<usize>,
}

/// A one-line diagnostic with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    tag: &'static str,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            tag: "E_INPUT",
            message: message.into(),
        }
    }
}

impl From<solspace::Error> for Failure {
    fn from(e: solspace::Error) -> Self {
        if e.is_resource() {
            Failure {
                code: EXIT_RESOURCE,
                tag: "E_RESOURCE",
                message: e.to_string(),
            }
        } else {
            Failure::input(e.to_string())
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

struct Caps {
    max_dim: usize,
    max_faces: usize,
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let first = text.lines().next().unwrap_or("").trim_start_matches("error: ");
                Outcome {
                    code: EXIT_INPUT,
                    stdout: String::new(),
                    stderr: format!("error[E_USAGE]: {first}\n"),
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(&cli) {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(f) => Outcome {
            code: f.code,
            stdout: String::new(),
            stderr: format!("error[{}]: {}\n", f.tag, f.message.replace('\n', " ")),
        },
    }
}

fn caps(cli: &Cli) -> CliResult<Caps> {
    let over = |what: &str, got: usize, max: usize| Failure {
        code: EXIT_INPUT,
        tag: "E_USAGE",
        message: format!("--{what} {got} exceeds the built-in maximum {max}"),
    };
    let max_dim = cli.max_dim.unwrap_or(D_MAX);
    if max_dim > D_MAX {
        return Err(over("max-dim", max_dim, D_MAX));
    }
    let max_faces = cli.max_faces.unwrap_or(FACE_MAX);
    if max_faces > FACE_MAX {
        return Err(over("max-faces", max_faces, FACE_MAX));
    }
    Ok(Caps { max_dim, max_faces })
}

fn execute(cli: &Cli) -> CliResult<(i32, String)> {
    let caps = caps(cli)?;
    let json = cli.format == Format::Json;
    let out = match &cli.command {
        Command::Classify { relations, constants } => classify(&read(relations)?, *constants, json)?,
        Command::Solve(input) => {
            let v = load_vertex_set(input, &caps)?;
            emit_vset(&v, json)
        }
        Command::Betti { input, coeffs } => {
            let coeffs: Coefficients = coeffs.parse()?;
            let v = load_vertex_set(input, &caps)?;
            let k = induce_complex_capped(&v, caps.max_faces)?;
            betti(&k, coeffs, json)
        }
        Command::Project { input, dims } => {
            let v = load_vertex_set(input, &caps)?;
            let zero_based = dims
                .iter()
                .map(|&d| {
                    d.checked_sub(1)
                        .ok_or_else(|| Failure::input("dimensions are 1-based"))
                })
                .collect::<CliResult<Vec<_>>>()?;
            emit_vset(&project(&v, &zero_based)?, json)
        }
        Command::Reduce3 { input } => emit_reduction(&to_3sat(&parse_dimacs(&read(input)?)?)?, json)?,
        Command::Reduce322 { input } => emit_reduction(&to_kpn322(&parse_dimacs(&read(input)?)?)?, json)?,
        Command::Realize { input } => {
            let k = SimplicialComplex::parse(&read(input)?)?;
            let v = simplicial_to_vertexset(&k)?;
            if v.dimension() > caps.max_dim {
                return Err(resource("dimension", v.dimension(), caps.max_dim));
            }
            let f = vertexset_to_cnf(&v)?;
            let dimacs = emit_dimacs(&f)?;
            if json {
                json_line(&json!({
                    "dimension": f.dimension(),
                    "vertices": v.len(),
                    "clauses": f.constraints().len(),
                    "dimacs": dimacs,
                }))
            } else {
                dimacs
            }
        }
        Command::Verify(args) => return verify(args, cli.max_dim, json),
    };
    Ok((EXIT_OK, out))
}

fn resource(what: &'static str, requested: usize, limit: usize) -> Failure {
    solspace::Error::ResourceLimit { what, requested, limit }.into()
}

fn read(path: &Path) -> CliResult<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| Failure::input(format!("cannot read standard input: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum InputKind {
    Dimacs,
    Csp,
    VertexSet,
    Simplicial,
    Complex,
}

/// Identifies a file by its first meaningful line.
fn sniff(text: &str) -> Option<InputKind> {
    for line in text.lines() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t == "c" || t.starts_with("c ") {
            continue;
        }
        let head = t.split_whitespace().next()?;
        return match head {
            "p" => Some(InputKind::Dimacs),
            "dim" => Some(InputKind::Csp),
            "vset" => Some(InputKind::VertexSet),
            "scomplex" => Some(InputKind::Simplicial),
            "cube" => Some(InputKind::Complex),
            _ => None,
        };
    }
    None
}

fn load_formula(input: &FormulaInput, text: &str, kind: InputKind) -> CliResult<Formula> {
    match kind {
        InputKind::Dimacs => Ok(parse_dimacs(text)?),
        InputKind::Csp => {
            let relations = match &input.relations {
                Some(p) => parse_relations(&read(p)?)?,
                None => Vec::new(),
            };
            Ok(parse_csp(text, &relations, input.constants)?)
        }
        _ => Err(Failure::input("expected a formula")),
    }
}

fn load_vertex_set(input: &FormulaInput, caps: &Caps) -> CliResult<VertexSet> {
    let text = read(&input.input)?;
    let kind = sniff(&text).ok_or_else(|| Failure::input("unrecognized input: expected `p cnf`, `dim`, `vset` or `scomplex`"))?;
    let v = match kind {
        InputKind::VertexSet => VertexSet::parse(&text)?,
        InputKind::Simplicial => simplicial_to_vertexset(&SimplicialComplex::parse(&text)?)?,
        InputKind::Complex => {
            return Err(Failure::input("complex dumps are not accepted here; pass the vertex set"));
        }
        _ => return Ok(enumerate_solutions_capped(&load_formula(input, &text, kind)?, caps.max_dim)?),
    };
    if v.dimension() > caps.max_dim {
        return Err(resource("dimension", v.dimension(), caps.max_dim));
    }
    Ok(v)
}

fn json_line(value: &Value) -> String {
    let mut s = serde_json::to_string(value).expect("json serializes");
    s.push('\n');
    s
}

fn classify(text: &str, constants: bool, json: bool) -> CliResult<String> {
    let relations: Vec<Relation> = parse_relations(text)?;
    let verdict = schaefer_classify(&relations, constants)?;
    if json {
        let per: Vec<Value> = relations
            .iter()
            .zip(&verdict.per_relation)
            .map(|(r, f)| json!({"name": r.name(), "arity": r.arity(), "flags": f}))
            .collect();
        return Ok(json_line(&json!({
            "tractable": verdict.tractable,
            "witness": verdict.witness.map(|c| c.name()),
            "with_constants": constants,
            "relations": per,
        })));
    }
    Ok(match verdict.witness {
        Some(c) => format!("tractable ({})\n", c.name()),
        None => "NP-complete\n".to_owned(),
    })
}

fn emit_vset(v: &VertexSet, json: bool) -> String {
    if json {
        let sols: Vec<String> = v.iter().map(|x| format_bits(x, v.dimension())).collect();
        json_line(&json!({"dimension": v.dimension(), "count": v.len(), "solutions": sols}))
    } else {
        v.to_text()
    }
}

fn betti(k: &CubicalComplex, coeffs: Coefficients, json: bool) -> String {
    let h: HomologyProfile = homology(k, coeffs);
    let f = k.f_vector();
    if json {
        let mut value = serde_json::to_value(&h).expect("profile serializes");
        value["f"] = json!(f);
        return json_line(&value);
    }
    let join = |xs: Vec<String>| if xs.is_empty() { "-".to_owned() } else { xs.join(" ") };
    let torsion: Vec<String> = h
        .torsion
        .iter()
        .map(|t| {
            if t.is_empty() {
                "0".to_owned()
            } else {
                t.iter().map(|x| format!("Z{x}")).collect::<Vec<_>>().join("+")
            }
        })
        .collect();
    format!(
        "coeffs: {}\nbetti: {}\ntorsion: {}\nf: {}\n",
        h.coeffs,
        join(h.betti.iter().map(ToString::to_string).collect()),
        join(torsion),
        join(f.iter().map(ToString::to_string).collect()),
    )
}

fn emit_reduction(r: &ReductionResult, json: bool) -> CliResult<String> {
    let dimacs = emit_dimacs(&r.formula)?;
    let aux: Vec<usize> = r.projection_dims.iter().map(|d| d + 1).collect();
    if json {
        let map: Vec<usize> = r.variable_map.iter().map(|v| v + 1).collect();
        return Ok(json_line(&json!({
            "dimension": r.formula.dimension(),
            "projection_dims": aux,
            "variable_map": map,
            "dimacs": dimacs,
        })));
    }
    let aux: Vec<String> = aux.iter().map(ToString::to_string).collect();
    Ok(format!("c project {}\n{dimacs}", aux.join(" ")))
}

fn verify(args: &VerifyArgs, max_dim: Option<usize>, json: bool) -> CliResult<(i32, String)> {
    let kind: CheckKind = args.check.parse()?;
    let config: VerifyConfig = match &args.config {
        Some(p) => toml::from_str(&read(p)?).map_err(|e| Failure::input(format!("config: {}", e.message())))?,
        None => VerifyConfig::default(),
    };
    if let Some(unknown) = config.checks.keys().find(|k| k.parse::<CheckKind>().is_err()) {
        return Err(Failure::input(format!("config: unknown check section `{unknown}`")));
    }
    let section = config.checks.get(kind.name()).cloned().unwrap_or_default();
    let d = kind.defaults();
    let flavor: Flavor = match args.flavor.as_ref().or(section.flavor.as_ref()) {
        Some(s) => s.parse()?,
        None => d.flavor,
    };
    let params = GeneratorParams::new(
        (
            args.min_dim.or(section.min_dim).unwrap_or(d.dims.0),
            max_dim.or(section.max_dim).unwrap_or(d.dims.1),
        ),
        (
            args.min_count.or(section.min_count).unwrap_or(d.counts.0),
            args.max_count.or(section.max_count).unwrap_or(d.counts.1),
        ),
        flavor,
        args.seed.or(section.seed).or(config.seed).unwrap_or(0),
    )?;
    let extras = CheckExtras {
        wedges: args.wedges.or(section.wedges),
        relations: match &args.relations {
            Some(p) => parse_relations(&read(p)?)?,
            None => Vec::new(),
        },
    };
    let trials = args.trials.or(section.trials).unwrap_or(d.trials);
    let report: CheckReport = run_check(kind, &params, trials, &extras)?;
    Ok(render_report(&report, json))
}

fn render_report(report: &CheckReport, json: bool) -> (i32, String) {
    let code = if report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED };
    if json {
        return (code, format!("{}\n", report.to_json()));
    }
    let mut s = format!(
        "{}: {} ({} trials, {} failures, seed {}, {} ms)\n",
        report.check,
        if report.passed() { "PASS" } else { "FAIL" },
        report.trials,
        report.failures.len(),
        report.seed,
        report.ms
    );
    for f in &report.failures {
        s.push_str(&format!("  {}\n    expected {}; observed {}\n", f.instance.replace('\n', " "), f.expected, f.observed));
    }
    (code, s)
}
