use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tfg_core::fullgroup::{ball_growth, decompose_perm_rotation, index, lef_quotient, schreier_ball, IndexMethod};
use tfg_core::towers::{bratteli_from_nested, nested_sequence, telescope, vershik_step, BratteliDiagram};
use tfg_core::{Element, Order, Space};

mod dot;
mod input;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("IoError: {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("ParseError: {path}:{line}:{column}: {message}")]
    Parse { path: PathBuf, line: usize, column: usize, message: String },
    #[error("{}: {}{source}", source.name(), path.as_ref().map(|p| format!("{}: ", p.display())).unwrap_or_default())]
    Library { path: Option<PathBuf>, source: tfg_core::Error },
    #[error("UsageError: {0}")]
    Usage(String),
    #[error("UnsupportedPayload: {0} output has no DOT rendering")]
    UnsupportedPayload(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Library { source, .. } if source.is_budget() => 3,
            _ => 2,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Attach an input path to a library error.
fn at<T>(path: &Path, r: tfg_core::Result<T>) -> CliResult<T> {
    r.map_err(|source| CliError::Library { path: Some(path.to_path_buf()), source })
}

#[derive(Parser, Debug)]
#[command(name = "tfg", version, about = "Exact computation in topological full groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Orbit,
    Measure,
}

#[derive(Args, Debug)]
struct SpaceArg {
    #[arg(long)]
    space: PathBuf,
}

#[derive(Args, Debug)]
struct ElementArgs {
    #[arg(long)]
    space: PathBuf,
    #[arg(long = "element", required = true)]
    elements: Vec<PathBuf>,
}

#[derive(Args, Debug)]
struct DiagramSource {
    /// Diagram file; otherwise the diagram is built from `--space`.
    diagram: Option<PathBuf>,
    #[arg(long, conflicts_with = "diagram")]
    space: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    levels: usize,
}

#[derive(Args, Debug)]
struct Tables {
    tables: Vec<PathBuf>,
    #[arg(long = "table")]
    flagged: Vec<PathBuf>,
}

impl Tables {
    fn paths(&self, count: usize) -> CliResult<Vec<&PathBuf>> {
        let all: Vec<&PathBuf> = self.tables.iter().chain(&self.flagged).collect();
        if all.len() != count {
            return Err(CliError::Usage(format!("expected {count} table file(s), got {}", all.len())));
        }
        Ok(all)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Number of words of length n in the language.
    Complexity {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        n: usize,
    },
    /// Finite-stage entropy log(complexity(n)) / n.
    Entropy {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        n: usize,
    },
    /// Composition of the elements, the last applied first.
    Compose(ElementArgs),
    Inverse(ElementArgs),
    Index {
        #[command(flatten)]
        elements: ElementArgs,
        #[arg(long, value_enum, default_value_t = Method::Orbit)]
        method: Method,
    },
    Order {
        #[command(flatten)]
        elements: ElementArgs,
        #[arg(long, default_value_t = 1000)]
        bound: u64,
    },
    Support(ElementArgs),
    /// Cocycle and image of the designated point shifted by n.
    Evaluate {
        #[command(flatten)]
        elements: ElementArgs,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        n: i64,
    },
    /// Finite permutation model of the given elements.
    Lef {
        #[command(flatten)]
        elements: ElementArgs,
        #[arg(long, default_value_t = 12)]
        levels: usize,
    },
    /// Split an element into a tower-preserving part and a rotation.
    Decompose {
        #[command(flatten)]
        elements: ElementArgs,
        /// Number of nested levels; by default the first that works up to 12.
        #[arg(long)]
        levels: Option<usize>,
    },
    /// Ball sizes in the group generated by the elements.
    Growth {
        #[command(flatten)]
        elements: ElementArgs,
        #[arg(long, default_value_t = 3)]
        radius: usize,
        /// Largest ball enumerated.
        #[arg(long, default_value_t = 100_000)]
        bound: usize,
    },
    /// Ball in the Schreier graph of the orbit of the designated point.
    Schreier {
        #[command(flatten)]
        elements: ElementArgs,
        #[arg(long, default_value_t = 3)]
        radius: usize,
    },
    /// Nested Kakutani-Rokhlin partitions around the designated point.
    Kr {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
    Bratteli {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
    /// Vershik successor of a path prefix given as edge indices.
    Vershik {
        #[command(flatten)]
        source: DiagramSource,
        #[arg(long, value_delimiter = ',', required = true)]
        path: Vec<usize>,
    },
    Telescope {
        #[command(flatten)]
        source: DiagramSource,
        /// Levels kept, starting with 0.
        #[arg(long, value_delimiter = ',', required = true)]
        at: Vec<usize>,
    },
    #[command(name = "thompson-canon")]
    ThompsonCanon(Tables),
    /// Product a∘b of two tables (b applied first).
    #[command(name = "thompson-mul")]
    ThompsonMul(Tables),
    #[command(name = "thompson-inv")]
    ThompsonInv(Tables),
    /// Image of a word under the table.
    #[command(name = "thompson-act")]
    ThompsonAct {
        #[command(flatten)]
        tables: Tables,
        #[arg(long, value_delimiter = ',', required = true)]
        word: Vec<u32>,
    },
    #[command(name = "thompson-order")]
    ThompsonOrder {
        #[command(flatten)]
        tables: Tables,
        #[arg(long, default_value_t = 1000)]
        bound: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Complexity { .. } => "complexity",
            Command::Entropy { .. } => "entropy",
            Command::Compose(_) => "compose",
            Command::Inverse(_) => "inverse",
            Command::Index { .. } => "index",
            Command::Order { .. } => "order",
            Command::Support(_) => "support",
            Command::Evaluate { .. } => "evaluate",
            Command::Lef { .. } => "lef",
            Command::Decompose { .. } => "decompose",
            Command::Growth { .. } => "growth",
            Command::Schreier { .. } => "schreier",
            Command::Kr { .. } => "kr",
            Command::Bratteli { .. } => "bratteli",
            Command::Vershik { .. } => "vershik",
            Command::Telescope { .. } => "telescope",
            Command::ThompsonCanon(_) => "thompson-canon",
            Command::ThompsonMul(_) => "thompson-mul",
            Command::ThompsonInv(_) => "thompson-inv",
            Command::ThompsonAct { .. } => "thompson-act",
            Command::ThompsonOrder { .. } => "thompson-order",
        }
    }
}

/// What a subcommand produces before it is written out.
enum Output {
    Json(Value),
    Diagram(BratteliDiagram),
    Schreier(tfg_core::fullgroup::SchreierBall),
}

fn order_json(order: Order) -> Value {
    match order {
        Order::Finite(n) => json!({ "order": n }),
        Order::Unknown(bound) => json!({ "order": null, "searched": bound }),
    }
}

fn single(e: &ElementArgs) -> CliResult<(Space, Element, &Path)> {
    let [path] = e.elements.as_slice() else {
        return Err(CliError::Usage("expected exactly one --element".into()));
    };
    let space = input::space(&e.space)?;
    let g = input::element(&space, path)?;
    Ok((space, g, path))
}

fn diagram(src: &DiagramSource) -> CliResult<BratteliDiagram> {
    match (&src.diagram, &src.space) {
        (Some(path), _) => input::diagram(path),
        (None, Some(path)) => {
            let space = input::space(path)?;
            let seq = at(path, nested_sequence(&space, &space.designated_point(), src.levels))?;
            at(path, bratteli_from_nested(&seq))
        }
        (None, None) => Err(CliError::Usage("give a diagram file or --space".into())),
    }
}

fn execute(command: &Command) -> CliResult<Output> {
    let out = match command {
        Command::Complexity { space, n } => {
            let s = input::space(&space.space)?;
            json!({ "complexity": at(&space.space, s.complexity(*n))? })
        }
        Command::Entropy { space, n } => {
            let s = input::space(&space.space)?;
            let r = at(&space.space, s.entropy_estimate(*n))?;
            json!({ "n": r.n, "complexity": r.complexity, "entropy_f64": r.value })
        }
        Command::Compose(e) => {
            let s = input::space(&e.space)?;
            let gs = input::elements(&s, &e.elements)?;
            let mut g = Element::identity(&s);
            for (h, path) in gs.iter().zip(&e.elements) {
                g = at(path, g.compose(h))?;
            }
            json!({ "element": g.to_json() })
        }
        Command::Inverse(e) => {
            let (_, g, path) = single(e)?;
            json!({ "element": at(path, g.inverse())?.to_json() })
        }
        Command::Index { elements, method } => {
            let (s, g, path) = single(elements)?;
            let m = match method {
                Method::Orbit => IndexMethod::Orbit,
                Method::Measure => IndexMethod::Measure,
            };
            json!({ "index": at(path, index(&g, m, &s.designated_point()))? })
        }
        Command::Order { elements, bound } => {
            let (_, g, path) = single(elements)?;
            order_json(at(path, g.order(*bound))?)
        }
        Command::Support(e) => {
            let (s, g, path) = single(e)?;
            let support = at(path, g.support())?;
            json!({ "support": s.clopen_to_json(&support) })
        }
        Command::Evaluate { elements, n } => {
            let (s, g, path) = single(elements)?;
            let x = at(path, s.designated_point().shifted(*n))?;
            let (k, y) = at(path, g.evaluate(&x))?;
            json!({ "point": x.name(), "offset": n, "cocycle": k, "image_offset": y.offset() })
        }
        Command::Lef { elements, levels } => {
            let s = input::space(&elements.space)?;
            let gs = input::elements(&s, &elements.elements)?;
            let q = at(&elements.space, lef_quotient(&s, &gs, 1, *levels))?;
            let perms: Vec<&[usize]> = gs.iter().map(|g| q.image(g).expect("tabulated")).collect();
            json!({ "levels": q.levels, "degree": q.degree, "permutations": perms })
        }
        Command::Decompose { elements, levels } => {
            let (s, g, path) = single(elements)?;
            let range = match levels {
                Some(l) => *l..=*l,
                None => 1..=12,
            };
            let mut last = None;
            let mut found = None;
            for l in range {
                let seq = at(path, nested_sequence(&s, &s.designated_point(), l))?;
                let kr = seq.levels().last().expect("levels >= 1").clone();
                match decompose_perm_rotation(&g, &kr) {
                    Ok(d) => {
                        found = Some((l, kr, d));
                        break;
                    }
                    Err(e) => last = Some(e),
                }
            }
            let (l, kr, d) = match found {
                Some(f) => f,
                None => return at(path, Err(last.expect("tried a level"))),
            };
            json!({
                "levels": l,
                "kr": kr.to_json(),
                "p": d.p.to_json(),
                "r": d.r.to_json(),
                "rotation_number": d.rotation_number,
            })
        }
        Command::Growth { elements, radius, bound } => {
            let s = input::space(&elements.space)?;
            let gs = input::elements(&s, &elements.elements)?;
            let report = at(&elements.space, ball_growth(&gs, *radius, *bound))?;
            json!({ "radius": report.radius, "sizes": report.sizes })
        }
        Command::Schreier { elements, radius } => {
            let s = input::space(&elements.space)?;
            let gs = input::elements(&s, &elements.elements)?;
            let ball = at(&elements.space, schreier_ball(&gs, &s.designated_point(), *radius))?;
            return Ok(Output::Schreier(ball));
        }
        Command::Kr { space, levels } => {
            let s = input::space(&space.space)?;
            let seq = at(&space.space, nested_sequence(&s, &s.designated_point(), *levels))?;
            let parts: Vec<_> = seq.levels().iter().map(|k| k.to_json()).collect();
            json!({ "depths": seq.depths(), "levels": parts })
        }
        Command::Bratteli { space, levels } => {
            let source = DiagramSource { diagram: None, space: Some(space.space.clone()), levels: *levels };
            return Ok(Output::Diagram(diagram(&source)?));
        }
        Command::Vershik { source, path } => {
            let d = diagram(source)?;
            let r = vershik_step(&d, path).map_err(|source| CliError::Library { path: None, source })?;
            json!({ "step": r })
        }
        Command::Telescope { source, at: levels } => {
            let d = diagram(source)?;
            let t = telescope(&d, levels).map_err(|source| CliError::Library { path: None, source })?;
            return Ok(Output::Diagram(t));
        }
        Command::ThompsonCanon(t) => {
            let [a] = t.paths(1)?[..] else { unreachable!() };
            json!({ "table": input::table(a)?.to_json() })
        }
        Command::ThompsonMul(t) => {
            let [a, b] = t.paths(2)?[..] else { unreachable!() };
            let (ta, tb) = (input::table(a)?, input::table(b)?);
            json!({ "table": at(b, ta.compose(&tb))?.to_json() })
        }
        Command::ThompsonInv(t) => {
            let [a] = t.paths(1)?[..] else { unreachable!() };
            json!({ "table": input::table(a)?.inverse().to_json() })
        }
        Command::ThompsonAct { tables, word } => {
            let [a] = tables.paths(1)?[..] else { unreachable!() };
            let image = at(a, input::table(a)?.act_on_word(word))?;
            json!({ "word": word, "image": image })
        }
        Command::ThompsonOrder { tables, bound } => {
            let [a] = tables.paths(1)?[..] else { unreachable!() };
            order_json(at(a, input::table(a)?.order(*bound))?)
        }
    };
    Ok(Output::Json(out))
}

fn render(command: &Command, output: Output, format: Format) -> CliResult<String> {
    match (format, output) {
        (Format::Dot, Output::Diagram(d)) => Ok(dot::bratteli(&d)),
        (Format::Dot, Output::Schreier(b)) => Ok(dot::schreier(&b)),
        (Format::Dot, Output::Json(_)) => Err(CliError::UnsupportedPayload(command.name().into())),
        (Format::Json, output) => {
            let result = match output {
                Output::Json(v) => v,
                Output::Diagram(d) => serde_json::to_value(d).expect("diagrams serialize"),
                Output::Schreier(b) => json!({ "vertices": b.vertices, "edges": b.edges }),
            };
            let report = json!({ "schema": "tfg/1", "command": command.name(), "result": result });
            Ok(serde_json::to_string_pretty(&report).expect("reports serialize") + "\n")
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    let output = execute(&cli.command)?;
    let text = render(&cli.command, output, cli.format)?;
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io { path: path.clone(), source: e }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
