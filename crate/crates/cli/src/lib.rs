//! Command-line front end for `circle_morse`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use circle_morse::decision::{Bounds, Marked, Registry};
use circle_morse::dot::export_dot;
use circle_morse::format::{emit, emit_all, parse, Document};
use circle_morse::generator::{random_graph, GenParams};
use circle_morse::graph::{validate, DecoratedReebGraph};
use circle_morse::invariants::{graph_basis_map, BasisMap};
use circle_morse::moves::{orientation_double_cover, realize, reduce_unessential_all};
use circle_morse::rational::{parse_canonical, Q};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_EQUIVALENT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "circmorse", version, about = "Circle-valued Morse functions as decorated Reeb graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a graph file and list violated invariants.
    Validate { file: PathBuf },
    /// Print the critical type, surface and winding vector of a graph.
    Invariants {
        file: PathBuf,
        /// Basis document (or graph document with cycle lines) marking the surface.
        #[arg(long)]
        basis: Option<PathBuf>,
    },
    /// Decide whether two graphs are equivalent.
    Decide(DecideArgs),
    /// Build a graph from a descriptor.
    Realize { file: PathBuf },
    /// Push unessential pieces off the fiber at an angle.
    Reduce {
        file: PathBuf,
        #[arg(long, value_parser = parse_angle)]
        angle: Q,
    },
    /// Orientation double cover.
    Cover { file: PathBuf },
    /// Generate a random valid graph.
    Random(RandomArgs),
    /// Graphviz rendering of a graph.
    ExportDot { file: PathBuf },
}

#[derive(Args, Debug)]
struct DecideArgs {
    f: PathBuf,
    g: PathBuf,
    /// Search for a move certificate.
    #[arg(long)]
    certify: bool,
    /// Longest normalization the certificate search may use.
    #[arg(long, default_value_t = Bounds::default().max_steps)]
    bounds: usize,
    /// Decider name; defaults to `constructive` with `--certify`, else `circle`.
    #[arg(long)]
    strategy: Option<String>,
}

#[derive(Args, Debug)]
struct RandomArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = GenParams::default().max_vertices)]
    max_vertices: usize,
    #[arg(long, default_value_t = GenParams::default().max_saddles)]
    max_saddles: usize,
    #[arg(long)]
    orientable_only: bool,
    #[arg(long)]
    no_boundary: bool,
}

fn parse_angle(s: &str) -> Result<Q, String> {
    parse_canonical(s).map_err(|e| e.to_string())
}

struct Failure {
    message: String,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure { message: e.to_string() }
    }
}

fn fail(message: impl Into<String>) -> Failure {
    Failure { message: message.into() }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn read_doc(path: &Path) -> Result<Document, Failure> {
    parse(&read(path)?).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<(DecoratedReebGraph, Option<BasisMap>), Failure> {
    match read_doc(path)? {
        Document::Graph { graph, basis } => Ok((graph, basis)),
        d => Err(fail(format!("{}: expected a graph document, found {}", path.display(), d.kind()))),
    }
}

fn require_valid(path: &Path, g: &DecoratedReebGraph) -> Result<(), Failure> {
    let diags = validate(g);
    if diags.is_empty() {
        return Ok(());
    }
    let lines: Vec<String> = diags.iter().map(|d| format!("{}: {d}", path.display())).collect();
    Err(fail(lines.join("\n")))
}

fn marked(path: &Path, basis: Option<&Path>) -> Result<Marked, Failure> {
    let (graph, own) = read_graph(path)?;
    require_valid(path, &graph)?;
    let basis = match basis {
        Some(b) => match read_doc(b)? {
            Document::Basis(m) | Document::Graph { basis: Some(m), .. } => m,
            d => return Err(fail(format!("{}: expected a basis document, found {}", b.display(), d.kind()))),
        },
        None => match own {
            Some(m) => m,
            None => graph_basis_map(&graph)?,
        },
    };
    Ok(Marked::new(graph, basis))
}

/// Run one command. Documents go to `out` only on success.
fn dispatch(cmd: Command, err: &mut dyn Write) -> Result<(String, i32), Failure> {
    match cmd {
        Command::Validate { file } => {
            let (g, _) = read_graph(&file)?;
            let diags = validate(&g);
            for d in &diags {
                let _ = writeln!(err, "{}: {d}", file.display());
            }
            Ok((String::new(), if diags.is_empty() { EXIT_OK } else { EXIT_ERROR }))
        }
        Command::Invariants { file, basis } => {
            let m = marked(&file, basis.as_deref())?;
            Ok((emit(&Document::Descriptor(m.descriptor()?)), EXIT_OK))
        }
        Command::Decide(a) => {
            let f = marked(&a.f, None)?;
            let g = marked(&a.g, None)?;
            let name = a.strategy.unwrap_or_else(|| if a.certify { "constructive" } else { "circle" }.to_string());
            let registry = Registry::default();
            let out = registry.get(&name)?.decide(&f, &g, &Bounds { max_steps: a.bounds })?;
            let mut docs = vec![Document::Decision { decision: out.decision.clone(), search: out.search }];
            if a.certify {
                docs.extend(out.certificate.map(Document::Certificate));
            }
            let code = if out.decision.equivalent { EXIT_OK } else { EXIT_NOT_EQUIVALENT };
            Ok((emit_all(&docs), code))
        }
        Command::Realize { file } => {
            let Document::Descriptor(d) = read_doc(&file)? else {
                return Err(fail(format!("{}: expected a descriptor document", file.display())));
            };
            let g = realize(&d)?;
            Ok((emit(&Document::Graph { graph: g, basis: None }), EXIT_OK))
        }
        Command::Reduce { file, angle } => {
            let (g, _) = read_graph(&file)?;
            require_valid(&file, &g)?;
            let (h, cert) = reduce_unessential_all(&g, angle)?;
            Ok((emit_all(&[Document::Graph { graph: h, basis: None }, Document::Certificate(cert)]), EXIT_OK))
        }
        Command::Cover { file } => {
            let (g, _) = read_graph(&file)?;
            require_valid(&file, &g)?;
            let c = orientation_double_cover(&g);
            Ok((emit(&Document::Graph { graph: c.graph, basis: None }), EXIT_OK))
        }
        Command::Random(r) => {
            let p = GenParams {
                max_vertices: r.max_vertices,
                max_saddles: r.max_saddles,
                allow_nonorientable: !r.orientable_only,
                allow_boundary: !r.no_boundary,
                seed: r.seed,
            };
            Ok((emit(&Document::Graph { graph: random_graph(&p)?, basis: None }), EXIT_OK))
        }
        Command::ExportDot { file } => {
            let (g, _) = read_graph(&file)?;
            require_valid(&file, &g)?;
            Ok((export_dot(&g), EXIT_OK))
        }
    }
}

/// Parse `args` (program name first) and run the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, err) {
        Ok((text, code)) => {
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_ERROR;
            }
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            EXIT_ERROR
        }
    }
}
