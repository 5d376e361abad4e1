//! Command-line front end: racks, rack-space homology, James complexes,
//! diagram invariants and the labelled-diagram move engine.
//!
//! Exit codes: 0 success, 1 invariant or verification failure,
//! 2 parse or usage errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rackkit_core::cobordism::{reduce, LabelledDiagram, Move, RackH2};
use rackkit_core::cubical::james::JamesComplex;
use rackkit_core::cubical::CubicalSet;
use rackkit_core::diagram::{Labelling, LinkDiagram};
use rackkit_core::homology::{homology, ChainComplex, SparseIntMatrix};
use rackkit_core::rack::{check_rack_axioms, HomSearchMode, Rack};

#[derive(Parser)]
#[command(name = "rackkit", version, about = "Rack space homology and link invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build, check or inspect finite racks.
    Rack {
        #[command(subcommand)]
        command: RackCommand,
    },
    /// Homology of rack spaces.
    Space {
        #[command(subcommand)]
        command: SpaceCommand,
    },
    /// Build and validate James complexes of a rack space.
    James(JamesArgs),
    /// Diagram parsing and invariants.
    Diagram {
        #[command(subcommand)]
        command: DiagramCommand,
    },
    /// The labelled-diagram move engine.
    Moves {
        #[command(subcommand)]
        command: MovesCommand,
    },
}

#[derive(Subcommand)]
enum RackCommand {
    /// Write the canonical JSON table of a rack.
    Make {
        /// Inline spec (`dihedral:5`, `cyclic:3`, `trivial:2`,
        /// `perm:(0 1 2)(3 4)`, `conj:<group.json>`) or a rack file path.
        spec: String,
        /// Output file (canonical bytes, no trailing newline).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check the rack axioms, reporting every violation.
    Check { spec: String },
    /// Print the orbit partition.
    Orbits { spec: String },
}

#[derive(Subcommand)]
enum SpaceCommand {
    /// Exact integer homology of the rack space in one degree.
    Homology(HomologyArgs),
}

#[derive(Args)]
struct HomologyArgs {
    /// Rack: inline spec or file path.
    #[arg(long)]
    rack: String,
    /// Which space to use.
    #[arg(long, default_value = "rack", value_parser = ["rack", "extended"])]
    space: String,
    /// Homology degree; the space is built to degree + 1.
    #[arg(long)]
    deg: usize,
}

#[derive(Args)]
struct JamesArgs {
    #[arg(long)]
    rack: String,
    /// Codimension of the James complex.
    #[arg(long)]
    n: usize,
    /// Top degree to build.
    #[arg(long)]
    maxdim: usize,
    /// Verify the cubical identity (and the level face rule when n = 1).
    #[arg(long)]
    validate: bool,
}

#[derive(Subcommand)]
enum DiagramCommand {
    /// Count colorings of a diagram by a rack.
    Colorings(DiagramInput),
    /// Algebraic crossing count (real crossings only).
    Writhe(DiagramInput),
    /// Print the fundamental rack presentation.
    Rackpres(DiagramInput),
    /// The degree-2 cycle class of a labelled diagram.
    Class(ClassArgs),
}

#[derive(Args)]
struct DiagramInput {
    /// Gauss code file.
    #[arg(long, conflicts_with = "pd")]
    gauss: Option<PathBuf>,
    /// Planar diagram code file.
    #[arg(long)]
    pd: Option<PathBuf>,
    /// Rack (required for colorings).
    #[arg(long)]
    rack: Option<String>,
}

#[derive(Args)]
struct ClassArgs {
    #[arg(long)]
    gauss: PathBuf,
    /// Labelling file `{"rack": ..., "labels": {...}}`.
    #[arg(long)]
    labels: PathBuf,
    /// Rack override; defaults to the labelling file's rack reference.
    #[arg(long)]
    rack: Option<String>,
}

#[derive(Subcommand)]
enum MovesCommand {
    /// Search for a smaller cobordant diagram. Prints the move trace on
    /// stdout (replayable) and a summary on stderr.
    Reduce(ReduceArgs),
    /// Replay a move trace against a labelled diagram.
    Replay(ReplayArgs),
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    gauss: PathBuf,
    #[arg(long)]
    rack: String,
    /// Labelling file; defaults to the first coloring in enumeration order.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Limit on move applications during the search.
    #[arg(long)]
    budget: usize,
    /// Restrict every intermediate diagram to the labels already present.
    #[arg(long = "scheme-colours-only")]
    scheme_colours_only: bool,
}

#[derive(Args)]
struct ReplayArgs {
    #[arg(long)]
    gauss: PathBuf,
    #[arg(long)]
    rack: String,
    #[arg(long)]
    labels: Option<PathBuf>,
    /// File of move lines, one per line.
    #[arg(long)]
    trace: PathBuf,
}

/// Failure carrying the process exit code: 1 verification, 2 parse/usage.
struct Failure {
    code: u8,
    message: String,
}

fn parse_failure(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn verification_failure(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| parse_failure(format!("cannot read {}: {e}", path.display())))
}

/// Loads a rack from an inline spec or a file path. A string naming an
/// existing file is read as the JSON table format; `conj:<path>` reads a
/// group table; anything else must parse as `kind:params`.
fn load_rack(spec: &str) -> Result<Rack, Failure> {
    if let Some(path) = spec.strip_prefix("conj:") {
        let text = read_file(Path::new(path))?;
        return Rack::conjugation_from_json(&text).map_err(|e| parse_failure(e.to_string()));
    }
    if Path::new(spec).is_file() {
        let text = read_file(Path::new(spec))?;
        return Rack::from_json(&text).map_err(|e| parse_failure(e.to_string()));
    }
    Rack::parse_spec(spec).map_err(|e| parse_failure(e.to_string()))
}

fn load_diagram(input: &DiagramInput) -> Result<LinkDiagram, Failure> {
    match (&input.gauss, &input.pd) {
        (Some(path), None) => LinkDiagram::parse_gauss(&read_file(path)?)
            .map_err(|e| parse_failure(format!("{}: {e}", path.display()))),
        (None, Some(path)) => LinkDiagram::parse_pd(&read_file(path)?)
            .map_err(|e| parse_failure(format!("{}: {e}", path.display()))),
        _ => Err(parse_failure("exactly one of --gauss or --pd is required")),
    }
}

/// FNV-1a over the canonical rack bytes, for cache file names.
fn fnv64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os("RACKKIT_CACHE").map(PathBuf::from)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Rack { command } => run_rack(command),
        Command::Space { command } => match command {
            SpaceCommand::Homology(args) => run_space_homology(args),
        },
        Command::James(args) => run_james(args),
        Command::Diagram { command } => run_diagram(command),
        Command::Moves { command } => match command {
            MovesCommand::Reduce(args) => run_reduce(args),
            MovesCommand::Replay(args) => run_replay(args),
        },
    }
}

fn run_rack(command: RackCommand) -> Result<(), Failure> {
    match command {
        RackCommand::Make { spec, out } => {
            let rack = load_rack(&spec)?;
            let text = rack.to_canonical_json();
            match out {
                Some(path) => fs::write(&path, text.as_bytes())
                    .map_err(|e| parse_failure(format!("cannot write {}: {e}", path.display())))?,
                None => println!("{text}"),
            }
            Ok(())
        }
        RackCommand::Check { spec } => {
            // read the table without enforcing axioms, then report
            let table = if Path::new(&spec).is_file() {
                let text = read_file(Path::new(&spec))?;
                Rack::table_from_json(&text).map_err(|e| parse_failure(e.to_string()))?
            } else {
                load_rack(&spec)?.table().to_vec()
            };
            match check_rack_axioms(&table) {
                Ok(()) => {
                    println!("ok");
                    Ok(())
                }
                Err(violations) => {
                    for v in &violations {
                        println!("{v}");
                    }
                    Err(verification_failure(format!("{} violation(s)", violations.len())))
                }
            }
        }
        RackCommand::Orbits { spec } => {
            let rack = load_rack(&spec)?;
            let parts: Vec<String> = rack
                .orbits()
                .into_iter()
                .map(|orbit| {
                    let elems: Vec<String> = orbit.iter().map(|e| e.to_string()).collect();
                    format!("{{{}}}", elems.join(","))
                })
                .collect();
            println!("{}", parts.join(" "));
            Ok(())
        }
    }
}

fn run_space_homology(args: HomologyArgs) -> Result<(), Failure> {
    let rack = load_rack(&args.rack)?;
    let dim = args.deg + 1;
    let cache_base = cache_dir().map(|dir| {
        let hash = fnv64(rack.to_canonical_json().as_bytes());
        dir.join(format!("rack-{hash:016x}-{}-d{dim}", args.space))
    });

    let cc = load_or_build_complex(&rack, &args.space, dim, cache_base.as_deref())?;
    let group = homology(&cc, args.deg).map_err(|e| parse_failure(e.to_string()))?;
    println!("{group}");
    println!("{}", group.machine_format());
    Ok(())
}

/// Loads the boundary matrices from the cache or builds the cubical set
/// (itself cached) and derives them.
fn load_or_build_complex(
    rack: &Rack,
    space: &str,
    dim: usize,
    cache_base: Option<&Path>,
) -> Result<ChainComplex, Failure> {
    if let Some(base) = cache_base {
        let paths: Vec<PathBuf> =
            (1..=dim).map(|k| base.with_extension(format!("b{k}.mat"))).collect();
        if paths.iter().all(|p| p.is_file()) {
            let mut boundaries = Vec::with_capacity(dim);
            let mut ok = true;
            for p in &paths {
                match SparseIntMatrix::from_cache_text(&read_file(p)?) {
                    Ok(m) => boundaries.push(m),
                    Err(e) => {
                        eprintln!("warning: ignoring corrupt cache {}: {e}", p.display());
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                match ChainComplex::from_boundaries(boundaries) {
                    Ok(cc) => return Ok(cc),
                    Err(e) => eprintln!("warning: ignoring inconsistent cache: {e}"),
                }
            }
        }
    }
    let set = match cache_base.map(|b| b.with_extension("cubset")) {
        Some(path) if path.is_file() => match CubicalSet::from_cache_text(&read_file(&path)?) {
            Ok(set) => set,
            Err(e) => {
                eprintln!("warning: ignoring corrupt cache {}: {e}", path.display());
                build_space(rack, space, dim)?
            }
        },
        _ => build_space(rack, space, dim)?,
    };
    let cc = ChainComplex::from_cubical(&set);
    if let Some(base) = cache_base {
        if let Some(dir) = base.parent() {
            let _ = fs::create_dir_all(dir);
        }
        let _ = fs::write(base.with_extension("cubset"), set.to_cache_text());
        for k in 1..=dim {
            let _ =
                fs::write(base.with_extension(format!("b{k}.mat")), cc.boundary(k).to_cache_text());
        }
    }
    Ok(cc)
}

fn build_space(rack: &Rack, space: &str, dim: usize) -> Result<CubicalSet, Failure> {
    match space {
        "rack" => Ok(CubicalSet::rack_space(rack, dim)),
        "extended" => Ok(CubicalSet::extended_rack_space(rack, dim)),
        other => Err(parse_failure(format!("unknown space `{other}`"))),
    }
}

fn run_james(args: JamesArgs) -> Result<(), Failure> {
    let rack = load_rack(&args.rack)?;
    let base_dim = args.n + args.maxdim;
    let base = CubicalSet::rack_space(&rack, base_dim);
    let james = JamesComplex::build(&base, args.n, args.maxdim)
        .map_err(|e| parse_failure(e.to_string()))?;
    if let Some(dir) = cache_dir() {
        let hash = fnv64(rack.to_canonical_json().as_bytes());
        let path = dir.join(format!("rack-{hash:016x}-james-n{}-d{}.cubset", args.n, args.maxdim));
        if let Some(parent) = path.parent() {
            let _ = fs::create_dir_all(parent);
        }
        let _ = fs::write(path, james.set().to_cache_text());
    }
    for k in 0..=args.maxdim {
        println!("dim {k}: {} cells", james.cell_count(k));
    }
    if args.validate {
        if let Err(violations) = james.set().validate() {
            for v in violations.iter().take(10) {
                println!("{v}");
            }
            return Err(verification_failure(format!(
                "cubical identity fails ({} violations)",
                violations.len()
            )));
        }
        if args.n == 1 {
            for k in 1..=args.maxdim {
                for cell in 0..james.cell_count(k) {
                    let level = james.level(k, cell).expect("codimension 1");
                    for i in 1..=k {
                        for eps in 0..2u8 {
                            let face = james.set().face(k, cell, i, eps);
                            let face_level = james.level(k - 1, face).expect("codimension 1");
                            let expected = if i >= level { level } else { level - 1 };
                            if face_level != expected {
                                return Err(verification_failure(format!(
                                    "level face rule fails on {k}-cell {cell} at i={i}, eps={eps}"
                                )));
                            }
                        }
                    }
                }
            }
        }
        println!("validate: ok");
    }
    Ok(())
}

fn run_diagram(command: DiagramCommand) -> Result<(), Failure> {
    match command {
        DiagramCommand::Colorings(input) => {
            let diagram = load_diagram(&input)?;
            let rack_spec =
                input.rack.as_ref().ok_or_else(|| parse_failure("--rack is required"))?;
            let rack = load_rack(rack_spec)?;
            let result = diagram.colorings(&rack, HomSearchMode::Count);
            println!("{}", result.count);
            Ok(())
        }
        DiagramCommand::Writhe(input) => {
            let diagram = load_diagram(&input)?;
            println!("{}", diagram.writhe());
            Ok(())
        }
        DiagramCommand::Rackpres(input) => {
            let diagram = load_diagram(&input)?;
            let presentation = diagram.fundamental_rack();
            println!("generators: {}", presentation.generators().join(" "));
            for [g, h, k] in presentation.relations() {
                println!(
                    "{} = {} ^ {}",
                    presentation.generators()[*k],
                    presentation.generators()[*g],
                    presentation.generators()[*h]
                );
            }
            Ok(())
        }
        DiagramCommand::Class(args) => {
            let diagram = LinkDiagram::parse_gauss(&read_file(&args.gauss)?)
                .map_err(|e| parse_failure(format!("{}: {e}", args.gauss.display())))?;
            let (rack_ref, labelling) = Labelling::from_json(&read_file(&args.labels)?)
                .map_err(|e| parse_failure(format!("{}: {e}", args.labels.display())))?;
            let rack = load_rack(args.rack.as_deref().unwrap_or(&rack_ref))?;
            let labelled = LabelledDiagram::new(diagram, rack, &labelling)
                .map_err(|e| verification_failure(e.to_string()))?;
            let class = labelled.cycle_class().map_err(|e| verification_failure(e.to_string()))?;
            println!("{class}");
            Ok(())
        }
    }
}

fn load_labelled(
    gauss: &Path,
    rack_spec: &str,
    labels: Option<&Path>,
) -> Result<LabelledDiagram, Failure> {
    let diagram = LinkDiagram::parse_gauss(&read_file(gauss)?)
        .map_err(|e| parse_failure(format!("{}: {e}", gauss.display())))?;
    let rack = load_rack(rack_spec)?;
    let labelling = match labels {
        Some(path) => {
            let (_, labelling) = Labelling::from_json(&read_file(path)?)
                .map_err(|e| parse_failure(format!("{}: {e}", path.display())))?;
            labelling
        }
        None => {
            // deterministic default: the first coloring in enumeration order
            let colorings = diagram.colorings(&rack, HomSearchMode::List);
            colorings
                .labellings
                .and_then(|mut ls| if ls.is_empty() { None } else { Some(ls.remove(0)) })
                .ok_or_else(|| verification_failure("the diagram has no labelling by this rack"))?
        }
    };
    LabelledDiagram::new(diagram, rack, &labelling).map_err(|e| verification_failure(e.to_string()))
}

fn print_diagram_summary(ld: &LabelledDiagram, out: &mut impl std::io::Write) {
    let d = ld.diagram();
    let _ = writeln!(out, "crossings: {}", d.real_crossing_count());
    let _ = writeln!(out, "components: {}", d.components().len());
    match d.print_gauss() {
        Ok(code) => {
            let _ = writeln!(out, "gauss: {code}");
        }
        Err(_) => {
            let _ = writeln!(out, "gauss: -");
        }
    }
    let _ = writeln!(out, "labels: {}", ld.labelling().to_json("-"));
}

fn run_reduce(args: ReduceArgs) -> Result<(), Failure> {
    let ld = load_labelled(&args.gauss, &args.rack, args.labels.as_deref())?;
    let start = ld.diagram().real_crossing_count();
    let report = reduce(&ld, args.budget, args.scheme_colours_only);
    for mv in &report.trace {
        println!("{mv}");
    }
    let mut err = std::io::stderr();
    use std::io::Write;
    let _ = writeln!(
        err,
        "crossings: {start} -> {} (steps {}, {})",
        report.best.diagram().real_crossing_count(),
        report.steps,
        if report.exhausted { "exhausted" } else { "reduced" }
    );
    print_diagram_summary(&report.best, &mut err);
    Ok(())
}

fn run_replay(args: ReplayArgs) -> Result<(), Failure> {
    let mut ld = load_labelled(&args.gauss, &args.rack, args.labels.as_deref())?;
    let trace = read_file(&args.trace)?;
    for (no, line) in trace.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mv = Move::parse_line(line)
            .map_err(|e| parse_failure(format!("trace line {}: {e}", no + 1)))?;
        ld = ld
            .apply_move(&mv)
            .map_err(|e| verification_failure(format!("trace line {}: {e}", no + 1)))?;
    }
    let mut out = std::io::stdout();
    print_diagram_summary(&ld, &mut out);
    let h2 = RackH2::new(ld.rack());
    let class = h2.class_of(&ld).map_err(|e| verification_failure(e.to_string()))?;
    println!("class: {class}");
    Ok(())
}
