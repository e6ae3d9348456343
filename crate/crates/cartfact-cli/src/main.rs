//! Command line front end. Every output stream starts with `# cartfact v1`
//! and is line oriented and deterministic; randomized subcommands take an
//! explicit seed. Exit codes: 0 success, 1 domain error, 2 usage error.

use std::error::Error;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cartfact::approx::{
    evaluate_recovery, grow_region, perturb, Edit, FactorVerdict, HeuristicConfig,
    PerturbationSpec, RecoveryReport, SeedStrategy,
};
use cartfact::coordinatizer::{assign_coordinates, default_root, CoordinateAssignment};
use cartfact::covering::{compute_delta_star, cover};
use cartfact::dot::{graph_to_dot, psp_to_dot};
use cartfact::edgelist::{load_edge_list, write_edge_list};
use cartfact::factorizer::{reconstructs_exactly, verify_embedding, FactorSet};
use cartfact::generate;
use cartfact::graph::cartesian_product;
use cartfact::pipeline::run_pipeline;
use cartfact::psp::build_psp;
use cartfact::squares::SquareIndex;
use cartfact::{Graph, VertexSubset};

const HEADER: &str = "# cartfact v1";

#[derive(Parser)]
#[command(name = "cartfact", version, about = "Cartesian product structure in graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the Cartesian product of factor graphs
    Product(ProductArgs),
    /// Label every edge with its global relation class
    Delta(DeltaArgs),
    /// Print the partial star product at a center vertex
    Psp(PspArgs),
    /// Assign coordinate vectors from a root vertex
    Coordinatize(CoordinatizeArgs),
    /// Recover factor graphs and the vertex embedding
    Factorize(FactorizeArgs),
    /// Grow a product-like region and factorize it
    Approx(ApproxArgs),
    /// Delete and add edges while preserving connectivity
    Perturb(PerturbArgs),
    /// Run the pipeline and check every invariant it promises
    Verify(VerifyArgs),
}

#[derive(Args)]
struct IoArgs {
    /// Edge list file; omit or pass '-' for stdin
    input: Option<PathBuf>,
    /// Output file; omit for stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ProductArgs {
    /// One edge list per factor, in position order
    #[arg(long, required = true, num_args = 1..)]
    factors: Vec<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DeltaArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Emit GraphViz DOT with class labels instead of text lines
    #[arg(long)]
    dot: bool,
}

#[derive(Args)]
struct PspArgs {
    #[command(flatten)]
    io: IoArgs,
    #[arg(long)]
    center: usize,
    /// Emit GraphViz DOT instead of text lines
    #[arg(long)]
    dot: bool,
}

#[derive(Args)]
struct CoordinatizeArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Start vertex; defaults to the vertex with the most local classes
    #[arg(long)]
    root: Option<usize>,
    /// Emit GraphViz DOT with coordinate labels instead of text lines
    #[arg(long)]
    dot: bool,
}

#[derive(Args)]
struct FactorizeArgs {
    #[command(flatten)]
    io: IoArgs,
    #[arg(long)]
    root: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SeedStrategyArg {
    MaxDegree,
    MaxPspClasses,
    Explicit,
}

#[derive(Args)]
struct ApproxArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Minimum class count the grown region must keep
    #[arg(long)]
    threshold: usize,
    #[arg(long, value_enum, default_value_t = SeedStrategyArg::MaxDegree)]
    seed_strategy: SeedStrategyArg,
    /// Seed vertex for --seed-strategy explicit
    #[arg(long, required_if_eq("seed_strategy", "explicit"))]
    seed_vertex: Option<usize>,
    /// Stop growing at this many vertices
    #[arg(long)]
    max_region: Option<usize>,
    /// Run a batch of perturb-and-recover experiments on random star
    /// products instead of reading a graph, emitting one CSV row per run
    #[arg(long)]
    experiment: bool,
    #[arg(long, default_value_t = 20, help = "Experiment runs")]
    runs: usize,
    /// Random seed; required by --experiment
    #[arg(long, required_if_eq("experiment", "true"))]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1, help = "Edges deleted per experiment run")]
    del: usize,
    #[arg(long, default_value_t = 0, help = "Edges added per experiment run")]
    add: usize,
}

#[derive(Args)]
struct PerturbArgs {
    #[command(flatten)]
    io: IoArgs,
    #[arg(long)]
    del: usize,
    #[arg(long)]
    add: usize,
    #[arg(long)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    io: IoArgs,
    #[arg(long)]
    root: Option<usize>,
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// CARTFACT_THREADS caps internal parallelism; 0 means sequential.
fn configure_threads() {
    if let Ok(raw) = std::env::var("CARTFACT_THREADS") {
        if let Ok(k) = raw.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build_global();
        }
    }
}

type CliResult = Result<(), Box<dyn Error>>;

fn run(command: Command) -> CliResult {
    match command {
        Command::Product(args) => cmd_product(args),
        Command::Delta(args) => cmd_delta(args),
        Command::Psp(args) => cmd_psp(args),
        Command::Coordinatize(args) => cmd_coordinatize(args),
        Command::Factorize(args) => cmd_factorize(args),
        Command::Approx(args) => cmd_approx(args),
        Command::Perturb(args) => cmd_perturb(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn load_graph(path: &Option<PathBuf>) -> Result<Graph, Box<dyn Error>> {
    let g = match path {
        Some(p) if p.as_os_str() != "-" => load_edge_list(File::open(p)?)?,
        _ => load_edge_list(io::stdin().lock())?,
    };
    Ok(g)
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Box<dyn Error>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn cmd_product(args: ProductArgs) -> CliResult {
    let factors = args
        .factors
        .iter()
        .map(|p| Ok(load_edge_list(File::open(p)?)?))
        .collect::<Result<Vec<Graph>, Box<dyn Error>>>()?;
    let product = cartesian_product(&factors)?;
    let g = &product.graph;
    let mut out = open_output(&args.output)?;
    writeln!(out, "{HEADER}")?;
    writeln!(
        out,
        "# product of {} factors: {} vertices, {} edges",
        factors.len(),
        g.vertex_count(),
        g.edge_count()
    )?;
    write_edge_list(g, &mut out)?;
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let c = product.colors.label_of(e).expect("products color every edge");
        writeln!(out, "# {c} {u} {v}")?;
    }
    Ok(())
}

fn cmd_delta(args: DeltaArgs) -> CliResult {
    let g = load_graph(&args.io.input)?;
    let partition = compute_delta_star(&g)?;
    let mut out = open_output(&args.io.output)?;
    writeln!(out, "{HEADER}")?;
    if args.dot {
        write!(out, "{}", graph_to_dot(&g, Some(&partition), None))?;
        return Ok(());
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let c = partition.label_of(e).expect("the global relation covers every edge");
        writeln!(out, "{u} {v} {c}")?;
    }
    Ok(())
}

fn cmd_psp(args: PspArgs) -> CliResult {
    let g = load_graph(&args.io.input)?;
    if args.center >= g.vertex_count() {
        return Err(format!(
            "center {} is out of range for {} vertices",
            args.center,
            g.vertex_count()
        )
        .into());
    }
    let idx = SquareIndex::build(&g);
    let psp = build_psp(&idx, args.center);
    let mut out = open_output(&args.io.output)?;
    writeln!(out, "{HEADER}")?;
    if args.dot {
        write!(out, "{}", psp_to_dot(&g, &psp))?;
        return Ok(());
    }
    writeln!(
        out,
        "center {} primal {} non_primal {} classes {}",
        psp.center,
        psp.primal_edges.len(),
        psp.non_primal_edges.len(),
        psp.class_count()
    )?;
    for (c, class) in psp.classes.iter().enumerate() {
        for &e in class {
            let (u, v) = g.edge(e);
            writeln!(out, "{c} {u} {v}")?;
        }
    }
    Ok(())
}

fn write_assignment(
    out: &mut dyn Write,
    g: &Graph,
    ca: &CoordinateAssignment,
) -> io::Result<()> {
    writeln!(out, "root {} classes {}", ca.root(), ca.class_count())?;
    for v in ca.surviving_vertices() {
        let coords: Vec<String> = ca
            .coord_of(v)
            .expect("surviving vertices carry vectors")
            .iter()
            .map(|c| c.to_string())
            .collect();
        writeln!(out, "{v} {}", coords.join(" "))?;
    }
    for &(v, reason) in &ca.deletion_log().vertices {
        writeln!(out, "# removed vertex {v} {reason:?}")?;
    }
    for &(e, reason) in &ca.deletion_log().edges {
        let (u, v) = ca.edge(e);
        writeln!(out, "# removed edge {u} {v} {reason:?}")?;
    }
    let _ = g;
    Ok(())
}

fn cmd_coordinatize(args: CoordinatizeArgs) -> CliResult {
    let g = load_graph(&args.io.input)?;
    let w = VertexSubset::full(g.vertex_count());
    let covering = cover(&g, &w)?;
    let root = args
        .root
        .or_else(|| default_root(&covering))
        .expect("cover rejects empty subsets");
    let ca = assign_coordinates(&g, &covering, root)?;
    let mut out = open_output(&args.io.output)?;
    writeln!(out, "{HEADER}")?;
    if args.dot {
        write!(out, "{}", graph_to_dot(&g, None, Some(ca.coords())))?;
        return Ok(());
    }
    write_assignment(&mut out, &g, &ca)?;
    Ok(())
}

fn write_factor_set(out: &mut dyn Write, fs: &FactorSet) -> io::Result<()> {
    writeln!(out, "factors {} dropped {}", fs.factors.len(), fs.dropped_positions.len())?;
    for f in &fs.factors {
        writeln!(
            out,
            "factor position {} vertices {} edges {}",
            f.position,
            f.graph.vertex_count(),
            f.graph.edge_count()
        )?;
        for &(u, v) in f.graph.edges() {
            writeln!(out, "{u} {v}")?;
        }
    }
    writeln!(out, "embedding {}", fs.h_vertices.len())?;
    for &v in &fs.h_vertices {
        let coords: Vec<String> = fs.embedding[v]
            .as_ref()
            .expect("embedded vertices carry vectors")
            .iter()
            .map(|c| c.to_string())
            .collect();
        writeln!(out, "{v} {}", coords.join(" "))?;
    }
    Ok(())
}

fn cmd_factorize(args: FactorizeArgs) -> CliResult {
    let g = load_graph(&args.io.input)?;
    let w = VertexSubset::full(g.vertex_count());
    let out_pipe = run_pipeline(&g, &w, args.root)?;
    let mut out = open_output(&args.io.output)?;
    writeln!(out, "{HEADER}")?;
    write_factor_set(&mut out, &out_pipe.factors)?;
    Ok(())
}

fn strategy(args: &ApproxArgs) -> SeedStrategy {
    match args.seed_strategy {
        SeedStrategyArg::MaxDegree => SeedStrategy::MaxDegree,
        SeedStrategyArg::MaxPspClasses => SeedStrategy::MaxPspClasses,
        SeedStrategyArg::Explicit => {
            SeedStrategy::Explicit(args.seed_vertex.expect("clap enforces --seed-vertex"))
        }
    }
}

fn cmd_approx(args: ApproxArgs) -> CliResult {
    if args.experiment {
        return cmd_experiment(args);
    }
    let g = load_graph(&args.io.input)?;
    let cfg = HeuristicConfig {
        threshold: args.threshold,
        seed: strategy(&args),
        max_region: args.max_region,
    };
    let region = grow_region(&g, &cfg)?;
    let out_pipe = run_pipeline(&g, &region, None)?;
    let mut out = open_output(&args.io.output)?;
    writeln!(out, "{HEADER}")?;
    let members: Vec<String> = region.iter().map(|v| v.to_string()).collect();
    writeln!(out, "region {} {}", region.len(), members.join(" "))?;
    write_factor_set(&mut out, &out_pipe.factors)?;
    Ok(())
}

fn verdict_text(v: &FactorVerdict) -> String {
    match v {
        FactorVerdict::Isomorphic { truth_index } => format!("isomorphic:{truth_index}"),
        FactorVerdict::ProfileMatch { truth_index } => format!("profile:{truth_index}"),
        FactorVerdict::Unmatched => "unmatched".into(),
    }
}

/// One perturb-and-recover run on a random two-star product.
fn experiment_run(threshold: usize, del: usize, add: usize, seed: u64) -> Result<RecoveryReport, Box<dyn Error + Send + Sync>> {
    let mut rng = generate::seeded_rng(seed);
    use rand::Rng;
    let a = rng.random_range(3..=6);
    let b = rng.random_range(3..=6);
    let factors = vec![generate::star(a), generate::star(b)];
    let product = cartesian_product(&factors)?;
    let spec = PerturbationSpec { delete: del, add, seed };
    let (g, _) = perturb(&product.graph, &spec)?;
    let region = grow_region(&g, &HeuristicConfig::new(threshold))?;
    let out = run_pipeline(&g, &region, None)?;
    Ok(evaluate_recovery(&product, &factors, &g, &out))
}

fn cmd_experiment(args: ApproxArgs) -> CliResult {
    use rayon::prelude::*;
    let base_seed = args.seed.expect("clap enforces --seed with --experiment");
    let rows: Vec<(u64, Result<RecoveryReport, String>)> = (0..args.runs as u64)
        .into_par_iter()
        .map(|i| {
            let seed = base_seed.wrapping_add(i);
            (
                seed,
                experiment_run(args.threshold, args.del, args.add, seed).map_err(|e| e.to_string()),
            )
        })
        .collect();
    let mut out = open_output(&args.io.output)?;
    writeln!(out, "{HEADER}")?;
    writeln!(
        out,
        "seed,region_size,class_count,color_accuracy,scored_edges,vertices_retained,factor_verdicts"
    )?;
    for (seed, row) in rows {
        match row {
            Ok(r) => {
                let verdicts: Vec<String> = r.factor_verdicts.iter().map(verdict_text).collect();
                writeln!(
                    out,
                    "{seed},{},{},{:.6},{},{},{}",
                    r.region_size,
                    r.class_count,
                    r.color_accuracy,
                    r.scored_edges,
                    r.vertices_retained,
                    verdicts.join(";")
                )?;
            }
            Err(e) => writeln!(out, "{seed},error,,,,,{e}")?,
        }
    }
    Ok(())
}

fn cmd_perturb(args: PerturbArgs) -> CliResult {
    let g = load_graph(&args.io.input)?;
    let spec = PerturbationSpec {
        delete: args.del,
        add: args.add,
        seed: args.seed,
    };
    let (h, log) = perturb(&g, &spec)?;
    let mut out = open_output(&args.io.output)?;
    writeln!(out, "{HEADER}")?;
    write_edge_list(&h, &mut out)?;
    for edit in &log {
        match edit {
            Edit::Delete(u, v) => writeln!(out, "# edit delete {u} {v}")?,
            Edit::Add(u, v) => writeln!(out, "# edit add {u} {v}")?,
        }
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> CliResult {
    let g = load_graph(&args.io.input)?;
    let w = VertexSubset::full(g.vertex_count());
    let out_pipe = run_pipeline(&g, &w, args.root)?;
    let mut out = open_output(&args.io.output)?;
    writeln!(out, "{HEADER}")?;
    let mut failed = false;
    match out_pipe.assignment.validate() {
        Ok(()) => writeln!(out, "check coordinates ok")?,
        Err(msg) => {
            failed = true;
            writeln!(out, "check coordinates FAIL {msg}")?;
        }
    }
    let fs = &out_pipe.factors;
    if verify_embedding(fs, &fs.h_vertices, &fs.h_edges) {
        writeln!(out, "check embedding ok")?;
    } else {
        failed = true;
        writeln!(out, "check embedding FAIL")?;
    }
    let log = out_pipe.assignment.deletion_log();
    writeln!(
        out,
        "reconstruction {}",
        if log.is_empty() && reconstructs_exactly(fs) {
            "exact"
        } else {
            "partial"
        }
    )?;
    writeln!(out, "classes {}", out_pipe.assignment.class_count())?;
    writeln!(out, "removed_vertices {}", log.vertices.len())?;
    writeln!(out, "removed_edges {}", log.edges.len())?;
    out.flush()?;
    if failed {
        return Err("verification failed".into());
    }
    Ok(())
}
