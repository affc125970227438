//! Command-line front end.
//!
//! Exit codes: 0 success, 1 file access, 2 parse or validation failure,
//! 3 unknown node reference, 4 no applicable solver, 5 generator failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use crate::amount::parse_rational;
use crate::arborescence::{every_node_fails_when_shocked, is_in_arborescence, stab_exact_in_arborescence};
use crate::cascade::{propagate, CascadeError, Horizon, ShockSet};
use crate::cover::stab_greedy_t2;
use crate::dual::{dual_exact_bruteforce, dual_exact_in_arborescence, dual_greedy};
use crate::generate::{
    gen_from_densest_subhypergraph, gen_from_dominating_set, gen_from_max_coverage, gen_from_node_cover_3regular,
    gen_from_set_cover, gen_random_dag, gen_random_in_arborescence, GenError, GeneratedInstance, Graph, Hypergraph,
    RandomParams, SetCoverOptions, SetSystem,
};
use crate::io::{
    self, balance_csv, read_edges_csv, trace_to_dot, CsvDefaults, DualReport, IoError, NetworkFile, StabilityReport,
    TraceFile,
};
use crate::network::{ModelError, NetworkSpec};
use crate::stability::{stab_exact_bruteforce, BruteForce, StabilityError, DEFAULT_NODE_LIMIT};

#[derive(Debug, Parser)]
#[command(name = "contagion", version, about = "Shock propagation and stability analysis for interbank networks")]
pub struct Cli {
    /// Worker threads for exhaustive search.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Largest network the exhaustive solvers will enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_LIMIT)]
    pub node_limit: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print balance sheets as CSV (node, iota, b, e, a, c).
    Balance(InputArgs),
    /// Run one cascade.
    Simulate {
        #[command(flatten)]
        input: InputArgs,
        /// Shocked node ids, or `all`.
        #[arg(long, num_args = 1.., required = true)]
        shock: Vec<String>,
        #[arg(long, default_value = "inf", value_parser = parse_horizon)]
        horizon: Horizon,
        /// Write the step-by-step trace as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write a Graphviz rendering coloured by failure step.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Stability index: smallest shock set that kills the network.
    Stab {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "inf", value_parser = parse_horizon)]
        horizon: Horizon,
        #[arg(long, value_enum, default_value_t = StabMethodArg::Auto)]
        method: StabMethodArg,
    },
    /// Dual stability index: most failures from exactly kappa shocks.
    Dual {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        kappa: usize,
        #[arg(long, default_value = "inf", value_parser = parse_horizon)]
        horizon: Horizon,
        #[arg(long, value_enum, default_value_t = DualMethodArg::Auto)]
        method: DualMethodArg,
    },
    /// Generate a network from a combinatorial object or at random.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Network JSON file.
    #[arg(required_unless_present = "edges", conflicts_with = "edges")]
    pub file: Option<PathBuf>,
    /// Edge list CSV with header src,dst,weight instead of a network file.
    #[arg(long)]
    pub edges: Option<PathBuf>,
    /// γ for CSV input.
    #[arg(long, default_value = "0.1", value_parser = parse_rational_arg, requires = "edges")]
    pub gamma: BigRational,
    /// Φ for CSV input.
    #[arg(long, default_value = "0.4", value_parser = parse_rational_arg, requires = "edges")]
    pub phi: BigRational,
    /// E for CSV input.
    #[arg(long, value_parser = parse_rational_arg, requires = "edges")]
    pub external: Option<BigRational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StabMethodArg {
    Auto,
    Brute,
    GreedyT2,
    Dp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DualMethodArg {
    Auto,
    Brute,
    Greedy,
    Dp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    DominatingSet,
    #[value(name = "node-cover-3reg")]
    NodeCover3reg,
    SetCover,
    MaxCoverage,
    DensestHypergraph,
    RandomArborescence,
    RandomDag,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: GenKind,
    /// Undirected graph as `a-b,b-c,...`.
    #[arg(long)]
    pub graph: Option<String>,
    /// Set family as `S1=u1,u2;S2=u2,u3`.
    #[arg(long)]
    pub sets: Option<String>,
    /// Hyperedges as `a,b;b,c`.
    #[arg(long)]
    pub hyperedges: Option<String>,
    #[arg(long)]
    pub kappa: Option<usize>,
    /// Accept set systems with elements in a single set.
    #[arg(long)]
    pub allow_single_cover: bool,
    /// Margin of Φ above 0.4 for set-cover networks.
    #[arg(long, value_parser = parse_rational_arg)]
    pub epsilon: Option<BigRational>,
    /// Node count for random kinds.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub max_in_degree: usize,
    #[arg(long, default_value_t = 0.3)]
    pub edge_prob: f64,
    #[arg(long, default_value = "0.1", value_parser = parse_rational_arg)]
    pub gamma: BigRational,
    #[arg(long, default_value = "0.4", value_parser = parse_rational_arg)]
    pub phi: BigRational,
    /// E for random kinds; defaults to n.
    #[arg(long, value_parser = parse_rational_arg)]
    pub external: Option<BigRational>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write `<prefix>.json` and, for reductions, `<prefix>.cert.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_horizon(s: &str) -> Result<Horizon, String> {
    s.parse()
}

fn parse_rational_arg(s: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// A failure with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        let code = match &e {
            IoError::File { .. } => 1,
            _ => 2,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<CascadeError> for CliError {
    fn from(e: CascadeError) -> Self {
        let code = match e {
            CascadeError::UnknownNode(_) | CascadeError::IndexOutOfRange(_) => 3,
            _ => 2,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<StabilityError> for CliError {
    fn from(e: StabilityError) -> Self {
        match e {
            StabilityError::Cascade(c) => c.into(),
            StabilityError::Kappa { .. } => CliError::new(2, e.to_string()),
            StabilityError::Threads(_) => CliError::new(1, e.to_string()),
            StabilityError::TooLarge { .. } | StabilityError::Precondition(_) => CliError::new(4, e.to_string()),
        }
    }
}

impl From<GenError> for CliError {
    fn from(e: GenError) -> Self {
        CliError::new(5, e.to_string())
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::new(2, e.to_string())
    }
}

fn load(input: &InputArgs) -> Result<NetworkSpec, CliError> {
    if let Some(path) = &input.edges {
        let file = File::open(path).map_err(|source| IoError::File {
            path: path.clone(),
            source,
        })?;
        let defaults = CsvDefaults {
            gamma: input.gamma.clone(),
            phi: input.phi.clone(),
            external_total: input
                .external
                .clone()
                .ok_or_else(|| CliError::new(2, "--external is required with --edges"))?,
        };
        return Ok(read_edges_csv(file, &defaults)?.to_spec()?);
    }
    let path = input.file.as_ref().expect("clap enforces an input");
    Ok(io::read_network(path)?)
}

fn brute(cli: &Cli) -> BruteForce {
    BruteForce {
        node_limit: cli.node_limit,
        threads: cli.threads.max(1),
    }
}

fn tree_solvable(spec: &NetworkSpec) -> bool {
    is_in_arborescence(spec) && every_node_fails_when_shocked(spec)
}

/// Parse arguments and run, writing results to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            write!(out, "{e}").map_err(write_err)?;
            return Ok(());
        }
        Err(e) => return Err(CliError::new(2, e.to_string())),
    };
    execute(&cli, out)
}

fn write_err(e: std::io::Error) -> CliError {
    CliError::new(1, e.to_string())
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(write_err)
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Balance(input) => {
            let spec = load(input)?;
            emit(out, &balance_csv(&spec)?)
        }
        Command::Simulate {
            input,
            shock,
            horizon,
            trace,
            dot,
        } => {
            let spec = load(input)?;
            let set = if shock.len() == 1 && shock[0] == "all" {
                ShockSet::all(&spec)
            } else {
                ShockSet::from_ids(&spec, shock)?
            };
            let result = propagate(&spec, &set, *horizon)?;
            let file = TraceFile::new(&spec, &result);
            if let Some(path) = trace {
                io::write_json(path, &file)?;
            }
            if let Some(path) = dot {
                io::write_string(path, &trace_to_dot(&spec, &result))?;
            }
            emit(out, &io::to_json(&file)?)
        }
        Command::Stab { input, horizon, method } => {
            let spec = load(input)?;
            let result = match method {
                StabMethodArg::Brute => stab_exact_bruteforce(&spec, *horizon, brute(cli))?,
                StabMethodArg::GreedyT2 => {
                    require_two_steps(*horizon)?;
                    stab_greedy_t2(&spec)?
                }
                StabMethodArg::Dp => stab_exact_in_arborescence(&spec, *horizon)?,
                StabMethodArg::Auto => {
                    if tree_solvable(&spec) {
                        stab_exact_in_arborescence(&spec, *horizon)?
                    } else if spec.n() <= cli.node_limit {
                        stab_exact_bruteforce(&spec, *horizon, brute(cli))?
                    } else if *horizon == Horizon::Steps(2) {
                        stab_greedy_t2(&spec)?
                    } else {
                        return Err(CliError::new(
                            4,
                            format!(
                                "no applicable method: {} nodes exceeds the enumeration limit, \
                                 the network is not a solvable arborescence, and T is not 2",
                                spec.n()
                            ),
                        ));
                    }
                }
            };
            emit(out, &io::to_json(&StabilityReport::new(&spec, &result))?)
        }
        Command::Dual {
            input,
            kappa,
            horizon,
            method,
        } => {
            let spec = load(input)?;
            let result = match method {
                DualMethodArg::Brute => dual_exact_bruteforce(&spec, *horizon, *kappa, brute(cli))?,
                DualMethodArg::Greedy => dual_greedy(&spec, *horizon, *kappa)?,
                DualMethodArg::Dp => dual_exact_in_arborescence(&spec, *horizon, *kappa)?,
                DualMethodArg::Auto => {
                    if tree_solvable(&spec) {
                        dual_exact_in_arborescence(&spec, *horizon, *kappa)?
                    } else if spec.n() <= cli.node_limit {
                        dual_exact_bruteforce(&spec, *horizon, *kappa, brute(cli))?
                    } else {
                        dual_greedy(&spec, *horizon, *kappa)?
                    }
                }
            };
            emit(out, &io::to_json(&DualReport::new(&spec, &result))?)
        }
        Command::Gen(args) => generate(args, out),
    }
}

fn require_two_steps(h: Horizon) -> Result<(), CliError> {
    if h == Horizon::Steps(2) {
        Ok(())
    } else {
        Err(CliError::new(4, "greedy-t2 needs --horizon 2"))
    }
}

fn missing(flag: &str, kind: GenKind) -> CliError {
    CliError::new(5, format!("--{flag} is required for {kind:?}"))
}

fn parse_graph(s: &str) -> Result<Graph, GenError> {
    let mut vertices: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (a, b) = item
            .split_once('-')
            .ok_or_else(|| GenError::Precondition(format!("edge {item:?} is not of the form a-b")))?;
        let (a, b) = (a.trim().to_string(), b.trim().to_string());
        for v in [&a, &b] {
            if !vertices.contains(v) {
                vertices.push(v.clone());
            }
        }
        edges.push((a, b));
    }
    Graph::new(vertices, edges)
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect()
}

fn parse_sets(s: &str) -> Result<SetSystem, GenError> {
    let mut universe: Vec<String> = Vec::new();
    let mut sets = Vec::new();
    for item in s.split(';').map(str::trim).filter(|x| !x.is_empty()) {
        let (name, members) = item
            .split_once('=')
            .ok_or_else(|| GenError::Precondition(format!("set {item:?} is not of the form S=a,b")))?;
        let members = split_list(members);
        for x in &members {
            if !universe.contains(x) {
                universe.push(x.clone());
            }
        }
        sets.push((name.trim().to_string(), members));
    }
    SetSystem::new(universe, sets)
}

fn parse_hyperedges(s: &str) -> Result<Hypergraph, GenError> {
    let mut vertices: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    for item in s.split(';').map(str::trim).filter(|x| !x.is_empty()) {
        let e = split_list(item);
        for x in &e {
            if !vertices.contains(x) {
                vertices.push(x.clone());
            }
        }
        edges.push(e);
    }
    Hypergraph::new(vertices, edges)
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

fn generate(args: &GenArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let kind = args.kind;
    let instance: Result<GeneratedInstance, CliError> = match kind {
        GenKind::DominatingSet | GenKind::NodeCover3reg => {
            let graph = parse_graph(args.graph.as_deref().ok_or_else(|| missing("graph", kind))?)?;
            Ok(if kind == GenKind::DominatingSet {
                gen_from_dominating_set(&graph)?
            } else {
                gen_from_node_cover_3regular(&graph)?
            })
        }
        GenKind::SetCover | GenKind::MaxCoverage => {
            let system = parse_sets(args.sets.as_deref().ok_or_else(|| missing("sets", kind))?)?;
            if kind == GenKind::SetCover {
                let mut opts = SetCoverOptions {
                    require_double_cover: !args.allow_single_cover,
                    ..Default::default()
                };
                if let Some(e) = &args.epsilon {
                    opts.epsilon = e.clone();
                }
                Ok(gen_from_set_cover(&system, &opts)?)
            } else {
                let kappa = args.kappa.ok_or_else(|| missing("kappa", kind))?;
                Ok(gen_from_max_coverage(&system, kappa)?)
            }
        }
        GenKind::DensestHypergraph => {
            let h = parse_hyperedges(args.hyperedges.as_deref().ok_or_else(|| missing("hyperedges", kind))?)?;
            let kappa = args.kappa.ok_or_else(|| missing("kappa", kind))?;
            Ok(gen_from_densest_subhypergraph(&h, kappa)?)
        }
        GenKind::RandomArborescence | GenKind::RandomDag => {
            let n = args.n.ok_or_else(|| missing("n", kind))?;
            let external = args
                .external
                .clone()
                .unwrap_or_else(|| BigRational::from_integer(n.into()));
            let params = RandomParams::new(args.gamma.clone(), args.phi.clone(), external);
            let spec = if kind == GenKind::RandomArborescence {
                gen_random_in_arborescence(n, args.max_in_degree, &params, args.seed)?
            } else {
                gen_random_dag(n, args.edge_prob, &params, args.seed)?
            };
            return write_generated(args, &spec, None, out);
        }
    };
    let instance = instance?;
    write_generated(args, &instance.spec, Some(&instance), out)
}

fn write_generated(
    args: &GenArgs,
    spec: &NetworkSpec,
    instance: Option<&GeneratedInstance>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let network = io::to_json(&NetworkFile::from_spec(spec))?;
    let sidecar = instance
        .map(|i| {
            io::to_json(&serde_json::json!({
                "source": i.source,
                "certificate": i.certificate,
            }))
        })
        .transpose()?;
    match &args.out {
        Some(prefix) => {
            io::write_string(&with_suffix(prefix, ".json"), &network)?;
            if let Some(cert) = sidecar {
                io::write_string(&with_suffix(prefix, ".cert.json"), &cert)?;
            }
            Ok(())
        }
        None => emit(out, &network),
    }
}
