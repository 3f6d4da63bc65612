//! `ctxlab`: batch JSON interface to the contextuality toolkit.

mod input;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ctxlab::bell::{self, Certification, ConePushforward};
use ctxlab::distribution::{self, EdgeDistribution};
use ctxlab::fm::{self, Extension};
use ctxlab::graph;
use ctxlab::polytope::{self, enumerate_vertices, h_representation};
use ctxlab::rational;
use ctxlab::scenario::{self, Scenario};
use ctxlab::{collapse, limits, LinearInequality, Mode};
use serde_json::{json, Value};

pub const SCHEMA: &str = "ctxlab/1";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Input(String),
    Lib(ctxlab::Error),
}

impl From<ctxlab::Error> for CliError {
    fn from(e: ctxlab::Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Input(_) => "input",
            CliError::Lib(ctxlab::Error::Guardrail(_)) => "guardrail",
            CliError::Lib(_) => "input",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Input(m) => m.clone(),
            CliError::Lib(e) => e.to_string(),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(ctxlab::Error::Guardrail(_)) => 2,
            _ => 1,
        }
    }
}

#[derive(Parser)]
#[command(name = "ctxlab", version, about = "Exact contextuality computations on simplicial scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build scenarios
    #[command(subcommand)]
    Scenario(ScenarioCmd),
    /// Triangle and circle inequalities
    #[command(subcommand)]
    Ineq(IneqCmd),
    /// Fourier-Motzkin elimination
    #[command(subcommand)]
    Fm(FmCmd),
    /// Extend boundary values over a disk or a bouquet of disks
    #[command(subcommand)]
    Extend(ExtendCmd),
    /// Decide properties of a distribution
    #[command(subcommand)]
    Check(CheckCmd),
    /// Vertex enumeration
    #[command(subcommand)]
    Vertices(VerticesCmd),
    /// Collapsing maps and their pushforwards
    #[command(subcommand)]
    Collapse(CollapseCmd),
    /// PR boxes and contextual vertices
    #[command(subcommand)]
    Generate(GenerateCmd),
    /// Orbits under deterministic distributions
    #[command(subcommand)]
    Orbit(OrbitCmd),
    /// Experimental checks
    #[command(subcommand)]
    Probe(ProbeCmd),
}

#[derive(Subcommand)]
enum ScenarioCmd {
    /// Cone over a graph file
    Cone { graph: String },
    /// Cone over the N-circle
    Circle {
        #[arg(long)]
        n: usize,
    },
    /// Classical N-disk with its boundary and elimination order
    Disk {
        #[arg(long)]
        n: usize,
    },
    /// Cone over a flower, petal lengths comma separated
    Flower {
        #[arg(long)]
        sizes: String,
    },
    /// Cone over a wedge of N circles
    Wedge {
        #[arg(long)]
        n: usize,
    },
    /// Cone over the complete bipartite graph
    Bipartite {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Probability,
    Expectation,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Probability => Mode::Probability,
            ModeArg::Expectation => Mode::Expectation,
        }
    }
}

#[derive(Subcommand)]
enum IneqCmd {
    /// Triangle inequalities of a scenario
    Hrep { scenario: String },
    /// The N-circle inequalities
    Circle {
        #[arg(long)]
        n: usize,
        /// Edge ids, comma separated (default t1..tN)
        #[arg(long)]
        edges: Option<String>,
        #[arg(long, value_enum, default_value = "probability")]
        mode: ModeArg,
    },
}

#[derive(Subcommand)]
enum FmCmd {
    /// Eliminate variables in order
    Eliminate {
        system: String,
        /// Variables, comma separated
        #[arg(long)]
        vars: String,
        /// Write the elimination trace here
        #[arg(long)]
        trace: Option<String>,
        /// Also drop rows implied by the others (exact LP)
        #[arg(long)]
        redundant: bool,
    },
}

#[derive(Subcommand)]
enum ExtendCmd {
    /// Boundary values of the classical N-disk
    Disk {
        #[arg(long)]
        n: usize,
        boundary: String,
    },
    /// Boundary values of a bouquet of disks glued along one edge
    Bouquet {
        #[arg(long)]
        sizes: String,
        boundary: String,
    },
}

/// `[SCENARIO] DISTRIBUTION`: the scenario may be omitted when the distribution names it.
#[derive(Args)]
struct DistArgs {
    #[arg(num_args = 1..=2, required = true)]
    files: Vec<String>,
}

impl DistArgs {
    fn load(&self) -> Result<EdgeDistribution, CliError> {
        match self.files.as_slice() {
            [d] => input::distribution(d, None),
            [s, d] => input::distribution(d, Some(input::scenario(s)?)),
            _ => Err(CliError::Usage("expected [SCENARIO] DISTRIBUTION".into())),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Lp,
    Circles,
    Auto,
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Triangle tables and violated triangle inequalities
    Validate(DistArgs),
    /// Contextuality with a certificate
    Contextual {
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long, value_enum, default_value = "auto")]
        method: Method,
    },
    /// Strong contextuality (empty support)
    Strong(DistArgs),
    /// Vertex test by the rank of the tight rows
    Vertex(DistArgs),
}

#[derive(Subcommand)]
enum VerticesCmd {
    /// All vertices of the distribution polytope (at most 12 edges)
    Enumerate {
        scenario: String,
        #[arg(long)]
        adjacency: bool,
    },
}

#[derive(Subcommand)]
enum CollapseCmd {
    /// The quotient graph
    Graph {
        graph: String,
        #[arg(long)]
        edges: String,
    },
    /// Carry a distribution on the cone of the quotient to the cone of the graph
    Distribution {
        graph: String,
        #[arg(long)]
        edges: String,
        distribution: String,
    },
    /// Carry Bell inequalities on the cone of the graph to the cone of the quotient
    Inequality {
        graph: String,
        #[arg(long)]
        edges: String,
        inequality: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CertifyArg {
    Rank,
    Full,
}

#[derive(Subcommand)]
enum GenerateCmd {
    /// All PR boxes of the N-circle scenario
    Pr {
        #[arg(long)]
        n: usize,
    },
    /// Contextual vertices from the wedge of circles
    Vertices {
        graph: String,
        #[arg(long, value_enum, default_value = "rank")]
        certify: CertifyArg,
    },
}

#[derive(Subcommand)]
enum OrbitCmd {
    Distribution(DistArgs),
    Inequality {
        scenario: String,
        inequality: String,
        #[arg(long, value_enum, default_value = "probability")]
        mode: ModeArg,
    },
}

#[derive(Subcommand)]
enum ProbeCmd {
    /// Whether the boundary support of an inequality is a union of closed walks
    LoopSupport { graph: String, inequality: String },
}

struct Output {
    payload: Value,
    diagnostics: Vec<String>,
}

impl Output {
    fn new(payload: Value) -> Self {
        Output {
            payload,
            diagnostics: Vec::new(),
        }
    }

    fn note(mut self, msg: impl Into<String>) -> Self {
        self.diagnostics.push(msg.into());
        self
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize")
}

fn values_json(p: &EdgeDistribution) -> Value {
    let m: BTreeMap<String, String> = p
        .values_map()
        .iter()
        .map(|(k, v)| (k.clone(), rational::format(v)))
        .collect();
    to_value(&m)
}

fn sizes(arg: &str) -> Result<Vec<usize>, CliError> {
    input::list(arg)
        .iter()
        .map(|s| s.parse().map_err(|_| CliError::Usage(format!("not a size: `{s}`"))))
        .collect()
}

fn run(cmd: Command) -> Result<Output, CliError> {
    match cmd {
        Command::Scenario(c) => scenario_cmd(c),
        Command::Ineq(c) => ineq_cmd(c),
        Command::Fm(c) => fm_cmd(c),
        Command::Extend(c) => extend_cmd(c),
        Command::Check(c) => check_cmd(c),
        Command::Vertices(VerticesCmd::Enumerate { scenario, adjacency }) => {
            let s = input::scenario(&scenario)?;
            let e = enumerate_vertices(&s, adjacency)?;
            let vertices: Vec<Value> = e
                .vertices
                .iter()
                .map(|v| json!({"values": values_json(v), "deterministic": v.is_deterministic()}))
                .collect();
            let mut payload = json!({
                "scenario": s.as_ref(),
                "count": vertices.len(),
                "deterministic": e.vertices.iter().filter(|v| v.is_deterministic()).count(),
                "vertices": vertices,
            });
            if let Some(adj) = &e.adjacency {
                payload["adjacency"] = to_value(adj);
            }
            Ok(Output::new(payload))
        }
        Command::Collapse(c) => collapse_cmd(c),
        Command::Generate(c) => generate_cmd(c),
        Command::Orbit(c) => orbit_cmd(c),
        Command::Probe(ProbeCmd::LoopSupport { graph, inequality }) => {
            let g = input::graph(&graph)?;
            let mut rows = Vec::new();
            for ineq in input::inequalities(&inequality)? {
                let support: Vec<&str> = g
                    .edges()
                    .iter()
                    .filter(|e| ineq.coeffs.contains_key(&e.id))
                    .map(|e| e.id.as_str())
                    .collect();
                rows.push(json!({
                    "inequality": ineq,
                    "support": support,
                    "closed_walks": bell::loop_support_check(&ineq, &g),
                }));
            }
            Ok(Output::new(Value::Array(rows)).note("experimental: a heuristic, not a theorem"))
        }
    }
}

fn scenario_cmd(c: ScenarioCmd) -> Result<Output, CliError> {
    let g = match c {
        ScenarioCmd::Disk { n } => return Ok(Output::new(to_value(&scenario::classical_disk(n)?))),
        ScenarioCmd::Cone { graph } => input::graph(&graph)?,
        ScenarioCmd::Circle { n } => graph::circle(n)?,
        ScenarioCmd::Flower { sizes: s } => graph::flower(&sizes(&s)?)?,
        ScenarioCmd::Wedge { n } => graph::wedge_circles(n)?,
        ScenarioCmd::Bipartite { m, n } => graph::complete_bipartite(m, n)?,
    };
    Ok(Output::new(to_value(&scenario::cone(&g))))
}

fn ineq_cmd(c: IneqCmd) -> Result<Output, CliError> {
    match c {
        IneqCmd::Hrep { scenario } => {
            let s = input::scenario(&scenario)?;
            Ok(Output::new(to_value(&h_representation(&s).rows())))
        }
        IneqCmd::Circle { n, edges, mode } => {
            let edges = match edges {
                Some(e) => input::list(&e),
                None => (1..=n).map(|i| format!("t{i}")).collect(),
            };
            if edges.len() != n || n == 0 {
                return Err(CliError::Usage(format!("expected {n} edges, got {}", edges.len())));
            }
            let sys = fm::circle_inequalities(&edges).to_mode(mode.into());
            Ok(Output::new(to_value(&sys.rows)))
        }
    }
}

fn fm_cmd(c: FmCmd) -> Result<Output, CliError> {
    let FmCmd::Eliminate {
        system,
        vars,
        trace,
        redundant,
    } = c;
    let sys = input::system(&system)?;
    let sys = fm::InequalitySystem::new(sys.mode, sys.variables, sys.rows);
    let (mut out, steps) = fm::eliminate_all(&sys, &input::list(&vars))?;
    if redundant {
        out = fm::prune_redundant(&out);
    }
    let mut result = Output::new(to_value(&out));
    if let Some(path) = trace {
        let text = serde_json::to_string_pretty(&steps).expect("trace serializes");
        std::fs::write(&path, text + "\n").map_err(|e| CliError::Io(format!("{path}: {e}")))?;
        result = result.note(format!("trace written to {path}"));
    }
    Ok(result)
}

fn extend_cmd(c: ExtendCmd) -> Result<Output, CliError> {
    match c {
        ExtendCmd::Disk { n, boundary } => {
            let disk = scenario::classical_disk(n)?;
            let bs = Arc::new(Scenario::from_graph(&disk.boundary_graph()));
            let p = boundary_values(&boundary, bs)?;
            let payload = match fm::extend_from_boundary(&disk, &p)? {
                Extension::Extended { distribution } => json!({
                    "status": "extended",
                    "values": values_json(&distribution),
                }),
                v @ Extension::Violated { .. } => to_value(&v),
            };
            Ok(Output::new(payload))
        }
        ExtendCmd::Bouquet { sizes: s, boundary } => {
            let b = scenario::bouquet(&sizes(&s)?)?;
            let bs = Arc::new(Scenario::from_graph(&b.boundary_graph()));
            let p = boundary_values(&boundary, bs)?;
            Ok(Output::new(to_value(&fm::check_extension_bouquet(&b, &p)?)))
        }
    }
}

/// Boundary files need only `values`; any scenario they name is replaced by the boundary circle.
fn boundary_values(arg: &str, bs: Arc<Scenario>) -> Result<EdgeDistribution, CliError> {
    let loaded = input::load(arg)?;
    let raw = loaded.value.get("values").unwrap_or(&loaded.value);
    Ok(EdgeDistribution::from_map(bs, &input::values(raw)?)?)
}

fn check_cmd(c: CheckCmd) -> Result<Output, CliError> {
    match c {
        CheckCmd::Validate(d) => {
            let p = d.load()?;
            let violations = p.validate();
            let mut payload = json!({"valid": violations.is_empty(), "violations": violations});
            if violations.is_empty() {
                payload["tables"] = to_value(&p.triangle_table()?);
            }
            Ok(Output::new(payload))
        }
        CheckCmd::Contextual { dist, method } => {
            let p = dist.load()?;
            let circles_apply = fm::supports_circle_method(p.scenario());
            let use_circles = match method {
                Method::Lp => false,
                Method::Circles => true,
                Method::Auto => circles_apply,
            };
            if use_circles {
                let v = fm::fine_check_flower(&p)?;
                let mut payload = to_value(&v);
                payload["method"] = json!("circles");
                Ok(Output::new(payload))
            } else {
                let cert = polytope::is_noncontextual_lp(&p)?;
                let mut payload = to_value(&cert);
                payload["method"] = json!("lp");
                let mut out = Output::new(payload);
                if method == Method::Auto {
                    out = out.note("circle test does not apply to this scenario; used LP");
                }
                Ok(out)
            }
        }
        CheckCmd::Strong(d) => {
            let p = d.load()?;
            let support: Vec<String> = polytope::support(&p)?.iter().map(|a| a.bit_string()).collect();
            Ok(Output::new(json!({
                "strongly_contextual": support.is_empty(),
                "support": support,
            })))
        }
        CheckCmd::Vertex(d) => {
            let p = d.load()?;
            if !p.is_valid() {
                return Err(CliError::Input("distribution violates a triangle inequality".into()));
            }
            let h = h_representation(p.scenario());
            let tight: Vec<&str> = h.tight_set(&p).into_iter().map(|i| h.rows()[i].label.as_str()).collect();
            Ok(Output::new(json!({
                "vertex": h.is_vertex(&p),
                "rank": h.rank_of(&p),
                "edges": p.scenario().num_edges(),
                "tight": tight,
            })))
        }
    }
}

fn collapse_cmd(c: CollapseCmd) -> Result<Output, CliError> {
    match c {
        CollapseCmd::Graph { graph, edges } => {
            let g = input::graph(&graph)?;
            Ok(Output::new(to_value(&collapse(&g, &input::list(&edges))?)))
        }
        CollapseCmd::Distribution {
            graph,
            edges,
            distribution,
        } => {
            let g = input::graph(&graph)?;
            let pf = ConePushforward::new(collapse(&g, &input::list(&edges))?);
            let p = input::distribution(&distribution, Some(pf.target.clone()))?;
            Ok(Output::new(to_value(&pf.distribution(&p)?)))
        }
        CollapseCmd::Inequality {
            graph,
            edges,
            inequality,
        } => {
            let g = input::graph(&graph)?;
            let cm = collapse(&g, &input::list(&edges))?;
            let rows = input::inequalities(&inequality)?;
            let out = bell::pushforward_system(&cm, &rows)?;
            let mut result = Output::new(to_value(&out));
            if out.len() < rows.len() {
                result = result.note(format!("{} rows became trivial or duplicate", rows.len() - out.len()));
            }
            Ok(result)
        }
    }
}

fn generate_cmd(c: GenerateCmd) -> Result<Output, CliError> {
    match c {
        GenerateCmd::Pr { n } => {
            let boxes = bell::all_pr_boxes(n)?;
            let s = scenario::cone(&graph::circle(n)?);
            Ok(Output::new(json!({
                "scenario": s,
                "count": boxes.len(),
                "vertices": boxes.iter().map(values_json).collect::<Vec<_>>(),
            })))
        }
        GenerateCmd::Vertices { graph, certify } => {
            let g = input::graph(&graph)?;
            let certify = match certify {
                CertifyArg::Rank => Certification::Rank,
                CertifyArg::Full => Certification::Full,
            };
            let vs = bell::generate_contextual_vertices(&g, certify)?;
            let vertices: Vec<Value> = vs
                .iter()
                .map(|v| json!({"values": values_json(&v.distribution), "certificate": v.certificate}))
                .collect();
            Ok(Output::new(json!({
                "scenario": scenario::cone(&g),
                "count": vertices.len(),
                "vertices": vertices,
            })))
        }
    }
}

fn orbit_cmd(c: OrbitCmd) -> Result<Output, CliError> {
    match c {
        OrbitCmd::Distribution(d) => {
            let p = d.load()?;
            let orbit = p.orbit()?;
            Ok(Output::new(json!({
                "size": orbit.len(),
                "orbit": orbit.iter().map(values_json).collect::<Vec<_>>(),
            })))
        }
        OrbitCmd::Inequality {
            scenario,
            inequality,
            mode,
        } => {
            let s = input::scenario(&scenario)?;
            let mode: Mode = mode.into();
            let mut seen = BTreeMap::new();
            for ineq in input::inequalities(&inequality)? {
                for k in ineq.coeffs.keys() {
                    s.edge_position_or_err(k)?;
                }
                for d in distribution::deterministic_enumerate(&s)? {
                    let img: LinearInequality = ineq.flip(|e| d.bit(e).unwrap_or(false), mode).normalized();
                    seen.entry(img.key()).or_insert(img);
                }
            }
            let orbit: Vec<LinearInequality> = seen.into_values().collect();
            Ok(Output::new(json!({"size": orbit.len(), "orbit": orbit})))
        }
    }
}

fn emit(text: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn envelope(status: &str, payload: Value, diagnostics: &[String]) -> String {
    let v = json!({
        "schema": SCHEMA,
        "status": status,
        "payload": payload,
        "diagnostics": diagnostics,
    });
    serde_json::to_string_pretty(&v).expect("JSON values serialize")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            emit(e.to_string().trim_end());
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Usage(e.to_string().trim().to_string());
            eprint!("{e}");
            emit(&envelope("error", json!({"kind": err.kind(), "message": err.message()}), &[]));
            return ExitCode::from(err.exit_code());
        }
    };
    let mut diagnostics = Vec::new();
    if let Ok(v) = std::env::var(limits::ENV_VAR) {
        diagnostics.push(format!("{}={v} overrides the enumeration guardrails", limits::ENV_VAR));
    }
    match run(cli.command) {
        Ok(out) => {
            diagnostics.extend(out.diagnostics);
            emit(&envelope("ok", out.payload, &diagnostics));
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("ctxlab: {}", err.message());
            emit(&envelope("error", json!({"kind": err.kind(), "message": err.message()}), &diagnostics));
            ExitCode::from(err.exit_code())
        }
    }
}
