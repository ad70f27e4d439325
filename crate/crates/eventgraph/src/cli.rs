//! Command-line front end.
//!
//! Every command prints its artifact (JSON or CSV) to stdout, optionally writes it
//! under `--out` (default from `EVENTGRAPH_OUT`), and prints a [`RunManifest`] to stderr.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::graphs::{self, EventGraph};
use crate::invariants::{self, Triplet, VertexAssignment, Word};
use crate::linalg::{c, C64};
use crate::optimize::{self, SeesawConfig};
use crate::polytope::{self, FamilyTag, LinearInequality, VRep};
use crate::witnesses;
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_PARAM: i32 = 2;
pub const EXIT_SIZE: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

/// Facet enumeration is refused above this many edges without `--allow-large`.
pub const FACET_EDGE_CAP: usize = 12;
/// Vertex cap for labeling enumeration with `--allow-large`.
pub const LARGE_VERTEX_CAP: usize = 14;

#[derive(Parser, Debug)]
#[command(name = "eventgraph", version, about = "Event-graph polytopes and quantum realizability")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GlobalOpts {
    /// Output directory for artifacts and manifests.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub restarts: Option<usize>,
    #[arg(long, global = true)]
    pub sweeps: Option<usize>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true)]
    pub allow_large: bool,
    /// Validate inputs and stop.
    #[arg(long, global = true)]
    pub dry_run: bool,
    /// TOML file with defaults for the flags above.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Values accepted in a `--config` file.
#[derive(Deserialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub restarts: Option<usize>,
    pub sweeps: Option<usize>,
    pub tol: Option<f64>,
    pub jobs: Option<usize>,
    pub allow_large: Option<bool>,
}

/// Flags merged over the config file over built-in defaults.
#[derive(Debug, Clone)]
pub struct Settings {
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    pub restarts: usize,
    pub sweeps: usize,
    pub tol: f64,
    pub jobs: Option<usize>,
    pub allow_large: bool,
    pub dry_run: bool,
}

impl Settings {
    pub fn resolve(g: &GlobalOpts, file: &FileConfig, env_out: Option<PathBuf>) -> Self {
        let d = SeesawConfig::default();
        Self {
            out: g.out.clone().or_else(|| file.out.clone()).or(env_out),
            format: g.format.or(file.format).unwrap_or(Format::Json),
            seed: g.seed.or(file.seed).unwrap_or(d.seed),
            restarts: g.restarts.or(file.restarts).unwrap_or(d.restarts),
            sweeps: g.sweeps.or(file.sweeps).unwrap_or(d.sweeps),
            tol: g.tol.or(file.tol).unwrap_or(d.tol),
            jobs: g.jobs.or(file.jobs),
            allow_large: g.allow_large || file.allow_large.unwrap_or(false),
            dry_run: g.dry_run,
        }
    }

    fn seesaw(&self, d: usize) -> SeesawConfig {
        SeesawConfig { d, restarts: self.restarts, sweeps: self.sweeps, tol: self.tol, seed: self.seed, jobs: self.jobs }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Graph construction and vertex enumeration.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Facets, membership, cross-sections.
    #[command(subcommand)]
    Polytope(PolytopeCmd),
    /// Named inequalities.
    #[command(subcommand)]
    Ineq(IneqCmd),
    /// Overlaps, Bargmann invariants and realizability.
    #[command(subcommand)]
    Quantum(QuantumCmd),
    /// Seesaw, Frank-Wolfe and boundary tracing.
    #[command(subcommand)]
    Opt(OptCmd),
    /// Interrogation efficiencies and noise thresholds.
    #[command(subcommand)]
    Interrogation(InterrogationCmd),
    /// Reproduce reference tables.
    #[command(subcommand)]
    Tables(TablesCmd),
}

#[derive(Args, Debug, Clone)]
pub struct GraphArg {
    /// Graph code (`K5`, `C7`, `W6`, `K3,3`, `suspC5`) or a JSON graph file.
    #[arg(long)]
    pub graph: String,
}

#[derive(Subcommand, Debug)]
pub enum GraphCmd {
    Gen(GraphArg),
    Vertices(GraphArg),
    Restricted {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        d: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum PolytopeCmd {
    Facets(GraphArg),
    Classify(GraphArg),
    Membership {
        #[command(flatten)]
        g: GraphArg,
        /// Comma-separated edge weights (`1/2`, `0.25`, `1`).
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    CrossSection {
        #[command(flatten)]
        g: GraphArg,
        /// Edges as `u-v`, comma separated.
        #[arg(long)]
        edges: String,
        #[arg(long)]
        value: u8,
    },
    StabCheck(GraphArg),
}

#[derive(Args, Debug, Clone)]
pub struct IneqArg {
    /// `cn:5`, `hn:4`, `hnm:5,2`, `kcbs_w6`, `kappa_k7`, `k5_class:3`, `k33_class:1`.
    #[arg(long)]
    pub ineq: String,
}

#[derive(Subcommand, Debug)]
pub enum IneqCmd {
    Family(IneqArg),
    Eval {
        #[command(flatten)]
        i: IneqArg,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    ToCorrelator(IneqArg),
}

#[derive(Args, Debug, Clone)]
pub struct StatesArg {
    /// JSON file of density matrices (`[[[re, im], ...], ...]` per vertex).
    #[arg(long, conflicts_with = "random")]
    pub states: Option<PathBuf>,
    /// Draw random pure states of this dimension.
    #[arg(long)]
    pub random: Option<usize>,
    /// Number of random states when no graph is given.
    #[arg(long)]
    pub count: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum QuantumCmd {
    Overlaps {
        #[command(flatten)]
        g: GraphArg,
        #[command(flatten)]
        s: StatesArg,
    },
    Bargmann {
        #[command(flatten)]
        s: StatesArg,
        /// Word of 1-based labels, e.g. `1,2,3`.
        #[arg(long)]
        word: String,
    },
    Realizable {
        /// `r12,r13,r23,re,im`.
        #[arg(long, allow_hyphen_values = true)]
        triplet: String,
    },
    Imaginarity {
        /// Six `K4` overlaps in edge order.
        #[arg(long)]
        overlaps: String,
    },
    BoundOverlap {
        #[arg(long)]
        r12: f64,
        #[arg(long)]
        r13: f64,
    },
    B3Defect {
        #[arg(long, allow_hyphen_values = true)]
        re: f64,
        #[arg(long, allow_hyphen_values = true)]
        im: f64,
    },
}

#[derive(Subcommand, Debug)]
pub enum OptCmd {
    Seesaw {
        /// Defaults to the graph the inequality family lives on.
        #[arg(long)]
        graph: Option<String>,
        #[command(flatten)]
        i: IneqArg,
        #[arg(long, default_value_t = 2)]
        d: usize,
    },
    FwHn {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 20_000)]
        iters: usize,
    },
    CnRef {
        #[arg(long)]
        n: usize,
    },
    BnBoundary {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 64)]
        directions: usize,
    },
    Scan {
        /// `hn`, `cn`, `hnm:M` or any inequality tag.
        #[arg(long, default_value = "hn")]
        family: String,
        #[arg(long, default_value = "4,5,6")]
        ns: String,
        #[arg(long, default_value = "2,3,4,5")]
        ds: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum InterrogationCmd {
    Curve {
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    Gap,
    Noisy {
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        nu: f64,
    },
    Threshold {
        /// Single angle; omitted means the full grid.
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long, default_value_t = witnesses::DEFAULT_THETA_GRID)]
        grid: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum TablesCmd {
    Reproduce {
        #[arg(value_enum)]
        table: Table,
        #[arg(long)]
        max: Option<usize>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Table {
    Seesaw,
    Kn,
    Bell,
}

/// Provenance record printed after every run.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub seed: u64,
    pub version: String,
    pub wall_time_s: f64,
    pub output_digest: String,
}

/// A command's result: JSON always, CSV when the result is tabular.
#[derive(Debug, Clone)]
pub struct Output {
    pub json: Value,
    pub table: Option<(Vec<String>, Vec<Vec<String>>)>,
}

impl Output {
    fn json(json: Value) -> Self {
        Self { json, table: None }
    }

    fn tabular(json: Value, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Self { json, table: Some((header.iter().map(|s| s.to_string()).collect(), rows)) }
    }

    fn dry() -> Self {
        Self::json(json!({ "dry_run": true, "valid": true }))
    }

    pub fn render(&self, format: Format) -> Result<String, Error> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(&self.json)? + "\n"),
            Format::Csv => {
                let (header, rows) =
                    self.table.as_ref().ok_or_else(|| Error::Param("this command has no CSV form".into()))?;
                let mut s = header.join(",") + "\n";
                for r in rows {
                    s.push_str(&r.join(","));
                    s.push('\n');
                }
                Ok(s)
            }
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Size(_) => EXIT_SIZE,
        Error::Numeric(_) => EXIT_NUMERIC,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_PARAM,
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn fmt(x: f64) -> String {
    format!("{x:.10}")
}

fn cpx(z: C64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn load_graph(arg: &str) -> Result<EventGraph, Error> {
    let p = Path::new(arg);
    if arg.ends_with(".json") || p.is_file() {
        let f: graphs::GraphFile = serde_json::from_str(&std::fs::read_to_string(p)?)?;
        EventGraph::from_file(&f)
    } else {
        graphs::parse_graph_code(arg)
    }
}

/// Exact parse of `p/q`, integers and plain decimals; other floats are converted exactly.
pub fn parse_exact(s: &str) -> Result<BigRational, Error> {
    let s = s.trim();
    if s.contains('/') || s.parse::<i64>().is_ok() {
        return polytope::parse_rational(s);
    }
    let bad = || Error::Param(format!("bad number '{s}'"));
    if let Some((ip, fp)) = s.split_once('.') {
        if !fp.is_empty() && fp.chars().all(|ch| ch.is_ascii_digit()) {
            let neg = ip.starts_with('-');
            let ip = ip.trim_start_matches(['-', '+']);
            let ip = if ip.is_empty() { "0" } else { ip };
            let num: BigInt = format!("{ip}{fp}").parse().map_err(|_| bad())?;
            let den = num_traits::pow(BigInt::from(10), fp.len());
            let q = BigRational::new(num, den);
            return Ok(if neg { -q } else { q });
        }
    }
    polytope::rational_from_f64(s.parse().map_err(|_| bad())?)
}

pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, Error> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse().map_err(|_| Error::Param(format!("bad list entry '{x}'"))))
        .collect()
}

fn parse_edges(s: &str) -> Result<Vec<(usize, usize)>, Error> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|e| {
            let (u, v) = e.split_once('-').ok_or_else(|| Error::Param(format!("bad edge '{e}'")))?;
            let u = u.trim().parse().map_err(|_| Error::Param(format!("bad edge '{e}'")))?;
            let v = v.trim().parse().map_err(|_| Error::Param(format!("bad edge '{e}'")))?;
            Ok((u, v))
        })
        .collect()
}

fn load_states(s: &StatesArg, n: Option<usize>, seed: u64) -> Result<VertexAssignment, Error> {
    match (&s.states, s.random) {
        (Some(p), _) => {
            let data: Vec<Vec<Vec<[f64; 2]>>> = serde_json::from_str(&std::fs::read_to_string(p)?)?;
            VertexAssignment::from_json(&data)
        }
        (None, Some(d)) => {
            let n = n.or(s.count).ok_or_else(|| Error::Param("--count required without a graph".into()))?;
            invariants::random_pure_assignment(n, d, seed)
        }
        (None, None) => Err(Error::Param("give --states FILE or --random D".into())),
    }
}

fn vrep_output(v: &VRep) -> Output {
    let rows: Vec<Vec<String>> = v.vertices.iter().map(|x| x.iter().map(|q| q.to_string()).collect()).collect();
    let header: Vec<String> = (1..=v.ambient_dim).map(|k| format!("e{k}")).collect();
    let json = json!({ "count": v.len(), "ambient_dim": v.ambient_dim, "vertices": rows });
    Output { json, table: Some((header, rows)) }
}

fn ineq_rows(g: &EventGraph, ineqs: &[&LinearInequality]) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header: Vec<String> = g.edges().iter().map(|(u, v)| format!("r{u}{v}")).collect();
    header.push("bound".into());
    let rows = ineqs
        .iter()
        .map(|i| {
            let mut r: Vec<String> = i.coeffs.iter().map(|c| c.to_string()).collect();
            r.push(i.bound.to_string());
            r
        })
        .collect();
    (header, rows)
}

fn gate_facets(g: &EventGraph, s: &Settings) -> Result<(), Error> {
    if g.num_edges() > FACET_EDGE_CAP && !s.allow_large {
        return Err(Error::Size(format!(
            "{} edges exceed the facet cap {FACET_EDGE_CAP}; pass --allow-large",
            g.num_edges()
        )));
    }
    Ok(())
}

fn vertex_cap(s: &Settings) -> usize {
    if s.allow_large {
        LARGE_VERTEX_CAP
    } else {
        graphs::DEFAULT_VERTEX_CAP
    }
}

fn run_graph(cmd: &GraphCmd, s: &Settings) -> Result<Output, Error> {
    match cmd {
        GraphCmd::Gen(a) => {
            let g = load_graph(&a.graph)?;
            if s.dry_run {
                return Ok(Output::dry());
            }
            let rows = g.edges().iter().map(|&(u, v)| vec![u.to_string(), v.to_string()]).collect();
            Ok(Output::tabular(serde_json::to_value(g.to_file())?, &["u", "v"], rows))
        }
        GraphCmd::Vertices(a) => {
            let g = load_graph(&a.graph)?;
            if g.n() > vertex_cap(s) {
                return Err(Error::Size(format!("{} vertices; pass --allow-large", g.n())));
            }
            if s.dry_run {
                return Ok(Output::dry());
            }
            let labs = graphs::enumerate_extreme_labelings_capped(&g, vertex_cap(s))?;
            Ok(vrep_output(&VRep::from_labelings(&labs, g.num_edges())))
        }
        GraphCmd::Restricted { g, d } => {
            let g = load_graph(&g.graph)?;
            if *d == 0 {
                return Err(Error::Param("d must be >= 1".into()));
            }
            if s.dry_run {
                return Ok(Output::dry());
            }
            let labs = graphs::d_restricted_extremes(&g, *d)?;
            Ok(vrep_output(&VRep::from_labelings(&labs, g.num_edges())))
        }
    }
}

fn run_polytope(cmd: &PolytopeCmd, s: &Settings) -> Result<Output, Error> {
    match cmd {
        PolytopeCmd::Facets(a) | PolytopeCmd::Classify(a) => {
            let g = load_graph(&a.graph)?;
            gate_facets(&g, s)?;
            if s.dry_run {
                return Ok(Output::dry());
            }
            let h = polytope::facets(&polytope::vrep_event_polytope(&g)?)?;
            if matches!(cmd, PolytopeCmd::Facets(_)) {
                let all: Vec<&LinearInequality> = h.inequalities.iter().collect();
                let (header, rows) = ineq_rows(&g, &all);
                let json = json!({
                    "graph": a.graph,
                    "count": h.len(),
                    "nontrivial": h.nontrivial().count(),
                    "facets": h.inequalities.iter().map(|i| i.to_json(&a.graph)).collect::<Vec<_>>(),
                });
                return Ok(Output { json, table: Some((header, rows)) });
            }
            let classes = polytope::classify_facets(&h, &g)?;
            let reps: Vec<&LinearInequality> = classes.iter().map(|c| &c.representative).collect();
            let (mut header, mut rows) = ineq_rows(&g, &reps);
            header.push("size".into());
            header.push("trivial".into());
            for (r, cl) in rows.iter_mut().zip(&classes) {
                r.push(cl.members.len().to_string());
                r.push(cl.trivial.to_string());
            }
            let json = json!({
                "graph": a.graph,
                "facets": h.len(),
                "classes": classes.iter().map(|cl| json!({
                    "representative": cl.representative.to_json(&a.graph),
                    "display": cl.representative.display(&g),
                    "size": cl.members.len(),
                    "trivial": cl.trivial,
                })).collect::<Vec<_>>(),
            });
            Ok(Output { json, table: Some((header, rows)) })
        }
        PolytopeCmd::Membership { g, point } => {
            let gr = load_graph(&g.graph)?;
            gate_facets(&gr, s)?;
            let r: Vec<BigRational> = point.split(',').map(parse_exact).collect::<Result<_, _>>()?;
            if r.len() != gr.num_edges() {
                return Err(Error::Dimension { expected: gr.num_edges(), got: r.len() });
            }
            if s.dry_run {
                return Ok(Output::dry());
            }
            let h = polytope::facets(&polytope::vrep_event_polytope(&gr)?)?;
            let violated: Vec<String> = h
                .inequalities
                .iter()
                .filter(|i| !i.is_satisfied(&r).unwrap_or(false))
                .map(|i| i.display(&gr))
                .collect();
            Ok(Output::json(json!({ "member": violated.is_empty(), "violated": violated })))
        }
        PolytopeCmd::CrossSection { g, edges, value } => {
            let gr = load_graph(&g.graph)?;
            let fixed = parse_edges(edges)?;
            if *value > 1 {
                return Err(Error::Param("value must be 0 or 1".into()));
            }
            if s.dry_run {
                return Ok(Output::dry());
            }
            let v = polytope::cross_section(&gr, &fixed, *value)?;
            let mut out = vrep_output(&v);
            out.json["affine_dim"] = json!(v.affine_dim());
            Ok(out)
        }
        PolytopeCmd::StabCheck(a) => {
            let g = load_graph(&a.graph)?;
            gate_facets(&g, s)?;
            if s.dry_run {
                return Ok(Output::dry());
            }
            Ok(Output::json(json!({
                "graph": a.graph,
                "isomorphic": polytope::verify_stab_isomorphism(&g)?,
                "stable_sets": polytope::stable_sets(&g).len(),
                "independence_number": polytope::independence_number(&g),
            })))
        }
    }
}

fn family(tag: &str) -> Result<(FamilyTag, EventGraph, LinearInequality), Error> {
    let t = FamilyTag::parse(tag)?;
    let (g, i) = polytope::inequality_family(&t)?;
    Ok((t, g, i))
}

fn run_ineq(cmd: &IneqCmd, s: &Settings) -> Result<Output, Error> {
    match cmd {
        IneqCmd::Family(a) => {
            let (t, g, i) = family(&a.ineq)?;
            if s.dry_run {
                return Ok(Output::dry());
            }
            let (header, rows) = ineq_rows(&g, &[&i]);
            let mut json = serde_json::to_value(i.to_json(&t.graph_code()))?;
            json["display"] = json!(i.display(&g));
            Ok(Output { json, table: Some((header, rows)) })
        }
        IneqCmd::Eval { i, point } => {
            let (_, g, ineq) = family(&i.ineq)?;
            let r: Vec<BigRational> = point.split(',').map(parse_exact).collect::<Result<_, _>>()?;
            if r.len() != g.num_edges() {
                return Err(Error::Dimension { expected: g.num_edges(), got: r.len() });
            }
            if s.dry_run {
                return Ok(Output::dry());
            }
            let v = ineq.evaluate(&r)?;
            Ok(Output::json(json!({
                "value": v.to_string(),
                "bound": ineq.bound.to_string(),
                "satisfied": v <= ineq.bound,
            })))
        }
        IneqCmd::ToCorrelator(a) => {
            let (t, g, i) = family(&a.ineq)?;
            if s.dry_run {
                return Ok(Output::dry());
            }
            let ci = witnesses::to_correlator(&i);
            let mut json = serde_json::to_value(ci.to_json(&t.graph_code(), i.label.as_deref().unwrap_or("")))?;
            json["display"] = json!(ci.display(&g));
            Ok(Output::json(json))
        }
    }
}

fn parse_f64s(s: &str) -> Result<Vec<f64>, Error> {
    parse_list::<f64>(s)
}

fn run_quantum(cmd: &QuantumCmd, s: &Settings) -> Result<Output, Error> {
    match cmd {
        QuantumCmd::Overlaps { g, s: st } => {
            let gr = load_graph(&g.graph)?;
            if s.dry_run {
                return Ok(Output::dry());
            }
            let rho = load_states(st, Some(gr.n()), s.seed)?;
            let r = invariants::overlaps(&gr, &rho)?;
            let rows = gr.edges().iter().zip(&r).map(|(&(u, v), x)| vec![u.to_string(), v.to_string(), fmt(*x)]).collect();
            Ok(Output::tabular(json!({ "edges": gr.edges(), "overlaps": r }), &["u", "v", "overlap"], rows))
        }
        QuantumCmd::Bargmann { s: st, word } => {
            let w: Vec<usize> = parse_list(word)?;
            let word = Word::new(&w)?;
            if s.dry_run {
                return Ok(Output::dry());
            }
            let n = st.count.or_else(|| w.iter().copied().max());
            let rho = load_states(st, n, s.seed)?;
            let v = invariants::bargmann(&rho, &word)?;
            Ok(Output::json(json!({ "word": word.labels(), "value": cpx(v) })))
        }
        QuantumCmd::Realizable { triplet } => {
            let x = parse_f64s(triplet)?;
            if x.len() != 5 {
                return Err(Error::Dimension { expected: 5, got: x.len() });
            }
            if s.dry_run {
                return Ok(Output::dry());
            }
            let t = Triplet { r12: x[0], r13: x[1], r23: x[2], delta: c(x[3], x[4]) };
            let (ok, states) = invariants::pure_realizable_triplet(&t)?;
            let states: Option<Vec<Vec<Value>>> =
                states.map(|v| v.iter().map(|p| p.amps().iter().map(|&z| cpx(z)).collect()).collect());
            Ok(Output::json(json!({ "realizable": ok, "states": states })))
        }
        QuantumCmd::Imaginarity { overlaps } => {
            let x = parse_f64s(overlaps)?;
            let r: [f64; 6] = x.as_slice().try_into().map_err(|_| Error::Dimension { expected: 6, got: x.len() })?;
            if s.dry_run {
                return Ok(Output::dry());
            }
            Ok(Output::json(serde_json::to_value(invariants::imaginarity_from_overlaps(&r)?)?))
        }
        QuantumCmd::BoundOverlap { r12, r13 } => {
            if s.dry_run {
                return Ok(Output::dry());
            }
            let (lo, hi) = invariants::bound_unknown_overlap(*r12, *r13)?;
            Ok(Output::json(json!({ "lower": lo, "upper": hi })))
        }
        QuantumCmd::B3Defect { re, im } => {
            if s.dry_run {
                return Ok(Output::dry());
            }
            let z = c(*re, *im);
            Ok(Output::json(json!({
                "defect": invariants::b3_boundary_defect(z),
                "contained": invariants::b3_contains(z, 1e-12),
                "upper_imag": invariants::b3_upper_imag(*re),
            })))
        }
    }
}

fn run_opt(cmd: &OptCmd, s: &Settings) -> Result<Output, Error> {
    match cmd {
        OptCmd::Seesaw { graph, i, d } => {
            let (t, fg, ineq) = family(&i.ineq)?;
            let (g, ineq) = match graph {
                Some(code) => {
                    let g = load_graph(code)?;
                    let ineq = if g == fg { ineq } else { ineq.embed(&fg, &g)? };
                    (g, ineq)
                }
                None => (fg, ineq),
            };
            let cfg = s.seesaw(*d);
            cfg.validate()?;
            if s.dry_run {
                return Ok(Output::dry());
            }
            let res = optimize::seesaw_linear(&g, &ineq, &cfg)?;
            let rows = res.per_restart.iter().enumerate().map(|(k, v)| vec![k.to_string(), fmt(*v)]).collect();
            let json = json!({
                "inequality": i.ineq,
                "graph": t.graph_code(),
                "d": d,
                "best": res.best,
                "bound": ineq.bound_f64(),
                "violation": res.best > ineq.bound_f64() + 1e-9,
                "best_restart": res.best_restart,
                "per_restart": res.per_restart,
                "converged": res.converged,
                "states": res.assignment.iter().map(|p| p.amps().iter().map(|&z| cpx(z)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            });
            Ok(Output::tabular(json, &["restart", "value"], rows))
        }
        OptCmd::FwHn { n, d, iters } => {
            if *n < 3 || *d < 2 || d >= n {
                return Err(Error::Param(format!("need n >= 3 and 2 <= d < n, got n={n}, d={d}")));
            }
            if s.dry_run {
                return Ok(Output::dry());
            }
            Ok(Output::json(serde_json::to_value(optimize::fw_quadratic_hn(*n, *d, *iters)?)?))
        }
        OptCmd::CnRef { n } => {
            if *n < 3 {
                return Err(Error::Param("n must be >= 3".into()));
            }
            if s.dry_run {
                return Ok(Output::dry());
            }
            let r = optimize::cn_reference(*n)?;
            Ok(Output::json(json!({
                "n": n,
                "value": r.value,
                "closed_form": r.closed_form,
                "bound": r.inequality.bound_f64(),
                "inequality": r.inequality.display(&r.graph),
            })))
        }
        OptCmd::BnBoundary { n, d, directions } => {
            let cfg = s.seesaw(*d);
            cfg.validate()?;
            if *n < 2 || *d < 2 || *directions == 0 {
                return Err(Error::Param("need n >= 2, d >= 2, directions >= 1".into()));
            }
            if s.dry_run {
                return Ok(Output::dry());
            }
            let samples = optimize::bn_boundary(*n, &optimize::uniform_directions(*directions), *d, &cfg)?;
            let rows =
                samples.iter().map(|b| vec![fmt(b.theta), fmt(b.re), fmt(b.im), fmt(b.support)]).collect();
            Ok(Output::tabular(serde_json::to_value(&samples)?, &["theta", "re", "im", "support"], rows))
        }
        OptCmd::Scan { family, ns, ds } => {
            let ns: Vec<usize> = parse_list(ns)?;
            let ds: Vec<usize> = parse_list(ds)?;
            for &n in &ns {
                optimize::family_tag(family, n)?;
            }
            s.seesaw(2).validate()?;
            if s.dry_run {
                return Ok(Output::dry());
            }
            let rows = optimize::dimension_witness_scan(family, &ns, &ds, &s.seesaw(2))?;
            let table = rows
                .iter()
                .map(|r| {
                    vec![
                        r.family.clone(),
                        r.n.to_string(),
                        r.d.to_string(),
                        fmt(r.lower),
                        r.upper.map(fmt).unwrap_or_default(),
                        fmt(r.bound),
                        r.witness.to_string(),
                    ]
                })
                .collect();
            Ok(Output::tabular(
                serde_json::to_value(&rows)?,
                &["family", "n", "d", "lower", "upper", "bound", "witness"],
                table,
            ))
        }
    }
}

fn run_interrogation(cmd: &InterrogationCmd, s: &Settings) -> Result<Output, Error> {
    match cmd {
        InterrogationCmd::Curve { points } => {
            if *points < 2 {
                return Err(Error::Param("need at least 2 points".into()));
            }
            if s.dry_run {
                return Ok(Output::dry());
            }
            let rs: Vec<f64> = (0..*points).map(|k| k as f64 / (*points - 1) as f64).collect();
            let pts = witnesses::interrogation_curve(&rs)?;
            let rows = pts.iter().map(|p| vec![fmt(p.r), fmt(p.eta_q), fmt(p.eta_nc), fmt(p.gap())]).collect();
            Ok(Output::tabular(serde_json::to_value(&pts)?, &["r", "eta_q", "eta_nc", "gap"], rows))
        }
        InterrogationCmd::Gap => {
            if s.dry_run {
                return Ok(Output::dry());
            }
            let (r, g) = witnesses::interrogation_gap_max();
            let (rn, gn) = witnesses::interrogation_gap_max_numeric();
            Ok(Output::json(json!({
                "r_star": format!("{r:.6}"),
                "gap": format!("{g:.6}"),
                "r_star_exact": r,
                "gap_exact": g,
                "r_star_numeric": rn,
                "gap_numeric": gn,
            })))
        }
        InterrogationCmd::Noisy { theta, nu } => {
            if !(0.0..=std::f64::consts::PI).contains(theta) || !(0.0..=1.0).contains(nu) {
                return Err(Error::Param("need theta in [0,pi] and nu in [0,1]".into()));
            }
            if s.dry_run {
                return Ok(Output::dry());
            }
            Ok(Output::json(serde_json::to_value(witnesses::noisy_interrogation(*theta, *nu)?)?))
        }
        InterrogationCmd::Threshold { theta, grid } => {
            if *grid == 0 {
                return Err(Error::Param("grid must be positive".into()));
            }
            if let Some(t) = theta {
                if !(0.0..=std::f64::consts::PI).contains(t) {
                    return Err(Error::Param("theta must lie in [0,pi]".into()));
                }
            }
            if s.dry_run {
                return Ok(Output::dry());
            }
            let tol = witnesses::THRESHOLD_TOL;
            if let Some(t) = theta {
                return Ok(Output::json(json!({ "theta": t, "nu_threshold": witnesses::noise_threshold(*t, tol)? })));
            }
            let thetas = witnesses::theta_grid(*grid);
            let vals: Vec<f64> = thetas.iter().map(|&t| witnesses::noise_threshold(t, tol)).collect::<Result<_, _>>()?;
            let (arg, max) = witnesses::max_noise_threshold(&thetas, tol)?;
            let rows = thetas.iter().zip(&vals).map(|(t, v)| vec![fmt(*t), fmt(*v)]).collect();
            Ok(Output::tabular(
                json!({ "max_threshold": max, "argmax_theta": arg, "theta": thetas, "nu_threshold": vals }),
                &["theta", "nu_threshold"],
                rows,
            ))
        }
    }
}

/// Seesaw table rows: `(tag, d, reference value)`.
pub const SEESAW_TABLE: &[(&str, usize, f64)] = &[
    ("cn:3", 2, 1.25),
    ("hn:4", 2, 1.0),
    ("hn:4", 3, 4.0 / 3.0),
    ("hn:5", 4, 1.375),
    ("k5_class:5", 2, 2.795_084_971_874_737),
    ("kcbs_w6", 2, 3.25),
];

fn run_tables(cmd: &TablesCmd, s: &Settings) -> Result<Output, Error> {
    let TablesCmd::Reproduce { table, max } = cmd;
    match table {
        Table::Bell => {
            let m = max.unwrap_or(8);
            if m < 2 {
                return Err(Error::Param("--max must be >= 2".into()));
            }
            if m > vertex_cap(s) {
                return Err(Error::Size(format!("K{m} exceeds the vertex cap; pass --allow-large")));
            }
            if s.dry_run {
                return Ok(Output::dry());
            }
            let bell = graphs::bell_numbers(m);
            let mut rows = Vec::new();
            for n in 2..=m {
                let count = graphs::enumerate_extreme_labelings_capped(&graphs::complete(n)?, vertex_cap(s))?.len();
                rows.push(vec![n.to_string(), count.to_string(), bell[n].to_string()]);
            }
            let json = json!({
                "rows": rows.iter().map(|r| json!({ "n": r[0], "vertices": r[1], "bell": r[2] })).collect::<Vec<_>>(),
                "match": rows.iter().all(|r| r[1] == r[2]),
            });
            Ok(Output::tabular(json, &["n", "vertices", "bell"], rows))
        }
        Table::Kn => {
            let m = max.unwrap_or(5);
            if m < 2 {
                return Err(Error::Param("--max must be >= 2".into()));
            }
            if m * (m - 1) / 2 > FACET_EDGE_CAP && !s.allow_large {
                return Err(Error::Size(format!("K{m} exceeds the facet cap; pass --allow-large")));
            }
            if s.dry_run {
                return Ok(Output::dry());
            }
            let mut rows = Vec::new();
            for n in 2..=m {
                let g = graphs::complete(n)?;
                let v = polytope::vrep_event_polytope(&g)?;
                let h = polytope::facets(&v)?;
                let cl = polytope::classify_facets(&h, &g)?;
                rows.push(vec![
                    n.to_string(),
                    v.len().to_string(),
                    h.len().to_string(),
                    cl.iter().filter(|c| !c.trivial).count().to_string(),
                ]);
            }
            let json = json!(rows
                .iter()
                .map(|r| json!({ "n": r[0], "vertices": r[1], "facets": r[2], "nontrivial_classes": r[3] }))
                .collect::<Vec<_>>());
            Ok(Output::tabular(json, &["n", "vertices", "facets", "nontrivial_classes"], rows))
        }
        Table::Seesaw => {
            if s.dry_run {
                return Ok(Output::dry());
            }
            let mut rows = Vec::new();
            for &(tag, d, reference) in SEESAW_TABLE {
                let (_, g, ineq) = family(tag)?;
                let res = optimize::seesaw_linear(&g, &ineq, &s.seesaw(d))?;
                rows.push(vec![
                    tag.to_string(),
                    d.to_string(),
                    fmt(res.best),
                    fmt(reference),
                    fmt(ineq.bound_f64()),
                ]);
            }
            let json = json!(rows
                .iter()
                .map(|r| json!({ "inequality": r[0], "d": r[1], "seesaw": r[2], "reference": r[3], "bound": r[4] }))
                .collect::<Vec<_>>());
            Ok(Output::tabular(json, &["inequality", "d", "seesaw", "reference", "bound"], rows))
        }
    }
}

pub fn command_name(c: &Command) -> String {
    match c {
        Command::Graph(x) => format!("graph {x:?}"),
        Command::Polytope(x) => format!("polytope {x:?}"),
        Command::Ineq(x) => format!("ineq {x:?}"),
        Command::Quantum(x) => format!("quantum {x:?}"),
        Command::Opt(x) => format!("opt {x:?}"),
        Command::Interrogation(x) => format!("interrogation {x:?}"),
        Command::Tables(x) => format!("tables {x:?}"),
    }
}

/// Short `group_action` stem used for artifact file names.
pub fn artifact_stem(c: &Command) -> String {
    let full = command_name(c);
    let mut it = full.split(|ch: char| !ch.is_ascii_alphanumeric()).filter(|s| !s.is_empty());
    let group = it.next().unwrap_or("run").to_string();
    let action = it.next().unwrap_or("").to_lowercase();
    if action.is_empty() {
        group
    } else {
        format!("{group}_{action}")
    }
}

pub fn execute(c: &Command, s: &Settings) -> Result<Output, Error> {
    match c {
        Command::Graph(x) => run_graph(x, s),
        Command::Polytope(x) => run_polytope(x, s),
        Command::Ineq(x) => run_ineq(x, s),
        Command::Quantum(x) => run_quantum(x, s),
        Command::Opt(x) => run_opt(x, s),
        Command::Interrogation(x) => run_interrogation(x, s),
        Command::Tables(x) => run_tables(x, s),
    }
}

fn manifest_params(s: &Settings) -> BTreeMap<String, String> {
    let mut p = BTreeMap::new();
    p.insert("format".into(), format!("{:?}", s.format).to_lowercase());
    p.insert("restarts".into(), s.restarts.to_string());
    p.insert("sweeps".into(), s.sweeps.to_string());
    p.insert("tol".into(), s.tol.to_string());
    p.insert("jobs".into(), s.jobs.map(|j| j.to_string()).unwrap_or_else(|| "auto".into()));
    p.insert("allow_large".into(), s.allow_large.to_string());
    p.insert("dry_run".into(), s.dry_run.to_string());
    p
}

/// Runs a parsed command line; returns the rendered artifact and its manifest.
pub fn run(cli: &Cli) -> Result<(String, RunManifest), Error> {
    let file = match &cli.global.config {
        Some(p) => toml::from_str(&std::fs::read_to_string(p)?)
            .map_err(|e| Error::Param(format!("config {}: {e}", p.display())))?,
        None => FileConfig::default(),
    };
    let env_out = std::env::var_os("EVENTGRAPH_OUT").map(PathBuf::from);
    let s = Settings::resolve(&cli.global, &file, env_out);
    let start = Instant::now();
    let out = execute(&cli.command, &s)?;
    let text = out.render(s.format)?;
    let manifest = RunManifest {
        command: command_name(&cli.command),
        parameters: manifest_params(&s),
        seed: s.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time_s: start.elapsed().as_secs_f64(),
        output_digest: sha256_hex(text.as_bytes()),
    };
    if let (Some(dir), false) = (&s.out, s.dry_run) {
        std::fs::create_dir_all(dir)?;
        let stem = artifact_stem(&cli.command);
        let ext = match s.format {
            Format::Json => "json",
            Format::Csv => "csv",
        };
        std::fs::write(dir.join(format!("{stem}.{ext}")), &text)?;
        std::fs::write(dir.join(format!("{stem}.manifest.json")), serde_json::to_string_pretty(&manifest)?)?;
    }
    Ok((text, manifest))
}

/// Parses `argv`, runs, prints, and returns the process exit code.
pub fn cli_dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARAM } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok((text, manifest)) => {
            print!("{text}");
            eprintln!("{}", serde_json::to_string(&manifest).unwrap_or_default());
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Result<(String, RunManifest), Error> {
        let mut v = vec!["eventgraph"];
        v.extend_from_slice(args);
        run(&Cli::try_parse_from(v).map_err(|e| Error::Param(e.to_string()))?)
    }

    #[test]
    fn bell_table() {
        let (text, _) = go(&["tables", "reproduce", "bell", "--max", "8", "--format", "csv"]).unwrap();
        let counts: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
        assert_eq!(counts, ["2", "5", "15", "52", "203", "877", "4140"]);
    }

    #[test]
    fn seesaw_example() {
        let (text, m) = go(&["opt", "seesaw", "--graph", "K4", "--ineq", "hn:4", "--d", "3", "--seed", "7"]).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert!((v["best"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-3);
        assert_eq!(m.seed, 7);
        let (text2, m2) = go(&["opt", "seesaw", "--graph", "K4", "--ineq", "hn:4", "--d", "3", "--seed", "7"]).unwrap();
        assert_eq!(text, text2);
        assert_eq!(m.output_digest, m2.output_digest);
    }

    #[test]
    fn gap_example() {
        let (text, _) = go(&["interrogation", "gap"]).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["r_star"], "0.732051");
        assert_eq!(v["gap"], "0.071797");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(cli_dispatch(["eventgraph", "graph", "gen", "--graph", "Q9"]), EXIT_PARAM);
        assert_eq!(cli_dispatch(["eventgraph", "polytope", "facets", "--graph", "K6", "--dry-run"]), EXIT_SIZE);
        assert_eq!(cli_dispatch(["eventgraph", "bogus"]), EXIT_PARAM);
        assert_eq!(cli_dispatch(["eventgraph", "polytope", "facets", "--graph", "C4", "--dry-run"]), EXIT_OK);
        assert_eq!(exit_code(&Error::Numeric("x".into())), EXIT_NUMERIC);
    }

    #[test]
    fn dry_run_skips_work() {
        let (text, _) = go(&["opt", "scan", "--ns", "4,5,6,7,8", "--ds", "2,3,4,5,6,7", "--dry-run"]).unwrap();
        assert!(text.contains("\"dry_run\": true"));
        assert!(go(&["opt", "scan", "--family", "nope", "--dry-run"]).is_err());
    }

    #[test]
    fn exact_points() {
        assert_eq!(parse_exact("0.25").unwrap(), polytope::ratio(1, 4));
        assert_eq!(parse_exact("-1.5").unwrap(), polytope::ratio(-3, 2));
        assert_eq!(parse_exact("2/6").unwrap(), polytope::ratio(1, 3));
        assert_eq!(parse_exact("1").unwrap(), polytope::rat(1));
        assert!(parse_exact("abc").is_err());
        let (text, _) = go(&["polytope", "membership", "--graph", "C3", "--point", "1,1,0"]).unwrap();
        assert!(text.contains("\"member\": false"));
        let (text, _) = go(&["polytope", "membership", "--graph", "C3", "--point", "0.5,0.5,0.5"]).unwrap();
        assert!(text.contains("\"member\": true"));
    }

    #[test]
    fn config_merging() {
        let file: FileConfig = toml::from_str("seed = 5\nrestarts = 3\nformat = \"csv\"").unwrap();
        let g = GlobalOpts { seed: Some(9), ..GlobalOpts::default() };
        let s = Settings::resolve(&g, &file, Some(PathBuf::from("/tmp/x")));
        assert_eq!((s.seed, s.restarts, s.format), (9, 3, Format::Csv));
        assert_eq!(s.out, Some(PathBuf::from("/tmp/x")));
        assert!(toml::from_str::<FileConfig>("bogus = 1").is_err());
    }

    #[test]
    fn correlator_command() {
        let (text, _) = go(&["ineq", "to-correlator", "--ineq", "cn:4"]).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["bound"], "2");
        assert_eq!(v["correlator"], true);
    }

    #[test]
    fn artifacts_written() {
        let dir = std::env::temp_dir().join(format!("eventgraph-cli-{}", std::process::id()));
        let d = dir.to_str().unwrap();
        go(&["interrogation", "curve", "--points", "5", "--format", "csv", "--out", d]).unwrap();
        let csv = std::fs::read_to_string(dir.join("interrogation_curve.csv")).unwrap();
        assert!(csv.starts_with("r,eta_q,eta_nc,gap"));
        assert!(dir.join("interrogation_curve.manifest.json").exists());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
