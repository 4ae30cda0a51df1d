//! Batch experiments: one pipeline per mode, independent seeded trials run on
//! a thread pool, and CSV or JSON tables with summary statistics.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::coloring::EdgeColoring;
use crate::discrepancy::{boost_forest, high_disc_spanning_tree, BoostParams};
use crate::error::{Error, Result};
use crate::generators::{dense_base, gen_gnp, DenseFamily, GnpParams};
use crate::graph::{connected_components, union_graphs, Graph};
use crate::io::load_edge_list;
use crate::leaf::{leaf_increase, spanning_tree_arbitrary, two_phase_leafy_tree, write_trace_csv, LeafRunParams};
use crate::oracles::{
    make_coloring, max_discrepancy_forest_bruteforce, max_leaf_tree_bruteforce, random_connected_graph,
    uniform_coloring, AdversaryKind, AdversarySpec,
};
use crate::perturb::{
    certify_separation_bound, is_three_connected, perturbed_discrepancy_tree, sharpness_instance, PerturbParams,
    DEFAULT_C1,
};
use crate::rng::derive_seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Leaves,
    TwoPhase,
    Boost,
    Main1,
    Perturb,
    Sharpness,
    OracleCheck,
}

impl Mode {
    pub const ALL: [Mode; 7] = [
        Mode::Leaves,
        Mode::TwoPhase,
        Mode::Boost,
        Mode::Main1,
        Mode::Perturb,
        Mode::Sharpness,
        Mode::OracleCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Leaves => "leaves",
            Mode::TwoPhase => "two-phase",
            Mode::Boost => "boost",
            Mode::Main1 => "main1",
            Mode::Perturb => "perturb",
            Mode::Sharpness => "sharpness",
            Mode::OracleCheck => "oracle-check",
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown mode {s:?}")))
    }
}

/// Edge probability as a constant, `c / n`, or `f / n^2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum PSpec {
    P(f64),
    COverN(f64),
    FOverN2(f64),
}

impl PSpec {
    pub fn resolve(self, n: usize) -> f64 {
        let n = n as f64;
        match self {
            PSpec::P(p) => p,
            PSpec::COverN(c) => c / n,
            PSpec::FOverN2(f) => f / (n * n),
        }
    }
}

impl fmt::Display for PSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PSpec::P(p) => write!(f, "{p}"),
            PSpec::COverN(c) => write!(f, "{c}/n"),
            PSpec::FOverN2(x) => write!(f, "{x}/n^2"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidParameter(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub n: usize,
    pub p: PSpec,
    pub alpha: f64,
    pub delta: f64,
    pub adversary: AdversaryKind,
    pub rounds: usize,
    pub trials: usize,
    pub base_seed: u64,
    /// Not serialized: results do not depend on it.
    #[serde(skip)]
    pub threads: usize,
    /// Leaf fraction the leaf-increasing runs aim for.
    pub target: f64,
    /// Record wall-clock time per trial; off by default so that outputs are
    /// byte-identical across runs.
    pub timing: bool,
    pub format: Format,
    #[serde(skip)]
    pub graph_in: Option<PathBuf>,
    #[serde(skip)]
    pub coloring_in: Option<PathBuf>,
    #[serde(skip)]
    pub trace_out: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Defaults matching the desk-scale regime of each mode.
    pub fn new(mode: Mode) -> Self {
        let (n, p, adversary) = match mode {
            Mode::Leaves => (10_000, PSpec::COverN(60.0), AdversaryKind::UniformRandom),
            Mode::TwoPhase => (10_000, PSpec::COverN(120.0), AdversaryKind::UniformRandom),
            Mode::Boost | Mode::Main1 => (5_000, PSpec::COverN(60.0), AdversaryKind::UniformRandom),
            Mode::Perturb => (1_000, PSpec::FOverN2(100.0), AdversaryKind::CutColoring),
            Mode::Sharpness => (2_000, PSpec::P(50.0 / 2000f64.powf(1.5)), AdversaryKind::CutColoring),
            Mode::OracleCheck => (7, PSpec::P(0.5), AdversaryKind::UniformRandom),
        };
        let alpha = match mode {
            Mode::Perturb | Mode::Sharpness => 0.3,
            _ => 0.15,
        };
        ExperimentConfig {
            mode,
            n,
            p,
            alpha,
            delta: 0.02,
            adversary,
            rounds: 5,
            trials: 20,
            base_seed: 0,
            threads: 1,
            target: 0.30,
            timing: false,
            format: Format::Csv,
            graph_in: None,
            coloring_in: None,
            trace_out: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.threads == 0 {
            return bad("threads must be at least 1".into());
        }
        if self.n == 0 && self.graph_in.is_none() {
            return bad("n must be at least 1".into());
        }
        let p = self.p.resolve(self.n.max(1));
        if !(0.0..=1.0).contains(&p) {
            return bad(format!("edge probability {p} outside [0, 1]"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha {} outside (0, 1)", self.alpha));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return bad(format!("delta {} outside (0, 1)", self.delta));
        }
        if !(self.target > 0.0 && self.target < 1.0) {
            return bad(format!("target {} outside (0, 1)", self.target));
        }
        if self.rounds == 0 {
            return bad("rounds must be at least 1".into());
        }
        if self.mode == Mode::OracleCheck && !(5..=8).contains(&self.n) {
            return bad(format!("oracle-check needs 5 <= n <= 8, got {}", self.n));
        }
        if self.mode == Mode::Sharpness && self.alpha >= 0.5 {
            return bad("sharpness needs alpha < 1/2".into());
        }
        let takes_graph = matches!(self.mode, Mode::Leaves | Mode::Boost | Mode::Perturb);
        if self.graph_in.is_some() && !takes_graph {
            return bad(format!("--graph-in is not used by mode {}", self.mode.name()));
        }
        if self.coloring_in.is_some() && !matches!(self.mode, Mode::Boost | Mode::Perturb) {
            return bad(format!("--coloring-in is not used by mode {}", self.mode.name()));
        }
        Ok(())
    }

    pub fn trial_seed(&self, trial: usize) -> u64 {
        self.base_seed.wrapping_add(trial as u64)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn numeric(&self) -> Option<f64> {
        match *self {
            Cell::Int(i) => Some(i as f64),
            Cell::Float(x) => Some(x),
            Cell::Bool(b) => Some(if b { 1.0 } else { 0.0 }),
            Cell::Text(_) => None,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(i) => write!(f, "{i}"),
            Cell::Float(x) => write!(f, "{x}"),
            Cell::Bool(b) => write!(f, "{b}"),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u8> for Cell {
    fn from(v: u8) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// One trial's output, columns in schema order. The last column of every
/// mode is `success`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Row(pub Vec<(&'static str, Cell)>);

impl Row {
    fn push(&mut self, name: &'static str, value: impl Into<Cell>) -> &mut Self {
        self.0.push((name, value.into()));
        self
    }

    pub fn get(&self, name: &str) -> Option<&Cell> {
        self.0.iter().find(|(k, _)| *k == name).map(|(_, v)| v)
    }

    pub fn float(&self, name: &str) -> Option<f64> {
        self.get(name).and_then(Cell::numeric)
    }

    pub fn success(&self) -> bool {
        matches!(self.get("success"), Some(Cell::Bool(true)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ColumnStats {
    pub name: &'static str,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// Population standard deviation.
    pub stddev: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Summary {
    pub rows: usize,
    pub columns: Vec<ColumnStats>,
    pub success_fraction: f64,
}

/// Mean, min, max and standard deviation of every numeric column (booleans
/// count as 0/1), plus the fraction of rows marked successful.
pub fn summarize(rows: &[Row]) -> Result<Summary> {
    let Some(first) = rows.first() else {
        return Err(Error::InvalidParameter("cannot summarize zero rows".into()));
    };
    let mut columns = Vec::new();
    for (name, _) in &first.0 {
        let values: Vec<f64> = rows.iter().filter_map(|r| r.float(name)).collect();
        if values.len() != rows.len() {
            continue;
        }
        let k = values.len() as f64;
        let mean = values.iter().sum::<f64>() / k;
        let var = values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / k;
        columns.push(ColumnStats {
            name,
            mean,
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            stddev: var.sqrt(),
        });
    }
    let successes = rows.iter().filter(|r| r.success()).count();
    Ok(Summary {
        rows: rows.len(),
        columns,
        success_fraction: successes as f64 / rows.len() as f64,
    })
}

#[derive(Clone, Debug)]
pub struct ResultTable {
    pub config: ExperimentConfig,
    pub rows: Vec<Row>,
    pub summary: Summary,
}

impl ResultTable {
    /// Trial rows, then one row each for mean, min, max and stddev with the
    /// `trial` column naming the statistic.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header: Vec<&str> = self.rows[0].0.iter().map(|(k, _)| *k).collect();
        w.write_record(&header).map_err(crate::leaf::csv_err)?;
        for row in &self.rows {
            w.write_record(row.0.iter().map(|(_, v)| v.to_string()))
                .map_err(crate::leaf::csv_err)?;
        }
        type Pick = fn(&ColumnStats) -> f64;
        let stats: [(&str, Pick); 4] = [
            ("mean", |c| c.mean),
            ("min", |c| c.min),
            ("max", |c| c.max),
            ("stddev", |c| c.stddev),
        ];
        for (label, pick) in stats {
            let record: Vec<String> = header
                .iter()
                .map(|&name| {
                    if name == "trial" {
                        label.to_string()
                    } else {
                        self.summary
                            .columns
                            .iter()
                            .find(|c| c.name == name)
                            .map(|c| pick(c).to_string())
                            .unwrap_or_default()
                    }
                })
                .collect();
            w.write_record(&record).map_err(crate::leaf::csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                for (k, v) in &r.0 {
                    m.insert((*k).to_string(), serde_json::to_value(v).expect("cell serializes"));
                }
                Value::Object(m)
            })
            .collect();
        let out = json!({
            "config": self.config,
            "rows": rows,
            "summary": self.summary,
        });
        let mut s = serde_json::to_string_pretty(&out).expect("table serializes");
        s.push('\n');
        s
    }

    pub fn render(&self) -> Result<String> {
        match self.config.format {
            Format::Csv => self.to_csv(),
            Format::Json => Ok(self.to_json()),
        }
    }
}

/// Inputs loaded once and shared by every trial.
struct Inputs {
    graph: Option<Graph>,
    coloring: Option<EdgeColoring>,
}

fn load_inputs(cfg: &ExperimentConfig) -> Result<Inputs> {
    let mut graph = None;
    let mut coloring = None;
    if let Some(path) = &cfg.graph_in {
        let (g, chi) = load_edge_list(path)?;
        graph = Some(g);
        coloring = chi;
    }
    if let Some(path) = &cfg.coloring_in {
        let (g, chi) = load_edge_list(path)?;
        let chi = chi.ok_or_else(|| Error::Parse {
            line: 0,
            msg: format!("{} carries no colours", path.display()),
        })?;
        if let Some(base) = &graph {
            if &g != base {
                return Err(Error::InvalidParameter(
                    "coloring file edges differ from the input graph".into(),
                ));
            }
        } else {
            graph = Some(g);
        }
        coloring = Some(chi);
    }
    Ok(Inputs { graph, coloring })
}

/// Run every trial of `cfg` and summarize.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultTable> {
    cfg.validate()?;
    let inputs = load_inputs(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let rows: Vec<Row> = pool.install(|| {
        (0..cfg.trials)
            .into_par_iter()
            .map(|trial| run_trial(cfg, &inputs, trial))
            .collect::<Result<Vec<Row>>>()
    })?;
    let summary = summarize(&rows)?;
    Ok(ResultTable {
        config: cfg.clone(),
        rows,
        summary,
    })
}

fn run_trial(cfg: &ExperimentConfig, inputs: &Inputs, trial: usize) -> Result<Row> {
    let seed = cfg.trial_seed(trial);
    let clock = Instant::now();
    let mut row = Row::default();
    row.push("trial", trial).push("seed", seed);
    match cfg.mode {
        Mode::Leaves => leaves_trial(cfg, inputs, trial, seed, &mut row)?,
        Mode::TwoPhase => two_phase_trial(cfg, seed, &mut row)?,
        Mode::Boost => boost_trial(cfg, inputs, seed, &mut row)?,
        Mode::Main1 => main1_trial(cfg, seed, &mut row)?,
        Mode::Perturb => perturb_trial(cfg, inputs, seed, &mut row)?,
        Mode::Sharpness => sharpness_trial(cfg, seed, &mut row)?,
        Mode::OracleCheck => oracle_trial(cfg, trial, seed, &mut row)?,
    }
    let ms = if cfg.timing {
        clock.elapsed().as_millis() as u64
    } else {
        0
    };
    // Keep `success` last.
    let success = row.0.pop().expect("mode pushed a success column");
    row.push("runtimeMs", ms);
    row.0.push(success);
    Ok(row)
}

fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    gen_gnp(&GnpParams::new(n, p, seed)?)
}

fn leaves_trial(cfg: &ExperimentConfig, inputs: &Inputs, trial: usize, seed: u64, row: &mut Row) -> Result<()> {
    let g = match &inputs.graph {
        Some(g) => g.clone(),
        None => gnp(cfg.n, cfg.p.resolve(cfg.n), derive_seed(seed, 10))?,
    };
    let giant = connected_components(&g).swap_remove(0);
    let start = spanning_tree_arbitrary(&g, &giant, derive_seed(seed, 30))?;
    let mut params = LeafRunParams::new(cfg.target, derive_seed(seed, 31))?;
    params.trace = cfg.trace_out.is_some() && trial == 0;
    let run = leaf_increase(&g, &start, &params)?;
    if params.trace {
        let path = cfg.trace_out.as_ref().expect("trace path");
        write_trace_csv(std::fs::File::create(path)?, &run.trace)?;
    }
    let fraction = run.final_leaves as f64 / giant.len() as f64;
    row.push("n", g.n())
        .push("p", cfg.p.resolve(g.n()))
        .push("giantSize", giant.len())
        .push("initialLeaves", run.initial_leaves)
        .push("leafCount", run.final_leaves)
        .push("leafFraction", fraction)
        .push("steps", run.steps)
        .push("producersApplied", run.producers_applied)
        .push("success", run.reached_target);
    Ok(())
}

/// Threshold on `|L(T) ∪ L(I(T))| / n_giant` for the two-phase mode.
pub const TWO_PHASE_TARGET: f64 = 0.50;

fn two_phase_trial(cfg: &ExperimentConfig, seed: u64, row: &mut Row) -> Result<()> {
    let p = cfg.p.resolve(cfg.n);
    let g1 = gnp(cfg.n, p, derive_seed(seed, 10))?;
    let g2 = gnp(cfg.n, p, derive_seed(seed, 11))?;
    let params = LeafRunParams::new(cfg.target, derive_seed(seed, 30))?;
    let two = two_phase_leafy_tree(&g1, &g2, &params)?;
    let fraction = two.union_leaves as f64 / two.giant_size as f64;
    row.push("n", cfg.n)
        .push("p", p)
        .push("giantSize", two.giant_size)
        .push("t1Leaves", two.t1_leaves)
        .push("t2Leaves", two.t2_leaves)
        .push("leafCount", two.tree.leaf_count())
        .push("unionLeaves", two.union_leaves)
        .push("unionFraction", fraction)
        .push("collisions", two.collisions)
        .push("success", fraction >= TWO_PHASE_TARGET);
    Ok(())
}

fn boost_params(cfg: &ExperimentConfig, seed: u64) -> Result<BoostParams> {
    let mut params = BoostParams::new(cfg.delta, cfg.alpha, derive_seed(seed, 30))?;
    params.leaf = LeafRunParams::new(cfg.target, derive_seed(seed, 30))?;
    Ok(params)
}

fn adversary(cfg: &ExperimentConfig, seed: u64) -> AdversarySpec {
    AdversarySpec {
        kind: cfg.adversary,
        seed: derive_seed(seed, 20),
        rounds: cfg.rounds,
    }
}

fn adversary_label(cfg: &ExperimentConfig, has_file: bool) -> String {
    if has_file {
        "file".into()
    } else if cfg.adversary == AdversaryKind::AdaptiveRecolor {
        format!("{}({})", cfg.adversary.name(), cfg.rounds)
    } else {
        cfg.adversary.name().into()
    }
}

/// Discrepancy threshold `epsilon n` used for boost success.
pub const BOOST_EPSILON: f64 = 0.01;

fn boost_trial(cfg: &ExperimentConfig, inputs: &Inputs, seed: u64, row: &mut Row) -> Result<()> {
    let g = match &inputs.graph {
        Some(g) => g.clone(),
        None => gnp(cfg.n, cfg.p.resolve(cfg.n), derive_seed(seed, 10))?,
    };
    let params = boost_params(cfg, seed)?;
    let chi = match &inputs.coloring {
        Some(chi) => chi.clone(),
        None => make_coloring(&g, &adversary(cfg, seed), &params)?,
    };
    let r = boost_forest(&g, &chi, &params)?;
    row.push("n", g.n())
        .push("p", cfg.p.resolve(g.n()))
        .push("delta", cfg.delta)
        .push("alpha", cfg.alpha)
        .push("adversary", adversary_label(cfg, inputs.coloring.is_some()))
        .push("leafCount", r.leaf_count)
        .push("leafFraction", r.leaf_fraction())
        .push("signedSum", r.signed_sum)
        .push("absDiscrepancy", r.abs_discrepancy)
        .push("epsilonAchieved", r.epsilon_achieved)
        .push("swapsApplied", r.swaps_applied)
        .push("caseTag", r.case_tag)
        .push("initialSum", r.initial_sum)
        .push("matchingSize", r.matching_size)
        .push("skipped", r.skipped)
        .push("swapIdentity", r.swap_identity_holds)
        .push("success", r.meets(BOOST_EPSILON, cfg.alpha));
    Ok(())
}

/// Majority margin beyond `(n - 1) / 2`, as a fraction of `n`, counted as
/// success in the main1 mode.
pub const MAIN1_MARGIN: f64 = 0.004;

fn main1_trial(cfg: &ExperimentConfig, seed: u64, row: &mut Row) -> Result<()> {
    let n = cfg.n;
    let p1 = ((n as f64).ln() + 3.0) / n as f64;
    let p2 = cfg.p.resolve(n);
    let g1 = gnp(n, p1.min(1.0), derive_seed(seed, 10))?;
    let g2 = gnp(n, p2, derive_seed(seed, 11))?;
    let union = union_graphs(&g1, &g2)?;
    let params = boost_params(cfg, seed)?;
    let chi = make_coloring(&union, &adversary(cfg, seed), &params)?;
    let r = high_disc_spanning_tree(&g1, &g2, &chi, &params)?;
    let threshold = 0.5 * (n as f64 - 1.0) + MAIN1_MARGIN * n as f64;
    row.push("n", n)
        .push("p1", p1)
        .push("p2", p2)
        .push("adversary", adversary_label(cfg, false))
        .push("isSpanningTree", r.tree.len() == n && r.tree.edges().len() + 1 == n)
        .push("forestComponents", r.forest.forest.component_count())
        .push("forestAbsDiscrepancy", r.forest.abs_discrepancy)
        .push("addedEdges", r.added_edges.len())
        .push("signedSum", r.signed_sum)
        .push("absDiscrepancy", r.abs_discrepancy)
        .push("majorityCount", r.majority_count)
        .push("majorityFraction", r.majority_count as f64 / (n as f64 - 1.0))
        .push("leafCount", r.leaf_count)
        .push("majorityBound", r.majority_bound_holds)
        .push("success", r.majority_count as f64 > threshold);
    Ok(())
}

fn perturb_trial(cfg: &ExperimentConfig, inputs: &Inputs, seed: u64, row: &mut Row) -> Result<()> {
    let n = inputs.graph.as_ref().map_or(cfg.n, Graph::n);
    let p = cfg.p.resolve(n);
    let h = match &inputs.graph {
        Some(g) => g.clone(),
        None => {
            let (base, _) = dense_base(n, cfg.alpha, DenseFamily::CliqueUnion, derive_seed(seed, 12))?;
            union_graphs(&base, &gnp(n, p, derive_seed(seed, 10))?)?
        }
    };
    let params = PerturbParams::new(n, cfg.alpha, p.max(f64::MIN_POSITIVE), DEFAULT_C1)?;
    let three = if n >= 4 { is_three_connected(&h)? } else { false };
    let cert = certify_separation_bound(&h, &params)?;
    let target = params.lambda * p * (n * n) as f64;
    let (abs, swaps) = if h.is_connected() {
        let chi = match &inputs.coloring {
            Some(chi) => chi.clone(),
            None => make_coloring(&h, &adversary(cfg, seed), &boost_params(cfg, seed)?)?,
        };
        let r = perturbed_discrepancy_tree(&h, &chi, 20 * n, derive_seed(seed, 40))?;
        (r.abs_discrepancy, r.swaps)
    } else {
        (0, 0)
    };
    row.push("n", n)
        .push("p", p)
        .push("alpha", cfg.alpha)
        .push("adversary", adversary_label(cfg, inputs.coloring.is_some()))
        .push("threeConnected", three)
        .push("d", params.d)
        .push("certificateValid", cert.valid)
        .push("certifiedBound", cert.certified_bound)
        .push("removed", cert.u_size)
        .push("parts", cert.part_sizes.len())
        .push("lambda", params.lambda)
        .push("target", target)
        .push("absDiscrepancy", abs)
        .push("swaps", swaps)
        .push("success", abs as f64 >= target);
    Ok(())
}

/// Multiple of `n^2 p` that the sharpness mode's discrepancy must stay under.
pub const SHARPNESS_FACTOR: f64 = 8.0;

fn sharpness_trial(cfg: &ExperimentConfig, seed: u64, row: &mut Row) -> Result<()> {
    let n = cfg.n;
    let p = cfg.p.resolve(n);
    let (g, chi) = sharpness_instance(n, cfg.alpha, p, derive_seed(seed, 10))?;
    let half = n / 2;
    let cross = g.edges().iter().filter(|&&(u, v)| (u < half) != (v < half)).count();
    let bound = SHARPNESS_FACTOR * (n * n) as f64 * p;
    let (abs, swaps) = if g.is_connected() {
        let r = perturbed_discrepancy_tree(&g, &chi, 20 * n, derive_seed(seed, 40))?;
        (r.abs_discrepancy, r.swaps)
    } else {
        (0, 0)
    };
    row.push("n", n)
        .push("p", p)
        .push("alpha", cfg.alpha)
        .push("crossEdges", cross)
        .push("expectedCross", (half * (n - half)) as f64 * p)
        .push("absDiscrepancy", abs)
        .push("swaps", swaps)
        .push("bound", bound)
        .push("success", (abs as f64) <= bound);
    Ok(())
}

/// Colourings tried per graph in oracle-check mode.
pub const ORACLE_COLORINGS: usize = 10;

fn oracle_trial(cfg: &ExperimentConfig, trial: usize, seed: u64, row: &mut Row) -> Result<()> {
    let n = 5 + trial % (cfg.n - 4);
    let g = random_connected_graph(n, 0.3, 0.8, derive_seed(seed, 10))?;
    let mut violations = 0usize;
    let mut boost_best = 0u64;
    let mut oracle_best = 0u64;
    for k in 0..ORACLE_COLORINGS {
        let chi = uniform_coloring(&g, derive_seed(seed, 100 + k as u64));
        let params = boost_params(cfg, derive_seed(seed, 200 + k as u64))?;
        let r = boost_forest(&g, &chi, &params)?;
        r.forest.validate_against(&g)?;
        let bound = max_discrepancy_forest_bruteforce(&g, &chi, cfg.alpha)?;
        let best = bound.map_or(0, |(_, v)| v);
        let in_family = r.leaf_count as f64 >= cfg.alpha * n as f64;
        if in_family && r.abs_discrepancy > best {
            violations += 1;
        }
        boost_best = boost_best.max(r.abs_discrepancy);
        oracle_best = oracle_best.max(best);
    }
    let all: Vec<usize> = (0..n).collect();
    let start = spanning_tree_arbitrary(&g, &all, derive_seed(seed, 30))?;
    let leaf_params = LeafRunParams::new(0.99, derive_seed(seed, 31))?.with_budget(100.0)?;
    let run = leaf_increase(&g, &start, &leaf_params)?;
    let max_leaves = max_leaf_tree_bruteforce(&g)?;
    row.push("n", n)
        .push("m", g.m())
        .push("colorings", ORACLE_COLORINGS)
        .push("violations", violations)
        .push("boostBest", boost_best)
        .push("oracleBest", oracle_best)
        .push("leafStart", run.initial_leaves)
        .push("leafFinal", run.final_leaves)
        .push("leafMax", max_leaves)
        .push("leafAttained", run.final_leaves == max_leaves)
        .push("success", violations == 0 && run.final_leaves <= max_leaves);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(vals: &[(&'static str, Cell)]) -> Row {
        Row(vals.to_vec())
    }

    #[test]
    fn summary_examples() {
        let one = vec![row(&[("x", Cell::Float(2.5)), ("success", Cell::Bool(true))])];
        let s = summarize(&one).unwrap();
        assert_eq!(s.columns[0].mean, 2.5);
        assert_eq!(s.columns[0].stddev, 0.0);
        assert_eq!(s.success_fraction, 1.0);

        let three: Vec<Row> = [1i64, 2, 6]
            .iter()
            .map(|&v| row(&[("x", Cell::Int(v)), ("c", Cell::Int(4)), ("t", Cell::from("a")), ("success", Cell::Bool(v > 1))]))
            .collect();
        let s = summarize(&three).unwrap();
        assert_eq!(s.columns[0].mean, 3.0);
        assert_eq!((s.columns[0].min, s.columns[0].max), (1.0, 6.0));
        assert_eq!(s.columns[1].stddev, 0.0);
        assert!(s.columns.iter().all(|c| c.name != "t"));
        assert!((s.success_fraction - 2.0 / 3.0).abs() < 1e-12);
        assert!(summarize(&[]).is_err());
    }

    #[test]
    fn pspec_forms() {
        assert_eq!(PSpec::P(0.25).resolve(10), 0.25);
        assert_eq!(PSpec::COverN(2.0).resolve(10), 0.2);
        assert_eq!(PSpec::FOverN2(50.0).resolve(10), 0.5);
    }

    #[test]
    fn config_validation() {
        let mut cfg = ExperimentConfig::new(Mode::Boost);
        assert!(cfg.validate().is_ok());
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::new(Mode::OracleCheck);
        cfg.n = 12;
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::new(Mode::TwoPhase);
        cfg.graph_in = Some("g.txt".into());
        assert!(cfg.validate().is_err());
        assert_eq!("two-phase".parse::<Mode>().unwrap(), Mode::TwoPhase);
        assert!("nope".parse::<Mode>().is_err());
    }
}
