//! Planning loops: RRT# with its vertex-inclusion variants, and an RRT*
//! baseline built from the same primitives.
//!
//! One iteration is `sample_free`, `extend` toward the sample, then (RRT#
//! only) `reduce_inconsistency`. [`run`] drives any [`Planner`] for a fixed
//! number of iterations and records the anytime cost every `history_stride`
//! iterations.

mod rrtsharp;
mod rrtstar;

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{InvariantViolation, PlanError};
use crate::nngraph::{ConnectionRadius, Graph, VertexId};
use crate::rng::SeededRng;
use crate::space::{Point, Scenario, DEFAULT_SAMPLING_BUDGET};

pub use self::rrtsharp::{Inclusion, RrtSharp};
pub use self::rrtstar::RrtStar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgorithmVariant {
    RrtStar,
    /// Baseline RRT#: every collision-free extension is kept.
    RrtSharpV0,
    /// Rejects new vertices without a parent (consistent with infinite key).
    RrtSharpV1,
    /// Keeps a new vertex only if its parent is promising.
    RrtSharpV2,
    /// Keeps a new vertex only if it is itself promising.
    RrtSharpV3,
}

impl AlgorithmVariant {
    pub const ALL: [AlgorithmVariant; 5] = [
        AlgorithmVariant::RrtStar,
        AlgorithmVariant::RrtSharpV0,
        AlgorithmVariant::RrtSharpV1,
        AlgorithmVariant::RrtSharpV2,
        AlgorithmVariant::RrtSharpV3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmVariant::RrtStar => "rrtstar",
            AlgorithmVariant::RrtSharpV0 => "rrtsharp-v0",
            AlgorithmVariant::RrtSharpV1 => "rrtsharp-v1",
            AlgorithmVariant::RrtSharpV2 => "rrtsharp-v2",
            AlgorithmVariant::RrtSharpV3 => "rrtsharp-v3",
        }
    }

    pub fn inclusion_rule(self) -> Option<InclusionRule> {
        match self {
            AlgorithmVariant::RrtStar => None,
            AlgorithmVariant::RrtSharpV0 => Some(InclusionRule::Always),
            AlgorithmVariant::RrtSharpV1 => Some(InclusionRule::HasParent),
            AlgorithmVariant::RrtSharpV2 => Some(InclusionRule::PromisingParent),
            AlgorithmVariant::RrtSharpV3 => Some(InclusionRule::PromisingVertex),
        }
    }
}

impl fmt::Display for AlgorithmVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownVariant(pub alloc::string::String);

impl fmt::Display for UnknownVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown algorithm `{}`; valid names are", self.0)?;
        for (i, v) in AlgorithmVariant::ALL.iter().enumerate() {
            let sep = if i == 0 { " " } else { ", " };
            write!(f, "{sep}{v}")?;
        }
        Ok(())
    }
}

impl core::error::Error for UnknownVariant {}

impl FromStr for AlgorithmVariant {
    type Err = UnknownVariant;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AlgorithmVariant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| UnknownVariant(s.to_string()))
    }
}

/// Gate applied to a new RRT# vertex before it joins the graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InclusionRule {
    Always,
    HasParent,
    PromisingParent,
    PromisingVertex,
}

/// Classification of a vertex by its `(g, lmc)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexCategory {
    ConsistentFinite,
    ConsistentInfinite,
    InconsistentFinite,
    InconsistentInfiniteG,
}

impl VertexCategory {
    pub const ALL: [VertexCategory; 4] = [
        VertexCategory::ConsistentFinite,
        VertexCategory::ConsistentInfinite,
        VertexCategory::InconsistentFinite,
        VertexCategory::InconsistentInfiniteG,
    ];

    /// A finite `g` with an infinite `lmc` cannot arise (`g` is only ever
    /// assigned from a finite `lmc`, and `lmc` never increases).
    pub fn classify(g: f64, lmc: f64) -> Result<Self, InvariantViolation> {
        match (g.is_finite(), lmc.is_finite()) {
            (true, true) if g == lmc => Ok(VertexCategory::ConsistentFinite),
            (true, true) => Ok(VertexCategory::InconsistentFinite),
            (false, false) => Ok(VertexCategory::ConsistentInfinite),
            (false, true) => Ok(VertexCategory::InconsistentInfiniteG),
            (true, false) => Err(InvariantViolation {
                message: alloc::format!("vertex with finite g = {g} and infinite lmc"),
            }),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            VertexCategory::ConsistentFinite => "CONSISTENT_FINITE",
            VertexCategory::ConsistentInfinite => "CONSISTENT_INFINITE",
            VertexCategory::InconsistentFinite => "INCONSISTENT_FINITE",
            VertexCategory::InconsistentInfiniteG => "INCONSISTENT_INF_G_FINITE_LMC",
        }
    }
}

impl fmt::Display for VertexCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for VertexCategory {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        VertexCategory::ALL
            .into_iter()
            .find(|c| c.label() == s)
            .ok_or(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlannerParams {
    /// Steering radius.
    pub eta: f64,
    /// Connection radius scale.
    pub gamma: f64,
    /// Consecutive sampler rejections tolerated per draw.
    pub sampling_budget: usize,
}

impl PlannerParams {
    /// `eta` is a tenth of the longest side of the bounds; `gamma` comes
    /// from the free volume.
    pub fn for_scenario(scenario: &Scenario) -> Self {
        PlannerParams {
            eta: Self::default_eta(scenario),
            gamma: ConnectionRadius::default_gamma(scenario),
            sampling_budget: DEFAULT_SAMPLING_BUDGET,
        }
    }

    pub fn default_eta(scenario: &Scenario) -> f64 {
        let bounds = scenario.bounds();
        let longest = bounds
            .min()
            .iter()
            .zip(bounds.max().iter())
            .map(|(lo, hi)| hi - lo)
            .fold(0.0, f64::max);
        0.1 * longest
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn radius(&self, dim: usize) -> ConnectionRadius {
        ConnectionRadius::new(self.gamma, self.eta, dim)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtendOutcome {
    Extended(VertexId),
    /// Steered point duplicated a vertex or failed the inclusion gate.
    Rejected,
    CollisionBlocked,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub iteration: usize,
    pub sample: Point,
    pub outcome: ExtendOutcome,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistorySample {
    pub iteration: usize,
    pub elapsed_seconds: f64,
    pub best_cost: f64,
}

/// Anytime cost samples with strictly increasing iteration numbers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CostHistory {
    samples: Vec<HistorySample>,
}

impl CostHistory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, sample: HistorySample) {
        if let Some(last) = self.samples.last() {
            assert!(
                sample.iteration > last.iteration,
                "history iterations must increase"
            );
        }
        self.samples.push(sample);
    }

    pub fn samples(&self) -> &[HistorySample] {
        &self.samples
    }

    pub fn last(&self) -> Option<&HistorySample> {
        self.samples.last()
    }

    /// Sample recorded exactly at `iteration`, if any.
    pub fn at(&self, iteration: usize) -> Option<&HistorySample> {
        self.samples
            .binary_search_by_key(&iteration, |s| s.iteration)
            .ok()
            .map(|i| &self.samples[i])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotVertex {
    pub id: VertexId,
    pub coords: Vec<f64>,
    pub g: f64,
    pub lmc: f64,
    pub parent: Option<VertexId>,
    pub category: VertexCategory,
}

/// Read-only copy of a planner's graph. Edges are listed once, `u < v`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GraphSnapshot {
    pub vertices: Vec<SnapshotVertex>,
    pub edges: Vec<(VertexId, VertexId)>,
}

impl GraphSnapshot {
    pub fn of(graph: &Graph) -> Self {
        let vertices = graph
            .vertices()
            .map(|(id, r)| SnapshotVertex {
                id,
                coords: r.position().to_vec(),
                g: r.g(),
                lmc: r.lmc(),
                parent: r.parent(),
                category: VertexCategory::classify(r.g(), r.lmc())
                    .unwrap_or_else(|e| panic!("vertex {id}: {e}")),
            })
            .collect();
        let mut edges = Vec::with_capacity(graph.edge_count());
        for (u, r) in graph.vertices() {
            for e in r.neighbors() {
                if u < e.to {
                    edges.push((u, e.to));
                }
            }
        }
        edges.sort_unstable();
        GraphSnapshot { vertices, edges }
    }

    pub fn count(&self, category: VertexCategory) -> usize {
        self.vertices.iter().filter(|v| v.category == category).count()
    }
}

/// Common driver interface for RRT# and RRT*.
pub trait Planner {
    fn scenario(&self) -> &Scenario;
    fn graph(&self) -> &Graph;
    /// Completed iterations.
    fn iteration(&self) -> usize;
    /// One sample-extend(-propagate) iteration.
    fn step(&mut self) -> Result<StepReport, PlanError>;
    /// Cost of the best path to the goal found so far, `inf` if none.
    fn best_cost(&self) -> f64;
    /// Vertex sequence from `x_init` to the best goal vertex; empty if none.
    fn best_path(&self) -> Vec<VertexId>;

    fn snapshot(&self) -> GraphSnapshot {
        GraphSnapshot::of(self.graph())
    }
}

/// Either planner, chosen at runtime from an [`AlgorithmVariant`].
#[derive(Debug, Clone)]
pub enum AnyPlanner {
    Sharp(RrtSharp),
    Star(RrtStar),
}

impl AnyPlanner {
    pub fn new(
        scenario: Scenario,
        variant: AlgorithmVariant,
        params: PlannerParams,
        rng: SeededRng,
    ) -> Self {
        match variant.inclusion_rule() {
            Some(rule) => AnyPlanner::Sharp(RrtSharp::new(scenario, rule, params, rng)),
            None => AnyPlanner::Star(RrtStar::new(scenario, params, rng)),
        }
    }

    pub fn as_sharp(&self) -> Option<&RrtSharp> {
        match self {
            AnyPlanner::Sharp(p) => Some(p),
            AnyPlanner::Star(_) => None,
        }
    }

    pub fn as_sharp_mut(&mut self) -> Option<&mut RrtSharp> {
        match self {
            AnyPlanner::Sharp(p) => Some(p),
            AnyPlanner::Star(_) => None,
        }
    }
}

macro_rules! delegate {
    ($self:ident, $p:ident => $e:expr) => {
        match $self {
            AnyPlanner::Sharp($p) => $e,
            AnyPlanner::Star($p) => $e,
        }
    };
}

impl Planner for AnyPlanner {
    fn scenario(&self) -> &Scenario {
        delegate!(self, p => p.scenario())
    }
    fn graph(&self) -> &Graph {
        delegate!(self, p => p.graph())
    }
    fn iteration(&self) -> usize {
        delegate!(self, p => p.iteration())
    }
    fn step(&mut self) -> Result<StepReport, PlanError> {
        delegate!(self, p => p.step())
    }
    fn best_cost(&self) -> f64 {
        delegate!(self, p => p.best_cost())
    }
    fn best_path(&self) -> Vec<VertexId> {
        delegate!(self, p => p.best_path())
    }
}

/// Source of elapsed wall-clock time for cost histories.
pub trait Stopwatch {
    fn elapsed_seconds(&self) -> f64;
}

/// Reports zero elapsed time; used where no clock is available.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Stopwatch for NoClock {
    fn elapsed_seconds(&self) -> f64 {
        0.0
    }
}

impl<F: Fn() -> f64> Stopwatch for F {
    fn elapsed_seconds(&self) -> f64 {
        self()
    }
}

#[derive(Debug, Clone)]
pub struct PlanResult {
    pub snapshot: GraphSnapshot,
    pub best_path: Vec<VertexId>,
    /// Sum of edge costs along `best_path`; `inf` when no path exists.
    pub best_cost: f64,
    pub cost_history: CostHistory,
    pub iterations: usize,
}

/// Sum of edge costs along `path`, accumulated from the root.
pub fn path_cost(scenario: &Scenario, graph: &Graph, path: &[VertexId]) -> f64 {
    if path.is_empty() {
        return f64::INFINITY;
    }
    path.windows(2)
        .map(|w| scenario.edge_cost(graph.vertex(w[0]).position(), graph.vertex(w[1]).position()))
        .fold(0.0, |acc, c| acc + c)
}

/// Runs `planner` for `max_iterations` iterations. The history holds
/// iteration 0, every multiple of `history_stride`, and the final iteration.
/// `observe` sees the planner after initialization and after every iteration.
pub fn run<P: Planner>(
    mut planner: P,
    max_iterations: usize,
    history_stride: usize,
    clock: &dyn Stopwatch,
    mut observe: impl FnMut(&P),
) -> Result<PlanResult, PlanError> {
    let stride = history_stride.max(1);
    let mut history = CostHistory::new();
    let record = |planner: &P, history: &mut CostHistory| {
        history.push(HistorySample {
            iteration: planner.iteration(),
            elapsed_seconds: clock.elapsed_seconds(),
            best_cost: planner.best_cost(),
        })
    };
    record(&planner, &mut history);
    observe(&planner);
    for i in 1..=max_iterations {
        planner.step()?;
        if i % stride == 0 || i == max_iterations {
            record(&planner, &mut history);
        }
        observe(&planner);
    }
    let best_path = planner.best_path();
    let best_cost = path_cost(planner.scenario(), planner.graph(), &best_path);
    Ok(PlanResult {
        snapshot: planner.snapshot(),
        best_path,
        best_cost,
        cost_history: history,
        iterations: planner.iteration(),
    })
}

/// Plans with default parameters, a generator seeded by `seed` and no clock.
pub fn plan(
    scenario: &Scenario,
    variant: AlgorithmVariant,
    max_iterations: usize,
    seed: u64,
    history_stride: usize,
) -> Result<PlanResult, PlanError> {
    let planner = AnyPlanner::new(
        scenario.clone(),
        variant,
        PlannerParams::for_scenario(scenario),
        SeededRng::new(seed),
    );
    run(planner, max_iterations, history_stride, &NoClock, |_| {})
}

/// RRT* baseline with the same contract as [`plan`].
pub fn plan_rrtstar(
    scenario: &Scenario,
    max_iterations: usize,
    seed: u64,
    history_stride: usize,
) -> Result<PlanResult, PlanError> {
    plan(scenario, AlgorithmVariant::RrtStar, max_iterations, seed, history_stride)
}
