//! Monte Carlo trials, per-iteration statistics, timing ratios and
//! invariant verification.
//!
//! Trial `t` draws its samples from stream `t` of `base_seed`, whatever the
//! variant, so matched trials of different variants see the same sample
//! sequence.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use rrtsharp_core::nngraph::VertexId;
use rrtsharp_core::planner::{
    run, AlgorithmVariant, AnyPlanner, CostHistory, Inclusion, InclusionRule, Planner,
    PlannerParams, RrtSharp, VertexCategory,
};
use rrtsharp_core::pqueue::key_lt;
use rrtsharp_core::{Key, PlanError, Scenario, SeededRng};

use crate::oracle::{dijkstra, Adjacency};

/// Absolute tolerance when comparing `g` with oracle distances.
pub const DIJKSTRA_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Experiment {
    pub scenario: Scenario,
    pub params: PlannerParams,
    pub trials: usize,
    pub max_iterations: usize,
    pub history_stride: usize,
    pub base_seed: u64,
}

impl Experiment {
    /// Default planner parameters and a history stride of 10.
    pub fn new(scenario: Scenario, trials: usize, max_iterations: usize, base_seed: u64) -> Self {
        Experiment {
            params: PlannerParams::for_scenario(&scenario),
            scenario,
            trials,
            max_iterations,
            history_stride: 10,
            base_seed,
        }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.history_stride = stride;
        self
    }

    /// Iterations at which statistics are reported: 0, each multiple of the
    /// stride, and the last iteration.
    pub fn grid(&self) -> Vec<usize> {
        let stride = self.history_stride.max(1);
        let mut grid: Vec<usize> = (0..=self.max_iterations).step_by(stride).collect();
        if grid.last() != Some(&self.max_iterations) {
            grid.push(self.max_iterations);
        }
        grid
    }
}

pub fn trial_rng(base_seed: u64, trial: usize) -> SeededRng {
    SeededRng::with_stream(base_seed, trial as u64)
}

#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub trial: usize,
    pub history: CostHistory,
    pub best_cost: f64,
    pub vertex_count: usize,
    /// Final vertex counts per category, in [`VertexCategory::ALL`] order.
    pub categories: [usize; 4],
    /// Largest count per category seen at any grid point.
    pub peak_categories: [usize; 4],
    /// Admitted vertices whose logged keys fail the variant's inclusion rule.
    pub inclusion_violations: usize,
}

fn category_index(category: VertexCategory) -> usize {
    VertexCategory::ALL.iter().position(|&c| c == category).unwrap()
}

impl TrialRecord {
    pub fn count(&self, category: VertexCategory) -> usize {
        self.categories[category_index(category)]
    }

    pub fn peak(&self, category: VertexCategory) -> usize {
        self.peak_categories[category_index(category)]
    }
}

fn count_categories(graph: &rrtsharp_core::Graph) -> [usize; 4] {
    let mut counts = [0; 4];
    for (v, r) in graph.vertices() {
        let c = VertexCategory::classify(r.g(), r.lmc()).unwrap_or_else(|e| panic!("vertex {v}: {e}"));
        counts[category_index(c)] += 1;
    }
    counts
}

/// Whether a logged inclusion satisfies `rule`.
pub fn inclusion_allowed(rule: InclusionRule, inclusion: &Inclusion) -> bool {
    match rule {
        InclusionRule::Always => true,
        InclusionRule::HasParent => inclusion.parent_key.is_some(),
        InclusionRule::PromisingParent => inclusion.parent_key.is_some_and(|k| key_lt(k, inclusion.goal_key)),
        InclusionRule::PromisingVertex => key_lt(inclusion.key, inclusion.goal_key),
    }
}

pub fn run_trial(exp: &Experiment, variant: AlgorithmVariant, trial: usize) -> Result<TrialRecord, PlanError> {
    let start = Instant::now();
    let clock = move || start.elapsed().as_secs_f64();
    let planner = AnyPlanner::new(exp.scenario.clone(), variant, exp.params, trial_rng(exp.base_seed, trial));
    let mut audited = 0;
    let mut inclusion_violations = 0;
    let mut peak_categories = [0; 4];
    let stride = exp.history_stride.max(1);
    let result = run(planner, exp.max_iterations, exp.history_stride, &clock, |p| {
        let i = p.iteration();
        if i % stride == 0 || i == exp.max_iterations {
            for (peak, n) in peak_categories.iter_mut().zip(count_categories(p.graph())) {
                *peak = (*peak).max(n);
            }
        }
        if let Some(sharp) = p.as_sharp() {
            for inc in &sharp.inclusions()[audited..] {
                if !inclusion_allowed(sharp.rule(), inc) {
                    inclusion_violations += 1;
                }
            }
            audited = sharp.inclusions().len();
        }
    })?;
    let mut categories = [0; 4];
    for (i, &c) in VertexCategory::ALL.iter().enumerate() {
        categories[i] = result.snapshot.count(c);
    }
    Ok(TrialRecord {
        trial,
        best_cost: result.best_cost,
        vertex_count: result.snapshot.vertices.len(),
        history: result.cost_history,
        categories,
        peak_categories,
        inclusion_violations,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub iteration: usize,
    /// Mean over trials with a finite cost; `inf` if there are none.
    pub mean_cost: f64,
    /// Population variance over the same trials; NaN if there are none.
    pub variance: f64,
    pub solved: usize,
    pub unsolved: usize,
    pub mean_elapsed_s: f64,
    /// Mean and variance of cost divided by the straight-line optimum.
    pub normalized: Option<(f64, f64)>,
}

impl GridPoint {
    pub fn unsolved_fraction(&self) -> f64 {
        let total = self.solved + self.unsolved;
        if total == 0 {
            return 1.0;
        }
        self.unsolved as f64 / total as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialStats {
    pub grid: Vec<GridPoint>,
    /// Trials that completed.
    pub trial_count: usize,
    pub failed_trials: usize,
}

/// Mean and population variance. Values are sorted first, so the result
/// does not depend on input order.
pub fn mean_variance(values: &mut [f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::INFINITY, f64::NAN);
    }
    values.sort_by(f64::total_cmp);
    let (mut mean, mut m2) = (0.0, 0.0);
    for (i, &x) in values.iter().enumerate() {
        let delta = x - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (x - mean);
    }
    (mean, (m2 / values.len() as f64).max(0.0))
}

/// Cost of the straight segment from `x_init` to the goal, when the
/// scenario has no cost zones.
pub fn straight_line_optimum(scenario: &Scenario) -> Option<f64> {
    scenario
        .zones()
        .is_empty()
        .then(|| scenario.default_coefficient() * scenario.goal().distance_to(scenario.x_init()))
}

pub fn aggregate(exp: &Experiment, records: &[TrialRecord], failed_trials: usize) -> TrialStats {
    let optimum = straight_line_optimum(&exp.scenario);
    let grid = exp
        .grid()
        .into_iter()
        .map(|iteration| {
            let samples: Vec<_> = records
                .iter()
                .map(|r| *r.history.at(iteration).expect("history covers the grid"))
                .collect();
            let mut costs: Vec<f64> = samples.iter().map(|s| s.best_cost).filter(|c| c.is_finite()).collect();
            let mut elapsed: Vec<f64> = samples.iter().map(|s| s.elapsed_seconds).collect();
            let normalized = optimum.filter(|&o| o > 0.0).map(|o| {
                let mut scaled: Vec<f64> = costs.iter().map(|c| c / o).collect();
                mean_variance(&mut scaled)
            });
            let solved = costs.len();
            let (mean_cost, variance) = mean_variance(&mut costs);
            GridPoint {
                iteration,
                mean_cost,
                variance,
                solved,
                unsolved: samples.len() - solved,
                mean_elapsed_s: if elapsed.is_empty() { 0.0 } else { mean_variance(&mut elapsed).0 },
                normalized,
            }
        })
        .collect();
    TrialStats {
        grid,
        trial_count: records.len(),
        failed_trials,
    }
}

#[derive(Debug, Clone)]
pub struct VariantRuns {
    pub records: Vec<TrialRecord>,
    pub failures: Vec<(usize, PlanError)>,
    pub stats: TrialStats,
}

/// Runs every (variant, trial) pair, in parallel, then aggregates per
/// variant. A failed trial is recorded and excluded from the statistics.
///
/// # Panics
/// If `exp.trials` is zero.
pub fn run_trials(exp: &Experiment, variants: &[AlgorithmVariant]) -> BTreeMap<AlgorithmVariant, VariantRuns> {
    assert!(exp.trials >= 1, "at least one trial is required");
    let jobs: Vec<(AlgorithmVariant, usize)> = variants
        .iter()
        .flat_map(|&v| (0..exp.trials).map(move |t| (v, t)))
        .collect();
    let outcomes: Vec<_> = jobs
        .par_iter()
        .map(|&(v, t)| (v, t, run_trial(exp, v, t)))
        .collect();
    let mut out = BTreeMap::new();
    for &variant in variants {
        let mut records = Vec::new();
        let mut failures = Vec::new();
        for (_, t, outcome) in outcomes.iter().filter(|(v, _, _)| *v == variant) {
            match outcome {
                Ok(r) => records.push(r.clone()),
                Err(e) => failures.push((*t, e.clone())),
            }
        }
        let stats = aggregate(exp, &records, failures.len());
        out.insert(variant, VariantRuns { records, failures, stats });
    }
    out
}

/// Mean elapsed time of each variant divided by that of RRT* on the same
/// seeds, at every grid point after iteration 0. Runs serially on the
/// calling thread.
pub fn time_ratio(exp: &Experiment, variants: &[AlgorithmVariant]) -> BTreeMap<AlgorithmVariant, Vec<(usize, f64)>> {
    assert!(exp.trials >= 1, "at least one trial is required");
    let grid = exp.grid();
    let mean_elapsed = |variant: AlgorithmVariant| -> Vec<f64> {
        let records: Vec<TrialRecord> = (0..exp.trials).filter_map(|t| run_trial(exp, variant, t).ok()).collect();
        grid.iter()
            .map(|&it| {
                let total: f64 = records.iter().map(|r| r.history.at(it).unwrap().elapsed_seconds).sum();
                total / records.len().max(1) as f64
            })
            .collect()
    };
    let baseline = mean_elapsed(AlgorithmVariant::RrtStar);
    let mut out = BTreeMap::new();
    for &variant in variants {
        let elapsed = if variant == AlgorithmVariant::RrtStar {
            baseline.clone()
        } else {
            mean_elapsed(variant)
        };
        let ratios = grid
            .iter()
            .zip(elapsed.iter().zip(&baseline))
            .filter(|&(&it, (_, &base))| it > 0 && base > 0.0)
            .map(|(&it, (&e, &base))| (it, e / base))
            .collect();
        out.insert(variant, ratios);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// Key precedes the goal key but `g != lmc`.
    PromisingInconsistent,
    InconsistentNotQueued,
    ConsistentButQueued,
    /// The vertex's `in_queue` flag disagrees with the queue.
    QueueFlagMismatch,
    /// The queued key differs from a fresh key computation.
    StaleQueueKey,
    FiniteGInfiniteLmc,
    /// The planner's goal key differs from a recomputation over all vertices.
    GoalKeyMismatch,
    /// `g` differs from the shortest-path distance on a promising vertex.
    NotShortestPath,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub vertex: VertexId,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport {
    /// Goal key recomputed from scratch.
    pub goal_key: Key,
    pub violations: Vec<Violation>,
}

impl ConsistencyReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    /// Distinct violating vertices, ascending.
    pub fn vertices(&self) -> Vec<VertexId> {
        let mut v: Vec<VertexId> = self.violations.iter().map(|x| x.vertex).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Least key over every vertex lying in the goal region, computed without
/// the planner's own bookkeeping.
pub fn recompute_goal_key(planner: &RrtSharp) -> (Key, Option<VertexId>) {
    let mut best = (Key::INFINITE, None);
    for (v, r) in planner.graph().vertices() {
        if planner.scenario().in_goal(r.position()) {
            let k = planner.compute_key(v);
            if best.1.is_none() || key_lt(k, best.0) {
                best = (k, Some(v));
            }
        }
    }
    best
}

/// Checks that promising vertices are consistent and that the queue holds
/// exactly the inconsistent vertices, with current keys.
pub fn verify_consistency(planner: &RrtSharp) -> ConsistencyReport {
    let (goal_key, goal_vertex) = recompute_goal_key(planner);
    let mut violations = Vec::new();
    let mut flag = |vertex, kind| violations.push(Violation { vertex, kind });
    if goal_key != planner.goal_key() {
        flag(goal_vertex.unwrap_or(VertexId(0)), ViolationKind::GoalKeyMismatch);
    }
    let queue = planner.queue();
    for (v, r) in planner.graph().vertices() {
        let inconsistent = r.g() != r.lmc();
        let queued = queue.contains(v);
        if r.g().is_finite() && r.lmc().is_infinite() {
            flag(v, ViolationKind::FiniteGInfiniteLmc);
        }
        if inconsistent && key_lt(planner.compute_key(v), goal_key) {
            flag(v, ViolationKind::PromisingInconsistent);
        }
        match (inconsistent, queued) {
            (true, false) => flag(v, ViolationKind::InconsistentNotQueued),
            (false, true) => flag(v, ViolationKind::ConsistentButQueued),
            _ => {}
        }
        if r.in_queue() != queued {
            flag(v, ViolationKind::QueueFlagMismatch);
        }
        if queued && queue.key_of(v) != Some(planner.compute_key(v)) {
            flag(v, ViolationKind::StaleQueueKey);
        }
    }
    ConsistencyReport { goal_key, violations }
}

/// Promising vertices whose `g` differs from the shortest-path distance by
/// more than [`DIJKSTRA_TOLERANCE`].
pub fn verify_against_dijkstra(planner: &RrtSharp) -> Vec<Violation> {
    let dist = dijkstra(&Adjacency::from_graph(planner.graph()), VertexId(0));
    let (goal_key, _) = recompute_goal_key(planner);
    planner
        .graph()
        .vertices()
        .filter(|&(v, r)| key_lt(planner.compute_key(v), goal_key) && !((r.g() - dist[v.0]).abs() <= DIJKSTRA_TOLERANCE))
        .map(|(vertex, _)| Violation {
            vertex,
            kind: ViolationKind::NotShortestPath,
        })
        .collect()
}

fn fmt_float(x: f64) -> String {
    format!("{x}")
}

pub fn stats_csv(runs: &BTreeMap<AlgorithmVariant, VariantRuns>) -> String {
    let mut out = String::from("variant,iteration,mean_cost,variance,unsolved_fraction,mean_elapsed_s\n");
    for (variant, r) in runs {
        for p in &r.stats.grid {
            writeln!(
                out,
                "{variant},{},{},{},{},{}",
                p.iteration,
                fmt_float(p.mean_cost),
                fmt_float(p.variance),
                fmt_float(p.unsolved_fraction()),
                fmt_float(p.mean_elapsed_s)
            )
            .unwrap();
        }
    }
    out
}

/// `None` unless the statistics carry normalized costs (zone-free scenarios).
pub fn normalized_stats_csv(runs: &BTreeMap<AlgorithmVariant, VariantRuns>) -> Option<String> {
    let mut out = String::from("variant,iteration,mean_normalized_cost,normalized_variance\n");
    for (variant, r) in runs {
        for p in &r.stats.grid {
            let (mean, var) = p.normalized?;
            writeln!(out, "{variant},{},{},{}", p.iteration, fmt_float(mean), fmt_float(var)).unwrap();
        }
    }
    Some(out)
}

pub fn time_ratio_csv(ratios: &BTreeMap<AlgorithmVariant, Vec<(usize, f64)>>) -> String {
    let mut out = String::from("variant,iteration,time_ratio\n");
    for (variant, points) in ratios {
        for (it, r) in points {
            writeln!(out, "{variant},{it},{}", fmt_float(*r)).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    #[test]
    fn mean_variance_matches_two_pass() {
        let mut rng = SeededRng::new(12);
        for n in [1usize, 2, 7, 100] {
            let values: Vec<f64> = (0..n).map(|_| rng.uniform(1.0, 3.0)).collect();
            let mean_ref = values.iter().sum::<f64>() / n as f64;
            let var_ref = values.iter().map(|x| (x - mean_ref).powi(2)).sum::<f64>() / n as f64;
            let (mean, var) = mean_variance(&mut values.clone());
            assert!((mean - mean_ref).abs() <= 1e-12);
            assert!((var - var_ref).abs() <= 1e-12);
        }
        let (m, v) = mean_variance(&mut []);
        assert!(m.is_infinite() && v.is_nan());
    }

    #[test]
    fn grid_includes_last_iteration() {
        let exp = Experiment::new(bundled::load("pt1_empty_2d").unwrap(), 1, 25, 0);
        assert_eq!(exp.grid(), vec![0, 10, 20, 25]);
        assert_eq!(exp.clone().with_stride(5).grid(), vec![0, 5, 10, 15, 20, 25]);
    }

    #[test]
    fn matched_trials_share_sample_streams() {
        let scenario = bundled::load("pt2_boxes_2d").unwrap();
        let params = PlannerParams::for_scenario(&scenario);
        let mut star = AnyPlanner::new(scenario.clone(), AlgorithmVariant::RrtStar, params, trial_rng(5, 3));
        let mut v3 = AnyPlanner::new(scenario, AlgorithmVariant::RrtSharpV3, params, trial_rng(5, 3));
        for _ in 0..100 {
            assert_eq!(star.step().unwrap().sample, v3.step().unwrap().sample);
        }
    }

    #[test]
    fn perturbed_vertex_is_the_only_one_reported() {
        let scenario = bundled::load("pt2_boxes_2d").unwrap();
        let params = PlannerParams::for_scenario(&scenario);
        let mut p = RrtSharp::new(scenario, InclusionRule::Always, params, SeededRng::new(3));
        for _ in 0..800 {
            p.step().unwrap();
        }
        assert!(verify_consistency(&p).ok());
        assert!(verify_against_dijkstra(&p).is_empty());
        let target = p
            .graph()
            .vertices()
            .filter(|(_, r)| r.g().is_finite() && r.g() == r.lmc())
            .map(|(v, _)| v)
            .nth(40)
            .unwrap();
        let g = p.graph().vertex(target).g();
        p.perturb_g(target, g + 0.5);
        assert_eq!(verify_consistency(&p).vertices(), vec![target]);
    }
}
