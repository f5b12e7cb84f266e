use alloc::vec::Vec;

use super::{ExtendOutcome, InclusionRule, Planner, PlannerParams, StepReport, VertexCategory};
use crate::error::{InvariantViolation, PlanError};
use crate::nngraph::{steer, ConnectionRadius, Graph, VertexId};
use crate::pqueue::{key_lt, IndexedQueue, Key};
use crate::rng::SeededRng;
use crate::space::Scenario;

/// A vertex admitted by `extend`, with the keys the inclusion gate saw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inclusion {
    pub vertex: VertexId,
    pub iteration: usize,
    pub key: Key,
    /// Key of the chosen parent, if any.
    pub parent_key: Option<Key>,
    pub goal_key: Key,
}

/// RRT# over an r-disc graph with lifelong-planning cost propagation.
///
/// `lmc` never increases and `g` is only ever assigned from `lmc`, so
/// `lmc <= g` holds for every vertex and a key depends on `lmc` alone.
#[derive(Debug, Clone)]
pub struct RrtSharp {
    pub(crate) scenario: Scenario,
    pub(crate) rule: InclusionRule,
    pub(crate) params: PlannerParams,
    pub(crate) radius: ConnectionRadius,
    pub(crate) graph: Graph,
    pub(crate) queue: IndexedQueue,
    pub(crate) rng: SeededRng,
    pub(crate) iteration: usize,
    pub(crate) goal_vertices: Vec<VertexId>,
    /// Least key over goal vertices and the vertex holding it.
    pub(crate) goal_key: Key,
    pub(crate) best_goal: Option<VertexId>,
    pub(crate) inclusions: Vec<Inclusion>,
}

impl RrtSharp {
    /// Inserts `x_init` with `g = inf`, `lmc = 0`, queues it and propagates.
    pub fn new(scenario: Scenario, rule: InclusionRule, params: PlannerParams, rng: SeededRng) -> Self {
        let dim = scenario.dim();
        let mut planner = RrtSharp {
            radius: params.radius(dim),
            graph: Graph::new(dim),
            queue: IndexedQueue::new(),
            rng,
            iteration: 0,
            goal_vertices: Vec::new(),
            goal_key: Key::INFINITE,
            best_goal: None,
            inclusions: Vec::new(),
            scenario,
            rule,
            params,
        };
        let root = planner.graph.insert_vertex(planner.scenario.x_init().clone());
        planner.graph.vertex_mut(root).lmc = 0.0;
        planner.register_goal(root);
        planner.update_queue(root);
        planner.reduce_inconsistency();
        planner
    }

    pub fn rule(&self) -> InclusionRule {
        self.rule
    }

    pub fn params(&self) -> &PlannerParams {
        &self.params
    }

    pub fn queue(&self) -> &IndexedQueue {
        &self.queue
    }

    pub fn goal_vertices(&self) -> &[VertexId] {
        &self.goal_vertices
    }

    pub fn inclusions(&self) -> &[Inclusion] {
        &self.inclusions
    }

    /// `(min(g, lmc) + h, min(g, lmc))`.
    pub fn compute_key(&self, v: VertexId) -> Key {
        let r = self.graph.vertex(v);
        self.key_for(r.position(), r.g().min(r.lmc()))
    }

    fn key_for(&self, x: &[f64], value: f64) -> Key {
        Key::new(value + self.scenario.heuristic(x), value)
    }

    /// Least key over goal vertices; infinite while none exist.
    pub fn goal_key(&self) -> Key {
        self.goal_key
    }

    pub fn best_goal(&self) -> Option<VertexId> {
        self.best_goal
    }

    pub fn classify(&self, v: VertexId) -> Result<VertexCategory, InvariantViolation> {
        let r = self.graph.vertex(v);
        VertexCategory::classify(r.g(), r.lmc())
    }

    /// Queues `v` iff it is inconsistent, refreshing its key if queued.
    pub fn update_queue(&mut self, v: VertexId) {
        let r = self.graph.vertex(v);
        let inconsistent = r.g() != r.lmc();
        let key = self.compute_key(v);
        match (inconsistent, self.queue.contains(v)) {
            (true, true) => self.queue.update(v, key),
            (true, false) => self.queue.insert(v, key),
            (false, true) => self.queue.remove(v),
            (false, false) => {}
        }
        self.graph.vertex_mut(v).in_queue = inconsistent;
        self.touch_goal(v);
    }

    fn register_goal(&mut self, v: VertexId) {
        if self.scenario.in_goal(self.graph.vertex(v).position()) {
            self.goal_vertices.push(v);
        }
    }

    /// Folds `v` into the running goal key if it is a goal vertex. Keys only
    /// decrease, so a running minimum stays exact.
    fn touch_goal(&mut self, v: VertexId) {
        if !self.scenario.in_goal(self.graph.vertex(v).position()) {
            return;
        }
        let key = self.compute_key(v);
        let better = match self.best_goal {
            None => true,
            Some(best) => key_lt(key, self.goal_key) || (key == self.goal_key && v < best),
        };
        if better {
            self.goal_key = key;
            self.best_goal = Some(v);
        }
    }

    /// Steers toward `x_rand` and, if the inclusion rule admits the result,
    /// connects it to every collision-free vertex in its neighborhood.
    pub fn extend(&mut self, x_rand: &[f64]) -> ExtendOutcome {
        let Some(nearest) = self.graph.nearest(x_rand) else {
            return ExtendOutcome::Rejected;
        };
        let from = self.graph.vertex(nearest).position();
        let x_new = steer(from, x_rand, self.params.eta);
        if x_new.coords() == from.coords() {
            return ExtendOutcome::Rejected;
        }
        if !self.scenario.segment_obstacle_free(from, &x_new) {
            return ExtendOutcome::CollisionBlocked;
        }

        let mut near = self.graph.near(&x_new, &self.radius);
        if let Err(at) = near.binary_search(&nearest) {
            near.insert(at, nearest);
        }
        let mut edges = Vec::with_capacity(near.len());
        for u in near {
            let p = self.graph.vertex(u).position();
            if u == nearest || self.scenario.segment_obstacle_free(p, &x_new) {
                edges.push((u, self.scenario.edge_cost(p, &x_new)));
            }
        }

        let (mut lmc, mut parent) = match self.rule {
            InclusionRule::Always => {
                let c = edges.iter().find(|(u, _)| *u == nearest).map(|&(_, c)| c);
                let c = c.expect("nearest is always connected");
                (self.graph.vertex(nearest).g() + c, Some(nearest))
            }
            _ => (f64::INFINITY, None),
        };
        for &(u, c) in &edges {
            let through = self.graph.vertex(u).g() + c;
            if through < lmc {
                lmc = through;
                parent = Some(u);
            }
        }

        let key = self.key_for(&x_new, lmc);
        let parent_key = parent.map(|p| self.compute_key(p));
        let goal_key = self.goal_key;
        let admitted = match self.rule {
            InclusionRule::Always => true,
            InclusionRule::HasParent => parent.is_some(),
            InclusionRule::PromisingParent => parent_key.is_some_and(|k| key_lt(k, goal_key)),
            InclusionRule::PromisingVertex => key_lt(key, goal_key),
        };
        if !admitted {
            return ExtendOutcome::Rejected;
        }

        let v = self.graph.insert_vertex(x_new);
        {
            let r = self.graph.vertex_mut(v);
            r.lmc = lmc;
            r.parent = parent;
        }
        for (u, c) in edges {
            self.graph.add_edge(u, v, c);
        }
        self.register_goal(v);
        self.update_queue(v);
        self.inclusions.push(Inclusion {
            vertex: v,
            iteration: self.iteration,
            key,
            parent_key,
            goal_key,
        });
        ExtendOutcome::Extended(v)
    }

    /// Pops vertices while their key precedes the goal key, making each
    /// consistent and relaxing its neighbors.
    pub fn reduce_inconsistency(&mut self) {
        while let Some((x, key)) = self.queue.find_min() {
            if !key_lt(key, self.goal_key) {
                break;
            }
            self.queue.remove(x);
            let g = {
                let r = self.graph.vertex_mut(x);
                r.in_queue = false;
                r.g = r.lmc;
                r.g
            };
            self.touch_goal(x);
            for i in 0..self.graph.neighbors(x).len() {
                let edge = self.graph.neighbors(x)[i];
                let through = g + edge.cost;
                let s = self.graph.vertex_mut(edge.to);
                if s.lmc > through {
                    s.lmc = through;
                    s.parent = Some(x);
                    self.update_queue(edge.to);
                }
            }
        }
    }

    /// Overwrites `g` without touching the queue. Exists to exercise the
    /// invariant checks.
    #[doc(hidden)]
    pub fn perturb_g(&mut self, v: VertexId, g: f64) {
        self.graph.vertex_mut(v).g = g;
    }
}

impl Planner for RrtSharp {
    fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    fn graph(&self) -> &Graph {
        &self.graph
    }

    fn iteration(&self) -> usize {
        self.iteration
    }

    fn step(&mut self) -> Result<StepReport, PlanError> {
        let sample = self
            .scenario
            .sample_free_with_budget(&mut self.rng, self.params.sampling_budget)?;
        self.iteration += 1;
        let outcome = self.extend(&sample);
        self.reduce_inconsistency();
        Ok(StepReport {
            iteration: self.iteration,
            sample,
            outcome,
        })
    }

    fn best_cost(&self) -> f64 {
        self.goal_key.k2
    }

    fn best_path(&self) -> Vec<VertexId> {
        match self.best_goal {
            Some(goal) if self.goal_key.k2.is_finite() => trace_parents(&self.graph, goal),
            _ => Vec::new(),
        }
    }
}

/// Follows parent pointers from `v` back to the root and returns the path
/// root-first.
pub(crate) fn trace_parents(graph: &Graph, v: VertexId) -> Vec<VertexId> {
    let mut path = Vec::new();
    let mut cursor = Some(v);
    while let Some(u) = cursor {
        assert!(path.len() <= graph.len(), "parent pointers form a cycle");
        path.push(u);
        cursor = graph.vertex(u).parent();
    }
    path.reverse();
    path
}
