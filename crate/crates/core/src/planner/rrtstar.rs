use alloc::vec::Vec;

use super::rrtsharp::trace_parents;
use super::{ExtendOutcome, Planner, PlannerParams, StepReport};
use crate::error::PlanError;
use crate::nngraph::{steer, ConnectionRadius, Graph, VertexId};
use crate::rng::SeededRng;
use crate::space::Scenario;

/// RRT* baseline. The graph holds tree edges only; `g` and `lmc` both carry
/// the cost-to-come, so every vertex is consistent.
#[derive(Debug, Clone)]
pub struct RrtStar {
    scenario: Scenario,
    params: PlannerParams,
    radius: ConnectionRadius,
    graph: Graph,
    rng: SeededRng,
    iteration: usize,
    goal_vertices: Vec<VertexId>,
}

impl RrtStar {
    pub fn new(scenario: Scenario, params: PlannerParams, rng: SeededRng) -> Self {
        let dim = scenario.dim();
        let mut graph = Graph::new(dim);
        let root = graph.insert_vertex(scenario.x_init().clone());
        let mut planner = RrtStar {
            radius: params.radius(dim),
            graph,
            rng,
            iteration: 0,
            goal_vertices: Vec::new(),
            scenario,
            params,
        };
        planner.set_cost(root, 0.0);
        planner.register_goal(root);
        planner
    }

    pub fn params(&self) -> &PlannerParams {
        &self.params
    }

    pub fn cost(&self, v: VertexId) -> f64 {
        self.graph.vertex(v).g()
    }

    fn set_cost(&mut self, v: VertexId, cost: f64) {
        let r = self.graph.vertex_mut(v);
        r.g = cost;
        r.lmc = cost;
    }

    fn register_goal(&mut self, v: VertexId) {
        if self.scenario.in_goal(self.graph.vertex(v).position()) {
            self.goal_vertices.push(v);
        }
    }

    /// Adds the steered point under its cheapest neighbor, then rewires
    /// neighbors that become cheaper through it.
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
        let mut candidates = Vec::with_capacity(near.len());
        for u in near {
            let p = self.graph.vertex(u).position();
            if u == nearest || self.scenario.segment_obstacle_free(p, &x_new) {
                candidates.push((u, self.scenario.edge_cost(p, &x_new)));
            }
        }

        let c_nearest = candidates
            .iter()
            .find(|(u, _)| *u == nearest)
            .map(|&(_, c)| c)
            .expect("nearest is always a candidate");
        let (mut parent, mut cost) = (nearest, self.cost(nearest) + c_nearest);
        for &(u, c) in &candidates {
            let through = self.cost(u) + c;
            if through < cost {
                parent = u;
                cost = through;
            }
        }

        let v = self.graph.insert_vertex(x_new);
        self.set_cost(v, cost);
        self.graph.vertex_mut(v).parent = Some(parent);
        let parent_cost = candidates.iter().find(|(u, _)| *u == parent).map(|&(_, c)| c);
        self.graph.add_edge(parent, v, parent_cost.expect("parent is a candidate"));
        self.register_goal(v);

        for (u, c) in candidates {
            let through = cost + c;
            if u == parent || through >= self.cost(u) {
                continue;
            }
            let old_parent = self.graph.vertex(u).parent().expect("only the root lacks a parent");
            self.graph.remove_edge(u, old_parent);
            self.graph.add_edge(v, u, c);
            self.graph.vertex_mut(u).parent = Some(v);
            self.set_cost(u, through);
            self.propagate(u);
        }
        ExtendOutcome::Extended(v)
    }

    /// Recomputes costs below `root` after its cost changed.
    fn propagate(&mut self, root: VertexId) {
        let mut stack = alloc::vec![root];
        while let Some(w) = stack.pop() {
            let base = self.cost(w);
            let parent = self.graph.vertex(w).parent();
            for i in 0..self.graph.neighbors(w).len() {
                let edge = self.graph.neighbors(w)[i];
                if Some(edge.to) == parent {
                    continue;
                }
                self.set_cost(edge.to, base + edge.cost);
                stack.push(edge.to);
            }
        }
    }
}

impl Planner for RrtStar {
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
        Ok(StepReport {
            iteration: self.iteration,
            sample,
            outcome,
        })
    }

    fn best_cost(&self) -> f64 {
        self.best_goal().map_or(f64::INFINITY, |v| self.cost(v))
    }

    fn best_path(&self) -> Vec<VertexId> {
        self.best_goal()
            .map(|v| trace_parents(&self.graph, v))
            .unwrap_or_default()
    }
}

impl RrtStar {
    /// Goal vertex with the least cost; ties go to the lowest id.
    pub fn best_goal(&self) -> Option<VertexId> {
        let mut best: Option<VertexId> = None;
        for &v in &self.goal_vertices {
            if best.map_or(true, |b| self.cost(v) < self.cost(b)) {
                best = Some(v);
            }
        }
        best
    }
}
