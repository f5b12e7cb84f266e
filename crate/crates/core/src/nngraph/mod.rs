//! Vertex and edge storage for the geometric r-disc graph, with
//! nearest-neighbor and range queries backed by an incremental k-d tree.

mod kdtree;

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use self::kdtree::KdTree;
use crate::space::{Point, Scenario};

/// Dense, insertion-ordered vertex index. Vertex 0 is always `x_init`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One direction of an undirected edge, with its cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub to: VertexId,
    pub cost: f64,
}

#[derive(Debug, Clone)]
pub struct VertexRecord {
    pub(crate) position: Point,
    pub(crate) g: f64,
    pub(crate) lmc: f64,
    pub(crate) parent: Option<VertexId>,
    pub(crate) neighbors: Vec<Edge>,
    pub(crate) in_queue: bool,
}

impl VertexRecord {
    pub fn position(&self) -> &Point {
        &self.position
    }

    /// Cost-to-come estimate.
    pub fn g(&self) -> f64 {
        self.g
    }

    /// One-step lookahead cost-to-come estimate.
    pub fn lmc(&self) -> f64 {
        self.lmc
    }

    pub fn parent(&self) -> Option<VertexId> {
        self.parent
    }

    pub fn neighbors(&self) -> &[Edge] {
        &self.neighbors
    }

    pub fn in_queue(&self) -> bool {
        self.in_queue
    }
}

#[derive(Debug, Clone)]
pub struct Graph {
    dim: usize,
    vertices: Vec<VertexRecord>,
    edge_count: usize,
    index: KdTree,
}

impl Graph {
    pub fn new(dim: usize) -> Self {
        Graph {
            dim,
            vertices: Vec::new(),
            edge_count: 0,
            index: KdTree::new(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Adds a vertex with `g = lmc = inf` and no parent.
    pub fn insert_vertex(&mut self, p: Point) -> VertexId {
        assert_eq!(p.dim(), self.dim, "point dimension mismatch");
        let id = self.index.insert(&p);
        debug_assert_eq!(id, self.vertices.len());
        self.vertices.push(VertexRecord {
            position: p,
            g: f64::INFINITY,
            lmc: f64::INFINITY,
            parent: None,
            neighbors: Vec::new(),
            in_queue: false,
        });
        VertexId(id)
    }

    pub fn vertex(&self, v: VertexId) -> &VertexRecord {
        &self.vertices[v.0]
    }

    pub(crate) fn vertex_mut(&mut self, v: VertexId) -> &mut VertexRecord {
        &mut self.vertices[v.0]
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = (VertexId, &VertexRecord)> + '_ {
        self.vertices.iter().enumerate().map(|(i, r)| (VertexId(i), r))
    }

    pub fn ids(&self) -> impl ExactSizeIterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn neighbors(&self, v: VertexId) -> &[Edge] {
        &self.vertices[v.0].neighbors
    }

    /// Adds the undirected edge `{u, v}`.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId, cost: f64) {
        debug_assert_ne!(u, v);
        self.vertices[u.0].neighbors.push(Edge { to: v, cost });
        self.vertices[v.0].neighbors.push(Edge { to: u, cost });
        self.edge_count += 1;
    }

    /// Removes the undirected edge `{u, v}`; returns whether it existed.
    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> bool {
        let drop_half = |list: &mut Vec<Edge>, to: VertexId| match list.iter().position(|e| e.to == to) {
            Some(i) => {
                list.swap_remove(i);
                true
            }
            None => false,
        };
        let removed = drop_half(&mut self.vertices[u.0].neighbors, v);
        if removed {
            drop_half(&mut self.vertices[v.0].neighbors, u);
            self.edge_count -= 1;
        }
        removed
    }

    /// Vertex closest to `x`, ties broken by lowest id; `None` when empty.
    pub fn nearest(&self, x: &[f64]) -> Option<VertexId> {
        self.index.nearest(x).map(VertexId)
    }

    /// Vertices within `radius` of `x` in ascending id order, excluding any
    /// vertex located exactly at `x`.
    pub fn near_within(&self, x: &[f64], radius: f64) -> Vec<VertexId> {
        self.index.within(x, radius).into_iter().map(VertexId).collect()
    }

    /// Vertices within the shrinking connection radius for the current
    /// vertex count.
    pub fn near(&self, x: &[f64], radius: &ConnectionRadius) -> Vec<VertexId> {
        self.near_within(x, radius.at(self.len()))
    }
}

/// Volume of the unit ball in `d` dimensions.
pub fn unit_ball_volume(d: usize) -> f64 {
    // zeta_d = zeta_{d-2} * 2 pi / d, with zeta_0 = 1 and zeta_1 = 2.
    let mut volume = if d % 2 == 0 { 1.0 } else { 2.0 };
    let mut k = if d % 2 == 0 { 2 } else { 3 };
    while k <= d {
        volume *= 2.0 * PI / k as f64;
        k += 2;
    }
    volume
}

/// `r(n) = min(gamma * (ln n / n)^(1/d), eta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionRadius {
    pub gamma: f64,
    pub eta: f64,
    pub dim: usize,
}

impl ConnectionRadius {
    pub fn new(gamma: f64, eta: f64, dim: usize) -> Self {
        ConnectionRadius { gamma, eta, dim }
    }

    /// `gamma = 2 (1 + 1/d)^(1/d) (mu(X_free) / zeta_d)^(1/d)`.
    pub fn default_gamma(scenario: &Scenario) -> f64 {
        let d = scenario.dim() as f64;
        let inv_d = 1.0 / d;
        2.0 * libm::pow(1.0 + inv_d, inv_d)
            * libm::pow(scenario.free_volume() / unit_ball_volume(scenario.dim()), inv_d)
    }

    pub fn for_scenario(scenario: &Scenario, eta: f64) -> Self {
        Self::new(Self::default_gamma(scenario), eta, scenario.dim())
    }

    pub fn at(&self, n: usize) -> f64 {
        if n < 2 {
            return 0.0;
        }
        let n = n as f64;
        let shrinking = self.gamma * libm::pow(libm::log(n) / n, 1.0 / self.dim as f64);
        shrinking.min(self.eta)
    }
}

/// Closest point to `toward` within distance `eta` of `from`.
pub fn steer(from: &[f64], toward: &[f64], eta: f64) -> Point {
    let dist = libm::sqrt(crate::space::squared_distance(from, toward));
    if dist <= eta {
        return Point::from(toward);
    }
    let scale = eta / dist;
    from.iter()
        .zip(toward)
        .map(|(a, b)| a + scale * (b - a))
        .collect::<Vec<_>>()
        .into()
}
