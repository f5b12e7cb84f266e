//! Shortest-path oracles for checking planner cost-to-come values.
//!
//! Both work on an [`Adjacency`], a copy of the graph's edges and stored
//! costs. It carries no `g` or `lmc` values, so the oracles cannot read
//! planner state.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use rrtsharp_core::nngraph::{Graph, VertexId};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Adjacency {
    edges: Vec<Vec<(usize, f64)>>,
}

impl Adjacency {
    pub fn with_vertices(n: usize) -> Self {
        Adjacency {
            edges: vec![Vec::new(); n],
        }
    }

    pub fn from_graph(graph: &Graph) -> Self {
        Adjacency {
            edges: graph
                .ids()
                .map(|v| graph.neighbors(v).iter().map(|e| (e.to.0, e.cost)).collect())
                .collect(),
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, cost: f64) {
        self.edges[u].push((v, cost));
        self.edges[v].push((u, cost));
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

#[derive(PartialEq)]
struct Dist(f64);

impl Eq for Dist {}

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Single-source distances; unreachable vertices get `inf`. Edge costs must
/// be nonnegative.
pub fn dijkstra(graph: &Adjacency, source: VertexId) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; graph.len()];
    let mut heap = BinaryHeap::new();
    dist[source.0] = 0.0;
    heap.push(Reverse((Dist(0.0), source.0)));
    while let Some(Reverse((Dist(d), u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, c) in &graph.edges[u] {
            let nd = d + c;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((Dist(nd), v)));
            }
        }
    }
    dist
}

/// Same contract as [`dijkstra`], by repeated relaxation of every edge.
pub fn bellman_ford(graph: &Adjacency, source: VertexId) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; graph.len()];
    dist[source.0] = 0.0;
    for _ in 0..graph.len() {
        let mut changed = false;
        for (u, edges) in graph.edges.iter().enumerate() {
            if dist[u].is_infinite() {
                continue;
            }
            for &(v, c) in edges {
                if dist[u] + c < dist[v] {
                    dist[v] = dist[u] + c;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;
    use rrtsharp_core::nngraph::ConnectionRadius;
    use rrtsharp_core::{Point, SeededRng};

    #[test]
    fn small_examples() {
        let mut g = Adjacency::with_vertices(4);
        g.add_edge(0, 1, 1.0);
        g.add_edge(1, 2, 1.0);
        g.add_edge(0, 2, 3.0);
        let d = dijkstra(&g, VertexId(0));
        assert_eq!(d, vec![0.0, 1.0, 2.0, f64::INFINITY]);
        assert_eq!(bellman_ford(&g, VertexId(0)), d);
    }

    #[test]
    fn agrees_with_bellman_ford_on_random_disc_graphs() {
        let mut rng = SeededRng::new(8);
        for dim in [2, 3] {
            let mut graph = Graph::new(dim);
            for _ in 0..200 {
                let p: Vec<f64> = (0..dim).map(|_| rng.next_f64()).collect();
                graph.insert_vertex(Point::from(p));
            }
            let radius = ConnectionRadius::new(1.2, 1.0, dim).at(200);
            let mut adj = Adjacency::with_vertices(200);
            for u in graph.ids() {
                for v in graph.near_within(graph.vertex(u).position(), radius) {
                    if u < v {
                        let c = graph.vertex(u).position().distance(graph.vertex(v).position());
                        adj.add_edge(u.0, v.0, c);
                    }
                }
            }
            let a = dijkstra(&adj, VertexId(0));
            let b = bellman_ford(&adj, VertexId(0));
            assert!(a.iter().filter(|d| d.is_finite()).count() > 100);
            for (x, y) in a.iter().zip(&b) {
                assert!(x == y || (x - y).abs() <= 1e-12, "{x} vs {y}");
            }
        }
    }
}
