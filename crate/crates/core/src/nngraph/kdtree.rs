//! Incremental k-d tree. Node `i` is the `i`-th inserted point, which is also
//! the vertex id; points are never removed. A node splits on the axis after
//! its parent's, and a point equal to the splitting coordinate goes right.

use alloc::vec::Vec;

use crate::space::squared_distance;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub(crate) struct KdTree {
    dim: usize,
    coords: Vec<f64>,
    children: Vec<[u32; 2]>,
    axes: Vec<u8>,
}

impl KdTree {
    pub fn new(dim: usize) -> Self {
        KdTree {
            dim,
            coords: Vec::new(),
            children: Vec::new(),
            axes: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.children.len()
    }

    fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    fn axis(&self, i: usize) -> usize {
        self.axes[i] as usize
    }

    pub fn insert(&mut self, p: &[f64]) -> usize {
        debug_assert_eq!(p.len(), self.dim);
        debug_assert!(self.dim <= u8::MAX as usize);
        let id = self.len();
        assert!(id < NONE as usize, "k-d tree capacity exceeded");
        self.coords.extend_from_slice(p);
        self.children.push([NONE, NONE]);
        if id == 0 {
            self.axes.push(0);
            return id;
        }
        let mut node = 0usize;
        loop {
            let axis = self.axis(node);
            let side = usize::from(p[axis] >= self.point(node)[axis]);
            let child = self.children[node][side];
            if child == NONE {
                self.children[node][side] = id as u32;
                self.axes.push(((axis + 1) % self.dim) as u8);
                return id;
            }
            node = child as usize;
        }
    }

    /// Index of the point closest to `x`; ties go to the lowest index.
    pub fn nearest(&self, x: &[f64]) -> Option<usize> {
        if self.len() == 0 {
            return None;
        }
        let mut best = (f64::INFINITY, usize::MAX);
        let mut stack: Vec<(u32, f64)> = Vec::with_capacity(64);
        stack.push((0, 0.0));
        while let Some((node, bound)) = stack.pop() {
            if bound > best.0 {
                continue;
            }
            let node = node as usize;
            let p = self.point(node);
            let d2 = squared_distance(x, p);
            if d2 < best.0 || (d2 == best.0 && node < best.1) {
                best = (d2, node);
            }
            self.push_children(node, x, bound, &mut stack);
        }
        Some(best.1)
    }

    /// Indices of all points within `radius` of `x` (inclusive), excluding
    /// points exactly at `x`, in ascending order.
    pub fn within(&self, x: &[f64], radius: f64) -> Vec<usize> {
        let mut out = Vec::new();
        if self.len() == 0 || !(radius > 0.0) {
            return out;
        }
        let r2 = radius * radius;
        let mut stack: Vec<(u32, f64)> = Vec::with_capacity(64);
        stack.push((0, 0.0));
        while let Some((node, bound)) = stack.pop() {
            if bound > r2 {
                continue;
            }
            let node = node as usize;
            let d2 = squared_distance(x, self.point(node));
            if d2 <= r2 && d2 > 0.0 {
                out.push(node);
            }
            self.push_children(node, x, bound, &mut stack);
        }
        out.sort_unstable();
        out
    }

    /// Pushes the far child then the near child, each with a lower bound on
    /// the squared distance from `x` to anything in its subtree.
    fn push_children(&self, node: usize, x: &[f64], bound: f64, stack: &mut Vec<(u32, f64)>) {
        let axis = self.axis(node);
        let diff = x[axis] - self.point(node)[axis];
        let near_side = usize::from(diff >= 0.0);
        let far = self.children[node][1 - near_side];
        let near = self.children[node][near_side];
        if far != NONE {
            stack.push((far, bound.max(diff * diff)));
        }
        if near != NONE {
            stack.push((near, bound));
        }
    }
}
