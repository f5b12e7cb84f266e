//! Geometry of the planning problem: points, axis-aligned boxes, cost zones,
//! collision checking, cost integration, the goal heuristic and free-space
//! sampling.
//!
//! Obstacles are closed boxes but collisions are tested against their
//! interior, so a segment sliding along a face is free. Cost zones are
//! half-open (`min <= x < max` on every axis) and pairwise disjoint; outside
//! every zone the scenario's default coefficient applies.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::Deref;

use crate::error::{PlanError, ScenarioError};
use crate::rng::SeededRng;

/// Consecutive rejections `sample_free` tolerates before giving up.
pub const DEFAULT_SAMPLING_BUDGET: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn distance(&self, other: &[f64]) -> f64 {
        libm::sqrt(squared_distance(&self.0, other))
    }
}

impl Deref for Point {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Point {
    fn from(coords: Vec<f64>) -> Self {
        Point(coords)
    }
}

impl From<&[f64]> for Point {
    fn from(coords: &[f64]) -> Self {
        Point(coords.to_vec())
    }
}

impl<const N: usize> From<[f64; N]> for Point {
    fn from(coords: [f64; N]) -> Self {
        Point(coords.to_vec())
    }
}

pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxisBox {
    min: Point,
    max: Point,
}

impl AxisBox {
    pub fn new(min: Point, max: Point) -> Result<Self, ScenarioError> {
        if min.dim() != max.dim() {
            return Err(ScenarioError::new(
                "max",
                format!("has {} coordinates, min has {}", max.dim(), min.dim()),
            ));
        }
        if let Some(axis) = (0..min.dim()).find(|&i| !(min[i] < max[i])) {
            return Err(ScenarioError::new(
                "max",
                format!("must exceed min on every axis (axis {axis})"),
            ));
        }
        Ok(AxisBox { min, max })
    }

    pub fn min(&self) -> &Point {
        &self.min
    }

    pub fn max(&self) -> &Point {
        &self.max
    }

    pub fn dim(&self) -> usize {
        self.min.dim()
    }

    pub fn volume(&self) -> f64 {
        self.min
            .iter()
            .zip(self.max.iter())
            .map(|(lo, hi)| hi - lo)
            .product()
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.iter()
            .zip(self.min.iter().zip(self.max.iter()))
            .all(|(x, (lo, hi))| lo <= x && x <= hi)
    }

    pub fn contains_interior(&self, p: &[f64]) -> bool {
        p.iter()
            .zip(self.min.iter().zip(self.max.iter()))
            .all(|(x, (lo, hi))| lo < x && x < hi)
    }

    /// Half-open membership `min <= x < max`, used for cost zones.
    pub fn contains_half_open(&self, p: &[f64]) -> bool {
        p.iter()
            .zip(self.min.iter().zip(self.max.iter()))
            .all(|(x, (lo, hi))| lo <= x && x < hi)
    }

    pub fn contains_box(&self, other: &AxisBox) -> bool {
        self.contains(&other.min) && self.contains(&other.max)
    }

    pub fn interiors_overlap(&self, other: &AxisBox) -> bool {
        (0..self.dim()).all(|i| self.min[i] < other.max[i] && other.min[i] < self.max[i])
    }

    /// Nearest point of the box to `p` (coordinate-wise clamping).
    pub fn clamp(&self, p: &[f64]) -> Point {
        p.iter()
            .zip(self.min.iter().zip(self.max.iter()))
            .map(|(x, (lo, hi))| x.clamp(*lo, *hi))
            .collect::<Vec<_>>()
            .into()
    }

    pub fn distance_to(&self, p: &[f64]) -> f64 {
        let d2: f64 = p
            .iter()
            .zip(self.min.iter().zip(self.max.iter()))
            .map(|(x, (lo, hi))| {
                let d = if x < lo {
                    lo - x
                } else if x > hi {
                    x - hi
                } else {
                    0.0
                };
                d * d
            })
            .sum();
        libm::sqrt(d2)
    }

    /// Whether the closed segment `[a, b]` meets the open interior of the box.
    pub fn segment_hits_interior(&self, a: &[f64], b: &[f64]) -> bool {
        let mut t_lo = 0.0_f64;
        let mut t_hi = 1.0_f64;
        for i in 0..a.len() {
            let (lo, hi) = (self.min[i], self.max[i]);
            let d = b[i] - a[i];
            if d == 0.0 {
                if !(lo < a[i] && a[i] < hi) {
                    return false;
                }
            } else {
                let (t0, t1) = ordered((lo - a[i]) / d, (hi - a[i]) / d);
                t_lo = t_lo.max(t0);
                t_hi = t_hi.min(t1);
                if t_lo >= t_hi {
                    return false;
                }
            }
        }
        t_lo < t_hi
    }

    /// Fraction of the segment `[a, b]` lying inside the half-open box.
    fn clipped_fraction(&self, a: &[f64], b: &[f64]) -> f64 {
        let mut t_lo = 0.0_f64;
        let mut t_hi = 1.0_f64;
        for i in 0..a.len() {
            let (lo, hi) = (self.min[i], self.max[i]);
            let d = b[i] - a[i];
            if d == 0.0 {
                if !(lo <= a[i] && a[i] < hi) {
                    return 0.0;
                }
            } else {
                let (t0, t1) = ordered((lo - a[i]) / d, (hi - a[i]) / d);
                t_lo = t_lo.max(t0);
                t_hi = t_hi.min(t1);
                if t_lo >= t_hi {
                    return 0.0;
                }
            }
        }
        (t_hi - t_lo).max(0.0)
    }
}

fn ordered(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostZone {
    pub region: AxisBox,
    pub coefficient: f64,
}

impl CostZone {
    pub fn new(region: AxisBox, coefficient: f64) -> Result<Self, ScenarioError> {
        if !(coefficient > 0.0 && coefficient.is_finite()) {
            return Err(ScenarioError::new(
                "coefficient",
                format!("must be a positive finite number, got {coefficient}"),
            ));
        }
        Ok(CostZone {
            region,
            coefficient,
        })
    }
}

/// A validated planning problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    bounds: AxisBox,
    obstacles: Vec<AxisBox>,
    zones: Vec<CostZone>,
    x_init: Point,
    goal: AxisBox,
    default_coefficient: f64,
    min_coefficient: f64,
    max_coefficient: f64,
}

impl Scenario {
    pub fn new(
        bounds: AxisBox,
        obstacles: Vec<AxisBox>,
        zones: Vec<CostZone>,
        x_init: Point,
        goal: AxisBox,
    ) -> Result<Self, ScenarioError> {
        Self::with_default_coefficient(bounds, obstacles, zones, x_init, goal, 1.0)
    }

    pub fn with_default_coefficient(
        bounds: AxisBox,
        obstacles: Vec<AxisBox>,
        zones: Vec<CostZone>,
        x_init: Point,
        goal: AxisBox,
        default_coefficient: f64,
    ) -> Result<Self, ScenarioError> {
        let dim = bounds.dim();
        if dim < 2 {
            return Err(ScenarioError::new(
                "dimension",
                format!("must be at least 2, got {dim}"),
            ));
        }
        if !(default_coefficient > 0.0 && default_coefficient.is_finite()) {
            return Err(ScenarioError::new(
                "default_coefficient",
                "must be a positive finite number",
            ));
        }
        for (i, obstacle) in obstacles.iter().enumerate() {
            if obstacle.dim() != dim {
                return Err(ScenarioError::new(
                    format!("obstacles[{i}]"),
                    format!("has dimension {}, expected {dim}", obstacle.dim()),
                ));
            }
        }
        for (i, zone) in zones.iter().enumerate() {
            if !(zone.coefficient > 0.0 && zone.coefficient.is_finite()) {
                return Err(ScenarioError::new(
                    format!("zones[{i}].coefficient"),
                    "must be a positive finite number",
                ));
            }
            if zone.region.dim() != dim {
                return Err(ScenarioError::new(
                    format!("zones[{i}]"),
                    format!("has dimension {}, expected {dim}", zone.region.dim()),
                ));
            }
            for (j, other) in zones.iter().enumerate().take(i) {
                if zone.region.interiors_overlap(&other.region) {
                    return Err(ScenarioError::new(
                        format!("zones[{i}]"),
                        format!("overlaps zones[{j}]; cost zones must be disjoint"),
                    ));
                }
            }
        }
        if x_init.dim() != dim {
            return Err(ScenarioError::new(
                "x_init",
                format!("has dimension {}, expected {dim}", x_init.dim()),
            ));
        }
        if !bounds.contains(&x_init) {
            return Err(ScenarioError::new("x_init", "lies outside bounds"));
        }
        if let Some(i) = obstacles.iter().position(|o| o.contains_interior(&x_init)) {
            return Err(ScenarioError::new(
                "x_init",
                format!("lies inside obstacles[{i}]"),
            ));
        }
        if goal.dim() != dim {
            return Err(ScenarioError::new(
                "goal",
                format!("has dimension {}, expected {dim}", goal.dim()),
            ));
        }
        if !bounds.contains_box(&goal) {
            return Err(ScenarioError::new("goal", "is not contained in bounds"));
        }
        if let Some(i) = obstacles.iter().position(|o| o.interiors_overlap(&goal)) {
            return Err(ScenarioError::new(
                "goal",
                format!("intersects obstacles[{i}]"),
            ));
        }
        let coefficients = || {
            zones
                .iter()
                .map(|z| z.coefficient)
                .chain(core::iter::once(default_coefficient))
        };
        let min_coefficient = coefficients().fold(f64::INFINITY, f64::min);
        let max_coefficient = coefficients().fold(0.0, f64::max);
        Ok(Scenario {
            bounds,
            obstacles,
            zones,
            x_init,
            goal,
            default_coefficient,
            min_coefficient,
            max_coefficient,
        })
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    pub fn bounds(&self) -> &AxisBox {
        &self.bounds
    }

    pub fn obstacles(&self) -> &[AxisBox] {
        &self.obstacles
    }

    pub fn zones(&self) -> &[CostZone] {
        &self.zones
    }

    pub fn x_init(&self) -> &Point {
        &self.x_init
    }

    pub fn goal(&self) -> &AxisBox {
        &self.goal
    }

    pub fn default_coefficient(&self) -> f64 {
        self.default_coefficient
    }

    /// Smallest cost coefficient anywhere in the world.
    pub fn min_coefficient(&self) -> f64 {
        self.min_coefficient
    }

    pub fn max_coefficient(&self) -> f64 {
        self.max_coefficient
    }

    pub fn in_goal(&self, p: &[f64]) -> bool {
        self.goal.contains(p)
    }

    pub fn is_free(&self, p: &[f64]) -> bool {
        self.bounds.contains(p) && !self.obstacles.iter().any(|o| o.contains_interior(p))
    }

    /// Bounds volume minus the volume of the obstacles clipped to the bounds.
    /// Overlapping obstacles are counted once per obstacle.
    pub fn free_volume(&self) -> f64 {
        let blocked: f64 = self
            .obstacles
            .iter()
            .map(|o| {
                (0..self.dim())
                    .map(|i| {
                        let lo = o.min[i].max(self.bounds.min[i]);
                        let hi = o.max[i].min(self.bounds.max[i]);
                        (hi - lo).max(0.0)
                    })
                    .product::<f64>()
            })
            .sum();
        (self.bounds.volume() - blocked).max(0.0)
    }

    pub fn segment_obstacle_free(&self, a: &[f64], b: &[f64]) -> bool {
        !self.obstacles.iter().any(|o| o.segment_hits_interior(a, b))
    }

    /// Line integral of the cost coefficient along the segment `[a, b]`,
    /// computed exactly by clipping against every zone.
    pub fn edge_cost(&self, a: &[f64], b: &[f64]) -> f64 {
        // Evaluate in a canonical endpoint order so the cost is exactly symmetric.
        let (a, b) = if lexicographic(a, b) == Ordering::Greater {
            (b, a)
        } else {
            (a, b)
        };
        let length = libm::sqrt(squared_distance(a, b));
        if self.zones.is_empty() {
            return self.default_coefficient * length;
        }
        let mut inside = 0.0;
        let mut weighted = 0.0;
        for zone in &self.zones {
            let fraction = zone.region.clipped_fraction(a, b);
            if fraction > 0.0 {
                inside += fraction;
                weighted += zone.coefficient * fraction;
            }
        }
        let outside = (1.0 - inside).max(0.0);
        length * (weighted + self.default_coefficient * outside)
    }

    /// Admissible and consistent cost-to-go estimate: the smallest cost
    /// coefficient times the Euclidean distance to the goal box.
    pub fn heuristic(&self, x: &[f64]) -> f64 {
        self.min_coefficient * self.goal.distance_to(x)
    }

    pub fn sample_free(&self, rng: &mut SeededRng) -> Result<Point, PlanError> {
        self.sample_free_with_budget(rng, DEFAULT_SAMPLING_BUDGET)
    }

    /// Rejection sampling from the uniform distribution on the bounds.
    pub fn sample_free_with_budget(
        &self,
        rng: &mut SeededRng,
        budget: usize,
    ) -> Result<Point, PlanError> {
        let dim = self.dim();
        let mut coords = Vec::with_capacity(dim);
        for _ in 0..budget.max(1) {
            coords.clear();
            coords.extend((0..dim).map(|i| rng.uniform(self.bounds.min[i], self.bounds.max[i])));
            if !self.obstacles.iter().any(|o| o.contains_interior(&coords)) {
                return Ok(Point(coords));
            }
        }
        Err(PlanError::SamplingBudgetExhausted {
            rejections: budget.max(1),
        })
    }
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(Ordering::Equal) | None => continue,
            Some(ord) => return ord,
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn unit_box(dim: usize) -> AxisBox {
        AxisBox::new(Point::new(vec![0.0; dim]), Point::new(vec![1.0; dim])).unwrap()
    }

    fn boxed(min: [f64; 2], max: [f64; 2]) -> AxisBox {
        AxisBox::new(min.into(), max.into()).unwrap()
    }

    fn world(obstacles: Vec<AxisBox>, zones: Vec<CostZone>) -> Scenario {
        Scenario::new(
            boxed([0.0, 0.0], [10.0, 10.0]),
            obstacles,
            zones,
            [0.5, 0.5].into(),
            boxed([9.0, 9.0], [10.0, 10.0]),
        )
        .unwrap()
    }

    /// Five horizontal bands on the unit square.
    fn banded() -> Scenario {
        let band = |lo: f64, hi: f64, c: f64| CostZone::new(boxed([0.0, lo], [1.0, hi]), c).unwrap();
        Scenario::new(
            unit_box(2),
            vec![],
            vec![
                band(0.75, 0.9, 1.5),
                band(0.6, 0.75, 0.75),
                band(0.4, 0.6, 2.5),
                band(0.25, 0.4, 0.75),
                band(0.1, 0.25, 1.5),
            ],
            [0.1, 0.05].into(),
            boxed([0.85, 0.92], [0.95, 1.0]),
        )
        .unwrap()
    }

    /// Midpoint-rule integral of the coefficient field; independent of the
    /// clipping code.
    fn integrate_cost(s: &Scenario, a: &[f64], b: &[f64], steps: usize) -> f64 {
        let length = libm::sqrt(squared_distance(a, b));
        let mut total = 0.0;
        let mut p = vec![0.0; a.len()];
        for k in 0..steps {
            let t = (k as f64 + 0.5) / steps as f64;
            for i in 0..a.len() {
                p[i] = a[i] + t * (b[i] - a[i]);
            }
            let c = s
                .zones()
                .iter()
                .find(|z| z.region.contains_half_open(&p))
                .map_or(s.default_coefficient(), |z| z.coefficient);
            total += c;
        }
        total / steps as f64 * length
    }

    #[test]
    fn degenerate_box_is_rejected() {
        assert!(AxisBox::new([0.0, 0.0].into(), [1.0, 0.0].into()).is_err());
        assert!(AxisBox::new([0.0, 0.0].into(), [1.0, 1.0, 1.0].into()).is_err());
    }

    #[test]
    fn validation_names_fields() {
        let err = Scenario::new(
            unit_box(2),
            vec![boxed([0.0, 0.0], [0.5, 0.5])],
            vec![],
            [0.2, 0.2].into(),
            boxed([0.9, 0.9], [1.0, 1.0]),
        )
        .unwrap_err();
        assert_eq!(err.field, "x_init");

        let err = Scenario::new(
            unit_box(2),
            vec![boxed([0.8, 0.8], [0.95, 0.95])],
            vec![],
            [0.2, 0.2].into(),
            boxed([0.9, 0.9], [1.0, 1.0]),
        )
        .unwrap_err();
        assert_eq!(err.field, "goal");

        let zone = |lo, hi| CostZone::new(boxed([0.0, lo], [1.0, hi]), 2.0).unwrap();
        let err = Scenario::new(
            unit_box(2),
            vec![],
            vec![zone(0.1, 0.3), zone(0.2, 0.4)],
            [0.0, 0.0].into(),
            boxed([0.9, 0.9], [1.0, 1.0]),
        )
        .unwrap_err();
        assert_eq!(err.field, "zones[1]");

        // Touching zones are fine.
        Scenario::new(
            unit_box(2),
            vec![],
            vec![zone(0.1, 0.3), zone(0.3, 0.4)],
            [0.0, 0.0].into(),
            boxed([0.9, 0.9], [1.0, 1.0]),
        )
        .unwrap();

        let err = Scenario::new(
            AxisBox::new([0.0].into(), [1.0].into()).unwrap(),
            vec![],
            vec![],
            [0.0].into(),
            AxisBox::new([0.5].into(), [1.0].into()).unwrap(),
        )
        .unwrap_err();
        assert_eq!(err.field, "dimension");

        assert!(CostZone::new(unit_box(2), 0.0).is_err());
    }

    #[test]
    fn sample_in_empty_unit_square() {
        let s = Scenario::new(
            unit_box(2),
            vec![],
            vec![],
            [0.1, 0.1].into(),
            boxed([0.9, 0.9], [1.0, 1.0]),
        )
        .unwrap();
        for seed in 0..50 {
            let p = s.sample_free(&mut SeededRng::new(seed)).unwrap();
            assert!(p.iter().all(|c| (0.0..=1.0).contains(c)));
            let q = s.sample_free(&mut SeededRng::new(seed)).unwrap();
            assert_eq!(p, q);
        }
    }

    #[test]
    fn sampling_budget_exhausts_on_blocked_world() {
        // Everything but a sliver of height 1e-6 along the top edge is blocked.
        let s = Scenario::new(
            unit_box(2),
            vec![boxed([-1.0, -1.0], [2.0, 1.0 - 1e-6])],
            vec![],
            [0.5, 1.0].into(),
            boxed([0.0, 1.0 - 1e-6], [1.0, 1.0]),
        )
        .unwrap();
        let err = s
            .sample_free_with_budget(&mut SeededRng::new(3), 100)
            .unwrap_err();
        assert_eq!(err, PlanError::SamplingBudgetExhausted { rejections: 100 });
    }

    /// One obstacle covers 90% of the unit square; the free strip is
    /// `x in [0.9, 1]`. The rejection sampler must be uniform on the strip:
    /// chi-square over a 10x10 grid of the strip, compared against the same
    /// statistic for direct uniform sampling of the strip.
    #[test]
    fn rejection_sampling_is_uniform_over_free_strip() {
        let s = Scenario::new(
            unit_box(2),
            vec![boxed([-0.1, -0.1], [0.9, 1.1])],
            vec![],
            [0.95, 0.5].into(),
            boxed([0.95, 0.9], [1.0, 1.0]),
        )
        .unwrap();
        let draws = 100_000;
        let chi2 = |counts: &[u32]| {
            let expected = draws as f64 / counts.len() as f64;
            counts
                .iter()
                .map(|&c| (c as f64 - expected).powi(2) / expected)
                .sum::<f64>()
        };
        let cell = |x: f64, y: f64| {
            let i = (((x - 0.9) / 0.1 * 10.0) as usize).min(9);
            let j = ((y * 10.0) as usize).min(9);
            i * 10 + j
        };
        let mut rng = SeededRng::new(11);
        let mut counts = vec![0u32; 100];
        for _ in 0..draws {
            let p = s.sample_free(&mut rng).unwrap();
            assert!(p[0] >= 0.9);
            counts[cell(p[0], p[1])] += 1;
        }
        let mut direct_rng = SeededRng::new(12);
        let mut direct = vec![0u32; 100];
        for _ in 0..draws {
            let x = direct_rng.uniform(0.9, 1.0);
            let y = direct_rng.uniform(0.0, 1.0);
            direct[cell(x, y)] += 1;
        }
        // 99th percentile of chi-square with 99 degrees of freedom.
        let critical = 134.64;
        assert!(chi2(&counts) < critical, "chi2 = {}", chi2(&counts));
        assert!(chi2(&direct) < critical, "direct chi2 = {}", chi2(&direct));
    }

    #[test]
    fn segment_checks() {
        let empty = world(vec![], vec![]);
        assert!(empty.segment_obstacle_free(&[0.0, 0.0], &[10.0, 10.0]));

        let unit = Scenario::new(
            unit_box(2),
            vec![boxed([0.4, 0.4], [0.6, 0.6])],
            vec![],
            [0.0, 0.0].into(),
            boxed([0.9, 0.9], [1.0, 1.0]),
        )
        .unwrap();
        assert!(!unit.segment_obstacle_free(&[0.0, 0.0], &[1.0, 1.0]));
        // Sliding along a face or touching a corner is free.
        assert!(unit.segment_obstacle_free(&[0.4, 0.0], &[0.4, 1.0]));
        assert!(unit.segment_obstacle_free(&[0.0, 0.8], &[0.8, 0.0]));
        assert!(unit.segment_obstacle_free(&[0.0, 1.0], &[1.0, 0.4]));
        assert!(!unit.segment_obstacle_free(&[0.0, 1.0], &[1.0, 0.2]));
        assert!(unit.segment_obstacle_free(&[0.2, 0.6], &[0.4, 0.8]));
        // Segment ending inside the box.
        assert!(!unit.segment_obstacle_free(&[0.0, 0.5], &[0.5, 0.5]));
        // Segment ending on the face.
        assert!(unit.segment_obstacle_free(&[0.0, 0.5], &[0.4, 0.5]));
    }

    /// Random segments against a dense point-sampling oracle: 1,000 interior
    /// points per segment tested for strict containment.
    #[test]
    fn segment_check_matches_dense_sampling() {
        let obstacles = vec![
            boxed([2.0, 2.0], [4.0, 5.0]),
            boxed([6.0, 1.0], [7.0, 8.0]),
            boxed([1.0, 7.0], [5.0, 7.5]),
        ];
        let s = world(obstacles.clone(), vec![]);
        let mut rng = SeededRng::new(5);
        let mut checked = 0;
        for _ in 0..1000 {
            let a: Vec<f64> = (0..2).map(|_| rng.uniform(0.0, 10.0)).collect();
            let b: Vec<f64> = (0..2).map(|_| rng.uniform(0.0, 10.0)).collect();
            let samples = 1000;
            let hits = (0..=samples)
                .filter(|k| {
                    let t = *k as f64 / samples as f64;
                    let p = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
                    obstacles.iter().any(|o| o.contains_interior(&p))
                })
                .count();
            // Grazing cases: fewer than two sample hits are ambiguous at this
            // resolution.
            if hits == 1 {
                continue;
            }
            checked += 1;
            assert_eq!(s.segment_obstacle_free(&a, &b), hits == 0, "{a:?} -> {b:?}");
        }
        assert!(checked > 950);
    }

    #[test]
    fn euclidean_cost_without_zones() {
        let s = world(vec![], vec![]);
        assert_eq!(s.edge_cost(&[0.0, 0.0], &[3.0, 4.0]), 5.0);
    }

    #[test]
    fn cost_inside_single_zone() {
        let zone = CostZone::new(boxed([0.0, 0.0], [5.0, 5.0]), 2.5).unwrap();
        let s = world(vec![], vec![zone]);
        assert_eq!(s.edge_cost(&[1.0, 1.0], &[3.0, 1.0]), 5.0);
    }

    #[test]
    fn cost_across_zone_boundary_matches_integration() {
        let s = banded();
        let segments = [
            ([0.2, 0.2], [0.3, 0.7]),
            ([0.1, 0.05], [0.9, 0.95]),
            ([0.5, 0.55], [0.52, 0.65]),
            ([0.0, 0.3], [1.0, 0.3]),
        ];
        for (a, b) in segments {
            let exact = s.edge_cost(&a, &b);
            let numeric = integrate_cost(&s, &a, &b, 10_000_000);
            assert!(
                (exact - numeric).abs() <= 1e-6,
                "{a:?}->{b:?}: {exact} vs {numeric}"
            );
        }
    }

    #[test]
    fn heuristic_examples() {
        let goal = boxed([3.0, 4.0], [5.0, 6.0]);
        let s = Scenario::new(
            boxed([0.0, 0.0], [10.0, 10.0]),
            vec![],
            vec![],
            [0.0, 0.0].into(),
            goal.clone(),
        )
        .unwrap();
        assert_eq!(s.heuristic(&[0.0, 0.0]), 5.0);
        assert_eq!(s.heuristic(&[4.0, 5.0]), 0.0);
        assert_eq!(s.heuristic(&[5.0, 6.0]), 0.0);

        let zoned = Scenario::new(
            boxed([0.0, 0.0], [10.0, 10.0]),
            vec![],
            vec![CostZone::new(boxed([6.0, 0.0], [7.0, 10.0]), 0.75).unwrap()],
            [0.0, 0.0].into(),
            goal,
        )
        .unwrap();
        assert_eq!(zoned.min_coefficient(), 0.75);
        assert_eq!(zoned.heuristic(&[0.0, 0.0]), 3.75);
    }

    #[test]
    fn free_volume_subtracts_obstacles() {
        let s = world(vec![boxed([2.0, 2.0], [4.0, 5.0]), boxed([9.0, 0.0], [11.0, 1.0])], vec![]);
        assert_eq!(s.free_volume(), 100.0 - 6.0 - 1.0);
    }

    fn point2() -> impl Strategy<Value = [f64; 2]> {
        [0.0..1.0f64, 0.0..1.0f64]
    }

    proptest! {
        #[test]
        fn cost_is_symmetric(a in point2(), b in point2()) {
            let s = banded();
            prop_assert_eq!(s.edge_cost(&a, &b), s.edge_cost(&b, &a));
        }

        #[test]
        fn cost_is_bounded_by_coefficients(a in point2(), b in point2()) {
            let s = banded();
            let length = libm::sqrt(squared_distance(&a, &b));
            let c = s.edge_cost(&a, &b);
            let slack = 1e-12 * (1.0 + length);
            prop_assert!(c >= s.min_coefficient() * length - slack);
            prop_assert!(c <= s.max_coefficient() * length + slack);
        }

        #[test]
        fn triangle_inequality_without_zones(a in point2(), b in point2(), c in point2()) {
            let s = Scenario::new(unit_box(2), vec![], vec![], [0.0, 0.0].into(),
                boxed([0.9, 0.9], [1.0, 1.0])).unwrap();
            prop_assert!(s.edge_cost(&a, &c) <= s.edge_cost(&a, &b) + s.edge_cost(&b, &c) + 1e-12);
        }

        /// The heuristic never exceeds the cost of a polyline that ends in the goal.
        #[test]
        fn heuristic_lower_bounds_polylines(
            start in point2(),
            waypoints in proptest::collection::vec(point2(), 0..4),
            end in [0.85..0.95f64, 0.92..1.0f64],
        ) {
            let s = banded();
            let mut path = vec![start];
            path.extend(waypoints);
            path.push(end);
            let cost: f64 = path.windows(2).map(|w| s.edge_cost(&w[0], &w[1])).sum();
            prop_assert!(s.heuristic(&start) <= cost + 1e-12);
        }

        #[test]
        fn samples_are_free(seed in any::<u64>()) {
            let s = world(vec![boxed([2.0, 2.0], [4.0, 5.0]), boxed([5.0, 0.0], [6.0, 9.0])], vec![]);
            let mut rng = SeededRng::new(seed);
            for _ in 0..20 {
                let p = s.sample_free(&mut rng).unwrap();
                prop_assert!(s.is_free(&p));
            }
        }
    }
}
