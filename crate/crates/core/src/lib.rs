//! Sampling-based motion planning with consistent spanning trees.
//!
//! The crate implements the RRT# planner together with its three
//! vertex-rejection variants and an RRT* baseline that shares the same
//! primitives (sampler, steering, collision checking, cost model and
//! connection radius). It is `no_std` and only needs `alloc`; file formats,
//! wall-clock timing and the benchmark harness live in the `rrtsharp` crate.
//!
//! ```
//! use rrtsharp_core::planner::{plan, AlgorithmVariant};
//! use rrtsharp_core::space::{AxisBox, Point, Scenario};
//!
//! let bounds = AxisBox::new(Point::from([0.0, 0.0]), Point::from([1.0, 1.0])).unwrap();
//! let goal = AxisBox::new(Point::from([0.9, 0.9]), Point::from([1.0, 1.0])).unwrap();
//! let scenario = Scenario::new(bounds, vec![], vec![], Point::from([0.1, 0.1]), goal).unwrap();
//! let result = plan(&scenario, AlgorithmVariant::RrtSharpV0, 2_000, 7, 10).unwrap();
//! assert!(result.best_cost.is_finite());
//! ```
#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod error;
pub mod nngraph;
pub mod planner;
pub mod pqueue;
pub mod rng;
pub mod space;

pub use error::{InvariantViolation, PlanError, ScenarioError};
pub use nngraph::{Graph, VertexId};
pub use pqueue::{IndexedQueue, Key};
pub use rng::SeededRng;
pub use space::{AxisBox, CostZone, Point, Scenario};
