//! Scenario files, graph dumps, shortest-path oracles, Monte Carlo
//! benchmarking and the command-line driver for the planners in
//! [`rrtsharp_core`].

pub mod bench;
pub mod bundled;
pub mod cli;
pub mod dump;
pub mod oracle;
pub mod scenario_file;
