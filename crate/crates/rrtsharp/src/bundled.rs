//! Scenarios compiled into the binary. The CLI accepts them as
//! `--scenario bundled:<name>`.
//!
//! The 2D set covers an empty square, three walls, forty small obstacles and
//! five horizontal cost bands (coefficients 1.5, 0.75, 2.5, 0.75, 1.5). The
//! 5D set is an empty hypercube and one with thirty hypercube obstacles.
//! All geometry is synthetic.

use rrtsharp_core::Scenario;

use crate::scenario_file::{parse_scenario, LoadError};

macro_rules! bundle {
    ($($name:literal),* $(,)?) => {
        pub const NAMES: &[&str] = &[$($name),*];

        pub fn source(name: &str) -> Option<&'static str> {
            match name {
                $($name => Some(include_str!(concat!("../scenarios/", $name, ".json"))),)*
                _ => None,
            }
        }
    };
}

bundle!(
    "pt1_empty_2d",
    "pt2_boxes_2d",
    "pt3_cluttered_2d",
    "pt4_zones_2d",
    "pt1_empty_5d",
    "pt2_hypercubes_5d",
);

pub fn load(name: &str) -> Result<Scenario, LoadError> {
    let text = source(name).ok_or_else(|| LoadError::UnknownBundled(name.to_string()))?;
    parse_scenario(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_bundled_scenarios_validate() {
        for name in NAMES {
            let s = load(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(s.free_volume() > 0.5 * s.bounds().volume(), "{name}");
        }
        assert!(load("nope").is_err());
    }

    #[test]
    fn hypercube_obstacles_do_not_overlap() {
        // The free volume subtracts obstacle volumes, which is exact only
        // for disjoint obstacles.
        let s = load("pt2_hypercubes_5d").unwrap();
        let obs = s.obstacles();
        for i in 0..obs.len() {
            for j in i + 1..obs.len() {
                assert!(!obs[i].interiors_overlap(&obs[j]), "{i} and {j}");
            }
        }
    }
}
