use rrtsharp::bench::{self, Experiment};
use rrtsharp::bundled;
use rrtsharp_core::planner::{AlgorithmVariant, InclusionRule, Planner, PlannerParams, RrtSharp};
use rrtsharp_core::SeededRng;

use AlgorithmVariant::*;

fn empty_world(trials: usize, iterations: usize) -> Experiment {
    Experiment::new(bundled::load("pt1_empty_2d").unwrap(), trials, iterations, 9)
}

#[test]
fn single_trial_stats_equal_its_history() {
    let exp = empty_world(1, 400).with_stride(50);
    let runs = bench::run_trials(&exp, &[RrtSharpV0]);
    let r = &runs[&RrtSharpV0];
    assert_eq!(r.stats.grid.len(), exp.grid().len());
    for point in &r.stats.grid {
        let sample = r.records[0].history.at(point.iteration).unwrap();
        if sample.best_cost.is_finite() {
            assert_eq!(point.mean_cost, sample.best_cost);
            assert_eq!(point.variance, 0.0);
        } else {
            assert_eq!(point.unsolved, 1);
        }
    }
}

#[test]
fn statistics_ignore_trial_order() {
    let exp = empty_world(6, 600).with_stride(100);
    let runs = bench::run_trials(&exp, &[RrtSharpV2]);
    let mut records = runs[&RrtSharpV2].records.clone();
    records.reverse();
    records.swap(0, 3);
    let shuffled = bench::aggregate(&exp, &records, 0);
    for (a, b) in shuffled.grid.iter().zip(&runs[&RrtSharpV2].stats.grid) {
        assert_eq!(a.mean_cost.to_bits(), b.mean_cost.to_bits());
        assert_eq!(a.variance.to_bits(), b.variance.to_bits());
        assert_eq!(a.solved, b.solved);
    }
}

#[test]
fn rrtstar_time_ratio_is_one() {
    let exp = empty_world(2, 300).with_stride(100);
    let ratios = bench::time_ratio(&exp, &[RrtStar]);
    let points: Vec<usize> = ratios[&RrtStar].iter().map(|&(it, _)| it).collect();
    assert_eq!(points, [100, 200, 300]);
    assert!(ratios[&RrtStar].iter().all(|&(_, r)| r == 1.0));
}

#[test]
fn three_variant_smoke_emits_the_full_grid() {
    let exp = empty_world(5, 1000).with_stride(100);
    let variants = [RrtStar, RrtSharpV0, RrtSharpV3];
    let runs = bench::run_trials(&exp, &variants);
    let ratios = bench::time_ratio(&exp, &variants);
    for v in variants {
        assert_eq!(runs[&v].stats.grid.len(), 11, "{v}");
        assert_eq!(runs[&v].records.len(), 5);
        assert_eq!(ratios[&v].len(), 10);
        assert!(ratios[&v].iter().all(|&(_, r)| r > 0.0 && r.is_finite()), "{v}");
    }
    let csv = bench::stats_csv(&runs);
    assert_eq!(csv.lines().count(), 1 + 3 * 11);
}

#[test]
fn empty_world_means_converge() {
    let exp = empty_world(10, 5000).with_stride(1000);
    let optimum = bench::straight_line_optimum(&exp.scenario).unwrap();
    assert!((optimum - 0.8 * std::f64::consts::SQRT_2).abs() < 1e-12);
    let runs = bench::run_trials(&exp, &[RrtSharpV0, RrtSharpV3]);
    for (v, r) in &runs {
        let last = r.stats.grid.last().unwrap();
        assert_eq!(last.unsolved, 0, "{v}");
        assert!(last.mean_cost <= optimum * 1.03, "{v}: {}", last.mean_cost);
        assert!(last.mean_cost >= optimum);
        let (norm_mean, _) = last.normalized.unwrap();
        assert!((norm_mean - last.mean_cost / optimum).abs() < 1e-9);
    }
}

#[test]
fn random_snapshots_verify_clean() {
    let scenarios = ["pt2_boxes_2d", "pt3_cluttered_2d", "pt4_zones_2d", "pt2_hypercubes_5d"];
    let rules = [
        InclusionRule::Always,
        InclusionRule::HasParent,
        InclusionRule::PromisingParent,
        InclusionRule::PromisingVertex,
    ];
    let mut pick = SeededRng::new(123);
    for k in 0..50 {
        let scenario = bundled::load(scenarios[k % scenarios.len()]).unwrap();
        let params = PlannerParams::for_scenario(&scenario);
        let mut p = RrtSharp::new(scenario, rules[k % 4], params, SeededRng::new(k as u64));
        let stop = 1 + (pick.next_u64() % 1500) as usize;
        for _ in 0..stop {
            p.step().unwrap();
        }
        let report = bench::verify_consistency(&p);
        assert!(report.ok(), "snapshot {k} at {stop}: {:?}", report.violations);
        assert!(bench::verify_against_dijkstra(&p).is_empty(), "snapshot {k}");
    }
}
