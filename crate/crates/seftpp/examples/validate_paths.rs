//! The independent path referee: replay a path with a fresh tether
//! simulation and report each validity condition. A planned path passes;
//! the same path with an in-place pirouette fails the entanglement check.

use std::path::{Path, PathBuf};

use seftpp::planner::{plan, validate_path, Strategy};
use seftpp::scenario::Scenario;

fn scenario_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn main() {
    let sc = Scenario::load(&scenario_path("case3.toml")).unwrap();
    let result = plan(&sc, Strategy::Improved).unwrap();

    let report = validate_path(&sc, &result.path, 0.05).unwrap();
    println!("planned path: all conditions ok = {}", report.all_ok());
    assert!(report.all_ok());

    // Splice a full in-place rotation into the middle of the path. The
    // rear-mounted anchor sweeps the tether across the body: SEF must fail.
    let mut twisted = result.path.clone();
    let mid = twisted.len() / 2;
    let pivot = twisted[mid];
    for k in 1..=16 {
        let mut p = pivot;
        p.theta += 2.0 * std::f64::consts::PI * k as f64 / 16.0;
        twisted.insert(mid + k, p);
    }
    let report = validate_path(&sc, &twisted, 0.05).unwrap();
    println!(
        "path with spliced 2-pi spin: sef ok = {}, first violation at arc length {:?}",
        report.sef.ok, report.sef.first_violation
    );
    assert!(!report.sef.ok);
}
