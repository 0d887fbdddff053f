//! Small benchmark sweep over primitive lengths and waypoint resolutions,
//! comparing the dense and improved expansion strategies. SEFTPP_THREADS
//! caps worker parallelism.

use std::path::{Path, PathBuf};

use seftpp::bench::{render_table, run_bench, BenchConfig};
use seftpp::planner::Strategy;

fn main() {
    let cfg = BenchConfig {
        scenarios: vec![scenario_path("case1.toml")],
        primitive_lengths: vec![2.0, 3.0, 4.0],
        waypoint_resolutions: vec![1.0, 0.4],
        repetitions: 3,
        strategies: vec![Strategy::Normal, Strategy::Improved],
    };
    let rows = run_bench(&cfg).unwrap();
    print!("{}", render_table(&rows));

    // Same cell, different strategy: counts agree, only timing differs.
    for pair in rows.chunks(2) {
        assert_eq!(pair[0].expanded, pair[1].expanded);
        assert_eq!(pair[0].generated, pair[1].generated);
    }
    println!("\nstrategy pairs agree on all count columns");
}

fn scenario_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}
