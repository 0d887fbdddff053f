//! Run the dense and the sparsity-improved node expansion on the same
//! scenario and confirm they return identical paths while the improved
//! strategy skips most per-waypoint validity loops.

use std::path::{Path, PathBuf};
use std::time::Instant;

use seftpp::planner::{plan, Strategy};
use seftpp::scenario::Scenario;

fn scenario_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn main() {
    let res: f64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0.4);
    for case in ["case1", "case2", "case3"] {
        let mut sc = Scenario::load(&scenario_path(&format!("{case}.toml"))).unwrap();
        sc.waypoint_resolution = res;

        let t = Instant::now();
        let normal = plan(&sc, Strategy::Normal).unwrap();
        let t_normal = t.elapsed().as_secs_f64();

        let t = Instant::now();
        let improved = plan(&sc, Strategy::Improved).unwrap();
        let t_improved = t.elapsed().as_secs_f64();

        assert_eq!(normal.path, improved.path, "strategies must agree");
        assert_eq!(normal.stats.expanded, improved.stats.expanded);

        let g = improved.stats.guaranteed_primitives as f64;
        let c = improved.stats.checked_primitives as f64;
        println!(
            "{case} @ res {res}: identical path ({} poses), normal {t_normal:.2}s, \
             improved {t_improved:.2}s ({:.2}x), guaranteed fraction {:.3}",
            normal.path.len(),
            t_improved / t_normal,
            g / (g + c),
        );
    }
}
