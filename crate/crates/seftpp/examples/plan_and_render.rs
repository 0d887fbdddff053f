//! Plan a bundled scenario and emit the path, planner statistics, and an
//! SVG rendering with tether snapshots and the relative-angle strip chart.

use std::path::{Path, PathBuf};

use seftpp::planner::{plan, validate_path, Strategy};
use seftpp::scenario::Scenario;
use seftpp::svg::render_svg;

fn scenario_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn main() {
    let case = std::env::args().nth(1).unwrap_or_else(|| "case1".into());
    let sc = Scenario::load(&scenario_path(&format!("{case}.toml"))).unwrap();
    let result = plan(&sc, Strategy::Improved).unwrap();

    println!("{case}: {} poses, cost to goal via {} expansions", result.path.len(), result.stats.expanded);
    println!("  generated nodes    {}", result.stats.generated);
    println!("  guaranteed prims   {}", result.stats.guaranteed_primitives);
    println!("  checked prims      {}", result.stats.checked_primitives);
    println!("  wall time          {:.0} ms", result.stats.wall_time_ms);

    let report = validate_path(&sc, &result.path, 0.05).unwrap();
    println!("  referee            all conditions ok: {}", report.all_ok());

    let svg_file = std::env::temp_dir().join(format!("seftpp_{case}.svg"));
    std::fs::write(&svg_file, render_svg(&sc, &result)).unwrap();
    println!("  svg written to     {}", svg_file.display());
}
