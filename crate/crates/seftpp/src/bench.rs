//! Benchmark sweep over primitive lengths, waypoint resolutions, and
//! expansion strategies. Each cell is an independent plan call repeated
//! `repetitions` times; wall time is averaged, counts are deterministic.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::planner::{plan, Strategy};
use crate::primitives::default_primitive_set;
use crate::scenario::Scenario;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub scenarios: Vec<PathBuf>,
    #[serde(default = "default_lengths")]
    pub primitive_lengths: Vec<f64>,
    #[serde(default = "default_resolutions")]
    pub waypoint_resolutions: Vec<f64>,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default = "default_strategies")]
    pub strategies: Vec<Strategy>,
}

fn default_lengths() -> Vec<f64> {
    vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]
}

fn default_resolutions() -> Vec<f64> {
    vec![1.0, 0.7, 0.4, 0.1]
}

fn default_repetitions() -> usize {
    20
}

fn default_strategies() -> Vec<Strategy> {
    vec![Strategy::Normal, Strategy::Improved]
}

impl BenchConfig {
    /// Parse from TOML; scenario paths are taken relative to the config file.
    pub fn load(path: &Path) -> Result<BenchConfig, Error> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg: BenchConfig = toml::from_str(&text)
            .map_err(|e| Error::scenario("bench config", e.to_string()))?;
        let dir = path.parent().unwrap_or_else(|| Path::new("."));
        for s in &mut cfg.scenarios {
            if s.is_relative() {
                *s = dir.join(&s);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.scenarios.is_empty() {
            return Err(Error::scenario("scenarios", "at least one scenario required"));
        }
        if self.repetitions == 0 {
            return Err(Error::scenario("repetitions", "must be >= 1"));
        }
        if self.primitive_lengths.iter().any(|&l| !(l > 0.0)) {
            return Err(Error::scenario("primitive_lengths", "all lengths must be > 0"));
        }
        if self.waypoint_resolutions.iter().any(|&r| !(r > 0.0)) {
            return Err(Error::scenario("waypoint_resolutions", "all resolutions must be > 0"));
        }
        if self.strategies.is_empty() {
            return Err(Error::scenario("strategies", "at least one strategy required"));
        }
        Ok(())
    }
}

/// One (scenario, length, resolution, strategy) cell of the sweep.
#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub scenario: String,
    pub primitive_length: f64,
    pub waypoint_resolution: f64,
    pub strategy: Strategy,
    pub ok: bool,
    /// Empty when ok; otherwise the planner error for this cell.
    pub note: String,
    pub mean_time_ms: f64,
    pub expanded: u64,
    pub generated: u64,
    pub guaranteed: u64,
    pub checked: u64,
    pub guaranteed_fraction: f64,
}

fn worker_count(cells: usize) -> usize {
    let avail = std::thread::available_parallelism().map_or(1, |n| n.get());
    let cap = std::env::var("SEFTPP_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(avail);
    cap.min(avail).min(cells.max(1))
}

fn run_cell(sc: &Scenario, length: f64, res: f64, strategy: Strategy, reps: usize) -> BenchRow {
    let kappa_max = sc
        .primitives
        .iter()
        .map(|m| m.kappa.abs())
        .fold(0.0, f64::max);
    let mut sc = sc.clone();
    sc.primitives = default_primitive_set(kappa_max, length);
    sc.waypoint_resolution = res;

    let mut row = BenchRow {
        scenario: String::new(),
        primitive_length: length,
        waypoint_resolution: res,
        strategy,
        ok: false,
        note: String::new(),
        mean_time_ms: 0.0,
        expanded: 0,
        generated: 0,
        guaranteed: 0,
        checked: 0,
        guaranteed_fraction: 0.0,
    };

    let mut total = 0.0;
    for _ in 0..reps {
        let t = Instant::now();
        match plan(&sc, strategy) {
            Ok(r) => {
                total += t.elapsed().as_secs_f64() * 1e3;
                row.expanded = r.stats.expanded;
                row.generated = r.stats.generated;
                row.guaranteed = r.stats.guaranteed_primitives;
                row.checked = r.stats.checked_primitives;
            }
            Err(e) => {
                row.note = e.to_string();
                return row;
            }
        }
    }
    row.ok = true;
    row.mean_time_ms = total / reps as f64;
    let denom = (row.guaranteed + row.checked) as f64;
    if denom > 0.0 {
        row.guaranteed_fraction = row.guaranteed as f64 / denom;
    }
    row
}

/// Run the full sweep. Cells execute in parallel, capped by SEFTPP_THREADS;
/// a cell that fails to plan is marked failed and the sweep continues.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>, Error> {
    cfg.validate()?;
    let mut scenarios = Vec::new();
    for path in &cfg.scenarios {
        let name = path
            .file_stem()
            .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into());
        scenarios.push((name, Scenario::load(path)?));
    }

    let mut cells = Vec::new();
    for (name, sc) in &scenarios {
        for &length in &cfg.primitive_lengths {
            for &res in &cfg.waypoint_resolutions {
                for &strategy in &cfg.strategies {
                    cells.push((name.as_str(), sc, length, res, strategy));
                }
            }
        }
    }

    let next = AtomicUsize::new(0);
    let rows: Mutex<Vec<Option<BenchRow>>> = Mutex::new(vec![None; cells.len()]);
    std::thread::scope(|scope| {
        for _ in 0..worker_count(cells.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(name, sc, length, res, strategy)) = cells.get(i) else {
                    break;
                };
                let mut row = run_cell(sc, length, res, strategy, cfg.repetitions);
                row.scenario = name.to_string();
                rows.lock().unwrap()[i] = Some(row);
            });
        }
    });
    Ok(rows.into_inner().unwrap().into_iter().flatten().collect())
}

/// Aligned-text table, one line per cell in sweep order.
pub fn render_table(rows: &[BenchRow]) -> String {
    let header = [
        "scenario", "len", "res", "strategy", "time-ms", "expanded", "generated", "guaranteed",
        "checked", "fraction", "status",
    ];
    let mut grid: Vec<[String; 11]> = vec![header.map(String::from)];
    for r in rows {
        let status = if r.ok {
            "ok".to_string()
        } else {
            format!("failed: {}", r.note)
        };
        grid.push([
            r.scenario.clone(),
            format!("{:.2}", r.primitive_length),
            format!("{:.2}", r.waypoint_resolution),
            format!("{:?}", r.strategy).to_lowercase(),
            format!("{:.1}", r.mean_time_ms),
            r.expanded.to_string(),
            r.generated.to_string(),
            r.guaranteed.to_string(),
            r.checked.to_string(),
            format!("{:.4}", r.guaranteed_fraction),
            status,
        ]);
    }
    let mut widths = [0usize; 11];
    for row in &grid {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for row in &grid {
        let mut line = String::new();
        for (w, cell) in widths.iter().zip(row) {
            if !line.is_empty() {
                line.push_str("  ");
            }
            line.push_str(&format!("{cell:<w$}"));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_produces_one_row_per_cell() {
        let dir = tempfile::tempdir().unwrap();
        let cfg_path = dir.path().join("bench.toml");
        std::fs::write(
            &cfg_path,
            format!(
                "scenarios = [{:?}]\n\
                 primitive_lengths = [2.0, 3.0]\n\
                 waypoint_resolutions = [1.0]\n\
                 repetitions = 1\n",
                crate_root().join("scenarios/case1.toml")
            ),
        )
        .unwrap();
        let cfg = BenchConfig::load(&cfg_path).unwrap();
        let rows = run_bench(&cfg).unwrap();
        assert_eq!(rows.len(), 2 * 1 * 2);
        for r in &rows {
            assert!(r.ok, "cell failed: {}", r.note);
            assert!(r.expanded > 0);
        }
    }

    #[test]
    fn strategies_agree_on_counts_in_same_cell() {
        let cfg = BenchConfig {
            scenarios: vec![crate_root().join("scenarios/case1.toml")],
            primitive_lengths: vec![3.0],
            waypoint_resolutions: vec![1.0],
            repetitions: 1,
            strategies: vec![Strategy::Normal, Strategy::Improved],
        };
        let rows = run_bench(&cfg).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].expanded, rows[1].expanded);
        assert_eq!(rows[0].generated, rows[1].generated);
    }

    #[test]
    fn config_rejects_bad_fields() {
        let mut cfg = BenchConfig {
            scenarios: vec![crate_root().join("scenarios/case1.toml")],
            primitive_lengths: default_lengths(),
            waypoint_resolutions: default_resolutions(),
            repetitions: 2,
            strategies: default_strategies(),
        };
        cfg.repetitions = 0;
        assert!(cfg.validate().is_err());
        cfg.repetitions = 1;
        cfg.primitive_lengths = vec![0.0];
        assert!(cfg.validate().is_err());
        cfg.primitive_lengths = vec![1.0];
        cfg.waypoint_resolutions = vec![-0.5];
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn table_is_aligned_and_marks_failures() {
        let rows = vec![BenchRow {
            scenario: "case1".into(),
            primitive_length: 3.0,
            waypoint_resolution: 1.0,
            strategy: Strategy::Normal,
            ok: false,
            note: "no path".into(),
            mean_time_ms: 0.0,
            expanded: 0,
            generated: 0,
            guaranteed: 0,
            checked: 0,
            guaranteed_fraction: 0.0,
        }];
        let table = render_table(&rows);
        assert!(table.contains("failed: no path"));
        assert_eq!(table.lines().count(), 2);
    }

    fn crate_root() -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
    }
}
