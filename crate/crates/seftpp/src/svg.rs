//! Deterministic SVG rendering of a planned path: obstacles, base marker,
//! start/goal footprints, the path polyline, tether snapshots and a strip
//! chart of the relative angle against its admissible bounds. Identical
//! inputs produce byte-identical output.

use std::fmt::Write;

use crate::geometry::{footprint_at, wrap_to_2pi, Point2, Polygon, Pose2};
use crate::planner::PlanResult;
use crate::scenario::Scenario;
use crate::tether::{advance_subdivided, anchor_position, relative_angle, TetherState};

const SCALE: f64 = 8.0;
const CHART_H: f64 = 120.0;
const MARGIN: f64 = 10.0;

fn fx(v: f64) -> String {
    format!("{v:.3}")
}

struct Canvas {
    buf: String,
    height: f64,
}

impl Canvas {
    /// Map world coordinates (y up) to SVG coordinates (y down).
    fn pt(&self, p: Point2) -> (f64, f64) {
        (MARGIN + p.x * SCALE, MARGIN + self.height - p.y * SCALE)
    }

    fn polyline(&mut self, pts: &[Point2], style: &str) {
        let coords: Vec<String> = pts
            .iter()
            .map(|p| {
                let (x, y) = self.pt(*p);
                format!("{},{}", fx(x), fx(y))
            })
            .collect();
        let _ = writeln!(
            self.buf,
            "<polyline fill=\"none\" {} points=\"{}\"/>",
            style,
            coords.join(" ")
        );
    }

    fn polygon(&mut self, poly: &Polygon, style: &str) {
        let coords: Vec<String> = poly
            .vertices
            .iter()
            .map(|p| {
                let (x, y) = self.pt(*p);
                format!("{},{}", fx(x), fx(y))
            })
            .collect();
        let _ = writeln!(self.buf, "<polygon {} points=\"{}\"/>", style, coords.join(" "));
    }
}

/// Relative-angle samples along the replayed path, one per pose.
fn phi_profile(sc: &Scenario, path: &[Pose2]) -> Vec<f64> {
    let mut out = Vec::with_capacity(path.len());
    let Ok(mut tether) = sc.initial_tether_for(path[0]) else {
        return out;
    };
    let mut prev = anchor_position(&path[0], sc.anchor_offset);
    for pose in path {
        let anchor = anchor_position(pose, sc.anchor_offset);
        tether = advance_subdivided(&tether, prev, anchor, &sc.world);
        prev = anchor;
        if let Ok(phi) = relative_angle(pose, sc.anchor_offset, &tether) {
            out.push(phi);
        } else {
            out.push(f64::NAN);
        }
    }
    out
}

/// Tether chains at `k` evenly spaced snapshots along the path.
fn tether_snapshots(sc: &Scenario, path: &[Pose2], k: usize) -> Vec<Vec<Point2>> {
    let Ok(mut tether) = sc.initial_tether_for(path[0]) else {
        return Vec::new();
    };
    let mut snaps = Vec::new();
    let marks: Vec<usize> = (0..k)
        .map(|i| i * (path.len() - 1) / k.max(1))
        .chain(std::iter::once(path.len() - 1))
        .collect();
    let mut prev = anchor_position(&path[0], sc.anchor_offset);
    for (i, pose) in path.iter().enumerate() {
        let anchor = anchor_position(pose, sc.anchor_offset);
        tether = advance_subdivided(&tether, prev, anchor, &sc.world);
        prev = anchor;
        if marks.contains(&i) {
            snaps.push(tether.chain_points(anchor));
        }
    }
    snaps
}

impl Scenario {
    /// Initial tether for an arbitrary first pose (the scenario start in the
    /// common case, but renderers accept any replayable path).
    pub(crate) fn initial_tether_for(
        &self,
        pose: Pose2,
    ) -> Result<TetherState, crate::error::Error> {
        let anchor = anchor_position(&pose, self.anchor_offset);
        let polyline = self.world.map.shortest_grid_path(self.base, anchor)?;
        crate::tether::tauten_polyline(&self.world, &polyline)
    }
}

/// Renders a plan into a standalone SVG document.
pub fn render_svg(sc: &Scenario, result: &PlanResult) -> String {
    let map = &sc.world.map;
    let res = map.resolution;
    let map_h = map.height as f64 * res * SCALE;
    let width = map.width as f64 * res * SCALE + 2.0 * MARGIN;
    let total_h = map_h + CHART_H + 3.0 * MARGIN;
    let mut c = Canvas {
        buf: String::new(),
        height: map_h,
    };
    let _ = writeln!(
        c.buf,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        fx(width),
        fx(total_h),
        fx(width),
        fx(total_h)
    );
    let _ = writeln!(
        c.buf,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#fcfcfc\" stroke=\"#444\"/>",
        fx(MARGIN),
        fx(MARGIN),
        fx(map.width as f64 * res * SCALE),
        fx(map_h)
    );
    // Obstacles.
    for ob in &sc.world.obstacles {
        let poly = ob.boundary.clone();
        c.polygon(&poly, "fill=\"#9aa5b1\" stroke=\"#55606e\" stroke-width=\"1\"");
    }
    // Base marker: a small triangle.
    let b = sc.base;
    let tri = Polygon::new(vec![
        Point2::new(b.x, b.y + 0.45),
        Point2::new(b.x - 0.4, b.y - 0.35),
        Point2::new(b.x + 0.4, b.y - 0.35),
    ]);
    c.polygon(&tri, "fill=\"#c0392b\" stroke=\"none\"");
    // Tether snapshots.
    for snap in tether_snapshots(sc, &result.path, 6) {
        c.polyline(&snap, "stroke=\"#e67e22\" stroke-width=\"1\" stroke-dasharray=\"3,2\"");
    }
    // Start and goal footprints.
    let start_fp = footprint_at(&sc.footprint, &result.path[0]);
    c.polygon(&start_fp, "fill=\"none\" stroke=\"#27ae60\" stroke-width=\"1.5\"");
    let goal_fp = footprint_at(&sc.footprint, result.path.last().unwrap());
    c.polygon(&goal_fp, "fill=\"none\" stroke=\"#2980b9\" stroke-width=\"1.5\"");
    // The path itself.
    let pts: Vec<Point2> = result.path.iter().map(|p| p.xy()).collect();
    c.polyline(&pts, "stroke=\"#2c3e50\" stroke-width=\"1.5\"");

    // Relative-angle strip chart: x = sample index, y = Phi unrolled to
    // [0, 2*pi) relative to the lower bound so the band is contiguous.
    let chart_top = map_h + 2.0 * MARGIN;
    let chart_w = map.width as f64 * res * SCALE;
    let _ = writeln!(
        c.buf,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#fcfcfc\" stroke=\"#444\"/>",
        fx(MARGIN),
        fx(chart_top),
        fx(chart_w),
        fx(CHART_H)
    );
    let to_chart = |i: usize, n: usize, v: f64| {
        let x = MARGIN + chart_w * i as f64 / (n.max(2) - 1) as f64;
        let y = chart_top + CHART_H - CHART_H * v / (2.0 * std::f64::consts::PI);
        (x, y)
    };
    let phis = phi_profile(sc, &result.path);
    let n = phis.len();
    let width_band = wrap_to_2pi(sc.sef_interval.hi - sc.sef_interval.lo);
    for (bound, v) in [("lower", 0.0), ("upper", width_band)] {
        let (_, y) = to_chart(0, n, v);
        let _ = writeln!(
            c.buf,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#c0392b\" stroke-dasharray=\"4,3\"><title>{} bound</title></line>",
            fx(MARGIN),
            fx(y),
            fx(MARGIN + chart_w),
            fx(y),
            bound
        );
    }
    let band: Vec<String> = phis
        .iter()
        .enumerate()
        .filter(|(_, p)| p.is_finite())
        .map(|(i, p)| {
            let v = wrap_to_2pi(p - sc.sef_interval.lo);
            let (x, y) = to_chart(i, n, v);
            format!("{},{}", fx(x), fx(y))
        })
        .collect();
    let _ = writeln!(
        c.buf,
        "<polyline fill=\"none\" stroke=\"#2c3e50\" stroke-width=\"1\" points=\"{}\"/>",
        band.join(" ")
    );
    let _ = writeln!(c.buf, "</svg>");
    c.buf
}
