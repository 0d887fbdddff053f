//! Scenario files: a single TOML document carrying the map reference and
//! every planning parameter. The tether/homotopy world always keeps the base
//! cell free (the chain must leave the base); `base_is_obstacle` only blocks
//! the robot footprint from driving over the base.

use std::path::Path;

use serde::Deserialize;

use crate::error::Error;
use crate::geometry::{wrap_to_2pi, wrap_to_pi, AngleInterval, Point2, Polygon, Pose2};
use crate::primitives::{default_primitive_set, MotionPrimitive};
use crate::tether::{anchor_position, tauten_polyline, Config, TetherState};
use crate::worldmodel::{GridFormat, GridMap, World};

/// Plain scenario data before derived structures are built. Tests and
/// generators fill this directly; files go through [`Scenario::load`].
#[derive(Debug, Clone)]
pub struct ScenarioSpec {
    pub map: GridMap,
    pub base: Point2,
    pub base_is_obstacle: bool,
    pub start: Point2,
    /// Heading at the start; `None` aligns the tether stretch direction with
    /// the middle of the admissible interval.
    pub start_theta: Option<f64>,
    pub goal: Point2,
    pub max_tether_length: f64,
    pub anchor_offset: (f64, f64),
    pub footprint: Polygon,
    pub sef_interval: AngleInterval,
    pub x_res: f64,
    pub y_res: f64,
    pub n_theta: usize,
    pub primitives: Vec<MotionPrimitive>,
    pub cost_weights: (f64, f64, f64),
    pub goal_tolerance: Option<f64>,
    pub waypoint_resolution: f64,
}

/// A fully built scenario: tether world, robot collision map, resolved start
/// pose and derived defaults.
#[derive(Debug, Clone)]
pub struct Scenario {
    /// Obstacles, corners and homotopy rays for the tether; base cell free.
    pub world: World,
    /// Collision map for the robot footprint; base cell occupied when
    /// `base_is_obstacle`.
    pub robot_map: GridMap,
    pub base: Point2,
    pub start: Pose2,
    pub goal: Point2,
    pub max_tether_length: f64,
    pub anchor_offset: (f64, f64),
    pub footprint: Polygon,
    pub sef_interval: AngleInterval,
    pub x_res: f64,
    pub y_res: f64,
    pub n_theta: usize,
    pub primitives: Vec<MotionPrimitive>,
    pub cost_weights: (f64, f64, f64),
    pub goal_tolerance: f64,
    pub waypoint_resolution: f64,
}

fn default_true() -> bool {
    true
}

fn default_resolution() -> (f64, f64, usize) {
    (1.0, 1.0, 72)
}

fn default_waypoint_resolution() -> f64 {
    0.1
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    map: String,
    base: [f64; 2],
    #[serde(default = "default_true")]
    base_is_obstacle: bool,
    start: [f64; 2],
    start_theta: Option<f64>,
    goal: [f64; 2],
    max_tether_length: f64,
    #[serde(default)]
    anchor_offset: [f64; 2],
    footprint: Vec<[f64; 2]>,
    sef_interval: [f64; 2],
    #[serde(default = "default_resolution")]
    resolution: (f64, f64, usize),
    primitive_length: Option<f64>,
    max_curvature: Option<f64>,
    primitives: Option<Vec<MotionPrimitive>>,
    cost_weights: [f64; 3],
    goal_tolerance: Option<f64>,
    #[serde(default = "default_waypoint_resolution")]
    waypoint_resolution: f64,
}

impl Scenario {
    /// Loads a scenario TOML file; the map path is resolved relative to the
    /// scenario file's directory, `.pgm` by extension, ascii-grid otherwise.
    pub fn load(path: &Path) -> Result<Scenario, Error> {
        let text = std::fs::read_to_string(path)?;
        let raw: RawScenario = toml::from_str(&text)
            .map_err(|e| Error::scenario("file", format!("TOML parse: {e}")))?;
        let map_path = path.parent().unwrap_or(Path::new(".")).join(&raw.map);
        let format = if map_path.extension().is_some_and(|e| e == "pgm") {
            GridFormat::Pgm
        } else {
            GridFormat::AsciiGrid
        };
        let bytes = std::fs::read(&map_path)
            .map_err(|e| Error::scenario("map", format!("{}: {e}", map_path.display())))?;
        let map = GridMap::load(&bytes, format)?;
        let spec = ScenarioSpec {
            map,
            base: Point2::new(raw.base[0], raw.base[1]),
            base_is_obstacle: raw.base_is_obstacle,
            start: Point2::new(raw.start[0], raw.start[1]),
            start_theta: raw.start_theta,
            goal: Point2::new(raw.goal[0], raw.goal[1]),
            max_tether_length: raw.max_tether_length,
            anchor_offset: (raw.anchor_offset[0], raw.anchor_offset[1]),
            footprint: Polygon::new(
                raw.footprint
                    .iter()
                    .map(|v| Point2::new(v[0], v[1]))
                    .collect(),
            ),
            sef_interval: AngleInterval::new(raw.sef_interval[0], raw.sef_interval[1]),
            x_res: raw.resolution.0,
            y_res: raw.resolution.1,
            n_theta: raw.resolution.2,
            primitives: match raw.primitives {
                Some(p) => p,
                None => {
                    let dis = raw.primitive_length.ok_or_else(|| {
                        Error::scenario("primitive_length", "required without explicit primitives")
                    })?;
                    let kmax = raw.max_curvature.ok_or_else(|| {
                        Error::scenario("max_curvature", "required without explicit primitives")
                    })?;
                    default_primitive_set(kmax, dis)
                }
            },
            cost_weights: (raw.cost_weights[0], raw.cost_weights[1], raw.cost_weights[2]),
            goal_tolerance: raw.goal_tolerance,
            waypoint_resolution: raw.waypoint_resolution,
        };
        spec.build()
    }
}

impl ScenarioSpec {
    pub fn build(self) -> Result<Scenario, Error> {
        let (k1, k2, k3) = self.cost_weights;
        if !(k1 > 0.0) || k2 < 0.0 || k3 < 0.0 {
            return Err(Error::scenario("cost_weights", "need k1 > 0, k2, k3 >= 0"));
        }
        if !(self.max_tether_length > 0.0) {
            return Err(Error::scenario("max_tether_length", "must be positive"));
        }
        if self.footprint.vertices.len() < 3 {
            return Err(Error::scenario("footprint", "needs at least 3 vertices"));
        }
        if self.n_theta == 0 || !(self.x_res > 0.0) || !(self.y_res > 0.0) {
            return Err(Error::scenario("resolution", "x/y must be positive, n_theta >= 1"));
        }
        if !(self.waypoint_resolution > 0.0) {
            return Err(Error::scenario("waypoint_resolution", "must be positive"));
        }
        if self.primitives.is_empty() {
            return Err(Error::scenario("primitives", "empty primitive set"));
        }
        for m in &self.primitives {
            if !(m.dis > 0.0) || (m.dir != 1 && m.dir != -1) {
                return Err(Error::scenario("primitives", "need dis > 0 and dir in {-1, +1}"));
            }
        }
        let world = World::new(self.map);
        let mut robot_map = world.map.clone();
        if self.base_is_obstacle {
            let (c, r) = robot_map.cell_of(self.base);
            if c >= 0 && r >= 0 && (c as usize) < robot_map.width && (r as usize) < robot_map.height
            {
                robot_map.set(c as usize, r as usize, true);
            }
        }
        let theta = match self.start_theta {
            Some(t) => t,
            None => {
                // Aim the heading so the relative angle sits at the middle of
                // the admissible interval, using the tether to the start point
                // as the stretch direction.
                let t = initial_tether_to(&world, self.base, self.start)?;
                let o = t.last_contact();
                let stretch = (o.y - self.start.y).atan2(o.x - self.start.x);
                let mid = self.sef_interval.lo
                    + wrap_to_2pi(self.sef_interval.hi - self.sef_interval.lo) / 2.0;
                wrap_to_pi(stretch - mid)
            }
        };
        let goal_tolerance = self
            .goal_tolerance
            .unwrap_or(0.5 * self.x_res.min(self.y_res));
        Ok(Scenario {
            world,
            robot_map,
            base: self.base,
            start: Pose2::new(self.start.x, self.start.y, theta),
            goal: self.goal,
            max_tether_length: self.max_tether_length,
            anchor_offset: self.anchor_offset,
            footprint: self.footprint,
            sef_interval: self.sef_interval,
            x_res: self.x_res,
            y_res: self.y_res,
            n_theta: self.n_theta,
            primitives: self.primitives,
            cost_weights: self.cost_weights,
            goal_tolerance,
            waypoint_resolution: self.waypoint_resolution,
        })
    }
}

fn initial_tether_to(world: &World, base: Point2, target: Point2) -> Result<TetherState, Error> {
    let polyline = world.map.shortest_grid_path(base, target)?;
    tauten_polyline(world, &polyline)
}

impl Scenario {
    pub fn theta_res(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.n_theta as f64
    }

    /// Initial tether: tautened shortest grid path from the base to the start
    /// anchor.
    pub fn initial_tether(&self) -> Result<TetherState, Error> {
        let anchor = anchor_position(&self.start, self.anchor_offset);
        initial_tether_to(&self.world, self.base, anchor)
    }

    pub fn start_config(&self) -> Result<Config, Error> {
        Ok(Config {
            pose: self.start,
            tether: self.initial_tether()?,
        })
    }
}
