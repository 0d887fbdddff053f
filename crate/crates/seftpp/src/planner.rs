//! Constrained best-first search over motion primitives with homotopy-aware
//! visited buckets, plus the improved node expansion that skips per-waypoint
//! tether simulation whenever the closed-form monotonicity predicates
//! guarantee validity. Both expansion strategies must return bit-identical
//! successors; the improved one only skips work.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::geometry::{footprint_at, wrap_to_2pi, Point2, Pose2, EPS};
use crate::homotopy::{h_equals, polyline_word, HWord};
use crate::primitives::{sample_poses, MotionPrimitive};
use crate::scenario::Scenario;
use crate::sparsity::{
    contact_constancy, is_rel_angle_monotonic, is_tether_len_monotonic, Branch, SparsityContext,
};
use crate::tether::{
    advance_subdivided, anchor_position, is_non_selfcrossing, is_sef, relative_angle,
    tether_length, Config, TetherState,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Normal,
    Improved,
}

#[derive(Debug, Clone)]
pub struct Node {
    pub i: usize,
    pub config: Config,
    /// Anchor point of this configuration.
    pub s: Point2,
    pub phi: f64,
    pub h: HWord,
    pub g_cost: f64,
    pub h_cost: f64,
    pub i_prev: Option<usize>,
    pub steer: f64,
    /// +1 forward, -1 backward, 0 for the root.
    pub dir: i8,
    /// Primitive that produced this node; `None` for the root.
    pub primitive: Option<MotionPrimitive>,
}

/// Counters reported per plan; the serialized names are stable.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct PlanStats {
    pub expanded: u64,
    pub generated: u64,
    pub guaranteed_primitives: u64,
    pub checked_primitives: u64,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone)]
pub struct PlanResult {
    /// Waypoint-resolution poses from the start, goal point appended last.
    pub path: Vec<Pose2>,
    /// Accumulated movement cost of the goal-reaching node.
    pub cost: f64,
    pub stats: PlanStats,
}

/// Spatial-angular buckets, each holding nodes with pairwise distinct
/// h-words; only the best gCost per (bucket, word) survives.
pub struct VisitedGrid {
    x_res: f64,
    y_res: f64,
    theta_res: f64,
    buckets: HashMap<(i64, i64, i64), Vec<usize>>,
}

impl VisitedGrid {
    pub fn new(x_res: f64, y_res: f64, theta_res: f64) -> Self {
        Self {
            x_res,
            y_res,
            theta_res,
            buckets: HashMap::new(),
        }
    }

    pub fn key(&self, pose: &Pose2) -> (i64, i64, i64) {
        (
            (pose.x / self.x_res).floor() as i64,
            (pose.y / self.y_res).floor() as i64,
            (wrap_to_2pi(pose.theta) / self.theta_res).floor() as i64,
        )
    }

    /// Admits the node if its (bucket, h-word) slot is empty or currently
    /// held by a costlier node; returns the displaced node id if any.
    /// `Err(())` means the candidate loses to an equal-or-better incumbent.
    #[allow(clippy::result_unit_err)]
    pub fn admit(&mut self, nodes: &[Node], candidate: &Node) -> Result<Option<usize>, ()> {
        let key = self.key(&candidate.config.pose);
        let bucket = self.buckets.entry(key).or_default();
        for slot in bucket.iter_mut() {
            let held = &nodes[*slot];
            if h_equals(&held.h, &candidate.h) {
                if held.g_cost <= candidate.g_cost {
                    return Err(());
                }
                let displaced = *slot;
                *slot = candidate.i;
                return Ok(Some(displaced));
            }
        }
        bucket.push(candidate.i);
        Ok(None)
    }
}

/// Eq. of the accumulated cost: parent g plus distance, steering-change and
/// direction-change penalties; the root pays no change penalties.
pub fn movement_cost(parent: &Node, m: &MotionPrimitive, weights: (f64, f64, f64)) -> f64 {
    let (k1, k2, k3) = weights;
    let (dk, dd) = if parent.dir == 0 {
        (0.0, 0.0)
    } else {
        (
            (m.kappa - parent.steer).abs(),
            ((m.dir - parent.dir) as f64).abs(),
        )
    };
    parent.g_cost + k1 * m.dis + k2 * dk + k3 * dd
}

struct Expansion {
    children: Vec<Node>,
    guaranteed: u64,
    checked: u64,
}

fn anchors_of(sc: &Scenario, poses: &[Pose2]) -> Vec<Point2> {
    poses
        .iter()
        .map(|p| anchor_position(p, sc.anchor_offset))
        .collect()
}

fn collision_free(sc: &Scenario, poses: &[Pose2]) -> bool {
    poses
        .iter()
        .all(|p| sc.robot_map.is_footprint_free(&footprint_at(&sc.footprint, p)))
}

/// Builds the child node after a primitive has been accepted.
fn make_child(
    sc: &Scenario,
    parent: &Node,
    m: &MotionPrimitive,
    end_pose: Pose2,
    end_tether: TetherState,
    anchors: &[Point2],
) -> Option<Node> {
    let phi = relative_angle(&end_pose, sc.anchor_offset, &end_tether).ok()?;
    let word = polyline_word(anchors, &sc.world.obstacles);
    let h = parent.h.append_reduce(word.letters());
    Some(Node {
        i: 0, // assigned on admission
        s: anchor_position(&end_pose, sc.anchor_offset),
        config: Config {
            pose: end_pose,
            tether: end_tether,
        },
        phi,
        h,
        g_cost: movement_cost(parent, m, sc.cost_weights),
        h_cost: end_pose.xy().distance(&sc.goal),
        i_prev: Some(parent.i),
        steer: m.kappa,
        dir: m.dir,
        primitive: Some(*m),
    })
}

/// Dense per-waypoint validity: advance the tether along the anchors and
/// check NS, SEF and TLA at every waypoint. Returns the end tether state.
fn dense_tether_check(
    sc: &Scenario,
    start: &TetherState,
    poses: &[Pose2],
    anchors: &[Point2],
) -> Option<TetherState> {
    let mut state = start.clone();
    for i in 1..poses.len() {
        state = advance_subdivided(&state, anchors[i - 1], anchors[i], &sc.world);
        let fp = footprint_at(&sc.footprint, &poses[i]);
        if !is_non_selfcrossing(std::slice::from_ref(&fp), &state) {
            return None;
        }
        if !is_sef(&poses[i], sc.anchor_offset, &state, &sc.sef_interval).unwrap_or(false) {
            return None;
        }
        if tether_length(&state, anchors[i]) > sc.max_tether_length {
            return None;
        }
    }
    Some(state)
}

/// Algorithm-2-style expansion: every accepted primitive pays the full
/// per-waypoint tether simulation.
pub fn node_expansion(sc: &Scenario, parent: &Node) -> Vec<Node> {
    expand(sc, parent, Strategy::Normal).children
}

/// Algorithm-3-style expansion: endpoint checks plus closed-form guarantees;
/// falls back to the dense loop when a guarantee is unavailable. Successors
/// are identical to [`node_expansion`].
pub fn improved_node_expansion(sc: &Scenario, parent: &Node) -> Vec<Node> {
    expand(sc, parent, Strategy::Improved).children
}

/// Does the wrapped angle sweep from `a` to `b` (in the branch direction)
/// stay inside the admissible interval? Both endpoints are already known to
/// be inside; the swept arc must not leave through the far side.
fn sweep_stays_inside(sc: &Scenario, a: f64, b: f64, branch: Branch) -> bool {
    let width = wrap_to_2pi(sc.sef_interval.hi - sc.sef_interval.lo);
    let pa = wrap_to_2pi(a - sc.sef_interval.lo).min(width);
    let pb = wrap_to_2pi(b - sc.sef_interval.lo).min(width);
    match branch {
        Branch::Increasing => pa <= pb + EPS,
        Branch::Decreasing => pb <= pa + EPS,
        Branch::Flat => true,
        Branch::None => false,
    }
}

fn expand(sc: &Scenario, parent: &Node, strategy: Strategy) -> Expansion {
    let mut out = Expansion {
        children: Vec::new(),
        guaranteed: 0,
        checked: 0,
    };
    for m in &sc.primitives {
        let poses = sample_poses(&parent.config.pose, m, sc.waypoint_resolution);
        if !collision_free(sc, &poses[1..]) {
            continue;
        }
        let anchors = anchors_of(sc, &poses);
        let end_pose = *poses.last().unwrap();
        let accepted = match strategy {
            Strategy::Normal => {
                out.checked += 1;
                dense_tether_check(sc, &parent.config.tether, &poses, &anchors)
            }
            Strategy::Improved => {
                match guaranteed_check(sc, parent, m, &poses, &anchors, &end_pose) {
                    GuaranteeOutcome::Accept(state) => {
                        out.guaranteed += 1;
                        Some(state)
                    }
                    GuaranteeOutcome::Reject => {
                        out.guaranteed += 1;
                        None
                    }
                    GuaranteeOutcome::Unknown => {
                        out.checked += 1;
                        dense_tether_check(sc, &parent.config.tether, &poses, &anchors)
                    }
                }
            }
        };
        if let Some(state) = accepted {
            if let Some(child) = make_child(sc, parent, m, end_pose, state, &anchors) {
                out.children.push(child);
            }
        }
    }
    out
}

enum GuaranteeOutcome {
    Accept(TetherState),
    Reject,
    Unknown,
}

/// The sparsity fast path: endpoint SEF/TLA first, then the unchanged-
/// contact-set test, then the closed-form monotonicity guarantees. Any
/// verdict it returns matches what the dense loop would decide.
fn guaranteed_check(
    sc: &Scenario,
    parent: &Node,
    m: &MotionPrimitive,
    poses: &[Pose2],
    anchors: &[Point2],
    end_pose: &Pose2,
) -> GuaranteeOutcome {
    // Endpoint screen first (single chord sweep, no dense simulation, no
    // hull test yet). The chord state is only provably exact once constancy
    // is established, so a bad endpoint routes to the dense fallback instead
    // of rejecting outright.
    let (constant, end_state) = contact_constancy(&parent.config.tether, anchors, &sc.world);
    let end_anchor = *anchors.last().unwrap();
    let endpoint_ok = matches!(
        is_sef(end_pose, sc.anchor_offset, &end_state, &sc.sef_interval),
        Ok(true)
    ) && tether_length(&end_state, end_anchor) <= sc.max_tether_length;
    if !endpoint_ok || !constant {
        return GuaranteeOutcome::Unknown;
    }
    // Constancy holds: the end contacts equal the parent's, so the endpoint
    // checks above were exact and every accepted child carries the same
    // tether state the dense loop would produce.
    let ctx = SparsityContext {
        p0: parent.config.pose,
        offset: sc.anchor_offset,
        o: parent.config.tether.last_contact(),
        primitive: *m,
    };
    let sef_v = is_rel_angle_monotonic(&ctx);
    let tla_v = is_tether_len_monotonic(&ctx);
    if !sef_v.guaranteed || !tla_v.guaranteed {
        return GuaranteeOutcome::Unknown;
    }
    // Monotone Phi with valid endpoints still has to sweep through the
    // admissible side of the circle.
    let start_phi =
        match relative_angle(&parent.config.pose, sc.anchor_offset, &parent.config.tether) {
            Ok(p) => p,
            Err(_) => return GuaranteeOutcome::Unknown,
        };
    let end_phi = match relative_angle(end_pose, sc.anchor_offset, &end_state) {
        Ok(p) => p,
        Err(_) => return GuaranteeOutcome::Unknown,
    };
    if !sc.sef_interval.contains(start_phi)
        || !sweep_stays_inside(sc, start_phi, end_phi, sef_v.branch)
    {
        return GuaranteeOutcome::Unknown;
    }
    // Monotone length with both endpoints within budget covers TLA; the
    // parent endpoint was validated on admission.
    if tether_length(&parent.config.tether, anchors[0]) > sc.max_tether_length {
        return GuaranteeOutcome::Unknown;
    }
    // Contacts constant means the static chain is the parent's; NS for every
    // waypoint reduces to footprint-vs-chain tests with no tether updates.
    for p in &poses[1..] {
        let fp = footprint_at(&sc.footprint, p);
        if !is_non_selfcrossing(std::slice::from_ref(&fp), &parent.config.tether) {
            return GuaranteeOutcome::Reject;
        }
    }
    GuaranteeOutcome::Accept(end_state)
}

struct HeapEntry {
    f: f64,
    id: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, o: &Self) -> bool {
        self.f == o.f && self.id == o.id
    }
}
impl Eq for HeapEntry {}
impl Ord for HeapEntry {
    fn cmp(&self, o: &Self) -> Ordering {
        // Min-heap by f, then lower node id first.
        o.f.total_cmp(&self.f).then_with(|| o.id.cmp(&self.id))
    }
}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

fn validate_start(sc: &Scenario, config: &Config) -> Result<(f64, Point2), Error> {
    let fp = footprint_at(&sc.footprint, &config.pose);
    if !sc.robot_map.is_footprint_free(&fp) {
        return Err(Error::InvalidStart("collision"));
    }
    let anchor = anchor_position(&config.pose, sc.anchor_offset);
    if tether_length(&config.tether, anchor) > sc.max_tether_length {
        return Err(Error::InvalidStart("tether-length"));
    }
    if !is_non_selfcrossing(std::slice::from_ref(&fp), &config.tether) {
        return Err(Error::InvalidStart("non-selfcrossing"));
    }
    let phi = relative_angle(&config.pose, sc.anchor_offset, &config.tether)
        .map_err(|_| Error::InvalidStart("sef"))?;
    if !sc.sef_interval.contains(phi) {
        return Err(Error::InvalidStart("sef"));
    }
    Ok((phi, anchor))
}

/// Best-first search over (pose, tether) configurations. Returns
/// `Err(Error::NoPath)` only on open-queue exhaustion.
pub fn plan(sc: &Scenario, strategy: Strategy) -> Result<PlanResult, Error> {
    let t0 = Instant::now();
    let start_config = sc.start_config()?;
    let (phi, anchor) = validate_start(sc, &start_config)?;
    let mut stats = PlanStats::default();
    let root = Node {
        i: 0,
        s: anchor,
        h_cost: start_config.pose.xy().distance(&sc.goal),
        config: start_config,
        phi,
        h: HWord::empty(),
        g_cost: 0.0,
        i_prev: None,
        steer: 0.0,
        dir: 0,
        primitive: None,
    };
    let mut nodes = vec![root];
    let mut alive = vec![true];
    let mut visited = VisitedGrid::new(sc.x_res, sc.y_res, sc.theta_res());
    let _ = visited.admit(&nodes, &nodes[0].clone());
    let mut open = BinaryHeap::new();
    open.push(HeapEntry {
        f: nodes[0].g_cost + nodes[0].h_cost,
        id: 0,
    });
    while let Some(HeapEntry { id, .. }) = open.pop() {
        if !alive[id] {
            continue; // lazily invalidated by a better-gCost replacement
        }
        if nodes[id].config.pose.xy().distance(&sc.goal) <= sc.goal_tolerance {
            let path = trace_path(&nodes, id, sc)?;
            stats.wall_time_ms = t0.elapsed().as_secs_f64() * 1e3;
            return Ok(PlanResult {
                path,
                cost: nodes[id].g_cost,
                stats,
            });
        }
        stats.expanded += 1;
        let parent = nodes[id].clone();
        let expansion = expand(sc, &parent, strategy);
        stats.guaranteed_primitives += expansion.guaranteed;
        stats.checked_primitives += expansion.checked;
        for mut child in expansion.children {
            stats.generated += 1;
            child.i = nodes.len();
            match visited.admit(&nodes, &child) {
                Err(()) => continue,
                Ok(displaced) => {
                    if let Some(d) = displaced {
                        alive[d] = false;
                    }
                    open.push(HeapEntry {
                        f: child.g_cost + child.h_cost,
                        id: child.i,
                    });
                    nodes.push(child);
                    alive.push(true);
                }
            }
        }
    }
    Err(Error::NoPath)
}

/// Root-to-goal pose sequence: each primitive re-sampled at waypoint
/// resolution, junction poses not duplicated, goal point appended last.
pub fn trace_path(nodes: &[Node], goal_id: usize, sc: &Scenario) -> Result<Vec<Pose2>, Error> {
    let mut chain = Vec::new();
    let mut cur = Some(goal_id);
    while let Some(id) = cur {
        if id >= nodes.len() || chain.len() > nodes.len() {
            return Err(Error::Internal("broken parent chain".into()));
        }
        chain.push(id);
        cur = nodes[id].i_prev;
    }
    chain.reverse();
    let mut path = vec![nodes[chain[0]].config.pose];
    for &id in &chain[1..] {
        let node = &nodes[id];
        let parent = &nodes[node.i_prev.ok_or(Error::Internal("rootless node".into()))?];
        let m = node
            .primitive
            .ok_or(Error::Internal("non-root node without primitive".into()))?;
        let poses = sample_poses(&parent.config.pose, &m, sc.waypoint_resolution);
        path.extend_from_slice(&poses[1..]);
    }
    let theta = path.last().unwrap().theta;
    path.push(Pose2::new(sc.goal.x, sc.goal.y, theta));
    Ok(path)
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct ConditionReport {
    pub ok: bool,
    /// Arc length along the replayed path where the first violation occurs.
    pub first_violation: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub collision: ConditionReport,
    pub tether_length: ConditionReport,
    pub non_selfcrossing: ConditionReport,
    pub sef: ConditionReport,
}

impl ValidationReport {
    pub fn all_ok(&self) -> bool {
        self.collision.ok && self.tether_length.ok && self.non_selfcrossing.ok && self.sef.ok
    }
}

/// Independent dense referee: replays the pose path at resolution `step`
/// with a fresh tether simulation and reports each condition separately.
/// Never used by the planner itself.
pub fn validate_path(sc: &Scenario, path: &[Pose2], step: f64) -> Result<ValidationReport, Error> {
    if path.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let ok = ConditionReport {
        ok: true,
        first_violation: None,
    };
    let mut report = ValidationReport {
        collision: ok,
        tether_length: ok,
        non_selfcrossing: ok,
        sef: ok,
    };
    let first_anchor = anchor_position(&path[0], sc.anchor_offset);
    let polyline = sc.world.map.shortest_grid_path(sc.base, first_anchor)?;
    let mut tether = crate::tether::tauten_polyline(&sc.world, &polyline)?;
    let mut arc = 0.0;
    let check = |report: &mut ValidationReport, pose: &Pose2, tether: &TetherState, arc: f64| {
        let fp = footprint_at(&sc.footprint, pose);
        let anchor = anchor_position(pose, sc.anchor_offset);
        if report.collision.ok && !sc.robot_map.is_footprint_free(&fp) {
            report.collision = ConditionReport {
                ok: false,
                first_violation: Some(arc),
            };
        }
        if report.tether_length.ok && tether_length(tether, anchor) > sc.max_tether_length + 1e-9 {
            report.tether_length = ConditionReport {
                ok: false,
                first_violation: Some(arc),
            };
        }
        if report.non_selfcrossing.ok && !is_non_selfcrossing(std::slice::from_ref(&fp), tether) {
            report.non_selfcrossing = ConditionReport {
                ok: false,
                first_violation: Some(arc),
            };
        }
        if report.sef.ok
            && !is_sef(pose, sc.anchor_offset, tether, &sc.sef_interval).unwrap_or(false)
        {
            report.sef = ConditionReport {
                ok: false,
                first_violation: Some(arc),
            };
        }
    };
    check(&mut report, &path[0], &tether, arc);
    for w in path.windows(2) {
        let (a, b) = (w[0], w[1]);
        let dpos = a.xy().distance(&b.xy());
        let dth = crate::geometry::wrap_to_pi(b.theta - a.theta);
        let n = (dpos.max(dth.abs()) / step).ceil().max(1.0) as usize;
        let mut prev_anchor = anchor_position(&a, sc.anchor_offset);
        for k in 1..=n {
            let u = k as f64 / n as f64;
            let pose = Pose2::new(
                a.x + u * (b.x - a.x),
                a.y + u * (b.y - a.y),
                a.theta + u * dth,
            );
            let anchor = anchor_position(&pose, sc.anchor_offset);
            tether = advance_subdivided(&tether, prev_anchor, anchor, &sc.world);
            prev_anchor = anchor;
            arc += dpos / n as f64;
            check(&mut report, &pose, &tether, arc);
        }
    }
    Ok(report)
}
