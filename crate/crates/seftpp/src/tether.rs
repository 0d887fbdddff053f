//! Taut-tether state: contact-chain maintenance as the anchor moves, tether
//! length, relative angle and the self-entanglement predicates.

use crate::error::Error;
use crate::geometry::{
    cross, distance_point_segment, polygon_intersects_segment, strictly_in_triangle, wrap_to_pi,
    AngleInterval, Point2, Polygon, Pose2, EPS,
};
use crate::homotopy::{h_equals, polyline_word};
use crate::worldmodel::World;

/// Largest anchor displacement per tether update; longer chords are
/// subdivided before the push/pop sweep runs.
pub const TETHER_STEP: f64 = 0.1;

/// One tether-obstacle contact. `wrap` is the turn sense of the taut chain at
/// the corner: +1 when the tether passes counter-clockwise around it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contact {
    pub point: Point2,
    pub wrap: i8,
}

/// Taut tether from the base to the last obstacle contact. The final span
/// (last contact to the anchor) is not stored; it follows the robot.
#[derive(Debug, Clone, PartialEq)]
pub struct TetherState {
    pub base: Point2,
    pub contacts: Vec<Contact>,
}

/// A full search-space configuration: robot pose plus tether contact chain.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub pose: Pose2,
    pub tether: TetherState,
}

impl TetherState {
    pub fn new(base: Point2) -> Self {
        Self {
            base,
            contacts: Vec::new(),
        }
    }

    /// The tether retraction point: last contact, or the base for a contact-
    /// free chain.
    pub fn last_contact(&self) -> Point2 {
        self.contacts.last().map_or(self.base, |c| c.point)
    }

    /// Chain vertices from the base through the contacts to the anchor.
    pub fn chain_points(&self, anchor: Point2) -> Vec<Point2> {
        let mut pts = Vec::with_capacity(self.contacts.len() + 2);
        pts.push(self.base);
        pts.extend(self.contacts.iter().map(|c| c.point));
        pts.push(anchor);
        pts
    }
}

/// World position of the tether anchor for a body-frame mounting offset.
pub fn anchor_position(pose: &Pose2, offset: (f64, f64)) -> Point2 {
    let (s, c) = pose.theta.sin_cos();
    Point2::new(
        pose.x + offset.0 * c - offset.1 * s,
        pose.y + offset.0 * s + offset.1 * c,
    )
}

/// Total tether length: consumed chain plus the final span to the anchor.
pub fn tether_length(t: &TetherState, anchor: Point2) -> f64 {
    t.chain_points(anchor).windows(2).map(|w| w[0].distance(&w[1])).sum()
}

/// Relative angle between the tether retraction direction and the heading.
pub fn relative_angle(pose: &Pose2, offset: (f64, f64), t: &TetherState) -> Result<f64, Error> {
    let s = anchor_position(pose, offset);
    let o = t.last_contact();
    if o.distance(&s) < EPS {
        return Err(Error::ZeroSpan);
    }
    Ok(wrap_to_pi((o.y - s.y).atan2(o.x - s.x) - pose.theta))
}

/// Relative angle within the admissible interval.
pub fn is_sef(
    pose: &Pose2,
    offset: (f64, f64),
    t: &TetherState,
    interval: &AngleInterval,
) -> Result<bool, Error> {
    Ok(interval.contains(relative_angle(pose, offset, t)?))
}

/// True iff no swept footprint touches the static part of the tether (base
/// through the last contact). The live span follows the robot and is exempt.
pub fn is_non_selfcrossing(sweep: &[Polygon], t: &TetherState) -> bool {
    let mut pts = Vec::with_capacity(t.contacts.len() + 1);
    pts.push(t.base);
    pts.extend(t.contacts.iter().map(|c| c.point));
    for seg in pts.windows(2) {
        for fp in sweep {
            if polygon_intersects_segment(fp, seg[0], seg[1]) {
                return false;
            }
        }
    }
    true
}

/// Do two chains with the same endpoints lie in the same homotopy class?
/// Their reduced crossing words over the obstacle rays must agree; a free
/// shortcut segment alone is not enough, since the deformation could sweep
/// across an enclosed obstacle.
fn same_class(world: &World, old: &[Point2], new: &[Point2]) -> bool {
    h_equals(
        &polyline_word(old, &world.obstacles),
        &polyline_word(new, &world.obstacles),
    )
}

/// Can the chain interior point `b` be dropped without changing homotopy?
fn removable(world: &World, a: Point2, b: Point2, c: Point2) -> bool {
    !world.map.segment_hits_obstacle(a, c) && same_class(world, &[a, b, c], &[a, c])
}

/// Tautens a polyline from the base into a taut contact chain: the result is
/// the shortest obstacle-free path between the polyline's endpoints in the
/// polyline's homotopy class, found by Dijkstra over the obstacle-corner
/// visibility graph with crossing-word-augmented states. Wrap senses come
/// from the turn direction at each surviving bend.
pub fn tauten_polyline(world: &World, polyline: &[Point2]) -> Result<TetherState, Error> {
    use crate::homotopy::{segment_crossings, HWord, Letter};
    use std::cmp::Ordering;
    use std::collections::{BinaryHeap, HashMap};

    if polyline.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let mut pts: Vec<Point2> = polyline.to_vec();
    pts.dedup_by(|a, b| a.distance(b) < EPS);
    for w in pts.windows(2) {
        if world.map.segment_hits_obstacle(w[0], w[1]) {
            let mid = Point2::new((w[0].x + w[1].x) / 2.0, (w[0].y + w[1].y) / 2.0);
            return Err(Error::PolylineInObstacle(mid.x, mid.y));
        }
    }
    let base = pts[0];
    let anchor = *pts.last().unwrap();
    if pts.len() == 1 {
        return Ok(TetherState::new(base));
    }

    let target: Vec<Letter> = polyline_word(&pts, &world.obstacles).letters().to_vec();
    // Prefix words along the input stay within this bound, so the search is
    // guaranteed to reach the target: the input path itself is in the graph.
    let mut cap = target.len();
    {
        let mut w = HWord::empty();
        for seg in pts.windows(2) {
            w = w.append_reduce(&segment_crossings(seg[0], seg[1], &world.obstacles));
            cap = cap.max(w.letters().len());
        }
    }
    let cap = cap + 2;

    // Graph nodes: base, obstacle corners, the input's interior vertices
    // (feasibility witnesses only; a shortest path bends at corners), anchor.
    let mut nodes: Vec<Point2> = Vec::with_capacity(world.corners.len() + pts.len());
    nodes.push(base);
    nodes.extend(world.corners.iter().copied());
    nodes.extend(pts[1..pts.len() - 1].iter().copied());
    nodes.push(anchor);
    let goal = nodes.len() - 1;
    let n = nodes.len();
    let mut free = vec![true; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let ok = !world.map.segment_hits_obstacle(nodes[i], nodes[j]);
            free[i * n + j] = ok;
            free[j * n + i] = ok;
        }
    }

    type Key = (usize, Vec<Letter>);
    struct Entry {
        dist: f64,
        key: Key,
    }
    impl PartialEq for Entry {
        fn eq(&self, o: &Self) -> bool {
            self.dist == o.dist && self.key == o.key
        }
    }
    impl Eq for Entry {}
    impl Ord for Entry {
        fn cmp(&self, o: &Self) -> Ordering {
            // Reversed: BinaryHeap is a max-heap, we want the closest state.
            o.dist
                .total_cmp(&self.dist)
                .then_with(|| o.key.cmp(&self.key))
        }
    }
    impl PartialOrd for Entry {
        fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
            Some(self.cmp(o))
        }
    }

    let start: Key = (0, Vec::new());
    let goal_key: Key = (goal, target);
    let mut dist: HashMap<Key, f64> = HashMap::new();
    let mut prev: HashMap<Key, Key> = HashMap::new();
    let mut heap = BinaryHeap::new();
    dist.insert(start.clone(), 0.0);
    heap.push(Entry {
        dist: 0.0,
        key: start,
    });
    let mut found = false;
    while let Some(Entry { dist: d, key }) = heap.pop() {
        if dist.get(&key).is_none_or(|&best| d > best + EPS) {
            continue; // stale heap entry
        }
        if key == goal_key {
            found = true;
            break;
        }
        let (i, ref word) = key;
        for j in 0..n {
            if j == i || !free[i * n + j] {
                continue;
            }
            let step = segment_crossings(nodes[i], nodes[j], &world.obstacles);
            let next_word = HWord::from_letters(word).append_reduce(&step);
            if next_word.letters().len() > cap {
                continue;
            }
            let nk: Key = (j, next_word.letters().to_vec());
            let nd = d + nodes[i].distance(&nodes[j]);
            if dist.get(&nk).is_none_or(|&best| nd < best - EPS) {
                dist.insert(nk.clone(), nd);
                prev.insert(nk.clone(), key.clone());
                heap.push(Entry { dist: nd, key: nk });
            }
        }
    }
    if !found {
        return Err(Error::Internal(
            "homotopic shortest-path search exhausted".into(),
        ));
    }
    let mut chain = vec![anchor];
    let mut cur = goal_key;
    while let Some(p) = prev.get(&cur) {
        chain.push(nodes[p.0]);
        cur = p.clone();
    }
    chain.reverse();
    chain.dedup_by(|a, b| a.distance(b) < EPS);

    let mut contacts = Vec::new();
    for i in 1..chain.len().saturating_sub(1) {
        let turn = cross(
            chain[i].x - chain[i - 1].x,
            chain[i].y - chain[i - 1].y,
            chain[i + 1].x - chain[i].x,
            chain[i + 1].y - chain[i].y,
        );
        // A collinear interior point carries no wrap; it is not a contact.
        if turn.abs() > EPS {
            contacts.push(Contact {
                point: chain[i],
                wrap: if turn > 0.0 { 1 } else { -1 },
            });
        }
    }
    Ok(TetherState {
        base: chain[0],
        contacts,
    })
}

/// Advances the contact chain for one short anchor chord `s_from -> s_to`.
///
/// Pop rule: the last contact goes when the turn at it, measured against its
/// stored wrap sense, straightens or reverses. Push rule: obstacle corners
/// strictly inside the sweep triangle (o, s_from, s_to) become contacts,
/// first-hit first (smallest sweep angle, nearest to o on ties), iterated to
/// a fixpoint.
pub fn advance_tether(t: &TetherState, s_from: Point2, s_to: Point2, world: &World) -> TetherState {
    let mut out = t.clone();
    for _ in 0..128 {
        let mut changed = false;
        while let Some(&last) = out.contacts.last() {
            let prev = if out.contacts.len() >= 2 {
                out.contacts[out.contacts.len() - 2].point
            } else {
                out.base
            };
            let turn = cross(
                last.point.x - prev.x,
                last.point.y - prev.y,
                s_to.x - last.point.x,
                s_to.y - last.point.y,
            );
            if (last.wrap as f64) * turn <= EPS {
                out.contacts.pop();
                changed = true;
            } else {
                break;
            }
        }
        let o = out.last_contact();
        let sweep = cross(s_from.x - o.x, s_from.y - o.y, s_to.x - o.x, s_to.y - o.y);
        let mut best: Option<(f64, f64, Point2)> = None; // (sweep angle, dist, corner)
        if sweep.abs() > EPS {
            for &v in &world.corners {
                // Corners exactly on a radial edge of the sweep triangle count
                // too: a crossing that lands on a sub-step boundary would
                // otherwise sit on an edge of both adjacent triangles and be
                // missed entirely.
                let in_sweep = strictly_in_triangle(v, o, s_from, s_to, EPS)
                    || (v.distance(&o) > EPS
                        && ((v.distance(&s_from) > EPS
                            && distance_point_segment(v, o, s_from) <= EPS)
                            || (v.distance(&s_to) > EPS
                                && distance_point_segment(v, o, s_to) <= EPS)));
                if !in_sweep {
                    continue;
                }
                // The chain must genuinely bend around the corner at s_to;
                // grazing contacts would be popped right back.
                let turn = cross(v.x - o.x, v.y - o.y, s_to.x - v.x, s_to.y - v.y);
                if sweep.signum() * turn <= EPS {
                    continue;
                }
                let a0 = (s_from.y - o.y).atan2(s_from.x - o.x);
                let av = (v.y - o.y).atan2(v.x - o.x);
                // Angle swept before the span o->s crosses the corner.
                let ang = if sweep > 0.0 {
                    crate::geometry::wrap_to_2pi(av - a0)
                } else {
                    crate::geometry::wrap_to_2pi(a0 - av)
                };
                let d = v.distance(&o);
                if best.map_or(true, |(ba, bd, _)| ang < ba - EPS || (ang < ba + EPS && d < bd)) {
                    best = Some((ang, d, v));
                }
            }
        }
        if let Some((_, _, v)) = best {
            out.contacts.push(Contact {
                point: v,
                wrap: if sweep > 0.0 { 1 } else { -1 },
            });
            changed = true;
        }
        if !changed {
            break;
        }
    }
    // Cleanup: a pop followed by a push in the same sweep can leave a corner
    // the string is not actually taut around; drop any contact whose
    // homotopy-safe shortcut is obstacle-free.
    loop {
        let mut removed = false;
        let mut i = 0;
        while i < out.contacts.len() {
            let prev = if i == 0 { out.base } else { out.contacts[i - 1].point };
            let next = if i + 1 == out.contacts.len() {
                s_to
            } else {
                out.contacts[i + 1].point
            };
            if removable(world, prev, out.contacts[i].point, next) {
                out.contacts.remove(i);
                removed = true;
            } else {
                i += 1;
            }
        }
        if !removed {
            break;
        }
    }
    out
}

/// Advances along a straight anchor chord of any length, subdividing to keep
/// each tether update within `TETHER_STEP`.
pub fn advance_subdivided(
    t: &TetherState,
    s_from: Point2,
    s_to: Point2,
    world: &World,
) -> TetherState {
    let dist = s_from.distance(&s_to);
    let n = (dist / TETHER_STEP).ceil().max(1.0) as usize;
    let mut state = t.clone();
    let mut prev = s_from;
    for i in 1..=n {
        let u = i as f64 / n as f64;
        let next = Point2::new(
            s_from.x + u * (s_to.x - s_from.x),
            s_from.y + u * (s_to.y - s_from.y),
        );
        state = advance_tether(&state, prev, next, world);
        prev = next;
    }
    state
}
