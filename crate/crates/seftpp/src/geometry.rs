//! Shared planar geometry: angle arithmetic, rigid-body footprint placement,
//! convex hulls and segment intersection primitives.

use crate::error::Error;

pub const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// SE(2) pose of the mobile unit. `theta` is kept in (-pi, pi].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose2 {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Pose2 {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self {
            x,
            y,
            theta: wrap_to_pi(theta),
        }
    }

    pub fn xy(&self) -> Point2 {
        Point2::new(self.x, self.y)
    }

    pub fn position(&self) -> Point2 {
        Point2::new(self.x, self.y)
    }
}

/// Simple polygon with counter-clockwise vertex order.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    pub vertices: Vec<Point2>,
}

impl Polygon {
    pub fn new(vertices: Vec<Point2>) -> Self {
        Self { vertices }
    }

    pub fn signed_area(&self) -> f64 {
        let n = self.vertices.len();
        let mut acc = 0.0;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            acc += a.x * b.y - b.x * a.y;
        }
        acc / 2.0
    }

    pub fn bbox(&self) -> (Point2, Point2) {
        let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            lo.x = lo.x.min(v.x);
            lo.y = lo.y.min(v.y);
            hi.x = hi.x.max(v.x);
            hi.y = hi.y.max(v.y);
        }
        (lo, hi)
    }

    /// Closed point-in-polygon test (boundary counts as inside).
    pub fn contains(&self, p: Point2) -> bool {
        let n = self.vertices.len();
        let mut inside = false;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            if point_on_segment(p, a, b) {
                return true;
            }
            if (a.y > p.y) != (b.y > p.y) {
                let t = (p.y - a.y) / (b.y - a.y);
                if p.x < a.x + t * (b.x - a.x) {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Strict interior test with margin `eps`.
    pub fn contains_strict(&self, p: Point2, eps: f64) -> bool {
        let n = self.vertices.len();
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            if distance_point_segment(p, a, b) <= eps {
                return false;
            }
        }
        self.contains(p)
    }
}

/// Directed arc of the circle of angles from `lo` to `hi` (counter-clockwise).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleInterval {
    pub lo: f64,
    pub hi: f64,
}

impl AngleInterval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn arc_length(&self) -> f64 {
        wrap_to_2pi(self.hi - self.lo)
    }

    /// Membership on the circle: the paper's interval conventions mix
    /// representatives inside and outside (-pi, pi], so containment is
    /// evaluated as a circular arc from `lo` to `hi`.
    pub fn contains(&self, a: f64) -> bool {
        let d = wrap_to_2pi(a - self.lo);
        // Values an epsilon below `lo` wrap to just under 2*pi; treat them
        // as the endpoint rather than a full turn away.
        d <= wrap_to_2pi(self.hi - self.lo) + EPS || d >= 2.0 * std::f64::consts::PI - EPS
    }

    pub fn midpoint(&self) -> f64 {
        wrap_to_pi(self.lo + self.arc_length() / 2.0)
    }
}

/// Maps an angle to (-pi, pi].
pub fn wrap_to_pi(a: f64) -> f64 {
    let r = a.rem_euclid(2.0 * std::f64::consts::PI);
    if r > std::f64::consts::PI {
        r - 2.0 * std::f64::consts::PI
    } else {
        r
    }
}

/// Maps an angle to [0, 2*pi).
pub fn wrap_to_2pi(a: f64) -> f64 {
    a.rem_euclid(2.0 * std::f64::consts::PI)
}

pub fn checked_wrap_to_pi(a: f64) -> Result<f64, Error> {
    if !a.is_finite() {
        return Err(Error::NonFiniteAngle(a));
    }
    Ok(wrap_to_pi(a))
}

pub fn cross(ax: f64, ay: f64, bx: f64, by: f64) -> f64 {
    ax * by - ay * bx
}

/// z-component of (b - a) x (c - a).
pub fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    cross(b.x - a.x, b.y - a.y, c.x - a.x, c.y - a.y)
}

/// Places an egocentric footprint polygon at a world pose.
pub fn footprint_at(body: &Polygon, pose: &Pose2) -> Polygon {
    let (s, c) = pose.theta.sin_cos();
    Polygon::new(
        body.vertices
            .iter()
            .map(|v| Point2::new(pose.x + v.x * c - v.y * s, pose.y + v.x * s + v.y * c))
            .collect(),
    )
}

/// Convex hull of a point set; degenerate inputs keep their degenerate form.
#[derive(Debug, Clone, PartialEq)]
pub enum Hull {
    Point(Point2),
    Segment(Point2, Point2),
    Polygon(Polygon),
}

/// Andrew's monotone chain. Collinear inputs collapse to `Hull::Segment`,
/// a single repeated point to `Hull::Point`.
pub fn convex_hull(pts: &[Point2]) -> Result<Hull, Error> {
    if pts.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let mut sorted: Vec<Point2> = pts.to_vec();
    sorted.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    sorted.dedup_by(|a, b| a.distance(b) < 1e-12);
    if sorted.len() == 1 {
        return Ok(Hull::Point(sorted[0]));
    }

    let chain = |iter: &[Point2]| {
        let mut out: Vec<Point2> = Vec::new();
        for &p in iter {
            while out.len() >= 2 && orient(out[out.len() - 2], out[out.len() - 1], p) <= 1e-12 {
                out.pop();
            }
            out.push(p);
        }
        out
    };
    let lower = chain(&sorted);
    let rev: Vec<Point2> = sorted.iter().rev().copied().collect();
    let upper = chain(&rev);

    let mut hull = lower;
    hull.extend_from_slice(&upper[1..upper.len() - 1]);
    if hull.len() < 3 {
        let first = sorted[0];
        let last = sorted[sorted.len() - 1];
        return Ok(Hull::Segment(first, last));
    }
    Ok(Hull::Polygon(Polygon::new(hull)))
}

pub fn point_on_segment(p: Point2, a: Point2, b: Point2) -> bool {
    distance_point_segment(p, a, b) <= 1e-12
}

pub fn distance_point_segment(p: Point2, a: Point2, b: Point2) -> f64 {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return p.distance(&a);
    }
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0);
    p.distance(&Point2::new(a.x + t * dx, a.y + t * dy))
}

/// Closed segment-segment intersection.
pub fn segments_intersect(p1: Point2, q1: Point2, p2: Point2, q2: Point2) -> bool {
    let d1 = orient(p2, q2, p1);
    let d2 = orient(p2, q2, q1);
    let d3 = orient(p1, q1, p2);
    let d4 = orient(p1, q1, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && point_on_segment(p1, p2, q2))
        || (d2 == 0.0 && point_on_segment(q1, p2, q2))
        || (d3 == 0.0 && point_on_segment(p2, p1, q1))
        || (d4 == 0.0 && point_on_segment(q2, p1, q1))
}

/// Closed polygon-segment intersection (touching counts).
pub fn polygon_intersects_segment(poly: &Polygon, a: Point2, b: Point2) -> bool {
    let n = poly.vertices.len();
    for i in 0..n {
        if segments_intersect(poly.vertices[i], poly.vertices[(i + 1) % n], a, b) {
            return true;
        }
    }
    poly.contains(a) || poly.contains(b)
}

/// Parameter interval of segment a->b inside the axis-aligned rectangle
/// [x0,x1]x[y0,y1] (Liang-Barsky). `None` when disjoint.
pub fn clip_segment_to_rect(
    a: Point2,
    b: Point2,
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
) -> Option<(f64, f64)> {
    let mut t0 = 0.0f64;
    let mut t1 = 1.0f64;
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let checks = [
        (-dx, a.x - x0),
        (dx, x1 - a.x),
        (-dy, a.y - y0),
        (dy, y1 - a.y),
    ];
    for (p, q) in checks {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
            if t0 > t1 {
                return None;
            }
        }
    }
    Some((t0, t1))
}

/// Closed polygon vs axis-aligned rectangle overlap.
pub fn polygon_intersects_rect(poly: &Polygon, x0: f64, y0: f64, x1: f64, y1: f64) -> bool {
    for v in &poly.vertices {
        if v.x >= x0 && v.x <= x1 && v.y >= y0 && v.y <= y1 {
            return true;
        }
    }
    let corners = [
        Point2::new(x0, y0),
        Point2::new(x1, y0),
        Point2::new(x1, y1),
        Point2::new(x0, y1),
    ];
    if corners.iter().any(|&c| poly.contains(c)) {
        return true;
    }
    let n = poly.vertices.len();
    for i in 0..n {
        let a = poly.vertices[i];
        let b = poly.vertices[(i + 1) % n];
        if clip_segment_to_rect(a, b, x0, y0, x1, y1).is_some() {
            return true;
        }
    }
    false
}

/// True when `p` is strictly inside triangle (a, b, c); points within `eps`
/// of an edge are treated as outside.
pub fn strictly_in_triangle(p: Point2, a: Point2, b: Point2, c: Point2, eps: f64) -> bool {
    let area = orient(a, b, c);
    if area.abs() < eps {
        return false;
    }
    let sign = area.signum();
    let d1 = orient(a, b, p) * sign;
    let d2 = orient(b, c, p) * sign;
    let d3 = orient(c, a, p) * sign;
    // Edge lengths scale the cross products; use distances for the margin.
    d1 > 0.0
        && d2 > 0.0
        && d3 > 0.0
        && distance_point_segment(p, a, b) > eps
        && distance_point_segment(p, b, c) > eps
        && distance_point_segment(p, c, a) > eps
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wrap_to_pi_examples() {
        assert_eq!(wrap_to_pi(0.0), 0.0);
        assert!((wrap_to_pi(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_to_pi(-1.5 * PI) - 0.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn wrap_to_pi_idempotent() {
        for i in -100..100 {
            let a = i as f64 * 0.37;
            let w = wrap_to_pi(a);
            assert_eq!(wrap_to_pi(w), w);
            assert!(w > -PI - 1e-12 && w <= PI + 1e-12);
            assert!(((a - w) / (2.0 * PI)).round() * 2.0 * PI - (a - w) < 1e-9);
        }
    }

    #[test]
    fn wrap_rejects_non_finite() {
        assert!(checked_wrap_to_pi(f64::NAN).is_err());
        assert!(checked_wrap_to_pi(f64::INFINITY).is_err());
    }

    #[test]
    fn circular_contains_paper_intervals() {
        // Case-1 interval holds 3.0, Case-2 interval excludes 0.
        let case1 = AngleInterval::new(2.36, 3.93);
        assert!(case1.contains(3.0));
        let case2 = AngleInterval::new(3.93, 5.50);
        assert!(!case2.contains(0.0));
        let tiny = AngleInterval::new(-0.1, 0.1);
        assert!(tiny.contains(0.0));
    }

    #[test]
    fn circular_contains_endpoints() {
        for (lo, hi) in [(2.36, 3.93), (3.93, 5.50), (0.51, 1.11), (-3.0, 3.0)] {
            let iv = AngleInterval::new(lo, hi);
            assert!(iv.contains(lo));
            assert!(iv.contains(hi));
        }
    }

    #[test]
    fn footprint_identity_and_rotation() {
        let square = Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ]);
        let same = footprint_at(&square, &Pose2::new(0.0, 0.0, 0.0));
        assert_eq!(same, square);

        let one = Polygon::new(vec![Point2::new(1.0, 0.0)]);
        let rot = footprint_at(&one, &Pose2::new(0.0, 0.0, PI / 2.0));
        assert!(rot.vertices[0].distance(&Point2::new(0.0, 1.0)) < 1e-12);
        let moved = footprint_at(&one, &Pose2::new(2.0, 3.0, PI));
        assert!(moved.vertices[0].distance(&Point2::new(1.0, 3.0)) < 1e-12);
    }

    #[test]
    fn footprint_roundtrip() {
        let body = Polygon::new(vec![
            Point2::new(-1.0, -0.5),
            Point2::new(1.2, -0.5),
            Point2::new(0.8, 0.9),
        ]);
        let pose = Pose2::new(3.1, -2.2, 0.77);
        let world = footprint_at(&body, &pose);
        // Inverse transform recovers the body frame.
        let (s, c) = pose.theta.sin_cos();
        for (w, b) in world.vertices.iter().zip(&body.vertices) {
            let dx = w.x - pose.x;
            let dy = w.y - pose.y;
            let bx = dx * c + dy * s;
            let by = -dx * s + dy * c;
            assert!((bx - b.x).abs() < 1e-9 && (by - b.y).abs() < 1e-9);
        }
    }

    #[test]
    fn hull_excludes_interior_point() {
        let pts = vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
            Point2::new(0.2, 0.2),
        ];
        match convex_hull(&pts).unwrap() {
            Hull::Polygon(p) => assert_eq!(p.vertices.len(), 3),
            h => panic!("expected polygon, got {h:?}"),
        }
    }

    #[test]
    fn hull_degeneracies() {
        assert!(matches!(
            convex_hull(&[Point2::new(1.0, 2.0)]).unwrap(),
            Hull::Point(_)
        ));
        assert!(matches!(
            convex_hull(&[
                Point2::new(0.0, 0.0),
                Point2::new(1.0, 1.0),
                Point2::new(2.0, 2.0)
            ])
            .unwrap(),
            Hull::Segment(_, _)
        ));
        assert!(convex_hull(&[]).is_err());
    }

    /// Brute-force oracle: a point is a hull vertex iff it is not strictly
    /// inside any triangle formed by three other points.
    fn brute_force_hull(pts: &[Point2]) -> Vec<Point2> {
        let mut verts: Vec<Point2> = Vec::new();
        'outer: for (i, &p) in pts.iter().enumerate() {
            for (j, &a) in pts.iter().enumerate() {
                for (k, &b) in pts.iter().enumerate() {
                    for (l, &c) in pts.iter().enumerate() {
                        if j >= k || k >= l || j == i || k == i || l == i {
                            continue;
                        }
                        if strictly_in_triangle(p, a, b, c, 1e-12) {
                            continue 'outer;
                        }
                    }
                }
            }
            verts.push(p);
        }
        verts
    }

    #[test]
    fn hull_matches_brute_force() {
        // Deterministic pseudo-random points.
        let mut seed = 42u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) as f64 / (1u64 << 31) as f64) * 10.0 - 5.0
        };
        let pts: Vec<Point2> = (0..60).map(|_| Point2::new(next(), next())).collect();
        let hull = match convex_hull(&pts).unwrap() {
            Hull::Polygon(p) => p,
            h => panic!("degenerate hull {h:?}"),
        };
        let mut expected = brute_force_hull(&pts);
        let mut got = hull.vertices.clone();
        let key = |p: &Point2| (p.x, p.y);
        expected.sort_by(|a, b| key(a).0.total_cmp(&key(b).0).then(key(a).1.total_cmp(&key(b).1)));
        got.sort_by(|a, b| key(a).0.total_cmp(&key(b).0).then(key(a).1.total_cmp(&key(b).1)));
        assert_eq!(expected.len(), got.len());
        for (e, g) in expected.iter().zip(&got) {
            assert!(e.distance(g) < 1e-9);
        }
    }

    #[test]
    fn hull_output_is_convex() {
        let mut seed = 7u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) as f64 / (1u64 << 31) as f64) * 4.0
        };
        for _ in 0..20 {
            let pts: Vec<Point2> = (0..30).map(|_| Point2::new(next(), next())).collect();
            if let Hull::Polygon(p) = convex_hull(&pts).unwrap() {
                let n = p.vertices.len();
                for i in 0..n {
                    let o = orient(p.vertices[i], p.vertices[(i + 1) % n], p.vertices[(i + 2) % n]);
                    assert!(o >= -1e-12, "non-convex corner {o}");
                }
            }
        }
    }
}
