//! Closed-form monotonicity predicates for the relative angle and the tether
//! length over a single primitive, plus the unchanged-contact-set test. A
//! `guaranteed` verdict lets the planner skip per-waypoint validity checks;
//! `guaranteed = false` is always sound (the caller falls back to dense
//! checking).

use std::f64::consts::PI;

use crate::error::Error;
use crate::geometry::{convex_hull, Hull, Point2, Pose2, EPS};
use crate::primitives::{pose_at, MotionPrimitive};
use crate::tether::{advance_tether, anchor_position, TetherState};
use crate::worldmodel::World;

/// Everything the closed forms need: start pose, anchor offset, retraction
/// point o (the last tether contact) and the primitive.
#[derive(Debug, Clone, Copy)]
pub struct SparsityContext {
    pub p0: Pose2,
    pub offset: (f64, f64),
    pub o: Point2,
    pub primitive: MotionPrimitive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Increasing,
    Decreasing,
    /// Derivative identically ~0 over the primitive (constant function).
    Flat,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonotonicityVerdict {
    pub guaranteed: bool,
    pub branch: Branch,
}

impl MonotonicityVerdict {
    fn none() -> Self {
        Self {
            guaranteed: false,
            branch: Branch::None,
        }
    }

    fn from_sign(d: f64) -> Self {
        let branch = if d > EPS {
            Branch::Increasing
        } else if d < -EPS {
            Branch::Decreasing
        } else {
            Branch::Flat
        };
        Self {
            guaranteed: true,
            branch,
        }
    }
}

/// Shared coefficients of the arc-path derivatives. With pivot p_c of the
/// turning circle, u = theta0 + s_theta*t and span vector (X, Y) = o - s(t):
///   dPhi~/dt = -s_theta * (S - C1 cos u + C2 sin u)
///   dL~/dt   =  s_theta * (C2 cos u + C1 sin u)
/// where S = |o - p_c|^2 and (C1, C2) mix the offset with o - p_c.
struct ArcForm {
    s_theta: f64,
    t_max: f64,
    theta0: f64,
    s: f64,
    c1: f64,
    c2: f64,
}

fn arc_form(ctx: &SparsityContext) -> Option<ArcForm> {
    let m = ctx.primitive;
    if m.kappa == 0.0 {
        return None;
    }
    let r = 1.0 / m.kappa;
    let p = ctx.o.x - ctx.p0.x + r * ctx.p0.theta.sin();
    let q = ctx.o.y - ctx.p0.y - r * ctx.p0.theta.cos();
    let mm = ctx.offset.1 - r;
    Some(ArcForm {
        s_theta: (m.dir as f64) * m.kappa.signum(),
        t_max: m.t_max(),
        theta0: ctx.p0.theta,
        s: p * p + q * q,
        c1: p * ctx.offset.0 + q * mm,
        c2: p * mm - q * ctx.offset.0,
    })
}

/// Straight-path constant of dPhi~/dt (up to the positive span factor).
fn straight_dphi(ctx: &SparsityContext) -> f64 {
    let (st, ct) = ctx.p0.theta.sin_cos();
    (ctx.primitive.dir as f64)
        * (ct * (ctx.o.y - ctx.p0.y) - st * (ctx.o.x - ctx.p0.x) - ctx.offset.1)
}

/// Straight-path span projection: dL~/dt = 2 (t - dir * E).
fn straight_e(ctx: &SparsityContext) -> f64 {
    let (st, ct) = ctx.p0.theta.sin_cos();
    ct * (ctx.o.x - ctx.p0.x) + st * (ctx.o.y - ctx.p0.y) - ctx.offset.0
}

/// Exact extrema of cos over (a, b), evaluated as if the interval were
/// closed — conservative for strict-sign tests.
pub fn cos_range_open(a: f64, b: f64) -> Result<(f64, f64), Error> {
    if !(a < b) || b - a > 2.0 * PI + 1e-9 {
        return Err(Error::BadInterval(a, b));
    }
    // Is some (offset + 2k*pi) inside [a, b]?
    let contains_crest = |offset: f64| {
        let k = ((a - offset) / (2.0 * PI)).ceil();
        offset + k * 2.0 * PI <= b
    };
    let (ca, cb) = (a.cos(), b.cos());
    let max = if contains_crest(0.0) { 1.0 } else { ca.max(cb) };
    let min = if contains_crest(PI) { -1.0 } else { ca.min(cb) };
    Ok((min, max))
}

fn cos_extrema(lo: f64, hi: f64) -> (f64, f64) {
    if hi - lo >= 2.0 * PI {
        (-1.0, 1.0)
    } else {
        cos_range_open(lo, hi).expect("ordered sub-revolution interval")
    }
}

/// Parameter range of u = theta0 + s_theta * t shifted by `shift`, ordered.
fn u_interval(f: &ArcForm, shift: f64) -> (f64, f64) {
    let a = f.theta0 + shift;
    let b = f.theta0 + f.s_theta * f.t_max + shift;
    (a.min(b), a.max(b))
}

/// Is the relative angle guaranteed monotone over the whole primitive?
/// Straight paths always are (their scaled derivative is constant in t).
pub fn is_rel_angle_monotonic(ctx: &SparsityContext) -> MonotonicityVerdict {
    let Some(f) = arc_form(ctx) else {
        return MonotonicityVerdict::from_sign(straight_dphi(ctx));
    };
    if f.s <= EPS {
        // Pivot coincides with o: the span collapses somewhere on the circle.
        return MonotonicityVerdict::none();
    }
    let k = f.c1.hypot(f.c2);
    if k <= EPS {
        return MonotonicityVerdict::from_sign(-f.s_theta * f.s);
    }
    // S - C1 cos u + C2 sin u = S - k cos(u + phi), phi = atan2(C2, C1).
    let phi = f.c2.atan2(f.c1);
    let (lo, hi) = u_interval(&f, phi);
    let (minc, maxc) = cos_extrema(lo, hi);
    if f.s - k * maxc > EPS {
        MonotonicityVerdict::from_sign(-f.s_theta)
    } else if f.s - k * minc < -EPS {
        MonotonicityVerdict::from_sign(f.s_theta)
    } else {
        MonotonicityVerdict::none()
    }
}

/// Is the tether length guaranteed monotone (or constant) over the primitive?
pub fn is_tether_len_monotonic(ctx: &SparsityContext) -> MonotonicityVerdict {
    let Some(f) = arc_form(ctx) else {
        // dL~/dt = 2 (t - dir*E) over t in (0, t_max): one sign iff the root
        // dir*E lies outside the interval with margin.
        let de = (ctx.primitive.dir as f64) * straight_e(ctx);
        if de < -EPS {
            return MonotonicityVerdict {
                guaranteed: true,
                branch: Branch::Increasing,
            };
        }
        if de > ctx.primitive.t_max() + EPS {
            return MonotonicityVerdict {
                guaranteed: true,
                branch: Branch::Decreasing,
            };
        }
        return MonotonicityVerdict::none();
    };
    let k = f.c1.hypot(f.c2);
    if k <= EPS {
        // Anchor circles o at constant distance.
        return MonotonicityVerdict {
            guaranteed: true,
            branch: Branch::Flat,
        };
    }
    // C2 cos u + C1 sin u = k cos(u - gamma), gamma = atan2(C1, C2).
    let gamma = f.c1.atan2(f.c2);
    let (lo, hi) = u_interval(&f, -gamma);
    let (minc, maxc) = cos_extrema(lo, hi);
    if k * minc > EPS {
        MonotonicityVerdict::from_sign(f.s_theta)
    } else if k * maxc < -EPS {
        MonotonicityVerdict::from_sign(-f.s_theta)
    } else {
        MonotonicityVerdict::none()
    }
}

/// Scaled derivatives (dPhi~/dt, dL~/dt) at arc parameter `t` (central angle
/// for arcs, arc length for straight paths). Each is the true derivative
/// times a strictly positive factor, so only the signs are meaningful.
pub fn analytic_derivative(ctx: &SparsityContext, t: f64) -> (f64, f64) {
    match arc_form(ctx) {
        None => {
            let dl = 2.0 * (t - (ctx.primitive.dir as f64) * straight_e(ctx));
            (straight_dphi(ctx), dl)
        }
        Some(f) => {
            let u = f.theta0 + f.s_theta * t;
            let (su, cu) = u.sin_cos();
            let dphi = -f.s_theta * (f.s - f.c1 * cu + f.c2 * su);
            let dl = f.s_theta * (f.c2 * cu + f.c1 * su);
            (dphi, dl)
        }
    }
}

/// Anchor position at arc parameter `t`.
pub fn anchor_at(ctx: &SparsityContext, t: f64) -> Point2 {
    let arclen = if ctx.primitive.kappa == 0.0 {
        t
    } else {
        t / ctx.primitive.kappa.abs()
    };
    anchor_position(&pose_at(&ctx.p0, &ctx.primitive, arclen), ctx.offset)
}

/// Relative angle at arc parameter `t`.
pub fn phi_at(ctx: &SparsityContext, t: f64) -> f64 {
    let arclen = if ctx.primitive.kappa == 0.0 {
        t
    } else {
        t / ctx.primitive.kappa.abs()
    };
    let pose = pose_at(&ctx.p0, &ctx.primitive, arclen);
    let s = anchor_position(&pose, ctx.offset);
    crate::geometry::wrap_to_pi((ctx.o.y - s.y).atan2(ctx.o.x - s.x) - pose.theta)
}

/// Length of the live tether span |o - s(t)| at arc parameter `t`.
pub fn span_at(ctx: &SparsityContext, t: f64) -> f64 {
    ctx.o.distance(&anchor_at(ctx, t))
}

/// Advances the contact chain through consecutive anchor samples.
pub fn advance_along_samples(t: &TetherState, samples: &[Point2], world: &World) -> TetherState {
    let mut state = t.clone();
    for w in samples.windows(2) {
        state = advance_tether(&state, w[0], w[1], world);
    }
    state
}

/// The unchanged-contact-set test: endpoint contact chains identical and the
/// convex hull of {o} and the anchor path clear of obstacle interiors. Also
/// returns the endpoint state so callers do not advance twice.
///
/// The endpoint state comes from one funnel sweep over the whole chord — the
/// point of the optimization is to skip the per-sample advance. A wrapping
/// the chord sweep misses puts a corner inside the hull, so a `true` verdict
/// still implies the dense advance would report no contact change.
pub(crate) fn contact_constancy(
    t: &TetherState,
    samples: &[Point2],
    world: &World,
) -> (bool, TetherState) {
    let end = match (samples.first(), samples.last()) {
        (Some(&a), Some(&b)) if samples.len() >= 2 => advance_tether(t, a, b, world),
        _ => t.clone(),
    };
    let same = end.contacts.len() == t.contacts.len()
        && end
            .contacts
            .iter()
            .zip(&t.contacts)
            .all(|(a, b)| a.point.distance(&b.point) < EPS && a.wrap == b.wrap);
    if !same {
        return (false, end);
    }
    let mut pts = Vec::with_capacity(samples.len() + 1);
    pts.push(t.last_contact());
    pts.extend_from_slice(samples);
    let free = match convex_hull(&pts) {
        Ok(Hull::Segment(a, b)) => !world.map.segment_hits_obstacle(a, b),
        // Occupied cells are epsilon-shrunk inside polygon_hits_obstacle, so
        // a hull touching o (itself an obstacle corner) stays admissible.
        Ok(Hull::Polygon(poly)) => !world.map.polygon_hits_obstacle(&poly),
        // Anchor pinned on o: degenerate, let the dense path decide.
        Ok(Hull::Point(_)) | Err(_) => false,
    };
    (free, end)
}

pub fn is_contact_set_constant(t: &TetherState, samples: &[Point2], world: &World) -> bool {
    contact_constancy(t, samples, world).0
}
