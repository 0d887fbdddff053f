//! Car-like motion primitives: straight segments and constant-curvature arcs,
//! closed-form endpoint kinematics and waypoint sampling.

use serde::{Deserialize, Serialize};

use crate::geometry::{wrap_to_pi, Pose2};

/// A straight or circular primitive. `kappa` is signed curvature (positive =
/// left turn), `dir` is +1 forward / -1 backward, `dis` the arc length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotionPrimitive {
    pub kappa: f64,
    pub dir: i8,
    pub dis: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathType {
    Straight,
    ForwardRight,
    ForwardLeft,
    BackwardRight,
    BackwardLeft,
}

impl MotionPrimitive {
    pub fn new(kappa: f64, dir: i8, dis: f64) -> Self {
        debug_assert!(dis > 0.0 && (dir == 1 || dir == -1));
        Self { kappa, dir, dis }
    }

    pub fn path_type(&self) -> PathType {
        match (self.dir, self.kappa) {
            (_, k) if k == 0.0 => PathType::Straight,
            (1, k) if k < 0.0 => PathType::ForwardRight,
            (1, _) => PathType::ForwardLeft,
            (_, k) if k < 0.0 => PathType::BackwardRight,
            _ => PathType::BackwardLeft,
        }
    }

    /// Turning radius for arcs.
    pub fn radius(&self) -> f64 {
        1.0 / self.kappa.abs()
    }

    /// Central angle of the arc; arc length for straight primitives.
    pub fn t_max(&self) -> f64 {
        if self.kappa == 0.0 {
            self.dis
        } else {
            self.dis * self.kappa.abs()
        }
    }

    pub fn inverse(&self) -> MotionPrimitive {
        MotionPrimitive {
            kappa: self.kappa,
            dir: -self.dir,
            dis: self.dis,
        }
    }
}

/// Pose after travelling arc length `s` along the primitive. One closed form
/// covers all five path types: theta advances by dir*kappa*s, the position by
/// the integrated heading.
pub fn pose_at(p0: &Pose2, m: &MotionPrimitive, s: f64) -> Pose2 {
    let d = m.dir as f64;
    if m.kappa == 0.0 {
        return Pose2 {
            x: p0.x + d * s * p0.theta.cos(),
            y: p0.y + d * s * p0.theta.sin(),
            theta: p0.theta,
        };
    }
    let theta = p0.theta + d * m.kappa * s;
    Pose2 {
        x: p0.x + (theta.sin() - p0.theta.sin()) / m.kappa,
        y: p0.y - (theta.cos() - p0.theta.cos()) / m.kappa,
        theta: wrap_to_pi(theta),
    }
}

pub fn endpoint_pose(p0: &Pose2, m: &MotionPrimitive) -> Pose2 {
    pose_at(p0, m, m.dis)
}

/// Poses at arc-length parameters 0, step, 2*step, ..., dis. The endpoint is
/// always included exactly; count is ceil(dis/step) + 1.
pub fn sample_poses(p0: &Pose2, m: &MotionPrimitive, step: f64) -> Vec<Pose2> {
    assert!(step > 0.0);
    let n = (m.dis / step).ceil() as usize;
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        out.push(pose_at(p0, m, i as f64 * step));
    }
    out.push(pose_at(p0, m, m.dis));
    out
}

/// The default hybrid-A*-style set: {straight, max-left, max-right} in both
/// directions, uniform length.
pub fn default_primitive_set(kappa_max: f64, dis: f64) -> Vec<MotionPrimitive> {
    let mut set = Vec::with_capacity(6);
    for dir in [1i8, -1] {
        for kappa in [0.0, kappa_max, -kappa_max] {
            set.push(MotionPrimitive::new(kappa, dir, dis));
        }
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn straight_endpoint() {
        let p = endpoint_pose(
            &Pose2::new(0.0, 0.0, 0.0),
            &MotionPrimitive::new(0.0, 1, 5.0),
        );
        assert!((p.x - 5.0).abs() < 1e-12 && p.y.abs() < 1e-12 && p.theta.abs() < 1e-12);
    }

    #[test]
    fn quarter_circles() {
        // F-L, R = 1, quarter turn about (0, 1).
        let fl = MotionPrimitive::new(1.0, 1, FRAC_PI_2);
        let p = endpoint_pose(&Pose2::new(0.0, 0.0, 0.0), &fl);
        assert!((p.x - 1.0).abs() < 1e-12);
        assert!((p.y - 1.0).abs() < 1e-12);
        assert!((p.theta - FRAC_PI_2).abs() < 1e-12);

        // F-R, R = 1, quarter turn about (0, -1).
        let fr = MotionPrimitive::new(-1.0, 1, FRAC_PI_2);
        let q = endpoint_pose(&Pose2::new(0.0, 0.0, 0.0), &fr);
        assert!((q.x - 1.0).abs() < 1e-12);
        assert!((q.y + 1.0).abs() < 1e-12);
        assert!((q.theta + FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn path_types() {
        assert_eq!(MotionPrimitive::new(0.0, 1, 1.0).path_type(), PathType::Straight);
        assert_eq!(
            MotionPrimitive::new(-0.5, 1, 1.0).path_type(),
            PathType::ForwardRight
        );
        assert_eq!(
            MotionPrimitive::new(0.5, 1, 1.0).path_type(),
            PathType::ForwardLeft
        );
        assert_eq!(
            MotionPrimitive::new(-0.5, -1, 1.0).path_type(),
            PathType::BackwardRight
        );
        assert_eq!(
            MotionPrimitive::new(0.5, -1, 1.0).path_type(),
            PathType::BackwardLeft
        );
    }

    #[test]
    fn sampling_counts_and_endpoint() {
        let m = MotionPrimitive::new(0.0, 1, 1.0);
        let p0 = Pose2::new(0.0, 0.0, 0.0);
        assert_eq!(sample_poses(&p0, &m, 1.0).len(), 2);
        let s = sample_poses(&p0, &m, 0.4);
        assert_eq!(s.len(), 4);
        assert!((s[3].x - 1.0).abs() < 1e-12);
        assert!((s[1].x - 0.4).abs() < 1e-12);
        assert!((s[2].x - 0.8).abs() < 1e-12);
    }

    #[test]
    fn arc_samples_on_pivot_circle() {
        // Radius-residual oracle.
        for (kappa, dir) in [(0.5, 1i8), (-0.5, 1), (0.7, -1), (-0.3, -1)] {
            let m = MotionPrimitive::new(kappa, dir, 3.0);
            let p0 = Pose2::new(1.3, -0.4, 0.9);
            let r = 1.0 / kappa;
            let pivot = (p0.x - r * p0.theta.sin(), p0.y + r * p0.theta.cos());
            for p in sample_poses(&p0, &m, 0.1) {
                let d = (p.x - pivot.0).hypot(p.y - pivot.1);
                assert!((d - m.radius()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn reversibility() {
        let p0 = Pose2::new(2.0, 1.0, -1.2);
        for m in default_primitive_set(0.4, 2.5) {
            let fwd = endpoint_pose(&p0, &m);
            let back = endpoint_pose(&fwd, &m.inverse());
            assert!((back.x - p0.x).abs() < 1e-9);
            assert!((back.y - p0.y).abs() < 1e-9);
            assert!(wrap_to_pi(back.theta - p0.theta).abs() < 1e-9);
        }
    }

    #[test]
    fn backward_left_is_reversed_forward_right() {
        // Point sets coincide when the start of one is the end of the other.
        let fr = MotionPrimitive::new(-0.5, 1, 2.0);
        let p0 = Pose2::new(0.0, 0.0, 0.3);
        let end = endpoint_pose(&p0, &fr);
        let bl = MotionPrimitive::new(-0.5, -1, 2.0);
        let fwd = sample_poses(&p0, &fr, 0.25);
        let rev = sample_poses(&end, &bl, 0.25);
        for (a, b) in fwd.iter().zip(rev.iter().rev()) {
            assert!((a.x - b.x).abs() < 1e-9 && (a.y - b.y).abs() < 1e-9);
        }
    }

    #[test]
    fn theta_linear_in_arc_length() {
        let m = MotionPrimitive::new(0.6, -1, 2.0);
        let p0 = Pose2::new(0.0, 0.0, 0.1);
        let s = sample_poses(&p0, &m, 0.2);
        for (i, p) in s.iter().enumerate().take(s.len() - 1) {
            let expect = 0.1 + (m.dir as f64) * m.kappa * (i as f64 * 0.2);
            assert!(wrap_to_pi(p.theta - expect).abs() < 1e-12);
        }
    }
}
