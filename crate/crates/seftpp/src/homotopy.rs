//! h-signature words over vertical obstacle rays: crossing detection,
//! free-group word reduction and equality.

use crate::geometry::Point2;
use crate::worldmodel::ObstaclePolygon;

/// One signed ray crossing: `sign = +1` for left-to-right (increasing x).
pub type Letter = (usize, i8);

/// Reduced word of signed ray crossings identifying the homotopy class of a
/// path. The reduced form never holds an adjacent cancelling pair.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HWord {
    letters: Vec<Letter>,
}

impl HWord {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Appends raw letters and keeps the word fully reduced.
    pub fn append_reduce(&self, extra: &[Letter]) -> HWord {
        let mut stack = self.letters.clone();
        for &(id, sign) in extra {
            match stack.last() {
                Some(&(top_id, top_sign)) if top_id == id && top_sign == -sign => {
                    stack.pop();
                }
                _ => stack.push((id, sign)),
            }
        }
        HWord { letters: stack }
    }

    pub fn from_letters(letters: &[Letter]) -> HWord {
        HWord::empty().append_reduce(letters)
    }

    pub fn inverse(&self) -> HWord {
        HWord {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|&(id, sign)| (id, -sign))
                .collect(),
        }
    }

    /// Net exponent of ray `id` in the word.
    pub fn net_exponent(&self, id: usize) -> i64 {
        self.letters
            .iter()
            .filter(|&&(i, _)| i == id)
            .map(|&(_, s)| s as i64)
            .sum()
    }
}

impl std::fmt::Display for HWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        let mut first = true;
        for &(id, sign) in &self.letters {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if sign > 0 {
                write!(f, "r{id}")?;
            } else {
                write!(f, "r{id}^-1")?;
            }
        }
        Ok(())
    }
}

pub fn h_equals(a: &HWord, b: &HWord) -> bool {
    a.letters == b.letters
}

/// Signed crossings of segment p->q against the obstacle rays, ordered by the
/// crossing parameter along the segment. A crossing counts only strictly
/// above the ray origin; a vertex exactly on a ray belongs to the +x side
/// (half-open rule), so chained segments count each crossing exactly once.
pub fn segment_crossings(p: Point2, q: Point2, rays: &[ObstaclePolygon]) -> Vec<Letter> {
    let mut hits: Vec<(f64, Letter)> = Vec::new();
    for ob in rays {
        let rx = ob.ray_x();
        let left_p = p.x < rx;
        let left_q = q.x < rx;
        if left_p == left_q {
            continue;
        }
        let t = (rx - p.x) / (q.x - p.x);
        let y = p.y + t * (q.y - p.y);
        if y > ob.representative.y {
            let sign = if q.x > p.x { 1 } else { -1 };
            hits.push((t, (ob.id, sign)));
        }
    }
    hits.sort_by(|a, b| a.0.total_cmp(&b.0));
    hits.into_iter().map(|(_, l)| l).collect()
}

/// Crossings accumulated along a sampled polyline.
pub fn polyline_word(points: &[Point2], rays: &[ObstaclePolygon]) -> HWord {
    let mut word = HWord::empty();
    for w in points.windows(2) {
        word = word.append_reduce(&segment_crossings(w[0], w[1], rays));
    }
    word
}
