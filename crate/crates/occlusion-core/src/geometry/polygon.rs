use super::vec2::{point_segment, segment_segment, Vec2};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Strictly convex polygon with counter-clockwise vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec2>", into = "Vec<Vec2>")]
pub struct ConvexPolygon {
    vertices: Vec<Vec2>,
    normals: Vec<Vec2>,
}

impl TryFrom<Vec<Vec2>> for ConvexPolygon {
    type Error = Error;
    fn try_from(v: Vec<Vec2>) -> Result<Self> {
        ConvexPolygon::new(v)
    }
}

impl From<ConvexPolygon> for Vec<Vec2> {
    fn from(p: ConvexPolygon) -> Self {
        p.vertices
    }
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<Vec2>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidObstacle("polygon needs at least three vertices".into()));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidObstacle("polygon vertex is not finite".into()));
        }
        let mut normals = Vec::with_capacity(n);
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            if (b - a).cross(c - b) <= 0.0 {
                return Err(Error::InvalidObstacle(format!(
                    "vertices must be strictly convex and counter-clockwise (fails at vertex {})",
                    (i + 1) % n
                )));
            }
            normals.push((b - a).normalized().perp_cw());
        }
        let winding: f64 = (0..n).map(|i| vertices[i].cross(vertices[(i + 1) % n])).sum();
        if winding <= 0.0 {
            return Err(Error::InvalidObstacle("polygon is not counter-clockwise".into()));
        }
        // A star-shaped turn sequence passes the local test; reject total turning beyond 2*pi.
        let turning: f64 = (0..n)
            .map(|i| {
                let e0 = vertices[(i + 1) % n] - vertices[i];
                let e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
                e0.cross(e1).atan2(e0.dot(e1))
            })
            .sum();
        if (turning - 2.0 * std::f64::consts::PI).abs() > 1e-6 {
            return Err(Error::InvalidObstacle("polygon winds more than once".into()));
        }
        Ok(ConvexPolygon { vertices, normals })
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> Vec2 {
        self.vertices[i % self.vertices.len()]
    }

    /// Outward unit normal of the edge from vertex `i` to vertex `i + 1`.
    pub fn edge_normal(&self, i: usize) -> Vec2 {
        self.normals[i % self.normals.len()]
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max(a.dist(*b));
            }
        }
        d
    }

    /// Negative inside (minus the distance to the boundary), positive outside.
    pub fn signed_distance(&self, p: Vec2) -> f64 {
        let support = self
            .vertices
            .iter()
            .zip(&self.normals)
            .map(|(v, n)| (p - *v).dot(*n))
            .fold(f64::NEG_INFINITY, f64::max);
        if support <= 0.0 {
            return support;
        }
        self.edges()
            .map(|(a, b)| point_segment(p, a, b).0)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Largest depth of the segment inside the polygon (<= 0 when disjoint).
    fn penetration(&self, a: Vec2, b: Vec2) -> f64 {
        let depth = |u: f64| -self.signed_depth_linear(a + (b - a) * u);
        // depth is concave along the segment.
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..100 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if depth(m1) < depth(m2) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        depth(0.5 * (lo + hi)).max(depth(0.0)).max(depth(1.0))
    }

    fn signed_depth_linear(&self, p: Vec2) -> f64 {
        self.vertices
            .iter()
            .zip(&self.normals)
            .map(|(v, n)| (p - *v).dot(*n))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Whether the open segment meets the polygon shrunk by `tol` (Cyrus-Beck clipping).
    pub fn segment_crosses(&self, a: Vec2, b: Vec2, tol: f64) -> bool {
        let d = b - a;
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for (v, n) in self.vertices.iter().zip(&self.normals) {
            let num = (a - *v).dot(*n) + tol;
            let den = d.dot(*n);
            if den == 0.0 {
                if num >= 0.0 {
                    return false;
                }
                continue;
            }
            let u = -num / den;
            if den > 0.0 {
                hi = hi.min(u);
            } else {
                lo = lo.max(u);
            }
            if lo >= hi {
                return false;
            }
        }
        true
    }

    /// Signed clearance of the segment: distance to the polygon when disjoint,
    /// minus the penetration depth otherwise.
    pub fn segment_clearance(&self, a: Vec2, b: Vec2) -> f64 {
        let pen = self.penetration(a, b);
        if pen > 0.0 {
            return -pen;
        }
        self.edges()
            .map(|(c, d)| segment_segment(a, b, c, d).0)
            .fold(f64::INFINITY, f64::min)
    }

    /// Closest polygon point to the segment, with an error when the closest set
    /// is a piece of an edge.
    pub fn closest_point(&self, a: Vec2, b: Vec2, tol: f64) -> Result<Vec2> {
        let mut best = (f64::INFINITY, Vec2::ZERO, 0usize);
        for (i, (c, d)) in self.edges().enumerate() {
            let (dist, q) = segment_segment(a, b, c, d);
            if dist < best.0 {
                best = (dist, q, i);
            }
        }
        let (dmin, q, _) = best;
        let sdir = b - a;
        if sdir.norm() == 0.0 {
            return Ok(q);
        }
        let sdir = sdir.normalized();
        for (c, d) in self.edges() {
            if segment_segment(a, b, c, d).0 > dmin + tol {
                continue;
            }
            let e = (d - c).normalized();
            if e.cross(sdir).abs() < 1e-9 {
                // Parallel to a closest edge: check for an overlapping stretch.
                let (p0, p1) = (e.dot(a - c), e.dot(b - c));
                let lo = p0.min(p1).max(0.0);
                let hi = p0.max(p1).min((d - c).norm());
                if hi - lo > tol {
                    return Err(Error::AmbiguousTangency);
                }
            }
        }
        Ok(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> ConvexPolygon {
        ConvexPolygon::new(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn rejects_clockwise_and_nonconvex() {
        assert!(ConvexPolygon::new(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(1.0, 0.0),
        ])
        .is_err());
        assert!(ConvexPolygon::new(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(2.0, 0.0),
            Vec2::new(1.0, 0.2),
            Vec2::new(1.0, 1.0),
        ])
        .is_err());
    }

    #[test]
    fn signed_distance_and_clearance() {
        let sq = square();
        assert!((sq.signed_distance(Vec2::new(0.5, 0.5)) + 0.5).abs() < 1e-15);
        assert!((sq.signed_distance(Vec2::new(2.0, 2.0)) - 2f64.sqrt()).abs() < 1e-15);
        let c = sq.segment_clearance(Vec2::new(-1.0, 0.5), Vec2::new(2.0, 0.5));
        assert!((c + 0.5).abs() < 1e-12);
        let c = sq.segment_clearance(Vec2::new(-1.0, 2.0), Vec2::new(2.0, 2.0));
        assert!((c - 1.0).abs() < 1e-15);
        let c = sq.segment_clearance(Vec2::new(-1.0, 3.0), Vec2::new(3.0, -1.0));
        assert!(c.abs() < 1e-12, "touching a vertex: {c}");
    }

    #[test]
    fn clipping_agrees_with_clearance() {
        let sq = square();
        let cases = [
            (Vec2::new(-1.0, 0.5), Vec2::new(2.0, 0.5), true),
            (Vec2::new(-1.0, 1.0), Vec2::new(2.0, 1.0), false),
            (Vec2::new(-1.0, 3.0), Vec2::new(3.0, -1.0), false),
            (Vec2::new(-1.0, 2.9), Vec2::new(3.0, -1.1), true),
            (Vec2::new(2.0, 0.5), Vec2::new(3.0, 0.5), false),
        ];
        for (a, b, want) in cases {
            assert_eq!(sq.segment_crosses(a, b, 1e-12), want, "{a:?} {b:?}");
            assert_eq!(sq.segment_clearance(a, b) < -1e-12, want);
        }
    }

    #[test]
    fn flat_side_tangency_is_ambiguous() {
        let sq = square();
        let r = sq.closest_point(Vec2::new(-1.0, 1.0), Vec2::new(2.0, 1.0), 1e-12);
        assert_eq!(r, Err(Error::AmbiguousTangency));
        let q = sq
            .closest_point(Vec2::new(-1.0, 3.0), Vec2::new(3.0, -1.0), 1e-12)
            .unwrap();
        assert!((q - Vec2::new(1.0, 1.0)).norm() < 1e-12);
    }
}
