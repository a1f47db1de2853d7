//! Obstacles, line-of-sight tests and horizon (tangency) points.
//!
//! Orientation convention: boundaries are traversed counter-clockwise and the
//! normal `n` is outward, so `dn/ds = kappa * t`. Seen from an exterior vantage
//! point `v`, the visible boundary is where `(v - x(s)) . n(s) > 0`; the lower
//! horizon is where that window opens (smaller `s`), the upper where it closes.

mod arc;
mod polygon;
mod vec2;

pub use arc::{ArcFrame, ArcSample, ArcTable, ConvexArc};
pub use polygon::ConvexPolygon;
pub use vec2::{point_segment, segment_segment, segments_intersect, Vec2};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Vec2,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Vec2, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || !center.is_finite() {
            return Err(Error::InvalidObstacle("circle radius must be positive".into()));
        }
        Ok(Circle { center, radius })
    }

    /// Arclength of the boundary point at polar angle `theta`, measured from angle 0.
    pub fn arclength(&self, theta: f64) -> f64 {
        self.radius * wrap_angle(theta)
    }
}

/// Wraps an angle to `(-pi, pi]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta % (2.0 * PI);
    if t <= -PI {
        t += 2.0 * PI;
    } else if t > PI {
        t -= 2.0 * PI;
    }
    t
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Obstacle {
    Circle(Circle),
    Polygon { vertices: ConvexPolygon },
    Arc(ConvexArc),
}

/// Location of a horizon along the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum HorizonParam {
    Arclength(f64),
    /// Polygon vertex index; the curvature there is infinite.
    Corner(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Horizon {
    pub param: HorizonParam,
    pub point: Vec2,
    pub distance: f64,
    pub curvature: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HorizonData {
    pub lower: Horizon,
    pub upper: Horizon,
}

impl Obstacle {
    pub fn circle(center: Vec2, radius: f64) -> Result<Self> {
        Ok(Obstacle::Circle(Circle::new(center, radius)?))
    }

    pub fn polygon(vertices: Vec<Vec2>) -> Result<Self> {
        Ok(Obstacle::Polygon { vertices: ConvexPolygon::new(vertices)? })
    }

    pub fn as_polygon(&self) -> Option<&ConvexPolygon> {
        match self {
            Obstacle::Polygon { vertices } => Some(vertices),
            _ => None,
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            Obstacle::Circle(c) => 2.0 * c.radius,
            Obstacle::Polygon { vertices } => vertices.diameter(),
            Obstacle::Arc(a) => a.hull().diameter(),
        }
    }

    /// Length scale used for relative tolerances of queries involving `pts`.
    pub fn scene_scale(&self, pts: &[Vec2]) -> f64 {
        let mut d = self.diameter();
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                d = d.max(a.dist(*b));
            }
        }
        d
    }

    /// Negative inside the obstacle, positive outside, zero on the boundary.
    pub fn signed_distance(&self, p: Vec2) -> f64 {
        match self {
            Obstacle::Circle(c) => p.dist(c.center) - c.radius,
            Obstacle::Polygon { vertices } => vertices.signed_distance(p),
            Obstacle::Arc(a) => a.hull().signed_distance(p),
        }
    }

    /// Distance from a point outside the obstacle to the obstacle.
    pub fn distance(&self, p: Vec2) -> f64 {
        self.signed_distance(p).max(0.0)
    }

    /// Signed clearance of the closed segment `[a, b]`: its distance to the
    /// obstacle when they are disjoint, minus the penetration depth otherwise.
    pub fn segment_clearance(&self, a: Vec2, b: Vec2) -> f64 {
        match self {
            Obstacle::Circle(c) => point_segment(c.center, a, b).0 - c.radius,
            Obstacle::Polygon { vertices } => vertices.segment_clearance(a, b),
            Obstacle::Arc(arc) => {
                let c = arc.hull().segment_clearance(a, b);
                if c <= 0.0 {
                    c
                } else {
                    arc_closest(arc, a, b).0
                }
            }
        }
    }

    /// Point of the obstacle closest to the segment `[a, b]`.
    pub fn closest_point(&self, a: Vec2, b: Vec2) -> Result<Vec2> {
        match self {
            Obstacle::Circle(c) => {
                let (_, u) = point_segment(c.center, a, b);
                let foot = a + (b - a) * u;
                let r = foot - c.center;
                if r.norm() == 0.0 {
                    return Err(Error::AmbiguousTangency);
                }
                Ok(c.center + r.normalized() * c.radius)
            }
            Obstacle::Polygon { vertices } => {
                let tol = 1e-12 * self.scene_scale(&[a, b]);
                vertices.closest_point(a, b, tol)
            }
            Obstacle::Arc(arc) => Ok(arc_closest(arc, a, b).1),
        }
    }

    pub fn horizons(&self, v: Vec2) -> Result<HorizonData> {
        let tol = 1e-12 * self.scene_scale(&[v]);
        if self.signed_distance(v) <= tol {
            return Err(Error::InsideObstacle("vantage"));
        }
        match self {
            Obstacle::Circle(c) => {
                let rel = v - c.center;
                let dist = rel.norm();
                let beta = rel.angle();
                let alpha = (c.radius / dist).acos();
                let tangent_len = (dist * dist - c.radius * c.radius).sqrt();
                let make = |theta: f64| Horizon {
                    param: HorizonParam::Arclength(c.arclength(theta)),
                    point: c.center + Vec2::polar(c.radius, theta),
                    distance: tangent_len,
                    curvature: 1.0 / c.radius,
                };
                Ok(HorizonData { lower: make(beta - alpha), upper: make(beta + alpha) })
            }
            Obstacle::Polygon { vertices } => polygon_horizons(vertices, v),
            Obstacle::Arc(arc) => {
                let make = |s: f64| {
                    let f = arc.frame(s);
                    Horizon {
                        param: HorizonParam::Arclength(s),
                        point: f.point,
                        distance: v.dist(f.point),
                        curvature: f.kappa,
                    }
                };
                Ok(HorizonData {
                    lower: make(arc.lower_horizon(v)?),
                    upper: make(arc.upper_horizon(v)?),
                })
            }
        }
    }

    /// Curvature at a horizon location.
    pub fn curvature_at(&self, param: HorizonParam) -> f64 {
        match (self, param) {
            (_, HorizonParam::Corner(_)) => f64::INFINITY,
            (Obstacle::Circle(c), _) => 1.0 / c.radius,
            (Obstacle::Arc(a), HorizonParam::Arclength(s)) => a.curvature_at(s),
            (Obstacle::Polygon { .. }, HorizonParam::Arclength(_)) => 0.0,
        }
    }
}

fn polygon_horizons(poly: &ConvexPolygon, v: Vec2) -> Result<HorizonData> {
    let n = poly.len();
    // Grazing edges (residual exactly zero) count as not visible.
    let visible: Vec<bool> = (0..n)
        .map(|i| (v - poly.vertex(i)).dot(poly.edge_normal(i)) > 0.0)
        .collect();
    let first = (0..n).find(|&i| visible[i] && !visible[(i + n - 1) % n]);
    let last = (0..n).find(|&i| visible[i] && !visible[(i + 1) % n]);
    let (Some(first), Some(last)) = (first, last) else {
        return Err(Error::NoHorizon);
    };
    let make = |k: usize| Horizon {
        param: HorizonParam::Corner(k),
        point: poly.vertex(k),
        distance: v.dist(poly.vertex(k)),
        curvature: f64::INFINITY,
    };
    Ok(HorizonData { lower: make(first), upper: make((last + 1) % n) })
}

/// Closest arc point to a segment that misses the arc: nearest sample, then a
/// golden-section refinement on the neighbouring arclength interval.
fn arc_closest(arc: &ConvexArc, a: Vec2, b: Vec2) -> (f64, Vec2) {
    let samples = arc.samples();
    let dist = |p: Vec2| point_segment(p, a, b).0;
    let (i, _) = samples
        .iter()
        .enumerate()
        .map(|(i, w)| (i, dist(w.point)))
        .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    let lo = samples[i.saturating_sub(1)].s;
    let hi = samples[(i + 1).min(samples.len() - 1)].s;
    let f = |s: f64| dist(arc.point(s));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut x0, mut x1) = (lo, hi);
    for _ in 0..80 {
        let c = x1 - g * (x1 - x0);
        let d = x0 + g * (x1 - x0);
        if f(c) < f(d) {
            x1 = d;
        } else {
            x0 = c;
        }
    }
    let s = 0.5 * (x0 + x1);
    let p = arc.point(s);
    (dist(p), p)
}

/// Line-of-sight test: true iff the open segment `(a, b)` meets the open
/// obstacle. Tangency (within `1e-12` of the scene diameter) counts as visible.
pub fn segment_blocked(a: Vec2, b: Vec2, obs: &Obstacle) -> Result<bool> {
    let tol = 1e-12 * obs.scene_scale(&[a, b]);
    if obs.signed_distance(a) < -tol {
        return Err(Error::InsideObstacle("segment start"));
    }
    if obs.signed_distance(b) < -tol {
        return Err(Error::InsideObstacle("segment end"));
    }
    Ok(match obs {
        Obstacle::Polygon { vertices } => vertices.segment_crosses(a, b, tol),
        _ => obs.segment_clearance(a, b) < -tol,
    })
}

/// Signed distance of `v` from the tangent line of a smooth boundary at `s`.
pub fn tangency_residual(arc: &ConvexArc, s: f64, v: Vec2) -> f64 {
    arc.tangency_residual(s, v)
}
