//! Counter-clockwise parametrized convex boundary arc with curvature bounded below.
//!
//! The curve is stored as a table of samples. Between samples the curvature is
//! linear in arclength; the tangent angle and position follow by integrating it,
//! so a table built from a circle reproduces the circle to rounding error.

use super::polygon::ConvexPolygon;
use super::vec2::Vec2;
use crate::error::{Error, Result};
use crate::roots;
use serde::{Deserialize, Serialize};

/// One row of the arc table. `normal` is the outward normal, equal to the
/// tangent rotated by -90 degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcSample {
    pub s: f64,
    pub point: Vec2,
    pub tangent: Vec2,
    pub normal: Vec2,
    pub kappa: f64,
}

/// Point, unit tangent, outward unit normal and curvature at one arclength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcFrame {
    pub point: Vec2,
    pub tangent: Vec2,
    pub normal: Vec2,
    pub kappa: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ArcTable", into = "ArcTable")]
pub struct ConvexArc {
    samples: Vec<ArcSample>,
    kappa0: f64,
    lipschitz: f64,
    kappa_max: f64,
    half_length: f64,
    hull: ConvexPolygon,
}

/// Serialized form of [`ConvexArc`]; validated on conversion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArcTable {
    pub samples: Vec<ArcSample>,
    pub kappa0: f64,
    pub lipschitz: f64,
}

impl From<ConvexArc> for ArcTable {
    fn from(a: ConvexArc) -> Self {
        ArcTable { samples: a.samples, kappa0: a.kappa0, lipschitz: a.lipschitz }
    }
}

impl TryFrom<ArcTable> for ConvexArc {
    type Error = Error;
    fn try_from(t: ArcTable) -> Result<Self> {
        ConvexArc::new(t.samples, t.kappa0, t.lipschitz)
    }
}

const GAUSS4: [(f64, f64); 4] = [
    (-0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
    (-0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
    (0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
    (0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
];

/// Displacement after arclength `h` starting with unit tangent `t`, curvature
/// `k` and curvature slope `m`.
fn advance(t: Vec2, k: f64, m: f64, h: f64) -> (Vec2, Vec2) {
    let phi = |x: f64| k * x + 0.5 * m * x * x;
    let half = 0.5 * h;
    let mut disp = Vec2::ZERO;
    for (node, w) in GAUSS4 {
        let x = half * (node + 1.0);
        disp += t.rotate(phi(x)) * (w * half);
    }
    (disp, t.rotate(phi(h)))
}

impl ConvexArc {
    /// Validates a sample table. Requirements: strictly increasing `s`
    /// symmetric about zero, spacing at most `1e-3 * L`, unit tangents with
    /// outward normals, tangent turning consistent with the curvature column,
    /// curvature at least `kappa0 > 0`, and curvature differences bounded by
    /// `lipschitz * |ds|`.
    pub fn new(samples: Vec<ArcSample>, kappa0: f64, lipschitz: f64) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidObstacle(m));
        if samples.len() < 3 {
            return bad("arc needs at least three samples".into());
        }
        if !(kappa0 > 0.0) || !(lipschitz >= 0.0) {
            return bad("kappa0 must be positive and lipschitz non-negative".into());
        }
        let first = samples[0].s;
        let last = samples[samples.len() - 1].s;
        let half_length = 0.5 * (last - first);
        if !(half_length > 0.0) || (first + last).abs() > 1e-9 * half_length {
            return bad("arclength range must be symmetric [-L, L]".into());
        }
        let max_step = 1e-3 * half_length * (1.0 + 1e-9);
        let mut kappa_max: f64 = 0.0;
        for (i, w) in samples.iter().enumerate() {
            if !(w.s.is_finite() && w.point.is_finite() && w.kappa.is_finite()) {
                return bad(format!("sample {i} is not finite"));
            }
            if (w.tangent.norm() - 1.0).abs() > 1e-9 {
                return bad(format!("sample {i}: tangent is not unit length"));
            }
            if (w.normal - w.tangent.perp_cw()).norm() > 1e-9 {
                return bad(format!(
                    "sample {i}: normal is not the outward normal of a counter-clockwise tangent"
                ));
            }
            if w.kappa < kappa0 * (1.0 - 1e-12) {
                return bad(format!("sample {i}: curvature {} below kappa0 {kappa0}", w.kappa));
            }
            kappa_max = kappa_max.max(w.kappa);
        }
        for (i, pair) in samples.windows(2).enumerate() {
            let (a, b) = (pair[0], pair[1]);
            let ds = b.s - a.s;
            if !(ds > 0.0) {
                return bad(format!("samples {i},{} are not increasing in s", i + 1));
            }
            if ds > max_step {
                return bad(format!("sample spacing {ds} exceeds 1e-3 L"));
            }
            if (b.kappa - a.kappa).abs() > lipschitz * ds * (1.0 + 1e-9) + 1e-12 * kappa_max {
                return bad(format!("curvature Lipschitz bound violated between samples {i} and {}", i + 1));
            }
            let turn = a.tangent.cross(b.tangent).atan2(a.tangent.dot(b.tangent));
            let expected = 0.5 * (a.kappa + b.kappa) * ds;
            if (turn - expected).abs() > 1e-6 * expected.max(1e-3 * ds) + 1e-12 {
                return bad(format!(
                    "tangent turning between samples {i} and {} disagrees with curvature",
                    i + 1
                ));
            }
        }
        let hull = ConvexPolygon::new(samples.iter().map(|w| w.point).collect()).map_err(|_| {
            Error::InvalidObstacle("arc samples do not form a convex counter-clockwise curve".into())
        })?;
        Ok(ConvexArc { samples, kappa0, lipschitz, kappa_max, half_length, hull })
    }

    /// Builds a table from a curvature profile, integrating from the anchor at
    /// `s = 0` in both directions. `kappa0` and the Lipschitz constant are read
    /// off the table.
    pub fn from_curvature<F: Fn(f64) -> f64>(
        kappa: F,
        half_length: f64,
        cells: usize,
        anchor: Vec2,
        anchor_tangent_angle: f64,
    ) -> Result<Self> {
        let cells = cells.max(2002) & !1;
        let half = cells / 2;
        let ds = 2.0 * half_length / cells as f64;
        let s_at = |i: usize| (i as f64 - half as f64) * ds;
        let kap: Vec<f64> = (0..=cells).map(|i| kappa(s_at(i))).collect();
        let mut pts = vec![Vec2::ZERO; cells + 1];
        let mut tans = vec![Vec2::ZERO; cells + 1];
        pts[half] = anchor;
        tans[half] = Vec2::from_angle(anchor_tangent_angle);
        for i in half..cells {
            let m = (kap[i + 1] - kap[i]) / ds;
            let (disp, t) = advance(tans[i], kap[i], m, ds);
            pts[i + 1] = pts[i] + disp;
            tans[i + 1] = t;
        }
        for i in (1..=half).rev() {
            // Walking backwards: reverse the tangent, curvature changes sign.
            let m = (kap[i - 1] - kap[i]) / ds;
            let (disp, t) = advance(-tans[i], -kap[i], -m, ds);
            pts[i - 1] = pts[i] + disp;
            tans[i - 1] = -t;
        }
        let samples: Vec<ArcSample> = (0..=cells)
            .map(|i| ArcSample {
                s: s_at(i),
                point: pts[i],
                tangent: tans[i],
                normal: tans[i].perp_cw(),
                kappa: kap[i],
            })
            .collect();
        let kappa0 = kap.iter().cloned().fold(f64::INFINITY, f64::min);
        let lipschitz = kap
            .windows(2)
            .map(|w| (w[1] - w[0]).abs() / ds)
            .fold(0.0, f64::max);
        ConvexArc::new(samples, kappa0, lipschitz)
    }

    /// Arc of a circle centred at polar angle `mid_angle`.
    pub fn from_circle(
        center: Vec2,
        radius: f64,
        mid_angle: f64,
        half_length: f64,
        cells: usize,
    ) -> Result<Self> {
        if !(radius > 0.0) || half_length >= std::f64::consts::PI * radius {
            return Err(Error::InvalidObstacle(
                "circle arc must be shorter than the full circle".into(),
            ));
        }
        let anchor = center + Vec2::polar(radius, mid_angle);
        let tangent_angle = mid_angle + std::f64::consts::FRAC_PI_2;
        let k = 1.0 / radius;
        ConvexArc::from_curvature(|_| k, half_length, cells, anchor, tangent_angle)
    }

    pub fn samples(&self) -> &[ArcSample] {
        &self.samples
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn kappa0(&self) -> f64 {
        self.kappa0
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    /// Maximum curvature over the table.
    pub fn kappa_max(&self) -> f64 {
        self.kappa_max
    }

    fn segment_index(&self, s: f64) -> usize {
        let n = self.samples.len();
        match self.samples.binary_search_by(|w| w.s.total_cmp(&s)) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        }
    }

    /// Frame at arclength `s`; outside `[-L, L]` the end segments are extended.
    pub fn frame(&self, s: f64) -> ArcFrame {
        let i = self.segment_index(s);
        let a = &self.samples[i];
        let b = &self.samples[i + 1];
        let m = (b.kappa - a.kappa) / (b.s - a.s);
        let h = s - a.s;
        let (disp, tangent) = advance(a.tangent, a.kappa, m, h);
        ArcFrame {
            point: a.point + disp,
            tangent,
            normal: tangent.perp_cw(),
            kappa: a.kappa + m * h,
        }
    }

    pub fn point(&self, s: f64) -> Vec2 {
        self.frame(s).point
    }

    pub fn curvature_at(&self, s: f64) -> f64 {
        let i = self.segment_index(s);
        let a = &self.samples[i];
        let b = &self.samples[i + 1];
        a.kappa + (b.kappa - a.kappa) * (s - a.s) / (b.s - a.s)
    }

    /// Signed distance of `v` from the tangent line at `s`, positive on the
    /// outward side. A boundary point is visible from `v` exactly where this is
    /// positive.
    pub fn tangency_residual(&self, s: f64, v: Vec2) -> f64 {
        let f = self.frame(s);
        (v - f.point).dot(f.normal)
    }

    fn root_tol(&self) -> f64 {
        1e-12 * self.half_length
    }

    /// First arclength in `[from, L]` where `g` changes from `!pred` to `pred`,
    /// refining the scan grid when the first pass misses a narrow window.
    fn scan<G: Fn(f64) -> f64>(&self, from: f64, g: G, rising: bool) -> Option<f64> {
        let l = self.half_length;
        let pred = |v: f64| if rising { v > 0.0 } else { v <= 0.0 };
        for cells in [64usize, 512, 4096, 32768] {
            let pts = roots::linspace(from, l, cells);
            if let Some((a, b)) = roots::first_transition(&pts, &g, pred) {
                return Some(roots::bisect(&g, a, b, self.root_tol()));
            }
        }
        None
    }

    /// Lower horizon seen from `v`: the point where the visible part of the arc
    /// begins when walking in increasing `s`.
    pub fn lower_horizon(&self, v: Vec2) -> Result<f64> {
        let l = self.half_length;
        let r = |s: f64| self.tangency_residual(s, v);
        if r(-l) > 0.0 {
            return Err(Error::HorizonOffArc { side: "lower" });
        }
        self.scan(-l, r, true).ok_or(Error::NoHorizon)
    }

    /// Upper horizon seen from `v`: the point where the visible part of the arc ends.
    pub fn upper_horizon(&self, v: Vec2) -> Result<f64> {
        let l = self.half_length;
        let r = |s: f64| self.tangency_residual(s, v);
        if r(l) > 0.0 {
            return Err(Error::HorizonOffArc { side: "upper" });
        }
        let lower = match self.lower_horizon(v) {
            Ok(s) => s,
            Err(Error::HorizonOffArc { .. }) => -l,
            Err(e) => return Err(e),
        };
        self.scan(lower, r, false).ok_or(Error::NoHorizon)
    }

    /// Root of `residual(s) = shift` moving to larger `s` from `start`, where
    /// `rising` selects whether the shifted residual crosses upward or downward.
    pub(crate) fn shifted_root(&self, v: Vec2, shift: f64, start: f64, rising: bool) -> Result<f64> {
        let g = |s: f64| self.tangency_residual(s, v) - shift;
        let side = if rising { "lower" } else { "upper" };
        let g0 = g(start);
        if (rising && g0 > 0.0) || (!rising && g0 <= 0.0) {
            // Zero shift, up to rounding of the start root.
            return Ok(start);
        }
        self.scan(start, g, rising)
            .ok_or(Error::HorizonOffArc { side })
    }

    /// Convex polygon through the sample points; the obstacle is taken to be
    /// the region bounded by the arc and its closing chord.
    pub fn hull(&self) -> &ConvexPolygon {
        &self.hull
    }
}
