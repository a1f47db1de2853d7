//! Analysis near a polygon corner, where both horizons are pinned to the vertex.
//!
//! Locally the obstacle is the wedge `{x : (x - c) . v_i < 0, i = 1, 2}` with
//! `v_i = (cos theta_i, sin theta_i)`. One player sees only the first wall and
//! the other only the second; occlusion happens when the angle at the corner
//! between the two players, measured through the free side, reaches `pi`.
//! Reachable angular change in time `t` is `asin(speed t / d)`, so the angular
//! gap evolves as `S(t) = gap + asin(speed_E t / d_E) - asin(speed_P t / d_P)`.

use crate::error::{Error, Result};
use crate::game::{GameState, Speeds};
use crate::geometry::{wrap_angle, ConvexPolygon, Obstacle, Vec2};
use crate::roots;
use crate::smooth::Side;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CornerSpec {
    pub corner: Vec2,
    pub theta1: f64,
    pub theta2: f64,
    /// Radius of the neighbourhood where the wedge model holds.
    pub r: f64,
    /// Smallest admissible distance of either player from the corner.
    #[serde(default)]
    pub min_radius: f64,
    /// Angle of the local frame; player angles are measured relative to it.
    #[serde(default)]
    pub frame: f64,
}

impl CornerSpec {
    pub fn new(corner: Vec2, theta1: f64, theta2: f64, r: f64) -> Result<Self> {
        let s = CornerSpec { corner, theta1, theta2, r, min_radius: 0.0, frame: 0.0 };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(-FRAC_PI_2 <= self.theta1 && self.theta1 < self.theta2 && self.theta2 < FRAC_PI_2) {
            return Err(Error::InvalidInput(
                "corner walls need -pi/2 <= theta1 < theta2 < pi/2".into(),
            ));
        }
        if !(self.r > 0.0) || !(self.min_radius >= 0.0) || !self.corner.is_finite() {
            return Err(Error::InvalidInput("corner radius must be positive".into()));
        }
        Ok(())
    }

    /// Wedge of polygon vertex `index`, in a frame where the wall normals are
    /// symmetric about angle zero.
    pub fn from_polygon(poly: &ConvexPolygon, index: usize, r: f64) -> Result<Self> {
        let n = poly.len();
        let v1 = poly.edge_normal((index + n - 1) % n);
        let v2 = poly.edge_normal(index);
        let half = 0.5 * v1.cross(v2).atan2(v1.dot(v2));
        let frame = v1.angle() + half;
        let s = CornerSpec {
            corner: poly.vertex(index),
            theta1: -half,
            theta2: half,
            r,
            min_radius: 0.0,
            frame,
        };
        s.validate()?;
        Ok(s)
    }

    fn wall_normal(&self, i: usize) -> Vec2 {
        Vec2::from_angle(if i == 1 { self.theta1 } else { self.theta2 })
    }

    /// Distance from a point (in the local frame, relative to the corner) to the wedge.
    fn wedge_distance(&self, x: Vec2) -> f64 {
        let (v1, v2) = (self.wall_normal(1), self.wall_normal(2));
        if x.dot(v1) < 0.0 && x.dot(v2) < 0.0 {
            return 0.0;
        }
        let ray = |w: Vec2| {
            let u = x.dot(w);
            if u > 0.0 {
                (x - w * u).norm()
            } else {
                x.norm()
            }
        };
        ray(v1.perp_cw()).min(ray(v2.perp()))
    }

    fn local(&self, p: Vec2) -> Vec2 {
        (p - self.corner).rotate(-self.frame)
    }
}

/// Which wall the evader sees; the pursuer sees the other one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    /// Evader angle in `(theta1 - pi/2, theta2 - pi/2)`, pursuer in
    /// `(theta2 - pi/2, theta2 + pi/2)`; gap `theta_P - theta_E`.
    EvaderOnFirstWall,
    /// Mirror image: evader in `(theta1 + pi/2, theta2 + pi/2)`, pursuer in
    /// `(theta1 - pi/2, theta1 + pi/2)`; gap `theta_E - theta_P`.
    EvaderOnSecondWall,
}

impl Orientation {
    fn evader_range(self, s: &CornerSpec) -> (f64, f64) {
        match self {
            Orientation::EvaderOnFirstWall => (s.theta1 - FRAC_PI_2, s.theta2 - FRAC_PI_2),
            Orientation::EvaderOnSecondWall => (s.theta1 + FRAC_PI_2, s.theta2 + FRAC_PI_2),
        }
    }

    fn pursuer_range(self, s: &CornerSpec) -> (f64, f64) {
        match self {
            Orientation::EvaderOnFirstWall => (s.theta2 - FRAC_PI_2, s.theta2 + FRAC_PI_2),
            Orientation::EvaderOnSecondWall => (s.theta1 - FRAC_PI_2, s.theta1 + FRAC_PI_2),
        }
    }

    /// Sign of the angular motion that increases the gap for the evader and
    /// decreases it for the pursuer.
    fn angular_sign(self) -> f64 {
        match self {
            Orientation::EvaderOnFirstWall => -1.0,
            Orientation::EvaderOnSecondWall => 1.0,
        }
    }
}

fn in_open(x: f64, (lo, hi): (f64, f64)) -> bool {
    x > lo && x < hi
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarState {
    pub d_e: f64,
    pub theta_e: f64,
    pub d_p: f64,
    pub theta_p: f64,
    pub spec: CornerSpec,
    pub orientation: Orientation,
}

const GAP_TOL: f64 = 1e-12;

impl PolarState {
    /// Angle at the corner between the players through the free side.
    pub fn gap(&self) -> f64 {
        match self.orientation {
            Orientation::EvaderOnFirstWall => self.theta_p - self.theta_e,
            Orientation::EvaderOnSecondWall => self.theta_e - self.theta_p,
        }
    }

    /// The state lies on the target boundary (gap equal to pi).
    pub fn on_boundary(&self) -> bool {
        (self.gap() - PI).abs() <= GAP_TOL
    }

    /// Angular and radial hypotheses of the wedge model.
    pub fn angles_valid(&self) -> bool {
        let o = self.orientation;
        in_open(self.theta_e, o.evader_range(&self.spec))
            && in_open(self.theta_p, o.pursuer_range(&self.spec))
            && self.gap() <= PI + GAP_TOL
            && self.d_e.min(self.d_p) > self.spec.min_radius
    }

    pub fn evader(&self) -> Vec2 {
        self.spec.corner + Vec2::polar(self.d_e, self.theta_e + self.spec.frame)
    }

    pub fn pursuer(&self) -> Vec2 {
        self.spec.corner + Vec2::polar(self.d_p, self.theta_p + self.spec.frame)
    }

    pub fn state(&self) -> GameState {
        GameState::new(self.evader(), self.pursuer())
    }
}

/// Polar coordinates of both players about the corner, with the orientation
/// read off the evader's angle.
pub fn to_polar(state: &GameState, spec: &CornerSpec) -> Result<PolarState> {
    spec.validate()?;
    let e = spec.local(state.evader);
    let p = spec.local(state.pursuer);
    let orientation = [Orientation::EvaderOnFirstWall, Orientation::EvaderOnSecondWall]
        .into_iter()
        .find(|o| in_open(e.angle(), o.evader_range(spec)))
        .ok_or_else(|| Error::Precondition("evader does not see exactly one wall of the corner".into()))?;
    let ps = PolarState {
        d_e: e.norm(),
        theta_e: e.angle(),
        d_p: p.norm(),
        theta_p: p.angle(),
        spec: *spec,
        orientation,
    };
    if !in_open(ps.theta_p, orientation.pursuer_range(spec)) {
        return Err(Error::Precondition("pursuer angle outside its admissible range".into()));
    }
    if ps.d_e.min(ps.d_p) <= spec.min_radius {
        return Err(Error::Precondition("player too close to the corner".into()));
    }
    if ps.gap() > PI + GAP_TOL {
        return Err(Error::InTarget("players are separated by the corner".into()));
    }
    Ok(ps)
}

/// As [`to_polar`], additionally checking against an actual polygon that the
/// corner vertex is one of the evader's horizons.
pub fn to_polar_checked(state: &GameState, spec: &CornerSpec, obs: &Obstacle) -> Result<PolarState> {
    let ps = to_polar(state, spec)?;
    let h = obs.horizons(state.evader)?;
    let tol = 1e-9 * obs.scene_scale(&[state.evader, state.pursuer]);
    if h.lower.point.dist(spec.corner) > tol && h.upper.point.dist(spec.corner) > tol {
        return Err(Error::Precondition("horizon not at corner".into()));
    }
    Ok(ps)
}

const PIN_DIRECTIONS: usize = 256;

/// Largest `t0` such that both reachable discs stay off the obstacle (half the
/// distance over the speed) and inside the angular ranges that keep both
/// horizons at the corner. `obs` overrides the local wedge for distances.
pub fn t0_corner(ps: &PolarState, sp: &Speeds, obs: Option<&Obstacle>) -> Result<f64> {
    sp.validate()?;
    if !ps.angles_valid() {
        return Err(Error::Precondition("state violates the corner hypotheses".into()));
    }
    let spec = &ps.spec;
    let (e, p) = (ps.evader(), ps.pursuer());
    let dist = |x: Vec2| match obs {
        Some(o) => o.distance(x),
        None => spec.wedge_distance(spec.local(x)),
    };
    let half = |x: Vec2, g: f64| if g > 0.0 { dist(x) / (2.0 * g) } else { f64::INFINITY };
    let t_dist = half(e, sp.evader).min(half(p, sp.pursuer));
    let o = ps.orientation;
    let pinned = |t: f64| {
        (0..PIN_DIRECTIONS).all(|k| {
            let v = Vec2::from_angle(2.0 * PI * k as f64 / PIN_DIRECTIONS as f64);
            let xe = spec.local(e + v * (sp.evader * t));
            let xp = spec.local(p + v * (sp.pursuer * t));
            in_open(xe.angle(), o.evader_range(spec))
                && in_open(xp.angle(), o.pursuer_range(spec))
                && xe.norm() > spec.min_radius
                && xp.norm() > spec.min_radius
        })
    };
    let cap = if t_dist.is_finite() {
        t_dist
    } else {
        // Static players everywhere: fall back to the distance to the corner.
        ps.d_e.min(ps.d_p) / sp.evader.max(sp.pursuer).max(f64::MIN_POSITIVE)
    };
    if pinned(cap) {
        return Ok(cap);
    }
    let (mut lo, mut hi) = (0.0, cap);
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if pinned(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Angular gap after time `t` of optimal play.
pub fn s_corner(t: f64, ps: &PolarState, sp: &Speeds) -> Result<f64> {
    let (ue, up) = (sp.evader * t / ps.d_e, sp.pursuer * t / ps.d_p);
    if !(0.0..=1.0).contains(&ue) || !(0.0..=1.0).contains(&up) {
        return Err(Error::InvalidInput("time outside the arcsin domain".into()));
    }
    Ok(ps.gap() + ue.asin() - up.asin())
}

const CORNER_CELLS: usize = 1024;

/// Smallest `t` in `[0, t0]` with `S(t) = pi`, or `None` if none.
pub fn value_corner(ps: &PolarState, sp: &Speeds, t0: f64) -> Result<Option<f64>> {
    if ps.gap() >= PI - GAP_TOL {
        return Ok(Some(0.0));
    }
    let grid = roots::linspace(0.0, t0, CORNER_CELLS);
    let f = |t: f64| s_corner(t, ps, sp).map(|s| s - PI).unwrap_or(f64::NAN);
    match roots::first_transition(&grid, f, |v| v >= 0.0) {
        Some((a, b)) => Ok(Some(roots::bisect(f, a, b, 1e-10 * t0))),
        None => Ok(None),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CornerBound {
    /// `speed_E d_P <= speed_P d_E`: no occlusion before `t0`.
    AtLeastHorizon,
    /// Upper bound `(pi - gap) / (speed_E / d_E - speed_P / d_P)`.
    Upper(f64),
    /// The gap is too far from `pi` for the estimate to apply.
    NotApplicable,
}

pub fn corner_bounds(ps: &PolarState, sp: &Speeds, t0: f64) -> CornerBound {
    if sp.evader * ps.d_p <= sp.pursuer * ps.d_e {
        return CornerBound::AtLeastHorizon;
    }
    let rate = sp.evader / ps.d_e - sp.pursuer / ps.d_p;
    let deficit = PI - ps.gap();
    if deficit <= t0 * rate {
        CornerBound::Upper(deficit / rate)
    } else {
        CornerBound::NotApplicable
    }
}

/// `|speed_E d_P - speed_P d_E|`, the quantity that vanishes on the barrier.
pub fn barrier_defect(ps: &PolarState, sp: &Speeds) -> f64 {
    (sp.evader * ps.d_p - sp.pursuer * ps.d_e).abs()
}

/// On the barrier: radii in the speed ratio (relative tolerance `tol`) and the
/// angular hypotheses satisfied.
pub fn barrier_membership(ps: &PolarState, sp: &Speeds, tol: f64) -> bool {
    let scale = (sp.evader * ps.d_p).max(sp.pursuer * ps.d_e);
    ps.angles_valid() && barrier_defect(ps, sp) <= tol * scale
}

/// Control of the non-defending player as `(radial, angular)` components,
/// each unit-bounded in norm.
pub trait OpponentControl {
    fn control(&self, t: f64) -> (f64, f64);
}

impl<F: Fn(f64) -> (f64, f64)> OpponentControl for F {
    fn control(&self, t: f64) -> (f64, f64) {
        self(t)
    }
}

/// Piecewise-constant control on `[0, horizon)` with equal-length pieces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseControl {
    pub horizon: f64,
    pub pieces: Vec<(f64, f64)>,
}

impl OpponentControl for PiecewiseControl {
    fn control(&self, t: f64) -> (f64, f64) {
        let n = self.pieces.len();
        let k = ((t / self.horizon) * n as f64).floor().clamp(0.0, (n - 1) as f64) as usize;
        self.pieces[k]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarrierSample {
    pub t: f64,
    pub d_e: f64,
    pub d_p: f64,
    pub theta_e: f64,
    pub theta_p: f64,
    /// `|speed_E d_P - speed_P d_E|`.
    pub drift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarrierTrajectory {
    pub samples: Vec<BarrierSample>,
    pub max_drift: f64,
    /// Time at which the gap reached pi, if it did.
    pub occluded_at: Option<f64>,
}

/// Simulates the radial-mimic strategy: the defender copies the radial
/// component the opponent used on the previous step (it reacts to observed
/// controls only) and spends the rest of its unit control angularly toward its
/// own goal. Explicit Euler in polar coordinates.
pub fn barrier_mimic_simulate(
    ps: &PolarState,
    sp: &Speeds,
    opponent: &dyn OpponentControl,
    defender: Side,
    dt: f64,
    horizon: f64,
) -> Result<BarrierTrajectory> {
    sp.validate()?;
    if !ps.angles_valid() {
        return Err(Error::Precondition("start state violates the corner hypotheses".into()));
    }
    let max_dt = 1e-3 * ps.d_e.min(ps.d_p) / sp.evader.max(sp.pursuer).max(f64::MIN_POSITIVE);
    if !(dt > 0.0 && dt <= max_dt * (1.0 + 1e-12)) || !(horizon > 0.0) {
        return Err(Error::InvalidInput(format!("dt must lie in (0, {max_dt}]")));
    }
    let steps = (horizon / dt).round() as usize;
    let sign = ps.orientation.angular_sign();
    let mut st = *ps;
    let sample = |st: &PolarState, t: f64| BarrierSample {
        t,
        d_e: st.d_e,
        d_p: st.d_p,
        theta_e: st.theta_e,
        theta_p: st.theta_p,
        drift: barrier_defect(st, sp),
    };
    let mut samples = vec![sample(&st, 0.0)];
    let mut observed_radial = 0.0f64;
    let mut occluded_at = None;
    for k in 0..steps {
        let t = k as f64 * dt;
        let (or, oa) = opponent.control(t);
        if or.hypot(oa) > 1.0 + 1e-12 {
            return Err(Error::InvalidInput(format!("opponent control exceeds unit norm at t = {t}")));
        }
        let mimic = (observed_radial, sign * (1.0 - observed_radial * observed_radial).max(0.0).sqrt());
        let (ue, up) = match defender {
            Side::Evader => (mimic, (or, oa)),
            Side::Pursuer => ((or, oa), mimic),
        };
        let (de, dp) = (st.d_e, st.d_p);
        st.d_e += dt * sp.evader * ue.0;
        st.theta_e += dt * sp.evader * ue.1 / de;
        st.d_p += dt * sp.pursuer * up.0;
        st.theta_p += dt * sp.pursuer * up.1 / dp;
        st.theta_e = wrap_angle(st.theta_e);
        st.theta_p = wrap_angle(st.theta_p);
        observed_radial = or;
        let t_next = (k + 1) as f64 * dt;
        if st.gap() >= PI {
            occluded_at = Some(t_next);
            samples.push(sample(&st, t_next));
            break;
        }
        if !st.angles_valid() {
            return Err(Error::Precondition(format!(
                "trajectory left the corner-pinned region at t = {t_next}"
            )));
        }
        samples.push(sample(&st, t_next));
    }
    let max_drift = samples.iter().map(|s| s.drift).fold(0.0f64, f64::max);
    Ok(BarrierTrajectory { samples, max_drift, occluded_at })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec() -> CornerSpec {
        CornerSpec::new(Vec2::ZERO, -PI / 4.0, PI / 4.0, 10.0).unwrap()
    }

    fn unit_speeds() -> Speeds {
        Speeds::new(1.0, 1.0).unwrap()
    }

    /// Evader above (sees the second wall), pursuer below-right, with the given gap.
    fn mirrored(d_e: f64, d_p: f64, gap: f64) -> PolarState {
        let theta_e = FRAC_PI_2;
        let st = GameState::new(Vec2::polar(d_e, theta_e), Vec2::polar(d_p, theta_e - gap));
        to_polar(&st, &spec()).unwrap()
    }

    #[test]
    fn polar_coordinates_of_example() {
        let st = GameState::new(Vec2::new(0.0, -2.0), Vec2::new(2.0, 0.0));
        let ps = to_polar(&st, &spec()).unwrap();
        assert_eq!(ps.d_e, 2.0);
        assert_eq!(ps.theta_e, -FRAC_PI_2);
        assert_eq!(ps.d_p, 2.0);
        assert_eq!(ps.theta_p, 0.0);
        assert_eq!(ps.orientation, Orientation::EvaderOnFirstWall);
        assert!((ps.gap() - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn boundary_state_is_flagged() {
        let ps = mirrored(1.0, 2.0, PI);
        assert!(ps.on_boundary());
        assert_eq!(value_corner(&ps, &unit_speeds(), 0.3).unwrap(), Some(0.0));
    }

    #[test]
    fn rejects_evader_seeing_both_walls() {
        let st = GameState::new(Vec2::new(2.0, 0.0), Vec2::new(0.0, -2.0));
        assert!(to_polar(&st, &spec()).is_err());
    }

    #[test]
    fn gap_evolution_and_root() {
        let ps = mirrored(1.0, 2.0, PI - 0.1);
        let sp = unit_speeds();
        let s = s_corner(0.19, &ps, &sp).unwrap();
        assert!((s - (PI - 0.003_981_332_774_830_371)).abs() < 1e-12);
        let v = value_corner(&ps, &sp, 0.3).unwrap().unwrap();
        assert!((v - 0.197_701_239_074_136_4).abs() < 1e-9);
        match corner_bounds(&ps, &sp, 0.3) {
            CornerBound::Upper(b) => {
                assert!((b - 0.2).abs() < 1e-12);
                assert!(v <= b);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_usable_side_never_closes() {
        let ps = mirrored(2.0, 1.0, PI - 1e-3);
        let sp = unit_speeds();
        assert_eq!(corner_bounds(&ps, &sp, 0.4), CornerBound::AtLeastHorizon);
        assert_eq!(value_corner(&ps, &sp, 0.4).unwrap(), None);
    }

    #[test]
    fn t0_respects_wedge_distance() {
        let ps = mirrored(1.0, 2.0, PI - 0.1);
        let t0 = t0_corner(&ps, &unit_speeds(), None).unwrap();
        // Evader at (0,1) is sqrt(2)/2 from the second wall.
        assert!((t0 - 0.5f64.sqrt() / 2.0).abs() < 1e-12, "{t0}");
    }

    #[test]
    fn polygon_corner_frame() {
        let poly = ConvexPolygon::new(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(-3.0, 3.0),
            Vec2::new(-3.0, -3.0),
        ])
        .unwrap();
        let spec = CornerSpec::from_polygon(&poly, 0, 3.0).unwrap();
        assert!((spec.theta2 - PI / 4.0).abs() < 1e-12);
        assert!(spec.frame.abs() < 1e-12);
    }

    #[test]
    fn pure_angular_opponent_keeps_radii() {
        let ps = mirrored(1.0, 1.0, PI - 0.5);
        let sp = unit_speeds();
        assert!(barrier_membership(&ps, &sp, 1e-9));
        let opp = |_t: f64| (0.0, 1.0);
        let tr = barrier_mimic_simulate(&ps, &sp, &opp, Side::Evader, 1e-3, 0.2).unwrap();
        assert_eq!(tr.max_drift, 0.0);
        let last = tr.samples.last().unwrap();
        assert_eq!((last.d_e, last.d_p), (1.0, 1.0));
    }

    #[test]
    fn pure_radial_opponent_drift_is_one_step() {
        let ps = mirrored(1.0, 1.0, PI - 0.5);
        let sp = unit_speeds();
        let opp = |_t: f64| (1.0, 0.0);
        let dt = 1e-3;
        let tr = barrier_mimic_simulate(&ps, &sp, &opp, Side::Pursuer, dt, 0.2).unwrap();
        assert!(tr.max_drift <= dt * (1.0 + 1e-9));
        let last = tr.samples.last().unwrap();
        assert!(last.d_e > 1.15 && last.d_p > 1.15);
    }

    #[test]
    fn out_of_range_angles_are_off_barrier() {
        let mut ps = mirrored(1.0, 1.0, PI - 0.5);
        ps.theta_e = -2.5;
        assert!(!barrier_membership(&ps, &unit_speeds(), 1e-9));
    }

    proptest! {
        #[test]
        fn s_corner_monotone_when_evader_faster(de in 0.5f64..3.0, ratio in 1.01f64..3.0, gap in 2.0f64..3.1) {
            let ps = mirrored(de, de * ratio, gap);
            let sp = unit_speeds();
            let t_max = 0.9 * de;
            let mut prev = f64::NEG_INFINITY;
            for k in 0..=50 {
                let s = s_corner(t_max * k as f64 / 50.0, &ps, &sp).unwrap();
                prop_assert!(s >= prev - 1e-15);
                prev = s;
            }
        }
    }
}
