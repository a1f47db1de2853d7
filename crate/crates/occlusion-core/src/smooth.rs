//! Near-boundary analysis for a smooth convex obstacle.
//!
//! Each player's horizon moves along the boundary arc. The evader pushes its
//! lower horizon up while the pursuer pushes its upper horizon up; the game
//! ends when the two meet. For straight-line play over a time `t` the best
//! reachable horizon is the tangent point of a line at distance `speed * t`
//! from the player, so `S(t) = s_P_max(t) - s_E_max(t)` and the value is the
//! first zero of `S`.

use crate::error::{Error, Result};
use crate::game::{GameState, Speeds};
use crate::geometry::{segment_blocked, wrap_angle, ConvexArc, Obstacle, Vec2};
use crate::roots;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Evader,
    Pursuer,
}

/// Horizon data and admissible horizons for one state near a smooth boundary.
#[derive(Debug, Clone)]
pub struct SmoothSetup {
    pub arc: ConvexArc,
    pub state: GameState,
    pub speeds: Speeds,
    /// Evader lower horizon at time zero.
    pub s_e: f64,
    /// Pursuer upper horizon at time zero.
    pub s_p: f64,
    pub d_e: f64,
    pub d_p: f64,
    pub kappa_e: f64,
    pub kappa_p: f64,
    /// Horizon gap `s_p - s_e`, clamped at zero.
    pub s0: f64,
    pub t0: f64,
    pub t0_bar: f64,
}

const LIFT_CELLS: usize = 2048;
const T0_DIRECTIONS: usize = 256;

impl SmoothSetup {
    pub fn half_length(&self) -> f64 {
        self.arc.half_length()
    }

    pub fn kappa0(&self) -> f64 {
        self.arc.kappa0()
    }

    pub fn lipschitz(&self) -> f64 {
        self.arc.lipschitz()
    }

    fn speed(&self, side: Side) -> f64 {
        match side {
            Side::Evader => self.speeds.evader,
            Side::Pursuer => self.speeds.pursuer,
        }
    }

    /// `(speed_P / (kappa_P d_P) - speed_E / (kappa_E d_E))_+`.
    pub fn d_star_kappa(&self) -> f64 {
        (self.speeds.pursuer / (self.kappa_p * self.d_p)
            - self.speeds.evader / (self.kappa_e * self.d_e))
            .max(0.0)
    }

    /// Curvature-weighted second-order coefficient of `S(t)`.
    pub fn c_ep(&self) -> f64 {
        let (ge, gp) = (self.speeds.evader, self.speeds.pursuer);
        gp * gp / (2.0 * self.kappa_p.powi(2) * self.d_p.powi(3))
            + ge * ge / (2.0 * self.kappa_e.powi(2) * self.d_e.powi(3))
    }

    /// `(speed_P / d_P - speed_E / d_E)_+`.
    pub fn d_star(&self) -> f64 {
        (self.speeds.pursuer / self.d_p - self.speeds.evader / self.d_e).max(0.0)
    }

    pub fn c_star(&self) -> f64 {
        c_star(self.d_e, self.d_p, &self.speeds)
    }
}

/// `2 d_P^3 d_E^3 / (d_E^3 speed_P^2 + d_P^3 speed_E^2)`.
pub fn c_star(d_e: f64, d_p: f64, sp: &Speeds) -> f64 {
    let (e3, p3) = (d_e.powi(3), d_p.powi(3));
    2.0 * p3 * e3 / (e3 * sp.pursuer.powi(2) + p3 * sp.evader.powi(2))
}

/// Lifts the obstacle to a parametrized arc and computes the horizon data,
/// `t0` and `t0_bar`. Circles are parametrized by an arc of three quarters of
/// the circumference centred between the two relevant horizons.
pub fn build_setup(state: &GameState, obs: &Obstacle, sp: &Speeds) -> Result<SmoothSetup> {
    sp.validate()?;
    if sp.evader == 0.0 && sp.pursuer == 0.0 {
        return Err(Error::InvalidInput("at least one speed must be positive".into()));
    }
    state.validate(obs)?;
    if segment_blocked(state.evader, state.pursuer, obs)? {
        return Err(Error::InTarget("line of sight is blocked".into()));
    }
    let arc = match obs {
        Obstacle::Arc(a) => a.clone(),
        Obstacle::Circle(c) => {
            let h = obs.horizons(state.evader)?;
            let hp = obs.horizons(state.pursuer)?;
            let a_e = (h.lower.point - c.center).angle();
            let a_p = (hp.upper.point - c.center).angle();
            let mid = a_e + 0.5 * wrap_angle(a_p - a_e);
            ConvexArc::from_circle(c.center, c.radius, mid, 0.75 * PI * c.radius, LIFT_CELLS)?
        }
        Obstacle::Polygon { .. } => {
            return Err(Error::InvalidInput(
                "smooth analysis needs a circle or arc obstacle".into(),
            ))
        }
    };
    let s_e = arc.lower_horizon(state.evader)?;
    let s_p = arc.upper_horizon(state.pursuer)?;
    let l = arc.half_length();
    if s_p - s_e < -1e-9 * l {
        return Err(Error::InTarget("evader and pursuer horizons have crossed".into()));
    }
    let fe = arc.frame(s_e);
    let fp = arc.frame(s_p);
    let mut setup = SmoothSetup {
        state: *state,
        speeds: *sp,
        s_e,
        s_p,
        d_e: state.evader.dist(fe.point),
        d_p: state.pursuer.dist(fp.point),
        kappa_e: fe.kappa,
        kappa_p: fp.kappa,
        s0: (s_p - s_e).max(0.0),
        t0: 0.0,
        t0_bar: 0.0,
        arc,
    };
    let t_dist = {
        let te = if sp.evader > 0.0 { obs.distance(state.evader) / (2.0 * sp.evader) } else { f64::INFINITY };
        let tp = if sp.pursuer > 0.0 { obs.distance(state.pursuer) / (2.0 * sp.pursuer) } else { f64::INFINITY };
        te.min(tp)
    };
    let passes = |t: f64| horizons_contained(&setup, t);
    let t0 = if passes(t_dist) {
        t_dist
    } else {
        let (mut lo, mut hi) = (0.0, t_dist);
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if passes(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    if !(t0 > 0.0) {
        return Err(Error::Precondition("no positive admissible horizon t0".into()));
    }
    setup.t0 = t0;
    setup.t0_bar = t0_bar(t0, setup.kappa0(), setup.lipschitz(), setup.arc.kappa_max());
    Ok(setup)
}

/// `min{t0, kappa0^3 t0 / (C_L kmax), kappa0 t0 / sqrt(C_L + kmax^2)}`.
pub fn t0_bar(t0: f64, kappa0: f64, lipschitz: f64, kappa_max: f64) -> f64 {
    let a = if lipschitz > 0.0 { kappa0.powi(3) * t0 / (lipschitz * kappa_max) } else { f64::INFINITY };
    let b = kappa0 * t0 / (lipschitz + kappa_max * kappa_max).sqrt();
    t0.min(a).min(b)
}

/// All horizons reachable within time `t` stay on the arc.
fn horizons_contained(setup: &SmoothSetup, t: f64) -> bool {
    let arc = &setup.arc;
    let l = arc.half_length();
    let inside = |s: f64| s > -l && s < l;
    for side in [Side::Evader, Side::Pursuer] {
        match max_horizon_param(setup, side, t) {
            Ok((s, _)) if inside(s) => {}
            _ => return false,
        }
    }
    for k in 0..T0_DIRECTIONS {
        let v = Vec2::from_angle(2.0 * PI * k as f64 / T0_DIRECTIONS as f64);
        let e = setup.state.evader + v * (setup.speeds.evader * t);
        let p = setup.state.pursuer + v * (setup.speeds.pursuer * t);
        match (arc.lower_horizon(e), arc.upper_horizon(p)) {
            (Ok(a), Ok(b)) if inside(a) && inside(b) => {}
            _ => return false,
        }
    }
    true
}

/// Largest horizon parameter a player can reach by straight-line play over
/// time `t`, with the optimal heading (outward normal at the root for the
/// pursuer, inward for the evader).
pub fn max_horizon_param(setup: &SmoothSetup, side: Side, t: f64) -> Result<(f64, Vec2)> {
    let reach = setup.speed(side) * t;
    match side {
        Side::Evader => {
            let s = setup.arc.shifted_root(setup.state.evader, reach, setup.s_e, true)?;
            Ok((s, -setup.arc.frame(s).normal))
        }
        Side::Pursuer => {
            let s = setup.arc.shifted_root(setup.state.pursuer, -reach, setup.s_p, false)?;
            Ok((s, setup.arc.frame(s).normal))
        }
    }
}

/// `S(t) = s_P_max(t) - s_E_max(t)`.
pub fn s_of_t(setup: &SmoothSetup, t: f64) -> Result<f64> {
    let (sp, _) = max_horizon_param(setup, Side::Pursuer, t)?;
    let (se, _) = max_horizon_param(setup, Side::Evader, t)?;
    Ok(sp - se)
}

const VALUE_CELLS: usize = 256;

/// First sign change of `S` from positive to non-positive, ignoring the grid
/// points before `S` first exceeds `floor`.
fn first_zero(setup: &SmoothSetup, grid: &[f64], floor: f64) -> Result<Option<f64>> {
    let mut vals = Vec::with_capacity(grid.len());
    for &t in grid {
        vals.push(s_of_t(setup, t)?);
    }
    let tol = 1e-10 * setup.t0;
    let start = match vals.iter().position(|&v| v > floor) {
        Some(k) => k.max(1),
        None => return Ok(None),
    };
    for k in start..grid.len() {
        if vals[k - 1] > 0.0 && vals[k] <= 0.0 {
            let f = |t: f64| s_of_t(setup, t).unwrap_or(f64::NAN);
            return Ok(Some(roots::bisect(f, grid[k - 1], grid[k], tol)));
        }
    }
    Ok(None)
}

/// Value from the horizon representation: the smallest zero of `S` on
/// `[0, t0]`, or `None` when `S` stays positive (the value exceeds `t0`).
pub fn value_by_representation(setup: &SmoothSetup) -> Result<Option<f64>> {
    if setup.s0 <= 1e-12 * setup.half_length() {
        return Ok(Some(0.0));
    }
    first_zero(setup, &roots::linspace(0.0, setup.t0, VALUE_CELLS), 0.0)
}

/// Limit of the value along states approaching a tangent (non-usable) state:
/// the first zero of `S` after it turns positive. Uses a geometric grid near
/// zero so that small values are resolved; `S` must first clear the horizon
/// root tolerance so rounding near `t = 0` is not mistaken for a zero.
pub fn boundary_limit_value(setup: &SmoothSetup) -> Result<Option<f64>> {
    let t0 = setup.t0;
    let mut grid: Vec<f64> = (0..=120).map(|k| t0 * 10f64.powf(-8.0 + 6.0 * k as f64 / 120.0)).collect();
    grid.extend(roots::linspace(0.0, t0, VALUE_CELLS).into_iter().filter(|&t| t > 1e-2 * t0));
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    first_zero(setup, &grid, 1e-10 * setup.half_length())
}

/// Rate of a horizon driven by a moving vantage point: `ds/dt = -(n . v) / (kappa (x - Sigma) . t)`.
pub fn horizon_rate(arc: &ConvexArc, s: f64, vantage: Vec2, velocity: Vec2) -> f64 {
    let f = arc.frame(s);
    -(f.normal.dot(velocity)) / (f.kappa * (vantage - f.point).dot(f.tangent))
}

/// One RK4 step of the horizon ODE for a player moving with constant velocity.
pub fn horizon_ode_step(arc: &ConvexArc, s: f64, vantage: Vec2, velocity: Vec2, dt: f64) -> f64 {
    let k1 = horizon_rate(arc, s, vantage, velocity);
    let mid = vantage + velocity * (0.5 * dt);
    let k2 = horizon_rate(arc, s + 0.5 * dt * k1, mid, velocity);
    let k3 = horizon_rate(arc, s + 0.5 * dt * k2, mid, velocity);
    let k4 = horizon_rate(arc, s + dt * k3, vantage + velocity * dt, velocity);
    s + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

/// Integrates the horizon of one player moving along `heading` for time `t`.
pub fn horizon_ode_path(setup: &SmoothSetup, side: Side, heading: Vec2, t: f64, steps: usize) -> Vec<(f64, f64)> {
    let (mut s, start) = match side {
        Side::Evader => (setup.s_e, setup.state.evader),
        Side::Pursuer => (setup.s_p, setup.state.pursuer),
    };
    let vel = heading * setup.speed(side);
    let dt = t / steps as f64;
    let mut out = vec![(0.0, s)];
    for k in 0..steps {
        let pos = start + vel * (k as f64 * dt);
        s = horizon_ode_step(&setup.arc, s, pos, vel, dt);
        out.push(((k + 1) as f64 * dt, s));
    }
    out
}

/// Distance from a player to its own horizon at times `taus` while it follows
/// the optimal heading for horizon time `t`.
pub fn distance_along_optimal(setup: &SmoothSetup, side: Side, t: f64, taus: &[f64]) -> Result<Vec<f64>> {
    let (_, heading) = max_horizon_param(setup, side, t)?;
    let speed = setup.speed(side);
    taus.iter()
        .map(|&tau| {
            let (pos, s) = match side {
                Side::Evader => {
                    let p = setup.state.evader + heading * (speed * tau);
                    (p, setup.arc.lower_horizon(p)?)
                }
                Side::Pursuer => {
                    let p = setup.state.pursuer + heading * (speed * tau);
                    (p, setup.arc.upper_horizon(p)?)
                }
            };
            Ok(pos.dist(setup.arc.point(s)))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothBounds {
    pub lower: f64,
    pub upper: f64,
    /// The upper bound is proven only when this holds.
    pub upper_valid: bool,
    /// Curvature-variation hypothesis of the estimate.
    pub hypothesis_ok: bool,
    pub d_star_kappa: f64,
    pub c_ep: f64,
}

/// Value bounds from the second-order expansion of `S` with curvature
/// evaluated at the two horizons. Requires `0 <= eps < 1`, `0 < delta < 1 - eps`.
pub fn value_bounds_smooth(setup: &SmoothSetup, delta: f64, eps: f64) -> Result<SmoothBounds> {
    if !((0.0..1.0).contains(&eps) && delta > 0.0 && delta < 1.0 - eps) {
        return Err(Error::InvalidInput("need 0 <= eps < 1 and 0 < delta < 1 - eps".into()));
    }
    let d = setup.d_star_kappa();
    let c = setup.c_ep();
    let (ge, gp) = (setup.speeds.evader, setup.speeds.pursuer);
    let bound = 0.5 * eps * setup.kappa0().powi(3) * setup.t0
        * (ge / (setup.kappa_e * setup.d_e).powi(2)).min(gp / (setup.kappa_p * setup.d_p).powi(2));
    let hypothesis_ok = setup.lipschitz() <= bound;
    let lower = (d / ((1.0 + delta + eps) * c)).min(delta * setup.t0_bar);
    let upper = (setup.s0.sqrt() + d) / ((1.0 - eps - delta) * c);
    let upper_valid = hypothesis_ok && upper <= delta * setup.t0_bar && setup.s0.sqrt() <= upper;
    Ok(SmoothBounds { lower, upper, upper_valid, hypothesis_ok, d_star_kappa: d, c_ep: c })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KconstBounds {
    pub lower: f64,
    pub upper: f64,
    pub upper_valid: bool,
    /// Smallest `delta` for which the upper bound applies.
    pub delta_min: f64,
    pub d_star: f64,
    pub c_star: f64,
}

/// Value bounds in terms of curvature constants only (`kappa0`, `L`, `C_L`).
pub fn value_bounds_kconst(setup: &SmoothSetup, delta: f64) -> Result<KconstBounds> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidInput("need 0 < delta < 1".into()));
    }
    let k0 = setup.kappa0();
    let ktop = k0 + setup.half_length() * setup.lipschitz();
    let d = setup.d_star();
    let cs = setup.c_star();
    let lower = (k0 / (1.0 + delta) * cs * d).min(delta * setup.t0_bar);
    let delta_min = 1.0 - ktop * ktop * cs;
    let upper = ktop / (1.0 - delta) * cs * (ktop * setup.s0.sqrt() + d);
    let upper_valid = delta >= delta_min && upper <= delta * setup.t0_bar;
    Ok(KconstBounds { lower, upper, upper_valid, delta_min, d_star: d, c_star: cs })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileFamily {
    pub d_e: f64,
    pub d_p: f64,
    pub speeds: Speeds,
    pub kappa0: f64,
    /// Curvature bound over the arc, `kappa0 + L C_L` (equal to `kappa0` for a circle).
    pub kappa_top: f64,
    pub t0_bar: f64,
    pub d_star: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProfileRegime {
    /// `kappa0^2 C* >= 1`: both slopes approach `kappa0 C*` with quadratic corrections.
    Sharp,
    /// Slopes `kappa0 C* / (1 + delta)` and `kappa_top C* / (1 - delta)`.
    Bracketed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSlopes {
    pub regime: ProfileRegime,
    pub slope_low: f64,
    pub slope_high: f64,
    pub delta: f64,
    /// Upper end of the `d*` range the slopes apply to.
    pub d_star_max: f64,
}

/// Slopes bracketing the value of states approaching a non-usable tangent
/// configuration, as a function of `d* = speed_P / d_P - speed_E / d_E`.
pub fn boundary_profile(f: &ProfileFamily) -> Result<ProfileSlopes> {
    if !(f.d_star > 0.0) {
        return Err(Error::InvalidInput("d* must be positive (non-usable side)".into()));
    }
    let cs = c_star(f.d_e, f.d_p, &f.speeds);
    let sharp = f.kappa0 * f.kappa0 * cs >= 1.0;
    let out = if sharp {
        ProfileSlopes {
            regime: ProfileRegime::Sharp,
            slope_low: f.kappa0 * cs,
            slope_high: f.kappa_top * cs,
            delta: 0.5,
            d_star_max: f.t0_bar / (16.0 * f.kappa_top * cs),
        }
    } else {
        let delta = (1.0 - f.kappa_top * f.kappa_top * cs).max(0.5);
        ProfileSlopes {
            regime: ProfileRegime::Bracketed,
            slope_low: f.kappa0 * cs / (1.0 + delta),
            slope_high: f.kappa_top * cs / (1.0 - delta),
            delta,
            d_star_max: (1.0 - delta) * delta * f.t0_bar / (f.kappa_top * cs),
        }
    };
    if f.d_star >= out.d_star_max {
        return Err(Error::Precondition(format!(
            "d* = {} is not below the validity threshold {}",
            f.d_star, out.d_star_max
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> Obstacle {
        Obstacle::circle(Vec2::ZERO, 1.0).unwrap()
    }

    /// Closed-form `S(t)` for the unit-radius circle at the origin.
    fn s_closed(e: Vec2, p: Vec2, ge: f64, gp: f64, t: f64) -> f64 {
        let (de, dp) = (e.norm(), p.norm());
        wrap_angle(p.angle() - e.angle()) + ((1.0 - gp * t) / dp).acos() + ((1.0 + ge * t) / de).acos()
    }

    #[test]
    fn setup_for_symmetric_tangent_pair() {
        let st = GameState::new(Vec2::new(-2.0, 1.2), Vec2::new(2.0, 1.2));
        let sp = Speeds::new(1.0, 1.0).unwrap();
        let s = build_setup(&st, &circle(), &sp).unwrap();
        let expected = s_closed(st.evader, st.pursuer, 1.0, 1.0, 0.0);
        assert!((s.s0 - expected).abs() < 1e-9, "{} vs {}", s.s0, expected);
        assert!((s.d_e - (4.0 + 1.44 - 1.0f64).sqrt()).abs() < 1e-9);
        let t0 = ((4.0f64 + 1.44).sqrt() - 1.0) / 2.0;
        assert!((s.t0 - t0).abs() < 1e-12);
        assert_eq!(s.t0_bar, s.t0);
    }

    #[test]
    fn s_of_t_matches_closed_form() {
        let st = GameState::new(Vec2::new(-2.0, 1.05), Vec2::new(2.0, 1.05));
        let sp = Speeds::new(1.0, 0.4).unwrap();
        let s = build_setup(&st, &circle(), &sp).unwrap();
        for k in 0..=10 {
            let t = s.t0 * k as f64 / 10.0;
            let got = s_of_t(&s, t).unwrap();
            let want = s_closed(st.evader, st.pursuer, 1.0, 0.4, t);
            assert!((got - want).abs() < 1e-9, "t={t}: {got} vs {want}");
        }
    }

    #[test]
    fn already_tangent_state_has_zero_gap() {
        let st = GameState::new(Vec2::new(-1.0, 1.0), Vec2::new(2.0, 1.0));
        let sp = Speeds::new(1.0, 1.0).unwrap();
        let s = build_setup(&st, &circle(), &sp).unwrap();
        assert!(s.s0 < 1e-9);
        assert!((s.s_e - s.s_p).abs() < 1e-9);
        assert_eq!(value_by_representation(&s).unwrap(), Some(0.0));
    }

    #[test]
    fn ode_endpoint_matches_max_horizon() {
        let st = GameState::new(Vec2::new(-2.0, 1.3), Vec2::new(1.5, 1.2));
        let sp = Speeds::new(1.0, 0.7).unwrap();
        let s = build_setup(&st, &circle(), &sp).unwrap();
        let t = 0.5 * s.t0;
        for side in [Side::Evader, Side::Pursuer] {
            let (target, heading) = max_horizon_param(&s, side, t).unwrap();
            let path = horizon_ode_path(&s, side, heading, t, 400);
            let end = path.last().unwrap().1;
            assert!((end - target).abs() < 1e-8, "{side:?}: {end} vs {target}");
            // Any other heading reaches a smaller horizon.
            for k in 0..16 {
                let h = heading.rotate(0.2 + 0.35 * k as f64);
                let other = horizon_ode_path(&s, side, h, t, 400).last().unwrap().1;
                assert!(other <= target + 1e-9);
            }
        }
    }

    #[test]
    fn kconst_example_constants() {
        let sp = Speeds::new(1.0, 2.0).unwrap();
        assert!((c_star(1.0, 1.0, &sp) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn profile_regimes() {
        let sp = Speeds::new(1.0, 1.0).unwrap();
        let fam = ProfileFamily { d_e: 2.0, d_p: 2.0, speeds: sp, kappa0: 1.0, kappa_top: 1.0, t0_bar: 0.6, d_star: 1e-3 };
        let p = boundary_profile(&fam).unwrap();
        assert_eq!(p.regime, ProfileRegime::Sharp);
        assert!((p.slope_low - 8.0).abs() < 1e-12);
        let small = ProfileFamily { d_e: 0.5, d_p: 0.5, ..fam };
        let p = boundary_profile(&small).unwrap();
        assert_eq!(p.regime, ProfileRegime::Bracketed);
        assert!(p.slope_low < p.slope_high);
        assert!(boundary_profile(&ProfileFamily { d_star: 1.0, ..fam }).is_err());
    }

    #[test]
    fn rejects_polygon_and_blocked_states() {
        let sq = Obstacle::polygon(vec![
            Vec2::new(-1.0, -1.0),
            Vec2::new(1.0, -1.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(-1.0, 1.0),
        ])
        .unwrap();
        let st = GameState::new(Vec2::new(-2.0, 1.5), Vec2::new(2.0, 1.5));
        let sp = Speeds::new(1.0, 1.0).unwrap();
        assert!(build_setup(&st, &sq, &sp).is_err());
        let blocked = GameState::new(Vec2::new(-2.0, 0.0), Vec2::new(2.0, 0.0));
        assert!(matches!(build_setup(&blocked, &circle(), &sp), Err(Error::InTarget(_))));
    }
}
