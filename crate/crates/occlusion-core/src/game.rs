//! Isotropic dynamics, the game Hamiltonian and classification of the target boundary.
//!
//! The target set is every state whose line of sight is blocked. A boundary
//! state is usable when the evader can push into the target immediately, which
//! reduces to comparing `speed / distance-to-tangency` for the two players.

use crate::error::{Error, Result};
use crate::geometry::{segment_blocked, Obstacle, Vec2};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Speeds {
    pub evader: f64,
    pub pursuer: f64,
}

impl Speeds {
    pub fn new(evader: f64, pursuer: f64) -> Result<Self> {
        let s = Speeds { evader, pursuer };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.evader >= 0.0 && self.pursuer >= 0.0)
            || !self.evader.is_finite()
            || !self.pursuer.is_finite()
        {
            return Err(Error::InvalidInput("speeds must be finite and non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameState {
    pub evader: Vec2,
    pub pursuer: Vec2,
}

impl GameState {
    pub fn new(evader: Vec2, pursuer: Vec2) -> Self {
        GameState { evader, pursuer }
    }

    /// Checks both players are outside the open obstacle.
    pub fn validate(&self, obs: &Obstacle) -> Result<()> {
        let tol = 1e-12 * obs.scene_scale(&[self.evader, self.pursuer]);
        if obs.signed_distance(self.evader) < -tol {
            return Err(Error::InsideObstacle("evader"));
        }
        if obs.signed_distance(self.pursuer) < -tol {
            return Err(Error::InsideObstacle("pursuer"));
        }
        Ok(())
    }

    pub fn in_target(&self, obs: &Obstacle) -> Result<bool> {
        segment_blocked(self.evader, self.pursuer, obs)
    }
}

/// `H(p_E, p_P) = speed_E |p_E| - speed_P |p_P|`.
pub fn hamiltonian_iso(p_e: Vec2, p_p: Vec2, sp: &Speeds) -> f64 {
    sp.evader * p_e.norm() - sp.pursuer * p_p.norm()
}

/// Gradient of [`hamiltonian_iso`]; `None` if either block of the covector is zero.
pub fn hamiltonian_grad(p_e: Vec2, p_p: Vec2, sp: &Speeds) -> Option<(Vec2, Vec2)> {
    let (ne, np) = (p_e.norm(), p_p.norm());
    if ne == 0.0 || np == 0.0 {
        return None;
    }
    Some((p_e * (sp.evader / ne), p_p * (-sp.pursuer / np)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Usable,
    NonUsable,
    Interface,
    NotOnBoundary,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Usable => "usable",
            Classification::NonUsable => "non_usable",
            Classification::Interface => "interface",
            Classification::NotOnBoundary => "not_on_boundary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryClass {
    pub label: Classification,
    /// `speed_E / d_E - speed_P / d_P` at the closest obstacle point.
    pub margin: f64,
    pub tangency: Vec2,
    pub d_e: f64,
    pub d_p: f64,
    /// Signed clearance of the line of sight (negative when blocked).
    pub gap: f64,
}

/// Signed clearance of the line of sight: distance from the segment to the
/// obstacle, negative (minus penetration depth) when blocked.
pub fn boundary_gap(state: &GameState, obs: &Obstacle) -> Result<f64> {
    state.validate(obs)?;
    Ok(obs.segment_clearance(state.evader, state.pursuer))
}

/// Labels a state by its position relative to the target boundary.
/// `boundary_tol` is relative to the scene diameter; `interface_tol` is relative
/// to the larger of the two ratios `speed / distance`.
pub fn classify_boundary(
    state: &GameState,
    obs: &Obstacle,
    sp: &Speeds,
    boundary_tol: f64,
    interface_tol: f64,
) -> Result<BoundaryClass> {
    sp.validate()?;
    let gap = boundary_gap(state, obs)?;
    let x = obs.closest_point(state.evader, state.pursuer)?;
    let d_e = state.evader.dist(x);
    let d_p = state.pursuer.dist(x);
    if d_e == 0.0 || d_p == 0.0 {
        return Err(Error::InvalidInput("a player sits on the obstacle boundary".into()));
    }
    let (re, rp) = (sp.evader / d_e, sp.pursuer / d_p);
    let margin = re - rp;
    let scale = obs.scene_scale(&[state.evader, state.pursuer]);
    let label = if gap.abs() > boundary_tol * scale {
        Classification::NotOnBoundary
    } else if margin.abs() <= interface_tol * re.max(rp).max(f64::MIN_POSITIVE) {
        Classification::Interface
    } else if margin > 0.0 {
        Classification::Usable
    } else {
        Classification::NonUsable
    };
    Ok(BoundaryClass { label, margin, tangency: x, d_e, d_p, gap })
}

/// Outward normal of the target set at a tangent configuration, pointing into
/// the playing region: `(nu d_P, nu d_E) / |E - P|` with `nu` the unit normal of
/// the line of sight pointing away from the tangency point.
pub fn target_normal(state: &GameState, tangency: Vec2) -> (Vec2, Vec2) {
    let (e, p) = (state.evader, state.pursuer);
    let len = e.dist(p);
    let mut nu = (p - e).normalized().perp();
    if nu.dot(e - tangency) < 0.0 {
        nu = -nu;
    }
    let (d_e, d_p) = (e.dist(tangency), p.dist(tangency));
    (nu * (d_p / len), nu * (d_e / len))
}

/// Value of the finite-horizon game: `min(t, V)`.
pub fn finite_horizon_value(t: f64, value: Option<f64>) -> f64 {
    match value {
        Some(v) => v.min(t),
        None => t,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sp(e: f64, p: f64) -> Speeds {
        Speeds::new(e, p).unwrap()
    }

    #[test]
    fn hamiltonian_examples() {
        let s = sp(2.0, 1.0);
        assert_eq!(hamiltonian_iso(Vec2::new(3.0, 4.0), Vec2::new(0.0, 1.0), &s), 9.0);
        assert_eq!(hamiltonian_iso(Vec2::ZERO, Vec2::ZERO, &s), 0.0);
        let (ge, gp) = hamiltonian_grad(Vec2::new(3.0, 4.0), Vec2::new(0.0, 2.0), &s).unwrap();
        assert!((ge - Vec2::new(1.2, 1.6)).norm() < 1e-15);
        assert_eq!(gp, Vec2::new(0.0, -1.0));
        assert!(hamiltonian_grad(Vec2::ZERO, Vec2::new(1.0, 0.0), &s).is_none());
    }

    #[test]
    fn classify_tangent_configurations() {
        let obs = Obstacle::circle(Vec2::ZERO, 1.0).unwrap();
        let st = GameState::new(Vec2::new(-1.0, 1.0), Vec2::new(2.0, 1.0));
        let c = classify_boundary(&st, &obs, &sp(1.0, 1.0), 1e-6, 1e-9).unwrap();
        assert_eq!(c.label, Classification::Usable);
        assert!((c.margin - 0.5).abs() < 1e-12);
        let c = classify_boundary(&st, &obs, &sp(1.0, 2.0), 1e-6, 1e-9).unwrap();
        assert_eq!(c.label, Classification::Interface);
        let c = classify_boundary(&st, &obs, &sp(1.0, 3.0), 1e-6, 1e-9).unwrap();
        assert_eq!(c.label, Classification::NonUsable);
        let far = GameState::new(Vec2::new(-1.0, 1.5), Vec2::new(2.0, 1.5));
        let c = classify_boundary(&far, &obs, &sp(1.0, 1.0), 1e-6, 1e-9).unwrap();
        assert_eq!(c.label, Classification::NotOnBoundary);
    }

    #[test]
    fn finite_horizon_clamps() {
        assert_eq!(finite_horizon_value(0.5, Some(0.2)), 0.2);
        assert_eq!(finite_horizon_value(0.5, Some(0.9)), 0.5);
        assert_eq!(finite_horizon_value(0.5, None), 0.5);
    }

    proptest! {
        #[test]
        fn euler_identity(ex in -5.0f64..5.0, ey in -5.0f64..5.0, px in -5.0f64..5.0, py in -5.0f64..5.0,
                          ge in 0.0f64..3.0, gp in 0.0f64..3.0) {
            let (pe, pp) = (Vec2::new(ex, ey), Vec2::new(px, py));
            let s = sp(ge, gp);
            if let Some((a, b)) = hamiltonian_grad(pe, pp, &s) {
                let h = hamiltonian_iso(pe, pp, &s);
                prop_assert!((a.dot(pe) + b.dot(pp) - h).abs() <= 1e-12 * (1.0 + h.abs()));
            }
        }

        #[test]
        fn normal_sign_matches_margin(theta in -3.0f64..3.0, de in 0.1f64..5.0, dp in 0.1f64..5.0,
                                      ge in 0.1f64..3.0, gp in 0.1f64..3.0) {
            let x = Vec2::from_angle(theta);
            let t = x.perp();
            let st = GameState::new(x + t * de, x - t * dp);
            let (ne, np) = target_normal(&st, x);
            let h = hamiltonian_iso(ne, np, &sp(ge, gp));
            let margin = ge / de - gp / dp;
            prop_assume!(margin.abs() > 1e-9);
            prop_assert_eq!(h > 0.0, margin > 0.0);
        }
    }
}
