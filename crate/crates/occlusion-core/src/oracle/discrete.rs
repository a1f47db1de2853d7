//! Discrete alternating minimax game.
//!
//! Time is split into `stages` equal blocks of `depth / stages` substeps. At the
//! start of every block the evader commits to one of `n_dirs_e` headings, then
//! the pursuer answers with one of `n_dirs_p` headings knowing that choice; both
//! move in a straight line for the block. Occlusion is tested with
//! [`segment_blocked`] after every substep. With `stages == depth` this is the
//! per-step alternating game; fewer stages keep the search tractable.

use crate::error::{Error, Result};
use crate::game::{GameState, Speeds};
use crate::geometry::{segment_blocked, Obstacle, Vec2};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscreteGameConfig {
    pub dt: f64,
    /// Number of substeps searched; the horizon is `depth * dt`.
    pub depth: usize,
    pub n_dirs_e: usize,
    pub n_dirs_p: usize,
    /// Number of decision points for each player.
    pub stages: usize,
}

impl Default for DiscreteGameConfig {
    fn default() -> Self {
        DiscreteGameConfig { dt: 2e-3, depth: 150, n_dirs_e: 64, n_dirs_p: 64, stages: 1 }
    }
}

impl DiscreteGameConfig {
    fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || self.depth == 0 || self.n_dirs_e == 0 || self.n_dirs_p == 0 {
            return Err(Error::InvalidInput("dt, depth and direction counts must be positive".into()));
        }
        if self.stages == 0 || !self.depth.is_multiple_of(self.stages) {
            return Err(Error::InvalidInput("stages must divide depth".into()));
        }
        Ok(())
    }
}

fn headings(n: usize, speed: f64) -> Vec<Vec2> {
    if speed == 0.0 {
        return vec![Vec2::ZERO];
    }
    (0..n).map(|k| Vec2::from_angle(2.0 * PI * k as f64 / n as f64)).collect()
}

/// Outcome of moving both players straight for `steps` substeps.
enum Leg {
    Occluded(f64),
    EvaderCrashed,
    PursuerCrashed,
    Reached(GameState),
}

struct Search<'a> {
    obs: &'a Obstacle,
    sp: Speeds,
    cfg: DiscreteGameConfig,
    dirs_e: Vec<Vec2>,
    dirs_p: Vec<Vec2>,
    stage_len: usize,
}

impl Search<'_> {
    fn leg(&self, st: &GameState, a: Vec2, b: Vec2, t_start: f64) -> Leg {
        let tol = 1e-12 * self.obs.scene_scale(&[st.evader, st.pursuer]);
        for j in 1..=self.stage_len {
            let tau = j as f64 * self.cfg.dt;
            let e = st.evader + a * (self.sp.evader * tau);
            let p = st.pursuer + b * (self.sp.pursuer * tau);
            if self.obs.signed_distance(e) < -tol {
                return Leg::EvaderCrashed;
            }
            if self.obs.signed_distance(p) < -tol {
                return Leg::PursuerCrashed;
            }
            if segment_blocked(e, p, self.obs).unwrap_or(true) {
                return Leg::Occluded(t_start + tau);
            }
        }
        let tau = self.stage_len as f64 * self.cfg.dt;
        Leg::Reached(GameState::new(
            st.evader + a * (self.sp.evader * tau),
            st.pursuer + b * (self.sp.pursuer * tau),
        ))
    }

    /// Pursuer's best answer to heading `a`; stops early once it reaches `cutoff`.
    fn answer(&self, st: &GameState, stage: usize, a: Vec2, cutoff: f64) -> f64 {
        let t_start = (stage * self.stage_len) as f64 * self.cfg.dt;
        let mut best = f64::NEG_INFINITY;
        for &b in &self.dirs_p {
            let v = match self.leg(st, a, b, t_start) {
                Leg::Occluded(t) => t,
                Leg::EvaderCrashed => f64::INFINITY,
                Leg::PursuerCrashed => continue,
                Leg::Reached(_) if stage + 1 == self.cfg.stages => f64::INFINITY,
                Leg::Reached(next) => self.value(&next, stage + 1),
            };
            best = best.max(v);
            if best >= cutoff {
                break;
            }
        }
        best
    }

    fn value(&self, st: &GameState, stage: usize) -> f64 {
        let mut best = f64::INFINITY;
        for &a in &self.dirs_e {
            best = best.min(self.answer(st, stage, a, best));
        }
        best
    }
}

/// Earliest occlusion time of the discrete game, `None` when the evader cannot
/// force occlusion within `depth * dt`.
pub fn discrete_value(
    state: &GameState,
    obs: &Obstacle,
    sp: &Speeds,
    cfg: &DiscreteGameConfig,
) -> Result<Option<f64>> {
    cfg.validate()?;
    sp.validate()?;
    state.validate(obs)?;
    if segment_blocked(state.evader, state.pursuer, obs)? {
        return Ok(Some(0.0));
    }
    let search = Search {
        obs,
        sp: *sp,
        cfg: *cfg,
        dirs_e: headings(cfg.n_dirs_e, sp.evader),
        dirs_p: headings(cfg.n_dirs_p, sp.pursuer),
        stage_len: cfg.depth / cfg.stages,
    };
    let best = search
        .dirs_e
        .par_iter()
        .map(|&a| search.answer(state, 0, a, f64::INFINITY))
        .reduce(|| f64::INFINITY, f64::min);
    Ok(best.is_finite().then_some(best))
}

/// Earliest occlusion time on the substep grid when the evader holds heading
/// `a` and the pursuer answers with the best fixed heading from `n_dirs_p`.
pub fn straight_line_occlusion(
    state: &GameState,
    obs: &Obstacle,
    sp: &Speeds,
    a: Vec2,
    cfg: &DiscreteGameConfig,
) -> Result<Option<f64>> {
    let one = DiscreteGameConfig { stages: 1, ..*cfg };
    one.validate()?;
    let search = Search {
        obs,
        sp: *sp,
        cfg: one,
        dirs_e: vec![a],
        dirs_p: headings(cfg.n_dirs_p, sp.pursuer),
        stage_len: cfg.depth,
    };
    let v = search.answer(state, 0, a, f64::INFINITY);
    Ok(v.is_finite().then_some(v))
}
