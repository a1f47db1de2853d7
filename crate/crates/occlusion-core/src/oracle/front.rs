//! Level fronts of a swept value field and their stationary parts.
//!
//! `Omega(t)` is the set of free cells with `V >= t`; its front `Gamma(t)` are
//! the cells of `Omega(t)` with an axis neighbour that is a target cell or a
//! free cell below the level. Obstacle cells and the box edge are ignored, so
//! `Gamma(0)` is the layer of free cells touching the target set.

use super::sweep::{CellKind, SweepField};
use crate::game::{classify_boundary, GameState, Speeds};
use crate::geometry::Obstacle;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontSlice {
    pub t: f64,
    /// Membership of each cell in `Omega(t)`, row-major like the field.
    pub inside: Vec<bool>,
    /// Sorted indices of the cells on `Gamma(t)`.
    pub cells: Vec<usize>,
}

impl FrontSlice {
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// True when every cell of `other` inside its level set is inside this one.
    pub fn contains(&self, other: &FrontSlice) -> bool {
        self.inside.iter().zip(&other.inside).all(|(a, b)| *a || !*b)
    }
}

pub fn extract_front(field: &SweepField, t: f64) -> FrontSlice {
    let g = &field.grid;
    let inside: Vec<bool> =
        field.kinds.iter().zip(&field.values).map(|(k, v)| k.is_free() && *v >= t).collect();
    let cells = (0..g.len())
        .filter(|&i| {
            inside[i]
                && g.neighbours(i).any(|j| match field.kinds[j] {
                    CellKind::Target | CellKind::TargetUsable => true,
                    CellKind::Free | CellKind::Interface => !inside[j],
                    CellKind::Obstacle => false,
                })
        })
        .collect();
    FrontSlice { t, inside, cells }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationarityReport {
    pub t1: f64,
    pub t2: f64,
    /// Cells of `Gamma(t1)` lying on or next to `Gamma(t2)`.
    pub candidates: Vec<usize>,
    /// Candidates touching the target set.
    pub on_target: usize,
    /// Of those, how many have a non-positive margin (non-usable or interface).
    pub on_target_nonusable: usize,
}

/// Discontinuity candidates: cells where the front did not move between `t1` and `t2`.
pub fn stationarity_map(
    field: &SweepField,
    obs: &Obstacle,
    sp: &Speeds,
    t1: f64,
    t2: f64,
) -> StationarityReport {
    let g = &field.grid;
    let f1 = extract_front(field, t1);
    let f2 = extract_front(field, t2);
    let mut on2 = vec![false; g.len()];
    for &i in &f2.cells {
        on2[i] = true;
    }
    let candidates: Vec<usize> = f1
        .cells
        .iter()
        .copied()
        .filter(|&i| on2[i] || g.neighbours(i).any(|j| on2[j]))
        .collect();
    let mut on_target = 0;
    let mut on_target_nonusable = 0;
    for &i in &candidates {
        let touches = g
            .neighbours(i)
            .any(|j| matches!(field.kinds[j], CellKind::Target | CellKind::TargetUsable));
        if !touches {
            continue;
        }
        on_target += 1;
        let st: GameState = g.state(i);
        if let Ok(c) = classify_boundary(&st, obs, sp, f64::INFINITY, 0.0) {
            if c.margin <= 0.0 {
                on_target_nonusable += 1;
            }
        }
    }
    StationarityReport { t1, t2, candidates, on_target, on_target_nonusable }
}
