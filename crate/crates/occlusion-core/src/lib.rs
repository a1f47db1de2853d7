//! Visibility-based pursuit-evasion around a convex occluder.
//!
//! The evader wins once the line of sight to the pursuer is blocked. This crate
//! provides the occlusion geometry, the isotropic Hamiltonian, near-boundary
//! value estimates for smooth and cornered obstacles, and two independent
//! numerical oracles (a discrete minimax game and a Lax-Friedrichs sweeping
//! solver on the four-dimensional state space).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod corner;
pub mod error;
pub mod game;
pub mod geometry;
pub mod oracle;
pub mod smooth;
mod roots;

pub use error::{Error, Result};
pub use geometry::{
    segment_blocked, tangency_residual, ArcSample, Circle, ConvexArc, ConvexPolygon, Horizon,
    HorizonData, HorizonParam, Obstacle, Vec2,
};
pub use game::{
    boundary_gap, classify_boundary, finite_horizon_value, hamiltonian_grad, hamiltonian_iso,
    target_normal, BoundaryClass, Classification, GameState, Speeds,
};
pub use smooth::{
    boundary_limit_value, boundary_profile, build_setup, max_horizon_param, s_of_t,
    value_bounds_kconst, value_bounds_smooth, value_by_representation, KconstBounds,
    ProfileFamily, ProfileRegime, ProfileSlopes, Side, SmoothBounds, SmoothSetup,
};
pub use corner::{
    barrier_membership, barrier_mimic_simulate, corner_bounds, s_corner, t0_corner, to_polar,
    value_corner, CornerBound, CornerSpec, Orientation, PolarState,
};
pub use oracle::{
    discrete_value, extract_front, read_field, solve_sweep, stationarity_map,
    straight_line_occlusion, write_field, CellKind, DiscreteGameConfig, FrontSlice, Grid4,
    StationarityReport, SweepConfig, SweepField,
};
