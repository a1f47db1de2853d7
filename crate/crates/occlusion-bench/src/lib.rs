//! Shared fixtures for the criterion benchmarks.

use occlusion_core::{GameState, Obstacle, Speeds, Vec2};

pub fn unit_circle() -> Obstacle {
    Obstacle::circle(Vec2::ZERO, 1.0).unwrap()
}

pub fn triangle() -> Obstacle {
    Obstacle::polygon(vec![Vec2::new(0.0, 0.0), Vec2::new(-3.0, 3.0), Vec2::new(-3.0, -3.0)]).unwrap()
}

/// A state just off the boundary of the unit circle.
pub fn near_tangent() -> (GameState, Speeds) {
    (GameState::new(Vec2::new(-2.0, 1.03), Vec2::new(2.0, 1.03)), Speeds::new(1.0, 1.0).unwrap())
}

/// A usable state at the apex of [`triangle`].
pub fn corner_state() -> (GameState, Speeds) {
    let p = Vec2::polar(2.0, -std::f64::consts::FRAC_PI_2 + 0.1);
    (GameState::new(Vec2::new(0.0, 1.0), p), Speeds::new(1.0, 1.0).unwrap())
}
