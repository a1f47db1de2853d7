//! Independent numerical estimates of the game value.

pub mod discrete;
pub mod front;
pub mod sweep;

pub use discrete::{discrete_value, straight_line_occlusion, DiscreteGameConfig};
pub use front::{extract_front, stationarity_map, FrontSlice, StationarityReport};
pub use sweep::{read_field, solve_sweep, write_field, CellKind, Grid4, SweepConfig, SweepField};
