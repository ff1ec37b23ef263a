//! Reachable-position counting for Shogi and Mini Shogi.
//!
//! Candidate positions are enumerated exactly and ranked so they can be
//! drawn uniformly; each draw is filtered by static rule checks and then
//! decided by a greedy best-first reverse search toward King-King-only
//! positions.

pub mod codec;
pub mod error;
pub mod estimator;
pub mod movegen;
pub mod position;
pub mod reverse;
pub mod search;
pub mod sfen;
pub mod theory;
pub mod types;
pub mod variant;

pub use error::{Error, Result};
pub use movegen::{in_check, is_statically_valid, moves, next, Validity};
pub use position::Position;
pub use types::{Color, Kind, Move, Piece, Square};
pub use variant::Variant;
