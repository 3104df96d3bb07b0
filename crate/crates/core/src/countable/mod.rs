//! Points of the countable set, the two concrete point models, finitely
//! described `H`-actions, and displacement search.

mod action;
mod displace;
mod infinite_model;
mod partial;
mod point;

pub use action::{HAction, Trajectory};
pub use displace::{neumann_displace, neumann_displace_two, search_words, with_doubling, SearchBudget};
pub use infinite_model::InfiniteModel;
pub use partial::PartialPerm;
pub use point::index_at;
pub use point::Point;
