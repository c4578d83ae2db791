//! Edge-path presentations of fundamental groups and coset enumeration.

mod coset;
mod edgepath;
mod word;

pub use coset::{group_order, todd_coxeter, CosetTable, EnumerationStatus, GroupOrder};
pub use edgepath::{edge_word, induced_homomorphism, presentation, EdgeLabeling};
pub use word::{letter_generator, GroupPresentation, Word};
