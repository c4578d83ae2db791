//! Exact computations relating local systems, representations of the
//! fundamental group and sheaf cohomology on finite simplicial complexes.
pub mod bncheck;
pub mod cellsheaf;
pub mod covers;
pub mod error;
pub mod exactalg;
pub use error::{Error, Result};
pub mod fixtures;
pub mod fundgroup;
pub mod groupcoh;
pub mod json;
pub mod localsys;
pub mod simplicial;
