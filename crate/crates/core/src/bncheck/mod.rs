//! The quasicoherator and its derived functors, the asphericity verdict,
//! the combined equivalence report, and the `E_2` page
//! `H^p(G, H^q(X̃, φ^{-1}F)) ⇒ H^{p+q}(X, F)`.

mod e2;
mod qc;
mod verdict;

use std::sync::Arc;

pub use e2::{e2_page, Collapse, CollapseReason, DegreeCheck, E2Entry, E2Page};
pub use qc::{derived_quasicoherator, quasicoherator};
pub use verdict::{
    asphericity_check, bn_verdict, AsphericityVerdict, BnReport, Certificate, Condition3, Condition4Entry, ConditionSummary, QcEntry,
    Resolution, Status,
};

use crate::covers::{build_cover, deck_generators, Covering, DeckAction};
use crate::error::Result;
use crate::fundgroup::{group_order, presentation, CosetTable, EdgeLabeling, GroupOrder, GroupPresentation};
use crate::groupcoh::DEFAULT_SIZE_CAP;
use crate::simplicial::SimplicialComplex;

/// Coset budget for enumerations and cap on cochain-group ranks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub budget: usize,
    pub size_cap: usize,
}

pub const DEFAULT_BUDGET: usize = 10_000;

impl Default for Limits {
    fn default() -> Self {
        Limits { budget: DEFAULT_BUDGET, size_cap: DEFAULT_SIZE_CAP }
    }
}

/// Edge-path data at basepoint 0 plus, when `π_1` is finite within budget,
/// the universal cover with its deck group.
pub(crate) struct Context {
    pub presentation: GroupPresentation,
    pub labeling: EdgeLabeling,
    pub universal: Option<Universal>,
}

pub(crate) struct Universal {
    pub table: CosetTable,
    pub cover: Covering,
    pub deck: DeckAction,
}

pub(crate) fn context(x: &Arc<SimplicialComplex>, budget: usize) -> Result<Context> {
    let (p, l) = presentation(x, 0)?;
    let universal = match group_order(&p, budget) {
        GroupOrder::Finite(_, table) => {
            let cover = build_cover(x, &l, &table)?;
            let deck = deck_generators(&cover)?;
            Some(Universal { table, cover, deck })
        }
        GroupOrder::Unknown => None,
    };
    Ok(Context { presentation: p, labeling: l, universal })
}
