use std::sync::Arc;

use serde::Serialize;

use super::qc::{cover_cohomology, require_valid};
use super::{context, Limits};
use crate::cellsheaf::{constant_sheaf, is_locally_constant, sheaf_cohomology_all, CellularSheaf};
use crate::error::{Error, Result};
use crate::exactalg::{FpModule, RingSpec};
use crate::groupcoh::{bar_cohomology, fox_cohomology, multiplication_table, Exactness};
use crate::localsys::{rep_to_sheaf, Representation};
use crate::simplicial::SimplicialComplex;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// Universal covers of graphs are trees.
    #[serde(rename = "dimension-1")]
    Dimension1,
    /// Homology of the finite universal cover vanishes in these degrees.
    FiniteCoverVanishing(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum AsphericityVerdict {
    Aspherical { certificate: Certificate },
    NotAspherical { witness_degree: usize, module: FpModule },
    Unknown { reason: String },
}

impl AsphericityVerdict {
    fn status(&self) -> Status {
        match self {
            AsphericityVerdict::Aspherical { .. } => Status::Holds,
            AsphericityVerdict::NotAspherical { .. } => Status::Fails,
            AsphericityVerdict::Unknown { .. } => Status::Undecided,
        }
    }
}

/// Universal-cover asphericity over `ring`: graphs are aspherical; with a
/// finite group the cover's homology decides; otherwise unknown.
pub fn asphericity_check(x: &Arc<SimplicialComplex>, ring: RingSpec, budget: usize) -> Result<AsphericityVerdict> {
    x.require_connected()?;
    if x.dimension() <= 1 {
        return Ok(AsphericityVerdict::Aspherical { certificate: Certificate::Dimension1 });
    }
    let ctx = context(x, budget)?;
    let Some(u) = &ctx.universal else {
        return Ok(AsphericityVerdict::Unknown { reason: format!("coset enumeration exceeded {budget} cosets") });
    };
    let total = u.cover.total();
    for n in 1..=total.dimension() {
        let h = total.homology(n, ring)?;
        if !h.is_zero() {
            return Ok(AsphericityVerdict::NotAspherical { witness_degree: n, module: h });
        }
    }
    Ok(AsphericityVerdict::Aspherical { certificate: Certificate::FiniteCoverVanishing((1..=total.dimension()).collect()) })
}

/// Outcome of one condition of the equivalence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// Established outright.
    Holds,
    /// A witness shows the condition fails.
    Fails,
    /// No counterexample in the checked window, which does not settle it.
    HoldsInWindow,
    Undecided,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QcEntry {
    pub sheaf: String,
    pub degree: usize,
    pub module: FpModule,
    pub vanished: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Condition3 {
    Checked { entries: Vec<QcEntry> },
    Skipped { reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Resolution {
    Bar,
    Fox,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition4Entry {
    pub representation: String,
    pub degree: usize,
    pub resolution: Resolution,
    pub flag: Exactness,
    pub group_side: FpModule,
    pub sheaf_side: FpModule,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionSummary {
    /// The space is aspherical.
    pub aspherical: Status,
    /// `R^i Qc` vanishes in positive degrees on local systems.
    pub qc_vanishing: Status,
    /// `H^i(G, E) ≅ H^i(X, ℒ_E)`.
    pub cohomology_agrees: Status,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BnReport {
    pub ring: RingSpec,
    pub max_degree: usize,
    pub group_order: Option<usize>,
    pub asphericity: AsphericityVerdict,
    pub condition3: Condition3,
    pub condition4: Vec<Condition4Entry>,
    pub summary: ConditionSummary,
    pub notes: Vec<String>,
    pub consistent: bool,
}

impl BnReport {
    /// JSON with keys in sorted order.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Checks the three equivalent conditions — asphericity, vanishing of the
/// derived quasicoherator on local systems, and agreement of group and
/// sheaf cohomology — on samples, and whether the outcomes are compatible.
///
/// Condition 3 always includes the constant sheaf of rank one (id
/// `"constant"`) and the local system of each sample representation (id
/// `"rep:<id>"`), ahead of the given sheaves, which must be locally constant.
///
/// A report is inconsistent when an established condition contradicts a
/// witness against another: aspherical but some positive-degree `R^i Qc`
/// or exact cohomology comparison fails; not aspherical although `R^i Qc`
/// of the constant sheaf vanishes through the dimension of `X`; or that
/// vanishing alongside a failed exact comparison.
pub fn bn_verdict(
    x: &Arc<SimplicialComplex>,
    ring: RingSpec,
    representations: &[(String, Representation)],
    sheaves: &[(String, CellularSheaf)],
    max_degree: usize,
    limits: &Limits,
) -> Result<BnReport> {
    let asphericity = asphericity_check(x, ring, limits.budget)?;
    let ctx = context(x, limits.budget)?;
    let group_order = ctx.universal.as_ref().map(|u| u.table.coset_count());
    let mut notes = Vec::new();

    let mut samples: Vec<(String, CellularSheaf)> = vec![("constant".into(), constant_sheaf(x, ring, 1))];
    for (id, rho) in representations {
        samples.push((format!("rep:{id}"), rep_to_sheaf(x, &ctx.labeling, rho)?));
    }
    for (id, f) in sheaves {
        require_valid(f)?;
        if !is_locally_constant(f)? {
            return Err(Error::NotLocallyConstant);
        }
        samples.push((id.clone(), f.clone()));
    }

    // condition 3
    let computable = ctx.universal.is_some() || x.dimension() <= 1;
    let (condition3, qc_vanishing) = if !computable {
        let reason = "fundamental group not finite within budget".to_string();
        (Condition3::Skipped { reason }, Status::Skipped)
    } else {
        let mut entries = Vec::new();
        for (id, f) in &samples {
            let h = cover_cohomology(&ctx, f)?;
            for degree in 1..=max_degree {
                let module = h.get(degree).cloned().unwrap_or_else(|| FpModule::zero(f.ring()));
                entries.push(QcEntry { sheaf: id.clone(), degree, vanished: module.is_zero(), module });
            }
        }
        let status = if entries.iter().any(|e| !e.vanished) {
            Status::Fails
        } else if max_degree >= x.dimension() {
            Status::Holds
        } else {
            Status::HoldsInWindow
        };
        (Condition3::Checked { entries }, status)
    };

    // condition 4
    let mut condition4 = Vec::new();
    let table = ctx.universal.as_ref().map(|u| multiplication_table(&u.table)).transpose()?;
    'reps: for (id, rho) in representations {
        let sheaf_side = sheaf_cohomology_all(&rep_to_sheaf(x, &ctx.labeling, rho)?)?;
        let top = if table.is_some() { max_degree } else { max_degree.min(2) };
        for degree in 0..=top {
            let (group_side, resolution, flag) = match &table {
                Some(t) => match bar_cohomology(t, rho, degree as i64, limits.size_cap) {
                    Ok(m) => (m, Resolution::Bar, Exactness::Exact),
                    Err(e @ Error::SizeCapExceeded { .. }) => {
                        notes.push(format!("rep:{id}: stopped before degree {degree}: {e}"));
                        continue 'reps;
                    }
                    Err(e) => return Err(e),
                },
                None => {
                    let (m, flag) = fox_cohomology(&ctx.presentation, rho, degree as i64)?;
                    (m, Resolution::Fox, flag)
                }
            };
            let sheaf = sheaf_side.get(degree).cloned().unwrap_or_else(|| FpModule::zero(rho.ring()));
            let agree = group_side == sheaf;
            condition4.push(Condition4Entry { representation: id.clone(), degree, resolution, flag, group_side, sheaf_side: sheaf, agree });
        }
    }
    if table.is_none() && max_degree > 2 {
        notes.push("group cohomology above degree 2 needs a finite group; comparisons stop at degree 2".into());
    }
    let cohomology_agrees = if representations.is_empty() {
        Status::Skipped
    } else if condition4.iter().any(|e| e.flag == Exactness::Exact && !e.agree) {
        Status::Fails
    } else {
        Status::HoldsInWindow
    };

    let aspherical = asphericity.status();
    let summary = ConditionSummary { aspherical, qc_vanishing, cohomology_agrees };
    let consistent = is_consistent(&summary);
    Ok(BnReport { ring, max_degree, group_order, asphericity, condition3, condition4, summary, notes, consistent })
}

fn is_consistent(s: &ConditionSummary) -> bool {
    use Status::*;
    let contradictions = [
        s.aspherical == Holds && (s.qc_vanishing == Fails || s.cohomology_agrees == Fails),
        s.aspherical == Fails && s.qc_vanishing == Holds,
        s.qc_vanishing == Holds && s.cohomology_agrees == Fails,
    ];
    !contradictions.iter().any(|&c| c)
}
