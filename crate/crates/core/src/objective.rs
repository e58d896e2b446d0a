//! Net weight `W(B')`, tour length and the boundary identity check.

use serde::{Deserialize, Serialize};

use crate::admissibility::{boundary, check_admissible, Constraint, Selection};
use crate::encode::Tour;
use crate::error::{Error, Result};
use crate::instance::Instance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectiveBreakdown {
    /// Sum of `L_e` over selected incidences.
    pub profit_sum: i64,
    /// Sum of `2 L_e` over selected edges.
    pub cost_sum: i64,
    /// `profit_sum - cost_sum`.
    pub net: i64,
    /// Sum of `L_e` over the boundary edges.
    pub boundary_length: i64,
}

fn check_n(sel: &Selection, inst: &Instance) -> Result<()> {
    if sel.n() != inst.n() {
        return Err(Error::SizeMismatch { complex: sel.n(), instance: inst.n() });
    }
    Ok(())
}

fn profit_and_cost(sel: &Selection, inst: &Instance) -> Result<(i64, i64)> {
    let mut profit = 0i64;
    for &(_, e) in sel.incidences() {
        profit = profit.checked_add(inst.edge_length(e)?).ok_or(Error::Overflow)?;
    }
    let mut cost = 0i64;
    for &e in sel.edges() {
        let c = inst.edge_length(e)?.checked_mul(2).ok_or(Error::Overflow)?;
        cost = cost.checked_add(c).ok_or(Error::Overflow)?;
    }
    Ok((profit, cost))
}

fn boundary_length(sel: &Selection, inst: &Instance) -> Result<i64> {
    boundary(sel).into_iter().try_fold(0i64, |acc, e| acc.checked_add(inst.edge_length(e)?).ok_or(Error::Overflow))
}

pub fn net_weight(sel: &Selection, inst: &Instance) -> Result<ObjectiveBreakdown> {
    check_n(sel, inst)?;
    let (profit_sum, cost_sum) = profit_and_cost(sel, inst)?;
    Ok(ObjectiveBreakdown {
        profit_sum,
        cost_sum,
        net: profit_sum.checked_sub(cost_sum).ok_or(Error::Overflow)?,
        boundary_length: boundary_length(sel, inst)?,
    })
}

pub fn tour_length(tour: &Tour, inst: &Instance) -> Result<i64> {
    if tour.n() != inst.n() {
        return Err(Error::InvalidTour(format!("tour has {} cities, instance has {}", tour.n(), inst.n())));
    }
    tour.edges().try_fold(0i64, |acc, e| acc.checked_add(inst.edge_length(e)?).ok_or(Error::Overflow))
}

/// Checks `-W(B') = sum of L_e over the boundary`.
///
/// The net weight is a plain double sum over incidences and edges; the
/// boundary side classifies edges by incidence count. Requires C1 and C2,
/// otherwise returns [`Error::IdentityPrecondition`].
pub fn check_boundary_identity(sel: &Selection, inst: &Instance) -> Result<bool> {
    check_n(sel, inst)?;
    let verdict = check_admissible(sel);
    let failing: Vec<String> = verdict
        .violations
        .iter()
        .filter(|v| matches!(v.constraint, Constraint::C1 | Constraint::C2))
        .map(|v| format!("{} {:?}", v.constraint, v.witness))
        .collect();
    if !failing.is_empty() {
        return Err(Error::IdentityPrecondition(failing.join("; ")));
    }
    let (profit, cost) = profit_and_cost(sel, inst)?;
    Ok(cost - profit == boundary_length(sel, inst)?)
}
