use super::{DestGraph, VisitSequence};
use crate::error::{Error, Result};

/// Ways of adding a destination `d` next to the sequence member at the
/// anchor position `i` (`s_i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InsertionAction {
    /// `s_i, d, s_{i+1}`.
    InSequence,
    /// Out-and-back detour `s_i, d, s_i`.
    InPlace,
    /// In-sequence insertion, then `s_{i-1}` and `s_i` trade places.
    SwapLeft,
    /// In-sequence insertion, then `s_{i+1}` and `s_{i+2}` trade places.
    SwapRight,
    /// Both swaps.
    SwapBoth,
}

impl InsertionAction {
    /// Candidate order; earlier actions win ties.
    pub const ALL: [InsertionAction; 5] = [
        InsertionAction::InSequence,
        InsertionAction::InPlace,
        InsertionAction::SwapLeft,
        InsertionAction::SwapRight,
        InsertionAction::SwapBoth,
    ];

    /// Whether `anchor` is a legal position in a sequence of length `len`.
    fn legal(self, anchor: usize, len: usize) -> bool {
        match self {
            InsertionAction::InPlace => anchor < len,
            InsertionAction::InSequence => anchor + 1 < len,
            InsertionAction::SwapLeft => anchor >= 2 && anchor + 1 < len,
            InsertionAction::SwapRight => anchor + 3 < len,
            InsertionAction::SwapBoth => anchor >= 2 && anchor + 3 < len,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InsertionPlan {
    pub action: InsertionAction,
    pub anchor: usize,
    pub destination: usize,
    pub delta_cost: f64,
}

/// Change in total cost from inserting `d` at `anchor` with `action`.
///
/// `None` when the anchor is illegal for the action or the insertion needs a
/// missing edge. Swapping variants may return negative values.
pub fn insertion_cost(
    dg: &DestGraph,
    order: &[usize],
    anchor: usize,
    d: usize,
    action: InsertionAction,
) -> Option<f64> {
    if !action.legal(anchor, order.len()) {
        return None;
    }
    let s = |k: usize| order[k];
    let t = |a: usize, b: usize| dg.theta(a, b);
    let i = anchor;
    let delta = match action {
        InsertionAction::InPlace => 2.0 * t(s(i), d),
        InsertionAction::InSequence => t(s(i), d) + t(d, s(i + 1)) - t(s(i), s(i + 1)),
        InsertionAction::SwapLeft => {
            t(d, s(i + 1)) - t(s(i), s(i + 1)) + t(s(i - 1), d) + t(s(i - 2), s(i))
                - t(s(i - 2), s(i - 1))
        }
        InsertionAction::SwapRight => {
            t(s(i), d) - t(s(i), s(i + 1)) + t(d, s(i + 2)) + t(s(i + 1), s(i + 3))
                - t(s(i + 2), s(i + 3))
        }
        InsertionAction::SwapBoth => {
            t(s(i - 1), d) + t(s(i - 2), s(i)) - t(s(i - 2), s(i - 1)) - t(s(i), s(i + 1))
                + t(d, s(i + 2))
                + t(s(i + 1), s(i + 3))
                - t(s(i + 2), s(i + 3))
        }
    };
    // subtracted terms are edges of a valid sequence, so only an added
    // missing edge can make this non-finite
    delta.is_finite().then_some(delta)
}

/// The sequence produced by `plan`.
pub fn apply_insertion(order: &[usize], plan: &InsertionPlan) -> Vec<usize> {
    let i = plan.anchor;
    let d = plan.destination;
    let mut out = Vec::with_capacity(order.len() + 2);
    match plan.action {
        InsertionAction::InPlace => {
            out.extend_from_slice(&order[..=i]);
            out.push(d);
            out.extend_from_slice(&order[i..]);
        }
        InsertionAction::InSequence => {
            out.extend_from_slice(&order[..=i]);
            out.push(d);
            out.extend_from_slice(&order[i + 1..]);
        }
        InsertionAction::SwapLeft => {
            out.extend_from_slice(&order[..i - 1]);
            out.extend([order[i], order[i - 1], d]);
            out.extend_from_slice(&order[i + 1..]);
        }
        InsertionAction::SwapRight => {
            out.extend_from_slice(&order[..=i]);
            out.extend([d, order[i + 2], order[i + 1]]);
            out.extend_from_slice(&order[i + 3..]);
        }
        InsertionAction::SwapBoth => {
            out.extend_from_slice(&order[..i - 1]);
            out.extend([order[i], order[i - 1], d, order[i + 2], order[i + 1]]);
            out.extend_from_slice(&order[i + 3..]);
        }
    }
    out
}

/// Cheapest legal way to insert `d`; ties go to the earlier action in
/// [`InsertionAction::ALL`], then the smaller anchor.
pub fn best_insertion(dg: &DestGraph, seq: &VisitSequence, d: usize) -> Result<InsertionPlan> {
    let order = seq.order();
    let mut best: Option<InsertionPlan> = None;
    for action in InsertionAction::ALL {
        for anchor in 0..order.len() {
            if let Some(delta) = insertion_cost(dg, order, anchor, d, action) {
                if best.is_none_or(|b| delta < b.delta_cost) {
                    best = Some(InsertionPlan { action, anchor, destination: d, delta_cost: delta });
                }
            }
        }
    }
    best.ok_or(Error::NoInsertion { destination: d })
}
