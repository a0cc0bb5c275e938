use std::collections::HashMap;
use std::fmt;

use crate::idyll::{Elem, IdyllError};
use crate::par::{self, Exec};
use crate::subset::{self, Mask};

use super::Candidate;

/// Why a candidate fails to be a GP function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GpViolation {
    /// Positive rank but no nonzero value.
    IdenticallyZero,
    /// Rank 0 must carry a unit on the empty tuple.
    MissingEmptyValue,
    /// A stored value is not an element of the idyll.
    ForeignValue { subset: Vec<String> },
    /// A stored subset has the wrong size.
    WrongSize { subset: Vec<String> },
    /// The exchange relation fails for the tuples `x` and `y`.
    Exchange { x: Vec<String>, y: Vec<String> },
    /// The idyll could not decide a null-set query.
    Undecidable { x: Vec<String>, y: Vec<String>, error: IdyllError },
}

impl fmt::Display for GpViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GpViolation::IdenticallyZero => write!(f, "GP0: the function is identically zero"),
            GpViolation::MissingEmptyValue => write!(f, "GP0: rank 0 needs a unit on the empty tuple"),
            GpViolation::ForeignValue { subset } => write!(f, "value on {{{}}} is not in the idyll", subset.join(",")),
            GpViolation::WrongSize { subset } => write!(f, "subset {{{}}} does not have rank size", subset.join(",")),
            GpViolation::Exchange { x, y } => {
                write!(f, "GP2 fails at x=({}) y=({})", x.join(","), y.join(","))
            }
            GpViolation::Undecidable { x, y, error } => {
                write!(f, "GP2 undecidable at x=({}) y=({}): {error}", x.join(","), y.join(","))
            }
        }
    }
}

pub fn verify_gp(c: &Candidate) -> Result<(), GpViolation> {
    verify_gp_with(c, Exec::default())
}

/// Checks GP0 and the exchange relations.
///
/// Both tuples range over sorted subsets: a repeated entry in `x` makes the
/// two surviving terms cancel, a repeated entry in `y` kills every term, and
/// permuting either tuple scales the whole sum by a sign.
pub fn verify_gp_with(c: &Candidate, exec: Exec) -> Result<(), GpViolation> {
    let names = |m: Mask| c.ground.names(m);
    let mut values: HashMap<Mask, Elem> = HashMap::new();
    for (s, v) in &c.values {
        if !c.idyll.contains(v) {
            return Err(GpViolation::ForeignValue { subset: names(s.0) });
        }
        if subset::size(s.0) != c.rank || s.0 & !c.ground.all() != 0 {
            return Err(GpViolation::WrongSize { subset: names(s.0) });
        }
        if !v.is_zero() {
            values.insert(s.0, v.clone());
        }
    }
    if values.is_empty() {
        return Err(if c.rank == 0 { GpViolation::MissingEmptyValue } else { GpViolation::IdenticallyZero });
    }
    let r = c.rank;
    if r == 0 {
        return Ok(());
    }
    let all = c.ground.all();
    let xs = subset::k_subsets(all, r + 1);
    let ys = subset::k_subsets(all, r - 1);
    let get = |m: Mask| values.get(&m).cloned().unwrap_or(Elem::Zero);
    let idyll = &c.idyll;
    let found = par::find_map_first(exec, &xs, |&x| {
        let xe = subset::members(x);
        // drop x quickly if no (r)-subset of x is a basis
        let hats: Vec<Elem> = xe.iter().map(|&e| get(x & !(1 << e))).collect();
        if hats.iter().all(|h| h.is_zero()) {
            return None;
        }
        let mut terms = Vec::with_capacity(r + 1);
        for &y in &ys {
            terms.clear();
            for (k, &e) in xe.iter().enumerate() {
                if hats[k].is_zero() || subset::contains(y, e) {
                    continue;
                }
                let w = get(y | 1 << e);
                if w.is_zero() {
                    continue;
                }
                // (x_k, y) is sorted after moving x_k past the smaller members of y
                let odd = (k + subset::rank_below(y, e)) % 2 == 1;
                terms.push(idyll.signed(&idyll.mul_raw(&hats[k], &w), odd));
            }
            match idyll.is_null_raw(&terms) {
                Ok(true) => {}
                Ok(false) => return Some(GpViolation::Exchange { x: names(x), y: names(y) }),
                Err(error) => return Some(GpViolation::Undecidable { x: names(x), y: names(y), error }),
            }
        }
        None
    });
    match found {
        Some(v) => Err(v),
        None => Ok(()),
    }
}
