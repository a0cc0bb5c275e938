//! Slope stability and Harder-Narasimhan filtrations.

use thiserror::Error;

use super::{Trs, TrsError};
use crate::idyll::Q;
use crate::subset::{self, Mask};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HnError {
    #[error(transparent)]
    Sheaf(#[from] TrsError),
    #[error("underlying matroid is not modular")]
    NotModular,
    #[error("maximal destabilizing flat is not unique")]
    NotUnique,
}

/// One step of a filtration: the flat and the slope of the quotient it
/// contributes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnStep {
    pub flat: Mask,
    pub slope: Q,
}

impl Trs {
    /// A proper nonzero flat whose restriction has larger slope, if any.
    pub fn destabilizing_flat(&self) -> Result<Option<Mask>, TrsError> {
        let mu = self.slope()?;
        let cl = self.matroid.classical();
        for f in self.flats() {
            let r = cl.rank_of(f);
            if r == 0 || f == self.all() {
                continue;
            }
            if self.restrict(f)?.slope()? > mu {
                return Ok(Some(f));
            }
        }
        Ok(None)
    }

    pub fn is_semistable(&self) -> Result<bool, TrsError> {
        Ok(self.destabilizing_flat()?.is_none())
    }

    /// The flat of largest slope, and among those of largest rank.
    fn maximal_destabilizing(&self) -> Result<Mask, HnError> {
        let cl = self.matroid.classical();
        let mut best: Option<(Q, usize, Mask)> = None;
        let mut tied = false;
        for f in self.flats() {
            let r = cl.rank_of(f);
            if r == 0 {
                continue;
            }
            let mu = self.restrict(f)?.slope()?;
            match &best {
                Some((bm, br, _)) if (mu, r) < (*bm, *br) => {}
                Some((bm, br, _)) if (mu, r) == (*bm, *br) => tied = true,
                _ => {
                    best = Some((mu, r, f));
                    tied = false;
                }
            }
        }
        if tied {
            return Err(HnError::NotUnique);
        }
        Ok(best.expect("nonzero sheaf has a nonzero flat").2)
    }

    /// The filtration `0 < F_1 < ... < F_k = E` as flats of the underlying
    /// matroid, each with the slope of its graded piece. Empty for the zero
    /// sheaf.
    pub fn hn_filtration(&self) -> Result<Vec<HnStep>, HnError> {
        if !self.is_modular() {
            return Err(HnError::NotModular);
        }
        let mut out = Vec::new();
        let mut current = self.clone();
        let mut base: Mask = self.matroid.classical().closure(0);
        // original indices of the elements of `current`
        let mut alive: Vec<usize> = subset::members(self.all() & !base);
        while !current.is_zero() {
            let f = current.maximal_destabilizing()?;
            let slope = current.restrict(f)?.slope()?;
            let lifted = subset::map_mask(f, |e| alive[e]);
            base |= lifted;
            out.push(HnStep { flat: base, slope });
            current = current.contract(f)?;
            alive = subset::members(self.all() & !base);
        }
        Ok(out)
    }

    /// `μ(E|F₁ / F₁∧F₂) ≤ μ(E|(F₁∨F₂) / F₂)`, vacuous when the left side is
    /// zero.
    pub fn strong_slope_holds(&self, f1: Mask, f2: Mask) -> Result<bool, TrsError> {
        self.require_flat(f1)?;
        self.require_flat(f2)?;
        let (meet, join) = (f1 & f2, self.matroid.classical().closure(f1 | f2));
        let left = self.subquotient(meet, f1)?;
        if left.is_zero() {
            return Ok(true);
        }
        let right = self.subquotient(f2, join)?;
        if right.is_zero() {
            return Ok(false);
        }
        Ok(left.slope()? <= right.slope()?)
    }
}

/// Every chain `bottom < F_1 < ... < F_k = E` of flats whose graded pieces
/// are semistable with strictly decreasing slopes.
pub fn hn_chains_brute_force(e: &Trs) -> Result<Vec<Vec<HnStep>>, TrsError> {
    let cl = e.matroid.classical();
    let bottom = cl.closure(0);
    let flats = e.flats();
    let mut out = Vec::new();
    let mut cur: Vec<HnStep> = Vec::new();
    fn go(
        e: &Trs,
        flats: &[Mask],
        below: Mask,
        cur: &mut Vec<HnStep>,
        out: &mut Vec<Vec<HnStep>>,
    ) -> Result<(), TrsError> {
        if below == e.all() {
            out.push(cur.clone());
            return Ok(());
        }
        for &f in flats {
            if f & below != below || f == below {
                continue;
            }
            let piece = e.subquotient(below, f)?;
            let mu = piece.slope()?;
            if cur.last().is_some_and(|s| s.slope <= mu) || !piece.is_semistable()? {
                continue;
            }
            cur.push(HnStep { flat: f, slope: mu });
            go(e, flats, f, cur, out)?;
            cur.pop();
        }
        Ok(())
    }
    if e.is_zero() {
        return Ok(vec![vec![]]);
    }
    go(e, &flats, bottom, &mut cur, &mut out)?;
    Ok(out)
}
