//! Direct sums of maps, splittings and the hom-pair checks.

use std::collections::HashSet;
use std::sync::Arc;

use super::{hom_set, Mode, MorphismError, SubmonomialMap};
use crate::matroid::FMatroid;
use crate::subset::{self, Mask};

fn sum(m: &FMatroid, n: &FMatroid) -> Result<Arc<FMatroid>, MorphismError> {
    m.direct_sum(n).map(Arc::new).map_err(|_| MorphismError::IdyllMismatch)
}

fn block(range: std::ops::Range<usize>, offset: usize, one: &crate::idyll::Elem) -> Vec<Option<(usize, crate::idyll::Elem)>> {
    range.map(|i| Some((i + offset, one.clone()))).collect()
}

/// `M -> M ⊕ N`.
pub fn inclusion_left(m: &Arc<FMatroid>, n: &Arc<FMatroid>) -> Result<SubmonomialMap, MorphismError> {
    let s = sum(m, n)?;
    let one = m.idyll().one();
    Ok(SubmonomialMap::trusted(m.clone(), s, block(0..m.len(), 0, &one)))
}

/// `N -> M ⊕ N`.
pub fn inclusion_right(m: &Arc<FMatroid>, n: &Arc<FMatroid>) -> Result<SubmonomialMap, MorphismError> {
    let s = sum(m, n)?;
    let one = m.idyll().one();
    Ok(SubmonomialMap::trusted(n.clone(), s, block(0..n.len(), m.len(), &one)))
}

/// `M ⊕ N -> M`.
pub fn projection_left(m: &Arc<FMatroid>, n: &Arc<FMatroid>) -> Result<SubmonomialMap, MorphismError> {
    let s = sum(m, n)?;
    let one = m.idyll().one();
    let mut assign = block(0..m.len(), 0, &one);
    assign.extend(std::iter::repeat_n(None, n.len()));
    Ok(SubmonomialMap::trusted(s, m.clone(), assign))
}

/// `M ⊕ N -> N`.
pub fn projection_right(m: &Arc<FMatroid>, n: &Arc<FMatroid>) -> Result<SubmonomialMap, MorphismError> {
    let s = sum(m, n)?;
    let one = m.idyll().one();
    let mut assign = vec![None; m.len()];
    assign.extend(block(0..n.len(), 0, &one));
    Ok(SubmonomialMap::trusted(s, n.clone(), assign))
}

/// Block-diagonal `f ⊕ g`.
pub fn sum_of_maps(f: &SubmonomialMap, g: &SubmonomialMap) -> Result<SubmonomialMap, MorphismError> {
    let source = sum(f.source(), g.source())?;
    let target = sum(f.target(), g.target())?;
    let shift = f.target().len();
    let mut assign = f.assignment().to_vec();
    assign.extend(g.assignment().iter().map(|a| a.as_ref().map(|(j, c)| (j + shift, c.clone()))));
    Ok(SubmonomialMap::trusted(source, target, assign))
}

/// The map `M ⊕ N -> X` restricting to `i` on `M` and `s` on `N`, if the
/// combined matrix is submonomial.
pub fn splitting_iso(i: &SubmonomialMap, s: &SubmonomialMap) -> Result<SubmonomialMap, MorphismError> {
    let source = sum(i.source(), s.source())?;
    let mut assign = i.assignment().to_vec();
    assign.extend(s.assignment().iter().cloned());
    SubmonomialMap::new(source, i.target().clone(), assign)
}

/// Splits an admissible mono `g: N ↣ M₁ ⊕ M₂` as `(ι₁ ⊕ ι₂) ∘ f` with
/// `ι_k: M_k|A_k ↣ M_k` and `f: N -> M₁|A₁ ⊕ M₂|A₂` an isomorphism.
pub fn combinatorial_split(
    g: &SubmonomialMap,
    m1: &Arc<FMatroid>,
    m2: &Arc<FMatroid>,
) -> Result<(SubmonomialMap, SubmonomialMap, SubmonomialMap), MorphismError> {
    let fac = g.factor_mono(Mode::General)?;
    let n1 = m1.len();
    let a1: Mask = fac.witness & subset::full(n1);
    let a2: Mask = fac.witness >> n1;
    let i1 = SubmonomialMap::restriction(m1.clone(), a1);
    let i2 = SubmonomialMap::restriction(m2.clone(), a2);
    let split = sum(i1.source(), i2.source())?;
    let pos = super::positions(fac.witness);
    let assign = g.assignment().iter().map(|a| a.as_ref().map(|(j, c)| (pos[*j], c.clone()))).collect();
    let f = SubmonomialMap::trusted(g.source().clone(), split, assign);
    Ok((i1, i2, f))
}

/// Both hom-pair maps `Hom(M⊕N, R) -> Hom(M,R) × Hom(N,R)` and
/// `Hom(R, M⊕N) -> Hom(R,M) × Hom(R,N)` are injective.
pub fn hom_pair_injective(m: &Arc<FMatroid>, n: &Arc<FMatroid>, r: &Arc<FMatroid>) -> Option<bool> {
    let s = sum(m, n).ok()?;
    let (im, in_) = (inclusion_left(m, n).ok()?, inclusion_right(m, n).ok()?);
    let (pm, pn) = (projection_left(m, n).ok()?, projection_right(m, n).ok()?);
    let mut seen = HashSet::new();
    for f in hom_set(&s, r)? {
        let pair = (f.compose(&im).ok()?.assignment().to_vec(), f.compose(&in_).ok()?.assignment().to_vec());
        if !seen.insert(pair) {
            return Some(false);
        }
    }
    seen.clear();
    for f in hom_set(r, &s)? {
        let pair = (pm.compose(&f).ok()?.assignment().to_vec(), pn.compose(&f).ok()?.assignment().to_vec());
        if !seen.insert(pair) {
            return Some(false);
        }
    }
    Some(true)
}
