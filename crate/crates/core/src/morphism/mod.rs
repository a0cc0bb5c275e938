//! Submonomial morphisms between matroids over the same idyll.

mod enumerate;
mod exact;
mod structure;
#[cfg(test)]
mod tests;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::idyll::{Elem, Idyll};
use crate::matroid::{orthogonal, FMatroid, GroundVector};
use crate::par::{self, Exec};
use crate::subset::{self, Mask};

pub use enumerate::{hom_set, hom_set_with, is_cartesian, is_cocartesian, partial_injections};
pub use exact::{
    complete_cospan, complete_span, subobject_intersection, subobject_sum, Admissible, AdmissibleKind, Mode,
    NotAdmissible, Square,
};
pub use structure::{
    combinatorial_split, hom_pair_injective, inclusion_left, inclusion_right, projection_left, projection_right,
    splitting_iso, sum_of_maps,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphismError {
    #[error("source and target live over different idylls")]
    IdyllMismatch,
    #[error("assignment has {got} entries, source has {want} elements")]
    WrongLength { got: usize, want: usize },
    #[error("element {0} is sent outside the target")]
    OutOfRange(usize),
    #[error("two source elements share the target element {0}")]
    NotInjective(usize),
    #[error("coefficient {0} is not a unit")]
    NotUnit(Elem),
    #[error("maps are not composable")]
    NotComposable,
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("{0}")]
    NotAdmissible(#[from] NotAdmissible),
}

/// Witness that the Plücker-type morphism criterion fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismViolation {
    /// Sorted source elements, one more than the source rank.
    pub x: Mask,
    /// Sorted target elements, one fewer than the target rank.
    pub y: Mask,
    pub undecidable: bool,
}

/// A partial injection of non-basepoint elements with a unit coefficient on
/// each assigned element. Unassigned elements go to the target basepoint.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubmonomialMap {
    source: Arc<FMatroid>,
    target: Arc<FMatroid>,
    assign: Vec<Option<(usize, Elem)>>,
}

impl fmt::Debug for SubmonomialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubmonomialMap[")?;
        for (i, a) in self.assign.iter().enumerate() {
            if let Some((j, c)) = a {
                write!(f, " {}->{}:{}", self.source.ground().label(i), self.target.ground().label(*j), c)?;
            }
        }
        write!(f, " ]")
    }
}

impl SubmonomialMap {
    pub fn new(
        source: Arc<FMatroid>,
        target: Arc<FMatroid>,
        assign: Vec<Option<(usize, Elem)>>,
    ) -> Result<Self, MorphismError> {
        if source.idyll() != target.idyll() {
            return Err(MorphismError::IdyllMismatch);
        }
        if assign.len() != source.len() {
            return Err(MorphismError::WrongLength { got: assign.len(), want: source.len() });
        }
        let mut used: Mask = 0;
        for (i, a) in assign.iter().enumerate() {
            if let Some((j, c)) = a {
                if *j >= target.len() {
                    return Err(MorphismError::OutOfRange(i));
                }
                if subset::contains(used, *j) {
                    return Err(MorphismError::NotInjective(*j));
                }
                used |= 1 << j;
                if c.is_zero() || !source.idyll().contains(c) {
                    return Err(MorphismError::NotUnit(c.clone()));
                }
            }
        }
        Ok(SubmonomialMap { source, target, assign })
    }

    pub(crate) fn trusted(source: Arc<FMatroid>, target: Arc<FMatroid>, assign: Vec<Option<(usize, Elem)>>) -> Self {
        debug_assert_eq!(assign.len(), source.len());
        SubmonomialMap { source, target, assign }
    }

    /// Builds from `(source label, target label, coefficient)` triples.
    pub fn from_labels<S: AsRef<str>>(
        source: Arc<FMatroid>,
        target: Arc<FMatroid>,
        pairs: &[(S, S, Elem)],
    ) -> Result<Self, MorphismError> {
        let mut assign = vec![None; source.len()];
        for (a, b, c) in pairs {
            let i = element(&source, a.as_ref())?;
            let j = element(&target, b.as_ref())?;
            assign[i] = Some((j, c.clone()));
        }
        Self::new(source, target, assign)
    }

    pub fn identity(m: Arc<FMatroid>) -> Self {
        let one = m.idyll().one();
        let assign = (0..m.len()).map(|i| Some((i, one.clone()))).collect();
        SubmonomialMap { source: m.clone(), target: m, assign }
    }

    /// Every element to the basepoint.
    pub fn zero(source: Arc<FMatroid>, target: Arc<FMatroid>) -> Self {
        let assign = vec![None; source.len()];
        SubmonomialMap { source, target, assign }
    }

    /// `M|A -> M`, the identity on `A`.
    pub fn restriction(m: Arc<FMatroid>, a: Mask) -> Self {
        let sub = Arc::new(m.restrict_mask(a));
        let one = m.idyll().one();
        let assign = subset::members(a).into_iter().map(|i| Some((i, one.clone()))).collect();
        SubmonomialMap { source: sub, target: m, assign }
    }

    /// `M -> M/A`, the identity off `A`.
    pub fn contraction(m: Arc<FMatroid>, a: Mask) -> Self {
        let quo = Arc::new(m.contract_mask(a));
        let one = m.idyll().one();
        let mut next = 0;
        let assign = (0..m.len())
            .map(|i| {
                if subset::contains(a, i) {
                    None
                } else {
                    next += 1;
                    Some((next - 1, one.clone()))
                }
            })
            .collect();
        SubmonomialMap { source: m, target: quo, assign }
    }

    /// Multiplies every element by the unit `c`.
    pub fn scaling(m: Arc<FMatroid>, c: Elem) -> Self {
        let assign = (0..m.len()).map(|i| Some((i, c.clone()))).collect();
        SubmonomialMap { source: m.clone(), target: m, assign }
    }

    pub fn source(&self) -> &Arc<FMatroid> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FMatroid> {
        &self.target
    }

    pub fn idyll(&self) -> &Idyll {
        self.source.idyll()
    }

    pub fn assignment(&self) -> &[Option<(usize, Elem)>] {
        &self.assign
    }

    /// Underlying map of pointed sets on non-basepoint elements.
    pub fn underlying(&self) -> Vec<Option<usize>> {
        self.assign.iter().map(|a| a.as_ref().map(|(j, _)| *j)).collect()
    }

    /// Source elements sent to the basepoint.
    pub fn kernel_mask(&self) -> Mask {
        self.assign.iter().enumerate().filter(|(_, a)| a.is_none()).fold(0, |m, (i, _)| m | 1 << i)
    }

    /// Target elements hit by some source element.
    pub fn image_mask(&self) -> Mask {
        self.assign.iter().flatten().fold(0, |m, (j, _)| m | 1 << j)
    }

    /// Preimage of a set of target elements.
    pub fn preimage(&self, b: Mask) -> Mask {
        self.assign
            .iter()
            .enumerate()
            .filter(|(_, a)| matches!(a, Some((j, _)) if subset::contains(b, *j)))
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    pub fn image_of(&self, a: Mask) -> Mask {
        subset::members(a).into_iter().filter_map(|i| self.assign[i].as_ref().map(|(j, _)| *j)).fold(0, |m, j| m | 1 << j)
    }

    pub fn is_zero_map(&self) -> bool {
        self.assign.iter().all(Option::is_none)
    }

    /// Checks the Plücker-type criterion on sorted subsets of the source
    /// of size `rank + 1` and of the target of size `rank - 1`. Repeated or
    /// permuted tuples only contribute cancelling pairs or a global sign.
    pub fn check_with(&self, exec: Exec) -> Result<(), MorphismViolation> {
        let (m, n) = (self.source.rank(), self.target.rank());
        if self.source.is_empty() || self.target.is_empty() || n == 0 {
            return Ok(());
        }
        let idyll = self.idyll();
        let xs = subset::k_subsets(self.source.ground().all(), m + 1);
        let ys = subset::k_subsets(self.target.ground().all(), n - 1);
        let found = par::find_map_first(exec, &xs, |&x| {
            let members = subset::members(x);
            let mut terms = Vec::with_capacity(members.len());
            for &y in &ys {
                terms.clear();
                for (k, &e) in members.iter().enumerate() {
                    let Some((j, c)) = &self.assign[e] else { continue };
                    if subset::contains(y, *j) {
                        continue;
                    }
                    let mu = self.source.value(x & !(1 << e));
                    if mu.is_zero() {
                        continue;
                    }
                    let nu = self.target.value(y | 1 << j);
                    if nu.is_zero() {
                        continue;
                    }
                    let v = idyll.mul_raw(&idyll.mul_raw(&mu, c), &nu);
                    terms.push(idyll.signed(&v, (k + subset::rank_below(y, *j)) % 2 == 1));
                }
                match idyll.is_null_raw(&terms) {
                    Ok(true) => {}
                    Ok(false) => return Some(MorphismViolation { x, y, undecidable: false }),
                    Err(_) => return Some(MorphismViolation { x, y, undecidable: true }),
                }
            }
            None
        });
        found.map_or(Ok(()), Err)
    }

    pub fn check(&self) -> Result<(), MorphismViolation> {
        self.check_with(Exec::default())
    }

    pub fn is_morphism(&self) -> bool {
        self.check().is_ok()
    }

    /// Applies the matrix to a vector of source entries.
    pub fn apply(&self, v: &GroundVector) -> GroundVector {
        let idyll = self.idyll();
        let mut out = GroundVector::zero(self.target.len());
        for (i, a) in self.assign.iter().enumerate() {
            if let Some((j, c)) = a {
                out.entries[*j] = idyll.mul_raw(c, &v.entries[i]);
            }
        }
        out
    }

    /// Vector criterion: `f` sends every vector of the source to a vector of
    /// the target. Enumerates all of `F^E`, so only answers for finite
    /// idylls with at most `limit` candidate vectors.
    pub fn check_vectors(&self, limit: usize) -> Option<bool> {
        let units = self.idyll().units()?;
        let n = self.source.len();
        let base = units.len() + 1;
        let total = base.checked_pow(n as u32)?;
        if total > limit {
            return None;
        }
        let idyll = self.idyll();
        let src_co = self.source.cocircuits();
        let tgt_co = self.target.cocircuits();
        let mut alphabet = vec![Elem::Zero];
        alphabet.extend(units);
        let mut digits = vec![0usize; n];
        for _ in 0..total {
            let v = GroundVector { entries: digits.iter().map(|&d| alphabet[d].clone()).collect() };
            if src_co.iter().all(|c| orthogonal(idyll, &v, c)) {
                let w = self.apply(&v);
                if !tgt_co.iter().all(|c| orthogonal(idyll, &w, c)) {
                    return Some(false);
                }
            }
            for d in digits.iter_mut() {
                *d += 1;
                if *d < base {
                    break;
                }
                *d = 0;
            }
        }
        Some(true)
    }

    /// `g ∘ f`.
    pub fn then(&self, g: &SubmonomialMap) -> Result<SubmonomialMap, MorphismError> {
        g.compose(self)
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &SubmonomialMap) -> Result<SubmonomialMap, MorphismError> {
        if !Arc::ptr_eq(&f.target, &self.source) && f.target != self.source {
            return Err(MorphismError::NotComposable);
        }
        let idyll = self.idyll();
        let assign = f
            .assign
            .iter()
            .map(|a| {
                let (j, c) = a.as_ref()?;
                let (k, d) = self.assign[*j].as_ref()?;
                Some((*k, idyll.mul_raw(d, c)))
            })
            .collect();
        Ok(SubmonomialMap { source: f.source.clone(), target: self.target.clone(), assign })
    }

    /// The transposed matrix, a map between the duals in the opposite
    /// direction.
    pub fn transpose(&self) -> SubmonomialMap {
        let mut assign = vec![None; self.target.len()];
        for (i, a) in self.assign.iter().enumerate() {
            if let Some((j, c)) = a {
                assign[*j] = Some((i, c.clone()));
            }
        }
        SubmonomialMap { source: Arc::new(self.target.dual()), target: Arc::new(self.source.dual()), assign }
    }

    pub fn is_mono(&self) -> bool {
        self.assign.iter().all(Option::is_some)
    }

    pub fn is_epi(&self) -> bool {
        self.image_mask() == self.target.ground().all()
    }

    /// The entrywise inverse of a bijective matrix.
    pub fn inverse_matrix(&self) -> Option<SubmonomialMap> {
        if !self.is_mono() || !self.is_epi() {
            return None;
        }
        let idyll = self.idyll();
        let mut assign = vec![None; self.target.len()];
        for (i, a) in self.assign.iter().enumerate() {
            let (j, c) = a.as_ref()?;
            assign[*j] = Some((i, idyll.inv(c)));
        }
        Some(SubmonomialMap { source: self.target.clone(), target: self.source.clone(), assign })
    }

    pub fn is_isomorphism(&self) -> bool {
        match self.inverse_matrix() {
            Some(inv) => self.is_morphism() && inv.is_morphism(),
            None => false,
        }
    }

    /// Replaces the target by `N|B` for a set `B` containing the image.
    pub fn corestrict(&self, b: Mask) -> SubmonomialMap {
        let pos = positions(b);
        let assign = self.assign.iter().map(|a| a.as_ref().map(|(j, c)| (pos[*j], c.clone()))).collect();
        SubmonomialMap { source: self.source.clone(), target: Arc::new(self.target.restrict_mask(b)), assign }
    }

    /// Replaces the source by `M/A` for a set `A` inside the kernel.
    pub fn factor_through_contraction(&self, a: Mask) -> SubmonomialMap {
        let assign = (0..self.source.len()).filter(|i| !subset::contains(a, *i)).map(|i| self.assign[i].clone()).collect();
        SubmonomialMap { source: Arc::new(self.source.contract_mask(a)), target: self.target.clone(), assign }
    }

    /// Same matrix between two given objects; used to compare arrows whose
    /// endpoints were built independently.
    pub fn same_matrix(&self, other: &SubmonomialMap) -> bool {
        self.assign == other.assign
    }
}

pub(crate) use crate::subset::positions;

fn element(m: &FMatroid, label: &str) -> Result<usize, MorphismError> {
    match m.ground().lookup(label) {
        Some(Some(i)) => Ok(i),
        _ => Err(MorphismError::UnknownLabel(label.to_string())),
    }
}
