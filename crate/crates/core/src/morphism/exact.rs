//! Admissible monos and epis, kernels, cokernels, completions of squares and
//! sums of subobjects.

use std::sync::Arc;

use thiserror::Error;

use super::{positions, SubmonomialMap};
use crate::matroid::FMatroid;
use crate::subset::{self, Mask};

/// Which witnesses are allowed: any subset, or only flats.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    General,
    Simple,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdmissibleKind {
    Mono,
    Epi,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NotAdmissible {
    #[error("the matrix is not a morphism")]
    NotMorphism,
    #[error("underlying map is not injective")]
    NotInjective,
    #[error("underlying map is not surjective")]
    NotSurjective,
    #[error("witness {0:b} is not a flat")]
    NotFlat(Mask),
    #[error("the induced map onto the witness minor is not an isomorphism")]
    NotIsomorphism,
    #[error("underlying map is neither injective nor surjective")]
    Neither,
}

/// `f = r_A ∘ iso` (mono) or `f = iso ∘ c_B` (epi).
#[derive(Clone, Debug)]
pub struct Admissible {
    pub kind: AdmissibleKind,
    /// The image `A` in the target (mono) or the kernel `B` in the source
    /// (epi).
    pub witness: Mask,
    /// `M -> N|A` for a mono, `M/B -> N` for an epi.
    pub iso: SubmonomialMap,
}

fn is_flat(m: &FMatroid, a: Mask) -> bool {
    m.classical().is_flat(a)
}

impl SubmonomialMap {
    pub fn factor_mono(&self, mode: Mode) -> Result<Admissible, NotAdmissible> {
        if !self.is_mono() {
            return Err(NotAdmissible::NotInjective);
        }
        let a = self.image_mask();
        if mode == Mode::Simple && !is_flat(&self.target, a) {
            return Err(NotAdmissible::NotFlat(a));
        }
        let iso = self.corestrict(a);
        if !iso.is_isomorphism() {
            return Err(NotAdmissible::NotIsomorphism);
        }
        Ok(Admissible { kind: AdmissibleKind::Mono, witness: a, iso })
    }

    pub fn factor_epi(&self, mode: Mode) -> Result<Admissible, NotAdmissible> {
        if !self.is_epi() {
            return Err(NotAdmissible::NotSurjective);
        }
        let b = self.kernel_mask();
        if mode == Mode::Simple && !is_flat(&self.source, b) {
            return Err(NotAdmissible::NotFlat(b));
        }
        let iso = self.factor_through_contraction(b);
        if !iso.is_isomorphism() {
            return Err(NotAdmissible::NotIsomorphism);
        }
        Ok(Admissible { kind: AdmissibleKind::Epi, witness: b, iso })
    }

    /// Mono factorization if the underlying map is injective, otherwise epi.
    pub fn factor_admissible(&self, mode: Mode) -> Result<Admissible, NotAdmissible> {
        if !self.is_morphism() {
            return Err(NotAdmissible::NotMorphism);
        }
        match (self.is_mono(), self.is_epi()) {
            (true, _) => self.factor_mono(mode),
            (false, true) => self.factor_epi(mode),
            (false, false) => Err(NotAdmissible::Neither),
        }
    }

    pub fn is_admissible_mono(&self, mode: Mode) -> bool {
        self.is_morphism() && self.factor_mono(mode).is_ok()
    }

    pub fn is_admissible_epi(&self, mode: Mode) -> bool {
        self.is_morphism() && self.factor_epi(mode).is_ok()
    }

    /// Restriction to the elements sent to the basepoint. In simple mode
    /// the kernel set must be a flat.
    pub fn kernel(&self, mode: Mode) -> Result<SubmonomialMap, NotAdmissible> {
        let k = self.kernel_mask();
        if mode == Mode::Simple && !is_flat(&self.source, k) {
            return Err(NotAdmissible::NotFlat(k));
        }
        Ok(SubmonomialMap::restriction(self.source.clone(), k))
    }

    /// Contraction of the target by the image, or by its closure in simple
    /// mode.
    pub fn cokernel(&self, mode: Mode) -> SubmonomialMap {
        let mut c = self.image_mask();
        if mode == Mode::Simple {
            c = self.target.classical().closure(c);
        }
        SubmonomialMap::contraction(self.target.clone(), c)
    }
}

/// A commutative square
///
/// ```text
/// P --top--> N
/// |          |
/// left     right
/// v          v
/// M -bottom-> R
/// ```
#[derive(Clone, Debug)]
pub struct Square {
    pub top: SubmonomialMap,
    pub left: SubmonomialMap,
    pub right: SubmonomialMap,
    pub bottom: SubmonomialMap,
}

impl Square {
    pub fn corner(&self) -> &Arc<FMatroid> {
        self.top.source()
    }

    pub fn opposite(&self) -> &Arc<FMatroid> {
        self.right.target()
    }

    pub fn commutes(&self) -> bool {
        match (self.right.compose(&self.top), self.bottom.compose(&self.left)) {
            (Ok(a), Ok(b)) => a.same_matrix(&b),
            _ => false,
        }
    }

    /// Transposes every arrow; monos become epis and the square flips
    /// across its diagonal.
    pub fn dual(&self) -> Square {
        Square {
            top: self.right.transpose(),
            left: self.bottom.transpose(),
            right: self.top.transpose(),
            bottom: self.left.transpose(),
        }
    }

    /// Horizontal arrows admissible monos, vertical ones admissible epis.
    pub fn is_admissible(&self, mode: Mode) -> bool {
        self.top.is_admissible_mono(mode)
            && self.bottom.is_admissible_mono(mode)
            && self.left.is_admissible_epi(mode)
            && self.right.is_admissible_epi(mode)
    }
}

/// Completes `M ↣ R ↞ N` by `N|C` with `C` the preimage of the image of
/// `M` together with the kernel of `N -> R`.
pub fn complete_cospan(bottom: &SubmonomialMap, right: &SubmonomialMap, mode: Mode) -> Result<Square, NotAdmissible> {
    if !bottom.is_morphism() || !right.is_morphism() {
        return Err(NotAdmissible::NotMorphism);
    }
    let fi = bottom.factor_mono(mode)?;
    let fj = right.factor_epi(mode)?;
    let n = right.source().clone();
    let c = right.preimage(fi.witness) | fj.witness;
    if mode == Mode::Simple && !is_flat(&n, c) {
        return Err(NotAdmissible::NotFlat(c));
    }
    let top = SubmonomialMap::restriction(n, c);
    let idyll = bottom.idyll();
    // inverse of the mono on its image
    let mut back = vec![None; bottom.target().len()];
    for (m, a) in bottom.assignment().iter().enumerate() {
        if let Some((r, ci)) = a {
            back[*r] = Some((m, ci.clone()));
        }
    }
    let assign = subset::members(c)
        .into_iter()
        .map(|e| {
            let (r, cj) = right.assignment()[e].as_ref()?;
            let (m, ci) = back[*r].as_ref().expect("image of the restricted set lies in the mono's image");
            Some((*m, idyll.mul_raw(cj, &idyll.inv(ci))))
        })
        .collect();
    let left = SubmonomialMap::trusted(top.source().clone(), bottom.source().clone(), assign);
    Ok(Square { top, left, right: right.clone(), bottom: bottom.clone() })
}

/// Completes `M ↞ P ↣ N` by `N/A'` with `A'` the image of the kernel of
/// `P -> M`.
pub fn complete_span(top: &SubmonomialMap, left: &SubmonomialMap, mode: Mode) -> Result<Square, NotAdmissible> {
    if !top.is_morphism() || !left.is_morphism() {
        return Err(NotAdmissible::NotMorphism);
    }
    top.factor_mono(mode)?;
    let fp = left.factor_epi(mode)?;
    let n = top.target().clone();
    let a = top.image_of(fp.witness);
    if mode == Mode::Simple && !is_flat(&n, a) {
        return Err(NotAdmissible::NotFlat(a));
    }
    let right = SubmonomialMap::contraction(n, a);
    let pos = positions(subset::full(top.target().len()) & !a);
    let idyll = top.idyll();
    let mut assign = vec![None; left.target().len()];
    for (e, pa) in left.assignment().iter().enumerate() {
        if let Some((m, cp)) = pa {
            let (q, cq) = top.assignment()[e].as_ref().expect("admissible mono is total");
            assign[*m] = Some((pos[*q], idyll.mul_raw(cq, &idyll.inv(cp))));
        }
    }
    let bottom = SubmonomialMap::trusted(left.target().clone(), right.target().clone(), assign);
    Ok(Square { top: top.clone(), left: left.clone(), right, bottom })
}

/// `M|A₁ + M|A₂`: restriction to the union, or to the join in simple mode.
pub fn subobject_sum(m: &Arc<FMatroid>, a1: Mask, a2: Mask, mode: Mode) -> SubmonomialMap {
    let mut a = a1 | a2;
    if mode == Mode::Simple {
        a = m.classical().closure(a);
    }
    SubmonomialMap::restriction(m.clone(), a)
}

/// `M|A₁ ∩ M|A₂`: restriction to the intersection (the meet of flats).
pub fn subobject_intersection(m: &Arc<FMatroid>, a1: Mask, a2: Mask) -> SubmonomialMap {
    SubmonomialMap::restriction(m.clone(), a1 & a2)
}
