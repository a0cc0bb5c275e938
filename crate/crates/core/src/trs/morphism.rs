//! Morphisms of sheaves: a matroid morphism together with a character
//! shift `u`, and the exact-structure operations built on them.

use std::sync::Arc;

use super::{Trs, TrsError};
use crate::morphism::{
    complete_cospan, complete_span, AdmissibleKind, Mode, MorphismError, Square, SubmonomialMap,
};
use crate::subset::Mask;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrsMorphism {
    pub source: Arc<Trs>,
    pub target: Arc<Trs>,
    pub base: SubmonomialMap,
    pub u: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TrsMorphismError {
    #[error(transparent)]
    Base(#[from] MorphismError),
    #[error(transparent)]
    Sheaf(#[from] TrsError),
    #[error("underlying map does not match the sheaves")]
    BaseMismatch,
    #[error("ray {ray}: image of F_{j} is not inside the shifted target flag")]
    Flag { ray: String, j: i64 },
    #[error("underlying map is not a morphism")]
    NotMorphism,
    #[error("not composable")]
    NotComposable,
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

impl TrsMorphism {
    /// Validates the base morphism and `f(F_j) ⊆ G_{j + u·v_ρ}` on every
    /// ray, checked at the right end of each constancy interval.
    pub fn new(source: Arc<Trs>, target: Arc<Trs>, base: SubmonomialMap, u: Vec<i64>) -> Result<Self, TrsMorphismError> {
        if source.fan != target.fan {
            return Err(TrsError::FanMismatch.into());
        }
        if **base.source() != *source.matroid || **base.target() != *target.matroid {
            return Err(TrsMorphismError::BaseMismatch);
        }
        if !base.is_morphism() {
            return Err(TrsMorphismError::NotMorphism);
        }
        let shifts = source.fan.pairings(&u)?;
        for (r, ray) in source.fan.rays.iter().enumerate() {
            for (j, f) in source.flags[r].intervals(source.all()) {
                let g = target.flag_at(r, j + shifts[r]);
                if base.image_of(f) & !g != 0 {
                    return Err(TrsMorphismError::Flag { ray: ray.name.clone(), j });
                }
            }
        }
        Ok(TrsMorphism { source, target, base, u })
    }

    pub fn identity(e: &Arc<Trs>) -> Self {
        let base = SubmonomialMap::identity(e.matroid.clone());
        TrsMorphism { source: e.clone(), target: e.clone(), base, u: vec![0; e.fan.dim()] }
    }

    /// `self ∘ f`, adding the shifts.
    pub fn compose(&self, f: &TrsMorphism) -> Result<TrsMorphism, TrsMorphismError> {
        if *f.target != *self.source {
            return Err(TrsMorphismError::NotComposable);
        }
        let base = self.base.compose(&f.base)?;
        Ok(TrsMorphism { source: f.source.clone(), target: self.target.clone(), base, u: add(&self.u, &f.u) })
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero_map()
    }

    /// `g` is a two-sided inverse: base matrices invert, shifts cancel.
    pub fn is_inverse(&self, g: &TrsMorphism) -> bool {
        let (Ok(gf), Ok(fg)) = (g.compose(self), self.compose(g)) else { return false };
        gf.u.iter().all(|&x| x == 0)
            && fg.u.iter().all(|&x| x == 0)
            && gf.base.same_matrix(&SubmonomialMap::identity(self.source.matroid.clone()))
            && fg.base.same_matrix(&SubmonomialMap::identity(self.target.matroid.clone()))
    }

    /// Builds the inverse when the base is an isomorphism and the flags
    /// correspond exactly.
    pub fn inverse(&self) -> Option<TrsMorphism> {
        let inv = self.base.inverse_matrix()?;
        let u = self.u.iter().map(|x| -x).collect();
        let g = TrsMorphism::new(self.target.clone(), self.source.clone(), inv, u).ok()?;
        self.is_inverse(&g).then_some(g)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.inverse().is_some()
    }

    /// `ker f = E|K` with `K` the preimage of the basepoint, and its inclusion.
    pub fn kernel(&self) -> Result<TrsMorphism, TrsMorphismError> {
        let k = self.base.kernel(Mode::Simple).map_err(MorphismError::from)?;
        let mask = k.image_mask();
        restriction_of(&self.source, mask)
    }

    /// `coker f = F / cl(im f)` and its projection.
    pub fn cokernel(&self) -> Result<TrsMorphism, TrsMorphismError> {
        let c = self.base.cokernel(Mode::Simple);
        let mask = c.kernel_mask();
        contraction_of(&self.target, mask)
    }

    /// A witness flat when the map is an admissible mono (resp. epi) of
    /// sheaves: the base factors through a flat and the induced matroid
    /// isomorphism is an isomorphism of sheaves.
    pub fn admissible(&self, kind: AdmissibleKind) -> Option<Mask> {
        match kind {
            AdmissibleKind::Mono => {
                let fac = self.base.factor_mono(Mode::Simple).ok()?;
                let r = restriction_of(&self.target, fac.witness).ok()?;
                let iso = TrsMorphism::new(self.source.clone(), r.source.clone(), fac.iso.clone(), self.u.clone()).ok()?;
                iso.is_isomorphism().then_some(fac.witness)
            }
            AdmissibleKind::Epi => {
                let fac = self.base.factor_epi(Mode::Simple).ok()?;
                let c = contraction_of(&self.source, fac.witness).ok()?;
                let iso = TrsMorphism::new(c.target.clone(), self.target.clone(), fac.iso.clone(), self.u.clone()).ok()?;
                iso.is_isomorphism().then_some(fac.witness)
            }
        }
    }
}

/// `(r_F, 0): E|F ↣ E`.
pub fn restriction_of(e: &Arc<Trs>, f: Mask) -> Result<TrsMorphism, TrsMorphismError> {
    let r = Arc::new(e.restrict(f)?);
    let base = SubmonomialMap::restriction(e.matroid.clone(), f);
    TrsMorphism::new(r, e.clone(), base, vec![0; e.fan.dim()])
}

/// `(c_F, 0): E ↠ E/F`.
pub fn contraction_of(e: &Arc<Trs>, f: Mask) -> Result<TrsMorphism, TrsMorphismError> {
    let c = Arc::new(e.contract(f)?);
    let base = SubmonomialMap::contraction(e.matroid.clone(), f);
    TrsMorphism::new(e.clone(), c, base, vec![0; e.fan.dim()])
}

/// A commutative square of sheaf morphisms, laid out as for matroids.
#[derive(Clone, Debug)]
pub struct TrsSquare {
    pub top: TrsMorphism,
    pub left: TrsMorphism,
    pub right: TrsMorphism,
    pub bottom: TrsMorphism,
}

impl TrsSquare {
    pub fn commutes(&self) -> bool {
        let (Ok(a), Ok(b)) = (self.right.compose(&self.top), self.bottom.compose(&self.left)) else { return false };
        a.u == b.u && a.base.same_matrix(&b.base)
    }

    pub fn base(&self) -> Square {
        Square {
            top: self.top.base.clone(),
            left: self.left.base.clone(),
            right: self.right.base.clone(),
            bottom: self.bottom.base.clone(),
        }
    }
}

impl Trs {
    /// Completes `M ↣ R ↞ N` by the restriction of `N` to the preimage of
    /// the image of `M`.
    pub fn complete_cospan(bottom: &TrsMorphism, right: &TrsMorphism) -> Result<TrsSquare, TrsMorphismError> {
        let sq = complete_cospan(&bottom.base, &right.base, Mode::Simple).map_err(MorphismError::from)?;
        let n = &right.source;
        let c = sq.top.image_mask();
        let top = restriction_of(n, c)?;
        let left_base = SubmonomialMap::new(top.source.matroid.clone(), bottom.source.matroid.clone(), sq.left.assignment().to_vec())?;
        let left = TrsMorphism::new(top.source.clone(), bottom.source.clone(), left_base, sub(&right.u, &bottom.u))?;
        Ok(TrsSquare { top, left, right: right.clone(), bottom: bottom.clone() })
    }

    /// Completes `N ↢ P ↠ M` by the contraction of `N` at the image of the
    /// kernel of `P ↠ M`.
    pub fn complete_span(top: &TrsMorphism, left: &TrsMorphism) -> Result<TrsSquare, TrsMorphismError> {
        let sq = complete_span(&top.base, &left.base, Mode::Simple).map_err(MorphismError::from)?;
        let n = &top.target;
        let a = sq.right.kernel_mask();
        let right = contraction_of(n, a)?;
        let bottom_base = SubmonomialMap::new(left.target.matroid.clone(), right.target.matroid.clone(), sq.bottom.assignment().to_vec())?;
        let bottom = TrsMorphism::new(left.target.clone(), right.target.clone(), bottom_base, sub(&top.u, &left.u))?;
        Ok(TrsSquare { top: top.clone(), left: left.clone(), right, bottom })
    }
}
