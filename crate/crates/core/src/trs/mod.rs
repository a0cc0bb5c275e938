//! Tropical toric reflexive sheaves: a simple tropical matroid with one
//! decreasing chain of flats per ray of a fan.

mod bundle;
mod hn;
mod morphism;
#[cfg(test)]
mod tests;

use std::sync::Arc;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::idyll::{Elem, Idyll, Q};
use crate::matroid::{Candidate, FMatroid};
use crate::subset::{self, Mask};

pub use bundle::{BundleWitness, NotBundle};
pub use hn::{hn_chains_brute_force, HnError, HnStep};
pub use morphism::{contraction_of, restriction_of, TrsMorphism, TrsMorphismError, TrsSquare};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrsError {
    #[error("ray {0} has the wrong dimension")]
    RayDimension(String),
    #[error("ray {0} is not primitive")]
    NotPrimitive(String),
    #[error("rays {0} and {1} coincide")]
    DuplicateRay(String, String),
    #[error("rays do not span the ambient space")]
    NotSpanning,
    #[error("polarization of ray {0} is not positive")]
    BadPolarization(String),
    #[error("cone refers to unknown ray {0}")]
    UnknownRay(String),
    #[error("matroid must be over the tropical idyll")]
    NotTropical,
    #[error("matroid is not simple")]
    NotSimple,
    #[error("expected {want} flag chains, got {got}")]
    ChainCount { want: usize, got: usize },
    #[error("chain for ray {ray}: {msg}")]
    BadChain { ray: String, msg: String },
    #[error("{0} is not a flat")]
    NotAFlat(String),
    #[error("the zero sheaf has no slope")]
    ZeroRank,
    #[error("sheaves live on different fans")]
    FanMismatch,
    #[error("vector has length {got}, fan dimension is {want}")]
    WrongDimension { got: usize, want: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ray {
    pub name: String,
    pub v: Vec<i64>,
    pub h: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fan {
    dim: usize,
    rays: Vec<Ray>,
    cones: Vec<Vec<usize>>,
}

fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| Q::from_integer(x)).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let f = m[i][c] / m[rank][c];
                let pivot = m[rank].clone();
                for (x, p) in m[i].iter_mut().zip(&pivot).skip(c) {
                    *x -= *p * f;
                }
            }
        }
        rank += 1;
    }
    rank
}

impl Fan {
    pub fn new(dim: usize, rays: Vec<Ray>, cones: Vec<Vec<usize>>) -> Result<Self, TrsError> {
        for (i, r) in rays.iter().enumerate() {
            if r.v.len() != dim {
                return Err(TrsError::RayDimension(r.name.clone()));
            }
            let g = r.v.iter().fold(0i64, |g, &x| g.gcd(&x));
            if g != 1 {
                return Err(TrsError::NotPrimitive(r.name.clone()));
            }
            if !r.h.is_positive() {
                return Err(TrsError::BadPolarization(r.name.clone()));
            }
            if let Some(o) = rays[..i].iter().find(|o| o.v == r.v || o.name == r.name) {
                return Err(TrsError::DuplicateRay(o.name.clone(), r.name.clone()));
            }
        }
        let vs: Vec<Vec<i64>> = rays.iter().map(|r| r.v.clone()).collect();
        if integer_rank(&vs) != dim {
            return Err(TrsError::NotSpanning);
        }
        for c in &cones {
            if let Some(&bad) = c.iter().find(|&&i| i >= rays.len()) {
                return Err(TrsError::UnknownRay(bad.to_string()));
            }
        }
        Ok(Fan { dim, rays, cones })
    }

    /// The fan of the projective line, rays `+` and `-`.
    pub fn p1(h: Q) -> Self {
        let rays = vec![
            Ray { name: "p".into(), v: vec![1], h },
            Ray { name: "m".into(), v: vec![-1], h },
        ];
        Fan::new(1, rays, vec![vec![0], vec![1]]).expect("valid fan")
    }

    /// The fan of the projective plane: rays e1, e2, -e1-e2.
    pub fn p2(h: Q) -> Self {
        let rays = vec![
            Ray { name: "r0".into(), v: vec![1, 0], h },
            Ray { name: "r1".into(), v: vec![0, 1], h },
            Ray { name: "r2".into(), v: vec![-1, -1], h },
        ];
        Fan::new(2, rays, vec![vec![0, 1], vec![1, 2], vec![2, 0]]).expect("valid fan")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn ray_index(&self, name: &str) -> Option<usize> {
        self.rays.iter().position(|r| r.name == name)
    }

    pub fn has_constant_polarization(&self) -> bool {
        self.rays.windows(2).all(|w| w[0].h == w[1].h)
    }

    /// `u · v_ρ` for every ray.
    pub fn pairings(&self, u: &[i64]) -> Result<Vec<i64>, TrsError> {
        if u.len() != self.dim {
            return Err(TrsError::WrongDimension { got: u.len(), want: self.dim });
        }
        Ok(self.rays.iter().map(|r| r.v.iter().zip(u).map(|(a, b)| a * b).sum()).collect())
    }
}

/// A right-continuous step chain: `F_j = flat` for `k <= j < next k`, the
/// whole ground set before the first step. Steps are strictly increasing in
/// `k` with strictly shrinking flats, ending at the bottom flat.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlagChain {
    steps: Vec<(i64, Mask)>,
}

impl FlagChain {
    /// Builds from arbitrary `(k, flat)` steps, dropping repeats.
    pub fn new(mut steps: Vec<(i64, Mask)>, all: Mask) -> Self {
        steps.sort_by_key(|s| s.0);
        let mut out: Vec<(i64, Mask)> = Vec::new();
        let mut prev = all;
        for (k, f) in steps {
            if let Some(last) = out.last_mut() {
                if last.0 == k {
                    *last = (k, f);
                    prev = f;
                    continue;
                }
            }
            if f != prev {
                out.push((k, f));
                prev = f;
            }
        }
        // a later step may have restored an earlier value
        let mut cleaned: Vec<(i64, Mask)> = Vec::new();
        let mut prev = all;
        for (k, f) in out {
            if f != prev {
                cleaned.push((k, f));
                prev = f;
            }
        }
        FlagChain { steps: cleaned }
    }

    pub fn steps(&self) -> &[(i64, Mask)] {
        &self.steps
    }

    pub fn at(&self, j: i64, all: Mask) -> Mask {
        self.steps.iter().rev().find(|s| s.0 <= j).map_or(all, |s| s.1)
    }

    /// Right ends of the constancy intervals, with their values; the last
    /// (unbounded) interval is omitted.
    pub(crate) fn intervals(&self, all: Mask) -> Vec<(i64, Mask)> {
        let mut out = Vec::new();
        let mut prev = all;
        for &(k, f) in &self.steps {
            out.push((k - 1, prev));
            prev = f;
        }
        out
    }

    /// Largest `j` with `e ∈ F_j`.
    pub fn last_index_containing(&self, e: usize) -> Option<i64> {
        self.steps.iter().find(|s| !subset::contains(s.1, e)).map(|s| s.0 - 1)
    }

    pub fn shifted(&self, a: i64) -> FlagChain {
        FlagChain { steps: self.steps.iter().map(|&(k, f)| (k + a, f)).collect() }
    }

    pub(crate) fn map(&self, all: Mask, f: impl Fn(Mask) -> Mask) -> FlagChain {
        FlagChain::new(self.steps.iter().map(|&(k, m)| (k, f(m))).collect(), f(all))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Trs {
    fan: Arc<Fan>,
    matroid: Arc<FMatroid>,
    flags: Vec<FlagChain>,
}

/// The trivially valued tropical matroid with the same bases.
pub fn trivially_valued(m: &FMatroid) -> FMatroid {
    let mut c = Candidate::new(Idyll::Tropical, m.ground().clone(), m.rank());
    for (s, _) in m.values() {
        c.values.insert(subset::Subset(s), Elem::Trop(Q::zero()));
    }
    FMatroid::new_with_limits(c, subset::MAX_ELEMENTS, subset::MAX_ELEMENTS).expect("bases of a matroid")
}

impl Trs {
    /// Checks simplicity, that every chain value is a flat, and that chains
    /// end at the bottom flat.
    pub fn new(fan: Arc<Fan>, matroid: Arc<FMatroid>, flags: Vec<FlagChain>) -> Result<Self, TrsError> {
        if !matches!(matroid.idyll(), Idyll::Tropical) {
            return Err(TrsError::NotTropical);
        }
        if !matroid.classical().is_simple() {
            return Err(TrsError::NotSimple);
        }
        Self::checked(fan, matroid, flags)
    }

    /// As [`Trs::new`] without the simplicity requirement; contractions of
    /// simple sheaves are only loopless.
    pub(crate) fn checked(fan: Arc<Fan>, matroid: Arc<FMatroid>, flags: Vec<FlagChain>) -> Result<Self, TrsError> {
        if flags.len() != fan.rays.len() {
            return Err(TrsError::ChainCount { want: fan.rays.len(), got: flags.len() });
        }
        let cl = matroid.classical();
        let bottom = cl.closure(0);
        for (ray, ch) in fan.rays.iter().zip(&flags) {
            let bad = |msg: &str| TrsError::BadChain { ray: ray.name.clone(), msg: msg.to_string() };
            let mut prev = cl.all();
            for &(_, f) in &ch.steps {
                if !cl.is_flat(f) {
                    return Err(bad(&format!("{:?} is not a flat", matroid.ground().names(f))));
                }
                if f & prev != f || f == prev {
                    return Err(bad("flats must strictly decrease"));
                }
                prev = f;
            }
            if prev != bottom {
                return Err(bad("chain must end at the basepoint flat"));
            }
        }
        Ok(Trs { fan, matroid, flags })
    }

    /// The zero sheaf.
    pub fn zero(fan: Arc<Fan>) -> Self {
        let n = fan.rays.len();
        Trs { fan, matroid: Arc::new(FMatroid::zero(Idyll::Tropical)), flags: vec![FlagChain { steps: vec![] }; n] }
    }

    /// The rank-one sheaf with chain `E` for `j <= a_ρ` and `{*}` above.
    pub fn line_bundle(fan: Arc<Fan>, a: &[i64]) -> Self {
        let m = Arc::new(trivially_valued(&crate::matroid::uniform(Idyll::Krasner, 1, 1).expect("U11")));
        let flags = a.iter().map(|&k| FlagChain { steps: vec![(k + 1, 0)] }).collect();
        Trs { fan, matroid: m, flags }
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    pub fn matroid(&self) -> &Arc<FMatroid> {
        &self.matroid
    }

    pub fn flags(&self) -> &[FlagChain] {
        &self.flags
    }

    pub fn rank(&self) -> usize {
        self.matroid.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn all(&self) -> Mask {
        self.matroid.ground().all()
    }

    pub fn flag_at(&self, ray: usize, j: i64) -> Mask {
        self.flags[ray].at(j, self.all())
    }

    /// `Σ_ρ h_ρ Σ_j j (rk F_j - rk F_{j+1})`, summed over breakpoints.
    pub fn degree(&self) -> Q {
        let cl = self.matroid.classical();
        let mut total = Q::zero();
        for (ray, ch) in self.fan.rays.iter().zip(&self.flags) {
            let mut prev = cl.rank_of(self.all());
            let mut sum = 0i64;
            for &(k, f) in &ch.steps {
                let r = cl.rank_of(f);
                sum += (k - 1) * (prev as i64 - r as i64);
                prev = r;
            }
            total += ray.h * Q::from_integer(sum);
        }
        total
    }

    pub fn slope(&self) -> Result<Q, TrsError> {
        if self.rank() == 0 {
            return Err(TrsError::ZeroRank);
        }
        Ok(self.degree() / Q::from_integer(self.rank() as i64))
    }

    pub fn is_modular(&self) -> bool {
        self.matroid.is_modular()
    }

    /// `E ⊗ L(a)`: every chain shifted by `a_ρ`.
    pub fn tensor(&self, a: &[i64]) -> Trs {
        let flags = self.flags.iter().zip(a).map(|(c, &s)| c.shifted(s)).collect();
        Trs { fan: self.fan.clone(), matroid: self.matroid.clone(), flags }
    }

    /// `E ⊗ L(χ^u)`, the shift by `u · v_ρ`.
    pub fn tensor_character(&self, u: &[i64]) -> Result<Trs, TrsError> {
        Ok(self.tensor(&self.fan.pairings(u)?))
    }

    pub(crate) fn require_flat(&self, f: Mask) -> Result<(), TrsError> {
        if self.matroid.classical().is_flat(f) {
            Ok(())
        } else {
            Err(TrsError::NotAFlat(format!("{:?}", self.matroid.ground().names(f))))
        }
    }

    /// `E|F` with chains `F ∧ E_j`.
    pub fn restrict(&self, f: Mask) -> Result<Trs, TrsError> {
        self.require_flat(f)?;
        let pos = subset::positions(f);
        let m = Arc::new(self.matroid.restrict_mask(f));
        let flags = self.flags.iter().map(|c| c.map(self.all(), |g| subset::map_mask(g & f, |e| pos[e]))).collect();
        Ok(Trs { fan: self.fan.clone(), matroid: m, flags })
    }

    /// `E/F` with chains `(F ∨ E_j) ∖ F` under the interval isomorphism.
    pub fn contract(&self, f: Mask) -> Result<Trs, TrsError> {
        self.require_flat(f)?;
        let cl = self.matroid.classical();
        let rest = self.all() & !f;
        let pos = subset::positions(rest);
        let m = Arc::new(self.matroid.contract_mask(f));
        let flags =
            self.flags.iter().map(|c| c.map(self.all(), |g| subset::map_mask(cl.closure(g | f) & rest, |e| pos[e]))).collect();
        Ok(Trs { fan: self.fan.clone(), matroid: m, flags })
    }

    /// `(E|big)/small` for flats `small ≤ big`.
    pub fn subquotient(&self, small: Mask, big: Mask) -> Result<Trs, TrsError> {
        let r = self.restrict(big)?;
        let pos = subset::positions(big);
        r.contract(subset::map_mask(small, |e| pos[e]))
    }

    /// Flats of the underlying matroid in canonical order.
    pub fn flats(&self) -> Vec<Mask> {
        self.matroid.flats().flats().into_iter().map(|f| f.mask).collect()
    }
}
