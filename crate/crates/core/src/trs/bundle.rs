//! Vector-bundle check: on each smooth maximal cone, a basis adapted to
//! every chain of the cone's rays.

use num_traits::{One, Zero};
use thiserror::Error;

use super::Trs;
use crate::idyll::Q;
use crate::matroid::determinant;
use crate::subset::{self, Mask};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NotBundle {
    #[error("fan has no maximal cones")]
    NoCones,
    #[error("cone {0} is not smooth")]
    NotSmooth(usize),
    #[error("no basis is adapted to cone {cone}: flag of ray {ray} at j={j} is not spanned")]
    NoAdaptedBasis { cone: usize, ray: usize, j: i64 },
}

/// Per cone: the adapted basis and the character `u_w` of each basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleWitness {
    pub cone: usize,
    pub basis: Mask,
    pub characters: Vec<(usize, Vec<i64>)>,
}

/// Solves `V u = t` for a unimodular square `V`.
fn solve_unimodular(v: &[Vec<i64>], t: &[i64]) -> Vec<i64> {
    let n = v.len();
    let mut a: Vec<Vec<Q>> = v
        .iter()
        .zip(t)
        .map(|(row, &ti)| row.iter().map(|&x| Q::from_integer(x)).chain([Q::from_integer(ti)]).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero()).expect("nonsingular");
        a.swap(c, p);
        let inv = Q::one() / a[c][c];
        for x in a[c].iter_mut() {
            *x *= inv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c];
                let pivot = a[c].clone();
                for (x, p) in a[i].iter_mut().zip(&pivot) {
                    *x -= *p * f;
                }
            }
        }
    }
    a.iter().map(|row| row[n].to_integer()).collect()
}

impl Trs {
    /// Searches each maximal cone for a basis `B` such that every flag value
    /// on the cone's rays is spanned by its intersection with `B`.
    pub fn vector_bundle_witness(&self) -> Result<Vec<BundleWitness>, NotBundle> {
        let fan = &self.fan;
        if fan.cones.is_empty() {
            return Err(NotBundle::NoCones);
        }
        let cl = self.matroid.classical();
        let mut out = Vec::new();
        for (ci, cone) in fan.cones.iter().enumerate() {
            let v: Vec<Vec<i64>> = cone.iter().map(|&r| fan.rays[r].v.clone()).collect();
            if v.len() != fan.dim || determinant(&v).abs() != 1 {
                return Err(NotBundle::NotSmooth(ci));
            }
            // (ray, first index, flat) for every nonzero flag value on the cone
            let values: Vec<(usize, i64, Mask)> = cone
                .iter()
                .flat_map(|&r| self.flags[r].steps.iter().map(move |s| (r, s.0, s.1)))
                .filter(|v| v.2 != 0)
                .collect();
            let spanned = |b: Mask, f: Mask| cl.closure(b & f) == f;
            let Some(basis) = cl.bases().iter().copied().find(|&b| values.iter().all(|v| spanned(b, v.2))) else {
                // report the first failure of the basis that fails least
                let best = cl
                    .bases()
                    .iter()
                    .copied()
                    .min_by_key(|&b| values.iter().filter(|v| !spanned(b, v.2)).count())
                    .unwrap_or(0);
                let &(ray, j, _) = values.iter().find(|v| !spanned(best, v.2)).expect("some value fails");
                return Err(NotBundle::NoAdaptedBasis { cone: ci, ray, j });
            };
            let characters = subset::members(basis)
                .into_iter()
                .map(|w| {
                    let t: Vec<i64> = cone.iter().map(|&r| self.flags[r].last_index_containing(w).unwrap_or(0)).collect();
                    (w, solve_unimodular(&v, &t))
                })
                .collect();
            out.push(BundleWitness { cone: ci, basis, characters });
        }
        Ok(out)
    }

    pub fn is_vector_bundle(&self) -> bool {
        self.vector_bundle_witness().is_ok()
    }
}
