use std::collections::BTreeSet;

use crate::idyll::{Elem, Idyll};
use crate::subset;

use super::FMatroid;

/// An assignment of idyll values to the non-basepoint elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundVector {
    pub entries: Vec<Elem>,
}

impl GroundVector {
    pub fn zero(n: usize) -> Self {
        GroundVector { entries: vec![Elem::Zero; n] }
    }

    pub fn support(&self) -> subset::Mask {
        self.entries.iter().enumerate().filter(|(_, e)| !e.is_zero()).fold(0, |m, (i, _)| m | 1 << i)
    }

    /// Scales so that the first nonzero entry is one.
    pub fn normalized(&self, idyll: &Idyll) -> GroundVector {
        match self.entries.iter().find(|e| !e.is_zero()) {
            None => self.clone(),
            Some(first) => {
                let s = idyll.inv(first);
                GroundVector { entries: self.entries.iter().map(|e| idyll.mul_raw(e, &s)).collect() }
            }
        }
    }
}

/// Whether the termwise product of two vectors sums to a null element.
pub fn orthogonal(idyll: &Idyll, x: &GroundVector, y: &GroundVector) -> bool {
    assert_eq!(x.entries.len(), y.entries.len(), "vectors over different ground sets");
    let terms: Vec<Elem> = x.entries.iter().zip(&y.entries).map(|(a, b)| idyll.mul_raw(a, b)).collect();
    idyll.is_null_raw(&terms).unwrap_or(false)
}

impl FMatroid {
    /// Fundamental circuits, one normalized representative per class, in
    /// sorted order.
    pub fn circuits(&self) -> Vec<GroundVector> {
        let n = self.len();
        let mut out = BTreeSet::new();
        for y in subset::k_subsets(self.ground.all(), self.rank + 1) {
            let mut x = GroundVector::zero(n);
            for (k, e) in subset::members(y).into_iter().enumerate() {
                let v = self.value(y & !(1 << e));
                x.entries[e] = self.idyll.signed(&v, k % 2 == 1);
            }
            if x.support() != 0 {
                out.insert(x.normalized(&self.idyll));
            }
        }
        out.into_iter().collect()
    }

    pub fn cocircuits(&self) -> Vec<GroundVector> {
        self.dual().circuits()
    }

    fn check_len(&self, x: &GroundVector) {
        assert_eq!(x.entries.len(), self.len(), "vector over a different ground set");
        assert!(x.entries.iter().all(|e| self.idyll.contains(e)), "vector entry outside the idyll");
    }

    /// Orthogonal to every cocircuit.
    pub fn is_vector(&self, x: &GroundVector) -> bool {
        self.check_len(x);
        self.cocircuits().iter().all(|c| orthogonal(&self.idyll, x, c))
    }

    /// Orthogonal to every circuit.
    pub fn is_covector(&self, x: &GroundVector) -> bool {
        self.check_len(x);
        self.circuits().iter().all(|c| orthogonal(&self.idyll, x, c))
    }
}
