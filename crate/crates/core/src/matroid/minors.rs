use std::collections::BTreeMap;

use crate::idyll::Elem;
use crate::subset::{self, Mask, Subset};

use super::{FMatroid, GroundSet, MatroidError};

impl FMatroid {
    /// The dual, on the same ground set.
    pub fn dual(&self) -> FMatroid {
        let all = self.ground.all();
        let n = self.len();
        let mut values = BTreeMap::new();
        for x in subset::k_subsets(all, n - self.rank) {
            let rest = all & !x;
            let v = self.value(rest);
            if !v.is_zero() {
                values.insert(Subset(x), self.idyll.signed(&v, subset::merge_parity(x, rest)));
            }
        }
        FMatroid::from_trusted(self.idyll.clone(), self.ground.clone(), n - self.rank, values)
    }

    /// Values `x ↦ μ(x, aux)` for `x` ranging over subsets of `keep`,
    /// re-indexed onto `keep`.
    fn append_aux(&self, keep: Mask, aux: &[usize], new_rank: usize) -> FMatroid {
        let kept = subset::members(keep);
        let mut values = BTreeMap::new();
        for x in subset::k_subsets(keep, new_rank) {
            let mut t = subset::members(x);
            t.extend_from_slice(aux);
            let v = self.tuple_value(&t);
            if !v.is_zero() {
                let image = subset::map_mask(x, |i| kept.binary_search(&i).unwrap());
                values.insert(Subset(image), v);
            }
        }
        FMatroid::from_trusted(self.idyll.clone(), self.ground.restrict(keep), new_rank, values)
    }

    /// Contraction by the elements of `a` (the basepoint is ignored).
    pub fn contract_mask(&self, a: Mask) -> FMatroid {
        let aux = subset::members(self.classical().least_basis_of(a));
        self.append_aux(self.ground.all() & !a, &aux, self.rank - aux.len())
    }

    /// Contraction using a caller-chosen basis tuple of the restriction to
    /// `a`.
    pub fn contract_with(&self, a: Mask, aux: &[usize]) -> Result<FMatroid, MatroidError> {
        let cl = self.classical();
        let m = subset::from_members(aux);
        if subset::size(m) != aux.len() || m & !a != 0 || !cl.is_independent(m) || aux.len() != cl.rank_of(a) {
            return Err(MatroidError::BadAuxiliaryBasis(format!("{:?}", self.ground.names(m))));
        }
        Ok(self.append_aux(self.ground.all() & !a, aux, self.rank - aux.len()))
    }

    /// Deletion of the elements of `a`.
    pub fn delete_mask(&self, a: Mask) -> FMatroid {
        let aux = subset::members(self.classical().least_cobasis_in(a));
        self.append_aux(self.ground.all() & !a, &aux, self.rank - aux.len())
    }

    /// Deletion using a caller-chosen basis tuple, inside `a`, of the
    /// contraction by the complement of `a`.
    pub fn delete_with(&self, a: Mask, aux: &[usize]) -> Result<FMatroid, MatroidError> {
        let cl = self.classical();
        let m = subset::from_members(aux);
        let outside = self.ground.all() & !a;
        let ok = subset::size(m) == aux.len()
            && m & !a == 0
            && aux.len() + cl.rank_of(outside) == self.rank
            && cl.is_independent(m | cl.least_basis_of(outside));
        if !ok {
            return Err(MatroidError::BadAuxiliaryBasis(format!("{:?}", self.ground.names(m))));
        }
        Ok(self.append_aux(outside, aux, self.rank - aux.len()))
    }

    /// Restriction to the elements of `a`.
    pub fn restrict_mask(&self, a: Mask) -> FMatroid {
        self.delete_mask(self.ground.all() & !a)
    }

    pub fn contract<S: AsRef<str>>(&self, labels: &[S]) -> Result<FMatroid, MatroidError> {
        Ok(self.contract_mask(self.ground.mask_of(labels)?))
    }

    pub fn delete<S: AsRef<str>>(&self, labels: &[S]) -> Result<FMatroid, MatroidError> {
        Ok(self.delete_mask(self.ground.mask_of(labels)?))
    }

    pub fn restrict<S: AsRef<str>>(&self, labels: &[S]) -> Result<FMatroid, MatroidError> {
        Ok(self.restrict_mask(self.ground.mask_of(labels)?))
    }

    /// Direct sum; the basepoints are identified. Labels of `other` that
    /// clash with labels of `self` get primes appended.
    pub fn direct_sum(&self, other: &FMatroid) -> Result<FMatroid, MatroidError> {
        if self.idyll != other.idyll {
            return Err(MatroidError::IdyllMismatch(self.idyll.name(), other.idyll.name()));
        }
        let mut labels: Vec<String> = self.ground.labels().to_vec();
        for l in other.ground.elements() {
            let mut name = l.clone();
            while labels.contains(&name) {
                name.push('\'');
            }
            labels.push(name);
        }
        let ground = GroundSet::from_labels(labels)?;
        let shift = self.len();
        let mut values = BTreeMap::new();
        for (a, va) in self.values() {
            for (b, vb) in other.values() {
                values.insert(Subset(a | b << shift), self.idyll.mul_raw(va, vb));
            }
        }
        Ok(FMatroid::from_trusted(self.idyll.clone(), ground, self.rank + other.rank, values))
    }

    /// Deletes loops and all but the least member of each parallel class.
    pub fn simplify(&self) -> FMatroid {
        let cl = self.classical();
        let keep = cl.parallel_classes().iter().fold(0, |m, c| m | 1 << c.trailing_zeros());
        self.restrict_mask(keep)
    }

    /// Loops, as a mask.
    pub fn loops(&self) -> Mask {
        self.classical().loops()
    }

    /// Rescales element `i` by `c_i`: the value on a subset is multiplied by
    /// the product of the coefficients of its members.
    pub fn rescale_elements(&self, coeffs: &[Elem]) -> FMatroid {
        let values = self
            .values
            .iter()
            .map(|(s, v)| {
                let v = subset::members(s.0).into_iter().fold(v.clone(), |acc, i| self.idyll.mul_raw(&acc, &coeffs[i]));
                (*s, v)
            })
            .collect();
        FMatroid::from_trusted(self.idyll.clone(), self.ground.clone(), self.rank, values)
    }
}
