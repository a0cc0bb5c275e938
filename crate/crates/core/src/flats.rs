//! Lattice of flats of the underlying matroid.
//!
//! A flat is stored as a mask over the non-basepoint elements; the basepoint
//! is a loop and belongs to every flat implicitly.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::matroid::{Classical, FMatroid};
use crate::subset::{self, Mask};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlatError {
    #[error("flats belong to different matroids")]
    OwnerMismatch,
    #[error("{0:b} is not a flat")]
    NotAFlat(Mask),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flat {
    owner: u64,
    pub mask: Mask,
}

fn fingerprint(m: &FMatroid) -> u64 {
    use std::hash::{Hash, Hasher};
    let mut h = std::collections::hash_map::DefaultHasher::new();
    m.hash(&mut h);
    h.finish()
}

/// Smallest flat containing `a`.
pub fn closure(m: &FMatroid, a: Mask) -> Flat {
    Flat { owner: fingerprint(m), mask: m.classical().closure(a) }
}

#[derive(Clone, Debug)]
pub struct FlatLattice {
    owner: u64,
    matroid_rank: usize,
    cl: Classical,
    /// Sorted by rank, then lexicographically.
    flats: Vec<(Mask, usize)>,
    index: HashMap<Mask, usize>,
    /// Pairs (i, j) with flats[j] covering flats[i].
    covers: Vec<(usize, usize)>,
}

impl FlatLattice {
    pub fn new(m: &FMatroid) -> Self {
        let cl = m.classical();
        // closures of independent sets suffice, grown one element at a time
        let mut seen: BTreeSet<Mask> = BTreeSet::new();
        let mut frontier = vec![cl.closure(0)];
        seen.insert(frontier[0]);
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for f in frontier {
                for e in 0..cl.len() {
                    if !subset::contains(f, e) {
                        let g = cl.closure(f | 1 << e);
                        if seen.insert(g) {
                            next.push(g);
                        }
                    }
                }
            }
            frontier = next;
        }
        let mut flats: Vec<(Mask, usize)> = seen.into_iter().map(|f| (f, cl.rank_of(f))).collect();
        flats.sort_by(|a, b| a.1.cmp(&b.1).then(subset::lex_cmp(a.0, b.0)));
        let index = flats.iter().enumerate().map(|(i, f)| (f.0, i)).collect();
        let mut covers = Vec::new();
        for (i, &(f, rf)) in flats.iter().enumerate() {
            for (j, &(g, rg)) in flats.iter().enumerate() {
                if rg == rf + 1 && f & g == f {
                    covers.push((i, j));
                }
            }
        }
        FlatLattice { owner: fingerprint(m), matroid_rank: m.rank(), cl, flats, index, covers }
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn flats(&self) -> Vec<Flat> {
        self.flats.iter().map(|&(mask, _)| self.flat(mask)).collect()
    }

    fn flat(&self, mask: Mask) -> Flat {
        Flat { owner: self.owner, mask }
    }

    pub fn rank_of(&self, f: Flat) -> usize {
        self.cl.rank_of(f.mask)
    }

    pub fn bottom(&self) -> Flat {
        self.flat(self.flats[0].0)
    }

    pub fn top(&self) -> Flat {
        self.flat(self.cl.all())
    }

    pub fn covers(&self) -> Vec<(Flat, Flat)> {
        self.covers.iter().map(|&(i, j)| (self.flat(self.flats[i].0), self.flat(self.flats[j].0))).collect()
    }

    pub fn contains(&self, f: Flat) -> bool {
        f.owner == self.owner && self.index.contains_key(&f.mask)
    }

    /// Wraps a mask as a flat of this lattice.
    pub fn get(&self, mask: Mask) -> Result<Flat, FlatError> {
        if self.index.contains_key(&mask) {
            Ok(self.flat(mask))
        } else {
            Err(FlatError::NotAFlat(mask))
        }
    }

    pub fn closure(&self, a: Mask) -> Flat {
        self.flat(self.cl.closure(a))
    }

    fn check(&self, fs: &[Flat]) -> Result<(), FlatError> {
        if fs.iter().all(|f| f.owner == self.owner) {
            Ok(())
        } else {
            Err(FlatError::OwnerMismatch)
        }
    }

    pub fn meet(&self, f: Flat, g: Flat) -> Result<Flat, FlatError> {
        self.check(&[f, g])?;
        Ok(self.flat(f.mask & g.mask))
    }

    pub fn join(&self, f: Flat, g: Flat) -> Result<Flat, FlatError> {
        self.check(&[f, g])?;
        Ok(self.closure(f.mask | g.mask))
    }

    pub fn is_modular_pair(&self, f: Flat, g: Flat) -> Result<bool, FlatError> {
        let j = self.join(f, g)?;
        let m = self.meet(f, g)?;
        Ok(self.rank_of(f) + self.rank_of(g) == self.rank_of(j) + self.rank_of(m))
    }

    pub fn is_modular_flat(&self, f: Flat) -> Result<bool, FlatError> {
        self.check(&[f])?;
        for &(g, _) in &self.flats {
            if !self.is_modular_pair(f, self.flat(g))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_modular(&self) -> bool {
        self.flats.iter().all(|&(f, _)| self.is_modular_flat(self.flat(f)).unwrap_or(false))
    }

    /// `(F ∧ H) ∨ G = (F ∨ G) ∧ H` for all flats `G ≤ H`.
    pub fn satisfies_modular_law(&self, f: Flat) -> bool {
        let fs = &self.flats;
        fs.iter().all(|&(g, _)| {
            fs.iter().filter(|&&(h, _)| g & h == g).all(|&(h, _)| {
                self.cl.closure((f.mask & h) | g) == self.cl.closure(f.mask | g) & h
            })
        })
    }

    /// `(F ∧ G) ∨ H = F ∧ (G ∨ H)` for all flats `G` and all `H ≤ F`.
    pub fn satisfies_lower_modular_law(&self, f: Flat) -> bool {
        let fs = &self.flats;
        fs.iter().filter(|&&(h, _)| h & f.mask == h).all(|&(h, _)| {
            fs.iter().all(|&(g, _)| self.cl.closure((f.mask & g) | h) == f.mask & self.cl.closure(g | h))
        })
    }

    /// Flats inside `f`, the interval `[bottom, f]`.
    pub fn below(&self, f: Flat) -> Vec<Flat> {
        self.flats.iter().filter(|&&(g, _)| g & f.mask == g).map(|&(g, _)| self.flat(g)).collect()
    }

    /// Flats containing `f`, the interval `[f, top]`.
    pub fn above(&self, f: Flat) -> Vec<Flat> {
        self.flats.iter().filter(|&&(g, _)| g & f.mask == f.mask).map(|&(g, _)| self.flat(g)).collect()
    }

    /// rk(f) + rk(g) >= rk(f ∨ g) + rk(f ∧ g)
    pub fn is_semimodular(&self) -> bool {
        self.flats.iter().all(|&(f, rf)| {
            self.flats.iter().all(|&(g, rg)| {
                rf + rg >= self.cl.rank_of(self.cl.closure(f | g)) + self.cl.rank_of(f & g)
            })
        })
    }

    pub fn matroid_rank(&self) -> usize {
        self.matroid_rank
    }
}

impl FMatroid {
    pub fn flats(&self) -> FlatLattice {
        FlatLattice::new(self)
    }

    pub fn is_modular(&self) -> bool {
        self.flats().is_modular()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::idyll::Idyll;
    use crate::matroid::{graphic, uniform};

    /// Flats by brute force: every subset equal to its rank closure.
    fn brute_flats(m: &FMatroid) -> Vec<Mask> {
        let cl = m.classical();
        let mut out: Vec<Mask> = subset::submasks(cl.all())
            .into_iter()
            .filter(|&a| (0..cl.len()).all(|e| subset::contains(a, e) || cl.rank_of(a | 1 << e) > cl.rank_of(a)))
            .collect();
        out.sort();
        out
    }

    fn masks(l: &FlatLattice) -> Vec<Mask> {
        let mut v: Vec<Mask> = l.flats().iter().map(|f| f.mask).collect();
        v.sort();
        v
    }

    #[test]
    fn counts() {
        let u23 = uniform(Idyll::Krasner, 2, 3).unwrap();
        let l = u23.flats();
        assert_eq!(l.len(), 5);
        assert_eq!(masks(&l), brute_flats(&u23));
        assert_eq!(l.closure(0b001).mask, 0b001);
        assert_eq!(uniform(Idyll::Krasner, 3, 3).unwrap().flats().len(), 8);
        assert_eq!(FMatroid::zero(Idyll::Krasner).flats().len(), 1);
        let c4 = graphic(Idyll::Krasner, 4, &[(0, 1), (1, 2), (2, 3), (3, 0)], &["a", "b", "c", "d"]).unwrap();
        assert_eq!(masks(&c4.flats()), brute_flats(&c4));
    }

    #[test]
    fn meet_join_and_modularity() {
        let u23 = uniform(Idyll::Krasner, 2, 3).unwrap();
        let l = u23.flats();
        let a = l.get(0b001).unwrap();
        let b = l.get(0b010).unwrap();
        assert_eq!(l.join(a, b).unwrap(), l.top());
        assert_eq!(l.meet(a, l.top()).unwrap(), a);
        assert!(u23.is_modular());
        let u24 = uniform(Idyll::Krasner, 2, 4).unwrap();
        let l4 = u24.flats();
        assert!(l4.is_modular_pair(l4.get(0b0001).unwrap(), l4.get(0b0010).unwrap()).unwrap());
        assert!(u24.is_modular());
        let u34 = uniform(Idyll::Krasner, 3, 4).unwrap();
        assert!(!u34.is_modular());
        assert!(l.meet(a, l4.get(0b0001).unwrap()).is_err());
    }

    #[test]
    fn c4_atoms_are_modular() {
        let c4 = graphic(Idyll::Krasner, 4, &[(0, 1), (1, 2), (2, 3), (3, 0)], &["a", "b", "c", "d"]).unwrap();
        let l = c4.flats();
        for f in l.flats() {
            if l.rank_of(f) == 1 {
                assert!(l.is_modular_flat(f).unwrap());
            }
        }
        assert!(l.is_semimodular());
    }

    fn corpus() -> Vec<FMatroid> {
        let mut out = vec![];
        for n in 0..=5 {
            for r in 0..=n {
                out.push(uniform(Idyll::Krasner, r, n).unwrap());
            }
        }
        out.push(graphic(Idyll::Krasner, 4, &[(0, 1), (1, 2), (2, 3), (3, 0)], &["a", "b", "c", "d"]).unwrap());
        out.push(graphic(Idyll::Krasner, 4, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 0)], &["a", "b", "c", "d", "e"]).unwrap());
        out.push(graphic(Idyll::Krasner, 3, &[(0, 1), (0, 1), (1, 2), (1, 1)], &["a", "b", "c", "d"]).unwrap());
        out
    }

    #[test]
    fn modularity_characterizations_agree() {
        for m in corpus() {
            let l = m.flats();
            assert!(l.is_semimodular());
            for f in l.flats() {
                let modular = l.is_modular_flat(f).unwrap();
                assert_eq!(modular, l.satisfies_modular_law(f), "{m}");
                assert_eq!(modular, l.satisfies_lower_modular_law(f), "{m}");
            }
        }
    }

    #[test]
    fn intervals_match_minor_lattices() {
        for m in corpus() {
            let l = m.flats();
            for f in l.flats() {
                let pos = subset::positions(f.mask);
                let restricted: Vec<Mask> = l.below(f).iter().map(|g| crate::subset::map_mask(g.mask, |e| pos[e])).collect();
                assert_eq!(masks_sorted(restricted), masks(&m.restrict_mask(f.mask).flats()));
                let rest = m.ground().all() & !f.mask;
                let pos = subset::positions(rest);
                let contracted: Vec<Mask> =
                    l.above(f).iter().map(|g| crate::subset::map_mask(g.mask & rest, |e| pos[e])).collect();
                assert_eq!(masks_sorted(contracted), masks(&m.contract_mask(f.mask).flats()));
                if m.is_modular() {
                    assert!(m.restrict_mask(f.mask).is_modular());
                    assert!(m.contract_mask(f.mask).is_modular());
                }
            }
        }
    }

    fn masks_sorted(mut v: Vec<Mask>) -> Vec<Mask> {
        v.sort();
        v
    }

    #[test]
    fn loops_sit_in_the_bottom() {
        let m = FMatroid::free_rank_zero(Idyll::Krasner, crate::matroid::GroundSet::standard(2));
        let l = m.flats();
        assert_eq!(l.len(), 1);
        assert_eq!(l.bottom().mask, 0b11);
    }
}
