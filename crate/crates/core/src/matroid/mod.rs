//! Pointed matroids over idylls, stored as normalized Grassmann-Plücker
//! functions on sorted subsets.

mod build;
mod classical;
mod minors;
mod vectors;
mod verify;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::idyll::{Elem, Idyll, IdyllError, IdyllHom};
use crate::subset::{self, Mask, Subset};

pub use build::{determinant, from_integer_matrix, graphic, uniform};
pub use classical::Classical;
pub use vectors::{orthogonal, GroundVector};
pub use verify::{verify_gp, verify_gp_with, GpViolation};

/// Default soft limits on ground-set size and rank for GP verification.
pub const SOFT_MAX_ELEMENTS: usize = 12;
pub const SOFT_MAX_RANK: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatroidError {
    #[error("label {0:?} is not in the ground set")]
    UnknownLabel(String),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("expected a tuple of length {expected}, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("subset {subset:?} has size {got}, rank is {rank}")]
    WrongSubsetSize { subset: Vec<String>, got: usize, rank: usize },
    #[error("ground set of {n} elements with rank {rank} exceeds the limit ({max_n} elements, rank {max_r})")]
    TooLarge { n: usize, rank: usize, max_n: usize, max_r: usize },
    #[error("rank {rank} exceeds ground-set size {n}")]
    RankTooLarge { rank: usize, n: usize },
    #[error("matroids live over different idylls ({0} vs {1})")]
    IdyllMismatch(String, String),
    #[error("Grassmann-Plücker violation: {0}")]
    NotGp(GpViolation),
    #[error("{0} is not a basis of the required minor")]
    BadAuxiliaryBasis(String),
    #[error(transparent)]
    Idyll(#[from] IdyllError),
}

/// Ordered labels with the basepoint first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundSet {
    labels: Vec<String>,
}

impl GroundSet {
    pub fn new(basepoint: &str, elements: &[&str]) -> Result<Self, MatroidError> {
        let mut labels = vec![basepoint.to_string()];
        labels.extend(elements.iter().map(|s| s.to_string()));
        Self::from_labels(labels)
    }

    /// `labels[0]` is the basepoint.
    pub fn from_labels(labels: Vec<String>) -> Result<Self, MatroidError> {
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(MatroidError::DuplicateLabel(l.clone()));
            }
        }
        if labels.is_empty() {
            return Err(MatroidError::UnknownLabel("<basepoint>".into()));
        }
        if labels.len() - 1 > subset::MAX_ELEMENTS {
            return Err(MatroidError::TooLarge {
                n: labels.len() - 1,
                rank: 0,
                max_n: subset::MAX_ELEMENTS,
                max_r: subset::MAX_ELEMENTS,
            });
        }
        Ok(GroundSet { labels })
    }

    /// Basepoint `*` and elements `e1..en`.
    pub fn standard(n: usize) -> Self {
        let labels = std::iter::once("*".to_string()).chain((1..=n).map(|i| format!("e{i}"))).collect();
        GroundSet { labels }
    }

    pub fn basepoint(&self) -> &str {
        &self.labels[0]
    }

    /// Number of non-basepoint elements.
    pub fn len(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Label of non-basepoint element `i`.
    pub fn label(&self, i: usize) -> &str {
        &self.labels[i + 1]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Non-basepoint labels.
    pub fn elements(&self) -> &[String] {
        &self.labels[1..]
    }

    /// `Some(None)` for the basepoint, `Some(Some(i))` for element `i`.
    pub fn lookup(&self, label: &str) -> Option<Option<usize>> {
        let pos = self.labels.iter().position(|l| l == label)?;
        Some(pos.checked_sub(1))
    }

    pub fn index(&self, label: &str) -> Result<Option<usize>, MatroidError> {
        self.lookup(label).ok_or_else(|| MatroidError::UnknownLabel(label.to_string()))
    }

    /// Mask of the given labels; the basepoint is ignored.
    pub fn mask_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Mask, MatroidError> {
        let mut m = 0;
        for l in labels {
            if let Some(i) = self.index(l.as_ref())? {
                m |= 1 << i;
            }
        }
        Ok(m)
    }

    pub fn names(&self, m: Mask) -> Vec<String> {
        subset::members(m).into_iter().map(|i| self.label(i).to_string()).collect()
    }

    /// The ground set keeping only the elements of `m`, in order.
    pub fn restrict(&self, m: Mask) -> GroundSet {
        let mut labels = vec![self.labels[0].clone()];
        labels.extend(subset::members(m).into_iter().map(|i| self.label(i).to_string()));
        GroundSet { labels }
    }

    pub fn all(&self) -> Mask {
        subset::full(self.len())
    }
}

/// A matroid in the making: the shape of a GP function before verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub idyll: Idyll,
    pub ground: GroundSet,
    pub rank: usize,
    pub values: BTreeMap<Subset, Elem>,
}

impl Candidate {
    pub fn new(idyll: Idyll, ground: GroundSet, rank: usize) -> Self {
        Candidate { idyll, ground, rank, values: BTreeMap::new() }
    }

    pub fn set<S: AsRef<str>>(&mut self, labels: &[S], value: Elem) -> Result<(), MatroidError> {
        let m = self.ground.mask_of(labels)?;
        if subset::size(m) != labels.len() {
            return Err(MatroidError::WrongSubsetSize {
                subset: labels.iter().map(|s| s.as_ref().to_string()).collect(),
                got: subset::size(m),
                rank: self.rank,
            });
        }
        if labels.len() != self.rank {
            return Err(MatroidError::WrongSubsetSize {
                subset: labels.iter().map(|s| s.as_ref().to_string()).collect(),
                got: labels.len(),
                rank: self.rank,
            });
        }
        // the value on an unsorted tuple is transported to the sorted subset
        let idx: Vec<usize> = labels.iter().map(|l| self.ground.index(l.as_ref()).unwrap().unwrap()).collect();
        let v = self.idyll.signed(&value, subset::sort_parity(&idx));
        self.values.insert(Subset(m), v);
        Ok(())
    }

    pub fn value(&self, m: Mask) -> Elem {
        self.values.get(&Subset(m)).cloned().unwrap_or(Elem::Zero)
    }

    /// Value on an ordered tuple of element indices.
    pub fn tuple_value(&self, t: &[usize]) -> Elem {
        tuple_value(&self.idyll, t, |m| self.value(m))
    }
}

fn tuple_value(idyll: &Idyll, t: &[usize], lookup: impl Fn(Mask) -> Elem) -> Elem {
    let m = subset::from_members(t);
    if subset::size(m) != t.len() {
        return Elem::Zero;
    }
    let v = lookup(m);
    if v.is_zero() {
        return v;
    }
    idyll.signed(&v, subset::sort_parity(t))
}

/// A pointed matroid over an idyll.
///
/// Values live on sorted subsets of non-basepoint elements and are
/// normalized so that the lexicographically least one is `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FMatroid {
    idyll: Idyll,
    ground: GroundSet,
    rank: usize,
    values: BTreeMap<Subset, Elem>,
}

impl FMatroid {
    /// Verifies the GP axioms and normalizes.
    pub fn new(c: Candidate) -> Result<Self, MatroidError> {
        Self::new_with_limits(c, SOFT_MAX_ELEMENTS, SOFT_MAX_RANK)
    }

    pub fn new_with_limits(c: Candidate, max_n: usize, max_r: usize) -> Result<Self, MatroidError> {
        let n = c.ground.len();
        if n > max_n || c.rank > max_r {
            return Err(MatroidError::TooLarge { n, rank: c.rank, max_n, max_r });
        }
        verify_gp(&c).map_err(MatroidError::NotGp)?;
        Ok(Self::from_trusted(c.idyll, c.ground, c.rank, c.values))
    }

    /// Builds from values already known to satisfy GP; drops zeros and
    /// normalizes.
    pub(crate) fn from_trusted(
        idyll: Idyll,
        ground: GroundSet,
        rank: usize,
        values: BTreeMap<Subset, Elem>,
    ) -> Self {
        let mut values: BTreeMap<Subset, Elem> = values.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        if let Some(first) = values.values().next().cloned() {
            let scale = idyll.inv(&first);
            for v in values.values_mut() {
                *v = idyll.mul_raw(v, &scale);
            }
        }
        FMatroid { idyll, ground, rank, values }
    }

    /// The zero object: only the basepoint, rank 0.
    pub fn zero(idyll: Idyll) -> Self {
        Self::free_rank_zero(idyll, GroundSet::standard(0))
    }

    /// Rank 0 on the given ground set: every element is a loop.
    pub fn free_rank_zero(idyll: Idyll, ground: GroundSet) -> Self {
        let mut values = BTreeMap::new();
        values.insert(Subset(0), idyll.one());
        FMatroid { idyll, ground, rank: 0, values }
    }

    pub fn idyll(&self) -> &Idyll {
        &self.idyll
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of non-basepoint elements.
    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    /// Stored values in lexicographic order of their subsets.
    pub fn values(&self) -> impl Iterator<Item = (Mask, &Elem)> {
        self.values.iter().map(|(s, v)| (s.0, v))
    }

    pub fn value(&self, m: Mask) -> Elem {
        self.values.get(&Subset(m)).cloned().unwrap_or(Elem::Zero)
    }

    /// Value on an ordered tuple of element indices.
    pub fn tuple_value(&self, t: &[usize]) -> Elem {
        tuple_value(&self.idyll, t, |m| self.value(m))
    }

    /// Value on a tuple of labels; zero if the basepoint occurs.
    pub fn gp_value<S: AsRef<str>>(&self, t: &[S]) -> Result<Elem, MatroidError> {
        if t.len() != self.rank {
            return Err(MatroidError::WrongArity { expected: self.rank, got: t.len() });
        }
        let mut idx = Vec::with_capacity(t.len());
        let mut pointed = false;
        for l in t {
            match self.ground.index(l.as_ref())? {
                Some(i) => idx.push(i),
                None => pointed = true,
            }
        }
        if pointed {
            return Ok(Elem::Zero);
        }
        Ok(self.tuple_value(&idx))
    }

    pub fn to_candidate(&self) -> Candidate {
        Candidate {
            idyll: self.idyll.clone(),
            ground: self.ground.clone(),
            rank: self.rank,
            values: self.values.clone(),
        }
    }

    /// Bases of the underlying matroid, lexicographically sorted.
    pub fn bases(&self) -> Vec<Mask> {
        self.values.keys().map(|s| s.0).collect()
    }

    pub fn classical(&self) -> Classical {
        Classical::new(self.len(), self.rank, self.bases())
    }

    /// Pushforward to the Krasner hyperfield.
    pub fn underlying(&self) -> FMatroid {
        let values = self.values.keys().map(|s| (*s, Elem::One)).collect();
        FMatroid { idyll: Idyll::Krasner, ground: self.ground.clone(), rank: self.rank, values }
    }

    /// Applies an idyll homomorphism to every value and re-verifies.
    pub fn pushforward(&self, h: &IdyllHom) -> Result<FMatroid, MatroidError> {
        if h.source() != &self.idyll {
            return Err(MatroidError::IdyllMismatch(h.source().name(), self.idyll.name()));
        }
        let mut c = Candidate::new(h.target().clone(), self.ground.clone(), self.rank);
        for (s, v) in &self.values {
            c.values.insert(*s, h.apply(v)?);
        }
        verify_gp(&c).map_err(MatroidError::NotGp)?;
        Ok(Self::from_trusted(c.idyll, c.ground, c.rank, c.values))
    }

    /// Same matroid with the elements listed in a new order. `order[k]` is
    /// the old index of the new element `k`.
    pub fn reorder(&self, order: &[usize]) -> FMatroid {
        let mut new_index = vec![0; order.len()];
        for (k, &old) in order.iter().enumerate() {
            new_index[old] = k;
        }
        let labels = std::iter::once(self.ground.basepoint().to_string())
            .chain(order.iter().map(|&i| self.ground.label(i).to_string()))
            .collect();
        let values = self
            .values
            .iter()
            .map(|(s, v)| {
                let image: Vec<usize> = subset::members(s.0).into_iter().map(|i| new_index[i]).collect();
                (Subset(subset::from_members(&image)), self.idyll.signed(v, subset::sort_parity(&image)))
            })
            .collect();
        Self::from_trusted(self.idyll.clone(), GroundSet { labels }, self.rank, values)
    }

    /// Same matroid with non-basepoint labels renamed.
    pub fn relabel(&self, labels: Vec<String>) -> Result<FMatroid, MatroidError> {
        let mut all = vec![self.ground.basepoint().to_string()];
        all.extend(labels);
        let ground = GroundSet::from_labels(all)?;
        if ground.len() != self.len() {
            return Err(MatroidError::WrongArity { expected: self.len(), got: ground.len() });
        }
        Ok(FMatroid { ground, ..self.clone() })
    }

    /// Equality of projective classes, comparing elements by label. The
    /// basepoint label is not compared.
    pub fn projective_equal(&self, other: &FMatroid) -> bool {
        if self.idyll != other.idyll || self.rank != other.rank || self.len() != other.len() {
            return false;
        }
        if self.ground.elements() == other.ground.elements() {
            return self.values == other.values;
        }
        let mut order = Vec::with_capacity(self.len());
        for l in self.ground.elements() {
            match other.ground.lookup(l) {
                Some(Some(i)) => order.push(i),
                _ => return false,
            }
        }
        other.reorder(&order).values == self.values
    }
}

impl fmt::Display for FMatroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::io::serialize_matroid(self))
    }
}
