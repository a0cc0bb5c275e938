//! Isomorphism classes, matroid enumeration, Hall products over finite
//! idylls, Green's comultiplication and K₀ classes.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use num_traits::Zero;
use thiserror::Error;

use crate::idyll::{Elem, Idyll, Q};
use crate::matroid::{uniform, FMatroid, GroundSet};
use crate::morphism::SubmonomialMap;
use crate::par::{self, Exec};
use crate::subset::{self, Mask, Subset};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HallError {
    #[error("idyll {0} has infinitely many units")]
    Infinite(String),
    #[error("matroids live over different idylls")]
    IdyllMismatch,
    #[error("ground size {n} exceeds the bound {bound} for idyll {idyll}")]
    TooLarge { n: usize, bound: usize, idyll: String },
    #[error("{0} free basis candidates exceed the enumeration limit")]
    TooManyCandidates(usize),
}

/// Ground-size caps for enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HallBounds {
    pub krasner: usize,
    pub other: usize,
}

impl Default for HallBounds {
    fn default() -> Self {
        HallBounds { krasner: 6, other: 4 }
    }
}

impl HallBounds {
    /// Both caps set to `n`.
    pub fn uniform(n: usize) -> Self {
        HallBounds { krasner: n, other: n }
    }

    pub fn for_idyll(&self, idyll: &Idyll) -> usize {
        if matches!(idyll, Idyll::Krasner) {
            self.krasner
        } else {
            self.other
        }
    }

    fn check(&self, idyll: &Idyll, n: usize) -> Result<(), HallError> {
        let bound = self.for_idyll(idyll);
        if n > bound {
            return Err(HallError::TooLarge { n, bound, idyll: idyll.name() });
        }
        Ok(())
    }
}

const MAX_FREE_CANDIDATES: usize = 22;

fn units(idyll: &Idyll) -> Result<Vec<Elem>, HallError> {
    idyll.units().ok_or_else(|| HallError::Infinite(idyll.name()))
}

type Key = Vec<(Mask, Elem)>;

/// Values after relabeling by `perm` (old index `i` becomes `perm[i]`) and
/// rescaling element `i` by `coeffs[i]`, normalized and sorted.
fn transform(m: &FMatroid, perm: &[usize], coeffs: &[Elem]) -> Key {
    let idyll = m.idyll();
    let mut out: Vec<(Subset, Elem)> = m
        .values()
        .map(|(s, v)| {
            let members = subset::members(s);
            let image: Vec<usize> = members.iter().map(|&i| perm[i]).collect();
            let v = members.iter().fold(v.clone(), |acc, &i| idyll.mul_raw(&acc, &coeffs[i]));
            (Subset(subset::from_members(&image)), idyll.signed(&v, subset::sort_parity(&image)))
        })
        .collect();
    out.sort_by_key(|a| a.0);
    if let Some(first) = out.first().map(|x| x.1.clone()) {
        let scale = idyll.inv(&first);
        for x in &mut out {
            x.1 = idyll.mul_raw(&x.1, &scale);
        }
    }
    out.into_iter().map(|(s, v)| (s.0, v)).collect()
}

/// Per-element count of bases containing it, a relabeling invariant used to
/// prune permutations.
fn degrees(m: &FMatroid) -> Vec<usize> {
    let mut d = vec![0; m.len()];
    for (s, _) in m.values() {
        for i in subset::members(s) {
            d[i] += 1;
        }
    }
    d
}

/// All length-`n` vectors over `units`.
fn coefficient_vectors(units: &[Elem], n: usize) -> Vec<Vec<Elem>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                units.iter().map(move |u| {
                    let mut w = v.clone();
                    w.push(u.clone());
                    w
                })
            })
            .collect();
    }
    out
}

/// A canonical representative: standard labels and the least transformed
/// value list over all relabelings and element rescalings.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsoClass {
    idyll: IdyllKey,
    n: usize,
    rank: usize,
    key: Key,
}

/// Wrapper so `IsoClass` can derive ordering while carrying the idyll.
#[derive(Clone, PartialEq, Eq, Hash)]
struct IdyllKey(Idyll);

impl PartialOrd for IdyllKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IdyllKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.name().cmp(&other.0.name())
    }
}

impl IsoClass {
    pub fn of(m: &FMatroid) -> Result<Self, HallError> {
        let us = units(m.idyll())?;
        let n = m.len();
        let deg = degrees(m);
        let coeffs = coefficient_vectors(&us, n);
        let mut best: Option<Key> = None;
        for order in (0..n).permutations(n) {
            // new position k holds old element order[k]; keep degrees sorted descending
            if order.windows(2).any(|w| deg[w[0]] < deg[w[1]]) {
                continue;
            }
            let mut perm = vec![0; n];
            for (k, &old) in order.iter().enumerate() {
                perm[old] = k;
            }
            for c in &coeffs {
                let k = transform(m, &perm, c);
                if best.as_ref().is_none_or(|b| k < *b) {
                    best = Some(k);
                }
            }
        }
        Ok(IsoClass { idyll: IdyllKey(m.idyll().clone()), n, rank: m.rank(), key: best.unwrap_or_default() })
    }

    pub fn idyll(&self) -> &Idyll {
        &self.idyll.0
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The representative on labels `e1..en`.
    pub fn representative(&self) -> FMatroid {
        let mut c = crate::matroid::Candidate::new(self.idyll().clone(), GroundSet::standard(self.n), self.rank);
        for (s, v) in &self.key {
            c.values.insert(Subset(*s), v.clone());
        }
        FMatroid::new_with_limits(c, subset::MAX_ELEMENTS, subset::MAX_ELEMENTS).expect("representative of a matroid")
    }

    /// `U{r}{n}` for uniform classes, `0` for the zero object, otherwise the
    /// idyll, rank, size and the canonical bases with their values.
    pub fn name(&self) -> String {
        if self.n == 0 {
            return "0".into();
        }
        if let Ok(u) = uniform(self.idyll().clone(), self.rank, self.n) {
            if IsoClass::of(&u).is_ok_and(|c| c == *self) {
                return format!("U{}{}", self.rank, self.n);
            }
        }
        let krasner = matches!(self.idyll(), Idyll::Krasner);
        let bases: Vec<String> = self
            .key
            .iter()
            .map(|(s, v)| {
                let digits: String = subset::members(*s).iter().map(|i| (i + 1).to_string()).collect();
                let digits = if digits.is_empty() { "-".to_string() } else { digits };
                if krasner {
                    digits
                } else {
                    format!("{digits}={}", crate::io::format_literal(self.idyll(), v))
                }
            })
            .collect();
        format!("{} r{} n{} {}", self.idyll().name(), self.rank, self.n, bases.join(","))
    }
}

impl fmt::Debug for IsoClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.name())
    }
}

impl fmt::Display for IsoClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.name())
    }
}

/// Searches bijections that preserve underlying bases, then coefficient
/// vectors with the first coefficient `1`, for a map that is a morphism
/// with a morphism inverse.
pub fn is_isomorphic(m: &FMatroid, n: &FMatroid) -> Result<bool, HallError> {
    if m.idyll() != n.idyll() {
        return Err(HallError::IdyllMismatch);
    }
    let us = units(m.idyll())?;
    if m.len() != n.len() || m.rank() != n.rank() || m.values().count() != n.values().count() {
        return Ok(false);
    }
    let (dm, dn) = (degrees(m), degrees(n));
    let (mut sm, mut sn) = (dm.clone(), dn.clone());
    sm.sort_unstable();
    sn.sort_unstable();
    if sm != sn || m.flats().len() != n.flats().len() {
        return Ok(false);
    }
    let len = m.len();
    let nb: HashSet<Mask> = n.bases().into_iter().collect();
    let (ma, na) = (Arc::new(m.clone()), Arc::new(n.clone()));
    let one = m.idyll().one();
    let rest = coefficient_vectors(&us, len.saturating_sub(1));
    for perm in (0..len).permutations(len) {
        if (0..len).any(|i| dm[i] != dn[perm[i]]) {
            continue;
        }
        if !m.bases().iter().all(|&b| nb.contains(&subset::map_mask(b, |i| perm[i]))) {
            continue;
        }
        for c in &rest {
            let coeffs: Vec<Elem> = std::iter::once(one.clone()).chain(c.iter().cloned()).take(len).collect();
            let assign = (0..len).map(|i| Some((perm[i], coeffs[i].clone()))).collect();
            let f = SubmonomialMap::new(ma.clone(), na.clone(), assign).expect("bijection");
            if f.is_isomorphism() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Whether `bases` satisfies the basis exchange axiom.
fn is_basis_system(bases: &[Mask]) -> bool {
    let set: HashSet<Mask> = bases.iter().copied().collect();
    bases.iter().all(|&b1| {
        bases.iter().all(|&b2| {
            subset::members(b1 & !b2).into_iter().all(|x| {
                subset::members(b2 & !b1).into_iter().any(|y| set.contains(&((b1 & !(1 << x)) | (1 << y))))
            })
        })
    })
}

/// Every GP-valid assignment of units to a basis support, normalized so
/// the first basis has value `1`.
fn valued(idyll: &Idyll, ground: &GroundSet, rank: usize, support: &[Mask], us: &[Elem]) -> Vec<FMatroid> {
    let one = idyll.one();
    let mut out = Vec::new();
    for rest in coefficient_vectors(us, support.len().saturating_sub(1)) {
        let mut c = crate::matroid::Candidate::new(idyll.clone(), ground.clone(), rank);
        for (k, &b) in support.iter().enumerate() {
            let v = if k == 0 { one.clone() } else { rest[k - 1].clone() };
            c.values.insert(Subset(b), v);
        }
        if let Ok(m) = FMatroid::new_with_limits(c, subset::MAX_ELEMENTS, subset::MAX_ELEMENTS) {
            out.push(m);
        }
    }
    out
}

/// All matroids on `e1..en` of rank `r`, one per normalized value function.
pub fn enumerate_matroids(idyll: &Idyll, n: usize, r: usize, bounds: HallBounds) -> Result<Vec<FMatroid>, HallError> {
    enumerate_matroids_with(idyll, n, r, bounds, Exec::default())
}

pub fn enumerate_matroids_with(
    idyll: &Idyll,
    n: usize,
    r: usize,
    bounds: HallBounds,
    exec: Exec,
) -> Result<Vec<FMatroid>, HallError> {
    bounds.check(idyll, n)?;
    let us = units(idyll)?;
    if r > n {
        return Ok(Vec::new());
    }
    let all = subset::k_subsets(subset::full(n), r);
    if all.len() > MAX_FREE_CANDIDATES {
        return Err(HallError::TooManyCandidates(all.len()));
    }
    let ground = GroundSet::standard(n);
    let choices: Vec<u64> = (1..1u64 << all.len()).collect();
    let found = par::map(exec, &choices, |&pick| {
        let support: Vec<Mask> = (0..all.len()).filter(|k| pick >> k & 1 == 1).map(|k| all[k]).collect();
        if !is_basis_system(&support) {
            return Vec::new();
        }
        valued(idyll, &ground, r, &support, &us)
    });
    Ok(found.into_iter().flatten().collect())
}

/// Number of subsets `A` with `R|A ≅ N` and `R/A ≅ M`.
pub fn g_constant(r: &FMatroid, m: &FMatroid, n: &FMatroid) -> Result<u64, HallError> {
    if r.idyll() != m.idyll() || r.idyll() != n.idyll() {
        return Err(HallError::IdyllMismatch);
    }
    if r.len() != m.len() + n.len() || r.rank() != m.rank() + n.rank() {
        return Ok(0);
    }
    let (cm, cn) = (IsoClass::of(m)?, IsoClass::of(n)?);
    g_against(r, &cm, &cn)
}

fn g_against(r: &FMatroid, cm: &IsoClass, cn: &IsoClass) -> Result<u64, HallError> {
    let mut count = 0;
    for a in subset::k_subsets(r.ground().all(), cn.len()) {
        let sub = r.restrict_mask(a);
        if sub.rank() != cn.rank() || IsoClass::of(&sub)? != *cn {
            continue;
        }
        if IsoClass::of(&r.contract_mask(a))? == *cm {
            count += 1;
        }
    }
    Ok(count)
}

/// A finitely supported function on isomorphism classes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HallElement {
    terms: BTreeMap<IsoClass, Q>,
}

impl HallElement {
    pub fn delta(c: IsoClass) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(c, Q::from_integer(1));
        HallElement { terms }
    }

    /// `δ_[0]` over `idyll`.
    pub fn unit(idyll: &Idyll) -> Result<Self, HallError> {
        Ok(Self::delta(IsoClass::of(&FMatroid::zero(idyll.clone()))?))
    }

    pub fn terms(&self) -> &BTreeMap<IsoClass, Q> {
        &self.terms
    }

    pub fn coefficient(&self, c: &IsoClass) -> Q {
        self.terms.get(c).copied().unwrap_or_else(Q::zero)
    }

    fn add_term(&mut self, c: IsoClass, q: Q) {
        let e = self.terms.entry(c).or_insert_with(Q::zero);
        *e += q;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    /// Bilinear extension of the product on basis elements.
    pub fn mul(&self, other: &HallElement, bounds: HallBounds) -> Result<HallElement, HallError> {
        let mut out = HallElement::default();
        for (a, qa) in &self.terms {
            for (b, qb) in &other.terms {
                let p = hall_product(&a.representative(), &b.representative(), bounds)?;
                for (c, qc) in p.terms {
                    out.add_term(c, *qa * *qb * qc);
                }
            }
        }
        Ok(out)
    }

    /// `coeff * [class]` lines in class order.
    pub fn report(&self) -> String {
        self.terms.iter().map(|(c, q)| format!("{q} * {c}\n")).collect()
    }
}

/// Matroids `R` on `A ⊔ B` (`A` holding `N`'s elements first) with
/// `R|A = N` and `R/A = M` exactly. Bases meeting `A` in a basis of `N`
/// are forced; the remaining rank-sized subsets are free.
pub fn gluings(m: &FMatroid, n: &FMatroid, bounds: HallBounds) -> Result<Vec<FMatroid>, HallError> {
    gluings_with(m, n, bounds, Exec::default())
}

pub fn gluings_with(m: &FMatroid, n: &FMatroid, bounds: HallBounds, exec: Exec) -> Result<Vec<FMatroid>, HallError> {
    if m.idyll() != n.idyll() {
        return Err(HallError::IdyllMismatch);
    }
    let idyll = m.idyll();
    let us = units(idyll)?;
    let (na, nm) = (n.len(), m.len());
    let size = na + nm;
    bounds.check(idyll, size)?;
    let rank = m.rank() + n.rank();
    let a: Mask = subset::full(na);
    let forced: Vec<Mask> = n
        .bases()
        .into_iter()
        .flat_map(|bn| m.bases().into_iter().map(move |bm| bn | bm << na))
        .collect();
    let free: Vec<Mask> = subset::k_subsets(subset::full(size), rank)
        .into_iter()
        .filter(|&s| subset::size(s & a) < n.rank())
        .collect();
    if free.len() > MAX_FREE_CANDIDATES {
        return Err(HallError::TooManyCandidates(free.len()));
    }
    let ground = GroundSet::standard(size);
    let m_std = m.relabel((na + 1..=size).map(|i| format!("e{i}")).collect()).expect("labels");
    let n_std = n.relabel((1..=na).map(|i| format!("e{i}")).collect()).expect("labels");
    let choices: Vec<u64> = (0..1u64 << free.len()).collect();
    let found = par::map(exec, &choices, |&pick| {
        let mut support = forced.clone();
        support.extend((0..free.len()).filter(|k| pick >> k & 1 == 1).map(|k| free[k]));
        support.sort_unstable_by(|x, y| subset::lex_cmp(*x, *y));
        if !is_basis_system(&support) {
            return Vec::new();
        }
        valued(idyll, &ground, rank, &support, &us)
            .into_iter()
            .filter(|r| r.restrict_mask(a).projective_equal(&n_std) && r.contract_mask(a).projective_equal(&m_std))
            .collect()
    });
    Ok(found.into_iter().flatten().collect())
}

/// `δ_[M] · δ_[N] = Σ_R g^R_{M,N} δ_[R]`.
pub fn hall_product(m: &FMatroid, n: &FMatroid, bounds: HallBounds) -> Result<HallElement, HallError> {
    hall_product_with(m, n, bounds, Exec::default())
}

pub fn hall_product_with(m: &FMatroid, n: &FMatroid, bounds: HallBounds, exec: Exec) -> Result<HallElement, HallError> {
    let glued = gluings_with(m, n, bounds, exec)?;
    let classes: Vec<IsoClass> = par::map(exec, &glued, IsoClass::of).into_iter().collect::<Result<_, _>>()?;
    let distinct: Vec<IsoClass> = classes.into_iter().collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    let (cm, cn) = (IsoClass::of(m)?, IsoClass::of(n)?);
    let gs: Vec<Result<u64, HallError>> = par::map(exec, &distinct, |c| g_against(&c.representative(), &cm, &cn));
    let mut out = HallElement::default();
    for (c, g) in distinct.into_iter().zip(gs) {
        let g = g?;
        if g > 0 {
            out.add_term(c, Q::from_integer(g as i64));
        }
    }
    Ok(out)
}

/// `1` iff `R ≅ M ⊕ N`.
pub fn green_comul_coeff(r: &FMatroid, m: &FMatroid, n: &FMatroid) -> Result<u8, HallError> {
    let s = m.direct_sum(n).map_err(|_| HallError::IdyllMismatch)?;
    Ok(u8::from(IsoClass::of(r)? == IsoClass::of(&s)?))
}

/// `(rank, nullity)` of the underlying matroid.
pub fn k0_class(m: &FMatroid) -> (i64, i64) {
    let r = m.rank() as i64;
    (r, m.len() as i64 - r)
}
