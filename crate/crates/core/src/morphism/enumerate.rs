//! Exhaustive hom sets over finite idylls and the universal-property
//! oracles built on them.

use std::collections::HashMap;
use std::sync::Arc;

use super::{Square, SubmonomialMap};
use crate::idyll::Elem;
use crate::matroid::FMatroid;
use crate::par::{self, Exec};

type Assignment = Vec<Option<(usize, Elem)>>;

/// All partial injections `0..ns -> 0..nt` with coefficients from `units`.
pub fn partial_injections(ns: usize, nt: usize, units: &[Elem]) -> Vec<Assignment> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(ns);
    fn go(i: usize, ns: usize, nt: usize, used: u32, units: &[Elem], cur: &mut Assignment, out: &mut Vec<Assignment>) {
        if i == ns {
            out.push(cur.clone());
            return;
        }
        cur.push(None);
        go(i + 1, ns, nt, used, units, cur, out);
        cur.pop();
        for j in 0..nt {
            if used >> j & 1 == 0 {
                for c in units {
                    cur.push(Some((j, c.clone())));
                    go(i + 1, ns, nt, used | 1 << j, units, cur, out);
                    cur.pop();
                }
            }
        }
    }
    go(0, ns, nt, 0, units, &mut cur, &mut out);
    out
}

/// Every morphism `source -> target`, or `None` over an infinite idyll.
pub fn hom_set_with(source: &Arc<FMatroid>, target: &Arc<FMatroid>, exec: Exec) -> Option<Vec<SubmonomialMap>> {
    if source.idyll() != target.idyll() {
        return Some(Vec::new());
    }
    let units = source.idyll().units()?;
    let candidates = partial_injections(source.len(), target.len(), &units);
    Some(par::filter_map(exec, &candidates, |a| {
        let f = SubmonomialMap::trusted(source.clone(), target.clone(), a.clone());
        f.check_with(Exec::Sequential).is_ok().then_some(f)
    }))
}

pub fn hom_set(source: &Arc<FMatroid>, target: &Arc<FMatroid>) -> Option<Vec<SubmonomialMap>> {
    hom_set_with(source, target, Exec::default())
}

fn key(f: &SubmonomialMap) -> Assignment {
    f.assignment().to_vec()
}

/// For every test object `T`, each commuting pair `T -> N`, `T -> M` factors
/// through the corner by exactly one morphism. `None` over infinite idylls.
pub fn is_cartesian(sq: &Square, tests: &[Arc<FMatroid>]) -> Option<bool> {
    let (p, n, m) = (sq.corner(), sq.top.target(), sq.left.target());
    for t in tests {
        let hs = hom_set(t, p)?;
        let us = hom_set(t, n)?;
        let vs = hom_set(t, m)?;
        let mut counts: HashMap<(Assignment, Assignment), usize> = HashMap::new();
        for h in &hs {
            let u = sq.top.compose(h).ok()?;
            let v = sq.left.compose(h).ok()?;
            *counts.entry((key(&u), key(&v))).or_default() += 1;
        }
        if counts.values().any(|&c| c > 1) {
            return Some(false);
        }
        // commuting pairs, grouped by the common composite
        let mut by_u: HashMap<Assignment, usize> = HashMap::new();
        for u in &us {
            *by_u.entry(key(&sq.right.compose(u).ok()?)).or_default() += 1;
        }
        let mut pairs = 0usize;
        for v in &vs {
            pairs += by_u.get(&key(&sq.bottom.compose(v).ok()?)).copied().unwrap_or(0);
        }
        if pairs != counts.len() {
            return Some(false);
        }
    }
    Some(true)
}

/// For every test object `T`, each pair `N -> T`, `M -> T` agreeing on the
/// corner extends over the opposite corner by exactly one morphism.
pub fn is_cocartesian(sq: &Square, tests: &[Arc<FMatroid>]) -> Option<bool> {
    let (r, n, m) = (sq.opposite(), sq.top.target(), sq.left.target());
    for t in tests {
        let hs = hom_set(r, t)?;
        let us = hom_set(n, t)?;
        let vs = hom_set(m, t)?;
        let mut counts: HashMap<(Assignment, Assignment), usize> = HashMap::new();
        for h in &hs {
            let u = h.compose(&sq.right).ok()?;
            let v = h.compose(&sq.bottom).ok()?;
            *counts.entry((key(&u), key(&v))).or_default() += 1;
        }
        if counts.values().any(|&c| c > 1) {
            return Some(false);
        }
        let mut by_u: HashMap<Assignment, usize> = HashMap::new();
        for u in &us {
            *by_u.entry(key(&u.compose(&sq.top).ok()?)).or_default() += 1;
        }
        let mut pairs = 0usize;
        for v in &vs {
            pairs += by_u.get(&key(&v.compose(&sq.left).ok()?)).copied().unwrap_or(0);
        }
        if pairs != counts.len() {
            return Some(false);
        }
    }
    Some(true)
}
