//! Embedded acceptance suites, one per criterion, runnable from the binary.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus;
use crate::hall::{self, HallBounds, HallElement, IsoClass};
use crate::idyll::{Elem, Idyll, Q};
use crate::matroid::{uniform, verify_gp, Candidate, FMatroid, GpViolation};
use crate::morphism::{
    complete_cospan, complete_span, hom_pair_injective, hom_set, inclusion_left, inclusion_right, is_cartesian,
    is_cocartesian, sum_of_maps, combinatorial_split, Mode, NotAdmissible, SubmonomialMap,
};
use crate::par::{self, Exec};
use crate::subset::{self, Mask};
use crate::trs::{hn_chains_brute_force, NotBundle, Trs};

#[derive(Clone, Copy, Debug, Default)]
pub struct Config {
    pub exec: Exec,
    pub seed: u64,
    pub bounds: HallBounds,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

pub const TITLES: [&str; 10] = [
    "GP verification and mutation detection",
    "minor and duality identities",
    "proto-exact completions and universal properties",
    "direct sums, splittings and duality",
    "kernel and cokernel universal properties",
    "Hall algebra over the Krasner hyperfield",
    "K0 classes",
    "tropical sheaves and Harder-Narasimhan filtrations",
    "vector-bundle check",
    "determinism and round trips",
];

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs criterion `id` (1 to 10).
pub fn run(id: u8, cfg: &Config) -> Outcome {
    let start = Instant::now();
    let (limit, result) = match id {
        1 => (Some(10), gp_verification(cfg)),
        2 => (None, minor_identities(cfg)),
        3 => (Some(300), proto_exact(cfg)),
        4 => (None, direct_sums(cfg)),
        5 => (None, kernels(cfg)),
        6 => (Some(120), hall_algebra(cfg)),
        7 => (None, k0(cfg)),
        8 => (Some(120), sheaves(cfg)),
        9 => (None, bundles(cfg)),
        10 => (None, determinism(cfg)),
        _ => (None, Err(format!("no criterion {id}"))),
    };
    let elapsed = start.elapsed();
    let (passed, detail) = match result {
        Ok(d) => match limit {
            Some(s) if elapsed.as_secs() >= s => (false, format!("{d}; exceeded {s} s")),
            _ => (true, d),
        },
        Err(e) => (false, e),
    };
    Outcome { id, title: TITLES[id as usize - 1], passed, detail, elapsed }
}

pub fn run_all(cfg: &Config) -> Vec<Outcome> {
    (1..=10).map(|i| run(i, cfg)).collect()
}

/// One `PASS`/`FAIL` line per outcome.
pub fn format_outcome(o: &Outcome) -> String {
    format!("{} criterion {:>2}: {} ({})", if o.passed { "PASS" } else { "FAIL" }, o.id, o.title, o.detail)
}

/// GP2 over every sorted `(r+1)`-subset `x` and `(r-1)`-subset `y`; tuples
/// with repeats contribute cancelling pairs, so subsets suffice.
pub fn brute_force_gp2(c: &Candidate) -> bool {
    let r = c.rank;
    if r == 0 {
        return true;
    }
    let all = c.ground.all();
    for x in subset::k_subsets(all, r + 1) {
        let xs = subset::members(x);
        for y in subset::k_subsets(all, r - 1) {
            let ys = subset::members(y);
            let mut terms = Vec::with_capacity(r + 1);
            for k in 0..=r {
                let mut hat = xs.clone();
                let xk = hat.remove(k);
                let mut with = vec![xk];
                with.extend(&ys);
                let v = c.idyll.mul_raw(&c.tuple_value(&hat), &c.tuple_value(&with));
                terms.push(c.idyll.signed(&v, k % 2 == 1));
            }
            if !c.idyll.is_null(&terms).unwrap_or(false) {
                return false;
            }
        }
    }
    true
}

fn mutants(m: &FMatroid) -> Vec<Candidate> {
    let base = m.to_candidate();
    let mut out = Vec::new();
    for (s, v) in m.values() {
        let key = subset::Subset(s);
        let mut removed = base.clone();
        removed.values.remove(&key);
        out.push(removed);
        let changed = match v {
            Elem::Pos => vec![Elem::Neg],
            Elem::Neg => vec![Elem::Pos],
            Elem::Trop(q) => [-2, -1, 1, 2].iter().map(|&d| Elem::Trop(q + Q::from_integer(d))).collect(),
            Elem::Unit(i) if *i > 0 => vec![Elem::Unit(0)],
            Elem::Unit(_) => vec![Elem::Unit(1)],
            _ => vec![],
        };
        for w in changed.into_iter().filter(|w| m.idyll().contains(w)) {
            let mut c = base.clone();
            c.values.insert(key, w);
            out.push(c);
        }
    }
    // a zero value switched on
    let one = m.idyll().one();
    for s in subset::k_subsets(m.ground().all(), m.rank()) {
        if m.value(s).is_zero() {
            let mut c = base.clone();
            c.values.insert(subset::Subset(s), one.clone());
            out.push(c);
        }
    }
    out
}

fn gp_verification(cfg: &Config) -> Check {
    let corpus = corpus::matroids();
    for (name, m) in &corpus {
        verify_gp(&m.to_candidate()).map_err(|e| format!("{name}: {e}"))?;
        ensure(brute_force_gp2(&m.to_candidate()), || format!("{name}: brute-force checker disagrees"))?;
    }
    let all: Vec<Candidate> = corpus.iter().flat_map(|(_, m)| mutants(m)).collect();
    let verdicts = par::map(cfg.exec, &all, |c| {
        let broken = !brute_force_gp2(c);
        let witnessed = matches!(verify_gp(c), Err(GpViolation::Exchange { .. }));
        (broken, witnessed)
    });
    let broken = verdicts.iter().filter(|v| v.0).count();
    let caught = verdicts.iter().filter(|v| v.0 && v.1).count();
    let false_alarms = verdicts.iter().filter(|v| !v.0 && v.1).count();
    ensure(broken > 0, || "no mutation broke GP2".into())?;
    ensure(caught * 100 >= broken * 95, || format!("only {caught}/{broken} mutations reported"))?;
    ensure(false_alarms == 0, || format!("{false_alarms} valid mutants reported as violations"))?;
    Ok(format!("{} matroids verified, {caught}/{broken} breaking mutations witnessed among {}", corpus.len(), all.len()))
}

/// Equal rank, size and normalized values, ignoring labels.
fn same_values(a: &FMatroid, b: &FMatroid) -> bool {
    a.idyll() == b.idyll() && a.rank() == b.rank() && a.len() == b.len() && a.values().eq(b.values())
}

fn minor_identities(_cfg: &Config) -> Check {
    let corpus = corpus::matroids();
    let mut checks = 0usize;
    for (name, m) in &corpus {
        let g = m.ground();
        let all = g.all();
        ensure(m.dual().dual().projective_equal(m), || format!("{name}: double dual"))?;
        for s in subset::submasks(all) {
            let (sn, rest) = (g.names(s), all & !s);
            let lhs = m.contract(&sn).unwrap().dual();
            let rhs = m.dual().delete(&sn).unwrap();
            ensure(lhs.projective_equal(&rhs), || format!("{name}: (M/A)* vs M*\\A at {sn:?}"))?;
            for t in subset::submasks(rest) {
                let tn = g.names(t);
                let lhs = m.restrict(&g.names(s | t)).unwrap().contract(&sn).unwrap();
                let rhs = m.contract(&sn).unwrap().restrict(&tn).unwrap();
                ensure(lhs.projective_equal(&rhs), || format!("{name}: (M|T)/S vs (M/S)|T at S={sn:?} T={tn:?}"))?;
                checks += 1;
            }
        }
    }
    let small: Vec<&(String, FMatroid)> = corpus.iter().filter(|(_, m)| m.len() <= 3).collect();
    for (n1, m1) in &small {
        for (n2, m2) in &small {
            if m1.idyll() != m2.idyll() {
                continue;
            }
            let sum = m1.direct_sum(m2).unwrap();
            for a1 in subset::submasks(m1.ground().all()) {
                for a2 in subset::submasks(m2.ground().all()) {
                    let lhs = sum.contract_mask(a1 | a2 << m1.len());
                    let rhs = m1.contract_mask(a1).direct_sum(&m2.contract_mask(a2)).unwrap();
                    ensure(same_values(&lhs, &rhs), || format!("{n1} ⊕ {n2}: contraction at {a1:b},{a2:b}"))?;
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{checks} identities on {} matroids", corpus.len()))
}

fn krasner_classes(max_n: usize, bounds: HallBounds) -> Vec<Arc<FMatroid>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for n in 0..=max_n {
        for r in 0..=n {
            for m in hall::enumerate_matroids(&Idyll::Krasner, n, r, bounds).unwrap_or_default() {
                if seen.insert(IsoClass::of(&m).expect("finite")) {
                    out.push(Arc::new(m));
                }
            }
        }
    }
    out
}

fn proto_exact(cfg: &Config) -> Check {
    let objects = krasner_classes(4, cfg.bounds);
    let tests = krasner_classes(3, cfg.bounds);
    let results = par::map(cfg.exec, &objects, |n| -> Result<usize, String> {
        let mut squares = 0;
        let all = n.ground().all();
        for b in subset::submasks(all) {
            // cospans M ↣ N/B ↞ N
            let j = SubmonomialMap::contraction(n.clone(), b);
            let r = j.target().clone();
            for a in subset::submasks(r.ground().all()) {
                let i = SubmonomialMap::restriction(r.clone(), a);
                let sq = complete_cospan(&i, &j, Mode::General).map_err(|e| format!("{n:?}: cospan {a:b},{b:b}: {e}"))?;
                let ok = sq.commutes() && sq.is_admissible(Mode::General);
                let cart = is_cartesian(&sq, &tests) == Some(true);
                let cocart = is_cocartesian(&sq, &tests) == Some(true);
                ensure(ok && cart && cocart, || format!("{n:?}: cospan completion at A={a:b} B={b:b} fails"))?;
                squares += 1;
            }
            // spans N ↢ N|B ↠ (N|B)/A
            let q = SubmonomialMap::restriction(n.clone(), b);
            let p0 = q.source().clone();
            for a in subset::submasks(p0.ground().all()) {
                let p = SubmonomialMap::contraction(p0.clone(), a);
                let sq = complete_span(&q, &p, Mode::General).map_err(|e| format!("{n:?}: span {a:b},{b:b}: {e}"))?;
                let ok = sq.commutes() && sq.is_admissible(Mode::General);
                let cart = is_cartesian(&sq, &tests);
                let cocart = is_cocartesian(&sq, &tests);
                ensure(ok && cart == Some(true) && cocart == Some(true), || {
                    format!("{n:?}: span completion at A={a:b} B={b:b} fails")
                })?;
                // perturb: the same arrows with the corner collapsed to zero
                let zero = Arc::new(FMatroid::zero(Idyll::Krasner));
                let wrong = crate::morphism::Square {
                    top: SubmonomialMap::zero(zero.clone(), n.clone()),
                    left: SubmonomialMap::zero(zero, sq.left.target().clone()),
                    right: sq.right.clone(),
                    bottom: sq.bottom.clone(),
                };
                ensure(is_cartesian(&wrong, &tests) == is_cocartesian(&wrong, &tests), || {
                    format!("{n:?}: Cartesian and coCartesian disagree on a collapsed square")
                })?;
                squares += 1;
            }
        }
        Ok(squares)
    });
    let mut total = 0;
    for r in results {
        total += r?;
    }
    Ok(format!("{total} completions over {} objects against {} test objects", objects.len(), tests.len()))
}

fn finite_small() -> Vec<Arc<FMatroid>> {
    let mut out: Vec<Arc<FMatroid>> = Vec::new();
    for idyll in [Idyll::Krasner, Idyll::Sign, Idyll::Regular] {
        out.push(Arc::new(FMatroid::zero(idyll.clone())));
        for n in 1..=2 {
            for r in 0..=n {
                out.push(Arc::new(uniform(idyll.clone(), r, n).unwrap()));
            }
        }
    }
    out
}

fn direct_sums(_cfg: &Config) -> Check {
    let small = finite_small();
    let mut count = 0usize;
    for m in &small {
        // the zero object is a unit for the sum
        let zero = FMatroid::zero(m.idyll().clone());
        ensure(same_values(&m.direct_sum(&zero).unwrap(), m) && same_values(&zero.direct_sum(m).unwrap(), m), || {
            format!("{m:?}: zero is not a unit")
        })?;
        for n in small.iter().filter(|n| n.idyll() == m.idyll()) {
            // sums of exact sequences are exact, with equality of the pieces
            let s = m.direct_sum(n).unwrap();
            for a1 in subset::submasks(m.ground().all()) {
                for a2 in subset::submasks(n.ground().all()) {
                    let a = a1 | a2 << m.len();
                    ensure(same_values(&s.restrict_mask(a), &m.restrict_mask(a1).direct_sum(&n.restrict_mask(a2)).unwrap()), || {
                        format!("{m:?} ⊕ {n:?}: restriction")
                    })?;
                    let i = sum_of_maps(&SubmonomialMap::restriction(m.clone(), a1), &SubmonomialMap::restriction(n.clone(), a2)).unwrap();
                    let p = sum_of_maps(&SubmonomialMap::contraction(m.clone(), a1), &SubmonomialMap::contraction(n.clone(), a2)).unwrap();
                    ensure(i.is_admissible_mono(Mode::General) && p.is_admissible_epi(Mode::General), || "sum of admissibles".into())?;
                    ensure(p.compose(&i).unwrap().is_zero_map(), || "sum sequence does not compose to zero".into())?;
                    count += 1;
                }
            }
            // hom-pair maps are injective
            for r in small.iter().filter(|r| r.idyll() == m.idyll() && m.len() + n.len() + r.len() <= 5) {
                ensure(hom_pair_injective(m, n, r) == Some(true), || format!("hom-pair map not injective for {m:?}, {n:?}, {r:?}"))?;
                count += 1;
            }
        }
    }
    // each section of X ↠ X/A gives exactly one compatible isomorphism
    let mut splits = 0usize;
    for x in finite_small().into_iter().chain(corpus::graphic_family().into_iter().filter(|(_, m)| m.len() <= 3).map(|(_, m)| Arc::new(m))) {
        for a in subset::submasks(x.ground().all()) {
            let i = SubmonomialMap::restriction(x.clone(), a);
            let p = SubmonomialMap::contraction(x.clone(), a);
            let id = SubmonomialMap::identity(p.target().clone());
            let (sub, quo) = (i.source().clone(), p.target().clone());
            let (l, r) = (inclusion_left(&sub, &quo).unwrap(), inclusion_right(&sub, &quo).unwrap());
            let sum = l.target().clone();
            let phis = hom_set(&sum, &x).unwrap();
            for s in hom_set(&quo, &x).unwrap().into_iter().filter(|s| p.compose(s).unwrap().same_matrix(&id)) {
                let compatible: Vec<&SubmonomialMap> = phis
                    .iter()
                    .filter(|phi| phi.compose(&l).unwrap().same_matrix(&i) && phi.compose(&r).unwrap().same_matrix(&s))
                    .collect();
                ensure(compatible.len() == 1 && compatible[0].is_isomorphism(), || {
                    format!("{} compatible splitting maps for {x:?} at {a:b}", compatible.len())
                })?;
                splits += 1;
            }
        }
    }
    // combinatorial splitting of admissible monos into a sum
    let m1 = Arc::new(uniform(Idyll::Sign, 1, 2).unwrap());
    let m2 = Arc::new(uniform(Idyll::Sign, 2, 3).unwrap());
    let s = Arc::new(m1.direct_sum(&m2).unwrap());
    for w in subset::submasks(s.ground().all()) {
        let g = SubmonomialMap::restriction(s.clone(), w);
        let (i1, i2, f) = combinatorial_split(&g, &m1, &m2).map_err(|e| e.to_string())?;
        ensure(f.is_isomorphism() && sum_of_maps(&i1, &i2).unwrap().compose(&f).unwrap().same_matrix(&g), || {
            format!("combinatorial splitting fails at {w:b}")
        })?;
    }
    // transposition exchanges admissible monos and epis
    for (name, m) in corpus::matroids().into_iter().filter(|(_, m)| m.len() <= 4) {
        let m = Arc::new(m);
        for a in subset::submasks(m.ground().all()) {
            let r = SubmonomialMap::restriction(m.clone(), a);
            let c = SubmonomialMap::contraction(m.clone(), a);
            ensure(r.transpose().is_admissible_epi(Mode::General) && c.transpose().is_admissible_mono(Mode::General), || {
                format!("{name}: transpose at {a:b}")
            })?;
        }
    }
    // the C4 sequence at one edge does not split
    let c4 = corpus::graphic_family().into_iter().find(|(n, _)| n == "C4/K").unwrap().1;
    let (sub, quo) = (c4.restrict_mask(0b0001), c4.contract_mask(0b0001));
    let split = sub.direct_sum(&quo).unwrap();
    ensure(!hall::is_isomorphic(&c4, &split).map_err(|e| e.to_string())?, || "C4 sequence splits".into())?;
    Ok(format!("{count} sum checks, {splits} unique splittings, C4 sequence certified non-split"))
}

fn kernels(cfg: &Config) -> Check {
    let small = finite_small();
    let mut pairs = Vec::new();
    for m in &small {
        for n in small.iter().filter(|n| n.idyll() == m.idyll()) {
            pairs.push((m.clone(), n.clone()));
        }
    }
    let results = par::map(cfg.exec, &pairs, |(m, n)| -> Result<usize, String> {
        let tests: Vec<&Arc<FMatroid>> = small.iter().filter(|t| t.idyll() == m.idyll()).collect();
        let mut count = 0;
        for f in hom_set(m, n).unwrap() {
            let k = f.kernel(Mode::General).map_err(|e| e.to_string())?;
            let c = f.cokernel(Mode::General);
            for t in &tests {
                for g in hom_set(t, m).unwrap() {
                    if !f.compose(&g).unwrap().is_zero_map() {
                        continue;
                    }
                    let through = hom_set(t, k.source()).unwrap().into_iter().filter(|h| k.compose(h).unwrap().same_matrix(&g)).count();
                    ensure(through == 1, || format!("kernel of {f:?}: {through} factorizations"))?;
                }
                for g in hom_set(n, t).unwrap() {
                    if !g.compose(&f).unwrap().is_zero_map() {
                        continue;
                    }
                    let through = hom_set(c.target(), t).unwrap().into_iter().filter(|h| h.compose(&c).unwrap().same_matrix(&g)).count();
                    ensure(through == 1, || format!("cokernel of {f:?}: {through} factorizations"))?;
                }
            }
            // simple mode refuses a kernel exactly when it would not be a flat
            let cl = m.classical();
            match f.kernel(Mode::Simple) {
                Ok(ks) => ensure(cl.is_flat(ks.image_mask()), || format!("simple kernel of {f:?} is not a flat"))?,
                Err(NotAdmissible::NotFlat(a)) => ensure(!cl.is_flat(a), || format!("simple kernel of {f:?} refused a flat"))?,
                Err(e) => return Err(format!("simple kernel of {f:?}: {e}")),
            }
            let cs = f.cokernel(Mode::Simple);
            ensure(cs.kernel_mask() == n.classical().closure(f.image_mask()), || format!("simple cokernel of {f:?}"))?;
            count += 1;
        }
        Ok(count)
    });
    let mut total = 0;
    for r in results {
        total += r?;
    }
    Ok(format!("{total} morphisms"))
}

fn hall_algebra(cfg: &Config) -> Check {
    let b = cfg.bounds;
    let k = |r, n| uniform(Idyll::Krasner, r, n).unwrap();
    let class = |m: &FMatroid| IsoClass::of(m).map_err(|e| e.to_string());
    let u11 = k(1, 1);
    let p = hall::hall_product(&u11, &u11, b).map_err(|e| e.to_string())?;
    ensure(p.report() == "2 * [U22]\n" && p.coefficient(&class(&k(2, 2))?) == Q::from_integer(2), || {
        format!("U11·U11 = {}", p.report().trim())
    })?;
    ensure(hall::g_constant(&k(1, 2), &u11, &u11).map_err(|e| e.to_string())? == 0, || "g^U12_{U11,U11} != 0".into())?;
    let one = HallElement::unit(&Idyll::Krasner).map_err(|e| e.to_string())?;
    let pieces = krasner_classes(2, b);
    let classes = krasner_classes(3, b);
    for m in &classes {
        let d = HallElement::delta(class(m)?);
        ensure(one.mul(&d, b).map_err(|e| e.to_string())? == d && d.mul(&one, b).map_err(|e| e.to_string())? == d, || {
            format!("unit law fails at {m:?}")
        })?;
    }
    let deltas: Vec<HallElement> = pieces.iter().map(|m| HallElement::delta(IsoClass::of(m).unwrap())).collect();
    let mut triples = Vec::new();
    for x in 0..deltas.len() {
        for y in 0..deltas.len() {
            for z in 0..deltas.len() {
                triples.push((x, y, z));
            }
        }
    }
    let results = par::map(cfg.exec, &triples, |&(x, y, z)| -> Result<bool, String> {
        let (dx, dy, dz) = (&deltas[x], &deltas[y], &deltas[z]);
        let left = dx.mul(dy, b).and_then(|e| e.mul(dz, b)).map_err(|e| e.to_string())?;
        let right = dy.mul(dz, b).and_then(|e| dx.mul(&e, b)).map_err(|e| e.to_string())?;
        Ok(left == right)
    });
    for (t, r) in triples.iter().zip(results) {
        ensure(r?, || format!("associativity fails at {t:?}"))?;
    }
    Ok(format!("U11·U11 = 2·U22, units on {} classes, associativity on {} triples", classes.len(), triples.len()))
}

fn random_iso(m: &FMatroid, rng: &mut ChaCha8Rng) -> FMatroid {
    let mut order: Vec<usize> = (0..m.len()).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let units = m.idyll().units().unwrap_or_else(|| vec![m.idyll().one(), Elem::Trop(Q::from_integer(3))]);
    let coeffs: Vec<Elem> = (0..m.len()).map(|_| units.choose(rng).unwrap().clone()).collect();
    m.rescale_elements(&coeffs).reorder(&order)
}

fn k0(cfg: &Config) -> Check {
    let corpus = corpus::matroids();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut idylls = BTreeSet::new();
    for _ in 0..200 {
        let (name, m) = corpus.choose(&mut rng).unwrap();
        let m = random_iso(m, &mut rng);
        let a: Mask = rng.random_range(0..=m.ground().all());
        let (x, y, z) = (hall::k0_class(&m.restrict_mask(a)), hall::k0_class(&m), hall::k0_class(&m.contract_mask(a)));
        ensure(y == (x.0 + z.0, x.1 + z.1), || format!("{name} at {a:b}: {x:?} + {z:?} != {y:?}"))?;
        idylls.insert(m.idyll().name());
    }
    for (name, m) in &corpus {
        let n = random_iso(m, &mut rng);
        ensure(hall::k0_class(m) == hall::k0_class(&n), || format!("{name}: class changes under isomorphism"))?;
    }
    let c4 = corpus.iter().find(|(n, _)| n == "C4/K").unwrap();
    ensure(hall::k0_class(&c4.1) == (3, 1), || "C4 class".into())?;
    ensure(hall::k0_class(&FMatroid::zero(Idyll::Krasner)) == (0, 0), || "zero class".into())?;
    Ok(format!("200 sequences across {} idylls, C4 = (3,1)", idylls.len()))
}

fn sheaves(_cfg: &Config) -> Check {
    let q = Q::from_integer;
    for a in -3..=3i64 {
        for b in -3..=a {
            let e = corpus::p1_split(a, b);
            ensure(e.degree() == q(a + b), || format!("degree of ({a},{b})"))?;
            let hn = e.hn_filtration().map_err(|x| x.to_string())?;
            let flats: Vec<Mask> = hn.iter().map(|s| s.flat).collect();
            let slopes: Vec<Q> = hn.iter().map(|s| s.slope).collect();
            if a > b {
                ensure(flats == [0b01, 0b11] && slopes == [q(a), q(b)], || format!("HN of ({a},{b}): {hn:?}"))?;
            } else {
                ensure(e.is_semistable().map_err(|x| x.to_string())? && flats == [0b11], || format!("({a},{a}) not semistable"))?;
            }
            let t = e.tensor(&[1, -1]);
            let th = t.hn_filtration().map_err(|x| x.to_string())?;
            ensure(t.degree() == e.degree() && th.iter().map(|s| s.flat).eq(flats.iter().copied()), || {
                format!("twist of ({a},{b}) changes degree or HN flats")
            })?;
        }
    }
    let corpus = corpus::sheaves();
    let mut pairs = 0usize;
    for (name, e) in &corpus {
        ensure(e.is_modular(), || format!("{name} is not modular"))?;
        let chains = hn_chains_brute_force(e).map_err(|x| x.to_string())?;
        let hn = e.hn_filtration().map_err(|x| x.to_string())?;
        ensure(chains.len() == 1 && chains[0] == hn, || format!("{name}: HN {hn:?} vs oracle {chains:?}"))?;
        let flats = e.flats();
        for &f in &flats {
            let (sub, quo) = (e.restrict(f).map_err(|x| x.to_string())?, e.contract(f).map_err(|x| x.to_string())?);
            ensure(sub.degree() + quo.degree() == e.degree(), || format!("{name}: degree not additive at {f:b}"))?;
            for &g in &flats {
                ensure(e.strong_slope_holds(f, g).map_err(|x| x.to_string())?, || format!("{name}: strong slope at {f:b},{g:b}"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("P1 family of 28, {} corpus sheaves, {pairs} flat pairs", corpus.len()))
}

fn bundles(_cfg: &Config) -> Check {
    let p1 = Arc::new(crate::trs::Fan::p1(Q::from_integer(1)));
    let p2 = Arc::new(crate::trs::Fan::p2(Q::from_integer(1)));
    let mut count = 0;
    for a in -3..=3 {
        for b in -3..=3 {
            ensure(Trs::line_bundle(p1.clone(), &[a, b]).is_vector_bundle(), || format!("O({a},{b}) rejected"))?;
            ensure(Trs::line_bundle(p2.clone(), &[a, b, a - b]).is_vector_bundle(), || "line bundle on P2 rejected".into())?;
            count += 2;
        }
    }
    let split = corpus::p1_split(2, 0);
    let w = split.vector_bundle_witness().map_err(|e| e.to_string())?;
    ensure(w.iter().all(|c| c.basis == 0b11), || format!("split witness {w:?}"))?;
    let u34 = Arc::new(crate::trs::trivially_valued(&uniform(Idyll::Krasner, 3, 4).unwrap()));
    let chain = |s: Vec<(i64, Mask)>| crate::trs::FlagChain::new(s, 0b1111);
    let bad = Trs::new(p2, u34, vec![chain(vec![(1, 0b0011), (2, 0)]), chain(vec![(1, 0b1100), (2, 0)]), chain(vec![(1, 0)])])
        .map_err(|e| e.to_string())?;
    match bad.vector_bundle_witness() {
        Err(e @ NotBundle::NoAdaptedBasis { .. }) => Ok(format!("{count} line bundles accepted, split witness {{e1,e2}}, counterexample: {e}")),
        other => Err(format!("counterexample not rejected: {other:?}")),
    }
}

fn determinism(cfg: &Config) -> Check {
    use crate::io;
    for (name, m) in corpus::matroids() {
        let text = io::serialize_matroid(&m);
        let back = io::parse_matroid(&text).map_err(|e| format!("{name}: {e}"))?;
        ensure(io::serialize_matroid(&back) == text && back == m, || format!("{name}: matroid round trip"))?;
    }
    for (name, e) in corpus::sheaves() {
        let text = io::serialize_sheaf(&e);
        let back = io::parse_sheaf(&text).map_err(|x| format!("{name}: {x}"))?;
        ensure(io::serialize_sheaf(&back) == text, || format!("{name}: sheaf round trip"))?;
    }
    let m = Arc::new(uniform(Idyll::Sign, 2, 3).unwrap());
    for f in hom_set(&m, &m).unwrap() {
        let text = io::serialize_morphism(&f, None);
        let (g, _) = io::parse_morphism(&text, &m, &m).map_err(|e| e.to_string())?;
        ensure(g == f, || "morphism round trip".into())?;
    }
    // sequential and parallel runs agree byte for byte
    let u = uniform(Idyll::Krasner, 1, 2).unwrap();
    let seq = hall::hall_product_with(&u, &u, cfg.bounds, Exec::Sequential).map_err(|e| e.to_string())?.report();
    let parl = hall::hall_product_with(&u, &u, cfg.bounds, Exec::Parallel).map_err(|e| e.to_string())?.report();
    ensure(seq == parl, || "parallel Hall product differs".into())?;
    let hn: Vec<String> = corpus::sheaves().iter().map(|(_, e)| format!("{:?}", e.hn_filtration())).collect();
    let again: Vec<String> = corpus::sheaves().iter().map(|(_, e)| format!("{:?}", e.hn_filtration())).collect();
    ensure(hn == again, || "HN reports differ between runs".into())?;
    Ok("matroid, sheaf and morphism round trips; sequential and parallel reports agree".into())
}
