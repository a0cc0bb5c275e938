use super::*;
use crate::idyll::Q;
use crate::matroid::{graphic, uniform};

fn arc(m: FMatroid) -> Arc<FMatroid> {
    Arc::new(m)
}

fn small_corpus() -> Vec<FMatroid> {
    let mut out = vec![];
    for idyll in [Idyll::Krasner, Idyll::Sign, Idyll::Regular] {
        for n in 0..=3 {
            for r in 0..=n {
                out.push(uniform(idyll.clone(), r, n).unwrap());
            }
        }
    }
    out.push(graphic(Idyll::Regular, 4, &[(0, 1), (1, 2), (2, 3), (3, 0)], &["a", "b", "c", "d"]).unwrap());
    out.push(graphic(Idyll::Regular, 3, &[(0, 1), (1, 2), (2, 0), (0, 1)], &["a", "b", "c", "d"]).unwrap());
    out
}

/// The criterion over every tuple, repeats and basepoint entries included.
fn brute_is_morphism(f: &SubmonomialMap) -> bool {
    let (src, tgt) = (f.source(), f.target());
    let (m, n) = (src.rank(), tgt.rank());
    if src.is_empty() || tgt.is_empty() || n == 0 {
        return true;
    }
    let idyll = f.idyll();
    // index 0 is the basepoint, i >= 1 is element i-1
    let tuples = |len: usize, size: usize| -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out.into_iter().flat_map(|p| (0..=size).map(move |e| [p.clone(), vec![e]].concat())).collect();
        }
        out
    };
    let val = |mat: &FMatroid, t: &[usize]| -> Elem {
        if t.contains(&0) {
            Elem::Zero
        } else {
            mat.tuple_value(&t.iter().map(|e| e - 1).collect::<Vec<_>>())
        }
    };
    for x in tuples(m + 1, src.len()) {
        for y in tuples(n - 1, tgt.len()) {
            let mut terms = vec![];
            for k in 0..=m {
                if x[k] == 0 {
                    continue;
                }
                let Some((j, c)) = &f.assignment()[x[k] - 1] else { continue };
                let mut hat = x.clone();
                hat.remove(k);
                let mut with = vec![j + 1];
                with.extend(&y);
                let v = idyll.mul_raw(&idyll.mul_raw(&val(src, &hat), c), &val(tgt, &with));
                terms.push(idyll.signed(&v, k % 2 == 1));
            }
            if !idyll.is_null(&terms).unwrap() {
                return false;
            }
        }
    }
    true
}

#[test]
fn reduced_criterion_matches_full_tuples() {
    let u22 = arc(uniform(Idyll::Sign, 2, 2).unwrap());
    let u23 = arc(uniform(Idyll::Sign, 2, 3).unwrap());
    let u13 = arc(uniform(Idyll::Sign, 1, 3).unwrap());
    let units = Idyll::Sign.units().unwrap();
    for (s, t) in [(&u23, &u23), (&u22, &u23), (&u23, &u13), (&u13, &u22)] {
        for a in partial_injections(s.len(), t.len(), &units) {
            let f = SubmonomialMap::new(s.clone(), t.clone(), a).unwrap();
            assert_eq!(f.is_morphism(), brute_is_morphism(&f), "{f:?}");
            assert_eq!(f.check_vectors(10_000), Some(f.is_morphism()), "{f:?}");
        }
    }
}

#[test]
fn restrictions_and_contractions_are_morphisms() {
    for m in small_corpus() {
        let m = arc(m);
        for a in subset::submasks(m.ground().all()) {
            let r = SubmonomialMap::restriction(m.clone(), a);
            let c = SubmonomialMap::contraction(m.clone(), a);
            assert!(r.is_morphism() && r.is_mono());
            assert!(c.is_morphism() && c.is_epi());
            assert_eq!(r.check_vectors(100_000), Some(true));
            assert_eq!(c.check_vectors(100_000), Some(true));
            assert!(c.kernel(Mode::General).unwrap().same_matrix(&SubmonomialMap::restriction(m.clone(), a)));
            assert!(r.cokernel(Mode::General).same_matrix(&SubmonomialMap::contraction(m.clone(), a)));
        }
        assert!(SubmonomialMap::identity(m.clone()).is_isomorphism());
    }
}

#[test]
fn isomorphism_examples() {
    let s = arc(uniform(Idyll::Sign, 2, 3).unwrap());
    assert!(SubmonomialMap::scaling(s.clone(), Elem::Neg).is_isomorphism());
    let t = arc(uniform(Idyll::Tropical, 2, 3).unwrap());
    assert!(SubmonomialMap::scaling(t.clone(), Elem::Trop(Q::from_integer(3))).is_isomorphism());
    let u23 = arc(uniform(Idyll::Krasner, 2, 3).unwrap());
    let u13 = arc(uniform(Idyll::Krasner, 1, 3).unwrap());
    let one = Elem::One;
    let f = SubmonomialMap::new(u23, u13, (0..3).map(|i| Some((i, one.clone()))).collect()).unwrap();
    assert!(!f.is_isomorphism());
}

#[test]
fn transpose_and_compose() {
    for m in small_corpus() {
        let m = arc(m);
        let all = m.ground().all();
        for a in subset::submasks(all) {
            let c = SubmonomialMap::contraction(m.clone(), a);
            let t = c.transpose();
            assert!(t.is_morphism());
            // transpose of c_A is the restriction of the dual to the complement
            let r = SubmonomialMap::restriction(Arc::new(m.dual()), all & !a);
            assert!(t.same_matrix(&r));
            assert!(t.source().projective_equal(r.source()));
            let tt = t.transpose();
            assert!(tt.same_matrix(&c) && tt.source().projective_equal(c.source()));
            assert_eq!(c.is_admissible_epi(Mode::General), t.is_admissible_mono(Mode::General));
        }
        // restriction chains compose to the restriction of the smaller set
        if m.len() >= 2 {
            let big = SubmonomialMap::restriction(m.clone(), 0b11);
            let small = SubmonomialMap::restriction(big.source().clone(), 0b01);
            let comp = big.compose(&small).unwrap();
            assert!(comp.same_matrix(&SubmonomialMap::restriction(m.clone(), 0b01)));
            let id = SubmonomialMap::identity(m.clone());
            assert!(id.compose(&big).unwrap().same_matrix(&big));
        }
    }
}

#[test]
fn mono_epi_zero() {
    let m = arc(uniform(Idyll::Krasner, 2, 3).unwrap());
    let zero = arc(FMatroid::zero(Idyll::Krasner));
    assert!(SubmonomialMap::zero(m.clone(), zero.clone()).is_epi());
    assert!(SubmonomialMap::zero(zero.clone(), m.clone()).is_mono());
    assert!(SubmonomialMap::zero(m.clone(), zero.clone()).is_morphism());
    let id = SubmonomialMap::identity(m.clone());
    let k = id.kernel(Mode::General).unwrap();
    assert_eq!(k.source().len(), 0);
}

#[test]
fn factorization_examples() {
    let m = arc(graphic(Idyll::Regular, 4, &[(0, 1), (1, 2), (2, 3), (3, 0)], &["a", "b", "c", "d"]).unwrap());
    let c = SubmonomialMap::contraction(m.clone(), 0b0011);
    let f = c.factor_admissible(Mode::General).unwrap();
    assert_eq!((f.kind, f.witness), (AdmissibleKind::Epi, 0b0011));
    assert!(f.iso.same_matrix(&SubmonomialMap::identity(c.target().clone())));
    let r = SubmonomialMap::restriction(m.clone(), 0b0111);
    let g = r.compose(&SubmonomialMap::scaling(r.source().clone(), Elem::Neg)).unwrap();
    let f = g.factor_admissible(Mode::General).unwrap();
    assert_eq!((f.kind, f.witness), (AdmissibleKind::Mono, 0b0111));
    assert!(f.iso.same_matrix(&SubmonomialMap::scaling(r.source().clone(), Elem::Neg)));
    // {a,b,c} spans C4, so it is not a flat
    assert_eq!(g.factor_admissible(Mode::Simple).unwrap_err(), NotAdmissible::NotFlat(0b0111));
    let u22 = arc(uniform(Idyll::Regular, 2, 2).unwrap());
    let h = SubmonomialMap::new(u22.clone(), u22, vec![Some((0, Elem::Pos)), None]).unwrap();
    assert!(h.is_morphism());
    assert_eq!(h.factor_admissible(Mode::General).unwrap_err(), NotAdmissible::Neither);
}

fn krasner_tests() -> Vec<Arc<FMatroid>> {
    let mut out = vec![arc(FMatroid::zero(Idyll::Krasner))];
    for n in 1..=3 {
        for r in 0..=n {
            out.push(arc(uniform(Idyll::Krasner, r, n).unwrap()));
        }
    }
    out
}

#[test]
fn lemma_square_is_bicartesian() {
    let n = arc(uniform(Idyll::Krasner, 2, 3).unwrap());
    let a = n.classical().closure(0b011);
    let top = SubmonomialMap::restriction(n.clone(), a);
    let left = SubmonomialMap::contraction(top.source().clone(), 0b001);
    let sq = complete_span(&top, &left, Mode::General).unwrap();
    assert!(sq.commutes());
    let tests = krasner_tests();
    assert_eq!(is_cartesian(&sq, &tests), Some(true));
    assert_eq!(is_cocartesian(&sq, &tests), Some(true));
    let back = complete_cospan(&sq.bottom, &sq.right, Mode::General).unwrap();
    assert_eq!(back.top.source().ground(), sq.top.source().ground());
}

#[test]
fn completions_match_the_construction() {
    let n = arc(graphic(Idyll::Krasner, 3, &[(0, 1), (1, 2), (2, 0), (0, 1)], &["a", "b", "c", "d"]).unwrap());
    let tests = krasner_tests();
    for a in subset::submasks(n.ground().all()) {
        let j = SubmonomialMap::contraction(n.clone(), a);
        let r = j.target().clone();
        for b in subset::submasks(r.ground().all()) {
            let i = SubmonomialMap::restriction(r.clone(), b);
            let sq = complete_cospan(&i, &j, Mode::General).unwrap();
            assert!(sq.commutes());
            assert!(sq.is_admissible(Mode::General));
            assert_eq!(sq.top.image_mask(), j.preimage(b) | a);
            if n.len() - a.count_ones() as usize + b.count_ones() as usize <= 4 {
                assert_eq!(is_cartesian(&sq, &tests), Some(true), "a={a:b} b={b:b}");
                assert_eq!(is_cocartesian(&sq, &tests), Some(true), "a={a:b} b={b:b}");
            }
            // completing the span again recovers R
            let sp = complete_span(&sq.top, &sq.left, Mode::General).unwrap();
            assert!(sp.commutes());
            assert!(sp.right.same_matrix(&j));
            assert!(sp.opposite().projective_equal(&r));
        }
    }
    let e = SubmonomialMap::identity(n.clone());
    let sq = complete_cospan(&e, &e, Mode::General).unwrap();
    assert!(sq.top.same_matrix(&e) && sq.left.same_matrix(&e));
}

#[test]
fn cartesian_iff_cocartesian_on_generated_squares() {
    let tests = krasner_tests();
    let n = arc(uniform(Idyll::Krasner, 2, 3).unwrap());
    let all = n.ground().all();
    for a in subset::submasks(all) {
        for b in subset::submasks(a) {
            let top = SubmonomialMap::restriction(n.clone(), a);
            let pos = positions(a);
            let b_in = subset::members(b).into_iter().fold(0, |m, e| m | 1 << pos[e]);
            let left = SubmonomialMap::contraction(top.source().clone(), b_in);
            let sq = complete_span(&top, &left, Mode::General).unwrap();
            assert_eq!(is_cartesian(&sq, &tests), is_cocartesian(&sq, &tests));
            // a commuting square of admissibles with the wrong corner
            let wrong = Square {
                top: SubmonomialMap::zero(arc(FMatroid::zero(Idyll::Krasner)), n.clone()),
                left: SubmonomialMap::zero(arc(FMatroid::zero(Idyll::Krasner)), sq.left.target().clone()),
                right: sq.right.clone(),
                bottom: sq.bottom.clone(),
            };
            assert!(wrong.commutes());
            assert_eq!(is_cartesian(&wrong, &tests), is_cocartesian(&wrong, &tests));
        }
    }
}

#[test]
fn kernel_universal_property() {
    let tests = krasner_tests();
    let m = arc(uniform(Idyll::Krasner, 2, 3).unwrap());
    let targets = krasner_tests();
    for t in &targets {
        for f in hom_set(&m, t).unwrap() {
            let k = f.kernel(Mode::General).unwrap();
            for s in &tests {
                for g in hom_set(s, &m).unwrap() {
                    if !f.compose(&g).unwrap().is_zero_map() {
                        continue;
                    }
                    let through: Vec<_> = hom_set(s, k.source())
                        .unwrap()
                        .into_iter()
                        .filter(|h| k.compose(h).unwrap().same_matrix(&g))
                        .collect();
                    assert_eq!(through.len(), 1);
                }
            }
        }
    }
}

#[test]
fn simple_mode_kernels_and_cokernels_use_flats() {
    let m = arc(uniform(Idyll::Krasner, 2, 4).unwrap());
    let r = SubmonomialMap::restriction(m.clone(), 0b0011);
    assert_eq!(r.cokernel(Mode::Simple).kernel_mask(), 0b1111);
    assert_eq!(r.cokernel(Mode::General).kernel_mask(), 0b0011);
    let u23 = arc(uniform(Idyll::Krasner, 2, 3).unwrap());
    let s = subobject_sum(&u23, 0b001, 0b010, Mode::Simple);
    assert_eq!(s.image_mask(), 0b111);
    assert_eq!(subobject_sum(&u23, 0b001, 0b011, Mode::General).image_mask(), 0b011);
    let i = subobject_intersection(&u23, 0b001, 0b010);
    assert_eq!(i.source().rank(), 0);
}

#[test]
fn direct_sum_battery() {
    let corpus: Vec<Arc<FMatroid>> = small_corpus().into_iter().filter(|m| m.len() <= 2).map(Arc::new).collect();
    for m in &corpus {
        for n in &corpus {
            if m.idyll() != n.idyll() {
                continue;
            }
            for r in &corpus {
                if r.idyll() == m.idyll() && m.len() + n.len() + r.len() <= 5 {
                    assert_eq!(hom_pair_injective(m, n, r), Some(true));
                }
            }
            // the sum of the sequences M|A ↣ M ↠ M/A is exact
            let (a, b) = (m.ground().all() & 1, n.ground().all() & 1);
            let i = sum_of_maps(&SubmonomialMap::restriction(m.clone(), a), &SubmonomialMap::restriction(n.clone(), b)).unwrap();
            let p = sum_of_maps(&SubmonomialMap::contraction(m.clone(), a), &SubmonomialMap::contraction(n.clone(), b)).unwrap();
            assert!(i.is_admissible_mono(Mode::General) && p.is_admissible_epi(Mode::General));
            assert!(p.compose(&i).unwrap().is_zero_map());
            assert!(p.kernel(Mode::General).unwrap().same_matrix(&SubmonomialMap::restriction(p.source().clone(), i.image_mask())));
        }
    }
}

#[test]
fn sections_give_unique_splitting_isos() {
    for x in small_corpus().into_iter().filter(|m| m.len() <= 3) {
        let x = arc(x);
        for a in subset::submasks(x.ground().all()) {
            let i = SubmonomialMap::restriction(x.clone(), a);
            let p = SubmonomialMap::contraction(x.clone(), a);
            let id = SubmonomialMap::identity(p.target().clone());
            let Some(homs) = hom_set(p.target(), &x) else { continue };
            for s in homs.into_iter().filter(|s| p.compose(s).unwrap().same_matrix(&id)) {
                let phi = splitting_iso(&i, &s).unwrap();
                assert!(phi.is_isomorphism(), "{x:?} a={a:b}");
                assert!(s.same_matrix(&SubmonomialMap::restriction(x.clone(), x.ground().all() & !a)));
            }
        }
    }
}

#[test]
fn combinatorial_splitting() {
    let m1 = arc(uniform(Idyll::Sign, 1, 2).unwrap());
    let m2 = arc(uniform(Idyll::Sign, 2, 3).unwrap());
    let s = arc(m1.direct_sum(&m2).unwrap());
    for w in subset::submasks(s.ground().all()) {
        let g = SubmonomialMap::restriction(s.clone(), w);
        let (i1, i2, f) = combinatorial_split(&g, &m1, &m2).unwrap();
        assert!(f.is_isomorphism());
        assert!(sum_of_maps(&i1, &i2).unwrap().compose(&f).unwrap().same_matrix(&g));
    }
}

#[test]
fn duality_flips_admissibles_and_squares() {
    let n = arc(graphic(Idyll::Regular, 3, &[(0, 1), (1, 2), (2, 0)], &["a", "b", "c"]).unwrap());
    let top = SubmonomialMap::restriction(n.clone(), 0b011);
    let left = SubmonomialMap::contraction(top.source().clone(), 0b01);
    let sq = complete_span(&top, &left, Mode::General).unwrap();
    let d = sq.dual();
    assert!(d.commutes());
    assert!(d.is_admissible(Mode::General));
}

#[test]
fn isomorphisms_preserve_minors() {
    let m = arc(graphic(Idyll::Regular, 4, &[(0, 1), (1, 2), (2, 3), (3, 0)], &["a", "b", "c", "d"]).unwrap());
    // rotate the cycle and flip one sign
    let order = [1, 2, 3, 0];
    let n = arc(m.reorder(&order));
    let units = Idyll::Regular.units().unwrap();
    let isos: Vec<_> = partial_injections(4, 4, &units)
        .into_iter()
        .map(|a| SubmonomialMap::trusted(m.clone(), n.clone(), a))
        .filter(|f| f.is_mono() && f.is_epi() && f.is_isomorphism())
        .collect();
    assert!(!isos.is_empty());
    for alpha in isos.iter().take(8) {
        for s in subset::submasks(m.ground().all()) {
            let c = SubmonomialMap::contraction(m.clone(), s).factor_through_contraction(0);
            let lhs = c.target();
            let rhs = n.contract_mask(alpha.image_of(s));
            assert_eq!(lhs.rank(), rhs.rank());
            let induced = alpha.corestrict(n.ground().all());
            let q = SubmonomialMap::contraction(n.clone(), alpha.image_of(s)).compose(&induced).unwrap();
            let fac = q.factor_epi(Mode::General).unwrap();
            assert_eq!(fac.witness, s);
        }
    }
}
