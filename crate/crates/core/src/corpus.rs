//! The shipped corpus of matroids and sheaves used by `selftest`.

use std::sync::Arc;

use crate::idyll::{Elem, Idyll, IdyllHom, Q};
use crate::matroid::{graphic, uniform, Candidate, FMatroid, GroundSet};
use crate::subset::{self, Mask};
use crate::trs::{trivially_valued, Fan, FlagChain, Trs};

/// `U_{r,n}` over the Krasner hyperfield for `n <= 5`.
pub fn uniform_krasner() -> Vec<(String, FMatroid)> {
    let mut out = Vec::new();
    for n in 0..=5 {
        for r in 0..=n {
            out.push((format!("U{r}{n}"), uniform(Idyll::Krasner, r, n).expect("uniform")));
        }
    }
    out
}

fn cycle(n: usize) -> Vec<(usize, usize)> {
    (0..n).map(|i| (i, (i + 1) % n)).collect()
}

fn path(n: usize) -> Vec<(usize, usize)> {
    (0..n).map(|i| (i, i + 1)).collect()
}

/// Graphic matroids of `C3`, `C4` and the paths with 2 and 3 edges over
/// the regular partial field, and their images in the sign and Krasner
/// hyperfields.
pub fn graphic_family() -> Vec<(String, FMatroid)> {
    let labels = ["a", "b", "c", "d"];
    let graphs = [("C3", 3, cycle(3)), ("C4", 4, cycle(4)), ("P2", 3, path(2)), ("P3", 4, path(3))];
    let mut out = Vec::new();
    for (name, v, edges) in graphs {
        let m = graphic(Idyll::Regular, v, &edges, &labels[..edges.len()]).expect("graphic");
        let s = m.pushforward(&IdyllHom::regular_to_sign()).expect("pushforward");
        let k = m.pushforward(&IdyllHom::to_krasner(Idyll::Regular)).expect("pushforward");
        out.push((format!("{name}/F1pm"), m));
        out.push((format!("{name}/S"), s));
        out.push((format!("{name}/K"), k));
    }
    out
}

fn t(x: i64) -> Elem {
    Elem::Trop(Q::from_integer(x))
}

fn tropical_from(labels: &[&str], rank: usize, values: &[(&[&str], Elem)]) -> FMatroid {
    let mut c = Candidate::new(Idyll::Tropical, GroundSet::new("*", labels).expect("labels"), rank);
    for (s, v) in values {
        c.set(s, v.clone()).expect("subset");
    }
    FMatroid::new(c).expect("valuated matroid")
}

/// Hand-built valuated matroids.
pub fn tropical() -> Vec<(String, FMatroid)> {
    let line = tropical_from(
        &["a", "b", "c", "d"],
        2,
        &[(&["a", "b"], t(0)), (&["a", "c"], t(0)), (&["a", "d"], t(0)), (&["b", "c"], t(0)), (&["b", "d"], t(0)), (&["c", "d"], t(1))],
    );
    let triangle = tropical_from(&["a", "b", "c"], 2, &[(&["a", "b"], t(0)), (&["a", "c"], t(2)), (&["b", "c"], t(-1))]);
    let point = tropical_from(&["a", "b"], 1, &[(&["a"], t(0)), (&["b"], t(5))]);
    let cycle = trivially_valued(&graphic(Idyll::Krasner, 4, &cycle(4), &["a", "b", "c", "d"]).expect("graphic"));
    vec![
        ("line/T".into(), line),
        ("triangle/T".into(), triangle),
        ("point/T".into(), point),
        ("C4/T".into(), cycle),
    ]
}

/// The whole matroid corpus.
pub fn matroids() -> Vec<(String, FMatroid)> {
    let mut out = uniform_krasner();
    out.extend(graphic_family());
    out.extend(tropical());
    out
}

/// The Fano plane over the Krasner hyperfield.
pub fn fano() -> FMatroid {
    let labels = ["a", "b", "c", "d", "e", "f", "g"];
    // lines are the translates of {0, 1, 3} mod 7
    let lines: Vec<Mask> = (0..7).map(|i| subset::from_members(&[i, (i + 1) % 7, (i + 3) % 7])).collect();
    let mut c = Candidate::new(Idyll::Krasner, GroundSet::new("*", &labels).expect("labels"), 3);
    for b in subset::k_subsets(subset::full(7), 3) {
        if !lines.contains(&b) {
            c.values.insert(subset::Subset(b), Elem::One);
        }
    }
    FMatroid::new(c).expect("Fano plane")
}

/// The split sheaf on the projective line of type `(a, b)`, `b <= a`:
/// `{e1}` for `b < j <= a` on the positive ray.
pub fn p1_split(a: i64, b: i64) -> Trs {
    let fan = Arc::new(Fan::p1(Q::from_integer(1)));
    let m = Arc::new(trivially_valued(&uniform(Idyll::Krasner, 2, 2).expect("U22")));
    let plus = FlagChain::new(vec![(b + 1, 0b01), (a + 1, 0)], 0b11);
    let minus = FlagChain::new(vec![(1, 0)], 0b11);
    Trs::new(fan, m, vec![plus, minus]).expect("split sheaf")
}

/// Modular sheaves on both fans with deterministic chains.
pub fn sheaves() -> Vec<(String, Trs)> {
    let mut out = Vec::new();
    for a in -3..=3 {
        for b in -3..=a {
            out.push((format!("P1 split ({a},{b})"), p1_split(a, b)));
        }
    }
    let p2 = Arc::new(Fan::p2(Q::from_integer(1)));
    let u23 = Arc::new(trivially_valued(&uniform(Idyll::Krasner, 2, 3).expect("U23")));
    let u33 = Arc::new(trivially_valued(&uniform(Idyll::Krasner, 3, 3).expect("U33")));
    let fano = Arc::new(trivially_valued(&fano()));
    let chains = |steps: &[&[(i64, Mask)]], all: Mask| -> Vec<FlagChain> {
        steps.iter().map(|s| FlagChain::new(s.to_vec(), all)).collect()
    };
    let sheaf = |m: &Arc<FMatroid>, c: Vec<FlagChain>| Trs::new(p2.clone(), m.clone(), c).expect("corpus sheaf");
    out.push(("P2 U23 tangent-like".into(), sheaf(&u23, chains(&[&[(1, 0b001), (2, 0)], &[(1, 0b010), (2, 0)], &[(1, 0b100), (2, 0)]], 0b111))));
    out.push(("P2 U23 unbalanced".into(), sheaf(&u23, chains(&[&[(0, 0b001), (3, 0)], &[(1, 0)], &[(-1, 0b100), (0, 0)]], 0b111))));
    out.push((
        "P2 U33 flags".into(),
        sheaf(&u33, chains(&[&[(0, 0b011), (1, 0b001), (2, 0)], &[(1, 0b110), (2, 0)], &[(0, 0b100), (4, 0)]], 0b111)),
    ));
    out.push((
        "P2 Fano".into(),
        sheaf(&fano, chains(&[&[(0, 0b0001011), (2, 0b0000001), (3, 0)], &[(1, 0b0000100), (2, 0)], &[(-1, 0b0110001), (1, 0)]], 0b1111111)),
    ));
    for (i, a) in [[0, 0, 0], [1, 0, 0], [2, -1, 3]].iter().enumerate() {
        out.push((format!("P2 line bundle {i}"), Trs::line_bundle(p2.clone(), a)));
    }
    out
}
