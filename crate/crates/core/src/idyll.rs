//! Idylls: a unit group with zero, a negation, and a null set of formal sums.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_rational::Rational64;
use thiserror::Error;

/// Exact rationals, used for tropical values, degrees and slopes.
pub type Q = Rational64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdyllError {
    #[error("element {elem} does not belong to idyll {idyll}")]
    OwnerMismatch { idyll: String, elem: String },
    #[error("null-set query of size {size} exceeds the declared bound {bound} of idyll {idyll}")]
    BeyondBound { idyll: String, size: usize, bound: usize },
    #[error("invalid idyll table {name}: {reason}")]
    InvalidTable { name: String, reason: String },
    #[error("invalid homomorphism {from} -> {to}: {reason}")]
    InvalidHom { from: String, to: String, reason: String },
    #[error("unknown idyll {0}")]
    Unknown(String),
}

/// A value of some idyll. Which variants are legal depends on the idyll:
/// Krasner uses `One`, sign and regular use `Pos`/`Neg`, tropical uses
/// `Trop`, table idylls use `Unit(index)` with index 0 the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Zero,
    One,
    Pos,
    Neg,
    Trop(Q),
    Unit(u16),
}

impl Elem {
    pub fn is_zero(&self) -> bool {
        matches!(self, Elem::Zero)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Zero => write!(f, "0"),
            Elem::One | Elem::Pos => write!(f, "1"),
            Elem::Neg => write!(f, "-1"),
            Elem::Trop(q) => write!(f, "{q}"),
            Elem::Unit(i) => write!(f, "u{i}"),
        }
    }
}

/// A finite idyll given by tables. Units are indexed `0..order` with 0 the
/// identity; null multisets are listed exhaustively up to `bound`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TableIdyll {
    name: String,
    mul: Vec<Vec<u16>>,
    neg: Vec<u16>,
    bound: usize,
    null: BTreeSet<Vec<u16>>,
    /// For prime fields: the characteristic and the residue of each unit.
    residues: Option<(u64, Vec<u64>)>,
}

impl TableIdyll {
    /// Builds the table by evaluating `is_null` on every sorted multiset of
    /// size `1..=bound`, then validates the axioms.
    pub fn from_predicate(
        name: &str,
        mul: Vec<Vec<u16>>,
        neg: Vec<u16>,
        bound: usize,
        is_null: impl Fn(&[u16]) -> bool,
    ) -> Result<Self, IdyllError> {
        let order = neg.len();
        let mut null = BTreeSet::new();
        for size in 1..=bound {
            for ms in multisets(order, size) {
                if is_null(&ms) {
                    null.insert(ms);
                }
            }
        }
        let t = TableIdyll { name: name.to_string(), mul, neg, bound, null, residues: None };
        t.validate()?;
        Ok(t)
    }

    /// The prime field `F_p` as an idyll: unit index `i` is the residue
    /// `g^i` for a fixed generator `g`, null iff the residues sum to zero.
    pub fn prime_field(p: u64, bound: usize) -> Result<Self, IdyllError> {
        let order = (p - 1) as usize;
        let g = (2..p.max(3))
            .find(|&g| (1..order as u64).all(|e| pow_mod(g, e, p) != 1))
            .unwrap_or(1);
        let residue: Vec<u64> = (0..order).map(|i| pow_mod(g, i as u64, p)).collect();
        let index_of = |r: u64| residue.iter().position(|&x| x == r % p).unwrap() as u16;
        let mul = (0..order)
            .map(|i| (0..order).map(|j| ((i + j) % order) as u16).collect())
            .collect();
        let neg = residue.iter().map(|&r| index_of(p - r)).collect();
        let mut t = Self::from_predicate(&format!("F{p}"), mul, neg, bound, |ms| {
            ms.iter().map(|&i| residue[i as usize]).sum::<u64>() % p == 0
        })?;
        t.residues = Some((p, residue));
        Ok(t)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.neg.len()
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    fn validate(&self) -> Result<(), IdyllError> {
        let n = self.order();
        let bad = |reason: &str| {
            Err(IdyllError::InvalidTable { name: self.name.clone(), reason: reason.to_string() })
        };
        if n == 0 || self.mul.len() != n || self.mul.iter().any(|r| r.len() != n) {
            return bad("multiplication table has the wrong shape");
        }
        if self.mul.iter().flatten().chain(self.neg.iter()).any(|&x| x as usize >= n) {
            return bad("table entry out of range");
        }
        for a in 0..n {
            if self.mul[0][a] as usize != a {
                return bad("index 0 is not the identity");
            }
            if !(0..n).any(|b| self.mul[a][b] == 0) {
                return bad("missing inverse");
            }
            for b in 0..n {
                if self.mul[a][b] != self.mul[b][a] {
                    return bad("multiplication is not commutative");
                }
                for c in 0..n {
                    let l = self.mul[self.mul[a][b] as usize][c];
                    let r = self.mul[a][self.mul[b][c] as usize];
                    if l != r {
                        return bad("multiplication is not associative");
                    }
                }
            }
        }
        if self.bound < 2 {
            return bad("bound must be at least 2");
        }
        for a in 0..n as u16 {
            if self.neg[self.neg[a as usize] as usize] != a {
                return bad("negation is not an involution");
            }
            let partners: Vec<u16> = (0..n as u16)
                .filter(|&b| self.null.contains(&sorted(vec![a, b])))
                .collect();
            if partners != vec![self.neg[a as usize]] {
                return bad("{a, -a} is not the unique null pair");
            }
        }
        for ms in &self.null {
            for a in 0..n {
                let scaled = sorted(ms.iter().map(|&x| self.mul[a][x as usize]).collect());
                if !self.null.contains(&scaled) {
                    return bad("null set is not closed under scaling");
                }
            }
        }
        Ok(())
    }
}

fn pow_mod(b: u64, e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    for _ in 0..e {
        r = r * b % m;
    }
    r
}

fn sorted(mut v: Vec<u16>) -> Vec<u16> {
    v.sort_unstable();
    v
}

/// Sorted multisets of size `size` over `0..order`.
fn multisets(order: usize, size: usize) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(start: u16, order: u16, left: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for x in start..order {
            cur.push(x);
            rec(x, order, left - 1, cur, out);
            cur.pop();
        }
    }
    rec(0, order as u16, size, &mut cur, &mut out);
    out
}

/// An idyll.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Idyll {
    Krasner,
    Sign,
    Regular,
    Tropical,
    Table(Arc<TableIdyll>),
}

impl fmt::Display for Idyll {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl Idyll {
    /// Built-in table idylls by name: `F2`, `F3`, `F5`.
    pub fn table_by_name(name: &str) -> Result<Idyll, IdyllError> {
        let p = match name {
            "F2" => 2,
            "F3" => 3,
            "F5" => 5,
            _ => return Err(IdyllError::Unknown(format!("FT:{name}"))),
        };
        Ok(Idyll::Table(Arc::new(TableIdyll::prime_field(p, 6)?)))
    }

    pub fn name(&self) -> String {
        match self {
            Idyll::Krasner => "K".into(),
            Idyll::Sign => "S".into(),
            Idyll::Regular => "F1pm".into(),
            Idyll::Tropical => "T".into(),
            Idyll::Table(t) => format!("FT:{}", t.name),
        }
    }

    pub fn zero(&self) -> Elem {
        Elem::Zero
    }

    pub fn one(&self) -> Elem {
        match self {
            Idyll::Krasner => Elem::One,
            Idyll::Sign | Idyll::Regular => Elem::Pos,
            Idyll::Tropical => Elem::Trop(Q::from_integer(0)),
            Idyll::Table(_) => Elem::Unit(0),
        }
    }

    pub fn minus_one(&self) -> Elem {
        self.neg_raw(&self.one())
    }

    /// Whether the element is zero or a unit of this idyll.
    pub fn contains(&self, a: &Elem) -> bool {
        match (self, a) {
            (_, Elem::Zero) => true,
            (Idyll::Krasner, Elem::One) => true,
            (Idyll::Sign | Idyll::Regular, Elem::Pos | Elem::Neg) => true,
            (Idyll::Tropical, Elem::Trop(_)) => true,
            (Idyll::Table(t), Elem::Unit(i)) => (*i as usize) < t.order(),
            _ => false,
        }
    }

    fn check(&self, a: &Elem) -> Result<(), IdyllError> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(IdyllError::OwnerMismatch { idyll: self.name(), elem: format!("{a:?}") })
        }
    }

    /// Whether the unit group is finite.
    pub fn is_finite(&self) -> bool {
        !matches!(self, Idyll::Tropical)
    }

    /// All units, for finite idylls; identity first.
    pub fn units(&self) -> Option<Vec<Elem>> {
        match self {
            Idyll::Krasner => Some(vec![Elem::One]),
            Idyll::Sign | Idyll::Regular => Some(vec![Elem::Pos, Elem::Neg]),
            Idyll::Tropical => None,
            Idyll::Table(t) => Some((0..t.order() as u16).map(Elem::Unit).collect()),
        }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Result<Elem, IdyllError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_raw(a, b))
    }

    /// Multiplication without membership checks, for validated values.
    pub fn mul_raw(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Zero, _) | (_, Elem::Zero) => Elem::Zero,
            (Elem::One, Elem::One) => Elem::One,
            (Elem::Pos, x) | (x, Elem::Pos) => x.clone(),
            (Elem::Neg, Elem::Neg) => Elem::Pos,
            (Elem::Trop(x), Elem::Trop(y)) => Elem::Trop(x + y),
            (Elem::Unit(i), Elem::Unit(j)) => match self {
                Idyll::Table(t) => Elem::Unit(t.mul[*i as usize][*j as usize]),
                _ => unreachable!("table unit outside a table idyll"),
            },
            _ => unreachable!("mixed idyll elements {a:?} and {b:?}"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Result<Elem, IdyllError> {
        self.check(a)?;
        Ok(self.neg_raw(a))
    }

    pub fn neg_raw(&self, a: &Elem) -> Elem {
        match a {
            Elem::Pos => Elem::Neg,
            Elem::Neg => Elem::Pos,
            Elem::Unit(i) => match self {
                Idyll::Table(t) => Elem::Unit(t.neg[*i as usize]),
                _ => unreachable!(),
            },
            other => other.clone(),
        }
    }

    /// `a` times `(-1)^odd`.
    pub fn signed(&self, a: &Elem, odd: bool) -> Elem {
        if odd {
            self.neg_raw(a)
        } else {
            a.clone()
        }
    }

    /// Image of an integer, where that makes sense: Krasner keeps only
    /// whether it is zero, sign keeps the sign, the regular partial field
    /// accepts 0 and ±1, prime fields reduce modulo p.
    pub fn from_integer(&self, d: i64) -> Option<Elem> {
        if d == 0 {
            return Some(Elem::Zero);
        }
        match self {
            Idyll::Krasner => Some(Elem::One),
            Idyll::Sign => Some(if d > 0 { Elem::Pos } else { Elem::Neg }),
            Idyll::Regular => match d {
                1 => Some(Elem::Pos),
                -1 => Some(Elem::Neg),
                _ => None,
            },
            Idyll::Tropical => None,
            Idyll::Table(t) => {
                let (p, res) = t.residues.as_ref()?;
                let r = d.rem_euclid(*p as i64) as u64;
                if r == 0 {
                    return Some(Elem::Zero);
                }
                res.iter().position(|&x| x == r).map(|i| Elem::Unit(i as u16))
            }
        }
    }

    /// Multiplicative inverse of a unit. Zero maps to zero.
    pub fn inv(&self, a: &Elem) -> Elem {
        match a {
            Elem::Trop(x) => Elem::Trop(-x),
            Elem::Unit(i) => match self {
                Idyll::Table(t) => {
                    let j = (0..t.order()).find(|&j| t.mul[*i as usize][j] == 0).unwrap();
                    Elem::Unit(j as u16)
                }
                _ => unreachable!(),
            },
            other => other.clone(),
        }
    }

    /// Decides whether the formal sum of `terms` lies in the null set.
    /// Zeros among the terms are ignored.
    pub fn is_null(&self, terms: &[Elem]) -> Result<bool, IdyllError> {
        for t in terms {
            self.check(t)?;
        }
        self.is_null_raw(terms)
    }

    pub(crate) fn is_null_raw(&self, terms: &[Elem]) -> Result<bool, IdyllError> {
        let units = terms.iter().filter(|t| !t.is_zero());
        Ok(match self {
            Idyll::Krasner => units.count() != 1,
            Idyll::Sign | Idyll::Regular => {
                let (mut pos, mut neg) = (0usize, 0usize);
                for u in units {
                    if *u == Elem::Pos {
                        pos += 1
                    } else {
                        neg += 1
                    }
                }
                if *self == Idyll::Sign {
                    (pos == 0) == (neg == 0)
                } else {
                    pos == neg
                }
            }
            Idyll::Tropical => {
                let mut best: Option<&Q> = None;
                let mut ties = 0;
                for u in units {
                    let Elem::Trop(v) = u else { unreachable!() };
                    match best {
                        Some(b) if v > b => {}
                        Some(b) if v == b => ties += 1,
                        _ => {
                            best = Some(v);
                            ties = 1;
                        }
                    }
                }
                best.is_none() || ties >= 2
            }
            Idyll::Table(t) => {
                let mut ms: Vec<u16> = units
                    .map(|u| match u {
                        Elem::Unit(i) => *i,
                        _ => unreachable!(),
                    })
                    .collect();
                if ms.is_empty() {
                    return Ok(true);
                }
                if ms.len() > t.bound {
                    return Err(IdyllError::BeyondBound {
                        idyll: self.name(),
                        size: ms.len(),
                        bound: t.bound,
                    });
                }
                ms.sort_unstable();
                t.null.contains(&ms)
            }
        })
    }
}

/// A multiset of nonzero elements of one idyll.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalSum {
    owner: Idyll,
    terms: Vec<Elem>,
}

impl FormalSum {
    pub fn new(owner: Idyll) -> Self {
        FormalSum { owner, terms: Vec::new() }
    }

    /// Adds a term; zeros are dropped.
    pub fn push(&mut self, a: Elem) -> Result<(), IdyllError> {
        self.owner.check(&a)?;
        if !a.is_zero() {
            self.terms.push(a);
        }
        Ok(())
    }

    pub fn terms(&self) -> &[Elem] {
        &self.terms
    }

    pub fn is_null(&self) -> Result<bool, IdyllError> {
        self.owner.is_null_raw(&self.terms)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum HomKind {
    Identity,
    ToKrasner,
    /// From the regular partial field: ±1 go to ±1 of the target.
    FromRegular,
    /// Table-to-anything: image of each unit index.
    Images(Vec<Elem>),
}

/// A homomorphism of idylls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdyllHom {
    source: Idyll,
    target: Idyll,
    kind: HomKind,
}

impl IdyllHom {
    pub fn identity(idyll: Idyll) -> Self {
        IdyllHom { source: idyll.clone(), target: idyll, kind: HomKind::Identity }
    }

    /// Every unit goes to 1.
    pub fn to_krasner(source: Idyll) -> Self {
        IdyllHom { source, target: Idyll::Krasner, kind: HomKind::ToKrasner }
    }

    /// The canonical map out of the regular partial field.
    pub fn from_regular(target: Idyll) -> Self {
        IdyllHom { source: Idyll::Regular, target, kind: HomKind::FromRegular }
    }

    /// The canonical inclusion of the regular partial field into the sign
    /// hyperfield.
    pub fn regular_to_sign() -> Self {
        Self::from_regular(Idyll::Sign)
    }

    /// A map out of a table idyll given by the images of its units.
    /// Checks multiplicativity and null preservation up to size 4.
    pub fn from_table(source: Idyll, target: Idyll, images: Vec<Elem>) -> Result<Self, IdyllError> {
        let Idyll::Table(t) = &source else {
            return Err(IdyllError::InvalidHom {
                from: source.name(),
                to: target.name(),
                reason: "source is not a table idyll".into(),
            });
        };
        let bad = |reason: &str| IdyllError::InvalidHom {
            from: source.name(),
            to: target.name(),
            reason: reason.into(),
        };
        if images.len() != t.order() || images.iter().any(|e| e.is_zero() || !target.contains(e)) {
            return Err(bad("images must be units of the target"));
        }
        for i in 0..t.order() {
            for j in 0..t.order() {
                let prod = &images[t.mul[i][j] as usize];
                if *prod != target.mul_raw(&images[i], &images[j]) {
                    return Err(bad("not multiplicative"));
                }
            }
        }
        let hom = IdyllHom { source: source.clone(), target: target.clone(), kind: HomKind::Images(images) };
        hom.check_null_preservation(4).map_err(|_| bad("does not preserve the null set"))?;
        Ok(hom)
    }

    pub fn source(&self) -> &Idyll {
        &self.source
    }

    pub fn target(&self) -> &Idyll {
        &self.target
    }

    pub fn apply(&self, a: &Elem) -> Result<Elem, IdyllError> {
        self.source.check(a)?;
        if a.is_zero() {
            return Ok(Elem::Zero);
        }
        Ok(match &self.kind {
            HomKind::Identity => a.clone(),
            HomKind::ToKrasner => Elem::One,
            HomKind::FromRegular => {
                if *a == Elem::Pos {
                    self.target.one()
                } else {
                    self.target.minus_one()
                }
            }
            HomKind::Images(img) => match a {
                Elem::Unit(i) => img[*i as usize].clone(),
                _ => unreachable!(),
            },
        })
    }

    /// Verifies that every null multiset of the (finite) source up to the
    /// given size maps to a null multiset.
    pub fn check_null_preservation(&self, max_size: usize) -> Result<(), Vec<Elem>> {
        let Some(units) = self.source.units() else { return Ok(()) };
        for size in 0..=max_size {
            for ms in multisets(units.len(), size) {
                let terms: Vec<Elem> = ms.iter().map(|&i| units[i as usize].clone()).collect();
                if self.source.is_null_raw(&terms) == Ok(true) {
                    let image: Vec<Elem> = terms.iter().map(|t| self.apply(t).unwrap()).collect();
                    if self.target.is_null_raw(&image) != Ok(true) {
                        return Err(terms);
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(x: i64) -> Elem {
        Elem::Trop(Q::from_integer(x))
    }

    #[test]
    fn multiplication() {
        assert_eq!(Idyll::Tropical.mul(&t(2), &t(3)).unwrap(), t(5));
        assert_eq!(Idyll::Sign.mul(&Elem::Neg, &Elem::Neg).unwrap(), Elem::Pos);
        assert_eq!(Idyll::Krasner.mul(&Elem::One, &Elem::Zero).unwrap(), Elem::Zero);
        assert!(Idyll::Krasner.mul(&Elem::Pos, &Elem::One).is_err());
    }

    #[test]
    fn negation() {
        assert_eq!(Idyll::Sign.neg(&Elem::Pos).unwrap(), Elem::Neg);
        assert_eq!(Idyll::Tropical.neg(&t(3)).unwrap(), t(3));
        assert_eq!(Idyll::Krasner.neg(&Elem::One).unwrap(), Elem::One);
        assert_eq!(Idyll::Sign.neg(&Elem::Zero).unwrap(), Elem::Zero);
    }

    #[test]
    fn null_rules() {
        let k = Idyll::Krasner;
        assert!(k.is_null(&[Elem::One, Elem::One]).unwrap());
        assert!(!k.is_null(&[Elem::One]).unwrap());
        assert!(k.is_null(&[]).unwrap());
        assert!(k.is_null(&[Elem::Zero]).unwrap());
        let tr = Idyll::Tropical;
        assert!(tr.is_null(&[t(3), t(3), t(1)]).is_ok_and(|b| !b));
        assert!(tr.is_null(&[t(1), t(3), t(1)]).unwrap());
        assert!(!tr.is_null(&[t(3), t(1)]).unwrap());
        let r = Idyll::Regular;
        assert!(r.is_null(&[Elem::Pos, Elem::Neg, Elem::Pos, Elem::Neg]).unwrap());
        assert!(!r.is_null(&[Elem::Pos, Elem::Pos, Elem::Neg]).unwrap());
        let s = Idyll::Sign;
        assert!(s.is_null(&[Elem::Pos, Elem::Pos, Elem::Neg]).unwrap());
        assert!(!s.is_null(&[Elem::Pos, Elem::Pos]).unwrap());
    }

    #[test]
    fn max_convention_example_under_min_plus() {
        // {3,3,1} with the maximum attained twice corresponds to {-3,-3,-1}
        // with the minimum attained twice.
        assert!(Idyll::Tropical.is_null(&[t(-3), t(-3), t(-1)]).unwrap());
        assert!(!Idyll::Tropical.is_null(&[t(-3), t(-1)]).unwrap());
    }

    #[test]
    fn homs() {
        assert_eq!(IdyllHom::to_krasner(Idyll::Tropical).apply(&t(7)).unwrap(), Elem::One);
        assert_eq!(IdyllHom::to_krasner(Idyll::Sign).apply(&Elem::Neg).unwrap(), Elem::One);
        let inc = IdyllHom::regular_to_sign();
        assert_eq!(inc.apply(&Elem::Neg).unwrap(), Elem::Neg);
        assert!(inc.check_null_preservation(4).is_ok());
        assert!(IdyllHom::to_krasner(Idyll::Regular).check_null_preservation(4).is_ok());
        assert!(IdyllHom::from_regular(Idyll::table_by_name("F3").unwrap())
            .check_null_preservation(4)
            .is_ok());
        assert!(inc.apply(&Elem::One).is_err());
    }

    #[test]
    fn prime_fields_are_valid_and_bounded() {
        for name in ["F2", "F3", "F5"] {
            let f = Idyll::table_by_name(name).unwrap();
            let units = f.units().unwrap();
            for u in &units {
                assert!(f.is_null(&[u.clone(), f.neg(u).unwrap()]).unwrap());
            }
            let long = vec![f.one(); 7];
            assert!(matches!(f.is_null(&long), Err(IdyllError::BeyondBound { .. })));
        }
        let f3 = Idyll::table_by_name("F3").unwrap();
        assert!(f3.is_null(&[f3.one(), f3.one(), f3.one()]).unwrap());
        assert!(!f3.is_null(&[f3.one(), f3.one()]).unwrap());
    }

    #[test]
    fn table_to_krasner_hom() {
        let f3 = Idyll::table_by_name("F3").unwrap();
        assert!(IdyllHom::from_table(f3.clone(), Idyll::Krasner, vec![Elem::One, Elem::One]).is_ok());
        // F3 -> S sending -1 to +1 is not multiplicative-compatible with nulls
        assert!(IdyllHom::from_table(f3, Idyll::Sign, vec![Elem::Pos, Elem::Pos]).is_err());
    }

    #[test]
    fn invalid_tables_rejected() {
        let r = TableIdyll::from_predicate("bad", vec![vec![0, 1], vec![1, 0]], vec![0, 1], 4, |_| false);
        assert!(r.is_err());
    }
}
