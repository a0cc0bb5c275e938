use crate::subset::{self, Mask};

/// The underlying ordinary matroid, as a list of bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classical {
    n: usize,
    rank: usize,
    bases: Vec<Mask>,
}

impl Classical {
    pub fn new(n: usize, rank: usize, bases: Vec<Mask>) -> Self {
        Classical { n, rank, bases }
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

    pub fn bases(&self) -> &[Mask] {
        &self.bases
    }

    pub fn all(&self) -> Mask {
        subset::full(self.n)
    }

    pub fn rank_of(&self, m: Mask) -> usize {
        self.bases.iter().map(|b| subset::size(b & m)).max().unwrap_or(0)
    }

    pub fn is_independent(&self, m: Mask) -> bool {
        self.bases.iter().any(|b| b & m == m)
    }

    /// Closure by adding rank-preserving elements until nothing changes.
    pub fn closure(&self, m: Mask) -> Mask {
        let mut cur = m;
        let r = self.rank_of(m);
        loop {
            let mut next = cur;
            for e in subset::members(self.all() & !cur) {
                if self.rank_of(cur | 1 << e) == r {
                    next |= 1 << e;
                }
            }
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    pub fn is_flat(&self, m: Mask) -> bool {
        self.closure(m) == m
    }

    pub fn loops(&self) -> Mask {
        self.closure(0)
    }

    /// Greedy independent set inside `within`, extending `start` (assumed
    /// independent). Returns the added elements. In increasing element order
    /// this yields the lexicographically least choice.
    pub fn greedy_extend(&self, start: Mask, within: Mask) -> Mask {
        let mut cur = start;
        for e in subset::members(within & !start) {
            if self.is_independent(cur | 1 << e) {
                cur |= 1 << e;
            }
        }
        cur & !start
    }

    /// Lexicographically least basis of the restriction to `a`.
    pub fn least_basis_of(&self, a: Mask) -> Mask {
        self.greedy_extend(0, a)
    }

    /// Lexicographically least basis, inside `a`, of the contraction by the
    /// complement of `a`.
    pub fn least_cobasis_in(&self, a: Mask) -> Mask {
        let outside = self.least_basis_of(self.all() & !a);
        self.greedy_extend(outside, a)
    }

    /// All bases of the restriction to `a`.
    pub fn bases_of_restriction(&self, a: Mask) -> Vec<Mask> {
        let r = self.rank_of(a);
        let mut out: Vec<Mask> = self.bases.iter().map(|b| b & a).filter(|m| subset::size(*m) == r).collect();
        out.sort_by(|x, y| subset::lex_cmp(*x, *y));
        out.dedup();
        out
    }

    /// All sets `b ⊆ a` that are bases of the contraction by the complement
    /// of `a`.
    pub fn bases_of_contraction_in(&self, a: Mask) -> Vec<Mask> {
        let outside = self.all() & !a;
        let r = self.rank_of(outside);
        let mut out: Vec<Mask> = self
            .bases
            .iter()
            .filter(|b| subset::size(*b & outside) == r)
            .map(|b| b & a)
            .collect();
        out.sort_by(|x, y| subset::lex_cmp(*x, *y));
        out.dedup();
        out
    }

    /// Parallel classes of non-loops, each listed as a mask, ordered by
    /// least member.
    pub fn parallel_classes(&self) -> Vec<Mask> {
        let loops = self.loops();
        let mut seen = loops;
        let mut out = Vec::new();
        for e in 0..self.n {
            if subset::contains(seen, e) {
                continue;
            }
            let class = self.closure(1 << e) & !loops;
            seen |= class;
            out.push(class);
        }
        out
    }

    pub fn is_simple(&self) -> bool {
        self.loops() == 0 && self.parallel_classes().iter().all(|c| subset::size(*c) == 1)
    }
}
