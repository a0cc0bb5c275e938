//! Bitmask subsets of `0..n`. Bit `i` stands for the `i`-th non-basepoint
//! element of a ground set.

use std::cmp::Ordering;

pub type Mask = u32;

/// Hard ceiling imposed by the mask width.
pub const MAX_ELEMENTS: usize = 31;

pub fn full(n: usize) -> Mask {
    if n == 0 {
        0
    } else {
        (!0u32) >> (32 - n)
    }
}

pub fn size(m: Mask) -> usize {
    m.count_ones() as usize
}

pub fn contains(m: Mask, i: usize) -> bool {
    m >> i & 1 == 1
}

/// Members in increasing order.
pub fn members(m: Mask) -> Vec<usize> {
    let mut out = Vec::with_capacity(size(m));
    let mut rest = m;
    while rest != 0 {
        out.push(rest.trailing_zeros() as usize);
        rest &= rest - 1;
    }
    out
}

pub fn from_members(items: &[usize]) -> Mask {
    items.iter().fold(0, |m, &i| m | 1 << i)
}

/// Lexicographic comparison of the sorted member tuples.
pub fn lex_cmp(a: Mask, b: Mask) -> Ordering {
    let (mut x, mut y) = (a, b);
    loop {
        match (x == 0, y == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let (i, j) = (x.trailing_zeros(), y.trailing_zeros());
        if i != j {
            return i.cmp(&j);
        }
        x &= x - 1;
        y &= y - 1;
    }
}

/// A mask ordered lexicographically by its sorted members.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Subset(pub Mask);

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        lex_cmp(self.0, other.0)
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All `k`-subsets of `universe`, in lexicographic order.
pub fn k_subsets(universe: Mask, k: usize) -> Vec<Mask> {
    let items = members(universe);
    let mut out = Vec::new();
    if k > items.len() {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().fold(0, |m, &i| m | 1 << items[i]));
        // advance the rightmost index that still has room
        let mut p = k;
        loop {
            if p == 0 {
                return out;
            }
            p -= 1;
            if idx[p] < items.len() - k + p {
                break;
            }
            if p == 0 {
                return out;
            }
        }
        idx[p] += 1;
        for q in p + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// All submasks of `universe`, smallest first by numeric value.
pub fn submasks(universe: Mask) -> Vec<Mask> {
    let mut out = Vec::with_capacity(1 << size(universe));
    let mut s: Mask = 0;
    loop {
        out.push(s);
        if s == universe {
            return out;
        }
        s = (s.wrapping_sub(universe)) & universe;
    }
}

/// Number of members of `m` strictly below `i`.
pub fn rank_below(m: Mask, i: usize) -> usize {
    size(m & ((1u32 << i) - 1))
}

/// Parity of the permutation that sorts the concatenation `(a, b)` of two
/// sorted disjoint tuples: the number of pairs with the `a` member larger.
pub fn merge_parity(a: Mask, b: Mask) -> bool {
    let mut count = 0;
    for i in members(a) {
        count += rank_below(b, i);
    }
    count % 2 == 1
}

/// Parity of the permutation sorting `items` (which must be distinct).
pub fn sort_parity(items: &[usize]) -> bool {
    let mut inv = 0;
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            if items[i] > items[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 1
}

/// Image of a mask under an element map.
/// For each element, its position inside `b` (`usize::MAX` if absent).
pub fn positions(b: Mask) -> Vec<usize> {
    let mut pos = vec![usize::MAX; MAX_ELEMENTS];
    for (k, e) in members(b).into_iter().enumerate() {
        pos[e] = k;
    }
    pos
}

pub fn map_mask(m: Mask, f: impl Fn(usize) -> usize) -> Mask {
    members(m).into_iter().fold(0, |acc, i| acc | 1 << f(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_subsets_are_lex_sorted_and_complete() {
        let subs = k_subsets(full(5), 3);
        assert_eq!(subs.len(), 10);
        for w in subs.windows(2) {
            assert_eq!(lex_cmp(w[0], w[1]), Ordering::Less);
        }
        assert_eq!(k_subsets(full(3), 0), vec![0]);
        assert!(k_subsets(full(2), 3).is_empty());
        assert_eq!(k_subsets(0b1010, 1), vec![0b10, 0b1000]);
    }

    #[test]
    fn submask_count() {
        assert_eq!(submasks(0b1011).len(), 8);
        assert_eq!(submasks(0), vec![0]);
    }

    #[test]
    fn parities() {
        assert!(!merge_parity(0b001, 0b110));
        assert!(merge_parity(0b010, 0b001));
        assert!(sort_parity(&[1, 0]));
        assert!(!sort_parity(&[2, 0, 1]));
    }
}
