//! Constructors for common matroids.

use std::collections::BTreeMap;

use crate::idyll::Idyll;
use crate::subset::{self, Subset};

use super::{Candidate, FMatroid, GroundSet, MatroidError};

/// `U_{r,n}` on `*, e1..en` with every basis valued 1. Over the sign
/// hyperfield this is the alternating oriented matroid.
pub fn uniform(idyll: Idyll, r: usize, n: usize) -> Result<FMatroid, MatroidError> {
    if r > n {
        return Err(MatroidError::RankTooLarge { rank: r, n });
    }
    let mut c = Candidate::new(idyll.clone(), GroundSet::standard(n), r);
    for b in subset::k_subsets(subset::full(n), r) {
        c.values.insert(Subset(b), idyll.one());
    }
    FMatroid::new_with_limits(c, subset::MAX_ELEMENTS, subset::MAX_ELEMENTS)
}

/// Maximal minors of an integer matrix with one column per element, mapped
/// into the idyll. Rows must be independent over the rationals.
pub fn from_integer_matrix(idyll: Idyll, labels: &[&str], rows: &[Vec<i64>]) -> Result<FMatroid, MatroidError> {
    let ground = GroundSet::new("*", labels)?;
    let r = rows.len();
    let n = labels.len();
    let mut values = BTreeMap::new();
    for cols in subset::k_subsets(subset::full(n), r) {
        let idx = subset::members(cols);
        let minor: Vec<Vec<i64>> = rows.iter().map(|row| idx.iter().map(|&j| row[j]).collect()).collect();
        let d = determinant(&minor);
        let v = idyll.from_integer(d).ok_or_else(|| {
            MatroidError::Idyll(crate::idyll::IdyllError::OwnerMismatch {
                idyll: idyll.name(),
                elem: format!("integer {d}"),
            })
        })?;
        if !v.is_zero() {
            values.insert(Subset(cols), v);
        }
    }
    let c = Candidate { idyll, ground, rank: r, values };
    FMatroid::new_with_limits(c, subset::MAX_ELEMENTS, subset::MAX_ELEMENTS)
}

/// The matroid of a connected graph on vertices `0..vertices`, one element
/// per directed edge, from the incidence matrix with the last vertex's row
/// removed.
pub fn graphic(idyll: Idyll, vertices: usize, edges: &[(usize, usize)], labels: &[&str]) -> Result<FMatroid, MatroidError> {
    let rows: Vec<Vec<i64>> = (0..vertices - 1)
        .map(|v| {
            edges
                .iter()
                .map(|&(s, t)| if s == v { 1 } else if t == v { -1 } else { 0 })
                .collect()
        })
        .collect();
    from_integer_matrix(idyll, labels, &rows)
}

/// Exact integer determinant by fraction-free elimination.
pub fn determinant(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinants() {
        assert_eq!(determinant(&[vec![1, 2], vec![3, 4]]), -2);
        assert_eq!(determinant(&[vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(determinant(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]), 6);
        assert_eq!(determinant(&[vec![1, 2], vec![2, 4]]), 0);
    }
}
