//! Exterior powers of rational vector spaces in the standard subset basis.

use super::{QMatrix, Q};

/// All `p`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < p - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if p <= n {
        rec(0, n, p, &mut Vec::with_capacity(p), &mut out);
    }
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// The `p`-th exterior power of a linear map: entry `(I, J)` is the minor `det(M[I, J])`.
pub fn exterior_power(m: &QMatrix, p: usize) -> QMatrix {
    let rows = subsets(m.rows(), p);
    let cols = subsets(m.cols(), p);
    let mut out = QMatrix::zeros(rows.len(), cols.len());
    for (a, ri) in rows.iter().enumerate() {
        let sub = m.select_rows(ri);
        for (b, cj) in cols.iter().enumerate() {
            out[(a, b)] = sub.select_columns(cj).det();
        }
    }
    out
}

/// Coordinates of `v_1 ∧ ... ∧ v_p` for the columns of `vectors`.
pub fn wedge(vectors: &QMatrix) -> Vec<Q> {
    exterior_power(vectors, vectors.cols()).column(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    #[test]
    fn subset_counts() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(2, 3).is_empty());
        assert_eq!(binomial(5, 2), 10);
    }

    #[test]
    fn wedge_of_two_vectors_in_the_plane() {
        let m = QMatrix::from_i64_rows(&[&[1, 1], &[0, 2]]);
        assert_eq!(wedge(&m), vec![q(2)]);
    }

    #[test]
    fn exterior_power_is_functorial() {
        let a = QMatrix::from_i64_rows(&[&[1, 2, 0], &[0, 1, 3], &[1, 0, 1]]);
        let b = QMatrix::from_i64_rows(&[&[2, 0, 1], &[1, 1, 0], &[0, 3, 1]]);
        for p in 0..=3 {
            assert_eq!(exterior_power(&(&a * &b), p), &exterior_power(&a, p) * &exterior_power(&b, p));
        }
    }
}
