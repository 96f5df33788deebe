//! Minimal generators of the semigroup `ℕ^n ∩ ker_Z(A) = ℕ^n ∩ im(B)`.

use std::collections::HashSet;

use crate::exact::IntMatrix;
use crate::gale::GaleDualPair;
use num_traits::ToPrimitive;

/// Hilbert basis of `{x ∈ ℕ^n : Ax = 0}` by the Contejean–Devie completion:
/// a partial vector `x` is only extended by `e_j` when `⟨Ax, a_j⟩ < 0`, and
/// vectors dominating a known solution are discarded.
pub fn hilbert_basis_of_kernel(a: &IntMatrix) -> Vec<Vec<i64>> {
    let d = a.rows();
    let n = a.cols();
    let cols: Vec<Vec<i64>> = (0..n)
        .map(|j| {
            a.column(j)
                .iter()
                .map(|x| x.to_i64().expect("small entries"))
                .collect()
        })
        .collect();
    let image = |x: &[i64]| -> Vec<i64> {
        (0..d)
            .map(|r| (0..n).map(|j| cols[j][r] * x[j]).sum())
            .collect()
    };
    let mut solutions: Vec<Vec<i64>> = Vec::new();
    let mut level: Vec<Vec<i64>> = (0..n)
        .map(|j| {
            let mut e = vec![0; n];
            e[j] = 1;
            e
        })
        .collect();
    while !level.is_empty() {
        let mut pending = Vec::new();
        for x in level {
            if image(&x).iter().all(|&v| v == 0) {
                solutions.push(x);
            } else {
                pending.push(x);
            }
        }
        let mut next: HashSet<Vec<i64>> = HashSet::new();
        for x in &pending {
            let ax = image(x);
            for j in 0..n {
                let ip: i64 = ax.iter().zip(&cols[j]).map(|(p, q)| p * q).sum();
                if ip >= 0 {
                    continue;
                }
                let mut y = x.clone();
                y[j] += 1;
                if solutions.iter().any(|s| s.iter().zip(&y).all(|(p, q)| p <= q)) {
                    continue;
                }
                next.insert(y);
            }
        }
        level = next.into_iter().collect();
        level.sort();
    }
    solutions.sort_by(|x, y| {
        let dx: i64 = x.iter().sum();
        let dy: i64 = y.iter().sum();
        dx.cmp(&dy).then_with(|| y.cmp(x))
    });
    solutions
}

/// Degree-zero generators for the pair, i.e. the Hilbert basis of `ℕ^n ∩ im(B)`.
pub fn hilbert_basis_deg0(pair: &GaleDualPair) -> Vec<Vec<i64>> {
    hilbert_basis_of_kernel(pair.a())
}

/// No element is the sum of two nonzero semigroup elements below it.
pub fn is_irreducible_set(basis: &[Vec<i64>]) -> bool {
    basis.iter().all(|x| {
        !basis
            .iter()
            .any(|y| y != x && y.iter().zip(x).all(|(p, q)| p <= q))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_ones_row() {
        let a = IntMatrix::from_i64_rows(&[&[1, 1, -1, -1]]);
        let hb = hilbert_basis_of_kernel(&a);
        assert_eq!(hb.len(), 4);
        assert!(hb.iter().all(|x| x.iter().sum::<i64>() == 2));
    }

    #[test]
    fn pointed_cone_has_no_generators() {
        let a = IntMatrix::from_i64_rows(&[&[1, 2, 1]]);
        assert!(hilbert_basis_of_kernel(&a).is_empty());
    }

    #[test]
    fn non_unimodular_example() {
        // x + y = 2z: generators (2,0,1), (0,2,1), (1,1,1)
        let a = IntMatrix::from_i64_rows(&[&[1, 1, -2]]);
        let hb = hilbert_basis_of_kernel(&a);
        assert_eq!(hb, vec![vec![2, 0, 1], vec![1, 1, 1], vec![0, 2, 1]]);
        assert!(is_irreducible_set(&hb));
    }
}
