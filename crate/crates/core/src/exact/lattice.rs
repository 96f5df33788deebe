//! Hermite normal forms and the saturated integer kernel.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{self, IntMatrix};
use super::{subsets_of_size, Int, Rat};
use crate::error::{Error, Result};

/// Row-style Hermite normal form of the rows of `m`: upper echelon, positive
/// pivots, entries above each pivot reduced into `[0, pivot)`. Zero rows are dropped.
pub fn hermite_rows(m: &IntMatrix) -> IntMatrix {
    let cols = m.cols();
    let mut rows = m.to_rows();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        // gcd-combine everything below r into row r
        loop {
            let nz: Vec<usize> = (r..rows.len()).filter(|&i| !rows[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            rows.swap(r, p);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                let pr = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -x.clone();
            }
        }
        let pr = rows[r].clone();
        for i in 0..r {
            let q = rows[i][c].div_floor(&pr[c]);
            if !q.is_zero() {
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    IntMatrix::from_rows(rows, cols).expect("rectangular")
}

/// Column-style HNF `A·U = [H | 0]` with `U` unimodular. Returns `(H, U)`
/// where `H` has `rank` nonzero columns.
fn column_hermite(a: &IntMatrix) -> (IntMatrix, IntMatrix, usize) {
    let (d, n) = (a.rows(), a.cols());
    // work on columns of the stacked matrix [A; I]
    let mut cols: Vec<Vec<Int>> = (0..n)
        .map(|j| {
            let mut v = a.column(j);
            v.extend((0..n).map(|i| if i == j { Int::one() } else { Int::zero() }));
            v
        })
        .collect();
    let mut c = 0;
    for r in 0..d {
        if c == n {
            break;
        }
        loop {
            let nz: Vec<usize> = (c..n).filter(|&j| !cols[j][r].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&j| cols[j][r].abs()).unwrap();
            cols.swap(c, p);
            let mut done = true;
            for j in c + 1..n {
                if cols[j][r].is_zero() {
                    continue;
                }
                let q = cols[j][r].div_floor(&cols[c][r]);
                let pc = cols[c].clone();
                for (x, y) in cols[j].iter_mut().zip(&pc) {
                    *x -= &q * y;
                }
                if !cols[j][r].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if cols[c][r].is_zero() {
            continue;
        }
        if cols[c][r].is_negative() {
            for x in cols[c].iter_mut() {
                *x = -x.clone();
            }
        }
        c += 1;
    }
    let h = IntMatrix::from_rows(
        (0..d).map(|r| (0..n).map(|j| cols[j][r].clone()).collect()).collect(),
        n,
    )
    .expect("rectangular");
    let u = IntMatrix::from_rows(
        (0..n).map(|r| (0..n).map(|j| cols[j][d + r].clone()).collect()).collect(),
        n,
    )
    .expect("rectangular");
    (h, u, c)
}

/// gcd of all d×d minors, read off the diagonal of the column HNF.
pub fn gcd_of_maximal_minors(a: &IntMatrix) -> Result<Int> {
    let (h, _, rank) = column_hermite(a);
    if rank < a.rows() {
        return Err(Error::NotFullRank {
            rank,
            rows: a.rows(),
        });
    }
    // pivots of a full-rank column echelon form sit in row i of column i
    let mut g = Int::one();
    for i in 0..rank {
        g *= h.get(i, i).abs();
    }
    Ok(g)
}

/// Saturated integer kernel basis, canonicalized by Hermite reduction of `B^T`.
pub fn kernel_lattice_basis(a: &IntMatrix) -> Result<IntMatrix> {
    let (d, n) = (a.rows(), a.cols());
    let (h, u, rank) = column_hermite(a);
    if rank < d {
        return Err(Error::NotFullRank { rank, rows: d });
    }
    let mut g = Int::one();
    for i in 0..rank {
        g *= h.get(i, i).abs();
    }
    if !g.is_one() {
        return Err(Error::NonPrimitive(g.to_string()));
    }
    let kcols: Vec<usize> = (rank..n).collect();
    let b = u.select_columns(&kcols);
    if b.cols() == 0 {
        return Ok(IntMatrix::zeros(n, 0));
    }
    Ok(hermite_rows(&b.transpose()).transpose())
}

/// An integer solution of `A x = b`, if one exists.
pub fn integer_solve(a: &IntMatrix, b: &[Int]) -> Option<Vec<Int>> {
    let (h, u, rank) = column_hermite(a);
    // solve H y = b by forward substitution on the echelon columns
    let mut y = vec![Int::zero(); a.cols()];
    let mut residual: Vec<Int> = b.to_vec();
    let mut r = 0;
    for c in 0..rank {
        while r < a.rows() && h.get(r, c).is_zero() {
            if !residual[r].is_zero() {
                return None;
            }
            r += 1;
        }
        let piv = h.get(r, c);
        let (q, rem) = residual[r].div_rem(piv);
        if !rem.is_zero() {
            return None;
        }
        for i in 0..a.rows() {
            residual[i] -= &q * h.get(i, c);
        }
        y[c] = q;
        r += 1;
    }
    if residual.iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(u.mul_vec(&y))
}

/// All d×d minors in lexicographic order of column subsets.
pub fn maximal_minors(a: &IntMatrix) -> Vec<(Vec<usize>, Int)> {
    subsets_of_size(a.cols(), a.rows())
        .into_iter()
        .map(|s| {
            let det = a.select_columns(&s).det();
            (s, det)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnimodularityReport {
    pub unimodular: bool,
    pub minor_values: Vec<Int>,
    pub b_minors_unit: bool,
}

/// Both unimodularity criteria, asserted to agree.
pub fn is_unimodular(a: &IntMatrix) -> Result<UnimodularityReport> {
    let rank = a.rank();
    if rank < a.rows() {
        return Err(Error::NotFullRank {
            rank,
            rows: a.rows(),
        });
    }
    let mut values: Vec<Int> = maximal_minors(a)
        .into_iter()
        .map(|(_, m)| m.abs())
        .filter(|m| !m.is_zero())
        .collect();
    values.sort();
    values.dedup();
    let a_side = values.len() <= 1;

    // B from the rational kernel, scaled to a primitive lattice basis of the saturation
    let b = saturated_kernel(a);
    let b_side = b.cols() == 0
        || maximal_minors(&b.transpose())
            .iter()
            .all(|(_, m)| m.abs() <= Int::one());
    if a_side != b_side {
        return Err(Error::CriterionMismatch { a_side, b_side });
    }
    Ok(UnimodularityReport {
        unimodular: a_side,
        minor_values: values,
        b_minors_unit: b_side,
    })
}

/// Lattice basis of `ker(A) ∩ Z^n` regardless of whether A's minors are coprime.
pub fn saturated_kernel(a: &IntMatrix) -> IntMatrix {
    let (_, u, rank) = column_hermite(a);
    let kcols: Vec<usize> = (rank..a.cols()).collect();
    let b = u.select_columns(&kcols);
    if b.cols() == 0 {
        return IntMatrix::zeros(a.cols(), 0);
    }
    hermite_rows(&b.transpose()).transpose()
}

/// Rank over the rationals of an integer matrix restricted to a column subset.
pub fn column_rank(a: &IntMatrix, cols: &[usize]) -> usize {
    matrix::rank(&a.select_columns(cols).to_rat())
}

pub fn int_vec_to_rat(v: &[Int]) -> Vec<Rat> {
    v.iter().map(super::rat_from_int).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    #[test]
    fn kernel_of_all_ones_row() {
        let a = IntMatrix::from_i64_rows(&[&[1, 1, 1]]);
        let b = kernel_lattice_basis(&a).unwrap();
        assert_eq!(b.rows(), 3);
        assert_eq!(b.cols(), 2);
        assert!(a.mul(&b).unwrap().is_zero());
        assert_eq!(gcd_of_maximal_minors(&b.transpose()).unwrap(), int(1));
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let a = IntMatrix::identity(3);
        let b = kernel_lattice_basis(&a).unwrap();
        assert_eq!((b.rows(), b.cols()), (3, 0));
    }

    #[test]
    fn non_primitive_and_rank_errors() {
        let a = IntMatrix::from_i64_rows(&[&[2, 4]]);
        assert!(matches!(kernel_lattice_basis(&a), Err(Error::NonPrimitive(_))));
        let a = IntMatrix::from_i64_rows(&[&[1, 1], &[2, 2]]);
        assert!(matches!(kernel_lattice_basis(&a), Err(Error::NotFullRank { .. })));
    }

    #[test]
    fn unimodularity_small_cases() {
        let a = IntMatrix::from_i64_rows(&[&[1, 2]]);
        assert!(!is_unimodular(&a).unwrap().unimodular);
        let a = IntMatrix::from_i64_rows(&[&[1, 1, 1]]);
        assert!(is_unimodular(&a).unwrap().unimodular);
    }

    #[test]
    fn integer_solve_respects_lattice() {
        let a = IntMatrix::from_i64_rows(&[&[2, 0], &[0, 3]]);
        assert!(integer_solve(&a, &[int(1), int(0)]).is_none());
        let x = integer_solve(&a, &[int(4), int(-3)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![int(4), int(-3)]);
    }

    #[test]
    fn hermite_rows_is_canonical() {
        let a = IntMatrix::from_i64_rows(&[&[1, -1, 0], &[0, 1, -1]]);
        let b = IntMatrix::from_i64_rows(&[&[1, 0, -1], &[1, -1, 0]]);
        assert_eq!(hermite_rows(&a), hermite_rows(&b));
    }
}
