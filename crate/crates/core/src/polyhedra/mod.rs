//! Slices `P_θ = {u ≥ 0 : Au = θ}`, affine arrangements `ℋ(B, ψ)`, their
//! bounded complexes, lattice points and volumes.

pub mod arrangement;
pub mod hilbert;
pub mod slice;

use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::matrix::{inverse, rank};
use crate::exact::{binomial, subsets_of_size, IntMatrix, Rat, RatMatrix};
use crate::exact::Int;
use crate::gale::primitive;
use crate::matroid::LinearMatroid;
use crate::par;

pub use arrangement::{AffineArrangement, Cell};
pub use hilbert::hilbert_basis_deg0;
pub use slice::{BoundedComplex, Face, PolyhedronSlice, StarCollapseReport, Vertex};

/// Counts `f_0, f_1, ...` of bounded faces by dimension.
pub type FVector = Vec<usize>;

/// Column bases of a configuration with their inverses, shared between slices
/// at different degrees.
#[derive(Debug, Clone)]
pub struct BasisTable {
    a: IntMatrix,
    entries: Arc<Vec<(Vec<usize>, RatMatrix)>>,
}

impl BasisTable {
    pub fn new(a: &IntMatrix) -> Self {
        let m = LinearMatroid::from_columns(a.clone());
        let bases: Vec<Vec<usize>> = if m.rank() == a.rows() {
            m.bases().to_vec()
        } else {
            Vec::new()
        };
        let entries = par::map(&bases, |c| {
            let inv = inverse(&a.select_columns(c).to_rat()).expect("basis is invertible");
            (c.clone(), inv)
        });
        BasisTable {
            a: a.clone(),
            entries: Arc::new(entries),
        }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(Vec<usize>, RatMatrix)] {
        &self.entries
    }

    /// Bases `C` with `A_C^{-1} θ ≥ 0`, with those coordinates.
    pub fn feasible(&self, theta: &[Rat]) -> Vec<(Vec<usize>, Vec<Rat>)> {
        par::filter_map(&self.entries, |(c, inv)| {
            let lam = inv.mul_vec(theta);
            lam.iter()
                .all(|x| !x.is_negative())
                .then(|| (c.clone(), lam))
        })
    }

    /// Indices into [`entries`](Self::entries) of the feasible bases.
    pub fn fingerprint(&self, theta: &[Rat]) -> Vec<usize> {
        let idx: Vec<usize> = (0..self.entries.len()).collect();
        par::filter_map(&idx, |&i| {
            let lam = self.entries[i].1.mul_vec(theta);
            lam.iter().all(|x| !x.is_negative()).then_some(i)
        })
    }
}

/// `θ` avoids the span of every rank-(d−1) subset of columns.
pub fn is_generic(theta: &[Rat], a: &IntMatrix) -> bool {
    let d = a.rows();
    if theta.len() != d {
        return false;
    }
    if d == 0 {
        return true;
    }
    let ar = a.to_rat();
    let subsets = subsets_of_size(a.cols(), d - 1);
    let bad = par::filter_map(&subsets, |s| {
        let sub = ar.select_columns(s);
        if rank(&sub) < d - 1 {
            return None;
        }
        let col = RatMatrix::from_rows(theta.iter().map(|t| vec![t.clone()]).collect(), 1)
            .expect("column");
        let aug = sub.hconcat(&col).expect("same rows");
        (rank(&aug) < d).then_some(())
    });
    bad.is_empty()
}

/// Deduplicated primitive normals of hyperplanes spanned by `d − 1` independent columns,
/// sign-normalized so the first nonzero entry is positive.
pub fn wall_normals(a: &IntMatrix) -> Vec<Vec<Int>> {
    let d = a.rows();
    if d == 0 {
        return Vec::new();
    }
    let ar = a.to_rat();
    let subsets = subsets_of_size(a.cols(), d - 1);
    let mut normals: Vec<Vec<Int>> = par::filter_map(&subsets, |s| {
        let sub = ar.select_columns(s);
        if rank(&sub) < d - 1 {
            return None;
        }
        let ns = crate::exact::matrix::nullspace(&sub.transpose());
        debug_assert_eq!(ns.len(), 1);
        let mut h = primitive(&ns[0]);
        if let Some(f) = h.iter().find(|x| !x.is_zero()) {
            if f.is_negative() {
                h = h.into_iter().map(|x| -x).collect();
            }
        }
        Some(h)
    });
    normals.sort();
    normals.dedup();
    normals
}

/// `b_k = Σ_{i ≥ k} (−1)^{i−k} C(i, k) f_i`.
pub fn betti_from_bounded_faces(f: &[usize]) -> Result<Vec<i64>> {
    let mut out = Vec::with_capacity(f.len());
    for k in 0..f.len() {
        let mut b = 0i64;
        for (i, &fi) in f.iter().enumerate().skip(k) {
            let s = if (i - k) % 2 == 0 { 1 } else { -1 };
            b += s * binomial(i, k) * fi as i64;
        }
        if b < 0 {
            return Err(Error::NegativeBetti { index: k, value: b });
        }
        out.push(b);
    }
    Ok(out)
}

pub fn euler_characteristic(f: &[usize]) -> i64 {
    f.iter()
        .enumerate()
        .map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_vec;

    #[test]
    fn betti_examples() {
        assert_eq!(betti_from_bounded_faces(&[12, 18, 7]).unwrap(), vec![1, 4, 7]);
        assert_eq!(betti_from_bounded_faces(&[3, 3, 1]).unwrap(), vec![1, 1, 1]);
        assert_eq!(betti_from_bounded_faces(&[1]).unwrap(), vec![1]);
        assert_eq!(
            betti_from_bounded_faces(&[1, 3, 1]),
            Err(Error::NegativeBetti { index: 0, value: -1 })
        );
    }

    #[test]
    fn zero_is_never_generic() {
        let a = IntMatrix::from_i64_rows(&[&[1, 0, 1], &[0, 1, 1]]);
        assert!(!is_generic(&rat_vec(&[0, 0]), &a));
        assert!(!is_generic(&rat_vec(&[1, 0]), &a));
        assert!(is_generic(&rat_vec(&[2, 1]), &a));
    }
}
