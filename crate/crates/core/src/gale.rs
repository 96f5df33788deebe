//! Gale dual pairs `(A, B)` with `A·B = 0` and `im B = ker_Z A`.

use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::lattice::{gcd_of_maximal_minors, integer_solve, kernel_lattice_basis};
use crate::exact::matrix::{inverse, rank};
use crate::exact::{clear_denominators, rat_from_int, subsets_of_size, Int, IntMatrix, Rat};
use crate::matroid::LinearMatroid;

#[derive(Debug, Clone)]
pub struct GaleDualPair {
    a: IntMatrix,
    b: IntMatrix,
    a_matroid: OnceLock<LinearMatroid>,
    b_matroid: OnceLock<LinearMatroid>,
}

impl GaleDualPair {
    /// Computes the canonical saturated kernel basis of `a`.
    pub fn from_matrix(a: IntMatrix) -> Result<Self> {
        let b = kernel_lattice_basis(&a)?;
        Ok(Self::unchecked(a, b))
    }

    /// Accepts a user-supplied `B` after checking it is a lattice basis of `ker A`.
    pub fn from_pair(a: IntMatrix, b: IntMatrix) -> Result<Self> {
        let (d, n) = (a.rows(), a.cols());
        if b.rows() != n {
            return Err(Error::DimensionMismatch(format!(
                "B has {} rows, A has {n} columns",
                b.rows()
            )));
        }
        let r = a.rank();
        if r < d {
            return Err(Error::NotFullRank { rank: r, rows: d });
        }
        if b.cols() != n - d || !a.mul(&b)?.is_zero() {
            return Err(Error::DimensionMismatch("B is not a kernel basis of A".into()));
        }
        if b.cols() > 0 {
            let g = gcd_of_maximal_minors(&b.transpose())?;
            if !g.is_one() {
                return Err(Error::NonPrimitive(g.to_string()));
            }
        }
        Ok(Self::unchecked(a, b))
    }

    fn unchecked(a: IntMatrix, b: IntMatrix) -> Self {
        GaleDualPair {
            a,
            b,
            a_matroid: OnceLock::new(),
            b_matroid: OnceLock::new(),
        }
    }

    pub fn a(&self) -> &IntMatrix {
        &self.a
    }

    pub fn b(&self) -> &IntMatrix {
        &self.b
    }

    pub fn d(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    /// `n − d`, the dimension of the arrangement side.
    pub fn corank(&self) -> usize {
        self.b.cols()
    }

    /// Row vectors `b_i` of `B`.
    pub fn b_vectors(&self) -> Vec<Vec<Int>> {
        self.b.to_rows()
    }

    /// Matroid on the columns `a_i` of `A`.
    pub fn a_matroid(&self) -> &LinearMatroid {
        self.a_matroid
            .get_or_init(|| LinearMatroid::from_columns(self.a.clone()))
    }

    /// Matroid on the rows `b_i` of `B`.
    pub fn b_matroid(&self) -> &LinearMatroid {
        self.b_matroid
            .get_or_init(|| LinearMatroid::from_rows(&self.b))
    }

    /// Rejects zero rows of `B` (loops of the row matroid, i.e. `a_i` spanning a coloop).
    pub fn check_loop_free(&self) -> Result<()> {
        match (0..self.n()).find(|&i| self.b.row(i).iter().all(|x| x.is_zero())) {
            Some(i) => Err(Error::LoopPresent(i)),
            None => Ok(()),
        }
    }

    /// Indices with `a_i = 0`.
    pub fn zero_columns(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.a.is_column_zero(i)).collect()
    }

    /// The pair `([A, −A], Λ^T)` with `Λ = [[I, I], [0, B^T]]`.
    pub fn lawrence(&self) -> GaleDualPair {
        let (n, k) = (self.n(), self.corank());
        let a_pm = lawrence_configuration(&self.a);
        let mut bl = IntMatrix::zeros(2 * n, n + k);
        for i in 0..n {
            bl.set(i, i, Int::one());
            bl.set(n + i, i, Int::one());
            for j in 0..k {
                bl.set(n + i, n + j, self.b.get(i, j).clone());
            }
        }
        Self::unchecked(a_pm, bl)
    }

    /// The `(2n − d) × 2n` Lawrence lifting `Λ(ℬ)`.
    pub fn lawrence_lifting(&self) -> IntMatrix {
        self.lawrence().b.transpose()
    }

    /// Integer `ψ` with `Aψ = −θ`: supported on the lexicographically first
    /// column basis when that gives an integer vector, otherwise any integer solution.
    pub fn psi_from_theta(&self, theta: &[Int]) -> Result<Vec<Int>> {
        let (d, n) = (self.d(), self.n());
        if theta.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "theta has {} entries, expected {d}",
                theta.len()
            )));
        }
        let neg: Vec<Int> = theta.iter().map(|t| -t.clone()).collect();
        let basis = subsets_of_size(n, d)
            .into_iter()
            .find(|c| rank(&self.a.select_columns(c).to_rat()) == d);
        if let Some(c) = basis {
            let inv = inverse(&self.a.select_columns(&c).to_rat()).expect("basis");
            let sol = inv.mul_vec(&neg.iter().map(rat_from_int).collect::<Vec<Rat>>());
            if sol.iter().all(|x| x.is_integer()) {
                let mut psi = vec![Int::zero(); n];
                for (k, &j) in c.iter().enumerate() {
                    psi[j] = sol[k].to_integer();
                }
                return Ok(psi);
            }
        }
        integer_solve(&self.a, &neg).ok_or_else(|| {
            Error::DimensionMismatch("theta is not in the lattice spanned by A".into())
        })
    }
}

/// `[A, −A]`.
pub fn lawrence_configuration(a: &IntMatrix) -> IntMatrix {
    a.hconcat(&a.map(|x| -x.clone())).expect("same rows")
}

/// Primitive integer vector on the ray of a rational vector.
pub fn primitive(v: &[Rat]) -> Vec<Int> {
    let ints = clear_denominators(v);
    let g = ints
        .iter()
        .fold(Int::zero(), |g, x| num_integer::Integer::gcd(&g, x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}
