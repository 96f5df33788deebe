//! Graded rings `ℚ[x]/(M + Circ)` presented by linear forms and polynomial
//! generators, their Hilbert functions, volume cogenerators and Lefschetz maps.

mod cogenerators;
mod lefschetz;

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::Result;
use crate::exact::lattice::int_vec_to_rat;
use crate::exact::matrix::rref_in_place;
use crate::exact::poly::monomials_of_degree;
use crate::exact::{Int, MultiPoly, Rat};
use crate::fans::{stanley_reisner_ideal, triangulation_from_theta};
use crate::gale::GaleDualPair;
use crate::par;

pub use cogenerators::{
    annihilator_verify, catalecticant_ranks, lawrence_double_cogenerators, pullback_cogenerators,
    volume_cogenerators, volume_cogenerators_seeded, AnnihilatorReport, CogeneratorSet,
};
pub use lefschetz::{
    g_vector, g_vector_macaulay_check, is_macaulay_sequence, is_level, lefschetz_injectivity, lefschetz_random,
    macaulay_upper, LefschetzReport,
};

type Exponent = Vec<u32>;

/// `ℚ[x_0..x_{n−1}] / (linear forms + generators)`, all variables of degree 1.
#[derive(Debug, Clone, PartialEq)]
pub struct RingPresentation {
    nvars: usize,
    linear: Vec<Vec<Rat>>,
    generators: Vec<MultiPoly>,
    /// Supports of the generators, when they are square-free monomials.
    monomials: Option<Vec<Vec<usize>>>,
}

impl RingPresentation {
    pub fn new(nvars: usize, linear: Vec<Vec<Rat>>, generators: Vec<MultiPoly>) -> Self {
        let monomials = generators
            .iter()
            .map(squarefree_support)
            .collect::<Option<Vec<_>>>();
        RingPresentation {
            nvars,
            linear,
            generators,
            monomials,
        }
    }

    pub fn from_monomials(nvars: usize, linear: Vec<Vec<Rat>>, supports: &[Vec<usize>]) -> Self {
        let gens = supports
            .iter()
            .map(|s| MultiPoly::squarefree(nvars, s))
            .collect();
        Self::new(nvars, linear, gens)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn linear_forms(&self) -> &[Vec<Rat>] {
        &self.linear
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    pub fn monomial_supports(&self) -> Option<&[Vec<usize>]> {
        self.monomials.as_deref()
    }

    /// The same ring with one more linear relation.
    pub fn with_linear(&self, form: Vec<Rat>) -> Self {
        let mut p = self.clone();
        p.linear.push(form);
        p
    }

    /// Every generator, linear forms first, as a constant-coefficient operator.
    pub fn operators(&self) -> Vec<MultiPoly> {
        self.linear
            .iter()
            .map(|l| MultiPoly::linear(l))
            .chain(self.generators.iter().cloned())
            .collect()
    }

    pub fn quotient(&self, up_to: usize) -> GradedQuotient {
        GradedQuotient::new(self, up_to)
    }

    pub fn hilbert_function(&self, up_to: usize) -> Vec<usize> {
        self.quotient(up_to).dims()
    }
}

fn squarefree_support(p: &MultiPoly) -> Option<Vec<usize>> {
    if p.len() != 1 {
        return None;
    }
    let (e, c) = p.terms().next()?;
    (c.is_one() && e.iter().all(|&k| k <= 1))
        .then(|| (0..e.len()).filter(|&i| e[i] == 1).collect())
}

/// `Circ(𝒜)` from the columns of `B` and the circuits of the row matroid of `B`.
/// With `B` empty the ideal is zero.
pub fn build_presentation(pair: &GaleDualPair) -> Result<RingPresentation> {
    if pair.corank() == 0 {
        return Ok(RingPresentation::new(pair.n(), Vec::new(), Vec::new()));
    }
    pair.check_loop_free()?;
    let linear = pair.b().columns().iter().map(|c| int_vec_to_rat(c)).collect();
    let circuits = pair.b_matroid().circuits().to_vec();
    Ok(RingPresentation::from_monomials(pair.n(), linear, &circuits))
}

/// The Lawrence presentation at `θ` with `w_i ↦ −z_i` substituted: the
/// Stanley–Reisner generators of `Σ_θ(𝒜^±)` pushed into `n` variables, with `Circ(𝒜)`.
pub fn collapsed_lawrence_presentation(
    pair: &GaleDualPair,
    theta: &[Int],
) -> Result<RingPresentation> {
    pair.check_loop_free()?;
    let n = pair.n();
    let t = triangulation_from_theta(&pair.lawrence(), theta)?;
    let gens = stanley_reisner_ideal(&t)
        .into_iter()
        .map(|s| {
            let mut e = vec![0u32; n];
            let mut neg = false;
            for i in s {
                e[i % n] += 1;
                neg ^= i >= n;
            }
            let c = if neg { -Rat::one() } else { Rat::one() };
            MultiPoly::monomial(e, c)
        })
        .collect();
    let linear = pair.b().columns().iter().map(|c| int_vec_to_rat(c)).collect();
    Ok(RingPresentation::new(n, linear, gens))
}

/// Per-degree row-reduced ideal spans after eliminating the linear forms.
#[derive(Debug, Clone)]
pub struct GradedQuotient {
    nvars: usize,
    /// Variable `x_i` as a linear form in the surviving variables.
    substitution: Vec<MultiPoly>,
    free: Vec<usize>,
    degrees: Vec<DegreePiece>,
}

#[derive(Debug, Clone)]
struct DegreePiece {
    monomials: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
    rows: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
    basis: Vec<usize>,
}

impl DegreePiece {
    fn reduce(&self, v: &mut [Rat]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
    }
}

impl GradedQuotient {
    fn new(p: &RingPresentation, up_to: usize) -> Self {
        let n = p.nvars;
        let mut lin = p.linear.clone();
        let pivots = rref_in_place(&mut lin, n);
        let free: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();
        let m = free.len();
        let mut substitution: Vec<MultiPoly> = (0..n).map(|_| MultiPoly::zero(m)).collect();
        for (k, &f) in free.iter().enumerate() {
            substitution[f] = MultiPoly::var(m, k);
        }
        for (row, &pv) in lin.iter().zip(&pivots) {
            let coeffs: Vec<Rat> = free.iter().map(|&f| -row[f].clone()).collect();
            substitution[pv] = MultiPoly::linear(&coeffs);
        }
        let gens: Vec<MultiPoly> = p
            .generators
            .iter()
            .map(|g| g.compose(&substitution).expect("n forms"))
            .collect();
        let degs: Vec<usize> = (0..=up_to).collect();
        let degrees = par::map(&degs, |&j| degree_piece(&gens, m, j));
        GradedQuotient {
            nvars: n,
            substitution,
            free,
            degrees,
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.basis.len()).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.len() - 1
    }

    /// Surviving variables after eliminating the linear forms.
    pub fn free_variables(&self) -> &[usize] {
        &self.free
    }

    /// Basis monomials of degree `j`, as exponents in all `n` variables.
    pub fn basis(&self, j: usize) -> Vec<Exponent> {
        let d = &self.degrees[j];
        d.basis
            .iter()
            .map(|&c| {
                let mut e = vec![0; self.nvars];
                for (k, &f) in self.free.iter().enumerate() {
                    e[f] = d.monomials[c][k];
                }
                e
            })
            .collect()
    }

    /// Rank of the ideal in degree `j`, in the reduced variables.
    pub fn ideal_rank(&self, j: usize) -> usize {
        self.degrees[j].pivots.len()
    }

    /// Coordinates of a homogeneous degree-`j` polynomial (in all `n` variables)
    /// on the quotient basis.
    pub fn coordinates(&self, p: &MultiPoly, j: usize) -> Vec<Rat> {
        let q = p.compose(&self.substitution).expect("n forms");
        self.reduced_coordinates(&q, j)
    }

    fn reduced_coordinates(&self, q: &MultiPoly, j: usize) -> Vec<Rat> {
        let d = &self.degrees[j];
        let mut v = vec![Rat::zero(); d.monomials.len()];
        for (e, c) in q.terms() {
            if let Some(&i) = d.index.get(e) {
                v[i] += c;
            }
        }
        d.reduce(&mut v);
        d.basis.iter().map(|&c| v[c].clone()).collect()
    }

    /// Matrix (rows = target coordinates) of multiplication by a polynomial
    /// of degree `k` from degree `j` to `j + k`.
    pub fn multiplication_matrix(&self, f: &MultiPoly, j: usize) -> Vec<Vec<Rat>> {
        let k = f.degree().unwrap_or(0) as usize;
        let fr = f.compose(&self.substitution).expect("n forms");
        let src = &self.degrees[j];
        let cols: Vec<Vec<Rat>> = src
            .basis
            .iter()
            .map(|&c| {
                let mono = MultiPoly::monomial(src.monomials[c].clone(), Rat::one());
                self.reduced_coordinates(&fr.mul(&mono).expect("same vars"), j + k)
            })
            .collect();
        let rows = self.degrees[j + k].basis.len();
        (0..rows)
            .map(|r| cols.iter().map(|c| c[r].clone()).collect())
            .collect()
    }

    /// The two ideals agree in every degree up to the common bound.
    pub fn same_ideal(&self, other: &GradedQuotient) -> bool {
        if self.free != other.free || self.substitution != other.substitution {
            return false;
        }
        self.degrees.iter().zip(&other.degrees).all(|(a, b)| {
            a.pivots.len() == b.pivots.len()
                && b.rows.iter().all(|r| {
                    let mut v = r.clone();
                    a.reduce(&mut v);
                    v.iter().all(|x| x.is_zero())
                })
        })
    }
}

fn degree_piece(gens: &[MultiPoly], m: usize, j: usize) -> DegreePiece {
    let monomials = monomials_of_degree(m, j as u32);
    let index: HashMap<Exponent, usize> = monomials
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), i))
        .collect();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        // generators stay homogeneous under a linear substitution
        let dg = g.degree().unwrap_or(0) as usize;
        if dg > j {
            continue;
        }
        for mu in monomials_of_degree(m, (j - dg) as u32) {
            let mut v = vec![Rat::zero(); monomials.len()];
            for (e, c) in g.terms() {
                let prod: Exponent = e.iter().zip(&mu).map(|(a, b)| a + b).collect();
                v[index[&prod]] += c;
            }
            rows.push(v);
        }
    }
    let pivots = rref_in_place(&mut rows, monomials.len());
    rows.truncate(pivots.len());
    let basis = (0..monomials.len()).filter(|c| !pivots.contains(c)).collect();
    DegreePiece {
        monomials,
        index,
        rows,
        pivots,
        basis,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::IntMatrix;
    use crate::quiver::Quiver;

    #[test]
    fn cycle_presentation() {
        for n in 2..6 {
            let pair = Quiver::cycle(n).gale_pair().unwrap();
            let p = build_presentation(&pair).unwrap();
            assert_eq!(p.linear_forms().len(), 1);
            assert_eq!(p.monomial_supports().unwrap().len(), n * (n - 1) / 2);
            assert_eq!(p.hilbert_function(2), vec![1, n - 1, 0]);
        }
    }

    #[test]
    fn k23_presentation_shape() {
        let p = build_presentation(&Quiver::k23().gale_pair().unwrap()).unwrap();
        let sizes: Vec<usize> = p.monomial_supports().unwrap().iter().map(|s| s.len()).collect();
        assert_eq!(sizes.iter().filter(|&&s| s == 2).count(), 3);
        assert_eq!(sizes.iter().filter(|&&s| s == 3).count(), 8);
        assert_eq!(p.hilbert_function(3), vec![1, 4, 7, 0]);
    }

    #[test]
    fn zero_ideal_is_the_polynomial_ring() {
        let p = RingPresentation::new(2, Vec::new(), Vec::new());
        assert_eq!(p.hilbert_function(3), vec![1, 2, 3, 4]);
    }

    #[test]
    fn loops_are_rejected() {
        let pair = GaleDualPair::from_matrix(IntMatrix::from_i64_rows(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(build_presentation(&pair).unwrap().hilbert_function(2), vec![1, 2, 3]);
        let pair = GaleDualPair::from_matrix(IntMatrix::from_i64_rows(&[&[1, 1, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(
            build_presentation(&pair).unwrap_err(),
            crate::Error::LoopPresent(2)
        );
    }

    #[test]
    fn collapsed_lawrence_matches_on_k23() {
        let pair = Quiver::k23().gale_pair().unwrap();
        let base = build_presentation(&pair).unwrap().quotient(3);
        let theta: Vec<Int> = [-3, 2, 2, 2].iter().map(|&x| Int::from(x)).collect();
        let c = collapsed_lawrence_presentation(&pair, &theta).unwrap().quotient(3);
        assert_eq!(c.dims(), vec![1, 4, 7, 0]);
        assert!(c.same_ideal(&base));
    }
}
