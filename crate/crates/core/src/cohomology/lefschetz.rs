use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GradedQuotient, RingPresentation};
use crate::error::{Error, Result};
use crate::exact::matrix::{nullspace, rank_of_rows};
use crate::exact::{binomial, format_rat, MultiPoly, Rat, RatMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct LefschetzReport {
    /// The class `D = Σ D_j x_j` used.
    pub d: Vec<Rat>,
    pub hilbert_function: Vec<usize>,
    /// Rank of `·D : R_{i−1} → R_i` for `1 ≤ i ≤ ⌊r/2⌋`.
    pub ranks: Vec<usize>,
    pub g: Vec<i64>,
    /// Hilbert function of `R/(D)` in degrees `0..=⌊r/2⌋`.
    pub quotient_dims: Vec<usize>,
    pub macaulay: bool,
}

/// `n − d`: the number of independent linear relations.
fn top_degree(p: &RingPresentation) -> usize {
    rank_of_rows(p.linear_forms(), p.nvars())
}

/// Multiplication by `D` is injective `R_{i−1} → R_i` whenever `2i ≤ r`,
/// and `R/(D)` has dimensions `g_i` in that range.
pub fn lefschetz_injectivity(p: &RingPresentation, d: &[Rat]) -> Result<LefschetzReport> {
    let r = top_degree(p);
    let q = p.quotient(r + 1);
    let hf = q.dims();
    let ell = MultiPoly::linear(d);
    if hf.get(1).copied().unwrap_or(0) > 0 && q.coordinates(&ell, 1).iter().all(|x| x.is_zero()) {
        return Err(Error::NonGenericD);
    }
    let half = r / 2;
    let mut ranks = Vec::new();
    for i in 1..=half {
        let m = q.multiplication_matrix(&ell, i - 1);
        let cols = hf[i - 1];
        let rk = rank_of_rows(&m, cols);
        if rk < cols {
            return Err(Error::NotInjective {
                degree: i,
                witness: kernel_witness(&q, &m, i - 1),
            });
        }
        ranks.push(rk);
    }
    let h: Vec<i64> = hf[..=r].iter().map(|&x| x as i64).collect();
    let g = g_vector(&h);
    let quotient_dims = p.with_linear(d.to_vec()).hilbert_function(half);
    if quotient_dims
        .iter()
        .zip(&g)
        .any(|(&a, &b)| a as i64 != b)
    {
        return Err(Error::NotInjective {
            degree: half,
            witness: vec![format!("quotient by D has dims {quotient_dims:?}, g = {g:?}")],
        });
    }
    Ok(LefschetzReport {
        d: d.to_vec(),
        hilbert_function: hf,
        ranks,
        macaulay: is_macaulay_sequence(&g),
        g,
        quotient_dims,
    })
}

/// Draws `D` with small rational coefficients from a seeded stream, redrawing
/// on failure up to a few times.
pub fn lefschetz_random(p: &RingPresentation, seed: u64) -> Result<LefschetzReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = Error::NonGenericD;
    for _ in 0..8 {
        let d: Vec<Rat> = (0..p.nvars())
            .map(|_| Rat::new(rng.gen_range(1i64..=97).into(), rng.gen_range(1i64..=13).into()))
            .collect();
        match lefschetz_injectivity(p, &d) {
            Ok(rep) => return Ok(rep),
            Err(e) => last = e,
        }
    }
    Err(last)
}

fn kernel_witness(q: &GradedQuotient, m: &[Vec<Rat>], j: usize) -> Vec<String> {
    let cols = q.dims()[j];
    let mat = RatMatrix::from_rows(m.to_vec(), cols).expect("rectangular");
    let Some(k) = nullspace(&mat).into_iter().next() else {
        return Vec::new();
    };
    q.basis(j)
        .iter()
        .zip(&k)
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| format!("{}*x^{e:?}", format_rat(c)))
        .collect()
}

/// `g_0 = h_0`, `g_i = h_i − h_{i−1}` for `1 ≤ i ≤ ⌊r/2⌋`, where `r` is the last nonzero index.
pub fn g_vector(h: &[i64]) -> Vec<i64> {
    let r = h.iter().rposition(|&x| x != 0).unwrap_or(0);
    (0..=r / 2)
        .map(|i| if i == 0 { h[0] } else { h[i] - h[i - 1] })
        .collect()
}

/// `a^{⟨i⟩}` from the `i`-th binomial representation of `a`.
pub fn macaulay_upper(a: i64, i: usize) -> i64 {
    let mut rest = a;
    let mut out = 0;
    for t in (1..=i).rev() {
        if rest == 0 {
            break;
        }
        let mut k = t;
        while binomial(k + 1, t) <= rest {
            k += 1;
        }
        rest -= binomial(k, t);
        out += binomial(k + 1, t + 1);
    }
    out
}

/// `g_0 = 1`, `g_i ≥ 0`, and `g_{i+1} ≤ g_i^{⟨i⟩}` for `i ≥ 1`.
pub fn is_macaulay_sequence(g: &[i64]) -> bool {
    if g.is_empty() {
        return true;
    }
    g[0] == 1
        && g.iter().all(|&x| x >= 0)
        && (1..g.len().saturating_sub(1)).all(|i| g[i + 1] <= macaulay_upper(g[i], i))
}

pub fn g_vector_macaulay_check(h: &[i64]) -> bool {
    is_macaulay_sequence(&g_vector(h))
}

/// No nonzero element below the top degree is killed by every variable.
pub fn is_level(p: &RingPresentation) -> bool {
    let r = top_degree(p);
    let q = p.quotient(r + 1);
    let hf = q.dims();
    let top = hf.iter().rposition(|&x| x != 0).unwrap_or(0);
    let n = p.nvars();
    (0..top).all(|j| {
        if hf[j] == 0 {
            return true;
        }
        let mut stacked: Vec<Vec<Rat>> = Vec::new();
        for &v in q.free_variables() {
            stacked.extend(q.multiplication_matrix(&MultiPoly::var(n, v), j));
        }
        rank_of_rows(&stacked, hf[j]) == hf[j]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn macaulay_bounds() {
        assert_eq!(macaulay_upper(3, 1), 6);
        assert_eq!(macaulay_upper(1, 1), 1);
        assert_eq!(macaulay_upper(4, 2), 5);
        assert!(g_vector_macaulay_check(&[1, 4, 7]));
        assert_eq!(g_vector(&[1, 4, 7]), vec![1, 3]);
        assert!(!g_vector_macaulay_check(&[1, 2, 7, 7, 2]));
        assert!(!is_macaulay_sequence(&[1, 1, 5]));
        assert!(g_vector_macaulay_check(&[1, 4]));
    }
}
