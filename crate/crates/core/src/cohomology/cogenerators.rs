use std::collections::HashMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Exponent, RingPresentation};
use crate::error::{Error, Result};
use crate::exact::lattice::int_vec_to_rat;
use crate::exact::matrix::{inverse, rank_of_rows};
use crate::exact::poly::{apply_diff_op, interpolate_homogeneous, monomials_of_degree};
use crate::exact::{rat_from_int, subsets_of_size, MultiPoly, Rat};
use crate::gale::GaleDualPair;
use crate::par;
use crate::polyhedra::AffineArrangement;

/// Volume polynomials of the maximal bounded regions, in the `ψ` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct CogeneratorSet {
    pub nvars: usize,
    pub degree: usize,
    pub polys: Vec<MultiPoly>,
    /// Sign vector of the region behind each polynomial.
    pub regions: Vec<Vec<i8>>,
    pub pullbacks: Option<Vec<MultiPoly>>,
}

impl CogeneratorSet {
    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnihilatorReport {
    pub catalecticant_ranks: Vec<usize>,
    pub hilbert_function: Vec<usize>,
}

const DEFAULT_SEED: u64 = 0x5eed;

pub fn volume_cogenerators(arr: &AffineArrangement) -> Result<CogeneratorSet> {
    volume_cogenerators_seeded(arr, DEFAULT_SEED)
}

/// Interpolates each region's volume from exact samples `ψ'` of the same
/// combinatorial type as `ψ`.
pub fn volume_cogenerators_seeded(arr: &AffineArrangement, seed: u64) -> Result<CogeneratorSet> {
    let n = arr.n();
    let r = arr.dim();
    let regions = arr.regions()?;
    let triangulations = regions
        .iter()
        .map(|c| arr.triangulate(&c.signs))
        .collect::<Result<Vec<_>>>()?;
    let needed = monomials_of_degree(n, r as u32).len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<Vec<Rat>> = Vec::new();
    let mut scale = Rat::new(1.into(), 4.into());
    let mut polys = Vec::new();
    let mut extra = 2;
    loop {
        while points.len() < needed + extra {
            let delta: Vec<Rat> = (0..n)
                .map(|_| Rat::new(rng.gen_range(-16i64..=16).into(), 16.into()))
                .collect();
            let p: Vec<Rat> = arr
                .psi()
                .iter()
                .zip(&delta)
                .map(|(x, d)| x + d * &scale)
                .collect();
            if arr.same_type(&p)? {
                points.push(p);
            } else {
                scale /= Rat::from_integer(2.into());
            }
        }
        let values: Vec<Vec<Rat>> = par::map(&points, |p| {
            triangulations
                .iter()
                .map(|s| arr.volume_at(s, p))
                .collect::<Result<Vec<_>>>()
        })
        .into_iter()
        .collect::<Result<_>>()?;
        polys.clear();
        let mut short = false;
        for i in 0..regions.len() {
            let samples: Vec<(Vec<Rat>, Rat)> = points
                .iter()
                .zip(&values)
                .map(|(p, v)| (p.clone(), v[i].clone()))
                .collect();
            match interpolate_homogeneous(&samples, r as u32, n) {
                Ok(v) => polys.push(v),
                Err(Error::RankDeficient { .. }) => {
                    short = true;
                    break;
                }
                Err(Error::Inconsistent(_)) => return Err(Error::ChamberCrossed(i)),
                Err(e) => return Err(e),
            }
        }
        if !short {
            break;
        }
        extra += needed;
    }
    Ok(CogeneratorSet {
        nvars: n,
        degree: r,
        polys,
        regions: regions.into_iter().map(|c| c.signs).collect(),
        pullbacks: None,
    })
}

/// Dimension of `{(∂^α V_1, …, ∂^α V_r) : |α| = j}` for `j = 0..=up_to`.
pub fn catalecticant_ranks(polys: &[MultiPoly], nvars: usize, up_to: usize) -> Vec<usize> {
    let top = polys
        .iter()
        .filter_map(|p| p.degree())
        .max()
        .unwrap_or(0) as usize;
    let degs: Vec<usize> = (0..=up_to).collect();
    par::map(&degs, |&j| {
        if j > top {
            return 0;
        }
        let targets = monomials_of_degree(nvars, (top - j) as u32);
        let tindex: HashMap<&Exponent, usize> =
            targets.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let width = targets.len() * polys.len();
        let mut rows: Vec<Vec<Rat>> = monomials_of_degree(nvars, j as u32)
            .iter()
            .map(|alpha| {
                let mut row = vec![Rat::zero(); width];
                for (k, v) in polys.iter().enumerate() {
                    for (beta, c) in v.terms() {
                        if beta.iter().zip(alpha).any(|(b, a)| b < a) {
                            continue;
                        }
                        let mut f = c.clone();
                        let mut rest = beta.clone();
                        for (i, &a) in alpha.iter().enumerate() {
                            for t in 0..a {
                                f *= Rat::from_integer((beta[i] - t).into());
                            }
                            rest[i] -= a;
                        }
                        if let Some(&ti) = tindex.get(&rest) {
                            row[k * targets.len() + ti] += f;
                        }
                    }
                }
                row
            })
            .collect();
        crate::exact::matrix::rref_in_place(&mut rows, width).len()
    })
}

/// Every generator annihilates every `V_i`, and the catalecticant ranks equal
/// the Hilbert function through degree `deg V + 1`.
pub fn annihilator_verify(p: &RingPresentation, c: &CogeneratorSet) -> Result<AnnihilatorReport> {
    let ops = p.operators();
    let names: Vec<String> = (0..p.nvars()).map(|i| format!("d{i}")).collect();
    for op in &ops {
        for v in &c.polys {
            if !apply_diff_op(op, v)?.is_zero() {
                return Err(Error::AnnihilatorMismatch {
                    degree: op.degree().unwrap_or(0) as usize,
                    detail: format!("{} does not kill a cogenerator", op.display_with(&names)),
                });
            }
        }
    }
    let up_to = c.degree + 1;
    let ranks = catalecticant_ranks(&c.polys, c.nvars, up_to);
    let hf = p.hilbert_function(up_to);
    if let Some(j) = (0..=up_to).find(|&j| ranks[j] != hf[j]) {
        return Err(Error::AnnihilatorMismatch {
            degree: j,
            detail: format!("catalecticant rank {} vs Hilbert function {}", ranks[j], hf[j]),
        });
    }
    Ok(AnnihilatorReport {
        catalecticant_ranks: ranks,
        hilbert_function: hf,
    })
}

/// `v_i(t) = V_i(Rt)` with `AR = I`, checked by `v_i(Ax) = V_i(x)`.
pub fn pullback_cogenerators(pair: &GaleDualPair, c: &CogeneratorSet) -> Result<Vec<MultiPoly>> {
    let (d, n) = (pair.d(), pair.n());
    let circ: Vec<MultiPoly> = pair
        .b()
        .columns()
        .iter()
        .map(|col| MultiPoly::linear(&int_vec_to_rat(col)))
        .collect();
    for v in &c.polys {
        for op in &circ {
            if !apply_diff_op(op, v)?.is_zero() {
                return Err(Error::NotInImage);
            }
        }
    }
    let a = pair.a().to_rat();
    let basis = subsets_of_size(n, d)
        .into_iter()
        .find(|s| rank_of_rows(&a.select_columns(s).to_rows(), d) == d)
        .ok_or(Error::NotFullRank { rank: 0, rows: d })?;
    let inv = inverse(&a.select_columns(&basis)).expect("basis");
    let mut section: Vec<MultiPoly> = (0..n).map(|_| MultiPoly::zero(d)).collect();
    for (k, &j) in basis.iter().enumerate() {
        section[j] = MultiPoly::linear(inv.row(k));
    }
    let alpha: Vec<MultiPoly> = (0..d)
        .map(|i| {
            let row: Vec<Rat> = pair.a().row(i).iter().map(rat_from_int).collect();
            MultiPoly::linear(&row)
        })
        .collect();
    c.polys
        .iter()
        .map(|v| {
            let pulled = v.compose(&section)?;
            let back = if d == 0 {
                MultiPoly::constant(n, pulled.coeff(&[]))
            } else {
                pulled.compose(&alpha)?
            };
            if &back != v {
                return Err(Error::NotInImage);
            }
            Ok(pulled)
        })
        .collect()
}

/// `V_i(x − y)` in `2n` variables `x_0.., y_0..`.
pub fn lawrence_double_cogenerators(c: &CogeneratorSet) -> Vec<MultiPoly> {
    let n = c.nvars;
    let forms: Vec<MultiPoly> = (0..n)
        .map(|i| {
            let mut coeffs = vec![Rat::zero(); 2 * n];
            coeffs[i] = Rat::one();
            coeffs[n + i] = -Rat::one();
            MultiPoly::linear(&coeffs)
        })
        .collect();
    c.polys
        .iter()
        .map(|v| v.compose(&forms).expect("n forms"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, IntMatrix};

    fn single(p: MultiPoly) -> CogeneratorSet {
        CogeneratorSet {
            nvars: p.nvars(),
            degree: p.degree().unwrap_or(0) as usize,
            polys: vec![p],
            regions: vec![Vec::new()],
            pullbacks: None,
        }
    }

    #[test]
    fn pullback_rejects_non_invariant() {
        let pair = GaleDualPair::from_matrix(IntMatrix::from_i64_rows(&[&[1, 1]])).unwrap();
        let v = MultiPoly::linear(&[rat(1), rat(-1)]).pow(2);
        assert_eq!(pullback_cogenerators(&pair, &single(v)), Err(Error::NotInImage));
        let w = MultiPoly::linear(&[rat(1), rat(1)]).pow(2);
        let t = MultiPoly::var(1, 0).pow(2);
        assert_eq!(pullback_cogenerators(&pair, &single(w)).unwrap(), vec![t]);
    }

    #[test]
    fn doubling_is_killed_by_sum_operators() {
        let v = MultiPoly::var(1, 0).pow(2);
        let dbl = lawrence_double_cogenerators(&single(v));
        let expect = MultiPoly::linear(&[rat(1), rat(-1)]).pow(2);
        assert_eq!(dbl[0], expect);
        let op = MultiPoly::linear(&[rat(1), rat(1)]);
        assert!(apply_diff_op(&op, &dbl[0]).unwrap().is_zero());
        let zero = single(MultiPoly::zero(1));
        assert!(lawrence_double_cogenerators(&zero)[0].is_zero());
    }

    #[test]
    fn catalecticant_of_a_square() {
        let v = MultiPoly::linear(&[rat(1), rat(1)]).pow(2);
        assert_eq!(catalecticant_ranks(&[v], 2, 3), vec![1, 1, 1, 0]);
    }
}
