//! Linear matroids of integer vector configurations.

use std::collections::HashSet;
use std::sync::OnceLock;

use num_traits::Zero;

use crate::exact::{binomial, indices_of, mask_of, rat_from_int, IntMatrix, MultiPoly, Rat};

/// h-vector `(h_0, ..., h_r)` of the independence complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HVector(pub Vec<i64>);

impl HVector {
    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    /// `Σ h_i x^i` in one variable.
    pub fn polynomial(&self) -> MultiPoly {
        let mut p = MultiPoly::zero(1);
        for (i, &h) in self.0.iter().enumerate() {
            p.add_term(vec![i as u32], Rat::from_integer(h.into()));
        }
        p
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&h| h >= 0)
    }
}

/// Matroid on the columns of an integer matrix. Families are cached on first use
/// and reported as sorted index lists.
#[derive(Debug, Clone)]
pub struct LinearMatroid {
    matrix: IntMatrix,
    rank: usize,
    independent: OnceLock<Vec<u64>>,
    bases: OnceLock<Vec<Vec<usize>>>,
    circuits: OnceLock<Vec<Vec<usize>>>,
    cocircuits: OnceLock<Vec<Vec<usize>>>,
}

/// Echelon rows used to test membership in a span incrementally.
#[derive(Clone, Default)]
struct Echelon {
    rows: Vec<(usize, Vec<Rat>)>,
}

impl Echelon {
    /// Reduces `v` against the stored rows; returns the residue if nonzero.
    fn reduce(&self, v: &[Rat]) -> Option<(usize, Vec<Rat>)> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone() / &row[*p];
                for (x, y) in v.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        let p = v.iter().position(|x| !x.is_zero())?;
        Some((p, v))
    }

    fn push(&mut self, r: (usize, Vec<Rat>)) {
        self.rows.push(r);
    }
}

impl LinearMatroid {
    /// Ground set = columns of `matrix`.
    pub fn from_columns(matrix: IntMatrix) -> Self {
        let rank = matrix.rank();
        LinearMatroid {
            matrix,
            rank,
            independent: OnceLock::new(),
            bases: OnceLock::new(),
            circuits: OnceLock::new(),
            cocircuits: OnceLock::new(),
        }
    }

    /// Ground set = rows of `matrix`.
    pub fn from_rows(matrix: &IntMatrix) -> Self {
        Self::from_columns(matrix.transpose())
    }

    pub fn ground_size(&self) -> usize {
        self.matrix.cols()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    fn column_rat(&self, j: usize) -> Vec<Rat> {
        self.matrix.column(j).iter().map(rat_from_int).collect()
    }

    pub fn rank_of(&self, set: &[usize]) -> usize {
        let mut e = Echelon::default();
        for &j in set {
            if let Some(r) = e.reduce(&self.column_rat(j)) {
                e.push(r);
            }
        }
        e.rows.len()
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        self.rank_of(set) == set.len()
    }

    /// All independent sets as bitmasks, found by depth-first extension.
    pub fn independent_masks(&self) -> &[u64] {
        self.independent.get_or_init(|| {
            let n = self.ground_size();
            assert!(n < 64, "ground set too large for bitmask enumeration");
            let cols: Vec<Vec<Rat>> = (0..n).map(|j| self.column_rat(j)).collect();
            let mut out = vec![0u64];
            let mut stack: Vec<(u64, usize, Echelon)> = vec![(0, 0, Echelon::default())];
            while let Some((mask, next, ech)) = stack.pop() {
                for e in next..n {
                    if let Some(r) = ech.reduce(&cols[e]) {
                        let mut ech2 = ech.clone();
                        ech2.push(r);
                        let m2 = mask | 1 << e;
                        out.push(m2);
                        stack.push((m2, e + 1, ech2));
                    }
                }
            }
            out.sort_by_key(|&m| indices_of(m));
            out
        })
    }

    pub fn independent_sets(&self) -> Vec<Vec<usize>> {
        self.independent_masks().iter().map(|&m| indices_of(m)).collect()
    }

    pub fn bases(&self) -> &[Vec<usize>] {
        self.bases.get_or_init(|| {
            self.independent_masks()
                .iter()
                .filter(|m| m.count_ones() as usize == self.rank)
                .map(|&m| indices_of(m))
                .collect()
        })
    }

    pub fn is_basis(&self, set: &[usize]) -> bool {
        set.len() == self.rank && self.is_independent(set)
    }

    /// Minimal dependent sets. A circuit `C` is `I ∪ {e}` with `I = C ∖ max C` independent.
    pub fn circuits(&self) -> &[Vec<usize>] {
        self.circuits.get_or_init(|| {
            let ind: HashSet<u64> = self.independent_masks().iter().copied().collect();
            let n = self.ground_size();
            let mut out = Vec::new();
            for &m in self.independent_masks() {
                let start = if m == 0 { 0 } else { 64 - m.leading_zeros() as usize };
                for e in start..n {
                    let c = m | 1 << e;
                    if ind.contains(&c) {
                        continue;
                    }
                    if indices_of(c).iter().all(|&x| ind.contains(&(c & !(1 << x)))) {
                        out.push(indices_of(c));
                    }
                }
            }
            out.sort();
            out
        })
    }

    /// Complements of hyperplanes (closures of independent sets of rank r − 1).
    pub fn cocircuits(&self) -> &[Vec<usize>] {
        self.cocircuits.get_or_init(|| {
            if self.rank == 0 {
                return Vec::new();
            }
            let n = self.ground_size();
            let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            let mut seen = HashSet::new();
            for &m in self.independent_masks() {
                if m.count_ones() as usize != self.rank - 1 {
                    continue;
                }
                let base = indices_of(m);
                let mut flat = m;
                for e in 0..n {
                    if m >> e & 1 == 0 {
                        let mut s = base.clone();
                        s.push(e);
                        if self.rank_of(&s) == self.rank - 1 {
                            flat |= 1 << e;
                        }
                    }
                }
                seen.insert(full & !flat);
            }
            let mut out: Vec<Vec<usize>> = seen.into_iter().map(indices_of).collect();
            out.sort();
            out
        })
    }

    /// Cocircuits computed directly as the minimal sets meeting every basis.
    pub fn cocircuits_by_transversal(&self) -> Vec<Vec<usize>> {
        let bases: Vec<u64> = self.bases().iter().map(|b| mask_of(b)).collect();
        let n = self.ground_size();
        let meets_all = |s: u64| bases.iter().all(|&b| b & s != 0);
        let mut out = Vec::new();
        for s in 1u64..(1u64 << n) {
            if meets_all(s) && indices_of(s).iter().all(|&x| !meets_all(s & !(1 << x))) {
                out.push(indices_of(s));
            }
        }
        out.sort();
        out
    }

    pub fn coloops(&self) -> Vec<usize> {
        let m = self
            .bases()
            .iter()
            .fold(u64::MAX, |acc, b| acc & mask_of(b));
        indices_of(m)
            .into_iter()
            .filter(|&i| i < self.ground_size())
            .collect()
    }

    pub fn loops(&self) -> Vec<usize> {
        (0..self.ground_size())
            .filter(|&j| self.matrix.is_column_zero(j))
            .collect()
    }

    /// `f[i]` = number of independent sets of size `i` (so `f[0] = 1`).
    pub fn f_vector(&self) -> Vec<i64> {
        let mut f = vec![0i64; self.rank + 1];
        for m in self.independent_masks() {
            f[m.count_ones() as usize] += 1;
        }
        f
    }

    pub fn h_vector(&self) -> HVector {
        h_from_f(&self.f_vector())
    }

    /// One square-free monomial (as an index set) per circuit.
    pub fn matroid_ideal_generators(&self) -> Vec<Vec<usize>> {
        self.circuits().to_vec()
    }

    pub fn reliability_h_polynomial(&self) -> MultiPoly {
        self.h_vector().polynomial()
    }

    /// Matroid with the given elements removed; columns are renumbered in order.
    pub fn delete(&self, elements: &[usize]) -> LinearMatroid {
        let keep: Vec<usize> = (0..self.ground_size())
            .filter(|j| !elements.contains(j))
            .collect();
        LinearMatroid::from_columns(self.matrix.select_columns(&keep))
    }
}

/// `h_k = Σ_{i ≤ k} (−1)^{k−i} C(r−i, k−i) f_i` with `f_i` counting `i`-sets.
pub fn h_from_f(f: &[i64]) -> HVector {
    let r = f.len() - 1;
    let h = (0..=r)
        .map(|k| {
            (0..=k)
                .map(|i| {
                    let s = if (k - i) % 2 == 0 { 1 } else { -1 };
                    s * binomial(r - i, k - i) * f[i]
                })
                .sum()
        })
        .collect();
    HVector(h)
}

/// Checks, on square-free supports of size ≤ r + 1, that the ideal generated by
/// the circuits of `m` equals the intersection of `⟨x_i : i ∈ C⟩` over bases `C` of `dual`.
pub fn ideal_matches_dual_bases(m: &LinearMatroid, dual: &LinearMatroid) -> bool {
    let n = m.ground_size();
    if dual.ground_size() != n {
        return false;
    }
    let circuits: Vec<u64> = m.circuits().iter().map(|c| mask_of(c)).collect();
    let bases: Vec<u64> = dual.bases().iter().map(|b| mask_of(b)).collect();
    for k in 0..=(m.rank() + 1).min(n) {
        for s in crate::exact::subsets_of_size(n, k) {
            let s = mask_of(&s);
            let in_m = circuits.iter().any(|&c| c & s == c);
            let in_dual = bases.iter().all(|&b| b & s != 0);
            if in_m != in_dual {
                return false;
            }
        }
    }
    true
}
