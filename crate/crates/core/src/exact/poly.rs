use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::matrix::{rref_in_place, RatMatrix};
use super::{format_rat, rat, Rat};
use crate::error::{Error, Result};

pub type Exponent = Vec<u32>;

/// Polynomial over the rationals in a fixed number of variables.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, Rat>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Rat::one())
    }

    pub fn monomial(exp: Exponent, c: Rat) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    /// Square-free monomial on an index set.
    pub fn squarefree(nvars: usize, support: &[usize]) -> Self {
        let mut e = vec![0; nvars];
        for &i in support {
            e[i] = 1;
        }
        Self::monomial(e, Rat::one())
    }

    pub fn linear(coeffs: &[Rat]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[u32]) -> Rat {
        self.terms.get(exp).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exp: Exponent, c: Rat) {
        assert_eq!(exp.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableCountMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.nvars, Rat::one());
        for _ in 0..k {
            out = out.mul(self).expect("same nvars");
        }
        out
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            out.add_term(f, c * rat(e[i] as i64));
        }
        out
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes `x_i ↦ forms[i]`, where each form lives in `forms[i].nvars()` variables.
    pub fn compose(&self, forms: &[MultiPoly]) -> Result<Self> {
        if forms.len() != self.nvars {
            return Err(Error::VariableCountMismatch(self.nvars, forms.len()));
        }
        let m = forms.first().map_or(0, |f| f.nvars);
        let mut out = Self::zero(m);
        for (e, c) in &self.terms {
            let mut t = Self::constant(m, c.clone());
            for (f, &k) in forms.iter().zip(e) {
                if k > 0 {
                    t = t.mul(&f.pow(k))?;
                }
            }
            out = out.add(&t)?;
        }
        Ok(out)
    }

    /// Homogeneous part of the given degree.
    pub fn homogeneous_part(&self, deg: u32) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == deg)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Rescales so that the leading term (largest exponent) has coefficient 1.
    pub fn monic(&self) -> Self {
        match self.terms.iter().next_back() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// `Some(c)` with `self = c·other`, when the two are proportional and `other` is nonzero.
    pub fn proportional_to(&self, other: &Self) -> Option<Rat> {
        let (e, c) = other.terms.iter().next()?;
        let k = self.coeff(e) / c;
        if *self == other.scale(&k) {
            Some(k)
        } else {
            None
        }
    }

    /// Sorted `(exponent, "p/q")` pairs.
    pub fn to_pairs(&self) -> Vec<(Exponent, String)> {
        self.terms
            .iter()
            .map(|(e, c)| (e.clone(), format_rat(c)))
            .collect()
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        names[i].clone()
                    } else {
                        format!("{}^{}", names[i], k)
                    }
                })
                .collect();
            let coeff = format_rat(c);
            if mono.is_empty() {
                parts.push(coeff);
            } else if c.is_one() {
                parts.push(mono.join("*"));
            } else if *c == -Rat::one() {
                parts.push(format!("-{}", mono.join("*")));
            } else {
                parts.push(format!("{}*{}", coeff, mono.join("*")));
            }
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.display_with(&names))
    }
}

/// Applies `op` as a constant-coefficient differential operator in the same variables.
pub fn apply_diff_op(op: &MultiPoly, p: &MultiPoly) -> Result<MultiPoly> {
    op.check(p)?;
    let mut out = MultiPoly::zero(p.nvars);
    for (e, c) in &op.terms {
        let mut q = p.clone();
        for (i, &k) in e.iter().enumerate() {
            for _ in 0..k {
                q = q.derivative(i);
            }
            if q.is_zero() {
                break;
            }
        }
        out = out.add(&q.scale(c))?;
    }
    Ok(out)
}

/// All exponent vectors of total degree `deg` in `nvars` variables, lexicographically descending.
pub fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Exponent> {
    fn rec(i: usize, left: u32, cur: &mut Exponent, out: &mut Vec<Exponent>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for k in (0..=left).rev() {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if deg == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(0, deg, &mut vec![0; nvars], &mut out);
    out
}

pub fn monomial_value(exp: &[u32], point: &[Rat]) -> Rat {
    let mut t = Rat::one();
    for (x, &k) in point.iter().zip(exp) {
        for _ in 0..k {
            t *= x;
        }
    }
    t
}

/// Fits the unique homogeneous polynomial of degree `degree` through the samples.
pub fn interpolate_homogeneous(
    samples: &[(Vec<Rat>, Rat)],
    degree: u32,
    nvars: usize,
) -> Result<MultiPoly> {
    let monos = monomials_of_degree(nvars, degree);
    let m = monos.len();
    let mut rows: Vec<Vec<Rat>> = samples
        .iter()
        .map(|(pt, val)| {
            if pt.len() != nvars {
                return Err(Error::VariableCountMismatch(nvars, pt.len()));
            }
            let mut r: Vec<Rat> = monos.iter().map(|e| monomial_value(e, pt)).collect();
            r.push(val.clone());
            Ok(r)
        })
        .collect::<Result<_>>()?;
    let pivots = rref_in_place(&mut rows, m + 1);
    if pivots.last() == Some(&m) {
        return Err(Error::Inconsistent(degree as usize));
    }
    if pivots.len() < m {
        return Err(Error::RankDeficient {
            rank: pivots.len(),
            needed: m,
        });
    }
    let mut p = MultiPoly::zero(nvars);
    for (i, e) in monos.into_iter().enumerate() {
        p.add_term(e, rows[i][m].clone());
    }
    Ok(p)
}

/// Coefficient matrix of a list of homogeneous polynomials in the given monomial basis.
pub fn coefficient_matrix(polys: &[MultiPoly], basis: &[Exponent]) -> RatMatrix {
    let rows: Vec<Vec<Rat>> = polys
        .iter()
        .map(|p| basis.iter().map(|e| p.coeff(e)).collect())
        .collect();
    RatMatrix::from_rows(rows, basis.len()).expect("rectangular")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_vec;

    fn x(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    #[test]
    fn symmetric_operator_kills_difference_square() {
        let p = x(2, 0).sub(&x(2, 1)).unwrap().pow(2);
        let op = x(2, 0).add(&x(2, 1)).unwrap();
        assert!(apply_diff_op(&op, &p).unwrap().is_zero());
    }

    #[test]
    fn mixed_partial() {
        let p = x(2, 0).pow(2).mul(&x(2, 1)).unwrap();
        let op = x(2, 0).mul(&x(2, 1)).unwrap();
        assert_eq!(apply_diff_op(&op, &p).unwrap(), x(2, 0).scale(&rat(2)));
    }

    #[test]
    fn variable_count_checked() {
        assert!(matches!(
            apply_diff_op(&x(2, 0), &x(3, 0)),
            Err(Error::VariableCountMismatch(2, 3))
        ));
    }

    #[test]
    fn interpolation_recovers_square() {
        let samples: Vec<(Vec<Rat>, Rat)> =
            [1, 2, 3].iter().map(|&s| (rat_vec(&[s]), rat(s * s))).collect();
        let p = interpolate_homogeneous(&samples, 2, 1).unwrap();
        assert_eq!(p, x(1, 0).pow(2));
        let zeros: Vec<(Vec<Rat>, Rat)> =
            [1, 2, 3].iter().map(|&s| (rat_vec(&[s]), rat(0))).collect();
        assert!(interpolate_homogeneous(&zeros, 2, 1).unwrap().is_zero());
    }

    #[test]
    fn interpolation_failures() {
        let samples = vec![(rat_vec(&[1]), rat(1)), (rat_vec(&[2]), rat(3))];
        assert!(matches!(
            interpolate_homogeneous(&samples, 1, 1),
            Err(Error::Inconsistent(1))
        ));
        let samples = vec![(rat_vec(&[1, 1]), rat(1))];
        assert!(matches!(
            interpolate_homogeneous(&samples, 1, 2),
            Err(Error::RankDeficient { rank: 1, needed: 2 })
        ));
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(4, 0), vec![vec![0, 0, 0, 0]]);
        assert_eq!(monomials_of_degree(0, 1).len(), 0);
    }

    #[test]
    fn compose_linear_substitution() {
        // (t0 + t1)^2 with t0 = x0, t1 = x0 - x1
        let p = x(2, 0).add(&x(2, 1)).unwrap().pow(2);
        let forms = vec![x(2, 0), x(2, 0).sub(&x(2, 1)).unwrap()];
        let q = p.compose(&forms).unwrap();
        let expect = x(2, 0).scale(&rat(2)).sub(&x(2, 1)).unwrap().pow(2);
        assert_eq!(q, expect);
    }
}
