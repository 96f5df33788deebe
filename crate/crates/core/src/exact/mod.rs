//! Exact integer and rational arithmetic: dense matrices, lattice reduction,
//! multivariate polynomials and a small rational simplex solver.

pub mod io;
pub mod lattice;
pub mod lp;
pub mod matrix;
pub mod poly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use lattice::{
    gcd_of_maximal_minors, hermite_rows, integer_solve, is_unimodular, kernel_lattice_basis,
    maximal_minors, UnimodularityReport,
};
pub use matrix::{IntMatrix, Matrix, RatMatrix};
pub use poly::{apply_diff_op, interpolate_homogeneous, monomials_of_degree, MultiPoly};

pub type Int = BigInt;
pub type Rat = BigRational;
/// Vector of exact rationals; `BigRational` keeps denominators positive and reduced.
pub type RatVector = Vec<Rat>;

pub fn int(v: i64) -> Int {
    BigInt::from(v)
}

pub fn rat(v: i64) -> Rat {
    BigRational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_from_int(v: &Int) -> Rat {
    BigRational::from_integer(v.clone())
}

pub fn rat_vec(vals: &[i64]) -> RatVector {
    vals.iter().map(|&v| rat(v)).collect()
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

/// Multiplies a rational vector by the lcm of its denominators.
pub fn clear_denominators(v: &[Rat]) -> Vec<Int> {
    let mut l = Int::one();
    for x in v {
        l = num_integer::Integer::lcm(&l, x.denom());
    }
    v.iter().map(|x| (x * rat_from_int(&l)).to_integer()).collect()
}

pub fn sign(r: &Rat) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

pub fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i64 / (i + 1) as i64;
    }
    acc
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        while i > 0 && cur[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

pub fn mask_of(set: &[usize]) -> u64 {
    set.iter().fold(0u64, |m, &i| m | (1u64 << i))
}

pub fn indices_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}
