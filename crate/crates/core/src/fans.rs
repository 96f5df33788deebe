//! Triangulations `Σ_θ`, Stanley–Reisner and irrelevant ideals, and chambers of `Γ(𝒜)`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::lp::{LinearProgram, LpOutcome, Relation};
use crate::exact::matrix::nullspace;
use crate::exact::lattice::int_vec_to_rat as int_vec_rat;
use crate::exact::{dot, indices_of, mask_of, rat_from_int, Int, IntMatrix, Rat};
use crate::gale::{primitive, GaleDualPair};
use crate::par;
use crate::polyhedra::{is_generic, wall_normals, BasisTable};

pub use crate::gale::lawrence_configuration;

/// `Λ(ℬ)`, the `(2n − d) × 2n` Lawrence lifting.
pub fn lawrence_lifting(pair: &GaleDualPair) -> IntMatrix {
    pair.lawrence_lifting()
}

/// A simplicial fan stored by its maximal cones. Column `i` of `vectors` is `b_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    vectors: IntMatrix,
    cones: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangulationReport {
    pub independent: bool,
    /// Every ridge lies in two cones on opposite sides, or in one cone and
    /// spans a supporting hyperplane of `pos(ℬ)`.
    pub ridges_ok: bool,
    /// Number of closed cones containing an interior point of the first cone.
    pub probe_multiplicity: usize,
    pub unimodular: bool,
}

impl TriangulationReport {
    pub fn is_valid(&self) -> bool {
        self.independent && self.ridges_ok && self.probe_multiplicity == 1
    }
}

impl Triangulation {
    pub fn new(vectors: IntMatrix, mut cones: Vec<Vec<usize>>) -> Self {
        for c in &mut cones {
            c.sort();
        }
        cones.sort();
        Triangulation { vectors, cones }
    }

    pub fn vectors(&self) -> &IntMatrix {
        &self.vectors
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn ground_size(&self) -> usize {
        self.vectors.cols()
    }

    /// `true` if `face` lies in some maximal cone.
    pub fn is_face(&self, face: &[usize]) -> bool {
        let m = mask_of(face);
        self.cones.iter().any(|c| mask_of(c) & m == m)
    }

    pub fn verify(&self) -> TriangulationReport {
        let k = self.vectors.rows();
        let dets: Vec<Int> = self
            .cones
            .iter()
            .map(|c| {
                if c.len() == k {
                    self.vectors.select_columns(c).det()
                } else {
                    Int::zero()
                }
            })
            .collect();
        let independent = dets.iter().all(|d| !d.is_zero());
        let unimodular = independent && dets.iter().all(|d| d.abs().is_one());
        if !independent || self.cones.is_empty() {
            return TriangulationReport {
                independent,
                ridges_ok: false,
                probe_multiplicity: 0,
                unimodular,
            };
        }
        let cols: Vec<Vec<Rat>> = self
            .vectors
            .columns()
            .iter()
            .map(|c| int_vec_rat(c))
            .collect();

        let mut ridges: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for c in &self.cones {
            for skip in 0..c.len() {
                let mut ridge = c.clone();
                ridge.remove(skip);
                ridges.entry(ridge).or_default().push(c[skip]);
            }
        }
        let ridges_ok = par::map(&ridges.into_iter().collect::<Vec<_>>(), |(ridge, apexes)| {
            let normal = ridge_normal(&self.vectors, ridge);
            let side = |j: usize| crate::exact::sign(&dot(&normal, &cols[j]));
            match apexes.len() {
                2 => side(apexes[0]) * side(apexes[1]) == -1,
                1 => {
                    let s = side(apexes[0]);
                    (0..cols.len()).all(|j| side(j) != -s)
                }
                _ => false,
            }
        })
        .into_iter()
        .all(|b| b);

        let probe: Vec<Rat> = (0..k)
            .map(|r| self.cones[0].iter().map(|&j| cols[j][r].clone()).sum())
            .collect();
        let probe_multiplicity = self
            .cones
            .iter()
            .filter(|c| {
                let m = self.vectors.select_columns(c).to_rat();
                match crate::exact::matrix::solve(&m, &probe) {
                    Some(x) => x.iter().all(|v| !v.is_negative()),
                    None => false,
                }
            })
            .count();
        TriangulationReport {
            independent,
            ridges_ok,
            probe_multiplicity,
            unimodular,
        }
    }
}

fn ridge_normal(vectors: &IntMatrix, ridge: &[usize]) -> Vec<Rat> {
    let sub = vectors.select_columns(ridge).to_rat();
    let ns = nullspace(&sub.transpose());
    ns.into_iter().next().unwrap_or_default()
}

/// `Σ_θ`: maximal cones are the complements of the feasible bases of `P_θ`.
pub fn triangulation_from_theta(pair: &GaleDualPair, theta: &[Int]) -> Result<Triangulation> {
    let t: Vec<Rat> = theta.iter().map(rat_from_int).collect();
    if !is_generic(&t, pair.a()) {
        return Err(Error::NonGenericTheta(format!("{theta:?}")));
    }
    let n = pair.n();
    let table = BasisTable::new(pair.a());
    let cones = table
        .feasible(&t)
        .into_iter()
        .map(|(c, _)| complement(&c, n))
        .collect();
    Ok(Triangulation::new(pair.b().transpose(), cones))
}

fn complement(set: &[usize], n: usize) -> Vec<usize> {
    (0..n).filter(|i| !set.contains(i)).collect()
}

/// Minimal non-faces of `T` as sorted index sets.
pub fn stanley_reisner_ideal(t: &Triangulation) -> Vec<Vec<usize>> {
    let n = t.ground_size();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    // a set is a non-face iff it meets the complement of every maximal cone
    let comps: Vec<u64> = t.cones.iter().map(|c| full & !mask_of(c)).collect();
    let mut out: Vec<Vec<usize>> = minimal_transversals(&comps)
        .into_iter()
        .map(indices_of)
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

/// Berge's incremental construction of the minimal hitting sets.
fn minimal_transversals(sets: &[u64]) -> Vec<u64> {
    let mut tr: Vec<u64> = vec![0];
    for &e in sets {
        let mut next: Vec<u64> = Vec::new();
        for &t in &tr {
            if t & e != 0 {
                next.push(t);
            } else {
                let mut bits = e;
                while bits != 0 {
                    let b = bits & bits.wrapping_neg();
                    next.push(t | b);
                    bits &= bits - 1;
                }
            }
        }
        next.sort();
        next.dedup();
        let minimal: Vec<u64> = next
            .iter()
            .filter(|&&x| !next.iter().any(|&y| y != x && y & x == y))
            .copied()
            .collect();
        tr = minimal;
    }
    tr
}

/// One square-free monomial per maximal cone, supported on its complement.
pub fn irrelevant_ideal(t: &Triangulation) -> Vec<Vec<usize>> {
    let n = t.ground_size();
    let mut out: Vec<Vec<usize>> = t.cones.iter().map(|c| complement(c, n)).collect();
    out.sort();
    out.dedup();
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chamber {
    /// Primitive integer point in the open chamber.
    pub representative: Vec<Int>,
    /// Indices into the configuration's [`BasisTable`].
    pub fingerprint: Vec<usize>,
    pub feasible_bases: Vec<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub struct ChamberComplexSample {
    pub chambers: Vec<Chamber>,
    /// Regions of the arrangement of spanned walls before merging by fingerprint.
    pub arrangement_regions: usize,
    pub walls: usize,
}

impl ChamberComplexSample {
    pub fn len(&self) -> usize {
        self.chambers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chambers.is_empty()
    }

    /// Regions sharing a fingerprint with another region.
    pub fn merged(&self) -> usize {
        self.arrangement_regions - self.chambers.len()
    }
}

struct Region {
    signs: Vec<i8>,
    rep: Vec<Rat>,
}

fn side_lp(walls: &[Vec<Rat>], signs: &[i8], h: &[Rat], s: i8) -> Option<Vec<Rat>> {
    let d = h.len();
    let mut lp = LinearProgram::new(d).free_vars();
    for (w, &sg) in walls.iter().zip(signs) {
        lp.add(scaled(w, sg), Relation::Ge, Rat::one());
    }
    lp.add(scaled(h, s), Relation::Ge, Rat::one());
    match lp.solve() {
        LpOutcome::Optimal { point, .. } => Some(point),
        LpOutcome::Unbounded => unreachable!("zero objective"),
        LpOutcome::Infeasible => None,
    }
}

fn scaled(v: &[Rat], s: i8) -> Vec<Rat> {
    if s > 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| -x.clone()).collect()
    }
}

/// Chambers of the arrangement of hyperplanes spanned by columns of `config`,
/// merged by feasible-basis set; optionally only those inside `pos(config)`.
pub fn enumerate_chambers(config: &IntMatrix, restrict_to_pos: bool) -> Result<ChamberComplexSample> {
    let d = config.rows();
    let r = config.rank();
    if r < d {
        return Err(Error::NotFullRank { rank: r, rows: d });
    }
    let walls: Vec<Vec<Rat>> = wall_normals(config).iter().map(|w| int_vec_rat(w)).collect();
    let mut regions = vec![Region {
        signs: Vec::new(),
        rep: vec![Rat::zero(); d],
    }];
    for (k, h) in walls.iter().enumerate() {
        let done = &walls[..k];
        regions = par::flat_map(&regions, |reg| {
            let v = dot(h, &reg.rep);
            let mut out = Vec::with_capacity(2);
            for s in [1i8, -1] {
                let val = if s > 0 { v.clone() } else { -v.clone() };
                let rep = if val.is_positive() {
                    // rescale the old point so the new constraint reads ≥ 1
                    let f = if val < Rat::one() { val.recip() } else { Rat::one() };
                    Some(reg.rep.iter().map(|x| x * &f).collect())
                } else {
                    side_lp(done, &reg.signs, h, s)
                };
                if let Some(p) = rep {
                    let mut signs = reg.signs.clone();
                    signs.push(s);
                    out.push(Region { signs, rep: p });
                }
            }
            out
        });
    }
    let table = BasisTable::new(config);
    let tagged = par::map(&regions, |reg| {
        let rep = primitive(&reg.rep);
        let t: Vec<Rat> = rep.iter().map(rat_from_int).collect();
        (table.fingerprint(&t), rep)
    });
    let mut by_fp: BTreeMap<Vec<usize>, Vec<Int>> = BTreeMap::new();
    let mut kept_regions = 0;
    for (fp, rep) in tagged {
        if restrict_to_pos && fp.is_empty() {
            continue;
        }
        kept_regions += 1;
        by_fp.entry(fp).or_insert(rep);
    }
    let chambers = by_fp
        .into_iter()
        .map(|(fp, rep)| Chamber {
            feasible_bases: fp.iter().map(|&i| table.entries()[i].0.clone()).collect(),
            fingerprint: fp,
            representative: rep,
        })
        .collect();
    Ok(ChamberComplexSample {
        chambers,
        arrangement_regions: kept_regions,
        walls: walls.len(),
    })
}

/// Equal feasible-basis sets.
pub fn same_chamber(config: &IntMatrix, theta1: &[Rat], theta2: &[Rat]) -> Result<bool> {
    for t in [theta1, theta2] {
        if !is_generic(t, config) {
            return Err(Error::NonGenericTheta(format!("{t:?}")));
        }
    }
    let table = BasisTable::new(config);
    Ok(table.fingerprint(theta1) == table.fingerprint(theta2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat_vec};

    fn intro() -> GaleDualPair {
        GaleDualPair::from_matrix(IntMatrix::from_i64_rows(&[&[1, 1, 1]])).unwrap()
    }

    #[test]
    fn intro_lawrence_triangulation() {
        let l = intro().lawrence();
        let t = triangulation_from_theta(&l, &[int(1)]).unwrap();
        assert_eq!(t.cones().len(), 3);
        assert!(t.verify().is_valid());
        assert_eq!(irrelevant_ideal(&t), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(stanley_reisner_ideal(&t), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn zero_theta_rejected() {
        assert!(matches!(
            triangulation_from_theta(&intro(), &[int(0)]),
            Err(Error::NonGenericTheta(_))
        ));
    }

    #[test]
    fn single_cone_has_no_non_faces() {
        let t = Triangulation::new(IntMatrix::identity(2), vec![vec![0, 1]]);
        assert!(stanley_reisner_ideal(&t).is_empty());
        assert_eq!(irrelevant_ideal(&t), vec![Vec::<usize>::new()]);
        assert!(t.verify().is_valid());
    }

    #[test]
    fn chambers_of_a_line_and_plane() {
        let a = IntMatrix::from_i64_rows(&[&[1, 1, 1]]);
        assert_eq!(enumerate_chambers(&a, true).unwrap().len(), 1);
        let pm = lawrence_configuration(&a);
        assert_eq!(enumerate_chambers(&pm, false).unwrap().len(), 2);
        let sq = IntMatrix::from_i64_rows(&[&[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(enumerate_chambers(&sq, true).unwrap().len(), 2);
        assert!(same_chamber(&sq, &rat_vec(&[2, 1]), &rat_vec(&[4, 2])).unwrap());
        assert!(!same_chamber(&sq, &rat_vec(&[2, 1]), &rat_vec(&[1, 2])).unwrap());
    }
}
