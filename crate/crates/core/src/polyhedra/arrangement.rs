//! The affine arrangement `ℋ(B, ψ)` of hyperplanes `b_i · w = ψ_i` in `ℚ^{n−d}`.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use super::FVector;
use crate::error::{Error, Result};
use crate::exact::lp::{LinearProgram, LpOutcome, Relation};
use crate::exact::matrix::inverse;
use crate::exact::{dot, rat, rat_from_int, sign, Int, IntMatrix, MultiPoly, Rat, RatMatrix};
use crate::gale::GaleDualPair;
use crate::matroid::LinearMatroid;
use crate::par;

#[derive(Debug, Clone)]
pub struct ArrVertex {
    /// The `n − d` hyperplanes through the vertex.
    pub tight: Vec<usize>,
    pub point: Vec<Rat>,
    inv: RatMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    /// `sign(b_i · w − ψ_i)` on the cell.
    pub signs: Vec<i8>,
    pub dim: usize,
    pub witness: Vec<Rat>,
    /// Indices of the arrangement vertices in the closure.
    pub vertices: Vec<usize>,
}

impl Cell {
    /// `self` lies in the closure of `other`.
    pub fn is_face_of(&self, other: &Cell) -> bool {
        self.signs
            .iter()
            .zip(&other.signs)
            .all(|(&a, &b)| a == 0 || a == b)
    }

    /// Lawrence coordinates: `+` on `i` gives `i`, `−` gives `n + i`.
    pub fn lawrence_support(&self) -> Vec<usize> {
        let n = self.signs.len();
        let mut s: Vec<usize> = self
            .signs
            .iter()
            .enumerate()
            .filter_map(|(i, &x)| match x {
                1 => Some(i),
                -1 => Some(n + i),
                _ => None,
            })
            .collect();
        s.sort();
        s
    }
}

#[derive(Debug, Clone)]
pub struct AffineArrangement {
    b: IntMatrix,
    psi: Vec<Rat>,
    vertices: OnceLock<Result<Vec<ArrVertex>>>,
    cells: OnceLock<Result<Vec<Cell>>>,
}

impl AffineArrangement {
    pub fn new(b: IntMatrix, psi: Vec<Rat>) -> Result<Self> {
        if psi.len() != b.rows() {
            return Err(Error::DimensionMismatch(format!(
                "psi has {} entries, B has {} rows",
                psi.len(),
                b.rows()
            )));
        }
        if let Some(i) = (0..b.rows()).find(|&i| b.row(i).iter().all(|x| x.is_zero())) {
            return Err(Error::LoopPresent(i));
        }
        Ok(AffineArrangement {
            b,
            psi,
            vertices: OnceLock::new(),
            cells: OnceLock::new(),
        })
    }

    /// Arrangement of a pair at `ψ = psi_from_theta(θ)`.
    pub fn from_theta(pair: &GaleDualPair, theta: &[Int]) -> Result<Self> {
        let psi = pair.psi_from_theta(theta)?;
        Self::new(pair.b().clone(), psi.iter().map(rat_from_int).collect())
    }

    pub fn b(&self) -> &IntMatrix {
        &self.b
    }

    pub fn psi(&self) -> &[Rat] {
        &self.psi
    }

    pub fn n(&self) -> usize {
        self.b.rows()
    }

    /// Ambient dimension `n − d`.
    pub fn dim(&self) -> usize {
        self.b.cols()
    }

    fn row_rat(&self, i: usize) -> Vec<Rat> {
        self.b.row(i).iter().map(rat_from_int).collect()
    }

    fn residual(&self, i: usize, w: &[Rat], psi: &[Rat]) -> Rat {
        dot(&self.row_rat(i), w) - &psi[i]
    }

    /// Vertices of the arrangement, one per basis of the row matroid of `B`.
    pub fn vertices(&self) -> Result<&[ArrVertex]> {
        self.vertices
            .get_or_init(|| {
                let m = LinearMatroid::from_rows(&self.b);
                if m.rank() < self.dim() {
                    return Ok(Vec::new());
                }
                let bases = m.bases().to_vec();
                let found = par::map(&bases, |c| {
                    let inv = inverse(&self.b.select_rows(c).to_rat()).expect("basis");
                    let rhs: Vec<Rat> = c.iter().map(|&i| self.psi[i].clone()).collect();
                    let point = inv.mul_vec(&rhs);
                    for j in 0..self.n() {
                        if !c.contains(&j) && self.residual(j, &point, &self.psi).is_zero() {
                            return Err(Error::DegeneratePsi(format!(
                                "more than {} hyperplanes meet at a point",
                                self.dim()
                            )));
                        }
                    }
                    Ok(ArrVertex {
                        tight: c.clone(),
                        point,
                        inv,
                    })
                });
                found.into_iter().collect()
            })
            .as_ref()
            .map(|v| v.as_slice())
            .map_err(Clone::clone)
    }

    fn signs_at(&self, w: &[Rat]) -> Vec<i8> {
        (0..self.n())
            .map(|i| sign(&self.residual(i, w, &self.psi)))
            .collect()
    }

    /// `{r : b_i r = 0 on zeros, s_i b_i r ≥ 0}` is trivial.
    pub fn cell_is_bounded_lp(&self, signs: &[i8]) -> bool {
        let k = self.dim();
        if k == 0 {
            return true;
        }
        let mut lp = LinearProgram::new(k).free_vars();
        let mut total = vec![Rat::zero(); k];
        for (i, &s) in signs.iter().enumerate() {
            let row = self.row_rat(i);
            if s == 0 {
                lp.add(row, Relation::Eq, Rat::zero());
            } else {
                let srow: Vec<Rat> = row.iter().map(|x| x * rat(s as i64)).collect();
                for (t, x) in total.iter_mut().zip(&srow) {
                    *t += x;
                }
                lp.add(srow, Relation::Ge, Rat::zero());
            }
        }
        lp.add(total, Relation::Eq, Rat::one());
        lp.solve() == LpOutcome::Infeasible
    }

    /// Bounded cells of every dimension, sorted by dimension and sign vector.
    pub fn bounded_cells(&self) -> Result<&[Cell]> {
        self.cells
            .get_or_init(|| self.compute_cells())
            .as_ref()
            .map(|v| v.as_slice())
            .map_err(Clone::clone)
    }

    fn compute_cells(&self) -> Result<Vec<Cell>> {
        let vs = self.vertices()?;
        let k = self.dim();
        let n = self.n();

        // local sign patterns around every vertex
        let local = par::map(vs, |v| {
            let base = self.signs_at(&v.point);
            let dual: Vec<Vec<Rat>> = (0..k).map(|i| v.inv.column(i)).collect();
            let mut eps = Rat::one();
            for j in 0..n {
                if v.tight.contains(&j) {
                    continue;
                }
                let s = self.residual(j, &v.point, &self.psi).abs();
                let rj = self.row_rat(j);
                let spread: Rat = dual.iter().map(|d| dot(&rj, d).abs()).sum();
                let cand = s / ((Rat::one() + spread) * rat(2));
                if cand < eps {
                    eps = cand;
                }
            }
            let mut out = Vec::new();
            let total = 3usize.pow(k as u32);
            for code in 0..total {
                let mut c = code;
                let mut signs = base.clone();
                let mut w = v.point.clone();
                let mut zeros = 0;
                for (t, &i) in v.tight.iter().enumerate() {
                    let s: i8 = (c % 3) as i8 - 1;
                    c /= 3;
                    signs[i] = s;
                    if s == 0 {
                        zeros += 1;
                        continue;
                    }
                    let step = &eps * rat(s as i64);
                    for (x, y) in w.iter_mut().zip(&dual[t]) {
                        *x += &step * y;
                    }
                }
                out.push((signs, k - zeros, w));
            }
            out
        });
        let mut unique: BTreeMap<Vec<i8>, (usize, Vec<Rat>)> = BTreeMap::new();
        for (signs, dim, w) in local.into_iter().flatten() {
            unique.entry(signs).or_insert((dim, w));
        }
        let unbounded = self.unbounded_edges(vs);
        let cands: Vec<(Vec<i8>, usize, Vec<Rat>)> =
            unique.into_iter().map(|(s, (d, w))| (s, d, w)).collect();
        let vsigns: Vec<Vec<i8>> = vs.iter().map(|v| self.signs_at(&v.point)).collect();
        let mut cells: Vec<Cell> = par::filter_map(&cands, |(signs, dim, w)| {
            let conformal = |f: &[i8]| f.iter().zip(signs).all(|(&a, &b)| a == 0 || a == b);
            if unbounded.iter().any(|e| conformal(e)) {
                return None;
            }
            if !self.cell_is_bounded_lp(signs) {
                return None;
            }
            let vertices = vsigns
                .iter()
                .enumerate()
                .filter(|(_, s)| conformal(s))
                .map(|(i, _)| i)
                .collect();
            Some(Cell {
                signs: signs.clone(),
                dim: *dim,
                witness: w.clone(),
                vertices,
            })
        });
        cells.sort_by(|x, y| x.dim.cmp(&y.dim).then(x.signs.cmp(&y.signs)));
        Ok(cells)
    }

    /// Sign vectors of the unbounded edges leaving each vertex.
    fn unbounded_edges(&self, vs: &[ArrVertex]) -> Vec<Vec<i8>> {
        let mut out = Vec::new();
        for v in vs {
            let base = self.signs_at(&v.point);
            for (t, &i) in v.tight.iter().enumerate() {
                let d = v.inv.column(t);
                for s in [-1i8, 1] {
                    // moving along s·d_i, hyperplane j is approached when its residual
                    // and the rate of change have opposite signs
                    let blocked = (0..self.n()).any(|j| {
                        if v.tight.contains(&j) {
                            return false;
                        }
                        let rate = dot(&self.row_rat(j), &d) * rat(s as i64);
                        !rate.is_zero() && sign(&rate) != base[j]
                    });
                    if !blocked {
                        let mut signs = base.clone();
                        for &c in &v.tight {
                            signs[c] = 0;
                        }
                        signs[i] = s;
                        out.push(signs);
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn f_vector(&self) -> Result<FVector> {
        let cells = self.bounded_cells()?;
        let top = cells.iter().map(|c| c.dim).max().unwrap_or(0);
        let mut f = vec![0; top + 1];
        for c in cells {
            f[c.dim] += 1;
        }
        Ok(f)
    }

    /// Bounded cells of full dimension `n − d`.
    pub fn regions(&self) -> Result<Vec<Cell>> {
        let k = self.dim();
        Ok(self
            .bounded_cells()?
            .iter()
            .filter(|c| c.dim == k)
            .cloned()
            .collect())
    }

    pub fn maximal_cells(&self) -> Result<Vec<Cell>> {
        let cells = self.bounded_cells()?;
        Ok(cells
            .iter()
            .filter(|c| !cells.iter().any(|o| o.dim > c.dim && c.is_face_of(o)))
            .cloned()
            .collect())
    }

    /// `t_i = max(0, ψ_i − b_i·w)`, `u = Bw + t − ψ`, `v = t`; returns `(u, v)`.
    pub fn lawrence_point(&self, w: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
        let mut u = Vec::with_capacity(self.n());
        let mut v = Vec::with_capacity(self.n());
        for i in 0..self.n() {
            let r = self.residual(i, w, &self.psi);
            let t = if r.is_negative() { -r.clone() } else { Rat::zero() };
            u.push(r + &t);
            v.push(t);
        }
        (u, v)
    }

    fn find_cell(&self, signs: &[i8]) -> Result<&Cell> {
        self.bounded_cells()?
            .iter()
            .find(|c| c.signs == signs)
            .ok_or(Error::UnboundedRegion)
    }

    /// Pulling triangulation of a bounded cell, as lists of vertex indices.
    pub fn triangulate(&self, signs: &[i8]) -> Result<Vec<Vec<usize>>> {
        let cell = self.find_cell(signs)?.clone();
        let cells = self.bounded_cells()?;
        let below: Vec<&Cell> = cells.iter().filter(|c| c.is_face_of(&cell)).collect();
        let mut memo: HashMap<Vec<i8>, Vec<Vec<usize>>> = HashMap::new();
        Ok(pull(&cell, &below, &mut memo))
    }

    /// Euclidean volume in the coordinates `w` (unimodular simplex ↦ `1/(n−d)!`).
    pub fn region_volume(&self, signs: &[i8]) -> Result<Rat> {
        let cell = self.find_cell(signs)?;
        if cell.dim != self.dim() {
            return Err(Error::UnboundedRegion);
        }
        let simplices = self.triangulate(signs)?;
        let vs = self.vertices()?;
        let pts: Vec<Vec<Rat>> = vs.iter().map(|v| v.point.clone()).collect();
        Ok(simplices_volume(&simplices, &pts, None)?.0)
    }

    /// Vertex coordinates at a perturbed `ψ'`, keeping each vertex's tight set.
    pub fn moved_vertices(&self, psi2: &[Rat]) -> Result<Vec<Vec<Rat>>> {
        Ok(self
            .vertices()?
            .iter()
            .map(|v| {
                let rhs: Vec<Rat> = v.tight.iter().map(|&i| psi2[i].clone()).collect();
                v.inv.mul_vec(&rhs)
            })
            .collect())
    }

    /// `ψ'` gives the same combinatorial type: every vertex keeps its sign vector.
    pub fn same_type(&self, psi2: &[Rat]) -> Result<bool> {
        let vs = self.vertices()?;
        let moved = self.moved_vertices(psi2)?;
        Ok(vs.iter().zip(&moved).all(|(v, w)| {
            let old = self.signs_at(&v.point);
            (0..self.n()).all(|i| sign(&self.residual(i, w, psi2)) == old[i])
        }))
    }

    /// Volume of a triangulated region at `ψ'`, with orientations checked against `ψ`.
    pub fn volume_at(&self, simplices: &[Vec<usize>], psi2: &[Rat]) -> Result<Rat> {
        let vs = self.vertices()?;
        let base: Vec<Vec<Rat>> = vs.iter().map(|v| v.point.clone()).collect();
        let (_, signs) = simplices_volume(simplices, &base, None)?;
        let moved = self.moved_vertices(psi2)?;
        Ok(simplices_volume(simplices, &moved, Some(&signs))?.0)
    }

    /// Volume of a region as a polynomial in `ψ`, from vertices that are linear in `ψ`.
    pub fn symbolic_volume(&self, signs: &[i8]) -> Result<MultiPoly> {
        let cell = self.find_cell(signs)?;
        if cell.dim != self.dim() {
            return Err(Error::UnboundedRegion);
        }
        let simplices = self.triangulate(signs)?;
        let vs = self.vertices()?;
        let n = self.n();
        let k = self.dim();
        let base: Vec<Vec<Rat>> = vs.iter().map(|v| v.point.clone()).collect();
        let (_, orient) = simplices_volume(&simplices, &base, None)?;
        let linear: Vec<Vec<MultiPoly>> = vs
            .iter()
            .map(|v| {
                (0..k)
                    .map(|r| {
                        let mut coeffs = vec![Rat::zero(); n];
                        for (t, &i) in v.tight.iter().enumerate() {
                            coeffs[i] = v.inv.get(r, t).clone();
                        }
                        MultiPoly::linear(&coeffs)
                    })
                    .collect()
            })
            .collect();
        let mut total = MultiPoly::zero(n);
        for (s, o) in simplices.iter().zip(&orient) {
            let rows: Vec<Vec<MultiPoly>> = s[1..]
                .iter()
                .map(|&vi| {
                    (0..k)
                        .map(|r| linear[vi][r].sub(&linear[s[0]][r]).expect("same nvars"))
                        .collect()
                })
                .collect();
            let det = poly_det(&rows, n);
            total = total.add(&det.scale(&rat(*o as i64)))?;
        }
        Ok(total.scale(&Rat::new(Int::one(), factorial(k))))
    }
}

fn factorial(k: usize) -> Int {
    (1..=k).fold(Int::one(), |acc, i| acc * Int::from(i))
}

fn pull(
    cell: &Cell,
    below: &[&Cell],
    memo: &mut HashMap<Vec<i8>, Vec<Vec<usize>>>,
) -> Vec<Vec<usize>> {
    if let Some(s) = memo.get(&cell.signs) {
        return s.clone();
    }
    let out = if cell.dim == 0 {
        vec![vec![cell.vertices[0]]]
    } else {
        let apex = cell.vertices[0];
        let mut out = Vec::new();
        let facets: Vec<&Cell> = below
            .iter()
            .copied()
            .filter(|f| f.dim + 1 == cell.dim && f.is_face_of(cell) && !f.vertices.contains(&apex))
            .collect();
        for f in facets {
            for mut s in pull(f, below, memo) {
                s.insert(0, apex);
                out.push(s);
            }
        }
        out
    };
    memo.insert(cell.signs.clone(), out.clone());
    out
}

/// Sum of `|det| / k!` over simplices; with `orient` given, every determinant
/// must keep the recorded sign.
fn simplices_volume(
    simplices: &[Vec<usize>],
    pts: &[Vec<Rat>],
    orient: Option<&[i8]>,
) -> Result<(Rat, Vec<i8>)> {
    let mut total = Rat::zero();
    let mut signs = Vec::with_capacity(simplices.len());
    let k = pts.first().map_or(0, |p| p.len());
    for (idx, s) in simplices.iter().enumerate() {
        let rows: Vec<Vec<Rat>> = s[1..]
            .iter()
            .map(|&v| pts[v].iter().zip(&pts[s[0]]).map(|(a, b)| a - b).collect())
            .collect();
        let det = rat_det(rows, k);
        let sg = sign(&det);
        if let Some(o) = orient {
            if sg != o[idx] {
                return Err(Error::ChamberCrossed(idx));
            }
        }
        signs.push(sg);
        total += det.abs();
    }
    Ok((total / Rat::from_integer(factorial(k)), signs))
}

fn rat_det(mut m: Vec<Vec<Rat>>, k: usize) -> Rat {
    let mut det = Rat::one();
    for c in 0..k {
        let Some(p) = (c..k).find(|&r| !m[r][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        let pr = m[c].clone();
        for r in c + 1..k {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &pr[c];
            for (x, y) in m[r].iter_mut().zip(&pr) {
                *x -= &f * y;
            }
        }
    }
    det
}

/// Laplace expansion for small polynomial matrices.
fn poly_det(m: &[Vec<MultiPoly>], nvars: usize) -> MultiPoly {
    let k = m.len();
    if k == 0 {
        return MultiPoly::constant(nvars, Rat::one());
    }
    let mut total = MultiPoly::zero(nvars);
    for c in 0..k {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<MultiPoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != c)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let term = m[0][c].mul(&poly_det(&minor, nvars)).expect("same nvars");
        total = if c % 2 == 0 {
            total.add(&term)
        } else {
            total.sub(&term)
        }
        .expect("same nvars");
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{ratio, rat_vec};

    #[test]
    fn points_on_a_line() {
        let b = IntMatrix::from_i64_rows(&[&[1], &[1], &[1], &[1]]);
        let arr = AffineArrangement::new(b, rat_vec(&[0, 3, 1, 7])).unwrap();
        assert_eq!(arr.f_vector().unwrap(), vec![4, 3]);
        let lens: Vec<Rat> = arr
            .regions()
            .unwrap()
            .iter()
            .map(|c| arr.region_volume(&c.signs).unwrap())
            .collect();
        let mut sorted = lens.clone();
        sorted.sort();
        assert_eq!(sorted, rat_vec(&[1, 2, 4]));
    }

    #[test]
    fn single_hyperplane() {
        let arr = AffineArrangement::new(IntMatrix::from_i64_rows(&[&[1]]), rat_vec(&[5])).unwrap();
        assert_eq!(arr.f_vector().unwrap(), vec![1]);
    }

    #[test]
    fn unit_square() {
        let b = IntMatrix::from_i64_rows(&[&[1, 0], &[1, 0], &[0, 1], &[0, 1]]);
        let arr = AffineArrangement::new(b, rat_vec(&[0, 1, 0, 1])).unwrap();
        assert_eq!(arr.f_vector().unwrap(), vec![4, 4, 1]);
        let sq = &arr.regions().unwrap()[0];
        assert_eq!(arr.region_volume(&sq.signs).unwrap(), rat(1));
        let sym = arr.symbolic_volume(&sq.signs).unwrap();
        assert_eq!(sym.eval(&rat_vec(&[0, 1, 0, 1])), rat(1));
        assert_eq!(sym.eval(&rat_vec(&[0, 2, 0, 3])), rat(6));
    }

    #[test]
    fn triangle_volume_is_half_leg_product() {
        let b = IntMatrix::from_i64_rows(&[&[1, 0], &[0, 1], &[-1, -1]]);
        let arr = AffineArrangement::new(b, rat_vec(&[0, 0, -2])).unwrap();
        let t = &arr.regions().unwrap()[0];
        assert_eq!(arr.region_volume(&t.signs).unwrap(), rat(2));
        let psi2 = vec![ratio(1, 10), rat(0), rat(-2)];
        let simp = arr.triangulate(&t.signs).unwrap();
        assert!(arr.same_type(&psi2).unwrap());
        assert_eq!(arr.volume_at(&simp, &psi2).unwrap(), ratio(361, 200));
    }

    #[test]
    fn zero_row_rejected() {
        let b = IntMatrix::from_i64_rows(&[&[1], &[0]]);
        assert_eq!(
            AffineArrangement::new(b, rat_vec(&[0, 0])).unwrap_err(),
            Error::LoopPresent(1)
        );
    }
}
