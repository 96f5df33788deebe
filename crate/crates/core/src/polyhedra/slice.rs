use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use super::{is_generic, BasisTable, FVector};
use crate::error::{Error, Result};
use crate::exact::lp::{LinearProgram, LpOutcome, Relation};
use crate::exact::{dot, indices_of, mask_of, rat_from_int, Int, IntMatrix, Rat};
use crate::gale::lawrence_configuration;
use crate::par;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    /// A feasible basis realizing the vertex.
    pub basis: Vec<usize>,
    pub point: Vec<Rat>,
    pub support: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub dim: usize,
    /// Coordinates allowed to be nonzero on the face.
    pub support: Vec<usize>,
    /// Indices into the slice's vertex list.
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct BoundedComplex {
    pub faces: Vec<Face>,
    pub f_vector: FVector,
}

impl BoundedComplex {
    pub fn maximal_faces(&self) -> Vec<&Face> {
        let masks: Vec<u64> = self.faces.iter().map(|f| mask_of(&f.support)).collect();
        self.faces
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                !masks
                    .iter()
                    .enumerate()
                    .any(|(j, &m)| j != *i && m & masks[*i] == masks[*i] && m != masks[*i])
            })
            .map(|(_, f)| f)
            .collect()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.faces.iter().map(|f| f.dim).max()
    }

    pub fn is_pure(&self) -> bool {
        let top = self.dimension();
        self.maximal_faces().iter().all(|f| Some(f.dim) == top)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarCollapseReport {
    /// Anchors ordered by increasing cost, faces spanned by descending edges.
    pub forward: bool,
    /// Same check with the cost vector negated.
    pub backward: bool,
    pub order: Vec<usize>,
}

/// `P_θ = {u ≥ 0 : Au = θ}`.
#[derive(Debug, Clone)]
pub struct PolyhedronSlice {
    a: IntMatrix,
    theta: Vec<Rat>,
    table: BasisTable,
    feasible: OnceLock<Vec<(Vec<usize>, Vec<Rat>)>>,
    vertices: OnceLock<Vec<Vertex>>,
}

impl PolyhedronSlice {
    pub fn new(a: IntMatrix, theta: Vec<Rat>) -> Result<Self> {
        let table = BasisTable::new(&a);
        Self::with_table(table, theta)
    }

    /// Reuses precomputed basis inverses for `table.matrix()`.
    pub fn with_table(table: BasisTable, theta: Vec<Rat>) -> Result<Self> {
        let a = table.matrix().clone();
        if theta.len() != a.rows() {
            return Err(Error::DimensionMismatch(format!(
                "theta has {} entries, A has {} rows",
                theta.len(),
                a.rows()
            )));
        }
        let r = a.rank();
        if r < a.rows() {
            return Err(Error::NotFullRank {
                rank: r,
                rows: a.rows(),
            });
        }
        Ok(PolyhedronSlice {
            a,
            theta,
            table,
            feasible: OnceLock::new(),
            vertices: OnceLock::new(),
        })
    }

    /// The slice of the Lawrence configuration `[A, −A]`.
    pub fn lawrence(a: &IntMatrix, theta: Vec<Rat>) -> Result<Self> {
        Self::new(lawrence_configuration(a), theta)
    }

    pub fn from_ints(a: IntMatrix, theta: &[Int]) -> Result<Self> {
        Self::new(a, theta.iter().map(rat_from_int).collect())
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn theta(&self) -> &[Rat] {
        &self.theta
    }

    pub fn ambient_dim(&self) -> usize {
        self.a.cols()
    }

    pub fn is_generic(&self) -> bool {
        is_generic(&self.theta, &self.a)
    }

    /// Feasible bases with the basic coordinates `A_C^{-1}θ`.
    pub fn feasible_bases(&self) -> &[(Vec<usize>, Vec<Rat>)] {
        self.feasible.get_or_init(|| self.table.feasible(&self.theta))
    }

    pub fn vertices(&self) -> Result<&[Vertex]> {
        let vs = self.vertices.get_or_init(|| {
            let n = self.a.cols();
            let mut seen: HashMap<Vec<Rat>, usize> = HashMap::new();
            let mut out: Vec<Vertex> = Vec::new();
            for (c, lam) in self.feasible_bases() {
                let mut point = vec![Rat::zero(); n];
                for (k, &j) in c.iter().enumerate() {
                    point[j] = lam[k].clone();
                }
                if seen.contains_key(&point) {
                    continue;
                }
                let support = (0..n).filter(|&i| !point[i].is_zero()).collect();
                seen.insert(point.clone(), out.len());
                out.push(Vertex {
                    basis: c.clone(),
                    point,
                    support,
                });
            }
            out.sort_by(|x, y| x.support.cmp(&y.support).then(x.basis.cmp(&y.basis)));
            out
        });
        if vs.is_empty() {
            Err(Error::InfeasibleSlice)
        } else {
            Ok(vs)
        }
    }

    /// Every vertex has exactly `d` nonzero coordinates.
    pub fn is_simple(&self) -> bool {
        let d = self.a.rows();
        match self.vertices() {
            Ok(vs) => vs.iter().all(|v| v.support.len() == d) && vs.len() == self.feasible_bases().len(),
            Err(_) => true,
        }
    }

    pub fn is_integral_degree(&self) -> bool {
        self.vertices()
            .map(|vs| vs.iter().all(|v| v.point.iter().all(|x| x.is_integer())))
            .unwrap_or(true)
    }

    /// Every feasible basis is a lattice basis.
    pub fn is_smooth_degree(&self) -> bool {
        self.feasible_bases()
            .iter()
            .all(|(c, _)| self.a.select_columns(c).det().abs().is_one())
    }

    fn require_simple(&self) -> Result<()> {
        self.vertices()?;
        if !self.is_simple() {
            return Err(Error::NonGenericTheta(
                "the slice is not simple at this degree".into(),
            ));
        }
        Ok(())
    }

    /// Unbounded edges as support masks `S ∪ {j}`, where entering `j` at the
    /// vertex with support `S` meets no blocking coordinate.
    fn unbounded_edge_masks(&self) -> Vec<u64> {
        let vs = self.vertices().unwrap_or(&[]);
        let n = self.a.cols();
        let inv_of: HashMap<&Vec<usize>, &crate::exact::RatMatrix> =
            self.table.entries().iter().map(|(c, inv)| (c, inv)).collect();
        let mut out = Vec::new();
        for v in vs {
            let inv = inv_of[&v.basis];
            let smask = mask_of(&v.basis);
            for j in 0..n {
                if smask >> j & 1 == 1 {
                    continue;
                }
                let aj: Vec<Rat> = self.a.column(j).iter().map(rat_from_int).collect();
                let w = inv.mul_vec(&aj);
                if w.iter().all(|x| !x.is_positive()) {
                    out.push(smask | 1 << j);
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// LP certificate: the face on `support` has trivial recession cone.
    pub fn face_is_bounded_lp(&self, support: &[usize]) -> bool {
        let k = support.len();
        if k == 0 {
            return true;
        }
        let sub = self.a.select_columns(support).to_rat();
        let mut lp = LinearProgram::new(k).maximize(vec![Rat::one(); k]);
        for r in 0..sub.rows() {
            lp.add(sub.row(r).to_vec(), Relation::Eq, Rat::zero());
        }
        for i in 0..k {
            let mut e = vec![Rat::zero(); k];
            e[i] = Rat::one();
            lp.add(e, Relation::Le, Rat::one());
        }
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => value.is_zero(),
            _ => false,
        }
    }

    /// Bounded faces of a simple slice, grown from the vertices one coordinate at a time.
    pub fn bounded_complex(&self) -> Result<BoundedComplex> {
        self.require_simple()?;
        let vs = self.vertices()?;
        let d = self.a.rows();
        let n = self.a.cols();
        let vmasks: Vec<u64> = vs.iter().map(|v| mask_of(&v.support)).collect();
        let unbounded = self.unbounded_edge_masks();

        let mut found: BTreeSet<u64> = vmasks.iter().copied().collect();
        let mut frontier: Vec<u64> = found.iter().copied().collect();
        while !frontier.is_empty() {
            let mut cands: Vec<u64> = frontier
                .iter()
                .flat_map(|&z| (0..n).filter(move |j| z >> j & 1 == 0).map(move |j| z | 1 << j))
                .collect();
            cands.sort();
            cands.dedup();
            cands.retain(|z| !found.contains(z));
            let accepted = par::filter_map(&cands, |&z| {
                let union = vmasks
                    .iter()
                    .filter(|&&m| m & z == m)
                    .fold(0u64, |acc, &m| acc | m);
                if union != z {
                    return None;
                }
                if unbounded.iter().any(|&e| e & z == e) {
                    return None;
                }
                self.face_is_bounded_lp(&indices_of(z)).then_some(z)
            });
            for &z in &accepted {
                found.insert(z);
            }
            frontier = accepted;
        }

        let mut faces: Vec<Face> = found
            .into_iter()
            .map(|z| {
                let support = indices_of(z);
                let vertices = vmasks
                    .iter()
                    .enumerate()
                    .filter(|(_, &m)| m & z == m)
                    .map(|(i, _)| i)
                    .collect();
                Face {
                    dim: support.len() - d,
                    support,
                    vertices,
                }
            })
            .collect();
        faces.sort();
        let top = faces.iter().map(|f| f.dim).max().unwrap_or(0);
        let mut f_vector = vec![0; top + 1];
        for f in &faces {
            f_vector[f.dim] += 1;
        }
        Ok(BoundedComplex { faces, f_vector })
    }

    /// Integer points on the bounded faces.
    pub fn lattice_points_bounded(&self) -> Result<Vec<Vec<Int>>> {
        let bc = self.bounded_complex()?;
        let vs = self.vertices()?;
        let inv_of: HashMap<&Vec<usize>, &crate::exact::RatMatrix> =
            self.table.entries().iter().map(|(c, inv)| (c, inv)).collect();
        let maximal: Vec<Face> = bc.maximal_faces().into_iter().cloned().collect();
        let per_face = par::map(&maximal, |face| {
            let v0 = &vs[face.vertices[0]];
            let inv = inv_of[&v0.basis];
            let basis = &v0.basis;
            let free: Vec<usize> = face
                .support
                .iter()
                .copied()
                .filter(|j| !basis.contains(j))
                .collect();
            let ub: Vec<Int> = free
                .iter()
                .map(|&j| {
                    face.vertices
                        .iter()
                        .map(|&vi| vs[vi].point[j].floor().to_integer())
                        .max()
                        .unwrap_or_else(Int::zero)
                })
                .collect();
            let mut pts = Vec::new();
            let mut cur = vec![Int::zero(); free.len()];
            loop {
                let mut rhs = self.theta.clone();
                for (k, &j) in free.iter().enumerate() {
                    if cur[k].is_zero() {
                        continue;
                    }
                    let c = rat_from_int(&cur[k]);
                    for (r, x) in rhs.iter_mut().enumerate() {
                        *x -= &c * rat_from_int(self.a.get(r, j));
                    }
                }
                let ub_vals = inv.mul_vec(&rhs);
                if ub_vals.iter().all(|x| x.is_integer() && !x.is_negative()) {
                    let mut p = vec![Int::zero(); self.a.cols()];
                    for (k, &j) in basis.iter().enumerate() {
                        p[j] = ub_vals[k].to_integer();
                    }
                    for (k, &j) in free.iter().enumerate() {
                        p[j] = cur[k].clone();
                    }
                    pts.push(p);
                }
                // odometer over the box
                let mut i = 0;
                loop {
                    if i == free.len() {
                        return pts;
                    }
                    if cur[i] < ub[i] {
                        cur[i] += 1;
                        break;
                    }
                    cur[i] = Int::zero();
                    i += 1;
                }
            }
        });
        let set: BTreeSet<Vec<Int>> = per_face.into_iter().flatten().collect();
        Ok(set.into_iter().collect())
    }

    /// Orders vertices by the cost `c` and checks that each new vertex adds exactly
    /// the faces of its descending star. `c` must be positive with distinct values on vertices.
    pub fn star_collapsibility(&self, c: &[Rat]) -> Result<StarCollapseReport> {
        if c.len() != self.a.cols() || c.iter().any(|x| !x.is_positive()) {
            return Err(Error::NonGenericDirection(
                "cost vector must have positive entries in every coordinate".into(),
            ));
        }
        let bc = self.bounded_complex()?;
        let vs = self.vertices()?;
        let mut values: Vec<Rat> = vs.iter().map(|v| dot(c, &v.point)).collect();
        {
            let mut sorted = values.clone();
            sorted.sort();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::NonGenericDirection("two vertices share a cost value".into()));
            }
        }
        let forward = self.star_order_check(&bc, vs, c, &values)?;
        let neg: Vec<Rat> = c.iter().map(|x| -x.clone()).collect();
        for v in values.iter_mut() {
            *v = -v.clone();
        }
        let backward = self.star_order_check(&bc, vs, &neg, &values)?;
        let mut order: Vec<usize> = (0..vs.len()).collect();
        order.sort_by(|&i, &j| dot(c, &vs[i].point).cmp(&dot(c, &vs[j].point)));
        Ok(StarCollapseReport {
            forward: forward.is_some(),
            backward: backward.is_some(),
            order,
        })
    }

    fn star_order_check(
        &self,
        bc: &BoundedComplex,
        vs: &[Vertex],
        c: &[Rat],
        values: &[Rat],
    ) -> Result<Option<()>> {
        let n = self.a.cols();
        let inv_of: HashMap<&Vec<usize>, &crate::exact::RatMatrix> =
            self.table.entries().iter().map(|(c, inv)| (c, inv)).collect();
        let face_masks: Vec<u64> = bc.faces.iter().map(|f| mask_of(&f.support)).collect();
        let face_set: HashSet<u64> = face_masks.iter().copied().collect();
        let mut order: Vec<usize> = (0..vs.len()).collect();
        order.sort_by(|&i, &j| values[i].cmp(&values[j]));

        let mut covered: HashSet<u64> = HashSet::new();
        for &p in &order {
            let v = &vs[p];
            let inv = inv_of[&v.basis];
            let smask = mask_of(&v.basis);
            let mut span = smask;
            for j in 0..n {
                if smask >> j & 1 == 1 {
                    continue;
                }
                let aj: Vec<Rat> = self.a.column(j).iter().map(rat_from_int).collect();
                let w = inv.mul_vec(&aj);
                let mut slope = c[j].clone();
                for (k, &b) in v.basis.iter().enumerate() {
                    slope -= &c[b] * &w[k];
                }
                if slope.is_zero() {
                    return Err(Error::NonGenericDirection(format!(
                        "edge entering coordinate {j} is level"
                    )));
                }
                if slope.is_negative() {
                    span |= 1 << j;
                }
            }
            if !face_set.contains(&span) {
                return Ok(None);
            }
            let star: HashSet<u64> = face_masks
                .iter()
                .copied()
                .filter(|&m| m & span == m)
                .collect();
            let new: HashSet<u64> = star.difference(&covered).copied().collect();
            let expect: HashSet<u64> = star.iter().copied().filter(|&m| m & smask == smask).collect();
            if new != expect {
                return Ok(None);
            }
            covered.extend(star);
        }
        Ok((covered.len() == face_masks.len()).then_some(()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_vec};

    fn intro() -> PolyhedronSlice {
        PolyhedronSlice::lawrence(&IntMatrix::from_i64_rows(&[&[1, 1, 1]]), rat_vec(&[1])).unwrap()
    }

    #[test]
    fn intro_triangle() {
        let p = intro();
        let vs = p.vertices().unwrap();
        assert_eq!(vs.len(), 3);
        assert_eq!(
            vs.iter().map(|v| v.support.clone()).collect::<Vec<_>>(),
            vec![vec![0], vec![1], vec![2]]
        );
        let bc = p.bounded_complex().unwrap();
        assert_eq!(bc.f_vector, vec![3, 3, 1]);
        let rep = p.star_collapsibility(&rat_vec(&[1, 2, 4, 1, 1, 1])).unwrap();
        assert!(rep.forward);
    }

    #[test]
    fn empty_slice() {
        let p = PolyhedronSlice::new(IntMatrix::from_i64_rows(&[&[1]]), rat_vec(&[-1])).unwrap();
        assert_eq!(p.vertices().unwrap_err(), Error::InfeasibleSlice);
    }

    #[test]
    fn integrality_and_smoothness() {
        let p = PolyhedronSlice::new(IntMatrix::from_i64_rows(&[&[2]]), rat_vec(&[1])).unwrap();
        assert!(!p.is_integral_degree());
        let q = PolyhedronSlice::new(IntMatrix::from_i64_rows(&[&[1, 2]]), rat_vec(&[2])).unwrap();
        assert!(q.is_integral_degree());
        assert!(!q.is_smooth_degree());
        assert_eq!(q.vertices().unwrap().len(), 2);
    }

    #[test]
    fn lp_and_edge_boundedness_agree_on_a_ray() {
        // u0 - u1 = 1 has an unbounded edge
        let p = PolyhedronSlice::new(IntMatrix::from_i64_rows(&[&[1, -1]]), vec![rat(1)]).unwrap();
        assert!(!p.face_is_bounded_lp(&[0, 1]));
        assert!(p.face_is_bounded_lp(&[0]));
        let bc = p.bounded_complex().unwrap();
        assert_eq!(bc.f_vector, vec![1]);
    }
}
