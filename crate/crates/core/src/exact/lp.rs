//! Dense two-phase simplex over the rationals with Bland's rule.

use num_traits::{One, Signed, Zero};

use super::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rat, point: Vec<Rat> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }

    pub fn point(&self) -> Option<&[Rat]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

/// Maximize `objective · x` subject to linear rows. Variables are nonnegative
/// unless marked free.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    nvars: usize,
    free: Vec<bool>,
    objective: Vec<Rat>,
    rows: Vec<(Vec<Rat>, Relation, Rat)>,
}

impl LinearProgram {
    pub fn new(nvars: usize) -> Self {
        LinearProgram {
            nvars,
            free: vec![false; nvars],
            objective: vec![Rat::zero(); nvars],
            rows: Vec::new(),
        }
    }

    pub fn free_vars(mut self) -> Self {
        self.free = vec![true; self.nvars];
        self
    }

    pub fn set_free(&mut self, i: usize) {
        self.free[i] = true;
    }

    pub fn maximize(mut self, c: Vec<Rat>) -> Self {
        assert_eq!(c.len(), self.nvars);
        self.objective = c;
        self
    }

    pub fn add(&mut self, coeffs: Vec<Rat>, rel: Relation, rhs: Rat) {
        assert_eq!(coeffs.len(), self.nvars);
        self.rows.push((coeffs, rel, rhs));
    }

    pub fn solve(&self) -> LpOutcome {
        // column layout: split structurals, then one slack per inequality, then artificials
        let mut struct_cols: Vec<(usize, bool)> = Vec::new();
        for i in 0..self.nvars {
            struct_cols.push((i, false));
            if self.free[i] {
                struct_cols.push((i, true));
            }
        }
        let ns = struct_cols.len();
        let nslack = self.rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let m = self.rows.len();
        let ncols = ns + nslack + m;
        let rhs_col = ncols;
        let mut tab: Vec<Vec<Rat>> = Vec::with_capacity(m);
        let mut slack = ns;
        for (k, (coeffs, rel, rhs)) in self.rows.iter().enumerate() {
            let mut row = vec![Rat::zero(); ncols + 1];
            for (c, &(i, neg)) in struct_cols.iter().enumerate() {
                row[c] = if neg { -coeffs[i].clone() } else { coeffs[i].clone() };
            }
            match rel {
                Relation::Le => {
                    row[slack] = Rat::one();
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -Rat::one();
                    slack += 1;
                }
                Relation::Eq => {}
            }
            row[rhs_col] = rhs.clone();
            if rhs.is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
            }
            row[ns + nslack + k] = Rat::one();
            tab.push(row);
        }
        let mut basis: Vec<usize> = (0..m).map(|k| ns + nslack + k).collect();
        let art_start = ns + nslack;

        // phase 1: minimize the sum of artificials
        let mut cost1 = vec![Rat::zero(); ncols];
        for c in cost1.iter_mut().skip(art_start) {
            *c = Rat::one();
        }
        if simplex(&mut tab, &mut basis, &cost1, ncols) == Step::Unbounded {
            unreachable!("phase one objective is bounded below");
        }
        let infeas: Rat = basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| b >= art_start)
            .map(|(i, _)| tab[i][rhs_col].clone())
            .sum();
        if infeas.is_positive() {
            return LpOutcome::Infeasible;
        }
        // drive remaining artificials out of the basis or drop redundant rows
        let mut i = 0;
        while i < tab.len() {
            if basis[i] >= art_start {
                match (0..art_start).find(|&j| !tab[i][j].is_zero()) {
                    Some(j) => pivot(&mut tab, &mut basis, i, j),
                    None => {
                        tab.remove(i);
                        basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }

        let mut cost2 = vec![Rat::zero(); ncols];
        for (c, &(i, neg)) in struct_cols.iter().enumerate() {
            let o = &self.objective[i];
            cost2[c] = if neg { o.clone() } else { -o.clone() };
        }
        if simplex(&mut tab, &mut basis, &cost2, art_start) == Step::Unbounded {
            return LpOutcome::Unbounded;
        }
        let mut xs = vec![Rat::zero(); ncols];
        for (i, &b) in basis.iter().enumerate() {
            xs[b] = tab[i][rhs_col].clone();
        }
        let mut point = vec![Rat::zero(); self.nvars];
        for (c, &(i, neg)) in struct_cols.iter().enumerate() {
            if neg {
                point[i] -= &xs[c];
            } else {
                point[i] += &xs[c];
            }
        }
        let value = super::dot(&self.objective, &point);
        LpOutcome::Optimal { value, point }
    }
}

#[derive(PartialEq, Eq)]
enum Step {
    Optimal,
    Unbounded,
}

fn pivot(tab: &mut [Vec<Rat>], basis: &mut [usize], r: usize, c: usize) {
    let inv = tab[r][c].recip();
    for x in tab[r].iter_mut() {
        if !x.is_zero() {
            *x = &*x * &inv;
        }
    }
    let prow = tab[r].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (x, y) in row.iter_mut().zip(&prow) {
            if !y.is_zero() {
                *x = &*x - &f * y;
            }
        }
    }
    basis[r] = c;
}

/// Minimizes `cost · x` over columns `< allowed`, starting from a feasible basis.
fn simplex(tab: &mut [Vec<Rat>], basis: &mut [usize], cost: &[Rat], allowed: usize) -> Step {
    let rhs = tab.first().map_or(0, |r| r.len() - 1);
    loop {
        let entering = (0..allowed).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let mut r = cost[j].clone();
            for (i, &b) in basis.iter().enumerate() {
                if !cost[b].is_zero() && !tab[i][j].is_zero() {
                    r -= &cost[b] * &tab[i][j];
                }
            }
            r.is_negative()
        });
        let Some(j) = entering else {
            return Step::Optimal;
        };
        let mut best: Option<(usize, Rat)> = None;
        for i in 0..tab.len() {
            if !tab[i][j].is_positive() {
                continue;
            }
            let ratio = &tab[i][rhs] / &tab[i][j];
            let better = match &best {
                None => true,
                Some((bi, br)) => ratio < *br || (ratio == *br && basis[i] < basis[*bi]),
            };
            if better {
                best = Some((i, ratio));
            }
        }
        match best {
            None => return Step::Unbounded,
            Some((i, _)) => pivot(tab, basis, i, j),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_vec};

    #[test]
    fn small_maximization() {
        // max x + y s.t. x + 2y <= 4, 3x + y <= 6
        let mut lp = LinearProgram::new(2).maximize(rat_vec(&[1, 1]));
        lp.add(rat_vec(&[1, 2]), Relation::Le, rat(4));
        lp.add(rat_vec(&[3, 1]), Relation::Le, rat(6));
        match lp.solve() {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, crate::exact::ratio(14, 5));
                assert_eq!(point, vec![crate::exact::ratio(8, 5), crate::exact::ratio(6, 5)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.add(rat_vec(&[1]), Relation::Le, rat(-1));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);
        let mut lp = LinearProgram::new(2).maximize(rat_vec(&[1, 0]));
        lp.add(rat_vec(&[1, -1]), Relation::Eq, rat(0));
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn free_variables_and_redundant_rows() {
        let mut lp = LinearProgram::new(2).free_vars().maximize(rat_vec(&[-1, 0]));
        lp.add(rat_vec(&[1, 1]), Relation::Eq, rat(0));
        lp.add(rat_vec(&[2, 2]), Relation::Eq, rat(0));
        lp.add(rat_vec(&[1, 0]), Relation::Ge, rat(-3));
        match lp.solve() {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, rat(3));
                assert_eq!(point, rat_vec(&[-3, 3]));
            }
            other => panic!("{other:?}"),
        }
    }
}
