//! Pure integer programs and their group (corner-relaxation) form.
//!
//! An [`IpInstance`] is `min cx, Ax ~ b, 0 <= x <= u, x integer`. After
//! slack columns turn every row into an equality, a basis `B` rewrites the
//! problem over the nonbasic variables as
//!
//! ```text
//! min  cbar x
//!      G x ≡ g0 (mod 1)
//!      H x >= h0
//!      0 <= x <= u_N, x integer
//! ```
//!
//! where `G`, `g0` are the fractional parts of `A_B⁻¹A_N`, `A_B⁻¹b` and the
//! `H` rows restate the sign (and upper-bound) constraints of the basic
//! variables.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::arith::{
    dot, dot_point, frac, int, unit_point, Point, Rational, RationalMatrix, RationalVector,
};
use crate::linprog::{simplex_solve, LinearProgram, LpError, LpOutcome, Relation, Sense};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("upper bound of variable {0} is negative")]
    NegativeBound(usize),
    #[error("LP relaxation is infeasible")]
    LpInfeasible,
    #[error("LP relaxation is unbounded")]
    LpUnbounded,
    #[error("constraint matrix is rank deficient")]
    RankDeficient,
    #[error("basis must list {expected} distinct columns, got {found}")]
    BasisSize { expected: usize, found: usize },
    #[error("basis column {0} out of range")]
    BasisIndex(usize),
    #[error("basis matrix is singular")]
    SingularBasis,
    #[error("point {0:?} is not feasible")]
    NotFeasible(Point),
    #[error("unit elimination needs a finite upper bound on every nonbasic variable")]
    MissingBox,
    #[error("every variable was eliminated")]
    AllVariablesEliminated,
    #[error(transparent)]
    Lp(#[from] LpError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IpInstance {
    pub a: RationalMatrix,
    pub relations: Vec<Relation>,
    pub b: RationalVector,
    pub c: RationalVector,
    /// Integer upper bound per variable; `None` leaves it unbounded.
    pub upper: Vec<Option<i64>>,
}

impl IpInstance {
    pub fn new(
        a: RationalMatrix,
        relations: Vec<Relation>,
        b: RationalVector,
        c: RationalVector,
        upper: Option<Vec<Option<i64>>>,
    ) -> Result<Self, ModelError> {
        let (m, n) = (a.rows(), a.cols());
        let check = |what, expected, found| {
            if expected == found {
                Ok(())
            } else {
                Err(ModelError::Dimension {
                    what,
                    expected,
                    found,
                })
            }
        };
        check("right-hand side", m, b.len())?;
        check("relations", m, relations.len())?;
        check("objective", n, c.len())?;
        let upper = upper.unwrap_or_else(|| vec![None; n]);
        check("bounds", n, upper.len())?;
        if let Some(j) = upper.iter().position(|u| matches!(u, Some(k) if *k < 0)) {
            return Err(ModelError::NegativeBound(j));
        }
        Ok(IpInstance {
            a,
            relations,
            b,
            c,
            upper,
        })
    }

    /// Equality-only instance with no bounds.
    pub fn equality(a: RationalMatrix, b: RationalVector, c: RationalVector) -> Result<Self, ModelError> {
        let m = a.rows();
        Self::new(a, vec![Relation::Eq; m], b, c, None)
    }

    pub fn num_vars(&self) -> usize {
        self.a.cols()
    }

    pub fn num_rows(&self) -> usize {
        self.a.rows()
    }

    pub fn is_standard(&self) -> bool {
        self.relations.iter().all(|r| *r == Relation::Eq)
    }

    /// Appends one zero-cost slack (or surplus) column per inequality row.
    pub fn standardize(&self) -> IpInstance {
        let extra = self.relations.iter().filter(|r| **r != Relation::Eq).count();
        if extra == 0 {
            return self.clone();
        }
        let n = self.num_vars();
        let mut rows = Vec::with_capacity(self.num_rows());
        let mut next = n;
        for (i, rel) in self.relations.iter().enumerate() {
            let mut row = self.a.row(i).to_vec();
            row.resize(n + extra, Rational::zero());
            match rel {
                Relation::Le => {
                    row[next] = int(1);
                    next += 1;
                }
                Relation::Ge => {
                    row[next] = int(-1);
                    next += 1;
                }
                Relation::Eq => {}
            }
            rows.push(row);
        }
        let mut c = self.c.clone();
        c.resize(n + extra, Rational::zero());
        let mut upper = self.upper.clone();
        upper.resize(n + extra, None);
        IpInstance {
            a: RationalMatrix::from_rows(rows, n + extra),
            relations: vec![Relation::Eq; self.num_rows()],
            b: self.b.clone(),
            c,
            upper,
        }
    }

    /// Inequality rows carry an implicit integer slack, so `b - Ax` must be
    /// integral on them.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars()
            && x.iter().all(|v| v.is_integer() && !v.is_negative())
            && self
                .upper
                .iter()
                .zip(x)
                .all(|(u, v)| u.is_none_or(|k| *v <= int(k)))
            && self.relations.iter().enumerate().all(|(i, rel)| {
                let lhs = dot(self.a.row(i), x);
                rel.holds(&lhs, &self.b[i]) && (*rel == Relation::Eq || (&self.b[i] - &lhs).is_integer())
            })
    }

    pub fn objective(&self, x: &[Rational]) -> Rational {
        dot(&self.c, x)
    }
}

/// Optimal basis of the LP relaxation (bounds ignored) and its value.
pub fn lp_optimal_basis(inst: &IpInstance) -> Result<(Vec<usize>, Rational), ModelError> {
    let std = inst.standardize();
    let mut lp = LinearProgram::new(Sense::Minimize, std.c.clone());
    for i in 0..std.num_rows() {
        lp.add_constraint(std.a.row(i).to_vec(), Relation::Eq, std.b[i].clone());
    }
    match simplex_solve(&lp)? {
        LpOutcome::Optimal { value, basis, .. } => {
            if basis.len() != std.num_rows() {
                return Err(ModelError::RankDeficient);
            }
            Ok((basis, value))
        }
        LpOutcome::Infeasible { .. } => Err(ModelError::LpInfeasible),
        LpOutcome::Unbounded { .. } => Err(ModelError::LpUnbounded),
    }
}

/// Which feasible set a region enumeration ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeasibleRegion {
    /// Integer points satisfying the congruences and `Hx >= h0`.
    Integer,
    /// Lattice points satisfying `Hx >= h0` only.
    Linear,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupForm {
    pub basis: Vec<usize>,
    pub nonbasis: Vec<usize>,
    pub zstar: Rational,
    pub cbar: RationalVector,
    pub g: RationalMatrix,
    pub g0: RationalVector,
    pub h: RationalMatrix,
    pub h0: RationalVector,
    /// Upper bounds over the nonbasic variables.
    pub bounds: Vec<Option<i64>>,
    tableau: RationalMatrix,
    basic_values: RationalVector,
    instance: IpInstance,
}

/// A group-form point lifted back to the original variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedSolution {
    pub x: RationalVector,
    pub value: Rational,
}

/// Row `coeffs · x >= rhs` is implied by `x >= 0` when every coefficient is
/// nonnegative and the right-hand side is not positive.
fn implied_by_sign(coeffs: &[Rational], rhs: &Rational) -> bool {
    coeffs.iter().all(|v| !v.is_negative()) && !rhs.is_positive()
}

pub fn build_group_form(inst: &IpInstance, basis: &[usize]) -> Result<GroupForm, ModelError> {
    let inst = inst.standardize();
    let (m, n) = (inst.num_rows(), inst.num_vars());
    let mut basis = basis.to_vec();
    basis.sort_unstable();
    basis.dedup();
    if let Some(&j) = basis.iter().find(|&&j| j >= n) {
        return Err(ModelError::BasisIndex(j));
    }
    if basis.len() != m {
        return Err(ModelError::BasisSize {
            expected: m,
            found: basis.len(),
        });
    }
    let nonbasis: Vec<usize> = (0..n).filter(|j| !basis.contains(j)).collect();
    let inv = inst
        .a
        .select_columns(&basis)
        .inverse()
        .ok_or(ModelError::SingularBasis)?;
    let tableau = inv.mul(&inst.a.select_columns(&nonbasis));
    let basic_values = inv.mul_vec(&inst.b);

    let c_basic: RationalVector = basis.iter().map(|&j| inst.c[j].clone()).collect();
    let zstar = dot(&c_basic, &basic_values);
    let cbar = nonbasis
        .iter()
        .enumerate()
        .map(|(k, &j)| &inst.c[j] - dot(&c_basic, &tableau.column(k)))
        .collect();

    let mut g_rows = Vec::new();
    let mut g0 = Vec::new();
    let mut h_rows = Vec::new();
    let mut h0 = Vec::new();
    for i in 0..m {
        let row = tableau.row(i);
        let frac_row: RationalVector = row.iter().map(frac).collect();
        let frac_rhs = frac(&basic_values[i]);
        if frac_row.iter().any(|v| !v.is_zero()) || !frac_rhs.is_zero() {
            g_rows.push(frac_row);
            g0.push(frac_rhs);
        }
        // x_B = beta - T x_N >= 0
        let neg: RationalVector = row.iter().map(|v| -v).collect();
        let rhs = -&basic_values[i];
        if !implied_by_sign(&neg, &rhs) {
            h_rows.push(neg);
            h0.push(rhs);
        }
        // x_B <= K  <=>  T x_N >= beta - K
        if let Some(k) = inst.upper[basis[i]] {
            h_rows.push(row.to_vec());
            h0.push(&basic_values[i] - int(k));
        }
    }
    let k = nonbasis.len();
    let bounds = nonbasis.iter().map(|&j| inst.upper[j]).collect();
    Ok(GroupForm {
        basis,
        zstar,
        cbar,
        g: RationalMatrix::from_rows(g_rows, k),
        g0,
        h: RationalMatrix::from_rows(h_rows, k),
        h0,
        bounds,
        nonbasis,
        tableau,
        basic_values,
        instance: inst,
    })
}

impl GroupForm {
    /// Number of nonbasic variables.
    pub fn dim(&self) -> usize {
        self.nonbasis.len()
    }

    pub fn m1(&self) -> usize {
        self.g.rows()
    }

    pub fn m2(&self) -> usize {
        self.h.rows()
    }

    pub fn instance(&self) -> &IpInstance {
        &self.instance
    }

    pub fn cost(&self, x: &[i64]) -> Rational {
        dot_point(&self.cbar, x)
    }

    /// `true` when every nonbasic variable has a finite upper bound.
    pub fn is_boxed(&self) -> bool {
        self.bounds.iter().all(Option::is_some)
    }

    /// Replaces the nonbasic upper bounds with a uniform value.
    pub fn with_uniform_box(mut self, k: i64) -> Self {
        self.bounds = vec![Some(k); self.dim()];
        self
    }

    fn check_dim(&self, x: &[i64]) -> Result<(), ModelError> {
        if x.len() != self.dim() {
            return Err(ModelError::Dimension {
                what: "point",
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(())
    }

    pub fn congruence_holds(&self, x: &[i64]) -> bool {
        self.g
            .row_vecs()
            .zip(&self.g0)
            .all(|(row, g)| frac(&dot_point(row, x)) == *g)
    }

    pub fn inequalities_hold(&self, x: &[i64]) -> bool {
        self.h
            .row_vecs()
            .zip(&self.h0)
            .all(|(row, h)| dot_point(row, x) >= *h)
    }

    pub fn within_bounds(&self, x: &[i64]) -> bool {
        x.iter()
            .zip(&self.bounds)
            .all(|(&v, u)| v >= 0 && u.is_none_or(|k| v <= k))
    }

    pub fn is_feasible(&self, x: &[i64], region: FeasibleRegion) -> Result<bool, ModelError> {
        self.check_dim(x)?;
        Ok(self.within_bounds(x)
            && (region == FeasibleRegion::Linear || self.congruence_holds(x))
            && self.inequalities_hold(x))
    }

    /// Recovers the basic variables, `x_B = A_B⁻¹b - A_B⁻¹A_N x_N`.
    pub fn lift_solution(&self, xn: &[i64]) -> Result<LiftedSolution, ModelError> {
        if !self.is_feasible(xn, FeasibleRegion::Integer)? {
            return Err(ModelError::NotFeasible(xn.to_vec()));
        }
        let mut x = vec![Rational::zero(); self.instance.num_vars()];
        for (&j, &v) in self.nonbasis.iter().zip(xn) {
            x[j] = int(v);
        }
        let tx = self.tableau.mul_point(xn);
        for (i, &j) in self.basis.iter().enumerate() {
            x[j] = &self.basic_values[i] - &tx[i];
        }
        let value = self.instance.objective(&x);
        assert!(self.instance.is_feasible(&x), "lifted point violates the instance");
        assert_eq!(value, &self.zstar + self.cost(xn), "objective shift mismatch");
        Ok(LiftedSolution { x, value })
    }

    /// Fixes to zero every nonbasic variable whose unit vector is infeasible.
    ///
    /// Returns the reduced form and the eliminated original variable indices.
    pub fn preprocess_unit_elimination(&self) -> Result<(GroupForm, Vec<usize>), ModelError> {
        if !self.is_boxed() {
            return Err(ModelError::MissingBox);
        }
        let n = self.dim();
        let mut keep = Vec::new();
        let mut eliminated = Vec::new();
        for j in 0..n {
            if self.is_feasible(&unit_point(j, n), FeasibleRegion::Integer)? {
                keep.push(j);
            } else {
                eliminated.push(self.nonbasis[j]);
            }
        }
        if keep.is_empty() {
            return Err(ModelError::AllVariablesEliminated);
        }
        if eliminated.is_empty() {
            return Ok((self.clone(), eliminated));
        }
        let g = self.g.select_columns(&keep);
        let h = self.h.select_columns(&keep);
        let mut g_rows = Vec::new();
        let mut g0 = Vec::new();
        for (row, r) in g.row_vecs().zip(&self.g0) {
            if row.iter().any(|v| !v.is_zero()) || !r.is_zero() {
                g_rows.push(row.to_vec());
                g0.push(r.clone());
            }
        }
        let mut h_rows = Vec::new();
        let mut h0 = Vec::new();
        for (row, r) in h.row_vecs().zip(&self.h0) {
            if !implied_by_sign(row, r) {
                h_rows.push(row.to_vec());
                h0.push(r.clone());
            }
        }
        let k = keep.len();
        let reduced = GroupForm {
            basis: self.basis.clone(),
            nonbasis: keep.iter().map(|&j| self.nonbasis[j]).collect(),
            zstar: self.zstar.clone(),
            cbar: keep.iter().map(|&j| self.cbar[j].clone()).collect(),
            g: RationalMatrix::from_rows(g_rows, k),
            g0,
            h: RationalMatrix::from_rows(h_rows, k),
            h0,
            bounds: keep.iter().map(|&j| self.bounds[j]).collect(),
            tableau: self.tableau.select_columns(&keep),
            basic_values: self.basic_values.clone(),
            instance: self.instance.clone(),
        };
        Ok((reduced, eliminated))
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::arith::ratio;

    /// min x1 + 3x2; -x2/2 + x3 = 1/2; -x1 + x2 + x4 = -1.
    pub fn first_instance() -> IpInstance {
        let a = RationalMatrix::from_rows(
            vec![
                vec![int(0), ratio(-1, 2), int(1), int(0)],
                vec![int(-1), int(1), int(0), int(1)],
            ],
            4,
        );
        IpInstance::equality(a, vec![ratio(1, 2), int(-1)], vec![int(1), int(3), int(0), int(0)])
            .unwrap()
    }

    /// Group form over (x1, x2) with the slack basis {x3, x4}.
    pub fn first_group_form(bound: Option<i64>) -> GroupForm {
        let gf = build_group_form(&first_instance(), &[2, 3]).unwrap();
        match bound {
            Some(k) => gf.with_uniform_box(k),
            None => gf,
        }
    }

    /// min x1 + c2 x2; x1 + x2/2 <= 1/2.
    pub fn second_instance(c2: i64) -> IpInstance {
        let a = RationalMatrix::from_rows(vec![vec![int(1), ratio(1, 2)]], 2);
        IpInstance::new(a, vec![Relation::Le], vec![ratio(1, 2)], vec![int(1), int(c2)], None)
            .unwrap()
    }

    pub fn second_group_form(c2: i64, bound: Option<i64>) -> GroupForm {
        let inst = second_instance(c2);
        let (basis, _) = lp_optimal_basis(&inst).unwrap();
        let gf = build_group_form(&inst, &basis).unwrap();
        match bound {
            Some(k) => gf.with_uniform_box(k),
            None => gf,
        }
    }
}
