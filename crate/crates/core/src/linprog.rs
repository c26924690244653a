//! Dense two-phase simplex over exact rationals.
//!
//! Small problems only: the tableau is dense and every pivot is exact.
//! Bland's smallest-index rule picks both the entering and the leaving
//! column, so the method terminates without perturbation.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{dot, Rational, RationalVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }

    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    pub coeffs: RationalVector,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Variable bounds; `None` is infinite on that side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarBounds {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

impl VarBounds {
    pub fn nonnegative() -> Self {
        VarBounds {
            lower: Some(Rational::zero()),
            upper: None,
        }
    }

    pub fn free() -> Self {
        VarBounds {
            lower: None,
            upper: None,
        }
    }

    pub fn between(lower: Rational, upper: Rational) -> Self {
        VarBounds {
            lower: Some(lower),
            upper: Some(upper),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: RationalVector,
    pub constraints: Vec<LinearConstraint>,
    pub bounds: Vec<VarBounds>,
}

impl LinearProgram {
    /// All variables start nonnegative.
    pub fn new(sense: Sense, objective: RationalVector) -> Self {
        let n = objective.len();
        LinearProgram {
            sense,
            objective,
            constraints: Vec::new(),
            bounds: vec![VarBounds::nonnegative(); n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coeffs: RationalVector, relation: Relation, rhs: Rational) {
        self.constraints.push(LinearConstraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn set_bounds(&mut self, var: usize, bounds: VarBounds) {
        self.bounds[var] = bounds;
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        dot(&self.objective, x)
    }

    /// Checks every constraint and bound with zero tolerance.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars()
            && self
                .constraints
                .iter()
                .all(|c| c.relation.holds(&dot(&c.coeffs, x), &c.rhs))
            && self.bounds.iter().zip(x).all(|(b, v)| {
                b.lower.as_ref().is_none_or(|l| v >= l) && b.upper.as_ref().is_none_or(|u| v <= u)
            })
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(LpError::DimensionMismatch {
                what: "bounds",
                expected: n,
                found: self.bounds.len(),
            });
        }
        for c in &self.constraints {
            if c.coeffs.len() != n {
                return Err(LpError::DimensionMismatch {
                    what: "constraint row",
                    expected: n,
                    found: c.coeffs.len(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        point: RationalVector,
        value: Rational,
        /// Original variables whose column is basic at the optimum, ascending.
        basis: Vec<usize>,
    },
    /// `farkas` holds one multiplier per constraint followed by one per
    /// finite upper bound (in variable order); it proves `{Ax ~ b}` empty.
    Infeasible { farkas: RationalVector },
    /// Feasible ray along which the objective improves without limit.
    Unbounded { direction: RationalVector },
}

impl LpOutcome {
    pub fn optimal_value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("internal certificate check failed: {0}")]
    CertificateFailed(&'static str),
}

#[derive(Debug, Clone)]
enum VarMap {
    /// x = lower + s
    Shift { col: usize, lower: Rational },
    /// x = upper - s
    Mirror { col: usize, upper: Rational },
    /// x = s_pos - s_neg
    Split { pos: usize, neg: usize },
}

/// The problem rewritten as `A s = b, s >= 0, b >= 0`.
struct StandardForm {
    maps: Vec<VarMap>,
    /// Rows over structural + slack columns.
    rows: Vec<RationalVector>,
    rhs: RationalVector,
    /// +1 or -1: the factor applied to make `rhs >= 0`.
    flips: Vec<Rational>,
    /// Minimization costs over the columns.
    costs: RationalVector,
    /// Constant term of the minimization objective.
    offset: Rational,
    ncols: usize,
}

impl StandardForm {
    fn build(lp: &LinearProgram) -> Self {
        let mut maps = Vec::with_capacity(lp.num_vars());
        let mut ncols = 0;
        for b in &lp.bounds {
            let map = match (&b.lower, &b.upper) {
                (Some(l), _) => VarMap::Shift {
                    col: ncols,
                    lower: l.clone(),
                },
                (None, Some(u)) => VarMap::Mirror {
                    col: ncols,
                    upper: u.clone(),
                },
                (None, None) => {
                    ncols += 1;
                    VarMap::Split {
                        pos: ncols - 1,
                        neg: ncols,
                    }
                }
            };
            ncols += 1;
            maps.push(map);
        }
        let nstruct = ncols;

        // (coefficients over structural columns, relation, rhs)
        let mut raw: Vec<(RationalVector, Relation, Rational)> = Vec::new();
        for c in &lp.constraints {
            let mut coeffs = vec![Rational::zero(); nstruct];
            let mut rhs = c.rhs.clone();
            for (a, map) in c.coeffs.iter().zip(&maps) {
                if a.is_zero() {
                    continue;
                }
                match map {
                    VarMap::Shift { col, lower } => {
                        coeffs[*col] += a;
                        rhs -= a * lower;
                    }
                    VarMap::Mirror { col, upper } => {
                        coeffs[*col] -= a;
                        rhs -= a * upper;
                    }
                    VarMap::Split { pos, neg } => {
                        coeffs[*pos] += a;
                        coeffs[*neg] -= a;
                    }
                }
            }
            raw.push((coeffs, c.relation, rhs));
        }
        for (b, map) in lp.bounds.iter().zip(&maps) {
            if let (VarMap::Shift { col, lower }, Some(u)) = (map, &b.upper) {
                let mut coeffs = vec![Rational::zero(); nstruct];
                coeffs[*col] = Rational::one();
                raw.push((coeffs, Relation::Le, u - lower));
            }
        }

        let nslack = raw.iter().filter(|r| r.1 != Relation::Eq).count();
        let total = nstruct + nslack;
        let mut rows = Vec::with_capacity(raw.len());
        let mut rhs_out = Vec::with_capacity(raw.len());
        let mut flips = Vec::with_capacity(raw.len());
        let mut slack = nstruct;
        for (coeffs, rel, rhs) in raw {
            let mut row = coeffs;
            row.resize(total, Rational::zero());
            match rel {
                Relation::Le => {
                    row[slack] = Rational::one();
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -Rational::one();
                    slack += 1;
                }
                Relation::Eq => {}
            }
            let mut rhs = rhs;
            let mut flip = Rational::one();
            if rhs.is_negative() {
                for v in row.iter_mut() {
                    *v = -&*v;
                }
                rhs = -rhs;
                flip = -flip;
            }
            rows.push(row);
            rhs_out.push(rhs);
            flips.push(flip);
        }

        let sign = match lp.sense {
            Sense::Minimize => Rational::one(),
            Sense::Maximize => -Rational::one(),
        };
        let mut costs = vec![Rational::zero(); total];
        let mut offset = Rational::zero();
        for (c, map) in lp.objective.iter().zip(&maps) {
            let c = &sign * c;
            match map {
                VarMap::Shift { col, lower } => {
                    offset += &c * lower;
                    costs[*col] += &c;
                }
                VarMap::Mirror { col, upper } => {
                    offset += &c * upper;
                    costs[*col] -= &c;
                }
                VarMap::Split { pos, neg } => {
                    costs[*pos] += &c;
                    costs[*neg] -= &c;
                }
            }
        }

        StandardForm {
            maps,
            rows,
            rhs: rhs_out,
            flips,
            costs,
            offset,
            ncols: total,
        }
    }

    fn recover(&self, cols: &[Rational]) -> RationalVector {
        self.maps
            .iter()
            .map(|m| match m {
                VarMap::Shift { col, lower } => lower + &cols[*col],
                VarMap::Mirror { col, upper } => upper - &cols[*col],
                VarMap::Split { pos, neg } => &cols[*pos] - &cols[*neg],
            })
            .collect()
    }

    fn recover_direction(&self, cols: &[Rational]) -> RationalVector {
        self.maps
            .iter()
            .map(|m| match m {
                VarMap::Shift { col, .. } => cols[*col].clone(),
                VarMap::Mirror { col, .. } => -&cols[*col],
                VarMap::Split { pos, neg } => &cols[*pos] - &cols[*neg],
            })
            .collect()
    }

    fn owner_of(&self, col: usize) -> Option<usize> {
        self.maps.iter().position(|m| match m {
            VarMap::Shift { col: c, .. } | VarMap::Mirror { col: c, .. } => *c == col,
            VarMap::Split { pos, neg } => *pos == col || *neg == col,
        })
    }
}

/// Tableau with one artificial column per row; the artificial block
/// accumulates the row multipliers applied so far.
struct Tableau {
    rows: Vec<RationalVector>,
    basis: Vec<usize>,
    /// Original standard-form row of each tableau row.
    origin: Vec<usize>,
    ncols: usize,
    nart: usize,
}

enum PivotResult {
    Optimal,
    Unbounded(usize),
}

impl Tableau {
    fn new(sf: &StandardForm) -> Self {
        let m = sf.rows.len();
        let width = sf.ncols + m + 1;
        let rows = sf
            .rows
            .iter()
            .zip(&sf.rhs)
            .enumerate()
            .map(|(i, (r, b))| {
                let mut row = r.clone();
                row.resize(width, Rational::zero());
                row[sf.ncols + i] = Rational::one();
                row[width - 1] = b.clone();
                row
            })
            .collect();
        Tableau {
            rows,
            basis: (sf.ncols..sf.ncols + m).collect(),
            origin: (0..m).collect(),
            ncols: sf.ncols,
            nart: m,
        }
    }

    fn rhs_col(&self) -> usize {
        self.ncols + self.nart
    }

    fn is_artificial(&self, col: usize) -> bool {
        col >= self.ncols && col < self.ncols + self.nart
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = &*v / &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Row multipliers `y = c_B M` for the given column costs.
    fn duals(&self, costs: &dyn Fn(usize) -> Rational, nrows: usize) -> RationalVector {
        let mut y = vec![Rational::zero(); nrows];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = costs(b);
            if cb.is_zero() {
                continue;
            }
            for (i, yi) in y.iter_mut().enumerate() {
                let m = &row[self.ncols + i];
                if !m.is_zero() {
                    *yi += &cb * m;
                }
            }
        }
        y
    }

    /// Runs Bland's rule with the given costs. Artificial columns never enter.
    fn optimize(&mut self, costs: &dyn Fn(usize) -> Rational) -> PivotResult {
        let rhs = self.rhs_col();
        loop {
            let cb: Vec<Rational> = self.basis.iter().map(|&b| costs(b)).collect();
            let entering = (0..self.ncols).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut r = costs(j);
                for (row, c) in self.rows.iter().zip(&cb) {
                    if !c.is_zero() && !row[j].is_zero() {
                        r -= c * &row[j];
                    }
                }
                r.is_negative()
            });
            let Some(j) = entering else {
                return PivotResult::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[j].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return PivotResult::Unbounded(j),
                Some((i, _)) => self.pivot(i, j),
            }
        }
    }

    fn column_values(&self) -> RationalVector {
        let rhs = self.rhs_col();
        let mut vals = vec![Rational::zero(); self.ncols];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < self.ncols {
                vals[b] = row[rhs].clone();
            }
        }
        vals
    }
}

pub fn simplex_solve(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    lp.validate()?;
    let sf = StandardForm::build(lp);
    let m = sf.rows.len();
    let mut tab = Tableau::new(&sf);
    let ncols = sf.ncols;

    // Phase 1: minimize the sum of artificials.
    let phase1 = |j: usize| {
        if j >= ncols && j < ncols + m {
            Rational::one()
        } else {
            Rational::zero()
        }
    };
    if let PivotResult::Unbounded(_) = tab.optimize(&phase1) {
        return Err(LpError::CertificateFailed("phase one cannot be unbounded"));
    }
    let rhs = tab.rhs_col();
    let infeasibility: Rational = tab
        .rows
        .iter()
        .zip(&tab.basis)
        .filter(|(_, &b)| tab.is_artificial(b))
        .map(|(r, _)| r[rhs].clone())
        .sum();
    if infeasibility.is_positive() {
        let y = tab.duals(&phase1, m);
        let yb = dot(&y, &sf.rhs);
        let ok = yb.is_positive()
            && (0..ncols).all(|j| {
                let col: Rational = sf.rows.iter().zip(&y).map(|(r, yi)| &r[j] * yi).sum();
                !col.is_positive()
            });
        if !ok {
            return Err(LpError::CertificateFailed("farkas multipliers"));
        }
        let farkas = y.iter().zip(&sf.flips).map(|(yi, f)| yi * f).collect();
        return Ok(LpOutcome::Infeasible { farkas });
    }

    // Drive zero-level artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.is_artificial(tab.basis[i]) {
            match (0..ncols).find(|&j| !tab.rows[i][j].is_zero()) {
                Some(j) => tab.pivot(i, j),
                None => {
                    tab.rows.remove(i);
                    tab.basis.remove(i);
                    tab.origin.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    // Phase 2.
    let costs = sf.costs.clone();
    let phase2 = |j: usize| {
        if j < ncols {
            costs[j].clone()
        } else {
            Rational::zero()
        }
    };
    match tab.optimize(&phase2) {
        PivotResult::Unbounded(j) => {
            let mut d = vec![Rational::zero(); ncols];
            d[j] = Rational::one();
            for (row, &b) in tab.rows.iter().zip(&tab.basis) {
                if b < ncols {
                    d[b] = -&row[j];
                }
            }
            let direction = sf.recover_direction(&d);
            if !is_improving_ray(lp, &direction) {
                return Err(LpError::CertificateFailed("unbounded ray"));
            }
            Ok(LpOutcome::Unbounded { direction })
        }
        PivotResult::Optimal => {
            let cols = tab.column_values();
            let point = sf.recover(&cols);
            if !lp.is_feasible(&point) {
                return Err(LpError::CertificateFailed("primal feasibility"));
            }
            // Dual certificate recomputed against the original rows.
            let y = tab.duals(&phase2, m);
            let dual_ok = (0..ncols).all(|j| {
                let col: Rational = sf.rows.iter().zip(&y).map(|(r, yi)| &r[j] * yi).sum();
                !(&sf.costs[j] - col).is_negative()
            });
            let dual_value = dot(&y, &sf.rhs) + &sf.offset;
            let value = lp.objective_value(&point);
            let primal_min = match lp.sense {
                Sense::Minimize => value.clone(),
                Sense::Maximize => -&value,
            };
            if !dual_ok || dual_value != primal_min {
                return Err(LpError::CertificateFailed("complementary slackness"));
            }
            let mut basis: Vec<usize> = tab
                .basis
                .iter()
                .filter(|&&b| b < ncols)
                .filter_map(|&b| sf.owner_of(b))
                .collect();
            basis.sort_unstable();
            basis.dedup();
            Ok(LpOutcome::Optimal {
                point,
                value,
                basis,
            })
        }
    }
}

fn is_improving_ray(lp: &LinearProgram, d: &[Rational]) -> bool {
    let zero = Rational::zero();
    let rows_ok = lp
        .constraints
        .iter()
        .all(|c| c.relation.holds(&dot(&c.coeffs, d), &zero));
    let bounds_ok = lp.bounds.iter().zip(d).all(|(b, v)| {
        (b.lower.is_none() || !v.is_negative()) && (b.upper.is_none() || !v.is_positive())
    });
    let gain = dot(&lp.objective, d);
    let improves = match lp.sense {
        Sense::Maximize => gain.is_positive(),
        Sense::Minimize => gain.is_negative(),
    };
    rows_ok && bounds_ok && improves
}

/// Optimizes `secondary` over the optimal face of `lp`, i.e. with the
/// primary objective pinned to `primary_value`.
pub fn lexicographic_resolve(
    lp: &LinearProgram,
    primary_value: &Rational,
    secondary: &[Rational],
) -> Result<LpOutcome, LpError> {
    if secondary.len() != lp.num_vars() {
        return Err(LpError::DimensionMismatch {
            what: "secondary objective",
            expected: lp.num_vars(),
            found: secondary.len(),
        });
    }
    let mut face = lp.clone();
    face.add_constraint(lp.objective.clone(), Relation::Eq, primary_value.clone());
    face.objective = secondary.to_vec();
    simplex_solve(&face)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, ratio};

    #[test]
    fn single_bound() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![int(1)]);
        lp.set_bounds(0, VarBounds::free());
        lp.add_constraint(vec![int(1)], Relation::Le, int(1));
        let out = simplex_solve(&lp).unwrap();
        assert_eq!(out.optimal_value(), Some(&int(1)));
    }

    #[test]
    fn relaxation_of_first_worked_instance() {
        let mut lp = LinearProgram::new(Sense::Minimize, vec![int(1), int(3), int(0), int(0)]);
        lp.add_constraint(vec![int(0), ratio(-1, 2), int(1), int(0)], Relation::Eq, ratio(1, 2));
        lp.add_constraint(vec![int(-1), int(1), int(0), int(1)], Relation::Eq, int(-1));
        match simplex_solve(&lp).unwrap() {
            LpOutcome::Optimal { point, value, basis } => {
                assert_eq!(value, int(1));
                assert_eq!(point, vec![int(1), int(0), ratio(1, 2), int(0)]);
                assert_eq!(basis, vec![0, 2]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unbounded_ray() {
        let lp = LinearProgram::new(Sense::Maximize, vec![int(1)]);
        match simplex_solve(&lp).unwrap() {
            LpOutcome::Unbounded { direction } => assert_eq!(direction, vec![int(1)]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasible_row_has_farkas() {
        let mut lp = LinearProgram::new(Sense::Minimize, vec![int(1)]);
        lp.add_constraint(vec![int(0)], Relation::Eq, int(1));
        match simplex_solve(&lp).unwrap() {
            LpOutcome::Infeasible { farkas } => assert_eq!(farkas.len(), 1),
            other => panic!("unexpected {other:?}"),
        }
        let mut lp = LinearProgram::new(Sense::Minimize, vec![int(1), int(1)]);
        lp.add_constraint(vec![int(1), int(1)], Relation::Le, int(1));
        lp.add_constraint(vec![int(1), int(1)], Relation::Ge, int(3));
        assert!(matches!(simplex_solve(&lp).unwrap(), LpOutcome::Infeasible { .. }));
    }

    #[test]
    fn dimension_mismatch() {
        let mut lp = LinearProgram::new(Sense::Minimize, vec![int(1), int(1)]);
        lp.add_constraint(vec![int(1)], Relation::Le, int(1));
        assert!(matches!(
            simplex_solve(&lp),
            Err(LpError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn bounded_and_mirrored_variables() {
        // max x - y, x in [-2, 3], y <= 5 (free below), x + y >= 1
        let mut lp = LinearProgram::new(Sense::Maximize, vec![int(1), int(-1)]);
        lp.set_bounds(0, VarBounds::between(int(-2), int(3)));
        lp.set_bounds(1, VarBounds { lower: None, upper: Some(int(5)) });
        lp.add_constraint(vec![int(1), int(1)], Relation::Ge, int(1));
        let out = simplex_solve(&lp).unwrap();
        assert_eq!(out.point().unwrap(), &[int(3), int(-2)][..]);
        assert_eq!(out.optimal_value(), Some(&int(5)));
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let mut lp = LinearProgram::new(Sense::Minimize, vec![int(1), int(2)]);
        lp.add_constraint(vec![int(1), int(1)], Relation::Eq, int(2));
        lp.add_constraint(vec![int(2), int(2)], Relation::Eq, int(4));
        let out = simplex_solve(&lp).unwrap();
        assert_eq!(out.optimal_value(), Some(&int(2)));
    }

    /// max pi s.t. pi <= 1, pi <= a, a <= 1, g <= 6; then max a + g on the face.
    fn adjustment_like(gamma_cap: i64) -> LinearProgram {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![int(1), int(0), int(0)]);
        lp.set_bounds(0, VarBounds::free());
        lp.add_constraint(vec![int(1), int(0), int(0)], Relation::Le, int(1));
        lp.add_constraint(vec![int(1), int(-1), int(0)], Relation::Le, int(0));
        lp.add_constraint(vec![int(0), int(1), int(0)], Relation::Le, int(1));
        lp.add_constraint(vec![int(0), int(0), int(1)], Relation::Le, int(gamma_cap));
        lp
    }

    #[test]
    fn lexicographic_examples() {
        for cap in [6, 8] {
            let lp = adjustment_like(cap);
            let first = simplex_solve(&lp).unwrap();
            assert_eq!(first.optimal_value(), Some(&int(1)));
            let second =
                lexicographic_resolve(&lp, &int(1), &[int(0), int(1), int(1)]).unwrap();
            assert_eq!(second.point().unwrap(), &[int(1), int(1), int(cap)][..]);
        }
    }

    #[test]
    fn zero_secondary_keeps_primary_optimum() {
        let lp = adjustment_like(6);
        let out = lexicographic_resolve(&lp, &int(1), &[int(0), int(0), int(0)]).unwrap();
        let p = out.point().unwrap();
        assert_eq!(p[0], int(1));
        assert!(lp.is_feasible(p));
    }

    #[test]
    fn deterministic() {
        let lp = adjustment_like(6);
        assert_eq!(simplex_solve(&lp).unwrap(), simplex_solve(&lp).unwrap());
    }
}
