//! The optional parameter-adjustment LP: choose gauge weights that maximize
//! the dual bound while keeping every candidate dual feasible.
//!
//! The exact model quantifies over every region point and every inner
//! minimizer. It is linearized around recorded minimizers and then repaired
//! by a cutting-plane loop that re-evaluates `Δ₀` exactly at the new weights.
//!
//! Weights are kept nonnegative inside the LP. Under that restriction the
//! active branch of every row of `D` is the one matching the sign of the row
//! value, so each `max` collapses to a single linear form.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{dot_point, int, Point, Rational, RationalVector};
use crate::gauge::{GaugeError, GaugeEvaluator, GaugeParams, SearchBox};
use crate::linprog::{
    lexicographic_resolve, simplex_solve, LinearProgram, LpError, LpOutcome, Relation, Sense,
    VarBounds,
};
use crate::model::GroupForm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdjustError {
    #[error("adjustment LP is infeasible")]
    ModelInfeasible,
    #[error("adjustment LP is unbounded")]
    ModelUnbounded,
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Gauge(#[from] GaugeError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjustConfig {
    /// Tie `γ⁻` to `γ⁺` and `α⁻` to `α⁺`.
    pub symmetric: bool,
    /// Model rebuilds per call.
    pub rounds: usize,
    /// Upper bound on every weight; keeps the secondary objective bounded.
    pub cap: Rational,
    /// Cuts tolerated before the adjustment is abandoned.
    pub max_cuts: usize,
}

impl Default for AdjustConfig {
    fn default() -> Self {
        AdjustConfig {
            symmetric: true,
            rounds: 5,
            cap: int(1000),
            max_cuts: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowKind {
    /// `π₀ <= c̄y + D(z)` with `z` minimizing `Δ₀(x − y)`.
    LowerBound { y: Point, x: Point },
    /// `D(z) <= c̄x` with `z` minimizing `Δ₀(x)`.
    Subadditive { x: Point },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelRow {
    pub kind: RowKind,
    pub z: Point,
    /// Coefficients over the weight variables.
    pub coeffs: RationalVector,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjustmentModel {
    pub symmetric: bool,
    pub m1: usize,
    pub m2: usize,
    pub rows: Vec<ModelRow>,
}

impl AdjustmentModel {
    pub fn num_params(&self) -> usize {
        let k = self.m1 + self.m2;
        if self.symmetric {
            k
        } else {
            2 * k
        }
    }

    /// Linear form of `D(z)` in the weight variables.
    pub fn form(&self, gf: &GroupForm, z: &[i64]) -> RationalVector {
        let mut coeffs = vec![Rational::zero(); self.num_params()];
        let gz = gf.g.mul_point(z);
        let hz = gf.h.mul_point(z);
        let rows = gz
            .iter()
            .enumerate()
            .map(|(i, v)| (i, self.m1, v))
            .chain(hz.iter().enumerate().map(|(i, v)| (self.m1 + i, self.m2, v)));
        for (slot, block, v) in rows {
            if v.is_zero() {
                continue;
            }
            let index = if self.symmetric {
                slot
            } else {
                // [γ⁺ | γ⁻ | α⁺ | α⁻]
                let (base, local) = if slot < self.m1 {
                    (0, slot)
                } else {
                    (2 * self.m1, slot - self.m1)
                };
                base + local + if v.is_negative() { block } else { 0 }
            };
            coeffs[index] = v.abs();
        }
        coeffs
    }

    pub fn params_from(&self, values: &[Rational]) -> GaugeParams {
        let (m1, m2) = (self.m1, self.m2);
        if self.symmetric {
            GaugeParams::symmetric(values[..m1].to_vec(), values[m1..m1 + m2].to_vec())
        } else {
            GaugeParams {
                gamma_plus: values[..m1].to_vec(),
                gamma_minus: values[m1..2 * m1].to_vec(),
                alpha_plus: values[2 * m1..2 * m1 + m2].to_vec(),
                alpha_minus: values[2 * m1 + m2..].to_vec(),
            }
        }
    }

    /// Variable 0 is `π₀`; the rest are weights in `[0, cap]`. Duplicate
    /// rows keep only their tightest right-hand side.
    pub fn to_lp(&self, cap: &Rational) -> LinearProgram {
        let k = self.num_params();
        let mut objective = vec![Rational::zero(); k + 1];
        objective[0] = Rational::one();
        let mut lp = LinearProgram::new(Sense::Maximize, objective);
        lp.set_bounds(0, VarBounds::free());
        for j in 1..=k {
            lp.set_bounds(j, VarBounds::between(Rational::zero(), cap.clone()));
        }
        let mut seen: Vec<(RationalVector, Rational)> = Vec::new();
        for row in &self.rows {
            let mut coeffs = Vec::with_capacity(k + 1);
            match row.kind {
                RowKind::LowerBound { .. } => {
                    coeffs.push(Rational::one());
                    coeffs.extend(row.coeffs.iter().map(|c| -c));
                }
                RowKind::Subadditive { .. } => {
                    coeffs.push(Rational::zero());
                    coeffs.extend(row.coeffs.iter().cloned());
                }
            }
            match seen.iter_mut().find(|(c, _)| *c == coeffs) {
                Some((_, rhs)) => {
                    if row.rhs < *rhs {
                        *rhs = row.rhs.clone();
                    }
                }
                None => seen.push((coeffs, row.rhs.clone())),
            }
        }
        for (coeffs, rhs) in seen {
            lp.add_constraint(coeffs, Relation::Le, rhs);
        }
        lp
    }

    fn lower_bound_row(&self, gf: &GroupForm, y: &Point, x: Point, z: Point) -> ModelRow {
        ModelRow {
            kind: RowKind::LowerBound { y: y.clone(), x },
            coeffs: self.form(gf, &z),
            z,
            rhs: gf.cost(y),
        }
    }
}

/// Linearizes the adjustment problem around the minimizers of `eval`.
pub fn build_adjustment_model<'a>(
    gf: &GroupForm,
    eval: &GaugeEvaluator,
    generators: impl IntoIterator<Item = &'a Point>,
    candidates: impl IntoIterator<Item = &'a Point>,
    region: &[Point],
    symmetric: bool,
) -> AdjustmentModel {
    let mut model = AdjustmentModel {
        symmetric,
        m1: gf.m1(),
        m2: gf.m2(),
        rows: Vec::new(),
    };
    for y in generators {
        if let Some(best) = eval.region_min(region, y) {
            let row = model.lower_bound_row(gf, y, best.x, best.z);
            model.rows.push(row);
        }
    }
    for x in candidates {
        if let Some(m) = eval.minimizer(x) {
            model.rows.push(ModelRow {
                kind: RowKind::Subadditive { x: x.clone() },
                coeffs: model.form(gf, &m.z),
                z: m.z,
                rhs: gf.cost(x),
            });
        }
    }
    model
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjustment {
    pub params: GaugeParams,
    /// Optimal value of the last LP solved.
    pub lp_pi0: Rational,
    pub rounds: usize,
    pub cuts: usize,
}

/// The inputs shared by every adjustment round.
pub struct AdjustContext<'a> {
    pub gf: &'a GroupForm,
    pub generators: &'a [Point],
    pub candidates: &'a [Point],
    pub region: &'a [Point],
    pub sbox: &'a SearchBox,
}

fn solve_model(model: &AdjustmentModel, cap: &Rational) -> Result<(Rational, GaugeParams), AdjustError> {
    let lp = model.to_lp(cap);
    let primary = match simplex_solve(&lp)? {
        LpOutcome::Optimal { value, .. } => value,
        LpOutcome::Infeasible { .. } => return Err(AdjustError::ModelInfeasible),
        LpOutcome::Unbounded { .. } => return Err(AdjustError::ModelUnbounded),
    };
    let mut secondary = vec![Rational::one(); lp.num_vars()];
    secondary[0] = Rational::zero();
    let point = match lexicographic_resolve(&lp, &primary, &secondary)? {
        LpOutcome::Optimal { point, .. } => point,
        LpOutcome::Infeasible { .. } => return Err(AdjustError::ModelInfeasible),
        LpOutcome::Unbounded { .. } => return Err(AdjustError::ModelUnbounded),
    };
    Ok((primary, model.params_from(&point[1..])))
}

/// Runs the adjustment starting from `params` scaled by `alpha0`.
///
/// Returns `None` when the cut budget runs out before the LP solution
/// satisfies the exact constraints; callers should keep their weights.
pub fn solve_adjustment(
    ctx: &AdjustContext<'_>,
    params: &GaugeParams,
    alpha0: &Rational,
    config: &AdjustConfig,
) -> Result<Option<Adjustment>, AdjustError> {
    let mut current = params.scaled(alpha0);
    let mut result = None;
    let mut cuts = 0;
    for round in 1..=config.rounds.max(1) {
        let eval = GaugeEvaluator::new(ctx.gf, current.clone(), ctx.sbox.clone())?;
        let mut model = build_adjustment_model(
            ctx.gf,
            &eval,
            ctx.generators,
            ctx.candidates,
            ctx.region,
            config.symmetric,
        );
        let (lp_pi0, next) = loop {
            let (lp_pi0, next) = solve_model(&model, &config.cap)?;
            let check = GaugeEvaluator::new(ctx.gf, next.clone(), ctx.sbox.clone())?;
            let mut violated = 0;
            for y in ctx.generators {
                if let Some(best) = check.region_min(ctx.region, y) {
                    if lp_pi0 > ctx.gf.cost(y) + &best.value {
                        let row = model.lower_bound_row(ctx.gf, y, best.x, best.z);
                        model.rows.push(row);
                        violated += 1;
                    }
                }
            }
            if violated == 0 {
                break (lp_pi0, next);
            }
            cuts += violated;
            if cuts > config.max_cuts {
                return Ok(None);
            }
        };
        let fixpoint = next == current;
        current = next;
        result = Some(Adjustment {
            params: current.clone(),
            lp_pi0,
            rounds: round,
            cuts,
        });
        if fixpoint {
            break;
        }
    }
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `π₀ > c̄y + Δ₀(x − y)`.
    LowerBound { y: Point, x: Point, bound: Rational },
    /// `Δ₀(x) > c̄x` for a candidate.
    Subadditive { x: Point, delta: Rational, cost: Rational },
}

/// Exact check of the adjustment constraints at `(params, pi0)`.
pub fn verify_params(
    ctx: &AdjustContext<'_>,
    params: &GaugeParams,
    pi0: &Rational,
) -> Result<Vec<Violation>, AdjustError> {
    let eval = GaugeEvaluator::new(ctx.gf, params.clone(), ctx.sbox.clone())?;
    let mut out = Vec::new();
    for y in ctx.generators {
        if let Some(best) = eval.region_min(ctx.region, y) {
            let bound = dot_point(&ctx.gf.cbar, y) + best.value;
            if *pi0 > bound {
                out.push(Violation::LowerBound {
                    y: y.clone(),
                    x: best.x,
                    bound,
                });
            }
        }
    }
    for x in ctx.candidates {
        if let Some(m) = eval.minimizer(x) {
            let cost = ctx.gf.cost(x);
            if m.value > cost {
                out.push(Violation::Subadditive {
                    x: x.clone(),
                    delta: m.value,
                    cost,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;
    use crate::gauge::region_points;
    use crate::model::fixtures::first_group_form;
    use crate::model::FeasibleRegion;

    struct Fixture {
        gf: GroupForm,
        sbox: SearchBox,
        region: Vec<Point>,
        generators: Vec<Point>,
        candidates: Vec<Point>,
    }

    impl Fixture {
        fn ctx(&self) -> AdjustContext<'_> {
            AdjustContext {
                gf: &self.gf,
                generators: &self.generators,
                candidates: &self.candidates,
                region: &self.region,
                sbox: &self.sbox,
            }
        }
    }

    /// First worked instance after (1,0) has entered the generator set.
    fn after_first_advance() -> Fixture {
        let gf = first_group_form(None);
        let sbox = SearchBox::uniform(2, 16).unwrap();
        let region = region_points(&gf, FeasibleRegion::Linear, &sbox).unwrap();
        Fixture {
            gf,
            sbox,
            region,
            generators: vec![vec![0, 0], vec![1, 0]],
            candidates: vec![vec![0, 1], vec![2, 0]],
        }
    }

    fn sym(gamma: i64, alpha: i64) -> GaugeParams {
        GaugeParams::symmetric(vec![int(gamma)], vec![int(alpha)])
    }

    #[test]
    fn model_rows_after_first_advance() {
        let f = after_first_advance();
        let eval = GaugeEvaluator::new(&f.gf, sym(1, 1), f.sbox.clone()).unwrap();
        let model = build_adjustment_model(&f.gf, &eval, &f.generators, &f.candidates, &f.region, true);
        let summary: Vec<(bool, RationalVector, Rational)> = model
            .rows
            .iter()
            .map(|r| (matches!(r.kind, RowKind::LowerBound { .. }), r.coeffs.clone(), r.rhs.clone()))
            .collect();
        assert_eq!(
            summary,
            vec![
                // π₀ <= α, π₀ <= 1
                (true, vec![int(0), int(1)], int(0)),
                (true, vec![int(0), int(0)], int(1)),
                // γ/2 <= 3, 2α <= 2
                (false, vec![ratio(1, 2), int(0)], int(3)),
                (false, vec![int(0), int(2)], int(2)),
            ]
        );
    }

    #[test]
    fn asymmetric_forms_split_by_sign() {
        let gf = first_group_form(None);
        let model = AdjustmentModel {
            symmetric: false,
            m1: 1,
            m2: 1,
            rows: vec![],
        };
        // z = (0,1): Gz = 1/2, Hz = -1 -> γ⁺/2 + α⁻
        assert_eq!(model.form(&gf, &[0, 1]), vec![ratio(1, 2), int(0), int(0), int(1)]);
        let p = model.params_from(&[int(1), int(2), int(3), int(4)]);
        assert_eq!(p.gamma_minus, vec![int(2)]);
        assert_eq!(p.alpha_plus, vec![int(3)]);
    }

    #[test]
    fn first_adjustment_reaches_six() {
        let f = after_first_advance();
        let adj = solve_adjustment(&f.ctx(), &sym(1, 1), &int(1), &AdjustConfig::default())
            .unwrap()
            .unwrap();
        assert_eq!(adj.params, sym(6, 1));
        assert_eq!(adj.lp_pi0, int(1));
        assert!(verify_params(&f.ctx(), &adj.params, &adj.lp_pi0).unwrap().is_empty());
    }

    #[test]
    fn fixpoint_leaves_params() {
        let f = after_first_advance();
        let adj = solve_adjustment(&f.ctx(), &sym(6, 1), &int(1), &AdjustConfig::default())
            .unwrap()
            .unwrap();
        assert_eq!(adj.params, sym(6, 1));
        assert_eq!(adj.rounds, 1);
    }

    #[test]
    fn verify_examples() {
        let f = after_first_advance();
        assert!(verify_params(&f.ctx(), &sym(6, 1), &int(1)).unwrap().is_empty());
        let bad = verify_params(&f.ctx(), &sym(1, 2), &int(1)).unwrap();
        assert!(bad.contains(&Violation::Subadditive {
            x: vec![2, 0],
            delta: int(4),
            cost: int(2)
        }));
        assert!(verify_params(&f.ctx(), &sym(1, 1), &int(0)).unwrap().is_empty());
        let too_high = verify_params(&f.ctx(), &sym(1, 1), &int(2)).unwrap();
        assert!(matches!(too_high[0], Violation::LowerBound { .. }));
    }
}
