//! The dual ascent loop over generator and candidate sets.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::adjust::{solve_adjustment, AdjustConfig, AdjustContext, AdjustError};
use crate::arith::{
    dominated_by, point_add, point_sub, unit_point, ExtendedRational, Point, Rational, RationalVector,
};
use crate::gauge::{region_points, GaugeError, GaugeEvaluator, GaugeParams, SearchBox};
use crate::model::{FeasibleRegion, GroupForm, ModelError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AscentError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Gauge(#[from] GaugeError),
    #[error(transparent)]
    Adjust(#[from] AdjustError),
    #[error("reduced cost of nonbasic variable {0} is negative; the basis is not dual feasible")]
    NegativeReducedCost(usize),
    #[error("minimum gauge over the region is {value} at {witness:?}; it must be positive")]
    NonPositiveMinimum { witness: Point, value: Rational },
    #[error("candidate {0:?} has zero gauge but negative cost")]
    NegativeCostZeroGauge(Point),
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOptions {
    pub max_iterations: usize,
    /// Iterations with an unchanged bound before the run is declared stalled.
    pub stall_window: usize,
    pub param_adjust: bool,
    /// Region over which the bound is minimized.
    pub region: FeasibleRegion,
    /// Bound used for variables without an upper bound.
    pub search_bound: i64,
    pub adjust: AdjustConfig,
    /// Audit the candidate set and downward closure after every advance.
    pub check_invariants: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_iterations: 100,
            stall_window: 10,
            param_adjust: false,
            region: FeasibleRegion::Integer,
            search_bound: 16,
            adjust: AdjustConfig::default(),
            check_invariants: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorState {
    pub generators: BTreeSet<Point>,
    pub candidates: BTreeSet<Point>,
    pub alpha0: Rational,
    pub pi0: Rational,
    pub params: GaugeParams,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Event {
    Promoted(Point),
    Adjusted {
        lp_pi0: Rational,
        rounds: usize,
        cuts: usize,
    },
    AdjustAbandoned,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub xstar: Point,
    pub ratio: Rational,
    pub alpha0: Rational,
    pub pi0: Rational,
    pub e_size: usize,
    pub c_size: usize,
    pub params: GaugeParams,
    pub events: Vec<Event>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StallReason {
    /// The bound did not move for a full window.
    Stagnant { window: usize },
    /// Every candidate has zero or infinite gauge.
    NoSelectableCandidate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StallDiagnostic {
    pub reason: StallReason,
    pub iteration: usize,
    pub pi0: Rational,
    /// Common step between the most recent selections, if they form a ray.
    pub ray: Option<Point>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub xn: Point,
    pub x: RationalVector,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Optimal(Solution),
    Stalled(StallDiagnostic),
    IterationLimit,
    Infeasible,
}

/// Points `e + δʲ` whose every lower neighbour is a generator.
pub fn generate_candidates(generators: &BTreeSet<Point>, sbox: &SearchBox) -> BTreeSet<Point> {
    let n = sbox.dim();
    let mut out = BTreeSet::new();
    for e in generators {
        for j in 0..n {
            let x = point_add(e, &unit_point(j, n));
            if generators.contains(&x) || !sbox.contains(&x) {
                continue;
            }
            let closed = (0..n)
                .filter(|&k| x[k] > 0)
                .all(|k| generators.contains(&point_sub(&x, &unit_point(k, n))));
            if closed {
                out.insert(x);
            }
        }
    }
    out
}

/// Candidate set recomputed by scanning the whole box.
pub fn candidates_from_definition(generators: &BTreeSet<Point>, sbox: &SearchBox) -> BTreeSet<Point> {
    sbox.points()
        .filter(|x| !generators.contains(x))
        .filter(|x| {
            generators
                .iter()
                .filter(|y| *y != x && dominated_by(y, x))
                .count()
                == strict_lower_count(x)
        })
        .collect()
}

fn strict_lower_count(x: &[i64]) -> usize {
    x.iter().map(|&v| v as usize + 1).product::<usize>() - 1
}

pub fn is_downward_closed(generators: &BTreeSet<Point>) -> bool {
    generators.iter().all(|y| {
        (0..y.len())
            .filter(|&k| y[k] > 0)
            .all(|k| generators.contains(&point_sub(y, &unit_point(k, y.len()))))
    })
}

/// Common difference of the trailing `window` selections.
fn detect_ray(selections: &[Point], window: usize) -> Option<Point> {
    if window < 2 || selections.len() < window {
        return None;
    }
    let tail = &selections[selections.len() - window..];
    let step = point_sub(&tail[1], &tail[0]);
    let same = tail.windows(2).all(|w| point_sub(&w[1], &w[0]) == step);
    (same && step.iter().any(|&v| v != 0)).then_some(step)
}

/// Result of initialization: either a running loop or an immediate answer.
pub enum Start<'a> {
    Running(Box<Ascent<'a>>),
    Finished(SolveOutcome),
}

pub struct Ascent<'a> {
    gf: &'a GroupForm,
    options: SolveOptions,
    sbox: SearchBox,
    region: Vec<Point>,
    feasible: Vec<Point>,
    eval: GaugeEvaluator,
    state: GeneratorState,
    iteration: usize,
    stagnant: usize,
    selections: Vec<Point>,
    records: Vec<IterationRecord>,
}

impl<'a> Ascent<'a> {
    /// Scales the seed weights so that the region minimum of `Δ₀` is one and
    /// sets `α₀` from the unit vectors.
    pub fn init(gf: &'a GroupForm, options: SolveOptions) -> Result<Start<'a>, AscentError> {
        if let Some(j) = gf.cbar.iter().position(|c| c.is_negative()) {
            return Err(AscentError::NegativeReducedCost(j));
        }
        let sbox = SearchBox::for_group_form(gf, options.search_bound)?;
        let feasible = region_points(gf, FeasibleRegion::Integer, &sbox)?;
        if feasible.is_empty() {
            return Ok(Start::Finished(SolveOutcome::Infeasible));
        }
        let n = gf.dim();
        let origin = vec![0; n];
        if feasible[0] == origin {
            return Ok(Start::Finished(SolveOutcome::Optimal(lift(gf, &origin)?)));
        }
        let region = match options.region {
            FeasibleRegion::Integer => feasible.clone(),
            other => region_points(gf, other, &sbox)?,
        };

        let seed = GaugeEvaluator::new(gf, GaugeParams::ones(gf), sbox.clone())?;
        let (witness, mu) = region
            .iter()
            .filter_map(|x| seed.minimizer(x).map(|m| (x.clone(), m.value)))
            .min_by(|a, b| a.1.cmp(&b.1))
            .expect("region points have finite gauge");
        if !mu.is_positive() {
            return Err(AscentError::NonPositiveMinimum { witness, value: mu });
        }
        let params = seed.params().scaled(&mu.recip());
        let eval = GaugeEvaluator::new(gf, params.clone(), sbox.clone())?;
        let alpha0 = (0..n)
            .filter_map(|j| {
                let d = eval.minimizer(&unit_point(j, n))?.value;
                d.is_positive().then(|| &gf.cbar[j] / d)
            })
            .min()
            .unwrap_or_else(Rational::zero);

        let generators: BTreeSet<Point> = [origin].into_iter().collect();
        let candidates = generate_candidates(&generators, &sbox);
        let state = GeneratorState {
            generators,
            candidates,
            pi0: alpha0.clone(),
            alpha0,
            params,
        };
        Ok(Start::Running(Box::new(Ascent {
            gf,
            options,
            sbox,
            region,
            feasible,
            eval,
            state,
            iteration: 0,
            stagnant: 0,
            selections: Vec::new(),
            records: Vec::new(),
        })))
    }

    pub fn state(&self) -> &GeneratorState {
        &self.state
    }

    pub fn evaluator(&self) -> &GaugeEvaluator {
        &self.eval
    }

    pub fn search_box(&self) -> &SearchBox {
        &self.sbox
    }

    pub fn records(&self) -> &[IterationRecord] {
        &self.records
    }

    pub fn into_records(self) -> Vec<IterationRecord> {
        self.records
    }

    /// Moves zero-gauge candidates into the generator set until none remain.
    pub fn promote_zero_gauge(&mut self) -> Result<Vec<Point>, AscentError> {
        let mut promoted = Vec::new();
        loop {
            let zero: Vec<Point> = self
                .state
                .candidates
                .iter()
                .filter(|x| self.eval.minimizer(x).is_some_and(|m| m.value.is_zero()))
                .cloned()
                .collect();
            if zero.is_empty() {
                return Ok(promoted);
            }
            for x in zero {
                if self.gf.cost(&x).is_negative() {
                    return Err(AscentError::NegativeCostZeroGauge(x));
                }
                self.state.generators.insert(x.clone());
                promoted.push(x);
            }
            self.state.candidates = generate_candidates(&self.state.generators, &self.sbox);
        }
    }

    /// Candidate with the smallest cost-to-gauge ratio; ties go to the
    /// lexicographically smallest point.
    pub fn select_candidate(&self) -> Option<(Point, Rational)> {
        let mut best: Option<(Point, Rational)> = None;
        for x in &self.state.candidates {
            let Some(m) = self.eval.minimizer(x) else { continue };
            if !m.value.is_positive() {
                continue;
            }
            let ratio = self.gf.cost(x) / m.value;
            if best.as_ref().is_none_or(|(_, r)| ratio < *r) {
                best = Some((x.clone(), ratio));
            }
        }
        best
    }

    pub fn advance(&mut self, xstar: &Point, ratio: Rational) -> Result<(), AscentError> {
        debug_assert!(self.state.candidates.contains(xstar));
        self.state.alpha0 = ratio;
        self.state.generators.insert(xstar.clone());
        self.state.candidates = generate_candidates(&self.state.generators, &self.sbox);
        if self.options.check_invariants {
            if !is_downward_closed(&self.state.generators) {
                return Err(AscentError::InvariantViolated("generator set is not downward closed".into()));
            }
            if !self.candidate_audit() {
                return Err(AscentError::InvariantViolated("candidate set differs from its definition".into()));
            }
        }
        Ok(())
    }

    /// Least value of `c̄y + α₀Δ₀(x − y)` over generators `y` and region
    /// points `x >= y`.
    pub fn bound(&self) -> Rational {
        self.state
            .generators
            .iter()
            .filter_map(|y| {
                let m = self.eval.region_min(&self.region, y)?;
                Some(self.gf.cost(y) + &self.state.alpha0 * m.value)
            })
            .min()
            .expect("the origin term is always finite")
    }

    pub fn update_pi0(&mut self) {
        self.state.pi0 = self.bound();
    }

    /// Cheapest feasible point of `E ∪ C` whose cost reaches the bound.
    pub fn check_termination(&self) -> Option<Point> {
        self.state
            .generators
            .iter()
            .chain(&self.state.candidates)
            .filter(|x| self.feasible.binary_search(x).is_ok())
            .map(|x| (self.gf.cost(x), x))
            .filter(|(c, _)| *c <= self.state.pi0)
            .min()
            .map(|(_, x)| x.clone())
    }

    /// Pairs of generators summing to a candidate where `π` exceeds the
    /// sum of their costs.
    pub fn subadditivity_audit(&self) -> Vec<(Point, Point)> {
        let e: Vec<&Point> = self.state.generators.iter().collect();
        let mut out = Vec::new();
        for (i, y1) in e.iter().enumerate() {
            for y2 in &e[i..] {
                let sum = point_add(y1, y2);
                if !self.state.candidates.contains(&sum) {
                    continue;
                }
                let pi = self.eval.pi(&self.gf.cbar, e.iter().copied(), &self.state.alpha0, &sum);
                let bound = ExtendedRational::Finite(self.gf.cost(y1) + self.gf.cost(y2));
                if pi > bound {
                    out.push(((*y1).clone(), (*y2).clone()));
                }
            }
        }
        out
    }

    pub fn candidate_audit(&self) -> bool {
        candidates_from_definition(&self.state.generators, &self.sbox) == self.state.candidates
    }

    fn adjust(&mut self) -> Result<Event, AscentError> {
        let generators: Vec<Point> = self.state.generators.iter().cloned().collect();
        let candidates: Vec<Point> = self.state.candidates.iter().cloned().collect();
        let ctx = AdjustContext {
            gf: self.gf,
            generators: &generators,
            candidates: &candidates,
            region: &self.region,
            sbox: &self.sbox,
        };
        let found = solve_adjustment(&ctx, &self.state.params, &self.state.alpha0, &self.options.adjust)?;
        let Some(adj) = found else {
            return Ok(Event::AdjustAbandoned);
        };
        self.state.params = adj.params;
        self.state.alpha0 = Rational::from_integer(1.into());
        self.eval = GaugeEvaluator::new(self.gf, self.state.params.clone(), self.sbox.clone())?;
        self.update_pi0();
        Ok(Event::Adjusted {
            lp_pi0: adj.lp_pi0,
            rounds: adj.rounds,
            cuts: adj.cuts,
        })
    }

    fn stalled(&self, reason: StallReason) -> SolveOutcome {
        SolveOutcome::Stalled(StallDiagnostic {
            reason,
            iteration: self.iteration,
            pi0: self.state.pi0.clone(),
            ray: detect_ray(&self.selections, self.options.stall_window),
        })
    }

    /// One pass of the loop. Returns the outcome once the run is over.
    pub fn step(&mut self) -> Result<Option<SolveOutcome>, AscentError> {
        if self.iteration >= self.options.max_iterations {
            return Ok(Some(SolveOutcome::IterationLimit));
        }
        self.iteration += 1;
        let previous = self.state.pi0.clone();
        let mut events: Vec<Event> = self.promote_zero_gauge()?.into_iter().map(Event::Promoted).collect();

        let Some((xstar, ratio)) = self.select_candidate() else {
            if let Some(x) = self.check_termination() {
                return Ok(Some(SolveOutcome::Optimal(lift(self.gf, &x)?)));
            }
            return Ok(Some(self.stalled(StallReason::NoSelectableCandidate)));
        };
        self.advance(&xstar, ratio.clone())?;
        self.selections.push(xstar.clone());
        self.update_pi0();
        if self.options.param_adjust {
            events.push(self.adjust()?);
        }
        self.records.push(IterationRecord {
            iteration: self.iteration,
            xstar,
            ratio,
            alpha0: self.state.alpha0.clone(),
            pi0: self.state.pi0.clone(),
            e_size: self.state.generators.len(),
            c_size: self.state.candidates.len(),
            params: self.state.params.clone(),
            events,
        });

        if let Some(x) = self.check_termination() {
            return Ok(Some(SolveOutcome::Optimal(lift(self.gf, &x)?)));
        }
        if self.state.pi0 == previous {
            self.stagnant += 1;
        } else {
            self.stagnant = 0;
        }
        if self.options.stall_window > 0 && self.stagnant >= self.options.stall_window {
            return Ok(Some(self.stalled(StallReason::Stagnant {
                window: self.options.stall_window,
            })));
        }
        if self.iteration >= self.options.max_iterations {
            return Ok(Some(SolveOutcome::IterationLimit));
        }
        Ok(None)
    }

    pub fn run(mut self) -> Result<(SolveOutcome, Vec<IterationRecord>), AscentError> {
        loop {
            if let Some(outcome) = self.step()? {
                return Ok((outcome, self.records));
            }
        }
    }
}

fn lift(gf: &GroupForm, xn: &[i64]) -> Result<Solution, AscentError> {
    let lifted = gf.lift_solution(xn)?;
    Ok(Solution {
        xn: xn.to_vec(),
        x: lifted.x,
        value: lifted.value,
    })
}

pub fn solve(gf: &GroupForm, options: SolveOptions) -> Result<(SolveOutcome, Vec<IterationRecord>), AscentError> {
    match Ascent::init(gf, options)? {
        Start::Finished(outcome) => Ok((outcome, Vec::new())),
        Start::Running(ascent) => ascent.run(),
    }
}
