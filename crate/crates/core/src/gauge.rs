//! The generalized diamond gauge `D`, the derived gauge `Δ₀`, and the lifted
//! function `π` built from them.

use std::cell::RefCell;
use std::collections::HashMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{
    dominated_by, frac, point_sub, unit_point, ExtendedRational, Point, Rational,
    RationalMatrix, RationalVector,
};
use crate::model::{FeasibleRegion, GroupForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaugeError {
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("search bound {0} is negative")]
    NegativeBound(i64),
    #[error("no feasible point inside the search box")]
    EmptyRegion,
}

fn same_len(what: &'static str, expected: usize, found: usize) -> Result<(), GaugeError> {
    if expected == found {
        Ok(())
    } else {
        Err(GaugeError::Dimension {
            what,
            expected,
            found,
        })
    }
}

/// Per-row weights of the diamond gauge. Entries may be negative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaugeParams {
    pub gamma_plus: RationalVector,
    pub gamma_minus: RationalVector,
    pub alpha_plus: RationalVector,
    pub alpha_minus: RationalVector,
}

impl GaugeParams {
    pub fn uniform(m1: usize, m2: usize, v: &Rational) -> Self {
        GaugeParams {
            gamma_plus: vec![v.clone(); m1],
            gamma_minus: vec![v.clone(); m1],
            alpha_plus: vec![v.clone(); m2],
            alpha_minus: vec![v.clone(); m2],
        }
    }

    /// All-ones seed sized for `gf`.
    pub fn ones(gf: &GroupForm) -> Self {
        Self::uniform(gf.m1(), gf.m2(), &Rational::one())
    }

    pub fn symmetric(gamma: RationalVector, alpha: RationalVector) -> Self {
        GaugeParams {
            gamma_minus: gamma.clone(),
            gamma_plus: gamma,
            alpha_minus: alpha.clone(),
            alpha_plus: alpha,
        }
    }

    pub fn scaled(&self, lambda: &Rational) -> Self {
        let s = |v: &RationalVector| v.iter().map(|x| x * lambda).collect();
        GaugeParams {
            gamma_plus: s(&self.gamma_plus),
            gamma_minus: s(&self.gamma_minus),
            alpha_plus: s(&self.alpha_plus),
            alpha_minus: s(&self.alpha_minus),
        }
    }

    pub fn m1(&self) -> usize {
        self.gamma_plus.len()
    }

    pub fn m2(&self) -> usize {
        self.alpha_plus.len()
    }

    pub fn is_symmetric(&self) -> bool {
        self.gamma_plus == self.gamma_minus && self.alpha_plus == self.alpha_minus
    }

    pub fn check(&self, gf: &GroupForm) -> Result<(), GaugeError> {
        same_len("gamma+", gf.m1(), self.gamma_plus.len())?;
        same_len("gamma-", gf.m1(), self.gamma_minus.len())?;
        same_len("alpha+", gf.m2(), self.alpha_plus.len())?;
        same_len("alpha-", gf.m2(), self.alpha_minus.len())
    }

    /// `D` evaluated on precomputed images `Gz` and `Hz`.
    pub fn gauge_of_images(&self, gz: &[Rational], hz: &[Rational]) -> Rational {
        let row = |plus: &Rational, minus: &Rational, v: &Rational| {
            let a = plus * v;
            let b = -(minus * v);
            if a >= b {
                a
            } else {
                b
            }
        };
        let mut total = Rational::zero();
        for (i, v) in gz.iter().enumerate() {
            total += row(&self.gamma_plus[i], &self.gamma_minus[i], v);
        }
        for (i, v) in hz.iter().enumerate() {
            total += row(&self.alpha_plus[i], &self.alpha_minus[i], v);
        }
        total
    }
}

/// Finite per-variable bounds for every lattice enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SearchBox {
    bounds: Vec<i64>,
}

impl SearchBox {
    pub fn new(bounds: Vec<i64>) -> Result<Self, GaugeError> {
        if let Some(&b) = bounds.iter().find(|&&b| b < 0) {
            return Err(GaugeError::NegativeBound(b));
        }
        Ok(SearchBox { bounds })
    }

    pub fn uniform(n: usize, k: i64) -> Result<Self, GaugeError> {
        Self::new(vec![k; n])
    }

    /// The group form's own bounds, with `fallback` for unbounded variables.
    pub fn for_group_form(gf: &GroupForm, fallback: i64) -> Result<Self, GaugeError> {
        Self::new(gf.bounds.iter().map(|b| b.unwrap_or(fallback)).collect())
    }

    pub fn bounds(&self) -> &[i64] {
        &self.bounds
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.dim() && x.iter().zip(&self.bounds).all(|(&v, &b)| 0 <= v && v <= b)
    }

    pub fn count(&self) -> u64 {
        self.bounds.iter().map(|&b| b as u64 + 1).product()
    }

    /// All lattice points in lexicographic order.
    pub fn points(&self) -> BoxPoints<'_> {
        BoxPoints {
            bounds: &self.bounds,
            next: Some(vec![0; self.bounds.len()]),
        }
    }
}

pub struct BoxPoints<'a> {
    bounds: &'a [i64],
    next: Option<Point>,
}

impl Iterator for BoxPoints<'_> {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for j in (0..succ.len()).rev() {
            if succ[j] < self.bounds[j] {
                succ[j] += 1;
                self.next = Some(succ);
                return Some(current);
            }
            succ[j] = 0;
        }
        Some(current)
    }
}

fn check_point(gf: &GroupForm, len: usize) -> Result<(), GaugeError> {
    same_len("point", gf.dim(), len)
}

/// `D(x)` for a rational vector `x`.
pub fn diamond_d(params: &GaugeParams, gf: &GroupForm, x: &[Rational]) -> Result<Rational, GaugeError> {
    params.check(gf)?;
    check_point(gf, x.len())?;
    Ok(params.gauge_of_images(&gf.g.mul_vec(x), &gf.h.mul_vec(x)))
}

/// A minimizer of the inner problem defining `Δ₀`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Minimizer {
    pub value: Rational,
    pub z: Point,
}

struct Entry {
    value: Rational,
    hz: RationalVector,
    z: Point,
}

/// Tabulates `D` over a search box so that `Δ₀` lookups reduce to a scan of
/// one residue class, sorted by gauge value.
pub struct GaugeEvaluator {
    g: RationalMatrix,
    h: RationalMatrix,
    params: GaugeParams,
    sbox: SearchBox,
    classes: HashMap<RationalVector, Vec<Entry>>,
    memo: RefCell<HashMap<Point, Option<Minimizer>>>,
}

fn residue(g: &RationalMatrix, x: &[i64]) -> RationalVector {
    g.mul_point(x).iter().map(frac).collect()
}

impl GaugeEvaluator {
    pub fn new(gf: &GroupForm, params: GaugeParams, sbox: SearchBox) -> Result<Self, GaugeError> {
        params.check(gf)?;
        same_len("search box", gf.dim(), sbox.dim())?;
        let mut classes: HashMap<RationalVector, Vec<Entry>> = HashMap::new();
        for z in sbox.points() {
            let gz = gf.g.mul_point(&z);
            let hz = gf.h.mul_point(&z);
            let value = params.gauge_of_images(&gz, &hz);
            let key = gz.iter().map(frac).collect();
            classes.entry(key).or_default().push(Entry { value, hz, z });
        }
        for entries in classes.values_mut() {
            entries.sort_by(|a, b| a.value.cmp(&b.value).then_with(|| a.z.cmp(&b.z)));
        }
        Ok(GaugeEvaluator {
            g: gf.g.clone(),
            h: gf.h.clone(),
            params,
            sbox,
            classes,
            memo: RefCell::new(HashMap::new()),
        })
    }

    pub fn params(&self) -> &GaugeParams {
        &self.params
    }

    pub fn search_box(&self) -> &SearchBox {
        &self.sbox
    }

    /// Minimizer of `D(z)` over `z` in the box with `Gz ≡ Gx` and
    /// `Hz >= Hx`; ties go to the lexicographically smallest `z`.
    pub fn minimizer(&self, x: &[i64]) -> Option<Minimizer> {
        assert_eq!(x.len(), self.sbox.dim(), "point dimension");
        if let Some(hit) = self.memo.borrow().get(x) {
            return hit.clone();
        }
        let hx = self.h.mul_point(x);
        let found = self.classes.get(&residue(&self.g, x)).and_then(|entries| {
            entries
                .iter()
                .find(|e| e.hz.iter().zip(&hx).all(|(a, b)| a >= b))
                .map(|e| Minimizer {
                    value: e.value.clone(),
                    z: e.z.clone(),
                })
        });
        self.memo.borrow_mut().insert(x.to_vec(), found.clone());
        found
    }

    pub fn delta0(&self, x: &[i64]) -> ExtendedRational {
        match self.minimizer(x) {
            Some(m) => ExtendedRational::Finite(m.value),
            None => ExtendedRational::PositiveInfinity,
        }
    }

    /// `π(x) = min { c̄y + α₀Δ₀(x − y) : y ∈ E, y <= x }`.
    pub fn pi<'e>(
        &self,
        cbar: &[Rational],
        generators: impl IntoIterator<Item = &'e Point>,
        alpha0: &Rational,
        x: &[i64],
    ) -> ExtendedRational {
        generators
            .into_iter()
            .filter(|y| dominated_by(y, x))
            .filter_map(|y| {
                let d = self.minimizer(&point_sub(x, y))?;
                Some(cost(cbar, y) + alpha0 * d.value)
            })
            .min()
            .map_or(ExtendedRational::PositiveInfinity, ExtendedRational::Finite)
    }

    /// Smallest `Δ₀(x − y)` over region points `x >= y`.
    pub fn region_min(&self, region: &[Point], y: &[i64]) -> Option<RegionMin> {
        let mut best: Option<RegionMin> = None;
        for x in region.iter().filter(|x| dominated_by(y, x)) {
            if let Some(m) = self.minimizer(&point_sub(x, y)) {
                if best.as_ref().is_none_or(|b| m.value < b.value) {
                    best = Some(RegionMin {
                        value: m.value,
                        x: x.clone(),
                        z: m.z,
                    });
                }
            }
        }
        best
    }
}

fn cost(cbar: &[Rational], y: &[i64]) -> Rational {
    crate::arith::dot_point(cbar, y)
}

/// Minimum of `Δ₀(x − y)` over the region together with its witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionMin {
    pub value: Rational,
    pub x: Point,
    pub z: Point,
}

/// Region points inside the box, in lexicographic order.
pub fn region_points(gf: &GroupForm, region: FeasibleRegion, sbox: &SearchBox) -> Result<Vec<Point>, GaugeError> {
    check_point(gf, sbox.dim())?;
    Ok(sbox
        .points()
        .filter(|x| gf.is_feasible(x, region).unwrap_or(false))
        .collect())
}

pub fn delta0(
    params: &GaugeParams,
    gf: &GroupForm,
    x: &[i64],
    sbox: &SearchBox,
) -> Result<ExtendedRational, GaugeError> {
    check_point(gf, x.len())?;
    Ok(GaugeEvaluator::new(gf, params.clone(), sbox.clone())?.delta0(x))
}

pub fn pi_eval(
    gf: &GroupForm,
    generators: &[Point],
    params: &GaugeParams,
    alpha0: &Rational,
    x: &[i64],
    sbox: &SearchBox,
) -> Result<ExtendedRational, GaugeError> {
    check_point(gf, x.len())?;
    let eval = GaugeEvaluator::new(gf, params.clone(), sbox.clone())?;
    Ok(eval.pi(&gf.cbar, generators, alpha0, x))
}

pub fn min_delta_over_region(
    params: &GaugeParams,
    gf: &GroupForm,
    y: &[i64],
    region: FeasibleRegion,
    sbox: &SearchBox,
) -> Result<ExtendedRational, GaugeError> {
    check_point(gf, y.len())?;
    let points = region_points(gf, region, sbox)?;
    if points.is_empty() {
        return Err(GaugeError::EmptyRegion);
    }
    let eval = GaugeEvaluator::new(gf, params.clone(), sbox.clone())?;
    Ok(eval
        .region_min(&points, y)
        .map_or(ExtendedRational::PositiveInfinity, |m| ExtendedRational::Finite(m.value)))
}

/// `Δ₀` at every unit vector.
pub fn unit_gauges(eval: &GaugeEvaluator, n: usize) -> Vec<ExtendedRational> {
    (0..n).map(|j| eval.delta0(&unit_point(j, n))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, ratio};
    use crate::model::fixtures::first_group_form;
    use proptest::prelude::*;

    fn fin(r: Rational) -> ExtendedRational {
        ExtendedRational::Finite(r)
    }

    fn ones() -> (GroupForm, GaugeParams, SearchBox) {
        let gf = first_group_form(None);
        let p = GaugeParams::ones(&gf);
        (gf, p, SearchBox::uniform(2, 12).unwrap())
    }

    #[test]
    fn diamond_examples() {
        let (gf, p, _) = ones();
        assert_eq!(diamond_d(&p, &gf, &[int(1), int(0)]).unwrap(), int(1));
        assert_eq!(diamond_d(&p, &gf, &[int(0), int(0)]).unwrap(), int(0));
        assert_eq!(diamond_d(&p, &gf, &[int(0), int(1)]).unwrap(), ratio(3, 2));
        assert!(diamond_d(&p, &gf, &[int(0)]).is_err());
        let short = GaugeParams::uniform(0, 1, &int(1));
        assert!(diamond_d(&short, &gf, &[int(0), int(0)]).is_err());
    }

    #[test]
    fn delta0_examples() {
        let (gf, p, sb) = ones();
        assert_eq!(delta0(&p, &gf, &[1, 0], &sb).unwrap(), fin(int(1)));
        assert_eq!(delta0(&p, &gf, &[0, 1], &sb).unwrap(), fin(ratio(1, 2)));
        for k in 1..=6 {
            let a = ratio(k + 2, 3);
            let pk = GaugeParams::symmetric(vec![int(5)], vec![a.clone()]);
            assert_eq!(delta0(&pk, &gf, &[0, 2], &sb).unwrap(), fin(int(0)));
            assert_eq!(delta0(&pk, &gf, &[k, 0], &sb).unwrap(), fin(a * int(k)));
        }
    }

    #[test]
    fn minimizer_of_half_step() {
        let (gf, p, sb) = ones();
        let eval = GaugeEvaluator::new(&gf, p, sb).unwrap();
        let m = eval.minimizer(&[0, 1]).unwrap();
        assert_eq!(m.z, vec![1, 1]);
        assert_eq!(eval.delta0(&[0, 1]), fin(ratio(1, 2)));
    }

    #[test]
    fn unreachable_class_is_infinite() {
        let (gf, p, _) = ones();
        // Hz >= H(0, 5) = -5 is easy but (5, 0) needs z1 - z2 >= 5.
        let tight = SearchBox::uniform(2, 3).unwrap();
        assert_eq!(delta0(&p, &gf, &[5, 0], &tight).unwrap(), ExtendedRational::PositiveInfinity);
    }

    #[test]
    fn pi_examples() {
        let (gf, p, sb) = ones();
        let one = int(1);
        assert_eq!(pi_eval(&gf, &[vec![0, 0]], &p, &one, &[1, 0], &sb).unwrap(), fin(int(1)));
        assert_eq!(pi_eval(&gf, &[vec![0, 0]], &p, &one, &[0, 0], &sb).unwrap(), fin(int(0)));
        let e = vec![vec![0, 0], vec![1, 0]];
        assert_eq!(pi_eval(&gf, &e, &p, &one, &[2, 0], &sb).unwrap(), fin(int(2)));
    }

    #[test]
    fn region_minimum() {
        let (gf, p, sb) = ones();
        let y0 = min_delta_over_region(&p, &gf, &[0, 0], FeasibleRegion::Linear, &sb).unwrap();
        assert_eq!(y0, fin(int(1)));
        let y0 = min_delta_over_region(&p, &gf, &[0, 0], FeasibleRegion::Integer, &sb).unwrap();
        assert_eq!(y0, fin(ratio(3, 2)));
        let on_region = min_delta_over_region(&p, &gf, &[2, 1], FeasibleRegion::Integer, &sb).unwrap();
        assert_eq!(on_region, fin(int(0)));
        let from_unit = min_delta_over_region(&p, &gf, &[1, 0], FeasibleRegion::Integer, &sb).unwrap();
        let mut brute = ExtendedRational::PositiveInfinity;
        for x in sb.points().filter(|x| gf.is_feasible(x, FeasibleRegion::Integer).unwrap() && x[0] >= 1) {
            brute = brute.min(delta0(&p, &gf, &[x[0] - 1, x[1]], &sb).unwrap());
        }
        assert_eq!(from_unit, brute);
        assert_eq!(from_unit, fin(ratio(1, 2)), "brute force gave {brute}");

        let empty = SearchBox::uniform(2, 0).unwrap();
        assert_eq!(
            min_delta_over_region(&p, &gf, &[0, 0], FeasibleRegion::Integer, &empty),
            Err(GaugeError::EmptyRegion)
        );
    }

    #[test]
    fn box_enumeration() {
        let sb = SearchBox::new(vec![1, 2]).unwrap();
        let pts: Vec<Point> = sb.points().collect();
        assert_eq!(pts.len() as u64, sb.count());
        assert_eq!(pts[0], vec![0, 0]);
        assert_eq!(pts[1], vec![0, 1]);
        assert_eq!(pts[5], vec![1, 2]);
        assert_eq!(SearchBox::new(vec![]).unwrap().points().count(), 1);
        assert!(SearchBox::new(vec![-1]).is_err());
    }

    fn arb_small() -> impl Strategy<Value = Rational> {
        (-12i64..=12, 1i64..=4).prop_map(|(p, q)| ratio(p, q))
    }

    proptest! {
        #[test]
        fn gauge_is_positively_homogeneous(
            x in prop::collection::vec(arb_small(), 2),
            lam in (0i64..=9, 1i64..=5),
            gp in arb_small(), gm in arb_small(), ap in arb_small(), am in arb_small(),
        ) {
            let gf = first_group_form(None);
            let p = GaugeParams { gamma_plus: vec![gp], gamma_minus: vec![gm], alpha_plus: vec![ap], alpha_minus: vec![am] };
            let l = ratio(lam.0, lam.1);
            let scaled: RationalVector = x.iter().map(|v| v * &l).collect();
            prop_assert_eq!(diamond_d(&p, &gf, &scaled).unwrap(), diamond_d(&p, &gf, &x).unwrap() * l);
        }
    }
}
