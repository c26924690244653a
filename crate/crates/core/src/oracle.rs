//! Exhaustive ground truth. Nothing here goes through the gauge tables, the
//! region helpers or the group-form feasibility predicates.

use num_traits::Zero;

use crate::arith::{ExtendedRational, Point, Rational};
use crate::gauge::GaugeParams;
use crate::linprog::Relation;
use crate::model::{GroupForm, IpInstance};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub point: Option<Point>,
    pub value: ExtendedRational,
    pub enumerated: u64,
}

/// Calls `visit` on every point of `[0, bounds]`, depth first.
fn enumerate(bounds: &[i64], visit: &mut dyn FnMut(&[i64])) {
    fn rec(bounds: &[i64], prefix: &mut Vec<i64>, visit: &mut dyn FnMut(&[i64])) {
        if prefix.len() == bounds.len() {
            visit(prefix);
            return;
        }
        for v in 0..=bounds[prefix.len()] {
            prefix.push(v);
            rec(bounds, prefix, visit);
            prefix.pop();
        }
    }
    rec(bounds, &mut Vec::with_capacity(bounds.len()), visit);
}

fn row_times(row: &[Rational], x: &[i64]) -> Rational {
    let mut s = Rational::zero();
    for (a, &v) in row.iter().zip(x) {
        s += a * Rational::from_integer(v.into());
    }
    s
}

fn congruent(a: &Rational, b: &Rational) -> bool {
    (a - b).is_integer()
}

fn group_feasible(gf: &GroupForm, x: &[i64]) -> bool {
    (0..gf.m1()).all(|i| congruent(&row_times(gf.g.row(i), x), &gf.g0[i]))
        && (0..gf.m2()).all(|i| row_times(gf.h.row(i), x) >= gf.h0[i])
}

fn keep_best(best: &mut Option<(Rational, Point)>, value: Rational, x: &[i64]) {
    // Depth-first order is lexicographic, so strict improvement keeps the
    // smallest point among ties.
    if best.as_ref().is_none_or(|(v, _)| value < *v) {
        *best = Some((value, x.to_vec()));
    }
}

fn finish(best: Option<(Rational, Point)>, enumerated: u64) -> OracleResult {
    match best {
        Some((v, p)) => OracleResult {
            point: Some(p),
            value: ExtendedRational::Finite(v),
            enumerated,
        },
        None => OracleResult {
            point: None,
            value: ExtendedRational::PositiveInfinity,
            enumerated,
        },
    }
}

/// Minimum of `c̄x` over the group form's integer points in `[0, bounds]`.
pub fn brute_force_ip(gf: &GroupForm, bounds: &[i64]) -> OracleResult {
    assert_eq!(bounds.len(), gf.dim(), "oracle box dimension");
    let mut best = None;
    let mut count = 0u64;
    enumerate(bounds, &mut |x| {
        count += 1;
        if group_feasible(gf, x) {
            keep_best(&mut best, row_times(&gf.cbar, x), x);
        }
    });
    finish(best, count)
}

/// Minimum of `cx` over the original instance's points in `[0, bounds]`.
/// Slacks of inequality rows must be integral.
pub fn brute_force_instance(inst: &IpInstance, bounds: &[i64]) -> OracleResult {
    assert_eq!(bounds.len(), inst.num_vars(), "oracle box dimension");
    let mut best = None;
    let mut count = 0u64;
    enumerate(bounds, &mut |x| {
        count += 1;
        let ok = (0..inst.num_rows()).all(|i| {
            let lhs = row_times(inst.a.row(i), x);
            let slack_ok = inst.relations[i] == Relation::Eq || congruent(&lhs, &inst.b[i]);
            inst.relations[i].holds(&lhs, &inst.b[i]) && slack_ok
        });
        if ok {
            keep_best(&mut best, row_times(&inst.c, x), x);
        }
    });
    finish(best, count)
}

fn raw_gauge(params: &GaugeParams, gf: &GroupForm, z: &[i64]) -> Rational {
    let mut total = Rational::zero();
    for i in 0..gf.m1() {
        let v = row_times(gf.g.row(i), z);
        let up = &params.gamma_plus[i] * &v;
        let down = -(&params.gamma_minus[i] * &v);
        total += if up > down { up } else { down };
    }
    for i in 0..gf.m2() {
        let v = row_times(gf.h.row(i), z);
        let up = &params.alpha_plus[i] * &v;
        let down = -(&params.alpha_minus[i] * &v);
        total += if up > down { up } else { down };
    }
    total
}

/// `Δ₀(x)` by scanning every `z` in `[0, bounds]`.
pub fn brute_force_delta0(params: &GaugeParams, gf: &GroupForm, x: &[i64], bounds: &[i64]) -> ExtendedRational {
    let gx: Vec<Rational> = (0..gf.m1()).map(|i| row_times(gf.g.row(i), x)).collect();
    let hx: Vec<Rational> = (0..gf.m2()).map(|i| row_times(gf.h.row(i), x)).collect();
    let mut best: Option<Rational> = None;
    enumerate(bounds, &mut |z| {
        let same_class = (0..gf.m1()).all(|i| congruent(&row_times(gf.g.row(i), z), &gx[i]));
        let dominates = (0..gf.m2()).all(|i| row_times(gf.h.row(i), z) >= hx[i]);
        if same_class && dominates {
            let d = raw_gauge(params, gf, z);
            if best.as_ref().is_none_or(|b| d < *b) {
                best = Some(d);
            }
        }
    });
    best.map_or(ExtendedRational::PositiveInfinity, ExtendedRational::Finite)
}

/// `Err(witness)` with the cheapest feasible point whose cost is below `pi0`.
pub fn weak_duality_audit(gf: &GroupForm, pi0: &Rational, bounds: &[i64]) -> Result<(), Point> {
    let mut worst = None;
    enumerate(bounds, &mut |x| {
        if group_feasible(gf, x) {
            let cost = row_times(&gf.cbar, x);
            if cost < *pi0 {
                keep_best(&mut worst, cost, x);
            }
        }
    });
    match worst {
        Some((_, x)) => Err(x),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, ratio};
    use crate::model::fixtures::{first_group_form, first_instance, second_group_form};

    fn fin(r: Rational) -> ExtendedRational {
        ExtendedRational::Finite(r)
    }

    #[test]
    fn ip_optima() {
        let r = brute_force_ip(&first_group_form(None), &[10, 10]);
        assert_eq!(r.point, Some(vec![2, 1]));
        assert_eq!(r.value, fin(int(5)));
        assert_eq!(r.enumerated, 121);

        for c2 in [3, 10] {
            let r = brute_force_ip(&second_group_form(c2, None), &[5, 5]);
            assert_eq!(r.point, Some(vec![0, 1]));
            assert_eq!(r.value, fin(int(c2)));
        }

        // x2 must be odd, so a box of zero width has no point.
        let r = brute_force_ip(&first_group_form(None), &[3, 0]);
        assert_eq!(r.point, None);
        assert_eq!(r.value, ExtendedRational::PositiveInfinity);
    }

    #[test]
    fn original_instance_optimum() {
        let r = brute_force_instance(&first_instance(), &[4, 4, 4, 4]);
        assert_eq!(r.point, Some(vec![2, 1, 1, 0]));
        assert_eq!(r.value, fin(int(5)));
        assert_eq!(r.enumerated, 625);
    }

    #[test]
    fn delta0_examples() {
        let gf = first_group_form(None);
        let ones = GaugeParams::ones(&gf);
        assert_eq!(brute_force_delta0(&ones, &gf, &[0, 1], &[8, 8]), fin(ratio(1, 2)));
        assert_eq!(brute_force_delta0(&ones, &gf, &[0, 0], &[8, 8]), fin(int(0)));
        let eight = GaugeParams::symmetric(vec![int(8)], vec![int(1)]);
        assert_eq!(brute_force_delta0(&eight, &gf, &[1, 1], &[8, 8]), fin(int(4)));
    }

    #[test]
    fn audits() {
        let gf = first_group_form(None);
        assert_eq!(weak_duality_audit(&gf, &int(1), &[10, 10]), Ok(()));
        assert_eq!(weak_duality_audit(&gf, &int(6), &[10, 10]), Err(vec![2, 1]));
        assert_eq!(weak_duality_audit(&gf, &int(100), &[3, 0]), Ok(()));
    }
}
