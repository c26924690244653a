use corner_ascent::arith::{ratio, ExtendedRational, Rational, RationalMatrix};
use corner_ascent::ascent::{solve, SolveOptions, SolveOutcome};
use corner_ascent::linprog::Relation;
use corner_ascent::model::{build_group_form, lp_optimal_basis, IpInstance};
use corner_ascent::oracle::{brute_force_instance, brute_force_ip, weak_duality_audit};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (1i64..=4).prop_flat_map(|q| (-2 * q..=2 * q).prop_map(move |p| ratio(p, q)))
}

/// `Ax <= b` over 2–4 variables with nonnegative costs.
fn inequality_instance() -> impl Strategy<Value = IpInstance> {
    (2usize..=4, 1usize..=2).prop_flat_map(|(n, m)| {
        (
            prop::collection::vec(prop::collection::vec(rational(), n), m),
            prop::collection::vec(rational(), m),
            prop::collection::vec((0i64..=8, 1i64..=2).prop_map(|(p, q)| ratio(p, q)), n),
        )
            .prop_map(move |(rows, b, c)| {
                IpInstance::new(RationalMatrix::from_rows(rows, n), vec![Relation::Le; m], b, c, None).unwrap()
            })
    })
}

fn bound_for(n: usize) -> i64 {
    match n {
        2 => 5,
        3 => 3,
        _ => 2,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_form_preserves_the_optimum(inst in inequality_instance()) {
        let n = inst.num_vars();
        let m = inst.num_rows();
        let k = bound_for(n);
        let gf = build_group_form(&inst, &(n..n + m).collect::<Vec<_>>()).unwrap();
        let original = brute_force_instance(&inst, &vec![k; n]);
        let reduced = brute_force_ip(&gf, &vec![k; n]);
        let shifted = match reduced.value {
            ExtendedRational::Finite(v) => ExtendedRational::Finite(v + &gf.zstar),
            inf => inf,
        };
        prop_assert_eq!(original.value, shifted);
        prop_assert_eq!(original.point, reduced.point);
    }

    #[test]
    fn lp_basis_group_form_preserves_the_optimum(inst in inequality_instance()) {
        let n = inst.num_vars();
        let Ok((basis, _)) = lp_optimal_basis(&inst) else { return Ok(()) };
        let gf = build_group_form(&inst, &basis).unwrap();
        // Enumerate the nonbasic variables; basic ones follow from them.
        let k = bound_for(gf.dim());
        let reduced = brute_force_ip(&gf, &vec![k; gf.dim()]);
        if let Some(xn) = &reduced.point {
            let lifted = gf.lift_solution(xn).unwrap();
            prop_assert!(gf.instance().is_feasible(&lifted.x));
            prop_assert_eq!(ExtendedRational::Finite(lifted.value - &gf.zstar), reduced.value.clone());
        }
        prop_assert!(n + inst.num_rows() == gf.dim() + gf.basis.len());
    }

    #[test]
    fn boxed_solve_never_overstates(inst in inequality_instance(), adjust in any::<bool>()) {
        let n = inst.num_vars();
        let m = inst.num_rows();
        let k = bound_for(n);
        let gf = build_group_form(&inst, &(n..n + m).collect::<Vec<_>>()).unwrap().with_uniform_box(k);
        let options = SolveOptions { param_adjust: adjust, max_iterations: 40, ..SolveOptions::default() };
        let Ok((outcome, records)) = solve(&gf, options) else { return Ok(()) };
        for r in &records {
            prop_assert!(weak_duality_audit(&gf, &r.pi0, &vec![k; n]).is_ok());
        }
        let best = brute_force_ip(&gf, &vec![k; n]);
        match outcome {
            SolveOutcome::Optimal(s) => {
                prop_assert_eq!(ExtendedRational::Finite(s.value - &gf.zstar), best.value);
            }
            SolveOutcome::Infeasible => prop_assert!(best.point.is_none()),
            _ => {}
        }
    }
}
