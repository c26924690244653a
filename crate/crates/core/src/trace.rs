//! `key=value` lines for iteration records and final outcomes.

use crate::arith::{format_point, format_rational, format_vector};
use crate::ascent::{Event, IterationRecord, SolveOutcome, StallReason};
use crate::gauge::GaugeParams;

pub fn format_params(p: &GaugeParams) -> String {
    format!(
        "gp{};gm{};ap{};am{}",
        format_vector(&p.gamma_plus),
        format_vector(&p.gamma_minus),
        format_vector(&p.alpha_plus),
        format_vector(&p.alpha_minus)
    )
}

pub fn format_event(e: &Event) -> String {
    match e {
        Event::Promoted(x) => format!("promote{}", format_point(x)),
        Event::Adjusted { lp_pi0, rounds, cuts } => {
            format!("lp[pi0={},rounds={rounds},cuts={cuts}]", format_rational(lp_pi0))
        }
        Event::AdjustAbandoned => "lp-abandoned".to_string(),
    }
}

pub fn format_record(r: &IterationRecord) -> String {
    let events = if r.events.is_empty() {
        "-".to_string()
    } else {
        r.events.iter().map(format_event).collect::<Vec<_>>().join(";")
    };
    format!(
        "iter={} xstar={} ratio={} alpha0={} pi0={} E_size={} C_size={} params={} events={}",
        r.iteration,
        format_point(&r.xstar),
        format_rational(&r.ratio),
        format_rational(&r.alpha0),
        format_rational(&r.pi0),
        r.e_size,
        r.c_size,
        format_params(&r.params),
        events
    )
}

/// Summary line. `point` is the solution over the caller's nonbasic
/// coordinates, `last` the final record if any.
pub fn format_outcome(outcome: &SolveOutcome, point: Option<&[i64]>, last: Option<&IterationRecord>) -> String {
    match outcome {
        SolveOutcome::Optimal(s) => format!(
            "outcome=optimal value={} point={} x={}",
            format_rational(&s.value),
            format_point(point.unwrap_or(&s.xn)),
            format_vector(&s.x)
        ),
        SolveOutcome::Stalled(d) => {
            let reason = match d.reason {
                StallReason::Stagnant { .. } => "stagnant",
                StallReason::NoSelectableCandidate => "no-selectable-candidate",
            };
            let ray = d.ray.as_deref().map_or("-".to_string(), format_point);
            format!(
                "outcome=stalled reason={reason} iter={} pi0={} ray={ray}",
                d.iteration,
                format_rational(&d.pi0)
            )
        }
        SolveOutcome::IterationLimit => match last {
            Some(r) => format!("outcome=iteration-limit iter={} pi0={}", r.iteration, format_rational(&r.pi0)),
            None => "outcome=iteration-limit".to_string(),
        },
        SolveOutcome::Infeasible => "outcome=infeasible".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, ratio};
    use crate::ascent::{Solution, StallDiagnostic};

    #[test]
    fn record_line() {
        let r = IterationRecord {
            iteration: 3,
            xstar: vec![2, 0],
            ratio: int(1),
            alpha0: int(1),
            pi0: ratio(1, 2),
            e_size: 4,
            c_size: 3,
            params: GaugeParams::symmetric(vec![int(8)], vec![int(1)]),
            events: vec![
                Event::Promoted(vec![0, 2]),
                Event::Adjusted {
                    lp_pi0: int(1),
                    rounds: 1,
                    cuts: 0,
                },
            ],
        };
        assert_eq!(
            format_record(&r),
            "iter=3 xstar=(2,0) ratio=1 alpha0=1 pi0=1/2 E_size=4 C_size=3 \
             params=gp(8);gm(8);ap(1);am(1) events=promote(0,2);lp[pi0=1,rounds=1,cuts=0]"
        );
        assert!(!format_record(&r).contains("  "));
    }

    #[test]
    fn outcome_lines() {
        let opt = SolveOutcome::Optimal(Solution {
            xn: vec![2, 1],
            x: vec![int(2), int(1), int(1), int(0)],
            value: int(5),
        });
        assert_eq!(format_outcome(&opt, None, None), "outcome=optimal value=5 point=(2,1) x=(2,1,1,0)");
        let stall = SolveOutcome::Stalled(StallDiagnostic {
            reason: StallReason::Stagnant { window: 10 },
            iteration: 10,
            pi0: int(1),
            ray: Some(vec![1, 0]),
        });
        assert_eq!(
            format_outcome(&stall, None, None),
            "outcome=stalled reason=stagnant iter=10 pi0=1 ray=(1,0)"
        );
        assert_eq!(format_outcome(&SolveOutcome::Infeasible, None, None), "outcome=infeasible");
    }
}
