//! Fast built-in checks with hand-computable answers, runnable from the
//! CLI to confirm a build is sane without touching the experiment
//! pipelines.

use std::f64::consts::PI;

use crate::renewal::{self, SeedInfo};
use crate::subordinator::PrmRealization;
use crate::tailcore::TailModel;
use crate::{pitmanyor, subordinator, tailcore, verify};

#[derive(Debug, Clone)]
pub struct SelfCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn close(name: &'static str, got: f64, want: f64, tol: f64) -> SelfCheck {
    SelfCheck {
        name,
        passed: (got - want).abs() <= tol,
        detail: format!("got {got}, want {want}"),
    }
}

fn exact_u64(name: &'static str, got: u64, want: u64) -> SelfCheck {
    SelfCheck { name, passed: got == want, detail: format!("got {got}, want {want}") }
}

pub fn run_selftests() -> Vec<SelfCheck> {
    let mut checks = Vec::new();
    let tol = 1e-12;

    checks.push(close(
        "pareto-quantile",
        tailcore::pareto_sample(0.5, 0.25).expect("valid"),
        16.0,
        tol,
    ));

    let pareto = TailModel::exact_pareto(0.5).expect("valid");
    checks.push(close("scaling-d", pareto.scaling_d(16.0), 256.0, tol));
    checks.push(close("scaling-dtilde", pareto.scaling_dtilde(256.0), 16.0, tol));

    let ssrw = TailModel::ssrw_excursion();
    checks.push(close("ssrw-excursion-tail-2", ssrw.step_tail(2.0), 0.5, tol));
    checks.push(close("ssrw-excursion-tail-4", ssrw.step_tail(4.0), 0.375, tol));

    let steps = renewal::StepSequence::from_steps(
        pareto,
        vec![3.0, 4.0, 5.0],
        SeedInfo::new(0, 0),
    )
    .expect("valid steps");
    match renewal::first_passage(&steps, 6.0) {
        Ok(p) => {
            checks.push(exact_u64("first-passage-index", p.tau, 2));
            checks.push(close("first-passage-age", p.age, 0.5, tol));
            checks.push(close("first-passage-overshoot", p.overshoot, 1.0 / 6.0, tol));
        }
        Err(e) => checks.push(SelfCheck {
            name: "first-passage-index",
            passed: false,
            detail: e.to_string(),
        }),
    }

    let prm = PrmRealization::from_parts(0.5, 1.0, 1e-6, vec![(0.3, 2.0), (0.7, 6.0)])
        .expect("valid realization");
    checks.push(close(
        "subordinator-value",
        subordinator::subordinator_value(&prm, 0.5).expect("in horizon"),
        2.0,
        tol,
    ));
    checks.push(close(
        "local-time",
        subordinator::local_time(&prm, 3.0).expect("crossed"),
        0.7,
        tol,
    ));
    let ranked = subordinator::pitman_yor_at_inverse_time(&prm, 0.8).expect("valid");
    checks.push(close("ranked-jump-1", ranked.top(2)[0], 0.75, tol));
    checks.push(close("ranked-jump-2", ranked.top(2)[1], 0.25, tol));

    checks.push(close(
        "arcsine-density-midpoint",
        pitmanyor::arcsine_pdf(0.5, 0.5).expect("valid"),
        2.0 / PI,
        tol,
    ));
    checks.push(close(
        "mittag-leffler-mean-formula",
        pitmanyor::mittag_leffler_moment(0.5, 1).expect("valid"),
        2.0 / PI,
        tol,
    ));
    checks.push(close(
        "frechet-cdf-at-one",
        pitmanyor::frechet_cdf(0.5, 1.0).expect("valid"),
        (-1.0f64).exp(),
        tol,
    ));

    checks.push(close(
        "ks-identical-samples",
        verify::ks_two_sample(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).expect("nonempty"),
        0.0,
        tol,
    ));
    checks.push(close(
        "ks-disjoint-samples",
        verify::ks_two_sample(&[1.0, 2.0], &[5.0, 6.0]).expect("nonempty"),
        1.0,
        tol,
    ));

    checks
}
