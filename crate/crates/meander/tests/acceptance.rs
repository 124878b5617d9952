//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line (visible with `cargo test --test acceptance --
//! --nocapture`).

use meander::config::ExperimentConfig;
use meander::experiments::{self, ExperimentOutput};
use meander::renewal::{self, SeedInfo};
use meander::rng::substream;
use meander::tailcore::TailModel;
use meander::{pitmanyor, selftest, verify};

fn cfg(json: &str) -> ExperimentConfig {
    ExperimentConfig::from_json(json).expect("valid acceptance config")
}

fn verdict(number: usize, name: &str, out: &ExperimentOutput) {
    let passed = out.all_passed();
    let line = if passed { "PASS".to_string() } else {
        let failing: Vec<String> = out
            .reports
            .iter()
            .filter(|r| !r.passed)
            .map(|r| format!("{} (statistic {:.4e}, threshold {:.4e})", r.description, r.statistic, r.threshold))
            .collect();
        format!("FAIL [{}]", failing.join("; "))
    };
    println!("ACCEPTANCE {number} {name}: {line}");
    assert!(passed, "criterion {number} ({name}): {line}");
}

fn simple_verdict(number: usize, name: &str, passed: bool, detail: &str) {
    let line = if passed { "PASS".to_string() } else { format!("FAIL [{detail}]") };
    println!("ACCEPTANCE {number} {name}: {line}");
    assert!(passed, "criterion {number} ({name}): {line}");
}

#[test]
fn criterion_01_age_arcsine_law() {
    let mut all = Vec::new();
    // t grows with distance from alpha = 1/2: at alpha = 0.3 the age
    // keeps an atom of mass t^{-alpha} at 1 (first step crosses t), and
    // at alpha = 0.7 the renewal-function correction decays like
    // t^{alpha-1}; both must sit below the 0.02 KS tolerance
    for (alpha, t) in [(0.3, 1e7), (0.5, 1e5), (0.7, 1e7)] {
        let c = cfg(&format!(
            r#"{{"experiment": "dynkin-lamperti", "alpha": {alpha}, "t_levels": [{t}],
                "replicates": 20000, "seed": 101, "output_path": "unused"}}"#
        ));
        let out = experiments::run_experiment(&c, None).unwrap();
        all.extend(out.reports);
    }
    let out = ExperimentOutput { raw: vec![], reports: all };
    verdict(1, "age-arcsine-law", &out);
}

#[test]
fn criterion_02_ranked_partition_vs_stick_breaking() {
    let c = cfg(
        r#"{"experiment": "main-theorem", "alpha": 0.5, "t_levels": [1e5],
            "replicates": 10000, "seed": 102, "output_path": "unused"}"#,
    );
    let out = experiments::run_experiment(&c, None).unwrap();
    verdict(2, "ranked-partition-vs-stick-breaking", &out);
}

#[test]
fn criterion_03_pitman_yor_identity() {
    let c = cfg(
        r#"{"experiment": "pitman-yor-identity", "alpha": 0.5, "t_levels": [1.0],
            "replicates": 10000, "seed": 103, "output_path": "unused"}"#,
    );
    let out = experiments::run_experiment(&c, None).unwrap();
    verdict(3, "pitman-yor-identity", &out);
}

#[test]
fn criterion_04_point_process_poisson_counts() {
    let c = cfg(
        r#"{"experiment": "point-process", "alpha": 0.5, "t_levels": [1e6],
            "replicates": 10000, "seed": 104, "output_path": "unused"}"#,
    );
    let out = experiments::run_experiment(&c, None).unwrap();
    verdict(4, "point-process-poisson-counts", &out);
}

#[test]
fn criterion_05_joint_limit() {
    let c = cfg(
        r#"{"experiment": "joint-limit", "alpha": 0.5, "t_levels": [1e5],
            "replicates": 10000, "seed": 105, "output_path": "unused"}"#,
    );
    let out = experiments::run_experiment(&c, None).unwrap();
    // the grid test must actually have run (marginalization gate open)
    assert!(
        out.reports.iter().any(|r| r.description == "age-overshoot-grid-chi2-p"),
        "joint density failed its marginalization gate"
    );
    verdict(5, "joint-limit", &out);
}

#[test]
fn criterion_06_dependent_steps() {
    let c = cfg(
        r#"{"experiment": "dependence", "alpha": 0.5,
            "model": {"family": "stoch-vol", "phi": 0.7}, "t_levels": [1e5],
            "replicates": 20000, "seed": 106, "output_path": "unused"}"#,
    );
    let out = experiments::run_experiment(&c, None).unwrap();
    verdict(6, "dependent-steps", &out);
}

#[test]
fn criterion_07_walk_excursion_partition() {
    let c = cfg(
        r#"{"experiment": "ssrw-excursions", "alpha": 0.5,
            "model": {"family": "ssrw-excursion"}, "t_levels": [1e6],
            "replicates": 10000, "seed": 107, "output_path": "unused"}"#,
    );
    let out = experiments::run_experiment(&c, None).unwrap();
    verdict(7, "walk-excursion-partition", &out);
}

#[test]
fn criterion_08_frechet_maxima() {
    let c = cfg(
        r#"{"experiment": "frechet-max", "alpha": 0.5, "t_levels": [1.0],
            "replicates": 10000, "seed": 108, "output_path": "unused"}"#,
    );
    let out = experiments::run_experiment(&c, None).unwrap();
    verdict(8, "frechet-maxima", &out);
}

#[test]
fn criterion_09_analytic_unit_tier() {
    let mut failures = Vec::new();
    for check in selftest::run_selftests() {
        if !check.passed {
            failures.push(format!("{}: {}", check.name, check.detail));
        }
    }

    // stick-breaking residual mean at alpha = 1/2, 199 sticks: the
    // residual is prod (1 - xi_i) with mean prod i/(i+1) = 1/200
    let draws = 100_000u64;
    let sum: f64 = (0..draws)
        .map(|r| {
            let mut rng = substream(109, r);
            pitmanyor::stick_breaking(0.5, 199, &mut rng).unwrap().residual()
        })
        .sum();
    let mean = sum / draws as f64;
    if (mean - 0.005).abs() > 0.001 {
        failures.push(format!("stick residual mean {mean}, want 0.005 +- 0.001"));
    }

    // central-difference of the arcsine CDF against the density
    for alpha in [0.3, 0.5, 0.7] {
        for u in [0.2, 0.5, 0.8] {
            let h = 1e-6;
            let num = (pitmanyor::arcsine_cdf(alpha, u + h).unwrap()
                - pitmanyor::arcsine_cdf(alpha, u - h).unwrap())
                / (2.0 * h);
            let gap = (num - pitmanyor::arcsine_pdf(alpha, u).unwrap()).abs();
            if gap > 1e-4 {
                failures.push(format!("cdf/pdf mismatch {gap} at alpha={alpha} u={u}"));
            }
        }
    }

    // hand-checked passage example asserts exactly
    let model = TailModel::exact_pareto(0.5).unwrap();
    let steps =
        renewal::StepSequence::from_steps(model, vec![3.0, 4.0, 5.0], SeedInfo::new(0, 0)).unwrap();
    let p = renewal::first_passage(&steps, 6.0).unwrap();
    if p.tau != 2 || p.age != 0.5 {
        failures.push(format!("passage example gave tau={} age={}", p.tau, p.age));
    }
    // two-sample KS on identical data is exactly zero
    if verify::ks_two_sample(&[1.0, 2.0], &[1.0, 2.0]).unwrap() != 0.0 {
        failures.push("identical-sample KS not zero".into());
    }

    simple_verdict(9, "analytic-unit-tier", failures.is_empty(), &failures.join("; "));
}

#[test]
fn criterion_10_deterministic_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let mut failures = Vec::new();
    for (experiment, t) in [("dynkin-lamperti", 1e4), ("frechet-max", 1.0)] {
        let mut c = cfg(&format!(
            r#"{{"experiment": "{experiment}", "alpha": 0.5, "t_levels": [{t}],
                "replicates": 300, "seed": 110, "output_path": "unused"}}"#
        ));
        c.output_path = dir.path().join(experiment);
        let mut outputs = Vec::new();
        for threads in [1usize, 2, 7, 1] {
            let out = experiments::run_experiment(&c, Some(threads)).unwrap();
            let (raw, report) = experiments::write_outputs(&c, &out).unwrap();
            outputs.push((std::fs::read(raw).unwrap(), std::fs::read(report).unwrap()));
        }
        if !outputs.windows(2).all(|w| w[0] == w[1]) {
            failures.push(format!("{experiment} outputs differ across thread counts"));
        }
    }
    simple_verdict(10, "deterministic-outputs", failures.is_empty(), &failures.join("; "));
}
