use scenario_drift::experiments::{
    control_report, cover_report, run, run_bounds_curve, run_wasserstein_curve, validation_report, ExperimentConfig,
    ExperimentKind, Params, ValidationMode,
};
use scenario_drift::risk::static_beta;
use scenario_drift::solvers::{solve_control, Strategy};
use scenario_drift::Error;

fn config(kind: ExperimentKind, seed: u64, edit: impl FnOnce(&mut Params)) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(kind, seed);
    edit(&mut c.params);
    c
}

#[test]
fn cover_gamma_is_static_plus_r0() {
    for seed in [1, 2, 3] {
        let report = cover_report(&config(ExperimentKind::Cover, seed, |_| {})).unwrap();
        assert_eq!(report.rows.len(), 4);
        for row in &report.rows {
            assert_eq!(row.robust_solution.half_width, row.static_solution.half_width + row.r0);
            assert_eq!(
                (row.robust_solution.binding_low, row.robust_solution.binding_high),
                (row.static_solution.binding_low, row.static_solution.binding_high)
            );
        }
    }
}

#[test]
fn cover_beta_decreases_in_r0() {
    let report = cover_report(&config(ExperimentKind::Cover, 5, |_| {})).unwrap();
    let betas: Vec<f64> = report.rows.iter().map(|r| r.beta_model_b.beta).collect();
    assert!(betas.windows(2).all(|w| w[1] < w[0]), "{betas:?}");
    assert!(report.rows.iter().all(|r| r.beta_model_b.beta > r.beta_static.beta));
}

#[test]
fn cover_without_drift_reduces_to_static_beta() {
    let report = cover_report(&config(ExperimentKind::Cover, 5, |p| p.preset = "static".into())).unwrap();
    let want = static_beta(309, 2, 0.1).unwrap().beta;
    for row in &report.rows {
        assert!(((row.beta_model_b.beta - want) / want).abs() < 1e-12);
        assert_eq!(row.beta_static.beta, want);
    }
}

#[test]
fn cover_unknown_preset_is_config_error() {
    let err = cover_report(&config(ExperimentKind::Cover, 5, |p| p.preset = "wobble".into())).unwrap_err();
    assert!(matches!(err, Error::Config(_)));
}

#[test]
fn control_curves_at_desk_scale() {
    let c = config(ExperimentKind::Control, 1, |p| {
        *p = p.clone().desk_scale();
        p.control_n = 50;
    });
    let report = control_report(&c).unwrap();
    let direct = solve_control(&report.instance, Strategy::BranchAndBound).unwrap();
    assert_eq!(report.solution(), &direct);
    let (flat, mid, steep) = (&report.curves[0].schedule, &report.curves[1].schedule, &report.curves[2].schedule);
    for k in 0..=50usize {
        let n = 50.0f64;
        let stat = if k == 50 { 1.0 } else { 1.0 - (1e-2 / (n * binomial(50, k as u64))).powf(1.0 / (50 - k) as f64) };
        assert!((flat.at(k) - stat.clamp(0.0, 1.0)).abs() <= 1e-12 * stat.max(1e-300), "k={k}");
        assert!(flat.at(k) <= mid.at(k) && mid.at(k) <= steep.at(k));
    }
    assert!(report.curves.iter().all(|c| c.schedule.at(50) == 1.0));

    let tables = report.tables();
    let realized: Vec<usize> = tables[0]
        .rows
        .iter()
        .filter(|r| r[6] == "true")
        .map(|r| r[3].parse().unwrap())
        .collect();
    assert_eq!(realized, vec![report.invariant.cardinality(); 3]);
}

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

#[test]
fn control_guard_propagates() {
    let c = config(ExperimentKind::Control, 1, |p| {
        p.strategy = "exhaustive".into();
        p.control_n = 5;
    });
    assert!(matches!(control_report(&c), Err(Error::Capacity { .. })));
}

#[test]
fn wasserstein_curve_endpoints() {
    let t = run_wasserstein_curve(&config(ExperimentKind::WassersteinCurve, 0, |p| p.preset = "equal_sigma".into())).unwrap();
    let exact = t.floats("exact");
    assert_eq!(exact.len(), 310);
    assert!((exact[0] - 0.2).abs() < 1e-15);
    assert_eq!(exact[309], 0.0);
    for (e, q) in exact.iter().zip(t.floats("quadrature")) {
        assert!((e - q).abs() < 1e-8);
    }

    let t = run_wasserstein_curve(&config(ExperimentKind::WassersteinCurve, 0, |_| {})).unwrap();
    for (e, gap) in t.floats("exact").iter().zip(t.floats("mean_gap")) {
        assert!(*e >= gap);
    }
    let gap = t.floats("mean_gap");
    for (i, g) in gap.iter().enumerate() {
        assert!((g - 0.2 * (1.0 - i as f64 / 309.0)).abs() < 1e-14);
    }
}

#[test]
fn bounds_curves() {
    let tables = run_bounds_curve(&config(ExperimentKind::BoundsCurve, 0, |p| p.r0_grid = vec![1.8, 2.0, 2.2, 2.4])).unwrap();
    let beta = tables[0].floats("beta_model_b");
    assert!(beta.windows(2).all(|w| w[1] < w[0]));
    let flat = tables[0].floats("beta_rho0");
    assert!(flat.iter().all(|b| *b == flat[0]));
    let eps = tables[1].floats("epsilon");
    let row = eps.iter().position(|e| *e == 0.1).unwrap();
    assert_eq!(tables[1].floats("n_explicit")[row], 309.0);
    assert_eq!(tables[1].floats("n_prop1")[row], 182.0);
}

#[test]
fn static_validation_passes() {
    let c = config(ExperimentKind::Validate, 3, |p| {
        p.validation_mode = ValidationMode::Static;
        p.samples = 5_000;
    });
    let report = validation_report(&c).unwrap();
    assert_eq!(report.summary.n, 309);
    assert_eq!(report.v_hat.len(), 500);
    assert!(report.summary.passed && !report.summary.vacuous());
}

#[test]
fn vacuous_validation_is_flagged() {
    let c = config(ExperimentKind::Validate, 3, |p| {
        p.validation_r0 = 0.3;
        p.repetitions = 100;
        p.samples = 500;
    });
    let s = validation_report(&c).unwrap().summary;
    assert!(s.vacuous() && s.passed);
}

#[test]
fn validation_needs_enough_repetitions() {
    let c = config(ExperimentKind::Validate, 3, |p| p.repetitions = 99);
    assert!(validation_report(&c).is_err());
}

#[test]
fn runs_are_reproducible_across_thread_counts() {
    let cases = [
        config(ExperimentKind::Cover, 9, |_| {}),
        config(ExperimentKind::Validate, 9, |p| {
            p.repetitions = 120;
            p.samples = 3_000;
        }),
        config(ExperimentKind::Control, 9, |p| {
            *p = p.clone().desk_scale();
            p.control_n = 30;
        }),
    ];
    for c in &cases {
        let csv = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| run(c).unwrap().tables.iter().map(|t| t.to_csv_string()).collect::<String>())
        };
        let one = csv(1);
        assert_eq!(one, csv(4));
        assert_eq!(one, csv(1));
    }
}
