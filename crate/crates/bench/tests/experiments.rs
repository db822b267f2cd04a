use randproj_bench::{run_experiment, BenchError, Config, ExperimentRegistry};

/// Small configurations so each experiment finishes quickly.
fn quick(name: &str) -> Config {
    let c = Config::new().with("seed", 11);
    match name {
        "jl" => c.with("dim", 200).with("ks", "5,10").with("trials", 200),
        "factor-bench" => c
            .with("rows", 60)
            .with("cols", 40)
            .with("true-rank", 5)
            .with("ks", "2,4,8")
            .with("trials", 3),
        "eigenfaces" => c.with("ks", "1,3,5"),
        "kpca" => c.with("per-class", 20).with("ms", "0,50"),
        "svm-grid" => c
            .with("per-class", 12)
            .with("classes", 3)
            .with("dim", 8)
            .with("gamma-count", 3)
            .with("features", 60)
            .with("parallel", 2),
        "ls-bench" => c.with("dims", "3,6").with("candidates", 200),
        other => panic!("no quick config for {other}"),
    }
}

#[test]
fn column_names_are_pinned() {
    let golden: &[(&str, &str, &[&str])] = &[
        ("jl", "k", &["mean_error", "stdev_error", "trials"]),
        (
            "factor-bench",
            "k",
            &[
                "svd_error",
                "rsvd_error",
                "rsvd_relative_error",
                "id_error",
                "rid_error",
                "rid_relative_error",
                "svd_seconds",
                "rsvd_seconds",
                "id_seconds",
                "rid_seconds",
            ],
        ),
        (
            "eigenfaces",
            "k",
            &["det_error", "rand_error", "max_angle_degrees", "det_seconds", "rand_seconds"],
        ),
        (
            "kpca",
            "features",
            &["gamma_lo", "gamma_hi", "point", "label", "pc1", "pc2", "radial_accuracy"],
        ),
        (
            "svm-grid",
            "gamma",
            &[
                "deterministic_accuracy",
                "random_serial_accuracy",
                "random_parallel_accuracy",
                "deterministic_seconds",
                "random_serial_seconds",
                "random_parallel_seconds",
            ],
        ),
        (
            "ls-bench",
            "n",
            &["rows", "residual_qr", "residual_random", "normal_residual_qr", "qr_seconds", "random_seconds"],
        ),
    ];
    let registry = ExperimentRegistry::standard();
    assert_eq!(registry.names().len(), golden.len());
    for (name, sweep, columns) in golden {
        let report = run_experiment(name, &quick(name)).unwrap();
        assert_eq!(report.experiment, *name);
        assert_eq!(report.sweep_name, *sweep, "{name}");
        assert_eq!(report.columns, *columns, "{name}");
        assert!(!report.rows.is_empty(), "{name}");
        assert!(report.rows.iter().all(|r| r.values.len() == columns.len()));
    }
}

#[test]
fn svm_grid_without_parallel_has_two_modes() {
    let c = Config::new().with("seed", 1).with("per-class", 10).with("classes", 2).with("dim", 4).with("gamma-count", 2).with("features", 30);
    let report = run_experiment("svm-grid", &c).unwrap();
    assert_eq!(
        report.columns,
        ["deterministic_accuracy", "random_serial_accuracy", "deterministic_seconds", "random_serial_seconds"]
    );
    assert!(report.parameters.contains_key("total_seconds.deterministic"));
}

#[test]
fn identical_config_reproduces_rows() {
    for name in ExperimentRegistry::standard().names() {
        let a = run_experiment(name, &quick(name)).unwrap();
        let b = run_experiment(name, &quick(name)).unwrap();
        assert_eq!(a.deterministic_content(), b.deterministic_content(), "{name}");
        assert_eq!(a.parameters.iter().filter(|(k, _)| !k.contains("seconds")).count(),
                   b.parameters.iter().filter(|(k, _)| !k.contains("seconds")).count());
    }
}

#[test]
fn seed_changes_random_results() {
    let a = run_experiment("jl", &quick("jl")).unwrap();
    let b = run_experiment("jl", &quick("jl").with("seed", 12)).unwrap();
    assert_ne!(a.deterministic_content(), b.deterministic_content());
}

#[test]
fn jl_mean_error_is_small() {
    let c = Config::new().with("dim", 1000).with("rank", 10).with("trials", 10000);
    let report = run_experiment("jl", &c).unwrap();
    assert_eq!(report.sweep_values(), vec![10.0]);
    let mean = report.column("mean_error").unwrap()[0];
    assert!(mean.abs() < 0.01, "{mean}");
}

#[test]
fn rid_relative_error_nonnegative_on_average() {
    let c = Config::new().with("rows", 200).with("cols", 100).with("trials", 5);
    let report = run_experiment("factor-bench", &c).unwrap();
    let rel = report.column("rid_relative_error").unwrap();
    let mean = rel.iter().sum::<f64>() / rel.len() as f64;
    assert!(mean >= 0.0, "{rel:?}");
    assert!(report.column("rsvd_relative_error").unwrap().iter().all(|&r| r >= -1e-12));
}

#[test]
fn random_search_never_beats_qr() {
    let report = run_experiment("ls-bench", &Config::new()).unwrap();
    let qr = report.column("residual_qr").unwrap();
    let random = report.column("residual_random").unwrap();
    assert_eq!(qr.len(), 5);
    for (q, r) in qr.iter().zip(&random) {
        assert!(r >= q, "{r} < {q}");
    }
}

#[test]
fn eigenface_errors_shrink_with_k() {
    let report = run_experiment("eigenfaces", &Config::new()).unwrap();
    let det = report.column("det_error").unwrap();
    assert!(det.windows(2).all(|w| w[1] <= w[0]));
    let angles = report.column("max_angle_degrees").unwrap();
    assert!(angles.iter().all(|a| a.is_finite() && *a >= 0.0));
}

#[test]
fn kpca_exact_embedding_separates_the_classes() {
    let c = Config::new().with("features", 0);
    let report = run_experiment("kpca", &c).unwrap();
    assert_eq!(report.rows.len(), 200);
    let acc = report.column("radial_accuracy").unwrap()[0];
    assert!(acc >= 0.95, "{acc}");
}

#[test]
fn kpca_gamma_range_uses_random_features_only() {
    let c = Config::new().with("per-class", 15).with("gamma-range", "0.5,2").with("ms", "30");
    let report = run_experiment("kpca", &c).unwrap();
    assert_eq!(report.column("gamma_hi").unwrap()[0], 2.0);
    let exact = Config::new().with("gamma-range", "0.5,2").with("features", 0);
    assert!(matches!(run_experiment("kpca", &exact), Err(BenchError::Usage(_))));
}

#[test]
fn unknown_experiment_lists_the_alternatives() {
    let err = run_experiment("nope", &Config::new()).unwrap_err();
    assert_eq!(err.exit_code(), 1);
    let msg = err.to_string();
    for name in ["jl", "factor-bench", "eigenfaces", "kpca", "svm-grid", "ls-bench"] {
        assert!(msg.contains(name), "{msg}");
    }
}

#[test]
fn every_invalid_key_is_listed() {
    let c = Config::new().with("dim", 10).with("colour", 1).with("flavour", 2);
    let msg = run_experiment("jl", &c).unwrap_err().to_string();
    let rejected = msg.split("(accepted").next().unwrap();
    assert!(rejected.contains("colour, flavour"), "{msg}");
    assert!(!rejected.contains("dim"), "{msg}");
}

#[test]
fn bad_values_are_usage_errors() {
    let c = Config::new().with("trials", "many");
    assert_eq!(run_experiment("jl", &c).unwrap_err().exit_code(), 1);
    let c = Config::new().with("ks", "0");
    assert_eq!(run_experiment("eigenfaces", &c).unwrap_err().exit_code(), 1);
}

#[test]
fn error_kinds_map_to_exit_codes() {
    let stalled = randproj::Error::NoConvergence {
        algorithm: "SMO",
        iterations: 10,
        residual: 0.5,
    };
    assert_eq!(BenchError::from(stalled).exit_code(), 3);
    let bad_arg = randproj::Error::InvalidArgument("k = 0".into());
    assert_eq!(BenchError::from(bad_arg).exit_code(), 1);
    assert_eq!(BenchError::Data("x".into()).exit_code(), 2);
}
