use su11osc::cli::{parse_document, run, OutputDocument, Settings, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE};

fn ok(args: &[&str]) -> OutputDocument {
    let mut argv = vec!["su11"];
    argv.extend_from_slice(args);
    let out = run(argv);
    assert_eq!(out.code, EXIT_OK, "{args:?}: {}", out.stderr);
    parse_document(&out.stdout).expect("valid document")
}

fn code(args: &[&str]) -> i32 {
    let mut argv = vec!["su11"];
    argv.extend_from_slice(args);
    run(argv).code
}

#[test]
fn spectrum_levels() {
    let d = ok(&["spectrum", "--k", "0.5", "--n", "5"]);
    assert_eq!(d.schema, "su11-oscillator/1");
    assert_eq!(d.command, "spectrum");
    assert_eq!(d.column_values("energy").unwrap(), &[0.5, 1.5, 2.5, 3.5, 4.5, 5.5]);
}

#[test]
fn rho_quarter_is_tanh() {
    let d = ok(&["rho", "--k", "0.25", "--z", "0.5"]);
    assert!((d.column_values("rho").unwrap()[0] - 1f64.tanh()).abs() < 1e-15);
    let g = ok(&["rho", "--k", "0.25"]);
    assert_eq!(g.column_values("z").unwrap().len(), Settings::default().points);
}

#[test]
fn thermo_echoes_identities() {
    let d = ok(&["thermo", "--beta-hw", "1", "--k", "0.5"]);
    assert!(d.column_values("entropy_identity_residual").unwrap()[0].abs() < 1e-12);
    assert!(d.column_values("fluctuation_fd_residual").unwrap()[0].abs() < 1e-6);
    assert!((d.column_values("U").unwrap()[0] - (0.5 + 1.0 / (1f64.exp() - 1.0))).abs() < 1e-14);
}

#[test]
fn every_subcommand_round_trips() {
    let cases: &[&[&str]] = &[
        &["spectrum", "--k", "0.3", "--n", "4"],
        &["rep-check", "--k", "0.25", "--dim", "32"],
        &["coherent", "--k", "0.5", "--family", "bg", "--re", "1.2", "--im", "-0.4"],
        &["coherent", "--k", "1", "--family", "perelomov", "--re", "0.3", "--expectations"],
        &["rho", "--k", "1.5", "--z-min", "0.1", "--z-max", "5"],
        &["action", "--potential", "pt", "--energies", "0.5,1,2"],
        &["action", "--potential", "morse", "--v0", "5", "--mass", "10", "--quantize-k", "0.5"],
        &["density", "--space", "circle", "--k", "0.5", "--family", "perelomov", "--re", "0.4"],
        &["density", "--space", "disc", "--k", "1.5", "--family", "bg", "--re", "0.7"],
        &["density", "--space", "halfline", "--k", "1", "--re", "2"],
        &["thermo", "--beta-hw", "3", "--k", "2"],
        &["landau", "--charge", "-1", "--b", "2", "--mass", "1", "--k", "0.5"],
        &["stark", "--k", "0.5", "--e0", "1e3", "--nu", "1e8", "--rest-energy-gev", "100"],
        &["vacuum", "--k", "0.5", "--omega-hat", "1e15"],
        &["vacuum", "--k", "0.5", "--ell", "1e-4", "--unit", "kev-cm3"],
        &["vacuum", "--target", "4", "--ell", "1e-4", "--unit", "kev-cm3"],
        &["mulliken", "--ea", "10", "--eb", "9", "--omega1", "1", "--omega2", "1.1", "--omega-a1", "9.5", "--omega-b2", "8.45"],
        &["cover", "--g1", "0.3,-0.2,1", "--g2=-0.1,0.5,2"],
        &["cover", "--m", "4"],
    ];
    for args in cases {
        let d = ok(args);
        let again = parse_document(&d.to_json()).unwrap();
        assert_eq!(again, d);
        assert!(d.metadata.contains_key("version"));
    }
}

#[test]
fn csv_output() {
    let out = run(["su11", "spectrum", "--k", "0.25", "--n", "2", "--format", "csv"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(out.stdout, "n,energy\n0,0.25\n1,1.25\n2,2.25\n");
    let out = run(["su11", "--format", "csv", "rep-check", "--k", "1"]);
    assert!(out.stdout.lines().nth(1).unwrap().contains('e'));
    assert!(!out.stdout.contains(";"));
}

#[test]
fn deterministic_output() {
    let a = run(["su11", "density", "--space", "halfline", "--k", "0.7", "--re", "1.5"]);
    let b = run(["su11", "density", "--space", "halfline", "--k", "0.7", "--re", "1.5"]);
    assert_eq!(a, b);
}

#[test]
fn mulliken_recovers_k() {
    // k = 0.5: omega_a1 = 10 - 0.5, omega_b2 = 9 - 0.55
    let d = ok(&["mulliken", "--ea", "10", "--eb", "9", "--omega1", "1", "--omega2", "1.1", "--omega-a1", "9.5", "--omega-b2", "8.45"]);
    assert!((d.column_values("k").unwrap()[0] - 0.5).abs() < 1e-12);
}

#[test]
fn stark_flags_negative_index() {
    let d = ok(&["stark", "--k", "0.5", "--e0", "1e3", "--nu", "1e8", "--rest-energy", "1e-8"]);
    assert_eq!(d.column_values("nonpositive").unwrap()[0], 1.0);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&[]), EXIT_USAGE);
    assert_eq!(code(&["nonsense"]), EXIT_USAGE);
    assert_eq!(code(&["spectrum", "--k", "0.5"]), EXIT_USAGE);
    assert_eq!(code(&["spectrum", "--k", "abc", "--n", "3"]), EXIT_USAGE);
    assert_eq!(code(&["spectrum", "--k", "-1", "--n", "3"]), EXIT_USAGE);
    assert_eq!(code(&["spectrum", "-k", "0.5", "--n", "3"]), EXIT_USAGE);
    assert_eq!(code(&["density", "--space", "sphere", "--k", "1"]), EXIT_USAGE);
    assert_eq!(code(&["vacuum", "--k", "1"]), EXIT_USAGE);
    assert_eq!(code(&["cover"]), EXIT_USAGE);
    assert_eq!(code(&["thermo", "--beta-hw", "0", "--k", "1"]), EXIT_USAGE);
    assert_eq!(code(&["landau", "--charge", "1", "--b", "0", "--mass", "1", "--k", "0.5"]), EXIT_USAGE);
    assert_eq!(code(&["--format", "xml", "spectrum", "--k", "1", "--n", "1"]), EXIT_USAGE);
}

#[test]
fn numeric_failures_exit_three() {
    let out = run(["su11", "mulliken", "--ea", "1", "--eb", "1", "--omega1", "1", "--omega2", "1", "--omega-a1", "0", "--omega-b2", "0"]);
    assert_eq!(out.code, EXIT_NUMERIC);
    assert!(out.stderr.contains("numerical failure"));
    assert!(out.stdout.is_empty());
    assert_eq!(code(&["coherent", "--k", "0.5", "--family", "perelomov", "--re", "1.5"]), EXIT_NUMERIC);
    assert_eq!(code(&["action", "--potential", "morse", "--energies", "1.5"]), EXIT_NUMERIC);
}

#[test]
fn help_and_version_exit_zero() {
    let out = run(["su11", "--help"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("spectrum"));
    assert_eq!(code(&["--version"]), EXIT_OK);
}

#[test]
fn config_file_sets_defaults() {
    let dir = std::env::temp_dir().join(format!("su11-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.cfg");
    std::fs::write(&good, "# grid\npoints = 7\ndim=16\nrep_tol=1e-10\n").unwrap();
    let d = ok(&["rho", "--k", "1", "--config", good.to_str().unwrap()]);
    assert_eq!(d.column_values("rho").unwrap().len(), 7);
    let r = ok(&["rep-check", "--k", "1", "--config", good.to_str().unwrap()]);
    assert_eq!(r.params["dim"], 16);

    let bad = dir.join("bad.cfg");
    std::fs::write(&bad, "colour = blue\n").unwrap();
    assert_eq!(code(&["rho", "--k", "1", "--config", bad.to_str().unwrap()]), EXIT_USAGE);
    assert_eq!(code(&["rho", "--k", "1", "--config", dir.join("missing.cfg").to_str().unwrap()]), EXIT_USAGE);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn parse_rejects_malformed_documents() {
    let mut d = ok(&["spectrum", "--k", "0.5", "--n", "2"]);
    d.columns[0].values.pop();
    assert!(parse_document(&d.to_json()).is_err());
    let mut d = ok(&["spectrum", "--k", "0.5", "--n", "2"]);
    d.schema = "other/2".into();
    assert!(parse_document(&d.to_json()).is_err());
    assert!(parse_document("{}").is_err());
}

#[test]
fn settings_parser() {
    assert_eq!(Settings::from_config("").unwrap(), Settings::default());
    assert!(Settings::from_config("dim=2").is_err());
    assert!(Settings::from_config("points").is_err());
    assert_eq!(Settings::from_config("coherent_tail = 1e-9 # tighter\n").unwrap().coherent_tail, 1e-9);
}
