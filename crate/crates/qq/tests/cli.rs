use std::process::{Command, Output};

fn qq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qq")).args(args).env_remove("QQ_SEED").output().expect("qq runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Header plus numeric rows of a CSV body, skipping '#' lines.
fn parse(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<String> = lines.next().expect("header").split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn column(text: &str, name: &str) -> Vec<f64> {
    let (h, rows) = parse(text);
    let j = h.iter().position(|c| c == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[j].parse().unwrap()).collect()
}

const SMOKE: &[&[&str]] = &[
    &["bloch"],
    &["basis-tables"],
    &["bell-states"],
    &["partial-trace", "--state", "ghz"],
    &["dispersion"],
    &["ring-propagator", "--j", "2", "--k", "1"],
    &["rabi", "--detuning", "0.3"],
    &["berry"],
    &["coherent"],
    &["squeeze"],
    &["cg-table", "--j1", "1.5", "--j2", "1"],
    &["wigner-d", "--j", "1.5"],
    &["hydrogen"],
    &["stark"],
    &["variational"],
    &["sudden"],
    &["wkb", "--potential", "quartic"],
    &["chsh", "--theta-grid", "5", "--samples", "20000"],
    &["ghz"],
    &["lhv-curve"],
    &["dirac-dispersion", "--chain", "12"],
    &["clifford"],
    &["rg-flow"],
    &["duality-tc"],
    &["scaling-exponents"],
    &["tfim-gap", "--points", "5", "--numeric-n", "6"],
    &["qubit-imaginary-time"],
    &["wf-flow"],
];

#[test]
fn every_table_parses_back() {
    for args in SMOKE {
        let o = qq(args);
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let text = stdout(&o);
        assert!(text.starts_with(&format!("# qq {}\n# params: ", args[0])), "{args:?}");
        assert!(text.contains("# seed: 20250101\n"));
        let (h, rows) = parse(&text);
        assert!(!rows.is_empty(), "{args:?} has no rows");
        for r in &rows {
            assert_eq!(r.len(), h.len(), "{args:?} ragged row {r:?}");
            for cell in r {
                if let Ok(x) = cell.parse::<f64>() {
                    assert!(x.is_finite(), "{args:?}: {cell}");
                }
            }
        }
    }
}

#[test]
fn reruns_are_byte_identical() {
    for args in [&["chsh", "--theta-grid", "4", "--samples", "50000", "--seed", "7"][..], &["wf-flow"], &["hydrogen"]] {
        assert_eq!(qq(args).stdout, qq(args).stdout, "{args:?}");
    }
}

#[test]
fn seed_changes_monte_carlo_only_through_the_seed() {
    let a = stdout(&qq(&["chsh", "--theta-grid", "3", "--samples", "10000", "--seed", "1"]));
    let b = stdout(&qq(&["chsh", "--theta-grid", "3", "--samples", "10000", "--seed", "2"]));
    assert_ne!(a, b);
    assert_eq!(column(&a, "E_quantum"), column(&b, "E_quantum"));
    let env = Command::new(env!("CARGO_BIN_EXE_qq")).args(["chsh", "--theta-grid", "3", "--samples", "10000"]).env("QQ_SEED", "1").output().unwrap();
    assert_eq!(stdout(&env), a);
}

#[test]
fn tsv_and_output_file() {
    let o = qq(&["rg-flow", "--steps", "3", "--format", "tsv"]);
    assert!(stdout(&o).contains("step\tK\n0\t2.0\n"));
    let dir = std::env::temp_dir().join(format!("qq-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("flow.csv");
    let o = qq(&["rg-flow", "-o", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&qq(&["rg-flow"])));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(qq(&["rg-flow", "--steps", "x"]).status.code(), Some(2));
    assert_eq!(qq(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(qq(&["bloch", "--points", "0"]).status.code(), Some(2));
    assert_eq!(qq(&["cg-table", "--j1", "0.3"]).status.code(), Some(2));
    assert_eq!(qq(&["tfim-gap", "--numeric-n", "40"]).status.code(), Some(2));
    assert_eq!(qq(&["verify-all", "--only", "nothing"]).status.code(), Some(2));
    assert_eq!(qq(&["rg-flow", "-o", "/nonexistent-dir/x.csv"]).status.code(), Some(2));
    // E(Z) rises across this bracket, so there is no interior minimum.
    assert_eq!(qq(&["variational", "--z-min", "2.0", "--z-max", "2.4"]).status.code(), Some(1));
}

#[test]
fn rg_flow_decreases_monotonically() {
    let k = column(&stdout(&qq(&["rg-flow", "--k0", "2.0", "--steps", "12"])), "K");
    assert_eq!(k.len(), 13);
    assert_eq!(k[0], 2.0);
    assert!(k.windows(2).all(|w| w[1] < w[0]));
    assert!(*k.last().unwrap() < 1e-6);
}

#[test]
fn tfim_gap_column_is_exact() {
    let text = stdout(&qq(&["tfim-gap", "--j", "1", "--h-min", "0", "--h-max", "2", "--points", "201"]));
    let h = column(&text, "h");
    let g = column(&text, "gap");
    assert_eq!(h.len(), 201);
    for (h, g) in h.iter().zip(&g) {
        assert!((g - 2.0 * (1.0 - h).abs()).abs() < 1e-12);
    }
}

#[test]
fn cg_table_is_sorted_and_normalized() {
    let text = stdout(&qq(&["cg-table", "--j1", "1", "--j2", "0.5"]));
    let (j, m, c) = (column(&text, "j"), column(&text, "m"), column(&text, "coeff"));
    assert_eq!(j[0], 1.5);
    assert_eq!(m[0], 1.5);
    let mut norm = std::collections::BTreeMap::new();
    for i in 0..j.len() {
        *norm.entry(((2.0 * j[i]) as i32, (2.0 * m[i]) as i32)).or_insert(0.0) += c[i] * c[i];
    }
    assert_eq!(norm.len(), 6);
    assert!(norm.values().all(|s| (s - 1.0).abs() < 1e-12));
}

#[test]
fn verify_all_rg_passes() {
    let o = qq(&["verify-all", "--only", "rg"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_all_reports_known_failures() {
    let o = qq(&["verify-all", "--only", "pt"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("FAIL"));
    assert!(text.contains("known failure"));
}
