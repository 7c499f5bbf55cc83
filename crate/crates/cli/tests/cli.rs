//! End-to-end runs of the `qsparse` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const LN2: f64 = std::f64::consts::LN_2;

fn qsparse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsparse"))
        .args(args)
        .env("QSPARSE_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = qsparse(args);
    assert!(
        out.status.success(),
        "{args:?} failed with {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    qsparse(args).status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// One spin-orbital pair holding one electron in `(|10⟩ + |01⟩)/√2`.
fn bell_wf(dir: &Path) -> PathBuf {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    write(
        dir,
        "bell.wf",
        &format!("#wf {{\"format_version\":1,\"num_modes\":2,\"num_electrons\":1}}\n10 {h} 0\n01 {h} 0\n"),
    )
}

fn encoded(dir: &Path, wf: &Path, extra: &[&str]) -> PathBuf {
    let out = dir.join(format!("{}.state", wf.file_stem().unwrap().to_str().unwrap()));
    let mut args = vec!["encode", s(wf), "-o", s(&out)];
    args.extend_from_slice(extra);
    ok(&args);
    out
}

fn csv_matrix(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn bell_pair_mutual_information_is_two_ln_two() {
    let dir = tempfile::tempdir().unwrap();
    let state = encoded(dir.path(), &bell_wf(dir.path()), &[]);
    let m = csv_matrix(&ok(&["mi", s(&state)]));
    assert_eq!(m.len(), 2);
    assert!((m[0][1] - 2.0 * LN2).abs() < 1e-10, "{m:?}");
    assert!((m[0][1] - 1.386294).abs() < 1e-6);
    assert_eq!(m[0][1], m[1][0]);

    let bits = csv_matrix(&ok(&["--bits", "mi", s(&state)]));
    assert!((bits[0][1] - 2.0).abs() < 1e-10);

    let js: serde_json::Value = serde_json::from_str(&ok(&["mi", s(&state), "--format", "json"])).unwrap();
    assert_eq!(js["units"], "nats");
}

#[test]
fn determinant_has_no_mutual_information() {
    let dir = tempfile::tempdir().unwrap();
    let wf = write(dir.path(), "det.wf", "#wf {\"format_version\":1,\"num_modes\":6,\"num_electrons\":2}\n110000 1 0\n");
    for mapping in ["jw", "parity"] {
        let state = encoded(dir.path(), &wf, &["--mapping", mapping]);
        let m = csv_matrix(&ok(&["mi", s(&state)]));
        assert_eq!(m.len(), 6);
        assert!(m.iter().flatten().all(|v| v.abs() < 1e-12), "{mapping}: {m:?}");
    }
}

#[test]
fn encode_reports_support_and_cost() {
    let dir = tempfile::tempdir().unwrap();
    let wf = bell_wf(dir.path());
    let out = dir.path().join("b.state");
    let summary = ok(&["encode", s(&wf), "-o", s(&out)]);
    assert!(summary.contains("chi=2"), "{summary}");
    assert!(summary.contains("N=2"));
    assert!(summary.contains("encoding_cost=1"));

    // without -o the state itself is printed
    let text = ok(&["encode", s(&wf)]);
    assert!(text.starts_with("#state "));
    assert_eq!(text.lines().count(), 3);

    let summary = ok(&["encode", s(&wf), "--mapping", "parity", "--general", "-o", s(&out)]);
    // the second mode's parity Majoranas differ on two qubits, so |01⟩ splits in two
    assert!(summary.contains("encoding_cost=2"), "{summary}");
}

fn entropy_of(state: &Path, keep: &str) -> f64 {
    let line = ok(&["trace", s(state), "--keep", keep]);
    let tok = line.split_whitespace().find(|t| t.starts_with("entropy=")).unwrap();
    tok["entropy=".len()..].parse().unwrap()
}

#[test]
fn reduced_entropies_depend_on_the_mapping() {
    let dir = tempfile::tempdir().unwrap();
    let h = 0.5;
    let wf = write(
        dir.path(),
        "w.wf",
        &format!("#wf {{\"format_version\":1,\"num_modes\":4,\"num_electrons\":2}}\n1100 {h} 0\n1010 {h} 0\n0101 {h} 0\n0011 -{h} 0\n"),
    );
    let jw = encoded(dir.path(), &wf, &[]);
    let par = dir.path().join("p.state");
    ok(&["encode", s(&wf), "--mapping", "parity", "-o", s(&par)]);
    for p in [&jw, &par] {
        assert!(entropy_of(p, "0,1,2,3").abs() < 1e-12);
    }
    // qubit 0 holds n_0 under both mappings and particle number is conserved
    assert!((entropy_of(&jw, "0") - entropy_of(&par, "0")).abs() < 1e-12);
    // the parity block {0,1} decoheres against the parities stored above it
    assert!((entropy_of(&jw, "0,1") - 2.0 * LN2).abs() < 1e-12);
    assert!((entropy_of(&par, "0,1") - LN2).abs() < 1e-12);
}

#[test]
fn trace_methods_agree_and_write_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let state = encoded(dir.path(), &bell_wf(dir.path()), &[]);
    let mut lines = Vec::new();
    for m in ["direct", "ordered", "ones", "quadratic"] {
        let out = dir.path().join(format!("{m}.rdm"));
        let line = ok(&["trace", s(&state), "--keep", "1", "--method", m, "-o", s(&out)]);
        assert!(line.contains("dim=2"));
        assert!(line.contains(&format!("entropy={:.12}", LN2)), "{line}");
        lines.push(std::fs::read_to_string(out).unwrap());
    }
    assert!(lines.windows(2).all(|w| w[0] == w[1]));
    let bin = dir.path().join("r.bin");
    ok(&["trace", s(&state), "--keep", "0", "--binary", "-o", s(&bin)]);
    assert!(std::fs::metadata(bin).unwrap().len() > 0);
}

#[test]
fn particle_hole_moves_the_reference_to_the_vacuum() {
    let dir = tempfile::tempdir().unwrap();
    let wf = write(
        dir.path(),
        "hf.wf",
        "#wf {\"format_version\":1,\"num_modes\":4,\"num_electrons\":2,\"reference\":\"1100\"}\n1100 0.8 0\n0011 0.6 0\n",
    );
    let text = ok(&["encode", s(&wf), "--particle-hole"]);
    let labels: Vec<&str> = text.lines().skip(1).map(|l| l.split_whitespace().next().unwrap()).collect();
    assert_eq!(labels, ["0000", "1111"]);

    let text = ok(&["encode", s(&wf), "--particle-hole", "--reference", "0011"]);
    assert!(text.lines().skip(1).any(|l| l.starts_with("0000 ")));
    assert!(text.contains("particle_hole_reference"));
}

#[test]
fn sweep_ends_at_zero_for_a_pure_state() {
    let dir = tempfile::tempdir().unwrap();
    let state = encoded(dir.path(), &bell_wf(dir.path()), &[]);
    let js: serde_json::Value = serde_json::from_str(&ok(&["sweep", s(&state)])).unwrap();
    let recs = js["records"].as_array().unwrap();
    assert_eq!(recs.len(), 2);
    assert!((recs[0]["von_neumann"].as_f64().unwrap() - LN2).abs() < 1e-12);
    assert!(recs[1]["von_neumann"].as_f64().unwrap().abs() < 1e-12);

    let plot = dir.path().join("sweep.svg");
    let csv = ok(&["sweep", s(&state), "--method", "fermi", "--electrons", "1", "--format", "csv", "--plot", s(&plot)]);
    assert!(csv.starts_with("method,size,von_neumann,shannon,selection"));
    assert!(std::fs::read_to_string(plot).unwrap().starts_with("<svg"));

    let occ = write(dir.path(), "occ.txt", "1.0\n");
    let csv = ok(&["sweep", s(&state), "--method", "noon", "--occupations", s(&occ), "--format", "csv"]);
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn expectation_of_number_parity() {
    let dir = tempfile::tempdir().unwrap();
    let state = encoded(dir.path(), &bell_wf(dir.path()), &[]);
    let obs = write(dir.path(), "zz.obs", "1 0 ZZ\n0.5 0 X0 X1\n");
    let out = ok(&["expect", s(&state), "--observable", s(&obs)]);
    let v: Vec<f64> = out.split_whitespace().map(|t| t.parse().unwrap()).collect();
    // ⟨ZZ⟩ = -1 for one electron; ⟨XX⟩ = 1 for the symmetric combination
    assert!((v[0] - (-1.0 + 0.5)).abs() < 1e-12, "{out}");
    assert!(v[1].abs() < 1e-12);
}

#[test]
fn one_body_rdm_of_a_determinant() {
    let dir = tempfile::tempdir().unwrap();
    let wf = write(dir.path(), "d.wf", "#wf {\"format_version\":1,\"num_modes\":4,\"num_electrons\":2}\n1100 1 0\n");
    let state = encoded(dir.path(), &wf, &["--mapping", "parity"]);
    let js: serde_json::Value = serde_json::from_str(&ok(&["rdm", s(&state)])).unwrap();
    assert_eq!(js["mapping"], "parity");
    let noon: Vec<f64> = js["noon"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert!((noon[0] - 2.0).abs() < 1e-12 && noon[1].abs() < 1e-12);
    assert!((js["trace"].as_f64().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn mapping_files_drive_the_encoder() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("parity4.map");
    ok(&["convert-mapping", "parity", "--modes", "4", "-o", s(&map)]);
    assert_eq!(std::fs::read_to_string(&map).unwrap().lines().filter(|l| !l.starts_with('#')).count(), 8);
    let wf = write(dir.path(), "w.wf", "#wf {\"format_version\":1,\"num_modes\":4,\"num_electrons\":2}\n1100 0.6 0\n0110 0.8 0\n");
    let by_name = ok(&["encode", s(&wf), "--mapping", "parity"]);
    let by_file = ok(&["encode", s(&wf), "--mapping", s(&map)]);
    let body = |t: &str| t.lines().skip(1).map(str::to_string).collect::<Vec<_>>();
    assert_eq!(body(&by_name), body(&by_file));
}

#[test]
fn mi_heatmap_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let state = encoded(dir.path(), &bell_wf(dir.path()), &[]);
    let plot = dir.path().join("mi.svg");
    ok(&["mi", s(&state), "-o", s(&dir.path().join("mi.csv")), "--plot", s(&plot)]);
    let svg = std::fs::read_to_string(plot).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}

#[test]
fn small_benchmark_runs_and_fits() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("b.json");
    let csv = dir.path().join("b.csv");
    let plot = dir.path().join("b.svg");
    let table = ok(&[
        "bench", "--chi", "32,64,128", "--n", "16,24", "--reps", "3", "-o", s(&json), "--csv", s(&csv), "--plot", s(&plot),
    ]);
    assert!(table.contains("fit direct"));
    assert!(table.contains("fit quadratic"));
    let js: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(js["records"].as_array().unwrap().len(), 12);
    assert_eq!(std::fs::read_to_string(csv).unwrap().lines().count(), 13);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let state = encoded(dir.path(), &bell_wf(dir.path()), &[]);
    assert_eq!(code(&[]), 1);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    assert_eq!(code(&["trace", s(&state)]), 1, "missing --keep");
    assert_eq!(code(&["trace", s(&state), "--keep", "5"]), 1);
    assert_eq!(code(&["encode", s(&bell_wf(dir.path())), "--mapping", "nope"]), 1);
    assert_eq!(code(&["sweep", s(&state), "--method", "noon"]), 1);
    assert_eq!(code(&["mi", s(&dir.path().join("missing.state"))]), 2);
    let bad = write(dir.path(), "bad.state", "#state {\"format_version\":1,\"kind\":\"binary\",\"num_qubits\":2}\n10 x 0\n");
    assert_eq!(code(&["mi", s(&bad)]), 2);
    assert_eq!(code(&["trace", s(&state), "--keep", "0", "--method", "quadratic", "--budget", "1"]), 3);
    assert_eq!(code(&["bench", "--chi", "64", "--n", "16", "--time-limit", "0"]), 3);
    assert_eq!(code(&["bench", "--family", "water"]), 1);
}
