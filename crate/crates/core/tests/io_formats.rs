//! Interchange files: round trips, determinism, error reporting and scale.

mod common;

use std::io::{BufReader, Write};

use common::*;
use qsparse::fermion::{jw_encode, FermionMapping, MajoranaString, MappingKind, OrbitalOrdering, Phase};
use qsparse::io::*;
use qsparse::trace::direct_trace;
use qsparse::*;
use rand::prelude::*;

fn bits(s: &str) -> BitString {
    s.parse().unwrap()
}

fn sample_wf(r: &mut impl Rng, n: usize, e: usize, chi: usize) -> FockWavefunction {
    let mut seen = std::collections::HashSet::new();
    let mut terms = Vec::with_capacity(chi);
    let modes: Vec<usize> = (0..n).collect();
    while terms.len() < chi {
        let occ: Vec<usize> = modes.choose_multiple(r, e).copied().collect();
        let b = BitString::from_indices(n, &occ).unwrap();
        if seen.insert(b.clone()) {
            terms.push((b, c(r.gen::<f64>() - 0.5, r.gen::<f64>() - 0.5)));
        }
    }
    let n2: f64 = terms.iter().map(|(_, a)| a.norm_sqr()).sum();
    let terms = terms.into_iter().map(|(b, a)| (b, a / n2.sqrt())).collect();
    FockWavefunction::new(n, e, terms).unwrap()
}

fn text_of(wf: &FockWavefunction, meta: &WavefunctionMeta) -> Vec<u8> {
    let mut buf = Vec::new();
    write_wavefunction_to(&mut buf, wf, meta).unwrap();
    buf
}

#[test]
fn minimal_file_is_one_determinant() {
    let text = "#wf {\"format_version\":1,\"num_modes\":4,\"num_electrons\":2}\n1100 1.0 0.0\n";
    let (wf, meta) = read_wavefunction_from(text.as_bytes()).unwrap();
    assert_eq!(wf.len(), 1);
    assert_eq!(wf.terms()[0], (bits("1100"), c(1.0, 0.0)));
    assert_eq!(wf.ordering, OrbitalOrdering::Interleaved);
    assert_eq!(meta.reference, None);
    let out = String::from_utf8(text_of(&wf, &meta)).unwrap();
    assert_eq!(out.lines().count(), 2);
}

#[test]
fn bad_record_reports_its_line() {
    let text = "#wf {\"format_version\":1,\"num_modes\":4,\"num_electrons\":2}\n1100 0.6 0\n\n101 0.8 0\n";
    match read_wavefunction_from(text.as_bytes()) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
        other => panic!("expected a parse error, got {other:?}"),
    }
    let dup = "#wf {\"format_version\":1,\"num_modes\":2,\"num_electrons\":1}\n10 0.6 0\n10 0.8 0\n";
    assert!(read_wavefunction_from(dup.as_bytes()).is_err());
}

#[test]
fn text_round_trip_is_exact_and_canonical() {
    let mut r = rng(21);
    for _ in 0..20 {
        let wf = sample_wf(&mut r, 12, 4, 40);
        let meta = WavefunctionMeta {
            reference: Some(bits("111100000000")),
            source: serde_json::json!({"package": "test", "threshold": 1e-10}),
        };
        let first = text_of(&wf, &meta);
        let (back, meta_back) = read_wavefunction_from(first.as_slice()).unwrap();
        assert_eq!(meta_back, meta);
        let mut want = wf.terms().to_vec();
        want.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(back.terms(), want.as_slice());
        assert_eq!(text_of(&back, &meta_back), first);

        let mut shuffled = wf.terms().to_vec();
        shuffled.shuffle(&mut r);
        let permuted = FockWavefunction::new(12, 4, shuffled).unwrap();
        assert_eq!(text_of(&permuted, &meta), first);
    }
}

#[test]
fn hundred_thousand_records_round_trip_in_text_and_binary() {
    let mut r = rng(22);
    let wf = sample_wf(&mut r, 40, 10, 100_000);
    let dir = tempfile::tempdir().unwrap();
    let text_path = dir.path().join("big.wf");
    let bin_path = dir.path().join("big.wfb");
    write_wavefunction(&wf, &text_path).unwrap();
    write_wavefunction_binary(&wf, &WavefunctionMeta::default(), &bin_path).unwrap();
    let a = read_wavefunction(&text_path).unwrap();
    let b = read_wavefunction(&bin_path).unwrap();
    assert_eq!(a.len(), 100_000);
    assert_eq!(a.terms(), b.terms());
}

#[test]
fn particle_hole_vacuum_survives_the_file() {
    let wf = FockWavefunction::new(4, 2, vec![(bits("1100"), c(0.8, 0.0)), (bits("1010"), c(0.6, 0.0))]).unwrap();
    let ph = qsparse::fermion::particle_hole(&wf, &bits("1100")).unwrap();
    let buf = text_of(&ph, &WavefunctionMeta::default());
    let (back, meta) = read_wavefunction_from(buf.as_slice()).unwrap();
    assert_eq!(back.vacuum(), ph.vacuum());
    assert_eq!(meta.reference, Some(bits("1100")));
    assert_eq!(back.terms()[0].0, bits("0000"));
}

#[test]
fn state_files_round_trip() {
    let mut r = rng(23);
    let s = random_state(&mut r, 9, 50);
    let meta = StateMeta {
        mapping: Some("jordan_wigner".into()),
        num_electrons: Some(3),
        source: serde_json::Value::Null,
    };
    let dir = tempfile::tempdir().unwrap();
    for (i, binary) in [false, true].into_iter().enumerate() {
        let p = dir.path().join(format!("s{i}"));
        if binary {
            write_state_binary(&s, &meta, &p).unwrap();
        } else {
            write_state(&s, &meta, &p).unwrap();
        }
        let (back, m) = read_state(&p).unwrap();
        assert_eq!(m, meta);
        let back = back.into_binary(1 << 20).unwrap();
        assert_eq!(back.sorted_terms(), s.sorted_terms());
    }

    let g = GeneralState::from_sparse(&s);
    let p = dir.path().join("g");
    write_general_state(&g, &meta, &p).unwrap();
    match read_state(&p).unwrap().0 {
        QubitState::General(back) => assert_eq!(dense_general(&back), dense_general(&g)),
        QubitState::Binary(_) => panic!("expected the product-form variant"),
    }
}

#[test]
fn mapping_files_round_trip_and_validate() {
    for m in [FermionMapping::jordan_wigner(5), FermionMapping::parity(5)] {
        let mut buf = Vec::new();
        write_mapping_to(&mut buf, &m).unwrap();
        let back = read_mapping_from(buf.as_slice(), "unnamed").unwrap();
        assert_eq!(back.kind(), m.kind());
        assert_eq!(back.gammas(), m.gammas());
    }
    // a relabelled Jordan-Wigner set is accepted as a custom mapping
    let text = "+XI\n+YI\n+ZX\n+ZY\n";
    let m = read_mapping_from(text.as_bytes(), "swapped").unwrap();
    assert_eq!(m.kind(), &MappingKind::Custom("swapped".into()));
    // commuting strings are rejected
    assert!(read_mapping_from("+XI\n+XI\n+ZX\n+ZY\n".as_bytes(), "bad").is_err());
    assert!(read_mapping_from("+XI\n+YI\n+ZX\n".as_bytes(), "odd").is_err());
    let phased = FermionMapping::new(
        vec![
            MajoranaString::new(Phase::MINUS_ONE, vec![PauliLetter::X]),
            MajoranaString::new(Phase::MINUS_ONE, vec![PauliLetter::Y]),
        ],
        MappingKind::Custom("neg".into()),
    )
    .unwrap();
    let mut buf = Vec::new();
    write_mapping_to(&mut buf, &phased).unwrap();
    assert!(String::from_utf8(buf.clone()).unwrap().contains("-X"));
    assert_eq!(read_mapping_from(buf.as_slice(), "neg").unwrap().gammas(), phased.gammas());
}

#[test]
fn density_matrix_dumps_round_trip() {
    let mut r = rng(24);
    let s = random_state(&mut r, 8, 40);
    let rho = direct_trace(&s, &QubitSubset::new(8, [1, 4, 6]).unwrap()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("rho.txt");
    let b = dir.path().join("rho.bin");
    write_rdm(&rho, &t).unwrap();
    write_rdm_binary(&rho, &b).unwrap();
    for p in [&t, &b] {
        let back = read_rdm(p).unwrap();
        assert_eq!(back.basis, rho.basis);
        assert_eq!(back.keep, rho.keep);
        assert_eq!(back.matrix, rho.matrix);
    }
}

#[test]
fn analysis_tables() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let bell = SparseState::from_terms(2, [(bits("00"), c(h, 0.0)), (bits("11"), c(h, 0.0))]).unwrap();
    let mi = qsparse::info::mutual_information_matrix(&bell).unwrap();
    let mut buf = Vec::new();
    write_mi_csv(&mut buf, &mi).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "0,1");
    let off: f64 = rows[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((off - 2.0 * std::f64::consts::LN_2).abs() < 1e-10);
    assert_eq!(read_mi_csv(BufReader::new(buf.as_slice())).unwrap(), mi);

    let report = MiReport::new(&mi, Some("jordan_wigner".into()), 2, "nats");
    let mut js = Vec::new();
    write_json(&mut js, &report).unwrap();
    let parsed: MiReport = serde_json::from_slice(&js).unwrap();
    assert_eq!(parsed, report);

    let sweep = qsparse::active::entropy_sweep(&bell, &qsparse::active::SweepSpec::MaxEntropy, &[1, 2]).unwrap();
    let mut csv = Vec::new();
    write_sweep_csv(&mut csv, &sweep).unwrap();
    let csv = String::from_utf8(csv).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "method,size,von_neumann,shannon,selection");
    assert!(csv.lines().nth(2).unwrap().ends_with(",0 1"));
    let recs = sweep_records(&sweep);
    let js = serde_json::to_value(&recs).unwrap();
    assert_eq!(js[0]["method"], "max_entropy");
    assert_eq!(js[1]["selection"], serde_json::json!([0, 1]));

    let state = jw_encode(&FockWavefunction::determinant(bits("1100"))).unwrap();
    let rdm = qsparse::info::one_body_rdm(&state, &FermionMapping::jordan_wigner(4)).unwrap();
    let occ = qsparse::info::noon(&rdm, qsparse::info::SpinPairing::Paired).unwrap();
    assert_eq!(occ.len(), 2);
    assert!((occ[0] - 2.0).abs() < 1e-12 && occ[1].abs() < 1e-12);
    let rep = OneBodyRdmReport::new(&rdm, "jordan_wigner", occ, "paired");
    assert!((rep.trace - 2.0).abs() < 1e-12);

    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("occ.txt");
    std::fs::File::create(&p).unwrap().write_all(b"# spatial\n2.0 1.9\n0.1,0.0\n").unwrap();
    assert_eq!(read_occupations(&p).unwrap(), vec![2.0, 1.9, 0.1, 0.0]);
}
