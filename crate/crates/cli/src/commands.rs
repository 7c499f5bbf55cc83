use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use serde_json::json;

use qsparse::active::{entropy_sweep, SweepSpec};
use qsparse::fermion::{encode, encoding_cost, general_encode, particle_hole, OrbitalOrdering, Vacuum};
use qsparse::info::{expectation, expectation_general, mutual_information_matrix, noon, one_body_rdm, SpinPairing};
use qsparse::io::*;
use qsparse::scaling::{run_benchmark, scaling_report, BenchConfig, BenchmarkRecord, TraceMethod};
use qsparse::trace::{direct_trace_with, quadratic_trace, RegisterKind};
use qsparse::{BitString, FermionMapping, GeneralState, QubitSubset, SparseState};

use crate::*;

const LN2: f64 = std::f64::consts::LN_2;

pub fn run(cli: &Cli) -> Result<()> {
    let units = Units::new(cli.bits);
    match &cli.command {
        Command::Encode(a) => encode_cmd(a),
        Command::Trace(a) => trace_cmd(a, units),
        Command::Mi(a) => mi_cmd(a, units),
        Command::Sweep(a) => sweep_cmd(a, units),
        Command::Expect(a) => expect_cmd(a),
        Command::Rdm(a) => rdm_cmd(a),
        Command::Bench(a) => bench_cmd(a),
        Command::ConvertMapping(a) => convert_mapping_cmd(a),
    }
}

#[derive(Clone, Copy)]
struct Units {
    factor: f64,
    name: &'static str,
}

impl Units {
    fn new(bits: bool) -> Self {
        if bits {
            Units { factor: 1.0 / LN2, name: "bits" }
        } else {
            Units { factor: 1.0, name: "nats" }
        }
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Buffered writer to `path`, or to stdout when absent.
fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// A built-in mapping by name, or a mapping file when `spec` names an existing path.
fn resolve_mapping(spec: &str, num_modes: usize) -> Result<FermionMapping> {
    let p = Path::new(spec);
    if p.is_file() {
        let m = read_mapping(p).with_context(|| format!("reading mapping {spec}"))?;
        if m.num_modes() != num_modes {
            bail!(qsparse::Error::LengthMismatch { expected: num_modes, found: m.num_modes() });
        }
        return Ok(m);
    }
    FermionMapping::by_name(spec, num_modes).map_err(|_| usage(format!("{spec:?} is neither a known mapping nor a file")))
}

fn load_binary(path: &Path, cap: u64) -> Result<(SparseState, StateMeta)> {
    let (s, meta) = read_state(path).with_context(|| format!("reading {}", path.display()))?;
    Ok((s.into_binary(cap)?, meta))
}

fn encode_cmd(a: &EncodeArgs) -> Result<()> {
    let (mut wf, meta) = read_wavefunction_with_meta(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let mut source = meta.source.clone();
    if a.particle_hole {
        if !matches!(wf.vacuum(), Vacuum::Empty) {
            bail!(usage("wavefunction is already relative to a reference determinant"));
        }
        let reference: BitString = match (&a.reference, &meta.reference) {
            (Some(text), _) => text.parse().map_err(|e| usage(format!("--reference: {e}")))?,
            (None, Some(r)) => r.clone(),
            (None, None) => {
                let r = wf.leading_determinant().cloned().context("empty wavefunction")?;
                log::warn!("no reference given; using the leading determinant {r}");
                r
            }
        };
        wf = particle_hole(&wf, &reference)?;
        source = json!({ "input": meta.source, "particle_hole_reference": reference.to_string() });
    }
    let mapping = resolve_mapping(&a.mapping, wf.num_modes())?;
    let cost = encoding_cost(&wf, &mapping)?;
    let out_meta = StateMeta {
        mapping: Some(mapping.name().to_string()),
        num_electrons: Some(wf.num_electrons()),
        source,
    };

    let t0 = Instant::now();
    let (chi, n) = if a.general {
        let g = general_encode(&wf, &mapping, a.cap)?;
        match &a.out {
            Some(p) => write_general_state(&g, &out_meta, p)?,
            None => write_general_state_to(&mut sink(None)?, &g, &out_meta)?,
        }
        (g.len(), g.num_qubits())
    } else {
        let s = encode(&wf, &mapping, a.cap)?;
        match (&a.out, a.binary) {
            (Some(p), true) => write_state_binary(&s, &out_meta, p)?,
            (Some(p), false) => write_state(&s, &out_meta, p)?,
            (None, _) => write_state_to(&mut sink(None)?, &s, &out_meta)?,
        }
        (s.len(), s.num_qubits())
    };
    let summary = format!(
        "mapping={} determinants={} chi={chi} N={n} encoding_cost={cost} seconds={:.3}",
        mapping.name(),
        wf.len(),
        t0.elapsed().as_secs_f64()
    );
    // the state owns stdout when no output file is given
    if a.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

fn trace_cmd(a: &TraceArgs, units: Units) -> Result<()> {
    let (state, _) = read_state(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let n = state.num_qubits();
    let keep = QubitSubset::new(n, a.keep.iter().copied()).map_err(|e| usage(format!("--keep: {e}")))?;
    let t0 = Instant::now();
    let rho = match a.method {
        TraceMethodArg::Quadratic => {
            let g = match state {
                QubitState::General(g) => g,
                QubitState::Binary(s) => GeneralState::from_sparse(&s),
            };
            quadratic_trace(&g, &keep, a.budget)?
        }
        m => {
            let kind = match m {
                TraceMethodArg::Ordered => RegisterKind::Ordered,
                TraceMethodArg::Ones => RegisterKind::OnesHashed,
                _ => RegisterKind::Hashed,
            };
            direct_trace_with(&state.into_binary(a.cap)?, &keep, kind)?
        }
    };
    let elapsed = t0.elapsed().as_secs_f64();
    let entropy = qsparse::info::von_neumann_entropy(&rho)? * units.factor;
    match (&a.out, a.binary) {
        (Some(p), true) => write_rdm_binary(&rho, p)?,
        (Some(p), false) => write_rdm(&rho, p)?,
        (None, _) => {}
    }
    println!(
        "kept={} dim={} trace={:.12} entropy={entropy:.12} {} seconds={elapsed:.6}",
        keep.len(),
        rho.dim(),
        rho.trace().re,
        units.name
    );
    Ok(())
}

fn mi_cmd(a: &MiArgs, units: Units) -> Result<()> {
    let (state, meta) = load_binary(&a.input, a.cap)?;
    let mi = mutual_information_matrix(&state)?.scaled(units.factor);
    let mut w = sink(a.out.as_deref())?;
    match a.format {
        TableFormat::Csv => write_mi_csv(&mut w, &mi)?,
        TableFormat::Json => write_json(&mut w, &MiReport::new(&mi, meta.mapping.clone(), state.len(), units.name))?,
    }
    w.flush()?;
    if let Some(p) = &a.plot {
        let title = format!("Mutual information ({}), N={} chi={}", units.name, state.num_qubits(), state.len());
        std::fs::write(p, svg::heatmap(&mi, &title))?;
    }
    Ok(())
}

fn sweep_cmd(a: &SweepArgs, units: Units) -> Result<()> {
    let (state, meta) = load_binary(&a.input, a.cap)?;
    let n = state.num_qubits();
    let spec = match a.method {
        SweepMethodArg::MaxEntropy => SweepSpec::MaxEntropy,
        SweepMethodArg::Fermi => SweepSpec::Fermi {
            num_electrons: a
                .electrons
                .or(meta.num_electrons)
                .ok_or_else(|| usage("fermi selection needs --electrons or an electron count in the state header"))?,
        },
        SweepMethodArg::Noon => {
            let path = a.occupations.as_ref().ok_or_else(|| usage("noon selection needs --occupations"))?;
            SweepSpec::Noon {
                spatial_occupations: read_occupations(path)?,
                ordering: match a.ordering {
                    OrderingArg::Interleaved => OrbitalOrdering::Interleaved,
                    OrderingArg::Blocked => OrbitalOrdering::Blocked,
                },
            }
        }
    };
    let sizes: Vec<usize> = if a.sizes.is_empty() {
        match a.method {
            SweepMethodArg::Noon => (2..=n).step_by(2).collect(),
            _ => (1..=n).collect(),
        }
    } else {
        a.sizes.clone()
    };
    let sweep = entropy_sweep(&state, &spec, &sizes)?.scaled(units.factor);
    let mut w = sink(a.out.as_deref())?;
    match a.format {
        TableFormat::Csv => write_sweep_csv(&mut w, &sweep)?,
        TableFormat::Json => write_json(
            &mut w,
            &json!({ "units": units.name, "num_qubits": n, "chi": state.len(), "records": sweep_records(&sweep) }),
        )?,
    }
    w.flush()?;
    if let Some(p) = &a.plot {
        let xs: Vec<f64> = sweep.sizes.iter().map(|&k| k as f64).collect();
        let series = [
            svg::Series { label: "von Neumann".into(), xs: xs.clone(), ys: sweep.von_neumann.clone() },
            svg::Series { label: "Shannon".into(), xs, ys: sweep.shannon.clone() },
        ];
        let title = format!("{} selection, N={n}", sweep.method);
        std::fs::write(p, svg::line_plot(&series, &title, "active qubits", &format!("entropy ({})", units.name), false))?;
    }
    Ok(())
}

fn expect_cmd(a: &ExpectArgs) -> Result<()> {
    let (state, _) = read_state(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let obs = read_observable(&a.observable, state.num_qubits())?;
    let v = match &state {
        QubitState::Binary(s) => expectation(s, &obs)?,
        QubitState::General(g) => expectation_general(g, &obs)?,
    };
    println!("{:.15e} {:.15e}", v.re, v.im);
    Ok(())
}

fn rdm_cmd(a: &RdmArgs) -> Result<()> {
    let (state, meta) = load_binary(&a.input, a.cap)?;
    let n = state.num_qubits();
    let name = a.mapping.clone().or(meta.mapping).unwrap_or_else(|| "jw".into());
    let mapping = resolve_mapping(&name, n)?;
    let rdm = one_body_rdm(&state, &mapping)?;
    let (pairing, label) = match a.pairing {
        PairingArg::Paired => (SpinPairing::Paired, "paired"),
        PairingArg::SpinOrbital => (SpinPairing::SpinOrbital, "spin_orbital"),
    };
    let occ = noon(&rdm, pairing)?;
    let mut w = sink(a.out.as_deref())?;
    write_json(&mut w, &OneBodyRdmReport::new(&rdm, mapping.name(), occ, label))?;
    w.flush()?;
    Ok(())
}

fn bench_cmd(a: &BenchArgs) -> Result<()> {
    if a.family != "hydrogen-chain-synthetic" {
        bail!(usage(format!("unknown benchmark family {:?}; available: hydrogen-chain-synthetic", a.family)));
    }
    let cfg = BenchConfig {
        repetitions: a.reps,
        kept: a.kept,
        seed: a.seed,
        work_budget: a.budget,
        time_limit: a.time_limit.map(Duration::from_secs_f64),
        register: match a.register {
            RegisterArg::Hashed => RegisterKind::Hashed,
            RegisterArg::Ordered => RegisterKind::Ordered,
            RegisterArg::Ones => RegisterKind::OnesHashed,
        },
    };
    let methods: &[TraceMethod] = match a.method {
        BenchMethodArg::Direct => &[TraceMethod::Direct],
        BenchMethodArg::Quadratic => &[TraceMethod::Quadratic],
        BenchMethodArg::Both => &[TraceMethod::Direct, TraceMethod::Quadratic],
    };

    let mut records: Vec<BenchmarkRecord> = Vec::new();
    println!("{:<10} {:>4} {:>8} {:>14} {:>5}", "method", "N", "chi", "median_s", "reps");
    for &method in methods {
        for &n in &a.num_qubits {
            // once a χ times out, larger χ at the same N are skipped
            let mut exhausted = false;
            for &chi in &a.chi {
                let rec = if exhausted {
                    BenchmarkRecord {
                        method,
                        num_qubits: n,
                        chi,
                        kept: a.kept,
                        wall_time: f64::NAN,
                        repetitions: 0,
                        times: Vec::new(),
                        timed_out: true,
                    }
                } else {
                    run_benchmark(method, n, chi, &cfg)?
                };
                exhausted |= rec.timed_out;
                let shown = if rec.times.is_empty() { "timeout".to_string() } else { format!("{:.6e}", rec.wall_time) };
                let mark = if rec.timed_out { " *" } else { "" };
                println!("{:<10} {:>4} {:>8} {:>14} {:>5}{mark}", method.to_string(), n, chi, shown, rec.repetitions);
                records.push(rec);
            }
        }
    }

    let mut fits = Vec::new();
    for &method in methods {
        match scaling_report(&records, method) {
            Ok(rep) => {
                for (n, f) in &rep.chi_fits {
                    println!("fit {method} time ~ chi^{:.3} at N={n} (r2={:.4})", f.exponent, f.r_squared);
                    fits.push(json!({"method": method.to_string(), "variable": "chi", "fixed": n, "exponent": f.exponent, "log_prefactor": f.log_prefactor, "r_squared": f.r_squared}));
                }
                for (chi, f) in &rep.n_fits {
                    println!("fit {method} time ~ N^{:.3} at chi={chi} (r2={:.4})", f.exponent, f.r_squared);
                    fits.push(json!({"method": method.to_string(), "variable": "n", "fixed": chi, "exponent": f.exponent, "log_prefactor": f.log_prefactor, "r_squared": f.r_squared}));
                }
            }
            Err(e) => log::warn!("no fit for {method}: {e}"),
        }
    }

    if let Some(p) = &a.out {
        write_json_file(&json!({ "family": a.family, "records": records, "fits": fits }), p)?;
    }
    if let Some(p) = &a.csv {
        let mut w = sink(Some(p))?;
        writeln!(w, "method,num_qubits,chi,kept,median_seconds,repetitions,timed_out")?;
        for r in &records {
            writeln!(w, "{},{},{},{},{:e},{},{}", r.method, r.num_qubits, r.chi, r.kept, r.wall_time, r.repetitions, r.timed_out)?;
        }
        w.flush()?;
    }
    if let Some(p) = &a.plot {
        let mut series = Vec::new();
        for &method in methods {
            for &n in &a.num_qubits {
                let pts: Vec<&BenchmarkRecord> = records
                    .iter()
                    .filter(|r| r.method == method && r.num_qubits == n && !r.times.is_empty())
                    .collect();
                if !pts.is_empty() {
                    series.push(svg::Series {
                        label: format!("{method} N={n}"),
                        xs: pts.iter().map(|r| r.chi as f64).collect(),
                        ys: pts.iter().map(|r| r.wall_time).collect(),
                    });
                }
            }
        }
        std::fs::write(p, svg::line_plot(&series, "Partial trace wall time", "chi", "seconds", true))?;
    }

    let timeouts = records.iter().filter(|r| r.timed_out).count();
    if timeouts > 0 {
        bail!(BudgetExhausted(format!("{timeouts} configuration(s) hit the time limit or work budget")));
    }
    Ok(())
}

fn convert_mapping_cmd(a: &ConvertMappingArgs) -> Result<()> {
    let mapping = if Path::new(&a.source).is_file() {
        read_mapping(&a.source).with_context(|| format!("reading mapping {}", a.source))?
    } else {
        let n = a.modes.ok_or_else(|| usage("a built-in mapping needs --modes"))?;
        FermionMapping::by_name(&a.source, n).map_err(|_| usage(format!("{:?} is neither a known mapping nor a file", a.source)))?
    };
    match &a.out {
        Some(p) => write_mapping(&mapping, p)?,
        None => {
            let mut w = sink(None)?;
            write_mapping_to(&mut w, &mapping)?;
            w.flush()?;
        }
    }
    if a.distances {
        let d: Vec<String> = mapping.hamming_distances().iter().map(|x| x.to_string()).collect();
        eprintln!("hamming_distances={}", d.join(","));
    }
    Ok(())
}
