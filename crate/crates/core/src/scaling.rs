//! Synthetic workloads and timing harness for the partial-trace kernels.
//!
//! States mimic the support of a CISD-like expansion: `n = N/4` electrons,
//! the Hartree-Fock determinant on the first `n` modes, and excitations of
//! rank 1-4 drawn with weights 1:4:2:1 (doubles dominate).

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::bitstate::{BitString, GeneralState, SparseState};
use crate::error::{Error, Result};
use crate::trace::{direct_trace_with, quadratic_trace, QubitSubset, RegisterKind};

const RANK_WEIGHTS: [u32; 4] = [1, 4, 2, 1];

/// Random fixed-weight state over `num_qubits` qubits with `chi` distinct labels.
pub fn synthetic_state(num_qubits: usize, chi: usize, seed: u64) -> Result<SparseState> {
    let n_occ = (num_qubits / 4).max(1);
    if num_qubits < 2 || n_occ >= num_qubits {
        return Err(Error::InvalidArgument(format!("{num_qubits} qubits is too small")));
    }
    let n_virt = num_qubits - n_occ;
    let max_rank = RANK_WEIGHTS.len().min(n_occ).min(n_virt);
    let capacity = (1..=max_rank).map(|r| binom(n_occ, r) * binom(n_virt, r)).sum::<f64>() + 1.0;
    if (chi as f64) > capacity {
        return Err(Error::InvalidArgument(format!(
            "{chi} distinct determinants requested, only {capacity} exist"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ranks = WeightedIndex::new(&RANK_WEIGHTS[..max_rank]).expect("positive weights");
    let reference = BitString::from_indices(num_qubits, &(0..n_occ).collect::<Vec<_>>())?;
    let mut seen: FxHashSet<BitString> = FxHashSet::default();
    let mut labels = Vec::with_capacity(chi);
    seen.insert(reference.clone());
    labels.push(reference);
    let occupied: Vec<usize> = (0..n_occ).collect();
    let virtuals: Vec<usize> = (n_occ..num_qubits).collect();
    while labels.len() < chi {
        let r = ranks.sample(&mut rng) + 1;
        let mut b = labels[0].clone();
        for &q in occupied.choose_multiple(&mut rng, r) {
            b.set(q, false);
        }
        for &q in virtuals.choose_multiple(&mut rng, r) {
            b.set(q, true);
        }
        if seen.insert(b.clone()) {
            labels.push(b);
        }
    }

    let mut state = SparseState::with_capacity(num_qubits, chi);
    for (i, b) in labels.into_iter().enumerate() {
        let scale = if i == 0 { 10.0 } else { 1.0 };
        let amp = Complex64::new(scale * (rng.gen::<f64>() - 0.5), 0.0);
        state.add(b, if amp.re == 0.0 { Complex64::new(1e-3, 0.0) } else { amp })?;
    }
    state.normalize()
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceMethod {
    Direct,
    Quadratic,
}

impl fmt::Display for TraceMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraceMethod::Direct => "direct",
            TraceMethod::Quadratic => "quadratic",
        })
    }
}

impl FromStr for TraceMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(TraceMethod::Direct),
            "quadratic" => Ok(TraceMethod::Quadratic),
            other => Err(Error::InvalidArgument(format!("unknown trace method {other:?}"))),
        }
    }
}

/// One timed configuration. `wall_time` is the median over `times`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRecord {
    pub method: TraceMethod,
    pub num_qubits: usize,
    pub chi: usize,
    pub kept: usize,
    pub wall_time: f64,
    pub repetitions: usize,
    pub times: Vec<f64>,
    pub timed_out: bool,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub repetitions: usize,
    pub kept: usize,
    pub seed: u64,
    /// Pair-operation budget handed to the quadratic method.
    pub work_budget: f64,
    /// Further repetitions are skipped once one run exceeds this.
    pub time_limit: Option<Duration>,
    /// Register used by the direct method.
    pub register: RegisterKind,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            repetitions: 3,
            kept: 1,
            seed: 7,
            work_budget: crate::trace::DEFAULT_WORK_BUDGET,
            time_limit: None,
            register: RegisterKind::Hashed,
        }
    }
}

/// Times one method on a fresh synthetic state. State construction is not timed.
pub fn run_benchmark(method: TraceMethod, num_qubits: usize, chi: usize, cfg: &BenchConfig) -> Result<BenchmarkRecord> {
    if cfg.repetitions < 3 {
        return Err(Error::InvalidArgument("at least 3 repetitions are required".into()));
    }
    let state = synthetic_state(num_qubits, chi, cfg.seed ^ (num_qubits as u64) << 32 ^ chi as u64)?;
    let keep = QubitSubset::new(num_qubits, 0..cfg.kept.min(num_qubits))?;
    let general = (method == TraceMethod::Quadratic).then(|| GeneralState::from_sparse(&state));

    let mut times = Vec::with_capacity(cfg.repetitions);
    let mut timed_out = false;
    for _ in 0..cfg.repetitions {
        let t0 = Instant::now();
        let outcome = match &general {
            None => direct_trace_with(&state, &keep, cfg.register).map(|r| r.dim()),
            Some(g) => quadratic_trace(g, &keep, cfg.work_budget).map(|r| r.dim()),
        };
        let dt = t0.elapsed();
        match outcome {
            Ok(dim) => {
                std::hint::black_box(dim);
            }
            Err(e) if e.is_budget() => {
                timed_out = true;
                break;
            }
            Err(e) => return Err(e),
        }
        times.push(dt.as_secs_f64().max(1e-9));
        if cfg.time_limit.is_some_and(|lim| dt > lim) {
            timed_out = true;
            break;
        }
    }
    Ok(BenchmarkRecord {
        method,
        num_qubits,
        chi,
        kept: keep.len(),
        wall_time: median(&times),
        repetitions: times.len(),
        times,
        timed_out,
    })
}

pub fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// `y ≈ C · x^exponent` fitted by least squares on logs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub log_prefactor: f64,
    pub r_squared: f64,
}

pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<PowerLawFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidArgument("a fit needs at least two paired points".into()));
    }
    if xs.iter().chain(ys).any(|v| v.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) || !v.is_finite()) {
        return Err(Error::InvalidArgument("power-law fit needs positive finite data".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all x values are equal".into()));
    }
    let exponent = sxy / sxx;
    let log_prefactor = my - exponent * mx;
    let ss_res: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - log_prefactor - exponent * x).powi(2)).sum();
    let ss_tot: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    Ok(PowerLawFit {
        exponent,
        log_prefactor,
        r_squared: if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot },
    })
}

/// Exponents in χ (per `N`) and in `N` (per χ) for one method.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub method: TraceMethod,
    /// `(N, fit over χ)`
    pub chi_fits: Vec<(usize, PowerLawFit)>,
    /// `(χ, fit over N)`
    pub n_fits: Vec<(usize, PowerLawFit)>,
}

/// Fits every complete, non-timed-out series in `records` for `method`.
pub fn scaling_report(records: &[BenchmarkRecord], method: TraceMethod) -> Result<ScalingReport> {
    let rows: Vec<&BenchmarkRecord> = records.iter().filter(|r| r.method == method && !r.timed_out).collect();
    let mut ns: Vec<usize> = rows.iter().map(|r| r.num_qubits).collect();
    ns.sort_unstable();
    ns.dedup();
    let mut chis: Vec<usize> = rows.iter().map(|r| r.chi).collect();
    chis.sort_unstable();
    chis.dedup();
    let series = |pick: &dyn Fn(&BenchmarkRecord) -> bool, x: &dyn Fn(&BenchmarkRecord) -> usize| -> Option<Result<PowerLawFit>> {
        let pts: Vec<(f64, f64)> = rows.iter().filter(|r| pick(r)).map(|r| (x(r) as f64, r.wall_time)).collect();
        (pts.len() >= 2).then(|| {
            let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
            fit_power_law(&xs, &ys)
        })
    };
    let mut chi_fits = Vec::new();
    for &n in &ns {
        if let Some(f) = series(&|r| r.num_qubits == n, &|r| r.chi) {
            chi_fits.push((n, f?));
        }
    }
    let mut n_fits = Vec::new();
    for &c in &chis {
        if let Some(f) = series(&|r| r.chi == c, &|r| r.num_qubits) {
            n_fits.push((c, f?));
        }
    }
    Ok(ScalingReport {
        method,
        chi_fits,
        n_fits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_states_are_fixed_weight_and_seeded() {
        let a = synthetic_state(40, 500, 3).unwrap();
        let b = synthetic_state(40, 500, 3).unwrap();
        assert_eq!(a.len(), 500);
        assert!(a.iter().all(|(bits, _)| bits.count_ones() == 10));
        assert!(a.is_normalized());
        assert_eq!(a.sorted_terms(), b.sorted_terms());
        assert!(synthetic_state(8, 10_000, 1).is_err());
    }

    #[test]
    fn fit_recovers_exponent() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(1.5)).collect();
        let f = fit_power_law(&xs, &ys).unwrap();
        assert!((f.exponent - 1.5).abs() < 1e-12);
        assert!((f.log_prefactor - 3f64.ln()).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
    }

    #[test]
    fn benchmark_records_repetitions() {
        let cfg = BenchConfig::default();
        let r = run_benchmark(TraceMethod::Direct, 16, 200, &cfg).unwrap();
        assert_eq!(r.repetitions, 3);
        assert!(r.wall_time > 0.0 && !r.timed_out);
        let tight = BenchConfig {
            work_budget: 10.0,
            ..BenchConfig::default()
        };
        assert!(run_benchmark(TraceMethod::Quadratic, 16, 200, &tight).unwrap().timed_out);
    }
}
