//! Dense reference implementations shared by the integration tests.
//!
//! Everything here works on full `2^N` vectors and matrices built from
//! explicit 2×2 blocks. Qubit `q` is bit `q` of a dense index, read from the
//! textual label (character `q`) so packed storage is never consulted.

#![allow(dead_code)]

use num_complex::Complex64 as C;
use qsparse::{BitString, GeneralState, SparseState};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub type Mat = Vec<Vec<C>>;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn index_of(label: &BitString) -> usize {
    label
        .to_string()
        .chars()
        .enumerate()
        .map(|(q, ch)| if ch == '1' { 1usize << q } else { 0 })
        .sum()
}

pub fn label_of(index: usize, n: usize) -> BitString {
    let s: String = (0..n).map(|q| if index >> q & 1 == 1 { '1' } else { '0' }).collect();
    s.parse().unwrap()
}

pub fn dense(state: &SparseState) -> Vec<C> {
    let mut v = vec![C::default(); 1 << state.num_qubits()];
    for (b, a) in state.iter() {
        v[index_of(b)] += a;
    }
    v
}

/// `Σ_j λ_j ⊗_m |ψ_{j,m}⟩` by repeated Kronecker products.
pub fn dense_general(state: &GeneralState) -> Vec<C> {
    let n = state.num_qubits();
    let mut out = vec![C::default(); 1 << n];
    for (lambda, factors) in state.terms() {
        let mut v = vec![lambda];
        for f in factors {
            // qubit m becomes the next-higher bit
            let mut w = vec![C::default(); v.len() * 2];
            for (i, x) in v.iter().enumerate() {
                w[i] = x * f.c0;
                w[i + v.len()] = x * f.c1;
            }
            v = w;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o += x;
        }
    }
    out
}

pub fn norm_sqr(v: &[C]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum()
}

/// Random state with `chi` distinct labels over `n` qubits.
pub fn random_state(r: &mut impl Rng, n: usize, chi: usize) -> SparseState {
    let chi = chi.min(1 << n).max(1);
    let mut idx: Vec<usize> = (0..1usize << n).collect();
    idx.shuffle(r);
    let terms = idx[..chi]
        .iter()
        .map(|&i| (label_of(i, n), c(r.gen::<f64>() - 0.5, r.gen::<f64>() - 0.5)));
    SparseState::from_terms(n, terms).unwrap().normalize().unwrap()
}

pub fn random_subset(r: &mut impl Rng, n: usize, k: usize) -> Vec<usize> {
    let mut q: Vec<usize> = (0..n).collect();
    q.shuffle(r);
    let mut s = q[..k].to_vec();
    s.sort_unstable();
    s
}

/// `ρ_A(a, a') = Σ_ā ψ(a⊗ā) ψ*(a'⊗ā)` over the full `2^{|A|}` space.
/// Bit `k` of `a` is qubit `keep[k]`.
pub fn partial_trace(psi: &[C], n: usize, keep: &[usize]) -> Mat {
    let k = keep.len();
    let outer: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let compose = |a: usize, abar: usize| -> usize {
        let mut i = 0;
        for (t, &q) in keep.iter().enumerate() {
            i |= (a >> t & 1) << q;
        }
        for (t, &q) in outer.iter().enumerate() {
            i |= (abar >> t & 1) << q;
        }
        i
    };
    let mut rho = vec![vec![C::default(); 1 << k]; 1 << k];
    for a in 0..1usize << k {
        for ap in 0..1usize << k {
            let mut s = C::default();
            for abar in 0..1usize << outer.len() {
                s += psi[compose(a, abar)] * psi[compose(ap, abar)].conj();
            }
            rho[a][ap] = s;
        }
    }
    rho
}

/// Partial trace of a dense density matrix over `keep` positions (indices into
/// the matrix's own qubits).
pub fn partial_trace_mixed(rho: &Mat, k: usize, keep: &[usize]) -> Mat {
    let outer: Vec<usize> = (0..k).filter(|q| !keep.contains(q)).collect();
    let compose = |a: usize, abar: usize| -> usize {
        let mut i = 0;
        for (t, &q) in keep.iter().enumerate() {
            i |= (a >> t & 1) << q;
        }
        for (t, &q) in outer.iter().enumerate() {
            i |= (abar >> t & 1) << q;
        }
        i
    };
    let d = 1usize << keep.len();
    let mut out = vec![vec![C::default(); d]; d];
    for a in 0..d {
        for ap in 0..d {
            for abar in 0..1usize << outer.len() {
                out[a][ap] += rho[compose(a, abar)][compose(ap, abar)];
            }
        }
    }
    out
}

/// Dense index (within the kept space) of a library basis label.
pub fn kept_index(label: &BitString) -> usize {
    index_of(label)
}

/// Largest elementwise deviation between a library density matrix and a dense
/// one; entries outside the library's effective basis must vanish.
pub fn rdm_deviation(rho: &qsparse::ReducedDensityMatrix, dense_rho: &Mat) -> f64 {
    let d = dense_rho.len();
    let mut got = vec![vec![C::default(); d]; d];
    for (i, a) in rho.basis.iter().enumerate() {
        for (j, b) in rho.basis.iter().enumerate() {
            got[kept_index(a)][kept_index(b)] = rho.matrix[(i, j)];
        }
    }
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            worst = worst.max((got[i][j] - dense_rho[i][j]).norm());
        }
    }
    worst
}

// ---------------------------------------------------------------- matrices

pub fn identity(d: usize) -> Mat {
    (0..d).map(|i| (0..d).map(|j| if i == j { c(1.0, 0.0) } else { C::default() }).collect()).collect()
}

pub fn zeros(d: usize) -> Mat {
    vec![vec![C::default(); d]; d]
}

pub fn pauli(ch: char) -> Mat {
    let (o, z, i) = (c(1.0, 0.0), C::default(), c(0.0, 1.0));
    match ch {
        'I' => vec![vec![o, z], vec![z, o]],
        'X' => vec![vec![z, o], vec![o, z]],
        'Y' => vec![vec![z, -i], vec![i, z]],
        'Z' => vec![vec![o, z], vec![z, -o]],
        _ => panic!("bad letter {ch}"),
    }
}

/// `|1⟩⟨0|`
pub fn raising() -> Mat {
    vec![vec![C::default(), C::default()], vec![c(1.0, 0.0), C::default()]]
}

/// `a ⊗ b` with `a` on the higher bits.
pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (p, q) = (a.len(), b.len());
    let mut out = zeros(p * q);
    for i in 0..p {
        for j in 0..p {
            for k in 0..q {
                for l in 0..q {
                    out[i * q + k][j * q + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// Operator acting with `ops[q]` on qubit `q`.
pub fn tensor(ops: &[Mat]) -> Mat {
    let mut m = vec![vec![c(1.0, 0.0)]];
    for op in ops {
        m = kron(op, &m);
    }
    m
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let d = a.len();
    let mut out = zeros(d);
    for i in 0..d {
        for k in 0..d {
            if a[i][k] == C::default() {
                continue;
            }
            for j in 0..d {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn matadd(a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(u, v)| u + v).collect()).collect()
}

pub fn scale(a: &Mat, s: C) -> Mat {
    a.iter().map(|r| r.iter().map(|x| x * s).collect()).collect()
}

pub fn dagger(a: &Mat) -> Mat {
    let d = a.len();
    (0..d).map(|i| (0..d).map(|j| a[j][i].conj()).collect()).collect()
}

pub fn apply(a: &Mat, v: &[C]) -> Vec<C> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn inner(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Dense matrix of a Pauli string given letter by letter (qubit 0 first).
pub fn pauli_string(phase: C, letters: &str) -> Mat {
    let ops: Vec<Mat> = letters.chars().map(pauli).collect();
    scale(&tensor(&ops), phase)
}

pub fn majorana(m: &qsparse::MajoranaString) -> Mat {
    let letters: String = m.letters.iter().map(|l| l.as_char()).collect();
    pauli_string(m.phase.to_complex(), &letters)
}

/// Jordan-Wigner `a†_j`: `Z` on every lower qubit, `|1⟩⟨0|` on qubit `j`.
pub fn jw_creation(j: usize, n: usize) -> Mat {
    let ops: Vec<Mat> = (0..n)
        .map(|m| match m.cmp(&j) {
            std::cmp::Ordering::Less => pauli('Z'),
            std::cmp::Ordering::Equal => raising(),
            std::cmp::Ordering::Greater => pauli('I'),
        })
        .collect();
    tensor(&ops)
}

/// `a†_j = (γ_{2j} − iγ_{2j+1}) / 2` from a mapping's Majorana strings.
pub fn mapped_creation(mapping: &qsparse::FermionMapping, j: usize) -> Mat {
    let (g1, g2) = mapping.majorana_pair(j).unwrap();
    scale(&matadd(&majorana(g1), &scale(&majorana(g2), c(0.0, -1.0))), c(0.5, 0.0))
}

/// `Σ c_i a†_{l1} a†_{l2} … |0⟩` with ascending `l` and the last factor applied
/// first.
pub fn fock_vector(wf: &qsparse::FockWavefunction, creation: &dyn Fn(usize) -> Mat) -> Vec<C> {
    let n = wf.num_modes();
    let mut out = vec![C::default(); 1 << n];
    for (occ, coeff) in wf.terms() {
        let mut v = vec![C::default(); 1 << n];
        v[0] = *coeff;
        let modes: Vec<usize> = occ.to_string().chars().enumerate().filter(|(_, ch)| *ch == '1').map(|(q, _)| q).collect();
        for &l in modes.iter().rev() {
            v = apply(&creation(l), &v);
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o += x;
        }
    }
    out
}

/// CNOT with the given control and target as a permutation matrix.
pub fn cnot(control: usize, target: usize, n: usize) -> Mat {
    let d = 1usize << n;
    let mut m = zeros(d);
    for i in 0..d {
        let j = if i >> control & 1 == 1 { i ^ (1 << target) } else { i };
        m[j][i] = c(1.0, 0.0);
    }
    m
}

pub fn observable_matrix(obs: &qsparse::ObservableSum) -> Mat {
    let n = obs.num_qubits();
    let mut m = zeros(1 << n);
    for t in obs.terms() {
        m = matadd(&m, &pauli_string(t.coefficient, &t.dense_string(n)));
    }
    m
}

/// Equal up to one global phase.
pub fn phase_equal(a: &[C], b: &[C], tol: f64) -> bool {
    let ov = inner(a, b);
    if ov.norm() < 1e-300 {
        return norm_sqr(a) < tol && norm_sqr(b) < tol;
    }
    let ph = ov / ov.norm();
    a.iter().zip(b).all(|(x, y)| (x * ph - y).norm() <= tol)
}

// ---------------------------------------------------------------- spectra

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations on its real
/// symmetric embedding `[[Re, −Im], [Im, Re]]`; each value appears twice there
/// and is returned once, ascending.
pub fn hermitian_spectrum(m: &Mat) -> Vec<f64> {
    let d = m.len();
    let n = 2 * d;
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..d {
        for j in 0..d {
            let z = (m[i][j] + m[j][i].conj()) * 0.5;
            a[i][j] = z.re;
            a[i + d][j + d] = z.re;
            a[i][j + d] = -z.im;
            a[i + d][j] = z.im;
        }
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = cs * akp - sn * akq;
                    a[k][q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = cs * apk - sn * aqk;
                    a[q][k] = sn * apk + cs * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

pub fn entropy(m: &Mat) -> f64 {
    hermitian_spectrum(m).into_iter().filter(|&l| l > 1e-12).map(|l| -l * l.ln()).sum()
}

pub fn shannon(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum()
}

/// Marginal distribution of `|ψ|²` on `keep`.
pub fn marginal(psi: &[C], n: usize, keep: &[usize]) -> Vec<f64> {
    let mut p = vec![0.0; 1 << keep.len()];
    for i in 0..1usize << n {
        let a: usize = keep.iter().enumerate().map(|(t, &q)| (i >> q & 1) << t).sum();
        p[a] += psi[i].norm_sqr();
    }
    p
}

pub fn mutual_information(psi: &[C], n: usize, i: usize, j: usize) -> f64 {
    entropy(&partial_trace(psi, n, &[i])) + entropy(&partial_trace(psi, n, &[j]))
        - entropy(&partial_trace(psi, n, &[i.min(j), i.max(j)]))
}
