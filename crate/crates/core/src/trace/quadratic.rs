//! Partial trace of a general product-sum state by explicit pair overlaps.
//!
//! For `|ψ⟩ = Σ_j λ_j ⊗_m |ψ_{j,m}⟩`,
//!
//! ```text
//! ρ_A = Σ_{j,j'} λ_j λ*_{j'} Π_{m∉A} ⟨ψ_{j',m}|ψ_{j,m}⟩ · ⊗_A |ψ_{j,m}⟩⟨ψ_{j',m}|
//! ```
//!
//! Every pair `j ≤ j'` is visited, so the cost is `O(χ² · N)` whatever the
//! sparsity of the factors. Only the upper triangle is evaluated.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustc_hash::FxHashMap;

use super::{QubitSubset, ReducedDensityMatrix};
use crate::bitstate::{BitString, GeneralState, SingleQubitKet, NORMALIZED_TOLERANCE};
use crate::error::{Error, Result};

/// Default limit on `χ(χ+1)/2 · N` pair-factor operations.
pub const DEFAULT_WORK_BUDGET: f64 = 1e11;

/// Largest kept set whose local kets are expanded into binary labels.
pub const MAX_KEPT_QUBITS: usize = 20;

/// `ρ_A` of a general state, refusing inputs whose pair work exceeds `budget`.
pub fn quadratic_trace(
    state: &GeneralState,
    keep: &QubitSubset,
    budget: f64,
) -> Result<ReducedDensityMatrix> {
    let n = state.num_qubits();
    if keep.num_qubits() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: keep.num_qubits(),
        });
    }
    if keep.is_empty() {
        return Err(Error::InvalidSubset(
            "empty kept set; the full trace is the squared norm".into(),
        ));
    }
    if keep.len() > MAX_KEPT_QUBITS {
        return Err(Error::InvalidSubset(format!(
            "{} kept qubits; at most {MAX_KEPT_QUBITS} supported",
            keep.len()
        )));
    }
    let chi = state.len() as f64;
    let required = chi * (chi + 1.0) / 2.0 * n.max(1) as f64;
    if required > budget {
        return Err(Error::WorkBudgetExceeded { required, budget });
    }
    if state.is_empty() {
        return Err(Error::EmptyState);
    }

    let traced_qubits = keep.complement();
    let traced_idx = traced_qubits.indices();
    let nt = traced_idx.len();

    // traced factors as [re0, im0, re1, im1] per qubit, one contiguous row per term
    let mut traced: Vec<f64> = Vec::with_capacity(state.len() * nt * 4);
    let mut local: Vec<Vec<(usize, Complex64)>> = Vec::with_capacity(state.len());
    let mut index: FxHashMap<BitString, usize> = FxHashMap::default();
    let mut labels: Vec<BitString> = Vec::new();

    for (lambda, factors) in state.terms() {
        for &q in traced_idx {
            let f = factors[q];
            traced.extend_from_slice(&[f.c0.re, f.c0.im, f.c1.re, f.c1.im]);
        }
        let kept: Vec<SingleQubitKet> = keep.indices().iter().map(|&q| factors[q]).collect();
        let mut entries = Vec::new();
        for (label, amp) in expand_local(&kept) {
            let next = labels.len();
            let i = *index.entry(label.clone()).or_insert_with(|| {
                labels.push(label);
                next
            });
            entries.push((i, lambda * amp));
        }
        local.push(entries);
    }

    let chi = state.len();
    let dim = labels.len();
    let stride = nt * 4;
    let mut acc = DMatrix::<Complex64>::zeros(dim, dim);
    let mut add = |j: usize, jp: usize, o: Complex64| {
        for &(a, ka) in &local[j] {
            for &(b, kb) in &local[jp] {
                let w = ka * kb.conj() * o;
                acc[(a, b)] += w;
                if jp != j {
                    acc[(b, a)] += w.conj();
                }
            }
        }
    };
    // Kets come in blocks of LANES that stay cache-resident while every later
    // bra row streams past once; the LANES multiply chains are independent.
    let mut block = vec![[[0.0f64; LANES]; 4]; stride / 4];
    for j0 in (0..chi).step_by(LANES) {
        let width = LANES.min(chi - j0);
        let kets = &traced[j0 * stride..(j0 + width) * stride];
        if width == LANES {
            transpose_block(kets, stride, &mut block);
        }
        for jp in j0..chi {
            let bra = &traced[jp * stride..(jp + 1) * stride];
            if width == LANES {
                let o = overlap_lanes(bra, &block);
                for (l, &ol) in o.iter().enumerate() {
                    if j0 + l <= jp {
                        add(j0 + l, jp, ol);
                    }
                }
            } else {
                for l in 0..width.min(jp - j0 + 1) {
                    add(j0 + l, jp, overlap(bra, &kets[l * stride..(l + 1) * stride]));
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&x, &y| labels[x].cmp(&labels[y]));
    let matrix = DMatrix::from_fn(dim, dim, |r, c| acc[(order[r], order[c])]);
    let basis: Vec<BitString> = order.iter().map(|&i| labels[i].clone()).collect();
    let trace: f64 = matrix.diagonal().iter().map(|z| z.re).sum();
    Ok(ReducedDensityMatrix {
        basis,
        matrix,
        keep: keep.clone(),
        input_normalized: (trace - 1.0).abs() <= NORMALIZED_TOLERANCE.max(1e-10),
    })
}

/// Kets per cache block, each with its own overlap chain.
const LANES: usize = 8;

/// `Π_m ⟨bra_m|ket_m⟩` over packed rows. No early exit on zero so the cost
/// stays fixed per pair.
#[inline]
fn overlap(bra: &[f64], ket: &[f64]) -> Complex64 {
    let mut re = 1.0;
    let mut im = 0.0;
    for (b, k) in bra.chunks_exact(4).zip(ket.chunks_exact(4)) {
        // conj(b0)·k0 + conj(b1)·k1
        let s_re = b[0] * k[0] + b[1] * k[1] + b[2] * k[2] + b[3] * k[3];
        let s_im = b[0] * k[1] - b[1] * k[0] + b[2] * k[3] - b[3] * k[2];
        let t = re * s_re - im * s_im;
        im = re * s_im + im * s_re;
        re = t;
    }
    Complex64::new(re, im)
}

/// Regroups `LANES` ket rows as `block[m][c][l]` so the lane loop is
/// contiguous.
fn transpose_block(kets: &[f64], stride: usize, block: &mut [[[f64; LANES]; 4]]) {
    for (m, slot) in block.iter_mut().enumerate() {
        for (c, lanes) in slot.iter_mut().enumerate() {
            for (l, v) in lanes.iter_mut().enumerate() {
                *v = kets[l * stride + 4 * m + c];
            }
        }
    }
}

/// [`overlap`] of one bra against a transposed block of ket rows.
#[inline]
fn overlap_lanes(bra: &[f64], block: &[[[f64; LANES]; 4]]) -> [Complex64; LANES] {
    let mut re = [1.0f64; LANES];
    let mut im = [0.0f64; LANES];
    for (b, k) in bra.chunks_exact(4).zip(block) {
        let (b0, b1, b2, b3) = (b[0], b[1], b[2], b[3]);
        for l in 0..LANES {
            let s_re = b0 * k[0][l] + b1 * k[1][l] + b2 * k[2][l] + b3 * k[3][l];
            let s_im = b0 * k[1][l] - b1 * k[0][l] + b2 * k[3][l] - b3 * k[2][l];
            let t = re[l] * s_re - im[l] * s_im;
            im[l] = re[l] * s_im + im[l] * s_re;
            re[l] = t;
        }
    }
    std::array::from_fn(|l| Complex64::new(re[l], im[l]))
}

/// Binary expansion of a kept-space product ket.
fn expand_local(kets: &[SingleQubitKet]) -> Vec<(BitString, Complex64)> {
    let mut out = vec![(BitString::zeros(kets.len()), Complex64::new(1.0, 0.0))];
    for (q, k) in kets.iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * 2);
        for (bits, amp) in out {
            if k.c0 != Complex64::default() {
                next.push((bits.clone(), amp * k.c0));
            }
            if k.c1 != Complex64::default() {
                let mut b = bits;
                b.set(q, true);
                next.push((b, amp * k.c1));
            }
        }
        out = next;
    }
    out
}
