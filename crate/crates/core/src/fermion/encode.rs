use num_complex::Complex64;

use super::mapping::{FermionMapping, MappingKind};
use super::wavefunction::{FockWavefunction, Vacuum};
use crate::bitstate::{BitString, GeneralState, SingleQubitKet, SparseState};
use crate::error::{Error, Result};

/// Operator-count statistics gathered while encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EncodeStats {
    /// Creation operators applied for the most expensive determinant.
    pub max_operator_applications: usize,
    /// Creation operators applied in total.
    pub total_operator_applications: usize,
}

/// Encodes under Jordan-Wigner, one basis ket per determinant.
pub fn jw_encode(wf: &FockWavefunction) -> Result<SparseState> {
    jw_encode_counted(wf).map(|(state, _)| state)
}

/// [`jw_encode`] that also reports how many operators were applied.
///
/// Each determinant is built by applying its creation operators to `|0…0⟩`,
/// highest mode first. Under Jordan-Wigner `a†_l` sets qubit `l` and picks up
/// `(-1)` for every occupied qubit below `l`.
pub fn jw_encode_counted(wf: &FockWavefunction) -> Result<(SparseState, EncodeStats)> {
    let n = wf.num_modes();
    let mut state = SparseState::with_capacity(n, wf.len());
    let mut stats = EncodeStats::default();
    let modes: &mut Vec<usize> = &mut Vec::new();
    for (occ, c) in wf.terms() {
        if occ.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: occ.len(),
            });
        }
        modes.clear();
        modes.extend(occ.ones());
        let mut bits = BitString::zeros(n);
        let mut negative = false;
        for &l in modes.iter().rev() {
            negative ^= bits.count_ones_below(l) % 2 == 1;
            bits.set(l, true);
        }
        stats.max_operator_applications = stats.max_operator_applications.max(modes.len());
        stats.total_operator_applications += modes.len();
        let amp = if negative { -*c } else { *c };
        if state.insert_unique(bits, amp).is_some() {
            return Err(Error::DuplicateDeterminant(occ.to_string()));
        }
    }
    Ok((state, stats))
}

/// Encoding cost `C_K = 2^P` with `P` the largest number of occupied modes
/// whose Majorana pair differs on more than one qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EncodingCost {
    pub exponent: u32,
}

impl EncodingCost {
    /// `2^exponent`, or `None` when it does not fit in a `u64`.
    pub fn value(&self) -> Option<u64> {
        1u64.checked_shl(self.exponent)
    }
}

impl std::fmt::Display for EncodingCost {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "2^{}", self.exponent),
        }
    }
}

/// Fan-out exponent `P_i` of one determinant.
pub fn split_count(occupation: &BitString, distances: &[usize]) -> u32 {
    occupation.ones().filter(|&l| distances[l] > 1).count() as u32
}

pub fn encoding_cost(wf: &FockWavefunction, mapping: &FermionMapping) -> Result<EncodingCost> {
    check_modes(wf, mapping)?;
    let distances = mapping.hamming_distances();
    let exponent = wf
        .terms()
        .iter()
        .map(|(occ, _)| split_count(occ, &distances))
        .max()
        .unwrap_or(0);
    Ok(EncodingCost { exponent })
}

fn check_modes(wf: &FockWavefunction, mapping: &FermionMapping) -> Result<()> {
    if wf.num_modes() != mapping.num_modes() {
        return Err(Error::LengthMismatch {
            expected: mapping.num_modes(),
            found: wf.num_modes(),
        });
    }
    Ok(())
}

/// Encodes under an arbitrary mapping as a sum of product states.
///
/// Every creation operator whose Majorana pair differs on one qubit contracts
/// into a single product; the others split into two, so determinant `i`
/// contributes `2^{P_i}` product terms. Fails when `C_K` exceeds `cap`.
pub fn general_encode(
    wf: &FockWavefunction,
    mapping: &FermionMapping,
    cap: u64,
) -> Result<GeneralState> {
    let cost = encoding_cost(wf, mapping)?;
    match cost.value() {
        Some(v) if v <= cap => {}
        _ => {
            return Err(Error::EncodingCostOverflow {
                exponent: cost.exponent,
                cap,
            })
        }
    }
    let n = mapping.num_modes();
    let creation: Vec<_> = (0..n).map(|j| mapping.creation_operator(j)).collect();
    let mut out = GeneralState::new(n);
    let mut frontier: Vec<(Complex64, Vec<SingleQubitKet>)> = Vec::new();
    let mut next: Vec<(Complex64, Vec<SingleQubitKet>)> = Vec::new();
    let modes: &mut Vec<usize> = &mut Vec::new();
    for (occ, c) in wf.terms() {
        frontier.clear();
        frontier.push((*c, vec![SingleQubitKet::ZERO; n]));
        modes.clear();
        modes.extend(occ.ones());
        for &l in modes.iter().rev() {
            next.clear();
            let products = &creation[l].products;
            for (coeff, kets) in frontier.drain(..) {
                let mut owned = Some(kets);
                for (k, (pc, ops)) in products.iter().enumerate() {
                    let mut kets = if k + 1 == products.len() {
                        owned.take().expect("last product")
                    } else {
                        owned.as_ref().expect("kets").clone()
                    };
                    for (m, op) in ops {
                        kets[*m] = op.apply(&kets[*m]);
                    }
                    next.push((coeff * pc, kets));
                }
            }
            std::mem::swap(&mut frontier, &mut next);
        }
        for (coeff, kets) in frontier.drain(..) {
            out.push(coeff, &kets)?;
        }
    }
    Ok(out)
}

/// Ordered list of `(control, target)` CNOTs; the first pair acts first.
pub type CnotChain = Vec<(usize, usize)>;

/// Applies a CNOT chain to every basis label. Amplitudes are untouched.
pub fn apply_cnot_chain(state: &SparseState, chain: &[(usize, usize)]) -> Result<SparseState> {
    let n = state.num_qubits();
    for &(c, t) in chain {
        for q in [c, t] {
            if q >= n {
                return Err(Error::IndexOutOfRange { index: q, len: n });
            }
        }
        if c == t {
            return Err(Error::InvalidArgument(format!(
                "CNOT control and target coincide at qubit {c}"
            )));
        }
    }
    let mut out = SparseState::with_capacity(n, state.len());
    out.set_norm_tolerance(state.norm_tolerance());
    for (bits, amp) in state.iter() {
        let mut b = bits.clone();
        for &(c, t) in chain {
            if b.get(c) {
                b.flip(t);
            }
        }
        out.insert_unique(b, amp);
    }
    Ok(out)
}

/// `CNOT(0→1), CNOT(1→2), …, CNOT(N-2→N-1)` in application order.
pub fn ascending_chain(num_qubits: usize) -> CnotChain {
    (1..num_qubits).map(|t| (t - 1, t)).collect()
}

/// The chain undoing `chain`.
pub fn inverse_chain(chain: &[(usize, usize)]) -> CnotChain {
    chain.iter().rev().copied().collect()
}

/// Converts a Jordan-Wigner encoded state to the parity encoding.
pub fn jw_to_parity(state: &SparseState) -> Result<SparseState> {
    apply_cnot_chain(state, &ascending_chain(state.num_qubits()))
}

pub fn parity_to_jw(state: &SparseState) -> Result<SparseState> {
    apply_cnot_chain(state, &inverse_chain(&ascending_chain(state.num_qubits())))
}

/// Sign relating a determinant to its particle-hole string `holes_particles`.
///
/// With `c†_m = a_m` on reference modes and `a†_m` elsewhere,
/// `∏_{m ∈ d, ascending} c†_m |ref⟩ = sign · |ref ⊕ d⟩`. Applying the operators
/// highest mode first leaves everything below `m` as in the reference, so each
/// one contributes `(-1)^{|ref ∩ [0, m)|}`.
pub fn particle_hole_sign(holes_particles: &BitString, reference: &BitString) -> f64 {
    let odd = holes_particles
        .ones()
        .map(|m| reference.count_ones_below(m))
        .sum::<usize>()
        % 2
        == 1;
    if odd {
        -1.0
    } else {
        1.0
    }
}

/// Re-expresses a wavefunction relative to `reference` as the new vacuum, or
/// back again when `wf` is already in particle-hole form for this reference.
///
/// Occupations become `occupation ⊕ reference`; the reference determinant maps
/// to the all-zeros string and a `k`-fold excitation to a string with `2k` ones.
pub fn particle_hole(wf: &FockWavefunction, reference: &BitString) -> Result<FockWavefunction> {
    if reference.len() != wf.num_modes() {
        return Err(Error::LengthMismatch {
            expected: wf.num_modes(),
            found: reference.len(),
        });
    }
    let (to_ph, new_vacuum) = match wf.vacuum() {
        Vacuum::Empty => {
            if reference.count_ones() != wf.num_electrons() {
                return Err(Error::InvalidArgument(format!(
                    "reference has {} electrons, wavefunction has {}",
                    reference.count_ones(),
                    wf.num_electrons()
                )));
            }
            (true, Vacuum::Reference(reference.clone()))
        }
        Vacuum::Reference(r) if r == reference => (false, Vacuum::Empty),
        Vacuum::Reference(r) => {
            return Err(Error::InvalidArgument(format!(
                "wavefunction is in particle-hole form for reference {r}, not {reference}"
            )))
        }
    };
    let mut terms = Vec::with_capacity(wf.len());
    for (occ, c) in wf.terms() {
        let flipped = occ.xor(reference)?;
        let ph = if to_ph { &flipped } else { occ };
        let sign = particle_hole_sign(ph, reference);
        terms.push((flipped, *c * sign));
    }
    let mut out = FockWavefunction::with_vacuum(
        wf.num_modes(),
        wf.num_electrons(),
        terms,
        new_vacuum,
        true,
    )?;
    out.ordering = wf.ordering;
    Ok(out)
}

/// Encodes with the Jordan-Wigner fast path when possible, otherwise through
/// the general product-state expansion capped at `cap` terms.
pub fn encode(wf: &FockWavefunction, mapping: &FermionMapping, cap: u64) -> Result<SparseState> {
    check_modes(wf, mapping)?;
    match mapping.kind() {
        MappingKind::JordanWigner => jw_encode(wf),
        MappingKind::Parity => jw_to_parity(&jw_encode(wf)?),
        MappingKind::Custom(_) => general_encode(wf, mapping, cap)?.expand_to_binary(cap),
    }
}
