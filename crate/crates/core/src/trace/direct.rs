//! Partial trace of a binary-form pure state with cost linear in χ.
//!
//! Every label `i` splits into its kept part `i_A` and outer part `i_Ā`. One
//! pass groups the amplitudes into registers `γ[i_A] = {i_Ā ↦ k_i}`; the kept
//! parts form the effective basis. Then
//!
//! ```text
//! ρ_A(a, a') = Σ_{ā ∈ γ[a] ∩ γ[a']} k_{a⊗ā} k*_{a'⊗ā}
//! ```
//!
//! Each register is probed at most once per basis row, giving
//! `O(χ · n_ρ)` register operations overall.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use super::{QubitSubset, ReducedDensityMatrix};
use crate::bitstate::{BitGather, BitString, SparseState};
use crate::error::{Error, Result};

/// Register implementation used by [`direct_trace_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RegisterKind {
    /// Hash tables over packed outer labels: O(1) insert and lookup, hashing
    /// O(N/64) words.
    #[default]
    Hashed,
    /// Ordered trees: O(log size) insert and lookup.
    Ordered,
    /// Hash tables over the sorted positions of the outer label's ones, so
    /// hashing costs O(number of ones).
    OnesHashed,
}

/// Outer-label key stored in the registers.
trait OuterKey: Clone + Eq + std::hash::Hash + Ord {
    fn make(bits: &BitString, outer: &BitGather, kept_mask: &BitString) -> Self;
}

impl OuterKey for BitString {
    #[inline]
    fn make(bits: &BitString, outer: &BitGather, _: &BitString) -> Self {
        outer.apply(bits)
    }
}

/// Positions (in the full label) of the traced qubits that are set.
type OnesKey = SmallVec<[u16; 24]>;

impl OuterKey for OnesKey {
    #[inline]
    fn make(bits: &BitString, _: &BitGather, kept_mask: &BitString) -> Self {
        bits.ones().filter(|&q| !kept_mask.get(q)).map(|q| q as u16).collect()
    }
}

trait Register<Q>: Default {
    fn put(&mut self, key: Q, amp: Complex64);
    fn lookup(&self, key: &Q) -> Option<Complex64>;
    fn len(&self) -> usize;
    fn for_each(&self, f: impl FnMut(&Q, Complex64));
}

impl<Q: Eq + std::hash::Hash> Register<Q> for FxHashMap<Q, Complex64> {
    #[inline]
    fn put(&mut self, key: Q, amp: Complex64) {
        *self.entry(key).or_default() += amp;
    }
    #[inline]
    fn lookup(&self, key: &Q) -> Option<Complex64> {
        self.get(key).copied()
    }
    fn len(&self) -> usize {
        self.len()
    }
    fn for_each(&self, mut f: impl FnMut(&Q, Complex64)) {
        for (k, v) in self {
            f(k, *v);
        }
    }
}

impl<Q: Ord> Register<Q> for BTreeMap<Q, Complex64> {
    #[inline]
    fn put(&mut self, key: Q, amp: Complex64) {
        *self.entry(key).or_default() += amp;
    }
    #[inline]
    fn lookup(&self, key: &Q) -> Option<Complex64> {
        self.get(key).copied()
    }
    fn len(&self) -> usize {
        self.len()
    }
    fn for_each(&self, mut f: impl FnMut(&Q, Complex64)) {
        for (k, v) in self {
            f(k, *v);
        }
    }
}

trait KeyIndex: Default {
    fn index_or_insert(&mut self, key: BitString, next: usize) -> (usize, Option<BitString>);
}

impl KeyIndex for FxHashMap<BitString, usize> {
    #[inline]
    fn index_or_insert(&mut self, key: BitString, next: usize) -> (usize, Option<BitString>) {
        use std::collections::hash_map::Entry;
        match self.entry(key) {
            Entry::Occupied(e) => (*e.get(), None),
            Entry::Vacant(e) => {
                let k = e.key().clone();
                e.insert(next);
                (next, Some(k))
            }
        }
    }
}

impl KeyIndex for BTreeMap<BitString, usize> {
    #[inline]
    fn index_or_insert(&mut self, key: BitString, next: usize) -> (usize, Option<BitString>) {
        use std::collections::btree_map::Entry;
        match self.entry(key) {
            Entry::Occupied(e) => (*e.get(), None),
            Entry::Vacant(e) => {
                let k = e.key().clone();
                e.insert(next);
                (next, Some(k))
            }
        }
    }
}

/// `ρ_A = tr_Ā |ψ⟩⟨ψ|` with hash-table registers.
pub fn direct_trace(state: &SparseState, keep: &QubitSubset) -> Result<ReducedDensityMatrix> {
    direct_trace_with(state, keep, RegisterKind::Hashed)
}

pub fn direct_trace_with(
    state: &SparseState,
    keep: &QubitSubset,
    kind: RegisterKind,
) -> Result<ReducedDensityMatrix> {
    if keep.num_qubits() != state.num_qubits() {
        return Err(Error::LengthMismatch {
            expected: state.num_qubits(),
            found: keep.num_qubits(),
        });
    }
    if keep.is_empty() {
        return Err(Error::InvalidSubset(
            "empty kept set; the full trace is the squared norm".into(),
        ));
    }
    if kind == RegisterKind::OnesHashed && state.num_qubits() > u16::MAX as usize + 1 {
        return Err(Error::InvalidArgument("ones-list keys support at most 65536 qubits".into()));
    }
    type H<Q> = FxHashMap<Q, Complex64>;
    match kind {
        RegisterKind::Hashed => {
            trace_impl::<FxHashMap<BitString, usize>, BitString, H<BitString>>(state, keep)
        }
        RegisterKind::Ordered => trace_impl::<
            BTreeMap<BitString, usize>,
            BitString,
            BTreeMap<BitString, Complex64>,
        >(state, keep),
        RegisterKind::OnesHashed => {
            trace_impl::<FxHashMap<BitString, usize>, OnesKey, H<OnesKey>>(state, keep)
        }
    }
}

fn trace_impl<K: KeyIndex, Q: OuterKey, R: Register<Q>>(
    state: &SparseState,
    keep: &QubitSubset,
) -> Result<ReducedDensityMatrix> {
    let kept = keep.gather();
    let outer = keep.complement().gather();
    let kept_mask = BitString::from_indices(keep.num_qubits(), keep.indices())?;

    let mut index = K::default();
    let mut keys: Vec<BitString> = Vec::new();
    let mut registers: Vec<R> = Vec::new();
    for (bits, amp) in state.iter() {
        let a = kept.apply(bits);
        let (r, new_key) = index.index_or_insert(a, keys.len());
        if let Some(k) = new_key {
            keys.push(k);
            registers.push(R::default());
        }
        registers[r].put(Q::make(bits, &outer, &kept_mask), amp);
    }
    drop(index);

    // deterministic basis order regardless of register iteration order
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&x, &y| keys[x].cmp(&keys[y]));

    let n = keys.len();
    let mut matrix = DMatrix::<Complex64>::zeros(n, n);
    for (row, &l) in order.iter().enumerate() {
        let reg_l = &registers[l];
        for (col, &r) in order.iter().enumerate().skip(row) {
            let reg_r = &registers[r];
            let mut acc = Complex64::default();
            if reg_r.len() <= reg_l.len() {
                reg_r.for_each(|abar, k_r| {
                    if let Some(k_l) = reg_l.lookup(abar) {
                        acc += k_l * k_r.conj();
                    }
                });
            } else {
                reg_l.for_each(|abar, k_l| {
                    if let Some(k_r) = reg_r.lookup(abar) {
                        acc += k_l * k_r.conj();
                    }
                });
            }
            matrix[(row, col)] = acc;
            if col != row {
                matrix[(col, row)] = acc.conj();
            }
        }
    }

    let basis = order.into_iter().map(|i| keys[i].clone()).collect();
    Ok(ReducedDensityMatrix {
        basis,
        matrix,
        keep: keep.clone(),
        input_normalized: state.is_normalized(),
    })
}
