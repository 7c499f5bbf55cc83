use indexmap::IndexMap;
use num_complex::Complex64;
use rustc_hash::FxBuildHasher;

use super::BitString;
use crate::error::{Error, Result};

/// Amplitudes with modulus below this are not stored.
pub const PRUNE_TOLERANCE: f64 = 1e-14;
/// Allowed deviation of the squared norm from one when reading external data.
pub const INGEST_NORM_TOLERANCE: f64 = 1e-8;
/// Allowed deviation of the squared norm from one after [`SparseState::normalize`].
pub const NORMALIZED_TOLERANCE: f64 = 1e-12;

pub(crate) type TermMap<V> = IndexMap<BitString, V, FxBuildHasher>;

/// Qubit wavefunction in binary form: a map from basis label to amplitude.
///
/// Iteration follows insertion order, which makes every downstream
/// floating-point reduction reproducible for identical inputs.
#[derive(Clone, Debug)]
pub struct SparseState {
    num_qubits: usize,
    terms: TermMap<Complex64>,
    norm_tolerance: f64,
}

impl SparseState {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            terms: TermMap::default(),
            norm_tolerance: INGEST_NORM_TOLERANCE,
        }
    }

    pub fn with_capacity(num_qubits: usize, capacity: usize) -> Self {
        Self {
            num_qubits,
            terms: TermMap::with_capacity_and_hasher(capacity, FxBuildHasher),
            norm_tolerance: INGEST_NORM_TOLERANCE,
        }
    }

    /// Collects terms, summing repeated labels and pruning negligible amplitudes.
    pub fn from_terms<I>(num_qubits: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BitString, Complex64)>,
    {
        let mut state = Self::new(num_qubits);
        for (bits, amp) in terms {
            state.add(bits, amp)?;
        }
        state.prune();
        Ok(state)
    }

    pub fn basis_state(bits: BitString) -> Self {
        let mut state = Self::new(bits.len());
        state.terms.insert(bits, Complex64::new(1.0, 0.0));
        state
    }

    /// Adds `amp` to the amplitude of `bits`. Does not prune.
    pub fn add(&mut self, bits: BitString, amp: Complex64) -> Result<()> {
        if bits.len() != self.num_qubits {
            return Err(Error::LengthMismatch {
                expected: self.num_qubits,
                found: bits.len(),
            });
        }
        if !amp.re.is_finite() || !amp.im.is_finite() {
            return Err(Error::NonFinite);
        }
        *self.terms.entry(bits).or_insert(Complex64::new(0.0, 0.0)) += amp;
        Ok(())
    }

    /// Inserts a term whose label is known to be new and of the right length.
    pub(crate) fn insert_unique(&mut self, bits: BitString, amp: Complex64) -> Option<Complex64> {
        debug_assert_eq!(bits.len(), self.num_qubits);
        self.terms.insert(bits, amp)
    }

    /// Drops every stored amplitude with modulus below [`PRUNE_TOLERANCE`].
    pub fn prune(&mut self) {
        self.terms.retain(|_, a| a.norm() >= PRUNE_TOLERANCE);
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Number of stored terms (χ).
    #[inline]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn amplitude(&self, bits: &BitString) -> Complex64 {
        self.terms.get(bits).copied().unwrap_or_default()
    }

    #[inline]
    pub fn get(&self, bits: &BitString) -> Option<Complex64> {
        self.terms.get(bits).copied()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = (&BitString, Complex64)> + '_ {
        self.terms.iter().map(|(b, a)| (b, *a))
    }

    /// Terms sorted lexicographically by label.
    pub fn sorted_terms(&self) -> Vec<(&BitString, Complex64)> {
        let mut terms: Vec<_> = self.iter().collect();
        terms.sort_by(|a, b| a.0.cmp(b.0));
        terms
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm_tolerance(&self) -> f64 {
        self.norm_tolerance
    }

    pub fn set_norm_tolerance(&mut self, tol: f64) {
        self.norm_tolerance = tol;
    }

    /// Whether the squared norm is within the state's norm tolerance of one.
    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= self.norm_tolerance
    }

    /// Returns a copy scaled to unit norm.
    pub fn normalize(&self) -> Result<SparseState> {
        let norm = self.norm_sqr().sqrt();
        if self.is_empty() || norm == 0.0 {
            return Err(Error::EmptyState);
        }
        let scale = 1.0 / norm;
        let mut out = Self::with_capacity(self.num_qubits, self.len());
        out.norm_tolerance = self.norm_tolerance;
        for (bits, amp) in &self.terms {
            out.terms.insert(bits.clone(), amp * scale);
        }
        Ok(out)
    }

    /// Normalizes when the norm deviates beyond the ingest tolerance, logging a warning.
    pub fn ensure_normalized(self) -> Result<SparseState> {
        let n2 = self.norm_sqr();
        if (n2 - 1.0).abs() > INGEST_NORM_TOLERANCE {
            log::warn!("state norm² = {n2:.12}, renormalizing");
            return self.normalize();
        }
        if self.is_empty() {
            return Err(Error::EmptyState);
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn normalize_three_four_five() {
        let s = SparseState::from_terms(
            2,
            [("01".parse().unwrap(), c(3.0)), ("10".parse().unwrap(), c(4.0))],
        )
        .unwrap();
        let n = s.normalize().unwrap();
        assert!((n.amplitude(&"01".parse().unwrap()).re - 0.6).abs() < 1e-15);
        assert!((n.amplitude(&"10".parse().unwrap()).re - 0.8).abs() < 1e-15);
    }

    #[test]
    fn normalize_identity_case() {
        let s = SparseState::basis_state("0".parse().unwrap());
        let n = s.normalize().unwrap();
        assert_eq!(n.amplitude(&"0".parse().unwrap()), c(1.0));
    }

    #[test]
    fn empty_state_is_rejected() {
        assert!(matches!(SparseState::new(3).normalize(), Err(Error::EmptyState)));
        let zero = SparseState::from_terms(1, [("1".parse().unwrap(), c(0.0))]).unwrap();
        assert!(matches!(zero.normalize(), Err(Error::EmptyState)));
    }

    #[test]
    fn duplicates_sum_and_cancellations_prune() {
        let b: BitString = "11".parse().unwrap();
        let s = SparseState::from_terms(
            2,
            [(b.clone(), c(0.5)), (b.clone(), c(-0.5)), ("00".parse().unwrap(), c(1.0))],
        )
        .unwrap();
        assert_eq!(s.len(), 1);
        assert!(s.get(&b).is_none());
    }

    #[test]
    fn length_and_finiteness_checked() {
        let mut s = SparseState::new(3);
        assert!(s.add("01".parse().unwrap(), c(1.0)).is_err());
        assert!(s.add("011".parse().unwrap(), Complex64::new(f64::NAN, 0.0)).is_err());
    }
}
