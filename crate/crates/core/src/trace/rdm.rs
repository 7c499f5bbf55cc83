use nalgebra::DMatrix;
use num_complex::Complex64;

use super::QubitSubset;
use crate::bitstate::BitString;

/// Reduced density matrix over an explicit effective basis.
///
/// `basis` lists the kept-space labels that actually occur (sorted), and
/// `matrix` is dense over that basis only, never over all `2^|A|` labels.
#[derive(Clone, Debug)]
pub struct ReducedDensityMatrix {
    pub basis: Vec<BitString>,
    pub matrix: DMatrix<Complex64>,
    pub keep: QubitSubset,
    /// False when the traced state was not normalized.
    pub input_normalized: bool,
}

impl ReducedDensityMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.diagonal().iter().sum()
    }

    /// Index of a kept-space label in the effective basis.
    pub fn index_of(&self, label: &BitString) -> Option<usize> {
        self.basis.binary_search(label).ok()
    }

    /// `⟨a|ρ|a'⟩`; zero for labels outside the effective basis.
    pub fn element(&self, a: &BitString, a_prime: &BitString) -> Complex64 {
        match (self.index_of(a), self.index_of(a_prime)) {
            (Some(i), Some(j)) => self.matrix[(i, j)],
            _ => Complex64::default(),
        }
    }

    pub fn max_hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut err: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                err = err.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        err
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_hermiticity_error() <= tol
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Diagonal entries `p(a) = ⟨a|ρ|a⟩`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let n = m.nrows();
    match n {
        0 => Vec::new(),
        1 => vec![m[(0, 0)].re],
        _ => {
            // symmetrize so round-off asymmetry cannot leak into the solver
            let h = DMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
            let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
            ev.sort_by(f64::total_cmp);
            ev
        }
    }
}
