use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rustc_hash::FxHashSet;

use crate::bitstate::{BitString, INGEST_NORM_TOLERANCE};
use crate::error::{Error, Result};

/// How spin-orbitals are laid out over spatial orbitals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OrbitalOrdering {
    /// `α0 β0 α1 β1 …`
    #[default]
    Interleaved,
    /// `α0 α1 … β0 β1 …`
    Blocked,
}

impl OrbitalOrdering {
    /// Spin-orbital indices `(α, β)` of spatial orbital `p` among `num_spin_orbitals`.
    pub fn spin_pair(self, p: usize, num_spin_orbitals: usize) -> (usize, usize) {
        match self {
            OrbitalOrdering::Interleaved => (2 * p, 2 * p + 1),
            OrbitalOrdering::Blocked => (p, p + num_spin_orbitals / 2),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            OrbitalOrdering::Interleaved => "interleaved",
            OrbitalOrdering::Blocked => "blocked",
        }
    }
}

impl fmt::Display for OrbitalOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OrbitalOrdering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interleaved" => Ok(OrbitalOrdering::Interleaved),
            "blocked" => Ok(OrbitalOrdering::Blocked),
            other => Err(Error::InvalidArgument(format!(
                "unknown orbital ordering {other:?}"
            ))),
        }
    }
}

/// Reference state that occupation strings are measured against.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum Vacuum {
    /// Ordinary occupations: ones mark occupied spin-orbitals.
    #[default]
    Empty,
    /// Particle-hole form: ones mark holes in and particles above this reference.
    Reference(BitString),
}

/// CI-type wavefunction: determinants (occupation strings) with coefficients.
///
/// Determinant `i` stands for `a†_{l1} a†_{l2} … |vac⟩` with `l1 < l2 < …`,
/// the rightmost operator acting first.
#[derive(Clone, Debug)]
pub struct FockWavefunction {
    num_modes: usize,
    num_electrons: usize,
    terms: Vec<(BitString, Complex64)>,
    vacuum: Vacuum,
    pub ordering: OrbitalOrdering,
}

impl FockWavefunction {
    /// Validates a particle-number-conserving wavefunction over the empty vacuum.
    ///
    /// The norm is restored to one (with a warning) when it deviates by more
    /// than the ingest tolerance.
    pub fn new(
        num_modes: usize,
        num_electrons: usize,
        terms: Vec<(BitString, Complex64)>,
    ) -> Result<Self> {
        Self::with_vacuum(num_modes, num_electrons, terms, Vacuum::Empty, true)
    }

    pub fn with_vacuum(
        num_modes: usize,
        num_electrons: usize,
        mut terms: Vec<(BitString, Complex64)>,
        vacuum: Vacuum,
        conserves_particles: bool,
    ) -> Result<Self> {
        if let Vacuum::Reference(r) = &vacuum {
            if r.len() != num_modes {
                return Err(Error::LengthMismatch {
                    expected: num_modes,
                    found: r.len(),
                });
            }
        }
        let mut seen: FxHashSet<&BitString> = FxHashSet::default();
        seen.reserve(terms.len());
        for (occ, c) in &terms {
            if occ.len() != num_modes {
                return Err(Error::LengthMismatch {
                    expected: num_modes,
                    found: occ.len(),
                });
            }
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::NonFinite);
            }
            if conserves_particles && vacuum == Vacuum::Empty && occ.count_ones() != num_electrons {
                return Err(Error::ParticleNumber {
                    occupation: occ.to_string(),
                    expected: num_electrons,
                    found: occ.count_ones(),
                });
            }
            if !seen.insert(occ) {
                return Err(Error::DuplicateDeterminant(occ.to_string()));
            }
        }
        drop(seen);
        let n2: f64 = terms.iter().map(|(_, c)| c.norm_sqr()).sum();
        if terms.is_empty() || n2 == 0.0 {
            return Err(Error::EmptyState);
        }
        if (n2 - 1.0).abs() > INGEST_NORM_TOLERANCE {
            log::warn!("wavefunction norm² = {n2:.12}, renormalizing");
            let s = 1.0 / n2.sqrt();
            for (_, c) in terms.iter_mut() {
                *c *= s;
            }
        }
        Ok(Self {
            num_modes,
            num_electrons,
            terms,
            vacuum,
            ordering: OrbitalOrdering::default(),
        })
    }

    /// Single determinant with coefficient one.
    pub fn determinant(occupation: BitString) -> Self {
        let n = occupation.count_ones();
        Self {
            num_modes: occupation.len(),
            num_electrons: n,
            terms: vec![(occupation, Complex64::new(1.0, 0.0))],
            vacuum: Vacuum::Empty,
            ordering: OrbitalOrdering::default(),
        }
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn num_electrons(&self) -> usize {
        self.num_electrons
    }

    /// Number of determinants (χ).
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(BitString, Complex64)] {
        &self.terms
    }

    pub fn vacuum(&self) -> &Vacuum {
        &self.vacuum
    }

    pub fn into_terms(self) -> Vec<(BitString, Complex64)> {
        self.terms
    }

    /// Largest determinant weight `|c|²` and its occupation.
    pub fn leading_determinant(&self) -> Option<&BitString> {
        self.terms
            .iter()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .map(|(b, _)| b)
    }
}
