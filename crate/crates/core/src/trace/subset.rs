use crate::bitstate::BitGather;
use crate::error::{Error, Result};

/// Sorted set of kept qubits `A` out of `num_qubits`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QubitSubset {
    keep: Vec<usize>,
    num_qubits: usize,
}

impl QubitSubset {
    /// Sorts `indices`; duplicates and out-of-range indices are errors.
    pub fn new(num_qubits: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut keep: Vec<usize> = indices.into_iter().collect();
        keep.sort_unstable();
        if let Some(w) = keep.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidSubset(format!("qubit {} listed twice", w[0])));
        }
        if let Some(&q) = keep.last() {
            if q >= num_qubits {
                return Err(Error::IndexOutOfRange {
                    index: q,
                    len: num_qubits,
                });
            }
        }
        Ok(Self { keep, num_qubits })
    }

    pub fn all(num_qubits: usize) -> Self {
        Self {
            keep: (0..num_qubits).collect(),
            num_qubits,
        }
    }

    pub fn empty(num_qubits: usize) -> Self {
        Self {
            keep: Vec::new(),
            num_qubits,
        }
    }

    pub fn single(num_qubits: usize, q: usize) -> Result<Self> {
        Self::new(num_qubits, [q])
    }

    pub fn pair(num_qubits: usize, i: usize, j: usize) -> Result<Self> {
        Self::new(num_qubits, [i, j])
    }

    #[inline]
    pub fn indices(&self) -> &[usize] {
        &self.keep
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.keep.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.keep.is_empty()
    }

    pub fn contains(&self, q: usize) -> bool {
        self.keep.binary_search(&q).is_ok()
    }

    pub fn complement(&self) -> QubitSubset {
        let mut out = Vec::with_capacity(self.num_qubits - self.keep.len());
        let mut it = self.keep.iter().peekable();
        for q in 0..self.num_qubits {
            if it.peek() == Some(&&q) {
                it.next();
            } else {
                out.push(q);
            }
        }
        QubitSubset {
            keep: out,
            num_qubits: self.num_qubits,
        }
    }

    pub fn is_subset_of(&self, other: &QubitSubset) -> bool {
        self.num_qubits == other.num_qubits && self.keep.iter().all(|&q| other.contains(q))
    }

    /// Positions of this subset's qubits inside `outer`'s index list.
    pub fn positions_in(&self, outer: &QubitSubset) -> Result<Vec<usize>> {
        if self.num_qubits != outer.num_qubits {
            return Err(Error::InvalidSubset(format!(
                "subsets over {} and {} qubits",
                self.num_qubits, outer.num_qubits
            )));
        }
        self.keep
            .iter()
            .map(|q| {
                outer.keep.binary_search(q).map_err(|_| {
                    Error::InvalidSubset(format!("qubit {q} is not in the kept set {:?}", outer.keep))
                })
            })
            .collect()
    }

    /// Extracts the kept bits of a full label, in ascending qubit order.
    pub fn gather(&self) -> BitGather {
        BitGather::new(self.num_qubits, &self.keep).expect("validated subset")
    }
}
