use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

/// Inline capacity in words; 256 qubits fit without a heap allocation.
const INLINE_WORDS: usize = 4;

type Words = SmallVec<[u64; INLINE_WORDS]>;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// Packed computational-basis label (or occupation string) of `len` qubits.
///
/// Qubit `q` lives in bit `q % 64` of word `q / 64`. In text form qubit 0 is
/// the leftmost character, so `"100"` has only qubit 0 set. Bits beyond `len`
/// are always zero. Ordering is lexicographic on the text form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    len: usize,
    words: Words,
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: SmallVec::from_elem(0, words_for(len)),
        }
    }

    /// Builds a string with the listed qubits set.
    pub fn from_indices(len: usize, ones: &[usize]) -> Result<Self> {
        let mut bits = Self::zeros(len);
        for &q in ones {
            if q >= len {
                return Err(Error::IndexOutOfRange { index: q, len });
            }
            bits.set(q, true);
        }
        Ok(bits)
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut out = Self::zeros(bits.len());
        for (q, &b) in bits.iter().enumerate() {
            if b {
                out.set(q, true);
            }
        }
        out
    }

    /// Builds a string from raw words, clearing any bits past `len`.
    pub fn from_words(len: usize, words: &[u64]) -> Result<Self> {
        let expected = words_for(len);
        if words.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: words.len(),
            });
        }
        let mut out = Self {
            len,
            words: SmallVec::from_slice(words),
        };
        out.clear_tail();
        Ok(out)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    #[inline]
    pub fn get(&self, q: usize) -> bool {
        debug_assert!(q < self.len);
        (self.words[q / WORD_BITS] >> (q % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, q: usize, value: bool) {
        debug_assert!(q < self.len);
        let mask = 1u64 << (q % WORD_BITS);
        if value {
            self.words[q / WORD_BITS] |= mask;
        } else {
            self.words[q / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, q: usize) {
        debug_assert!(q < self.len);
        self.words[q / WORD_BITS] ^= 1u64 << (q % WORD_BITS);
    }

    #[inline]
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of set qubits with index strictly below `q`.
    pub fn count_ones_below(&self, q: usize) -> usize {
        let full = q / WORD_BITS;
        let mut count: usize = self.words[..full].iter().map(|w| w.count_ones() as usize).sum();
        let rem = q % WORD_BITS;
        if rem > 0 {
            count += (self.words[full] & ((1u64 << rem) - 1)).count_ones() as usize;
        }
        count
    }

    /// Indices of set qubits in ascending order.
    pub fn ones(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            word: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        self.check_len(other)?;
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(other.words.iter()) {
            *a ^= *b;
        }
        Ok(out)
    }

    /// `self ^= mask` for masks of identical length.
    #[inline]
    pub fn xor_assign(&mut self, mask: &BitString) {
        debug_assert_eq!(self.len, mask.len);
        for (a, b) in self.words.iter_mut().zip(mask.words.iter()) {
            *a ^= *b;
        }
    }

    /// Popcount of `self & mask`.
    #[inline]
    pub fn and_count_ones(&self, mask: &BitString) -> usize {
        self.words
            .iter()
            .zip(mask.words.iter())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn check_len(&self, other: &BitString) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                expected: self.len,
                found: other.len,
            });
        }
        Ok(())
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem > 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

pub struct Ones<'a> {
    words: &'a [u64],
    word: usize,
    current: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word * WORD_BITS + bit);
            }
            self.word += 1;
            if self.word >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word];
        }
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.words.iter().zip(other.words.iter()) {
            let diff = a ^ b;
            if diff != 0 {
                // the lowest differing qubit is the leftmost differing character
                let bit = diff.trailing_zeros();
                return if (a >> bit) & 1 == 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut text = String::with_capacity(self.len);
        for q in 0..self.len {
            text.push(if self.get(q) { '1' } else { '0' });
        }
        f.write_str(&text)
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{self}⟩")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = Self::zeros(s.len());
        for (q, c) in s.bytes().enumerate() {
            match c {
                b'0' => {}
                b'1' => out.set(q, true),
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "invalid character {:?} in bitstring",
                        other as char
                    )))
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy)]
struct Run {
    src_word: usize,
    src_shift: u32,
    len: u32,
    dst_bit: usize,
}

/// Precomputed extraction of a fixed subset of qubits into a compact string.
///
/// Contiguous index runs are copied with one shift and mask each, so a
/// reduction costs O(runs) word operations instead of one step per qubit.
#[derive(Debug, Clone)]
pub struct BitGather {
    src_len: usize,
    dst_len: usize,
    runs: Vec<Run>,
}

impl BitGather {
    /// `indices` must be strictly ascending and `< src_len`.
    pub fn new(src_len: usize, indices: &[usize]) -> Result<Self> {
        let mut runs: Vec<Run> = Vec::new();
        let mut prev: Option<usize> = None;
        for (dst, &q) in indices.iter().enumerate() {
            if q >= src_len {
                return Err(Error::IndexOutOfRange {
                    index: q,
                    len: src_len,
                });
            }
            if let Some(p) = prev {
                if q <= p {
                    return Err(Error::InvalidSubset(
                        "indices must be strictly ascending".into(),
                    ));
                }
            }
            let extends = match (prev, runs.last()) {
                (Some(p), Some(run)) => q == p + 1 && q % WORD_BITS != 0 && run.len < 64,
                _ => false,
            };
            if extends {
                runs.last_mut().expect("run exists").len += 1;
            } else {
                runs.push(Run {
                    src_word: q / WORD_BITS,
                    src_shift: (q % WORD_BITS) as u32,
                    len: 1,
                    dst_bit: dst,
                });
            }
            prev = Some(q);
        }
        Ok(Self {
            src_len,
            dst_len: indices.len(),
            runs,
        })
    }

    pub fn src_len(&self) -> usize {
        self.src_len
    }

    pub fn dst_len(&self) -> usize {
        self.dst_len
    }

    #[inline]
    pub fn apply(&self, src: &BitString) -> BitString {
        debug_assert_eq!(src.len(), self.src_len);
        let mut out = BitString::zeros(self.dst_len);
        let dst = out.words_mut();
        let sw = src.words();
        for run in &self.runs {
            let mask = if run.len == 64 {
                u64::MAX
            } else {
                (1u64 << run.len) - 1
            };
            let chunk = (sw[run.src_word] >> run.src_shift) & mask;
            if chunk == 0 {
                continue;
            }
            let word = run.dst_bit / WORD_BITS;
            let shift = run.dst_bit % WORD_BITS;
            dst[word] |= chunk << shift;
            if shift + run.len as usize > WORD_BITS {
                dst[word + 1] |= chunk >> (WORD_BITS - shift);
            }
        }
        out
    }
}
