use nalgebra::DMatrix;
use num_complex::Complex64;
use rustc_hash::FxHashMap;

use super::{QubitSubset, ReducedDensityMatrix};
use crate::bitstate::{BitGather, BitString};
use crate::error::{Error, Result};

/// Further partial trace of a reduced density matrix down to `keep ⊆ rho.keep`.
///
/// Basis elements are grouped by their discarded bits; only pairs inside a
/// group contribute. An empty `keep` yields the 1×1 matrix `[tr ρ]`.
pub fn mixed_trace(rho: &ReducedDensityMatrix, keep: &QubitSubset) -> Result<ReducedDensityMatrix> {
    if !keep.is_subset_of(&rho.keep) {
        return Err(Error::InvalidSubset(format!(
            "{:?} is not contained in the kept set {:?}",
            keep.indices(),
            rho.keep.indices()
        )));
    }
    let inner = keep.positions_in(&rho.keep)?;
    let width = rho.keep.len();
    let discarded: Vec<usize> = (0..width).filter(|p| inner.binary_search(p).is_err()).collect();
    let take = BitGather::new(width, &inner)?;
    let drop = BitGather::new(width, &discarded)?;

    let mut labels: Vec<BitString> = Vec::new();
    let mut label_index: FxHashMap<BitString, usize> = FxHashMap::default();
    let mut groups: FxHashMap<BitString, Vec<(usize, usize)>> = FxHashMap::default();
    for (i, b) in rho.basis.iter().enumerate() {
        let a = take.apply(b);
        let next = labels.len();
        let li = *label_index.entry(a.clone()).or_insert_with(|| {
            labels.push(a);
            next
        });
        groups.entry(drop.apply(b)).or_default().push((i, li));
    }

    let dim = labels.len();
    let mut acc = DMatrix::<Complex64>::zeros(dim, dim);
    for members in groups.values() {
        for &(i, a) in members {
            for &(ip, ap) in members {
                acc[(a, ap)] += rho.matrix[(i, ip)];
            }
        }
    }

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&x, &y| labels[x].cmp(&labels[y]));
    Ok(ReducedDensityMatrix {
        matrix: DMatrix::from_fn(dim, dim, |r, c| acc[(order[r], order[c])]),
        basis: order.iter().map(|&i| labels[i].clone()).collect(),
        keep: keep.clone(),
        input_normalized: rho.input_normalized,
    })
}
