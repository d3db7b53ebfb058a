//! `Tor^A_{i,j}(k, k)` as the homology of the normalized bar complex
//! `⊕ A_{a_1} ⊗ .. ⊗ A_{a_i}` (`a_l >= 1`, `Σ a_l = j`) with differential
//! `[x_1|..|x_i] -> Σ_t (-1)^t [x_1|..|x_t x_{t+1}|..|x_i]`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::model::GradedModel;
use crate::field::Field;
use crate::linalg::EchelonSpan;

/// A bar term too large for the configured bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BarCapacity {
    pub i: usize,
    pub j: usize,
    pub dim: usize,
    pub bound: usize,
}

fn compositions(j: usize, i: usize) -> Vec<Vec<usize>> {
    if i == 0 {
        return if j == 0 { alloc::vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..=j.saturating_sub(i - 1) {
        for mut rest in compositions(j - first, i - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

struct Term {
    comps: Vec<Vec<usize>>,
    offsets: BTreeMap<Vec<usize>, usize>,
    dim: usize,
}

fn term<F: Field>(model: &GradedModel<F>, i: usize, j: usize) -> Term {
    let comps = compositions(j, i);
    let mut offsets = BTreeMap::new();
    let mut dim = 0;
    for c in &comps {
        offsets.insert(c.clone(), dim);
        dim += c.iter().map(|&a| model.dim(a)).product::<usize>();
    }
    Term { comps, offsets, dim }
}

fn term_dim<F: Field>(model: &GradedModel<F>, i: usize, j: usize) -> usize {
    compositions(j, i).iter().map(|c| c.iter().map(|&a| model.dim(a)).product::<usize>()).sum()
}

/// Mixed-radix index of `ks` with radices `dim A_{a_l}`, last digit fastest.
fn index<F: Field>(model: &GradedModel<F>, comp: &[usize], ks: &[usize]) -> usize {
    comp.iter().zip(ks).fold(0, |acc, (&a, &k)| acc * model.dim(a) + k)
}

/// Rank of `d : B_{i,j} -> B_{i-1,j}`.
fn differential_rank<F: Field>(model: &GradedModel<F>, i: usize, j: usize) -> usize {
    if i <= 1 {
        return 0;
    }
    let f = model.field();
    let src = term(model, i, j);
    let dst = term(model, i - 1, j);
    let mut span = EchelonSpan::new(f.clone(), dst.dim);
    let one = f.one();
    let minus = f.neg(&one);
    for comp in &src.comps {
        let radices: Vec<usize> = comp.iter().map(|&a| model.dim(a)).collect();
        let count: usize = radices.iter().product();
        let mut ks = alloc::vec![0usize; i];
        for _ in 0..count {
            let mut image = alloc::vec![f.zero(); dst.dim];
            for t in 0..i - 1 {
                let sign = if t % 2 == 0 { &minus } else { &one };
                let mut merged: Vec<usize> = comp[..t].to_vec();
                merged.push(comp[t] + comp[t + 1]);
                merged.extend_from_slice(&comp[t + 2..]);
                let base = dst.offsets[&merged];
                let prod = model.product(comp[t], ks[t], comp[t + 1], ks[t + 1]);
                let mut kk: Vec<usize> = ks[..t].to_vec();
                kk.push(0);
                kk.extend_from_slice(&ks[t + 2..]);
                for (m, c) in prod.iter().enumerate() {
                    if f.is_zero(c) {
                        continue;
                    }
                    kk[t] = m;
                    let idx = base + index(model, &merged, &kk);
                    image[idx] = f.add(&image[idx], &f.mul(sign, c));
                }
            }
            span.insert(image);
            if span.rank() == dst.dim {
                return span.rank();
            }
            // advance the multi-index, last digit fastest
            for l in (0..i).rev() {
                ks[l] += 1;
                if ks[l] < radices[l] {
                    break;
                }
                ks[l] = 0;
            }
        }
    }
    span.rank()
}

/// `dims[i][j]` for `i <= i_max`, `j <= j_max`; fails before building any
/// term whose dimension exceeds `bound`.
pub fn bar_tor<F: Field>(model: &GradedModel<F>, i_max: usize, j_max: usize, bound: usize) -> Result<Vec<Vec<usize>>, BarCapacity> {
    assert!(model.top() >= j_max, "model too short for the window");
    let mut largest: Option<BarCapacity> = None;
    for j in 0..=j_max {
        for i in 0..=(i_max + 1).min(j) {
            let dim = term_dim(model, i, j);
            if dim > bound && largest.is_none_or(|l| dim > l.dim) {
                largest = Some(BarCapacity { i, j, dim, bound });
            }
        }
    }
    if let Some(l) = largest {
        return Err(l);
    }
    let mut dims = alloc::vec![alloc::vec![0usize; j_max + 1]; i_max + 1];
    dims[0][0] = 1;
    for j in 1..=j_max {
        let mut ranks = alloc::vec![0usize; (i_max + 2).min(j + 1) + 1];
        for (i, r) in ranks.iter_mut().enumerate().skip(2) {
            if i <= j {
                *r = differential_rank(model, i, j);
            }
        }
        for (i, row) in dims.iter_mut().enumerate().skip(1) {
            if i > j {
                break;
            }
            let rank_in = ranks.get(i + 1).copied().unwrap_or(0);
            row[j] = term_dim(model, i, j) - ranks[i] - rank_in;
        }
    }
    Ok(dims)
}
