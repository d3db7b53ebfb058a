//! `Tor^A_{i,j}(k, k)` from a minimal graded free resolution of `k`,
//! truncated to `i <= i_max`, `j <= j_max`.
//!
//! An element of `(F_i)_d` is stored blockwise: one block per generator `g`
//! of degree `δ_g <= d`, holding coordinates in `(A_S)_{d - δ_g}`. New
//! generators of `F_{i+1}` in degree `d` complete `A_1 · Z_{i,d-1}` to a
//! basis of the cycles `Z_{i,d}`, so their count is `Tor_{i+1,d}`.

use alloc::vec::Vec;

use super::model::GradedModel;
use crate::field::Field;
use crate::linalg::{EchelonSpan, Matrix};

struct Layout {
    /// `(offset, degree of the A-component)` per generator, `None` if absent.
    blocks: Vec<Option<(usize, usize)>>,
    len: usize,
}

fn layout<F: Field>(model: &GradedModel<F>, degrees: &[usize], d: usize) -> Layout {
    let mut len = 0;
    let blocks = degrees
        .iter()
        .map(|&g| {
            (g <= d).then(|| {
                let off = len;
                len += model.dim(d - g);
                (off, d - g)
            })
        })
        .collect();
    Layout { blocks, len }
}

/// `B_a[k] · z` for `z ∈ (F)_e`.
fn mul_elem<F: Field>(model: &GradedModel<F>, degrees: &[usize], z: &[F::Elem], e: usize, a: usize, k: usize) -> Vec<F::Elem> {
    let f = model.field();
    let src = layout(model, degrees, e);
    let dst = layout(model, degrees, e + a);
    let mut out = alloc::vec![f.zero(); dst.len];
    let one = f.one();
    for (sb, db) in src.blocks.iter().zip(&dst.blocks) {
        if let (Some((so, sdeg)), Some((dof, ddeg))) = (sb, db) {
            let comp = &z[*so..*so + model.dim(*sdeg)];
            model.add_product(&mut out[*dof..*dof + model.dim(*ddeg)], &one, a, k, *sdeg, comp);
        }
    }
    out
}

/// `dims[i][j] = dim Tor_{i,j}` for `i <= i_max`, `j <= j_max`. The model must
/// reach degree `j_max`.
pub fn minimal_resolution_tor<F: Field>(model: &GradedModel<F>, i_max: usize, j_max: usize) -> Vec<Vec<usize>> {
    assert!(model.top() >= j_max, "model too short for the window");
    let f = model.field();
    let mut dims = alloc::vec![alloc::vec![0usize; j_max + 1]; i_max + 1];
    dims[0][0] = 1;
    if i_max == 0 {
        return dims;
    }

    // F_0 = A; cycles of the augmentation are A_+
    let mut degrees: Vec<usize> = alloc::vec![0];
    let mut cycles: Vec<Vec<Vec<F::Elem>>> = (0..=j_max)
        .map(|d| {
            if d == 0 {
                return Vec::new();
            }
            (0..model.dim(d))
                .map(|k| {
                    let mut v = alloc::vec![f.zero(); model.dim(d)];
                    v[k] = f.one();
                    v
                })
                .collect()
        })
        .collect();

    for i in 0..i_max {
        let mut next_degrees = Vec::new();
        let mut next_images: Vec<Vec<F::Elem>> = Vec::new();
        for d in 1..=j_max {
            let z = &cycles[d];
            if z.is_empty() {
                continue;
            }
            let len = layout(model, &degrees, d).len;
            let mut span = EchelonSpan::new(f.clone(), len);
            'fill: for w in &cycles[d - 1] {
                for k in 0..model.dim(1) {
                    if span.rank() == z.len() {
                        break 'fill;
                    }
                    span.insert(mul_elem(model, &degrees, w, d - 1, 1, k));
                }
            }
            for v in z {
                if span.rank() == z.len() {
                    break;
                }
                if span.insert(v.clone()) {
                    next_degrees.push(d);
                    next_images.push(v.clone());
                    dims[i + 1][d] += 1;
                }
            }
        }
        if i + 1 == i_max {
            break;
        }
        // cycles of F_{i+1} -> F_i, degree by degree
        cycles = (0..=j_max)
            .map(|d| {
                let src = layout(model, &next_degrees, d);
                if src.len == 0 {
                    return Vec::new();
                }
                let rows = layout(model, &degrees, d).len;
                let mut columns = Vec::with_capacity(src.len);
                for (g, blk) in src.blocks.iter().enumerate() {
                    if let Some((_, a)) = blk {
                        for k in 0..model.dim(*a) {
                            columns.push(mul_elem(model, &degrees, &next_images[g], next_degrees[g], *a, k));
                        }
                    }
                }
                Matrix::from_columns(f.clone(), rows, &columns).kernel_basis()
            })
            .collect();
        degrees = next_degrees;
    }
    dims
}
