//! Degree-`d` monomials in `x_0, .., x_n`, in degree-lexicographic order.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::Field;

/// Exponent vectors of all monomials of degree `d` in `vars` variables,
/// ordered so that `x_0^d` comes first (for `d = 2`: `x0^2, x0x1, .., x1^2, ..`).
pub fn monomials(vars: usize, d: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; vars];
    fill(&mut out, &mut cur, 0, d as u32);
    out
}

fn fill(out: &mut Vec<Vec<u32>>, cur: &mut [u32], pos: usize, left: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(cur.to_vec());
        cur[pos] = 0;
        return;
    }
    if cur.is_empty() {
        if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for e in (0..=left).rev() {
        cur[pos] = e;
        fill(out, cur, pos + 1, left - e);
    }
    cur[pos] = 0;
}

/// `(vars + d - 1 choose d)`.
pub fn count(vars: usize, d: usize) -> usize {
    let mut num: u128 = 1;
    for k in 0..d as u128 {
        num = num * (vars as u128 + k) / (k + 1);
    }
    num as usize
}

pub fn evaluate<F: Field>(field: &F, exps: &[u32], point: &[F::Elem]) -> F::Elem {
    let mut acc = field.one();
    for (e, x) in exps.iter().zip(point) {
        for _ in 0..*e {
            acc = field.mul(&acc, x);
        }
    }
    acc
}

/// Index of the product of two monomials inside `monomials(vars, d1 + d2)`.
pub fn index_of(list: &[Vec<u32>], exps: &[u32]) -> Option<usize> {
    list.iter().position(|m| m.as_slice() == exps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadric_order() {
        let m = monomials(3, 2);
        assert_eq!(m, vec![vec![2, 0, 0], vec![1, 1, 0], vec![1, 0, 1], vec![0, 2, 0], vec![0, 1, 1], vec![0, 0, 2]]);
        assert_eq!(count(3, 2), 6);
        assert_eq!(count(5, 2), 15);
        assert_eq!(monomials(5, 3).len(), count(5, 3));
        assert_eq!(monomials(4, 0), vec![vec![0, 0, 0, 0]]);
    }
}
