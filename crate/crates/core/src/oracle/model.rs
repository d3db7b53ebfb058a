//! `A_S` degree by degree: `(A_S)_d` is the span inside `k^S` of the values
//! of degree-`d` forms at the points, and multiplication is pointwise.

use alloc::vec::Vec;

use crate::config::Configuration;
use crate::field::Field;
use crate::linalg::{EchelonSpan, ReducedBasis};

#[derive(Clone, Debug)]
pub struct GradedModel<F: Field> {
    field: F,
    points: usize,
    /// Basis of `(A_S)_d` for `d = 0..=top`, as vectors in `k^S`.
    bases: Vec<ReducedBasis<F>>,
    /// `products[a][b][k][l]`: coordinates of `B_a[k] * B_b[l]` in `B_{a+b}`.
    products: Vec<Vec<Option<Vec<Vec<Vec<F::Elem>>>>>>,
}

impl<F: Field> GradedModel<F> {
    /// Components up to degree `top`, built from raw coordinates.
    pub fn new(cfg: &Configuration<F>, top: usize) -> Self {
        let f = cfg.field().clone();
        let s = cfg.len();
        let linear: Vec<Vec<F::Elem>> = (0..=cfg.dim()).map(|i| cfg.points().iter().map(|p| p[i].clone()).collect()).collect();
        let mut spans = alloc::vec![EchelonSpan::from_vectors(f.clone(), s, [alloc::vec![f.one(); s]])];
        for _ in 1..=top {
            let prev = spans.last().expect("degree 0");
            let mut next = EchelonSpan::new(f.clone(), s);
            'outer: for x in &linear {
                for b in prev.basis() {
                    next.insert(x.iter().zip(b).map(|(u, v)| f.mul(u, v)).collect());
                    if next.rank() == s {
                        break 'outer;
                    }
                }
            }
            spans.push(next);
        }
        let bases: Vec<ReducedBasis<F>> = spans.iter().map(|sp| ReducedBasis::from_vectors(f.clone(), s, sp.basis())).collect();
        let products = (0..=top).map(|_| (0..=top).map(|_| None).collect()).collect();
        let mut m = Self { field: f, points: s, bases, products };
        for a in 0..=top {
            for b in 0..=top - a {
                let table = m.product_table(a, b);
                m.products[a][b] = Some(table);
            }
        }
        m
    }

    fn product_table(&self, a: usize, b: usize) -> Vec<Vec<Vec<F::Elem>>> {
        let f = &self.field;
        let target = &self.bases[a + b];
        self.bases[a]
            .basis()
            .iter()
            .map(|x| {
                self.bases[b]
                    .basis()
                    .iter()
                    .map(|y| {
                        let prod: Vec<F::Elem> = x.iter().zip(y).map(|(u, v)| f.mul(u, v)).collect();
                        target.coordinates(&prod).expect("A_a A_b lies in A_{a+b}")
                    })
                    .collect()
            })
            .collect()
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn top(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn dim(&self, d: usize) -> usize {
        self.bases[d].dim()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(|b| b.dim()).collect()
    }

    /// Coordinates of `B_a[k] * B_b[l]` in the basis of degree `a + b`.
    pub fn product(&self, a: usize, k: usize, b: usize, l: usize) -> &[F::Elem] {
        &self.products[a][b].as_ref().expect("degree within model")[k][l]
    }

    /// `y += c * B_a[k] * x` where `x` has coordinates in degree `b`.
    pub fn add_product(&self, y: &mut [F::Elem], c: &F::Elem, a: usize, k: usize, b: usize, x: &[F::Elem]) {
        let f = &self.field;
        let negc = f.neg(c);
        for (l, xl) in x.iter().enumerate() {
            if f.is_zero(xl) {
                continue;
            }
            let coef = f.mul(&negc, xl);
            f.sub_scaled(y, &coef, self.product(a, k, b, l));
        }
    }
}
