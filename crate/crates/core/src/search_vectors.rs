//! Deterministic enumeration of small integer coefficient vectors.
//!
//! Order: first the unit vectors `e_0, .., e_{d-1}`, then for `c = 1, 2, ..`
//! every vector whose largest absolute entry is `c`, in lexicographic order
//! with entry 0 most significant and values ranked `0, 1, -1, 2, -2, ..`.

use alloc::vec;
use alloc::vec::Vec;

fn value_of_rank(r: i64) -> i64 {
    if r % 2 == 1 {
        (r + 1) / 2
    } else {
        -(r / 2)
    }
}

#[derive(Clone, Debug)]
pub struct SmallIntVectors {
    dim: usize,
    max_coef: i64,
    unit: usize,
    level: i64,
    odometer: Option<Vec<i64>>,
}

impl SmallIntVectors {
    /// Vectors of length `dim` with entries bounded by `max_coef` in absolute value.
    pub fn new(dim: usize, max_coef: i64) -> Self {
        Self { dim, max_coef, unit: 0, level: 1, odometer: None }
    }
}

impl Iterator for SmallIntVectors {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.dim == 0 || self.max_coef < 1 {
            return None;
        }
        if self.unit < self.dim {
            let mut v = vec![0; self.dim];
            v[self.unit] = 1;
            self.unit += 1;
            return Some(v);
        }
        loop {
            if self.level > self.max_coef {
                return None;
            }
            let radix = 2 * self.level + 1;
            let od = match self.odometer.as_mut() {
                None => {
                    self.odometer = Some(vec![0; self.dim]);
                    self.odometer.as_mut().unwrap()
                }
                Some(od) => {
                    // advance, least significant digit last
                    let mut k = self.dim;
                    loop {
                        if k == 0 {
                            self.level += 1;
                            self.odometer = None;
                            break;
                        }
                        k -= 1;
                        od[k] += 1;
                        if od[k] < radix {
                            break;
                        }
                        od[k] = 0;
                    }
                    match self.odometer.as_mut() {
                        Some(od) => od,
                        None => continue,
                    }
                }
            };
            let v: Vec<i64> = od.iter().map(|&r| value_of_rank(r)).collect();
            if v.iter().any(|x| x.abs() == self.level) {
                return Some(v);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_then_levels() {
        let vs: Vec<_> = SmallIntVectors::new(2, 1).collect();
        assert_eq!(vs[0], vec![1, 0]);
        assert_eq!(vs[1], vec![0, 1]);
        assert_eq!(vs[2], vec![0, 1]);
        assert_eq!(vs[3], vec![0, -1]);
        assert_eq!(vs[4], vec![1, 0]);
        assert_eq!(vs[5], vec![1, 1]);
        // 2 units + 8 vectors of level 1
        assert_eq!(vs.len(), 10);
    }

    #[test]
    fn level_two_has_max_two() {
        let vs: Vec<_> = SmallIntVectors::new(3, 2).skip(3 + 26).collect();
        assert_eq!(vs.len(), 125 - 27);
        assert!(vs.iter().all(|v| v.iter().any(|x| x.abs() == 2)));
    }
}
