//! Deterministic generators for the structured configurations: general
//! position, splits, chains, three-plane patterns, hyperplane unions, and the
//! eight-point configuration in `P^4` that admits no balanced split.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::config::{ConfigError, Configuration};
use crate::field::{Field, FieldTag};
use crate::pointset::PointSet;
use crate::search_vectors::SmallIntVectors;

/// Coefficient bound for the greedy coordinate search.
const SEARCH_COEF: i64 = 3;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("field {0} too small for this construction")]
    FieldTooSmall(FieldTag),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// A generated configuration with the family `Λ` it was built for.
#[derive(Clone, Debug)]
pub struct Family<F: Field> {
    pub config: Configuration<F>,
    /// Sorted in [`PointSet`] order.
    pub lambda: Vec<PointSet>,
    pub blocks: Vec<PointSet>,
}

fn infeasible<T>(msg: String) -> Result<T, FamilyError> {
    Err(FamilyError::Infeasible(msg))
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = alloc::vec![0; n + 1];
    v[i] = 1;
    v
}

fn finish<F: Field>(
    field: F,
    n: usize,
    points: Vec<Vec<i64>>,
    blocks: Vec<PointSet>,
    mut lambda: Vec<PointSet>,
) -> Result<Family<F>, FamilyError> {
    let config = Configuration::from_integers(field, n, &points)?;
    lambda.sort();
    lambda.dedup();
    Ok(Family { config, lambda, blocks })
}

/// Points `(1, t, t^2, .., t^n)` for `t = 0, .., s-1`.
pub fn gen_general_position<F: Field>(field: F, n: usize, s: usize) -> Result<Configuration<F>, FamilyError> {
    if s == 0 {
        return infeasible("at least one point is required".into());
    }
    if let FieldTag::Prime(p) = field.tag() {
        if p <= s as u64 {
            return Err(FamilyError::FieldTooSmall(field.tag()));
        }
    }
    let pts: Vec<Vec<F::Elem>> = (0..s as i64)
        .map(|t| {
            let t = field.from_i64(t);
            let mut v = Vec::with_capacity(n + 1);
            let mut acc = field.one();
            for _ in 0..=n {
                v.push(acc.clone());
                acc = field.mul(&acc, &t);
            }
            v
        })
        .collect();
    Ok(Configuration::new(field, n, pts, Vec::new())?)
}

/// Grows the blocks one point at a time, taking the first small-integer
/// vector accepted by `allowed` that keeps every block independent and every
/// set produced by `required` a flat.
struct Greedy<'a, F: Field> {
    field: F,
    n: usize,
    points: Vec<Vec<i64>>,
    blocks: Vec<PointSet>,
    required: &'a dyn Fn(&[PointSet]) -> Vec<PointSet>,
}

impl<F: Field> Greedy<'_, F> {
    fn add(&mut self, block: usize, allowed: &dyn Fn(&[i64]) -> bool) -> Result<(), FamilyError> {
        let idx = self.points.len();
        for v in SmallIntVectors::new(self.n + 1, SEARCH_COEF) {
            if !allowed(&v) {
                continue;
            }
            self.points.push(v);
            self.blocks[block] = self.blocks[block].with(idx);
            if self.acceptable() {
                return Ok(());
            }
            self.points.pop();
            self.blocks[block] = self.blocks[block].without(idx);
        }
        match self.field.tag() {
            FieldTag::Prime(_) => Err(FamilyError::FieldTooSmall(self.field.tag())),
            FieldTag::Rational => infeasible(format!("no admissible point for block {block}")),
        }
    }

    fn acceptable(&self) -> bool {
        let Ok(cfg) = Configuration::from_integers(self.field.clone(), self.n, &self.points) else {
            return false;
        };
        self.blocks.iter().all(|b| cfg.is_independent(*b))
            && (self.required)(&self.blocks).into_iter().all(|t| cfg.is_flat(t))
    }
}

fn union_all(blocks: &[PointSet]) -> PointSet {
    blocks.iter().fold(PointSet::EMPTY, |a, b| a.union(*b))
}

/// `S = S1 ⊔ S2` with `S1 = {e_0, .., e_{a-1}}`, both parts independent and
/// each span missing the other part. `Λ = {S1, S2, S}`.
pub fn gen_split<F: Field>(field: F, n: usize, sizes: [usize; 2]) -> Result<Family<F>, FamilyError> {
    let [a, b] = sizes;
    if a == 0 || b == 0 || a > n || b > n {
        return infeasible(format!("split sizes {a}+{b} in P^{n} need 1 <= a, b <= n"));
    }
    let required = |bl: &[PointSet]| bl.to_vec();
    let mut g = Greedy {
        field,
        n,
        points: (0..a).map(|i| unit(n, i)).collect(),
        blocks: alloc::vec![PointSet::full(a), PointSet::EMPTY],
        required: &required,
    };
    for _ in 0..b {
        g.add(1, &|_| true)?;
    }
    let blocks = g.blocks.clone();
    let all = union_all(&blocks);
    finish(g.field, n, g.points, blocks.clone(), alloc::vec![blocks[0], blocks[1], all])
}

fn consecutive_unions(blocks: &[PointSet]) -> Vec<PointSet> {
    let mut out = Vec::new();
    for i in 0..blocks.len() {
        let mut acc = PointSet::EMPTY;
        for b in &blocks[i..] {
            acc = acc.union(*b);
            out.push(acc);
        }
    }
    out
}

/// `S = S1 ⊔ .. ⊔ Sm` (`m <= 3`) with every consecutive union a flat. For
/// `m = 3`: `S2` lies on `x0 = x1 = 0`, `S1` on `x0 = 0` off `x1 = 0`, and
/// `S3` on `x1 = 0` off `x0 = 0`.
pub fn gen_chain<F: Field>(field: F, n: usize, sizes: &[usize]) -> Result<Family<F>, FamilyError> {
    if sizes.contains(&0) {
        return infeasible("chain blocks must be nonempty".into());
    }
    match sizes {
        [] => infeasible("at least one block is required".into()),
        [a] => {
            if *a > n + 1 {
                return infeasible(format!("{a} independent points do not fit in P^{n}"));
            }
            let s1 = PointSet::full(*a);
            finish(field, n, (0..*a).map(|i| unit(n, i)).collect(), alloc::vec![s1], alloc::vec![PointSet::EMPTY, s1])
        }
        [a, b] => gen_split(field, n, [*a, *b]),
        [a, b, c] => {
            let (a, b, c) = (*a, *b, *c);
            if n < 2 || a > n - 1 || c > n - 1 || b > n - 1 {
                return infeasible(format!("chain sizes {a},{b},{c} in P^{n} need each block <= n-1"));
            }
            let required = |bl: &[PointSet]| consecutive_unions(bl);
            let mut g = Greedy {
                field,
                n,
                points: (0..b).map(|i| unit(n, i + 2)).collect(),
                blocks: alloc::vec![PointSet::EMPTY, PointSet::full(b), PointSet::EMPTY],
                required: &required,
            };
            for _ in 0..a {
                g.add(0, &|v| v[0] == 0 && v[1] != 0)?;
            }
            for _ in 0..c {
                g.add(2, &|v| v[1] == 0 && v[0] != 0)?;
            }
            let blocks = g.blocks.clone();
            finish(g.field, n, g.points, blocks.clone(), consecutive_unions(&blocks))
        }
        _ => infeasible("chains are generated for at most three blocks".into()),
    }
}

fn three_plane_sets(bl: &[PointSet]) -> Vec<PointSet> {
    let (s0, rest) = (bl[0], &bl[1..]);
    let mut out = alloc::vec![s0, union_all(bl)];
    for (i, si) in rest.iter().enumerate() {
        out.push(*si);
        out.push(s0.union(*si));
        for sj in &rest[i + 1..] {
            out.push(s0.union(*si).union(*sj));
        }
    }
    out
}

/// `S = S0 ⊔ S1 ⊔ S2 ⊔ S3` with hyperplanes `H_i = {x_{i-1} = 0}`: `S_i`
/// lies on the other two hyperplanes and off `H_i`, `S0` on all three.
pub fn gen_three_planes<F: Field>(field: F, n: usize, sizes: [usize; 4]) -> Result<Family<F>, FamilyError> {
    if n < 3 {
        return infeasible(format!("three independent hyperplanes with room for S0 need n >= 3, got {n}"));
    }
    if sizes.iter().any(|&k| k > n - 2) {
        return infeasible(format!("three-plane sizes {sizes:?} in P^{n} need each block <= n-2"));
    }
    if sizes[1..].contains(&0) {
        return infeasible("blocks S1, S2, S3 must be nonempty".into());
    }
    let required = |bl: &[PointSet]| three_plane_sets(bl);
    let mut g = Greedy {
        field,
        n,
        points: (0..sizes[0]).map(|i| unit(n, i + 3)).collect(),
        blocks: alloc::vec![PointSet::full(sizes[0]), PointSet::EMPTY, PointSet::EMPTY, PointSet::EMPTY],
        required: &required,
    };
    for i in 1..=3 {
        for _ in 0..sizes[i] {
            g.add(i, &|v| (0..3).all(|j| (v[j] != 0) == (j == i - 1)))?;
        }
    }
    let blocks = g.blocks.clone();
    finish(g.field, n, g.points, blocks.clone(), three_plane_sets(&blocks))
}

/// `m` hyperplanes `H_i = {x_{i-1} = 0}` and
/// `S_i = {e_{i-1}, e_{i-1} + e_m, .., e_{i-1} + e_n}`, an independent set
/// spanning the intersection of the other hyperplanes and missing `H_i`.
/// `Λ` is every union of blocks; `|S| = m(n - m + 2)`.
pub fn gen_block_unions<F: Field>(field: F, n: usize, m: usize) -> Result<Family<F>, FamilyError> {
    if m == 0 || m > n + 1 {
        return infeasible(format!("need 1 <= m <= n+1, got m = {m}, n = {n}"));
    }
    let mut points = Vec::new();
    let mut blocks = Vec::new();
    for i in 0..m {
        let start = points.len();
        points.push(unit(n, i));
        for k in m..=n {
            let mut v = unit(n, i);
            v[k] = 1;
            points.push(v);
        }
        blocks.push(PointSet::from_indices(start..points.len()));
    }
    let lambda = (0u64..(1 << m))
        .map(|mask| union_all(&(0..m).filter(|k| mask & (1 << k) != 0).map(|k| blocks[k]).collect::<Vec<_>>()))
        .collect();
    finish(field, n, points, blocks, lambda)
}

/// `e1, .., e5, x, y, z` in `P^4` with `x = e1 - e3 + e4`,
/// `y = e1 + e2 + e4 - e5`, `z = e1 + e2 + e3`.
pub fn rains_configuration<F: Field>(field: F) -> Configuration<F> {
    let mut pts: Vec<Vec<i64>> = (0..5).map(|i| unit(4, i)).collect();
    pts.push(alloc::vec![1, 0, -1, 1, 0]);
    pts.push(alloc::vec![1, 1, 0, 1, -1]);
    pts.push(alloc::vec![1, 1, 1, 0, 0]);
    let labels = ["e1", "e2", "e3", "e4", "e5", "x", "y", "z"].iter().map(|s| Some(String::from(*s))).collect();
    Configuration::from_integers(field, 4, &pts).expect("distinct points").with_labels(labels)
}

/// The chain `{e2, e3, e4}`, `{e1, x, z}`, `{e5, y}` on [`rains_configuration`].
pub fn rains_chain() -> [PointSet; 3] {
    [PointSet::from_indices([1, 2, 3]), PointSet::from_indices([0, 5, 7]), PointSet::from_indices([4, 6])]
}

/// Named instances of every generator, including the Rains configuration.
pub fn catalog<F: Field>(field: F) -> Result<Vec<(String, Configuration<F>)>, FamilyError> {
    let mut out = Vec::new();
    for (n, a, b) in [(2, 1, 2), (3, 3, 2), (4, 4, 4), (5, 3, 5)] {
        out.push((format!("split n={n} {a}+{b}"), gen_split(field.clone(), n, [a, b])?.config));
    }
    for (n, sizes) in [(3, [2, 2, 2]), (4, [3, 3, 2]), (5, [2, 4, 3])] {
        out.push((format!("chain n={n} {sizes:?}"), gen_chain(field.clone(), n, &sizes)?.config));
    }
    for (n, sizes) in [(4, [1, 2, 2, 2]), (5, [2, 3, 3, 3])] {
        out.push((format!("three-planes n={n} {sizes:?}"), gen_three_planes(field.clone(), n, sizes)?.config));
    }
    for (n, m) in [(3, 2), (4, 2), (4, 3), (5, 3)] {
        out.push((format!("block-unions n={n} m={m}"), gen_block_unions(field.clone(), n, m)?.config));
    }
    for n in 2..=5 {
        out.push((format!("general-position n={n} s={}", 2 * n), gen_general_position(field.clone(), n, 2 * n)?));
    }
    out.push(("rains".into(), rains_configuration(field)));
    Ok(out)
}
