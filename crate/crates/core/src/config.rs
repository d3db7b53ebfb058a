//! Finite point configurations in projective space and their lattice of flats.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;

use crate::field::Field;
use crate::linalg::{EchelonSpan, Matrix};
use crate::pointset::{PointSet, MAX_POINTS};

/// Default cap on the number of points for lattice enumeration.
pub const DEFAULT_LATTICE_BOUND: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("point {index} has {found} coordinates, expected {expected}")]
    WrongLength { index: usize, expected: usize, found: usize },
    #[error("point {0} is the zero vector")]
    ZeroPoint(usize),
    #[error("points {0} and {1} are the same projective point")]
    DuplicatePoint(usize, usize),
    #[error("{0} points exceed the supported maximum of 64")]
    TooManyPoints(usize),
    #[error("{labels} labels given for {points} points")]
    LabelCount { labels: usize, points: usize },
    #[error("point index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("configuration has {points} points, above the enumeration bound {bound}")]
    Capacity { points: usize, bound: usize },
}

/// A flat: the intersection of the configuration with a linear subspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Flat {
    pub members: PointSet,
    /// Projective dimension of the span; `-1` for the empty flat.
    pub span_dim: isize,
}

impl Flat {
    pub fn is_independent(&self) -> bool {
        self.span_dim + 1 == self.members.len() as isize
    }
}

/// Distinct points of `P^n` over `F`, each normalized so that its first
/// nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration<F: Field> {
    field: F,
    dim: usize,
    points: Vec<Vec<F::Elem>>,
    labels: Vec<Option<String>>,
}

impl<F: Field> Configuration<F> {
    /// Normalizes and validates. `labels` may be empty.
    pub fn new(
        field: F,
        dim: usize,
        points: Vec<Vec<F::Elem>>,
        labels: Vec<Option<String>>,
    ) -> Result<Self, ConfigError> {
        if points.len() > MAX_POINTS {
            return Err(ConfigError::TooManyPoints(points.len()));
        }
        let labels = if labels.is_empty() { alloc::vec![None; points.len()] } else { labels };
        if labels.len() != points.len() {
            return Err(ConfigError::LabelCount { labels: labels.len(), points: points.len() });
        }
        let mut normalized = Vec::with_capacity(points.len());
        for (index, p) in points.into_iter().enumerate() {
            if p.len() != dim + 1 {
                return Err(ConfigError::WrongLength { index, expected: dim + 1, found: p.len() });
            }
            let Some(lead) = p.iter().find(|x| !field.is_zero(x)) else {
                return Err(ConfigError::ZeroPoint(index));
            };
            let inv = field.inv(lead).expect("nonzero");
            let mut q = p.clone();
            field.scale(&mut q, &inv);
            if let Some(j) = normalized.iter().position(|r: &Vec<F::Elem>| *r == q) {
                return Err(ConfigError::DuplicatePoint(j, index));
            }
            normalized.push(q);
        }
        Ok(Self { field, dim, points: normalized, labels })
    }

    pub fn from_integers(field: F, dim: usize, points: &[Vec<i64>]) -> Result<Self, ConfigError> {
        let pts = points.iter().map(|p| p.iter().map(|&x| field.from_i64(x)).collect()).collect();
        Self::new(field, dim, pts, Vec::new())
    }

    #[must_use]
    pub fn with_labels(mut self, labels: Vec<Option<String>>) -> Self {
        assert_eq!(labels.len(), self.points.len());
        self.labels = labels;
        self
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// Ambient projective dimension `n`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<F::Elem>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[F::Elem] {
        &self.points[i]
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    pub fn all(&self) -> PointSet {
        PointSet::full(self.points.len())
    }

    pub fn check_indices(&self, set: PointSet) -> Result<(), ConfigError> {
        match set.iter().find(|&i| i >= self.len()) {
            Some(index) => Err(ConfigError::IndexOutOfRange { index, len: self.len() }),
            None => Ok(()),
        }
    }

    /// Row-space of the coordinate vectors of `set`.
    pub fn span(&self, set: PointSet) -> EchelonSpan<F> {
        EchelonSpan::from_vectors(self.field.clone(), self.dim + 1, set.iter().map(|i| self.points[i].clone()))
    }

    pub fn coordinate_matrix(&self, set: PointSet) -> Matrix<F> {
        let rows: Vec<_> = set.iter().map(|i| self.points[i].clone()).collect();
        Matrix::from_rows(self.field.clone(), self.dim + 1, &rows)
    }

    pub fn rank(&self, set: PointSet) -> usize {
        self.span(set).rank()
    }

    pub fn span_dim(&self, set: PointSet) -> isize {
        self.rank(set) as isize - 1
    }

    pub fn is_independent(&self, set: PointSet) -> bool {
        self.rank(set) == set.len()
    }

    /// All points of the configuration lying in the span of `set`.
    pub fn closure(&self, set: PointSet) -> Result<Flat, ConfigError> {
        self.check_indices(set)?;
        let span = self.span(set);
        let members = PointSet::from_indices((0..self.len()).filter(|&i| set.contains(i) || span.contains(&self.points[i])));
        Ok(Flat { members, span_dim: span.rank() as isize - 1 })
    }

    pub fn is_flat(&self, set: PointSet) -> bool {
        self.closure(set).map(|f| f.members == set).unwrap_or(false)
    }

    /// Every flat, sorted by [`PointSet`] order, computed by repeatedly closing
    /// `flat ∪ {p}`.
    pub fn flats_lattice(&self, bound: usize) -> Result<FlatLattice, ConfigError> {
        if self.len() > bound {
            return Err(ConfigError::Capacity { points: self.len(), bound });
        }
        let mut seen: BTreeMap<PointSet, Flat> = BTreeMap::new();
        let bottom = self.closure(PointSet::EMPTY)?;
        let mut queue = VecDeque::from([bottom]);
        seen.insert(bottom.members, bottom);
        while let Some(flat) = queue.pop_front() {
            for p in self.all().difference(flat.members).iter() {
                let next = self.closure(flat.members.with(p))?;
                if !seen.contains_key(&next.members) {
                    seen.insert(next.members, next);
                    queue.push_back(next);
                }
            }
        }
        Ok(FlatLattice::from_map(seen))
    }

    /// Every flat with `span_dim = r >= 1` has at most `2r` points; returns the
    /// first violating flat otherwise.
    pub fn two_r_condition(&self, lattice: &FlatLattice) -> Result<(), Flat> {
        match lattice.iter().find(|f| f.span_dim >= 1 && f.members.len() as isize > 2 * f.span_dim) {
            Some(f) => Err(*f),
            None => Ok(()),
        }
    }

    /// The sub-configuration on `set`, with indices renumbered in increasing
    /// order. Also returns the old index of each new point.
    pub fn restrict(&self, set: PointSet) -> Result<(Self, Vec<usize>), ConfigError> {
        self.check_indices(set)?;
        let old: Vec<usize> = set.to_vec();
        let cfg = Self {
            field: self.field.clone(),
            dim: self.dim,
            points: old.iter().map(|&i| self.points[i].clone()).collect(),
            labels: old.iter().map(|&i| self.labels[i].clone()).collect(),
        };
        Ok((cfg, old))
    }

    /// Applies an invertible linear map (rows act on column vectors) and a
    /// permutation of labels: new point `perm[i]` is `g * old point i`.
    pub fn transform(&self, g: &Matrix<F>, perm: &[usize]) -> Result<Self, ConfigError> {
        let mut pts = alloc::vec![Vec::new(); self.len()];
        let mut labels = alloc::vec![None; self.len()];
        for (i, p) in self.points.iter().enumerate() {
            pts[perm[i]] = g.mul_vec(p);
            labels[perm[i]] = self.labels[i].clone();
        }
        Self::new(self.field.clone(), self.dim, pts, labels)
    }

    /// Index of the point equal (projectively) to `v`, if any.
    pub fn find_point(&self, v: &[F::Elem]) -> Option<usize> {
        let f = &self.field;
        let lead = v.iter().find(|x| !f.is_zero(x))?;
        let inv = f.inv(lead)?;
        let mut q = v.to_vec();
        f.scale(&mut q, &inv);
        self.points.iter().position(|p| *p == q)
    }
}

/// All flats of a configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatLattice {
    flats: Vec<Flat>,
    index: BTreeMap<PointSet, usize>,
}

impl FlatLattice {
    fn from_map(map: BTreeMap<PointSet, Flat>) -> Self {
        let flats: Vec<Flat> = map.into_values().collect();
        let index = flats.iter().enumerate().map(|(i, f)| (f.members, i)).collect();
        Self { flats, index }
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Flat> {
        self.flats.iter()
    }

    pub fn get(&self, set: PointSet) -> Option<&Flat> {
        self.index.get(&set).map(|&i| &self.flats[i])
    }

    pub fn contains(&self, set: PointSet) -> bool {
        self.index.contains_key(&set)
    }

    pub fn member_sets(&self) -> BTreeSet<PointSet> {
        self.flats.iter().map(|f| f.members).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::field::{PrimeField, Rationals};
    use alloc::vec;
    use proptest::prelude::*;

    fn q_config(dim: usize, pts: &[Vec<i64>]) -> Configuration<Rationals> {
        Configuration::from_integers(Rationals, dim, pts).unwrap()
    }

    fn collinear() -> Configuration<Rationals> {
        q_config(2, &[vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]])
    }

    /// Closures of all subsets; the independent reference for the lattice.
    fn brute_force_flats<F: Field>(cfg: &Configuration<F>) -> BTreeSet<PointSet> {
        cfg.all().subsets().map(|t| cfg.closure(t).unwrap().members).collect()
    }

    #[test]
    fn validation() {
        assert!(Configuration::from_integers(Rationals, 1, &[vec![1, 0], vec![0, 1]]).is_ok());
        assert_eq!(
            Configuration::from_integers(Rationals, 1, &[vec![1, 0], vec![2, 0]]),
            Err(ConfigError::DuplicatePoint(0, 1))
        );
        assert_eq!(Configuration::from_integers(Rationals, 1, &[vec![0, 0]]), Err(ConfigError::ZeroPoint(0)));
        assert!(matches!(
            Configuration::from_integers(Rationals, 2, &[vec![1, 0]]),
            Err(ConfigError::WrongLength { .. })
        ));
        let _ = families::rains_configuration(Rationals);
    }

    #[test]
    fn normalization_is_first_nonzero_one() {
        let f = PrimeField::new(7).unwrap();
        let c = Configuration::from_integers(f, 2, &[vec![0, 3, 6]]).unwrap();
        assert_eq!(c.point(0), &[0, 1, 2]);
    }

    #[test]
    fn closure_examples() {
        let c = collinear();
        assert_eq!(c.closure(PointSet::EMPTY).unwrap(), Flat { members: PointSet::EMPTY, span_dim: -1 });
        assert_eq!(c.closure(c.all()).unwrap().members, c.all());
        for pair in [[0, 1], [0, 2], [1, 2]] {
            assert_eq!(c.closure(PointSet::from_indices(pair)).unwrap().members, c.all());
        }
        assert!(matches!(c.closure(PointSet::singleton(5)), Err(ConfigError::IndexOutOfRange { .. })));

        let rains = families::rains_configuration(Rationals);
        // e1, e2, e3 close up to include z = e1 + e2 + e3
        let t = rains.closure(PointSet::from_indices([0, 1, 2])).unwrap();
        assert_eq!(t.members.to_vec(), vec![0, 1, 2, 7]);
        assert_eq!(t.span_dim, 2);
    }

    #[test]
    fn lattice_counts() {
        let general = q_config(2, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(general.flats_lattice(16).unwrap().len(), 8);
        assert_eq!(collinear().flats_lattice(16).unwrap().len(), 5);

        let rains = families::rains_configuration(Rationals);
        let lattice = rains.flats_lattice(16).unwrap();
        assert_eq!(lattice.member_sets(), brute_force_flats(&rains));
        assert!(lattice.contains(PointSet::EMPTY) && lattice.contains(rains.all()));
        assert!(matches!(rains.flats_lattice(4), Err(ConfigError::Capacity { .. })));
    }

    #[test]
    fn independence() {
        let rains = families::rains_configuration(Rationals);
        assert!(rains.is_independent(PointSet::EMPTY));
        assert!(rains.is_independent(PointSet::from_indices(0..5)));
        assert!(!collinear().is_independent(collinear().all()));
    }

    #[test]
    fn two_r_examples() {
        let c = collinear();
        let bad = c.two_r_condition(&c.flats_lattice(16).unwrap()).unwrap_err();
        assert_eq!(bad.members, c.all());
        let rains = families::rains_configuration(Rationals);
        assert!(rains.two_r_condition(&rains.flats_lattice(16).unwrap()).is_ok());
        for n in 1..=4 {
            let g = families::gen_general_position(Rationals, n, 2 * n).unwrap();
            assert!(g.two_r_condition(&g.flats_lattice(16).unwrap()).is_ok());
        }
    }

    fn random_config() -> impl Strategy<Value = Configuration<Rationals>> {
        (1usize..=3, 1usize..=7).prop_flat_map(|(n, s)| {
            proptest::collection::vec(proptest::collection::vec(-2i64..=2, n + 1), s)
                .prop_filter_map("invalid", move |pts| Configuration::from_integers(Rationals, n, &pts).ok())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn closure_operator_laws(cfg in random_config(), a in any::<u64>(), b in any::<u64>()) {
            let all = cfg.all();
            let t = PointSet::from_bits(a).intersection(all);
            let u = t.union(PointSet::from_bits(b).intersection(all));
            let ct = cfg.closure(t).unwrap();
            prop_assert!(t.is_subset(ct.members));
            prop_assert!(ct.members.is_subset(cfg.closure(u).unwrap().members));
            prop_assert_eq!(cfg.closure(ct.members).unwrap(), ct);
            prop_assert_eq!(ct.span_dim, cfg.span_dim(t));
        }

        #[test]
        fn lattice_matches_brute_force_and_meets(cfg in random_config()) {
            let lattice = cfg.flats_lattice(16).unwrap();
            prop_assert_eq!(lattice.member_sets(), brute_force_flats(&cfg));
            for x in lattice.iter() {
                for y in lattice.iter() {
                    prop_assert!(lattice.contains(x.members.intersection(y.members)));
                }
            }
        }

        #[test]
        fn relabeling_is_equivariant(cfg in random_config(), seed in any::<u64>()) {
            let s = cfg.len();
            let mut perm: Vec<usize> = (0..s).collect();
            let mut x = seed;
            for i in (1..s).rev() {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (x >> 33) as usize % (i + 1));
            }
            let id = Matrix::identity(Rationals, cfg.dim() + 1);
            let moved = cfg.transform(&id, &perm).unwrap();
            let expected: BTreeSet<_> = cfg.flats_lattice(16).unwrap().iter().map(|f| f.members.relabel(&perm)).collect();
            prop_assert_eq!(moved.flats_lattice(16).unwrap().member_sets(), expected);
        }
    }
}
