//! Families of flats satisfying the extension conditions (*) and (**):
//! checking, saturation, and search.
//!
//! For a family `Λ` of flats of `S`, condition (*) asks that every `T ∈ Λ`
//! other than `S` has a witness `T' ∈ Λ`: nonempty, linearly independent,
//! disjoint from `T`, with `T ∪ T' ∈ Λ`. Condition (**) additionally asks
//! that the span grows by exactly one dimension.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::config::{ConfigError, Configuration, Flat, FlatLattice, DEFAULT_LATTICE_BOUND};
use crate::field::Field;
use crate::pointset::PointSet;

/// Default search budget, in candidate-family checks.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LambdaError {
    #[error("{0} is not a flat of the configuration")]
    NotAFlat(PointSet),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("family violates (*): {0} has no witness")]
    Precondition(PointSet),
    #[error("saturation broke {0}; this is a bug")]
    Internal(&'static str),
}

/// A family of flats of one configuration.
#[derive(Clone, Debug)]
pub struct LambdaSet<'a, F: Field> {
    cfg: &'a Configuration<F>,
    members: BTreeMap<PointSet, Flat>,
}

impl<'a, F: Field> LambdaSet<'a, F> {
    /// Every set is checked to be a flat by computing its closure.
    pub fn new<I: IntoIterator<Item = PointSet>>(cfg: &'a Configuration<F>, sets: I) -> Result<Self, LambdaError> {
        let mut members = BTreeMap::new();
        for t in sets {
            let flat = cfg.closure(t)?;
            if flat.members != t {
                return Err(LambdaError::NotAFlat(t));
            }
            members.insert(t, flat);
        }
        Ok(Self { cfg, members })
    }

    pub fn configuration(&self) -> &'a Configuration<F> {
        self.cfg
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, t: PointSet) -> bool {
        self.members.contains_key(&t)
    }

    pub fn flat(&self, t: PointSet) -> Option<&Flat> {
        self.members.get(&t)
    }

    /// Members in lexicographic index order.
    pub fn sets(&self) -> impl Iterator<Item = PointSet> + '_ {
        self.members.keys().copied()
    }

    pub fn flats(&self) -> impl Iterator<Item = &Flat> + '_ {
        self.members.values()
    }

    pub fn to_vec(&self) -> Vec<PointSet> {
        self.sets().collect()
    }

    /// All valid witnesses for `t`, in lexicographic order.
    pub fn witnesses(&self, t: PointSet, unit_step: bool) -> impl Iterator<Item = Witness> + '_ {
        let t_dim = self.members.get(&t).map(|f| f.span_dim);
        self.members.values().filter_map(move |cand| {
            let t_dim = t_dim?;
            let tp = cand.members;
            if tp.is_empty() || !cand.is_independent() || !tp.is_disjoint(t) {
                return None;
            }
            let union = self.members.get(&t.union(tp))?;
            let inc = union.span_dim - t_dim;
            if unit_step && inc != 1 {
                return None;
            }
            Some(Witness { t, t_prime: tp, union: union.members, span_increment: inc })
        })
    }

    pub fn first_witness(&self, t: PointSet, unit_step: bool) -> Option<Witness> {
        self.witnesses(t, unit_step).next()
    }

    /// The family `{T ∩ S'}` on the sub-configuration `S'`, relabeled to its indices.
    pub fn induced(&self, sub: PointSet) -> Result<(Configuration<F>, Vec<PointSet>), LambdaError> {
        let (restricted, old) = self.cfg.restrict(sub)?;
        let mut new_index = alloc::vec![usize::MAX; self.cfg.len()];
        for (k, &o) in old.iter().enumerate() {
            new_index[o] = k;
        }
        let mut sets: Vec<PointSet> =
            self.sets().map(|t| PointSet::from_indices(t.intersection(sub).iter().map(|i| new_index[i]))).collect();
        sets.sort();
        sets.dedup();
        Ok((restricted, sets))
    }
}

/// `T'` witnessing (*) or (**) for `T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Witness {
    pub t: PointSet,
    pub t_prime: PointSet,
    pub union: PointSet,
    /// `span_dim(T ∪ T') - span_dim(T)`.
    pub span_increment: isize,
}

/// Checks (*): one witness per member other than `S`, else the first member without one.
pub fn check_star<F: Field>(lambda: &LambdaSet<'_, F>) -> Result<Vec<Witness>, PointSet> {
    check(lambda, false)
}

/// Checks (**).
pub fn check_star_star<F: Field>(lambda: &LambdaSet<'_, F>) -> Result<Vec<Witness>, PointSet> {
    check(lambda, true)
}

fn check<F: Field>(lambda: &LambdaSet<'_, F>, unit_step: bool) -> Result<Vec<Witness>, PointSet> {
    let all = lambda.cfg.all();
    lambda.sets().filter(|&t| t != all).map(|t| lambda.first_witness(t, unit_step).ok_or(t)).collect()
}

/// Closes a (*)-family under the augmentations that preserve (*): all subsets
/// of independent members, `closure(T ∪ {p})` for every witness `T'` of `T`
/// and `p ∈ T'`, and pairwise intersections. The result satisfies (**).
pub fn saturate<'a, F: Field>(lambda: &LambdaSet<'a, F>) -> Result<LambdaSet<'a, F>, LambdaError> {
    check_star(lambda).map_err(LambdaError::Precondition)?;
    let cfg = lambda.cfg;
    let all = cfg.all();
    let mut cur = lambda.clone();
    loop {
        let mut added: BTreeMap<PointSet, Flat> = BTreeMap::new();
        for f in cur.flats().filter(|f| f.is_independent()) {
            for sub in f.members.subsets() {
                if !cur.contains(sub) {
                    added.insert(sub, Flat { members: sub, span_dim: sub.len() as isize - 1 });
                }
            }
        }
        if added.is_empty() {
            for t in cur.sets().filter(|&t| t != all) {
                for w in cur.witnesses(t, false) {
                    for p in w.t_prime.iter() {
                        let t1 = cfg.closure(t.with(p))?;
                        if !cur.contains(t1.members) {
                            added.insert(t1.members, t1);
                        }
                    }
                }
            }
        }
        if added.is_empty() {
            // one intersection at a time, taking the largest first factor so that
            // every strictly larger member already meets the second one inside Λ
            let mut best: Option<(usize, PointSet)> = None;
            for a in cur.sets() {
                for b in cur.sets() {
                    let m = a.intersection(b);
                    if !cur.contains(m) && best.is_none_or(|(n, _)| a.len() > n) {
                        best = Some((a.len(), m));
                    }
                }
            }
            if let Some((_, m)) = best {
                added.insert(m, cfg.closure(m)?);
            }
        }
        if added.is_empty() {
            break;
        }
        cur.members.extend(added);
    }
    if check_star(&cur).is_err() {
        return Err(LambdaError::Internal("(*)"));
    }
    if check_star_star(&cur).is_err() {
        return Err(LambdaError::Internal("(**)"));
    }
    Ok(cur)
}

/// Which structured family produced a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hypothesis {
    /// `S` itself is linearly independent; `Λ = {∅, S}`.
    IndependentSet,
    /// `S = S1 ⊔ S2` with both parts independent flats; `Λ = {S1, S2, S}`.
    TwoBlockSplit { blocks: [PointSet; 2] },
    /// `S = S1 ⊔ .. ⊔ Sm` with every run `Si ⊔ .. ⊔ Sj` a flat.
    ConsecutiveChain { blocks: Vec<PointSet> },
    /// `S = S0 ⊔ S1 ⊔ S2 ⊔ S3` with each `Si` and each `S0 ⊔ Si ⊔ Sj` a flat.
    ThreePlanes { blocks: [PointSet; 4] },
    /// `S = S1 ⊔ .. ⊔ Sm` with every union of blocks a flat.
    HyperplaneUnions { blocks: Vec<PointSet> },
    /// The largest family satisfying (*), found by pruning the whole lattice.
    MaximalFamily,
}

impl Hypothesis {
    pub fn name(&self) -> &'static str {
        match self {
            Hypothesis::IndependentSet => "independent set",
            Hypothesis::TwoBlockSplit { .. } => "two-block split",
            Hypothesis::ConsecutiveChain { .. } => "consecutive-union chain",
            Hypothesis::ThreePlanes { .. } => "three-plane pattern",
            Hypothesis::HyperplaneUnions { .. } => "hyperplane unions",
            Hypothesis::MaximalFamily => "maximal (*) family",
        }
    }

    pub fn is_template(&self) -> bool {
        !matches!(self, Hypothesis::MaximalFamily)
    }

    pub fn blocks(&self) -> Vec<PointSet> {
        match self {
            Hypothesis::IndependentSet | Hypothesis::MaximalFamily => Vec::new(),
            Hypothesis::TwoBlockSplit { blocks } => blocks.to_vec(),
            Hypothesis::ThreePlanes { blocks } => blocks.to_vec(),
            Hypothesis::ConsecutiveChain { blocks } | Hypothesis::HyperplaneUnions { blocks } => blocks.clone(),
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        for (i, b) in self.blocks().iter().enumerate() {
            write!(f, "{}S{}={}", if i == 0 { ": " } else { " " }, i, b)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum number of candidate-family checks.
    pub budget: u64,
    /// Skip the exhaustive lattice fallback.
    pub templates_only: bool,
    pub lattice_bound: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET, templates_only: false, lattice_bound: DEFAULT_LATTICE_BOUND }
    }
}

#[derive(Clone, Debug)]
pub enum SearchOutcome<'a, F: Field> {
    Found { lambda: LambdaSet<'a, F>, hypothesis: Hypothesis, witnesses: Vec<Witness>, budget_used: u64 },
    /// `exhaustive`: no family with more than one member satisfies (*).
    /// Otherwise the search stopped on its budget or skipped the fallback.
    NotFound { exhaustive: bool, budget_used: u64 },
}

impl<F: Field> SearchOutcome<'_, F> {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found { .. })
    }
}

struct Search<'a, 'l, F: Field> {
    cfg: &'a Configuration<F>,
    lattice: &'l FlatLattice,
    budget: u64,
    used: u64,
}

enum Step<T> {
    Hit(T),
    Miss,
    OutOfBudget,
}

impl<'a, F: Field> Search<'a, '_, F> {
    fn spend(&mut self) -> bool {
        if self.used >= self.budget {
            return false;
        }
        self.used += 1;
        true
    }

    fn is_flat(&self, t: PointSet) -> bool {
        self.lattice.contains(t)
    }

    fn independent_flat(&self, t: PointSet) -> bool {
        self.lattice.get(t).is_some_and(|f| f.is_independent())
    }

    fn attempt(&mut self, sets: Vec<PointSet>) -> Step<(LambdaSet<'a, F>, Vec<Witness>)> {
        if !self.spend() {
            return Step::OutOfBudget;
        }
        let Ok(lambda) = LambdaSet::new(self.cfg, sets) else {
            return Step::Miss;
        };
        if lambda.len() < 2 {
            return Step::Miss;
        }
        match check_star(&lambda) {
            Ok(w) => Step::Hit((lambda, w)),
            Err(_) => Step::Miss,
        }
    }

    /// Independent flats whose complement is also a flat.
    fn coflat_blocks(&self) -> Vec<PointSet> {
        let all = self.cfg.all();
        self.lattice
            .iter()
            .filter(|f| !f.members.is_empty() && f.members != all && f.is_independent())
            .filter(|f| self.is_flat(all.difference(f.members)))
            .map(|f| f.members)
            .collect()
    }

    fn split(&mut self) -> Step<(LambdaSet<'a, F>, Vec<Witness>, Hypothesis)> {
        let all = self.cfg.all();
        for s1 in self.coflat_blocks().into_iter().filter(|b| b.contains(0)) {
            let s2 = all.difference(s1);
            if !self.independent_flat(s2) {
                continue;
            }
            match self.attempt(alloc::vec![s1, s2, all]) {
                Step::Hit((l, w)) => return Step::Hit((l, w, Hypothesis::TwoBlockSplit { blocks: [s1, s2] })),
                Step::OutOfBudget => return Step::OutOfBudget,
                Step::Miss => {}
            }
        }
        Step::Miss
    }

    fn independent(&mut self) -> Step<(LambdaSet<'a, F>, Vec<Witness>, Hypothesis)> {
        let all = self.cfg.all();
        if all.is_empty() || !self.cfg.is_independent(all) {
            return Step::Miss;
        }
        match self.attempt(alloc::vec![PointSet::EMPTY, all]) {
            Step::Hit((l, w)) => Step::Hit((l, w, Hypothesis::IndependentSet)),
            Step::OutOfBudget => Step::OutOfBudget,
            Step::Miss => Step::Miss,
        }
    }

    fn chain(&mut self) -> Step<(LambdaSet<'a, F>, Vec<Witness>, Hypothesis)> {
        let ends = self.coflat_blocks();
        let inner: Vec<PointSet> = self
            .lattice
            .iter()
            .filter(|f| !f.members.is_empty() && f.is_independent())
            .map(|f| f.members)
            .collect();
        let mut blocks = Vec::new();
        for &first in &ends {
            blocks.push(first);
            let r = self.extend_chain(&mut blocks, &inner, &ends);
            blocks.pop();
            match r {
                Step::Miss => {}
                other => return other,
            }
        }
        Step::Miss
    }

    fn extend_chain(
        &mut self,
        blocks: &mut Vec<PointSet>,
        inner: &[PointSet],
        ends: &[PointSet],
    ) -> Step<(LambdaSet<'a, F>, Vec<Witness>, Hypothesis)> {
        let all = self.cfg.all();
        let used = blocks.iter().fold(PointSet::EMPTY, |a, b| a.union(*b));
        for &b in inner {
            if !b.is_disjoint(used) {
                continue;
            }
            if !self.spend() {
                return Step::OutOfBudget;
            }
            // every run ending in the new block must be a flat
            let mut run = b;
            let ok = blocks.iter().rev().all(|prev| {
                run = run.union(*prev);
                self.is_flat(run)
            });
            if !ok {
                continue;
            }
            let covered = used.union(b);
            blocks.push(b);
            let r = if covered == all {
                if blocks.len() >= 3 && ends.contains(&b) {
                    let mut sets = Vec::new();
                    for i in 0..blocks.len() {
                        let mut acc = PointSet::EMPTY;
                        for blk in &blocks[i..] {
                            acc = acc.union(*blk);
                            sets.push(acc);
                        }
                    }
                    match self.attempt(sets) {
                        Step::Hit((l, w)) => {
                            Step::Hit((l, w, Hypothesis::ConsecutiveChain { blocks: blocks.clone() }))
                        }
                        other => other.map_miss(),
                    }
                } else {
                    Step::Miss
                }
            } else if self.is_flat(all.difference(covered)) {
                // the remaining blocks form a run too
                self.extend_chain(blocks, inner, ends)
            } else {
                Step::Miss
            };
            blocks.pop();
            match r {
                Step::Miss => {}
                other => return other,
            }
        }
        Step::Miss
    }

    fn three_planes(&mut self) -> Step<(LambdaSet<'a, F>, Vec<Witness>, Hypothesis)> {
        let all = self.cfg.all();
        let c = self.coflat_blocks();
        for (i, &s1) in c.iter().enumerate() {
            for (j, &s2) in c.iter().enumerate().skip(i + 1) {
                if !s1.is_disjoint(s2) {
                    continue;
                }
                for &s3 in c.iter().skip(j + 1) {
                    if !s3.is_disjoint(s1.union(s2)) {
                        continue;
                    }
                    let s0 = all.difference(s1.union(s2).union(s3));
                    if !self.independent_flat(s0) {
                        continue;
                    }
                    let mut sets = alloc::vec![s0, s1, s2, s3, all];
                    for s in [s1, s2, s3] {
                        sets.push(s0.union(s));
                    }
                    for (a, b) in [(s1, s2), (s1, s3), (s2, s3)] {
                        sets.push(s0.union(a).union(b));
                    }
                    match self.attempt(sets) {
                        Step::Hit((l, w)) => {
                            return Step::Hit((l, w, Hypothesis::ThreePlanes { blocks: [s0, s1, s2, s3] }))
                        }
                        Step::OutOfBudget => return Step::OutOfBudget,
                        Step::Miss => {}
                    }
                }
            }
        }
        Step::Miss
    }

    fn unions(&mut self) -> Step<(LambdaSet<'a, F>, Vec<Witness>, Hypothesis)> {
        let c = self.coflat_blocks();
        let mut blocks = Vec::new();
        self.extend_unions(&mut blocks, &c)
    }

    fn extend_unions(
        &mut self,
        blocks: &mut Vec<PointSet>,
        cands: &[PointSet],
    ) -> Step<(LambdaSet<'a, F>, Vec<Witness>, Hypothesis)> {
        let all = self.cfg.all();
        let used = blocks.iter().fold(PointSet::EMPTY, |a, b| a.union(*b));
        if used == all {
            if blocks.len() < 3 {
                return Step::Miss;
            }
            let m = blocks.len();
            let sets: Vec<PointSet> = (0u64..(1 << m))
                .map(|mask| {
                    (0..m).filter(|k| mask & (1 << k) != 0).fold(PointSet::EMPTY, |a, k| a.union(blocks[k]))
                })
                .collect();
            return match self.attempt(sets) {
                Step::Hit((l, w)) => Step::Hit((l, w, Hypothesis::HyperplaneUnions { blocks: blocks.clone() })),
                other => other.map_miss(),
            };
        }
        let first_free = all.difference(used).min().expect("nonempty");
        for &b in cands {
            if !b.contains(first_free) || !b.is_disjoint(used) {
                continue;
            }
            if !self.spend() {
                return Step::OutOfBudget;
            }
            // every union involving the new block must be a flat
            let k = blocks.len();
            let ok = (0u64..(1 << k)).all(|mask| {
                let u = (0..k).filter(|i| mask & (1 << i) != 0).fold(b, |a, i| a.union(blocks[i]));
                self.is_flat(u)
            });
            if !ok {
                continue;
            }
            blocks.push(b);
            let r = self.extend_unions(blocks, cands);
            blocks.pop();
            match r {
                Step::Miss => {}
                other => return other,
            }
        }
        Step::Miss
    }

    /// Greatest family satisfying (*): repeatedly drop members without a witness.
    fn maximal_family(&mut self) -> Step<(LambdaSet<'a, F>, Vec<Witness>, Hypothesis)> {
        let all = self.cfg.all();
        let mut lambda = LambdaSet { cfg: self.cfg, members: self.lattice.iter().map(|f| (f.members, *f)).collect() };
        loop {
            if !self.spend() {
                return Step::OutOfBudget;
            }
            let dead: Vec<PointSet> =
                lambda.sets().filter(|&t| t != all && lambda.first_witness(t, false).is_none()).collect();
            if dead.is_empty() {
                break;
            }
            for t in dead {
                lambda.members.remove(&t);
            }
        }
        if lambda.len() < 2 {
            return Step::Miss;
        }
        match check_star(&lambda) {
            Ok(w) => Step::Hit((lambda, w, Hypothesis::MaximalFamily)),
            Err(_) => Step::Miss,
        }
    }
}

impl<T> Step<T> {
    fn map_miss<U>(self) -> Step<U> {
        match self {
            Step::OutOfBudget => Step::OutOfBudget,
            _ => Step::Miss,
        }
    }
}

/// Looks for a family with more than one member satisfying (*): structured
/// templates first, then the maximal-family fallback over the full lattice.
pub fn search_lambda<'a, F: Field>(
    cfg: &'a Configuration<F>,
    opts: SearchOptions,
) -> Result<SearchOutcome<'a, F>, LambdaError> {
    let lattice = cfg.flats_lattice(opts.lattice_bound)?;
    let mut search = Search { cfg, lattice: &lattice, budget: opts.budget, used: 0 };
    type Stage<'a, 'l, F> = fn(&mut Search<'a, 'l, F>) -> Step<(LambdaSet<'a, F>, Vec<Witness>, Hypothesis)>;
    let mut stages: Vec<Stage<'a, '_, F>> =
        alloc::vec![Search::split, Search::independent, Search::chain, Search::three_planes, Search::unions];
    if !opts.templates_only {
        stages.push(Search::maximal_family);
    }
    for stage in stages {
        match stage(&mut search) {
            Step::Hit((lambda, witnesses, hypothesis)) => {
                return Ok(SearchOutcome::Found { lambda, hypothesis, witnesses, budget_used: search.used })
            }
            Step::OutOfBudget => return Ok(SearchOutcome::NotFound { exhaustive: false, budget_used: search.used }),
            Step::Miss => {}
        }
    }
    Ok(SearchOutcome::NotFound { exhaustive: !opts.templates_only, budget_used: search.used })
}
