//! Verification, completion and bounded search of faithful orthogonal
//! representations: vectors orthogonal within every context, no two atoms
//! collinear.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use thiserror::Error;

use crate::exact::{
    complete_context, inner, inner_float, is_decomposable, normalize_projective, Coordinatization,
    ExactError, Field, Representation, Scalar, Vector,
};
use crate::hypergraph::{AtomId, Hypergraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("floating-point coordinatizations need a tolerance")]
    NeedsTolerance,
    #[error("representation dimension {dim} differs from the rank {rank}")]
    RankMismatch { dim: usize, rank: usize },
    #[error("no vector for intertwining atom {0:?}")]
    MissingIntertwiningVector(String),
    #[error("bad alphabet: {0}")]
    BadAlphabet(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VerifyMode {
    Exact,
    /// Absolute tolerance on normalized overlaps.
    Approx(f64),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerifyReport {
    /// Pairs in a common context whose vectors are not orthogonal.
    pub non_orthogonal: Vec<(AtomId, AtomId)>,
    /// Distinct atoms with collinear vectors.
    pub collinear: Vec<(AtomId, AtomId)>,
    /// Atoms without a vector.
    pub missing: Vec<AtomId>,
}

impl VerifyReport {
    /// Faithful and orthogonal on the atoms that have vectors.
    pub fn passes(&self) -> bool {
        self.non_orthogonal.is_empty() && self.collinear.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.passes() && self.missing.is_empty()
    }

    pub fn to_json(&self, h: &Hypergraph) -> serde_json::Value {
        let pairs = |ps: &[(AtomId, AtomId)]| -> Vec<[String; 2]> {
            ps.iter().map(|&(a, b)| [h.label(a).to_owned(), h.label(b).to_owned()]).collect()
        };
        serde_json::json!({
            "passes": self.passes(),
            "complete": self.is_complete(),
            "non_orthogonal": pairs(&self.non_orthogonal),
            "collinear": pairs(&self.collinear),
            "missing": self.missing.iter().map(|&a| h.label(a)).collect::<Vec<_>>(),
        })
    }
}

fn context_pairs(h: &Hypergraph) -> BTreeSet<(AtomId, AtomId)> {
    let mut out = BTreeSet::new();
    for c in h.contexts() {
        for (i, &a) in c.atoms().iter().enumerate() {
            for &b in &c.atoms()[i + 1..] {
                out.insert((a.min(b), a.max(b)));
            }
        }
    }
    out
}

/// Checks in-context orthogonality and faithfulness on the mapped atoms.
pub fn verify_for(h: &Hypergraph, rep: &Coordinatization, mode: VerifyMode) -> Result<VerifyReport, SearchError> {
    match (rep, mode) {
        (Coordinatization::Exact(r), VerifyMode::Exact) => verify_exact(h, r),
        (Coordinatization::Float(_), VerifyMode::Exact) => Err(SearchError::NeedsTolerance),
        (_, VerifyMode::Approx(tol)) => {
            let f = rep.to_float();
            if f.dim != h.rank() {
                return Err(SearchError::RankMismatch { dim: f.dim, rank: h.rank() });
            }
            Ok(verify_float(h, &f.vectors, tol))
        }
    }
}

fn verify_exact(h: &Hypergraph, r: &Representation) -> Result<VerifyReport, SearchError> {
    if r.dim() != h.rank() {
        return Err(SearchError::RankMismatch { dim: r.dim(), rank: h.rank() });
    }
    let mut report = VerifyReport::default();
    for (a, b) in context_pairs(h) {
        if let (Some(u), Some(v)) = (r.get(a), r.get(b)) {
            if !inner(u, v)?.is_zero() {
                report.non_orthogonal.push((a, b));
            }
        }
    }
    let normalized: Vec<(AtomId, Vector)> =
        r.iter().map(|(a, v)| Ok((a, normalize_projective(v)?))).collect::<Result<_, ExactError>>()?;
    let mut seen: HashMap<&Vector, Vec<AtomId>> = HashMap::new();
    for (a, n) in &normalized {
        seen.entry(n).or_default().push(*a);
    }
    for group in seen.values().filter(|g| g.len() > 1) {
        for (i, &a) in group.iter().enumerate() {
            for &b in &group[i + 1..] {
                report.collinear.push((a.min(b), a.max(b)));
            }
        }
    }
    report.collinear.sort();
    report.missing = h.atoms().filter(|&a| r.get(a).is_none()).collect();
    Ok(report)
}

fn verify_float(h: &Hypergraph, vs: &std::collections::BTreeMap<AtomId, Vec<Complex64>>, tol: f64) -> VerifyReport {
    let unit = |v: &Vec<Complex64>| {
        let n = inner_float(v, v).re.sqrt();
        v.iter().map(|x| x / n).collect::<Vec<_>>()
    };
    let units: std::collections::BTreeMap<AtomId, Vec<Complex64>> = vs.iter().map(|(&a, v)| (a, unit(v))).collect();
    let mut report = VerifyReport::default();
    for (a, b) in context_pairs(h) {
        if let (Some(u), Some(v)) = (units.get(&a), units.get(&b)) {
            if inner_float(u, v).norm() > tol {
                report.non_orthogonal.push((a, b));
            }
        }
    }
    let atoms: Vec<&AtomId> = units.keys().collect();
    for (i, &&a) in atoms.iter().enumerate() {
        for &&b in &atoms[i + 1..] {
            if 1.0 - inner_float(&units[&a], &units[&b]).norm() <= tol {
                report.collinear.push((a, b));
            }
        }
    }
    report.missing = h.atoms().filter(|a| !vs.contains_key(a)).collect();
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompletionError {
    /// Forced (one-dimensional) completions land on vectors already in use.
    #[error("forced duplicity: {pairs:?}")]
    ForcedDuplicity { pairs: Vec<(AtomId, AtomId)> },
    #[error("inconsistent: {0}")]
    Inconsistent(String),
}

/// Powers of `3 + 4i`, as integer cosine/sine pairs of a rotation.
fn rotation(k: u32) -> (Scalar, Scalar) {
    let (mut a, mut b) = (1i64, 0i64);
    let mut big = (Scalar::one(), Scalar::zero());
    for _ in 0..k {
        match (a.checked_mul(3), b.checked_mul(4), a.checked_mul(4), b.checked_mul(3)) {
            (Some(a3), Some(b4), Some(a4), Some(b3)) => {
                (a, b) = (a3 - b4, a4 + b3);
                big = (Scalar::int(a), Scalar::int(b));
            }
            _ => {
                let (x, y) = big.clone();
                big = (&(&x * &Scalar::int(3)) - &(&y * &Scalar::int(4)), &(&x * &Scalar::int(4)) + &(&y * &Scalar::int(3)));
            }
        }
    }
    big
}

/// Rotates the plane of the orthogonal pair `(w1, w2)` by the `k`-th rotation.
fn rotate_pair(w1: &Vector, w2: &Vector, k: u32) -> Result<(Vector, Vector), ExactError> {
    let (a, b) = rotation(k);
    let (n1, n2) = (inner(w1, w1)?, inner(w2, w2)?);
    // x = a·w1 + b·w2 and y = −b·n2·w1 + a·n1·w2 stay orthogonal
    let x = w1.scale(&a)?.try_add(&w2.scale(&b)?)?;
    let y = w1.scale(&-&(&b * &n2))?.try_add(&w2.scale(&(&a * &n1))?)?;
    Ok((normalize_projective(&x)?, normalize_projective(&y)?))
}

const MAX_ROTATIONS: u32 = 64;

/// Extends `rep` to every atom, one context at a time, most-constrained
/// context first. One-dimensional completions are forced and any collision
/// with an existing vector is collected. Wider completions start from the
/// canonical complement basis and are rotated by powers of `(3+4i)/5` until no
/// collision remains.
pub fn complete_representation(h: &Hypergraph, rep: &Representation) -> Result<Representation, CompletionError> {
    let inconsistent = |e: ExactError| CompletionError::Inconsistent(e.to_string());
    if rep.dim() != h.rank() {
        return Err(CompletionError::Inconsistent(format!("dimension {} for rank {}", rep.dim(), h.rank())));
    }
    let mut out = rep.clone();
    let mut duplicities = Vec::new();
    let mut normalized: HashMap<Vector, AtomId> = HashMap::new();
    for (a, v) in rep.iter() {
        normalized.insert(normalize_projective(v).map_err(inconsistent)?, a);
    }

    loop {
        let next = h
            .contexts()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.atoms().iter().any(|&a| out.get(a).is_none()))
            .max_by_key(|(ci, c)| (c.atoms().iter().filter(|&&a| out.get(a).is_some()).count(), std::cmp::Reverse(*ci)));
        let Some((ci, ctx)) = next else { break };
        let given: Vec<Vector> = ctx.atoms().iter().filter_map(|&a| out.get(a).cloned()).collect();
        let open: Vec<AtomId> = ctx.atoms().iter().copied().filter(|&a| out.get(a).is_none()).collect();
        let basis = complete_context(&given, h.rank())
            .map_err(|e| CompletionError::Inconsistent(format!("context {ci}: {e}")))?;

        let chosen = if basis.len() == 1 {
            basis
        } else {
            let collides = |ws: &[Vector]| ws.iter().any(|w| normalized.contains_key(w));
            let mut ws = basis.clone();
            let mut k = 0;
            while collides(&ws) {
                k += 1;
                if k > MAX_ROTATIONS {
                    return Err(CompletionError::Inconsistent(format!("context {ci}: no rotation avoids existing vectors")));
                }
                ws = basis.clone();
                for i in 0..ws.len() - 1 {
                    let (x, y) = rotate_pair(&ws[i], &ws[i + 1], k).map_err(inconsistent)?;
                    ws[i] = x;
                    ws[i + 1] = y;
                }
            }
            ws
        };
        for (atom, w) in open.into_iter().zip(chosen) {
            if let Some(&other) = normalized.get(&w) {
                duplicities.push((atom, other));
            } else {
                normalized.insert(w.clone(), atom);
            }
            out.insert(atom, w).map_err(inconsistent)?;
        }
    }
    if duplicities.is_empty() {
        Ok(out)
    } else {
        Err(CompletionError::ForcedDuplicity { pairs: duplicities })
    }
}

/// Component values for candidate vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentAlphabet {
    scalars: Vec<Scalar>,
    field: Field,
}

impl ComponentAlphabet {
    pub fn new(scalars: Vec<Scalar>) -> Result<Self, SearchError> {
        let mut seen = HashSet::new();
        let scalars: Vec<Scalar> = scalars.into_iter().filter(|s| seen.insert(s.clone())).collect();
        if !scalars.iter().any(Scalar::is_zero) {
            return Err(SearchError::BadAlphabet("alphabet must contain 0".into()));
        }
        if scalars.len() < 2 {
            return Err(SearchError::BadAlphabet("alphabet needs a nonzero element".into()));
        }
        let field = scalars.iter().try_fold(Field::Rational, |f, s| f.join(s.field()))?;
        Ok(ComponentAlphabet { scalars, field })
    }

    /// Comma-separated scalars, e.g. `"0,1,-2,r2"`.
    pub fn parse(text: &str) -> Result<Self, SearchError> {
        let scalars = text
            .split(',')
            .map(|t| t.parse::<Scalar>().map_err(|e| SearchError::BadAlphabet(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(scalars)
    }

    pub fn scalars(&self) -> &[Scalar] {
        &self.scalars
    }

    pub fn field(&self) -> Field {
        self.field
    }
}

/// Hard cap on the number of raw candidate vectors.
pub const CANDIDATE_CAP: u64 = 10_000_000;

/// All nonzero vectors over the alphabet, one per projective class, in
/// odometer order (last component fastest). Each class is represented by the
/// first vector generated for it.
pub fn candidate_pool(alphabet: &ComponentAlphabet, dim: usize) -> Option<Vec<Vector>> {
    let k = alphabet.scalars.len() as u64;
    let raw = k.checked_pow(dim as u32)?;
    if raw > CANDIDATE_CAP {
        return None;
    }
    let mut seen = HashSet::new();
    let mut pool = Vec::new();
    let mut idx = vec![0usize; dim];
    loop {
        let v = Vector::new(idx.iter().map(|&i| alphabet.scalars[i].clone()).collect());
        if !v.is_zero() {
            let n = normalize_projective(&v).expect("nonzero");
            if seen.insert(n) {
                pool.push(v);
            }
        }
        // odometer
        let mut pos = dim;
        loop {
            if pos == 0 {
                return Some(pool);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < alphabet.scalars.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum SearchScope {
    #[default]
    All,
    /// Only atoms in two or more contexts.
    Intertwining,
    Atoms(Vec<AtomId>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum number of candidate assignments tried.
    pub budget: u64,
    pub scope: SearchScope,
    /// Restrict candidates to tensor-decomposable vectors (dimension 4).
    pub decomposable_only: bool,
    pub workers: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: 1_000_000, scope: SearchScope::All, decomposable_only: false, workers: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Representation),
    /// Every candidate combination was tried. Evidence over this alphabet, not a
    /// proof that no representation exists.
    Exhausted,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub outcome: SearchOutcome,
    pub nodes: u64,
    pub pool_size: usize,
    pub elapsed: Duration,
}

impl SearchReport {
    pub fn outcome_name(&self) -> &'static str {
        match self.outcome {
            SearchOutcome::Found(_) => "found",
            SearchOutcome::Exhausted => "exhausted",
            SearchOutcome::BudgetExceeded => "budget_exceeded",
        }
    }
}

type Bitset = Vec<u64>;

fn ones(b: &Bitset) -> impl Iterator<Item = usize> + '_ {
    b.iter().enumerate().flat_map(|(w, &word)| (0..64).filter(move |k| word >> k & 1 == 1).map(move |k| w * 64 + k))
}

struct Problem<'a> {
    pool: &'a [Vector],
    base: Bitset,
    /// For each position in the order, earlier positions sharing a context.
    neighbors: Vec<Vec<usize>>,
}

enum Step {
    Found,
    Exhausted,
    Exceeded,
}

struct Searcher<'a> {
    p: &'a Problem<'a>,
    orth: HashMap<usize, Bitset>,
    assigned: Vec<usize>,
    used: Bitset,
    nodes: u64,
    budget: u64,
}

impl Searcher<'_> {
    fn orthogonal_to(&mut self, c: usize) -> &Bitset {
        let pool = self.p.pool;
        self.orth.entry(c).or_insert_with(|| {
            let mut b = vec![0u64; pool.len().div_ceil(64)];
            for (j, w) in pool.iter().enumerate() {
                if inner(&pool[c], w).map(|s| s.is_zero()).unwrap_or(false) {
                    b[j / 64] |= 1 << (j % 64);
                }
            }
            b
        })
    }

    fn dfs(&mut self, i: usize) -> Step {
        if i == self.p.neighbors.len() {
            return Step::Found;
        }
        let mut allowed: Bitset = self.p.base.iter().zip(&self.used).map(|(b, u)| b & !u).collect();
        for j in self.p.neighbors[i].clone() {
            let c = self.assigned[j];
            let o = self.orthogonal_to(c);
            allowed.iter_mut().zip(o).for_each(|(a, o)| *a &= o);
        }
        for c in ones(&allowed).collect::<Vec<_>>() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Step::Exceeded;
            }
            self.assigned.push(c);
            self.used[c / 64] |= 1 << (c % 64);
            match self.dfs(i + 1) {
                Step::Found => return Step::Found,
                Step::Exceeded => return Step::Exceeded,
                Step::Exhausted => {}
            }
            self.assigned.pop();
            self.used[c / 64] &= !(1 << (c % 64));
        }
        Step::Exhausted
    }
}

/// Result of the subtree under one first-atom candidate.
struct Subtree {
    step: Step,
    nodes: u64,
    assigned: Vec<usize>,
}

fn run_subtree(p: &Problem, first: usize, budget: u64) -> Subtree {
    let mut used = vec![0u64; p.pool.len().div_ceil(64)];
    used[first / 64] |= 1 << (first % 64);
    let mut s = Searcher { p, orth: HashMap::new(), assigned: vec![first], used, nodes: 1, budget };
    let step = if budget == 0 { Step::Exceeded } else { s.dfs(1) };
    Subtree { step, nodes: s.nodes.min(budget), assigned: s.assigned }
}

fn search_order(h: &Hypergraph, scope: &SearchScope) -> Vec<AtomId> {
    let mut atoms: Vec<AtomId> = match scope {
        SearchScope::All => h.atoms().collect(),
        SearchScope::Intertwining => h.intertwining_atoms().into_iter().collect(),
        SearchScope::Atoms(a) => {
            let set: BTreeSet<AtomId> = a.iter().copied().collect();
            set.into_iter().collect()
        }
    };
    // highest degree first, ties in atom order (stable sort)
    atoms.sort_by_key(|&a| std::cmp::Reverse(h.degree(a)));
    atoms
}

/// Backtracking search for a faithful orthogonal representation over the
/// atoms in scope, with components drawn from `alphabet`.
///
/// The result does not depend on `opts.workers`: subtrees of the first atom's
/// candidates may run in parallel, but their results are combined in
/// candidate order against one node budget, exactly as a sequential run.
pub fn search(h: &Hypergraph, alphabet: &ComponentAlphabet, dim: usize, opts: &SearchOptions) -> Result<SearchReport, SearchError> {
    let start = Instant::now();
    if dim != h.rank() {
        return Err(SearchError::RankMismatch { dim, rank: h.rank() });
    }
    let report = |outcome, nodes, pool_size| SearchReport { outcome, nodes, pool_size, elapsed: start.elapsed() };
    let Some(pool) = candidate_pool(alphabet, dim) else {
        return Ok(report(SearchOutcome::BudgetExceeded, 0, 0));
    };
    let mut base = vec![0u64; pool.len().div_ceil(64)];
    for (i, v) in pool.iter().enumerate() {
        let keep = !opts.decomposable_only || is_decomposable(v)?;
        if keep {
            base[i / 64] |= 1 << (i % 64);
        }
    }
    let order = search_order(h, &opts.scope);
    let neighbors: Vec<Vec<usize>> = order
        .iter()
        .enumerate()
        .map(|(i, &a)| (0..i).filter(|&j| h.adjacent(a, order[j])).collect())
        .collect();
    let problem = Problem { pool: &pool, base: base.clone(), neighbors };

    let firsts: Vec<usize> = ones(&base).collect();
    if order.is_empty() {
        return Ok(report(SearchOutcome::Found(Representation::new(alphabet.field(), dim)), 0, pool.len()));
    }

    let finish = |assigned: &[usize]| -> Result<Representation, SearchError> {
        let mut rep = Representation::new(alphabet.field(), dim);
        for (pos, &c) in assigned.iter().enumerate() {
            rep.insert(order[pos], pool[c].clone())?;
        }
        Ok(rep)
    };

    let exec = Executor::new(opts.workers);
    let mut consumed = 0u64;
    for batch in firsts.chunks(exec.batch()) {
        // every subtree in a batch gets the budget left at the start of the
        // batch; replaying them in order reproduces the sequential run
        for sub in exec.run(&problem, batch, opts.budget - consumed) {
            let remaining = opts.budget - consumed;
            match sub.step {
                Step::Exceeded => return Ok(report(SearchOutcome::BudgetExceeded, opts.budget, pool.len())),
                _ if sub.nodes > remaining => return Ok(report(SearchOutcome::BudgetExceeded, opts.budget, pool.len())),
                Step::Found => {
                    let rep = finish(&sub.assigned)?;
                    debug_assert!(verify_exact(h, &rep).map(|r| r.passes()).unwrap_or(false));
                    return Ok(report(SearchOutcome::Found(rep), consumed + sub.nodes, pool.len()));
                }
                Step::Exhausted => consumed += sub.nodes,
            }
        }
    }
    Ok(report(SearchOutcome::Exhausted, consumed, pool.len()))
}

struct Executor {
    #[cfg(feature = "parallel")]
    pool: Option<rayon::ThreadPool>,
    workers: usize,
}

impl Executor {
    fn new(workers: usize) -> Self {
        let workers = if cfg!(feature = "parallel") { workers.max(1) } else { 1 };
        Executor {
            #[cfg(feature = "parallel")]
            pool: (workers > 1)
                .then(|| rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool")),
            workers,
        }
    }

    fn batch(&self) -> usize {
        self.workers
    }

    fn run(&self, p: &Problem, firsts: &[usize], budget: u64) -> Vec<Subtree> {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            use rayon::prelude::*;
            return pool.install(|| firsts.par_iter().map(|&f| run_subtree(p, f, budget)).collect());
        }
        firsts.iter().map(|&f| run_subtree(p, f, budget)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecompositionKind {
    FullyDecomposable,
    FullyIndecomposable,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionProfile {
    pub decomposable: Vec<AtomId>,
    pub indecomposable: Vec<AtomId>,
    pub kind: DecompositionKind,
}

/// Splits all mapped atoms by tensor decomposability (dimension 4).
pub fn classify_decomposability(rep: &Representation) -> Result<(Vec<AtomId>, Vec<AtomId>), ExactError> {
    let (mut dec, mut ind) = (Vec::new(), Vec::new());
    for (a, v) in rep.iter() {
        if is_decomposable(v)? {
            dec.push(a);
        } else {
            ind.push(a);
        }
    }
    Ok((dec, ind))
}

/// Decomposability of the intertwining atoms' vectors.
pub fn decomposability_profile(h: &Hypergraph, rep: &Representation) -> Result<DecompositionProfile, SearchError> {
    if rep.dim() != 4 {
        return Err(ExactError::WrongDimension { expected: 4, found: rep.dim() }.into());
    }
    let (mut decomposable, mut indecomposable) = (Vec::new(), Vec::new());
    for a in h.intertwining_atoms() {
        let v = rep.get(a).ok_or_else(|| SearchError::MissingIntertwiningVector(h.label(a).to_owned()))?;
        if is_decomposable(v)? {
            decomposable.push(a);
        } else {
            indecomposable.push(a);
        }
    }
    let kind = match (decomposable.is_empty(), indecomposable.is_empty()) {
        (true, _) => DecompositionKind::FullyIndecomposable,
        (false, true) => DecompositionKind::FullyDecomposable,
        (false, false) => DecompositionKind::Mixed,
    };
    Ok(DecompositionProfile { decomposable, indecomposable, kind })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri3() -> Hypergraph {
        Hypergraph::from_contexts(&[["1", "2", "3"], ["3", "4", "5"], ["5", "6", "1"]]).unwrap()
    }

    fn tri4() -> Hypergraph {
        Hypergraph::from_contexts(&[["1", "2", "3", "4"], ["4", "5", "6", "7"], ["7", "8", "9", "1"]]).unwrap()
    }

    #[test]
    fn rotation_powers() {
        assert_eq!(rotation(1), (Scalar::int(3), Scalar::int(4)));
        assert_eq!(rotation(2), (Scalar::int(-7), Scalar::int(24)));
        let (a, b) = rotation(40);
        // |(3+4i)^k|² = 25^k
        let n = &(&a * &a) + &(&b * &b);
        let mut expect = Scalar::one();
        for _ in 0..40 {
            expect = &expect * &Scalar::int(25);
        }
        assert_eq!(n, expect);
    }

    #[test]
    fn triangle_3d_forced_duplicity() {
        let h = tri3();
        let rep = Representation::from_labeled(&h, [
            ("1", Vector::from_ints(&[0, 0, 1])),
            ("3", Vector::from_ints(&[0, 1, 0])),
            ("5", Vector::from_ints(&[1, 0, 0])),
        ])
        .unwrap();
        let err = complete_representation(&h, &rep).unwrap_err();
        let CompletionError::ForcedDuplicity { pairs } = err else { panic!("{err:?}") };
        let named: BTreeSet<(String, String)> =
            pairs.iter().map(|&(a, b)| (h.label(a).to_owned(), h.label(b).to_owned())).collect();
        let expect: BTreeSet<(String, String)> =
            [("2", "5"), ("4", "1"), ("6", "3")].iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        assert_eq!(named, expect);
    }

    #[test]
    fn single_context_completion() {
        let h = Hypergraph::from_contexts(&[["a", "b", "c"]]).unwrap();
        let rep = Representation::from_labeled(&h, [("a", Vector::from_ints(&[1, 1, 0])), ("b", Vector::from_ints(&[1, -1, 0]))]).unwrap();
        let full = complete_representation(&h, &rep).unwrap();
        assert_eq!(full.get(h.atom("c").unwrap()), Some(&Vector::from_ints(&[0, 0, 1])));
    }

    #[test]
    fn free_completion_rotates_away_from_collisions() {
        // {a,b,c,d} gets e3,e4 canonically, but those are taken by x and y
        let h = Hypergraph::from_contexts(&[["a", "b", "c", "d"], ["x", "y", "p", "q"]]).unwrap();
        let e = |k| Vector::unit(4, k);
        let rep = Representation::from_labeled(&h, [("a", e(0)), ("b", e(1)), ("x", e(2)), ("y", e(3))]).unwrap();
        let full = complete_representation(&h, &rep).unwrap();
        let report = verify_for(&h, &Coordinatization::Exact(full), VerifyMode::Exact).unwrap();
        assert!(report.is_complete(), "{report:?}");
    }

    #[test]
    fn verify_detects_problems() {
        let h = tri3();
        let rep = Representation::from_labeled(&h, [
            ("1", Vector::from_ints(&[1, 0, 0])),
            ("2", Vector::from_ints(&[1, 1, 0])),
            ("4", Vector::from_ints(&[2, 0, 0])),
        ])
        .unwrap();
        let r = verify_for(&h, &Coordinatization::Exact(rep.clone()), VerifyMode::Exact).unwrap();
        assert_eq!(r.non_orthogonal, vec![(h.atom("1").unwrap(), h.atom("2").unwrap())]);
        assert_eq!(r.collinear, vec![(h.atom("1").unwrap(), h.atom("4").unwrap())]);
        assert_eq!(r.missing.len(), 3);
        let approx = verify_for(&h, &Coordinatization::Exact(rep), VerifyMode::Approx(1e-12)).unwrap();
        assert_eq!(approx, r);
        let float = Coordinatization::Float(crate::exact::FloatRepresentation { dim: 3, vectors: Default::default() });
        assert_eq!(verify_for(&h, &float, VerifyMode::Exact), Err(SearchError::NeedsTolerance));
    }

    #[test]
    fn pool_is_projectively_deduplicated() {
        let a = ComponentAlphabet::parse("0,1,-1").unwrap();
        let pool = candidate_pool(&a, 3).unwrap();
        // (3^3 - 1) / 2 classes
        assert_eq!(pool.len(), 13);
        let normal: HashSet<Vector> = pool.iter().map(|v| normalize_projective(v).unwrap()).collect();
        assert_eq!(normal.len(), pool.len());
        assert!(ComponentAlphabet::parse("1,2").is_err());
        assert!(ComponentAlphabet::parse("0").is_err());
        assert!(ComponentAlphabet::parse("0,r2,i").is_err());
    }

    #[test]
    fn triangle_searches() {
        let a = ComponentAlphabet::parse("0,1,-1").unwrap();
        let r = search(&tri4(), &a, 4, &SearchOptions::default()).unwrap();
        let SearchOutcome::Found(rep) = &r.outcome else { panic!("{:?}", r.outcome) };
        assert!(verify_for(&tri4(), &Coordinatization::Exact(rep.clone()), VerifyMode::Exact).unwrap().is_complete());

        let a = ComponentAlphabet::parse("0,1,-1,2,-2,3").unwrap();
        let r = search(&tri3(), &a, 3, &SearchOptions::default()).unwrap();
        assert_eq!(r.outcome, SearchOutcome::Exhausted);
    }

    #[test]
    fn budget_and_workers() {
        let a = ComponentAlphabet::parse("0,1,-1,2,-2,3").unwrap();
        let tight = SearchOptions { budget: 50, ..Default::default() };
        let r = search(&tri3(), &a, 3, &tight).unwrap();
        assert_eq!(r.outcome, SearchOutcome::BudgetExceeded);
        for budget in [10, 500, 1_000_000] {
            let one = search(&tri3(), &a, 3, &SearchOptions { budget, ..Default::default() }).unwrap();
            let many = search(&tri3(), &a, 3, &SearchOptions { budget, workers: 4, ..Default::default() }).unwrap();
            assert_eq!((one.outcome, one.nodes, one.pool_size), (many.outcome, many.nodes, many.pool_size));
        }
    }

    #[test]
    fn decomposable_only_triangle_is_exhausted() {
        let a = ComponentAlphabet::parse("0,1,-1").unwrap();
        let opts = SearchOptions { decomposable_only: true, ..Default::default() };
        let r = search(&tri4(), &a, 4, &opts).unwrap();
        assert_eq!(r.outcome, SearchOutcome::Exhausted);
    }
}
