//! Finite stages of tree derivatives, Cantor-Bendixson ranks of explicit
//! families, and exact ℓ1-lower-estimate certificates.
//!
//! The derivative of a hereditary family keeps `F` when `F ∪ {n}` stays in the
//! family for infinitely many `n > max F`. For spreading families one such
//! `n` suffices. For an explicit finite family the derivative is taken
//! relative to the family itself: `F` survives when some `n > max F` extends
//! it inside the family (leaf removal).

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lp::maximize;
use crate::num::{common_denominator, q, q_json, qi, scaled_magnitude, Q};
use crate::ordinal::Ordinal;
use crate::schreier::{FinSet, Schreier};
use crate::spaces::{random_coefficient, NormEngine, RatVec, SpaceSpec};
use crate::suite::{run_samples, sample_rng, Sample, SuiteConfig, SuiteReport, Tally};

/// Largest index a derivative witness may use unless told otherwise.
pub const DEFAULT_HORIZON: u32 = 256;

/// A finite hereditary family of finite sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitFamily {
    sets: BTreeSet<FinSet>,
}

impl ExplicitFamily {
    /// Rejects families that are empty or not closed under subsets.
    pub fn new(sets: impl IntoIterator<Item = FinSet>) -> Result<Self> {
        let sets: BTreeSet<FinSet> = sets.into_iter().collect();
        if sets.is_empty() {
            return Err(Error::invalid("a family must contain at least the empty set"));
        }
        // Closure under one-element removal implies closure under subsets.
        for s in &sets {
            for i in 0..s.len() {
                let mut v = s.as_slice().to_vec();
                v.remove(i);
                let sub = FinSet::new(v)?;
                if !sets.contains(&sub) {
                    return Err(Error::invalid(format!("family is not hereditary: {s} is present but {sub} is not")));
                }
            }
        }
        Ok(ExplicitFamily { sets })
    }

    /// Smallest hereditary family containing `generators`.
    pub fn closure(generators: impl IntoIterator<Item = FinSet>) -> Self {
        let mut sets = BTreeSet::new();
        sets.insert(FinSet::empty());
        for g in generators {
            let elems = g.as_slice();
            for mask in 0u64..(1u64 << elems.len()) {
                let sub: Vec<u32> = (0..elems.len()).filter(|b| mask >> b & 1 == 1).map(|b| elems[b]).collect();
                sets.insert(FinSet::new(sub).expect("subsets of a set are increasing"));
            }
        }
        ExplicitFamily { sets }
    }

    pub fn contains(&self, set: &FinSet) -> bool {
        self.sets.contains(set)
    }

    pub fn sets(&self) -> impl Iterator<Item = &FinSet> {
        self.sets.iter()
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// `F ∪ {n} ∈ ℱ` for some `n > max F`.
    fn extends(&self, set: &FinSet) -> bool {
        // Sets sharing the prefix `F` form a contiguous lexicographic range.
        let top = set.max_elem();
        self.sets
            .range(set.clone()..)
            .take_while(|s| s.as_slice().starts_with(set.as_slice()))
            .any(|s| s.len() == set.len() + 1 && s.max_elem() > top)
    }

    /// One derivative; hereditary again.
    pub fn derived(&self) -> ExplicitFamily {
        ExplicitFamily {
            sets: self.sets.iter().filter(|s| self.extends(s)).cloned().collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.sets.iter().map(|s| json!(s.as_slice())).collect())
    }
}

/// A hereditary family whose derivatives can be queried.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyOracle {
    Schreier(Ordinal),
    Explicit(ExplicitFamily),
    /// `base^{(stages)}`, with witnesses searched up to `horizon`.
    Derived {
        base: Box<FamilyOracle>,
        stages: u32,
        horizon: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    /// No witness below the horizon; not a proof of absence.
    Unknown,
}

impl Verdict {
    pub fn tag(self) -> &'static str {
        match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Unknown => "unknown-false",
        }
    }
}

/// Answer to `F ∈ ℱ^{(k)}` with the extension that proves a positive answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub verdict: Verdict,
    /// `F ∪ {n_1 < … < n_k} ∈ ℱ` with `n_1 > max F`.
    pub witness: Option<FinSet>,
    pub horizon: u32,
}

impl Derivation {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict.tag(),
            "witness": self.witness.as_ref().map(|w| w.as_slice().to_vec()),
            "horizon": self.horizon,
        })
    }
}

/// `F ∈ ℱ^{(k)}`.
///
/// For Schreier families: `F ∈ S_α^{(k)}` iff `F ∪ {t, …, t+k−1} ∈ S_α` with
/// `t = max(max F + 1, |F| + k)`. Every extension by `k` points can be pushed
/// onto this consecutive tail: the tail starts late enough that its first
/// point alone may open a block holding all of it.
pub fn derivative_member(
    oracle: &Schreier,
    set: &FinSet,
    fam: &FamilyOracle,
    k: u32,
    horizon: u32,
) -> Result<Derivation> {
    match fam {
        FamilyOracle::Derived { base, stages, horizon: h } => {
            let k = stages
                .checked_add(k)
                .ok_or_else(|| Error::invalid("derivative stage overflow"))?;
            derivative_member(oracle, set, base, k, horizon.min(*h))
        }
        FamilyOracle::Schreier(alpha) => {
            let start = (set.max_elem() + 1).max(set.len() as u32 + k);
            let last = start as u64 + k as u64 - 1;
            if k > 0 && last > horizon as u64 {
                return Ok(Derivation { verdict: Verdict::Unknown, witness: None, horizon });
            }
            let mut ext = set.as_slice().to_vec();
            ext.extend(start..start + k);
            let ext = FinSet::new(ext)?;
            let verdict = if oracle.member(&ext, alpha) { Verdict::True } else { Verdict::False };
            Ok(Derivation {
                witness: (verdict == Verdict::True).then_some(ext),
                verdict,
                horizon,
            })
        }
        FamilyOracle::Explicit(family) => {
            // Chains of length k are subsets of longer members; the search is exact.
            let witness = family
                .sets()
                .find(|s| {
                    s.len() == set.len() + k as usize
                        && s.as_slice().starts_with(set.as_slice())
                        && s.as_slice()[set.len()..].first().is_none_or(|&n| n > set.max_elem())
                })
                .cloned();
            Ok(Derivation {
                verdict: if witness.is_some() { Verdict::True } else { Verdict::False },
                witness,
                horizon,
            })
        }
    }
}

/// Least `k` with `ℱ^{(k)} = ∅`, by iterated derivatives.
pub fn cb_rank_finite(family: &ExplicitFamily) -> usize {
    let mut current = family.clone();
    let mut rank = 0;
    while !current.is_empty() {
        current = current.derived();
        rank += 1;
    }
    rank
}

/// Certificate for `‖Σ a_n x_n‖ ≥ ρ Σ a_n` over `a ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct L1LowerCertificate {
    pub rho: Q,
    pub vectors: Vec<RatVec>,
    /// Minimum of `‖Σ a_n x_n‖` over the simplex.
    pub min_value: Q,
    /// A point of the simplex attaining `min_value`.
    pub minimizer: Vec<Q>,
    pub member: bool,
}

impl L1LowerCertificate {
    /// Recomputes the norm at the minimizer.
    pub fn replay(&self, engine: &NormEngine, space: &SpaceSpec) -> Result<bool> {
        let sum: Q = self.minimizer.iter().sum();
        let value = engine.norm(space, &RatVec::combination(&self.minimizer, &self.vectors))?;
        Ok(sum == Q::one()
            && self.minimizer.iter().all(|a| *a >= Q::zero())
            && value == self.min_value
            && self.member == (self.min_value >= self.rho))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rho": q_json(&self.rho),
            "vectors": self.vectors.iter().map(RatVec::to_json).collect::<Vec<_>>(),
            "min_value": q_json(&self.min_value),
            "minimizer": self.minimizer.iter().map(q_json).collect::<Vec<_>>(),
            "member": self.member,
        })
    }
}

/// Exact `min_{a ∈ simplex} ‖Σ a_n x_n‖` and the verdict `min ≥ ρ`.
///
/// The norm is `max_φ Σ_n a_n φ(x_n)` over the signed functionals norming
/// the joint support, so the minimum is the value of
/// `max s` s.t. `Σ_φ y_φ ≤ 1`, `s ≤ Σ_φ y_φ φ(x_n)` for each `n`, `y, s ≥ 0`;
/// the minimizing `a` is read off the duals of the second family of rows.
pub fn h_rho_member(engine: &NormEngine, xs: &[RatVec], space: &SpaceSpec, rho: &Q) -> Result<L1LowerCertificate> {
    let d = xs.len();
    if d == 0 {
        return Err(Error::contract("at least one vector is required"));
    }
    let limit = engine.capacity().exact_arity;
    if d > limit {
        return Err(Error::capacity("exact LP arity", d, limit));
    }
    if *rho <= Q::zero() || *rho > Q::one() {
        return Err(Error::contract("rho must lie in (0, 1]"));
    }
    for x in xs {
        if engine.norm(space, x)? != Q::one() {
            return Err(Error::contract(format!("{x} is not normalized in {space}")));
        }
    }
    let window: BTreeSet<u32> = xs.iter().flat_map(|x| x.support()).collect();
    let window: Vec<u32> = window.into_iter().collect();
    let functionals = engine.signed_functionals(space, &window)?;
    let mut columns: Vec<Vec<Q>> = functionals
        .iter()
        .map(|f| xs.iter().map(|x| f.apply(x)).collect())
        .collect();
    columns.sort();
    columns.dedup();
    // Variables: y_φ for each column, then s.
    let m = columns.len();
    let mut c = vec![Q::zero(); m + 1];
    c[m] = Q::one();
    let mut rows = Vec::with_capacity(d + 1);
    let mut first = vec![Q::one(); m + 1];
    first[m] = Q::zero();
    rows.push(first);
    for n in 0..d {
        let mut row: Vec<Q> = columns.iter().map(|col| -col[n].clone()).collect();
        row.push(Q::one());
        rows.push(row);
    }
    let mut b = vec![Q::zero(); d + 1];
    b[0] = Q::one();
    let sol = maximize(&c, &rows, &b)?;
    let weights: Vec<Q> = sol.dual[1..].to_vec();
    let total: Q = weights.iter().sum();
    let minimizer: Vec<Q> = if total.is_zero() {
        vec![q(1, d as i64); d]
    } else {
        weights.iter().map(|w| w / &total).collect()
    };
    let replayed = engine.norm(space, &RatVec::combination(&minimizer, xs))?;
    if replayed != sol.value {
        return Err(Error::invalid(format!(
            "LP minimizer replays to {replayed}, expected {}",
            sol.value
        )));
    }
    Ok(L1LowerCertificate {
        rho: rho.clone(),
        vectors: xs.to_vec(),
        member: sol.value >= *rho,
        min_value: sol.value,
        minimizer,
    })
}

/// Minimum of `‖Σ a_n x_n‖` over simplex points with coordinates in
/// `(1/steps)ℤ`, evaluated by the norm engine on integer magnitudes.
pub fn grid_minimum(engine: &NormEngine, xs: &[RatVec], space: &SpaceSpec, steps: u32) -> Result<(Q, Vec<Q>)> {
    let d = xs.len();
    let values: Vec<Q> = xs.iter().flat_map(|x| x.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>()).collect();
    let den = common_denominator(&values);
    let scaled: Vec<Vec<(u32, i128)>> = xs
        .iter()
        .map(|x| {
            x.iter()
                .map(|(i, v)| {
                    let mag = scaled_magnitude(v, &den)? as i128;
                    Ok((i, if *v < Q::zero() { -mag } else { mag }))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut best: Option<(u128, Vec<u32>)> = None;
    let mut a = vec![0u32; d];
    let mut acc = std::collections::BTreeMap::new();
    grid_walk(engine, space, &scaled, steps, 0, steps, &mut a, &mut acc, &mut best)?;
    let (value, point) = best.expect("the simplex grid is nonempty");
    let scale = Q::from_integer(den) * Q::from_integer((steps as i64).into());
    Ok((
        Q::from_integer(value.into()) / scale,
        point.iter().map(|&p| q(p as i64, steps as i64)).collect(),
    ))
}

#[allow(clippy::too_many_arguments)]
fn grid_walk(
    engine: &NormEngine,
    space: &SpaceSpec,
    xs: &[Vec<(u32, i128)>],
    steps: u32,
    n: usize,
    left: u32,
    a: &mut Vec<u32>,
    acc: &mut std::collections::BTreeMap<u32, i128>,
    best: &mut Option<(u128, Vec<u32>)>,
) -> Result<()> {
    let last = n + 1 == xs.len();
    let choices: Vec<u32> = if last { vec![left] } else { (0..=left).collect() };
    for c in choices {
        a[n] = c;
        for &(i, v) in &xs[n] {
            *acc.entry(i).or_insert(0) += v * c as i128;
        }
        if last {
            let mags: Vec<(u32, u128)> = acc.iter().filter(|(_, v)| **v != 0).map(|(&i, &v)| (i, v.unsigned_abs())).collect();
            let value = engine.norm_mags(space, &mags)?;
            if best.as_ref().is_none_or(|(b, _)| value < *b) {
                *best = Some((value, a.clone()));
            }
        } else {
            grid_walk(engine, space, xs, steps, n + 1, left - c, a, acc, best)?;
        }
        for &(i, v) in &xs[n] {
            *acc.entry(i).or_insert(0) -= v * c as i128;
        }
    }
    Ok(())
}

/// The witness tree for `S_α ∩ [1..N]`: node `E` carries `e_{max E}`, so the
/// branch through `E` is `(e_m)_{m ∈ E}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pr46Tree {
    pub alpha: Ordinal,
    pub window: u32,
    pub nodes: Vec<FinSet>,
}

impl Pr46Tree {
    pub fn node_vector(node: &FinSet) -> RatVec {
        RatVec::unit(node.max_elem())
    }

    /// Vectors along the chain of initial segments of `node`.
    pub fn branch(node: &FinSet) -> Vec<RatVec> {
        node.as_slice().iter().map(|&m| RatVec::unit(m)).collect()
    }
}

pub fn build_pr46_tree(oracle: &Schreier, alpha: &Ordinal, window: u32) -> Result<Pr46Tree> {
    let nodes = oracle
        .enumerate_admissible(window, alpha, false)?
        .into_iter()
        .filter(|e| !e.is_empty())
        .collect();
    Ok(Pr46Tree { alpha: alpha.clone(), window, nodes })
}

fn fail(failures: &mut Vec<Value>, v: Value) {
    if failures.len() < 20 {
        failures.push(v);
    }
}

/// Derivative stages: the rank of `S_0`, the `S_1` closed form and the
/// survival of `∅` in `S_1`.
pub fn suite_derivatives(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let oracle = Schreier::new(cfg.capacity.schreier_window);
    let s0 = FamilyOracle::Schreier(Ordinal::zero());
    let s1 = FamilyOracle::Schreier(Ordinal::from_nat(1));
    let mut failures = Vec::new();
    let mut checks = 0usize;

    // I_CB(S_0) = 2: ∅ survives one derivative and not two; S_0 ∩ [1..N] has rank 2.
    let empty = FinSet::empty();
    let v1 = derivative_member(&oracle, &empty, &s0, 1, DEFAULT_HORIZON)?.verdict;
    let v2 = derivative_member(&oracle, &empty, &s0, 2, DEFAULT_HORIZON)?.verdict;
    checks += 2;
    if v1 != Verdict::True || v2 != Verdict::False {
        fail(&mut failures, json!({"check": "S_0 stages", "k1": v1.tag(), "k2": v2.tag()}));
    }
    let window_s0 = ExplicitFamily::new(oracle.enumerate_admissible(10, &Ordinal::zero(), false)?)?;
    let rank_s0 = cb_rank_finite(&window_s0);
    checks += 1;
    if rank_s0 != 2 {
        fail(&mut failures, json!({"check": "S_0 window rank", "rank": rank_s0}));
    }

    // S_1 closed form |F| + k ≤ min F for nonempty F ⊆ [1..60], k ≤ 50.
    // Exhaustive over [1..14]; above that over every (min, size, max) class,
    // each through its packed, spread and a random representative.
    let top = 60u32;
    let k_max = 50u32;
    let mut rng = sample_rng(cfg.seed, 700, 0);
    let check_set = |set: &FinSet, failures: &mut Vec<Value>, checks: &mut usize| -> Result<()> {
        let min = set.min_elem().expect("nonempty");
        let mut previous = Verdict::True;
        for k in 0..=k_max {
            let v = derivative_member(&oracle, set, &s1, k, DEFAULT_HORIZON)?.verdict;
            let expected = if set.len() as u32 + k <= min { Verdict::True } else { Verdict::False };
            *checks += 1;
            if v != expected || (previous == Verdict::False && v == Verdict::True) {
                fail(failures, json!({"check": "S_1 closed form", "set": set.as_slice(), "k": k, "verdict": v.tag()}));
            }
            previous = v;
        }
        Ok(())
    };
    for mask in 1u32..(1 << 14) {
        let set = FinSet::new((0..14).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect())?;
        check_set(&set, &mut failures, &mut checks)?;
    }
    for min in 1..=top {
        for max in min..=top {
            let inner_room = max - min;
            let sizes = if max == min { 1..=1 } else { 2..=inner_room + 1 };
            for size in sizes {
                if max <= 14 {
                    continue;
                }
                let inner = size.saturating_sub(2);
                let packed: Vec<u32> = (min + 1..min + 1 + inner).collect();
                let spread: Vec<u32> = (max - inner..max).collect();
                let mut pool: Vec<u32> = (min + 1..max).collect();
                pool.shuffle(&mut rng);
                let mut random: Vec<u32> = pool[..inner as usize].to_vec();
                random.sort_unstable();
                for middle in [packed, spread, random] {
                    let mut v = vec![min];
                    v.extend(middle);
                    if max != min {
                        v.push(max);
                    }
                    check_set(&FinSet::new(v)?, &mut failures, &mut checks)?;
                }
            }
        }
    }

    // ∅ survives 50 stages of S_1.
    let survive = derivative_member(&oracle, &empty, &s1, 50, 200)?;
    checks += 1;
    if survive.verdict != Verdict::True {
        fail(&mut failures, json!({"check": "S_1 survival", "result": survive.to_json()}));
    }

    Ok(SuiteReport {
        suite: "DERIV".into(),
        config: json!({"seed": cfg.seed, "window": top, "stages": k_max, "horizon": DEFAULT_HORIZON}),
        pass: failures.is_empty(),
        samples: checks,
        violations: failures.len(),
        bound: None,
        max_ratio: None,
        witness: failures.first().cloned(),
        details: json!({
            "s0_rank": rank_s0,
            "empty_set_s1_stage_50": survive.to_json(),
        }),
    })
}

/// Branches of the witness tree are isometric to ℓ1: each sampled
/// admissible `E` passes `h_rho_member` at `ρ = 1` with minimum exactly 1,
/// and a sampled positive combination has norm equal to its coefficient sum.
pub fn suite_p46(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let samples = cfg.samples_or(200);
    let alphas = cfg.alphas_or_ordinals(&[Ordinal::from_nat(1), Ordinal::from_nat(2), Ordinal::omega()]);
    let window = 12u32.min(cfg.capacity.schreier_window);
    let arity = cfg.capacity.exact_arity;
    let mut trees = Vec::new();
    {
        let oracle = Schreier::new(cfg.capacity.schreier_window);
        for alpha in &alphas {
            let tree = build_pr46_tree(&oracle, alpha, window)?;
            let nodes: Vec<FinSet> = tree.nodes.into_iter().filter(|e| e.len() <= arity).collect();
            trees.push((alpha.clone(), nodes));
        }
    }
    let bound = qi(1);
    let out = run_samples(&cfg.capacity, cfg.seed, 800, samples, |engine, rng| {
        let (alpha, nodes) = &trees[rng.gen_range(0..trees.len())];
        // Bias toward longer branches.
        let node = (0..3).map(|_| &nodes[rng.gen_range(0..nodes.len())]).max_by_key(|e| e.len()).expect("three draws");
        let space = SpaceSpec::Schreier(alpha.clone());
        let branch = Pr46Tree::branch(node);
        let cert = h_rho_member(engine, &branch, &space, &qi(1))?;
        let a: Vec<Q> = (0..branch.len()).map(|_| {
            let c = random_coefficient(rng);
            if c < Q::zero() { -c } else { c }
        }).collect();
        let sum: Q = a.iter().sum();
        let value = engine.norm(&space, &RatVec::combination(&a, &branch))?;
        let ok = cert.member && cert.min_value == Q::one() && value == sum && cert.replay(engine, &space)?;
        // Ratio 1 certifies; anything else is reported as 2.
        Ok(Sample {
            ratio: if ok { qi(1) } else { qi(2) },
            witness: json!({
                "alpha": alpha.to_string(),
                "set": node.as_slice(),
                "certificate": cert.to_json(),
                "coefficients": a.iter().map(q_json).collect::<Vec<_>>(),
                "norm": q_json(&value),
            }),
        })
    })?;
    let mut t = Tally::new();
    t.absorb(out, &bound);
    let mut report = SuiteReport::from_tally(
        "P46",
        json!({"seed": cfg.seed, "samples": samples, "alphas": alphas.iter().map(|a| a.to_string()).collect::<Vec<_>>(), "window": window}),
        bound,
        t,
        json!({"tree_sizes": trees.iter().map(|(a, n)| json!([a.to_string(), n.len()])).collect::<Vec<_>>()}),
    );
    report.max_ratio = None;
    report.bound = None;
    Ok(report)
}

/// Exact LP minimum against a `1/64` grid: `LP ≤ grid ≤ LP + 2(d−1)/64`.
pub fn suite_hrho(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let samples = cfg.samples_or(200);
    let steps = 64u32;
    let spaces = [
        SpaceSpec::C0,
        SpaceSpec::L1,
        SpaceSpec::Schreier(Ordinal::from_nat(1)),
        SpaceSpec::Schreier(Ordinal::from_nat(2)),
        SpaceSpec::rsum1(SpaceSpec::C0),
    ];
    let out = run_samples(&cfg.capacity, cfg.seed, 900, samples, |engine, rng| {
        let space = &spaces[rng.gen_range(0..spaces.len())];
        let d = rng.gen_range(1..=4usize);
        let hi = rng.gen_range(4..=9u32);
        // Overlapping supports: each vector draws from the whole window.
        let xs: Vec<RatVec> = (0..d)
            .map(|_| {
                let size = rng.gen_range(1..=3usize);
                let picks = rand::seq::index::sample(rng, hi as usize, size);
                let x = RatVec::from_pairs(picks.iter().map(|p| (p as u32 + 1, random_coefficient(rng))))?;
                engine.normalize(space, &x)
            })
            .collect::<Result<_>>()?;
        let cert = h_rho_member(engine, &xs, space, &q(1, 2))?;
        let (grid, point) = grid_minimum(engine, &xs, space, steps)?;
        let slack = q(2 * (d as i64 - 1), steps as i64);
        let gap = &grid - &cert.min_value;
        let ok = gap >= Q::zero() && gap <= slack && cert.replay(engine, space)?;
        Ok(Sample {
            ratio: if ok { Q::zero() } else { qi(1) },
            witness: json!({
                "space": space.to_string(),
                "vectors": xs.iter().map(RatVec::to_json).collect::<Vec<_>>(),
                "lp_min": q_json(&cert.min_value),
                "lp_minimizer": cert.minimizer.iter().map(q_json).collect::<Vec<_>>(),
                "grid_min": q_json(&grid),
                "grid_point": point.iter().map(q_json).collect::<Vec<_>>(),
                "allowed_gap": q_json(&slack),
            }),
        })
    })?;
    let mut t = Tally::new();
    t.absorb(out, &Q::zero());
    let mut report = SuiteReport::from_tally(
        "HRHO",
        json!({"seed": cfg.seed, "samples": samples, "grid_steps": steps}),
        Q::zero(),
        t,
        json!({}),
    );
    report.max_ratio = None;
    report.bound = None;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordinal::parse_ordinal;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fs(v: &[u32]) -> FinSet {
        FinSet::new(v.to_vec()).unwrap()
    }

    fn schreier(a: &str) -> FamilyOracle {
        FamilyOracle::Schreier(parse_ordinal(a).unwrap())
    }

    /// `∃ n_1 < … < n_k` in `(max F, limit]` with `F ∪ {n_i} ∈ S_α`.
    fn brute_extension(oracle: &Schreier, set: &FinSet, alpha: &Ordinal, k: u32, limit: u32) -> bool {
        fn go(oracle: &Schreier, cur: &mut Vec<u32>, alpha: &Ordinal, left: u32, limit: u32) -> bool {
            if left == 0 {
                return true;
            }
            let from = cur.last().copied().unwrap_or(0) + 1;
            for n in from..=limit {
                cur.push(n);
                if oracle.family(alpha).contains(cur) && go(oracle, cur, alpha, left - 1, limit) {
                    cur.pop();
                    return true;
                }
                cur.pop();
            }
            false
        }
        go(oracle, &mut set.as_slice().to_vec(), alpha, k, limit)
    }

    #[test]
    fn documented_stages() {
        let o = Schreier::default();
        let d = |s: &[u32], f: &FamilyOracle, k, h| derivative_member(&o, &fs(s), f, k, h).unwrap().verdict;
        assert_eq!(d(&[], &schreier("0"), 1, DEFAULT_HORIZON), Verdict::True);
        assert_eq!(d(&[], &schreier("0"), 2, DEFAULT_HORIZON), Verdict::False);
        assert_eq!(d(&[5], &schreier("1"), 3, DEFAULT_HORIZON), Verdict::True);
        assert_eq!(d(&[5], &schreier("1"), 4, DEFAULT_HORIZON), Verdict::True);
        assert_eq!(d(&[5], &schreier("1"), 5, DEFAULT_HORIZON), Verdict::False);
        assert_eq!(d(&[], &schreier("1"), 50, 200), Verdict::True);
        assert_eq!(d(&[2], &schreier("2"), 6, DEFAULT_HORIZON), Verdict::True);
        assert_eq!(d(&[], &schreier("1"), 50, 60), Verdict::Unknown);
    }

    #[test]
    fn saturated_tail_matches_bounded_search() {
        let o = Schreier::default();
        for a in ["1", "2", "3", "w", "w+1"] {
            let alpha = parse_ordinal(a).unwrap();
            let fam = FamilyOracle::Schreier(alpha.clone());
            for mask in 0u32..(1 << 7) {
                let set = fs(&(0..7).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect::<Vec<_>>());
                if !o.member(&set, &alpha) {
                    continue;
                }
                for k in 0..=4 {
                    let fast = derivative_member(&o, &set, &fam, k, DEFAULT_HORIZON).unwrap();
                    // Any tail from the formula ends below 7 + 2·4.
                    let slow = brute_extension(&o, &set, &alpha, k, 18);
                    assert_eq!(fast.verdict == Verdict::True, slow, "{set} k={k} S_{a}");
                    if let Some(w) = fast.witness {
                        assert!(o.member(&w, &alpha));
                    }
                }
            }
        }
    }

    #[test]
    fn derived_family_composes_stages() {
        let o = Schreier::default();
        let inner = FamilyOracle::Derived { base: Box::new(schreier("1")), stages: 2, horizon: DEFAULT_HORIZON };
        for (set, k) in [(vec![5], 2), (vec![5], 3), (vec![4, 9], 1), (vec![6], 0)] {
            let a = derivative_member(&o, &fs(&set), &inner, k, DEFAULT_HORIZON).unwrap();
            let b = derivative_member(&o, &fs(&set), &schreier("1"), k + 2, DEFAULT_HORIZON).unwrap();
            assert_eq!(a, b);
        }
        // Monotone in the stage count.
        let mut previous = Verdict::True;
        for k in 0..8 {
            let v = derivative_member(&o, &fs(&[3, 8]), &schreier("2"), k, DEFAULT_HORIZON).unwrap().verdict;
            assert!(!(previous == Verdict::False && v == Verdict::True));
            previous = v;
        }
    }

    #[test]
    fn explicit_families() {
        assert_eq!(cb_rank_finite(&ExplicitFamily::new([FinSet::empty()]).unwrap()), 1);
        let s0 = ExplicitFamily::closure([fs(&[1]), fs(&[2]), fs(&[3])]);
        assert_eq!(cb_rank_finite(&s0), 2);
        let tree = ExplicitFamily::closure([fs(&[1, 2]), fs(&[3])]);
        assert_eq!(tree.len(), 5);
        assert_eq!(cb_rank_finite(&tree), 3);
        assert!(ExplicitFamily::new([fs(&[1, 2]), FinSet::empty()]).is_err());
        let o = Schreier::default();
        let fam = FamilyOracle::Explicit(tree);
        let d = |s: &[u32], k| derivative_member(&o, &fs(s), &fam, k, 3).unwrap().verdict;
        assert_eq!(d(&[], 2), Verdict::True);
        assert_eq!(d(&[1], 1), Verdict::True);
        assert_eq!(d(&[2], 1), Verdict::False);
        assert_eq!(d(&[3], 1), Verdict::False);
        assert_eq!(d(&[], 3), Verdict::False);
    }

    /// Hereditary families over `[1..n]` as bitmasks over subset masks.
    fn downsets(n: u32) -> Vec<Vec<u32>> {
        let subsets = 1u32 << n;
        let mut out = Vec::new();
        let mut chosen = vec![false; subsets as usize];
        fn go(s: u32, subsets: u32, n: u32, chosen: &mut Vec<bool>, out: &mut Vec<Vec<u32>>) {
            if s == subsets {
                out.push((0..subsets).filter(|&m| chosen[m as usize]).collect());
                return;
            }
            go(s + 1, subsets, n, chosen, out);
            let allowed = s == 0 || (0..n).filter(|b| s >> b & 1 == 1).all(|b| chosen[(s & !(1 << b)) as usize]);
            if allowed {
                chosen[s as usize] = true;
                go(s + 1, subsets, n, chosen, out);
                chosen[s as usize] = false;
            }
        }
        go(0, subsets, n, &mut chosen, &mut out);
        out.retain(|f| f.first() == Some(&0));
        out
    }

    /// Longest chain `F_0 ⊂ F_1 ⊂ …` of one-point end extensions inside the family.
    fn longest_chain(masks: &[u32]) -> usize {
        fn depth(m: u32, set: &[u32]) -> usize {
            let top = 32 - m.leading_zeros();
            set.iter()
                .filter(|&&s| s & m == m && (s & !m).count_ones() == 1 && (s & !m) >> top != 0)
                .map(|&s| 1 + depth(s, set))
                .max()
                .unwrap_or(0)
        }
        depth(0, masks)
    }

    fn to_family(masks: &[u32]) -> ExplicitFamily {
        ExplicitFamily::new(masks.iter().map(|&m| fs(&(0..32).filter(|b| m >> b & 1 == 1).map(|b| b + 1).collect::<Vec<_>>())))
            .unwrap()
    }

    #[test]
    fn cb_rank_is_one_plus_longest_chain_exhaustively() {
        for n in 1..=5 {
            let all = downsets(n);
            let expected = [2, 5, 19, 167, 7580][n as usize - 1];
            assert_eq!(all.len(), expected);
            for masks in &all {
                assert_eq!(cb_rank_finite(&to_family(masks)), 1 + longest_chain(masks));
            }
        }
    }

    #[test]
    fn cb_rank_on_random_families_over_six_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(66);
        for _ in 0..3000 {
            let gens: Vec<u32> = (0..rng.gen_range(1..6)).map(|_| rng.gen_range(0..64u32)).collect();
            let mut masks: Vec<u32> = (0..64u32).filter(|&s| gens.iter().any(|&g| s & g == s)).collect();
            masks.sort_unstable();
            assert_eq!(cb_rank_finite(&to_family(&masks)), 1 + longest_chain(&masks));
        }
    }

    #[test]
    fn hrho_documented_examples() {
        let e = NormEngine::default();
        let c0 = SpaceSpec::C0;
        let cert = h_rho_member(&e, &[RatVec::unit(1), RatVec::unit(2)], &c0, &q(3, 5)).unwrap();
        assert!(!cert.member);
        assert_eq!(cert.min_value, q(1, 2));
        assert_eq!(cert.minimizer, vec![q(1, 2), q(1, 2)]);
        assert!(cert.replay(&e, &c0).unwrap());
        let x1 = SpaceSpec::Schreier(Ordinal::from_nat(1));
        let single = h_rho_member(&e, &[RatVec::unit(4)], &x1, &qi(1)).unwrap();
        assert!(single.member && single.min_value == qi(1));
        let admissible = h_rho_member(&e, &[RatVec::unit(3), RatVec::unit(5), RatVec::unit(7)], &x1, &qi(1)).unwrap();
        assert!(admissible.member);
        let too_long = h_rho_member(&e, &[RatVec::unit(2), RatVec::unit(3), RatVec::unit(4)], &x1, &qi(1)).unwrap();
        assert!(!too_long.member);
        assert_eq!(too_long.min_value, q(2, 3));
        let over = h_rho_member(&e, &[RatVec::unit(2), RatVec::unit(3)], &x1, &q(101, 100));
        assert!(over.is_err());
        assert!(h_rho_member(&e, &[RatVec::unit(2).scaled(&qi(2))], &x1, &qi(1)).is_err());
    }

    #[test]
    fn derivative_suite_passes() {
        let r = suite_derivatives(&SuiteConfig::default()).unwrap();
        assert!(r.pass, "{}", r.to_json());
    }

    #[test]
    fn lp_matches_grid() {
        let r = suite_hrho(&SuiteConfig { samples: Some(30), ..SuiteConfig::default() }).unwrap();
        assert!(r.pass, "{}", r.to_json());
    }

    #[test]
    fn pr46_tree_branches() {
        let o = Schreier::default();
        let t0 = build_pr46_tree(&o, &Ordinal::zero(), 3).unwrap();
        assert_eq!(t0.nodes, vec![fs(&[1]), fs(&[2]), fs(&[3])]);
        let t1 = build_pr46_tree(&o, &Ordinal::from_nat(1), 4).unwrap();
        assert!(t1.nodes.contains(&fs(&[2, 3])));
        let e = NormEngine::default();
        let x1 = SpaceSpec::Schreier(Ordinal::from_nat(1));
        let b = Pr46Tree::branch(&fs(&[2, 3]));
        assert!(h_rho_member(&e, &b, &x1, &qi(1)).unwrap().member);
        assert_eq!(Pr46Tree::node_vector(&fs(&[2, 3])), RatVec::unit(3));
        let r = suite_p46(&SuiteConfig { samples: Some(30), ..SuiteConfig::default() }).unwrap();
        assert!(r.pass, "{}", r.to_json());
    }
}
