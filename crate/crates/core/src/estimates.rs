//! Domination constants between finite sequences and the block-estimate
//! suites built on them.
//!
//! `(x_n)` is `C`-dominated by `(y_n)` when `‖Σ a_n x_n‖ ≤ C ‖Σ a_n y_n‖`
//! for all scalars. With `(y_n)` disjointly supported in a 1-unconditional
//! space, `{a : ‖Σ a_n y_n‖ ≤ 1}` is the sign-symmetric polytope generated by
//! `P₊ = {a ≥ 0 : Σ_n a_n ‖y_n‖_{ℓ1(A)} ≤ 1, A norming}`. The convex ratio
//! `‖Σ a_n x_n‖` is maximal at a vertex, so the least `C` is the maximum over
//! the vertices of `P₊` and their sign flips.

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lp::polytope_vertices;
use crate::num::{q, q_json, qi, Q};
use crate::ordinal::Ordinal;
use crate::spaces::{disjoint_supports, parse_space, random_coefficient, IndexSeq, NormEngine, RatVec, SpaceSpec};
use crate::suite::{config_json, run_samples, Sample, SuiteConfig, SuiteReport, Tally};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    ExactVertex,
    Sampled { samples: usize, seed: u64 },
}

impl Mode {
    fn tag(&self) -> &'static str {
        match self {
            Mode::ExactVertex => "exact_vertex",
            Mode::Sampled { .. } => "sampled",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominationReport {
    /// Attained by `witness`.
    pub lower_bound: Q,
    /// `None` when unverified (sampled mode).
    pub upper_bound: Option<Q>,
    pub exact: bool,
    pub witness: Vec<Q>,
    pub mode: Mode,
}

impl DominationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "lower_bound": q_json(&self.lower_bound),
            "upper_bound": self.upper_bound.as_ref().map_or(json!("unverified"), q_json),
            "exact": self.exact,
            "witness": self.witness.iter().map(q_json).collect::<Vec<_>>(),
            "mode": self.mode.tag(),
        })
    }
}

/// `‖Σ a_n x_n‖_X / ‖Σ a_n y_n‖_Y`.
pub fn ratio(
    engine: &NormEngine,
    coeffs: &[Q],
    xs: &[RatVec],
    x_space: &SpaceSpec,
    ys: &[RatVec],
    y_space: &SpaceSpec,
) -> Result<Q> {
    let den = engine.norm(y_space, &RatVec::combination(coeffs, ys))?;
    if den.is_zero() {
        return Err(Error::invalid("reference combination has norm zero"));
    }
    Ok(engine.norm(x_space, &RatVec::combination(coeffs, xs))? / den)
}

/// Least `C` with `‖Σ a_n x_n‖_X ≤ C ‖Σ a_n v_{k_n}‖_V`.
pub fn domination_constant(
    engine: &NormEngine,
    xs: &[RatVec],
    x_space: &SpaceSpec,
    refs: &[u32],
    v_space: &SpaceSpec,
    mode: Mode,
) -> Result<DominationReport> {
    if refs.len() != xs.len() {
        return Err(Error::contract("one reference index per vector is required"));
    }
    if refs.first() == Some(&0) || refs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::contract("reference indices must be increasing positive integers"));
    }
    for x in xs {
        if engine.norm(x_space, x)? != Q::one() {
            return Err(Error::contract(format!("{x} is not normalized in {x_space}")));
        }
    }
    let ys: Vec<RatVec> = refs.iter().map(|&k| RatVec::unit(k)).collect();
    domination_between(engine, xs, x_space, &ys, v_space, mode)
}

/// Least `C` with `‖Σ a_n x_n‖_X ≤ C ‖Σ a_n y_n‖_Y` for disjointly
/// supported nonzero `y_n`.
pub fn domination_between(
    engine: &NormEngine,
    xs: &[RatVec],
    x_space: &SpaceSpec,
    ys: &[RatVec],
    y_space: &SpaceSpec,
    mode: Mode,
) -> Result<DominationReport> {
    if xs.is_empty() || xs.len() != ys.len() {
        return Err(Error::contract("need equally many nonzero vectors on both sides"));
    }
    if ys.iter().any(RatVec::is_zero) {
        return Err(Error::invalid("reference vectors must be nonzero"));
    }
    if !disjoint_supports(ys) {
        return Err(Error::invalid("reference vectors must be disjointly supported"));
    }
    match mode {
        Mode::ExactVertex => exact(engine, xs, x_space, ys, y_space),
        Mode::Sampled { samples, seed } => sampled(engine, xs, x_space, ys, y_space, samples, seed),
    }
}

/// Rows `Σ_n a_n ‖y_n‖_{ℓ1(A)} ≤ 1`, one per norming set `A`, keeping only
/// rows not dominated coordinatewise by another row.
fn reference_halfspaces(engine: &NormEngine, ys: &[RatVec], y_space: &SpaceSpec) -> Result<Vec<Vec<Q>>> {
    let mut window: Vec<u32> = ys.iter().flat_map(|y| y.support()).collect();
    window.sort_unstable();
    let sets = engine.positive_sets(y_space, &window)?;
    let mut rows: Vec<Vec<Q>> = sets
        .iter()
        .map(|set| {
            ys.iter()
                .map(|y| set.iter().fold(Q::zero(), |acc, &i| acc + y.get(i).abs()))
                .collect::<Vec<Q>>()
        })
        .filter(|r| r.iter().any(|v| !v.is_zero()))
        .collect();
    rows.sort();
    rows.dedup();
    let dominated = |r: &Vec<Q>, s: &Vec<Q>| r != s && r.iter().zip(s).all(|(a, b)| a <= b);
    let kept: Vec<Vec<Q>> = rows
        .iter()
        .filter(|r| !rows.iter().any(|s| dominated(r, s)))
        .cloned()
        .collect();
    Ok(kept)
}

fn exact(
    engine: &NormEngine,
    xs: &[RatVec],
    x_space: &SpaceSpec,
    ys: &[RatVec],
    y_space: &SpaceSpec,
) -> Result<DominationReport> {
    let d = xs.len();
    let limit = engine.capacity().exact_arity;
    if d > limit {
        return Err(Error::capacity("exact domination arity", d, limit));
    }
    let rows = reference_halfspaces(engine, ys, y_space)?;
    let vertices = polytope_vertices(d, &rows)?;
    // Disjoint blocks in a 1-unconditional space make signs irrelevant; a
    // global sign never matters.
    let patterns: Vec<u32> = if disjoint_supports(xs) {
        vec![0]
    } else {
        (0..(1u32 << d)).filter(|m| m & 1 == 0).collect()
    };
    let mut best: Option<(Q, Vec<Q>)> = None;
    for v in vertices.iter().filter(|v| v.iter().any(|c| !c.is_zero())) {
        for &mask in &patterns {
            let a: Vec<Q> = v
                .iter()
                .enumerate()
                .map(|(n, c)| if mask >> n & 1 == 1 { -c } else { c.clone() })
                .collect();
            let r = ratio(engine, &a, xs, x_space, ys, y_space)?;
            if best.as_ref().is_none_or(|(b, _)| r > *b) {
                best = Some((r, a));
            }
        }
    }
    let (c, witness) = best.ok_or_else(|| Error::invalid("reference polytope has no nonzero vertex"))?;
    Ok(DominationReport {
        lower_bound: c.clone(),
        upper_bound: Some(c),
        exact: true,
        witness,
        mode: Mode::ExactVertex,
    })
}

fn sampled(
    engine: &NormEngine,
    xs: &[RatVec],
    x_space: &SpaceSpec,
    ys: &[RatVec],
    y_space: &SpaceSpec,
    samples: usize,
    seed: u64,
) -> Result<DominationReport> {
    use rand::SeedableRng;
    let d = xs.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eval = |a: &[Q]| -> Result<Option<Q>> {
        if a.iter().all(Zero::is_zero) {
            return Ok(None);
        }
        ratio(engine, a, xs, x_space, ys, y_space).map(Some)
    };
    let mut best_a: Vec<Q> = vec![Q::one(); d];
    let mut best = eval(&best_a)?.expect("all-ones is nonzero");
    for _ in 0..samples {
        let a: Vec<Q> = (0..d)
            .map(|_| if rng.gen_bool(0.2) { Q::zero() } else { random_coefficient(&mut rng) })
            .collect();
        if let Some(r) = eval(&a)? {
            if r > best {
                best = r;
                best_a = a;
            }
        }
    }
    // Coordinate ascent from the best sample.
    let steps = [q(1, 1), q(1, 2), q(1, 4), q(1, 8), q(1, 16)];
    for _ in 0..16 {
        let mut improved = false;
        for n in 0..d {
            for step in &steps {
                for delta in [step.clone(), -step.clone()] {
                    let mut a = best_a.clone();
                    a[n] += &delta;
                    if let Some(r) = eval(&a)? {
                        if r > best {
                            best = r;
                            best_a = a;
                            improved = true;
                        }
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
    Ok(DominationReport {
        lower_bound: best,
        upper_bound: None,
        exact: false,
        witness: best_a,
        mode: Mode::Sampled { samples, seed },
    })
}

/// Coefficients for block-estimate samples: all ones a quarter of the time.
fn sample_coefficients(rng: &mut ChaCha8Rng, n: usize) -> Vec<Q> {
    if rng.gen_bool(0.25) {
        vec![Q::one(); n]
    } else {
        (0..n).map(|_| random_coefficient(rng)).collect()
    }
}

fn vecs_json(xs: &[RatVec]) -> Value {
    Value::Array(xs.iter().map(RatVec::to_json).collect())
}

fn coeffs_json(a: &[Q]) -> Value {
    Value::Array(a.iter().map(q_json).collect())
}

/// Upper block estimate sample in `X_α`: `‖Σ a x‖ / ‖Σ a e_{k_n}‖` with
/// `k_n = min supp x_n`, or a random admissible index choice when `spread`.
fn upper_block_sample(
    engine: &NormEngine,
    rng: &mut ChaCha8Rng,
    alpha: &Ordinal,
    free_refs: bool,
) -> Result<Sample> {
    let space = SpaceSpec::Schreier(alpha.clone());
    let n = rng.gen_range(1..=5usize);
    let hi = rng.gen_range((n as u32).max(4)..=18);
    let xs = engine.block_sequence_with(&space, n, 1, hi, rng)?;
    let a = sample_coefficients(rng, n);
    let mut refs = Vec::with_capacity(n);
    let mut prev_max = 0;
    for x in &xs {
        let lo = x.min_supp().expect("blocks are nonzero");
        let k = if free_refs { rng.gen_range(prev_max + 1..=lo) } else { lo };
        refs.push(k);
        prev_max = x.max_supp().expect("blocks are nonzero");
    }
    let units: Vec<RatVec> = refs.iter().map(|&k| RatVec::unit(k)).collect();
    let lhs = engine.norm(&space, &RatVec::combination(&a, &xs))?;
    let rhs = engine.norm(&space, &RatVec::combination(&a, &units))?;
    let r = &lhs / &rhs;
    Ok(Sample {
        witness: json!({
            "alpha": alpha.to_string(),
            "blocks": vecs_json(&xs),
            "coefficients": coeffs_json(&a),
            "refs": refs,
            "lhs": q_json(&lhs),
            "rhs": q_json(&rhs),
            "ratio": q_json(&r),
        }),
        ratio: r,
    })
}

fn upper_suite(cfg: &SuiteConfig, id: &str, family: u64, free_refs: bool, default_samples: usize) -> Result<SuiteReport> {
    let alphas = cfg.alphas_or_ordinals(&[Ordinal::from_nat(1), Ordinal::from_nat(2), Ordinal::omega()]);
    let samples = cfg.samples_or(default_samples);
    let bound = cfg.bound.clone().unwrap_or_else(|| qi(2));
    let mut total = Tally::new();
    let mut per_alpha = serde_json::Map::new();
    for (ai, alpha) in alphas.iter().enumerate() {
        let out = run_samples(&cfg.capacity, cfg.seed, family * 64 + ai as u64, samples, |e, rng| {
            upper_block_sample(e, rng, alpha, free_refs)
        })?;
        let mut t = Tally::new();
        t.absorb(out, &bound);
        per_alpha.insert(
            alpha.to_string(),
            json!({"max_ratio": q_json(&t.max_ratio), "violations": t.violations}),
        );
        total.merge(t);
    }
    Ok(SuiteReport::from_tally(
        id,
        config_json(cfg, samples, &alphas, &bound),
        bound,
        total,
        json!({ "per_alpha": per_alpha }),
    ))
}

/// `X_α` against itself: blocks are dominated by their minima's basis vectors.
pub fn suite_p31(cfg: &SuiteConfig) -> Result<SuiteReport> {
    upper_suite(cfg, "P31", 1, false, 1000)
}

/// As P31 with reference indices anywhere in `(max supp x_{n-1}, min supp x_n]`.
pub fn suite_p24(cfg: &SuiteConfig) -> Result<SuiteReport> {
    upper_suite(cfg, "P24", 2, true, 500)
}

/// Self lower-estimate constant of `V` when known; spaces without
/// subsequential lower estimates in themselves are rejected.
pub fn self_lower_constant(v: &SpaceSpec) -> Result<Q> {
    match v {
        SpaceSpec::L1 | SpaceSpec::C0 => Ok(qi(1)),
        SpaceSpec::DirectSum1(inner) if **inner == SpaceSpec::C0 => Ok(qi(2)),
        SpaceSpec::Restrict(inner, m) if **inner == SpaceSpec::DirectSum1(Box::new(SpaceSpec::C0)) && m.get(1) == Some(1) => {
            Ok(qi(2))
        }
        SpaceSpec::Restrict(inner, _) if matches!(**inner, SpaceSpec::L1 | SpaceSpec::C0) => Ok(qi(1)),
        SpaceSpec::Schreier(_) => Err(Error::invalid(
            "Schreier bases satisfy no subsequential lower block estimates in themselves",
        )),
        other => Err(Error::invalid(format!("no self lower-estimate constant is known for {other}"))),
    }
}

/// Exact search for the self lower-estimate constant of `V`: the largest
/// exact constant by which `(v_{min supp y_n})` is dominated by a sampled
/// normalized block sequence `(y_n)`, plus the structured family
/// `y_1 = s v_1 + (1 − s) v_2, y_2 = v_3`.
pub fn search_self_lower(engine: &NormEngine, v: &SpaceSpec, samples: usize, seed: u64) -> Result<(Q, Value)> {
    let mut best = Q::zero();
    let mut witness = Value::Null;
    let mut consider = |ys: Vec<RatVec>| -> Result<()> {
        let refs: Vec<RatVec> = ys.iter().map(|y| RatVec::unit(y.min_supp().expect("nonzero"))).collect();
        let rep = domination_between(engine, &refs, v, &ys, v, Mode::ExactVertex)?;
        if rep.lower_bound > best {
            best = rep.lower_bound.clone();
            witness = json!({"blocks": vecs_json(&ys), "coefficients": coeffs_json(&rep.witness), "constant": q_json(&best)});
        }
        Ok(())
    };
    for j in 1..=6 {
        let s = q(1, 1 << j);
        let y1 = RatVec::from_pairs([(1, s.clone()), (2, Q::one() - s)])?;
        consider(vec![engine.normalize(v, &y1)?, RatVec::unit(3)])?;
    }
    for i in 0..samples {
        let mut rng = crate::suite::sample_rng(seed, 90, i as u64);
        let n = rng.gen_range(1..=3usize);
        let hi = rng.gen_range((n as u32).max(3)..=8);
        consider(engine.block_sequence_with(v, n, 1, hi, &mut rng)?)?;
    }
    Ok((best, witness))
}

struct LowerInstance {
    z: SpaceSpec,
    v: SpaceSpec,
    c: Q,
}

/// `Z^V` lower estimates: `‖Σ a v_{m_n}‖_V ≤ 2C ‖Σ a z_n‖_{Z^V}`.
pub fn suite_l211(cfg: &SuiteConfig) -> Result<SuiteReport> {
    l211_with(cfg, &[("c0", "l1"), ("schreier(1)", "l1"), ("c0", "rsum1(c0)")])
}

pub fn l211_with(cfg: &SuiteConfig, pairs: &[(&str, &str)]) -> Result<SuiteReport> {
    let samples = cfg.samples_or(500);
    let engine = NormEngine::new(cfg.capacity.clone());
    let mut instances = Vec::new();
    let mut derived = serde_json::Map::new();
    for (z, v) in pairs {
        let (z, v) = (parse_space(z)?, parse_space(v)?);
        let c = self_lower_constant(&v)?;
        if matches!(v, SpaceSpec::DirectSum1(_)) {
            let (found, witness) = search_self_lower(&engine, &v, 40, cfg.seed)?;
            derived.insert(
                v.to_string(),
                json!({"constant": q_json(&c), "exact_search_max": q_json(&found), "search_witness": witness}),
            );
        }
        instances.push(LowerInstance { z, v, c });
    }
    let mut total = Tally::new();
    let mut per = serde_json::Map::new();
    let mut bound_max = Q::zero();
    for (idx, inst) in instances.iter().enumerate() {
        let bound = cfg.bound.clone().unwrap_or_else(|| qi(2) * &inst.c);
        bound_max = bound_max.max(bound.clone());
        let space = SpaceSpec::zv(inst.z.clone(), inst.v.clone());
        let out = run_samples(&cfg.capacity, cfg.seed, 300 + idx as u64, samples, |e, rng| {
            let n = rng.gen_range(1..=4usize);
            let hi = rng.gen_range((n as u32).max(3)..=10);
            let zs = e.block_sequence_with(&space, n, 1, hi, rng)?;
            let a = sample_coefficients(rng, n);
            let mins: Vec<RatVec> = zs.iter().map(|z| RatVec::unit(z.min_supp().expect("nonzero"))).collect();
            let lhs = e.norm(&inst.v, &RatVec::combination(&a, &mins))?;
            let rhs = e.norm(&space, &RatVec::combination(&a, &zs))?;
            let r = &lhs / &rhs;
            Ok(Sample {
                witness: json!({
                    "space": space.to_string(),
                    "blocks": vecs_json(&zs),
                    "coefficients": coeffs_json(&a),
                    "v_norm": q_json(&lhs),
                    "zv_norm": q_json(&rhs),
                    "ratio": q_json(&r),
                }),
                ratio: r,
            })
        })?;
        let mut t = Tally::new();
        t.absorb(out, &bound);
        per.insert(
            format!("{} / {}", inst.z, inst.v),
            json!({"c": q_json(&inst.c), "bound": q_json(&bound), "max_ratio": q_json(&t.max_ratio), "violations": t.violations}),
        );
        total.merge(t);
    }
    let config = json!({
        "seed": cfg.seed,
        "samples": samples,
        "instances": instances.iter().map(|i| json!({"z": i.z.to_string(), "v": i.v.to_string(), "c": q_json(&i.c)})).collect::<Vec<_>>(),
        "bound_overridden": cfg.bound.is_some(),
    });
    Ok(SuiteReport::from_tally(
        "L211",
        config,
        bound_max,
        total,
        json!({"per_instance": per, "derived_constants": derived}),
    ))
}

/// Exact `Z^V` values for `z_n = ½e_{2n} + ½e_{2n+1}` in `c0^V`, `V = ℝ ⊕_1 c0`.
pub fn suite_r212(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let engine = NormEngine::new(cfg.capacity.clone());
    let z = SpaceSpec::C0;
    let v = SpaceSpec::rsum1(SpaceSpec::C0);
    let space = SpaceSpec::zv(z.clone(), v.clone());
    let n_max = cfg.samples.map_or(8, |s| s.clamp(1, 8) as u32);
    let half = q(1, 2);
    let mut failures = Vec::new();
    let mut max_late = Q::zero();
    let mut tuples_checked = 0usize;
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let zn = RatVec::from_pairs([(2 * n, half.clone()), (2 * n + 1, half.clone())])?;
        let norm = engine.norm(&space, &zn)?;
        let witness_tuple = [1, 2 * n + 1, 2 * n + 2];
        let witness_value = engine.zv_tuple_value(&z, &v, &zn, &witness_tuple)?;
        if norm != Q::one() || witness_value != Q::one() {
            failures.push(json!({"n": n, "norm": q_json(&norm), "witness_value": q_json(&witness_value)}));
        }
        // Tuples starting at or after min supp = 2n inside [2n, 2n + 4]:
        // exactly ½ when they stay in [1, max supp + 1], at most ½ beyond.
        let lo = 2 * n;
        let top = 2 * n + 4;
        let span = top - lo + 1;
        let mut late_max = Q::zero();
        for mask in 0u32..(1 << span) {
            let tuple: Vec<u32> = (0..span).filter(|b| mask >> b & 1 == 1).map(|b| lo + b).collect();
            if tuple.len() < 2 {
                continue;
            }
            tuples_checked += 1;
            let value = engine.zv_tuple_value(&z, &v, &zn, &tuple)?;
            let in_range = *tuple.last().expect("nonempty") <= 2 * n + 2;
            if (in_range && value != half) || value > half {
                failures.push(json!({"n": n, "tuple": tuple, "value": q_json(&value)}));
            }
            late_max = late_max.max(value);
        }
        max_late = max_late.clone().max(late_max.clone());
        rows.push(json!({"n": n, "norm": q_json(&norm), "late_start_max": q_json(&late_max)}));
    }
    let bound = cfg.bound.clone().unwrap_or_else(|| half.clone());
    let pass = failures.is_empty() && max_late <= bound;
    Ok(SuiteReport {
        suite: "R212".into(),
        config: json!({"seed": cfg.seed, "n_max": n_max, "space": space.to_string()}),
        pass,
        samples: tuples_checked,
        violations: failures.len(),
        bound: Some(bound),
        max_ratio: Some(max_late),
        witness: failures.first().cloned(),
        details: json!({"per_n": rows}),
    })
}

struct InterleaveInstance {
    z: SpaceSpec,
    v: SpaceSpec,
    m: IndexSeq,
    c: Q,
}

fn l213_instances() -> Result<Vec<InterleaveInstance>> {
    let evens = IndexSeq::arithmetic(2, 2)?;
    let odds = IndexSeq::arithmetic(1, 2)?;
    Ok(vec![
        InterleaveInstance { z: SpaceSpec::L1, v: SpaceSpec::L1, m: evens.clone(), c: qi(1) },
        // Z^{V_M} with V_M = ℓ1: lower constant 2·1.
        InterleaveInstance {
            z: parse_space("zv(schreier(1), l1)")?,
            v: SpaceSpec::L1,
            m: evens,
            c: qi(2),
        },
        // V_M for odd M is again ℝ ⊕_1 c0 (constant 2), so Z^{V_M} has 2·2.
        InterleaveInstance {
            z: parse_space("zv(c0, restrict(rsum1(c0); 1,3,5,...))")?,
            v: parse_space("rsum1(c0)")?,
            m: odds,
            c: qi(4),
        },
    ])
}

/// `W = Z ⊕_∞ V_{ℕ∖M}`: `‖Σ a v_{b_n}‖_V ≤ 2C² ‖Σ a z_n‖_W` with
/// `b_n = min supp z_n`.
pub fn suite_l213(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let samples = cfg.samples_or(500);
    let instances = l213_instances()?;
    let mut total = Tally::new();
    let mut per = serde_json::Map::new();
    let mut bound_max = Q::zero();
    for (idx, inst) in instances.iter().enumerate() {
        let bound = cfg.bound.clone().unwrap_or_else(|| qi(2) * &inst.c * &inst.c);
        bound_max = bound_max.max(bound.clone());
        let w = SpaceSpec::ilv(inst.z.clone(), inst.v.clone(), inst.m.clone());
        let out = run_samples(&cfg.capacity, cfg.seed, 500 + idx as u64, samples, |e, rng| {
            let n = rng.gen_range(1..=4usize);
            let hi = rng.gen_range((n as u32).max(3)..=12);
            let zs = e.block_sequence_with(&w, n, 1, hi, rng)?;
            let a = sample_coefficients(rng, n);
            let mins: Vec<RatVec> = zs.iter().map(|z| RatVec::unit(z.min_supp().expect("nonzero"))).collect();
            let lhs = e.norm(&inst.v, &RatVec::combination(&a, &mins))?;
            let rhs = e.norm(&w, &RatVec::combination(&a, &zs))?;
            let r = &lhs / &rhs;
            Ok(Sample {
                witness: json!({
                    "space": w.to_string(),
                    "blocks": vecs_json(&zs),
                    "coefficients": coeffs_json(&a),
                    "v_norm": q_json(&lhs),
                    "w_norm": q_json(&rhs),
                    "ratio": q_json(&r),
                }),
                ratio: r,
            })
        })?;
        let mut t = Tally::new();
        t.absorb(out, &bound);
        per.insert(
            w.to_string(),
            json!({"c": q_json(&inst.c), "bound": q_json(&bound), "max_ratio": q_json(&t.max_ratio), "violations": t.violations}),
        );
        total.merge(t);
    }
    let config = json!({
        "seed": cfg.seed,
        "samples": samples,
        "instances": instances.iter().map(|i| json!({"z": i.z.to_string(), "v": i.v.to_string(), "m": i.m.to_string(), "c": q_json(&i.c)})).collect::<Vec<_>>(),
        "bound_overridden": cfg.bound.is_some(),
    });
    Ok(SuiteReport::from_tally("L213", config, bound_max, total, json!({"per_instance": per})))
}
