//! Finite-rank tensors `u = Σ u_ij e_i ⊗ f_j` in `E ⊗_ε F`, viewed as
//! operators `F* → E`, with the square blocking `H_n = span{e_i ⊗ f_j :
//! max(i, j) = n}`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::num::{parse_int, q_json, qi, rational_from, Q};
use crate::ordinal::Ordinal;
use crate::spaces::{parse_space, random_coefficient, random_intervals, NormEngine, RatVec, SpaceSpec};
use crate::suite::{run_samples, Sample, SuiteConfig, SuiteReport, Tally};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorOp {
    pub e_space: SpaceSpec,
    pub f_space: SpaceSpec,
    /// Nonzero entries keyed by `(row, column)`.
    entries: BTreeMap<(u32, u32), Q>,
}

impl TensorOp {
    pub fn zero(e_space: SpaceSpec, f_space: SpaceSpec) -> Self {
        TensorOp { e_space, f_space, entries: BTreeMap::new() }
    }

    pub fn from_entries(
        e_space: SpaceSpec,
        f_space: SpaceSpec,
        entries: impl IntoIterator<Item = ((u32, u32), Q)>,
    ) -> Result<Self> {
        let mut u = TensorOp::zero(e_space, f_space);
        for ((i, j), v) in entries {
            if i == 0 || j == 0 {
                return Err(Error::invalid("tensor indices start at 1"));
            }
            u.add((i, j), &v);
        }
        Ok(u)
    }

    /// `e_i ⊗ f_j`.
    pub fn elementary(e_space: SpaceSpec, f_space: SpaceSpec, i: u32, j: u32) -> Self {
        TensorOp::from_entries(e_space, f_space, [((i, j), Q::one())]).expect("positive indices")
    }

    /// `x ⊗ y`.
    pub fn rank_one(e_space: SpaceSpec, f_space: SpaceSpec, x: &RatVec, y: &RatVec) -> Self {
        let mut u = TensorOp::zero(e_space, f_space);
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                u.add((i, j), &(a * b));
            }
        }
        u
    }

    pub fn get(&self, i: u32, j: u32) -> Q {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Q::zero)
    }

    fn add(&mut self, key: (u32, u32), v: &Q) {
        let e = self.entries.entry(key).or_insert_with(Q::zero);
        *e += v;
        if e.is_zero() {
            self.entries.remove(&key);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(u32, u32), &Q)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn rows(&self) -> Vec<u32> {
        let mut r: Vec<u32> = self.entries.keys().map(|&(i, _)| i).collect();
        r.sort_unstable();
        r.dedup();
        r
    }

    pub fn cols(&self) -> Vec<u32> {
        let mut c: Vec<u32> = self.entries.keys().map(|&(_, j)| j).collect();
        c.sort_unstable();
        c.dedup();
        c
    }

    /// Indices `n` with a nonzero `H_n` component.
    pub fn h_support(&self) -> Vec<u32> {
        let mut s: Vec<u32> = self.entries.keys().map(|&(i, j)| i.max(j)).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// The adjoint `Σ u_ij f_j ⊗ e_i` in `F ⊗_ε E`.
    pub fn transpose(&self) -> TensorOp {
        TensorOp {
            e_space: self.f_space.clone(),
            f_space: self.e_space.clone(),
            entries: self.entries.iter().map(|(&(i, j), v)| ((j, i), v.clone())).collect(),
        }
    }

    pub fn scaled(&self, c: &Q) -> TensorOp {
        let mut u = TensorOp::zero(self.e_space.clone(), self.f_space.clone());
        if !c.is_zero() {
            u.entries = self.entries.iter().map(|(&k, v)| (k, v * c)).collect();
        }
        u
    }

    /// `self + c·other`; both must live in the same spaces.
    pub fn add_scaled(&mut self, other: &TensorOp, c: &Q) {
        for (&k, v) in &other.entries {
            self.add(k, &(v * c));
        }
    }

    pub fn sum(e_space: &SpaceSpec, f_space: &SpaceSpec, coeffs: &[Q], us: &[TensorOp]) -> TensorOp {
        let mut out = TensorOp::zero(e_space.clone(), f_space.clone());
        for (c, u) in coeffs.iter().zip(us) {
            out.add_scaled(u, c);
        }
        out
    }

    /// Keeps entries with `rows(i) && cols(j)`: `P_A u Q_B^*`.
    pub fn restricted(&self, rows: impl Fn(u32) -> bool, cols: impl Fn(u32) -> bool) -> TensorOp {
        TensorOp {
            e_space: self.e_space.clone(),
            f_space: self.f_space.clone(),
            entries: self
                .entries
                .iter()
                .filter(|(&(i, j), _)| rows(i) && cols(j))
                .map(|(&k, v)| (k, v.clone()))
                .collect(),
        }
    }

    /// `u(g) = Σ_ij u_ij g(f_j) e_i` for `g` given by its coordinates.
    pub fn apply_dual(&self, g: &RatVec) -> RatVec {
        let mut out = RatVec::zero();
        for (&(i, j), v) in &self.entries {
            let gj = g.get(j);
            if !gj.is_zero() {
                out.set(i, out.get(i) + v * gj);
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "e_space": self.e_space.to_string(),
            "f_space": self.f_space.to_string(),
            "entries": self
                .entries
                .iter()
                .map(|(&(i, j), v)| {
                    let qv = q_json(v);
                    json!([i, j, qv[0], qv[1]])
                })
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |name: &str| {
            v.get(name)
                .and_then(Value::as_str)
                .ok_or_else(|| Error::invalid(format!("tensor needs a string field `{name}`")))
        };
        let e_space = parse_space(field("e_space")?)?;
        let f_space = parse_space(field("f_space")?)?;
        let items = v
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::invalid("tensor needs an `entries` array"))?;
        let mut seen = std::collections::BTreeSet::new();
        let mut entries = Vec::new();
        for item in items {
            let quad = item
                .as_array()
                .filter(|t| t.len() == 4)
                .ok_or_else(|| Error::invalid("tensor entries must be [i, j, num, den]"))?;
            let index = |k: usize| {
                quad[k]
                    .as_u64()
                    .filter(|&i| i >= 1 && i <= u64::from(u32::MAX))
                    .map(|i| i as u32)
                    .ok_or_else(|| Error::invalid("tensor indices must be positive integers"))
            };
            let key = (index(0)?, index(1)?);
            if !seen.insert(key) {
                return Err(Error::invalid(format!("entry ({}, {}) repeated", key.0, key.1)));
            }
            entries.push((key, rational_from(parse_int(&quad[2])?, parse_int(&quad[3])?)?));
        }
        TensorOp::from_entries(e_space, f_space, entries)
    }
}

fn check_window(engine: &NormEngine, u: &TensorOp) -> Result<()> {
    let limit = engine.capacity().tensor_window;
    let top = u.entries.keys().map(|&(i, j)| i.max(j)).max().unwrap_or(0);
    if top > limit {
        return Err(Error::capacity("tensor window", top as usize, limit as usize));
    }
    Ok(())
}

/// `‖u‖_ε = max_h ‖uᵀh‖_F` over the signed functionals `h` norming `E` on
/// the rows of `u`. A global sign flip of `h` leaves the value unchanged.
pub fn injective_norm(engine: &NormEngine, u: &TensorOp) -> Result<Q> {
    check_window(engine, u)?;
    if u.is_zero() {
        return Ok(Q::zero());
    }
    let rows = u.rows();
    let functionals = engine.signed_functionals(&u.e_space, &rows)?;
    let mut best = Q::zero();
    for h in functionals.iter().filter(|h| h.0.first().is_none_or(|&(_, s)| s > 0)) {
        let mut image = RatVec::zero();
        for &(i, s) in &h.0 {
            for (&(_, j), v) in u.entries.range((i, 0)..=(i, u32::MAX)) {
                let term = if s > 0 { v.clone() } else { -v };
                image.set(j, image.get(j) + term);
            }
        }
        let value = engine.norm(&u.f_space, &image)?;
        if value > best {
            best = value;
        }
    }
    Ok(best)
}

/// `u / ‖u‖_ε`.
pub fn normalize_tensor(engine: &NormEngine, u: &TensorOp) -> Result<TensorOp> {
    let n = injective_norm(engine, u)?;
    if n.is_zero() {
        return Err(Error::invalid("cannot normalize the zero tensor"));
    }
    Ok(u.scaled(&(Q::one() / n)))
}

/// `P^H_n u = P_{[1,n]} u Q*_{[1,n]} − P_{[1,n)} u Q*_{[1,n)}`.
pub fn square_block_projection(u: &TensorOp, n: u32) -> TensorOp {
    let mut out = u.restricted(|i| i <= n, |j| j <= n);
    let inner = u.restricted(|i| i < n, |j| j < n);
    out.add_scaled(&inner, &-Q::one());
    out
}

/// Successive `H`-blocks: `max H-supp u_n < min H-supp u_{n+1}`, all nonzero.
pub fn is_h_block_sequence(us: &[TensorOp]) -> bool {
    let mut last = 0;
    for u in us {
        let s = u.h_support();
        match (s.first(), s.last()) {
            (Some(&lo), Some(&hi)) if lo > last => last = hi,
            _ => return false,
        }
    }
    true
}

/// `u_n = a_n + b_n` with `a_n = P_{[m_n, m_{n+1})} u_n Q*_{[1, m_n)}` and
/// `b_n = u_n Q*_{[m_n, m_{n+1})}` for `n ≥ 2`; the first block is all `a`.
pub fn lemma66_split(us: &[TensorOp]) -> Result<(Vec<TensorOp>, Vec<TensorOp>)> {
    if !is_h_block_sequence(us) {
        return Err(Error::contract("input is not a block sequence of the square blocking"));
    }
    let m: Vec<u32> = us.iter().map(|u| u.h_support()[0]).collect();
    let mut a = Vec::with_capacity(us.len());
    let mut b = Vec::with_capacity(us.len());
    for (n, u) in us.iter().enumerate() {
        if n == 0 {
            a.push(u.clone());
            b.push(TensorOp::zero(u.e_space.clone(), u.f_space.clone()));
            continue;
        }
        let lo = m[n];
        let hi = m.get(n + 1).copied().unwrap_or(u32::MAX);
        a.push(u.restricted(|i| lo <= i && i < hi, |j| j < lo));
        b.push(u.restricted(|_| true, |j| lo <= j && j < hi));
    }
    Ok((a, b))
}

/// Seeded normalized `H`-block sequence in `[1..hi]²` with `count` blocks.
pub fn random_h_blocks(
    engine: &NormEngine,
    e_space: &SpaceSpec,
    f_space: &SpaceSpec,
    count: usize,
    hi: u32,
    rng: &mut impl Rng,
) -> Result<Vec<TensorOp>> {
    let bands = random_intervals(rng, 1, hi, count);
    let mut out = Vec::with_capacity(count);
    for (lo, top) in bands {
        let mut u = TensorOp::zero(e_space.clone(), f_space.clone());
        while u.is_zero() {
            for _ in 0..rng.gen_range(1..=4) {
                let n = rng.gen_range(lo..=top);
                let other = rng.gen_range(1..=n);
                let key = if rng.gen_bool(0.5) { (n, other) } else { (other, n) };
                u.add(key, &random_coefficient(rng));
            }
        }
        out.push(normalize_tensor(engine, &u)?);
    }
    Ok(out)
}

fn tensor_json(us: &[TensorOp]) -> Value {
    Value::Array(us.iter().map(TensorOp::to_json).collect())
}

/// Operators with ranges in successive coordinate bands `[k_{n−1}, k_n)` of
/// `E = X_α`, `k_0 = 1`: `‖Σ u_n‖ ≤ 2 ‖Σ ‖u_n‖ e_{k_{n−1}}‖_{X_α}`.
pub fn suite_p61(cfg: &SuiteConfig) -> Result<SuiteReport> {
    tensor_suite(cfg, "P61", 1000, |engine, rng, alpha| {
        let x = SpaceSpec::Schreier(alpha.clone());
        let window = cfg.capacity.tensor_window.min(10);
        let count = rng.gen_range(1..=4usize);
        let bands = random_intervals(rng, 1, window, count);
        let mut us = Vec::with_capacity(count);
        let mut norms = Vec::with_capacity(count);
        for &(lo, top) in &bands {
            let mut u = TensorOp::zero(x.clone(), x.clone());
            while u.is_zero() {
                for _ in 0..rng.gen_range(1..=4) {
                    u.add((rng.gen_range(lo..=top), rng.gen_range(1..=window)), &random_coefficient(rng));
                }
            }
            norms.push(injective_norm(engine, &u)?);
            us.push(u);
        }
        let ones = vec![Q::one(); count];
        let total = injective_norm(engine, &TensorOp::sum(&x, &x, &ones, &us))?;
        let refs = RatVec::from_pairs(bands.iter().zip(&norms).map(|(&(lo, _), n)| (lo, n.clone())))?;
        let rhs = engine.norm(&x, &refs)?;
        let ratio = &total / &rhs;
        Ok(Sample {
            witness: json!({
                "alpha": alpha.to_string(),
                "bands": bands,
                "operators": tensor_json(&us),
                "lhs": q_json(&total),
                "rhs": q_json(&rhs),
                "ratio": q_json(&ratio),
            }),
            ratio,
        })
    })
}

/// Normalized `H`-blocks in `X_α ⊗_ε X_α`: `‖Σ c_n u_n‖ ≤ 4 ‖Σ c_n e_{m_n}‖`.
/// Each sample also checks the split `u_n = a_n + b_n` with parts of norm ≤ 1.
pub fn suite_l66(cfg: &SuiteConfig) -> Result<SuiteReport> {
    tensor_suite(cfg, "L66", 2000, |engine, rng, alpha| {
        let x = SpaceSpec::Schreier(alpha.clone());
        let window = cfg.capacity.tensor_window.min(10);
        let count = rng.gen_range(1..=4usize);
        let hi = rng.gen_range((count as u32).max(3)..=window);
        let us = random_h_blocks(engine, &x, &x, count, hi, rng)?;
        let (a, b) = lemma66_split(&us)?;
        let mut split_ok = true;
        for n in 0..count {
            let mut s = a[n].clone();
            s.add_scaled(&b[n], &Q::one());
            split_ok &= s == us[n]
                && injective_norm(engine, &a[n])? <= Q::one()
                && injective_norm(engine, &b[n])? <= Q::one();
        }
        let c: Vec<Q> = if rng.gen_bool(0.25) {
            vec![Q::one(); count]
        } else {
            (0..count).map(|_| random_coefficient(rng)).collect()
        };
        let lhs = injective_norm(engine, &TensorOp::sum(&x, &x, &c, &us))?;
        let m: Vec<u32> = us.iter().map(|u| u.h_support()[0]).collect();
        let rhs = engine.norm(&x, &RatVec::from_pairs(m.iter().zip(&c).map(|(&k, v)| (k, v.clone())))?)?;
        let ratio = &lhs / &rhs;
        Ok(Sample {
            witness: json!({
                "alpha": alpha.to_string(),
                "blocks": tensor_json(&us),
                "coefficients": c.iter().map(q_json).collect::<Vec<_>>(),
                "min_supports": m,
                "split_ok": split_ok,
                "lhs": q_json(&lhs),
                "rhs": q_json(&rhs),
                "ratio": q_json(&ratio),
            }),
            // A broken split is reported as an unbounded ratio.
            ratio: if split_ok { ratio } else { qi(1_000_000) },
        })
    })
}

fn tensor_suite<F>(cfg: &SuiteConfig, id: &str, family: u64, sample: F) -> Result<SuiteReport>
where
    F: Fn(&NormEngine, &mut rand_chacha::ChaCha8Rng, &Ordinal) -> Result<Sample> + Sync,
{
    let alphas = cfg.alphas_or(&[1, 2]);
    let samples = cfg.samples_or(200);
    let default_bound = if id == "L66" { qi(4) } else { qi(2) };
    let bound = cfg.bound.clone().unwrap_or(default_bound);
    let mut total = Tally::new();
    let mut per_alpha = serde_json::Map::new();
    for (k, alpha) in alphas.iter().enumerate() {
        let out = run_samples(&cfg.capacity, cfg.seed, family + k as u64, samples, |e, rng| sample(e, rng, alpha))?;
        let mut t = Tally::new();
        t.absorb(out, &bound);
        per_alpha.insert(alpha.to_string(), json!({"max_ratio": q_json(&t.max_ratio), "violations": t.violations}));
        total.merge(t);
    }
    Ok(SuiteReport::from_tally(
        id,
        crate::suite::config_json(cfg, samples, &alphas, &bound),
        bound,
        total,
        json!({"per_alpha": per_alpha}),
    ))
}

/// Sums and transposes of sampled operators: `Σ_n P^H_n u = u`, the
/// components are disjoint, and `‖u‖_ε = ‖uᵀ‖_ε`.
pub fn suite_tensor_identities(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let samples = cfg.samples_or(200);
    let spaces = [
        SpaceSpec::C0,
        SpaceSpec::L1,
        SpaceSpec::Schreier(Ordinal::from_nat(1)),
        SpaceSpec::Schreier(Ordinal::from_nat(2)),
    ];
    let out = run_samples(&cfg.capacity, cfg.seed, 3000, samples, |engine, rng| {
        let e = &spaces[rng.gen_range(0..spaces.len())];
        let f = &spaces[rng.gen_range(0..spaces.len())];
        let window = cfg.capacity.tensor_window.min(10);
        let mut u = TensorOp::zero(e.clone(), f.clone());
        for _ in 0..rng.gen_range(1..=8) {
            u.add((rng.gen_range(1..=window), rng.gen_range(1..=window)), &random_coefficient(rng));
        }
        let mut rebuilt = TensorOp::zero(e.clone(), f.clone());
        let mut disjoint = true;
        for n in 1..=window {
            let p = square_block_projection(&u, n);
            disjoint &= p.h_support().iter().all(|&k| k == n);
            rebuilt.add_scaled(&p, &Q::one());
        }
        let norm = injective_norm(engine, &u)?;
        let norm_t = injective_norm(engine, &u.transpose())?;
        let ok = rebuilt == u && disjoint && norm == norm_t;
        Ok(Sample {
            ratio: if ok { Q::zero() } else { qi(1) },
            witness: json!({
                "operator": u.to_json(),
                "reconstructed": rebuilt == u,
                "components_disjoint": disjoint,
                "norm": q_json(&norm),
                "transpose_norm": q_json(&norm_t),
            }),
        })
    })?;
    let mut t = Tally::new();
    t.absorb(out, &Q::zero());
    let mut report = SuiteReport::from_tally("TENSOR", json!({"seed": cfg.seed, "samples": samples}), Q::zero(), t, json!({}));
    report.bound = None;
    report.max_ratio = None;
    Ok(report)
}

/// `max_{A, B} max_{signs} Σ_{i∈A, j∈B} s_i t_j u_ij` over norming sets of
/// both spaces: a bilinear form over both extreme-point lists.
#[cfg(test)]
fn cut_norm_oracle(engine: &NormEngine, u: &TensorOp) -> Q {
    use num_traits::Signed;
    let rows = engine.positive_sets(&u.e_space, &u.rows()).unwrap();
    let cols = engine.positive_sets(&u.f_space, &u.cols()).unwrap();
    let mut best = Q::zero();
    for a in &rows {
        for b in &cols {
            for sa in 0u32..(1 << a.len()) {
                for sb in 0u32..(1 << b.len()) {
                    let mut total = Q::zero();
                    for (x, &i) in a.iter().enumerate() {
                        for (y, &j) in b.iter().enumerate() {
                            let v = u.get(i, j);
                            if (sa >> x & 1) ^ (sb >> y & 1) == 1 {
                                total -= v;
                            } else {
                                total += v;
                            }
                        }
                    }
                    best = best.max(total.abs());
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::q;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sp(s: &str) -> SpaceSpec {
        parse_space(s).unwrap()
    }

    #[test]
    fn documented_norms() {
        let e = NormEngine::default();
        for (a, b) in [("c0", "l1"), ("schreier(1)", "schreier(2)"), ("l1", "c0")] {
            assert_eq!(injective_norm(&e, &TensorOp::elementary(sp(a), sp(b), 3, 5)).unwrap(), qi(1));
        }
        let diag = TensorOp::from_entries(sp("c0"), sp("c0"), [((1, 1), qi(1)), ((2, 2), qi(1))]).unwrap();
        assert_eq!(injective_norm(&e, &diag).unwrap(), qi(1));
        let r1 = TensorOp::rank_one(sp("c0"), sp("schreier(1)"), &RatVec::unit(1), &RatVec::from_pairs([(1, qi(1)), (2, qi(1))]).unwrap());
        assert_eq!(injective_norm(&e, &r1).unwrap(), qi(1));
        // ℓ1 ⊗_ε ℓ1 is not ℓ1 of the entries: the 2×2 Hadamard pattern has norm 2.
        let h = TensorOp::from_entries(sp("l1"), sp("l1"), [((1, 1), qi(1)), ((1, 2), qi(1)), ((2, 1), qi(1)), ((2, 2), qi(-1))]).unwrap();
        assert_eq!(injective_norm(&e, &h).unwrap(), qi(2));
    }

    #[test]
    fn rank_one_norm_is_product() {
        let e = NormEngine::default();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..40 {
            let (a, b) = (sp("schreier(1)"), sp("rsum1(c0)"));
            let x = e.block_sequence_with(&a, 1, 1, 8, &mut rng).unwrap().remove(0).scaled(&q(3, 2));
            let y = e.block_sequence_with(&b, 1, 1, 8, &mut rng).unwrap().remove(0).scaled(&q(-1, 3));
            let u = TensorOp::rank_one(a.clone(), b.clone(), &x, &y);
            assert_eq!(injective_norm(&e, &u).unwrap(), e.norm(&a, &x).unwrap() * e.norm(&b, &y).unwrap());
        }
    }

    #[test]
    fn matches_bilinear_oracle() {
        let e = NormEngine::default();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let spaces = ["c0", "l1", "schreier(1)", "schreier(2)", "rsum1(c0)"];
        for _ in 0..120 {
            let a = sp(spaces[rng.gen_range(0..spaces.len())]);
            let b = sp(spaces[rng.gen_range(0..spaces.len())]);
            let mut u = TensorOp::zero(a, b);
            for _ in 0..rng.gen_range(1..=6) {
                u.add((rng.gen_range(1..=6), rng.gen_range(1..=6)), &random_coefficient(&mut rng));
            }
            let n = injective_norm(&e, &u).unwrap();
            assert_eq!(n, cut_norm_oracle(&e, &u), "{}", u.to_json());
            assert_eq!(n, injective_norm(&e, &u.transpose()).unwrap());
        }
    }

    #[test]
    fn projections() {
        let u = TensorOp::elementary(sp("c0"), sp("c0"), 2, 1);
        assert_eq!(square_block_projection(&u, 2), u);
        assert!(square_block_projection(&u, 1).is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..50 {
            let mut u = TensorOp::zero(sp("l1"), sp("c0"));
            for _ in 0..6 {
                u.add((rng.gen_range(1..=7), rng.gen_range(1..=7)), &random_coefficient(&mut rng));
            }
            let mut sum = TensorOp::zero(sp("l1"), sp("c0"));
            for n in 1..=7 {
                let p = square_block_projection(&u, n);
                for m in 1..=7 {
                    let pp = square_block_projection(&p, m);
                    assert!(if m == n { pp == p } else { pp.is_zero() });
                }
                sum.add_scaled(&p, &Q::one());
            }
            assert_eq!(sum, u);
        }
    }

    #[test]
    fn split_identities() {
        let e = NormEngine::default();
        let x = sp("schreier(1)");
        let single = vec![normalize_tensor(&e, &TensorOp::elementary(x.clone(), x.clone(), 2, 3)).unwrap()];
        let (a, b) = lemma66_split(&single).unwrap();
        assert_eq!(a[0], single[0]);
        assert!(b[0].is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let us = random_h_blocks(&e, &x, &x, 2, 9, &mut rng).unwrap();
            let (a, b) = lemma66_split(&us).unwrap();
            for n in 0..2 {
                let mut s = a[n].clone();
                s.add_scaled(&b[n], &Q::one());
                assert_eq!(s, us[n]);
                assert!(injective_norm(&e, &a[n]).unwrap() <= Q::one());
                assert!(injective_norm(&e, &b[n]).unwrap() <= Q::one());
            }
        }
        let overlapping = vec![single[0].clone(), single[0].clone()];
        assert!(lemma66_split(&overlapping).is_err());
    }

    #[test]
    fn json_round_trip_and_capacity() {
        let u = TensorOp::from_entries(sp("schreier(1)"), sp("c0"), [((1, 2), q(1, 2)), ((3, 1), qi(-2))]).unwrap();
        assert_eq!(TensorOp::from_json(&u.to_json()).unwrap(), u);
        assert!(TensorOp::from_json(&json!({"e_space": "c0", "f_space": "c0", "entries": [[0, 1, 1, 1]]})).is_err());
        let e = NormEngine::default();
        let far = TensorOp::elementary(sp("c0"), sp("c0"), 11, 1);
        assert!(matches!(injective_norm(&e, &far), Err(Error::Capacity { .. })));
    }

    #[test]
    fn suites_pass() {
        let cfg = SuiteConfig { samples: Some(25), ..SuiteConfig::default() };
        for run in [suite_p61, suite_l66, suite_tensor_identities] {
            let r = run(&cfg).unwrap();
            assert!(r.pass, "{}", r.to_json());
        }
    }
}
