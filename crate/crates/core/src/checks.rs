//! Reference oracles and the suites comparing the fast engines against them:
//! membership, regularity of the families, norm equivalence and right
//! dominance of Schreier bases.

use num_traits::{Signed, Zero};
use rand::Rng;
use serde_json::{json, Value};

use crate::error::Result;
use crate::num::{q_json, qi, Q};
use crate::ordinal::{Class, Ordinal};
use crate::schreier::Schreier;
use crate::spaces::{random_coefficient, RatVec, SpaceSpec};
use crate::suite::{run_samples, Sample, SuiteConfig, SuiteReport, Tally};

/// Membership straight from the recursive definition: every split of `F`
/// into consecutive blocks, and every admissible stage of a limit.
pub fn naive_member(f: &[u32], alpha: &Ordinal) -> bool {
    if f.len() <= 1 {
        return true;
    }
    match alpha.classify() {
        Class::Zero => false,
        Class::Limit => (1..=f[0]).any(|n| naive_member(f, &alpha.fundamental(n.into()).expect("limit"))),
        Class::Successor(beta) => naive_blocks(f, f[0], &beta),
    }
}

fn naive_blocks(f: &[u32], blocks_left: u32, beta: &Ordinal) -> bool {
    if f.is_empty() {
        return true;
    }
    blocks_left > 0
        && (1..=f.len()).any(|cut| naive_member(&f[..cut], beta) && naive_blocks(&f[cut..], blocks_left - 1, beta))
}

/// `‖x‖_α` as the largest `ℓ1` mass over admissible subsets of the support.
pub fn brute_schreier_norm(oracle: &Schreier, alpha: &Ordinal, x: &RatVec) -> Q {
    let supp = x.support();
    let fam = oracle.family(alpha);
    let mut best = Q::zero();
    let mut set = Vec::with_capacity(supp.len());
    for mask in 0u64..(1u64 << supp.len()) {
        set.clear();
        set.extend((0..supp.len()).filter(|b| mask >> b & 1 == 1).map(|b| supp[b]));
        if fam.contains(&set) {
            let total = set.iter().fold(Q::zero(), |a, &i| a + x.get(i).abs());
            if total > best {
                best = total;
            }
        }
    }
    best
}

fn subset_of(mask: u64, n: u32, out: &mut Vec<u32>) {
    out.clear();
    out.extend((0..n).filter(|b| mask >> b & 1 == 1).map(|b| b + 1));
}

fn fail(failures: &mut Vec<Value>, v: Value) {
    if failures.len() < 20 {
        failures.push(v);
    }
}

fn check_report(id: &str, config: Value, checks: usize, failures: Vec<Value>, details: Value) -> SuiteReport {
    SuiteReport {
        suite: id.into(),
        config,
        pass: failures.is_empty(),
        samples: checks,
        violations: failures.len(),
        bound: None,
        max_ratio: None,
        witness: failures.first().cloned(),
        details,
    }
}

/// `S_1` against `|F| ≤ min F` on every subset of `[1..n1]`, and `S_2`
/// against [`naive_member`] on every subset of `[1..n2]`.
pub fn suite_membership(cfg: &SuiteConfig, n1: u32, n2: u32) -> Result<SuiteReport> {
    let oracle = Schreier::new(cfg.capacity.schreier_window);
    let one = Ordinal::from_nat(1);
    let two = Ordinal::from_nat(2);
    let s1 = oracle.family(&one);
    let s2 = oracle.family(&two);
    let mut failures = Vec::new();
    let mut set = Vec::with_capacity(32);
    let mut s1_members = 0u64;
    for mask in 0u64..(1u64 << n1) {
        set.clear();
        let mut m = mask;
        while m != 0 {
            set.push(m.trailing_zeros() + 1);
            m &= m - 1;
        }
        let closed = set.first().is_none_or(|&lo| set.len() as u32 <= lo);
        let got = s1.contains(&set);
        s1_members += got as u64;
        if got != closed {
            fail(&mut failures, json!({"alpha": "1", "set": set, "member": got}));
        }
    }
    let mut s2_members = 0u64;
    for mask in 0u64..(1u64 << n2) {
        subset_of(mask, n2, &mut set);
        let got = s2.contains(&set);
        s2_members += got as u64;
        if got != naive_member(&set, &two) {
            fail(&mut failures, json!({"alpha": "2", "set": set, "member": got}));
        }
    }
    Ok(check_report(
        "SCHREIER",
        json!({"s1_window": n1, "s2_window": n2}),
        (1usize << n1) + (1usize << n2),
        failures,
        json!({"s1_members": s1_members, "s2_members": s2_members}),
    ))
}

/// Hereditary, spreading and last-element shrinking on every subset of
/// `[1..window]`.
pub fn suite_regularity(cfg: &SuiteConfig, window: u32) -> Result<SuiteReport> {
    let alphas = if cfg.alphas.is_empty() {
        ["1", "2", "3", "w", "w+1", "w*2", "w^2"]
            .iter()
            .map(|a| a.parse().expect("fixed ordinal"))
            .collect()
    } else {
        cfg.alphas.clone()
    };
    let oracle = Schreier::new(cfg.capacity.schreier_window);
    let mut failures = Vec::new();
    let mut checks = 0usize;
    let n = 1u64 << window;
    for alpha in &alphas {
        let fam = oracle.family(alpha);
        let member: Vec<bool> = (0..n)
            .map(|mask| {
                let mut s = Vec::new();
                subset_of(mask, window, &mut s);
                fam.contains(&s)
            })
            .collect();
        let elems = |mask: u64| -> Vec<u32> {
            let mut s = Vec::new();
            subset_of(mask, window, &mut s);
            s
        };
        for mask in 0..n {
            if !member[mask as usize] {
                continue;
            }
            // Hereditary: dropping any one element.
            let mut m = mask;
            while m != 0 {
                let bit = m & m.wrapping_neg();
                m &= m - 1;
                checks += 1;
                if !member[(mask & !bit) as usize] {
                    fail(&mut failures, json!({"alpha": alpha.to_string(), "property": "hereditary", "set": elems(mask)}));
                }
            }
            // Last-element shrinking: the top element may move down to any free slot above the rest.
            if mask != 0 {
                let top = 63 - mask.leading_zeros();
                let rest = mask & !(1u64 << top);
                let floor = if rest == 0 { 0 } else { 64 - rest.leading_zeros() };
                for b in floor..top {
                    checks += 1;
                    if !member[(rest | 1u64 << b) as usize] {
                        fail(&mut failures, json!({"alpha": alpha.to_string(), "property": "shrinking", "set": elems(mask), "moved_to": b + 1}));
                    }
                }
            }
        }
        // Spreading: every spread of a member is a member.
        for f in 0..n {
            if !member[f as usize] {
                continue;
            }
            let fe = elems(f);
            for g in 0..n {
                if g.count_ones() != f.count_ones() {
                    continue;
                }
                let ge = elems(g);
                if fe.iter().zip(&ge).all(|(a, b)| a <= b) {
                    checks += 1;
                    if !member[g as usize] {
                        fail(&mut failures, json!({"alpha": alpha.to_string(), "property": "spreading", "set": fe, "spread": ge}));
                    }
                }
            }
        }
    }
    Ok(check_report(
        "REGULARITY",
        json!({"window": window, "alphas": alphas.iter().map(|a| a.to_string()).collect::<Vec<_>>()}),
        checks,
        failures,
        json!({}),
    ))
}

/// The branch-and-bound Schreier norm against brute-force admissible-set
/// enumeration on seeded vectors with at most 12 nonzero coordinates.
pub fn suite_norms(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let samples = cfg.samples_or(500);
    let alphas: Vec<Ordinal> = cfg.alphas_or_ordinals(&[
        Ordinal::from_nat(1),
        Ordinal::from_nat(2),
        Ordinal::from_nat(3),
        Ordinal::omega(),
        "w+1".parse().expect("fixed ordinal"),
    ]);
    let out = run_samples(&cfg.capacity, cfg.seed, 4000, samples, |engine, rng| {
        let alpha = &alphas[rng.gen_range(0..alphas.len())];
        let window = rng.gen_range(1..=cfg.capacity.schreier_window.min(22));
        let nnz = rng.gen_range(1..=12usize.min(window as usize));
        let x = RatVec::from_pairs(
            rand::seq::index::sample(rng, window as usize, nnz)
                .iter()
                .map(|p| (p as u32 + 1, random_coefficient(rng)))
                .collect::<Vec<_>>(),
        )?;
        let fast = engine.norm(&SpaceSpec::Schreier(alpha.clone()), &x)?;
        let slow = brute_schreier_norm(engine.schreier(), alpha, &x);
        Ok(Sample {
            ratio: if fast == slow { Q::zero() } else { qi(1) },
            witness: json!({"alpha": alpha.to_string(), "vector": x.to_json(), "engine": q_json(&fast), "brute_force": q_json(&slow)}),
        })
    })?;
    let mut t = Tally::new();
    t.absorb(out, &Q::zero());
    let mut r = SuiteReport::from_tally(
        "NORMS",
        json!({"seed": cfg.seed, "samples": samples, "alphas": alphas.iter().map(|a| a.to_string()).collect::<Vec<_>>()}),
        Q::zero(),
        t,
        json!({}),
    );
    r.bound = None;
    r.max_ratio = None;
    Ok(r)
}

/// Spreads dominate: `‖Σ a_n e_{k_n}‖ ≤ ‖Σ a_n e_{l_n}‖` whenever `k_n ≤ l_n`.
pub fn suite_right_dominance(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let samples = cfg.samples_or(1000);
    let alphas = cfg.alphas_or_ordinals(&[Ordinal::from_nat(1), Ordinal::from_nat(2), Ordinal::omega()]);
    let bound = cfg.bound.clone().unwrap_or_else(|| qi(1));
    let mut total = Tally::new();
    let mut per_alpha = serde_json::Map::new();
    for (ai, alpha) in alphas.iter().enumerate() {
        let space = SpaceSpec::Schreier(alpha.clone());
        let out = run_samples(&cfg.capacity, cfg.seed, 4100 + ai as u64, samples, |engine, rng| {
            let n = rng.gen_range(1..=6usize);
            let mut k: Vec<u32> = rand::seq::index::sample(rng, 12, n).iter().map(|i| i as u32 + 1).collect();
            k.sort_unstable();
            let mut l = Vec::with_capacity(n);
            let mut floor = 0;
            for &ki in &k {
                let li = ki.max(floor + 1) + rng.gen_range(0..4);
                l.push(li);
                floor = li;
            }
            let a: Vec<Q> = (0..n).map(|_| random_coefficient(rng)).collect();
            let lhs = engine.norm(&space, &RatVec::from_pairs(k.iter().copied().zip(a.iter().cloned()))?)?;
            let rhs = engine.norm(&space, &RatVec::from_pairs(l.iter().copied().zip(a.iter().cloned()))?)?;
            let ratio = &lhs / &rhs;
            Ok(Sample {
                witness: json!({"alpha": alpha.to_string(), "indices": k, "spread": l, "coefficients": a.iter().map(q_json).collect::<Vec<_>>(), "ratio": q_json(&ratio)}),
                ratio,
            })
        })?;
        let mut t = Tally::new();
        t.absorb(out, &bound);
        per_alpha.insert(alpha.to_string(), json!({"max_ratio": q_json(&t.max_ratio), "violations": t.violations}));
        total.merge(t);
    }
    Ok(SuiteReport::from_tally(
        "RDOM",
        crate::suite::config_json(cfg, samples, &alphas, &bound),
        bound,
        total,
        json!({"per_alpha": per_alpha}),
    ))
}
