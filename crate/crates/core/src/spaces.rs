//! Exact norms of the sequence spaces used throughout: Schreier spaces, `c0`,
//! `ℓ1`, `ℝ ⊕_1 V`, the `Z^V` renorming, subsequence restrictions and the
//! `⊕_∞` interleaving.
//!
//! Every space here has a normalized 1-unconditional basis whose norm is a
//! maximum of 0/1 functionals: `‖x‖ = max_{A ∈ 𝒜} Σ_{i∈A} |x_i|` for a
//! hereditary family `𝒜`. Norms therefore see only magnitudes, and after
//! scaling a vector by the common denominator of its coordinates every norm
//! is an integer. The engine works on those integers.
//!
//! `Z^V` breakpoint tuples range over `[1, max supp x + 1]`: a breakpoint
//! beyond `max supp x + 1` only opens segments on which `x` vanishes, and
//! zero segments add nothing to the `V`-vector.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::config::Capacity;
use crate::error::{Error, Result};
use crate::num::{common_denominator, parse_int, q, q_json, q_u128, scaled_magnitude, Q};
use crate::ordinal::{parse_ordinal, Ordinal};
use crate::schreier::{FinSet, Schreier};

/// A finitely supported vector with exact rational coordinates on `ℕ`.
#[derive(Clone, PartialEq, Eq, Debug, Default, Hash)]
pub struct RatVec {
    coords: BTreeMap<u32, Q>,
}

impl RatVec {
    pub fn zero() -> Self {
        RatVec::default()
    }

    /// The basis vector `e_k`.
    pub fn unit(k: u32) -> Self {
        let mut v = RatVec::zero();
        v.set(k, Q::one());
        v
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, Q)>) -> Result<Self> {
        let mut v = RatVec::zero();
        for (i, c) in pairs {
            if i == 0 {
                return Err(Error::invalid("vector indices start at 1"));
            }
            let total = v.get(i) + c;
            v.set(i, total);
        }
        Ok(v)
    }

    /// Sets a coordinate; zero removes it.
    pub fn set(&mut self, index: u32, value: Q) {
        assert!(index >= 1, "vector indices start at 1");
        if value.is_zero() {
            self.coords.remove(&index);
        } else {
            self.coords.insert(index, value);
        }
    }

    pub fn get(&self, index: u32) -> Q {
        self.coords.get(&index).cloned().unwrap_or_else(Q::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Q)> + '_ {
        self.coords.iter().map(|(&i, c)| (i, c))
    }

    pub fn support(&self) -> Vec<u32> {
        self.coords.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.coords.len()
    }

    pub fn min_supp(&self) -> Option<u32> {
        self.coords.keys().next().copied()
    }

    pub fn max_supp(&self) -> Option<u32> {
        self.coords.keys().next_back().copied()
    }

    pub fn scaled(&self, factor: &Q) -> RatVec {
        let mut out = RatVec::zero();
        for (i, c) in self.iter() {
            out.set(i, c * factor);
        }
        out
    }

    pub fn add_scaled(&mut self, other: &RatVec, factor: &Q) {
        for (i, c) in other.iter() {
            let total = self.get(i) + c * factor;
            self.set(i, total);
        }
    }

    /// `Σ a_n x_n`.
    pub fn combination(coeffs: &[Q], xs: &[RatVec]) -> RatVec {
        assert_eq!(coeffs.len(), xs.len());
        let mut out = RatVec::zero();
        for (a, x) in coeffs.iter().zip(xs) {
            out.add_scaled(x, a);
        }
        out
    }

    /// Coordinates restricted to `lo ≤ i < hi`.
    pub fn restricted(&self, lo: u32, hi: u32) -> RatVec {
        RatVec {
            coords: self.coords.range(lo..hi).map(|(&i, c)| (i, c.clone())).collect(),
        }
    }

    /// Relabels indices through `f`, which must be injective.
    pub fn map_indices(&self, mut f: impl FnMut(u32) -> Option<u32>) -> Result<RatVec> {
        let mut out = RatVec::zero();
        for (i, c) in self.iter() {
            let j = f(i).ok_or_else(|| Error::invalid(format!("index {i} has no image")))?;
            out.set(j, c.clone());
        }
        Ok(out)
    }

    /// Integer magnitudes `|x_i| · L` for the least common denominator `L`.
    pub fn magnitudes(&self) -> Result<(Vec<(u32, u128)>, BigInt)> {
        let scale = common_denominator(self.coords.values());
        let mags = self
            .iter()
            .map(|(i, c)| Ok((i, scaled_magnitude(c, &scale)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok((mags, scale))
    }

    /// JSON form: `[[index, num, den], …]` in index order.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.iter()
                .map(|(i, c)| {
                    let pair = q_json(c);
                    Value::Array(vec![Value::from(i), pair[0].clone(), pair[1].clone()])
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let items = v
            .as_array()
            .ok_or_else(|| Error::invalid("vector must be an array of [index, num, den]"))?;
        let mut out = RatVec::zero();
        for item in items {
            let triple = item
                .as_array()
                .filter(|t| t.len() == 3)
                .ok_or_else(|| Error::invalid("vector entries must be [index, num, den]"))?;
            let index = triple[0]
                .as_u64()
                .filter(|&i| i >= 1 && i <= u64::from(u32::MAX))
                .ok_or_else(|| Error::invalid("vector index must be a positive integer"))?
                as u32;
            if out.coords.contains_key(&index) {
                return Err(Error::invalid(format!("index {index} repeated")));
            }
            let value = crate::num::rational_from(parse_int(&triple[1])?, parse_int(&triple[2])?)?;
            out.set(index, value);
        }
        Ok(out)
    }
}

impl fmt::Display for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (i, c)) in self.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})e{i}")?;
        }
        Ok(())
    }
}

/// An increasing index list `m_1 < m_2 < …`, optionally continued
/// arithmetically with the last listed step (`2,4,6,...`).
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct IndexSeq {
    prefix: Vec<u32>,
    step: Option<u32>,
}

impl IndexSeq {
    pub fn finite(prefix: Vec<u32>) -> Result<Self> {
        IndexSeq::validate(&prefix)?;
        Ok(IndexSeq { prefix, step: None })
    }

    /// `first, first + step, first + 2·step, …`.
    pub fn arithmetic(first: u32, step: u32) -> Result<Self> {
        if first == 0 || step == 0 {
            return Err(Error::invalid("arithmetic index list needs positive start and step"));
        }
        Ok(IndexSeq {
            prefix: vec![first, first + step],
            step: Some(step),
        })
    }

    fn validate(prefix: &[u32]) -> Result<()> {
        if prefix.is_empty() {
            return Err(Error::invalid("index list is empty"));
        }
        if prefix[0] == 0 || prefix.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("index list must be strictly increasing positive integers"));
        }
        Ok(())
    }

    /// `m_n` for `n ≥ 1`.
    pub fn get(&self, n: u32) -> Option<u32> {
        let len = self.prefix.len() as u32;
        if n == 0 {
            return None;
        }
        if n <= len {
            return Some(self.prefix[n as usize - 1]);
        }
        let step = self.step?;
        let last = *self.prefix.last()?;
        last.checked_add(step.checked_mul(n - len)?)
    }

    /// The `n` with `m_n = k`.
    pub fn position(&self, k: u32) -> Option<u32> {
        if let Ok(p) = self.prefix.binary_search(&k) {
            return Some(p as u32 + 1);
        }
        let step = self.step?;
        let last = *self.prefix.last()?;
        (k > last && (k - last) % step == 0).then(|| self.prefix.len() as u32 + (k - last) / step)
    }

    pub fn contains(&self, k: u32) -> bool {
        self.position(k).is_some()
    }
}

impl fmt::Display for IndexSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.prefix.iter().map(u32::to_string).collect();
        f.write_str(&items.join(","))?;
        if self.step.is_some() {
            f.write_str(",...")?;
        }
        Ok(())
    }
}

/// Algebraic description of a norm on `c00`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub enum SpaceSpec {
    C0,
    L1,
    Schreier(Ordinal),
    /// `ℝ ⊕_1 V`: index 1 is the scalar, index `k ≥ 2` is `v_{k-1}`.
    DirectSum1(Box<SpaceSpec>),
    /// `Z^V`, the base `Z` with its coordinate decomposition.
    ZV(Box<SpaceSpec>, Box<SpaceSpec>),
    /// `V_M`: coordinate `n` is `v_{m_n}`.
    Restrict(Box<SpaceSpec>, IndexSeq),
    /// `Z ⊕_∞ V_{ℕ∖M}`: index `m_k` is `Z`'s coordinate `k`, any other
    /// index `n` is `v_n`.
    InterleaveInf(Box<SpaceSpec>, Box<SpaceSpec>, IndexSeq),
}

impl SpaceSpec {
    pub fn schreier(alpha: Ordinal) -> Self {
        SpaceSpec::Schreier(alpha)
    }

    pub fn rsum1(v: SpaceSpec) -> Self {
        SpaceSpec::DirectSum1(Box::new(v))
    }

    pub fn zv(z: SpaceSpec, v: SpaceSpec) -> Self {
        SpaceSpec::ZV(Box::new(z), Box::new(v))
    }

    pub fn restrict(v: SpaceSpec, m: IndexSeq) -> Self {
        SpaceSpec::Restrict(Box::new(v), m)
    }

    pub fn ilv(z: SpaceSpec, v: SpaceSpec, m: IndexSeq) -> Self {
        SpaceSpec::InterleaveInf(Box::new(z), Box::new(v), m)
    }

    /// All constructions preserve a normalized 1-unconditional basis.
    pub fn is_one_unconditional(&self) -> bool {
        true
    }

    /// Projection constant of the coordinate decomposition; 1-unconditional
    /// bases are bimonotone.
    pub fn projection_constant(&self) -> Q {
        Q::one()
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSpec::C0 => f.write_str("c0"),
            SpaceSpec::L1 => f.write_str("l1"),
            SpaceSpec::Schreier(a) => write!(f, "schreier({a})"),
            SpaceSpec::DirectSum1(v) => write!(f, "rsum1({v})"),
            SpaceSpec::ZV(z, v) => write!(f, "zv({z}, {v})"),
            SpaceSpec::Restrict(v, m) => write!(f, "restrict({v}; {m})"),
            SpaceSpec::InterleaveInf(z, v, m) => write!(f, "ilv({z}, {v}; {m})"),
        }
    }
}

impl FromStr for SpaceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_space(s)
    }
}

/// Parses the space grammar, e.g. `zv(c0, rsum1(c0))`.
pub fn parse_space(text: &str) -> Result<SpaceSpec> {
    let mut p = SpaceParser { src: text, pos: 0 };
    let space = p.space()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(Error::parse(p.pos, "unexpected trailing input"));
    }
    Ok(space)
}

struct SpaceParser<'a> {
    src: &'a str,
    pos: usize,
}

impl SpaceParser<'_> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token) {
            self.pos += token.len();
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected `{token}`")))
        }
    }

    fn ident(&mut self) -> &str {
        self.skip_ws();
        let start = self.pos;
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn space(&mut self) -> Result<SpaceSpec> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let name = self.ident().to_string();
        match name.as_str() {
            "c0" => Ok(SpaceSpec::C0),
            "l1" => Ok(SpaceSpec::L1),
            "schreier" => {
                self.expect("(")?;
                let alpha = self.ordinal()?;
                self.expect(")")?;
                Ok(SpaceSpec::Schreier(alpha))
            }
            "rsum1" => {
                self.expect("(")?;
                let v = self.space()?;
                self.expect(")")?;
                Ok(SpaceSpec::rsum1(v))
            }
            "zv" => {
                self.expect("(")?;
                let z = self.space()?;
                self.expect(",")?;
                let v = self.space()?;
                self.expect(")")?;
                Ok(SpaceSpec::zv(z, v))
            }
            "restrict" => {
                self.expect("(")?;
                let v = self.space()?;
                self.expect(";")?;
                let m = self.index_seq()?;
                self.expect(")")?;
                Ok(SpaceSpec::restrict(v, m))
            }
            "ilv" => {
                self.expect("(")?;
                let z = self.space()?;
                self.expect(",")?;
                let v = self.space()?;
                self.expect(";")?;
                let m = self.index_seq()?;
                self.expect(")")?;
                Ok(SpaceSpec::ilv(z, v, m))
            }
            "" => Err(Error::parse(start, "expected a space")),
            other => Err(Error::parse(start, format!("unknown space `{other}`"))),
        }
    }

    /// The ordinal runs to the `)` that closes `schreier(`.
    fn ordinal(&mut self) -> Result<Ordinal> {
        self.skip_ws();
        let start = self.pos;
        let mut depth = 0usize;
        let mut end = None;
        for (off, ch) in self.src[start..].char_indices() {
            match ch {
                '(' => depth += 1,
                ')' if depth == 0 => {
                    end = Some(start + off);
                    break;
                }
                ')' => depth -= 1,
                _ => {}
            }
        }
        let end = end.ok_or_else(|| Error::parse(start, "unclosed `schreier(`"))?;
        let alpha = parse_ordinal(&self.src[start..end])
            .map_err(|e| match e {
                Error::Parse { position, message } => Error::parse(start + position, message),
                other => other,
            })?;
        self.pos = end;
        Ok(alpha)
    }

    fn index_seq(&mut self) -> Result<IndexSeq> {
        let mut prefix = Vec::new();
        let mut open = false;
        loop {
            self.skip_ws();
            if self.src[self.pos..].starts_with("...") {
                self.pos += 3;
                open = true;
                break;
            }
            let start = self.pos;
            while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let n: u32 = self.src[start..self.pos]
                .parse()
                .map_err(|_| Error::parse(start, "expected an index"))?;
            prefix.push(n);
            self.skip_ws();
            if self.src[self.pos..].starts_with(',') {
                self.pos += 1;
            } else {
                break;
            }
        }
        let at = self.pos;
        IndexSeq::validate(&prefix).map_err(|e| Error::parse(at, e.to_string()))?;
        if !open {
            return Ok(IndexSeq { prefix, step: None });
        }
        if prefix.len() < 2 {
            return Err(Error::parse(at, "`...` needs two listed indices to fix the step"));
        }
        let step = prefix[prefix.len() - 1] - prefix[prefix.len() - 2];
        Ok(IndexSeq {
            prefix,
            step: Some(step),
        })
    }
}

/// A functional `Σ σ_i e*_i` with signs `σ_i = ±1` on a finite set.
#[derive(Clone, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct SignedSet(pub Vec<(u32, i8)>);

impl SignedSet {
    pub fn apply(&self, x: &RatVec) -> Q {
        self.0.iter().fold(Q::zero(), |acc, &(i, s)| {
            let c = x.get(i);
            if s > 0 {
                acc + c
            } else {
                acc - c
            }
        })
    }
}

/// All sign patterns on `set`.
pub fn sign_patterns(set: &[u32]) -> Vec<SignedSet> {
    let k = set.len();
    (0u32..(1 << k))
        .map(|mask| {
            SignedSet(
                set.iter()
                    .enumerate()
                    .map(|(b, &i)| (i, if mask >> b & 1 == 1 { -1 } else { 1 }))
                    .collect(),
            )
        })
        .collect()
}

/// Norm oracle for every [`SpaceSpec`], holding one Schreier oracle.
///
/// Not `Sync`; parallel callers each build their own.
pub struct NormEngine {
    capacity: Capacity,
    schreier: Schreier,
}

impl Default for NormEngine {
    fn default() -> Self {
        NormEngine::new(Capacity::default())
    }
}

impl NormEngine {
    pub fn new(capacity: Capacity) -> Self {
        let schreier = Schreier::new(capacity.schreier_window);
        NormEngine { capacity, schreier }
    }

    pub fn capacity(&self) -> &Capacity {
        &self.capacity
    }

    pub fn schreier(&self) -> &Schreier {
        &self.schreier
    }

    /// `‖x‖` exactly.
    pub fn norm(&self, space: &SpaceSpec, x: &RatVec) -> Result<Q> {
        let (mags, scale) = x.magnitudes()?;
        let n = self.norm_mags(space, &mags)?;
        Ok(q_u128(n, &scale))
    }

    /// Norm of the vector with the given magnitudes, listed in increasing
    /// index order without zeros.
    pub fn norm_mags(&self, space: &SpaceSpec, x: &[(u32, u128)]) -> Result<u128> {
        debug_assert!(x.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(x.iter().all(|&(i, m)| i >= 1 && m > 0));
        match space {
            SpaceSpec::C0 => Ok(x.iter().map(|&(_, m)| m).max().unwrap_or(0)),
            SpaceSpec::L1 => sum(x.iter().map(|&(_, m)| m)),
            SpaceSpec::Schreier(alpha) => self.schreier_norm(alpha, x),
            SpaceSpec::DirectSum1(v) => {
                let (head, tail) = match x.first() {
                    Some(&(1, m)) => (m, &x[1..]),
                    _ => (0, x),
                };
                let shifted: Vec<(u32, u128)> = tail.iter().map(|&(i, m)| (i - 1, m)).collect();
                checked_add(head, self.norm_mags(v, &shifted)?)
            }
            SpaceSpec::ZV(z, v) => self.zv_norm(z, v, x),
            SpaceSpec::Restrict(v, m) => {
                let mapped = x
                    .iter()
                    .map(|&(i, c)| {
                        m.get(i).map(|j| (j, c)).ok_or_else(|| {
                            Error::invalid(format!("coordinate {i} lies beyond the index list {m}"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                self.norm_mags(v, &mapped)
            }
            SpaceSpec::InterleaveInf(z, v, m) => {
                let mut zpart = Vec::new();
                let mut vpart = Vec::new();
                for &(i, c) in x {
                    match m.position(i) {
                        Some(k) => zpart.push((k, c)),
                        None => vpart.push((i, c)),
                    }
                }
                Ok(self.norm_mags(z, &zpart)?.max(self.norm_mags(v, &vpart)?))
            }
        }
    }

    /// Branch and bound over admissible subsets of the support, built in
    /// index order so that heredity prunes every inadmissible prefix.
    fn schreier_norm(&self, alpha: &Ordinal, x: &[(u32, u128)]) -> Result<u128> {
        if x.len() > self.capacity.schreier_window as usize {
            return Err(Error::capacity(
                "Schreier norm support",
                x.len(),
                self.capacity.schreier_window as usize,
            ));
        }
        let fam = self.schreier.family(alpha);
        let idx: Vec<u32> = x.iter().map(|&(i, _)| i).collect();
        let w: Vec<u128> = x.iter().map(|&(_, m)| m).collect();
        let mut suffix = vec![0u128; w.len() + 1];
        for j in (0..w.len()).rev() {
            suffix[j] = checked_add(suffix[j + 1], w[j])?;
        }
        let mut best = w.iter().copied().max().unwrap_or(0);
        let mut stack = Vec::with_capacity(idx.len());

        fn dfs(
            fam: &crate::schreier::SchreierFamily<'_>,
            idx: &[u32],
            w: &[u128],
            suffix: &[u128],
            from: usize,
            stack: &mut Vec<u32>,
            sum: u128,
            best: &mut u128,
        ) {
            for j in from..idx.len() {
                if sum + suffix[j] <= *best {
                    break;
                }
                stack.push(idx[j]);
                if fam.contains(stack) {
                    let s = sum + w[j];
                    if s > *best {
                        *best = s;
                    }
                    dfs(fam, idx, w, suffix, j + 1, stack, s, best);
                }
                stack.pop();
            }
        }

        dfs(&fam, &idx, &w, &suffix, 0, &mut stack, 0, &mut best);
        Ok(best)
    }

    /// Base norms of every segment `[a, b)` with `1 ≤ a < b ≤ top`, indexed
    /// `[a][b]`.
    fn segment_norms(&self, z: &SpaceSpec, x: &[(u32, u128)], top: u32) -> Result<Vec<Vec<u128>>> {
        let top = top as usize;
        let mut seg = vec![vec![0u128; top + 1]; top + 1];
        for a in 1..top {
            let lo = x.partition_point(|&(i, _)| (i as usize) < a);
            for b in a + 1..=top {
                let hi = x.partition_point(|&(i, _)| (i as usize) < b);
                if hi > lo {
                    seg[a][b] = self.norm_mags(z, &x[lo..hi])?;
                }
            }
        }
        Ok(seg)
    }

    fn zv_norm(&self, z: &SpaceSpec, v: &SpaceSpec, x: &[(u32, u128)]) -> Result<u128> {
        let max = x.last().map_or(0, |&(i, _)| i);
        if max > self.capacity.zv_window {
            return Err(Error::capacity(
                "Z^V support window",
                max as usize,
                self.capacity.zv_window as usize,
            ));
        }
        let top = max + 1;
        let seg = self.segment_norms(z, x, top)?;
        let mut best = 0u128;
        let mut w = Vec::with_capacity(top as usize);
        for p0 in 1..top {
            self.zv_tuples(v, &seg, top, p0, &mut w, &mut best)?;
        }
        Ok(best)
    }

    /// Extends a tuple ending at `last`; `w` holds the nonzero `V`-entries.
    fn zv_tuples(
        &self,
        v: &SpaceSpec,
        seg: &[Vec<u128>],
        top: u32,
        last: u32,
        w: &mut Vec<(u32, u128)>,
        best: &mut u128,
    ) -> Result<()> {
        for next in last + 1..=top {
            let s = seg[last as usize][next as usize];
            if s > 0 {
                w.push((last, s));
                let value = self.norm_mags(v, w)?;
                if value > *best {
                    *best = value;
                }
            }
            // A zero segment leaves the V-vector, hence its value, unchanged.
            self.zv_tuples(v, seg, top, next, w, best)?;
            if s > 0 {
                w.pop();
            }
        }
        Ok(())
    }

    /// `‖Σ_i ‖P_{[m_{i-1}, m_i)} x‖_Z v_{m_{i-1}}‖_V` for one breakpoint tuple.
    pub fn zv_tuple_value(
        &self,
        z: &SpaceSpec,
        v: &SpaceSpec,
        x: &RatVec,
        tuple: &[u32],
    ) -> Result<Q> {
        if tuple.len() < 2 || tuple[0] == 0 || tuple.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::invalid("breakpoints must be at least two increasing positive integers"));
        }
        let (mags, scale) = x.magnitudes()?;
        let mut w = Vec::new();
        for p in tuple.windows(2) {
            let lo = mags.partition_point(|&(i, _)| i < p[0]);
            let hi = mags.partition_point(|&(i, _)| i < p[1]);
            if hi > lo {
                let s = self.norm_mags(z, &mags[lo..hi])?;
                if s > 0 {
                    w.push((p[0], s));
                }
            }
        }
        Ok(q_u128(self.norm_mags(v, &w)?, &scale))
    }

    /// `x / ‖x‖`.
    pub fn normalize(&self, space: &SpaceSpec, x: &RatVec) -> Result<RatVec> {
        if x.is_zero() {
            return Err(Error::invalid("cannot normalize the zero vector"));
        }
        let n = self.norm(space, x)?;
        Ok(x.scaled(&n.recip()))
    }

    fn indicator_norm(&self, space: &SpaceSpec, set: &[u32]) -> Result<u128> {
        let ones: Vec<(u32, u128)> = set.iter().map(|&i| (i, 1)).collect();
        self.norm_mags(space, &ones)
    }

    /// Maximal sets `B ⊆ window` with `‖1_B‖ = |B|`, sorted.
    ///
    /// For a norm that is a maximum of 0/1 functionals these sets norm the
    /// space on the window: `‖x‖ = max_B Σ_{i∈B} |x_i|`.
    pub fn positive_sets(&self, space: &SpaceSpec, window: &[u32]) -> Result<Vec<Vec<u32>>> {
        let mut found = Vec::new();
        let mut stack = Vec::new();
        self.positive_walk(space, window, 0, &mut stack, &mut found)?;
        found.sort();
        Ok(found)
    }

    fn positive_walk(
        &self,
        space: &SpaceSpec,
        window: &[u32],
        from: usize,
        stack: &mut Vec<u32>,
        found: &mut Vec<Vec<u32>>,
    ) -> Result<()> {
        for j in from..window.len() {
            stack.push(window[j]);
            if self.indicator_norm(space, stack)? == stack.len() as u128 {
                self.positive_walk(space, window, j + 1, stack, found)?;
            }
            stack.pop();
        }
        if stack.is_empty() {
            return Ok(());
        }
        for &k in window {
            if stack.binary_search(&k).is_ok() {
                continue;
            }
            let mut bigger = stack.clone();
            let at = bigger.partition_point(|&i| i < k);
            bigger.insert(at, k);
            if self.indicator_norm(space, &bigger)? == bigger.len() as u128 {
                return Ok(());
            }
        }
        if found.len() >= self.capacity.functionals {
            return Err(Error::capacity(
                "norming sets",
                found.len() + 1,
                self.capacity.functionals,
            ));
        }
        found.push(stack.clone());
        Ok(())
    }

    /// Signed functionals norming `space` on `[1..n]`.
    pub fn dual_functionals(&self, space: &SpaceSpec, n: u32) -> Result<Vec<SignedSet>> {
        let window: Vec<u32> = (1..=n).collect();
        self.signed_functionals(space, &window)
    }

    /// Signed functionals norming `space` on vectors supported in `window`.
    pub fn signed_functionals(&self, space: &SpaceSpec, window: &[u32]) -> Result<Vec<SignedSet>> {
        let sets = self.positive_sets(space, window)?;
        let mut out = Vec::new();
        for set in &sets {
            if set.len() > self.capacity.sign_set {
                return Err(Error::capacity("sign-pattern set size", set.len(), self.capacity.sign_set));
            }
            if out.len() + (1usize << set.len()) > self.capacity.functionals {
                return Err(Error::capacity(
                    "dual functionals",
                    out.len() + (1usize << set.len()),
                    self.capacity.functionals,
                ));
            }
            out.extend(sign_patterns(set));
        }
        Ok(out)
    }

    /// Seeded normalized block sequence `x_1 < … < x_count` inside `[1..window]`.
    ///
    /// The window is cut into `count` random consecutive intervals; each
    /// vector takes one to three random indices of its interval with
    /// coefficients from [`random_coefficient`], then is normalized exactly.
    pub fn random_block_sequence(
        &self,
        space: &SpaceSpec,
        count: usize,
        window: u32,
        seed: u64,
    ) -> Result<Vec<RatVec>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.block_sequence_with(space, count, 1, window, &mut rng)
    }

    /// As [`Self::random_block_sequence`] inside `[lo..=hi]`, drawing from `rng`.
    pub fn block_sequence_with(
        &self,
        space: &SpaceSpec,
        count: usize,
        lo: u32,
        hi: u32,
        rng: &mut impl Rng,
    ) -> Result<Vec<RatVec>> {
        if count == 0 || lo == 0 || hi < lo || ((hi - lo + 1) as usize) < count {
            return Err(Error::invalid(format!(
                "window [{lo}..{hi}] cannot hold {count} blocks"
            )));
        }
        let bounds = random_intervals(rng, lo, hi, count);
        let mut out = Vec::with_capacity(count);
        for (a, b) in bounds {
            let len = (b - a + 1) as usize;
            let size = rng.gen_range(1..=len.min(3));
            let picks = rand::seq::index::sample(rng, len, size);
            let mut x = RatVec::zero();
            for p in picks.iter() {
                x.set(a + p as u32, random_coefficient(rng));
            }
            out.push(self.normalize(space, &x)?);
        }
        Ok(out)
    }
}

/// Cuts `[lo..=hi]` into `count` nonempty consecutive intervals at random.
pub fn random_intervals(rng: &mut impl Rng, lo: u32, hi: u32, count: usize) -> Vec<(u32, u32)> {
    let len = (hi - lo + 1) as usize;
    let mut cuts: Vec<u32> = rand::seq::index::sample(rng, len - 1, count - 1)
        .iter()
        .map(|c| lo + c as u32 + 1)
        .collect();
    cuts.sort_unstable();
    let mut starts = vec![lo];
    starts.extend(cuts);
    starts
        .iter()
        .enumerate()
        .map(|(k, &s)| (s, starts.get(k + 1).map_or(hi, |&n| n - 1)))
        .collect()
}

/// A nonzero coefficient: `±1`, `±½`, `±2` or `±p/q` with `q ≤ 8`, `p ≤ 2q`.
pub fn random_coefficient(rng: &mut impl Rng) -> Q {
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    let magnitude = match rng.gen_range(0..4) {
        0 => q(1, 1),
        1 => q(1, 2),
        2 => q(2, 1),
        _ => {
            let den = rng.gen_range(1..=8);
            q(rng.gen_range(1..=2 * den), den)
        }
    };
    magnitude * q(sign, 1)
}

fn checked_add(a: u128, b: u128) -> Result<u128> {
    a.checked_add(b)
        .ok_or_else(|| Error::capacity("norm magnitude bits", 129, 128))
}

fn sum(values: impl Iterator<Item = u128>) -> Result<u128> {
    values.into_iter().try_fold(0u128, checked_add)
}

/// Parses a vector given either as JSON `[[i, num, den], …]` or as
/// `i:value` pairs like `2:1/2, 3:1/2`.
pub fn parse_vector(text: &str) -> Result<RatVec> {
    let t = text.trim();
    if t.starts_with('[') {
        let v: Value = serde_json::from_str(t).map_err(|e| Error::invalid(format!("bad JSON vector: {e}")))?;
        return RatVec::from_json(&v);
    }
    let mut out = RatVec::zero();
    for item in t.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (i, c) = item
            .split_once(':')
            .ok_or_else(|| Error::invalid(format!("`{item}` is not index:value")))?;
        let i: u32 = i
            .trim()
            .parse()
            .ok()
            .filter(|&i| i >= 1)
            .ok_or_else(|| Error::invalid(format!("`{i}` is not a positive index")))?;
        if out.coords.contains_key(&i) {
            return Err(Error::invalid(format!("index {i} repeated")));
        }
        out.set(i, crate::num::parse_q(c)?);
    }
    Ok(out)
}

/// Set as a 0/1 vector.
pub fn indicator(set: &FinSet) -> RatVec {
    let mut v = RatVec::zero();
    for &i in set.as_slice() {
        v.set(i, Q::one());
    }
    v
}

/// True when the supports are pairwise disjoint.
pub fn disjoint_supports(xs: &[RatVec]) -> bool {
    let mut seen = std::collections::BTreeSet::new();
    xs.iter().all(|x| x.iter().all(|(i, _)| seen.insert(i)))
}

/// `|c|` for every coordinate.
pub fn abs_vec(x: &RatVec) -> RatVec {
    let mut out = RatVec::zero();
    for (i, c) in x.iter() {
        out.set(i, c.abs());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::qi;
    use crate::ordinal::parse_ordinal;

    fn sp(s: &str) -> SpaceSpec {
        parse_space(s).unwrap()
    }

    fn vec_of(pairs: &[(u32, i64, i64)]) -> RatVec {
        RatVec::from_pairs(pairs.iter().map(|&(i, n, d)| (i, q(n, d)))).unwrap()
    }

    /// Reference Schreier norm: maximum over every admissible subset.
    fn brute_schreier(alpha: &Ordinal, x: &RatVec) -> Q {
        let s = Schreier::new(30);
        let supp = x.support();
        let mut best = Q::zero();
        for mask in 0u32..(1 << supp.len()) {
            let set: Vec<u32> = (0..supp.len()).filter(|b| mask >> b & 1 == 1).map(|b| supp[b]).collect();
            if s.member(&FinSet::new(set.clone()).unwrap(), alpha) {
                let total = set.iter().fold(Q::zero(), |a, &i| a + x.get(i).abs());
                if total > best {
                    best = total;
                }
            }
        }
        best
    }

    /// Reference `Z^V` norm: every breakpoint tuple through [`NormEngine::zv_tuple_value`].
    fn brute_zv(e: &NormEngine, z: &SpaceSpec, v: &SpaceSpec, x: &RatVec) -> Q {
        let top = x.max_supp().unwrap() + 1;
        let mut best = Q::zero();
        for mask in 0u32..(1 << top) {
            let tuple: Vec<u32> = (1..=top).filter(|p| mask >> (p - 1) & 1 == 1).collect();
            if tuple.len() >= 2 {
                let val = e.zv_tuple_value(z, v, x, &tuple).unwrap();
                if val > best {
                    best = val;
                }
            }
        }
        best
    }

    fn random_vec(rng: &mut ChaCha8Rng, window: u32, max_nnz: usize) -> RatVec {
        let nnz = rng.gen_range(1..=max_nnz.min(window as usize));
        let mut x = RatVec::zero();
        for p in rand::seq::index::sample(rng, window as usize, nnz).iter() {
            x.set(p as u32 + 1, random_coefficient(rng));
        }
        x
    }

    #[test]
    fn grammar_round_trips() {
        for s in [
            "c0",
            "l1",
            "schreier(w^2)",
            "schreier(w^(w+1)*2 + 3)",
            "rsum1(c0)",
            "zv(c0, rsum1(c0))",
            "restrict(schreier(1); 2,4,6,...)",
            "ilv(c0, schreier(1); 1,3,5,...)",
            "restrict(l1; 3,7,8)",
        ] {
            let parsed = sp(s);
            assert_eq!(sp(&parsed.to_string()), parsed, "{s}");
        }
        assert_eq!(sp("zv( c0 ,rsum1( c0 ))").to_string(), "zv(c0, rsum1(c0))");
        assert!(parse_space("c1").is_err());
        assert!(parse_space("schreier(w + w^2)").is_err());
        assert!(parse_space("restrict(l1; 4,2)").is_err());
        assert!(parse_space("restrict(l1; 2,...)").is_err());
        assert!(parse_space("l1 l1").is_err());
        assert!(matches!(parse_space("zv(c0 rsum1(c0))"), Err(Error::Parse { position: 6, .. })));
    }

    #[test]
    fn index_sequences() {
        let m = IndexSeq::arithmetic(2, 2).unwrap();
        assert_eq!((1..=5).map(|n| m.get(n).unwrap()).collect::<Vec<_>>(), vec![2, 4, 6, 8, 10]);
        assert_eq!(m.position(8), Some(4));
        assert_eq!(m.position(7), None);
        let f = IndexSeq::finite(vec![3, 7]).unwrap();
        assert_eq!(f.get(3), None);
        assert_eq!(f.position(7), Some(2));
    }

    #[test]
    fn norm_examples() {
        let e = NormEngine::default();
        let ones = vec_of(&[(1, 1, 1), (2, 1, 1), (3, 1, 1)]);
        assert_eq!(e.norm(&sp("schreier(1)"), &ones).unwrap(), qi(2));
        for s in ["c0", "l1", "schreier(w^2)", "rsum1(c0)", "zv(c0, rsum1(c0))", "zv(schreier(1), l1)"] {
            for k in [1, 4, 9] {
                let x = RatVec::from_pairs([(k, q(-3, 7))]).unwrap();
                assert_eq!(e.norm(&sp(s), &x).unwrap(), q(3, 7), "{s}");
            }
        }
        // {3,4,5} ∈ S_1 carries the full ℓ1 mass.
        let x = vec_of(&[(3, 1, 2), (4, -2, 1), (5, 1, 3)]);
        assert_eq!(e.norm(&sp("schreier(1)"), &x).unwrap(), q(17, 6));
        let z1 = vec_of(&[(2, 1, 2), (3, 1, 2)]);
        assert_eq!(e.norm(&sp("zv(c0, rsum1(c0))"), &z1).unwrap(), qi(1));
        assert_eq!(e.norm(&sp("c0"), &vec_of(&[(7, 5, 1)])).unwrap(), qi(5));
        assert_eq!(e.norm(&sp("rsum1(c0)"), &vec_of(&[(1, 1, 1), (2, 1, 1), (5, 1, 1)])).unwrap(), qi(2));
        assert_eq!(e.norm(&sp("l1"), &vec_of(&[(1, 1, 1), (2, -1, 2)])).unwrap(), q(3, 2));
    }

    #[test]
    fn normalize_examples() {
        let e = NormEngine::default();
        let ones = vec_of(&[(1, 1, 1), (2, 1, 1), (3, 1, 1)]);
        assert_eq!(
            e.normalize(&sp("schreier(1)"), &ones).unwrap(),
            vec_of(&[(1, 1, 2), (2, 1, 2), (3, 1, 2)])
        );
        assert_eq!(e.normalize(&sp("c0"), &vec_of(&[(7, 5, 1)])).unwrap(), RatVec::unit(7));
        assert_eq!(
            e.normalize(&sp("l1"), &vec_of(&[(1, 1, 1), (2, 1, 1)])).unwrap(),
            vec_of(&[(1, 1, 2), (2, 1, 2)])
        );
        assert!(e.normalize(&sp("l1"), &RatVec::zero()).is_err());
    }

    #[test]
    fn admissible_supports_are_isometric_to_l1() {
        let e = NormEngine::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for alpha in ["1", "2", "w", "w^2"] {
            let a = parse_ordinal(alpha).unwrap();
            let sets = e.schreier().enumerate_admissible(12, &a, false).unwrap();
            for set in sets.iter().step_by(7).filter(|s| !s.is_empty()) {
                let x = RatVec::from_pairs(set.as_slice().iter().map(|&i| (i, random_coefficient(&mut rng)))).unwrap();
                let l1 = e.norm(&SpaceSpec::L1, &x).unwrap();
                assert_eq!(e.norm(&SpaceSpec::Schreier(a.clone()), &x).unwrap(), l1);
            }
        }
    }

    #[test]
    fn schreier_optimizer_matches_brute_force() {
        let e = NormEngine::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for alpha in ["0", "1", "2", "w", "w+1"] {
            let a = parse_ordinal(alpha).unwrap();
            for _ in 0..60 {
                let x = random_vec(&mut rng, 16, 10);
                assert_eq!(e.norm(&SpaceSpec::Schreier(a.clone()), &x).unwrap(), brute_schreier(&a, &x));
            }
        }
    }

    #[test]
    fn zv_matches_tuple_enumeration() {
        let e = NormEngine::default();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (z, v) in [("c0", "rsum1(c0)"), ("schreier(1)", "l1"), ("l1", "schreier(1)"), ("c0", "c0")] {
            let (z, v) = (sp(z), sp(v));
            let zv = SpaceSpec::zv(z.clone(), v.clone());
            for _ in 0..25 {
                let x = random_vec(&mut rng, 9, 5);
                assert_eq!(e.norm(&zv, &x).unwrap(), brute_zv(&e, &z, &v, &x));
            }
        }
    }

    #[test]
    fn zv_dominates_base_and_collapses_under_c0() {
        let e = NormEngine::default();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for base in ["c0", "l1", "schreier(1)", "schreier(2)", "rsum1(c0)"] {
            let z = sp(base);
            for v in ["l1", "rsum1(c0)", "schreier(1)"] {
                let zv = SpaceSpec::zv(z.clone(), sp(v));
                for _ in 0..10 {
                    let x = random_vec(&mut rng, 10, 6);
                    let zn = e.norm(&z, &x).unwrap();
                    let zvn = e.norm(&zv, &x).unwrap();
                    assert!(zvn >= zn);
                    let top = x.max_supp().unwrap() + 1;
                    let tuple: Vec<u32> = (1..=top).step_by(2).chain(std::iter::once(top)).collect();
                    let mut tuple = tuple;
                    tuple.dedup();
                    if tuple.len() >= 2 {
                        assert!(zvn >= e.zv_tuple_value(&z, &sp(v), &x, &tuple).unwrap());
                    }
                }
            }
            let flat = SpaceSpec::zv(z.clone(), SpaceSpec::C0);
            for _ in 0..10 {
                let x = random_vec(&mut rng, 10, 6);
                assert_eq!(e.norm(&flat, &x).unwrap(), e.norm(&z, &x).unwrap());
            }
        }
    }

    #[test]
    fn norms_are_one_unconditional() {
        let e = NormEngine::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let spaces = [
            "c0",
            "l1",
            "schreier(1)",
            "schreier(w)",
            "rsum1(c0)",
            "zv(c0, rsum1(c0))",
            "restrict(schreier(1); 2,4,...)",
            "ilv(l1, c0; 2,4,...)",
            "ilv(zv(schreier(1), l1), l1; 1,3,...)",
        ];
        for s in spaces {
            let space = sp(s);
            for _ in 0..20 {
                let x = random_vec(&mut rng, 10, 6);
                let n = e.norm(&space, &x).unwrap();
                let supp = x.support();
                let mut flipped = x.clone();
                let mut dropped = x.clone();
                for &i in &supp {
                    if rng.gen_bool(0.5) {
                        flipped.set(i, -x.get(i));
                    }
                    if rng.gen_bool(0.3) {
                        dropped.set(i, Q::zero());
                    }
                }
                assert_eq!(e.norm(&space, &flipped).unwrap(), n, "{s}");
                assert!(e.norm(&space, &dropped).unwrap() <= n, "{s}");
            }
        }
    }

    #[test]
    fn schreier_basis_is_right_dominant() {
        let e = NormEngine::default();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for alpha in ["1", "2", "w"] {
            let space = sp(&format!("schreier({alpha})"));
            for _ in 0..100 {
                let n = rng.gen_range(1..=6);
                let mut k: Vec<u32> = rand::seq::index::sample(&mut rng, 12, n).iter().map(|i| i as u32 + 1).collect();
                k.sort_unstable();
                let mut l = k.clone();
                let mut floor = 0;
                for li in l.iter_mut() {
                    *li = (*li).max(floor + 1) + rng.gen_range(0..3);
                    floor = *li;
                }
                let coeffs: Vec<Q> = (0..n).map(|_| random_coefficient(&mut rng)).collect();
                let xk = RatVec::from_pairs(k.iter().copied().zip(coeffs.iter().cloned())).unwrap();
                let xl = RatVec::from_pairs(l.iter().copied().zip(coeffs.iter().cloned())).unwrap();
                assert!(e.norm(&space, &xk).unwrap() <= e.norm(&space, &xl).unwrap());
            }
        }
    }

    #[test]
    fn composite_norm_definitions() {
        let e = NormEngine::default();
        // restrict(l1; M) and ilv split as documented.
        let x = vec_of(&[(1, 1, 1), (2, 1, 1), (3, 1, 1), (4, 1, 1)]);
        assert_eq!(e.norm(&sp("ilv(l1, c0; 2,4,...)"), &x).unwrap(), qi(2));
        assert_eq!(e.norm(&sp("ilv(c0, l1; 2,4,...)"), &x).unwrap(), qi(2));
        // (e_1 + e_2) in restrict(schreier(1); 2,4,...) is e_2 + e_4 in X_1.
        let y = vec_of(&[(1, 1, 1), (2, 1, 1)]);
        assert_eq!(e.norm(&sp("restrict(schreier(1); 2,4,...)"), &y).unwrap(), qi(2));
        assert_eq!(e.norm(&sp("schreier(1)"), &y).unwrap(), qi(1));
        assert!(e.norm(&sp("restrict(l1; 2,5)"), &vec_of(&[(3, 1, 1)])).is_err());
    }

    #[test]
    fn dual_functional_examples() {
        let e = NormEngine::default();
        let set = |v: &[(u32, i8)]| SignedSet(v.to_vec());
        let mut f = e.dual_functionals(&sp("schreier(1)"), 2).unwrap();
        f.sort();
        assert_eq!(f, vec![set(&[(1, -1)]), set(&[(1, 1)]), set(&[(2, -1)]), set(&[(2, 1)])]);
        let mut c = e.dual_functionals(&SpaceSpec::C0, 2).unwrap();
        c.sort();
        assert_eq!(c, f);
        let l = e.dual_functionals(&SpaceSpec::L1, 2).unwrap();
        assert_eq!(l.len(), 4);
        assert!(l.iter().all(|s| s.0.len() == 2));
    }

    #[test]
    fn dual_functionals_norm_every_space() {
        let e = NormEngine::default();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for s in ["c0", "l1", "schreier(1)", "schreier(2)", "rsum1(c0)", "zv(c0, rsum1(c0))", "ilv(schreier(1), l1; 2,4,...)"] {
            let space = sp(s);
            let phis = e.dual_functionals(&space, 7).unwrap();
            for _ in 0..20 {
                let x = random_vec(&mut rng, 7, 5);
                let best = phis.iter().map(|p| p.apply(&x)).max().unwrap();
                assert_eq!(best, e.norm(&space, &x).unwrap(), "{s}");
            }
        }
    }

    #[test]
    fn block_sequences() {
        let e = NormEngine::default();
        let space = sp("schreier(1)");
        let a = e.random_block_sequence(&space, 2, 10, 7).unwrap();
        let b = e.random_block_sequence(&space, 2, 10, 7).unwrap();
        assert_eq!(a, b);
        assert!(a[0].max_supp() < a[1].min_supp());
        for x in &a {
            assert_eq!(e.norm(&space, x).unwrap(), qi(1));
        }
        let one = e.random_block_sequence(&space, 1, 5, 1).unwrap();
        assert_eq!(e.norm(&space, &one[0]).unwrap(), qi(1));
        assert!(e.random_block_sequence(&space, 4, 3, 1).is_err());
    }

    #[test]
    fn vector_formats() {
        let x = vec_of(&[(2, 1, 2), (5, -3, 4)]);
        assert_eq!(x.to_json(), serde_json::json!([[2, 1, 2], [5, -3, 4]]));
        assert_eq!(RatVec::from_json(&x.to_json()).unwrap(), x);
        assert_eq!(parse_vector("2:1/2, 5:-0.75").unwrap(), x);
        assert_eq!(parse_vector("[[2,1,2],[5,-3,4]]").unwrap(), x);
        assert!(parse_vector("[[0,1,1]]").is_err());
        assert!(parse_vector("[[1,1,0]]").is_err());
        assert!(parse_vector("2:1, 2:1").is_err());
        assert!(parse_vector("{").is_err());
    }

    #[test]
    fn capacities_are_enforced() {
        let e = NormEngine::default();
        let wide = RatVec::from_pairs((1..=23).map(|i| (i, qi(1)))).unwrap();
        assert!(matches!(e.norm(&sp("schreier(1)"), &wide), Err(Error::Capacity { .. })));
        let far = RatVec::unit(19) ;
        let mut two = far.clone();
        two.set(2, qi(1));
        assert!(matches!(e.norm(&sp("zv(c0, l1)"), &two), Err(Error::Capacity { .. })));
    }
}
