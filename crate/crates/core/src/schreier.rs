//! Schreier families `S_α` over finite subsets of ℕ.
//!
//! `S_0` holds the singletons and `∅`. `S_{β+1}` holds unions
//! `E_1 < … < E_m` of nonempty sets of `S_β` with `m ≤ min E_1`, and for a
//! limit `α`, `F ∈ S_α` iff `F ∈ S_{α[n]}` for some `n ≤ min F`, where `α[n]` is
//! the fundamental sequence fixed in [`crate::ordinal`]. `min ∅ = ∞`, so `∅`
//! belongs to every family.
//!
//! Successor membership is decided by a dynamic program over split points:
//! `reach[i]` is the least number of admissible consecutive blocks covering
//! the first `i` elements. Membership answers are memoised per oracle
//! instance; the cache never changes an answer.

use std::cell::RefCell;
use std::fmt;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::ordinal::{Class, Ordinal};

/// A strictly increasing finite set of positive integers.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize)]
#[serde(transparent)]
pub struct FinSet(Vec<u32>);

impl FinSet {
    pub fn empty() -> Self {
        FinSet(Vec::new())
    }

    pub fn new(elements: Vec<u32>) -> Result<Self> {
        if elements.first() == Some(&0) {
            return Err(Error::invalid("set elements must be positive integers"));
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("set elements must be strictly increasing"));
        }
        Ok(FinSet(elements))
    }

    /// Builds a set from arbitrary positive integers (sorted, deduplicated).
    pub fn from_unsorted(mut elements: Vec<u32>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        FinSet::new(elements)
    }

    /// Parses `2,3,6` (an empty string is `∅`).
    pub fn parse(text: &str) -> Result<Self> {
        let elements = text
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<u32>()
                    .map_err(|_| Error::invalid(format!("`{s}` is not a positive integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        FinSet::new(elements)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` encodes `min ∅ = ∞`.
    pub fn min_elem(&self) -> Option<u32> {
        self.0.first().copied()
    }

    /// `max ∅ = 0`.
    pub fn max_elem(&self) -> u32 {
        self.0.last().copied().unwrap_or(0)
    }

    /// `self ∪ {k}` for `k > max self`.
    pub fn extended(&self, k: u32) -> Self {
        assert!(k > self.max_elem(), "extension must lie above the set");
        let mut v = self.0.clone();
        v.push(k);
        FinSet(v)
    }

    /// True if `other` is a spread of `self`: same size, elementwise `≥`.
    pub fn is_spread_to(&self, other: &FinSet) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl<'de> Deserialize<'de> for FinSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<u32>::deserialize(d)?;
        FinSet::new(v).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

/// Replayable evidence that a set belongs to `S_α`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// `∅`, admissible at every level.
    Empty,
    /// A singleton of `S_0`.
    Singleton(u32),
    /// Successor step: consecutive nonempty blocks, each certified one level down.
    Blocks(Vec<(FinSet, Certificate)>),
    /// Limit step: the chosen `n ≤ min F` and a certificate for `S_{α[n]}`.
    Limit { n: u64, inner: Box<Certificate> },
}

impl Certificate {
    /// Checks the certificate against the recursion for `(set, alpha)`.
    ///
    /// Uses only the ordinal operations, never the membership oracle.
    pub fn validates(&self, set: &FinSet, alpha: &Ordinal) -> bool {
        match self {
            Certificate::Empty => set.is_empty(),
            Certificate::Singleton(k) => alpha.is_zero() && set.as_slice() == [*k],
            Certificate::Blocks(blocks) => {
                let Class::Successor(pred) = alpha.classify() else {
                    return false;
                };
                let Some(min) = set.min_elem() else {
                    return false;
                };
                if blocks.is_empty() || blocks.len() > min as usize {
                    return false;
                }
                let mut joined = Vec::with_capacity(set.len());
                for (block, cert) in blocks {
                    if block.is_empty() || !cert.validates(block, &pred) {
                        return false;
                    }
                    joined.extend_from_slice(block.as_slice());
                }
                joined == set.as_slice()
            }
            Certificate::Limit { n, inner } => {
                let Some(min) = set.min_elem() else {
                    return false;
                };
                if !alpha.is_limit() || *n == 0 || *n > u64::from(min) {
                    return false;
                }
                match alpha.fundamental(*n) {
                    Ok(next) => inner.validates(set, &next),
                    Err(_) => false,
                }
            }
        }
    }
}

pub(crate) type OrdId = u32;
const ZERO: OrdId = 0;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Kind {
    Zero,
    Succ(OrdId),
    Limit,
}

struct OrdEntry {
    ordinal: Ordinal,
    kind: Kind,
    /// `fundamental[n - 1]` is the id of `α[n]`, filled on demand.
    fundamental: Vec<OrdId>,
}

#[derive(Default)]
struct OrdTable {
    entries: Vec<OrdEntry>,
    index: FxHashMap<Ordinal, OrdId>,
}

impl OrdTable {
    fn intern(&mut self, alpha: &Ordinal) -> OrdId {
        if let Some(&id) = self.index.get(alpha) {
            return id;
        }
        let kind = match alpha.classify() {
            Class::Zero => Kind::Zero,
            Class::Successor(pred) => Kind::Succ(self.intern(&pred)),
            Class::Limit => Kind::Limit,
        };
        let id = self.entries.len() as OrdId;
        self.entries.push(OrdEntry {
            ordinal: alpha.clone(),
            kind,
            fundamental: Vec::new(),
        });
        self.index.insert(alpha.clone(), id);
        id
    }
}

const MEMO_LIMIT: usize = 4_000_000;

/// Membership oracle for all Schreier families, with a per-instance memo.
///
/// Not `Sync`: concurrent callers should each own an instance.
pub struct Schreier {
    table: RefCell<OrdTable>,
    memo: RefCell<FxHashMap<(OrdId, u128), bool>>,
    window_limit: u32,
}

impl Default for Schreier {
    fn default() -> Self {
        Schreier::new(crate::config::Capacity::default().schreier_window)
    }
}

/// A handle on `S_α` bound to an oracle.
#[derive(Clone, Copy)]
pub struct SchreierFamily<'a> {
    oracle: &'a Schreier,
    id: OrdId,
}

impl fmt::Debug for SchreierFamily<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S_{}", self.alpha())
    }
}

impl Schreier {
    /// `window_limit` bounds [`Schreier::enumerate_admissible`].
    pub fn new(window_limit: u32) -> Self {
        let mut table = OrdTable::default();
        let zero = table.intern(&Ordinal::zero());
        debug_assert_eq!(zero, ZERO);
        Schreier {
            table: RefCell::new(table),
            memo: RefCell::new(FxHashMap::default()),
            window_limit,
        }
    }

    pub fn window_limit(&self) -> u32 {
        self.window_limit
    }

    pub fn family(&self, alpha: &Ordinal) -> SchreierFamily<'_> {
        let id = self.table.borrow_mut().intern(alpha);
        SchreierFamily { oracle: self, id }
    }

    /// `F ∈ S_α`.
    pub fn member(&self, set: &FinSet, alpha: &Ordinal) -> bool {
        self.family(alpha).contains(set.as_slice())
    }

    /// Number of memoised answers currently held.
    pub fn memo_len(&self) -> usize {
        self.memo.borrow().len()
    }

    fn kind(&self, id: OrdId) -> Kind {
        self.table.borrow().entries[id as usize].kind
    }

    fn fundamental_id(&self, id: OrdId, n: u32) -> OrdId {
        let n = n as usize;
        {
            let table = self.table.borrow();
            if let Some(&fid) = table.entries[id as usize].fundamental.get(n - 1) {
                return fid;
            }
        }
        let mut table = self.table.borrow_mut();
        while table.entries[id as usize].fundamental.len() < n {
            let k = table.entries[id as usize].fundamental.len() as u64 + 1;
            let next = table.entries[id as usize]
                .ordinal
                .fundamental(k)
                .expect("fundamental ids are only requested for limits");
            let fid = table.intern(&next);
            table.entries[id as usize].fundamental.push(fid);
        }
        table.entries[id as usize].fundamental[n - 1]
    }

    fn memo_key(&self, id: OrdId, set: &[u32]) -> Option<(OrdId, u128)> {
        if set.len() < 3 || *set.last()? > 128 {
            return None;
        }
        match self.kind(id) {
            Kind::Zero | Kind::Succ(ZERO) => None,
            _ => Some((
                id,
                set.iter().fold(0u128, |m, &x| m | (1u128 << (x - 1))),
            )),
        }
    }

    fn member_id(&self, set: &[u32], id: OrdId) -> bool {
        if set.len() <= 1 {
            return true;
        }
        let key = self.memo_key(id, set);
        if let Some(key) = key {
            if let Some(&hit) = self.memo.borrow().get(&key) {
                return hit;
            }
        }
        let answer = match self.kind(id) {
            Kind::Zero => false,
            Kind::Succ(pred) => match set.len() {
                0..=31 => self.coverable::<32>(set, pred),
                32..=127 => self.coverable::<128>(set, pred),
                _ => self.cover_blocks(set, pred).is_some(),
            },
            Kind::Limit => (1..=set[0])
                .rev()
                .any(|n| self.member_id(set, self.fundamental_id(id, n))),
        };
        if let Some(key) = key {
            let mut memo = self.memo.borrow_mut();
            if memo.len() >= MEMO_LIMIT {
                memo.clear();
            }
            memo.insert(key, answer);
        }
        answer
    }

    /// Whether `set` splits into at most `min set` consecutive members of
    /// `S_pred`; the allocation-free form of [`Self::cover_blocks`].
    fn coverable<const N: usize>(&self, set: &[u32], pred: OrdId) -> bool {
        const INF: u32 = u32::MAX;
        let limit = set[0];
        let mut reach = [0u32; N];
        for i in 1..=set.len() {
            let mut best = INF;
            for j in (0..i).rev() {
                let admissible = if pred == ZERO {
                    i - j <= 1
                } else {
                    self.member_id(&set[j..i], pred)
                };
                if !admissible {
                    break;
                }
                let r = if j == 0 { 0 } else { reach[j - 1] };
                if r != INF && r + 1 < best {
                    best = r + 1;
                }
            }
            if best > limit {
                return false;
            }
            reach[i - 1] = best;
        }
        true
    }

    /// Least-block cover of `set` by consecutive members of `S_pred`, as the
    /// list of block start offsets, or `None` when more than `min set` blocks
    /// are needed. `set` must be nonempty.
    fn cover_blocks(&self, set: &[u32], pred: OrdId) -> Option<Vec<usize>> {
        const INF: u32 = u32::MAX;
        let k = set.len();
        let limit = set[0];
        let mut reach = vec![INF; k + 1];
        let mut from = vec![0usize; k + 1];
        reach[0] = 0;
        for i in 1..=k {
            let mut best = INF;
            let mut arg = i - 1;
            for j in (0..i).rev() {
                let slice = &set[j..i];
                // A longer block contains this one, so heredity stops the scan.
                let admissible = if pred == ZERO {
                    slice.len() <= 1
                } else {
                    self.member_id(slice, pred)
                };
                if !admissible {
                    break;
                }
                if reach[j] != INF && reach[j] + 1 <= best {
                    best = reach[j] + 1;
                    arg = j;
                }
            }
            reach[i] = best;
            from[i] = arg;
            // reach is nondecreasing, so the cover can only get worse.
            if best > limit {
                return None;
            }
        }
        let mut starts = Vec::new();
        let mut i = k;
        while i > 0 {
            starts.push(from[i]);
            i = from[i];
        }
        starts.reverse();
        Some(starts)
    }

    fn witness_id(&self, set: &[u32], id: OrdId) -> Option<Certificate> {
        if set.is_empty() {
            return Some(Certificate::Empty);
        }
        match self.kind(id) {
            Kind::Zero => (set.len() == 1).then(|| Certificate::Singleton(set[0])),
            Kind::Succ(pred) => {
                let starts = self.cover_blocks(set, pred)?;
                let mut blocks = Vec::with_capacity(starts.len());
                for (b, &start) in starts.iter().enumerate() {
                    let end = starts.get(b + 1).copied().unwrap_or(set.len());
                    let block = &set[start..end];
                    let cert = self.witness_id(block, pred)?;
                    blocks.push((FinSet(block.to_vec()), cert));
                }
                Some(Certificate::Blocks(blocks))
            }
            Kind::Limit => (1..=set[0]).rev().find_map(|n| {
                let next = self.fundamental_id(id, n);
                if !self.member_id(set, next) {
                    return None;
                }
                self.witness_id(set, next).map(|inner| Certificate::Limit {
                    n: u64::from(n),
                    inner: Box::new(inner),
                })
            }),
        }
    }

    /// A certificate for `F ∈ S_α`, or `None` when `F ∉ S_α`.
    pub fn partition_witness(&self, set: &FinSet, alpha: &Ordinal) -> Option<Certificate> {
        let fam = self.family(alpha);
        self.witness_id(set.as_slice(), fam.id)
    }

    /// Whether some `k > max F` gives `F ∪ {k} ∈ S_α`.
    ///
    /// For nonempty `F` only `k = max F + 1` is probed: if `F ∪ {k}` is
    /// admissible then so is `F ∪ {j}` for every `max F < j ≤ k`, because
    /// lowering the last element can only shrink a singleton block.
    pub fn can_extend(&self, set: &FinSet, alpha: &Ordinal) -> bool {
        if set.is_empty() {
            return true;
        }
        self.member(&set.extended(set.max_elem() + 1), alpha)
    }

    /// `F ∈ MAX(S_α)`: admissible with no admissible extension.
    pub fn is_maximal(&self, set: &FinSet, alpha: &Ordinal) -> Result<bool> {
        if !self.member(set, alpha) {
            return Err(Error::contract(format!("{set} is not in S_{alpha}")));
        }
        Ok(!self.can_extend(set, alpha))
    }

    /// All admissible subsets of `[1..window]`, sorted lexicographically.
    ///
    /// With `only_maximal`, keeps those with no admissible extension
    /// `F ∪ {k}` for `max F < k ≤ window`.
    pub fn enumerate_admissible(
        &self,
        window: u32,
        alpha: &Ordinal,
        only_maximal: bool,
    ) -> Result<Vec<FinSet>> {
        if window > self.window_limit {
            return Err(Error::capacity(
                "admissible-set enumeration window",
                window as usize,
                self.window_limit as usize,
            ));
        }
        let universe: Vec<u32> = (1..=window).collect();
        Ok(self.admissible_subsets(&universe, alpha, only_maximal))
    }

    /// Admissible subsets of an arbitrary increasing index list.
    pub(crate) fn admissible_subsets(
        &self,
        universe: &[u32],
        alpha: &Ordinal,
        only_maximal: bool,
    ) -> Vec<FinSet> {
        let fam = self.family(alpha);
        let mut out = Vec::new();
        let mut stack = Vec::with_capacity(universe.len());
        fam.walk(universe, 0, &mut stack, &mut |set, extendable| {
            if !only_maximal || !extendable {
                out.push(FinSet(set.to_vec()));
            }
        });
        out.sort();
        out
    }
}

impl<'a> SchreierFamily<'a> {
    pub fn alpha(&self) -> Ordinal {
        self.oracle.table.borrow().entries[self.id as usize]
            .ordinal
            .clone()
    }

    pub fn oracle(&self) -> &'a Schreier {
        self.oracle
    }

    /// Membership of a strictly increasing slice of positive integers.
    #[inline]
    pub fn contains(&self, set: &[u32]) -> bool {
        self.oracle.member_id(set, self.id)
    }

    /// Depth-first walk over admissible subsets of `universe[from..]` extending
    /// `stack`; `visit` receives each set and whether some later universe
    /// element extends it.
    fn walk(
        &self,
        universe: &[u32],
        from: usize,
        stack: &mut Vec<u32>,
        visit: &mut dyn FnMut(&[u32], bool),
    ) {
        let mut extendable = false;
        for i in from..universe.len() {
            stack.push(universe[i]);
            if self.contains(stack) {
                extendable = true;
                self.walk(universe, i + 1, stack, visit);
            }
            stack.pop();
        }
        visit(stack, extendable);
    }
}
