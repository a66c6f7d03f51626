//! Ordinals below ε₀ in Cantor normal form.
//!
//! An ordinal is a finite sum `ω^β₁·c₁ + … + ω^βₖ·cₖ` with `β₁ > … > βₖ` and
//! every `cᵢ ≥ 1`; the exponents are themselves ordinals in the same form.
//! Only the operations the Schreier recursion needs are exposed: comparison,
//! the zero/successor/limit trichotomy and fundamental sequences.
//!
//! Text syntax (also used in every JSON report under `"alpha"`):
//!
//! ```text
//! sum  := term ("+" term)*
//! term := "w^" atom ("*" nat)? | "w" ("*" nat)? | nat
//! atom := nat | "w" | "(" sum ")"
//! ```

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Tag recorded in reports: which fundamental sequences define `S_α` at limits.
pub const FUNDAMENTAL_SEQUENCE_CONVENTION: &str =
    "wainer: (b+w^(g+1))[n]=b+w^g*n; (b+w^g)[n]=b+w^(g[n]) for limit g";

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Term {
    exponent: Ordinal,
    coefficient: u64,
}

/// An ordinal `< ε₀` in Cantor normal form. Structural equality is ordinal equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

/// Outcome of [`Ordinal::classify`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Class {
    Zero,
    Successor(Ordinal),
    Limit,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn from_nat(n: u64) -> Self {
        if n == 0 {
            return Self::zero();
        }
        Ordinal {
            terms: vec![Term {
                exponent: Self::zero(),
                coefficient: n,
            }],
        }
    }

    pub fn omega() -> Self {
        Self::omega_pow(Self::from_nat(1))
    }

    /// `ω^e`.
    pub fn omega_pow(exponent: Ordinal) -> Self {
        Ordinal {
            terms: vec![Term {
                exponent,
                coefficient: 1,
            }],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(n)` when the ordinal is the natural number `n`.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exponent.is_zero() => Some(t.coefficient),
            _ => None,
        }
    }

    pub fn classify(&self) -> Class {
        match self.terms.last() {
            None => Class::Zero,
            Some(last) if last.exponent.is_zero() => {
                let mut pred = self.clone();
                let last = pred.terms.last_mut().expect("nonempty");
                if last.coefficient == 1 {
                    pred.terms.pop();
                } else {
                    last.coefficient -= 1;
                }
                Class::Successor(pred)
            }
            Some(_) => Class::Limit,
        }
    }

    pub fn is_limit(&self) -> bool {
        matches!(self.classify(), Class::Limit)
    }

    /// `self + 1`.
    pub fn successor(&self) -> Ordinal {
        let mut next = self.clone();
        match next.terms.last_mut() {
            Some(last) if last.exponent.is_zero() => last.coefficient += 1,
            _ => next.terms.push(Term {
                exponent: Ordinal::zero(),
                coefficient: 1,
            }),
        }
        next
    }

    /// The `n`-th element `α[n]` of the fundamental sequence of a limit ordinal.
    ///
    /// Writing `α = β + ω^γ`, the sequence is `β + ω^δ·n` when `γ = δ + 1` and
    /// `β + ω^(γ[n])` when `γ` is itself a limit.
    pub fn fundamental(&self, n: u64) -> Result<Ordinal> {
        if n == 0 {
            return Err(Error::contract("fundamental sequences are indexed from 1"));
        }
        if !self.is_limit() {
            return Err(Error::contract(format!(
                "fundamental sequence requested for non-limit ordinal {self}"
            )));
        }
        let mut base = self.clone();
        let last = base.terms.pop().expect("limit ordinals are nonzero");
        if last.coefficient > 1 {
            base.terms.push(Term {
                exponent: last.exponent.clone(),
                coefficient: last.coefficient - 1,
            });
        }
        let appended = match last.exponent.classify() {
            Class::Successor(delta) => Term {
                exponent: delta,
                coefficient: n,
            },
            Class::Limit => Term {
                exponent: last.exponent.fundamental(n)?,
                coefficient: 1,
            },
            Class::Zero => unreachable!("limit ordinals end in a positive exponent"),
        };
        // The appended exponent is below every exponent already in `base`, so
        // the result stays in normal form.
        base.terms.push(appended);
        Ok(base)
    }

    fn fmt_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_nat() {
            write!(f, "{n}")
        } else if *self == Ordinal::omega() {
            f.write_str("w")
        } else {
            write!(f, "({self})")
        }
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let ord = a
                .exponent
                .cmp(&b.exponent)
                .then(a.coefficient.cmp(&b.coefficient));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, term) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match term.exponent.as_nat() {
                Some(0) => {
                    write!(f, "{}", term.coefficient)?;
                    continue;
                }
                Some(1) => f.write_str("w")?,
                _ => {
                    f.write_str("w^")?;
                    term.exponent.fmt_atom(f)?;
                }
            }
            if term.coefficient > 1 {
                write!(f, "*{}", term.coefficient)?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected a natural number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::parse(start, "natural number out of range"))
    }

    fn coefficient(&mut self) -> Result<u64> {
        if !self.eat(b'*') {
            return Ok(1);
        }
        let at = self.pos;
        match self.nat()? {
            0 => Err(Error::parse(at, "coefficients must be at least 1")),
            c => Ok(c),
        }
    }

    fn atom(&mut self) -> Result<Ordinal> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat(b')') {
                    return Err(Error::parse(self.pos, "expected ')'"));
                }
                Ok(inner)
            }
            Some(b'w') => {
                self.pos += 1;
                Ok(Ordinal::omega())
            }
            _ => Ok(Ordinal::from_nat(self.nat()?)),
        }
    }

    /// One term as (exponent, coefficient), or `None` for a literal zero.
    fn term(&mut self) -> Result<Option<Term>> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                let exponent = if self.eat(b'^') {
                    self.atom()?
                } else {
                    Ordinal::from_nat(1)
                };
                let coefficient = self.coefficient()?;
                Ok(Some(Term {
                    exponent,
                    coefficient,
                }))
            }
            _ => {
                let n = self.nat()?;
                Ok((n > 0).then(|| Term {
                    exponent: Ordinal::zero(),
                    coefficient: n,
                }))
            }
        }
    }

    fn sum(&mut self) -> Result<Ordinal> {
        let mut terms: Vec<Term> = Vec::new();
        let mut count = 0usize;
        loop {
            self.skip_ws();
            let at = self.pos;
            let term = self.term()?;
            count += 1;
            match term {
                None if count == 1 && self.peek() != Some(b'+') => return Ok(Ordinal::zero()),
                None => return Err(Error::parse(at, "zero term inside a sum")),
                Some(term) => {
                    if let Some(prev) = terms.last() {
                        if term.exponent >= prev.exponent {
                            return Err(Error::parse(
                                at,
                                "exponents must strictly decrease (not in Cantor normal form)",
                            ));
                        }
                    }
                    terms.push(term);
                }
            }
            if !self.eat(b'+') {
                return Ok(Ordinal { terms });
            }
        }
    }
}

/// Parses the CNF text syntax described in the module docs.
pub fn parse_ordinal(text: &str) -> Result<Ordinal> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let value = parser.sum()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(Error::parse(parser.pos, "unexpected trailing input"));
    }
    Ok(value)
}

impl FromStr for Ordinal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_ordinal(s)
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_ordinal(&text).map_err(serde::de::Error::custom)
    }
}
