//! Exact linear programming: a dense simplex over the rationals and vertex
//! enumeration of `{a ≥ 0 : h_j · a ≤ 1}` by the double description method.

use fixedbitset::FixedBitSet;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::num::Q;

/// Optimal solution of `max c·x` subject to `A x ≤ b`, `x ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Q,
    pub primal: Vec<Q>,
    /// Shadow prices of the rows of `A`.
    pub dual: Vec<Q>,
}

/// Solves `max c·x`, `A x ≤ b`, `x ≥ 0` with `b ≥ 0`, so the origin is a
/// feasible basis. Bland's rule rules out cycling.
pub fn maximize(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> Result<LpSolution> {
    let rows = a.len();
    let vars = c.len();
    if b.len() != rows || a.iter().any(|r| r.len() != vars) {
        return Err(Error::contract("inconsistent LP dimensions"));
    }
    if b.iter().any(|v| v.is_negative()) {
        return Err(Error::contract("right-hand side must be nonnegative"));
    }
    let cols = vars + rows;
    // Row i: [A_i | e_i | b_i]; objective row: [-c | 0 | 0].
    let mut t: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..rows).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut obj: Vec<Q> = c.iter().map(|v| -v).collect();
    obj.extend(std::iter::repeat_n(Q::zero(), rows + 1));
    let mut basis: Vec<usize> = (vars..cols).collect();

    loop {
        let Some(enter) = (0..cols).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Q)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[cols] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (r, _) = leave.ok_or_else(|| Error::invalid("linear program is unbounded"))?;
        let pivot = t[r][enter].clone();
        for v in t[r].iter_mut() {
            *v /= &pivot;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * p;
                }
            }
        }
        let f = obj[enter].clone();
        for (v, p) in obj.iter_mut().zip(&pivot_row) {
            *v -= &f * p;
        }
        basis[r] = enter;
    }

    let mut primal = vec![Q::zero(); vars];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < vars {
            primal[bv] = t[i][cols].clone();
        }
    }
    Ok(LpSolution {
        value: obj[cols].clone(),
        primal,
        dual: obj[vars..cols].to_vec(),
    })
}

/// Vertices of the bounded polytope `{a ∈ ℝ^d : a ≥ 0, h_j · a ≤ 1 ∀j}`,
/// sorted.
///
/// The cone `{(a, t) : a ≥ 0, t ≥ 0, t − h_j·a ≥ 0}` is built one constraint
/// at a time from the orthant. Rays are primitive integer vectors; two rays
/// are adjacent when no third ray vanishes on every constraint both vanish on.
pub fn polytope_vertices(d: usize, halfspaces: &[Vec<Q>]) -> Result<Vec<Vec<Q>>> {
    if halfspaces.iter().any(|h| h.len() != d) {
        return Err(Error::contract("halfspace dimension mismatch"));
    }
    let dim = d + 1;
    let total = dim + halfspaces.len();
    // h·a ≤ 1 cleared of denominators becomes L·t − (L·h)·a ≥ 0.
    let scaled: Vec<Vec<i128>> = halfspaces
        .iter()
        .map(|h| {
            let l = crate::num::common_denominator(h);
            let mut r = h
                .iter()
                .map(|v| (-(v * &l).to_integer()).to_i128().ok_or_else(overflow))
                .collect::<Result<Vec<_>>>()?;
            r.push(l.to_i128().ok_or_else(overflow)?);
            Ok(r)
        })
        .collect::<Result<_>>()?;
    // Constraint k as a row on (a, t): k < d is a_k ≥ 0, k = d is t ≥ 0.
    let row = |k: usize| -> Vec<i128> {
        if k < dim {
            (0..dim).map(|i| i128::from(i == k)).collect()
        } else {
            scaled[k - dim].clone()
        }
    };

    struct Ray {
        v: Vec<i128>,
        zeros: FixedBitSet,
    }

    let mut rays: Vec<Ray> = (0..dim)
        .map(|i| {
            let mut zeros = FixedBitSet::with_capacity(total);
            for k in 0..dim {
                if k != i {
                    zeros.insert(k);
                }
            }
            Ray {
                v: (0..dim).map(|k| i128::from(k == i)).collect(),
                zeros,
            }
        })
        .collect();

    for k in dim..total {
        let h = row(k);
        let vals: Vec<i128> = rays.iter().map(|r| dot(&h, &r.v)).collect::<Result<_>>()?;
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] < 0).collect();
        let mut next: Vec<Ray> = Vec::new();
        for p in &pos {
            for n in &neg {
                let mut common = rays[*p].zeros.clone();
                common.intersect_with(&rays[*n].zeros);
                let adjacent = (0..rays.len())
                    .all(|r| r == *p || r == *n || !common.is_subset(&rays[r].zeros));
                if !adjacent {
                    continue;
                }
                let (vp, vn) = (vals[*p], -vals[*n]);
                let v = rays[*p]
                    .v
                    .iter()
                    .zip(&rays[*n].v)
                    .map(|(&x, &y)| {
                        vn.checked_mul(x)
                            .and_then(|a| vp.checked_mul(y).and_then(|b| a.checked_add(b)))
                            .ok_or_else(overflow)
                    })
                    .collect::<Result<Vec<_>>>()?;
                let mut zeros = common;
                zeros.insert(k);
                next.push(Ray {
                    v: primitive(v),
                    zeros,
                });
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + next.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i] >= 0 {
                if vals[i] == 0 {
                    r.zeros.insert(k);
                }
                kept.push(r);
            }
        }
        kept.extend(next);
        rays = kept;
    }

    let mut out = Vec::with_capacity(rays.len());
    for r in rays {
        let t = r.v[d];
        if t <= 0 {
            return Err(Error::invalid("polytope is unbounded"));
        }
        out.push(
            r.v[..d]
                .iter()
                .map(|&x| Q::new(x.into(), t.into()))
                .collect::<Vec<Q>>(),
        );
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn overflow() -> Error {
    Error::capacity("vertex coordinate bits", 129, 128)
}

fn dot(h: &[i128], v: &[i128]) -> Result<i128> {
    h.iter().zip(v).try_fold(0i128, |acc, (&a, &b)| {
        a.checked_mul(b)
            .and_then(|p| acc.checked_add(p))
            .ok_or_else(overflow)
    })
}

fn primitive(v: Vec<i128>) -> Vec<i128> {
    let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g <= 1 {
        v
    } else {
        v.into_iter().map(|x| x / g).collect()
    }
}
