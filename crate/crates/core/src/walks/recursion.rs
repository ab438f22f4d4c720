//! Loop-count recursions on Galton-Watson trees, evaluated bottom-up with
//! memoization in any coefficient ring.
//!
//! Quantities are the rescaled expectations `c^{-k} L_k` of:
//!
//! | id | quantity                                       | root law |
//! |----|------------------------------------------------|----------|
//! | 6  | 0-loops                                        | p        |
//! | 7  | 0-loops                                        | q        |
//! | 8  | 1-loops                                        | p        |
//! | 9  | ordered edge-disjoint pairs of 0-loops         | q        |
//! | 10 | 1-loops                                        | q        |
//! | 13 | 2-loops                                        | q        |
//! | 14 | (1,1)-loops                                    | q        |
//! | 15 | ordered edge-disjoint (1-loop, 0-loop) pairs   | q        |
//!
//! Writing `fs(l) = FM_l(p)/c^l`, a vertex with law `q` contributes
//! `fs(l + 1)` when it has `l` distinct children.
//!
//! The second-order recursions 13-15 exist in two transcriptions. The
//! [`Transcription::Printed`] one keeps the powers of `c` and summation
//! limits exactly as originally displayed. [`Transcription::Consistent`]
//! instead uses the ones that follow from counting steps: every first
//! generation edge that is traversed more than twice costs one extra power
//! of `1/c` per extra round trip, and a 1-loop has length at least 2.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::weights::{Ring, Weights};
use crate::error::{usage, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transcription {
    #[default]
    Printed,
    Consistent,
}

/// Recursion identifiers accepted by [`Recursions::eval`].
pub const EQUATIONS: [u32; 8] = [6, 7, 8, 9, 10, 13, 14, 15];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Q {
    L0u,
    L0g,
    L1u,
    L1g,
    Pair0,
    Triple0,
    L2g,
    L11g,
    Pair10,
}

fn binom(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i64 / (i + 1) as i64;
    }
    acc
}

pub struct Recursions<'a, R: Ring> {
    w: &'a Weights<R>,
    mode: Transcription,
    memo: HashMap<(Q, usize), R>,
    conv_memo: HashMap<(usize, usize), R>,
}

impl<'a, R: Ring> Recursions<'a, R> {
    pub fn new(w: &'a Weights<R>, mode: Transcription) -> Self {
        Recursions { w, mode, memo: HashMap::new(), conv_memo: HashMap::new() }
    }

    /// Root factor for law `q`.
    fn g(&self, l: usize) -> R {
        self.w.fs(l + 1).clone()
    }

    fn int(&self, n: i64) -> R {
        self.w.int(n)
    }

    /// `sum_{k_1 + ... + k_n = m} prod_j c^{-k_j} L^{(0)}_{k_j}(GW(q))`.
    fn conv(&mut self, n: usize, m: usize) -> R {
        if n == 0 {
            return if m == 0 { self.w.one.clone() } else { self.w.zero.clone() };
        }
        if let Some(v) = self.conv_memo.get(&(n, m)) {
            return v.clone();
        }
        let mut acc = self.w.zero.clone();
        for j in 0..=m {
            let a = self.get(Q::L0g, j);
            let b = self.conv(n - 1, m - j);
            acc = acc.add(&a.mul(&b));
        }
        self.conv_memo.insert((n, m), acc.clone());
        acc
    }

    fn get(&mut self, q: Q, k: usize) -> R {
        if let Some(v) = self.memo.get(&(q, k)) {
            return v.clone();
        }
        let v = match q {
            Q::L0u => self.zero_loops(k, false),
            Q::L0g => self.zero_loops(k, true),
            Q::L1u => self.one_loops(k, false),
            Q::L1g => self.one_loops(k, true),
            Q::Pair0 => self.tuples(k, 2),
            Q::Triple0 => self.tuples(k, 3),
            Q::L2g => self.two_loops(k),
            Q::L11g => {
                let t = self.one_one_terms(k);
                t.iter().fold(self.w.zero.clone(), |a, b| a.add(b))
            }
            Q::Pair10 => self.pair_one_zero(k),
        };
        self.memo.insert((q, k), v.clone());
        v
    }

    fn root(&self, l: usize, child_law: bool) -> R {
        if child_law {
            self.g(l)
        } else {
            self.w.fs(l).clone()
        }
    }

    fn zero_loops(&mut self, k: usize, child_law: bool) -> R {
        if k == 0 {
            return self.w.one.clone();
        }
        let mut acc = self.w.zero.clone();
        for l in 1..=k {
            let c = self.conv(l, k - l);
            acc = acc.add(&self.root(l, child_law).mul(&c));
        }
        acc
    }

    /// Ordered tuples of `arity` edge-disjoint 0-loops under a `q` root:
    /// the `arity` loops share `s` first generation vertices in
    /// `C(s + arity - 1, arity - 1)` ways.
    fn tuples(&mut self, k: usize, arity: usize) -> R {
        let mut acc = self.w.zero.clone();
        for s in 0..=k {
            let c = self.conv(s, k - s);
            let ways = self.int(binom(s + arity - 1, arity - 1));
            acc = acc.add(&ways.mul(&self.g(s)).mul(&c));
        }
        acc
    }

    fn one_loops(&mut self, k: usize, child_law: bool) -> R {
        let mut acc = self.w.zero.clone();
        if k < 2 {
            return acc;
        }
        for l in 1..=k - 2 {
            let mut inner = self.w.zero.clone();
            for kp in 2..=k - l {
                let a = self.get(Q::L1g, kp);
                let b = self.conv(l - 1, k - kp - l);
                inner = inner.add(&a.mul(&b));
            }
            acc = acc.add(&self.root(l, child_law).mul(&self.int(l as i64)).mul(&inner));
        }
        for l in 1..=k - 1 {
            let mut inner = self.w.zero.clone();
            for kp in 0..=k - l - 1 {
                let a = self.get(Q::Pair0, kp);
                let b = self.conv(l - 1, k - kp - l - 1);
                inner = inner.add(&a.mul(&b));
            }
            let f = self.root(l, child_law).mul(&self.w.u).mul(&self.int(binom(l + 1, 2)));
            acc = acc.add(&f.mul(&inner));
        }
        acc
    }

    fn two_loops(&mut self, k: usize) -> R {
        let mut acc = self.w.zero.clone();
        if k < 3 {
            return acc;
        }
        for l in 1..=k - 3 {
            let mut inner = self.w.zero.clone();
            for kp in 3..=k - l {
                let a = self.get(Q::L2g, kp);
                let b = self.conv(l - 1, k - kp - l);
                inner = inner.add(&a.mul(&b));
            }
            acc = acc.add(&self.g(l).mul(&self.int(l as i64)).mul(&inner));
        }
        let upow = match self.mode {
            Transcription::Printed => 1,
            Transcription::Consistent => 2,
        };
        for l in 1..=k - 2 {
            let mut inner = self.w.zero.clone();
            for kp in 0..=k - l - 2 {
                let a = self.get(Q::Triple0, kp);
                let b = self.conv(l - 1, k - kp - l - 2);
                inner = inner.add(&a.mul(&b));
            }
            let f = self.g(l).mul(&self.w.u_pow(upow)).mul(&self.int(binom(l + 2, 3)));
            acc = acc.add(&f.mul(&inner));
        }
        acc
    }

    fn pair_one_zero(&mut self, k: usize) -> R {
        let mut acc = self.w.zero.clone();
        let upow = match self.mode {
            Transcription::Printed => 0,
            Transcription::Consistent => 1,
        };
        for l1 in 1..=k {
            for l2 in 0..=k - l1 {
                let s = l1 + l2;
                let root = self.g(s).mul(&self.int(2));
                let mut first = self.w.zero.clone();
                for kp in 1..=k - s {
                    let a = self.get(Q::L1g, kp);
                    let b = self.conv(s - 1, k - s - kp);
                    first = first.add(&a.mul(&b));
                }
                acc = acc.add(&root.mul(&self.int(l1 as i64)).mul(&first));
                if k > s {
                    let mut second = self.w.zero.clone();
                    for kp in 0..=k - s - 1 {
                        let a = self.get(Q::Pair0, kp);
                        let b = self.conv(s - 1, k - s - kp - 1);
                        second = second.add(&a.mul(&b));
                    }
                    let f = root.mul(&self.w.u_pow(upow)).mul(&self.int(binom(l1 + 1, 2)));
                    acc = acc.add(&f.mul(&second));
                }
            }
        }
        acc
    }

    /// The five terms of the (1,1)-loop recursion, in display order.
    pub fn one_one_terms(&mut self, k: usize) -> [R; 5] {
        let z = self.w.zero.clone();
        let mut t = [z.clone(), z.clone(), z.clone(), z.clone(), z.clone()];
        if k < 4 {
            return t;
        }
        let lo = match self.mode {
            Transcription::Printed => 4,
            Transcription::Consistent => 2,
        };
        let t5_top = match self.mode {
            Transcription::Printed => k - 4,
            Transcription::Consistent => k - 2,
        };

        for l in 1..=k - 4 {
            let mut inner = z.clone();
            for kp in 4..=k - l {
                let a = self.get(Q::L11g, kp);
                let b = self.conv(l - 1, k - kp - l);
                inner = inner.add(&a.mul(&b));
            }
            t[0] = t[0].add(&self.g(l).mul(&self.int(l as i64)).mul(&inner));
        }

        for l in 2..=k - 4 {
            let mut inner = z.clone();
            for kp in lo..=k - l {
                if k - l < kp + lo {
                    break;
                }
                for kpp in lo..=k - kp - l {
                    let a = self.get(Q::L1g, kp);
                    let b = self.get(Q::L1g, kpp);
                    let c = self.conv(l - 2, k - kp - kpp - l);
                    inner = inner.add(&a.mul(&b).mul(&c));
                }
            }
            t[1] = t[1].add(&self.g(l).mul(&self.int(binom(l, 2))).mul(&inner));
        }

        for l in 1..=k - 3 {
            let mut inner = z.clone();
            for kp in 2..=k - l - 1 {
                let a = self.get(Q::Pair10, kp);
                let b = self.conv(l - 1, k - kp - l - 1);
                inner = inner.add(&a.mul(&b));
            }
            let f = self.g(l).mul(&self.w.u).mul(&self.int(binom(l + 1, 2)));
            t[2] = t[2].add(&f.mul(&inner));
        }

        for l in 2..=k - 2 {
            let mut inner = z.clone();
            for kp in 0..=k - l - 1 {
                if k - l - 1 - kp < 2 {
                    break;
                }
                let a = self.get(Q::Pair0, kp);
                for kpp in 2..=k - l - 1 - kp {
                    let b = self.get(Q::L1g, kpp);
                    let c = self.conv(l - 2, k - kp - kpp - l - 1);
                    inner = inner.add(&a.mul(&b).mul(&c));
                }
            }
            let f = self
                .g(l)
                .mul(&self.w.u)
                .mul(&self.int(binom(l + 1, 2) * (l as i64 - 1)));
            t[3] = t[3].add(&f.mul(&inner));
        }

        for l in 2..=t5_top {
            let mut inner = z.clone();
            for kp in 0..=k - l - 2 {
                let a = self.get(Q::Pair0, kp);
                for kpp in 0..=k - kp - l - 2 {
                    let b = self.get(Q::Pair0, kpp);
                    let c = self.conv(l - 2, k - kp - kpp - l - 2);
                    inner = inner.add(&a.mul(&b).mul(&c));
                }
            }
            let f = self
                .g(l)
                .mul(&self.w.u_pow(2))
                .mul(&self.int(binom(l + 2, 4) * 6));
            t[4] = t[4].add(&f.mul(&inner));
        }
        t
    }

    /// Right-hand side of recursion `eq` at half-length `k`.
    pub fn eval(&mut self, eq: u32, k: usize) -> Result<R> {
        if self.w.lmax() < k + 2 {
            return Err(usage(format!("weights cover l <= {}, need {}", self.w.lmax(), k + 2)));
        }
        let q = match eq {
            6 => Q::L0u,
            7 => Q::L0g,
            8 => Q::L1u,
            9 => Q::Pair0,
            10 => Q::L1g,
            13 => Q::L2g,
            14 => Q::L11g,
            15 => Q::Pair10,
            other => {
                return Err(usage(format!(
                    "unknown recursion {other}; known: 6, 7, 8, 9, 10, 13, 14, 15"
                )))
            }
        };
        Ok(self.get(q, k))
    }

    /// Ordered triples of edge-disjoint 0-loops under a `q` root.
    pub fn triples(&mut self, k: usize) -> R {
        self.get(Q::Triple0, k)
    }
}

/// `C(l + 2, 4) * 6` against the number of distinct rank patterns of two
/// doubly visited root edges among `l` root edges, for the report.
pub fn root_pair_rank_factor(l: usize) -> (Rational, Rational) {
    let printed = Rational::from_int(binom(l + 2, 4) * 6);
    let canonical = Rational::from_int(binom(l + 2, 4) * 3);
    (printed, canonical)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generating::FactorialMomentModel;
    use crate::walks::weights::{rational_weights, series_weights};

    #[test]
    fn small_values_poisson() {
        let c = Rational::from_int(10);
        let w = rational_weights(&FactorialMomentModel::Poisson, &c, 12).unwrap();
        let mut r = Recursions::new(&w, Transcription::Printed);
        assert_eq!(r.eval(6, 2).unwrap(), Rational::from_int(2));
        assert_eq!(r.eval(8, 2).unwrap(), Rational::new(1, 10));
        assert!(r.eval(11, 2).is_err());
    }

    #[test]
    fn one_one_leading_terms_at_four() {
        let w = series_weights(&FactorialMomentModel::Poisson, 4, 8).unwrap();
        let mut printed = Recursions::new(&w, Transcription::Printed);
        let p = printed.eval(14, 4).unwrap();
        assert_eq!(p.coeff(1), Rational::from_int(2));
        let mut consistent = Recursions::new(&w, Transcription::Consistent);
        let t = consistent.one_one_terms(4);
        assert_eq!(t[2].coeff(2), Rational::from_int(2));
        assert_eq!(t[4].coeff(2), Rational::from_int(6));
        assert_eq!(consistent.eval(14, 4).unwrap().coeff(2), Rational::from_int(8));
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(6, 4), 15);
        assert_eq!(binom(1, 2), 0);
        assert_eq!(root_pair_rank_factor(2).0, Rational::from_int(6));
    }
}
