//! Dense univariate polynomials over Q and exact rational root finding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::Polynomial;
use super::scalar::Scalar;

/// Coefficient `k` multiplies `t^k`; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly(Vec<Scalar>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    /// Reads a polynomial that only involves variable `i`.
    pub fn from_polynomial(p: &Polynomial, i: usize) -> Option<Self> {
        let mut coeffs = vec![Scalar::zero(); p.degree_in(i) as usize + 1];
        for (m, c) in p.terms() {
            if m.exponents().iter().enumerate().any(|(j, &e)| j != i && e > 0) {
                return None;
            }
            coeffs[m.exponents()[i] as usize] = c.clone();
        }
        Some(Self::new(coeffs))
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> Scalar {
        self.0.last().cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn eval(&self, t: &Scalar) -> Scalar {
        self.0.iter().rev().fold(Scalar::zero(), |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Scalar::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.0.clone();
        let lc = d.lc();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1;
            let f = &r[k] / &lc;
            for (j, c) in d.0.iter().enumerate() {
                r[k - dd + j] -= &f * c;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        UniPoly(r)
    }

    pub fn quo(&self, d: &UniPoly) -> UniPoly {
        let dd = d.degree().expect("division by zero polynomial");
        if self.0.len() <= dd {
            return UniPoly(Vec::new());
        }
        let mut r = self.0.clone();
        let mut q = vec![Scalar::zero(); r.len() - dd];
        let lc = d.lc();
        for k in (dd..r.len()).rev() {
            let f = &r[k] / &lc;
            for (j, c) in d.0.iter().enumerate() {
                r[k - dd + j] -= &f * c;
            }
            q[k - dd] = f;
        }
        Self::new(q)
    }

    pub fn monic(&self) -> Self {
        let lc = self.lc();
        if lc.is_zero() {
            return self.clone();
        }
        UniPoly(self.0.iter().map(|c| c / &lc).collect())
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    fn neg(&self) -> Self {
        UniPoly(self.0.iter().map(|c| -c).collect())
    }

    /// All distinct rational roots, ascending.
    pub fn rational_roots(&self) -> Vec<Scalar> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let g = self.quo(&self.gcd(&self.derivative())).monic();
        let mut roots = Vec::new();
        let mut g = g;
        if g.0[0].is_zero() {
            roots.push(Scalar::zero());
            g = g.quo(&UniPoly::new(vec![Scalar::zero(), Scalar::one()]));
        }
        if g.degree().unwrap_or(0) == 0 {
            return roots;
        }
        // Integer primitive form gives the denominator bound for rational roots.
        let l = g.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> =
            g.0.iter()
                .map(|c| (c * Scalar::from_integer(l.clone())).to_integer())
                .collect();
        let lead = ints.last().unwrap().abs();
        let bound = Scalar::one()
            + ints[..ints.len() - 1]
                .iter()
                .map(|c| Scalar::new(c.abs(), lead.clone()))
                .max()
                .unwrap_or_else(Scalar::zero);
        let width = Scalar::new(BigInt::one(), &lead * &lead * 2u32);
        let sturm = sturm_sequence(&g);
        let mut stack = vec![(-bound.clone(), bound)];
        while let Some((lo, hi)) = stack.pop() {
            let n = sign_changes(&sturm, &lo) - sign_changes(&sturm, &hi);
            if n == 0 {
                continue;
            }
            if n == 1 && &hi - &lo < width {
                let cand = simplest_in(&lo, &hi);
                if g.eval(&cand).is_zero() {
                    roots.push(cand);
                }
                continue;
            }
            let mid = (&lo + &hi) / Scalar::from_integer(BigInt::from(2));
            if g.eval(&mid).is_zero() {
                roots.push(mid.clone());
            }
            stack.push((lo, mid.clone()));
            stack.push((mid, hi));
        }
        roots.sort();
        roots.dedup();
        roots
    }
}

fn sturm_sequence(p: &UniPoly) -> Vec<UniPoly> {
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let r = seq[n - 2].rem(&seq[n - 1]).neg();
        if r.is_zero() {
            break;
        }
        seq.push(r);
    }
    seq
}

/// Sign changes of the Sturm sequence at `t` (roots in the half-open interval (a, b]).
fn sign_changes(seq: &[UniPoly], t: &Scalar) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|p| {
            let v = p.eval(t);
            if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Rational with the smallest denominator in `[lo, hi]`.
pub fn simplest_in(lo: &Scalar, hi: &Scalar) -> Scalar {
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return Scalar::zero();
    }
    if hi.is_negative() {
        return -simplest_in(&-hi, &-lo);
    }
    let c = lo.ceil();
    if &c <= hi {
        return c;
    }
    let f = lo.floor();
    let inner = simplest_in(&(hi - &f).recip(), &(lo - &f).recip());
    f + inner.recip()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::{int, rat};

    fn from_roots(roots: &[Scalar], extra: &[i64]) -> UniPoly {
        let mut p = UniPoly::new(extra.iter().map(|&c| int(c)).collect());
        for r in roots {
            let lin = UniPoly::new(vec![-r.clone(), int(1)]);
            let mut out = vec![Scalar::zero(); p.0.len() + 1];
            for (i, a) in p.0.iter().enumerate() {
                for (j, b) in lin.0.iter().enumerate() {
                    out[i + j] += a * b;
                }
            }
            p = UniPoly::new(out);
        }
        p
    }

    #[test]
    fn finds_rational_roots_only() {
        // (t - 3/7)(t + 5)^2 (t^2 - 2)
        let p = from_roots(&[rat(3, 7), int(-5), int(-5)], &[-2, 0, 1]);
        assert_eq!(p.rational_roots(), vec![int(-5), rat(3, 7)]);
        let q = from_roots(&[int(0), rat(-1, 2)], &[1, 0, 1]);
        assert_eq!(q.rational_roots(), vec![rat(-1, 2), int(0)]);
        assert!(UniPoly::new(vec![int(1), int(0), int(1)]).rational_roots().is_empty());
    }

    #[test]
    fn close_roots_with_large_denominators() {
        let p = from_roots(&[rat(1000, 1001), rat(1001, 1002)], &[1]);
        assert_eq!(p.rational_roots(), vec![rat(1000, 1001), rat(1001, 1002)]);
    }

    #[test]
    fn simplest_rational() {
        assert_eq!(simplest_in(&rat(1, 3), &rat(1, 2)), rat(1, 2));
        assert_eq!(simplest_in(&rat(3, 10), &rat(4, 10)), rat(1, 3));
        assert_eq!(simplest_in(&rat(-4, 10), &rat(-3, 10)), rat(-1, 3));
    }
}
