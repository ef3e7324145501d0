use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::scalar::{denominator_lcm, integer_content, Scalar};

/// Ordered list of variable names shared by every polynomial of one ring.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Vars(names.into_iter().map(Into::into).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }
}

/// Sparse multivariate polynomial over Q. Terms are kept in a map ordered by
/// graded-lex, so the leading term is the last entry. No stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    vars: Vars,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(vars: &Vars) -> Self {
        Polynomial {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Scalar::one())
    }

    pub fn constant(vars: &Vars, c: Scalar) -> Self {
        Self::monomial(vars, Monomial::one(vars.len()), c)
    }

    pub fn var(vars: &Vars, i: usize) -> Self {
        Self::monomial(vars, Monomial::var(vars.len(), i), Scalar::one())
    }

    pub fn monomial(vars: &Vars, m: Monomial, c: Scalar) -> Self {
        debug_assert_eq!(m.nvars(), vars.len());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial {
            vars: vars.clone(),
            terms,
        }
    }

    /// Builds a polynomial from terms; repeated monomials are summed.
    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), vars.len());
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        match self.terms.len() {
            0 => true,
            1 => self.terms.keys().next().unwrap().is_one(),
            _ => false,
        }
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.terms.values().next().is_some_and(|c| c.is_one())
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if self.is_zero() {
            Some(Scalar::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn leading_coeff(&self) -> Scalar {
        self.terms.values().next_back().cloned().unwrap_or_else(Scalar::zero)
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.leading_monomial().map_or(0, Monomial::degree)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.exponents()[i]).max().unwrap_or(0)
    }

    /// Whether variable `i` occurs in some term.
    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.exponents()[i] > 0)
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(self.nvars()),
            Some(first) => it.fold(first.clone(), |acc, m| acc.gcd(m)),
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &Polynomial) {
        assert!(
            self.vars == other.vars,
            "polynomials over different variable lists: {:?} vs {:?}",
            self.vars.names(),
            other.vars.names()
        );
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut result = Self::one(&self.vars);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Value modulo the prime `p`, or `None` when `p` divides a coefficient denominator.
    pub(crate) fn eval_mod(&self, point: &[u64], p: u64) -> Option<u64> {
        use super::linalg::{mulmod, powmod, scalar_mod};
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut t = scalar_mod(c, p)?;
            for (&e, &x) in m.exponents().iter().zip(point) {
                if e > 0 {
                    t = mulmod(t, powmod(x, e as u64, p), p);
                }
            }
            acc = (acc + t) % p;
        }
        Some(acc)
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.nvars());
        let mut powers: Vec<Vec<Scalar>> = point.iter().map(|v| vec![Scalar::one(), v.clone()]).collect();
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = &mut powers[i];
                while pw.len() <= e as usize {
                    let next = pw.last().unwrap() * &point[i];
                    pw.push(next);
                }
                t *= &pw[e as usize];
            }
            acc += t;
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.exponents()[i];
            if e == 0 {
                continue;
            }
            let mut d = m.clone();
            d.set(i, e - 1);
            out.terms.insert(d, c * Scalar::from_integer(BigInt::from(e)));
        }
        out
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        self.check_vars(d);
        let (lm, lc) = d.leading_term()?;
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let mut rem = self.clone();
        let mut quo = Self::zero(&self.vars);
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.checked_div(lm)?;
            let qc = c / lc;
            for (dm, dc) in &d.terms {
                rem.add_term(dm.mul(&qm), -(dc * &qc));
            }
            quo.terms.insert(qm, qc);
        }
        Some(quo)
    }

    /// Splits `self = c * p` with `p` integral, content one, positive leading coefficient.
    pub fn primitive_decomposition(&self) -> (Scalar, Polynomial) {
        if self.is_zero() {
            return (Scalar::zero(), self.clone());
        }
        let l = denominator_lcm(self.terms.values());
        let lf = Scalar::from_integer(l.clone());
        let ints: Vec<Scalar> = self.terms.values().map(|c| c * &lf).collect();
        let mut g = integer_content(ints.iter());
        if self.leading_coeff().is_negative() {
            g = -g;
        }
        let gf = Scalar::from_integer(g);
        let p = Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .keys()
                .cloned()
                .zip(ints.into_iter().map(|c| c / &gf))
                .collect(),
        };
        (gf / lf, p)
    }

    pub fn primitive(&self) -> Polynomial {
        self.primitive_decomposition().1
    }

    /// Coefficients with respect to variable `i`: entry `k` multiplies `x_i^k`.
    /// The coefficients keep the full variable list with exponent zero in slot `i`.
    pub fn coefficients_in(&self, i: usize) -> Vec<Polynomial> {
        let mut out = vec![Self::zero(&self.vars); self.degree_in(i) as usize + 1];
        for (m, c) in &self.terms {
            let e = m.exponents()[i] as usize;
            let mut r = m.clone();
            r.set(i, 0);
            out[e].terms.insert(r, c.clone());
        }
        if self.is_zero() {
            out.clear();
        }
        out
    }

    pub fn from_coefficients_in(vars: &Vars, i: usize, coeffs: &[Polynomial]) -> Polynomial {
        let mut out = Self::zero(vars);
        for (k, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                let mut r = m.clone();
                r.set(i, m.exponents()[i] + k as u32);
                out.add_term(r, a.clone());
            }
        }
        out
    }

    /// Reinterprets the polynomial over `target`, sending variable `i` to `map[i]`.
    pub fn embed(&self, target: &Vars, map: &[usize]) -> Polynomial {
        assert_eq!(map.len(), self.nvars());
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut e = Monomial::one(target.len());
            for (i, &k) in m.exponents().iter().enumerate() {
                e.set(map[i], e.exponents()[map[i]] + k);
            }
            out.add_term(e, c.clone());
        }
        out
    }

    /// Substitutes polynomial `images[i]` for variable `i`.
    pub fn compose(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.nvars());
        let target = images
            .first()
            .map(|p| p.vars.clone())
            .unwrap_or_else(|| self.vars.clone());
        let mut cache = PowerCache::new(images);
        let mut out = Self::zero(&target);
        for (m, c) in &self.terms {
            let t = cache.monomial(m, &target).scale(c);
            out += &t;
        }
        out
    }
}

/// Lazily computed powers of a fixed list of polynomials.
pub(crate) struct PowerCache<'a> {
    base: &'a [Polynomial],
    powers: Vec<Vec<Polynomial>>,
}

impl<'a> PowerCache<'a> {
    pub(crate) fn new(base: &'a [Polynomial]) -> Self {
        PowerCache {
            base,
            powers: base
                .iter()
                .map(|p| vec![Polynomial::one(p.vars()), p.clone()])
                .collect(),
        }
    }

    pub(crate) fn pow(&mut self, i: usize, e: u32) -> &Polynomial {
        let pw = &mut self.powers[i];
        while pw.len() <= e as usize {
            let next = pw.last().unwrap() * &self.base[i];
            pw.push(next);
        }
        &self.powers[i][e as usize]
    }

    /// Product of `base[i]^exps[i]`.
    pub(crate) fn monomial(&mut self, m: &Monomial, target: &Vars) -> Polynomial {
        let mut acc: Option<Polynomial> = None;
        for (i, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let p = self.pow(i, e);
            acc = Some(match acc {
                None => p.clone(),
                Some(a) => &a * p,
            });
        }
        acc.unwrap_or_else(|| Polynomial::one(target))
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl<'a> std::ops::AddAssign<&'a Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &'a Polynomial) {
        self.check_vars(rhs);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<'a> std::ops::SubAssign<&'a Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &'a Polynomial) {
        self.check_vars(rhs);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.check_vars(rhs);
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        let (small, big) = if self.nterms() <= rhs.nterms() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        if let Some(c) = small.constant_value() {
            return big.scale(&c);
        }
        let mut out = Polynomial::zero(&self.vars);
        for (m1, c1) in &small.terms {
            for (m2, c2) in &big.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

pub(crate) fn fmt_scalar(c: &Scalar) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub(crate) fn fmt_monomial(vars: &Vars, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(vars.name(i).to_string()),
            _ => parts.push(format!("{}^{}", vars.name(i), e)),
        }
    }
    parts.join("*")
}

/// Terms in descending graded-lex order, e.g. `2*x^2*y - 3/4*x + 1`.
/// The output reparses to the same polynomial.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{}", fmt_scalar(&a))?;
            } else if a.is_one() {
                write!(f, "{}", fmt_monomial(&self.vars, m))?;
            } else {
                write!(f, "{}*{}", fmt_scalar(&a), fmt_monomial(&self.vars, m))?;
            }
        }
        Ok(())
    }
}
