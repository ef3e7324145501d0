use std::fmt;

use num_traits::{One, Zero};

use super::gcd::gcd;
use super::monomial::Monomial;
use super::poly::{fmt_monomial, Polynomial, Vars};
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// A rational function `num / den` in canonical form: the two parts are coprime and
/// `den` has integer coefficients, content one and positive graded-lex leading
/// coefficient. Equal functions therefore have equal representations.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

/// Canonical form of `num / den`.
pub fn ratfunc_normalize(num: &Polynomial, den: &Polynomial) -> Result<RationalFunction> {
    RationalFunction::new(num.clone(), den.clone())
}

/// The composition `f(images)`; see [`RationalFunction::substitute`].
pub fn substitute(f: &RationalFunction, images: &[RationalFunction]) -> Result<RationalFunction> {
    f.substitute(images)
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if num.vars() != den.vars() {
            return Err(Error::Structural(
                "numerator and denominator over different variables".into(),
            ));
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero(num.vars());
        }
        let g = gcd(&num, &den);
        if g.is_constant() {
            Self::scaled(num, den)
        } else {
            Self::scaled(num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        }
    }

    /// Assumes coprime parts; fixes content and sign.
    fn scaled(num: Polynomial, den: Polynomial) -> Self {
        let (c, den) = den.primitive_decomposition();
        let num = if c.is_one() { num } else { num.scale(&c.recip()) };
        RationalFunction { num, den }
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let den = Polynomial::one(p.vars());
        RationalFunction { num: p, den }
    }

    pub fn zero(vars: &Vars) -> Self {
        Self::from_poly(Polynomial::zero(vars))
    }

    pub fn one(vars: &Vars) -> Self {
        Self::from_poly(Polynomial::one(vars))
    }

    pub fn constant(vars: &Vars, c: Scalar) -> Self {
        Self::from_poly(Polynomial::constant(vars, c))
    }

    pub fn var(vars: &Vars, i: usize) -> Self {
        Self::from_poly(Polynomial::var(vars, i))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    /// `max(deg num, deg den)`.
    pub fn degree(&self) -> u32 {
        self.num.degree().max(self.den.degree())
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, subtract: bool) -> Self {
        let rhs_num = if subtract { -&other.num } else { other.num.clone() };
        if self.den == other.den {
            let n = &self.num + &rhs_num;
            return Self::reduce(n, self.den.clone());
        }
        if self.den.is_one() {
            return Self::scaled(&(&self.num * &other.den) + &rhs_num, other.den.clone());
        }
        if other.den.is_one() {
            return Self::scaled(&self.num + &(&rhs_num * &self.den), self.den.clone());
        }
        // Henrici: only the common part of the denominators can cancel.
        let g = gcd(&self.den, &other.den);
        if g.is_constant() {
            let n = &(&self.num * &other.den) + &(&rhs_num * &self.den);
            return Self::scaled(n, &self.den * &other.den);
        }
        let d1 = self.den.div_exact(&g).unwrap();
        let d2 = other.den.div_exact(&g).unwrap();
        let t = &(&self.num * &d2) + &(&rhs_num * &d1);
        if t.is_zero() {
            return Self::zero(self.vars());
        }
        let h = gcd(&t, &g);
        let num = t.div_exact(&h).unwrap();
        let den = &d1 * &other.den.div_exact(&h).unwrap();
        Self::scaled(num, den)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.vars());
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = other.den.div_exact(&g1).unwrap();
        let n2 = other.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        Self::scaled(&n1 * &n2, &d1 * &d2)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::scaled(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars());
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        // Powers of coprime parts stay coprime.
        RationalFunction {
            num: self.num.pow(k),
            den: self.den.pow(k),
        }
    }

    pub fn derivative(&self, i: usize) -> Self {
        let n = &(&self.num.derivative(i) * &self.den) - &(&self.num * &self.den.derivative(i));
        Self::reduce(n, self.den.pow(2))
    }

    /// Numerator of `∂f/∂xᵢ` over the common denominator `den²`.
    pub(crate) fn derivative_numerator(&self, i: usize) -> Polynomial {
        &(&self.num.derivative(i) * &self.den) - &(&self.num * &self.den.derivative(i))
    }

    /// Value at a point, `None` where the denominator vanishes.
    pub fn eval(&self, point: &[Scalar]) -> Option<Scalar> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point) / d)
    }

    /// Reinterprets the function over `target`, sending variable `i` to `map[i]`.
    pub fn embed(&self, target: &Vars, map: &[usize]) -> Self {
        RationalFunction {
            num: self.num.embed(target, map),
            den: self.den.embed(target, map),
        }
    }

    /// The composition `f(images)`. All images must share one variable list, which
    /// becomes the variable list of the result.
    pub fn substitute(&self, images: &[RationalFunction]) -> Result<Self> {
        if images.len() != self.nvars() {
            return Err(Error::Structural(format!(
                "{} images supplied for {} variables",
                images.len(),
                self.nvars()
            )));
        }
        let Some(first) = images.first() else {
            return Err(Error::Structural("substitution needs at least one variable".into()));
        };
        let target = first.vars().clone();
        if images.iter().any(|g| g.vars() != &target) {
            return Err(Error::Structural("images over different variable lists".into()));
        }
        let nums: Vec<Polynomial> = images.iter().map(|g| g.num.clone()).collect();
        let dens: Vec<Polynomial> = images.iter().map(|g| g.den.clone()).collect();
        let polynomial_images = dens.iter().all(Polynomial::is_one);

        if polynomial_images {
            let n = self.num.compose(&nums);
            let d = self.den.compose(&nums);
            if d.is_zero() {
                return Err(Error::Indeterminacy("denominator pulls back to zero".into()));
            }
            return Ok(Self::reduce(n, d));
        }

        // p(images) = N / ∏ qⱼ^{dⱼ} with dⱼ = deg_{xⱼ} p.
        let (n, dn) = homogenized_compose(&self.num, &nums, &dens, &target);
        let (d, dd) = homogenized_compose(&self.den, &nums, &dens, &target);
        if d.is_zero() {
            return Err(Error::Indeterminacy("denominator pulls back to zero".into()));
        }
        let mut num = n;
        let mut den = d;
        for j in 0..images.len() {
            if dens[j].is_one() {
                continue;
            }
            if dd[j] > dn[j] {
                num = &num * &dens[j].pow(dd[j] - dn[j]);
            } else if dn[j] > dd[j] {
                den = &den * &dens[j].pow(dn[j] - dd[j]);
            }
        }
        Ok(Self::reduce(num, den))
    }
}

fn homogenized_compose(
    p: &Polynomial,
    nums: &[Polynomial],
    dens: &[Polynomial],
    target: &Vars,
) -> (Polynomial, Vec<u32>) {
    let degs: Vec<u32> = (0..p.nvars()).map(|j| p.degree_in(j)).collect();
    let mut np = super::poly::PowerCache::new(nums);
    let mut dp = super::poly::PowerCache::new(dens);
    let mut out = Polynomial::zero(target);
    for (m, c) in p.terms() {
        let mut t = np.monomial(m, target).scale(c);
        let comp: Vec<u32> = m
            .exponents()
            .iter()
            .zip(&degs)
            .enumerate()
            .map(|(j, (e, d))| if dens[j].is_one() { 0 } else { d - e })
            .collect();
        let cm = Monomial::from_exponents(&comp);
        if !cm.is_one() {
            t = &t * &dp.monomial(&cm, target);
        }
        out += &t;
    }
    (out, degs)
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.nterms() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        let single_power = self.den.nterms() == 1
            && self
                .den
                .leading_monomial()
                .is_some_and(|m| m.exponents().iter().filter(|&&e| e > 0).count() == 1);
        if single_power {
            let m = self.den.leading_monomial().unwrap();
            write!(f, "/{}", fmt_monomial(self.vars(), m))
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::{int, rat};

    fn ring() -> (Vars, RationalFunction, RationalFunction) {
        let v = Vars::new(["x", "y"]);
        (v.clone(), RationalFunction::var(&v, 0), RationalFunction::var(&v, 1))
    }

    #[test]
    fn normalize_cancels_common_factor() {
        let (_, x, y) = ring();
        let (px, py) = (x.num().clone(), y.num().clone());
        let f = ratfunc_normalize(&(&(&px * &px) - &(&py * &py)), &(&px - &py)).unwrap();
        assert_eq!(f.to_string(), "x + y");
        assert!(f.is_polynomial());
    }

    #[test]
    fn normalize_zero_and_sign() {
        let (v, x, y) = ring();
        let z = ratfunc_normalize(&Polynomial::zero(&v), &(y.num() + x.num())).unwrap();
        assert_eq!(z, RationalFunction::zero(&v));
        let f = ratfunc_normalize(&x.num().scale(&int(2)), &Polynomial::constant(&v, int(-2))).unwrap();
        assert_eq!(f.to_string(), "-x");
        assert_eq!(
            ratfunc_normalize(x.num(), &Polynomial::zero(&v)),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn field_operations() {
        let (v, x, y) = ring();
        let one = RationalFunction::one(&v);
        let a = x.div(&y.add(&one)).unwrap();
        let b = y.div(&x.sub(&one)).unwrap();
        let s = a.add(&b);
        let back = s.sub(&b);
        assert_eq!(back, a);
        let p = a.mul(&b);
        assert_eq!(p.div(&b).unwrap(), a);
        assert_eq!(a.sub(&a), RationalFunction::zero(&v));
        assert_eq!(x.div(&x).unwrap(), one);
    }

    #[test]
    fn substitution_examples() {
        let (v, x, y) = ring();
        let one = RationalFunction::one(&v);
        let f = x.sub(&y);
        let g = f.substitute(&[x.add(&one), y.add(&one)]).unwrap();
        assert_eq!(g, f);
        let h = x.div(&y).unwrap();
        assert_eq!(h.substitute(&[x.clone(), y.clone()]).unwrap(), h);
        let two = int(2);
        assert_eq!(h.substitute(&[x.scale(&two), y.scale(&two)]).unwrap(), h);
        // Rational images: x/y at (1/x, x+y)
        let r = h.substitute(&[one.div(&x).unwrap(), x.add(&y)]).unwrap();
        assert_eq!(r.to_string(), "1/(x^2 + x*y)");
        let pt = [rat(3, 2), int(5)];
        assert_eq!(r.eval(&pt), Some(Scalar::one() / (rat(3, 2) * (rat(3, 2) + int(5)))));
    }

    #[test]
    fn substitution_detects_indeterminacy() {
        let (v, x, y) = ring();
        let f = RationalFunction::one(&v).div(&x.sub(&y)).unwrap();
        assert!(matches!(
            f.substitute(&[x.clone(), x.clone()]),
            Err(Error::Indeterminacy(_))
        ));
    }

    #[test]
    fn display_forms() {
        let (v, x, y) = ring();
        let one = RationalFunction::one(&v);
        assert_eq!(x.div(&y).unwrap().to_string(), "x/y");
        assert_eq!(x.add(&one).div(&y.pow(2)).unwrap().to_string(), "(x + 1)/y^2");
        assert_eq!(x.div(&x.mul(&y).add(&one)).unwrap().to_string(), "x/(x*y + 1)");
        assert_eq!(x.div(&x.pow(2).mul(&y)).unwrap().to_string(), "1/(x*y)");
        assert_eq!(x.div(&y.scale(&int(2))).unwrap().to_string(), "1/2*x/y");
    }
}
