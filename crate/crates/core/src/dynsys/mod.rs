//! Rational dynamical systems `φ: Aⁿ ⇢ Aⁿ` given by coordinate rational functions.

mod degree;

use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::linalg::Matrix;
use crate::exactalg::{int, jacobian_rank_exact, Polynomial, RationalFunction, Scalar, Vars};

pub use degree::{degree_sequence, DegreeProfile, GrowthClass};

/// A self-map of affine n-space, one normalized rational function per coordinate.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DynamicalSystem {
    vars: Vars,
    coords: Vec<RationalFunction>,
}

impl DynamicalSystem {
    pub fn new(vars: Vars, coords: Vec<RationalFunction>) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::Structural("a system needs at least one variable".into()));
        }
        if coords.len() != vars.len() {
            return Err(Error::Structural(format!(
                "{} coordinates for {} variables; only self-maps of affine space are admitted",
                coords.len(),
                vars.len()
            )));
        }
        if let Some(c) = coords.iter().find(|c| c.vars() != &vars) {
            return Err(Error::Structural(format!(
                "coordinate over variables {:?}, expected {:?}",
                c.vars().names(),
                vars.names()
            )));
        }
        let distinct: HashSet<&String> = vars.names().iter().collect();
        if distinct.len() != vars.len() {
            return Err(Error::Structural("duplicate variable names".into()));
        }
        Ok(DynamicalSystem { vars, coords })
    }

    pub fn identity(vars: &Vars) -> Self {
        let coords = (0..vars.len()).map(|i| RationalFunction::var(vars, i)).collect();
        DynamicalSystem {
            vars: vars.clone(),
            coords,
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn coords(&self) -> &[RationalFunction] {
        &self.coords
    }

    /// Max over coordinates of `max(deg num, deg den)`.
    pub fn degree(&self) -> u32 {
        self.coords.iter().map(RationalFunction::degree).max().unwrap_or(0)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &DynamicalSystem) -> Result<DynamicalSystem> {
        if self.vars != inner.vars {
            return Err(Error::Structural("composing systems over different variables".into()));
        }
        let coords = self
            .coords
            .iter()
            .map(|c| c.substitute(&inner.coords))
            .collect::<Result<Vec<_>>>()?;
        Ok(DynamicalSystem {
            vars: self.vars.clone(),
            coords,
        })
    }

    /// `f ∘ φ`.
    pub fn pullback(&self, f: &RationalFunction) -> Result<RationalFunction> {
        if f.vars() != &self.vars {
            return Err(Error::Structural(format!(
                "function over {:?}, system over {:?}",
                f.vars().names(),
                self.vars.names()
            )));
        }
        f.substitute(&self.coords)
    }

    /// Writes `φⱼ = Pⱼ / D` with `D` the least common denominator of the coordinates.
    pub fn common_denominator(&self) -> (Polynomial, Vec<Polynomial>) {
        let mut d = Polynomial::one(&self.vars);
        for c in &self.coords {
            if c.den().is_one() {
                continue;
            }
            let g = crate::exactalg::gcd(&d, c.den());
            d = &d * &c.den().div_exact(&g).unwrap();
        }
        let nums = self
            .coords
            .iter()
            .map(|c| c.num() * &d.div_exact(c.den()).expect("lcm is a multiple"))
            .collect();
        (d, nums)
    }

    /// Evaluates the map at a point, `None` where a denominator vanishes.
    pub fn eval(&self, point: &[Scalar]) -> Option<Vec<Scalar>> {
        self.coords.iter().map(|c| c.eval(point)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dominance {
    Dominant,
    NotDominant,
    Inconclusive,
}

/// Dominance via the Jacobian determinant. A nonzero determinant at a random point
/// settles dominance; otherwise the exact rank over the function field decides, so
/// `Inconclusive` is never returned.
pub fn validate_dominant(sys: &DynamicalSystem, trials: usize) -> Result<Dominance> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    let n = sys.dim();
    let rows: Vec<Vec<Polynomial>> = sys
        .coords
        .iter()
        .map(|f| (0..n).map(|i| f.derivative_numerator(i)).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0xd0d0 ^ trials as u64);
    for _ in 0..trials {
        let point: Vec<Scalar> = (0..n).map(|_| int(rng.gen_range(-1_000_000..=1_000_000))).collect();
        if sys
            .coords
            .iter()
            .any(|f| num_traits::Zero::is_zero(&f.den().eval(&point)))
        {
            continue;
        }
        let vals: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|p| p.eval(&point)).collect())
            .collect();
        if Matrix::from_rows(n, &vals).rank() == n {
            return Ok(Dominance::Dominant);
        }
    }
    Ok(if jacobian_rank_exact(&sys.coords) == n {
        Dominance::Dominant
    } else {
        Dominance::NotDominant
    })
}

/// Iterates of one system, cached by exponent. Powers of two are built by squaring
/// and other exponents by composing them.
pub struct IterateCache {
    base: DynamicalSystem,
    cache: BTreeMap<u64, DynamicalSystem>,
}

impl IterateCache {
    pub fn new(base: &DynamicalSystem) -> Self {
        let mut cache = BTreeMap::new();
        cache.insert(1, base.clone());
        IterateCache {
            base: base.clone(),
            cache,
        }
    }

    pub fn get(&mut self, m: u64) -> Result<DynamicalSystem> {
        if m == 0 {
            return Ok(DynamicalSystem::identity(&self.base.vars));
        }
        if let Some(s) = self.cache.get(&m) {
            return Ok(s.clone());
        }
        // Nearest cached predecessor keeps sequential access (m-1, m) cheap.
        if let Some(prev) = self.cache.get(&(m - 1)) {
            let next = self.base.compose(prev)?;
            self.cache.insert(m, next.clone());
            return Ok(next);
        }
        let mut acc: Option<DynamicalSystem> = None;
        let mut bit = 0;
        while (1u64 << bit) <= m {
            if m & (1 << bit) != 0 {
                let p = self.power_of_two(bit)?;
                acc = Some(match acc {
                    None => p,
                    Some(a) => p.compose(&a)?,
                });
            }
            bit += 1;
        }
        let out = acc.expect("m > 0");
        self.cache.insert(m, out.clone());
        Ok(out)
    }

    fn power_of_two(&mut self, k: u32) -> Result<DynamicalSystem> {
        let m = 1u64 << k;
        if let Some(s) = self.cache.get(&m) {
            return Ok(s.clone());
        }
        let half = self.power_of_two(k - 1)?;
        let out = half.compose(&half)?;
        self.cache.insert(m, out.clone());
        Ok(out)
    }
}

/// `φ^m`, with `φ⁰` the identity.
pub fn iterate(sys: &DynamicalSystem, m: u64) -> Result<DynamicalSystem> {
    IterateCache::new(sys).get(m)
}

/// `φ*f = f ∘ φ`.
pub fn pullback(sys: &DynamicalSystem, f: &RationalFunction) -> Result<RationalFunction> {
    sys.pullback(f)
}

/// The product system `a × b` acting coordinate-wise. Variables of `b` that clash
/// with earlier names get a numeric suffix.
pub fn product(a: &DynamicalSystem, b: &DynamicalSystem) -> DynamicalSystem {
    let mut names: Vec<String> = a.vars.names().to_vec();
    let mut taken: HashSet<String> = names.iter().cloned().collect();
    for v in b.vars.names() {
        let mut candidate = v.clone();
        let mut k = 2;
        while taken.contains(&candidate) {
            candidate = format!("{v}_{k}");
            k += 1;
        }
        taken.insert(candidate.clone());
        names.push(candidate);
    }
    let vars = Vars::new(names);
    let (na, nb) = (a.dim(), b.dim());
    let left: Vec<usize> = (0..na).collect();
    let right: Vec<usize> = (na..na + nb).collect();
    let coords = a
        .coords
        .iter()
        .map(|c| c.embed(&vars, &left))
        .chain(b.coords.iter().map(|c| c.embed(&vars, &right)))
        .collect();
    DynamicalSystem { vars, coords }
}

/// Variable names of the `m`-fold diagonal power: `v` in copy `k` becomes `v{k}`,
/// or `v_{k}` if the short form would collide.
pub fn diagonal_names(vars: &Vars, m: usize) -> Vec<String> {
    let short: Vec<String> = (1..=m)
        .flat_map(|k| vars.names().iter().map(move |v| format!("{v}{k}")))
        .collect();
    let distinct: HashSet<&String> = short.iter().collect();
    if distinct.len() == short.len() {
        short
    } else {
        (1..=m)
            .flat_map(|k| vars.names().iter().map(move |v| format!("{v}_{k}")))
            .collect()
    }
}

/// The `m`-fold cartesian power `(Xᵐ, φ × ⋯ × φ)`, copy-major variable order.
pub fn diagonal_power(sys: &DynamicalSystem, m: usize) -> Result<DynamicalSystem> {
    if m == 0 {
        return Err(Error::Precondition("diagonal power needs m ≥ 1".into()));
    }
    let vars = Vars::new(diagonal_names(&sys.vars, m));
    let n = sys.dim();
    let mut coords = Vec::with_capacity(n * m);
    for k in 0..m {
        let map = copy_embedding(n, k);
        coords.extend(sys.coords.iter().map(|c| c.embed(&vars, &map)));
    }
    Ok(DynamicalSystem { vars, coords })
}

/// Index map of the `k`-th (0-based) factor inside a diagonal power.
pub fn copy_embedding(n: usize, k: usize) -> Vec<usize> {
    (k * n..(k + 1) * n).collect()
}

/// One elementary symmetric function of an orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricInvariant {
    /// The function `e_k`, for `k` = position + 1.
    pub value: RationalFunction,
    pub constant: bool,
}

/// Elementary symmetric functions `e₁, …, e_m` of the orbit `f, φ*f, …, (φ*)^{m-1} f`
/// of a `φ^m`-invariant `f`. Each is a coefficient of `∏ (T − (φ*)^i f)` up to sign,
/// hence invariant under `φ` itself.
pub fn symmetrize_iterate_invariant(
    sys: &DynamicalSystem,
    f: &RationalFunction,
    m: usize,
) -> Result<Vec<SymmetricInvariant>> {
    if m == 0 {
        return Err(Error::Precondition("m must be at least 1".into()));
    }
    let phi_m = iterate(sys, m as u64)?;
    if &phi_m.pullback(f)? != f {
        return Err(Error::Precondition(format!(
            "{f} is not invariant under the {m}-th iterate"
        )));
    }
    let vars = sys.vars();
    let mut orbit = Vec::with_capacity(m);
    let mut g = f.clone();
    for i in 0..m {
        if i > 0 {
            g = sys.pullback(&g)?;
        }
        orbit.push(g.clone());
    }
    // e[k] after absorbing each orbit element: e_k ← e_k + g·e_{k-1}.
    let mut e = vec![RationalFunction::one(vars)];
    for g in &orbit {
        e.push(RationalFunction::zero(vars));
        for k in (1..e.len()).rev() {
            let t = g.mul(&e[k - 1]);
            e[k] = e[k].add(&t);
        }
    }
    Ok(e.into_iter()
        .skip(1)
        .map(|value| SymmetricInvariant {
            constant: value.is_constant(),
            value,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    pub(crate) fn sys(names: &[&str], build: impl Fn(&[RationalFunction]) -> Vec<RationalFunction>) -> DynamicalSystem {
        let v = Vars::new(names.iter().copied());
        let xs: Vec<RationalFunction> = (0..names.len()).map(|i| RationalFunction::var(&v, i)).collect();
        DynamicalSystem::new(v, build(&xs)).unwrap()
    }

    fn c(v: &Vars, n: i64) -> RationalFunction {
        RationalFunction::constant(v, int(n))
    }

    fn henon() -> DynamicalSystem {
        sys(&["x", "y"], |x| vec![x[1].clone(), x[1].pow(2).sub(&x[0])])
    }

    #[test]
    fn dominance_examples() {
        let shift = sys(&["x"], |x| vec![x[0].add(&c(x[0].vars(), 1))]);
        assert_eq!(validate_dominant(&shift, 4).unwrap(), Dominance::Dominant);
        let diag = sys(&["x", "y"], |x| vec![x[0].clone(), x[0].clone()]);
        assert_eq!(validate_dominant(&diag, 4).unwrap(), Dominance::NotDominant);
        assert_eq!(validate_dominant(&henon(), 1).unwrap(), Dominance::Dominant);
        assert!(validate_dominant(&henon(), 0).is_err());
    }

    #[test]
    fn structural_errors() {
        let v = Vars::new(["x", "y"]);
        let x = RationalFunction::var(&v, 0);
        assert!(matches!(
            DynamicalSystem::new(v.clone(), vec![x]),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn iterate_examples() {
        let shift = sys(&["x"], |x| vec![x[0].add(&c(x[0].vars(), 1))]);
        let s3 = iterate(&shift, 3).unwrap();
        assert_eq!(s3.coords()[0].to_string(), "x + 3");
        assert_eq!(iterate(&henon(), 0).unwrap(), DynamicalSystem::identity(henon().vars()));
        let h2 = iterate(&henon(), 2).unwrap();
        let v = henon().vars().clone();
        let (x, y) = (RationalFunction::var(&v, 0), RationalFunction::var(&v, 1));
        let a = y.pow(2).sub(&x);
        assert_eq!(h2.coords(), &[a.clone(), a.pow(2).sub(&y)]);
    }

    #[test]
    fn iterate_is_associative() {
        let h = sys(&["x", "y"], |x| {
            let v = x[0].vars();
            vec![x[1].clone(), x[1].add(&c(v, 1)).div(&x[0]).unwrap()]
        });
        let mut cache = IterateCache::new(&h);
        let a = cache.get(2).unwrap();
        let b = cache.get(3).unwrap();
        let direct = iterate(&h, 5).unwrap();
        assert_eq!(a.compose(&b).unwrap(), direct);
        assert_eq!(cache.get(5).unwrap(), direct);
        // Lyness map has period 5.
        assert_eq!(direct, DynamicalSystem::identity(h.vars()));
    }

    #[test]
    fn product_and_powers() {
        let sx = sys(&["x"], |x| vec![x[0].add(&c(x[0].vars(), 1))]);
        let sy = sys(&["y"], |x| vec![x[0].add(&c(x[0].vars(), 1))]);
        let p = product(&sx, &sy);
        assert_eq!(p.vars().names(), &["x", "y"]);
        assert_eq!(p.coords()[1].to_string(), "y + 1");
        let clash = product(&sx, &sx);
        assert_eq!(clash.vars().names(), &["x", "x_2"]);
        let d = diagonal_power(&sx, 2).unwrap();
        assert_eq!(d.vars().names(), &["x1", "x2"]);
        assert_eq!(d.coords()[1].to_string(), "x2 + 1");
        let dbl = sys(&["x"], |x| vec![x[0].scale(&int(2))]);
        let d4 = diagonal_power(&dbl, 4).unwrap();
        let shown: Vec<String> = d4.coords().iter().map(|c| c.to_string()).collect();
        assert_eq!(shown, ["2*x1", "2*x2", "2*x3", "2*x4"]);
        assert_eq!(diagonal_power(&dbl, 1).unwrap().coords()[0].to_string(), "2*x1");
    }

    #[test]
    fn pullback_examples() {
        let v = Vars::new(["x", "y"]);
        let one = c(&v, 1);
        let s = sys(&["x", "y"], |x| vec![x[0].add(&one), x[1].add(&one)]);
        let (x, y) = (RationalFunction::var(&v, 0), RationalFunction::var(&v, 1));
        assert_eq!(pullback(&s, &x.sub(&y)).unwrap(), x.sub(&y));
        let id = DynamicalSystem::identity(&v);
        let f = x.pow(2).div(&y.add(&one)).unwrap();
        assert_eq!(pullback(&id, &f).unwrap(), f);
        let dbl = sys(&["x", "y"], |x| vec![x[0].scale(&int(2)), x[1].scale(&int(2))]);
        let r = x.div(&y).unwrap();
        assert_eq!(pullback(&dbl, &r).unwrap(), r);
    }

    #[test]
    fn symmetrize_examples() {
        let neg = sys(&["x"], |x| vec![x[0].neg()]);
        let x = RationalFunction::var(neg.vars(), 0);
        let out = symmetrize_iterate_invariant(&neg, &x, 2).unwrap();
        assert_eq!(out[0].value, RationalFunction::zero(neg.vars()));
        assert!(out[0].constant);
        assert_eq!(out[1].value, x.pow(2).neg());

        let swap = sys(&["x", "y"], |x| vec![x[1].clone(), x[0].clone()]);
        let v = swap.vars().clone();
        let (x, y) = (RationalFunction::var(&v, 0), RationalFunction::var(&v, 1));
        let out = symmetrize_iterate_invariant(&swap, &x, 2).unwrap();
        assert_eq!(out[0].value, x.add(&y));
        assert_eq!(out[1].value, x.mul(&y));
        for g in &out {
            assert_eq!(swap.pullback(&g.value).unwrap(), g.value);
        }

        let f = x.sub(&y).pow(2);
        let single = symmetrize_iterate_invariant(&swap, &f, 1).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].value, f);

        assert!(matches!(
            symmetrize_iterate_invariant(&swap, &x, 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn common_denominator_splits() {
        let s = sys(&["x", "y"], |x| {
            let v = x[0].vars();
            vec![x[0].div(&x[1]).unwrap(), x[1].add(&c(v, 1)).div(&x[1].pow(2)).unwrap()]
        });
        let (d, nums) = s.common_denominator();
        assert_eq!(d.to_string(), "y^2");
        assert_eq!(nums[0].to_string(), "x*y");
        assert_eq!(nums[1].to_string(), "y + 1");
        let _ = rat(1, 2);
    }
}
