//! Linear ansatz machinery shared by the polynomial, catalog and bilinear stages.

use std::collections::BTreeMap;

use crate::dynsys::DynamicalSystem;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactalg::linalg::{mulmod, powmod, scalar_mod, Crt, Matrix, ModRref, PrimeStream};
use crate::exactalg::{Monomial, Polynomial, PowerCache, Scalar, Vars};

/// `φ` written over its least common denominator, `φⱼ = Pⱼ / D`.
pub(crate) struct ClearedMap {
    pub vars: Vars,
    pub den: Polynomial,
    /// `P₁, …, Pₙ, D`: the last entry lets one cache serve both.
    base: Vec<Polynomial>,
}

impl ClearedMap {
    pub fn new(sys: &DynamicalSystem) -> Self {
        let (den, mut base) = sys.common_denominator();
        base.push(den.clone());
        ClearedMap {
            vars: sys.vars().clone(),
            den,
            base,
        }
    }

    pub fn n(&self) -> usize {
        self.vars.len()
    }

    /// `m(P) · D^{d − |m|}` for each monomial, i.e. `D^d · m(φ)`.
    pub fn homogenized_monomials(&self, monos: &[Monomial], d: u32) -> Vec<Polynomial> {
        let mut cache = PowerCache::new(&self.base);
        monos.iter().map(|m| self.homogenized(&mut cache, m, d)).collect()
    }

    /// `D^d · p(φ)` for `deg p ≤ d`.
    pub fn homogenized_pullback(&self, p: &Polynomial, d: u32) -> Polynomial {
        let mut cache = PowerCache::new(&self.base);
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in p.terms() {
            out += &self.homogenized(&mut cache, m, d).scale(c);
        }
        out
    }

    /// The system `p(φ)·q = q(φ)·p` in the coefficients of `p` (degree ≤ `dn`),
    /// sampled at random points modulo `p` and reduced. Every rational solution
    /// survives the reduction, so its kernel dimension bounds the true one. `None`
    /// when a sample point hits a denominator.
    fn sampled_kernel(&self, monos: &[Monomial], dn: u32, q: &Polynomial, p: u64, seed: u64) -> Option<ModRref> {
        let dq = q.degree();
        let n = self.n();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows = (0..monos.len() + 3).map(|_| {
            let pt: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
            let vals: Vec<u64> = self.base.iter().map(|b| b.eval_mod(&pt, p)).collect::<Option<_>>()?;
            let (pv, d) = (&vals[..n], vals[n]);
            let dpow = |k: u32| powmod(d, k as u64, p);
            let mono = |m: &Monomial, at: &[u64]| {
                m.exponents()
                    .iter()
                    .zip(at)
                    .fold(1, |acc, (&e, &x)| mulmod(acc, powmod(x, e as u64, p), p))
            };
            let mut q_tilde = 0;
            for (m, c) in q.terms() {
                let c = scalar_mod(c, p)?;
                q_tilde = (q_tilde + mulmod(c, mulmod(mono(m, pv), dpow(dq - m.degree()), p), p)) % p;
            }
            let left = mulmod(q.eval_mod(&pt, p)?, dpow(dq), p);
            let right = mulmod(q_tilde, dpow(dn), p);
            Some(
                monos
                    .iter()
                    .map(|m| {
                        let t = mulmod(mono(m, pv), dpow(dn - m.degree()), p);
                        (mulmod(t, left, p) + p - mulmod(right, mono(m, &pt), p)) % p
                    })
                    .collect::<Vec<u64>>(),
            )
        });
        let rows = rows.collect::<Option<Vec<_>>>()?;
        Some(ModRref::from_residues(rows, monos.len(), p))
    }

    /// Solutions from sampled kernels over a few primes, lifted to Q and each
    /// checked exactly. Since the sampled dimension bounds the true one, a fully
    /// checked lift is the whole kernel. `None` when that cannot be established.
    fn modular_solutions(&self, monos: &[Monomial], dn: u32, q: &Polynomial) -> Option<Vec<Polynomial>> {
        let mut crt: Option<Crt> = None;
        for (k, p) in PrimeStream::new().take(3).enumerate() {
            let red = self.sampled_kernel(monos, dn, q, p, 0x7072_6566 + k as u64)?;
            if red.free.is_empty() {
                return Some(Vec::new());
            }
            match &mut crt {
                Some(c) if c.free == red.free => c.absorb(&red, p),
                _ => crt = Some(Crt::start(&red, p)),
            }
            let Some(basis) = crt.as_ref().and_then(Crt::reconstruct) else {
                continue;
            };
            let sols: Vec<Polynomial> = basis.iter().map(|v| combine(&self.vars, monos, v)).collect();
            let dq = q.degree();
            let left = q * &self.den.pow(dq);
            let right = &self.homogenized_pullback(q, dq) * &self.den.pow(dn);
            if sols
                .iter()
                .all(|s| &self.homogenized_pullback(s, dn) * &left == &right * s)
            {
                return Some(sols);
            }
        }
        None
    }

    fn homogenized(&self, cache: &mut PowerCache<'_>, m: &Monomial, d: u32) -> Polynomial {
        let mut e = m.exponents().to_vec();
        e.push(if self.den.is_one() { 0 } else { d - m.degree() });
        cache.monomial(&Monomial::from_exponents(&e), &self.vars)
    }
}

/// Kernel of the linear map sending unknown `i` to polynomial `cols[i]`: each basis
/// vector lists coefficients with `Σ vᵢ colsᵢ = 0`. `None` when its dimension
/// exceeds `limit`.
pub(crate) fn column_kernel(cols: &[Polynomial], limit: usize) -> Option<Vec<Vec<Scalar>>> {
    let mut rows: BTreeMap<&Monomial, Vec<(usize, &Scalar)>> = BTreeMap::new();
    for (i, c) in cols.iter().enumerate() {
        for (m, a) in c.terms() {
            rows.entry(m).or_default().push((i, a));
        }
    }
    let mut mat = Matrix::new(cols.len());
    let mut dense = vec![Scalar::default(); cols.len()];
    for entries in rows.values() {
        for x in dense.iter_mut() {
            *x = Scalar::default();
        }
        for &(i, a) in entries {
            dense[i] = a.clone();
        }
        mat.push_row(&dense);
    }
    mat.kernel_limited(limit)
}

/// `Σ vᵢ mᵢ`.
pub(crate) fn combine(vars: &Vars, monos: &[Monomial], v: &[Scalar]) -> Polynomial {
    Polynomial::from_terms(
        vars,
        monos
            .iter()
            .zip(v)
            .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
            .map(|(m, c)| (m.clone(), c.clone())),
    )
}

/// Solutions `p` (degree ≤ `dn`) of `p(φ)·q = q(φ)·p`. With `q = 1` these are the
/// polynomial invariants; otherwise each nonzero `p` gives the invariant `p/q`.
pub(crate) fn fixed_denominator_solutions(
    map: &ClearedMap,
    monos: &[Monomial],
    t: &[Polynomial],
    dn: u32,
    q: &Polynomial,
) -> Vec<Polynomial> {
    map.modular_solutions(monos, dn, q)
        .unwrap_or_else(|| exact_solutions(map, monos, t, dn, q))
}

/// Same as [`fixed_denominator_solutions`], by elimination over Q on the expanded identity.
fn exact_solutions(map: &ClearedMap, monos: &[Monomial], t: &[Polynomial], dn: u32, q: &Polynomial) -> Vec<Polynomial> {
    let dq = q.degree();
    let dpow = |k: u32| map.den.pow(k);
    let cols: Vec<Polynomial> = if q.is_one() {
        let dd = dpow(dn);
        monos
            .iter()
            .zip(t)
            .map(|(m, ti)| ti - &dd.mul_monomial(m, &Scalar::from_integer(1.into())))
            .collect()
    } else {
        // T_i · q · D^{dq} − Q̃ · mᵢ · D^{dn}, where Q̃ = D^{dq} q(φ).
        let q_tilde = map.homogenized_pullback(q, dq);
        let left = q * &dpow(dq);
        let right = &q_tilde * &dpow(dn);
        let one = Scalar::from_integer(1.into());
        monos
            .iter()
            .zip(t)
            .map(|(m, ti)| &(ti * &left) - &right.mul_monomial(m, &one))
            .collect()
    };
    column_kernel(&cols, usize::MAX)
        .expect("no limit")
        .iter()
        .map(|v| combine(&map.vars, monos, v))
        .collect()
}
