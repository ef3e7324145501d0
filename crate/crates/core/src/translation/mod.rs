//! Evidence for translational structure: closed-form recognizers, degree growth,
//! the invariant lattice of monomial maps, and leading-coefficient normalization
//! of polynomial sequences over a function field.

mod leading;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::dynsys::{degree_sequence, validate_dominant, DegreeProfile, Dominance, DynamicalSystem, GrowthClass};
use crate::error::{Error, Result};
use crate::exactalg::{Monomial, Polynomial, RationalFunction};

pub use leading::{normalize_leading_sequence, FieldPoly, LeadingNormalization};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecognizedClass {
    Affine,
    MobiusProduct,
    Monomial,
    Unrecognized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    TranslationalProven,
    TranslationalCandidate,
    NotTranslationalEvidence,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TranslationEvidence {
    pub profile: DegreeProfile,
    pub recognized_class: RecognizedClass,
    pub verdict: Verdict,
    /// Exponent matrix when the system is a monomial map.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponent_matrix: Option<ExponentMatrix>,
}

/// Integer matrix whose row `i` is the exponent vector of coordinate `i`, so the
/// map is `xᵢ ↦ ∏ⱼ xⱼ^{Aᵢⱼ}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentMatrix {
    pub entries: Vec<Vec<i64>>,
}

impl ExponentMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = entries.len();
        if entries.iter().any(|r| r.len() != n) {
            return Err(Error::Structural("exponent matrix must be square".into()));
        }
        Ok(ExponentMatrix { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Reads a monomial map whose coordinates are quotients of monic monomials.
    pub fn from_system(sys: &DynamicalSystem) -> Option<Self> {
        let entries = sys
            .coords()
            .iter()
            .map(|c| {
                let num = unit_monomial(c.num())?;
                let den = unit_monomial(c.den())?;
                Some(
                    num.exponents()
                        .iter()
                        .zip(den.exponents())
                        .map(|(&a, &b)| a as i64 - b as i64)
                        .collect(),
                )
            })
            .collect::<Option<Vec<Vec<i64>>>>()?;
        Some(ExponentMatrix { entries })
    }

    pub fn determinant(&self) -> BigInt {
        let n = self.dim();
        let mut m: Vec<Vec<BigInt>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let mut prev = BigInt::one();
        let mut negate = false;
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                m.swap(p, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let det = if n == 0 { BigInt::one() } else { m[n - 1][n - 1].clone() };
        if negate {
            -det
        } else {
            det
        }
    }

    /// Smallest `k ≤ max` with `A^k = I`; `None` if there is none or entries overflow,
    /// which for an integer matrix already rules out finite order.
    pub fn multiplicative_order(&self, max: u32) -> Option<u32> {
        let n = self.dim();
        let a: Vec<Vec<i128>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        let id: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
        let mut p = a.clone();
        for k in 1..=max {
            if p == id {
                return Some(k);
            }
            let mut next = vec![vec![0i128; n]; n];
            for i in 0..n {
                for j in 0..n {
                    let mut s: i128 = 0;
                    for l in 0..n {
                        s = s.checked_add(p[i][l].checked_mul(a[l][j])?)?;
                    }
                    next[i][j] = s;
                }
            }
            p = next;
        }
        None
    }
}

fn unit_monomial(p: &Polynomial) -> Option<Monomial> {
    let (m, c) = p.leading_term()?;
    (p.nterms() == 1 && c.is_one()).then(|| m.clone())
}

/// Order bound for the finite-order test; finite-order integer matrices in small
/// dimension have order at most a few dozen.
const ORDER_BOUND: u32 = 120;

/// Default number of iterates in the degree profile.
pub const DEFAULT_WINDOW: usize = 6;

pub fn classify_system(sys: &DynamicalSystem) -> Result<TranslationEvidence> {
    classify_system_with_window(sys, DEFAULT_WINDOW)
}

pub fn classify_system_with_window(sys: &DynamicalSystem, window: usize) -> Result<TranslationEvidence> {
    if validate_dominant(sys, 3)? != Dominance::Dominant {
        return Err(Error::Precondition("the system is not dominant".into()));
    }
    let profile = degree_sequence(sys, window)?;
    let mut exponent_matrix = None;
    let (recognized_class, proven) = if is_affine(sys) {
        (RecognizedClass::Affine, true)
    } else if is_mobius_product(sys) {
        (RecognizedClass::MobiusProduct, true)
    } else if let Some(a) = ExponentMatrix::from_system(sys) {
        let finite = a.multiplicative_order(ORDER_BOUND).is_some();
        exponent_matrix = Some(a);
        (RecognizedClass::Monomial, finite)
    } else {
        (RecognizedClass::Unrecognized, false)
    };
    let verdict = if proven {
        Verdict::TranslationalProven
    } else if profile.growth_class == GrowthClass::Exponential {
        Verdict::NotTranslationalEvidence
    } else {
        Verdict::TranslationalCandidate
    };
    Ok(TranslationEvidence {
        profile,
        recognized_class,
        verdict,
        exponent_matrix,
    })
}

fn is_affine(sys: &DynamicalSystem) -> bool {
    sys.coords().iter().all(|c| c.is_polynomial() && c.num().degree() <= 1)
}

/// Each coordinate `(a xᵢ + b)/(c xᵢ + d)` with `ad − bc ≠ 0` in its own variable.
fn is_mobius_product(sys: &DynamicalSystem) -> bool {
    sys.coords().iter().enumerate().all(|(i, c)| mobius_in(c, i))
}

fn mobius_in(f: &RationalFunction, i: usize) -> bool {
    let only_i = |p: &Polynomial| p.degree() <= 1 && (0..p.nvars()).all(|j| j == i || !p.involves(j));
    if !only_i(f.num()) || !only_i(f.den()) {
        return false;
    }
    let n = f.nvars();
    let x = Monomial::var(n, i);
    let one = Monomial::one(n);
    let (a, b) = (f.num().coeff(&x), f.num().coeff(&one));
    let (c, d) = (f.den().coeff(&x), f.den().coeff(&one));
    !(a * d - b * c).is_zero()
}

/// Invariant monomials `x^u` of the monomial map `A` with `|u| ≤ d`: the solutions
/// of `Aᵀu = u` with non-negative entries, found by enumeration. Ascending graded-lex.
pub fn monomial_invariant_lattice(a: &ExponentMatrix, d: u32) -> Result<Vec<Monomial>> {
    if a.determinant().is_zero() {
        return Err(Error::Precondition("singular exponent matrix".into()));
    }
    let n = a.dim();
    Ok(Monomial::all_up_to(n, d)
        .into_iter()
        .filter(|u| {
            let e = u.exponents();
            (0..n).all(|j| {
                let s: i64 = (0..n).map(|i| a.entries[i][j] * e[i] as i64).sum();
                s == e[j] as i64
            })
        })
        .collect())
}

/// Sign-aware conversion used by reports.
pub fn determinant_i64(a: &ExponentMatrix) -> Option<i64> {
    let d = a.determinant();
    let v = d.abs().to_i64()?;
    Some(if d.is_negative() { -v } else { v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, Vars};

    fn sys(names: &[&str], build: impl Fn(&[RationalFunction], &Vars) -> Vec<RationalFunction>) -> DynamicalSystem {
        let v = Vars::new(names.iter().copied());
        let xs: Vec<RationalFunction> = (0..names.len()).map(|i| RationalFunction::var(&v, i)).collect();
        DynamicalSystem::new(v.clone(), build(&xs, &v)).unwrap()
    }

    #[test]
    fn classification_examples() {
        let shift = sys(&["x"], |x, v| vec![x[0].add(&RationalFunction::one(v))]);
        let e = classify_system(&shift).unwrap();
        assert_eq!(
            (e.recognized_class, e.verdict),
            (RecognizedClass::Affine, Verdict::TranslationalProven)
        );

        let mob = sys(&["x", "y"], |x, v| {
            let c = |k| RationalFunction::constant(v, int(k));
            vec![
                x[0].scale(&int(2)).add(&c(3)).div(&x[0].add(&c(1))).unwrap(),
                x[1].scale(&int(5)),
            ]
        });
        let e = classify_system(&mob).unwrap();
        assert_eq!(
            (e.recognized_class, e.verdict),
            (RecognizedClass::MobiusProduct, Verdict::TranslationalProven)
        );

        let henon = sys(&["x", "y"], |x, _| vec![x[1].clone(), x[1].pow(2).sub(&x[0])]);
        let e = classify_system(&henon).unwrap();
        assert_eq!(
            (e.recognized_class, e.verdict),
            (RecognizedClass::Unrecognized, Verdict::NotTranslationalEvidence)
        );

        let mono = sys(&["x", "y"], |x, _| vec![x[0].pow(2).mul(&x[1]), x[0].mul(&x[1])]);
        let e = classify_system(&mono).unwrap();
        assert_eq!(
            (e.recognized_class, e.verdict),
            (RecognizedClass::Monomial, Verdict::NotTranslationalEvidence)
        );

        let inv = sys(&["x", "y"], |x, _| vec![x[1].clone(), x[0].mul(&x[1]).inv().unwrap()]);
        let e = classify_system(&inv).unwrap();
        assert_eq!(
            (e.recognized_class, e.verdict),
            (RecognizedClass::Monomial, Verdict::TranslationalProven)
        );

        let unipotent = sys(&["x", "y"], |x, _| vec![x[0].mul(&x[1]), x[1].clone()]);
        // Linear degree growth only reads as polynomial once the window is long enough.
        let e = classify_system_with_window(&unipotent, 20).unwrap();
        assert_eq!(
            (e.recognized_class, e.verdict),
            (RecognizedClass::Monomial, Verdict::TranslationalCandidate)
        );
    }

    #[test]
    fn lattice_examples() {
        let id = ExponentMatrix::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(monomial_invariant_lattice(&id, 2).unwrap().len(), 6);
        let cat = ExponentMatrix::new(vec![vec![2, 1], vec![1, 1]]).unwrap();
        assert_eq!(monomial_invariant_lattice(&cat, 6).unwrap(), vec![Monomial::one(2)]);
        let swap = ExponentMatrix::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(
            monomial_invariant_lattice(&swap, 2).unwrap(),
            vec![Monomial::one(2), Monomial::from_exponents(&[1, 1])]
        );
        let sing = ExponentMatrix::new(vec![vec![1, 1], vec![1, 1]]).unwrap();
        assert!(matches!(
            monomial_invariant_lattice(&sing, 2),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn orders_and_determinants() {
        let rot = ExponentMatrix::new(vec![vec![0, -1], vec![1, 0]]).unwrap();
        assert_eq!(rot.multiplicative_order(ORDER_BOUND), Some(4));
        assert_eq!(determinant_i64(&rot), Some(1));
        let cat = ExponentMatrix::new(vec![vec![2, 1], vec![1, 1]]).unwrap();
        assert_eq!(cat.multiplicative_order(ORDER_BOUND), None);
        let m3 = ExponentMatrix::new(vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]).unwrap();
        assert_eq!(m3.multiplicative_order(ORDER_BOUND), Some(3));
        assert_eq!(determinant_i64(&m3), Some(1));
    }
}
