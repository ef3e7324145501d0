//! Q-bases of polynomials in `t` over a function field `F = Q(s₁, …, s_r)` whose
//! equal-degree blocks have Q-linearly independent leading coefficients.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::linalg::Matrix;
use crate::exactalg::{gcd, Polynomial, RationalFunction, Scalar, Vars};

/// Univariate polynomial in `t` with coefficients in a rational function field.
/// Coefficient `k` multiplies `t^k`; there are no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldPoly {
    field: Vars,
    coeffs: Vec<RationalFunction>,
}

impl FieldPoly {
    pub fn new(field: &Vars, mut coeffs: Vec<RationalFunction>) -> Result<Self> {
        if coeffs.iter().any(|c| c.vars() != field) {
            return Err(Error::Structural("coefficient outside the declared field".into()));
        }
        while coeffs.last().is_some_and(RationalFunction::is_zero) {
            coeffs.pop();
        }
        Ok(FieldPoly {
            field: field.clone(),
            coeffs,
        })
    }

    pub fn zero(field: &Vars) -> Self {
        FieldPoly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn field(&self) -> &Vars {
        &self.field
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&RationalFunction> {
        self.coeffs.last()
    }

    /// `Σ cᵢ pᵢ` over Q.
    pub fn combination(field: &Vars, terms: &[(Scalar, &FieldPoly)]) -> FieldPoly {
        let len = terms.iter().map(|(_, p)| p.coeffs.len()).max().unwrap_or(0);
        let mut out = vec![RationalFunction::zero(field); len];
        for (c, p) in terms {
            if c.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(&p.coeffs) {
                *o = o.add(&a.scale(c));
            }
        }
        FieldPoly::new(field, out).expect("same field")
    }
}

impl fmt::Display for FieldPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{k}")?,
            }
        }
        Ok(())
    }
}

/// Output polynomials with the Q-linear transition matrices relating them to the
/// input: `output[i] = Σⱼ transition[i][j]·input[j]` and
/// `input[i] = Σⱼ inverse[i][j]·output[j]`.
#[derive(Clone, Debug)]
pub struct LeadingNormalization {
    pub polys: Vec<FieldPoly>,
    pub transition: Vec<Vec<Scalar>>,
    pub inverse: Vec<Vec<Scalar>>,
}

/// Repeatedly picks the highest degree whose block has Q-dependent leading
/// coefficients, takes a dependence `Σ cᵢ lc(pᵢ) = 0`, and replaces the member with
/// the largest index among those with `cᵢ ≠ 0` by the lower-degree `Σ cᵢ pᵢ`.
///
/// `probes` are points of the auxiliary variables. When the leading coefficients
/// of a block, evaluated there, are already independent the exact test is skipped.
pub fn normalize_leading_sequence(qs: &[FieldPoly], probes: &[Vec<Scalar>]) -> Result<LeadingNormalization> {
    let s = qs.len();
    let Some(first) = qs.first() else {
        return Ok(LeadingNormalization {
            polys: Vec::new(),
            transition: Vec::new(),
            inverse: Vec::new(),
        });
    };
    let field = first.field().clone();
    if qs.iter().any(|q| q.field() != &field) {
        return Err(Error::Structural("polynomials over different fields".into()));
    }
    let mut polys = qs.to_vec();
    let mut transition = identity(s);
    let mut inverse = identity(s);
    loop {
        if polys.iter().any(FieldPoly::is_zero) {
            return Err(Error::Precondition("input is linearly dependent over Q".into()));
        }
        let top = polys.iter().filter_map(FieldPoly::degree).max().unwrap_or(0);
        let mut step = None;
        for m in (0..=top).rev() {
            let block: Vec<usize> = (0..s).filter(|&i| polys[i].degree() == Some(m)).collect();
            if block.len() < 2 {
                continue;
            }
            let lcs: Vec<&RationalFunction> = block.iter().map(|&i| polys[i].leading_coeff().unwrap()).collect();
            if let Some(c) = q_dependence(&field, &lcs, probes) {
                step = Some((block, c));
                break;
            }
        }
        let Some((block, c)) = step else {
            break;
        };
        let k = (0..block.len())
            .rev()
            .find(|&j| !c[j].is_zero())
            .expect("nonzero dependence");
        let target = block[k];
        let terms: Vec<(Scalar, &FieldPoly)> = block.iter().zip(&c).map(|(&i, ci)| (ci.clone(), &polys[i])).collect();
        let h = FieldPoly::combination(&field, &terms);
        if h.is_zero() {
            return Err(Error::Precondition("input is linearly dependent over Q".into()));
        }
        // Row `target` of T becomes Σ cⱼ T_{block[j]}; S absorbs the inverse column operation.
        let mut new_row = vec![Scalar::zero(); s];
        for (&i, ci) in block.iter().zip(&c) {
            for (x, t) in new_row.iter_mut().zip(&transition[i]) {
                *x += ci * t;
            }
        }
        transition[target] = new_row;
        let ct = c[k].clone();
        for row in inverse.iter_mut() {
            let old = row[target].clone();
            if old.is_zero() {
                continue;
            }
            for (&i, ci) in block.iter().zip(&c) {
                if i != target {
                    row[i] -= &old * ci / &ct;
                }
            }
            row[target] = &old / &ct;
        }
        polys[target] = h;
    }
    Ok(LeadingNormalization {
        polys,
        transition,
        inverse,
    })
}

fn identity(s: usize) -> Vec<Vec<Scalar>> {
    (0..s)
        .map(|i| {
            (0..s)
                .map(|j| if i == j { Scalar::one() } else { Scalar::zero() })
                .collect()
        })
        .collect()
}

/// A nonzero `c` with `Σ cᵢ fᵢ = 0` over Q, if one exists.
pub(crate) fn q_dependence(field: &Vars, fs: &[&RationalFunction], probes: &[Vec<Scalar>]) -> Option<Vec<Scalar>> {
    let k = fs.len();
    if !probes.is_empty() {
        let rows: Vec<Vec<Scalar>> = probes
            .iter()
            .filter_map(|pt| fs.iter().map(|f| f.eval(pt)).collect::<Option<Vec<_>>>())
            .collect();
        if Matrix::from_rows(k, &rows).rank() == k {
            return None;
        }
    }
    // Over the common denominator the question is about polynomial numerators.
    let mut l = Polynomial::one(field);
    for f in fs {
        let g = gcd(&l, f.den());
        l = &l * &f.den().div_exact(&g).unwrap();
    }
    let nums: Vec<Polynomial> = fs.iter().map(|f| f.num() * &l.div_exact(f.den()).unwrap()).collect();
    let mut monos: Vec<_> = nums.iter().flat_map(|p| p.terms().map(|(m, _)| m.clone())).collect();
    monos.sort();
    monos.dedup();
    let rows: Vec<Vec<Scalar>> = monos
        .iter()
        .map(|m| nums.iter().map(|p| p.coeff(m)).collect())
        .collect();
    Matrix::from_rows(k, &rows).kernel().into_iter().next()
}
