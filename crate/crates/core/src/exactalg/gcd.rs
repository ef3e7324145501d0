//! Multivariate gcd over Q by content/primitive-part recursion and subresultant
//! remainder sequences in the main variable.

use num_traits::One;

use super::monomial::Monomial;
use super::poly::Polynomial;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Greatest common divisor, normalized to integer coefficients with content one and
/// positive leading coefficient. `gcd(0, b)` is the normalized `b`.
pub fn poly_gcd(a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
    if a.vars() != b.vars() {
        return Err(Error::Structural(format!(
            "gcd over different variable lists {:?} and {:?}",
            a.vars().names(),
            b.vars().names()
        )));
    }
    Ok(gcd(a, b))
}

pub(crate) fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    gcd_nonzero(&a.primitive(), &b.primitive()).primitive()
}

/// Squarefree part `p / gcd(p, ∂p/∂x₁, …, ∂p/∂xₙ)`, primitive.
pub fn squarefree_part(p: &Polynomial) -> Polynomial {
    if p.is_constant() {
        return p.primitive();
    }
    let mut g = p.clone();
    for i in 0..p.nvars() {
        if g.is_constant() {
            break;
        }
        if p.involves(i) {
            g = gcd(&g, &p.derivative(i));
        }
    }
    p.div_exact(&g).expect("gcd divides its argument").primitive()
}

fn gcd_nonzero(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let vars = a.vars().clone();
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(&vars);
    }
    // Split off monomial contents first; they are the common cheap case.
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mono = Polynomial::monomial(&vars, ma.gcd(&mb), Scalar::one());
    let a = strip_monomial(a, &ma);
    let b = strip_monomial(b, &mb);
    if a.is_constant() || b.is_constant() {
        return mono;
    }
    if a == b {
        return &mono * &a;
    }

    let n = vars.len();
    if let Some(w) = (0..n).find(|&i| a.involves(i) != b.involves(i)) {
        let (with, without) = if a.involves(w) { (&a, &b) } else { (&b, &a) };
        let c = content_in(with, w);
        return &mono * &gcd_nonzero(&c, without);
    }

    // Cheap exact-division probe before the remainder sequence.
    let (big, small) = if a.degree() >= b.degree() { (&a, &b) } else { (&b, &a) };
    if big.div_exact(small).is_some() {
        return &mono * small;
    }

    let v = (0..n).rev().find(|&i| a.involves(i)).expect("nonconstant");
    let ca = content_in(&a, v);
    let cb = content_in(&b, v);
    let pa = a.div_exact(&ca).expect("content divides").primitive();
    let pb = b.div_exact(&cb).expect("content divides").primitive();
    let gc = gcd_nonzero(&ca, &cb);
    let gp = subresultant_gcd(&pa, &pb, v);
    let gp = primitive_in(&gp, v);
    &(&mono * &gc) * &gp
}

fn strip_monomial(p: &Polynomial, m: &Monomial) -> Polynomial {
    if m.is_one() {
        return p.clone();
    }
    Polynomial::from_terms(p.vars(), p.terms().map(|(t, c)| (t.checked_div(m).unwrap(), c.clone())))
}

/// Gcd of the coefficients of `p` viewed as a polynomial in variable `v`.
pub(crate) fn content_in(p: &Polynomial, v: usize) -> Polynomial {
    let mut coeffs: Vec<Polynomial> = p.coefficients_in(v).into_iter().filter(|c| !c.is_zero()).collect();
    coeffs.sort_by_key(|c| (c.nterms(), c.degree()));
    let mut g = coeffs[0].primitive();
    for c in &coeffs[1..] {
        if g.is_constant() {
            break;
        }
        g = gcd_nonzero(&g, &c.primitive()).primitive();
    }
    g
}

fn primitive_in(p: &Polynomial, v: usize) -> Polynomial {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides").primitive()
}

/// Dense univariate view: coefficient `k` multiplies `x_v^k`.
type UPoly = Vec<Polynomial>;

fn trim(mut p: UPoly) -> UPoly {
    while p.last().is_some_and(Polynomial::is_zero) {
        p.pop();
    }
    p
}

fn prem(a: &UPoly, b: &UPoly) -> UPoly {
    let db = b.len() - 1;
    let lcb = &b[db];
    let mut r = a.clone();
    let mut k = (a.len() - 1 - db + 1) as u32;
    while !r.is_empty() && r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * lcb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] -= &(&lr * bc);
        }
        debug_assert!(r[dr].is_zero());
        r = trim(r);
        k -= 1;
    }
    if k > 0 && !r.is_empty() {
        let f = lcb.pow(k);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    r
}

fn subresultant_gcd(a: &Polynomial, b: &Polynomial, v: usize) -> Polynomial {
    let vars = a.vars().clone();
    let mut ua = a.coefficients_in(v);
    let mut ub = b.coefficients_in(v);
    if ua.len() < ub.len() {
        std::mem::swap(&mut ua, &mut ub);
    }
    let mut g = Polynomial::one(&vars);
    let mut h = Polynomial::one(&vars);
    loop {
        let delta = (ua.len() - ub.len()) as u32;
        let r = prem(&ua, &ub);
        if r.is_empty() {
            return Polynomial::from_coefficients_in(&vars, v, &ub);
        }
        if r.len() == 1 {
            return Polynomial::one(&vars);
        }
        let divisor = &g * &h.pow(delta);
        ua = ub;
        ub = r
            .iter()
            .map(|c| c.div_exact(&divisor).expect("subresultant division is exact"))
            .collect();
        g = ua.last().unwrap().clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g
                .pow(delta)
                .div_exact(&h.pow(delta - 1))
                .expect("subresultant division is exact"),
        };
    }
}

/// Resultant of `a` and `b` with respect to variable `v`, via the Sylvester
/// determinant computed by fraction-free elimination.
pub fn resultant(a: &Polynomial, b: &Polynomial, v: usize) -> Polynomial {
    let vars = a.vars().clone();
    let ua = a.coefficients_in(v);
    let ub = b.coefficients_in(v);
    if ua.is_empty() || ub.is_empty() {
        return Polynomial::zero(&vars);
    }
    let m = ua.len() - 1;
    let n = ub.len() - 1;
    if m == 0 && n == 0 {
        return Polynomial::one(&vars);
    }
    let size = m + n;
    let zero = Polynomial::zero(&vars);
    let mut mat = vec![vec![zero.clone(); size]; size];
    for i in 0..n {
        for (k, c) in ua.iter().rev().enumerate() {
            mat[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in ub.iter().rev().enumerate() {
            mat[n + i][i + k] = c.clone();
        }
    }
    bareiss_determinant(mat)
}

pub(crate) fn bareiss_determinant(mut mat: Vec<Vec<Polynomial>>) -> Polynomial {
    let n = mat.len();
    let vars = mat[0][0].vars().clone();
    let mut prev = Polynomial::one(&vars);
    let mut sign = false;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&r| !mat[r][k].is_zero()) else {
            return Polynomial::zero(&vars);
        };
        if piv != k {
            mat.swap(piv, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&mat[k][k] * &mat[i][j]) - &(&mat[i][k] * &mat[k][j]);
                mat[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            mat[i][k] = Polynomial::zero(&vars);
        }
        prev = mat[k][k].clone();
    }
    let det = mat[n - 1][n - 1].clone();
    if sign {
        -det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::Vars;
    use crate::exactalg::scalar::int;

    fn ring(names: &[&str]) -> (Vars, Vec<Polynomial>) {
        let v = Vars::new(names.iter().copied());
        let xs = (0..names.len()).map(|i| Polynomial::var(&v, i)).collect();
        (v, xs)
    }

    #[test]
    fn difference_of_squares() {
        let (_, xs) = ring(&["x", "y"]);
        let (x, y) = (&xs[0], &xs[1]);
        let a = &(x * x) - &(y * y);
        let b = x - y;
        assert_eq!(poly_gcd(&a, &b).unwrap(), x - y);
    }

    #[test]
    fn gcd_with_zero_normalizes() {
        let (v, xs) = ring(&["x", "y"]);
        let p = &xs[0].scale(&int(-4)) + &Polynomial::constant(&v, int(6));
        assert_eq!(poly_gcd(&p, &Polynomial::zero(&v)).unwrap().to_string(), "2*x - 3");
    }

    #[test]
    fn coprime_linear() {
        let (v, xs) = ring(&["x"]);
        let one = Polynomial::one(&v);
        let a = &xs[0] + &one;
        let b = &xs[0] + &Polynomial::constant(&v, int(2));
        assert!(poly_gcd(&a, &b).unwrap().is_one());
    }

    #[test]
    fn mismatched_vars_rejected() {
        let (_, xs) = ring(&["x"]);
        let (_, ys) = ring(&["y"]);
        assert!(matches!(poly_gcd(&xs[0], &ys[0]), Err(Error::Structural(_))));
    }

    #[test]
    fn hidden_common_factor_three_vars() {
        let (v, xs) = ring(&["x", "y", "z"]);
        let (x, y, z) = (&xs[0], &xs[1], &xs[2]);
        let one = Polynomial::one(&v);
        let common = &(&(x * y) + &(z * z)) + &one;
        let a = &common * &(&(x * z) - &y.scale(&int(3)));
        let b = &common * &(&(&(y * y) + x) - &(z * x));
        assert_eq!(poly_gcd(&a, &b).unwrap(), common.primitive());
    }

    #[test]
    fn squarefree_and_resultant() {
        let (v, xs) = ring(&["x", "y"]);
        let (x, y) = (&xs[0], &xs[1]);
        let f = &(x - y).pow(3) * &(x + &Polynomial::one(&v));
        assert_eq!(
            squarefree_part(&f),
            (&(x - y) * &(x + &Polynomial::one(&v))).primitive()
        );
        // res_y(y - x, y + x) = -2x up to sign conventions of the Sylvester layout.
        let r = resultant(&(y - x), &(y + x), 1);
        assert_eq!(r.primitive(), x.clone());
    }
}
