//! Bilinear stage: numerator and denominator both unknown.
//!
//! With both `p` and `q` of degree at most `d`, the condition `p(φ)·q = q(φ)·p`
//! cleared by `D^d` reads `Σ_{i<j} (aᵢbⱼ − aⱼbᵢ)(Tᵢmⱼ − Tⱼmᵢ) = 0`. It is linear in
//! the Plücker coordinates `w = a ∧ b` of the plane spanned by `p` and `q`, so we
//! take the exact kernel in `w` and keep its decomposable points: those satisfy the
//! quadratic Plücker relations, which are solved exactly on a parametrized kernel
//! of dimension at most three.

use std::collections::HashSet;

use num_traits::Zero;

use super::linear::{column_kernel, combine, ClearedMap};
use crate::exactalg::univariate::UniPoly;
use crate::exactalg::{gcd, int, resultant, Monomial, Polynomial, RationalFunction, Scalar, Vars};

pub(crate) enum BilinearOutcome {
    /// Kernel dimension and the candidate invariants read off its decomposable points.
    Solved {
        kernel_dim: usize,
        candidates: Vec<RationalFunction>,
    },
    /// The kernel exceeds the extraction limit.
    TooLarge,
}

pub(crate) fn bilinear_search(map: &ClearedMap, d: u32, limit: usize) -> BilinearOutcome {
    let monos = Monomial::all_up_to(map.n(), d);
    let t = map.homogenized_monomials(&monos, d);
    let m = monos.len();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let mono_polys: Vec<Polynomial> = monos
        .iter()
        .map(|u| Polynomial::monomial(&map.vars, u.clone(), int(1)))
        .collect();
    let cols: Vec<Polynomial> = pairs
        .iter()
        .map(|&(i, j)| &(&t[i] * &mono_polys[j]) - &(&t[j] * &mono_polys[i]))
        .collect();
    let Some(kernel) = column_kernel(&cols, limit) else {
        return BilinearOutcome::TooLarge;
    };
    let r = kernel.len();
    let mut candidates = Vec::new();
    if r > 0 {
        for point in decomposable_points(&kernel, &pairs, m) {
            let w: Vec<Scalar> = (0..pairs.len())
                .map(|k| kernel.iter().zip(&point).map(|(kv, t)| &kv[k] * t).sum())
                .collect();
            if let Some((a, b)) = plane_of(&w, &pairs, m) {
                let p = combine(&map.vars, &monos, &a);
                let q = combine(&map.vars, &monos, &b);
                if let Ok(f) = RationalFunction::new(p, q) {
                    if !f.is_constant() {
                        candidates.push(f);
                    }
                }
            }
        }
    }
    BilinearOutcome::Solved {
        kernel_dim: r,
        candidates,
    }
}

/// Antisymmetric matrix of a 2-vector.
fn to_matrix(w: &[Scalar], pairs: &[(usize, usize)], m: usize) -> Vec<Vec<Scalar>> {
    let mut mat = vec![vec![Scalar::zero(); m]; m];
    for (k, &(i, j)) in pairs.iter().enumerate() {
        if !w[k].is_zero() {
            mat[i][j] = w[k].clone();
            mat[j][i] = -w[k].clone();
        }
    }
    mat
}

/// If `w = a ∧ b`, returns an echelonized pair `(a, b)` spanning the plane, with
/// `a` carrying the larger leading monomial; both are monic at their leading entry.
fn plane_of(w: &[Scalar], pairs: &[(usize, usize)], m: usize) -> Option<(Vec<Scalar>, Vec<Scalar>)> {
    let k = w.iter().position(|c| !c.is_zero())?;
    let (i, j) = pairs[k];
    let mat = to_matrix(w, pairs, m);
    // Rows of a decomposable matrix lie in the plane; rows i and j span it.
    let (ri, rj) = (mat[i].clone(), mat[j].clone());
    // Check w is proportional to ri ∧ rj.
    let wedge: Vec<Scalar> = pairs.iter().map(|&(s, t)| &ri[s] * &rj[t] - &ri[t] * &rj[s]).collect();
    let scale = &wedge[k] / &w[k];
    if scale.is_zero() || wedge.iter().zip(w).any(|(x, y)| *x != y * &scale) {
        return None;
    }
    let mut rows = [ri, rj];
    // Echelon rows by trailing pivot: eliminate so pivots (last nonzero) differ.
    rows.sort_by_key(|r| std::cmp::Reverse(r.iter().rposition(|c| !c.is_zero())));
    let mut a = rows[0].clone();
    let mut b = rows[1].clone();
    let pa = a.iter().rposition(|c| !c.is_zero())?;
    if !b[pa].is_zero() {
        let f = &b[pa] / &a[pa];
        for (x, y) in b.iter_mut().zip(&a) {
            *x -= &f * y;
        }
    }
    let pb = b.iter().rposition(|c| !c.is_zero())?;
    if !a[pb].is_zero() {
        let f = &a[pb] / &b[pb];
        for (x, y) in a.iter_mut().zip(&b) {
            *x -= &f * y;
        }
    }
    let la = a[pa].clone();
    let lb = b[pb].clone();
    a.iter_mut().for_each(|x| *x /= &la);
    b.iter_mut().for_each(|x| *x /= &lb);
    Some((a, b))
}

/// Projective rational points of the kernel (coordinates w.r.t. the basis) whose
/// 2-vector is decomposable. Positive-dimensional solution sets are sampled.
fn decomposable_points(kernel: &[Vec<Scalar>], pairs: &[(usize, usize)], m: usize) -> Vec<Vec<Scalar>> {
    let r = kernel.len();
    let tv = Vars::new((1..=r).map(|i| format!("t{i}")));
    let quadrics = plucker_quadrics(kernel, pairs, m, &tv);
    let units: Vec<Vec<Scalar>> = (0..r)
        .map(|a| (0..r).map(|b| if a == b { int(1) } else { int(0) }).collect())
        .collect();
    if quadrics.is_empty() {
        return units;
    }
    let vanish = |pt: &[Scalar]| quadrics.iter().all(|q| q.eval(pt).is_zero());
    let mut out: Vec<Vec<Scalar>> = Vec::new();
    let push = |pt: Vec<Scalar>, out: &mut Vec<Vec<Scalar>>| {
        if pt.iter().any(|c| !c.is_zero()) && vanish(&pt) && !out.contains(&pt) {
            out.push(pt);
        }
    };
    match r {
        1 => push(vec![int(1)], &mut out),
        2 => {
            push(vec![int(1), int(0)], &mut out);
            let uni: Vec<UniPoly> = quadrics
                .iter()
                .map(|q| UniPoly::from_polynomial(&dehomogenize(q, &[None, Some(int(1))]), 0).unwrap())
                .collect();
            for t in univariate_common_roots(&uni) {
                push(vec![t, int(1)], &mut out);
            }
        }
        3 => {
            push(vec![int(1), int(0), int(0)], &mut out);
            let uni: Vec<UniPoly> = quadrics
                .iter()
                .map(|q| UniPoly::from_polynomial(&dehomogenize(q, &[None, Some(int(1)), Some(int(0))]), 0).unwrap())
                .collect();
            for t in univariate_common_roots(&uni) {
                push(vec![t, int(1), int(0)], &mut out);
            }
            let plane: Vec<Polynomial> = quadrics
                .iter()
                .map(|q| dehomogenize(q, &[None, None, Some(int(1))]))
                .collect();
            for (a, b) in planar_common_roots(&plane) {
                push(vec![a, b, int(1)], &mut out);
            }
        }
        _ => {
            for u in units {
                push(u, &mut out);
            }
        }
    }
    out
}

/// Distinct nonzero quadrics `Pf_{ijkl}(Σ tₐ Kₐ)` over the support of the kernel.
fn plucker_quadrics(kernel: &[Vec<Scalar>], pairs: &[(usize, usize)], m: usize, tv: &Vars) -> Vec<Polynomial> {
    let r = kernel.len();
    let mats: Vec<Vec<Vec<Scalar>>> = kernel.iter().map(|k| to_matrix(k, pairs, m)).collect();
    let support: Vec<usize> = (0..m)
        .filter(|&i| mats.iter().any(|mat| mat[i].iter().any(|c| !c.is_zero())))
        .collect();
    let mut seen: HashSet<Polynomial> = HashSet::new();
    let mut out = Vec::new();
    let s = support.len();
    let ts: Vec<Polynomial> = (0..r).map(|a| Polynomial::var(tv, a)).collect();
    for a in 0..s {
        for b in a + 1..s {
            for c in b + 1..s {
                for d in c + 1..s {
                    let (i, j, k, l) = (support[a], support[b], support[c], support[d]);
                    let mut q = Polynomial::zero(tv);
                    for x in 0..r {
                        for y in 0..r {
                            let (mx, my) = (&mats[x], &mats[y]);
                            let coef = &mx[i][j] * &my[k][l] - &mx[i][k] * &my[j][l] + &mx[i][l] * &my[j][k];
                            if !coef.is_zero() {
                                q += &(&ts[x] * &ts[y]).scale(&coef);
                            }
                        }
                    }
                    if q.is_zero() {
                        continue;
                    }
                    let q = q.primitive();
                    if seen.insert(q.clone()) {
                        out.push(q);
                    }
                }
            }
        }
    }
    out
}

/// Substitutes fixed values for some variables; the remaining ones are renumbered
/// in order into a smaller variable list.
fn dehomogenize(q: &Polynomial, fixed: &[Option<Scalar>]) -> Polynomial {
    let free = fixed.iter().filter(|f| f.is_none()).count();
    let tv = Vars::new((1..=free).map(|i| format!("t{i}")));
    let mut k = 0;
    let images: Vec<Polynomial> = fixed
        .iter()
        .map(|f| match f {
            Some(c) => Polynomial::constant(&tv, c.clone()),
            None => {
                k += 1;
                Polynomial::var(&tv, k - 1)
            }
        })
        .collect();
    q.compose(&images)
}

fn univariate_common_roots(ps: &[UniPoly]) -> Vec<Scalar> {
    let nonzero: Vec<&UniPoly> = ps.iter().filter(|p| !p.is_zero()).collect();
    let Some(first) = nonzero.first() else {
        return vec![int(0), int(1), int(-1)];
    };
    let g = nonzero.iter().skip(1).fold((*first).clone(), |acc, p| acc.gcd(p));
    g.rational_roots()
}

/// Rational common zeros of polynomials in two variables. Isolated points are found
/// by elimination; a common curve is sampled along a few vertical lines.
fn planar_common_roots(ps: &[Polynomial]) -> Vec<(Scalar, Scalar)> {
    let nonzero: Vec<&Polynomial> = ps.iter().filter(|p| !p.is_zero()).collect();
    let Some(first) = nonzero.first() else {
        return vec![(int(0), int(0)), (int(1), int(0)), (int(0), int(1))];
    };
    let vars = first.vars().clone();
    let check = |a: &Scalar, b: &Scalar| nonzero.iter().all(|p| p.eval(&[a.clone(), b.clone()]).is_zero());
    let mut out: Vec<(Scalar, Scalar)> = Vec::new();
    let g = nonzero.iter().skip(1).fold((*first).clone(), |acc, p| gcd(&acc, p));
    if !g.is_constant() {
        for s in -2..=2 {
            let s = int(s);
            if g.involves(1) {
                let u = UniPoly::from_polynomial(
                    &g.compose(&[Polynomial::constant(&vars, s.clone()), Polynomial::var(&vars, 1)]),
                    1,
                )
                .unwrap();
                for t in u.rational_roots() {
                    out.push((s.clone(), t));
                }
            } else {
                let u = UniPoly::from_polynomial(&g, 0).unwrap();
                for t in u.rational_roots() {
                    out.push((t, s.clone()));
                }
            }
        }
    }
    let cofactors: Vec<Polynomial> = nonzero.iter().map(|p| p.div_exact(&g).unwrap()).collect();
    if cofactors.iter().any(Polynomial::is_constant) {
        out.retain(|(a, b)| check(a, b));
        return out;
    }
    let Some(pivot) = cofactors.iter().find(|h| h.involves(1)) else {
        // Cofactors in t1 alone have no common root, their gcd being constant.
        out.retain(|(a, b)| check(a, b));
        return out;
    };
    let mut xs: Vec<Scalar> = Vec::new();
    for seed in 1..6i64 {
        let mut comb = Polynomial::zero(&vars);
        for (k, h) in cofactors.iter().enumerate() {
            comb += &h.scale(&int((seed * (k as i64 + 3) * 7919) % 97 + 1));
        }
        let res = resultant(pivot, &comb, 1);
        if res.is_zero() {
            continue;
        }
        xs = UniPoly::from_polynomial(&res, 0).unwrap().rational_roots();
        break;
    }
    for a in xs {
        let uni: Vec<UniPoly> = cofactors
            .iter()
            .map(|h| {
                let hv = h.compose(&[Polynomial::constant(&vars, a.clone()), Polynomial::var(&vars, 1)]);
                UniPoly::from_polynomial(&hv, 1).unwrap()
            })
            .collect();
        for b in univariate_common_roots(&uni) {
            out.push((a.clone(), b));
        }
    }
    out.retain(|(a, b)| check(a, b));
    out.sort();
    out.dedup();
    out
}
