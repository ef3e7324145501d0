//! Candidate denominators for the linear rational stage.
//!
//! Denominators of invariants are built from polynomials that the dynamics maps
//! to multiples of themselves, and those show up among the factors of iterated
//! denominators and numerators. Factors are split as far as cheap tools allow
//! (monomial content, content in each variable, rational roots of univariate
//! pieces) and then refined into a pairwise coprime basis.

use std::cmp::Ordering;

use crate::dynsys::{DynamicalSystem, IterateCache};
use crate::error::Result;
use crate::exactalg::univariate::UniPoly;
use crate::exactalg::{content_in, gcd, int, squarefree_part, Monomial, Polynomial, Scalar};

/// `{1}` is not included; every entry has degree between 1 and `max_degree`.
pub(crate) fn denominator_catalog(sys: &DynamicalSystem, depth: u32, max_degree: u32) -> Result<Vec<Polynomial>> {
    if max_degree == 0 {
        return Ok(Vec::new());
    }
    let mut sources = vec![sys.common_denominator().0];
    let mut cache = IterateCache::new(sys);
    for k in 1..=depth as u64 {
        let it = cache.get(k)?;
        for c in it.coords() {
            sources.push(c.num().clone());
            sources.push(c.den().clone());
        }
    }
    let mut pieces = Vec::new();
    for s in &sources {
        if !s.is_zero() && !s.is_constant() {
            pieces.extend(split_factors(&squarefree_part(s)));
        }
    }
    let basis: Vec<Polynomial> = coprime_basis(pieces)
        .into_iter()
        .filter(|b| b.degree() <= max_degree)
        .collect();
    let mut out = Vec::new();
    products(&basis, 0, Polynomial::one(sys.vars()), max_degree, &mut out);
    out.retain(|p| !p.is_one());
    out.sort_by(catalog_order);
    out.dedup();
    Ok(out)
}

/// Lower degree first, then by the graded-lex term sequence from the leading term down.
pub(crate) fn catalog_order(a: &Polynomial, b: &Polynomial) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| {
        let ta = a.terms().rev();
        let tb = b.terms().rev();
        for ((ma, ca), (mb, cb)) in ta.zip(tb) {
            let o = ma.cmp(mb).then_with(|| ca.cmp(cb));
            if o != Ordering::Equal {
                return o;
            }
        }
        a.nterms().cmp(&b.nterms())
    })
}

fn products(basis: &[Polynomial], from: usize, acc: Polynomial, left: u32, out: &mut Vec<Polynomial>) {
    out.push(acc.clone());
    for (i, b) in basis.iter().enumerate().skip(from) {
        if b.degree() <= left {
            products(basis, i, &acc * b, left - b.degree(), out);
        }
    }
}

/// Splits a squarefree polynomial into (not necessarily irreducible) primitive factors.
pub(crate) fn split_factors(p: &Polynomial) -> Vec<Polynomial> {
    let mut out = Vec::new();
    split_into(p, &mut out);
    out
}

fn split_into(p: &Polynomial, out: &mut Vec<Polynomial>) {
    if p.is_constant() {
        return;
    }
    let n = p.nvars();
    let mc = p.monomial_content();
    let mut rest = p.primitive();
    if !mc.is_one() {
        for (i, &e) in mc.exponents().iter().enumerate() {
            if e > 0 {
                out.push(Polynomial::var(p.vars(), i));
            }
        }
        rest = rest.div_exact(&Polynomial::monomial(p.vars(), mc, int(1))).unwrap();
    }
    if rest.is_constant() {
        return;
    }
    for v in 0..n {
        if !rest.involves(v) {
            continue;
        }
        let c = content_in(&rest, v);
        if !c.is_constant() {
            let cof = rest.div_exact(&c).expect("content divides");
            split_into(&c, out);
            split_into(&cof, out);
            return;
        }
    }
    let involved: Vec<usize> = (0..n).filter(|&v| rest.involves(v)).collect();
    if let [v] = involved[..] {
        let u = UniPoly::from_polynomial(&rest, v).expect("univariate");
        let mut cof = rest.clone();
        for r in u.rational_roots() {
            // Primitive form of x_v − r.
            let lin = Polynomial::from_terms(
                p.vars(),
                [
                    (Monomial::var(n, v), Scalar::from_integer(r.denom().clone())),
                    (Monomial::one(n), -Scalar::from_integer(r.numer().clone())),
                ],
            );
            cof = cof.div_exact(&lin).expect("root gives a factor");
            out.push(lin.primitive());
        }
        if !cof.is_constant() {
            out.push(cof.primitive());
        }
        return;
    }
    out.push(rest);
}

/// Pairwise coprime primitive polynomials whose products recover every input
/// up to constants.
pub(crate) fn coprime_basis(items: Vec<Polynomial>) -> Vec<Polynomial> {
    let mut basis: Vec<Polynomial> = Vec::new();
    let mut queue: Vec<Polynomial> = items.into_iter().map(|p| p.primitive()).collect();
    while let Some(f) = queue.pop() {
        if f.is_constant() {
            continue;
        }
        let mut hit = None;
        for (i, b) in basis.iter().enumerate() {
            let g = gcd(&f, b);
            if !g.is_constant() {
                hit = Some((i, g));
                break;
            }
        }
        match hit {
            None => basis.push(f),
            Some((i, g)) => {
                let b = basis.swap_remove(i);
                queue.push(b.div_exact(&g).unwrap().primitive());
                queue.push(f.div_exact(&g).unwrap().primitive());
                queue.push(g.primitive());
            }
        }
    }
    basis.sort_by(catalog_order);
    basis.dedup();
    basis
}
