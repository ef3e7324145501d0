//! Bounded-degree search for invariant rational functions `f ∘ φ = f`.
//!
//! Three stages run in order. Polynomial invariants come from one linear system.
//! Rational invariants with a denominator drawn from a catalog (built from
//! factors of iterated coordinates) come from one linear system per candidate
//! denominator. A bilinear stage with both parts unknown catches the rest when
//! its linearized kernel is small enough to search exactly. The same stages also
//! run on factor systems, i.e. on variable subsets the map sends into themselves.

mod bilinear;
mod catalog;
mod linear;

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynsys::{degree_sequence, diagonal_power, validate_dominant, DegreeProfile, Dominance, DynamicalSystem};
use crate::error::{Error, Result};
use crate::exactalg::linalg::{mulmod, powmod, Crt, Matrix, ModRref, PrimeStream};
use crate::exactalg::{int, jacobian_rank, Monomial, Polynomial, RationalFunction, Scalar, Vars};

use bilinear::{bilinear_search, BilinearOutcome};
use linear::{fixed_denominator_solutions, ClearedMap};

/// Degree bounds of the search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    pub max_num_degree: u32,
    pub max_den_degree: u32,
    /// How many iterates contribute factors to the denominator catalog.
    pub denominator_catalog_depth: u32,
    /// Largest bilinear kernel searched exhaustively for decomposable points.
    pub nullspace_rank1_limit: u32,
}

impl SearchBudget {
    pub fn new(
        max_num_degree: u32,
        max_den_degree: u32,
        denominator_catalog_depth: u32,
        nullspace_rank1_limit: u32,
    ) -> Self {
        SearchBudget {
            max_num_degree,
            max_den_degree,
            denominator_catalog_depth,
            nullspace_rank1_limit,
        }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget::new(3, 3, 2, 3)
    }
}

/// What happened in the bilinear stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum BilinearStatus {
    NotRun,
    /// Every common degree up to the bound was searched; `kernel_dim` is the
    /// largest linearized kernel met.
    Completed {
        kernel_dim: usize,
    },
    /// At some common degree the linearized kernel exceeded the extraction limit.
    /// Solutions from the other degrees are still reported.
    Inconclusive,
}

/// Invariants found within a budget, deduplicated, with the bilinear stage status.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub invariants: Vec<RationalFunction>,
    /// Every emitted candidate passed the exact check `f ∘ φ = f`.
    pub verified: bool,
    pub bilinear: BilinearStatus,
}

#[derive(Clone, Debug)]
pub struct InvariantReport {
    pub system: DynamicalSystem,
    pub budget: SearchBudget,
    pub invariants: Vec<RationalFunction>,
    pub independence_rank: usize,
    pub verified: bool,
    /// A maximal independent subset, chosen greedily in discovery order.
    pub reduction_generators: Vec<RationalFunction>,
    pub bilinear: BilinearStatus,
}

#[derive(Clone, Debug)]
pub struct CorollaryBReport {
    pub base_rank: usize,
    pub square_rank: usize,
    pub pullback_rank: usize,
    pub new_invariant_found: bool,
    pub witness: Option<RationalFunction>,
    /// Invariants found directly on the square.
    pub square_invariants: Vec<RationalFunction>,
    /// Degree growth of the base system, attached when a new invariant appears.
    pub degree_profile: Option<DegreeProfile>,
    pub base: InvariantReport,
}

fn require_dominant(sys: &DynamicalSystem) -> Result<()> {
    match validate_dominant(sys, 3)? {
        Dominance::Dominant => Ok(()),
        _ => Err(Error::Precondition("the system is not dominant".into())),
    }
}

/// Basis of the polynomial invariants of degree at most `d`, in reduced echelon
/// form under graded-lex: each element is monic at its leading monomial, no leading
/// monomial occurs in another element, and elements are sorted by leading monomial.
/// The constant 1 always comes first.
pub fn polynomial_invariant_basis(sys: &DynamicalSystem, d: u32) -> Result<Vec<Polynomial>> {
    require_dominant(sys)?;
    let map = ClearedMap::new(sys);
    Ok(polynomial_basis(&map, d))
}

fn polynomial_basis(map: &ClearedMap, d: u32) -> Vec<Polynomial> {
    let monos = Monomial::all_up_to(map.n(), d);
    let t = map.homogenized_monomials(&monos, d);
    fixed_denominator_solutions(map, &monos, &t, d, &Polynomial::one(&map.vars))
}

/// Exact invariants found within the budget.
pub fn rational_invariant_search(sys: &DynamicalSystem, budget: &SearchBudget) -> Result<Vec<RationalFunction>> {
    Ok(search_invariants(sys, budget)?.invariants)
}

/// Runs the staged search on the system and on each factor system given by a
/// closed set of variables; invariants of a factor pull back to the whole system.
/// The bilinear status is that of the whole system.
pub fn search_invariants(sys: &DynamicalSystem, budget: &SearchBudget) -> Result<SearchOutcome> {
    require_dominant(sys)?;
    let (mut candidates, bilinear) = staged_candidates(sys, budget)?;
    for subset in closed_subsets(sys) {
        let factor = restrict(sys, &subset)?;
        let (found, _) = staged_candidates(&factor, budget)?;
        candidates.extend(found.iter().map(|f| f.embed(sys.vars(), &subset)));
    }

    let mut verified = true;
    let mut sound = Vec::with_capacity(candidates.len());
    for f in candidates {
        if sys.pullback(&f)? == f {
            sound.push(f);
        } else {
            verified = false;
        }
    }
    let invariants = dedupe(sys.vars(), sound, budget.max_num_degree.max(budget.max_den_degree));
    Ok(SearchOutcome {
        invariants,
        verified,
        bilinear,
    })
}

/// Most factor systems searched besides the whole system.
const MAX_FACTORS: usize = 16;

/// Proper variable subsets closed under "coordinate `i` involves variable `j`",
/// generated as closures of single variables and of pairs, smallest first.
fn closed_subsets(sys: &DynamicalSystem) -> Vec<Vec<usize>> {
    let n = sys.dim();
    let deps: Vec<Vec<usize>> = sys
        .coords()
        .iter()
        .map(|c| (0..n).filter(|&j| c.num().involves(j) || c.den().involves(j)).collect())
        .collect();
    let closure = |seed: &[usize]| -> Vec<usize> {
        let mut inside = vec![false; n];
        let mut stack = seed.to_vec();
        while let Some(i) = stack.pop() {
            if !inside[i] {
                inside[i] = true;
                stack.extend(&deps[i]);
            }
        }
        (0..n).filter(|&i| inside[i]).collect()
    };
    let mut out: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        for j in i..n {
            let c = closure(&[i, j]);
            if c.len() < n && !out.contains(&c) {
                out.push(c);
            }
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out.truncate(MAX_FACTORS);
    out
}

/// The factor system on a closed subset of the variables.
fn restrict(sys: &DynamicalSystem, subset: &[usize]) -> Result<DynamicalSystem> {
    let vars = Vars::new(subset.iter().map(|&i| sys.vars().name(i)));
    let mut back = vec![0; sys.dim()];
    for (k, &i) in subset.iter().enumerate() {
        back[i] = k;
    }
    let coords = subset.iter().map(|&i| sys.coords()[i].embed(&vars, &back)).collect();
    DynamicalSystem::new(vars, coords)
}

/// Unverified candidates from the polynomial, fixed-denominator and bilinear stages.
fn staged_candidates(sys: &DynamicalSystem, budget: &SearchBudget) -> Result<(Vec<RationalFunction>, BilinearStatus)> {
    let map = ClearedMap::new(sys);
    let dn = budget.max_num_degree;
    let mut candidates: Vec<RationalFunction> = polynomial_basis(&map, dn)
        .into_iter()
        .filter(|p| !p.is_constant())
        .map(RationalFunction::from_poly)
        .collect();

    let catalog = catalog::denominator_catalog(sys, budget.denominator_catalog_depth, budget.max_den_degree)?;
    if !catalog.is_empty() {
        let monos = Monomial::all_up_to(map.n(), dn);
        let t = map.homogenized_monomials(&monos, dn);
        let per_q: Vec<Vec<RationalFunction>> = catalog
            .par_iter()
            .map(|q| {
                fixed_denominator_solutions(&map, &monos, &t, dn, q)
                    .into_iter()
                    .filter_map(|p| RationalFunction::new(p, q.clone()).ok())
                    .filter(|f| !f.is_constant())
                    .collect()
            })
            .collect();
        candidates.extend(per_q.into_iter().flatten());
    }

    // Every common degree is tried on its own: a solution of low degree multiplied
    // through by an arbitrary form inflates the kernel at higher degrees, so the
    // top level alone may be inconclusive where a lower one is not.
    let d2 = dn.max(budget.max_den_degree);
    let mut bilinear = BilinearStatus::NotRun;
    if budget.nullspace_rank1_limit >= 1 {
        for d in 1..=d2 {
            match bilinear_search(&map, d, budget.nullspace_rank1_limit as usize) {
                BilinearOutcome::Solved {
                    kernel_dim,
                    candidates: found,
                } => {
                    candidates.extend(found);
                    bilinear = match bilinear {
                        BilinearStatus::NotRun => BilinearStatus::Completed { kernel_dim },
                        BilinearStatus::Completed { kernel_dim: k } => BilinearStatus::Completed {
                            kernel_dim: k.max(kernel_dim),
                        },
                        BilinearStatus::Inconclusive => BilinearStatus::Inconclusive,
                    };
                }
                BilinearOutcome::TooLarge => bilinear = BilinearStatus::Inconclusive,
            }
        }
    }

    Ok((candidates, bilinear))
}

/// Keeps `f` when it raises the Jacobian rank, or when it is not of the form
/// `A(g)/B(g)` with `A`, `B` polynomials of degree ≤ `bound` in the invariants `g`
/// kept so far.
fn dedupe(vars: &Vars, candidates: Vec<RationalFunction>, bound: u32) -> Vec<RationalFunction> {
    let mut kept: Vec<RationalFunction> = Vec::new();
    let mut gens: Vec<RationalFunction> = Vec::new();
    let mut seen: HashSet<RationalFunction> = HashSet::new();
    for f in candidates {
        if !seen.insert(f.clone()) {
            continue;
        }
        let mut trial = gens.clone();
        trial.push(f.clone());
        if jacobian_rank(&trial) > gens.len() {
            gens = trial;
            kept.push(f);
            continue;
        }
        let pool = if ansatz_size(kept.len(), bound) <= ANSATZ_CAP {
            &kept
        } else {
            &gens
        };
        if !is_rational_expression(vars, pool, &f, bound) {
            kept.push(f);
        }
    }
    kept
}

/// Upper limit on `2·C(k + bound, bound)` unknowns in the expressibility ansatz.
const ANSATZ_CAP: usize = 400;

fn ansatz_size(k: usize, bound: u32) -> usize {
    let mut c: usize = 1;
    for i in 1..=bound as usize {
        c = c.saturating_mul(k + i) / i;
    }
    c.saturating_mul(2)
}

/// Whether `f = A(g)/B(g)` for polynomials `A`, `B` of degree ≤ `bound`. The
/// coefficients are interpolated from values at random points and the identity
/// `f·B(g) = A(g)` is then checked exactly, so a `true` is certain.
fn is_rational_expression(vars: &Vars, gs: &[RationalFunction], f: &RationalFunction, bound: u32) -> bool {
    if gs.is_empty() {
        return f.is_constant();
    }
    let monos = Monomial::all_up_to(gs.len(), bound);
    let m = monos.len();
    if 2 * m > 2 * ANSATZ_CAP {
        return false;
    }
    let ring = |coeffs: &[Scalar]| -> RationalFunction {
        let mut acc = RationalFunction::zero(vars);
        for (u, c) in monos.iter().zip(coeffs) {
            if !num_traits::Zero::is_zero(c) {
                let mut t = RationalFunction::constant(vars, c.clone());
                for (g, &e) in gs.iter().zip(u.exponents()) {
                    if e > 0 {
                        t = t.mul(&g.pow(e));
                    }
                }
                acc = acc.add(&t);
            }
        }
        acc
    };
    let certify = |v: &[Scalar]| -> Option<bool> {
        if v[m..].iter().all(num_traits::Zero::is_zero) {
            return None;
        }
        let b = ring(&v[m..]);
        if b.is_zero() {
            return None;
        }
        Some(f.mul(&b) == ring(&v[..m]))
    };
    match modular_ansatz(gs, f, &monos) {
        ModularAnsatz::NoSolution => false,
        ModularAnsatz::Lifted(v) if certify(&v) == Some(true) => true,
        _ => exact_ansatz(vars.len(), gs, f, &monos)
            .iter()
            .find_map(|v| certify(v))
            .unwrap_or(false),
    }
}

enum ModularAnsatz {
    /// No kernel vector with a nonzero denominator part modulo a large prime.
    NoSolution,
    /// Rationally reconstructed candidate coefficients, still to be certified.
    Lifted(Vec<Scalar>),
    Undecided,
}

/// The ansatz solved modulo a few large primes. A reduction can only enlarge the
/// kernel at good primes, so `NoSolution` is reliable up to an unlucky sample.
fn modular_ansatz(gs: &[RationalFunction], f: &RationalFunction, monos: &[Monomial]) -> ModularAnsatz {
    let m = monos.len();
    let ncols = 2 * m;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ea7);
    let mut crt: Option<(Crt, usize)> = None;
    for p in PrimeStream::new().take(4) {
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(ncols + 4);
        let mut attempts = 0;
        while rows.len() < ncols + 4 && attempts < 4 * (ncols + 4) {
            attempts += 1;
            let pt: Vec<u64> = (0..f.nvars()).map(|_| rng.gen_range(0..p)).collect();
            let Some(gv) = gs.iter().map(|g| eval_rf_mod(g, &pt, p)).collect::<Option<Vec<_>>>() else {
                continue;
            };
            let Some(fv) = eval_rf_mod(f, &pt, p) else {
                continue;
            };
            let neg_f = (p - fv) % p;
            let vals: Vec<u64> = monos
                .iter()
                .map(|u| {
                    u.exponents()
                        .iter()
                        .zip(&gv)
                        .fold(1, |acc, (&e, &x)| mulmod(acc, powmod(x, e as u64, p), p))
                })
                .collect();
            let mut row = vals.clone();
            row.extend(vals.iter().map(|&v| mulmod(v, neg_f, p)));
            rows.push(row);
        }
        if rows.len() < ncols + 4 {
            return ModularAnsatz::Undecided;
        }
        let red = ModRref::from_residues(rows, ncols, p);
        let Some(j) = red.basis.iter().position(|v| v[m..].iter().any(|&x| x != 0)) else {
            return ModularAnsatz::NoSolution;
        };
        match &mut crt {
            Some((c, k)) if c.free == red.free && *k == j => c.absorb(&red, p),
            _ => crt = Some((Crt::start(&red, p), j)),
        }
        let (c, k) = crt.as_ref().expect("set above");
        if let Some(basis) = c.reconstruct() {
            return ModularAnsatz::Lifted(basis[*k].clone());
        }
    }
    ModularAnsatz::Undecided
}

fn eval_rf_mod(f: &RationalFunction, pt: &[u64], p: u64) -> Option<u64> {
    let d = f.den().eval_mod(pt, p)?;
    if d == 0 {
        return None;
    }
    Some(mulmod(f.num().eval_mod(pt, p)?, powmod(d, p - 2, p), p))
}

/// Kernel of the ansatz over Q from integer sample points.
fn exact_ansatz(nvars: usize, gs: &[RationalFunction], f: &RationalFunction, monos: &[Monomial]) -> Vec<Vec<Scalar>> {
    let ncols = 2 * monos.len();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ea7);
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut attempts = 0;
    while rows.len() < ncols + 4 && attempts < 20 * (ncols + 4) {
        attempts += 1;
        let pt: Vec<Scalar> = (0..nvars).map(|_| int(rng.gen_range(-1000..=1000))).collect();
        let Some(gv) = gs.iter().map(|g| g.eval(&pt)).collect::<Option<Vec<_>>>() else {
            continue;
        };
        let Some(fv) = f.eval(&pt) else {
            continue;
        };
        let vals: Vec<Scalar> = monos.iter().map(|u| eval_monomial(u, &gv)).collect();
        // Columns: coefficients of A, then of B; the row encodes A(g) − f·B(g).
        let mut row = vals.clone();
        row.extend(vals.iter().map(|v| -(v * &fv)));
        rows.push(row);
    }
    Matrix::from_rows(ncols, &rows).kernel()
}

fn eval_monomial(u: &Monomial, vals: &[Scalar]) -> Scalar {
    let mut acc = int(1);
    for (v, &e) in vals.iter().zip(u.exponents()) {
        if e > 0 {
            acc *= num_traits::pow(v.clone(), e as usize);
        }
    }
    acc
}

/// Number of algebraically independent functions among `fs`.
pub fn independence_rank(fs: &[RationalFunction]) -> usize {
    jacobian_rank(fs)
}

fn greedy_generators(fs: &[RationalFunction]) -> Vec<RationalFunction> {
    let mut gens: Vec<RationalFunction> = Vec::new();
    for f in fs {
        let mut trial = gens.clone();
        trial.push(f.clone());
        if jacobian_rank(&trial) > gens.len() {
            gens = trial;
        }
    }
    gens
}

pub fn adim_lower_bound(sys: &DynamicalSystem, budget: &SearchBudget) -> Result<InvariantReport> {
    let outcome = search_invariants(sys, budget)?;
    let reduction_generators = greedy_generators(&outcome.invariants);
    Ok(InvariantReport {
        system: sys.clone(),
        budget: *budget,
        independence_rank: reduction_generators.len(),
        invariants: outcome.invariants,
        verified: outcome.verified,
        reduction_generators,
        bilinear: outcome.bilinear,
    })
}

/// Default window for the degree profile attached to a positive gain.
const PROFILE_WINDOW: usize = 6;

/// Compares the invariants of `(X², φ×φ)` with the pullbacks `g⊗1, 1⊗g` of the
/// invariants of `(X, φ)` found within the same budget.
pub fn corollary_b_check(sys: &DynamicalSystem, budget: &SearchBudget) -> Result<CorollaryBReport> {
    let base = adim_lower_bound(sys, budget)?;
    let square = diagonal_power(sys, 2)?;
    let sq_vars = square.vars().clone();
    let n = sys.dim();
    let pullbacks: Vec<RationalFunction> = base
        .invariants
        .iter()
        .flat_map(|g| {
            [
                g.embed(&sq_vars, &(0..n).collect::<Vec<_>>()),
                g.embed(&sq_vars, &(n..2 * n).collect::<Vec<_>>()),
            ]
        })
        .collect();
    let pullback_rank = jacobian_rank(&pullbacks);
    let found = search_invariants(&square, budget)?;
    let mut all = greedy_generators(&pullbacks);
    let mut witness = None;
    for f in &found.invariants {
        let mut trial = all.clone();
        trial.push(f.clone());
        if jacobian_rank(&trial) > all.len() {
            if witness.is_none() {
                witness = Some(f.clone());
            }
            all = trial;
        }
    }
    let square_rank = all.len();
    let new_invariant_found = square_rank > pullback_rank;
    let degree_profile = if new_invariant_found {
        Some(degree_sequence(sys, PROFILE_WINDOW)?)
    } else {
        None
    };
    Ok(CorollaryBReport {
        base_rank: base.independence_rank,
        square_rank,
        pullback_rank,
        new_invariant_found,
        witness,
        square_invariants: found.invariants,
        degree_profile,
        base,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(names: &[&str], build: impl Fn(&[RationalFunction], &Vars) -> Vec<RationalFunction>) -> DynamicalSystem {
        let v = Vars::new(names.iter().copied());
        let xs: Vec<RationalFunction> = (0..names.len()).map(|i| RationalFunction::var(&v, i)).collect();
        DynamicalSystem::new(v.clone(), build(&xs, &v)).unwrap()
    }

    fn shown<T: ToString>(xs: &[T]) -> Vec<String> {
        xs.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn polynomial_basis_examples() {
        let shift = sys(&["x", "y"], |x, v| {
            let one = RationalFunction::one(v);
            vec![x[0].add(&one), x[1].add(&one)]
        });
        assert_eq!(shown(&polynomial_invariant_basis(&shift, 1).unwrap()), ["1", "x - y"]);
        let id = sys(&["x", "y"], |x, _| x.to_vec());
        assert_eq!(polynomial_invariant_basis(&id, 2).unwrap().len(), 6);
        let dbl = sys(&["x", "y"], |x, _| x.iter().map(|c| c.scale(&int(2))).collect());
        assert_eq!(shown(&polynomial_invariant_basis(&dbl, 2).unwrap()), ["1"]);
    }

    #[test]
    fn rational_search_examples() {
        let dbl = sys(&["x", "y"], |x, _| x.iter().map(|c| c.scale(&int(2))).collect());
        let found = rational_invariant_search(&dbl, &SearchBudget::new(1, 1, 2, 3)).unwrap();
        assert_eq!(shown(&found), ["x/y"]);
        let shift = sys(&["x", "y"], |x, v| {
            let one = RationalFunction::one(v);
            vec![x[0].add(&one), x[1].add(&one)]
        });
        assert_eq!(
            shown(&rational_invariant_search(&shift, &SearchBudget::new(1, 1, 2, 3)).unwrap()),
            ["x - y"]
        );
    }

    #[test]
    fn independence_examples() {
        let v = Vars::new(["x", "y"]);
        let (x, y) = (RationalFunction::var(&v, 0), RationalFunction::var(&v, 1));
        let d = x.sub(&y);
        assert_eq!(
            independence_rank(&[d.clone(), d.pow(3).add(&RationalFunction::one(&v))]),
            1
        );
        assert_eq!(independence_rank(&[x.div(&y).unwrap(), x.add(&y)]), 2);
        assert_eq!(independence_rank(&[]), 0);
    }

    #[test]
    fn adim_examples() {
        let shift = sys(&["x"], |x, v| vec![x[0].add(&RationalFunction::one(v))]);
        assert_eq!(
            adim_lower_bound(&shift, &SearchBudget::default())
                .unwrap()
                .independence_rank,
            0
        );
        let id = sys(&["x", "y"], |x, _| x.to_vec());
        let r = adim_lower_bound(&id, &SearchBudget::new(1, 1, 2, 3)).unwrap();
        assert_eq!(r.independence_rank, 2);
        assert_eq!(shown(&r.reduction_generators), ["y", "x"]);
        let dbl = sys(&["x", "y"], |x, _| x.iter().map(|c| c.scale(&int(2))).collect());
        let r = adim_lower_bound(&dbl, &SearchBudget::new(1, 1, 2, 3)).unwrap();
        assert_eq!(r.independence_rank, 1);
        assert_eq!(shown(&r.reduction_generators), ["x/y"]);
    }

    #[test]
    fn square_check_examples() {
        let shift = sys(&["x"], |x, v| vec![x[0].add(&RationalFunction::one(v))]);
        let r = corollary_b_check(&shift, &SearchBudget::default()).unwrap();
        assert_eq!((r.base_rank, r.pullback_rank), (0, 0));
        assert!(r.square_rank >= 1 && r.new_invariant_found);
        assert_eq!(r.witness.unwrap().to_string(), "x1 - x2");
        assert!(r.degree_profile.is_some());

        let id = sys(&["x"], |x, _| x.to_vec());
        let r = corollary_b_check(&id, &SearchBudget::default()).unwrap();
        assert_eq!((r.base_rank, r.square_rank, r.pullback_rank), (1, 2, 2));
        assert!(!r.new_invariant_found && r.witness.is_none());
    }

    #[test]
    fn closed_subsets_follow_dependencies() {
        let henon = sys(&["x", "y"], |x, v| {
            vec![x[1].clone(), x[1].pow(2).sub(&x[0]).add(&RationalFunction::one(v))]
        });
        assert!(closed_subsets(&henon).is_empty());
        let tri = sys(&["x", "y", "z"], |x, _| {
            vec![x[0].clone(), x[0].add(&x[1]), x[2].scale(&int(3))]
        });
        assert_eq!(closed_subsets(&tri), vec![vec![0], vec![2], vec![0, 1], vec![0, 2]]);
        let f = restrict(&tri, &[0, 1]).unwrap();
        assert_eq!(shown(f.coords()), ["x", "x + y"]);
    }

    #[test]
    fn invariants_of_a_factor_are_found() {
        // The Möbius factor pairs with itself on the square; the whole system's
        // bilinear kernel is too large to search.
        let mob = sys(&["x", "y"], |x, v| {
            let one = RationalFunction::one(v);
            let num = x[0].scale(&int(2)).add(&RationalFunction::constant(v, int(3)));
            vec![num.div(&x[0].add(&one)).unwrap(), x[1].scale(&int(5))]
        });
        let r = corollary_b_check(&mob, &SearchBudget::default()).unwrap();
        assert_eq!((r.base_rank, r.square_rank), (0, 2));
        let sq = diagonal_power(&mob, 2).unwrap();
        let only_x =
            |f: &RationalFunction| (0..4).all(|i| i % 2 == 0 || (!f.num().involves(i) && !f.den().involves(i)));
        assert!(r
            .square_invariants
            .iter()
            .any(|f| only_x(f) && sq.pullback(f).unwrap() == *f));
    }

    #[test]
    fn dedupe_drops_functions_of_earlier_invariants() {
        let v = Vars::new(["x", "y"]);
        let (x, y) = (RationalFunction::var(&v, 0), RationalFunction::var(&v, 1));
        let f = x.div(&y).unwrap();
        let g = f.inv().unwrap().add(&f.pow(2)).scale(&int(3));
        let h = x.sub(&y);
        let out = dedupe(&v, vec![f.clone(), g, h.clone(), f.clone()], 3);
        assert_eq!(out, vec![f, h]);
    }
}
