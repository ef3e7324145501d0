use proptest::prelude::*;

use ratdyn_core::dynsys::DynamicalSystem;
use ratdyn_core::exactalg::linalg::Matrix;
use ratdyn_core::exactalg::{int, Monomial, Polynomial, RationalFunction, Scalar, Vars};
use ratdyn_core::translation::{
    determinant_i64, monomial_invariant_lattice, normalize_leading_sequence, ExponentMatrix, FieldPoly,
};

fn monomial_map(entries: &[Vec<i64>]) -> DynamicalSystem {
    let names = ["x", "y", "z"];
    let vars = Vars::new(names[..entries.len()].iter().copied());
    let coords = entries
        .iter()
        .map(|row| {
            let m = Monomial::from_exponents(&row.iter().map(|&e| e as u32).collect::<Vec<_>>());
            RationalFunction::from_poly(Polynomial::monomial(&vars, m, int(1)))
        })
        .collect();
    DynamicalSystem::new(vars, coords).unwrap()
}

fn exponent_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (2usize..=3).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(0i64..=2, n), n))
}

/// Four Q-linearly independent elements of Q(s).
fn pool(field: &Vars) -> Vec<RationalFunction> {
    let s = |k: u32| Polynomial::monomial(field, Monomial::from_exponents(&[k]), int(1));
    vec![
        RationalFunction::from_poly(s(0)),
        RationalFunction::from_poly(s(1)),
        RationalFunction::from_poly(s(2)),
        RationalFunction::new(s(0), &s(1) + &s(0)).unwrap(),
    ]
}

#[derive(Clone, Debug)]
struct Member {
    degree: usize,
    lead: usize,
    lead_scale: i64,
    lower: Vec<(usize, i64)>,
}

fn member() -> impl Strategy<Value = Member> {
    (
        0usize..=3,
        0usize..4,
        prop_oneof![-3i64..=-1, 1i64..=3],
        prop::collection::vec((0usize..4, -3i64..=3), 3),
    )
        .prop_map(|(degree, lead, lead_scale, lower)| Member {
            degree,
            lead,
            lead_scale,
            lower,
        })
}

fn build(field: &Vars, m: &Member) -> FieldPoly {
    let pool = pool(field);
    let mut coeffs: Vec<RationalFunction> = m.lower[..m.degree]
        .iter()
        .map(|&(k, c)| pool[k].scale(&int(c)))
        .collect();
    coeffs.push(pool[m.lead].scale(&int(m.lead_scale)));
    FieldPoly::new(field, coeffs).unwrap()
}

fn combine(field: &Vars, coeffs: &[Scalar], polys: &[FieldPoly]) -> FieldPoly {
    let terms: Vec<(Scalar, &FieldPoly)> = coeffs.iter().cloned().zip(polys).collect();
    FieldPoly::combination(field, &terms)
}

fn identity(s: usize) -> Vec<Vec<Scalar>> {
    (0..s)
        .map(|i| (0..s).map(|j| int(i64::from(i == j))).collect())
        .collect()
}

fn mat_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    (0..a.len())
        .map(|i| {
            (0..b[0].len())
                .map(|j| (0..b.len()).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn lattice_matches_pullback_oracle(entries in exponent_matrix()) {
        let a = ExponentMatrix::new(entries.clone()).unwrap();
        prop_assume!(determinant_i64(&a).unwrap_or(0) != 0);
        let sys = monomial_map(&entries);
        let lattice = monomial_invariant_lattice(&a, 4).unwrap();
        for m in Monomial::all_up_to(entries.len(), 4) {
            let f = RationalFunction::from_poly(Polynomial::monomial(sys.vars(), m.clone(), int(1)));
            let invariant = sys.pullback(&f).unwrap() == f;
            prop_assert_eq!(invariant, lattice.contains(&m), "monomial {:?}", m);
        }
    }

    #[test]
    fn normalization_preserves_span_and_separates_leads(
        members in prop::collection::vec(member(), 1..=4),
        mix in prop::collection::vec(-2i64..=2, 16),
    ) {
        let field = Vars::new(["s"]);
        let s = members.len();
        // Already normal: distinct pool leads within each degree.
        let mut keys: Vec<(usize, usize)> = members.iter().map(|m| (m.degree, m.lead)).collect();
        keys.sort_unstable();
        keys.dedup();
        prop_assume!(keys.len() == s);
        let b: Vec<FieldPoly> = members.iter().map(|m| build(&field, m)).collect();
        let mix: Vec<Vec<Scalar>> = (0..s).map(|i| (0..s).map(|j| int(mix[i * 4 + j])).collect()).collect();
        prop_assume!(Matrix::from_rows(s, &mix).rank() == s);
        let inputs: Vec<FieldPoly> = mix.iter().map(|row| combine(&field, row, &b)).collect();
        let probes: Vec<Vec<Scalar>> = [3, 8, 21].iter().map(|&v| vec![int(v)]).collect();

        let out = normalize_leading_sequence(&inputs, &probes).unwrap();
        let id = identity(s);
        prop_assert_eq!(mat_mul(&out.transition, &out.inverse), id.clone());
        prop_assert_eq!(mat_mul(&out.inverse, &out.transition), id);
        for i in 0..s {
            prop_assert_eq!(&combine(&field, &out.transition[i], &inputs), &out.polys[i]);
            prop_assert_eq!(&combine(&field, &out.inverse[i], &out.polys), &inputs[i]);
        }
        // Every leading coefficient lies in the span of the pool, whose elements
        // times (s + 1) have degree at most 3, so seven points decide independence.
        let points: Vec<Vec<Scalar>> = [2, 3, 5, 7, 11, 13, 17].iter().map(|&v| vec![int(v)]).collect();
        for d in 0..=3 {
            let block: Vec<&RationalFunction> =
                out.polys.iter().filter(|p| p.degree() == Some(d)).map(|p| p.leading_coeff().unwrap()).collect();
            if block.is_empty() {
                continue;
            }
            let rows: Vec<Vec<Scalar>> =
                block.iter().map(|c| points.iter().map(|pt| c.eval(pt).unwrap()).collect()).collect();
            prop_assert_eq!(Matrix::from_rows(points.len(), &rows).rank(), block.len(), "degree {}", d);
        }
    }
}
