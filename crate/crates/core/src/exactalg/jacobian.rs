use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::linalg::Matrix;
use super::poly::Polynomial;
use super::ratfunc::RationalFunction;
use super::scalar::{int, Scalar};

const PROBE_SEED: u64 = 0x6a61_636f_6269;
const PROBES: usize = 3;

/// Rank over Q(X) of the Jacobian matrix of `fs`, which in characteristic zero is
/// the number of algebraically independent entries.
///
/// Random evaluation only ever underestimates the rank, so a full-rank sample is
/// conclusive; otherwise the exact fraction-free elimination decides.
pub fn jacobian_rank(fs: &[RationalFunction]) -> usize {
    let Some(first) = fs.first() else {
        return 0;
    };
    let n = first.nvars();
    let full = fs.len().min(n);
    let rows = derivative_rows(fs);
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    let mut best = 0;
    for _ in 0..PROBES {
        let point: Vec<Scalar> = (0..n).map(|_| int(rng.gen_range(-1_000_000..=1_000_000))).collect();
        // The derivative numerators share the row's denominator, so rank is unaffected
        // unless that denominator vanishes here.
        if fs.iter().any(|f| num_traits::Zero::is_zero(&f.den().eval(&point))) {
            continue;
        }
        let vals: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|p| p.eval(&point)).collect())
            .collect();
        best = best.max(Matrix::from_rows(n, &vals).rank());
        if best == full {
            return best;
        }
    }
    rank_exact(rows)
}

/// Exact rank, skipping the random-evaluation fast path.
pub fn jacobian_rank_exact(fs: &[RationalFunction]) -> usize {
    if fs.is_empty() {
        return 0;
    }
    rank_exact(derivative_rows(fs))
}

fn derivative_rows(fs: &[RationalFunction]) -> Vec<Vec<Polynomial>> {
    fs.iter()
        .map(|f| (0..f.nvars()).map(|i| f.derivative_numerator(i)).collect())
        .collect()
}

/// Fraction-free (Bareiss) elimination with column skipping. Every intermediate
/// entry is a minor of the original matrix, so the divisions are exact.
fn rank_exact(mut m: Vec<Vec<Polynomial>>) -> usize {
    let nrows = m.len();
    let ncols = m[0].len();
    let vars = m[0][0].vars().clone();
    let mut prev = Polynomial::one(&vars);
    let mut rank = 0;
    for c in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).min_by_key(|&r| {
            if m[r][c].is_zero() {
                usize::MAX
            } else {
                m[r][c].nterms()
            }
        }) else {
            break;
        };
        if m[p][c].is_zero() {
            continue;
        }
        m.swap(rank, p);
        for i in rank + 1..nrows {
            for j in c + 1..ncols {
                let t = &(&m[rank][c] * &m[i][j]) - &(&m[i][c] * &m[rank][j]);
                m[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][c] = Polynomial::zero(&vars);
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::Vars;

    fn xy() -> (RationalFunction, RationalFunction) {
        let v = Vars::new(["x", "y"]);
        (RationalFunction::var(&v, 0), RationalFunction::var(&v, 1))
    }

    #[test]
    fn rank_examples() {
        let (x, y) = xy();
        let d = x.sub(&y);
        assert_eq!(jacobian_rank(&[d.clone(), d.pow(2)]), 1);
        assert_eq!(jacobian_rank_exact(&[d.clone(), d.pow(2)]), 1);
        assert_eq!(jacobian_rank(&[x.clone(), y.clone()]), 2);
        let s = x.add(&y);
        let p = x.mul(&y);
        let q = x.pow(2).add(&y.pow(2));
        assert_eq!(jacobian_rank(&[s.clone(), p.clone(), q.clone()]), 2);
        assert_eq!(jacobian_rank_exact(&[s, p, q]), 2);
        assert_eq!(jacobian_rank(&[]), 0);
    }

    #[test]
    fn rational_entries() {
        let (x, y) = xy();
        let r = x.div(&y).unwrap();
        assert_eq!(jacobian_rank_exact(&[r.clone(), x.add(&y)]), 2);
        assert_eq!(jacobian_rank_exact(&[r.clone(), r.inv().unwrap()]), 1);
    }
}
