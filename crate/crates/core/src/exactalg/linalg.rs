//! Exact kernels of rational matrices.
//!
//! Kernels are returned as the reduced-row-echelon basis: one vector per free
//! column, with a one in that column and zeros in every other free column. A
//! multi-modular pass reconstructs that basis and certifies it by exact integer
//! multiplication; Gauss-Jordan elimination over Q is the fallback.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::scalar::{denominator_lcm, Scalar};

/// Row-major matrix over Q with an explicit column count (rows may be absent).
#[derive(Clone, Debug)]
pub struct Matrix {
    ncols: usize,
    rows: Vec<Vec<BigInt>>,
}

impl Matrix {
    pub fn new(ncols: usize) -> Self {
        Matrix {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// Appends a row; it is scaled to integers, which leaves the kernel unchanged.
    pub fn push_row(&mut self, row: &[Scalar]) {
        assert_eq!(row.len(), self.ncols);
        if row.iter().all(Zero::is_zero) {
            return;
        }
        let l = denominator_lcm(row.iter());
        let ints = row
            .iter()
            .map(|c| (c * Scalar::from_integer(l.clone())).to_integer())
            .collect();
        self.rows.push(ints);
    }

    pub fn from_rows(ncols: usize, rows: &[Vec<Scalar>]) -> Self {
        let mut m = Matrix::new(ncols);
        for r in rows {
            m.push_row(r);
        }
        m
    }

    /// Kernel basis in reduced-row-echelon form.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        self.kernel_limited(usize::MAX).expect("no limit")
    }

    /// Kernel basis, or `None` when its dimension exceeds `limit`.
    pub fn kernel_limited(&self, limit: usize) -> Option<Vec<Vec<Scalar>>> {
        if self.rows.is_empty() {
            if self.ncols > limit {
                return None;
            }
            return Some(unit_vectors(self.ncols));
        }
        let primes = PrimeStream::new();
        let mut acc: Option<Crt> = None;
        for p in primes.take(40) {
            let Some(red) = ModRref::compute(&self.rows, self.ncols, p) else {
                continue;
            };
            if red.free.len() > limit {
                // A bad prime can only overestimate the kernel; confirm with a second one.
                if acc.is_none() {
                    let q = PrimeStream::from(p - 2).next().unwrap();
                    if let Some(r2) = ModRref::compute(&self.rows, self.ncols, q) {
                        if r2.free.len() > limit {
                            return None;
                        }
                    }
                }
                continue;
            }
            if red.free.is_empty() {
                return Some(Vec::new());
            }
            match &mut acc {
                Some(c) if c.free == red.free => c.absorb(&red, p),
                Some(c) if c.free.len() > red.free.len() => *c = Crt::start(&red, p),
                Some(_) => continue,
                None => acc = Some(Crt::start(&red, p)),
            }
            let c = acc.as_ref().unwrap();
            if let Some(basis) = c.reconstruct() {
                if self.annihilates(&basis) {
                    return Some(basis);
                }
            }
        }
        let basis = self.kernel_exact();
        (basis.len() <= limit).then_some(basis)
    }

    pub fn rank(&self) -> usize {
        self.ncols - self.kernel().len()
    }

    fn annihilates(&self, basis: &[Vec<Scalar>]) -> bool {
        basis.iter().all(|v| {
            let l = denominator_lcm(v.iter());
            let iv: Vec<BigInt> = v
                .iter()
                .map(|c| (c * Scalar::from_integer(l.clone())).to_integer())
                .collect();
            let support: Vec<usize> = (0..iv.len()).filter(|&j| !iv[j].is_zero()).collect();
            self.rows.iter().all(|r| {
                let mut s = BigInt::zero();
                for &j in &support {
                    if !r[j].is_zero() {
                        s += &r[j] * &iv[j];
                    }
                }
                s.is_zero()
            })
        })
    }

    /// Gauss-Jordan over Q.
    pub fn kernel_exact(&self) -> Vec<Vec<Scalar>> {
        let n = self.ncols;
        let mut rows: Vec<Vec<Scalar>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|c| Scalar::from_integer(c.clone())).collect())
            .collect();
        let mut pivots: Vec<usize> = Vec::new();
        let mut r = 0;
        for c in 0..n {
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let inv = rows[r][c].recip();
            for v in rows[r].iter_mut() {
                *v *= &inv;
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    if !pv.is_zero() {
                        *v -= &f * pv;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); n];
                v[f] = Scalar::one();
                for (k, &pc) in pivots.iter().enumerate() {
                    v[pc] = -rows[k][f].clone();
                }
                v
            })
            .collect()
    }
}

fn unit_vectors(n: usize) -> Vec<Vec<Scalar>> {
    (0..n)
        .map(|i| {
            let mut v = vec![Scalar::zero(); n];
            v[i] = Scalar::one();
            v
        })
        .collect()
}

pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Descending primes below 2^62.
pub(crate) struct PrimeStream(u64);

impl PrimeStream {
    pub(crate) fn new() -> Self {
        PrimeStream(1 << 62)
    }
}

impl From<u64> for PrimeStream {
    fn from(start: u64) -> Self {
        PrimeStream(start)
    }
}

impl Iterator for PrimeStream {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        loop {
            self.0 -= 1;
            if is_prime(self.0) {
                return Some(self.0);
            }
        }
    }
}

/// `c mod p`, or `None` when `p` divides the denominator.
pub(crate) fn scalar_mod(c: &Scalar, p: u64) -> Option<u64> {
    let den = reduce_mod(c.denom(), p);
    (den != 0).then(|| mulmod(reduce_mod(c.numer(), p), powmod(den, p - 2, p), p))
}

pub(crate) fn reduce_mod(c: &BigInt, p: u64) -> u64 {
    let r = c.mod_floor(&BigInt::from(p));
    r.to_u64().unwrap()
}

pub(crate) struct ModRref {
    pub(crate) free: Vec<usize>,
    /// Kernel basis mod p, one vector per free column.
    pub(crate) basis: Vec<Vec<u64>>,
}

impl ModRref {
    fn compute(rows: &[Vec<BigInt>], n: usize, p: u64) -> Option<Self> {
        Some(Self::from_residues(
            rows.iter().map(|r| r.iter().map(|c| reduce_mod(c, p)).collect()),
            n,
            p,
        ))
    }

    /// Reduced echelon kernel of a matrix already reduced mod `p`.
    pub(crate) fn from_residues(rows: impl IntoIterator<Item = Vec<u64>>, n: usize, p: u64) -> Self {
        let mut piv_rows: Vec<Vec<u64>> = Vec::new();
        let mut piv_cols: Vec<usize> = Vec::new();
        for mut v in rows {
            for (k, &pc) in piv_cols.iter().enumerate() {
                let f = v[pc];
                if f != 0 {
                    let pr = &piv_rows[k];
                    for j in pc..n {
                        if pr[j] != 0 {
                            v[j] = (v[j] + p - mulmod(f, pr[j], p)) % p;
                        }
                    }
                }
            }
            let Some(lead) = v.iter().position(|&x| x != 0) else {
                continue;
            };
            let inv = powmod(v[lead], p - 2, p);
            for x in v.iter_mut() {
                *x = mulmod(*x, inv, p);
            }
            let pos = piv_cols.partition_point(|&c| c < lead);
            piv_cols.insert(pos, lead);
            piv_rows.insert(pos, v);
            if piv_cols.len() == n {
                break;
            }
        }
        // Back substitution to reduced form.
        for k in (0..piv_cols.len()).rev() {
            let pc = piv_cols[k];
            let (above, rest) = piv_rows.split_at_mut(k);
            let pr = &rest[0];
            for row in above.iter_mut() {
                let f = row[pc];
                if f != 0 {
                    for j in pc..n {
                        if pr[j] != 0 {
                            row[j] = (row[j] + p - mulmod(f, pr[j], p)) % p;
                        }
                    }
                }
            }
        }
        let free: Vec<usize> = (0..n).filter(|c| piv_cols.binary_search(c).is_err()).collect();
        let basis = free
            .iter()
            .map(|&f| {
                let mut v = vec![0u64; n];
                v[f] = 1;
                for (k, &pc) in piv_cols.iter().enumerate() {
                    v[pc] = (p - piv_rows[k][f]) % p;
                }
                v
            })
            .collect();
        ModRref { free, basis }
    }
}

/// Chinese-remainder accumulation of kernel bases over several primes.
pub(crate) struct Crt {
    pub(crate) free: Vec<usize>,
    modulus: BigInt,
    residues: Vec<Vec<BigInt>>,
}

impl Crt {
    pub(crate) fn start(red: &ModRref, p: u64) -> Self {
        Crt {
            free: red.free.clone(),
            modulus: BigInt::from(p),
            residues: red
                .basis
                .iter()
                .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        }
    }

    pub(crate) fn absorb(&mut self, red: &ModRref, p: u64) {
        let pb = BigInt::from(p);
        // x ≡ r (mod M), x ≡ s (mod p): x = r + M * ((s - r) * M⁻¹ mod p)
        let minv = BigInt::from(powmod(reduce_mod(&self.modulus, p), p - 2, p));
        for (acc, new) in self.residues.iter_mut().zip(&red.basis) {
            for (r, &s) in acc.iter_mut().zip(new) {
                let diff = (BigInt::from(s) - &*r).mod_floor(&pb);
                let t = (diff * &minv).mod_floor(&pb);
                *r += &self.modulus * t;
            }
        }
        self.modulus *= pb;
    }

    pub(crate) fn reconstruct(&self) -> Option<Vec<Vec<Scalar>>> {
        self.residues
            .iter()
            .map(|v| v.iter().map(|r| rational_reconstruction(r, &self.modulus)).collect())
            .collect()
    }
}

/// Finds `a/b ≡ u (mod m)` with `|a|, b ≤ √(m/2)`.
fn rational_reconstruction(u: &BigInt, m: &BigInt) -> Option<Scalar> {
    if u.is_zero() {
        return Some(Scalar::zero());
    }
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    let (num, den) = if t1.sign() == Sign::Minus { (-r1, -t1) } else { (r1, t1) };
    Some(Scalar::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::{int, rat};

    fn check_kernel(rows: &[Vec<Scalar>], ncols: usize) {
        let m = Matrix::from_rows(ncols, rows);
        assert_eq!(m.kernel(), m.kernel_exact());
    }

    #[test]
    fn small_kernels_agree_with_exact() {
        check_kernel(&[vec![int(0), int(1), int(1)]], 3);
        check_kernel(&[vec![int(1), int(2), int(3)], vec![int(2), int(4), int(6)]], 3);
        check_kernel(
            &[
                vec![rat(1, 3), int(2), rat(-5, 7), int(0)],
                vec![int(4), rat(1, 2), int(0), int(9)],
            ],
            4,
        );
        check_kernel(&[vec![int(1), int(0)], vec![int(0), int(1)]], 2);
    }

    #[test]
    fn echelon_basis_shape() {
        // x + y = 0 with columns (1, y, x): basis {e_1, x - y}.
        let m = Matrix::from_rows(3, &[vec![int(0), int(1), int(1)]]);
        let k = m.kernel();
        assert_eq!(k, vec![vec![int(1), int(0), int(0)], vec![int(0), int(-1), int(1)]]);
    }

    #[test]
    fn large_entries_reconstruct() {
        let big = Scalar::new(BigInt::from(10).pow(40) + 7, BigInt::from(3).pow(30));
        let rows = vec![vec![big.clone(), int(1), int(0)], vec![int(0), big, int(-1)]];
        check_kernel(&rows, 3);
    }

    #[test]
    fn limit_is_respected() {
        let m = Matrix::from_rows(5, &[vec![int(1), int(1), int(0), int(0), int(0)]]);
        assert!(m.kernel_limited(3).is_none());
        assert_eq!(m.kernel_limited(4).unwrap().len(), 4);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn primes_are_prime() {
        let ps: Vec<u64> = PrimeStream::new().take(3).collect();
        assert!(ps.iter().all(|&p| is_prime(p) && p < (1 << 62)));
        assert!(!is_prime(561));
    }
}
