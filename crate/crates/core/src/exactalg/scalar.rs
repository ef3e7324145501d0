use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An element of the base field Q. `BigRational` keeps itself reduced with a
/// positive denominator, which is exactly the invariant the workbench needs.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn denominator_lcm<'a>(it: impl IntoIterator<Item = &'a Scalar>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

/// Gcd of the numerators; assumes the values are integers.
pub(crate) fn integer_content<'a>(it: impl IntoIterator<Item = &'a Scalar>) -> BigInt {
    let mut g = BigInt::zero();
    for c in it {
        g = g.gcd(c.numer());
        if g.is_one() {
            break;
        }
    }
    g.abs()
}
