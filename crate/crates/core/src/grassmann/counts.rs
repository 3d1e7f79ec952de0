use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::rational::{binomial, factorial};

/// Dimension and degree of the Grassmannian of k-planes in Pⁿ, and the
/// expected number `2^dim · degree` of k-planes tangent to `dim` general
/// quadrics.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub k: usize,
    pub n: usize,
    pub dim: usize,
    #[serde(with = "bigint_str")]
    pub degree: BigInt,
    #[serde(with = "bigint_str")]
    pub total: BigInt,
}

pub fn counts(k: usize, n: usize) -> Result<Counts> {
    if k < 1 || k + 2 > n {
        return Err(Error::OutOfRange(format!("need 1 <= k <= n-2, got k={k}, n={n}")));
    }
    let dim = (k + 1) * (n - k);
    let numer = (1..=k).fold(factorial(dim), |acc, i| acc * factorial(i));
    let denom = (n - k..=n).fold(BigInt::one(), |acc, i| acc * factorial(i));
    let degree = numer / denom;
    let total = (BigInt::one() << dim) * &degree;
    Ok(Counts {
        k,
        n,
        dim,
        degree,
        total,
    })
}

/// `C_m = binom(2m, m) / (m + 1)`.
pub fn catalan(m: usize) -> BigInt {
    binomial(2 * m, m) / BigInt::from(m + 1)
}

mod bigint_str {
    use num_bigint::BigInt;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(de::Error::custom)
    }
}
