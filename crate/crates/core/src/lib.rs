//! Storage design arrays and capacity-achieving storage-constrained private
//! information retrieval.
//!
//! Files are split across `N` servers that each hold an `M/N` fraction of the
//! library, uncoded. A [`sda::StorageDesignArray`] decides which server subsets
//! share which fraction of every file; each distinct subset then runs an
//! independent replicated PIR instance ([`sfpir`]) with `M - 1` packets per
//! file segment. [`scpir`] composes the two, [`audit`] re-checks privacy,
//! decodability, rate and storage conditions exhaustively, and [`oracle`]
//! brute-forces the minimum number of groups on tiny instances.

pub mod audit;
pub mod cli;
mod error;
pub mod oracle;
pub mod scpir;
pub mod sda;
pub mod sfpir;
pub mod symbols;

pub use error::{Error, Result};
pub use num_rational::BigRational;

use num_bigint::BigInt;

/// Exact rational `num / den`.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `1 + 1/m + ... + 1/m^(k-1)`: download per desired symbol of a
/// capacity-achieving scheme with `m` replicas and `k` files.
pub fn download_factor(m: usize, k: usize) -> BigRational {
    let m = BigInt::from(m);
    let mut term = BigRational::from_integer(BigInt::from(1));
    let mut total = BigRational::from_integer(BigInt::from(0));
    for _ in 0..k {
        total += &term;
        term /= BigRational::from_integer(m.clone());
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn download_factor_values() {
        assert_eq!(download_factor(2, 2), ratio(3, 2));
        assert_eq!(download_factor(5, 3), ratio(31, 25));
        assert_eq!(download_factor(7, 1), ratio(1, 1));
    }
}
