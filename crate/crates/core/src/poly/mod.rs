//! Graded polynomial rings over GF(2).

pub mod gf2;
mod monomial;
mod parse;
mod polynomial;
mod ring;

pub use gf2::{BitVec, Gf2Inconsistent, Gf2Matrix, Gf2Solution};
pub use monomial::{Monomial, MAX_EXPONENT, MAX_GENERATORS};
pub use polynomial::Polynomial;
pub use ring::Ring;

pub(crate) use polynomial::sum_all;

/// `C(n, k) mod 2` for any integer `n`.
///
/// For `n >= 0` this is Lucas: the bits of `k` must be a subset of those of
/// `n`. Negative `n` uses `C(n, k) = (-1)^k C(k - n - 1, k)`.
pub fn binom_mod2(n: i64, k: i64) -> bool {
    if k < 0 {
        return false;
    }
    if n < 0 {
        return binom_mod2(k - n - 1, k);
    }
    k <= n && (k & !n) == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials_against_pascal() {
        let mut row = vec![1u64];
        for n in 0..64i64 {
            for (k, c) in row.iter().enumerate() {
                assert_eq!(binom_mod2(n, k as i64), c % 2 == 1, "C({n},{k})");
            }
            assert!(!binom_mod2(n, n + 1));
            let mut next = vec![1u64; row.len() + 1];
            for k in 1..row.len() {
                next[k] = (row[k - 1] + row[k]) % 2;
            }
            row = next;
        }
    }

    #[test]
    fn negative_top() {
        // (1 + x)^-1 = 1 + x + x^2 + ... mod 2
        for k in 0..20 {
            assert!(binom_mod2(-1, k));
        }
        assert!(binom_mod2(-2, 0));
        assert!(!binom_mod2(-2, 1));
        assert!(!binom_mod2(5, -1));
    }
}
