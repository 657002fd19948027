//! Binomials, falling factorials and factorials over any signed integer type.
//!
//! Every routine builds its value as a running product whose partial results
//! are always integers, so no rational intermediate is needed.

use num_integer::Integer;

/// Generalized binomial coefficient: `0` for `b < 0`, otherwise
/// `a (a-1) ... (a-b+1) / b!`. Negative `a` is allowed.
pub fn binom<T>(a: i64, b: i64) -> T
where
    T: Integer + Clone + From<i64>,
{
    if b < 0 {
        return T::zero();
    }
    if a >= 0 && b > a {
        return T::zero();
    }
    // symmetric reduction keeps the loop short for nonnegative a
    let b = if a >= 0 && b > a - b { a - b } else { b };
    let mut acc = T::one();
    for i in 0..b {
        // acc holds C(a, i); C(a, i) * (a - i) is divisible by i + 1
        acc = acc * T::from(a - i) / T::from(i + 1);
    }
    acc
}

/// Falling factorial `(n)_k = n (n-1) ... (n-k+1)`; `(n)_0 = 1`.
pub fn falling<T>(n: i64, k: u64) -> T
where
    T: Integer + Clone + From<i64>,
{
    (0..k as i64).fold(T::one(), |acc, i| acc * T::from(n - i))
}

pub fn factorial<T>(n: u64) -> T
where
    T: Integer + Clone + From<i64>,
{
    falling(n as i64, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn naive(a: i64, b: i64) -> i128 {
        if b < 0 {
            return 0;
        }
        let num: i128 = (0..b).map(|i| (a - i) as i128).product();
        let den: i128 = (1..=b as i128).product();
        num / den
    }

    #[test]
    fn small_values() {
        assert_eq!(binom::<i64>(-2, 0), 1);
        assert_eq!(binom::<i64>(-2, 1), -2);
        assert_eq!(binom::<i64>(5, 2), 10);
        assert_eq!(binom::<i64>(5, -1), 0);
        assert_eq!(binom::<i64>(3, 5), 0);
        assert_eq!(falling::<i64>(5, 3), 60);
        assert_eq!(falling::<i64>(5, 0), 1);
        assert_eq!(factorial::<BigInt>(20), BigInt::from(2_432_902_008_176_640_000u64));
    }

    #[test]
    fn agrees_with_naive_product() {
        for a in -8..=12 {
            for b in -2..=10 {
                assert_eq!(binom::<i128>(a, b), naive(a, b), "C({a},{b})");
            }
        }
    }

    #[test]
    fn big_and_machine_integers_agree() {
        for a in -10..=30 {
            for b in 0..=12 {
                assert_eq!(binom::<BigInt>(a, b), BigInt::from(binom::<i128>(a, b)));
            }
        }
    }

    #[test]
    fn negative_upper_index_identity() {
        // C(-a, b) = (-1)^b C(a + b - 1, b)
        for a in 1..8i64 {
            for b in 0..8i64 {
                let sign = if b % 2 == 0 { 1 } else { -1 };
                assert_eq!(binom::<i64>(-a, b), sign * binom::<i64>(a + b - 1, b));
            }
        }
    }
}
