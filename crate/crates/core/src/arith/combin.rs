use num_traits::{One, Zero};

use super::Int;

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> Int {
    if k > n {
        return Int::zero();
    }
    let k = k.min(n - k);
    let mut acc = Int::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(binomial(3, 1), Int::from(3));
        assert_eq!(binomial(2, 0), Int::from(1));
        assert_eq!(binomial(5, 2), Int::from(10));
        assert_eq!(binomial(2, 5), Int::from(0));
        assert_eq!(binomial(0, 0), Int::from(1));
    }

    #[test]
    fn pascal_rule() {
        for n in 1..40u64 {
            for k in 1..=n {
                assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
            }
        }
    }

    #[test]
    fn large_entries_are_exact() {
        assert_eq!(binomial(100, 50).to_string(), "100891344545564193334812497256");
    }
}
