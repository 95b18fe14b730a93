use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Counts of partitions into distinct parts and into odd parts, `0..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionTable {
    distinct: Vec<BigUint>,
    odd: Vec<BigUint>,
}

impl PartitionTable {
    pub fn new(n_max: usize) -> Self {
        let mut distinct = vec![BigUint::zero(); n_max + 1];
        let mut odd = distinct.clone();
        distinct[0] = BigUint::one();
        odd[0] = BigUint::one();
        for part in 1..=n_max {
            // descending sweep uses each part at most once
            for s in (part..=n_max).rev() {
                let prev = distinct[s - part].clone();
                distinct[s] += prev;
            }
            if part % 2 == 1 {
                for s in part..=n_max {
                    let prev = odd[s - part].clone();
                    odd[s] += prev;
                }
            }
        }
        PartitionTable { distinct, odd }
    }

    pub fn n_max(&self) -> usize {
        self.distinct.len() - 1
    }

    pub fn q(&self, n: usize) -> &BigUint {
        &self.distinct[n]
    }

    pub fn p_odd(&self, n: usize) -> &BigUint {
        &self.odd[n]
    }
}

/// Number of partitions of `n` into distinct parts.
pub fn q_distinct(n: usize) -> BigUint {
    PartitionTable::new(n).distinct.swap_remove(n)
}

/// Number of partitions of `n` into odd parts.
pub fn p_odd(n: usize) -> BigUint {
    PartitionTable::new(n).odd.swap_remove(n)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerReport {
    pub n_max: usize,
    /// First `n` where the two counts differ, with both values.
    pub mismatch: Option<(usize, BigUint, BigUint)>,
}

impl EulerReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

pub fn euler_check(n_max: usize) -> EulerReport {
    let table = PartitionTable::new(n_max);
    let mismatch = (0..=n_max)
        .find(|&n| table.q(n) != table.p_odd(n))
        .map(|n| (n, table.q(n).clone(), table.p_odd(n).clone()));
    EulerReport { n_max, mismatch }
}

/// Natural log of a positive big integer from its top 53 bits and the bit
/// shift, good to roughly 50 significant bits.
fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().expect("53-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Diagnostic `ln q(n) / sqrt(n)`. Returns `None` for `n = 0`. This is a
/// floating-point value and never enters a certificate.
pub fn hr_ratio(n: usize) -> Option<f64> {
    if n == 0 {
        return None;
    }
    Some(ln_big(&q_distinct(n)) / (n as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Counts distinct-part partitions by recursion on the largest part.
    fn brute_distinct(n: usize, max_part: usize) -> u64 {
        if n == 0 {
            return 1;
        }
        (1..=max_part.min(n))
            .map(|p| brute_distinct(n - p, p - 1))
            .sum()
    }

    #[test]
    fn small_values() {
        let q: Vec<u64> = (0..=6).map(|n| q_distinct(n).to_u64().unwrap()).collect();
        assert_eq!(q, [1, 1, 1, 2, 2, 3, 4]);
        assert_eq!(q_distinct(10), BigUint::from(10u32));
        assert_eq!(p_odd(0), BigUint::one());
        assert_eq!(p_odd(5), BigUint::from(3u32));
        assert_eq!(p_odd(6), BigUint::from(4u32));
    }

    #[test]
    fn table_matches_brute_force() {
        let table = PartitionTable::new(40);
        for n in 0..=40 {
            assert_eq!(table.q(n).to_u64().unwrap(), brute_distinct(n, n), "n = {n}");
        }
    }

    #[test]
    fn euler_holds() {
        assert!(euler_check(0).passed());
        assert!(euler_check(6).passed());
        assert!(euler_check(200).passed());
    }

    #[test]
    fn ratio_diagnostics() {
        assert_eq!(hr_ratio(0), None);
        assert_eq!(hr_ratio(1), Some(0.0));
        let r = hr_ratio(100).unwrap();
        assert!(r > 1.0 && r < 1.814, "{r}");
    }

    #[test]
    fn ln_of_large_values_agrees_with_small_path() {
        let x = BigUint::from(3u32).pow(80);
        let expected = 80.0 * 3f64.ln();
        assert!((ln_big(&x) - expected).abs() < 1e-10);
    }
}
