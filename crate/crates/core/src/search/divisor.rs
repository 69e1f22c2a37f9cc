use serde::{Deserialize, Serialize};

use super::{dovetail, SearchConfig, SearchError, SearchStatus};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic for all `n < 2^64`: strong probable-prime tests to the
/// first twelve prime bases.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'bases: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Least `x` with `1 < x <= n` dividing `n`.
pub fn minimal_divisor(n: u64) -> Result<u64, SearchError> {
    if n < 2 {
        return Err(SearchError::Domain(n));
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return Ok(d);
        }
        d += 1;
    }
    Ok(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorFound {
    pub divisor: u64,
    pub program_index: u64,
    pub rounds: u64,
}

/// Machine T₁: dovetail for a program printing a nontrivial divisor of `n`.
/// Whichever divisor shows up first is returned; it need not be the least.
pub fn find_divisor(n: u64, config: &SearchConfig) -> Result<DivisorFound, SearchError> {
    if n < 4 || is_prime(n) {
        return Err(SearchError::NotComposite(n));
    }
    let out = dovetail(config, &[n], |h| (1 < h.output && h.output < n && n % h.output == 0).then_some(()))?;
    match out.status {
        SearchStatus::Found { witness, program_index, rounds, .. } => {
            Ok(DivisorFound { divisor: witness, program_index, rounds })
        }
        SearchStatus::Exhausted { rounds } => Err(SearchError::Exhausted { rounds }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplitSource {
    Search { program_index: u64, rounds: u64 },
    /// The search was exhausted and trial division took over.
    TrialDivision,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub n: u64,
    pub divisor: u64,
    pub source: SplitSource,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    /// Prime factors with multiplicity, ascending.
    pub primes: Vec<u64>,
    pub splits: Vec<Split>,
}

impl Factorization {
    pub fn used_fallback(&self) -> bool {
        self.splits.iter().any(|s| s.source == SplitSource::TrialDivision)
    }
}

/// Split `n` with [`find_divisor`] and recurse on both parts. With
/// `fallback`, exhausted searches are finished by trial division and
/// flagged in the splits.
pub fn factorize(n: u64, config: &SearchConfig, fallback: bool) -> Result<Factorization, SearchError> {
    if n < 2 {
        return Err(SearchError::Domain(n));
    }
    let mut out = Factorization { primes: Vec::new(), splits: Vec::new() };
    let mut pending = vec![n];
    while let Some(m) = pending.pop() {
        if is_prime(m) {
            out.primes.push(m);
            continue;
        }
        let (divisor, source) = match find_divisor(m, config) {
            Ok(f) => (f.divisor, SplitSource::Search { program_index: f.program_index, rounds: f.rounds }),
            Err(SearchError::Exhausted { .. }) if fallback => (minimal_divisor(m)?, SplitSource::TrialDivision),
            Err(e) => return Err(e),
        };
        out.splits.push(Split { n: m, divisor, source });
        pending.push(divisor);
        pending.push(m / divisor);
    }
    out.primes.sort_unstable();
    Ok(out)
}

/// Reference factorizer by trial division.
pub fn trial_division(mut n: u64) -> Vec<u64> {
    let mut primes = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        while n % d == 0 {
            primes.push(d);
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        primes.push(n);
    }
    primes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knowledge_table::build_table;

    fn by_trial(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(!is_prime(561));
        assert!(!is_prime(1));
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751));
        for n in 0..20_000 {
            assert_eq!(is_prime(n), by_trial(n), "n={n}");
        }
    }

    #[test]
    fn divisors() {
        assert_eq!(minimal_divisor(15), Ok(3));
        assert_eq!(minimal_divisor(13), Ok(13));
        assert_eq!(minimal_divisor(1), Err(SearchError::Domain(1)));
        for n in 2..2000 {
            assert_eq!(minimal_divisor(n).unwrap(), trial_division(n)[0]);
        }
    }

    #[test]
    fn machine_t1() {
        let seq: Vec<u64> = (0..64).map(|n| minimal_divisor(n).unwrap_or(0)).collect();
        let config = SearchConfig { z_bound: 8, round_budget: 100, ..Default::default() }.plant(
            5,
            build_table(&seq).unwrap().compile().program,
            1,
            "minimal divisor table",
        );
        assert_eq!(find_divisor(4, &config).unwrap().divisor, 2);
        let d = find_divisor(15, &config).unwrap().divisor;
        assert!(d == 3 || d == 5);
        assert_eq!(find_divisor(7, &config), Err(SearchError::NotComposite(7)));
    }

    #[test]
    fn factoring() {
        let config = SearchConfig { z_bound: 4, round_budget: 8, ..Default::default() };
        let f = factorize(12, &config, true).unwrap();
        assert_eq!(f.primes, [2, 2, 3]);
        assert_eq!(factorize(97, &config, false).unwrap().primes, [97]);
        assert!(matches!(factorize(91, &config, false), Err(SearchError::Exhausted { .. })));
        let f = factorize(91, &config, true).unwrap();
        assert_eq!(f.primes, [7, 13]);
        assert!(f.used_fallback());
    }
}
