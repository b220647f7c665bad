use super::LadderError;

/// Euler's constant, the c of the retardation law t − φ₁(t) ~ (1−c)π(t).
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Prime-counting function backed by an odd-only bit sieve with per-word
/// prefix counts.
#[derive(Debug, Clone)]
pub struct PrimePi {
    limit: u64,
    // bit i of the sieve marks 2i+1 as prime
    words: Vec<u64>,
    // odd primes in all words before index w
    prefix: Vec<u32>,
}

impl PrimePi {
    pub fn new(limit: u64) -> Self {
        let odd_count = limit.div_ceil(2).max(1) as usize;
        let n_words = odd_count.div_ceil(64);
        let mut words = vec![u64::MAX; n_words];
        // 1 is not prime
        words[0] &= !1;
        // clear bits beyond the limit
        let tail = odd_count % 64;
        if tail != 0 {
            words[n_words - 1] &= (1u64 << tail) - 1;
        }
        let mut i = 1usize;
        loop {
            let p = 2 * i + 1;
            if p * p > limit as usize {
                break;
            }
            if words[i / 64] >> (i % 64) & 1 == 1 {
                let mut j = (p * p) / 2;
                while j < odd_count {
                    words[j / 64] &= !(1u64 << (j % 64));
                    j += p;
                }
            }
            i += 1;
        }
        let mut prefix = Vec::with_capacity(n_words);
        let mut acc = 0u32;
        for w in &words {
            prefix.push(acc);
            acc += w.count_ones();
        }
        Self { limit, words, prefix }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// π(n): number of primes ≤ n.
    pub fn count(&self, n: u64) -> Result<u64, LadderError> {
        if n > self.limit {
            return Err(LadderError::Domain {
                what: "prime_pi",
                value: n as f64,
                lo: 0.0,
                hi: self.limit as f64,
            });
        }
        if n < 2 {
            return Ok(0);
        }
        let idx = ((n - 1) / 2) as usize;
        let (w, b) = (idx / 64, idx % 64);
        let mask = if b == 63 { u64::MAX } else { (1u64 << (b + 1)) - 1 };
        Ok(1 + self.prefix[w] as u64 + (self.words[w] & mask).count_ones() as u64)
    }

    /// π(⌊t⌋) for real t ≥ 0.
    pub fn at(&self, t: f64) -> Result<u64, LadderError> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(LadderError::Domain {
                what: "prime_pi",
                value: t,
                lo: 0.0,
                hi: self.limit as f64,
            });
        }
        self.count(t.floor() as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(n: u64) -> u64 {
        (2..=n).filter(|&k| (2..).take_while(|d| d * d <= k).all(|d| k % d != 0)).count() as u64
    }

    #[test]
    fn small_values() {
        let p = PrimePi::new(100);
        assert_eq!(p.count(0).unwrap(), 0);
        assert_eq!(p.count(1).unwrap(), 0);
        assert_eq!(p.count(2).unwrap(), 1);
        assert_eq!(p.count(10).unwrap(), 4);
        assert_eq!(p.count(100).unwrap(), 25);
        assert_eq!(p.at(10.9).unwrap(), 4);
        assert!(p.count(101).is_err());
    }

    #[test]
    fn agrees_with_trial_division() {
        let p = PrimePi::new(3000);
        for n in 0..=3000 {
            assert_eq!(p.count(n).unwrap(), naive(n), "n = {n}");
        }
    }

    #[test]
    fn known_large_counts() {
        let p = PrimePi::new(1_000_000);
        assert_eq!(p.count(1000).unwrap(), 168);
        assert_eq!(p.count(10_000).unwrap(), 1229);
        assert_eq!(p.count(100_000).unwrap(), 9592);
        assert_eq!(p.count(1_000_000).unwrap(), 78_498);
    }
}
