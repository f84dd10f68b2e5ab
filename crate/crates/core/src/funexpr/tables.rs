//! Prime counting and totient sums by cached sieve.

use std::sync::RwLock;

/// Largest argument the tables will sieve to.
pub const TABLE_LIMIT: u64 = 50_000_000;

struct Cache {
    /// pi[k] for k <= limit
    pi: Vec<u32>,
    /// sum of phi(k), k <= limit
    phi_sum: Vec<u64>,
}

static CACHE: RwLock<Cache> = RwLock::new(Cache { pi: Vec::new(), phi_sum: Vec::new() });

fn build_pi(limit: usize) -> Vec<u32> {
    let mut composite = vec![false; limit + 1];
    let mut pi = vec![0u32; limit + 1];
    let mut count = 0u32;
    for i in 2..=limit {
        if !composite[i] {
            count += 1;
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
        pi[i] = count;
    }
    pi
}

pub fn totients(limit: usize) -> Vec<u32> {
    let mut phi: Vec<u32> = (0..=limit as u32).collect();
    for i in 2..=limit {
        if phi[i] == i as u32 {
            let mut j = i;
            while j <= limit {
                phi[j] -= phi[j] / i as u32;
                j += i;
            }
        }
    }
    phi
}

fn build_phi_sum(limit: usize) -> Vec<u64> {
    let phi = totients(limit);
    let mut acc = 0u64;
    phi.iter()
        .enumerate()
        .map(|(k, &p)| {
            if k > 0 {
                acc += p as u64;
            }
            acc
        })
        .collect()
}

fn grow_to(n: u64) -> usize {
    (n.max(1 << 16).next_power_of_two()).min(TABLE_LIMIT) as usize
}

/// Number of primes <= n, or `None` past [`TABLE_LIMIT`].
pub fn prime_pi(n: u64) -> Option<u64> {
    if n > TABLE_LIMIT {
        return None;
    }
    {
        let c = CACHE.read().unwrap();
        if (n as usize) < c.pi.len() {
            return Some(c.pi[n as usize] as u64);
        }
    }
    let mut c = CACHE.write().unwrap();
    if (n as usize) >= c.pi.len() {
        c.pi = build_pi(grow_to(n));
    }
    Some(c.pi[n as usize] as u64)
}

/// Sum of Euler's phi(k) for 1 <= k <= n.
pub fn totient_sum(n: u64) -> Option<u64> {
    if n > TABLE_LIMIT {
        return None;
    }
    {
        let c = CACHE.read().unwrap();
        if (n as usize) < c.phi_sum.len() {
            return Some(c.phi_sum[n as usize]);
        }
    }
    let mut c = CACHE.write().unwrap();
    if (n as usize) >= c.phi_sum.len() {
        c.phi_sum = build_phi_sum(grow_to(n));
    }
    Some(c.phi_sum[n as usize])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_phi(n: u64) -> u64 {
        (1..=n).filter(|k| crate::enclose::gcd_u64(*k, n) == 1).count() as u64
    }

    #[test]
    fn small_values() {
        assert_eq!(prime_pi(1), Some(0));
        assert_eq!(prime_pi(2), Some(1));
        assert_eq!(prime_pi(100), Some(25));
        assert_eq!(prime_pi(1000), Some(168));
        assert_eq!(totient_sum(1), Some(1));
        assert_eq!(totient_sum(10), Some(32));
    }

    #[test]
    fn matches_naive_totient() {
        let mut acc = 0;
        for n in 1..200 {
            acc += naive_phi(n);
            assert_eq!(totient_sum(n), Some(acc));
        }
    }

    #[test]
    fn grows_past_initial_sieve() {
        assert_eq!(prime_pi(1_000_000), Some(78_498));
    }
}
