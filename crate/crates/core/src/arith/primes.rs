use std::sync::{Arc, Mutex, OnceLock};

/// All primes up to `n`, from a shared sieve that grows on demand.
pub fn primes_up_to(n: u64) -> Arc<Vec<u64>> {
    static CACHE: OnceLock<Mutex<(u64, Arc<Vec<u64>>)>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new((0, Arc::new(Vec::new()))));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    if guard.0 < n {
        let limit = n.max(guard.0 * 2).max(1000);
        *guard = (limit, Arc::new(sieve(limit)));
    }
    if guard.0 == n {
        return guard.1.clone();
    }
    let end = guard.1.partition_point(|&p| p <= n);
    Arc::new(guard.1[..end].to_vec())
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut limit = 100u64;
    loop {
        let ps = primes_up_to(limit);
        if ps.len() >= count {
            return ps[..count].to_vec();
        }
        limit *= 2;
    }
}

fn sieve(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
