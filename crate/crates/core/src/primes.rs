//! Prime enumeration by a plain sieve of Eratosthenes.

/// All primes `p <= bound` in ascending order.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// The first `k` primes.
pub fn first_primes(k: usize) -> Vec<u64> {
    if k == 0 {
        return Vec::new();
    }
    // p_k < k (ln k + ln ln k) for k >= 6
    let kf = k.max(6) as f64;
    let bound = (kf * (kf.ln() + kf.ln().ln())).ceil() as u64 + 1;
    let mut ps = primes_up_to(bound);
    ps.truncate(k);
    ps
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
