//! Small integer helpers shared across modules.

use num_integer::Integer;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for d in [2u64, 3, 5, 7, 11, 13] {
        if n.is_multiple_of(d) {
            return n == d;
        }
    }
    let mut d = 17u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorisation as `(prime, exponent)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// All positive divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let len = out.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut acc = 1u128;
    let m = modulus as u128;
    let mut b = (base % modulus) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Exact integer square root if `n` is a perfect square.
pub fn exact_sqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = isqrt(n);
    (r * r == n).then_some(r)
}

pub fn isqrt(n: i128) -> i128 {
    if n < 2 {
        return n.max(0);
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Exact integer `r`-th root if `n` is a perfect `r`-th power.
pub fn exact_root(n: u64, r: u32) -> Option<u64> {
    let guess = (n as f64).powf(1.0 / r as f64).round() as u64;
    for c in guess.saturating_sub(1)..=guess + 1 {
        if c.checked_pow(r) == Some(n) {
            return Some(c);
        }
    }
    None
}

/// Write `q = p^m` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let f = factorize(q);
    (f.len() == 1).then(|| f[0])
}

/// Exact division, or `None` if `den` does not divide `num`.
pub fn exact_div(num: i128, den: i128) -> Option<i128> {
    (den != 0 && num.mod_floor(&den) == 0).then(|| num / den)
}

/// Multiplicative order of `a` modulo `n` (requires `gcd(a, n) = 1`).
pub fn mult_order(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(1);
    }
    if a.gcd(&n) != 1 {
        return None;
    }
    let mut x = a % n;
    let mut ord = 1;
    while x != 1 {
        x = ((x as u128 * a as u128) % n as u128) as u64;
        ord += 1;
    }
    Some(ord)
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Prime powers `(p, m, q)` with `q <= hi`, sorted by `q`.
pub fn prime_powers_upto(hi: u64) -> Vec<(u64, u32, u64)> {
    let mut out = Vec::new();
    for p in 2..=hi {
        if !is_prime(p) {
            continue;
        }
        let mut q = p;
        let mut m = 1;
        loop {
            out.push((p, m, q));
            match q.checked_mul(p) {
                Some(next) if next <= hi => {
                    q = next;
                    m += 1;
                }
                _ => break,
            }
        }
    }
    out.sort_by_key(|&(_, _, q)| q);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisors_of_126() {
        assert_eq!(
            divisors(126),
            vec![1, 2, 3, 6, 7, 9, 14, 18, 21, 42, 63, 126]
        );
        assert_eq!(divisors(1), vec![1]);
    }

    #[test]
    fn primality_and_factorisation() {
        assert!(is_prime(1201));
        assert!(!is_prime(2402));
        assert_eq!(factorize(2402), vec![(2, 1), (1201, 1)]);
        assert_eq!(prime_power(2401), Some((7, 4)));
        assert_eq!(prime_power(12), None);
    }

    #[test]
    fn roots() {
        assert_eq!(exact_root(343, 3), Some(7));
        assert_eq!(exact_root(344, 3), None);
        assert_eq!(exact_sqrt(1369), Some(37));
        assert_eq!(exact_sqrt(-4), None);
    }

    #[test]
    fn orders() {
        assert_eq!(mult_order(7, 5), Some(4));
        assert_eq!(mult_order(2, 7), Some(3));
        assert_eq!(pow_mod(3, 80, 81), 0);
        assert_eq!(binomial(4, 2), 6);
    }

    #[test]
    fn prime_power_list() {
        let v: Vec<u64> = prime_powers_upto(16).iter().map(|t| t.2).collect();
        assert_eq!(v, vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16]);
    }
}
