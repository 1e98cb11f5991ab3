//! Integer utilities: primality, factorization, prime powers, integer roots
//! and exact binomials.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    // Brent's cycle detection with batched gcds; c walks until a factor appears.
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut ys) = (2u64, 2u64, 2u64);
        let mut q = 1u64;
        let mut g = 1u64;
        let mut r = 1u64;
        let m = 64u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Prime factorization as sorted `(prime, exponent)` pairs. Trial division up
/// to 10^6, Pollard rho for what remains.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    if n < 2 {
        return out;
    }
    let push = |p: u64, out: &mut Vec<(u64, u32)>| match out.iter_mut().find(|e| e.0 == p) {
        Some(e) => e.1 += 1,
        None => out.push((p, 1)),
    };
    let mut d = 2u64;
    while d <= 1_000_000 && d * d <= n {
        while n % d == 0 {
            push(d, &mut out);
            n /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut stack = vec![];
    if n > 1 {
        stack.push(n);
    }
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            push(m, &mut out);
            continue;
        }
        let f = pollard_rho(m);
        stack.push(f);
        stack.push(m / f);
    }
    out.sort_unstable();
    out
}

/// `Some((p, e))` when `n = p^e` with `p` prime and `e >= 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    let f = factorize(n);
    if f.len() == 1 {
        Some(f[0])
    } else {
        None
    }
}

pub fn is_prime_power(n: u64) -> bool {
    prime_power(n).is_some()
}

/// Distinct prime divisors of `n`.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Largest `r` with `r^k <= n`.
pub fn iroot_floor(n: &BigUint, k: u32) -> BigUint {
    assert!(k >= 1);
    n.nth_root(k)
}

/// Least `r` with `r^k >= n`.
pub fn iroot_ceil(n: &BigUint, k: u32) -> BigUint {
    let r = iroot_floor(n, k);
    if &r.pow(k) == n {
        r
    } else {
        r + 1u32
    }
}

pub fn isqrt_u64(n: u64) -> u64 {
    iroot_floor(&BigUint::from(n), 2).to_u64().unwrap()
}

/// Exact binomial coefficient. Large arguments go through the prime
/// factorization of `n! / (k! (n-k)!)` and a balanced product tree.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    if k < 64 {
        let mut acc = BigUint::one();
        for i in 0..k {
            acc *= n - i;
            acc /= i + 1;
        }
        return acc;
    }
    let primes = sieve(n);
    let legendre = |m: u64, p: u64| {
        let mut e = 0u64;
        let mut pk = p;
        loop {
            e += m / pk;
            match pk.checked_mul(p) {
                Some(v) if v <= m => pk = v,
                _ => break,
            }
        }
        e
    };
    let mut factors: Vec<BigUint> = Vec::new();
    let mut word = 1u64;
    for p in primes {
        let e = legendre(n, p) - legendre(k, p) - legendre(n - k, p);
        for _ in 0..e {
            match word.checked_mul(p) {
                Some(w) => word = w,
                None => {
                    factors.push(BigUint::from(word));
                    word = p;
                }
            }
        }
    }
    factors.push(BigUint::from(word));
    product_tree(factors)
}

fn product_tree(mut v: Vec<BigUint>) -> BigUint {
    if v.is_empty() {
        return BigUint::one();
    }
    while v.len() > 1 {
        let mut next = Vec::with_capacity(v.len().div_ceil(2));
        let mut it = v.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a * b),
                None => next.push(a),
            }
        }
        v = next;
    }
    v.pop().unwrap()
}

/// Primes up to and including `n`.
pub fn sieve(n: u64) -> Vec<u64> {
    let n = n as usize;
    if n < 2 {
        return vec![];
    }
    let mut composite = vec![false; n + 1];
    let mut out = vec![];
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

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Inverse of `a` modulo `m` when `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i128 % m as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_and_large() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
        assert!(is_prime(18_446_744_073_709_551_557));
    }

    #[test]
    fn factorize_uses_rho_past_trial_bound() {
        let n = 1_000_003u64 * 1_000_033;
        assert_eq!(factorize(n), vec![(1_000_003, 1), (1_000_033, 1)]);
        assert_eq!(factorize(24), vec![(2, 3), (3, 1)]);
        assert_eq!(factorize(137 * 137 - 1), vec![(2, 4), (3, 1), (17, 1), (23, 1)]);
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(81), Some((3, 4)));
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn roots() {
        let n = BigUint::from(46656u32);
        assert_eq!(iroot_floor(&n, 6), BigUint::from(6u32));
        assert_eq!(iroot_ceil(&n, 6), BigUint::from(6u32));
        assert_eq!(iroot_ceil(&BigUint::from(46657u32), 6), BigUint::from(7u32));
        assert_eq!(isqrt_u64(1523), 39);
    }

    #[test]
    fn binomial_paths_agree() {
        assert_eq!(binomial(137, 12), BigUint::from(55_587_257_066_498_976u64));
        for (n, k) in [(200u64, 100u64), (500, 77), (1000, 999)] {
            let direct = factorial(n) / (factorial(k) * factorial(n - k));
            assert_eq!(binomial(n, k), direct);
        }
        assert_eq!(binomial(5, 7), BigUint::zero());
    }

    #[test]
    fn modular_inverse() {
        assert_eq!(inv_mod(2, 5), Some(3));
        assert_eq!(inv_mod(4, 8), None);
    }
}
