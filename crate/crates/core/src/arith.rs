//! Small integer helpers shared by the field modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub fn is_prime(n: u64) -> bool {
    primal_check::miller_rabin(n)
}

#[inline]
pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod(mut base: u64, mut exp: u128, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo the prime `p`; `a` must be nonzero mod `p`.
pub fn invmod_prime(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    powmod(a, (p - 2) as u128, p)
}

/// Inverse modulo an arbitrary modulus, if it exists.
pub fn invmod(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = egcd(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// p-adic valuation of a nonzero big integer.
pub fn vp_big(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

pub fn vp_i64(n: i64, p: u64) -> u32 {
    vp_big(&BigInt::from(n), p)
}

pub fn pow_big(p: u64, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), k as usize)
}

/// Representative of `c` modulo `m` in the balanced range (-m/2, m/2].
pub fn balanced(c: u64, m: u64) -> i64 {
    let c = c % m;
    if c > m / 2 {
        c as i64 - m as i64
    } else {
        c as i64
    }
}

/// Inverse of `a` modulo `m` for big integers.
pub fn invmod_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

pub fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    if a >= 0 {
        (a + b - 1) / b
    } else {
        -((-a) / b)
    }
}

pub fn abs_big(a: &BigInt) -> BigInt {
    a.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn inverses() {
        assert_eq!(invmod(3, 32), Some(11));
        assert_eq!(invmod(2, 32), None);
        assert_eq!(invmod_prime(2, 7), 4);
        assert_eq!(
            invmod_big(&BigInt::from(3), &BigInt::from(32)),
            Some(BigInt::from(11))
        );
    }

    #[test]
    fn ceil_division() {
        assert_eq!(ceil_div(5, 2), 3);
        assert_eq!(ceil_div(4, 2), 2);
        assert_eq!(ceil_div(0, 2), 0);
        assert_eq!(ceil_div(-3, 2), -1);
    }

    #[test]
    fn balanced_lift() {
        assert_eq!(balanced(2, 3), -1);
        assert_eq!(balanced(1, 2), 1);
        assert_eq!(balanced(3, 5), -2);
    }
}
