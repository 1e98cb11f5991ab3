//! Certified real brackets with exact rational endpoints, enough to decide
//! inequalities involving natural logarithms without floating point.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A closed interval `[lo, hi]` known to contain some real number.
#[derive(Debug, Clone, PartialEq)]
pub struct Bracket {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Bracket {
    pub fn exact(v: BigRational) -> Bracket {
        Bracket { lo: v.clone(), hi: v }
    }

    pub fn int(v: i64) -> Bracket {
        Bracket::exact(BigRational::from_integer(v.into()))
    }

    pub fn add(&self, o: &Bracket) -> Bracket {
        Bracket { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &Bracket) -> Bracket {
        Bracket { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn mul(&self, o: &Bracket) -> Bracket {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Bracket { lo, hi }
    }

    /// Reciprocal of a strictly positive bracket.
    pub fn recip(&self) -> Bracket {
        assert!(self.lo.is_positive(), "reciprocal of a bracket touching zero");
        Bracket { lo: self.hi.recip(), hi: self.lo.recip() }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    /// `Some` ordering when the brackets are disjoint or both collapse to the same point.
    pub fn compare(&self, o: &Bracket) -> Option<Ordering> {
        if self.lo > o.hi {
            Some(Ordering::Greater)
        } else if self.hi < o.lo {
            Some(Ordering::Less)
        } else if self.lo == self.hi && o.lo == o.hi && self.lo == o.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }
}

// 2 atanh(z) for 0 <= z < 1 via sum z^(2n+1)/(2n+1), n < terms, with the tail
// bounded by z^(2N+1) / ((2N+1)(1 - z^2)).
fn two_atanh(z: &BigRational, terms: usize) -> Bracket {
    let two = BigRational::from_integer(2.into());
    let z2 = z * z;
    let mut pow = z.clone();
    let mut sum = BigRational::zero();
    for n in 0..terms {
        sum += &pow / BigRational::from_integer(BigInt::from(2 * n + 1));
        pow = &pow * &z2;
    }
    let tail = &pow / (BigRational::from_integer(BigInt::from(2 * terms + 1)) * (BigRational::one() - &z2));
    Bracket { lo: &two * &sum, hi: &two * (sum + tail) }
}

pub fn ln2(terms: usize) -> Bracket {
    two_atanh(&BigRational::new(1.into(), 3.into()), terms)
}

/// Bracket on `ln x` for rational `x > 0`; about `0.95 * terms` decimal digits.
pub fn ln(x: &BigRational, terms: usize) -> Bracket {
    assert!(x.is_positive(), "ln of a non-positive number");
    let num = x.numer().magnitude().clone();
    let den = x.denom().magnitude().clone();
    // k = floor(log2 x), then y = x / 2^k lies in [1, 2)
    let mut k = num.bits() as i64 - den.bits() as i64;
    let scaled = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::new(num.clone().into(), (den.clone() << k as usize).into())
        } else {
            BigRational::new((num.clone() << (-k) as usize).into(), den.clone().into())
        }
    };
    let mut y = scaled(k);
    let two = BigRational::from_integer(2.into());
    while y >= two {
        k += 1;
        y = scaled(k);
    }
    while y < BigRational::one() {
        k -= 1;
        y = scaled(k);
    }
    let z = (&y - BigRational::one()) / (&y + BigRational::one());
    let frac = two_atanh(&z, terms);
    let l2 = ln2(terms);
    let kb = Bracket::int(k);
    kb.mul(&l2).add(&frac)
}

pub fn ln_uint(n: &BigUint, terms: usize) -> Bracket {
    ln(&BigRational::from_integer(BigInt::from(n.clone())), terms)
}

/// Evaluate a bracket predicate at increasing precision until it is decided.
pub fn decide<F>(mut pred: F) -> Option<bool>
where
    F: FnMut(usize) -> Option<bool>,
{
    [24usize, 48, 96, 192].into_iter().find_map(&mut pred)
}
