//! Dense univariate polynomials over a field context, constant term first.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::arith;
use crate::field::{FieldCtx, FieldElem, FieldError};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    ctx: FieldCtx,
    coeffs: Vec<FieldElem>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.to_indices())
    }
}

impl Poly {
    /// Trailing zero coefficients are dropped.
    pub fn new(ctx: &FieldCtx, mut coeffs: Vec<FieldElem>) -> Poly {
        for c in &coeffs {
            assert!(c.ctx() == ctx, "coefficient from a different field");
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { ctx: ctx.clone(), coeffs }
    }

    pub fn from_indices(ctx: &FieldCtx, idx: &[u64]) -> Result<Poly, FieldError> {
        let coeffs = idx.iter().map(|&i| ctx.elem(i)).collect::<Result<Vec<_>, _>>()?;
        Ok(Poly::new(ctx, coeffs))
    }

    pub fn to_indices(&self) -> Vec<u64> {
        self.coeffs.iter().map(|c| c.index()).collect()
    }

    pub fn zero(ctx: &FieldCtx) -> Poly {
        Poly { ctx: ctx.clone(), coeffs: vec![] }
    }

    pub fn one(ctx: &FieldCtx) -> Poly {
        Poly::constant(ctx.one())
    }

    pub fn x(ctx: &FieldCtx) -> Poly {
        Poly::monomial(ctx.one(), 1)
    }

    pub fn constant(c: FieldElem) -> Poly {
        let ctx = c.ctx().clone();
        Poly::new(&ctx, vec![c])
    }

    /// `c * x^n`
    pub fn monomial(c: FieldElem, n: usize) -> Poly {
        let ctx = c.ctx().clone();
        let mut coeffs = vec![ctx.zero(); n];
        coeffs.push(c);
        Poly::new(&ctx, coeffs)
    }

    /// `x + a`
    pub fn linear(a: FieldElem) -> Poly {
        let ctx = a.ctx().clone();
        Poly::new(&ctx, vec![a, ctx.one()])
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.ctx.zero())
    }

    /// `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&FieldElem> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().expect("leading coefficient is nonzero")),
        }
    }

    pub fn scale(&self, c: &FieldElem) -> Poly {
        Poly::new(&self.ctx, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        let mut acc = self.ctx.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Evaluate at a point of a field that contains this polynomial's field.
    pub fn eval_embedded(&self, x: &FieldElem) -> Result<FieldElem, FieldError> {
        let big = x.ctx();
        let mut acc = big.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &big.embed(c)?;
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &self.ctx.from_int((i as u64 % self.ctx.characteristic()) as i64))
            .collect();
        Poly::new(&self.ctx, coeffs)
    }

    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly), FieldError> {
        if self.ctx != d.ctx {
            return Err(FieldError::ContextMismatch);
        }
        let dd = d.degree().ok_or(FieldError::DivisionByZero)?;
        let Some(nd) = self.degree() else {
            return Ok((Poly::zero(&self.ctx), Poly::zero(&self.ctx)));
        };
        if nd < dd {
            return Ok((Poly::zero(&self.ctx), self.clone()));
        }
        let lead_inv = d.leading().unwrap().inv()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.ctx.zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let t = &rem[k + dd] * &lead_inv;
            if t.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&t * dc);
            }
            quot[k] = t;
        }
        rem.truncate(dd);
        Ok((Poly::new(&self.ctx, quot), Poly::new(&self.ctx, rem)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly, FieldError> {
        Ok(self.div_rem(d)?.1)
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly) -> Poly {
        (self * other).rem(m).expect("nonzero modulus")
    }

    pub fn pow_mod(&self, mut e: u128, m: &Poly) -> Poly {
        let mut acc = Poly::one(&self.ctx).rem(m).expect("nonzero modulus");
        let mut base = self.rem(m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(&base, m);
            }
        }
        acc
    }

    /// Rabin's test: `f` of degree `d` over `F_Q` is irreducible iff
    /// `x^{Q^d} = x mod f` and `gcd(x^{Q^{d/r}} - x, f) = 1` for each prime `r | d`.
    pub fn is_irreducible(&self) -> bool {
        let Some(d) = self.degree() else { return false };
        if d == 0 {
            return false;
        }
        if d == 1 {
            return true;
        }
        if self.coeffs[0].is_zero() {
            return false;
        }
        let q = self.ctx.order() as u128;
        let x = Poly::x(&self.ctx).rem(self).unwrap();
        let mut frob = Vec::with_capacity(d);
        let mut cur = x.clone();
        for _ in 0..d {
            cur = cur.pow_mod(q, self);
            frob.push(cur.clone());
        }
        if frob[d - 1] != x {
            return false;
        }
        arith::prime_divisors(d as u64).into_iter().all(|r| {
            let t = &frob[d / r as usize - 1] - &x;
            Poly::gcd(&t, self).degree() == Some(0)
        })
    }

    /// First monic irreducible of degree `d` in canonical order: coefficient
    /// vectors compared lexicographically with the constant term as the most
    /// significant key, each coefficient by canonical index.
    pub fn find_irreducible(ctx: &FieldCtx, d: usize) -> Poly {
        Poly::irreducibles(ctx, d).next().expect("irreducible polynomials exist in every degree")
    }

    /// Monic irreducibles of degree `d` in canonical order (see
    /// [`find_irreducible`](Self::find_irreducible)).
    pub fn irreducibles(ctx: &FieldCtx, d: usize) -> impl Iterator<Item = Poly> + '_ {
        assert!(d >= 1);
        let q = ctx.order();
        // digits[0] is the constant term; the last digit changes fastest
        let mut digits = vec![0u64; d];
        if d >= 2 {
            digits[0] = 1;
        }
        let mut done = false;
        std::iter::from_fn(move || {
            while !done {
                let mut coeffs: Vec<FieldElem> = digits.iter().map(|&i| ctx.elem_unchecked(i)).collect();
                coeffs.push(ctx.one());
                let f = Poly::new(ctx, coeffs);
                let mut k = d;
                loop {
                    if k == 0 {
                        done = true;
                        break;
                    }
                    k -= 1;
                    digits[k] += 1;
                    if digits[k] < q {
                        break;
                    }
                    digits[k] = 0;
                }
                if f.is_irreducible() {
                    return Some(f);
                }
            }
            None
        })
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert!(self.ctx == rhs.ctx, "polynomial context mismatch");
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(&self.ctx, (0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert!(self.ctx == rhs.ctx, "polynomial context mismatch");
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(&self.ctx, (0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert!(self.ctx == rhs.ctx, "polynomial context mismatch");
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(&self.ctx);
        }
        let mut out = vec![self.ctx.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(&self.ctx, out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(&self.ctx, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::standard_tower;

    fn fp(p: u64) -> FieldCtx {
        FieldCtx::prime(p).unwrap()
    }

    // Reducible iff it has a nontrivial monic factor of degree <= d/2; brute force.
    fn irreducible_by_trial_division(f: &Poly) -> bool {
        let d = f.degree().unwrap();
        let ctx = f.ctx().clone();
        let q = ctx.order();
        for e in 1..=d / 2 {
            let count = q.pow(e as u32);
            for n in 0..count {
                let mut idx = vec![];
                let mut m = n;
                for _ in 0..e {
                    idx.push(m % q);
                    m /= q;
                }
                idx.push(1);
                let g = Poly::from_indices(&ctx, &idx).unwrap();
                if f.rem(&g).unwrap().is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn find_irreducible_examples() {
        assert_eq!(Poly::find_irreducible(&fp(2), 2).to_indices(), vec![1, 1, 1]);
        assert_eq!(Poly::find_irreducible(&fp(3), 2).to_indices(), vec![1, 0, 1]);
        for ctx in [fp(2), fp(7), standard_tower(2, 2, None).unwrap()] {
            assert_eq!(Poly::find_irreducible(&ctx, 1).to_indices(), vec![0, 1]);
        }
    }

    #[test]
    fn find_irreducible_is_first_in_order() {
        for (ctx, d) in [(fp(2), 3), (fp(2), 4), (fp(3), 2), (fp(3), 3), (fp(5), 2)] {
            let found = Poly::find_irreducible(&ctx, d);
            assert!(irreducible_by_trial_division(&found));
            let q = ctx.order();
            // enumerate in the same lexicographic order: constant term most significant
            let total = q.pow(d as u32);
            let mut earlier_checked = 0;
            for n in 0..total {
                let mut idx = vec![0u64; d];
                let mut m = n;
                for k in (0..d).rev() {
                    idx[k] = m % q;
                    m /= q;
                }
                let mut full = idx.clone();
                full.push(1);
                let cand = Poly::from_indices(&ctx, &full).unwrap();
                if cand == found {
                    break;
                }
                assert!(!irreducible_by_trial_division(&cand));
                earlier_checked += 1;
            }
            assert!(earlier_checked < total);
        }
    }

    #[test]
    fn rabin_agrees_with_trial_division() {
        let f3 = fp(3);
        for n in 0..81u64 {
            let idx = [n % 3, n / 3 % 3, n / 9 % 3, n / 27 % 3, 1];
            let f = Poly::from_indices(&f3, &idx).unwrap();
            assert_eq!(f.is_irreducible(), irreducible_by_trial_division(&f), "{idx:?}");
        }
        let f4 = standard_tower(2, 2, None).unwrap();
        for n in 0..16u64 {
            let f = Poly::from_indices(&f4, &[n % 4, n / 4, 1]).unwrap();
            assert_eq!(f.is_irreducible(), irreducible_by_trial_division(&f));
        }
    }

    #[test]
    fn division_identity() {
        let f7 = fp(7);
        let a = Poly::from_indices(&f7, &[3, 0, 5, 1, 6]).unwrap();
        let b = Poly::from_indices(&f7, &[2, 4, 3]).unwrap();
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree().unwrap() < 2);
        assert_eq!(a.div_rem(&Poly::zero(&f7)).unwrap_err(), FieldError::DivisionByZero);
    }

    #[test]
    fn degree_of_zero_is_none() {
        let f5 = fp(5);
        assert_eq!(Poly::zero(&f5).degree(), None);
        assert_eq!(Poly::from_indices(&f5, &[0, 0, 0]).unwrap().degree(), None);
        assert_eq!(Poly::one(&f5).degree(), Some(0));
    }

    #[test]
    fn gcd_and_derivative() {
        let f5 = fp(5);
        let x1 = Poly::linear(f5.from_int(1));
        let x2 = Poly::linear(f5.from_int(2));
        let sq = &(&x1 * &x1) * &x2;
        assert_eq!(Poly::gcd(&sq, &sq.derivative()), x1);
        assert_eq!(Poly::gcd(&x1, &x2).degree(), Some(0));
    }
}
