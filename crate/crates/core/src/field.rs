//! Finite field towers `F_p -> F_{p^a} -> ... ` built by successive quotients
//! `base[x] / (m(x))`.
//!
//! Every element is stored as its flattened coefficient vector over the prime
//! field: an element of a degree-`d` extension is `d` base elements laid end to
//! end, each of which is flattened the same way. Read as base-`p` digits, the
//! flat vector is exactly the canonical index of the element, and embedding a
//! subfield element into a higher level is zero padding.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, mul_mod};
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is not irreducible over the base field")]
    NotIrreducible,
    #[error("modulus must be monic of degree >= 1")]
    BadModulus,
    #[error("elements or polynomials belong to different field contexts")]
    ContextMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("field of order {sub} is not a subfield of the field of order {field}")]
    NotASubfield { sub: u64, field: u64 },
    #[error("field order exceeds 64 bits")]
    OrderOverflow,
    #[error("index {index} out of range for a field of order {order}")]
    IndexOutOfRange { index: u64, order: u64 },
    #[error("malformed field description: {0}")]
    Malformed(String),
}

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// Shared handle on one level of a field tower. Cloning is cheap; two handles
/// compare equal only if they point at the same constructed level.
#[derive(Clone)]
pub struct FieldCtx(Arc<Level>);

struct Level {
    id: u64,
    p: u64,
    base: Option<FieldCtx>,
    // Monic modulus over the base, (degree + 1) flattened base blocks.
    modulus: Vec<u64>,
    degree: usize,
    abs_degree: usize,
    order: u64,
    generator: OnceLock<Vec<u64>>,
    subfields: Mutex<HashMap<u64, Arc<Vec<u64>>>>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}
impl Eq for FieldCtx {}

impl Hash for FieldCtx {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state);
    }
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})#{}", self.0.p, self.0.abs_degree, self.0.id)
    }
}

impl FieldCtx {
    pub fn prime(p: u64) -> Result<FieldCtx, FieldError> {
        if !arith::is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldCtx(Arc::new(Level {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            p,
            base: None,
            modulus: vec![],
            degree: 1,
            abs_degree: 1,
            order: p,
            generator: OnceLock::new(),
            subfields: Mutex::new(HashMap::new()),
        })))
    }

    /// Quotient `self[x] / (modulus)`. The modulus must be monic and irreducible.
    pub fn extend(&self, modulus: &Poly) -> Result<FieldCtx, FieldError> {
        if modulus.ctx() != self {
            return Err(FieldError::ContextMismatch);
        }
        let d = match modulus.degree() {
            Some(d) if d >= 1 && modulus.is_monic() => d,
            _ => return Err(FieldError::BadModulus),
        };
        let order = arith::checked_pow(self.order(), d as u32).ok_or(FieldError::OrderOverflow)?;
        if !modulus.is_irreducible() {
            return Err(FieldError::NotIrreducible);
        }
        Ok(self.extend_unchecked(modulus, d, order))
    }

    fn extend_unchecked(&self, modulus: &Poly, d: usize, order: u64) -> FieldCtx {
        let modulus_flat = modulus.coeffs().iter().flat_map(|c| c.c.iter().copied()).collect();
        FieldCtx(Arc::new(Level {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            p: self.0.p,
            base: Some(self.clone()),
            modulus: modulus_flat,
            degree: d,
            abs_degree: d * self.0.abs_degree,
            order,
            generator: OnceLock::new(),
            subfields: Mutex::new(HashMap::new()),
        }))
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn order(&self) -> u64 {
        self.0.order
    }

    /// Degree over the immediate base (1 for a prime field).
    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// Degree over the prime field.
    pub fn absolute_degree(&self) -> usize {
        self.0.abs_degree
    }

    pub fn base(&self) -> Option<&FieldCtx> {
        self.0.base.as_ref()
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.base.is_none()
    }

    pub fn prime_field(&self) -> FieldCtx {
        let mut cur = self.clone();
        while let Some(b) = cur.base().cloned() {
            cur = b;
        }
        cur
    }

    /// The defining polynomial over the base; `None` for a prime field.
    pub fn modulus(&self) -> Option<Poly> {
        let base = self.base()?;
        let s = base.absolute_degree();
        let coeffs = self.0.modulus.chunks(s).map(|ch| base.raw(ch.to_vec())).collect();
        Some(Poly::new(base, coeffs))
    }

    /// True if `self` is `other` or one of the levels below it.
    pub fn is_ancestor_of(&self, other: &FieldCtx) -> bool {
        let mut cur = Some(other);
        while let Some(c) = cur {
            if c == self {
                return true;
            }
            cur = c.base();
        }
        false
    }

    pub fn zero(&self) -> FieldElem {
        self.raw(vec![0; self.0.abs_degree])
    }

    pub fn one(&self) -> FieldElem {
        let mut c = vec![0; self.0.abs_degree];
        c[0] = 1;
        self.raw(c)
    }

    /// Image of an integer under `Z -> F_p -> self`.
    pub fn from_int(&self, n: i64) -> FieldElem {
        let mut c = vec![0; self.0.abs_degree];
        c[0] = n.rem_euclid(self.0.p as i64) as u64;
        self.raw(c)
    }

    /// The class of `x` in `base[x] / (m(x))`. For a prime field this is 1.
    pub fn gen(&self) -> FieldElem {
        match self.base() {
            None => self.one(),
            Some(b) => {
                if self.0.degree == 1 {
                    // x = -m_0 when the modulus is linear
                    let m0 = b.raw(self.0.modulus[..b.absolute_degree()].to_vec());
                    return self.embed(&-m0).expect("base embeds");
                }
                let mut c = vec![0; self.0.abs_degree];
                c[b.absolute_degree()] = 1;
                self.raw(c)
            }
        }
    }

    /// Element with canonical index `i`.
    pub fn elem(&self, i: u64) -> Result<FieldElem, FieldError> {
        if i >= self.0.order {
            return Err(FieldError::IndexOutOfRange { index: i, order: self.0.order });
        }
        Ok(self.elem_unchecked(i))
    }

    pub(crate) fn elem_unchecked(&self, mut i: u64) -> FieldElem {
        let p = self.0.p;
        let mut c = vec![0; self.0.abs_degree];
        for slot in c.iter_mut() {
            *slot = i % p;
            i /= p;
        }
        self.raw(c)
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.0.order).map(move |i| self.elem_unchecked(i))
    }

    /// Element with the given coefficients over the immediate base.
    pub fn from_base_coeffs(&self, coeffs: &[FieldElem]) -> Result<FieldElem, FieldError> {
        let base = self.base().ok_or(FieldError::Malformed("prime field has no base".into()))?;
        if coeffs.len() > self.0.degree {
            return Err(FieldError::Malformed("too many coefficients".into()));
        }
        let mut c = Vec::with_capacity(self.0.abs_degree);
        for e in coeffs {
            if e.ctx() != base {
                return Err(FieldError::ContextMismatch);
            }
            c.extend_from_slice(&e.c);
        }
        c.resize(self.0.abs_degree, 0);
        Ok(self.raw(c))
    }

    /// Map an element of a lower tower level into this field.
    pub fn embed(&self, e: &FieldElem) -> Result<FieldElem, FieldError> {
        if !e.ctx().is_ancestor_of(self) {
            return Err(FieldError::ContextMismatch);
        }
        let mut c = e.c.clone();
        c.resize(self.0.abs_degree, 0);
        Ok(self.raw(c))
    }

    /// Inverse of [`embed`](Self::embed): `Some` if `e` lies in the ancestor `sub`.
    pub fn restrict(&self, e: &FieldElem, sub: &FieldCtx) -> Result<Option<FieldElem>, FieldError> {
        self.check(e)?;
        if !sub.is_ancestor_of(self) {
            return Err(FieldError::NotASubfield { sub: sub.order(), field: self.order() });
        }
        let s = sub.absolute_degree();
        if e.c[s..].iter().any(|&x| x != 0) {
            return Ok(None);
        }
        Ok(Some(sub.raw(e.c[..s].to_vec())))
    }

    pub fn check(&self, e: &FieldElem) -> Result<(), FieldError> {
        if e.ctx() == self {
            Ok(())
        } else {
            Err(FieldError::ContextMismatch)
        }
    }

    pub(crate) fn raw(&self, c: Vec<u64>) -> FieldElem {
        debug_assert_eq!(c.len(), self.0.abs_degree);
        FieldElem { ctx: self.clone(), c }
    }

    /// Least-index element of multiplicative order `q - 1`.
    pub fn generator(&self) -> FieldElem {
        let c = self.0.generator.get_or_init(|| {
            let n = self.order() - 1;
            let cofactors: Vec<u64> = arith::prime_divisors(n).into_iter().map(|r| n / r).collect();
            (1..self.order())
                .map(|i| self.elem_unchecked(i))
                .find(|e| cofactors.iter().all(|&k| !e.pow(k as u128).is_one()))
                .expect("multiplicative group is cyclic")
                .c
        });
        self.raw(c.clone())
    }

    /// Canonical indices of `{e : e^sub_order = e}`, the unique subfield of
    /// that order. Computed once per `(field, sub_order)` pair.
    pub fn subfield_indices(&self, sub_order: u64) -> Result<Arc<Vec<u64>>, FieldError> {
        let not_sub = FieldError::NotASubfield { sub: sub_order, field: self.order() };
        let (p, e) = arith::prime_power(sub_order).ok_or(not_sub.clone())?;
        if p != self.0.p || self.0.abs_degree % e as usize != 0 {
            return Err(not_sub);
        }
        let mut cache = self.0.subfields.lock().expect("subfield cache poisoned");
        if let Some(v) = cache.get(&sub_order) {
            return Ok(v.clone());
        }
        let v: Arc<Vec<u64>> = Arc::new(
            self.elements()
                .filter(|x| x.pow(sub_order as u128) == *x)
                .map(|x| x.index())
                .collect(),
        );
        cache.insert(sub_order, v.clone());
        Ok(v)
    }

    /// Degree of the minimal polynomial of `e` over the subfield of the
    /// same order as `sub`: the length of the Frobenius orbit `e, e^Q, e^{Q^2}, ...`.
    pub fn min_poly_degree(e: &FieldElem, sub: &FieldCtx) -> Result<usize, FieldError> {
        let field = e.ctx();
        if sub.characteristic() != field.characteristic()
            || field.absolute_degree() % sub.absolute_degree() != 0
        {
            return Err(FieldError::NotASubfield { sub: sub.order(), field: field.order() });
        }
        let q = sub.order() as u128;
        let mut cur = e.pow(q);
        let mut d = 1;
        while cur != *e {
            cur = cur.pow(q);
            d += 1;
        }
        Ok(d)
    }

    pub fn spec(&self) -> FieldSpec {
        let mut levels = vec![];
        let mut cur = self.clone();
        while let Some(m) = cur.modulus() {
            levels.push(m.to_indices());
            cur = cur.base().unwrap().clone();
        }
        levels.reverse();
        FieldSpec { p: self.0.p, tower: levels }
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<FieldCtx, FieldError> {
        let mut ctx = FieldCtx::prime(spec.p)?;
        for m in &spec.tower {
            let poly = Poly::from_indices(&ctx, m)?;
            ctx = ctx.extend(&poly)?;
        }
        Ok(ctx)
    }

    // ---- flat-slice arithmetic ----

    fn add_flat(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.0.p;
        a.iter().zip(b).map(|(&x, &y)| { let s = x + y; if s >= p { s - p } else { s } }).collect()
    }

    fn sub_flat(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.0.p;
        a.iter().zip(b).map(|(&x, &y)| if x >= y { x - y } else { x + p - y }).collect()
    }

    fn mul_flat(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let lvl = &*self.0;
        let p = lvl.p;
        let Some(base) = &lvl.base else {
            return vec![mul_mod(a[0], b[0], p)];
        };
        let d = lvl.degree;
        if base.is_prime_field() {
            let mut prod = vec![0u128; 2 * d - 1];
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.iter().enumerate() {
                    prod[i + j] += x as u128 * y as u128;
                }
            }
            let p128 = p as u128;
            let mut prod: Vec<u64> = prod.into_iter().map(|v| (v % p128) as u64).collect();
            let m = &lvl.modulus;
            for k in (d..2 * d - 1).rev() {
                let t = prod[k];
                if t == 0 {
                    continue;
                }
                for j in 0..d {
                    let sub = mul_mod(t, m[j], p);
                    let v = prod[k - d + j];
                    prod[k - d + j] = if v >= sub { v - sub } else { v + p - sub };
                }
            }
            prod.truncate(d);
            return prod;
        }
        let s = base.absolute_degree();
        let zero = vec![0u64; s];
        let mut prod: Vec<Vec<u64>> = vec![zero.clone(); 2 * d - 1];
        for i in 0..d {
            let ai = &a[i * s..(i + 1) * s];
            if ai.iter().all(|&x| x == 0) {
                continue;
            }
            for j in 0..d {
                let bj = &b[j * s..(j + 1) * s];
                let t = base.mul_flat(ai, bj);
                prod[i + j] = base.add_flat(&prod[i + j], &t);
            }
        }
        for k in (d..2 * d - 1).rev() {
            let t = std::mem::replace(&mut prod[k], zero.clone());
            if t.iter().all(|&x| x == 0) {
                continue;
            }
            for j in 0..d {
                let mj = &lvl.modulus[j * s..(j + 1) * s];
                let sub = base.mul_flat(&t, mj);
                prod[k - d + j] = base.sub_flat(&prod[k - d + j], &sub);
            }
        }
        prod.truncate(d);
        prod.concat()
    }
}

/// Serialized tower: prime and the modulus of every level, innermost first,
/// each coefficient given as the canonical index of the level below.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub tower: Vec<Vec<u64>>,
}

/// An element of some tower level. Arithmetic operators panic if the operands
/// come from different contexts; use [`FieldCtx::check`] at API boundaries.
#[derive(Clone)]
pub struct FieldElem {
    ctx: FieldCtx,
    c: Vec<u64>,
}

impl FieldElem {
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    /// Flattened coefficients over the prime field.
    pub fn flat(&self) -> &[u64] {
        &self.c
    }

    pub fn index(&self) -> u64 {
        let p = self.ctx.characteristic();
        self.c.iter().rev().fold(0u64, |acc, &d| acc * p + d)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&x| x == 0)
    }

    /// Coefficients over the immediate base, constant term first.
    pub fn base_coeffs(&self) -> Vec<FieldElem> {
        match self.ctx.base() {
            None => vec![self.clone()],
            Some(b) => self.c.chunks(b.absolute_degree()).map(|ch| b.raw(ch.to_vec())).collect(),
        }
    }

    pub fn pow(&self, mut e: u128) -> FieldElem {
        let mut acc = self.ctx.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn inv(&self) -> Result<FieldElem, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if self.ctx.is_prime_field() {
            let p = self.ctx.characteristic();
            let v = arith::inv_mod(self.c[0], p).expect("nonzero residue mod prime");
            return Ok(self.ctx.raw(vec![v]));
        }
        Ok(self.pow(self.ctx.order() as u128 - 2))
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem, FieldError> {
        self.ctx.check(other)?;
        Ok(self * &other.inv()?)
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.c == other.c
    }
}
impl Eq for FieldElem {}

impl Hash for FieldElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ctx.0.id.hash(state);
        self.c.hash(state);
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.index())
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

fn same(a: &FieldElem, b: &FieldElem) {
    assert!(a.ctx == b.ctx, "field context mismatch: {:?} vs {:?}", a.ctx, b.ctx);
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        same(self, rhs);
        self.ctx.raw(self.ctx.add_flat(&self.c, &rhs.c))
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        same(self, rhs);
        self.ctx.raw(self.ctx.sub_flat(&self.c, &rhs.c))
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        same(self, rhs);
        self.ctx.raw(self.ctx.mul_flat(&self.c, &rhs.c))
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        let p = self.ctx.characteristic();
        self.ctx.raw(self.c.iter().map(|&x| if x == 0 { 0 } else { p - x }).collect())
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: &FieldElem) -> FieldElem {
                (&self).$m(rhs)
            }
        }
        impl<'a> $atr<&'a FieldElem> for FieldElem {
            fn $am(&mut self, rhs: &FieldElem) {
                *self = (&*self).$m(rhs);
            }
        }
    };
}
owned_binop!(Add, add, AddAssign, add_assign);
owned_binop!(Sub, sub, SubAssign, sub_assign);
owned_binop!(Mul, mul, MulAssign, mul_assign);

/// Invert every element of `xs` with a single field inversion.
pub fn batch_inverse(xs: &[FieldElem]) -> Result<Vec<FieldElem>, FieldError> {
    let Some(first) = xs.first() else { return Ok(vec![]) };
    let ctx = first.ctx().clone();
    let mut prefix = Vec::with_capacity(xs.len());
    let mut acc = ctx.one();
    for x in xs {
        ctx.check(x)?;
        if x.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        prefix.push(acc.clone());
        acc = &acc * x;
    }
    let mut inv = acc.inv()?;
    let mut out = vec![ctx.zero(); xs.len()];
    for i in (0..xs.len()).rev() {
        out[i] = &inv * &prefix[i];
        inv = &inv * &xs[i];
    }
    Ok(out)
}

/// Build `F_p`, then optionally `F_{p^ext_deg}` and a further degree-`h`
/// extension, each time with the first irreducible in canonical order.
pub fn standard_tower(p: u64, ext_deg: usize, h_deg: Option<usize>) -> Result<FieldCtx, FieldError> {
    let fp = FieldCtx::prime(p)?;
    let fq = if ext_deg > 1 { fp.extend(&Poly::find_irreducible(&fp, ext_deg))? } else { fp };
    match h_deg {
        Some(h) => fq.extend(&Poly::find_irreducible(&fq, h)),
        None => Ok(fq),
    }
}
