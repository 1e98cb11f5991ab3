//! Received words `u_f = (f(a)/h(a) + a^{g-h})_{a in F_q}` and the
//! correspondence between codewords at distance exactly `q - g` from `u_f`
//! and `g`-sets `S` of distinct elements with `prod_{a in S} (alpha + a) = f(alpha)`.
//!
//! For such an `S`, `prod (x + a) = f(x) + t(x) h(x)` with `t` monic of degree
//! `g - h`. Then `u_f - (x^{g-h} - t) = prod (x + a) / h` pointwise, so the
//! codeword of `c = x^{g-h} - t` agrees with `u_f` exactly on the `g` points `-S`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{batch_inverse, FieldCtx, FieldElem, FieldError, FieldSpec};
use crate::poly::Poly;
use crate::rs_code::{RsCode, RsError, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeepBallError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("product of the factor set does not equal f(alpha)")]
    ProductMismatch,
    #[error("invalid factor set: {0}")]
    BadFactorSet(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Rs(#[from] RsError),
}

/// `F_{q^h} = F_q[x]/(h(x))`, a numerator `f` over `F_q` and a factor count `g`.
#[derive(Debug, Clone)]
pub struct DeepBallParams {
    ext: FieldCtx,
    f: Poly,
    g: usize,
}

impl DeepBallParams {
    pub fn new(ext: &FieldCtx, f: Poly, g: usize) -> Result<DeepBallParams, DeepBallError> {
        let invalid = |m: &str| Err(DeepBallError::InvalidParams(m.to_string()));
        let Some(base) = ext.base() else {
            return invalid("extension field must sit over a base field");
        };
        let h = ext.degree();
        if h < 2 {
            return invalid("h(x) must have degree at least 2");
        }
        if f.ctx() != base {
            return Err(FieldError::ContextMismatch.into());
        }
        match f.degree() {
            None => return invalid("f must be nonzero"),
            Some(d) if d >= h => return invalid("deg f must be below deg h"),
            _ => {}
        }
        let q = base.order();
        if !(h < g && (g as u64) < q) {
            return Err(DeepBallError::InvalidParams(format!("need h < g < q, got h={h}, g={g}, q={q}")));
        }
        Ok(DeepBallParams { ext: ext.clone(), f, g })
    }

    /// Parameters whose `f` is the canonical representative (degree < h) of `beta`.
    pub fn for_target(beta: &FieldElem, g: usize) -> Result<DeepBallParams, DeepBallError> {
        let ext = beta.ctx();
        let base = ext
            .base()
            .ok_or_else(|| DeepBallError::InvalidParams("target must live in an extension".into()))?;
        let f = Poly::new(base, beta.base_coeffs());
        DeepBallParams::new(ext, f, g)
    }

    pub fn ext(&self) -> &FieldCtx {
        &self.ext
    }

    pub fn base(&self) -> &FieldCtx {
        self.ext.base().expect("checked at construction")
    }

    pub fn h(&self) -> usize {
        self.ext.degree()
    }

    pub fn h_poly(&self) -> Poly {
        self.ext.modulus().expect("checked at construction")
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn g(&self) -> usize {
        self.g
    }

    /// Code dimension `g - h`.
    pub fn k(&self) -> usize {
        self.g - self.h()
    }

    /// Distance `q - g` from the center to the code.
    pub fn radius(&self) -> usize {
        self.base().order() as usize - self.g
    }

    pub fn code(&self) -> RsCode {
        RsCode::new(self.base(), self.k()).expect("1 <= g - h < q")
    }

    /// `f(alpha)` as an element of the extension.
    pub fn target(&self) -> FieldElem {
        self.ext.from_base_coeffs(self.f.coeffs()).expect("deg f < h")
    }
}

/// A set of distinct elements of `F_q` by canonical index, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FactorSet(Vec<u64>);

impl FactorSet {
    pub fn new(mut elems: Vec<u64>) -> Result<FactorSet, DeepBallError> {
        elems.sort_unstable();
        if elems.windows(2).any(|w| w[0] == w[1]) {
            return Err(DeepBallError::BadFactorSet("elements must be distinct".into()));
        }
        Ok(FactorSet(elems))
    }

    pub fn indices(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `prod_{a in S} (alpha + a)` in `ext`, with `a` taken from `ext`'s base.
    pub fn product(&self, ext: &FieldCtx) -> Result<FieldElem, DeepBallError> {
        let base = ext.base().ok_or_else(|| DeepBallError::InvalidParams("no base field".into()))?;
        let alpha = ext.gen();
        let mut acc = ext.one();
        for &i in &self.0 {
            let a = ext.embed(&base.elem(i)?)?;
            acc = &acc * &(&alpha + &a);
        }
        Ok(acc)
    }
}

/// The received word `u_f`, coordinate `a` equal to `f(a)/h(a) + a^{g-h}`.
pub fn build_center(params: &DeepBallParams) -> Result<Word, DeepBallError> {
    let base = params.base();
    let h_poly = params.h_poly();
    let k = params.k() as u128;
    let q = base.order();
    let mut symbols = Vec::with_capacity(q as usize);
    const CHUNK: u64 = 1 << 14;
    let mut start = 0;
    while start < q {
        let end = (start + CHUNK).min(q);
        let points: Vec<FieldElem> = (start..end).map(|i| base.elem_unchecked(i)).collect();
        // h has no roots in F_q, so no inversion below can fail
        let hv: Vec<FieldElem> = points.iter().map(|a| h_poly.eval(a)).collect();
        let hinv = batch_inverse(&hv)?;
        for (a, hi) in points.iter().zip(&hinv) {
            let v = &(&params.f.eval(a) * hi) + &a.pow(k);
            symbols.push(v.index());
        }
        start = end;
    }
    Ok(Word::new(base, symbols)?)
}

/// Message `c = x^{g-h} - t` for a factor set with `prod (alpha + a) = f(alpha)`,
/// where `prod (x + a) = f(x) + t(x) h(x)`.
pub fn factors_to_codeword(set: &FactorSet, params: &DeepBallParams) -> Result<Poly, DeepBallError> {
    if set.len() != params.g {
        return Err(DeepBallError::BadFactorSet(format!("expected {} elements, got {}", params.g, set.len())));
    }
    let base = params.base();
    if set.0.iter().any(|&i| i >= base.order()) {
        return Err(DeepBallError::BadFactorSet("element outside F_q".into()));
    }
    if set.product(&params.ext)? != params.target() {
        return Err(DeepBallError::ProductMismatch);
    }
    let mut n = Poly::one(base);
    for &i in &set.0 {
        n = &n * &Poly::linear(base.elem_unchecked(i));
    }
    let (t, r) = (&n - &params.f).div_rem(&params.h_poly())?;
    assert!(r.is_zero(), "matching product implies h(x) divides prod(x + a) - f(x)");
    let xk = Poly::monomial(base.one(), params.k());
    Ok(&xk - &t)
}

/// Inverse of [`factors_to_codeword`]: factor `f + (x^{g-h} - c) h` over `F_q`.
/// `Ok(None)` when it does not split into `g` distinct linear factors.
pub fn codeword_to_factors(c: &Poly, params: &DeepBallParams) -> Result<Option<FactorSet>, DeepBallError> {
    let base = params.base();
    if c.ctx() != base {
        return Err(FieldError::ContextMismatch.into());
    }
    if c.degree().is_some_and(|d| d >= params.k()) {
        return Err(DeepBallError::Malformed(format!("codeword degree must be below {}", params.k())));
    }
    let t = &Poly::monomial(base.one(), params.k()) - c;
    let n = &params.f + &(&t * &params.h_poly());
    debug_assert_eq!(n.degree(), Some(params.g));
    let mut roots = Vec::with_capacity(params.g);
    for r in base.elements() {
        if n.eval(&r).is_zero() {
            roots.push((-&r).index());
            if roots.len() > params.g {
                break;
            }
        }
    }
    if roots.len() != params.g {
        return Ok(None);
    }
    Ok(Some(FactorSet::new(roots)?))
}

/// File form of a center: tower, `h(x)`, `f`, `g`, `k`, radius and the word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterRecord {
    pub field: FieldSpec,
    pub h_poly: Vec<u64>,
    pub f: Vec<u64>,
    pub g: usize,
    pub k: usize,
    pub radius: usize,
    pub center: Vec<u64>,
}

impl CenterRecord {
    pub fn build(params: &DeepBallParams) -> Result<CenterRecord, DeepBallError> {
        let center = build_center(params)?;
        Ok(CenterRecord {
            field: params.ext.spec(),
            h_poly: params.h_poly().to_indices(),
            f: params.f.to_indices(),
            g: params.g,
            k: params.k(),
            radius: params.radius(),
            center: center.symbols().to_vec(),
        })
    }

    /// Rebuild the field and parameters; checks that the stored derived fields
    /// and the center agree with a fresh computation.
    pub fn load(&self) -> Result<(DeepBallParams, Word), DeepBallError> {
        let ext = FieldCtx::from_spec(&self.field)?;
        if ext.modulus().map(|m| m.to_indices()) != Some(self.h_poly.clone()) {
            return Err(DeepBallError::Malformed("h_poly does not match the top of the tower".into()));
        }
        let base = ext.base().expect("modulus present").clone();
        let params = DeepBallParams::new(&ext, Poly::from_indices(&base, &self.f)?, self.g)?;
        if params.k() != self.k || params.radius() != self.radius {
            return Err(DeepBallError::Malformed("k or radius inconsistent with g and h".into()));
        }
        let word = Word::new(&base, self.center.clone())?;
        if build_center(&params)? != word {
            return Err(DeepBallError::Malformed("center does not match f, h(x) and k".into()));
        }
        Ok((params, word))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rs_code::distance;

    fn ext(p: u64, h: &[u64]) -> FieldCtx {
        let fp = FieldCtx::prime(p).unwrap();
        fp.extend(&Poly::from_indices(&fp, h).unwrap()).unwrap()
    }

    #[test]
    fn center_coordinate_at_zero() {
        // h(x) = x^2 + 2 over F_5, f = 1, g = 3: u(0) = 1/2 + 0 = 3
        let e = ext(5, &[2, 0, 1]);
        let base = e.base().unwrap().clone();
        let params = DeepBallParams::new(&e, Poly::one(&base), 3).unwrap();
        let u = build_center(&params).unwrap();
        assert_eq!(u.symbols()[0], 3);
        for (i, &s) in u.symbols().iter().enumerate() {
            let a = base.elem(i as u64).unwrap();
            let h = params.h_poly().eval(&a);
            assert!(!h.is_zero());
            assert_eq!((&h.inv().unwrap() + &a).index(), s);
        }
    }

    #[test]
    fn invalid_params() {
        let e = ext(5, &[2, 0, 1]);
        let base = e.base().unwrap().clone();
        let x2 = Poly::monomial(base.one(), 2);
        assert!(matches!(DeepBallParams::new(&e, x2, 3), Err(DeepBallError::InvalidParams(_))));
        assert!(DeepBallParams::new(&e, Poly::zero(&base), 3).is_err());
        assert!(DeepBallParams::new(&e, Poly::one(&base), 2).is_err());
        assert!(DeepBallParams::new(&e, Poly::one(&base), 5).is_err());
        assert!(DeepBallParams::new(&base, Poly::one(&base), 3).is_err());
    }

    #[test]
    fn explicit_factor_set_example() {
        // q = 5, h(x) = x^2 + x + 1, g = 3, f = canonical form of alpha(alpha+1)(alpha+2)
        let e = ext(5, &[1, 1, 1]);
        let base = e.base().unwrap().clone();
        let s = FactorSet::new(vec![0, 1, 2]).unwrap();
        let beta = s.product(&e).unwrap();
        let params = DeepBallParams::for_target(&beta, 3).unwrap();
        let c = factors_to_codeword(&s, &params).unwrap();
        // oracle: x(x+1)(x+2) = x^3 + 3x^2 + 2x; divide by h and strip x^{g-h}
        let n = Poly::from_indices(&base, &[0, 2, 3, 1]).unwrap();
        let (t, r) = n.div_rem(&params.h_poly()).unwrap();
        assert_eq!(r, *params.f());
        assert_eq!(c, &Poly::x(&base) - &t);
        assert_eq!(codeword_to_factors(&c, &params).unwrap(), Some(s));
        let code = params.code();
        let u = build_center(&params).unwrap();
        assert_eq!(distance(&code.encode(&c).unwrap(), &u).unwrap(), 5 - 3);
    }

    #[test]
    fn wrong_product_is_rejected() {
        let e = ext(5, &[1, 1, 1]);
        let base = e.base().unwrap().clone();
        let params = DeepBallParams::new(&e, Poly::one(&base), 3).unwrap();
        let s = FactorSet::new(vec![0, 1, 2]).unwrap();
        assert_ne!(s.product(&e).unwrap(), params.target());
        assert_eq!(factors_to_codeword(&s, &params).unwrap_err(), DeepBallError::ProductMismatch);
        assert!(FactorSet::new(vec![1, 1, 2]).is_err());
        assert!(matches!(
            factors_to_codeword(&FactorSet::new(vec![0, 1]).unwrap(), &params),
            Err(DeepBallError::BadFactorSet(_))
        ));
    }

    #[test]
    fn repeated_root_gives_no_factorization() {
        // scan q = 5 instances for one where c = 0 yields N(x) with a repeated root
        let e = ext(5, &[2, 0, 1]);
        let base = e.base().unwrap().clone();
        let mut found = false;
        for fi in 1..25u64 {
            let f = Poly::from_indices(&base, &[fi % 5, fi / 5]).unwrap();
            let params = DeepBallParams::new(&e, f.clone(), 3).unwrap();
            let n = &f + &(&Poly::x(&base) * &params.h_poly());
            let g = Poly::gcd(&n, &n.derivative());
            if g.degree().unwrap_or(0) >= 1 {
                assert_eq!(codeword_to_factors(&Poly::zero(&base), &params).unwrap(), None);
                found = true;
            }
        }
        assert!(found);
    }

    #[test]
    fn center_record_roundtrip() {
        let e = ext(7, &[1, 0, 1]);
        let base = e.base().unwrap().clone();
        let params = DeepBallParams::new(&e, Poly::x(&base), 4).unwrap();
        let rec = CenterRecord::build(&params).unwrap();
        assert_eq!(rec.radius, 3);
        let json = serde_json::to_string(&rec).unwrap();
        let back: CenterRecord = serde_json::from_str(&json).unwrap();
        let (p2, w) = back.load().unwrap();
        assert_eq!(w.symbols(), rec.center.as_slice());
        assert_eq!(p2.g(), 4);
        let mut bad = rec.clone();
        bad.center[0] = (bad.center[0] + 1) % 7;
        assert!(bad.load().is_err());
    }
}
