//! Explicit parameter families: positive rate `c` over `q = q1^2`, relative
//! radius `rho` over a prime power `q` with many codewords, and the general
//! composite `q = q1^m` parameterization behind both.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{checked_pow, iroot_ceil, iroot_floor, is_prime_power, isqrt_u64, prime_power};
use crate::deep_ball::{build_center, DeepBallError, DeepBallParams};
use crate::factor_oracle::{n_composite_formula, n_formula, power_below, BoundRecord, BoundValue, OracleError};
use crate::field::{FieldCtx, FieldError, FieldSpec};
use crate::poly::Poly;
use crate::real::{self, Bracket};
use crate::rs_code::Word;

/// Irreducible candidates examined before giving up on a generating `h(x)`.
const H_SEARCH_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("constraint unsatisfiable: {binding} ({detail})")]
    ConstraintUnsatisfiable { binding: String, detail: String },
    #[error("no irreducible h(x) of degree {h} has a root generating over F_{q1}")]
    SubfieldGenerationFailure { q1: u64, h: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("record check failed: {0}")]
    RecordMismatch(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    DeepBall(#[from] DeepBallError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

fn unsat(binding: &str, detail: String) -> ConstructionError {
    ConstructionError::ConstraintUnsatisfiable { binding: binding.to_string(), detail }
}

/// Prime powers in increasing order: 2, 3, 4, 5, 7, 8, 9, 11, ...
#[derive(Debug, Clone)]
pub struct PrimePowerStream {
    next: u64,
}

impl Default for PrimePowerStream {
    fn default() -> Self {
        PrimePowerStream { next: 2 }
    }
}

impl Iterator for PrimePowerStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while !is_prime_power(self.next) {
            self.next += 1;
        }
        self.next += 1;
        Some(self.next - 1)
    }
}

/// The `i`-th prime power, 1-based.
pub fn nth_prime_power(i: u64) -> u64 {
    assert!(i >= 1, "prime powers are indexed from 1");
    PrimePowerStream::default().nth(i as usize - 1).expect("infinite stream")
}

/// Least prime power `>= n`.
pub fn next_prime_power(mut n: u64) -> u64 {
    n = n.max(2);
    while !is_prime_power(n) {
        n += 1;
    }
    n
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn floor_mul(c: &BigRational, q: u64) -> u64 {
    (c * rat(q)).floor().to_integer().to_u64().expect("0 < c < 1")
}

fn rational_record(r: &BigRational) -> BoundRecord {
    BoundValue(r.clone()).to_record()
}

fn check_unit_interval(name: &str, c: &BigRational) -> Result<(), ConstructionError> {
    if !(c.is_positive() && *c < BigRational::one()) {
        return Err(ConstructionError::InvalidArgument(format!("{name} must lie strictly between 0 and 1, got {c}")));
    }
    Ok(())
}

/// `lhs <= rhs` for real brackets refined until disjoint.
fn certify_le(lhs: impl Fn(usize) -> Bracket, rhs: impl Fn(usize) -> Bracket) -> Result<bool, ConstructionError> {
    real::decide(|t| match lhs(t).compare(&rhs(t)) {
        Some(Ordering::Greater) => Some(false),
        Some(_) => Some(true),
        None => None,
    })
    .ok_or_else(|| ConstructionError::InvalidArgument("inequality undecided at the available precision".into()))
}

/// One named inequality and whether it holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub holds: bool,
}

fn check(name: &str, holds: bool) -> CheckRecord {
    CheckRecord { name: name.to_string(), holds }
}

pub const EQ1_LOG: &str = "(2h-1)^(2+eps) <= q1";
pub const EQ1_SQUARE: &str = "(4/eps+2)(2h+1)^2 <= q1";
pub const EQ1_RATE_LOW: &str = "c^(-2/3) <= q1";
pub const EQ1_RATE_HIGH: &str = "(1-c)^(-1) <= q1";

// c^(-2/(2m-1)) <= q1  <=>  den^2 <= q1^(2m-1) num^2
fn rate_low_holds(q1: u64, m: u64, c: &BigRational) -> bool {
    let (num, den) = (c.numer().magnitude().clone(), c.denom().magnitude().clone());
    &den * &den <= BigUint::from(q1).pow(2 * m as u32 - 1) * &num * &num
}

// (1-c)^(-1/(m-1)) <= q1  <=>  den <= q1^(m-1) (den - num)
fn rate_high_holds(q1: u64, m: u64, c: &BigRational) -> bool {
    let (num, den) = (c.numer().magnitude().clone(), c.denom().magnitude().clone());
    den.clone() <= BigUint::from(q1).pow(m as u32 - 1) * (den - num)
}

/// The four inequalities of the `m = 2` family at `eps = 1/ln q`, `q = q1^2`,
/// decided with certified logarithm brackets.
pub fn eq1_checks(q1: u64, h: usize, c: &BigRational) -> Result<Vec<CheckRecord>, ConstructionError> {
    let q = BigUint::from(q1) * BigUint::from(q1);
    let ln_q = |t| real::ln_uint(&q, t);
    let ln_q1 = |t| real::ln_uint(&BigUint::from(q1), t);
    let two_h_minus = BigUint::from(2 * h as u64 - 1);
    // (2 + 1/ln q) ln(2h-1) <= ln q1
    let log_ok = certify_le(
        |t| Bracket::int(2).add(&ln_q(t).recip()).mul(&real::ln_uint(&two_h_minus, t)),
        ln_q1,
    )?;
    // (4 ln q + 2)(2h+1)^2 <= q1
    let sq = (2 * h as i64 + 1).pow(2);
    let square_ok = certify_le(
        |t| Bracket::int(4).mul(&ln_q(t)).add(&Bracket::int(2)).mul(&Bracket::int(sq)),
        |_| Bracket::int(q1 as i64),
    )?;
    Ok(vec![
        check(EQ1_LOG, log_ok),
        check(EQ1_SQUARE, square_ok),
        check(EQ1_RATE_LOW, rate_low_holds(q1, 2, c)),
        check(EQ1_RATE_HIGH, rate_high_holds(q1, 2, c)),
    ])
}

/// `1/ln q` truncated to 40 decimal places (the exact value is irrational).
pub fn inverse_ln(q: u64) -> BigRational {
    let b = real::ln_uint(&BigUint::from(q), 64).recip();
    let scale = BigInt::from(10u32).pow(40);
    BigRational::new((b.midpoint() * rat(scale.clone())).floor().to_integer(), scale)
}

/// Which lower bound on `g` in terms of `h` the relative-radius family uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum GForm {
    /// `ceil((2/eps + 2)(h + 1)) <= g`
    #[default]
    #[serde(rename = "2/eps")]
    TwoOverEps,
    /// `(4/eps + 2)(h + 1) <= g`, the hypothesis of the counting bound
    #[serde(rename = "4/eps")]
    FourOverEps,
}

impl GForm {
    fn numerator(self) -> i64 {
        match self {
            GForm::TwoOverEps => 2,
            GForm::FourOverEps => 4,
        }
    }

    pub fn binding(self) -> &'static str {
        match self {
            GForm::TwoOverEps => "ceil((2/eps+2)(h+1)) <= g with h >= 2",
            GForm::FourOverEps => "ceil((4/eps+2)(h+1)) <= g with h >= 2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Thm12,
    Thm13,
    Composite,
}

/// A complete output of one of the families, center included.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionRecord {
    pub mode: Mode,
    pub i: Option<u64>,
    pub c: Option<BoundRecord>,
    pub rho: Option<BoundRecord>,
    pub p: u64,
    pub q: u64,
    pub q1: Option<u64>,
    pub m: Option<u64>,
    pub h: usize,
    /// Tower `F_p -> ... -> F_q -> F_q[x]/(h(x))`; its last modulus is `h(x)`.
    pub field: FieldSpec,
    pub h_poly: Vec<u64>,
    pub f: Vec<u64>,
    pub g: usize,
    pub g1: Option<u64>,
    pub g2: Option<u64>,
    /// Number of linear factors behind the center; the center sits at distance `q - center_factors` from the code.
    pub center_factors: usize,
    pub k: usize,
    pub radius: usize,
    pub eps: BoundRecord,
    pub eps_note: String,
    pub log_base: String,
    pub g_form: Option<GForm>,
    pub checks: Vec<CheckRecord>,
    pub waivers: Vec<String>,
    pub bound: BoundRecord,
    pub center: Vec<u64>,
}

impl ConstructionRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    pub fn from_json(s: &str) -> Result<ConstructionRecord, ConstructionError> {
        serde_json::from_str(s).map_err(|e| ConstructionError::InvalidArgument(format!("bad record: {e}")))
    }

    pub fn eps_value(&self) -> Result<BigRational, ConstructionError> {
        Ok(BoundValue::from_record(&self.eps)?.0)
    }

    pub fn bound_value(&self) -> Result<BoundValue, ConstructionError> {
        Ok(BoundValue::from_record(&self.bound)?)
    }
}

/// `F_p -> F_{q1} -> F_{q1^m}` with canonical-first irreducibles; returns
/// `(F_{q1}, F_q)`.
fn composite_tower(q1: u64, m: u64) -> Result<(FieldCtx, FieldCtx), ConstructionError> {
    let (p, e1) = prime_power(q1).ok_or_else(|| ConstructionError::InvalidArgument(format!("{q1} is not a prime power")))?;
    let fp = FieldCtx::prime(p)?;
    let f_q1 = if e1 > 1 { fp.extend(&Poly::find_irreducible(&fp, e1 as usize))? } else { fp };
    let f_q = f_q1.extend(&Poly::find_irreducible(&f_q1, m as usize))?;
    Ok((f_q1, f_q))
}

/// First degree-`h` irreducible over `F_q` in canonical order whose root has
/// degree `mh` over `F_{q1}`.
fn generating_extension(f_q: &FieldCtx, f_q1: &FieldCtx, m: u64, h: usize) -> Result<FieldCtx, ConstructionError> {
    for cand in Poly::irreducibles(f_q, h).take(H_SEARCH_CAP) {
        let ext = f_q.extend(&cand)?;
        if FieldCtx::min_poly_degree(&ext.gen(), f_q1)? == m as usize * h {
            return Ok(ext);
        }
    }
    Err(ConstructionError::SubfieldGenerationFailure { q1: f_q1.order(), h })
}

fn center_of(ext: &FieldCtx, factors: usize) -> Result<(DeepBallParams, Word), ConstructionError> {
    let base = ext.base().expect("extension").clone();
    let params = DeepBallParams::new(ext, Poly::one(&base), factors)?;
    let center = build_center(&params)?;
    Ok((params, center))
}

/// Parameters of the rate-`c` family at index `i`, without the field search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thm12Params {
    pub q1: u64,
    pub q: u64,
    pub h: usize,
    pub checks: Vec<CheckRecord>,
}

/// `q1` = `i`-th prime power, `q = q1^2`, `h` the largest integer `>= 2`
/// passing every inequality; otherwise the first failing inequality at `h = 2`.
pub fn thm12_params(i: u64, c: &BigRational) -> Result<Thm12Params, ConstructionError> {
    check_unit_interval("c", c)?;
    if i == 0 {
        return Err(ConstructionError::InvalidArgument("i starts at 1".into()));
    }
    let q1 = nth_prime_power(i);
    let q = checked_pow(q1, 2).ok_or_else(|| ConstructionError::InvalidArgument("q overflows".into()))?;
    let first = eq1_checks(q1, 2, c)?;
    if let Some(bad) = first.iter().find(|ch| !ch.holds) {
        return Err(unsat(&bad.name, format!("fails at h = 2 for q1 = {q1}, q = {q}, eps = 1/ln q")));
    }
    let (mut h, mut checks) = (2, first);
    loop {
        let next = eq1_checks(q1, h + 1, c)?;
        if next.iter().any(|ch| !ch.holds) {
            break;
        }
        h += 1;
        checks = next;
    }
    Ok(Thm12Params { q1, q, h, checks })
}

/// The rate-`c` family: `q = q1^2`, `eps = 1/ln q`, `f = 1`, `g = floor(cq)`,
/// `k = g - h`, radius `q - g`, and `h(x)` of degree `h` whose root generates
/// `F_{q^h}` over `F_{q1}`.
pub fn construct_thm12(i: u64, c: &BigRational) -> Result<ConstructionRecord, ConstructionError> {
    let Thm12Params { q1, q, h, checks } = thm12_params(i, c)?;
    let g = floor_mul(c, q);
    let g1 = isqrt_u64(q1);
    if g < g1 || g - g1 > q - q1 {
        return Err(unsat("0 <= floor(cq) - floor(sqrt(q1)) <= q - q1", format!("floor(cq) = {g}, q = {q}")));
    }
    let g2 = g - g1;
    if g as usize <= h {
        return Err(unsat("h < floor(cq)", format!("h = {h}, floor(cq) = {g}")));
    }
    let (f_q1, f_q) = composite_tower(q1, 2)?;
    let ext = generating_extension(&f_q, &f_q1, 2, h)?;
    let (params, center) = center_of(&ext, g as usize)?;
    let bound = n_composite_formula(q1, 2, g1, g2, h as u64)?;
    Ok(ConstructionRecord {
        mode: Mode::Thm12,
        i: Some(i),
        c: Some(rational_record(c)),
        rho: None,
        p: ext.characteristic(),
        q,
        q1: Some(q1),
        m: Some(2),
        h,
        field: ext.spec(),
        h_poly: params.h_poly().to_indices(),
        f: params.f().to_indices(),
        g: g as usize,
        g1: Some(g1),
        g2: Some(g2),
        center_factors: g as usize,
        k: params.k(),
        radius: params.radius(),
        eps: rational_record(&inverse_ln(q)),
        eps_note: "1/ln q truncated to 40 decimals; inequalities decided with certified brackets of ln".into(),
        log_base: "natural".into(),
        g_form: None,
        checks,
        waivers: vec![],
        bound: bound.to_record(),
        center: center.symbols().to_vec(),
    })
}

/// `eps` with `rho = (2 eps + 4) / (3 eps + 4)`.
pub fn eps_for_rho(rho: &BigRational) -> Result<BigRational, ConstructionError> {
    let two_thirds = BigRational::new(2.into(), 3.into());
    if !(*rho > two_thirds && *rho < BigRational::one()) {
        return Err(ConstructionError::InvalidArgument(format!("rho must lie in (2/3, 1), got {rho}")));
    }
    Ok(rat(4) * (BigRational::one() - rho) / (rat(3) * rho - rat(2)))
}

/// Least integer `n` with `n > (2(2+eps) i / eps)^{2+eps}`, exactly.
pub fn thm13_threshold(i: u64, eps: &BigRational) -> BigUint {
    let (a, b) = (eps.numer().magnitude().clone(), eps.denom().magnitude().clone());
    // base = 2 i (2b + a) / a, exponent (2b + a) / b
    let e = (BigUint::from(2u32) * &b + &a).to_u32().expect("small exponent");
    let bn = BigUint::from(2 * i) * (BigUint::from(2u32) * &b + &a);
    let bd = a;
    let num = bn.pow(e);
    let den = bd.pow(e);
    let bb = b.to_u32().expect("small denominator");
    // n^b > num/den
    let r = iroot_floor(&(&num / &den), bb);
    if r.pow(bb) * &den > num {
        r
    } else {
        r + 1u32
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thm13Params {
    pub eps: BigRational,
    pub q: u64,
    pub g: usize,
    pub h: usize,
    pub k: usize,
    pub radius: usize,
    pub bound: BoundValue,
}

/// Relative-radius parameters at index `i`: `q` the least prime power above
/// the threshold, `g = ceil(q^{1/(2+eps)})`, `h` the largest allowed by `form`.
pub fn thm13_params(i: u64, rho: &BigRational, form: GForm) -> Result<Thm13Params, ConstructionError> {
    let eps = eps_for_rho(rho)?;
    if i == 0 {
        return Err(ConstructionError::InvalidArgument("i starts at 1".into()));
    }
    let t = thm13_threshold(i, &eps);
    let q = next_prime_power(t.to_u64().ok_or_else(|| ConstructionError::InvalidArgument("q overflows".into()))?);
    let (a, b) = (eps.numer().to_u32().expect("small"), eps.denom().to_u32().expect("small"));
    let g = iroot_ceil(&BigUint::from(q).pow(b), 2 * b + a).to_usize().expect("small g");
    // largest h with (K/eps + 2)(h + 1) <= g
    let slope = rat(form.numerator()) / &eps + rat(2);
    let h_plus = (rat(g as i64) / &slope).floor().to_integer().to_i64().expect("small");
    let h = h_plus - 1;
    if h < 2 {
        return Err(unsat(form.binding(), format!("i = {i}, q = {q}, g = {g} allows only h = {h}")));
    }
    let h = h as usize;
    let k = q as usize - g - h;
    let radius = (rho * rat((q as usize - k + 1) as i64)).floor().to_integer().to_usize().expect("small");
    if radius < g {
        return Err(unsat("g <= floor(rho(q-k+1))", format!("i = {i}, g = {g}, h = {h}, radius = {radius}")));
    }
    let bound = n_formula(q, g as u64, h as u64);
    if bound.0 < rat(BigInt::from(q).pow(i as u32)) {
        return Err(unsat("N(g,h) >= q^i", format!("i = {i}, q = {q}, g = {g}, h = {h}")));
    }
    Ok(Thm13Params { eps, q, g, h, k, radius, bound })
}

/// The relative-radius family. The center uses `q - g` linear factors, so
/// its distance to `RS_q[q, q-g-h]` is `g`, at most the stated radius.
pub fn construct_thm13(i: u64, rho: &BigRational, form: GForm) -> Result<ConstructionRecord, ConstructionError> {
    let Thm13Params { eps, q, g, h, k, radius, bound } = thm13_params(i, rho, form)?;
    let (p, e) = prime_power(q).expect("prime power");
    let fp = FieldCtx::prime(p)?;
    let f_q = if e > 1 { fp.extend(&Poly::find_irreducible(&fp, e as usize))? } else { fp };
    let ext = f_q.extend(&Poly::find_irreducible(&f_q, h))?;
    let factors = q as usize - g;
    let (params, center) = center_of(&ext, factors)?;
    debug_assert_eq!(params.k(), k);
    let checks = vec![
        check("h >= 2", h >= 2),
        check("g <= floor(rho(q-k+1))", g <= radius),
        check("N(g,h) >= q^i", true),
    ];
    Ok(ConstructionRecord {
        mode: Mode::Thm13,
        i: Some(i),
        c: None,
        rho: Some(rational_record(rho)),
        p,
        q,
        q1: None,
        m: None,
        h,
        field: ext.spec(),
        h_poly: params.h_poly().to_indices(),
        f: params.f().to_indices(),
        g,
        g1: None,
        g2: None,
        center_factors: factors,
        k,
        radius,
        eps: rational_record(&eps),
        eps_note: "exact".into(),
        log_base: "natural".into(),
        g_form: Some(form),
        checks,
        waivers: vec![],
        bound: bound.to_record(),
        center: center.symbols().to_vec(),
    })
}

/// Strict mode enforces every inequality (with `eps` given or searched over
/// multiples of 1/4 up to 16); demo mode records the failing ones as waivers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompositeMode {
    Strict(Option<BigRational>),
    Demo,
}

pub const COMPOSITE_LOG: &str = "(mh-1)^(2+eps) <= q1";
pub const COMPOSITE_SQUARE: &str = "(4/eps+2)(mh+1)^2 <= q1";
pub const COMPOSITE_RATE_LOW: &str = "c^(-2/(2m-1)) <= q1";
pub const COMPOSITE_RATE_HIGH: &str = "(1-c)^(-1/(m-1)) <= q1";

/// The general-`m` inequalities for a rational `eps`, decided exactly.
pub fn composite_checks(q1: u64, m: u64, h: usize, c: &BigRational, eps: &BigRational) -> Vec<CheckRecord> {
    let mh = m * h as u64;
    let square = (rat(4) / eps + rat(2)) * rat((mh + 1) * (mh + 1)) <= rat(q1);
    vec![
        check(COMPOSITE_LOG, power_below(q1, mh - 1, eps)),
        check(COMPOSITE_SQUARE, square),
        check(COMPOSITE_RATE_LOW, rate_low_holds(q1, m, c)),
        check(COMPOSITE_RATE_HIGH, rate_high_holds(q1, m, c)),
    ]
}

pub fn construct_composite(q1: u64, m: u64, c: &BigRational, h: usize, mode: CompositeMode) -> Result<ConstructionRecord, ConstructionError> {
    check_unit_interval("c", c)?;
    if m < 2 || h < 2 {
        return Err(ConstructionError::InvalidArgument(format!("need m >= 2 and h >= 2, got m = {m}, h = {h}")));
    }
    if !is_prime_power(q1) {
        return Err(ConstructionError::InvalidArgument(format!("{q1} is not a prime power")));
    }
    let q = checked_pow(q1, m as u32).ok_or_else(|| ConstructionError::InvalidArgument("q overflows".into()))?;
    let gc = floor_mul(c, q);
    let g1 = iroot_floor(&BigUint::from(q), 2 * m as u32).to_u64().expect("fits");
    if gc < g1 {
        return Err(unsat("0 <= floor(cq) - floor(q^(1/2m))", format!("floor(cq) = {gc} < {g1}")));
    }
    let g2 = gc - g1;
    if g2 > q - q1 {
        return Err(unsat("floor(cq) - floor(q^(1/2m)) <= q - q^(1/m)", format!("g2 = {g2} > {}", q - q1)));
    }
    if gc as usize <= h {
        return Err(unsat("h < floor(cq)", format!("h = {h}, floor(cq) = {gc}")));
    }
    let (eps, checks, waivers) = match &mode {
        CompositeMode::Strict(Some(eps)) => {
            if !eps.is_positive() {
                return Err(ConstructionError::InvalidArgument("eps must be positive".into()));
            }
            let checks = composite_checks(q1, m, h, c, eps);
            if let Some(bad) = checks.iter().find(|ch| !ch.holds) {
                return Err(unsat(&bad.name, format!("q1 = {q1}, m = {m}, h = {h}, eps = {eps}")));
            }
            (eps.clone(), checks, vec![])
        }
        CompositeMode::Strict(None) => {
            let found = (1..=64)
                .map(|j| BigRational::new(j.into(), 4.into()))
                .map(|e| {
                    let ch = composite_checks(q1, m, h, c, &e);
                    (e, ch)
                })
                .find(|(_, ch)| ch.iter().all(|x| x.holds));
            let Some((eps, checks)) = found else {
                let ch = composite_checks(q1, m, h, c, &BigRational::one());
                let bad = ch.iter().find(|x| !x.holds).map(|x| x.name.clone()).unwrap_or_else(|| COMPOSITE_SQUARE.into());
                return Err(unsat(&bad, format!("no eps = j/4, 1 <= j <= 64, satisfies all four for q1 = {q1}, m = {m}, h = {h}")));
            };
            (eps, checks, vec![])
        }
        CompositeMode::Demo => {
            let eps = BigRational::one();
            let checks = composite_checks(q1, m, h, c, &eps);
            let waivers = checks.iter().filter(|x| !x.holds).map(|x| x.name.clone()).collect();
            (eps, checks, waivers)
        }
    };
    let (f_q1, f_q) = composite_tower(q1, m)?;
    let ext = generating_extension(&f_q, &f_q1, m, h)?;
    let (params, center) = center_of(&ext, gc as usize)?;
    let bound = n_composite_formula(q1, m, g1, g2, h as u64)?;
    Ok(ConstructionRecord {
        mode: Mode::Composite,
        i: None,
        c: Some(rational_record(c)),
        rho: None,
        p: ext.characteristic(),
        q,
        q1: Some(q1),
        m: Some(m),
        h,
        field: ext.spec(),
        h_poly: params.h_poly().to_indices(),
        f: params.f().to_indices(),
        g: gc as usize,
        g1: Some(g1),
        g2: Some(g2),
        center_factors: gc as usize,
        k: params.k(),
        radius: params.radius(),
        eps: rational_record(&eps),
        eps_note: if matches!(mode, CompositeMode::Demo) { "demo placeholder".into() } else { "exact".into() },
        log_base: "natural".into(),
        g_form: None,
        checks,
        waivers,
        bound: bound.to_record(),
        center: center.symbols().to_vec(),
    })
}

/// Smallest `i` in `1..=max_i` for which the rate family has an `h >= 2`.
pub fn smallest_feasible_thm12(c: &BigRational, max_i: u64) -> Option<u64> {
    (1..=max_i).find(|&i| thm12_params(i, c).is_ok())
}

pub fn smallest_feasible_thm13(rho: &BigRational, form: GForm, max_i: u64) -> Option<u64> {
    (1..=max_i).find(|&i| thm13_params(i, rho, form).is_ok())
}

/// Center recomputed pointwise as `f(a) * h(a)^{-1} + a^k`, with each
/// polynomial evaluated as a sum of powers and each inverse taken separately.
pub fn recompute_center(ext: &FieldCtx, f: &Poly, k: usize) -> Result<Vec<u64>, ConstructionError> {
    let base = ext.base().ok_or_else(|| ConstructionError::InvalidArgument("not an extension".into()))?;
    let hp = ext.modulus().expect("extension");
    let eval = |p: &Poly, a: &crate::field::FieldElem| {
        p.coeffs().iter().enumerate().fold(base.zero(), |acc, (j, cj)| &acc + &(cj * &a.pow(j as u128)))
    };
    base.elements()
        .map(|a| {
            let v = &(&eval(f, &a) * &eval(&hp, &a).inv()?) + &a.pow(k as u128);
            Ok(v.index())
        })
        .collect()
}

/// Re-derive everything a record claims and report each check.
pub fn verify_record(rec: &ConstructionRecord) -> Result<Vec<CheckRecord>, ConstructionError> {
    let ext = FieldCtx::from_spec(&rec.field)?;
    let base = ext.base().ok_or_else(|| ConstructionError::RecordMismatch("tower has no extension".into()))?.clone();
    let mut out = vec![];
    out.push(check("h(x) is the top modulus", ext.modulus().map(|m| m.to_indices()) == Some(rec.h_poly.clone())));
    out.push(check("deg h(x) = h", ext.degree() == rec.h));
    out.push(check("q matches the tower", base.order() == rec.q));
    let f = Poly::from_indices(&base, &rec.f)?;
    let center = recompute_center(&ext, &f, rec.k)?;
    out.push(check("center recomputed pointwise", center == rec.center));
    out.push(check("k = center_factors - h", rec.center_factors == rec.k + rec.h));
    let q = rec.q;
    let to_rat = |r: &BoundRecord| BoundValue::from_record(r).map(|b| b.0);
    match rec.mode {
        Mode::Thm12 | Mode::Composite => {
            let c = to_rat(rec.c.as_ref().ok_or_else(|| ConstructionError::RecordMismatch("missing c".into()))?)?;
            let gc = floor_mul(&c, q) as usize;
            let q1 = rec.q1.ok_or_else(|| ConstructionError::RecordMismatch("missing q1".into()))?;
            let m = rec.m.ok_or_else(|| ConstructionError::RecordMismatch("missing m".into()))?;
            let f_q1 = if prime_power(q1).map(|(_, e)| e) == Some(1) {
                base.prime_field()
            } else {
                // the tower is F_p -> F_q1 -> F_q, so F_q1 is the base of F_q
                base.base().cloned().ok_or_else(|| ConstructionError::RecordMismatch("missing F_q1 level".into()))?
            };
            out.push(check("q = q1^m", checked_pow(q1, m as u32) == Some(q)));
            out.push(check("k = floor(cq) - h", rec.k + rec.h == gc));
            out.push(check("radius = q - floor(cq)", rec.radius as u64 == q - gc as u64));
            out.push(check("k + radius + h = q", (rec.k + rec.radius + rec.h) as u64 == q));
            let mp = FieldCtx::min_poly_degree(&ext.gen(), &f_q1)?;
            out.push(check("min_poly_degree(alpha, F_q1) = mh", mp == m as usize * rec.h));
            if rec.mode == Mode::Thm12 {
                for ch in eq1_checks(q1, rec.h, &c)? {
                    out.push(ch);
                }
                let too_big = eq1_checks(q1, rec.h + 1, &c)?.iter().all(|x| x.holds);
                out.push(check("h is the largest feasible", !too_big));
            } else {
                let eps = to_rat(&rec.eps)?;
                for ch in composite_checks(q1, m, rec.h, &c, &eps) {
                    let waived = rec.waivers.contains(&ch.name);
                    out.push(check(&ch.name, ch.holds || waived));
                }
            }
            let g1 = rec.g1.unwrap_or_default();
            let g2 = rec.g2.unwrap_or_default();
            let bound = n_composite_formula(q1, m, g1, g2, rec.h as u64)?;
            out.push(check("bound recomputed", bound.to_record() == rec.bound));
        }
        Mode::Thm13 => {
            let rho = to_rat(rec.rho.as_ref().ok_or_else(|| ConstructionError::RecordMismatch("missing rho".into()))?)?;
            let i = rec.i.ok_or_else(|| ConstructionError::RecordMismatch("missing i".into()))?;
            let eps = eps_for_rho(&rho)?;
            out.push(check("eps from rho", to_rat(&rec.eps)? == eps));
            let t = thm13_threshold(i, &eps);
            let least = BigUint::from(q) >= t && (t.to_u64().expect("fits")..q).all(|n| !is_prime_power(n));
            out.push(check("q is the least prime power above the threshold", least));
            out.push(check("k = q - g - h", rec.k as u64 + rec.g as u64 + rec.h as u64 == q));
            let radius = (&rho * rat((q as usize - rec.k + 1) as i64)).floor().to_integer();
            out.push(check("radius = floor(rho(q-k+1))", radius == BigInt::from(rec.radius)));
            out.push(check("radius >= g", rec.radius >= rec.g));
            out.push(check("h >= 2", rec.h >= 2));
            let bound = n_formula(q, rec.g as u64, rec.h as u64);
            out.push(check("bound recomputed", bound.to_record() == rec.bound));
            out.push(check("N(g,h) >= q^i", bound.0 >= rat(BigInt::from(q).pow(i as u32))));
        }
    }
    Ok(out)
}
