//! Discrete logarithms in `F_{q^h}^*` from a Reed-Solomon decoder.
//!
//! For an exponent `i`, the canonical representative `f` of `b^i` defines a
//! received word `u_f`; any codeword at distance `q - g` from it yields a set
//! `S` with `b^i = prod_{a in S} (alpha + a)`, a linear relation among the
//! unknown logarithms of the factor base. Enough relations pin those down
//! modulo `q^h - 1`, and one more decoding of the target itself finishes.

use std::fmt::Write as _;
use std::sync::Arc;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arith::{factorize, inv_mod, mul_mod};
use crate::deep_ball::{codeword_to_factors, build_center, DeepBallError, DeepBallParams, FactorSet};
use crate::field::{FieldCtx, FieldElem, FieldError};
use crate::rs_code::{Decoder, RsError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DlogError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("exponent {i} outside 0..{n}")]
    ExponentOutOfRange { i: u64, n: u64 },
    #[error("no factorization into {g} distinct linear factors found for the target")]
    NoFactorization { g: usize },
    #[error("linear system is singular: {0}")]
    Singular(String),
    #[error("relations are inconsistent")]
    Inconsistent,
    #[error("gave up after {0} attempts")]
    Exhausted(usize),
    #[error("brute-force search over {0} elements exceeds the cap")]
    CapExceeded(u64),
    #[error("malformed relation record: {0}")]
    Malformed(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    DeepBall(#[from] DeepBallError),
    #[error(transparent)]
    Rs(#[from] RsError),
}

/// Field, primitive base `b`, factor count `g`, decoder and seed.
#[derive(Clone)]
pub struct DlogInstance {
    ext: FieldCtx,
    base: FieldElem,
    g: usize,
    decoder: Arc<dyn Decoder + Send>,
    pub seed: u64,
    /// Relations gathered per solve attempt; `q + 8` by default.
    pub relations: usize,
    pub retries: usize,
    pub threads: usize,
}

impl std::fmt::Debug for DlogInstance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DlogInstance")
            .field("ext", &self.ext)
            .field("base", &self.base)
            .field("g", &self.g)
            .field("seed", &self.seed)
            .finish_non_exhaustive()
    }
}

impl DlogInstance {
    /// Uses the least primitive element of `ext` as base.
    pub fn new(ext: &FieldCtx, g: usize, decoder: Arc<dyn Decoder + Send>, seed: u64) -> Result<DlogInstance, DlogError> {
        DlogInstance::with_base(ext.generator(), g, decoder, seed)
    }

    pub fn with_base(base: FieldElem, g: usize, decoder: Arc<dyn Decoder + Send>, seed: u64) -> Result<DlogInstance, DlogError> {
        let ext = base.ctx().clone();
        let Some(fq) = ext.base() else {
            return Err(DlogError::InvalidInstance("field must be an extension of F_q".into()));
        };
        let (q, h) = (fq.order(), ext.degree());
        if !(h < g && (g as u64) < q) {
            return Err(DlogError::InvalidInstance(format!("need h < g < q, got h={h}, g={g}, q={q}")));
        }
        let n = ext.order() - 1;
        if base.is_zero() || factorize(n).iter().any(|&(r, _)| base.pow((n / r) as u128).is_one()) {
            return Err(DlogError::InvalidInstance("base is not a generator".into()));
        }
        Ok(DlogInstance {
            ext,
            base,
            g,
            decoder,
            seed,
            relations: q as usize + 8,
            retries: 5,
            threads: 1,
        })
    }

    pub fn field(&self) -> &FieldCtx {
        &self.ext
    }

    pub fn base(&self) -> &FieldElem {
        &self.base
    }

    pub fn g(&self) -> usize {
        self.g
    }

    /// Group order `q^h - 1`.
    pub fn modulus(&self) -> u64 {
        self.ext.order() - 1
    }

    fn q(&self) -> u64 {
        self.ext.base().expect("checked at construction").order()
    }
}

/// `b^i = prod_{a in S} (alpha + a)`, checked when built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    exponent: u64,
    factors: FactorSet,
}

impl Relation {
    pub fn new(inst: &DlogInstance, exponent: u64, factors: FactorSet) -> Result<Relation, DlogError> {
        if exponent >= inst.modulus() {
            return Err(DlogError::ExponentOutOfRange { i: exponent, n: inst.modulus() });
        }
        if factors.len() != inst.g || factors.indices().iter().any(|&a| a >= inst.q()) {
            return Err(DlogError::Malformed(format!("factor set {:?} is not a {}-subset of F_q", factors.indices(), inst.g)));
        }
        if factors.product(&inst.ext)? != inst.base.pow(exponent as u128) {
            return Err(DlogError::Malformed(format!("b^{exponent} differs from the product of its factors")));
        }
        Ok(Relation { exponent, factors })
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn factors(&self) -> &FactorSet {
        &self.factors
    }

    /// `i a_1 a_2 ... a_g`
    pub fn to_line(&self) -> String {
        let mut s = self.exponent.to_string();
        for a in self.factors.indices() {
            let _ = write!(s, " {a}");
        }
        s
    }

    pub fn from_line(inst: &DlogInstance, line: &str) -> Result<Relation, DlogError> {
        let nums: Vec<u64> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| DlogError::Malformed(line.to_string())))
            .collect::<Result<_, _>>()?;
        let (&i, rest) = nums.split_first().ok_or_else(|| DlogError::Malformed(line.to_string()))?;
        let set = FactorSet::new(rest.to_vec()).map_err(|_| DlogError::Malformed(line.to_string()))?;
        Relation::new(inst, i, set)
    }
}

pub fn relations_to_text(rels: &[Relation]) -> String {
    rels.iter().map(|r| r.to_line() + "\n").collect()
}

pub fn relations_from_text(inst: &DlogInstance, text: &str) -> Result<Vec<Relation>, DlogError> {
    text.lines().filter(|l| !l.trim().is_empty()).map(|l| Relation::from_line(inst, l)).collect()
}

/// `log_b(alpha + a)` for every `a` in `F_q`, by canonical index of `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogTable {
    pub modulus: u64,
    pub logs: Vec<u64>,
}

impl LogTable {
    pub fn get(&self, a: u64) -> u64 {
        self.logs[a as usize]
    }

    /// `b^{logs[a]} = alpha + a` for every entry.
    pub fn verify(&self, inst: &DlogInstance) -> bool {
        let alpha = inst.ext.gen();
        let fq = inst.ext.base().expect("extension");
        self.logs.len() as u64 == fq.order()
            && self.logs.iter().enumerate().all(|(a, &l)| {
                let lin = &alpha + &inst.ext.embed(&fq.elem(a as u64).expect("in range")).expect("subfield");
                inst.base.pow(l as u128) == lin
            })
    }
}

/// Decode `u_f` for `f` the representative of `target` and turn the least
/// nearest codeword into a factor set. `None` when nothing lies at distance `q - g`.
pub fn factor_target(inst: &DlogInstance, target: &FieldElem) -> Result<Option<FactorSet>, DlogError> {
    if target.is_zero() {
        return Err(DlogError::InvalidInstance("zero has no logarithm".into()));
    }
    let params = DeepBallParams::for_target(target, inst.g)?;
    let word = build_center(&params)?;
    let found = inst.decoder.decode(&params.code(), &word, params.radius())?;
    let mut best: Option<FactorSet> = None;
    for c in &found {
        if let Some(s) = codeword_to_factors(c, &params)? {
            if best.as_ref().is_none_or(|b| s < *b) {
                best = Some(s);
            }
        }
    }
    Ok(best)
}

pub fn collect_relation(inst: &DlogInstance, i: u64) -> Result<Option<Relation>, DlogError> {
    if i >= inst.modulus() {
        return Err(DlogError::ExponentOutOfRange { i, n: inst.modulus() });
    }
    match factor_target(inst, &inst.base.pow(i as u128))? {
        Some(s) => Ok(Some(Relation::new(inst, i, s)?)),
        None => Ok(None),
    }
}

// Relations for a batch of exponents, split across threads and merged in input order.
fn collect_batch(inst: &DlogInstance, exps: &[u64]) -> Result<Vec<Option<Relation>>, DlogError> {
    let threads = inst.threads.max(1).min(exps.len().max(1));
    if threads == 1 {
        return exps.iter().map(|&i| collect_relation(inst, i)).collect();
    }
    let chunk = exps.len().div_ceil(threads);
    let parts: Vec<Result<Vec<Option<Relation>>, DlogError>> = std::thread::scope(|s| {
        let handles: Vec<_> = exps
            .chunks(chunk)
            .map(|c| s.spawn(move || c.iter().map(|&i| collect_relation(inst, i)).collect()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("relation worker panicked")).collect()
    });
    let mut out = Vec::with_capacity(exps.len());
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

fn pow_u64(b: u64, e: u32) -> u64 {
    b.pow(e)
}

fn valuation(mut x: u64, p: u64, e: u32) -> u32 {
    if x == 0 {
        return e;
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

// Solve the relation system modulo p^e. Elimination keeps a pivot of least
// valuation in each column. Every relation has exactly g terms, so the
// all-ones direction t with g t = 0 (mod p^e) is never determined; it shows
// up as a pivot p^v * u that fixes its unknown only modulo p^{e-v}, or as a
// column without pivot. Those candidates are separated in the subgroup of
// order p^e, where logarithms are unique. Ambiguity beyond gcd(g, p^e)
// means the relations do not determine the table: Singular.
fn solve_prime_power(inst: &DlogInstance, rels: &[Relation], p: u64, e: u32) -> Result<Vec<u64>, DlogError> {
    let m = pow_u64(p, e);
    let nvars = inst.q() as usize;
    let mut rows: Vec<(Vec<u64>, u64)> = rels
        .iter()
        .map(|r| {
            let mut row = vec![0u64; nvars];
            for &a in r.factors.indices() {
                row[a as usize] = (row[a as usize] + 1) % m;
            }
            (row, r.exponent % m)
        })
        .collect();
    // pivot[col] = (row index, valuation)
    let mut pivot: Vec<Option<(usize, u32)>> = vec![None; nvars];
    let mut ambiguity = 1u64;
    let allowed = (inst.g as u64).gcd(&m);
    let mut top = 0;
    for col in 0..nvars {
        let best = (top..rows.len())
            .filter(|&r| rows[r].0[col] != 0)
            .min_by_key(|&r| valuation(rows[r].0[col], p, e));
        let Some(r) = best else {
            ambiguity = ambiguity.saturating_mul(m);
            if ambiguity > allowed {
                return Err(DlogError::Singular(format!("unknown {col} is free modulo {m}")));
            }
            continue;
        };
        rows.swap(top, r);
        let v = valuation(rows[top].0[col], p, e);
        let pv = pow_u64(p, v);
        ambiguity = ambiguity.saturating_mul(pv);
        if ambiguity > allowed {
            return Err(DlogError::Singular(format!("unknown {col} is fixed only modulo {} of {m}", m / pv)));
        }
        let unit_inv = inv_mod((rows[top].0[col] / pv) % m, m).expect("unit part is invertible");
        for r in top + 1..rows.len() {
            let a = rows[r].0[col];
            if a == 0 {
                continue;
            }
            let factor = mul_mod(a / pv, unit_inv, m);
            let (pivot_rows, rest) = rows.split_at_mut(r);
            let (src, src_rhs) = (&pivot_rows[top].0, pivot_rows[top].1);
            let (dst, dst_rhs) = &mut rest[0];
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = (*d + m - mul_mod(factor, s, m)) % m;
            }
            *dst_rhs = (*dst_rhs + m - mul_mod(factor, src_rhs, m)) % m;
        }
        pivot[col] = Some((top, v));
        top += 1;
    }
    if rows[top..].iter().any(|(_, rhs)| *rhs != 0) {
        return Err(DlogError::Inconsistent);
    }
    // logs mapped onto Z/p^e by raising to n / p^e
    let cof = (inst.modulus() / m) as u128;
    let gen_sub = inst.base.pow(cof);
    let alpha = inst.ext.gen();
    let fq = inst.ext.base().expect("extension");
    let separate = |col: usize, start: u64, step: u64, count: u64| -> Result<u64, DlogError> {
        let lin = &alpha + &inst.ext.embed(&fq.elem(col as u64)?)?;
        let target = lin.pow(cof);
        (0..count)
            .map(|j| start + j * step)
            .find(|&cand| gen_sub.pow(cand as u128) == target)
            .ok_or_else(|| DlogError::Singular(format!("no candidate for unknown {col} modulo {m} is consistent")))
    };
    let mut x = vec![0u64; nvars];
    for col in (0..nvars).rev() {
        match pivot[col] {
            None => x[col] = separate(col, 0, 1, m)?,
            Some((ri, v)) => {
                let (row, rhs) = &rows[ri];
                let mut t = *rhs;
                for c in col + 1..nvars {
                    t = (t + m - mul_mod(row[c], x[c], m)) % m;
                }
                let pv = pow_u64(p, v);
                if t % pv != 0 {
                    return Err(DlogError::Inconsistent);
                }
                let step = m / pv;
                let unit_inv = inv_mod((row[col] / pv) % m, m).expect("unit part is invertible");
                let base_sol = mul_mod(t / pv, unit_inv, m) % step;
                x[col] = if pv == 1 { base_sol } else { separate(col, base_sol, step, pv)? };
            }
        }
    }
    Ok(x)
}

/// Logarithms of the whole factor base from verified relations: solve modulo
/// each prime-power factor of the group order and recombine.
pub fn solve_congruences(inst: &DlogInstance, rels: &[Relation]) -> Result<LogTable, DlogError> {
    let n = inst.modulus();
    let nvars = inst.q() as usize;
    let mut logs = vec![0u64; nvars];
    let mut acc_mod = 1u64;
    for (p, e) in factorize(n) {
        let m = pow_u64(p, e);
        let part = solve_prime_power(inst, rels, p, e)?;
        // combine x = logs (mod acc_mod) with part (mod m)
        let inv = inv_mod(acc_mod % m, m).expect("coprime moduli");
        for (l, &r) in logs.iter_mut().zip(&part) {
            let diff = (r + m - *l % m) % m;
            let t = mul_mod(diff, inv, m);
            *l += acc_mod * t;
        }
        acc_mod *= m;
    }
    let table = LogTable { modulus: n, logs };
    for r in rels {
        let s = r.factors.indices().iter().fold(0u128, |s, &a| s + table.get(a) as u128);
        if (s % n as u128) as u64 != r.exponent {
            return Err(DlogError::Inconsistent);
        }
    }
    if !table.verify(inst) {
        return Err(DlogError::Singular("recovered table fails verification".into()));
    }
    Ok(table)
}

/// Transcript of one [`dlog`] run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DlogRun {
    pub answer: u64,
    pub relations: Vec<Relation>,
    pub table: LogTable,
    /// `s` with `target * b^s` the element actually decoded.
    pub shift: u64,
    pub target_factors: FactorSet,
    pub attempts: usize,
}

/// Relation collection with seeded exponents, then the table solve.
pub fn build_log_table(inst: &DlogInstance, rng: &mut ChaCha8Rng) -> Result<(Vec<Relation>, LogTable, usize), DlogError> {
    let n = inst.modulus();
    let mut rels: Vec<Relation> = vec![];
    for attempt in 1..=inst.retries.max(1) {
        let want = rels.len() + inst.relations;
        let mut budget = 50 * inst.relations;
        while rels.len() < want && budget > 0 {
            let batch = (want - rels.len()).min(budget);
            budget -= batch;
            let exps: Vec<u64> = (0..batch).map(|_| rng.gen_range(0..n)).collect();
            rels.extend(collect_batch(inst, &exps)?.into_iter().flatten());
        }
        match solve_congruences(inst, &rels) {
            Ok(t) => return Ok((rels, t, attempt)),
            Err(DlogError::Singular(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(DlogError::Exhausted(inst.retries))
}

/// Finish with a known table: decode `target * b^s` for `s = 0` then seeded
/// shifts until it factors.
pub fn dlog_with_table(inst: &DlogInstance, table: &LogTable, target: &FieldElem, rng: &mut ChaCha8Rng) -> Result<(u64, u64, FactorSet), DlogError> {
    if target.ctx() != &inst.ext {
        return Err(FieldError::ContextMismatch.into());
    }
    if target.is_zero() {
        return Err(DlogError::InvalidInstance("zero has no logarithm".into()));
    }
    let n = inst.modulus();
    let tries = 16 * inst.retries.max(1);
    for t in 0..tries {
        let s = if t == 0 { 0 } else { rng.gen_range(0..n) };
        let v = target * &inst.base.pow(s as u128);
        if let Some(set) = factor_target(inst, &v)? {
            let sum = set.indices().iter().fold(0u128, |acc, &a| acc + table.get(a) as u128);
            let x = ((sum + n as u128 - s as u128) % n as u128) as u64;
            if inst.base.pow(x as u128) != *target {
                return Err(DlogError::Inconsistent);
            }
            return Ok((x, s, set));
        }
    }
    Err(DlogError::NoFactorization { g: inst.g })
}

/// `x` with `b^x = target`, via relations from the decoder.
pub fn dlog(inst: &DlogInstance, target: &FieldElem) -> Result<DlogRun, DlogError> {
    if target.is_zero() {
        return Err(DlogError::InvalidInstance("zero has no logarithm".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(inst.seed);
    let (relations, table, attempts) = build_log_table(inst, &mut rng)?;
    let (answer, shift, target_factors) = dlog_with_table(inst, &table, target, &mut rng)?;
    Ok(DlogRun { answer, relations, table, shift, target_factors, attempts })
}

/// Least `x >= 0` with `base^x = target`, by stepping through powers.
pub fn dlog_bruteforce(base: &FieldElem, target: &FieldElem) -> Result<u64, DlogError> {
    const CAP: u64 = 1_000_000;
    let ctx = base.ctx();
    if ctx.order() > CAP {
        return Err(DlogError::CapExceeded(ctx.order()));
    }
    if target.ctx() != ctx {
        return Err(FieldError::ContextMismatch.into());
    }
    let mut cur = ctx.one();
    for x in 0..ctx.order() {
        if cur == *target {
            return Ok(x);
        }
        cur = &cur * base;
    }
    Err(DlogError::InvalidInstance("target is not a power of the base".into()))
}
