//! Extended Reed-Solomon code `RS_q[q, k]`: evaluations of every polynomial of
//! degree `< k` at all of `F_q`, coordinates in canonical element order.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldCtx, FieldElem, FieldError};
use crate::poly::Poly;

pub const DEFAULT_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RsError {
    #[error("message degree {degree} is not below the code dimension {k}")]
    DegreeTooHigh { degree: usize, k: usize },
    #[error("dimension {k} outside 1..={q}")]
    InvalidDimension { k: usize, q: u64 },
    #[error("words have different lengths or fields")]
    ContextMismatch,
    #[error("word has {got} symbols, expected {expected}")]
    BadLength { got: usize, expected: u64 },
    #[error("brute force needs {needed} codewords, cap is {cap}")]
    CapExceeded { needed: String, cap: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone)]
pub struct RsCode {
    field: FieldCtx,
    k: usize,
}

impl RsCode {
    pub fn new(field: &FieldCtx, k: usize) -> Result<RsCode, RsError> {
        if k == 0 || k as u64 > field.order() {
            return Err(RsError::InvalidDimension { k, q: field.order() });
        }
        Ok(RsCode { field: field.clone(), k })
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn length(&self) -> u64 {
        self.field.order()
    }

    pub fn min_distance(&self) -> u64 {
        self.length() - self.k as u64 + 1
    }

    /// `q^k`, or `None` if it does not fit in 64 bits.
    pub fn message_count(&self) -> Option<u64> {
        crate::arith::checked_pow(self.field.order(), self.k as u32)
    }

    /// The `n`-th message in canonical order: base-`q` digits of `n`, constant
    /// coefficient least significant.
    pub fn message(&self, mut n: u64) -> Poly {
        let q = self.field.order();
        let coeffs = (0..self.k)
            .map(|_| {
                let d = n % q;
                n /= q;
                self.field.elem_unchecked(d)
            })
            .collect();
        Poly::new(&self.field, coeffs)
    }

    pub fn encode(&self, message: &Poly) -> Result<Word, RsError> {
        if message.ctx() != &self.field {
            return Err(RsError::ContextMismatch);
        }
        if let Some(d) = message.degree() {
            if d >= self.k {
                return Err(RsError::DegreeTooHigh { degree: d, k: self.k });
            }
        }
        let symbols = self.field.elements().map(|a| message.eval(&a).index()).collect();
        Ok(Word { field: self.field.clone(), symbols })
    }

    fn check_cap(&self, cap: u64) -> Result<u64, RsError> {
        match self.message_count() {
            Some(n) if n <= cap => Ok(n),
            _ => Err(RsError::CapExceeded {
                needed: format!("{}^{}", self.field.order(), self.k),
                cap,
            }),
        }
    }

    fn check_word(&self, w: &Word) -> Result<(), RsError> {
        if w.field != self.field {
            return Err(RsError::ContextMismatch);
        }
        Ok(())
    }

    // Visits every message with its distance to `w`; distances above `limit`
    // are reported as `None` after an early exit.
    fn scan(&self, w: &Word, cap: u64, limit: usize, mut visit: impl FnMut(u64, Option<usize>)) -> Result<(), RsError> {
        self.check_word(w)?;
        let total = self.check_cap(cap)?;
        let points: Vec<FieldElem> = self.field.elements().collect();
        let powers: Vec<Vec<FieldElem>> = points
            .iter()
            .map(|a| {
                let mut v = Vec::with_capacity(self.k);
                let mut cur = self.field.one();
                for _ in 0..self.k {
                    v.push(cur.clone());
                    cur = &cur * a;
                }
                v
            })
            .collect();
        let target: Vec<FieldElem> = w.symbols.iter().map(|&s| self.field.elem_unchecked(s)).collect();
        for n in 0..total {
            let msg = self.message(n);
            let coeffs: Vec<FieldElem> = (0..self.k).map(|j| msg.coeff(j)).collect();
            let mut mismatches = 0usize;
            let mut exceeded = false;
            for (i, pw) in powers.iter().enumerate() {
                let mut v = self.field.zero();
                for (c, x) in coeffs.iter().zip(pw) {
                    if !c.is_zero() {
                        v += &(c * x);
                    }
                }
                if v != target[i] {
                    mismatches += 1;
                    if mismatches > limit {
                        exceeded = true;
                        break;
                    }
                }
            }
            visit(n, if exceeded { None } else { Some(mismatches) });
        }
        Ok(())
    }

    /// Every message whose codeword lies within distance `r` of `w`, in
    /// canonical message order, with the exact distance.
    pub fn list_decode_brute(&self, w: &Word, r: usize, cap: u64) -> Result<Vec<(Poly, usize)>, RsError> {
        let mut out = vec![];
        self.scan(w, cap, r, |n, d| {
            if let Some(d) = d {
                out.push((n, d));
            }
        })?;
        Ok(out.into_iter().map(|(n, d)| (self.message(n), d)).collect())
    }

    /// Minimum distance from `w` to the code and every message attaining it.
    pub fn ml_decode_brute(&self, w: &Word, cap: u64) -> Result<(usize, Vec<Poly>), RsError> {
        let mut best = usize::MAX;
        let mut nearest = vec![];
        self.scan(w, cap, w.len(), |n, d| {
            let d = d.expect("limit equals the word length");
            if d < best {
                best = d;
                nearest.clear();
            }
            if d == best {
                nearest.push(n);
            }
        })?;
        Ok((best, nearest.into_iter().map(|n| self.message(n)).collect()))
    }
}

/// A length-`q` vector over `F_q`, stored as canonical indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    field: FieldCtx,
    symbols: Vec<u64>,
}

impl Word {
    pub fn new(field: &FieldCtx, symbols: Vec<u64>) -> Result<Word, RsError> {
        if symbols.len() as u64 != field.order() {
            return Err(RsError::BadLength { got: symbols.len(), expected: field.order() });
        }
        if let Some(&bad) = symbols.iter().find(|&&s| s >= field.order()) {
            return Err(FieldError::IndexOutOfRange { index: bad, order: field.order() }.into());
        }
        Ok(Word { field: field.clone(), symbols })
    }

    pub fn from_elems(field: &FieldCtx, elems: &[FieldElem]) -> Result<Word, RsError> {
        for e in elems {
            field.check(e)?;
        }
        Word::new(field, elems.iter().map(|e| e.index()).collect())
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn symbols(&self) -> &[u64] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn get(&self, i: usize) -> FieldElem {
        self.field.elem_unchecked(self.symbols[i])
    }

    pub fn add(&self, other: &Word) -> Result<Word, RsError> {
        if self.field != other.field {
            return Err(RsError::ContextMismatch);
        }
        let symbols = (0..self.len()).map(|i| (&self.get(i) + &other.get(i)).index()).collect();
        Ok(Word { field: self.field.clone(), symbols })
    }

    pub fn weight(&self) -> usize {
        self.symbols.iter().filter(|&&s| s != 0).count()
    }

    pub fn to_record(&self) -> WordRecord {
        WordRecord(self.symbols.clone())
    }
}

/// Serialized word: the array of canonical indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WordRecord(pub Vec<u64>);

pub fn distance(u: &Word, v: &Word) -> Result<usize, RsError> {
    if u.field != v.field || u.len() != v.len() {
        return Err(RsError::ContextMismatch);
    }
    Ok(u.symbols.iter().zip(&v.symbols).filter(|(a, b)| a != b).count())
}

/// A decoder usable as a relation oracle: all codeword polynomials within
/// `radius` of `word`, in canonical message order.
pub trait Decoder: Sync {
    fn decode(&self, code: &RsCode, word: &Word, radius: usize) -> Result<Vec<Poly>, RsError>;
}

#[derive(Debug, Clone, Copy)]
pub struct BruteForceDecoder {
    pub cap: u64,
}

impl Default for BruteForceDecoder {
    fn default() -> Self {
        BruteForceDecoder { cap: DEFAULT_CAP }
    }
}

impl Decoder for BruteForceDecoder {
    fn decode(&self, code: &RsCode, word: &Word, radius: usize) -> Result<Vec<Poly>, RsError> {
        Ok(code.list_decode_brute(word, radius, self.cap)?.into_iter().map(|(m, _)| m).collect())
    }
}
