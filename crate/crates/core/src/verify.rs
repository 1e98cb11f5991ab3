//! Self-contained invariant suites over small fields, each producing named
//! pass/fail lines. Used by the command-line `verify` and by the acceptance tests.

use std::fmt;
use std::sync::Arc;

use crate::arith::{binomial, factorize, prime_power};
use crate::deep_ball::{build_center, DeepBallParams};
use crate::dlog::{dlog, dlog_bruteforce, DlogInstance};
use crate::factor_oracle::{count_all_dp, count_by_enumeration, count_table_enum, dual_transform};
use crate::field::{standard_tower, FieldCtx};
use crate::poly::Poly;
use crate::rs_code::{distance, BruteForceDecoder, RsCode};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        if self.detail.is_empty() {
            write!(f, "{tag} {}", self.name)
        } else {
            write!(f, "{tag} {} {}", self.name, self.detail)
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub lines: Vec<CheckLine>,
}

impl Report {
    fn push(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.lines.push(CheckLine { name: name.into(), pass, detail: detail.into() });
    }

    pub fn all_pass(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }

    pub fn extend(&mut self, other: Report) {
        self.lines.extend(other.lines);
    }
}

pub const SUITES: [&str; 6] = ["field", "rs", "deep-ball", "partition", "duality", "dlog"];

/// Limits shared by all suites.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub max_order: u64,
    pub cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_order: 49, cap: 1_000_000 }
    }
}

fn prime_power_fields(max_order: u64) -> Vec<FieldCtx> {
    (2..=max_order)
        .filter_map(prime_power)
        .map(|(p, e)| standard_tower(p, e as usize, None).expect("prime power tower"))
        .collect()
}

/// Frobenius, distributivity, inverses and generator order for every field of order `<= max_order`.
pub fn field_suite(lim: Limits) -> Report {
    let mut r = Report::default();
    for f in prime_power_fields(lim.max_order) {
        let q = f.order();
        let elems: Vec<_> = f.elements().collect();
        let frob = elems.iter().all(|x| x.pow(q as u128) == *x);
        r.push(format!("field/frobenius q={q}"), frob, "");
        let inv = elems.iter().skip(1).all(|x| (x * &x.inv().expect("unit")).is_one());
        r.push(format!("field/inverse q={q}"), inv, "");
        if q.pow(3) <= lim.cap.max(1) {
            let dist = elems.iter().all(|a| {
                elems.iter().all(|b| elems.iter().all(|c| a * &(b + c) == &(a * b) + &(a * c)))
            });
            r.push(format!("field/distributive q={q}"), dist, "");
        }
        let g = f.generator();
        let n = q - 1;
        let prim = g.pow(n as u128).is_one() && factorize(n).iter().all(|&(p, _)| !g.pow((n / p) as u128).is_one());
        r.push(format!("field/generator q={q}"), prim, format!("index={}", g.index()));
    }
    r
}

/// Linearity and minimum distance `q - k + 1` of `RS_q[q, k]`.
pub fn rs_suite(lim: Limits) -> Report {
    let mut r = Report::default();
    for f in prime_power_fields(lim.max_order.min(16)) {
        let q = f.order();
        for k in 1..=3usize.min(q as usize) {
            let code = RsCode::new(&f, k).expect("valid dimension");
            let Some(n) = code.message_count().filter(|&n| n <= lim.cap.min(5000)) else { continue };
            let words: Vec<_> = (0..n).map(|i| code.encode(&code.message(i)).expect("in range")).collect();
            let min_w = words.iter().skip(1).map(|w| w.weight()).min().unwrap_or(q as usize);
            r.push(format!("rs/min-distance q={q} k={k}"), min_w as u64 == code.min_distance(), format!("d={min_w}"));
            let lin = (0..n.min(64)).all(|i| {
                let j = (i * 7 + 3) % n;
                let sum = &code.message(i) + &code.message(j);
                code.encode(&sum).expect("in range") == words[i as usize].add(&words[j as usize]).expect("same field")
            });
            r.push(format!("rs/linear q={q} k={k}"), lin, "");
        }
    }
    r
}

/// For `h = 2`, every `g` with `h < g < q` and every nonzero `f` of degree
/// `< 2`: codewords at distance exactly `q - g` from `u_f`, counted by full
/// enumeration, equal the factorizations of `f(alpha)`, and none is closer.
pub fn deep_ball_suite(lim: Limits, qs: &[u64], gs: Option<&[usize]>) -> Report {
    let mut r = Report::default();
    for &q in qs {
        let Some((p, e)) = prime_power(q) else { continue };
        if q > lim.max_order {
            continue;
        }
        let ext = standard_tower(p, e as usize, Some(2)).expect("tower");
        let base = ext.base().expect("extension").clone();
        let all_g: Vec<usize> = (3..q as usize).collect();
        for &g in gs.unwrap_or(&all_g) {
            let mut ok = true;
            let mut checked = 0;
            let mut detail = String::new();
            for i in 1..q * q {
                let f = Poly::from_indices(&base, &[i % q, i / q]).expect("in range");
                let params = DeepBallParams::new(&ext, f, g).expect("valid parameters");
                let code = params.code();
                if code.message_count().is_none_or(|n| n > lim.cap) {
                    continue;
                }
                let u = build_center(&params).expect("center");
                let radius = params.radius();
                let list = code.list_decode_brute(&u, radius, lim.cap).expect("within cap");
                let exact = list.iter().filter(|(_, d)| *d == radius).count() as u128;
                let closer = list.iter().any(|(_, d)| *d < radius);
                let count = count_by_enumeration(&params.target(), g, lim.cap).expect("small count");
                let enc_ok = list.iter().all(|(m, d)| distance(&u, &code.encode(m).expect("in range")).expect("same") == *d);
                if exact != count || closer || !enc_ok {
                    ok = false;
                    detail = format!("f_index={i} ball={exact} factorizations={count} closer={closer}");
                    break;
                }
                checked += 1;
            }
            if detail.is_empty() {
                detail = format!("centers={checked}");
            }
            r.push(format!("deep-ball/bijection q={q} g={g}"), ok && checked > 0, detail);
        }
    }
    r
}

/// `sum_beta count(beta, g) = C(q, g)` by enumeration and by the DP, over `F_{q^2}`.
pub fn partition_suite(lim: Limits, qs: &[u64], max_g: usize) -> Report {
    let mut r = Report::default();
    for &q in qs {
        let Some((p, e)) = prime_power(q) else { continue };
        if q > lim.max_order {
            continue;
        }
        let ext = standard_tower(p, e as usize, Some(2)).expect("tower");
        for g in 0..=max_g.min(q as usize) {
            let expect = binomial(q, g as u64);
            let en = count_table_enum(&ext, g, lim.cap).expect("within cap");
            let dp = count_all_dp(&ext, g).expect("small table");
            let ok = num_bigint::BigUint::from(en.total()) == expect && en == dp;
            r.push(format!("partition q={q} g={g}"), ok, format!("total={}", dp.total()));
        }
    }
    r
}

/// `count(beta, q - g) = count(P / beta, g)` for all `beta != 0` in `F_{q^2}`.
pub fn duality_suite(q: u64, gs: &[usize]) -> Report {
    let mut r = Report::default();
    let Some((p, e)) = prime_power(q) else {
        r.push(format!("duality q={q}"), false, "not a prime power");
        return r;
    };
    let ext = standard_tower(p, e as usize, Some(2)).expect("tower");
    for &g in gs {
        if g as u64 > q {
            continue;
        }
        let direct = count_all_dp(&ext, q as usize - g).expect("small table");
        let dual = count_all_dp(&ext, g).expect("small table");
        let ok = ext
            .elements()
            .skip(1)
            .all(|b| direct.get(&b) == dual.get(&dual_transform(&b).expect("nonzero")));
        r.push(format!("duality q={q} g={g}"), ok, "");
    }
    r
}

/// Every target of `F_{q^2}^*` recovered by the reduction and matched against brute force.
pub fn dlog_suite(q: u64, g: usize, seed: u64) -> Report {
    let mut r = Report::default();
    let Some((p, e)) = prime_power(q) else { return r };
    let ext = standard_tower(p, e as usize, Some(2)).expect("tower");
    let inst = match DlogInstance::new(&ext, g, Arc::new(BruteForceDecoder::default()), seed) {
        Ok(i) => i,
        Err(err) => {
            r.push(format!("dlog q={q} g={g}"), false, err.to_string());
            return r;
        }
    };
    let mut solved = 0;
    let mut failures = vec![];
    for t in ext.elements().skip(1) {
        match dlog(&inst, &t) {
            Ok(run) if Ok(run.answer) == dlog_bruteforce(inst.base(), &t) => solved += 1,
            Ok(run) => failures.push(format!("{}->{}", t.index(), run.answer)),
            Err(e) => failures.push(format!("{}:{e}", t.index())),
        }
    }
    let total = ext.order() - 1;
    r.push(format!("dlog q={q} g={g}"), failures.is_empty(), format!("solved={solved}/{total}"));
    r
}

/// Run a suite by name; `all` runs every suite, `none` nothing.
pub fn run_suite(name: &str, lim: Limits, q: Option<u64>, seed: u64) -> Option<Report> {
    let mut r = Report::default();
    match name {
        "none" => {}
        "all" => {
            for s in SUITES {
                r.extend(run_suite(s, lim, q, seed)?);
            }
        }
        "field" => r = field_suite(lim),
        "rs" => r = rs_suite(lim),
        "deep-ball" => r = deep_ball_suite(lim, &q.map_or(vec![5, 7], |q| vec![q]), Some(&[3, 4])),
        "partition" => r = partition_suite(lim, &q.map_or(vec![5, 7, 9], |q| vec![q]), 4),
        "duality" => {
            let q = q.unwrap_or(5);
            let gs: Vec<usize> = (1..q as usize).collect();
            r = duality_suite(q, &gs);
        }
        "dlog" => {
            let q = q.unwrap_or(5);
            r = dlog_suite(q, (q as usize).div_ceil(2).max(3), seed);
        }
        _ => return None,
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_at_small_sizes() {
        let lim = Limits { max_order: 9, cap: 100_000 };
        for s in SUITES {
            let r = run_suite(s, lim, None, 0).unwrap();
            assert!(r.all_pass(), "{s}: {:?}", r.lines.iter().filter(|l| !l.pass).collect::<Vec<_>>());
        }
        assert!(run_suite("none", lim, None, 0).unwrap().lines.is_empty());
        assert!(run_suite("bogus", lim, None, 0).is_none());
    }
}
