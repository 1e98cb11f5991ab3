//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so every line is printed; exits nonzero if any criterion fails.

use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use deepball::arith::{binomial, is_prime_power};
use deepball::constructions::{
    construct_thm12, construct_thm13, smallest_feasible_thm12, smallest_feasible_thm13, thm12_params,
    thm13_params, verify_record, GForm, Mode,
};
use deepball::deep_ball::{build_center, DeepBallParams};
use deepball::dlog::{dlog, dlog_bruteforce, DlogInstance};
use deepball::factor_oracle::{
    count_all_dp, count_by_enumeration, count_factorizations, count_mitm, count_table_enum, dual_transform,
    factor_base, n_formula, split_count_table, ENUM_CAP,
};
use deepball::field::standard_tower;
use deepball::rs_code::BruteForceDecoder;
use deepball::Poly;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn criterion_1() -> Outcome {
    let mut centers = 0;
    for q in [5u64, 7] {
        let ext = standard_tower(q, 1, Some(2)).unwrap();
        let base = ext.base().unwrap().clone();
        for g in [3usize, 4] {
            for fi in 1..q * q {
                let f = Poly::from_indices(&base, &[fi % q, fi / q]).unwrap();
                let params = DeepBallParams::new(&ext, f, g).unwrap();
                let u = build_center(&params).unwrap();
                let code = params.code();
                let radius = params.radius();
                // all q^{g-2} messages, every distance
                let list = code.list_decode_brute(&u, q as usize, 1 << 20).unwrap();
                if list.len() as u64 != code.message_count().unwrap() {
                    return outcome(false, format!("enumeration incomplete at q={q} g={g}"));
                }
                let at = list.iter().filter(|(_, d)| *d == radius).count() as u128;
                let min = list.iter().map(|(_, d)| *d).min().unwrap();
                let count = count_factorizations(&params.target(), g).unwrap();
                if at != count || min < radius {
                    return outcome(false, format!("q={q} g={g} f={fi}: ball {at} vs factorizations {count}, min distance {min}"));
                }
                centers += 1;
            }
        }
    }
    outcome(true, format!("{centers} centers, counts equal, min distance >= q-g"))
}

fn criterion_2() -> Outcome {
    let mut checked = 0;
    for (p, e) in [(5u64, 1usize), (7, 1), (3, 2)] {
        let ext = standard_tower(p, e, Some(2)).unwrap();
        let q = ext.base().unwrap().order();
        for g in 0..=4usize {
            let en = count_table_enum(&ext, g, ENUM_CAP).unwrap();
            let dp = count_all_dp(&ext, g).unwrap();
            let expect = binomial(q, g as u64);
            if BigUint::from(en.total()) != expect || BigUint::from(dp.total()) != expect || en != dp {
                return outcome(false, format!("q={q} g={g}"));
            }
            checked += 1;
        }
    }
    outcome(true, format!("{checked} (q, g) pairs, enumeration == DP == C(q,g)"))
}

fn criterion_3() -> Outcome {
    let ext = standard_tower(5, 1, Some(2)).unwrap();
    for g in [1usize, 2] {
        let big = count_all_dp(&ext, 5 - g).unwrap();
        for beta in ext.elements().skip(1) {
            let lhs = count_factorizations(&beta, 5 - g).unwrap();
            let rhs = count_factorizations(&dual_transform(&beta).unwrap(), g).unwrap();
            if lhs != rhs || lhs != big.get(&beta) {
                return outcome(false, format!("g={g} beta={}", beta.index()));
            }
        }
    }
    outcome(true, "48 identities over F_25^*")
}

fn criterion_4() -> Outcome {
    let n = n_formula(137, 12, 2);
    let lo = BigRational::from_integer(100_000_000.into());
    let hi = BigRational::from_integer(200_000_000.into());
    let in_range = n.0 > lo && n.0 < hi;
    let ext = standard_tower(137, 1, Some(2)).unwrap();
    let table = count_all_dp(&ext, 12).unwrap();
    let (arg, min) = table.min_nonzero_target();
    let bound_ok = BigInt::from(min) >= n.ceil();
    // independent spot checks of the DP by meet-in-the-middle
    let spots = [1u64, arg, 137, 9999, 18768];
    let mitm_ok = spots.iter().all(|&i| {
        let b = ext.elem(i).unwrap();
        count_mitm(&b, 12).unwrap() == table.get(&b)
    });
    outcome(
        in_range && bound_ok && mitm_ok,
        format!(
            "ceil(N)={} in (1e8, 2e8): {in_range}; min count={min} at index {arg} >= ceil(N): {bound_ok}; mitm spot checks: {mitm_ok}",
            n.ceil()
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut notes = vec![];
    let mut all_ok = true;
    for (p, g) in [(5u64, 3usize), (7, 5)] {
        let ext = standard_tower(p, 1, Some(2)).unwrap();
        let zero_free: Vec<usize> = (3..p as usize).filter(|&g| count_all_dp(&ext, g).unwrap().zero_targets() == 0).collect();
        let inst = DlogInstance::new(&ext, g, Arc::new(BruteForceDecoder::default()), 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        let mut solved = 0;
        for _ in 0..20 {
            let t = ext.elem(rng.gen_range(1..ext.order())).unwrap();
            if let Ok(run) = dlog(&inst, &t) {
                if inst.base().pow(run.answer as u128) == t && Ok(run.answer) == dlog_bruteforce(inst.base(), &t) {
                    solved += 1;
                }
            }
        }
        all_ok &= solved == 20;
        notes.push(format!("F_{}: g={g} solved {solved}/20, zero-free g: {zero_free:?}", p * p));
    }
    outcome(all_ok, notes.join("; "))
}

fn criterion_6() -> Outcome {
    let ext = standard_tower(3, 2, Some(2)).unwrap();
    let f3 = ext.prime_field();
    let gen_deg = deepball::FieldCtx::min_poly_degree(&ext.gen(), &f3).unwrap();
    let split_a = split_count_table(&ext, &f3, 1, 3).unwrap();
    // second enumerator: classify every 4-subset of F_9 by how many of its points lie in F_3
    let inside = ext.base().unwrap().subfield_indices(3).unwrap();
    let lin = factor_base(&ext).unwrap();
    let mut split_b = vec![0u128; 81];
    for mask in 0u32..(1 << 9) {
        if mask.count_ones() != 4 {
            continue;
        }
        let members: Vec<usize> = (0..9).filter(|i| mask >> i & 1 == 1).collect();
        if members.iter().filter(|&&i| inside.contains(&(i as u64))).count() == 1 {
            let prod = members.iter().fold(ext.one(), |acc, &i| &acc * &lin[i]);
            split_b[prod.index() as usize] += 1;
        }
    }
    let full = count_all_dp(&ext, 4).unwrap();
    let mut le = true;
    let mut pattern_a = vec![];
    let mut pattern_b = vec![];
    for beta in ext.elements().skip(1) {
        let i = beta.index() as usize;
        let f = count_by_enumeration(&beta, 4, ENUM_CAP).unwrap();
        le &= split_a.counts[i] <= f && f == full.counts[i];
        pattern_a.push(split_a.counts[i] == f);
        pattern_b.push(split_b[i] == f);
    }
    let same = split_a.counts == split_b && pattern_a == pattern_b;
    let equal = pattern_a.iter().filter(|&&x| x).count();
    outcome(
        gen_deg == 4 && le && same,
        format!("alpha degree over F_3 = {gen_deg}; split <= full for 80 targets: {le}; enumerators agree: {same}; equality at {equal} targets"),
    )
}

fn criterion_7() -> Outcome {
    let rho = rat(3, 4);
    let strict_none = smallest_feasible_thm13(&rho, GForm::FourOverEps, 20).is_none();
    let Some(i) = smallest_feasible_thm13(&rho, GForm::TwoOverEps, 20) else {
        return outcome(false, "no feasible i up to 20");
    };
    let below_fail = (1..i).all(|j| thm13_params(j, &rho, GForm::TwoOverEps).is_err());
    let rec = construct_thm13(i, &rho, GForm::TwoOverEps).unwrap();
    let json = rec.to_json();
    let back = deepball::constructions::ConstructionRecord::from_json(&json).unwrap();
    let checks = verify_record(&back).unwrap();
    let failed: Vec<&str> = checks.iter().filter(|c| !c.holds).map(|c| c.name.as_str()).collect();
    // independent: q the least prime power above (3i)^6
    let t = (3 * i).pow(6);
    let least = rec.q > t && (t + 1..rec.q).all(|n| !is_prime_power(n));
    let q_i = BigRational::from_integer(BigInt::from(rec.q).pow(i as u32));
    let bound_ok = n_formula(rec.q, rec.g as u64, rec.h as u64).0 >= q_i;
    let ok = rec.mode == Mode::Thm13
        && rec.k as u64 == rec.q - rec.g as u64 - rec.h as u64
        && rec.radius >= rec.g
        && rec.h >= 2
        && least
        && bound_ok
        && failed.is_empty()
        && below_fail;
    outcome(
        ok,
        format!(
            "i={i} q={} g={} h={} k={} radius={} (g form 2/eps; 4/eps infeasible for all i <= 20: {strict_none}); failed checks: {failed:?}",
            rec.q, rec.g, rec.h, rec.k, rec.radius
        ),
    )
}

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_deepball"))
}

fn criterion_8() -> Outcome {
    let c = rat(1, 2);
    let Some(i) = smallest_feasible_thm12(&c, 1000) else {
        return outcome(false, "no feasible i up to 1000");
    };
    let rec = construct_thm12(i, &c).unwrap();
    let checks = verify_record(&rec).unwrap();
    let failed: Vec<&str> = checks.iter().filter(|c| !c.holds).map(|c| c.name.as_str()).collect();
    let gc = rec.q / 2;
    let shape = rec.k == gc as usize - rec.h && rec.radius as u64 == rec.q - gc;
    // below feasibility: q1 = 16 and the index just before i, through the binary
    let mut below = vec![];
    for j in [10, i - 1] {
        let lib_err = thm12_params(j, &c).unwrap_err().to_string();
        let out = cli().args(["construct", "thm12", "--i", &j.to_string(), "--c", "1/2"]).output().unwrap();
        let stderr = String::from_utf8_lossy(&out.stderr).to_string();
        below.push(out.status.code() == Some(3) && stderr.contains("(4/eps+2)(2h+1)^2 <= q1") && lib_err.contains("<= q1"));
    }
    outcome(
        failed.is_empty() && shape && below.iter().all(|&b| b),
        format!(
            "i={i} q1={} q={} h={} k={} radius={}; failed checks: {failed:?}; below-feasibility exit 3 with binding named: {below:?}",
            rec.q1.unwrap(),
            rec.q,
            rec.h,
            rec.k,
            rec.radius
        ),
    )
}

fn criterion_9() -> Outcome {
    let dir = std::env::temp_dir().join(format!("deepball-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = |name: &str| -> PathBuf { dir.join(name) };
    let runs: Vec<(Vec<String>, Option<PathBuf>)> = vec![
        (vec!["field", "info", "--p", "3", "--ext-deg", "2", "--h-deg", "2"], None),
        (vec!["center", "build", "--p", "5", "--ext-deg", "1", "--h-deg", "2", "--g", "3", "--f", "1"], None),
        (vec!["center", "build", "--p", "7", "--h-deg", "2", "--g", "4", "--f", "3,1", "--out"], Some(path("center.json"))),
        (vec!["ball", "count", "--p", "7", "--h-deg", "2", "--g", "4", "--f", "3,1"], None),
        (vec!["factor", "count", "--p", "7", "--h-deg", "2", "--g", "4", "--beta", "10"], None),
        (vec!["factor", "table", "--p", "5", "--h-deg", "2", "--g", "3", "--out"], Some(path("table.txt"))),
        (vec!["dual", "check", "--p", "5", "--h-deg", "2", "--g", "2"], None),
        (vec!["dlog", "--p", "5", "--h", "2", "--g", "3", "--target-index", "7", "--seed", "0"], None),
        (vec!["dlog", "--p", "7", "--h", "2", "--g", "5", "--target-index", "30", "--seed", "3", "--threads", "3", "--out"], Some(path("rels.txt"))),
        (vec!["construct", "thm13", "--rho", "3/4", "--out"], Some(path("thm13.json"))),
        (vec!["construct", "thm12", "--i", "10", "--c", "1/2"], None),
        (vec!["construct", "thm12", "--c", "1/2", "--out"], Some(path("thm12.json"))),
        (vec!["construct", "composite", "--q1", "3", "--m", "2", "--c", "1/2", "--h", "2", "--demo", "--out"], Some(path("composite.json"))),
        (vec!["verify", "--suite", "duality", "--q", "5"], None),
        (vec!["verify", "--max-order", "9", "--cap", "100000"], None),
    ]
    .into_iter()
    .map(|(a, p)| {
        let mut args: Vec<String> = a.into_iter().map(String::from).collect();
        if let Some(p) = &p {
            args.push(p.display().to_string());
        }
        (args, p)
    })
    .collect();
    let mut mismatched = vec![];
    for (args, file) in &runs {
        let mut outputs = vec![];
        for _ in 0..2 {
            let out = cli().args(args).output().unwrap();
            let file_bytes = file.as_ref().map(|p| std::fs::read(p).unwrap_or_default());
            outputs.push((out.status.code(), out.stdout, out.stderr, file_bytes));
        }
        if outputs[0] != outputs[1] {
            mismatched.push(args.join(" "));
        }
    }
    // emitted files read back through their checkers
    let center_ok = cli().args(["center", "check", "--input"]).arg(path("center.json")).output().unwrap().status.success();
    let rec_ok = ["thm13.json", "composite.json", "thm12.json"]
        .iter()
        .all(|f| cli().args(["construct", "check", "--input"]).arg(path(f)).output().unwrap().status.success());
    let _ = std::fs::remove_dir_all(&dir);
    outcome(
        mismatched.is_empty() && center_ok && rec_ok,
        format!("{} commands run twice; differing: {mismatched:?}; files re-read: center {center_ok}, records {rec_ok}", runs.len()),
    )
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome, Duration); 9] = [
        (1, "deep-ball bijection", criterion_1, Duration::from_secs(60)),
        (2, "partition identity", criterion_2, Duration::from_secs(10)),
        (3, "duality", criterion_3, Duration::from_secs(10)),
        (4, "counting bound at q=137", criterion_4, Duration::from_secs(300)),
        (5, "index-calculus reduction", criterion_5, Duration::from_secs(120)),
        (6, "composite splitting", criterion_6, Duration::from_secs(60)),
        (7, "relative-radius record", criterion_7, Duration::from_secs(600)),
        (8, "positive-rate record", criterion_8, Duration::from_secs(600)),
        (9, "determinism", criterion_9, Duration::from_secs(1800)),
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failures = 0;
    for (n, name, f, limit) in criteria {
        if only.is_some_and(|o| o != n) {
            continue;
        }
        let start = Instant::now();
        let o = f();
        let took = start.elapsed();
        let pass = o.pass && took <= limit;
        if !pass {
            failures += 1;
        }
        println!(
            "{} criterion {n} ({name}) in {:.1}s (limit {}s): {}",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs(),
            o.detail
        );
    }
    println!("acceptance: {failures} failing");
    if failures > 0 {
        std::process::exit(1);
    }
}
