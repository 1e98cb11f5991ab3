use deepball::deep_ball::{build_center, codeword_to_factors, factors_to_codeword, CenterRecord, DeepBallParams, FactorSet};
use deepball::factor_oracle::count_by_enumeration;
use deepball::field::standard_tower;
use deepball::rs_code::distance;
use deepball::Poly;

// Every g-subset S whose product is f(alpha) maps to a codeword at distance
// exactly q - g, which maps back to S; nothing is closer.
#[test]
fn factor_sets_and_codewords_correspond() {
    for (p, g) in [(5u64, 3usize), (5, 4), (7, 3), (7, 4), (7, 5)] {
        let ext = standard_tower(p, 1, Some(2)).unwrap();
        let base = ext.base().unwrap().clone();
        for fi in 1..p * p {
            let f = Poly::from_indices(&base, &[fi % p, fi / p]).unwrap();
            let params = DeepBallParams::new(&ext, f, g).unwrap();
            let u = build_center(&params).unwrap();
            let code = params.code();
            let mut found = 0u128;
            for mask in 0u32..(1 << p) {
                if mask.count_ones() as usize != g {
                    continue;
                }
                let set = FactorSet::new((0..p).filter(|i| mask >> i & 1 == 1).collect()).unwrap();
                if set.product(&ext).unwrap() != params.target() {
                    assert!(factors_to_codeword(&set, &params).is_err());
                    continue;
                }
                found += 1;
                let c = factors_to_codeword(&set, &params).unwrap();
                let w = code.encode(&c).unwrap();
                assert_eq!(distance(&u, &w).unwrap(), params.radius());
                assert_eq!(codeword_to_factors(&c, &params).unwrap(), Some(set));
            }
            assert_eq!(found, count_by_enumeration(&params.target(), g, 1 << 20).unwrap());
            let (d, _) = code.ml_decode_brute(&u, 1 << 20).unwrap();
            assert!(d >= params.radius());
            assert_eq!(d == params.radius(), found > 0);
        }
    }
}

#[test]
fn center_record_roundtrip_over_f9() {
    let ext = standard_tower(3, 2, Some(2)).unwrap();
    let base = ext.base().unwrap().clone();
    let params = DeepBallParams::new(&ext, Poly::from_indices(&base, &[5, 2]).unwrap(), 4).unwrap();
    let rec = CenterRecord::build(&params).unwrap();
    let json = serde_json::to_string(&rec).unwrap();
    let back: CenterRecord = serde_json::from_str(&json).unwrap();
    assert_eq!(back, rec);
    let (p2, w) = back.load().unwrap();
    assert_eq!(p2.g(), 4);
    assert_eq!(w.symbols(), build_center(&params).unwrap().symbols());
    let mut bad = rec.clone();
    bad.center[0] = (bad.center[0] + 1) % 9;
    assert!(bad.load().is_err());
}
