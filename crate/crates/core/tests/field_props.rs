use deepball::arith::{inv_mod, prime_power};
use deepball::field::standard_tower;
use deepball::{FieldCtx, Poly};
use proptest::prelude::*;

fn tower_for(order: u64) -> FieldCtx {
    let (p, e) = prime_power(order).unwrap();
    standard_tower(p, e as usize, None).unwrap()
}

// Rank over F_p of flat coefficient vectors.
fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(r) = (rank..rows.len()).find(|&r| rows[r][c] % p != 0) else { continue };
        rows.swap(rank, r);
        let inv = inv_mod(rows[rank][c], p).unwrap();
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c];
                let pivot = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot) {
                    *x = (*x + p * p - f * y % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

// Degree of the minimal polynomial over F_p: least d with 1, e, ..., e^d dependent.
fn min_poly_degree_by_rank(e: &deepball::FieldElem) -> usize {
    let p = e.ctx().characteristic();
    let mut powers = vec![e.ctx().one().flat().to_vec()];
    let mut cur = e.ctx().one();
    loop {
        cur = &cur * e;
        powers.push(cur.flat().to_vec());
        if rank_mod_p(powers.clone(), p) < powers.len() {
            return powers.len() - 1;
        }
    }
}

#[test]
fn frobenius_fixes_every_element() {
    for order in (2..=81u64).filter(|&n| prime_power(n).is_some()) {
        let f = tower_for(order);
        assert!(f.elements().all(|x| x.pow(order as u128) == x), "order {order}");
    }
}

#[test]
fn ring_axioms_exhaustive_small() {
    for order in [2u64, 3, 4, 7, 8, 9, 16, 25, 27, 49] {
        let f = tower_for(order);
        let el: Vec<_> = f.elements().collect();
        for a in &el {
            assert!((a + &(-a)).is_zero());
            for b in &el {
                assert_eq!(a * b, b * a);
                for c in el.iter().step_by(if order > 16 { 5 } else { 1 }) {
                    assert_eq!(a * &(b + c), &(a * b) + &(a * c));
                    assert_eq!(&(a * b) * c, a * &(b * c));
                }
            }
        }
    }
}

#[test]
fn min_poly_degree_agrees_with_linear_dependence() {
    for order in [4u64, 8, 9, 25, 27, 49, 81, 125] {
        let f = tower_for(order);
        let fp = f.prime_field();
        for x in f.elements().skip(1).step_by(3) {
            assert_eq!(FieldCtx::min_poly_degree(&x, &fp).unwrap(), min_poly_degree_by_rank(&x), "order {order} index {}", x.index());
        }
    }
    // three-level tower: F_81 = F_9[y]/(h), alpha over F_3 and over F_9
    let e = standard_tower(3, 2, Some(2)).unwrap();
    let alpha = e.gen();
    assert_eq!(min_poly_degree_by_rank(&alpha), FieldCtx::min_poly_degree(&alpha, &e.prime_field()).unwrap());
    assert_eq!(FieldCtx::min_poly_degree(&alpha, e.base().unwrap()).unwrap(), 2);
}

#[test]
fn embedding_is_a_ring_homomorphism() {
    let e = standard_tower(5, 2, Some(2)).unwrap();
    let fq = e.base().unwrap().clone();
    for a in fq.elements() {
        for b in fq.elements().step_by(4) {
            let (ea, eb) = (e.embed(&a).unwrap(), e.embed(&b).unwrap());
            assert_eq!(e.embed(&(&a * &b)).unwrap(), &ea * &eb);
            assert_eq!(e.embed(&(&a + &b)).unwrap(), &ea + &eb);
        }
        assert_eq!(e.restrict(&e.embed(&a).unwrap(), &fq).unwrap(), Some(a));
    }
    assert_eq!(e.restrict(&e.gen(), &fq).unwrap(), None);
    assert_eq!(e.subfield_indices(25).unwrap().len(), 25);
}

#[test]
fn canonical_irreducible_examples() {
    let f2 = FieldCtx::prime(2).unwrap();
    // x^3 + x^2 + 1 precedes x^3 + x + 1: the constant term is the most significant key
    assert_eq!(Poly::find_irreducible(&f2, 3).to_indices(), [1, 0, 1, 1]);
    let f3 = FieldCtx::prime(3).unwrap();
    assert_eq!(Poly::find_irreducible(&f3, 2).to_indices(), [1, 0, 1]);
    // every listed candidate is irreducible and the list is strictly increasing in canonical order
    let f5 = FieldCtx::prime(5).unwrap();
    let all: Vec<Vec<u64>> = Poly::irreducibles(&f5, 2).map(|p| p.to_indices()).collect();
    assert_eq!(all.len(), 10);
    assert!(all.windows(2).all(|w| w[0] < w[1]));
    assert!(all.iter().all(|c| c[0] != 0));
}

proptest! {
    #[test]
    fn field_axioms_random(order_idx in 0usize..6, a in 0u64..1_000_000, b in 0u64..1_000_000, c in 0u64..1_000_000) {
        let order = [121u64, 125, 243, 256, 343, 625][order_idx];
        let f = tower_for(order);
        let (a, b, c) = (f.elem(a % order).unwrap(), f.elem(b % order).unwrap(), f.elem(c % order).unwrap());
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
            prop_assert_eq!(a.pow(order as u128 - 1), f.one());
        }
        prop_assert_eq!(f.elem(a.index()).unwrap(), a);
    }
}
