//! The four-coordinate family with characters (p, 1, -1, -p) under the unit
//! form, checked against closed forms built independently of the engine.

use logpoisson::actiondata::ActionDatum;
use logpoisson::deform::{
    deform, maximality_projection, rescaling_witness, t_pfaffian, DeformConfig, Schedule, Smoothing,
};
use logpoisson::linalg::{rat, RatMatrix, Rational};
use logpoisson::logcan::{LogCanonicalStructure, SmoothableWeight};
use logpoisson::multivec::Multivector;
use num_bigint::BigInt;

fn datum(p: i64) -> ActionDatum {
    ActionDatum::new(RatMatrix::identity(1), RatMatrix::from_i64_rows(&[vec![p, 1, -1, -p]], 4)).unwrap()
}

fn structure(p: i64) -> LogCanonicalStructure {
    datum(p).induced_structure()
}

fn binomial(n: u64, k: u64) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn term(c: Rational, exps: [u32; 4], dirs: &[usize]) -> Multivector {
    Multivector::term(4, c, exps.to_vec(), dirs)
}

/// The log-canonical part written out from its six coefficients.
fn log_canonical(p: i64) -> Multivector {
    let coeffs = [((0, 1), -p), ((0, 2), p), ((0, 3), p * p), ((1, 2), 1), ((1, 3), p), ((2, 3), -p)];
    let mut out = Multivector::zero(4, 2);
    for ((j, k), c) in coeffs {
        let mut e = [0u32; 4];
        e[j] = 1;
        e[k] = 1;
        out = &out + &term(rat(c), e, &[j, k]);
    }
    out
}

/// `base + sign_inner d2^d3 + outer * (x2 x3 + shift)^{2p} d1^d4`.
fn closed_form(p: i64, sign_inner: i64, outer: i64, shift: i64) -> Multivector {
    let mut out = &log_canonical(p) + &term(rat(sign_inner), [0, 0, 0, 0], &[1, 2]);
    let top = 2 * p as u64;
    for k in 0..=top {
        let c = outer * binomial(top, k) * shift.pow((top - k) as u32);
        out = &out + &term(rat(c), [0, k as u32, k as u32, 0], &[0, 3]);
    }
    out
}

fn smoothings(p: i64, c_outer: Rational, c_inner: Rational) -> Vec<Smoothing> {
    let weights = structure(p).smoothable_weights().unwrap();
    assert_eq!(weights.len(), 2);
    vec![
        Smoothing { weight: weights[0].clone(), coefficient: c_outer },
        Smoothing { weight: weights[1].clone(), coefficient: c_inner },
    ]
}

#[test]
fn log_canonical_bivector_matches_brackets() {
    for p in [1, 2, 3, -2] {
        assert_eq!(structure(p).log_canonical_bivector(), log_canonical(p));
        assert!(structure(p).is_t_log_symplectic());
    }
}

#[test]
fn unit_coefficients_give_binomial_tail() {
    for p in 1..=3 {
        let d = deform(&structure(p), &smoothings(p, rat(1), rat(1)), DeformConfig::default()).unwrap();
        assert_eq!(d.total, closed_form(p, 1, 1, 1), "p = {p}");
        assert_eq!(d.orders.len(), 2 * p as usize + 2);
    }
}

#[test]
fn negative_coefficients_give_shifted_tail() {
    for p in 1..=3 {
        let d = deform(&structure(p), &smoothings(p, rat(-p * p), rat(-1)), DeformConfig::default()).unwrap();
        assert_eq!(d.total, closed_form(p, -1, -p * p, -1), "p = {p}");
    }
}

#[test]
fn tail_weights_form_a_single_chain() {
    let p = 2;
    let weights = structure(p).smoothable_weights().unwrap();
    let tails = structure(p).tail_weights(&weights, 2, 64).unwrap();
    let found: Vec<Vec<i64>> = tails.iter().map(|(_, t)| t.weight.0.clone()).collect();
    let expected: Vec<Vec<i64>> = (1..=2 * p).map(|k| vec![-1, 2 * p - k, 2 * p - k, -1]).collect();
    assert_eq!(found, expected);
    assert!(structure(p).check_w1(&weights, 64).unwrap());
    assert!(structure(p).check_w2(&weights, 64).unwrap());
}

#[test]
fn level_cap_is_enforced() {
    let p = 3;
    let err = deform(
        &structure(p),
        &smoothings(p, rat(1), rat(1)),
        DeformConfig { level_cap: 3, schedule: Schedule::Ascending },
    )
    .unwrap_err();
    assert_eq!(err, logpoisson::Error::CapExceeded { cap: 3 });
}

#[test]
fn schedules_agree() {
    let p = 2;
    let run = |schedule| {
        deform(&structure(p), &smoothings(p, rat(3), rat(-5)), DeformConfig { level_cap: 64, schedule }).unwrap()
    };
    let a = run(Schedule::Ascending);
    assert_eq!(a, run(Schedule::Descending));
    assert_eq!(a, run(Schedule::Parallel));
}

#[test]
fn published_rescaling_carries_one_deformation_to_the_other() {
    for p in 1..=3 {
        let l = structure(p);
        let from = deform(&l, &smoothings(p, rat(1), rat(1)), DeformConfig::default()).unwrap().total;
        let to = deform(&l, &smoothings(p, rat(-p * p), rat(-1)), DeformConfig::default()).unwrap().total;
        let t = vec![-Rational::new(BigInt::from(1), BigInt::from(p * p)), rat(1), rat(-1), rat(1)];
        assert_eq!(from.rescale(&t).unwrap(), to);
    }
}

#[test]
fn computed_witness_also_works() {
    let p = 2;
    let l = structure(p);
    let weights: Vec<SmoothableWeight> = l.smoothable_weights().unwrap();
    let t = rescaling_witness(&weights, &[rat(1), rat(1)], &[rat(-4), rat(-1)]).unwrap().unwrap();
    let from = deform(&l, &smoothings(p, rat(1), rat(1)), DeformConfig::default()).unwrap().total;
    let to = deform(&l, &smoothings(p, rat(-4), rat(-1)), DeformConfig::default()).unwrap().total;
    assert_eq!(from.rescale(&t).unwrap(), to);
}

#[test]
fn projection_onto_inner_weight_is_single_term() {
    let p = 1;
    let l = structure(p);
    let full = smoothings(p, rat(2), rat(7));
    let inner = vec![full[1].weight.clone()];
    let projected = maximality_projection(&l, &full, &inner, DeformConfig::default()).unwrap();
    assert_eq!(projected, &log_canonical(p) + &term(rat(7), [0, 0, 0, 0], &[1, 2]));
}

#[test]
fn pfaffian_of_log_canonical_part_is_log_volume() {
    for p in [1, 2, -3] {
        let l = structure(p);
        let pf = t_pfaffian(&l, &l.log_canonical_bivector()).unwrap();
        assert_eq!(pf, term(rat(1), [1, 1, 1, 1], &[0, 1, 2, 3]));
    }
}

#[test]
fn pfaffian_of_single_smoothing() {
    // (x2 x3 - c/a) x1 x4 for the inner weight.
    let p = 2;
    let l = structure(p);
    let w = l.smoothable_weights().unwrap()[1].clone();
    let c = rat(5);
    let d = deform(&l, &[Smoothing { weight: w.clone(), coefficient: c.clone() }], DeformConfig::default()).unwrap();
    let pf = t_pfaffian(&l, &d.total).unwrap();
    let expected = &term(rat(1), [1, 1, 1, 1], &[0, 1, 2, 3]) - &term(&c / &w.scale, [1, 0, 0, 1], &[0, 1, 2, 3]);
    assert_eq!(pf, expected);
}
