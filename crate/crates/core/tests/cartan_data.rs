use std::collections::BTreeMap;

use logpoisson::cartan::{check_cgl, CartanJob, CglCondition};
use logpoisson::deform::{t_pfaffian, DeformConfig};
use logpoisson::linalg::{rat, Rational};
use logpoisson::multivec::Multivector;

const A1: [[i64; 1]; 1] = [[2]];
const A2: [[i64; 2]; 2] = [[2, -1], [-1, 2]];
const B2: [[i64; 2]; 2] = [[2, -2], [-1, 2]];
const G2: [[i64; 2]; 2] = [[2, -3], [-1, 2]];
const AFFINE: [[i64; 2]; 2] = [[2, -2], [-2, 2]];

fn matrix<const R: usize>(m: [[i64; R]; R]) -> Vec<Vec<i64>> {
    m.iter().map(|r| r.to_vec()).collect()
}

fn job(m: Vec<Vec<i64>>, word: &[usize]) -> CartanJob {
    CartanJob::new(m, None, word.iter().map(|i| i - 1).collect()).unwrap()
}

fn term(n: usize, c: i64, exps: &[u32], dirs: &[usize]) -> Multivector {
    Multivector::term(n, rat(c), exps.to_vec(), dirs)
}

#[test]
fn rank_one_repeated_letter() {
    let j = job(matrix(A1), &[1, 1]);
    assert_eq!(j.bott_samelson_c(), BTreeMap::from([(0, rat(-2))]));
    let d = j.deformation(DeformConfig::default()).unwrap();
    let expected = &term(2, 2, &[1, 1], &[0, 1]) - &term(2, 2, &[0, 0], &[0, 1]);
    assert_eq!(d.total, expected);
}

#[test]
fn a2_word_one_two_one() {
    let j = job(matrix(A2), &[1, 2, 1]);
    let d = j.deformation(DeformConfig::default()).unwrap();
    let expected = [
        term(3, -1, &[1, 1, 0], &[0, 1]),
        term(3, 1, &[1, 0, 1], &[0, 2]),
        term(3, -1, &[0, 1, 1], &[1, 2]),
        term(3, -2, &[0, 1, 0], &[0, 2]),
    ]
    .iter()
    .fold(Multivector::zero(3, 2), |acc, t| &acc + t);
    assert_eq!(d.total, expected);

    let analysis = j.build_datum().unwrap().analyze().unwrap();
    assert_eq!(analysis.ker_beta_basis().unwrap(), vec![vec![rat(-1), rat(1), rat(-1)]]);
    let coeffs = analysis.eta_decompose(&[rat(-1), rat(1), rat(-1)]).unwrap().unwrap();
    assert_eq!(coeffs, BTreeMap::from([(0, rat(1)), (1, rat(0))]));
}

#[test]
fn cartan_data_satisfy_all_predicates() {
    for (m, word) in [
        (matrix(A2), vec![1, 2, 1, 2, 1]),
        (matrix(B2), vec![2, 1, 2, 1]),
        (matrix(G2), vec![1, 2, 1, 2, 1, 2]),
        (matrix(AFFINE), vec![1, 2, 1, 2, 1]),
    ] {
        let datum = job(m, &word).build_datum().unwrap();
        let pr = datum.analyze().unwrap().predicates();
        assert!(pr.distinguished && pr.integral && pr.strongly_integral, "{word:?}");
    }
}

#[test]
fn b2_preset_uses_long_root() {
    let j = job(matrix(B2), &[2, 1, 2]);
    assert_eq!(j.bott_samelson_c(), BTreeMap::from([(0, rat(-4))]));
}

#[test]
fn cgl_holds_for_cartan_deformations() {
    for (m, word) in
        [(matrix(A2), vec![1, 2, 1, 2]), (matrix(G2), vec![2, 1, 2, 1, 2]), (matrix(AFFINE), vec![1, 2, 1, 2, 1, 2])]
    {
        let j = job(m, &word);
        let datum = j.build_datum().unwrap();
        let d = j.deformation(DeformConfig::default()).unwrap();
        let report = check_cgl(&datum, &d.total).unwrap();
        assert!(report.passes, "{word:?}: {:?}", report.failures);
    }
}

#[test]
fn cgl_violation_is_located() {
    let j = job(matrix(A2), &[1, 2, 1, 2]);
    let datum = j.build_datum().unwrap();
    let pi = &datum.induced_structure().log_canonical_bivector() + &term(4, 1, &[0, 0, 0, 1], &[0, 1]);
    let report = check_cgl(&datum, &pi).unwrap();
    assert!(!report.passes);
    let triangular: Vec<_> = report.failures.iter().filter(|f| f.condition == CglCondition::Triangular).collect();
    assert_eq!(triangular.len(), 1);
    assert_eq!(triangular[0].pair, Some((0, 1)));
    assert_eq!(triangular[0].monomial, Some(vec![0, 0, 0, 1]));
    assert_eq!(triangular[0].detail, "(1,2,x4^1)");
}

#[test]
fn pfaffian_of_cartan_log_canonical_part() {
    let j = job(matrix(B2), &[1, 2, 1, 2, 1]);
    let l = j.build_datum().unwrap().induced_structure();
    let pf = t_pfaffian(&l, &l.log_canonical_bivector()).unwrap();
    assert_eq!(pf, term(5, 1, &[1; 5], &[0, 1, 2, 3, 4]));
}

#[test]
fn custom_coefficients_are_respected() {
    let j = job(matrix(A2), &[1, 2, 1]).with_coefficients(BTreeMap::from([(0, Rational::from_integer(7.into()))]));
    let d = j.deformation(DeformConfig::default()).unwrap();
    assert_eq!(d.orders[1], term(3, 7, &[0, 1, 0], &[0, 2]));
    let bad = job(matrix(A2), &[1, 2, 1]).with_coefficients(BTreeMap::from([(1, rat(1))]));
    assert!(bad.deformation(DeformConfig::default()).is_err());
}
