use logpoisson::linalg::{rat, Rational};
use logpoisson::multivec::Multivector;
use proptest::prelude::*;

const DIM: usize = 4;

fn sign(odd: bool) -> Rational {
    if odd {
        rat(-1)
    } else {
        rat(1)
    }
}

fn field(degree: usize) -> impl Strategy<Value = Multivector> {
    let term = (
        -3i64..=3,
        proptest::collection::vec(0u32..=2, DIM),
        proptest::sample::subsequence((0..DIM).collect::<Vec<_>>(), degree),
    );
    proptest::collection::vec(term, 0..=4).prop_map(move |terms| {
        terms
            .into_iter()
            .fold(Multivector::zero(DIM, degree), |acc, (c, e, d)| &acc + &Multivector::term(DIM, rat(c), e, &d))
    })
}

fn any_field() -> impl Strategy<Value = Multivector> {
    (0usize..=3).prop_flat_map(field)
}

fn parity(p: usize, q: usize) -> bool {
    ((p as i64 - 1) * (q as i64 - 1)).rem_euclid(2) == 1
}

/// `sum_i (-1)^i w_{k_i} d_{K without k_i}` as (coefficient, index list) pairs.
fn contract_log(weights: &[i64], dirs: &[usize]) -> Vec<(i64, Vec<usize>)> {
    dirs.iter()
        .enumerate()
        .map(|(i, &k)| {
            let mut rest = dirs.to_vec();
            rest.remove(i);
            let s = if i % 2 == 0 { 1 } else { -1 };
            (s * weights[k], rest)
        })
        .collect()
}

/// Closed form of the bracket of two logarithmic monomials.
fn log_bracket_oracle(u: &[i64], k_dirs: &[usize], w: &[i64], j_dirs: &[usize]) -> Multivector {
    let exps: Vec<i64> = u.iter().zip(w).map(|(a, b)| a + b).collect();
    let degree = (k_dirs.len() + j_dirs.len()).saturating_sub(1);
    let mut out = Multivector::zero(DIM, degree);
    let lead = if k_dirs.len() % 2 == 1 { 1 } else { -1 };
    for (c, rest) in contract_log(w, k_dirs) {
        let dirs: Vec<usize> = rest.iter().chain(j_dirs).copied().collect();
        out = &out + &Multivector::log_term(DIM, rat(lead * c), &exps, &dirs).unwrap();
    }
    for (c, rest) in contract_log(u, j_dirs) {
        let dirs: Vec<usize> = k_dirs.iter().chain(&rest).copied().collect();
        out = &out - &Multivector::log_term(DIM, rat(c), &exps, &dirs).unwrap();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn graded_antisymmetry(u in any_field(), v in any_field()) {
        let (p, q) = (u.degree(), v.degree());
        prop_assume!(p + q > 0);
        let lhs = u.schouten(&v).unwrap();
        let rhs = v.schouten(&u).unwrap().scaled(&-sign(parity(p, q)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn graded_jacobi(u in any_field(), v in any_field(), w in any_field()) {
        let (p, q) = (u.degree(), v.degree());
        prop_assume!(q + w.degree() > 0 && p + q > 0 && p + w.degree() > 0);
        let lhs = u.schouten(&v.schouten(&w).unwrap()).unwrap();
        let a = u.schouten(&v).unwrap().schouten(&w).unwrap();
        let b = v.schouten(&u.schouten(&w).unwrap()).unwrap().scaled(&sign(parity(p, q)));
        prop_assert_eq!(lhs, &a + &b);
    }

    #[test]
    fn leibniz_rule(u in any_field(), v in any_field(), w in any_field()) {
        let (p, q) = (u.degree(), v.degree());
        prop_assume!(p + q + w.degree() > 0 && p + q > 0 && p + w.degree() > 0);
        let lhs = u.schouten(&v.wedge(&w).unwrap()).unwrap();
        let first = u.schouten(&v).unwrap().wedge(&w).unwrap();
        let odd = ((p as i64 - 1) * q as i64).rem_euclid(2) == 1;
        let second = v.wedge(&u.schouten(&w).unwrap()).unwrap().scaled(&sign(odd));
        prop_assert_eq!(lhs, &first + &second);
    }

    #[test]
    fn log_monomials_follow_closed_form(
        u in proptest::collection::vec(0i64..=2, DIM),
        w in proptest::collection::vec(0i64..=2, DIM),
        k_dirs in proptest::sample::subsequence((0..DIM).collect::<Vec<_>>(), 1..=3),
        j_dirs in proptest::sample::subsequence((0..DIM).collect::<Vec<_>>(), 0..=3),
    ) {
        let a = Multivector::log_term(DIM, rat(1), &u, &k_dirs).unwrap();
        let b = Multivector::log_term(DIM, rat(1), &w, &j_dirs).unwrap();
        prop_assert_eq!(a.schouten(&b).unwrap(), log_bracket_oracle(&u, &k_dirs, &w, &j_dirs));
    }

    #[test]
    fn rescaling_commutes_with_products(
        u in any_field(),
        v in any_field(),
        t in proptest::collection::vec((1i64..=4, any::<bool>()), DIM),
    ) {
        let t: Vec<Rational> = t.into_iter().map(|(x, neg)| if neg { rat(-x) } else { rat(x) }).collect();
        let scale = |m: &Multivector| m.rescale(&t).unwrap();
        prop_assert_eq!(scale(&u.wedge(&v).unwrap()), scale(&u).wedge(&scale(&v)).unwrap());
        prop_assume!(u.degree() + v.degree() > 0);
        prop_assert_eq!(scale(&u.schouten(&v).unwrap()), scale(&u).schouten(&scale(&v)).unwrap());
    }

    #[test]
    fn weight_pieces_sum_back(u in any_field()) {
        let mut acc = Multivector::zero(DIM, u.degree());
        for (w, piece) in u.weight_decompose() {
            prop_assert!(piece.is_homogeneous_of(&w));
            acc = &acc + &piece;
        }
        prop_assert_eq!(acc, u);
    }
}
