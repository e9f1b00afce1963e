use ampc_sim::SimConfig;
use expr_iso::{
    evaluate_expression, match_parens, simplify_expression, stack_match, ExprError, ExprFault,
};
use oracles::expr::{eval_reference, random_expression, EvalError};
use oracles::gen::rng;
use proptest::prelude::*;

fn cfg() -> SimConfig {
    SimConfig::new(256, 0.5).strict(true)
}

#[test]
fn reference_corpus() {
    let mut r = rng(2024);
    let (mut values, mut faults) = (0, 0);
    for _ in 0..1000 {
        let s = random_expression(&mut r, 6);
        let got = evaluate_expression(&s, &cfg());
        match (eval_reference(&s), got) {
            (Ok(want), Ok(e)) => {
                assert_eq!(e.value, want, "{s}");
                values += 1;
            }
            (Err(EvalError::DivisionByZero { pos }), Err(ExprError::Arithmetic(f))) => {
                assert_eq!(f, ExprFault::DivisionByZero(pos), "{s}");
                faults += 1;
            }
            (Err(EvalError::BadExponent { pos }), Err(ExprError::Arithmetic(f))) => {
                assert_eq!(f, ExprFault::BadExponent(pos), "{s}");
                faults += 1;
            }
            (want, got) => panic!("{s}: reference {want:?}, contraction {got:?}"),
        }
    }
    assert_eq!(values + faults, 1000);
    assert!(values > 500, "only {values} finite values");
}

#[test]
fn worked_example_with_unicode_operators() {
    let s = "2+5\u{2212}(3+2\u{d7}6)\u{2212}9";
    let e = evaluate_expression(s, &cfg()).unwrap();
    assert_eq!(e.value, eval_reference(s).unwrap());
    assert_eq!(expr_iso::show(&e.value), "-17");
    assert!(e.total_rounds() > 0);
}

#[test]
fn long_chains_contract() {
    // a left-deep chain of 2000 operators must finish in few phases
    let s: String = std::iter::once("1".to_string())
        .chain((0..2000).map(|i| format!("{}{}", ["+", "*", "-", "/"][i % 4], 1 + i % 7)))
        .collect();
    let e = evaluate_expression(&s, &SimConfig::new(4001, 0.5).strict(true)).unwrap();
    assert_eq!(e.value, eval_reference(&s).unwrap());
    assert!(e.metrics.violations.is_empty());
    assert!(
        e.stats.bounded.len() <= 6,
        "{} phases",
        e.stats.bounded.len()
    );
}

#[test]
fn division_by_zero_names_the_operator() {
    let err = evaluate_expression("3+4/(5-5)*2", &cfg()).unwrap_err();
    assert!(matches!(
        err,
        ExprError::Arithmetic(ExprFault::DivisionByZero(3))
    ));
    assert!(err.to_string().contains("division by zero at 3"));
}

#[test]
fn operator_tree_is_binary() {
    let mut r = rng(5);
    for _ in 0..200 {
        let s = random_expression(&mut r, 6);
        let t = simplify_expression(&s, &cfg()).unwrap();
        assert!(t.tree.max_degree() <= 2);
        let ops = t.tree.len() - t.tree.leaves().count();
        assert_eq!(t.tree.leaves().count(), ops + 1, "{s}");
    }
}

fn balanced(n: usize, seed: u64) -> String {
    use rand::Rng;
    let mut r = rng(seed);
    let mut s = String::new();
    let (mut open, mut left) = (0usize, n);
    while left > 0 || open > 0 {
        if left > 0 && (open == 0 || r.gen_bool(0.5)) {
            s.push('(');
            open += 1;
            left -= 1;
        } else {
            s.push(')');
            open -= 1;
        }
    }
    s
}

#[test]
fn large_balanced_strings_match_the_stack() {
    for (pairs, eps) in [(5000, 0.3), (5000, 0.5), (2000, 0.8)] {
        let s = balanced(pairs, pairs as u64);
        let m = match_parens(&s, &SimConfig::new(s.len(), eps)).unwrap();
        assert_eq!(m.partner, stack_match(&s).unwrap());
    }
}

proptest! {
    #[test]
    fn matcher_equals_stack(pairs in 1usize..400, seed in any::<u64>(), eps in 0.2f64..0.9) {
        let s = balanced(pairs, seed);
        let cfg = SimConfig::new(s.len(), eps);
        let m = match_parens(&s, &cfg).unwrap();
        prop_assert_eq!(&m.partner, &stack_match(&s).unwrap());
        for (i, p) in m.partner.iter().enumerate() {
            prop_assert_eq!(m.partner[p.unwrap()], Some(i));
        }
        prop_assert!(m.peak_runs <= cfg.fan().max(4));
    }

    #[test]
    fn unbalanced_is_rejected(pairs in 1usize..100, seed in any::<u64>(), cut in any::<prop::sample::Index>()) {
        let mut s = balanced(pairs, seed);
        s.remove(cut.index(s.len()));
        prop_assert!(match_parens(&s, &SimConfig::new(s.len(), 0.5)).is_err());
    }
}
