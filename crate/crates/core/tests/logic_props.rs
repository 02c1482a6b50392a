use beatty_core::beatty::BeattyContext;
use beatty_core::exact::IrrationalSlope;
use beatty_core::logic::{
    eliminate, eval_ground, eval_sentence, parse, parse_sentence, pattern_variable, Atom, Env, Formula, Term,
};
use beatty_core::pattern::{realizes_pattern, PatternQuery};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn slopes() -> Vec<BeattyContext> {
    vec![
        BeattyContext::new(IrrationalSlope::golden()),
        BeattyContext::new(IrrationalSlope::sqrt(2).unwrap()),
        BeattyContext::new(IrrationalSlope::new(1, 1, 2, 13).unwrap()),
        BeattyContext::new(IrrationalSlope::new(3, 1, 1, 5).unwrap()),
    ]
}

fn term() -> impl Strategy<Value = Term> {
    (-50i64..=50, prop::collection::vec((prop::sample::select(vec!["x", "y", "z1", "w_2"]), -6i64..=6), 0..3))
        .prop_map(|(c, vs)| Term::new(c, vs.into_iter().map(|(v, k)| (v.to_string(), k))))
}

fn atom() -> impl Strategy<Value = Formula> {
    prop_oneof![
        term().prop_map(Formula::eq0),
        term().prop_map(Formula::in_p),
        (1i64..=7, term()).prop_map(|(m, t)| Formula::Atom(Atom::DivPlus(m, t))),
        (1i64..=7, term()).prop_map(|(m, t)| Formula::Atom(Atom::DivMinus(m, t))),
    ]
}

fn formula() -> impl Strategy<Value = Formula> {
    atom().prop_recursive(4, 24, 4, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::And),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::Or),
            (prop::sample::select(vec!["x", "y", "v"]), inner).prop_map(|(v, f)| Formula::exists(v, f)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn printing_round_trips(f in formula()) {
        let text = f.to_string();
        prop_assert_eq!(parse(&text).unwrap(), f, "{}", text);
    }

    #[test]
    fn d_atoms_split_the_multiples(m in 1i64..=9, c in -40i64..=40, k in -5i64..=5, x in -1000i64..=1000) {
        let ctx = BeattyContext::new(IrrationalSlope::golden());
        let t = Term::new(c, [("x".to_string(), k)]);
        let env: Env = [("x".to_string(), x)].into_iter().collect();
        let plus = eval_ground(&Formula::Atom(Atom::DivPlus(m, t.clone())), &env, &ctx).unwrap();
        let minus = eval_ground(&Formula::Atom(Atom::DivMinus(m, t.clone())), &env, &ctx).unwrap();
        let v = c + k * x;
        prop_assert!(!(plus && minus));
        prop_assert_eq!(plus || minus, v % m == 0);
        if m == 1 {
            prop_assert_eq!(plus, eval_ground(&Formula::in_p(t), &env, &ctx).unwrap());
        }
    }
}

#[test]
fn json_uses_the_documented_field_names() {
    let f = parse("exists y (P(x + 2*y) | !(y = 3))").unwrap();
    let j = f.to_json();
    assert_eq!(j["kind"], "exists");
    assert_eq!(j["var"], "y");
    assert_eq!(j["args"][0]["kind"], "or");
    assert_eq!(j["args"][0]["args"][0]["coeffs"]["y"], 2);
    assert_eq!(j["args"][0]["args"][1]["args"][0]["constant"], -3);
}

fn brute(ctx: &BeattyContext, a: &[i64], k: &[i64], in_set: &[bool], bound: i64) -> Option<i64> {
    std::iter::once(0)
        .chain((1..=bound).flat_map(|m| [m, -m]))
        .find(|&c| (0..a.len()).all(|i| ctx.member_p(a[i] + k[i] * c) == in_set[i]))
}

#[test]
fn elimination_matches_decision_and_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for ctx in slopes() {
        for _ in 0..25 {
            let n = rng.gen_range(1..=3);
            let k: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=5)).collect();
            let idx: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
            let psi = eliminate(&k, &idx, &ctx).unwrap();
            assert!(psi.is_quantifier_free());
            assert!(psi.free_vars().iter().all(|v| (0..n).any(|i| *v == pattern_variable(i))));
            for _ in 0..40 {
                let a: Vec<i64> = (0..n).map(|_| rng.gen_range(-30..=30)).collect();
                let env: Env = a.iter().enumerate().map(|(i, &x)| (pattern_variable(i), x)).collect();
                let q = PatternQuery::new(a.clone(), k.clone(), &idx).unwrap();
                let decided = realizes_pattern(&ctx, &q).realizable;
                assert_eq!(eval_ground(&psi, &env, &ctx).unwrap(), decided, "k={k:?} I={idx:?} a={a:?}");
                if let Some(c) = brute(&ctx, &a, &k, &q.in_set, 20_000) {
                    assert!(decided, "brute force found {c} for k={k:?} I={idx:?} a={a:?}");
                }
            }
        }
    }
}

#[test]
fn elimination_examples() {
    let ctx = BeattyContext::new(IrrationalSlope::golden());
    let psi = eliminate(&[1], &[0], &ctx).unwrap();
    for x in -50..=50 {
        let env: Env = [("x1".to_string(), x)].into_iter().collect();
        assert!(eval_ground(&psi, &env, &ctx).unwrap());
    }
    assert_eq!(eliminate(&[0], &[0], &ctx).unwrap(), parse("P(x1)").unwrap());
    let psi = eliminate(&[1, 1], &[0], &ctx).unwrap();
    for x1 in -20..=20 {
        for x2 in -20..=20 {
            let env: Env = [("x1".to_string(), x1), ("x2".to_string(), x2)].into_iter().collect();
            let want = brute(&ctx, &[x1, x2], &[1, 1], &[true, false], 100_000).is_some();
            assert_eq!(eval_ground(&psi, &env, &ctx).unwrap(), want, "x1={x1} x2={x2}");
        }
    }
}

#[test]
fn eliminated_formulas_print_and_reparse() {
    let ctx = BeattyContext::new(IrrationalSlope::sqrt(2).unwrap());
    let psi = eliminate(&[2, -3], &[0], &ctx).unwrap();
    assert_eq!(parse(&psi.to_string()).unwrap(), psi);
    assert_eq!(psi.to_string(), eliminate(&[2, -3], &[0], &ctx).unwrap().to_string());
}

#[test]
fn sentences_in_the_fragment_are_exact() {
    let ctx = BeattyContext::new(IrrationalSlope::sqrt(2).unwrap());
    for (text, want) in [
        ("exists y (P(y) & !P(y+1))", true),
        ("exists y (P(3*y + 1) & P(3*y + 2) & P(3*y + 3))", true),
        ("exists y (P(y) & !P(y))", false),
        ("exists y (!P(y) & !P(y + 1) & !P(y + 2))", false),
        ("!exists y (P(2*y) & P(2*y + 1))", false),
    ] {
        let v = eval_sentence(&parse_sentence(text).unwrap(), &ctx, 1000).unwrap();
        assert_eq!((v.value, v.bounded), (want, false), "{text}");
    }
}

#[test]
fn true_existentials_report_a_witness() {
    for ctx in slopes() {
        for text in [
            "exists y (P(y) & !P(y+1))",
            "exists y (P(3*y + 1) & P(3*y + 2))",
            "exists y (P(y + 40) & !P(2*y) & y != 7)",
        ] {
            let f = parse_sentence(text).unwrap();
            let v = eval_sentence(&f, &ctx, 1000).unwrap();
            let Formula::Exists(y, body) = &f else { unreachable!() };
            assert_eq!(v.value, v.witness.is_some(), "{text}");
            if let Some(c) = v.witness {
                let env: Env = [(y.clone(), c)].into_iter().collect();
                assert!(eval_ground(body, &env, &ctx).unwrap(), "{text} at {c}");
            }
        }
    }
}
