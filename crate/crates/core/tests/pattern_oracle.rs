use beatty_core::beatty::BeattyContext;
use beatty_core::circle::{CirclePoint, OrientedInterval};
use beatty_core::exact::{IrrationalSlope, Rational};
use beatty_core::pattern::{
    a_set_member, b_set_member, membership_via_u, membership_via_v, normalize_query, realizes_pattern, satisfies,
    some_root_in, u_family, v_family, Certificate, PatternQuery,
};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn slopes() -> Vec<BeattyContext> {
    vec![
        BeattyContext::new(IrrationalSlope::golden()),
        BeattyContext::new(IrrationalSlope::sqrt(2).unwrap()),
        BeattyContext::new(IrrationalSlope::new(1, 1, 2, 13).unwrap()),
        BeattyContext::new(IrrationalSlope::new(1, 1, 1, 3).unwrap()),
    ]
}

fn brute(ctx: &BeattyContext, q: &PatternQuery, bound: i64) -> Option<i64> {
    let ok = |c: i64| (0..q.len()).all(|i| ctx.member_p(q.a[i] + q.k[i] * c) == q.in_set[i]);
    if ok(0) {
        return Some(0);
    }
    (1..=bound).flat_map(|m| [m, -m]).find(|&c| ok(c))
}

fn random_query(rng: &mut ChaCha8Rng, kmin: i64) -> PatternQuery {
    let n = rng.gen_range(1..=4);
    let a = (0..n).map(|_| rng.gen_range(-30..=30)).collect();
    let k = (0..n).map(|_| rng.gen_range(kmin..=6)).collect();
    let idx: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    PatternQuery::new(a, k, &idx).unwrap()
}

fn random_point(ctx: &BeattyContext, rng: &mut ChaCha8Rng) -> CirclePoint {
    let rot = Rational::new(BigInt::from(rng.gen_range(-40..=40)), BigInt::from(rng.gen_range(1..=9)));
    let rat = Rational::new(BigInt::from(rng.gen_range(-40..=40)), BigInt::from(rng.gen_range(1..=9)));
    ctx.circle().point(rot, rat)
}

#[test]
fn u_and_v_families_decide_membership() {
    for ctx in slopes() {
        for a in -20..=20 {
            for k in 0..=6u64 {
                for c in -60..=60 {
                    let m = ctx.member_p(a + k as i64 * c);
                    assert_eq!(membership_via_u(&ctx, a, k, c), m, "a={a} k={k} c={c}");
                    assert_eq!(membership_via_v(&ctx, a, k, c), !m, "a={a} k={k} c={c}");
                }
            }
        }
    }
}

#[test]
fn u_and_v_partition_the_circle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for ctx in slopes() {
        for a in [-7, -1, 0, 1, 5] {
            for k in 1..=8u64 {
                let u = u_family(&ctx, a, k);
                let v = v_family(&ctx, a, k);
                let circle = ctx.circle();
                // Slice endpoints are the places most likely to break the partition.
                let mut pts: Vec<CirclePoint> = u.slices.iter().flat_map(|s| [s.lo.clone(), s.hi.clone()]).collect();
                pts.extend((0..200).map(|_| random_point(&ctx, &mut rng)));
                pts.push(circle.one());
                for p in &pts {
                    assert!(u.contains(&ctx, p) ^ v.contains(&ctx, p), "a={a} k={k} p={p:?}");
                }
            }
        }
    }
}

#[test]
fn slices_are_open_and_closed_as_stated() {
    let ctx = BeattyContext::new(IrrationalSlope::golden());
    let u = u_family(&ctx, 3, 4);
    let v = v_family(&ctx, 3, 4);
    assert_eq!(u.slices.len(), 4);
    assert!(u.slices.iter().all(OrientedInterval::is_open));
    assert!(v.slices.iter().all(|s| s.lo_closed && s.hi_closed));
}

#[test]
fn decision_is_sound_and_complete_against_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for ctx in slopes().into_iter().take(2) {
        for _ in 0..300 {
            let q = random_query(&mut rng, 0);
            let d = realizes_pattern(&ctx, &q);
            let b = brute(&ctx, &q, 20_000);
            if d.realizable {
                assert!(satisfies(&ctx, &q, d.witness.unwrap()), "{q:?} {d:?}");
            } else {
                assert!(d.witness.is_none());
                assert_eq!(b, None, "{q:?} {d:?}");
            }
            if b.is_some() {
                assert!(d.realizable, "{q:?}");
            }
        }
    }
}

#[test]
fn negative_slopes_decide_like_their_normal_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let ctx = BeattyContext::new(IrrationalSlope::golden());
    for _ in 0..200 {
        let q = random_query(&mut rng, -6);
        let n = normalize_query(&q);
        assert!(n.k.iter().all(|&k| k >= 0));
        assert_eq!(normalize_query(&n), n);
        for c in -1000..=1000 {
            assert_eq!(satisfies(&ctx, &q, c), satisfies(&ctx, &n, c), "{q:?} c={c}");
        }
        assert_eq!(realizes_pattern(&ctx, &q).realizable, realizes_pattern(&ctx, &n).realizable);
    }
}

#[test]
fn certificates_cover_every_case() {
    let ctx = BeattyContext::new(IrrationalSlope::golden());
    let mut seen = std::collections::HashSet::new();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..2000 {
        seen.insert(realizes_pattern(&ctx, &random_query(&mut rng, 0)).certificate);
    }
    for c in [
        Certificate::FiniteComponent,
        Certificate::UEndpointCase,
        Certificate::VEndpointCase,
        Certificate::KZeroOnly,
        Certificate::Contradictory,
        Certificate::NoCase,
    ] {
        assert!(seen.contains(&c), "{c:?} never fired");
    }
}

#[test]
fn a_and_b_sets_match_root_enumeration() {
    for ctx in slopes().into_iter().take(3) {
        for k in 1..=6u64 {
            for l in 1..=6u64 {
                let u_cache: Vec<_> = (-20..=20).map(|b| u_family(&ctx, b, l)).collect();
                let v_cache: Vec<_> = (-20..=20).map(|b| v_family(&ctx, b, l)).collect();
                for x in -20..=20 {
                    for (i, y) in (-20..=20).enumerate() {
                        assert_eq!(
                            a_set_member(&ctx, k, l, x, y),
                            some_root_in(&ctx, x, k, &u_cache[i]),
                            "A k={k} l={l} x={x} y={y}"
                        );
                        assert_eq!(
                            b_set_member(&ctx, k, l, x, y),
                            some_root_in(&ctx, x, k, &v_cache[i]),
                            "B k={k} l={l} x={x} y={y}"
                        );
                    }
                }
            }
        }
    }
}
