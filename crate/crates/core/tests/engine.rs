use pilab_core::algebra::{cyclic_quotient, AlgebraSpec};
use pilab_core::polyspace::monomial::MonomialMode;
use pilab_core::polyspace::rank::ExactPolicy;
use pilab_core::polyspace::{codimension_brute, codimension_structure, Engine, EngineOptions};
use proptest::prelude::*;

const WORDS: [&str; 4] = ["periodic:01", "periodic:10", "periodic:1", "mechanical:alpha=0.3819660113,rho=0"];

fn spec(m: usize, w: &str, unital: bool) -> AlgebraSpec {
    AlgebraSpec::new(m, w.parse().unwrap(), unital).unwrap()
}

fn codims(s: &AlgebraSpec, opts: EngineOptions, upto: usize) -> Vec<usize> {
    let mut e = Engine::new(s.clone(), opts).unwrap();
    (1..=upto).map(|n| e.codimension(n).unwrap().0).collect()
}

#[test]
fn exact_elimination_agrees_with_modular_ranks() {
    for w in WORDS {
        for unital in [false, true] {
            let s = spec(2, w, unital);
            let exact = EngineOptions {
                exact: ExactPolicy::Always,
                ..EngineOptions::default()
            };
            assert_eq!(codims(&s, EngineOptions::default(), 5), codims(&s, exact, 5), "{w} unital={unital}");
        }
    }
}

#[test]
fn untruncated_windows_give_the_same_codimensions() {
    for w in ["periodic:01", "mechanical:alpha=0.3819660113,rho=0"] {
        for unital in [false, true] {
            let s = spec(2, w, unital);
            let base = codims(&s, EngineOptions::default(), 5);
            for extra in [0, 2] {
                let wide = EngineOptions {
                    truncate_windows: false,
                    window_extra: extra,
                    ..EngineOptions::default()
                };
                assert_eq!(base, codims(&s, wide, 5), "{w} unital={unital} extra={extra}");
            }
        }
    }
}

#[test]
fn all_bracketings_agree_with_left_normed_rows() {
    let s = spec(2, "periodic:01", false);
    let all = EngineOptions {
        non_unital_rows: MonomialMode::All,
        ..EngineOptions::default()
    };
    assert_eq!(codims(&s, EngineOptions::default(), 5), codims(&s, all, 5));
}

#[test]
fn brute_force_agrees_up_to_degree_four() {
    for w in WORDS {
        for unital in [false, true] {
            let s = spec(2, w, unital);
            let fast = codims(&s, EngineOptions::default(), 4);
            let brute: Vec<usize> = (1..=4)
                .map(|n| codimension_brute(n, &s, MonomialMode::All, &EngineOptions::default()).unwrap().0)
                .collect();
            assert_eq!(fast, brute, "{w} unital={unital}");
        }
    }
}

#[test]
fn cyclic_quotient_matches_low_degrees() {
    for w in ["periodic:1", "periodic:01"] {
        for unital in [false, true] {
            let s = spec(2, w, unital);
            let q = cyclic_quotient(&s).unwrap();
            let fast = codims(&s, EngineOptions::default(), 4);
            let finite: Vec<usize> = (1..=4)
                .map(|n| codimension_structure(n, &q, &EngineOptions::default()).unwrap().0)
                .collect();
            assert_eq!(fast, finite, "{w} unital={unital}");
        }
    }
}

#[test]
fn unit_only_adds_codimension_and_sequences_grow() {
    for w in WORDS {
        let plain = codims(&spec(2, w, false), EngineOptions::default(), 6);
        let sharp = codims(&spec(2, w, true), EngineOptions::default(), 5);
        for n in 0..5 {
            assert!(sharp[n] >= plain[n], "{w} n={}", n + 1);
        }
        assert!(plain.windows(2).all(|x| x[0] <= x[1]), "{w} {plain:?}");
        assert!(sharp.windows(2).all(|x| x[0] <= x[1]), "{w} {sharp:?}");
    }
}

#[test]
fn cap_is_enforced_without_override() {
    let mut e = Engine::new(spec(2, "periodic:01", true), EngineOptions::default()).unwrap();
    assert!(e.codimension(8).is_err());
}

#[test]
fn larger_m_is_supported() {
    let s = spec(3, "periodic:01", false);
    let c = codims(&s, EngineOptions::default(), 4);
    let brute: Vec<usize> = (1..=4)
        .map(|n| codimension_brute(n, &s, MonomialMode::All, &EngineOptions::default()).unwrap().0)
        .collect();
    assert_eq!(c, brute);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn homogeneous_dim_ignores_block_order(mut mu in proptest::collection::vec(1usize..=3, 1..=3), unital: bool) {
        prop_assume!(mu.iter().sum::<usize>() <= 5);
        let s = spec(2, "periodic:01", unital);
        let mut e = Engine::new(s, EngineOptions::default()).unwrap();
        let (d1, _) = e.homogeneous_dim(&mu).unwrap();
        mu.reverse();
        let (d2, _) = e.homogeneous_dim(&mu).unwrap();
        prop_assert_eq!(d1, d2);
    }

    #[test]
    fn certificate_totals_are_consistent(n in 1usize..=5, unital: bool, w in 0usize..4) {
        let s = spec(2, WORDS[w], unital);
        let mut e = Engine::new(s, EngineOptions::default()).unwrap();
        let (c, cert) = e.codimension(n).unwrap();
        prop_assert_eq!(c, cert.rank);
        prop_assert!(cert.rank <= cert.rows.min(cert.cols));
    }
}
