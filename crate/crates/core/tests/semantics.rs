mod common;

use mcpnet::gadgets::direct_net;
use mcpnet::oracle::{closure_of, reachable};
use mcpnet::semantics::{
    dominated_set, dominates, dominates_with, dominating_set, forward_sweep_optimum,
    improving_flips, incomparable, is_optimal, ordering_query,
};
use mcpnet::{Error, Outcome, SearchConfig};
use proptest::prelude::*;

use common::{dinner, o, random_net, rng};

#[test]
fn dinner_flips_and_dominance() {
    let net = dinner();
    let flips: Vec<String> = improving_flips(&net, &o("10"))
        .unwrap()
        .into_iter()
        .map(|(_, x)| x.to_string())
        .collect();
    assert_eq!(flips, ["00", "11"]);
    assert!(improving_flips(&net, &o("00")).unwrap().is_empty());

    let ans = dominates(&net, &o("00"), &o("10")).unwrap();
    assert!(ans.holds);
    let w = ans.witness.unwrap();
    assert_eq!(w.len(), 1);
    assert!(w.verify(&net));

    let longest = dominates(&net, &o("00"), &o("11")).unwrap().witness.unwrap();
    assert_eq!(longest.len(), 2);
    assert!(!dominates(&net, &o("10"), &o("00")).unwrap().holds);
    assert!(!dominates(&net, &o("00"), &o("00")).unwrap().holds);
}

#[test]
fn optimality() {
    let net = dinner();
    assert_eq!(forward_sweep_optimum(&net).unwrap(), o("00"));
    assert!(is_optimal(&net, &o("00")).unwrap());
    assert!(!is_optimal(&net, &o("01")).unwrap());
    assert!(ordering_query(&net, &o("00"), &o("11")).unwrap());
    assert!(!ordering_query(&net, &o("11"), &o("00")).unwrap());
}

#[test]
fn equal_outcomes_are_rejected_by_incomparable() {
    let net = dinner();
    assert!(matches!(incomparable(&net, &o("01"), &o("01")), Err(Error::EqualOutcomes)));
    assert!(matches!(
        dominates(&net, &o("001"), &o("00")),
        Err(Error::DimensionMismatch { expected: 2, found: 3 })
    ));
}

#[test]
fn state_budget() {
    let names: Vec<String> = (0..12).map(|i| format!("F{i}")).collect();
    let net = direct_net(&names, &Outcome::ones(12)).unwrap();
    let tight = SearchConfig { max_states: 8 };
    let err = dominates_with(&net, &Outcome::ones(12), &Outcome::zeros(12), &tight).unwrap_err();
    assert!(err.is_resource_limit());
    assert!(dominates(&net, &Outcome::ones(12), &Outcome::zeros(12)).unwrap().holds);
}

#[test]
fn direct_net_dominance_law() {
    let alpha = o("0101");
    let names: Vec<String> = (0..4).map(|i| format!("F{i}")).collect();
    let net = direct_net(&names, &alpha).unwrap();
    assert_eq!(forward_sweep_optimum(&net).unwrap(), alpha);
    for beta in Outcome::all(4).filter(|b| b != &alpha) {
        let w = dominates(&net, &alpha, &beta).unwrap().witness.unwrap();
        assert_eq!(w.len(), alpha.hamming(&beta));
    }
}

#[test]
fn wide_nets_fall_back_to_outcome_states() {
    let names: Vec<String> = (0..70).map(|i| format!("F{i}")).collect();
    let alpha = Outcome::zeros(70).with_flipped(mcpnet::FeatureId(69));
    let net = direct_net(&names, &alpha).unwrap();
    let ans = dominates(&net, &alpha, &Outcome::zeros(70)).unwrap();
    assert!(ans.holds);
    assert_eq!(ans.witness.unwrap().len(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dominance_is_a_strict_order(seed in any::<u64>(), n in 1usize..7) {
        let net = random_net(&mut rng(seed), n, 3);
        let closure = closure_of(&net, 14).unwrap();
        for a in Outcome::all(n) {
            prop_assert!(!closure.reach(&a, &a));
            let above = dominating_set(&net, &a, &SearchConfig::default()).unwrap();
            prop_assert_eq!(above.len(), closure.above(&a).len());
            for b in &above {
                prop_assert!(!dominates(&net, &a, b).unwrap().holds, "cycle through {} and {}", a, b);
                for c in dominating_set(&net, b, &SearchConfig::default()).unwrap() {
                    prop_assert!(closure.reach(&a, &c), "transitivity");
                }
            }
        }
    }

    #[test]
    fn witnesses_replay(seed in any::<u64>(), n in 1usize..9) {
        let net = random_net(&mut rng(seed), n, 3);
        let start = Outcome::from_index(n, seed % (1 << n));
        for end in dominating_set(&net, &start, &SearchConfig::default()).unwrap() {
            let w = dominates(&net, &end, &start).unwrap().witness.unwrap();
            prop_assert!(w.verify(&net));
        }
    }

    #[test]
    fn dominated_set_mirrors_dominating_set(seed in any::<u64>(), n in 1usize..7) {
        let net = random_net(&mut rng(seed), n, 2);
        let a = Outcome::from_index(n, seed.rotate_left(7) % (1 << n));
        for b in dominated_set(&net, &a, &SearchConfig::default()).unwrap() {
            prop_assert!(dominates(&net, &a, &b).unwrap().holds);
        }
        let below = dominated_set(&net, &a, &SearchConfig::default()).unwrap().len();
        let truth = Outcome::all(n).filter(|b| dominates(&net, &a, b).unwrap().holds).count();
        prop_assert_eq!(below, truth);
    }

    #[test]
    fn forward_sweep_gives_the_unique_undominated_outcome(seed in any::<u64>(), n in 1usize..9) {
        let net = random_net(&mut rng(seed), n, 3);
        let opt = forward_sweep_optimum(&net).unwrap();
        for a in Outcome::all(n) {
            prop_assert_eq!(is_optimal(&net, &a).unwrap(), a == opt);
            if a != opt {
                prop_assert!(reachable(&net, &a, 1 << 20).unwrap().contains(&opt));
            }
        }
    }

    #[test]
    fn incomparability_is_symmetric(seed in any::<u64>(), n in 1usize..6) {
        let net = random_net(&mut rng(seed), n, 3);
        for a in Outcome::all(n) {
            for b in Outcome::all(n).filter(|b| b != &a) {
                let ab = incomparable(&net, &a, &b).unwrap();
                prop_assert_eq!(ab, incomparable(&net, &b, &a).unwrap());
                let either = dominates(&net, &a, &b).unwrap().holds || dominates(&net, &b, &a).unwrap().holds;
                prop_assert_eq!(ab, !either);
            }
        }
    }
}
