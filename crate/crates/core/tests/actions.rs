mod common;

use std::collections::HashMap;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use s5kit::action::{
    canonical_action, decompose_faithful, disjoint_union, faithful_part, orbits, relabel,
    validate_action, SymmetricAction,
};
use s5kit::surjection::{enumerate_permutations, factorial, Permutation};

/// A random action of `S_m`: a shuffled union of copies of the canonical
/// action and of trivial points.
fn random_action(seed: u64, m: usize) -> SymmetricAction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = SymmetricAction::trivial(m, rand::Rng::gen_range(&mut rng, 0..3)).unwrap();
    for _ in 0..rand::Rng::gen_range(&mut rng, 0..3) {
        a = disjoint_union(&a, &canonical_action(m).unwrap()).unwrap();
    }
    let mut pi: Vec<usize> = (0..a.carrier()).collect();
    pi.shuffle(&mut rng);
    relabel(&a, &pi).unwrap()
}

/// Every permutation's table, reached from the identity by multiplying on
/// the right by generators: `a(τ∘g, x) = a(g, a(τ, x))`.
fn table_oracle(a: &SymmetricAction) -> HashMap<Permutation, Vec<usize>> {
    let m = a.degree();
    let gens = [
        (Permutation::transposition(m, 1, 2.min(m)), a.gen_swap().to_vec()),
        (Permutation::cycle(m), a.gen_cycle().to_vec()),
    ];
    let mut known = HashMap::from([(Permutation::identity(m), (0..a.carrier()).collect::<Vec<_>>())]);
    let mut frontier = vec![Permutation::identity(m)];
    while let Some(tau) = frontier.pop() {
        let t = known[&tau].clone();
        for (g, gt) in &gens {
            let next = tau.compose(g);
            if !known.contains_key(&next) {
                known.insert(next.clone(), t.iter().map(|&x| gt[x]).collect());
                frontier.push(next);
            }
        }
    }
    known
}

#[test]
fn apply_matches_table_oracle() {
    for m in 1..=4 {
        for seed in 0..5 {
            let a = random_action(seed, m);
            let oracle = table_oracle(&a);
            assert_eq!(oracle.len(), factorial(m));
            for sigma in enumerate_permutations(m).unwrap() {
                for x in 0..a.carrier() {
                    assert_eq!(a.apply(&sigma, x).unwrap(), oracle[&sigma][x], "m={m} σ={sigma:?} x={x}");
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn faithful_orbits_have_size_m_factorial(seed in common::seed(), m in 1usize..=4) {
        let a = random_action(seed, m);
        prop_assert!(validate_action(&a).unwrap().passes());
        let split = faithful_part(&a).unwrap();
        for orbit in orbits(&split.faithful).members() {
            prop_assert_eq!(orbit.len(), factorial(m));
        }
        prop_assert_eq!(split.faithful.carrier() % factorial(m), 0);
    }

    #[test]
    fn faithful_split_reassembles(seed in common::seed(), m in 1usize..=4) {
        let a = random_action(seed, m);
        let split = faithful_part(&a).unwrap();
        let joined = disjoint_union(&split.faithful, &split.rest).unwrap();
        let order: Vec<usize> = split.faithful_elements.iter().chain(&split.rest_elements).copied().collect();
        prop_assert_eq!(relabel(&joined, &order).unwrap(), a);
    }

    #[test]
    fn intertwiners_commute_with_generators(seed in common::seed(), m in 1usize..=4) {
        let a = random_action(seed, m);
        let faithful = faithful_part(&a).unwrap().faithful;
        let c = canonical_action(m).unwrap();
        for iso in decompose_faithful(&faithful).unwrap() {
            for &x in &iso.elements {
                let r = iso.rank_of(x).unwrap();
                prop_assert_eq!(iso.rank_of(faithful.gen_swap()[x]), Some(c.gen_swap()[r]));
                prop_assert_eq!(iso.rank_of(faithful.gen_cycle()[x]), Some(c.gen_cycle()[r]));
            }
        }
    }

    #[test]
    fn action_json_round_trip(seed in common::seed(), m in 1usize..=4) {
        let a = random_action(seed, m);
        let text = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<SymmetricAction>(&text).unwrap(), a);
    }
}
