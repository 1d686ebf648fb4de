mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use s5kit::family::{
    canonical_relabeling, family_to_pmorphism_between, from_cluster_family, pmorphism_to_family,
    to_cluster_family, ClusterFamily, FamilyMorphism,
};
use s5kit::frame::{
    all_frames, all_pmorphisms, cluster_signature, frame_coequalizer, frame_coproduct,
    validate_pmorphism, Frame, PMorphism,
};
use s5kit::random::{random_pmorphism, random_pmorphism_from};

fn parallel_pair(seed: u64, max: usize) -> (PMorphism, PMorphism) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let a = s5kit::random::random_frame(&mut rng, 1, max);
        let f = random_pmorphism_from(&mut rng, &a, max);
        if let Some(g) = random_pmorphism(&mut rng, &a, f.target()) {
            return (f, g);
        }
    }
}

#[test]
fn family_round_trips_on_all_small_frames() {
    for n in 0..=5 {
        for frame in all_frames(n) {
            let family = to_cluster_family(&frame);
            let back = from_cluster_family(&family);
            assert_eq!(cluster_signature(&back), cluster_signature(&frame));
            let iso = canonical_relabeling(&frame);
            assert_eq!(iso.target(), &back);
            let mut seen = iso.map().to_vec();
            seen.sort_unstable();
            assert_eq!(seen, (1..=n).collect::<Vec<_>>());
            assert_eq!(to_cluster_family(&back), family);
        }
    }
}

#[test]
fn morphism_round_trips_on_small_frames() {
    let frames: Vec<Frame> = (1..=4).flat_map(all_frames).collect();
    for a in &frames {
        for b in &frames {
            for f in all_pmorphisms(a, b) {
                let fam: FamilyMorphism = pmorphism_to_family(&f);
                assert_eq!(family_to_pmorphism_between(&fam, a, b).unwrap(), f);
            }
        }
    }
}

#[test]
fn coproduct_injections_cover_and_signatures_add() {
    let frames: Vec<Frame> = (0..=3).flat_map(all_frames).collect();
    for a in &frames {
        for b in &frames {
            let (sum, inj) = frame_coproduct(&[a.clone(), b.clone()]);
            let mut hit = vec![false; sum.worlds()];
            for i in &inj {
                for &w in i.map() {
                    hit[w - 1] = true;
                }
            }
            assert!(hit.into_iter().all(|h| h));
            let mut sig = cluster_signature(a);
            sig.extend(cluster_signature(b));
            sig.sort_unstable();
            assert_eq!(cluster_signature(&sum), sig);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn coequalizer_projection_is_a_pmorphism(seed in common::seed()) {
        let (f, g) = parallel_pair(seed, 6);
        let (quotient, q) = frame_coequalizer(&f, &g).unwrap();
        prop_assert!(validate_pmorphism(q.map().to_vec(), f.target(), &quotient).is_ok());
        prop_assert_eq!(q.compose(&f).unwrap(), q.compose(&g).unwrap());
    }
}

proptest! {
    #[test]
    fn frame_json_round_trip(frame in common::frame(0, 8)) {
        let text = serde_json::to_string(&frame).unwrap();
        prop_assert_eq!(serde_json::from_str::<Frame>(&text).unwrap(), frame);
    }

    #[test]
    fn pmorphism_and_family_json_round_trip(seed in common::seed()) {
        let (f, _) = parallel_pair(seed, 6);
        let text = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(serde_json::from_str::<PMorphism>(&text).unwrap(), f.clone());
        let fam = pmorphism_to_family(&f);
        let text = serde_json::to_string(&fam).unwrap();
        prop_assert_eq!(serde_json::from_str::<FamilyMorphism>(&text).unwrap(), fam.clone());
        let text = serde_json::to_string(fam.source()).unwrap();
        prop_assert_eq!(&serde_json::from_str::<ClusterFamily>(&text).unwrap(), fam.source());
    }

    #[test]
    fn pmorphisms_compose(seed in common::seed()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = s5kit::random::random_frame(&mut rng, 1, 6);
        let f = random_pmorphism_from(&mut rng, &a, 6);
        let g = random_pmorphism_from(&mut rng, f.target(), 6);
        let gf = g.compose(&f).unwrap();
        prop_assert!(validate_pmorphism(gf.map().to_vec(), &a, g.target()).is_ok());
        let fam = pmorphism_to_family(&g).compose(&pmorphism_to_family(&f)).unwrap();
        prop_assert_eq!(fam, pmorphism_to_family(&gf));
    }
}
