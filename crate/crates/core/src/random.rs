//! Seeded generators for frames, p-morphisms and surjections.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::frame::{validate_pmorphism, Frame, PMorphism};
use crate::surjection::Surjection;

/// A frame on `min..=max` worlds with uniformly random class labels.
pub fn random_frame<R: Rng + ?Sized>(rng: &mut R, min: usize, max: usize) -> Frame {
    let n = rng.gen_range(min..=max);
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n.max(1))).collect();
    Frame::from_labels(&labels)
}

/// A uniformly random surjection `n ↠ m`, by rejection.
pub fn random_surjection<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> Option<Surjection> {
    if m == 0 || m > n {
        return None;
    }
    loop {
        let map: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=m)).collect();
        if let Ok(s) = Surjection::new(map, m) {
            return Some(s);
        }
    }
}

/// A random p-morphism `source → target`: every source class picks a target
/// class no larger than itself and maps onto it. `None` when some source
/// class has nowhere to go.
pub fn random_pmorphism<R: Rng + ?Sized>(
    rng: &mut R,
    source: &Frame,
    target: &Frame,
) -> Option<PMorphism> {
    let tgt = target.block_members();
    let mut map = vec![0; source.worlds()];
    for members in source.block_members() {
        let fits: Vec<&Vec<usize>> = tgt.iter().filter(|t| t.len() <= members.len()).collect();
        let t = fits.choose(rng)?;
        let s = random_surjection(rng, members.len(), t.len())?;
        for (&w, &i) in members.iter().zip(s.values()) {
            map[w - 1] = t[i - 1];
        }
    }
    validate_pmorphism(map, source, target).ok()
}

/// A random p-morphism out of `source` into a random frame on at most `max`
/// worlds, retrying until one exists.
pub fn random_pmorphism_from<R: Rng + ?Sized>(rng: &mut R, source: &Frame, max: usize) -> PMorphism {
    loop {
        let target = random_frame(rng, 1, max);
        if let Some(f) = random_pmorphism(rng, source, &target) {
            return f;
        }
    }
}
