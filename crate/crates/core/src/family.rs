//! Finite families of clusters and the equivalence with finite S5 frames.
//!
//! A [`ClusterFamily`] lists cluster sizes; a [`FamilyMorphism`] is an index
//! map together with one surjection per source cluster. A frame becomes a
//! family by reading off its classes in class-id order, and worlds inside a
//! class are addressed by their rank (1 for the least world of the class).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{Frame, PMorphism};
use crate::partition::first_occurrence;
use crate::surjection::{coequalizer_surj, pushout_surj, Surjection};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "FamilyRepr", into = "FamilyRepr")]
pub struct ClusterFamily {
    sizes: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct FamilyRepr {
    sizes: Vec<usize>,
}

impl TryFrom<FamilyRepr> for ClusterFamily {
    type Error = Error;

    fn try_from(r: FamilyRepr) -> Result<Self> {
        ClusterFamily::new(r.sizes)
    }
}

impl From<ClusterFamily> for FamilyRepr {
    fn from(c: ClusterFamily) -> Self {
        FamilyRepr { sizes: c.sizes }
    }
}

impl ClusterFamily {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.contains(&0) {
            return Err(Error::EmptyCluster);
        }
        Ok(Self { sizes })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn index_size(&self) -> usize {
        self.sizes.len()
    }
}

/// An index map `f: I → J` with surjections `φ_i: X_i ↠ Y_{f(i)}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "FamilyMorphismRepr", into = "FamilyMorphismRepr")]
pub struct FamilyMorphism {
    source: ClusterFamily,
    target: ClusterFamily,
    index_map: Vec<usize>,
    components: Vec<Surjection>,
}

#[derive(Serialize, Deserialize)]
struct FamilyMorphismRepr {
    source: ClusterFamily,
    target: ClusterFamily,
    index_map: Vec<usize>,
    components: Vec<Surjection>,
}

impl TryFrom<FamilyMorphismRepr> for FamilyMorphism {
    type Error = Error;

    fn try_from(r: FamilyMorphismRepr) -> Result<Self> {
        FamilyMorphism::new(r.source, r.target, r.index_map, r.components)
    }
}

impl From<FamilyMorphism> for FamilyMorphismRepr {
    fn from(m: FamilyMorphism) -> Self {
        FamilyMorphismRepr {
            source: m.source,
            target: m.target,
            index_map: m.index_map,
            components: m.components,
        }
    }
}

impl FamilyMorphism {
    pub fn new(
        source: ClusterFamily,
        target: ClusterFamily,
        index_map: Vec<usize>,
        components: Vec<Surjection>,
    ) -> Result<Self> {
        let n = source.index_size();
        for len in [index_map.len(), components.len()] {
            if len != n {
                return Err(Error::SortMismatch {
                    expected: n,
                    found: len,
                });
            }
        }
        for (i, (&j, phi)) in index_map.iter().zip(&components).enumerate() {
            if j == 0 || j > target.index_size() {
                return Err(Error::OutOfRange {
                    position: i + 1,
                    value: j,
                    bound: target.index_size(),
                });
            }
            if phi.dom() != source.sizes[i] {
                return Err(Error::SortMismatch {
                    expected: source.sizes[i],
                    found: phi.dom(),
                });
            }
            if phi.cod() != target.sizes[j - 1] {
                return Err(Error::SortMismatch {
                    expected: target.sizes[j - 1],
                    found: phi.cod(),
                });
            }
        }
        Ok(Self {
            source,
            target,
            index_map,
            components,
        })
    }

    pub fn identity(family: &ClusterFamily) -> Self {
        Self {
            source: family.clone(),
            target: family.clone(),
            index_map: (1..=family.index_size()).collect(),
            components: family.sizes.iter().map(|&s| Surjection::identity(s)).collect(),
        }
    }

    pub fn source(&self) -> &ClusterFamily {
        &self.source
    }

    pub fn target(&self) -> &ClusterFamily {
        &self.target
    }

    pub fn index_map(&self) -> &[usize] {
        &self.index_map
    }

    pub fn components(&self) -> &[Surjection] {
        &self.components
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &FamilyMorphism) -> Result<FamilyMorphism> {
        if first.target != self.source {
            return Err(Error::NotComposable);
        }
        let index_map = first.index_map.iter().map(|&j| self.index_map[j - 1]).collect();
        let components = first
            .index_map
            .iter()
            .zip(&first.components)
            .map(|(&j, phi)| self.components[j - 1].compose_unchecked(phi))
            .collect();
        Ok(FamilyMorphism {
            source: first.source.clone(),
            target: self.target.clone(),
            index_map,
            components,
        })
    }
}

pub fn to_cluster_family(frame: &Frame) -> ClusterFamily {
    ClusterFamily {
        sizes: frame.block_members().iter().map(Vec::len).collect(),
    }
}

/// The frame laying the clusters out consecutively: `[3, 1]` gives blocks
/// `[1, 1, 1, 2]`.
pub fn from_cluster_family(family: &ClusterFamily) -> Frame {
    let blocks: Vec<usize> = family
        .sizes
        .iter()
        .enumerate()
        .flat_map(|(i, &s)| std::iter::repeat_n(i + 1, s))
        .collect();
    Frame::new(blocks).expect("consecutive layout is canonical")
}

/// Rank of each world inside its class, 1-based.
fn ranks(frame: &Frame) -> Vec<usize> {
    let mut ranks = vec![0; frame.worlds()];
    for members in frame.block_members() {
        for (r, &w) in members.iter().enumerate() {
            ranks[w - 1] = r + 1;
        }
    }
    ranks
}

/// The isomorphism from `frame` onto its consecutive relabeling
/// `from_cluster_family(to_cluster_family(frame))`.
pub fn canonical_relabeling(frame: &Frame) -> PMorphism {
    let family = to_cluster_family(frame);
    let target = from_cluster_family(&family);
    let mut offsets = vec![0; family.index_size()];
    for i in 1..offsets.len() {
        offsets[i] = offsets[i - 1] + family.sizes[i - 1];
    }
    let rank = ranks(frame);
    let map = (1..=frame.worlds())
        .map(|w| offsets[frame.block_of(w) - 1] + rank[w - 1])
        .collect();
    PMorphism::from_parts(frame.clone(), target, map)
}

/// Restricts a p-morphism to each source class.
pub fn pmorphism_to_family(f: &PMorphism) -> FamilyMorphism {
    let (src, tgt) = (f.source(), f.target());
    let tgt_rank = ranks(tgt);
    let mut index_map = Vec::with_capacity(src.block_count());
    let mut components = Vec::with_capacity(src.block_count());
    for members in src.block_members() {
        let j = tgt.block_of(f.apply(members[0]));
        let size = tgt.block_members()[j - 1].len();
        let phi = members.iter().map(|&w| tgt_rank[f.apply(w) - 1]).collect();
        index_map.push(j);
        components.push(Surjection::from_parts(phi, size));
    }
    FamilyMorphism {
        source: to_cluster_family(src),
        target: to_cluster_family(tgt),
        index_map,
        components,
    }
}

/// Reassembles a family morphism between the consecutive layouts of its
/// source and target families.
pub fn family_to_pmorphism(m: &FamilyMorphism) -> Result<PMorphism> {
    family_to_pmorphism_between(m, &from_cluster_family(&m.source), &from_cluster_family(&m.target))
}

/// Reassembles a family morphism between given frames whose classes match
/// the source and target families.
pub fn family_to_pmorphism_between(
    m: &FamilyMorphism,
    source: &Frame,
    target: &Frame,
) -> Result<PMorphism> {
    if to_cluster_family(source) != m.source || to_cluster_family(target) != m.target {
        return Err(Error::NotComposable);
    }
    let tgt_members = target.block_members();
    let src_rank = ranks(source);
    let map = (1..=source.worlds())
        .map(|w| {
            let i = source.block_of(w) - 1;
            let j = m.index_map[i];
            tgt_members[j - 1][m.components[i].apply(src_rank[w - 1]) - 1]
        })
        .collect();
    crate::frame::validate_pmorphism(map, source, target)
}

/// Coequalizer of parallel family morphisms, built cluster-wise.
///
/// First, while some source index `i` has `f(i)` and `g(i)` in different
/// target classes, those two classes are merged and their clusters replaced
/// by the pushout of `φ_i` and `γ_i`. Once the index maps agree, each merged
/// cluster is quotiented by the iterated coequalizer of all component pairs
/// landing in it. Returns the quotient family and the projection onto it.
pub fn family_coequalizer(
    f: &FamilyMorphism,
    g: &FamilyMorphism,
) -> Result<(ClusterFamily, FamilyMorphism)> {
    if f.source != g.source || f.target != g.target {
        return Err(Error::NotParallel);
    }
    let target = &f.target;
    let jn = target.index_size();
    // class[j]: current merged class of target index j (a representative
    // index); proj[j]: Y_j ↠ cluster of that class; size[c]: cluster size.
    let mut class: Vec<usize> = (0..jn).collect();
    let mut size = target.sizes.clone();
    let mut proj: Vec<Surjection> = target.sizes.iter().map(|&s| Surjection::identity(s)).collect();

    loop {
        let split = (0..f.source.index_size())
            .find(|&i| class[f.index_map[i] - 1] != class[g.index_map[i] - 1]);
        let Some(i) = split else { break };
        let (j1, j2) = (f.index_map[i] - 1, g.index_map[i] - 1);
        let a = proj[j1].compose_unchecked(&f.components[i]);
        let b = proj[j2].compose_unchecked(&g.components[i]);
        let (to_left, to_right) = pushout_surj(&a, &b)?;
        let (c1, c2) = (class[j1], class[j2]);
        let keep = c1.min(c2);
        for j in 0..jn {
            if class[j] == c1 {
                proj[j] = to_left.compose_unchecked(&proj[j]);
                class[j] = keep;
            } else if class[j] == c2 {
                proj[j] = to_right.compose_unchecked(&proj[j]);
                class[j] = keep;
            }
        }
        size[keep] = to_left.cod();
    }

    let mut quotient: Vec<Surjection> = size.iter().map(|&s| Surjection::identity(s.max(1))).collect();
    for i in 0..f.source.index_size() {
        let (j1, j2) = (f.index_map[i] - 1, g.index_map[i] - 1);
        let c = class[j1];
        let a = quotient[c].compose_unchecked(&proj[j1].compose_unchecked(&f.components[i]));
        let b = quotient[c].compose_unchecked(&proj[j2].compose_unchecked(&g.components[i]));
        let e = coequalizer_surj(&a, &b)?;
        quotient[c] = e.compose_unchecked(&quotient[c]);
    }

    let (labels, count) = first_occurrence(&class);
    let mut sizes = vec![0; count];
    for j in 0..jn {
        sizes[labels[j] - 1] = quotient[class[j]].cod();
    }
    let result = ClusterFamily { sizes };
    let projection = FamilyMorphism {
        source: target.clone(),
        target: result.clone(),
        index_map: labels,
        components: (0..jn)
            .map(|j| quotient[class[j]].compose_unchecked(&proj[j]))
            .collect(),
    };
    Ok((result, projection))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{all_frames, all_pmorphisms, validate_pmorphism};
    use crate::surjection::make_surjection;

    #[test]
    fn frame_family_examples() {
        let f = Frame::new(vec![1, 1, 2]).unwrap();
        assert_eq!(to_cluster_family(&f).sizes(), &[2, 1]);
        let c = ClusterFamily::new(vec![3]).unwrap();
        assert_eq!(from_cluster_family(&c), Frame::cluster(3));
        assert_eq!(ClusterFamily::new(vec![2, 0]), Err(Error::EmptyCluster));
    }

    #[test]
    fn object_round_trip_up_to_relabeling() {
        for n in 0..=5 {
            for f in all_frames(n) {
                let back = from_cluster_family(&to_cluster_family(&f));
                let iso = canonical_relabeling(&f);
                assert_eq!(iso.target(), &back);
                let mut seen = iso.map().to_vec();
                seen.sort_unstable();
                assert_eq!(seen, (1..=n).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn morphism_examples() {
        let c2 = Frame::cluster(2);
        let m = pmorphism_to_family(&PMorphism::identity(&c2));
        assert_eq!(m, FamilyMorphism::identity(&ClusterFamily::new(vec![2]).unwrap()));

        let collapse = validate_pmorphism(vec![1, 1], &c2, &Frame::cluster(1)).unwrap();
        let m = pmorphism_to_family(&collapse);
        assert_eq!(m.index_map(), &[1]);
        assert_eq!(m.components(), &[make_surjection(&[1, 1], 1).unwrap()]);
    }

    #[test]
    fn morphism_round_trip_exhaustive_small() {
        for n in 0..=3 {
            for m in 0..=3 {
                for s in all_frames(n) {
                    for t in all_frames(m) {
                        for p in all_pmorphisms(&s, &t) {
                            let fam = pmorphism_to_family(&p);
                            assert_eq!(family_to_pmorphism_between(&fam, &s, &t).unwrap(), p);
                            let canon = family_to_pmorphism(&fam).unwrap();
                            assert_eq!(pmorphism_to_family(&canon), fam);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn coequalizer_of_equal_maps_is_identity() {
        let s = ClusterFamily::new(vec![2, 1]).unwrap();
        let t = ClusterFamily::new(vec![1, 3]).unwrap();
        let f = FamilyMorphism::new(
            s.clone(),
            t.clone(),
            vec![1, 1],
            vec![make_surjection(&[1, 1], 1).unwrap(), make_surjection(&[1], 1).unwrap()],
        )
        .unwrap();
        let (q, proj) = family_coequalizer(&f, &f).unwrap();
        assert_eq!(q, t);
        assert_eq!(proj, FamilyMorphism::identity(&t));
    }

    #[test]
    fn phase_one_pushout_collapses_two_singletons() {
        let s = ClusterFamily::new(vec![2]).unwrap();
        let t = ClusterFamily::new(vec![1, 1]).unwrap();
        let onto_one = make_surjection(&[1, 1], 1).unwrap();
        let f = FamilyMorphism::new(s.clone(), t.clone(), vec![1], vec![onto_one.clone()]).unwrap();
        let g = FamilyMorphism::new(s, t, vec![2], vec![onto_one]).unwrap();
        let (q, proj) = family_coequalizer(&f, &g).unwrap();
        assert_eq!(q.sizes(), &[1]);
        assert_eq!(proj.index_map(), &[1, 1]);
        assert_eq!(proj.compose(&f).unwrap(), proj.compose(&g).unwrap());
        assert_eq!(family_coequalizer(&f, &FamilyMorphism::identity(&q)), Err(Error::NotParallel));
    }
}
