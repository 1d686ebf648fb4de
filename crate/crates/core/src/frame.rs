//! Finite S5 Kripke frames and p-morphisms.
//!
//! An S5 accessibility relation is an equivalence relation, so a frame is
//! stored as a partition: `blocks[w - 1]` is the class of world `w`, with
//! class ids numbered `1..=B` by first occurrence. Two frames are then
//! isomorphic exactly when their [`cluster_signature`]s agree.
//!
//! A p-morphism maps every class *onto* a class. Colimits follow the usual
//! construction for S5 frames: disjoint union for coproducts, and for
//! coequalizers the quotient by the equivalence generated by the pairs
//! `(f(w), g(w))` carrying the induced relation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{first_occurrence, Closure};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "FrameRepr", into = "FrameRepr")]
pub struct Frame {
    blocks: Vec<usize>,
    block_count: usize,
}

#[derive(Serialize, Deserialize)]
struct FrameRepr {
    worlds: usize,
    blocks: Vec<usize>,
}

impl TryFrom<FrameRepr> for Frame {
    type Error = Error;

    fn try_from(r: FrameRepr) -> Result<Self> {
        if r.worlds != r.blocks.len() {
            return Err(Error::SortMismatch {
                expected: r.worlds,
                found: r.blocks.len(),
            });
        }
        Frame::new(r.blocks)
    }
}

impl From<Frame> for FrameRepr {
    fn from(f: Frame) -> Self {
        FrameRepr {
            worlds: f.blocks.len(),
            blocks: f.blocks,
        }
    }
}

impl Frame {
    /// Accepts only canonically numbered block arrays.
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        let mut next = 1;
        for &b in &blocks {
            if b == next {
                next += 1;
            } else if b == 0 || b > next {
                return Err(Error::NonCanonicalBlocks);
            }
        }
        Ok(Self {
            blocks,
            block_count: next - 1,
        })
    }

    /// Builds the frame whose classes are the level sets of `labels`.
    pub fn from_labels<T: Eq + std::hash::Hash + Clone>(labels: &[T]) -> Self {
        let (blocks, block_count) = first_occurrence(labels);
        Self {
            blocks,
            block_count,
        }
    }

    pub fn empty() -> Self {
        Self {
            blocks: Vec::new(),
            block_count: 0,
        }
    }

    /// The `n`-element cluster: one class containing every world.
    pub fn cluster(n: usize) -> Self {
        Self {
            blocks: vec![1; n],
            block_count: usize::from(n > 0),
        }
    }

    /// `n` singleton classes.
    pub fn discrete(n: usize) -> Self {
        Self {
            blocks: (1..=n).collect(),
            block_count: n,
        }
    }

    pub fn worlds(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_count(&self) -> usize {
        self.block_count
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn block_of(&self, w: usize) -> usize {
        self.blocks[w - 1]
    }

    pub fn related(&self, v: usize, w: usize) -> bool {
        self.block_of(v) == self.block_of(w)
    }

    /// Worlds of each class, in class order, each list increasing.
    pub fn block_members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.block_count];
        for (i, &b) in self.blocks.iter().enumerate() {
            out[b - 1].push(i + 1);
        }
        out
    }
}

/// Sorted multiset of class sizes; a complete isomorphism invariant.
pub fn cluster_signature(frame: &Frame) -> Vec<usize> {
    let mut sizes: Vec<usize> = frame.block_members().iter().map(Vec::len).collect();
    sizes.sort_unstable();
    sizes
}

/// A map of worlds sending each class of the source onto a class of the
/// target.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "PMorphismRepr", into = "PMorphismRepr")]
pub struct PMorphism {
    source: Frame,
    target: Frame,
    map: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct PMorphismRepr {
    map: Vec<usize>,
    source: Frame,
    target: Frame,
}

impl TryFrom<PMorphismRepr> for PMorphism {
    type Error = Error;

    fn try_from(r: PMorphismRepr) -> Result<Self> {
        validate_pmorphism(r.map, &r.source, &r.target)
    }
}

impl From<PMorphism> for PMorphismRepr {
    fn from(p: PMorphism) -> Self {
        PMorphismRepr {
            map: p.map,
            source: p.source,
            target: p.target,
        }
    }
}

/// Checks that `map` sends every class of `source` onto a class of `target`.
pub fn validate_pmorphism(map: Vec<usize>, source: &Frame, target: &Frame) -> Result<PMorphism> {
    if map.len() != source.worlds() {
        return Err(Error::SortMismatch {
            expected: source.worlds(),
            found: map.len(),
        });
    }
    for (i, &v) in map.iter().enumerate() {
        if v == 0 || v > target.worlds() {
            return Err(Error::OutOfRange {
                position: i + 1,
                value: v,
                bound: target.worlds(),
            });
        }
    }
    let target_members = target.block_members();
    for members in source.block_members() {
        let first = members[0];
        let class = target.block_of(map[first - 1]);
        let mut hit = vec![false; target.worlds()];
        for &w in &members {
            let image = map[w - 1];
            if target.block_of(image) != class {
                return Err(Error::NotIntoOneClass(w));
            }
            hit[image - 1] = true;
        }
        if target_members[class - 1].iter().any(|&v| !hit[v - 1]) {
            return Err(Error::NotOnto(first));
        }
    }
    Ok(PMorphism {
        source: source.clone(),
        target: target.clone(),
        map,
    })
}

impl PMorphism {
    pub fn identity(frame: &Frame) -> Self {
        Self {
            source: frame.clone(),
            target: frame.clone(),
            map: (1..=frame.worlds()).collect(),
        }
    }

    pub(crate) fn from_parts(source: Frame, target: Frame, map: Vec<usize>) -> Self {
        debug_assert!(validate_pmorphism(map.clone(), &source, &target).is_ok());
        Self {
            source,
            target,
            map,
        }
    }

    pub fn source(&self) -> &Frame {
        &self.source
    }

    pub fn target(&self) -> &Frame {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, w: usize) -> usize {
        self.map[w - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.map.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &PMorphism) -> Result<PMorphism> {
        if first.target != self.source {
            return Err(Error::NotComposable);
        }
        Ok(PMorphism {
            source: first.source.clone(),
            target: self.target.clone(),
            map: first.map.iter().map(|&w| self.map[w - 1]).collect(),
        })
    }
}

/// Disjoint union of `frames` with its injections; worlds of the `i`-th
/// frame are offset by the sizes of the frames before it.
pub fn frame_coproduct(frames: &[Frame]) -> (Frame, Vec<PMorphism>) {
    let mut blocks = Vec::new();
    let mut offsets = Vec::with_capacity(frames.len());
    let mut block_offset = 0;
    for f in frames {
        offsets.push(blocks.len());
        blocks.extend(f.blocks.iter().map(|b| b + block_offset));
        block_offset += f.block_count;
    }
    let sum = Frame {
        blocks,
        block_count: block_offset,
    };
    let injections = frames
        .iter()
        .zip(offsets)
        .map(|(f, off)| {
            PMorphism::from_parts(f.clone(), sum.clone(), (1..=f.worlds()).map(|w| w + off).collect())
        })
        .collect();
    (sum, injections)
}

/// Quotient of the common target of `f` and `g` by the equivalence generated
/// by `{(f(w), g(w))}`, with the induced accessibility relation, and the
/// projection onto it.
///
/// Quotient worlds are numbered by the least original world in each class.
pub fn frame_coequalizer(f: &PMorphism, g: &PMorphism) -> Result<(Frame, PMorphism)> {
    if f.source != g.source || f.target != g.target {
        return Err(Error::NotParallel);
    }
    let target = &f.target;
    let n = target.worlds();
    let mut worlds = Closure::new(n);
    for (&a, &b) in f.map.iter().zip(&g.map) {
        worlds.merge(a - 1, b - 1);
    }
    // The induced relation relates [x] and [y] when some x' ≈ x and y' ≈ y
    // are related in the target; its classes are the classes of the join of
    // ≈ with the target relation.
    let mut joined = worlds.clone();
    for members in target.block_members() {
        for w in &members[1..] {
            joined.merge(members[0] - 1, w - 1);
        }
    }
    let (projection, quotient_size) = worlds.labels();
    let (joined_labels, _) = joined.labels();
    let mut class_label = vec![0; quotient_size];
    for (v, &q) in projection.iter().enumerate() {
        if class_label[q - 1] == 0 {
            class_label[q - 1] = joined_labels[v];
        }
    }
    let quotient = Frame::from_labels(&class_label);
    let q = PMorphism::from_parts(target.clone(), quotient.clone(), projection);
    Ok((quotient, q))
}

/// Pushout of `f: A → B` and `g: A → C`, as the coequalizer of the two
/// composites into `B ⊔ C`. Returns the apex and the legs from `B` and `C`.
pub fn frame_pushout(f: &PMorphism, g: &PMorphism) -> Result<(Frame, PMorphism, PMorphism)> {
    if f.source != g.source {
        return Err(Error::SourceMismatch);
    }
    let (_, inj) = frame_coproduct(&[f.target.clone(), g.target.clone()]);
    let left = inj[0].compose(f)?;
    let right = inj[1].compose(g)?;
    let (apex, q) = frame_coequalizer(&left, &right)?;
    Ok((apex, q.compose(&inj[0])?, q.compose(&inj[1])?))
}

/// The unique p-morphism `u` with `u ∘ q = h`, if one exists.
pub fn factor_pmorphism(q: &PMorphism, h: &PMorphism) -> Option<PMorphism> {
    if q.source != h.source {
        return None;
    }
    let mut u = vec![0; q.target.worlds()];
    for (&a, &b) in q.map.iter().zip(&h.map) {
        match u[a - 1] {
            0 => u[a - 1] = b,
            seen if seen != b => return None,
            _ => {}
        }
    }
    if u.contains(&0) {
        return None;
    }
    validate_pmorphism(u, &q.target, &h.target).ok()
}

/// Every frame on `n` worlds, in lexicographic order of block arrays.
pub fn all_frames(n: usize) -> Vec<Frame> {
    fn grow(blocks: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Frame>) {
        if blocks.len() == n {
            out.push(Frame {
                blocks: blocks.clone(),
                block_count: max,
            });
            return;
        }
        for b in 1..=max + 1 {
            blocks.push(b);
            grow(blocks, max.max(b), n, out);
            blocks.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::with_capacity(n), 0, n, &mut out);
    out
}

/// Every p-morphism `source → target`, assembled class by class: each source
/// class picks a target class no larger than itself and a surjection onto it.
pub fn all_pmorphisms(source: &Frame, target: &Frame) -> Vec<PMorphism> {
    let src_members = source.block_members();
    let tgt_members = target.block_members();
    // Per source class: every admissible assignment of its worlds.
    let options: Vec<Vec<Vec<usize>>> = src_members
        .iter()
        .map(|members| {
            tgt_members
                .iter()
                .filter(|t| t.len() <= members.len())
                .flat_map(|t| {
                    crate::surjection::enumerate_surjections(members.len(), t.len())
                        .into_iter()
                        .map(move |s| s.values().iter().map(|&i| t[i - 1]).collect::<Vec<_>>())
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut map = vec![0; source.worlds()];
    fn choose(
        k: usize,
        options: &[Vec<Vec<usize>>],
        members: &[Vec<usize>],
        map: &mut Vec<usize>,
        source: &Frame,
        target: &Frame,
        out: &mut Vec<PMorphism>,
    ) {
        if k == options.len() {
            out.push(PMorphism {
                source: source.clone(),
                target: target.clone(),
                map: map.clone(),
            });
            return;
        }
        for choice in &options[k] {
            for (&w, &v) in members[k].iter().zip(choice) {
                map[w - 1] = v;
            }
            choose(k + 1, options, members, map, source, target, out);
        }
    }
    choose(0, &options, &src_members, &mut map, source, target, &mut out);
    out.sort_by(|a, b| a.map.cmp(&b.map));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(b: &[usize]) -> Frame {
        Frame::new(b.to_vec()).unwrap()
    }

    #[test]
    fn canonical_blocks_only() {
        assert!(Frame::new(vec![1, 2, 1]).is_ok());
        assert_eq!(Frame::new(vec![2, 1]), Err(Error::NonCanonicalBlocks));
        assert_eq!(Frame::new(vec![1, 3]), Err(Error::NonCanonicalBlocks));
        assert_eq!(Frame::from_labels(&['x', 'y', 'x']), frame(&[1, 2, 1]));
        assert_eq!(Frame::cluster(0), Frame::empty());
    }

    #[test]
    fn validate_examples() {
        let f = frame(&[1, 1, 2]);
        assert!(validate_pmorphism(vec![1, 2, 3], &f, &f).is_ok());
        assert!(validate_pmorphism(vec![1, 1], &Frame::cluster(2), &Frame::discrete(2)).is_ok());
        assert_eq!(
            validate_pmorphism(vec![1, 1], &Frame::discrete(2), &Frame::cluster(2)),
            Err(Error::NotOnto(1))
        );
        assert_eq!(
            validate_pmorphism(vec![1, 2], &Frame::cluster(2), &Frame::discrete(2)),
            Err(Error::NotIntoOneClass(2))
        );
        assert!(matches!(
            validate_pmorphism(vec![1, 4], &Frame::cluster(2), &Frame::discrete(3)),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn coproduct_examples() {
        let (sum, inj) = frame_coproduct(&[]);
        assert_eq!(sum, Frame::empty());
        assert!(inj.is_empty());
        let (sum, inj) = frame_coproduct(&[Frame::cluster(2), Frame::cluster(3)]);
        assert_eq!(sum.blocks(), &[1, 1, 2, 2, 2]);
        assert_eq!(inj[1].map(), &[3, 4, 5]);
        let f = frame(&[1, 2, 1]);
        let (sum, inj) = frame_coproduct(&[f.clone(), Frame::empty()]);
        assert_eq!(sum, f);
        assert!(inj[0].is_identity());
    }

    #[test]
    fn coequalizer_examples() {
        let f = frame(&[1, 2, 2]);
        let id = PMorphism::identity(&f);
        let (q, proj) = frame_coequalizer(&id, &id).unwrap();
        assert_eq!(q, f);
        assert!(proj.is_identity());

        let one = Frame::cluster(1);
        let two = Frame::discrete(2);
        let a = validate_pmorphism(vec![1], &one, &two).unwrap();
        let b = validate_pmorphism(vec![2], &one, &two).unwrap();
        let (q, _) = frame_coequalizer(&a, &b).unwrap();
        assert_eq!(q, Frame::cluster(1));

    }

    #[test]
    fn coequalizer_of_cluster_points_stays_cluster() {
        // A singleton cannot map onto a 3-cluster, so identify worlds 1 and 2
        // of the 3-cluster through the pair (identity, swap) instead.
        let c3 = Frame::cluster(3);
        assert_eq!(
            validate_pmorphism(vec![1], &Frame::cluster(1), &c3),
            Err(Error::NotOnto(1))
        );
        let f = PMorphism::identity(&c3);
        let g = validate_pmorphism(vec![2, 1, 3], &c3, &c3).unwrap();
        let (q, proj) = frame_coequalizer(&f, &g).unwrap();
        assert_eq!(q, Frame::cluster(2));
        assert_eq!(proj.map(), &[1, 1, 2]);
    }

    #[test]
    fn pushout_examples() {
        let c2 = Frame::cluster(2);
        let id = PMorphism::identity(&c2);
        let swap = validate_pmorphism(vec![2, 1], &c2, &c2).unwrap();
        let (apex, l, r) = frame_pushout(&id, &id).unwrap();
        assert_eq!(apex, c2);
        assert!(l.is_identity() && r.is_identity());
        let (apex, l, r) = frame_pushout(&id, &swap).unwrap();
        assert_eq!(apex, c2);
        assert_eq!(l.compose(&id).unwrap(), r.compose(&swap).unwrap());

        let e = Frame::empty();
        let f = PMorphism::from_parts(e.clone(), frame(&[1, 2]), vec![]);
        let g = PMorphism::from_parts(e, Frame::cluster(3), vec![]);
        let (apex, _, _) = frame_pushout(&f, &g).unwrap();
        assert_eq!(cluster_signature(&apex), vec![1, 1, 3]);
        assert_eq!(frame_pushout(&id, &g), Err(Error::SourceMismatch));
    }

    #[test]
    fn signature_examples() {
        assert_eq!(cluster_signature(&frame(&[1, 1, 2])), vec![1, 2]);
        assert!(cluster_signature(&Frame::empty()).is_empty());
        let a = frame(&[1, 2, 1]);
        let b = frame(&[1, 1, 1, 2]);
        let (sum, _) = frame_coproduct(&[a.clone(), b.clone()]);
        let mut merged = [cluster_signature(&a), cluster_signature(&b)].concat();
        merged.sort_unstable();
        assert_eq!(cluster_signature(&sum), merged);
    }

    #[test]
    fn frame_enumeration_counts_are_bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52];
        for (n, &b) in bell.iter().enumerate() {
            assert_eq!(all_frames(n).len(), b);
        }
    }

    #[test]
    fn structured_pmorphisms_match_brute_force() {
        for n in 0..=3 {
            for m in 0..=3 {
                for s in all_frames(n) {
                    for t in all_frames(m) {
                        let mut brute = Vec::new();
                        let total = m.pow(n as u32);
                        for code in 0..total {
                            let mut c = code;
                            let map: Vec<usize> = (0..n)
                                .map(|_| {
                                    let v = c % m + 1;
                                    c /= m;
                                    v
                                })
                                .collect();
                            if let Ok(p) = validate_pmorphism(map, &s, &t) {
                                brute.push(p);
                            }
                        }
                        if n == 0 {
                            brute = vec![PMorphism::from_parts(s.clone(), t.clone(), vec![])];
                        }
                        brute.sort_by(|a, b| a.map().cmp(b.map()));
                        assert_eq!(all_pmorphisms(&s, &t), brute, "{s:?} → {t:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn json_shape() {
        let f = frame(&[1, 2, 1]);
        assert_eq!(serde_json::to_string(&f).unwrap(), r#"{"worlds":3,"blocks":[1,2,1]}"#);
        assert!(validate_pmorphism(vec![1, 1, 1], &f, &Frame::cluster(1)).is_ok());
        let p = validate_pmorphism(vec![1, 2, 1], &f, &Frame::discrete(2)).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        assert!(text.starts_with(r#"{"map":[1,2,1],"source""#));
        assert_eq!(serde_json::from_str::<PMorphism>(&text).unwrap(), p);
        assert!(serde_json::from_str::<Frame>(r#"{"worlds":2,"blocks":[2,1]}"#).is_err());
    }
}
