//! Finite S5-algebras as powerset algebras with a materialized box table.
//!
//! Elements are bitmasks over the atoms (bit `i` is atom `i + 1`). The box
//! operator is stored as a full table rather than derived from a relation,
//! so tables that break the S5 axioms can be represented, checked and
//! rejected.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{validate_pmorphism, Frame, PMorphism};

/// Default bound on the number of atoms (4096 elements).
pub const DEFAULT_ATOM_CAP: usize = 12;
const HARD_ATOM_LIMIT: usize = 24;

pub type Element = u32;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "AlgebraRepr", into = "AlgebraRepr")]
pub struct S5Algebra {
    atoms: usize,
    box_table: Vec<Element>,
}

#[derive(Serialize, Deserialize)]
struct AlgebraRepr {
    atoms: usize,
    #[serde(rename = "box")]
    box_table: Vec<Element>,
}

impl TryFrom<AlgebraRepr> for S5Algebra {
    type Error = Error;

    fn try_from(r: AlgebraRepr) -> Result<Self> {
        S5Algebra::new(r.atoms, r.box_table)
    }
}

impl From<S5Algebra> for AlgebraRepr {
    fn from(a: S5Algebra) -> Self {
        AlgebraRepr {
            atoms: a.atoms,
            box_table: a.box_table,
        }
    }
}

fn check_table(atoms: usize, table: &[Element]) -> Result<()> {
    if atoms > HARD_ATOM_LIMIT {
        return Err(Error::CapExceeded {
            what: "atom count",
            requested: atoms,
            cap: HARD_ATOM_LIMIT,
        });
    }
    let size = 1usize << atoms;
    if table.len() != size {
        return Err(Error::BadTable {
            expected: size,
            found: table.len(),
        });
    }
    if let Some(pos) = table.iter().position(|&v| v as usize >= size) {
        return Err(Error::OutOfRange {
            position: pos + 1,
            value: table[pos] as usize,
            bound: size - 1,
        });
    }
    Ok(())
}

impl S5Algebra {
    /// Any box table of the right shape; the axioms are checked separately.
    pub fn new(atoms: usize, box_table: Vec<Element>) -> Result<Self> {
        check_table(atoms, &box_table)?;
        Ok(Self { atoms, box_table })
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    /// Number of elements, `2^atoms`.
    pub fn size(&self) -> usize {
        1 << self.atoms
    }

    pub fn top(&self) -> Element {
        (self.size() - 1) as Element
    }

    pub fn complement(&self, x: Element) -> Element {
        !x & self.top()
    }

    pub fn box_of(&self, x: Element) -> Element {
        self.box_table[x as usize]
    }

    pub fn diamond_of(&self, x: Element) -> Element {
        self.complement(self.box_of(self.complement(x)))
    }

    pub fn box_table(&self) -> &[Element] {
        &self.box_table
    }
}

/// First counterexample found for each S5 equation, if any.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct S5Report {
    /// The value of `□⊤` when it differs from `⊤`.
    pub box_top: Option<Element>,
    /// A pair with `□(x∧y) ≠ □x∧□y`.
    pub box_meet: Option<(Element, Element)>,
    /// An `x` with `□x ≰ x`.
    pub deflationary: Option<Element>,
    /// An `x` with `x ≰ □◇x`.
    pub box_diamond: Option<Element>,
}

impl S5Report {
    pub fn passes(&self) -> bool {
        *self == Self::default()
    }
}

/// Evaluates the four S5 equations on every element and pair.
pub fn check_s5_axioms(a: &S5Algebra) -> S5Report {
    let top = a.top();
    let all = 0..a.size() as Element;
    S5Report {
        box_top: Some(a.box_of(top)).filter(|&b| b != top),
        box_meet: all.clone().find_map(|x| {
            let bx = a.box_of(x);
            (0..a.size() as Element)
                .find(|&y| a.box_of(x & y) != bx & a.box_of(y))
                .map(|y| (x, y))
        }),
        deflationary: all.clone().find(|&x| a.box_of(x) & !x != 0),
        box_diamond: all.clone().find(|&x| x & !a.box_of(a.diamond_of(x)) != 0),
    }
}

pub fn frame_to_algebra(frame: &Frame) -> Result<S5Algebra> {
    frame_to_algebra_capped(frame, DEFAULT_ATOM_CAP)
}

/// The powerset of the worlds with `□S = {w : every v related to w is in S}`.
pub fn frame_to_algebra_capped(frame: &Frame, cap: usize) -> Result<S5Algebra> {
    let n = frame.worlds();
    if n > cap.min(HARD_ATOM_LIMIT) {
        return Err(Error::CapExceeded {
            what: "atom count",
            requested: n,
            cap: cap.min(HARD_ATOM_LIMIT),
        });
    }
    let class_masks: Vec<Element> = frame
        .block_members()
        .iter()
        .map(|m| m.iter().fold(0, |acc, &w| acc | 1 << (w - 1)))
        .collect();
    let box_table = (0..1usize << n)
        .map(|s| {
            let s = s as Element;
            class_masks
                .iter()
                .filter(|&&c| c & s == c)
                .fold(0, |acc, &c| acc | c)
        })
        .collect();
    Ok(S5Algebra { atoms: n, box_table })
}

/// Recovers the frame: atoms `a`, `b` share a class iff `b ≤ ◇{a}`.
pub fn algebra_to_frame(a: &S5Algebra) -> Result<Frame> {
    let report = check_s5_axioms(a);
    if !report.passes() {
        return Err(Error::NotS5(Box::new(report)));
    }
    let n = a.atoms;
    let reach: Vec<Element> = (0..n).map(|i| a.diamond_of(1 << i)).collect();
    let related = |i: usize, j: usize| reach[i] >> j & 1 == 1;
    for i in 0..n {
        if !related(i, i) {
            return Err(Error::NotEquivalence);
        }
        for j in 0..n {
            if related(i, j) && !related(j, i) {
                return Err(Error::NotEquivalence);
            }
            if related(i, j) && reach[j] & !reach[i] != 0 {
                return Err(Error::NotEquivalence);
            }
        }
    }
    Ok(Frame::from_labels(&reach))
}

/// A map of elements, stored as a full table on the source algebra.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AlgebraHom {
    source: S5Algebra,
    target: S5Algebra,
    map: Vec<Element>,
}

impl AlgebraHom {
    pub fn new(source: S5Algebra, target: S5Algebra, map: Vec<Element>) -> Result<Self> {
        if map.len() != source.size() {
            return Err(Error::BadTable {
                expected: source.size(),
                found: map.len(),
            });
        }
        if let Some(pos) = map.iter().position(|&v| v as usize >= target.size()) {
            return Err(Error::OutOfRange {
                position: pos + 1,
                value: map[pos] as usize,
                bound: target.size() - 1,
            });
        }
        Ok(Self {
            source,
            target,
            map,
        })
    }

    pub fn source(&self) -> &S5Algebra {
        &self.source
    }

    pub fn target(&self) -> &S5Algebra {
        &self.target
    }

    pub fn apply(&self, x: Element) -> Element {
        self.map[x as usize]
    }

    pub fn table(&self) -> &[Element] {
        &self.map
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &AlgebraHom) -> Result<AlgebraHom> {
        if first.target != self.source {
            return Err(Error::NotComposable);
        }
        Ok(AlgebraHom {
            source: first.source.clone(),
            target: self.target.clone(),
            map: first.map.iter().map(|&x| self.apply(x)).collect(),
        })
    }

    /// The first operation (`"top"`, `"bottom"`, `"meet"`, `"join"`,
    /// `"complement"`, `"box"`) this map fails to preserve, if any.
    pub fn preservation_failure(&self) -> Option<&'static str> {
        let (s, t) = (&self.source, &self.target);
        let h = |x: Element| self.apply(x);
        let all = || 0..s.size() as Element;
        if h(s.top()) != t.top() {
            return Some("top");
        }
        if h(0) != 0 {
            return Some("bottom");
        }
        if all().any(|x| all().any(|y| h(x & y) != h(x) & h(y))) {
            return Some("meet");
        }
        if all().any(|x| all().any(|y| h(x | y) != h(x) | h(y))) {
            return Some("join");
        }
        if all().any(|x| h(s.complement(x)) != t.complement(h(x))) {
            return Some("complement");
        }
        if all().any(|x| h(s.box_of(x)) != t.box_of(h(x))) {
            return Some("box");
        }
        None
    }
}

/// Inverse image along a p-morphism `f: V → W`, a hom from the algebra of `W`
/// to the algebra of `V`.
pub fn pmorphism_to_hom(f: &PMorphism) -> Result<AlgebraHom> {
    let source = frame_to_algebra(f.target())?;
    let target = frame_to_algebra(f.source())?;
    let map = (0..source.size() as Element)
        .map(|s| {
            f.map()
                .iter()
                .enumerate()
                .filter(|(_, &v)| s >> (v - 1) & 1 == 1)
                .fold(0, |acc, (w, _)| acc | 1 << w)
        })
        .collect();
    Ok(AlgebraHom {
        source,
        target,
        map,
    })
}

/// Sends each world `w` of the target's frame to the unique atom `v` of the
/// source with `w ∈ h({v})`.
pub fn hom_to_pmorphism(h: &AlgebraHom) -> Result<PMorphism> {
    if let Some(op) = h.preservation_failure() {
        return Err(Error::NotHom(op));
    }
    let source_frame = algebra_to_frame(&h.target)?;
    let target_frame = algebra_to_frame(&h.source)?;
    let preimages: Vec<Element> = (0..h.source.atoms).map(|v| h.apply(1 << v)).collect();
    let map = (0..h.target.atoms)
        .map(|w| {
            let mut owners = preimages.iter().enumerate().filter(|(_, &p)| p >> w & 1 == 1);
            match (owners.next(), owners.next()) {
                (None, _) => Err(Error::NoAtomCover(w + 1)),
                (Some(_), Some(_)) => Err(Error::AtomClash(w + 1)),
                (Some((v, _)), None) => Ok(v + 1),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    validate_pmorphism(map, &source_frame, &target_frame)
}
