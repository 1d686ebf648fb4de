//! The category of finite sets `{1..n}` and surjections.
//!
//! Every value here is 1-based: a [`Surjection`] `n ↠ m` is stored as its
//! image array `[q(1), …, q(n)]` with entries in `1..=m`. Quotients produced
//! by [`coequalizer_surj`] and [`pushout_surj`] number their classes by first
//! occurrence, so equal inputs always give identical outputs.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Closure;

/// Largest degree for which the full symmetric group is enumerated by default.
pub const DEFAULT_PERMUTATION_CAP: usize = 6;

/// A surjective map `dom ↠ cod`.
///
/// The derived order compares image arrays lexicographically, which is the
/// order [`enumerate_surjections`] produces.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "MapRepr", into = "MapRepr")]
pub struct Surjection {
    map: Vec<usize>,
    cod: usize,
}

#[derive(Serialize, Deserialize)]
struct MapRepr {
    dom: usize,
    cod: usize,
    map: Vec<usize>,
}

impl TryFrom<MapRepr> for Surjection {
    type Error = Error;

    fn try_from(r: MapRepr) -> Result<Self> {
        if r.dom != r.map.len() {
            return Err(Error::SortMismatch {
                expected: r.dom,
                found: r.map.len(),
            });
        }
        Surjection::new(r.map, r.cod)
    }
}

impl From<Surjection> for MapRepr {
    fn from(s: Surjection) -> Self {
        MapRepr {
            dom: s.dom(),
            cod: s.cod,
            map: s.map,
        }
    }
}

impl fmt::Debug for Surjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}:{}↠{}", self.map, self.dom(), self.cod)
    }
}

/// Validates `values` as a surjection onto `1..=cod`.
pub fn make_surjection(values: &[usize], cod: usize) -> Result<Surjection> {
    Surjection::new(values.to_vec(), cod)
}

impl Surjection {
    pub fn new(map: Vec<usize>, cod: usize) -> Result<Self> {
        if map.is_empty() || cod == 0 {
            return Err(Error::Empty);
        }
        let mut hit = vec![false; cod];
        for (i, &v) in map.iter().enumerate() {
            if v == 0 || v > cod {
                return Err(Error::OutOfRange {
                    position: i + 1,
                    value: v,
                    bound: cod,
                });
            }
            hit[v - 1] = true;
        }
        if let Some(missing) = hit.iter().position(|h| !h) {
            return Err(Error::NotSurjective(missing + 1));
        }
        Ok(Self { map, cod })
    }

    /// Caller guarantees the invariants.
    pub(crate) fn from_parts(map: Vec<usize>, cod: usize) -> Self {
        debug_assert!(Self::new(map.clone(), cod).is_ok(), "{map:?} onto {cod}");
        Self { map, cod }
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "Set_s^f has no empty object");
        Self {
            map: (1..=n).collect(),
            cod: n,
        }
    }

    /// The unique map `n ↠ 1`.
    pub fn terminal(n: usize) -> Self {
        assert!(n > 0, "Set_s^f has no empty object");
        Self {
            map: vec![1; n],
            cod: 1,
        }
    }

    pub fn dom(&self) -> usize {
        self.map.len()
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn values(&self) -> &[usize] {
        &self.map
    }

    /// `self(i)` for `i` in `1..=dom`.
    pub fn apply(&self, i: usize) -> usize {
        self.map[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    pub fn is_bijective(&self) -> bool {
        self.dom() == self.cod
    }

    pub fn to_permutation(&self) -> Option<Permutation> {
        self.is_bijective().then(|| Permutation {
            map: self.map.clone(),
        })
    }

    /// `self ∘ p`, defined when `cod(p) = dom(self)`.
    pub fn compose(&self, p: &Surjection) -> Result<Surjection> {
        if p.cod != self.dom() {
            return Err(Error::SortMismatch {
                expected: self.dom(),
                found: p.cod,
            });
        }
        Ok(self.compose_unchecked(p))
    }

    pub(crate) fn compose_unchecked(&self, p: &Surjection) -> Surjection {
        Surjection {
            map: p.map.iter().map(|&j| self.map[j - 1]).collect(),
            cod: self.cod,
        }
    }

    /// Fibers `q⁻¹(1), …, q⁻¹(m)`, each sorted.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.cod];
        for (i, &v) in self.map.iter().enumerate() {
            out[v - 1].push(i + 1);
        }
        out
    }
}

/// `q ∘ p`.
pub fn compose(q: &Surjection, p: &Surjection) -> Result<Surjection> {
    q.compose(p)
}

/// All surjections `n ↠ m` in lexicographic order of their image arrays.
pub fn enumerate_surjections(n: usize, m: usize) -> Vec<Surjection> {
    let mut out = Vec::new();
    if n == 0 || m == 0 || m > n {
        return out;
    }
    let mut map = vec![0; n];
    let mut hits = vec![0usize; m];
    fill(&mut map, &mut hits, 0, m, m, &mut out);
    out
}

fn fill(
    map: &mut [usize],
    hits: &mut [usize],
    pos: usize,
    m: usize,
    missing: usize,
    out: &mut Vec<Surjection>,
) {
    let n = map.len();
    if pos == n {
        if missing == 0 {
            out.push(Surjection {
                map: map.to_vec(),
                cod: m,
            });
        }
        return;
    }
    // Every value still missing needs a position of its own.
    if missing > n - pos {
        return;
    }
    for v in 1..=m {
        let fresh = hits[v - 1] == 0;
        hits[v - 1] += 1;
        map[pos] = v;
        fill(map, hits, pos + 1, m, missing - usize::from(fresh), out);
        hits[v - 1] -= 1;
    }
}

/// The coequalizer `q: n ↠ l` of parallel `f, g: k ↠ n`.
///
/// `q` identifies `f(i)` with `g(i)` for every `i` and nothing more; classes
/// are numbered by first occurrence in `1..=n`.
pub fn coequalizer_surj(f: &Surjection, g: &Surjection) -> Result<Surjection> {
    if f.dom() != g.dom() {
        return Err(Error::SortMismatch {
            expected: f.dom(),
            found: g.dom(),
        });
    }
    if f.cod != g.cod {
        return Err(Error::SortMismatch {
            expected: f.cod,
            found: g.cod,
        });
    }
    let mut closure = Closure::new(f.cod);
    for (&a, &b) in f.map.iter().zip(&g.map) {
        closure.merge(a - 1, b - 1);
    }
    let (labels, classes) = closure.labels();
    Ok(Surjection::from_parts(labels, classes))
}

/// The pushout of `f: k ↠ n` and `g: k ↠ m`, returned as the legs
/// `(f': n ↠ r, g': m ↠ r)` with `f'∘f = g'∘g`.
pub fn pushout_surj(f: &Surjection, g: &Surjection) -> Result<(Surjection, Surjection)> {
    if f.dom() != g.dom() {
        return Err(Error::SortMismatch {
            expected: f.dom(),
            found: g.dom(),
        });
    }
    let (n, m) = (f.cod, g.cod);
    let mut closure = Closure::new(n + m);
    for (&a, &b) in f.map.iter().zip(&g.map) {
        closure.merge(a - 1, n + b - 1);
    }
    // Both legs are surjective, so every class meets 1..=n and scanning the
    // left summand first numbers the classes by first occurrence there.
    let (labels, classes) = closure.labels();
    let left = Surjection::from_parts(labels[..n].to_vec(), classes);
    let right = Surjection::from_parts(labels[n..].to_vec(), classes);
    Ok((left, right))
}

/// The unique `u` with `u ∘ q = h`, if one exists.
pub fn factor_through(q: &Surjection, h: &Surjection) -> Option<Surjection> {
    if q.dom() != h.dom() {
        return None;
    }
    let mut u = vec![0; q.cod];
    for (&a, &b) in q.map.iter().zip(&h.map) {
        match u[a - 1] {
            0 => u[a - 1] = b,
            seen if seen != b => return None,
            _ => {}
        }
    }
    Some(Surjection::from_parts(u, h.cod))
}

/// A bijection of `{1..n}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "MapRepr", into = "MapRepr")]
pub struct Permutation {
    map: Vec<usize>,
}

impl TryFrom<MapRepr> for Permutation {
    type Error = Error;

    fn try_from(r: MapRepr) -> Result<Self> {
        if r.dom != r.cod {
            return Err(Error::NotBijective);
        }
        Surjection::try_from(r)?
            .to_permutation()
            .ok_or(Error::NotBijective)
    }
}

impl From<Permutation> for MapRepr {
    fn from(p: Permutation) -> Self {
        MapRepr {
            dom: p.map.len(),
            cod: p.map.len(),
            map: p.map,
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "σ{:?}", self.map)
    }
}

impl From<Permutation> for Surjection {
    fn from(p: Permutation) -> Self {
        let cod = p.map.len();
        Surjection { map: p.map, cod }
    }
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        Surjection::new(map, n)?
            .to_permutation()
            .ok_or(Error::NotBijective)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            map: (1..=n).collect(),
        }
    }

    /// The transposition `(i j)` on `{1..n}`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut map: Vec<usize> = (1..=n).collect();
        map.swap(i - 1, j - 1);
        Self { map }
    }

    /// The cycle `(1 2 … n)`, sending `i` to `i + 1` and `n` to `1`.
    pub fn cycle(n: usize) -> Self {
        Self {
            map: (1..=n).map(|i| i % n + 1).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.map.len()
    }

    pub fn values(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.size(), other.size(), "degree mismatch");
        Permutation {
            map: other.map.iter().map(|&j| self.map[j - 1]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation { map: inv }
    }

    pub fn as_surjection(&self) -> Surjection {
        self.clone().into()
    }

    /// Position of `self` in the lexicographic enumeration of `S_n`.
    pub fn rank(&self) -> usize {
        let n = self.map.len();
        let mut rank = 0;
        for i in 0..n {
            let smaller = self.map[i + 1..]
                .iter()
                .filter(|&&v| v < self.map[i])
                .count();
            rank = rank * (n - i) + smaller;
        }
        rank
    }

    /// Inverse of [`rank`](Self::rank).
    pub fn unrank(n: usize, mut rank: usize) -> Permutation {
        let mut digits = vec![0; n];
        for i in (0..n).rev() {
            let base = n - i;
            digits[i] = rank % base;
            rank /= base;
        }
        let mut pool: Vec<usize> = (1..=n).collect();
        Permutation {
            map: digits.into_iter().map(|d| pool.remove(d)).collect(),
        }
    }
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// All `n!` permutations in lexicographic order, refusing `n` above the
/// default cap.
pub fn enumerate_permutations(n: usize) -> Result<Vec<Permutation>> {
    enumerate_permutations_capped(n, DEFAULT_PERMUTATION_CAP)
}

pub fn enumerate_permutations_capped(n: usize, cap: usize) -> Result<Vec<Permutation>> {
    if n == 0 {
        return Err(Error::Empty);
    }
    if n > cap {
        return Err(Error::CapExceeded {
            what: "permutation degree",
            requested: n,
            cap,
        });
    }
    let mut current: Vec<usize> = (1..=n).collect();
    let mut out = Vec::with_capacity(factorial(n));
    loop {
        out.push(Permutation {
            map: current.clone(),
        });
        if !next_permutation(&mut current) {
            return Ok(out);
        }
    }
}

fn next_permutation(a: &mut [usize]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).unwrap();
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[usize], m: usize) -> Surjection {
        make_surjection(v, m).unwrap()
    }

    #[test]
    fn make_surjection_examples() {
        assert_eq!(s(&[1, 2, 1], 2).dom(), 3);
        assert_eq!(make_surjection(&[1, 1], 2), Err(Error::NotSurjective(2)));
        assert!(s(&[1, 2, 3], 3).is_identity());
        assert!(matches!(
            make_surjection(&[1, 3], 2),
            Err(Error::OutOfRange { position: 2, value: 3, bound: 2 })
        ));
        assert_eq!(make_surjection(&[], 1), Err(Error::Empty));
    }

    #[test]
    fn compose_examples() {
        let p = s(&[1, 2, 1], 2);
        assert_eq!(compose(&Surjection::identity(2), &p).unwrap(), p);
        assert_eq!(compose(&s(&[2, 1], 2), &p).unwrap(), s(&[2, 1, 2], 2));
        assert_eq!(
            compose(&s(&[1, 1], 1), &s(&[1, 2, 2], 2)).unwrap(),
            s(&[1, 1, 1], 1)
        );
        assert_eq!(
            compose(&p, &p),
            Err(Error::SortMismatch {
                expected: 3,
                found: 2
            })
        );
    }

    #[test]
    fn enumerate_examples() {
        let all = enumerate_surjections(3, 2);
        assert_eq!(all.len(), 6);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all[0], s(&[1, 1, 2], 2));
        assert!(enumerate_surjections(2, 3).is_empty());
        let bij = enumerate_surjections(4, 4);
        assert_eq!(bij.len(), 24);
        assert!(bij.iter().all(Surjection::is_bijective));
    }

    #[test]
    fn permutations_and_cap() {
        assert_eq!(enumerate_permutations(1).unwrap(), vec![Permutation::identity(1)]);
        let s3 = enumerate_permutations(3).unwrap();
        assert_eq!(s3.len(), 6);
        for (r, p) in s3.iter().enumerate() {
            assert_eq!(p.rank(), r);
            assert_eq!(&Permutation::unrank(3, r), p);
        }
        assert!(matches!(
            enumerate_permutations(7),
            Err(Error::CapExceeded { requested: 7, cap: 6, .. })
        ));
        assert_eq!(enumerate_permutations_capped(7, 7).unwrap().len(), 5040);
    }

    #[test]
    fn coequalizer_examples() {
        let id3 = Surjection::identity(3);
        assert_eq!(coequalizer_surj(&id3, &id3).unwrap(), id3);
        let swap = s(&[2, 1], 2);
        assert_eq!(
            coequalizer_surj(&Surjection::identity(2), &swap).unwrap(),
            s(&[1, 1], 1)
        );
        let cyc = s(&[2, 3, 1], 3);
        assert_eq!(coequalizer_surj(&id3, &cyc).unwrap(), s(&[1, 1, 1], 1));
        // (1,2) merged, 3 separate, labels by first occurrence
        let f = s(&[1, 3, 2], 3);
        let g = s(&[2, 3, 1], 3);
        assert_eq!(coequalizer_surj(&f, &g).unwrap(), s(&[1, 1, 2], 2));
    }

    #[test]
    fn pushout_examples() {
        let id2 = Surjection::identity(2);
        assert_eq!(pushout_surj(&id2, &id2).unwrap(), (id2.clone(), id2.clone()));
        let t = Surjection::terminal(2);
        let (a, b) = pushout_surj(&t, &t).unwrap();
        assert_eq!((a.dom(), a.cod(), b.dom(), b.cod()), (1, 1, 1, 1));
        let (a, b) = pushout_surj(&s(&[1, 1, 2], 2), &s(&[1, 2, 2], 2)).unwrap();
        assert_eq!(a, s(&[1, 1], 1));
        assert_eq!(b, s(&[1, 1], 1));
    }

    #[test]
    fn factor_through_detects_non_constant_fibers() {
        let q = s(&[1, 1, 2], 2);
        assert_eq!(factor_through(&q, &s(&[1, 1, 1], 1)), Some(s(&[1, 1], 1)));
        assert_eq!(factor_through(&q, &s(&[1, 2, 2], 2)), None);
    }

    #[test]
    fn json_shape() {
        let q = s(&[1, 2, 1], 2);
        let text = serde_json::to_string(&q).unwrap();
        assert_eq!(text, r#"{"dom":3,"cod":2,"map":[1,2,1]}"#);
        assert_eq!(serde_json::from_str::<Surjection>(&text).unwrap(), q);
        assert!(serde_json::from_str::<Surjection>(r#"{"dom":2,"cod":2,"map":[1,1]}"#).is_err());
        assert!(serde_json::from_str::<Surjection>(r#"{"dom":3,"cod":2,"map":[1,2]}"#).is_err());
        let p: Permutation = serde_json::from_str(r#"{"dom":3,"cod":3,"map":[3,1,2]}"#).unwrap();
        assert_eq!(p, Permutation::cycle(3).inverse());
    }

    #[test]
    fn permutation_algebra() {
        let c = Permutation::cycle(4);
        let mut acc = Permutation::identity(4);
        for _ in 0..4 {
            acc = acc.compose(&c);
        }
        assert!(acc.is_identity());
        assert!(c.compose(&c.inverse()).is_identity());
        assert_eq!(Permutation::transposition(3, 1, 2).values(), &[2, 1, 3]);
    }
}
