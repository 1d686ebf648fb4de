//! Truncated presheaves on finite sets and surjections.
//!
//! A presheaf truncated at `N` assigns a finite carrier to each level
//! `1..=N` and, to every surjection `q: n ↠ m` with `n ≤ N`, a table
//! `X(q): carrier(m) → carrier(n)`. Elements are `0..carrier` in the Rust API
//! and 1-based in JSON.

use std::collections::HashMap;
use std::ops::Range;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Closure;
use crate::surjection::{enumerate_surjections, Surjection};

/// Largest truncation level a [`Site`] will materialize.
pub const MAX_LEVEL: usize = 8;

/// Every surjection between levels `1..=N`, with dense ids grouped by
/// `(dom, cod)` and lexicographic inside each group.
#[derive(Debug)]
pub struct Site {
    level: usize,
    maps: Vec<Surjection>,
    ids: HashMap<Surjection, usize>,
    ranges: Vec<Vec<Range<usize>>>,
}

impl Site {
    /// The shared site for level `N`.
    pub fn get(level: usize) -> Result<Arc<Site>> {
        if level > MAX_LEVEL {
            return Err(Error::CapExceeded {
                what: "truncation level",
                requested: level,
                cap: MAX_LEVEL,
            });
        }
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Site>>>> = OnceLock::new();
        let mut cache = CACHE.get_or_init(Default::default).lock().unwrap();
        Ok(cache
            .entry(level)
            .or_insert_with(|| Arc::new(Site::build(level)))
            .clone())
    }

    fn build(level: usize) -> Site {
        let mut maps = Vec::new();
        let mut ranges = vec![Vec::new()];
        for n in 1..=level {
            let mut row = Vec::from([0..0]);
            for m in 1..=n {
                let start = maps.len();
                maps.extend(enumerate_surjections(n, m));
                row.push(start..maps.len());
            }
            ranges.push(row);
        }
        let ids = maps.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Site {
            level,
            maps,
            ids,
            ranges,
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn map(&self, id: usize) -> &Surjection {
        &self.maps[id]
    }

    pub fn maps(&self) -> &[Surjection] {
        &self.maps
    }

    pub fn id(&self, q: &Surjection) -> Option<usize> {
        self.ids.get(q).copied()
    }

    /// Ids of the surjections `n ↠ m`.
    pub fn between(&self, n: usize, m: usize) -> Range<usize> {
        if n == 0 || n > self.level || m == 0 || m > n {
            return 0..0;
        }
        self.ranges[n][m].clone()
    }

    /// Ids of the surjections out of `n`, any codomain.
    pub fn from_level(&self, n: usize) -> Range<usize> {
        if n == 0 || n > self.level {
            return 0..0;
        }
        self.ranges[n][1].start..self.ranges[n][n].end
    }

    /// Ids of the permutations of `n`, indexed by lexicographic rank.
    pub fn permutations(&self, n: usize) -> Range<usize> {
        self.between(n, n)
    }

    pub fn identity(&self, n: usize) -> usize {
        self.permutations(n).start
    }

    /// Id of `q ∘ p`.
    pub fn compose(&self, q: usize, p: usize) -> usize {
        self.ids[&self.maps[q].compose_unchecked(&self.maps[p])]
    }

    /// Adjacent transpositions of every level together with one collapse
    /// `k ↠ k-1` per level. Every surjection is a composite of these.
    pub fn generators(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for k in 1..=self.level {
            for i in 1..k {
                let mut t: Vec<usize> = (1..=k).collect();
                t.swap(i - 1, i);
                out.push(self.ids[&Surjection::from_parts(t, k)]);
            }
            if k >= 2 {
                let c: Vec<usize> = (1..=k).map(|i| i.min(k - 1)).collect();
                out.push(self.ids[&Surjection::from_parts(c, k - 1)]);
            }
        }
        out
    }
}

/// A violation of the presheaf laws. Elements are 1-based.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum FunctorialityFailure {
    /// `X(1)(x) ≠ x`.
    Identity { level: usize, element: usize },
    /// `X(f)(X(g)(x)) ≠ X(g∘f)(x)`.
    Composition {
        f: Surjection,
        g: Surjection,
        element: usize,
    },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "PresheafRepr", into = "PresheafRepr")]
pub struct TruncatedPresheaf {
    level: usize,
    carriers: Vec<usize>,
    tables: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct PresheafRepr {
    #[serde(rename = "N")]
    level: usize,
    carriers: Vec<usize>,
    maps: Vec<MapEntry>,
}

#[derive(Serialize, Deserialize)]
struct MapEntry {
    level_from: usize,
    level_to: usize,
    q: Vec<usize>,
    table: Vec<usize>,
}

impl TryFrom<PresheafRepr> for TruncatedPresheaf {
    type Error = Error;

    fn try_from(r: PresheafRepr) -> Result<Self> {
        let p = TruncatedPresheaf::from_repr_unchecked(r)?;
        match p.functoriality_failure() {
            None => Ok(p),
            Some(f) => Err(Error::NotFunctorial(format!("{f:?}"))),
        }
    }
}

impl TruncatedPresheaf {
    pub(crate) fn from_repr_unchecked(r: PresheafRepr) -> Result<Self> {
        let site = Site::get(r.level)?;
        let mut tables = vec![None; site.len()];
        for e in r.maps {
            let q = Surjection::new(e.q, e.level_from)?;
            if q.dom() != e.level_to {
                return Err(Error::SortMismatch {
                    expected: e.level_to,
                    found: q.dom(),
                });
            }
            let id = site.id(&q).ok_or(Error::SortMismatch {
                expected: r.level,
                found: q.dom(),
            })?;
            let bound = r.carriers.get(e.level_to - 1).copied().unwrap_or(0);
            let table = e
                .table
                .into_iter()
                .enumerate()
                .map(|(i, v)| match v {
                    1.. if v <= bound => Ok(v - 1),
                    _ => Err(Error::OutOfRange {
                        position: i + 1,
                        value: v,
                        bound,
                    }),
                })
                .collect::<Result<Vec<_>>>()?;
            if tables[id].replace(table).is_some() {
                return Err(Error::Invalid(format!("map {:?} listed twice", site.map(id))));
            }
        }
        let tables = tables
            .into_iter()
            .enumerate()
            .map(|(id, t)| t.ok_or_else(|| Error::Invalid(format!("map {:?} missing", site.map(id)))))
            .collect::<Result<Vec<_>>>()?;
        TruncatedPresheaf::new_unchecked(r.level, r.carriers, tables)
    }
}

impl From<TruncatedPresheaf> for PresheafRepr {
    fn from(p: TruncatedPresheaf) -> Self {
        let site = p.site();
        let maps = p
            .tables
            .into_iter()
            .enumerate()
            .map(|(id, t)| {
                let q = site.map(id);
                MapEntry {
                    level_from: q.cod(),
                    level_to: q.dom(),
                    q: q.values().to_vec(),
                    table: t.into_iter().map(|v| v + 1).collect(),
                }
            })
            .collect();
        PresheafRepr {
            level: p.level,
            carriers: p.carriers,
            maps,
        }
    }
}

impl TruncatedPresheaf {
    /// Tables indexed by site id. Checks shapes and functoriality.
    pub fn new(level: usize, carriers: Vec<usize>, tables: Vec<Vec<usize>>) -> Result<Self> {
        let p = Self::new_unchecked(level, carriers, tables)?;
        match p.functoriality_failure() {
            None => Ok(p),
            Some(f) => Err(Error::NotFunctorial(format!("{f:?}"))),
        }
    }

    /// Checks table shapes only, so that non-functorial structures can be
    /// represented.
    pub fn new_unchecked(level: usize, carriers: Vec<usize>, tables: Vec<Vec<usize>>) -> Result<Self> {
        let site = Site::get(level)?;
        if carriers.len() != level {
            return Err(Error::BadTable {
                expected: level,
                found: carriers.len(),
            });
        }
        if tables.len() != site.len() {
            return Err(Error::BadTable {
                expected: site.len(),
                found: tables.len(),
            });
        }
        for (id, t) in tables.iter().enumerate() {
            let q = site.map(id);
            let (from, to) = (carriers[q.cod() - 1], carriers[q.dom() - 1]);
            if t.len() != from {
                return Err(Error::BadTable {
                    expected: from,
                    found: t.len(),
                });
            }
            if let Some(pos) = t.iter().position(|&v| v >= to) {
                return Err(Error::OutOfRange {
                    position: pos + 1,
                    value: t[pos] + 1,
                    bound: to,
                });
            }
        }
        Ok(Self {
            level,
            carriers,
            tables,
        })
    }

    /// Builds every table from `f(q, x) = X(q)(x)`.
    pub fn from_fn(
        level: usize,
        carriers: Vec<usize>,
        f: impl Fn(&Surjection, usize) -> usize,
    ) -> Result<Self> {
        let site = Site::get(level)?;
        let tables = site
            .maps()
            .iter()
            .map(|q| (0..carriers.get(q.cod() - 1).copied().unwrap_or(0)).map(|x| f(q, x)).collect())
            .collect();
        Self::new(level, carriers, tables)
    }

    pub fn empty(level: usize) -> Result<Self> {
        Self::from_fn(level, vec![0; level], |_, _| 0)
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn site(&self) -> Arc<Site> {
        Site::get(self.level).expect("level validated on construction")
    }

    /// Size of the carrier at level `n` (`0` outside `1..=N`).
    pub fn carrier(&self, n: usize) -> usize {
        match n {
            1.. if n <= self.level => self.carriers[n - 1],
            _ => 0,
        }
    }

    pub fn carriers(&self) -> &[usize] {
        &self.carriers
    }

    pub fn table(&self, id: usize) -> &[usize] {
        &self.tables[id]
    }

    pub fn tables(&self) -> &[Vec<usize>] {
        &self.tables
    }

    pub fn into_tables(self) -> Vec<Vec<usize>> {
        self.tables
    }

    /// `X(q)(x)`.
    pub fn apply(&self, q: &Surjection, x: usize) -> Result<usize> {
        let id = self.site().id(q).ok_or(Error::SortMismatch {
            expected: self.level,
            found: q.dom(),
        })?;
        self.tables[id].get(x).copied().ok_or(Error::OutOfRange {
            position: 1,
            value: x + 1,
            bound: self.carrier(q.cod()),
        })
    }

    /// Elements of level `n` moved by no permutation other than the identity.
    pub fn fix_trivial(&self, n: usize) -> Vec<bool> {
        let site = self.site();
        let mut out = vec![true; self.carrier(n)];
        for id in site.permutations(n).skip(1) {
            for (x, &y) in self.tables[id].iter().enumerate() {
                if x == y {
                    out[x] = false;
                }
            }
        }
        out
    }

    /// First failure of the presheaf laws, checked on generators.
    pub fn functoriality_failure(&self) -> Option<FunctorialityFailure> {
        let site = self.site();
        if let Some(f) = self.identity_failure() {
            return Some(f);
        }
        let gens = site.generators();
        for q in 0..site.len() {
            let k = site.map(q).dom();
            for &g in gens.iter().filter(|&&g| site.map(g).cod() == k) {
                if let Some(f) = self.composition_failure(&site, g, q) {
                    return Some(f);
                }
            }
        }
        None
    }

    /// Same as [`functoriality_failure`](Self::functoriality_failure) but over
    /// every composable pair.
    pub fn functoriality_failure_exhaustive(&self) -> Option<FunctorialityFailure> {
        let site = self.site();
        if let Some(f) = self.identity_failure() {
            return Some(f);
        }
        for g in 0..site.len() {
            let m = site.map(g).dom();
            for f in (1..=self.level).flat_map(|r| site.between(r, m)) {
                if let Some(fail) = self.composition_failure(&site, f, g) {
                    return Some(fail);
                }
            }
        }
        None
    }

    fn identity_failure(&self) -> Option<FunctorialityFailure> {
        let site = self.site();
        (1..=self.level).find_map(|n| {
            let t = &self.tables[site.identity(n)];
            (0..t.len())
                .find(|&x| t[x] != x)
                .map(|x| FunctorialityFailure::Identity {
                    level: n,
                    element: x + 1,
                })
        })
    }

    fn composition_failure(&self, site: &Site, f: usize, g: usize) -> Option<FunctorialityFailure> {
        let (tf, tg, tgf) = (&self.tables[f], &self.tables[g], &self.tables[site.compose(g, f)]);
        (0..tg.len())
            .find(|&x| tf[tg[x]] != tgf[x])
            .map(|x| FunctorialityFailure::Composition {
                f: site.map(f).clone(),
                g: site.map(g).clone(),
                element: x + 1,
            })
    }

    /// The quotient by the least congruence identifying `a` and `b` at level
    /// `n`.
    pub fn glue(&self, n: usize, a: usize, b: usize) -> Result<Self> {
        self.glue_all(&[(n, a, b)])
    }

    pub fn glue_all(&self, pairs: &[(usize, usize, usize)]) -> Result<Self> {
        let site = self.site();
        let mut classes: Vec<Closure> = self.carriers.iter().map(|&c| Closure::new(c)).collect();
        let mut work: Vec<(usize, usize, usize)> = Vec::new();
        for &(n, a, b) in pairs {
            if n == 0 || n > self.level || a >= self.carrier(n) || b >= self.carrier(n) {
                return Err(Error::OutOfRange {
                    position: n,
                    value: a.max(b) + 1,
                    bound: self.carrier(n),
                });
            }
            work.push((n, a, b));
        }
        while let Some((n, a, b)) = work.pop() {
            if !classes[n - 1].merge(a, b) {
                continue;
            }
            for k in n..=self.level {
                for id in site.between(k, n) {
                    let t = &self.tables[id];
                    work.push((k, t[a], t[b]));
                }
            }
        }
        let labels: Vec<(Vec<usize>, usize)> = classes.into_iter().map(Closure::labels).collect();
        let carriers = labels.iter().map(|(_, k)| *k).collect();
        let mut tables: Vec<Vec<usize>> = Vec::with_capacity(site.len());
        for (id, t) in self.tables.iter().enumerate() {
            let q = site.map(id);
            let (from, to) = (&labels[q.cod() - 1], &labels[q.dom() - 1]);
            let mut out = vec![0; from.1];
            for (x, &y) in t.iter().enumerate() {
                out[from.0[x] - 1] = to.0[y] - 1;
            }
            tables.push(out);
        }
        Self::new_unchecked(self.level, carriers, tables)
    }

    /// Overwrites one table entry without any checks on the result.
    pub fn with_entry(&self, q: &Surjection, x: usize, value: usize) -> Result<Self> {
        let id = self.site().id(q).ok_or(Error::SortMismatch {
            expected: self.level,
            found: q.dom(),
        })?;
        let mut tables = self.tables.clone();
        tables[id][x] = value;
        Self::new_unchecked(self.level, self.carriers.clone(), tables)
    }
}

/// A levelwise disjoint union, remembering where each summand starts.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PresheafUnion {
    pub presheaf: TruncatedPresheaf,
    /// `offsets[k][n - 1]` is the first element of summand `k` at level `n`.
    pub offsets: Vec<Vec<usize>>,
}

impl PresheafUnion {
    /// The summand containing element `x` of level `n`.
    pub fn summand_of(&self, n: usize, x: usize) -> usize {
        self.offsets
            .iter()
            .rposition(|o| o[n - 1] <= x)
            .expect("element lies in some summand")
    }
}

pub fn disjoint_union_presheaves(level: usize, parts: &[TruncatedPresheaf]) -> Result<PresheafUnion> {
    if let Some(p) = parts.iter().find(|p| p.level != level) {
        return Err(Error::LevelMismatch(level, p.level));
    }
    let site = Site::get(level)?;
    let mut offsets = Vec::with_capacity(parts.len());
    let mut carriers = vec![0; level];
    for p in parts {
        offsets.push(carriers.clone());
        for (c, d) in carriers.iter_mut().zip(&p.carriers) {
            *c += d;
        }
    }
    let tables = (0..site.len())
        .map(|id| {
            let q = site.map(id);
            parts
                .iter()
                .zip(&offsets)
                .flat_map(|(p, o)| p.tables[id].iter().map(move |&v| v + o[q.dom() - 1]))
                .collect()
        })
        .collect();
    Ok(PresheafUnion {
        presheaf: TruncatedPresheaf::new_unchecked(level, carriers, tables)?,
        offsets,
    })
}

/// `n ↦ Surj(n, m)` with `X(p)(g) = g∘p`, elements in lexicographic order.
pub fn representable(m: usize, level: usize) -> Result<TruncatedPresheaf> {
    let site = Site::get(level)?;
    let carriers = (1..=level).map(|n| site.between(n, m).len()).collect();
    TruncatedPresheaf::from_fn(level, carriers, |p, g| {
        let g = site.between(p.cod(), m).start + g;
        let gp = site.compose(g, site.id(p).unwrap());
        gp - site.between(p.dom(), m).start
    })
}

/// Components `ξ_n`, one table per level.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct NatTransformation {
    pub components: Vec<Vec<usize>>,
}

impl NatTransformation {
    pub fn identity(p: &TruncatedPresheaf) -> Self {
        Self {
            components: p.carriers.iter().map(|&c| (0..c).collect()).collect(),
        }
    }

    /// A surjection and element where `ξ_k ∘ X₁(p) ≠ X₂(p) ∘ ξ_n`, or a shape
    /// error reported the same way.
    pub fn naturality_failure(
        &self,
        source: &TruncatedPresheaf,
        target: &TruncatedPresheaf,
    ) -> Option<(Surjection, usize)> {
        let site = source.site();
        for id in 0..site.len() {
            let p = site.map(id);
            let (n, k) = (p.cod(), p.dom());
            for x in 0..source.carrier(n) {
                let lhs = self.components[k - 1][source.tables[id][x]];
                let rhs = target.tables[id][self.components[n - 1][x]];
                if lhs != rhs {
                    return Some((p.clone(), x));
                }
            }
        }
        None
    }

    pub fn is_natural(&self, source: &TruncatedPresheaf, target: &TruncatedPresheaf) -> bool {
        let shapes_ok = source.level == target.level
            && self.components.len() == source.level
            && self.components.iter().enumerate().all(|(i, c)| {
                c.len() == source.carriers[i] && c.iter().all(|&v| v < target.carriers[i])
            });
        shapes_ok && self.naturality_failure(source, target).is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surjection::make_surjection;

    #[test]
    fn site_layout() {
        let site = Site::get(4).unwrap();
        assert_eq!(site.len(), 1 + 3 + 13 + 75);
        assert_eq!(site.between(3, 2).len(), 6);
        assert_eq!(site.permutations(3).len(), 6);
        assert!(site.map(site.identity(3)).is_identity());
        for id in 0..site.len() {
            assert_eq!(site.id(site.map(id)), Some(id));
        }
        assert!(Arc::ptr_eq(&site, &Site::get(4).unwrap()));
        assert!(Site::get(9).is_err());
    }

    #[test]
    fn representable_counts_and_laws() {
        let r = representable(2, 4).unwrap();
        assert_eq!(r.carriers(), &[0, 2, 6, 14]);
        assert!(r.functoriality_failure_exhaustive().is_none());
        let g = make_surjection(&[1, 2, 2], 2).unwrap();
        let p = make_surjection(&[1, 2, 3, 3], 3).unwrap();
        let site = r.site();
        let gi = site.id(&g).unwrap() - site.between(3, 2).start;
        let gp = r.apply(&p, gi).unwrap();
        assert_eq!(
            site.map(site.between(4, 2).start + gp),
            &g.compose(&p).unwrap()
        );
    }

    #[test]
    fn generator_check_agrees_with_exhaustive() {
        let r = representable(2, 4).unwrap();
        let site = r.site();
        for id in site.from_level(3) {
            let t = r.table(id);
            if t.len() < 2 {
                continue;
            }
            let q = site.map(id).clone();
            let bad = r.with_entry(&q, 0, t[1]).unwrap();
            assert!(bad.functoriality_failure().is_some());
            assert!(bad.functoriality_failure_exhaustive().is_some());
        }
    }

    #[test]
    fn glue_is_a_congruence() {
        let r = representable(2, 4).unwrap();
        let g = r.glue(3, 0, 1).unwrap();
        assert!(g.functoriality_failure_exhaustive().is_none());
        assert_eq!(g.carrier(2), 2);
        assert!(g.carrier(3) < 6);
    }

    #[test]
    fn union_shapes() {
        let one = representable(1, 3).unwrap();
        let two = representable(2, 3).unwrap();
        let u = disjoint_union_presheaves(3, &[one.clone(), two]).unwrap();
        assert_eq!(u.presheaf.carrier(2), 3);
        assert_eq!(u.summand_of(2, 0), 0);
        assert_eq!(u.summand_of(2, 2), 1);
        assert!(u.presheaf.functoriality_failure().is_none());
        assert_eq!(disjoint_union_presheaves(3, std::slice::from_ref(&one)).unwrap().presheaf, one);
        let e = disjoint_union_presheaves(3, &[]).unwrap().presheaf;
        assert_eq!(e.carriers(), &[0, 0, 0]);
        assert_eq!(
            disjoint_union_presheaves(4, &[one]).unwrap_err(),
            Error::LevelMismatch(4, 3)
        );
    }

    #[test]
    fn json_round_trip() {
        let r = representable(2, 3).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.starts_with(r#"{"N":3,"carriers":[0,2,6],"maps":[{"level_from":1,"level_to":1,"q":[1],"table":[]}"#));
        assert_eq!(serde_json::from_str::<TruncatedPresheaf>(&s).unwrap(), r);

        let bad = r.with_entry(&make_surjection(&[2, 1], 2).unwrap(), 0, 0).unwrap();
        let s = serde_json::to_string(&bad).unwrap();
        assert!(serde_json::from_str::<TruncatedPresheaf>(&s).is_err());
    }

    #[test]
    fn fix_trivial_in_representable() {
        let r = representable(2, 3).unwrap();
        assert_eq!(r.fix_trivial(2), vec![true, true]);
        assert!(r.fix_trivial(3).iter().all(|&b| !b));
    }
}
