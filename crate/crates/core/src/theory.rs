//! Model checking of truncated presheaves against the axioms of `T₁` and
//! `T₂` and against preservation of equalizers and pullbacks.
//!
//! A [`Structure`] reads level `n` as sort `n` and the table of `f: k ↠ n` as
//! the function symbol `f`, sending sort `n` to sort `k`. Every check
//! quantifies over sorts `1..=N` only; reports carry `N` as `levels`.
//! Element ids in reports are 1-based.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::action::canonical_action;
use crate::error::{Error, Result};
use crate::family::{from_cluster_family, ClusterFamily};
use crate::frame::{cluster_signature, Frame};
use crate::lifting::canonical_lifting;
use crate::presheaf::{
    disjoint_union_presheaves, FunctorialityFailure, PresheafRepr, Site, TruncatedPresheaf,
};
use crate::surjection::{coequalizer_surj, factorial, pushout_surj, Surjection, DEFAULT_PERMUTATION_CAP};

/// A truncated presheaf read as a multi-sorted structure. Unlike
/// [`TruncatedPresheaf`] deserialization, parsing a structure does not
/// require functoriality, so that axiom (1) can be checked and reported.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "PresheafRepr", into = "TruncatedPresheaf")]
pub struct Structure(pub TruncatedPresheaf);

impl TryFrom<PresheafRepr> for Structure {
    type Error = Error;

    fn try_from(r: PresheafRepr) -> Result<Self> {
        TruncatedPresheaf::from_repr_unchecked(r).map(Structure)
    }
}

impl From<Structure> for TruncatedPresheaf {
    fn from(s: Structure) -> Self {
        s.0
    }
}

impl From<TruncatedPresheaf> for Structure {
    fn from(p: TruncatedPresheaf) -> Self {
        Structure(p)
    }
}

/// Which sort-`m` elements axiom (6) quantifies over.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixScope {
    #[default]
    FixTrivial,
    AllElements,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// `pairs` faithful preimages `(f, y)` of `element` with `y` of sort `level`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Witness {
    pub sort: usize,
    pub element: usize,
    pub level: usize,
    pub pairs: usize,
}

/// A single falsified axiom instance.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Counterexample {
    Functoriality { failure: FunctorialityFailure },
    /// Sort-`sort` element with no `f(y) = x` for a fix-trivial `y`.
    NoFaithfulPreimage { sort: usize, element: usize },
    /// The sorts of faithful preimages are not exactly one.
    PreimageLevels {
        sort: usize,
        element: usize,
        levels: Vec<usize>,
    },
    /// `f(x) = g(y)` yet no `σ` with `σ∘f = g` and `σ(y) = x`.
    Collision {
        f: Surjection,
        x: usize,
        g: Surjection,
        y: usize,
        fix_trivial_premise: bool,
    },
    NotInjective { f: Surjection, x: usize, y: usize },
    /// `f(x) = g(x)` but `x` is not in the image of the coequalizer.
    EqualizerGap {
        f: Surjection,
        g: Surjection,
        element: usize,
    },
    /// Two elements of the pushout apex with the same pair of restrictions.
    PullbackCollision {
        f: Surjection,
        g: Surjection,
        z1: usize,
        z2: usize,
    },
    /// A compatible pair `f(x) = g(y)` with no element of the apex above it.
    PullbackGap {
        f: Surjection,
        g: Surjection,
        x: usize,
        y: usize,
    },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AxiomReport {
    pub axiom: String,
    pub levels: usize,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub derived: bool,
    pub witnesses: Vec<Witness>,
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TheoryReport {
    pub theory: String,
    pub levels: usize,
    pub verdict: Verdict,
    pub axioms: Vec<AxiomReport>,
}

impl TheoryReport {
    pub fn passes(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn axiom(&self, name: &str) -> Option<&AxiomReport> {
        self.axioms.iter().find(|a| a.axiom == name)
    }
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

struct Ctx<'a> {
    m: &'a TruncatedPresheaf,
    site: Arc<Site>,
    fix: Vec<Vec<bool>>,
}

impl<'a> Ctx<'a> {
    fn new(m: &'a TruncatedPresheaf) -> Self {
        let fix = (1..=m.level()).map(|n| m.fix_trivial(n)).collect();
        Ctx {
            m,
            site: m.site(),
            fix,
        }
    }

    fn level(&self) -> usize {
        self.m.level()
    }

    fn fix(&self, n: usize, x: usize) -> bool {
        self.fix[n - 1][x]
    }

    fn report(&self, axiom: &str, counterexample: Option<Counterexample>) -> AxiomReport {
        AxiomReport {
            axiom: axiom.into(),
            levels: self.level(),
            verdict: verdict(counterexample.is_none()),
            derived: false,
            witnesses: Vec::new(),
            counterexample,
        }
    }

    fn axiom_1(&self) -> AxiomReport {
        let c = self
            .m
            .functoriality_failure()
            .map(|failure| Counterexample::Functoriality { failure });
        self.report("1", c)
    }

    /// `counts[n-1][x][m-1]` = number of faithful preimages `(f, y)` of `x`
    /// with `y` of sort `m`.
    fn preimage_counts(&self) -> Vec<Vec<Vec<usize>>> {
        (1..=self.level())
            .map(|n| {
                let mut counts = vec![vec![0; n]; self.m.carrier(n)];
                for id in self.site.from_level(n) {
                    let m = self.site.map(id).cod();
                    for (y, &x) in self.m.table(id).iter().enumerate() {
                        if self.fix(m, y) {
                            counts[x][m - 1] += 1;
                        }
                    }
                }
                counts
            })
            .collect()
    }

    fn witnesses(counts: &[Vec<Vec<usize>>]) -> Vec<Witness> {
        let mut out = Vec::new();
        for (i, level) in counts.iter().enumerate() {
            for (x, per_m) in level.iter().enumerate() {
                for (j, &pairs) in per_m.iter().enumerate() {
                    if pairs > 0 {
                        out.push(Witness {
                            sort: i + 1,
                            element: x + 1,
                            level: j + 1,
                            pairs,
                        });
                    }
                }
            }
        }
        out
    }

    fn axiom_2(&self, counts: &[Vec<Vec<usize>>]) -> AxiomReport {
        let c = counts.iter().enumerate().find_map(|(i, level)| {
            level
                .iter()
                .position(|per_m| per_m.iter().all(|&c| c == 0))
                .map(|x| Counterexample::NoFaithfulPreimage {
                    sort: i + 1,
                    element: x + 1,
                })
        });
        let mut r = self.report("2", c);
        r.witnesses = Self::witnesses(counts);
        r
    }

    fn axiom_5(&self, counts: &[Vec<Vec<usize>>]) -> AxiomReport {
        let c = counts.iter().enumerate().find_map(|(i, level)| {
            level.iter().enumerate().find_map(|(x, per_m)| {
                let levels: Vec<usize> = (1..=per_m.len()).filter(|&m| per_m[m - 1] > 0).collect();
                (levels.len() != 1).then(|| Counterexample::PreimageLevels {
                    sort: i + 1,
                    element: x + 1,
                    levels,
                })
            })
        });
        let mut r = self.report("5", c);
        r.witnesses = Self::witnesses(counts);
        r
    }

    /// The `σ ∈ S_n` with `σ∘f = g` and `σ(y) = x`, if any.
    fn collision_resolves(&self, f: usize, x: usize, g: usize, y: usize) -> bool {
        let (f, g) = (self.site.map(f), self.site.map(g));
        let n = f.cod();
        if g.cod() != n {
            return false;
        }
        let mut sigma = vec![0; n];
        for (&a, &b) in f.values().iter().zip(g.values()) {
            match sigma[a - 1] {
                0 => sigma[a - 1] = b,
                v if v == b => {}
                _ => return false,
            }
        }
        let Ok(sigma) = Surjection::new(sigma, n) else {
            return false;
        };
        self.m.table(self.site.id(&sigma).unwrap())[y] == x
    }

    /// Axiom (3) when `same_sort` is false, the (6) reading when true.
    fn collisions(&self, same_sort: bool, fix_premise: bool) -> Option<Counterexample> {
        for k in 1..=self.level() {
            let mut by_value: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.m.carrier(k)];
            for id in self.site.from_level(k) {
                let n = self.site.map(id).cod();
                for (x, &v) in self.m.table(id).iter().enumerate() {
                    if !fix_premise || self.fix(n, x) {
                        by_value[v].push((id, x));
                    }
                }
            }
            for group in &by_value {
                for &(f, x) in group {
                    for &(g, y) in group {
                        if (f, x) == (g, y)
                            || (same_sort && self.site.map(f).cod() != self.site.map(g).cod())
                        {
                            continue;
                        }
                        if !self.collision_resolves(f, x, g, y) {
                            return Some(Counterexample::Collision {
                                f: self.site.map(f).clone(),
                                x: x + 1,
                                g: self.site.map(g).clone(),
                                y: y + 1,
                                fix_trivial_premise: fix_premise,
                            });
                        }
                    }
                }
            }
        }
        None
    }

    fn axiom_4(&self) -> AxiomReport {
        let c = (0..self.site.len()).find_map(|id| {
            let t = self.m.table(id);
            let mut seen = HashMap::new();
            t.iter().enumerate().find_map(|(x, &v)| {
                seen.insert(v, x).map(|x0| Counterexample::NotInjective {
                    f: self.site.map(id).clone(),
                    x: x0 + 1,
                    y: x + 1,
                })
            })
        });
        let mut r = self.report("4", c);
        r.derived = true;
        r
    }

    /// Spans `f: k ↠ n`, `g: k ↠ m` up to simultaneous reordering of the
    /// domain: the columns `(f(i), g(i))` are sorted.
    fn sorted_spans(&self, n: usize, m: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for k in n.max(m)..=self.level() {
            for f in self.site.between(k, n) {
                let fv = self.site.map(f).values();
                if fv.windows(2).any(|w| w[0] > w[1]) {
                    continue;
                }
                for g in self.site.between(k, m) {
                    let gv = self.site.map(g).values();
                    if (1..k).all(|i| fv[i - 1] < fv[i] || gv[i - 1] <= gv[i]) {
                        out.push((f, g));
                    }
                }
            }
        }
        out
    }

    fn equalizers(&self) -> Option<Counterexample> {
        for n in 1..=self.level() {
            for (f, g) in self.sorted_spans(n, n) {
                let (sf, sg) = (self.site.map(f), self.site.map(g));
                let q = coequalizer_surj(sf, sg).expect("parallel pair");
                let qt = self.m.table(self.site.id(&q).unwrap());
                let mut image = vec![false; self.m.carrier(n)];
                for (z, &x) in qt.iter().enumerate() {
                    if std::mem::replace(&mut image[x], true) {
                        let z0 = qt.iter().position(|&w| w == x).unwrap();
                        return Some(Counterexample::NotInjective {
                            f: q,
                            x: z0 + 1,
                            y: z + 1,
                        });
                    }
                }
                let (tf, tg) = (self.m.table(f), self.m.table(g));
                if let Some(x) = (0..image.len()).find(|&x| (tf[x] == tg[x]) != image[x]) {
                    return Some(Counterexample::EqualizerGap {
                        f: sf.clone(),
                        g: sg.clone(),
                        element: x + 1,
                    });
                }
            }
        }
        None
    }

    fn pullbacks(&self) -> Option<Counterexample> {
        for n in 1..=self.level() {
            for m in 1..=self.level() {
                for (f, g) in self.sorted_spans(n, m) {
                    if let Some(c) = self.pullback_at(f, g) {
                        return Some(c);
                    }
                }
            }
        }
        None
    }

    fn pullback_at(&self, f: usize, g: usize) -> Option<Counterexample> {
        let (sf, sg) = (self.site.map(f), self.site.map(g));
        let (u, v) = pushout_surj(sf, sg).expect("common domain");
        let (tu, tv) = (
            self.m.table(self.site.id(&u).unwrap()),
            self.m.table(self.site.id(&v).unwrap()),
        );
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        for z in 0..tu.len() {
            if let Some(z0) = seen.insert((tu[z], tv[z]), z) {
                return Some(Counterexample::PullbackCollision {
                    f: sf.clone(),
                    g: sg.clone(),
                    z1: z0 + 1,
                    z2: z + 1,
                });
            }
        }
        let (tf, tg) = (self.m.table(f), self.m.table(g));
        let mut left: HashMap<usize, Vec<usize>> = HashMap::new();
        for (x, &w) in tf.iter().enumerate() {
            left.entry(w).or_default().push(x);
        }
        let compatible: usize = tg
            .iter()
            .map(|w| left.get(w).map_or(0, Vec::len))
            .sum();
        let inside = seen.keys().filter(|&&(x, y)| tf[x] == tg[y]).count();
        if compatible == seen.len() && inside == seen.len() {
            return None;
        }
        let hits: HashSet<(usize, usize)> = seen.into_keys().collect();
        for (y, w) in tg.iter().enumerate() {
            for &x in left.get(w).into_iter().flatten() {
                if !hits.contains(&(x, y)) {
                    return Some(Counterexample::PullbackGap {
                        f: sf.clone(),
                        g: sg.clone(),
                        x: x + 1,
                        y: y + 1,
                    });
                }
            }
        }
        // Only reachable when the structure is not functorial.
        let z = (0..tu.len()).find(|&z| tf[tu[z]] != tg[tv[z]]).unwrap_or(0);
        Some(Counterexample::PullbackCollision {
            f: sf.clone(),
            g: sg.clone(),
            z1: z + 1,
            z2: z + 1,
        })
    }
}

fn theory(name: &str, level: usize, axioms: Vec<AxiomReport>) -> TheoryReport {
    let ok = axioms
        .iter()
        .all(|a| a.derived || a.verdict == Verdict::Pass);
    TheoryReport {
        theory: name.into(),
        levels: level,
        verdict: verdict(ok),
        axioms,
    }
}

/// Whether only the identity of `S_n` fixes `x`.
pub fn check_fix_trivial(m: &TruncatedPresheaf, n: usize, x: usize) -> Result<bool> {
    if n > DEFAULT_PERMUTATION_CAP {
        return Err(Error::CapExceeded {
            what: "permutation degree",
            requested: n,
            cap: DEFAULT_PERMUTATION_CAP,
        });
    }
    if n == 0 || n > m.level() || x >= m.carrier(n) {
        return Err(Error::OutOfRange {
            position: n,
            value: x + 1,
            bound: m.carrier(n),
        });
    }
    Ok(m.fix_trivial(n)[x])
}

/// Axioms (1), (2), (3), with the derived (4) reported alongside.
pub fn check_t1(m: &TruncatedPresheaf) -> TheoryReport {
    let ctx = Ctx::new(m);
    let counts = ctx.preimage_counts();
    let axioms = vec![
        ctx.axiom_1(),
        ctx.axiom_2(&counts),
        ctx.report("3", ctx.collisions(false, true)),
        ctx.axiom_4(),
    ];
    theory("T1", m.level(), axioms)
}

/// Axioms (1), (5), (6). Axiom (6) reads `q₁(x₁) = q₂(x₂)` as forcing some
/// `σ` with `σ∘q₂ = q₁` and `σ(x₁) = x₂`.
pub fn check_t2(m: &TruncatedPresheaf, scope: FixScope) -> TheoryReport {
    let ctx = Ctx::new(m);
    let counts = ctx.preimage_counts();
    let axioms = vec![
        ctx.axiom_1(),
        ctx.axiom_5(&counts),
        ctx.report("6", ctx.collisions(true, scope == FixScope::FixTrivial)),
    ];
    theory("T2", m.level(), axioms)
}

/// Preservation of every coequalizer and pushout among levels `≤ N`, after
/// axiom (1).
pub fn check_lex_preservation(m: &TruncatedPresheaf) -> TheoryReport {
    let ctx = Ctx::new(m);
    let axioms = vec![
        ctx.axiom_1(),
        ctx.report("equalizers", ctx.equalizers()),
        ctx.report("pullbacks", ctx.pullbacks()),
    ];
    theory("lex", m.level(), axioms)
}

impl Counterexample {
    /// Re-evaluates the named axiom instance. A genuine counterexample
    /// yields `false`.
    pub fn holds_in(&self, m: &TruncatedPresheaf) -> bool {
        let ap = |q: &Surjection, x: usize| m.apply(q, x - 1).ok().map(|v| v + 1);
        let site = m.site();
        match self {
            Counterexample::Functoriality { failure } => match failure {
                FunctorialityFailure::Identity { level, element } => {
                    ap(&Surjection::identity(*level), *element) == Some(*element)
                }
                FunctorialityFailure::Composition { f, g, element } => {
                    let gf = g.compose(f).ok();
                    let lhs = ap(g, *element).and_then(|y| ap(f, y));
                    lhs.is_some() && lhs == gf.and_then(|gf| ap(&gf, *element))
                }
            },
            Counterexample::NoFaithfulPreimage { sort, element } => site
                .from_level(*sort)
                .any(|id| {
                    let n = site.map(id).cod();
                    let fix = m.fix_trivial(n);
                    m.table(id).iter().enumerate().any(|(y, &x)| fix[y] && x + 1 == *element)
                }),
            Counterexample::PreimageLevels { sort, element, .. } => {
                let levels: HashSet<usize> = site
                    .from_level(*sort)
                    .filter(|&id| {
                        let n = site.map(id).cod();
                        let fix = m.fix_trivial(n);
                        m.table(id).iter().enumerate().any(|(y, &x)| fix[y] && x + 1 == *element)
                    })
                    .map(|id| site.map(id).cod())
                    .collect();
                levels.len() == 1
            }
            Counterexample::Collision {
                f,
                x,
                g,
                y,
                fix_trivial_premise,
            } => {
                let premise = ap(f, *x).is_some()
                    && ap(f, *x) == ap(g, *y)
                    && (!fix_trivial_premise
                        || (m.fix_trivial(f.cod())[x - 1] && m.fix_trivial(g.cod())[y - 1]));
                !premise || {
                    let ctx = Ctx::new(m);
                    ctx.collision_resolves(site.id(f).unwrap(), x - 1, site.id(g).unwrap(), y - 1)
                }
            }
            Counterexample::NotInjective { f, x, y } => x == y || ap(f, *x) != ap(f, *y),
            Counterexample::EqualizerGap { f, g, element } => {
                let Ok(q) = coequalizer_surj(f, g) else {
                    return true;
                };
                let in_eq = ap(f, *element) == ap(g, *element);
                let in_image = (1..=m.carrier(q.cod())).any(|z| ap(&q, z) == Some(*element));
                in_eq == in_image
            }
            Counterexample::PullbackCollision { f, g, z1, z2 } => {
                let Ok((u, v)) = pushout_surj(f, g) else {
                    return true;
                };
                let (a, b) = ((ap(&u, *z1), ap(&v, *z1)), (ap(&u, *z2), ap(&v, *z2)));
                (z1 != z2 && a != b) || (z1 == z2 && a.0.zip(a.1).is_some_and(|(x, y)| ap(f, x) == ap(g, y)))
            }
            Counterexample::PullbackGap { f, g, x, y } => {
                let Ok((u, v)) = pushout_surj(f, g) else {
                    return true;
                };
                ap(f, *x) != ap(g, *y)
                    || (1..=m.carrier(u.cod())).any(|z| ap(&u, z) == Some(*x) && ap(&v, z) == Some(*y))
            }
        }
    }
}

/// Cluster sizes with multiplicities, and the frame they describe.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Classification {
    pub counts: BTreeMap<usize, usize>,
    pub frame: Frame,
}

/// Counts `|fix-trivial elements of sort m| / m!` for each `m`.
pub fn classify_model(m: &TruncatedPresheaf) -> Result<Classification> {
    if !check_t2(m, FixScope::FixTrivial).passes() {
        return Err(Error::NotAModel);
    }
    let mut counts = BTreeMap::new();
    let mut sizes = Vec::new();
    for n in 1..=m.level() {
        let size = m.fix_trivial(n).into_iter().filter(|&b| b).count();
        let order = factorial(n);
        if size % order != 0 {
            return Err(Error::NonIntegralOrbit {
                level: n,
                size,
                order,
            });
        }
        if size > 0 {
            counts.insert(n, size / order);
            sizes.extend(std::iter::repeat_n(n, size / order));
        }
    }
    let frame = from_cluster_family(&ClusterFamily::new(sizes)?);
    Ok(Classification { counts, frame })
}

/// The disjoint union of the canonical liftings of `S_m` on itself, one
/// per listed cluster size.
pub fn model_from_frame(sizes: &[usize], level: usize) -> Result<TruncatedPresheaf> {
    let mut parts = Vec::with_capacity(sizes.len());
    for &m in sizes {
        if m == 0 {
            return Err(Error::EmptyCluster);
        }
        if m > level {
            return Err(Error::ClusterExceedsTruncation { size: m, level });
        }
        parts.push(canonical_lifting(&canonical_action(m)?, level)?.presheaf);
    }
    Ok(disjoint_union_presheaves(level, &parts)?.presheaf)
}

/// [`model_from_frame`] on the cluster sizes of a frame.
pub fn model_of_frame(frame: &Frame, level: usize) -> Result<TruncatedPresheaf> {
    model_from_frame(&cluster_signature(frame), level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::SymmetricAction;
    use crate::surjection::{enumerate_surjections, make_surjection};

    fn lift(m: usize, level: usize) -> TruncatedPresheaf {
        model_from_frame(&[m], level).unwrap()
    }

    #[test]
    fn fix_trivial_examples() {
        let l = lift(2, 3);
        assert!(check_fix_trivial(&l, 2, 0).unwrap());
        assert!(!check_fix_trivial(&l, 3, 0).unwrap());
        let one = lift(1, 3);
        assert!(check_fix_trivial(&one, 1, 0).unwrap());
        assert!(matches!(check_fix_trivial(&lift(1, 7), 7, 0), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn liftings_are_models() {
        for m in 1..=3 {
            for level in m..=4 {
                let l = lift(m, level);
                let t1 = check_t1(&l);
                assert!(t1.passes(), "{t1:?}");
                assert!(check_t2(&l, FixScope::FixTrivial).passes());
                assert!(check_lex_preservation(&l).passes());
                for w in &t1.axiom("2").unwrap().witnesses {
                    assert_eq!((w.level, w.pairs), (m, factorial(m)));
                }
            }
        }
    }

    #[test]
    fn unions_are_models() {
        let m = model_from_frame(&[1, 2, 2], 4).unwrap();
        assert!(check_t1(&m).passes());
        assert!(check_t2(&m, FixScope::FixTrivial).passes());
        assert!(check_lex_preservation(&m).passes());
        let c = classify_model(&m).unwrap();
        assert_eq!(c.counts, BTreeMap::from([(1, 1), (2, 2)]));
        assert_eq!(c.frame, Frame::new(vec![1, 2, 2, 3, 3]).unwrap());
        assert_eq!(
            serde_json::to_string(&c.counts).unwrap(),
            r#"{"1":1,"2":2}"#
        );
    }

    #[test]
    fn classification_examples() {
        let e = model_from_frame(&[], 3).unwrap();
        assert!(classify_model(&e).unwrap().counts.is_empty());
        let c3 = classify_model(&lift(3, 4)).unwrap();
        assert_eq!(c3.counts, BTreeMap::from([(3, 1)]));
        let m = model_from_frame(&[2], 4).unwrap();
        for n in 1..=4 {
            assert_eq!(m.carrier(n), enumerate_surjections(n, 2).len());
        }
        assert_eq!(
            model_from_frame(&[5], 4),
            Err(Error::ClusterExceedsTruncation { size: 5, level: 4 })
        );
    }

    #[test]
    fn extra_fixed_point_fails_two() {
        let base = lift(2, 3);
        let point = canonical_lifting(&SymmetricAction::trivial(2, 1).unwrap(), 3)
            .unwrap()
            .presheaf;
        let m = disjoint_union_presheaves(3, &[base, point]).unwrap().presheaf;
        let t1 = check_t1(&m);
        assert_eq!(t1.axiom("2").unwrap().verdict, Verdict::Fail);
        let c = t1.axiom("2").unwrap().counterexample.clone().unwrap();
        assert!(!c.holds_in(&m));
        assert!(!check_t2(&m, FixScope::FixTrivial).passes());
        let lex = check_lex_preservation(&m);
        assert_eq!(lex.axiom("equalizers").unwrap().verdict, Verdict::Fail);
        assert!(!lex.axiom("equalizers").unwrap().counterexample.clone().unwrap().holds_in(&m));
        assert!(matches!(classify_model(&m), Err(Error::NotAModel)));
    }

    #[test]
    fn cross_level_glue_fails_five() {
        let u = disjoint_union_presheaves(3, &[lift(1, 3), lift(2, 3)]).unwrap();
        let m = u.presheaf.glue(3, 0, u.offsets[1][2]).unwrap();
        let t2 = check_t2(&m, FixScope::FixTrivial);
        let five = t2.axiom("5").unwrap();
        assert_eq!(five.verdict, Verdict::Fail);
        assert!(!five.counterexample.clone().unwrap().holds_in(&m));
        let t1 = check_t1(&m);
        assert_eq!(t1.axiom("3").unwrap().verdict, Verdict::Fail);
        assert!(!check_lex_preservation(&m).passes());
    }

    #[test]
    fn class_merge_fails_six_and_three() {
        let l = lift(2, 3);
        let m = l.glue(3, 0, 1).unwrap();
        let t2 = check_t2(&m, FixScope::FixTrivial);
        let six = t2.axiom("6").unwrap();
        assert_eq!(six.verdict, Verdict::Fail);
        assert!(!six.counterexample.clone().unwrap().holds_in(&m));
        let t1 = check_t1(&m);
        assert_eq!(t1.axiom("3").unwrap().verdict, Verdict::Fail);
        let lex = check_lex_preservation(&m);
        assert!(!lex.passes());
        for a in lex.axioms.iter().chain(&t1.axioms) {
            if let Some(c) = &a.counterexample {
                assert!(!c.holds_in(&m), "{c:?}");
            }
        }
    }

    #[test]
    fn single_edit_fails_one() {
        let l = lift(2, 3);
        let swap = make_surjection(&[2, 1, 3], 3).unwrap();
        let bad = l.with_entry(&swap, 0, l.apply(&swap, 1).unwrap()).unwrap();
        for r in [check_t1(&bad), check_t2(&bad, FixScope::FixTrivial), check_lex_preservation(&bad)] {
            let one = r.axiom("1").unwrap();
            assert_eq!(one.verdict, Verdict::Fail);
            assert!(!one.counterexample.clone().unwrap().holds_in(&bad));
            assert!(!r.passes());
        }
    }

    #[test]
    fn all_elements_scope_diverges_on_models() {
        let l = lift(1, 3);
        assert!(check_t2(&l, FixScope::FixTrivial).passes());
        let r = check_t2(&l, FixScope::AllElements);
        assert!(!r.passes());
        assert!(!r.axiom("6").unwrap().counterexample.clone().unwrap().holds_in(&l));
    }

    #[test]
    fn structure_json_keeps_broken_tables() {
        let l = lift(2, 3);
        let swap = make_surjection(&[2, 1], 2).unwrap();
        let bad = l.with_entry(&swap, 0, 0).unwrap();
        let s = serde_json::to_string(&Structure(bad.clone())).unwrap();
        assert!(serde_json::from_str::<TruncatedPresheaf>(&s).is_err());
        assert_eq!(serde_json::from_str::<Structure>(&s).unwrap().0, bad);
    }

    #[test]
    fn report_json_shape() {
        let r = check_t1(&lift(1, 2));
        let v = serde_json::to_value(&r.axioms[0]).unwrap();
        assert_eq!(v["axiom"], "1");
        assert_eq!(v["verdict"], "pass");
        assert!(v["counterexample"].is_null());
        assert!(v["witnesses"].is_array());
    }
}
