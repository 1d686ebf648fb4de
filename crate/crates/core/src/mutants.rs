//! Corrupted structures, each labeled with the axioms it must violate.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::action::SymmetricAction;
use crate::error::{Error, Result};
use crate::lifting::canonical_lifting;
use crate::presheaf::{disjoint_union_presheaves, TruncatedPresheaf};
use crate::theory::model_from_frame;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MutantKind {
    /// One table entry changed.
    SingleEdit,
    /// A point added at every level from some `n₀ ≥ 2` on.
    TruncatedTerminal,
    /// The lifting of an action with non-trivial stabilizers added.
    UnfaithfulLifting,
    /// An `L^{c₁}` element glued to an `L^{c_m}` element above level `m`.
    CrossLevelGlue,
    /// Two elements of `L^{c_m}` above level `m` glued.
    ClassMerge,
    /// Two elements `M(f)(x)`, `M(f)(y)` of `L^{c_m}` glued.
    InjectivityMerge,
}

impl MutantKind {
    pub const ALL: [MutantKind; 6] = [
        MutantKind::SingleEdit,
        MutantKind::TruncatedTerminal,
        MutantKind::UnfaithfulLifting,
        MutantKind::CrossLevelGlue,
        MutantKind::ClassMerge,
        MutantKind::InjectivityMerge,
    ];

    /// Axiom names that must fail on every mutant of this kind.
    pub fn expected_failures(self) -> &'static [&'static str] {
        match self {
            MutantKind::SingleEdit => &["1"],
            MutantKind::TruncatedTerminal => &["2", "5", "equalizers"],
            MutantKind::UnfaithfulLifting => &["2", "5"],
            MutantKind::CrossLevelGlue => &["3", "5"],
            MutantKind::ClassMerge => &["3", "6"],
            MutantKind::InjectivityMerge => &["3", "4", "6", "equalizers"],
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Mutant {
    pub kind: MutantKind,
    pub name: String,
    pub structure: TruncatedPresheaf,
}

impl Mutant {
    pub fn expected_failures(&self) -> &'static [&'static str] {
        self.kind.expected_failures()
    }
}

fn lift_c(m: usize, level: usize) -> Result<TruncatedPresheaf> {
    model_from_frame(&[m], level)
}

fn union(level: usize, parts: Vec<TruncatedPresheaf>) -> Result<TruncatedPresheaf> {
    Ok(disjoint_union_presheaves(level, &parts)?.presheaf)
}

/// Overwrites `X(q)(x)` with a different value, where `q` is the `id`-th map
/// of the site.
pub fn single_edit(base: &TruncatedPresheaf, id: usize, x: usize, shift: usize) -> Result<TruncatedPresheaf> {
    let site = base.site();
    let q = site.map(id);
    let size = base.carrier(q.dom());
    if size < 2 || x >= base.carrier(q.cod()) || shift.is_multiple_of(size) {
        return Err(Error::Invalid("edit would not change the table".into()));
    }
    let old = base.table(id)[x];
    base.with_entry(q, x, (old + shift) % size)
}

/// `base ⊔ T`, where `T` is a single point at every level `≥ from`.
pub fn truncated_terminal(base: &TruncatedPresheaf, from: usize) -> Result<TruncatedPresheaf> {
    let level = base.level();
    if from < 2 || from > level {
        return Err(Error::Invalid(format!("start level {from} outside 2..={level}")));
    }
    let carriers = (1..=level).map(|n| usize::from(n >= from)).collect();
    let point = TruncatedPresheaf::from_fn(level, carriers, |_, _| 0)?;
    union(level, vec![base.clone(), point])
}

/// `base ⊔ L^a` for the trivial action of `S_m` on a point, or the sign
/// action on two points when `sign` is set. The sign action of `S₂` is
/// free, so `sign` needs `m ≥ 3`.
pub fn unfaithful_lifting(base: &TruncatedPresheaf, m: usize, sign: bool) -> Result<TruncatedPresheaf> {
    let low = if sign { 3 } else { 2 };
    if m < low || m > base.level() {
        return Err(Error::Invalid(format!("degree {m} outside {low}..={}", base.level())));
    }
    let a = if sign {
        let cycle = if m.is_multiple_of(2) { vec![1, 0] } else { vec![0, 1] };
        SymmetricAction::new(m, vec![1, 0], cycle)?
    } else {
        SymmetricAction::trivial(m, 1)?
    };
    let l = canonical_lifting(&a, base.level())?.presheaf;
    union(base.level(), vec![base.clone(), l])
}

/// `L^{c₁} ⊔ L^{c_m} ⊔ base` with the `i`-th `L^{c_m}` element at level `n`
/// glued to the point of `L^{c₁}`.
pub fn cross_level_glue(
    base: &TruncatedPresheaf,
    m: usize,
    n: usize,
    i: usize,
) -> Result<TruncatedPresheaf> {
    let level = base.level();
    if m < 2 || n <= m || n > level {
        return Err(Error::Invalid(format!("need 2 <= m < n <= {level}")));
    }
    let u = disjoint_union_presheaves(level, &[lift_c(1, level)?, lift_c(m, level)?, base.clone()])?;
    let start = u.offsets[1][n - 1];
    let size = u.offsets[2][n - 1] - start;
    u.presheaf.glue(n, u.offsets[0][n - 1], start + i % size)
}

/// `L^{c_m} ⊔ base` with elements `a ≠ b` of `L^{c_m}` at level `n > m` glued.
pub fn class_merge(
    base: &TruncatedPresheaf,
    m: usize,
    n: usize,
    a: usize,
    b: usize,
) -> Result<TruncatedPresheaf> {
    let level = base.level();
    if m < 1 || n <= m || n > level || a == b {
        return Err(Error::Invalid(format!("need 1 <= m < n <= {level} and a != b")));
    }
    let l = lift_c(m, level)?;
    if a.max(b) >= l.carrier(n) {
        return Err(Error::OutOfRange {
            position: n,
            value: a.max(b) + 1,
            bound: l.carrier(n),
        });
    }
    union(level, vec![l, base.clone()])?.glue(n, a, b)
}

/// `L^{c_m} ⊔ base` with `M(f)(x)` and `M(f)(y)` glued, for the `j`-th
/// `f: n ↠ m`, `n > m`, and distinct level-`m` elements `x`, `y`.
pub fn injectivity_merge(
    base: &TruncatedPresheaf,
    m: usize,
    n: usize,
    j: usize,
    x: usize,
    y: usize,
) -> Result<TruncatedPresheaf> {
    let level = base.level();
    if m < 2 || n <= m || n > level {
        return Err(Error::Invalid(format!("need 2 <= m < n <= {level}")));
    }
    let l = lift_c(m, level)?;
    let site = l.site();
    let maps = site.between(n, m);
    let f = maps.start + j % maps.len();
    let (x, y) = (x % l.carrier(m), y % l.carrier(m));
    if x == y {
        return Err(Error::Invalid("elements must differ".into()));
    }
    let t = l.table(f);
    union(level, vec![l.clone(), base.clone()])?.glue(n, t[x], t[y])
}

/// All multisets of cluster sizes `≤ max_size` with at most `max_count`
/// members, in lexicographic order of their sorted lists.
pub fn cluster_multisets(max_size: usize, max_count: usize) -> Vec<Vec<usize>> {
    fn go(from: usize, max_size: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        if left == 0 {
            return;
        }
        for s in from..=max_size {
            cur.push(s);
            go(s, max_size, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, max_size, max_count, &mut Vec::new(), &mut out);
    out
}

/// `per_kind` mutants of every kind, over random small bases, at levels
/// `3..=max_level`.
pub fn mutant_corpus(seed: u64, per_kind: usize, max_level: usize) -> Result<Vec<Mutant>> {
    if max_level < 3 {
        return Err(Error::Invalid("mutants need truncation level at least 3".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for kind in MutantKind::ALL {
        let mut made = 0;
        while made < per_kind {
            let level = rng.gen_range(3..=max_level);
            let sizes: Vec<usize> = (0..rng.gen_range(0..=2))
                .map(|_| rng.gen_range(1..=level.min(3)))
                .collect();
            let base = model_from_frame(&sizes, level)?;
            let (name, built) = match kind {
                MutantKind::SingleEdit => {
                    let site = base.site();
                    let candidates: Vec<(usize, usize)> = (0..site.len())
                        .flat_map(|id| (0..base.table(id).len()).map(move |x| (id, x)))
                        .filter(|&(id, _)| base.carrier(site.map(id).dom()) >= 2)
                        .collect();
                    let Some(&(id, x)) = candidates.choose(&mut rng) else {
                        continue;
                    };
                    let size = base.carrier(site.map(id).dom());
                    let shift = rng.gen_range(1..size);
                    (
                        format!("single_edit {sizes:?} N={level} q={:?} x={} +{shift}", site.map(id).values(), x + 1),
                        single_edit(&base, id, x, shift),
                    )
                }
                MutantKind::TruncatedTerminal => {
                    let from = rng.gen_range(2..=level);
                    (
                        format!("truncated_terminal {sizes:?} N={level} from={from}"),
                        truncated_terminal(&base, from),
                    )
                }
                MutantKind::UnfaithfulLifting => {
                    let m = rng.gen_range(2..=level.min(4));
                    let sign = m >= 3 && rng.gen_bool(0.5);
                    (
                        format!("unfaithful_lifting {sizes:?} N={level} m={m} sign={sign}"),
                        unfaithful_lifting(&base, m, sign),
                    )
                }
                MutantKind::CrossLevelGlue => {
                    let m = rng.gen_range(2..level);
                    let n = rng.gen_range(m + 1..=level);
                    let i = rng.gen_range(0..1000);
                    (
                        format!("cross_level_glue {sizes:?} N={level} m={m} n={n} i={i}"),
                        cross_level_glue(&base, m, n, i),
                    )
                }
                MutantKind::ClassMerge => {
                    let m = rng.gen_range(1..level);
                    let n = rng.gen_range(m + 1..=level);
                    let size = lift_c(m, level)?.carrier(n);
                    if size < 2 {
                        continue;
                    }
                    let a = rng.gen_range(0..size);
                    let b = (a + rng.gen_range(1..size)) % size;
                    (
                        format!("class_merge {sizes:?} N={level} m={m} n={n} {}~{}", a + 1, b + 1),
                        class_merge(&base, m, n, a, b),
                    )
                }
                MutantKind::InjectivityMerge => {
                    let m = rng.gen_range(2..level.min(4));
                    let n = rng.gen_range(m + 1..=level);
                    let j = rng.gen_range(0..1000);
                    let x = rng.gen_range(0..1000);
                    let y = x + rng.gen_range(1..crate::surjection::factorial(m));
                    (
                        format!("injectivity_merge {sizes:?} N={level} m={m} n={n} j={j} x={x} y={y}"),
                        injectivity_merge(&base, m, n, j, x, y),
                    )
                }
            };
            out.push(Mutant {
                kind,
                name,
                structure: built?,
            });
            made += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::{check_lex_preservation, check_t1, check_t2, FixScope, TheoryReport, Verdict};

    fn failing(reports: &[TheoryReport]) -> Vec<String> {
        reports
            .iter()
            .flat_map(|r| &r.axioms)
            .filter(|a| a.verdict == Verdict::Fail)
            .map(|a| a.axiom.clone())
            .collect()
    }

    #[test]
    fn multisets() {
        assert_eq!(cluster_multisets(2, 2), vec![vec![], vec![1], vec![1, 1], vec![1, 2], vec![2], vec![2, 2]]);
        assert_eq!(cluster_multisets(4, 4).len(), 70);
    }

    #[test]
    fn corpus_is_deterministic() {
        let a = mutant_corpus(7, 2, 4).unwrap();
        let b = mutant_corpus(7, 2, 4).unwrap();
        assert_eq!(a.len(), 12);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.name, y.name);
            assert_eq!(x.structure, y.structure);
        }
    }

    #[test]
    fn every_mutant_fails_its_labels() {
        for mutant in mutant_corpus(0, 4, 4).unwrap() {
            let m = &mutant.structure;
            let reports = [check_t1(m), check_t2(m, FixScope::FixTrivial), check_lex_preservation(m)];
            let failed = failing(&reports);
            for label in mutant.expected_failures() {
                assert!(failed.iter().any(|f| f == label), "{}: {failed:?}", mutant.name);
            }
            for r in &reports {
                assert!(!r.passes(), "{}: {r:?}", mutant.name);
                for a in &r.axioms {
                    if let Some(c) = &a.counterexample {
                        assert!(!c.holds_in(m), "{}: {c:?}", mutant.name);
                    }
                }
            }
        }
    }

    #[test]
    fn sign_action_of_s2_is_rejected() {
        let base = model_from_frame(&[], 3).unwrap();
        assert!(unfaithful_lifting(&base, 2, true).is_err());
        let m = unfaithful_lifting(&base, 3, true).unwrap();
        assert!(!check_t1(&m).passes());
    }

    #[test]
    fn representable_plus_point_at_two() {
        let base = model_from_frame(&[2], 3).unwrap();
        let m = truncated_terminal(&base, 2).unwrap();
        assert_eq!(m.carriers(), &[0, 3, 7]);
        assert_eq!(check_t1(&m).axiom("2").unwrap().verdict, Verdict::Fail);
    }
}
