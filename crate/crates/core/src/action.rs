//! Right actions of `S_m` on finite sets, presented by two generators.
//!
//! Carrier elements are indices `0..carrier` in the Rust API and `1..=carrier`
//! in JSON and in error payloads. `gen_swap` is the action of `(1 2)` and
//! `gen_cycle` the action of `(1 2 … m)`. The orientation is
//! `apply(σ, apply(τ, x)) == apply(τ∘σ, x)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Closure;
use crate::surjection::{
    enumerate_permutations_capped, factorial, Permutation, DEFAULT_PERMUTATION_CAP,
};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "ActionRepr", into = "ActionRepr")]
pub struct SymmetricAction {
    m: usize,
    gen_swap: Vec<usize>,
    gen_cycle: Vec<usize>,
    inv_cycle: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct ActionRepr {
    m: usize,
    carrier: usize,
    gen_swap: Vec<usize>,
    gen_cycle: Vec<usize>,
}

fn to_zero_based(v: Vec<usize>, bound: usize) -> Result<Vec<usize>> {
    v.into_iter()
        .enumerate()
        .map(|(i, x)| {
            if (1..=bound).contains(&x) {
                Ok(x - 1)
            } else {
                Err(Error::OutOfRange {
                    position: i + 1,
                    value: x,
                    bound,
                })
            }
        })
        .collect()
}

impl TryFrom<ActionRepr> for SymmetricAction {
    type Error = Error;

    fn try_from(r: ActionRepr) -> Result<Self> {
        for table in [&r.gen_swap, &r.gen_cycle] {
            if table.len() != r.carrier {
                return Err(Error::BadTable {
                    expected: r.carrier,
                    found: table.len(),
                });
            }
        }
        SymmetricAction::new(
            r.m,
            to_zero_based(r.gen_swap, r.carrier)?,
            to_zero_based(r.gen_cycle, r.carrier)?,
        )
    }
}

impl From<SymmetricAction> for ActionRepr {
    fn from(a: SymmetricAction) -> Self {
        ActionRepr {
            m: a.m,
            carrier: a.carrier(),
            gen_swap: a.gen_swap.iter().map(|x| x + 1).collect(),
            gen_cycle: a.gen_cycle.iter().map(|x| x + 1).collect(),
        }
    }
}

fn inverse_table(t: &[usize]) -> Result<Vec<usize>> {
    let mut inv = vec![usize::MAX; t.len()];
    for (i, &v) in t.iter().enumerate() {
        if v >= t.len() {
            return Err(Error::OutOfRange {
                position: i + 1,
                value: v + 1,
                bound: t.len(),
            });
        }
        if inv[v] != usize::MAX {
            return Err(Error::NotBijective);
        }
        inv[v] = i;
    }
    Ok(inv)
}

/// Indices `i` of adjacent transpositions `(i i+1)` whose composite is `σ`,
/// listed in the order they act.
fn adjacent_word(sigma: &Permutation) -> Vec<usize> {
    let mut a = sigma.values().to_vec();
    let mut swaps = Vec::new();
    for end in (1..a.len()).rev() {
        for i in 0..end {
            if a[i] > a[i + 1] {
                a.swap(i, i + 1);
                swaps.push(i + 1);
            }
        }
    }
    swaps.reverse();
    swaps
}

impl SymmetricAction {
    /// Generators as 0-based tables on the carrier. For `m = 1` both must be
    /// the identity.
    pub fn new(m: usize, gen_swap: Vec<usize>, gen_cycle: Vec<usize>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Invalid("symmetric group degree must be positive".into()));
        }
        if gen_swap.len() != gen_cycle.len() {
            return Err(Error::BadTable {
                expected: gen_swap.len(),
                found: gen_cycle.len(),
            });
        }
        inverse_table(&gen_swap)?;
        let inv_cycle = inverse_table(&gen_cycle)?;
        let is_id = |t: &[usize]| t.iter().enumerate().all(|(i, &v)| i == v);
        if m == 1 && !(is_id(&gen_swap) && is_id(&gen_cycle)) {
            return Err(Error::InvalidAction);
        }
        Ok(Self {
            m,
            gen_swap,
            gen_cycle,
            inv_cycle,
        })
    }

    /// The action of `S_m` in which every permutation fixes everything.
    pub fn trivial(m: usize, carrier: usize) -> Result<Self> {
        let id: Vec<usize> = (0..carrier).collect();
        Self::new(m, id.clone(), id)
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn carrier(&self) -> usize {
        self.gen_swap.len()
    }

    pub fn gen_swap(&self) -> &[usize] {
        &self.gen_swap
    }

    pub fn gen_cycle(&self) -> &[usize] {
        &self.gen_cycle
    }

    fn check_degree(&self, sigma: &Permutation) -> Result<()> {
        if sigma.size() != self.m {
            return Err(Error::DegreeMismatch {
                expected: self.m,
                found: sigma.size(),
            });
        }
        Ok(())
    }

    /// `a((i i+1), x)`, using `(i i+1) = c^{i-1} ∘ (1 2) ∘ c^{-(i-1)}`.
    fn apply_adjacent(&self, i: usize, mut x: usize) -> usize {
        for _ in 1..i {
            x = self.gen_cycle[x];
        }
        x = self.gen_swap[x];
        for _ in 1..i {
            x = self.inv_cycle[x];
        }
        x
    }

    pub fn apply(&self, sigma: &Permutation, x: usize) -> Result<usize> {
        self.check_degree(sigma)?;
        if x >= self.carrier() {
            return Err(Error::OutOfRange {
                position: 1,
                value: x + 1,
                bound: self.carrier(),
            });
        }
        Ok(adjacent_word(sigma)
            .into_iter()
            .fold(x, |x, i| self.apply_adjacent(i, x)))
    }

    /// The whole carrier permutation induced by `σ`.
    pub fn act(&self, sigma: &Permutation) -> Result<Vec<usize>> {
        self.check_degree(sigma)?;
        let adjacent = self.adjacent_tables();
        Ok(self.act_with(&adjacent, sigma))
    }

    fn adjacent_tables(&self) -> Vec<Vec<usize>> {
        (1..self.m)
            .map(|i| (0..self.carrier()).map(|x| self.apply_adjacent(i, x)).collect())
            .collect()
    }

    fn act_with(&self, adjacent: &[Vec<usize>], sigma: &Permutation) -> Vec<usize> {
        let mut table: Vec<usize> = (0..self.carrier()).collect();
        for i in adjacent_word(sigma) {
            for x in table.iter_mut() {
                *x = adjacent[i - 1][*x];
            }
        }
        table
    }

    /// `a(σ, ·)` for every `σ`, in lexicographic order of `σ`.
    pub fn tabulate(&self, cap: usize) -> Result<Vec<Vec<usize>>> {
        let adjacent = self.adjacent_tables();
        Ok(enumerate_permutations_capped(self.m, cap)?
            .iter()
            .map(|s| self.act_with(&adjacent, s))
            .collect())
    }
}

/// Outcome of [`validate_action`]. Element payloads are 1-based.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ActionReport {
    /// An `x` with `a(1, x) ≠ x`.
    pub identity_law: Option<usize>,
    /// A triple `(σ, τ, x)` with `a(σ, a(τ, x)) ≠ a(τ∘σ, x)`.
    pub composition_law: Option<(Permutation, Permutation, usize)>,
    pub swap_involution: bool,
    pub cycle_order: bool,
    /// `((1 2) ∘ (1 2 … m))^{m-1} = 1`.
    pub product_order: bool,
}

impl ActionReport {
    pub fn passes(&self) -> bool {
        self.identity_law.is_none()
            && self.composition_law.is_none()
            && self.swap_involution
            && self.cycle_order
            && self.product_order
    }
}

pub fn validate_action(a: &SymmetricAction) -> Result<ActionReport> {
    validate_action_capped(a, DEFAULT_PERMUTATION_CAP)
}

/// Tabulates `S_m` from the generators and checks both action laws.
///
/// Small cases compare every pair. Larger ones compare `τ∘g` for the two
/// generators `g`, which implies every pair by induction on word length.
pub fn validate_action_capped(a: &SymmetricAction, cap: usize) -> Result<ActionReport> {
    let m = a.m;
    let perms = enumerate_permutations_capped(m, cap)?;
    let table = a.tabulate(cap)?;
    let n = a.carrier();
    let identity_law = (0..n).find(|&x| table[0][x] != x).map(|x| x + 1);

    let mut composition_law = None;
    let full = factorial(m).pow(2).saturating_mul(n) <= 4_000_000;
    let partners: Vec<(Permutation, &[usize])> = if full {
        perms.iter().zip(&table).map(|(p, t)| (p.clone(), t.as_slice())).collect()
    } else {
        vec![
            (Permutation::transposition(m, 1, 2.min(m)), a.gen_swap.as_slice()),
            (Permutation::cycle(m), a.gen_cycle.as_slice()),
        ]
    };
    'outer: for (tau, t_tau) in perms.iter().zip(&table) {
        for (sigma, t_sigma) in &partners {
            let t_comp = &table[tau.compose(sigma).rank()];
            if let Some(x) = (0..n).find(|&x| t_sigma[t_tau[x]] != t_comp[x]) {
                composition_law = Some((sigma.clone(), tau.clone(), x + 1));
                break 'outer;
            }
        }
    }

    let power_is_identity = |f: &dyn Fn(usize) -> usize, k: usize| {
        (0..n).all(|x| (0..k).fold(x, |y, _| f(y)) == x)
    };
    Ok(ActionReport {
        identity_law,
        composition_law,
        swap_involution: power_is_identity(&|x| a.gen_swap[x], 2),
        cycle_order: power_is_identity(&|x| a.gen_cycle[x], m),
        product_order: power_is_identity(&|x| a.gen_swap[a.gen_cycle[x]], m.max(2) - 1),
    })
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct OrbitDecomposition {
    /// 0-based orbit id per element, numbered by first occurrence.
    pub orbit_of: Vec<usize>,
    pub orbit_count: usize,
}

impl OrbitDecomposition {
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.orbit_count];
        for (x, &o) in self.orbit_of.iter().enumerate() {
            out[o].push(x);
        }
        out
    }
}

/// Orbits as the closure under the two generators.
pub fn orbits(a: &SymmetricAction) -> OrbitDecomposition {
    let mut c = Closure::new(a.carrier());
    for x in 0..a.carrier() {
        c.merge(x, a.gen_swap[x]);
        c.merge(x, a.gen_cycle[x]);
    }
    let (labels, orbit_count) = c.labels();
    OrbitDecomposition {
        orbit_of: labels.into_iter().map(|l| l - 1).collect(),
        orbit_count,
    }
}

/// For each element, whether only the identity fixes it.
pub fn fix_trivial_elements(a: &SymmetricAction) -> Result<Vec<bool>> {
    let table = a.tabulate(DEFAULT_PERMUTATION_CAP)?;
    let mut out = vec![true; a.carrier()];
    for t in &table[1..] {
        for (x, &y) in t.iter().enumerate() {
            if x == y {
                out[x] = false;
            }
        }
    }
    Ok(out)
}

pub fn fix_is_trivial(a: &SymmetricAction, x: usize) -> Result<bool> {
    let table = a.tabulate(DEFAULT_PERMUTATION_CAP)?;
    Ok(table[1..].iter().all(|t| t[x] != x))
}

pub fn is_faithful(a: &SymmetricAction) -> Result<bool> {
    Ok(fix_trivial_elements(a)?.into_iter().all(|b| b))
}

pub fn is_transitive(a: &SymmetricAction) -> bool {
    orbits(a).orbit_count == 1
}

pub fn canonical_action(m: usize) -> Result<SymmetricAction> {
    canonical_action_capped(m, DEFAULT_PERMUTATION_CAP)
}

/// `S_m` acting on itself by `c(f, g) = g∘f`, elements indexed by
/// lexicographic rank.
pub fn canonical_action_capped(m: usize, cap: usize) -> Result<SymmetricAction> {
    let perms = enumerate_permutations_capped(m, cap)?;
    let swap = Permutation::transposition(m, 1, 2.min(m));
    let cycle = Permutation::cycle(m);
    let by = |g: &Permutation| perms.iter().map(|p| p.compose(g).rank()).collect();
    SymmetricAction::new(m, by(&swap), by(&cycle))
}

/// The sub-action on a subset closed under both generators, with elements
/// renumbered in the order given.
pub fn restrict(a: &SymmetricAction, elements: &[usize]) -> Result<SymmetricAction> {
    let mut index = vec![usize::MAX; a.carrier()];
    for (i, &x) in elements.iter().enumerate() {
        index[x] = i;
    }
    let pull = |g: &[usize]| {
        elements
            .iter()
            .map(|&x| match index[g[x]] {
                usize::MAX => Err(Error::Invalid(format!(
                    "element {} leaves the subset",
                    x + 1
                ))),
                i => Ok(i),
            })
            .collect::<Result<Vec<_>>>()
    };
    SymmetricAction::new(a.m, pull(&a.gen_swap)?, pull(&a.gen_cycle)?)
}

pub fn disjoint_union(a: &SymmetricAction, b: &SymmetricAction) -> Result<SymmetricAction> {
    if a.m != b.m {
        return Err(Error::DegreeMismatch {
            expected: a.m,
            found: b.m,
        });
    }
    let k = a.carrier();
    let join = |x: &[usize], y: &[usize]| x.iter().copied().chain(y.iter().map(|v| v + k)).collect();
    SymmetricAction::new(a.m, join(&a.gen_swap, &b.gen_swap), join(&a.gen_cycle, &b.gen_cycle))
}

/// Transports `a` along the bijection `x ↦ pi[x]`.
pub fn relabel(a: &SymmetricAction, pi: &[usize]) -> Result<SymmetricAction> {
    if pi.len() != a.carrier() {
        return Err(Error::BadTable {
            expected: a.carrier(),
            found: pi.len(),
        });
    }
    let inv = inverse_table(pi)?;
    let push = |g: &[usize]| (0..pi.len()).map(|y| pi[g[inv[y]]]).collect();
    SymmetricAction::new(a.m, push(&a.gen_swap), push(&a.gen_cycle))
}

/// The fix-trivial elements and the rest, each closed under the action.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FaithfulSplit {
    pub faithful: SymmetricAction,
    pub faithful_elements: Vec<usize>,
    pub rest: SymmetricAction,
    pub rest_elements: Vec<usize>,
}

pub fn faithful_part(a: &SymmetricAction) -> Result<FaithfulSplit> {
    let trivial = fix_trivial_elements(a)?;
    let (faithful_elements, rest_elements): (Vec<usize>, Vec<usize>) =
        (0..a.carrier()).partition(|&x| trivial[x]);
    Ok(FaithfulSplit {
        faithful: restrict(a, &faithful_elements)?,
        rest: restrict(a, &rest_elements)?,
        faithful_elements,
        rest_elements,
    })
}

/// An orbit identified with the canonical action: `elements[j] = a(σ_j, base)`
/// where `σ_j` has lexicographic rank `ranks[j]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrbitIso {
    pub base: usize,
    pub elements: Vec<usize>,
    pub ranks: Vec<usize>,
}

impl OrbitIso {
    /// The canonical element (as a rank) corresponding to `x`, if `x` lies in
    /// this orbit.
    pub fn rank_of(&self, x: usize) -> Option<usize> {
        self.elements.iter().position(|&e| e == x).map(|j| self.ranks[j])
    }
}

/// The intertwiner `a(σ, base) ↦ σ` for a fix-trivial base point.
pub fn orbit_isomorphism(a: &SymmetricAction, base: usize) -> Result<OrbitIso> {
    let table = a.tabulate(DEFAULT_PERMUTATION_CAP)?;
    orbit_iso_from_table(&table, base)
}

fn orbit_iso_from_table(table: &[Vec<usize>], base: usize) -> Result<OrbitIso> {
    let mut pairs: Vec<(usize, usize)> = table.iter().enumerate().map(|(r, t)| (t[base], r)).collect();
    pairs.sort_unstable();
    if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::NotFaithful(base + 1));
    }
    let (elements, ranks) = pairs.into_iter().unzip();
    Ok(OrbitIso {
        base,
        elements,
        ranks,
    })
}

/// One intertwiner per orbit, based at the orbit's least element.
pub fn decompose_faithful(a: &SymmetricAction) -> Result<Vec<OrbitIso>> {
    let table = a.tabulate(DEFAULT_PERMUTATION_CAP)?;
    let mut isos = Vec::new();
    for orbit in orbits(a).members() {
        isos.push(orbit_iso_from_table(&table, orbit[0])?);
    }
    Ok(isos)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surjection::enumerate_permutations;

    /// Words `w: {1..m} → {1..k}` with `σ` acting by `w ↦ w∘σ`, tabulated
    /// straight from the definition.
    fn word_action(m: usize, k: usize) -> (Vec<Vec<usize>>, SymmetricAction) {
        let mut words = vec![vec![]];
        for _ in 0..m {
            words = words
                .into_iter()
                .flat_map(|w: Vec<usize>| {
                    (1..=k).map(move |c| {
                        let mut w = w.clone();
                        w.push(c);
                        w
                    })
                })
                .collect();
        }
        let index = |w: &[usize]| w.iter().fold(0, |acc, &c| acc * k + c - 1);
        let by = |g: &Permutation| -> Vec<usize> {
            words
                .iter()
                .map(|w| index(&(1..=m).map(|i| w[g.apply(i) - 1]).collect::<Vec<_>>()))
                .collect()
        };
        let a = SymmetricAction::new(
            m,
            by(&Permutation::transposition(m, 1, 2.min(m))),
            by(&Permutation::cycle(m)),
        )
        .unwrap();
        let oracle = enumerate_permutations(m).unwrap().iter().map(by).collect();
        (oracle, a)
    }

    #[test]
    fn apply_matches_word_oracle() {
        for m in 1..=4 {
            for k in 1..=3 {
                let (oracle, a) = word_action(m, k);
                let perms = enumerate_permutations(m).unwrap();
                for (p, t) in perms.iter().zip(&oracle) {
                    for x in 0..a.carrier() {
                        assert_eq!(a.apply(p, x).unwrap(), t[x]);
                    }
                }
                assert!(validate_action(&a).unwrap().passes());
            }
        }
    }

    #[test]
    fn right_action_orientation() {
        let a = canonical_action(3).unwrap();
        let perms = enumerate_permutations(3).unwrap();
        for s in &perms {
            for t in &perms {
                for x in 0..6 {
                    let lhs = a.apply(s, a.apply(t, x).unwrap()).unwrap();
                    assert_eq!(lhs, a.apply(&t.compose(s), x).unwrap());
                }
            }
        }
    }

    #[test]
    fn canonical_examples() {
        let a = canonical_action(2).unwrap();
        let swap = Permutation::transposition(2, 1, 2);
        assert_eq!(a.apply(&swap, 0).unwrap(), swap.rank());
        assert_eq!(a.apply(&Permutation::identity(2), 1).unwrap(), 1);
        assert_eq!(canonical_action(1).unwrap().carrier(), 1);
        for m in 1..=5 {
            let a = canonical_action(m).unwrap();
            assert_eq!(a.carrier(), factorial(m));
            assert!(is_faithful(&a).unwrap());
            assert!(is_transitive(&a));
        }
        assert!(validate_action(&canonical_action(3).unwrap()).unwrap().passes());
        assert!(matches!(canonical_action(7), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn degree_mismatch() {
        let a = canonical_action(3).unwrap();
        assert_eq!(
            a.apply(&Permutation::identity(2), 0),
            Err(Error::DegreeMismatch { expected: 3, found: 2 })
        );
    }

    #[test]
    fn validation_examples() {
        let trivial = SymmetricAction::trivial(2, 2).unwrap();
        assert!(validate_action(&trivial).unwrap().passes());

        let rot = vec![1, 2, 0];
        let bad = SymmetricAction::new(2, rot.clone(), rot).unwrap();
        let r = validate_action(&bad).unwrap();
        assert!(!r.passes());
        assert!(!r.swap_involution);
        assert!(r.composition_law.is_some());

        assert_eq!(
            SymmetricAction::new(1, vec![1, 0], vec![0, 1]),
            Err(Error::InvalidAction)
        );
        assert_eq!(SymmetricAction::new(2, vec![0, 0], vec![0, 1]), Err(Error::NotBijective));
    }

    #[test]
    fn generator_only_check_catches_bad_cycle() {
        // For m = 5 the pairwise check is skipped in favour of generators.
        let a = canonical_action(5).unwrap();
        let mut cycle = a.gen_cycle().to_vec();
        cycle.swap(0, 1);
        let bad = SymmetricAction::new(5, a.gen_swap().to_vec(), cycle).unwrap();
        assert!(!validate_action(&bad).unwrap().passes());
        assert!(validate_action(&a).unwrap().passes());
    }

    #[test]
    fn orbits_and_fix() {
        let point = SymmetricAction::trivial(2, 1).unwrap();
        assert!(!is_faithful(&point).unwrap());
        assert!(!fix_is_trivial(&point, 0).unwrap());

        let c2 = canonical_action(2).unwrap();
        let two = disjoint_union(&c2, &c2).unwrap();
        assert!(is_faithful(&two).unwrap());
        assert_eq!(orbits(&two).orbit_count, 2);
        assert!(!is_transitive(&two));

        let s1 = SymmetricAction::trivial(1, 3).unwrap();
        assert!(is_faithful(&s1).unwrap());
        assert_eq!(orbits(&s1).orbit_count, 3);
    }

    #[test]
    fn faithful_split() {
        let c2 = canonical_action(2).unwrap();
        let mixed = disjoint_union(&SymmetricAction::trivial(2, 1).unwrap(), &c2).unwrap();
        let split = faithful_part(&mixed).unwrap();
        assert_eq!(split.faithful, c2);
        assert_eq!(split.faithful_elements, vec![1, 2]);
        assert_eq!(split.rest, SymmetricAction::trivial(2, 1).unwrap());

        let split = faithful_part(&c2).unwrap();
        assert_eq!(split.faithful, c2);
        assert_eq!(split.rest.carrier(), 0);

        let empty = SymmetricAction::trivial(3, 0).unwrap();
        let split = faithful_part(&empty).unwrap();
        assert_eq!((split.faithful.carrier(), split.rest.carrier()), (0, 0));
    }

    #[test]
    fn decompositions() {
        let c3 = canonical_action(3).unwrap();
        let isos = decompose_faithful(&c3).unwrap();
        assert_eq!(isos.len(), 1);
        assert_eq!(isos[0].base, 0);
        assert_eq!(isos[0].ranks, (0..6).collect::<Vec<_>>());

        let pi = vec![4, 2, 0, 5, 1, 3];
        let moved = relabel(&c3, &pi).unwrap();
        let iso = orbit_isomorphism(&moved, pi[0]).unwrap();
        for x in 0..6 {
            assert_eq!(iso.rank_of(pi[x]), Some(x));
        }

        let c2 = canonical_action(2).unwrap();
        let mut many = c2.clone();
        for _ in 0..3 {
            many = disjoint_union(&many, &c2).unwrap();
        }
        let isos = decompose_faithful(&many).unwrap();
        assert_eq!(isos.len(), 4);
        assert!(isos.iter().all(|i| i.elements.len() == 2));

        let point = SymmetricAction::trivial(2, 1).unwrap();
        assert_eq!(decompose_faithful(&point), Err(Error::NotFaithful(1)));
    }

    #[test]
    fn json_shape() {
        let a = canonical_action(2).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"m":2,"carrier":2,"gen_swap":[2,1],"gen_cycle":[2,1]}"#);
        assert_eq!(serde_json::from_str::<SymmetricAction>(&s).unwrap(), a);
        assert!(serde_json::from_str::<SymmetricAction>(
            r#"{"m":1,"carrier":2,"gen_swap":[2,1],"gen_cycle":[1,2]}"#
        )
        .is_err());
    }
}
