//! Canonical liftings of symmetric-group actions to truncated presheaves.
//!
//! For an action `a` of `S_m` on `X`, level `n` of the lifting consists of
//! pairs `(x, q: n ↠ m)` modulo `(x, q) ≈ (a(σ,x), σ⁻¹∘q)`, and a surjection
//! `p` acts by `[x, q] ↦ [x, q∘p]`.

use serde::Serialize;

use crate::action::SymmetricAction;
use crate::error::{Error, Result};
use crate::presheaf::{NatTransformation, Site, TruncatedPresheaf};
use crate::surjection::{enumerate_permutations, Permutation, Surjection, DEFAULT_PERMUTATION_CAP};

/// Bound on backtracking nodes in [`enumerate_nat_transformations`].
pub const DEFAULT_SEARCH_BOUND: usize = 2_000_000;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Lifting {
    pub degree: usize,
    pub presheaf: TruncatedPresheaf,
    /// `η(x) = [x, 1]`, an element of level `m`.
    pub eta: Vec<usize>,
    /// Lexicographically least representative `(x, q)` of each element, per
    /// level.
    pub reps: Vec<Vec<(usize, Surjection)>>,
}

impl Lifting {
    /// The element `[x, q]`.
    pub fn element(&self, x: usize, q: &Surjection) -> Result<usize> {
        if q.cod() != self.degree {
            return Err(Error::SortMismatch {
                expected: self.degree,
                found: q.cod(),
            });
        }
        let e = *self.eta.get(x).ok_or(Error::OutOfRange {
            position: 1,
            value: x + 1,
            bound: self.eta.len(),
        })?;
        self.presheaf.apply(q, e)
    }
}

fn twist(sigma_inv: &Permutation, q: &Surjection) -> Surjection {
    sigma_inv.as_surjection().compose_unchecked(q)
}

pub fn canonical_lifting(a: &SymmetricAction, level: usize) -> Result<Lifting> {
    let m = a.degree();
    if m > level {
        return Err(Error::ClusterExceedsTruncation { size: m, level });
    }
    let site = Site::get(level)?;
    let perms = enumerate_permutations(m)?;
    let inverses: Vec<Permutation> = perms.iter().map(Permutation::inverse).collect();
    let table = a.tabulate(DEFAULT_PERMUTATION_CAP)?;
    let xs = a.carrier();

    // class_of[n][x * S + j] for the j-th surjection n ↠ m
    let mut class_of: Vec<Vec<usize>> = vec![Vec::new(); level + 1];
    let mut reps: Vec<Vec<(usize, Surjection)>> = vec![Vec::new(); level];
    for n in m..=level {
        let range = site.between(n, m);
        let s = range.len();
        let mut classes = vec![usize::MAX; xs * s];
        for x in 0..xs {
            for j in 0..s {
                if classes[x * s + j] != usize::MAX {
                    continue;
                }
                let id = reps[n - 1].len();
                let q = site.map(range.start + j);
                reps[n - 1].push((x, q.clone()));
                for (t, inv) in table.iter().zip(&inverses) {
                    let j2 = site.id(&twist(inv, q)).unwrap() - range.start;
                    classes[t[x] * s + j2] = id;
                }
            }
        }
        class_of[n] = classes;
    }

    let carriers: Vec<usize> = reps.iter().map(Vec::len).collect();
    let tables = (0..site.len())
        .map(|pid| {
            let p = site.map(pid);
            let (n, k) = (p.cod(), p.dom());
            if n < m {
                return Vec::new();
            }
            let start_k = site.between(k, m).start;
            let s_k = site.between(k, m).len();
            reps[n - 1]
                .iter()
                .map(|(x, q)| {
                    let qp = site.compose(site.id(q).unwrap(), pid) - start_k;
                    class_of[k][x * s_k + qp]
                })
                .collect()
        })
        .collect();
    let presheaf = TruncatedPresheaf::new_unchecked(level, carriers, tables)?;
    let s_m = site.between(m, m).len();
    let eta = (0..xs).map(|x| class_of[m][x * s_m]).collect();
    Ok(Lifting {
        degree: m,
        presheaf,
        eta,
        reps,
    })
}

/// The `σ` with `a(σ, x₁) = x₂` and `σ∘q₂ = q₁`, read off from
/// `σ(q₂(i)) = q₁(i)`.
pub fn equivalent_pairs(
    a: &SymmetricAction,
    (x1, q1): (usize, &Surjection),
    (x2, q2): (usize, &Surjection),
) -> Option<Permutation> {
    let m = a.degree();
    if q1.dom() != q2.dom() || q1.cod() != m || q2.cod() != m {
        return None;
    }
    let mut sigma = vec![0; m];
    for (&v1, &v2) in q1.values().iter().zip(q2.values()) {
        match sigma[v2 - 1] {
            0 => sigma[v2 - 1] = v1,
            v if v == v1 => {}
            _ => return None,
        }
    }
    let sigma = Permutation::new(sigma).ok()?;
    (a.apply(&sigma, x1).ok()? == x2).then_some(sigma)
}

/// Two pairs on which the collision criterion fails: their values agree
/// but no `σ` relates them, or a `σ` relates them but the values differ.
/// Element payloads here and in [`LiftingReport`] are 1-based.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Collision {
    pub level: usize,
    pub x1: usize,
    pub q1: Surjection,
    pub x2: usize,
    pub q2: Surjection,
    pub equal_values: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct LiftingReport {
    pub eta_bijective: bool,
    /// `(σ, x)` with `L(σ)(η(x)) ≠ η(a(σ, x))`.
    pub eta_equivariant: Option<(Permutation, usize)>,
    /// `(n, z)` with `z` outside every image `L(q)(η(x))`.
    pub cover: Option<(usize, usize)>,
    pub collision: Option<Collision>,
}

impl LiftingReport {
    pub fn passes(&self) -> bool {
        self.eta_bijective
            && self.eta_equivariant.is_none()
            && self.cover.is_none()
            && self.collision.is_none()
    }
}

/// Checks that `(L, η)` is a canonical lifting of `a` on every level.
pub fn verify_lifting_conditions(
    l: &TruncatedPresheaf,
    a: &SymmetricAction,
    eta: &[usize],
) -> Result<LiftingReport> {
    let m = a.degree();
    let level = l.level();
    let site = l.site();
    let mut report = LiftingReport::default();
    if m > level || eta.len() != a.carrier() {
        return Ok(report);
    }
    let mut hit = vec![false; l.carrier(m)];
    report.eta_bijective = eta.len() == l.carrier(m)
        && eta.iter().all(|&e| e < hit.len() && !std::mem::replace(&mut hit[e], true));
    if !report.eta_bijective {
        return Ok(report);
    }

    let perms = enumerate_permutations(m)?;
    let table = a.tabulate(DEFAULT_PERMUTATION_CAP)?;
    'eq: for (sigma, t) in perms.iter().zip(&table) {
        let lt = l.table(site.id(&sigma.as_surjection()).unwrap());
        for x in 0..a.carrier() {
            if lt[eta[x]] != eta[t[x]] {
                report.eta_equivariant = Some((sigma.clone(), x + 1));
                break 'eq;
            }
        }
    }

    let inverses: Vec<Permutation> = perms.iter().map(Permutation::inverse).collect();
    for n in 1..=level {
        let range = site.between(n, m);
        let s = range.len();
        let value = |x: usize, j: usize| l.table(range.start + j)[eta[x]];
        let mut covered = vec![false; l.carrier(n)];
        for x in 0..a.carrier() {
            for j in 0..s {
                covered[value(x, j)] = true;
            }
        }
        if report.cover.is_none() {
            report.cover = covered.iter().position(|&c| !c).map(|z| (n, z + 1));
        }
        if report.collision.is_some() {
            continue;
        }
        // Each ≈-class must land on one value, and distinct classes on
        // distinct values.
        let mut seen = vec![false; a.carrier() * s];
        let mut owner: Vec<Option<(usize, usize)>> = vec![None; l.carrier(n)];
        'pairs: for x in 0..a.carrier() {
            for j in 0..s {
                if seen[x * s + j] {
                    continue;
                }
                let q = site.map(range.start + j);
                let z = value(x, j);
                for (t, inv) in table.iter().zip(&inverses) {
                    let j2 = site.id(&twist(inv, q)).unwrap() - range.start;
                    seen[t[x] * s + j2] = true;
                    if value(t[x], j2) != z {
                        report.collision = Some(Collision {
                            level: n,
                            x1: x + 1,
                            q1: q.clone(),
                            x2: t[x] + 1,
                            q2: site.map(range.start + j2).clone(),
                            equal_values: false,
                        });
                        break 'pairs;
                    }
                }
                if let Some((x0, j0)) = owner[z].replace((x, j)) {
                    report.collision = Some(Collision {
                        level: n,
                        x1: x0 + 1,
                        q1: site.map(range.start + j0).clone(),
                        x2: x + 1,
                        q2: q.clone(),
                        equal_values: true,
                    });
                    break 'pairs;
                }
            }
        }
    }
    Ok(report)
}

/// The unique `ξ: L ⇒ Y` with `ξ_m ∘ η = μ`, given by
/// `ξ_n(L(q)(η(x))) = Y(q)(μ(x))`.
pub fn induced_transformation(
    l: &TruncatedPresheaf,
    a: &SymmetricAction,
    eta: &[usize],
    y: &TruncatedPresheaf,
    mu: &[usize],
) -> Result<NatTransformation> {
    if l.level() != y.level() {
        return Err(Error::LevelMismatch(l.level(), y.level()));
    }
    let m = a.degree();
    let level = l.level();
    if m > level {
        return Err(Error::ClusterExceedsTruncation { size: m, level });
    }
    for v in [eta, mu] {
        if v.len() != a.carrier() {
            return Err(Error::BadTable {
                expected: a.carrier(),
                found: v.len(),
            });
        }
    }
    if let Some(pos) = mu.iter().position(|&v| v >= y.carrier(m)) {
        return Err(Error::OutOfRange {
            position: pos + 1,
            value: mu[pos] + 1,
            bound: y.carrier(m),
        });
    }
    let site = l.site();
    let perms = enumerate_permutations(m)?;
    let table = a.tabulate(DEFAULT_PERMUTATION_CAP)?;
    for (sigma, t) in perms.iter().zip(&table) {
        let yt = y.table(site.id(&sigma.as_surjection()).unwrap());
        if let Some(x) = (0..a.carrier()).find(|&x| yt[mu[x]] != mu[t[x]]) {
            return Err(Error::NotEquivariant(x + 1));
        }
    }

    let mut components = Vec::with_capacity(level);
    for n in 1..=level {
        let mut xi = vec![None; l.carrier(n)];
        for id in site.between(n, m) {
            for x in 0..a.carrier() {
                let z = l.table(id)[eta[x]];
                let v = y.table(id)[mu[x]];
                match xi[z] {
                    None => xi[z] = Some(v),
                    Some(w) if w == v => {}
                    Some(_) => {
                        return Err(Error::WitnessConflict {
                            level: n,
                            element: z + 1,
                        })
                    }
                }
            }
        }
        let xi = xi
            .into_iter()
            .enumerate()
            .map(|(z, v)| v.ok_or(Error::NotCovered { level: n, element: z + 1 }))
            .collect::<Result<Vec<_>>>()?;
        components.push(xi);
    }
    Ok(NatTransformation { components })
}

pub fn enumerate_nat_transformations(
    source: &TruncatedPresheaf,
    target: &TruncatedPresheaf,
) -> Result<Vec<NatTransformation>> {
    enumerate_nat_transformations_bounded(source, target, DEFAULT_SEARCH_BOUND)
}

/// Elements outside the image of every non-bijective transition map.
pub fn generators(p: &TruncatedPresheaf) -> Vec<Vec<usize>> {
    let site = p.site();
    (1..=p.level())
        .map(|n| {
            let mut hit = vec![false; p.carrier(n)];
            for k in 1..n {
                for id in site.between(n, k) {
                    for &z in p.table(id) {
                        hit[z] = true;
                    }
                }
            }
            (0..hit.len()).filter(|&z| !hit[z]).collect()
        })
        .collect()
}

/// All natural transformations, by backtracking over one generator per
/// `S_n`-orbit and propagating along every transition map.
pub fn enumerate_nat_transformations_bounded(
    source: &TruncatedPresheaf,
    target: &TruncatedPresheaf,
    bound: usize,
) -> Result<Vec<NatTransformation>> {
    if source.level() != target.level() {
        return Err(Error::LevelMismatch(source.level(), target.level()));
    }
    let level = source.level();
    let site = source.site();

    let mut roots: Vec<(usize, usize)> = Vec::new();
    for (i, gens) in generators(source).into_iter().enumerate() {
        let n = i + 1;
        let mut taken = vec![false; source.carrier(n)];
        for g in gens {
            if taken[g] {
                continue;
            }
            for id in site.permutations(n) {
                taken[source.table(id)[g]] = true;
            }
            roots.push((n, g));
        }
    }

    struct Search<'a> {
        source: &'a TruncatedPresheaf,
        target: &'a TruncatedPresheaf,
        site: &'a Site,
        roots: Vec<(usize, usize)>,
        xi: Vec<Vec<Option<usize>>>,
        nodes: usize,
        bound: usize,
        out: Vec<NatTransformation>,
    }

    impl Search<'_> {
        /// Sets `ξ(root) = v` and everything it forces; returns the cells
        /// written, or `None` on a clash (after undoing).
        fn assign(&mut self, n: usize, g: usize, v: usize) -> Option<Vec<(usize, usize)>> {
            let mut written = Vec::new();
            for k in n..=self.source.level() {
                for id in self.site.between(k, n) {
                    let z = self.source.table(id)[g];
                    let w = self.target.table(id)[v];
                    match self.xi[k - 1][z] {
                        None => {
                            self.xi[k - 1][z] = Some(w);
                            written.push((k, z));
                        }
                        Some(u) if u == w => {}
                        Some(_) => {
                            self.undo(&written);
                            return None;
                        }
                    }
                }
            }
            Some(written)
        }

        fn undo(&mut self, written: &[(usize, usize)]) {
            for &(k, z) in written {
                self.xi[k - 1][z] = None;
            }
        }

        fn run(&mut self, i: usize) -> Result<()> {
            self.nodes += 1;
            if self.nodes > self.bound {
                return Err(Error::CapExceeded {
                    what: "transformation search nodes",
                    requested: self.nodes,
                    cap: self.bound,
                });
            }
            if i == self.roots.len() {
                let components: Option<Vec<Vec<usize>>> = self
                    .xi
                    .iter()
                    .map(|c| c.iter().copied().collect())
                    .collect();
                if let Some(components) = components {
                    let t = NatTransformation { components };
                    if t.is_natural(self.source, self.target) {
                        self.out.push(t);
                    }
                }
                return Ok(());
            }
            let (n, g) = self.roots[i];
            for v in 0..self.target.carrier(n) {
                if let Some(written) = self.assign(n, g, v) {
                    self.run(i + 1)?;
                    self.undo(&written);
                }
            }
            Ok(())
        }
    }

    let mut search = Search {
        source,
        target,
        site: &site,
        roots,
        xi: (1..=level).map(|n| vec![None; source.carrier(n)]).collect(),
        nodes: 0,
        bound,
        out: Vec::new(),
    };
    search.run(0)?;
    Ok(search.out)
}
