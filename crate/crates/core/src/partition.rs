//! Equivalence closures over `0..len` and their canonical class numbering.

use petgraph::unionfind::UnionFind;

/// Equivalence relation generated by a set of pairs, grown with [`merge`].
///
/// [`merge`]: Closure::merge
#[derive(Debug, Clone)]
pub struct Closure {
    uf: UnionFind<usize>,
    len: usize,
}

impl Closure {
    pub fn new(len: usize) -> Self {
        Self {
            uf: UnionFind::new(len),
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Identifies `a` and `b` (0-based). Returns `true` if two classes merged.
    pub fn merge(&mut self, a: usize, b: usize) -> bool {
        self.uf.union(a, b)
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.uf.find_mut(a) == self.uf.find_mut(b)
    }

    /// Class labels `1..=k`, numbered by first occurrence when scanning
    /// `0..len`. Returns the labels and `k`.
    pub fn labels(mut self) -> (Vec<usize>, usize) {
        let roots: Vec<usize> = (0..self.len).map(|x| self.uf.find_mut(x)).collect();
        first_occurrence(&roots)
    }
}

/// Renumbers arbitrary labels as `1..=k` by first occurrence.
pub fn first_occurrence<T: Eq + std::hash::Hash + Clone>(labels: &[T]) -> (Vec<usize>, usize) {
    let mut seen = std::collections::HashMap::new();
    let out = labels
        .iter()
        .map(|l| {
            let next = seen.len() + 1;
            *seen.entry(l.clone()).or_insert(next)
        })
        .collect();
    (out, seen.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_follow_first_occurrence() {
        let mut c = Closure::new(5);
        c.merge(4, 1);
        c.merge(3, 0);
        assert_eq!(c.labels(), (vec![1, 2, 3, 1, 2], 3));
    }

    #[test]
    fn relabel_arbitrary() {
        assert_eq!(first_occurrence(&[7, 7, 3, 9, 3]), (vec![1, 1, 2, 3, 2], 3));
        assert_eq!(first_occurrence::<u8>(&[]), (vec![], 0));
    }
}
