use crate::error::{Error, Result};

/// Union-find over a fixed universe `0..len`, with path halving and union by
/// rank.
#[derive(Debug, Clone)]
pub struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
    components: usize,
}

impl DisjointSet {
    pub fn new(len: usize) -> Self {
        Self {
            parent: (0..len).collect(),
            rank: vec![0; len],
            components: len,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn components(&self) -> usize {
        self.components
    }

    fn check(&self, x: usize) -> Result<()> {
        if x < self.parent.len() {
            Ok(())
        } else {
            Err(Error::InvalidNode(x))
        }
    }

    pub fn find(&mut self, mut x: usize) -> Result<usize> {
        self.check(x)?;
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        Ok(x)
    }

    /// Returns `true` when `a` and `b` were in different sets.
    pub fn union(&mut self, a: usize, b: usize) -> Result<bool> {
        let (ra, rb) = (self.find(a)?, self.find(b)?);
        if ra == rb {
            return Ok(false);
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        self.components -= 1;
        Ok(true)
    }

    pub fn same(&mut self, a: usize, b: usize) -> Result<bool> {
        Ok(self.find(a)? == self.find(b)?)
    }
}

/// Unions every pair into `ds`; true iff a single set then spans the universe.
pub fn connectivity_check(ds: &mut DisjointSet, pairs: &[(usize, usize)]) -> Result<bool> {
    for &(i, j) in pairs {
        ds.union(i, j)?;
    }
    Ok(ds.components() <= 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bfs_components(n: usize, pairs: &[(usize, usize)]) -> usize {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in pairs {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut count = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            let mut queue = std::collections::VecDeque::from([s]);
            seen[s] = true;
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        count
    }

    #[test]
    fn singleton_universe() {
        assert!(connectivity_check(&mut DisjointSet::new(1), &[]).unwrap());
    }

    #[test]
    fn partial_pairs() {
        assert!(!connectivity_check(&mut DisjointSet::new(3), &[(0, 1)]).unwrap());
        assert!(connectivity_check(&mut DisjointSet::new(3), &[(0, 1), (2, 1)]).unwrap());
    }

    #[test]
    fn out_of_range() {
        assert_eq!(
            connectivity_check(&mut DisjointSet::new(3), &[(0, 3)]),
            Err(Error::InvalidNode(3))
        );
    }

    #[test]
    fn find_is_idempotent() {
        let mut ds = DisjointSet::new(6);
        ds.union(0, 1).unwrap();
        ds.union(2, 3).unwrap();
        ds.union(1, 3).unwrap();
        for x in 0..6 {
            let r = ds.find(x).unwrap();
            assert_eq!(ds.find(r).unwrap(), r);
        }
        assert!(ds.same(0, 2).unwrap());
        assert!(!ds.same(0, 4).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn agrees_with_bfs(
            (n, pairs) in (1usize..=20).prop_flat_map(|n| {
                (Just(n), prop::collection::vec((0..n, 0..n), 0..30))
            })
        ) {
            let mut ds = DisjointSet::new(n);
            let connected = connectivity_check(&mut ds, &pairs).unwrap();
            let comps = bfs_components(n, &pairs);
            prop_assert_eq!(connected, comps == 1);
            prop_assert_eq!(ds.components(), comps);
        }
    }
}
