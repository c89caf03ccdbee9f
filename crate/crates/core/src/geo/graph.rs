use std::collections::VecDeque;

/// Disjoint sets with union by size and path halving.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        Self {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `true` if `a` and `b` were in different sets.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    /// Sets ordered by their smallest member, members ascending.
    pub fn sets(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut slot = vec![usize::MAX; n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            let r = self.find(x);
            if slot[r] == usize::MAX {
                slot[r] = out.len();
                out.push(Vec::new());
            }
            out[slot[r]].push(x);
        }
        out
    }
}

/// Hop distances from `source`; `None` for unreachable nodes.
pub(crate) fn bfs(adjacency: &[Vec<u32>], source: usize) -> Vec<Option<u32>> {
    let mut dist = vec![None; adjacency.len()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let next = dist[u].unwrap() + 1;
        for &v in &adjacency[u] {
            let v = v as usize;
            if dist[v].is_none() {
                dist[v] = Some(next);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Hop distance from `source` to `target`, stopping as soon as it is found.
pub(crate) fn bfs_to(adjacency: &[Vec<u32>], source: usize, target: usize) -> Option<u32> {
    if source == target {
        return Some(0);
    }
    let mut dist = vec![u32::MAX; adjacency.len()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let next = dist[u] + 1;
        for &v in &adjacency[u] {
            let v = v as usize;
            if dist[v] == u32::MAX {
                if v == target {
                    return Some(next);
                }
                dist[v] = next;
                queue.push_back(v);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn union_find_groups() {
        let mut uf = UnionFind::new(6);
        assert!(uf.union(0, 2));
        assert!(uf.union(4, 2));
        assert!(!uf.union(0, 4));
        uf.union(3, 5);
        assert_eq!(uf.sets(), vec![vec![0, 2, 4], vec![1], vec![3, 5]]);
    }

    #[test]
    fn bfs_on_path() {
        let adj = vec![vec![1], vec![0, 2], vec![1, 3], vec![2], vec![]];
        let d = bfs(&adj, 0);
        assert_eq!(d, vec![Some(0), Some(1), Some(2), Some(3), None]);
        assert_eq!(bfs_to(&adj, 0, 3), Some(3));
        assert_eq!(bfs_to(&adj, 3, 0), Some(3));
        assert_eq!(bfs_to(&adj, 0, 4), None);
        assert_eq!(bfs_to(&adj, 2, 2), Some(0));
    }
}
