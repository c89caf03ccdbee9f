use super::graph::{bfs, bfs_to, UnionFind};
use super::{Point, Region};
use crate::seed;
use crate::{Error, Result};

/// Node positions and geometric-link adjacency at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSnapshot {
    region: Region,
    range: f64,
    positions: Vec<Point>,
    adjacency: Vec<Vec<u32>>,
}

impl NetworkSnapshot {
    /// Links every pair `u != v` whose region-metric distance is `<= range`.
    pub fn from_positions(region: Region, range: f64, positions: Vec<Point>) -> Result<Self> {
        region.validate()?;
        if !(range.is_finite() && range > 0.0) {
            return Err(Error::arg(format!("range must be positive, got {range}")));
        }
        if positions.len() > u32::MAX as usize {
            return Err(Error::arg("too many nodes"));
        }
        let r2 = range * range;
        let n = positions.len();
        let mut adjacency = vec![Vec::new(); n];
        for u in 0..n {
            for v in u + 1..n {
                if region.distance_sq(positions[u], positions[v]) <= r2 {
                    adjacency[u].push(v as u32);
                    adjacency[v].push(u as u32);
                }
            }
        }
        Ok(Self {
            region,
            range,
            positions,
            adjacency,
        })
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn range(&self) -> f64 {
        self.range
    }

    pub fn positions(&self) -> &[Point] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn neighbors(&self, u: usize) -> &[u32] {
        &self.adjacency[u]
    }

    pub(crate) fn adjacency(&self) -> &[Vec<u32>] {
        &self.adjacency
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(&(v as u32))
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn mean_degree(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        2.0 * self.edge_count() as f64 / self.len() as f64
    }

    pub fn distance(&self, u: usize, v: usize) -> f64 {
        self.region.distance(self.positions[u], self.positions[v])
    }

    /// Maximal connected node sets, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.len());
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            for &v in nbrs {
                uf.union(u, v as usize);
            }
        }
        uf.sets()
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    fn check_index(&self, u: usize) -> Result<()> {
        if u < self.len() {
            Ok(())
        } else {
            Err(Error::arg(format!("node {u} out of range for {} nodes", self.len())))
        }
    }

    /// Minimum hop count between `u` and `v`; `None` if they are in
    /// different components.
    pub fn shortest_path_hops(&self, u: usize, v: usize) -> Result<Option<u32>> {
        self.check_index(u)?;
        self.check_index(v)?;
        Ok(bfs_to(&self.adjacency, u, v))
    }

    /// Hop distances from `u` to every node.
    pub fn hop_distances_from(&self, u: usize) -> Result<Vec<Option<u32>>> {
        self.check_index(u)?;
        Ok(bfs(&self.adjacency, u))
    }
}

/// `n` i.i.d. uniform nodes on `region` with range `r0`; deterministic in `seed`.
pub fn sample_topology(n: usize, region: Region, r0: f64, seed: u64) -> Result<NetworkSnapshot> {
    region.validate()?;
    let mut rng = seed::rng(seed);
    let positions = (0..n).map(|_| region.sample_point(&mut rng)).collect();
    NetworkSnapshot::from_positions(region, r0, positions)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: usize) -> NetworkSnapshot {
        let pts = (0..n).map(|i| Point::new(i as f64, 0.5)).collect();
        NetworkSnapshot::from_positions(Region::rectangle(n as f64, 1.0).unwrap(), 1.0, pts)
            .unwrap()
    }

    #[test]
    fn single_node_has_no_edges() {
        let s = sample_topology(1, Region::disk(3.0).unwrap(), 1.0, 9).unwrap();
        assert_eq!(s.edge_count(), 0);
        assert_eq!(s.connected_components(), vec![vec![0]]);
    }

    #[test]
    fn range_covering_torus_links_everything() {
        for seed in 0..50 {
            let s = sample_topology(2, Region::torus(10.0).unwrap(), 10.0, seed).unwrap();
            assert!(s.has_edge(0, 1));
        }
    }

    #[test]
    fn link_at_exact_range() {
        let s = NetworkSnapshot::from_positions(
            Region::rectangle(5.0, 5.0).unwrap(),
            2.0,
            vec![Point::new(0.0, 0.0), Point::new(2.0, 0.0), Point::new(4.5, 0.0)],
        )
        .unwrap();
        assert!(s.has_edge(0, 1));
        assert!(!s.has_edge(1, 2));
    }

    #[test]
    fn isolated_nodes_are_singletons() {
        let pts = (0..5).map(|i| Point::new(3.0 * i as f64, 0.0)).collect();
        let s = NetworkSnapshot::from_positions(Region::rectangle(20.0, 1.0).unwrap(), 1.0, pts)
            .unwrap();
        assert_eq!(s.connected_components().len(), 5);
    }

    #[test]
    fn complete_graph_is_one_component() {
        let pts = (0..6).map(|i| Point::new(0.1 * i as f64, 0.0)).collect();
        let s = NetworkSnapshot::from_positions(Region::rectangle(1.0, 1.0).unwrap(), 1.0, pts)
            .unwrap();
        assert_eq!(s.edge_count(), 15);
        assert_eq!(s.connected_components(), vec![(0..6).collect::<Vec<_>>()]);
    }

    #[test]
    fn two_cliques() {
        let mut pts: Vec<Point> = (0..4).map(|i| Point::new(0.1 * i as f64, 0.0)).collect();
        pts.extend((0..3).map(|i| Point::new(10.0 + 0.1 * i as f64, 0.0)));
        let s = NetworkSnapshot::from_positions(Region::rectangle(20.0, 1.0).unwrap(), 1.0, pts)
            .unwrap();
        // BFS oracle: reachable sets from each clique's first node.
        let from0: Vec<usize> = (0..7).filter(|&v| s.hop_distances_from(0).unwrap()[v].is_some()).collect();
        let from4: Vec<usize> = (0..7).filter(|&v| s.hop_distances_from(4).unwrap()[v].is_some()).collect();
        assert_eq!(s.connected_components(), vec![from0, from4]);
        assert_eq!(s.connected_components()[0].len(), 4);
        assert_eq!(s.connected_components()[1].len(), 3);
    }

    #[test]
    fn path_hops() {
        let s = line(5);
        assert_eq!(s.shortest_path_hops(0, 4).unwrap(), Some(4));
        assert_eq!(s.shortest_path_hops(2, 2).unwrap(), Some(0));
        assert_eq!(s.shortest_path_hops(1, 2).unwrap(), Some(1));
        assert!(s.shortest_path_hops(0, 5).is_err());
    }

    #[test]
    fn same_seed_same_snapshot() {
        let r = Region::disk(4.0).unwrap();
        let a = sample_topology(50, r, 1.0, 77).unwrap();
        let b = sample_topology(50, r, 1.0, 77).unwrap();
        assert_eq!(a, b);
        let c = sample_topology(50, r, 1.0, 78).unwrap();
        assert_ne!(a.positions(), c.positions());
    }

    #[test]
    fn disk_points_stay_inside() {
        let s = sample_topology(500, Region::disk(2.0).unwrap(), 0.1, 3).unwrap();
        assert!(s.positions().iter().all(|p| p.x.hypot(p.y) <= 2.0));
    }
}
