//! Undirected, unweighted connectivity graph of an axial map and the
//! step-count depth measures defined on it.
//!
//! Spaces are stored in name order and addressed internally by index, so
//! every traversal and every report is deterministic.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::space::SpaceId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("no edges left after normalization")]
    EmptyGraph,
    #[error("root space `{0}` does not appear in any edge")]
    RootMissing(String),
    #[error("unknown space `{0}`")]
    UnknownSpace(String),
    #[error("graph is disconnected: {} unreachable from `{origin}`", NameList(.unreachable))]
    Disconnected {
        origin: SpaceId,
        unreachable: Vec<SpaceId>,
    },
    #[error("at least two spaces are needed, found {0}")]
    DegenerateGraph(usize),
}

struct NameList<'a>(&'a [SpaceId]);

impl fmt::Display for NameList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, name) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "`{name}`")?;
        }
        Ok(())
    }
}

/// Immutable spatial graph with a designated root (the carrier space).
///
/// Equality compares spaces, adjacency and root only; the normalization
/// counters describe how the graph was built, not what it is.
#[derive(Debug, Clone)]
pub struct SpatialGraph {
    names: Vec<SpaceId>,
    adjacency: Vec<Vec<usize>>,
    root: usize,
    edge_count: usize,
    self_loops_dropped: usize,
    duplicates_dropped: usize,
}

impl PartialEq for SpatialGraph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.adjacency == other.adjacency && self.root == other.root
    }
}

impl Eq for SpatialGraph {}

impl SpatialGraph {
    /// Builds a graph from an edge list. Pairs are treated as unordered,
    /// duplicates are merged and self-loops dropped (both counted).
    /// Connectivity is not checked here; the aggregate measures do that.
    pub fn build<I>(edges: I, root: &str) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (SpaceId, SpaceId)>,
    {
        let mut unique = BTreeSet::new();
        let mut self_loops_dropped = 0;
        let mut duplicates_dropped = 0;
        for (u, v) in edges {
            if u == v {
                self_loops_dropped += 1;
                continue;
            }
            let pair = if u < v { (u, v) } else { (v, u) };
            if !unique.insert(pair) {
                duplicates_dropped += 1;
            }
        }
        if unique.is_empty() {
            return Err(GraphError::EmptyGraph);
        }

        let names: Vec<SpaceId> = unique
            .iter()
            .flat_map(|(u, v)| [u.clone(), v.clone()])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index = |id: &SpaceId| names.binary_search(id).expect("endpoint is a known space");

        let mut adjacency = vec![Vec::new(); names.len()];
        for (u, v) in &unique {
            let (iu, iv) = (index(u), index(v));
            adjacency[iu].push(iv);
            adjacency[iv].push(iu);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }

        let root = names
            .binary_search_by(|n| n.as_str().cmp(root))
            .map_err(|_| GraphError::RootMissing(root.to_string()))?;

        Ok(SpatialGraph {
            names,
            adjacency,
            root,
            edge_count: unique.len(),
            self_loops_dropped,
            duplicates_dropped,
        })
    }

    pub fn root(&self) -> &SpaceId {
        &self.names[self.root]
    }

    /// All spaces in name order, root included.
    pub fn spaces(&self) -> &[SpaceId] {
        &self.names
    }

    pub fn space_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn self_loops_dropped(&self) -> usize {
        self.self_loops_dropped
    }

    pub fn duplicates_dropped(&self) -> usize {
        self.duplicates_dropped
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    /// Edges as name pairs with the smaller name first, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (&SpaceId, &SpaceId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(move |(u, list)| {
                list.iter()
                    .filter(move |&&v| u < v)
                    .map(move |&v| (&self.names[u], &self.names[v]))
            })
    }

    pub fn neighbours(&self, name: &str) -> Result<Vec<&SpaceId>, GraphError> {
        let idx = self.require(name)?;
        Ok(self.adjacency[idx]
            .iter()
            .map(|&v| &self.names[v])
            .collect())
    }

    fn index_of(&self, name: &str) -> Option<usize> {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }

    fn require(&self, name: &str) -> Result<usize, GraphError> {
        self.index_of(name)
            .ok_or_else(|| GraphError::UnknownSpace(name.to_string()))
    }

    /// Breadth-first step counts from `origin`; `None` marks unreachable spaces.
    fn bfs(&self, origin: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.names.len()];
        let mut queue = VecDeque::new();
        dist[origin] = Some(0);
        queue.push_back(origin);
        while let Some(u) = queue.pop_front() {
            let next = dist[u].map(|d| d + 1);
            for &v in &self.adjacency[u] {
                if dist[v].is_none() {
                    dist[v] = next;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Reachable depths from `origin`, or the list of unreachable spaces.
    fn connected_depths(&self, origin: usize) -> Result<Vec<u32>, GraphError> {
        let dist = self.bfs(origin);
        let unreachable: Vec<SpaceId> = dist
            .iter()
            .zip(&self.names)
            .filter(|(d, _)| d.is_none())
            .map(|(_, n)| n.clone())
            .collect();
        if !unreachable.is_empty() {
            return Err(GraphError::Disconnected {
                origin: self.names[origin].clone(),
                unreachable,
            });
        }
        Ok(dist.into_iter().map(|d| d.unwrap_or_default()).collect())
    }

    /// Shortest-path step counts from `origin` to every reachable space.
    pub fn depth(&self, origin: &str) -> Result<DepthProfile, GraphError> {
        let idx = self.require(origin)?;
        let depths = self
            .bfs(idx)
            .into_iter()
            .zip(&self.names)
            .filter_map(|(d, n)| d.map(|d| (n.clone(), d)))
            .collect();
        Ok(DepthProfile {
            origin: self.names[idx].clone(),
            depths,
        })
    }

    /// Sum of the depths from `origin` to every other space.
    pub fn total_depth(&self, origin: &str) -> Result<u64, GraphError> {
        let idx = self.require(origin)?;
        Ok(self.connected_depths(idx)?.into_iter().map(u64::from).sum())
    }

    /// Total depth divided by the number of spaces minus one.
    pub fn mean_depth(&self, origin: &str) -> Result<f64, GraphError> {
        let idx = self.require(origin)?;
        if self.names.len() < 2 {
            return Err(GraphError::DegenerateGraph(self.names.len()));
        }
        let total: u64 = self.connected_depths(idx)?.into_iter().map(u64::from).sum();
        Ok(total as f64 / (self.names.len() - 1) as f64)
    }

    /// All-pairs depths, row `i` being the traversal from `spaces()[i]`.
    /// Origins are processed in parallel.
    pub fn depth_matrix(&self) -> Vec<Vec<Option<u32>>> {
        (0..self.names.len())
            .into_par_iter()
            .map(|origin| self.bfs(origin))
            .collect()
    }

    /// Depths from the root to every space; fails when any space is
    /// unreachable.
    pub(crate) fn root_depths(&self) -> Result<Vec<(&SpaceId, u32)>, GraphError> {
        let depths = self.connected_depths(self.root)?;
        Ok(self.names.iter().zip(depths).collect())
    }

    pub(crate) fn root_index(&self) -> usize {
        self.root
    }
}

/// Step counts from one origin to every space reachable from it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DepthProfile {
    pub origin: SpaceId,
    pub depths: BTreeMap<SpaceId, u32>,
}

impl DepthProfile {
    pub fn get(&self, name: &str) -> Option<u32> {
        self.depths.get(name).copied()
    }

    pub fn max_depth(&self) -> u32 {
        self.depths.values().copied().max().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.depths.values().map(|&d| u64::from(d)).sum()
    }
}
