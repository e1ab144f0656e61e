//! Clique trees built by gluing complete blocks at single vertices, and
//! their distance matrices.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// One clique block of a clique tree, glued onto the graph built so far.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockSpec {
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attach_block: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attach_vertex: Option<usize>,
}

impl BlockSpec {
    pub fn root(size: usize) -> Self {
        Self {
            size,
            attach_block: None,
            attach_vertex: None,
        }
    }

    pub fn attached(size: usize, attach_block: usize, attach_vertex: usize) -> Self {
        Self {
            size,
            attach_block: Some(attach_block),
            attach_vertex: Some(attach_vertex),
        }
    }
}

/// A connected graph whose blocks are cliques.
///
/// Vertex ids are dense and assigned in block-creation order. Each block
/// after the first lists its attachment vertex first, followed by its
/// freshly created vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueTree {
    n: usize,
    blocks: Vec<Vec<usize>>,
    specs: Vec<BlockSpec>,
    adjacency: Vec<Vec<usize>>,
}

impl CliqueTree {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn specs(&self) -> &[BlockSpec] {
        &self.specs
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// Sorted neighbour list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            out.extend(nbrs.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    /// Glues a new clique of `size` vertices at `vertex`, recording the
    /// lowest-indexed block containing it as the attachment block.
    pub fn attach(&self, size: usize, vertex: usize) -> Result<CliqueTree> {
        let block = self
            .blocks
            .iter()
            .position(|b| b.contains(&vertex))
            .ok_or(Error::DanglingVertex {
                block: self.blocks.len(),
                attach_vertex: vertex,
            })?;
        let mut specs = self.specs.clone();
        specs.push(BlockSpec::attached(size, block, vertex));
        build_clique_tree(&specs)
    }

    /// Re-checks every structural invariant of a clique tree from scratch:
    /// blocks are complete, pairwise share at most one vertex and no edge,
    /// the block intersection structure is a tree, and the vertex count
    /// matches `Σ sizes − (k − 1)`.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidStructure(msg));
        if self.blocks.is_empty() {
            return Err(Error::NoBlocks);
        }
        let total: usize = self.blocks.iter().map(Vec::len).sum();
        if self.n != total - (self.blocks.len() - 1) {
            return bad(format!(
                "vertex count {} != sum of sizes {} - (k - 1)",
                self.n, total
            ));
        }
        let mut edge_count = 0;
        for (i, b) in self.blocks.iter().enumerate() {
            if b.len() < 2 {
                return bad(format!("block {i} has fewer than 2 vertices"));
            }
            for (x, &u) in b.iter().enumerate() {
                for &v in &b[x + 1..] {
                    if u == v || !self.is_adjacent(u, v) {
                        return bad(format!("block {i} is not a clique"));
                    }
                }
            }
            edge_count += b.len() * (b.len() - 1) / 2;
            for (j, c) in self.blocks.iter().enumerate().skip(i + 1) {
                let shared = b.iter().filter(|v| c.contains(v)).count();
                if shared > 1 {
                    return bad(format!("blocks {i} and {j} share an edge"));
                }
            }
        }
        let adjacency_edges: usize = self.adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        if adjacency_edges != edge_count {
            return bad("edges outside of blocks".into());
        }
        // Connected + vertex count formula ⇒ block-cut structure is a tree.
        let dist = bfs_from(&self.adjacency, 0);
        if dist.iter().any(Option::is_none) {
            return bad("graph is disconnected".into());
        }
        Ok(())
    }

    /// True when the block-cut tree is a path, i.e. the blocks can be
    /// arranged so that only consecutive blocks meet.
    pub fn is_clique_path(&self) -> bool {
        let bct = BlockCutTree::new(self);
        bct.adjacency.iter().all(|nbrs| nbrs.len() <= 2)
    }

    /// Block sizes read along the block path, or `None` if the graph is not
    /// a clique path. Of the two orientations the lexicographically smaller
    /// one is returned.
    pub fn path_sizes(&self) -> Option<Vec<usize>> {
        if !self.is_clique_path() {
            return None;
        }
        if self.blocks.len() == 1 {
            return Some(vec![self.blocks[0].len()]);
        }
        let bct = BlockCutTree::new(self);
        let start = (0..self.blocks.len())
            .find(|&b| bct.adjacency[b].len() == 1)
            .expect("a path has an end block");
        let mut out = Vec::new();
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            if cur < bct.block_count {
                out.push(self.blocks[cur].len());
            }
            match bct.adjacency[cur].iter().find(|&&x| x != prev) {
                Some(&next) => {
                    prev = cur;
                    cur = next;
                }
                None => break,
            }
        }
        let mut rev = out.clone();
        rev.reverse();
        Some(out.min(rev))
    }
}

/// Builds a clique tree from ordered block specifications.
pub fn build_clique_tree(specs: &[BlockSpec]) -> Result<CliqueTree> {
    let first = specs.first().ok_or(Error::NoBlocks)?;
    if first.attach_block.is_some() || first.attach_vertex.is_some() {
        return Err(Error::FirstBlockAttached);
    }
    let mut blocks: Vec<Vec<usize>> = Vec::with_capacity(specs.len());
    let mut n = 0;
    for (i, spec) in specs.iter().enumerate() {
        if spec.size < 2 {
            return Err(Error::BlockTooSmall {
                block: i,
                size: spec.size,
            });
        }
        let mut block = Vec::with_capacity(spec.size);
        let fresh = if i == 0 {
            spec.size
        } else {
            let (Some(ab), Some(av)) = (spec.attach_block, spec.attach_vertex) else {
                return Err(Error::MissingAttachment { block: i });
            };
            if ab >= i {
                return Err(Error::DanglingBlock {
                    block: i,
                    attach_block: ab,
                });
            }
            if av >= n {
                return Err(Error::DanglingVertex {
                    block: i,
                    attach_vertex: av,
                });
            }
            if !blocks[ab].contains(&av) {
                return Err(Error::VertexNotInBlock {
                    block: i,
                    attach_block: ab,
                    attach_vertex: av,
                });
            }
            block.push(av);
            spec.size - 1
        };
        block.extend(n..n + fresh);
        n += fresh;
        blocks.push(block);
    }

    let mut adjacency = vec![Vec::new(); n];
    for b in &blocks {
        for &u in b {
            adjacency[u].extend(b.iter().copied().filter(|&v| v != u));
        }
    }
    for nbrs in &mut adjacency {
        nbrs.sort_unstable();
        let before = nbrs.len();
        nbrs.dedup();
        if nbrs.len() != before {
            return Err(Error::InvalidStructure("blocks share an edge".into()));
        }
    }
    Ok(CliqueTree {
        n,
        blocks,
        specs: specs.to_vec(),
        adjacency,
    })
}

/// Clique path `P_{n₁,…,n_k}`: block `i + 1` is glued at the last-created
/// vertex of block `i`.
pub fn clique_path(sizes: &[usize]) -> Result<CliqueTree> {
    if sizes.is_empty() {
        return Err(Error::NoBlocks);
    }
    let mut specs = Vec::with_capacity(sizes.len());
    let mut last_vertex = 0usize;
    let mut n = 0usize;
    for (i, &size) in sizes.iter().enumerate() {
        if size < 2 {
            return Err(Error::BlockTooSmall { block: i, size });
        }
        if i == 0 {
            specs.push(BlockSpec::root(size));
            n = size;
        } else {
            specs.push(BlockSpec::attached(size, i - 1, last_vertex));
            n += size - 1;
        }
        last_vertex = n - 1;
    }
    build_clique_tree(&specs)
}

/// Block sizes `[⌊(n−k+3)/2⌋, 2, …, 2, ⌈(n−k+3)/2⌉]` of the balanced clique
/// path with `n` vertices and `k` blocks (`[n]` when `k = 1`).
pub fn balanced_sizes(n: usize, k: usize) -> Result<Vec<usize>> {
    if k == 0 || n < 2 || k > n - 1 {
        return Err(Error::Infeasible(format!(
            "need 1 <= k <= n - 1 and n >= 2, got n={n}, k={k}"
        )));
    }
    if k == 1 {
        return Ok(vec![n]);
    }
    let ends = n - k + 3;
    let mut sizes = vec![2; k];
    sizes[0] = ends / 2;
    sizes[k - 1] = ends.div_ceil(2);
    Ok(sizes)
}

pub fn balanced_clique_path(n: usize, k: usize) -> Result<CliqueTree> {
    clique_path(&balanced_sizes(n, k)?)
}

/// Dense symmetric matrix of pairwise graph distances.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<u32>,
}

impl DistanceMatrix {
    pub fn from_rows(rows: &[Vec<u32>]) -> Self {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n, "distance matrix must be square");
            entries.extend_from_slice(r);
        }
        Self { n, entries }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.entries[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[u32] {
        &self.entries[u * self.n..(u + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.n).map(|u| self.row(u).to_vec()).collect()
    }

    pub fn max_entry(&self) -> u32 {
        self.entries.iter().copied().max().unwrap_or(0)
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_fn(self.n, self.n, |i, j| f64::from(self.get(i, j)))
    }

    /// Principal submatrix on `indices`, in the given order.
    pub fn principal(&self, indices: &[usize]) -> DistanceMatrix {
        let n = indices.len();
        let mut entries = Vec::with_capacity(n * n);
        for &i in indices {
            entries.extend(indices.iter().map(|&j| self.get(i, j)));
        }
        DistanceMatrix { n, entries }
    }
}

fn bfs_from(adjacency: &[Vec<usize>], source: usize) -> Vec<Option<u32>> {
    let mut dist = vec![None; adjacency.len()];
    let mut queue = VecDeque::new();
    dist[source] = Some(0);
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &v in &adjacency[u] {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// All-pairs distances by breadth-first search from every vertex.
pub fn distance_matrix(g: &CliqueTree) -> DistanceMatrix {
    let n = g.n;
    let mut entries = Vec::with_capacity(n * n);
    for s in 0..n {
        entries.extend(
            bfs_from(&g.adjacency, s)
                .into_iter()
                .map(|d| d.expect("clique trees are connected")),
        );
    }
    DistanceMatrix { n, entries }
}

/// Distances counted as the number of blocks on the block path between two
/// vertices of the block-cut tree. Independent of [`distance_matrix`].
pub fn block_path_distances(g: &CliqueTree) -> DistanceMatrix {
    let bct = BlockCutTree::new(g);
    let n = g.n;
    let mut entries = vec![0u32; n * n];
    for u in 0..n {
        let src = bct.vertex_node(u);
        // blocks[node] = number of block nodes on the tree path from src.
        let mut blocks_on_path = vec![u32::MAX; bct.adjacency.len()];
        let mut queue = VecDeque::new();
        blocks_on_path[src] = u32::from(src < bct.block_count);
        queue.push_back(src);
        while let Some(x) = queue.pop_front() {
            for &y in &bct.adjacency[x] {
                if blocks_on_path[y] == u32::MAX {
                    blocks_on_path[y] = blocks_on_path[x] + u32::from(y < bct.block_count);
                    queue.push_back(y);
                }
            }
        }
        for v in 0..n {
            if u == v {
                continue;
            }
            let dst = bct.vertex_node(v);
            entries[u * n + v] = if src == dst {
                1
            } else {
                blocks_on_path[dst]
            };
        }
    }
    DistanceMatrix { n, entries }
}

/// Block-cut tree: nodes `0..block_count` are blocks, the remaining nodes
/// are cut vertices.
#[derive(Debug, Clone)]
pub struct BlockCutTree {
    pub block_count: usize,
    pub block_sizes: Vec<usize>,
    /// Graph vertex of each cut node, indexed by `node - block_count`.
    pub cut_vertices: Vec<usize>,
    pub adjacency: Vec<Vec<usize>>,
    home_block: Vec<usize>,
    cut_node: Vec<Option<usize>>,
}

impl BlockCutTree {
    pub fn new(g: &CliqueTree) -> Self {
        let block_count = g.blocks.len();
        let mut membership = vec![Vec::new(); g.n];
        for (b, verts) in g.blocks.iter().enumerate() {
            for &v in verts {
                membership[v].push(b);
            }
        }
        let mut adjacency = vec![Vec::new(); block_count];
        let mut cut_vertices = Vec::new();
        let mut cut_node = vec![None; g.n];
        for (v, bs) in membership.iter().enumerate() {
            if bs.len() >= 2 {
                let node = adjacency.len();
                cut_node[v] = Some(node);
                cut_vertices.push(v);
                adjacency.push(bs.clone());
                for &b in bs {
                    adjacency[b].push(node);
                }
            }
        }
        Self {
            block_count,
            block_sizes: g.blocks.iter().map(Vec::len).collect(),
            cut_vertices,
            adjacency,
            home_block: membership.iter().map(|bs| bs[0]).collect(),
            cut_node,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    /// The tree node standing for graph vertex `v`.
    pub fn vertex_node(&self, v: usize) -> usize {
        self.cut_node[v].unwrap_or(self.home_block[v])
    }
}

/// On-disk graph description. Input files carry only `blocks`; output adds
/// the vertex count and an explicit edge list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub blocks: Vec<BlockSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<[usize; 2]>>,
}

impl GraphFile {
    pub fn from_tree(g: &CliqueTree) -> Self {
        Self {
            blocks: g.specs.clone(),
            n: Some(g.n),
            edges: Some(g.edges().into_iter().map(|(u, v)| [u, v]).collect()),
        }
    }

    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Builds the tree; `n` and `edges`, when present, must agree with it.
    pub fn build(&self) -> Result<CliqueTree> {
        let g = build_clique_tree(&self.blocks)?;
        if let Some(n) = self.n {
            if n != g.n {
                return Err(Error::Parse(format!("field n = {n} but blocks give {}", g.n)));
            }
        }
        if let Some(edges) = &self.edges {
            let mut given: Vec<(usize, usize)> =
                edges.iter().map(|&[u, v]| (u.min(v), u.max(v))).collect();
            given.sort_unstable();
            if given != g.edges() {
                return Err(Error::Parse("field edges disagrees with blocks".into()));
            }
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        let g = build_clique_tree(&[BlockSpec::root(2)]).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edges(), vec![(0, 1)]);
    }

    #[test]
    fn two_triangles_share_vertex() {
        let g = build_clique_tree(&[BlockSpec::root(3), BlockSpec::attached(3, 0, 2)]).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.blocks(), &[vec![0, 1, 2], vec![2, 3, 4]]);
        g.validate().unwrap();
    }

    #[test]
    fn star_from_three_edges() {
        let g = build_clique_tree(&[
            BlockSpec::root(2),
            BlockSpec::attached(2, 0, 1),
            BlockSpec::attached(2, 0, 1),
        ])
        .unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.neighbors(1), &[0, 2, 3]);
        assert!(!g.is_clique_path());
    }

    #[test]
    fn build_rejections() {
        assert_eq!(build_clique_tree(&[]), Err(Error::NoBlocks));
        assert_eq!(
            build_clique_tree(&[BlockSpec::root(1)]),
            Err(Error::BlockTooSmall { block: 0, size: 1 })
        );
        assert_eq!(
            build_clique_tree(&[BlockSpec::attached(2, 0, 0)]),
            Err(Error::FirstBlockAttached)
        );
        assert_eq!(
            build_clique_tree(&[BlockSpec::root(2), BlockSpec::root(2)]),
            Err(Error::MissingAttachment { block: 1 })
        );
        assert_eq!(
            build_clique_tree(&[BlockSpec::root(2), BlockSpec::attached(2, 1, 0)]),
            Err(Error::DanglingBlock {
                block: 1,
                attach_block: 1
            })
        );
        assert_eq!(
            build_clique_tree(&[BlockSpec::root(2), BlockSpec::attached(2, 0, 7)]),
            Err(Error::DanglingVertex {
                block: 1,
                attach_vertex: 7
            })
        );
        assert_eq!(
            build_clique_tree(&[
                BlockSpec::root(2),
                BlockSpec::attached(3, 0, 1),
                BlockSpec::attached(2, 0, 3)
            ]),
            Err(Error::VertexNotInBlock {
                block: 2,
                attach_block: 0,
                attach_vertex: 3
            })
        );
    }

    #[test]
    fn clique_path_shapes() {
        let p4 = clique_path(&[2, 2, 2]).unwrap();
        assert_eq!(p4.vertex_count(), 4);
        assert_eq!(p4.edges(), vec![(0, 1), (1, 2), (2, 3)]);

        let g = clique_path(&[3, 2]).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.blocks(), &[vec![0, 1, 2], vec![2, 3]]);

        let g = clique_path(&[4, 2, 2, 5]).unwrap();
        assert_eq!(g.vertex_count(), 10);
        assert_eq!(g.path_sizes(), Some(vec![4, 2, 2, 5]));
        assert!(clique_path(&[3, 1]).is_err());
    }

    #[test]
    fn balanced_paths() {
        assert_eq!(balanced_sizes(10, 4).unwrap(), vec![4, 2, 2, 5]);
        assert_eq!(balanced_sizes(4, 3).unwrap(), vec![2, 2, 2]);
        assert_eq!(balanced_sizes(5, 1).unwrap(), vec![5]);
        assert_eq!(balanced_sizes(5, 2).unwrap(), vec![3, 3]);
        assert!(balanced_sizes(4, 4).is_err());
        assert!(balanced_sizes(1, 1).is_err());
        assert!(balanced_sizes(5, 0).is_err());
        let k5 = balanced_clique_path(5, 1).unwrap();
        assert_eq!(k5.edges().len(), 10);
    }

    #[test]
    fn distances_small_cases() {
        let d = distance_matrix(&clique_path(&[2, 2, 2]).unwrap());
        assert_eq!(
            d.to_rows(),
            vec![vec![0, 1, 2, 3], vec![1, 0, 1, 2], vec![2, 1, 0, 1], vec![3, 2, 1, 0]]
        );
        let d = distance_matrix(&clique_path(&[3]).unwrap());
        assert_eq!(d.to_rows(), vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
        let d = distance_matrix(&clique_path(&[3, 2]).unwrap());
        assert_eq!(
            d.to_rows(),
            vec![vec![0, 1, 1, 2], vec![1, 0, 1, 2], vec![1, 1, 0, 1], vec![2, 2, 1, 0]]
        );
    }

    #[test]
    fn path_sizes_read_from_either_layout() {
        // Same clique path, blocks created out of path order.
        let g = build_clique_tree(&[
            BlockSpec::root(2),
            BlockSpec::attached(4, 0, 0),
            BlockSpec::attached(3, 0, 1),
        ])
        .unwrap();
        let sizes = g.path_sizes().unwrap();
        assert!(sizes == vec![4, 2, 3] || sizes == vec![3, 2, 4]);
    }

    #[test]
    fn graph_file_round_trip() {
        let g = clique_path(&[3, 3]).unwrap();
        let json = serde_json::to_string(&GraphFile::from_tree(&g)).unwrap();
        assert_eq!(
            json,
            r#"{"blocks":[{"size":3},{"size":3,"attach_block":0,"attach_vertex":2}],"n":5,"edges":[[0,1],[0,2],[1,2],[2,3],[2,4],[3,4]]}"#
        );
        assert_eq!(GraphFile::parse(&json).unwrap().build().unwrap(), g);

        let input = GraphFile::parse(r#"{"blocks":[{"size":2},{"size":2,"attach_block":0,"attach_vertex":1}]}"#)
            .unwrap();
        assert_eq!(input.build().unwrap().vertex_count(), 3);

        let wrong_n = GraphFile::parse(r#"{"blocks":[{"size":2}],"n":3}"#).unwrap();
        assert!(wrong_n.build().is_err());
        assert!(GraphFile::parse(r#"{"blocks":[{"size":"two"}]}"#).is_err());
    }
}
