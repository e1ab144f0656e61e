//! Exhaustive generation of clique trees and the extremal distance energy
//! search over them.
//!
//! Two generators are provided. [`enumerate_clique_trees`] is the raw
//! sequential-attachment stream: every ordering of the block multiset, every
//! attachment vertex, duplicates and all. [`distinct_clique_trees`] grows
//! the same trees one block at a time but keeps a single representative per
//! isomorphism class at every level, using an exact canonical form of the
//! block-cut tree. Every clique tree with at least two blocks has a leaf
//! block whose removal leaves a clique tree, so the pruned generator still
//! reaches every class.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{
    balanced_clique_path, balanced_sizes, build_clique_tree, distance_matrix, BlockCutTree,
    BlockSpec, CliqueTree, DistanceMatrix, GraphFile,
};
use crate::report::{Check, Relation, VerificationReport};
use crate::spectra::{distance_energy, distance_spectrum, inertia, Inertia};

/// Upper bound on the raw sequential-attachment stream size of one search.
pub const SEARCH_GUARD: u128 = 10_000_000;
/// Energies within this relative distance of the maximum count as ties.
pub const TIE_TOL: f64 = 1e-9;
/// Relative tolerance of the `E = 2λ₁` identity.
pub const ENERGY_IDENTITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum EnumSpec {
    /// All clique trees with exactly these block sizes.
    ByMultiset { sizes: Vec<usize> },
    /// All clique trees with `n` vertices and `k` blocks.
    ByNk { n: usize, k: usize },
}

impl EnumSpec {
    pub fn multiset(sizes: &[usize]) -> Self {
        Self::ByMultiset {
            sizes: sizes.to_vec(),
        }
    }

    pub fn by_nk(n: usize, k: usize) -> Self {
        Self::ByNk { n, k }
    }

    /// The block multisets covered, each sorted ascending.
    pub fn multisets(&self) -> Result<Vec<Vec<usize>>> {
        match self {
            Self::ByMultiset { sizes } => {
                if sizes.is_empty() {
                    return Err(Error::Infeasible("empty block multiset".into()));
                }
                if let Some(&s) = sizes.iter().find(|&&s| s < 2) {
                    return Err(Error::Infeasible(format!("block size {s} < 2")));
                }
                let mut sorted = sizes.clone();
                sorted.sort_unstable();
                Ok(vec![sorted])
            }
            &Self::ByNk { n, k } => {
                if n < 2 || k == 0 || k > n - 1 {
                    return Err(Error::Infeasible(format!(
                        "need n >= 2 and 1 <= k <= n - 1, got n={n}, k={k}"
                    )));
                }
                Ok(multisets_with_sum(n + k - 1, k))
            }
        }
    }
}

/// Non-decreasing `k`-tuples of sizes `≥ 2` summing to `total`.
fn multisets_with_sum(total: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(remaining: usize, slots: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 0 {
            if remaining == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut s = min;
        while s * slots <= remaining {
            cur.push(s);
            rec(remaining - s, slots - 1, s, cur, out);
            cur.pop();
            s += 1;
        }
    }
    let mut out = Vec::new();
    rec(total, k, 2, &mut Vec::new(), &mut out);
    out
}

/// In-place lexicographic successor; false when `v` was the last ordering.
fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = v.iter().rposition(|&x| x > v[i]).expect("successor exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

fn distinct_orderings(sorted: &[usize]) -> Vec<Vec<usize>> {
    let mut cur = sorted.to_vec();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

/// Size of the raw sequential-attachment stream.
pub fn sequential_attachment_count(spec: &EnumSpec) -> Result<u128> {
    let mut total = 0u128;
    for ms in spec.multisets()? {
        for order in distinct_orderings(&ms) {
            let mut vertices = order[0] as u128;
            let mut count = 1u128;
            for &s in &order[1..] {
                count *= vertices;
                vertices += s as u128 - 1;
            }
            total += count;
        }
    }
    Ok(total)
}

/// Raw stream: every ordering of every block multiset, every attachment
/// vertex. Deterministic for a fixed spec.
pub struct CliqueTreeStream {
    orderings: Vec<Vec<usize>>,
    current: usize,
    /// Attachment vertex of each block after the first.
    choice: Vec<usize>,
    /// Vertex count before each block after the first.
    radix: Vec<usize>,
    done: bool,
}

impl CliqueTreeStream {
    fn load(&mut self) {
        let order = &self.orderings[self.current];
        self.radix.clear();
        let mut vertices = order[0];
        for &s in &order[1..] {
            self.radix.push(vertices);
            vertices += s - 1;
        }
        self.choice = vec![0; self.radix.len()];
    }

    fn build(&self) -> CliqueTree {
        let order = &self.orderings[self.current];
        // creator[v] = block that created vertex v, the lowest block holding it.
        let mut creator = vec![0usize; order[0]];
        let mut specs = vec![BlockSpec::root(order[0])];
        for (i, &s) in order.iter().enumerate().skip(1) {
            let v = self.choice[i - 1];
            specs.push(BlockSpec::attached(s, creator[v], v));
            creator.extend(std::iter::repeat_n(i, s - 1));
        }
        build_clique_tree(&specs).expect("generated specs are valid")
    }

    fn advance(&mut self) {
        for i in (0..self.choice.len()).rev() {
            self.choice[i] += 1;
            if self.choice[i] < self.radix[i] {
                return;
            }
            self.choice[i] = 0;
        }
        self.current += 1;
        if self.current == self.orderings.len() {
            self.done = true;
        } else {
            self.load();
        }
    }
}

impl Iterator for CliqueTreeStream {
    type Item = CliqueTree;

    fn next(&mut self) -> Option<CliqueTree> {
        if self.done {
            return None;
        }
        let g = self.build();
        self.advance();
        Some(g)
    }
}

/// The raw sequential-attachment stream, guarded by [`SEARCH_GUARD`].
pub fn enumerate_clique_trees(spec: &EnumSpec) -> Result<CliqueTreeStream> {
    check_guard(spec)?;
    let orderings: Vec<Vec<usize>> = spec
        .multisets()?
        .iter()
        .flat_map(|ms| distinct_orderings(ms))
        .collect();
    let mut stream = CliqueTreeStream {
        orderings,
        current: 0,
        choice: Vec::new(),
        radix: Vec::new(),
        done: false,
    };
    stream.load();
    Ok(stream)
}

/// Exact canonical form of a clique tree: the AHU encoding of its block-cut
/// tree, labelled by block size, rooted at the centre (minimum over both
/// centres when there are two). Equal strings ⇔ isomorphic graphs.
pub fn canonical_form(g: &CliqueTree) -> String {
    let bct = BlockCutTree::new(g);
    let centres = tree_centres(&bct.adjacency);
    centres
        .into_iter()
        .map(|c| encode(&bct, c, usize::MAX))
        .min()
        .expect("a tree has a centre")
}

fn tree_centres(adjacency: &[Vec<usize>]) -> Vec<usize> {
    let n = adjacency.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut degree: Vec<usize> = adjacency.iter().map(Vec::len).collect();
    let mut leaves: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= leaves.len();
        let mut next = Vec::new();
        for &leaf in &leaves {
            degree[leaf] = 0;
            for &nb in &adjacency[leaf] {
                if degree[nb] == 0 {
                    continue;
                }
                degree[nb] -= 1;
                if degree[nb] == 1 {
                    next.push(nb);
                }
            }
        }
        leaves = next;
    }
    leaves.sort_unstable();
    leaves
}

fn encode(bct: &BlockCutTree, node: usize, parent: usize) -> String {
    let mut children: Vec<String> = bct.adjacency[node]
        .iter()
        .filter(|&&c| c != parent)
        .map(|&c| encode(bct, c, node))
        .collect();
    children.sort_unstable();
    let label = if node < bct.block_count {
        format!("B{}", bct.block_sizes[node])
    } else {
        "C".to_string()
    };
    format!("{label}({})", children.concat())
}

/// Sorted multiset of sorted distance rows. Invariant under relabelling but
/// not a complete isomorphism test.
pub fn certificate(d: &DistanceMatrix) -> Vec<Vec<u32>> {
    let mut rows: Vec<Vec<u32>> = (0..d.order())
        .map(|u| {
            let mut r = d.row(u).to_vec();
            r.sort_unstable();
            r
        })
        .collect();
    rows.sort_unstable();
    rows
}

/// Isomorphism of two connected graphs given by their distance matrices,
/// by backtracking over vertex maps that preserve sorted distance rows.
pub fn is_isomorphic(a: &DistanceMatrix, b: &DistanceMatrix) -> bool {
    let n = a.order();
    if n != b.order() || certificate(a) != certificate(b) {
        return false;
    }
    let profile = |d: &DistanceMatrix, u: usize| {
        let mut r = d.row(u).to_vec();
        r.sort_unstable();
        r
    };
    let pa: Vec<Vec<u32>> = (0..n).map(|u| profile(a, u)).collect();
    let pb: Vec<Vec<u32>> = (0..n).map(|u| profile(b, u)).collect();
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|u| (0..n).filter(|&v| pa[u] == pb[v]).collect())
        .collect();
    // Map the most constrained vertices first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&u| candidates[u].len());

    fn extend(
        depth: usize,
        order: &[usize],
        candidates: &[Vec<usize>],
        a: &DistanceMatrix,
        b: &DistanceMatrix,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let u = order[depth];
        for &v in &candidates[u] {
            if used[v] {
                continue;
            }
            let consistent = order[..depth]
                .iter()
                .all(|&p| a.get(u, p) == b.get(v, image[p]));
            if !consistent {
                continue;
            }
            image[u] = v;
            used[v] = true;
            if extend(depth + 1, order, candidates, a, b, image, used) {
                return true;
            }
            used[v] = false;
        }
        false
    }

    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend(0, &order, &candidates, a, b, &mut image, &mut used)
}

/// One representative per isomorphism class, in canonical-form order.
#[derive(Debug, Clone)]
pub struct DistinctTrees {
    pub trees: Vec<CliqueTree>,
    /// Attachments tried while growing the classes.
    pub attempts: u128,
}

fn check_guard(spec: &EnumSpec) -> Result<u128> {
    let count = sequential_attachment_count(spec)?;
    if count > SEARCH_GUARD {
        return Err(Error::GuardExceeded {
            count,
            limit: SEARCH_GUARD,
        });
    }
    Ok(count)
}

fn remaining_sizes(ms: &[usize], g: &CliqueTree) -> Vec<usize> {
    let mut remaining = ms.to_vec();
    for s in g.block_sizes() {
        let pos = remaining.iter().position(|&r| r == s).expect("sizes drawn from multiset");
        remaining.remove(pos);
    }
    remaining.dedup();
    remaining
}

/// Covers the same trees as [`enumerate_clique_trees`] and is subject to
/// the same guard on the raw stream size.
pub fn distinct_clique_trees(spec: &EnumSpec) -> Result<DistinctTrees> {
    check_guard(spec)?;
    let mut all: BTreeMap<String, CliqueTree> = BTreeMap::new();
    let mut attempts = 0u128;
    for ms in spec.multisets()? {
        let firsts: BTreeSet<usize> = ms.iter().copied().collect();
        let mut level: BTreeMap<String, CliqueTree> = BTreeMap::new();
        for s in firsts {
            let g = build_clique_tree(&[BlockSpec::root(s)])?;
            attempts += 1;
            level.insert(canonical_form(&g), g);
        }
        for _ in 1..ms.len() {
            let mut next = BTreeMap::new();
            for g in level.values() {
                for s in remaining_sizes(&ms, g) {
                    for v in 0..g.vertex_count() {
                        attempts += 1;
                        let h = g.attach(s, v)?;
                        next.entry(canonical_form(&h)).or_insert(h);
                    }
                }
            }
            level = next;
        }
        all.extend(level);
    }
    Ok(DistinctTrees {
        trees: all.into_values().collect(),
        attempts,
    })
}

/// Spectral summary of one candidate.
#[derive(Debug, Clone, Serialize)]
pub struct Candidate {
    pub block_sizes: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path_sizes: Option<Vec<usize>>,
    pub certificate: String,
    pub energy: f64,
    pub radius: f64,
    pub inertia: Inertia,
    #[serde(skip)]
    pub tree: CliqueTree,
}

impl Candidate {
    /// `(1, 0, n − 1)`.
    pub fn inertia_ok(&self) -> bool {
        let n = self.tree.vertex_count();
        self.inertia
            == Inertia {
                positive: 1,
                zero: 0,
                negative: n - 1,
            }
    }

    pub fn energy_identity_ok(&self) -> bool {
        (self.energy - 2.0 * self.radius).abs() <= ENERGY_IDENTITY_TOL * self.energy.abs()
    }
}

fn certificate_string(d: &DistanceMatrix) -> String {
    certificate(d)
        .iter()
        .map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("|")
}

pub fn evaluate(g: &CliqueTree) -> Result<Candidate> {
    let d = distance_matrix(g);
    let s = distance_spectrum(&d)?;
    Ok(Candidate {
        block_sizes: g.block_sizes(),
        path_sizes: g.path_sizes(),
        certificate: certificate_string(&d),
        energy: distance_energy(&s),
        radius: s.largest(),
        inertia: inertia(&s),
        tree: g.clone(),
    })
}

/// Spectra of every class of `spec`, computed in parallel, returned in
/// canonical order.
pub fn evaluate_all(spec: &EnumSpec) -> Result<(Vec<Candidate>, u128)> {
    let distinct = distinct_clique_trees(spec)?;
    let candidates = distinct
        .trees
        .par_iter()
        .map(evaluate)
        .collect::<Result<Vec<_>>>()?;
    Ok((candidates, distinct.attempts))
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureOutcome {
    pub balanced_sizes: Vec<usize>,
    /// Some maximal candidate is isomorphic to the balanced clique path.
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtremalResult {
    pub spec: EnumSpec,
    pub reading: String,
    #[serde(skip)]
    pub winner: CliqueTree,
    pub winner_graph: GraphFile,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub winner_path_sizes: Option<Vec<usize>>,
    pub winner_energy: f64,
    pub winner_radius: f64,
    pub runner_up_energy: Option<f64>,
    /// All candidates within the tie tolerance of the maximum, winner first.
    pub ties: Vec<Vec<usize>>,
    /// Trees built by the class generator before deduplication.
    pub total_generated: u128,
    pub sequential_attachment_count: u128,
    pub isomorphism_classes: usize,
    pub distinct_certificates: usize,
    pub inertia_violations: usize,
    pub energy_identity_violations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjecture: Option<ConjectureOutcome>,
    #[serde(skip)]
    pub candidates: Vec<Candidate>,
}

impl ExtremalResult {
    /// CSV of distinct certificates with their energies.
    pub fn certificates_csv(&self) -> String {
        let mut by_cert: BTreeMap<&str, &Candidate> = BTreeMap::new();
        for c in &self.candidates {
            by_cert.entry(&c.certificate).or_insert(c);
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["certificate", "block_sizes", "energy", "radius"])
            .expect("in-memory write");
        for (cert, c) in by_cert {
            let sizes = c
                .block_sizes
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(" ");
            w.write_record([
                cert.to_string(),
                sizes,
                crate::report::fmt_sig(c.energy),
                crate::report::fmt_sig(c.radius),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("csv is utf-8")
    }
}

fn rank_by<F: Fn(&Candidate) -> f64>(candidates: &[Candidate], key: F) -> (Vec<usize>, Option<f64>) {
    let best = candidates.iter().map(&key).fold(f64::NEG_INFINITY, f64::max);
    let ties: Vec<usize> = (0..candidates.len())
        .filter(|&i| best - key(&candidates[i]) <= TIE_TOL * best.abs())
        .collect();
    let runner_up = (0..candidates.len())
        .filter(|i| !ties.contains(i))
        .map(|i| key(&candidates[i]))
        .reduce(f64::max);
    (ties, runner_up)
}

/// Brute-force maximiser of distance energy over `spec`. In `ByNk` mode the
/// maximal candidates are compared with the balanced clique path by exact
/// isomorphism search.
pub fn argmax_energy(spec: &EnumSpec) -> Result<ExtremalResult> {
    let (candidates, attempts) = evaluate_all(spec)?;
    let (mut ties, runner_up_energy) = rank_by(&candidates, |c| c.energy);

    let (reading, conjecture) = match *spec {
        EnumSpec::ByNk { n, k } => {
            let balanced = distance_matrix(&balanced_clique_path(n, k)?);
            let matching = ties
                .iter()
                .position(|&i| is_isomorphic(&distance_matrix(&candidates[i].tree), &balanced));
            if let Some(p) = matching {
                ties.swap(0, p);
            }
            (
                "all clique trees with n vertices and k blocks".to_string(),
                Some(ConjectureOutcome {
                    balanced_sizes: balanced_sizes(n, k)?,
                    holds: matching.is_some(),
                }),
            )
        }
        EnumSpec::ByMultiset { .. } => ("all clique trees with the given block multiset".to_string(), None),
    };

    let winner = &candidates[ties[0]];
    let distinct_certificates = candidates
        .iter()
        .map(|c| c.certificate.as_str())
        .collect::<BTreeSet<_>>()
        .len();
    Ok(ExtremalResult {
        spec: spec.clone(),
        reading,
        winner: winner.tree.clone(),
        winner_graph: GraphFile::from_tree(&winner.tree),
        winner_path_sizes: winner.path_sizes.clone(),
        winner_energy: winner.energy,
        winner_radius: winner.radius,
        runner_up_energy,
        ties: ties.iter().map(|&i| candidates[i].block_sizes.clone()).collect(),
        total_generated: attempts,
        sequential_attachment_count: sequential_attachment_count(spec)?,
        isomorphism_classes: candidates.len(),
        distinct_certificates,
        inertia_violations: candidates.iter().filter(|c| !c.inertia_ok()).count(),
        energy_identity_violations: candidates.iter().filter(|c| !c.energy_identity_ok()).count(),
        conjecture,
        candidates,
    })
}

/// The spectral radius maximiser over a fixed block multiset is a clique
/// path, with blocks larger than `K₂` pushed to its two ends where the
/// multiset allows.
pub fn multiset_maximiser_check(sizes: &[usize]) -> Result<VerificationReport> {
    let spec = EnumSpec::multiset(sizes);
    let (candidates, attempts) = evaluate_all(&spec)?;
    let (ties, runner_up) = rank_by(&candidates, |c| c.radius);
    let mut report = VerificationReport::new("multiset_maximiser")
        .param("sizes", sizes.to_vec())
        .param("classes", candidates.len())
        .param("generated", attempts as u64);

    // Prefer a tied candidate that is a clique path.
    let winner = ties
        .iter()
        .map(|&i| &candidates[i])
        .find(|c| c.path_sizes.is_some())
        .unwrap_or(&candidates[ties[0]]);
    report.push(Check::holds("winner is a clique path", winner.path_sizes.is_some()));
    if let Some(path) = &winner.path_sizes {
        let big = sizes.iter().filter(|&&s| s > 2).count();
        let interior_big = if path.len() > 2 {
            path[1..path.len() - 1].iter().filter(|&&s| s > 2).count()
        } else {
            0
        };
        report.push(Check::exact(
            "interior blocks larger than K2",
            interior_big as i128,
            big.saturating_sub(2) as i128,
        ));
        report.add_note(format!("winning arrangement {path:?}"));
    }
    if let Some(r) = runner_up {
        report.push(Check::new("winner radius > runner-up", winner.radius, Relation::Greater, r));
    }
    Ok(report)
}
