//! Test-corpus lineage graph.
//!
//! Testcases are mostly written by cloning an existing input file and
//! changing a few lines, so textual distance between input files traces the
//! corpus's ancestry. This module computes normalized line-edit distances
//! between every pair of inputs and reduces them to a minimum spanning tree:
//! each test attaches to its nearest relative, which recovers the
//! clone-lineage forest without any recorded history.

use std::fs;
use std::path::Path;

use crate::harness::{discover, HarnessError};

/// Line-based edit distance (insertions + deletions + substitutions)
/// normalized by the longer line count. 0 means identical texts; 1 means
/// nothing in common. Empty-vs-empty is defined as 0.
pub fn text_distance(a: &str, b: &str) -> f64 {
    let a_lines: Vec<&str> = a.lines().collect();
    let b_lines: Vec<&str> = b.lines().collect();
    let longest = a_lines.len().max(b_lines.len());
    if longest == 0 {
        return 0.0;
    }
    line_edit_distance(&a_lines, &b_lines) as f64 / longest as f64
}

fn line_edit_distance(a: &[&str], b: &[&str]) -> usize {
    // Levenshtein over lines, one DP row at a time.
    let mut previous: Vec<usize> = (0..=b.len()).collect();
    let mut current = vec![0; b.len() + 1];
    for (i, a_line) in a.iter().enumerate() {
        current[0] = i + 1;
        for (j, b_line) in b.iter().enumerate() {
            let substitution = previous[j] + usize::from(a_line != b_line);
            current[j + 1] = substitution.min(previous[j + 1] + 1).min(current[j] + 1);
        }
        std::mem::swap(&mut previous, &mut current);
    }
    previous[b.len()]
}

/// Pairwise distances over a test corpus plus the selected spanning edges.
#[derive(Debug, Clone, PartialEq)]
pub struct LineageGraph {
    /// Test names, lexicographically sorted.
    pub nodes: Vec<String>,
    /// Symmetric distance matrix with zero diagonal, indexed like `nodes`.
    pub distances: Vec<Vec<f64>>,
    /// Minimum-spanning-tree edges `(i, j, weight)` with i < j.
    pub edges: Vec<(usize, usize, f64)>,
}

struct DisjointSets(Vec<usize>);

impl DisjointSets {
    fn new(len: usize) -> Self {
        DisjointSets((0..len).collect())
    }

    fn root(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn unite(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.root(a), self.root(b));
        self.0[a] = b;
        a != b
    }
}

/// Kruskal's algorithm. Ties are broken by lexicographic node-name order so
/// the tree never depends on file enumeration order; `nodes` is sorted, so
/// index order is name order.
fn minimum_spanning_tree(distances: &[Vec<f64>]) -> Vec<(usize, usize, f64)> {
    let n = distances.len();
    let mut candidates: Vec<(usize, usize, f64)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, distances[i][j]))
        .collect();
    candidates.sort_by(|a, b| {
        a.2.partial_cmp(&b.2)
            .expect("distances are finite")
            .then(a.0.cmp(&b.0))
            .then(a.1.cmp(&b.1))
    });

    let mut sets = DisjointSets::new(n);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for (i, j, weight) in candidates {
        if sets.unite(i, j) {
            edges.push((i, j, weight));
            if edges.len() + 1 == n {
                break;
            }
        }
    }
    edges
}

/// Builds the lineage graph over every discovered input file in `dir`.
pub fn lineage_graph(dir: &Path) -> Result<LineageGraph, HarnessError> {
    let cases = discover(dir)?;
    if cases.is_empty() {
        return Err(HarnessError::NoTests(dir.to_path_buf()));
    }

    let mut nodes = Vec::with_capacity(cases.len());
    let mut contents = Vec::with_capacity(cases.len());
    for case in &cases {
        let text = fs::read_to_string(&case.input_path).map_err(|source| {
            HarnessError::UnreadableDirectory {
                dir: case.input_path.clone(),
                source,
            }
        })?;
        nodes.push(case.name.clone());
        contents.push(text);
    }

    let n = nodes.len();
    let mut distances = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = text_distance(&contents[i], &contents[j]);
            distances[i][j] = d;
            distances[j][i] = d;
        }
    }

    let edges = minimum_spanning_tree(&distances);
    Ok(LineageGraph {
        nodes,
        distances,
        edges,
    })
}

impl LineageGraph {
    /// Undirected DOT rendering: one node per test, one labelled edge per
    /// spanning-tree connection.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph lineage {\n");
        for name in &self.nodes {
            out.push_str(&format!("    \"{name}\";\n"));
        }
        for (i, j, weight) in &self.edges {
            out.push_str(&format!(
                "    \"{}\" -- \"{}\" [label=\"{weight:.3}\"];\n",
                self.nodes[*i], self.nodes[*j]
            ));
        }
        out.push_str("}\n");
        out
    }

    /// Full distance matrix as CSV, for layouts that want more than the tree.
    pub fn matrix_csv(&self) -> String {
        let mut out = String::from("name");
        for name in &self.nodes {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (i, name) in self.nodes.iter().enumerate() {
            out.push_str(name);
            for d in &self.distances[i] {
                out.push_str(&format!(",{d:.6}"));
            }
            out.push('\n');
        }
        out
    }
}
