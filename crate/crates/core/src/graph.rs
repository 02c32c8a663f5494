//! Simple undirected graphs with dense `0..n` vertex labels.

use alloc::collections::VecDeque;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest vertex count accepted by the parser and constructors.
pub const MAX_VERTICES: usize = 1 << 12;

/// A finite simple graph.
///
/// Edges are stored as `(u, v)` with `u < v`, sorted lexicographically; an
/// edge's position in that list is its index everywhere else in the crate
/// (edge subsets, cover permutations, report rows).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("a graph needs at least one vertex".into()));
        }
        if n > MAX_VERTICES {
            return Err(Error::capacity("vertex count", n, MAX_VERTICES));
        }
        let mut list = Vec::new();
        for (a, b) in edges {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if a == b {
                return Err(Error::Loop(a));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Self::from_sorted(n, list))
    }

    fn from_sorted(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn edgeless(n: usize) -> Result<Self> {
        Self::new(n, [])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> (usize, usize) {
        self.edges[index]
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index(u, v).is_some()
    }

    /// Vertex sets of the connected components, each sorted, ordered by
    /// smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = self.bfs_from(start, &mut seen);
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        self.bfs_from(0, &mut seen).len() == self.n
    }

    /// BFS visiting order from `root` with ascending neighbor tie-breaks.
    pub fn bfs_order(&self, root: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        self.bfs_from(root, &mut seen)
    }

    /// BFS order covering every component: each component is visited from
    /// its smallest vertex, with the component of `root` first.
    pub fn bfs_order_all(&self, root: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        let mut order = self.bfs_from(root, &mut seen);
        for start in 0..self.n {
            if !seen[start] {
                order.extend(self.bfs_from(start, &mut seen));
            }
        }
        order
    }

    fn bfs_from(&self, root: usize, seen: &mut [bool]) -> Vec<usize> {
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        seen[root] = true;
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &y in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        order
    }

    /// BFS parent pointers from `root`: `parent[v] = Some((p, edge_index))`
    /// for every reached `v != root`.
    pub(crate) fn bfs_parents(&self, root: usize) -> Vec<Option<(usize, usize)>> {
        let mut parent = vec![None; self.n];
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::new();
        seen[root] = true;
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some((x, self.edge_index(x, y).expect("adjacent")));
                    queue.push_back(y);
                }
            }
        }
        parent
    }

    /// Length of a shortest cycle, or `None` for a forest.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        for root in 0..self.n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[root] = 0;
            parent[root] = usize::MAX;
            let mut queue = VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                for &y in &self.adj[x] {
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        parent[y] = x;
                        queue.push_back(y);
                    } else if parent[x] != y {
                        let len = dist[x] + dist[y] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Number of connected components of the spanning subgraph `(V, A)`.
    pub fn component_count(&self, subset: &EdgeSubset) -> usize {
        let mut dsu = DisjointSets::new(self.n);
        for i in subset.iter() {
            let (u, v) = self.edges[i];
            dsu.union(u, v);
        }
        dsu.count()
    }

    /// Component count for a subset given as a bitmask over the first 64
    /// edges; used by the hot subset-enumeration loops.
    pub(crate) fn mask_component_count(&self, mask: u64) -> usize {
        let mut dsu = DisjointSets::new(self.n);
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let (u, v) = self.edges[i];
            dsu.union(u, v);
        }
        dsu.count()
    }

    /// BFS spanning tree from vertex 0.
    pub fn spanning_tree(&self) -> Result<EdgeSubset> {
        self.spanning_tree_from(0)
    }

    pub fn spanning_tree_from(&self, root: usize) -> Result<EdgeSubset> {
        if root >= self.n {
            return Err(Error::VertexOutOfRange { vertex: root, n: self.n });
        }
        let parents = self.bfs_parents(root);
        let reached = 1 + parents.iter().filter(|p| p.is_some()).count();
        if reached != self.n {
            return Err(Error::Disconnected {
                components: self.components().len(),
            });
        }
        let mut tree = EdgeSubset::empty(self.edge_count());
        for (_, e) in parents.into_iter().flatten() {
            tree.insert(e);
        }
        Ok(tree)
    }

    /// Root used to put covers into normal form: the largest vertex adjacent
    /// to every other vertex (the apex of a cone), else vertex 0.
    pub fn gauge_root(&self) -> usize {
        if self.n < 2 {
            return 0;
        }
        (0..self.n)
            .rev()
            .find(|&v| self.degree(v) == self.n - 1)
            .unwrap_or(0)
    }

    /// Number of distinct cycles of length `len` (each cycle counted once
    /// regardless of starting point or direction).
    pub fn count_cycles_of_length(&self, len: usize) -> u64 {
        if len < 3 || len > self.n {
            return 0;
        }
        let mut on_path = vec![false; self.n];
        let mut total = 0u64;
        for start in 0..self.n {
            on_path[start] = true;
            total += self.closed_walks(start, start, 1, len, &mut on_path);
            on_path[start] = false;
        }
        // each cycle is found once per direction from its smallest vertex
        total / 2
    }

    fn closed_walks(
        &self,
        start: usize,
        at: usize,
        depth: usize,
        len: usize,
        on_path: &mut [bool],
    ) -> u64 {
        if depth == len {
            return u64::from(self.has_edge(at, start));
        }
        let mut count = 0;
        for &next in &self.adj[at] {
            if next > start && !on_path[next] {
                on_path[next] = true;
                count += self.closed_walks(start, next, depth + 1, len, on_path);
                on_path[next] = false;
            }
        }
        count
    }

    /// `K_1 ∨ G`: adds vertex `n` adjacent to every vertex.
    pub fn cone(&self) -> Graph {
        let w = self.n;
        let mut edges = self.edges.clone();
        edges.extend((0..w).map(|v| (v, w)));
        edges.sort_unstable();
        Graph::from_sorted(w + 1, edges)
    }

    /// Subgraph induced on `vertices`, relabeled in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Graph> {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]));
        Graph::new(vertices.len(), edges)
    }
}

impl core::fmt::Display for Graph {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        writeln!(f, "n={}", self.n)?;
        for (u, v) in &self.edges {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

/// Parses the edge-list text format.
///
/// One `u v` pair per line; blank lines and `#` comments are ignored. An
/// optional `n=<k>` header fixes the vertex count (allowing isolated
/// trailing vertices); otherwise `n` is one more than the largest label.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("n") {
            let rest = rest.trim_start();
            if let Some(value) = rest.strip_prefix('=') {
                if header.is_some() {
                    return Err(Error::Parse("repeated n= header".into()).at_line(line_no));
                }
                let k = value.trim().parse::<usize>().map_err(|_| {
                    Error::Parse(alloc::format!("bad vertex count {:?}", value.trim()))
                        .at_line(line_no)
                })?;
                header = Some((k, line_no));
                continue;
            }
        }
        let mut tokens = line.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<usize> {
            let tok = tok.ok_or_else(|| Error::Parse("expected two vertex labels".into()))?;
            tok.parse::<usize>()
                .map_err(|_| Error::Parse(alloc::format!("bad vertex label {tok:?}")))
        };
        let u = parse(tokens.next()).map_err(|e| e.at_line(line_no))?;
        let v = parse(tokens.next()).map_err(|e| e.at_line(line_no))?;
        if tokens.next().is_some() {
            return Err(Error::Parse("expected two vertex labels".into()).at_line(line_no));
        }
        if u == v {
            return Err(Error::Loop(u).at_line(line_no));
        }
        if u.max(v) >= MAX_VERTICES {
            return Err(Error::capacity("vertex label", u.max(v), MAX_VERTICES - 1).at_line(line_no));
        }
        edges.push((u.min(v), u.max(v)));
        lines.push(line_no);
    }
    let max_label = edges.iter().map(|&(_, v)| v + 1).max().unwrap_or(0);
    let n = match header {
        Some((k, line_no)) => {
            if let Some(pos) = edges.iter().position(|&(_, v)| v >= k) {
                return Err(Error::VertexOutOfRange { vertex: edges[pos].1, n: k }.at_line(lines[pos]));
            }
            if k == 0 {
                return Err(Error::Parse("n must be at least 1".into()).at_line(line_no));
            }
            k
        }
        None if max_label == 0 => return Err(Error::Parse("no vertices".to_string())),
        None => max_label,
    };
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by_key(|&i| (edges[i], lines[i]));
    for w in order.windows(2) {
        if edges[w[0]] == edges[w[1]] {
            let (u, v) = edges[w[1]];
            return Err(Error::DuplicateEdge(u, v).at_line(lines[w[1]].max(lines[w[0]])));
        }
    }
    Graph::new(n, edges)
}

/// A set of edge indices of a fixed graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeSubset {
    len: usize,
    words: Vec<u64>,
}

impl EdgeSubset {
    pub fn empty(edge_count: usize) -> Self {
        EdgeSubset {
            len: edge_count,
            words: vec![0; edge_count.div_ceil(64)],
        }
    }

    pub fn full(edge_count: usize) -> Self {
        let mut s = Self::empty(edge_count);
        (0..edge_count).for_each(|i| s.insert(i));
        s
    }

    pub fn from_indices(edge_count: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::empty(edge_count);
        for i in indices {
            if i >= edge_count {
                return Err(Error::Precondition(alloc::format!(
                    "edge index {i} out of range for {edge_count} edges"
                )));
            }
            s.insert(i);
        }
        Ok(s)
    }

    pub(crate) fn from_mask(edge_count: usize, mask: u64) -> Self {
        let mut s = Self::empty(edge_count);
        if edge_count > 0 {
            s.words[0] = mask;
        }
        s
    }

    pub fn insert(&mut self, index: usize) {
        assert!(index < self.len, "edge index out of range");
        self.words[index / 64] |= 1 << (index % 64);
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.len && self.words[index / 64] >> (index % 64) & 1 == 1
    }

    /// Number of edges in the subset.
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Size of the ambient edge list.
    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }
}

/// Union-find with path halving and union by size.
pub(crate) struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
    sets: usize,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
            sets: n,
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already connected.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            core::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.sets -= 1;
        true
    }

    pub(crate) fn count(&self) -> usize {
        self.sets
    }
}
