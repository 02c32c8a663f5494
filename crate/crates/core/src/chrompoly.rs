//! Chromatic polynomials by two independent routes, plus the coefficient
//! checks and the rank-3 spanning-subgraph classification of cones.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::poly::IntPolynomial;
use crate::report::{Check, Report};

/// Largest edge count for which all `2^s` edge subsets are enumerated.
pub const MAX_SUBSET_EDGES: usize = 24;

pub(crate) fn check_subset_capacity(g: &Graph, what: &'static str) -> Result<()> {
    if g.edge_count() > MAX_SUBSET_EDGES {
        return Err(Error::capacity(
            what,
            format!("{} edges", g.edge_count()),
            format!("{MAX_SUBSET_EDGES} edges"),
        ));
    }
    Ok(())
}

/// Union-find without path compression so unions can be undone in LIFO
/// order during subset enumeration.
pub(crate) struct RollbackDsu {
    parent: Vec<usize>,
    size: Vec<usize>,
    components: usize,
    history: Vec<Option<(usize, usize)>>,
}

impl RollbackDsu {
    pub(crate) fn new(n: usize) -> Self {
        RollbackDsu {
            parent: (0..n).collect(),
            size: vec![1; n],
            components: n,
            history: Vec::new(),
        }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            self.history.push(None);
            return;
        }
        if self.size[a] < self.size[b] {
            core::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.components -= 1;
        self.history.push(Some((a, b)));
    }

    pub(crate) fn undo(&mut self) {
        if let Some((a, b)) = self.history.pop().expect("nothing to undo") {
            self.parent[b] = b;
            self.size[a] -= self.size[b];
            self.components += 1;
        }
    }

    pub(crate) fn components(&self) -> usize {
        self.components
    }
}

/// Signed term counts of the subset expansion: `tally[k]` is
/// `Σ (-1)^{|A|}` over the enumerated subsets `A` with `k_A = k`.
///
/// Counts are bounded by `2^MAX_SUBSET_EDGES` in magnitude, so `i64` holds
/// them exactly; the polynomial itself is built over big integers.
pub type WhitneyTally = Vec<i64>;

/// Expansion restricted to the subsets whose membership pattern on the
/// first `prefix_bits` edges equals `prefix`. Shards with distinct prefixes
/// partition the subset space; their tallies add.
pub fn whitney_shard(g: &Graph, prefix: u64, prefix_bits: usize) -> Result<WhitneyTally> {
    check_subset_capacity(g, "subset expansion")?;
    let prefix_bits = prefix_bits.min(g.edge_count());
    let mut tally = vec![0i64; g.n() + 1];
    let mut dsu = RollbackDsu::new(g.n());
    let mut parity = 0usize;
    for i in 0..prefix_bits {
        if prefix >> i & 1 == 1 {
            let (u, v) = g.edge(i);
            dsu.union(u, v);
            parity ^= 1;
        }
    }
    expand(g, prefix_bits, parity, &mut dsu, &mut tally);
    Ok(tally)
}

fn expand(g: &Graph, next: usize, parity: usize, dsu: &mut RollbackDsu, tally: &mut [i64]) {
    if next == g.edge_count() {
        tally[dsu.components()] += if parity == 0 { 1 } else { -1 };
        return;
    }
    expand(g, next + 1, parity, dsu, tally);
    let (u, v) = g.edge(next);
    dsu.union(u, v);
    expand(g, next + 1, parity ^ 1, dsu, tally);
    dsu.undo();
}

pub fn tally_to_polynomial(tally: &[i64]) -> IntPolynomial {
    IntPolynomial::new(tally.iter().map(|&c| BigInt::from(c)).collect())
}

/// `P(G, m) = Σ_{A ⊆ E} (-1)^{|A|} m^{k_A}` by direct enumeration.
pub fn whitney_expansion(g: &Graph) -> Result<IntPolynomial> {
    let tally = whitney_shard(g, 0, 0)?;
    Ok(tally_to_polynomial(&tally))
}

type MemoKey = (usize, Vec<(usize, usize)>);

/// `P(G, m)` by deletion–contraction with a memo keyed on a
/// degree-refined relabeling of the graph.
pub fn deletion_contraction(g: &Graph) -> IntPolynomial {
    let mut memo = BTreeMap::new();
    dc(g.n(), g.edges().to_vec(), &mut memo)
}

fn dc(n: usize, edges: Vec<(usize, usize)>, memo: &mut BTreeMap<MemoKey, IntPolynomial>) -> IntPolynomial {
    if edges.is_empty() {
        return IntPolynomial::monomial(n);
    }
    if edges.len() == n * (n - 1) / 2 {
        return IntPolynomial::falling_factorial(n);
    }
    let key = canonical_key(n, &edges);
    if let Some(p) = memo.get(&key) {
        return p.clone();
    }
    let (n, edges) = key.clone();
    let comps = component_count(n, &edges);
    let result = if edges.len() + comps == n {
        // forest
        IntPolynomial::monomial(comps) * IntPolynomial::linear_root(1).pow(edges.len())
    } else {
        let (u, v) = *edges.last().expect("nonempty");
        let deleted: Vec<_> = edges[..edges.len() - 1].to_vec();
        let contracted = contract(&deleted, u, v);
        dc(n, deleted, memo) - dc(n - 1, contracted, memo)
    };
    memo.insert(key, result.clone());
    result
}

/// Merges `v` into `u` and drops parallel edges; vertices above `v` shift
/// down by one.
fn contract(edges: &[(usize, usize)], u: usize, v: usize) -> Vec<(usize, usize)> {
    let relabel = |x: usize| {
        let x = if x == v { u } else { x };
        if x > v {
            x - 1
        } else {
            x
        }
    };
    let mut out: Vec<(usize, usize)> = edges
        .iter()
        .map(|&(a, b)| {
            let (a, b) = (relabel(a), relabel(b));
            (a.min(b), a.max(b))
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn component_count(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut dsu = RollbackDsu::new(n);
    for &(a, b) in edges {
        dsu.union(a, b);
    }
    dsu.components()
}

/// Relabels vertices by (degree, sorted neighbor degrees), ties by original
/// label. Two isomorphic graphs may get different keys; equal keys always
/// mean equal edge sets, so the memo is sound.
fn canonical_key(n: usize, edges: &[(usize, usize)]) -> MemoKey {
    let mut deg = vec![0usize; n];
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        deg[a] += 1;
        deg[b] += 1;
        adj[a].push(b);
        adj[b].push(a);
    }
    let signature: Vec<(usize, Vec<usize>)> = (0..n)
        .map(|v| {
            let mut nd: Vec<usize> = adj[v].iter().map(|&x| deg[x]).collect();
            nd.sort_unstable();
            (deg[v], nd)
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| signature[a].cmp(&signature[b]).then(a.cmp(&b)));
    let mut label = vec![0usize; n];
    for (new, &old) in order.iter().enumerate() {
        label[old] = new;
    }
    let mut relabeled: Vec<(usize, usize)> = edges
        .iter()
        .map(|&(a, b)| {
            let (a, b) = (label[a], label[b]);
            (a.min(b), a.max(b))
        })
        .collect();
    relabeled.sort_unstable();
    (n, relabeled)
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Checks the coefficient structure of `P(G, m) = Σ (-1)^i a_i m^{n-i}` for a
/// connected graph: `a_0..a_{n-1} > 0`, `a_n = 0`, `a_i = C(s, i)` below
/// `g - 1`, and `a_{g-1} = C(s, g-1) - t` with `t` the number of `g`-cycles.
pub fn coefficient_report(g: &Graph) -> Result<Report> {
    if !g.is_connected() {
        return Err(Error::Disconnected {
            components: g.components().len(),
        });
    }
    coefficient_report_for(g, &deletion_contraction(g))
}

/// Same checks against a polynomial computed elsewhere.
pub fn coefficient_report_for(g: &Graph, p: &IntPolynomial) -> Result<Report> {
    let n = g.n();
    let s = g.edge_count();
    let mut report = Report::new("coefficients");
    let a = |i: usize| {
        let c = p.coeff(n - i);
        if i.is_multiple_of(2) {
            c
        } else {
            -c
        }
    };
    report.push(Check::eq(
        "degree of P(G,m) equals n",
        BigInt::from(n),
        BigInt::from(p.degree().unwrap_or(0)),
    ));
    for i in 0..n {
        report.push(Check::greater(
            format!("a_{i} > 0 (sign of m^{} coefficient is (-1)^{i})", n - i),
            BigInt::zero(),
            a(i),
        ));
    }
    report.push(Check::eq("a_n = 0", BigInt::zero(), a(n)));
    let girth = g.girth();
    let plain_up_to = match girth {
        Some(gi) => gi - 2,
        None => n - 1,
    };
    for i in 0..=plain_up_to.min(n) {
        report.push(Check::eq(format!("a_{i} = C({s},{i})"), binomial(s, i), a(i)));
    }
    if let Some(gi) = girth {
        let t = g.count_cycles_of_length(gi);
        report.push(Check::eq(
            format!("a_{} = C({s},{}) - t with t = {t} cycles of length {gi}", gi - 1, gi - 1),
            binomial(s, gi - 1) - BigInt::from(t),
            a(gi - 1),
        ));
    }
    Ok(report)
}

/// Counts of the rank-3 spanning subgraphs of a cone `M` (those with
/// `|V(M)| - 3` components), bucketed by edge count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubgraphClassification {
    pub p3: u64,
    pub p4: u64,
    pub p5: u64,
    pub p6: u64,
    /// `p3 - p4 + p5 - p6`, the magnitude of the `m^{n-3}` coefficient.
    pub a3: i64,
    /// Triangles of `M`.
    pub t: u64,
}

pub fn classify_spanning_subgraphs(m: &Graph) -> Result<SubgraphClassification> {
    if m.n() < 4 {
        return Err(Error::Precondition(format!(
            "classification needs at least 4 vertices, got {}",
            m.n()
        )));
    }
    check_subset_capacity(m, "spanning subgraph classification")?;
    let target = m.n() - 3;
    let mut buckets = [0u64; 7];
    let mut dsu = RollbackDsu::new(m.n());
    choose(m, 0, 0, &mut dsu, target, &mut buckets);
    let [_, _, _, p3, p4, p5, p6] = buckets;
    Ok(SubgraphClassification {
        p3,
        p4,
        p5,
        p6,
        a3: p3 as i64 - p4 as i64 + p5 as i64 - p6 as i64,
        t: m.count_cycles_of_length(3),
    })
}

fn choose(m: &Graph, next: usize, size: usize, dsu: &mut RollbackDsu, target: usize, buckets: &mut [u64; 7]) {
    if size >= 3 && dsu.components() == target {
        buckets[size] += 1;
    }
    // rank can only grow; six edges is the most a rank-3 subgraph holds
    if size == 6 || dsu.components() < target {
        return;
    }
    for e in next..m.edge_count() {
        let (u, v) = m.edge(e);
        dsu.union(u, v);
        choose(m, e + 1, size + 1, dsu, target, buckets);
        dsu.undo();
    }
}
