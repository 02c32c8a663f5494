//! m-fold covers with full matchings.
//!
//! A cover of `G` assigns to every edge `e = (u, v)`, `u < v`, a permutation
//! `σ_e` of the colors `0..m`: the fiber vertex `(u, c)` is matched with
//! `(v, σ_e(c))`. The reverse orientation carries `σ_e⁻¹`. A transversal
//! (one color per vertex) is a coloring of the cover when no matched pair is
//! selected, i.e. `color(v) != σ_e(color(u))` on every edge.
//!
//! Relabeling the fiber of each vertex `x` by a permutation `π_x` maps the
//! edge permutation to `π_v ∘ σ_e ∘ π_u⁻¹` and preserves the number of
//! colorings. Normal forms use this freedom to make every edge of a BFS
//! spanning tree the identity; what remains on the cotree edges is the
//! gauge-invariant content of the cover.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::ControlFlow;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{EdgeSubset, Graph};
use crate::perm::{factorial, Perm};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DPCover<'g> {
    graph: &'g Graph,
    m: usize,
    sigma: Vec<Perm>,
}

impl<'g> DPCover<'g> {
    pub fn new(graph: &'g Graph, m: usize, sigma: Vec<Perm>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Precondition("covers need m >= 1".into()));
        }
        if sigma.len() != graph.edge_count() {
            return Err(Error::Precondition(format!(
                "{} permutations given for {} edges",
                sigma.len(),
                graph.edge_count()
            )));
        }
        if let Some(p) = sigma.iter().find(|p| p.len() != m) {
            return Err(Error::Precondition(format!("{p} is not a permutation of 0..{m}")));
        }
        Ok(DPCover { graph, m, sigma })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Permutation of edge `e` in its stored `u < v` orientation.
    pub fn sigma(&self, e: usize) -> &Perm {
        &self.sigma[e]
    }

    pub fn sigmas(&self) -> &[Perm] {
        &self.sigma
    }

    /// Replaces the permutation on edge `e`.
    pub fn with_sigma(mut self, e: usize, p: Perm) -> Result<Self> {
        if p.len() != self.m || e >= self.sigma.len() {
            return Err(Error::Precondition(format!("cannot place {p} on edge {e}")));
        }
        self.sigma[e] = p;
        Ok(self)
    }

    /// Permutation carrying a color at `from` to the matched color at `to`.
    pub fn oriented(&self, from: usize, to: usize) -> Perm {
        let e = self.graph.edge_index(from, to).expect("not an edge");
        if from < to {
            self.sigma[e].clone()
        } else {
            self.sigma[e].inverse()
        }
    }

    pub fn is_identity(&self) -> bool {
        self.sigma.iter().all(Perm::is_identity)
    }

    /// Applies the fiber relabeling `relabel[x]` at every vertex `x`.
    pub fn relabel(&self, relabel: &[Perm]) -> Result<Self> {
        if relabel.len() != self.graph.n() || relabel.iter().any(|p| p.len() != self.m) {
            return Err(Error::Precondition("one relabeling of 0..m per vertex required".into()));
        }
        let sigma = self
            .graph
            .edges()
            .iter()
            .zip(&self.sigma)
            .map(|(&(u, v), s)| relabel[u].inverse().then(s).then(&relabel[v]))
            .collect();
        Ok(DPCover { sigma, ..self.clone() })
    }

    /// Simultaneous conjugation of every edge permutation by `pi`.
    pub fn conjugate(&self, pi: &Perm) -> Self {
        let sigma = self.sigma.iter().map(|s| s.conjugate_by(pi)).collect();
        DPCover { sigma, ..self.clone() }
    }
}

/// The cover whose matchings pair equal colors on every edge.
pub fn canonical_cover(graph: &Graph, m: usize) -> DPCover<'_> {
    assert!(m >= 1, "covers need m >= 1");
    DPCover {
        graph,
        m,
        sigma: vec![Perm::identity(m); graph.edge_count()],
    }
}

/// A cover with independent uniform permutations on all edges.
pub fn random_cover<'g, R: Rng + ?Sized>(graph: &'g Graph, m: usize, rng: &mut R) -> DPCover<'g> {
    let sigma = (0..graph.edge_count()).map(|_| Perm::random(m, rng)).collect();
    DPCover { graph, m, sigma }
}

/// Normal form with identity on the BFS spanning tree rooted at the graph's
/// gauge root (the apex of a cone, else vertex 0).
pub fn normalize<'g>(cover: &DPCover<'g>) -> Result<DPCover<'g>> {
    normalize_at(cover, cover.graph.gauge_root())
}

pub fn normalize_at<'g>(cover: &DPCover<'g>, root: usize) -> Result<DPCover<'g>> {
    let g = cover.graph;
    if !g.is_connected() {
        return Err(Error::Disconnected {
            components: g.components().len(),
        });
    }
    if root >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: root, n: g.n() });
    }
    cover.relabel(&gauge(cover, &[root]))
}

/// Fiber relabelings that trivialize a BFS spanning forest grown from
/// `roots` (then from the smallest unvisited vertex of each remaining
/// component).
fn gauge(cover: &DPCover<'_>, roots: &[usize]) -> Vec<Perm> {
    let g = cover.graph;
    let m = cover.m;
    let mut pi: Vec<Option<Perm>> = vec![None; g.n()];
    let starts = roots.iter().copied().chain(0..g.n());
    for start in starts {
        if pi[start].is_some() {
            continue;
        }
        pi[start] = Some(Perm::identity(m));
        let mut queue = alloc::collections::VecDeque::from([start]);
        while let Some(p) = queue.pop_front() {
            for &x in g.neighbors(p) {
                if pi[x].is_none() {
                    // π_x = π_p ∘ σ_{p→x}⁻¹ makes the tree edge the identity
                    let step = cover.oriented(p, x).inverse();
                    pi[x] = Some(step.then(pi[p].as_ref().expect("visited")));
                    queue.push_back(x);
                }
            }
        }
    }
    pi.into_iter().map(|p| p.expect("every vertex reached")).collect()
}

/// True iff some fiber relabeling turns every matching into the identity.
pub fn is_canonically_labeled(cover: &DPCover<'_>) -> bool {
    let roots = [cover.graph.gauge_root()];
    cover
        .relabel(&gauge(cover, &roots))
        .map(|c| c.is_identity())
        .unwrap_or(false)
}

/// Twist counts of a cone cover measured on the edges of the base graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistStats {
    /// `(edge index, x_i)` for every edge not incident to the apex, where
    /// `x_i` counts matched pairs joining different colors.
    pub per_edge: Vec<(usize, usize)>,
    pub total: usize,
}

/// Requires every apex edge to carry the identity (star normal form).
pub fn twist_stats(cover: &DPCover<'_>, apex: usize) -> Result<TwistStats> {
    let g = cover.graph;
    if apex >= g.n() || g.degree(apex) + 1 != g.n() {
        return Err(Error::Precondition(format!("vertex {apex} is not the apex of a cone")));
    }
    let mut per_edge = Vec::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let s = &cover.sigma[e];
        if u == apex || v == apex {
            if !s.is_identity() {
                return Err(Error::Precondition(format!(
                    "apex edge {u}-{v} carries {s}; normalize on the star first"
                )));
            }
        } else {
            per_edge.push((e, cover.m - s.fixed_points()));
        }
    }
    let total = per_edge.iter().map(|&(_, x)| x).sum();
    Ok(TwistStats { per_edge, total })
}

/// Largest `m!` for which the permutation table is materialized.
pub const MAX_PERM_TABLE: u64 = 40_320;

/// The space of normalized covers of a connected graph at fold `m`.
///
/// Spanning-tree edges (BFS from the gauge root) carry the identity; each
/// cotree edge ranges over all `m!` permutations in lexicographic order.
/// Covers are addressed by a mixed-radix rank with the first cotree edge
/// most significant, so rank order is lexicographic order of the
/// permutation tuples. With `reduced` set, only the lexicographically
/// least tuple of each simultaneous-conjugation orbit is visited.
pub struct CoverSpace<'g> {
    graph: &'g Graph,
    m: usize,
    root: usize,
    cotree: Vec<usize>,
    perms: Vec<Perm>,
    inverses: Vec<Perm>,
    reduced: bool,
    len: u64,
}

impl<'g> CoverSpace<'g> {
    /// `budget` bounds the number of covers visited: orbits when `reduced`,
    /// all normalized covers otherwise.
    pub fn new(graph: &'g Graph, m: usize, reduced: bool, budget: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Precondition("covers need m >= 1".into()));
        }
        if !graph.is_connected() {
            return Err(Error::Disconnected {
                components: graph.components().len(),
            });
        }
        let root = graph.gauge_root();
        let tree = graph.spanning_tree_from(root)?;
        let cotree: Vec<usize> = (0..graph.edge_count()).filter(|&e| !tree.contains(e)).collect();
        let k = cotree.len();
        let visited = if reduced {
            orbit_count(m, k)
        } else {
            unreduced_count(m, k)
        };
        if visited > BigUint::from(budget) {
            let what = if reduced { "conjugation orbits" } else { "covers" };
            return Err(Error::capacity(what, visited, budget));
        }
        let fact = factorial(m).filter(|&f| f <= MAX_PERM_TABLE || k == 0);
        let len = fact
            .and_then(|f| f.checked_pow(k as u32))
            .ok_or_else(|| Error::capacity("cover rank space", unreduced_count(m, k), u64::MAX))?;
        let perms = if k == 0 { Vec::new() } else { Perm::all(m) };
        let inverses = perms.iter().map(Perm::inverse).collect();
        Ok(CoverSpace {
            graph,
            m,
            root,
            cotree,
            perms,
            inverses,
            reduced,
            len,
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn cotree(&self) -> &[usize] {
        &self.cotree
    }

    pub fn tree(&self) -> EdgeSubset {
        let mut t = EdgeSubset::empty(self.graph.edge_count());
        (0..self.graph.edge_count())
            .filter(|e| !self.cotree.contains(e))
            .for_each(|e| t.insert(e));
        t
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// Size of the rank space, `(m!)^k` for `k` cotree edges.
    pub fn rank_len(&self) -> u64 {
        self.len
    }

    /// Number of covers this space visits.
    pub fn count(&self) -> BigUint {
        if self.reduced {
            orbit_count(self.m, self.cotree.len())
        } else {
            BigUint::from(self.len)
        }
    }

    fn digits(&self, mut rank: u64) -> Vec<usize> {
        let radix = self.perms.len() as u64;
        let mut digits = vec![0usize; self.cotree.len()];
        for d in digits.iter_mut().rev() {
            *d = (rank % radix) as usize;
            rank /= radix;
        }
        digits
    }

    fn build(&self, digits: &[usize]) -> DPCover<'g> {
        let mut sigma = vec![Perm::identity(self.m); self.graph.edge_count()];
        for (&e, &d) in self.cotree.iter().zip(digits) {
            sigma[e] = self.perms[d].clone();
        }
        DPCover {
            graph: self.graph,
            m: self.m,
            sigma,
        }
    }

    /// The cover at `rank` (ignores the orbit filter).
    pub fn cover_at(&self, rank: u64) -> DPCover<'g> {
        assert!(rank < self.len, "rank out of range");
        self.build(&self.digits(rank))
    }

    /// Rank of a normalized cover of this space's graph.
    pub fn rank_of(&self, cover: &DPCover<'_>) -> Result<u64> {
        let tree = self.tree();
        if tree.iter().any(|e| !cover.sigma[e].is_identity()) {
            return Err(Error::Precondition("cover is not in this space's normal form".into()));
        }
        let radix = self.perms.len() as u64;
        Ok(self
            .cotree
            .iter()
            .fold(0u64, |acc, &e| acc * radix + cover.sigma[e].lex_rank()))
    }

    /// True iff the tuple at `rank` is the least member of its orbit.
    pub fn is_representative(&self, rank: u64) -> bool {
        let digits = self.digits(rank);
        let mut stab: Vec<usize> = (0..self.perms.len()).collect();
        digits.iter().enumerate().all(|(level, &d)| {
            match self.refine(level, d, &stab) {
                Some(next) => {
                    stab = next;
                    true
                }
                None => false,
            }
        })
    }

    /// Stabilizer of the prefix extended by digit `d`, or `None` if some
    /// conjugate of the extended prefix is lexicographically smaller.
    fn refine(&self, level: usize, d: usize, stab: &[usize]) -> Option<Vec<usize>> {
        let sigma = &self.perms[d];
        if level == 0 {
            if !sigma.is_class_representative() {
                return None;
            }
            return Some(
                stab.iter()
                    .copied()
                    .filter(|&p| sigma.cmp_conjugate(&self.perms[p], &self.inverses[p]) == Ordering::Equal)
                    .collect(),
            );
        }
        let mut next = Vec::new();
        for &p in stab {
            match sigma.cmp_conjugate(&self.perms[p], &self.inverses[p]) {
                Ordering::Less => return None,
                Ordering::Equal => next.push(p),
                Ordering::Greater => {}
            }
        }
        Some(next)
    }

    /// Visits, in rank order, every cover with rank in `[lo, hi)` (only orbit
    /// representatives when reduced). Stops early when `visit` breaks.
    pub fn for_each_in_range<F>(&self, lo: u64, hi: u64, mut visit: F) -> ControlFlow<()>
    where
        F: FnMut(u64, &DPCover<'g>) -> ControlFlow<()>,
    {
        let hi = hi.min(self.len);
        if lo >= hi {
            return ControlFlow::Continue(());
        }
        if self.cotree.is_empty() {
            return visit(0, &self.build(&[]));
        }
        let stab: Vec<usize> = (0..self.perms.len()).collect();
        let mut digits = vec![0usize; self.cotree.len()];
        self.descend(0, 0, &stab, &mut digits, lo, hi, &mut visit)
    }

    #[allow(clippy::too_many_arguments)]
    fn descend<F>(
        &self,
        level: usize,
        prefix: u64,
        stab: &[usize],
        digits: &mut Vec<usize>,
        lo: u64,
        hi: u64,
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(u64, &DPCover<'g>) -> ControlFlow<()>,
    {
        let radix = self.perms.len() as u64;
        let below = radix.pow((self.cotree.len() - level - 1) as u32);
        for d in 0..self.perms.len() {
            let start = (prefix * radix + d as u64) * below;
            let end = start + below;
            if end <= lo {
                continue;
            }
            if start >= hi {
                break;
            }
            let next_stab;
            let stab_ref = if self.reduced {
                match self.refine(level, d, stab) {
                    Some(s) => {
                        next_stab = s;
                        &next_stab[..]
                    }
                    None => continue,
                }
            } else {
                stab
            };
            digits[level] = d;
            if level + 1 == self.cotree.len() {
                visit(start, &self.build(digits))?;
            } else {
                self.descend(level + 1, prefix * radix + d as u64, stab_ref, digits, lo, hi, visit)?;
            }
        }
        ControlFlow::Continue(())
    }

    /// All visited covers with their ranks.
    pub fn collect(&self) -> Vec<(u64, DPCover<'g>)> {
        let mut out = Vec::new();
        let _ = self.for_each_in_range(0, self.len, |r, c| {
            out.push((r, c.clone()));
            ControlFlow::Continue(())
        });
        out
    }
}

/// `(m!)^k`.
pub fn unreduced_count(m: usize, k: usize) -> BigUint {
    let fact: BigUint = (1..=m).map(BigUint::from).product();
    num_traits::pow(fact, k)
}

/// Number of orbits of `S_m` acting by simultaneous conjugation on `k`-tuples
/// of permutations: `Σ_λ z_λ^{k-1}` over cycle types `λ ⊢ m`, where `z_λ`
/// is the centralizer order (Burnside's lemma).
pub fn orbit_count(m: usize, k: usize) -> BigUint {
    if k == 0 {
        return BigUint::one();
    }
    let mut total = BigUint::zero();
    for_each_partition(m, m, &mut Vec::new(), &mut |parts| {
        total += num_traits::pow(centralizer_order(parts), k - 1);
    });
    total
}

fn centralizer_order(parts: &[usize]) -> BigUint {
    let mut z = BigUint::one();
    let mut i = 0;
    while i < parts.len() {
        let len = parts[i];
        let mult = parts[i..].iter().take_while(|&&p| p == len).count();
        for j in 1..=mult {
            z *= BigUint::from(len) * BigUint::from(j);
        }
        i += mult;
    }
    z
}

fn for_each_partition(rest: usize, max: usize, parts: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if rest == 0 {
        f(parts);
        return;
    }
    for part in (1..=rest.min(max)).rev() {
        parts.push(part);
        for_each_partition(rest - part, part, parts, f);
        parts.pop();
    }
}

/// Convenience for budgets expressed as big integers.
pub fn fits_budget(count: &BigUint, budget: u64) -> bool {
    count.to_u64().is_some_and(|c| c <= budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, path, wheel};
    use alloc::collections::BTreeSet;
    use rand::SeedableRng;

    #[test]
    fn canonical_covers() {
        let k2 = complete(2);
        let c = canonical_cover(&k2, 3);
        assert_eq!(c.sigmas(), &[Perm::identity(3)]);
        let c4 = cycle(4);
        assert_eq!(canonical_cover(&c4, 2).sigmas().len(), 4);
        assert!(is_canonically_labeled(&canonical_cover(&c4, 2)));
    }

    #[test]
    fn tree_covers_normalize_to_identity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let t = path(6);
        for _ in 0..20 {
            let c = random_cover(&t, 4, &mut rng);
            assert!(normalize(&c).unwrap().is_identity());
            assert!(is_canonically_labeled(&c));
        }
    }

    #[test]
    fn canonical_cover_is_fixed_point() {
        let c4 = cycle(4);
        let c = canonical_cover(&c4, 3);
        assert_eq!(normalize(&c).unwrap(), c);
    }

    #[test]
    fn tree_twist_moves_to_cotree() {
        let c4 = cycle(4);
        let tau = Perm::transposition(3, 0, 1);
        // edges (0,1) (0,3) (1,2) (2,3); BFS tree from 0 is edges 0,1,2
        let c = canonical_cover(&c4, 3).with_sigma(1, tau.clone()).unwrap();
        let n = normalize(&c).unwrap();
        assert!(n.sigma(0).is_identity() && n.sigma(1).is_identity() && n.sigma(2).is_identity());
        assert_eq!(n.sigma(3).cycle_type(), tau.cycle_type());
        assert!(!is_canonically_labeled(&c));
    }

    #[test]
    fn twist_examples() {
        let w4 = wheel(4);
        let c = canonical_cover(&w4, 3);
        assert_eq!(twist_stats(&c, 4).unwrap().total, 0);
        // edge (0,1) is a rim edge
        let t = c.clone().with_sigma(0, Perm::transposition(3, 0, 1)).unwrap();
        assert_eq!(twist_stats(&t, 4).unwrap().total, 2);
        let r = c.clone().with_sigma(0, Perm::rotation(3, 3)).unwrap();
        assert_eq!(twist_stats(&r, 4).unwrap().total, 3);
        let spoke = w4.edge_index(0, 4).unwrap();
        let bad = c.with_sigma(spoke, Perm::rotation(3, 3)).unwrap();
        assert!(twist_stats(&bad, 4).is_err());
    }

    #[test]
    fn enumeration_counts() {
        let c4 = cycle(4);
        let space = CoverSpace::new(&c4, 2, false, 100).unwrap();
        assert_eq!(space.collect().len(), 2);
        let space = CoverSpace::new(&c4, 2, true, 100).unwrap();
        assert_eq!(space.collect().len(), 2);
        let space = CoverSpace::new(&c4, 3, false, 100).unwrap();
        assert_eq!(space.collect().len(), 6);
        let reps = CoverSpace::new(&c4, 3, true, 100).unwrap().collect();
        let types: Vec<_> = reps.iter().map(|(_, c)| c.sigma(3).cycle_type()).collect();
        assert_eq!(types, [vec![1, 1, 1], vec![1, 2], vec![3]]);
        let t = path(5);
        assert_eq!(CoverSpace::new(&t, 4, true, 1).unwrap().collect().len(), 1);
    }

    #[test]
    fn budget_errors_report_exact_counts() {
        let k4 = complete(4);
        // cotree rank 3 at m = 4: 24^3 covers
        let err = CoverSpace::new(&k4, 4, false, 100).err().unwrap();
        assert_eq!(
            err,
            Error::Capacity {
                what: "covers",
                required: "13824".into(),
                limit: "100".into()
            }
        );
        assert!(CoverSpace::new(&Graph::new(3, [(0, 1)]).unwrap(), 2, true, 10).is_err());
    }

    #[test]
    fn representatives_match_brute_force_orbits() {
        // oracle: close every tuple under conjugation by all of S_m
        for (g, m) in [(cycle(4), 3), (complete(4), 3), (cycle(3).cone(), 2), (wheel(4), 2)] {
            let full = CoverSpace::new(&g, m, false, u64::MAX).unwrap();
            let perms = Perm::all(m);
            let mut least = BTreeSet::new();
            for (_, c) in full.collect() {
                let cot: Vec<Perm> = full.cotree().iter().map(|&e| c.sigma(e).clone()).collect();
                let min = perms
                    .iter()
                    .map(|pi| cot.iter().map(|s| s.conjugate_by(pi)).collect::<Vec<_>>())
                    .min()
                    .unwrap();
                least.insert(min);
            }
            let reduced = CoverSpace::new(&g, m, true, u64::MAX).unwrap();
            let reps: BTreeSet<Vec<Perm>> = reduced
                .collect()
                .into_iter()
                .map(|(_, c)| reduced.cotree().iter().map(|&e| c.sigma(e).clone()).collect())
                .collect();
            assert_eq!(reps, least);
            assert_eq!(BigUint::from(least.len()), orbit_count(m, full.cotree().len()));
        }
    }

    #[test]
    fn ranges_partition_the_stream() {
        let k4 = complete(4);
        let space = CoverSpace::new(&k4, 3, true, u64::MAX).unwrap();
        let all: Vec<u64> = space.collect().into_iter().map(|(r, _)| r).collect();
        let mut pieces = Vec::new();
        let step = space.rank_len() / 7 + 1;
        let mut lo = 0;
        while lo < space.rank_len() {
            let _ = space.for_each_in_range(lo, lo + step, |r, c| {
                assert_eq!(space.rank_of(c).unwrap(), r);
                assert!(space.is_representative(r));
                pieces.push(r);
                ControlFlow::Continue(())
            });
            lo += step;
        }
        assert_eq!(pieces, all);
    }

    #[test]
    fn orbit_counts() {
        // one tuple: conjugacy classes = partitions of m
        assert_eq!(orbit_count(6, 1), BigUint::from(11u32));
        assert_eq!(orbit_count(3, 0), BigUint::one());
        // pairs in S_3: 11 orbits (commuting-pair count 18 / ... via Burnside)
        assert_eq!(orbit_count(3, 2), BigUint::from(11u32));
    }
}
