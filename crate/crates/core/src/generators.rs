//! Named graph families and the built-in verification corpus.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// The cycle `C_n`, `n >= 3`.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycles need at least three vertices");
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
}

/// The complete graph `K_n`, `n >= 1`.
pub fn complete(n: usize) -> Graph {
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    Graph::new(n, edges).expect("valid complete graph")
}

/// The path on `n` vertices.
pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
}

/// The wheel `W_k = K_1 ∨ C_k`.
pub fn wheel(k: usize) -> Graph {
    cycle(k).cone()
}

/// A `g`-cycle and a `(g+1)`-cycle sharing exactly one vertex (vertex 0).
pub fn glue_cycles(g: usize) -> Graph {
    assert!(g >= 3, "glued cycles need g >= 3");
    let n = 2 * g;
    let mut edges = Vec::new();
    // first cycle on 0..g
    for i in 0..g {
        edges.push((i, (i + 1) % g));
    }
    // second cycle 0, g, g+1, ..., 2g-1, back to 0
    let mut prev = 0;
    for v in g..n {
        edges.push((prev, v));
        prev = v;
    }
    edges.push((prev, 0));
    Graph::new(n, edges).expect("valid glued cycles")
}

/// Uniformly random labeled tree on `n` vertices via a Prüfer sequence.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Graph {
    assert!(n >= 1);
    if n <= 2 {
        return path(n);
    }
    let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = alloc::vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut leaves: BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &c in &code {
        let leaf = leaves.pop_first().expect("a leaf always exists");
        edges.push((leaf, c));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.insert(c);
        }
    }
    let a = leaves.pop_first().expect("two leaves remain");
    let b = leaves.pop_first().expect("two leaves remain");
    edges.push((a, b));
    Graph::new(n, edges).expect("valid tree")
}

/// One representative of every isomorphism class of connected graphs on
/// `n` vertices (`1 <= n <= 6`), in a deterministic order.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    assert!((1..=6).contains(&n), "corpus enumeration supports n <= 6");
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let pair_index = |u: usize, v: usize| {
        pairs
            .iter()
            .position(|&p| p == (u.min(v), u.max(v)))
            .expect("pair")
    };
    // edge-index image of each vertex permutation
    let perms = crate::perm::Perm::all(n);
    let images: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| {
            pairs
                .iter()
                .map(|&(u, v)| pair_index(p.apply(u), p.apply(v)))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        // keep only the numerically smallest labeling of each class
        let smaller = images.iter().any(|img| {
            let mut m = 0u64;
            let mut rest = mask;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                m |= 1 << img[i];
            }
            m < mask
        });
        if smaller {
            continue;
        }
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e);
        let g = Graph::new(n, edges).expect("valid");
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}

/// Builds a graph from a generator spec: `C<k>`, `K<k>`, `P<k>`, `W<k>`,
/// `glue:<g>` (also `glue-cycles:<g>`), `cone:<spec>`, and the spaced
/// forms `Cn <k>`, `Kn <k>`, `Pn <k>`, `glue-cycles <g>`, `cone <spec>`.
pub fn from_spec(spec: &str) -> Result<Graph> {
    let spec = spec.trim();
    let bad = || Error::Parse(format!("unknown graph spec {spec:?}"));
    if let Some(inner) = spec
        .strip_prefix("cone:")
        .or_else(|| spec.strip_prefix("cone "))
    {
        return Ok(from_spec(inner)?.cone());
    }
    let (name, arg) = match spec.split_once([':', ' ']) {
        Some((name, arg)) => (name.trim(), arg.trim()),
        None => {
            let split = spec.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?;
            spec.split_at(split)
        }
    };
    let k: usize = arg.parse().map_err(|_| bad())?;
    let need = |min: usize| {
        if k < min {
            Err(Error::Precondition(format!("{spec:?}: size must be at least {min}")))
        } else {
            Ok(())
        }
    };
    match name {
        "C" | "Cn" => need(3).map(|_| cycle(k)),
        "K" | "Kn" => need(1).map(|_| complete(k)),
        "P" | "Pn" => need(1).map(|_| path(k)),
        "W" | "Wn" => need(3).map(|_| wheel(k)),
        "glue" | "glue-cycles" => need(3).map(|_| glue_cycles(k)),
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn family_shapes() {
        assert_eq!(cycle(4).edge_count(), 4);
        assert_eq!(complete(5).edge_count(), 10);
        assert_eq!(path(1).edge_count(), 0);
        let g = glue_cycles(3);
        assert_eq!((g.n(), g.edge_count(), g.girth()), (6, 7, Some(3)));
        assert_eq!(g.count_cycles_of_length(3), 1);
        assert_eq!(g.count_cycles_of_length(4), 1);
        assert_eq!(glue_cycles(5).n(), 10);
    }

    #[test]
    fn connected_graph_counts_match_known_sequence() {
        // OEIS A001349
        let counts: Vec<usize> = (1..=6).map(|n| connected_graphs(n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 6, 21, 112]);
    }

    #[test]
    fn random_trees_are_trees() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in 1..12 {
            let t = random_tree(n, &mut rng);
            assert_eq!(t.edge_count(), n - 1);
            assert!(t.is_connected());
        }
    }

    #[test]
    fn specs() {
        assert_eq!(from_spec("C4").unwrap(), cycle(4));
        assert_eq!(from_spec("Kn 3").unwrap(), complete(3));
        assert_eq!(from_spec("cone:C4").unwrap(), wheel(4));
        assert_eq!(from_spec("W4").unwrap(), wheel(4));
        assert_eq!(from_spec("glue:3").unwrap(), glue_cycles(3));
        assert_eq!(from_spec("glue-cycles 3").unwrap(), glue_cycles(3));
        assert!(from_spec("Q7").is_err());
        assert!(from_spec("C2").is_err());
    }
}
