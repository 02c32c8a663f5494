//! The built-in verification corpus.

use dpchroma_core::generators::{complete, connected_graphs, cycle, glue_cycles};
use dpchroma_core::Graph;

/// Every connected graph on at most five vertices, `C_3..C_8`, `K_2..K_5`,
/// the cones over `C_3..C_5`, and the glued cycles for `g = 3, 5`.
pub fn small() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for n in 1..=5 {
        for (i, g) in connected_graphs(n).into_iter().enumerate() {
            out.push((format!("connected{n}#{i}"), g));
        }
    }
    out.extend((3..=8).map(|k| (format!("C{k}"), cycle(k))));
    out.extend((2..=5).map(|k| (format!("K{k}"), complete(k))));
    out.extend((3..=5).map(|k| (format!("cone:C{k}"), cycle(k).cone())));
    out.extend([3, 5].map(|g| (format!("glue:{g}"), glue_cycles(g))));
    out
}

/// Base graphs whose cones are small enough for the lower-bound sampler
/// at the fold its hypothesis asks for.
pub fn small_cone_bases() -> Vec<(String, Graph)> {
    vec![("C3".into(), cycle(3)), ("C4".into(), cycle(4))]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let c = small();
        assert_eq!(c.len(), 1 + 1 + 2 + 6 + 21 + 6 + 4 + 3 + 2);
        assert!(c.iter().all(|(_, g)| g.is_connected()));
    }
}
