use super::graph::{ClassLabel, ColoredGraph, GraphValue, MixedGraph, PatternGraph};

fn colored(n: u32, red: &[(u32, u32)], blue: &[(u32, u32)]) -> GraphValue {
    GraphValue::Colored(
        ColoredGraph::new(n, red.iter().copied(), blue.iter().copied())
            .expect("builtin colored graphs are valid"),
    )
}

fn mixed(n: u32, e2: &[(u32, u32)], e3: &[(u32, u32, u32)]) -> GraphValue {
    GraphValue::Mixed(
        MixedGraph::new(n, e2.iter().copied(), e3.iter().copied())
            .expect("builtin mixed graphs are valid"),
    )
}

fn pattern(n: u32, classes: &[(ClassLabel, &[&[u32]])]) -> GraphValue {
    GraphValue::Pattern(
        PatternGraph::new(
            n,
            classes
                .iter()
                .map(|(l, edges)| (*l, edges.iter().map(|e| e.to_vec()).collect()))
                .collect(),
        )
        .expect("builtin patterns are valid"),
    )
}

/// Names accepted by [`builtin`], in display order.
pub fn builtin_names() -> &'static [&'static str] {
    &[
        "T", "T1", "T2", "T3", "H8", "K3", "K3MINUS", "GA", "GB", "GC", "GD", "GE", "H1", "H2",
        "H3", "H5", "H6", "H9",
    ]
}

/// Look up a named graph. Names are case-insensitive.
pub fn builtin(name: &str) -> Option<GraphValue> {
    use ClassLabel::{Blue, Red, E2, E3};
    let value = match name.to_ascii_uppercase().as_str() {
        // 4-vertex targets of the bipartite classification.
        "T" => colored(4, &[(1, 2), (1, 3), (3, 4)], &[(1, 2), (2, 3), (3, 4)]),
        "T1" => colored(
            4,
            &[(1, 2), (3, 4), (1, 3), (2, 4)],
            &[(1, 2), (3, 4), (1, 4), (2, 3)],
        ),
        // Doubled 4-cycle 12,23,34,14 plus one red and one blue diagonal.
        // The diagonal coloring is fixed so that the H8 -> T2 map in
        // `named_homs` verifies; the mirror labeling (diagonals swapped) is
        // the same graph up to the rotation 1->2->3->4->1.
        "T2" => colored(
            4,
            &[(1, 2), (1, 3), (1, 4), (2, 3), (3, 4)],
            &[(1, 2), (1, 4), (2, 3), (2, 4), (3, 4)],
        ),
        "T3" => colored(4, &[(1, 4), (2, 3), (1, 2), (3, 4)], &[(1, 3), (1, 2), (3, 4)]),
        // The 8-vertex graph generated by the product of the three 3/2-density
        // constructions; 12 red, 12 blue, 4 double edges.
        "H8" => colored(
            8,
            &[
                (1, 2),
                (1, 3),
                (2, 4),
                (3, 4),
                (1, 6),
                (3, 7),
                (4, 8),
                (2, 5),
                (3, 5),
                (1, 8),
                (4, 6),
                (2, 7),
            ],
            &[
                (5, 6),
                (5, 7),
                (6, 8),
                (7, 8),
                (2, 6),
                (1, 5),
                (4, 7),
                (3, 8),
                (3, 5),
                (1, 8),
                (4, 6),
                (2, 7),
            ],
        ),
        "K3" => colored(3, &[(1, 2), (1, 3), (2, 3)], &[(1, 2), (1, 3), (2, 3)]),
        "K3MINUS" => colored(3, &[(1, 2), (1, 3), (2, 3)], &[(1, 2), (1, 3)]),
        // Two-part density constructions as 2-vertex patterns with loops.
        "GA" => pattern(2, &[(Red, &[&[1, 1], &[1, 2]]), (Blue, &[&[1, 2]])]),
        "GB" => pattern(2, &[(Red, &[&[1, 2]]), (Blue, &[&[1, 1], &[1, 2]])]),
        "GC" => pattern(2, &[(Red, &[&[1, 1], &[1, 2]]), (Blue, &[&[1, 2], &[2, 2]])]),
        "GD" => pattern(
            2,
            &[(Red, &[&[1, 2]]), (Blue, &[&[1, 1], &[1, 2], &[2, 2]])],
        ),
        "GE" => pattern(
            2,
            &[(Red, &[&[1, 1], &[1, 2], &[2, 2]]), (Blue, &[&[1, 2]])],
        ),
        // {2,3} patterns behind the three non-uniform density constructions.
        "H1" => pattern(
            3,
            &[
                (E2, &[&[1, 1], &[1, 2], &[1, 3]]),
                (E3, &[&[1, 2, 3]]),
            ],
        ),
        "H2" => pattern(2, &[(E2, &[&[1, 2]]), (E3, &[&[1, 1, 1], &[1, 1, 2]])]),
        "H3" => pattern(2, &[(E2, &[&[1, 1]]), (E3, &[&[1, 1, 2]])]),
        "H5" => mixed(5, &[(1, 2), (1, 3), (3, 4)], &[(1, 2, 5), (1, 3, 5), (3, 4, 5)]),
        "H6" => mixed(6, &[(3, 4), (3, 5)], &[(1, 3, 4), (2, 3, 5), (4, 5, 6)]),
        // Figure-derived; vertex order (AXE, CYE, BYE, BXF, CXF, CXE, BXE,
        // AXF, AYE) = 1..9.
        "H9" => mixed(
            9,
            &[(1, 2), (1, 3), (1, 9), (6, 9), (7, 9)],
            &[
                (1, 2, 4),
                (1, 4, 6),
                (4, 6, 9),
                (1, 3, 5),
                (1, 5, 7),
                (5, 7, 9),
                (2, 7, 8),
                (3, 6, 8),
                (6, 7, 8),
            ],
        ),
        _ => return None,
    };
    Some(value)
}

/// Explicit vertex maps shipped with the registry, as (source, target,
/// image-of-vertex-i) triples. Both are homomorphisms checkable with
/// `hom::verify_hom`.
pub fn named_homs() -> &'static [(&'static str, &'static str, &'static [u32])] {
    &[
        ("H8", "T1", &[4, 3, 2, 1, 1, 2, 4, 3]),
        ("H8", "T2", &[1, 3, 3, 1, 2, 4, 4, 2]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{density, parse, serialize, Rat};

    #[test]
    fn all_names_resolve_and_round_trip() {
        for name in builtin_names() {
            let g = builtin(name).unwrap_or_else(|| panic!("missing builtin {name}"));
            assert_eq!(parse(&serialize(&g)).unwrap(), g, "round trip of {name}");
        }
        assert!(builtin("NOPE").is_none());
        assert!(builtin("t1").is_some());
    }

    #[test]
    fn t_edges_are_canonical() {
        let g = match builtin("T").unwrap() {
            GraphValue::Colored(g) => g,
            _ => unreachable!(),
        };
        assert_eq!(g.n(), 4);
        let red: Vec<[u32; 2]> = g.red().iter().copied().collect();
        let blue: Vec<[u32; 2]> = g.blue().iter().copied().collect();
        assert_eq!(red, vec![[1, 2], [1, 3], [3, 4]]);
        assert_eq!(blue, vec![[1, 2], [2, 3], [3, 4]]);
    }

    #[test]
    fn h8_has_12_red_12_blue_4_double() {
        let g = match builtin("H8").unwrap() {
            GraphValue::Colored(g) => g,
            _ => unreachable!(),
        };
        assert_eq!(g.n(), 8);
        assert_eq!(g.red().len(), 12);
        assert_eq!(g.blue().len(), 12);
        let doubles: Vec<[u32; 2]> = g.double_edges().collect();
        assert_eq!(doubles, vec![[1, 8], [2, 7], [3, 5], [4, 6]]);
    }

    #[test]
    fn t1_matches_its_stated_lists() {
        let g = match builtin("T1").unwrap() {
            GraphValue::Colored(g) => g,
            _ => unreachable!(),
        };
        let red: Vec<[u32; 2]> = g.red().iter().copied().collect();
        assert_eq!(red, vec![[1, 2], [1, 3], [2, 4], [3, 4]]);
        let blue: Vec<[u32; 2]> = g.blue().iter().copied().collect();
        assert_eq!(blue, vec![[1, 2], [1, 4], [2, 3], [3, 4]]);
    }

    #[test]
    fn h5_is_the_stated_mixed_graph() {
        let g = match builtin("H5").unwrap() {
            GraphValue::Mixed(g) => g,
            _ => unreachable!(),
        };
        assert_eq!(g.n(), 5);
        assert_eq!(
            g.e2().iter().copied().collect::<Vec<_>>(),
            vec![[1, 2], [1, 3], [3, 4]]
        );
        assert_eq!(
            g.e3().iter().copied().collect::<Vec<_>>(),
            vec![[1, 2, 5], [1, 3, 5], [3, 4, 5]]
        );
    }

    #[test]
    fn k3_density_is_two() {
        let g = builtin("K3").unwrap();
        assert_eq!(density(&g).unwrap(), Rat::from_integer(2));
    }
}
