//! Color-preserving homomorphism search, copy containment, blow-up and
//! product constructions.
//!
//! A homomorphism maps vertices of the source to vertices of the target so
//! that the image multiset of every class-c edge is a class-c edge of the
//! target. Multiplicities matter: a simple edge whose endpoints are
//! identified lands on a loop, so a loop-free target forces injectivity on
//! every edge.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::model::{ClassLabel, Color, ColoredGraph, GraphValue, MixedGraph, PatternGraph};

/// A total map from source vertices 1..=source_n to target vertices
/// 1..=target_n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexAssignment {
    source_n: u32,
    target_n: u32,
    /// map[i] is the image of vertex i+1.
    map: Vec<u32>,
}

impl VertexAssignment {
    pub fn new(source_n: u32, target_n: u32, map: Vec<u32>) -> Result<Self, HomError> {
        if map.len() != source_n as usize {
            return Err(HomError::SizeMismatch {
                expected: source_n,
                got: map.len() as u32,
            });
        }
        if let Some(&bad) = map.iter().find(|&&x| x < 1 || x > target_n) {
            return Err(HomError::ImageOutOfRange {
                image: bad,
                target_n,
            });
        }
        Ok(VertexAssignment {
            source_n,
            target_n,
            map,
        })
    }

    pub fn identity(n: u32) -> Self {
        VertexAssignment {
            source_n: n,
            target_n: n,
            map: (1..=n).collect(),
        }
    }

    pub fn source_n(&self) -> u32 {
        self.source_n
    }

    pub fn target_n(&self) -> u32 {
        self.target_n
    }

    pub fn image(&self, v: u32) -> u32 {
        self.map[(v - 1) as usize]
    }

    pub fn map(&self) -> &[u32] {
        &self.map
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target_n as usize];
        self.map.iter().all(|&x| {
            let slot = &mut seen[(x - 1) as usize];
            !std::mem::replace(slot, true)
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomError {
    #[error("class structures differ: source {source_labels:?}, target {target_labels:?}")]
    ClassMismatch {
        source_labels: Vec<ClassLabel>,
        target_labels: Vec<ClassLabel>,
    },
    #[error("assignment length {got} does not match source size {expected}")]
    SizeMismatch { expected: u32, got: u32 },
    #[error("assignment image {image} outside 1..={target_n}")]
    ImageOutOfRange { image: u32, target_n: u32 },
    #[error("target has {0} vertices; the search supports at most 64")]
    TargetTooLarge(u32),
}

/// Outcome of checking a candidate homomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum HomVerdict {
    Holds,
    /// First source edge (in class order) whose image is not a target edge.
    Violation { class: ClassLabel, edge: Vec<u32> },
}

impl HomVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, HomVerdict::Holds)
    }
}

fn image_multiset(edge: &[u32], map: &[u32]) -> Vec<u32> {
    let mut img: Vec<u32> = edge.iter().map(|&v| map[(v - 1) as usize]).collect();
    img.sort_unstable();
    img
}

/// Check whether `a` is a homomorphism from `source` to `target`.
pub fn verify_hom(
    source: &PatternGraph,
    target: &PatternGraph,
    a: &VertexAssignment,
) -> Result<HomVerdict, HomError> {
    check_classes(source, target)?;
    if a.source_n() != source.n() || a.target_n() != target.n() {
        return Err(HomError::SizeMismatch {
            expected: source.n(),
            got: a.source_n(),
        });
    }
    for (label, edges) in source.classes() {
        let tgt = target.class(*label).expect("classes checked");
        for e in edges {
            let img = image_multiset(e, a.map());
            if !tgt.contains(&img) {
                return Ok(HomVerdict::Violation {
                    class: *label,
                    edge: e.clone(),
                });
            }
        }
    }
    Ok(HomVerdict::Holds)
}

fn check_classes(source: &PatternGraph, target: &PatternGraph) -> Result<(), HomError> {
    if source.labels() != target.labels() {
        return Err(HomError::ClassMismatch {
            source_labels: source.labels(),
            target_labels: target.labels(),
        });
    }
    Ok(())
}

/// Per-class target index used by the backtracking search.
struct ClassIndex {
    edges: HashSet<Vec<u32>>,
    /// pair_ok[(a-1)*nt + (b-1)]: some edge contains a and b together
    /// (for a == b, contains a with multiplicity >= 2).
    pair_ok: Vec<bool>,
    /// some edge contains a with multiplicity >= 3 (arity-3 classes).
    triple_loop_ok: Vec<bool>,
}

impl ClassIndex {
    fn build(nt: usize, edges: &std::collections::BTreeSet<Vec<u32>>) -> Self {
        let mut pair_ok = vec![false; nt * nt];
        let mut triple_loop_ok = vec![false; nt];
        for e in edges {
            for i in 0..e.len() {
                for j in (i + 1)..e.len() {
                    let (a, b) = (e[i] as usize - 1, e[j] as usize - 1);
                    pair_ok[a * nt + b] = true;
                    pair_ok[b * nt + a] = true;
                }
            }
            let mut run = 1;
            for w in e.windows(2) {
                if w[0] == w[1] {
                    run += 1;
                    if run >= 3 {
                        triple_loop_ok[w[0] as usize - 1] = true;
                    }
                } else {
                    run = 1;
                }
            }
        }
        ClassIndex {
            edges: edges.iter().cloned().collect(),
            pair_ok,
            triple_loop_ok,
        }
    }

    fn compat(&self, nt: usize, a: usize, b: usize) -> bool {
        self.pair_ok[a * nt + b]
    }
}

struct SourceEdge {
    class: usize,
    verts: Vec<u32>,
}

struct Searcher<'a> {
    nt: usize,
    classes: Vec<ClassIndex>,
    edges: Vec<SourceEdge>,
    incident: Vec<Vec<usize>>,
    injective: bool,
    cap: usize,
    assignment: Vec<Option<u32>>,
    used: u64,
    found: Vec<Vec<u32>>,
    target: &'a PatternGraph,
}

impl<'a> Searcher<'a> {
    fn run(
        source: &PatternGraph,
        target: &'a PatternGraph,
        injective: bool,
        cap: usize,
    ) -> Result<Vec<Vec<u32>>, HomError> {
        check_classes(source, target)?;
        if target.n() > 64 {
            return Err(HomError::TargetTooLarge(target.n()));
        }
        let ns = source.n() as usize;
        let nt = target.n() as usize;
        if injective && source.n() > target.n() {
            return Ok(Vec::new());
        }
        let classes: Vec<ClassIndex> = target
            .classes()
            .iter()
            .map(|(_, set)| ClassIndex::build(nt, set))
            .collect();
        let mut edges = Vec::new();
        let mut incident = vec![Vec::new(); ns];
        for (ci, (_, set)) in source.classes().iter().enumerate() {
            for e in set {
                let id = edges.len();
                edges.push(SourceEdge {
                    class: ci,
                    verts: e.clone(),
                });
                let mut seen = Vec::new();
                for &v in e {
                    if !seen.contains(&v) {
                        seen.push(v);
                        incident[(v - 1) as usize].push(id);
                    }
                }
            }
        }
        // Initial candidates: rule out targets without the loops a source
        // vertex requires.
        let full: u64 = if nt == 64 { u64::MAX } else { (1u64 << nt) - 1 };
        let mut cands = vec![full; ns];
        for edge in &edges {
            let idx = &classes[edge.class];
            for &v in &edge.verts {
                let mult = edge.verts.iter().filter(|&&x| x == v).count();
                if mult >= 2 {
                    let mut mask = 0u64;
                    for a in 0..nt {
                        let ok = if mult >= 3 {
                            idx.triple_loop_ok[a]
                        } else {
                            idx.compat(nt, a, a)
                        };
                        if ok {
                            mask |= 1 << a;
                        }
                    }
                    cands[(v - 1) as usize] &= mask;
                }
            }
        }
        let mut searcher = Searcher {
            nt,
            classes,
            edges,
            incident,
            injective,
            cap,
            assignment: vec![None; ns],
            used: 0,
            found: Vec::new(),
            target,
        };
        searcher.recurse(&mut cands);
        Ok(searcher.found)
    }

    fn live(&self, mask: u64) -> u64 {
        if self.injective {
            mask & !self.used
        } else {
            mask
        }
    }

    fn recurse(&mut self, cands: &mut [u64]) -> bool {
        if self.found.len() >= self.cap {
            return true;
        }
        // Most-constrained unassigned vertex; ties broken by index.
        let mut pick = None;
        for (i, slot) in self.assignment.iter().enumerate() {
            if slot.is_none() {
                let count = self.live(cands[i]).count_ones();
                if pick.map_or(true, |(_, best)| count < best) {
                    pick = Some((i, count));
                }
            }
        }
        let (v, count) = match pick {
            Some(p) => p,
            None => {
                self.found
                    .push(self.assignment.iter().map(|a| a.unwrap()).collect());
                return self.found.len() >= self.cap;
            }
        };
        if count == 0 {
            return false;
        }
        let mut options = self.live(cands[v]);
        while options != 0 {
            let bit = options.trailing_zeros() as usize;
            options &= options - 1;
            let a = (bit + 1) as u32;
            self.assignment[v] = Some(a);
            if self.injective {
                self.used |= 1 << bit;
            }
            let mut saved: Vec<u64> = cands.to_vec();
            if self.propagate(v, &mut saved) && self.recurse(&mut saved) {
                return true;
            }
            self.assignment[v] = None;
            if self.injective {
                self.used &= !(1 << bit);
            }
        }
        false
    }

    /// After assigning vertex v, check completed edges and narrow the
    /// candidates of its unassigned co-edge vertices. Returns false when a
    /// completed edge is not in the target class or a candidate set empties.
    fn propagate(&self, v: usize, cands: &mut [u64]) -> bool {
        for &eid in &self.incident[v] {
            let edge = &self.edges[eid];
            let idx = &self.classes[edge.class];
            let mut unassigned: Vec<u32> = Vec::new();
            for &x in &edge.verts {
                if self.assignment[(x - 1) as usize].is_none() && !unassigned.contains(&x) {
                    unassigned.push(x);
                }
            }
            if unassigned.is_empty() {
                let img: Vec<u32> = {
                    let mut img: Vec<u32> = edge
                        .verts
                        .iter()
                        .map(|&x| self.assignment[(x - 1) as usize].unwrap())
                        .collect();
                    img.sort_unstable();
                    img
                };
                if !idx.edges.contains(&img) {
                    return false;
                }
                continue;
            }
            for &u in &unassigned {
                let ui = (u - 1) as usize;
                let mut mask = 0u64;
                let mut rem = self.live(cands[ui]);
                while rem != 0 {
                    let bit = rem.trailing_zeros() as usize;
                    rem &= rem - 1;
                    let ok = edge.verts.iter().all(|&w| {
                        if w == u {
                            return true;
                        }
                        match self.assignment[(w - 1) as usize] {
                            Some(img) => idx.compat(self.nt, img as usize - 1, bit),
                            None => true,
                        }
                    });
                    if ok {
                        mask |= 1 << bit;
                    }
                }
                cands[ui] = mask;
                if mask == 0 {
                    return false;
                }
            }
        }
        let _ = self.target;
        true
    }
}

/// Complete backtracking search for a homomorphism from `source` to
/// `target`. Deterministic: most-constrained vertex first, ties and target
/// candidates in increasing vertex order.
pub fn find_hom(
    source: &PatternGraph,
    target: &PatternGraph,
) -> Result<Option<VertexAssignment>, HomError> {
    let found = Searcher::run(source, target, false, 1)?;
    Ok(found
        .into_iter()
        .next()
        .map(|map| VertexAssignment::new(source.n(), target.n(), map).expect("search output valid")))
}

/// All homomorphisms from `source` to `target`, up to `cap` of them.
pub fn enumerate_homs(
    source: &PatternGraph,
    target: &PatternGraph,
    cap: usize,
) -> Result<Vec<VertexAssignment>, HomError> {
    let found = Searcher::run(source, target, false, cap)?;
    Ok(found
        .into_iter()
        .map(|map| VertexAssignment::new(source.n(), target.n(), map).expect("search output valid"))
        .collect())
}

/// Injective color-preserving embedding of `h` into `g` (a copy of `h` in
/// `g`), or None after a complete search.
pub fn contains_copy(g: &ColoredGraph, h: &ColoredGraph) -> Option<VertexAssignment> {
    let found = Searcher::run(&h.as_pattern(), &g.as_pattern(), true, 1)
        .expect("colored graphs always share class structure");
    found
        .into_iter()
        .next()
        .map(|map| VertexAssignment::new(h.n(), g.n(), map).expect("search output valid"))
}

/// Injective embedding between {2,3}-graphs.
pub fn contains_copy_mixed(g: &MixedGraph, h: &MixedGraph) -> Option<VertexAssignment> {
    let found = Searcher::run(&h.as_pattern(), &g.as_pattern(), true, 1)
        .expect("mixed graphs always share class structure");
    found
        .into_iter()
        .next()
        .map(|map| VertexAssignment::new(h.n(), g.n(), map).expect("search output valid"))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BlowUpError {
    #[error("sizes has length {got}, pattern has {expected} vertices")]
    SizesLength { expected: u32, got: usize },
    #[error("part {index} has size zero")]
    ZeroSize { index: u32 },
    #[error("pattern classes {0:?} do not describe a 2-colored or {{2,3}} graph")]
    UnsupportedClasses(Vec<ClassLabel>),
}

fn combinations(items: &[u32], k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(items: &[u32], k: usize, start: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..items.len() {
            current.push(items[i]);
            rec(items, k, i + 1, current, out);
            current.pop();
        }
    }
    rec(items, k, 0, &mut current, &mut out);
    out
}

/// Blow-up H(s_1,...,s_n): vertex i becomes an independent part of size
/// s_i; an edge multiset expands to every transversal choice, with a
/// multiplicity-m vertex contributing all m-subsets of its part. The output
/// is simple.
pub fn blow_up(pattern: &PatternGraph, sizes: &[u32]) -> Result<GraphValue, BlowUpError> {
    if sizes.len() != pattern.n() as usize {
        return Err(BlowUpError::SizesLength {
            expected: pattern.n(),
            got: sizes.len(),
        });
    }
    if let Some(idx) = sizes.iter().position(|&s| s == 0) {
        return Err(BlowUpError::ZeroSize { index: idx as u32 + 1 });
    }
    let mut part_start = vec![0u32; sizes.len() + 1];
    for (i, &s) in sizes.iter().enumerate() {
        part_start[i + 1] = part_start[i] + s;
    }
    let n_out = part_start[sizes.len()];
    let part = |v: u32| -> Vec<u32> {
        let i = (v - 1) as usize;
        (part_start[i] + 1..=part_start[i + 1]).collect()
    };

    let mut expanded: Vec<(ClassLabel, Vec<Vec<u32>>)> = Vec::new();
    for (label, edges) in pattern.classes() {
        let mut out_edges: Vec<Vec<u32>> = Vec::new();
        for e in edges {
            // Group the multiset into (vertex, multiplicity) runs.
            let mut groups: Vec<(u32, usize)> = Vec::new();
            for &v in e {
                match groups.last_mut() {
                    Some((g, m)) if *g == v => *m += 1,
                    _ => groups.push((v, 1)),
                }
            }
            let choices: Vec<Vec<Vec<u32>>> = groups
                .iter()
                .map(|&(v, m)| combinations(&part(v), m))
                .collect();
            let mut stack: Vec<Vec<u32>> = vec![Vec::new()];
            for group_choices in &choices {
                let mut next = Vec::new();
                for prefix in &stack {
                    for choice in group_choices {
                        let mut e = prefix.clone();
                        e.extend_from_slice(choice);
                        next.push(e);
                    }
                }
                stack = next;
            }
            for mut edge in stack {
                edge.sort_unstable();
                out_edges.push(edge);
            }
        }
        expanded.push((*label, out_edges));
    }

    let labels = pattern.labels();
    if labels == [ClassLabel::Red, ClassLabel::Blue] {
        let red = expanded[0].1.iter().map(|e| (e[0], e[1]));
        let blue = expanded[1].1.iter().map(|e| (e[0], e[1]));
        let g = ColoredGraph::new(n_out, red, blue).expect("blow-up output is simple");
        return Ok(GraphValue::Colored(g));
    }
    if labels.iter().all(|l| matches!(l, ClassLabel::E2 | ClassLabel::E3)) {
        let empty = Vec::new();
        let e2 = expanded
            .iter()
            .find(|(l, _)| *l == ClassLabel::E2)
            .map(|(_, e)| e)
            .unwrap_or(&empty);
        let e3 = expanded
            .iter()
            .find(|(l, _)| *l == ClassLabel::E3)
            .map(|(_, e)| e)
            .unwrap_or(&empty);
        let g = MixedGraph::new(
            n_out,
            e2.iter().map(|e| (e[0], e[1])),
            e3.iter().map(|e| (e[0], e[1], e[2])),
        )
        .expect("blow-up output is simple");
        return Ok(GraphValue::Mixed(g));
    }
    Err(BlowUpError::UnsupportedClasses(labels))
}

const PERMS2: [[usize; 2]; 2] = [[0, 1], [1, 0]];
const PERMS3: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Product G1 x G2 on the cartesian vertex set ((a-1)*n2 + b for the pair
/// (a, b)). Same-class edges combine over all permutation matchings;
/// identical result multisets are deduplicated.
pub fn product(g1: &PatternGraph, g2: &PatternGraph) -> Result<PatternGraph, HomError> {
    if g1.labels() != g2.labels() {
        return Err(HomError::ClassMismatch {
            source_labels: g1.labels(),
            target_labels: g2.labels(),
        });
    }
    let n2 = g2.n();
    let pair = |a: u32, b: u32| (a - 1) * n2 + b;
    let mut classes: Vec<(ClassLabel, Vec<Vec<u32>>)> = Vec::new();
    for (ci, (label, edges1)) in g1.classes().iter().enumerate() {
        let edges2 = &g2.classes()[ci].1;
        let r = label.arity();
        let mut out: Vec<Vec<u32>> = Vec::new();
        for e in edges1 {
            for f in edges2 {
                let sigmas: &[&[usize]] = if r == 2 {
                    &[&PERMS2[0], &PERMS2[1]]
                } else {
                    &[
                        &PERMS3[0], &PERMS3[1], &PERMS3[2], &PERMS3[3], &PERMS3[4], &PERMS3[5],
                    ]
                };
                for sigma in sigmas {
                    let mut edge: Vec<u32> =
                        (0..r).map(|i| pair(e[i], f[sigma[i]])).collect();
                    edge.sort_unstable();
                    out.push(edge);
                }
            }
        }
        classes.push((*label, out));
    }
    Ok(PatternGraph::new(g1.n() * n2, classes).expect("product edges are valid"))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum T1ColoringError {
    #[error("bipartition vector has length {got}, graph has {expected} vertices")]
    Length { expected: u32, got: usize },
    #[error("side of vertex {vertex} must be 1 or 2, got {side}")]
    BadSide { vertex: u32, side: u8 },
    #[error("{color} edge {u}-{v} does not cross the {color} bipartition")]
    NotBipartition { color: Color, u: u32, v: u32 },
}

/// Constructive T1-coloring of a bipartite 2-colored graph from explicit
/// 2-colorings of its red and blue subgraphs (each extended to every
/// vertex). Vertices map by side pair: (1,1) -> 1, (2,2) -> 2, (2,1) -> 3,
/// (1,2) -> 4. The result always verifies against T1.
pub fn t1_coloring(
    h: &ColoredGraph,
    side_red: &[u8],
    side_blue: &[u8],
) -> Result<VertexAssignment, T1ColoringError> {
    let n = h.n();
    for (sides, color) in [(side_red, Color::Red), (side_blue, Color::Blue)] {
        if sides.len() != n as usize {
            return Err(T1ColoringError::Length {
                expected: n,
                got: sides.len(),
            });
        }
        for (i, &s) in sides.iter().enumerate() {
            if s != 1 && s != 2 {
                return Err(T1ColoringError::BadSide {
                    vertex: i as u32 + 1,
                    side: s,
                });
            }
        }
        for e in h.class(color) {
            if sides[(e[0] - 1) as usize] == sides[(e[1] - 1) as usize] {
                return Err(T1ColoringError::NotBipartition {
                    color,
                    u: e[0],
                    v: e[1],
                });
            }
        }
    }
    let map = (0..n as usize)
        .map(|i| match (side_red[i], side_blue[i]) {
            (1, 1) => 1,
            (2, 2) => 2,
            (2, 1) => 3,
            _ => 4,
        })
        .collect();
    Ok(VertexAssignment::new(n, 4, map).expect("side-pair images are in 1..=4"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{builtin, named_homs, GraphValue};

    fn pat(name: &str) -> PatternGraph {
        builtin(name).unwrap().to_pattern()
    }

    fn colored(name: &str) -> ColoredGraph {
        match builtin(name).unwrap() {
            GraphValue::Colored(g) => g,
            _ => panic!("{name} is not colored"),
        }
    }

    #[test]
    fn identity_is_a_hom() {
        for name in ["T", "T1", "H8", "H5", "H9"] {
            let p = pat(name);
            let id = VertexAssignment::identity(p.n());
            assert!(verify_hom(&p, &p, &id).unwrap().holds(), "{name}");
            let found = find_hom(&p, &p).unwrap();
            assert!(found.is_some(), "{name}");
        }
    }

    #[test]
    fn constant_map_on_t_fails_at_edge_12() {
        let t = pat("T");
        let a = VertexAssignment::new(4, 4, vec![1, 1, 1, 1]).unwrap();
        match verify_hom(&t, &t, &a).unwrap() {
            HomVerdict::Violation { edge, .. } => assert_eq!(edge, vec![1, 2]),
            HomVerdict::Holds => panic!("constant map should not be a hom"),
        }
    }

    #[test]
    fn named_maps_verify() {
        for (src, tgt, map) in named_homs() {
            let s = pat(src);
            let t = pat(tgt);
            let a = VertexAssignment::new(s.n(), t.n(), map.to_vec()).unwrap();
            assert!(
                verify_hom(&s, &t, &a).unwrap().holds(),
                "named hom {src} -> {tgt}"
            );
        }
    }

    #[test]
    fn h8_is_not_t_colorable() {
        assert_eq!(find_hom(&pat("H8"), &pat("T")).unwrap(), None);
    }

    #[test]
    fn all_red_triangle_has_no_hom_to_t() {
        // Independent oracle: check all 4^3 maps directly.
        let tri = ColoredGraph::new(3, [(1, 2), (1, 3), (2, 3)], []).unwrap();
        let t = pat("T");
        let mut any = false;
        for a in 1..=4u32 {
            for b in 1..=4u32 {
                for c in 1..=4u32 {
                    let m = VertexAssignment::new(3, 4, vec![a, b, c]).unwrap();
                    any |= verify_hom(&tri.as_pattern(), &t, &m).unwrap().holds();
                }
            }
        }
        assert!(!any);
        assert_eq!(find_hom(&tri.as_pattern(), &t).unwrap(), None);
    }

    #[test]
    fn search_result_always_verifies() {
        let h8 = pat("H8");
        for tgt in ["T1", "T2"] {
            let t = pat(tgt);
            let found = find_hom(&h8, &t).unwrap().expect("H8 maps into T1 and T2");
            assert!(verify_hom(&h8, &t, &found).unwrap().holds());
        }
    }

    #[test]
    fn copy_containment_examples() {
        let complete = ColoredGraph::complete_double(4);
        assert!(contains_copy(&complete, &colored("T")).is_some());
        assert!(contains_copy(&colored("T"), &colored("K3")).is_none());

        // Double triangle abc plus one red and two double edges at w.
        let g = ColoredGraph::new(
            4,
            [(1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4)],
            [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)],
        )
        .unwrap();
        let hit = contains_copy(&g, &colored("T1")).expect("contains T1");
        assert!(hit.is_injective());
    }

    #[test]
    fn blow_up_examples() {
        // Unit sizes reproduce a loop-free pattern.
        let t = pat("T");
        assert_eq!(
            blow_up(&t, &[1, 1, 1, 1]).unwrap(),
            builtin("T").unwrap()
        );

        let doubled = blow_up(&t, &[2, 2, 2, 2]).unwrap();
        match doubled {
            GraphValue::Colored(g) => {
                assert_eq!(g.n(), 8);
                assert_eq!(g.red().len(), 12);
                assert_eq!(g.blue().len(), 12);
            }
            other => panic!("unexpected {other:?}"),
        }

        // GA with parts {1,2} and {3}: the loop expands inside the part.
        let ga = pat("GA");
        match blow_up(&ga, &[2, 1]).unwrap() {
            GraphValue::Colored(g) => {
                let red: Vec<[u32; 2]> = g.red().iter().copied().collect();
                let blue: Vec<[u32; 2]> = g.blue().iter().copied().collect();
                assert_eq!(red, vec![[1, 2], [1, 3], [2, 3]]);
                assert_eq!(blue, vec![[1, 3], [2, 3]]);
            }
            other => panic!("unexpected {other:?}"),
        }

        assert_eq!(
            blow_up(&ga, &[0, 1]).unwrap_err(),
            BlowUpError::ZeroSize { index: 1 }
        );
    }

    #[test]
    fn product_of_loops_is_a_loop() {
        let p = PatternGraph::new(1, vec![(ClassLabel::Red, vec![vec![1, 1]])]).unwrap();
        let q = product(&p, &p).unwrap();
        assert_eq!(q.n(), 1);
        assert_eq!(
            q.class(ClassLabel::Red).unwrap().iter().cloned().collect::<Vec<_>>(),
            vec![vec![1, 1]]
        );
    }

    #[test]
    fn product_ga_gb_is_t_up_to_relabeling() {
        let prod = product(&pat("GA"), &pat("GB")).unwrap();
        assert_eq!(prod.n(), 4);
        // Known relabeling onto T: 1 -> 3, 2 -> 1, 3 -> 2, 4 -> 4.
        let phi = VertexAssignment::new(4, 4, vec![3, 1, 2, 4]).unwrap();
        assert!(verify_hom(&prod, &pat("T"), &phi).unwrap().holds());
        // Homs in both directions (isomorphic up to relabeling).
        assert!(find_hom(&prod, &pat("T")).unwrap().is_some());
        assert!(find_hom(&pat("T"), &prod).unwrap().is_some());
    }

    #[test]
    fn product_is_symmetric_up_to_coordinate_swap() {
        let ab = product(&pat("GA"), &pat("GB")).unwrap();
        let ba = product(&pat("GB"), &pat("GA")).unwrap();
        // Coordinate swap on 2x2 products: (a,b) -> (b,a).
        let swap = VertexAssignment::new(4, 4, vec![1, 3, 2, 4]).unwrap();
        assert!(verify_hom(&ab, &ba, &swap).unwrap().holds());
        assert!(verify_hom(&ba, &ab, &swap).unwrap().holds());
    }

    #[test]
    fn t1_coloring_of_t_verifies() {
        // Red edges of T: 12, 13, 34; blue: 12, 23, 34.
        let t = colored("T");
        let side_red = [1, 2, 2, 1];
        let side_blue = [1, 2, 1, 2];
        let a = t1_coloring(&t, &side_red, &side_blue).unwrap();
        assert!(verify_hom(&t.as_pattern(), &pat("T1"), &a).unwrap().holds());
    }

    #[test]
    fn t1_coloring_single_red_edge() {
        let h = ColoredGraph::new(2, [(1, 2)], []).unwrap();
        let a = t1_coloring(&h, &[1, 2], &[1, 1]).unwrap();
        assert!(verify_hom(&h.as_pattern(), &pat("T1"), &a).unwrap().holds());
    }

    #[test]
    fn t1_coloring_rejects_bad_bipartition() {
        let t = colored("T");
        let err = t1_coloring(&t, &[1, 1, 2, 1], &[1, 2, 1, 2]).unwrap_err();
        assert!(matches!(err, T1ColoringError::NotBipartition { .. }));
    }

    #[test]
    fn class_mismatch_is_an_error() {
        let t = pat("T");
        let h5 = pat("H5");
        assert!(matches!(
            find_hom(&t, &h5),
            Err(HomError::ClassMismatch { .. })
        ));
    }
}
