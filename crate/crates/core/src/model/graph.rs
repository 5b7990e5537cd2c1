use std::collections::BTreeSet;
use std::fmt;

use num_rational::Rational64;
use serde::Serialize;
use thiserror::Error;

/// Exact rational used for densities and polynomial coefficients.
pub type Rat = Rational64;

/// Binomial coefficient as an exact rational-friendly i64.
pub fn binom(n: u64, k: u64) -> i64 {
    num_integer::binomial(n as i64, k as i64)
}

/// Serialize a rational as the string "p/q" (or "p" for integers).
pub fn serialize_rat<S: serde::Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Serialize a list of rationals as "p/q" strings.
pub fn serialize_rats<S: serde::Serializer>(rs: &[Rat], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(rs.len()))?;
    for r in rs {
        seq.serialize_element(&r.to_string())?;
    }
    seq.end()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: u32, n: u32 },
    #[error("loop {u}-{u} not allowed in a simple graph")]
    LoopInSimpleGraph { u: u32 },
    #[error("edge has a repeated vertex but is not in a pattern graph")]
    RepeatedVertex,
    #[error("edge arity {got} does not match class arity {expected}")]
    ArityMismatch { got: usize, expected: usize },
    #[error("duplicate class label in pattern")]
    DuplicateClass,
    #[error("n = {n} is too small for an edge of arity {arity}")]
    TooSmall { n: u32, arity: usize },
}

/// One of the two edge colors of a 2-colored graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::Red => write!(f, "red"),
            Color::Blue => write!(f, "blue"),
        }
    }
}

/// Label of an edge class. `Red`/`Blue` are the arity-2 classes of a
/// 2-colored graph; `E2`/`E3` are the arity classes of a {2,3}-graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassLabel {
    Red,
    Blue,
    E2,
    E3,
}

impl ClassLabel {
    pub fn arity(self) -> usize {
        match self {
            ClassLabel::Red | ClassLabel::Blue | ClassLabel::E2 => 2,
            ClassLabel::E3 => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ClassLabel::Red => "red",
            ClassLabel::Blue => "blue",
            ClassLabel::E2 => "e2",
            ClassLabel::E3 => "e3",
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

fn check_simple_pair(n: u32, u: u32, v: u32) -> Result<[u32; 2], GraphError> {
    for &x in &[u, v] {
        if x < 1 || x > n {
            return Err(GraphError::VertexOutOfRange { vertex: x, n });
        }
    }
    if u == v {
        return Err(GraphError::LoopInSimpleGraph { u });
    }
    Ok([u.min(v), u.max(v)])
}

fn check_simple_triple(n: u32, mut t: [u32; 3]) -> Result<[u32; 3], GraphError> {
    for &x in &t {
        if x < 1 || x > n {
            return Err(GraphError::VertexOutOfRange { vertex: x, n });
        }
    }
    t.sort_unstable();
    if t[0] == t[1] || t[1] == t[2] {
        return Err(GraphError::RepeatedVertex);
    }
    Ok(t)
}

/// A simple 2-edge-colored graph on vertices 1..=n. The red and blue edge
/// sets may intersect; a pair in both is a double-colored edge and counts
/// twice toward the edge count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColoredGraph {
    n: u32,
    red: BTreeSet<[u32; 2]>,
    blue: BTreeSet<[u32; 2]>,
}

impl ColoredGraph {
    pub fn new(
        n: u32,
        red: impl IntoIterator<Item = (u32, u32)>,
        blue: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<Self, GraphError> {
        let mut r = BTreeSet::new();
        for (u, v) in red {
            r.insert(check_simple_pair(n, u, v)?);
        }
        let mut b = BTreeSet::new();
        for (u, v) in blue {
            b.insert(check_simple_pair(n, u, v)?);
        }
        Ok(ColoredGraph { n, red: r, blue: b })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn red(&self) -> &BTreeSet<[u32; 2]> {
        &self.red
    }

    pub fn blue(&self) -> &BTreeSet<[u32; 2]> {
        &self.blue
    }

    pub fn class(&self, color: Color) -> &BTreeSet<[u32; 2]> {
        match color {
            Color::Red => &self.red,
            Color::Blue => &self.blue,
        }
    }

    /// |E_r| + |E_b|; a double-colored edge contributes 2.
    pub fn edge_count(&self) -> usize {
        self.red.len() + self.blue.len()
    }

    pub fn double_edges(&self) -> impl Iterator<Item = [u32; 2]> + '_ {
        self.red.intersection(&self.blue).copied()
    }

    /// At least one edge in each color class.
    pub fn is_proper(&self) -> bool {
        !self.red.is_empty() && !self.blue.is_empty()
    }

    pub fn has_edge(&self, color: Color, u: u32, v: u32) -> bool {
        self.class(color).contains(&[u.min(v), u.max(v)])
    }

    /// Complete graph on n vertices with every pair in both colors.
    pub fn complete_double(n: u32) -> Self {
        let mut red = BTreeSet::new();
        for u in 1..=n {
            for v in (u + 1)..=n {
                red.insert([u, v]);
            }
        }
        ColoredGraph { n, blue: red.clone(), red }
    }

    pub fn as_pattern(&self) -> PatternGraph {
        PatternGraph {
            n: self.n,
            classes: vec![
                (
                    ClassLabel::Red,
                    self.red.iter().map(|e| e.to_vec()).collect(),
                ),
                (
                    ClassLabel::Blue,
                    self.blue.iter().map(|e| e.to_vec()).collect(),
                ),
            ],
        }
    }
}

/// A {2,3}-hypergraph on vertices 1..=n with simple 2-edges and 3-edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MixedGraph {
    n: u32,
    e2: BTreeSet<[u32; 2]>,
    e3: BTreeSet<[u32; 3]>,
}

impl MixedGraph {
    pub fn new(
        n: u32,
        e2: impl IntoIterator<Item = (u32, u32)>,
        e3: impl IntoIterator<Item = (u32, u32, u32)>,
    ) -> Result<Self, GraphError> {
        let mut p = BTreeSet::new();
        for (u, v) in e2 {
            p.insert(check_simple_pair(n, u, v)?);
        }
        let mut t = BTreeSet::new();
        for (a, b, c) in e3 {
            t.insert(check_simple_triple(n, [a, b, c])?);
        }
        Ok(MixedGraph { n, e2: p, e3: t })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn e2(&self) -> &BTreeSet<[u32; 2]> {
        &self.e2
    }

    pub fn e3(&self) -> &BTreeSet<[u32; 3]> {
        &self.e3
    }

    pub fn edge_count(&self) -> usize {
        self.e2.len() + self.e3.len()
    }

    /// Complete {2,3}-graph: all pairs and all triples.
    pub fn complete(n: u32) -> Self {
        let mut e2 = BTreeSet::new();
        let mut e3 = BTreeSet::new();
        for u in 1..=n {
            for v in (u + 1)..=n {
                e2.insert([u, v]);
                for w in (v + 1)..=n {
                    e3.insert([u, v, w]);
                }
            }
        }
        MixedGraph { n, e2, e3 }
    }

    /// Remove vertex v and all incident edges; remaining vertices are
    /// renumbered by shifting labels above v down by one.
    pub fn remove_vertex(&self, v: u32) -> MixedGraph {
        let shift = |x: u32| if x > v { x - 1 } else { x };
        let e2 = self
            .e2
            .iter()
            .filter(|e| !e.contains(&v))
            .map(|e| [shift(e[0]), shift(e[1])])
            .collect();
        let e3 = self
            .e3
            .iter()
            .filter(|e| !e.contains(&v))
            .map(|e| [shift(e[0]), shift(e[1]), shift(e[2])])
            .collect();
        MixedGraph { n: self.n - 1, e2, e3 }
    }

    /// Remove a single 2-edge, keeping the vertex set.
    pub fn remove_2edge(&self, u: u32, v: u32) -> MixedGraph {
        let mut e2 = self.e2.clone();
        e2.remove(&[u.min(v), u.max(v)]);
        MixedGraph { n: self.n, e2, e3: self.e3.clone() }
    }

    pub fn as_pattern(&self) -> PatternGraph {
        PatternGraph {
            n: self.n,
            classes: vec![
                (ClassLabel::E2, self.e2.iter().map(|e| e.to_vec()).collect()),
                (ClassLabel::E3, self.e3.iter().map(|e| e.to_vec()).collect()),
            ],
        }
    }
}

/// An edge template graph: edges are multisets over 1..=n (repeats allowed,
/// so `[x, x]` is a loop at x), grouped into labeled classes of fixed arity.
/// Pattern graphs are the sources of blow-ups and the targets of
/// homomorphism searches.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternGraph {
    n: u32,
    classes: Vec<(ClassLabel, BTreeSet<Vec<u32>>)>,
}

impl PatternGraph {
    pub fn new(
        n: u32,
        classes: Vec<(ClassLabel, Vec<Vec<u32>>)>,
    ) -> Result<Self, GraphError> {
        let mut labels: Vec<ClassLabel> = classes.iter().map(|(l, _)| *l).collect();
        labels.sort_unstable();
        labels.dedup();
        if labels.len() != classes.len() {
            return Err(GraphError::DuplicateClass);
        }
        let mut out = Vec::with_capacity(classes.len());
        for (label, edges) in classes {
            let mut set = BTreeSet::new();
            for mut e in edges {
                if e.len() != label.arity() {
                    return Err(GraphError::ArityMismatch {
                        got: e.len(),
                        expected: label.arity(),
                    });
                }
                for &x in &e {
                    if x < 1 || x > n {
                        return Err(GraphError::VertexOutOfRange { vertex: x, n });
                    }
                }
                e.sort_unstable();
                set.insert(e);
            }
            out.push((label, set));
        }
        Ok(PatternGraph { n, classes: out })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn classes(&self) -> &[(ClassLabel, BTreeSet<Vec<u32>>)] {
        &self.classes
    }

    pub fn labels(&self) -> Vec<ClassLabel> {
        self.classes.iter().map(|(l, _)| *l).collect()
    }

    pub fn class(&self, label: ClassLabel) -> Option<&BTreeSet<Vec<u32>>> {
        self.classes
            .iter()
            .find(|(l, _)| *l == label)
            .map(|(_, s)| s)
    }

    pub fn has_loops(&self) -> bool {
        self.classes.iter().any(|(_, set)| {
            set.iter()
                .any(|e| e.windows(2).any(|w| w[0] == w[1]))
        })
    }

    /// Reinterpret a loop-free pattern as the concrete simple graph it
    /// describes. Returns None if any edge repeats a vertex or the class
    /// structure is not one of {red,blue} / {e2,e3} / {e2} / {e3}.
    pub fn as_simple(&self) -> Option<GraphValue> {
        if self.has_loops() {
            return None;
        }
        let labels = self.labels();
        if labels == [ClassLabel::Red, ClassLabel::Blue] {
            let red = self.class(ClassLabel::Red).unwrap();
            let blue = self.class(ClassLabel::Blue).unwrap();
            let g = ColoredGraph::new(
                self.n,
                red.iter().map(|e| (e[0], e[1])),
                blue.iter().map(|e| (e[0], e[1])),
            )
            .ok()?;
            return Some(GraphValue::Colored(g));
        }
        let e2 = self.class(ClassLabel::E2).cloned().unwrap_or_default();
        let e3 = self.class(ClassLabel::E3).cloned().unwrap_or_default();
        if labels.iter().all(|l| matches!(l, ClassLabel::E2 | ClassLabel::E3)) {
            let g = MixedGraph::new(
                self.n,
                e2.iter().map(|e| (e[0], e[1])),
                e3.iter().map(|e| (e[0], e[1], e[2])),
            )
            .ok()?;
            return Some(GraphValue::Mixed(g));
        }
        None
    }
}

/// Any of the three graph kinds; what `parse` and `builtin` return.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GraphValue {
    Colored(ColoredGraph),
    Mixed(MixedGraph),
    Pattern(PatternGraph),
}

impl GraphValue {
    pub fn n(&self) -> u32 {
        match self {
            GraphValue::Colored(g) => g.n(),
            GraphValue::Mixed(g) => g.n(),
            GraphValue::Pattern(g) => g.n(),
        }
    }

    pub fn to_pattern(&self) -> PatternGraph {
        match self {
            GraphValue::Colored(g) => g.as_pattern(),
            GraphValue::Mixed(g) => g.as_pattern(),
            GraphValue::Pattern(g) => g.clone(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            GraphValue::Colored(_) => "colored",
            GraphValue::Mixed(_) => "mixed",
            GraphValue::Pattern(_) => "pattern",
        }
    }
}

impl From<ColoredGraph> for GraphValue {
    fn from(g: ColoredGraph) -> Self {
        GraphValue::Colored(g)
    }
}

impl From<MixedGraph> for GraphValue {
    fn from(g: MixedGraph) -> Self {
        GraphValue::Mixed(g)
    }
}

impl From<PatternGraph> for GraphValue {
    fn from(g: PatternGraph) -> Self {
        GraphValue::Pattern(g)
    }
}

/// Edge density h_n. For a 2-colored graph this is (|E_r|+|E_b|)/C(n,2);
/// for a {2,3}-graph, |E_2|/C(n,2) + |E_3|/C(n,3). Exact rational.
pub fn density(g: &GraphValue) -> Result<Rat, GraphError> {
    match g {
        GraphValue::Colored(g) => {
            let pairs = binom(g.n() as u64, 2);
            if pairs == 0 {
                if g.edge_count() == 0 {
                    return Ok(Rat::from_integer(0));
                }
                return Err(GraphError::TooSmall { n: g.n(), arity: 2 });
            }
            Ok(Rat::new(g.edge_count() as i64, pairs))
        }
        GraphValue::Mixed(g) => {
            let mut total = Rat::from_integer(0);
            for (count, arity) in [(g.e2().len(), 2u64), (g.e3().len(), 3u64)] {
                if count == 0 {
                    continue;
                }
                let denom = binom(g.n() as u64, arity);
                if denom == 0 {
                    return Err(GraphError::TooSmall {
                        n: g.n(),
                        arity: arity as usize,
                    });
                }
                total += Rat::new(count as i64, denom);
            }
            Ok(total)
        }
        GraphValue::Pattern(p) => match p.as_simple() {
            Some(simple) => density(&simple),
            None => Err(GraphError::RepeatedVertex),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colored_graph_rejects_loops_and_range() {
        assert_eq!(
            ColoredGraph::new(2, [(1, 1)], []).unwrap_err(),
            GraphError::LoopInSimpleGraph { u: 1 }
        );
        assert_eq!(
            ColoredGraph::new(2, [(1, 3)], []).unwrap_err(),
            GraphError::VertexOutOfRange { vertex: 3, n: 2 }
        );
    }

    #[test]
    fn density_of_complete_double_is_two() {
        for n in 2..=6 {
            let g = GraphValue::Colored(ColoredGraph::complete_double(n));
            assert_eq!(density(&g).unwrap(), Rat::from_integer(2));
        }
    }

    #[test]
    fn density_of_complete_mixed_is_two() {
        let g = GraphValue::Mixed(MixedGraph::complete(5));
        assert_eq!(density(&g).unwrap(), Rat::from_integer(2));
    }

    #[test]
    fn density_rejects_small_n_with_edges_present() {
        // A 3-edge cannot even be constructed on 2 vertices, so the error
        // path needs a pair class on n=1: no pairs exist either; an empty
        // graph on 1 vertex has density 0.
        let g = GraphValue::Colored(ColoredGraph::new(1, [], []).unwrap());
        assert_eq!(density(&g).unwrap(), Rat::from_integer(0));
    }

    #[test]
    fn mixed_remove_vertex_renumbers() {
        let g = MixedGraph::new(4, [(1, 2), (3, 4)], [(1, 2, 3)]).unwrap();
        let h = g.remove_vertex(2);
        assert_eq!(h.n(), 3);
        assert_eq!(h.e2().iter().copied().collect::<Vec<_>>(), vec![[2, 3]]);
        assert!(h.e3().is_empty());
    }

    #[test]
    fn pattern_round_trips_simple_graphs() {
        let g = ColoredGraph::new(4, [(1, 2), (3, 4)], [(2, 3)]).unwrap();
        match g.as_pattern().as_simple() {
            Some(GraphValue::Colored(h)) => assert_eq!(g, h),
            other => panic!("unexpected {other:?}"),
        }
    }
}
