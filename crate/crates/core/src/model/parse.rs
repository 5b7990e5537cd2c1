use serde::Deserialize;
use thiserror::Error;

use super::graph::{ClassLabel, ColoredGraph, GraphError, GraphValue, MixedGraph, PatternGraph};

/// Errors from the text graph format. Every variant carries the 1-based
/// line number it was detected on.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: duplicate {class} edge")]
    DuplicateEdge { line: usize, class: ClassLabel },
    #[error("line {line}: loop in simple graph")]
    LoopInSimpleGraph { line: usize },
    #[error("line {line}: {source}")]
    Graph {
        line: usize,
        source: GraphError,
    },
    #[error("missing `vertices <n>` declaration")]
    MissingVertices,
    #[error("no edge lines and no `colored`/`mixed` kind line; cannot infer graph kind")]
    UnknownKind,
    #[error("invalid JSON graph: {0}")]
    Json(#[from] serde_json::Error),
    #[error("JSON graph violates an invariant: {0}")]
    JsonGraph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Colored,
    Mixed,
}

struct Builder {
    pattern: bool,
    kind: Option<Kind>,
    n: Option<u32>,
    classes: Vec<(ClassLabel, Vec<Vec<u32>>)>,
}

impl Builder {
    fn class_mut(&mut self, label: ClassLabel) -> &mut Vec<Vec<u32>> {
        if let Some(idx) = self.classes.iter().position(|(l, _)| *l == label) {
            return &mut self.classes[idx].1;
        }
        self.classes.push((label, Vec::new()));
        &mut self.classes.last_mut().unwrap().1
    }

    fn set_kind(&mut self, kind: Kind, line: usize) -> Result<(), ParseError> {
        match self.kind {
            None => {
                self.kind = Some(kind);
                Ok(())
            }
            Some(k) if k == kind => Ok(()),
            Some(_) => Err(ParseError::Syntax {
                line,
                msg: "mixing 2-colored and {2,3} edge lines in one graph".into(),
            }),
        }
    }

    fn add_edge(
        &mut self,
        label: ClassLabel,
        mut verts: Vec<u32>,
        line: usize,
    ) -> Result<(), ParseError> {
        let n = self.n.ok_or(ParseError::MissingVertices)?;
        for &x in &verts {
            if x < 1 || x > n {
                return Err(ParseError::Graph {
                    line,
                    source: GraphError::VertexOutOfRange { vertex: x, n },
                });
            }
        }
        verts.sort_unstable();
        let repeated = verts.windows(2).any(|w| w[0] == w[1]);
        if repeated && !self.pattern {
            return Err(ParseError::LoopInSimpleGraph { line });
        }
        let class = self.class_mut(label);
        if class.contains(&verts) {
            return Err(ParseError::DuplicateEdge { line, class: label });
        }
        class.push(verts);
        Ok(())
    }
}

/// Parse the line-oriented graph format:
///
/// ```text
/// # comment
/// pattern            (optional: edges may repeat vertices)
/// colored | mixed    (optional kind hint, required only for empty graphs)
/// vertices 4
/// red 1 2
/// blue 2 3
/// both 1 3           (sugar for one red and one blue edge)
/// e2 1 2
/// e3 1 2 3
/// ```
pub fn parse(text: &str) -> Result<GraphValue, ParseError> {
    let mut b = Builder {
        pattern: false,
        kind: None,
        n: None,
        classes: Vec::new(),
    };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        let head = words.next().unwrap();
        let rest: Vec<&str> = words.collect();
        let parse_verts = |expected: usize| -> Result<Vec<u32>, ParseError> {
            if rest.len() != expected {
                return Err(ParseError::Syntax {
                    line,
                    msg: format!("`{head}` takes {expected} vertex arguments"),
                });
            }
            rest.iter()
                .map(|w| {
                    w.parse::<u32>().map_err(|_| ParseError::Syntax {
                        line,
                        msg: format!("`{w}` is not a vertex index"),
                    })
                })
                .collect()
        };
        match head {
            "pattern" => {
                if !rest.is_empty() {
                    return Err(ParseError::Syntax {
                        line,
                        msg: "`pattern` takes no arguments".into(),
                    });
                }
                b.pattern = true;
            }
            "colored" => b.set_kind(Kind::Colored, line)?,
            "mixed" => b.set_kind(Kind::Mixed, line)?,
            "vertices" => {
                if rest.len() != 1 {
                    return Err(ParseError::Syntax {
                        line,
                        msg: "`vertices` takes one argument".into(),
                    });
                }
                let n = rest[0].parse::<u32>().map_err(|_| ParseError::Syntax {
                    line,
                    msg: format!("`{}` is not a vertex count", rest[0]),
                })?;
                b.n = Some(n);
            }
            "red" => {
                b.set_kind(Kind::Colored, line)?;
                let v = parse_verts(2)?;
                b.add_edge(ClassLabel::Red, v, line)?;
            }
            "blue" => {
                b.set_kind(Kind::Colored, line)?;
                let v = parse_verts(2)?;
                b.add_edge(ClassLabel::Blue, v, line)?;
            }
            "both" => {
                b.set_kind(Kind::Colored, line)?;
                let v = parse_verts(2)?;
                b.add_edge(ClassLabel::Red, v.clone(), line)?;
                b.add_edge(ClassLabel::Blue, v, line)?;
            }
            "e2" => {
                b.set_kind(Kind::Mixed, line)?;
                let v = parse_verts(2)?;
                b.add_edge(ClassLabel::E2, v, line)?;
            }
            "e3" => {
                b.set_kind(Kind::Mixed, line)?;
                let v = parse_verts(3)?;
                b.add_edge(ClassLabel::E3, v, line)?;
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    msg: format!("unknown declaration `{other}`"),
                })
            }
        }
    }
    let n = b.n.ok_or(ParseError::MissingVertices)?;
    let kind = b.kind.ok_or(ParseError::UnknownKind)?;
    let full_classes = |b: &Builder, labels: [ClassLabel; 2]| {
        labels
            .iter()
            .map(|l| {
                (
                    *l,
                    b.classes
                        .iter()
                        .find(|(cl, _)| cl == l)
                        .map(|(_, e)| e.clone())
                        .unwrap_or_default(),
                )
            })
            .collect::<Vec<_>>()
    };
    let mk = |classes| PatternGraph::new(n, classes).map_err(|source| ParseError::Graph {
        line: 0,
        source,
    });
    match (kind, b.pattern) {
        (Kind::Colored, true) => Ok(GraphValue::Pattern(mk(full_classes(
            &b,
            [ClassLabel::Red, ClassLabel::Blue],
        ))?)),
        (Kind::Mixed, true) => Ok(GraphValue::Pattern(mk(full_classes(
            &b,
            [ClassLabel::E2, ClassLabel::E3],
        ))?)),
        (Kind::Colored, false) => {
            let classes = full_classes(&b, [ClassLabel::Red, ClassLabel::Blue]);
            let g = ColoredGraph::new(
                n,
                classes[0].1.iter().map(|e| (e[0], e[1])),
                classes[1].1.iter().map(|e| (e[0], e[1])),
            )
            .map_err(|source| ParseError::Graph { line: 0, source })?;
            Ok(GraphValue::Colored(g))
        }
        (Kind::Mixed, false) => {
            let classes = full_classes(&b, [ClassLabel::E2, ClassLabel::E3]);
            let g = MixedGraph::new(
                n,
                classes[0].1.iter().map(|e| (e[0], e[1])),
                classes[1].1.iter().map(|e| (e[0], e[1], e[2])),
            )
            .map_err(|source| ParseError::Graph { line: 0, source })?;
            Ok(GraphValue::Mixed(g))
        }
    }
}

/// Serialize to the text format; `parse(serialize(g))` returns `g`.
pub fn serialize(g: &GraphValue) -> String {
    let mut out = String::new();
    match g {
        GraphValue::Colored(g) => {
            out.push_str("colored\n");
            out.push_str(&format!("vertices {}\n", g.n()));
            for e in g.double_edges() {
                out.push_str(&format!("both {} {}\n", e[0], e[1]));
            }
            for e in g.red() {
                if !g.blue().contains(e) {
                    out.push_str(&format!("red {} {}\n", e[0], e[1]));
                }
            }
            for e in g.blue() {
                if !g.red().contains(e) {
                    out.push_str(&format!("blue {} {}\n", e[0], e[1]));
                }
            }
        }
        GraphValue::Mixed(g) => {
            out.push_str("mixed\n");
            out.push_str(&format!("vertices {}\n", g.n()));
            for e in g.e2() {
                out.push_str(&format!("e2 {} {}\n", e[0], e[1]));
            }
            for e in g.e3() {
                out.push_str(&format!("e3 {} {} {}\n", e[0], e[1], e[2]));
            }
        }
        GraphValue::Pattern(p) => {
            out.push_str("pattern\n");
            let colored = p
                .labels()
                .iter()
                .any(|l| matches!(l, ClassLabel::Red | ClassLabel::Blue));
            out.push_str(if colored { "colored\n" } else { "mixed\n" });
            out.push_str(&format!("vertices {}\n", p.n()));
            for (label, edges) in p.classes() {
                for e in edges {
                    let words: Vec<String> = e.iter().map(|x| x.to_string()).collect();
                    out.push_str(&format!("{} {}\n", label, words.join(" ")));
                }
            }
        }
    }
    out
}

pub fn to_json(g: &GraphValue) -> String {
    serde_json::to_string(g).expect("graph values always serialize")
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase")]
enum RawLabel {
    Red,
    Blue,
    E2,
    E3,
}

impl From<RawLabel> for ClassLabel {
    fn from(r: RawLabel) -> Self {
        match r {
            RawLabel::Red => ClassLabel::Red,
            RawLabel::Blue => ClassLabel::Blue,
            RawLabel::E2 => ClassLabel::E2,
            RawLabel::E3 => ClassLabel::E3,
        }
    }
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RawValue {
    Colored {
        n: u32,
        red: Vec<[u32; 2]>,
        blue: Vec<[u32; 2]>,
    },
    Mixed {
        n: u32,
        e2: Vec<[u32; 2]>,
        e3: Vec<[u32; 3]>,
    },
    Pattern {
        n: u32,
        classes: Vec<(RawLabel, Vec<Vec<u32>>)>,
    },
}

/// Parse the JSON form produced by [`to_json`], re-validating invariants.
pub fn from_json(text: &str) -> Result<GraphValue, ParseError> {
    let raw: RawValue = serde_json::from_str(text)?;
    let value = match raw {
        RawValue::Colored { n, red, blue } => GraphValue::Colored(ColoredGraph::new(
            n,
            red.iter().map(|e| (e[0], e[1])),
            blue.iter().map(|e| (e[0], e[1])),
        )?),
        RawValue::Mixed { n, e2, e3 } => GraphValue::Mixed(MixedGraph::new(
            n,
            e2.iter().map(|e| (e[0], e[1])),
            e3.iter().map(|e| (e[0], e[1], e[2])),
        )?),
        RawValue::Pattern { n, classes } => GraphValue::Pattern(PatternGraph::new(
            n,
            classes
                .into_iter()
                .map(|(l, e)| (l.into(), e))
                .collect(),
        )?),
    };
    Ok(value)
}
