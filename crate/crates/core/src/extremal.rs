//! Exact extremal numbers ex(F, n): the maximum of |E_r| + |E_b| over
//! 2-colored graphs on n vertices containing no member of the forbidden
//! family as a copy.
//!
//! Two complete algorithms over the same state space (each unordered pair
//! gets one of none/red/blue/both, in colex order):
//!
//! * branch-and-bound with a counting bound, incremental forbidden-copy
//!   detection on the newly decided pair, and a first-vertex symmetry cap
//!   (the states along vertex 1's star may be assumed non-increasing,
//!   because some optimum is lexicographically maximal under relabeling);
//! * exhaustive enumeration of all 4^C(n,2) states (n <= 5) against
//!   precomputed embedding bitmasks.
//!
//! Both return the exact maximum; tests require them to agree.

use serde::Serialize;
use thiserror::Error;

use crate::model::{binom, ColoredGraph, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    BranchAndBound,
    Exhaustive,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtremalResult {
    pub n: u32,
    pub value: u32,
    pub witness: ColoredGraph,
    pub node_count: u64,
    /// False when the search stopped at the node limit; the value is then
    /// only a lower bound.
    pub complete: bool,
    /// The family was empty, so the value is trivially 2*C(n,2).
    pub trivial_empty_family: bool,
}

#[derive(Debug, Clone, Default)]
pub struct ExtremalOptions {
    pub mode: Option<Mode>,
    pub node_limit: Option<u64>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtremalError {
    #[error("exhaustive mode enumerates 4^C(n,2) states and is refused for n = {0} > 5")]
    ExhaustiveTooLarge(u32),
    #[error("n must be at least 1")]
    ZeroVertices,
    #[error("family member {0} has no edges; forbidding it would forbid everything")]
    EdgelessFamilyMember(usize),
    #[error("table range must be ascending")]
    RangeNotAscending,
}

/// Pairs of [n] in colex order: (1,2), (1,3), (2,3), (1,4), ...
fn colex_pairs(n: u32) -> Vec<(u32, u32)> {
    let mut pairs = Vec::with_capacity(binom(n as u64, 2) as usize);
    for vmax in 2..=n {
        for vmin in 1..vmax {
            pairs.push((vmin, vmax));
        }
    }
    pairs
}

fn pair_index(u: u32, v: u32) -> usize {
    let (a, b) = (u.min(v), u.max(v));
    (binom(b as u64 - 1, 2) + (a as i64 - 1)) as usize
}

const NONE: u8 = 0;
const RED: u8 = 1;
const BLUE: u8 = 2;
const BOTH: u8 = 3;

fn state_edges(s: u8) -> u32 {
    [0, 1, 1, 2][s as usize]
}

struct FamilyMember {
    n: usize,
    /// (x, y, req) with req bits: 1 = needs red, 2 = needs blue.
    edges: Vec<(usize, usize, u8)>,
    /// edges incident to each vertex.
    incident: Vec<Vec<usize>>,
}

fn prepare_family(family: &[ColoredGraph]) -> Result<Vec<FamilyMember>, ExtremalError> {
    family
        .iter()
        .enumerate()
        .map(|(i, f)| {
            if f.edge_count() == 0 {
                return Err(ExtremalError::EdgelessFamilyMember(i));
            }
            let mut edges: Vec<(usize, usize, u8)> = Vec::new();
            for e in f.red() {
                edges.push((e[0] as usize - 1, e[1] as usize - 1, RED));
            }
            for e in f.blue() {
                let key = (e[0] as usize - 1, e[1] as usize - 1);
                if let Some(existing) = edges.iter_mut().find(|(x, y, _)| (*x, *y) == key) {
                    existing.2 |= BLUE;
                } else {
                    edges.push((key.0, key.1, BLUE));
                }
            }
            let mut incident = vec![Vec::new(); f.n() as usize];
            for (id, &(x, y, _)) in edges.iter().enumerate() {
                incident[x].push(id);
                incident[y].push(id);
            }
            Ok(FamilyMember {
                n: f.n() as usize,
                edges,
                incident,
            })
        })
        .collect()
}

struct Bnb<'a> {
    n: usize,
    pairs: Vec<(u32, u32)>,
    family: &'a [FamilyMember],
    states: Vec<u8>,
    best: i64,
    best_states: Vec<u8>,
    nodes: u64,
    node_limit: u64,
    aborted: bool,
}

impl<'a> Bnb<'a> {
    /// Does some family member embed into the decided pairs, using the
    /// newly decided pair `anchor` as one of its edges?
    fn embeds_using(&self, anchor: usize) -> bool {
        let (u, v) = self.pairs[anchor];
        let s = self.states[anchor];
        for member in self.family {
            if member.n > self.n {
                continue;
            }
            let mut phi = vec![usize::MAX; member.n];
            let mut used = vec![false; self.n];
            for (eid, &(x, y, req)) in member.edges.iter().enumerate() {
                if req & s != req {
                    continue;
                }
                for (iu, iv) in [(u, v), (v, u)] {
                    phi[x] = iu as usize - 1;
                    phi[y] = iv as usize - 1;
                    used[iu as usize - 1] = true;
                    used[iv as usize - 1] = true;
                    if self.extend(member, &mut phi, &mut used, eid) {
                        return true;
                    }
                    used[iu as usize - 1] = false;
                    used[iv as usize - 1] = false;
                    phi[x] = usize::MAX;
                    phi[y] = usize::MAX;
                }
            }
        }
        false
    }

    fn extend(
        &self,
        member: &FamilyMember,
        phi: &mut [usize],
        used: &mut [bool],
        _anchor_edge: usize,
    ) -> bool {
        let next = match phi.iter().position(|&p| p == usize::MAX) {
            Some(i) => i,
            None => return true,
        };
        'cand: for c in 0..self.n {
            if used[c] {
                continue;
            }
            phi[next] = c;
            for &eid in &member.incident[next] {
                let (x, y, req) = member.edges[eid];
                let (px, py) = (phi[x], phi[y]);
                if px == usize::MAX || py == usize::MAX {
                    continue;
                }
                let st = self.states[pair_index(px as u32 + 1, py as u32 + 1)];
                if req & st != req {
                    phi[next] = usize::MAX;
                    continue 'cand;
                }
            }
            used[c] = true;
            if self.extend(member, phi, used, _anchor_edge) {
                return true;
            }
            used[c] = false;
            phi[next] = usize::MAX;
        }
        false
    }

    fn run(&mut self, idx: usize, current: i64) {
        if self.aborted {
            return;
        }
        let remaining = self.pairs.len() - idx;
        if idx == self.pairs.len() {
            if current > self.best {
                self.best = current;
                self.best_states = self.states.clone();
            }
            return;
        }
        if current + 2 * remaining as i64 <= self.best {
            return;
        }
        let (u, v) = self.pairs[idx];
        // First-vertex symmetry: along vertex 1's star the state codes may
        // be assumed non-increasing.
        let cap = if u == 1 && v >= 3 {
            self.states[pair_index(1, v - 1)]
        } else {
            BOTH
        };
        for s in (NONE..=cap).rev() {
            self.nodes += 1;
            if self.nodes > self.node_limit {
                self.aborted = true;
                return;
            }
            self.states[idx] = s;
            if s == NONE || !self.embeds_using(idx) {
                self.run(idx + 1, current + state_edges(s) as i64);
            }
            self.states[idx] = NONE;
            if self.aborted {
                return;
            }
        }
    }
}

fn witness_from_states(n: u32, pairs: &[(u32, u32)], states: &[u8]) -> ColoredGraph {
    let red = pairs
        .iter()
        .zip(states)
        .filter(|(_, &s)| s & RED != 0)
        .map(|(&(u, v), _)| (u, v));
    let blue = pairs
        .iter()
        .zip(states)
        .filter(|(_, &s)| s & BLUE != 0)
        .map(|(&(u, v), _)| (u, v));
    ColoredGraph::new(n, red, blue).expect("states describe a simple graph")
}

fn exhaustive(
    family: &[FamilyMember],
    n: u32,
    pairs: &[(u32, u32)],
) -> (u32, Vec<u8>, u64) {
    // Embedding bitmasks: a 2-bit field per pair (red bit, blue bit). A
    // state contains a copy of F iff it covers some mask completely.
    let p = pairs.len();
    let mut masks: Vec<u32> = Vec::new();
    for member in family {
        if member.n > n as usize {
            continue;
        }
        let mut phi = vec![usize::MAX; member.n];
        let mut used = vec![false; n as usize];
        collect_masks(member, &mut phi, &mut used, n as usize, &mut masks);
    }
    masks.sort_unstable();
    masks.dedup();
    // Drop masks that are supersets of another mask; checking the minimal
    // ones is enough.
    let minimal: Vec<u32> = masks
        .iter()
        .copied()
        .filter(|&m| !masks.iter().any(|&other| other != m && m & other == other))
        .collect();

    let total: u64 = 1u64 << (2 * p);
    let mut best: i64 = -1;
    let mut best_state = 0u64;
    for s in 0..total {
        let value = (s as u64).count_ones() as i64;
        if value <= best {
            continue;
        }
        if minimal.iter().all(|&m| s as u32 & m != m) {
            best = value;
            best_state = s;
        }
    }
    let states: Vec<u8> = (0..p)
        .map(|i| ((best_state >> (2 * i)) & 0b11) as u8)
        .collect();
    (best as u32, states, total)
}

fn collect_masks(
    member: &FamilyMember,
    phi: &mut Vec<usize>,
    used: &mut Vec<bool>,
    n: usize,
    masks: &mut Vec<u32>,
) {
    let next = match phi.iter().position(|&p| p == usize::MAX) {
        Some(i) => i,
        None => {
            let mut mask = 0u32;
            for &(x, y, req) in &member.edges {
                let idx = pair_index(phi[x] as u32 + 1, phi[y] as u32 + 1);
                if req & RED != 0 {
                    mask |= 1 << (2 * idx);
                }
                if req & BLUE != 0 {
                    mask |= 1 << (2 * idx + 1);
                }
            }
            masks.push(mask);
            return;
        }
    };
    for c in 0..n {
        if used[c] {
            continue;
        }
        phi[next] = c;
        used[c] = true;
        collect_masks(member, phi, used, n, masks);
        used[c] = false;
        phi[next] = usize::MAX;
    }
}

/// Exact maximum edge count of a family-free 2-colored graph on n
/// vertices, with a witness attaining it.
pub fn extremal_number(
    family: &[ColoredGraph],
    n: u32,
    opts: &ExtremalOptions,
) -> Result<ExtremalResult, ExtremalError> {
    if n == 0 {
        return Err(ExtremalError::ZeroVertices);
    }
    let pairs = colex_pairs(n);
    if family.is_empty() {
        return Ok(ExtremalResult {
            n,
            value: 2 * pairs.len() as u32,
            witness: ColoredGraph::complete_double(n),
            node_count: 0,
            complete: true,
            trivial_empty_family: true,
        });
    }
    let members = prepare_family(family)?;
    let mode = opts.mode.unwrap_or(Mode::BranchAndBound);
    match mode {
        Mode::Exhaustive => {
            if n > 5 {
                return Err(ExtremalError::ExhaustiveTooLarge(n));
            }
            let (value, states, nodes) = exhaustive(&members, n, &pairs);
            Ok(ExtremalResult {
                n,
                value,
                witness: witness_from_states(n, &pairs, &states),
                node_count: nodes,
                complete: true,
                trivial_empty_family: false,
            })
        }
        Mode::BranchAndBound => {
            let mut bnb = Bnb {
                n: n as usize,
                states: vec![NONE; pairs.len()],
                best: -1,
                best_states: vec![NONE; pairs.len()],
                nodes: 0,
                node_limit: opts.node_limit.unwrap_or(u64::MAX),
                aborted: false,
                family: &members,
                pairs,
            };
            bnb.run(0, 0);
            Ok(ExtremalResult {
                n,
                value: bnb.best.max(0) as u32,
                witness: witness_from_states(n, &bnb.pairs, &bnb.best_states),
                node_count: bnb.nodes,
                complete: !bnb.aborted,
                trivial_empty_family: false,
            })
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtremalTable {
    pub rows: Vec<ExtremalResult>,
    /// pi_n = value / C(n,2) per row (0 when n < 2).
    #[serde(serialize_with = "crate::model::serialize_rats")]
    pub densities: Vec<Rat>,
    /// Non-increase of pi_n over the rows with n >= 2.
    pub monotone: bool,
}

/// Batch driver over an ascending range of n.
pub fn extremal_table(
    family: &[ColoredGraph],
    ns: &[u32],
    opts: &ExtremalOptions,
) -> Result<ExtremalTable, ExtremalError> {
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ExtremalError::RangeNotAscending);
    }
    let mut rows = Vec::new();
    let mut densities = Vec::new();
    for &n in ns {
        let row = extremal_number(family, n, opts)?;
        let pairs = binom(n as u64, 2);
        densities.push(if pairs == 0 {
            Rat::from_integer(0)
        } else {
            Rat::new(row.value as i64, pairs)
        });
        rows.push(row);
    }
    let relevant: Vec<&Rat> = rows
        .iter()
        .zip(&densities)
        .filter(|(r, _)| r.n >= 2)
        .map(|(_, d)| d)
        .collect();
    let monotone = relevant.windows(2).all(|w| w[0] >= w[1]);
    Ok(ExtremalTable {
        rows,
        densities,
        monotone,
    })
}

/// Re-check an extremal witness: family-free and the stated edge count.
pub fn witness_is_valid(result: &ExtremalResult, family: &[ColoredGraph]) -> bool {
    result.witness.edge_count() as u32 == result.value
        && family
            .iter()
            .all(|f| crate::hom::contains_copy(&result.witness, f).is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{builtin, GraphValue};

    fn colored(name: &str) -> ColoredGraph {
        match builtin(name).unwrap() {
            GraphValue::Colored(g) => g,
            _ => panic!("{name} is not colored"),
        }
    }

    fn bnb() -> ExtremalOptions {
        ExtremalOptions {
            mode: Some(Mode::BranchAndBound),
            node_limit: None,
        }
    }

    fn oracle() -> ExtremalOptions {
        ExtremalOptions {
            mode: Some(Mode::Exhaustive),
            node_limit: None,
        }
    }

    #[test]
    fn k3_small_values_match_the_formula() {
        for (n, expected) in [(3u32, 5u32), (4, 10), (5, 16)] {
            let family = [colored("K3")];
            let a = extremal_number(&family, n, &bnb()).unwrap();
            let b = extremal_number(&family, n, &oracle()).unwrap();
            assert_eq!(a.value, expected, "bnb ex({n}, K3)");
            assert_eq!(b.value, expected, "oracle ex({n}, K3)");
            assert!(witness_is_valid(&a, &family));
            assert!(witness_is_valid(&b, &family));
        }
    }

    #[test]
    fn t1_exceptional_n3_is_6() {
        let family = [colored("T1")];
        let r = extremal_number(&family, 3, &oracle()).unwrap();
        assert_eq!(r.value, 6);
        let r = extremal_number(&family, 3, &bnb()).unwrap();
        assert_eq!(r.value, 6);
    }

    #[test]
    fn t_on_two_vertices_is_the_double_edge() {
        let family = [colored("T")];
        let r = extremal_number(&family, 2, &bnb()).unwrap();
        assert_eq!(r.value, 2);
        assert_eq!(r.witness.edge_count(), 2);
    }

    #[test]
    fn empty_family_is_trivial() {
        let r = extremal_number(&[], 4, &bnb()).unwrap();
        assert!(r.trivial_empty_family);
        assert_eq!(r.value, 12);
    }

    #[test]
    fn edgeless_member_is_rejected() {
        let empty = ColoredGraph::new(2, [], []).unwrap();
        assert_eq!(
            extremal_number(&[empty], 3, &bnb()).unwrap_err(),
            ExtremalError::EdgelessFamilyMember(0)
        );
    }

    #[test]
    fn exhaustive_refused_above_5() {
        let family = [colored("K3")];
        assert_eq!(
            extremal_number(&family, 6, &oracle()).unwrap_err(),
            ExtremalError::ExhaustiveTooLarge(6)
        );
    }

    #[test]
    fn node_limit_reports_incomplete() {
        let family = [colored("K3")];
        let r = extremal_number(
            &family,
            5,
            &ExtremalOptions {
                mode: Some(Mode::BranchAndBound),
                node_limit: Some(10),
            },
        )
        .unwrap();
        assert!(!r.complete);
    }

    #[test]
    fn empty_table_range() {
        let family = [colored("K3")];
        let t = extremal_table(&family, &[], &bnb()).unwrap();
        assert!(t.rows.is_empty());
        assert!(t.monotone);
    }

    #[test]
    fn k3_table_matches_and_is_monotone() {
        let family = [colored("K3")];
        let t = extremal_table(&family, &[3, 4, 5, 6], &bnb()).unwrap();
        let values: Vec<u32> = t.rows.iter().map(|r| r.value).collect();
        assert_eq!(values, vec![5, 10, 16, 24]);
        let expect: Vec<Rat> = [(5, 3), (5, 3), (8, 5), (8, 5)]
            .iter()
            .map(|&(p, q)| Rat::new(p, q))
            .collect();
        assert_eq!(t.densities, expect);
        assert!(t.monotone);
    }
}
