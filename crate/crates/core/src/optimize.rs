//! Blow-up edge-density polynomials and their maximization over the
//! probability simplex of part proportions.
//!
//! An edge multiset of arity r whose distinct vertices carry multiplicities
//! m_1..m_j contributes the monomial (r!/(m_1!...m_j!)) * prod p_i^{m_i};
//! classes are summed after their own C(n,r) normalization. This
//! coefficient convention reproduces all the worked construction optima
//! (see the tests), which is what pins it down.

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::model::{binom, serialize_rat, GraphValue, PatternGraph, Rat};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Term {
    #[serde(serialize_with = "serialize_rat")]
    pub coeff: Rat,
    /// Exponent of each of the m variables; total degree is the arity of
    /// the class the term came from.
    pub exps: Vec<u32>,
}

/// Limit edge density of blow-ups of a pattern, as a polynomial in the
/// part proportions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityPolynomial {
    m: usize,
    terms: Vec<Term>,
}

impl DensityPolynomial {
    pub fn vars(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn eval(&self, w: &[f64]) -> f64 {
        assert_eq!(w.len(), self.m);
        self.terms
            .iter()
            .map(|t| {
                t.coeff.to_f64().unwrap()
                    * t.exps
                        .iter()
                        .zip(w)
                        .map(|(&e, &x)| x.powi(e as i32))
                        .product::<f64>()
            })
            .sum()
    }

    pub fn gradient(&self, w: &[f64]) -> Vec<f64> {
        assert_eq!(w.len(), self.m);
        let mut g = vec![0.0; self.m];
        for t in &self.terms {
            let c = t.coeff.to_f64().unwrap();
            for (i, &e) in t.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let mut partial = c * e as f64;
                for (j, &ej) in t.exps.iter().enumerate() {
                    let pow = if j == i { ej - 1 } else { ej };
                    partial *= w[j].powi(pow as i32);
                }
                g[i] += partial;
            }
        }
        g
    }

    /// Human-readable form like "x1^2 + 4 x1 x2".
    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|t| {
                let vars: Vec<String> = t
                    .exps
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        if e == 1 {
                            format!("x{}", i + 1)
                        } else {
                            format!("x{}^{}", i + 1, e)
                        }
                    })
                    .collect();
                if vars.is_empty() {
                    t.coeff.to_string()
                } else if t.coeff == Rat::from_integer(1) {
                    vars.join(" ")
                } else {
                    format!("{} {}", t.coeff, vars.join(" "))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn factorial(k: u32) -> i64 {
    (1..=k as i64).product::<i64>().max(1)
}

/// Edge multiset -> (exponent vector, multinomial coefficient).
fn monomial(m: usize, edge: &[u32]) -> Term {
    let mut exps = vec![0u32; m];
    for &v in edge {
        exps[(v - 1) as usize] += 1;
    }
    let mut denom = 1i64;
    for &e in &exps {
        denom *= factorial(e);
    }
    Term {
        coeff: Rat::new(factorial(edge.len() as u32), denom),
        exps,
    }
}

/// Build the blow-up density polynomial of a pattern.
pub fn density_polynomial(pattern: &PatternGraph) -> DensityPolynomial {
    let m = pattern.n() as usize;
    let mut terms: Vec<Term> = Vec::new();
    for (_, edges) in pattern.classes() {
        for e in edges {
            let t = monomial(m, e);
            match terms.iter_mut().find(|u| u.exps == t.exps) {
                Some(u) => u.coeff += t.coeff,
                None => terms.push(t),
            }
        }
    }
    terms.sort_by(|a, b| b.exps.cmp(&a.exps));
    DensityPolynomial { m, terms }
}

/// A point of the probability simplex (nonnegative weights summing to 1).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimplexPoint(Vec<f64>);

#[derive(Debug, Error, PartialEq)]
pub enum SimplexError {
    #[error("weight {0} is negative")]
    Negative(f64),
    #[error("weights sum to {0}, not 1 (tolerance 1e-12)")]
    BadSum(f64),
}

impl SimplexPoint {
    pub fn new(weights: Vec<f64>) -> Result<Self, SimplexError> {
        if let Some(&w) = weights.iter().find(|&&w| w < 0.0) {
            return Err(SimplexError::Negative(w));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(SimplexError::BadSum(sum));
        }
        Ok(SimplexPoint(weights))
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }
}

/// Euclidean projection onto the probability simplex.
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        cumulative += x;
        let candidate = (cumulative - 1.0) / (i as f64 + 1.0);
        if candidate < x {
            theta = candidate;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// KKT stationarity residual of an ascent problem on the simplex: the
/// support gradients must equal their weighted mean, and zero-weight
/// coordinates must not exceed it.
pub fn stationarity_residual(poly: &DensityPolynomial, w: &[f64]) -> f64 {
    let g = poly.gradient(w);
    let lambda: f64 = g.iter().zip(w).map(|(gi, wi)| gi * wi).sum();
    g.iter()
        .zip(w)
        .map(|(&gi, &wi)| {
            if wi > 1e-9 {
                (gi - lambda).powi(2)
            } else {
                (gi - lambda).max(0.0).powi(2)
            }
        })
        .sum::<f64>()
        .sqrt()
}

#[derive(Debug, Clone)]
pub struct OptimizeOptions {
    /// Extra low-discrepancy interior starts beyond corners + centroid.
    pub starts: usize,
    pub tolerance: f64,
    pub max_iters: usize,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        OptimizeOptions {
            starts: 8,
            tolerance: 1e-10,
            max_iters: 50_000,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Optimum {
    pub point: SimplexPoint,
    pub value: f64,
    pub gradient_residual: f64,
    pub starts_used: usize,
    pub converged: bool,
}

fn halton(mut index: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while index > 0 {
        f /= base as f64;
        r += f * (index % base) as f64;
        index /= base;
    }
    r
}

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Deterministic start set: simplex corners, the centroid, and
/// `extra` Halton-derived interior points.
fn start_points(m: usize, extra: usize) -> Vec<Vec<f64>> {
    let mut starts = Vec::with_capacity(m + 1 + extra);
    for i in 0..m {
        let mut corner = vec![0.0; m];
        corner[i] = 1.0;
        starts.push(corner);
    }
    starts.push(vec![1.0 / m as f64; m]);
    for j in 1..=extra {
        let raw: Vec<f64> = (0..m)
            .map(|i| -(halton(j as u64, PRIMES[i % PRIMES.len()]).max(1e-9)).ln())
            .collect();
        let sum: f64 = raw.iter().sum();
        starts.push(raw.into_iter().map(|x| x / sum).collect());
    }
    starts
}

/// Crude bound on the gradient's Lipschitz constant over the simplex:
/// every second partial of a degree-d monomial is at most |c| d^2 there.
fn lipschitz_bound(poly: &DensityPolynomial) -> f64 {
    poly.terms()
        .iter()
        .map(|t| {
            let d: u32 = t.exps.iter().sum();
            t.coeff.to_f64().unwrap().abs() * (d * d) as f64
        })
        .sum::<f64>()
        .max(1.0)
}

fn ascend(
    poly: &DensityPolynomial,
    start: &[f64],
    opts: &OptimizeOptions,
) -> (Vec<f64>, f64, f64, bool) {
    let mut w = project_to_simplex(start);
    let mut value = poly.eval(&w);
    let mut iters = 0usize;
    // Phase 1: backtracking line search makes large monotone progress.
    while iters < opts.max_iters {
        iters += 1;
        if stationarity_residual(poly, &w) <= opts.tolerance {
            break;
        }
        let g = poly.gradient(&w);
        let mut step = 1.0;
        let mut moved = false;
        while step > 1e-14 {
            let trial: Vec<f64> = project_to_simplex(
                &w.iter().zip(&g).map(|(wi, gi)| wi + step * gi).collect::<Vec<f64>>(),
            );
            let trial_value = poly.eval(&trial);
            let advance: f64 = g
                .iter()
                .zip(trial.iter().zip(&w))
                .map(|(gi, (ti, wi))| gi * (ti - wi))
                .sum();
            if trial_value >= value + 1e-4 * advance && trial_value > value {
                w = trial;
                value = trial_value;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
    }
    // Phase 2: fixed-step projected gradient. Near the optimum the map is
    // contractive for steps below 1/L, so it drives the residual to
    // machine precision where function differences are below epsilon and
    // the line search cannot certify progress.
    let step = 1.0 / lipschitz_bound(poly);
    let mut best_w = w.clone();
    let mut best_residual = stationarity_residual(poly, &w);
    while iters < opts.max_iters && best_residual > opts.tolerance {
        iters += 1;
        let g = poly.gradient(&w);
        w = project_to_simplex(
            &w.iter().zip(&g).map(|(wi, gi)| wi + step * gi).collect::<Vec<f64>>(),
        );
        let residual = stationarity_residual(poly, &w);
        if residual < best_residual {
            best_residual = residual;
            best_w = w.clone();
        }
    }
    let value = poly.eval(&best_w);
    let converged = best_residual <= opts.tolerance;
    (best_w, value, best_residual, converged)
}

/// Multi-start projected gradient ascent with backtracking line search.
/// The start set is deterministic and the best stationary point (ties by
/// start order) is returned, so results are reproducible.
pub fn maximize_simplex(poly: &DensityPolynomial, opts: &OptimizeOptions) -> Optimum {
    let starts = start_points(poly.vars(), opts.starts);
    let results: Vec<(usize, (Vec<f64>, f64, f64, bool))> = starts
        .par_iter()
        .enumerate()
        .map(|(i, s)| (i, ascend(poly, s, opts)))
        .collect();
    let best = results
        .iter()
        .min_by(|(ia, (_, va, _, _)), (ib, (_, vb, _, _))| {
            vb.partial_cmp(va).unwrap().then(ia.cmp(ib))
        })
        .expect("at least one start");
    let (w, value, residual, converged) = best.1.clone();
    Optimum {
        point: SimplexPoint::new(w.iter().map(|x| x.max(0.0)).collect())
            .unwrap_or(SimplexPoint(w)),
        value,
        gradient_residual: residual,
        starts_used: starts.len(),
        converged,
    }
}

/// Exhaustive sweep of the lattice {k/steps} on the simplex; the
/// independent cross-check for the gradient method at desk scale.
pub fn grid_maximize(poly: &DensityPolynomial, steps: u32) -> (SimplexPoint, f64) {
    let m = poly.vars();
    let mut best = (vec![0.0; m], f64::NEG_INFINITY);
    let mut counts = vec![0u32; m];
    fn rec(
        poly: &DensityPolynomial,
        counts: &mut Vec<u32>,
        i: usize,
        left: u32,
        steps: u32,
        best: &mut (Vec<f64>, f64),
    ) {
        if i + 1 == counts.len() {
            counts[i] = left;
            let w: Vec<f64> = counts.iter().map(|&k| k as f64 / steps as f64).collect();
            let v = poly.eval(&w);
            if v > best.1 {
                *best = (w, v);
            }
            return;
        }
        for k in 0..=left {
            counts[i] = k;
            rec(poly, counts, i + 1, left - k, steps, best);
        }
    }
    rec(poly, &mut counts, 0, steps, steps, &mut best);
    (SimplexPoint(best.0), best.1)
}

#[derive(Debug, Error, PartialEq)]
pub enum EmpiricalError {
    #[error("weights length {got} does not match pattern vertex count {expected}")]
    WeightsLength { expected: u32, got: usize },
    #[error("rounded part {vertex} is empty but the vertex carries edges")]
    ZeroPart { vertex: u32 },
}

/// Round n*weights to integer part sizes summing to n (largest remainder).
pub fn round_sizes(weights: &[f64], n: u32) -> Vec<u32> {
    let raw: Vec<f64> = weights.iter().map(|w| w * n as f64).collect();
    let mut sizes: Vec<u32> = raw.iter().map(|x| x.floor() as u32).collect();
    let short = (n - sizes.iter().sum::<u32>()) as usize;
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = raw[a] - raw[a].floor();
        let fb = raw[b] - raw[b].floor();
        fb.partial_cmp(&fa).unwrap().then(a.cmp(&b))
    });
    for k in 0..short {
        sizes[order[k % order.len()]] += 1;
    }
    sizes
}

/// Exact edge count of the blow-up of one pattern class, without building
/// it: each edge multiset contributes prod C(s_v, mult_v) expansions, and
/// distinct multisets expand disjointly.
fn class_count(edges: &std::collections::BTreeSet<Vec<u32>>, sizes: &[u32]) -> i64 {
    let mut total = 0i64;
    for e in edges {
        let mut product = 1i64;
        let mut groups: Vec<(u32, u64)> = Vec::new();
        for &v in e {
            match groups.last_mut() {
                Some((g, m)) if *g == v => *m += 1,
                _ => groups.push((v, 1)),
            }
        }
        for (v, mult) in groups {
            product *= binom(sizes[(v - 1) as usize] as u64, mult);
        }
        total += product;
    }
    total
}

/// Exact density of the blow-up with the given part sizes, computed
/// combinatorially; equals `density(&blow_up(pattern, sizes)?)`.
pub fn blow_up_density(pattern: &PatternGraph, sizes: &[u32]) -> Rat {
    let n: u32 = sizes.iter().sum();
    let mut total = Rat::from_integer(0);
    for (label, edges) in pattern.classes() {
        let count = class_count(edges, sizes);
        if count == 0 {
            continue;
        }
        total += Rat::new(count, binom(n as u64, label.arity() as u64));
    }
    total
}

/// Pre-limit check of a polynomial value: blow up the pattern with part
/// sizes rounding n*weights and return the exact density, which approaches
/// the polynomial value at the weights as n grows.
pub fn empirical_density_check(
    pattern: &PatternGraph,
    point: &SimplexPoint,
    n: u32,
) -> Result<Rat, EmpiricalError> {
    let w = point.weights();
    if w.len() != pattern.n() as usize {
        return Err(EmpiricalError::WeightsLength {
            expected: pattern.n(),
            got: w.len(),
        });
    }
    let sizes = round_sizes(w, n);
    for (i, &s) in sizes.iter().enumerate() {
        let v = i as u32 + 1;
        let carries_edges = pattern
            .classes()
            .iter()
            .any(|(_, edges)| edges.iter().any(|e| e.contains(&v)));
        if s == 0 && carries_edges {
            return Err(EmpiricalError::ZeroPart { vertex: v });
        }
    }
    Ok(blow_up_density(pattern, &sizes))
}

/// Convenience: polynomial of anything convertible to a pattern.
pub fn density_polynomial_of(value: &GraphValue) -> DensityPolynomial {
    density_polynomial(&value.to_pattern())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::blow_up;
    use crate::model::{builtin, density, ClassLabel};

    fn pat(name: &str) -> PatternGraph {
        builtin(name).unwrap().to_pattern()
    }

    #[test]
    fn ga_polynomial_is_x2_plus_4xy() {
        let p = density_polynomial(&pat("GA"));
        assert_eq!(p.vars(), 2);
        let mut terms = p.terms().to_vec();
        terms.sort_by(|a, b| a.exps.cmp(&b.exps));
        assert_eq!(
            terms,
            vec![
                Term { coeff: Rat::new(4, 1), exps: vec![1, 1] },
                Term { coeff: Rat::new(1, 1), exps: vec![2, 0] },
            ]
        );
        // Substituting y = 1 - x gives 4x - 3x^2; value 4/3 at x = 2/3.
        let v = p.eval(&[2.0 / 3.0, 1.0 / 3.0]);
        assert!((v - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn h2_polynomial_matches_the_two_term_form() {
        // {xy; xxx, xxy} -> 2xy + x^3 + 3x^2 y = 2x + x^2 - 2x^3 at y = 1-x.
        let p = density_polynomial(&pat("H2"));
        for x in [0.1, 0.3, 0.7676] {
            let direct = p.eval(&[x, 1.0 - x]);
            let reduced = 2.0 * x + x * x - 2.0 * x * x * x;
            assert!((direct - reduced).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn single_loop_gives_squared_weight() {
        let p = PatternGraph::new(1, vec![(ClassLabel::Red, vec![vec![1, 1]])]).unwrap();
        let poly = density_polynomial(&p);
        assert_eq!(
            poly.terms(),
            &[Term { coeff: Rat::from_integer(1), exps: vec![2] }]
        );
    }

    #[test]
    fn five_construction_optima() {
        let sqrt13 = 13.0f64.sqrt();
        let cases: Vec<(&str, f64, Vec<f64>)> = vec![
            ("GA", 4.0 / 3.0, vec![2.0 / 3.0, 1.0 / 3.0]),
            ("GC", 1.5, vec![0.5, 0.5]),
            ("H1", 245.0 / 243.0, vec![7.0 / 9.0, 1.0 / 9.0, 1.0 / 9.0]),
            (
                "H2",
                (19.0 + 13.0 * sqrt13) / 54.0,
                vec![(1.0 + sqrt13) / 6.0, (5.0 - sqrt13) / 6.0],
            ),
            ("H3", 256.0 / 243.0, vec![8.0 / 9.0, 1.0 / 9.0]),
        ];
        for (name, value, argmax) in cases {
            let poly = density_polynomial(&pat(name));
            let opt = maximize_simplex(&poly, &OptimizeOptions::default());
            assert!(
                (opt.value - value).abs() <= 1e-9,
                "{name}: value {} vs {}",
                opt.value,
                value
            );
            for (a, b) in opt.point.weights().iter().zip(&argmax) {
                assert!((a - b).abs() <= 1e-6, "{name}: argmax {:?}", opt.point);
            }
            assert!(opt.gradient_residual <= 1e-9, "{name}");
        }
    }

    #[test]
    fn grid_cross_checks_the_gradient_method() {
        for name in ["GA", "GC", "H3"] {
            let poly = density_polynomial(&pat(name));
            let (_, grid_value) = grid_maximize(&poly, 1000);
            let opt = maximize_simplex(&poly, &OptimizeOptions::default());
            assert!(
                opt.value >= grid_value - 1e-9,
                "{name}: gradient {} below grid {}",
                opt.value,
                grid_value
            );
            assert!((opt.value - grid_value).abs() < 1e-4, "{name}");
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let poly = density_polynomial(&pat("H1"));
        let w = [0.5, 0.3, 0.2];
        let g = poly.gradient(&w);
        for i in 0..3 {
            let mut hi = w;
            let mut lo = w;
            hi[i] += 1e-6;
            lo[i] -= 1e-6;
            let fd = (poly.eval(&hi) - poly.eval(&lo)) / 2e-6;
            assert!((g[i] - fd).abs() / fd.abs().max(1.0) < 1e-5);
        }
    }

    #[test]
    fn projection_is_idempotent_and_feasible() {
        for v in [vec![0.5, 0.7, -0.1], vec![2.0, 0.0], vec![0.2, 0.3, 0.5]] {
            let p = project_to_simplex(&v);
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(p.iter().all(|&x| x >= 0.0));
            let q = project_to_simplex(&p);
            for (a, b) in p.iter().zip(&q) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn combinatorial_count_equals_materialized_blow_up() {
        for (name, sizes) in [
            ("GA", vec![3u32, 2]),
            ("GC", vec![2, 2]),
            ("H2", vec![4, 3]),
            ("H3", vec![5, 2]),
            ("H1", vec![3, 2, 2]),
        ] {
            let p = pat(name);
            let counted = blow_up_density(&p, &sizes);
            let built = density(&blow_up(&p, &sizes).unwrap()).unwrap();
            assert_eq!(counted, built, "{name} {sizes:?}");
        }
    }

    #[test]
    fn empirical_checks_approach_the_optima() {
        let ga = pat("GA");
        let point = SimplexPoint::new(vec![2.0 / 3.0, 1.0 / 3.0]).unwrap();
        let d = empirical_density_check(&ga, &point, 300).unwrap();
        let exact = Rat::new(
            (binom(200, 2) + 2 * 200 * 100) as i64,
            binom(300, 2),
        );
        assert_eq!(d, exact);
        assert!((d.to_f64().unwrap() - 4.0 / 3.0).abs() < 0.01);

        let h3 = pat("H3");
        let point = SimplexPoint::new(vec![8.0 / 9.0, 1.0 / 9.0]).unwrap();
        let d = empirical_density_check(&h3, &point, 900).unwrap();
        assert!((d.to_f64().unwrap() - 256.0 / 243.0).abs() < 0.01);
    }

    #[test]
    fn unit_parts_reproduce_the_pattern_density() {
        let t = pat("T");
        let point = SimplexPoint::new(vec![0.25; 4]).unwrap();
        let d = empirical_density_check(&t, &point, 4).unwrap();
        assert_eq!(d, density(&builtin("T").unwrap()).unwrap());
    }

    #[test]
    fn zero_part_with_edges_is_an_error() {
        let ga = pat("GA");
        let point = SimplexPoint::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(
            empirical_density_check(&ga, &point, 10).unwrap_err(),
            EmpiricalError::ZeroPart { vertex: 2 }
        );
    }
}
