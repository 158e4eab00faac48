//! 2-bridge fractions and the combinatorics of their epsilon graphs.
//!
//! A 2-bridge knot is indexed by a fraction p/q with 0 < p < q, both odd and
//! coprime. The sequence e_i = (-1)^floor(ip/q), i = 1..q-1, draws a sawtooth
//! path (the epsilon graph) whose q vertices sit at levels s_i = e_1+...+e_i.
//! Maximal monotone runs of edges are the graph's segments; their lengths form
//! the sigma sequence, whose rigid structure (two possible lengths, cluster
//! patterns governed by the Euclidean algorithm on q and p) drives everything
//! downstream. This module builds the graph, the sigma sequence, and a
//! checker for each structural property; it also labels the vertices with the
//! powers of lambda they contribute to the twisted-polynomial coefficient
//! polynomials d and e.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::cyclotomic::{CycInt, CycLaurent};
use crate::{Error, Result};

/// A validated 2-bridge fraction: 0 < p < q, p and q odd and coprime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TwoBridgeFraction {
    p: i64,
    q: i64,
}

impl TwoBridgeFraction {
    /// Validate and build a fraction, naming the violated constraint on error.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if !(0 < p && p < q) {
            return Err(Error::OutOfRange {
                what: "fraction",
                details: format!("need 0 < p < q, got {p}/{q}"),
            });
        }
        if p % 2 == 0 {
            return Err(Error::NotOdd {
                what: "p",
                value: p,
            });
        }
        if q % 2 == 0 {
            return Err(Error::NotOdd {
                what: "q",
                value: q,
            });
        }
        let g = p.gcd(&q);
        if g != 1 {
            return Err(Error::NotCoprime { a: p, b: q, g });
        }
        Ok(TwoBridgeFraction { p, q })
    }

    /// Numerator p.
    pub fn p(&self) -> i64 {
        self.p
    }

    /// Denominator q.
    pub fn q(&self) -> i64 {
        self.q
    }

    /// Check that the odd prime ell divides q (the condition for K_{p/q} to
    /// admit a dihedral ell-coloring).
    pub fn require_ell_divides_q(&self, ell: u32) -> Result<()> {
        if self.q % i64::from(ell) == 0 {
            Ok(())
        } else {
            Err(Error::EllDoesNotDivideQ { ell, q: self.q })
        }
    }
}

impl fmt::Display for TwoBridgeFraction {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}/{}", self.p, self.q)
    }
}

/// One maximal monotone run of edges in the epsilon graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Segment {
    /// Index into the epsilon sequence (0-based) of the segment's first edge.
    pub start_edge: usize,
    /// Number of edges in the segment.
    pub len: usize,
    /// Common slope of the segment's edges: +1 or -1.
    pub slope: i8,
}

/// The epsilon graph of a 2-bridge fraction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EpsilonGraph {
    fraction: TwoBridgeFraction,
    /// e_1..e_{q-1} stored 0-based: epsilons[i] is e_{i+1}.
    epsilons: Vec<i8>,
    /// Vertex levels s_0..s_{q-1}; s_0 = 0 and s_i = e_1 + ... + e_i.
    levels: Vec<i64>,
    /// Maximal constant-slope runs, in order. p segments in total.
    segments: Vec<Segment>,
}

/// Compute the epsilon graph of a fraction: the sign sequence
/// e_i = (-1)^floor(ip/q), the vertex levels, and the segment list.
pub fn epsilon_sequence(f: TwoBridgeFraction) -> EpsilonGraph {
    let (p, q) = (f.p(), f.q());
    let mut epsilons = Vec::with_capacity((q - 1) as usize);
    let mut levels = Vec::with_capacity(q as usize);
    let mut level = 0i64;
    levels.push(level);
    for i in 1..q {
        let e: i8 = if ((i * p) / q) % 2 == 0 { 1 } else { -1 };
        epsilons.push(e);
        level += i64::from(e);
        levels.push(level);
    }
    let mut segments = Vec::new();
    let mut start = 0usize;
    while start < epsilons.len() {
        let slope = epsilons[start];
        let mut end = start + 1;
        while end < epsilons.len() && epsilons[end] == slope {
            end += 1;
        }
        segments.push(Segment {
            start_edge: start,
            len: end - start,
            slope,
        });
        start = end;
    }
    EpsilonGraph {
        fraction: f,
        epsilons,
        levels,
        segments,
    }
}

impl EpsilonGraph {
    /// The fraction this graph belongs to.
    pub fn fraction(&self) -> TwoBridgeFraction {
        self.fraction
    }

    /// The sign e_i (1-indexed, 1 <= i <= q-1).
    pub fn epsilon(&self, i: usize) -> i64 {
        i64::from(self.epsilons[i - 1])
    }

    /// All signs e_1..e_{q-1}.
    pub fn epsilons(&self) -> &[i8] {
        &self.epsilons
    }

    /// Vertex levels s_0..s_{q-1}.
    pub fn levels(&self) -> &[i64] {
        &self.levels
    }

    /// The level s_i of vertex i.
    pub fn level(&self, i: usize) -> i64 {
        self.levels[i]
    }

    /// The segment list.
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Count vertices per level, as (level, count) pairs in ascending level
    /// order. Reading the graph this way gives the magnitudes of the
    /// alternating Alexander coefficients.
    pub fn level_counts(&self) -> Vec<(i64, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for &l in &self.levels {
            *counts.entry(l).or_insert(0usize) += 1;
        }
        counts.into_iter().collect()
    }

    /// Plain-text rendering of the sawtooth for human inspection: one row
    /// per level, `*` at each vertex, read left to right.
    pub fn ascii_art(&self) -> String {
        let max = *self.levels.iter().max().expect("nonempty");
        let min = *self.levels.iter().min().expect("nonempty");
        let mut rows = Vec::new();
        for row_level in (min..=max).rev() {
            let mut row = String::with_capacity(self.levels.len());
            for &l in &self.levels {
                row.push(if l == row_level { '*' } else { ' ' });
            }
            let mark = if row_level == 0 { '0' } else { ' ' };
            rows.push(format!("{mark} {row}"));
        }
        rows.join("\n")
    }
}

/// The segment-length sequence sigma_1..sigma_p of an epsilon graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaSequence {
    sigmas: Vec<i64>,
}

impl SigmaSequence {
    /// Build from raw lengths (used by the closed-form family generators).
    pub fn from_lengths(sigmas: Vec<i64>) -> Self {
        SigmaSequence { sigmas }
    }

    /// The lengths sigma_1..sigma_p.
    pub fn lengths(&self) -> &[i64] {
        &self.sigmas
    }

    /// Number of segments (p for a fraction with p > 1, 1 for p = 1).
    pub fn len(&self) -> usize {
        self.sigmas.len()
    }

    /// True iff there are no segments (never the case for a valid fraction).
    pub fn is_empty(&self) -> bool {
        self.sigmas.is_empty()
    }

    /// Sum of all lengths (the edge count q - 1).
    pub fn total(&self) -> i64 {
        self.sigmas.iter().sum()
    }

    /// Maximal runs of equal lengths, as (length, run size) pairs in order.
    pub fn clusters(&self) -> Vec<(i64, usize)> {
        let mut out: Vec<(i64, usize)> = Vec::new();
        for &s in &self.sigmas {
            match out.last_mut() {
                Some((len, count)) if *len == s => *count += 1,
                _ => out.push((s, 1)),
            }
        }
        out
    }
}

/// Compute the sigma sequence of a fraction. For p = 1 the graph is a single
/// segment of length q - 1.
pub fn sigma_sequence(f: TwoBridgeFraction) -> SigmaSequence {
    if f.p() == 1 {
        return SigmaSequence {
            sigmas: vec![f.q() - 1],
        };
    }
    let graph = epsilon_sequence(f);
    SigmaSequence {
        sigmas: graph.segments().iter().map(|s| s.len as i64).collect(),
    }
}

/// The division chain q = a1*p + r1, p = a2*r1 + r2, r1 = a3*r2 + r3 that
/// controls segment lengths and cluster sizes. Defined for p > 1 (so that
/// 0 < r1 < p); the third line exists only when r2 > 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EuclidChain {
    pub a1: i64,
    pub r1: i64,
    pub a2: i64,
    pub r2: i64,
    pub a3: Option<i64>,
    pub r3: Option<i64>,
}

impl EuclidChain {
    /// Compute the chain for a fraction with p > 1.
    pub fn new(f: TwoBridgeFraction) -> Option<Self> {
        let (p, q) = (f.p(), f.q());
        if p == 1 {
            return None;
        }
        let (a1, r1) = (q / p, q % p);
        debug_assert!(0 < r1 && r1 < p, "gcd(p, q) = 1 and p > 1 force 0 < r1 < p");
        let (a2, r2) = (p / r1, p % r1);
        let (a3, r3) = if r2 > 0 {
            (Some(r1 / r2), Some(r1 % r2))
        } else {
            (None, None)
        };
        Some(EuclidChain {
            a1,
            r1,
            a2,
            r2,
            a3,
            r3,
        })
    }
}

/// Outcome of one structural property check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The property's hypothesis does not apply to this fraction.
    Skipped { reason: String },
}

/// One named property with its outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub status: CheckStatus,
}

/// Report of every structural property of the sigma sequence, with the
/// Euclid chain cached alongside.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaPropertyReport {
    pub fraction: TwoBridgeFraction,
    pub sigma: SigmaSequence,
    pub chain: Option<EuclidChain>,
    pub checks: Vec<PropertyCheck>,
}

impl SigmaPropertyReport {
    /// True iff no check failed (skipped checks do not count as failures).
    pub fn all_pass(&self) -> bool {
        self.checks
            .iter()
            .all(|c| !matches!(c.status, CheckStatus::Fail))
    }
}

impl fmt::Display for SigmaPropertyReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(out, "sigma properties for {}:", self.fraction)?;
        for check in &self.checks {
            let status = match &check.status {
                CheckStatus::Pass => "pass".to_string(),
                CheckStatus::Fail => "FAIL".to_string(),
                CheckStatus::Skipped { reason } => format!("skipped ({reason})"),
            };
            writeln!(out, "  {:<28} {status}", check.name)?;
        }
        Ok(())
    }
}

/// Evaluate every structural property of sigma(p, q) and report each as
/// pass, fail, or skipped (when its hypothesis does not hold). For p = 1 all
/// segment-structure checks are skipped: the graph is a single segment.
pub fn check_sigma_properties(f: TwoBridgeFraction) -> SigmaPropertyReport {
    let sigma = sigma_sequence(f);
    let chain = EuclidChain::new(f);
    let mut checks = Vec::new();
    let lengths = sigma.lengths();
    let (p, q) = (f.p(), f.q());

    let mut push = |name: &'static str, status: CheckStatus| {
        checks.push(PropertyCheck { name, status });
    };
    let verdict = |ok: bool| if ok { CheckStatus::Pass } else { CheckStatus::Fail };
    let skip = |reason: &str| CheckStatus::Skipped {
        reason: reason.to_string(),
    };

    // Symmetry, central even segment, parity counts, and edge total hold for
    // p = 1 as well (a single even segment), so they are always checked.
    push(
        "symmetry",
        verdict((0..lengths.len()).all(|i| lengths[i] == lengths[lengths.len() - 1 - i])),
    );
    push("central segment even", {
        let central = lengths[(lengths.len() - 1) / 2];
        let even_count = lengths.iter().filter(|s| *s % 2 == 0).count();
        let odd_count = lengths.len() - even_count;
        verdict(central % 2 == 0 && even_count % 2 == 1 && odd_count % 2 == 0)
    });
    push("edge total q-1", verdict(sigma.total() == q - 1));

    match chain {
        None => {
            for name in [
                "partial sums floor((kq-1)/p)",
                "sigma_i floor difference",
                "consecutive sums window",
                "two lengths sigma_1, sigma_1+1",
                "short or long isolated",
                "long count r1-1",
                "initial short cluster a2",
                "short cluster dichotomy",
                "short cluster counts",
                "long cluster dichotomy",
                "long cluster counts",
            ] {
                push(name, skip("p = 1: single segment"));
            }
        }
        Some(chain) => {
            push(
                "partial sums floor((kq-1)/p)",
                verdict((1..=p).all(|k| {
                    let sum: i64 = lengths[..k as usize].iter().sum();
                    sum == (k * q - 1).div_euclid(p)
                })),
            );
            // The floor difference telescopes the partial sums, whose k = 0
            // base case is an empty sum, so it is 0 rather than floor(-1/p).
            let partial = |k: i64| if k == 0 { 0 } else { (k * q - 1).div_euclid(p) };
            push(
                "sigma_i floor difference",
                verdict((1..=p).all(|i| lengths[(i - 1) as usize] == partial(i) - partial(i - 1))),
            );
            push(
                "consecutive sums window",
                verdict((1..=lengths.len()).all(|k| {
                    let base: i64 = lengths[..k].iter().sum();
                    lengths.windows(k).all(|w| {
                        let s: i64 = w.iter().sum();
                        s == base || s == base + 1
                    })
                })),
            );
            let short = chain.a1;
            let long = chain.a1 + 1;
            push(
                "two lengths sigma_1, sigma_1+1",
                verdict(lengths[0] == short && lengths.iter().all(|&s| s == short || s == long)),
            );

            let clusters = sigma.clusters();
            let long_clusters: Vec<usize> = clusters
                .iter()
                .filter(|(len, _)| *len == long)
                .map(|(_, n)| *n)
                .collect();
            let short_clusters: Vec<usize> = clusters
                .iter()
                .filter(|(len, _)| *len == short)
                .map(|(_, n)| *n)
                .collect();
            let all_short_isolated = short_clusters.iter().all(|&n| n == 1);
            let all_long_isolated = long_clusters.iter().all(|&n| n == 1);

            push(
                "short or long isolated",
                verdict(all_short_isolated || all_long_isolated),
            );
            push("long count r1-1", {
                let long_count: usize = long_clusters.iter().sum();
                let short_count: usize = short_clusters.iter().sum();
                verdict(
                    long_count as i64 == chain.r1 - 1
                        && short_count as i64 == p - chain.r1 + 1,
                )
            });
            push(
                "initial short cluster a2",
                verdict(clusters.first().is_some_and(|(len, n)| {
                    *len == short && *n as i64 == chain.a2
                })),
            );
            push(
                "short cluster dichotomy",
                if all_long_isolated {
                    verdict(short_clusters
                        .iter()
                        .all(|&n| n as i64 == chain.a2 || n as i64 == chain.a2 - 1))
                } else {
                    skip("a long segment is nonisolated")
                },
            );
            push("short cluster counts", {
                let at_a2 = short_clusters.iter().filter(|&&n| n as i64 == chain.a2).count();
                let first = at_a2 as i64 == chain.r2 + 1;
                let second = if chain.a2 > 1 {
                    let at_less = short_clusters
                        .iter()
                        .filter(|&&n| n as i64 == chain.a2 - 1)
                        .count();
                    at_less as i64 == chain.r1 - chain.r2 - 1
                } else {
                    true
                };
                verdict(first && second)
            });

            let nonisolated_long = long_clusters.iter().any(|&n| n > 1);
            if nonisolated_long && long_clusters.len() > 1 {
                // The hypothesis forces r2 >= 2, so a3 and r3 exist.
                let a3 = chain.a3.expect("nonisolated long segments require r2 > 0");
                let r3 = chain.r3.expect("nonisolated long segments require r2 > 0");
                push(
                    "long cluster dichotomy",
                    verdict(
                        long_clusters[0] as i64 == a3
                            && long_clusters
                                .iter()
                                .all(|&n| n as i64 == a3 || n as i64 == a3 + 1),
                    ),
                );
                push("long cluster counts", {
                    let at_a3 = long_clusters.iter().filter(|&&n| n as i64 == a3).count();
                    let above = long_clusters
                        .iter()
                        .filter(|&&n| n as i64 == a3 + 1)
                        .count();
                    verdict(at_a3 as i64 == chain.r2 - r3 + 1 && above as i64 == r3 - 1)
                });
            } else {
                let reason = if long_clusters.len() <= 1 {
                    "at most one long cluster"
                } else {
                    "all long segments isolated"
                };
                push("long cluster dichotomy", skip(reason));
                push("long cluster counts", skip(reason));
            }
        }
    }

    SigmaPropertyReport {
        fraction: f,
        sigma,
        chain,
        checks,
    }
}

/// Which coefficient polynomial a vertex's term belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TermTarget {
    /// Odd-index vertices contribute to d.
    D,
    /// Even-index vertices (including v_0) contribute to e.
    E,
}

/// The label of one vertex: its term is t^level * lambda^lambda_exp, routed
/// to d or e by the vertex index parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VertexLabel {
    pub vertex: usize,
    pub level: i64,
    /// Signed lambda exponent before reduction mod ell.
    pub lambda_exp: i64,
    pub target: TermTarget,
}

/// The fully labeled epsilon graph for a given coloring order ell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexLabeling {
    fraction: TwoBridgeFraction,
    ell: u32,
    labels: Vec<VertexLabel>,
}

/// Label every vertex of the epsilon graph: v_0 gets 0; the pair
/// v_{2i-1}, v_{2i} gets +/- i with the sign of e_{2i}.
pub fn vertex_labeling(f: TwoBridgeFraction, ell: u32) -> VertexLabeling {
    let graph = epsilon_sequence(f);
    let q = f.q();
    let mut labels = Vec::with_capacity(q as usize);
    labels.push(VertexLabel {
        vertex: 0,
        level: 0,
        lambda_exp: 0,
        target: TermTarget::E,
    });
    for i in 1..=(q - 1) / 2 {
        let sign = graph.epsilon(2 * i as usize);
        for (vertex, target) in [
            (2 * i as usize - 1, TermTarget::D),
            (2 * i as usize, TermTarget::E),
        ] {
            labels.push(VertexLabel {
                vertex,
                level: graph.level(vertex),
                lambda_exp: sign * i,
                target,
            });
        }
    }
    labels.sort_by_key(|l| l.vertex);
    VertexLabeling {
        fraction: f,
        ell,
        labels,
    }
}

impl VertexLabeling {
    /// The fraction this labeling belongs to.
    pub fn fraction(&self) -> TwoBridgeFraction {
        self.fraction
    }

    /// The coloring order ell.
    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// Per-vertex labels in vertex order.
    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    /// Sum the vertex terms into the coefficient polynomials (d, e).
    pub fn read_off(&self) -> (CycLaurent, CycLaurent) {
        let mut d = CycLaurent::zero(self.ell);
        let mut e = CycLaurent::zero(self.ell);
        for label in &self.labels {
            let term = CycInt::lambda_pow(self.ell, label.lambda_exp);
            match label.target {
                TermTarget::D => d.add_term(label.level, term),
                TermTarget::E => e.add_term(label.level, term),
            }
        }
        (d, e)
    }
}
