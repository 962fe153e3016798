//! Exact solution of the gap-maximizing bridge problem.
//!
//! Every binary bridge `H̃` supported on the bridge-set columns is a
//! candidate; for a fixed `H̃` the inner semidefinite program is solved in
//! closed form from the eigenvalues of `C⁻¹`, which itself comes from the
//! Schur-collapsed block formula. Candidates are enumerated depth-first in
//! ascending row-major bit order, and branches that already exceed the degree
//! cap are cut. Evaluation runs in parallel; the reduction is order
//! independent, so results do not depend on the worker count.

use std::io::Write;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::bridge::{bridged_inverse_from, BridgeMatrix};
use crate::error::{Error, Result};
use crate::graph::{bridgeability_violation, from_voltage, WeightedGraph};
use crate::matrix::{Block, SymMatrix};
use crate::sdp::{certify_relaxation_tightness, certify_with_inverses, gap_from_inverse, GapCertificate};

/// Largest supported number of binary variables `n · k_B`.
pub const MAX_BINARY_VARIABLES: usize = 32;

/// Gaps within `TIE_REL · max(1, best)` of the best are treated as ties.
pub const TIE_REL: f64 = 1e-10;

const CHUNK: usize = 4096;

/// A complete bridging problem: two voltage graphs, the bridge set of `G_B`
/// and the combinatorial constraints.
#[derive(Debug, Clone)]
pub struct BridgeSearchSpec {
    ga: WeightedGraph,
    gb: WeightedGraph,
    da: Vec<f64>,
    db: Vec<f64>,
    bridge_set: Vec<usize>,
    max_degree: Option<usize>,
    require_bridge: bool,
    a_inv: SymMatrix,
    b_inv: SymMatrix,
    deg_a: Vec<usize>,
    deg_b: Vec<usize>,
}

impl BridgeSearchSpec {
    /// `bridge_set` holds 0-based vertices of `G_B`; it is sorted ascending.
    pub fn new(
        ga: WeightedGraph,
        gb: WeightedGraph,
        da: Vec<f64>,
        db: Vec<f64>,
        mut bridge_set: Vec<usize>,
    ) -> Result<Self> {
        for (g, d, side) in [(&ga, &da, "A"), (&gb, &db, "B")] {
            if d.len() != g.n() {
                return Err(Error::SpecInvalid(format!(
                    "voltage of G_{side} has {} entries for {} vertices",
                    d.len(),
                    g.n()
                )));
            }
            let rebuilt = from_voltage(&g.binary_adjacency(), d)
                .map_err(|e| Error::SpecInvalid(format!("voltage of G_{side}: {e}")))?;
            if rebuilt.adjacency().max_abs_diff(g.adjacency()) > 1e-9 * g.adjacency().scale() {
                return Err(Error::SpecInvalid(format!("G_{side} is not D·Ā·D for the given voltage")));
            }
        }
        bridge_set.sort_unstable();
        if bridge_set.is_empty() {
            return Err(Error::SpecInvalid("bridge set is empty".into()));
        }
        if bridge_set.windows(2).any(|w| w[0] == w[1]) || *bridge_set.last().unwrap() >= gb.n() {
            return Err(Error::SpecInvalid("bridge set has repeated or out-of-range vertices".into()));
        }
        let nbits = ga.n() * bridge_set.len();
        if nbits > MAX_BINARY_VARIABLES {
            return Err(Error::SpecInvalid(format!(
                "{nbits} binary variables exceed the limit of {MAX_BINARY_VARIABLES}"
            )));
        }
        let a_inv = ga.inverse().map_err(|e| Error::SpecInvalid(format!("G_A: {e}")))?;
        let b_inv = gb.inverse().map_err(|e| Error::SpecInvalid(format!("G_B: {e}")))?;
        if let Some((i, j, v)) = bridgeability_violation(&b_inv, &bridge_set) {
            return Err(Error::SpecInvalid(format!(
                "G_B is not arbitrarily bridgeable over the bridge set: (B⁻¹)[{}, {}] = {v:e}",
                i + 1,
                j + 1
            )));
        }
        let deg_a = ga.binary_degrees();
        let deg_b = gb.binary_degrees();
        Ok(BridgeSearchSpec {
            ga,
            gb,
            da,
            db,
            bridge_set,
            max_degree: None,
            require_bridge: true,
            a_inv,
            b_inv,
            deg_a,
            deg_b,
        })
    }

    pub fn with_max_degree(mut self, max_degree: Option<usize>) -> Self {
        self.max_degree = max_degree;
        self
    }

    pub fn with_require_bridge(mut self, require: bool) -> Self {
        self.require_bridge = require;
        self
    }

    pub fn ga(&self) -> &WeightedGraph {
        &self.ga
    }

    pub fn gb(&self) -> &WeightedGraph {
        &self.gb
    }

    pub fn da(&self) -> &[f64] {
        &self.da
    }

    pub fn db(&self) -> &[f64] {
        &self.db
    }

    pub fn bridge_set(&self) -> &[usize] {
        &self.bridge_set
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.max_degree
    }

    pub fn require_bridge(&self) -> bool {
        self.require_bridge
    }

    pub fn k_b(&self) -> usize {
        self.bridge_set.len()
    }

    /// Number of binary variables `n · k_B`.
    pub fn n_bits(&self) -> usize {
        self.ga.n() * self.k_b()
    }

    /// `H̃` (`n × m`) encoded by `mask`; bit `n_bits − 1 − (i·k_B + c)` is the
    /// edge between `G_A` vertex `i` and the `c`-th bridge vertex.
    pub fn htilde_of(&self, mask: u64) -> Block {
        let k = self.k_b();
        let nb = self.n_bits();
        let mut t = Block::zeros(self.ga.n(), self.gb.n());
        for p in 0..nb {
            if mask >> (nb - 1 - p) & 1 == 1 {
                t.set(p / k, self.bridge_set[p % k], 1.0);
            }
        }
        t
    }

    /// Row-major bit string of `mask`.
    pub fn encoding(&self, mask: u64) -> String {
        let nb = self.n_bits();
        (0..nb).map(|p| if mask >> (nb - 1 - p) & 1 == 1 { '1' } else { '0' }).collect()
    }

    pub fn bridge_matrix(&self, htilde: &Block) -> Result<BridgeMatrix> {
        BridgeMatrix::new(htilde.clone(), self.bridge_set.clone(), &self.da, &self.db)
    }

    fn gap_of_htilde(&self, htilde: &Block) -> Result<GapCertificate> {
        let h = htilde.diag_scaled(&self.da, &self.db);
        let c_inv = bridged_inverse_from(&self.a_inv, &self.b_inv, &h);
        gap_from_inverse(&c_inv)
    }
}

/// Why a candidate is excluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Infeasibility {
    /// No bridge edge although one is required.
    Empty,
    /// Edge to a `G_B` vertex outside the bridge set (0-based row/col).
    Column { row: usize, col: usize },
    /// Binary degree of a vertex of `C` (0-based) above the cap.
    Degree { vertex: usize, degree: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Evaluation {
    Feasible { gap: f64 },
    Infeasible(Infeasibility),
}

impl Evaluation {
    pub fn gap(&self) -> Option<f64> {
        match self {
            Evaluation::Feasible { gap } => Some(*gap),
            Evaluation::Infeasible(_) => None,
        }
    }
}

/// Checks every constraint of the problem for `htilde` and, when feasible,
/// returns the optimal value of the inner gap SDP.
pub fn evaluate(spec: &BridgeSearchSpec, htilde: &Block) -> Result<Evaluation> {
    let (n, m) = (spec.ga.n(), spec.gb.n());
    if htilde.rows() != n || htilde.cols() != m {
        return Err(Error::DimensionMismatch(format!("H̃ must be {n}x{m}")));
    }
    let mut row_sum = vec![0usize; n];
    let mut col_sum = vec![0usize; m];
    let mut first_outside = None;
    for i in 0..n {
        for j in 0..m {
            let v = htilde.get(i, j);
            if v == 1.0 {
                row_sum[i] += 1;
                col_sum[j] += 1;
                if first_outside.is_none() && !spec.bridge_set.contains(&j) {
                    first_outside = Some((i, j));
                }
            } else if v != 0.0 {
                return Err(Error::NonBinaryInput { row: i, col: j, value: v });
            }
        }
    }
    if let Some((row, col)) = first_outside {
        return Ok(Evaluation::Infeasible(Infeasibility::Column { row, col }));
    }
    if spec.require_bridge && row_sum.iter().all(|&s| s == 0) {
        return Ok(Evaluation::Infeasible(Infeasibility::Empty));
    }
    if let Some(cap) = spec.max_degree {
        let degrees = spec.deg_a.iter().zip(&row_sum).chain(spec.deg_b.iter().zip(&col_sum)).map(|(d, s)| d + s);
        if let Some((vertex, degree)) = degrees.enumerate().find(|&(_, d)| d > cap) {
            return Ok(Evaluation::Infeasible(Infeasibility::Degree { vertex, degree }));
        }
    }
    Ok(Evaluation::Feasible { gap: spec.gap_of_htilde(htilde)?.gap })
}

/// Depth-first stream of feasible candidates as bit masks, ascending.
///
/// A branch is cut as soon as setting a bit would push a vertex past the
/// degree cap; the number of leaves skipped that way is [`Candidates::pruned`].
#[derive(Debug, Clone)]
pub struct Candidates<'a> {
    spec: &'a BridgeSearchSpec,
    stack: Vec<bool>,
    extra_a: Vec<usize>,
    extra_b: Vec<usize>,
    mask: u64,
    started: bool,
    done: bool,
    pruned: u64,
    rejected: u64,
}

pub fn enumerate(spec: &BridgeSearchSpec) -> Candidates<'_> {
    Candidates {
        spec,
        stack: Vec::with_capacity(spec.n_bits()),
        extra_a: vec![0; spec.ga.n()],
        extra_b: vec![0; spec.k_b()],
        mask: 0,
        started: false,
        done: false,
        pruned: 0,
        rejected: 0,
    }
}

impl Candidates<'_> {
    /// Leaves cut by degree pruning so far.
    pub fn pruned(&self) -> u64 {
        self.pruned
    }

    /// Leaves reached but rejected (the empty bridge when one is required).
    pub fn rejected(&self) -> u64 {
        self.rejected
    }

    fn bit(&self, pos: usize) -> u64 {
        1u64 << (self.spec.n_bits() - 1 - pos)
    }

    fn can_set(&self, pos: usize) -> bool {
        let Some(cap) = self.spec.max_degree else { return true };
        let k = self.spec.k_b();
        let (i, c) = (pos / k, pos % k);
        self.spec.deg_a[i] + self.extra_a[i] < cap && self.spec.deg_b[self.spec.bridge_set[c]] + self.extra_b[c] < cap
    }

    fn toggle_degrees(&mut self, pos: usize, on: bool) {
        let k = self.spec.k_b();
        let (i, c) = (pos / k, pos % k);
        if on {
            self.extra_a[i] += 1;
            self.extra_b[c] += 1;
        } else {
            self.extra_a[i] -= 1;
            self.extra_b[c] -= 1;
        }
    }

    fn fill_zeros(&mut self) {
        while self.stack.len() < self.spec.n_bits() {
            self.stack.push(false);
        }
    }

    /// Moves to the next feasible leaf; false when the tree is exhausted.
    fn advance(&mut self) -> bool {
        loop {
            match self.stack.pop() {
                None => return false,
                Some(true) => {
                    let pos = self.stack.len();
                    self.toggle_degrees(pos, false);
                    self.mask &= !self.bit(pos);
                }
                Some(false) => {
                    let pos = self.stack.len();
                    if self.can_set(pos) {
                        self.toggle_degrees(pos, true);
                        self.mask |= self.bit(pos);
                        self.stack.push(true);
                        self.fill_zeros();
                        return true;
                    }
                    self.pruned += 1u64 << (self.spec.n_bits() - 1 - pos);
                }
            }
        }
    }
}

impl Iterator for Candidates<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            if self.done {
                return None;
            }
            if !self.started {
                self.started = true;
                self.fill_zeros();
            } else if !self.advance() {
                self.done = true;
                return None;
            }
            if self.mask == 0 && self.spec.require_bridge {
                self.rejected += 1;
                continue;
            }
            return Some(self.mask);
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SearchOptions {
    /// Disable to evaluate all `2^(n·k_B)` matrices through [`evaluate`].
    pub no_pruning: bool,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub best_gap: f64,
    pub best_htilde: Block,
    pub best_h: Block,
    /// Row-major bit string of `best_htilde` over the bridge-set columns.
    pub encoding: String,
    pub certificate: GapCertificate,
    /// The relaxed bridge system is tight (`L = W − HᵀH = 0`) at the optimum.
    pub relaxation_tight: bool,
    #[serde(serialize_with = "one_based")]
    pub bridge_set: Vec<usize>,
    pub candidates_evaluated: u64,
    pub candidates_pruned: u64,
    pub candidates_infeasible: u64,
    /// Number of candidates tied with the optimum.
    pub optima_count: u64,
    pub bridging_description: String,
}

fn one_based<S: Serializer>(v: &[usize], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(|x| x + 1).collect::<Vec<_>>().serialize(s)
}

/// One line of the optional audit log.
#[derive(Debug, Serialize)]
struct AuditRecord<'a> {
    candidate: &'a str,
    feasible: bool,
    gap: Option<f64>,
}

pub fn optimize(spec: &BridgeSearchSpec) -> Result<SearchResult> {
    optimize_with(spec, &SearchOptions::default(), None)
}

/// Exhaustive search with optional audit log (JSON lines, enumeration order).
pub fn optimize_with(
    spec: &BridgeSearchSpec,
    options: &SearchOptions,
    audit: Option<&mut dyn Write>,
) -> Result<SearchResult> {
    let pool = match options.workers {
        Some(k) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?,
        ),
        None => None,
    };
    search(spec, options, pool.as_ref(), audit)
}

struct Incumbents {
    best: f64,
    near: Vec<(u64, f64)>,
}

impl Incumbents {
    fn tie_width(best: f64) -> f64 {
        TIE_REL * best.abs().max(1.0)
    }

    fn offer(&mut self, mask: u64, gap: f64) {
        if gap > self.best {
            self.best = gap;
            let floor = gap - Self::tie_width(gap);
            self.near.retain(|&(_, g)| g >= floor);
        }
        if gap >= self.best - Self::tie_width(self.best) {
            self.near.push((mask, gap));
        }
    }

    /// Smallest encoding among the ties of the best gap.
    fn winner(&self) -> Option<(u64, f64, u64)> {
        let floor = self.best - Self::tie_width(self.best);
        let ties: Vec<_> = self.near.iter().filter(|&&(_, g)| g >= floor).collect();
        ties.iter().min_by_key(|&&&(m, _)| m).map(|&&(m, g)| (m, g, ties.len() as u64))
    }
}

fn search(
    spec: &BridgeSearchSpec,
    options: &SearchOptions,
    pool: Option<&rayon::ThreadPool>,
    mut audit: Option<&mut dyn Write>,
) -> Result<SearchResult> {
    let total = 1u64 << spec.n_bits();
    let mut inc = Incumbents { best: f64::NEG_INFINITY, near: Vec::new() };
    let mut evaluated = 0u64;
    let mut infeasible = 0u64;
    let mut pruned = 0u64;

    let mut process = |chunk: &[u64], pruned_source: bool| -> Result<()> {
        let run = || -> Vec<Result<Option<f64>>> {
            chunk
                .par_iter()
                .map(|&mask| {
                    let htilde = spec.htilde_of(mask);
                    if pruned_source {
                        spec.gap_of_htilde(&htilde).map(|c| Some(c.gap))
                    } else {
                        evaluate(spec, &htilde).map(|e| e.gap())
                    }
                })
                .collect()
        };
        let results = match pool {
            Some(p) => p.install(run),
            None => run(),
        };
        for (&mask, res) in chunk.iter().zip(results) {
            let gap = res?;
            match gap {
                Some(g) => {
                    evaluated += 1;
                    inc.offer(mask, g);
                }
                None => infeasible += 1,
            }
            if let Some(w) = audit.as_deref_mut() {
                let code = spec.encoding(mask);
                let rec = AuditRecord { candidate: &code, feasible: gap.is_some(), gap };
                let line = serde_json::to_string(&rec).map_err(|e| Error::Io(e.to_string()))?;
                writeln!(w, "{line}").map_err(|e| Error::Io(e.to_string()))?;
            }
        }
        Ok(())
    };

    let mut buf = Vec::with_capacity(CHUNK);
    if options.no_pruning {
        for mask in 0..total {
            buf.push(mask);
            if buf.len() == CHUNK {
                process(&buf, false)?;
                buf.clear();
            }
        }
        process(&buf, false)?;
    } else {
        let mut it = enumerate(spec);
        for mask in it.by_ref() {
            buf.push(mask);
            if buf.len() == CHUNK {
                process(&buf, true)?;
                buf.clear();
            }
        }
        process(&buf, true)?;
        pruned = it.pruned();
        infeasible += it.rejected();
    }
    debug_assert_eq!(evaluated + pruned + infeasible, total);

    let (mask, _, optima_count) = inc.winner().ok_or(Error::NoFeasibleCandidate)?;
    let best_htilde = spec.htilde_of(mask);
    let best_h = best_htilde.diag_scaled(&spec.da, &spec.db);
    let opt = spec.gap_of_htilde(&best_htilde)?;
    let certificate = certify_with_inverses(&spec.a_inv, &spec.b_inv, &best_h, opt.mu, opt.eta)?;
    let relaxation_tight = certify_relaxation_tightness(&best_htilde, &spec.da, &spec.db)?;
    let bridging_description = describe_bridge(&best_htilde, &best_h, &spec.bridge_set);
    Ok(SearchResult {
        best_gap: opt.gap,
        best_htilde,
        best_h,
        encoding: spec.encoding(mask),
        certificate,
        relaxation_tight,
        bridge_set: spec.bridge_set.clone(),
        candidates_evaluated: evaluated,
        candidates_pruned: pruned,
        candidates_infeasible: infeasible,
        optima_count,
        bridging_description,
    })
}

pub fn describe_bridging(result: &SearchResult) -> String {
    describe_bridge(&result.best_htilde, &result.best_h, &result.bridge_set)
}

/// `b → a₁(w₁), a₂(w₂); …` for each bridge vertex `b` of `G_B` (1-based),
/// listing the bridged `G_A` vertices with their weights, or `∅`.
pub fn describe_bridge(htilde: &Block, h: &Block, bridge_set: &[usize]) -> String {
    bridge_set
        .iter()
        .map(|&b| {
            let targets: Vec<String> = (0..htilde.rows())
                .filter(|&a| htilde.get(a, b) != 0.0)
                .map(|a| format!("{}({})", a + 1, format_weight(h.get(a, b))))
                .collect();
            let rhs = if targets.is_empty() { "∅".to_string() } else { targets.join(", ") };
            format!("{} → {}", b + 1, rhs)
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// Up to six decimals with trailing zeros dropped: `0.5`, `4`, `1.131371`.
pub fn format_weight(w: f64) -> String {
    let s = format!("{w:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}
