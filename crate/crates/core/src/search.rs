//! Branch-and-search for d-bounded-degree vertex deletion.
//!
//! At every node the detectors run in priority order; the first structure
//! found selects the branching rule. Each branch deletes a vertex set and
//! lowers the budget by its size. When no structure is found although a
//! degree-(d+1) vertex remains, the node falls back to branching on each
//! vertex of its closed neighbourhood and the event is counted.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use serde::Serialize;

use crate::analysis::{branching_factor, Recurrence, DEFAULT_TOL};
use crate::graph::{Graph, Instance, Solution, Vertex};
use crate::structures::{
    find_structure, CloseTriple, DominationMode, GoodPair, HighDegree, ProperDomination,
    ProperTriple, QuadShape, Structure, StructureViolation, TypeIIQuad, TypeIQuad,
};

/// Which rule produced a branch set. Steps are numbered 1..=7.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Step(u8),
    Fallback,
}

impl Origin {
    pub fn label(self) -> String {
        match self {
            Origin::Step(s) => format!("step{s}"),
            Origin::Fallback => "fallback".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchSet {
    pub origin: Origin,
    pub branches: Vec<Vec<Vertex>>,
}

impl BranchSet {
    /// Sorts each branch, removes repeated vertices inside a branch and drops
    /// repeated branches, keeping first occurrences in order.
    fn new(origin: Origin, branches: Vec<Vec<Vertex>>) -> Self {
        let mut out: Vec<Vec<Vertex>> = Vec::with_capacity(branches.len());
        for mut b in branches {
            b.sort_unstable();
            b.dedup();
            if !out.contains(&b) {
                out.push(b);
            }
        }
        BranchSet { origin, branches: out }
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    /// Budget decrement of every branch.
    pub fn recurrence(&self) -> Recurrence {
        Recurrence::new(self.branches.iter().map(|b| b.len() as u32).collect())
            .expect("branch sets are nonempty")
    }
}

/// Step 1: `{v}`, then every `(d(v) - d)`-subset of N(v) in lexicographic order.
pub fn branch_high_degree(g: &Graph, d: usize, s: &HighDegree) -> BranchSet {
    let nbrs: Vec<_> = g.neighbors(s.v).collect();
    let take = nbrs.len() - d;
    let mut branches = vec![vec![s.v]];
    branches.extend(nbrs.into_iter().combinations(take));
    BranchSet::new(Origin::Step(1), branches)
}

/// Step 2: one singleton per vertex of N(v) when `v` is dominated, or of
/// N[v] \ {u} when `v` dominates `u`.
pub fn branch_proper_domination(g: &Graph, _d: usize, s: &ProperDomination) -> BranchSet {
    let candidates: Vec<Vertex> = match s.mode {
        DominationMode::Dominated => g.neighbors(s.v).collect(),
        DominationMode::Dominates => g
            .closed_nbhd(s.v)
            .into_iter()
            .filter(|&w| w != s.u)
            .collect(),
    };
    BranchSet::new(
        Origin::Step(2),
        candidates.into_iter().map(|w| vec![w]).collect(),
    )
}

/// Step 3: singletons of N⁺, then pairs from N1 × N2.
pub fn branch_good_pair(_g: &Graph, _d: usize, s: &GoodPair) -> BranchSet {
    let mut branches: Vec<Vec<Vertex>> = s.n_plus.iter().map(|&w| vec![w]).collect();
    branches.extend(
        s.n1.iter()
            .cartesian_product(&s.n2)
            .map(|(&a, &b)| vec![a, b]),
    );
    BranchSet::new(Origin::Step(3), branches)
}

/// Step 4: singletons of N[v2] \ {v1, v3}, then {v1,v3}, {v1,v4}, {v0,v3}.
pub fn branch_close_triple(_g: &Graph, _d: usize, s: &CloseTriple) -> BranchSet {
    let mut branches: Vec<Vec<Vertex>> = s.n2_minus.iter().map(|&w| vec![w]).collect();
    branches.push(vec![s.v1, s.v3]);
    branches.push(vec![s.v1, s.v4]);
    branches.push(vec![s.v0, s.v3]);
    BranchSet::new(Origin::Step(4), branches)
}

/// Step 5. Every branch adds two vertices.
pub fn branch_type1_quad(_g: &Graph, _d: usize, s: &TypeIQuad) -> BranchSet {
    let (n12, n34) = (&s.n12_minus, &s.n34_minus);
    let mut branches: Vec<Vec<Vertex>> = Vec::new();
    match s.shape {
        QuadShape::Cycle => {
            branches.extend(n12.iter().cartesian_product(n34).map(|(&a, &b)| vec![a, b]));
            branches.extend(n34.iter().map(|&y| vec![s.v1, y]));
            branches.extend(n12.iter().map(|&y| vec![s.v3, y]));
            branches.push(vec![s.v1, s.v3]);
        }
        QuadShape::Path => {
            let v0 = s.v0.expect("path shape has v0");
            let v5 = s.v5.expect("path shape has v5");
            branches.push(vec![s.v1, s.v4]);
            branches.push(vec![v0, s.v3]);
            branches.push(vec![s.v2, v5]);
            // When v0 lies in N34⁻ the pair {v0, v0} would shrink to {v0}.
            // A solution of that shape avoids N12⁻ and, after exchanging v2
            // for v1, contains v3, so {v0, v3} above already covers it.
            // The same holds for v5 in N12⁻ with {v2, v5}.
            for x in [v0, s.v1] {
                branches.extend(n34.iter().filter(|&&y| y != x).map(|&y| vec![x, y]));
            }
            for x in [s.v4, v5] {
                branches.extend(n12.iter().filter(|&&y| y != x).map(|&y| vec![x, y]));
            }
            branches.extend(n12.iter().cartesian_product(n34).map(|(&a, &b)| vec![a, b]));
        }
    }
    BranchSet::new(Origin::Step(5), branches)
}

/// Step 6: N13⁻ × N24⁻, {v1, x} for x ∈ N13⁻, {v2, x} for x ∈ N24⁻, {v1, v2}.
pub fn branch_type2_quad(_g: &Graph, _d: usize, s: &TypeIIQuad) -> BranchSet {
    let (n13, n24) = (&s.n13_minus, &s.n24_minus);
    let mut branches: Vec<Vec<Vertex>> = n13
        .iter()
        .cartesian_product(n24)
        .map(|(&a, &b)| vec![a, b])
        .collect();
    branches.extend(n13.iter().map(|&y| vec![s.v1, y]));
    branches.extend(n24.iter().map(|&y| vec![s.v2, y]));
    branches.push(vec![s.v1, s.v2]);
    BranchSet::new(Origin::Step(6), branches)
}

/// Step 7, cases 1 to 5 in order.
pub fn branch_proper_triple(g: &Graph, _d: usize, s: &ProperTriple) -> BranchSet {
    let mut branches = vec![vec![s.v2], vec![s.v1, s.v3]];
    branches.extend(g.neighbors(s.v1).filter(|&w| w != s.v2).map(|w| vec![s.v3, w]));
    branches.extend(g.neighbors(s.v3).filter(|&w| w != s.v2).map(|w| vec![s.v1, w]));
    for &w1 in &s.n2_minus {
        branches.extend(s.n13_minus.iter().map(|&w2| vec![w1, w2]));
    }
    for &w1 in &s.n2_minus {
        for (&w2, &w3) in s.n1_minus.iter().cartesian_product(&s.n3_minus) {
            branches.push(vec![w1, w2, w3]);
        }
    }
    BranchSet::new(Origin::Step(7), branches)
}

/// Branches on each vertex of N[v] for the lowest-id vertex of degree `d + 1`.
pub fn branch_fallback(g: &Graph, d: usize) -> Option<BranchSet> {
    let v = g.active_vertices().find(|&v| g.deg(v) == d + 1)?;
    Some(BranchSet::new(
        Origin::Fallback,
        g.closed_nbhd(v).into_iter().map(|w| vec![w]).collect(),
    ))
}

pub fn branch(g: &Graph, d: usize, s: &Structure) -> BranchSet {
    match s {
        Structure::HighDegree(s) => branch_high_degree(g, d, s),
        Structure::ProperDomination(s) => branch_proper_domination(g, d, s),
        Structure::GoodPair(s) => branch_good_pair(g, d, s),
        Structure::CloseTriple(s) => branch_close_triple(g, d, s),
        Structure::TypeIQuad(s) => branch_type1_quad(g, d, s),
        Structure::TypeIIQuad(s) => branch_type2_quad(g, d, s),
        Structure::ProperTriple(s) => branch_proper_triple(g, d, s),
    }
}

/// The branch set the engine uses at a node whose maximum degree exceeds `d`.
/// The second value is the violation that forced a fallback, if any.
pub fn select_branching(g: &Graph, d: usize) -> (BranchSet, Option<StructureViolation>) {
    match find_structure(g, d) {
        Ok(Some(s)) => (branch(g, d, &s), None),
        Ok(None) => (
            branch_fallback(g, d).expect("max degree exceeds d"),
            Some(StructureViolation::MissingProperTriple),
        ),
        Err(e) => (branch_fallback(g, d).expect("max degree exceeds d"), Some(e)),
    }
}

/// One decrement vector observed during a search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecurrenceRecord {
    pub origin: Origin,
    pub recurrence: String,
    pub decrements: Vec<u32>,
    pub count: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Search-tree nodes visited, including leaves.
    pub nodes: u64,
    /// Branching nodes per step 1..=7.
    pub per_step: [u64; 7],
    pub fallback_count: u64,
    /// Fallbacks caused by a detector reporting a broken structural property,
    /// as opposed to finding nothing.
    pub assumption_violations: u64,
    pub max_depth: usize,
    recurrences: HashMap<(Origin, Recurrence), u64>,
}

impl SearchStats {
    /// Associative, so stats of independent searches can be combined in any order.
    pub fn merge(&mut self, other: &SearchStats) {
        self.nodes += other.nodes;
        for (a, b) in self.per_step.iter_mut().zip(other.per_step) {
            *a += b;
        }
        self.fallback_count += other.fallback_count;
        self.assumption_violations += other.assumption_violations;
        self.max_depth = self.max_depth.max(other.max_depth);
        for (key, n) in &other.recurrences {
            *self.recurrences.entry(key.clone()).or_default() += n;
        }
    }

    /// Distinct decrement vectors seen, sorted by origin then vector.
    pub fn recurrences(&self) -> Vec<RecurrenceRecord> {
        let mut out: Vec<_> = self
            .recurrences
            .iter()
            .map(|((origin, r), &count)| RecurrenceRecord {
                origin: *origin,
                recurrence: r.to_string(),
                decrements: r.decrements().to_vec(),
                count,
            })
            .collect();
        out.sort_by(|a, b| (a.origin, &a.decrements).cmp(&(b.origin, &b.decrements)));
        out
    }

    /// Largest branching factor over the observed decrement vectors, per origin.
    pub fn max_factor_by_origin(&self) -> BTreeMap<Origin, f64> {
        let mut out = BTreeMap::new();
        for (origin, r) in self.recurrences.keys() {
            let f = branching_factor(r, DEFAULT_TOL).expect("valid").value();
            let e = out.entry(*origin).or_insert(f);
            if f > *e {
                *e = f;
            }
        }
        out
    }

    pub fn max_factor(&self) -> Option<f64> {
        self.max_factor_by_origin().into_values().reduce(f64::max)
    }

    fn record(&mut self, set: &BranchSet) {
        if let Origin::Step(s) = set.origin {
            self.per_step[usize::from(s) - 1] += 1;
        }
        *self
            .recurrences
            .entry((set.origin, set.recurrence()))
            .or_default() += 1;
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub solution: Option<Solution>,
    pub stats: SearchStats,
}

struct Engine {
    graph: Graph,
    d: usize,
    partial: Vec<Vertex>,
    stats: SearchStats,
}

impl Engine {
    fn search(&mut self, k: usize, depth: usize) -> bool {
        self.stats.nodes += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        if self.graph.max_degree() <= self.d {
            return true;
        }
        if k == 0 {
            return false;
        }
        let (set, violation) = select_branching(&self.graph, self.d);
        if set.origin == Origin::Fallback {
            self.stats.fallback_count += 1;
            if !matches!(violation, None | Some(StructureViolation::MissingProperTriple)) {
                self.stats.assumption_violations += 1;
            }
        }
        self.stats.record(&set);
        for b in &set.branches {
            if b.len() > k {
                continue;
            }
            let token = self
                .graph
                .delete_vertices(b)
                .expect("branch sets hold distinct live vertices");
            self.partial.extend_from_slice(b);
            if self.search(k - b.len(), depth + 1) {
                return true;
            }
            self.partial.truncate(self.partial.len() - b.len());
            self.graph.undo(token).expect("tokens are used in stack order");
        }
        false
    }
}

/// Decides whether at most `k` deletions bring the maximum degree to `d`,
/// returning a witness if so.
pub fn solve_decision(inst: &Instance) -> Outcome {
    let mut engine = Engine {
        graph: inst.graph.clone(),
        d: inst.d,
        partial: Vec::new(),
        stats: SearchStats::default(),
    };
    let found = engine.search(inst.k, 0);
    Outcome {
        solution: found.then(|| Solution::new(engine.partial)),
        stats: engine.stats,
    }
}

/// Smallest deletion set with at most `k_max` vertices, trying k = 0, 1, ...
/// Stats are merged over all attempts.
pub fn solve_minimum_bounded(g: &Graph, d: usize, k_max: usize) -> Outcome {
    let mut stats = SearchStats::default();
    for k in 0..=k_max {
        let out = solve_decision(&Instance::new(g.clone(), d, k));
        stats.merge(&out.stats);
        if out.solution.is_some() {
            return Outcome {
                solution: out.solution,
                stats,
            };
        }
    }
    Outcome {
        solution: None,
        stats,
    }
}

/// Minimum-cardinality deletion set. Always exists: deleting every live
/// vertex works.
pub fn solve_minimum(g: &Graph, d: usize) -> (Solution, SearchStats) {
    let out = solve_minimum_bounded(g, d, g.active_count());
    (out.solution.expect("deleting every vertex is a solution"), out.stats)
}
