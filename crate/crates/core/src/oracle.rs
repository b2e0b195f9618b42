//! Ground truth for testing: exhaustive subset search, random and planted
//! instance generation, and enumeration of all labelled graphs.
//!
//! The brute-force solver works on bitmasks built from the edge list and
//! does not use the graph's degree bookkeeping or any detector.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, Solution, Vertex};
use crate::structures::{
    find_close_triple, find_good_pair, find_high_degree, find_proper_domination,
    find_proper_triple, find_type1_quad, find_type2_quad, CloseTriple, GoodPair, ProperTriple,
    QuadShape, TypeIIQuad, TypeIQuad,
};

/// Largest vertex count the brute-force solver accepts.
pub const BRUTE_FORCE_MAX_N: usize = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("brute force is limited to {BRUTE_FORCE_MAX_N} vertices, got {0}")]
    TooLarge(usize),
    #[error("edge probability {0} is outside [0, 1]")]
    BadProbability(f64),
    #[error("{plant:?} needs {need} vertices, only {n} requested")]
    TooSmall { plant: Plant, need: usize, n: usize },
    #[error("{0:?} is not defined for d = {1}")]
    BadParameters(Plant, usize),
    #[error("planted {0:?} was not found by its detector")]
    PlantLost(Plant),
}

/// Bitmask view of the live part of a graph.
struct Masks {
    ids: Vec<Vertex>,
    adj: Vec<u32>,
}

impl Masks {
    fn new(g: &Graph) -> Result<Self, OracleError> {
        let ids: Vec<Vertex> = g.active_vertices().collect();
        if ids.len() > BRUTE_FORCE_MAX_N {
            return Err(OracleError::TooLarge(ids.len()));
        }
        let mut local = vec![usize::MAX; g.n()];
        for (i, &v) in ids.iter().enumerate() {
            local[v] = i;
        }
        let mut adj = vec![0u32; ids.len()];
        for (u, v) in g.edges() {
            adj[local[u]] |= 1 << local[v];
            adj[local[v]] |= 1 << local[u];
        }
        Ok(Masks { ids, adj })
    }

    fn leaves_degree_at_most(&self, removed: u32, d: usize) -> bool {
        (0..self.adj.len())
            .filter(|i| removed & (1 << i) == 0)
            .all(|i| (self.adj[i] & !removed).count_ones() as usize <= d)
    }

    fn first_of_size(&self, d: usize, size: usize) -> Option<Solution> {
        (0..self.ids.len()).combinations(size).find_map(|combo| {
            let mask = combo.iter().fold(0u32, |m, &i| m | (1 << i));
            self.leaves_degree_at_most(mask, d)
                .then(|| Solution::new(combo.iter().map(|&i| self.ids[i]).collect()))
        })
    }
}

/// Tries every vertex subset by increasing size, then lexicographically, up
/// to size `k`. The first hit is returned.
pub fn brute_force_decision(g: &Graph, d: usize, k: usize) -> Result<Option<Solution>, OracleError> {
    let masks = Masks::new(g)?;
    let top = k.min(masks.ids.len());
    Ok((0..=top).find_map(|size| masks.first_of_size(d, size)))
}

/// Smallest deletion set; among those of that size, the lexicographically least.
pub fn brute_force_minimum(g: &Graph, d: usize) -> Result<Solution, OracleError> {
    Ok(brute_force_decision(g, d, g.active_count())?.expect("deleting everything works"))
}

/// Every labelled simple graph on `n` vertices; edge `i` of the pair order
/// (0,1), (0,2), ..., (n-2,n-1) is present when bit `i` of the index is set.
pub fn all_labeled_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(Vertex, Vertex)> = (0..n).tuple_combinations().collect();
    let count: u64 = 1 << pairs.len();
    (0..count).map(move |mask| {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &e)| e);
        Graph::from_edges(n, edges).expect("valid pairs")
    })
}

/// A configuration to embed in a generated graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plant {
    HighDegree { d: usize },
    ProperDomination { d: usize },
    GoodPair { d: usize, x: usize },
    CloseTriple { d: usize },
    TypeIQuad { d: usize, shape: QuadShape },
    TypeIIQuad { d: usize },
    ProperTriple { d: usize, x: usize },
}

impl Plant {
    pub fn d(&self) -> usize {
        match *self {
            Plant::HighDegree { d }
            | Plant::ProperDomination { d }
            | Plant::GoodPair { d, .. }
            | Plant::CloseTriple { d }
            | Plant::TypeIQuad { d, .. }
            | Plant::TypeIIQuad { d }
            | Plant::ProperTriple { d, .. } => d,
        }
    }

    /// Parses `high-degree`, `proper-domination`, `good-pair:X`,
    /// `close-triple`, `type1-cycle`, `type1-path`, `type2` or
    /// `proper-triple:X`, with the degree bound supplied separately.
    pub fn parse(tag: &str, d: usize) -> Option<Plant> {
        let (name, arg) = match tag.split_once(':') {
            Some((n, a)) => (n, Some(a.parse::<usize>().ok()?)),
            None => (tag, None),
        };
        let plant = match (name, arg) {
            ("high-degree", None) => Plant::HighDegree { d },
            ("proper-domination", None) => Plant::ProperDomination { d },
            ("good-pair", Some(x)) => Plant::GoodPair { d, x },
            ("close-triple", None) => Plant::CloseTriple { d },
            ("type1-cycle", None) => Plant::TypeIQuad {
                d,
                shape: QuadShape::Cycle,
            },
            ("type1-path", None) => Plant::TypeIQuad {
                d,
                shape: QuadShape::Path,
            },
            ("type2", None) => Plant::TypeIIQuad { d },
            ("proper-triple", Some(x)) => Plant::ProperTriple { d, x },
            _ => return None,
        };
        Some(plant)
    }
}

/// Gadget on local ids `0..size`; `core` vertices keep their neighbourhoods
/// exactly as built, `anchor` lists the vertices the definition check uses.
struct Gadget {
    size: usize,
    edges: Vec<(Vertex, Vertex)>,
    core: Vec<Vertex>,
    anchor: Vec<Vertex>,
}

struct GadgetBuilder {
    next: usize,
    edges: Vec<(Vertex, Vertex)>,
}

impl GadgetBuilder {
    fn new() -> Self {
        GadgetBuilder {
            next: 0,
            edges: Vec::new(),
        }
    }

    fn vertex(&mut self) -> Vertex {
        self.next += 1;
        self.next - 1
    }

    fn vertices(&mut self, count: usize) -> Vec<Vertex> {
        (0..count).map(|_| self.vertex()).collect()
    }

    fn edge(&mut self, u: Vertex, v: Vertex) {
        self.edges.push((u, v));
    }

    fn join(&mut self, v: Vertex, others: &[Vertex]) {
        for &w in others {
            self.edge(v, w);
        }
    }

    fn finish(self, core: Vec<Vertex>, anchor: Vec<Vertex>) -> Gadget {
        Gadget {
            size: self.next,
            edges: self.edges,
            core,
            anchor,
        }
    }
}

fn build_gadget(plant: Plant) -> Result<Gadget, OracleError> {
    let bad = || OracleError::BadParameters(plant, plant.d());
    let mut b = GadgetBuilder::new();
    let gadget = match plant {
        Plant::HighDegree { d } => {
            let c = b.vertex();
            let leaves = b.vertices(d + 2);
            b.join(c, &leaves);
            b.finish(vec![c], vec![c])
        }
        Plant::ProperDomination { d } => {
            let c = b.vertex();
            let leaves = b.vertices(d + 1);
            b.join(c, &leaves);
            b.finish(vec![c, leaves[0]], vec![c, leaves[0]])
        }
        Plant::GoodPair { d, x } => {
            if x < 1 || x + 2 > d {
                return Err(bad());
            }
            let (v1, v2) = (b.vertex(), b.vertex());
            b.edge(v1, v2);
            let common = b.vertices(x);
            b.join(v1, &common);
            b.join(v2, &common);
            let p1 = b.vertices(d - x);
            let p2 = b.vertices(d - x);
            b.join(v1, &p1);
            b.join(v2, &p2);
            b.finish(vec![v1, v2], vec![v1, v2])
        }
        Plant::CloseTriple { d } => {
            if d < 1 {
                return Err(bad());
            }
            let [v0, v1, v2, v3, v4] = [0; 5].map(|_| b.vertex());
            b.edge(v1, v2);
            b.edge(v2, v3);
            b.edge(v0, v1);
            b.edge(v3, v4);
            let common = b.vertices(d - 1);
            for v in [v1, v2, v3] {
                b.join(v, &common);
            }
            for end in [v0, v4] {
                let leaves = b.vertices(d);
                b.join(end, &leaves);
            }
            b.finish(vec![v0, v1, v2, v3, v4], vec![v1, v2, v3])
        }
        Plant::TypeIQuad { d, shape } => {
            if d < 1 {
                return Err(bad());
            }
            let [v1, v2, v3, v4] = [0; 4].map(|_| b.vertex());
            b.edge(v1, v2);
            b.edge(v2, v3);
            b.edge(v3, v4);
            let n12 = b.vertices(d - 1);
            let n34 = b.vertices(d - 1);
            b.join(v1, &n12);
            b.join(v2, &n12);
            b.join(v3, &n34);
            b.join(v4, &n34);
            match shape {
                QuadShape::Cycle => b.edge(v4, v1),
                QuadShape::Path => {
                    let (v0, v5) = (b.vertex(), b.vertex());
                    b.edge(v0, v1);
                    b.edge(v4, v5);
                }
            }
            b.finish(vec![v1, v2, v3, v4], vec![v1, v2, v3, v4])
        }
        Plant::TypeIIQuad { d } => {
            if d < 1 {
                return Err(bad());
            }
            let [v1, v2, v3, v4] = [0; 4].map(|_| b.vertex());
            for (u, v) in [(v1, v2), (v2, v3), (v3, v4), (v4, v1)] {
                b.edge(u, v);
            }
            let n13 = b.vertices(d - 1);
            let n24 = b.vertices(d - 1);
            b.join(v1, &n13);
            b.join(v3, &n13);
            b.join(v2, &n24);
            b.join(v4, &n24);
            b.finish(vec![v1, v2, v3, v4], vec![v1, v2, v3, v4])
        }
        Plant::ProperTriple { d, x } => {
            if d < 2 || x + 1 > d {
                return Err(bad());
            }
            let [v1, v2, v3] = [0; 3].map(|_| b.vertex());
            b.edge(v1, v2);
            b.edge(v2, v3);
            let n2 = b.vertices(d - 1);
            b.join(v2, &n2);
            let n13 = b.vertices(x);
            b.join(v1, &n13);
            b.join(v3, &n13);
            let n1 = b.vertices(d - x);
            let n3 = b.vertices(d - x);
            b.join(v1, &n1);
            b.join(v3, &n3);
            b.finish(vec![v1, v2, v3], vec![v1, v2, v3])
        }
    };
    Ok(gadget)
}

/// Parameters for [`generate`].
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
    pub plant: Option<Plant>,
}

impl GeneratorSpec {
    pub fn random(n: usize, p: f64, seed: u64) -> Self {
        GeneratorSpec {
            n,
            p,
            seed,
            plant: None,
        }
    }

    pub fn planted(n: usize, p: f64, seed: u64, plant: Plant) -> Self {
        GeneratorSpec {
            n,
            p,
            seed,
            plant: Some(plant),
        }
    }
}

/// Deterministic instance generator.
///
/// The stream is ChaCha8 seeded with `seed` via `seed_from_u64`. With a plant,
/// the gadget's local ids are first mapped to vertex ids by shuffling
/// `0..n` and taking a prefix. Then, for every pair `u < v` in lexicographic
/// order, one `f64` in `[0, 1)` is drawn and the edge is added when the draw
/// is below `p`, unless either endpoint is a core gadget vertex. A draw is
/// consumed for every pair, so the same `(n, p, seed)` always sees the same
/// stream.
pub fn generate(spec: &GeneratorSpec) -> Result<Graph, OracleError> {
    if !(0.0..=1.0).contains(&spec.p) {
        return Err(OracleError::BadProbability(spec.p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut locked = vec![false; spec.n];
    let mut edges = Vec::new();
    let mut anchor = Vec::new();
    if let Some(plant) = spec.plant {
        let gadget = build_gadget(plant)?;
        if gadget.size > spec.n {
            return Err(OracleError::TooSmall {
                plant,
                need: gadget.size,
                n: spec.n,
            });
        }
        let mut ids: Vec<Vertex> = (0..spec.n).collect();
        ids.shuffle(&mut rng);
        edges.extend(gadget.edges.iter().map(|&(u, v)| (ids[u], ids[v])));
        for &c in &gadget.core {
            locked[ids[c]] = true;
        }
        anchor = gadget.anchor.iter().map(|&a| ids[a]).collect();
    }
    for u in 0..spec.n {
        for v in u + 1..spec.n {
            let draw: f64 = rng.gen();
            if draw < spec.p && !locked[u] && !locked[v] {
                edges.push((u, v));
            }
        }
    }
    let g = Graph::from_edges(spec.n, edges).expect("generated edges are valid");
    if let Some(plant) = spec.plant {
        if !plant_holds(&g, plant, &anchor) {
            return Err(OracleError::PlantLost(plant));
        }
    }
    Ok(g)
}

/// The planted tuple satisfies its definition and the matching detector
/// reports a structure (possibly a different, lexicographically smaller one,
/// or a structural-property violation on one).
fn plant_holds(g: &Graph, plant: Plant, a: &[Vertex]) -> bool {
    let d = plant.d();
    match plant {
        Plant::HighDegree { .. } => g.deg(a[0]) >= d + 2 && find_high_degree(g, d).is_some(),
        Plant::ProperDomination { .. } => {
            crate::structures::dominates(g, d, a[0], a[1]) && find_proper_domination(g, d).is_some()
        }
        Plant::GoodPair { .. } => {
            GoodPair::try_at(g, d, a[0], a[1]).is_some() && find_good_pair(g, d).is_some()
        }
        Plant::CloseTriple { .. } => {
            matches!(CloseTriple::try_at(g, d, a[0], a[1], a[2]), Ok(Some(_)))
                && !matches!(find_close_triple(g, d), Ok(None))
        }
        Plant::TypeIQuad { shape, .. } => {
            TypeIQuad::shape_at(g, d, [a[0], a[1], a[2], a[3]]) == Some(shape)
                && !matches!(find_type1_quad(g, d), Ok(None))
        }
        Plant::TypeIIQuad { .. } => {
            TypeIIQuad::matches(g, d, [a[0], a[1], a[2], a[3]])
                && !matches!(find_type2_quad(g, d), Ok(None))
        }
        Plant::ProperTriple { .. } => {
            ProperTriple::matches(g, d, [a[0], a[1], a[2]])
                && !matches!(find_proper_triple(g, d), Ok(None))
        }
    }
}
