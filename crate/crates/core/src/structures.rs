//! Detection of the configurations that drive the seven branching steps.
//!
//! Every detector scans candidate tuples in lexicographic order of vertex id
//! and returns the first one satisfying the raw definition, so the result is
//! the lexicographically smallest qualifying tuple. Detectors are pure reads;
//! the search recomputes them from scratch at each node.
//!
//! "High degree" below always means degree exactly `d + 1`; vertices of
//! degree `>= d + 2` are consumed by the first step before any other detector
//! is consulted.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, Vertex};

/// A structural property that the branching rules rely on did not hold.
///
/// None of these should be reachable when the detectors are consulted in
/// priority order; the search treats one as a signal to fall back to the
/// plain closed-neighbourhood rule.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureViolation {
    #[error("close triple ({v1}, {v2}, {v3}): {endpoint} does not have exactly one neighbour outside N[{v2}]")]
    CloseTripleEndpoint {
        v1: Vertex,
        v2: Vertex,
        v3: Vertex,
        endpoint: Vertex,
    },
    #[error("close triple ({v1}, {v2}, {v3}): outer neighbour {outer} has degree {degree}, expected d + 1")]
    CloseTripleOuterDegree {
        v1: Vertex,
        v2: Vertex,
        v3: Vertex,
        outer: Vertex,
        degree: usize,
    },
    #[error("type-I quadruple {0:?}: N12- and N34- intersect")]
    TypeIOverlap([Vertex; 4]),
    #[error("type-I quadruple {0:?}: path end has no unique outer neighbour")]
    TypeIPathEnd([Vertex; 4]),
    #[error("type-II quadruple {0:?}: N13- and N24- intersect")]
    TypeIIOverlap([Vertex; 4]),
    #[error("proper triple {0:?}: the middle vertex shares a neighbour with an end")]
    ProperTripleOverlap([Vertex; 3]),
    #[error("no proper triple although a degree-(d+1) vertex remains")]
    MissingProperTriple,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DominationMode {
    /// `u` dominates `v`.
    Dominated,
    /// `v` dominates its neighbour `u`.
    Dominates,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HighDegree {
    pub v: Vertex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProperDomination {
    pub v: Vertex,
    pub u: Vertex,
    pub mode: DominationMode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodPair {
    pub v1: Vertex,
    pub v2: Vertex,
    /// Common neighbours plus `v1` and `v2`.
    pub n_plus: Vec<Vertex>,
    pub n1: Vec<Vertex>,
    pub n2: Vec<Vertex>,
    pub x: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CloseTriple {
    pub v1: Vertex,
    pub v2: Vertex,
    pub v3: Vertex,
    /// The neighbour of `v1` outside N[v2].
    pub v0: Vertex,
    /// The neighbour of `v3` outside N[v2].
    pub v4: Vertex,
    /// N[v2] \ {v1, v3}.
    pub n2_minus: Vec<Vertex>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadShape {
    Cycle,
    Path,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeIQuad {
    pub v1: Vertex,
    pub v2: Vertex,
    pub v3: Vertex,
    pub v4: Vertex,
    pub shape: QuadShape,
    pub n12_minus: Vec<Vertex>,
    pub n34_minus: Vec<Vertex>,
    /// Path shape only: N(v1) \ N[v2].
    pub v0: Option<Vertex>,
    /// Path shape only: N(v4) \ N[v3]. May equal `v0`.
    pub v5: Option<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeIIQuad {
    pub v1: Vertex,
    pub v2: Vertex,
    pub v3: Vertex,
    pub v4: Vertex,
    pub n13_minus: Vec<Vertex>,
    pub n24_minus: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProperTriple {
    pub v1: Vertex,
    pub v2: Vertex,
    pub v3: Vertex,
    /// (N(v1) ∩ N(v3)) \ {v2}.
    pub n13_minus: Vec<Vertex>,
    /// N(v1) \ N(v3).
    pub n1_minus: Vec<Vertex>,
    /// N(v3) \ N(v1).
    pub n3_minus: Vec<Vertex>,
    /// N(v2) \ {v1, v3}.
    pub n2_minus: Vec<Vertex>,
    pub x: usize,
}

/// One branchable configuration, in priority order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Structure {
    HighDegree(HighDegree),
    ProperDomination(ProperDomination),
    GoodPair(GoodPair),
    CloseTriple(CloseTriple),
    TypeIQuad(TypeIQuad),
    TypeIIQuad(TypeIIQuad),
    ProperTriple(ProperTriple),
}

impl Structure {
    /// The step number (1..=7) that handles this structure.
    pub fn step(&self) -> u8 {
        match self {
            Structure::HighDegree(_) => 1,
            Structure::ProperDomination(_) => 2,
            Structure::GoodPair(_) => 3,
            Structure::CloseTriple(_) => 4,
            Structure::TypeIQuad(_) => 5,
            Structure::TypeIIQuad(_) => 6,
            Structure::ProperTriple(_) => 7,
        }
    }
}

/// Relation between two vertices of degree `d + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairClass {
    /// Not adjacent, or not both of degree `d + 1`.
    NotApplicable,
    Good(usize),
    Close,
    /// Adjacent with no common neighbour.
    Disjoint,
    /// Adjacent with `d` common neighbours, i.e. equal closed neighbourhoods.
    Twins,
}

#[inline]
fn is_high(g: &Graph, d: usize, v: Vertex) -> bool {
    g.deg(v) == d + 1
}

/// Classifies an adjacent pair of degree-(d+1) vertices by the size of their
/// common neighbourhood. With `d = 1` a pair without common neighbours also
/// meets the close-pair predicate; it is reported as `Disjoint` here while
/// the detectors use [`is_close_pair`].
pub fn classify_pair(g: &Graph, d: usize, u: Vertex, v: Vertex) -> PairClass {
    if u == v || !g.adjacent(u, v) || !is_high(g, d, u) || !is_high(g, d, v) {
        return PairClass::NotApplicable;
    }
    let x = g.common_count(u, v);
    if x == 0 {
        PairClass::Disjoint
    } else if x + 2 <= d {
        PairClass::Good(x)
    } else if x + 1 == d {
        PairClass::Close
    } else {
        PairClass::Twins
    }
}

/// Adjacent degree-(d+1) vertices with exactly `d - 1` common neighbours.
pub fn is_close_pair(g: &Graph, d: usize, u: Vertex, v: Vertex) -> bool {
    d >= 1
        && u != v
        && g.adjacent(u, v)
        && is_high(g, d, u)
        && is_high(g, d, v)
        && g.common_count(u, v) == d - 1
}

/// Nonadjacent degree-(d+1) vertices with identical neighbour sets.
pub fn is_similar_pair(g: &Graph, d: usize, u: Vertex, v: Vertex) -> bool {
    u != v
        && g.is_active(u)
        && g.is_active(v)
        && !g.adjacent(u, v)
        && is_high(g, d, u)
        && is_high(g, d, v)
        && g.neighbors(u).eq(g.neighbors(v))
}

/// `a` dominates `b` when every vertex of degree `>= d + 1` in N[b] lies in N[a].
pub fn dominates(g: &Graph, d: usize, a: Vertex, b: Vertex) -> bool {
    let in_closed_a = |w: Vertex| w == a || g.adjacent(a, w);
    (b == a || g.deg(b) < d + 1 || in_closed_a(b))
        && g.neighbors(b).all(|w| g.deg(w) < d + 1 || in_closed_a(w))
}

fn minus(a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
    a.iter().copied().filter(|w| b.binary_search(w).is_err()).collect()
}

fn intersects(a: &[Vertex], b: &[Vertex]) -> bool {
    a.iter().any(|w| b.binary_search(w).is_ok())
}

/// The lowest-id vertex of degree `>= d + 2`.
pub fn find_high_degree(g: &Graph, d: usize) -> Option<HighDegree> {
    g.active_vertices()
        .find(|&v| g.deg(v) >= d + 2)
        .map(|v| HighDegree { v })
}

/// A degree-(d+1) vertex `v` dominated by some `u`, or dominating a
/// neighbour `u`. A dominator of a degree-(d+1) vertex is always one of its
/// neighbours, so only neighbours are scanned. For equal `(v, u)` the
/// dominated mode is reported first.
pub fn find_proper_domination(g: &Graph, d: usize) -> Option<ProperDomination> {
    for v in g.active_vertices().filter(|&v| is_high(g, d, v)) {
        for u in g.neighbors(v) {
            if dominates(g, d, u, v) {
                return Some(ProperDomination {
                    v,
                    u,
                    mode: DominationMode::Dominated,
                });
            }
            if dominates(g, d, v, u) {
                return Some(ProperDomination {
                    v,
                    u,
                    mode: DominationMode::Dominates,
                });
            }
        }
    }
    None
}

impl GoodPair {
    pub fn try_at(g: &Graph, d: usize, v1: Vertex, v2: Vertex) -> Option<Self> {
        let PairClass::Good(x) = classify_pair(g, d, v1, v2) else {
            return None;
        };
        let mut n_plus = g.common(v1, v2);
        n_plus.extend([v1, v2]);
        n_plus.sort_unstable();
        let n1 = minus(&g.neighbors(v1).collect::<Vec<_>>(), &n_plus);
        let n2 = minus(&g.neighbors(v2).collect::<Vec<_>>(), &n_plus);
        Some(GoodPair {
            v1,
            v2,
            n_plus,
            n1,
            n2,
            x,
        })
    }
}

pub fn find_good_pair(g: &Graph, d: usize) -> Option<GoodPair> {
    for v1 in g.active_vertices().filter(|&v| is_high(g, d, v)) {
        for v2 in g.neighbors(v1).filter(|&v2| v2 > v1) {
            if let Some(p) = GoodPair::try_at(g, d, v1, v2) {
                return Some(p);
            }
        }
    }
    None
}

fn unique_outside(g: &Graph, v: Vertex, closed: &[Vertex]) -> Option<Vertex> {
    let mut outside = g.neighbors(v).filter(|w| closed.binary_search(w).is_err());
    let first = outside.next()?;
    outside.next().is_none().then_some(first)
}

impl CloseTriple {
    /// Checks the raw definition for the ordered triple and resolves the
    /// outer neighbours. `Ok(None)` means the triple is not close.
    pub fn try_at(
        g: &Graph,
        d: usize,
        v1: Vertex,
        v2: Vertex,
        v3: Vertex,
    ) -> Result<Option<Self>, StructureViolation> {
        if v1 == v3
            || g.adjacent(v1, v3)
            || !is_close_pair(g, d, v1, v2)
            || !is_close_pair(g, d, v2, v3)
        {
            return Ok(None);
        }
        let closed2 = g.closed_nbhd(v2);
        let outer = |end: Vertex| {
            unique_outside(g, end, &closed2).ok_or(StructureViolation::CloseTripleEndpoint {
                v1,
                v2,
                v3,
                endpoint: end,
            })
        };
        let v0 = outer(v1)?;
        let v4 = outer(v3)?;
        for o in [v0, v4] {
            if !is_high(g, d, o) {
                return Err(StructureViolation::CloseTripleOuterDegree {
                    v1,
                    v2,
                    v3,
                    outer: o,
                    degree: g.deg(o),
                });
            }
        }
        let n2_minus = closed2.into_iter().filter(|&w| w != v1 && w != v3).collect();
        Ok(Some(CloseTriple {
            v1,
            v2,
            v3,
            v0,
            v4,
            n2_minus,
        }))
    }
}

pub fn find_close_triple(g: &Graph, d: usize) -> Result<Option<CloseTriple>, StructureViolation> {
    if d == 0 {
        return Ok(None);
    }
    for v1 in g.active_vertices().filter(|&v| is_high(g, d, v)) {
        for v2 in g.neighbors(v1).filter(|&v2| is_close_pair(g, d, v1, v2)) {
            for v3 in g.neighbors(v2) {
                if let Some(t) = CloseTriple::try_at(g, d, v1, v2, v3)? {
                    return Ok(Some(t));
                }
            }
        }
    }
    Ok(None)
}

impl TypeIQuad {
    /// Shape of the ordered quadruple if it satisfies the raw definition.
    pub fn shape_at(g: &Graph, d: usize, q: [Vertex; 4]) -> Option<QuadShape> {
        let [v1, v2, v3, v4] = q;
        if v1 == v3 || v2 == v4 || v1 == v4 {
            return None;
        }
        let ok = is_close_pair(g, d, v1, v2)
            && is_close_pair(g, d, v3, v4)
            && g.adjacent(v2, v3)
            && !g.adjacent(v1, v3)
            && !g.adjacent(v2, v4);
        if !ok {
            None
        } else if g.adjacent(v1, v4) {
            Some(QuadShape::Cycle)
        } else {
            Some(QuadShape::Path)
        }
    }

    pub fn try_at(g: &Graph, d: usize, q: [Vertex; 4]) -> Result<Option<Self>, StructureViolation> {
        let Some(shape) = Self::shape_at(g, d, q) else {
            return Ok(None);
        };
        let [v1, v2, v3, v4] = q;
        let n12_minus = g.common(v1, v2);
        let n34_minus = g.common(v3, v4);
        if intersects(&n12_minus, &n34_minus) {
            return Err(StructureViolation::TypeIOverlap(q));
        }
        let (v0, v5) = match shape {
            QuadShape::Cycle => (None, None),
            QuadShape::Path => {
                let v0 = unique_outside(g, v1, &g.closed_nbhd(v2));
                let v5 = unique_outside(g, v4, &g.closed_nbhd(v3));
                match (v0, v5) {
                    (Some(a), Some(b)) => (Some(a), Some(b)),
                    _ => return Err(StructureViolation::TypeIPathEnd(q)),
                }
            }
        };
        Ok(Some(TypeIQuad {
            v1,
            v2,
            v3,
            v4,
            shape,
            n12_minus,
            n34_minus,
            v0,
            v5,
        }))
    }
}

pub fn find_type1_quad(g: &Graph, d: usize) -> Result<Option<TypeIQuad>, StructureViolation> {
    if d == 0 {
        return Ok(None);
    }
    for v1 in g.active_vertices().filter(|&v| is_high(g, d, v)) {
        for v2 in g.neighbors(v1).filter(|&v2| is_close_pair(g, d, v1, v2)) {
            for v3 in g.neighbors(v2).filter(|&v3| v3 != v1 && is_high(g, d, v3)) {
                for v4 in g.neighbors(v3) {
                    if let Some(q) = TypeIQuad::try_at(g, d, [v1, v2, v3, v4])? {
                        return Ok(Some(q));
                    }
                }
            }
        }
    }
    Ok(None)
}

impl TypeIIQuad {
    pub fn matches(g: &Graph, d: usize, q: [Vertex; 4]) -> bool {
        let [v1, v2, v3, v4] = q;
        g.adjacent(v1, v2)
            && g.adjacent(v2, v3)
            && g.adjacent(v3, v4)
            && is_similar_pair(g, d, v1, v3)
            && is_similar_pair(g, d, v2, v4)
    }

    pub fn try_at(g: &Graph, d: usize, q: [Vertex; 4]) -> Result<Option<Self>, StructureViolation> {
        if !Self::matches(g, d, q) {
            return Ok(None);
        }
        let [v1, v2, v3, v4] = q;
        let n13_minus: Vec<_> = g.neighbors(v1).filter(|&w| w != v2 && w != v4).collect();
        let n24_minus: Vec<_> = g.neighbors(v2).filter(|&w| w != v1 && w != v3).collect();
        if intersects(&n13_minus, &n24_minus) {
            return Err(StructureViolation::TypeIIOverlap(q));
        }
        Ok(Some(TypeIIQuad {
            v1,
            v2,
            v3,
            v4,
            n13_minus,
            n24_minus,
        }))
    }
}

pub fn find_type2_quad(g: &Graph, d: usize) -> Result<Option<TypeIIQuad>, StructureViolation> {
    for v1 in g.active_vertices().filter(|&v| is_high(g, d, v)) {
        for v2 in g.neighbors(v1).filter(|&v| is_high(g, d, v)) {
            for v3 in g.neighbors(v2).filter(|&v3| is_similar_pair(g, d, v1, v3)) {
                for v4 in g.neighbors(v3) {
                    if let Some(q) = TypeIIQuad::try_at(g, d, [v1, v2, v3, v4])? {
                        return Ok(Some(q));
                    }
                }
            }
        }
    }
    Ok(None)
}

impl ProperTriple {
    pub fn matches(g: &Graph, d: usize, t: [Vertex; 3]) -> bool {
        let [v1, v2, v3] = t;
        v1 != v3
            && g.adjacent(v1, v2)
            && g.adjacent(v2, v3)
            && !g.adjacent(v1, v3)
            && is_high(g, d, v1)
            && is_high(g, d, v2)
            && is_high(g, d, v3)
            && !is_close_pair(g, d, v1, v2)
            && !is_close_pair(g, d, v2, v3)
            && !is_similar_pair(g, d, v1, v3)
    }

    pub fn try_at(g: &Graph, d: usize, t: [Vertex; 3]) -> Result<Option<Self>, StructureViolation> {
        if !Self::matches(g, d, t) {
            return Ok(None);
        }
        let [v1, v2, v3] = t;
        if g.common_count(v1, v2) > 0 || g.common_count(v2, v3) > 0 {
            return Err(StructureViolation::ProperTripleOverlap(t));
        }
        let n1: Vec<_> = g.neighbors(v1).collect();
        let n3: Vec<_> = g.neighbors(v3).collect();
        let n13_minus: Vec<_> = g.common(v1, v3).into_iter().filter(|&w| w != v2).collect();
        let n1_minus = minus(&n1, &n3);
        let n3_minus = minus(&n3, &n1);
        let n2_minus = g.neighbors(v2).filter(|&w| w != v1 && w != v3).collect();
        let x = n13_minus.len();
        Ok(Some(ProperTriple {
            v1,
            v2,
            v3,
            n13_minus,
            n1_minus,
            n3_minus,
            n2_minus,
            x,
        }))
    }
}

pub fn find_proper_triple(g: &Graph, d: usize) -> Result<Option<ProperTriple>, StructureViolation> {
    for v1 in g.active_vertices().filter(|&v| is_high(g, d, v)) {
        for v2 in g.neighbors(v1).filter(|&v| is_high(g, d, v)) {
            for v3 in g.neighbors(v2) {
                if let Some(t) = ProperTriple::try_at(g, d, [v1, v2, v3])? {
                    return Ok(Some(t));
                }
            }
        }
    }
    Ok(None)
}

/// Runs the detectors in priority order and returns the first structure found.
pub fn find_structure(g: &Graph, d: usize) -> Result<Option<Structure>, StructureViolation> {
    if let Some(s) = find_high_degree(g, d) {
        return Ok(Some(Structure::HighDegree(s)));
    }
    if let Some(s) = find_proper_domination(g, d) {
        return Ok(Some(Structure::ProperDomination(s)));
    }
    if let Some(s) = find_good_pair(g, d) {
        return Ok(Some(Structure::GoodPair(s)));
    }
    if let Some(s) = find_close_triple(g, d)? {
        return Ok(Some(Structure::CloseTriple(s)));
    }
    if let Some(s) = find_type1_quad(g, d)? {
        return Ok(Some(Structure::TypeIQuad(s)));
    }
    if let Some(s) = find_type2_quad(g, d)? {
        return Ok(Some(Structure::TypeIIQuad(s)));
    }
    Ok(find_proper_triple(g, d)?.map(Structure::ProperTriple))
}
