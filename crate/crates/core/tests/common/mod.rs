//! Definitional scans used as an independent reference for the detectors.
//!
//! Everything here works on a dense adjacency matrix built from the edge
//! list and enumerates vertex tuples in lexicographic order, applying the
//! raw definitions without the library's predicates.

#![allow(dead_code)]

use bddv::Graph;

pub struct Dense {
    pub live: Vec<bool>,
    pub adj: Vec<Vec<bool>>,
}

impl Dense {
    pub fn new(g: &Graph) -> Self {
        let n = g.n();
        let mut live = vec![false; n];
        for v in g.active_vertices() {
            live[v] = true;
        }
        let mut adj = vec![vec![false; n]; n];
        for (u, v) in g.edges() {
            adj[u][v] = true;
            adj[v][u] = true;
        }
        Dense { live, adj }
    }

    pub fn n(&self) -> usize {
        self.live.len()
    }

    pub fn verts(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.live[v]).collect()
    }

    pub fn deg(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&b| b).count()
    }

    pub fn nbrs(&self, v: usize) -> Vec<usize> {
        (0..self.n()).filter(|&w| self.adj[v][w]).collect()
    }

    pub fn common(&self, u: usize, v: usize) -> Vec<usize> {
        (0..self.n()).filter(|&w| self.adj[u][w] && self.adj[v][w]).collect()
    }

    fn full(&self, d: usize, v: usize) -> bool {
        self.live[v] && self.deg(v) == d + 1
    }

    fn close(&self, d: usize, u: usize, v: usize) -> bool {
        d >= 1
            && u != v
            && self.adj[u][v]
            && self.full(d, u)
            && self.full(d, v)
            && self.common(u, v).len() + 1 == d
    }

    fn similar(&self, d: usize, u: usize, v: usize) -> bool {
        u != v
            && !self.adj[u][v]
            && self.full(d, u)
            && self.full(d, v)
            && self.nbrs(u) == self.nbrs(v)
    }

    /// Every vertex of degree at least d+1 in N[b] lies in N[a].
    fn dominates(&self, d: usize, a: usize, b: usize) -> bool {
        let mut closed_b = self.nbrs(b);
        closed_b.push(b);
        closed_b
            .into_iter()
            .filter(|&w| self.deg(w) > d)
            .all(|w| w == a || self.adj[a][w])
    }

    pub fn max_degree(&self) -> usize {
        self.verts().into_iter().map(|v| self.deg(v)).max().unwrap_or(0)
    }
}

/// Lexicographically least qualifying tuple for each detector.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScanResult {
    pub high_degree: Option<usize>,
    /// (v, u, dominated?) with dominated ordered first.
    pub domination: Option<(usize, usize, bool)>,
    pub good_pair: Option<(usize, usize)>,
    pub close_triple: Option<(usize, usize, usize)>,
    /// The flag is true for the cycle shape.
    pub type1: Option<([usize; 4], bool)>,
    pub type2: Option<[usize; 4]>,
    pub proper_triple: Option<(usize, usize, usize)>,
}

impl ScanResult {
    /// First nonempty level, 1..=7.
    pub fn first_step(&self) -> Option<u8> {
        [
            self.high_degree.is_some(),
            self.domination.is_some(),
            self.good_pair.is_some(),
            self.close_triple.is_some(),
            self.type1.is_some(),
            self.type2.is_some(),
            self.proper_triple.is_some(),
        ]
        .iter()
        .position(|&b| b)
        .map(|i| i as u8 + 1)
    }
}

pub fn scan(g: &Graph, d: usize) -> ScanResult {
    let s = Dense::new(g);
    let vs = s.verts();
    let mut out = ScanResult::default();

    out.high_degree = vs.iter().copied().find(|&v| s.deg(v) >= d + 2);

    'dom: for &v in &vs {
        if !s.full(d, v) {
            continue;
        }
        for &u in &vs {
            if u == v {
                continue;
            }
            if s.dominates(d, u, v) {
                out.domination = Some((v, u, true));
                break 'dom;
            }
            if s.adj[v][u] && s.dominates(d, v, u) {
                out.domination = Some((v, u, false));
                break 'dom;
            }
        }
    }

    'good: for &a in &vs {
        for &b in &vs {
            if a < b && s.adj[a][b] && s.full(d, a) && s.full(d, b) {
                let x = s.common(a, b).len();
                if x >= 1 && x + 2 <= d {
                    out.good_pair = Some((a, b));
                    break 'good;
                }
            }
        }
    }

    'triple: for &a in &vs {
        for &b in &vs {
            for &c in &vs {
                if a != c && !s.adj[a][c] && s.close(d, a, b) && s.close(d, b, c) {
                    out.close_triple = Some((a, b, c));
                    break 'triple;
                }
            }
        }
    }

    'q1: for &a in &vs {
        for &b in &vs {
            for &c in &vs {
                for &e in &vs {
                    let distinct = a != b && a != c && a != e && b != c && b != e && c != e;
                    if distinct
                        && s.close(d, a, b)
                        && s.close(d, c, e)
                        && s.adj[b][c]
                        && !s.adj[a][c]
                        && !s.adj[b][e]
                    {
                        out.type1 = Some(([a, b, c, e], s.adj[a][e]));
                        break 'q1;
                    }
                }
            }
        }
    }

    'q2: for &a in &vs {
        for &b in &vs {
            for &c in &vs {
                for &e in &vs {
                    if s.adj[a][b]
                        && s.adj[b][c]
                        && s.adj[c][e]
                        && s.adj[e][a]
                        && s.similar(d, a, c)
                        && s.similar(d, b, e)
                    {
                        out.type2 = Some([a, b, c, e]);
                        break 'q2;
                    }
                }
            }
        }
    }

    'pt: for &a in &vs {
        for &b in &vs {
            for &c in &vs {
                let path = a != c && s.adj[a][b] && s.adj[b][c] && !s.adj[a][c];
                if path
                    && s.full(d, a)
                    && s.full(d, b)
                    && s.full(d, c)
                    && !s.close(d, a, b)
                    && !s.close(d, b, c)
                    && !s.close(d, a, c)
                    && !s.similar(d, a, b)
                    && !s.similar(d, b, c)
                    && !s.similar(d, a, c)
                {
                    out.proper_triple = Some((a, b, c));
                    break 'pt;
                }
            }
        }
    }
    out
}

/// Minimum deletion set size by exhaustive search over the dense matrix.
pub fn dense_minimum(g: &Graph, d: usize) -> usize {
    let s = Dense::new(g);
    let vs = s.verts();
    let n = vs.len();
    assert!(n <= 20);
    let mut best = n;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size >= best {
            continue;
        }
        let ok = (0..n).filter(|i| mask & (1 << i) == 0).all(|i| {
            (0..n)
                .filter(|&j| mask & (1 << j) == 0 && s.adj[vs[i]][vs[j]])
                .count()
                <= d
        });
        if ok {
            best = size;
        }
    }
    best
}

/// Independent check that deleting `set` leaves maximum degree at most `d`.
pub fn certificate_ok(g: &Graph, d: usize, set: &[usize]) -> bool {
    let s = Dense::new(g);
    let gone = |v: usize| set.contains(&v);
    set.iter().all(|&v| v < s.n() && s.live[v])
        && s.verts()
            .into_iter()
            .filter(|&v| !gone(v))
            .all(|v| s.nbrs(v).into_iter().filter(|&w| !gone(w)).count() <= d)
}

use bddv::structures::{
    find_close_triple, find_good_pair, find_high_degree, find_proper_domination,
    find_proper_triple, find_structure, find_type1_quad, find_type2_quad, DominationMode,
    QuadShape, Structure,
};

fn tuple_of<T, U: PartialEq + std::fmt::Debug, E>(
    name: &str,
    got: Result<Option<T>, E>,
    key: impl Fn(&T) -> U,
    want: &Option<U>,
    errs: &mut Vec<String>,
) {
    match got {
        Ok(got) => {
            let got = got.as_ref().map(key);
            if &got != want {
                errs.push(format!("{name}: detector {got:?}, scan {want:?}"));
            }
        }
        Err(_) if want.is_some() => {}
        Err(_) => errs.push(format!("{name}: detector reported a violation, scan found nothing")),
    }
}

/// Compares every detector with the definitional scan. Detectors are run
/// regardless of priority; when the graph also satisfies the priority
/// preconditions, the structure chosen by `find_structure` must be the
/// scan's first level and must obey its set invariants.
pub fn check_detectors(g: &Graph, d: usize) -> Vec<String> {
    let want = scan(g, d);
    let mut errs = Vec::new();
    tuple_of::<_, _, ()>("high-degree", Ok(find_high_degree(g, d)), |h| h.v, &want.high_degree, &mut errs);
    tuple_of::<_, _, ()>(
        "domination",
        Ok(find_proper_domination(g, d)),
        |p| (p.v, p.u, p.mode == DominationMode::Dominated),
        &want.domination,
        &mut errs,
    );
    tuple_of::<_, _, ()>("good-pair", Ok(find_good_pair(g, d)), |p| (p.v1, p.v2), &want.good_pair, &mut errs);
    tuple_of("close-triple", find_close_triple(g, d), |t| (t.v1, t.v2, t.v3), &want.close_triple, &mut errs);
    tuple_of(
        "type1",
        find_type1_quad(g, d),
        |q| ([q.v1, q.v2, q.v3, q.v4], q.shape == QuadShape::Cycle),
        &want.type1,
        &mut errs,
    );
    tuple_of("type2", find_type2_quad(g, d), |q| [q.v1, q.v2, q.v3, q.v4], &want.type2, &mut errs);
    tuple_of("proper-triple", find_proper_triple(g, d), |t| (t.v1, t.v2, t.v3), &want.proper_triple, &mut errs);

    let s = Dense::new(g);
    if s.max_degree() > d + 1 {
        if find_structure(g, d).ok().flatten().map(|s| s.step()) != Some(1) {
            errs.push("high degree not chosen first".into());
        }
        return errs;
    }
    match find_structure(g, d) {
        Err(e) => errs.push(format!("structural violation {e:?}")),
        Ok(None) => {
            if s.max_degree() == d + 1 {
                errs.push("no structure although a degree-(d+1) vertex exists".into());
            }
        }
        Ok(Some(st)) => {
            if Some(st.step()) != want.first_step() {
                errs.push(format!("priority: chose step {}, scan {:?}", st.step(), want.first_step()));
            }
            structure_invariants(&s, d, &st, &mut errs);
        }
    }
    errs
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

fn structure_invariants(s: &Dense, d: usize, st: &Structure, errs: &mut Vec<String>) {
    let minus = |a: &[usize], b: &[usize]| -> Vec<usize> {
        a.iter().copied().filter(|w| !b.contains(w)).collect()
    };
    let disjoint = |a: &[usize], b: &[usize]| a.iter().all(|w| !b.contains(w));
    match st {
        Structure::GoodPair(p) => {
            let x = s.common(p.v1, p.v2).len();
            if p.x != x || p.n_plus.len() != x + 2 || p.n1.len() != d - x || p.n2.len() != d - x {
                errs.push(format!("good pair sets {p:?}"));
            }
        }
        Structure::CloseTriple(t) => {
            let triple: Vec<usize> = s
                .common(t.v1, t.v2)
                .into_iter()
                .filter(|&w| s.adj[t.v3][w])
                .collect();
            let n2 = minus(&s.nbrs(t.v2), &[t.v1, t.v3]);
            let mut closed2 = s.nbrs(t.v2);
            closed2.push(t.v2);
            let n2_minus = sorted(minus(&closed2, &[t.v1, t.v3]));
            let outer0 = minus(&s.nbrs(t.v1), &closed2);
            let outer4 = minus(&s.nbrs(t.v3), &closed2);
            if triple != n2
                || t.n2_minus != n2_minus
                || t.n2_minus.len() != d
                || outer0 != vec![t.v0]
                || outer4 != vec![t.v4]
                || s.deg(t.v0) != d + 1
                || s.deg(t.v4) != d + 1
            {
                errs.push(format!("close triple sets {t:?}"));
            }
        }
        Structure::TypeIQuad(q) => {
            let n12 = s.common(q.v1, q.v2);
            let n34 = s.common(q.v3, q.v4);
            if q.n12_minus != n12 || q.n34_minus != n34 || !disjoint(&n12, &n34) {
                errs.push(format!("type-I sets {q:?}"));
            }
            if q.shape == QuadShape::Path {
                let mut c2 = s.nbrs(q.v2);
                c2.push(q.v2);
                let mut c3 = s.nbrs(q.v3);
                c3.push(q.v3);
                let v0 = minus(&s.nbrs(q.v1), &c2);
                let v5 = minus(&s.nbrs(q.v4), &c3);
                if q.v0.map(|v| vec![v]) != Some(v0) || q.v5.map(|v| vec![v]) != Some(v5) {
                    errs.push(format!("type-I path ends {q:?}"));
                }
            }
        }
        Structure::TypeIIQuad(q) => {
            let n13 = minus(&s.nbrs(q.v1), &[q.v2, q.v4]);
            let n24 = minus(&s.nbrs(q.v2), &[q.v1, q.v3]);
            if q.n13_minus != n13
                || q.n24_minus != n24
                || n13.len() + 1 != d
                || n24.len() + 1 != d
                || !disjoint(&n13, &n24)
            {
                errs.push(format!("type-II sets {q:?}"));
            }
        }
        Structure::ProperTriple(t) => {
            let n1 = s.nbrs(t.v1);
            let n3 = s.nbrs(t.v3);
            let n13 = minus(&s.common(t.v1, t.v3), &[t.v2]);
            if !s.common(t.v1, t.v2).is_empty()
                || !s.common(t.v2, t.v3).is_empty()
                || t.n13_minus != n13
                || t.x != n13.len()
                || t.x + 1 > d
                || t.n1_minus != minus(&n1, &n3)
                || t.n3_minus != minus(&n3, &n1)
                || t.n2_minus != minus(&s.nbrs(t.v2), &[t.v1, t.v3])
            {
                errs.push(format!("proper triple sets {t:?}"));
            }
        }
        Structure::HighDegree(_) | Structure::ProperDomination(_) => {}
    }
}
