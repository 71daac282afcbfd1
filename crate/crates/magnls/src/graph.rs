//! Metric-graph data model, parsing, and cycle-basis topology.
//!
//! A metric graph is a combinatorial graph whose finite edges carry lengths
//! (each edge is an interval `[0, l_e]` with the coordinate running from
//! `from` to `to`) and whose half-lines are unbounded rays `[0, ∞)` anchored
//! at a single vertex. Every edge carries a constant magnetic potential
//! coefficient `A_e` (units 1/length).

use std::collections::VecDeque;
use thiserror::Error;

/// Edge geometry: a finite interval or an unbounded ray.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeKind {
    /// Finite edge of positive length; coordinate runs 0 → length from `from` to `to`.
    Finite { length: f64 },
    /// Half-line `[0, ∞)` anchored at `from` (`to == from` by convention).
    HalfLine,
}

/// One edge of a metric graph.
#[derive(Debug, Clone)]
pub struct Edge {
    pub id: String,
    pub from: usize,
    pub to: usize,
    pub kind: EdgeKind,
    /// Constant magnetic potential A_e on this edge (1/length).
    pub magnetic_potential: f64,
}

impl Edge {
    pub fn is_halfline(&self) -> bool {
        matches!(self.kind, EdgeKind::HalfLine)
    }

    /// Length of a finite edge, `None` for half-lines.
    pub fn length(&self) -> Option<f64> {
        match self.kind {
            EdgeKind::Finite { length } => Some(length),
            EdgeKind::HalfLine => None,
        }
    }
}

/// A connected metric graph. Immutable after construction; loops and
/// multi-edges are permitted.
#[derive(Debug, Clone)]
pub struct MetricGraph {
    vertex_ids: Vec<String>,
    edges: Vec<Edge>,
}

/// Errors from parsing or validating a graph description.
#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: nonpositive length")]
    NonpositiveLength { line: usize },
    #[error("line {line}: dangling vertex reference `{id}`")]
    UnknownVertex { line: usize, id: String },
    #[error("line {line}: duplicate id `{id}`")]
    DuplicateId { line: usize, id: String },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no vertices")]
    Empty,
}

/// One signed step of a cycle: `(edge index, traversal sign)`. Sign +1 means
/// the edge is traversed from its `from` vertex to its `to` vertex.
pub type CycleStep = (usize, i8);

/// A closed, edge-simple walk on finite edges.
#[derive(Debug, Clone)]
pub struct Cycle {
    pub steps: Vec<CycleStep>,
    /// Total metric length, the sum of member edge lengths.
    pub length: f64,
}

impl Cycle {
    pub fn contains_edge(&self, edge: usize) -> bool {
        self.steps.iter().any(|&(e, _)| e == edge)
    }
}

/// An independent-cycle basis together with the cyclomatic number it spans.
#[derive(Debug, Clone)]
pub struct CycleBasis {
    pub cycles: Vec<Cycle>,
    pub betti: usize,
}

impl MetricGraph {
    /// Builds a graph from components, validating lengths, vertex references
    /// and connectivity.
    pub fn from_components(vertex_ids: Vec<String>, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let g = MetricGraph { vertex_ids, edges };
        g.validate()?;
        Ok(g)
    }

    /// Parses the line-oriented graph description format:
    ///
    /// ```text
    /// # comment
    /// vertex <id>
    /// edge <id> <v_from> <v_to> length=<float> [A=<float>]
    /// halfline <id> <v> [A=<float>]
    /// ```
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut vertex_ids: Vec<String> = Vec::new();
        let mut edges: Vec<Edge> = Vec::new();

        let vertex_index = |ids: &[String], name: &str| ids.iter().position(|v| v == name);

        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            match tokens[0] {
                "vertex" => {
                    if tokens.len() != 2 {
                        return Err(GraphError::Syntax {
                            line,
                            msg: "expected `vertex <id>`".into(),
                        });
                    }
                    let id = tokens[1].to_string();
                    if vertex_index(&vertex_ids, &id).is_some() {
                        return Err(GraphError::DuplicateId { line, id });
                    }
                    vertex_ids.push(id);
                }
                "edge" => {
                    if tokens.len() < 5 {
                        return Err(GraphError::Syntax {
                            line,
                            msg: "expected `edge <id> <v_from> <v_to> length=<float> [A=<float>]`"
                                .into(),
                        });
                    }
                    let id = tokens[1].to_string();
                    if edges.iter().any(|e| e.id == id) {
                        return Err(GraphError::DuplicateId { line, id });
                    }
                    let from = vertex_index(&vertex_ids, tokens[2]).ok_or_else(|| {
                        GraphError::UnknownVertex { line, id: tokens[2].into() }
                    })?;
                    let to = vertex_index(&vertex_ids, tokens[3]).ok_or_else(|| {
                        GraphError::UnknownVertex { line, id: tokens[3].into() }
                    })?;
                    let (length, a) = parse_attrs(&tokens[4..], line, true)?;
                    let length = length.ok_or(GraphError::Syntax {
                        line,
                        msg: "missing length=<float>".into(),
                    })?;
                    if !length.is_finite() || length <= 0.0 {
                        return Err(GraphError::NonpositiveLength { line });
                    }
                    edges.push(Edge {
                        id,
                        from,
                        to,
                        kind: EdgeKind::Finite { length },
                        magnetic_potential: a,
                    });
                }
                "halfline" => {
                    if tokens.len() < 3 {
                        return Err(GraphError::Syntax {
                            line,
                            msg: "expected `halfline <id> <v> [A=<float>]`".into(),
                        });
                    }
                    let id = tokens[1].to_string();
                    if edges.iter().any(|e| e.id == id) {
                        return Err(GraphError::DuplicateId { line, id });
                    }
                    let v = vertex_index(&vertex_ids, tokens[2]).ok_or_else(|| {
                        GraphError::UnknownVertex { line, id: tokens[2].into() }
                    })?;
                    let (_, a) = parse_attrs(&tokens[3..], line, false)?;
                    edges.push(Edge {
                        id,
                        from: v,
                        to: v,
                        kind: EdgeKind::HalfLine,
                        magnetic_potential: a,
                    });
                }
                other => {
                    return Err(GraphError::Syntax {
                        line,
                        msg: format!("unknown directive `{other}`"),
                    });
                }
            }
        }

        Self::from_components(vertex_ids, edges)
    }

    fn validate(&self) -> Result<(), GraphError> {
        if self.vertex_ids.is_empty() {
            return Err(GraphError::Empty);
        }
        for e in &self.edges {
            debug_assert!(e.from < self.vertex_ids.len() && e.to < self.vertex_ids.len());
            if let EdgeKind::Finite { length } = e.kind {
                if !length.is_finite() || length <= 0.0 {
                    return Err(GraphError::NonpositiveLength { line: 0 });
                }
            }
        }
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(())
    }

    pub fn n_vertices(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertex_ids
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertex_ids[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn n_halflines(&self) -> usize {
        self.edges.iter().filter(|e| e.is_halfline()).count()
    }

    /// Shortest finite edge length, `None` if the graph has no finite edge.
    pub fn min_finite_length(&self) -> Option<f64> {
        self.edges
            .iter()
            .filter_map(|e| e.length())
            .min_by(|a, b| a.partial_cmp(b).unwrap())
    }

    fn is_connected(&self) -> bool {
        let n = self.vertex_ids.len();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for e in &self.edges {
                if e.is_halfline() {
                    continue;
                }
                for (a, b) in [(e.from, e.to), (e.to, e.from)] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        queue.push_back(b);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// First Betti (cyclomatic) number, `|E| - |V*| + 1`, where `|V*|` counts
    /// one implicit terminal vertex per half-line so that half-lines never
    /// create spurious cycles.
    pub fn betti(&self) -> usize {
        let n_half = self.n_halflines();
        let e = self.edges.len();
        let v_star = self.vertex_ids.len() + n_half;
        (e + 1).saturating_sub(v_star)
    }

    /// Deterministic independent-cycle basis: fundamental cycles of a BFS
    /// spanning tree rooted at the lexicographically smallest vertex id,
    /// exploring neighbors in (vertex id, edge id) order.
    pub fn cycle_basis(&self) -> CycleBasis {
        let n = self.vertex_ids.len();

        // adjacency over finite edges, sorted for determinism
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n]; // (edge idx, other vertex)
        for (ei, e) in self.edges.iter().enumerate() {
            if e.is_halfline() || e.from == e.to {
                continue;
            }
            adj[e.from].push((ei, e.to));
            adj[e.to].push((ei, e.from));
        }
        for list in adj.iter_mut() {
            list.sort_by(|&(ea, va), &(eb, vb)| {
                (self.vertex_ids[va].as_str(), self.edges[ea].id.as_str())
                    .cmp(&(self.vertex_ids[vb].as_str(), self.edges[eb].id.as_str()))
            });
        }

        let root = (0..n)
            .min_by(|&a, &b| self.vertex_ids[a].cmp(&self.vertex_ids[b]))
            .unwrap();

        // BFS tree: parent vertex and connecting edge per vertex
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n]; // (parent vertex, edge)
        let mut depth = vec![0usize; n];
        let mut in_tree = vec![false; self.edges.len()];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(ei, w) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((v, ei));
                    depth[w] = depth[v] + 1;
                    in_tree[ei] = true;
                    queue.push_back(w);
                }
            }
        }

        let mut cycles = Vec::new();
        for (ei, e) in self.edges.iter().enumerate() {
            if e.is_halfline() || in_tree[ei] {
                continue;
            }
            cycles.push(self.fundamental_cycle(ei, &parent, &depth));
        }

        debug_assert_eq!(cycles.len(), self.betti());
        CycleBasis { betti: cycles.len(), cycles }
    }

    /// Closes the non-tree edge `ei` through the spanning tree.
    fn fundamental_cycle(
        &self,
        ei: usize,
        parent: &[Option<(usize, usize)>],
        depth: &[usize],
    ) -> Cycle {
        let e = &self.edges[ei];
        let mut steps: Vec<CycleStep> = vec![(ei, 1)];
        if e.from == e.to {
            return self.finish_cycle(steps);
        }

        // tree path from e.to back to e.from: lift both endpoints to the LCA
        let (mut a, mut b) = (e.to, e.from); // walk a→lca, then lca→b
        let mut up_from_a: Vec<CycleStep> = Vec::new();
        let mut up_from_b: Vec<CycleStep> = Vec::new();
        while depth[a] > depth[b] {
            let (p, pe) = parent[a].unwrap();
            up_from_a.push((pe, if self.edges[pe].from == a { 1 } else { -1 }));
            a = p;
        }
        while depth[b] > depth[a] {
            let (p, pe) = parent[b].unwrap();
            up_from_b.push((pe, if self.edges[pe].to == b { 1 } else { -1 }));
            b = p;
        }
        while a != b {
            let (pa, ea) = parent[a].unwrap();
            up_from_a.push((ea, if self.edges[ea].from == a { 1 } else { -1 }));
            a = pa;
            let (pb, eb) = parent[b].unwrap();
            up_from_b.push((eb, if self.edges[eb].to == b { 1 } else { -1 }));
            b = pb;
        }
        steps.extend(up_from_a);
        steps.extend(up_from_b.into_iter().rev());
        self.finish_cycle(steps)
    }

    fn finish_cycle(&self, steps: Vec<CycleStep>) -> Cycle {
        let length = steps
            .iter()
            .map(|&(e, _)| self.edges[e].length().expect("cycles use finite edges"))
            .sum();
        Cycle { steps, length }
    }

    // --- built-in generators -------------------------------------------------

    /// Tadpole: one loop of length `2 * l_half` plus one half-line, joined at
    /// a single vertex. `a_loop` is the magnetic potential on the loop.
    pub fn tadpole(l_half: f64, a_loop: f64) -> Self {
        MetricGraph {
            vertex_ids: vec!["v0".into()],
            edges: vec![
                Edge {
                    id: "loop".into(),
                    from: 0,
                    to: 0,
                    kind: EdgeKind::Finite { length: 2.0 * l_half },
                    magnetic_potential: a_loop,
                },
                Edge {
                    id: "tail".into(),
                    from: 0,
                    to: 0,
                    kind: EdgeKind::HalfLine,
                    magnetic_potential: 0.0,
                },
            ],
        }
    }

    /// The real line: two half-lines joined at one vertex.
    pub fn line() -> Self {
        MetricGraph {
            vertex_ids: vec!["v0".into()],
            edges: vec![
                Edge {
                    id: "left".into(),
                    from: 0,
                    to: 0,
                    kind: EdgeKind::HalfLine,
                    magnetic_potential: 0.0,
                },
                Edge {
                    id: "right".into(),
                    from: 0,
                    to: 0,
                    kind: EdgeKind::HalfLine,
                    magnetic_potential: 0.0,
                },
            ],
        }
    }

    /// A single half-line.
    pub fn halfline() -> Self {
        MetricGraph {
            vertex_ids: vec!["v0".into()],
            edges: vec![Edge {
                id: "ray".into(),
                from: 0,
                to: 0,
                kind: EdgeKind::HalfLine,
                magnetic_potential: 0.0,
            }],
        }
    }

    /// Figure-eight: two loops of lengths `l1`, `l2` on one vertex (compact).
    pub fn figure_eight(l1: f64, l2: f64, a1: f64, a2: f64) -> Self {
        MetricGraph {
            vertex_ids: vec!["v0".into()],
            edges: vec![
                Edge {
                    id: "loop1".into(),
                    from: 0,
                    to: 0,
                    kind: EdgeKind::Finite { length: l1 },
                    magnetic_potential: a1,
                },
                Edge {
                    id: "loop2".into(),
                    from: 0,
                    to: 0,
                    kind: EdgeKind::Finite { length: l2 },
                    magnetic_potential: a2,
                },
            ],
        }
    }
}

fn parse_attrs(
    tokens: &[&str],
    line: usize,
    allow_length: bool,
) -> Result<(Option<f64>, f64), GraphError> {
    let mut length = None;
    let mut a = 0.0;
    for t in tokens {
        let (key, val) = t.split_once('=').ok_or_else(|| GraphError::Syntax {
            line,
            msg: format!("expected key=value, got `{t}`"),
        })?;
        let parsed: f64 = val.parse().map_err(|_| GraphError::Syntax {
            line,
            msg: format!("invalid number `{val}`"),
        })?;
        match key {
            "length" if allow_length => length = Some(parsed),
            "A" => a = parsed,
            _ => {
                return Err(GraphError::Syntax {
                    line,
                    msg: format!("unknown attribute `{key}`"),
                })
            }
        }
    }
    Ok((length, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const TADPOLE_2PI: &str = "\
vertex v0
edge loop v0 v0 length=6.283185307 A=0.5
halfline tail v0 A=0
";

    #[test]
    fn parse_tadpole() {
        let g = MetricGraph::parse(TADPOLE_2PI).unwrap();
        assert_eq!(g.n_vertices(), 1);
        assert_eq!(g.edges().len(), 2);
        assert!((g.edges()[0].length().unwrap() - 6.283185307).abs() < 1e-12);
        assert_eq!(g.edges()[0].magnetic_potential, 0.5);
        assert!(g.edges()[1].is_halfline());
        assert_eq!(g.betti(), 1);
    }

    #[test]
    fn parse_rejects_nonpositive_length() {
        let err = MetricGraph::parse("vertex v0\nedge e v0 v0 length=-1\n").unwrap_err();
        assert!(matches!(err, GraphError::NonpositiveLength { line: 2 }));
    }

    #[test]
    fn parse_rejects_disconnected() {
        let text = "vertex a\nvertex b\nedge e1 a a length=1\nedge e2 b b length=1\n";
        let err = MetricGraph::parse(text).unwrap_err();
        assert!(matches!(err, GraphError::Disconnected));
    }

    #[test]
    fn parse_rejects_dangling_vertex() {
        let err = MetricGraph::parse("vertex a\nedge e1 a zz length=1\n").unwrap_err();
        match err {
            GraphError::UnknownVertex { line, id } => {
                assert_eq!(line, 2);
                assert_eq!(id, "zz");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn parse_reports_syntax_line() {
        let err = MetricGraph::parse("vertex a\nbogus line here\n").unwrap_err();
        assert!(matches!(err, GraphError::Syntax { line: 2, .. }));
    }

    #[test]
    fn betti_examples() {
        // single loop on one vertex
        let g = MetricGraph::parse("vertex v\nedge l v v length=1\n").unwrap();
        assert_eq!(g.betti(), 1);
        // tadpole: |E|=2, |V*|=2 with the implicit terminal vertex
        assert_eq!(MetricGraph::tadpole(1.0, 0.0).betti(), 1);
        // figure-eight
        assert_eq!(MetricGraph::figure_eight(1.0, 2.0, 0.0, 0.0).betti(), 2);
        // tree with 3 edges
        let tree = "\
vertex a
vertex b
vertex c
vertex d
edge e1 a b length=1
edge e2 b c length=1
edge e3 b d length=1
";
        assert_eq!(MetricGraph::parse(tree).unwrap().betti(), 0);
        assert_eq!(MetricGraph::line().betti(), 0);
    }

    #[test]
    fn cycle_basis_examples() {
        let tree = MetricGraph::parse(
            "vertex a\nvertex b\nvertex c\nedge e1 a b length=1\nedge e2 b c length=2\n",
        )
        .unwrap();
        assert!(tree.cycle_basis().cycles.is_empty());

        let tad = MetricGraph::tadpole(1.0, 0.0);
        let basis = tad.cycle_basis();
        assert_eq!(basis.betti, 1);
        assert_eq!(basis.cycles[0].steps, vec![(0, 1)]);
        assert!((basis.cycles[0].length - 2.0).abs() < 1e-15);

        let eight = MetricGraph::figure_eight(1.0, 3.0, 0.0, 0.0);
        let basis = eight.cycle_basis();
        assert_eq!(basis.betti, 2);
        assert_eq!(basis.cycles[0].steps.len(), 1);
        assert_eq!(basis.cycles[1].steps.len(), 1);
        assert!((basis.cycles[0].length + basis.cycles[1].length - 4.0).abs() < 1e-15);
    }

    #[test]
    fn cycle_basis_multiedge() {
        // two parallel edges = one cycle through both
        let g = MetricGraph::parse(
            "vertex a\nvertex b\nedge e1 a b length=1\nedge e2 a b length=2\n",
        )
        .unwrap();
        let basis = g.cycle_basis();
        assert_eq!(basis.betti, 1);
        let c = &basis.cycles[0];
        assert_eq!(c.steps.len(), 2);
        assert!((c.length - 3.0).abs() < 1e-15);
        // opposite traversal signs around the cycle
        assert_eq!(c.steps[0].1 * c.steps[1].1, -1);
    }

    fn random_graph(rng: &mut ChaCha8Rng) -> MetricGraph {
        let nv = rng.gen_range(1..=6);
        let mut vertex_ids: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
        vertex_ids.sort();
        let mut edges = Vec::new();
        // random spanning tree keeps it connected
        for v in 1..nv {
            let u = rng.gen_range(0..v);
            edges.push(Edge {
                id: format!("t{v}"),
                from: u,
                to: v,
                kind: EdgeKind::Finite { length: rng.gen_range(0.5..2.5) },
                magnetic_potential: rng.gen_range(-1.0..1.0),
            });
        }
        let extra = rng.gen_range(0..=(12usize.saturating_sub(edges.len()).min(6)));
        for k in 0..extra {
            let a = rng.gen_range(0..nv);
            let b = rng.gen_range(0..nv); // loops allowed
            edges.push(Edge {
                id: format!("x{k}"),
                from: a,
                to: b,
                kind: EdgeKind::Finite { length: rng.gen_range(0.5..2.5) },
                magnetic_potential: rng.gen_range(-1.0..1.0),
            });
        }
        for k in 0..rng.gen_range(0..=2) {
            let a = rng.gen_range(0..nv);
            edges.push(Edge {
                id: format!("h{k}"),
                from: a,
                to: a,
                kind: EdgeKind::HalfLine,
                magnetic_potential: 0.0,
            });
        }
        MetricGraph::from_components(vertex_ids, edges).unwrap()
    }

    /// Checks that a cycle is closed and edge-simple by re-walking it.
    fn assert_structurally_valid(g: &MetricGraph, c: &Cycle) {
        assert!(!c.steps.is_empty());
        let mut used = std::collections::HashSet::new();
        let start = match c.steps[0] {
            (e, 1) => g.edges()[e].from,
            (e, _) => g.edges()[e].to,
        };
        let mut at = start;
        for &(e, s) in &c.steps {
            assert!(used.insert(e), "edge repeated in cycle");
            let (head, tail) = if s == 1 {
                (g.edges()[e].from, g.edges()[e].to)
            } else {
                (g.edges()[e].to, g.edges()[e].from)
            };
            assert_eq!(head, at, "consecutive edges must share a vertex");
            at = tail;
        }
        assert_eq!(at, start, "cycle must close");
        let len: f64 = c.steps.iter().map(|&(e, _)| g.edges()[e].length().unwrap()).sum();
        assert!((len - c.length).abs() < 1e-12);
    }

    /// GF(2) rank of the basis cycles' edge-incidence vectors.
    fn gf2_rank(g: &MetricGraph, basis: &CycleBasis) -> usize {
        let mut rows: Vec<u64> = basis
            .cycles
            .iter()
            .map(|c| c.steps.iter().fold(0u64, |m, &(e, _)| m | (1 << e)))
            .collect();
        assert!(g.edges().len() <= 64);
        let mut rank = 0;
        for bit in 0..g.edges().len() {
            if let Some(p) = (rank..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) {
                rows.swap(rank, p);
                for i in 0..rows.len() {
                    if i != rank && rows[i] >> bit & 1 == 1 {
                        rows[i] ^= rows[rank];
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    #[test]
    fn random_graphs_basis_matches_betti_and_gf2_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..300 {
            let g = random_graph(&mut rng);
            let basis = g.cycle_basis();
            assert_eq!(basis.cycles.len(), g.betti());
            for c in &basis.cycles {
                assert_structurally_valid(&g, c);
            }
            // independence: rank over GF(2) equals betti
            assert_eq!(gf2_rank(&g, &basis), g.betti());
        }
    }

    #[test]
    fn adding_edge_increments_betti() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let g = random_graph(&mut rng);
            let before = g.betti();
            let mut edges = g.edges().to_vec();
            let a = rng.gen_range(0..g.n_vertices());
            let b = rng.gen_range(0..g.n_vertices());
            edges.push(Edge {
                id: "added".into(),
                from: a,
                to: b,
                kind: EdgeKind::Finite { length: 1.0 },
                magnetic_potential: 0.0,
            });
            let g2 = MetricGraph::from_components(g.vertex_ids().to_vec(), edges).unwrap();
            assert_eq!(g2.betti(), before + 1);
        }
    }

    #[test]
    fn basis_is_deterministic() {
        let text = "\
vertex b
vertex a
vertex c
edge e2 b c length=1
edge e1 a b length=1
edge e3 c a length=1
edge e4 a c length=2
";
        let g = MetricGraph::parse(text).unwrap();
        let b1 = g.cycle_basis();
        let b2 = g.cycle_basis();
        let flat = |b: &CycleBasis| -> Vec<Vec<CycleStep>> {
            b.cycles.iter().map(|c| c.steps.clone()).collect()
        };
        assert_eq!(flat(&b1), flat(&b2));
        assert_eq!(b1.betti, 2);
    }
}
