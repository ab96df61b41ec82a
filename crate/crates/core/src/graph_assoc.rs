//! Graphical building sets, nested-set complexes (the nerves of nestohedra) and
//! the formality classification of graph-associahedra moment-angle manifolds.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::koszul::KoszulAlgebra;
use crate::massey::{search_triple_products, DegreeProfile, SearchOptions, TripleWitness};
use crate::vertex_set::VertexSet;

/// Largest graph the building-set enumeration accepts.
pub const GRAPH_CAPACITY: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(g: GraphJson) -> Result<Self> {
        Graph::new(g.n, &g.edges.iter().map(|&[a, b]| (a, b)).collect::<Vec<_>>())
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        GraphJson { n: g.n, edges: g.edges.iter().map(|&(a, b)| [a, b]).collect() }
    }
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > 64 {
            return Err(Error::Capacity { guard: "graph vertex count", value: n, bound: 64 });
        }
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            for v in [a, b] {
                if v == 0 || v > n {
                    return Err(Error::OutOfRange { vertex: v, m: n });
                }
            }
            if a == b {
                return Err(Error::invalid(format!("loop at vertex {a}")));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::invalid(format!("repeated edge {{{a},{b}}}")));
            }
        }
        Ok(Graph { n, edges: set })
    }

    pub fn path(n: usize) -> Self {
        Graph::new(n, &(1..n).map(|i| (i, i + 1)).collect::<Vec<_>>()).expect("valid path")
    }

    pub fn cycle(n: usize) -> Self {
        let mut edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        edges.push((n, 1));
        Graph::new(n, &edges).expect("valid cycle")
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b))).collect();
        Graph::new(n, &edges).expect("valid complete graph")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    fn neighbours(&self, v: usize) -> VertexSet {
        self.edges
            .iter()
            .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
            .collect()
    }

    /// Disjoint union; the second graph's vertices are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        let shift = self.n;
        let mut edges: Vec<_> = self.edges().collect();
        edges.extend(other.edges().map(|(a, b)| (a + shift, b + shift)));
        Graph::new(self.n + other.n, &edges)
    }

    /// Vertex sets of the connected components, ordered by least vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen = VertexSet::EMPTY;
        let mut out = Vec::new();
        for start in 1..=self.n {
            if seen.contains(start) {
                continue;
            }
            let mut comp = VertexSet::singleton(start);
            let mut frontier = vec![start];
            while let Some(v) = frontier.pop() {
                for w in self.neighbours(v).difference(comp) {
                    comp.insert(w);
                    frontier.push(w);
                }
            }
            seen = seen.union(comp);
            out.push(comp);
        }
        out
    }

    /// Induced subgraph on `vertices`, re-indexed in order.
    pub fn induced(&self, vertices: VertexSet) -> Graph {
        let edges: Vec<_> = self
            .edges()
            .filter(|&(a, b)| vertices.contains(a) && vertices.contains(b))
            .map(|(a, b)| (VertexSet::singleton(a).compress(vertices).to_vec()[0], VertexSet::singleton(b).compress(vertices).to_vec()[0]))
            .collect();
        Graph::new(vertices.len(), &edges).expect("induced subgraph is simple")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BuildingSet {
    pub ground: usize,
    /// Members ordered by size, then lexicographically.
    pub elements: Vec<VertexSet>,
    /// Set by [`graphical_building_set`]; nested-set complexes of such sets are flag.
    #[serde(skip)]
    graphical: bool,
}

impl BuildingSet {
    /// Checks the axioms and normalises the member order.
    pub fn new(ground: usize, elements: Vec<VertexSet>) -> Result<Self> {
        let mut elements: Vec<VertexSet> = elements.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        elements.sort_by_key(|s| (s.len(), *s));
        let all = VertexSet::full(ground);
        let members: HashSet<VertexSet> = elements.iter().copied().collect();
        for s in &elements {
            if s.is_empty() || !s.is_subset(all) {
                return Err(Error::invalid(format!("building-set member {s} is empty or out of range")));
            }
        }
        for v in 1..=ground {
            if !members.contains(&VertexSet::singleton(v)) {
                return Err(Error::invalid(format!("singleton {{{v}}} missing from building set")));
            }
        }
        for a in &elements {
            for b in &elements {
                if !a.is_disjoint(*b) && !members.contains(&a.union(*b)) {
                    return Err(Error::invalid(format!("{a} and {b} intersect but their union is missing")));
                }
            }
        }
        Ok(BuildingSet { ground, elements, graphical: false })
    }

    pub fn contains(&self, s: VertexSet) -> bool {
        self.elements.binary_search_by_key(&(s.len(), s), |e| (e.len(), *e)).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        self.ground == 0 || self.contains(VertexSet::full(self.ground))
    }

    /// Inclusion-maximal members, one per connected component, by least vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut out: Vec<VertexSet> = self
            .elements
            .iter()
            .copied()
            .filter(|s| !self.elements.iter().any(|t| t != s && s.is_subset(*t)))
            .collect();
        out.sort_by_key(|s| s.min_vertex());
        out
    }
}

/// All vertex sets inducing a connected subgraph.
pub fn graphical_building_set(g: &Graph) -> Result<BuildingSet> {
    if g.n() > GRAPH_CAPACITY {
        return Err(Error::Capacity { guard: "graphical building set", value: g.n(), bound: GRAPH_CAPACITY });
    }
    let mut found: HashSet<VertexSet> = HashSet::new();
    let mut stack: Vec<VertexSet> = (1..=g.n()).map(VertexSet::singleton).collect();
    let neighbours: Vec<VertexSet> = (0..=g.n()).map(|v| if v == 0 { VertexSet::EMPTY } else { g.neighbours(v) }).collect();
    while let Some(s) = stack.pop() {
        if !found.insert(s) {
            continue;
        }
        let boundary = s.iter().fold(VertexSet::EMPTY, |acc, v| acc.union(neighbours[v])).difference(s);
        stack.extend(boundary.iter().map(|w| s.with(w)).filter(|t| !found.contains(t)));
    }
    let mut elements: Vec<VertexSet> = found.into_iter().collect();
    elements.sort_by_key(|s| (s.len(), *s));
    Ok(BuildingSet { ground: g.n(), elements, graphical: true })
}

/// Vertices of the nested-set complex: non-maximal members, grouped by component.
fn nerve_vertices(b: &BuildingSet) -> Vec<VertexSet> {
    let comps = b.components();
    let mut out = Vec::new();
    for comp in comps {
        out.extend(b.elements.iter().copied().filter(|&s| s != comp && s.is_subset(comp)));
    }
    out
}

/// The nested-set complex of `B`: the nerve of the nestohedron `P_B`.
pub fn nested_set_complex(b: &BuildingSet) -> Result<SimplicialComplex> {
    let verts = nerve_vertices(b);
    if verts.len() > crate::vertex_set::MAX_VERTICES {
        return Err(Error::Capacity { guard: "nested-set complex vertex count", value: verts.len(), bound: crate::vertex_set::MAX_VERTICES });
    }
    let compatible = |x: VertexSet, y: VertexSet| {
        if x.is_subset(y) || y.is_subset(x) {
            true
        } else {
            x.is_disjoint(y) && !b.contains(x.union(y))
        }
    };
    let mut nonfaces: Vec<VertexSet> = Vec::new();
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            if !compatible(verts[i], verts[j]) {
                nonfaces.push(VertexSet::singleton(i + 1).with(j + 1));
            }
        }
    }
    if !b.graphical {
        // Pairwise compatible, pairwise disjoint collections whose union is a member.
        fn extend(
            verts: &[VertexSet],
            b: &BuildingSet,
            chosen: VertexSet,
            union: VertexSet,
            from: usize,
            compatible_disjoint: &dyn Fn(usize, usize) -> bool,
            out: &mut Vec<VertexSet>,
        ) {
            for next in from..verts.len() {
                if !verts[next].is_disjoint(union) || !chosen.iter().all(|c| compatible_disjoint(c - 1, next)) {
                    continue;
                }
                let with = chosen.with(next + 1);
                let u = union.union(verts[next]);
                if with.len() >= 3 && b.contains(u) {
                    out.push(with);
                } else {
                    extend(verts, b, with, u, next + 1, compatible_disjoint, out);
                }
            }
        }
        let ok = |i: usize, j: usize| verts[i].is_disjoint(verts[j]) && !b.contains(verts[i].union(verts[j]));
        extend(&verts, b, VertexSet::EMPTY, VertexSet::EMPTY, 0, &ok, &mut nonfaces);
    }
    let labels = verts.iter().map(|s| s.to_string()).collect();
    SimplicialComplex::from_minimal_nonfaces(verts.len(), nonfaces)?.with_labels(labels)
}

pub fn associahedron_nerve(g: &Graph) -> Result<SimplicialComplex> {
    nested_set_complex(&graphical_building_set(g)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentKind {
    Vertex,
    Edge,
    Path3,
    Cycle3,
    Complete,
    Other,
}

impl ComponentKind {
    fn formal(self) -> bool {
        matches!(self, ComponentKind::Vertex | ComponentKind::Edge | ComponentKind::Path3 | ComponentKind::Cycle3)
    }

    /// Diffeomorphism type of the moment-angle manifold of a formal component.
    fn factor(self) -> Option<&'static str> {
        match self {
            ComponentKind::Edge => Some("S³"),
            ComponentKind::Path3 => Some("(S³×S⁴)^#5"),
            ComponentKind::Cycle3 => Some("(S³×S⁵)^#9#(S⁴×S⁴)^#8"),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentClass {
    pub vertices: VertexSet,
    pub kind: ComponentKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessStatus {
    NotNeeded,
    Found,
    NotFound,
    /// Complete components on five or more vertices are not searched.
    NotSearched,
}

#[derive(Clone, Debug, Serialize)]
pub struct FormalityWitness {
    /// Index into `components`; supports refer to that component's nerve.
    pub component: usize,
    pub profile: DegreeProfile,
    pub nerve_labels: Vec<String>,
    pub triple: TripleWitness,
}

#[derive(Clone, Debug, Serialize)]
pub struct FormalityVerdict {
    pub formal: bool,
    pub components: Vec<ComponentClass>,
    pub diffeo_type: Vec<String>,
    pub witness_status: WitnessStatus,
    pub witness: Option<FormalityWitness>,
}

fn classify_component(g: &Graph, comp: VertexSet) -> ComponentKind {
    let sub = g.induced(comp);
    let n = sub.n();
    let e = sub.edges.len();
    match (n, e) {
        (1, _) => ComponentKind::Vertex,
        (2, _) => ComponentKind::Edge,
        (3, 2) => ComponentKind::Path3,
        (3, 3) => ComponentKind::Cycle3,
        _ if e == n * (n - 1) / 2 => ComponentKind::Complete,
        _ => ComponentKind::Other,
    }
}

/// Formal iff every component is a vertex, an edge, a 3-path or a 3-cycle;
/// otherwise a triple Massey product witness is searched on the first
/// offending component's nerve.
pub fn formality_classify(g: &Graph) -> Result<FormalityVerdict> {
    let components: Vec<ComponentClass> =
        g.components().into_iter().map(|c| ComponentClass { vertices: c, kind: classify_component(g, c) }).collect();
    let formal = components.iter().all(|c| c.kind.formal());
    let mut verdict = FormalityVerdict {
        formal,
        diffeo_type: Vec::new(),
        witness_status: WitnessStatus::NotNeeded,
        witness: None,
        components,
    };
    if formal {
        verdict.diffeo_type = verdict.components.iter().filter_map(|c| c.kind.factor()).map(String::from).collect();
        if verdict.diffeo_type.is_empty() {
            verdict.diffeo_type.push("point".to_string());
        }
        return Ok(verdict);
    }
    let (index, target) = verdict
        .components
        .iter()
        .enumerate()
        .find(|(_, c)| !c.kind.formal())
        .map(|(i, c)| (i, c.clone()))
        .expect("a nonformal component exists");
    let profile = match (target.kind, target.vertices.len()) {
        (ComponentKind::Complete, 4) => DegreeProfile::Total([5, 3, 5]),
        (ComponentKind::Complete, _) => {
            verdict.witness_status = WitnessStatus::NotSearched;
            return Ok(verdict);
        }
        _ => DegreeProfile::ThreeDimensional,
    };
    let nerve = associahedron_nerve(&g.induced(target.vertices))?;
    let labels = nerve.labels().to_vec();
    let alg = KoszulAlgebra::new(nerve);
    match search_triple_products(&alg, &profile, &SearchOptions::default())? {
        Some(triple) => {
            verdict.witness_status = WitnessStatus::Found;
            verdict.witness = Some(FormalityWitness { component: index, profile, nerve_labels: labels, triple });
        }
        None => verdict.witness_status = WitnessStatus::NotFound,
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::polygon_nerve;
    use crate::homology::reduced_cohomology_ranks;

    #[test]
    fn building_sets() {
        let k4 = graphical_building_set(&Graph::complete(4)).unwrap();
        assert_eq!(k4.elements.len(), 15);
        assert_eq!(nerve_vertices(&k4).len(), 14);
        let p3 = graphical_building_set(&Graph::path(3)).unwrap();
        let names: Vec<String> = p3.elements.iter().map(|s| s.to_string()).collect();
        assert_eq!(names, ["{1}", "{2}", "{3}", "{1,2}", "{2,3}", "{1,2,3}"]);
        let empty = graphical_building_set(&Graph::new(2, &[]).unwrap()).unwrap();
        assert_eq!(empty.elements.len(), 2);
        assert!(!empty.is_connected());
        assert!(BuildingSet::new(p3.ground, p3.elements.clone()).is_ok());
        assert!(BuildingSet::new(3, vec![VertexSet::from_iter([1]), VertexSet::from_iter([2])]).is_err());
    }

    fn isomorphic(a: &SimplicialComplex, b: &SimplicialComplex) -> bool {
        use itertools::Itertools;
        if a.m() != b.m() || a.minimal_nonfaces().len() != b.minimal_nonfaces().len() {
            return false;
        }
        let target: BTreeSet<VertexSet> = b.minimal_nonfaces().iter().copied().collect();
        (1..=a.m()).permutations(a.m()).any(|p| {
            a.minimal_nonfaces().iter().all(|s| target.contains(&s.iter().map(|v| p[v - 1]).collect()))
        })
    }

    #[test]
    fn small_nerves() {
        assert!(isomorphic(&associahedron_nerve(&Graph::path(3)).unwrap(), &polygon_nerve(5).unwrap()));
        assert!(isomorphic(&associahedron_nerve(&Graph::cycle(3)).unwrap(), &polygon_nerve(6).unwrap()));
        assert!(!isomorphic(&associahedron_nerve(&Graph::path(3)).unwrap(), &SimplicialComplex::simplex_boundary(5)));
        let seg = associahedron_nerve(&Graph::path(2)).unwrap();
        assert_eq!(seg, SimplicialComplex::from_nonface_lists(2, &[vec![1, 2]]).unwrap());
        assert_eq!(associahedron_nerve(&Graph::new(1, &[]).unwrap()).unwrap().m(), 0);
        assert_eq!(associahedron_nerve(&Graph::path(4)).unwrap().m(), 9);
        assert_eq!(associahedron_nerve(&Graph::cycle(4)).unwrap().m(), 12);
        assert_eq!(associahedron_nerve(&Graph::complete(4)).unwrap().m(), 14);
    }

    #[test]
    fn nerves_are_spheres() {
        for g in [Graph::path(4), Graph::cycle(4), Graph::complete(4), Graph::new(4, &[(1, 2), (1, 3), (1, 4)]).unwrap()] {
            let profile = reduced_cohomology_ranks(&associahedron_nerve(&g).unwrap());
            let nonzero: Vec<(i64, usize)> = profile.nonzero().collect();
            assert_eq!(nonzero, vec![(2, 1)]);
        }
    }

    #[test]
    fn general_route_agrees_with_flag_route() {
        for g in [Graph::path(4), Graph::cycle(4), Graph::complete(4), Graph::new(5, &[(1, 2), (2, 3), (4, 5)]).unwrap()] {
            let b = graphical_building_set(&g).unwrap();
            let general = BuildingSet::new(b.ground, b.elements.clone()).unwrap();
            assert_eq!(nested_set_complex(&general).unwrap(), nested_set_complex(&b).unwrap());
        }
    }

    #[test]
    fn simplex_building_set_gives_simplex_boundary() {
        // B = singletons and the ground set: P_B is a simplex, its nerve is ∂Δ.
        let mut elements: Vec<VertexSet> = (1..=4).map(VertexSet::singleton).collect();
        elements.push(VertexSet::full(4));
        let b = BuildingSet::new(4, elements).unwrap();
        assert_eq!(nested_set_complex(&b).unwrap(), SimplicialComplex::simplex_boundary(4));
    }

    #[test]
    fn join_compatibility() {
        let (a, b) = (Graph::path(3), Graph::cycle(3));
        let union = a.disjoint_union(&b).unwrap();
        let joined = associahedron_nerve(&a).unwrap().join(&associahedron_nerve(&b).unwrap()).unwrap();
        assert_eq!(associahedron_nerve(&union).unwrap(), joined);
    }

    #[test]
    fn formal_graphs() {
        let g = Graph::cycle(3).disjoint_union(&Graph::path(2)).unwrap();
        let v = formality_classify(&g).unwrap();
        assert!(v.formal);
        assert_eq!(v.diffeo_type, ["(S³×S⁵)^#9#(S⁴×S⁴)^#8", "S³"]);
        let v = formality_classify(&Graph::new(2, &[]).unwrap()).unwrap();
        assert!(v.formal);
        assert_eq!(v.diffeo_type, ["point"]);
    }

    #[test]
    fn graph_json() {
        let g: Graph = serde_json::from_str(r#"{"n":3,"edges":[[1,2],[3,2]]}"#).unwrap();
        assert_eq!(g, Graph::path(3));
        assert!(serde_json::from_str::<Graph>(r#"{"n":3,"edges":[[1,1]]}"#).is_err());
        assert!(serde_json::from_str::<Graph>(r#"{"n":3,"edges":[[1,2],[2,1]]}"#).is_err());
        assert!(serde_json::from_str::<Graph>(r#"{"n":3,"edges":[[1,4]]}"#).is_err());
    }
}
