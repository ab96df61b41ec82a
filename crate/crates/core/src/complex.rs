//! Finite simplicial complexes encoded by their minimal non-faces.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vertex_set::{VertexSet, MAX_VERTICES};

/// A simplicial complex on `[m]` without ghost vertices.
///
/// The minimal non-faces are the primary encoding; maximal faces are derived
/// on first use. Equality compares `m` and the (canonical) minimal non-faces;
/// vertex labels are carried along for display only.
#[derive(Clone)]
pub struct SimplicialComplex {
    m: usize,
    labels: Vec<String>,
    minimal_nonfaces: Vec<VertexSet>,
    /// Minimal non-faces bucketed by their largest vertex.
    by_max_vertex: Vec<Vec<VertexSet>>,
    maximal_faces: OnceLock<Vec<VertexSet>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.minimal_nonfaces == other.minimal_nonfaces
    }
}

impl Eq for SimplicialComplex {}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialComplex")
            .field("m", &self.m)
            .field("minimal_nonfaces", &self.minimal_nonfaces)
            .finish()
    }
}

/// Whether the complex is flag, and how connected it is in the sense that every
/// `q`-subset of vertices spans a simplex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub is_flag: bool,
    /// `None` for a full simplex, which is `q`-connected for every `q`.
    pub connectivity_q: Option<usize>,
}

fn default_labels(m: usize) -> Vec<String> {
    (1..=m).map(|i| i.to_string()).collect()
}

/// Inclusion-minimal elements, sorted lexicographically.
fn antichain_minimal(mut sets: Vec<VertexSet>) -> Vec<VertexSet> {
    sets.sort_by_key(|s| (s.len(), *s));
    sets.dedup();
    let mut kept: Vec<VertexSet> = Vec::with_capacity(sets.len());
    for s in sets {
        if !kept.iter().any(|k| k.is_subset(s)) {
            kept.push(s);
        }
    }
    kept.sort();
    kept
}

/// Minimal transversals of a hypergraph (Berge's sequential dualization).
///
/// An empty edge admits no transversal; an empty hypergraph has the single
/// transversal `∅`.
pub(crate) fn minimal_transversals(edges: &[VertexSet]) -> Vec<VertexSet> {
    let mut edges = antichain_minimal(edges.to_vec());
    edges.sort_by_key(|e| (e.len(), *e));
    let mut transversals = vec![VertexSet::EMPTY];
    for &edge in &edges {
        if edge.is_empty() {
            return Vec::new();
        }
        let (hitting, missing): (Vec<_>, Vec<_>) = transversals.iter().partition(|t| !t.is_disjoint(edge));
        let mut next: Vec<VertexSet> = hitting.clone();
        for t in missing {
            for v in edge {
                let candidate = t.with(v);
                if !hitting.iter().any(|h| h.is_subset(candidate)) {
                    next.push(candidate);
                }
            }
        }
        transversals = antichain_minimal(next);
    }
    transversals
}

impl SimplicialComplex {
    /// Builds `K` on `[m]` whose faces are the subsets containing no listed set.
    pub fn from_minimal_nonfaces(m: usize, nonfaces: impl IntoIterator<Item = VertexSet>) -> Result<Self> {
        if m > MAX_VERTICES {
            return Err(Error::Capacity { guard: "vertex count", value: m, bound: MAX_VERTICES });
        }
        let universe = VertexSet::full(m);
        let mut sets = Vec::new();
        for s in nonfaces {
            if !s.is_subset(universe) {
                let vertex = s.difference(universe).min_vertex().unwrap_or(0);
                return Err(Error::OutOfRange { vertex, m });
            }
            match s.len() {
                0 => return Err(Error::invalid("the empty set cannot be a non-face")),
                1 => return Err(Error::GhostVertex(s.min_vertex().unwrap())),
                _ => sets.push(s),
            }
        }
        Ok(Self::from_canonical(m, default_labels(m), antichain_minimal(sets)))
    }

    /// Convenience constructor from 1-indexed vertex lists.
    pub fn from_nonface_lists(m: usize, nonfaces: &[Vec<usize>]) -> Result<Self> {
        let sets = nonfaces
            .iter()
            .map(|v| VertexSet::from_checked(v, m))
            .collect::<Result<Vec<_>>>()?;
        Self::from_minimal_nonfaces(m, sets)
    }

    /// Builds `K` on `[m]` from a generating family of faces.
    ///
    /// The minimal non-faces are the minimal transversals of the complements
    /// of the maximal faces.
    pub fn from_maximal_faces(m: usize, faces: impl IntoIterator<Item = VertexSet>) -> Result<Self> {
        if m > MAX_VERTICES {
            return Err(Error::Capacity { guard: "vertex count", value: m, bound: MAX_VERTICES });
        }
        let universe = VertexSet::full(m);
        let mut facets = Vec::new();
        for f in faces {
            if !f.is_subset(universe) {
                let vertex = f.difference(universe).min_vertex().unwrap_or(0);
                return Err(Error::OutOfRange { vertex, m });
            }
            facets.push(f);
        }
        let covered = facets.iter().fold(VertexSet::EMPTY, |a, &f| a.union(f));
        if let Some(ghost) = universe.difference(covered).min_vertex() {
            return Err(Error::GhostVertex(ghost));
        }
        let complements: Vec<VertexSet> = facets.iter().map(|f| universe.difference(*f)).collect();
        let mf = if facets.is_empty() { Vec::new() } else { minimal_transversals(&complements) };
        let complex = Self::from_canonical(m, default_labels(m), mf);
        let mut maximal = antichain_maximal(facets);
        if maximal.is_empty() {
            maximal.push(VertexSet::EMPTY);
        }
        let _ = complex.maximal_faces.set(maximal);
        Ok(complex)
    }

    pub fn from_facet_lists(m: usize, faces: &[Vec<usize>]) -> Result<Self> {
        let sets = faces
            .iter()
            .map(|v| VertexSet::from_checked(v, m))
            .collect::<Result<Vec<_>>>()?;
        Self::from_maximal_faces(m, sets)
    }

    /// The full simplex on `[m]`.
    pub fn simplex(m: usize) -> Self {
        Self::from_minimal_nonfaces(m, []).expect("simplex is always valid")
    }

    /// The boundary of the simplex on `[m]`, `m >= 2`.
    pub fn simplex_boundary(m: usize) -> Self {
        assert!(m >= 2);
        Self::from_minimal_nonfaces(m, [VertexSet::full(m)]).expect("valid boundary")
    }

    /// The complex `{∅}` on zero vertices; the unit for joins.
    pub fn void() -> Self {
        Self::from_canonical(0, Vec::new(), Vec::new())
    }

    fn from_canonical(m: usize, labels: Vec<String>, minimal_nonfaces: Vec<VertexSet>) -> Self {
        let mut by_max_vertex = vec![Vec::new(); m + 1];
        for &s in &minimal_nonfaces {
            by_max_vertex[s.max_vertex()].push(s);
        }
        SimplicialComplex { m, labels, minimal_nonfaces, by_max_vertex, maximal_faces: OnceLock::new() }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.m {
            return Err(Error::LengthMismatch { expected: self.m, got: labels.len() });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.m)
    }

    pub fn minimal_nonfaces(&self) -> &[VertexSet] {
        &self.minimal_nonfaces
    }

    /// Inclusion-maximal faces, sorted lexicographically.
    pub fn maximal_faces(&self) -> &[VertexSet] {
        self.maximal_faces.get_or_init(|| {
            let universe = self.vertices();
            let mut faces: Vec<VertexSet> = minimal_transversals(&self.minimal_nonfaces)
                .into_iter()
                .map(|t| universe.difference(t))
                .collect();
            faces.sort();
            faces
        })
    }

    pub fn is_face(&self, sigma: VertexSet) -> bool {
        sigma.is_subset(self.vertices()) && !self.minimal_nonfaces.iter().any(|mf| mf.is_subset(sigma))
    }

    /// `sigma ∪ {v}` is a face, given that `sigma` is a face and `v > max(sigma)`.
    fn extends_face(&self, sigma: VertexSet, v: usize) -> bool {
        let grown = sigma.with(v);
        !self.by_max_vertex[v].iter().any(|mf| mf.is_subset(grown))
    }

    /// Dimension; `-1` for `{∅}`.
    pub fn dim(&self) -> i64 {
        self.maximal_faces().iter().map(|f| f.len() as i64).max().unwrap_or(0) - 1
    }

    /// All faces of `K` contained in `within`, grouped by size (index `k`
    /// holds the `k`-element faces), each group in lexicographic order.
    pub fn faces_within(&self, within: VertexSet) -> Vec<Vec<VertexSet>> {
        let within = within.intersection(self.vertices());
        let mut groups: Vec<Vec<VertexSet>> = vec![vec![VertexSet::EMPTY]];
        let verts = within.to_vec();
        // Depth-first in increasing vertex order yields lexicographic order.
        fn visit(
            k: &SimplicialComplex,
            sigma: VertexSet,
            from: usize,
            verts: &[usize],
            groups: &mut Vec<Vec<VertexSet>>,
        ) {
            for idx in from..verts.len() {
                let v = verts[idx];
                if k.extends_face(sigma, v) {
                    let tau = sigma.with(v);
                    if groups.len() <= tau.len() {
                        groups.push(Vec::new());
                    }
                    groups[tau.len()].push(tau);
                    visit(k, tau, idx + 1, verts, groups);
                }
            }
        }
        visit(self, VertexSet::EMPTY, 0, &verts, &mut groups);
        groups
    }

    pub fn faces(&self) -> Vec<Vec<VertexSet>> {
        self.faces_within(self.vertices())
    }

    /// The full subcomplex `K ∩ 2^I`, re-indexed onto `1..=|I|` in vertex order.
    pub fn induced_subcomplex(&self, subset: VertexSet) -> Result<Self> {
        if !subset.is_subset(self.vertices()) {
            let vertex = subset.difference(self.vertices()).min_vertex().unwrap_or(0);
            return Err(Error::OutOfRange { vertex, m: self.m });
        }
        let mf: Vec<VertexSet> = self
            .minimal_nonfaces
            .iter()
            .filter(|mf| mf.is_subset(subset))
            .map(|mf| mf.compress(subset))
            .collect();
        let labels = subset.iter().map(|v| self.labels[v - 1].clone()).collect();
        let mut mf = mf;
        mf.sort();
        Ok(Self::from_canonical(subset.len(), labels, mf))
    }

    /// Join with `other`, whose vertices are shifted by `self.m()`.
    pub fn join(&self, other: &SimplicialComplex) -> Result<Self> {
        let m = self.m + other.m;
        if m > MAX_VERTICES {
            return Err(Error::Capacity { guard: "vertex count", value: m, bound: MAX_VERTICES });
        }
        let mut mf = self.minimal_nonfaces.clone();
        mf.extend(other.minimal_nonfaces.iter().map(|s| s.shifted(self.m)));
        mf.sort();
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        Ok(Self::from_canonical(m, labels, mf))
    }

    pub fn structure_report(&self) -> StructureReport {
        StructureReport {
            is_flag: self.minimal_nonfaces.iter().all(|s| s.len() == 2),
            connectivity_q: self.minimal_nonfaces.iter().map(|s| s.len() - 1).min(),
        }
    }

    /// Stellar subdivision of the maximal face `face` with a new vertex `m+1`.
    pub fn stellar_vertex_cut(&self, face: VertexSet) -> Result<Self> {
        if !self.maximal_faces().contains(&face) {
            return Err(Error::NotMaximalFace { face: face.to_vec() });
        }
        if face.len() < 2 {
            return Err(Error::invalid("subdividing a vertex would leave a ghost vertex"));
        }
        if self.m + 1 > MAX_VERTICES {
            return Err(Error::Capacity { guard: "vertex count", value: self.m + 1, bound: MAX_VERTICES });
        }
        let apex = self.m + 1;
        let mut facets: Vec<VertexSet> = self.maximal_faces().iter().copied().filter(|&f| f != face).collect();
        facets.extend(face.iter().map(|v| face.without(v).with(apex)));
        let mut labels = self.labels.clone();
        labels.push(apex.to_string());
        Self::from_maximal_faces(self.m + 1, facets)?.with_labels(labels)
    }

    /// Vertex pairs that span an edge.
    pub fn edges(&self) -> Vec<VertexSet> {
        self.faces_within(self.vertices()).get(2).cloned().unwrap_or_default()
    }

    /// Connected components of `K_J`, counting isolated vertices.
    pub fn component_count(&self, within: VertexSet) -> usize {
        let verts = within.to_vec();
        if verts.is_empty() {
            return 0;
        }
        let mut parent: Vec<usize> = (0..verts.len()).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut c = x;
            while parent[c] != r {
                let next = parent[c];
                parent[c] = r;
                c = next;
            }
            r
        }
        let mut components = verts.len();
        for a in 0..verts.len() {
            for b in a + 1..verts.len() {
                let pair = VertexSet::singleton(verts[a]).with(verts[b]);
                if self.is_face(pair) {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    if ra != rb {
                        parent[ra] = rb;
                        components -= 1;
                    }
                }
            }
        }
        components
    }

    pub fn to_spec(&self) -> ComplexSpec {
        ComplexSpec {
            m: Some(self.m),
            labels: (self.labels != default_labels(self.m)).then(|| self.labels.clone()),
            minimal_nonfaces: Some(self.minimal_nonfaces.iter().map(|s| s.to_vec()).collect()),
            maximal_faces: None,
        }
    }
}

/// Inclusion-maximal elements, sorted lexicographically.
fn antichain_maximal(mut sets: Vec<VertexSet>) -> Vec<VertexSet> {
    sets.sort_by_key(|s| (std::cmp::Reverse(s.len()), *s));
    sets.dedup();
    let mut kept: Vec<VertexSet> = Vec::with_capacity(sets.len());
    for s in sets {
        if !kept.iter().any(|k| s.is_subset(*k)) {
            kept.push(s);
        }
    }
    kept.sort();
    kept
}

/// JSON encoding of a complex: `{"m": 6, "minimal_nonfaces": [[1,3],...]}` or
/// `{"maximal_faces": [[1,2],...]}`, vertices 1-indexed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimal_nonfaces: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maximal_faces: Option<Vec<Vec<usize>>>,
}

impl ComplexSpec {
    pub fn build(&self) -> Result<SimplicialComplex> {
        let complex = match (&self.minimal_nonfaces, &self.maximal_faces) {
            (Some(mf), None) => {
                let m = self.m.ok_or_else(|| Error::invalid("\"m\" is required with \"minimal_nonfaces\""))?;
                SimplicialComplex::from_nonface_lists(m, mf)?
            }
            (None, Some(faces)) => {
                let inferred = faces.iter().flatten().copied().max().unwrap_or(0);
                let m = self.m.unwrap_or(inferred);
                SimplicialComplex::from_facet_lists(m, faces)?
            }
            _ => {
                return Err(Error::invalid(
                    "exactly one of \"minimal_nonfaces\" and \"maximal_faces\" must be given",
                ))
            }
        };
        match &self.labels {
            Some(labels) => complex.with_labels(labels.clone()),
            None => Ok(complex),
        }
    }
}
