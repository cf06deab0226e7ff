//! Weighted dual graphs of exceptional divisors.
//!
//! A vertex is an irreducible exceptional curve `E_i`, weighted by its
//! self-intersection, the gcd `d_i` of degrees of invertible sheaves on it
//! and a residue-degree hint. An edge `{i, j}` with multiplicity `m`
//! records `(E_i, E_j) = m`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlat::{is_negative_definite, IntMatrix, Prime};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub id: String,
    pub self_intersection: i64,
    pub degree_gcd: i64,
    pub residue_degree: i64,
}

impl Vertex {
    /// A vertex with `d = 1` and residue degree 1.
    pub fn new(id: impl Into<String>, self_intersection: i64) -> Self {
        Vertex {
            id: id.into(),
            self_intersection,
            degree_gcd: 1,
            residue_degree: 1,
        }
    }

    pub fn with_degree_gcd(mut self, d: i64) -> Self {
        self.degree_gcd = d;
        self
    }

    pub fn with_residue_degree(mut self, r: i64) -> Self {
        self.residue_degree = r;
        self
    }
}

/// Edge between vertex indices `a` and `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub multiplicity: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphFile", into = "GraphFile")]
pub struct DualGraph {
    name: String,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl DualGraph {
    /// Builds a graph from vertices and `(id, id, multiplicity)` edge records.
    pub fn new<S: AsRef<str>>(
        name: impl Into<String>,
        vertices: Vec<Vertex>,
        edges: &[(S, S, i64)],
    ) -> Result<Self> {
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.id.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(v.id.clone()));
            }
            if v.degree_gcd < 1 {
                return Err(Error::NonPositive {
                    field: "d",
                    value: v.degree_gcd,
                });
            }
            if v.residue_degree < 1 {
                return Err(Error::NonPositive {
                    field: "residue_degree",
                    value: v.residue_degree,
                });
            }
        }
        let lookup = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::UnknownVertex(id.to_owned()))
        };
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for (a, b, m) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let (ia, ib) = (lookup(a)?, lookup(b)?);
            if ia == ib {
                return Err(Error::SelfLoop(a.to_owned()));
            }
            if *m < 1 {
                return Err(Error::NonPositive {
                    field: "m",
                    value: *m,
                });
            }
            if !seen.insert((ia.min(ib), ia.max(ib))) {
                return Err(Error::DuplicateEdge(a.to_owned(), b.to_owned()));
            }
            out.push(Edge {
                a: ia,
                b: ib,
                multiplicity: *m,
            });
        }
        Ok(DualGraph {
            name: name.into(),
            vertices,
            edges: out,
        })
    }

    /// The graph of a regular point: no exceptional curves.
    pub fn empty(name: impl Into<String>) -> Self {
        DualGraph {
            name: name.into(),
            vertices: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Pretty-printed JSON in the graph file format, newline terminated.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("graph serializes");
        s.push('\n');
        s
    }

    /// Component index of each vertex, numbered in order of first appearance.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.len());
        for e in &self.edges {
            uf.union(e.a, e.b);
        }
        let mut labels = vec![usize::MAX; self.len()];
        let mut roots = HashMap::new();
        for (v, label) in labels.iter_mut().enumerate() {
            let next = roots.len();
            *label = *roots.entry(uf.find(v)).or_insert(next);
        }
        labels
    }

    pub fn component_count(&self) -> usize {
        self.component_labels()
            .into_iter()
            .max()
            .map_or(0, |m| m + 1)
    }

    /// Acyclic with every multiplicity equal to 1. An edge of multiplicity
    /// `m >= 2` counts as a cycle: the curves do not meet transversally in
    /// a single point.
    pub fn is_forest(&self) -> bool {
        self.forest_obstruction().is_none()
    }

    fn forest_obstruction(&self) -> Option<String> {
        if let Some(e) = self.edges.iter().find(|e| e.multiplicity >= 2) {
            return Some(format!(
                "edge {}-{} has multiplicity {}",
                self.vertices[e.a].id, self.vertices[e.b].id, e.multiplicity
            ));
        }
        let mut uf = UnionFind::new(self.len());
        for e in &self.edges {
            if !uf.union(e.a, e.b) {
                return Some(format!(
                    "edge {}-{} closes a cycle",
                    self.vertices[e.a].id, self.vertices[e.b].id
                ));
            }
        }
        None
    }

    /// Adjacency lists by vertex index.
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.len()];
        for e in &self.edges {
            adj[e.a].push(e.b);
            adj[e.b].push(e.a);
        }
        adj
    }

    /// The induced subgraph on the given vertex indices, in the given order.
    pub fn induced(&self, keep: &[usize]) -> DualGraph {
        let mut pos = vec![None; self.len()];
        for (new, &old) in keep.iter().enumerate() {
            pos[old] = Some(new);
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|e| match (pos[e.a], pos[e.b]) {
                (Some(a), Some(b)) => Some(Edge {
                    a,
                    b,
                    multiplicity: e.multiplicity,
                }),
                _ => None,
            })
            .collect();
        DualGraph {
            name: self.name.clone(),
            vertices: keep.iter().map(|&i| self.vertices[i].clone()).collect(),
            edges,
        }
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    name: String,
    vertices: Vec<VertexFile>,
    edges: Vec<EdgeFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexFile {
    id: String,
    #[serde(rename = "self")]
    self_intersection: i64,
    #[serde(default = "one")]
    d: i64,
    #[serde(default = "one")]
    residue_degree: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeFile {
    a: String,
    b: String,
    #[serde(default = "one")]
    m: i64,
}

fn one() -> i64 {
    1
}

impl TryFrom<GraphFile> for DualGraph {
    type Error = Error;

    fn try_from(f: GraphFile) -> Result<Self> {
        let vertices = f
            .vertices
            .into_iter()
            .map(|v| Vertex {
                id: v.id,
                self_intersection: v.self_intersection,
                degree_gcd: v.d,
                residue_degree: v.residue_degree,
            })
            .collect();
        let edges: Vec<(String, String, i64)> =
            f.edges.into_iter().map(|e| (e.a, e.b, e.m)).collect();
        DualGraph::new(f.name, vertices, &edges)
    }
}

impl From<DualGraph> for GraphFile {
    fn from(g: DualGraph) -> Self {
        let edges = g
            .edges
            .iter()
            .map(|e| EdgeFile {
                a: g.vertices[e.a].id.clone(),
                b: g.vertices[e.b].id.clone(),
                m: e.multiplicity,
            })
            .collect();
        GraphFile {
            name: g.name,
            vertices: g
                .vertices
                .into_iter()
                .map(|v| VertexFile {
                    id: v.id,
                    self_intersection: v.self_intersection,
                    d: v.degree_gcd,
                    residue_degree: v.residue_degree,
                })
                .collect(),
            edges,
        }
    }
}

/// The symmetric matrix `((E_i, E_j))`: self-intersections on the diagonal,
/// edge multiplicities off it.
pub fn intersection_matrix(g: &DualGraph) -> IntMatrix {
    let n = g.len();
    let mut m = IntMatrix::zeros(n, n);
    for (i, v) in g.vertices.iter().enumerate() {
        m[(i, i)] = BigInt::from(v.self_intersection);
    }
    for e in &g.edges {
        m[(e.a, e.b)] = BigInt::from(e.multiplicity);
        m[(e.b, e.a)] = BigInt::from(e.multiplicity);
    }
    m
}

pub mod checks {
    pub const SYMMETRIC: &str = "symmetric";
    pub const NEGATIVE_DEFINITE: &str = "negative_definite";
    pub const CONNECTED: &str = "connected";
    pub const DIVISIBILITY: &str = "divisibility";
    pub const ELL_COPRIME: &str = "ell_coprime";
    pub const FOREST: &str = "forest";
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidationReport {
    pub graph: String,
    pub ell: Prime,
    pub checks: Vec<Check>,
    pub overall: bool,
}

impl ValidationReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Whether the named check is present and passed.
    pub fn passed(&self, name: &str) -> bool {
        self.check(name).is_some_and(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "graph {} (ell = {})", self.graph, self.ell)?;
        for c in &self.checks {
            let mark = if c.passed { "pass" } else { "FAIL" };
            writeln!(f, "  {mark}  {:<18} {}", c.name, c.detail)?;
        }
        write!(f, "overall: {}", if self.overall { "pass" } else { "FAIL" })
    }
}

/// Runs every structural check. Failures are report entries, not errors.
pub fn validate(g: &DualGraph, ell: Prime) -> ValidationReport {
    let a = intersection_matrix(g);
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| {
        checks.push(Check {
            name: name.to_owned(),
            passed,
            detail,
        })
    };

    let symmetric = a.is_symmetric();
    push(
        checks::SYMMETRIC,
        symmetric,
        format!("{n}x{n} intersection matrix", n = g.len()),
    );

    let definite = is_negative_definite(&a).unwrap_or(false);
    let detail = match a.leading_principal_minors() {
        Ok(minors) => format!(
            "leading minors [{}]",
            minors
                .iter()
                .map(|m| m.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ),
        Err(e) => e.to_string(),
    };
    push(checks::NEGATIVE_DEFINITE, definite, detail);

    let components = g.component_count();
    let (connected, detail) = match components {
        0 => (true, "empty graph (regular point)".to_owned()),
        1 => (true, "1 component".to_owned()),
        c => (false, format!("{c} components")),
    };
    push(checks::CONNECTED, connected, detail);

    let bad_div = divisibility_violation(g, &a);
    push(
        checks::DIVISIBILITY,
        bad_div.is_none(),
        match &bad_div {
            None => "every d_j divides column j".to_owned(),
            Some((j, i)) => format!(
                "d = {} of {} does not divide entry {} (row {})",
                g.vertices[*j].degree_gcd,
                g.vertices[*j].id,
                a[(*i, *j)],
                g.vertices[*i].id
            ),
        },
    );

    let ell_big = |x: i64| ell.divides(&BigInt::from(x));
    let offending: Vec<&str> = g
        .vertices
        .iter()
        .filter(|v| ell_big(v.degree_gcd) || ell_big(v.residue_degree))
        .map(|v| v.id.as_str())
        .collect();
    push(
        checks::ELL_COPRIME,
        offending.is_empty(),
        if offending.is_empty() {
            format!("{ell} divides no d_j or residue degree")
        } else {
            format!(
                "{ell} divides d or residue degree at {}",
                offending.join(", ")
            )
        },
    );

    let obstruction = g.forest_obstruction();
    push(
        checks::FOREST,
        obstruction.is_none(),
        obstruction.unwrap_or_else(|| "acyclic, all multiplicities 1".to_owned()),
    );

    let overall = checks.iter().all(|c| c.passed);
    ValidationReport {
        graph: g.name.clone(),
        ell,
        checks,
        overall,
    }
}

/// First `(column j, row i)` where `d_j` fails to divide `(E_i, E_j)`.
pub(crate) fn divisibility_violation(g: &DualGraph, a: &IntMatrix) -> Option<(usize, usize)> {
    g.vertices.iter().enumerate().find_map(|(j, v)| {
        let d = BigInt::from(v.degree_gcd);
        (0..g.len())
            .find(|&i| !a[(i, j)].is_multiple_of(&d))
            .map(|i| (j, i))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DynkinFamily {
    A,
    D,
    E,
}

impl DynkinFamily {
    pub fn letter(self) -> char {
        match self {
            DynkinFamily::A => 'A',
            DynkinFamily::D => 'D',
            DynkinFamily::E => 'E',
        }
    }
}

/// A Dynkin type such as `A3` or `E8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DynkinType {
    pub family: DynkinFamily,
    pub n: usize,
}

impl FromStr for DynkinType {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => DynkinFamily::A,
            Some('D') => DynkinFamily::D,
            Some('E') => DynkinFamily::E,
            _ => {
                return Err(format!(
                    "`{s}` is not a Dynkin type (expected A<n>, D<n> or E<n>)"
                ))
            }
        };
        let n = chars
            .as_str()
            .parse()
            .map_err(|_| format!("`{s}` has no valid index"))?;
        Ok(DynkinType { family, n })
    }
}

/// ADE configuration of `-2` curves with the Dynkin diagram as dual graph.
///
/// Vertices are `v1..vn` in Bourbaki order: for `D_n` the fork is at
/// `v(n-2)`; for `E_n` the branch vertex `v2` hangs off `v4`.
pub fn gen_ade(family: DynkinFamily, n: usize) -> Result<DualGraph> {
    let unsupported = Error::UnsupportedIndex {
        family: family.letter(),
        n,
    };
    let mut edges: Vec<(usize, usize)> = Vec::new();
    match family {
        DynkinFamily::A => {
            if n < 1 {
                return Err(unsupported);
            }
            edges.extend((1..n).map(|i| (i, i + 1)));
        }
        DynkinFamily::D => {
            if n < 4 {
                return Err(unsupported);
            }
            edges.extend((1..n - 1).map(|i| (i, i + 1)));
            edges.push((n - 2, n));
        }
        DynkinFamily::E => {
            if !(6..=8).contains(&n) {
                return Err(unsupported);
            }
            edges.push((1, 3));
            edges.extend((3..n).map(|i| (i, i + 1)));
            edges.push((2, 4));
        }
    }
    let vertices = (1..=n).map(|i| Vertex::new(format!("v{i}"), -2)).collect();
    let edges: Vec<(String, String, i64)> = edges
        .into_iter()
        .map(|(a, b)| (format!("v{a}"), format!("v{b}"), 1))
        .collect();
    DualGraph::new(format!("{}{n}", family.letter()), vertices, &edges)
}

/// Hirzebruch–Jung expansion `k/a = b_1 - 1/(b_2 - 1/(…))`, all `b_i >= 2`.
pub fn hj_continued_fraction(k: i64, a: i64) -> Result<Vec<i64>> {
    if k < 2 || a < 1 || a >= k || k.gcd(&a) != 1 {
        return Err(Error::NotCoprime { k, a });
    }
    let (mut num, mut den) = (k, a);
    let mut out = Vec::new();
    while den != 0 {
        let b = Integer::div_ceil(&num, &den);
        out.push(b);
        (num, den) = (den, b * den - num);
    }
    Ok(out)
}

/// Chain of curves with self-intersections `-b_1, …, -b_s` from the
/// Hirzebruch–Jung expansion of `k/a`: the resolution graph of the cyclic
/// quotient singularity of type `(k, a)`.
pub fn gen_hj(k: i64, a: i64) -> Result<DualGraph> {
    let bs = hj_continued_fraction(k, a)?;
    let vertices = bs
        .iter()
        .enumerate()
        .map(|(i, b)| Vertex::new(format!("v{}", i + 1), -b))
        .collect();
    let edges: Vec<(String, String, i64)> = (1..bs.len())
        .map(|i| (format!("v{i}"), format!("v{}", i + 1), 1))
        .collect();
    DualGraph::new(format!("HJ{k}_{a}"), vertices, &edges)
}
