//! Homology and cohomology of proper exceptional curve configurations.
//!
//! For a configuration `C` with `H^1(C, O_C) = 0` the answer depends only on
//! the number `r` of connected components and the number `n` of irreducible
//! components:
//!
//! ```text
//! H_0 = Λ^r,   H_1 = 0,   H_2 = Λ(1)^n
//! H^0 = Λ^r,   H^1 = 0,   H^2 = Λ(-1)^n
//! ```
//!
//! The vanishing of `H^1(C, O_C)` is certified from the graph: every
//! connected component must be a tree of transversally meeting curves.
//! [`mv_profile`] recomputes the same profile by peeling one leaf curve at a
//! time and gluing along the Mayer–Vietoris sequence.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::dualgraph::{DualGraph, UnionFind};
use crate::error::{Error, Result};
use crate::exactlat::{LModule, Prime, Summand};

/// The curve configuration underlying a dual graph: components and their
/// intersections. Self-intersections play no role here.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigGraph {
    labels: Vec<String>,
    edges: Vec<(usize, usize, i64)>,
}

impl ConfigGraph {
    /// Edges are `(a, b, multiplicity)` on vertex indices `0..labels.len()`.
    pub fn new(labels: Vec<String>, edges: Vec<(usize, usize, i64)>) -> Self {
        for &(a, b, m) in &edges {
            assert!(a < labels.len() && b < labels.len() && a != b && m >= 1);
        }
        ConfigGraph { labels, edges }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    fn weighted_degrees(&self, alive: &[bool]) -> Vec<i64> {
        let mut deg = vec![0; self.len()];
        for &(a, b, m) in &self.edges {
            if alive[a] && alive[b] {
                deg[a] += m;
                deg[b] += m;
            }
        }
        deg
    }
}

impl From<&DualGraph> for ConfigGraph {
    fn from(g: &DualGraph) -> Self {
        ConfigGraph {
            labels: g.vertices().iter().map(|v| v.id.clone()).collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| (e.a, e.b, e.multiplicity))
                .collect(),
        }
    }
}

/// Graded homology and cohomology of a curve configuration.
///
/// The pieces are coefficient-free summands (a twist and a rank); use
/// [`CurveProfile::homology_module`] to realize them over a given `Z_l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveProfile {
    /// `r`, the number of connected components.
    pub components: usize,
    /// `n`, the number of irreducible components.
    pub curves: usize,
    /// `H_0, H_1, H_2`; `None` is the zero module.
    pub homology: [Option<Summand>; 3],
    /// `H^0, H^1, H^2`.
    pub cohomology: [Option<Summand>; 3],
    /// Component ids, the basis of `H_2` and `H^2`.
    pub basis_labels: Vec<String>,
}

fn piece(twist: i64, rank: usize) -> Option<Summand> {
    (rank > 0).then(|| Summand::free(twist, rank))
}

impl CurveProfile {
    fn from_ranks(components: usize, curves: usize, h1: usize, labels: Vec<String>) -> Self {
        CurveProfile {
            components,
            curves,
            homology: [piece(0, components), piece(0, h1), piece(1, curves)],
            cohomology: [piece(0, components), piece(0, h1), piece(-1, curves)],
            basis_labels: labels,
        }
    }

    pub fn h1_rank(&self) -> usize {
        self.homology[1].as_ref().map_or(0, |s| s.free_rank)
    }

    pub fn homology_module(&self, q: usize, ell: Prime) -> LModule {
        to_module(&self.homology[q], ell)
    }

    pub fn cohomology_module(&self, q: usize, ell: Prime) -> LModule {
        to_module(&self.cohomology[q], ell)
    }
}

fn to_module(s: &Option<Summand>, ell: Prime) -> LModule {
    match s {
        Some(s) => LModule::from_summands(ell, vec![s.clone()]).expect("free summand"),
        None => LModule::zero(ell),
    }
}

/// Closed-form profile from component counts. Rejects configurations that
/// are not forests of transversal intersections.
pub fn curve_profile(g: &ConfigGraph) -> Result<CurveProfile> {
    let mut uf = UnionFind::new(g.len());
    for &(a, b, m) in &g.edges {
        if m >= 2 || !uf.union(a, b) {
            return Err(Error::NotAForest);
        }
    }
    let r = g.len() - g.edges.len();
    Ok(CurveProfile::from_ranks(r, g.len(), 0, g.labels.clone()))
}

#[derive(Clone, Copy, Debug)]
struct Ranks {
    h0: usize,
    h1: usize,
    h2: usize,
}

/// Recomputes the profile by induction on irreducible components.
///
/// Each step splits `C = C' ∪ C''` where `C'` is one curve meeting the rest
/// in at most one point. Mayer–Vietoris with `H_1(C' ∩ C'') = 0` gives
/// `H_2(C) = H_2(C') ⊕ H_2(C'')` and
/// `0 → H_1(C')⊕H_1(C'') → H_1(C) → H_0(C'∩C'') →l H_0(C') ⊕ H_0(C'') → H_0(C) → 0`.
/// If no such curve exists the configuration has a loop or a multiple
/// intersection and [`Error::NotAForest`] is returned.
pub fn mv_profile(g: &ConfigGraph) -> Result<CurveProfile> {
    let mut alive = vec![true; g.len()];
    let ranks = mv_ranks(g, &mut alive, g.len())?;
    Ok(CurveProfile::from_ranks(
        ranks.h0,
        ranks.h2,
        ranks.h1,
        g.labels.clone(),
    ))
}

fn mv_ranks(g: &ConfigGraph, alive: &mut [bool], remaining: usize) -> Result<Ranks> {
    match remaining {
        0 => {
            return Ok(Ranks {
                h0: 0,
                h1: 0,
                h2: 0,
            })
        }
        // A single smooth rational curve: H_0 = Λ, H_1 = 0, H_2 = Λ(1).
        1 => {
            return Ok(Ranks {
                h0: 1,
                h1: 0,
                h2: 1,
            })
        }
        _ => {}
    }
    let degrees = g.weighted_degrees(alive);
    let leaf = (0..g.len())
        .find(|&v| alive[v] && degrees[v] <= 1)
        .ok_or(Error::NotAForest)?;
    // m = #(C' ∩ C''); with m <= 1 the points land in distinct components
    // of C'', so l is injective of rank m.
    let meeting_points = degrees[leaf] as usize;
    let leaf_part = Ranks {
        h0: 1,
        h1: 0,
        h2: 1,
    };

    alive[leaf] = false;
    let rest = mv_ranks(g, alive, remaining - 1)?;
    alive[leaf] = true;

    let rank_l = meeting_points;
    Ok(Ranks {
        h0: leaf_part.h0 + rest.h0 - rank_l,
        h1: leaf_part.h1 + rest.h1 + (meeting_points - rank_l),
        h2: leaf_part.h2 + rest.h2,
    })
}

/// Image of `c_1(L)` in `H^2(C, Λ(1)) = Λ^n`, given the restriction degrees
/// `deg(L|C_i)`. In the basis `e_1, …, e_n` this is the degree vector itself.
pub fn degree_pairing(profile: &CurveProfile, bundle_degrees: &[BigInt]) -> Result<Vec<BigInt>> {
    if bundle_degrees.len() != profile.curves {
        return Err(Error::LengthMismatch {
            expected: profile.curves,
            actual: bundle_degrees.len(),
        });
    }
    Ok(bundle_degrees.to_vec())
}

/// Whether `deg: H_0(E) → Λ` is onto: some closed point has residue degree
/// prime to `l`, hence a unit in `Z_l`.
pub fn deg_surjectivity(residue_degrees: &[i64], ell: Prime) -> Result<bool> {
    if residue_degrees.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(&bad) = residue_degrees.iter().find(|&&d| d < 1) {
        return Err(Error::NonPositive {
            field: "residue_degree",
            value: bad,
        });
    }
    Ok(residue_degrees
        .iter()
        .any(|&d| !ell.divides(&BigInt::from(d))))
}
