//! Divisor class groups from the exact sequence `0 → E → E* → Cl(X) → 0`.
//!
//! `E` is the lattice spanned by the exceptional curves `E_i`, `E*` its dual
//! with basis `ε_j`, and the map sends `E_i` to `Σ_j (E_i, E_j)/d_j · ε_j`.

use num_bigint::BigInt;

use crate::dualgraph::{intersection_matrix, DualGraph};
use crate::error::{Error, Result};
use crate::exactlat::{
    cokernel, ell_primary, is_negative_definite, FgAbGroup, IntMatrix, LModule, Prime,
};

/// The matrix of `E → E*`: row `j` indexes the dual basis `ε_j`, column `i`
/// the curve `E_i`, and entry `(j, i)` is `(E_i, E_j) / d_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaMatrix {
    pub matrix: IntMatrix,
    pub source: DualGraph,
}

pub fn theta_matrix(g: &DualGraph) -> Result<ThetaMatrix> {
    // (E_i, E_j) is symmetric, so row j of the intersection matrix is the
    // vector of (E_i, E_j) over i.
    let mut m = intersection_matrix(g);
    for (j, v) in g.vertices().iter().enumerate() {
        let d = BigInt::from(v.degree_gcd);
        if let Some(i) = m.divide_row_exact(j, &d) {
            return Err(Error::DivisibilityViolation {
                vertex: v.id.clone(),
                d: v.degree_gcd,
                value: intersection_matrix(g)[(j, i)].to_string(),
            });
        }
    }
    Ok(ThetaMatrix {
        matrix: m,
        source: g.clone(),
    })
}

/// `Cl(X) = coker(E → E*)`. Finiteness is certified by negative
/// definiteness of the intersection matrix.
pub fn class_group(g: &DualGraph) -> Result<FgAbGroup> {
    let theta = theta_matrix(g)?;
    if !is_negative_definite(&intersection_matrix(g))? {
        return Err(Error::NotNegativeDefinite);
    }
    let cl = cokernel(&theta.matrix);
    debug_assert!(cl.is_finite());
    Ok(cl)
}

/// `Cl(X) ⊗ Z_l`, tagged with twist `+1` so that it reads as `H_2(X)`
/// rather than `H_2(X)(-1)`. Requires every `d_j` to be a unit in `Z_l`.
pub fn class_group_ell(g: &DualGraph, ell: Prime) -> Result<LModule> {
    let cl = class_group(g)?;
    if let Some(v) = g
        .vertices()
        .iter()
        .find(|v| ell.divides(&BigInt::from(v.degree_gcd)))
    {
        return Err(Error::EllDividesD {
            vertex: v.id.clone(),
            d: v.degree_gcd,
            ell: ell.get(),
        });
    }
    Ok(ell_primary(&cl, ell).retwist(1))
}
