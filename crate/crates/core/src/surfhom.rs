//! Étale homology `H_q(X) = H^{-q}(K_X)` of a strictly henselian local
//! surface, assembled from the exceptional divisor of a resolution.
//!
//! The long exact sequence of the resolution square splits into three
//! pieces:
//!
//! ```text
//! 0 → H^0(E, Λ(2)) → H_4(X) → 0
//! 0 → H^1(E, Λ(2)) → H_3(X) → H_2(E) → H^2(E, Λ(2)) → H_2(X) → H_1(E) → 0
//! 0 → H_1(X) → H_0(E) →deg Λ → H_0(X) → 0
//! ```
//!
//! For a rational singularity everything collapses to `H_4 = Λ(2)` and
//! `H_2 = Cl(X) ⊗ Λ (1)`.

use serde::{Deserialize, Serialize};

use crate::classgrp::class_group_ell;
use crate::curvehom::deg_surjectivity;
use crate::dualgraph::{intersection_matrix, validate, DualGraph};
use crate::error::{Error, Result};
use crate::exactlat::{cokernel, ell_primary, is_negative_definite, Coefficients, LModule, Prime};

/// Highest degree carried in a profile. Degrees above `2 * dim = 4` vanish.
pub const MAX_DEGREE: usize = 5;
pub const SURFACE_DIM: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomologyEntry {
    pub degree: usize,
    pub module: LModule,
    /// Which piece of the exact sequences produced this entry.
    pub source: String,
}

/// `H_2` in the general case: an extension of the free part of `H_1(E)` by
/// a finite torsion group, with the extension class left undetermined.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct H2Extension {
    pub torsion: LModule,
    pub free_quotient_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomologyProfile {
    pub graph: String,
    pub ell: Prime,
    pub coefficients: Coefficients,
    /// Degrees `0..=MAX_DEGREE`, in order.
    pub entries: Vec<HomologyEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h2_extension: Option<H2Extension>,
}

impl HomologyProfile {
    pub fn get(&self, q: usize) -> &LModule {
        &self.entries[q].module
    }

    /// The modules alone, ignoring provenance.
    pub fn modules(&self) -> Vec<&LModule> {
        self.entries.iter().map(|e| &e.module).collect()
    }

    /// Zero outside degrees `1..=4` (and outside `{2, 4}` when `rational_singularity`).
    pub fn satisfies_vanishing(&self, rational_singularity: bool) -> bool {
        self.entries.iter().all(|e| {
            let allowed = if rational_singularity {
                e.degree == 2 || e.degree == 4
            } else {
                (1..=2 * SURFACE_DIM).contains(&e.degree)
            };
            allowed || e.module.is_zero()
        })
    }

    fn new(graph: &DualGraph, ell: Prime) -> Self {
        HomologyProfile {
            graph: graph.name().to_owned(),
            ell,
            coefficients: Coefficients::Integral,
            entries: (0..=MAX_DEGREE)
                .map(|degree| HomologyEntry {
                    degree,
                    module: LModule::zero(ell),
                    source: if degree > 2 * SURFACE_DIM {
                        "vanishes above 2 dim X".to_owned()
                    } else {
                        "vanishes".to_owned()
                    },
                })
                .collect(),
            h2_extension: None,
        }
    }

    fn set(&mut self, q: usize, module: LModule, source: &str) {
        self.entries[q] = HomologyEntry {
            degree: q,
            module,
            source: source.to_owned(),
        };
    }

    fn rationalize(&mut self) {
        self.coefficients = Coefficients::Rational;
        for e in &mut self.entries {
            e.module = e.module.clone().rationalize();
        }
        if let Some(ext) = &mut self.h2_extension {
            ext.torsion = ext.torsion.clone().rationalize();
        }
    }
}

/// Profile of a rational singularity with the given resolution graph. The
/// empty graph is a regular point.
pub fn local_homology_rational(
    g: &DualGraph,
    ell: Prime,
    mode: Coefficients,
) -> Result<HomologyProfile> {
    let report = validate(g, ell);
    if !report.overall {
        return Err(Error::ValidationFailed(Box::new(report)));
    }
    let mut profile = HomologyProfile::new(g, ell);
    profile.set(4, LModule::free(ell, 2, 1), "H^0(t_X): Λ ≅ H_4(X)(-2)");
    profile.set(
        2,
        class_group_ell(g, ell)?,
        "Cl(X) ⊗ Λ ≅ H_2(X)(-1) via the cycle class map",
    );
    for q in [0, 1, 3] {
        profile.entries[q].source = "vanishes at a rational singularity".to_owned();
    }
    if mode == Coefficients::Rational {
        profile.rationalize();
    }
    Ok(profile)
}

/// Curve data the graph cannot supply when `H^1(E, O_E) != 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneralCurveInput {
    /// Rank of `H^1(E, Λ)`.
    pub h1_rank: usize,
    /// `H_1(E)`, when known; only its free rank is used.
    #[serde(default)]
    pub h1_homology: Option<LModule>,
}

/// Profile of an arbitrary normal surface singularity with regular
/// punctured neighbourhood, using supplied curve data for `H^1(E)`.
pub fn local_homology_general(
    g: &DualGraph,
    ell: Prime,
    extra: &GeneralCurveInput,
) -> Result<HomologyProfile> {
    let components = g.component_count();
    if components != 1 {
        return Err(Error::NotConnected { components });
    }
    let a = intersection_matrix(g);
    if !is_negative_definite(&a)? {
        return Err(Error::NotNegativeDefinite);
    }
    let residue_degrees: Vec<i64> = g.vertices().iter().map(|v| v.residue_degree).collect();
    if !deg_surjectivity(&residue_degrees, ell)? {
        return Err(Error::DegreeNotSurjective { ell: ell.get() });
    }

    let mut profile = HomologyProfile::new(g, ell);
    profile.set(4, LModule::free(ell, 2, 1), "H^0(E, Λ(2)) ≅ H_4(X)");
    profile.set(
        3,
        LModule::free(ell, 2, extra.h1_rank),
        "H^1(E, Λ(2)) ≅ H_3(X)",
    );

    // H_2(E)(-1) → H^2(E, Λ(1)) is the intersection matrix: injective with
    // finite cokernel, which is the torsion of H_2(X) after untwisting.
    let torsion = ell_primary(&cokernel(&a), ell).retwist(1);
    let free_quotient = extra
        .h1_homology
        .as_ref()
        .map(|h| {
            let mut free = h.clone();
            for s in &mut free.summands {
                s.torsion_exponents.clear();
            }
            LModule::from_summands(ell, free.summands).expect("free summands")
        })
        .unwrap_or_else(|| LModule::zero(ell));
    let free_quotient_rank = free_quotient.free_rank();
    profile.set(
        2,
        torsion.direct_sum(&free_quotient),
        if free_quotient_rank == 0 {
            "coker of the intersection matrix ⊗ Λ (1)"
        } else {
            "extension of H_1(E) by coker of the intersection matrix ⊗ Λ (1); extension class unresolved"
        },
    );
    profile.h2_extension = Some(H2Extension {
        torsion,
        free_quotient_rank,
    });
    profile.entries[1].source = "ker(deg: H_0(E) → Λ) = 0, E connected".to_owned();
    profile.entries[0].source = "coker(deg: H_0(E) → Λ) = 0".to_owned();
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualgraph::{gen_ade, DynkinFamily, Vertex};
    use crate::exactlat::Summand;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn cycle3() -> DualGraph {
        DualGraph::new(
            "cycle3",
            vec![
                Vertex::new("x", -3),
                Vertex::new("y", -3),
                Vertex::new("z", -3),
            ],
            &[("x", "y", 1), ("y", "z", 1), ("z", "x", 1)],
        )
        .unwrap()
    }

    #[test]
    fn regular_point() {
        let prof =
            local_homology_rational(&DualGraph::empty("smooth"), p(3), Coefficients::Integral)
                .unwrap();
        assert_eq!(prof.get(4), &LModule::free(p(3), 2, 1));
        assert!((0..=MAX_DEGREE)
            .filter(|&q| q != 4)
            .all(|q| prof.get(q).is_zero()));
    }

    #[test]
    fn a1_integral_and_rational() {
        let a1 = gen_ade(DynkinFamily::A, 1).unwrap();
        let prof = local_homology_rational(&a1, p(2), Coefficients::Integral).unwrap();
        assert_eq!(prof.get(4).to_string(), "Z_2(2)");
        assert_eq!(prof.get(2).to_string(), "Z/2(1)");
        assert!(prof.satisfies_vanishing(true));
        for ell in [2, 3, 5] {
            let prof = local_homology_rational(&a1, p(ell), Coefficients::Rational).unwrap();
            assert_eq!(prof.get(4).to_string(), format!("Q_{ell}(2)"));
            assert!(prof.modules().iter().all(|m| m.is_torsion_free()));
            assert!((0..4).all(|q| prof.get(q).is_zero()));
        }
    }

    #[test]
    fn rational_profile_rejects_invalid_graphs() {
        assert!(matches!(
            local_homology_rational(&cycle3(), p(2), Coefficients::Integral),
            Err(Error::ValidationFailed(_))
        ));
    }

    #[test]
    fn general_matches_rational_on_forests() {
        let d5 = gen_ade(DynkinFamily::D, 5).unwrap();
        for ell in [2, 3, 5] {
            let r = local_homology_rational(&d5, p(ell), Coefficients::Integral).unwrap();
            let g = local_homology_general(&d5, p(ell), &GeneralCurveInput::default()).unwrap();
            assert_eq!(r.modules(), g.modules());
        }
    }

    #[test]
    fn general_cycle_with_supplied_h1() {
        let extra = GeneralCurveInput {
            h1_rank: 1,
            h1_homology: None,
        };
        let prof = local_homology_general(&cycle3(), p(2), &extra).unwrap();
        assert_eq!(prof.get(3), &LModule::free(p(2), 2, 1));
        // coker of the -3 cycle matrix has order 16
        assert_eq!(prof.get(2).torsion_order(), 16u32.into());
        assert!(prof.satisfies_vanishing(false));
        assert!(!prof.satisfies_vanishing(true));
    }

    #[test]
    fn general_a2_three_part() {
        let a2 = gen_ade(DynkinFamily::A, 2).unwrap();
        let prof = local_homology_general(&a2, p(3), &GeneralCurveInput::default()).unwrap();
        assert_eq!(prof.get(2).to_string(), "Z/3(1)");
        assert!(prof.get(3).is_zero());
    }

    #[test]
    fn general_free_quotient_from_h1_homology() {
        let extra = GeneralCurveInput {
            h1_rank: 1,
            h1_homology: Some(
                LModule::from_summands(
                    p(2),
                    vec![Summand {
                        twist: 0,
                        free_rank: 1,
                        torsion_exponents: vec![3],
                    }],
                )
                .unwrap(),
            ),
        };
        let prof = local_homology_general(&cycle3(), p(2), &extra).unwrap();
        let ext = prof.h2_extension.as_ref().unwrap();
        assert_eq!(ext.free_quotient_rank, 1);
        assert_eq!(prof.get(2).free_rank(), 1);
    }

    #[test]
    fn general_errors() {
        let pair = DualGraph::new::<&str>(
            "pair",
            vec![Vertex::new("x", -2), Vertex::new("y", -2)],
            &[],
        )
        .unwrap();
        let extra = GeneralCurveInput::default();
        assert!(matches!(
            local_homology_general(&pair, p(2), &extra),
            Err(Error::NotConnected { components: 2 })
        ));
        assert!(matches!(
            local_homology_general(&DualGraph::empty("e"), p(2), &extra),
            Err(Error::NotConnected { components: 0 })
        ));
        let flat = DualGraph::new::<&str>("flat", vec![Vertex::new("x", 0)], &[]).unwrap();
        assert!(matches!(
            local_homology_general(&flat, p(2), &extra),
            Err(Error::NotNegativeDefinite)
        ));
        let inseparable = DualGraph::new::<&str>(
            "ins",
            vec![Vertex::new("x", -2).with_residue_degree(3)],
            &[],
        )
        .unwrap();
        assert!(matches!(
            local_homology_general(&inseparable, p(3), &extra),
            Err(Error::DegreeNotSurjective { ell: 3 })
        ));
    }
}
