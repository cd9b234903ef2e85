//! Ext-dimension bookkeeping for families of semistable bundles built by
//! iterated line-bundle extensions on the canonical rank-9 lattice: Hom
//! vanishing through effectivity, Ext^1 dimensions through Euler
//! characteristics, Hilbert polynomial comparison, the equal-reduced-
//! polynomial semistability certificate, and the rank-n construction
//! schedule with its parameter-space dimension.

use num_traits::{One, Signed};
use serde_json::Value;

use crate::geometry::{GeometryError, SurfaceGeometry, ThreeValued};
use crate::lattice::{int_to_json, DivisorClass, LatticeError, LatticeSpec};
use crate::matrix::Int;
use crate::two_elementary::{build_dp9, Dp9};

#[derive(Debug, thiserror::Error)]
pub enum ExtensionError {
    #[error("Hom spaces between {d1} and {d2} do not both vanish; Ext^1 dimension is not determined by the Euler characteristic")]
    HomNotVanishing { d1: DivisorClass, d2: DivisorClass },
    #[error("computed Ext^1 dimension {dim} is negative; inconsistent input")]
    NegativeDimension { dim: Int },
    #[error("rank {n} is below 2; extensions start at rank 2")]
    RankTooSmall { n: u64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Hom(O(D1), O(D2)) = H^0(D2 - D1) vanishes iff D2 - D1 is not effective.
pub fn hom_vanishing(
    geom: &SurfaceGeometry,
    d1: &DivisorClass,
    d2: &DivisorClass,
) -> Result<ThreeValued, ExtensionError> {
    let diff = d2 - d1;
    Ok(if geom.is_effective(&diff)?.is_effective() { ThreeValued::No } else { ThreeValued::Yes })
}

/// dim Ext^1(O(D1), O(D2)) = -chi(D2 - D1), valid when Hom vanishes in both
/// directions (the reverse direction kills Ext^2 by duality).
pub fn ext1_dim(
    geom: &SurfaceGeometry,
    d1: &DivisorClass,
    d2: &DivisorClass,
) -> Result<Int, ExtensionError> {
    if !hom_vanishing(geom, d1, d2)?.is_yes() || !hom_vanishing(geom, d2, d1)?.is_yes() {
        return Err(ExtensionError::HomNotVanishing { d1: d1.clone(), d2: d2.clone() });
    }
    let dim = -geom.chi(&(d2 - d1))?;
    if dim.is_negative() {
        return Err(ExtensionError::NegativeDimension { dim });
    }
    Ok(dim)
}

/// Coefficients of chi(O(D + nH)) = c2 n^2 + c1 n + c0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertPoly {
    pub c2: Int,
    pub c1: Int,
    pub c0: Int,
}

pub fn hilbert_poly(
    lat: &LatticeSpec,
    h: &DivisorClass,
    d: &DivisorClass,
) -> Result<HilbertPoly, ExtensionError> {
    let c2 = lat.self_int(h)? / 2;
    let c1 = lat.pair(h, d)?;
    let c0 = lat.self_int(d)? / 2 + 2;
    Ok(HilbertPoly { c2, c1, c0 })
}

/// All classes share one reduced Hilbert polynomial (rank-1 blocks, so the
/// reduced polynomial is the plain one).
pub fn reduced_hilbert_equal(
    lat: &LatticeSpec,
    h: &DivisorClass,
    classes: &[DivisorClass],
) -> Result<bool, ExtensionError> {
    let mut first: Option<HilbertPoly> = None;
    for d in classes {
        let p = hilbert_poly(lat, h, d)?;
        match &first {
            None => first = Some(p),
            Some(f) if *f == p => {}
            Some(_) => return Ok(false),
        }
    }
    Ok(true)
}

/// One construction event: a line-bundle quotient extended over the current
/// bundle, with the Ext^1 dimensions against its simple factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanStep {
    /// Name of the added line-bundle class.
    pub added: String,
    /// Rank of the sub-bundle being extended.
    pub sub_rank: u64,
    /// Ext^1 dimensions against the simple factors of the sub-bundle; the
    /// parameter space of the step is the product of their projectivizations.
    pub ext1_dims: Vec<Int>,
    pub rank_after: u64,
}

/// Rank-n construction schedule with the Ext-dimension audit trail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionPlan {
    pub rank: u64,
    pub steps: Vec<PlanStep>,
    /// Dimension of the family: sum of (ext1 dim - 1) over the final step's
    /// factors.
    pub parameter_space_dim: Int,
    /// The line-bundle classes used as building blocks.
    pub building_blocks: Vec<(String, DivisorClass)>,
    /// Equal-reduced-Hilbert-polynomial certificate over the blocks.
    pub semistable: bool,
}

impl ExtensionPlan {
    pub fn to_json(&self) -> Value {
        let mut obj = serde_json::Map::new();
        obj.insert("rank".into(), Value::from(self.rank));
        obj.insert(
            "steps".into(),
            Value::Array(
                self.steps
                    .iter()
                    .map(|s| {
                        let mut o = serde_json::Map::new();
                        o.insert("added".into(), Value::String(s.added.clone()));
                        o.insert("sub_rank".into(), Value::from(s.sub_rank));
                        o.insert(
                            "ext1_dims".into(),
                            Value::Array(s.ext1_dims.iter().map(int_to_json).collect()),
                        );
                        o.insert("rank_after".into(), Value::from(s.rank_after));
                        Value::Object(o)
                    })
                    .collect(),
            ),
        );
        obj.insert("parameter_space_dim".into(), int_to_json(&self.parameter_space_dim));
        obj.insert(
            "building_blocks".into(),
            Value::Array(
                self.building_blocks
                    .iter()
                    .map(|(name, class)| {
                        let mut o = serde_json::Map::new();
                        o.insert("name".into(), Value::String(name.clone()));
                        o.insert(
                            "coords".into(),
                            Value::Array(class.coords().iter().map(int_to_json).collect()),
                        );
                        Value::Object(o)
                    })
                    .collect(),
            ),
        );
        obj.insert("semistable".into(), Value::Bool(self.semistable));
        Value::Object(obj)
    }
}

/// Certificate that every block of the plan shares one reduced Hilbert
/// polynomial; extensions of such blocks are semistable by induction. This
/// certifies the construction, it is not a general semistability decider.
pub fn semistable_certificate(
    lat: &LatticeSpec,
    h: &DivisorClass,
    plan: &ExtensionPlan,
) -> Result<bool, ExtensionError> {
    let classes: Vec<DivisorClass> =
        plan.building_blocks.iter().map(|(_, c)| c.clone()).collect();
    reduced_hilbert_equal(lat, h, &classes)
}

/// The rank-n family schedule over the canonical rank-9 blocks D1..D4.
pub fn family_plan(n: u64) -> Result<ExtensionPlan, ExtensionError> {
    let dp9 = build_dp9();
    family_plan_on(&dp9, n)
}

pub fn family_plan_on(dp9: &Dp9, n: u64) -> Result<ExtensionPlan, ExtensionError> {
    let blocks: [(&str, &DivisorClass); 4] = [
        ("d1", dp9.block(1)),
        ("d2", dp9.block(2)),
        ("d3", dp9.block(3)),
        ("d4", dp9.block(4)),
    ];
    let named: Vec<(String, DivisorClass)> =
        blocks.iter().map(|(n, c)| (n.to_string(), (*c).clone())).collect();
    plan_from_blocks(dp9.geometry(), dp9.polarization(), &named, n)
}

/// Advanced entry point: the same schedule over caller-supplied blocks, with
/// every pairwise Hom-vanishing hypothesis re-verified.
pub fn family_plan_with_blocks(
    geom: &SurfaceGeometry,
    h: &DivisorClass,
    blocks: &[(String, DivisorClass); 4],
    n: u64,
) -> Result<ExtensionPlan, ExtensionError> {
    plan_from_blocks(geom, h, blocks, n)
}

fn plan_from_blocks(
    geom: &SurfaceGeometry,
    h: &DivisorClass,
    blocks: &[(String, DivisorClass)],
    n: u64,
) -> Result<ExtensionPlan, ExtensionError> {
    if n < 2 {
        return Err(ExtensionError::RankTooSmall { n });
    }
    assert_eq!(blocks.len(), 4, "the schedule uses four building blocks");
    for i in 0..4 {
        for j in 0..4 {
            if i != j && !hom_vanishing(geom, &blocks[i].1, &blocks[j].1)?.is_yes() {
                return Err(ExtensionError::HomNotVanishing {
                    d1: blocks[i].1.clone(),
                    d2: blocks[j].1.clone(),
                });
            }
        }
    }
    let (d1, d2, d3, d4) = (&blocks[0], &blocks[1], &blocks[2], &blocks[3]);
    let e12 = ext1_dim(geom, &d1.1, &d2.1)?;
    let mut steps = Vec::new();
    let mut used: Vec<(String, DivisorClass)> = vec![d1.clone(), d2.clone()];

    if n == 2 {
        steps.push(PlanStep {
            added: d1.0.clone(),
            sub_rank: 1,
            ext1_dims: vec![e12.clone()],
            rank_after: 2,
        });
        let dim = &e12 - Int::one();
        return finish_plan(geom, h, steps, used, dim, 2);
    }

    let m = (n - 1) / 2; // n = 2m+1 or 2m+2, m >= 1
    // m rank-2 blocks, each a nontrivial extension of O(D1) by O(D2); the
    // blocks are pairwise non-isomorphic points of the same P^1 family.
    for _ in 0..m {
        steps.push(PlanStep {
            added: d1.0.clone(),
            sub_rank: 1,
            ext1_dims: vec![e12.clone()],
            rank_after: 2,
        });
    }
    // Ext^1(O(D3), E_i) has dimension ext1(D3, D2) + ext1(D3, D1).
    let e3_block = ext1_dim(geom, &d3.1, &d2.1)? + ext1_dim(geom, &d3.1, &d1.1)?;
    let odd_step = PlanStep {
        added: d3.0.clone(),
        sub_rank: 2 * m,
        ext1_dims: vec![e3_block.clone(); m as usize],
        rank_after: 2 * m + 1,
    };
    used.push(d3.clone());
    if n == 2 * m + 1 {
        let dim = odd_step.ext1_dims.iter().map(|d| d - Int::one()).sum();
        steps.push(odd_step);
        return finish_plan(geom, h, steps, used, dim, n);
    }
    steps.push(odd_step);
    // n = 2m + 2: extend O(D4) over the rank 2m+1 bundle; the Ext^1 space
    // has dimension ext1(D4, D3) + m * (ext1(D4, D2) + ext1(D4, D1)).
    let e4 = ext1_dim(geom, &d4.1, &d3.1)?
        + Int::from(m) * (ext1_dim(geom, &d4.1, &d2.1)? + ext1_dim(geom, &d4.1, &d1.1)?);
    let dim = &e4 - Int::one();
    steps.push(PlanStep {
        added: d4.0.clone(),
        sub_rank: 2 * m + 1,
        ext1_dims: vec![e4],
        rank_after: n,
    });
    used.push(d4.clone());
    finish_plan(geom, h, steps, used, dim, n)
}

fn finish_plan(
    geom: &SurfaceGeometry,
    h: &DivisorClass,
    steps: Vec<PlanStep>,
    building_blocks: Vec<(String, DivisorClass)>,
    parameter_space_dim: Int,
    rank: u64,
) -> Result<ExtensionPlan, ExtensionError> {
    let mut plan = ExtensionPlan {
        rank,
        steps,
        parameter_space_dim,
        building_blocks,
        semistable: false,
    };
    plan.semistable = semistable_certificate(geom.lattice(), h, &plan)?;
    Ok(plan)
}
