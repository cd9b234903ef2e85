//! 2-elementary K3 structure: the fixed-locus descriptor of the canonical
//! involution, the classification of hyperbolic 2-elementary lattices of
//! rank a, the canonical rank-9 lattice built from the degree-1 Del Pezzo
//! pullback basis, and the quotient-genus degree constraints used in the
//! invariant-curve case split.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

use crate::geometry::SurfaceGeometry;
use crate::lattice::{DivisorClass, LatticeError, LatticeSpec};
use crate::matrix::{Int, IntMatrix};

#[derive(Debug, thiserror::Error)]
pub enum TwoElementaryError {
    #[error("invariants (rho, a) = ({rho}, {a}) outside the admissible range")]
    RangeViolation { rho: i64, a: i64 },
    #[error("rho = {rho} and a = {a} have different parity")]
    ParityViolation { rho: i64, a: i64 },
    #[error("delta = 0 with rank a = {a} is impossible; only a = 2 (the doubled hyperbolic plane) exists")]
    DeltaZeroRank { a: i64 },
    #[error("rank a = {a} outside 1..=9")]
    RankOutOfRange { a: i64 },
    #[error("square {sq} must be even and nonnegative")]
    BadSquare { sq: Int },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Shape of the fixed locus of the canonical involution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixedLocusDescriptor {
    /// Fixed-point free: (rho, a, delta) = (10, 10, 0).
    Empty,
    /// Two disjoint elliptic curves: (rho, a, delta) = (10, 8, 0).
    TwoElliptic,
    /// A curve of genus g plus k disjoint rational curves.
    GeneralSum { genus: i64, rational_tails: i64, elliptic_type: bool },
}

/// Fixed-locus dispatch on the invariants (rho, a, delta).
pub fn fixed_locus(rho: i64, a: i64, delta: u8) -> Result<FixedLocusDescriptor, TwoElementaryError> {
    if !(1..=20).contains(&rho) || a < 0 || a > rho || rho + a > 22 {
        return Err(TwoElementaryError::RangeViolation { rho, a });
    }
    if (rho - a) % 2 != 0 {
        return Err(TwoElementaryError::ParityViolation { rho, a });
    }
    if (rho, a, delta) == (10, 10, 0) {
        return Ok(FixedLocusDescriptor::Empty);
    }
    if (rho, a, delta) == (10, 8, 0) {
        return Ok(FixedLocusDescriptor::TwoElliptic);
    }
    let genus = (22 - rho - a) / 2;
    let rational_tails = (rho - a) / 2;
    Ok(FixedLocusDescriptor::GeneralSum { genus, rational_tails, elliptic_type: genus >= 2 })
}

/// The hyperbolic even 2-elementary lattice of rank a with invariant a:
/// the doubled hyperbolic plane for delta = 0 (forcing a = 2), and
/// diag(2, -2, ..., -2) for delta = 1.
pub fn classify_rank_a(a: i64, delta: u8) -> Result<LatticeSpec, TwoElementaryError> {
    if !(1..=9).contains(&a) {
        return Err(TwoElementaryError::RankOutOfRange { a });
    }
    if delta == 0 {
        if a != 2 {
            return Err(TwoElementaryError::DeltaZeroRank { a });
        }
        let gram = IntMatrix::from_i64_rows(&[vec![0, 2], vec![2, 0]]).expect("rectangular");
        return Ok(LatticeSpec::new(
            "u2",
            vec!["f1".into(), "f2".into()],
            gram,
            DivisorClass::from_i64(&[1, 1]),
            true,
        )?);
    }
    let n = a as usize;
    let mut rows = vec![vec![0i64; n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = if i == 0 { 2 } else { -2 };
    }
    let gram = IntMatrix::from_i64_rows(&rows).expect("rectangular");
    let mut basis = vec!["b".to_string()];
    for i in 1..n {
        basis.push(format!("e{i}"));
    }
    // The fixed-curve class 3B - sum(E_i) is ample on the corresponding
    // surfaces for every a in 1..=9.
    let mut ample = vec![3i64];
    ample.extend(std::iter::repeat_n(-1, n - 1));
    Ok(LatticeSpec::new(
        format!("two-elementary-a{a}"),
        basis,
        gram,
        DivisorClass::from_i64(&ample),
        true,
    )?)
}

/// The canonical rank-9 lattice diag(2, -2^8) with its named classes: the
/// pullback basis B, E1..E8, the fixed-curve class X = 3B - sum(E_i), the
/// polarization H = 3X, and the four conic blocks D1..D4.
#[derive(Debug)]
pub struct Dp9 {
    geometry: SurfaceGeometry,
    xtheta: DivisorClass,
    polarization: DivisorClass,
    blocks: [DivisorClass; 4],
}

impl Dp9 {
    pub fn geometry(&self) -> &SurfaceGeometry {
        &self.geometry
    }

    pub fn lattice(&self) -> &LatticeSpec {
        self.geometry.lattice()
    }

    /// The ample fixed-curve class X = 3B - sum(E_i), square 2.
    pub fn xtheta(&self) -> &DivisorClass {
        &self.xtheta
    }

    /// The genus-2 triple polarization H = 3X, square 18.
    pub fn polarization(&self) -> &DivisorClass {
        &self.polarization
    }

    /// Block D_i (1-based, i in 1..=4): B - E_{2i-1} - E_{2i}.
    pub fn block(&self, i: usize) -> &DivisorClass {
        &self.blocks[i - 1]
    }

    pub fn blocks(&self) -> &[DivisorClass; 4] {
        &self.blocks
    }

    pub fn line(&self) -> DivisorClass {
        DivisorClass::from_i64(&[1, 0, 0, 0, 0, 0, 0, 0, 0])
    }

    pub fn exceptional(&self, i: usize) -> DivisorClass {
        assert!((1..=8).contains(&i));
        let mut v = [0i64; 9];
        v[i] = 1;
        DivisorClass::from_i64(&v)
    }

    /// Resolve a named class: "b", "e1".."e8", "xtheta", "h", "d1".."d4".
    pub fn named(&self, name: &str) -> Option<DivisorClass> {
        match name {
            "b" => Some(self.line()),
            "xtheta" => Some(self.xtheta.clone()),
            "h" => Some(self.polarization.clone()),
            "d1" | "d2" | "d3" | "d4" => {
                let i = name[1..].parse::<usize>().ok()?;
                Some(self.blocks[i - 1].clone())
            }
            _ => {
                let rest = name.strip_prefix('e')?;
                let i = rest.parse::<usize>().ok()?;
                (1..=8).contains(&i).then(|| self.exceptional(i))
            }
        }
    }

    /// True when a lattice has exactly the canonical rank-9 data: Gram
    /// diag(2, -2^8) in the stored basis order.
    pub fn fingerprint_matches(lat: &LatticeSpec) -> bool {
        if lat.rank() != 9 {
            return false;
        }
        let gram = lat.gram();
        for i in 0..9 {
            for j in 0..9 {
                let want = if i != j {
                    Int::zero()
                } else if i == 0 {
                    Int::from(2)
                } else {
                    Int::from(-2)
                };
                if gram[(i, j)] != want {
                    return false;
                }
            }
        }
        true
    }
}

/// Build the canonical rank-9 lattice and verify its identity battery.
pub fn build_dp9() -> Dp9 {
    let lat = classify_rank_a(9, 1).expect("rank 9, delta 1 is admissible");
    let xtheta = lat.ample_ref().clone();
    let polarization = xtheta.scale(&Int::from(3));
    let blocks = [
        DivisorClass::from_i64(&[1, -1, -1, 0, 0, 0, 0, 0, 0]),
        DivisorClass::from_i64(&[1, 0, 0, -1, -1, 0, 0, 0, 0]),
        DivisorClass::from_i64(&[1, 0, 0, 0, 0, -1, -1, 0, 0]),
        DivisorClass::from_i64(&[1, 0, 0, 0, 0, 0, 0, -1, -1]),
    ];
    let dp9 = Dp9 { geometry: SurfaceGeometry::new(lat), xtheta, polarization, blocks };
    debug_assert!(dp9.verify_identities().is_empty());
    dp9
}

impl Dp9 {
    /// Check the construction identities; returns the failures (empty = ok).
    pub fn verify_identities(&self) -> Vec<String> {
        let mut failures = Vec::new();
        let lat = self.lattice();
        let mut check = |name: &str, got: Int, want: i64| {
            if got != Int::from(want) {
                failures.push(format!("{name}: got {got}, want {want}"));
            }
        };
        check("X^2", lat.self_int(&self.xtheta).unwrap(), 2);
        check("H^2", lat.self_int(&self.polarization).unwrap(), 18);
        for (i, d) in self.blocks.iter().enumerate() {
            check(&format!("D{}^2", i + 1), lat.self_int(d).unwrap(), -2);
            check(&format!("X.D{}", i + 1), lat.pair(&self.xtheta, d).unwrap(), 2);
        }
        match lat.two_elementary_invariants() {
            Ok(crate::lattice::TwoElementaryOutcome::Invariants(inv)) => {
                if (inv.rho, inv.a, inv.delta) != (9, 9, 1) {
                    failures.push(format!(
                        "invariants: got ({}, {}, {}), want (9, 9, 1)",
                        inv.rho, inv.a, inv.delta
                    ));
                }
            }
            other => failures.push(format!("invariants: unexpected outcome {other:?}")),
        }
        failures
    }
}

/// Degree constraints for a smooth invariant or non-invariant member of a
/// linear system, split by the two branches of the involution case analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeConstraints {
    /// Degrees from the invariant branch: d = D^2 - 4(gamma - 1) > 0 over
    /// quotient genera gamma in 0..=max.
    pub invariant: BTreeSet<Int>,
    /// The non-invariant branch allows any positive degree up to D^2.
    pub noninvariant_max: Int,
}

impl DegreeConstraints {
    pub fn allows(&self, degree: &Int) -> bool {
        self.invariant.contains(degree)
            || (degree.is_positive() && *degree <= self.noninvariant_max)
    }
}

/// Allowed fixed-curve degrees for a class of even square `d_sq >= 0`, with
/// the quotient-genus range passed explicitly.
pub fn invariant_degree_constraints(
    d_sq: &Int,
    max_quotient_genus: u32,
) -> Result<DegreeConstraints, TwoElementaryError> {
    if d_sq.is_negative() || d_sq.is_odd() {
        return Err(TwoElementaryError::BadSquare { sq: d_sq.clone() });
    }
    let mut invariant = BTreeSet::new();
    for gamma in 0..=i64::from(max_quotient_genus) {
        let degree = d_sq - Int::from(4) * (Int::from(gamma) - Int::one());
        if degree.is_positive() {
            invariant.insert(degree);
        }
    }
    Ok(DegreeConstraints { invariant, noninvariant_max: d_sq.clone() })
}

/// Built-in lattice registry.
pub fn builtin_lattice(name: &str) -> Option<LatticeSpec> {
    match name {
        "dp9" => {
            let lat = classify_rank_a(9, 1).expect("admissible");
            Some(
                LatticeSpec::new(
                    "dp9",
                    lat.basis_labels().to_vec(),
                    lat.gram().clone(),
                    lat.ample_ref().clone(),
                    true,
                )
                .expect("validated"),
            )
        }
        "u2" => classify_rank_a(2, 0).ok(),
        "quartic-demo" => LatticeSpec::new(
            "quartic-demo",
            vec!["h".into(), "c".into()],
            IntMatrix::from_i64_rows(&[vec![4, 0], vec![0, -2]]).expect("rectangular"),
            DivisorClass::from_i64(&[2, 1]),
            true,
        )
        .ok(),
        _ => None,
    }
}

pub fn builtin_names() -> &'static [&'static str] {
    &["dp9", "u2", "quartic-demo"]
}
