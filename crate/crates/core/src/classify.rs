//! Numerical ACM/initialized classification of line-bundle classes against a
//! polarization: the genus-2 table (H^2 = 18), the quartic table (H^2 = 4),
//! the general very-ample table (D^2 >= H^2 - 4), the bounded-twist
//! sufficiency test, and the structural classification on the canonical
//! rank-9 lattice.

use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::geometry::{GeometryError, SurfaceGeometry, ThreeValued};
use crate::lattice::{int_to_json, DivisorClass};
use crate::matrix::Int;
use crate::two_elementary::Dp9;

#[derive(Debug, thiserror::Error)]
pub enum ClassifyError {
    #[error("polarization has square {got}, expected {expected}")]
    WrongPolarizationSquare { expected: i64, got: Int },
    #[error("polarization failed the numeric very-ampleness test")]
    PolarizationNotVeryAmple,
    #[error("polarization very-ampleness is undecided: {0}")]
    PolarizationUndecided(String),
    #[error("class {0} is not effective; the tables assume a nonzero effective class")]
    NotEffective(DivisorClass),
    #[error("the zero class is not admitted")]
    ZeroClass,
    #[error("class square {d_sq} is below {min}; outside the table's range")]
    OutOfScope { d_sq: Int, min: Int },
    #[error("lattice does not carry the canonical rank-9 data")]
    NotCanonicalRank9,
    #[error("structural witness for case ({case}) failed on {gamma}; inconsistent input data")]
    WitnessFailed { case: char, gamma: DivisorClass },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Lattice(#[from] crate::lattice::LatticeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictStatus {
    AcmInitialized,
    Not,
    Conditional,
}

impl VerdictStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictStatus::AcmInitialized => "AcmInitialized",
            VerdictStatus::Not => "Not",
            VerdictStatus::Conditional => "Conditional",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideCondition {
    pub condition: String,
    pub value: ThreeValued,
}

/// Classification outcome: the status, the table row when one matched, and
/// the side conditions that did not resolve to yes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcmVerdict {
    pub status: VerdictStatus,
    pub case_label: Option<char>,
    pub d_sq: Int,
    pub hd: Int,
    pub unresolved: Vec<SideCondition>,
}

impl AcmVerdict {
    fn not(d_sq: Int, hd: Int) -> Self {
        AcmVerdict { status: VerdictStatus::Not, case_label: None, d_sq, hd, unresolved: Vec::new() }
    }

    fn row(case: char, d_sq: Int, hd: Int, sides: Vec<(String, ThreeValued)>) -> Self {
        let pending: Vec<SideCondition> = sides
            .into_iter()
            .filter(|(_, v)| !v.is_yes())
            .map(|(condition, value)| SideCondition { condition, value })
            .collect();
        if pending.iter().any(|c| c.value.is_no()) {
            return AcmVerdict {
                status: VerdictStatus::Not,
                case_label: None,
                d_sq,
                hd,
                unresolved: pending,
            };
        }
        if pending.is_empty() {
            AcmVerdict {
                status: VerdictStatus::AcmInitialized,
                case_label: Some(case),
                d_sq,
                hd,
                unresolved: Vec::new(),
            }
        } else {
            AcmVerdict {
                status: VerdictStatus::Conditional,
                case_label: Some(case),
                d_sq,
                hd,
                unresolved: pending,
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let mut obj = serde_json::Map::new();
        obj.insert("status".into(), Value::String(self.status.as_str().into()));
        obj.insert(
            "case".into(),
            self.case_label.map_or(Value::Null, |c| Value::String(c.to_string())),
        );
        obj.insert("D_sq".into(), int_to_json(&self.d_sq));
        obj.insert("HD".into(), int_to_json(&self.hd));
        obj.insert(
            "unresolved".into(),
            Value::Array(
                self.unresolved
                    .iter()
                    .map(|c| {
                        let mut o = serde_json::Map::new();
                        o.insert("condition".into(), Value::String(c.condition.clone()));
                        o.insert("value".into(), Value::String(c.value.as_str().into()));
                        Value::Object(o)
                    })
                    .collect(),
            ),
        );
        Value::Object(obj)
    }
}

/// Whether the polarization's very-ampleness is verified here or attested by
/// the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolarizationTrust {
    VerifyNumerically,
    Attested,
}

/// Side-condition inputs for rows that need them; Unknown when the caller has
/// no information.
#[derive(Debug, Clone)]
pub struct GenusTwoSides {
    /// |H - D| = empty (row c at degree 12).
    pub h_minus_d_empty: ThreeValued,
    /// h^0(D - H) = 0, i.e. |D - H| = empty (row h).
    pub d_minus_h_empty: ThreeValued,
    /// h^1(2H - D) = 0 (row h).
    pub h1_2h_minus_d_zero: ThreeValued,
}

impl GenusTwoSides {
    pub fn unknown() -> Self {
        GenusTwoSides {
            h_minus_d_empty: ThreeValued::Unknown("not evaluated".into()),
            d_minus_h_empty: ThreeValued::Unknown("not evaluated".into()),
            h1_2h_minus_d_zero: ThreeValued::Unknown("not evaluated".into()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VeryAmpleSides {
    /// |D - H| = empty (row c).
    pub d_minus_h_empty: ThreeValued,
    /// h^1(2H - D) = 0 (row c).
    pub h1_2h_minus_d_zero: ThreeValued,
}

impl VeryAmpleSides {
    pub fn unknown() -> Self {
        VeryAmpleSides {
            d_minus_h_empty: ThreeValued::Unknown("not evaluated".into()),
            h1_2h_minus_d_zero: ThreeValued::Unknown("not evaluated".into()),
        }
    }
}

/// chi(2H - D) from the numeric data; h^1(2H - D) = 0 is arithmetically
/// impossible when this is negative.
fn chi_2h_minus_d(h_sq: &Int, d_sq: &Int, hd: &Int) -> Int {
    ((Int::from(4) * h_sq - Int::from(4) * hd + d_sq) / 2) + 2
}

/// Tighten an h^1(2H - D) = 0 flag against chi: chi < 0 forces h^1 > 0.
fn tighten_h1(h_sq: &Int, d_sq: &Int, hd: &Int, flag: ThreeValued) -> ThreeValued {
    if chi_2h_minus_d(h_sq, d_sq, hd).is_negative() {
        return ThreeValued::No;
    }
    flag
}

/// Tighten a |D - H| emptiness flag: negative degree against the ample
/// polarization forces emptiness.
fn tighten_d_minus_h(h_sq: &Int, hd: &Int, flag: ThreeValued) -> ThreeValued {
    if hd < h_sq {
        return ThreeValued::Yes;
    }
    flag
}

/// The genus-2 table (H^2 = 18) as a pure numeric row lookup. The divisibility
/// 3 | H.D is a hard necessary condition.
pub fn genus2_rows(d_sq: &Int, hd: &Int, sides: &GenusTwoSides) -> AcmVerdict {
    let (d_sq, hd) = (d_sq.clone(), hd.clone());
    if !(&hd % Int::from(3)).is_zero() {
        return AcmVerdict::not(d_sq, hd);
    }
    let h_sq = Int::from(18);
    let hd_i = &hd;
    let in_list = |vals: &[i64]| vals.iter().any(|v| *hd_i == Int::from(*v));
    match i64::try_from(&d_sq) {
        Ok(-2) if in_list(&[3, 6, 9]) => AcmVerdict::row('a', d_sq, hd, vec![]),
        Ok(0) if in_list(&[9]) => AcmVerdict::row('b', d_sq, hd, vec![]),
        Ok(2) if in_list(&[6, 9, 12]) => {
            let mut sides_out = vec![];
            if hd == Int::from(12) {
                sides_out.push(("|H-D| = empty".to_string(), sides.h_minus_d_empty.clone()));
            }
            AcmVerdict::row('c', d_sq, hd, sides_out)
        }
        Ok(4) if in_list(&[9, 12]) => AcmVerdict::row('d', d_sq, hd, vec![]),
        Ok(8) if in_list(&[12, 15]) => AcmVerdict::row('e', d_sq, hd, vec![]),
        Ok(10) if in_list(&[15]) => AcmVerdict::row('f', d_sq, hd, vec![]),
        Ok(14) if in_list(&[18]) => AcmVerdict::row('g', d_sq, hd, vec![]),
        Ok(20) | Ok(26) | Ok(32) if d_sq == Int::from(2) * &hd - 22 => {
            let h0 = tighten_d_minus_h(&h_sq, &hd, sides.d_minus_h_empty.clone());
            let h1 = tighten_h1(&h_sq, &d_sq, &hd, sides.h1_2h_minus_d_zero.clone());
            AcmVerdict::row(
                'h',
                d_sq,
                hd,
                vec![("h0(D-H) = 0".to_string(), h0), ("h1(2H-D) = 0".to_string(), h1)],
            )
        }
        _ => AcmVerdict::not(d_sq, hd),
    }
}

/// The quartic table (H^2 = 4) as a pure numeric row lookup.
pub fn classify_quartic(
    d_sq: &Int,
    hd: &Int,
    empty_d_minus_h: ThreeValued,
    empty_2h_minus_d: ThreeValued,
) -> AcmVerdict {
    let (d_sq_c, hd_c) = (d_sq.clone(), hd.clone());
    let one = Int::one();
    if *d_sq == Int::from(-2) && *hd >= one && *hd <= Int::from(3) {
        return AcmVerdict::row('a', d_sq_c, hd_c, vec![]);
    }
    if d_sq.is_zero() && *hd >= Int::from(3) && *hd <= Int::from(4) {
        return AcmVerdict::row('b', d_sq_c, hd_c, vec![]);
    }
    if *d_sq == Int::from(2) && *hd == Int::from(5) {
        return AcmVerdict::row('c', d_sq_c, hd_c, vec![]);
    }
    if *d_sq == Int::from(4) && *hd == Int::from(6) {
        return AcmVerdict::row(
            'd',
            d_sq_c,
            hd_c,
            vec![
                ("|D-H| = empty".to_string(), empty_d_minus_h),
                ("|2H-D| = empty".to_string(), empty_2h_minus_d),
            ],
        );
    }
    AcmVerdict::not(d_sq_c, hd_c)
}

/// The general very-ample table for D^2 >= H^2 - 4, as a pure numeric row
/// lookup. Callers outside that range get an explicit error, never a guess.
pub fn very_ample_rows(
    h_sq: &Int,
    d_sq: &Int,
    hd: &Int,
    sides: &VeryAmpleSides,
) -> Result<AcmVerdict, ClassifyError> {
    if *h_sq < Int::from(4) {
        return Err(ClassifyError::WrongPolarizationSquare { expected: 4, got: h_sq.clone() });
    }
    if *d_sq < h_sq - Int::from(4) {
        return Err(ClassifyError::OutOfScope { d_sq: d_sq.clone(), min: h_sq - Int::from(4) });
    }
    let (d_sq_c, hd_c) = (d_sq.clone(), hd.clone());
    if *d_sq == h_sq - Int::from(4) && (*hd == h_sq - Int::from(1) || *hd == *h_sq) {
        return Ok(AcmVerdict::row('a', d_sq_c, hd_c, vec![]));
    }
    if *d_sq == h_sq - Int::from(2) && *hd == h_sq + Int::from(1) {
        return Ok(AcmVerdict::row('b', d_sq_c, hd_c, vec![]));
    }
    if *d_sq >= *h_sq && *d_sq == Int::from(2) * hd - h_sq - Int::from(4) {
        let empty = tighten_d_minus_h(h_sq, hd, sides.d_minus_h_empty.clone());
        let h1 = tighten_h1(h_sq, d_sq, hd, sides.h1_2h_minus_d_zero.clone());
        return Ok(AcmVerdict::row(
            'c',
            d_sq_c,
            hd_c,
            vec![("|D-H| = empty".to_string(), empty), ("h1(2H-D) = 0".to_string(), h1)],
        ));
    }
    Ok(AcmVerdict::not(d_sq_c, hd_c))
}

fn require_very_ample(
    geom: &SurfaceGeometry,
    h: &DivisorClass,
    trust: PolarizationTrust,
) -> Result<(), ClassifyError> {
    match trust {
        PolarizationTrust::Attested => Ok(()),
        PolarizationTrust::VerifyNumerically => match geom.is_very_ample_numeric(h)? {
            ThreeValued::Yes => Ok(()),
            ThreeValued::No => Err(ClassifyError::PolarizationNotVeryAmple),
            ThreeValued::Unknown(reason) => Err(ClassifyError::PolarizationUndecided(reason)),
        },
    }
}

fn require_nonzero_effective(
    geom: &SurfaceGeometry,
    d: &DivisorClass,
) -> Result<(), ClassifyError> {
    if d.is_zero() {
        return Err(ClassifyError::ZeroClass);
    }
    if !geom.is_effective(d)?.is_effective() {
        return Err(ClassifyError::NotEffective(d.clone()));
    }
    Ok(())
}

/// Evaluate "|C| = empty" exactly through the effectivity search.
fn emptiness(geom: &SurfaceGeometry, c: &DivisorClass) -> Result<ThreeValued, ClassifyError> {
    Ok(if geom.is_effective(c)?.is_effective() { ThreeValued::No } else { ThreeValued::Yes })
}

/// Genus-2 classification of a nonzero effective class against a very ample
/// polarization of square 18, with side conditions evaluated by the oracles.
pub fn classify_genus2(
    geom: &SurfaceGeometry,
    h: &DivisorClass,
    d: &DivisorClass,
    trust: PolarizationTrust,
) -> Result<AcmVerdict, ClassifyError> {
    let h_sq = geom.lattice().self_int(h)?;
    if h_sq != Int::from(18) {
        return Err(ClassifyError::WrongPolarizationSquare { expected: 18, got: h_sq });
    }
    require_very_ample(geom, h, trust)?;
    require_nonzero_effective(geom, d)?;
    let d_sq = geom.lattice().self_int(d)?;
    let hd = geom.lattice().pair(h, d)?;
    // Only rows c (at degree 12) and h consume side conditions; evaluate them
    // lazily.
    let mut sides = GenusTwoSides::unknown();
    if d_sq == Int::from(2) && hd == Int::from(12) {
        sides.h_minus_d_empty = emptiness(geom, &(h - d))?;
    }
    if d_sq >= Int::from(18) {
        sides.d_minus_h_empty = emptiness(geom, &(d - h))?;
        let two_h_minus_d = &h.scale(&Int::from(2)) - d;
        sides.h1_2h_minus_d_zero = geom.h1_zero(&two_h_minus_d)?;
    }
    Ok(genus2_rows(&d_sq, &hd, &sides))
}

/// General very-ample classification of a nonzero effective class with
/// D^2 >= H^2 - 4; side conditions evaluated by the oracles.
pub fn classify_very_ample(
    geom: &SurfaceGeometry,
    h: &DivisorClass,
    d: &DivisorClass,
    trust: PolarizationTrust,
) -> Result<AcmVerdict, ClassifyError> {
    let h_sq = geom.lattice().self_int(h)?;
    if h_sq < Int::from(4) {
        return Err(ClassifyError::WrongPolarizationSquare { expected: 4, got: h_sq });
    }
    require_very_ample(geom, h, trust)?;
    require_nonzero_effective(geom, d)?;
    let d_sq = geom.lattice().self_int(d)?;
    let hd = geom.lattice().pair(h, d)?;
    let mut sides = VeryAmpleSides::unknown();
    if d_sq >= h_sq {
        sides.d_minus_h_empty = emptiness(geom, &(d - h))?;
        let two_h_minus_d = &h.scale(&Int::from(2)) - d;
        sides.h1_2h_minus_d_zero = geom.h1_zero(&two_h_minus_d)?;
    }
    very_ample_rows(&h_sq, &d_sq, &hd, &sides)
}

/// One-directional ACM sufficiency through bounded-twist h^1 vanishing:
/// yes when H.D <= m H^2 - 1 and h^1(D - kH) = 0 for all 0 <= k <= m;
/// unknown otherwise (the test never says no).
pub fn twist_vanishing_sufficiency(
    geom: &SurfaceGeometry,
    h: &DivisorClass,
    d: &DivisorClass,
    m: u32,
    attested_twists: &[u32],
) -> Result<ThreeValued, ClassifyError> {
    if m == 0 {
        return Ok(ThreeValued::Unknown("twist bound m must be at least 1".into()));
    }
    match geom.is_ample(h)?.verdict {
        ThreeValued::Yes => {}
        other => {
            return Ok(ThreeValued::Unknown(format!(
                "polarization ampleness is {}; the sufficiency test needs an ample polarization",
                other.as_str()
            )))
        }
    }
    require_nonzero_effective(geom, d)?;
    let h_sq = geom.lattice().self_int(h)?;
    let hd = geom.lattice().pair(h, d)?;
    if hd > Int::from(m) * &h_sq - 1 {
        return Ok(ThreeValued::Unknown(format!(
            "degree {hd} exceeds the bound m*H^2 - 1 = {}; the test does not apply",
            Int::from(m) * &h_sq - 1
        )));
    }
    for k in 0..=m {
        if attested_twists.contains(&k) {
            continue;
        }
        let twisted = d - &h.scale(&Int::from(k));
        match geom.h1_zero(&twisted)? {
            ThreeValued::Yes => {}
            other => {
                return Ok(ThreeValued::Unknown(format!(
                    "h1(D - {k}H) = 0 is {}",
                    other.as_str()
                )))
            }
        }
    }
    Ok(ThreeValued::Yes)
}

/// How a classified class on the canonical rank-9 lattice is realized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Dp9Witness {
    /// The class is Gamma, 3X - Gamma or 4X - Gamma for a (-2)-curve Gamma.
    NegTwoCurve { shape: NegTwoShape, gamma: DivisorClass },
    /// The class is rX for r = 1 or 2.
    MultipleOfFixedCurve { r: u8 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NegTwoShape {
    Identity,
    ThreeXMinus,
    FourXMinus,
}

/// Structural classification on the canonical rank-9 lattice: the numeric
/// case (a)-(e) plus the verified structural realization (f)/(g).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Dp9Verdict {
    AcmInitialized { case: char, witness: Dp9Witness },
    Not,
}

pub fn classify_dp9(dp9: &Dp9, d: &DivisorClass) -> Result<Dp9Verdict, ClassifyError> {
    if !Dp9::fingerprint_matches(dp9.lattice()) {
        return Err(ClassifyError::NotCanonicalRank9);
    }
    let geom = dp9.geometry();
    require_nonzero_effective(geom, d)?;
    let d_sq = geom.lattice().self_int(d)?;
    let hd = geom.lattice().pair(dp9.polarization(), d)?;
    let x = dp9.xtheta();
    let pair = (i64::try_from(&d_sq), i64::try_from(&hd));
    let (case, witness) = match pair {
        (Ok(-2), Ok(6)) => {
            let gamma = d.clone();
            if !geom.is_neg2_curve(&gamma)? {
                return Err(ClassifyError::WitnessFailed { case: 'a', gamma });
            }
            ('a', Dp9Witness::NegTwoCurve { shape: NegTwoShape::Identity, gamma })
        }
        (Ok(2), Ok(6)) => {
            if d != x {
                return Err(ClassifyError::WitnessFailed { case: 'b', gamma: d.clone() });
            }
            ('b', Dp9Witness::MultipleOfFixedCurve { r: 1 })
        }
        (Ok(4), Ok(12)) => {
            let gamma = &x.scale(&Int::from(3)) - d;
            if !geom.is_neg2_curve(&gamma)? {
                return Err(ClassifyError::WitnessFailed { case: 'c', gamma });
            }
            ('c', Dp9Witness::NegTwoCurve { shape: NegTwoShape::ThreeXMinus, gamma })
        }
        (Ok(8), Ok(12)) => {
            if *d != x.scale(&Int::from(2)) {
                return Err(ClassifyError::WitnessFailed { case: 'd', gamma: d.clone() });
            }
            ('d', Dp9Witness::MultipleOfFixedCurve { r: 2 })
        }
        (Ok(14), Ok(18)) => {
            let gamma = &x.scale(&Int::from(4)) - d;
            if !geom.is_neg2_curve(&gamma)? {
                return Err(ClassifyError::WitnessFailed { case: 'e', gamma });
            }
            ('e', Dp9Witness::NegTwoCurve { shape: NegTwoShape::FourXMinus, gamma })
        }
        _ => return Ok(Dp9Verdict::Not),
    };
    Ok(Dp9Verdict::AcmInitialized { case, witness })
}
