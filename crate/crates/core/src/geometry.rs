//! Divisor-class geometry over a fixed polarized lattice: Riemann-Roch,
//! effectivity decision by monoid search, (-2)-curve detection, nef/ample
//! verification by wall search, base-point-freeness and very-ampleness
//! exclusion tests, and the partial first-cohomology oracle.
//!
//! Everything is decided at the lattice level. The ample reference class of
//! the lattice is trusted: a class is treated as effective exactly when it is
//! a sum of classes of square >= -2 with positive reference degree, which on
//! a K3 surface with a genuine ample reference is the effective cone.

use std::sync::{Arc, OnceLock};

use dashmap::DashMap;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::enumerate::{scan_slice, EnumerationError};
use crate::lattice::{DivisorClass, LatticeError, LatticeSpec};
use crate::matrix::{rat_sqrt_floor, rat_sqrt_upper, Int, Rat};

#[derive(Debug, thiserror::Error)]
pub enum GeometryError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error("class {0} is not effective")]
    NotEffective(DivisorClass),
    #[error("the zero class is not admitted here")]
    ZeroClass,
    #[error("class {0} is not nef; the test is only defined for nef classes")]
    NotNef(DivisorClass),
    #[error("class has square {sq}; the test requires square >= 4")]
    SquareTooSmall { sq: Int },
    #[error("class has square {sq}; a positive square is required")]
    NotPositiveSquare { sq: Int },
    #[error("class has negative square {sq}; a nonnegative square is required")]
    NegativeSquare { sq: Int },
    #[error("self-intersection {sq} is odd; not an even lattice")]
    OddSquare { sq: Int },
}

/// Honest three-valued answer for predicates that are only partially
/// decidable numerically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThreeValued {
    Yes,
    No,
    Unknown(String),
}

impl ThreeValued {
    pub fn is_yes(&self) -> bool {
        matches!(self, ThreeValued::Yes)
    }

    pub fn is_no(&self) -> bool {
        matches!(self, ThreeValued::No)
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, ThreeValued::Unknown(_))
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ThreeValued::Yes => "yes",
            ThreeValued::No => "no",
            ThreeValued::Unknown(_) => "unknown",
        }
    }
}

/// Outcome of the effectivity decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EffectivityVerdict {
    /// Effective, with a decomposition into classes of square >= -2 and
    /// positive reference degree summing to the input (empty for 0).
    Effective { witness: Vec<DivisorClass> },
    NotEffective,
}

impl EffectivityVerdict {
    pub fn is_effective(&self) -> bool {
        matches!(self, EffectivityVerdict::Effective { .. })
    }
}

/// Verdict of a cone-position test, with the obstructing class when negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeVerdict {
    pub verdict: ThreeValued,
    pub obstruction: Option<DivisorClass>,
}

/// Verdict of the 1-connectedness test, with a violating decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectednessVerdict {
    pub verdict: ThreeValued,
    pub witness: Option<(DivisorClass, DivisorClass)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum H1Rule {
    RigidNegTwoCurve,
    IsotropicMultiple,
    BasePointFreeBigSquare,
    OneConnected,
    BaseDivisorReduction,
}

impl H1Rule {
    pub fn as_str(&self) -> &'static str {
        match self {
            H1Rule::RigidNegTwoCurve => "rigid_neg2_curve",
            H1Rule::IsotropicMultiple => "isotropic_multiple",
            H1Rule::BasePointFreeBigSquare => "base_point_free_big_square",
            H1Rule::OneConnected => "one_connected",
            H1Rule::BaseDivisorReduction => "base_divisor_reduction",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum H1Value {
    Zero,
    Exactly(Int),
    Unknown,
}

/// Result of the partial h^1 oracle: the value (when a rule fires) and the
/// rule that fired.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H1Status {
    pub value: H1Value,
    pub rule: Option<H1Rule>,
}

/// Clause of the ample degree lower bound diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeBoundClause {
    /// Ample polarization of square 2: the class is the polarization itself
    /// or has degree at least 3.
    SquareTwoPolarization,
    /// Very ample polarization: degree at least 3.
    VeryAmple,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeBoundReport {
    pub clause: DegreeBoundClause,
    pub satisfied: bool,
    pub degree: Int,
    /// True when satisfied through the "class equals the polarization" branch.
    pub by_identity: bool,
}

#[derive(Debug, Clone)]
struct MemoEntry {
    effective: bool,
    via: Option<DivisorClass>,
}

/// Irreducible-type summand candidates of one fixed reference degree:
/// the classes with square >= -2, sorted canonically, plus precomputed
/// pairing rows and (when coordinates are small) i128 mirrors.
struct PerDegree {
    classes: Vec<DivisorClass>,
    sq: Vec<Int>,
    grow: Vec<Vec<Int>>,
    fast: Option<FastCands>,
}

/// Flat i128 mirrors of a candidate set; stride = lattice rank.
struct FastCands {
    coords: Vec<i128>,
    grow: Vec<i128>,
    sq: Vec<i128>,
    n: usize,
}

// Fast-path admission bounds. With rank <= 24, |gram| <= 2^20, entry
// coordinates <= 2^26, candidate coordinates <= 2^26 and degree <= 2^11
// (hence recursion depth <= 2^11 and remainder coordinates <= 2^38), every
// intermediate product is below 2^105, far inside i128 range, so unchecked
// i128 arithmetic cannot overflow on admitted inputs.
const FAST_MAX_RANK: usize = 24;
const FAST_MAX_GRAM: i128 = 1 << 20;
const FAST_MAX_COORD: i128 = 1 << 26;
const FAST_MAX_DEGREE: i128 = 1 << 11;

fn int_to_i128_bounded(v: &Int, bound: i128) -> Option<i128> {
    let v = i128::try_from(v).ok()?;
    (v.abs() <= bound).then_some(v)
}

/// A lattice together with the caches behind the geometric decision
/// procedures. Cheap to share; all methods take `&self` and are safe for
/// concurrent use.
pub struct SurfaceGeometry {
    lat: LatticeSpec,
    /// i128 gram mirror when it passes the fast-path gate.
    fast_gram: Option<Vec<i128>>,
    eff_memo: DashMap<DivisorClass, MemoEntry>,
    candidates: DashMap<Int, Arc<PerDegree>>,
    /// Provable floor on the square of an effective class per degree.
    min_square: DashMap<Int, Option<Int>>,
    min_irr_degree: OnceLock<Int>,
    #[cfg(test)]
    pub(crate) force_big_path: std::sync::atomic::AtomicBool,
}

impl std::fmt::Debug for SurfaceGeometry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SurfaceGeometry").field("lattice", &self.lat.name()).finish()
    }
}

impl SurfaceGeometry {
    pub fn new(lat: LatticeSpec) -> Self {
        let rank = lat.rank();
        let fast_gram = (rank <= FAST_MAX_RANK)
            .then(|| {
                (0..rank)
                    .flat_map(|i| lat.gram().row(i).iter())
                    .map(|v| int_to_i128_bounded(v, FAST_MAX_GRAM))
                    .collect::<Option<Vec<i128>>>()
            })
            .flatten();
        SurfaceGeometry {
            lat,
            fast_gram,
            eff_memo: DashMap::new(),
            candidates: DashMap::new(),
            min_square: DashMap::new(),
            min_irr_degree: OnceLock::new(),
            #[cfg(test)]
            force_big_path: std::sync::atomic::AtomicBool::new(false),
        }
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lat
    }

    pub fn rank(&self) -> usize {
        self.lat.rank()
    }

    /// Euler characteristic `D^2/2 + 2` of a line bundle class.
    pub fn chi(&self, d: &DivisorClass) -> Result<Int, GeometryError> {
        let sq = self.lat.self_int(d)?;
        if sq.is_odd() {
            return Err(GeometryError::OddSquare { sq });
        }
        Ok(sq / 2 + 2)
    }

    /// Hodge index check: for `H^2 > 0` and `D^2 > 0`, `(H.D)^2 >= H^2 D^2`
    /// with equality only for proportional classes. Returns the truth of the
    /// assertion; it can only be false on invalid input data.
    pub fn hodge_index_check(
        &self,
        h: &DivisorClass,
        d: &DivisorClass,
    ) -> Result<bool, GeometryError> {
        let h_sq = self.lat.self_int(h)?;
        if !h_sq.is_positive() {
            return Err(GeometryError::NotPositiveSquare { sq: h_sq });
        }
        let d_sq = self.lat.self_int(d)?;
        if !d_sq.is_positive() {
            return Ok(true);
        }
        let hd = self.lat.pair(h, d)?;
        let lhs = &hd * &hd;
        let rhs = &h_sq * &d_sq;
        if lhs > rhs {
            return Ok(true);
        }
        if lhs < rhs {
            return Ok(false);
        }
        Ok(proportional(h, d))
    }

    fn min_irr_degree(&self) -> &Int {
        self.min_irr_degree.get_or_init(|| {
            let a_sq = self.lat.self_int(self.lat.ample_ref()).expect("validated");
            let mut b = Int::one();
            while b < a_sq {
                if !self.irreducible_candidates(&b).classes.is_empty() {
                    return b;
                }
                b += 1;
            }
            // The ample reference itself always qualifies at degree A^2.
            a_sq
        })
    }

    /// Provable lower bound (floored) on the square of any effective class of
    /// the given positive reference degree; `None` when no effective class of
    /// that degree can exist.
    fn min_effective_square(&self, m: &Int) -> Option<Int> {
        if let Some(hit) = self.min_square.get(m) {
            return hit.clone();
        }
        let d_min = self.min_irr_degree().clone();
        let value = if *m < d_min {
            None
        } else {
            let a_sq = Rat::from(self.lat.self_int(self.lat.ample_ref()).expect("validated"));
            let two = Rat::from(Int::from(2));
            let m_rat = Rat::from(m.clone());
            let d_min_rat = Rat::from(d_min.clone());
            // Any effective class of degree m is a sum of k irreducible-type
            // parts of degree >= d_min. Each part B satisfies
            // |B_perp|^2 <= 2 + deg(B)^2/A^2 in the definite complement of
            // the ample reference, so |W_perp| <= sum of square roots, which
            // is maximized at a partition with k-1 minimal parts. The square
            // of the class is then >= m^2/A^2 - (that maximum)^2.
            let parts_max = (m / &d_min).max(Int::one());
            let s0 = rat_sqrt_upper(&(&two + &d_min_rat * &d_min_rat / &a_sq));
            let mut best: Option<Rat> = None;
            let mut k = Int::one();
            while k <= parts_max {
                let rest = &m_rat - Rat::from(&k - Int::one()) * &d_min_rat;
                let tail = rat_sqrt_upper(&(&two + &rest * &rest / &a_sq));
                let total = Rat::from(&k - Int::one()) * &s0 + tail;
                if best.as_ref().is_none_or(|b| total > *b) {
                    best = Some(total);
                }
                k += 1;
            }
            let reach = best.expect("at least one partition");
            let bound = &m_rat * &m_rat / &a_sq - &reach * &reach;
            Some(bound.floor().to_integer())
        };
        self.min_square.insert(m.clone(), value.clone());
        value
    }

    /// Candidate summands of one reference degree: everything with square
    /// >= -2 (effective by Riemann-Roch when the degree is positive).
    fn irreducible_candidates(&self, degree: &Int) -> Arc<PerDegree> {
        if let Some(hit) = self.candidates.get(degree) {
            return hit.clone();
        }
        let mut rows: Vec<(Vec<Int>, Int)> = Vec::new();
        scan_slice(
            &self.lat,
            self.lat.ample_ref(),
            degree,
            &Int::from(-2),
            None,
            &mut |coords, sq| rows.push((coords.to_vec(), sq.clone())),
        )
        .expect("ample reference has positive square");
        rows.sort_unstable();
        let classes: Vec<DivisorClass> =
            rows.iter().map(|(c, _)| DivisorClass::new(c.clone())).collect();
        let sq: Vec<Int> = rows.iter().map(|(_, s)| s.clone()).collect();
        let grow: Vec<Vec<Int>> =
            classes.iter().map(|c| self.lat.gram_vec(c).expect("validated")).collect();
        let fast = self.fast_gram.as_ref().and_then(|_| {
            let rank = self.lat.rank();
            let n = classes.len();
            let mut coords = Vec::with_capacity(n * rank);
            let mut growf = Vec::with_capacity(n * rank);
            let mut sqf = Vec::with_capacity(n);
            for i in 0..n {
                for v in classes[i].coords() {
                    coords.push(int_to_i128_bounded(v, FAST_MAX_COORD)?);
                }
                for v in &grow[i] {
                    growf.push(int_to_i128_bounded(v, i128::MAX >> 1)?);
                }
                sqf.push(int_to_i128_bounded(&sq[i], i128::MAX >> 1)?);
            }
            Some(FastCands { coords, grow: growf, sq: sqf, n })
        });
        let entry = Arc::new(PerDegree { classes, sq, grow, fast });
        self.candidates.insert(degree.clone(), entry.clone());
        entry
    }

    fn fast_path_ok(&self, d: &DivisorClass, deg: &Int) -> Option<(Vec<i128>, i128)> {
        #[cfg(test)]
        if self.force_big_path.load(std::sync::atomic::Ordering::Relaxed) {
            return None;
        }
        self.fast_gram.as_ref()?;
        let deg = int_to_i128_bounded(deg, FAST_MAX_DEGREE)?;
        let coords = d
            .coords()
            .iter()
            .map(|v| int_to_i128_bounded(v, FAST_MAX_COORD))
            .collect::<Option<Vec<i128>>>()?;
        Some((coords, deg))
    }

    /// Effectivity decision. Zero is effective by convention; a class of
    /// square >= -2 with positive reference degree is effective by
    /// Riemann-Roch; everything else is decided by exhaustive search over
    /// decompositions into such classes.
    pub fn is_effective(&self, d: &DivisorClass) -> Result<EffectivityVerdict, GeometryError> {
        if self.effective_bool(d, true)? {
            Ok(EffectivityVerdict::Effective { witness: self.witness_of(d)? })
        } else {
            Ok(EffectivityVerdict::NotEffective)
        }
    }

    /// Bulk entry point: same decision, no witness, no top-level memo insert.
    pub(crate) fn effective_bool(&self, d: &DivisorClass, store: bool) -> Result<bool, GeometryError> {
        if d.is_zero() {
            return Ok(true);
        }
        let deg = self.lat.degree(d)?;
        if !deg.is_positive() {
            return Ok(false);
        }
        let sq = self.lat.self_int(d)?;
        if sq >= Int::from(-2) {
            return Ok(true);
        }
        if let Some(hit) = self.eff_memo.get(d) {
            return Ok(hit.effective);
        }
        let (found, via) = match self.fast_path_ok(d, &deg) {
            Some((coords, degf)) => {
                let sqf = int_to_i128_bounded(&sq, i128::MAX >> 2)
                    .expect("square of gate-checked coordinates fits");
                self.search_fast(&coords, sqf, degf)
            }
            None => self.search_big(d, &sq, &deg),
        };
        if store {
            self.eff_memo.insert(d.clone(), MemoEntry { effective: found, via });
        }
        Ok(found)
    }

    /// i128 search. Only reached through the admission gate; see the bound
    /// analysis at the FAST_* constants.
    fn search_fast(&self, coords: &[i128], sq: i128, deg: i128) -> (bool, Option<DivisorClass>) {
        let rank = self.lat.rank();
        let mut b = 1i128;
        while 2 * b <= deg {
            let b_int = Int::from(b);
            let per = self.irreducible_candidates(&b_int);
            let Some(fast) = per.fast.as_ref() else {
                // Mixed precision: redo this whole call in exact integers.
                let d = DivisorClass::new(coords.iter().map(|&v| Int::from(v)).collect());
                return self.search_big(&d, &Int::from(sq), &Int::from(deg));
            };
            let rem_deg = deg - b;
            let rem_floor = self
                .min_effective_square(&Int::from(rem_deg))
                .map(|v| int_to_i128_bounded(&v, i128::MAX >> 2).expect("small bound"));
            for idx in 0..fast.n {
                let grow = &fast.grow[idx * rank..(idx + 1) * rank];
                let pb: i128 = coords.iter().zip(grow).map(|(a, b)| a * b).sum();
                let rem_sq = sq - 2 * pb + fast.sq[idx];
                if rem_sq >= -2 {
                    return (true, Some(per.classes[idx].clone()));
                }
                let Some(rem_floor) = rem_floor else { continue };
                if rem_sq < rem_floor {
                    continue;
                }
                let cand = &fast.coords[idx * rank..(idx + 1) * rank];
                let rem: Vec<i128> = coords.iter().zip(cand).map(|(a, b)| a - b).collect();
                let rem_class = DivisorClass::new(rem.iter().map(|&v| Int::from(v)).collect());
                let sub = if let Some(hit) = self.eff_memo.get(&rem_class) {
                    hit.effective
                } else {
                    let (found, via) = self.search_fast(&rem, rem_sq, rem_deg);
                    self.eff_memo.insert(rem_class, MemoEntry { effective: found, via });
                    found
                };
                if sub {
                    return (true, Some(per.classes[idx].clone()));
                }
            }
            b += 1;
        }
        (false, None)
    }

    /// Arbitrary-precision twin of `search_fast`.
    fn search_big(&self, d: &DivisorClass, sq: &Int, deg: &Int) -> (bool, Option<DivisorClass>) {
        let mut b = Int::one();
        while &b + &b <= *deg {
            let per = self.irreducible_candidates(&b);
            let rem_deg = deg - &b;
            let rem_floor = self.min_effective_square(&rem_deg);
            for idx in 0..per.classes.len() {
                let pb: Int = d.coords().iter().zip(&per.grow[idx]).map(|(a, b)| a * b).sum();
                let rem_sq = sq - (&pb + &pb) + &per.sq[idx];
                if rem_sq >= Int::from(-2) {
                    return (true, Some(per.classes[idx].clone()));
                }
                let Some(rem_floor) = rem_floor.as_ref() else { continue };
                if rem_sq < *rem_floor {
                    continue;
                }
                let rem_class = d - &per.classes[idx];
                let sub = if let Some(hit) = self.eff_memo.get(&rem_class) {
                    hit.effective
                } else {
                    let (found, via) = self.search_big(&rem_class, &rem_sq, &rem_deg);
                    self.eff_memo.insert(rem_class, MemoEntry { effective: found, via });
                    found
                };
                if sub {
                    return (true, Some(per.classes[idx].clone()));
                }
            }
            b += 1;
        }
        (false, None)
    }

    /// Reconstruct an effectivity witness by following memoized summand links.
    fn witness_of(&self, d: &DivisorClass) -> Result<Vec<DivisorClass>, GeometryError> {
        let mut parts = Vec::new();
        let mut current = d.clone();
        loop {
            if current.is_zero() {
                return Ok(parts);
            }
            if self.lat.self_int(&current)? >= Int::from(-2) {
                parts.push(current);
                return Ok(parts);
            }
            let via = self
                .eff_memo
                .get(&current)
                .and_then(|e| e.via.clone())
                .expect("witness requested for a class proven effective");
            let rest = &current - &via;
            parts.push(via);
            current = rest;
        }
    }

    /// True for an indecomposable effective class of square -2: the adopted
    /// lattice-level proxy for a smooth rational curve.
    pub fn is_neg2_curve(&self, d: &DivisorClass) -> Result<bool, GeometryError> {
        if self.lat.self_int(d)? != Int::from(-2) {
            return Ok(false);
        }
        if !self.effective_bool(d, true)? {
            return Ok(false);
        }
        Ok(self.decomposition_part(d)?.is_none())
    }

    /// Some irreducible-type part B with D - B effective and nonzero, if one
    /// exists; None certifies indecomposability.
    fn decomposition_part(&self, d: &DivisorClass) -> Result<Option<DivisorClass>, GeometryError> {
        let deg = self.lat.degree(d)?;
        let sq = self.lat.self_int(d)?;
        let mut b = Int::one();
        while &b + &b <= deg {
            let per = self.irreducible_candidates(&b);
            for idx in 0..per.classes.len() {
                let cand = &per.classes[idx];
                let pb = self.lat.pair(d, cand)?;
                let rem_sq = &sq - (&pb + &pb) + &per.sq[idx];
                let rem = d - cand;
                debug_assert!(!rem.is_zero());
                let rem_eff = if rem_sq >= Int::from(-2) {
                    true
                } else {
                    self.effective_bool(&rem, true)?
                };
                if rem_eff {
                    return Ok(Some(cand.clone()));
                }
            }
            b += 1;
        }
        Ok(None)
    }

    /// Nef test over the trusted ample reference: a wall search for effective
    /// (-2)-classes pairing negatively with `h`, with the search bound derived
    /// from the indefinite plane spanned by the ample reference and `h`.
    pub fn is_nef(&self, h: &DivisorClass) -> Result<ConeVerdict, GeometryError> {
        self.nef_inner(h, None)
    }

    /// Same test with a caller-imposed cap on the wall search degree;
    /// Unknown when the cap is below the provable bound and nothing turned up.
    pub fn is_nef_capped(&self, h: &DivisorClass, cap: &Int) -> Result<ConeVerdict, GeometryError> {
        self.nef_inner(h, Some(cap))
    }

    fn nef_inner(&self, h: &DivisorClass, cap: Option<&Int>) -> Result<ConeVerdict, GeometryError> {
        let h_sq = self.lat.self_int(h)?;
        let a = self.lat.ample_ref();
        let ah = self.lat.pair(a, h)?;
        if !h_sq.is_positive() || !ah.is_positive() {
            return Ok(ConeVerdict { verdict: ThreeValued::No, obstruction: None });
        }
        if proportional(a, h) {
            return Ok(ConeVerdict { verdict: ThreeValued::Yes, obstruction: None });
        }
        let a_sq = self.lat.self_int(a)?;
        // Negative-definite complement of span(a, h): any (-2)-class with
        // reference degree alpha and h-degree beta projects into the plane
        // with square >= -2, forcing
        //   h_sq*alpha^2 - 2*ah*alpha*beta + a_sq*beta^2 <= 2*((ah)^2 - a_sq*h_sq).
        // For alpha > 0, beta < 0 every term on the left is positive, so
        // alpha <= sqrt(2*det_abs / h_sq).
        let det_abs = &ah * &ah - &a_sq * &h_sq;
        debug_assert!(det_abs.is_positive(), "non-proportional classes span an indefinite plane");
        let bound = rat_sqrt_floor(&Rat::new(Int::from(2) * det_abs, h_sq));
        let (search_max, capped) = match cap {
            Some(cap) if *cap < bound => (cap.clone(), true),
            _ => (bound.clone(), false),
        };
        let mut alpha = Int::one();
        while alpha <= search_max {
            let mut hit = None;
            scan_slice(&self.lat, a, &alpha, &Int::from(-2), Some(&Int::from(-2)), &mut |c, _| {
                if hit.is_some() {
                    return;
                }
                let gamma = DivisorClass::new(c.to_vec());
                let hg = self.lat.pair(h, &gamma).expect("validated");
                if hg.is_negative() {
                    hit = Some(gamma);
                }
            })?;
            if let Some(gamma) = hit {
                return Ok(ConeVerdict { verdict: ThreeValued::No, obstruction: Some(gamma) });
            }
            alpha += 1;
        }
        if capped {
            return Ok(ConeVerdict {
                verdict: ThreeValued::Unknown(format!(
                    "wall search capped at reference degree {search_max}; provable bound is {bound}"
                )),
                obstruction: None,
            });
        }
        Ok(ConeVerdict { verdict: ThreeValued::Yes, obstruction: None })
    }

    /// Ampleness test: nef test plus emptiness of the orthogonal (-2) slice.
    pub fn is_ample(&self, h: &DivisorClass) -> Result<ConeVerdict, GeometryError> {
        self.ample_inner(h, None)
    }

    pub fn is_ample_capped(&self, h: &DivisorClass, cap: &Int) -> Result<ConeVerdict, GeometryError> {
        self.ample_inner(h, Some(cap))
    }

    fn ample_inner(&self, h: &DivisorClass, cap: Option<&Int>) -> Result<ConeVerdict, GeometryError> {
        let h_sq = self.lat.self_int(h)?;
        let ah = self.lat.pair(self.lat.ample_ref(), h)?;
        if !h_sq.is_positive() || !ah.is_positive() {
            return Ok(ConeVerdict { verdict: ThreeValued::No, obstruction: None });
        }
        // A (-2)-class orthogonal to h: one of its signs is effective by
        // Riemann-Roch, and pairs zero with h, so h is not ample.
        let mut orth = None;
        scan_slice(&self.lat, h, &Int::zero(), &Int::from(-2), Some(&Int::from(-2)), &mut |c, _| {
            if orth.is_none() {
                orth = Some(DivisorClass::new(c.to_vec()));
            }
        })?;
        if let Some(gamma) = orth {
            return Ok(ConeVerdict { verdict: ThreeValued::No, obstruction: Some(gamma) });
        }
        match cap {
            Some(cap) => self.is_nef_capped(h, cap),
            None => self.is_nef(h),
        }
    }

    /// Numeric base-point-freeness for a nef effective class: empty iff no
    /// presentation `D = k F + Gamma` exists with F primitive isotropic
    /// effective, Gamma a (-2)-curve, F.Gamma = 1, k >= 2.
    pub fn is_base_point_free_numeric(
        &self,
        d: &DivisorClass,
    ) -> Result<ThreeValued, GeometryError> {
        if !self.effective_bool(d, true)? {
            return Err(GeometryError::NotEffective(d.clone()));
        }
        let nef = self.is_nef(d)?;
        match nef.verdict {
            ThreeValued::No => return Err(GeometryError::NotNef(d.clone())),
            ThreeValued::Unknown(reason) => return Ok(ThreeValued::Unknown(reason)),
            ThreeValued::Yes => {}
        }
        let deg = self.lat.degree(d)?;
        let two = Int::from(2);
        let mut f_deg = Int::one();
        while f_deg <= deg {
            let mut pencils: Vec<DivisorClass> = Vec::new();
            scan_slice(&self.lat, self.lat.ample_ref(), &f_deg, &Int::zero(), Some(&Int::zero()), &mut |c, _| {
                pencils.push(DivisorClass::new(c.to_vec()));
            })?;
            for f in pencils {
                if !f.is_primitive() {
                    continue;
                }
                // k F has reference degree k*f_deg; Gamma needs positive degree.
                let mut k = two.clone();
                loop {
                    let used = &k * &f_deg;
                    if used >= deg {
                        break;
                    }
                    let gamma = d - &f.scale(&k);
                    if self.lat.self_int(&gamma)? == Int::from(-2)
                        && self.lat.pair(&f, &gamma)? == Int::one()
                        && self.is_neg2_curve(&gamma)?
                    {
                        return Ok(ThreeValued::No);
                    }
                    k += 1;
                }
            }
            f_deg += 1;
        }
        Ok(ThreeValued::Yes)
    }

    /// Numeric very-ampleness for a nef class of square >= 4: the three
    /// exclusion searches (low-degree isotropic curves, a square-2 halving,
    /// orthogonal (-2)-classes) must all come up empty.
    pub fn is_very_ample_numeric(&self, lb: &DivisorClass) -> Result<ThreeValued, GeometryError> {
        let lb_sq = self.lat.self_int(lb)?;
        if lb_sq < Int::from(4) {
            return Err(GeometryError::SquareTooSmall { sq: lb_sq });
        }
        let nef = self.is_nef(lb)?;
        match nef.verdict {
            ThreeValued::No => return Ok(ThreeValued::No),
            ThreeValued::Unknown(reason) => return Ok(ThreeValued::Unknown(reason)),
            ThreeValued::Yes => {}
        }
        // (i) an effective isotropic class of lb-degree 1 or 2
        for deg in [Int::one(), Int::from(2)] {
            let mut found = false;
            scan_slice(&self.lat, lb, &deg, &Int::zero(), Some(&Int::zero()), &mut |c, _| {
                if found {
                    return;
                }
                let e = DivisorClass::new(c.to_vec());
                let a_deg = self.lat.degree(&e).expect("validated");
                if a_deg.is_positive() {
                    found = true;
                }
            })?;
            if found {
                return Ok(ThreeValued::No);
            }
        }
        // (ii) lb = 2E with E^2 = 2 and E effective
        if lb.coords().iter().all(Integer::is_even) {
            let half = DivisorClass::new(lb.coords().iter().map(|c| c / 2).collect());
            if self.lat.self_int(&half)? == Int::from(2) && self.lat.degree(&half)?.is_positive() {
                return Ok(ThreeValued::No);
            }
        }
        // (iii) a (-2)-class orthogonal to lb
        let mut orth = false;
        scan_slice(&self.lat, lb, &Int::zero(), &Int::from(-2), Some(&Int::from(-2)), &mut |_, _| {
            orth = true;
        })?;
        if orth {
            return Ok(ThreeValued::No);
        }
        Ok(ThreeValued::Yes)
    }

    /// Degree lower-bound diagnostics for a nonzero effective class of
    /// nonnegative square against an ample polarization.
    pub fn degree_bound_check(
        &self,
        lb: &DivisorClass,
        d: &DivisorClass,
    ) -> Result<DegreeBoundReport, GeometryError> {
        if d.is_zero() {
            return Err(GeometryError::ZeroClass);
        }
        let d_sq = self.lat.self_int(d)?;
        if d_sq.is_negative() {
            return Err(GeometryError::NegativeSquare { sq: d_sq });
        }
        if !self.effective_bool(d, true)? {
            return Err(GeometryError::NotEffective(d.clone()));
        }
        let degree = self.lat.pair(lb, d)?;
        let lb_sq = self.lat.self_int(lb)?;
        let three = Int::from(3);
        if lb_sq == Int::from(2) {
            let by_identity = d == lb;
            Ok(DegreeBoundReport {
                clause: DegreeBoundClause::SquareTwoPolarization,
                satisfied: by_identity || degree >= three,
                degree,
                by_identity,
            })
        } else {
            Ok(DegreeBoundReport {
                clause: DegreeBoundClause::VeryAmple,
                satisfied: degree >= three,
                degree,
                by_identity: false,
            })
        }
    }

    /// 1-connectedness: every decomposition into two nonzero effective classes
    /// pairs at least 1. Exhaustive over the smaller-degree side.
    pub fn is_one_connected(&self, d: &DivisorClass) -> Result<ConnectednessVerdict, GeometryError> {
        if d.is_zero() {
            return Err(GeometryError::ZeroClass);
        }
        if !self.effective_bool(d, true)? {
            return Err(GeometryError::NotEffective(d.clone()));
        }
        let deg = self.lat.degree(d)?;
        let mut b = Int::one();
        while &b + &b <= deg {
            if let Some(floor) = self.min_effective_square(&b) {
                let mut parts: Vec<DivisorClass> = Vec::new();
                scan_slice(&self.lat, self.lat.ample_ref(), &b, &floor, None, &mut |c, _| {
                    parts.push(DivisorClass::new(c.to_vec()));
                })?;
                parts.sort_unstable();
                for d1 in parts {
                    if !self.effective_bool(&d1, true)? {
                        continue;
                    }
                    let d2 = d - &d1;
                    if !self.effective_bool(&d2, true)? {
                        continue;
                    }
                    if self.lat.pair(&d1, &d2)? < Int::one() {
                        return Ok(ConnectednessVerdict {
                            verdict: ThreeValued::No,
                            witness: Some((d1, d2)),
                        });
                    }
                }
            }
            b += 1;
        }
        Ok(ConnectednessVerdict { verdict: ThreeValued::Yes, witness: None })
    }

    /// Partial h^1 oracle for an effective nonzero class.
    pub fn h1_status(&self, d: &DivisorClass) -> Result<H1Status, GeometryError> {
        self.h1_status_with_base(d, None)
    }

    /// Same oracle with a caller-supplied base divisor for the reduction rule:
    /// h^1(D) = 0 follows from h^1(D - base) = 0 and D^2 = (D - base)^2.
    pub fn h1_status_with_base(
        &self,
        d: &DivisorClass,
        base: Option<&DivisorClass>,
    ) -> Result<H1Status, GeometryError> {
        if d.is_zero() {
            return Err(GeometryError::ZeroClass);
        }
        if !self.effective_bool(d, true)? {
            return Err(GeometryError::NotEffective(d.clone()));
        }
        let sq = self.lat.self_int(d)?;
        if sq.is_negative() && self.is_neg2_curve(d)? {
            return Ok(H1Status { value: H1Value::Zero, rule: Some(H1Rule::RigidNegTwoCurve) });
        }
        if sq.is_zero() {
            let (_, k) = d.primitive_part().expect("nonzero");
            let value = if k.is_one() { H1Value::Zero } else { H1Value::Exactly(k - 1) };
            return Ok(H1Status { value, rule: Some(H1Rule::IsotropicMultiple) });
        }
        if sq.is_positive()
            && self.is_nef(d)?.verdict.is_yes()
            && self.is_base_point_free_numeric(d)?.is_yes()
        {
            return Ok(H1Status {
                value: H1Value::Zero,
                rule: Some(H1Rule::BasePointFreeBigSquare),
            });
        }
        if self.is_one_connected(d)?.verdict.is_yes() {
            return Ok(H1Status { value: H1Value::Zero, rule: Some(H1Rule::OneConnected) });
        }
        if let Some(delta) = base {
            let moving = d - delta;
            if !moving.is_zero()
                && self.effective_bool(&moving, true)?
                && self.lat.self_int(&moving)? == sq
                && self.h1_status(&moving)?.value == H1Value::Zero
            {
                return Ok(H1Status {
                    value: H1Value::Zero,
                    rule: Some(H1Rule::BaseDivisorReduction),
                });
            }
        }
        Ok(H1Status { value: H1Value::Unknown, rule: None })
    }

    /// Three-valued "h^1 of this class is zero", defined for arbitrary
    /// classes: Serre duality reduces to the effective side, and when neither
    /// sign is effective, h^1 = -chi exactly.
    pub fn h1_zero(&self, c: &DivisorClass) -> Result<ThreeValued, GeometryError> {
        if c.is_zero() {
            return Ok(ThreeValued::Yes);
        }
        if self.effective_bool(c, true)? {
            return Ok(match self.h1_status(c)?.value {
                H1Value::Zero => ThreeValued::Yes,
                H1Value::Exactly(k) => {
                    if k.is_zero() {
                        ThreeValued::Yes
                    } else {
                        ThreeValued::No
                    }
                }
                H1Value::Unknown => {
                    ThreeValued::Unknown(format!("h1 oracle has no rule for {c}"))
                }
            });
        }
        let neg = -c;
        if self.effective_bool(&neg, true)? {
            return self.h1_zero(&neg);
        }
        // Both h^0 terms vanish, so h^1 = -chi.
        let chi = self.chi(c)?;
        if chi.is_zero() {
            Ok(ThreeValued::Yes)
        } else if chi.is_negative() {
            Ok(ThreeValued::No)
        } else {
            // chi <= h^0 + h^2 = 0 on consistent data.
            Ok(ThreeValued::Unknown(format!(
                "class {c} has chi = {chi} > 0 but neither sign is effective; inconsistent ample reference"
            )))
        }
    }
}

/// True when u and v are nonzero rational multiples of each other with the
/// same orientation.
fn proportional(u: &DivisorClass, v: &DivisorClass) -> bool {
    let (uc, vc) = (u.coords(), v.coords());
    if uc.len() != vc.len() || u.is_zero() || v.is_zero() {
        return false;
    }
    for i in 0..uc.len() {
        for j in (i + 1)..uc.len() {
            if &uc[i] * &vc[j] != &uc[j] * &vc[i] {
                return false;
            }
        }
    }
    // Same direction: some coordinate pair has matching sign.
    uc.iter().zip(vc).all(|(a, b)| (a.sign() == b.sign()) || a.is_zero() == b.is_zero())
        && uc.iter().zip(vc).any(|(a, b)| a.sign() == b.sign() && !a.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeSpec;
    use crate::matrix::IntMatrix;

    pub(crate) fn dp9_geometry() -> SurfaceGeometry {
        let mut rows = vec![vec![0i64; 9]; 9];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = if i == 0 { 2 } else { -2 };
        }
        let lat = LatticeSpec::new(
            "dp9",
            ["b", "e1", "e2", "e3", "e4", "e5", "e6", "e7", "e8"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            IntMatrix::from_i64_rows(&rows).unwrap(),
            DivisorClass::from_i64(&[3, -1, -1, -1, -1, -1, -1, -1, -1]),
            true,
        )
        .unwrap();
        SurfaceGeometry::new(lat)
    }

    fn cls(v: &[i64]) -> DivisorClass {
        DivisorClass::from_i64(v)
    }

    fn xtheta() -> DivisorClass {
        cls(&[3, -1, -1, -1, -1, -1, -1, -1, -1])
    }

    /// Pencil lattice [[0,1],[1,-2]]: f is an elliptic pencil class, g a
    /// (-2)-class with f.g = 1; ample reference (3,1).
    fn pencil_geometry() -> SurfaceGeometry {
        let lat = LatticeSpec::new(
            "pencil",
            vec!["f".into(), "g".into()],
            IntMatrix::from_i64_rows(&[vec![0, 1], vec![1, -2]]).unwrap(),
            DivisorClass::from_i64(&[3, 1]),
            true,
        )
        .unwrap();
        SurfaceGeometry::new(lat)
    }

    #[test]
    fn chi_examples() {
        let geom = dp9_geometry();
        assert_eq!(geom.chi(&cls(&[0, 1, 1, -1, -1, 0, 0, 0, 0])).unwrap(), Int::from(-2));
        assert_eq!(geom.chi(&DivisorClass::zero(9)).unwrap(), Int::from(2));
        assert_eq!(geom.chi(&xtheta()).unwrap(), Int::from(3));
    }

    #[test]
    fn effectivity_examples() {
        let geom = dp9_geometry();
        let minus_e1 = cls(&[0, -1, 0, 0, 0, 0, 0, 0, 0]);
        assert!(!geom.is_effective(&minus_e1).unwrap().is_effective());
        let d1 = cls(&[1, -1, -1, 0, 0, 0, 0, 0, 0]);
        assert!(geom.is_effective(&d1).unwrap().is_effective());
        let e1_minus_e2 = cls(&[0, 1, -1, 0, 0, 0, 0, 0, 0]);
        assert!(!geom.is_effective(&e1_minus_e2).unwrap().is_effective());
        assert!(geom.is_effective(&DivisorClass::zero(9)).unwrap().is_effective());
    }

    #[test]
    fn effectivity_witness_is_a_valid_decomposition() {
        let geom = dp9_geometry();
        // 2E1 + E2 has square -10 < -2 and degree 6: decided by search.
        let d = cls(&[0, 2, 1, 0, 0, 0, 0, 0, 0]);
        let EffectivityVerdict::Effective { witness } = geom.is_effective(&d).unwrap() else {
            panic!("2E1 + E2 is effective");
        };
        assert!(!witness.is_empty());
        let mut total = DivisorClass::zero(9);
        for part in &witness {
            assert!(geom.lattice().self_int(part).unwrap() >= Int::from(-2));
            assert!(geom.lattice().degree(part).unwrap().is_positive());
            total = &total + part;
        }
        assert_eq!(total, d);
    }

    #[test]
    fn effectivity_fast_and_big_paths_agree() {
        let fast = dp9_geometry();
        let big = dp9_geometry();
        big.force_big_path.store(true, std::sync::atomic::Ordering::Relaxed);
        let samples = [
            vec![0i64, 2, 1, 0, 0, 0, 0, 0, 0],
            vec![2, -2, -1, -1, 0, 0, 0, 0, 0],
            vec![1, 1, 0, 0, 0, 0, 0, 0, 0],
            vec![4, -2, -2, -2, -1, -1, 0, 0, 0],
            vec![0, 1, 1, 1, 0, 0, 0, 0, 0],
            vec![3, -3, -1, -1, -1, 0, 0, 0, 0],
            vec![-1, 0, 0, 0, 0, 0, 0, 0, 0],
        ];
        for s in &samples {
            let d = cls(s);
            assert_eq!(
                fast.is_effective(&d).unwrap().is_effective(),
                big.is_effective(&d).unwrap().is_effective(),
                "paths disagree on {d}"
            );
        }
    }

    #[test]
    fn neg2_curve_examples() {
        let geom = dp9_geometry();
        assert!(geom.is_neg2_curve(&cls(&[0, 1, 0, 0, 0, 0, 0, 0, 0])).unwrap());
        assert!(geom.is_neg2_curve(&cls(&[1, -1, -1, 0, 0, 0, 0, 0, 0])).unwrap());
        // E1 + E2 has square -4.
        assert!(!geom.is_neg2_curve(&cls(&[0, 1, 1, 0, 0, 0, 0, 0, 0])).unwrap());
        // Square -2 but not effective.
        assert!(!geom.is_neg2_curve(&cls(&[0, -1, 0, 0, 0, 0, 0, 0, 0])).unwrap());
    }

    #[test]
    fn nef_and_ample_examples() {
        let geom = dp9_geometry();
        let x = xtheta();
        assert!(geom.is_nef(&x).unwrap().verdict.is_yes());
        assert!(geom.is_ample(&x).unwrap().verdict.is_yes());
        let h = x.scale(&Int::from(3));
        assert!(geom.is_ample(&h).unwrap().verdict.is_yes());
        let e1 = cls(&[0, 1, 0, 0, 0, 0, 0, 0, 0]);
        assert!(geom.is_ample(&e1).unwrap().verdict.is_no());
        assert!(geom.is_nef(&e1).unwrap().verdict.is_no());
        // B pairs zero with the (-2)-classes E_i: nef but not ample.
        let b = cls(&[1, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert!(geom.is_nef(&b).unwrap().verdict.is_yes());
        let amp = geom.is_ample(&b).unwrap();
        assert!(amp.verdict.is_no());
        let gamma = amp.obstruction.unwrap();
        assert_eq!(geom.lattice().self_int(&gamma).unwrap(), Int::from(-2));
        assert!(geom.lattice().pair(&b, &gamma).unwrap().is_zero());
    }

    #[test]
    fn nef_wall_search_finds_negative_walls() {
        let geom = dp9_geometry();
        // X + 2E1 has square 2 and reference degree 6 but pairs -2 with the
        // effective (-2)-class E1.
        let h = cls(&[3, 1, -1, -1, -1, -1, -1, -1, -1]);
        assert_eq!(geom.lattice().self_int(&h).unwrap(), Int::from(2));
        assert!(geom.lattice().degree(&h).unwrap().is_positive());
        let nef = geom.is_nef(&h).unwrap();
        assert!(nef.verdict.is_no());
        let gamma = nef.obstruction.unwrap();
        assert!(geom.lattice().pair(&h, &gamma).unwrap().is_negative());
        // A tight cap returns Unknown instead of guessing.
        let capped = geom.is_nef_capped(&h, &Int::zero());
        assert!(capped.unwrap().verdict.is_unknown());
    }

    #[test]
    fn base_point_free_examples() {
        let geom = dp9_geometry();
        assert!(geom.is_base_point_free_numeric(&xtheta()).unwrap().is_yes());
        assert!(geom
            .is_base_point_free_numeric(&xtheta().scale(&Int::from(3)))
            .unwrap()
            .is_yes());
        // The pencil lattice realizes the excluded shape exactly: 2f + g.
        let pencil = pencil_geometry();
        let d = cls(&[2, 1]);
        assert!(pencil.is_base_point_free_numeric(&d).unwrap().is_no());
        // And the test demands nef input.
        let err = pencil.is_base_point_free_numeric(&cls(&[0, 1])).unwrap_err();
        assert!(matches!(err, GeometryError::NotNef(_)));
    }

    #[test]
    fn very_ample_examples() {
        let geom = dp9_geometry();
        let h = xtheta().scale(&Int::from(3));
        assert!(geom.is_very_ample_numeric(&h).unwrap().is_yes());
        let err = geom.is_very_ample_numeric(&xtheta()).unwrap_err();
        assert!(matches!(err, GeometryError::SquareTooSmall { .. }));
        // A lattice with a (-2)-class orthogonal to the polarization: clause
        // (iii) rejects it.
        let lat = LatticeSpec::new(
            "quartic-demo",
            vec!["h".into(), "c".into()],
            IntMatrix::from_i64_rows(&[vec![4, 0], vec![0, -2]]).unwrap(),
            DivisorClass::from_i64(&[2, 1]),
            true,
        )
        .unwrap();
        let geom = SurfaceGeometry::new(lat);
        let h = cls(&[1, 0]);
        assert!(geom.is_very_ample_numeric(&h).unwrap().is_no());
    }

    #[test]
    fn degree_bound_examples() {
        let geom = dp9_geometry();
        let h = xtheta().scale(&Int::from(3));
        let d = cls(&[1, -1, 0, 0, 0, 0, 0, 0, 0]); // square 0, degree 12 against 3X
        let report = geom.degree_bound_check(&h, &d).unwrap();
        assert_eq!(report.clause, DegreeBoundClause::VeryAmple);
        assert!(report.satisfied);
        assert_eq!(report.degree, Int::from(12));
        // Square-2 polarization: X itself satisfies through the identity branch.
        let x = xtheta();
        let report = geom.degree_bound_check(&x, &x).unwrap();
        assert_eq!(report.clause, DegreeBoundClause::SquareTwoPolarization);
        assert!(report.satisfied && report.by_identity);
        // Degree 2 against a square-2 polarization, class not the polarization:
        // flagged violation.
        let e1 = cls(&[0, 1, 0, 0, 0, 0, 0, 0, 0]);
        // e1 has square -2; use an isotropic class of degree 2... none exist in
        // dp9, so exercise the clause on the pencil lattice instead.
        let pencil = pencil_geometry();
        // Reference (3,1) has square 2·3·1·1 + ... = 2(3·1) - 2 = 4; build a
        // custom square-2 polarization: (1,0)+(0,1)? (f+g)^2 = 2·1 - 2 = 0. Use
        // (2,1): square 2·2 - 2 = 2. Degree of f against (2,1): f.(2f+g)...
        let lb = cls(&[2, 1]);
        assert_eq!(pencil.lattice().self_int(&lb).unwrap(), Int::from(2));
        let f = cls(&[1, 0]);
        let report = pencil.degree_bound_check(&lb, &f).unwrap();
        assert_eq!(report.clause, DegreeBoundClause::SquareTwoPolarization);
        assert_eq!(report.degree, Int::from(1));
        assert!(!report.satisfied && !report.by_identity);
        let _ = (geom, e1);
    }

    #[test]
    fn one_connected_examples() {
        let geom = dp9_geometry();
        let x = xtheta();
        assert!(geom.is_one_connected(&x).unwrap().verdict.is_yes());
        let e1_plus_e2 = cls(&[0, 1, 1, 0, 0, 0, 0, 0, 0]);
        let got = geom.is_one_connected(&e1_plus_e2).unwrap();
        assert!(got.verdict.is_no());
        let (d1, d2) = got.witness.unwrap();
        assert!(geom.lattice().pair(&d1, &d2).unwrap() < Int::one());
        assert_eq!(&d1 + &d2, e1_plus_e2);
        // (B-E1-E2) + (B-E1-E3) pair to zero: not 1-connected.
        let d = cls(&[2, -2, -1, -1, 0, 0, 0, 0, 0]);
        let got = geom.is_one_connected(&d).unwrap();
        assert!(got.verdict.is_no());
        let (d1, d2) = got.witness.unwrap();
        assert!(geom.lattice().pair(&d1, &d2).unwrap() < Int::one());
    }

    #[test]
    fn h1_examples() {
        let geom = dp9_geometry();
        let got = geom.h1_status(&xtheta()).unwrap();
        assert_eq!(got.value, H1Value::Zero);
        assert_eq!(got.rule, Some(H1Rule::BasePointFreeBigSquare));
        let e1 = cls(&[0, 1, 0, 0, 0, 0, 0, 0, 0]);
        let got = geom.h1_status(&e1).unwrap();
        assert_eq!(got.value, H1Value::Zero);
        assert_eq!(got.rule, Some(H1Rule::RigidNegTwoCurve));
        // Triple elliptic pencil class: h^1 = 2.
        let pencil = pencil_geometry();
        let got = pencil.h1_status(&cls(&[3, 0])).unwrap();
        assert_eq!(got.value, H1Value::Exactly(Int::from(2)));
        assert_eq!(got.rule, Some(H1Rule::IsotropicMultiple));
        // Primitive isotropic: zero, same rule.
        let got = pencil.h1_status(&cls(&[1, 0])).unwrap();
        assert_eq!(got.value, H1Value::Zero);
        assert_eq!(got.rule, Some(H1Rule::IsotropicMultiple));
        // Errors on non-effective and zero classes.
        assert!(matches!(
            geom.h1_status(&cls(&[0, -1, 0, 0, 0, 0, 0, 0, 0])),
            Err(GeometryError::NotEffective(_))
        ));
        assert!(matches!(geom.h1_status(&DivisorClass::zero(9)), Err(GeometryError::ZeroClass)));
    }

    #[test]
    fn h1_zero_uses_serre_duality_and_chi() {
        let geom = dp9_geometry();
        // -2X: not effective, 2X effective with h^1 = 0.
        let minus_two_x = xtheta().scale(&Int::from(-2));
        assert!(geom.h1_zero(&minus_two_x).unwrap().is_yes());
        // E1 - E2: neither sign effective, chi = 0.
        assert!(geom.h1_zero(&cls(&[0, 1, -1, 0, 0, 0, 0, 0, 0])).unwrap().is_yes());
        // E1 + E2 - E3 - E4: neither sign effective, chi = -2, so h^1 = 2.
        assert!(geom.h1_zero(&cls(&[0, 1, 1, -1, -1, 0, 0, 0, 0])).unwrap().is_no());
        assert!(geom.h1_zero(&DivisorClass::zero(9)).unwrap().is_yes());
    }

    #[test]
    fn h1_base_divisor_reduction() {
        let pencil = pencil_geometry();
        // D = f + g (square 0 ... (f+g)^2 = 2 - 2 = 0; gcd 1 -> isotropic rule
        // fires first). Use 2f + g: square 4·0 + 4·1 - 2 = 2 > 0, not nef
        // (bpf test needs nef; is_nef: pairs g: (2f+g).g = 2 - 2 = 0 >= 0 ok;
        // walls: effective (-2) with negative pairing? g is the only shape...
        // (2f+g).g = 0, so nef holds; bpf says No (the excluded shape), the
        // 1-connected test: decompositions (f, f+g): f.(f+g) = 1 >= 1; (g, 2f):
        // g.2f = 2 >= 1; (f+g, f): same. So r4 fires: Zero.
        let d = cls(&[2, 1]);
        let got = pencil.h1_status(&d).unwrap();
        assert_eq!(got.value, H1Value::Zero);
        assert_eq!(got.rule, Some(H1Rule::OneConnected));
        // With a base divisor whose removal preserves the square, the
        // reduction rule can fire for classes the other rules miss; feed an
        // artificial call to exercise the code path.
        let with_base = pencil.h1_status_with_base(&d, Some(&cls(&[0, 0]))).unwrap();
        assert_eq!(with_base.value, H1Value::Zero);
    }

    #[test]
    fn h1_rules_are_deterministic() {
        // No class may satisfy two rules with conflicting values: sample the
        // small slices and cross-check every fired rule's value against an
        // independent recomputation.
        let geom = dp9_geometry();
        let lat = geom.lattice().clone();
        let mut classes = Vec::new();
        for d in [2i64, 4] {
            for s in [-2i64, 0, 2, 4, 8] {
                let q = crate::enumerate::SliceQuery::new(
                    lat.ample_ref().clone(),
                    Int::from(d),
                    crate::enumerate::SquareConstraint::Equal(Int::from(s)),
                );
                classes.extend(crate::enumerate::enumerate_slice(&lat, &q).unwrap());
            }
        }
        let mut checked = 0;
        for d in classes.iter().take(400) {
            if !geom.is_effective(d).unwrap().is_effective() {
                continue;
            }
            checked += 1;
            let status = geom.h1_status(d).unwrap();
            let sq = lat.self_int(d).unwrap();
            if sq.is_zero() {
                // The isotropic rule's value is gcd - 1; any competing rule
                // that fires (1-connectedness) forces gcd = 1.
                let (_, k) = d.primitive_part().unwrap();
                let want = if k == Int::one() { H1Value::Zero } else { H1Value::Exactly(&k - 1) };
                assert_eq!(status.value, want, "class {d}");
                if geom.is_one_connected(d).unwrap().verdict.is_yes() {
                    assert_eq!(status.value, H1Value::Zero, "1-connected {d}");
                }
            } else if status.value != H1Value::Unknown {
                assert_eq!(status.value, H1Value::Zero, "nonzero-square rules all give 0: {d}");
            }
        }
        assert!(checked > 100, "sample must hit effective classes, got {checked}");
    }

    #[test]
    fn hodge_index_examples() {
        let geom = dp9_geometry();
        let h = xtheta().scale(&Int::from(3));
        assert!(geom.hodge_index_check(&h, &xtheta()).unwrap());
        let d = &xtheta().scale(&Int::from(2)) - &cls(&[0, 1, 0, 0, 0, 0, 0, 0, 0]);
        assert!(geom.hodge_index_check(&h, &d).unwrap());
        let b = cls(&[1, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert!(geom.hodge_index_check(&h, &b).unwrap());
        assert!(matches!(
            geom.hodge_index_check(&cls(&[0, 1, 0, 0, 0, 0, 0, 0, 0]), &b),
            Err(GeometryError::NotPositiveSquare { .. })
        ));
    }

    #[test]
    fn effective_cone_is_closed_under_addition() {
        let geom = dp9_geometry();
        let d1 = cls(&[1, -1, -1, 0, 0, 0, 0, 0, 0]);
        let e1 = cls(&[0, 1, 0, 0, 0, 0, 0, 0, 0]);
        let two_e1 = cls(&[0, 2, 0, 0, 0, 0, 0, 0, 0]);
        for a in [&d1, &e1, &two_e1, &xtheta()] {
            for b in [&d1, &e1, &two_e1, &xtheta()] {
                let sum = a + b;
                assert!(
                    geom.is_effective(&sum).unwrap().is_effective(),
                    "sum {sum} of effective classes must be effective"
                );
            }
        }
    }

    #[test]
    fn exactly_one_sign_is_effective_for_riemann_roch_classes() {
        let geom = dp9_geometry();
        for v in [
            vec![0i64, 1, 0, 0, 0, 0, 0, 0, 0],
            vec![1, -1, -1, 0, 0, 0, 0, 0, 0],
            vec![1, -1, 0, 0, 0, 0, 0, 0, 0],
            vec![3, -1, -1, -1, -1, -1, -1, -1, -1],
        ] {
            let d = cls(&v);
            assert!(geom.lattice().self_int(&d).unwrap() >= Int::from(-2));
            let plus = geom.is_effective(&d).unwrap().is_effective();
            let minus = geom.is_effective(&-&d).unwrap().is_effective();
            assert!(plus ^ minus, "exactly one sign of {d} must be effective");
        }
    }
}
