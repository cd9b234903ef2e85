//! Integer lattices with a fixed labeled basis: the intersection pairing,
//! exact signature, Smith invariants, discriminant-group data and the
//! 2-elementary invariants (rho, a, delta).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::matrix::{inertia, smith_normal_form, IntMatrix, RatMatrix};

pub type Int = BigInt;
pub type Rat = BigRational;

#[derive(Debug, thiserror::Error)]
pub enum LatticeError {
    #[error("gram matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("gram matrix is not symmetric: gram[{i}][{j}] = {a} but gram[{j}][{i}] = {b}")]
    NotSymmetric { i: usize, j: usize, a: Int, b: Int },
    #[error("gram[{i}][{i}] = {v} is odd; an even lattice is required")]
    OddDiagonal { i: usize, v: Int },
    #[error("{labels} basis labels given for rank {rank}")]
    LabelCount { labels: usize, rank: usize },
    #[error("coordinate vector has length {len}, lattice rank is {rank}")]
    DimensionMismatch { len: usize, rank: usize },
    #[error("ample reference class has square {sq}; it must be positive")]
    AmpleRefNotPositive { sq: Int },
    #[error("k3 lattice must have signature (1, rank-1, 0); found ({plus}, {minus}, {zero})")]
    NotHyperbolic { plus: usize, minus: usize, zero: usize },
    #[error("lattice is degenerate")]
    Degenerate,
    #[error("discriminant group needs {a} generators; enumeration is capped at a <= 16")]
    DiscriminantTooLarge { a: usize },
    #[error("invalid lattice file: {0}")]
    Parse(String),
}

/// A divisor class: an integer coordinate vector in the lattice basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    coords: Vec<Int>,
}

impl DivisorClass {
    pub fn new(coords: Vec<Int>) -> Self {
        DivisorClass { coords }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        DivisorClass { coords: coords.iter().map(|&c| Int::from(c)).collect() }
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClass { coords: vec![Int::zero(); rank] }
    }

    pub fn coords(&self) -> &[Int] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// gcd of the coordinates; zero for the zero class.
    pub fn content(&self) -> Int {
        self.coords.iter().fold(Int::zero(), |g, c| g.gcd(c))
    }

    /// True when the coordinate gcd is 1.
    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn scale(&self, k: &Int) -> DivisorClass {
        DivisorClass { coords: self.coords.iter().map(|c| c * k).collect() }
    }

    /// The primitive class `self / content`, with the divisor returned too.
    pub fn primitive_part(&self) -> Option<(DivisorClass, Int)> {
        let g = self.content();
        if g.is_zero() {
            return None;
        }
        let prim = DivisorClass { coords: self.coords.iter().map(|c| c / &g).collect() };
        Some((prim, g))
    }
}

impl std::ops::Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.len(), rhs.len(), "class length mismatch");
        DivisorClass { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect() }
    }
}

impl std::ops::Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.len(), rhs.len(), "class length mismatch");
        DivisorClass { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect() }
    }
}

impl std::ops::Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass { coords: self.coords.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Invariants of a 2-elementary lattice: rank, generator count of the
/// discriminant group, and the integrality defect of discriminant squares.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoElementaryInvariants {
    pub rho: usize,
    pub a: usize,
    pub delta: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoElementaryOutcome {
    Invariants(TwoElementaryInvariants),
    /// Some invariant factor is outside {1, 2}.
    NotTwoElementary,
}

/// An even lattice with labeled basis, Gram matrix and a trusted ample
/// reference class. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSpec {
    name: String,
    basis: Vec<String>,
    gram: IntMatrix,
    ample_ref: DivisorClass,
    k3: bool,
}

impl LatticeSpec {
    pub fn new(
        name: impl Into<String>,
        basis: Vec<String>,
        gram: IntMatrix,
        ample_ref: DivisorClass,
        k3: bool,
    ) -> Result<Self, LatticeError> {
        if !gram.is_square() {
            return Err(LatticeError::NotSquare { row: 0, len: gram.cols(), expected: gram.rows() });
        }
        let rank = gram.rows();
        if let Some((i, j)) = gram.asymmetry() {
            return Err(LatticeError::NotSymmetric {
                i,
                j,
                a: gram[(i, j)].clone(),
                b: gram[(j, i)].clone(),
            });
        }
        for i in 0..rank {
            if gram[(i, i)].is_odd() {
                return Err(LatticeError::OddDiagonal { i, v: gram[(i, i)].clone() });
            }
        }
        if basis.len() != rank {
            return Err(LatticeError::LabelCount { labels: basis.len(), rank });
        }
        if ample_ref.len() != rank {
            return Err(LatticeError::DimensionMismatch { len: ample_ref.len(), rank });
        }
        let lat = LatticeSpec { name: name.into(), basis, gram, ample_ref, k3 };
        let sq = lat.self_int(lat.ample_ref()).expect("length checked");
        if !sq.is_positive() {
            return Err(LatticeError::AmpleRefNotPositive { sq });
        }
        if k3 {
            let (plus, minus, zero) = lat.signature();
            if plus != 1 || zero != 0 || minus + 1 != rank {
                return Err(LatticeError::NotHyperbolic { plus, minus, zero });
            }
        }
        Ok(lat)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn ample_ref(&self) -> &DivisorClass {
        &self.ample_ref
    }

    pub fn is_k3(&self) -> bool {
        self.k3
    }

    fn check_len(&self, v: &DivisorClass) -> Result<(), LatticeError> {
        if v.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch { len: v.len(), rank: self.rank() });
        }
        Ok(())
    }

    /// Intersection pairing `u^T * gram * v`.
    pub fn pair(&self, u: &DivisorClass, v: &DivisorClass) -> Result<Int, LatticeError> {
        self.check_len(u)?;
        self.check_len(v)?;
        let gv = self.gram.mul_vec(v.coords());
        Ok(u.coords().iter().zip(&gv).map(|(a, b)| a * b).sum())
    }

    pub fn self_int(&self, u: &DivisorClass) -> Result<Int, LatticeError> {
        self.pair(u, u)
    }

    /// Degree of a class against the ample reference.
    pub fn degree(&self, u: &DivisorClass) -> Result<Int, LatticeError> {
        self.pair(self.ample_ref(), u)
    }

    /// `gram * v`, the row of pairings of v against the basis.
    pub fn gram_vec(&self, v: &DivisorClass) -> Result<Vec<Int>, LatticeError> {
        self.check_len(v)?;
        Ok(self.gram.mul_vec(v.coords()))
    }

    /// Exact inertia of the intersection form.
    pub fn signature(&self) -> (usize, usize, usize) {
        inertia(&self.gram)
    }

    pub fn is_degenerate(&self) -> bool {
        self.signature().2 > 0
    }

    /// Even diagonal (the defining property of an even lattice).
    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[(i, i)].is_even())
    }

    /// Stronger property: every pairing of basis vectors is even.
    pub fn all_pairings_even(&self) -> bool {
        (0..self.rank()).all(|i| (0..self.rank()).all(|j| self.gram[(i, j)].is_even()))
    }

    /// Smith invariant factors of the Gram matrix.
    pub fn smith_invariants(&self) -> Vec<Int> {
        crate::matrix::smith_invariants(&self.gram)
    }

    /// 2-elementary invariants (rho, a, delta). The discriminant group is
    /// enumerated explicitly; lattices with a > 16 are rejected.
    pub fn two_elementary_invariants(&self) -> Result<TwoElementaryOutcome, LatticeError> {
        let snf = smith_normal_form(&self.gram);
        if snf.diag.iter().any(Zero::is_zero) {
            return Err(LatticeError::Degenerate);
        }
        let two = Int::from(2);
        let mut torsion_idx = Vec::new();
        for (i, d) in snf.diag.iter().enumerate() {
            if d.is_one() {
                continue;
            }
            if *d == two {
                torsion_idx.push(i);
            } else {
                return Ok(TwoElementaryOutcome::NotTwoElementary);
            }
        }
        let a = torsion_idx.len();
        if a > 16 {
            return Err(LatticeError::DiscriminantTooLarge { a });
        }
        // Lift class representatives through gram^{-1} * p_inv and test whether
        // every element of the discriminant group has integral square.
        let g_inv = RatMatrix::from_int(&self.gram)
            .inverse()
            .ok_or(LatticeError::Degenerate)?;
        let p_inv = RatMatrix::from_int(&snf.p_inv);
        let m = p_inv.transpose().mul(&g_inv).mul(&p_inv);
        let mut delta = 0u8;
        'outer: for mask in 1u32..(1u32 << a) {
            let mut sq = Rat::zero();
            for (bi, &i) in torsion_idx.iter().enumerate() {
                if mask & (1 << bi) == 0 {
                    continue;
                }
                for (bj, &j) in torsion_idx.iter().enumerate() {
                    if mask & (1 << bj) == 0 {
                        continue;
                    }
                    sq += &m[(i, j)];
                }
            }
            if !sq.is_integer() {
                delta = 1;
                break 'outer;
            }
        }
        Ok(TwoElementaryOutcome::Invariants(TwoElementaryInvariants { rho: self.rank(), a, delta }))
    }

    /// Serialize to the canonical lattice JSON object.
    pub fn to_json(&self) -> Value {
        let mut obj = serde_json::Map::new();
        obj.insert("name".into(), Value::String(self.name.clone()));
        obj.insert(
            "basis".into(),
            Value::Array(self.basis.iter().map(|s| Value::String(s.clone())).collect()),
        );
        obj.insert(
            "gram".into(),
            Value::Array(
                (0..self.rank())
                    .map(|i| Value::Array(self.gram.row(i).iter().map(int_to_json).collect()))
                    .collect(),
            ),
        );
        obj.insert(
            "ample_ref".into(),
            Value::Array(self.ample_ref.coords().iter().map(int_to_json).collect()),
        );
        obj.insert("k3".into(), Value::Bool(self.k3));
        Value::Object(obj)
    }

    /// Parse the lattice JSON format, then run full validation.
    pub fn from_json_str(text: &str) -> Result<Self, LatticeError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| LatticeError::Parse(e.to_string()))?;
        Self::from_json(&value)
    }

    pub fn from_json(value: &Value) -> Result<Self, LatticeError> {
        let obj = value
            .as_object()
            .ok_or_else(|| LatticeError::Parse("top level must be an object".into()))?;
        let name = obj
            .get("name")
            .and_then(Value::as_str)
            .ok_or_else(|| LatticeError::Parse("missing string field \"name\"".into()))?;
        let basis: Vec<String> = obj
            .get("basis")
            .and_then(Value::as_array)
            .ok_or_else(|| LatticeError::Parse("missing array field \"basis\"".into()))?
            .iter()
            .map(|v| {
                v.as_str()
                    .map(str::to_owned)
                    .ok_or_else(|| LatticeError::Parse("basis labels must be strings".into()))
            })
            .collect::<Result<_, _>>()?;
        let gram_rows = obj
            .get("gram")
            .and_then(Value::as_array)
            .ok_or_else(|| LatticeError::Parse("missing array field \"gram\"".into()))?;
        let expected = gram_rows.len();
        let mut rows = Vec::with_capacity(expected);
        for (i, row) in gram_rows.iter().enumerate() {
            let row = row
                .as_array()
                .ok_or_else(|| LatticeError::Parse(format!("gram row {i} is not an array")))?;
            if row.len() != expected {
                return Err(LatticeError::NotSquare { row: i, len: row.len(), expected });
            }
            let row = row
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    json_to_int(v)
                        .map_err(|e| LatticeError::Parse(format!("gram[{i}][{j}]: {e}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        let gram = IntMatrix::from_rows(rows).expect("row lengths checked");
        let ample: Vec<Int> = obj
            .get("ample_ref")
            .and_then(Value::as_array)
            .ok_or_else(|| LatticeError::Parse("missing array field \"ample_ref\"".into()))?
            .iter()
            .enumerate()
            .map(|(j, v)| {
                json_to_int(v).map_err(|e| LatticeError::Parse(format!("ample_ref[{j}]: {e}")))
            })
            .collect::<Result<_, _>>()?;
        let k3 = obj
            .get("k3")
            .and_then(Value::as_bool)
            .ok_or_else(|| LatticeError::Parse("missing boolean field \"k3\"".into()))?;
        LatticeSpec::new(name, basis, gram, DivisorClass::new(ample), k3)
    }
}

pub fn int_to_json(v: &Int) -> Value {
    let n = serde_json::Number::from_str(&v.to_string())
        .expect("integer literal is a valid JSON number");
    Value::Number(n)
}

pub fn json_to_int(v: &Value) -> Result<Int, String> {
    match v {
        Value::Number(n) => {
            let s = n.to_string();
            if s.contains(['.', 'e', 'E']) {
                return Err(format!("{s} is not an integer"));
            }
            Int::from_str(&s).map_err(|e| e.to_string())
        }
        _ => Err("expected an integer".into()),
    }
}

/// Smith invariant factors of an arbitrary square integer matrix.
pub fn smith_invariants_of(m: &IntMatrix) -> Vec<Int> {
    crate::matrix::smith_invariants(m)
}

/// Exact inertia of an arbitrary symmetric integer matrix.
pub fn signature_of(m: &IntMatrix) -> (usize, usize, usize) {
    inertia(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn dp9_spec() -> LatticeSpec {
        let rank = 9;
        let mut rows = vec![vec![0i64; rank]; rank];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = if i == 0 { 2 } else { -2 };
        }
        let gram = IntMatrix::from_i64_rows(&rows).unwrap();
        let basis = ["b", "e1", "e2", "e3", "e4", "e5", "e6", "e7", "e8"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let xtheta = DivisorClass::from_i64(&[3, -1, -1, -1, -1, -1, -1, -1, -1]);
        LatticeSpec::new("dp9", basis, gram, xtheta, true).unwrap()
    }

    fn u2_spec() -> LatticeSpec {
        LatticeSpec::new(
            "u2",
            vec!["f1".into(), "f2".into()],
            IntMatrix::from_i64_rows(&[vec![0, 2], vec![2, 0]]).unwrap(),
            DivisorClass::from_i64(&[1, 1]),
            true,
        )
        .unwrap()
    }

    #[test]
    fn pairing_examples() {
        let lat = dp9_spec();
        let b = DivisorClass::from_i64(&[1, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(lat.pair(&b, &b).unwrap(), Int::from(2));
        let xtheta = lat.ample_ref().clone();
        let d1 = DivisorClass::from_i64(&[1, -1, -1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(lat.pair(&xtheta, &d1).unwrap(), Int::from(2));
        let zero = DivisorClass::zero(9);
        assert_eq!(lat.pair(&d1, &zero).unwrap(), Int::zero());
    }

    #[test]
    fn self_intersection_examples() {
        let lat = dp9_spec();
        let xtheta = lat.ample_ref().clone();
        assert_eq!(lat.self_int(&xtheta).unwrap(), Int::from(2));
        let d1 = DivisorClass::from_i64(&[1, -1, -1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(lat.self_int(&d1).unwrap(), Int::from(-2));
        assert_eq!(lat.self_int(&DivisorClass::zero(9)).unwrap(), Int::zero());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let lat = dp9_spec();
        let short = DivisorClass::from_i64(&[1, 2]);
        assert!(matches!(
            lat.pair(&short, lat.ample_ref()),
            Err(LatticeError::DimensionMismatch { len: 2, rank: 9 })
        ));
    }

    #[test]
    fn signature_examples() {
        assert_eq!(dp9_spec().signature(), (1, 8, 0));
        assert_eq!(u2_spec().signature(), (1, 1, 0));
        let zero = IntMatrix::from_i64_rows(&[vec![0]]).unwrap();
        assert_eq!(signature_of(&zero), (0, 0, 1));
    }

    #[test]
    fn two_elementary_examples() {
        let got = dp9_spec().two_elementary_invariants().unwrap();
        assert_eq!(
            got,
            TwoElementaryOutcome::Invariants(TwoElementaryInvariants { rho: 9, a: 9, delta: 1 })
        );
        let got = u2_spec().two_elementary_invariants().unwrap();
        assert_eq!(
            got,
            TwoElementaryOutcome::Invariants(TwoElementaryInvariants { rho: 2, a: 2, delta: 0 })
        );
        // Unimodular U: trivial discriminant group. U has odd pairings but an
        // even diagonal, so it is still an even-diagonal lattice spec.
        let u = LatticeSpec::new(
            "u",
            vec!["f".into(), "g".into()],
            IntMatrix::from_i64_rows(&[vec![0, 1], vec![1, 0]]).unwrap(),
            DivisorClass::from_i64(&[1, 1]),
            true,
        )
        .unwrap();
        let got = u.two_elementary_invariants().unwrap();
        assert_eq!(
            got,
            TwoElementaryOutcome::Invariants(TwoElementaryInvariants { rho: 2, a: 0, delta: 0 })
        );
        assert!(u.is_even());
        assert!(!u.all_pairings_even());
        assert!(dp9_spec().all_pairings_even());
    }

    #[test]
    fn not_two_elementary_example() {
        let lat = LatticeSpec::new(
            "a2ish",
            vec!["x".into(), "y".into()],
            IntMatrix::from_i64_rows(&[vec![2, 1], vec![1, 2]]).unwrap(),
            DivisorClass::from_i64(&[1, 0]),
            false,
        )
        .unwrap();
        // discriminant group Z/3
        assert_eq!(
            lat.two_elementary_invariants().unwrap(),
            TwoElementaryOutcome::NotTwoElementary
        );
    }

    #[test]
    fn odd_diagonal_rejected() {
        let err = LatticeSpec::new(
            "bad",
            vec!["x".into()],
            IntMatrix::from_i64_rows(&[vec![1]]).unwrap(),
            DivisorClass::from_i64(&[1]),
            false,
        )
        .unwrap_err();
        assert!(matches!(err, LatticeError::OddDiagonal { i: 0, .. }));
    }

    #[test]
    fn asymmetric_gram_names_offending_entry() {
        let text = r#"{"name":"bad","basis":["x","y"],"gram":[[2,3],[2,2]],"ample_ref":[1,0],"k3":false}"#;
        let err = LatticeSpec::from_json_str(text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("gram[0][1]"), "diagnostic should name the entry: {msg}");
        assert!(msg.contains('3') && msg.contains('2'));
    }

    #[test]
    fn json_round_trip() {
        let lat = dp9_spec();
        let text = serde_json::to_string(&lat.to_json()).unwrap();
        let back = LatticeSpec::from_json_str(&text).unwrap();
        assert_eq!(lat, back);
    }

    #[test]
    fn json_rejects_non_integer_entries() {
        let text = r#"{"name":"bad","basis":["x"],"gram":[[2.5]],"ample_ref":[1],"k3":false}"#;
        let err = LatticeSpec::from_json_str(text).unwrap_err();
        assert!(err.to_string().contains("gram[0][0]"));
    }

    #[test]
    fn big_coordinates_survive_json() {
        let text = r#"{"name":"big","basis":["x"],"gram":[[2]],"ample_ref":[123456789012345678901234567890],"k3":false}"#;
        let lat = LatticeSpec::from_json_str(text).unwrap();
        assert_eq!(
            lat.ample_ref().coords()[0],
            Int::from_str("123456789012345678901234567890").unwrap()
        );
        let sq = lat.self_int(lat.ample_ref()).unwrap();
        assert_eq!(
            sq,
            Int::from_str("123456789012345678901234567890").unwrap().pow(2) * 2
        );
    }

    #[test]
    fn k3_flag_enforces_hyperbolic_signature() {
        // Negative definite rank-2: not hyperbolic.
        let err = LatticeSpec::new(
            "negdef",
            vec!["x".into(), "y".into()],
            IntMatrix::from_i64_rows(&[vec![-2, 0], vec![0, -2]]).unwrap(),
            DivisorClass::from_i64(&[1, 0]),
            true,
        )
        .unwrap_err();
        // ample_ref square is negative, reported before the signature check
        assert!(matches!(err, LatticeError::AmpleRefNotPositive { .. }));
        let err = LatticeSpec::new(
            "two_pos",
            vec!["x".into(), "y".into()],
            IntMatrix::from_i64_rows(&[vec![2, 0], vec![0, 2]]).unwrap(),
            DivisorClass::from_i64(&[1, 0]),
            true,
        )
        .unwrap_err();
        assert!(matches!(err, LatticeError::NotHyperbolic { plus: 2, minus: 0, zero: 0 }));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn coords9() -> impl Strategy<Value = Vec<i64>> {
            proptest::collection::vec(-1000i64..=1000, 9)
        }

        proptest! {
            #[test]
            fn pairing_is_symmetric_and_bilinear(u in coords9(), v in coords9(), w in coords9()) {
                let lat = dp9_spec();
                let (u, v, w) = (
                    DivisorClass::from_i64(&u),
                    DivisorClass::from_i64(&v),
                    DivisorClass::from_i64(&w),
                );
                let uv = lat.pair(&u, &v).unwrap();
                prop_assert_eq!(&uv, &lat.pair(&v, &u).unwrap());
                let lhs = lat.pair(&(&u + &w), &v).unwrap();
                prop_assert_eq!(lhs, &uv + lat.pair(&w, &v).unwrap());
            }

            #[test]
            fn self_intersections_are_even(u in coords9()) {
                let lat = dp9_spec();
                let sq = lat.self_int(&DivisorClass::from_i64(&u)).unwrap();
                prop_assert!(sq.is_even());
            }

            #[test]
            fn smith_invariants_survive_swaps_and_signs(
                perm in proptest::sample::subsequence(vec![0usize,1,2,3,4,5,6,7,8], 2),
                flip in 0usize..9,
            ) {
                // Row/column swaps and sign flips are unimodular.
                let lat = dp9_spec();
                let n = lat.rank();
                let mut m = lat.gram().clone();
                let (a, b) = (perm[0], perm[1]);
                for j in 0..n {
                    let (x, y) = (m[(a, j)].clone(), m[(b, j)].clone());
                    m[(a, j)] = y;
                    m[(b, j)] = x;
                }
                for i in 0..n {
                    let (x, y) = (m[(i, a)].clone(), m[(i, b)].clone());
                    m[(i, a)] = y;
                    m[(i, b)] = x;
                }
                for j in 0..n {
                    let v = -m[(flip, j)].clone();
                    m[(flip, j)] = v;
                }
                prop_assert_eq!(crate::matrix::smith_invariants(&m), lat.smith_invariants());
            }
        }
    }

    #[test]
    fn primitive_part() {
        let d = DivisorClass::from_i64(&[2, -4, 6]);
        let (p, g) = d.primitive_part().unwrap();
        assert_eq!(g, Int::from(2));
        assert_eq!(p, DivisorClass::from_i64(&[1, -2, 3]));
        assert!(DivisorClass::zero(3).primitive_part().is_none());
        assert!(DivisorClass::from_i64(&[1, -1, 0]).is_primitive());
    }
}
