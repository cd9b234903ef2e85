//! Exhaustive, deterministic enumeration of divisor classes in degree/square
//! slices of a hyperbolic lattice.
//!
//! The slice `{D : H.D = d}` with `H^2 > 0` is an affine translate of the
//! negative-definite orthogonal lattice of `H`, so `{D in slice : D^2 >= s}`
//! is finite. Splitting `D = x0 + K y` over a kernel basis `K` of the degree
//! functional turns the square condition into a bounded positive-definite
//! quadratic problem in `y`, enumerated Fincke-Pohst style with exact
//! rational bounds. No floating point is involved at any stage.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::lattice::{DivisorClass, LatticeError, LatticeSpec};
use crate::matrix::{inertia, smith_normal_form, Int, IntMatrix, Rat, RatMatrix};

#[derive(Debug, thiserror::Error)]
pub enum EnumerationError {
    #[error("degree class has square {sq}; a positive square is required for finiteness")]
    NonPositiveDegreeClass { sq: Int },
    #[error("query is unbounded: a square upper bound alone leaves an infinite slice")]
    UnboundedQuery,
    #[error("orthogonal slice is not definite; the ambient form is not hyperbolic")]
    SliceNotDefinite,
    #[error("degree class must be primitive (coordinate gcd 1)")]
    NotPrimitive,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Square constraint of a slice query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SquareConstraint {
    Equal(Int),
    AtLeast(Int),
    Between(Int, Int),
    /// Rejected at run time: an upper bound alone is an infinite query.
    AtMost(Int),
}

/// A degree/square slice of the lattice, with optional extra linear
/// constraints `pair(class, D) = value`.
#[derive(Debug, Clone)]
pub struct SliceQuery {
    pub degree_class: DivisorClass,
    pub degree: Int,
    pub square: SquareConstraint,
    pub extra: Vec<(DivisorClass, Int)>,
}

impl SliceQuery {
    pub fn new(degree_class: DivisorClass, degree: Int, square: SquareConstraint) -> Self {
        SliceQuery { degree_class, degree, square, extra: Vec::new() }
    }
}

/// Orthogonal complement data of a primitive positive class.
#[derive(Debug, Clone)]
pub struct OrthogonalSlice {
    /// Gram matrix of `H^perp` in the kernel basis (integral, definite).
    pub gram: IntMatrix,
    /// Kernel basis vectors in lattice coordinates.
    pub basis: Vec<DivisorClass>,
}

struct SliceGeometry {
    /// Particular solution with `pair(H, x0) = d`, if the slice is nonempty.
    x0: Vec<Int>,
    /// Kernel basis columns (lattice coordinates).
    kernel: Vec<Vec<Int>>,
    /// `-K^T G K`, positive definite.
    m: IntMatrix,
    /// `K^T G x0`.
    b: Vec<Int>,
    /// `x0^T G x0`.
    c0: Int,
}

/// Solve `pair(H, x) = d` over the integers: particular solution + kernel.
fn slice_geometry(
    lat: &LatticeSpec,
    h: &DivisorClass,
    d: &Int,
) -> Result<Option<SliceGeometry>, EnumerationError> {
    let h_sq = lat.self_int(h)?;
    if !h_sq.is_positive() {
        return Err(EnumerationError::NonPositiveDegreeClass { sq: h_sq });
    }
    let rank = lat.rank();
    let g_row = lat.gram_vec(h)?; // functional x -> pair(H, x)
    let row = IntMatrix::from_rows(vec![g_row.clone()]).expect("single row");
    let snf = smith_normal_form(&row);
    let gq: Vec<Int> = (0..rank)
        .map(|j| (0..rank).map(|i| &g_row[i] * &snf.q[(i, j)]).sum())
        .collect();
    debug_assert!(gq[1..].iter().all(Zero::is_zero));
    let e = gq[0].clone();
    debug_assert!(!e.is_zero(), "degree functional of a positive class is nonzero");
    if !(d % &e).is_zero() {
        return Ok(None);
    }
    let scale = d / &e;
    let x0: Vec<Int> = (0..rank).map(|i| &snf.q[(i, 0)] * &scale).collect();
    let kernel: Vec<Vec<Int>> =
        (1..rank).map(|j| (0..rank).map(|i| snf.q[(i, j)].clone()).collect()).collect();
    let m_dim = kernel.len();
    // m = -K^T G K and b = K^T G x0, both exact.
    let gk: Vec<Vec<Int>> = kernel.iter().map(|k| lat.gram().mul_vec(k)).collect();
    let mut m = IntMatrix::zero(m_dim, m_dim);
    for i in 0..m_dim {
        for j in 0..m_dim {
            let dot: Int = kernel[i].iter().zip(&gk[j]).map(|(a, b)| a * b).sum();
            m[(i, j)] = -dot;
        }
    }
    let b: Vec<Int> = (0..m_dim).map(|i| gk[i].iter().zip(&x0).map(|(a, b)| a * b).sum()).collect();
    let gx0 = lat.gram().mul_vec(&x0);
    let c0: Int = x0.iter().zip(&gx0).map(|(a, b)| a * b).sum();
    Ok(Some(SliceGeometry { x0, kernel, m, b, c0 }))
}

struct Ldl {
    diag: Vec<Rat>,
    mu: Vec<Vec<Rat>>, // mu[k][j] for j > k, stored from index k+1
}

fn ldl(m: &IntMatrix) -> Result<Ldl, EnumerationError> {
    let n = m.rows();
    let mut a = RatMatrix::from_int(m);
    let mut diag = Vec::with_capacity(n);
    let mut mu = vec![vec![Rat::zero(); n]; n];
    for k in 0..n {
        let d = a[(k, k)].clone();
        if !d.is_positive() {
            return Err(EnumerationError::SliceNotDefinite);
        }
        for j in (k + 1)..n {
            mu[k][j] = &a[(k, j)] / &d;
        }
        for i in (k + 1)..n {
            for j in i..n {
                let t = &mu[k][i] * &a[(k, j)];
                a[(i, j)] -= t;
                if i != j {
                    let v = a[(i, j)].clone();
                    a[(j, i)] = v;
                }
            }
        }
        diag.push(d);
    }
    Ok(Ldl { diag, mu })
}

/// Enumerate every `D` with `pair(H, D) = d` and `lo <= D^2 (<= hi)`,
/// invoking `visit(coords, square)` once per class. Deterministic order
/// internal to the walk; callers sort for canonical output.
pub(crate) fn scan_slice(
    lat: &LatticeSpec,
    h: &DivisorClass,
    d: &Int,
    lo: &Int,
    hi: Option<&Int>,
    visit: &mut dyn FnMut(&[Int], &Int),
) -> Result<(), EnumerationError> {
    let Some(geo) = slice_geometry(lat, h, d)? else {
        return Ok(());
    };
    let m_dim = geo.kernel.len();
    if m_dim == 0 {
        let sq = geo.c0;
        if sq >= *lo && hi.is_none_or(|hi| sq <= *hi) {
            visit(&geo.x0, &sq);
        }
        return Ok(());
    }
    let ldl = ldl(&geo.m)?;
    let m_inv = RatMatrix::from_int(&geo.m).inverse().ok_or(EnumerationError::SliceNotDefinite)?;
    let y_star: Vec<Rat> = (0..m_dim)
        .map(|i| (0..m_dim).map(|j| &m_inv[(i, j)] * Rat::from(geo.b[j].clone())).sum())
        .collect();
    let c_star: Rat = geo.b.iter().zip(&y_star).map(|(b, y)| Rat::from(b.clone()) * y).sum();
    let radius = Rat::from(geo.c0.clone() - lo) + &c_star;
    if radius.is_negative() {
        return Ok(());
    }

    // Integerize the walk: clear every denominator against one common scale.
    // With v_i = y_i - center_i the level contribution diag_i * v_i^2 carries
    // scale l * (l^2)^2 = l^5, the same fixed scale as the running radius, so
    // all node arithmetic below is plain integer multiply/add.
    let mut scale = radius.denom().clone();
    for (i, y) in y_star.iter().enumerate() {
        scale = scale.lcm(ldl.diag[i].denom());
        scale = scale.lcm(y.denom());
        for j in (i + 1)..m_dim {
            scale = scale.lcm(ldl.mu[i][j].denom());
        }
    }
    let to_scaled = |r: &Rat| -> Int {
        let s = r * Rat::from(scale.clone());
        debug_assert!(s.is_integer());
        s.to_integer()
    };
    let diag_s: Vec<Int> = ldl.diag.iter().map(&to_scaled).collect();
    let mu_s: Vec<Vec<Int>> =
        ldl.mu.iter().map(|row| row.iter().map(&to_scaled).collect()).collect();
    let y_star_s: Vec<Int> = y_star.iter().map(&to_scaled).collect();
    let scale2 = &scale * &scale;
    let scale5 = &scale2 * &scale2 * &scale;
    let t_top = {
        let t = &radius * Rat::from(scale5.clone());
        debug_assert!(t.is_integer());
        t.to_integer()
    };
    let hi_slack: Option<Int> = hi.map(|hi| (hi - lo) * &scale5);

    struct Walk<'a> {
        kernel: &'a [Vec<Int>],
        diag_s: &'a [Int],
        mu_s: &'a [Vec<Int>],
        y_star_s: &'a [Int],
        scale: &'a Int,
        scale2: &'a Int,
        scale5: &'a Int,
        lo: &'a Int,
        hi_slack: Option<Int>,
        /// z_j at scale l: l*y_j - y_star_s[j].
        z: Vec<Int>,
        coords: Vec<Int>,
        visit: &'a mut dyn FnMut(&[Int], &Int),
    }

    impl Walk<'_> {
        fn descend(&mut self, level: isize, t: Int) {
            if level < 0 {
                if let Some(hi_slack) = &self.hi_slack {
                    if t > *hi_slack {
                        return;
                    }
                }
                // D^2 = lo + t / l^5, exactly.
                let (q, r) = t.div_rem(self.scale5);
                debug_assert!(r.is_zero(), "leaf square defect must be integral");
                let sq = self.lo + q;
                (self.visit)(&self.coords, &sq);
                return;
            }
            let i = level as usize;
            let m_dim = self.z.len();
            // Center at scale l^2.
            let ss: Int = ((i + 1)..m_dim).map(|j| &self.mu_s[i][j] * &self.z[j]).sum();
            let cc = self.scale * &self.y_star_s[i] - ss;
            let dd = &self.diag_s[i];
            // |l^2 y - cc| <= floor(sqrt(t/dd)), an exact integer bound.
            let vv_max = (&t * dd).sqrt() / dd;
            let y_min = (&cc - &vv_max).div_ceil(self.scale2);
            let y_max = (&cc + &vv_max).div_floor(self.scale2);
            if y_min > y_max {
                return;
            }
            let k_col = &self.kernel[i];
            for (c, k) in self.coords.iter_mut().zip(k_col) {
                *c += k * &y_min;
            }
            let mut y = y_min.clone();
            loop {
                let vv = self.scale2 * &y - &cc;
                let used = dd * &vv * &vv;
                let t_next = &t - used;
                debug_assert!(!t_next.is_negative());
                self.z[i] = self.scale * &y - &self.y_star_s[i];
                self.descend(level - 1, t_next);
                if y == y_max {
                    break;
                }
                y += 1;
                for (c, k) in self.coords.iter_mut().zip(k_col) {
                    *c += k;
                }
            }
            for (c, k) in self.coords.iter_mut().zip(k_col) {
                *c -= k * &y_max;
            }
        }
    }

    let mut walk = Walk {
        kernel: &geo.kernel,
        diag_s: &diag_s,
        mu_s: &mu_s,
        y_star_s: &y_star_s,
        scale: &scale,
        scale2: &scale2,
        scale5: &scale5,
        lo,
        hi_slack,
        z: vec![Int::zero(); m_dim],
        coords: geo.x0.clone(),
        visit,
    };
    walk.descend(m_dim as isize - 1, t_top);
    Ok(())
}

fn resolve_square(sc: &SquareConstraint) -> Result<(Int, Option<Int>), EnumerationError> {
    match sc {
        SquareConstraint::Equal(s) => Ok((s.clone(), Some(s.clone()))),
        SquareConstraint::AtLeast(lo) => Ok((lo.clone(), None)),
        SquareConstraint::Between(lo, hi) => Ok((lo.clone(), Some(hi.clone()))),
        SquareConstraint::AtMost(_) => Err(EnumerationError::UnboundedQuery),
    }
}

/// The complete, duplicate-free, lexicographically sorted list of classes
/// matching the query. Every returned class is re-verified against the query
/// before being handed back.
pub fn enumerate_slice(
    lat: &LatticeSpec,
    q: &SliceQuery,
) -> Result<Vec<DivisorClass>, EnumerationError> {
    let (lo, hi) = resolve_square(&q.square)?;
    if let Some(hi) = &hi {
        if lo > *hi {
            return Ok(Vec::new());
        }
    }
    let mut out = Vec::new();
    scan_slice(lat, &q.degree_class, &q.degree, &lo, hi.as_ref(), &mut |coords, _sq| {
        out.push(DivisorClass::new(coords.to_vec()));
    })?;
    if !q.extra.is_empty() {
        let mut filtered = Vec::with_capacity(out.len());
        'classes: for d in out {
            for (cls, want) in &q.extra {
                if lat.pair(cls, &d)? != *want {
                    continue 'classes;
                }
            }
            filtered.push(d);
        }
        out = filtered;
    }
    out.sort_unstable();
    out.dedup();
    for d in &out {
        let deg = lat.pair(&q.degree_class, d)?;
        debug_assert_eq!(deg, q.degree);
        let sq = lat.self_int(d)?;
        let ok = match &q.square {
            SquareConstraint::Equal(s) => sq == *s,
            SquareConstraint::AtLeast(lo) => sq >= *lo,
            SquareConstraint::Between(lo, hi) => sq >= *lo && sq <= *hi,
            SquareConstraint::AtMost(_) => unreachable!("rejected above"),
        };
        assert!(ok && deg == q.degree, "enumerated class fails its own query");
    }
    Ok(out)
}

/// Union of `enumerate_slice` over degrees `1..=d_max`; sorted, deduplicated.
pub fn enumerate_up_to_degree(
    lat: &LatticeSpec,
    h: &DivisorClass,
    d_max: &Int,
    square: &SquareConstraint,
) -> Result<Vec<DivisorClass>, EnumerationError> {
    let mut out = Vec::new();
    let mut d = Int::from(1);
    while d <= *d_max {
        let q = SliceQuery::new(h.clone(), d.clone(), square.clone());
        out.extend(enumerate_slice(lat, &q)?);
        d += 1;
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Gram matrix and basis of the orthogonal complement `H^perp`, for a
/// primitive class of positive square. Definiteness is asserted.
pub fn orthogonal_slice_gram(
    lat: &LatticeSpec,
    h: &DivisorClass,
) -> Result<OrthogonalSlice, EnumerationError> {
    if !h.is_primitive() {
        return Err(EnumerationError::NotPrimitive);
    }
    let geo = slice_geometry(lat, h, &Int::zero())?.expect("zero degree is always solvable");
    let m_dim = geo.kernel.len();
    let mut gram = IntMatrix::zero(m_dim, m_dim);
    for i in 0..m_dim {
        for j in 0..m_dim {
            gram[(i, j)] = -geo.m[(i, j)].clone();
        }
    }
    if m_dim > 0 {
        let (plus, _minus, zero) = inertia(&gram);
        if plus != 0 || zero != 0 {
            return Err(EnumerationError::SliceNotDefinite);
        }
    }
    let basis = geo.kernel.into_iter().map(DivisorClass::new).collect();
    Ok(OrthogonalSlice { gram, basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeSpec;

    fn dp9() -> LatticeSpec {
        let mut rows = vec![vec![0i64; 9]; 9];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = if i == 0 { 2 } else { -2 };
        }
        LatticeSpec::new(
            "dp9",
            ["b", "e1", "e2", "e3", "e4", "e5", "e6", "e7", "e8"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            IntMatrix::from_i64_rows(&rows).unwrap(),
            DivisorClass::from_i64(&[3, -1, -1, -1, -1, -1, -1, -1, -1]),
            true,
        )
        .unwrap()
    }

    fn u_lattice() -> LatticeSpec {
        LatticeSpec::new(
            "u",
            vec!["f".into(), "g".into()],
            IntMatrix::from_i64_rows(&[vec![0, 1], vec![1, 0]]).unwrap(),
            DivisorClass::from_i64(&[1, 1]),
            true,
        )
        .unwrap()
    }

    fn slice(lat: &LatticeSpec, d: i64, s: i64) -> Vec<DivisorClass> {
        let q = SliceQuery::new(
            lat.ample_ref().clone(),
            Int::from(d),
            SquareConstraint::Equal(Int::from(s)),
        );
        enumerate_slice(lat, &q).unwrap()
    }

    #[test]
    fn root_slice_has_240_classes() {
        let lat = dp9();
        let roots = slice(&lat, 2, -2);
        assert_eq!(roots.len(), 240);
        // Spot checks: exceptional classes and conic classes are all present.
        assert!(roots.contains(&DivisorClass::from_i64(&[0, 1, 0, 0, 0, 0, 0, 0, 0])));
        assert!(roots.contains(&DivisorClass::from_i64(&[1, -1, -1, 0, 0, 0, 0, 0, 0])));
        // Sorted and duplicate free.
        let mut sorted = roots.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(roots, sorted);
    }

    #[test]
    fn orthogonal_root_slice_is_empty() {
        let lat = dp9();
        assert!(slice(&lat, 0, -2).is_empty());
    }

    #[test]
    fn degree_two_isotropic_slice_is_empty() {
        let lat = dp9();
        assert!(slice(&lat, 2, 0).is_empty());
    }

    #[test]
    fn odd_degree_slices_are_empty_by_evenness() {
        let lat = dp9();
        for s in [-4, -2, 0, 2] {
            assert!(slice(&lat, 1, s).is_empty());
            assert!(slice(&lat, 3, s).is_empty());
        }
    }

    #[test]
    fn symmetry_closure_under_exceptional_permutations() {
        let lat = dp9();
        let roots = slice(&lat, 2, -2);
        let permuted: Vec<DivisorClass> = roots
            .iter()
            .map(|d| {
                let c = d.coords();
                // swap e1 <-> e2, rotate e3 -> e4 -> e5 -> e3
                let perm =
                    [0usize, 2, 1, 4, 5, 3, 6, 7, 8].map(|i| c[i].clone());
                DivisorClass::new(perm.to_vec())
            })
            .collect();
        let mut permuted = permuted;
        permuted.sort_unstable();
        assert_eq!(roots, permuted);
    }

    #[test]
    fn up_to_degree_collects_isotropic_classes() {
        let lat = dp9();
        let isotropic = enumerate_up_to_degree(
            &lat,
            lat.ample_ref(),
            &Int::from(4),
            &SquareConstraint::Equal(Int::zero()),
        )
        .unwrap();
        // B - E1 has square 0 and degree 4.
        assert!(isotropic.contains(&DivisorClass::from_i64(&[1, -1, 0, 0, 0, 0, 0, 0, 0])));
        assert!(isotropic.iter().all(|d| lat.self_int(d).unwrap().is_zero()));
        assert!(!isotropic.is_empty());
        let zero_max = enumerate_up_to_degree(
            &lat,
            lat.ample_ref(),
            &Int::zero(),
            &SquareConstraint::Equal(Int::zero()),
        )
        .unwrap();
        assert!(zero_max.is_empty());
    }

    #[test]
    fn roots_at_degree_two_match_up_to_degree_two() {
        let lat = dp9();
        let a = slice(&lat, 2, -2);
        let b = enumerate_up_to_degree(
            &lat,
            lat.ample_ref(),
            &Int::from(2),
            &SquareConstraint::Equal(Int::from(-2)),
        )
        .unwrap();
        assert_eq!(a, b, "degree-1 slice is empty, so the union equals the degree-2 slice");
    }

    #[test]
    fn extra_constraints_filter() {
        let lat = dp9();
        let e1 = DivisorClass::from_i64(&[0, 1, 0, 0, 0, 0, 0, 0, 0]);
        let mut q = SliceQuery::new(
            lat.ample_ref().clone(),
            Int::from(2),
            SquareConstraint::Equal(Int::from(-2)),
        );
        q.extra.push((e1.clone(), Int::from(2)));
        let hits = enumerate_slice(&lat, &q).unwrap();
        assert!(!hits.is_empty());
        for d in &hits {
            assert_eq!(lat.pair(&e1, d).unwrap(), Int::from(2));
        }
        // The full slice contains classes violating the extra constraint.
        assert!(hits.len() < 240);
    }

    #[test]
    fn at_most_alone_is_rejected() {
        let lat = dp9();
        let q = SliceQuery::new(
            lat.ample_ref().clone(),
            Int::from(2),
            SquareConstraint::AtMost(Int::from(-2)),
        );
        assert!(matches!(enumerate_slice(&lat, &q), Err(EnumerationError::UnboundedQuery)));
    }

    #[test]
    fn non_positive_degree_class_is_rejected() {
        let lat = dp9();
        let e1 = DivisorClass::from_i64(&[0, 1, 0, 0, 0, 0, 0, 0, 0]);
        let q = SliceQuery::new(e1, Int::from(2), SquareConstraint::Equal(Int::from(-2)));
        assert!(matches!(
            enumerate_slice(&lat, &q),
            Err(EnumerationError::NonPositiveDegreeClass { .. })
        ));
    }

    #[test]
    fn orthogonal_gram_of_u_is_minus_two() {
        let lat = u_lattice();
        let got = orthogonal_slice_gram(&lat, &DivisorClass::from_i64(&[1, 1])).unwrap();
        assert_eq!(got.gram, IntMatrix::from_i64_rows(&[vec![-2]]).unwrap());
        assert_eq!(got.basis.len(), 1);
        assert!(lat.pair(&got.basis[0], &DivisorClass::from_i64(&[1, 1])).unwrap().is_zero());
    }

    #[test]
    fn orthogonal_gram_of_rank_one_is_empty() {
        let lat = LatticeSpec::new(
            "rank1",
            vec!["h".into()],
            IntMatrix::from_i64_rows(&[vec![2]]).unwrap(),
            DivisorClass::from_i64(&[1]),
            false,
        )
        .unwrap();
        let got = orthogonal_slice_gram(&lat, &DivisorClass::from_i64(&[1])).unwrap();
        assert_eq!(got.gram.rows(), 0);
        assert!(got.basis.is_empty());
    }

    #[test]
    fn orthogonal_gram_of_dp9_is_doubled_e8() {
        let lat = dp9();
        let got = orthogonal_slice_gram(&lat, lat.ample_ref()).unwrap();
        assert_eq!(got.gram.rows(), 8);
        assert_eq!(inertia(&got.gram), (0, 8, 0));
        // The halved form is unimodular and even: Smith invariants all 2.
        let inv = crate::matrix::smith_invariants(&got.gram);
        assert_eq!(inv, vec![Int::from(2); 8]);
        // Minimal square is -4: no vectors of square -2 in the complement,
        // and E1 - E2 realizes -4.
        assert!(slice(&lat, 0, -2).is_empty());
        let e1_minus_e2 = DivisorClass::from_i64(&[0, 1, -1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(lat.self_int(&e1_minus_e2).unwrap(), Int::from(-4));
        assert!(lat.pair(lat.ample_ref(), &e1_minus_e2).unwrap().is_zero());
    }

    #[test]
    fn non_primitive_degree_class_rejected_for_orthogonal_gram() {
        let lat = u_lattice();
        assert!(matches!(
            orthogonal_slice_gram(&lat, &DivisorClass::from_i64(&[2, 2])),
            Err(EnumerationError::NotPrimitive)
        ));
    }

    #[test]
    fn repeated_runs_are_identical() {
        let lat = dp9();
        let a = slice(&lat, 4, 0);
        let b = slice(&lat, 4, 0);
        assert_eq!(a, b);
        assert_eq!(a.len(), 2160);
    }

    #[test]
    fn between_and_at_least_agree_with_union_of_shells() {
        let lat = dp9();
        let q = SliceQuery::new(
            lat.ample_ref().clone(),
            Int::from(4),
            SquareConstraint::Between(Int::from(-8), Int::from(8)),
        );
        let ranged = enumerate_slice(&lat, &q).unwrap();
        let mut shells = Vec::new();
        for s in [-8i64, -6, -4, -2, 0, 2, 4, 6, 8] {
            shells.extend(slice(&lat, 4, s));
        }
        shells.sort_unstable();
        assert_eq!(ranged, shells);
        let q = SliceQuery::new(
            lat.ample_ref().clone(),
            Int::from(4),
            SquareConstraint::AtLeast(Int::from(-8)),
        );
        let open = enumerate_slice(&lat, &q).unwrap();
        assert_eq!(open, ranged, "degree-4 squares are capped at 8 by the Hodge bound");
    }
}
