//! Finite-dimensional two-subspace systems `(H; E1, E2)`.
//!
//! Subspaces are orthonormal frames. Intersections are detected by a
//! principal-angle threshold ([`DEFAULT_ANGLE_TOL`]) and every invariant in
//! this module derives from that single test, so dimension counts stay
//! mutually consistent.

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{self, LinalgError, Matrix};

/// Two directions count as shared when their principal angle is at most this.
pub const DEFAULT_ANGLE_TOL: f64 = 1e-8;
/// Angle multisets match when sorted entries differ by at most this.
pub const ANGLE_MATCH_TOL: f64 = 1e-8;
/// Relative residual allowed for `T' G1 - G2 T` and frame mapping errors.
pub const WITNESS_RESIDUAL_TOL: f64 = 1e-8;
/// Witnesses worse conditioned than this are rejected.
pub const WITNESS_COND_CAP: f64 = 1e8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FinsysError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("frame is not orthonormal (gram error {0:e})")]
    NotOrthonormal(f64),
    #[error("frame has {frame} rows but the ambient dimension is {ambient}")]
    Ambient { frame: usize, ambient: usize },
    #[error("operators have different shapes: {0:?} vs {1:?}")]
    ShapeMismatch((usize, usize), (usize, usize)),
}

pub type Result<T> = std::result::Result<T, FinsysError>;

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSystem {
    ambient_dim: usize,
    e1: Matrix,
    e2: Matrix,
}

impl FiniteSystem {
    /// Wraps two orthonormal frames. Frames are checked, not repaired.
    pub fn new(ambient_dim: usize, e1: Matrix, e2: Matrix) -> Result<Self> {
        for f in [&e1, &e2] {
            if f.rows() != ambient_dim {
                return Err(FinsysError::Ambient { frame: f.rows(), ambient: ambient_dim });
            }
            let err = linalg::orthonormality_error(f);
            if err > 1e-9 {
                return Err(FinsysError::NotOrthonormal(err));
            }
        }
        Ok(Self { ambient_dim, e1, e2 })
    }

    /// Orthonormalizes arbitrary spanning sets (columns) first.
    pub fn from_spanning(ambient_dim: usize, e1: &Matrix, e2: &Matrix) -> Result<Self> {
        Self::new(ambient_dim, linalg::orth_basis(e1)?, linalg::orth_basis(e2)?)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn e1(&self) -> &Matrix {
        &self.e1
    }

    pub fn e2(&self) -> &Matrix {
        &self.e2
    }

    /// The same system moved by an orthogonal (or any) map `q`, frames
    /// re-orthonormalized.
    pub fn transformed(&self, q: &Matrix) -> Result<Self> {
        Self::from_spanning(self.ambient_dim, &q.matmul(&self.e1)?, &q.matmul(&self.e2)?)
    }
}

/// `(dim E1∩E2, dim E1/(E1∩E2), dim E2/(E1∩E2), dim H/(E1+E2))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DimQuadruple {
    pub d_meet: usize,
    pub d1: usize,
    pub d2: usize,
    pub d_coker: usize,
}

/// Halmos five-part decomposition.
#[derive(Debug, Clone)]
pub struct HalmosParts {
    /// E1 ∩ E2
    pub mm: Matrix,
    /// E1 ∩ E2⊥
    pub mp: Matrix,
    /// E1⊥ ∩ E2
    pub pm: Matrix,
    /// E1⊥ ∩ E2⊥
    pub pp: Matrix,
    /// Angles of the part in generic position, ascending, all in (0, pi/2).
    pub generic_angles: Vec<f64>,
}

impl HalmosParts {
    /// `[mm, mp, pm, pp, #generic angles]`.
    pub fn dims(&self) -> [usize; 5] {
        [self.mm.cols(), self.mp.cols(), self.pm.cols(), self.pp.cols(), self.generic_angles.len()]
    }
}

/// Explicit invertible map carrying one system onto another.
#[derive(Debug, Clone)]
pub struct Witness {
    pub map: Matrix,
    /// Relative distance of `map(E1)` from `F1` and of `map(E2)` from `F2`.
    pub residuals: (f64, f64),
    pub condition_number: f64,
}

/// Graph system `(K1 ⊕ K2; K1 ⊕ 0, graph T)` of a `k2 x k1` matrix `T`.
pub fn graph_system(t: &Matrix) -> Result<FiniteSystem> {
    let (k2, k1) = t.shape();
    let n = k1 + k2;
    let mut e1 = Matrix::zeros(n, k1);
    let mut g = Matrix::zeros(n, k1);
    for j in 0..k1 {
        e1[(j, j)] = 1.0;
        g[(j, j)] = 1.0;
        for i in 0..k2 {
            g[(k1 + i, j)] = t[(i, j)];
        }
    }
    FiniteSystem::new(n, e1, linalg::orth_basis(&g)?)
}

/// Intersection frame under the shared angle threshold.
pub fn meet(a: &Matrix, b: &Matrix, angle_tol: f64) -> Result<Matrix> {
    Ok(linalg::intersection(a, b, angle_tol)?)
}

pub fn dim_quadruple(s: &FiniteSystem) -> Result<DimQuadruple> {
    dim_quadruple_tol(s, DEFAULT_ANGLE_TOL)
}

pub fn dim_quadruple_tol(s: &FiniteSystem, angle_tol: f64) -> Result<DimQuadruple> {
    let d_meet = meet(&s.e1, &s.e2, angle_tol)?.cols();
    let d1 = s.e1.cols() - d_meet;
    let d2 = s.e2.cols() - d_meet;
    // dim(E1 + E2) = dim E1 + dim E2 - dim(E1 ∩ E2)
    let sum = d_meet + d1 + d2;
    Ok(DimQuadruple { d_meet, d1, d2, d_coker: s.ambient_dim - sum.min(s.ambient_dim) })
}

pub fn halmos_decompose(s: &FiniteSystem) -> Result<HalmosParts> {
    halmos_decompose_tol(s, DEFAULT_ANGLE_TOL)
}

pub fn halmos_decompose_tol(s: &FiniteSystem, angle_tol: f64) -> Result<HalmosParts> {
    let e1c = linalg::orth_complement(&s.e1)?;
    let e2c = linalg::orth_complement(&s.e2)?;
    let mm = meet(&s.e1, &s.e2, angle_tol)?;
    let mp = meet(&s.e1, &e2c, angle_tol)?;
    let pm = meet(&e1c, &s.e2, angle_tol)?;
    let pp = meet(&e1c, &e2c, angle_tol)?;
    let g1 = linalg::complement_within(&s.e1, &mm.hstack(&mp)?)?;
    let g2 = linalg::complement_within(&s.e2, &mm.hstack(&pm)?)?;
    let generic_angles = linalg::principal_angles(&g1, &g2)?;
    Ok(HalmosParts { mm, mp, pm, pp, generic_angles })
}

/// Finite algebraic isomorphism: equal ambient dimension and equal
/// dimension quadruples.
pub fn classify_algebraic_fin(a: &FiniteSystem, b: &FiniteSystem) -> Result<bool> {
    Ok(a.ambient_dim == b.ambient_dim && dim_quadruple(a)? == dim_quadruple(b)?)
}

/// Finite bounded isomorphism. Every linear bijection of a finite-dimensional
/// space is bounded, so this coincides with [`classify_algebraic_fin`].
pub fn classify_bounded_fin(a: &FiniteSystem, b: &FiniteSystem) -> Result<bool> {
    classify_algebraic_fin(a, b)
}

/// Unitary isomorphism: the five Halmos dimensions agree and the generic
/// angle multisets agree within [`ANGLE_MATCH_TOL`].
pub fn classify_unitary_fin(a: &FiniteSystem, b: &FiniteSystem) -> Result<bool> {
    if a.ambient_dim != b.ambient_dim {
        return Ok(false);
    }
    let (ha, hb) = (halmos_decompose(a)?, halmos_decompose(b)?);
    Ok(ha.dims() == hb.dims() && angles_match(&ha.generic_angles, &hb.generic_angles))
}

/// Sorted pairwise comparison of two angle multisets.
pub fn angles_match(a: &[f64], b: &[f64]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= ANGLE_MATCH_TOL)
}

fn check_same_shape(t: &Matrix, t2: &Matrix) -> Result<()> {
    if t.shape() != t2.shape() {
        return Err(FinsysError::ShapeMismatch(t.shape(), t2.shape()));
    }
    Ok(())
}

/// Full singular frames of `t`: `(U (k2 x k2), sigma (rank), V (k1 x k1))`
/// where the first `rank` columns are the singular pairs and the rest span
/// the cokernel / kernel.
fn full_singular_frames(t: &Matrix) -> Result<(Matrix, Vec<f64>, Matrix)> {
    let (k2, k1) = t.shape();
    let r = linalg::rank(t, None)?;
    let s = linalg::svd(t)?;
    let idx: Vec<usize> = (0..r).collect();
    let ur = s.u.select_cols(&idx);
    let vr = s.v.select_cols(&idx);
    let u = ur.hstack(&linalg::orth_complement(&ur)?)?;
    let v = vr.hstack(&linalg::orth_complement(&vr)?)?;
    debug_assert_eq!(u.shape(), (k2, k2));
    debug_assert_eq!(v.shape(), (k1, k1));
    Ok((u, s.sigma[..r].to_vec(), v))
}

/// Block-diagonal witness `diag(G1, G2)` with `T' G1 = G2 T`, built from
/// both singular value decompositions. `None` when the ranks differ, or when
/// the construction is too ill-conditioned to trust.
pub fn witness_graph_bounded(t: &Matrix, t2: &Matrix) -> Result<Option<Witness>> {
    check_same_shape(t, t2)?;
    let (u, s, v) = full_singular_frames(t)?;
    let (u2, s2, v2) = full_singular_frames(t2)?;
    if s.len() != s2.len() {
        return Ok(None);
    }
    let (k2, k1) = t.shape();
    // G1 maps right singular frame of T onto that of T'.
    let g1 = v2.matmul(&v.transpose())?;
    // G2 maps left frames, rescaled so that sigma' * 1 = sigma * d.
    let mut d = vec![1.0; k2];
    for i in 0..s.len() {
        d[i] = s2[i] / s[i];
    }
    let g2 = u2.matmul(&Matrix::from_diag(&d))?.matmul(&u.transpose())?;
    debug_assert_eq!(g1.shape(), (k1, k1));

    let lhs = t2.matmul(&g1)?;
    let rhs = g2.matmul(t)?;
    let scale = 1.0 + t.norm2()? + t2.norm2()?;
    if lhs.sub(&rhs)?.max_abs() > WITNESS_RESIDUAL_TOL * scale {
        return Ok(None);
    }
    let map = g1.block_diag(&g2);
    let a = graph_system(t)?;
    let b = graph_system(t2)?;
    finish_witness(map, &a, &b)
}

fn finish_witness(map: Matrix, a: &FiniteSystem, b: &FiniteSystem) -> Result<Option<Witness>> {
    let condition_number = linalg::condition_number(&map)?;
    if !condition_number.is_finite() || condition_number > WITNESS_COND_CAP {
        return Ok(None);
    }
    let residuals = (
        frame_mapping_error(&map, &a.e1, &b.e1)?,
        frame_mapping_error(&map, &a.e2, &b.e2)?,
    );
    if residuals.0 > WITNESS_RESIDUAL_TOL || residuals.1 > WITNESS_RESIDUAL_TOL {
        return Ok(None);
    }
    Ok(Some(Witness { map, residuals, condition_number }))
}

/// `||(I - P_F) S E|| / ||S||`; zero iff `S(E) ⊂ F`. Dimensions are equal
/// whenever `S` is invertible and `dim E = dim F`.
pub fn frame_mapping_error(map: &Matrix, from: &Matrix, to: &Matrix) -> Result<f64> {
    if from.cols() != to.cols() {
        return Ok(f64::INFINITY);
    }
    if from.cols() == 0 {
        return Ok(0.0);
    }
    let image = map.matmul(from)?;
    let off = linalg::project_out(to, &image)?;
    Ok(off.norm2()? / map.norm2()?.max(f64::MIN_POSITIVE))
}

/// General finite witness: maps adapted bases `[E1∩E2, E1 ⊖ meet, E2 ⊖ meet,
/// complement of the sum]` of one system onto those of the other.
pub fn witness_fin(a: &FiniteSystem, b: &FiniteSystem) -> Result<Option<Witness>> {
    if a.ambient_dim != b.ambient_dim || dim_quadruple(a)? != dim_quadruple(b)? {
        return Ok(None);
    }
    let basis = |s: &FiniteSystem| -> Result<Matrix> {
        let m = meet(&s.e1, &s.e2, DEFAULT_ANGLE_TOL)?;
        let x1 = linalg::complement_within(&s.e1, &m)?;
        let x2 = linalg::complement_within(&s.e2, &m)?;
        let partial = m.hstack(&x1)?.hstack(&x2)?;
        let sum = linalg::orth_basis(&partial)?;
        let rest = linalg::orth_complement(&sum)?;
        Ok(partial.hstack(&rest)?)
    };
    let (ba, bb) = (basis(a)?, basis(b)?);
    if ba.cols() != a.ambient_dim || bb.cols() != b.ambient_dim {
        return Ok(None);
    }
    let inv = match linalg::inverse(&ba) {
        Ok(m) => m,
        Err(LinalgError::Singular) => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    finish_witness(bb.matmul(&inv)?, a, b)
}

/// Representation isomorphism for the A2 quiver `K1 -> K2`: invertible
/// `G1, G2` with `T' G1 = G2 T` exist iff the ranks agree.
pub fn quiver_iso_a2(t: &Matrix, t2: &Matrix) -> Result<bool> {
    check_same_shape(t, t2)?;
    Ok(linalg::rank(t, None)? == linalg::rank(t2, None)?)
}

/// Idempotent `P` with `ran P = E1` and `ran(I - P) = E2`, when the two
/// subspaces are complementary.
pub fn oblique_projection(e1: &Matrix, e2: &Matrix) -> Result<Option<Matrix>> {
    if e1.rows() != e2.rows() {
        return Err(FinsysError::Linalg(LinalgError::AmbientMismatch(e1.rows(), e2.rows())));
    }
    let n = e1.rows();
    if e1.cols() + e2.cols() != n || meet(e1, e2, DEFAULT_ANGLE_TOL)?.cols() != 0 {
        return Ok(None);
    }
    let basis = e1.hstack(e2)?;
    let inv = match linalg::inverse(&basis) {
        Ok(m) => m,
        Err(LinalgError::Singular) => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    // P = B diag(I_k, 0) B^{-1} = E1 * (first k rows of B^{-1})
    let k = e1.cols();
    let mut top = Matrix::zeros(k, n);
    for i in 0..k {
        for j in 0..n {
            top[(i, j)] = inv[(i, j)];
        }
    }
    Ok(Some(e1.matmul(&top)?))
}

/// Derived three-subspace system `(E1, E1⊥, E2)`.
#[derive(Debug, Clone)]
pub struct DerivedSystem {
    pub ambient_dim: usize,
    pub e1: Matrix,
    pub e1_perp: Matrix,
    pub e2: Matrix,
}

pub fn derived_system(s: &FiniteSystem) -> Result<DerivedSystem> {
    Ok(DerivedSystem {
        ambient_dim: s.ambient_dim,
        e1: s.e1.clone(),
        e1_perp: linalg::orth_complement(&s.e1)?,
        e2: s.e2.clone(),
    })
}

/// Builds a system with prescribed Halmos data, rotated by `q`:
/// dims `[mm, mp, pm, pp]` plus one 2-plane per generic angle.
pub fn assemble_from_parts(dims: [usize; 4], angles: &[f64], q: &Matrix) -> Result<FiniteSystem> {
    let [mm, mp, pm, pp] = dims;
    let n = mm + mp + pm + pp + 2 * angles.len();
    let unit = |i: usize| {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        e
    };
    let mut e1 = Vec::new();
    let mut e2 = Vec::new();
    let mut next = 0;
    for _ in 0..mm {
        e1.push(unit(next));
        e2.push(unit(next));
        next += 1;
    }
    for _ in 0..mp {
        e1.push(unit(next));
        next += 1;
    }
    for _ in 0..pm {
        e2.push(unit(next));
        next += 1;
    }
    next += pp;
    for &theta in angles {
        e1.push(unit(next));
        let mut w = vec![0.0; n];
        w[next] = theta.cos();
        w[next + 1] = theta.sin();
        e2.push(w);
        next += 2;
    }
    let s = FiniteSystem::new(n, Matrix::from_cols(n, &e1)?, Matrix::from_cols(n, &e2)?)?;
    s.transformed(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_6};

    fn line(n: usize, v: &[f64]) -> Matrix {
        linalg::orth_basis(&Matrix::from_cols(n, &[v.to_vec()]).unwrap()).unwrap()
    }

    fn pair(theta: f64) -> FiniteSystem {
        FiniteSystem::new(2, line(2, &[1.0, 0.0]), line(2, &[theta.cos(), theta.sin()])).unwrap()
    }

    #[test]
    fn graph_of_zero_is_e1() {
        let s = graph_system(&Matrix::zeros(2, 2)).unwrap();
        assert!(linalg::principal_angles(s.e1(), s.e2()).unwrap().iter().all(|&a| a < 1e-15));
        assert_eq!(dim_quadruple(&s).unwrap(), DimQuadruple { d_meet: 2, d1: 0, d2: 0, d_coker: 2 });
    }

    #[test]
    fn graph_of_one() {
        let s = graph_system(&Matrix::from_diag(&[1.0])).unwrap();
        let v = s.e2().col(0);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((v[0].abs() - r).abs() < 1e-15 && (v[1].abs() - r).abs() < 1e-15);
        assert!(v[0] * v[1] > 0.0);
    }

    #[test]
    fn quadruple_cases() {
        let e1 = line(2, &[1.0, 0.0]);
        let e2 = line(2, &[0.0, 1.0]);
        let same = FiniteSystem::new(2, e1.clone(), e1.clone()).unwrap();
        assert_eq!(dim_quadruple(&same).unwrap(), DimQuadruple { d_meet: 1, d1: 0, d2: 0, d_coker: 1 });
        let orth = FiniteSystem::new(2, e1, e2).unwrap();
        assert_eq!(dim_quadruple(&orth).unwrap(), DimQuadruple { d_meet: 0, d1: 1, d2: 1, d_coker: 0 });
        let g = graph_system(&Matrix::from_diag(&[1.0, 0.5])).unwrap();
        assert_eq!(dim_quadruple(&g).unwrap(), DimQuadruple { d_meet: 0, d1: 2, d2: 2, d_coker: 0 });
    }

    #[test]
    fn halmos_orthogonal_pair() {
        let h = halmos_decompose(&pair(std::f64::consts::FRAC_PI_2)).unwrap();
        assert_eq!(h.dims(), [0, 1, 1, 0, 0]);
    }

    #[test]
    fn halmos_generic_plane() {
        let h = halmos_decompose(&pair(0.4)).unwrap();
        assert_eq!(h.dims(), [0, 0, 0, 0, 1]);
        assert!((h.generic_angles[0] - 0.4).abs() < 1e-14);
    }

    #[test]
    fn classifiers_on_small_systems() {
        let a = graph_system(&Matrix::from_diag(&[1.0, 0.5])).unwrap();
        let b = graph_system(&Matrix::from_diag(&[1.0, 1.0 / 3.0])).unwrap();
        assert!(classify_algebraic_fin(&a, &a).unwrap());
        assert!(classify_bounded_fin(&a, &b).unwrap());
        assert!(classify_unitary_fin(&a, &a).unwrap());
        assert!(!classify_unitary_fin(&a, &b).unwrap());
        // angles of graph(diag(1, 1/2)) are arctan(1) and arctan(1/2)
        let h = halmos_decompose(&a).unwrap();
        let want = [0.5f64.atan(), 1.0f64.atan()];
        assert!(h.generic_angles.iter().zip(want).all(|(x, y)| (x - y).abs() < 1e-12));

        let e1 = line(2, &[1.0, 0.0]);
        let s1 = FiniteSystem::new(2, e1.clone(), e1.clone()).unwrap();
        let s2 = FiniteSystem::new(2, e1, line(2, &[0.0, 1.0])).unwrap();
        assert!(!classify_algebraic_fin(&s1, &s2).unwrap());
        assert!(!classify_bounded_fin(&s1, &s2).unwrap());

        assert!(!classify_unitary_fin(&pair(FRAC_PI_6), &pair(FRAC_PI_3)).unwrap());
        assert!(classify_bounded_fin(&pair(FRAC_PI_6), &pair(FRAC_PI_3)).unwrap());
    }

    #[test]
    fn witness_identity_for_equal_operators() {
        let t = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 3.0], vec![1.0, 1.0]]).unwrap();
        let w = witness_graph_bounded(&t, &t).unwrap().unwrap();
        assert!(w.map.sub(&Matrix::identity(5)).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn witness_for_diagonal_example() {
        let t = Matrix::from_diag(&[1.0, 0.5]);
        let t2 = Matrix::from_diag(&[1.0, 1.0 / 3.0]);
        let w = witness_graph_bounded(&t, &t2).unwrap().expect("ranks agree");
        let g1 = Matrix::identity(2); // G1 block is the top-left 2x2
        let mut top = Matrix::zeros(2, 2);
        let mut bot = Matrix::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                top[(i, j)] = w.map[(i, j)];
                bot[(i, j)] = w.map[(2 + i, 2 + j)];
            }
        }
        let resid = t2.matmul(&top).unwrap().sub(&bot.matmul(&t).unwrap()).unwrap().max_abs();
        assert!(resid < 1e-10);
        assert!(w.residuals.0 < 1e-10 && w.residuals.1 < 1e-10);
        assert!(top.sub(&g1).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn witness_refused_on_rank_mismatch() {
        let t = Matrix::from_diag(&[1.0, 0.0]);
        let t2 = Matrix::from_diag(&[1.0, 1.0]);
        assert!(witness_graph_bounded(&t, &t2).unwrap().is_none());
        assert!(!quiver_iso_a2(&t, &t2).unwrap());
        assert!(matches!(
            witness_graph_bounded(&t, &Matrix::zeros(3, 2)),
            Err(FinsysError::ShapeMismatch(..))
        ));
    }

    #[test]
    fn quiver_zero_cases() {
        let z = Matrix::zeros(2, 3);
        assert!(quiver_iso_a2(&z, &z).unwrap());
        let t = Matrix::from_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 0.0]]).unwrap();
        assert!(!quiver_iso_a2(&t, &z).unwrap());
    }

    #[test]
    fn general_witness_maps_frames() {
        let a = pair(0.3);
        let b = pair(1.1);
        let w = witness_fin(&a, &b).unwrap().unwrap();
        assert!(w.residuals.0 < 1e-12 && w.residuals.1 < 1e-12);
        let e1 = line(2, &[1.0, 0.0]);
        let s1 = FiniteSystem::new(2, e1.clone(), e1.clone()).unwrap();
        assert!(witness_fin(&a, &s1).unwrap().is_none());
    }

    #[test]
    fn oblique_projection_cases() {
        let e1 = line(2, &[1.0, 0.0]);
        let e2 = line(2, &[0.0, 1.0]);
        let p = oblique_projection(&e1, &e2).unwrap().unwrap();
        assert!(p.sub(&Matrix::from_diag(&[1.0, 0.0])).unwrap().max_abs() < 1e-15);

        let d = line(2, &[1.0, 1.0]);
        let p = oblique_projection(&e1, &d).unwrap().unwrap();
        let want = Matrix::from_rows(&[vec![1.0, -1.0], vec![0.0, 0.0]]).unwrap();
        assert!(p.sub(&want).unwrap().max_abs() < 1e-14);

        assert!(oblique_projection(&e1, &e1).unwrap().is_none());
    }

    #[test]
    fn derived_system_cases() {
        let e1 = line(2, &[1.0, 0.0]);
        let e2 = line(2, &[0.0, 1.0]);
        let d = derived_system(&FiniteSystem::new(2, e1, e2.clone()).unwrap()).unwrap();
        assert_eq!(linalg::principal_angles(&d.e1_perp, &e2).unwrap(), vec![0.0]);

        let g = derived_system(&graph_system(&Matrix::from_diag(&[1.0])).unwrap()).unwrap();
        assert!(linalg::principal_angles(&g.e1_perp, &line(2, &[0.0, 1.0])).unwrap()[0] < 1e-15);
        assert_eq!(g.e1.cols() + g.e1_perp.cols(), 2);
    }

    #[test]
    fn new_rejects_bad_frames() {
        let bad = Matrix::from_cols(2, &[vec![2.0, 0.0]]).unwrap();
        assert!(matches!(
            FiniteSystem::new(2, bad.clone(), bad),
            Err(FinsysError::NotOrthonormal(_))
        ));
        let e = line(3, &[1.0, 0.0, 0.0]);
        assert!(matches!(FiniteSystem::new(2, e.clone(), e), Err(FinsysError::Ambient { .. })));
    }

    #[test]
    fn empty_and_full_subspaces() {
        let s = FiniteSystem::new(3, Matrix::zeros(3, 0), Matrix::identity(3)).unwrap();
        assert_eq!(dim_quadruple(&s).unwrap(), DimQuadruple { d_meet: 0, d1: 0, d2: 3, d_coker: 0 });
        assert_eq!(halmos_decompose(&s).unwrap().dims(), [0, 0, 3, 0, 0]);
        assert!(classify_unitary_fin(&s, &s).unwrap());
    }
}
