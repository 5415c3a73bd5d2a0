//! Hermitian symplectic spaces and their Lagrangian subspaces.
//!
//! A space is a finite dimensional complex vector space with a positive
//! definite Hermitian inner product `<x, y> = x^* G y` (the gram matrix `G`
//! is explicit, coordinates need not be orthonormal) and a unitary `gamma`
//! with `gamma^2 = -I` whose `+i` and `-i` eigenspaces have equal
//! dimension. The symplectic form is `omega(x, y) = <x, gamma y>`.
//!
//! Internally most computations run in orthonormal coordinates `y = L^* x`
//! where `G = L L^*` is the Cholesky factorization.

use std::fmt;
use std::sync::Arc;

use nalgebra::Cholesky;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, c, max_abs, CMat};

/// Numerical thresholds shared by every operation on a space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Algebraic identities (`gamma^2 = -I`, isotropy, unitarity).
    pub alg: f64,
    /// Singular value threshold for rank decisions.
    pub rank: f64,
    /// Distance from `-1` below which an eigenvalue is treated as `-1`.
    pub eig: f64,
    /// Allowed distance of a triple index sum from the nearest integer.
    pub int: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            alg: 1e-10,
            rank: 1e-8,
            eig: 1e-8,
            int: 1e-6,
        }
    }
}

/// Measured residuals for the three defining invariants of a space.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceReport {
    pub dim: usize,
    /// `max |gamma^2 + I|` in orthonormal coordinates.
    pub gamma_square_residual: f64,
    /// `max |gamma^# gamma - I|` where `gamma^#` is the gram adjoint.
    pub unitarity_residual: f64,
    /// Number of positive eigenvalues of the form `<x, i gamma y>`.
    pub positive: usize,
    /// Number of negative eigenvalues of the form `<x, i gamma y>`.
    pub negative: usize,
    pub tol: f64,
}

impl SpaceReport {
    pub fn gamma_square_ok(&self) -> bool {
        self.gamma_square_residual <= self.tol
    }

    pub fn unitary_ok(&self) -> bool {
        self.unitarity_residual <= self.tol
    }

    pub fn signature(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }

    pub fn signature_ok(&self) -> bool {
        self.signature() == 0 && self.positive + self.negative == self.dim
    }

    pub fn passed(&self) -> bool {
        self.gamma_square_ok() && self.unitary_ok() && self.signature_ok()
    }
}

impl fmt::Display for SpaceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flag = |ok: bool| if ok { "pass" } else { "FAIL" };
        writeln!(f, "dim = {}", self.dim)?;
        writeln!(
            f,
            "gamma^2 = -I: {} (residual {:.3e})",
            flag(self.gamma_square_ok()),
            self.gamma_square_residual
        )?;
        writeln!(
            f,
            "gamma unitary: {} (residual {:.3e})",
            flag(self.unitary_ok()),
            self.unitarity_residual
        )?;
        write!(
            f,
            "signature(i gamma) = 0: {} (+{} / -{})",
            flag(self.signature_ok()),
            self.positive,
            self.negative
        )
    }
}

struct Frame {
    /// Lower Cholesky factor of the gram matrix.
    chol: CMat,
    /// `gamma` in orthonormal coordinates.
    gamma: CMat,
}

fn frame(gram: &CMat, gamma: &CMat) -> Result<Frame> {
    let n = gram.nrows();
    if n == 0 {
        return Ok(Frame {
            chol: linalg::zeros(0, 0),
            gamma: linalg::zeros(0, 0),
        });
    }
    let herm = (gram + gram.adjoint()) * c(0.5, 0.0);
    let lowest = linalg::hermitian_eigenvalues(&herm)
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    if lowest.is_nan() || lowest <= 0.0 {
        return Err(Error::NotPositiveDefinite);
    }
    let chol = Cholesky::new(herm).ok_or(Error::NotPositiveDefinite)?.l();
    if (0..n).any(|i| chol[(i, i)].re <= 0.0 || !chol[(i, i)].re.is_finite()) {
        return Err(Error::NotPositiveDefinite);
    }
    // gamma~ = L^* gamma L^{-*}; solve for its adjoint with the lower factor.
    let upper_gamma = chol.adjoint() * gamma;
    let adj = chol
        .solve_lower_triangular(&upper_gamma.adjoint())
        .ok_or(Error::NotPositiveDefinite)?;
    Ok(Frame {
        chol,
        gamma: adj.adjoint(),
    })
}

fn check_shapes(gram: &CMat, gamma: &CMat) -> Result<()> {
    let (r, cc) = gram.shape();
    if r != cc {
        return Err(Error::Shape(format!("gram must be square, got {r}x{cc}")));
    }
    if gamma.shape() != gram.shape() {
        return Err(Error::Shape(format!(
            "gamma is {}x{} but gram is {r}x{r}",
            gamma.nrows(),
            gamma.ncols()
        )));
    }
    if r % 2 != 0 {
        return Err(Error::Shape(format!("dimension must be even, got {r}")));
    }
    let scale = max_abs(gram).max(1.0);
    let residual = linalg::hermitian_residual(gram);
    if residual > 1e-10 * scale {
        return Err(Error::NotHermitian { residual });
    }
    Ok(())
}

fn report_from_frame(f: &Frame, tol: &Tolerances) -> SpaceReport {
    let n = f.gamma.nrows();
    let id = linalg::identity(n);
    let g = &f.gamma;
    let gamma_square_residual = max_abs(&(g * g + &id));
    let unitarity_residual = max_abs(&(g.adjoint() * g - &id));
    let ev = linalg::hermitian_eigenvalues(&(g * c(0.0, 1.0)));
    let positive = ev.iter().filter(|&&x| x > tol.rank).count();
    let negative = ev.iter().filter(|&&x| x < -tol.rank).count();
    SpaceReport {
        dim: n,
        gamma_square_residual,
        unitarity_residual,
        positive,
        negative,
        tol: tol.alg,
    }
}

/// Checks the defining invariants of a Hermitian symplectic space.
///
/// Structural problems (non-square, odd dimension, non-Hermitian or
/// indefinite gram) are errors; the three invariants are reported with
/// their residuals.
pub fn validate_space(gram: &CMat, gamma: &CMat, tol: &Tolerances) -> Result<SpaceReport> {
    check_shapes(gram, gamma)?;
    let f = frame(gram, gamma)?;
    Ok(report_from_frame(&f, tol))
}

/// Gram-orthonormal bases of the `+i` and `-i` eigenspaces of `gamma`.
#[derive(Debug, Clone)]
pub struct EigenSplitting {
    pub plus_basis: CMat,
    pub minus_basis: CMat,
    plus_ortho: CMat,
    minus_ortho: CMat,
}

impl EigenSplitting {
    fn compute(f: &Frame, tol: &Tolerances) -> Result<Self> {
        let n = f.gamma.nrows();
        let k = n / 2;
        let id = linalg::identity(n);
        let i_gamma = &f.gamma * c(0.0, 1.0);
        let mut out = Vec::with_capacity(2);
        for (sign, eig) in [(-1.0, c(0.0, 1.0)), (1.0, c(0.0, -1.0))] {
            let proj = (&id + &i_gamma * c(sign, 0.0)) * c(0.5, 0.0);
            let (q, leftover) = linalg::pivoted_orthonormal_columns(&proj, k);
            if leftover > tol.rank {
                return Err(Error::EigenSplit(format!(
                    "projector has rank above {k} (residual {leftover:.3e})"
                )));
            }
            let residual = max_abs(&(&f.gamma * &q - &q * eig));
            if residual > tol.alg {
                return Err(Error::EigenSplit(format!(
                    "eigenvector residual {residual:.3e} for eigenvalue {eig}"
                )));
            }
            let mut basis = from_ortho(&f.chol, &q);
            linalg::fix_column_phases(&mut basis, tol.rank);
            let ortho = f.chol.adjoint() * &basis;
            out.push((basis, ortho));
        }
        let (minus_basis, minus_ortho) = out.pop().expect("two eigenspaces");
        let (plus_basis, plus_ortho) = out.pop().expect("two eigenspaces");
        Ok(EigenSplitting {
            plus_basis,
            minus_basis,
            plus_ortho,
            minus_ortho,
        })
    }

    /// Plus basis in orthonormal coordinates.
    pub fn plus_orthonormal(&self) -> &CMat {
        &self.plus_ortho
    }

    /// Minus basis in orthonormal coordinates.
    pub fn minus_orthonormal(&self) -> &CMat {
        &self.minus_ortho
    }
}

fn from_ortho(chol: &CMat, y: &CMat) -> CMat {
    if chol.is_empty() {
        return y.clone();
    }
    chol.adjoint()
        .solve_upper_triangular(y)
        .expect("Cholesky factor is nonsingular")
}

/// A validated Hermitian symplectic space.
#[derive(Debug, Clone)]
pub struct HermitianSymplecticSpace {
    gram: CMat,
    gamma: CMat,
    chol: CMat,
    gamma_ortho: CMat,
    splitting: EigenSplitting,
    tol: Tolerances,
}

impl HermitianSymplecticSpace {
    pub fn new(gram: CMat, gamma: CMat) -> Result<Self> {
        Self::with_tolerances(gram, gamma, Tolerances::default())
    }

    pub fn with_tolerances(gram: CMat, gamma: CMat, tol: Tolerances) -> Result<Self> {
        check_shapes(&gram, &gamma)?;
        let f = frame(&gram, &gamma)?;
        let report = report_from_frame(&f, &tol);
        if !report.passed() {
            return Err(Error::InvalidSpace(report.to_string().replace('\n', "; ")));
        }
        let splitting = EigenSplitting::compute(&f, &tol)?;
        Ok(HermitianSymplecticSpace {
            gram,
            gamma,
            chol: f.chol,
            gamma_ortho: f.gamma,
            splitting,
            tol,
        })
    }

    /// `C^{2k}` with the identity gram and `gamma = [[0, -I], [I, 0]]`.
    pub fn standard(k: usize) -> Self {
        let n = 2 * k;
        let mut gamma = linalg::zeros(n, n);
        for i in 0..k {
            gamma[(i, k + i)] = c(-1.0, 0.0);
            gamma[(k + i, i)] = c(1.0, 0.0);
        }
        Self::new(linalg::identity(n), gamma).expect("standard model is valid")
    }

    /// The zero dimensional space.
    pub fn zero() -> Self {
        Self::standard(0)
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    /// Dimension of every Lagrangian subspace.
    pub fn half_dim(&self) -> usize {
        self.dim() / 2
    }

    pub fn gram(&self) -> &CMat {
        &self.gram
    }

    pub fn gamma(&self) -> &CMat {
        &self.gamma
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn with_tolerances_replaced(&self, tol: Tolerances) -> Result<Self> {
        Self::with_tolerances(self.gram.clone(), self.gamma.clone(), tol)
    }

    pub fn report(&self) -> SpaceReport {
        let f = Frame {
            chol: self.chol.clone(),
            gamma: self.gamma_ortho.clone(),
        };
        report_from_frame(&f, &self.tol)
    }

    /// `gamma` in orthonormal coordinates.
    pub fn gamma_orthonormal(&self) -> &CMat {
        &self.gamma_ortho
    }

    pub fn eigensplit(&self) -> &EigenSplitting {
        &self.splitting
    }

    /// Matrix of the symplectic form: `omega(x, y) = x^* (G gamma) y`.
    pub fn omega_matrix(&self) -> CMat {
        &self.gram * &self.gamma
    }

    pub fn omega(&self, x: &CMat, y: &CMat) -> CMat {
        x.adjoint() * self.omega_matrix() * y
    }

    /// Maps coordinate columns to orthonormal coordinates, `x -> L^* x`.
    pub fn to_orthonormal(&self, x: &CMat) -> CMat {
        self.chol.adjoint() * x
    }

    pub fn from_orthonormal(&self, y: &CMat) -> CMat {
        from_ortho(&self.chol, y)
    }

    /// Same gram, `gamma` replaced by `-gamma` (the reversed symplectic form).
    pub fn negated(&self) -> Self {
        Self::with_tolerances(self.gram.clone(), -&self.gamma, self.tol)
            .expect("negating gamma preserves validity")
    }

    /// Orthogonal direct sum with block diagonal gram and gamma.
    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::with_tolerances(
            linalg::block_diag(&self.gram, &other.gram),
            linalg::block_diag(&self.gamma, &other.gamma),
            self.tol,
        )
        .expect("direct sum of valid spaces is valid")
    }

    /// Pulls the structure back through an invertible map `s`:
    /// gram `s^* G s`, gamma `s^{-1} gamma s`. When `s` preserves `omega`
    /// the result realizes the same symplectic form.
    pub fn pullback(&self, s: &CMat) -> Result<Self> {
        let n = self.dim();
        if s.shape() != (n, n) {
            return Err(Error::Shape(format!("map must be {n}x{n}")));
        }
        let s_inv = s
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidArgument("map is singular".into()))?;
        let gram = s.adjoint() * &self.gram * s;
        let gram = (&gram + gram.adjoint()) * c(0.5, 0.0);
        let gamma = s_inv * &self.gamma * s;
        Self::with_tolerances(gram, gamma, self.tol)
    }

    /// Structural equality up to `tol.alg` relative to the entry scale.
    pub fn same_as(&self, other: &Self) -> bool {
        if std::ptr::eq(self, other) {
            return true;
        }
        if self.dim() != other.dim() {
            return false;
        }
        let scale = max_abs(&self.gram).max(max_abs(&self.gamma)).max(1.0);
        max_abs(&(&self.gram - &other.gram)) <= self.tol.alg * scale
            && max_abs(&(&self.gamma - &other.gamma)) <= self.tol.alg * scale
    }
}

/// A Lagrangian subspace, stored with a gram-orthonormal basis.
#[derive(Debug, Clone)]
pub struct Lagrangian {
    space: Arc<HermitianSymplecticSpace>,
    basis: CMat,
    ortho: CMat,
}

/// Validates `basis` as spanning a Lagrangian subspace and replaces it by
/// its gram-orthonormalized copy (modified Gram-Schmidt in column order).
pub fn lagrangian_from_basis(
    space: &Arc<HermitianSymplecticSpace>,
    basis: CMat,
) -> Result<Lagrangian> {
    let n = space.dim();
    let k = space.half_dim();
    if basis.shape() != (n, k) {
        return Err(Error::Shape(format!(
            "Lagrangian basis must be {n}x{k}, got {}x{}",
            basis.nrows(),
            basis.ncols()
        )));
    }
    let tol = space.tolerances();
    let ortho = linalg::orthonormalize_in_order(&space.to_orthonormal(&basis), tol.rank)?;
    let residual = max_abs(&(ortho.adjoint() * space.gamma_orthonormal() * &ortho));
    if residual > tol.alg {
        return Err(Error::NotIsotropic { residual });
    }
    Ok(Lagrangian {
        basis: space.from_orthonormal(&ortho),
        ortho,
        space: Arc::clone(space),
    })
}

impl Lagrangian {
    pub fn new(space: &Arc<HermitianSymplecticSpace>, basis: CMat) -> Result<Self> {
        lagrangian_from_basis(space, basis)
    }

    /// The Lagrangian `{x + phi(x) : x in ker(gamma - i)}` for a `k x k`
    /// unitary `phi` written in the eigensplitting bases.
    pub fn from_graph(space: &Arc<HermitianSymplecticSpace>, phi: &CMat) -> Result<Self> {
        let k = space.half_dim();
        if phi.shape() != (k, k) {
            return Err(Error::Shape(format!("phi must be {k}x{k}")));
        }
        let split = space.eigensplit();
        let basis = &split.plus_basis + &split.minus_basis * phi;
        lagrangian_from_basis(space, basis)
    }

    /// The unique Lagrangian of the zero dimensional space.
    pub fn empty(space: &Arc<HermitianSymplecticSpace>) -> Result<Self> {
        lagrangian_from_basis(space, linalg::zeros(space.dim(), space.half_dim()))
    }

    pub fn space(&self) -> &Arc<HermitianSymplecticSpace> {
        &self.space
    }

    /// Gram-orthonormal basis in the space's coordinates.
    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    pub fn orthonormal_basis(&self) -> &CMat {
        &self.ortho
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// `max |omega(b_i, b_j)|` over the stored orthonormal basis.
    pub fn omega_residual(&self) -> f64 {
        max_abs(&(self.ortho.adjoint() * self.space.gamma_orthonormal() * &self.ortho))
    }

    fn check_same_space(&self, other: &Lagrangian) -> Result<()> {
        if Arc::ptr_eq(&self.space, &other.space) || self.space.same_as(&other.space) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// Coefficients of the `+i` component of the basis in the plus basis.
    pub fn plus_component(&self) -> CMat {
        self.space.eigensplit().plus_orthonormal().adjoint() * &self.ortho
    }

    pub fn minus_component(&self) -> CMat {
        self.space.eigensplit().minus_orthonormal().adjoint() * &self.ortho
    }

    /// The unitary `phi(W): ker(gamma - i) -> ker(gamma + i)` whose graph is
    /// this subspace, as a matrix in the eigensplitting bases.
    pub fn phi(&self) -> Result<CMat> {
        let k = self.dim();
        if k == 0 {
            return Ok(linalg::zeros(0, 0));
        }
        let plus = self.plus_component();
        let smallest = linalg::singular_values(&plus)
            .last()
            .copied()
            .unwrap_or(0.0);
        if smallest <= self.space.tolerances().rank {
            return Err(Error::GraphSingular { smallest });
        }
        let inv = plus
            .try_inverse()
            .ok_or(Error::GraphSingular { smallest })?;
        Ok(self.minus_component() * inv)
    }

    /// `gamma(W)`, which for a Lagrangian equals the orthogonal complement.
    pub fn gamma_image(&self) -> Result<Lagrangian> {
        lagrangian_from_basis(&self.space, self.space.gamma() * &self.basis)
    }

    /// A gram-orthonormal basis of the orthogonal complement, computed
    /// without reference to `gamma`.
    pub fn orthogonal_complement_basis(&self) -> CMat {
        let n = self.space.dim();
        let ns = linalg::null_space(&self.ortho.adjoint(), self.space.tolerances().rank);
        debug_assert_eq!(ns.nrows(), n);
        self.space.from_orthonormal(&ns)
    }

    /// Spectral distance between the orthogonal projectors onto the two
    /// subspaces (0 iff equal, 1 iff some vector of one is orthogonal to
    /// the other).
    pub fn distance(&self, other: &Lagrangian) -> Result<f64> {
        self.check_same_space(other)?;
        Ok(linalg::projector_distance(&self.ortho, &other.ortho))
    }

    /// Distance to the span of arbitrary (not necessarily orthonormal)
    /// columns in the same coordinates.
    pub fn distance_to_span(&self, cols: &CMat) -> Result<f64> {
        let (q, _) = linalg::column_space(
            &self.space.to_orthonormal(cols),
            self.space.tolerances().rank,
        );
        Ok(linalg::projector_distance(&self.ortho, &q))
    }

    pub fn same_subspace(&self, other: &Lagrangian) -> Result<bool> {
        Ok(self.distance(other)? <= self.space.tolerances().rank)
    }
}

/// Rank profile behind [`intersection_dim`].
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionProfile {
    pub dim: usize,
    /// Singular values of `[basis_V | basis_W]` in orthonormal coordinates,
    /// descending.
    pub singular_values: Vec<f64>,
    /// Some singular value lies in `(rank/10, 10 rank)`.
    pub ill_conditioned: bool,
}

pub fn intersection_profile(v: &Lagrangian, w: &Lagrangian) -> Result<IntersectionProfile> {
    v.check_same_space(w)?;
    let tol = v.space.tolerances().rank;
    let stacked = linalg::hstack(&v.ortho, &w.ortho);
    let sv = linalg::singular_values(&stacked);
    let rank = sv.iter().filter(|&&s| s > tol).count();
    let ill_conditioned = sv.iter().any(|&s| s > tol / 10.0 && s < tol * 10.0);
    Ok(IntersectionProfile {
        dim: v.dim() + w.dim() - rank,
        singular_values: sv,
        ill_conditioned,
    })
}

/// `dim(V cap W)` from the numerical rank of the concatenated bases.
/// Ill-conditioned rank decisions are reported as an error.
pub fn intersection_dim(v: &Lagrangian, w: &Lagrangian) -> Result<usize> {
    let p = intersection_profile(v, w)?;
    if p.ill_conditioned {
        let tol = v.space.tolerances().rank;
        let s = p
            .singular_values
            .iter()
            .copied()
            .find(|&s| s > tol / 10.0 && s < tol * 10.0)
            .unwrap_or(tol);
        return Err(Error::IllConditioned { singular_value: s });
    }
    Ok(p.dim)
}

/// Convenience: an unvalidated complex scalar matrix from real rows.
pub fn real_matrix(rows: usize, cols: usize, data: &[f64]) -> CMat {
    CMat::from_row_slice(
        rows,
        cols,
        &data.iter().map(|&x| c(x, 0.0)).collect::<Vec<Complex64>>(),
    )
}
