//! Random spaces, Lagrangians and symplectic maps for property tests, the
//! acceptance suite and fixture generation.

use std::sync::Arc;

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::hermsymp::{HermitianSymplecticSpace, Lagrangian};
use crate::linalg::{self, c, CMat};

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

pub fn unitary<R: Rng + ?Sized>(k: usize, rng: &mut R) -> CMat {
    if k == 0 {
        return linalg::zeros(0, 0);
    }
    gaussian(k, k, rng).qr().q()
}

/// Invertible matrix with singular values drawn from `[lo, hi]`.
pub fn conditioned<R: Rng + ?Sized>(n: usize, lo: f64, hi: f64, rng: &mut R) -> CMat {
    let d = CMat::from_diagonal(&nalgebra::DVector::from_fn(n, |_, _| {
        c(rng.random_range(lo..=hi), 0.0)
    }));
    unitary(n, rng) * d * unitary(n, rng)
}

/// A random valid space of dimension `2k`: the standard structure pulled
/// back through a random invertible map.
pub fn space<R: Rng + ?Sized>(k: usize, rng: &mut R) -> HermitianSymplecticSpace {
    let std = HermitianSymplecticSpace::standard(k);
    let s = conditioned(2 * k, 0.5, 2.0, rng);
    // the pullback through any invertible map is a valid space
    let gram = s.adjoint() * s.clone();
    let gram = (&gram + gram.adjoint()) * c(0.5, 0.0);
    let s_inv = s.clone().try_inverse().expect("well conditioned");
    let gamma = s_inv * std.gamma() * s;
    HermitianSymplecticSpace::new(gram, gamma).expect("pullback of the standard model")
}

pub fn lagrangian<R: Rng + ?Sized>(
    space: &Arc<HermitianSymplecticSpace>,
    rng: &mut R,
) -> Lagrangian {
    Lagrangian::from_graph(space, &unitary(space.half_dim(), rng)).expect("graph of a unitary")
}

/// A Lagrangian `W` with `dim(base cap W) = d` exactly, and every other
/// eigenvalue of `-phi(base) phi(W)^*` at distance at least `margin` (in
/// angle) from `-1`.
pub fn lagrangian_meeting<R: Rng + ?Sized>(
    base: &Lagrangian,
    d: usize,
    margin: f64,
    rng: &mut R,
) -> Result<Lagrangian> {
    let k = base.dim();
    assert!(d <= k);
    let q = unitary(k, rng);
    let diag = nalgebra::DVector::from_fn(k, |i, _| {
        if i < d {
            c(1.0, 0.0)
        } else {
            let theta: f64 = rng.random_range(margin..(2.0 * std::f64::consts::PI - margin));
            Complex::from_polar(1.0, theta)
        }
    });
    // phi(V) phi(W)^* = Q diag Q^*  =>  phi(W) = Q diag^* Q^* phi(V)
    let a = &q * CMat::from_diagonal(&diag) * q.adjoint();
    let phi_w = a.adjoint() * base.phi()?;
    Lagrangian::from_graph(base.space(), &phi_w)
}

/// A random map preserving the symplectic form of `space`, obtained as the
/// Cayley transform of a random element of its Lie algebra written in the
/// eigensplitting frame. `scale` controls the distance from the identity.
pub fn omega_preserving<R: Rng + ?Sized>(
    space: &HermitianSymplecticSpace,
    scale: f64,
    rng: &mut R,
) -> CMat {
    let n = space.dim();
    let k = space.half_dim();
    if n == 0 {
        return linalg::zeros(0, 0);
    }
    let split = space.eigensplit();
    let frame = linalg::hstack(&split.plus_basis, &split.minus_basis);
    let frame_inv = frame.clone().try_inverse().expect("eigenframe is a basis");
    // omega is i*diag(I, -I) in this frame; X = D K with K skew-Hermitian
    // satisfies X^* D + D X = 0.
    let g = gaussian(n, n, rng) * c(scale, 0.0);
    let k_skew = (&g - g.adjoint()) * c(0.5, 0.0);
    let mut d = linalg::identity(n);
    for i in k..n {
        d[(i, i)] = c(-1.0, 0.0);
    }
    let x = d * k_skew;
    let id = linalg::identity(n);
    let half = c(0.5, 0.0);
    let lhs = (&id - &x * half)
        .try_inverse()
        .expect("Cayley transform defined");
    let t = lhs * (&id + &x * half);
    frame * t * frame_inv
}

#[cfg(test)]
mod tests {
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    use super::*;
    use crate::hermsymp::intersection_dim;
    use crate::linalg::max_abs;

    #[test]
    fn random_maps_preserve_omega() {
        let mut rng = StdRng::seed_from_u64(7);
        for k in 1..=4 {
            let s = space(k, &mut rng);
            let m = omega_preserving(&s, 0.5, &mut rng);
            let omega = s.omega_matrix();
            assert!(max_abs(&(m.adjoint() * &omega * &m - &omega)) < 1e-10);
        }
    }

    #[test]
    fn engineered_intersections() {
        let mut rng = StdRng::seed_from_u64(11);
        let s = Arc::new(space(3, &mut rng));
        let v = lagrangian(&s, &mut rng);
        for d in 0..=3 {
            let w = lagrangian_meeting(&v, d, 0.05, &mut rng).unwrap();
            assert_eq!(intersection_dim(&v, &w).unwrap(), d);
        }
    }
}
