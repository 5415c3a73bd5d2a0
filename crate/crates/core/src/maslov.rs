//! The `m(V, W)` invariant of a pair of Lagrangians and the Maslov triple
//! index built from it.
//!
//! `m(V, W) = -(1/(pi i)) * sum log(lambda)` over the eigenvalues `lambda`
//! of the unitary `-phi(V) phi(W)^*` different from `-1`, with the branch
//! `log(r e^{it}) = ln r + it`, `-pi < t <= pi`. Every eigenvalue off `-1`
//! contributes `-arg(lambda)/pi` in `(-1, 1)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermsymp::{intersection_profile, Lagrangian};

/// Full output of [`m_invariant_detailed`].
#[derive(Debug, Clone, PartialEq)]
pub struct MInvariant {
    pub value: f64,
    /// Spectrum of `-phi(V) phi(W)^*`, sorted by argument.
    pub eigenvalues: Vec<Complex64>,
    /// Number of eigenvalues treated as exactly `-1`.
    pub excluded: usize,
    /// `dim(V cap W)` from the rank computation; always equal to `excluded`.
    pub intersection_dim: usize,
}

/// The unitary `-phi(V) phi(W)^*` on the `+i` eigenspace.
pub fn transition_unitary(v: &Lagrangian, w: &Lagrangian) -> Result<crate::linalg::CMat> {
    let pv = v.phi()?;
    let pw = w.phi()?;
    if pv.shape() != pw.shape() {
        return Err(Error::SpaceMismatch);
    }
    Ok(-(pv * pw.adjoint()))
}

pub fn m_invariant_detailed(v: &Lagrangian, w: &Lagrangian) -> Result<MInvariant> {
    let profile = intersection_profile(v, w)?;
    let u = transition_unitary(v, w)?;
    let mut eigenvalues = crate::linalg::unitary_eigenvalues(&u)?;
    eigenvalues.sort_by(|a, b| a.arg().total_cmp(&b.arg()));

    let eps = v.space().tolerances().eig;
    let mut excluded = 0;
    let mut sum_args = 0.0;
    for &lambda in &eigenvalues {
        let distance = (lambda + 1.0).norm();
        if distance <= eps {
            excluded += 1;
            continue;
        }
        if distance < 100.0 * eps {
            return Err(Error::EigenvalueAmbiguity {
                eigenvalue: lambda,
                distance,
            });
        }
        // ln|lambda| is rounding noise for a unitary; only the argument
        // survives in the real part of -(1/(pi i)) log(lambda).
        sum_args += lambda.arg();
    }
    if excluded != profile.dim {
        return Err(Error::IntersectionMismatch {
            excluded,
            intersection: profile.dim,
        });
    }
    let value = if sum_args == 0.0 { 0.0 } else { -sum_args / PI };
    Ok(MInvariant {
        value,
        eigenvalues,
        excluded,
        intersection_dim: profile.dim,
    })
}

/// `m(V, W)`.
pub fn m_invariant(v: &Lagrangian, w: &Lagrangian) -> Result<f64> {
    Ok(m_invariant_detailed(v, w)?.value)
}

/// Unrounded `m(U, V) + m(V, W) + m(W, U)`.
pub fn triple_sum(u: &Lagrangian, v: &Lagrangian, w: &Lagrangian) -> Result<f64> {
    Ok(m_invariant(u, v)? + m_invariant(v, w)? + m_invariant(w, u)?)
}

/// The Maslov triple index `m(U, V) + m(V, W) + m(W, U)`, which is an
/// integer depending only on the symplectic form.
pub fn triple_index(u: &Lagrangian, v: &Lagrangian, w: &Lagrangian) -> Result<i64> {
    let sum = triple_sum(u, v, w)?;
    let rounded = sum.round();
    if (sum - rounded).abs() > u.space().tolerances().int {
        return Err(Error::NonIntegerSum { sum });
    }
    Ok(rounded as i64)
}

/// Finite dimensional right-hand side of the cut-and-paste formula with
/// arbitrary boundary Lagrangians.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaCorrection {
    /// `m(W_X, W_Y)`.
    pub m_wx_wy: f64,
    /// `triple(V_X, V_Y, gamma W_Y) - triple(gamma V_X, W_X, W_Y)`.
    pub integer: i64,
    /// `m(V_X,V_Y) - m(gamma V_X, W_X) + m(gamma V_Y, W_Y) - m(W_X, W_Y)`.
    pub chain: f64,
}

pub fn eta_correction_rhs(
    vx: &Lagrangian,
    vy: &Lagrangian,
    wx: &Lagrangian,
    wy: &Lagrangian,
) -> Result<EtaCorrection> {
    let gvx = vx.gamma_image()?;
    let gvy = vy.gamma_image()?;
    let gwy = wy.gamma_image()?;
    let integer = triple_index(vx, vy, &gwy)? - triple_index(&gvx, wx, wy)?;
    let m_wx_wy = m_invariant(wx, wy)?;
    let chain = m_invariant(vx, vy)? - m_invariant(&gvx, wx)? + m_invariant(&gvy, wy)? - m_wx_wy;
    if (chain - integer as f64).abs() > vx.space().tolerances().int {
        return Err(Error::NonIntegerSum { sum: chain });
    }
    Ok(EtaCorrection {
        m_wx_wy,
        integer,
        chain,
    })
}
