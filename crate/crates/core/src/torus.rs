//! Harmonic forms on the flat 2-torus with the metric making `{dx, t dy}`
//! orthonormal, and the metric dependence of `m` for Lagrangians coming
//! from integer classes `a dx + b dy`.
//!
//! Coordinates are the cohomology basis `(1, dx, dy, dx^dy)`. The inner
//! product is `4 pi^2 diag(t, t, 1/t, 1/t)` and `gamma_t` acts by
//!
//! ```text
//! 1 -> t dx^dy,   dx -> t dy,   dy -> -(1/t) dx,   dx^dy -> -(1/t) 1.
//! ```

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::hermsymp::{lagrangian_from_basis, HermitianSymplecticSpace, Lagrangian, Tolerances};
use crate::linalg::{c, CMat};
use crate::maslov;

#[derive(Debug, Clone)]
pub struct TorusModel {
    t: f64,
    space: Arc<HermitianSymplecticSpace>,
}

pub fn torus_gram(t: f64) -> CMat {
    let s = 4.0 * PI * PI;
    CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
        c(s * t, 0.0),
        c(s * t, 0.0),
        c(s / t, 0.0),
        c(s / t, 0.0),
    ]))
}

pub fn torus_gamma(t: f64) -> CMat {
    let mut g = CMat::zeros(4, 4);
    g[(3, 0)] = c(t, 0.0);
    g[(2, 1)] = c(t, 0.0);
    g[(1, 2)] = c(-1.0 / t, 0.0);
    g[(0, 3)] = c(-1.0 / t, 0.0);
    g
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "metric parameter must be positive, got {t}"
        )))
    }
}

impl TorusModel {
    pub fn new(t: f64) -> Result<Self> {
        Self::with_tolerances(t, Tolerances::default())
    }

    pub fn with_tolerances(t: f64, tol: Tolerances) -> Result<Self> {
        check_t(t)?;
        let space = HermitianSymplecticSpace::with_tolerances(torus_gram(t), torus_gamma(t), tol)?;
        Ok(TorusModel {
            t,
            space: Arc::new(space),
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn space(&self) -> &Arc<HermitianSymplecticSpace> {
        &self.space
    }

    /// `H^0 (+) span{a dx + b dy}`.
    pub fn lagrangian(&self, pair: IntegerPair) -> Result<Lagrangian> {
        let mut basis = CMat::zeros(4, 2);
        basis[(0, 0)] = c(1.0, 0.0);
        basis[(1, 1)] = c(pair.a as f64, 0.0);
        basis[(2, 1)] = c(pair.b as f64, 0.0);
        lagrangian_from_basis(&self.space, basis)
    }
}

/// A nonzero integer class `a dx + b dy`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntegerPair {
    pub a: i64,
    pub b: i64,
}

impl IntegerPair {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a == 0 && b == 0 {
            return Err(Error::InvalidArgument(
                "(a, b) must not both be zero".into(),
            ));
        }
        Ok(IntegerPair { a, b })
    }

    /// Divides out `gcd(a, b)`; spans the same line.
    pub fn reduced(self) -> Self {
        let g = self.a.gcd(&self.b);
        IntegerPair {
            a: self.a / g,
            b: self.b / g,
        }
    }

    pub fn parallel_to(&self, other: &IntegerPair) -> bool {
        (self.a as i128) * (other.b as i128) == (self.b as i128) * (other.a as i128)
    }

    /// `(i t a + b) / (i t a - b)`, the eigenvalue of `phi^1` on
    /// `dx - i t dy`.
    pub fn phi_eigenvalue(&self, t: f64) -> Complex64 {
        let (a, b) = (self.a as f64, self.b as f64);
        c(b, t * a) / c(-b, t * a)
    }
}

/// `log` with the branch `-pi < arg <= pi`.
fn log_branch(z: Complex64) -> Complex64 {
    let arg = z.im.atan2(z.re);
    let arg = if arg == -PI { PI } else { arg };
    c(z.norm().ln(), arg)
}

/// Closed form for `m(V_X, V_Y)` on the torus with metric parameter `t`:
///
/// ```text
/// -(1/(pi i)) (pi i + log(-((ita + b)/(ita - b)) ((itA - B)/(itA + B)))) + dim(V_X cap V_Y)
/// ```
///
/// with `dim(V_X cap V_Y) = 1 + [(a, b) parallel to (A, B)]`.
pub fn torus_m_closed_form(x: IntegerPair, y: IntegerPair, t: f64) -> Result<f64> {
    torus_m_closed_form_with(x, y, t, &Tolerances::default())
}

pub fn torus_m_closed_form_with(
    x: IntegerPair,
    y: IntegerPair,
    t: f64,
    tol: &Tolerances,
) -> Result<f64> {
    check_t(t)?;
    IntegerPair::new(x.a, x.b)?;
    IntegerPair::new(y.a, y.b)?;
    let (arg, dim) = if x.parallel_to(&y) {
        // the log argument is exactly -1, whose log is pi i on this branch
        (PI, 2.0)
    } else {
        let z = -(x.phi_eigenvalue(t) * y.phi_eigenvalue(t).conj());
        if (z + 1.0).norm() < 100.0 * tol.eig {
            return Err(Error::BranchCut { value: z });
        }
        (log_branch(z).im, 1.0)
    };
    // real part of -(1/(pi i)) (pi i + log z)
    Ok(-1.0 - arg / PI + dim)
}

/// The `B = 0` specialization:
/// `-1 + dim(V_X cap V_Y) - (1/(pi i)) log((b + ita)/(b - ita))`.
pub fn torus_m_b_zero(x: IntegerPair, big_a: i64, t: f64) -> Result<f64> {
    check_t(t)?;
    let y = IntegerPair::new(big_a, 0)?;
    let dim = if x.parallel_to(&y) { 2.0 } else { 1.0 };
    let (a, b) = (x.a as f64, x.b as f64);
    let log = log_branch(c(b, t * a) / c(b, -t * a));
    Ok(-1.0 + dim - log.im / PI)
}

/// `m(V_X, V_Y)` through the generic eigenvalue algorithm on the assembled
/// model.
pub fn torus_m_generic(x: IntegerPair, y: IntegerPair, t: f64) -> Result<f64> {
    let model = TorusModel::new(t)?;
    maslov::m_invariant(&model.lagrangian(x)?, &model.lagrangian(y)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub t: f64,
    pub m_closed: f64,
    pub m_generic: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub rows: Vec<SweepRow>,
    /// The generic values are not all equal (spread above `1e-9`).
    pub varies: bool,
    /// Both `a` and `b` are nonzero and the lines are not parallel; the
    /// situation in which variation with `t` is expected when `B = 0`.
    pub variation_expected: bool,
}

impl Sweep {
    pub fn max_delta(&self) -> f64 {
        self.rows.iter().map(|r| r.delta).fold(0.0, f64::max)
    }
}

pub fn torus_m_sweep(x: IntegerPair, y: IntegerPair, t_values: &[f64]) -> Result<Sweep> {
    let mut rows = Vec::with_capacity(t_values.len());
    for &t in t_values {
        let m_closed = torus_m_closed_form(x, y, t)?;
        let m_generic = torus_m_generic(x, y, t)?;
        rows.push(SweepRow {
            t,
            m_closed,
            m_generic,
            delta: (m_closed - m_generic).abs(),
        });
    }
    let lo = rows
        .iter()
        .map(|r| r.m_generic)
        .fold(f64::INFINITY, f64::min);
    let hi = rows
        .iter()
        .map(|r| r.m_generic)
        .fold(f64::NEG_INFINITY, f64::max);
    let varies = !rows.is_empty() && hi - lo > 1e-9;
    let variation_expected = x.a != 0 && x.b != 0 && !x.parallel_to(&y);
    Ok(Sweep {
        rows,
        varies,
        variation_expected,
    })
}

/// Evenly spaced values `t_min, ..., t_max` (`steps` points).
pub fn linspace(t_min: f64, t_max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![t_min],
        n => (0..n)
            .map(|i| t_min + (t_max - t_min) * (i as f64) / ((n - 1) as f64))
            .collect(),
    }
}
