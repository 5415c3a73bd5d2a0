//! Exact arithmetic for flat SU(2) connections on the trefoil complement and
//! on torus bundles over the circle.
//!
//! A point `(phi, psi)` stands for the diagonal holonomy
//! `mu -> diag(e^{2 pi i phi}, e^{-2 pi i phi})`,
//! `lambda -> diag(e^{2 pi i psi}, e^{-2 pi i psi})` on the boundary torus.
//! The non-abelian trefoil representations restrict to the open arc
//! `(t, -6t + 1/2)`, `1/12 < t < 5/12`.
//!
//! The mapping torus of `f` has fundamental group
//! `<mu, lambda, tau | [mu, lambda], tau mu tau^-1 = mu lambda^2,
//! tau lambda tau^-1 = mu^3 lambda^7>` for `f = [[1, 3], [2, 7]]`; the
//! representation extends over it iff `(phi, psi)(f + I)` is integral, and
//! its Chern-Simons invariant is `phi n - psi m` mod 1 where
//! `(m, n) = (phi, psi)(I + f^-1)`.

use std::f64::consts::PI;
use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat};

pub type Rational = Ratio<i128>;

/// Largest numerator or denominator accepted from text input. Keeps every
/// intermediate product comfortably inside `i128`.
pub const INPUT_BOUND: i128 = 1_000_000_000_000;

pub fn parse_rational(s: &str) -> Result<Rational> {
    let trimmed = s.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let bad = || Error::InvalidArgument(format!("not a rational number: {s:?}"));
    let num: i128 = num.parse().map_err(|_| bad())?;
    let den: i128 = den.parse().map_err(|_| bad())?;
    if den == 0 {
        return Err(Error::InvalidArgument(format!("zero denominator in {s:?}")));
    }
    if num.abs() > INPUT_BOUND || den.abs() > INPUT_BOUND {
        return Err(Error::InvalidArgument(format!(
            "{s:?} exceeds the supported size"
        )));
    }
    Ok(Rational::new(num, den))
}

/// `p/q` in lowest terms, or `p` for integers.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Representative in `[0, 1)`.
pub fn mod_one(q: &Rational) -> Rational {
    q - q.floor()
}

fn rat(n: i128) -> Rational {
    Rational::from_integer(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RepPoint {
    pub phi: Rational,
    pub psi: Rational,
}

impl RepPoint {
    pub fn new(phi: Rational, psi: Rational) -> Self {
        RepPoint { phi, psi }
    }

    pub fn trivial() -> Self {
        RepPoint {
            phi: Rational::zero(),
            psi: Rational::zero(),
        }
    }

    /// Row vector times a 2x2 integer matrix.
    fn times(&self, m: [[i128; 2]; 2]) -> (Rational, Rational) {
        (
            self.phi * rat(m[0][0]) + self.psi * rat(m[1][0]),
            self.phi * rat(m[0][1]) + self.psi * rat(m[1][1]),
        )
    }
}

impl fmt::Display for RepPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {})",
            format_rational(&self.phi),
            format_rational(&self.psi)
        )
    }
}

/// An element of `SL(2, Z)` acting on row vectors from the right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GluingMatrix {
    entries: [[i64; 2]; 2],
}

impl GluingMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = (a as i128) * (d as i128) - (b as i128) * (c as i128);
        if det != 1 {
            return Err(Error::NotUnimodular { det: det as i64 });
        }
        Ok(GluingMatrix {
            entries: [[a, b], [c, d]],
        })
    }

    /// `[[1, 3], [2, 7]]`.
    pub fn example() -> Self {
        GluingMatrix {
            entries: [[1, 3], [2, 7]],
        }
    }

    pub fn entries(&self) -> [[i64; 2]; 2] {
        self.entries
    }

    pub fn det(&self) -> i64 {
        let [[a, b], [c, d]] = self.entries;
        a * d - b * c
    }

    /// Exact inverse (an integer matrix since `det = 1`).
    pub fn inverse(&self) -> Self {
        let [[a, b], [c, d]] = self.entries;
        GluingMatrix {
            entries: [[d, -b], [-c, a]],
        }
    }

    fn plus_identity(&self) -> [[i128; 2]; 2] {
        let [[a, b], [c, d]] = self.entries;
        [[a as i128 + 1, b as i128], [c as i128, d as i128 + 1]]
    }
}

/// The point `(t, -6t + 1/2)` of the open arc.
pub fn trefoil_arc_point(t: Rational) -> Result<RepPoint> {
    let lo = Rational::new(1, 12);
    let hi = Rational::new(5, 12);
    if t <= lo || t >= hi {
        return Err(Error::OutOfArc {
            t: format_rational(&t),
        });
    }
    Ok(RepPoint {
        phi: t,
        psi: rat(-6) * t + Rational::new(1, 2),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwistedCohomology {
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
}

impl TwistedCohomology {
    pub fn vanishes(&self) -> bool {
        self.h0 == 0 && self.h1 == 0 && self.h2 == 0
    }
}

fn holonomy(angle: &Rational) -> CMat {
    let x = mod_one(angle);
    let theta = 2.0 * PI * (*x.numer() as f64) / (*x.denom() as f64);
    let mut m = linalg::zeros(2, 2);
    m[(0, 0)] = c(theta.cos(), theta.sin());
    m[(1, 1)] = c(theta.cos(), -theta.sin());
    m
}

fn rank(m: &CMat, tol: f64) -> usize {
    linalg::singular_values(m)
        .iter()
        .filter(|&&s| s > tol)
        .count()
}

/// Fox-calculus boundary maps `C^2 -> C^4 -> C^2` for the torus group
/// `<mu, lambda | mu lambda mu^-1 lambda^-1>` twisted by the diagonal
/// representation.
pub fn fox_differentials(rep: &RepPoint) -> (CMat, CMat) {
    let mu = holonomy(&rep.phi);
    let lambda = holonomy(&rep.psi);
    let id = linalg::identity(2);
    let d0 = linalg::vstack(&(&mu - &id), &(&lambda - &id));
    let d1 = linalg::hstack(&(&id - &lambda), &(&mu - &id));
    (d0, d1)
}

pub fn torus_twisted_cohomology(rep: &RepPoint) -> Result<TwistedCohomology> {
    torus_twisted_cohomology_with(rep, 1e-10, 1e-8)
}

pub fn torus_twisted_cohomology_with(
    rep: &RepPoint,
    tol_alg: f64,
    tol_rank: f64,
) -> Result<TwistedCohomology> {
    let (d0, d1) = fox_differentials(rep);
    let residual = linalg::max_abs(&(&d1 * &d0));
    if residual > tol_alg {
        return Err(Error::NonComplex { residual });
    }
    let r0 = rank(&d0, tol_rank);
    let r1 = rank(&d1, tol_rank);
    Ok(TwistedCohomology {
        h0: 2 - r0,
        h1: 4 - r0 - r1,
        h2: 2 - r1,
    })
}

/// `(phi, psi)(f + I)` has integer entries.
pub fn mapping_torus_condition(rep: &RepPoint, f: &GluingMatrix) -> bool {
    let (x, y) = rep.times(f.plus_identity());
    x.is_integer() && y.is_integer()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChernSimons {
    /// `(m, n) = (phi, psi)(I + f^-1)`.
    pub m: Rational,
    pub n: Rational,
    /// `phi n - psi m` before reduction.
    pub raw: Rational,
    /// Reduced to `[0, 1)`.
    pub value: Rational,
}

pub fn chern_simons(rep: &RepPoint, f: &GluingMatrix) -> Result<ChernSimons> {
    if !mapping_torus_condition(rep, f) {
        return Err(Error::ConditionFailed {
            phi: format_rational(&rep.phi),
            psi: format_rational(&rep.psi),
        });
    }
    let (m, n) = rep.times(f.inverse().plus_identity());
    let raw = rep.phi * n - rep.psi * m;
    Ok(ChernSimons {
        m,
        n,
        raw,
        value: mod_one(&raw),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RhoDifference {
    pub cs1: Rational,
    pub cs2: Rational,
    /// `4 (cs1 - cs2)` mod 1.
    pub four_cs_difference: Rational,
    /// `4 (cs2 - cs1)` mod 1: the congruence class of
    /// `rho(M_f, beta1) - rho(M_f, beta2)` under the spectral flow relation.
    pub rho_difference: Rational,
}

/// `4 (cs(rep1) - cs(rep2))` mod 1, together with the opposite ordering.
pub fn rho_difference_detailed(
    rep1: &RepPoint,
    rep2: &RepPoint,
    f: &GluingMatrix,
) -> Result<RhoDifference> {
    let cs1 = chern_simons(rep1, f)?.value;
    let cs2 = chern_simons(rep2, f)?.value;
    let four = rat(4);
    Ok(RhoDifference {
        cs1,
        cs2,
        four_cs_difference: mod_one(&(four * (cs1 - cs2))),
        rho_difference: mod_one(&(four * (cs2 - cs1))),
    })
}

/// `4 (cs(rep1) - cs(rep2))` mod 1; `3/5` for the two trefoil points at
/// `t = 1/5` and `t = 2/5`.
pub fn rho_difference_mod_z(
    rep1: &RepPoint,
    rep2: &RepPoint,
    f: &GluingMatrix,
) -> Result<Rational> {
    Ok(rho_difference_detailed(rep1, rep2, f)?.four_cs_difference)
}

/// Exact check that a rational lies in `[0, 1)`.
pub fn is_reduced(q: &Rational) -> bool {
    !q.is_negative() && *q < Rational::one()
}
