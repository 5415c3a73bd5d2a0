//! Lagrangian relations between Hermitian symplectic spaces and the
//! reduction map they induce.
//!
//! A bordism from `H0` to `H1` is modelled by a Lagrangian `V` in
//! `H0^- (+) H1`, where `H0^-` carries `-gamma0` so that graphs of
//! symplectic maps are Lagrangian. It sends a Lagrangian `W` of `H0` to
//!
//! ```text
//! L(W) = P1( V cap (W (+) H1) )
//! ```
//!
//! with `P1` the projection to the `H1` factor. Relations compose as
//! `{(x, z) : (x, y) in V1, (y, z) in V2 for some y}`; no transversality is
//! assumed.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hermsymp::{lagrangian_from_basis, HermitianSymplecticSpace, Lagrangian};
use crate::linalg::{self, CMat};

#[derive(Debug, Clone)]
pub struct BordismRelation {
    source: Arc<HermitianSymplecticSpace>,
    target: Arc<HermitianSymplecticSpace>,
    graph: Lagrangian,
}

fn ensure_same(a: &Arc<HermitianSymplecticSpace>, b: &Arc<HermitianSymplecticSpace>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a.same_as(b) {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

/// `H0^- (+) H1`.
pub fn relation_space(
    source: &HermitianSymplecticSpace,
    target: &HermitianSymplecticSpace,
) -> Arc<HermitianSymplecticSpace> {
    Arc::new(source.negated().direct_sum(target))
}

impl BordismRelation {
    /// Validates `basis` as a Lagrangian of `source^- (+) target`.
    pub fn new(
        source: Arc<HermitianSymplecticSpace>,
        target: Arc<HermitianSymplecticSpace>,
        basis: CMat,
    ) -> Result<Self> {
        let product = relation_space(&source, &target);
        let graph = lagrangian_from_basis(&product, basis)?;
        Ok(BordismRelation {
            source,
            target,
            graph,
        })
    }

    /// The cylinder: graph of the identity map.
    pub fn identity(space: Arc<HermitianSymplecticSpace>) -> Self {
        let n = space.dim();
        Self::from_map(Arc::clone(&space), space, &linalg::identity(n))
            .expect("identity graph is Lagrangian")
    }

    /// Graph `{(x, m x)}` of a linear map `source -> target`. Lagrangian iff
    /// `m` intertwines the two symplectic forms.
    pub fn from_map(
        source: Arc<HermitianSymplecticSpace>,
        target: Arc<HermitianSymplecticSpace>,
        map: &CMat,
    ) -> Result<Self> {
        if map.shape() != (target.dim(), source.dim()) {
            return Err(Error::Shape(format!(
                "map must be {}x{}",
                target.dim(),
                source.dim()
            )));
        }
        if source.dim() != target.dim() {
            return Err(Error::Shape(
                "a symplectic map needs equal dimensions".into(),
            ));
        }
        let basis = linalg::vstack(&linalg::identity(source.dim()), map);
        Self::new(source, target, basis)
    }

    /// A relation out of the zero space, i.e. a bordism with empty incoming
    /// boundary, determined by a single Lagrangian of the target.
    pub fn from_lagrangian(v: &Lagrangian) -> Self {
        let source = Arc::new(HermitianSymplecticSpace::zero());
        Self::new(source, Arc::clone(v.space()), v.basis().clone())
            .expect("a Lagrangian of H1 is a Lagrangian of 0 (+) H1")
    }

    pub fn source(&self) -> &Arc<HermitianSymplecticSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<HermitianSymplecticSpace> {
        &self.target
    }

    /// The Lagrangian of `source^- (+) target`.
    pub fn graph(&self) -> &Lagrangian {
        &self.graph
    }

    /// Orthonormal-coordinate basis split into its source and target rows.
    fn blocks(&self) -> (CMat, CMat) {
        let q = self.graph.orthonormal_basis();
        let n0 = self.source.dim();
        let n1 = self.target.dim();
        (q.rows(0, n0).into_owned(), q.rows(n0, n1).into_owned())
    }

    /// Subspace equality of the graphs.
    pub fn same_relation(&self, other: &BordismRelation) -> Result<bool> {
        ensure_same(&self.source, &other.source)?;
        ensure_same(&self.target, &other.target)?;
        let d = linalg::projector_distance(
            self.graph.orthonormal_basis(),
            other.graph.orthonormal_basis(),
        );
        Ok(d <= self.source.tolerances().rank)
    }

    pub fn distance(&self, other: &BordismRelation) -> Result<f64> {
        ensure_same(&self.source, &other.source)?;
        ensure_same(&self.target, &other.target)?;
        Ok(linalg::projector_distance(
            self.graph.orthonormal_basis(),
            other.graph.orthonormal_basis(),
        ))
    }
}

/// Turns orthonormal-coordinate columns into a Lagrangian of `space`,
/// keeping the numerically independent directions.
fn lagrangian_from_span(
    space: &Arc<HermitianSymplecticSpace>,
    ortho_cols: &CMat,
) -> Result<Lagrangian> {
    let expected = space.half_dim();
    let (q, _) = linalg::column_space(ortho_cols, space.tolerances().rank);
    if q.ncols() != expected {
        return Err(Error::RankCollapse {
            expected,
            found: q.ncols(),
        });
    }
    lagrangian_from_basis(space, space.from_orthonormal(&q))
}

/// Pushes a Lagrangian of the source across the relation.
pub fn reduce(rel: &BordismRelation, w: &Lagrangian) -> Result<Lagrangian> {
    ensure_same(w.space(), &rel.source)?;
    let tol = rel.source.tolerances().rank;
    let (top, bottom) = rel.blocks();
    // x in W  <=>  x is orthogonal to gamma(W) = W^perp
    let perp = w.gamma_image()?;
    let constraint = perp.orthonormal_basis().adjoint() * top;
    let kernel = linalg::null_space(&constraint, tol);
    lagrangian_from_span(&rel.target, &(bottom * kernel))
}

/// Composition `rel1` then `rel2`.
pub fn compose(rel1: &BordismRelation, rel2: &BordismRelation) -> Result<BordismRelation> {
    ensure_same(&rel1.target, &rel2.source)?;
    let tol = rel1.source.tolerances().rank;
    let (x1, y1) = rel1.blocks();
    let (y2, z2) = rel2.blocks();
    let k1 = x1.ncols();
    let k2 = z2.ncols();
    // (c1, c2) with y1 c1 = y2 c2
    let matching = linalg::hstack(&y1, &(-y2));
    let kernel = linalg::null_space(&matching, tol);
    let c1 = kernel.rows(0, k1).into_owned();
    let c2 = kernel.rows(k1, k2).into_owned();
    let composite = linalg::vstack(&(x1 * c1), &(z2 * c2));
    let product = relation_space(&rel1.source, &rel2.target);
    let graph = lagrangian_from_span(&product, &composite)?;
    Ok(BordismRelation {
        source: Arc::clone(&rel1.source),
        target: Arc::clone(&rel2.target),
        graph,
    })
}

/// `gamma0(W) (+) L(W)`, a Lagrangian of `H0 (+) H1` with the un-flipped
/// structure on both factors.
pub fn glued_boundary_lagrangian(w: &Lagrangian, rel: &BordismRelation) -> Result<Lagrangian> {
    let pushed = reduce(rel, w)?;
    let incoming = w.gamma_image()?;
    let space = Arc::new(rel.source.direct_sum(&rel.target));
    lagrangian_from_basis(&space, linalg::block_diag(incoming.basis(), pushed.basis()))
}
