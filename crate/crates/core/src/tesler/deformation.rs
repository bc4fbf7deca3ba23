use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::ratlinalg::rational::pq;
use crate::ratlinalg::Rational;

use super::{TeslerError, UTMatrix, VertexGraph};

/// Outcome of checking a vertex map against the deformation conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeformationReport {
    pub surjective: bool,
    /// One entry per edge of `P`, in edge order: the non-negative scale `r`
    /// with `phi(v) - phi(w) = r (v - w)`, or `None` when no such `r` exists.
    pub edge_scales: Vec<EdgeScale>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeScale {
    pub edge: (usize, usize),
    #[serde(serialize_with = "opt_pq")]
    pub scale: Option<Rational>,
}

fn opt_pq<S: serde::Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => pq::serialize(r, s),
        None => s.serialize_none(),
    }
}

impl DeformationReport {
    pub fn is_deformation(&self) -> bool {
        self.surjective && self.edge_scales.iter().all(|e| e.scale.is_some())
    }

    /// First edge that is not scaled by a non-negative factor.
    pub fn first_violation(&self) -> Option<(usize, usize)> {
        self.edge_scales.iter().find(|e| e.scale.is_none()).map(|e| e.edge)
    }
}

/// Non-negative `r` with `image = r * source`, if any. `source` is nonzero.
fn parallel_scale(image: &[Rational], source: &[Rational]) -> Option<Rational> {
    let pivot = source.iter().position(|x| !x.is_zero())?;
    let r = &image[pivot] / &source[pivot];
    if r.is_negative() {
        return None;
    }
    image
        .iter()
        .zip(source)
        .all(|(y, x)| *y == &r * x)
        .then_some(r)
}

/// Checks whether `q_vertices`, reached through `phi`, form a deformation
/// of the polytope described by `p`: `phi` must be onto, and every edge of
/// `p` must map to a non-negative multiple of itself.
pub fn verify_deformation(
    p: &VertexGraph,
    q_vertices: &[UTMatrix],
    phi: &[usize],
) -> Result<DeformationReport, TeslerError> {
    if phi.len() != p.vertices.len() {
        return Err(TeslerError::DimensionMismatch);
    }
    if q_vertices.iter().any(|q| q.size() != p.n) {
        return Err(TeslerError::DimensionMismatch);
    }
    if let Some(bad) = phi.iter().find(|&&j| j >= q_vertices.len()) {
        return Err(TeslerError::InvalidMap(format!(
            "target index {bad} out of range for {} vertices",
            q_vertices.len()
        )));
    }
    let mut hit = vec![false; q_vertices.len()];
    for &j in phi {
        hit[j] = true;
    }
    let surjective = hit.iter().all(|&h| h);

    let mut edge_scales = Vec::with_capacity(p.edges.len());
    for &(v, w) in &p.edges {
        let source = p.vertices[v].sub(&p.vertices[w])?;
        let image = q_vertices[phi[v]].sub(&q_vertices[phi[w]])?;
        if source.entries().iter().all(Zero::is_zero) {
            return Err(TeslerError::InvalidMap(format!("edge ({v},{w}) has coincident endpoints")));
        }
        edge_scales.push(EdgeScale {
            edge: (v, w),
            scale: parallel_scale(image.entries(), source.entries()),
        });
    }
    Ok(DeformationReport {
        surjective,
        edge_scales,
    })
}
