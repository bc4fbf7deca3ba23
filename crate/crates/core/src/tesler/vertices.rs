use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::ratlinalg::{solve, RatMatrix, Rational};

use super::faces::{dimension, enumerate_faces, facet_positions, FaceSupport};
use super::{positions, HookSumVector, Position, TeslerError, UTMatrix};

/// Vertices of `Tes_n(a)` (in the original `n x n` coordinates) together
/// with the support naming each vertex and the edge graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawVertexGraph")]
pub struct VertexGraph {
    pub n: usize,
    pub a: HookSumVector,
    pub vertices: Vec<UTMatrix>,
    pub supports: Vec<FaceSupport>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Deserialize)]
struct RawVertexGraph {
    n: usize,
    a: HookSumVector,
    vertices: Vec<UTMatrix>,
    #[serde(default)]
    supports: Vec<Vec<Position>>,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<RawVertexGraph> for VertexGraph {
    type Error = TeslerError;

    fn try_from(raw: RawVertexGraph) -> Result<Self, Self::Error> {
        if raw.a.len() != raw.n || raw.vertices.iter().any(|v| v.size() != raw.n) {
            return Err(TeslerError::DimensionMismatch);
        }
        if !raw.supports.is_empty() && raw.supports.len() != raw.vertices.len() {
            return Err(TeslerError::DimensionMismatch);
        }
        let supports = raw
            .supports
            .into_iter()
            .map(|s| FaceSupport::new(raw.n, s))
            .collect::<Result<Vec<_>, _>>()?;
        let count = raw.vertices.len();
        if let Some(&(v, w)) = raw.edges.iter().find(|&&(v, w)| v >= count || w >= count || v == w) {
            return Err(TeslerError::InvalidMap(format!("edge ({v},{w}) is not between two distinct vertices")));
        }
        Ok(Self {
            n: raw.n,
            a: raw.a,
            vertices: raw.vertices,
            supports,
            edges: raw.edges,
        })
    }
}

impl VertexGraph {
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(x, y)| {
                if x == v {
                    Some(y)
                } else if y == v {
                    Some(x)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(x, y)| x == v || y == v).count()
    }

    /// Index of the vertex with the given (maximal) support.
    pub fn vertex_with_support(&self, support: &FaceSupport) -> Option<usize> {
        self.supports.binary_search(support).ok()
    }
}

/// Solves the hook-sum equations with the support's entries pinned to zero.
fn solve_vertex(
    n: usize,
    a: &HookSumVector,
    support: &FaceSupport,
) -> Result<UTMatrix, TeslerError> {
    let unknowns: Vec<Position> = positions(n).filter(|p| !support.contains(*p)).collect();
    let mut system = RatMatrix::zeros(n, unknowns.len());
    for (c, p) in unknowns.iter().enumerate() {
        system.set(p.row - 1, c, Rational::one());
        if p.row < p.col {
            system.set(p.col - 1, c, -Rational::one());
        }
    }
    let values = solve(&system, a.values())?;
    let mut m = UTMatrix::zeros(n);
    for (p, v) in unknowns.iter().zip(values) {
        if v.is_negative() {
            return Err(TeslerError::InfeasibleVertex(format!("{support}")));
        }
        m.set(*p, v)?;
    }
    Ok(m)
}

/// All vertices of `Tes_n(a)` for strictly positive `a`, one per maximal
/// support, with edges between vertices that share an edge face.
pub fn enumerate_vertices(n: usize, a: &HookSumVector) -> Result<VertexGraph, TeslerError> {
    if a.len() != n {
        return Err(TeslerError::DimensionMismatch);
    }
    if !a.is_strictly_positive() {
        return Err(TeslerError::NotStrictlyPositive);
    }
    let d = dimension(n);
    let supports = enumerate_faces(n, d)?;
    let vertices = supports
        .iter()
        .map(|s| solve_vertex(n, a, s))
        .collect::<Result<Vec<_>, _>>()?;
    let index: HashMap<&FaceSupport, usize> =
        supports.iter().enumerate().map(|(i, s)| (s, i)).collect();

    let mut edges = Vec::new();
    if d > 0 {
        let facets = facet_positions(n);
        for edge_face in enumerate_faces(n, d - 1)? {
            let ends: Vec<usize> = facets
                .iter()
                .filter(|p| !edge_face.contains(**p))
                .filter_map(|p| {
                    let mut s = edge_face.positions().to_vec();
                    s.push(*p);
                    FaceSupport::new(n, s).ok()
                })
                .filter_map(|s| index.get(&s).copied())
                .collect();
            match ends.as_slice() {
                [v, w] => edges.push(((*v).min(*w), (*v).max(*w))),
                _ => {
                    return Err(TeslerError::InfeasibleVertex(format!(
                        "edge face {edge_face} has {} vertices",
                        ends.len()
                    )))
                }
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    debug_assert!(vertices.iter().all(|v| !v.entries().iter().any(|x| x < &Rational::zero())));
    Ok(VertexGraph {
        n,
        a: a.clone(),
        vertices,
        supports,
        edges,
    })
}
