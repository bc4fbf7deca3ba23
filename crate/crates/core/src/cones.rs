//! Gram matrices ("matrices of dot products", MDPs) of the cones attached
//! to a face of `PTes_n(1)`.
//!
//! For a totally unimodular full-dimensional polytope the MDP of the normal
//! cone (primitive facet normals) and the MDP of the pointed feasible cone
//! (primitive generators) are inverse to each other, so the feasible-cone
//! MDP is obtained by inverting a small integer matrix. [`EdgeOracle`]
//! computes the same feasible-cone MDP the long way, from edge directions
//! at a vertex, and serves as the independent check.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::ratlinalg::{
    determinant, dot, gram, is_positive_definite, mat_invert, rational, LinAlgError,
    RatMatrix, RatVector, Rational,
};
use crate::tesler::{
    dimension, enumerate_faces, enumerate_vertices, facet_normal, psi_diag, FaceSupport,
    HookSumVector, Position, TeslerError, VertexGraph,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConeError {
    #[error("no vertex of PTes_n(1) lies on the face {0}")]
    NoVertexFound(String),
    #[error("vertex {0} is not on the face")]
    VertexNotOnFace(usize),
    #[error(transparent)]
    Tesler(#[from] TeslerError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConeKind {
    NormalCone,
    FeasibleCone,
}

/// A `k x k` Gram matrix of cone generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mdp {
    pub kind: ConeKind,
    pub entries: RatMatrix,
}

impl Mdp {
    pub fn k(&self) -> usize {
        self.entries.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        self.entries.get(i, j)
    }

    pub fn is_positive_definite(&self) -> bool {
        is_positive_definite(&self.entries)
    }
}

/// Flattened primitive outer normal of the facet `F_{pos}` of `PTes_n(a)`.
fn normal_vector(n: usize, pos: Position) -> Result<RatVector, TeslerError> {
    Ok(facet_normal(n, pos)?.entries().to_vec())
}

/// Gram matrix of the facet normals of `positions`, in the given order.
pub fn ncone_mdp(n: usize, positions: &[Position]) -> Result<Mdp, ConeError> {
    let normals = positions
        .iter()
        .map(|&p| normal_vector(n, p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Mdp {
        kind: ConeKind::NormalCone,
        entries: gram(&normals)?,
    })
}

/// Feasible-cone MDP as the exact inverse of the normal-cone MDP.
pub fn fcone_mdp(n: usize, positions: &[Position]) -> Result<Mdp, ConeError> {
    let normal = ncone_mdp(n, positions)?;
    Ok(Mdp {
        kind: ConeKind::FeasibleCone,
        entries: mat_invert(&normal.entries)?,
    })
}

/// Result of one oracle evaluation at a chosen base vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleRun {
    pub vertex: usize,
    pub mdp: Mdp,
    /// `pairing[j][i] = <n_j, u_i>`; must equal `-I`.
    pub pairing: RatMatrix,
}

impl OracleRun {
    pub fn side_conditions_hold(&self) -> bool {
        let k = self.pairing.rows();
        (0..k).all(|j| {
            (0..k).all(|i| {
                let expected = if i == j { -Rational::one() } else { Rational::zero() };
                *self.pairing.get(j, i) == expected
            })
        })
    }
}

/// Vertex data of `PTes_n(1)` for edge-direction computations.
pub struct EdgeOracle {
    n: usize,
    graph: VertexGraph,
    projected: Vec<RatVector>,
    neighbors: Vec<Vec<usize>>,
}

impl EdgeOracle {
    pub fn new(n: usize) -> Result<Self, ConeError> {
        if n < 2 {
            return Err(TeslerError::SizeTooSmall(n).into());
        }
        let graph = enumerate_vertices(n, &HookSumVector::ones(n))?;
        let projected = graph
            .vertices
            .iter()
            .map(|v| psi_diag(v).map(|y| y.entries().to_vec()))
            .collect::<Result<Vec<_>, _>>()?;
        let neighbors = (0..graph.vertices.len()).map(|v| graph.neighbors(v)).collect();
        Ok(Self {
            n,
            graph,
            projected,
            neighbors,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn graph(&self) -> &VertexGraph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertices.len()
    }

    /// Vertices whose support contains every position of `face`, ascending.
    pub fn face_vertices(&self, face: &[Position]) -> Vec<usize> {
        (0..self.vertex_count())
            .filter(|&v| face.iter().all(|p| self.graph.supports[v].contains(*p)))
            .collect()
    }

    /// Primitive direction of the edge leaving `v` off the facet `facet`
    /// (a facet through `v`).
    pub fn edge_direction(&self, v: usize, facet: Position) -> Result<RatVector, ConeError> {
        let w = self.neighbors[v]
            .iter()
            .copied()
            .find(|&w| !self.graph.supports[w].contains(facet))
            .ok_or_else(|| ConeError::NoVertexFound(format!("neighbor of {v} off {facet}")))?;
        let diff: RatVector = self.projected[w]
            .iter()
            .zip(&self.projected[v])
            .map(|(x, y)| x - y)
            .collect();
        Ok(rational::primitive_integer_vector(&diff)
            .into_iter()
            .map(Rational::from_integer)
            .collect())
    }

    /// `true` iff the primitive edge directions at `v` form a lattice basis.
    pub fn is_unimodular_at(&self, v: usize) -> Result<bool, ConeError> {
        let rows = self.graph.supports[v]
            .positions()
            .iter()
            .map(|&f| self.edge_direction(v, f))
            .collect::<Result<Vec<_>, _>>()?;
        let det = determinant(&RatMatrix::from_rows(rows)?)?;
        Ok(det.abs().is_one())
    }

    /// Oracle at the lexicographically smallest vertex on the face.
    pub fn run(&self, face: &[Position]) -> Result<OracleRun, ConeError> {
        let v = *self
            .face_vertices(face)
            .first()
            .ok_or_else(|| ConeError::NoVertexFound(format!("{face:?}")))?;
        self.run_at(face, v)
    }

    /// Feasible-cone MDP of `face` from the edge directions at vertex `v`:
    /// each `d_i` (leaving facet `i` of the face) is projected onto the
    /// orthogonal complement of the span of the edges that stay in the face.
    pub fn run_at(&self, face: &[Position], v: usize) -> Result<OracleRun, ConeError> {
        let support = &self.graph.supports[v];
        if !face.iter().all(|p| support.contains(*p)) {
            return Err(ConeError::VertexNotOnFace(v));
        }
        let leaving = face
            .iter()
            .map(|&f| self.edge_direction(v, f))
            .collect::<Result<Vec<_>, _>>()?;
        let staying = support
            .positions()
            .iter()
            .filter(|p| !face.contains(p))
            .map(|&f| self.edge_direction(v, f))
            .collect::<Result<Vec<_>, _>>()?;

        let projected = if staying.is_empty() {
            leaving
        } else {
            let inv = mat_invert(&gram(&staying)?)?;
            leaving
                .iter()
                .map(|d| {
                    let coords: RatVector = staying.iter().map(|b| dot(b, d)).collect();
                    let weights = inv.mul_vec(&coords)?;
                    let mut u = d.clone();
                    for (b, w) in staying.iter().zip(&weights) {
                        for (x, y) in u.iter_mut().zip(b) {
                            *x -= w * y;
                        }
                    }
                    Ok(u)
                })
                .collect::<Result<Vec<_>, LinAlgError>>()?
        };

        let normals = face
            .iter()
            .map(|&p| normal_vector(self.n, p))
            .collect::<Result<Vec<_>, _>>()?;
        let k = face.len();
        let mut pairing = RatMatrix::zeros(k, k);
        for (j, nj) in normals.iter().enumerate() {
            for (i, ui) in projected.iter().enumerate() {
                pairing.set(j, i, dot(nj, ui));
            }
        }
        Ok(OracleRun {
            vertex: v,
            mdp: Mdp {
                kind: ConeKind::FeasibleCone,
                entries: gram(&projected)?,
            },
            pairing,
        })
    }
}

/// One-shot oracle evaluation; builds the vertex graph of `PTes_n(1)`.
pub fn fcone_mdp_oracle(n: usize, face: &[Position]) -> Result<Mdp, ConeError> {
    Ok(EdgeOracle::new(n)?.run(face)?.mdp)
}

/// Whether the feasible cone of `PTes_n(1)` at vertex `v` is unimodular.
pub fn check_vertex_unimodularity(oracle: &EdgeOracle, v: usize) -> Result<bool, ConeError> {
    oracle.is_unimodular_at(v)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnimodularityCertificate {
    pub n: usize,
    pub vertices: usize,
    pub unimodular: usize,
    pub failures: Vec<usize>,
}

impl UnimodularityCertificate {
    pub fn holds(&self) -> bool {
        self.failures.is_empty() && self.unimodular == self.vertices
    }
}

/// Checks every vertex cone of `PTes_n(1)`.
pub fn certify_total_unimodularity(n: usize) -> Result<UnimodularityCertificate, ConeError> {
    use rayon::prelude::*;
    let oracle = EdgeOracle::new(n)?;
    let verdicts = (0..oracle.vertex_count())
        .into_par_iter()
        .map(|v| oracle.is_unimodular_at(v))
        .collect::<Result<Vec<_>, _>>()?;
    let failures: Vec<usize> = verdicts
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .map(|(v, _)| v)
        .collect();
    Ok(UnimodularityCertificate {
        n,
        vertices: verdicts.len(),
        unimodular: verdicts.len() - failures.len(),
        failures,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InversionReport {
    pub n: usize,
    pub checked: usize,
    pub failures: Vec<FaceSupport>,
}

/// Checks `C M = I` on every face of codimension `1..=max_codim`.
pub fn check_inversion_identity(n: usize, max_codim: usize) -> Result<InversionReport, ConeError> {
    use rayon::prelude::*;
    let mut faces = Vec::new();
    for k in 1..=max_codim.min(dimension(n)) {
        faces.extend(enumerate_faces(n, k)?);
    }
    let ok = faces
        .par_iter()
        .map(|f| {
            let c = ncone_mdp(n, f.positions())?;
            let m = fcone_mdp(n, f.positions())?;
            Ok(c.entries.mul(&m.entries)?.is_identity())
        })
        .collect::<Result<Vec<bool>, ConeError>>()?;
    Ok(InversionReport {
        n,
        checked: faces.len(),
        failures: faces
            .into_iter()
            .zip(ok)
            .filter(|(_, ok)| !ok)
            .map(|(f, _)| f)
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleMismatch {
    pub support: FaceSupport,
    pub vertex: usize,
    pub mdp_match: bool,
    pub side_conditions: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub n: usize,
    pub faces: usize,
    /// Number of (face, base vertex) evaluations.
    pub runs: usize,
    pub failures: Vec<OracleMismatch>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Compares the edge-direction oracle with [`fcone_mdp`] on every face of
/// codimension `1..=max_codim`, at every vertex of the face when
/// `all_vertices` is set and at the first one otherwise.
pub fn oracle_equivalence(
    n: usize,
    max_codim: usize,
    all_vertices: bool,
) -> Result<OracleReport, ConeError> {
    use rayon::prelude::*;
    let oracle = EdgeOracle::new(n)?;
    let mut faces = Vec::new();
    for k in 1..=max_codim.min(dimension(n)) {
        faces.extend(enumerate_faces(n, k)?);
    }
    let per_face = faces
        .par_iter()
        .map(|f| {
            let expected = fcone_mdp(n, f.positions())?.entries;
            let mut vertices = oracle.face_vertices(f.positions());
            if !all_vertices {
                vertices.truncate(1);
            }
            if vertices.is_empty() {
                return Err(ConeError::NoVertexFound(f.to_string()));
            }
            let mut bad = Vec::new();
            for &v in &vertices {
                let run = oracle.run_at(f.positions(), v)?;
                let mdp_match = run.mdp.entries == expected;
                let side_conditions = run.side_conditions_hold();
                if !(mdp_match && side_conditions) {
                    bad.push(OracleMismatch {
                        support: f.clone(),
                        vertex: v,
                        mdp_match,
                        side_conditions,
                    });
                }
            }
            Ok((vertices.len(), bad))
        })
        .collect::<Result<Vec<_>, ConeError>>()?;
    let runs = per_face.iter().map(|(r, _)| r).sum();
    Ok(OracleReport {
        n,
        faces: faces.len(),
        runs,
        failures: per_face.into_iter().flat_map(|(_, b)| b).collect(),
    })
}

/// Integer-valued check used for normal-cone MDPs.
pub fn is_integer_matrix(m: &RatMatrix) -> bool {
    (0..m.rows()).all(|r| m.row(r).iter().all(|v| v.is_integer()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlinalg::{int, rat};

    fn p(i: usize, j: usize) -> Position {
        Position::new(i, j)
    }

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_i64(rows).unwrap()
    }

    #[test]
    fn ncone_examples() {
        assert_eq!(
            ncone_mdp(4, &[p(1, 1), p(1, 2)]).unwrap().entries,
            m(&[&[3, -1], &[-1, 1]])
        );
        assert_eq!(
            ncone_mdp(4, &[p(1, 1), p(2, 2), p(3, 3)]).unwrap().entries,
            m(&[&[3, -1, -1], &[-1, 3, -1], &[-1, -1, 3]])
        );
        assert!(ncone_mdp(4, &[p(1, 3), p(2, 4)]).unwrap().entries.is_identity());
    }

    #[test]
    fn fcone_examples() {
        let f = fcone_mdp(4, &[p(1, 1), p(1, 2)]).unwrap();
        assert_eq!(
            f.entries,
            RatMatrix::from_rows(vec![vec![rat(1, 2), rat(1, 2)], vec![rat(1, 2), rat(3, 2)]])
                .unwrap()
        );
        let f3 = fcone_mdp(4, &[p(1, 1), p(2, 2), p(3, 3)]).unwrap();
        let q = rat(1, 4);
        let h = rat(1, 2);
        assert_eq!(
            f3.entries,
            RatMatrix::from_rows(vec![
                vec![h.clone(), q.clone(), q.clone()],
                vec![q.clone(), h.clone(), q.clone()],
                vec![q.clone(), q.clone(), h.clone()],
            ])
            .unwrap()
        );
        assert!(fcone_mdp(5, &[p(1, 2), p(2, 4), p(3, 5)]).unwrap().entries.is_identity());
    }

    #[test]
    fn normal_diagonals() {
        for n in 3..=6 {
            for f in crate::tesler::facet_positions(n) {
                let c = ncone_mdp(n, &[f]).unwrap();
                let expected = if f.is_diagonal() { n as i64 - 1 } else { 1 };
                assert_eq!(c.get(0, 0), &int(expected));
            }
        }
    }

    #[test]
    fn oracle_single_off_diagonal_facet() {
        let run = EdgeOracle::new(3).unwrap().run(&[p(1, 2)]).unwrap();
        assert_eq!(run.mdp.entries, m(&[&[1]]));
        assert!(run.side_conditions_hold());
    }

    #[test]
    fn oracle_matches_inversion_n3_codim2() {
        let oracle = EdgeOracle::new(3).unwrap();
        for face in enumerate_faces(3, 2).unwrap() {
            let run = oracle.run(face.positions()).unwrap();
            assert_eq!(run.mdp.entries, fcone_mdp(3, face.positions()).unwrap().entries, "{face}");
            assert!(run.side_conditions_hold(), "{face}");
        }
    }

    #[test]
    fn oracle_rejects_vertex_off_face() {
        let oracle = EdgeOracle::new(3).unwrap();
        let face = [p(1, 1)];
        let off = (0..oracle.vertex_count())
            .find(|v| !oracle.face_vertices(&face).contains(v))
            .unwrap();
        assert_eq!(oracle.run_at(&face, off), Err(ConeError::VertexNotOnFace(off)));
    }

    #[test]
    fn inversion_and_oracle_sweeps() {
        let inv = check_inversion_identity(4, 3).unwrap();
        assert_eq!(inv.checked, 9 + 35 + 76);
        assert!(inv.failures.is_empty());
        let rep = oracle_equivalence(3, 3, true).unwrap();
        assert_eq!(rep.faces, 5 + 9 + 6);
        assert!(rep.passed(), "{:?}", rep.failures);
        assert!(rep.runs > rep.faces);
    }

    #[test]
    fn unimodular_small() {
        for n in 2..=4 {
            let cert = certify_total_unimodularity(n).unwrap();
            assert!(cert.holds(), "n={n}");
            assert_eq!(cert.vertices, (1..=n).product::<usize>());
        }
        let oracle = EdgeOracle::new(2).unwrap();
        assert_eq!(oracle.vertex_count(), 2);
        assert!(check_vertex_unimodularity(&oracle, 0).unwrap());
        assert_eq!(dimension(2), 1);
    }
}
