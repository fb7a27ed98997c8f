//! Detection and verification of twisted Cayley sum structure: lattice
//! surjections under which the configuration splits into strictly
//! combinatorially isomorphic blocks over the vertices of the image
//! polytope. Each such structure corresponds, dually, to a toric fibration.

use crate::exec;
use crate::lattice::{quotient_map, IntVector, LatticeMap, Sublattice};
use crate::polytope::{
    convex_hull, strictly_comb_isomorphic, LatticePolytope, PointConfiguration,
};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CayleyError {
    #[error("projection is not a lattice surjection")]
    NotSurjective,
    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),
}

/// One block of a Cayley structure: the configuration points over a single
/// vertex of the image polytope, and their hull.
#[derive(Clone, Debug)]
pub struct CayleyBlock {
    pub image_vertex: IntVector,
    pub points: Vec<IntVector>,
    pub hull: LatticePolytope,
}

/// A verified twisted Cayley sum presentation of a configuration.
#[derive(Clone, Debug)]
pub struct CayleyStructure {
    projection: LatticeMap,
    image: LatticePolytope,
    blocks: Vec<CayleyBlock>,
    kernel: Sublattice,
}

impl CayleyStructure {
    pub fn projection(&self) -> &LatticeMap {
        &self.projection
    }

    /// Image polytope S = Conv(pi(A)).
    pub fn image(&self) -> &LatticePolytope {
        &self.image
    }

    pub fn blocks(&self) -> &[CayleyBlock] {
        &self.blocks
    }

    /// ker(pi): the common direction lattice of the blocks.
    pub fn kernel(&self) -> &Sublattice {
        &self.kernel
    }

    /// The sublattice of the dual side inducing the corresponding fibration
    /// of the normal fan: the annihilator of ker(pi). Its rank equals
    /// dim(image), the dimension of the fiber.
    pub fn fibration_sublattice(&self) -> Sublattice {
        self.kernel.annihilator()
    }
}

/// First failed condition of a candidate projection, by name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CayleyFailure {
    /// the image polytope is not a simplex
    ImageNotSimplex { vertices: usize, dim: usize },
    /// a vertex of the image has no configuration point over it
    EmptyBlock { image_vertex: IntVector },
    /// a configuration point escapes the hull of the blocks
    PointOutsideBlocks { point: IntVector },
    /// two block hulls are not strictly combinatorially isomorphic
    BlocksNotIsomorphic { first: usize, second: usize },
}

impl std::fmt::Display for CayleyFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CayleyFailure::ImageNotSimplex { vertices, dim } => write!(
                f,
                "image polytope is not a simplex ({} vertices, dimension {})",
                vertices, dim
            ),
            CayleyFailure::EmptyBlock { image_vertex } => {
                write!(f, "no point over image vertex {}", image_vertex)
            }
            CayleyFailure::PointOutsideBlocks { point } => {
                write!(f, "point {} lies outside the hull of the blocks", point)
            }
            CayleyFailure::BlocksNotIsomorphic { first, second } => write!(
                f,
                "blocks {} and {} are not strictly combinatorially isomorphic",
                first, second
            ),
        }
    }
}

/// Outcome of `verify_cayley`.
#[derive(Clone, Debug)]
pub enum CayleyOutcome {
    Verified(Box<CayleyStructure>),
    Rejected(CayleyFailure),
}

impl CayleyOutcome {
    pub fn verified(self) -> Option<CayleyStructure> {
        match self {
            CayleyOutcome::Verified(s) => Some(*s),
            CayleyOutcome::Rejected(_) => None,
        }
    }

    pub fn is_verified(&self) -> bool {
        matches!(self, CayleyOutcome::Verified(_))
    }
}

/// Checks the Cayley conditions for a given surjection, in order: the image
/// is a simplex with one block per vertex, the blocks are nonempty, every
/// point lies in the hull of the blocks, and the block hulls are pairwise
/// strictly combinatorially isomorphic.
pub fn verify_cayley(
    a: &PointConfiguration,
    pi: &LatticeMap,
) -> Result<CayleyOutcome, CayleyError> {
    build_structure(a, pi, true)
}

/// As `verify_cayley` but without requiring the image to be a simplex
/// (general twisted Cayley sums have an arbitrary image polytope).
fn build_structure(
    a: &PointConfiguration,
    pi: &LatticeMap,
    require_simplex: bool,
) -> Result<CayleyOutcome, CayleyError> {
    if pi.domain_rank() != a.dim() || !pi.is_surjective() {
        return Err(CayleyError::NotSurjective);
    }
    let k = pi.codomain_rank();
    let images: Vec<IntVector> = a.points().iter().map(|p| pi.apply(p)).collect();
    let image = LatticePolytope::from_points(k, images.clone());

    if require_simplex && !image.is_simplex() {
        return Ok(CayleyOutcome::Rejected(CayleyFailure::ImageNotSimplex {
            vertices: image.vertices().len(),
            dim: image.dim(),
        }));
    }

    let mut blocks: Vec<CayleyBlock> = Vec::new();
    for v in image.vertices() {
        let points: Vec<IntVector> = a
            .points()
            .iter()
            .zip(&images)
            .filter(|(_, img)| *img == v)
            .map(|(p, _)| p.clone())
            .collect();
        if points.is_empty() {
            return Ok(CayleyOutcome::Rejected(CayleyFailure::EmptyBlock {
                image_vertex: v.clone(),
            }));
        }
        let hull = LatticePolytope::from_points(a.dim(), points.clone());
        blocks.push(CayleyBlock {
            image_vertex: v.clone(),
            points,
            hull,
        });
    }

    // every point of A must lie in the hull of the union of the blocks
    let union: Vec<IntVector> = blocks
        .iter()
        .flat_map(|b| b.points.iter().cloned())
        .collect();
    let union_hull = LatticePolytope::from_points(a.dim(), union);
    for p in a.points() {
        if !union_hull.contains(p) {
            return Ok(CayleyOutcome::Rejected(CayleyFailure::PointOutsideBlocks {
                point: p.clone(),
            }));
        }
    }

    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            let iso = strictly_comb_isomorphic(&blocks[i].hull, &blocks[j].hull)
                .expect("blocks share the ambient lattice");
            if iso.is_none() {
                return Ok(CayleyOutcome::Rejected(CayleyFailure::BlocksNotIsomorphic {
                    first: i,
                    second: j,
                }));
            }
        }
    }

    Ok(CayleyOutcome::Verified(Box::new(CayleyStructure {
        kernel: pi.kernel(),
        projection: pi.clone(),
        image,
        blocks,
    })))
}

/// Enumerates every twisted Cayley sum presentation of a simple,
/// full-dimensional configuration.
///
/// Candidate kernels are the direction lattices of classes of proper faces
/// of positive dimension: a class is viable when it has at least two
/// members that are pairwise vertex-disjoint, pairwise strictly
/// combinatorially isomorphic, and jointly contain every vertex. Each
/// candidate kernel is then verified from scratch through the quotient
/// projection. For a simplex hull the identity projection is included.
/// Results are sorted by (kernel rank, kernel basis).
pub fn enumerate_cayley_structures(
    a: &PointConfiguration,
) -> Result<Vec<CayleyStructure>, CayleyError> {
    let hull = convex_hull(a);
    let n = a.dim();
    if hull.dim() != n {
        return Err(CayleyError::HypothesisViolation(
            "configuration does not span the ambient lattice".into(),
        ));
    }
    if !hull.is_simple_intrinsic() {
        return Err(CayleyError::HypothesisViolation(
            "hull is not a simple polytope".into(),
        ));
    }

    // group proper positive-dimensional faces by direction lattice
    let mut classes: BTreeMap<Vec<Vec<crate::lattice::Int>>, Vec<usize>> = BTreeMap::new();
    for (idx, face) in hull.face_lattice().iter().enumerate() {
        if face.dim() == 0 || face.dim() >= n {
            continue;
        }
        classes
            .entry(face.direction().canonical_key())
            .or_default()
            .push(idx);
    }

    let candidates: Vec<Vec<usize>> = classes.into_values().collect();
    let vertex_count = hull.vertices().len();

    let verified: Vec<Option<CayleyStructure>> = exec::map_collect(&candidates, |face_idxs| {
        if face_idxs.len() < 2 {
            return None;
        }
        let faces: Vec<_> = face_idxs
            .iter()
            .map(|&i| &hull.face_lattice()[i])
            .collect();
        // pairwise vertex-disjoint and jointly covering every vertex
        let mut covered = vec![false; vertex_count];
        for f in &faces {
            for &v in f.vertex_indices() {
                if covered[v] {
                    return None;
                }
                covered[v] = true;
            }
        }
        if !covered.iter().all(|&c| c) {
            return None;
        }
        // pairwise strictly combinatorially isomorphic
        let polys: Vec<LatticePolytope> = faces.iter().map(|f| hull.face_polytope(f)).collect();
        for i in 0..polys.len() {
            for j in i + 1..polys.len() {
                strictly_comb_isomorphic(&polys[i], &polys[j])
                    .expect("faces share the ambient lattice")?;
            }
        }
        let kernel = faces[0].direction().clone();
        let pi = quotient_map(n, &kernel).expect("face direction lattices are saturated");
        build_structure(a, &pi, false)
            .ok()
            .and_then(CayleyOutcome::verified)
    });

    let mut out: Vec<CayleyStructure> = verified.into_iter().flatten().collect();

    if hull.is_simplex() {
        let identity = LatticeMap::identity(n);
        if let Ok(CayleyOutcome::Verified(s)) = build_structure(a, &identity, false) {
            out.push(*s);
        }
    }

    out.sort_by(|x, y| {
        x.kernel()
            .rank()
            .cmp(&y.kernel().rank())
            .then_with(|| x.kernel().canonical_key().cmp(&y.kernel().canonical_key()))
    });
    Ok(out)
}

/// Candidate-kernel sweep used as an independent completeness oracle in
/// tests: every saturated span of a nonempty subset of edge directions, of
/// rank strictly between 0 and n.
pub fn brute_force_kernel_candidates(hull: &LatticePolytope) -> Vec<Sublattice> {
    let n = hull.ambient_dim();
    let mut edge_dirs: Vec<IntVector> = hull
        .faces_of_dim(1)
        .map(|f| {
            let vs = f.vertex_indices();
            hull.vertices()[vs[1]].sub(&hull.vertices()[vs[0]]).primitive()
        })
        .collect();
    edge_dirs.sort();
    edge_dirs.dedup();
    let m = edge_dirs.len();
    assert!(m < 20, "edge-direction sweep is for small fixtures");
    let mut seen: BTreeMap<Vec<Vec<crate::lattice::Int>>, Sublattice> = BTreeMap::new();
    for mask in 1u32..(1 << m) {
        let sel: Vec<IntVector> = (0..m)
            .filter(|&k| mask >> k & 1 == 1)
            .map(|k| edge_dirs[k].clone())
            .collect();
        let lat = Sublattice::spanned_by(n, &sel).saturate();
        if lat.rank() == 0 || lat.rank() >= n {
            continue;
        }
        seen.entry(lat.canonical_key()).or_insert(lat);
    }
    seen.into_values().collect()
}
