//! Lattice polytopes with exact vertex/facet duals, face lattices, lattice
//! point enumeration, and the strict combinatorial isomorphism test.
//!
//! Lower-dimensional polytopes are first class: every polytope carries the
//! saturated direction lattice of its affine hull and an intrinsic
//! full-dimensional model expressed in a basis of that lattice, so faces can
//! be re-analyzed on their own terms.

use crate::lattice::{Int, IntMatrix, IntVector, Rat, Sublattice};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("operation requires a full-dimensional polytope")]
    NotFullDimensional,
    #[error("the given point is not a vertex")]
    NotAVertex,
    #[error("polytopes live in different ambient lattices")]
    DimensionMismatch,
    #[error("invalid point configuration: {0}")]
    InvalidConfiguration(String),
}

/// A finite set of distinct lattice points (the exponent set A).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfiguration {
    dim: usize,
    points: Vec<IntVector>,
}

impl PointConfiguration {
    pub fn new(dim: usize, points: Vec<IntVector>) -> Result<Self, PolytopeError> {
        if dim == 0 {
            return Err(PolytopeError::InvalidConfiguration(
                "ambient dimension must be positive".into(),
            ));
        }
        if points.is_empty() {
            return Err(PolytopeError::InvalidConfiguration(
                "point list is empty".into(),
            ));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(PolytopeError::InvalidConfiguration(format!(
                    "point {} has length {}, expected {}",
                    i,
                    p.len(),
                    dim
                )));
            }
        }
        let mut seen = BTreeSet::new();
        for (i, p) in points.iter().enumerate() {
            if !seen.insert(p.clone()) {
                return Err(PolytopeError::InvalidConfiguration(format!(
                    "point {} duplicates an earlier point",
                    i
                )));
            }
        }
        Ok(PointConfiguration { dim, points })
    }

    pub fn from_i64s(dim: usize, points: &[&[i64]]) -> Self {
        Self::new(
            dim,
            points.iter().map(|p| IntVector::from_i64s(p)).collect(),
        )
        .expect("valid configuration literal")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[IntVector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Affine rank of the configuration (dimension of its hull).
    pub fn affine_rank(&self) -> usize {
        let base = &self.points[0];
        let diffs: Vec<IntVector> = self.points.iter().map(|p| p.sub(base)).collect();
        IntMatrix::from_rows(self.dim, &diffs).rank()
    }

    /// Re-expresses the configuration inside the lattice of its affine hull.
    /// Identity when already full-dimensional. Returns the reduced
    /// configuration and, when reduction happened, the direction basis used.
    pub fn re_embedded(&self) -> (PointConfiguration, Option<Sublattice>) {
        let r = self.affine_rank();
        if r == self.dim {
            return (self.clone(), None);
        }
        let base = self.points[0].clone();
        let diffs: Vec<IntVector> = self.points.iter().map(|p| p.sub(&base)).collect();
        let dir = Sublattice::spanned_by(self.dim, &diffs).saturate();
        let reduced: Vec<IntVector> = if r == 0 {
            // a single point; keep a one-dimensional ambient lattice
            vec![IntVector::zeros(1)]
        } else {
            diffs
                .iter()
                .map(|d| {
                    dir.integral_coordinates(d)
                        .expect("difference lies in the saturated direction lattice")
                })
                .collect()
        };
        (
            PointConfiguration::new(r.max(1), reduced).expect("reduced configuration is valid"),
            Some(dir),
        )
    }
}

/// A face, recorded by the parent-vertex indices lying on it.
#[derive(Clone, Debug)]
pub struct Face {
    vertex_indices: Vec<usize>,
    dim: usize,
    direction: Sublattice,
}

impl Face {
    pub fn vertex_indices(&self) -> &[usize] {
        &self.vertex_indices
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn direction(&self) -> &Sublattice {
        &self.direction
    }
}

/// Facet inequality `normal . x >= -offset` with primitive inward normal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: IntVector,
    pub offset: Int,
}

/// Lattice polytope with exact double description and eager face lattice.
#[derive(Clone, Debug)]
pub struct LatticePolytope {
    ambient_dim: usize,
    dim: usize,
    vertices: Vec<IntVector>,
    direction: Sublattice,
    /// coordinates of (vertex - vertices[0]) in the direction basis
    intrinsic_vertices: Vec<IntVector>,
    /// inequalities of the intrinsic model (valid for intrinsic coordinates)
    intrinsic_facets: Vec<Facet>,
    /// ambient inequalities; present exactly when dim == ambient_dim
    ambient_facets: Option<Vec<Facet>>,
    faces: Vec<Face>,
}

/// Exact convex hull: minimal vertex set, irredundant facets, true dimension.
pub fn convex_hull(config: &PointConfiguration) -> LatticePolytope {
    LatticePolytope::from_points(config.dim(), config.points().to_vec())
}

impl LatticePolytope {
    pub fn from_points(ambient_dim: usize, mut points: Vec<IntVector>) -> Self {
        assert!(!points.is_empty(), "hull of an empty set");
        points.sort();
        points.dedup();

        let base = points[0].clone();
        let diffs: Vec<IntVector> = points.iter().map(|p| p.sub(&base)).collect();
        let dim = IntMatrix::from_rows(ambient_dim, &diffs).rank();

        if dim == 0 {
            let faces = vec![Face {
                vertex_indices: vec![0],
                dim: 0,
                direction: Sublattice::zero(ambient_dim),
            }];
            return LatticePolytope {
                ambient_dim,
                dim,
                vertices: vec![base],
                direction: Sublattice::zero(ambient_dim),
                intrinsic_vertices: vec![IntVector::new(Vec::new())],
                intrinsic_facets: Vec::new(),
                ambient_facets: None,
                faces,
            };
        }

        let direction = if dim == ambient_dim {
            Sublattice::full(ambient_dim)
        } else {
            Sublattice::spanned_by(ambient_dim, &diffs).saturate()
        };

        let intrinsic_points: Vec<IntVector> = if dim == ambient_dim {
            diffs.clone()
        } else {
            diffs
                .iter()
                .map(|d| {
                    direction
                        .integral_coordinates(d)
                        .expect("difference lies in the saturated direction lattice")
                })
                .collect()
        };

        let (vertex_idx, facets) = full_dim_hull(&intrinsic_points, dim);

        // vertices in a deterministic order (lex on intrinsic coordinates)
        let mut order: Vec<usize> = vertex_idx;
        order.sort_by(|&a, &b| intrinsic_points[a].cmp(&intrinsic_points[b]));
        let vertices: Vec<IntVector> = order.iter().map(|&i| points[i].clone()).collect();
        let intrinsic_vertices: Vec<IntVector> =
            order.iter().map(|&i| intrinsic_points[i].clone()).collect();

        let ambient_facets = if dim == ambient_dim {
            // intrinsic coords are x - base; shift offsets back
            Some(
                facets
                    .iter()
                    .map(|f| Facet {
                        normal: f.normal.clone(),
                        offset: &f.offset - f.normal.dot(&base),
                    })
                    .collect(),
            )
        } else {
            None
        };

        let faces = build_face_lattice(ambient_dim, &vertices, &intrinsic_vertices, &facets);

        LatticePolytope {
            ambient_dim,
            dim,
            vertices,
            direction,
            intrinsic_vertices,
            intrinsic_facets: facets,
            ambient_facets,
            faces,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[IntVector] {
        &self.vertices
    }

    pub fn direction(&self) -> &Sublattice {
        &self.direction
    }

    /// Facet inequalities: in ambient coordinates when full-dimensional, in
    /// the intrinsic direction-basis coordinates otherwise.
    pub fn facets(&self) -> &[Facet] {
        match &self.ambient_facets {
            Some(f) => f,
            None => &self.intrinsic_facets,
        }
    }

    pub(crate) fn intrinsic_vertices(&self) -> &[IntVector] {
        &self.intrinsic_vertices
    }

    pub(crate) fn base_vertex(&self) -> &IntVector {
        &self.vertices[0]
    }

    /// All faces, graded by dimension, including vertices and the polytope
    /// itself.
    pub fn face_lattice(&self) -> &[Face] {
        &self.faces
    }

    pub fn faces_of_dim(&self, d: usize) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| f.dim == d)
    }

    /// Proper faces only (dimension < dim of the polytope).
    pub fn proper_faces(&self) -> impl Iterator<Item = &Face> {
        let d = self.dim;
        self.faces.iter().filter(move |f| f.dim < d)
    }

    pub fn vertex_index(&self, v: &IntVector) -> Option<usize> {
        self.vertices.iter().position(|w| w == v)
    }

    /// Sub-polytope spanned by a face's vertices.
    pub fn face_polytope(&self, face: &Face) -> LatticePolytope {
        LatticePolytope::from_points(
            self.ambient_dim,
            face.vertex_indices
                .iter()
                .map(|&i| self.vertices[i].clone())
                .collect(),
        )
    }

    /// Intrinsic coordinates of an ambient lattice point, when it lies in
    /// the affine hull (base point at the first vertex).
    pub(crate) fn intrinsic_coords(&self, p: &IntVector) -> Option<IntVector> {
        let d = p.sub(self.base_vertex());
        if self.dim == self.ambient_dim {
            return Some(d);
        }
        if self.dim == 0 {
            return if d.is_zero() {
                Some(IntVector::new(Vec::new()))
            } else {
                None
            };
        }
        self.direction.integral_coordinates(&d)
    }

    /// Exact membership test for lattice points.
    pub fn contains(&self, p: &IntVector) -> bool {
        let Some(y) = self.intrinsic_coords(p) else {
            return false;
        };
        self.intrinsic_facets
            .iter()
            .all(|f| f.normal.dot(&y) + &f.offset >= Int::zero())
    }

    /// Number of integer points in the bounding box that lattice-point
    /// enumeration would scan; a cheap feasibility probe for large inputs.
    pub fn bounding_box_cardinality(&self) -> Int {
        if self.dim == 0 {
            return Int::one();
        }
        let mut total = Int::one();
        for j in 0..self.dim {
            let col: Vec<&Int> = self.intrinsic_vertices.iter().map(|v| v.get(j)).collect();
            let lo = (*col.iter().min().unwrap()).clone();
            let hi = (*col.iter().max().unwrap()).clone();
            total *= hi - lo + 1;
        }
        total
    }

    /// Exactly P ∩ Z^n, via bounding box plus facet filtering.
    pub fn lattice_points(&self) -> Vec<IntVector> {
        if self.dim == 0 {
            return vec![self.vertices[0].clone()];
        }
        let d = self.dim;
        let mut lo = vec![Int::zero(); d];
        let mut hi = vec![Int::zero(); d];
        for j in 0..d {
            let col: Vec<&Int> = self.intrinsic_vertices.iter().map(|v| v.get(j)).collect();
            lo[j] = (*col.iter().min().unwrap()).clone();
            hi[j] = (*col.iter().max().unwrap()).clone();
        }
        let mut out = Vec::new();
        let mut cursor = lo.clone();
        'outer: loop {
            let y = IntVector::new(cursor.clone());
            if self
                .intrinsic_facets
                .iter()
                .all(|f| f.normal.dot(&y) + &f.offset >= Int::zero())
            {
                out.push(self.to_ambient(&y));
            }
            // odometer
            for j in 0..d {
                cursor[j] += 1;
                if cursor[j] <= hi[j] {
                    continue 'outer;
                }
                cursor[j] = lo[j].clone();
            }
            break;
        }
        out.sort();
        out
    }

    /// Ambient point for intrinsic coordinates.
    pub(crate) fn to_ambient(&self, y: &IntVector) -> IntVector {
        let mut p = self.base_vertex().clone();
        if self.dim == self.ambient_dim {
            return p.add(y);
        }
        for (j, b) in self.direction.basis().iter().enumerate() {
            p = p.add(&b.scale(y.get(j)));
        }
        p
    }

    /// True iff |vertices| = dim + 1.
    pub fn is_simplex(&self) -> bool {
        self.vertices.len() == self.dim + 1
    }

    /// True iff every vertex lies on exactly `dim` edges. Requires a
    /// full-dimensional polytope.
    pub fn is_simple(&self) -> Result<bool, PolytopeError> {
        if self.dim != self.ambient_dim {
            return Err(PolytopeError::NotFullDimensional);
        }
        Ok(self.is_simple_intrinsic())
    }

    pub(crate) fn is_simple_intrinsic(&self) -> bool {
        if self.dim == 0 {
            return true;
        }
        let mut edge_count = vec![0usize; self.vertices.len()];
        for f in self.faces_of_dim(1) {
            for &v in &f.vertex_indices {
                edge_count[v] += 1;
            }
        }
        edge_count.iter().all(|&c| c == self.dim)
    }

    /// Indices of vertices adjacent to vertex `v` (sharing an edge).
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for f in self.faces_of_dim(1) {
            if f.vertex_indices.contains(&v) {
                for &w in &f.vertex_indices {
                    if w != v {
                        out.push(w);
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// The translated polytope P - v; `v` must be a vertex.
    pub fn translate_to_vertex(&self, v: &IntVector) -> Result<LatticePolytope, PolytopeError> {
        if self.vertex_index(v).is_none() {
            return Err(PolytopeError::NotAVertex);
        }
        Ok(LatticePolytope::from_points(
            self.ambient_dim,
            self.vertices.iter().map(|w| w.sub(v)).collect(),
        ))
    }

    /// Canonical normal-cone presentation used for strict combinatorial
    /// isomorphism: for each vertex of the model expressed in `basis`
    /// coordinates, the set of primitive inward facet normals at it.
    fn normal_cones_in_basis(&self, basis: &Sublattice) -> Vec<BTreeSet<IntVector>> {
        let base = self.base_vertex();
        let intrinsic: Vec<IntVector> = self
            .vertices
            .iter()
            .map(|v| {
                basis
                    .integral_coordinates(&v.sub(base))
                    .expect("vertex difference lies in the shared direction lattice")
            })
            .collect();
        let (_, facets) = full_dim_hull(&intrinsic, self.dim);
        intrinsic
            .iter()
            .map(|v| {
                facets
                    .iter()
                    .filter(|f| f.normal.dot(v) + &f.offset == Int::zero())
                    .map(|f| f.normal.clone())
                    .collect()
            })
            .collect()
    }
}

/// Strict combinatorial isomorphism: equal direction lattices and equal
/// normal fans computed inside their common dual. Returns the witness
/// bijection (vertex i of `p` -> matched vertex index of `q`) or `None`.
pub fn strictly_comb_isomorphic(
    p: &LatticePolytope,
    q: &LatticePolytope,
) -> Result<Option<Vec<usize>>, PolytopeError> {
    if p.ambient_dim() != q.ambient_dim() {
        return Err(PolytopeError::DimensionMismatch);
    }
    if p.dim() != q.dim() || !p.direction.spans_same(&q.direction) {
        return Ok(None);
    }
    if p.dim() == 0 {
        return Ok(Some(vec![0]));
    }
    // express both in p's direction basis so the dual coordinates agree
    let basis = &p.direction;
    let cones_p = p.normal_cones_in_basis(basis);
    let cones_q = q.normal_cones_in_basis(basis);
    if cones_p.len() != cones_q.len() {
        return Ok(None);
    }
    let mut witness = Vec::with_capacity(cones_p.len());
    let mut used = vec![false; cones_q.len()];
    for cp in &cones_p {
        let mut matched = None;
        for (j, cq) in cones_q.iter().enumerate() {
            if !used[j] && cq == cp {
                matched = Some(j);
                break;
            }
        }
        let Some(j) = matched else {
            return Ok(None);
        };
        used[j] = true;
        witness.push(j);
    }
    Ok(Some(witness))
}

/// Brute-force exact hull of a full-dimensional point set in Z^r:
/// every facet hyperplane is affinely spanned by r of the points, so
/// enumerate r-subsets, keep one-sided hyperplanes, and read vertices off
/// the active-normal ranks.
fn full_dim_hull(points: &[IntVector], r: usize) -> (Vec<usize>, Vec<Facet>) {
    assert!(r >= 1);
    let m = points.len();
    let mut facets: Vec<Facet> = Vec::new();
    let mut seen: BTreeSet<(IntVector, Int)> = BTreeSet::new();

    let mut subset: Vec<usize> = (0..r).collect();
    loop {
        if let Some(normal) = hyperplane_normal(points, &subset, r) {
            let c = normal.dot(&points[subset[0]]);
            let mut all_ge = true;
            let mut all_le = true;
            for p in points {
                let v = normal.dot(p);
                if v < c {
                    all_ge = false;
                }
                if v > c {
                    all_le = false;
                }
                if !all_ge && !all_le {
                    break;
                }
            }
            // one-sided and not all-coplanar (the point set is full-dim)
            if all_ge != all_le {
                let (n, off) = if all_ge {
                    (normal.clone(), -c.clone())
                } else {
                    (normal.neg(), c.clone())
                };
                if seen.insert((n.clone(), off.clone())) {
                    facets.push(Facet {
                        normal: n,
                        offset: off,
                    });
                }
            }
        }
        if !next_subset(&mut subset, m, r) {
            break;
        }
    }

    // vertices: points whose active facet normals span Z^r
    let mut vertex_idx = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let active: Vec<IntVector> = facets
            .iter()
            .filter(|f| f.normal.dot(p) + &f.offset == Int::zero())
            .map(|f| f.normal.clone())
            .collect();
        if active.len() >= r && IntMatrix::from_rows(r, &active).rank() == r {
            vertex_idx.push(i);
        }
    }
    (vertex_idx, facets)
}

/// Primitive normal of the hyperplane affinely spanned by `points[subset]`,
/// when that span has dimension exactly r-1.
fn hyperplane_normal(points: &[IntVector], subset: &[usize], r: usize) -> Option<IntVector> {
    let base = &points[subset[0]];
    let diffs: Vec<IntVector> = subset[1..].iter().map(|&i| points[i].sub(base)).collect();
    let m = IntMatrix::from_rows(r, &diffs);
    if m.rank() != r - 1 {
        return None;
    }
    let kernel = m.integer_kernel();
    debug_assert_eq!(kernel.len(), 1);
    Some(kernel[0].primitive())
}

fn next_subset(subset: &mut [usize], m: usize, r: usize) -> bool {
    if r == 0 || r > m {
        return false;
    }
    let mut i = r;
    while i > 0 {
        i -= 1;
        if subset[i] < m - (r - i) {
            subset[i] += 1;
            for j in i + 1..r {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Face lattice by closing the facet vertex sets under intersection; the
/// polytope itself is added as the top face.
fn build_face_lattice(
    ambient_dim: usize,
    vertices: &[IntVector],
    intrinsic_vertices: &[IntVector],
    facets: &[Facet],
) -> Vec<Face> {
    let all: BTreeSet<usize> = (0..vertices.len()).collect();
    let mut sets: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for f in facets {
        let on: BTreeSet<usize> = (0..vertices.len())
            .filter(|&i| f.normal.dot(&intrinsic_vertices[i]) + &f.offset == Int::zero())
            .collect();
        if !on.is_empty() {
            sets.insert(on);
        }
    }
    loop {
        let mut fresh: Vec<BTreeSet<usize>> = Vec::new();
        let list: Vec<&BTreeSet<usize>> = sets.iter().collect();
        for i in 0..list.len() {
            for j in i + 1..list.len() {
                let inter: BTreeSet<usize> = list[i].intersection(list[j]).cloned().collect();
                if !inter.is_empty() && !sets.contains(&inter) {
                    fresh.push(inter);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        sets.extend(fresh);
    }
    sets.insert(all);

    let mut faces: Vec<Face> = sets
        .into_iter()
        .map(|s| {
            let idx: Vec<usize> = s.into_iter().collect();
            let base = &vertices[idx[0]];
            let diffs: Vec<IntVector> = idx.iter().map(|&i| vertices[i].sub(base)).collect();
            let span = Sublattice::spanned_by(ambient_dim, &diffs);
            let dim = span.rank();
            let direction = span.saturate();
            Face {
                vertex_indices: idx,
                dim,
                direction,
            }
        })
        .collect();
    faces.sort_by(|a, b| {
        a.dim
            .cmp(&b.dim)
            .then_with(|| a.vertex_indices.cmp(&b.vertex_indices))
    });
    faces
}

/// Rational barycentric coordinates of `p` with respect to simplex vertices
/// (all in the same coordinates); `None` when `p` is outside the simplex.
pub(crate) fn barycentric_coords(
    simplex_vertices: &[IntVector],
    p: &IntVector,
) -> Option<Vec<Rat>> {
    let d = p.len();
    let k = simplex_vertices.len();
    // rows: coordinates plus the affine constraint sum(lambda) = 1
    let m = IntMatrix::from_fn(d + 1, k, |i, j| {
        if i < d {
            simplex_vertices[j].get(i).clone()
        } else {
            Int::one()
        }
    });
    let mut rhs: Vec<Rat> = p
        .entries()
        .iter()
        .map(|e| Rat::from_integer(e.clone()))
        .collect();
    rhs.push(Rat::one());
    let sol = m.solve(&rhs)?;
    if sol.iter().any(|l| l.is_negative()) {
        return None;
    }
    Some(sol)
}
