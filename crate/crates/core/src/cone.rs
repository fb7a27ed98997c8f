//! Rational polyhedral cones, Hilbert bases, and the semigroup-generation
//! hypothesis used to certify very ample embeddings.

use crate::exec;
use crate::lattice::{Int, IntMatrix, IntVector, Rat, Sublattice};
use crate::polytope::{convex_hull, LatticePolytope, PointConfiguration};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConeError {
    #[error("cone is not pointed")]
    NotPointed,
    #[error("a generator lies outside the cone")]
    GeneratorOutsideCone,
    #[error("the given point is not a vertex")]
    NotAVertex,
    #[error("operation requires a full-dimensional configuration")]
    NotFullDimensional,
}

/// Rational polyhedral cone with exact V- and H-representations.
///
/// Generators are reduced to the primitive extreme rays. The intrinsic model
/// lives in a basis of the cone's saturated linear span, where the cone is
/// full-dimensional; the H-representation is kept there.
#[derive(Clone, Debug)]
pub struct Cone {
    ambient_dim: usize,
    rays: Vec<IntVector>,
    span: Sublattice,
    intrinsic_rays: Vec<IntVector>,
    /// inward facet normals of the intrinsic (full-dimensional) cone
    intrinsic_facets: Vec<IntVector>,
    pointed: bool,
}

impl Cone {
    /// Cone spanned by arbitrary generators (zero vectors are dropped; an
    /// empty set gives the zero cone).
    pub fn from_generators(ambient_dim: usize, generators: &[IntVector]) -> Cone {
        let mut gens: Vec<IntVector> = generators
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.primitive())
            .collect();
        gens.sort();
        gens.dedup();

        if gens.is_empty() {
            return Cone {
                ambient_dim,
                rays: Vec::new(),
                span: Sublattice::zero(ambient_dim),
                intrinsic_rays: Vec::new(),
                intrinsic_facets: Vec::new(),
                pointed: true,
            };
        }

        let span = Sublattice::spanned_by(ambient_dim, &gens).saturate();
        let s = span.rank();
        let intrinsic: Vec<IntVector> = gens
            .iter()
            .map(|g| {
                span.integral_coordinates(g)
                    .expect("generator lies in the saturated span")
            })
            .collect();

        let facets = dual_extreme_rays(&intrinsic, s);
        let pointed = IntMatrix::from_rows(s, &facets).rank() == s;

        // extreme rays: generators lying on s-1 independent facets
        let mut keep: Vec<usize> = Vec::new();
        for (i, g) in intrinsic.iter().enumerate() {
            let active: Vec<IntVector> = facets
                .iter()
                .filter(|u| u.dot(g).is_zero())
                .cloned()
                .collect();
            let extreme = if s == 1 {
                true
            } else {
                IntMatrix::from_rows(s, &active).rank() == s - 1
            };
            if extreme {
                keep.push(i);
            }
        }
        // a non-pointed cone has no extreme rays; keep the generators as is
        let (rays, intrinsic_rays) = if pointed {
            (
                keep.iter().map(|&i| gens[i].clone()).collect(),
                keep.iter().map(|&i| intrinsic[i].clone()).collect(),
            )
        } else {
            (gens, intrinsic)
        };

        Cone {
            ambient_dim,
            rays,
            span,
            intrinsic_rays,
            intrinsic_facets: facets,
            pointed,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Dimension of the cone (rank of its linear span).
    pub fn dim(&self) -> usize {
        self.span.rank()
    }

    /// Primitive extreme rays (for pointed cones).
    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn span(&self) -> &Sublattice {
        &self.span
    }

    pub fn is_pointed(&self) -> bool {
        self.pointed
    }

    pub(crate) fn intrinsic_rays(&self) -> &[IntVector] {
        &self.intrinsic_rays
    }

    pub(crate) fn intrinsic_facets(&self) -> &[IntVector] {
        &self.intrinsic_facets
    }

    /// Exact membership. The span is saturated, so an integer point of the
    /// rational span has integral coordinates in the span basis.
    pub fn contains(&self, v: &IntVector) -> bool {
        assert_eq!(v.len(), self.ambient_dim);
        if v.is_zero() {
            return true;
        }
        if self.dim() == 0 {
            return false;
        }
        let Some(y) = self.span.integral_coordinates(v) else {
            return false;
        };
        self.intrinsic_contains(&y)
    }

    /// Ambient inward normals: intrinsic facets lifted plus both signs of a
    /// basis of the span's annihilator.
    pub fn inward_normals(&self) -> Vec<IntVector> {
        let mut out = Vec::new();
        let s = self.dim();
        if s > 0 {
            let b = self.span.basis_matrix();
            for u in &self.intrinsic_facets {
                let lifted = b
                    .solve_integer(u)
                    .expect("saturated span admits an integral lift");
                out.push(lifted.primitive());
            }
        }
        for w in self.span.annihilator().basis() {
            out.push(w.clone());
            out.push(w.neg());
        }
        out
    }

    fn intrinsic_contains(&self, y: &IntVector) -> bool {
        self.intrinsic_facets
            .iter()
            .all(|u| !u.dot(y).is_negative())
    }

    fn to_ambient(&self, y: &IntVector) -> IntVector {
        let mut p = IntVector::zeros(self.ambient_dim);
        for (j, b) in self.span.basis().iter().enumerate() {
            p = p.add(&b.scale(y.get(j)));
        }
        p
    }
}

/// Extreme rays of the dual {u : u.g >= 0 for all g}, for a spanning set in
/// Z^s: every extreme ray is the kernel of s-1 independent generator
/// constraints.
fn dual_extreme_rays(generators: &[IntVector], s: usize) -> Vec<IntVector> {
    if s == 0 {
        return Vec::new();
    }
    if s == 1 {
        // generators span Q; dual is 0, one ray, or a half line per sign
        let mut out = BTreeSet::new();
        let pos = generators.iter().any(|g| g.get(0).is_positive());
        let neg = generators.iter().any(|g| g.get(0).is_negative());
        if !neg {
            out.insert(IntVector::from_i64s(&[1]));
        }
        if !pos {
            out.insert(IntVector::from_i64s(&[-1]));
        }
        return out.into_iter().collect();
    }
    let mut out: BTreeSet<IntVector> = BTreeSet::new();
    let m = generators.len();
    let mut subset: Vec<usize> = (0..s - 1).collect();
    loop {
        let rows: Vec<IntVector> = subset.iter().map(|&i| generators[i].clone()).collect();
        let mat = IntMatrix::from_rows(s, &rows);
        if mat.rank() == s - 1 {
            let kernel = mat.integer_kernel();
            debug_assert_eq!(kernel.len(), 1);
            let w = kernel[0].primitive();
            if generators.iter().all(|g| !w.dot(g).is_negative()) {
                out.insert(w.clone());
            }
            let wn = w.neg();
            if generators.iter().all(|g| !wn.dot(g).is_negative()) {
                out.insert(wn);
            }
        }
        if !advance(&mut subset, m) {
            break;
        }
    }
    out.into_iter().collect()
}

fn advance(subset: &mut [usize], m: usize) -> bool {
    let r = subset.len();
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

/// Cone over P - v, generated by the edge directions at the vertex.
pub fn vertex_cone(p: &LatticePolytope, v: &IntVector) -> Result<Cone, ConeError> {
    let Some(vi) = p.vertex_index(v) else {
        return Err(ConeError::NotAVertex);
    };
    let gens: Vec<IntVector> = p
        .neighbors(vi)
        .into_iter()
        .map(|w| p.vertices()[w].sub(v))
        .collect();
    Ok(Cone::from_generators(p.ambient_dim(), &gens))
}

/// The unique minimal generating set of the semigroup C ∩ Z^n.
///
/// Candidates come from the half-open fundamental parallelepipeds of all
/// linearly independent subsets of extreme rays (these cover the cone), plus
/// the rays themselves; the candidates generate, so the Hilbert basis is
/// exactly their irreducible members.
pub fn hilbert_basis(c: &Cone) -> Result<Vec<IntVector>, ConeError> {
    if !c.is_pointed() {
        return Err(ConeError::NotPointed);
    }
    let s = c.dim();
    if s == 0 {
        return Ok(Vec::new());
    }
    let rays = c.intrinsic_rays().to_vec();

    let mut candidates: BTreeSet<IntVector> = rays.iter().cloned().collect();
    let m = rays.len();
    for size in 1..=s.min(m) {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            let sel: Vec<IntVector> = subset.iter().map(|&i| rays[i].clone()).collect();
            if IntMatrix::from_rows(s, &sel).rank() == size {
                for pt in parallelepiped_points(&sel, s) {
                    if !pt.is_zero() {
                        candidates.insert(pt);
                    }
                }
            }
            if !advance(&mut subset, m) {
                break;
            }
        }
    }

    // strictly positive grading on the cone minus the origin
    let grading = intrinsic_grading(c);
    let mut sorted: Vec<IntVector> = candidates.into_iter().collect();
    sorted.sort_by_key(|x| grading.dot(x));

    let mut basis: Vec<IntVector> = Vec::new();
    for x in &sorted {
        let reducible = sorted.iter().any(|y| {
            y != x && grading.dot(y) < grading.dot(x) && {
                let z = x.sub(y);
                c.intrinsic_contains(&z)
            }
        });
        if !reducible {
            basis.push(x.clone());
        }
    }

    let mut out: Vec<IntVector> = basis.iter().map(|y| c.to_ambient(y)).collect();
    out.sort();
    Ok(out)
}

/// Sum of the intrinsic facet normals: a linear form strictly positive on
/// every nonzero point of a pointed full-dimensional cone.
fn intrinsic_grading(c: &Cone) -> IntVector {
    let s = c.dim();
    let mut g = IntVector::zeros(s);
    for u in c.intrinsic_facets() {
        g = g.add(u);
    }
    g
}

/// Lattice points of { sum t_i b_i : 0 <= t_i < 1 } for independent b_i.
fn parallelepiped_points(basis: &[IntVector], s: usize) -> Vec<IntVector> {
    let k = basis.len();
    // bounding box of the closed parallelepiped
    let mut lo = vec![Int::zero(); s];
    let mut hi = vec![Int::zero(); s];
    for j in 0..s {
        for b in basis {
            let e = b.get(j);
            if e.is_negative() {
                lo[j] += e;
            } else {
                hi[j] += e;
            }
        }
    }
    // columns are the basis vectors; solve B t = x for each candidate
    let bmat = IntMatrix::from_fn(s, k, |i, j| basis[j].get(i).clone());
    let mut out = Vec::new();
    let mut cursor = lo.clone();
    'outer: loop {
        let x = IntVector::new(cursor.clone());
        let rhs: Vec<Rat> = x
            .entries()
            .iter()
            .map(|e| Rat::from_integer(e.clone()))
            .collect();
        if let Some(t) = bmat.solve(&rhs) {
            // solve() picks one solution; with independent columns it is the
            // coordinate vector. Verify residual to reject points off span.
            let consistent = (0..s).all(|i| {
                let mut acc = Rat::zero();
                for (j, tj) in t.iter().enumerate() {
                    acc += tj * Rat::from_integer(bmat.get(i, j).clone());
                }
                acc == rhs[i]
            });
            if consistent
                && t.iter()
                    .all(|ti| !ti.is_negative() && *ti < Rat::one())
            {
                out.push(x);
            }
        }
        for j in 0..s {
            cursor[j] += 1;
            if cursor[j] <= hi[j] {
                continue 'outer;
            }
            cursor[j] = lo[j].clone();
        }
        break;
    }
    out
}

/// Outcome of a generation test, with a witness on failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigroupVerdict {
    pub generates: bool,
    /// a Hilbert basis element not reachable from the generators
    pub missing: Option<IntVector>,
}

/// Decides whether every Hilbert basis element of `c` is a nonnegative
/// integer combination of `gens`.
pub fn semigroup_generates(gens: &[IntVector], c: &Cone) -> Result<SemigroupVerdict, ConeError> {
    if !c.is_pointed() {
        return Err(ConeError::NotPointed);
    }
    let mut use_gens: Vec<IntVector> = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        if !c.contains(g) {
            return Err(ConeError::GeneratorOutsideCone);
        }
        use_gens.push(
            c.span()
                .integral_coordinates(g)
                .expect("generator lies in the cone span"),
        );
    }
    use_gens.sort();
    use_gens.dedup();

    let grading = intrinsic_grading(c);
    // larger generators first shrinks the search
    use_gens.sort_by_key(|g| std::cmp::Reverse(grading.dot(g)));

    let hb = hilbert_basis(c)?;
    for h in &hb {
        let target = c
            .span()
            .integral_coordinates(h)
            .expect("Hilbert element lies in the cone span");
        if !reachable(&target, &use_gens, 0, c, &grading) {
            return Ok(SemigroupVerdict {
                generates: false,
                missing: Some(h.clone()),
            });
        }
    }
    Ok(SemigroupVerdict {
        generates: true,
        missing: None,
    })
}

/// Depth-first search for target = sum c_i g_i with c_i >= 0, pruning on
/// cone membership; the grading bounds each multiplicity.
fn reachable(
    target: &IntVector,
    gens: &[IntVector],
    from: usize,
    c: &Cone,
    grading: &IntVector,
) -> bool {
    if target.is_zero() {
        return true;
    }
    if from == gens.len() {
        return false;
    }
    if !c.intrinsic_contains(target) {
        return false;
    }
    let g = &gens[from];
    let wg = grading.dot(g);
    let wt = grading.dot(target);
    let max_mult = (&wt / &wg).max(Int::zero());
    let mut mult = Int::zero();
    let mut rest = target.clone();
    loop {
        if reachable(&rest, gens, from + 1, c, grading) {
            return true;
        }
        mult += 1;
        if mult > max_mult {
            return false;
        }
        rest = rest.sub(g);
        if rest.is_zero() {
            return true;
        }
    }
}

/// Per-vertex generation check for a configuration.
#[derive(Clone, Debug)]
pub struct VertexSemigroupCheck {
    pub vertex: IntVector,
    pub generated: bool,
    pub missing: Option<IntVector>,
}

#[derive(Clone, Debug)]
pub struct EmbeddingReport {
    pub per_vertex: Vec<VertexSemigroupCheck>,
    pub all_generated: bool,
}

/// For each vertex v of Conv(A), checks that A - v generates the semigroup
/// of the vertex cone. Requires a full-dimensional hull.
pub fn check_embedding_hypothesis(a: &PointConfiguration) -> Result<EmbeddingReport, ConeError> {
    let hull = convex_hull(a);
    if hull.dim() != a.dim() {
        return Err(ConeError::NotFullDimensional);
    }
    let vertices: Vec<IntVector> = hull.vertices().to_vec();
    let per_vertex: Vec<VertexSemigroupCheck> = exec::map_collect(&vertices, |v| {
        let cone = vertex_cone(&hull, v).expect("v is a vertex of its own hull");
        let gens: Vec<IntVector> = a.points().iter().map(|p| p.sub(v)).collect();
        let verdict =
            semigroup_generates(&gens, &cone).expect("translated points lie in the vertex cone");
        VertexSemigroupCheck {
            vertex: v.clone(),
            generated: verdict.generates,
            missing: verdict.missing,
        }
    });
    let all_generated = per_vertex.iter().all(|c| c.generated);
    Ok(EmbeddingReport {
        per_vertex,
        all_generated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn iv(v: &[i64]) -> IntVector {
        IntVector::from_i64s(v)
    }

    fn cone2(gens: &[&[i64]]) -> Cone {
        let g: Vec<IntVector> = gens.iter().map(|v| iv(v)).collect();
        Cone::from_generators(gens[0].len(), &g)
    }

    #[test]
    fn vertex_cone_of_square_at_origin() {
        let p = convex_hull(&fixtures::unit_square());
        let c = vertex_cone(&p, &iv(&[0, 0])).unwrap();
        let mut rays = c.rays().to_vec();
        rays.sort();
        assert_eq!(rays, vec![iv(&[0, 1]), iv(&[1, 0])]);
    }

    #[test]
    fn vertex_cone_of_conic_triangle() {
        let p = convex_hull(&fixtures::cone_over_conic());
        let c = vertex_cone(&p, &iv(&[2, 0])).unwrap();
        let mut rays = c.rays().to_vec();
        rays.sort();
        assert_eq!(rays, vec![iv(&[-2, 1]), iv(&[-1, 0])]);
    }

    #[test]
    fn vertex_cone_of_quadric_prism() {
        let p = convex_hull(&fixtures::quadric_prism_vertices());
        let c = vertex_cone(&p, &iv(&[0, 0, 0, 0])).unwrap();
        assert_eq!(c.dim(), 4);
        assert!(c.is_pointed());
        assert_eq!(c.rays().len(), 4);
    }

    #[test]
    fn hilbert_basis_of_smooth_cone() {
        let c = cone2(&[&[1, 0], &[0, 1]]);
        assert_eq!(hilbert_basis(&c).unwrap(), vec![iv(&[0, 1]), iv(&[1, 0])]);
    }

    #[test]
    fn hilbert_basis_of_singular_quadric_cone() {
        let c = cone2(&[&[0, 1], &[2, -1]]);
        let hb = hilbert_basis(&c).unwrap();
        let expect = vec![iv(&[0, 1]), iv(&[1, 0]), iv(&[2, -1])];
        assert_eq!(hb, expect);
    }

    #[test]
    fn hilbert_basis_of_index_three_cone() {
        let c = cone2(&[&[1, 0], &[1, 3]]);
        let hb = hilbert_basis(&c).unwrap();
        let expect = vec![iv(&[1, 0]), iv(&[1, 1]), iv(&[1, 2]), iv(&[1, 3])];
        assert_eq!(hb, expect);
    }

    #[test]
    fn rejects_non_pointed() {
        let c = cone2(&[&[1, 0], &[-1, 0]]);
        assert!(!c.is_pointed());
        assert_eq!(hilbert_basis(&c), Err(ConeError::NotPointed));
    }

    #[test]
    fn generation_smooth() {
        let c = cone2(&[&[1, 0], &[0, 1]]);
        let v = semigroup_generates(&[iv(&[1, 0]), iv(&[0, 1])], &c).unwrap();
        assert!(v.generates);
    }

    #[test]
    fn generation_with_full_ladder() {
        let c = cone2(&[&[1, 0], &[1, 3]]);
        let gens = [iv(&[1, 0]), iv(&[1, 3]), iv(&[1, 2]), iv(&[1, 1])];
        assert!(semigroup_generates(&gens, &c).unwrap().generates);
    }

    #[test]
    fn generation_fails_with_witness() {
        let c = cone2(&[&[1, 0], &[1, 3]]);
        let v = semigroup_generates(&[iv(&[1, 0]), iv(&[1, 3])], &c).unwrap();
        assert!(!v.generates);
        assert_eq!(v.missing, Some(iv(&[1, 1])));
    }

    #[test]
    fn generator_outside_cone_is_an_error() {
        let c = cone2(&[&[1, 0], &[0, 1]]);
        assert_eq!(
            semigroup_generates(&[iv(&[-1, 0])], &c),
            Err(ConeError::GeneratorOutsideCone)
        );
    }

    #[test]
    fn embedding_hypothesis_fixtures() {
        assert!(check_embedding_hypothesis(&fixtures::quadric_prism())
            .unwrap()
            .all_generated);
        assert!(check_embedding_hypothesis(&fixtures::unit_square())
            .unwrap()
            .all_generated);
        let sparse = PointConfiguration::from_i64s(2, &[&[0, 0], &[3, 0], &[0, 1]]);
        let report = check_embedding_hypothesis(&sparse).unwrap();
        assert!(!report.all_generated);
        let at_origin = report
            .per_vertex
            .iter()
            .find(|c| c.vertex == iv(&[0, 0]))
            .unwrap();
        assert!(!at_origin.generated);
        assert_eq!(at_origin.missing, Some(iv(&[1, 0])));
    }

    #[test]
    fn hilbert_basis_self_generates() {
        for gens in [
            vec![iv(&[1, 0]), iv(&[1, 3])],
            vec![iv(&[0, 1]), iv(&[2, -1])],
            vec![iv(&[2, 1]), iv(&[1, 2])],
        ] {
            let c = Cone::from_generators(2, &gens);
            let hb = hilbert_basis(&c).unwrap();
            assert!(semigroup_generates(&hb, &c).unwrap().generates);
        }
    }

    #[test]
    fn membership_and_normals() {
        let c = cone2(&[&[1, 0], &[1, 3]]);
        assert!(c.contains(&iv(&[2, 3])));
        assert!(!c.contains(&iv(&[0, 1])));
        assert!(!c.contains(&iv(&[-1, 0])));
        // lower-dimensional cone: a single ray in the plane
        let ray = cone2(&[&[1, 1]]);
        assert!(ray.contains(&iv(&[2, 2])));
        assert!(!ray.contains(&iv(&[2, 1])));
        assert!(!ray.contains(&iv(&[-1, -1])));
    }
}
