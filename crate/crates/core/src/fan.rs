//! Normal fans, Picard-number-one Cartier data, the line criterion, orbit
//! curve degrees, and the combinatorial fibration test. This is the fan-side
//! mirror used to cross-check the polytope-side pipeline.

use crate::cone::Cone;
use crate::lattice::{quotient_map, Int, IntMatrix, IntVector, Rat, RatVector, Sublattice};
use crate::polytope::LatticePolytope;
use num_integer::Integer as NumInteger;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FanError {
    #[error("operation requires a full-dimensional polytope")]
    NotFullDimensional,
    #[error("fan does not have Picard number one")]
    WrongPicardNumber,
    #[error("vector does not lie in the relative interior of a proper cone")]
    NotInterior,
    #[error("the sublattice does not induce a fibration")]
    NotAFibration,
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

/// Complete rational fan, stored by primitive rays and maximal cones.
#[derive(Clone, Debug)]
pub struct Fan {
    ambient_dim: usize,
    rays: Vec<IntVector>,
    max_cones: Vec<Vec<usize>>,
    simplicial: bool,
}

impl Fan {
    /// Validates the structure: primitive distinct rays, full-dimensional
    /// maximal cones meeting in common faces, every ridge shared by exactly
    /// two maximal cones, and a connected ridge graph. Completeness is
    /// asserted structurally, not by volume.
    pub fn new(
        ambient_dim: usize,
        rays: Vec<IntVector>,
        max_cones: Vec<Vec<usize>>,
    ) -> Result<Fan, FanError> {
        if ambient_dim == 0 {
            return Ok(Fan {
                ambient_dim,
                rays: Vec::new(),
                max_cones: vec![Vec::new()],
                simplicial: true,
            });
        }
        let mut seen = BTreeSet::new();
        for r in &rays {
            if r.len() != ambient_dim {
                return Err(FanError::InvalidFan("ray of wrong length".into()));
            }
            if r.is_zero() || *r != r.primitive() {
                return Err(FanError::InvalidFan("rays must be primitive".into()));
            }
            if !seen.insert(r.clone()) {
                return Err(FanError::InvalidFan("duplicate ray".into()));
            }
        }
        let mut cones: Vec<Vec<usize>> = Vec::new();
        for c in &max_cones {
            let mut c = c.clone();
            c.sort_unstable();
            c.dedup();
            if c.iter().any(|&i| i >= rays.len()) {
                return Err(FanError::InvalidFan("cone ray index out of range".into()));
            }
            let vecs: Vec<IntVector> = c.iter().map(|&i| rays[i].clone()).collect();
            if IntMatrix::from_rows(ambient_dim, &vecs).rank() != ambient_dim {
                return Err(FanError::InvalidFan(
                    "maximal cone is not full-dimensional".into(),
                ));
            }
            cones.push(c);
        }
        let simplicial = cones.iter().all(|c| c.len() == ambient_dim);

        let fan = Fan {
            ambient_dim,
            rays,
            max_cones: cones,
            simplicial,
        };
        fan.check_pairwise_faces()?;
        fan.check_structural_completeness()?;
        Ok(fan)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn is_simplicial(&self) -> bool {
        self.simplicial
    }

    pub fn ray_index(&self, v: &IntVector) -> Option<usize> {
        self.rays.iter().position(|r| r == v)
    }

    fn cone_of(&self, idx: &[usize]) -> Cone {
        let gens: Vec<IntVector> = idx.iter().map(|&i| self.rays[i].clone()).collect();
        Cone::from_generators(self.ambient_dim, &gens)
    }

    /// Cones must intersect in common faces: the extreme rays of each
    /// pairwise intersection are exactly the shared rays.
    fn check_pairwise_faces(&self) -> Result<(), FanError> {
        for i in 0..self.max_cones.len() {
            for j in i + 1..self.max_cones.len() {
                let a = &self.max_cones[i];
                let b = &self.max_cones[j];
                let shared: Vec<usize> =
                    a.iter().filter(|x| b.contains(x)).cloned().collect();
                let inter = cone_intersection_rays(
                    &self.cone_of(a),
                    &self.cone_of(b),
                    self.ambient_dim,
                );
                let shared_set: BTreeSet<IntVector> =
                    shared.iter().map(|&k| self.rays[k].clone()).collect();
                if inter != shared_set {
                    return Err(FanError::InvalidFan(format!(
                        "cones {} and {} do not meet in a common face",
                        i, j
                    )));
                }
            }
        }
        Ok(())
    }

    /// Every ridge (facet of a maximal cone) is shared by exactly two
    /// maximal cones and the ridge graph is connected.
    fn check_structural_completeness(&self) -> Result<(), FanError> {
        if self.max_cones.is_empty() {
            return Err(FanError::InvalidFan("no maximal cones".into()));
        }
        if self.ambient_dim == 1 {
            // the two half lines share only the origin
            let mut rays: Vec<IntVector> = self.rays.clone();
            rays.sort();
            if rays == vec![IntVector::from_i64s(&[-1]), IntVector::from_i64s(&[1])]
                && self.max_cones.len() == 2
            {
                return Ok(());
            }
            return Err(FanError::InvalidFan("one-dimensional fan is incomplete".into()));
        }
        let mut ridge_owners: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (ci, c) in self.max_cones.iter().enumerate() {
            for ridge in self.ridges_of(c) {
                ridge_owners.entry(ridge).or_default().push(ci);
            }
        }
        for (ridge, owners) in &ridge_owners {
            if owners.len() != 2 {
                return Err(FanError::InvalidFan(format!(
                    "ridge {:?} is on {} maximal cones, expected 2",
                    ridge,
                    owners.len()
                )));
            }
        }
        // connectivity over the ridge graph
        let n = self.max_cones.len();
        let mut adj = vec![Vec::new(); n];
        for owners in ridge_owners.values() {
            adj[owners[0]].push(owners[1]);
            adj[owners[1]].push(owners[0]);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(c) = stack.pop() {
            for &d in &adj[c] {
                if !seen[d] {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(FanError::InvalidFan("fan is not connected".into()));
        }
        Ok(())
    }

    /// Ray index sets of the facets of a maximal cone.
    fn ridges_of(&self, cone_rays: &[usize]) -> Vec<Vec<usize>> {
        let cone = self.cone_of(cone_rays);
        let normals = cone.inward_normals();
        let mut out = BTreeSet::new();
        for u in &normals {
            let on: Vec<usize> = cone_rays
                .iter()
                .filter(|&&i| u.dot(&self.rays[i]).is_zero())
                .cloned()
                .collect();
            if on.is_empty() || on.len() == cone_rays.len() {
                continue;
            }
            let vecs: Vec<IntVector> = on.iter().map(|&i| self.rays[i].clone()).collect();
            if IntMatrix::from_rows(self.ambient_dim, &vecs).rank() == self.ambient_dim - 1 {
                out.insert(on);
            }
        }
        out.into_iter().collect()
    }
}

/// Extreme rays of the intersection of two cones, via the combined
/// H-representation.
fn cone_intersection_rays(a: &Cone, b: &Cone, dim: usize) -> BTreeSet<IntVector> {
    let mut normals = a.inward_normals();
    normals.extend(b.inward_normals());
    normals.sort();
    normals.dedup();
    let mut out = BTreeSet::new();
    if dim == 1 {
        for cand in [IntVector::from_i64s(&[1]), IntVector::from_i64s(&[-1])] {
            if normals.iter().all(|u| !u.dot(&cand).is_negative()) {
                out.insert(cand);
            }
        }
        return out;
    }
    let m = normals.len();
    if m == 0 {
        return out;
    }
    let mut subset: Vec<usize> = (0..dim - 1).collect();
    loop {
        let rows: Vec<IntVector> = subset.iter().map(|&i| normals[i].clone()).collect();
        let mat = IntMatrix::from_rows(dim, &rows);
        if mat.rank() == dim - 1 {
            let kernel = mat.integer_kernel();
            if kernel.len() == 1 {
                let w = kernel[0].primitive();
                for cand in [w.clone(), w.neg()] {
                    if normals.iter().all(|u| !u.dot(&cand).is_negative()) {
                        out.insert(cand);
                    }
                }
            }
        }
        // advance combination
        let r = subset.len();
        let mut i = r;
        let mut advanced = false;
        while i > 0 {
            i -= 1;
            if subset[i] < m - (r - i) {
                subset[i] += 1;
                for j in i + 1..r {
                    subset[j] = subset[j - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    out
}

/// Inner normal fan of a full-dimensional polytope. Ray i is the primitive
/// normal of facet i (same order as `p.facets()`); maximal cones correspond
/// to vertices.
pub fn normal_fan(p: &LatticePolytope) -> Result<Fan, FanError> {
    if p.dim() != p.ambient_dim() {
        return Err(FanError::NotFullDimensional);
    }
    let rays: Vec<IntVector> = p.facets().iter().map(|f| f.normal.clone()).collect();
    let max_cones: Vec<Vec<usize>> = p
        .vertices()
        .iter()
        .map(|v| {
            p.facets()
                .iter()
                .enumerate()
                .filter(|(_, f)| f.normal.dot(v) + &f.offset == Int::zero())
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    Fan::new(p.ambient_dim(), rays, max_cones)
}

/// Facet offsets of `p` aligned with the rays of `normal_fan(p)`.
pub fn polarization_offsets(p: &LatticePolytope) -> Vec<Int> {
    p.facets().iter().map(|f| f.offset.clone()).collect()
}

/// Least positive multiples making each invariant divisor Cartier, for a
/// complete simplicial fan with n+1 rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartierProfile {
    multiples: Vec<Int>,
}

impl CartierProfile {
    pub fn multiples(&self) -> &[Int] {
        &self.multiples
    }

    pub fn get(&self, i: usize) -> &Int {
        &self.multiples[i]
    }
}

/// For each ray e_i, the least m > 0 such that every maximal cone containing
/// e_i admits u in the dual lattice with <e_j, u> = m [j = i] on its rays.
/// The weighted ray sum identity sum_i e_i / a_i = 0 is verified exactly.
pub fn cartier_multiples(fan: &Fan) -> Result<CartierProfile, FanError> {
    let n = fan.ambient_dim();
    if fan.rays().len() != n + 1 || !fan.is_simplicial() {
        return Err(FanError::WrongPicardNumber);
    }
    let mut multiples = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut a_i = Int::one();
        for cone in fan.max_cones() {
            if !cone.contains(&i) {
                continue;
            }
            // solve <e_j, u> = delta_{ij} over the cone's rays
            let rows: Vec<IntVector> = cone.iter().map(|&j| fan.rays()[j].clone()).collect();
            let mat = IntMatrix::from_rows(n, &rows);
            let rhs: Vec<Rat> = cone
                .iter()
                .map(|&j| if j == i { Rat::one() } else { Rat::zero() })
                .collect();
            let u = mat
                .solve(&rhs)
                .ok_or_else(|| FanError::Inconsistency("singular maximal cone".into()))?;
            for entry in &u {
                a_i = a_i.lcm(entry.denom());
            }
        }
        multiples.push(a_i);
    }
    // sum of e_i / a_i must vanish
    let mut total = RatVector::zeros(n);
    for (i, r) in fan.rays().iter().enumerate() {
        total = total.add(&r.to_rat().scale(&Rat::new(Int::one(), multiples[i].clone())));
    }
    if !total.is_zero() {
        return Err(FanError::Inconsistency(
            "weighted ray sum does not vanish".into(),
        ));
    }
    Ok(CartierProfile { multiples })
}

/// Searches for a proper nonempty ray subset I with sum_{i in I} e_i / a_i
/// integral, provided the polarization is the ample generator (degree
/// sum(offset_i / a_i) equal to one). Subsets are enumerated by size then
/// lexicographically; the first hit is returned.
pub fn line_criterion(
    fan: &Fan,
    profile: &CartierProfile,
    offsets: &[Int],
) -> Result<Option<Vec<usize>>, FanError> {
    let n = fan.ambient_dim();
    if fan.rays().len() != n + 1 {
        return Err(FanError::WrongPicardNumber);
    }
    assert_eq!(offsets.len(), n + 1, "one offset per ray");
    // degree of the polarization against the generating curve class
    let degree: Rat = offsets
        .iter()
        .zip(profile.multiples())
        .map(|(c, a)| Rat::new(c.clone(), a.clone()))
        .sum();
    if !degree.is_integer() {
        return Err(FanError::Inconsistency(
            "polarization degree is not integral".into(),
        ));
    }
    if degree.to_integer() != Int::one() {
        return Ok(None);
    }
    for size in 1..=n {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            let mut total = RatVector::zeros(n);
            for &i in &subset {
                total = total.add(
                    &fan.rays()[i]
                        .to_rat()
                        .scale(&Rat::new(Int::one(), profile.get(i).clone())),
                );
            }
            if total.entries().iter().all(|e| e.is_integer()) {
                return Ok(Some(subset));
            }
            let r = subset.len();
            let m = n + 1;
            let mut i = r;
            let mut advanced = false;
            while i > 0 {
                i -= 1;
                if subset[i] < m - (r - i) {
                    subset[i] += 1;
                    for j in i + 1..r {
                        subset[j] = subset[j - 1] + 1;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }
    Ok(None)
}

/// Degree of the invariant-orbit curve of a primitive one-parameter
/// subgroup against the ample generator: write v = sum m_i / a_i e_i over
/// the minimal cone containing v and return max m_i.
pub fn orbit_curve_degree(
    v: &IntVector,
    fan: &Fan,
    profile: &CartierProfile,
) -> Result<Int, FanError> {
    let n = fan.ambient_dim();
    if fan.rays().len() != n + 1 || !fan.is_simplicial() {
        return Err(FanError::WrongPicardNumber);
    }
    if v.is_zero() {
        return Err(FanError::NotInterior);
    }
    for cone in fan.max_cones() {
        let rows: Vec<IntVector> = cone.iter().map(|&j| fan.rays()[j].clone()).collect();
        // coordinates of v in this cone's rays: solve R^T c = v
        let mat = IntMatrix::from_rows(n, &rows).transpose();
        let rhs: Vec<Rat> = v
            .entries()
            .iter()
            .map(|e| Rat::from_integer(e.clone()))
            .collect();
        let Some(coords) = mat.solve(&rhs) else {
            continue;
        };
        if coords.iter().any(|c| c.is_negative()) {
            continue;
        }
        // v lies in this cone; its support gives the minimal cone
        let mut max_m: Option<Int> = None;
        for (k, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let m = c * Rat::from_integer(profile.get(cone[k]).clone());
            if !m.is_integer() || !m.is_positive() {
                return Err(FanError::Inconsistency(
                    "orbit-curve coefficient is not a positive integer".into(),
                ));
            }
            let m = m.to_integer();
            max_m = Some(match max_m {
                None => m,
                Some(prev) => prev.max(m),
            });
        }
        return max_m.ok_or(FanError::NotInterior);
    }
    Err(FanError::NotInterior)
}

/// Per-cone split of a fibration: fiber rays lie in the sublattice's span,
/// base rays span a cone meeting it only at the origin.
#[derive(Clone, Debug)]
pub struct FibrationSplit {
    pub per_cone: Vec<ConeSplit>,
}

#[derive(Clone, Debug)]
pub struct ConeSplit {
    pub fiber_rays: Vec<usize>,
    pub base_rays: Vec<usize>,
}

/// Combinatorial fibration test: the sublattice must be primitive and every
/// maximal cone must split as (rays inside Δ_Q) + (rays whose cone meets
/// Δ_Q only at 0). Returns the decomposition, or `None`.
pub fn check_fibration(fan: &Fan, delta: &Sublattice) -> Option<FibrationSplit> {
    assert_eq!(delta.ambient_rank(), fan.ambient_dim());
    assert!(fan.is_simplicial(), "fibration test requires a simplicial fan");
    if !delta.is_primitive() {
        return None;
    }
    let n = fan.ambient_dim();
    let r = delta.rank();
    let quotient = if r < n {
        Some(quotient_map(n, delta).expect("delta is primitive"))
    } else {
        None
    };
    let mut per_cone = Vec::with_capacity(fan.max_cones().len());
    for cone in fan.max_cones() {
        let (fiber_rays, base_rays): (Vec<usize>, Vec<usize>) = cone
            .iter()
            .partition(|&&i| delta.contains_in_span(&fan.rays()[i]));
        if r == n {
            if !base_rays.is_empty() {
                return None;
            }
        } else {
            let q = quotient.as_ref().unwrap();
            let projected: Vec<IntVector> = base_rays
                .iter()
                .map(|&i| q.apply(&fan.rays()[i]))
                .collect();
            if projected.iter().any(|p| p.is_zero()) {
                return None;
            }
            let image_cone = Cone::from_generators(n - r, &projected);
            if !image_cone.is_pointed() {
                return None;
            }
        }
        per_cone.push(ConeSplit {
            fiber_rays,
            base_rays,
        });
    }
    Some(FibrationSplit { per_cone })
}

/// Fiber fan (inside Δ, re-expressed in its basis) and base fan (in the
/// quotient lattice) of a verified fibration.
pub fn fiber_and_base(fan: &Fan, delta: &Sublattice) -> Result<(Fan, Fan), FanError> {
    let Some(split) = check_fibration(fan, delta) else {
        return Err(FanError::NotAFibration);
    };
    let n = fan.ambient_dim();
    let r = delta.rank();

    // fiber: distinct fiber parts, each of full rank in delta
    let mut fiber_cones: BTreeSet<Vec<IntVector>> = BTreeSet::new();
    for cs in &split.per_cone {
        if cs.fiber_rays.len() != r {
            return Err(FanError::Inconsistency(
                "fiber part of a maximal cone has wrong rank".into(),
            ));
        }
        let in_basis: Vec<IntVector> = cs
            .fiber_rays
            .iter()
            .map(|&i| {
                delta
                    .integral_coordinates(&fan.rays()[i])
                    .expect("fiber ray lies in the primitive sublattice")
            })
            .collect();
        let mut sorted = in_basis;
        sorted.sort();
        fiber_cones.insert(sorted);
    }
    let mut fiber_rays: Vec<IntVector> = fiber_cones
        .iter()
        .flat_map(|c| c.iter().cloned())
        .collect();
    fiber_rays.sort();
    fiber_rays.dedup();
    let fiber_max: Vec<Vec<usize>> = fiber_cones
        .iter()
        .map(|c| {
            c.iter()
                .map(|v| fiber_rays.iter().position(|w| w == v).unwrap())
                .collect()
        })
        .collect();
    let fiber_fan = Fan::new(r, fiber_rays, fiber_max)?;

    // base: projected base parts in the quotient lattice
    let base_fan = if r == n {
        Fan::new(0, Vec::new(), vec![Vec::new()])?
    } else {
        let q = quotient_map(n, delta).expect("delta is primitive");
        let mut base_rays: Vec<IntVector> = Vec::new();
        let mut base_max: BTreeSet<Vec<usize>> = BTreeSet::new();
        for cs in &split.per_cone {
            let mut indices = Vec::new();
            for &i in &cs.base_rays {
                let img = q.apply(&fan.rays()[i]).primitive();
                let idx = match base_rays.iter().position(|w| *w == img) {
                    Some(k) => k,
                    None => {
                        base_rays.push(img);
                        base_rays.len() - 1
                    }
                };
                indices.push(idx);
            }
            indices.sort_unstable();
            indices.dedup();
            if indices.len() != n - r {
                return Err(FanError::Inconsistency(
                    "base part of a maximal cone has wrong rank".into(),
                ));
            }
            base_max.insert(indices);
        }
        Fan::new(n - r, base_rays, base_max.into_iter().collect())?
    };

    Ok((fiber_fan, base_fan))
}

/// Cones of invariant fibers: faces of dimension n - rk Δ meeting Δ_Q only
/// at the origin. For a verified fibration these are exactly the distinct
/// base parts of the maximal cones.
pub fn invariant_fiber_cones(fan: &Fan, delta: &Sublattice) -> Result<Vec<Vec<usize>>, FanError> {
    let Some(split) = check_fibration(fan, delta) else {
        return Err(FanError::NotAFibration);
    };
    let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
    for cs in &split.per_cone {
        let mut c = cs.base_rays.clone();
        c.sort_unstable();
        out.insert(c);
    }
    Ok(out.into_iter().collect())
}

/// Reduced-fiber test at one invariant fiber cone: the sublattice plus the
/// saturated span of the cone must be a direct sum equal to the whole
/// lattice (index one).
pub fn fiber_reduced(fan: &Fan, delta: &Sublattice, eta: &[usize]) -> Result<bool, FanError> {
    if check_fibration(fan, delta).is_none() {
        return Err(FanError::NotAFibration);
    }
    let n = fan.ambient_dim();
    let vecs: Vec<IntVector> = eta.iter().map(|&i| fan.rays()[i].clone()).collect();
    let span = Sublattice::spanned_by(n, &vecs).saturate();
    if span.rank() + delta.rank() != n {
        return Ok(false);
    }
    let mut rows = delta.basis().to_vec();
    rows.extend(span.basis().iter().cloned());
    let stacked = Sublattice::spanned_by(n, &rows);
    if stacked.rank() != n {
        return Ok(false);
    }
    Ok(stacked.is_primitive())
}
