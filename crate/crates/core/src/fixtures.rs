//! Canonical point configurations used across tests, benches, and sample
//! inputs. Each returns the full lattice-point set of the named polytope
//! unless the name says otherwise.

use crate::polytope::PointConfiguration;

/// Vertices of the standard simplex: origin plus the unit vectors.
pub fn standard_simplex(n: usize) -> PointConfiguration {
    let mut pts: Vec<Vec<i64>> = vec![vec![0; n]];
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        pts.push(e);
    }
    let rows: Vec<&[i64]> = pts.iter().map(|p| p.as_slice()).collect();
    PointConfiguration::from_i64s(n, &rows)
}

/// {0, 1, ..., k} on the line.
pub fn dilated_segment(k: i64) -> PointConfiguration {
    let pts: Vec<Vec<i64>> = (0..=k).map(|i| vec![i]).collect();
    let rows: Vec<&[i64]> = pts.iter().map(|p| p.as_slice()).collect();
    PointConfiguration::from_i64s(1, &rows)
}

/// Lattice points of Conv(0, 2e1, e2): a cone over a conic.
pub fn cone_over_conic() -> PointConfiguration {
    PointConfiguration::from_i64s(2, &[&[0, 0], &[1, 0], &[2, 0], &[0, 1]])
}

/// Lattice points of Conv(0, 2e1, 2e2): twice the standard triangle.
pub fn dilated_triangle() -> PointConfiguration {
    PointConfiguration::from_i64s(2, &[&[0, 0], &[1, 0], &[2, 0], &[0, 1], &[1, 1], &[0, 2]])
}

/// Lattice points of the unit square.
pub fn unit_square() -> PointConfiguration {
    PointConfiguration::from_i64s(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])
}

/// Lattice points (= vertices) of the unit 3-cube.
pub fn unit_cube() -> PointConfiguration {
    PointConfiguration::from_i64s(
        3,
        &[
            &[0, 0, 0],
            &[1, 0, 0],
            &[0, 1, 0],
            &[1, 1, 0],
            &[0, 0, 1],
            &[1, 0, 1],
            &[0, 1, 1],
            &[1, 1, 1],
        ],
    )
}

/// Lattice points of the prism over the standard triangle (the Segre
/// product of a plane and a line).
pub fn triangle_prism() -> PointConfiguration {
    PointConfiguration::from_i64s(
        3,
        &[
            &[0, 0, 0],
            &[1, 0, 0],
            &[0, 1, 0],
            &[0, 0, 1],
            &[1, 0, 1],
            &[0, 1, 1],
        ],
    )
}

/// Lattice points of Conv(0, 2e1, e2, e2+2e3): the join of two disjoint
/// non-linear rational normal curves.
pub fn join_of_conics() -> PointConfiguration {
    PointConfiguration::from_i64s(
        3,
        &[
            &[0, 0, 0],
            &[1, 0, 0],
            &[2, 0, 0],
            &[0, 1, 0],
            &[0, 1, 1],
            &[0, 1, 2],
        ],
    )
}

/// Lattice points of Conv(0, 2e1, e2, e3): the cone over a conic with a
/// line vertex.
pub fn cone_over_conic_with_line_vertex() -> PointConfiguration {
    PointConfiguration::from_i64s(
        3,
        &[&[0, 0, 0], &[1, 0, 0], &[2, 0, 0], &[0, 1, 0], &[0, 0, 1]],
    )
}

/// The eight vertices of the 4-dimensional prism over a defect-2 simplex.
/// Its toric variety is the product of a singular quadric threefold and a
/// line.
pub fn quadric_prism_vertices() -> PointConfiguration {
    PointConfiguration::from_i64s(
        4,
        &[
            &[0, 0, 0, 0],
            &[1, 0, 0, 0],
            &[0, 0, 1, 0],
            &[0, 2, 1, 0],
            &[0, 0, 0, 1],
            &[1, 0, 0, 1],
            &[0, 0, 1, 1],
            &[0, 2, 1, 1],
        ],
    )
}

/// All ten lattice points of the quadric prism.
pub fn quadric_prism() -> PointConfiguration {
    PointConfiguration::from_i64s(
        4,
        &[
            &[0, 0, 0, 0],
            &[1, 0, 0, 0],
            &[0, 0, 1, 0],
            &[0, 1, 1, 0],
            &[0, 2, 1, 0],
            &[0, 0, 0, 1],
            &[1, 0, 0, 1],
            &[0, 0, 1, 1],
            &[0, 1, 1, 1],
            &[0, 2, 1, 1],
        ],
    )
}

/// The five lattice points of the trapezoid Conv(0, 2e1, e2, e1+e2): the
/// cubic scroll surface in P^4, a twisted sum of two parallel segments.
pub fn cubic_scroll() -> PointConfiguration {
    PointConfiguration::from_i64s(2, &[&[0, 0], &[1, 0], &[2, 0], &[0, 1], &[1, 1]])
}
