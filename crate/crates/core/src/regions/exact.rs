//! Exact (rational-arithmetic) disjointness of closed triangles via the
//! separating-axis criterion. Coordinates convert exactly from `f64`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::Triangle;

type Q = BigRational;

fn q(x: f64) -> Q {
    BigRational::from_float(x).expect("finite coordinate")
}

fn qpt(p: crate::geometry::Point) -> (Q, Q) {
    (q(p.x), q(p.y))
}

fn cross(o: &(Q, Q), a: &(Q, Q), b: &(Q, Q)) -> Q {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

/// True iff the closed triangles share no point: some edge line of one
/// strictly separates it from the other.
pub fn triangles_disjoint_exact(t1: &Triangle, t2: &Triangle) -> bool {
    let a: Vec<(Q, Q)> = t1.vertices().into_iter().map(qpt).collect();
    let b: Vec<(Q, Q)> = t2.vertices().into_iter().map(qpt).collect();
    separated_by_edge_of(&a, &b) || separated_by_edge_of(&b, &a)
}

/// True iff all triangles in the slice are pairwise disjoint. Pairs whose
/// x-extents are strictly separated (an exact `f64` comparison of the same
/// stored coordinates) need no rational test; only overlapping neighbors get
/// the full separating-axis check.
pub fn level_pairwise_disjoint(tris: &[Triangle]) -> bool {
    let mut order: Vec<usize> = (0..tris.len()).collect();
    order.sort_by(|&a, &b| tris[a].bbox().0.total_cmp(&tris[b].bbox().0));
    for (pos, &i) in order.iter().enumerate() {
        let xmax = tris[i].bbox().1;
        for &j in &order[pos + 1..] {
            if tris[j].bbox().0 > xmax {
                break;
            }
            if !triangles_disjoint_exact(&tris[i], &tris[j]) {
                return false;
            }
        }
    }
    true
}

fn separated_by_edge_of(tri: &[(Q, Q)], other: &[(Q, Q)]) -> bool {
    let zero = Q::from_integer(BigInt::from(0));
    for i in 0..3 {
        let p0 = &tri[i];
        let p1 = &tri[(i + 1) % 3];
        let third = &tri[(i + 2) % 3];
        let side = cross(p0, p1, third);
        if side == zero {
            continue; // degenerate edge orientation, skip
        }
        let inner_positive = side > zero;
        // Strict separation: every vertex of `other` strictly on the side
        // opposite to the triangle's own third vertex.
        let all_opposite = other.iter().all(|v| {
            let s = cross(p0, p1, v);
            if inner_positive {
                s < zero
            } else {
                s > zero
            }
        });
        if all_opposite {
            return true;
        }
    }
    false
}
