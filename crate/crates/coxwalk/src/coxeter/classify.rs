use serde::Serialize;

use super::{CoxeterSystem, Gen};
use crate::field::Order;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TriangleClass {
    I,
    II,
    III,
}

/// Coarse type of a Coxeter system.
///
/// Triangle variants carry `orders = (a, b, c)` sorted `a >= b >= c` and
/// `roles = [s, t, u]` with `m_st = a`, `m_tu = b`, `m_us = c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Classification {
    SphericalTriangle { orders: [u32; 3] },
    AffineTriangle { orders: [u32; 3], class: TriangleClass, roles: [Gen; 3] },
    FuchsianTriangle { orders: [u32; 3], class: TriangleClass, roles: [Gen; 3] },
    /// Generators in cyclic order around the polygon with the angle
    /// parameters `k_i = m(cycle[i], cycle[i+1])`.
    FuchsianPolygon { cycle: Vec<Gen>, angles: Vec<u32> },
    RightAngledAffine { cycle: Vec<Gen> },
    Other,
}

impl Classification {
    pub fn is_fuchsian(&self) -> bool {
        matches!(
            self,
            Classification::FuchsianTriangle { .. } | Classification::FuchsianPolygon { .. }
        )
    }

    pub fn is_affine(&self) -> bool {
        matches!(
            self,
            Classification::AffineTriangle { .. } | Classification::RightAngledAffine { .. }
        )
    }

    pub fn name(&self) -> String {
        match self {
            Classification::SphericalTriangle { orders } => format!("spherical triangle {orders:?}"),
            Classification::AffineTriangle { orders, .. } => format!("affine triangle {orders:?}"),
            Classification::FuchsianTriangle { orders, class, .. } => {
                format!("Fuchsian triangle {orders:?}, class {class:?}")
            }
            Classification::FuchsianPolygon { angles, .. } => {
                format!("Fuchsian {}-gon {angles:?}, class IV", angles.len())
            }
            Classification::RightAngledAffine { .. } => "right-angled affine square".to_string(),
            Classification::Other => "other".to_string(),
        }
    }
}

pub(crate) fn classify_system(sys: &CoxeterSystem) -> Classification {
    match sys.rank() {
        3 => classify_triangle(sys),
        n if n >= 4 => classify_polygon(sys),
        _ => Classification::Other,
    }
}

fn classify_triangle(sys: &CoxeterSystem) -> Classification {
    let m = |s: Gen, t: Gen| sys.m(s, t).finite();
    // Try every ordering (s,t,u) and keep the one whose edge orders are sorted.
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut best: Option<([u32; 3], [Gen; 3])> = None;
    for p in perms {
        let (Some(a), Some(b), Some(c)) = (m(p[0], p[1]), m(p[1], p[2]), m(p[2], p[0])) else {
            return Classification::Other;
        };
        if a >= b && b >= c && best.is_none() {
            best = Some(([a, b, c], p));
        }
    }
    let ([a, b, c], roles) = best.expect("some ordering is sorted");
    // compare 1/a + 1/b + 1/c with 1 in integers
    let lhs = (b * c + a * c + a * b) as u64;
    let rhs = (a * b * c) as u64;
    let orders = [a, b, c];
    if lhs > rhs {
        return Classification::SphericalTriangle { orders };
    }
    let class = if c >= 3 {
        TriangleClass::I
    } else if b >= 4 {
        TriangleClass::II
    } else {
        TriangleClass::III
    };
    if lhs == rhs {
        Classification::AffineTriangle { orders, class, roles }
    } else {
        Classification::FuchsianTriangle { orders, class, roles }
    }
}

fn classify_polygon(sys: &CoxeterSystem) -> Classification {
    let n = sys.rank();
    // each generator must have exactly two finite neighbours, forming one cycle
    let finite_nbrs = |s: Gen| -> Vec<Gen> {
        (0..n).filter(|&t| t != s && !sys.m(s, t).is_infinite()).collect()
    };
    if (0..n).any(|s| finite_nbrs(s).len() != 2) {
        return Classification::Other;
    }
    let mut cycle = vec![0];
    let mut prev = usize::MAX;
    let mut cur = 0;
    loop {
        let nbrs = finite_nbrs(cur);
        let next = if nbrs[0] != prev { nbrs[0] } else { nbrs[1] };
        if next == 0 {
            break;
        }
        if cycle.contains(&next) {
            return Classification::Other;
        }
        cycle.push(next);
        prev = cur;
        cur = next;
    }
    if cycle.len() != n {
        return Classification::Other;
    }
    let angles: Vec<u32> = (0..n)
        .map(|i| match sys.m(cycle[i], cycle[(i + 1) % n]) {
            Order::Finite(k) => k,
            Order::Infinite => unreachable!(),
        })
        .collect();
    // sum 1/k_i against n - 2, scaled by the lcm of the k_i
    let l = angles.iter().fold(1u64, |acc, &k| num_integer::lcm(acc, k as u64));
    let sum: u64 = angles.iter().map(|&k| l / k as u64).sum();
    let target = (n as u64 - 2) * l;
    if sum < target {
        Classification::FuchsianPolygon { cycle, angles }
    } else if sum == target {
        Classification::RightAngledAffine { cycle }
    } else {
        Classification::Other
    }
}
