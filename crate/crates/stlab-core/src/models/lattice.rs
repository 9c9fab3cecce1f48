//! Finite-section lattice truncations (sup-norm balls, lexicographic order).

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Default cap on the number of basis labels a truncation may produce.
pub const DEFAULT_BASIS_CAP: usize = 4_000_000;

/// The index set `{ m in Z^n : |m|_inf <= radius }` in lexicographic order
/// (first coordinate slowest).
#[derive(Debug, Clone)]
pub struct LatticeTruncation {
    n: usize,
    radius: i64,
    index_set: Vec<Vec<i64>>,
}

impl LatticeTruncation {
    pub fn new(n: usize, radius: i64, cap: usize) -> Result<Self> {
        assert!(n >= 1 && radius >= 0);
        let side = 2 * radius as usize + 1;
        let mut size = 1usize;
        for _ in 0..n {
            size = size.saturating_mul(side);
            if size > cap {
                return Err(Error::DimensionOverflow { requested: size, cap });
            }
        }
        let mut index_set = Vec::with_capacity(size);
        let mut current = vec![-radius; n];
        loop {
            index_set.push(current.clone());
            let mut axis = n;
            while axis > 0 {
                axis -= 1;
                if current[axis] < radius {
                    current[axis] += 1;
                    for c in current.iter_mut().skip(axis + 1) {
                        *c = -radius;
                    }
                    break;
                }
                if axis == 0 {
                    return Ok(LatticeTruncation { n, radius, index_set });
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.index_set.len()
    }

    pub fn lattice_dim(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.index_set
    }

    pub fn point(&self, idx: usize) -> &[i64] {
        &self.index_set[idx]
    }

    /// Position of `m` in the index set, or `None` outside the truncation.
    pub fn index_of(&self, m: &[i64]) -> Option<usize> {
        debug_assert_eq!(m.len(), self.n);
        let side = (2 * self.radius + 1) as usize;
        let mut pos = 0usize;
        for &c in m {
            if c.abs() > self.radius {
                return None;
            }
            pos = pos * side + (c + self.radius) as usize;
        }
        Some(pos)
    }

    /// Euclidean norm of the lattice point at `idx`.
    pub fn norm(&self, idx: usize) -> f64 {
        let mut s: f64 = 0.0;
        for &c in &self.index_set[idx] {
            s += (c * c) as f64;
        }
        libm::sqrt(s)
    }

    pub fn origin_index(&self) -> usize {
        self.index_of(&vec![0; self.n]).expect("origin is always inside")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_order() {
        let t = LatticeTruncation::new(1, 2, 100).unwrap();
        let pts: Vec<i64> = t.points().iter().map(|p| p[0]).collect();
        assert_eq!(pts, vec![-2, -1, 0, 1, 2]);
        assert_eq!(t.index_of(&[1]), Some(3));
        assert_eq!(t.index_of(&[3]), None);
    }

    #[test]
    fn two_dimensional_size_and_lookup() {
        let t = LatticeTruncation::new(2, 3, 1000).unwrap();
        assert_eq!(t.dim(), 49);
        for (i, p) in t.points().iter().enumerate() {
            assert_eq!(t.index_of(p), Some(i));
        }
        assert_eq!(t.point(t.origin_index()), &[0, 0]);
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(
            LatticeTruncation::new(3, 100, 1000),
            Err(Error::DimensionOverflow { .. })
        ));
    }
}
