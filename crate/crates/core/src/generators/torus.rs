use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

// Float methods for no_std; redundant whenever std is linked into the build.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{invalid, Result};
use crate::{MatrixSymbol, Partition, C64};

/// Lattice points of `ℤⁿ` with `|j|_∞ ≤ radius`, ordered by increasing
/// `|j|_∞` and lexicographically within each shell. Flattened row-major.
pub fn lattice_points(dim: usize, radius: usize) -> Result<Vec<i64>> {
    if dim == 0 {
        return Err(invalid!("lattice dimension must be positive"));
    }
    let side = 2 * radius + 1;
    let count = side
        .checked_pow(dim as u32)
        .ok_or_else(|| invalid!("lattice of radius {radius} in dimension {dim} is too large"))?;
    let r = radius as i64;
    // Lexicographic enumeration of the cube, then a stable sort by shell.
    let mut points: Vec<Vec<i64>> = Vec::with_capacity(count);
    let mut current = alloc::vec![-r; dim];
    for _ in 0..count {
        points.push(current.clone());
        for axis in (0..dim).rev() {
            if current[axis] < r {
                current[axis] += 1;
                break;
            }
            current[axis] = -r;
        }
    }
    points.sort_by_key(|p| p.iter().map(|x| x.abs()).max().unwrap_or(0));
    Ok(points.into_iter().flatten().collect())
}

/// Scalar symbol of the Fourier multiplier `β(D)` on `𝕋ⁿ` over the lattice
/// enumeration of [`lattice_points`], one block per lattice point.
#[derive(Clone, Debug)]
pub struct TorusMultiplier {
    pub dim: usize,
    pub radius: usize,
    points: Arc<[i64]>,
    pub symbol: MatrixSymbol,
}

impl TorusMultiplier {
    /// Lattice point behind block `index`.
    pub fn point(&self, index: usize) -> &[i64] {
        &self.points[index * self.dim..(index + 1) * self.dim]
    }

    pub fn len(&self) -> usize {
        self.points.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub fn torus_multiplier_symbol<F>(beta: F, dim: usize, radius: usize) -> Result<TorusMultiplier>
where
    F: Fn(&[i64]) -> C64 + Send + Sync + 'static,
{
    let points: Arc<[i64]> = lattice_points(dim, radius)?.into();
    let len = points.len() / dim;
    let label_points = points.clone();
    let partition = Partition::uniform(1, Some(len))?.with_label(move |i| {
        let p = &label_points[i * dim..(i + 1) * dim];
        let parts: Vec<String> = p.iter().map(|x| alloc::format!("{x}")).collect();
        alloc::format!("({})", parts.join(","))
    });
    let values: Arc<[C64]> = (0..len)
        .map(|i| beta(&points[i * dim..(i + 1) * dim]))
        .collect::<Vec<_>>()
        .into();
    let symbol = MatrixSymbol::scalar(partition, move |i| values[i]);
    Ok(TorusMultiplier {
        dim,
        radius,
        points,
        symbol,
    })
}

/// `β(j) = (1 + |j|²)^{-s/2}`.
pub fn inv_power_multiplier(s: f64) -> impl Fn(&[i64]) -> C64 + Send + Sync + Clone {
    move |j: &[i64]| {
        let norm2: f64 = j.iter().map(|&x| (x as f64) * (x as f64)).sum();
        C64::new((1.0 + norm2).powf(-s / 2.0), 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn one_dimensional_enumeration() {
        assert_eq!(lattice_points(1, 2).unwrap(), vec![0, -1, 1, -2, 2]);
    }

    #[test]
    fn two_dimensional_shells_are_lexicographic() {
        let pts = lattice_points(2, 1).unwrap();
        let pairs: Vec<(i64, i64)> = pts.chunks(2).map(|c| (c[0], c[1])).collect();
        assert_eq!(pairs[0], (0, 0));
        assert_eq!(
            &pairs[1..],
            &[
                (-1, -1),
                (-1, 0),
                (-1, 1),
                (0, -1),
                (0, 1),
                (1, -1),
                (1, 0),
                (1, 1)
            ]
        );
    }

    #[test]
    fn constant_multiplier() {
        let t = torus_multiplier_symbol(|_| C64::new(1.0, 0.0), 1, 1).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.point(1), &[-1]);
        for i in 0..3 {
            assert_eq!(t.symbol.scalar_value(i).unwrap(), C64::new(1.0, 0.0));
        }
        assert_eq!(t.symbol.partition().label(2), "(1)");
    }

    #[test]
    fn inverse_sqrt_quadratic() {
        let t = torus_multiplier_symbol(inv_power_multiplier(1.0), 1, 3).unwrap();
        // Block 2 is j = 1.
        assert!((t.symbol.scalar_value(2).unwrap().re - 0.5f64.sqrt()).abs() < 1e-15);
    }
}
