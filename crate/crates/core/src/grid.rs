use std::collections::HashMap;

use num_complex::Complex64;

/// Uniform bucket grid over the complex plane for radius queries.
pub(crate) struct Grid {
    cell: f64,
    cells: HashMap<(i64, i64), Vec<Complex64>>,
}

impl Grid {
    pub(crate) fn new(cell: f64) -> Grid {
        assert!(cell > 0.0 && cell.is_finite());
        Grid {
            cell,
            cells: HashMap::new(),
        }
    }

    pub(crate) fn key(&self, z: Complex64) -> (i64, i64) {
        (
            (z.re / self.cell).floor() as i64,
            (z.im / self.cell).floor() as i64,
        )
    }

    pub(crate) fn insert(&mut self, z: Complex64) {
        let key = self.key(z);
        self.cells.entry(key).or_default().push(z);
    }

    /// Whether some stored point lies within `radius` (inclusive).
    pub(crate) fn any_within(&self, z: Complex64, radius: f64) -> bool {
        let reach = (radius / self.cell).ceil() as i64;
        let (kx, ky) = self.key(z);
        for dx in -reach..=reach {
            for dy in -reach..=reach {
                if let Some(points) = self.cells.get(&(kx + dx, ky + dy)) {
                    if points.iter().any(|p| (p - z).norm() <= radius) {
                        return true;
                    }
                }
            }
        }
        false
    }
}

/// One representative per grid cell, in order of first occurrence.
pub(crate) fn thin(points: impl IntoIterator<Item = Complex64>, cell: f64) -> Vec<Complex64> {
    let mut seen = std::collections::HashSet::new();
    let grid = Grid::new(cell);
    points
        .into_iter()
        .filter(|z| seen.insert(grid.key(*z)))
        .collect()
}
