//! Exact Hausdorff distance between finite planar point sets.
//!
//! Nearest-neighbour queries first scan a few square rings of a uniform
//! bucket grid around the query; the scan is exact once the ring lower bound
//! exceeds the best distance found. Queries far from every point fall back
//! to a static k-d tree.

use kiddo::{ImmutableKdTree, SquaredEuclidean};
use num_complex::Complex64;
use rayon::prelude::*;

use super::SpectraError;

/// Rings scanned in the bucket grid before deferring to the k-d tree.
const MAX_RINGS: i64 = 3;

/// Exact nearest-neighbour index over a fixed point set.
pub struct PointIndex {
    points: Vec<Complex64>,
    origin: (f64, f64),
    cell: f64,
    nx: usize,
    ny: usize,
    starts: Vec<usize>,
    tree: ImmutableKdTree<f64, 2>,
}

impl PointIndex {
    pub fn new(points: &[Complex64]) -> Self {
        assert!(!points.is_empty(), "index needs at least one point");
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for p in points {
            x0 = x0.min(p.re);
            x1 = x1.max(p.re);
            y0 = y0.min(p.im);
            y1 = y1.max(p.im);
        }
        let (w, h) = (x1 - x0, y1 - y0);
        let n = points.len() as f64;
        let mut cell = if w > 0.0 && h > 0.0 {
            (w * h / n).sqrt() * 1.5
        } else {
            w.max(h) / n.sqrt()
        };
        if !(cell > 0.0) {
            cell = 1.0;
        }
        // keep the cell count within a small multiple of the point count
        let cap = (4.0 * n).max(16.0);
        while ((w / cell).floor() + 1.0) * ((h / cell).floor() + 1.0) > cap {
            cell *= 1.5;
        }
        let nx = (w / cell) as usize + 1;
        let ny = (h / cell) as usize + 1;

        let key = |p: &Complex64| -> usize {
            let ix = (((p.re - x0) / cell) as usize).min(nx - 1);
            let iy = (((p.im - y0) / cell) as usize).min(ny - 1);
            iy * nx + ix
        };
        let mut starts = vec![0usize; nx * ny + 1];
        for p in points {
            starts[key(p) + 1] += 1;
        }
        for i in 1..starts.len() {
            starts[i] += starts[i - 1];
        }
        let mut fill = starts.clone();
        let mut sorted = vec![Complex64::new(0.0, 0.0); points.len()];
        for p in points {
            let k = key(p);
            sorted[fill[k]] = *p;
            fill[k] += 1;
        }
        let coords: Vec<[f64; 2]> = points.iter().map(|z| [z.re, z.im]).collect();
        let tree = ImmutableKdTree::new_from_slice(&coords).expect("finite, nonempty point set");
        Self {
            points: sorted,
            origin: (x0, y0),
            cell,
            nx,
            ny,
            starts,
            tree,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn cell_points(&self, ix: usize, iy: usize) -> &[Complex64] {
        let k = iy * self.nx + ix;
        &self.points[self.starts[k]..self.starts[k + 1]]
    }

    /// Ring search around the query's cell; `None` if it does not settle
    /// within `MAX_RINGS`.
    fn nearest_in_grid(&self, q: Complex64) -> Option<f64> {
        let fx = ((q.re - self.origin.0) / self.cell).floor();
        let fy = ((q.im - self.origin.1) / self.cell).floor();
        if fx < 0.0 || fy < 0.0 || fx >= self.nx as f64 || fy >= self.ny as f64 {
            return None;
        }
        let (cx, cy) = (fx as i64, fy as i64);
        let mut best_sq = f64::INFINITY;
        for r in 0..=MAX_RINGS {
            let mut visit = |ix: i64, iy: i64| {
                if ix >= 0 && iy >= 0 && (ix as usize) < self.nx && (iy as usize) < self.ny {
                    for p in self.cell_points(ix as usize, iy as usize) {
                        best_sq = best_sq.min((p - q).norm_sqr());
                    }
                }
            };
            for iy in (cy - r)..=(cy + r) {
                if iy == cy - r || iy == cy + r {
                    for ix in (cx - r)..=(cx + r) {
                        visit(ix, iy);
                    }
                } else {
                    visit(cx - r, iy);
                    visit(cx + r, iy);
                }
            }
            // every unscanned point lies at least r cells away
            if best_sq.sqrt() <= r as f64 * self.cell {
                return Some(best_sq.sqrt());
            }
        }
        None
    }

    /// Distance from `q` to the nearest indexed point.
    pub fn nearest_distance(&self, q: Complex64) -> f64 {
        self.nearest_in_grid(q).unwrap_or_else(|| {
            self.tree
                .query(&[q.re, q.im])
                .nearest_one::<SquaredEuclidean<f64>>()
                .execute()
                .distance
                .sqrt()
        })
    }

    /// `max_{x∈queries} min_{y∈index} |x − y|`.
    pub fn directed_from(&self, queries: &[Complex64]) -> f64 {
        queries
            .par_iter()
            .map(|q| self.nearest_distance(*q))
            .reduce(|| 0.0, f64::max)
    }
}

/// `sup_{x∈X} inf_{y∈Y} |x − y|`.
pub fn directed_hausdorff(x: &[Complex64], y: &[Complex64]) -> Result<f64, SpectraError> {
    if x.is_empty() || y.is_empty() {
        return Err(SpectraError::EmptySet);
    }
    Ok(PointIndex::new(y).directed_from(x))
}

/// Two-sided Hausdorff distance `max(h(X, Y), h(Y, X))`.
pub fn hausdorff_distance(x: &[Complex64], y: &[Complex64]) -> Result<f64, SpectraError> {
    Ok(directed_hausdorff(x, y)?.max(directed_hausdorff(y, x)?))
}

/// Hausdorff distance between two small sets by direct comparison.
pub(crate) fn small_hausdorff(x: &[Complex64], y: &[Complex64]) -> f64 {
    let dir = |a: &[Complex64], b: &[Complex64]| {
        a.iter()
            .map(|p| b.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    dir(x, y).max(dir(y, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn circle(r: f64, n: usize) -> Vec<Complex64> {
        (0..n).map(|i| Complex64::from_polar(r, 2.0 * PI * i as f64 / n as f64)).collect()
    }

    #[test]
    fn identical_sets() {
        let x = circle(1.0, 100);
        assert_eq!(hausdorff_distance(&x, &x).unwrap(), 0.0);
    }

    #[test]
    fn two_points() {
        let d = hausdorff_distance(&[Complex64::new(0.0, 0.0)], &[Complex64::new(3.0, 0.0)]).unwrap();
        assert_eq!(d, 3.0);
    }

    #[test]
    fn concentric_circles() {
        let d = hausdorff_distance(&circle(1.0, 1000), &circle(2.0, 1000)).unwrap();
        assert!((d - 1.0).abs() <= 0.01);
    }

    #[test]
    fn empty_set_rejected() {
        assert!(matches!(hausdorff_distance(&[], &circle(1.0, 3)), Err(SpectraError::EmptySet)));
    }

    proptest! {
        #[test]
        fn index_matches_brute_force(
            xs in proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..60),
            ys in proptest::collection::vec((-5.0f64..5.0, -0.01f64..0.01), 1..60),
        ) {
            let x: Vec<Complex64> = xs.iter().map(|(a, b)| Complex64::new(*a, *b)).collect();
            let y: Vec<Complex64> = ys.iter().map(|(a, b)| Complex64::new(*a, *b)).collect();
            let fast = hausdorff_distance(&x, &y).unwrap();
            let slow = small_hausdorff(&x, &y);
            prop_assert!((fast - slow).abs() <= 1e-12);
        }
    }

    #[test]
    fn duplicates_and_far_queries() {
        let mut y = vec![Complex64::new(0.5, 0.5); 500];
        y.extend(circle(0.7, 20_000).iter().map(|z| z + 1.0));
        let x: Vec<Complex64> = y.iter().map(|z| -z).collect();
        let q = &x[..3000];
        let fast = directed_hausdorff(q, &y).unwrap();
        let slow = q
            .iter()
            .map(|p| y.iter().map(|z| (p - z).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        assert!((fast - slow).abs() <= 1e-12);
        let exact = hausdorff_distance(&[Complex64::new(0.5, 0.5)], &[Complex64::new(0.5, 0.5); 3]).unwrap();
        assert_eq!(exact, 0.0);
    }
}
