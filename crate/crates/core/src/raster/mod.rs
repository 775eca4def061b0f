//! Binary rasters as an independent, approximate oracle: rasterization,
//! exact distance transforms, parallel sets and Hausdorff distances.
//!
//! Grid origins are snapped to integer multiples of `h`, so any two grids
//! with the same cell size share one lattice and can be compared directly.

mod edt;
mod export;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{point_segment_distance, Ball, CompactSet, Point};
use crate::scalar::Scalar;

pub use export::{read_distance_field, write_distance_field, write_pgm};

/// Placement of an `nx × ny` lattice of square cells of side `h`. Cell
/// `(i, j)` covers `[ox + i h, ox + (i+1) h] × [oy + j h, oy + (j+1) h]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Frame<T> {
    pub origin: Point<T>,
    pub h: T,
    pub nx: usize,
    pub ny: usize,
}

impl<T: Scalar> Frame<T> {
    /// Smallest lattice-aligned frame covering `[lo, hi]` padded by `pad`.
    pub fn covering(lo: Point<T>, hi: Point<T>, h: T, pad: T) -> Result<Self> {
        if !(h > T::zero()) || !h.is_finite() {
            return Err(Error::InvalidArgument(format!("cell size must be positive, got {h}")));
        }
        let i0 = ((lo.x - pad) / h).floor();
        let j0 = ((lo.y - pad) / h).floor();
        let i1 = ((hi.x + pad) / h).ceil();
        let j1 = ((hi.y + pad) / h).ceil();
        let nx = (i1 - i0).to_usize().unwrap_or(0).max(1);
        let ny = (j1 - j0).to_usize().unwrap_or(0).max(1);
        Ok(Frame {
            origin: Point::new(i0 * h, j0 * h),
            h,
            nx,
            ny,
        })
    }

    #[inline]
    pub fn center(&self, i: usize, j: usize) -> Point<T> {
        let h = self.h;
        Point::new(
            self.origin.x + (T::lit(i as f64) + T::half()) * h,
            self.origin.y + (T::lit(j as f64) + T::half()) * h,
        )
    }

    fn lattice_index(&self) -> (i64, i64) {
        (
            (self.origin.x / self.h).round().to_i64().unwrap_or(0),
            (self.origin.y / self.h).round().to_i64().unwrap_or(0),
        )
    }

    /// Smallest frame containing both, provided they share a lattice.
    pub fn union(&self, other: &Frame<T>) -> Result<Frame<T>> {
        if self.h != other.h {
            return Err(Error::GridMismatch(format!("cell sizes differ: {} vs {}", self.h, other.h)));
        }
        let (a, b) = (self.lattice_index(), other.lattice_index());
        let i0 = a.0.min(b.0);
        let j0 = a.1.min(b.1);
        let i1 = (a.0 + self.nx as i64).max(b.0 + other.nx as i64);
        let j1 = (a.1 + self.ny as i64).max(b.1 + other.ny as i64);
        Ok(Frame {
            origin: Point::new(T::lit(i0 as f64) * self.h, T::lit(j0 as f64) * self.h),
            h: self.h,
            nx: (i1 - i0) as usize,
            ny: (j1 - j0) as usize,
        })
    }

    /// Same frame grown by `cells` on every side.
    pub fn grown(&self, cells: usize) -> Frame<T> {
        let c = T::lit(cells as f64) * self.h;
        Frame {
            origin: Point::new(self.origin.x - c, self.origin.y - c),
            h: self.h,
            nx: self.nx + 2 * cells,
            ny: self.ny + 2 * cells,
        }
    }
}

/// Binary raster, row-major: cell `(i, j)` is `mask[j * nx + i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid<T> {
    pub frame: Frame<T>,
    pub mask: Vec<bool>,
}

impl<T: Scalar> Grid<T> {
    pub fn empty(frame: Frame<T>) -> Self {
        Grid {
            mask: vec![false; frame.nx * frame.ny],
            frame,
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.mask[j * self.frame.nx + i]
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    /// `count · h²`.
    pub fn area(&self) -> T {
        T::lit(self.count() as f64) * self.frame.h * self.frame.h
    }

    /// Copies the mask into a larger frame on the same lattice.
    pub fn embed(&self, frame: Frame<T>) -> Result<Grid<T>> {
        let (a, b) = (frame.lattice_index(), self.frame.lattice_index());
        if frame.h != self.frame.h {
            return Err(Error::GridMismatch("cell sizes differ".into()));
        }
        let (di, dj) = (b.0 - a.0, b.1 - a.1);
        if di < 0 || dj < 0 || di as usize + self.frame.nx > frame.nx || dj as usize + self.frame.ny > frame.ny {
            return Err(Error::GridMismatch("target frame does not contain the grid".into()));
        }
        let mut out = Grid::empty(frame);
        for j in 0..self.frame.ny {
            let src = &self.mask[j * self.frame.nx..(j + 1) * self.frame.nx];
            let row = (j + dj as usize) * frame.nx + di as usize;
            out.mask[row..row + self.frame.nx].copy_from_slice(src);
        }
        Ok(out)
    }

    /// Mask dilated by `cells` in the Chebyshev sense (square neighbourhood).
    pub fn dilate_cells(&self, cells: usize) -> Grid<T> {
        let frame = self.frame.grown(cells);
        let base = self.embed(frame).expect("grown frame contains the grid");
        let (nx, ny) = (frame.nx, frame.ny);
        let c = cells as isize;
        let mut out = Grid::empty(frame);
        for j in 0..ny {
            for i in 0..nx {
                if base.mask[j * nx + i] {
                    for dj in -c..=c {
                        for di in -c..=c {
                            let (ii, jj) = (i as isize + di, j as isize + dj);
                            if ii >= 0 && jj >= 0 && (ii as usize) < nx && (jj as usize) < ny {
                                out.mask[jj as usize * nx + ii as usize] = true;
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Whether every on-cell of `self` is on in `other` (frames may differ
    /// but must share the lattice).
    pub fn is_subset_of(&self, other: &Grid<T>) -> Result<bool> {
        let f = self.frame.union(&other.frame)?;
        let (a, b) = (self.embed(f)?, other.embed(f)?);
        Ok(a.mask.iter().zip(&b.mask).all(|(&x, &y)| !x || y))
    }
}

/// Rasterizes `set` at cell size `h` with `2h` of padding.
pub fn rasterize<T: Scalar>(set: &CompactSet<T>, h: T) -> Result<Grid<T>> {
    rasterize_padded(set, h, T::two() * h)
}

/// Rasterizes with at least `pad` of empty margin around the set.
pub fn rasterize_padded<T: Scalar>(set: &CompactSet<T>, h: T, pad: T) -> Result<Grid<T>> {
    let (lo, hi) = set
        .bbox()
        .ok_or_else(|| Error::EmptySet("cannot rasterize the empty set".into()))?;
    let frame = Frame::covering(lo, hi, h, pad)?;
    Ok(rasterize_in(set, frame))
}

/// Cell is on iff its center lies in a region (nonzero winding), or within
/// `h/2` of a chain, or the cell contains a chain vertex.
pub fn rasterize_in<T: Scalar>(set: &CompactSet<T>, frame: Frame<T>) -> Grid<T> {
    let Frame { origin, h, nx, ny } = frame;
    let mut grid = Grid::empty(frame);
    let row_of = |y: T| ((y - origin.y) / h - T::half()).ceil();
    let mut rows: Vec<Vec<(T, i32)>> = vec![Vec::new(); ny];
    for region in set.regions() {
        for ring in region.rings() {
            for (a, b) in ring.edges() {
                if a.y == b.y {
                    continue;
                }
                let (p, q, w) = if a.y < b.y { (a, b, 1) } else { (b, a, -1) };
                // centers with p.y <= y < q.y
                let j0 = row_of(p.y).max(T::zero());
                let j1 = row_of(q.y);
                let j0 = j0.to_i64().unwrap_or(0);
                let j1 = j1.to_i64().unwrap_or(0).min(ny as i64);
                for j in j0..j1 {
                    let y = origin.y + (T::lit(j as f64) + T::half()) * h;
                    let x = p.x + (q.x - p.x) * ((y - p.y) / (q.y - p.y));
                    rows[j as usize].push((x, w));
                }
            }
        }
    }
    for (j, xs) in rows.iter_mut().enumerate() {
        if xs.is_empty() {
            continue;
        }
        xs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut wind = 0;
        for k in 0..xs.len() {
            wind += xs[k].1;
            if wind != 0 && k + 1 < xs.len() {
                let (xa, xb) = (xs[k].0, xs[k + 1].0);
                // centers with xa <= x < xb
                let i0 = ((xa - origin.x) / h - T::half()).ceil().max(T::zero());
                let i1 = ((xb - origin.x) / h - T::half()).ceil();
                let i0 = i0.to_usize().unwrap_or(0);
                let i1 = i1.to_i64().unwrap_or(0).clamp(0, nx as i64) as usize;
                for i in i0..i1 {
                    grid.mask[j * nx + i] = true;
                }
            }
        }
    }
    let r = h * T::half();
    for c in set.chains() {
        for &p in c.points() {
            let i = ((p.x - origin.x) / h).floor().to_i64().unwrap_or(-1);
            let j = ((p.y - origin.y) / h).floor().to_i64().unwrap_or(-1);
            if i >= 0 && j >= 0 && (i as usize) < nx && (j as usize) < ny {
                grid.mask[j as usize * nx + i as usize] = true;
            }
        }
        for (a, b) in c.segments() {
            let ylo = a.y.min(b.y) - r;
            let yhi = a.y.max(b.y) + r;
            let j0 = row_of(ylo).max(T::zero()).to_usize().unwrap_or(0);
            let j1 = (row_of(yhi).to_i64().unwrap_or(0) + 1).clamp(0, ny as i64) as usize;
            for j in j0..j1 {
                let yc = origin.y + (T::lit(j as f64) + T::half()) * h;
                // x-range of the segment part within the row band, widened by r
                let (mut xlo, mut xhi) = if a.y == b.y {
                    (a.x.min(b.x), a.x.max(b.x))
                } else {
                    let ta = ((yc - r - a.y) / (b.y - a.y)).max(T::zero()).min(T::one());
                    let tb = ((yc + r - a.y) / (b.y - a.y)).max(T::zero()).min(T::one());
                    let xa = a.x + (b.x - a.x) * ta;
                    let xb = a.x + (b.x - a.x) * tb;
                    (xa.min(xb), xa.max(xb))
                };
                xlo = xlo - r;
                xhi = xhi + r;
                let i0 = ((xlo - origin.x) / h - T::half()).floor().max(T::zero()).to_usize().unwrap_or(0);
                let i1 = (((xhi - origin.x) / h - T::half()).ceil().to_i64().unwrap_or(0) + 1).clamp(0, nx as i64) as usize;
                for i in i0..i1 {
                    if point_segment_distance(frame.center(i, j), a, b) <= r {
                        grid.mask[j * nx + i] = true;
                    }
                }
            }
        }
    }
    grid
}

/// Per-cell Euclidean distance from the cell center to the nearest on-cell
/// center, in length units.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceField<T> {
    pub frame: Frame<T>,
    pub dist: Vec<T>,
}

impl<T: Scalar> DistanceField<T> {
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.dist[j * self.frame.nx + i]
    }
}

/// Exact Euclidean distance transform (infinite everywhere for an empty
/// grid).
pub fn distance_transform<T: Scalar>(g: &Grid<T>) -> DistanceField<T> {
    let d2 = edt::squared_edt(&g.mask, g.frame.nx, g.frame.ny);
    let h = g.frame.h.as_f64();
    DistanceField {
        frame: g.frame,
        dist: d2.into_iter().map(|v| T::lit(v.sqrt() * h)).collect(),
    }
}

/// Raster outer parallel set: cells whose center is within `delta` of an
/// on-cell center. The frame grows so nothing is clipped.
pub fn parallel_set<T: Scalar>(g: &Grid<T>, delta: T) -> Result<Grid<T>> {
    if delta < T::zero() || !delta.is_finite() {
        return Err(Error::InvalidArgument(format!("parallel distance must be >= 0, got {delta}")));
    }
    if delta == T::zero() {
        return Ok(g.clone());
    }
    let cells = (delta / g.frame.h).ceil().to_usize().unwrap_or(0) + 1;
    let grown = g.embed(g.frame.grown(cells))?;
    let d2 = edt::squared_edt(&grown.mask, grown.frame.nx, grown.frame.ny);
    let lim = (delta / g.frame.h).as_f64();
    let lim2 = lim * lim * (1.0 + 1e-12);
    Ok(Grid {
        frame: grown.frame,
        mask: d2.into_iter().map(|v| v <= lim2).collect(),
    })
}

/// Directed distances `max_{a ∈ A} d(a, B)` and the reverse, over cell
/// centers; returns the larger.
pub fn hausdorff<T: Scalar>(a: &Grid<T>, b: &Grid<T>) -> Result<T> {
    let f = a.frame.union(&b.frame)?;
    let (ga, gb) = (a.embed(f)?, b.embed(f)?);
    if ga.count() == 0 || gb.count() == 0 {
        return Err(Error::EmptySet("Hausdorff distance needs two nonempty grids".into()));
    }
    let da = edt::squared_edt(&ga.mask, f.nx, f.ny);
    let db = edt::squared_edt(&gb.mask, f.nx, f.ny);
    let mut worst: f64 = 0.0;
    for k in 0..ga.mask.len() {
        if ga.mask[k] {
            worst = worst.max(db[k]);
        }
        if gb.mask[k] {
            worst = worst.max(da[k]);
        }
    }
    Ok(T::lit(worst.sqrt() * f.h.as_f64()))
}

/// `h² ·` number of cells of the raster parallel set whose centers lie
/// outside the (analytic) ball.
pub fn monitor_value<T: Scalar>(g: &Grid<T>, delta: T, ball: &Ball<T>) -> Result<T> {
    let k = parallel_set(g, delta)?;
    Ok(monitor_count(&k, ball))
}

/// Same as [`monitor_value`] for an already dilated grid.
pub fn monitor_count<T: Scalar>(k: &Grid<T>, ball: &Ball<T>) -> T {
    let f = k.frame;
    let r2 = ball.radius * ball.radius;
    let mut n = 0usize;
    for j in 0..f.ny {
        for i in 0..f.nx {
            if k.mask[j * f.nx + i] {
                let c = f.center(i, j) - ball.center;
                if c.dot(c) > r2 {
                    n += 1;
                }
            }
        }
    }
    T::lit(n as f64) * f.h * f.h
}
