//! Fixed-grid quadrature, periodic sums, the error function and local peak
//! refinement.
//!
//! Every routine evaluates its integrand on a deterministic grid and reduces
//! with pairwise summation, so results do not depend on evaluation order.

use alloc::vec::Vec;

use crate::math::{abs, TAU};
use crate::{Error, Result, TransverseWaveVector};

/// A uniform, inclusive axis: `count` points from `min` to `max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    min: f64,
    max: f64,
    count: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || min >= max {
            return Err(Error::InvalidGrid(alloc::format!(
                "axis bounds must be finite with min < max, got [{min}, {max}]"
            )));
        }
        if count < 2 {
            return Err(Error::InvalidGrid(alloc::format!(
                "axis needs at least 2 points, got {count}"
            )));
        }
        Ok(Self { min, max, count })
    }

    /// Axis of `count` points spanning `center ± half_width`.
    pub fn centered(center: f64, half_width: f64, count: usize) -> Result<Self> {
        Self::new(center - half_width, center + half_width, count)
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }

    /// The `i`-th sample. Axes symmetric about zero give exactly mirrored
    /// samples: `point(i) == -point(count - 1 - i)`.
    pub fn point(&self, i: usize) -> f64 {
        let center = 0.5 * (self.min + self.max);
        let half = 0.5 * (self.max - self.min);
        let n = (self.count - 1) as f64;
        center + half * ((2 * i) as f64 - n) / n
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.point(i))
    }

    /// Index of the sample nearest to `value`, clamped to the axis.
    pub fn nearest(&self, value: f64) -> usize {
        let t = (value - self.min) / self.step();
        if t <= 0.0 {
            0
        } else {
            let i = (t + 0.5) as usize;
            i.min(self.count - 1)
        }
    }
}

/// Resolution and stopping rule for [`integrate_2d`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Intervals per axis on the first level.
    pub resolution: usize,
    /// Relative tolerance between successive refinement levels.
    pub rel_tol: f64,
    /// Number of interval-halving steps allowed.
    pub max_refinements: usize,
    /// Absolute floor under the relative tolerance; lets integrals that are
    /// zero to working precision count as converged.
    pub abs_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            resolution: 32,
            rel_tol: 1e-4,
            max_refinements: 3,
            abs_tol: 0.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.resolution < 16 {
            return Err(Error::InvalidConfig(alloc::format!(
                "quadrature resolution must be at least 16, got {}",
                self.resolution
            )));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-2) {
            return Err(Error::InvalidConfig(alloc::format!(
                "quadrature tolerance must lie in (0, 1e-2], got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_tol >= 0.0) {
            return Err(Error::InvalidConfig("negative absolute tolerance".into()));
        }
        Ok(())
    }
}

/// Result of an adaptive-level quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub converged: bool,
    pub refinements: usize,
}

/// Pairwise (cascade) summation.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 16;
    if values.len() <= BLOCK {
        values.iter().fold(0.0, |acc, v| acc + v)
    } else {
        let (a, b) = values.split_at(values.len() / 2);
        pairwise_sum(a) + pairwise_sum(b)
    }
}

/// Trapezoid rule over uniformly spaced samples.
pub fn trapezoid(values: &[f64], step: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => step * (pairwise_sum(&values[1..n - 1]) + 0.5 * (values[0] + values[n - 1])),
    }
}

struct Lattice {
    x: (f64, f64),
    y: (f64, f64),
    intervals: usize,
    values: Vec<f64>,
}

impl Lattice {
    fn coord(range: (f64, f64), i: usize, n: usize) -> f64 {
        range.0 + (range.1 - range.0) * (i as f64 / n as f64)
    }

    fn sample<F: FnMut(f64, f64) -> f64>(f: &mut F, x: f64, y: f64) -> Result<f64> {
        let v = f(x, y);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteIntegrand { x, y })
        }
    }

    fn build<F: FnMut(f64, f64) -> f64>(
        f: &mut F,
        x: (f64, f64),
        y: (f64, f64),
        n: usize,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity((n + 1) * (n + 1));
        for j in 0..=n {
            let yj = Self::coord(y, j, n);
            for i in 0..=n {
                values.push(Self::sample(f, Self::coord(x, i, n), yj)?);
            }
        }
        Ok(Self {
            x,
            y,
            intervals: n,
            values,
        })
    }

    /// Halve both spacings, reusing the existing samples.
    fn refine<F: FnMut(f64, f64) -> f64>(&mut self, f: &mut F) -> Result<()> {
        let old_n = self.intervals;
        let n = 2 * old_n;
        let mut values = Vec::with_capacity((n + 1) * (n + 1));
        for j in 0..=n {
            let yj = Self::coord(self.y, j, n);
            for i in 0..=n {
                let v = if i % 2 == 0 && j % 2 == 0 {
                    self.values[(j / 2) * (old_n + 1) + i / 2]
                } else {
                    Self::sample(f, Self::coord(self.x, i, n), yj)?
                };
                values.push(v);
            }
        }
        self.values = values;
        self.intervals = n;
        Ok(())
    }

    fn trapezoid(&self) -> f64 {
        let n = self.intervals;
        let hx = (self.x.1 - self.x.0) / n as f64;
        let hy = (self.y.1 - self.y.0) / n as f64;
        let rows: Vec<f64> = self
            .values
            .chunks_exact(n + 1)
            .map(|row| trapezoid(row, hx))
            .collect();
        trapezoid(&rows, hy)
    }
}

/// Trapezoid rule on an `n × n`-interval grid over `[x0, x1] × [y0, y1]`.
pub fn trapezoid_2d<F: FnMut(f64, f64) -> f64>(
    mut f: F,
    x: (f64, f64),
    y: (f64, f64),
    n: usize,
) -> Result<f64> {
    Ok(Lattice::build(&mut f, x, y, n.max(1))?.trapezoid())
}

/// 2D trapezoid with interval halving and a Richardson step per level.
///
/// Stops once the trapezoid estimates of two successive levels differ by
/// less than `rel_tol` relative to the extrapolated value (or `abs_tol`).
pub fn integrate_2d<F: FnMut(f64, f64) -> f64>(
    mut f: F,
    x: (f64, f64),
    y: (f64, f64),
    spec: &QuadratureSpec,
) -> Result<Integral> {
    let mut lattice = Lattice::build(&mut f, x, y, spec.resolution.max(1))?;
    let mut coarse = lattice.trapezoid();
    if spec.max_refinements == 0 {
        return Ok(Integral {
            value: coarse,
            converged: false,
            refinements: 0,
        });
    }
    let mut value = coarse;
    for level in 1..=spec.max_refinements {
        lattice.refine(&mut f)?;
        let fine = lattice.trapezoid();
        value = (4.0 * fine - coarse) / 3.0;
        let tolerance = (spec.rel_tol * abs(value)).max(spec.abs_tol);
        if abs(fine - coarse) <= tolerance {
            return Ok(Integral {
                value,
                converged: true,
                refinements: level,
            });
        }
        coarse = fine;
    }
    Ok(Integral {
        value,
        converged: false,
        refinements: spec.max_refinements,
    })
}

/// `n`-point periodic trapezoid over `[0, 2π)`.
pub fn integrate_periodic<F: FnMut(f64) -> f64>(mut f: F, n: usize) -> f64 {
    let h = TAU / n as f64;
    let samples: Vec<f64> = (0..n).map(|j| f(h * j as f64)).collect();
    h * pairwise_sum(&samples)
}

/// The error function.
pub fn erf(x: f64) -> f64 {
    crate::math::erf(x)
}

/// Outcome of a local peak search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakRefinement<P> {
    pub point: P,
    pub value: f64,
    /// False when the final argmax sat on the search-window boundary.
    pub converged: bool,
}

/// Stencil half-width (in samples) of the refinement grids.
const STENCIL: i32 = 4;
const SHRINK: f64 = 4.0;

/// Number of shrink iterations needed for a final sample spacing of at most
/// `resolution` when starting from a window of half-width `radius`.
pub fn iterations_for(radius: f64, resolution: f64) -> usize {
    let mut spacing = radius / STENCIL as f64;
    let mut iters = 1;
    while spacing > resolution && iters < 64 {
        spacing /= SHRINK;
        iters += 1;
    }
    iters
}

/// Grid-shrink maximisation of a 2D field.
///
/// Each iteration samples a 9 × 9 stencil around the running argmax and
/// shrinks the spacing by 4. When the argmax lands on the stencil boundary
/// the stencil is re-centred without shrinking (at most `iters` times).
pub fn refine_peak<F: FnMut(TransverseWaveVector) -> f64>(
    mut f: F,
    seed: TransverseWaveVector,
    radius: f64,
    iters: usize,
) -> PeakRefinement<TransverseWaveVector> {
    let mut center = seed;
    let mut spacing = radius / STENCIL as f64;
    let mut best_value = f(center);
    let mut on_boundary = false;
    let mut shrinks = 0;
    let mut moves = 0;
    while shrinks < iters {
        let mut best = (0, 0);
        let mut value = f64::NEG_INFINITY;
        for j in -STENCIL..=STENCIL {
            for i in -STENCIL..=STENCIL {
                let p = center
                    + TransverseWaveVector::new(i as f64 * spacing, j as f64 * spacing);
                let v = f(p);
                if v > value {
                    value = v;
                    best = (i, j);
                }
            }
        }
        center = center
            + TransverseWaveVector::new(best.0 as f64 * spacing, best.1 as f64 * spacing);
        best_value = value;
        on_boundary = best.0.abs() == STENCIL || best.1.abs() == STENCIL;
        if on_boundary && moves < iters {
            moves += 1;
        } else {
            spacing /= SHRINK;
            shrinks += 1;
        }
    }
    PeakRefinement {
        point: center,
        value: best_value,
        converged: !on_boundary,
    }
}

/// One-dimensional counterpart of [`refine_peak`].
pub fn refine_peak_1d<F: FnMut(f64) -> f64>(
    mut f: F,
    seed: f64,
    radius: f64,
    iters: usize,
) -> PeakRefinement<f64> {
    let mut center = seed;
    let mut spacing = radius / STENCIL as f64;
    let mut best_value = f(center);
    let mut on_boundary = false;
    let mut shrinks = 0;
    let mut moves = 0;
    while shrinks < iters {
        let mut best = 0;
        let mut value = f64::NEG_INFINITY;
        for i in -STENCIL..=STENCIL {
            let v = f(center + i as f64 * spacing);
            if v > value {
                value = v;
                best = i;
            }
        }
        center += best as f64 * spacing;
        best_value = value;
        on_boundary = best.abs() == STENCIL;
        if on_boundary && moves < iters {
            moves += 1;
        } else {
            spacing /= SHRINK;
            shrinks += 1;
        }
    }
    PeakRefinement {
        point: center,
        value: best_value,
        converged: !on_boundary,
    }
}

/// Samples `f` on an axis and returns the values.
pub fn sample_axis<F: FnMut(f64) -> f64>(axis: &Axis, f: F) -> Vec<f64> {
    axis.points().map(f).collect()
}
