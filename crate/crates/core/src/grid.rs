//! Uniform 2D spectra and their 1D marginals.

use alloc::format;
use alloc::vec::Vec;

use crate::math::{abs, exp, sqrt};
use crate::par;
use crate::quadrature::{trapezoid, Axis};
use crate::{Error, Result, TransverseWaveVector};

/// What the grid axes measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisKind {
    /// Transverse wave-vector components, rad/μm.
    WaveVector,
    /// Angles, rad.
    Angle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalization {
    Raw,
    /// Divided by the raw maximum, which is kept.
    PeakNormalized { raw_peak: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    X,
    Y,
}

/// Non-negative densities on a uniform grid. `values` is row-major with rows
/// along `y`: the sample at `(x.point(i), y.point(j))` is `values[j * nx + i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumGrid {
    x: Axis,
    y: Axis,
    kind: AxisKind,
    values: Vec<f64>,
    normalization: Normalization,
}

impl SpectrumGrid {
    pub fn new(x: Axis, y: Axis, kind: AxisKind, values: Vec<f64>) -> Result<Self> {
        if values.len() != x.count() * y.count() {
            return Err(Error::InvalidGrid(format!(
                "expected {} values, got {}",
                x.count() * y.count(),
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
            return Err(Error::InvalidGrid(format!(
                "densities must be finite and non-negative, found {v}"
            )));
        }
        Ok(Self {
            x,
            y,
            kind,
            values,
            normalization: Normalization::Raw,
        })
    }

    /// Samples `f(x, y)` on the grid (row-parallel with the `parallel`
    /// feature).
    pub fn from_fn<F>(x: Axis, y: Axis, kind: AxisKind, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64 + Sync,
    {
        let values = par::rows(y.count(), x.count(), |i, j| f(x.point(i), y.point(j)));
        Self::new(x, y, kind, values)
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn x_axis(&self) -> &Axis {
        &self.x
    }

    pub fn y_axis(&self) -> &Axis {
        &self.y
    }

    pub fn kind(&self) -> AxisKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.x.count() + i]
    }

    pub fn point(&self, i: usize, j: usize) -> TransverseWaveVector {
        TransverseWaveVector::new(self.x.point(i), self.y.point(j))
    }

    pub fn row(&self, j: usize) -> &[f64] {
        let nx = self.x.count();
        &self.values[j * nx..(j + 1) * nx]
    }

    pub fn column(&self, i: usize) -> Vec<f64> {
        (0..self.y.count()).map(|j| self.value(i, j)).collect()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Index `(i, j)` of the first maximal sample.
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = 0;
        for (k, v) in self.values.iter().enumerate() {
            if *v > self.values[best] {
                best = k;
            }
        }
        (best % self.x.count(), best / self.x.count())
    }

    pub fn argmax_point(&self) -> TransverseWaveVector {
        let (i, j) = self.argmax();
        self.point(i, j)
    }

    /// Rescaled so that the maximum is exactly 1. A zero grid is returned
    /// unchanged (still tagged raw).
    pub fn peak_normalized(&self) -> Self {
        let (raw_peak, scale) = match self.normalization {
            Normalization::PeakNormalized { raw_peak } => (raw_peak, self.max()),
            Normalization::Raw => (self.max(), self.max()),
        };
        if scale <= 0.0 {
            return self.clone();
        }
        let mut values: Vec<f64> = self.values.iter().map(|v| v / scale).collect();
        // Division by the maximum itself; guard against a last-bit shortfall.
        let (i, j) = self.argmax();
        values[j * self.x.count() + i] = 1.0;
        Self {
            values,
            normalization: Normalization::PeakNormalized { raw_peak },
            ..*self
        }
    }

    /// Trapezoid integral over the other component.
    pub fn marginal(&self, component: Component) -> Marginal1D {
        let (nx, ny) = (self.x.count(), self.y.count());
        match component {
            Component::X => {
                let values = (0..nx)
                    .map(|i| trapezoid(&self.column(i), self.y.step()))
                    .collect();
                Marginal1D::new(self.x, values)
            }
            Component::Y => {
                let values = (0..ny)
                    .map(|j| trapezoid(self.row(j), self.x.step()))
                    .collect();
                Marginal1D::new(self.y, values)
            }
        }
    }

    /// Trapezoid integral over the whole grid.
    pub fn integral(&self) -> f64 {
        let rows: Vec<f64> = (0..self.y.count())
            .map(|j| trapezoid(self.row(j), self.x.step()))
            .collect();
        trapezoid(&rows, self.y.step())
    }

    /// `√(Σ(a−b)²/Σb²)` against a grid of the same shape.
    pub fn relative_l2_distance(&self, other: &Self) -> Result<f64> {
        if self.values.len() != other.values.len() {
            return Err(Error::InvalidGrid("grids differ in shape".into()));
        }
        let mut num = 0.0;
        let mut den = 0.0;
        for (a, b) in self.values.iter().zip(&other.values) {
            num += (a - b) * (a - b);
            den += b * b;
        }
        Ok(sqrt(num / den))
    }
}

/// A non-negative profile on a uniform axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Marginal1D {
    axis: Axis,
    values: Vec<f64>,
}

impl Marginal1D {
    pub fn new(axis: Axis, values: Vec<f64>) -> Self {
        debug_assert_eq!(axis.count(), values.len());
        Self { axis, values }
    }

    pub fn axis(&self) -> &Axis {
        &self.axis
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (k, v) in self.values.iter().enumerate() {
            if *v > self.values[best] {
                best = k;
            }
        }
        best
    }

    pub fn argmax_point(&self) -> f64 {
        self.axis.point(self.argmax())
    }

    /// Peak position from a parabola through the maximal sample and its
    /// neighbours.
    pub fn peak_position(&self) -> f64 {
        let k = self.argmax();
        if k == 0 || k + 1 == self.values.len() {
            return self.axis.point(k);
        }
        let (a, b, c) = (self.values[k - 1], self.values[k], self.values[k + 1]);
        let den = a - 2.0 * b + c;
        let shift = if den < 0.0 { 0.5 * (a - c) / den } else { 0.0 };
        self.axis.point(k) + shift * self.axis.step()
    }

    pub fn peak_normalized(&self) -> Self {
        let m = self.max();
        if m <= 0.0 {
            return self.clone();
        }
        let k = self.argmax();
        let mut values: Vec<f64> = self.values.iter().map(|v| v / m).collect();
        values[k] = 1.0;
        Self::new(self.axis, values)
    }

    pub fn integral(&self) -> f64 {
        trapezoid(&self.values, self.axis.step())
    }

    pub fn mean(&self) -> f64 {
        let weighted: Vec<f64> = self
            .axis
            .points()
            .zip(&self.values)
            .map(|(x, v)| x * v)
            .collect();
        trapezoid(&weighted, self.axis.step()) / self.integral()
    }

    /// Standard deviation about [`Marginal1D::mean`].
    pub fn rms_width(&self) -> f64 {
        let mean = self.mean();
        let weighted: Vec<f64> = self
            .axis
            .points()
            .zip(&self.values)
            .map(|(x, v)| (x - mean) * (x - mean) * v)
            .collect();
        sqrt(trapezoid(&weighted, self.axis.step()) / self.integral())
    }

    /// Positions where the main lobe falls to `level × peak`, linearly
    /// interpolated. `None` if the lobe reaches the axis end first.
    pub fn crossings(&self, level: f64) -> Option<(f64, f64)> {
        let k = self.argmax();
        let threshold = level * self.values[k];
        let step = self.axis.step();
        let mut lo = None;
        for i in (0..k).rev() {
            if self.values[i] < threshold {
                let t = (threshold - self.values[i]) / (self.values[i + 1] - self.values[i]);
                lo = Some(self.axis.point(i) + t * step);
                break;
            }
        }
        let mut hi = None;
        for i in k + 1..self.values.len() {
            if self.values[i] < threshold {
                let t = (self.values[i - 1] - threshold) / (self.values[i - 1] - self.values[i]);
                hi = Some(self.axis.point(i - 1) + t * step);
                break;
            }
        }
        Some((lo?, hi?))
    }

    /// Half the distance between the `1/e` crossings of the main lobe.
    pub fn half_width_1e(&self) -> Option<f64> {
        self.crossings(exp(-1.0)).map(|(lo, hi)| 0.5 * (hi - lo))
    }

    /// Largest `|v(x) − v(−x)|` relative to the peak, for axes symmetric
    /// about zero.
    pub fn asymmetry(&self) -> f64 {
        let n = self.values.len();
        let m = self.max();
        (0..n)
            .map(|i| abs(self.values[i] - self.values[n - 1 - i]))
            .fold(0.0, f64::max)
            / m
    }

    /// Indices of strict local maxima, excluding the end points.
    pub fn local_maxima(&self) -> Vec<usize> {
        (1..self.values.len().saturating_sub(1))
            .filter(|&i| self.values[i] > self.values[i - 1] && self.values[i] >= self.values[i + 1])
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::sq;

    fn gaussian_grid() -> SpectrumGrid {
        let x = Axis::centered(0.0, 1.0, 101).unwrap();
        let y = Axis::new(-0.5, 1.5, 81).unwrap();
        SpectrumGrid::from_fn(x, y, AxisKind::WaveVector, |a, b| {
            3.0 * exp(-sq(a / 0.2) - sq((b - 0.5) / 0.1))
        })
        .unwrap()
    }

    #[test]
    fn layout_and_argmax() {
        let g = gaussian_grid();
        assert_eq!(g.values().len(), 101 * 81);
        let (i, j) = g.argmax();
        assert_eq!((i, j), (50, 40));
        let p = g.argmax_point();
        assert!(p.x.abs() < 1e-15 && (p.y - 0.5).abs() < 1e-12);
        assert_eq!(g.value(i, j), g.values()[j * 101 + i]);
    }

    #[test]
    fn normalization() {
        let g = gaussian_grid().peak_normalized();
        assert_eq!(g.max(), 1.0);
        match g.normalization() {
            Normalization::PeakNormalized { raw_peak } => assert!((raw_peak - 3.0).abs() < 1e-12),
            _ => panic!(),
        }
        let again = g.peak_normalized();
        assert_eq!(again.max(), 1.0);
        assert_eq!(again.normalization(), g.normalization());
    }

    #[test]
    fn rejects_negative_and_shape() {
        let a = Axis::new(0.0, 1.0, 2).unwrap();
        assert!(SpectrumGrid::new(a, a, AxisKind::WaveVector, alloc::vec![1.0, -1.0, 0.0, 0.0]).is_err());
        assert!(SpectrumGrid::new(a, a, AxisKind::WaveVector, alloc::vec![1.0; 3]).is_err());
    }

    #[test]
    fn marginals() {
        let g = gaussian_grid();
        let mx = g.marginal(Component::X);
        assert!(mx.asymmetry() < 1e-12);
        assert!((mx.half_width_1e().unwrap() - 0.2).abs() < 2e-3);
        assert!((mx.rms_width() - 0.2 / 2f64.sqrt()).abs() < 1e-3);
        let my = g.marginal(Component::Y);
        assert!((my.mean() - 0.5).abs() < 1e-9);
        assert!((my.peak_position() - 0.5).abs() < 1e-9);
        let total = 3.0 * crate::math::PI * 0.2 * 0.1;
        assert!((g.integral() - total).abs() < 1e-6 * total);
        assert!((mx.integral() - total).abs() < 1e-6 * total);
    }

    #[test]
    fn spike_marginal() {
        let x = Axis::new(0.0, 1.0, 16).unwrap();
        let y = Axis::new(0.0, 1.0, 16).unwrap();
        let g = SpectrumGrid::from_fn(x, y, AxisKind::WaveVector, |a, b| {
            if a == x.point(5) && b == y.point(7) {
                1.0
            } else {
                0.0
            }
        })
        .unwrap();
        let m = g.marginal(Component::X);
        let nonzero: Vec<usize> = (0..16).filter(|&i| m.values()[i] > 0.0).collect();
        assert_eq!(nonzero, [5]);
    }

    #[test]
    fn lobe_edges() {
        let a = Axis::new(0.0, 1.0, 11).unwrap();
        let m = Marginal1D::new(a, alloc::vec![0.0, 0.0, 1.0, 2.0, 4.0, 2.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let (lo, hi) = m.crossings(0.5).unwrap();
        assert!((lo - 0.3).abs() < 1e-12 && (hi - 0.5).abs() < 1e-12);
        let open = Marginal1D::new(a, alloc::vec![5.0, 4.0, 3.0, 2.0, 1.0, 0.5, 0.2, 0.1, 0.0, 0.0, 0.0]);
        assert!(open.crossings(0.5).is_none());
    }
}
