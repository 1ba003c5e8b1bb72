//! Trigonometric interpolation of closed curves sampled at uniform parameter steps.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Fourier coefficients of a periodic complex sequence, ordered `0, 1, .., m-1`
/// and scaled so that `z_j = sum_k c_k exp(2 pi i k j / m)`.
#[derive(Debug, Clone)]
pub struct TrigSeries {
    coeffs: Vec<Complex64>,
}

impl TrigSeries {
    pub fn from_samples(samples: &[Complex64]) -> Self {
        let m = samples.len();
        let mut buf = samples.to_vec();
        let mut planner = FftPlanner::new();
        planner.plan_fft_forward(m).process(&mut buf);
        let scale = 1.0 / m as f64;
        for c in &mut buf {
            *c *= scale;
        }
        TrigSeries { coeffs: buf }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Signed wavenumber of the coefficient stored at `k`.
    fn wavenumber(&self, k: usize) -> f64 {
        let m = self.coeffs.len();
        if 2 * k < m {
            k as f64
        } else if 2 * k == m {
            0.0 // Nyquist mode is dropped from derivatives and off-grid values
        } else {
            k as f64 - m as f64
        }
    }

    /// Value at a fractional sample index `s` (period `m`).
    pub fn eval(&self, s: f64) -> Complex64 {
        let m = self.coeffs.len();
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate() {
            if 2 * k == m {
                acc += c * (std::f64::consts::PI * s).cos();
                continue;
            }
            let phase = 2.0 * std::f64::consts::PI * self.wavenumber(k) * s / m as f64;
            acc += c * Complex64::from_polar(1.0, phase);
        }
        acc
    }

    /// Derivative with respect to the sample index at every node.
    pub fn derivative_at_nodes(&self) -> Vec<Complex64> {
        let m = self.coeffs.len();
        let mut spec: Vec<Complex64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * Complex64::new(0.0, 2.0 * std::f64::consts::PI * self.wavenumber(k) / m as f64))
            .collect();
        let mut planner = FftPlanner::new();
        planner.plan_fft_inverse(m).process(&mut spec);
        spec
    }

    /// Multiplies each mode by `filter(|wavenumber|)` and returns the filtered node values.
    pub fn filtered_nodes(&self, filter: impl Fn(f64) -> f64) -> Vec<Complex64> {
        let m = self.coeffs.len();
        let mut spec: Vec<Complex64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let w = if 2 * k == m { m as f64 / 2.0 } else { self.wavenumber(k).abs() };
                c * filter(w)
            })
            .collect();
        let mut planner = FftPlanner::new();
        planner.plan_fft_inverse(m).process(&mut spec);
        spec
    }

    /// Node values of the interpolant on a grid `factor` times finer.
    pub fn upsample(&self, factor: usize) -> Vec<Complex64> {
        let m = self.coeffs.len();
        let big = m * factor;
        let mut spec = vec![Complex64::new(0.0, 0.0); big];
        for (k, c) in self.coeffs.iter().enumerate() {
            if 2 * k == m {
                spec[k] += c * 0.5;
                spec[big - k] += c * 0.5;
            } else if 2 * k < m {
                spec[k] = *c;
            } else {
                spec[big - (m - k)] = *c;
            }
        }
        let mut planner = FftPlanner::new();
        planner.plan_fft_inverse(big).process(&mut spec);
        spec
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_is_reproduced_off_grid() {
        let m = 32;
        let samples: Vec<Complex64> = (0..m)
            .map(|j| Complex64::from_polar(2.0, 2.0 * std::f64::consts::PI * j as f64 / m as f64))
            .collect();
        let series = TrigSeries::from_samples(&samples);
        let z = series.eval(3.5);
        let expected = Complex64::from_polar(2.0, 2.0 * std::f64::consts::PI * 3.5 / m as f64);
        assert!((z - expected).norm() < 1e-12);
        let d = series.derivative_at_nodes();
        let dexp = samples[5] * Complex64::new(0.0, 2.0 * std::f64::consts::PI / m as f64);
        assert!((d[5] - dexp).norm() < 1e-12);
        let up = series.upsample(4);
        assert!((up[2] - Complex64::from_polar(2.0, 2.0 * std::f64::consts::PI * 0.5 / m as f64)).norm() < 1e-12);
    }
}
