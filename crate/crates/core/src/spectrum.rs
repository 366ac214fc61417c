//! Odd-harmonic spectrum of the snoidal oscillator.
//!
//! ```text
//! sn(p0 t, i) = sum_n b_n sin(omega_n t),   omega_n = (2n + 1) pi p0 / (2 K(i)),
//! b_n = (2 pi / K(i)) (-1)^n e^{-(n + 1/2) pi} / (1 + e^{-(2n + 1) pi})
//! ```
//!
//! Measured amplitudes are sine-series coefficients read off an unwindowed
//! FFT of a period-matched series: for bin `k`, `b = -2 Im(X_k) / N` with
//! `X_k = sum_j x_j exp(-2 pi i j k / N)`.

use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::elliptic::quarter_period_imaginary_unit;
use crate::error::{Error, Result};
use crate::grid::fmt_f64;

/// Largest harmonic index with a coefficient above double-precision noise.
pub const MAX_HARMONIC: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumLine {
    pub n: usize,
    pub omega: f64,
    pub analytic_amplitude: f64,
    pub measured_amplitude: f64,
    /// Frequency of the largest FFT bin within half a harmonic spacing of `omega`.
    pub peak_omega: Option<f64>,
}

impl SpectrumLine {
    pub fn abs_error(&self) -> f64 {
        (self.measured_amplitude - self.analytic_amplitude).abs()
    }
}

/// `omega_n = (2n + 1) pi p0 / (2 K(i))`.
pub fn harmonic_frequency(p0: f64, n: usize) -> f64 {
    (2 * n + 1) as f64 * PI * p0 / (2.0 * quarter_period_imaginary_unit())
}

/// `b_n` of the series above.
pub fn analytic_amplitude(n: usize) -> f64 {
    let k = quarter_period_imaginary_unit();
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let nf = n as f64;
    2.0 * PI / k * sign * (-(nf + 0.5) * PI).exp() / (1.0 + (-(2.0 * nf + 1.0) * PI).exp())
}

/// Lines `0..=n_max` with analytic amplitudes; `measured_amplitude` is left at 0.
pub fn analytic_coefficients(p0: f64, n_max: usize) -> Result<Vec<SpectrumLine>> {
    if n_max > MAX_HARMONIC {
        return Err(Error::config("n_max", format!("at most {MAX_HARMONIC}, got {n_max}")));
    }
    Ok((0..=n_max)
        .map(|n| SpectrumLine {
            n,
            omega: harmonic_frequency(p0, n),
            analytic_amplitude: analytic_amplitude(n),
            measured_amplitude: 0.0,
            peak_omega: None,
        })
        .collect())
}

/// `sum_{n <= n_max} b_n sin((2n + 1) pi u / (2 K(i)))`.
pub fn partial_sum(u: f64, n_max: usize) -> f64 {
    let k = quarter_period_imaginary_unit();
    (0..=n_max)
        .map(|n| analytic_amplitude(n) * ((2 * n + 1) as f64 * PI * u / (2.0 * k)).sin())
        .sum()
}

/// FFT analysis of a sampled oscillator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasuredSpectrum {
    pub lines: Vec<SpectrumLine>,
    /// Number of oscillator periods the series covers.
    pub periods: usize,
    /// Largest even-harmonic bin power relative to the fundamental.
    pub even_to_fundamental: f64,
    /// FFT bin width in angular frequency.
    pub bin_width: f64,
}

/// Number of whole periods `4 K(i) / p0` in `len * step`, or an error if the
/// series is not period-matched.
pub fn matched_periods(len: usize, step: f64, p0: f64) -> Result<usize> {
    if !(step.is_finite() && step > 0.0) || !(p0.is_finite() && p0 > 0.0) {
        return Err(Error::config("step", "sample step and p0 must be positive"));
    }
    let period = 4.0 * quarter_period_imaginary_unit() / p0;
    let m = len as f64 * step / period;
    let mr = m.round();
    if mr < 1.0 || (m - mr).abs() > 1e-9 * m.max(1.0) {
        return Err(Error::config(
            "step",
            format!("series spans {m} periods; it must span a whole number to avoid leakage"),
        ));
    }
    Ok(mr as usize)
}

/// Step giving exactly `len` samples over `periods` periods.
pub fn matched_step(len: usize, periods: usize, p0: f64) -> f64 {
    periods as f64 * 4.0 * quarter_period_imaginary_unit() / p0 / len as f64
}

/// Measures the odd-harmonic sine amplitudes of `series / amplitude`, sampled
/// at `t_j = j step` from a zero of the oscillator.
pub fn measured_spectrum(series: &[f64], step: f64, p0: f64, amplitude: f64, n_max: usize) -> Result<MeasuredSpectrum> {
    let n = series.len();
    if n < 1024 || !n.is_power_of_two() {
        return Err(Error::config("samples", format!("series length must be a power of two >= 1024, got {n}")));
    }
    if amplitude == 0.0 || !amplitude.is_finite() {
        return Err(Error::config("amplitude", "must be finite and non-zero"));
    }
    let m = matched_periods(n, step, p0)?;
    let mut lines = analytic_coefficients(p0, n_max)?;
    let top = m * (2 * n_max + 1);
    if top >= n / 2 {
        return Err(Error::config("n_max", "harmonics beyond the Nyquist bin"));
    }

    let mut buf: Vec<Complex<f64>> = series.iter().map(|&x| Complex::new(x / amplitude, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let nf = n as f64;
    let bin_width = 2.0 * PI / (nf * step);
    let power = |k: usize| buf[k].norm_sqr();

    for line in &mut lines {
        let k = m * (2 * line.n + 1);
        line.measured_amplitude = -2.0 * buf[k].im / nf;
        let lo = k.saturating_sub(m).max(1);
        let hi = (k + m).min(n / 2);
        let peak = (lo..=hi).fold(lo, |best, j| if power(j) > power(best) { j } else { best });
        line.peak_omega = (power(peak) > 0.0).then_some(peak as f64 * bin_width);
    }

    let fundamental = power(m);
    let even = (1..)
        .map(|j| 2 * j * m)
        .take_while(|&k| k < n / 2)
        .map(power)
        .fold(0.0, f64::max);
    let even_to_fundamental = if fundamental > 0.0 { even / fundamental } else { 0.0 };
    Ok(MeasuredSpectrum {
        lines,
        periods: m,
        even_to_fundamental,
        bin_width,
    })
}

/// `n,omega,analytic,measured,abs_error`.
pub fn write_spectrum_csv<W: std::io::Write>(mut out: W, lines: &[SpectrumLine]) -> Result<()> {
    writeln!(out, "n,omega,analytic,measured,abs_error")?;
    for l in lines {
        writeln!(
            out,
            "{},{},{},{},{}",
            l.n,
            fmt_f64(l.omega),
            fmt_f64(l.analytic_amplitude),
            fmt_f64(l.measured_amplitude),
            fmt_f64(l.abs_error())
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::sn_imaginary_unit;

    #[test]
    fn coefficients_alternate_and_decay() {
        let lines = analytic_coefficients(1.0, 8).unwrap();
        for w in lines.windows(2) {
            assert!(w[0].analytic_amplitude * w[1].analytic_amplitude < 0.0);
            assert!(w[1].analytic_amplitude.abs() < w[0].analytic_amplitude.abs());
        }
        assert!(analytic_coefficients(1.0, 21).is_err());
    }

    #[test]
    fn series_reproduces_sn_pointwise() {
        for &u in &[0.1, 0.7, 1.3, 2.9, -4.0] {
            assert!((partial_sum(u, 12) - sn_imaginary_unit(u)).abs() < 1e-12, "u = {u}");
        }
    }

    #[test]
    fn zero_series_has_zero_amplitudes() {
        let n = 1024;
        let step = matched_step(n, 2, 1.0);
        let s = measured_spectrum(&vec![0.0; n], step, 1.0, 1.0, 4).unwrap();
        assert!(s.lines.iter().all(|l| l.measured_amplitude == 0.0));
    }

    #[test]
    fn leakage_is_refused() {
        let n = 1024;
        let step = matched_step(n, 2, 1.0) * 1.01;
        assert!(matches!(
            measured_spectrum(&vec![0.0; n], step, 1.0, 1.0, 4),
            Err(Error::Config { .. })
        ));
        assert!(measured_spectrum(&vec![0.0; 1000], 0.1, 1.0, 1.0, 4).is_err());
    }

    #[test]
    fn csv_has_the_expected_columns() {
        let mut out = Vec::new();
        write_spectrum_csv(&mut out, &analytic_coefficients(1.0, 2).unwrap()).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("n,omega,analytic,measured,abs_error\n"));
        assert_eq!(text.lines().count(), 4);
    }
}
