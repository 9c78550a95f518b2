//! Response-spectrum probing of a network along a line through the domain,
//! decay-curve fitting, and the cut-off frequency / sampling density rule.
//!
//! Frequencies are in cycles per unit coordinate of the normalized
//! [−1, 1] domain throughout, so an axis segment has length 2 and bin `k`
//! sits at `k / 2` cycles per unit.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nn::{init_network, Mlp, NetworkConfig};
use crate::par;
use crate::points::Points;

pub const DEFAULT_TAU: f64 = 6e-4;
pub const DEFAULT_PROBE_POINTS: usize = 8192;
pub const DEFAULT_PROBE_MEMBERS: usize = 5;

/// Line through the [−1,1]^ℓ domain along which the response is sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LineDirection {
    AxisX,
    AxisY,
    AxisZ,
    /// Corner-to-corner diagonal; only meaningful for ℓ ≥ 2.
    Diagonal,
}

impl LineDirection {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "x" | "axis-x" => Ok(Self::AxisX),
            "y" | "axis-y" => Ok(Self::AxisY),
            "z" | "axis-z" => Ok(Self::AxisZ),
            "diag" | "diagonal" => Ok(Self::Diagonal),
            other => Err(Error::Parse(format!("unknown direction '{other}'"))),
        }
    }
}

/// `n` equidistant points along `direction`, spacing 2/n with no endpoint
/// duplication, plus the segment length the frequency grid refers to.
pub fn sample_line(dim: usize, direction: LineDirection, n: usize) -> Result<(Points, f64)> {
    if !(1..=3).contains(&dim) {
        return Err(Error::UnsupportedDim(dim));
    }
    if n < 2 {
        return Err(Error::InvalidConfig(format!("need at least 2 line samples, got {n}")));
    }
    let axis = match direction {
        LineDirection::AxisX => Some(0),
        LineDirection::AxisY => Some(1),
        LineDirection::AxisZ => Some(2),
        LineDirection::Diagonal => None,
    };
    if let Some(a) = axis {
        if a >= dim {
            return Err(Error::InvalidConfig(format!(
                "direction needs input dimension > {a}, network has {dim}"
            )));
        }
    } else if dim == 1 {
        return Err(Error::InvalidConfig("diagonal direction is undefined for 1-D input".into()));
    }
    let step = 2.0 / n as f64;
    let mut pts = Points::with_capacity(dim, n);
    let mut buf = vec![0.0f64; dim];
    for j in 0..n {
        let t = -1.0 + j as f64 * step;
        match axis {
            Some(a) => {
                buf.iter_mut().for_each(|c| *c = 0.0);
                buf[a] = t;
            }
            None => buf.iter_mut().for_each(|c| *c = t),
        }
        pts.push(&buf);
    }
    let segment_length = match axis {
        Some(_) => 2.0,
        None => 2.0 * (dim as f64).sqrt(),
    };
    Ok((pts, segment_length))
}

/// Shift to zero mean and scale to unit population standard deviation.
pub fn whiten(signal: &[f64]) -> Result<Vec<f64>> {
    assert!(signal.len() >= 2, "whiten needs at least 2 samples");
    let n = signal.len() as f64;
    let mean = signal.iter().sum::<f64>() / n;
    let var = signal.iter().map(|&y| (y - mean) * (y - mean)).sum::<f64>() / n;
    let std = var.sqrt();
    if std < 1e-12 {
        return Err(Error::DegenerateSignal { std });
    }
    Ok(signal.iter().map(|&y| (y - mean) / std).collect())
}

/// One-sided amplitude spectrum of a real signal sampled over a segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Bin frequencies `k / segment_length`, strictly increasing from 0.
    pub frequencies: Vec<f64>,
    /// One-sided amplitudes: `|X_0|/N`, `2|X_k|/N` in the middle, `|X_{N/2}|/N`
    /// at Nyquist for even N.
    pub magnitudes: Vec<f64>,
    pub sample_count: usize,
    pub segment_length: f64,
}

/// One-sided amplitude spectrum via FFT (any N ≥ 2).
pub fn fft_magnitude(signal: &[f64], segment_length: f64) -> Spectrum {
    let n = signal.len();
    assert!(n >= 2, "fft_magnitude needs at least 2 samples");
    assert!(segment_length > 0.0);
    let mut buf: Vec<Complex<f64>> = signal.iter().map(|&y| Complex::new(y, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let half = n / 2;
    let inv_n = 1.0 / n as f64;
    let mut frequencies = Vec::with_capacity(half + 1);
    let mut magnitudes = Vec::with_capacity(half + 1);
    for k in 0..=half {
        frequencies.push(k as f64 / segment_length);
        let amp = buf[k].norm() * inv_n;
        let one_sided = if k == 0 || (n % 2 == 0 && k == half) { amp } else { 2.0 * amp };
        magnitudes.push(one_sided);
    }
    Spectrum { frequencies, magnitudes, sample_count: n, segment_length }
}

/// Mean one-sided spectrum over M randomized networks of one architecture,
/// with the members retained for consistency checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntrinsicSpectrum {
    pub frequencies: Vec<f64>,
    /// Elementwise mean of the member magnitudes.
    pub magnitudes: Vec<f64>,
    pub members: Vec<Vec<f64>>,
    pub sample_count: usize,
    pub segment_length: f64,
}

impl IntrinsicSpectrum {
    pub fn member_count(&self) -> usize {
        self.members.len()
    }

    /// CSV with a frequency column, the mean, and one column per member.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("frequency,magnitude");
        for i in 0..self.members.len() {
            out.push_str(&format!(",member_{i}"));
        }
        out.push('\n');
        for k in 0..self.frequencies.len() {
            out.push_str(&format!("{},{}", self.frequencies[k], self.magnitudes[k]));
            for m in &self.members {
                out.push_str(&format!(",{}", m[k]));
            }
            out.push('\n');
        }
        out
    }
}

/// Probe M randomized instances of the architecture along a line and
/// average their whitened response spectra. Member i uses seed
/// `config.seed + i` (1-based), leaving `config.seed` itself untouched for
/// the network that will actually be trained.
pub fn intrinsic_spectrum(
    config: &NetworkConfig,
    members: usize,
    n_points: usize,
    direction: LineDirection,
) -> Result<IntrinsicSpectrum> {
    config.validate()?;
    if members == 0 {
        return Err(Error::InvalidConfig("need at least one probe member".into()));
    }
    let (pts, segment_length) = sample_line(config.input_dim, direction, n_points)?;
    let results: Vec<Result<Spectrum>> = par::map_indices(members, |i| {
        let mut c = config.clone();
        c.seed = config.seed.wrapping_add(i as u64 + 1);
        let mlp = init_network(&c)?;
        member_spectrum(&mlp, &pts, segment_length)
    });
    let mut member_mags = Vec::with_capacity(members);
    let mut frequencies = Vec::new();
    for r in results {
        let sp = r?;
        frequencies = sp.frequencies;
        member_mags.push(sp.magnitudes);
    }
    let bins = frequencies.len();
    let mut magnitudes = vec![0.0f64; bins];
    for m in &member_mags {
        for k in 0..bins {
            magnitudes[k] += m[k];
        }
    }
    let inv = 1.0 / members as f64;
    magnitudes.iter_mut().for_each(|v| *v *= inv);
    Ok(IntrinsicSpectrum {
        frequencies,
        magnitudes,
        members: member_mags,
        sample_count: n_points,
        segment_length,
    })
}

fn member_spectrum(mlp: &Mlp, pts: &Points, segment_length: f64) -> Result<Spectrum> {
    let response = mlp.forward_points(pts);
    let whitened = whiten(&response)?;
    Ok(fft_magnitude(&whitened, segment_length))
}

/// Coefficients of the decay curve `C(F) = a / (F² + b)` fitted to a
/// spectrum, and the cut-off derived from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumFit {
    pub a: f64,
    pub b: f64,
    /// Sum of squared fit errors over the positive-frequency bins.
    pub residual: f64,
    /// Set when Gauss–Newton refinement diverged and the coarse grid
    /// optimum was kept.
    pub grid_fallback: bool,
    /// Cut-off frequency, once solved by [`cutoff_frequency`].
    pub cutoff: Option<f64>,
    /// Threshold the cut-off was solved against.
    pub tau: Option<f64>,
}

impl SpectrumFit {
    pub fn curve(&self, f: f64) -> f64 {
        self.a / (f * f + self.b)
    }

    /// dC/dF; negative on the decaying tail.
    pub fn curve_derivative(&self, f: f64) -> f64 {
        let d = f * f + self.b;
        -2.0 * self.a * f / (d * d)
    }
}

/// Least-squares fit of `a / (F² + b)` to the positive-frequency magnitudes:
/// coarse log-grid search with the scale solved in closed form, then damped
/// Gauss–Newton refinement.
pub fn fit_spectrum_curve(frequencies: &[f64], magnitudes: &[f64]) -> Result<SpectrumFit> {
    let pairs: Vec<(f64, f64)> = frequencies
        .iter()
        .zip(magnitudes)
        .filter(|(f, _)| **f > 0.0)
        .map(|(&f, &m)| (f, m))
        .collect();
    if pairs.len() < 8 {
        return Err(Error::InvalidConfig(format!(
            "spectrum fit needs at least 8 positive-frequency bins, got {}",
            pairs.len()
        )));
    }

    let sse = |a: f64, b: f64| -> f64 {
        pairs.iter().map(|&(f, y)| {
            let r = a / (f * f + b) - y;
            r * r
        }).sum()
    };
    // For fixed b the optimal a is linear least squares in u = 1/(F²+b).
    let best_a = |b: f64| -> f64 {
        let (mut num, mut den) = (0.0f64, 0.0f64);
        for &(f, y) in &pairs {
            let u = 1.0 / (f * f + b);
            num += y * u;
            den += u * u;
        }
        (num / den).max(f64::MIN_POSITIVE)
    };

    let mut best = (best_a(1.0), 1.0, f64::INFINITY);
    for i in 0..=240 {
        let b = 10f64.powf(-6.0 + i as f64 * 0.05); // 1e-6 .. 1e6
        let a = best_a(b);
        let s = sse(a, b);
        if s < best.2 {
            best = (a, b, s);
        }
    }
    let (mut a, mut b, mut cur_sse) = best;

    // Damped Gauss–Newton on (a, b); only improving steps are accepted, so
    // divergence shows up as no accepted step at all.
    let mut any_step_accepted = false;
    'outer: for _ in 0..200 {
        let (mut jtj00, mut jtj01, mut jtj11) = (0.0f64, 0.0, 0.0);
        let (mut jtr0, mut jtr1) = (0.0f64, 0.0);
        for &(f, y) in &pairs {
            let u = 1.0 / (f * f + b);
            let r = a * u - y;
            let ja = u;
            let jb = -a * u * u;
            jtj00 += ja * ja;
            jtj01 += ja * jb;
            jtj11 += jb * jb;
            jtr0 += ja * r;
            jtr1 += jb * r;
        }
        let det = jtj00 * jtj11 - jtj01 * jtj01;
        if !det.is_finite() || det.abs() < 1e-300 {
            break;
        }
        let da = -(jtj11 * jtr0 - jtj01 * jtr1) / det;
        let db = -(jtj00 * jtr1 - jtj01 * jtr0) / det;
        let mut t = 1.0;
        for _ in 0..40 {
            let (na, nb) = (a + t * da, b + t * db);
            if na > 0.0 && nb > 0.0 {
                let s = sse(na, nb);
                if s.is_finite() && s < cur_sse {
                    let gain = cur_sse - s;
                    a = na;
                    b = nb;
                    cur_sse = s;
                    any_step_accepted = true;
                    if gain < 1e-16 * (1.0 + cur_sse) {
                        break 'outer;
                    }
                    continue 'outer;
                }
            }
            t *= 0.5;
        }
        break; // no improving step at any damping
    }
    Ok(SpectrumFit {
        a,
        b,
        residual: cur_sse,
        grid_fallback: !any_step_accepted,
        cutoff: None,
        tau: None,
    })
}

/// Smallest frequency on the decaying tail where |C'(F)| falls to `tau`,
/// solved by bracketing + bisection. The tail starts at the maximum of
/// |C'|, F* = √(b/3).
pub fn cutoff_frequency(fit: &SpectrumFit, tau: f64) -> Result<f64> {
    assert!(tau > 0.0 && fit.a > 0.0 && fit.b > 0.0);
    let slope = |f: f64| fit.curve_derivative(f).abs();
    let f_star = (fit.b / 3.0).sqrt();
    let max_slope = slope(f_star);
    if max_slope <= tau {
        return Err(Error::NoCutoff { tau, max_slope });
    }
    let mut lo = f_star;
    let mut hi = f_star.max(1e-12) * 2.0;
    let mut guard = 0;
    while slope(hi) > tau {
        lo = hi;
        hi *= 2.0;
        guard += 1;
        assert!(guard < 2048, "cut-off bracket failed to expand");
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if slope(mid) > tau {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-9 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Convenience: fit + cut-off in one call, recording `tau` in the result.
pub fn fit_with_cutoff(frequencies: &[f64], magnitudes: &[f64], tau: f64) -> Result<SpectrumFit> {
    let mut fit = fit_spectrum_curve(frequencies, magnitudes)?;
    let fc = cutoff_frequency(&fit, tau)?;
    fit.cutoff = Some(fc);
    fit.tau = Some(tau);
    Ok(fit)
}

/// Per-axis Nyquist rate `2·F_c` and sampling density `(2·F_c)^ℓ`.
pub fn recommend_density(cutoff: f64, dim: usize) -> Result<(f64, f64)> {
    if !(1..=3).contains(&dim) {
        return Err(Error::UnsupportedDim(dim));
    }
    if !(cutoff > 0.0) {
        return Err(Error::InvalidConfig(format!("cut-off must be positive, got {cutoff}")));
    }
    let rate = 2.0 * cutoff;
    Ok((rate, rate.powi(dim as i32)))
}

/// Single-network spectrum → fit → cut-off on the given (possibly trained)
/// parameters; the training hook that tracks the cut-off trajectory.
pub fn probe_trained_network(
    mlp: &Mlp,
    n_points: usize,
    direction: LineDirection,
    tau: f64,
) -> Result<SpectrumFit> {
    let (pts, segment_length) = sample_line(mlp.config.input_dim, direction, n_points)?;
    let sp = member_spectrum(mlp, &pts, segment_length)?;
    fit_with_cutoff(&sp.frequencies, &sp.magnitudes, tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::{EncodingKind, EncodingSpec};
    use crate::nn::{HiddenActivation, InitScheme, OutputActivation};
    use std::f64::consts::PI;

    #[test]
    fn line_1d() {
        let (pts, t) = sample_line(1, LineDirection::AxisX, 4).unwrap();
        let got: Vec<f64> = pts.iter().map(|p| p[0]).collect();
        assert_eq!(got, vec![-1.0, -0.5, 0.0, 0.5]);
        assert_eq!(t, 2.0);
    }

    #[test]
    fn line_3d_axis_and_diagonal() {
        let (pts, _) = sample_line(3, LineDirection::AxisX, 2).unwrap();
        assert_eq!(pts.get(0), &[-1.0, 0.0, 0.0]);
        assert_eq!(pts.get(1), &[0.0, 0.0, 0.0]);
        let (pts, t) = sample_line(3, LineDirection::Diagonal, 2).unwrap();
        assert_eq!(pts.get(0), &[-1.0, -1.0, -1.0]);
        assert_eq!(pts.get(1), &[0.0, 0.0, 0.0]);
        assert!((t - 2.0 * 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn line_rejects_bad_directions() {
        assert!(sample_line(1, LineDirection::Diagonal, 8).is_err());
        assert!(sample_line(2, LineDirection::AxisZ, 8).is_err());
        assert!(sample_line(1, LineDirection::AxisX, 1).is_err());
    }

    #[test]
    fn whiten_fixed_point_and_errors() {
        let sig = vec![1.0, -1.0, 1.0, -1.0];
        assert_eq!(whiten(&sig).unwrap(), sig);
        assert!(matches!(whiten(&[5.0, 5.0, 5.0]), Err(Error::DegenerateSignal { .. })));
        // [0,1,2,3]: mean 1.5, population std sqrt(1.25)
        let w = whiten(&[0.0, 1.0, 2.0, 3.0]).unwrap();
        let std = 1.25f64.sqrt();
        for (got, x) in w.iter().zip([0.0, 1.0, 2.0, 3.0]) {
            assert!((got - (x - 1.5) / std).abs() < 1e-15);
        }
        let mean: f64 = w.iter().sum::<f64>() / 4.0;
        let var: f64 = w.iter().map(|y| (y - mean) * (y - mean)).sum::<f64>() / 4.0;
        assert!(mean.abs() < 1e-15 && (var - 1.0).abs() < 1e-14);
    }

    #[test]
    fn fft_pure_tone_peaks_at_its_bin() {
        let n = 256;
        let sig: Vec<f64> = (0..n).map(|j| (2.0 * PI * 5.0 * j as f64 / n as f64).sin()).collect();
        let sp = fft_magnitude(&sig, 1.0);
        assert_eq!(sp.frequencies.len(), n / 2 + 1);
        for (k, (&f, &m)) in sp.frequencies.iter().zip(&sp.magnitudes).enumerate() {
            if k == 5 {
                assert!((m - 1.0).abs() < 1e-9, "peak magnitude {m}");
                assert_eq!(f, 5.0);
            } else {
                assert!(m < 1e-9, "leak {m} at bin {k}");
            }
        }
    }

    #[test]
    fn fft_zero_signal_and_two_tones() {
        let sp = fft_magnitude(&vec![0.0; 64], 2.0);
        assert!(sp.magnitudes.iter().all(|&m| m == 0.0));

        let n = 128;
        let t = 4.0;
        let sig: Vec<f64> = (0..n)
            .map(|j| {
                let x = j as f64 / n as f64; // position in units of T
                (2.0 * PI * 3.0 * x).sin() + 0.5 * (2.0 * PI * 9.0 * x).cos()
            })
            .collect();
        let sp = fft_magnitude(&sig, t);
        assert!((sp.magnitudes[3] - 1.0).abs() < 1e-9);
        assert!((sp.magnitudes[9] - 0.5).abs() < 1e-9);
        assert!((sp.frequencies[3] - 3.0 / t).abs() < 1e-15);
        assert!((sp.frequencies[9] - 9.0 / t).abs() < 1e-15);
    }

    fn tiny_config(seed: u64) -> NetworkConfig {
        NetworkConfig {
            input_dim: 1,
            layers: 3,
            width: 16,
            hidden_activation: HiddenActivation::Softplus { beta: 100.0 },
            output_activation: OutputActivation::Tanh,
            encoding: EncodingSpec::new(EncodingKind::Sinusoidal { degree: 3 }, 1).unwrap(),
            init: InitScheme::DefaultUniform,
            seed,
        }
    }

    #[test]
    fn intrinsic_of_one_member_is_that_member() {
        let sp = intrinsic_spectrum(&tiny_config(17), 1, 512, LineDirection::AxisX).unwrap();
        assert_eq!(sp.magnitudes, sp.members[0]);
    }

    #[test]
    fn intrinsic_mean_is_exact_arithmetic_mean() {
        let sp = intrinsic_spectrum(&tiny_config(17), 4, 256, LineDirection::AxisX).unwrap();
        for k in 0..sp.frequencies.len() {
            let mean = sp.members.iter().map(|m| m[k]).sum::<f64>() / 4.0;
            assert!((sp.magnitudes[k] - mean).abs() <= 1e-15 * mean.max(1.0));
        }
    }

    #[test]
    fn member_spectra_satisfy_parseval() {
        // Whitened signal has unit power, so the two-sided squared
        // magnitudes must sum to 1.
        let sp = intrinsic_spectrum(&tiny_config(3), 3, 512, LineDirection::AxisX).unwrap();
        let n = sp.sample_count;
        for m in &sp.members {
            let mut power = m[0] * m[0] + m[n / 2] * m[n / 2];
            for k in 1..n / 2 {
                power += m[k] * m[k] / 2.0;
            }
            assert!((power - 1.0).abs() < 1e-9, "two-sided power {power}");
        }
    }

    #[test]
    fn fit_recovers_synthetic_curve() {
        let freqs: Vec<f64> = (0..512).map(|k| k as f64 / 2.0).collect();
        let mags: Vec<f64> = freqs.iter().map(|&f| 2.0 / (f * f + 9.0)).collect();
        let fit = fit_spectrum_curve(&freqs, &mags).unwrap();
        assert!((fit.a - 2.0).abs() < 1e-6, "a = {}", fit.a);
        assert!((fit.b - 9.0).abs() < 1e-6, "b = {}", fit.b);
        assert!(fit.residual < 1e-10);

        let scaled: Vec<f64> = mags.iter().map(|m| m * 10.0).collect();
        let fit10 = fit_spectrum_curve(&freqs, &scaled).unwrap();
        assert!((fit10.a - 20.0).abs() < 1e-5);
        assert!((fit10.b - 9.0).abs() < 1e-5);
    }

    #[test]
    fn fit_on_noise_reports_large_residual() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let freqs: Vec<f64> = (0..256).map(|k| k as f64 / 2.0).collect();
        let clean: Vec<f64> = freqs.iter().map(|&f| 2.0 / (f * f + 9.0)).collect();
        let noise: Vec<f64> = freqs.iter().map(|_| rng.gen::<f64>()).collect();
        let fit_clean = fit_spectrum_curve(&freqs, &clean).unwrap();
        let fit_noise = fit_spectrum_curve(&freqs, &noise).unwrap();
        assert!(fit_noise.residual > 1e3 * fit_clean.residual.max(1e-12));
    }

    #[test]
    fn cutoff_matches_dense_scan() {
        let fit = SpectrumFit {
            a: 2.0,
            b: 9.0,
            residual: 0.0,
            grid_fallback: false,
            cutoff: None,
            tau: None,
        };
        let tau = 6e-4;
        let fc = cutoff_frequency(&fit, tau).unwrap();
        // Independent dense scan of |C'(F)| = 2aF/(F²+b)² at step 1e-4.
        let mut scan = (fit.b / 3.0).sqrt();
        while 2.0 * fit.a * scan / (scan * scan + fit.b).powi(2) > tau {
            scan += 1e-4;
        }
        assert!((fc - scan).abs() < 1e-3, "bisection {fc} vs scan {scan}");
        assert!((fit.curve_derivative(fc).abs() - tau).abs() < 1e-6);
    }

    #[test]
    fn cutoff_unreachable_threshold_errors() {
        let fit = SpectrumFit {
            a: 2.0,
            b: 9.0,
            residual: 0.0,
            grid_fallback: false,
            cutoff: None,
            tau: None,
        };
        assert!(matches!(cutoff_frequency(&fit, 10.0), Err(Error::NoCutoff { .. })));
    }

    #[test]
    fn recommend_density_examples() {
        let (rate, mu) = recommend_density(63.0, 3).unwrap();
        assert_eq!(rate, 126.0);
        assert_eq!(mu, 2_000_376.0);
        let (rate, mu) = recommend_density(20.0, 1).unwrap();
        assert_eq!(rate, 40.0);
        assert_eq!(mu, 40.0);
        let (rate, mu) = recommend_density(42.0, 3).unwrap();
        assert_eq!(rate, 84.0);
        assert_eq!(mu, 592_704.0);
        assert!(recommend_density(10.0, 4).is_err());
        assert!(recommend_density(0.0, 2).is_err());
    }

    #[test]
    fn fresh_probe_equals_single_member() {
        let cfg = tiny_config(30);
        let sp = intrinsic_spectrum(&cfg, 1, 1024, LineDirection::AxisX).unwrap();
        let fit_a = fit_with_cutoff(&sp.frequencies, &sp.magnitudes, DEFAULT_TAU).unwrap();
        let mut member_cfg = cfg.clone();
        member_cfg.seed = cfg.seed + 1;
        let mlp = init_network(&member_cfg).unwrap();
        let fit_b = probe_trained_network(&mlp, 1024, LineDirection::AxisX, DEFAULT_TAU).unwrap();
        assert_eq!(fit_a.cutoff, fit_b.cutoff);
        assert_eq!(fit_a.a, fit_b.a);
    }

    #[test]
    fn constant_network_probe_is_degenerate() {
        let cfg = tiny_config(0);
        let mut mlp = init_network(&cfg).unwrap();
        for l in &mut mlp.layers {
            l.weights.iter_mut().for_each(|w| *w = 0.0);
            l.biases.iter_mut().for_each(|b| *b = 0.0);
        }
        let err = probe_trained_network(&mlp, 256, LineDirection::AxisX, DEFAULT_TAU);
        assert!(matches!(err, Err(Error::DegenerateSignal { .. })));
    }
}
