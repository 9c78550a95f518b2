//! Input feature maps applied before the MLP: sinusoidal positional
//! encoding, Gaussian Fourier features, or the identity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Which feature map to apply to network inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EncodingKind {
    /// Raw coordinates, unchanged.
    Identity,
    /// Axis-aligned sinusoidal encoding of degree `D`: per coordinate
    /// `[x, sin(2^p πx), cos(2^p πx)]` for p = 0..=D.
    Sinusoidal { degree: u32 },
    /// Gaussian Fourier features: `[sin(2πBx), cos(2πBx)]` with the rows of
    /// `B` drawn once from N(0, σ²) per the construction seed.
    GaussianFourier { sigma: f64, features: usize, seed: u64 },
}

/// A validated encoding bound to an input dimension, ready to apply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodingSpec {
    pub kind: EncodingKind,
    pub input_dim: usize,
    /// Frequency matrix for the Gaussian Fourier variant, row-major
    /// `features × input_dim`; empty otherwise.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    freq_matrix: Vec<f64>,
}

impl EncodingSpec {
    pub fn new(kind: EncodingKind, input_dim: usize) -> Result<Self> {
        if !(1..=3).contains(&input_dim) {
            return Err(Error::UnsupportedDim(input_dim));
        }
        let freq_matrix = match &kind {
            EncodingKind::GaussianFourier { sigma, features, seed } => {
                if *sigma <= 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "gaussian-fourier sigma must be positive, got {sigma}"
                    )));
                }
                if *features == 0 {
                    return Err(Error::InvalidConfig(
                        "gaussian-fourier needs at least one feature".into(),
                    ));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..features * input_dim)
                    .map(|_| sample_standard_normal(&mut rng) * sigma)
                    .collect()
            }
            _ => Vec::new(),
        };
        Ok(Self { kind, input_dim, freq_matrix })
    }

    /// Dimension of the encoded feature vector.
    pub fn output_dim(&self) -> usize {
        match &self.kind {
            EncodingKind::Identity => self.input_dim,
            EncodingKind::Sinusoidal { degree } => {
                self.input_dim + 2 * self.input_dim * (*degree as usize + 1)
            }
            EncodingKind::GaussianFourier { features, .. } => 2 * features,
        }
    }

    /// Apply the encoding, appending features to `out`.
    pub fn encode_into(&self, x: &[f64], out: &mut Vec<f64>) {
        debug_assert_eq!(x.len(), self.input_dim);
        match &self.kind {
            EncodingKind::Identity => out.extend_from_slice(x),
            EncodingKind::Sinusoidal { degree } => {
                out.extend_from_slice(x);
                for p in 0..=*degree {
                    let scale = (1u64 << p) as f64 * PI;
                    for &xi in x {
                        let (s, c) = (scale * xi).sin_cos();
                        out.push(s);
                        out.push(c);
                    }
                }
            }
            EncodingKind::GaussianFourier { features, .. } => {
                let m = *features;
                let start = out.len();
                out.resize(start + 2 * m, 0.0);
                for row in 0..m {
                    let b = &self.freq_matrix[row * self.input_dim..(row + 1) * self.input_dim];
                    let dot: f64 = b.iter().zip(x).map(|(bi, xi)| bi * xi).sum();
                    let (s, c) = (2.0 * PI * dot).sin_cos();
                    out[start + row] = s;
                    out[start + m + row] = c;
                }
            }
        }
    }

    pub fn encode(&self, x: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.output_dim());
        self.encode_into(x, &mut out);
        out
    }
}

/// Highest frequency carried by the sinusoidal encoding of degree `D`,
/// in cycles per unit coordinate: `sin(2^D πx)` completes `2^(D−1)` cycles
/// per unit, so this is `2^(D−1)` (0.5 at D = 0).
pub fn highest_pe_frequency(degree: u32) -> f64 {
    2f64.powi(degree as i32 - 1)
}

/// Standard normal via Box–Muller; keeps the sample stream identical
/// across rand versions.
pub(crate) fn sample_standard_normal<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let u1: f64 = rng.gen::<f64>();
        if u1 <= f64::MIN_POSITIVE {
            continue;
        }
        let u2: f64 = rng.gen::<f64>();
        return (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos();
    }
}



#[cfg(test)]
mod tests {
    use super::*;

    fn sinusoidal(dim: usize, degree: u32) -> EncodingSpec {
        EncodingSpec::new(EncodingKind::Sinusoidal { degree }, dim).unwrap()
    }

    #[test]
    fn encode_at_zero() {
        // sin 0 = 0, cos 0 = 1 in every band.
        let spec = sinusoidal(1, 2);
        assert_eq!(spec.encode(&[0.0]), vec![0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0]);
    }

    #[test]
    fn encode_at_half() {
        let spec = sinusoidal(1, 1);
        let enc = spec.encode(&[0.5]);
        let expect = [0.5, 1.0, 0.0, 0.0, -1.0];
        for (got, want) in enc.iter().zip(expect) {
            assert!((got - want).abs() < 1e-15, "{got} vs {want}");
        }
    }

    #[test]
    fn output_dims() {
        assert_eq!(sinusoidal(3, 5).output_dim(), 39);
        assert_eq!(sinusoidal(1, 5).output_dim(), 13);
        let id = EncodingSpec::new(EncodingKind::Identity, 2).unwrap();
        assert_eq!(id.output_dim(), 2);
        let gf = EncodingSpec::new(
            EncodingKind::GaussianFourier { sigma: 10.0, features: 64, seed: 7 },
            3,
        )
        .unwrap();
        assert_eq!(gf.output_dim(), 128);
        assert_eq!(gf.encode(&[0.1, -0.2, 0.3]).len(), 128);
    }

    #[test]
    fn pe_frequency() {
        assert_eq!(highest_pe_frequency(5), 16.0);
        assert_eq!(highest_pe_frequency(3), 4.0);
        assert_eq!(highest_pe_frequency(0), 0.5);
    }

    #[test]
    fn gaussian_fourier_deterministic() {
        let mk = || {
            EncodingSpec::new(
                EncodingKind::GaussianFourier { sigma: 10.0, features: 16, seed: 42 },
                2,
            )
            .unwrap()
        };
        assert_eq!(mk().freq_matrix, mk().freq_matrix);
        assert_eq!(mk().encode(&[0.3, 0.7]), mk().encode(&[0.3, 0.7]));
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(EncodingSpec::new(EncodingKind::Identity, 4).is_err());
        assert!(EncodingSpec::new(
            EncodingKind::GaussianFourier { sigma: 0.0, features: 4, seed: 0 },
            2
        )
        .is_err());
        assert!(EncodingSpec::new(
            EncodingKind::GaussianFourier { sigma: 1.0, features: 0, seed: 0 },
            2
        )
        .is_err());
    }
}
