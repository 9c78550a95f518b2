//! Probe the reference architecture at several PE degrees and print the
//! fitted cut-offs; a quick way to sanity-check the pipeline end to end.

use std::time::Instant;

use spectral_sampler::encoding::{highest_pe_frequency, EncodingKind, EncodingSpec};
use spectral_sampler::nn::{HiddenActivation, InitScheme, NetworkConfig, OutputActivation};
use spectral_sampler::spectrum::{
    fit_with_cutoff, intrinsic_spectrum, LineDirection, DEFAULT_PROBE_MEMBERS,
    DEFAULT_PROBE_POINTS, DEFAULT_TAU,
};

fn main() {
    let (layers, width) = (8usize, 512usize);
    for degree in [3u32, 4, 5] {
        let config = NetworkConfig {
            input_dim: 1,
            layers,
            width,
            hidden_activation: HiddenActivation::Softplus { beta: 100.0 },
            output_activation: OutputActivation::Tanh,
            encoding: EncodingSpec::new(EncodingKind::Sinusoidal { degree }, 1).unwrap(),
            init: InitScheme::DefaultUniform,
            seed: 0,
        };
        let t0 = Instant::now();
        let sp = intrinsic_spectrum(
            &config,
            DEFAULT_PROBE_MEMBERS,
            DEFAULT_PROBE_POINTS,
            LineDirection::AxisX,
        )
        .unwrap();
        let fit = fit_with_cutoff(&sp.frequencies, &sp.magnitudes, DEFAULT_TAU).unwrap();
        println!(
            "D={degree}: F_c={:.2} (PE max {}), a={:.3}, b={:.3}, residual={:.3e}, {:.1}s",
            fit.cutoff.unwrap(),
            highest_pe_frequency(degree),
            fit.a,
            fit.b,
            fit.residual,
            t0.elapsed().as_secs_f64()
        );
    }
}
