use spectral_sampler::encoding::{EncodingKind, EncodingSpec};
use spectral_sampler::geometry::SdfTarget;
use spectral_sampler::nn::{HiddenActivation, InitScheme, NetworkConfig, OutputActivation};
use spectral_sampler::spectrum::{fit_with_cutoff, intrinsic_spectrum, LineDirection, DEFAULT_TAU};
use spectral_sampler::trainer::{sweep_rates, TrainConfig};

fn main() {
    let target = SdfTarget::parse("koch:3").unwrap();
    for (net_seed, train_seed) in [(31u64, 13u64), (7, 42), (101, 2)] {
        let config = NetworkConfig {
            input_dim: 2, layers: 3, width: 64,
            hidden_activation: HiddenActivation::Softplus { beta: 100.0 },
            output_activation: OutputActivation::Tanh,
            encoding: EncodingSpec::new(EncodingKind::Sinusoidal { degree: 3 }, 2).unwrap(),
            init: InitScheme::DefaultUniform,
            seed: net_seed,
        };
        let sp = intrinsic_spectrum(&config, 5, 8192, LineDirection::AxisX).unwrap();
        let fc = fit_with_cutoff(&sp.frequencies, &sp.magnitudes, DEFAULT_TAU).unwrap().cutoff.unwrap();
        let tcfg = TrainConfig { iterations: 1500, batch_size: 2048, seed: train_seed, ..Default::default() };
        let sweep = sweep_rates(&config, &tcfg, &target, &[fc, 2.0 * fc, 4.0 * fc], 10_000).unwrap();
        let eps: Vec<f64> = sweep.curve.iter().map(|(_, r)| r.as_ref().unwrap().metrics.mean_abs_error).collect();
        println!("seeds ({net_seed},{train_seed}) Fc={fc:.1}: eps = {:.3e} {:.3e} {:.3e} | decrease {} plateau {:.1}%",
            eps[0], eps[1], eps[2], eps[0] > eps[1], (eps[1]-eps[2]).abs()/eps[1]*100.0);
    }
}
