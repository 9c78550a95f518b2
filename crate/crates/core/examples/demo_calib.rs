use spectral_sampler::encoding::{highest_pe_frequency, EncodingKind, EncodingSpec};
use spectral_sampler::geometry::SdfTarget;
use spectral_sampler::nn::{HiddenActivation, InitScheme, NetworkConfig, OutputActivation};
use spectral_sampler::sampling::{build_plan, validation_points, Restriction, DEFAULT_PLAN_BUDGET};
use spectral_sampler::spectrum::{fit_with_cutoff, intrinsic_spectrum, LineDirection, DEFAULT_TAU};
use spectral_sampler::trainer::{evaluate, train, TrainConfig};

fn main() {
    let target = SdfTarget::parse("signal:composite").unwrap();
    for (layers, width, iters) in [(3usize, 16usize, 2500usize), (3, 24, 2500), (3, 32, 2500), (2, 32, 2500), (2, 48, 2500)] {
        let config = NetworkConfig {
            input_dim: 1, layers, width,
            hidden_activation: HiddenActivation::Softplus { beta: 100.0 },
            output_activation: OutputActivation::Tanh,
            encoding: EncodingSpec::new(EncodingKind::Sinusoidal { degree: 4 }, 1).unwrap(),
            init: InitScheme::DefaultUniform,
            seed: 11,
        };
        let sp = intrinsic_spectrum(&config, 5, 8192, LineDirection::AxisX).unwrap();
        let fc = fit_with_cutoff(&sp.frequencies, &sp.magnitudes, DEFAULT_TAU).unwrap().cutoff.unwrap();
        let pe_rate = 2.0 * highest_pe_frequency(4);
        let rates = [pe_rate, 2.0 * fc, 4.0 * fc];
        let tcfg = TrainConfig { iterations: iters, seed: 5, ..Default::default() };
        let densest = build_plan(rates[2] / 2.0, 1, &target, Restriction::WholeDomain, 0, DEFAULT_PLAN_BUDGET).unwrap();
        let val = validation_points(&densest, &target, 4000, 99, None).unwrap();
        let mut eps = Vec::new();
        let mut tl = Vec::new();
        for rate in rates {
            let plan = build_plan(rate / 2.0, 1, &target, Restriction::WholeDomain, 0, DEFAULT_PLAN_BUDGET).unwrap();
            let run = train(&config, &tcfg, &plan).unwrap();
            let m = evaluate(&run.mlp, &val);
            eps.push(m.mean_abs_error);
            tl.push(*run.loss_history.last().unwrap());
        }
        println!("{layers}x{width} iters={iters} Fc={fc:.1}: eps(PE)={:.2e} eps(1x)={:.2e} eps(2x)={:.2e} | gap={:.1}x plateau={:.0}% | trainL1 ratio {:.2}",
            eps[0], eps[1], eps[2], eps[0]/eps[1], (eps[1]-eps[2]).abs()/eps[1]*100.0, tl[0].max(tl[1])/tl[0].min(tl[1]));
    }
}
