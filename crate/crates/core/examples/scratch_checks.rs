//! Scratch harness for calibrating the acceptance experiments (deleted
//! before release).

use std::time::Instant;

use spectral_sampler::encoding::{highest_pe_frequency, EncodingKind, EncodingSpec};
use spectral_sampler::geometry::SdfTarget;
use spectral_sampler::nn::{HiddenActivation, InitScheme, NetworkConfig, OutputActivation};
use spectral_sampler::sampling::{build_plan, validation_points, Restriction, DEFAULT_PLAN_BUDGET};
use spectral_sampler::spectrum::{
    fit_with_cutoff, intrinsic_spectrum, probe_trained_network, LineDirection, DEFAULT_TAU,
};
use spectral_sampler::trainer::{evaluate, train, TrainConfig};

fn net(dim: usize, layers: usize, width: usize, degree: u32, seed: u64) -> NetworkConfig {
    NetworkConfig {
        input_dim: dim,
        layers,
        width,
        hidden_activation: HiddenActivation::Softplus { beta: 100.0 },
        output_activation: OutputActivation::Tanh,
        encoding: EncodingSpec::new(EncodingKind::Sinusoidal { degree }, dim).unwrap(),
        init: InitScheme::DefaultUniform,
        seed,
    }
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}

fn main() {
    let which = std::env::args().nth(1).unwrap_or_default();

    if which == "consistency" || which.is_empty() {
        // criterion 3: pairwise cosine similarity of the 8x512/D=5 members
        let sp = intrinsic_spectrum(&net(1, 8, 512, 5, 0), 5, 8192, LineDirection::AxisX).unwrap();
        let mut min_cos = 1.0f64;
        for i in 0..5 {
            for j in i + 1..5 {
                min_cos = min_cos.min(cosine(&sp.members[i], &sp.members[j]));
            }
        }
        println!("consistency: min pairwise cosine = {min_cos:.4}");
    }

    if which == "aliasing" || which.is_empty() {
        // criterion 7 regime: 4x128 D=4 on the composite signal
        let t0 = Instant::now();
        let config = net(1, 4, 128, 4, 11);
        let sp = intrinsic_spectrum(&config, 5, 8192, LineDirection::AxisX).unwrap();
        let fit = fit_with_cutoff(&sp.frequencies, &sp.magnitudes, DEFAULT_TAU).unwrap();
        let fc = fit.cutoff.unwrap();
        println!("4x128/D=4: F_c = {fc:.2} ({:.1}s)", t0.elapsed().as_secs_f64());

        let target = SdfTarget::parse("signal:composite").unwrap();
        let pe_rate = 2.0 * highest_pe_frequency(4);
        let rates = [pe_rate, 2.0 * fc, 4.0 * fc];
        let tcfg = TrainConfig { iterations: 2500, seed: 5, ..Default::default() };
        let densest =
            build_plan(rates[2] / 2.0, 1, &target, Restriction::WholeDomain, 0, DEFAULT_PLAN_BUDGET)
                .unwrap();
        let val = validation_points(&densest, &target, 4000, 99, None).unwrap();
        for rate in rates {
            let t1 = Instant::now();
            let plan = build_plan(
                rate / 2.0,
                1,
                &target,
                Restriction::WholeDomain,
                0,
                DEFAULT_PLAN_BUDGET,
            )
            .unwrap();
            let run = train(&config, &tcfg, &plan).unwrap();
            let m = evaluate(&run.mlp, &val);
            println!(
                "  rate {rate:.1}: {} pts, train L1 {:.3e}, val eps {:.3e}, rmse {:.3e} ({:.0}s)",
                plan.len(),
                run.loss_history.last().unwrap(),
                m.mean_abs_error,
                m.rmse,
                t1.elapsed().as_secs_f64()
            );
        }
    }

    if which == "cutoff-drop" || which.is_empty() {
        // criterion 9: low-frequency 1-D fit drops the cut-off
        let config = net(1, 3, 64, 3, 21);
        let sp = intrinsic_spectrum(&config, 5, 8192, LineDirection::AxisX).unwrap();
        let fit = fit_with_cutoff(&sp.frequencies, &sp.magnitudes, DEFAULT_TAU).unwrap();
        let fc0 = fit.cutoff.unwrap();
        let target = SdfTarget::parse("signal:sin0.5").unwrap();
        let plan = build_plan(fc0, 1, &target, Restriction::WholeDomain, 0, DEFAULT_PLAN_BUDGET)
            .unwrap();
        let mut seeded = config.clone();
        seeded.seed = config.seed + 1; // the probe's first member
        let init_probe = {
            let mlp = spectral_sampler::nn::init_network(&seeded).unwrap();
            probe_trained_network(&mlp, 8192, LineDirection::AxisX, DEFAULT_TAU).unwrap()
        };
        let tcfg = TrainConfig { iterations: 3000, seed: 3, ..Default::default() };
        let run = train(&seeded, &tcfg, &plan).unwrap();
        let trained_probe =
            probe_trained_network(&run.mlp, 8192, LineDirection::AxisX, DEFAULT_TAU);
        match trained_probe {
            Ok(f) => println!(
                "cutoff-drop: init {:.2} -> trained {:.2} (train L1 {:.2e})",
                init_probe.cutoff.unwrap(),
                f.cutoff.unwrap(),
                run.loss_history.last().unwrap()
            ),
            Err(e) => println!(
                "cutoff-drop: init {:.2}, trained probe failed: {e}",
                init_probe.cutoff.unwrap()
            ),
        }
    }

    if which == "koch" || which.is_empty() {
        // criterion 8 regime: Koch snowflake sweep on a small 2-D net
        let t0 = Instant::now();
        let config = net(2, 3, 64, 3, 31);
        let sp = intrinsic_spectrum(&config, 5, 8192, LineDirection::AxisX).unwrap();
        let fit = fit_with_cutoff(&sp.frequencies, &sp.magnitudes, DEFAULT_TAU).unwrap();
        let fc = fit.cutoff.unwrap();
        println!("2-D 3x64/D=3: F_c = {fc:.2} ({:.0}s)", t0.elapsed().as_secs_f64());
        let target = SdfTarget::parse("koch:3").unwrap();
        let tcfg = TrainConfig { iterations: 1500, batch_size: 2048, seed: 13, ..Default::default() };
        let rates = [fc, 2.0 * fc, 4.0 * fc];
        let t1 = Instant::now();
        let sweep =
            spectral_sampler::trainer::sweep_rates(&config, &tcfg, &target, &rates, 10_000)
                .unwrap();
        for (rate, r) in &sweep.curve {
            match r {
                Ok(p) => println!(
                    "  rate {rate:.1}: {} pts, train L1 {:.3e}, eps {:.3e}",
                    p.plan_points, p.final_train_loss, p.metrics.mean_abs_error
                ),
                Err(e) => println!("  rate {rate:.1}: {e}"),
            }
        }
        println!("  sweep took {:.0}s", t1.elapsed().as_secs_f64());
    }
}
