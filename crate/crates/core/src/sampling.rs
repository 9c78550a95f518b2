//! Turn a cut-off frequency into concrete training and validation point
//! sets: uniform Nyquist grids restricted to active cells, plus the
//! Gaussian-offset baseline distribution.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::encoding::sample_standard_normal;
use crate::error::{Error, Result};
use crate::geometry::{check_labelable, label_points, CellGrid, SdfTarget};
use crate::points::Points;

/// Upper bound on generated grid points before filtering.
pub const DEFAULT_PLAN_BUDGET: u64 = 20_000_000;

/// Default offset-baseline standard deviations (variances 2.5e-3, 2.5e-4).
pub const DEFAULT_OFFSET_SIGMAS: (f64, f64) = (0.05, 0.015811388300841896);

/// Where training samples are kept.
#[derive(Debug, Clone)]
pub enum Restriction {
    WholeDomain,
    ActiveCells(CellGrid),
}

impl Restriction {
    pub fn contains(&self, p: &[f64]) -> bool {
        match self {
            Restriction::WholeDomain => p.iter().all(|c| c.abs() <= 1.0),
            Restriction::ActiveCells(grid) => {
                p.iter().all(|c| c.abs() <= 1.0) && grid.is_active(grid.cell_of(p))
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Restriction::WholeDomain => "whole-domain",
            Restriction::ActiveCells(_) => "active-cells",
        }
    }
}

/// Points with their ground-truth field values.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPoints {
    pub points: Points,
    pub labels: Vec<f64>,
}

impl LabeledPoints {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// CSV rows `x[,y[,z]],sdf`.
    pub fn to_csv(&self) -> String {
        let dim = self.points.dim();
        let mut out = String::from(match dim {
            1 => "x,sdf\n",
            2 => "x,y,sdf\n",
            _ => "x,y,z,sdf\n",
        });
        for (p, l) in self.points.iter().zip(&self.labels) {
            for c in p {
                out.push_str(&format!("{c},"));
            }
            out.push_str(&format!("{l}\n"));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty CSV".into()))?;
        let dim = header.split(',').count() - 1;
        if !(1..=3).contains(&dim) {
            return Err(Error::Parse(format!("unsupported CSV header '{header}'")));
        }
        let mut points = Points::new(dim);
        let mut labels = Vec::new();
        let mut buf = vec![0.0f64; dim];
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != dim + 1 {
                return Err(Error::Parse(format!("row {} has {} fields", i + 2, fields.len())));
            }
            for (k, f) in fields.iter().enumerate() {
                let v: f64 =
                    f.trim().parse().map_err(|_| Error::Parse(format!("bad number '{f}'")))?;
                if k < dim {
                    buf[k] = v;
                } else {
                    labels.push(v);
                }
            }
            points.push(&buf);
        }
        Ok(Self { points, labels })
    }
}

/// A concrete training set derived from a cut-off frequency.
#[derive(Debug, Clone)]
pub struct SamplingPlan {
    pub cutoff: f64,
    pub dim: usize,
    /// Per-axis sampling rate 2·F_c (samples per unit coordinate).
    pub rate: f64,
    /// Grid spacing 1/rate.
    pub spacing: f64,
    pub restriction: Restriction,
    pub data: LabeledPoints,
    pub seed: u64,
}

impl SamplingPlan {
    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Append `count` on-surface samples (σ = 0) to the training data; the
    /// hook for surface-weighted fitting experiments.
    pub fn augment_with_surface_samples(
        &mut self,
        target: &SdfTarget,
        count: usize,
        seed: u64,
    ) -> Result<()> {
        let pts = target.surface_samples(count, seed)?;
        let labels = label_points(target, &pts)?;
        for (p, l) in pts.iter().zip(labels) {
            self.data.points.push(p);
            self.data.labels.push(l);
        }
        Ok(())
    }
}

fn grid_axis_count(spacing: f64) -> usize {
    (2.0 / spacing + 1e-9).floor() as usize + 1
}

/// Uniform grid with spacing 1/(2·F_c) per axis anchored at −1, filtered
/// by the restriction and labeled by the target field.
pub fn build_plan(
    cutoff: f64,
    dim: usize,
    target: &SdfTarget,
    restriction: Restriction,
    seed: u64,
    max_points: u64,
) -> Result<SamplingPlan> {
    if !(cutoff > 0.0) {
        return Err(Error::InvalidConfig(format!("cut-off must be positive, got {cutoff}")));
    }
    if dim != target.dim() {
        return Err(Error::InvalidConfig(format!(
            "plan dimension {dim} does not match target dimension {}",
            target.dim()
        )));
    }
    check_labelable(target)?;
    let rate = 2.0 * cutoff;
    let spacing = 1.0 / rate;
    let per_axis = grid_axis_count(spacing);
    let total = (per_axis as u128).pow(dim as u32);
    if total > max_points as u128 {
        return Err(Error::PlanTooLarge { points: total, budget: max_points });
    }

    let mut points = Points::new(dim);
    let mut buf = vec![0.0f64; dim];
    for idx in 0..total as usize {
        let mut rem = idx;
        for c in buf.iter_mut() {
            *c = (-1.0 + (rem % per_axis) as f64 * spacing).min(1.0);
            rem /= per_axis;
        }
        if restriction.contains(&buf) {
            points.push(&buf);
        }
    }
    let labels = label_points(target, &points)?;
    Ok(SamplingPlan {
        cutoff,
        dim,
        rate,
        spacing,
        restriction,
        data: LabeledPoints { points, labels },
        seed,
    })
}

/// Gaussian-offset baseline: uniform surface samples perturbed by
/// isotropic Gaussian offsets, half the count per variance tier.
pub fn offset_samples(
    target: &SdfTarget,
    count: usize,
    sigma_pair: (f64, f64),
    seed: u64,
) -> Result<LabeledPoints> {
    if count == 0 {
        return Err(Error::InvalidConfig("offset sampling needs count ≥ 1".into()));
    }
    check_labelable(target)?;
    let surface = target.surface_samples(count, seed)?;
    let dim = surface.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let first_tier = count.div_ceil(2);
    let mut points = Points::with_capacity(dim, count);
    let mut buf = vec![0.0f64; dim];
    for (i, p) in surface.iter().enumerate() {
        let sigma = if i < first_tier { sigma_pair.0 } else { sigma_pair.1 };
        for (k, c) in buf.iter_mut().enumerate() {
            *c = p[k] + sigma * sample_standard_normal(&mut rng);
        }
        points.push(&buf);
    }
    let labels = label_points(target, &points)?;
    Ok(LabeledPoints { points, labels })
}

/// Uniform random points inside the plan's restriction region, rejected
/// when closer than `exclusion` to a training grid node. `None` picks the
/// half-spacing default (quarter spacing in 1-D, where half spacing
/// covers the whole line and no point could be placed).
pub fn validation_points(
    plan: &SamplingPlan,
    target: &SdfTarget,
    count: usize,
    seed: u64,
    exclusion: Option<f64>,
) -> Result<LabeledPoints> {
    if count == 0 {
        return Err(Error::InvalidConfig("validation needs count ≥ 1".into()));
    }
    check_labelable(target)?;
    let radius = exclusion.unwrap_or(if plan.dim == 1 {
        plan.spacing * 0.25
    } else {
        plan.spacing * 0.5
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per_axis = grid_axis_count(plan.spacing);
    let grid_max = -1.0 + (per_axis - 1) as f64 * plan.spacing;

    let active: Vec<usize> = match &plan.restriction {
        Restriction::ActiveCells(grid) => grid.active_indices().collect(),
        Restriction::WholeDomain => Vec::new(),
    };

    let mut points = Points::with_capacity(plan.dim, count);
    let mut buf = vec![0.0f64; plan.dim];
    let max_attempts = count.saturating_mul(200).max(10_000);
    let mut attempts = 0usize;
    while points.len() < count && attempts < max_attempts {
        attempts += 1;
        match &plan.restriction {
            Restriction::WholeDomain => {
                for c in buf.iter_mut() {
                    *c = rng.gen::<f64>() * 2.0 - 1.0;
                }
            }
            Restriction::ActiveCells(grid) => {
                let cell = active[rng.gen_range(0..active.len())];
                let corner = grid.lower_corner(cell);
                let edge = grid.cell_edge();
                for (c, lo) in buf.iter_mut().zip(&corner) {
                    *c = lo + rng.gen::<f64>() * edge;
                }
            }
        }
        // distance to the nearest training grid node
        let mut d2 = 0.0f64;
        for &c in &buf {
            let snapped =
                (-1.0 + ((c + 1.0) / plan.spacing).round() * plan.spacing).clamp(-1.0, grid_max);
            d2 += (c - snapped) * (c - snapped);
        }
        if d2.sqrt() < radius {
            continue;
        }
        points.push(&buf);
    }
    if points.len() < count {
        return Err(Error::RegionSaturated {
            requested: count,
            missing: count - points.len(),
            attempts,
        });
    }
    let labels = label_points(target, &points)?;
    Ok(LabeledPoints { points, labels })
}

/// Trigonometric interpolation of periodic equidistant samples over a
/// segment: the DFT-based reconstruction behind the Nyquist-Shannon
/// premise.
pub struct TrigInterpolator {
    coeffs: Vec<Complex<f64>>,
    n: usize,
    origin: f64,
    domain_len: f64,
}

impl TrigInterpolator {
    /// `samples[j]` taken at `origin + j·domain_len/N` (endpoint excluded).
    pub fn new(samples: &[f64], origin: f64, domain_len: f64) -> Self {
        let n = samples.len();
        assert!(n >= 2 && domain_len > 0.0);
        let mut coeffs: Vec<Complex<f64>> =
            samples.iter().map(|&y| Complex::new(y, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut coeffs);
        Self { coeffs, n, origin, domain_len }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.n;
        let tau = (x - self.origin) / self.domain_len * n as f64; // position in samples
        let mut acc = self.coeffs[0].re;
        let half = n / 2;
        let w = 2.0 * std::f64::consts::PI * tau / n as f64;
        for k in 1..n.div_ceil(2) {
            let (s, c) = (w * k as f64).sin_cos();
            acc += 2.0 * (self.coeffs[k].re * c - self.coeffs[k].im * s);
        }
        if n % 2 == 0 {
            acc += self.coeffs[half].re * (w * half as f64).cos();
        }
        acc / n as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::active_cells;
    use std::f64::consts::PI;

    fn circle() -> SdfTarget {
        SdfTarget::Circle { radius: 0.5 }
    }

    #[test]
    fn plan_grid_1d_inclusive_anchoring() {
        let t = SdfTarget::parse("signal:sin1").unwrap();
        let plan =
            build_plan(1.0, 1, &t, Restriction::WholeDomain, 0, DEFAULT_PLAN_BUDGET).unwrap();
        let xs: Vec<f64> = plan.data.points.iter().map(|p| p[0]).collect();
        assert_eq!(xs, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(plan.rate, 2.0);
        for (p, l) in plan.data.points.iter().zip(&plan.data.labels) {
            assert_eq!(*l, t.eval(p));
        }
    }

    #[test]
    fn plan_axis_count_matches_rate_convention() {
        // F_c = 63 → 253 points per axis (checked in 1-D to keep it cheap)
        assert_eq!(grid_axis_count(1.0 / 126.0), 253);
        let t = SdfTarget::Sphere { radius: 0.5 };
        let err = build_plan(63.0, 3, &t, Restriction::WholeDomain, 0, 1_000_000);
        match err {
            Err(Error::PlanTooLarge { points, .. }) => assert_eq!(points, 253u128.pow(3)),
            other => panic!("expected PlanTooLarge, got {other:?}"),
        }
    }

    #[test]
    fn doubling_cutoff_roughly_doubles_1d_count() {
        let t = SdfTarget::parse("signal:sin1").unwrap();
        let p1 = build_plan(8.0, 1, &t, Restriction::WholeDomain, 0, 1 << 20).unwrap();
        let p2 = build_plan(16.0, 1, &t, Restriction::WholeDomain, 0, 1 << 20).unwrap();
        assert_eq!(p1.len(), 33);
        assert_eq!(p2.len(), 65); // off-by-one from inclusive anchoring
    }

    #[test]
    fn active_cell_plan_is_filtered_subset() {
        let t = circle();
        let grid = active_cells(&t, 20).unwrap();
        let restricted = build_plan(
            10.0,
            2,
            &t,
            Restriction::ActiveCells(grid.clone()),
            0,
            DEFAULT_PLAN_BUDGET,
        )
        .unwrap();
        let whole =
            build_plan(10.0, 2, &t, Restriction::WholeDomain, 0, DEFAULT_PLAN_BUDGET).unwrap();
        assert!(restricted.len() < whole.len());
        assert!(restricted.len() > 0);
        for p in restricted.data.points.iter() {
            assert!(grid.is_active(grid.cell_of(p)));
        }
    }

    #[test]
    fn offset_samples_zero_sigma_sits_on_surface() {
        let t = circle();
        let lp = offset_samples(&t, 100, (0.0, 0.0), 4).unwrap();
        for l in &lp.labels {
            assert!(l.abs() < 1e-9);
        }
        assert_eq!(lp, offset_samples(&t, 100, (0.0, 0.0), 4).unwrap());
    }

    #[test]
    fn offset_radius_moment_matches_chi_square() {
        let t = circle();
        let sigma = 0.02;
        let lp = offset_samples(&t, 40_000, (sigma, sigma), 11).unwrap();
        let surface = t.surface_samples(40_000, 11).unwrap();
        let mean_r2: f64 = lp
            .points
            .iter()
            .zip(surface.iter())
            .map(|(p, s)| (p[0] - s[0]).powi(2) + (p[1] - s[1]).powi(2))
            .sum::<f64>()
            / 40_000.0;
        let expect = 2.0 * sigma * sigma; // ℓ σ²
        assert!(
            (mean_r2 - expect).abs() / expect < 0.05,
            "mean ‖offset‖² {mean_r2} vs {expect}"
        );
    }

    #[test]
    fn validation_points_respect_restriction_and_exclusion() {
        let t = circle();
        let grid = active_cells(&t, 10).unwrap();
        let plan =
            build_plan(8.0, 2, &t, Restriction::ActiveCells(grid), 0, DEFAULT_PLAN_BUDGET)
                .unwrap();
        let val = validation_points(&plan, &t, 500, 21, None).unwrap();
        assert_eq!(val.len(), 500);
        let per_axis = grid_axis_count(plan.spacing);
        let grid_max = -1.0 + (per_axis - 1) as f64 * plan.spacing;
        for p in val.points.iter() {
            assert!(plan.restriction.contains(p));
            let mut d2 = 0.0;
            for &c in p {
                let snapped = (-1.0 + ((c + 1.0) / plan.spacing).round() * plan.spacing)
                    .clamp(-1.0, grid_max);
                d2 += (c - snapped) * (c - snapped);
            }
            assert!(d2.sqrt() >= plan.spacing * 0.5 * (1.0 - 1e-9));
        }
    }

    #[test]
    fn validation_saturates_in_1d_at_half_spacing() {
        let t = SdfTarget::parse("signal:sin1").unwrap();
        let plan =
            build_plan(4.0, 1, &t, Restriction::WholeDomain, 0, DEFAULT_PLAN_BUDGET).unwrap();
        let err = validation_points(&plan, &t, 50, 3, Some(plan.spacing * 0.5));
        assert!(matches!(err, Err(Error::RegionSaturated { .. })));
        // the 1-D default (quarter spacing) works
        let ok = validation_points(&plan, &t, 50, 3, None).unwrap();
        assert_eq!(ok.len(), 50);
    }

    #[test]
    fn validation_occupancy_roughly_uniform_over_active_cells() {
        let t = circle();
        let grid = active_cells(&t, 10).unwrap();
        let n_active = grid.active_count();
        // cell edge (0.2) is an integer multiple of the spacing (1/80), so
        // the exclusion carving leaves every cell the same usable volume
        let plan = build_plan(
            40.0,
            2,
            &t,
            Restriction::ActiveCells(grid.clone()),
            0,
            DEFAULT_PLAN_BUDGET,
        )
        .unwrap();
        let n = 10_000usize;
        let val = validation_points(&plan, &t, n, 5, None).unwrap();
        let mut counts = vec![0usize; grid.cell_count()];
        for p in val.points.iter() {
            counts[grid.cell_of(p)] += 1;
        }
        let expected = n as f64 / n_active as f64;
        let chi2: f64 = grid
            .active_indices()
            .map(|i| {
                let d = counts[i] as f64 - expected;
                d * d / expected
            })
            .sum();
        // Wilson–Hilferty critical value at α = 0.01
        let df = (n_active - 1) as f64;
        let z = 2.326_347_874_040_841; // Φ⁻¹(0.99)
        let crit = df * (1.0 - 2.0 / (9.0 * df) + z * (2.0 / (9.0 * df)).sqrt()).powi(3);
        assert!(chi2 < crit, "chi² {chi2} ≥ critical {crit} (df {df})");
    }

    #[test]
    fn csv_round_trip() {
        let t = circle();
        let lp = offset_samples(&t, 50, DEFAULT_OFFSET_SIGMAS, 2).unwrap();
        let text = lp.to_csv();
        let back = LabeledPoints::from_csv(&text).unwrap();
        // shortest round-trip formatting makes this exact
        assert_eq!(back, lp);
    }

    #[test]
    fn nyquist_rate_reconstructs_bandlimited_signal() {
        // components strictly below F = 8 cycles/unit, sampled at 2F
        let f_limit = 8.0;
        let signal = |x: f64| {
            0.5 * (2.0 * PI * 0.5 * x).sin()
                + 0.3 * (2.0 * PI * 3.0 * x + 0.4).sin()
                + 0.4 * (2.0 * PI * 7.5 * x + 1.1).sin()
        };
        let rate = 2.0 * f_limit;
        let n = (rate * 2.0) as usize; // over the length-2 domain
        let samples: Vec<f64> =
            (0..n).map(|j| signal(-1.0 + 2.0 * j as f64 / n as f64)).collect();
        let interp = TrigInterpolator::new(&samples, -1.0, 2.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut max_err = 0.0f64;
        for _ in 0..512 {
            let x = rng.gen::<f64>() * 2.0 - 1.0;
            max_err = max_err.max((interp.eval(x) - signal(x)).abs());
        }
        assert!(max_err < 1e-6, "round-trip error {max_err}");

        // undersampled at rate F: aliasing
        let n_alias = (f_limit * 2.0) as usize;
        let alias_samples: Vec<f64> =
            (0..n_alias).map(|j| signal(-1.0 + 2.0 * j as f64 / n_alias as f64)).collect();
        let alias = TrigInterpolator::new(&alias_samples, -1.0, 2.0);
        let mut alias_err = 0.0f64;
        for _ in 0..512 {
            let x = rng.gen::<f64>() * 2.0 - 1.0;
            alias_err = alias_err.max((alias.eval(x) - signal(x)).abs());
        }
        assert!(alias_err > 0.1, "aliasing error only {alias_err}");
    }
}
