use linecover::deployment::{generate_sensors, generate_with, realization_rng, DeploymentKind, DeploymentSpec};
use linecover::model::SensorKind;

fn spec(kind: DeploymentKind, sensor_kind: SensorKind, n: usize, width: f64) -> DeploymentSpec {
    DeploymentSpec {
        n,
        width,
        strip_height: 10.0,
        kind,
        line_sigma: 10.0,
        radius: 10.0,
        fov: 45.0,
        sensor_kind,
        seed: 3,
    }
}

/// Kolmogorov-Smirnov distance between the sample and U(0, width).
fn ks_uniform(mut xs: Vec<f64>, width: f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let cdf = x / width;
            (cdf - i as f64 / n).abs().max(((i + 1) as f64 / n - cdf).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn positions_pass_ks_against_uniform() {
    let n = 500;
    // 1% critical value of the KS statistic
    let critical = 1.628 / (n as f64).sqrt();
    let mut x_failures = 0;
    let mut y_failures = 0;
    for seed in 0..20 {
        let s = DeploymentSpec { seed, ..spec(DeploymentKind::Poisson, SensorKind::Directional, n, 1000.0) };
        let sensors = generate_sensors(&s, &mut realization_rng(seed, 0)).unwrap();
        let xs = sensors.iter().map(|s| s.x).collect();
        let ys = sensors.iter().map(|s| s.y).collect();
        x_failures += usize::from(ks_uniform(xs, 1000.0) > critical);
        y_failures += usize::from(ks_uniform(ys, 10.0) > critical);
    }
    assert!(x_failures <= 1, "{x_failures} of 20 x samples rejected");
    assert!(y_failures <= 1, "{y_failures} of 20 y samples rejected");
}

#[test]
fn line_based_y_is_centred_with_the_configured_spread() {
    let s = spec(DeploymentKind::LineBased, SensorKind::Omni, 20_000, 1000.0);
    let sensors = generate_sensors(&s, &mut realization_rng(5, 0)).unwrap();
    let n = sensors.len() as f64;
    let mean = sensors.iter().map(|s| s.y).sum::<f64>() / n;
    let var = sensors.iter().map(|s| (s.y - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!(mean.abs() < 0.3, "mean {mean}");
    assert!((var.sqrt() - 10.0).abs() < 0.3, "sd {}", var.sqrt());
}

#[test]
fn omni_mean_clipped_length_matches_integral() {
    let (width, radius) = (50.0, 10.0);
    let s = DeploymentSpec { radius, ..spec(DeploymentKind::LineBased, SensorKind::Omni, 20_000, width) };
    let field = generate_with(&s, &mut realization_rng(9, 0)).unwrap();
    let mean = field.intervals().iter().map(|iv| iv.v - iv.u).sum::<f64>() / field.len() as f64;

    // E[min(x + R, W) - max(x - R, 0)] for x ~ U(0, W), midpoint rule
    let steps = 100_000;
    let h = width / steps as f64;
    let integral: f64 = (0..steps)
        .map(|i| {
            let x = (i as f64 + 0.5) * h;
            (x + radius).min(width) - (x - radius).max(0.0)
        })
        .sum::<f64>()
        * h
        / width;
    assert!((mean - integral).abs() / integral < 0.02, "sample {mean}, integral {integral}");
}

#[test]
fn directional_mean_length_matches_integral() {
    let (radius, fov) = (10.0, 45.0);
    let s = DeploymentSpec { fov, ..spec(DeploymentKind::Poisson, SensorKind::Directional, 20_000, 1e7) };
    let field = generate_with(&s, &mut realization_rng(11, 0)).unwrap();
    let mean = field.intervals().iter().map(|iv| iv.v - iv.u).sum::<f64>() / field.len() as f64;

    // average over the direction of the x-extent of the sector, whose
    // boundary is the apex plus the arc
    let dirs = 3600;
    let arc = 2000;
    let mut total = 0.0;
    for d in 0..dirs {
        let dir = 360.0 * (d as f64 + 0.5) / dirs as f64;
        let (mut lo, mut hi) = (0.0f64, 0.0f64);
        for a in 0..=arc {
            let theta = (dir - fov / 2.0 + fov * a as f64 / arc as f64).to_radians();
            lo = lo.min(radius * theta.cos());
            hi = hi.max(radius * theta.cos());
        }
        total += hi - lo;
    }
    let integral = total / dirs as f64;
    assert!((mean - integral).abs() / integral < 0.02, "sample {mean}, integral {integral}");
}

#[test]
fn realizations_are_reproducible_and_distinct() {
    let s = spec(DeploymentKind::LineBased, SensorKind::Directional, 50, 100.0);
    let a = generate_sensors(&s, &mut realization_rng(1, 4)).unwrap();
    let b = generate_sensors(&s, &mut realization_rng(1, 4)).unwrap();
    let c = generate_sensors(&s, &mut realization_rng(1, 5)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(a.iter().all(|s| (0.0..=100.0).contains(&s.x)));
}
