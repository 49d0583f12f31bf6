//! Simple cluster generators for `foldylax gen`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use foldylax_core::Vec3;

use crate::scenario::{BodySpec, GeneratorInfo, Scenario, WaveSpec, SCHEMA_VERSION};
use crate::CliError;

/// Upper bound on placement attempts per body before giving up.
pub const MAX_ATTEMPTS_PER_BODY: usize = 10_000;

fn default_wave() -> WaveSpec {
    WaveSpec { k_re: 1.0, k_im: 0.0, theta: [0.0, 0.0, 1.0], p: [1.0, 0.0, 0.0] }
}

fn scenario(bodies: Vec<BodySpec>, kind: &str, seed: u64) -> Scenario {
    Scenario {
        schema: SCHEMA_VERSION,
        bodies,
        domain_diameter: None,
        wave: Some(default_wave()),
        task: None,
        solver: None,
        regime_threshold: None,
        output: None,
        generator: Some(GeneratorInfo { kind: kind.into(), seed }),
    }
}

/// `n^3` spheres on a cubic lattice centred at the origin.
pub fn lattice(n: usize, spacing: f64, radius: f64, seed: u64) -> Result<Scenario, CliError> {
    if n == 0 {
        return Err(CliError::invalid("--n: need at least one body per side"));
    }
    if !(radius > 0.0) || !(spacing > 2.0 * radius) {
        return Err(CliError::invalid(format!(
            "--spacing: must exceed the sphere diameter {} (got {spacing})",
            2.0 * radius
        )));
    }
    let bodies = foldylax_core::geometry::cubic_lattice(n, spacing, radius)
        .into_iter()
        .map(|b| BodySpec::Sphere { center: b.center, radius })
        .collect();
    Ok(scenario(bodies, "lattice", seed))
}

/// `count` spheres placed uniformly in the cube `[-extent/2, extent/2]^3`
/// by rejection, keeping every boundary gap at least `min_gap`.
pub fn random(count: usize, radius: f64, extent: f64, min_gap: f64, seed: u64) -> Result<Scenario, CliError> {
    if count == 0 {
        return Err(CliError::invalid("--count: need at least one body"));
    }
    if !(radius > 0.0) || !(min_gap > 0.0) {
        return Err(CliError::invalid("--radius and --min-gap must be positive"));
    }
    let half = 0.5 * extent - radius;
    if !(half >= 0.0) {
        return Err(CliError::invalid(format!("--extent: {extent} cannot hold a sphere of radius {radius}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let min_center = 2.0 * radius + min_gap;
    let mut centers: Vec<Vec3> = Vec::with_capacity(count);
    let mut attempts = 0;
    while centers.len() < count {
        attempts += 1;
        if attempts > MAX_ATTEMPTS_PER_BODY * count {
            return Err(CliError::invalid(format!(
                "--count: placed only {} of {count} spheres; enlarge --extent or reduce --min-gap",
                centers.len()
            )));
        }
        let c: Vec3 = std::array::from_fn(|_| if half > 0.0 { rng.gen_range(-half..=half) } else { 0.0 });
        let clear = centers.iter().all(|o| {
            let d2: f64 = (0..3).map(|i| (o[i] - c[i]).powi(2)).sum();
            d2.sqrt() >= min_center
        });
        if clear {
            centers.push(c);
        }
    }
    let bodies = centers
        .into_iter()
        .map(|center| BodySpec::Sphere { center, radius })
        .collect();
    Ok(scenario(bodies, "random", seed))
}
