//! Sampling points and running registered checks over them.

use std::collections::BTreeMap;

use crate::model::ChartModel;
use crate::rng::{label, Sampler};

use super::checks::{registry, CheckSpec, Ctx, Group, IdentityCheck};
use super::point::PointStructure;

/// Half-width of the sampling box around the origin.
pub const POINT_RANGE: f64 = 0.5;

/// `count` points uniform in `[−0.5, 0.5]^dim`, reproducible from `seed`.
pub fn sample_points(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = Sampler::stream(seed, &[label("points")]);
    (0..count).map(|_| rng.vector(dim, -POINT_RANGE, POINT_RANGE)).collect()
}

/// Points with every coordinate in `[0.3, 1.0]`, away from the measure-zero
/// sets where negative controls could vanish by accident.
pub fn sample_generic_points(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = Sampler::stream(seed, &[label("generic points")]);
    (0..count).map(|_| rng.vector(dim, 0.3, 1.0)).collect()
}

/// Runs `specs` at one point. The random arguments of each check come from
/// a stream keyed by `(seed, index, id)`, so results do not depend on which
/// other checks run or in what order points are visited.
pub fn evaluate_point(model: &ChartModel, point: &[f64], index: usize, seed: u64, specs: &[CheckSpec]) -> Vec<IdentityCheck> {
    let specs: Vec<&CheckSpec> = specs.iter().filter(|s| s.applies_to(model)).collect();
    let needs_curvature = specs.iter().any(|s| s.needs_curvature);
    let first = PointStructure::first_order(model, point);
    let full = match (&first, needs_curvature) {
        (Ok(_), true) => Some(PointStructure::with_curvature(model, point)),
        _ => None,
    };
    specs
        .iter()
        .map(|spec| {
            let mut rec = spec.record(model);
            let ps = match (spec.needs_curvature, &first, &full) {
                (_, Err(e), _) => Err(e.clone()),
                (true, _, Some(Err(e))) => Err(e.clone()),
                (true, _, Some(Ok(ps))) => Ok(ps),
                (_, Ok(ps), _) => Ok(ps),
            };
            let outcome = ps.and_then(|ps| {
                let mut rng = Sampler::stream(seed, &[index as u64, label(spec.id)]);
                spec.run(&Ctx { model, ps }, &mut rng)
            });
            match outcome {
                Ok(m) => {
                    rec.residual = m.residual;
                    rec.samples = m.samples;
                }
                Err(e) => {
                    rec.residual = f64::NAN;
                    rec.error = Some((index, e.to_string()));
                }
            }
            rec
        })
        .collect()
}

/// Merges per-point results by id; the output is sorted by id.
pub fn merge_checks(parts: impl IntoIterator<Item = Vec<IdentityCheck>>) -> Vec<IdentityCheck> {
    let mut merged: BTreeMap<String, IdentityCheck> = BTreeMap::new();
    for part in parts {
        for rec in part {
            match merged.get_mut(&rec.id) {
                Some(acc) => acc.merge(&rec),
                None => {
                    merged.insert(rec.id.clone(), rec);
                }
            }
        }
    }
    merged.into_values().collect()
}

/// Runs `specs` at every point sequentially and merges.
pub fn run_checks(model: &ChartModel, points: &[Vec<f64>], seed: u64, specs: &[CheckSpec]) -> Vec<IdentityCheck> {
    merge_checks(points.iter().enumerate().map(|(i, p)| evaluate_point(model, p, i, seed, specs)))
}

fn group(groups: &[Group]) -> Vec<CheckSpec> {
    registry().into_iter().filter(|c| groups.contains(&c.group)).collect()
}

/// Default seed for the op-level wrappers below.
pub const DEFAULT_SEED: u64 = 42;

/// Residuals of the metric f-structure axioms.
pub fn axioms_check(model: &ChartModel, points: &[Vec<f64>]) -> Vec<IdentityCheck> {
    run_checks(model, points, DEFAULT_SEED, &group(&[Group::Axioms]))
}

/// Residuals of `dη^i = 0` and `dΦ = 2Ση^i∧Φ`.
pub fn gak_check(model: &ChartModel, points: &[Vec<f64>]) -> Vec<IdentityCheck> {
    run_checks(model, points, DEFAULT_SEED, &group(&[Group::Gak]))
}

/// The first-order and curvature identities of generalized Kenmotsu
/// manifolds.
pub fn identity_suite(model: &ChartModel, points: &[Vec<f64>]) -> Vec<IdentityCheck> {
    run_checks(model, points, DEFAULT_SEED, &group(&[Group::Suite]))
}

/// Every registered check.
pub fn full_suite(model: &ChartModel, points: &[Vec<f64>], seed: u64) -> Vec<IdentityCheck> {
    run_checks(model, points, seed, &registry())
}
