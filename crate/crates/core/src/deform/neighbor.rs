use nalgebra::DMatrix;
use num::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::chart::{positivity_margin, qmatrix_f64, KahlerClass, PeriodChart, PeriodPoint};
use super::forms::invariant_two_forms;
use super::newton::newton_solve;
use super::{invariant_kahler_class, DeformError, DeformTolerances};
use crate::arith::rational::{convergents, fmt_q};
use crate::arith::{QMatrix, Q};
use crate::group::library::cyclic;
use crate::hodge::{HodgeTolerances, IntegralRepresentation, NumericComplexStructure};
use crate::polarize::zeta::primitive_matrix;
use crate::polarize::{verify_polarization, HodgeData, PolarizationCertificate, PolarizeOptions};

#[derive(Clone, Debug, Serialize)]
pub struct DeformationResult {
    pub t: PeriodPoint,
    /// coordinates of xi in the invariant two-form basis
    pub xi_coordinates: Vec<String>,
    /// xi as a primitive integral alternating matrix (a positive multiple of
    /// the rational class)
    pub xi: QMatrix,
    pub denominator: u64,
    pub residual: f64,
    pub residuals: Vec<f64>,
    pub positivity_margin: f64,
    pub distance: f64,
    pub chart_dimension: usize,
    pub two_form_dimension: usize,
    pub candidates_tried: usize,
    pub kahler: KahlerClass,
    /// for rigid actions: the polarize module's check of xi on the original torus
    pub exact_certificate: Option<PolarizationCertificate>,
    pub exact_error: Option<String>,
}

/// Candidate rational coordinate vectors in order of increasing common
/// denominator bound: at each convergent denominator d of any coordinate,
/// every coordinate takes its last convergent with denominator <= d.
fn candidates(coords: &[f64], max_den: u64) -> Vec<(u64, Vec<Q>)> {
    let conv: Vec<Vec<Q>> = coords.iter().map(|&c| convergents(c, max_den)).collect();
    let mut dens: Vec<u64> = conv
        .iter()
        .flat_map(|cs| cs.iter().map(|q| q.denom().try_into().unwrap_or(u64::MAX)))
        .collect();
    dens.sort_unstable();
    dens.dedup();
    let mut out: Vec<(u64, Vec<Q>)> = Vec::new();
    for d in dens {
        let bound = BigInt::from(d);
        let v: Vec<Q> = conv
            .iter()
            .map(|cs| cs.iter().filter(|q| *q.denom() <= bound).last().cloned().unwrap_or_default())
            .collect();
        if out.last().map_or(true, |(_, w)| *w != v) {
            out.push((d, v));
        }
    }
    out
}

/// Searches rational invariant classes xi near the Kahler class in order of
/// increasing denominator, moves the complex structure by Newton's method
/// until xi is of type (1,1), and keeps the positive solution closest to the
/// original torus (ties go to the earliest candidate).
pub fn find_projective_neighbor(
    rep: &IntegralRepresentation,
    j: &NumericComplexStructure,
    max_denominator: u64,
    epsilon: f64,
    tol: &DeformTolerances,
) -> Result<DeformationResult, DeformError> {
    let chart = PeriodChart::new(rep, j, &HodgeTolerances::default())?;
    let space = invariant_two_forms(rep);
    let kahler = invariant_kahler_class(rep, j, &chart, &space)?;
    let scale = kahler.coordinates.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return Err(DeformError::BudgetExhausted("the Kahler class has no invariant coordinates".into()));
    }
    let normalized: Vec<f64> = kahler.coordinates.iter().map(|c| c / scale).collect();
    let list = candidates(&normalized, max_denominator.max(1));
    let mut best: Option<(f64, usize, u64, Vec<Q>, super::NewtonRun, f64)> = None;
    let mut last_failure = String::from("no candidates");
    for (idx, (den, coords)) in list.iter().enumerate() {
        let xi = space.combine(coords);
        let xf = qmatrix_f64(&xi);
        match newton_solve(&chart, &xf, &chart.origin(), tol) {
            Ok(run) => {
                let margin = positivity_margin(&xf, &run.point);
                let dist = run.point.distance();
                if margin <= tol.positivity {
                    last_failure = format!("denominator {den}: positivity margin {margin:e}");
                    continue;
                }
                if best.as_ref().map_or(true, |b| dist < b.0) {
                    best = Some((dist, idx, *den, coords.clone(), run, margin));
                }
            }
            Err(e) => last_failure = format!("denominator {den}: {e}"),
        }
    }
    let Some((distance, idx, denominator, coords, run, margin)) = best else {
        return Err(DeformError::BudgetExhausted(last_failure));
    };
    if distance >= epsilon {
        return Err(DeformError::BudgetExhausted(format!(
            "closest projective neighbour has ||t|| = {distance:e} >= {epsilon:e} (denominator {denominator})"
        )));
    }
    let xi = primitive_matrix(&space.combine(&coords));
    let (exact_certificate, exact_error) = if chart.dimension() == 0 {
        match verify_polarization(Some(rep), &xi, HodgeData::Numeric(j), &PolarizeOptions::default()) {
            Ok(c) => (Some(c), None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, None)
    };
    Ok(DeformationResult {
        t: run.point.clone(),
        xi_coordinates: coords.iter().map(fmt_q).collect(),
        xi,
        denominator,
        residual: run.residual(),
        residuals: run.residuals.clone(),
        positivity_margin: margin,
        distance,
        chart_dimension: chart.dimension(),
        two_form_dimension: space.dimension(),
        candidates_tried: idx + 1,
        kahler,
        exact_certificate,
        exact_error,
    })
}

/// A torus Z^rank with the trivial group and J = P J_0 P^{-1} for a random
/// well-conditioned real P, where J_0 is the standard block rotation.
pub fn random_torus(rank: usize, seed: u64) -> (IntegralRepresentation, NumericComplexStructure) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut j0 = DMatrix::<f64>::zeros(rank, rank);
    for k in 0..rank / 2 {
        j0[(2 * k, 2 * k + 1)] = -1.0;
        j0[(2 * k + 1, 2 * k)] = 1.0;
    }
    let rep = IntegralRepresentation::trivial(&cyclic(1), rank);
    loop {
        let p = DMatrix::<f64>::from_fn(rank, rank, |_, _| rng.gen_range(-1.0..1.0));
        let sv = p.singular_values();
        let cond = sv.max() / sv.min();
        if cond > 50.0 {
            continue;
        }
        if let Some(inv) = p.clone().try_inverse() {
            return (rep, NumericComplexStructure::new(&p * j0 * inv));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::One;

    #[test]
    fn candidates_refine_monotonically() {
        let c = candidates(&[1.0, std::f64::consts::PI / 4.0, -0.3], 64);
        assert!(c.windows(2).all(|w| w[0].0 < w[1].0));
        assert_eq!(c[0].1[0], Q::from_integer(BigInt::one()));
        assert!(c.iter().all(|(d, v)| v.iter().all(|q| q.denom() <= &BigInt::from(*d))));
    }

    #[test]
    fn gaussian_curve_is_already_projective() {
        let rep = IntegralRepresentation::from_generator_matrices("Z4", 2, &[vec![vec![0, -1], vec![1, 0]]]).unwrap();
        let j = NumericComplexStructure::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        let r = find_projective_neighbor(&rep, &j, 16, 1e-6, &DeformTolerances::default()).unwrap();
        assert_eq!(r.distance, 0.0);
        assert_eq!(r.xi, QMatrix::from_i64_rows(&[vec![0, 1], vec![-1, 0]]));
        assert!(r.exact_certificate.is_some());
    }
}
