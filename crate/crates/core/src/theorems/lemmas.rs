use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::report::{Claim, Inputs, Report, Verdict};
use super::{Instance, Stopwatch, CHECK_TOL};
use crate::error::{Error, Result};
use crate::rounding::walk;
use crate::spectral::norms::lp;
use crate::spectral::{inner, pq_norm_lower, pq_norm_lower_matrix, ratio, Exponent, Projector};

/// Relative agreement required between the two sides of the duality.
pub const DUALITY_TOL: f64 = 1e-4;

fn inputs(graph: Option<String>, lambda: Option<f64>, p: Option<Exponent>, q: Option<Exponent>, seed: u64) -> Inputs {
    Inputs {
        graph,
        delta: None,
        epsilon: None,
        p,
        q,
        seed: Some(seed),
        pairs: Vec::new(),
        lambda,
        restarts: None,
        trials: None,
    }
}

/// Estimates `‖M‖_{p→q}` and `‖Mᵀ‖_{q*→p*}` with the same restart budget and
/// reports `holds` when they agree within [`DUALITY_TOL`] relative. Both are
/// lower bounds from a nonconvex search, so disagreement is `inconclusive`.
pub fn verify_duality(m: &DMatrix<f64>, p: Exponent, q: Exponent, restarts: usize, seed: u64) -> Result<Report> {
    let clock = Stopwatch::start();
    let mut inp = inputs(None, None, Some(p), Some(q), seed);
    inp.restarts = Some(restarts);
    let mut report = Report::new(Claim::HolderDuality, inp);
    report.tolerance("relative_agreement", DUALITY_TOL);

    let forward = pq_norm_lower_matrix(m, p, q, restarts, seed)?;
    let mt = m.transpose();
    let backward = pq_norm_lower_matrix(&mt, q.dual(), p.dual(), restarts, seed)?;
    let scale = forward.lower.max(backward.lower);
    let rel = if scale == 0.0 { 0.0 } else { (forward.lower - backward.lower).abs() / scale };

    report.evidence.norm_lower = Some(forward.lower);
    report.evidence.norm_upper = Some(backward.lower);
    report.detail("dimension", m.nrows());
    report.detail("forward", &forward);
    report.detail("dual", &backward);
    report.detail("dual_exponents", (q.dual(), p.dual()));
    report.detail("relative_difference", rel);
    report.verdict = if rel <= DUALITY_TOL { Verdict::Holds } else { Verdict::Inconclusive };
    report.runtime_ms = clock.elapsed_ms();
    Ok(report)
}

/// `⟨v, Av⟩ − λ‖v‖₂²` for `v` scaled to unit `L₂` norm.
pub fn inner_product_gap(inst: &Instance, lambda: f64, v: &[f64]) -> Result<f64> {
    if v.len() != inst.graph.n() {
        return Err(Error::Dimension { expected: inst.graph.n(), found: v.len() });
    }
    let norm = lp(v, 2.0);
    if norm == 0.0 {
        return Ok(0.0);
    }
    let u: Vec<f64> = v.iter().map(|x| x / norm).collect();
    Ok(inner(&u, &walk(&inst.graph, &u))? - lambda)
}

fn gaussian_in_range(projector: &Projector, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let g: Vec<f64> = (0..projector.n()).map(|_| StandardNormal.sample(rng)).collect();
    projector.apply(&g)
}

/// Samples seeded Gaussian vectors, projects them onto `V_λ`, and checks
/// `⟨v, Av⟩ >= λ‖v‖₂²` with slack [`CHECK_TOL`] after normalizing `‖v‖₂ = 1`.
pub fn verify_lemma_inner_product(inst: &Instance, lambda: f64, trials: usize, seed: u64) -> Result<Report> {
    if trials < 1 {
        return Err(Error::Parameter("trials must be at least 1".into()));
    }
    let clock = Stopwatch::start();
    let mut inp = inputs(Some(inst.label.clone()), Some(lambda), None, None, seed);
    inp.trials = Some(trials);
    let mut report = Report::new(Claim::InnerProductLemma, inp);
    report.tolerance("inequality", CHECK_TOL);

    let projector = inst.projector(lambda);
    report.detail("eigenspace_dimension", projector.dimension());
    let vacuous = projector.dimension() == 0;
    report.flag("empty_eigenspace", vacuous);
    if vacuous {
        report.verdict = Verdict::Holds;
        report.runtime_ms = clock.elapsed_ms();
        return Ok(report);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: Option<(f64, Vec<f64>)> = None;
    for _ in 0..trials {
        let v = gaussian_in_range(&projector, &mut rng);
        let gap = inner_product_gap(inst, lambda, &v)?;
        if worst.as_ref().is_none_or(|(w, _)| gap < *w) {
            worst = Some((gap, v));
        }
    }
    let (gap, v) = worst.expect("trials >= 1");
    report.detail("min_gap", gap);
    report.evidence.bound_rhs = Some(lambda);
    report.evidence.norm_lower = Some(gap + lambda);
    if gap < -CHECK_TOL {
        report.detail("violation_vector", v);
        report.verdict = Verdict::Violated;
    } else {
        report.verdict = Verdict::Holds;
    }
    report.runtime_ms = clock.elapsed_ms();
    Ok(report)
}

/// Compares `‖P_λ‖_{p→q}` with `sup_{v ∈ V_λ} ‖v‖_q / ‖v‖_p`: (a) no sampled
/// subspace ratio exceeds the projector lower bound, and (b) the projector
/// witness keeps its ratio after projection onto `V_λ`.
///
/// Both sides are search estimates, so a failed check is `inconclusive`.
pub fn verify_projector_subspace(
    inst: &Instance,
    lambda: f64,
    p: Exponent,
    q: Exponent,
    trials: usize,
    seed: u64,
    restarts: usize,
) -> Result<Report> {
    if trials < 1 {
        return Err(Error::Parameter("trials must be at least 1".into()));
    }
    let clock = Stopwatch::start();
    let mut inp = inputs(Some(inst.label.clone()), Some(lambda), Some(p), Some(q), seed);
    inp.trials = Some(trials);
    inp.restarts = Some(restarts);
    let mut report = Report::new(Claim::ProjectorSubspace, inp);
    report.tolerance("ratio", CHECK_TOL);

    let projector = inst.projector(lambda);
    report.detail("eigenspace_dimension", projector.dimension());
    let vacuous = projector.dimension() == 0;
    report.flag("empty_eigenspace", vacuous);
    if vacuous {
        report.verdict = Verdict::Holds;
        report.runtime_ms = clock.elapsed_ms();
        return Ok(report);
    }

    let est = pq_norm_lower(&projector, p, q, restarts, seed)?.with_upper(&projector);
    report.evidence.norm_lower = Some(est.lower);
    report.evidence.norm_upper = est.upper;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0f64;
    for _ in 0..trials {
        let v = gaussian_in_range(&projector, &mut rng);
        let den = lp(&v, p.value());
        if den > 0.0 {
            best = best.max(lp(&v, q.value()) / den);
        }
    }
    report.detail("subspace_max_sample", best);
    let sampled_ok = best <= est.lower + CHECK_TOL;

    let projected = est.witness.as_ref().map(|w| {
        let pw = projector.apply(w);
        ratio(projector.matrix(), &pw, p, q)
    });
    if let Some(r) = projected {
        report.detail("projected_witness_ratio", r);
    }
    let witness_ok = projected.is_none_or(|r| (r - est.lower).abs() <= CHECK_TOL);
    report.flag("sampled_within_projector_bound", sampled_ok);
    report.flag("witness_in_subspace", witness_ok);
    if let Some(w) = est.witness {
        report.detail("witness", w);
    }
    report.verdict = if sampled_ok && witness_ok { Verdict::Holds } else { Verdict::Inconclusive };
    report.runtime_ms = clock.elapsed_ms();
    Ok(report)
}
