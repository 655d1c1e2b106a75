//! Witness-based lower bounds and closed-form upper bounds for `‖M‖_{p→q}`.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::norms::{lp, Exponent};
use super::projector::{two_to_inf_norm, Projector};
use crate::error::{Error, Result};
use crate::par;

/// Stopping rule for the gradient ascent refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AscentConfig {
    pub max_steps: usize,
    /// Stop once an accepted step improves `log ratio` by less than this.
    pub tolerance: f64,
}

impl Default for AscentConfig {
    fn default() -> Self {
        AscentConfig { max_steps: 10_000, tolerance: 1e-10 }
    }
}

/// Certified bounds on a `p → q` operator norm together with the witness
/// vector that realises the lower bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormEstimate {
    pub p: Exponent,
    pub q: Exponent,
    pub lower: f64,
    pub upper: Option<f64>,
    pub witness: Option<Vec<f64>>,
    pub lower_method: String,
    pub upper_method: Option<String>,
}

impl NormEstimate {
    /// Attach [`pq_norm_upper`] when `(p, q)` is in its supported regime.
    pub fn with_upper(mut self, projector: &Projector) -> Self {
        if let Ok((ub, method)) = upper_with_method(projector, self.p, self.q) {
            self.upper = Some(ub);
            self.upper_method = Some(method.to_string());
        }
        self
    }
}

/// `‖Mv‖_q / ‖v‖_p`, or 0 when `v` vanishes.
pub fn ratio(m: &DMatrix<f64>, v: &[f64], p: Exponent, q: Exponent) -> f64 {
    let den = lp(v, p.value());
    if den == 0.0 {
        return 0.0;
    }
    let mv = m * DVector::from_column_slice(v);
    lp(mv.as_slice(), q.value()) / den
}

/// Lower bound on `‖P‖_{p→q}` for an eigenspace projector.
///
/// The witness is replaced by its projection `Pw` whenever that does not
/// lower the ratio (always the case for `p = 2`), so witnesses lie in `V_λ`
/// up to rounding.
pub fn pq_norm_lower(projector: &Projector, p: Exponent, q: Exponent, restarts: usize, seed: u64) -> Result<NormEstimate> {
    let mut est = pq_norm_lower_matrix(projector.matrix(), p, q, restarts, seed)?;
    if let Some(w) = &est.witness {
        let mut pw = projector.apply(w);
        let scale = pw.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        if scale > 0.0 {
            pw.iter_mut().for_each(|x| *x /= scale);
            let r = ratio(projector.matrix(), &pw, p, q);
            if r >= est.lower * (1.0 - TIE_MARGIN) {
                est.lower = r;
                est.witness = Some(pw);
            }
        }
    }
    Ok(est)
}

/// Relative margin a later candidate must beat to replace an earlier one.
const TIE_MARGIN: f64 = 1e-12;

/// Lower bound on `‖M‖_{p→q}` for any square matrix.
///
/// Candidates are the standard basis, the rows and columns of `M`, the
/// all-ones vector, and (for `q = ∞`) the Hölder-extremal vector of each
/// row; the best of these and `restarts` seeded random starts are refined by
/// normalized gradient ascent on `log ‖Mv‖_q − log ‖v‖_p`. Every restart
/// draws from its own stream `(seed, index)`, so the result does not depend
/// on thread scheduling.
pub fn pq_norm_lower_matrix(m: &DMatrix<f64>, p: Exponent, q: Exponent, restarts: usize, seed: u64) -> Result<NormEstimate> {
    pq_norm_lower_with(m, p, q, restarts, seed, AscentConfig::default())
}

pub(crate) fn pq_norm_lower_with(
    m: &DMatrix<f64>,
    p: Exponent,
    q: Exponent,
    restarts: usize,
    seed: u64,
    cfg: AscentConfig,
) -> Result<NormEstimate> {
    if !m.is_square() || m.nrows() == 0 {
        return Err(Error::Dimension { expected: m.nrows(), found: m.ncols() });
    }
    if restarts < 1 {
        return Err(Error::Domain("pq_norm_lower needs at least one restart".into()));
    }
    let estimate = |lower: f64, witness: Option<Vec<f64>>, method: &str| NormEstimate {
        p,
        q,
        lower,
        upper: None,
        witness,
        lower_method: method.to_string(),
        upper_method: None,
    };
    if m.amax() == 0.0 {
        return Ok(estimate(0.0, None, "zero_operator"));
    }

    let n = m.nrows();
    let mt = m.transpose();
    let mut best: Option<(f64, Vec<f64>, &'static str)> = None;
    let offer = |v: Vec<f64>, tag: &'static str, best: &mut Option<(f64, Vec<f64>, &'static str)>| {
        let r = ratio(m, &v, p, q);
        let better = match best {
            None => r > 0.0,
            Some((b, _, _)) => r > *b * (1.0 + TIE_MARGIN),
        };
        if better {
            *best = Some((r, v, tag));
        }
    };

    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        offer(e, "basis_vector", &mut best);
    }
    for i in 0..n {
        offer(m.row(i).iter().copied().collect(), "matrix_row", &mut best);
    }
    if *m != mt {
        for j in 0..n {
            offer(m.column(j).iter().copied().collect(), "matrix_column", &mut best);
        }
    }
    offer(vec![1.0; n], "all_ones", &mut best);
    if q.is_inf() && !p.is_inf() && p.value() > 1.0 {
        let pd = p.dual().value();
        for i in 0..n {
            let v = m.row(i).iter().map(|&x| x.signum() * x.abs().powf(pd - 1.0)).collect();
            offer(v, "holder_row", &mut best);
        }
    }

    let mut starts: Vec<(usize, Vec<f64>)> = Vec::with_capacity(restarts + 1);
    if let Some((_, v, _)) = &best {
        starts.push((0, v.clone()));
    }
    for r in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(r as u64);
        let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        starts.push((r + 1, v));
    }
    let refined = par::map_collect(starts, |(idx, v)| (idx, ascend(m, &mt, v, p, q, cfg)));
    for (idx, v) in refined {
        offer(v, if idx == 0 { "ascent_from_candidate" } else { "ascent" }, &mut best);
    }

    Ok(match best {
        None => estimate(0.0, None, "zero_operator"),
        Some((_, mut w, tag)) => {
            let scale = w.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            w.iter_mut().for_each(|x| *x /= scale);
            estimate(ratio(m, &w, p, q), Some(w), tag)
        }
    })
}

fn objective(m: &DMatrix<f64>, v: &[f64], p: Exponent, q: Exponent) -> f64 {
    let r = ratio(m, v, p, q);
    if r > 0.0 {
        r.ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// Gradient of `log ‖x‖_r` (a subgradient where the norm is not smooth).
fn grad_log_norm(x: &[f64], r: Exponent) -> Vec<f64> {
    let n = x.len() as f64;
    let norm = lp(x, r.value());
    let mut g = vec![0.0; x.len()];
    if norm == 0.0 {
        return g;
    }
    if r.is_inf() {
        let (i, xi) = x
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |(bi, bx), (i, &xi)| if xi.abs() > bx.abs() { (i, xi) } else { (bi, bx) });
        g[i] = xi.signum() / xi.abs();
        return g;
    }
    let e = r.value() - 1.0;
    for (gi, &xi) in g.iter_mut().zip(x) {
        if xi != 0.0 {
            *gi = xi.signum() * (xi.abs() / norm).powf(e) / (n * norm);
        }
    }
    g
}

fn normalize(v: &mut [f64]) -> bool {
    let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if s == 0.0 || !s.is_finite() {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= s);
    true
}

fn ascend(m: &DMatrix<f64>, mt: &DMatrix<f64>, mut v: Vec<f64>, p: Exponent, q: Exponent, cfg: AscentConfig) -> Vec<f64> {
    if !normalize(&mut v) {
        return v;
    }
    let mut f = objective(m, &v, p, q);
    if !f.is_finite() {
        return v;
    }
    let mut step = 0.25;
    for _ in 0..cfg.max_steps {
        let mv = m * DVector::from_column_slice(&v);
        let gq = DVector::from_vec(grad_log_norm(mv.as_slice(), q));
        let gp = grad_log_norm(&v, p);
        let mut g: Vec<f64> = (mt * gq).iter().zip(&gp).map(|(a, b)| a - b).collect();
        if !normalize(&mut g) {
            break;
        }
        let accepted = loop {
            let mut cand: Vec<f64> = v.iter().zip(&g).map(|(a, b)| a + step * b).collect();
            if normalize(&mut cand) {
                let fc = objective(m, &cand, p, q);
                if fc > f {
                    break Some((cand, fc));
                }
            }
            step *= 0.5;
            if step < 1e-16 {
                break None;
            }
        };
        let Some((cand, fc)) = accepted else { break };
        let gain = fc - f;
        v = cand;
        f = fc;
        step = (step * 2.0).min(1.0);
        if gain < cfg.tolerance {
            break;
        }
    }
    v
}

pub(crate) fn upper_with_method(projector: &Projector, p: Exponent, q: Exponent) -> Result<(f64, &'static str)> {
    if p.value() < 2.0 || q < p {
        return Err(Error::Domain(format!(
            "upper bound supports only 2 <= p <= q <= inf, got p = {p}, q = {q}"
        )));
    }
    let t = two_to_inf_norm(projector);
    if p == Exponent::TWO {
        let exponent = if q.is_inf() { 1.0 } else { 1.0 - 2.0 / q.value() };
        let interp = t.powf(exponent);
        if interp < t {
            return Ok((interp, "interpolation"));
        }
    }
    Ok((t, "two_to_inf"))
}

/// Upper bound on `‖P‖_{p→q}` for `2 <= p <= q <= ∞`: the smaller of
/// `‖P‖_{2→∞}` and, when `p = 2`, the interpolation bound `‖P‖_{2→∞}^{1−2/q}`.
pub fn pq_norm_upper(projector: &Projector, p: Exponent, q: Exponent) -> Result<f64> {
    upper_with_method(projector, p, q).map(|(u, _)| u)
}
