//! Penalized multinomial logistic regression.
//!
//! Minimizes `(1/n) * (sum_i -ln p(y_i | x_i) + (penalty/2) * ||W||^2)` over
//! the non-intercept weights `W`, starting from zero, by accelerated gradient
//! descent with a fixed step `1/L`. `L` bounds the curvature of the softmax
//! loss through the largest eigenvalue of `X^T X / n`.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::dataset::FeatureMatrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LogRegError {
    #[error("features or penalty contain non-finite values")]
    NonFinite,
    #[error("training labels contain a single class")]
    SingleClass,
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRegConfig {
    /// L2 strength on the summed loss scale (1 corresponds to `C = 1`).
    pub penalty: f64,
    pub max_iters: usize,
    /// Stop once every gradient component is below this.
    pub tol: f64,
}

impl Default for LogRegConfig {
    fn default() -> Self {
        LogRegConfig {
            penalty: 1.0,
            max_iters: 5000,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogReg {
    classes: usize,
    dim: usize,
    /// `classes x (dim + 1)`, intercept last.
    weights: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub logloss: f64,
    pub accuracy: f64,
}

fn softmax_in_place(z: &mut [f64]) {
    let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for v in z.iter_mut() {
        *v = libm::exp(*v - max);
        sum += *v;
    }
    for v in z.iter_mut() {
        *v /= sum;
    }
}

// Largest eigenvalue of [X 1]^T [X 1] / n by power iteration.
fn curvature(x: &FeatureMatrix) -> f64 {
    let d = x.cols() + 1;
    let n = x.rows.max(1) as f64;
    let mut v = vec![1.0 / libm::sqrt(d as f64); d];
    let mut lambda = 0.0;
    for _ in 0..100 {
        let mut out = vec![0.0; d];
        for r in 0..x.rows {
            let row = x.row(r);
            let dot: f64 = row.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>() + v[d - 1];
            for (o, a) in out.iter_mut().zip(row) {
                *o += dot * a;
            }
            out[d - 1] += dot;
        }
        let norm = libm::sqrt(out.iter().map(|a| a * a).sum::<f64>());
        if norm == 0.0 {
            return 0.0;
        }
        let next = norm / n;
        for (vi, o) in v.iter_mut().zip(&out) {
            *vi = o / norm;
        }
        if (next - lambda).abs() <= 1e-9 * next {
            return next;
        }
        lambda = next;
    }
    lambda
}

impl LogReg {
    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn logits(weights: &[f64], classes: usize, row: &[f64], out: &mut [f64]) {
        let stride = row.len() + 1;
        for (k, o) in out.iter_mut().enumerate().take(classes) {
            let w = &weights[k * stride..(k + 1) * stride];
            *o = row.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() + w[stride - 1];
        }
    }

    pub fn predict_proba(&self, row: &[f64]) -> Vec<f64> {
        let mut z = vec![0.0; self.classes];
        Self::logits(&self.weights, self.classes, row, &mut z);
        softmax_in_place(&mut z);
        z
    }

    pub fn predict(&self, row: &[f64]) -> u32 {
        let p = self.predict_proba(row);
        let mut best = 0;
        for k in 1..p.len() {
            if p[k] > p[best] {
                best = k;
            }
        }
        best as u32
    }

    pub fn evaluate(&self, x: &FeatureMatrix, y: &[u32]) -> Result<Evaluation, LogRegError> {
        evaluate(self, x, y)
    }
}

// Penalized mean loss gradient at `w`; returns the objective.
fn gradient(
    x: &FeatureMatrix,
    y: &[u32],
    classes: usize,
    penalty: f64,
    w: &[f64],
    grad: &mut [f64],
) -> f64 {
    let stride = x.cols() + 1;
    let n = x.rows as f64;
    grad.fill(0.0);
    let mut z = vec![0.0; classes];
    let mut loss = 0.0;
    for r in 0..x.rows {
        let row = x.row(r);
        LogReg::logits(w, classes, row, &mut z);
        softmax_in_place(&mut z);
        loss -= libm::log(z[y[r] as usize].max(1e-300));
        z[y[r] as usize] -= 1.0;
        for k in 0..classes {
            let g = &mut grad[k * stride..(k + 1) * stride];
            let e = z[k];
            for (gi, a) in g.iter_mut().zip(row) {
                *gi += e * a;
            }
            g[stride - 1] += e;
        }
    }
    let mut reg = 0.0;
    for k in 0..classes {
        for j in 0..stride - 1 {
            let wi = w[k * stride + j];
            reg += wi * wi;
            grad[k * stride + j] += penalty * wi;
        }
    }
    for g in grad.iter_mut() {
        *g /= n;
    }
    (loss + 0.5 * penalty * reg) / n
}

/// Fits a model with `classes` outputs; labels must lie in `0..classes`.
pub fn train_logreg(
    x: &FeatureMatrix,
    y: &[u32],
    classes: usize,
    config: &LogRegConfig,
) -> Result<LogReg, LogRegError> {
    if x.rows != y.len() || x.values.len() != x.rows * x.cols() {
        return Err(LogRegError::InvalidInput("feature rows and labels differ in length"));
    }
    if x.rows == 0 {
        return Err(LogRegError::InvalidInput("no training rows"));
    }
    if y.iter().any(|&c| c as usize >= classes) {
        return Err(LogRegError::InvalidInput("label outside 0..classes"));
    }
    if !x.values.iter().all(|v| v.is_finite()) || !(config.penalty.is_finite() && config.penalty >= 0.0)
    {
        return Err(LogRegError::NonFinite);
    }
    if y.iter().all(|&c| c == y[0]) {
        return Err(LogRegError::SingleClass);
    }

    let stride = x.cols() + 1;
    let size = classes * stride;
    let lipschitz = 0.5 * curvature(x) * 1.05 + config.penalty / x.rows as f64;
    let step = if lipschitz > 0.0 { 1.0 / lipschitz } else { 1.0 };

    let mut w = vec![0.0; size];
    let mut prev = w.clone();
    let mut look = w.clone();
    let mut grad = vec![0.0; size];
    let mut t = 1.0f64;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < config.max_iters {
        iterations += 1;
        gradient(x, y, classes, config.penalty, &look, &mut grad);
        if grad.iter().all(|g| g.abs() < config.tol) {
            w.copy_from_slice(&look);
            converged = true;
            break;
        }
        prev.copy_from_slice(&w);
        for i in 0..size {
            w[i] = look[i] - step * grad[i];
        }
        // Restart momentum when it points uphill.
        let uphill: f64 = (0..size).map(|i| grad[i] * (w[i] - prev[i])).sum();
        let t_next = if uphill > 0.0 {
            1.0
        } else {
            (1.0 + libm::sqrt(1.0 + 4.0 * t * t)) / 2.0
        };
        let beta = if uphill > 0.0 { 0.0 } else { (t - 1.0) / t_next };
        for i in 0..size {
            look[i] = w[i] + beta * (w[i] - prev[i]);
        }
        t = t_next;
    }
    if !converged {
        w.copy_from_slice(&look);
    }
    if !w.iter().all(|v| v.is_finite()) {
        return Err(LogRegError::NonFinite);
    }
    Ok(LogReg {
        classes,
        dim: x.cols(),
        weights: w,
        iterations,
        converged,
    })
}

/// Mean cross-entropy (natural log, probabilities clipped at 1e-15) and
/// argmax accuracy.
pub fn evaluate(model: &LogReg, x: &FeatureMatrix, y: &[u32]) -> Result<Evaluation, LogRegError> {
    if x.cols() != model.dim || x.rows != y.len() {
        return Err(LogRegError::InvalidInput("evaluation data does not match the model"));
    }
    if x.rows == 0 {
        return Err(LogRegError::InvalidInput("no evaluation rows"));
    }
    if !x.values.iter().all(|v| v.is_finite()) {
        return Err(LogRegError::NonFinite);
    }
    let mut loss = 0.0;
    let mut hits = 0usize;
    for r in 0..x.rows {
        let p = model.predict_proba(x.row(r));
        let c = y[r] as usize;
        loss -= libm::log(p.get(c).copied().unwrap_or(0.0).clamp(1e-15, 1.0));
        if model.predict(x.row(r)) as usize == c {
            hits += 1;
        }
    }
    Ok(Evaluation {
        logloss: loss / x.rows as f64,
        accuracy: hits as f64 / x.rows as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::String;

    fn matrix(cols: usize, values: Vec<f64>) -> FeatureMatrix {
        FeatureMatrix {
            names: (0..cols).map(|_| String::new()).collect(),
            rows: if cols == 0 { 0 } else { values.len() / cols },
            values,
        }
    }

    #[test]
    fn separable_toy_set() {
        let x = matrix(1, vec![-2.0, -1.5, -1.0, 1.0, 1.5, 2.0]);
        let y = [0, 0, 0, 1, 1, 1];
        let cfg = LogRegConfig { penalty: 1e-3, ..Default::default() };
        let model = train_logreg(&x, &y, 2, &cfg).unwrap();
        assert_eq!(model.evaluate(&x, &y).unwrap().accuracy, 1.0);
    }

    #[test]
    fn intercept_only_matches_label_entropy() {
        let x = FeatureMatrix { names: vec![], rows: 8, values: vec![] };
        let y = [0, 0, 0, 0, 1, 1, 2, 2];
        let model = train_logreg(&x, &y, 3, &LogRegConfig::default()).unwrap();
        let e = model.evaluate(&x, &y).unwrap();
        let h = -(0.5 * libm::log(0.5) + 2.0 * 0.25 * libm::log(0.25));
        assert!((e.logloss - h).abs() < 1e-6, "{} vs {h}", e.logloss);
    }

    #[test]
    fn errors() {
        let x = matrix(1, vec![0.0, 1.0]);
        assert_eq!(
            train_logreg(&x, &[1, 1], 2, &LogRegConfig::default()),
            Err(LogRegError::SingleClass)
        );
        let bad = matrix(1, vec![0.0, f64::NAN]);
        assert_eq!(
            train_logreg(&bad, &[0, 1], 2, &LogRegConfig::default()),
            Err(LogRegError::NonFinite)
        );
    }
}
