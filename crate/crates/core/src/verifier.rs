//! Symbolic and numeric verification of certificates.
//!
//! The symbolic check compares the expanded certificate with
//! S_{m,4}(X², Y²) class by class in exact arithmetic. The numeric checks
//! evaluate word polynomials on random real symmetric matrices and test
//! trace nonnegativity of S_{m,k}(A, B) for A = C², B = D².

use nalgebra::DMatrix;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::certificate::{self, Certificate};
use crate::cyclic::class_residuals;
use crate::error::{Error, Result};
use crate::ncpoly::{s_poly, Letter, Polynomial};

/// Relative tolerance for the numeric checks.
pub const TOL_REL: f64 = 1e-9;

/// Real symmetric matrices substituted for X and Y.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixAssignment {
    x: DMatrix<f64>,
    y: DMatrix<f64>,
}

impl MatrixAssignment {
    pub fn new(x: DMatrix<f64>, y: DMatrix<f64>) -> Result<Self> {
        if !x.is_square() || x.shape() != y.shape() {
            return Err(Error::Dimension(format!("{:?} vs {:?}", x.shape(), y.shape())));
        }
        if x != x.transpose() || y != y.transpose() {
            return Err(Error::Dimension("assignment matrices must be symmetric".into()));
        }
        Ok(MatrixAssignment { x, y })
    }

    /// Dense symmetric pair with entries uniform in [−1, 1], symmetrized.
    pub fn random<R: Rng>(dim: usize, rng: &mut R) -> Self {
        MatrixAssignment { x: random_symmetric(dim, rng), y: random_symmetric(dim, rng) }
    }

    pub fn dim(&self) -> usize {
        self.x.nrows()
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y(&self) -> &DMatrix<f64> {
        &self.y
    }

    /// The assignment X ↦ C², Y ↦ D², both positive semidefinite.
    pub fn squared(&self) -> MatrixAssignment {
        let sym = |m: DMatrix<f64>| (&m + m.transpose()) * 0.5;
        MatrixAssignment { x: sym(&self.x * &self.x), y: sym(&self.y * &self.y) }
    }

    fn letter(&self, l: Letter) -> &DMatrix<f64> {
        match l {
            Letter::X => &self.x,
            Letter::Y => &self.y,
        }
    }
}

pub fn random_symmetric<R: Rng>(dim: usize, rng: &mut R) -> DMatrix<f64> {
    let r = DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..=1.0));
    (&r + r.transpose()) * 0.5
}

/// Evaluates `p` at X ↦ a.x, Y ↦ a.y, 1 ↦ I.
///
/// Terms are visited in term order, so consecutive words of equal length
/// share prefixes; the prefix products are kept on a stack and reused.
pub fn eval(p: &Polynomial, a: &MatrixAssignment) -> DMatrix<f64> {
    let n = a.dim();
    let mut acc = DMatrix::<f64>::zeros(n, n);
    let mut stack: Vec<DMatrix<f64>> = vec![DMatrix::identity(n, n)];
    let mut prev: Vec<Letter> = Vec::new();
    for (w, c) in p.terms() {
        let letters: Vec<Letter> = w.letters().collect();
        let common = prev.iter().zip(&letters).take_while(|(a, b)| a == b).count();
        stack.truncate(common + 1);
        for &l in &letters[common..] {
            let next = stack.last().expect("stack holds the identity") * a.letter(l);
            stack.push(next);
        }
        let c = c.to_f64().expect("finite coefficient");
        acc += &stack[letters.len()] * c;
        prev = letters;
    }
    acc
}

pub fn expand(cert: &Certificate) -> Polynomial {
    cert.expand()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Symbolic,
    Numeric,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassResidual {
    pub class: String,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub mode: Mode,
    pub m: usize,
    pub k: usize,
    pub passed: bool,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    /// Symbolic: largest absolute class residual. Numeric: largest scaled
    /// violation over all checks (trace deficit or identity mismatch).
    pub worst_residual: f64,
    pub failing_classes: Vec<ClassResidual>,
    /// Numeric only: min over trials of tr S_{m,k}(A,B) / scale.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_scaled_trace: Option<f64>,
    /// Numeric, k = 4 only: max over trials of |tr f(C,D) − tr S_{m,4}(C²,D²)| / scale.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity_residual: Option<f64>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Exact check that the expanded certificate is cyclically equivalent to
/// S_{m,4}(X², Y²).
pub fn verify_symbolic(cert: &Certificate) -> VerificationReport {
    let target = s_poly(cert.m(), 4).expect("4 <= m for certificates").substitute_squares();
    let residuals = class_residuals(&cert.expand(), &target);
    let worst = residuals
        .iter()
        .map(|(_, r)| r.abs().to_f64().unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    VerificationReport {
        mode: Mode::Symbolic,
        m: cert.m(),
        k: 4,
        passed: residuals.is_empty(),
        seed: None,
        trials: None,
        worst_residual: worst,
        failing_classes: residuals
            .into_iter()
            .map(|(c, r)| ClassResidual { class: c.to_string(), residual: r.to_string() })
            .collect(),
        min_scaled_trace: None,
        identity_residual: None,
    }
}

fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    m.clone().symmetric_eigenvalues().iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

struct Trial {
    scaled_trace: f64,
    identity: Option<f64>,
}

fn run_trial(
    s_mk: &Polynomial,
    cert_expansion: Option<&Polynomial>,
    m: usize,
    dim: usize,
    seed: u64,
    index: u64,
) -> Trial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let roots = MatrixAssignment::random(dim, &mut rng);
    let psd = roots.squared();
    let mut scale = (spectral_norm(psd.x()) + spectral_norm(psd.y())).powi(m as i32);
    if scale == 0.0 || !scale.is_finite() {
        scale = 1.0;
    }
    let t = eval(s_mk, &psd).trace();
    let identity = cert_expansion.map(|f| (eval(f, &roots).trace() - t).abs() / scale);
    Trial { scaled_trace: t / scale, identity }
}

/// Seeded trace-nonnegativity spot check for S_{m,k}(A, B).
///
/// Trial `i` draws from a ChaCha8 stream `i` under `seed`, so results do not
/// depend on how trials are scheduled. For k = 4 and m ≥ 5 each trial also
/// compares the certificate trace at (C, D) with tr S_{m,4}(C², D²).
pub fn numeric_spotcheck(m: usize, k: usize, trials: usize, dim: usize, seed: u64) -> Result<VerificationReport> {
    if dim == 0 {
        return Err(Error::Dimension("dim must be positive".into()));
    }
    let s_mk = s_poly(m, k)?;
    let expansion = if k == 4 && m >= 5 { Some(certificate::build(m)?.expand()) } else { None };
    let run = |i: usize| run_trial(&s_mk, expansion.as_ref(), m, dim, seed, i as u64);

    #[cfg(feature = "parallel")]
    let results: Vec<Trial> = {
        use rayon::prelude::*;
        (0..trials).into_par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Trial> = (0..trials).map(run).collect();

    let min_trace = results.iter().map(|t| t.scaled_trace).fold(f64::INFINITY, f64::min);
    let identity = expansion.as_ref().map(|_| {
        results.iter().filter_map(|t| t.identity).fold(0.0, f64::max)
    });
    let deficit = if results.is_empty() { 0.0 } else { (-min_trace).max(0.0) };
    let worst = deficit.max(identity.unwrap_or(0.0));
    let passed = results.iter().all(|t| t.scaled_trace >= -TOL_REL)
        && identity.is_none_or(|r| r <= TOL_REL);
    Ok(VerificationReport {
        mode: Mode::Numeric,
        m,
        k,
        passed,
        seed: Some(seed),
        trials: Some(trials),
        worst_residual: worst,
        failing_classes: Vec::new(),
        min_scaled_trace: if results.is_empty() { None } else { Some(min_trace) },
        identity_residual: identity,
    })
}

/// Scaled traces tr S_{m,k}(A, B) / (‖A‖₂+‖B‖₂)^m, one per trial, drawn
/// exactly as in [`numeric_spotcheck`].
pub fn scaled_trace_samples(m: usize, k: usize, trials: usize, dim: usize, seed: u64) -> Result<Vec<f64>> {
    if dim == 0 {
        return Err(Error::Dimension("dim must be positive".into()));
    }
    let s_mk = s_poly(m, k)?;
    Ok((0..trials).map(|i| run_trial(&s_mk, None, m, dim, seed, i as u64).scaled_trace).collect())
}
