//! Alternating projections between the affine constraint set and the PSD
//! cone, optionally with Dykstra corrections.

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{GramProblem, RealPolynomial};
use crate::error::{Error, Result};
use crate::ncpoly::Word;
use crate::verifier::random_symmetric;

/// Window over which the projection gap must move for the run to be
/// considered still progressing.
const STALL_WINDOW: usize = 100;
const STALL_REL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub eps_psd: f64,
    pub eps_aff: f64,
    pub max_iter: usize,
    pub dykstra: bool,
    /// Random symmetric starting point; the zero matrix when absent.
    pub seed: Option<u64>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { eps_psd: 1e-9, eps_aff: 1e-8, max_iter: 50_000, dykstra: false, seed: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Feasible,
    InfeasibleGap,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GramSolution {
    pub dim: usize,
    /// Row-major.
    #[serde(with = "row_major")]
    pub g: DMatrix<f64>,
    pub min_eigenvalue: f64,
    /// Largest constraint violation relative to max(1, max |rhs|).
    pub constraint_residual: f64,
    pub status: Status,
    pub iterations: usize,
    /// Frobenius distance between the last affine and PSD iterates.
    pub gap: Option<f64>,
}

mod row_major {
    use nalgebra::DMatrix;
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(g: &DMatrix<f64>, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<f64>> = (0..g.nrows()).map(|i| g.row(i).iter().copied().collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DMatrix<f64>, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(D::Error::custom("Gram matrix must be square"));
        }
        Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }
}

impl GramSolution {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solution serialises") + "\n"
    }

    pub fn from_json(s: &str) -> Result<GramSolution> {
        let sol: GramSolution = serde_json::from_str(s)?;
        if sol.g.nrows() != sol.dim {
            return Err(Error::Dimension(format!("dim {} but matrix is {}x{}", sol.dim, sol.g.nrows(), sol.g.ncols())));
        }
        Ok(sol)
    }
}

struct FloatRow {
    rhs: f64,
    /// (i, j, weight, step share)
    terms: Vec<(usize, usize, f64, f64)>,
}

/// Frobenius-minimal correction for Σ w·G_ij = r on symmetric G: an
/// off-diagonal entry counts twice in the norm, so entry p moves by
/// r·(w_p/n_p) / Σ w_q²/n_q with n = 1 on the diagonal and 2 off it.
fn float_rows(prob: &GramProblem) -> Vec<FloatRow> {
    prob.rows()
        .into_iter()
        .map(|row| {
            let norm = |i: usize, j: usize| if i == j { 1.0 } else { 2.0 };
            let denom: f64 = row.terms.iter().map(|&(i, j, w)| (w * w) as f64 / norm(i, j)).sum();
            FloatRow {
                rhs: row.rhs.to_f64().unwrap_or(f64::NAN),
                terms: row.terms.iter().map(|&(i, j, w)| (i, j, w as f64, w as f64 / norm(i, j) / denom)).collect(),
            }
        })
        .collect()
}

fn weighted_sum(g: &DMatrix<f64>, row: &FloatRow) -> f64 {
    row.terms.iter().map(|&(i, j, w, _)| w * g[(i, j)]).sum()
}

fn project_affine_with(g: &DMatrix<f64>, rows: &[FloatRow]) -> DMatrix<f64> {
    let mut out = (g + g.transpose()) * 0.5;
    for row in rows {
        if row.terms.is_empty() {
            continue;
        }
        let r = row.rhs - weighted_sum(&out, row);
        for &(i, j, _, share) in &row.terms {
            out[(i, j)] += r * share;
            if i != j {
                out[(j, i)] += r * share;
            }
        }
    }
    out
}

/// Orthogonal projection (Frobenius) of the symmetric part of `g` onto the
/// affine set of symmetric matrices meeting every constraint. Constraints
/// rows have disjoint supports, so they are projected independently.
pub fn project_affine(g: &DMatrix<f64>, prob: &GramProblem) -> DMatrix<f64> {
    project_affine_with(g, &float_rows(prob))
}

fn eigen(g: &DMatrix<f64>) -> SymmetricEigen<f64, nalgebra::Dyn> {
    SymmetricEigen::new((g + g.transpose()) * 0.5)
}

fn clip(e: &SymmetricEigen<f64, nalgebra::Dyn>) -> DMatrix<f64> {
    let vals = e.eigenvalues.map(|l| l.max(0.0));
    let v = &e.eigenvectors;
    v * DMatrix::from_diagonal(&vals) * v.transpose()
}

/// Nearest PSD matrix in Frobenius norm: negative eigenvalues set to zero.
pub fn project_psd(g: &DMatrix<f64>) -> DMatrix<f64> {
    clip(&eigen(g))
}

pub fn min_eigenvalue(g: &DMatrix<f64>) -> f64 {
    eigen(g).eigenvalues.min()
}

/// Largest violation of the equality constraints, relative to max(1, max |rhs|).
pub fn affine_residual(g: &DMatrix<f64>, prob: &GramProblem) -> f64 {
    let scale = prob.max_abs_rhs().max(1.0);
    float_rows(prob).iter().map(|r| (weighted_sum(g, r) - r.rhs).abs()).fold(0.0, f64::max) / scale
}

fn finish(prob: &GramProblem, g: DMatrix<f64>, iterations: usize, gap: Option<f64>, status: Status) -> GramSolution {
    GramSolution {
        dim: prob.dim(),
        min_eigenvalue: min_eigenvalue(&g),
        constraint_residual: affine_residual(&g, prob),
        g,
        status,
        iterations,
        gap,
    }
}

/// Looks for a PSD G meeting the constraints of `prob`.
///
/// Returns `Feasible` only after re-checking the candidate from scratch,
/// `InfeasibleGap` when the distance between the two sets has stopped moving
/// at a level well above `eps_aff`, and `Unknown` when the budget runs out.
pub fn solve_feasibility(prob: &GramProblem, opts: &SolverOptions) -> GramSolution {
    let n = prob.dim();
    let cs = float_rows(prob);
    if prob.trivially_infeasible() {
        let g = project_affine_with(&DMatrix::zeros(n, n), &cs);
        return finish(prob, g, 0, None, Status::InfeasibleGap);
    }
    let start = match opts.seed {
        Some(seed) => random_symmetric(n, &mut ChaCha8Rng::seed_from_u64(seed)),
        None => DMatrix::zeros(n, n),
    };
    let mut x = start;
    let mut p = DMatrix::zeros(n, n);
    let mut q = DMatrix::zeros(n, n);
    let mut gaps: Vec<f64> = Vec::new();
    let mut last_gap = None;
    let mut y = project_affine_with(&x, &cs);
    if opts.dykstra {
        p = &x - &y;
    }

    for it in 0..opts.max_iter {
        let to_cone = if opts.dykstra { &y + &q } else { y.clone() };
        let e = eigen(&to_cone);
        let lmin_y = if opts.dykstra { min_eigenvalue(&y) } else { e.eigenvalues.min() };
        if lmin_y >= -opts.eps_psd {
            let sol = finish(prob, y.clone(), it, last_gap, Status::Feasible);
            if sol.min_eigenvalue >= -opts.eps_psd && sol.constraint_residual <= opts.eps_aff {
                return sol;
            }
        }
        x = clip(&e);
        if opts.dykstra {
            q = &to_cone - &x;
        }
        let gap = (&y - &x).norm();
        last_gap = Some(gap);
        gaps.push(gap);
        if gaps.len() > STALL_WINDOW {
            let old = gaps[gaps.len() - 1 - STALL_WINDOW];
            let rel = (old - gap).abs() / gap.max(f64::MIN_POSITIVE);
            if rel < STALL_REL && gap > 10.0 * opts.eps_aff {
                return finish(prob, y, it + 1, last_gap, Status::InfeasibleGap);
            }
        }
        if opts.dykstra {
            y = project_affine_with(&(&x + &p), &cs);
            p = &x + &p - &y;
        } else {
            y = project_affine_with(&x, &cs);
        }
    }
    finish(prob, y, opts.max_iter, last_gap, Status::Unknown)
}

/// Splits a feasible G into polynomials gᵢ = √λᵢ · Σⱼ uᵢⱼ bⱼ over the
/// eigenpairs with λᵢ > `tol`.
pub fn extract_sohs(sol: &GramSolution, basis: &[Word], tol: f64) -> Result<Vec<RealPolynomial>> {
    if sol.status != Status::Feasible {
        return Err(Error::NotFeasible);
    }
    if basis.len() != sol.dim {
        return Err(Error::Dimension(format!("basis has {} words, G is {}x{}", basis.len(), sol.dim, sol.dim)));
    }
    let e = eigen(&sol.g);
    let mut out = Vec::new();
    for (idx, &l) in e.eigenvalues.iter().enumerate() {
        if l <= tol {
            continue;
        }
        let s = l.sqrt();
        let col = e.eigenvectors.column(idx);
        out.push(RealPolynomial::from_terms(
            basis.iter().zip(col.iter()).filter(|(_, &u)| u != 0.0).map(|(b, &u)| (b.clone(), s * u)),
        ));
    }
    // deterministic order: largest contribution first
    out.sort_by(|a, b| norm(b).total_cmp(&norm(a)));
    Ok(out)
}

fn norm(p: &RealPolynomial) -> f64 {
    p.terms().map(|(_, c)| c * c).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gram::{assemble, default_basis, reexpansion_residual, BasisFilter};
    use crate::ncpoly::s_poly;

    fn problem(m: usize, k: usize, f: BasisFilter) -> GramProblem {
        let target = s_poly(m, k).unwrap().substitute_squares();
        assemble(&target, &default_basis(m, k, f).unwrap()).unwrap()
    }

    #[test]
    fn affine_projection_is_idempotent() {
        let prob = problem(7, 4, BasisFilter::Full);
        let n = prob.dim();
        let g = random_symmetric(n, &mut ChaCha8Rng::seed_from_u64(3));
        let a = project_affine(&g, &prob);
        assert!(affine_residual(&a, &prob) < 1e-12);
        let b = project_affine(&a, &prob);
        assert!((&a - &b).norm() < 1e-10);
    }

    #[test]
    fn psd_projection_clips() {
        let g = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -2.0]);
        let p = project_psd(&g);
        assert!((p[(1, 1)]).abs() < 1e-15 && (p[(0, 0)] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn seven_with_v01_is_feasible() {
        let prob = problem(7, 4, BasisFilter::V01);
        let sol = solve_feasibility(&prob, &SolverOptions::default());
        assert_eq!(sol.status, Status::Feasible, "{sol:?}");
        let gs = extract_sohs(&sol, &prob.basis, 1e-7).unwrap();
        assert!(reexpansion_residual(&gs, &prob.target) < 1e-6);
    }

    #[test]
    fn extract_requires_feasible() {
        let prob = problem(6, 3, BasisFilter::Full);
        let sol = solve_feasibility(&prob, &SolverOptions { max_iter: 50, ..Default::default() });
        assert_ne!(sol.status, Status::Feasible);
        assert_eq!(extract_sohs(&sol, &prob.basis, 1e-9), Err(Error::NotFeasible));
    }

    #[test]
    fn solution_json_round_trip() {
        let prob = problem(5, 4, BasisFilter::V01);
        let sol = solve_feasibility(&prob, &SolverOptions::default());
        let back = GramSolution::from_json(&sol.to_json()).unwrap();
        assert_eq!(back, sol);
    }
}
