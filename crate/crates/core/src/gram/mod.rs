//! Gram-matrix formulation of "cyclically equivalent to a sum of Hermitian
//! squares".
//!
//! For a basis b_1..b_n, a symmetric G gives Σ G_ij b_i*·b_j. This is
//! cyclically equivalent to the target iff, for every cyclic class, the
//! entries of G whose product word falls in that class sum to the class
//! coefficient of the target. Each unordered pair i ≤ j is filed under the
//! class of b_i*·b_j; G_ji then lands in the reversed class.

mod exact;
mod real;
mod solver;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::certificate::{self, Parity};
use crate::cyclic::{canonical_rotation, class_decomposition, CyclicClass};
use crate::error::{Error, Result};
use crate::ncpoly::{s_poly, Letter, Polynomial, Word};

pub use exact::{gram_of_certificate, ldl_psd, CertificateGram, LdlFactor};
pub use real::{reexpansion_residual, RealPolynomial};
pub use solver::{
    affine_residual, extract_sohs, min_eigenvalue, project_affine, project_psd, solve_feasibility, GramSolution,
    SolverOptions, Status,
};

/// Which half-degree words to use as the Gram basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisFilter {
    /// Every word of length m with k letters Y.
    Full,
    /// The certificate families V₀ ∪ V₁ (k = 4 only).
    V01,
    /// Words in X·{X²,Y²}^((m−1)/2) (odd m) or {X²,Y²}^(m/2) (even m), k = 4 only.
    V2,
}

impl std::str::FromStr for BasisFilter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(BasisFilter::Full),
            "v01" => Ok(BasisFilter::V01),
            "v2" => Ok(BasisFilter::V2),
            _ => Err(Error::InvalidRange(format!("unknown basis {s:?}; expected full, v01 or v2"))),
        }
    }
}

/// Half-degree basis for the target S_{m,k}(X², Y²), in term order.
pub fn default_basis(m: usize, k: usize, filter: BasisFilter) -> Result<Vec<Word>> {
    if k > m {
        return Err(Error::InvalidRange(format!("k = {k} exceeds m = {m}")));
    }
    let mut words: Vec<Word> = match filter {
        BasisFilter::Full => s_poly(m, k)?.words().cloned().collect(),
        BasisFilter::V01 | BasisFilter::V2 if k != 4 => {
            return Err(Error::Unsupported("v01 and v2 bases are defined for k = 4".into()))
        }
        BasisFilter::V01 => {
            let parity = Parity::of(m);
            certificate::generator_triples(m)?.iter().map(|t| t.word(parity)).collect()
        }
        BasisFilter::V2 => match Parity::of(m) {
            Parity::Odd => s_poly((m - 1) / 2, 2)?
                .words()
                .map(|w| Word::from_letters([Letter::X]).concat(&w.doubled()))
                .collect(),
            Parity::Even => s_poly(m / 2, 2)?.words().map(Word::doubled).collect(),
        },
    };
    words.sort();
    words.dedup();
    Ok(words)
}

/// The products b_i*·b_j (i ≤ j) whose class is `class`, with the target
/// coefficient of that class. Since b_j*·b_i is the reversal of b_i*·b_j, a
/// symmetric G meets the constraint of `class` iff it meets that of the
/// reversed class, with support taken from both.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub class: CyclicClass,
    pub rhs: BigRational,
    pub support: Vec<(usize, usize)>,
}

/// One row of the linear system actually imposed on symmetric G:
/// Σ w·G_ij = rhs over unordered pairs.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Row {
    pub classes: Vec<usize>,
    pub rhs: BigRational,
    pub terms: Vec<(usize, usize, usize)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GramProblem {
    pub target: Polynomial,
    pub basis: Vec<Word>,
    /// Sorted by class.
    pub constraints: Vec<Constraint>,
    /// Target classes that no basis product reaches, in either orientation.
    pub uncovered: Vec<CyclicClass>,
    /// Classes whose target coefficient differs from that of the reversed
    /// class; no symmetric G can match those.
    pub asymmetric: Vec<CyclicClass>,
}

fn unit_class() -> CyclicClass {
    class_decomposition(&Polynomial::one()).into_keys().next().expect("unit class")
}

/// Groups the products b_i*·b_j by cyclic class.
pub fn assemble(target: &Polynomial, basis: &[Word]) -> Result<GramProblem> {
    if basis.is_empty() {
        return Err(Error::EmptyBasis);
    }
    let mut sorted = basis.to_vec();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidRange("basis words must be distinct".into()));
    }
    let target_classes = class_decomposition(target);
    let mut support: BTreeMap<CyclicClass, Vec<(usize, usize)>> = BTreeMap::new();
    for (i, bi) in basis.iter().enumerate() {
        let left = bi.reversed();
        for (j, bj) in basis.iter().enumerate().skip(i) {
            let w = left.concat(bj);
            let class = if w.is_empty() { unit_class() } else { canonical_rotation(&w)? };
            support.entry(class).or_default().push((i, j));
        }
    }
    let reached: Vec<CyclicClass> = support.keys().map(CyclicClass::star).collect();
    for c in reached {
        support.entry(c).or_default();
    }
    let coeff = |c: &CyclicClass| target_classes.get(c).cloned().unwrap_or_else(BigRational::zero);
    let mut uncovered = Vec::new();
    for c in target_classes.keys() {
        if !support.contains_key(c) {
            uncovered.push(c.clone());
            support.insert(c.clone(), Vec::new());
        }
    }
    let asymmetric =
        support.keys().filter(|c| **c < c.star() && coeff(c) != coeff(&c.star())).cloned().collect();
    let constraints = support.into_iter().map(|(class, pairs)| Constraint { rhs: coeff(&class), class, support: pairs }).collect();
    Ok(GramProblem { target: target.clone(), basis: basis.to_vec(), constraints, uncovered, asymmetric })
}

impl GramProblem {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// True when some equality is unsatisfiable before any iteration.
    pub fn trivially_infeasible(&self) -> bool {
        !self.uncovered.is_empty() || !self.asymmetric.is_empty()
    }

    fn position(&self, c: &CyclicClass) -> Option<usize> {
        self.constraints.binary_search_by(|k| k.class.cmp(c)).ok()
    }

    /// The distinct rows of the system on symmetric G. A self-reversed class
    /// gives weights 1 on the diagonal and 2 off it; a class paired with its
    /// reversal gives weight 1 on the union of both supports.
    pub(crate) fn rows(&self) -> Vec<Row> {
        let mut out = Vec::new();
        for (idx, c) in self.constraints.iter().enumerate() {
            let rev = c.class.star();
            if rev == c.class {
                let terms = c.support.iter().map(|&(i, j)| (i, j, if i == j { 1 } else { 2 })).collect();
                out.push(Row { classes: vec![idx], rhs: c.rhs.clone(), terms });
            } else if c.class < rev {
                let other = self.position(&rev).expect("reversed classes are always present");
                let terms = c
                    .support
                    .iter()
                    .chain(&self.constraints[other].support)
                    .map(|&(i, j)| (i, j, 1))
                    .collect();
                out.push(Row { classes: vec![idx, other], rhs: c.rhs.clone(), terms });
            }
        }
        out
    }

    /// Exact residuals `Σ_class G − rhs` of a symmetric rational G, nonzero
    /// ones only, sorted by class.
    pub fn exact_residuals(&self, g: &[Vec<BigRational>]) -> Vec<(CyclicClass, BigRational)> {
        let mut out = Vec::new();
        for row in self.rows() {
            let mut s = BigRational::zero();
            for &(i, j, w) in &row.terms {
                s += BigRational::from_integer(w.into()) * &g[i][j];
            }
            for &idx in &row.classes {
                let c = &self.constraints[idx];
                let r = &s - &c.rhs;
                if !r.is_zero() {
                    out.push((c.class.clone(), r));
                }
            }
        }
        out.sort();
        out
    }

    pub fn to_file(&self) -> GramProblemFile {
        GramProblemFile {
            target: self.target.to_string(),
            basis: self.basis.iter().map(Word::to_string).collect(),
            constraints: self
                .constraints
                .iter()
                .map(|c| ConstraintFile { class: c.class.to_string(), rhs: c.rhs.to_string(), support: c.support.clone() })
                .collect(),
            uncovered: self.uncovered.iter().map(CyclicClass::to_string).collect(),
            asymmetric: self.asymmetric.iter().map(CyclicClass::to_string).collect(),
        }
    }

    /// Rebuilds a problem from its file form, re-deriving the constraint table
    /// and rejecting files whose table disagrees with the target and basis.
    pub fn from_file(file: &GramProblemFile) -> Result<GramProblem> {
        let target: Polynomial = file.target.parse()?;
        let basis = file.basis.iter().map(|s| s.parse()).collect::<Result<Vec<Word>>>()?;
        let prob = assemble(&target, &basis)?;
        if prob.to_file() != *file {
            return Err(Error::Json("constraint table does not match target and basis".into()));
        }
        Ok(prob)
    }

    pub fn max_abs_rhs(&self) -> f64 {
        self.constraints.iter().map(|c| c.rhs.abs().to_f64().unwrap_or(f64::INFINITY)).fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintFile {
    pub class: String,
    pub rhs: String,
    pub support: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GramProblemFile {
    pub target: String,
    pub basis: Vec<String>,
    pub constraints: Vec<ConstraintFile>,
    pub uncovered: Vec<String>,
    pub asymmetric: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::rat;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn v01_basis_for_seven() {
        let b = default_basis(7, 4, BasisFilter::V01).unwrap();
        let mut expected = vec![w("Y^2*X^2*Y^2*X"), w("Y^4*X^3"), w("X*Y^4*X^2")];
        expected.sort();
        assert_eq!(b, expected);
    }

    #[test]
    fn v01_basis_for_eight() {
        let b = default_basis(8, 4, BasisFilter::V01).unwrap();
        let mut expected: Vec<Word> = ["Y^2*X^2*Y^2*X^2", "Y^4*X^4", "X^2*Y^4*X^2", "Y^2*X^4*Y^2", "X*Y^4*X^3", "X*Y^2*X^2*Y^2*X"]
            .iter()
            .map(|s| w(s))
            .collect();
        expected.sort();
        assert_eq!(b, expected);
    }

    #[test]
    fn bases_have_half_degree() {
        for m in 5..=10 {
            for f in [BasisFilter::Full, BasisFilter::V01, BasisFilter::V2] {
                let b = default_basis(m, 4, f).unwrap();
                assert!(!b.is_empty());
                assert!(b.iter().all(|v| v.degrees() == (m - 4, 4)), "m={m} {f:?}");
            }
        }
        assert_eq!(default_basis(7, 4, BasisFilter::Full).unwrap().len(), 35);
        assert!(default_basis(6, 3, BasisFilter::V01).is_err());
    }

    #[test]
    fn assemble_seven() {
        let target = s_poly(7, 4).unwrap().substitute_squares();
        let prob = assemble(&target, &default_basis(7, 4, BasisFilter::V01).unwrap()).unwrap();
        assert!(!prob.trivially_infeasible());
        let nonzero: Vec<_> = prob.constraints.iter().filter(|c| !c.rhs.is_zero()).collect();
        assert_eq!(nonzero.len(), 5);
        assert!(nonzero.iter().all(|c| c.rhs == rat(7, 1)));
        let mut seen = std::collections::BTreeSet::new();
        for c in &prob.constraints {
            for &p in &c.support {
                assert!(seen.insert(p), "pair {p:?} in two constraints");
            }
        }
        assert_eq!(seen.len(), 3 * 4 / 2);
    }

    #[test]
    fn reversed_classes_share_a_row() {
        let target = s_poly(7, 4).unwrap().substitute_squares();
        let prob = assemble(&target, &default_basis(7, 4, BasisFilter::Full).unwrap()).unwrap();
        let rows = prob.rows();
        let covered: usize = rows.iter().map(|r| r.classes.len()).sum();
        assert_eq!(covered, prob.constraints.len());
        assert!(rows.iter().any(|r| r.classes.len() == 2));
    }

    #[test]
    fn diagonal_products_are_palindromic() {
        let basis = default_basis(8, 4, BasisFilter::Full).unwrap();
        for b in &basis {
            assert!(b.reversed().concat(b).is_palindrome());
        }
    }

    #[test]
    fn uncovered_target_class_is_flagged() {
        let target: Polynomial = "X^2*Y^2 + Y^4".parse().unwrap();
        let prob = assemble(&target, &[w("X*Y")]).unwrap();
        assert!(prob.trivially_infeasible());
        assert_eq!(prob.uncovered.len(), 1);
        assert_eq!(assemble(&target, &[]), Err(Error::EmptyBasis));
    }

    #[test]
    fn problem_file_round_trip() {
        let target = s_poly(6, 4).unwrap().substitute_squares();
        let prob = assemble(&target, &default_basis(6, 4, BasisFilter::V01).unwrap()).unwrap();
        let json = serde_json::to_string(&prob.to_file()).unwrap();
        let back: GramProblemFile = serde_json::from_str(&json).unwrap();
        assert_eq!(GramProblem::from_file(&back).unwrap(), prob);
    }
}
