use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use crate::cyclic::{canonical_rotation, class_decomposition, CyclicClass};
use crate::ncpoly::{Polynomial, Word};

/// A word polynomial with floating-point coefficients, as produced by
/// numerical Gram extraction.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RealPolynomial {
    terms: BTreeMap<Word, f64>,
}

impl RealPolynomial {
    pub fn from_terms<I: IntoIterator<Item = (Word, f64)>>(terms: I) -> Self {
        let mut p = RealPolynomial::default();
        for (w, c) in terms {
            *p.terms.entry(w).or_insert(0.0) += c;
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &f64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn star(&self) -> RealPolynomial {
        RealPolynomial { terms: self.terms.iter().map(|(w, c)| (w.reversed(), *c)).collect() }
    }

    pub fn mul(&self, other: &RealPolynomial) -> RealPolynomial {
        RealPolynomial::from_terms(
            self.terms.iter().flat_map(|(u, a)| other.terms.iter().map(move |(v, b)| (u.concat(v), a * b))),
        )
    }

    /// Σ gᵢ*·gᵢ.
    pub fn hermitian_square_sum(gs: &[RealPolynomial]) -> RealPolynomial {
        RealPolynomial::from_terms(gs.iter().flat_map(|g| g.star().mul(g).terms.into_iter()))
    }

    pub fn class_sums(&self) -> BTreeMap<CyclicClass, f64> {
        let mut out: BTreeMap<CyclicClass, f64> = BTreeMap::new();
        for (w, c) in &self.terms {
            let class = canonical_rotation(w).expect("Gram products are nonempty words");
            *out.entry(class).or_insert(0.0) += c;
        }
        out
    }
}

/// Largest per-class deviation between Σ gᵢ*gᵢ and `target`, relative to the
/// largest class coefficient of the target.
pub fn reexpansion_residual(gs: &[RealPolynomial], target: &Polynomial) -> f64 {
    let approx = RealPolynomial::hermitian_square_sum(gs).class_sums();
    let exact = class_decomposition(target);
    let scale = exact.values().map(|c| c.to_f64().unwrap_or(0.0).abs()).fold(0.0, f64::max).max(1.0);
    let mut worst: f64 = 0.0;
    for (class, c) in &exact {
        let a = approx.get(class).copied().unwrap_or(0.0);
        worst = worst.max((a - c.to_f64().unwrap_or(f64::NAN)).abs());
    }
    for (class, a) in &approx {
        if !exact.contains_key(class) {
            worst = worst.max(a.abs());
        }
    }
    worst / scale
}
