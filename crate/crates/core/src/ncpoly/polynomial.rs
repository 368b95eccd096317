use std::collections::btree_map::{self, BTreeMap};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::word::{Letter, Word};
use crate::error::{Error, Result};

/// Shorthand for an exact rational constant.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// An element of Q<X,Y>: a finite map from words to nonzero rationals.
///
/// Terms iterate in term order (length, then lexicographic with X < Y).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Word, BigRational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::from_word(Word::empty())
    }

    pub fn x() -> Self {
        Polynomial::from_word(Word::from_letters([Letter::X]))
    }

    pub fn y() -> Self {
        Polynomial::from_word(Word::from_letters([Letter::Y]))
    }

    pub fn from_word(w: Word) -> Self {
        Polynomial::monomial(BigRational::one(), w)
    }

    pub fn monomial(c: BigRational, w: Word) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(w, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, BigRational)>>(terms: I) -> Self {
        let mut p = Polynomial::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    /// Adds `c·w`, dropping the term if it cancels.
    pub fn add_term(&mut self, w: Word, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored (nonzero) terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> BigRational {
        self.terms.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &BigRational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn coefficient_sum(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |acc, c| acc + c)
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect(),
        }
    }

    /// The involution p ↦ p*: reverses every word, fixes coefficients.
    pub fn star(&self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(w, c)| (w.reversed(), c.clone())).collect(),
        }
    }

    /// Replaces X by X² and Y by Y².
    pub fn substitute_squares(&self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(w, c)| (w.doubled(), c.clone())).collect(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Word::degrees);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }
}

/// `[p, q] = pq − qp`.
pub fn commutator(p: &Polynomial, q: &Polynomial) -> Polynomial {
    &(p * q) - &(q * p)
}

/// S_{m,k}(X,Y): the sum of all C(m,k) words of length m containing exactly
/// k letters Y, each with coefficient 1.
pub fn s_poly(m: usize, k: usize) -> Result<Polynomial> {
    if k > m {
        return Err(Error::InvalidRange(format!("k = {k} exceeds m = {m}")));
    }
    let mut out = Polynomial::zero();
    let mut current = Word::empty();
    fill(m, k, &mut current, &mut out);
    Ok(out)
}

fn fill(remaining: usize, ys: usize, prefix: &mut Word, out: &mut Polynomial) {
    if remaining == 0 {
        out.terms.insert(prefix.clone(), BigRational::one());
        return;
    }
    if remaining > ys {
        let mut next = prefix.clone();
        next.push(Letter::X);
        fill(remaining - 1, ys, &mut next, out);
    }
    if ys > 0 {
        let mut next = prefix.clone();
        next.push(Letter::Y);
        fill(remaining - 1, ys - 1, &mut next, out);
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (u, a) in &self.terms {
            for (v, b) in &rhs.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for Polynomial {
    fn sum<I: Iterator<Item = Polynomial>>(iter: I) -> Polynomial {
        iter.fold(Polynomial::zero(), |acc, p| &acc + &p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn additive_inverse_and_identity() {
        assert!((&Polynomial::x() + &(-&Polynomial::x())).is_zero());
        assert_eq!(&p("X^2*Y^2") + &p("X^2*Y^2"), p("2*X^2*Y^2"));
        let s = s_poly(4, 2).unwrap();
        assert_eq!(&s + &Polynomial::zero(), s);
    }

    #[test]
    fn multiplication_is_noncommutative() {
        let (x, y) = (Polynomial::x(), Polynomial::y());
        assert_eq!(&x * &y, p("X*Y"));
        assert_ne!(&x * &y, &y * &x);
    }

    #[test]
    fn concatenation_with_reversal() {
        let a = p("Y^2*X^2");
        assert_eq!(&a * &a.star(), p("Y^2*X^4*Y^2"));
    }

    #[test]
    fn distributivity_example() {
        let lhs = &p("X + Y") * &p("X - Y");
        assert_eq!(lhs, p("X^2 - X*Y + Y*X - Y^2"));
    }

    #[test]
    fn star_reverses_words() {
        assert_eq!(p("X*Y*X^2").star(), p("X^2*Y*X"));
        assert_eq!(p("X^2*Y^2*X").star(), p("X*Y^2*X^2"));
    }

    #[test]
    fn commutator_examples() {
        assert!(commutator(&Polynomial::x(), &Polynomial::x()).is_zero());
        let f = p("X^2*Y*X + Y*X^3 + 2*X^2*Y^2");
        let g = p("2*Y*X^3 + 2*Y*X^2*Y");
        let sum = &commutator(&p("X^2"), &p("Y*X")) + &commutator(&p("2*X^2*Y"), &p("Y"));
        assert_eq!(sum, &f - &g);
    }

    #[test]
    fn s_poly_examples() {
        assert_eq!(
            s_poly(4, 2).unwrap(),
            p("X^2*Y^2 + X*Y*X*Y + X*Y^2*X + Y*X*Y*X + Y^2*X^2 + Y*X^2*Y")
        );
        assert_eq!(s_poly(5, 0).unwrap(), p("X^5"));
        assert_eq!(s_poly(0, 0).unwrap(), Polynomial::one());
        let s = s_poly(7, 4).unwrap();
        assert_eq!(s.len(), 35);
        assert!(s.terms().all(|(_, c)| c.is_one()));
        assert!(s_poly(3, 4).is_err());
    }

    #[test]
    fn substitute_squares_examples() {
        assert_eq!(p("X*Y").substitute_squares(), p("X^2*Y^2"));
        assert_eq!(Polynomial::one().substitute_squares(), Polynomial::one());
        let sq = s_poly(4, 2).unwrap().substitute_squares();
        assert_eq!(
            sq,
            p("X^4*Y^4 + X^2*Y^2*X^2*Y^2 + X^2*Y^4*X^2 + Y^2*X^2*Y^2*X^2 + Y^4*X^4 + Y^2*X^4*Y^2")
        );
        assert!(sq.words().all(|w| w.len() == 8));
    }

    #[test]
    fn s_poly_words_have_expected_degrees() {
        for m in 4..10 {
            assert!(s_poly(m, 4).unwrap().words().all(|w| w.degrees() == (m - 4, 4)));
        }
    }
}
