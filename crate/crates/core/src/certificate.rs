//! Explicit sum-of-Hermitian-squares certificates for S_{m,4}(X², Y²).
//!
//! A certificate stores the multiplier m and generators f_0, f_1, … and
//! stands for m·Σ f_k*·f_k. Every generator word has the shape
//! X^a Y² X^b Y² X^c with a + b + c = m − 4. Generators are grouped by the
//! leading X-exponent a; for odd m all coefficients are 1, for even m the
//! unique word of each group with equal outer exponents gets weight ½.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclic::{self, canonical_rotation, class_decomposition, CyclicClass};
use crate::error::{Error, Result};
use crate::ncpoly::{rat, Letter, Polynomial, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(m: usize) -> Parity {
        if m % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// Which of the two generator families a word belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subset {
    /// Leading X-exponent even.
    V0,
    /// Leading X-exponent odd.
    V1,
}

/// Exponent data of one generator word.
///
/// With all of `k`, `l`, `k_prime` even:
///
/// | m    | subset | word                          | constraint               |
/// |------|--------|-------------------------------|--------------------------|
/// | odd  | V0     | X^k Y² X^l Y² X^(k′+1)        | k+l+k′ = m−5, k ≤ k′     |
/// | odd  | V1     | X^(k+1) Y² X^l Y² X^k′        | k+l+k′ = m−5, k+1 ≤ k′   |
/// | even | V0     | X^k Y² X^l Y² X^k′            | k+l+k′ = m−4, k ≤ k′     |
/// | even | V1     | X^(k+1) Y² X^l Y² X^(k′+1)    | k+l+k′ = m−6, k ≤ k′     |
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorTriple {
    pub k: usize,
    pub l: usize,
    pub k_prime: usize,
    pub subset: Subset,
}

impl GeneratorTriple {
    /// Leading X-exponent; this is the index of the generator f_k the word
    /// is added to.
    pub fn group(&self) -> usize {
        match self.subset {
            Subset::V0 => self.k,
            Subset::V1 => self.k + 1,
        }
    }

    pub fn word(&self, parity: Parity) -> Word {
        let (lead, tail) = match (parity, self.subset) {
            (Parity::Odd, Subset::V0) => (self.k, self.k_prime + 1),
            (Parity::Odd, Subset::V1) => (self.k + 1, self.k_prime),
            (Parity::Even, Subset::V0) => (self.k, self.k_prime),
            (Parity::Even, Subset::V1) => (self.k + 1, self.k_prime + 1),
        };
        Word::from_runs(Letter::X, &[lead, 2, self.l, 2, tail])
    }

    pub fn weight(&self, parity: Parity) -> BigRational {
        if parity == Parity::Even && self.k == self.k_prime {
            rat(1, 2)
        } else {
            BigRational::one()
        }
    }
}

/// All generator triples for `m`, both subsets, ordered by group then word.
pub fn generator_triples(m: usize) -> Result<Vec<GeneratorTriple>> {
    let parity = Parity::of(m);
    let min = if parity == Parity::Odd { 5 } else { 6 };
    if m < min {
        return Err(Error::InvalidRange(format!("m = {m} is below {min}")));
    }
    let mut out = Vec::new();
    let mut push_family = |subset: Subset, total: usize| {
        for k in (0..=total).step_by(2) {
            for l in (0..=total - k).step_by(2) {
                let k_prime = total - k - l;
                let admissible = match (parity, subset) {
                    (Parity::Odd, Subset::V1) => k + 1 <= k_prime,
                    _ => k <= k_prime,
                };
                if admissible {
                    out.push(GeneratorTriple { k, l, k_prime, subset });
                }
            }
        }
    };
    match parity {
        Parity::Odd => {
            push_family(Subset::V0, m - 5);
            push_family(Subset::V1, m - 5);
        }
        Parity::Even => {
            push_family(Subset::V0, m - 4);
            push_family(Subset::V1, m - 6);
        }
    }
    out.sort_by(|a, b| a.group().cmp(&b.group()).then_with(|| a.word(parity).cmp(&b.word(parity))));
    Ok(out)
}

/// Data (m, {f_k}) standing for m·Σ f_k*·f_k.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    m: usize,
    parity: Parity,
    multiplier: BigRational,
    generators: Vec<Polynomial>,
}

fn build_grouped(m: usize, parity: Parity, slots: usize) -> Result<Certificate> {
    let mut generators = vec![Polynomial::zero(); slots];
    for t in generator_triples(m)? {
        let g = t.group();
        debug_assert!(g < slots);
        generators[g].add_term(t.word(parity), t.weight(parity));
    }
    Ok(Certificate { m, parity, multiplier: BigRational::from_integer(m.into()), generators })
}

/// Certificate for odd m ≥ 5, generators f_0 … f_((m−5)/2).
pub fn build_odd(m: usize) -> Result<Certificate> {
    if m % 2 == 0 {
        return Err(Error::WrongParity { m });
    }
    if m < 5 {
        return Err(Error::InvalidRange(format!("m = {m} is below 5")));
    }
    build_grouped(m, Parity::Odd, (m - 5) / 2 + 1)
}

/// Certificate for even m ≥ 6, generators f_0 … f_((m−4)/2) with ½ weights.
pub fn build_even(m: usize) -> Result<Certificate> {
    if m % 2 == 1 {
        return Err(Error::WrongParity { m });
    }
    if m < 6 {
        return Err(Error::InvalidRange(format!("m = {m} is below 6")));
    }
    build_grouped(m, Parity::Even, (m - 4) / 2 + 1)
}

/// Dispatches on the parity of `m`.
pub fn build(m: usize) -> Result<Certificate> {
    match Parity::of(m) {
        Parity::Odd => build_odd(m),
        Parity::Even => build_even(m),
    }
}

impl Certificate {
    /// Assembles a certificate from parts; used for deserialization and for
    /// hand-made (possibly wrong) certificates in tests.
    pub fn from_parts(m: usize, multiplier: BigRational, generators: Vec<Polynomial>) -> Certificate {
        Certificate { m, parity: Parity::of(m), multiplier, generators }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn multiplier(&self) -> &BigRational {
        &self.multiplier
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn generators_mut(&mut self) -> &mut Vec<Polynomial> {
        &mut self.generators
    }

    /// Generator words carrying coefficient ½, as `(k, word)`.
    pub fn half_weight_words(&self) -> Vec<(usize, Word)> {
        let half = rat(1, 2);
        self.generators
            .iter()
            .enumerate()
            .flat_map(|(k, f)| f.terms().filter(|(_, c)| **c == half).map(move |(w, _)| (k, w.clone())))
            .collect()
    }

    /// Distinct words over all generators, in term order.
    pub fn basis(&self) -> Vec<Word> {
        let mut words: Vec<Word> = self.generators.iter().flat_map(|f| f.words().cloned()).collect();
        words.sort();
        words.dedup();
        words
    }

    /// multiplier · Σ f_k*·f_k.
    pub fn expand(&self) -> Polynomial {
        let sum: Polynomial = self.generators.iter().map(|f| &f.star() * f).sum();
        sum.scale(&self.multiplier)
    }

    pub fn to_json(&self) -> String {
        let file = CertificateFile {
            m: self.m,
            parity: self.parity,
            multiplier: self.multiplier.to_string(),
            generators: self
                .generators
                .iter()
                .map(|f| f.terms().map(|(w, c)| (c.to_string(), w.to_string())).collect())
                .collect(),
            text: self.generators.iter().map(|f| f.to_string()).collect(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("certificate serializes");
        s.push('\n');
        s
    }

    /// Parses the JSON form. The derived `text` field is ignored.
    pub fn from_json(s: &str) -> Result<Certificate> {
        let file: CertificateFile = serde_json::from_str(s)?;
        if file.parity != Parity::of(file.m) {
            return Err(Error::InvalidCertificate(format!("parity does not match m = {}", file.m)));
        }
        let multiplier = parse_rational(&file.multiplier)?;
        let mut generators = Vec::with_capacity(file.generators.len());
        for g in &file.generators {
            let mut f = Polynomial::zero();
            for (c, w) in g {
                f.add_term(w.parse()?, parse_rational(c)?);
            }
            generators.push(f);
        }
        Ok(Certificate::from_parts(file.m, multiplier, generators))
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|e| Error::InvalidCertificate(format!("bad rational {s:?}: {e}")))
}

#[derive(Serialize, Deserialize)]
struct CertificateFile {
    m: usize,
    parity: Parity,
    multiplier: String,
    generators: Vec<Vec<(String, String)>>,
    #[serde(default)]
    text: Vec<String>,
}

/// True when `w` lies in X·{X², Y²}^((m−1)/2) with four letters Y.
pub fn in_v2_odd(w: &Word, m: usize) -> bool {
    if w.len() != m || w.degrees().1 != 4 || w.is_empty() || w.letter(0) != Letter::X {
        return false;
    }
    w.split_at(1).1.halved().is_some()
}

/// Rewrites an odd certificate so every generator word lies in V₂.
///
/// Uses f*·f ∼cyc f·f* = (f*)*·(f*): any generator whose words are not in
/// V₂ is replaced by its reverse. The V₀ words X^k Y² X^l Y² X^(k′+1) reverse
/// to X^(k′+1) Y² X^l Y² X^k, which lie in V₂.
pub fn to_v2_form(cert: &Certificate) -> Result<Certificate> {
    if cert.parity != Parity::Odd {
        return Err(Error::Unsupported(
            "V2 form is only constructed for odd m; no even-m construction is known here".into(),
        ));
    }
    let m = cert.m;
    let mut generators = Vec::with_capacity(cert.generators.len());
    for f in &cert.generators {
        if f.words().all(|w| in_v2_odd(w, m)) {
            generators.push(f.clone());
        } else {
            let r = f.star();
            if !r.words().all(|w| in_v2_odd(w, m)) {
                return Err(Error::Unsupported(format!("generator {f} cannot be moved into V2")));
            }
            generators.push(r);
        }
    }
    let out = Certificate { generators, ..cert.clone() };
    if class_decomposition(&out.expand()) != class_decomposition(&cert.expand()) {
        return Err(Error::InvalidCertificate("V2 rewrite changed the class decomposition".into()));
    }
    Ok(out)
}

/// Odd m: number of cyclic classes of S_{m,4}, (1/m)·C(m,4).
/// Even m: the coefficient sum C(m,4).
pub fn expected_class_count(m: usize) -> BigRational {
    let c = BigRational::from_integer(binomial(BigInt::from(m), BigInt::from(4)));
    match Parity::of(m) {
        Parity::Odd => c / BigRational::from_integer(m.into()),
        Parity::Even => c,
    }
}

/// Closed form (1/6)·((m−3)/2)·((m−1)/2)·(m−2) for odd m.
pub fn odd_class_count_closed_form(m: usize) -> BigRational {
    let m = BigRational::from_integer(m.into());
    let one = BigRational::one();
    let two = rat(2, 1);
    let three = rat(3, 1);
    (&m - &three) / &two * ((&m - &one) / &two) * (&m - &two) / rat(6, 1)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WordCountRow {
    pub k: usize,
    pub unit_words: usize,
    pub half_words: usize,
    pub expected_unit_words: usize,
    pub expected_half_words: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WordCountReport {
    pub m: usize,
    pub rows: Vec<WordCountRow>,
    /// Odd: Σ_k |f_k|²; even: m·Σ_k (Σ coefficients of f_k)².
    pub total: String,
    /// Odd: (1/6)((m−3)/2)((m−1)/2)(m−2); even: C(m,4).
    pub closed_form: String,
    /// Odd: number of distinct expansion words; even: coefficient sum of the expansion.
    pub observed: String,
    pub passed: bool,
}

/// Checks the per-generator word counts and the total-count identity.
pub fn word_count_check(cert: &Certificate) -> WordCountReport {
    let m = cert.m;
    let half = rat(1, 2);
    let mut rows = Vec::new();
    let mut total = BigRational::zero();
    for (k, f) in cert.generators.iter().enumerate() {
        let half_words = f.terms().filter(|(_, c)| **c == half).count();
        let unit_words = f.terms().filter(|(_, c)| c.is_one()).count();
        let (expected_unit_words, expected_half_words) = match cert.parity {
            Parity::Odd => (((m - 3) / 2).saturating_sub(k), 0),
            Parity::Even => (((m - 4) / 2).saturating_sub(k), 1),
        };
        let passed = unit_words == expected_unit_words
            && half_words == expected_half_words
            && unit_words + half_words == f.len();
        rows.push(WordCountRow { k, unit_words, half_words, expected_unit_words, expected_half_words, passed });
        let s = match cert.parity {
            Parity::Odd => BigRational::from_integer(f.len().into()),
            Parity::Even => f.coefficient_sum(),
        };
        total += &s * &s;
    }
    let expansion = cert.expand();
    let (closed_form, observed) = match cert.parity {
        Parity::Odd => (odd_class_count_closed_form(m), BigRational::from_integer(expansion.len().into())),
        Parity::Even => {
            total *= &cert.multiplier;
            (expected_class_count(m), expansion.coefficient_sum())
        }
    };
    let slots_ok = match cert.parity {
        Parity::Odd => rows.len() == (m - 3) / 2,
        Parity::Even => rows.len() == (m - 2) / 2,
    };
    let passed = slots_ok && rows.iter().all(|r| r.passed) && total == closed_form && observed == closed_form;
    WordCountReport {
        m,
        rows,
        total: total.to_string(),
        closed_form: closed_form.to_string(),
        observed: observed.to_string(),
        passed,
    }
}

/// One cyclic class of the expansion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassTally {
    pub class: String,
    pub words: usize,
    pub coefficient_sum: String,
    /// Order in units of X², Y².
    pub order: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequivalenceReport {
    pub m: usize,
    pub parity: Parity,
    pub words: usize,
    pub classes: usize,
    pub max_words_per_class: usize,
    /// Every class sum is at most the class order.
    pub sums_bounded_by_order: bool,
    /// Every class sum equals the class order.
    pub sums_equal_order: bool,
    pub violations: Vec<ClassTally>,
    pub passed: bool,
}

/// Per-class tallies of the expanded certificate.
pub fn class_tallies(cert: &Certificate) -> Vec<(CyclicClass, ClassTally)> {
    let mut by_class: BTreeMap<CyclicClass, (usize, BigRational)> = BTreeMap::new();
    for (w, c) in cert.expand().terms() {
        let class = canonical_rotation(w).expect("expansion words are nonempty");
        let e = by_class.entry(class).or_insert_with(|| (0, BigRational::zero()));
        e.0 += 1;
        e.1 += c;
    }
    by_class
        .into_iter()
        .map(|(class, (words, sum))| {
            let order = cyclic::squared_order(class.canonical()).unwrap_or(class.order());
            let tally = ClassTally { class: class.to_string(), words, coefficient_sum: sum.to_string(), order };
            (class, tally)
        })
        .collect()
}

/// Odd m: all expansion words lie in distinct classes.
/// Even m: at most two expansion words per class and each class sum is
/// bounded by (in fact equal to) the class order.
pub fn pairwise_inequivalence_check(cert: &Certificate) -> InequivalenceReport {
    let tallies = class_tallies(cert);
    let words: usize = tallies.iter().map(|(_, t)| t.words).sum();
    let max_words_per_class = tallies.iter().map(|(_, t)| t.words).max().unwrap_or(0);
    let mut bounded = true;
    let mut equal = true;
    let mut violations = Vec::new();
    for (_, t) in &tallies {
        let sum: BigRational = t.coefficient_sum.parse().expect("rational round-trips");
        let order = BigRational::from_integer(t.order.into());
        let over = sum > order;
        bounded &= !over;
        equal &= sum == order;
        let too_many = match cert.parity {
            Parity::Odd => t.words > 1,
            Parity::Even => t.words > 2,
        };
        if over || too_many {
            violations.push(t.clone());
        }
    }
    let passed = violations.is_empty()
        && bounded
        && match cert.parity {
            Parity::Odd => tallies.len() == words,
            Parity::Even => max_words_per_class <= 2,
        };
    InequivalenceReport {
        m: cert.m,
        parity: cert.parity,
        words,
        classes: tallies.len(),
        max_words_per_class,
        sums_bounded_by_order: bounded,
        sums_equal_order: equal,
        violations,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn odd_seven_matches_worked_example() {
        let c = build_odd(7).unwrap();
        assert_eq!(c.generators(), &[p("Y^2*X^2*Y^2*X + Y^4*X^3"), p("X*Y^4*X^2")]);
        assert_eq!(c.multiplier(), &rat(7, 1));
    }

    #[test]
    fn odd_nine_matches_worked_example() {
        let c = build_odd(9).unwrap();
        assert_eq!(
            c.generators(),
            &[
                p("Y^2*X^2*Y^2*X^3 + Y^4*X^5 + Y^2*X^4*Y^2*X"),
                p("X*Y^2*X^2*Y^2*X^2 + X*Y^4*X^4"),
                p("X^2*Y^4*X^3"),
            ]
        );
    }

    #[test]
    fn odd_five_is_a_single_square() {
        let c = build_odd(5).unwrap();
        assert_eq!(c.generators(), &[p("Y^4*X")]);
        assert_eq!(c.expand(), p("5*X*Y^8*X"));
    }

    #[test]
    fn even_eight_matches_worked_example() {
        let c = build_even(8).unwrap();
        assert_eq!(
            c.generators(),
            &[
                p("Y^2*X^2*Y^2*X^2 + Y^4*X^4 + 1/2*Y^2*X^4*Y^2"),
                p("X*Y^4*X^3 + 1/2*X*Y^2*X^2*Y^2*X"),
                p("1/2*X^2*Y^4*X^2"),
            ]
        );
    }

    #[test]
    fn even_six() {
        let c = build_even(6).unwrap();
        assert_eq!(c.generators(), &[p("Y^4*X^2 + 1/2*Y^2*X^2*Y^2"), p("1/2*X*Y^4*X")]);
        assert_eq!(c.expand().coefficient_sum(), rat(15, 1));
    }

    #[test]
    fn parity_and_range_errors() {
        assert_eq!(build_odd(8), Err(Error::WrongParity { m: 8 }));
        assert_eq!(build_even(7), Err(Error::WrongParity { m: 7 }));
        assert!(build_odd(3).is_err());
        assert!(build_even(4).is_err());
    }

    #[test]
    fn v2_form_of_seven() {
        let c = to_v2_form(&build_odd(7).unwrap()).unwrap();
        assert!(c.generators().iter().all(|f| f.words().all(|w| w.letter(0) == Letter::X)));
        assert_eq!(to_v2_form(&c).unwrap(), c);
        assert!(to_v2_form(&build_even(6).unwrap()).is_err());
    }

    #[test]
    fn v1_words_already_lie_in_v2() {
        let c = build_odd(9).unwrap();
        for t in generator_triples(9).unwrap().iter().filter(|t| t.subset == Subset::V1) {
            assert!(in_v2_odd(&t.word(c.parity()), 9));
        }
    }

    #[test]
    fn expected_counts() {
        assert_eq!(expected_class_count(7), rat(5, 1));
        assert_eq!(expected_class_count(9), rat(14, 1));
        assert_eq!(odd_class_count_closed_form(9), rat(14, 1));
        assert_eq!(expected_class_count(8), rat(70, 1));
    }

    #[test]
    fn word_counts() {
        let r = word_count_check(&build_odd(9).unwrap());
        assert!(r.passed, "{r:?}");
        assert_eq!(r.rows.iter().map(|r| r.unit_words).collect::<Vec<_>>(), vec![3, 2, 1]);
        let r = word_count_check(&build_even(8).unwrap());
        assert!(r.passed, "{r:?}");
        assert_eq!((r.rows[0].unit_words, r.rows[0].half_words), (2, 1));
        assert_eq!((r.rows[2].unit_words, r.rows[2].half_words), (0, 1));
        assert_eq!(build_odd(7).unwrap().expand().len(), 5);
    }

    #[test]
    fn even_eight_paired_class() {
        let c = build_even(8).unwrap();
        let w1 = p("Y^2*X^2*Y^2*X^2").star() * p("Y^2*X^4*Y^2");
        let w2 = p("X*Y^2*X^2*Y^2*X").star() * p("X*Y^4*X^3");
        let (a, b) = (w1.words().next().unwrap().clone(), w2.words().next().unwrap().clone());
        assert!(cyclic::cyc_equivalent_words(&a, &b));
        let e = c.expand();
        assert_eq!(e.coeff(&a) + e.coeff(&b), rat(8, 1));
        let r = pairwise_inequivalence_check(&c);
        assert!(r.passed && r.sums_equal_order, "{r:?}");
        assert_eq!(r.max_words_per_class, 2);
    }

    #[test]
    fn json_round_trip() {
        for m in [7, 8] {
            let c = build(m).unwrap();
            let s = c.to_json();
            let back = Certificate::from_json(&s).unwrap();
            assert_eq!(back, c);
            assert_eq!(back.to_json(), s);
        }
        assert!(build(8).unwrap().to_json().contains("1/2*X^2*Y^4*X^2"));
    }
}
