//! Cyclic equivalence of words and polynomials.
//!
//! Two words are cyclically equivalent when one is a rotation of the other;
//! two polynomials are cyclically equivalent when their coefficient sums
//! agree on every rotation class, which is the same as differing by a sum of
//! commutators. Classes are keyed by the lexicographically least rotation.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ncpoly::{Letter, Polynomial, Word};

/// A rotation class, represented by its least rotation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CyclicClass {
    canonical: Word,
    order: usize,
}

impl CyclicClass {
    pub fn canonical(&self) -> &Word {
        &self.canonical
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of distinct words in the class; equals the order.
    pub fn size(&self) -> usize {
        self.order
    }

    /// The class of the unit 1, order 1 by convention.
    fn unit() -> Self {
        CyclicClass { canonical: Word::empty(), order: 1 }
    }

    /// Class of the reversed words.
    pub fn star(&self) -> CyclicClass {
        if self.canonical.is_empty() {
            return self.clone();
        }
        canonical_rotation(&self.canonical.reversed()).expect("nonempty")
    }
}

impl fmt::Display for CyclicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:ord={}", self.canonical, self.order)
    }
}

/// Booth's least-rotation algorithm; returns some offset of a least rotation.
fn booth(s: &[u8]) -> usize {
    let n = s.len();
    let mut fail = vec![-1isize; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let sj = s[j % n];
        let mut i = fail[j - k - 1];
        while i != -1 && sj != s[(k + i as usize + 1) % n] {
            if sj < s[(k + i as usize + 1) % n] {
                k = j - i as usize - 1;
            }
            i = fail[i as usize];
        }
        if i == -1 && sj != s[k % n] {
            if sj < s[k % n] {
                k = j;
            }
            fail[j - k] = -1;
        } else {
            fail[j - k] = i + 1;
        }
    }
    k % n
}

/// Smallest cyclic period via the prefix function.
fn period(s: &[u8]) -> usize {
    let n = s.len();
    let mut pi = vec![0usize; n];
    for i in 1..n {
        let mut j = pi[i - 1];
        while j > 0 && s[i] != s[j] {
            j = pi[j - 1];
        }
        if s[i] == s[j] {
            j += 1;
        }
        pi[i] = j;
    }
    let p = n - pi[n - 1];
    if n % p == 0 {
        p
    } else {
        n
    }
}

/// Offset `r` with `w.rotated(r)` the least rotation; the smallest such
/// offset is returned.
pub fn least_rotation_offset(w: &Word) -> Result<usize> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let s = w.to_bytes();
    Ok(booth(&s) % period(&s))
}

/// Least rotation and order of `w`, in linear time.
pub fn canonical_rotation(w: &Word) -> Result<CyclicClass> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let s = w.to_bytes();
    let order = period(&s);
    let offset = booth(&s) % order;
    Ok(CyclicClass { canonical: w.rotated(offset), order })
}

/// Smallest k ≥ 1 with w_(i+k) = w_(i) for all i, indices taken cyclically.
pub fn order(w: &Word) -> Result<usize> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(period(&w.to_bytes()))
}

pub fn cyc_equivalent_words(v: &Word, w: &Word) -> bool {
    if v.len() != w.len() {
        return false;
    }
    if v.is_empty() {
        return true;
    }
    canonical_rotation(v).expect("nonempty") == canonical_rotation(w).expect("nonempty")
}

fn class_of(w: &Word) -> CyclicClass {
    if w.is_empty() {
        CyclicClass::unit()
    } else {
        canonical_rotation(w).expect("nonempty")
    }
}

/// Per-class coefficient sums; classes summing to zero are dropped.
pub fn class_decomposition(p: &Polynomial) -> BTreeMap<CyclicClass, BigRational> {
    let mut out: BTreeMap<CyclicClass, BigRational> = BTreeMap::new();
    for (w, c) in p.terms() {
        *out.entry(class_of(w)).or_insert_with(BigRational::zero) += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn cyc_equivalent(p: &Polynomial, q: &Polynomial) -> bool {
    class_decomposition(&(p - q)).is_empty()
}

/// Nonzero class residuals of `p − q`, sorted by class.
pub fn class_residuals(p: &Polynomial, q: &Polynomial) -> Vec<(CyclicClass, BigRational)> {
    class_decomposition(&(p - q)).into_iter().collect()
}

/// Writes `p − q` as an explicit sum of commutators `Σ [aᵢ, bᵢ]`.
///
/// Each term `c·w` of `p − q` with `w = u·v` and `v·u` the least rotation
/// contributes the pair `(c·u, v)`, since `c·uv − c·vu = [c·u, v]`. What
/// remains is a combination of least rotations, which vanishes exactly when
/// the inputs are cyclically equivalent.
pub fn commutator_witness(p: &Polynomial, q: &Polynomial) -> Result<Vec<(Polynomial, Polynomial)>> {
    let diff = p - q;
    if let Some((class, c)) = class_decomposition(&diff).into_iter().next() {
        return Err(Error::NotEquivalent { class: class.to_string(), difference: c.to_string() });
    }
    let mut pairs = Vec::new();
    for (w, c) in diff.terms() {
        if w.is_empty() {
            continue;
        }
        let r = least_rotation_offset(w)?;
        if r == 0 {
            continue;
        }
        let (u, v) = w.split_at(r);
        pairs.push((Polynomial::monomial(c.clone(), u), Polynomial::from_word(v)));
    }
    Ok(pairs)
}

/// Sum of the commutators in a witness list.
pub fn sum_of_commutators(pairs: &[(Polynomial, Polynomial)]) -> Polynomial {
    pairs.iter().map(|(a, b)| crate::ncpoly::commutator(a, b)).sum()
}

/// Reading of a word over the squared alphabet {X², Y²}.
///
/// Returns the halved least rotation when every cyclic run of `w` has even
/// length, i.e. when some rotation of `w` is a word in X² and Y².
pub fn squared_reading(w: &Word) -> Option<Word> {
    if w.is_empty() {
        return Some(Word::empty());
    }
    let class = canonical_rotation(w).ok()?;
    let c = class.canonical();
    // a least rotation that is not a single-letter power starts at a run boundary
    let runs = c.runs();
    let wraps = runs.len() > 1 && runs[0].0 == runs[runs.len() - 1].0;
    if wraps || runs.iter().any(|&(_, n)| n % 2 != 0) {
        return None;
    }
    c.halved()
}

/// Order of `w` measured in letters of the squared alphabet.
pub fn squared_order(w: &Word) -> Option<usize> {
    let h = squared_reading(w)?;
    if h.is_empty() {
        return Some(1);
    }
    order(&h).ok()
}

/// X-run lengths following the four Y² groups of a word with eight Y's.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentProfile {
    pub n: [usize; 4],
}

impl ExponentProfile {
    /// Profile after moving the first `j` groups `Y²X^(n_i)` to the end.
    pub fn rotated(&self, j: usize) -> ExponentProfile {
        let mut n = [0; 4];
        for (i, slot) in n.iter_mut().enumerate() {
            *slot = self.n[(i + j) % 4];
        }
        ExponentProfile { n }
    }

    pub fn equivalent(&self, other: &ExponentProfile) -> bool {
        (0..4).any(|j| self.rotated(j) == *other)
    }

    /// The word Y²X^(n₁)Y²X^(n₂)Y²X^(n₃)Y²X^(n₄).
    pub fn word(&self) -> Word {
        let mut runs = Vec::with_capacity(8);
        for &n in &self.n {
            runs.push(2);
            runs.push(n);
        }
        // alternate Y, X starting with Y; zero X-runs merge adjacent Y²'s
        Word::from_runs(Letter::Y, &runs)
    }
}

fn profile_from_left(w: &Word) -> Option<ExponentProfile> {
    let runs = w.runs();
    let mut it = runs.iter().peekable();
    let mut n0 = 0;
    if let Some(&&(Letter::X, n)) = it.peek() {
        n0 = n;
        it.next();
    }
    let mut n = Vec::with_capacity(4);
    while let Some(&(l, len)) = it.next() {
        debug_assert_eq!(l, Letter::Y);
        if len % 2 != 0 {
            return None;
        }
        for _ in 0..len / 2 - 1 {
            n.push(0);
        }
        let x = match it.peek() {
            Some(&&(Letter::X, x)) => {
                it.next();
                x
            }
            _ => 0,
        };
        n.push(x);
    }
    if n.len() != 4 {
        return None;
    }
    n[3] += n0;
    Some(ExponentProfile { n: [n[0], n[1], n[2], n[3]] })
}

/// Profile `(n₁, n₂, n₃, n₄′ + n₀)` of `X^(n₀)Y²X^(n₁)Y²X^(n₂)Y²X^(n₃)Y²X^(n₄′)`.
///
/// Words whose Y-runs are only even after a rotation (a Y-run wrapping
/// around the end) are read from the start of that run.
pub fn exponent_profile(w: &Word) -> Result<ExponentProfile> {
    let malformed = |reason: &str| Error::MalformedWord { word: w.to_string(), reason: reason.into() };
    if w.degrees().1 != 8 {
        return Err(malformed("expected exactly eight letters Y"));
    }
    if let Some(p) = profile_from_left(w) {
        return Ok(p);
    }
    // rotate to the start of a cyclic Y-run
    let n = w.len();
    let start = (0..n)
        .find(|&i| w.letter(i) == Letter::Y && w.letter((i + n - 1) % n) == Letter::X)
        .ok_or_else(|| malformed("no X letters"))?;
    profile_from_left(&w.rotated(start)).ok_or_else(|| malformed("Y-runs are not four Y² groups"))
}
