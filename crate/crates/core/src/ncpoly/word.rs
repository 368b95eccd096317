use std::cmp::Ordering;
use std::fmt;

/// One of the two noncommuting generators. `X < Y` everywhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    X,
    Y,
}

impl Letter {
    #[inline]
    fn bit(self) -> u64 {
        match self {
            Letter::X => 0,
            Letter::Y => 1,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::X => 'X',
            Letter::Y => 'Y',
        }
    }
}

const BLOCK: usize = 64;

/// An element of the free monoid on {X, Y}.
///
/// Letters are packed MSB-first into 64-bit blocks (X = 0, Y = 1) with the
/// unused tail bits kept at zero, so two words of equal length compare
/// lexicographically by comparing their blocks as integers.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    len: usize,
    blocks: Vec<u64>,
}

impl Word {
    /// The empty word, i.e. the unit 1.
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut w = Word::empty();
        for l in letters {
            w.push(l);
        }
        w
    }

    /// `letter^n`.
    pub fn power_of(letter: Letter, n: usize) -> Self {
        Word::from_letters(std::iter::repeat_n(letter, n))
    }

    /// Builds a word from run lengths, alternating letters starting with `first`.
    /// Zero-length runs are allowed and simply merge their neighbours.
    pub fn from_runs(first: Letter, runs: &[usize]) -> Self {
        let mut w = Word::empty();
        let mut letter = first;
        for &r in runs {
            for _ in 0..r {
                w.push(letter);
            }
            letter = match letter {
                Letter::X => Letter::Y,
                Letter::Y => Letter::X,
            };
        }
        w
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, letter: Letter) {
        let (b, off) = (self.len / BLOCK, self.len % BLOCK);
        if off == 0 {
            self.blocks.push(0);
        }
        self.blocks[b] |= letter.bit() << (BLOCK - 1 - off);
        self.len += 1;
    }

    /// The `i`-th letter, zero-based.
    pub fn letter(&self, i: usize) -> Letter {
        assert!(i < self.len, "letter index {i} out of range for length {}", self.len);
        if (self.blocks[i / BLOCK] >> (BLOCK - 1 - i % BLOCK)) & 1 == 1 {
            Letter::Y
        } else {
            Letter::X
        }
    }

    pub fn letters(&self) -> impl DoubleEndedIterator<Item = Letter> + ExactSizeIterator + '_ {
        (0..self.len).map(move |i| self.letter(i))
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.blocks.reserve(other.blocks.len());
        for l in other.letters() {
            w.push(l);
        }
        w
    }

    /// The involution: the word read backwards.
    pub fn reversed(&self) -> Word {
        Word::from_letters(self.letters().rev())
    }

    /// Cyclic left rotation: `w[r..] · w[..r]`.
    pub fn rotated(&self, r: usize) -> Word {
        if self.len == 0 {
            return self.clone();
        }
        let r = r % self.len;
        Word::from_letters((0..self.len).map(|i| self.letter((i + r) % self.len)))
    }

    pub fn split_at(&self, r: usize) -> (Word, Word) {
        assert!(r <= self.len);
        (
            Word::from_letters((0..r).map(|i| self.letter(i))),
            Word::from_letters((r..self.len).map(|i| self.letter(i))),
        )
    }

    /// `(deg_X, deg_Y)`.
    pub fn degrees(&self) -> (usize, usize) {
        let y: usize = self.blocks.iter().map(|b| b.count_ones() as usize).sum();
        (self.len - y, y)
    }

    pub fn is_palindrome(&self) -> bool {
        (0..self.len / 2).all(|i| self.letter(i) == self.letter(self.len - 1 - i))
    }

    /// Maximal runs `(letter, length)` read left to right.
    pub fn runs(&self) -> Vec<(Letter, usize)> {
        let mut out: Vec<(Letter, usize)> = Vec::new();
        for l in self.letters() {
            match out.last_mut() {
                Some((last, n)) if *last == l => *n += 1,
                _ => out.push((l, 1)),
            }
        }
        out
    }

    /// Replaces every letter `a` by `aa`.
    pub fn doubled(&self) -> Word {
        Word::from_letters(self.letters().flat_map(|l| [l, l]))
    }

    /// Inverse of [`Word::doubled`]: `Some(v)` when `self = v.doubled()`.
    pub fn halved(&self) -> Option<Word> {
        if self.len % 2 != 0 {
            return None;
        }
        let mut v = Word::empty();
        for i in (0..self.len).step_by(2) {
            let l = self.letter(i);
            if self.letter(i + 1) != l {
                return None;
            }
            v.push(l);
        }
        Some(v)
    }

    pub(crate) fn to_bytes(&self) -> Vec<u8> {
        self.letters().map(|l| l.bit() as u8).collect()
    }
}

impl Ord for Word {
    /// Term order: shorter words first, then lexicographic with `X < Y`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| self.blocks.cmp(&other.blocks))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    /// Caret form, e.g. `X^2*Y^4*X`; the empty word prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        for (i, (l, n)) in self.runs().into_iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if n == 1 {
                write!(f, "{}", l.as_char())?;
            } else {
                write!(f, "{}^{}", l.as_char(), n)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}
