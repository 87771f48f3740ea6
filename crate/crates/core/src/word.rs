//! The group `G_l` of irreducible letter sequences over `{1..l}`.
//!
//! Every generator is an involution, so the group is the free product of
//! `l` copies of `Z/2`. Elements are stored as reduced sequences; the group
//! product is concatenation followed by cancellation at the junction.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("letter {letter} outside alphabet 1..={alphabet}")]
    LetterOutOfRange { letter: usize, alphabet: usize },
    #[error("adjacent equal letters at positions {0} and {}", .0 + 1)]
    Reducible(usize),
    #[error("alphabet mismatch: {0} vs {1}")]
    AlphabetMismatch(usize, usize),
    #[error("alphabet size must be at least 1")]
    EmptyAlphabet,
    #[error("signature entries sum to {0}; only 0 or 1 is realizable")]
    UnrealizableSum(i64),
    #[error("expected a vector of length {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },
    #[error("not a permutation of 1..={0}")]
    InvalidPermutation(usize),
    #[error("vector {0} does not satisfy v2 >= 1, v1 <= -1, v3 <= -1 and balance")]
    NotCanonicalShape(SignatureVector),
    #[error("malformed word literal `{0}`")]
    Malformed(String),
}

/// An irreducible word over the alphabet `{1..alphabet}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<usize>,
    alphabet: usize,
}

fn check_letters(letters: &[usize], alphabet: usize) -> Result<(), WordError> {
    if alphabet == 0 {
        return Err(WordError::EmptyAlphabet);
    }
    match letters.iter().find(|&&a| a == 0 || a > alphabet) {
        Some(&letter) => Err(WordError::LetterOutOfRange { letter, alphabet }),
        None => Ok(()),
    }
}

/// Cancel adjacent equal pairs with a stack. Any removal order gives the
/// same result, so this left-greedy pass is canonical.
fn reduce_letters(raw: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for a in raw {
        if out.last() == Some(&a) {
            out.pop();
        } else {
            out.push(a);
        }
    }
    out
}

impl Word {
    pub fn empty(alphabet: usize) -> Self {
        Word {
            letters: Vec::new(),
            alphabet,
        }
    }

    /// Builds a word from letters that must already be irreducible.
    pub fn new(letters: Vec<usize>, alphabet: usize) -> Result<Self, WordError> {
        check_letters(&letters, alphabet)?;
        if let Some(k) = letters.windows(2).position(|w| w[0] == w[1]) {
            return Err(WordError::Reducible(k + 1));
        }
        Ok(Word { letters, alphabet })
    }

    /// Reduces an arbitrary letter sequence to its irreducible form.
    pub fn reduce(raw: &[usize], alphabet: usize) -> Result<Self, WordError> {
        check_letters(raw, alphabet)?;
        Ok(Word {
            letters: reduce_letters(raw.iter().copied()),
            alphabet,
        })
    }

    pub fn single(letter: usize, alphabet: usize) -> Result<Self, WordError> {
        Word::new(vec![letter], alphabet)
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn last(&self) -> Option<usize> {
        self.letters.last().copied()
    }

    /// Group product: concatenate, then cancel at the junction until the
    /// result is irreducible.
    pub fn mul(&self, other: &Word) -> Result<Word, WordError> {
        if self.alphabet != other.alphabet {
            return Err(WordError::AlphabetMismatch(self.alphabet, other.alphabet));
        }
        let mut k = 0;
        let (n, m) = (self.len(), other.len());
        while k < n.min(m) && self.letters[n - 1 - k] == other.letters[k] {
            k += 1;
        }
        let mut letters = Vec::with_capacity(n + m - 2 * k);
        letters.extend_from_slice(&self.letters[..n - k]);
        letters.extend_from_slice(&other.letters[k..]);
        Ok(Word {
            letters,
            alphabet: self.alphabet,
        })
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().copied().collect(),
            alphabet: self.alphabet,
        }
    }

    /// `self` multiplied with itself `k` times.
    pub fn pow(&self, k: usize) -> Word {
        let mut acc = Word::empty(self.alphabet);
        for _ in 0..k {
            acc = acc.mul(self).expect("same alphabet");
        }
        acc
    }

    /// Alternating letter counts: position `m` (1-based) contributes
    /// `(-1)^(m+1)` to the entry of its letter.
    pub fn signature(&self) -> SignatureVector {
        let mut v = vec![0i64; self.alphabet];
        for (pos, &a) in self.letters.iter().enumerate() {
            v[a - 1] += if pos % 2 == 0 { 1 } else { -1 };
        }
        SignatureVector(v)
    }

    /// The canonical representative reached by parity-preserving position
    /// permutations and reductions.
    ///
    /// For `i = l, l-1, .., 1`: move every `i` to the front of its parity
    /// class (odd or even positions), keeping the relative order of the other
    /// letters in that class, then reduce. Afterwards each letter sits in one
    /// parity class only and both classes are sorted ascending.
    pub fn normal_form(&self) -> Word {
        let mut letters = self.letters.clone();
        for i in (1..=self.alphabet).rev() {
            let (mut odd, mut even) = (Vec::new(), Vec::new());
            for (pos, &a) in letters.iter().enumerate() {
                if pos % 2 == 0 {
                    odd.push(a);
                } else {
                    even.push(a);
                }
            }
            let shift = |class: Vec<usize>| -> Vec<usize> {
                let (front, rest): (Vec<usize>, Vec<usize>) =
                    class.into_iter().partition(|&a| a == i);
                front.into_iter().chain(rest).collect()
            };
            let (odd, even) = (shift(odd), shift(even));
            letters = interleave(&odd, &even);
            // Reductions remove adjacent pairs, which keeps position parity.
            letters = reduce_letters(letters);
        }
        Word {
            letters,
            alphabet: self.alphabet,
        }
    }

    /// Letterwise image under a permutation of the alphabet.
    pub fn permute_letters(&self, sigma: &Permutation) -> Result<Word, WordError> {
        if sigma.len() != self.alphabet {
            return Err(WordError::AlphabetMismatch(self.alphabet, sigma.len()));
        }
        Ok(Word {
            letters: self.letters.iter().map(|&a| sigma.apply(a)).collect(),
            alphabet: self.alphabet,
        })
    }

    /// Parses the literal form `2,1,2,3` (or `e` for the empty word). The
    /// letters are reduced.
    pub fn parse(s: &str, alphabet: usize) -> Result<Word, WordError> {
        Word::reduce(&parse_letters(s)?, alphabet)
    }

    /// All irreducible words of length exactly `n`, in lexicographic order.
    pub fn all_of_length(n: usize, alphabet: usize) -> Vec<Word> {
        let mut out = vec![Word::empty(alphabet)];
        for _ in 0..n {
            let mut next = Vec::new();
            for w in &out {
                for a in 1..=alphabet {
                    if w.last() != Some(a) {
                        let mut letters = w.letters.clone();
                        letters.push(a);
                        next.push(Word { letters, alphabet });
                    }
                }
            }
            out = next;
        }
        out
    }

    /// All irreducible words of length at most `n`, shortest first.
    pub fn all_up_to(n: usize, alphabet: usize) -> Vec<Word> {
        (0..=n)
            .flat_map(|k| Word::all_of_length(k, alphabet))
            .collect()
    }
}

fn interleave(odd: &[usize], even: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(odd.len() + even.len());
    let mut it_even = even.iter();
    for &a in odd {
        out.push(a);
        if let Some(&b) = it_even.next() {
            out.push(b);
        }
    }
    out.extend(it_even);
    out
}

/// Splits a word literal into raw letters without range checks.
pub fn parse_letters(s: &str) -> Result<Vec<usize>, WordError> {
    let s = s.trim();
    if s == "e" || s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| WordError::Malformed(s.to_string()))
        })
        .collect()
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        for (k, a) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Integer vector indexed by letters; carries signatures and cycle vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignatureVector(pub Vec<i64>);

impl SignatureVector {
    pub fn new(entries: Vec<i64>) -> Self {
        SignatureVector(entries)
    }

    pub fn zero(dim: usize) -> Self {
        SignatureVector(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    /// Entry for letter `i` (1-based).
    pub fn get(&self, i: usize) -> i64 {
        self.0[i - 1]
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_balanced(&self) -> bool {
        self.sum() == 0
    }

    /// Gcd of the absolute entries; 0 for the zero vector.
    pub fn gcd(&self) -> u64 {
        self.0.iter().fold(0u64, |g, &x| g.gcd(&x.unsigned_abs()))
    }

    pub fn scale(&self, k: i64) -> Self {
        SignatureVector(self.0.iter().map(|&x| k * x).collect())
    }

    /// Swaps the first and third entries.
    pub fn pi13(&self) -> Result<Self, WordError> {
        match self.0.as_slice() {
            &[a, b, c] => Ok(SignatureVector(vec![c, b, a])),
            _ => Err(WordError::Dimension {
                expected: 3,
                actual: self.dim(),
            }),
        }
    }

    /// Space separated entries, `-1 2 -1`.
    pub fn to_plain(&self) -> String {
        self.0
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses `v1,v2,v3`.
    pub fn parse(s: &str) -> Result<Self, WordError> {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| WordError::Malformed(s.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(SignatureVector)
    }

    /// An irreducible word with this signature: positive entries fill the odd
    /// positions, negative entries the even ones, each class sorted by letter.
    pub fn realize(&self) -> Result<Word, WordError> {
        let alphabet = self.dim();
        if alphabet == 0 {
            return Err(WordError::EmptyAlphabet);
        }
        let s = self.sum();
        if s != 0 && s != 1 {
            return Err(WordError::UnrealizableSum(s));
        }
        let mut odd = Vec::new();
        let mut even = Vec::new();
        for (k, &x) in self.0.iter().enumerate() {
            let class = if x > 0 { &mut odd } else { &mut even };
            class.extend(std::iter::repeat_n(k + 1, x.unsigned_abs() as usize));
        }
        Ok(Word {
            letters: interleave(&odd, &even),
            alphabet,
        })
    }

    /// `(2,1)^|v1| (2,3)^|v3|` for a balanced `v` with `v2 >= 1` and
    /// `v1, v3 <= -1`.
    pub fn canonical_word(&self) -> Result<Word, WordError> {
        let &[v1, v2, v3] = self.0.as_slice() else {
            return Err(WordError::Dimension {
                expected: 3,
                actual: self.dim(),
            });
        };
        if !(self.is_balanced() && v2 >= 1 && v1 <= -1 && v3 <= -1) {
            return Err(WordError::NotCanonicalShape(self.clone()));
        }
        let mut letters = Vec::with_capacity(2 * v2 as usize);
        for _ in 0..-v1 {
            letters.extend([2, 1]);
        }
        for _ in 0..-v3 {
            letters.extend([2, 3]);
        }
        Ok(Word {
            letters,
            alphabet: 3,
        })
    }
}

impl fmt::Display for SignatureVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Add for &SignatureVector {
    type Output = SignatureVector;
    fn add(self, rhs: &SignatureVector) -> SignatureVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        SignatureVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &SignatureVector {
    type Output = SignatureVector;
    fn sub(self, rhs: &SignatureVector) -> SignatureVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        SignatureVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &SignatureVector {
    type Output = SignatureVector;
    fn neg(self) -> SignatureVector {
        self.scale(-1)
    }
}

/// A bijection of `{1..n}`, stored as its images.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, WordError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &a in &images {
            if a == 0 || a > n || std::mem::replace(&mut seen[a - 1], true) {
                return Err(WordError::InvalidPermutation(n));
            }
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    /// `i -> n + 1 - i`.
    pub fn reversal(n: usize) -> Self {
        Permutation((1..=n).rev().collect())
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self, WordError> {
        if i == 0 || j == 0 || i > n || j > n {
            return Err(WordError::InvalidPermutation(n));
        }
        let mut images: Vec<usize> = (1..=n).collect();
        images.swap(i - 1, j - 1);
        Ok(Permutation(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &a)| a == k + 1)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (k, &a) in self.0.iter().enumerate() {
            inv[a - 1] = k + 1;
        }
        Permutation(inv)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}
