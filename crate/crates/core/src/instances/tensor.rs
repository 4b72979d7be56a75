//! Truncated tensor algebra with sparse coefficients, and the signature
//! assignments built on it.
//!
//! Two alphabets are supported. [`Alphabet::IteratedSums`] has letters
//! `1, 2, 3, ...` where letter `k` stands for the symbol `[1^k]` and carries
//! degree `k`. [`Alphabet::Letters(d)`] has letters `1..=d`, each of degree 1.
//! Products drop every word whose degree exceeds the truncation level.

use std::collections::BTreeMap;
use std::fmt;

use super::monoids::{delooping_cells, Monoid};
use crate::category::IntervalAssignment;
use crate::error::{Error, Result};
use crate::numeric::Tolerance;

/// Largest truncation level for which `j!` is exact in `f64`.
pub const MAX_EXP_LEVEL: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Alphabet {
    IteratedSums,
    Letters(usize),
}

impl Alphabet {
    fn letter_degree(&self, letter: u32) -> usize {
        match self {
            Alphabet::IteratedSums => letter as usize,
            Alphabet::Letters(_) => 1,
        }
    }

    pub fn degree(&self, word: &Word) -> usize {
        word.0.iter().map(|&l| self.letter_degree(l)).sum()
    }

    fn admits(&self, word: &Word) -> bool {
        word.0.iter().all(|&l| match self {
            Alphabet::IteratedSums => l >= 1,
            Alphabet::Letters(d) => l >= 1 && (l as usize) <= *d,
        })
    }
}

/// A word over positive-integer letters; the empty word is the unit.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<u32>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.0.len() + other.0.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }
}

impl<const N: usize> From<[u32; N]> for Word {
    fn from(letters: [u32; N]) -> Self {
        Word(letters.to_vec())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "]")
    }
}

/// Element of the tensor algebra truncated at `level`.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorElement {
    alphabet: Alphabet,
    level: usize,
    terms: BTreeMap<Word, f64>,
}

impl TensorElement {
    pub fn unit(alphabet: Alphabet, level: usize) -> Self {
        Self::from_terms(alphabet, level, [(Word::empty(), 1.0)]).expect("empty word is admissible")
    }

    /// Terms of degree above `level` are dropped; unknown letters are rejected.
    pub fn from_terms(
        alphabet: Alphabet,
        level: usize,
        terms: impl IntoIterator<Item = (Word, f64)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (w, c) in terms {
            if !alphabet.admits(&w) {
                return Err(Error::InvalidParameter(format!(
                    "word {w} is not over {alphabet:?}"
                )));
            }
            if alphabet.degree(&w) <= level {
                *map.entry(w).or_insert(0.0) += c;
            }
        }
        Ok(Self {
            alphabet,
            level,
            terms: map,
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn coefficient(&self, word: &Word) -> f64 {
        self.terms.get(word).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, f64)> {
        self.terms.iter().map(|(w, c)| (w, *c))
    }

    /// Terms whose word has exactly `degree`.
    pub fn graded(&self, degree: usize) -> impl Iterator<Item = (&Word, f64)> {
        self.terms()
            .filter(move |(w, _)| self.alphabet.degree(w) == degree)
    }

    pub fn approx_eq(&self, other: &Self, tol: Tolerance) -> bool {
        self.alphabet == other.alphabet
            && self.level == other.level
            && self
                .terms
                .keys()
                .chain(other.terms.keys())
                .all(|w| tol.close(self.coefficient(w), other.coefficient(w)))
    }
}

/// Concatenation product, truncated at the common level.
pub fn tensor_mul(u: &TensorElement, v: &TensorElement) -> Result<TensorElement> {
    if u.alphabet != v.alphabet || u.level != v.level {
        return Err(Error::AlphabetMismatch);
    }
    let alphabet = u.alphabet;
    let level = u.level;
    let mut terms = BTreeMap::new();
    for (w1, &c1) in &u.terms {
        let d1 = alphabet.degree(w1);
        for (w2, &c2) in &v.terms {
            if d1 + alphabet.degree(w2) <= level {
                *terms.entry(w1.concat(w2)).or_insert(0.0) += c1 * c2;
            }
        }
    }
    Ok(TensorElement {
        alphabet,
        level,
        terms,
    })
}

/// The truncated tensor algebra as a monoid under [`tensor_mul`].
#[derive(Debug, Clone, Copy)]
pub struct TensorAlgebra {
    pub alphabet: Alphabet,
    pub level: usize,
    pub tol: Tolerance,
}

impl TensorAlgebra {
    pub fn new(alphabet: Alphabet, level: usize) -> Self {
        Self {
            alphabet,
            level,
            tol: Tolerance::new(1e-10, 1e-12),
        }
    }
}

impl Monoid for TensorAlgebra {
    type Elem = TensorElement;

    fn unit(&self) -> TensorElement {
        TensorElement::unit(self.alphabet, self.level)
    }
    fn combine(&self, a: &TensorElement, b: &TensorElement) -> TensorElement {
        tensor_mul(a, b).expect("elements of one tensor algebra share alphabet and level")
    }
    fn elems_eq(&self, a: &TensorElement, b: &TensorElement) -> bool {
        a.approx_eq(b, self.tol)
    }
}

/// Cell `k` is `sum_{j <= level} series[k]^j [1^j]`; lifts give the
/// iterated-sums signature. Use with `MonoidDelooping(TensorAlgebra::new(Alphabet::IteratedSums, level))`.
pub fn make_iss_assignment(
    series: &[f64],
    level: usize,
) -> Result<IntervalAssignment<(), TensorElement>> {
    if level == 0 {
        return Err(Error::InvalidParameter(
            "truncation level must be at least 1".into(),
        ));
    }
    let cells = series
        .iter()
        .map(|&x| {
            let terms = (0..=level).map(|j| {
                let word = if j == 0 {
                    Word::empty()
                } else {
                    Word(vec![j as u32])
                };
                (word, x.powi(j as i32))
            });
            TensorElement::from_terms(Alphabet::IteratedSums, level, terms)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(delooping_cells(cells))
}

/// Truncated exponential `sum_{j <= level} v^{⊗j} / j!` of a vector over `Letters(v.len())`.
pub fn truncated_exp(v: &[f64], level: usize) -> Result<TensorElement> {
    if level > MAX_EXP_LEVEL {
        return Err(Error::InvalidParameter(format!(
            "truncation level {level} exceeds {MAX_EXP_LEVEL}"
        )));
    }
    let d = v.len();
    let mut terms = vec![(Word::empty(), 1.0)];
    let mut layer = vec![(Word::empty(), 1.0)];
    for j in 1..=level {
        layer = layer
            .iter()
            .flat_map(|(w, c)| {
                (0..d).map(move |letter| {
                    let mut letters = w.0.clone();
                    letters.push(letter as u32 + 1);
                    (Word(letters), c * v[letter])
                })
            })
            .collect();
        let factorial: f64 = (1..=j).map(|k| k as f64).product();
        terms.extend(layer.iter().map(|(w, c)| (w.clone(), c / factorial)));
    }
    TensorElement::from_terms(Alphabet::Letters(d), level, terms)
}

/// Cell `k` is the truncated exponential of `series[k + 1] - series[k]`;
/// lifts give the iterated-integrals signature of the piecewise-linear path.
pub fn make_iis_assignment(
    series: &[Vec<f64>],
    level: usize,
) -> Result<IntervalAssignment<(), TensorElement>> {
    if series.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "signature assignment needs at least 2 points, got {}",
            series.len()
        )));
    }
    if level == 0 || level > MAX_EXP_LEVEL {
        return Err(Error::InvalidParameter(format!(
            "truncation level must be in 1..={MAX_EXP_LEVEL}, got {level}"
        )));
    }
    let d = series[0].len();
    if d == 0 || series.iter().any(|x| x.len() != d) {
        return Err(Error::ShapeMismatch(
            "all points need the same positive dimension".into(),
        ));
    }
    let cells = series
        .windows(2)
        .map(|w| {
            let dx: Vec<f64> = w[1].iter().zip(&w[0]).map(|(b, a)| b - a).collect();
            truncated_exp(&dx, level)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(delooping_cells(cells))
}
