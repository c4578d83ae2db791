use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{fp_module, FpModule, Matrix, RingSpec};

/// Freely reduced word in the generators. Letter `+k` is generator `k-1`,
/// letter `-k` its inverse (generators are numbered from zero internally).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i32>", into = "Vec<i32>")]
pub struct Word(Vec<i32>);

impl Word {
    pub fn new(letters: Vec<i32>) -> Result<Self> {
        if letters.contains(&0) {
            return Err(Error::Parse("0 is not a generator letter".into()));
        }
        Ok(Self::reduced(letters))
    }

    fn reduced(letters: Vec<i32>) -> Self {
        let mut out: Vec<i32> = Vec::with_capacity(letters.len());
        for l in letters {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// The single-letter word for generator `index` (zero-based).
    pub fn generator(index: usize) -> Self {
        Word(vec![index as i32 + 1])
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| -l).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Self::reduced(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(Word::empty(), |acc, _| acc.concat(&base))
    }

    /// Largest generator index used, plus one.
    pub fn generator_bound(&self) -> usize {
        self.0.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// Replaces every generator by a word (a homomorphism from the free group).
    pub fn substitute(&self, images: &[Word]) -> Word {
        self.0.iter().fold(Word::empty(), |acc, &l| {
            let img = &images[letter_generator(l)];
            acc.concat(&if l > 0 { img.clone() } else { img.inverse() })
        })
    }
}

/// Zero-based generator index of a letter.
pub fn letter_generator(letter: i32) -> usize {
    letter.unsigned_abs() as usize - 1
}

impl TryFrom<Vec<i32>> for Word {
    type Error = Error;
    fn try_from(v: Vec<i32>) -> Result<Self> {
        Word::new(v)
    }
}

impl From<Word> for Vec<i32> {
    fn from(w: Word) -> Self {
        w.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.0.iter().map(|&l| if l > 0 { format!("g{}", l - 1) } else { format!("g{}^-1", -l - 1) }).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Finite presentation `<g_0, ..., g_{m-1} | relators>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PresentationJson", into = "PresentationJson")]
pub struct GroupPresentation {
    generator_count: usize,
    relators: Vec<Word>,
}

#[derive(Serialize, Deserialize)]
struct PresentationJson {
    generators: usize,
    relators: Vec<Word>,
}

impl GroupPresentation {
    /// Empty relators are dropped; letters must name existing generators.
    pub fn new(generator_count: usize, relators: Vec<Word>) -> Result<Self> {
        if let Some(w) = relators.iter().find(|w| w.generator_bound() > generator_count) {
            return Err(Error::Parse(format!("relator {w} uses a generator beyond {generator_count}")));
        }
        let relators = relators.into_iter().filter(|w| !w.is_empty()).collect();
        Ok(GroupPresentation { generator_count, relators })
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Abelianization as the cokernel of the relator exponent-sum matrix.
    pub fn abelianization(&self) -> FpModule {
        let z = RingSpec::Integers;
        let mut m = Matrix::zeros(z, self.generator_count, self.relators.len());
        for (j, r) in self.relators.iter().enumerate() {
            let mut sums = vec![0i64; self.generator_count];
            for &l in r.letters() {
                sums[letter_generator(l)] += l.signum() as i64;
            }
            for (i, s) in sums.into_iter().enumerate() {
                m.set(i, j, z.from_i64(s));
            }
        }
        fp_module(&m)
    }
}

impl TryFrom<PresentationJson> for GroupPresentation {
    type Error = Error;
    fn try_from(j: PresentationJson) -> Result<Self> {
        GroupPresentation::new(j.generators, j.relators)
    }
}

impl From<GroupPresentation> for PresentationJson {
    fn from(p: GroupPresentation) -> Self {
        PresentationJson { generators: p.generator_count, relators: p.relators }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_are_freely_reduced() {
        let w = Word::new(vec![1, 2, -2, -1, 3]).unwrap();
        assert_eq!(w.letters(), &[3]);
        assert!(Word::new(vec![1, 0]).is_err());
        let a = Word::generator(0);
        assert!(a.concat(&a.inverse()).is_empty());
        assert_eq!(a.pow(-2).letters(), &[-1, -1]);
        assert_eq!(serde_json::to_string(&Word::new(vec![1, -2]).unwrap()).unwrap(), "[1,-2]");
    }

    #[test]
    fn presentation_json_and_abelianization() {
        let p: GroupPresentation = serde_json::from_str(r#"{"generators": 2, "relators": [[1,2,-1,-2], []]}"#).unwrap();
        assert_eq!(p.relators().len(), 1);
        assert_eq!(p.abelianization(), FpModule::free(RingSpec::Integers, 2));
        assert!(GroupPresentation::new(1, vec![Word::generator(1)]).is_err());
        let z2 = GroupPresentation::new(1, vec![Word::generator(0).pow(2)]).unwrap();
        assert_eq!(z2.abelianization(), FpModule::cyclic(RingSpec::Integers, 2).unwrap());
    }

    #[test]
    fn substitution() {
        let w = Word::new(vec![1, -2]).unwrap();
        let images = vec![Word::generator(0).pow(2), Word::empty()];
        assert_eq!(w.substitute(&images).letters(), &[1, 1]);
    }
}
