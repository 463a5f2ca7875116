//! Problem documents: TOML files describing an operator in Darboux
//! coordinates, with polynomial coefficients written as strings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{word_weight, DarbouxOperator, Generator};
use crate::poly::Polynomial;
use crate::scalar::Field;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermSpec {
    pub word: Vec<String>,
    /// `rank_f` rows of `rank_e` polynomial strings.
    pub coeff: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KostantSpec {
    pub weight: Vec<u32>,
    pub m: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lmax: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nmax: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemDocument {
    pub format_version: u32,
    pub n: usize,
    pub order: usize,
    pub rank_e: usize,
    pub rank_f: usize,
    #[serde(default)]
    pub options: Options,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kostant: Option<KostantSpec>,
    #[serde(default)]
    pub terms: Vec<TermSpec>,
}

impl ProblemDocument {
    pub fn parse(src: &str) -> Result<Self> {
        let doc: ProblemDocument = toml::from_str(src)?;
        if doc.format_version != FORMAT_VERSION {
            return Err(Error::Document(format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                doc.format_version
            )));
        }
        Ok(doc)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    /// Builds the operator, checking generator names, coefficient shapes and
    /// that no term exceeds the declared order.
    pub fn to_operator<F: Field>(&self) -> Result<DarbouxOperator<F>> {
        if self.n == 0 {
            return Err(Error::Document("n must be positive".into()));
        }
        let mut op = DarbouxOperator::new(self.n, self.rank_e, self.rank_f).with_declared_order(self.order);
        for (t, term) in self.terms.iter().enumerate() {
            let word = term
                .word
                .iter()
                .map(|g| Generator::parse(self.n, g))
                .collect::<Result<Vec<_>>>()?;
            let coeff = term
                .coeff
                .iter()
                .map(|row| row.iter().map(|s| Polynomial::parse(self.n, s)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let nonzero = coeff.iter().flatten().any(|p| !p.is_zero());
            if nonzero && word_weight(&word) > self.order {
                return Err(Error::Document(format!(
                    "term {t} has weight {} above the declared order {}",
                    word_weight(&word),
                    self.order
                )));
            }
            op.add_term(word, coeff)?;
        }
        Ok(op)
    }

    pub fn from_operator<F: Field>(op: &DarbouxOperator<F>) -> Self {
        let terms = op
            .terms()
            .iter()
            .map(|t| TermSpec {
                word: t.word.iter().map(|g| g.name()).collect(),
                coeff: t.coeff.iter().map(|row| row.iter().map(ToString::to_string).collect()).collect(),
            })
            .collect();
        ProblemDocument {
            format_version: FORMAT_VERSION,
            n: op.n(),
            order: op.order(),
            rank_e: op.rank_e(),
            rank_f: op.rank_f(),
            options: Options::default(),
            kostant: None,
            terms,
        }
    }
}
