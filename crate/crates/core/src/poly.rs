//! Polynomials in the Darboux coordinates `x1..xn, y1..yn, z`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Field;

/// Exponent vector ordered as `x1..xn, y1..yn, z`.
pub type Exponents = Vec<u32>;

/// Monomial `x^alpha y^beta z^gamma`; x and y count 1, z counts 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightedMonomial {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    pub gamma: u32,
}

impl WeightedMonomial {
    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn weighted_degree(&self) -> u32 {
        self.alpha.iter().sum::<u32>() + self.beta.iter().sum::<u32>() + 2 * self.gamma
    }

    pub fn exponents(&self) -> Exponents {
        let mut e = self.alpha.clone();
        e.extend_from_slice(&self.beta);
        e.push(self.gamma);
        e
    }

    pub fn from_exponents(e: &[u32]) -> Self {
        let n = (e.len() - 1) / 2;
        WeightedMonomial {
            alpha: e[..n].to_vec(),
            beta: e[n..2 * n].to_vec(),
            gamma: e[2 * n],
        }
    }

    /// All monomials of weighted degree exactly `k`, ordered by the power of
    /// z and then by the sorted index tuple of the x/y letters.
    pub fn enumerate(n: usize, k: usize) -> Vec<WeightedMonomial> {
        let mut out = Vec::new();
        for gamma in 0..=k / 2 {
            for letters in multisets(2 * n, k - 2 * gamma) {
                let mut e = vec![0u32; 2 * n + 1];
                for a in letters {
                    e[a] += 1;
                }
                e[2 * n] = gamma as u32;
                out.push(WeightedMonomial::from_exponents(&e));
            }
        }
        out
    }

    /// All monomials of weighted degree at most `max_degree`.
    pub fn enumerate_up_to(n: usize, max_degree: usize) -> Vec<WeightedMonomial> {
        (0..=max_degree).flat_map(|k| Self::enumerate(n, k)).collect()
    }
}

/// Weakly increasing index tuples of length `len` over `0..letters`, in
/// lexicographic order.
pub fn multisets(letters: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(start: usize, letters: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for a in start..letters {
            cur.push(a);
            rec(a, letters, len, cur, out);
            cur.pop();
        }
    }
    if letters > 0 || len == 0 {
        rec(0, letters, len, &mut cur, &mut out);
    }
    out
}

/// Sparse polynomial with exact coefficients in `2n + 1` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<F> {
    n: usize,
    terms: BTreeMap<Exponents, F>,
}

impl<F: Field> Polynomial<F> {
    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: F) -> Self {
        Self::monomial(n, vec![0; 2 * n + 1], c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, F::one())
    }

    pub fn monomial(n: usize, exponents: Exponents, c: F) -> Self {
        assert_eq!(exponents.len(), 2 * n + 1, "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponents, c);
        }
        Polynomial { n, terms }
    }

    pub fn from_weighted(m: &WeightedMonomial, c: F) -> Self {
        Self::monomial(m.n(), m.exponents(), c)
    }

    /// The coordinate function with index `var` (`2n` is z).
    pub fn variable(n: usize, var: usize) -> Self {
        let mut e = vec![0; 2 * n + 1];
        e[var] = 1;
        Self::monomial(n, e, F::one())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        2 * self.n + 1
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &F)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &[u32]) -> F {
        self.terms.get(e).cloned().unwrap_or_else(F::zero)
    }

    /// Value at the origin.
    pub fn constant_term(&self) -> F {
        self.coefficient(&vec![0; self.nvars()])
    }

    pub fn weighted_degree(&self) -> Option<u32> {
        let n = self.n;
        self.terms
            .keys()
            .map(|e| e[..2 * n].iter().sum::<u32>() + 2 * e[2 * n])
            .max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    fn add_term(&mut self, e: Exponents, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }

    pub fn scale(&self, s: &F) -> Self {
        if s.is_zero() {
            return Self::zero(self.n);
        }
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.clone() * s.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.n), |acc, _| acc.mul(self))
    }

    /// Partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut d = e.clone();
                d[var] -= 1;
                out.add_term(d, c.clone() * F::from_i64(e[var] as i64));
            }
        }
        out
    }

    /// Multiplies by the coordinate `var`.
    pub fn times_variable(&self, var: usize) -> Self {
        Polynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut d = e.clone();
                    d[var] += 1;
                    (d, c.clone())
                })
                .collect(),
        }
    }

    pub fn variable_name(n: usize, var: usize) -> String {
        if var < n {
            format!("x{}", var + 1)
        } else if var < 2 * n {
            format!("y{}", var - n + 1)
        } else {
            "z".to_string()
        }
    }

    /// Parses expressions such as `2*p*z + y1^2 - 3/2*x1*y1`.
    ///
    /// Grammar: rational literals, the variables `x1..xn`, `y1..yn`, `z`
    /// (and `x`, `y` when `n = 1`), `+`, `-` (binary and unary), `*`, `^`
    /// with a non-negative integer exponent, and parentheses.
    pub fn parse(n: usize, src: &str) -> Result<Self> {
        let mut p = Parser {
            src: src.as_bytes(),
            pos: 0,
            n,
        };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(out)
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // Highest weighted degree first, then reverse exponent order.
        let mut terms: Vec<(&Exponents, &F)> = self.terms.iter().collect();
        let n = self.n;
        terms.sort_by(|a, b| {
            let da = a.0[..2 * n].iter().sum::<u32>() + 2 * a.0[2 * n];
            let db = b.0[..2 * n].iter().sum::<u32>() + 2 * b.0[2 * n];
            db.cmp(&da).then(b.0.cmp(a.0))
        });
        for (e, c) in terms {
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| {
                    let name = Self::variable_name(n, i);
                    if p == 1 {
                        name
                    } else {
                        format!("{name}^{p}")
                    }
                })
                .collect();
            let neg = c.to_string().starts_with('-');
            let abs = if neg { -c.clone() } else { c.clone() };
            let coeff = abs.to_string();
            let sign = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let body = if vars.is_empty() {
                coeff
            } else if abs == F::one() {
                vars.join("*")
            } else {
                format!("{coeff}*{}", vars.join("*"))
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr<F: Field>(&mut self) -> Result<Polynomial<F>> {
        let mut acc = match self.peek() {
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term<F: Field>(&mut self) -> Result<Polynomial<F>> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    /// A power with any number of leading minus signs.
    fn factor<F: Field>(&mut self) -> Result<Polynomial<F>> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.factor()?.scale(&-F::one()));
        }
        self.power()
    }

    fn power<F: Field>(&mut self) -> Result<Polynomial<F>> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let k = self.integer()?;
            let k = u32::try_from(k).map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.error("integer out of range"))
    }

    fn literal<F: Field>(&mut self) -> Result<F> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = &self.src[start..self.pos];
        let ten = F::from_i64(10);
        let mut v = F::zero();
        for d in digits {
            v = v * ten.clone() + F::from_i64((d - b'0') as i64);
        }
        Ok(v)
    }

    fn atom<F: Field>(&mut self) -> Result<Polynomial<F>> {
        let n = self.n;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let mut v: F = self.literal()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                        return Err(self.error("expected denominator"));
                    }
                    let d: F = self.literal()?;
                    if d.is_zero() {
                        return Err(self.error("zero denominator"));
                    }
                    v = v / d;
                }
                Ok(Polynomial::constant(n, v))
            }
            Some(c @ (b'x' | b'y' | b'z')) => {
                let start = self.pos;
                self.pos += 1;
                let digits_start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let idx = if digits_start == self.pos {
                    None
                } else {
                    Some(
                        std::str::from_utf8(&self.src[digits_start..self.pos])
                            .unwrap()
                            .parse::<usize>()
                            .map_err(|_| self.error("bad variable index"))?,
                    )
                };
                let var = match (c, idx) {
                    (b'z', None) => 2 * n,
                    (b'x', Some(i)) if (1..=n).contains(&i) => i - 1,
                    (b'y', Some(i)) if (1..=n).contains(&i) => n + i - 1,
                    (b'x', None) if n == 1 => 0,
                    (b'y', None) if n == 1 => 1,
                    _ => {
                        self.pos = start;
                        return Err(self.error("unknown variable"));
                    }
                };
                Ok(Polynomial::variable(n, var))
            }
            _ => Err(self.error("expected number, variable or `(`")),
        }
    }
}
