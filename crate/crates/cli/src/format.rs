//! Text and JSON formats for forms and ideals, plus graph and diagram export.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use sosdiag_core::hermitian::{Sign, SupportPattern};
use sosdiag_core::newton::NewtonGraph;
use sosdiag_core::{MonomialIdeal, MultiIndex, Polynomial, SignedForm};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("polynomial is zero after combining terms")]
    Zero,
    #[error("line {line}: unexpected character {ch:?}")]
    UnexpectedChar { line: usize, ch: char },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: &'static str },
    #[error("variable x{index} needs n >= {index}, got n = {n}")]
    VariableOutOfRange { index: usize, n: usize },
    #[error("term {found} has degree {}, expected {expected}", found.degree())]
    NotHomogeneous { expected: u32, found: MultiIndex },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Sign(bool),
    Coefficient(BigRational),
    Variable(usize, u32),
}

fn digits(chars: &mut std::iter::Peekable<std::str::Chars<'_>>) -> String {
    let mut s = String::new();
    while let Some(&c) = chars.peek() {
        if !c.is_ascii_digit() {
            break;
        }
        s.push(c);
        chars.next();
    }
    s
}

/// Splits `text` into tokens tagged with their line; `#` starts a comment.
fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let mut chars = body.chars().peekable();
        while let Some(&c) = chars.peek() {
            match c {
                c if c.is_whitespace() || c == '*' => {
                    chars.next();
                }
                '+' | '-' => {
                    chars.next();
                    out.push((line, Token::Sign(c == '-')));
                }
                '0'..='9' => {
                    let num: BigInt = digits(&mut chars).parse().expect("digits");
                    let den = if chars.peek() == Some(&'/') {
                        chars.next();
                        let d = digits(&mut chars);
                        if d.is_empty() {
                            return Err(ParseError::Syntax { line, message: "missing denominator" });
                        }
                        d.parse().expect("digits")
                    } else {
                        BigInt::one()
                    };
                    if den.is_zero() {
                        return Err(ParseError::ZeroDenominator);
                    }
                    out.push((line, Token::Coefficient(BigRational::new(num, den))));
                }
                'x' => {
                    chars.next();
                    let index: usize = match digits(&mut chars).parse() {
                        Ok(k) if k >= 1 => k,
                        _ => return Err(ParseError::Syntax { line, message: "variables are x1, x2, ..." }),
                    };
                    let exp = if chars.peek() == Some(&'^') {
                        chars.next();
                        digits(&mut chars)
                            .parse()
                            .map_err(|_| ParseError::Syntax { line, message: "missing exponent" })?
                    } else {
                        1
                    };
                    out.push((line, Token::Variable(index, exp)));
                }
                ch => return Err(ParseError::UnexpectedChar { line, ch }),
            }
        }
    }
    Ok(out)
}

#[derive(Default)]
struct RawTerm {
    negative: Option<bool>,
    coefficient: Option<BigRational>,
    factors: Vec<(usize, u32)>,
}

impl RawTerm {
    fn has_body(&self) -> bool {
        self.coefficient.is_some() || !self.factors.is_empty()
    }
}

fn raw_terms(text: &str) -> Result<Vec<RawTerm>, ParseError> {
    let mut terms = Vec::new();
    let mut cur = RawTerm::default();
    let mut last_line = 1;
    for (line, tok) in tokenize(text)? {
        last_line = line;
        match tok {
            Token::Sign(neg) => {
                if cur.has_body() {
                    terms.push(std::mem::take(&mut cur));
                } else if cur.negative.is_some() {
                    return Err(ParseError::Syntax { line, message: "two signs in a row" });
                }
                cur.negative = Some(neg);
            }
            Token::Coefficient(c) => {
                if cur.has_body() {
                    return Err(ParseError::Syntax { line, message: "coefficient must start a term" });
                }
                cur.coefficient = Some(c);
            }
            Token::Variable(k, e) => cur.factors.push((k, e)),
        }
    }
    if cur.has_body() {
        terms.push(cur);
    } else if cur.negative.is_some() {
        return Err(ParseError::Syntax { line: last_line, message: "sign without a term" });
    }
    Ok(terms)
}

fn variable_count(terms: &[RawTerm], n: Option<usize>) -> Result<usize, ParseError> {
    let max = terms.iter().flat_map(|t| t.factors.iter().map(|&(k, _)| k)).max().unwrap_or(1);
    match n {
        Some(n) if n < max => Err(ParseError::VariableOutOfRange { index: max, n }),
        Some(n) => Ok(n),
        None => Ok(max),
    }
}

fn exponents(n: usize, factors: &[(usize, u32)]) -> MultiIndex {
    let mut exps = vec![0; n];
    for &(k, e) in factors {
        exps[k - 1] += e;
    }
    MultiIndex::new(exps)
}

/// Parses a polynomial written as signed terms such as `+3/2 x1^2 x2`, one per
/// line or inline (`x1^2 - x1 x2 + x2^2`). Without `n` the largest variable
/// index is used.
pub fn parse_polynomial(text: &str, n: Option<usize>) -> Result<Polynomial, ParseError> {
    let terms = raw_terms(text)?;
    if terms.is_empty() {
        return Err(ParseError::Empty);
    }
    let n = variable_count(&terms, n)?;
    let mut p = Polynomial::zero(n);
    for t in terms {
        let mut c = t.coefficient.unwrap_or_else(BigRational::one);
        if t.negative == Some(true) {
            c = -c;
        }
        p.add_term(exponents(n, &t.factors), c);
    }
    if p.is_zero() {
        return Err(ParseError::Zero);
    }
    Ok(p)
}

/// Parses a homogeneous form in the same text format.
pub fn parse_form(text: &str, n: Option<usize>) -> Result<SignedForm, ParseError> {
    let p = parse_polynomial(text, n)?;
    let (first, _) = p.terms().next().expect("nonzero");
    let degree = first.degree();
    if let Some((a, _)) = p.terms().find(|(a, _)| a.degree() != degree) {
        return Err(ParseError::NotHomogeneous { expected: degree, found: a.clone() });
    }
    SignedForm::from_polynomial(p, degree).map_err(|e| ParseError::Invalid(e.to_string()))
}

/// Reads a form from text or, when the input starts with `{`, from JSON.
pub fn read_form(text: &str, n: Option<usize>) -> Result<SignedForm, ParseError> {
    if text.trim_start().starts_with('{') {
        let json: FormJson = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
        let q = json.to_form()?;
        match n {
            Some(n) if n != q.n() => Err(ParseError::Invalid(format!("form has n = {}, expected {n}", q.n()))),
            _ => Ok(q),
        }
    } else {
        parse_form(text, n)
    }
}

/// One term per line, `+3/2 x1^2 x2`.
pub fn write_form(q: &SignedForm) -> String {
    q.polynomial().to_lines()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: Vec<u32>,
    pub num: String,
    pub den: String,
}

impl TermJson {
    pub fn new(a: &MultiIndex, c: &BigRational) -> Self {
        Self { exponents: a.exponents().to_vec(), num: c.numer().to_string(), den: c.denom().to_string() }
    }

    pub fn coefficient(&self) -> Result<BigRational, ParseError> {
        let bad = |_| ParseError::Invalid(format!("bad coefficient {}/{}", self.num, self.den));
        let num: BigInt = self.num.parse().map_err(bad)?;
        let den: BigInt = self.den.parse().map_err(bad)?;
        if den.is_zero() {
            return Err(ParseError::ZeroDenominator);
        }
        Ok(BigRational::new(num, den))
    }
}

/// JSON form: exponent arrays with numerator and denominator strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub n: usize,
    pub degree: u32,
    pub terms: Vec<TermJson>,
}

impl FormJson {
    pub fn from_form(q: &SignedForm) -> Self {
        Self { n: q.n(), degree: q.degree(), terms: q.terms().map(|(a, c)| TermJson::new(a, c)).collect() }
    }

    pub fn to_form(&self) -> Result<SignedForm, ParseError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if t.exponents.len() != self.n {
                return Err(ParseError::Invalid(format!("exponent array {:?} for n = {}", t.exponents, self.n)));
            }
            terms.push((MultiIndex::new(t.exponents.clone()), t.coefficient()?));
        }
        let q = SignedForm::new(self.n, self.degree, terms).map_err(|e| ParseError::Invalid(e.to_string()))?;
        if q.is_zero() {
            return Err(ParseError::Zero);
        }
        Ok(q)
    }
}

/// An inhomogeneous polynomial in JSON, same term layout as [`FormJson`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub n: usize,
    pub terms: Vec<TermJson>,
}

impl PolynomialJson {
    pub fn from_polynomial(p: &Polynomial) -> Self {
        Self { n: p.n(), terms: p.terms().map(|(a, c)| TermJson::new(a, c)).collect() }
    }
}

/// Parses one generator per line, `x1^a x2^b x3^c` (`1` for the unit monomial).
pub fn parse_ideal(text: &str, n: Option<usize>) -> Result<MonomialIdeal, ParseError> {
    let mut gens = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut factors = Vec::new();
        for (_, tok) in tokenize(body)? {
            match tok {
                Token::Variable(k, e) => factors.push((k, e)),
                Token::Coefficient(c) if c.is_one() && factors.is_empty() => {}
                _ => return Err(ParseError::Syntax { line, message: "generators are bare monomials" }),
            }
        }
        gens.push((line, factors));
    }
    if gens.is_empty() {
        return Err(ParseError::Empty);
    }
    let max = gens.iter().flat_map(|(_, f)| f.iter().map(|&(k, _)| k)).max().unwrap_or(1);
    let n = match n {
        Some(n) if n < max => return Err(ParseError::VariableOutOfRange { index: max, n }),
        Some(n) => n,
        None => max,
    };
    let monomials: Vec<MultiIndex> = gens.iter().map(|(_, f)| exponents(n, f)).collect();
    let degree = monomials[0].degree();
    if let Some(a) = monomials.iter().find(|a| a.degree() != degree) {
        return Err(ParseError::NotHomogeneous { expected: degree, found: a.clone() });
    }
    MonomialIdeal::new(n, degree, monomials).map_err(|e| ParseError::Invalid(e.to_string()))
}

pub fn write_ideal(ideal: &MonomialIdeal) -> String {
    ideal.generators().iter().map(|a| format!("{a}\n")).collect()
}

/// Tab-separated edge list with canonical monomial strings as vertex names.
/// Isolated vertices appear alone on a line so that none are lost.
pub fn edge_list(graph: &NewtonGraph) -> String {
    let mut out = String::new();
    let mut touched = vec![false; graph.vertices().len()];
    for &(i, j) in graph.edges() {
        touched[i] = true;
        touched[j] = true;
        writeln!(out, "{}\t{}", graph.vertices()[i], graph.vertices()[j]).unwrap();
    }
    for (v, _) in graph.vertices().iter().zip(&touched).filter(|(_, &t)| !t) {
        writeln!(out, "{v}").unwrap();
    }
    out
}

/// Triangular Newton diagram for `n = 3`: top row holds the monomials free of
/// `x3`, from `x1^{d-1}` on the left to `x2^{d-1}` on the right, and the
/// bottom row is `x3^{d-1}`. Markers are `P`, `N`, or `.` for absent.
pub fn diagram(pattern: &SupportPattern) -> Option<Vec<String>> {
    if pattern.n() != 3 {
        return None;
    }
    let dm1 = pattern.dm1();
    let rows = (0..=dm1)
        .rev()
        .map(|y| {
            let cells: Vec<&str> = (0..=y)
                .rev()
                .map(|a1| {
                    let a = MultiIndex::new(vec![a1, y - a1, dm1 - y]);
                    match pattern.sign(&a) {
                        Some(Sign::Positive) => "P",
                        Some(Sign::Negative) => "N",
                        None => ".",
                    }
                })
                .collect();
            format!("{}{}", " ".repeat((dm1 - y) as usize), cells.join(" "))
        })
        .collect();
    Some(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use sosdiag_core::poly::{integer, rational};

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::from_slice(e)
    }

    #[test]
    fn inline_and_line_formats_agree() {
        let inline = parse_form("x1^2 - x1 x2 + x2^2", None).unwrap();
        let lines = parse_form("+1 x1^2\n-1 x1 x2\n+1 x2^2\n", None).unwrap();
        assert_eq!(inline, lines);
        assert_eq!(inline.n(), 2);
        assert_eq!(inline.degree(), 2);
        assert_eq!(inline.coefficient(&mi(&[1, 1])), integer(-1));
    }

    #[test]
    fn rationals_and_repeated_factors() {
        let q = parse_form("+3/2 x1^2 x2 - 6/4 x1 x1 x2 + 1/3 x3*x2*x1", Some(3)).unwrap();
        assert_eq!(q.terms().count(), 1);
        assert_eq!(q.coefficient(&mi(&[1, 1, 1])), rational(1, 3));
    }

    #[test]
    fn text_round_trip() {
        let q = parse_form("-7/3 x1^3 + x1 x2 x3 + 2 x3^3 - x2^2 x3", None).unwrap();
        let text = write_form(&q);
        assert_eq!(text, "-7/3 x1^3\n+1 x1 x2 x3\n-1 x2^2 x3\n+2 x3^3\n");
        assert_eq!(parse_form(&text, None).unwrap(), q);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let q = parse_form("-7/3 x1^3 + 12345678901234567890/7 x1 x2 x3 + 2 x3^3", None).unwrap();
        let json = serde_json::to_string(&FormJson::from_form(&q)).unwrap();
        let back = read_form(&json, None).unwrap();
        assert_eq!(back, q);
        assert_eq!(serde_json::to_string(&FormJson::from_form(&back)).unwrap(), json);
        assert!(json.contains(r#""num":"12345678901234567890","den":"7""#));
    }

    #[test]
    fn constants_parse() {
        let p = parse_polynomial("1 - x1 + 1/2 x2^2", None).unwrap();
        assert_eq!(p.coefficient(&mi(&[0, 0])), integer(1));
        assert_eq!(p.degree(), Some(2));
    }

    #[test]
    fn malformed_input_is_rejected() {
        assert_eq!(parse_form("", None), Err(ParseError::Empty));
        assert_eq!(parse_form("  # nothing\n", None), Err(ParseError::Empty));
        assert_eq!(parse_form("x1 - x1", None), Err(ParseError::Zero));
        assert!(matches!(parse_form("x1 + x2^2", None), Err(ParseError::NotHomogeneous { .. })));
        assert!(matches!(parse_form("x1 + + x2", None), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_form("x1 x2 3", None), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_form("x1 -", None), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_form("x0", None), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_form("y1", None), Err(ParseError::UnexpectedChar { ch: 'y', .. })));
        assert_eq!(parse_form("1/0 x1", None), Err(ParseError::ZeroDenominator));
        assert_eq!(parse_form("x3", Some(2)), Err(ParseError::VariableOutOfRange { index: 3, n: 2 }));
        assert!(matches!(read_form("{\"n\": 2}", None), Err(ParseError::Json(_))));
    }

    #[test]
    fn ideal_round_trip() {
        let text = "x1^2 x2\nx1 x3^2   # comment\n\nx2^2 x3\n";
        let ideal = parse_ideal(text, None).unwrap();
        assert_eq!(ideal.n(), 3);
        assert_eq!(ideal.gen_degree(), 3);
        assert_eq!(ideal.hilbert(4), 9);
        assert_eq!(parse_ideal(&write_ideal(&ideal), None).unwrap(), ideal);
        assert!(parse_ideal("2 x1", None).is_err());
        assert!(matches!(parse_ideal("x1\nx2^2", None), Err(ParseError::NotHomogeneous { .. })));
    }

    #[test]
    fn edge_list_names_monomials() {
        let q = parse_form("x1^2 - x1 x2 + x3^2", None).unwrap();
        let g = NewtonGraph::of_form(&q);
        let list = edge_list(&g);
        assert!(list.lines().any(|l| l == "x1^2\tx1 x2"));
        assert!(list.lines().any(|l| l == "x3^2"));
    }

    #[test]
    fn diagram_layout() {
        let q = parse_form("x1^2 - x2 x3 + x3^2", None).unwrap();
        let rows = diagram(&SupportPattern::of_form(&q)).unwrap();
        assert_eq!(rows, ["P . .", " . N", "  P"]);
        let two = parse_form("x1 + x2", None).unwrap();
        assert!(diagram(&SupportPattern::of_form(&two)).is_none());
    }
}
