//! Candidate covariate libraries: monomials over the state variables.

use crate::error::{Error, Result};
use ndarray::{Array2, ArrayView2};

/// One candidate term, a monomial given by per-variable exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermSpec {
    exponents: Vec<u32>,
    display: String,
}

impl TermSpec {
    /// Build a term from exponents; at least one must be positive
    /// (constants are not admitted as candidates).
    pub fn new(exponents: Vec<u32>, var_names: &[String]) -> Result<Self> {
        if exponents.len() != var_names.len() {
            return Err(Error::InvalidInput(format!(
                "{} exponents for {} variables",
                exponents.len(),
                var_names.len()
            )));
        }
        if exponents.iter().all(|&e| e == 0) {
            return Err(Error::InvalidInput("constant term (all exponents zero)".into()));
        }
        let display = display_name(&exponents, var_names);
        Ok(Self { exponents, display })
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Human-readable name, e.g. exponents (1, 0, 1) over (x, y, z) -> "xz".
    pub fn display(&self) -> &str {
        &self.display
    }
}

fn display_name(exponents: &[u32], var_names: &[String]) -> String {
    let mut out = String::new();
    for (e, name) in exponents.iter().zip(var_names) {
        match e {
            0 => {}
            1 => out.push_str(name),
            _ => {
                out.push_str(name);
                out.push('^');
                out.push_str(&e.to_string());
            }
        }
    }
    out
}

/// How to build the candidate library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermMode {
    /// All single variables plus all distinct pairwise products (no
    /// squares); over (x, y, z) this is x, y, z, xy, xz, yz.
    Paper,
    /// Every monomial of total degree 1..=n, graded-lexicographic order.
    FullDegree(u32),
    /// Parse the given term names against the variable names.
    Explicit(Vec<String>),
}

impl TermMode {
    /// Canonical label used in report metadata and CLI round-trips.
    pub fn label(&self) -> String {
        match self {
            TermMode::Paper => "paper".into(),
            TermMode::FullDegree(n) => format!("degree:{n}"),
            TermMode::Explicit(terms) => format!("explicit:{}", terms.join(",")),
        }
    }

    /// Parse a CLI-style mode string: `paper`, `degree:N`, or a
    /// comma-separated list of term names.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "paper" {
            return Ok(TermMode::Paper);
        }
        if let Some(n) = text.strip_prefix("degree:") {
            let n: u32 = n
                .parse()
                .map_err(|_| Error::TermParse(format!("bad degree in '{text}'")))?;
            if n == 0 {
                return Err(Error::TermParse("degree must be at least 1".into()));
            }
            return Ok(TermMode::FullDegree(n));
        }
        let list = text.strip_prefix("explicit:").unwrap_or(text);
        let terms: Vec<String> =
            list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
        Ok(TermMode::Explicit(terms))
    }
}

/// Build the ordered candidate library for the given variables.
pub fn build_terms(var_names: &[String], mode: &TermMode) -> Result<Vec<TermSpec>> {
    if var_names.is_empty() {
        return Err(Error::InvalidInput("no variable names".into()));
    }
    let dim = var_names.len();
    match mode {
        TermMode::Paper => {
            let mut terms = Vec::new();
            for i in 0..dim {
                let mut e = vec![0u32; dim];
                e[i] = 1;
                terms.push(TermSpec::new(e, var_names)?);
            }
            for i in 0..dim {
                for j in i + 1..dim {
                    let mut e = vec![0u32; dim];
                    e[i] = 1;
                    e[j] = 1;
                    terms.push(TermSpec::new(e, var_names)?);
                }
            }
            Ok(terms)
        }
        TermMode::FullDegree(n) => {
            let mut terms = Vec::new();
            let mut exponents = vec![0u32; dim];
            for degree in 1..=*n {
                enumerate_monomials(degree, 0, &mut exponents, var_names, &mut terms)?;
            }
            Ok(terms)
        }
        TermMode::Explicit(names) => {
            let terms: Vec<TermSpec> =
                names.iter().map(|name| parse_term(name, var_names)).collect::<Result<_>>()?;
            for (i, term) in terms.iter().enumerate() {
                if terms[i + 1..].iter().any(|t| t.exponents == term.exponents) {
                    return Err(Error::TermParse(format!(
                        "duplicate term '{}' in explicit list",
                        term.display()
                    )));
                }
            }
            Ok(terms)
        }
    }
}

/// All exponent vectors of exact total degree `remaining`, assigning
/// variables left to right with the highest power first.
fn enumerate_monomials(
    remaining: u32,
    var: usize,
    exponents: &mut Vec<u32>,
    var_names: &[String],
    out: &mut Vec<TermSpec>,
) -> Result<()> {
    if var == exponents.len() {
        if remaining == 0 {
            out.push(TermSpec::new(exponents.clone(), var_names)?);
        }
        return Ok(());
    }
    for e in (0..=remaining).rev() {
        exponents[var] = e;
        enumerate_monomials(remaining - e, var + 1, exponents, var_names, out)?;
    }
    exponents[var] = 0;
    Ok(())
}

/// Parse a term like "xy", "x*z" or "x^2" by greedy longest-prefix
/// matching of variable names.
fn parse_term(name: &str, var_names: &[String]) -> Result<TermSpec> {
    let mut exponents = vec![0u32; var_names.len()];
    for factor in name.split('*') {
        let mut rest = factor.trim();
        if rest.is_empty() {
            return Err(Error::TermParse(format!("empty factor in term '{name}'")));
        }
        while !rest.is_empty() {
            let hit = var_names
                .iter()
                .enumerate()
                .filter(|(_, v)| rest.starts_with(v.as_str()))
                .max_by_key(|(_, v)| v.len());
            let Some((idx, var)) = hit else {
                return Err(Error::TermParse(format!(
                    "term '{name}': no variable matches '{rest}' (variables: {})",
                    var_names.join(", ")
                )));
            };
            rest = &rest[var.len()..];
            let mut power = 1u32;
            if let Some(stripped) = rest.strip_prefix('^') {
                let digits: String = stripped.chars().take_while(|c| c.is_ascii_digit()).collect();
                if digits.is_empty() {
                    return Err(Error::TermParse(format!("term '{name}': missing exponent")));
                }
                power = digits
                    .parse()
                    .map_err(|_| Error::TermParse(format!("term '{name}': bad exponent")))?;
                rest = &stripped[digits.len()..];
            }
            exponents[idx] += power;
        }
    }
    TermSpec::new(exponents, var_names)
}

/// Evaluate every term at every state row: entry (t, j) is the product
/// of `states[t][i] ^ exponents_j[i]`.
pub fn evaluate_terms(states: &ArrayView2<'_, f64>, terms: &[TermSpec]) -> Result<Array2<f64>> {
    let t = states.nrows();
    let mut out = Array2::zeros((t, terms.len()));
    for (j, term) in terms.iter().enumerate() {
        if term.exponents().len() != states.ncols() {
            return Err(Error::InvalidInput(format!(
                "term '{}' has {} exponents but states have {} columns",
                term.display(),
                term.exponents().len(),
                states.ncols()
            )));
        }
        for (row_idx, row) in states.rows().into_iter().enumerate() {
            let mut value = 1.0;
            for (&e, &x) in term.exponents().iter().zip(row.iter()) {
                if e > 0 {
                    value *= x.powi(e as i32);
                }
            }
            if !value.is_finite() {
                return Err(Error::Evaluation(format!(
                    "term '{}' is non-finite at row {row_idx}",
                    term.display()
                )));
            }
            out[(row_idx, j)] = value;
        }
    }
    Ok(out)
}
