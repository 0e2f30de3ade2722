//! Conjugate-closed spectrum lists with a designated Perron entry.
//!
//! Text form: one entry per line, `re`, `re+im i` or `re-im i`, with
//! rational or decimal parts (`#` comments and blank lines ignored). The
//! first entry is the Perron entry.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::{self, Notation, Rational};

/// Decimal entries pair with their conjugate within this distance.
pub const CONJUGATE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEntry {
    pub re: Rational,
    pub im: Rational,
    /// False when either part was written in decimal notation.
    pub exact: bool,
}

impl SpectrumEntry {
    pub fn real(re: Rational) -> Self {
        SpectrumEntry {
            re,
            im: Rational::zero(),
            exact: true,
        }
    }

    pub fn complex(re: Rational, im: Rational) -> Self {
        SpectrumEntry { re, im, exact: true }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn modulus_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl fmt::Display for SpectrumEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real() {
            return f.write_str(&rational::format(&self.re));
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(
            f,
            "{}{}{} i",
            rational::format(&self.re),
            sign,
            rational::format(&self.im.abs())
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumList {
    entries: Vec<SpectrumEntry>,
    perron_index: usize,
}

impl SpectrumList {
    pub fn new(entries: Vec<SpectrumEntry>, perron_index: usize) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidDimension("empty spectrum".into()));
        }
        if perron_index >= entries.len() {
            return Err(Error::InvalidDimension(format!(
                "Perron index {perron_index} out of range"
            )));
        }
        Ok(SpectrumList {
            entries,
            perron_index,
        })
    }

    /// All-real exact list; the first value is the Perron entry.
    pub fn from_reals(values: &[Rational]) -> Result<Self> {
        Self::new(values.iter().cloned().map(SpectrumEntry::real).collect(), 0)
    }

    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn perron(&self) -> &SpectrumEntry {
        &self.entries[self.perron_index]
    }

    pub fn perron_index(&self) -> usize {
        self.perron_index
    }

    /// Every entry except the Perron one, in order.
    pub fn tail(&self) -> Vec<SpectrumEntry> {
        self.entries
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != self.perron_index)
            .map(|(_, e)| e.clone())
            .collect()
    }

    /// Indices that break Perron dominance: a non-real or negative Perron
    /// entry reports its own index, otherwise every `k` with
    /// `|λ_k| > λ_1`. Not an error; the list may be a mere candidate.
    pub fn dominance_violations(&self) -> Vec<usize> {
        let p = self.perron();
        if !p.is_real() || p.re.is_negative() {
            return vec![self.perron_index];
        }
        let bound = &p.re * &p.re;
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.modulus_sq() > bound)
            .map(|(k, _)| k)
            .collect()
    }
}

impl fmt::Display for SpectrumList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

fn parse_part(token: &str, line: usize) -> Result<(Rational, bool)> {
    let (v, notation) = rational::parse_token(token, line)?;
    Ok((v, notation != Notation::Decimal))
}

fn parse_entry(raw: &str, line: usize) -> Result<SpectrumEntry> {
    let text: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = text.strip_suffix('i') else {
        let (re, exact) = parse_part(&text, line)?;
        return Ok(SpectrumEntry {
            re,
            im: Rational::zero(),
            exact,
        });
    };
    // Split at the last sign that is not the leading one.
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(_, c)| c == '+' || c == '-')
        .map(|(k, _)| k)
        .last();
    let (re_text, im_text) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let (re, re_exact) = parse_part(re_text, line)?;
    let (negative, magnitude) = match im_text.chars().next() {
        Some('-') => (true, &im_text[1..]),
        Some('+') => (false, &im_text[1..]),
        _ => (false, im_text),
    };
    let (im, im_exact) = if magnitude.is_empty() {
        (Rational::one(), true)
    } else {
        parse_part(magnitude, line)?
    };
    Ok(SpectrumEntry {
        re,
        im: if negative { -im } else { im },
        exact: re_exact && im_exact,
    })
}

pub fn parse_spectrum(text: &str) -> Result<SpectrumList> {
    let entries = text
        .lines()
        .enumerate()
        .filter_map(|(k, line)| {
            let content = line.split('#').next().unwrap_or("").trim();
            (!content.is_empty()).then_some((k + 1, content))
        })
        .map(|(line, content)| parse_entry(content, line))
        .collect::<Result<Vec<_>>>()?;
    if entries.is_empty() {
        return Err(Error::parse(0, "no spectrum entries found"));
    }
    SpectrumList::new(entries, 0)
}

fn conjugate_gap(pos: &SpectrumEntry, neg: &SpectrumEntry) -> f64 {
    (rational::to_f64(&(&pos.re - &neg.re))).abs() + (rational::to_f64(&(&pos.im + &neg.im))).abs()
}

/// Monic real polynomial `∏ (x - λ_k)` over the given entries. Each entry
/// with positive imaginary part is greedily paired with the nearest unused
/// entry of negative imaginary part; exact entries must match exactly,
/// decimal ones within [`CONJUGATE_TOLERANCE`]. A pair contributes
/// `x² - 2a x + a² + b²` from its upper member `a + b i`.
pub fn poly_from_entries(entries: &[SpectrumEntry]) -> Result<Poly> {
    let mut used = vec![false; entries.len()];
    let mut poly = Poly::one();
    for (k, e) in entries.iter().enumerate() {
        if e.is_real() {
            used[k] = true;
            poly = poly.mul(&Poly::linear(&e.re));
            continue;
        }
        if e.im.is_negative() {
            continue;
        }
        let partner = entries
            .iter()
            .enumerate()
            .filter(|&(j, c)| !used[j] && c.im.is_negative())
            .filter(|&(_, c)| {
                if e.exact && c.exact {
                    c.re == e.re && c.im == -e.im.clone()
                } else {
                    conjugate_gap(e, c) <= CONJUGATE_TOLERANCE
                }
            })
            .min_by(|(_, a), (_, b)| conjugate_gap(e, a).total_cmp(&conjugate_gap(e, b)))
            .map(|(j, _)| j);
        let Some(j) = partner else {
            return Err(Error::NotConjugateClosed { index: k });
        };
        used[k] = true;
        used[j] = true;
        let two = rational::int(2);
        poly = poly.mul(&Poly::new(vec![e.modulus_sq(), -(two * &e.re), Rational::one()]));
    }
    if let Some(k) = used.iter().position(|u| !u) {
        return Err(Error::NotConjugateClosed { index: k });
    }
    Ok(poly)
}

pub fn poly_from_spectrum(s: &SpectrumList) -> Result<Poly> {
    poly_from_entries(s.entries())
}
