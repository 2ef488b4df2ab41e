//! A subset of ISCN karyotype notation.
//!
//! ```text
//! karyotype := count "," sex ("," event)*
//! sex       := ("X" | "Y" | "N")+
//! event     := "+" chr | "-" chr
//!            | "t(" chr ";" chr ")(" band ";" band ")"
//!            | "del(" chr ")(" band [band] ")"
//!            | "inv(" chr ")(" band band ")"
//!            | "dup(" chr ")(" band band ")"
//! band      := ("p" | "q") digits ["." digits]
//! ```
//!
//! The grammar is case sensitive and admits no whitespace, so every accepted
//! string is already in canonical form.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::band::{Arm, Chromosome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SexSymbol {
    X,
    Y,
    /// An unspecified sex chromosome.
    N,
}

impl SexSymbol {
    pub fn symbol(self) -> char {
        match self {
            SexSymbol::X => 'X',
            SexSymbol::Y => 'Y',
            SexSymbol::N => 'N',
        }
    }
}

/// A band reference such as `q13.1`: arm, major digits, optional sub-digits.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Band {
    arm: Arm,
    major: String,
    minor: Option<String>,
}

impl Band {
    /// Returns `None` unless both digit groups are non-empty ASCII digits.
    pub fn new(arm: Arm, major: &str, minor: Option<&str>) -> Option<Band> {
        let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
        if !digits(major) || !minor.is_none_or(digits) {
            return None;
        }
        Some(Band {
            arm,
            major: major.to_string(),
            minor: minor.map(str::to_string),
        })
    }

    pub fn arm(&self) -> Arm {
        self.arm
    }

    /// The band label as written in band trees, e.g. `q13.1`.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.arm, self.major)?;
        if let Some(minor) = &self.minor {
            write!(f, ".{minor}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Breakpoint {
    pub chromosome: Chromosome,
    pub band: Band,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Event {
    Gain(Chromosome),
    Loss(Chromosome),
    Translocation(Breakpoint, Breakpoint),
    Deletion {
        chromosome: Chromosome,
        band: Band,
        end: Option<Band>,
    },
    Inversion {
        chromosome: Chromosome,
        from: Band,
        to: Band,
    },
    Duplication {
        chromosome: Chromosome,
        from: Band,
        to: Band,
    },
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Gain(c) => write!(f, "+{c}"),
            Event::Loss(c) => write!(f, "-{c}"),
            Event::Translocation(a, b) => write!(
                f,
                "t({};{})({};{})",
                a.chromosome, b.chromosome, a.band, b.band
            ),
            Event::Deletion {
                chromosome,
                band,
                end,
            } => {
                write!(f, "del({chromosome})({band}")?;
                if let Some(end) = end {
                    write!(f, "{end}")?;
                }
                f.write_str(")")
            }
            Event::Inversion {
                chromosome,
                from,
                to,
            } => write!(f, "inv({chromosome})({from}{to})"),
            Event::Duplication {
                chromosome,
                from,
                to,
            } => write!(f, "dup({chromosome})({from}{to})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Karyotype {
    pub total: u32,
    pub sex: Vec<SexSymbol>,
    pub events: Vec<Event>,
}

impl Karyotype {
    pub fn new(total: u32, sex: Vec<SexSymbol>, events: Vec<Event>) -> Self {
        Karyotype { total, sex, events }
    }
}

impl fmt::Display for Karyotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},", self.total)?;
        for s in &self.sex {
            write!(f, "{}", s.symbol())?;
        }
        for e in &self.events {
            write!(f, ",{e}")?;
        }
        Ok(())
    }
}

impl core::str::FromStr for Karyotype {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse(s)
    }
}

/// The first position (in characters) where no rule can continue.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at position {position}: expected {expected}, found {found}")]
pub struct ParseError {
    pub position: usize,
    pub expected: String,
    pub found: String,
}

/// Canonical text of a karyotype. Identical to its `Display` form.
pub fn render(k: &Karyotype) -> String {
    k.to_string()
}

pub fn parse(s: &str) -> Result<Karyotype, ParseError> {
    let mut p = Parser {
        chars: s.chars().collect(),
        pos: 0,
    };
    let k = p.karyotype()?;
    p.end()?;
    Ok(k)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn error_at(&self, position: usize, expected: impl Into<String>) -> ParseError {
        let found = match self.chars.get(position) {
            Some(c) => format!("{c:?}"),
            None => "end of input".to_string(),
        };
        ParseError {
            position,
            expected: expected.into(),
            found,
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error_at(self.pos, format!("{c:?}")))
        }
    }

    fn keyword(&mut self, word: &str) -> Result<(), ParseError> {
        for c in word.chars() {
            self.expect(c)?;
        }
        Ok(())
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn end(&self) -> Result<(), ParseError> {
        if self.pos == self.chars.len() {
            Ok(())
        } else {
            Err(self.error_at(self.pos, "',' or end of input"))
        }
    }

    fn karyotype(&mut self) -> Result<Karyotype, ParseError> {
        let start = self.pos;
        let count = self.digits();
        if count.is_empty() {
            return Err(self.error_at(start, "chromosome count"));
        }
        let total = match count.parse::<u32>() {
            Ok(n) if n > 0 && !count.starts_with('0') => n,
            _ => {
                return Err(self.error_at(start, "positive chromosome count without leading zeros"))
            }
        };
        self.expect(',')?;

        let mut sex = Vec::new();
        loop {
            let s = match self.peek() {
                Some('X') => SexSymbol::X,
                Some('Y') => SexSymbol::Y,
                Some('N') => SexSymbol::N,
                _ => break,
            };
            sex.push(s);
            self.pos += 1;
        }
        if sex.is_empty() {
            return Err(self.error_at(self.pos, "sex chromosomes (X, Y or N)"));
        }

        let mut events = Vec::new();
        while self.peek() == Some(',') {
            self.pos += 1;
            events.push(self.event()?);
        }
        Ok(Karyotype { total, sex, events })
    }

    fn event(&mut self) -> Result<Event, ParseError> {
        match self.peek() {
            Some('+') => {
                self.pos += 1;
                Ok(Event::Gain(self.chromosome()?))
            }
            Some('-') => {
                self.pos += 1;
                Ok(Event::Loss(self.chromosome()?))
            }
            Some('t') => {
                self.keyword("t(")?;
                let a = self.chromosome()?;
                self.expect(';')?;
                let b = self.chromosome()?;
                self.keyword(")(")?;
                let band_a = self.band()?;
                self.expect(';')?;
                let band_b = self.band()?;
                self.expect(')')?;
                Ok(Event::Translocation(
                    Breakpoint {
                        chromosome: a,
                        band: band_a,
                    },
                    Breakpoint {
                        chromosome: b,
                        band: band_b,
                    },
                ))
            }
            Some('d') => {
                self.expect('d')?;
                match self.peek() {
                    Some('e') => {
                        self.keyword("el(")?;
                        let chromosome = self.chromosome()?;
                        self.keyword(")(")?;
                        let band = self.band()?;
                        let end = match self.peek() {
                            Some('p' | 'q') => Some(self.band()?),
                            _ => None,
                        };
                        self.expect(')')?;
                        Ok(Event::Deletion {
                            chromosome,
                            band,
                            end,
                        })
                    }
                    Some('u') => {
                        self.keyword("up(")?;
                        let (chromosome, from, to) = self.two_band_tail()?;
                        Ok(Event::Duplication {
                            chromosome,
                            from,
                            to,
                        })
                    }
                    _ => Err(self.error_at(self.pos, "\"del(\" or \"dup(\"")),
                }
            }
            Some('i') => {
                self.keyword("inv(")?;
                let (chromosome, from, to) = self.two_band_tail()?;
                Ok(Event::Inversion {
                    chromosome,
                    from,
                    to,
                })
            }
            _ => Err(self.error_at(self.pos, "an event (+, -, t, del, inv or dup)")),
        }
    }

    /// `chr ")(" band band ")"`, shared by inv and dup.
    fn two_band_tail(&mut self) -> Result<(Chromosome, Band, Band), ParseError> {
        let chromosome = self.chromosome()?;
        self.keyword(")(")?;
        let from = self.band()?;
        let to = self.band()?;
        self.expect(')')?;
        Ok((chromosome, from, to))
    }

    fn chromosome(&mut self) -> Result<Chromosome, ParseError> {
        let start = self.pos;
        match self.peek() {
            Some('X') => {
                self.pos += 1;
                Ok(Chromosome::X)
            }
            Some('Y') => {
                self.pos += 1;
                Ok(Chromosome::Y)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits();
                digits
                    .parse::<Chromosome>()
                    .map_err(|_| self.error_at(start, "chromosome 1-22, X or Y"))
            }
            _ => Err(self.error_at(start, "chromosome 1-22, X or Y")),
        }
    }

    fn band(&mut self) -> Result<Band, ParseError> {
        let arm = match self.peek().and_then(Arm::from_symbol) {
            Some(arm) => arm,
            None => return Err(self.error_at(self.pos, "band arm 'p' or 'q'")),
        };
        self.pos += 1;
        let major = self.digits();
        if major.is_empty() {
            return Err(self.error_at(self.pos, "band number"));
        }
        let minor = if self.peek() == Some('.') {
            self.pos += 1;
            let minor = self.digits();
            if minor.is_empty() {
                return Err(self.error_at(self.pos, "sub-band number"));
            }
            Some(minor)
        } else {
            None
        };
        Ok(Band { arm, major, minor })
    }
}

/// Size bounds for [`random_karyotype`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomConfig {
    pub max_total: u32,
    pub max_sex: usize,
    pub max_events: usize,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig {
            max_total: 100,
            max_sex: 4,
            max_events: 4,
        }
    }
}

/// Deterministic random karyotype. Bounds of zero are treated as one,
/// except `max_events`, where zero means no events.
pub fn random_karyotype(seed: u64, config: &RandomConfig) -> Karyotype {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = rng.gen_range(1..=config.max_total.max(1));
    let sex = (0..rng.gen_range(1..=config.max_sex.max(1)))
        .map(|_| match rng.gen_range(0..3) {
            0 => SexSymbol::X,
            1 => SexSymbol::Y,
            _ => SexSymbol::N,
        })
        .collect();
    let events = (0..rng.gen_range(0..=config.max_events))
        .map(|_| random_event(&mut rng))
        .collect();
    Karyotype { total, sex, events }
}

fn random_chromosome(rng: &mut ChaCha8Rng) -> Chromosome {
    match rng.gen_range(0..24u8) {
        22 => Chromosome::X,
        23 => Chromosome::Y,
        n => Chromosome::Autosome(n + 1),
    }
}

fn random_band(rng: &mut ChaCha8Rng) -> Band {
    let arm = if rng.gen_bool(0.5) { Arm::P } else { Arm::Q };
    let major = format!("{}", rng.gen_range(10..=37));
    let minor = rng.gen_bool(0.5).then(|| {
        let len = rng.gen_range(1..=2);
        (0..len)
            .map(|_| char::from(b'1' + rng.gen_range(0..3u8)))
            .collect()
    });
    Band { arm, major, minor }
}

fn random_event(rng: &mut ChaCha8Rng) -> Event {
    match rng.gen_range(0..6) {
        0 => Event::Gain(random_chromosome(rng)),
        1 => Event::Loss(random_chromosome(rng)),
        2 => Event::Translocation(
            Breakpoint {
                chromosome: random_chromosome(rng),
                band: random_band(rng),
            },
            Breakpoint {
                chromosome: random_chromosome(rng),
                band: random_band(rng),
            },
        ),
        3 => Event::Deletion {
            chromosome: random_chromosome(rng),
            band: random_band(rng),
            end: rng.gen_bool(0.5).then(|| random_band(rng)),
        },
        4 => Event::Inversion {
            chromosome: random_chromosome(rng),
            from: random_band(rng),
            to: random_band(rng),
        },
        _ => Event::Duplication {
            chromosome: random_chromosome(rng),
            from: random_band(rng),
            to: random_band(rng),
        },
    }
}
