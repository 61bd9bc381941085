//! Text form of classes: `L3(d; m1,…,mr)`, `LQ(a,b; …)`, `L2(d; …)`.
//!
//! Input accepts the exponent shorthand `1^9` and arbitrary whitespace.
//! Output groups runs of equal multiplicities as `m^k`, so a rendered
//! class always re-parses to the same value.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{PlaneClass, QuadricClass, ThreefoldClass};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyClass {
    Threefold(ThreefoldClass),
    Quadric(QuadricClass),
    Plane(PlaneClass),
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    at: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        let chars = src
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .map(|(i, c)| (i + 1, c))
            .collect();
        Self { chars, at: 0, src }
    }

    fn pos(&self) -> usize {
        self.chars
            .get(self.at)
            .map_or(self.src.chars().count() + 1, |&(p, _)| p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.err(format!("expected '{c}', found '{found}'")),
                None => self.err(format!("expected '{c}', found end of input")),
            }
        }
    }

    fn int(&mut self) -> Result<i64> {
        let start = self.pos();
        let neg = self.eat('-');
        let mut digits = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            digits.push(c);
            self.at += 1;
        }
        if digits.is_empty() {
            return self.err("expected an integer");
        }
        let v: i64 = digits
            .parse()
            .map_err(|_| Error::Parse { pos: start, msg: "integer out of range".into() })?;
        Ok(if neg { -v } else { v })
    }

    fn mult_list(&mut self) -> Result<Vec<i64>> {
        let mut out = Vec::new();
        if self.peek() == Some(')') {
            return Ok(out);
        }
        loop {
            let m = self.int()?;
            let count = if self.eat('^') {
                let pos = self.pos();
                let k = self.int()?;
                if k < 0 {
                    return Err(Error::Parse { pos, msg: "negative exponent".into() });
                }
                k as usize
            } else {
                1
            };
            out.extend(std::iter::repeat(m).take(count));
            if !self.eat(',') {
                return Ok(out);
            }
        }
    }

    /// After the leading numbers: optional `;` and multiplicity list, then `)`.
    fn tail(&mut self) -> Result<Vec<i64>> {
        let mults = if self.eat(';') { self.mult_list()? } else { Vec::new() };
        self.expect(')')?;
        if let Some(c) = self.peek() {
            return self.err(format!("unexpected trailing '{c}'"));
        }
        Ok(mults)
    }

    fn parse(&mut self) -> Result<AnyClass> {
        if !self.eat('L') {
            return self.err("class must start with L3, LQ or L2");
        }
        match self.peek() {
            Some('3') => {
                self.at += 1;
                self.expect('(')?;
                let d = self.int()?;
                Ok(AnyClass::Threefold(ThreefoldClass::new(d, self.tail()?)))
            }
            Some('2') => {
                self.at += 1;
                self.expect('(')?;
                let d = self.int()?;
                Ok(AnyClass::Plane(PlaneClass::new(d, self.tail()?)))
            }
            Some('Q') | Some('q') => {
                self.at += 1;
                self.expect('(')?;
                let a = self.int()?;
                self.expect(',')?;
                let b = self.int()?;
                Ok(AnyClass::Quadric(QuadricClass::new(a, b, self.tail()?)))
            }
            _ => self.err("class must start with L3, LQ or L2"),
        }
    }
}

pub fn parse_any(s: &str) -> Result<AnyClass> {
    Parser::new(s).parse()
}

fn write_mults(f: &mut fmt::Formatter<'_>, mults: &[i64]) -> fmt::Result {
    let mut first = true;
    let mut i = 0;
    while i < mults.len() {
        let m = mults[i];
        let mut j = i;
        while j < mults.len() && mults[j] == m {
            j += 1;
        }
        if !first {
            f.write_str(", ")?;
        }
        first = false;
        if j - i > 1 {
            write!(f, "{m}^{}", j - i)?;
        } else {
            write!(f, "{m}")?;
        }
        i = j;
    }
    Ok(())
}

impl fmt::Display for ThreefoldClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L3({}; ", self.d)?;
        write_mults(f, &self.mults)?;
        f.write_str(")")
    }
}

impl fmt::Display for QuadricClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LQ({},{}; ", self.a, self.b)?;
        write_mults(f, &self.mults)?;
        f.write_str(")")
    }
}

impl fmt::Display for PlaneClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L2({}; ", self.d)?;
        write_mults(f, &self.mults)?;
        f.write_str(")")
    }
}

impl fmt::Display for AnyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyClass::Threefold(c) => c.fmt(f),
            AnyClass::Quadric(c) => c.fmt(f),
            AnyClass::Plane(c) => c.fmt(f),
        }
    }
}

macro_rules! text_class {
    ($ty:ident, $variant:ident, $what:literal) => {
        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match parse_any(s)? {
                    AnyClass::$variant(c) => Ok(c),
                    other => Err(Error::Parse {
                        pos: 1,
                        msg: format!(concat!("expected ", $what, ", got {}"), other),
                    }),
                }
            }
        }

        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

text_class!(ThreefoldClass, Threefold, "an L3 class");
text_class!(QuadricClass, Quadric, "an LQ class");
text_class!(PlaneClass, Plane, "an L2 class");
