//! Sum expression parsing.
//!
//! Grammar: `term (('+'|'-') term)*` with an optional sign before the first
//! term, `term := [rational '*'] '[' word ']' | [rational '*'] 'phi[' word ']'`,
//! rationals as `p`, `-p`, or `p/q`. A `phi[w]` term denotes the Brooks
//! quasimorphism of `w`: under `--brooks` the whole sum lives in Brooks
//! space, otherwise each phi term expands to `[w] - [w^-1]` on the spot.
//! The printed form of a sum parses back to itself.

use crate::CliError;
use countfn::formal::brooks_to_counting;
use countfn::{FormalSum, Mode, Rat64, Word};

struct Term {
    coefficient: Rat64,
    word: Word,
    phi: bool,
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, position: usize, message: impl Into<String>) -> CliError {
        CliError::Parse { position, message: message.into() }
    }

    fn skip_whitespace(&mut self) {
        let rest = &self.text.as_bytes()[self.pos..];
        self.pos += rest.iter().take_while(|b| b.is_ascii_whitespace()).count();
    }

    fn peek(&self) -> Option<u8> {
        self.text.as_bytes().get(self.pos).copied()
    }

    /// `p` or `p/q`, optionally negative. Only called when the head is a
    /// digit or a minus sign followed by a digit.
    fn rational(&mut self) -> Result<Rat64, CliError> {
        let start = self.pos;
        let numerator = self.integer()?;
        if self.peek() != Some(b'/') {
            return Ok(Rat64::from_integer(numerator));
        }
        self.pos += 1;
        let denominator = self.integer()?;
        if denominator == 0 {
            return Err(self.error(start, "zero denominator"));
        }
        Ok(Rat64::new(numerator, denominator))
    }

    fn integer(&mut self) -> Result<i64, CliError> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        let digits = self.text.as_bytes()[self.pos..]
            .iter()
            .take_while(|b| b.is_ascii_digit())
            .count();
        if digits == 0 {
            return Err(self.error(self.pos, "expected a number"));
        }
        self.pos += digits;
        self.text[start..self.pos]
            .parse()
            .map_err(|_| self.error(start, "number out of range"))
    }

    fn bracketed_word(&mut self, mode: Mode) -> Result<Word, CliError> {
        let open = self.pos;
        self.pos += 1;
        let close = self.text[self.pos..]
            .find(']')
            .ok_or_else(|| self.error(open, "unterminated '['"))?;
        let content_start = self.pos;
        let content = &self.text[content_start..content_start + close];
        self.pos = content_start + close + 1;
        Word::parse(mode, content).map_err(|e| self.error(content_start, e.to_string()))
    }

    fn term(&mut self, mode: Mode, sign: i64) -> Result<Term, CliError> {
        self.skip_whitespace();
        let start = self.pos;
        let mut coefficient = Rat64::from_integer(sign);
        let head = self.peek();
        let signed_number = head == Some(b'-')
            && self
                .text
                .as_bytes()
                .get(self.pos + 1)
                .is_some_and(|b| b.is_ascii_digit());
        if head.is_some_and(|b| b.is_ascii_digit()) || signed_number {
            coefficient *= self.rational()?;
            self.skip_whitespace();
            if self.peek() != Some(b'*') {
                return Err(self.error(self.pos, "expected '*' after the coefficient"));
            }
            self.pos += 1;
            self.skip_whitespace();
        }
        let phi = self.text[self.pos..].starts_with("phi");
        if phi {
            self.pos += 3;
            self.skip_whitespace();
        }
        if self.peek() != Some(b'[') {
            return Err(self.error(self.pos, "expected '[' opening a term"));
        }
        let word = self.bracketed_word(mode)?;
        if phi && !mode.is_group() {
            return Err(self.error(start, "phi terms require group mode"));
        }
        Ok(Term { coefficient, word, phi })
    }

    fn terms(&mut self, mode: Mode) -> Result<Vec<Term>, CliError> {
        self.skip_whitespace();
        if self.peek().is_none() {
            return Err(self.error(self.pos, "expected a term"));
        }
        let mut sign = 1;
        if let Some(b @ (b'+' | b'-')) = self.peek() {
            if b == b'-' {
                sign = -1;
            }
            self.pos += 1;
        }
        let mut out = vec![self.term(mode, sign)?];
        loop {
            self.skip_whitespace();
            match self.peek() {
                None => return Ok(out),
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                Some(_) => {
                    return Err(self.error(self.pos, "expected '+' or '-' between terms"))
                }
            }
            self.pos += 1;
            out.push(self.term(mode, sign)?);
        }
    }
}

/// Parses an expression into a counting-function sum. With `brooks` set the
/// whole expression is read in Brooks space and converted; otherwise only
/// the `phi[...]` terms are.
pub fn parse_sum(mode: Mode, text: &str, brooks: bool) -> Result<FormalSum<Rat64>, CliError> {
    let terms = Parser { text, pos: 0 }.terms(mode)?;
    if brooks {
        let f = FormalSum::from_terms(
            mode,
            terms.into_iter().map(|t| (t.word, t.coefficient)),
        )?;
        return Ok(brooks_to_counting(&f)?);
    }
    let mut out = FormalSum::zero(mode);
    for t in terms {
        let part = if t.phi {
            brooks_to_counting(&FormalSum::delta(t.word))?
        } else {
            FormalSum::delta(t.word)
        };
        out = out.add(&part.scale(&t.coefficient))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use countfn::oracle::enumerate_words;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m2() -> Mode {
        Mode::monoid(2).unwrap()
    }

    fn g2() -> Mode {
        Mode::group(2).unwrap()
    }

    #[test]
    fn grammar_examples() {
        let f = parse_sum(m2(), "[a1 a2 a1]", false).unwrap();
        assert_eq!(f.to_string(), "[a1a2a1]");
        let f = parse_sum(g2(), "phi[a1 a2]", false).unwrap();
        assert_eq!(f.to_string(), "[a1a2] - [A2A1]");
        let f = parse_sum(m2(), "2/3*[a2] - [e]", false).unwrap();
        assert_eq!(f.to_string(), "-[e] + 2/3*[a2]");
        let f = parse_sum(g2(), "[a1 a2]+[A1 a2]+[a1 A2]+[A1 A2]", true).unwrap();
        assert_eq!(f.support_size(), 8);
    }

    #[test]
    fn parse_errors_carry_positions() {
        for (text, position) in [
            ("", 0),
            ("  ", 2),
            ("[a1] [a2]", 5),
            ("[a1", 0),
            ("2[a1]", 1),
            ("1/0*[a1]", 0),
            ("[a0]", 1),
        ] {
            match parse_sum(m2(), text, false) {
                Err(CliError::Parse { position: p, .. }) => assert_eq!(p, position, "{text:?}"),
                other => panic!("{text:?} should fail to parse, got {other:?}"),
            }
        }
        assert!(matches!(
            parse_sum(m2(), "phi[a1]", false),
            Err(CliError::Parse { .. })
        ));
        assert!(matches!(
            parse_sum(g2(), "[a1 A1]", false),
            Err(CliError::Parse { .. })
        ));
    }

    #[test]
    fn printed_sums_parse_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xc11);
        for mode in [m2(), g2()] {
            let pool: Vec<Word> = (0..=3)
                .flat_map(|l| enumerate_words(mode, l).unwrap())
                .collect();
            for _ in 0..500 {
                let terms = rng.gen_range(1..=5);
                let f = FormalSum::from_terms(
                    mode,
                    (0..terms).map(|_| {
                        let word = pool[rng.gen_range(0..pool.len())].clone();
                        let c = Rat64::new(rng.gen_range(-9..=9), rng.gen_range(1..=9));
                        (word, c)
                    }),
                )
                .unwrap();
                if f.is_zero() {
                    continue;
                }
                let printed = f.to_string();
                let back = parse_sum(mode, &printed, false).unwrap();
                assert_eq!(back, f, "{printed}");
            }
        }
    }
}
