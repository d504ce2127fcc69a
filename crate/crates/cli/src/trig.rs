//! Initial data as finite trigonometric sums, e.g. `0.1*cos(x) - 0.3*sin(2*x) + 1`.
//!
//! Grammar: `sum := term (('+' | '-') term)*`,
//! `term := [number '*'] ('cos' | 'sin') '(' [number '*'] 'x' ')' | number`.

use std::fmt;

use bo_core::{Grid, RealField};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Wave {
    Cos,
    Sin,
    Const,
}

/// One term `amplitude · wave(k x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub amplitude: f64,
    pub wave: Wave,
    pub k: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrigSum {
    pub terms: Vec<Term>,
}

impl fmt::Display for TrigSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match t.wave {
                Wave::Const => write!(f, "{}", t.amplitude)?,
                Wave::Cos => write!(f, "{}*cos({}*x)", t.amplitude, t.k)?,
                Wave::Sin => write!(f, "{}*sin({}*x)", t.amplitude, t.k)?,
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> CliError {
        CliError::Config(format!("initial condition '{}': {msg} at offset {}", self.src, self.pos))
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), CliError> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{s}'")))
        }
    }

    fn number(&mut self) -> Option<f64> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let mut end = 0;
        let bytes = rest.as_bytes();
        while end < bytes.len() {
            let c = bytes[end] as char;
            let exp_sign = (c == '+' || c == '-') && end > 0 && matches!(bytes[end - 1], b'e' | b'E');
            if c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E' || exp_sign {
                end += 1;
            } else {
                break;
            }
        }
        let v = rest[..end].parse::<f64>().ok()?;
        self.pos += end;
        Some(v)
    }

    fn wave(&mut self) -> Option<Wave> {
        if self.eat("cos") {
            Some(Wave::Cos)
        } else if self.eat("sin") {
            Some(Wave::Sin)
        } else {
            None
        }
    }

    fn argument(&mut self) -> Result<f64, CliError> {
        self.expect("(")?;
        let k = match self.number() {
            Some(k) => {
                self.expect("*")?;
                k
            }
            None => 1.0,
        };
        self.expect("x")?;
        self.expect(")")?;
        Ok(k)
    }

    fn term(&mut self, sign: f64) -> Result<Term, CliError> {
        if let Some(w) = self.wave() {
            let k = self.argument()?;
            return Ok(Term { amplitude: sign, wave: w, k });
        }
        let a = self.number().ok_or_else(|| self.err("expected a number, cos or sin"))?;
        if self.eat("*") {
            let w = self.wave().ok_or_else(|| self.err("expected cos or sin"))?;
            let k = self.argument()?;
            Ok(Term { amplitude: sign * a, wave: w, k })
        } else {
            Ok(Term { amplitude: sign * a, wave: Wave::Const, k: 0.0 })
        }
    }
}

pub fn parse(src: &str) -> Result<TrigSum, CliError> {
    let mut p = Parser { src, pos: 0 };
    let mut terms = Vec::new();
    let mut sign = if p.eat("-") {
        -1.0
    } else {
        p.eat("+");
        1.0
    };
    loop {
        terms.push(p.term(sign)?);
        match p.peek() {
            None => break,
            Some('+') => {
                p.eat("+");
                sign = 1.0;
            }
            Some('-') => {
                p.eat("-");
                sign = -1.0;
            }
            Some(_) => return Err(p.err("unexpected character")),
        }
    }
    Ok(TrigSum { terms })
}

impl TrigSum {
    /// Samples the sum on `grid`. Every wavenumber must be a multiple of `1/λ`
    /// below the Nyquist frequency.
    pub fn sample(&self, grid: Grid) -> Result<RealField, CliError> {
        for t in &self.terms {
            if t.wave == Wave::Const {
                continue;
            }
            let n = t.k * grid.lambda();
            if (n - n.round()).abs() > 1e-9 {
                return Err(CliError::Config(format!(
                    "wavenumber {} is not periodic on period 2π·{}",
                    t.k,
                    grid.lambda()
                )));
            }
            if n.round().abs() >= (grid.n_modes() / 2) as f64 {
                return Err(CliError::Config(format!(
                    "wavenumber {} not resolved with n_modes = {}",
                    t.k,
                    grid.n_modes()
                )));
            }
        }
        let terms = self.terms.clone();
        RealField::from_fn(grid, move |x| {
            terms
                .iter()
                .map(|t| match t.wave {
                    Wave::Cos => t.amplitude * (t.k * x).cos(),
                    Wave::Sin => t.amplitude * (t.k * x).sin(),
                    Wave::Const => t.amplitude,
                })
                .sum()
        })
        .map_err(CliError::from)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sums() {
        let s = parse("0.1*cos(x) - 0.3*sin(2*x)+1.5 + cos(4*x)").unwrap();
        assert_eq!(
            s.terms,
            vec![
                Term { amplitude: 0.1, wave: Wave::Cos, k: 1.0 },
                Term { amplitude: -0.3, wave: Wave::Sin, k: 2.0 },
                Term { amplitude: 1.5, wave: Wave::Const, k: 0.0 },
                Term { amplitude: 1.0, wave: Wave::Cos, k: 4.0 },
            ]
        );
        assert_eq!(parse("-2e-1*sin(3*x)").unwrap().terms[0].amplitude, -0.2);
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "cos(y)", "0.1*tan(x)", "cos(x) cos(x)", "0.1*cos(2x)", "exp(x)"] {
            assert!(parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn sampling_checks_resolution() {
        let g = Grid::new(1.0, 16).unwrap();
        assert!(parse("cos(8*x)").unwrap().sample(g).is_err());
        assert!(parse("cos(0.5*x)").unwrap().sample(g).is_err());
        let f = parse("2*cos(x)").unwrap().sample(g).unwrap();
        assert!((f.samples()[0] - 2.0).abs() < 1e-15);
    }
}
