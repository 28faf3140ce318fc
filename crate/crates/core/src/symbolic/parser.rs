//! Recursive-descent parser for symbol expressions.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := unary (('*'|'/') unary)*
//! unary  := ('+'|'-') unary | factor
//! factor := atom ('^' signed_int)?
//! atom   := 'z' | number | 'i' | '(' expr ')'
//! number := decimal ('e' signed_int)? 'i'?
//! ```
//!
//! Products, quotients and powers stay in factored form. A sum is expanded to
//! a numerator polynomial over the common denominator, and the numerator is
//! refactored with the root finder.

use crate::error::{Error, Result};
use crate::scalar::{cx, one, powi, zero, Cx, Real};

use super::polynomial::Polynomial;
use super::roots::roots_of_polynomial;
use super::{merge_factors, Factor, RationalSymbol, TAU_CIRCLE};

/// Parses an expression into a canonical symbol, using the default clearance.
pub fn parse_symbol<T: Real>(text: &str) -> Result<RationalSymbol<T>> {
    parse_symbol_with(text, T::lit(TAU_CIRCLE))
}

/// Parses an expression into a canonical symbol with clearance `tau`.
pub fn parse_symbol_with<T: Real>(text: &str, tau: T) -> Result<RationalSymbol<T>> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let value: Value<T> = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    if value.is_zero() {
        return Err(Error::ZeroSymbol);
    }
    let factors: Vec<(Cx<T>, i32)> = value.factors.iter().map(|f| (f.root, f.mult)).collect();
    RationalSymbol::from_factors_with(value.constant, &factors, tau)
}

/// Intermediate value: `constant * prod (z - r)^m`, zero when constant is 0.
#[derive(Debug, Clone)]
struct Value<T: Real> {
    constant: Cx<T>,
    factors: Vec<Factor<T>>,
}

impl<T: Real> Value<T> {
    fn constant(c: Cx<T>) -> Self {
        Self {
            constant: c,
            factors: Vec::new(),
        }
    }

    fn is_zero(&self) -> bool {
        self.constant.norm() == T::zero()
    }

    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::constant(zero());
        }
        Self {
            constant: self.constant * rhs.constant,
            factors: merge_factors(self.factors.into_iter().chain(rhs.factors)),
        }
    }

    fn recip(self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self {
            constant: one::<T>() / self.constant,
            factors: self
                .factors
                .into_iter()
                .map(|f| Factor::new(f.root, -f.mult))
                .collect(),
        })
    }

    fn pow(self, n: i32) -> Option<Self> {
        if n == 0 {
            return Some(Self::constant(one()));
        }
        if self.is_zero() {
            return if n > 0 { Some(self) } else { None };
        }
        Some(Self {
            constant: powi(self.constant, n),
            factors: self
                .factors
                .into_iter()
                .map(|f| Factor::new(f.root, f.mult * n))
                .collect(),
        })
    }

    fn neg(mut self) -> Self {
        self.constant = -self.constant;
        self
    }

    /// Sum over the least common denominator, numerator refactored.
    fn add(self, rhs: Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(rhs);
        }
        if rhs.is_zero() {
            return Ok(self);
        }
        // common denominator: each pole at its larger order
        let mut denom: Vec<Factor<T>> = Vec::new();
        for f in self.factors.iter().chain(rhs.factors.iter()).filter(|f| f.mult < 0) {
            match denom.iter_mut().find(|d| d.root == f.root) {
                Some(d) => d.mult = d.mult.min(f.mult),
                None => denom.push(*f),
            }
        }
        let lift = |v: &Value<T>| -> Polynomial<T> {
            // v * denominator has only nonnegative multiplicities
            let mut ms: Vec<Factor<T>> = v.factors.clone();
            ms.extend(denom.iter().map(|d| Factor::new(d.root, -d.mult)));
            let merged = merge_factors(ms.into_iter());
            let roots: Vec<(Cx<T>, u32)> = merged
                .iter()
                .map(|f| (f.root, f.mult.max(0) as u32))
                .collect();
            Polynomial::from_roots(v.constant, &roots)
        };
        let mut numer = &lift(&self) + &lift(&rhs);
        numer.trim_relative(T::epsilon() * T::lit(16.0));
        if numer.is_zero() {
            return Ok(Self::constant(zero()));
        }
        let lead = numer.leading();
        let roots = roots_of_polynomial(&numer)?;
        let factors = roots
            .into_iter()
            .map(|(r, m)| Factor::new(r, m as i32))
            .chain(denom)
            .collect::<Vec<_>>();
        Ok(Self {
            constant: lead,
            factors: merge_factors(factors.into_iter()),
        })
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr<T: Real>(&mut self) -> Result<Value<T>> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                let rhs = self.term()?;
                acc = acc.add(rhs)?;
            } else if self.eat(b'-') {
                let rhs = self.term()?;
                acc = acc.add(rhs.neg())?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term<T: Real>(&mut self) -> Result<Value<T>> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(self.unary()?);
            } else if self.eat(b'/') {
                let at = self.pos;
                let rhs = self.unary()?.recip().ok_or(Error::Syntax {
                    pos: at,
                    msg: "division by zero".into(),
                })?;
                acc = acc.mul(rhs);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary<T: Real>(&mut self) -> Result<Value<T>> {
        if self.eat(b'-') {
            Ok(self.unary()?.neg())
        } else if self.eat(b'+') {
            self.unary()
        } else {
            self.factor()
        }
    }

    fn factor<T: Real>(&mut self) -> Result<Value<T>> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let at = self.pos;
            let n = self.signed_int()?;
            base.pow(n).ok_or(Error::Syntax {
                pos: at,
                msg: "negative power of zero".into(),
            })
        } else {
            Ok(base)
        }
    }

    fn signed_int(&mut self) -> Result<i32> {
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer exponent"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let n: i32 = digits
            .parse()
            .map_err(|_| self.error("exponent out of range"))?;
        Ok(if neg { -n } else { n })
    }

    fn atom<T: Real>(&mut self) -> Result<Value<T>> {
        match self.peek() {
            Some(b'z') => {
                self.pos += 1;
                Ok(Value {
                    constant: one(),
                    factors: vec![Factor::new(zero(), 1)],
                })
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(Value::constant(cx(T::zero(), T::one())))
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number<T: Real>(&mut self) -> Result<Value<T>> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut count = digits(self);
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            count += digits(self);
        }
        if count == 0 {
            return Err(self.error("malformed number"));
        }
        if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii number");
        let x: f64 = text.parse().map_err(|_| Error::Syntax {
            pos: start,
            msg: format!("malformed number '{text}'"),
        })?;
        let imaginary = self.pos < self.src.len() && self.src[self.pos] == b'i';
        if imaginary {
            self.pos += 1;
        }
        let c = if imaginary {
            cx(T::zero(), T::lit(x))
        } else {
            cx(T::lit(x), T::zero())
        };
        Ok(Value::constant(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Cx<f64> {
        cx(x, 0.0)
    }

    fn parse(s: &str) -> Result<RationalSymbol<f64>> {
        parse_symbol(s)
    }

    #[test]
    fn parses_quotient_of_linears() {
        let s = parse("(z-0.3)/(z+0.4)").unwrap();
        assert_eq!(s.constant(), re(1.0));
        assert_eq!(
            s.factors(),
            &[Factor::new(re(-0.4), -1), Factor::new(re(0.3), 1)]
        );
    }

    #[test]
    fn parses_powers_and_constants() {
        let s = parse("(z-0.5)^2*3").unwrap();
        assert_eq!(s.constant(), re(3.0));
        assert_eq!(s.factors(), &[Factor::new(re(0.5), 2)]);
        let s = parse("2+z").unwrap();
        assert_eq!(s.factors(), &[Factor::new(re(-2.0), 1)]);
    }

    #[test]
    fn rejects_circle_roots() {
        assert!(matches!(parse("z-1"), Err(Error::CircleViolation { .. })));
        assert!(matches!(parse("1/(z+i)"), Err(Error::CircleViolation { .. })));
    }

    #[test]
    fn syntax_errors() {
        for bad in ["", "z+", "(z-0.3", "z^0.5", "2z", "z-0.3)", "x"] {
            assert!(matches!(parse(bad), Err(Error::Syntax { .. })), "{bad}");
        }
        assert!(matches!(parse("z-z"), Err(Error::ZeroSymbol)));
        assert!(matches!(parse("0*z"), Err(Error::ZeroSymbol)));
        assert!(matches!(parse("1/(z-z)"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn complex_literals() {
        let s = parse("z-(-0.5+0.2i)").unwrap();
        assert_eq!(s.factors(), &[Factor::new(cx(-0.5, 0.2), 1)]);
        let s = parse("2i*z").unwrap();
        assert_eq!(s.constant(), cx(0.0, 2.0));
        let s = parse("-0.5+0.2i").unwrap();
        assert_eq!(s.constant(), cx(-0.5, 0.2));
    }

    #[test]
    fn expanded_input_is_factored() {
        let s = parse("z^2-0.8*z+0.15").unwrap();
        assert_eq!(s.factors().len(), 2);
        assert!((s.factors()[0].root - re(0.3)).norm() < 1e-14);
        assert!((s.factors()[1].root - re(0.5)).norm() < 1e-14);

        let s = parse("z^2-z+0.25").unwrap();
        assert_eq!(s.factors().len(), 1);
        assert_eq!(s.factors()[0].mult, 2);

        // partial fractions recombine: 1/(z-0.3) - 1/(z-0.5) = -0.2/((z-0.3)(z-0.5))
        let s = parse("1/(z-0.3) - 1/(z-0.5)").unwrap();
        assert!((s.constant() - re(-0.2)).norm() < 1e-14);
        assert_eq!(s.factors().iter().map(|f| f.mult).collect::<Vec<_>>(), vec![-1, -1]);

        // cancellation of a common factor
        let s = parse("(z^2-0.09)/(z+0.3)").unwrap();
        assert_eq!(s.factors().len(), 1);
        assert!((s.factors()[0].root - re(0.3)).norm() < 1e-12);
    }

    #[test]
    fn canonical_round_trip() {
        for text in [
            "(z-0.3)/(z+0.4)",
            "(2-1i)*(z-(0.25+0.5i))^3/(z-3)^2",
            "-(z-0.1)*(z+2.5)",
            "z^-2*(z-4)^2",
        ] {
            let a = parse(text).unwrap();
            let b = parse(&a.to_string()).unwrap();
            assert_eq!(a, b, "{text} -> {a}");
        }
    }
}
