//! Division-free expression trees over the orbit coordinates `(s, x)`.
//!
//! Trees are written as nested JSON arrays, e.g.
//! `["mul", ["var","s",0], ["const","2"]]`. Available nodes: `const`,
//! `cconst` (re, im), `var` (`s` or `x`, zero-based index), `add` and `mul`
//! (two or more operands), `sub`, `neg`, `pow` (non-negative integer
//! exponent) and `exp`.

use num_complex::Complex64;
use serde_json::{json, Value};

use super::ModelError;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(f64),
    CConst(Complex64),
    S(usize),
    X(usize),
    Add(Vec<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Vec<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    Exp(Box<Expr>),
}

fn num(v: &Value, what: &str) -> Result<f64, ModelError> {
    match v {
        Value::String(s) => s.trim().parse().map_err(|_| ModelError::Expr(format!("{what}: cannot parse {s:?}"))),
        Value::Number(n) => n.as_f64().ok_or_else(|| ModelError::Expr(format!("{what}: bad number"))),
        _ => Err(ModelError::Expr(format!("{what}: expected a number or numeric string"))),
    }
}

fn index(v: &Value, what: &str) -> Result<u64, ModelError> {
    match v {
        Value::Number(n) => n.as_u64(),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
    .ok_or_else(|| ModelError::Expr(format!("{what}: expected a non-negative integer")))
}

impl Expr {
    pub fn constant(c: f64) -> Self {
        Self::Const(c)
    }

    pub fn complex(re: f64, im: f64) -> Self {
        Self::CConst(Complex64::new(re, im))
    }

    pub fn add(terms: Vec<Expr>) -> Self {
        Self::Add(terms)
    }

    pub fn mul(factors: Vec<Expr>) -> Self {
        Self::Mul(factors)
    }

    pub fn pow(base: Expr, e: u32) -> Self {
        Self::Pow(Box::new(base), e)
    }

    pub fn exp(arg: Expr) -> Self {
        Self::Exp(Box::new(arg))
    }

    pub fn negate(arg: Expr) -> Self {
        Self::Neg(Box::new(arg))
    }

    /// `exp(i * arg)`, a unit complex number whenever `arg` is real.
    pub fn phase(arg: Expr) -> Self {
        Self::exp(Self::mul(vec![Self::complex(0.0, 1.0), arg]))
    }

    pub fn from_json(v: &Value) -> Result<Self, ModelError> {
        let arr = v.as_array().ok_or_else(|| ModelError::Expr(format!("expected an array, got {v}")))?;
        let (head, args) = arr.split_first().ok_or_else(|| ModelError::Expr("empty expression".into()))?;
        let head = head.as_str().ok_or_else(|| ModelError::Expr("operator must be a string".into()))?;
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(ModelError::Expr(format!("{head} takes {n} arguments, got {}", args.len())))
            }
        };
        let sub = |i: usize| Self::from_json(&args[i]).map(Box::new);
        let many = || -> Result<Vec<Expr>, ModelError> {
            if args.len() < 2 {
                return Err(ModelError::Expr(format!("{head} needs at least two operands")));
            }
            args.iter().map(Self::from_json).collect()
        };
        Ok(match head {
            "const" => {
                arity(1)?;
                Self::Const(num(&args[0], "const")?)
            }
            "cconst" => {
                arity(2)?;
                Self::complex(num(&args[0], "cconst")?, num(&args[1], "cconst")?)
            }
            "var" => {
                arity(2)?;
                let i = usize::try_from(index(&args[1], "var index")?).map_err(|_| ModelError::Expr("var index".into()))?;
                match args[0].as_str() {
                    Some("s") => Self::S(i),
                    Some("x") => Self::X(i),
                    _ => return Err(ModelError::Expr("var kind must be \"s\" or \"x\"".into())),
                }
            }
            "add" => Self::Add(many()?),
            "mul" => Self::Mul(many()?),
            "sub" => {
                arity(2)?;
                Self::Sub(sub(0)?, sub(1)?)
            }
            "neg" => {
                arity(1)?;
                Self::Neg(sub(0)?)
            }
            "pow" => {
                arity(2)?;
                let e = u32::try_from(index(&args[1], "pow exponent")?)
                    .map_err(|_| ModelError::Expr("pow exponent too large".into()))?;
                Self::Pow(sub(0)?, e)
            }
            "exp" => {
                arity(1)?;
                Self::Exp(sub(0)?)
            }
            other => return Err(ModelError::Expr(format!("unknown operator {other:?}"))),
        })
    }

    pub fn to_json(&self) -> Value {
        match self {
            Self::Const(c) => json!(["const", c.to_string()]),
            Self::CConst(c) => json!(["cconst", c.re.to_string(), c.im.to_string()]),
            Self::S(i) => json!(["var", "s", i]),
            Self::X(i) => json!(["var", "x", i]),
            Self::Add(t) => Value::Array(std::iter::once(json!("add")).chain(t.iter().map(Self::to_json)).collect()),
            Self::Mul(t) => Value::Array(std::iter::once(json!("mul")).chain(t.iter().map(Self::to_json)).collect()),
            Self::Sub(a, b) => json!(["sub", a.to_json(), b.to_json()]),
            Self::Neg(a) => json!(["neg", a.to_json()]),
            Self::Pow(a, e) => json!(["pow", a.to_json(), e]),
            Self::Exp(a) => json!(["exp", a.to_json()]),
        }
    }

    /// Largest `s` and `x` indices referenced, as counts.
    pub fn arity(&self) -> (usize, usize) {
        let mut out = (0, 0);
        self.visit(&mut |e| match e {
            Self::S(i) => out.0 = out.0.max(i + 1),
            Self::X(i) => out.1 = out.1.max(i + 1),
            _ => {}
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match self {
            Self::Add(t) | Self::Mul(t) => t.iter().for_each(|e| e.visit(f)),
            Self::Sub(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Self::Neg(a) | Self::Pow(a, _) | Self::Exp(a) => a.visit(f),
            _ => {}
        }
    }

    /// Evaluates at `(s, x)`. Indices are validated when the model map is built.
    pub fn eval(&self, s: &[f64], x: &[f64]) -> Complex64 {
        match self {
            Self::Const(c) => Complex64::new(*c, 0.0),
            Self::CConst(c) => *c,
            Self::S(i) => Complex64::new(s[*i], 0.0),
            Self::X(i) => Complex64::new(x[*i], 0.0),
            Self::Add(t) => t.iter().map(|e| e.eval(s, x)).sum(),
            Self::Mul(t) => t.iter().map(|e| e.eval(s, x)).product(),
            Self::Sub(a, b) => a.eval(s, x) - b.eval(s, x),
            Self::Neg(a) => -a.eval(s, x),
            Self::Pow(a, e) => {
                let b = a.eval(s, x);
                (0..*e).fold(Complex64::new(1.0, 0.0), |acc, _| acc * b)
            }
            Self::Exp(a) => a.eval(s, x).exp(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_evaluate() {
        let v: Value = serde_json::from_str(r#"["mul", ["var","s",0], ["const","2"]]"#).unwrap();
        let e = Expr::from_json(&v).unwrap();
        assert_eq!(e.eval(&[3.0], &[]), Complex64::new(6.0, 0.0));
        assert_eq!(Expr::from_json(&e.to_json()).unwrap(), e);
        assert_eq!(e.arity(), (1, 0));

        let v: Value = serde_json::from_str(r#"["add", ["pow", ["var","x",1], 2], ["cconst","0","1"], ["neg", ["const", 1]]]"#).unwrap();
        let e = Expr::from_json(&v).unwrap();
        assert_eq!(e.eval(&[], &[0.0, 3.0]), Complex64::new(8.0, 1.0));
        assert_eq!(e.arity(), (0, 2));
    }

    #[test]
    fn phase_is_unit() {
        let e = Expr::phase(Expr::mul(vec![Expr::S(0), Expr::X(0)]));
        assert!((e.eval(&[1.3], &[-0.7]).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_malformed() {
        for bad in [r#"[]"#, r#"["div", 1, 2]"#, r#"["var","y",0]"#, r#"["add", ["const","1"]]"#, r#"["pow", ["const","1"], -1]"#, r#""s""#] {
            let v: Value = serde_json::from_str(bad).unwrap();
            assert!(Expr::from_json(&v).is_err(), "{bad}");
        }
    }
}
