use std::fmt;

use serde::{Serialize, Serializer};

use crate::ast::{BinaryOp, Literal, UnaryOp, ValueType};

use super::ErrorKind;

/// A runtime value. Its variant always matches the static type of the slot
/// holding it.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Int(i64),
    Real(f64),
    Bool(bool),
    Str(String),
}

impl Value {
    pub fn default_for(ty: ValueType) -> Value {
        match ty {
            ValueType::Int => Value::Int(0),
            ValueType::Real => Value::Real(0.0),
            ValueType::Bool => Value::Bool(false),
            ValueType::String => Value::Str(String::new()),
        }
    }

    pub fn ty(&self) -> ValueType {
        match self {
            Value::Int(_) => ValueType::Int,
            Value::Real(_) => ValueType::Real,
            Value::Bool(_) => ValueType::Bool,
            Value::Str(_) => ValueType::String,
        }
    }

    /// Int widens to Real; everything else is already the right type.
    pub fn coerce(self, ty: ValueType) -> Value {
        match (self, ty) {
            (Value::Int(i), ValueType::Real) => Value::Real(i as f64),
            (v, _) => v,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Value::Int(i) => Some(i as f64),
            Value::Real(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> bool {
        matches!(self, Value::Bool(true))
    }
}

impl From<&Literal> for Value {
    fn from(lit: &Literal) -> Value {
        match lit {
            Literal::Int(i) => Value::Int(*i),
            Literal::Real(r) => Value::Real(*r),
            Literal::Bool(b) => Value::Bool(*b),
            Literal::Str(s) => Value::Str(s.clone()),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Real(r) => f.write_str(&crate::parser::real_to_string(*r)),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Str(s) => f.write_str(s),
        }
    }
}

/// Numbers as JSON numbers (reals keep a fractional part), non-finite
/// reals as the strings `inf`, `-inf` and `NaN`.
impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Int(i) => s.serialize_i64(*i),
            Value::Real(r) if r.is_finite() => s.serialize_f64(*r),
            Value::Real(r) => s.serialize_str(if r.is_nan() {
                "NaN"
            } else if *r > 0.0 {
                "inf"
            } else {
                "-inf"
            }),
            Value::Bool(b) => s.serialize_bool(*b),
            Value::Str(v) => s.serialize_str(v),
        }
    }
}

pub fn unary(op: UnaryOp, v: Value) -> Value {
    match (op, v) {
        (UnaryOp::Neg, Value::Int(i)) => Value::Int(i.wrapping_neg()),
        (UnaryOp::Neg, Value::Real(r)) => Value::Real(-r),
        (UnaryOp::Not, Value::Bool(b)) => Value::Bool(!b),
        (op, v) => unreachable!("validated model applied {op:?} to {v:?}"),
    }
}

/// Strict binary operators; `and`/`or` short-circuit before reaching here.
pub fn binary(op: BinaryOp, l: Value, r: Value) -> Result<Value, ErrorKind> {
    use BinaryOp::*;
    use Value::*;
    Ok(match (op, l, r) {
        (Div | Rem, _, Int(0)) => return Err(ErrorKind::DivisionByZero),
        (Div | Rem, _, Real(0.0)) => return Err(ErrorKind::DivisionByZero),
        (Add, Int(a), Int(b)) => Int(a.wrapping_add(b)),
        (Sub, Int(a), Int(b)) => Int(a.wrapping_sub(b)),
        (Mul, Int(a), Int(b)) => Int(a.wrapping_mul(b)),
        (Div, Int(a), Int(b)) => Int(a.wrapping_div(b)),
        (Rem, Int(a), Int(b)) => Int(a.wrapping_rem(b)),
        (Lt, Int(a), Int(b)) => Bool(a < b),
        (Le, Int(a), Int(b)) => Bool(a <= b),
        (Gt, Int(a), Int(b)) => Bool(a > b),
        (Ge, Int(a), Int(b)) => Bool(a >= b),
        (Eq, Int(a), Int(b)) => Bool(a == b),
        (Ne, Int(a), Int(b)) => Bool(a != b),
        (Eq, Bool(a), Bool(b)) => Bool(a == b),
        (Ne, Bool(a), Bool(b)) => Bool(a != b),
        (Eq, Str(a), Str(b)) => Bool(a == b),
        (Ne, Str(a), Str(b)) => Bool(a != b),
        (And, Bool(a), Bool(b)) => Bool(a && b),
        (Or, Bool(a), Bool(b)) => Bool(a || b),
        (op, l, r) => {
            let (Some(a), Some(b)) = (l.as_f64(), r.as_f64()) else {
                unreachable!("validated model applied {op:?} to {l:?} and {r:?}")
            };
            match op {
                Add => Real(a + b),
                Sub => Real(a - b),
                Mul => Real(a * b),
                Div => Real(a / b),
                Rem => Real(a % b),
                Lt => Bool(a < b),
                Le => Bool(a <= b),
                Gt => Bool(a > b),
                Ge => Bool(a >= b),
                Eq => Bool(a == b),
                Ne => Bool(a != b),
                And | Or => unreachable!(),
            }
        }
    })
}
