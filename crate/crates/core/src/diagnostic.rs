//! Position-tagged diagnostics shared by the parser and the validator.

use std::fmt;

use crate::ast::Pos;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

/// Stable diagnostic codes. `P` codes come from the parser, `V` codes from
/// the validator; `V1xx` codes are warnings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Code {
    /// Unexpected token.
    P001,
    /// Unterminated string literal.
    P002,
    /// Integer literal out of 64-bit range.
    P003,
    /// Unknown statement keyword.
    P004,
    /// Duplicate name in a scope.
    V001,
    /// Port lists an undeclared message.
    V002,
    /// Undefined initial state.
    V003,
    /// Undefined transition target.
    V004,
    /// Bad transition trigger.
    V005,
    /// Expression or send type error.
    V006,
    /// Assignment to something that is not a property or variable.
    V007,
    /// DA block references an undeclared property.
    V008,
    /// DA property has the wrong type.
    V009,
    /// Unknown algorithm or bad hyperparameter.
    V010,
    /// Instance of an undeclared thing.
    V011,
    /// Connector endpoint does not exist.
    V012,
    /// Connector direction or message mismatch.
    V013,
    /// `da_*` statement names an unknown DA block.
    V014,
    /// Unreachable state.
    V101,
    /// Unused message.
    V102,
    /// DA block never used by a `da_*` statement.
    V103,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::P001 => "P001",
            Code::P002 => "P002",
            Code::P003 => "P003",
            Code::P004 => "P004",
            Code::V001 => "V001",
            Code::V002 => "V002",
            Code::V003 => "V003",
            Code::V004 => "V004",
            Code::V005 => "V005",
            Code::V006 => "V006",
            Code::V007 => "V007",
            Code::V008 => "V008",
            Code::V009 => "V009",
            Code::V010 => "V010",
            Code::V011 => "V011",
            Code::V012 => "V012",
            Code::V013 => "V013",
            Code::V014 => "V014",
            Code::V101 => "V101",
            Code::V102 => "V102",
            Code::V103 => "V103",
        }
    }

    pub fn severity(self) -> Severity {
        match self {
            Code::V101 | Code::V102 | Code::V103 => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: Code,
    pub message: String,
    pub file: String,
    pub line: u32,
    pub column: u32,
}

impl Diagnostic {
    pub fn new(code: Code, file: &str, pos: Pos, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: code.severity(),
            code,
            message: message.into(),
            file: file.to_string(),
            line: pos.line,
            column: pos.column,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

/// `<file>:<line>:<col>: error[<code>]: <message>`
impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let severity = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(
            f,
            "{}:{}:{}: {}[{}]: {}",
            self.file, self.line, self.column, severity, self.code, self.message
        )
    }
}
