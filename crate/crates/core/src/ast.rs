//! Abstract syntax of a model: things, their statecharts and data-analytics
//! blocks, and the configurations that wire thing instances together.
//!
//! Every node that can be the subject of a diagnostic carries a [`Pos`].
//! Positions never take part in equality, so `==` on any node compares
//! structure only (names, order, literals).

use std::fmt;

/// A 1-based source position.
///
/// `PartialEq` always returns `true`: two nodes parsed from differently
/// formatted sources compare equal when their structure does.
#[derive(Clone, Copy, Debug, Default)]
pub struct Pos {
    pub line: u32,
    pub column: u32,
}

impl Pos {
    pub fn new(line: u32, column: u32) -> Self {
        Pos { line, column }
    }

    /// Sort key for ordering diagnostics.
    pub fn key(self) -> (u32, u32) {
        (self.line, self.column)
    }
}

impl PartialEq for Pos {
    fn eq(&self, _other: &Self) -> bool {
        true
    }
}

impl Eq for Pos {}

/// An identifier together with where it was written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub pos: Pos,
}

impl Ident {
    pub fn new(name: impl Into<String>, pos: Pos) -> Self {
        Ident {
            name: name.into(),
            pos,
        }
    }

    pub fn as_str(&self) -> &str {
        &self.name
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ValueType {
    Int,
    Real,
    Bool,
    String,
}

impl ValueType {
    pub fn is_numeric(self) -> bool {
        matches!(self, ValueType::Int | ValueType::Real)
    }

    /// Whether a value of type `from` may be stored in a slot of type `self`.
    /// Int widens to Real; nothing else converts.
    pub fn accepts(self, from: ValueType) -> bool {
        self == from || (self == ValueType::Real && from == ValueType::Int)
    }

    pub fn keyword(self) -> &'static str {
        match self {
            ValueType::Int => "Int",
            ValueType::Real => "Real",
            ValueType::Bool => "Bool",
            ValueType::String => "String",
        }
    }
}

impl fmt::Display for ValueType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Root of the syntax tree.
#[derive(Clone, Debug)]
pub struct Model {
    pub source_name: String,
    pub things: Vec<Thing>,
    pub configurations: Vec<Configuration>,
}

impl Model {
    pub fn thing(&self, name: &str) -> Option<&Thing> {
        self.things.iter().find(|t| t.name.name == name)
    }

    pub fn configuration(&self, name: &str) -> Option<&Configuration> {
        self.configurations.iter().find(|c| c.name.name == name)
    }

    /// Structural equality: identical ASTs up to source positions. The
    /// source name is not part of the structure.
    pub fn equals_structural(&self, other: &Model) -> bool {
        self.things == other.things && self.configurations == other.configurations
    }
}

/// See [`Model::equals_structural`].
pub fn equals_structural(a: &Model, b: &Model) -> bool {
    a.equals_structural(b)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Thing {
    pub name: Ident,
    pub properties: Vec<Property>,
    pub messages: Vec<Message>,
    pub ports: Vec<Port>,
    pub statechart: Option<StateChart>,
    pub analytics: Vec<DataAnalyticsBlock>,
}

impl Thing {
    pub fn empty(name: Ident) -> Self {
        Thing {
            name,
            properties: Vec::new(),
            messages: Vec::new(),
            ports: Vec::new(),
            statechart: None,
            analytics: Vec::new(),
        }
    }

    pub fn property(&self, name: &str) -> Option<&Property> {
        self.properties.iter().find(|p| p.name.name == name)
    }

    pub fn message(&self, name: &str) -> Option<&Message> {
        self.messages.iter().find(|m| m.name.name == name)
    }

    pub fn port(&self, name: &str) -> Option<&Port> {
        self.ports.iter().find(|p| p.name.name == name)
    }

    pub fn analytics_block(&self, name: &str) -> Option<&DataAnalyticsBlock> {
        self.analytics.iter().find(|d| d.name.name == name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Property {
    pub name: Ident,
    pub ty: ValueType,
    pub initial: Option<Expr>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Message {
    pub name: Ident,
    pub params: Vec<Param>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Param {
    pub name: Ident,
    pub ty: ValueType,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PortDirection {
    Provided,
    Required,
}

impl PortDirection {
    pub fn keyword(self) -> &'static str {
        match self {
            PortDirection::Provided => "provided",
            PortDirection::Required => "required",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Port {
    pub name: Ident,
    pub direction: PortDirection,
    pub sends: Vec<Ident>,
    pub receives: Vec<Ident>,
}

impl Port {
    pub fn sends(&self, message: &str) -> bool {
        self.sends.iter().any(|m| m.name == message)
    }

    pub fn receives(&self, message: &str) -> bool {
        self.receives.iter().any(|m| m.name == message)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateChart {
    pub initial: Ident,
    pub states: Vec<State>,
}

impl StateChart {
    pub fn state(&self, name: &str) -> Option<&State> {
        self.states.iter().find(|s| s.name.name == name)
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s.name.name == name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct State {
    pub name: Ident,
    pub entry: Option<Block>,
    pub exit: Option<Block>,
    /// Declaration order is significant: the first enabled transition fires.
    pub transitions: Vec<Transition>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trigger {
    pub port: Ident,
    pub message: Ident,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TransitionKind {
    External(Ident),
    Internal,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transition {
    pub pos: Pos,
    pub trigger: Option<Trigger>,
    pub guard: Option<Expr>,
    pub kind: TransitionKind,
    pub action: Option<Block>,
}

impl Transition {
    pub fn is_eventless(&self) -> bool {
        self.trigger.is_none()
    }

    pub fn target(&self) -> Option<&Ident> {
        match &self.kind {
            TransitionKind::External(t) => Some(t),
            TransitionKind::Internal => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub stmts: Vec<Stmt>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StmtKind {
    VarDecl {
        name: Ident,
        ty: ValueType,
        init: Expr,
    },
    Assign {
        target: Ident,
        value: Expr,
    },
    Send {
        port: Ident,
        message: Ident,
        args: Vec<Expr>,
    },
    If {
        cond: Expr,
        then_block: Block,
        else_block: Option<Block>,
    },
    While {
        cond: Expr,
        body: Block,
    },
    Print(Expr),
    DaPreprocess(Ident),
    DaTrain(Ident),
    DaPredict(Ident),
    DaSave(Ident, String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

impl Expr {
    pub fn new(kind: ExprKind, pos: Pos) -> Self {
        Expr { kind, pos }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Literal(Literal),
    Name(String),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Now,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Literal {
    Int(i64),
    Real(f64),
    Bool(bool),
    Str(String),
}

impl Literal {
    pub fn value_type(&self) -> ValueType {
        match self {
            Literal::Int(_) => ValueType::Int,
            Literal::Real(_) => ValueType::Real,
            Literal::Bool(_) => ValueType::Bool,
            Literal::Str(_) => ValueType::String,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Literal::Int(i) => Some(i as f64),
            Literal::Real(r) => Some(r),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Not,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    And,
    Or,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Rem => "%",
            BinaryOp::Lt => "<",
            BinaryOp::Le => "<=",
            BinaryOp::Gt => ">",
            BinaryOp::Ge => ">=",
            BinaryOp::Eq => "==",
            BinaryOp::Ne => "!=",
            BinaryOp::And => "and",
            BinaryOp::Or => "or",
        }
    }

    /// Binding strength, loosest first: `or`, `and`, comparisons, `+ -`, `* / %`.
    pub fn precedence(self) -> u8 {
        match self {
            BinaryOp::Or => 1,
            BinaryOp::And => 2,
            BinaryOp::Lt
            | BinaryOp::Le
            | BinaryOp::Gt
            | BinaryOp::Ge
            | BinaryOp::Eq
            | BinaryOp::Ne => 3,
            BinaryOp::Add | BinaryOp::Sub => 4,
            BinaryOp::Mul | BinaryOp::Div | BinaryOp::Rem => 5,
        }
    }

    pub fn is_arithmetic(self) -> bool {
        matches!(
            self,
            BinaryOp::Add | BinaryOp::Sub | BinaryOp::Mul | BinaryOp::Div | BinaryOp::Rem
        )
    }

    pub fn is_ordering(self) -> bool {
        matches!(
            self,
            BinaryOp::Lt | BinaryOp::Le | BinaryOp::Gt | BinaryOp::Ge
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DataAnalyticsBlock {
    pub name: Ident,
    /// Column order of the feature vector.
    pub features: Vec<Ident>,
    pub label: Ident,
    pub dataset: String,
    pub algorithm: AlgorithmSpec,
    pub prediction: Ident,
}

/// An algorithm as written: the kind name is kept verbatim so that unknown
/// kinds can be reported by the validator rather than the parser.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgorithmSpec {
    pub name: Ident,
    pub hyperparameters: Vec<Hyperparameter>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Hyperparameter {
    pub name: Ident,
    pub value: Literal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgorithmKind {
    LinearRegression,
    LogisticRegression,
    GaussianNB,
    Knn,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 4] = [
        AlgorithmKind::LinearRegression,
        AlgorithmKind::LogisticRegression,
        AlgorithmKind::GaussianNB,
        AlgorithmKind::Knn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::LinearRegression => "LinearRegression",
            AlgorithmKind::LogisticRegression => "LogisticRegression",
            AlgorithmKind::GaussianNB => "GaussianNB",
            AlgorithmKind::Knn => "KNN",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Classifiers predict Int labels; regression predicts a Real.
    pub fn prediction_type(self) -> ValueType {
        match self {
            AlgorithmKind::LinearRegression => ValueType::Real,
            _ => ValueType::Int,
        }
    }

    pub fn is_classifier(self) -> bool {
        self != AlgorithmKind::LinearRegression
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A fully resolved algorithm with defaults filled in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Algorithm {
    LinearRegression { lambda: f64 },
    LogisticRegression { lr: f64, epochs: u64 },
    GaussianNB { var_smoothing: f64 },
    Knn { k: usize },
}

impl Algorithm {
    pub fn kind(&self) -> AlgorithmKind {
        match self {
            Algorithm::LinearRegression { .. } => AlgorithmKind::LinearRegression,
            Algorithm::LogisticRegression { .. } => AlgorithmKind::LogisticRegression,
            Algorithm::GaussianNB { .. } => AlgorithmKind::GaussianNB,
            Algorithm::Knn { .. } => AlgorithmKind::Knn,
        }
    }

    pub fn default_for(kind: AlgorithmKind) -> Self {
        match kind {
            AlgorithmKind::LinearRegression => Algorithm::LinearRegression { lambda: 0.0 },
            AlgorithmKind::LogisticRegression => Algorithm::LogisticRegression {
                lr: 0.1,
                epochs: 500,
            },
            AlgorithmKind::GaussianNB => Algorithm::GaussianNB {
                var_smoothing: 1e-9,
            },
            AlgorithmKind::Knn => Algorithm::Knn { k: 3 },
        }
    }
}

/// Why an [`AlgorithmSpec`] could not be resolved.
#[derive(Clone, Debug, PartialEq)]
pub enum AlgorithmError {
    UnknownKind(String),
    UnknownHyperparameter {
        kind: AlgorithmKind,
        name: String,
        pos: Pos,
    },
    DuplicateHyperparameter {
        name: String,
        pos: Pos,
    },
    WrongType {
        name: String,
        expected: ValueType,
        pos: Pos,
    },
    OutOfRange {
        name: String,
        constraint: &'static str,
        pos: Pos,
    },
}

impl fmt::Display for AlgorithmError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgorithmError::UnknownKind(k) => write!(f, "unknown algorithm kind `{k}`"),
            AlgorithmError::UnknownHyperparameter { kind, name, .. } => {
                write!(f, "algorithm {kind} has no hyperparameter `{name}`")
            }
            AlgorithmError::DuplicateHyperparameter { name, .. } => {
                write!(f, "hyperparameter `{name}` given more than once")
            }
            AlgorithmError::WrongType { name, expected, .. } => {
                write!(f, "hyperparameter `{name}` must be of type {expected}")
            }
            AlgorithmError::OutOfRange {
                name, constraint, ..
            } => write!(
                f,
                "hyperparameter `{name}` out of range: requires {constraint}"
            ),
        }
    }
}

impl AlgorithmSpec {
    pub fn kind(&self) -> Option<AlgorithmKind> {
        AlgorithmKind::from_name(&self.name.name)
    }

    /// Resolves the kind and hyperparameters, applying defaults for anything
    /// not written.
    pub fn resolve(&self) -> Result<Algorithm, AlgorithmError> {
        let kind = self
            .kind()
            .ok_or_else(|| AlgorithmError::UnknownKind(self.name.name.clone()))?;
        let mut algorithm = Algorithm::default_for(kind);
        let mut seen: Vec<&str> = Vec::new();
        for hp in &self.hyperparameters {
            let name = hp.name.name.as_str();
            let pos = hp.name.pos;
            if seen.contains(&name) {
                return Err(AlgorithmError::DuplicateHyperparameter {
                    name: name.to_string(),
                    pos,
                });
            }
            seen.push(name);
            let real = |expected| {
                hp.value.as_f64().ok_or(AlgorithmError::WrongType {
                    name: name.to_string(),
                    expected,
                    pos,
                })
            };
            let int = || match hp.value {
                Literal::Int(i) => Ok(i),
                _ => Err(AlgorithmError::WrongType {
                    name: name.to_string(),
                    expected: ValueType::Int,
                    pos,
                }),
            };
            let out_of_range = |constraint| AlgorithmError::OutOfRange {
                name: name.to_string(),
                constraint,
                pos,
            };
            match (&mut algorithm, name) {
                (Algorithm::LinearRegression { lambda }, "lambda") => {
                    let v = real(ValueType::Real)?;
                    if !v.is_finite() || v < 0.0 {
                        return Err(out_of_range("lambda >= 0"));
                    }
                    *lambda = v;
                }
                (Algorithm::LogisticRegression { lr, .. }, "lr") => {
                    let v = real(ValueType::Real)?;
                    if !v.is_finite() || v <= 0.0 {
                        return Err(out_of_range("lr > 0"));
                    }
                    *lr = v;
                }
                (Algorithm::LogisticRegression { epochs, .. }, "epochs") => {
                    let v = int()?;
                    if v < 1 {
                        return Err(out_of_range("epochs >= 1"));
                    }
                    *epochs = v as u64;
                }
                (Algorithm::GaussianNB { var_smoothing }, "var_smoothing") => {
                    let v = real(ValueType::Real)?;
                    if !v.is_finite() || v <= 0.0 {
                        return Err(out_of_range("var_smoothing > 0"));
                    }
                    *var_smoothing = v;
                }
                (Algorithm::Knn { k }, "k") => {
                    let v = int()?;
                    if v < 1 {
                        return Err(out_of_range("k >= 1"));
                    }
                    *k = v as usize;
                }
                _ => {
                    return Err(AlgorithmError::UnknownHyperparameter {
                        kind,
                        name: name.to_string(),
                        pos,
                    })
                }
            }
        }
        Ok(algorithm)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    pub name: Ident,
    pub instances: Vec<Instance>,
    pub connectors: Vec<Connector>,
}

impl Configuration {
    pub fn instance(&self, name: &str) -> Option<&Instance> {
        self.instances.iter().find(|i| i.name.name == name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub name: Ident,
    pub thing: Ident,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Endpoint {
    pub instance: Ident,
    pub port: Ident,
}

impl Endpoint {
    pub fn same_as(&self, other: &Endpoint) -> bool {
        self.instance.name == other.instance.name && self.port.name == other.port.name
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Connector {
    pub pos: Pos,
    pub from: Endpoint,
    pub to: Endpoint,
}
