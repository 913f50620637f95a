//! Recursive-descent parser for `.tml2` sources and the canonical printer.
//!
//! ```text
//! model         = { thing | configuration } ;
//! thing         = "thing" IDENT "{" { member } "}" ;
//! member        = property | message | port | statechart | analytics ;
//! property      = "property" IDENT ":" type [ "=" expr ] ;
//! message       = "message" IDENT "(" [ param { "," param } ] ")" ;
//! port          = ( "provided" | "required" ) "port" IDENT "{"
//!                   [ "sends" identlist ] [ "receives" identlist ] "}" ;
//! statechart    = "statechart" "init" IDENT "{" { state } "}" ;
//! state         = "state" IDENT "{" [ "entry" block ] [ "exit" block ] { transition } "}" ;
//! transition    = "transition" [ "event" IDENT "?" IDENT ] [ "guard" expr ]
//!                 ( "->" IDENT | "internal" ) [ "action" block ] ;
//! analytics     = "data_analytics" IDENT "{" da_field { da_field } "}" ;
//! configuration = "configuration" IDENT "{" { instance | connector } "}" ;
//! ```
//!
//! On a syntax error the parser records a diagnostic and resumes at the next
//! `thing` or `configuration` keyword, so one pass can report several errors.

mod lexer;
mod printer;

pub use lexer::{tokenize, Keyword, LexError, Token, TokenKind};
pub use printer::pretty_print;
pub(crate) use printer::real_to_string;

use crate::ast::*;
use crate::diagnostic::{Code, Diagnostic};

type PResult<T> = Result<T, ()>;

/// Parses a whole source file.
pub fn parse(source: &str, source_name: &str) -> Result<Model, Vec<Diagnostic>> {
    let (tokens, lex_errors) = tokenize(source);
    let mut parser = Parser {
        tokens: &tokens,
        index: 0,
        file: source_name,
        diagnostics: lex_errors
            .into_iter()
            .map(|e| Diagnostic::new(e.code, source_name, e.pos, e.message))
            .collect(),
    };
    let model = parser.model();
    let mut diagnostics = parser.diagnostics;
    if diagnostics.is_empty() {
        Ok(model)
    } else {
        diagnostics.sort_by_key(|d| (d.line, d.column));
        Err(diagnostics)
    }
}

struct Parser<'a> {
    tokens: &'a [Token],
    index: usize,
    file: &'a str,
    diagnostics: Vec<Diagnostic>,
}

impl Parser<'_> {
    fn peek(&self) -> &TokenKind {
        &self.tokens[self.index].kind
    }

    fn peek_at(&self, offset: usize) -> &TokenKind {
        let i = (self.index + offset).min(self.tokens.len() - 1);
        &self.tokens[i].kind
    }

    fn pos(&self) -> Pos {
        self.tokens[self.index].pos
    }

    fn advance(&mut self) -> &Token {
        let tok = &self.tokens[self.index];
        if self.index + 1 < self.tokens.len() {
            self.index += 1;
        }
        tok
    }

    fn at(&self, kind: &TokenKind) -> bool {
        self.peek() == kind
    }

    fn at_kw(&self, kw: Keyword) -> bool {
        matches!(self.peek(), TokenKind::Keyword(k) if *k == kw)
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.at(kind) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, kw: Keyword) -> bool {
        if self.at_kw(kw) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn report(&mut self, code: Code, pos: Pos, message: impl Into<String>) {
        self.diagnostics
            .push(Diagnostic::new(code, self.file, pos, message));
    }

    fn unexpected<T>(&mut self, expected: &str) -> PResult<T> {
        let found = self.peek().describe();
        let pos = self.pos();
        self.report(
            Code::P001,
            pos,
            format!("expected {expected}, found {found}"),
        );
        Err(())
    }

    fn expect(&mut self, kind: TokenKind) -> PResult<Pos> {
        if self.at(&kind) {
            Ok(self.advance().pos)
        } else {
            self.unexpected(&format!("`{}`", kind.symbol()))
        }
    }

    fn expect_kw(&mut self, kw: Keyword) -> PResult<Pos> {
        if self.at_kw(kw) {
            Ok(self.advance().pos)
        } else {
            self.unexpected(&format!("`{}`", kw.as_str()))
        }
    }

    fn ident(&mut self) -> PResult<Ident> {
        if let TokenKind::Ident(name) = self.peek() {
            let name = name.clone();
            let pos = self.advance().pos;
            Ok(Ident::new(name, pos))
        } else {
            self.unexpected("identifier")
        }
    }

    fn string(&mut self) -> PResult<String> {
        if let TokenKind::Str(s) = self.peek() {
            let s = s.clone();
            self.advance();
            Ok(s)
        } else {
            self.unexpected("string literal")
        }
    }

    fn ident_list(&mut self) -> PResult<Vec<Ident>> {
        let mut list = vec![self.ident()?];
        while self.eat(&TokenKind::Comma) {
            list.push(self.ident()?);
        }
        Ok(list)
    }

    fn recover(&mut self) {
        while !matches!(
            self.peek(),
            TokenKind::Eof | TokenKind::Keyword(Keyword::Thing | Keyword::Configuration)
        ) {
            self.advance();
        }
    }

    fn model(&mut self) -> Model {
        let mut things = Vec::new();
        let mut configurations = Vec::new();
        loop {
            match self.peek() {
                TokenKind::Eof => break,
                TokenKind::Keyword(Keyword::Thing) => match self.thing() {
                    Ok(t) => things.push(t),
                    Err(()) => self.recover(),
                },
                TokenKind::Keyword(Keyword::Configuration) => match self.configuration() {
                    Ok(c) => configurations.push(c),
                    Err(()) => self.recover(),
                },
                _ => {
                    let _ = self.unexpected::<()>("`thing` or `configuration`");
                    self.advance();
                    self.recover();
                }
            }
        }
        Model {
            source_name: self.file.to_string(),
            things,
            configurations,
        }
    }

    fn thing(&mut self) -> PResult<Thing> {
        self.expect_kw(Keyword::Thing)?;
        let mut thing = Thing::empty(self.ident()?);
        self.expect(TokenKind::LBrace)?;
        loop {
            match self.peek() {
                TokenKind::RBrace => {
                    self.advance();
                    return Ok(thing);
                }
                TokenKind::Keyword(Keyword::Property) => thing.properties.push(self.property()?),
                TokenKind::Keyword(Keyword::Message) => thing.messages.push(self.message()?),
                TokenKind::Keyword(Keyword::Provided | Keyword::Required) => {
                    thing.ports.push(self.port()?)
                }
                TokenKind::Keyword(Keyword::Statechart) => {
                    let pos = self.pos();
                    let chart = self.statechart()?;
                    if thing.statechart.is_some() {
                        self.report(
                            Code::P001,
                            pos,
                            format!("thing `{}` already has a statechart", thing.name),
                        );
                    } else {
                        thing.statechart = Some(chart);
                    }
                }
                TokenKind::Keyword(Keyword::DataAnalytics) => {
                    thing.analytics.push(self.analytics()?)
                }
                _ => return self.unexpected("thing member or `}`"),
            }
        }
    }

    fn value_type(&mut self) -> PResult<ValueType> {
        let ty = match self.peek() {
            TokenKind::Keyword(Keyword::Int) => ValueType::Int,
            TokenKind::Keyword(Keyword::Real) => ValueType::Real,
            TokenKind::Keyword(Keyword::Bool) => ValueType::Bool,
            TokenKind::Keyword(Keyword::String) => ValueType::String,
            _ => return self.unexpected("type (`Int`, `Real`, `Bool` or `String`)"),
        };
        self.advance();
        Ok(ty)
    }

    fn property(&mut self) -> PResult<Property> {
        self.expect_kw(Keyword::Property)?;
        let name = self.ident()?;
        self.expect(TokenKind::Colon)?;
        let ty = self.value_type()?;
        let initial = if self.eat(&TokenKind::Assign) {
            Some(self.expr()?)
        } else {
            None
        };
        Ok(Property { name, ty, initial })
    }

    fn message(&mut self) -> PResult<Message> {
        self.expect_kw(Keyword::Message)?;
        let name = self.ident()?;
        self.expect(TokenKind::LParen)?;
        let mut params = Vec::new();
        if !self.at(&TokenKind::RParen) {
            loop {
                let name = self.ident()?;
                self.expect(TokenKind::Colon)?;
                params.push(Param {
                    name,
                    ty: self.value_type()?,
                });
                if !self.eat(&TokenKind::Comma) {
                    break;
                }
            }
        }
        self.expect(TokenKind::RParen)?;
        Ok(Message { name, params })
    }

    fn port(&mut self) -> PResult<Port> {
        let direction = if self.eat_kw(Keyword::Provided) {
            PortDirection::Provided
        } else {
            self.expect_kw(Keyword::Required)?;
            PortDirection::Required
        };
        self.expect_kw(Keyword::Port)?;
        let name = self.ident()?;
        self.expect(TokenKind::LBrace)?;
        let sends = if self.eat_kw(Keyword::Sends) {
            self.ident_list()?
        } else {
            Vec::new()
        };
        let receives = if self.eat_kw(Keyword::Receives) {
            self.ident_list()?
        } else {
            Vec::new()
        };
        self.expect(TokenKind::RBrace)?;
        Ok(Port {
            name,
            direction,
            sends,
            receives,
        })
    }

    fn statechart(&mut self) -> PResult<StateChart> {
        self.expect_kw(Keyword::Statechart)?;
        self.expect_kw(Keyword::Init)?;
        let initial = self.ident()?;
        self.expect(TokenKind::LBrace)?;
        let mut states = Vec::new();
        while !self.eat(&TokenKind::RBrace) {
            if !self.at_kw(Keyword::State) {
                return self.unexpected("`state` or `}`");
            }
            states.push(self.state()?);
        }
        Ok(StateChart { initial, states })
    }

    fn state(&mut self) -> PResult<State> {
        self.expect_kw(Keyword::State)?;
        let name = self.ident()?;
        self.expect(TokenKind::LBrace)?;
        let entry = if self.eat_kw(Keyword::Entry) {
            Some(self.block()?)
        } else {
            None
        };
        let exit = if self.eat_kw(Keyword::Exit) {
            Some(self.block()?)
        } else {
            None
        };
        let mut transitions = Vec::new();
        while !self.eat(&TokenKind::RBrace) {
            if !self.at_kw(Keyword::Transition) {
                return self.unexpected("`transition` or `}`");
            }
            transitions.push(self.transition()?);
        }
        Ok(State {
            name,
            entry,
            exit,
            transitions,
        })
    }

    fn transition(&mut self) -> PResult<Transition> {
        let pos = self.expect_kw(Keyword::Transition)?;
        let trigger = if self.eat_kw(Keyword::Event) {
            let port = self.ident()?;
            self.expect(TokenKind::Question)?;
            let message = self.ident()?;
            Some(Trigger { port, message })
        } else {
            None
        };
        let guard = if self.eat_kw(Keyword::Guard) {
            Some(self.expr()?)
        } else {
            None
        };
        let kind = if self.eat(&TokenKind::Arrow) {
            TransitionKind::External(self.ident()?)
        } else if self.eat_kw(Keyword::Internal) {
            TransitionKind::Internal
        } else {
            return self.unexpected("`->` or `internal`");
        };
        let action = if self.eat_kw(Keyword::Action) {
            Some(self.block()?)
        } else {
            None
        };
        Ok(Transition {
            pos,
            trigger,
            guard,
            kind,
            action,
        })
    }

    fn analytics(&mut self) -> PResult<DataAnalyticsBlock> {
        let start = self.expect_kw(Keyword::DataAnalytics)?;
        let name = self.ident()?;
        self.expect(TokenKind::LBrace)?;
        let mut features = None;
        let mut label = None;
        let mut dataset = None;
        let mut algorithm = None;
        let mut prediction = None;
        loop {
            let pos = self.pos();
            let field = match self.peek() {
                TokenKind::Keyword(
                    k @ (Keyword::Features
                    | Keyword::Label
                    | Keyword::Dataset
                    | Keyword::Algorithm
                    | Keyword::Prediction),
                ) => *k,
                TokenKind::RBrace => break,
                _ => return self.unexpected("data_analytics field"),
            };
            self.advance();
            self.expect(TokenKind::Colon)?;
            let duplicate = match field {
                Keyword::Features => features.replace(self.ident_list()?).is_some(),
                Keyword::Label => label.replace(self.ident()?).is_some(),
                Keyword::Dataset => dataset.replace(self.string()?).is_some(),
                Keyword::Algorithm => algorithm.replace(self.algorithm()?).is_some(),
                _ => prediction.replace(self.ident()?).is_some(),
            };
            if duplicate {
                self.report(
                    Code::P001,
                    pos,
                    format!(
                        "duplicate `{}` field in data_analytics `{name}`",
                        field.as_str()
                    ),
                );
            }
        }
        let close = self.expect(TokenKind::RBrace)?;
        let mut missing = Vec::new();
        if features.is_none() {
            missing.push("features");
        }
        if label.is_none() {
            missing.push("label");
        }
        if dataset.is_none() {
            missing.push("dataset");
        }
        if algorithm.is_none() {
            missing.push("algorithm");
        }
        if prediction.is_none() {
            missing.push("prediction");
        }
        if !missing.is_empty() {
            self.report(
                Code::P001,
                close,
                format!(
                    "data_analytics `{name}` (line {}) is missing field(s): {}",
                    start.line,
                    missing.join(", ")
                ),
            );
            return Err(());
        }
        Ok(DataAnalyticsBlock {
            name,
            features: features.unwrap_or_default(),
            label: label.ok_or(())?,
            dataset: dataset.unwrap_or_default(),
            algorithm: algorithm.ok_or(())?,
            prediction: prediction.ok_or(())?,
        })
    }

    fn algorithm(&mut self) -> PResult<AlgorithmSpec> {
        let name = self.ident()?;
        let mut hyperparameters = Vec::new();
        if self.eat(&TokenKind::LParen) {
            loop {
                let hp = self.ident()?;
                self.expect(TokenKind::Assign)?;
                let value = self.literal()?;
                hyperparameters.push(Hyperparameter { name: hp, value });
                if !self.eat(&TokenKind::Comma) {
                    break;
                }
            }
            self.expect(TokenKind::RParen)?;
        }
        Ok(AlgorithmSpec {
            name,
            hyperparameters,
        })
    }

    /// A literal, allowing a leading minus on numbers.
    fn literal(&mut self) -> PResult<Literal> {
        let negative = self.eat(&TokenKind::Minus);
        let lit = match self.peek().clone() {
            TokenKind::Int(i) => Literal::Int(if negative { i.wrapping_neg() } else { i }),
            TokenKind::Real(r) => Literal::Real(if negative { -r } else { r }),
            TokenKind::Str(s) if !negative => Literal::Str(s),
            TokenKind::Keyword(Keyword::True) if !negative => Literal::Bool(true),
            TokenKind::Keyword(Keyword::False) if !negative => Literal::Bool(false),
            _ => return self.unexpected("literal"),
        };
        self.advance();
        Ok(lit)
    }

    fn configuration(&mut self) -> PResult<Configuration> {
        self.expect_kw(Keyword::Configuration)?;
        let name = self.ident()?;
        self.expect(TokenKind::LBrace)?;
        let mut instances = Vec::new();
        let mut connectors = Vec::new();
        loop {
            match self.peek() {
                TokenKind::RBrace => {
                    self.advance();
                    break;
                }
                TokenKind::Keyword(Keyword::Instance) => {
                    self.advance();
                    let name = self.ident()?;
                    self.expect(TokenKind::Colon)?;
                    let thing = self.ident()?;
                    instances.push(Instance { name, thing });
                }
                TokenKind::Keyword(Keyword::Connector) => {
                    let pos = self.advance().pos;
                    let from = self.endpoint()?;
                    self.expect(TokenKind::FatArrow)?;
                    let to = self.endpoint()?;
                    connectors.push(Connector { pos, from, to });
                }
                _ => return self.unexpected("`instance`, `connector` or `}`"),
            }
        }
        Ok(Configuration {
            name,
            instances,
            connectors,
        })
    }

    fn endpoint(&mut self) -> PResult<Endpoint> {
        let instance = self.ident()?;
        self.expect(TokenKind::Dot)?;
        let port = self.ident()?;
        Ok(Endpoint { instance, port })
    }

    fn block(&mut self) -> PResult<Block> {
        self.expect(TokenKind::LBrace)?;
        let mut stmts = Vec::new();
        while !self.eat(&TokenKind::RBrace) {
            stmts.push(self.stmt()?);
        }
        Ok(Block { stmts })
    }

    fn da_target(&mut self) -> PResult<Ident> {
        self.expect(TokenKind::LParen)?;
        self.ident()
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        let pos = self.pos();
        let kind = match self.peek().clone() {
            TokenKind::Keyword(Keyword::Var) => {
                self.advance();
                let name = self.ident()?;
                self.expect(TokenKind::Colon)?;
                let ty = self.value_type()?;
                self.expect(TokenKind::Assign)?;
                let init = self.expr()?;
                self.expect(TokenKind::Semi)?;
                StmtKind::VarDecl { name, ty, init }
            }
            TokenKind::Keyword(Keyword::If) => {
                self.advance();
                self.expect(TokenKind::LParen)?;
                let cond = self.expr()?;
                self.expect(TokenKind::RParen)?;
                let then_block = self.block()?;
                let else_block = if self.eat_kw(Keyword::Else) {
                    Some(self.block()?)
                } else {
                    None
                };
                StmtKind::If {
                    cond,
                    then_block,
                    else_block,
                }
            }
            TokenKind::Keyword(Keyword::While) => {
                self.advance();
                self.expect(TokenKind::LParen)?;
                let cond = self.expr()?;
                self.expect(TokenKind::RParen)?;
                StmtKind::While {
                    cond,
                    body: self.block()?,
                }
            }
            TokenKind::Keyword(Keyword::Print) => {
                self.advance();
                self.expect(TokenKind::LParen)?;
                let e = self.expr()?;
                self.expect(TokenKind::RParen)?;
                self.expect(TokenKind::Semi)?;
                StmtKind::Print(e)
            }
            TokenKind::Keyword(
                kw @ (Keyword::DaPreprocess | Keyword::DaTrain | Keyword::DaPredict),
            ) => {
                self.advance();
                let da = self.da_target()?;
                self.expect(TokenKind::RParen)?;
                self.expect(TokenKind::Semi)?;
                match kw {
                    Keyword::DaPreprocess => StmtKind::DaPreprocess(da),
                    Keyword::DaTrain => StmtKind::DaTrain(da),
                    _ => StmtKind::DaPredict(da),
                }
            }
            TokenKind::Keyword(Keyword::DaSave) => {
                self.advance();
                let da = self.da_target()?;
                self.expect(TokenKind::Comma)?;
                let path = self.string()?;
                self.expect(TokenKind::RParen)?;
                self.expect(TokenKind::Semi)?;
                StmtKind::DaSave(da, path)
            }
            TokenKind::Ident(word) => match self.peek_at(1) {
                TokenKind::Assign => {
                    let target = self.ident()?;
                    self.advance();
                    let value = self.expr()?;
                    self.expect(TokenKind::Semi)?;
                    StmtKind::Assign { target, value }
                }
                TokenKind::Bang => {
                    let port = self.ident()?;
                    self.advance();
                    let message = self.ident()?;
                    self.expect(TokenKind::LParen)?;
                    let mut args = Vec::new();
                    if !self.at(&TokenKind::RParen) {
                        loop {
                            args.push(self.expr()?);
                            if !self.eat(&TokenKind::Comma) {
                                break;
                            }
                        }
                    }
                    self.expect(TokenKind::RParen)?;
                    self.expect(TokenKind::Semi)?;
                    StmtKind::Send {
                        port,
                        message,
                        args,
                    }
                }
                _ => {
                    self.report(Code::P004, pos, format!("unknown statement `{word}`"));
                    return Err(());
                }
            },
            _ => return self.unexpected("statement or `}`"),
        };
        Ok(Stmt { kind, pos })
    }

    pub fn expr(&mut self) -> PResult<Expr> {
        self.binary(1)
    }

    fn binary_op(&self) -> Option<BinaryOp> {
        Some(match self.peek() {
            TokenKind::Keyword(Keyword::Or) => BinaryOp::Or,
            TokenKind::Keyword(Keyword::And) => BinaryOp::And,
            TokenKind::Lt => BinaryOp::Lt,
            TokenKind::Le => BinaryOp::Le,
            TokenKind::Gt => BinaryOp::Gt,
            TokenKind::Ge => BinaryOp::Ge,
            TokenKind::EqEq => BinaryOp::Eq,
            TokenKind::NotEq => BinaryOp::Ne,
            TokenKind::Plus => BinaryOp::Add,
            TokenKind::Minus => BinaryOp::Sub,
            TokenKind::Star => BinaryOp::Mul,
            TokenKind::Slash => BinaryOp::Div,
            TokenKind::Percent => BinaryOp::Rem,
            _ => return None,
        })
    }

    /// Precedence climbing; every binary level is left-associative.
    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.binary_op().filter(|op| op.precedence() >= min_prec) {
            let pos = self.advance().pos;
            let rhs = self.binary(op.precedence() + 1)?;
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), pos);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        let pos = self.pos();
        let op = match self.peek() {
            TokenKind::Minus => UnaryOp::Neg,
            TokenKind::Keyword(Keyword::Not) => UnaryOp::Not,
            _ => return self.primary(),
        };
        self.advance();
        let operand = self.unary()?;
        Ok(Expr::new(ExprKind::Unary(op, Box::new(operand)), pos))
    }

    fn primary(&mut self) -> PResult<Expr> {
        let pos = self.pos();
        let kind = match self.peek().clone() {
            TokenKind::Int(i) => ExprKind::Literal(Literal::Int(i)),
            TokenKind::Real(r) => ExprKind::Literal(Literal::Real(r)),
            TokenKind::Str(s) => ExprKind::Literal(Literal::Str(s)),
            TokenKind::Keyword(Keyword::True) => ExprKind::Literal(Literal::Bool(true)),
            TokenKind::Keyword(Keyword::False) => ExprKind::Literal(Literal::Bool(false)),
            TokenKind::Ident(name) => ExprKind::Name(name),
            TokenKind::Keyword(Keyword::Now) => {
                self.advance();
                self.expect(TokenKind::LParen)?;
                self.expect(TokenKind::RParen)?;
                return Ok(Expr::new(ExprKind::Now, pos));
            }
            TokenKind::LParen => {
                self.advance();
                let inner = self.expr()?;
                self.expect(TokenKind::RParen)?;
                return Ok(inner);
            }
            _ => return self.unexpected("expression"),
        };
        self.advance();
        Ok(Expr::new(kind, pos))
    }
}

/// Parses a single expression; used by tests and tools.
pub fn parse_expr(source: &str) -> Result<Expr, Vec<Diagnostic>> {
    let (tokens, lex_errors) = tokenize(source);
    let mut parser = Parser {
        tokens: &tokens,
        index: 0,
        file: "<expr>",
        diagnostics: lex_errors
            .into_iter()
            .map(|e| Diagnostic::new(e.code, "<expr>", e.pos, e.message))
            .collect(),
    };
    let result = parser.expr();
    if result.is_ok() && !parser.at(&TokenKind::Eof) {
        let _ = parser.unexpected::<()>("end of expression");
    }
    match result {
        Ok(e) if parser.diagnostics.is_empty() => Ok(e),
        _ => Err(parser.diagnostics),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(src: &str) -> Model {
        parse(src, "t.tml2").unwrap_or_else(|d| panic!("{d:#?}"))
    }

    fn errs(src: &str) -> Vec<Diagnostic> {
        parse(src, "t.tml2").expect_err("should fail")
    }

    #[test]
    fn minimal_thing() {
        let m = ok("thing T {}");
        assert_eq!(m.things.len(), 1);
        let t = &m.things[0];
        assert_eq!(t.name.name, "T");
        assert!(t.properties.is_empty() && t.messages.is_empty() && t.ports.is_empty());
        assert!(t.statechart.is_none() && t.analytics.is_empty());
    }

    #[test]
    fn unclosed_thing_reports_one_error_at_eof() {
        let d = errs("thing T {");
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, Code::P001);
        assert_eq!((d[0].line, d[0].column), (1, 10));
    }

    #[test]
    fn recovery_reports_multiple_errors() {
        let d = errs("thing A { property x Int }\nthing B { bogus }\nthing C {}");
        assert_eq!(d.len(), 2);
        assert!(d.iter().all(|d| d.code == Code::P001));
        assert_eq!(d[0].line, 1);
        assert_eq!(d[1].line, 2);
    }

    #[test]
    fn unknown_statement_keyword() {
        let d = errs("thing T { statechart init S { state S { entry { return 1; } } } }");
        assert_eq!(d[0].code, Code::P004);
        assert_eq!((d[0].line, d[0].column), (1, 49));
    }

    #[test]
    fn lexical_errors_surface() {
        assert_eq!(
            errs("thing T { property s : String = \"abc }")[0].code,
            Code::P002
        );
        assert_eq!(
            errs("thing T { property i : Int = 9223372036854775808 }")[0].code,
            Code::P003
        );
    }

    #[test]
    fn keywords_are_reserved() {
        let d = errs("thing state {}");
        assert_eq!(d[0].code, Code::P001);
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse_expr("1 + 2 * 3 - 4").unwrap();
        // ((1 + (2 * 3)) - 4)
        let ExprKind::Binary(BinaryOp::Sub, lhs, _) = &e.kind else {
            panic!()
        };
        assert!(matches!(lhs.kind, ExprKind::Binary(BinaryOp::Add, _, _)));
        let e = parse_expr("a or b and not c == d").unwrap();
        let ExprKind::Binary(BinaryOp::Or, _, rhs) = &e.kind else {
            panic!()
        };
        let ExprKind::Binary(BinaryOp::And, _, rhs) = &rhs.kind else {
            panic!()
        };
        // unary binds tightest: (not c) == d
        let ExprKind::Binary(BinaryOp::Eq, lhs, _) = &rhs.kind else {
            panic!()
        };
        assert!(matches!(lhs.kind, ExprKind::Unary(UnaryOp::Not, _)));
    }

    #[test]
    fn full_thing() {
        let m = ok(r#"
            thing S {
                property n : Int = 0
                message ping()
                message pong(v : Real, tag : String)
                provided port p { sends pong receives ping }
                required port q { }
                statechart init A {
                    state A {
                        entry { var x : Int = 1; n = n + x; }
                        transition event p?ping guard n < 3 -> B action { p!pong(1.5, "x"); }
                        transition internal
                    }
                    state B { }
                }
                data_analytics d {
                    features: n
                    label: n
                    dataset: "d.csv"
                    algorithm: KNN(k = 1)
                    prediction: n
                }
            }
            configuration c {
                instance s : S
                connector s.p => s.q
            }
        "#);
        let t = &m.things[0];
        assert_eq!(t.messages[1].params.len(), 2);
        assert_eq!(t.ports[0].direction, PortDirection::Provided);
        let sc = t.statechart.as_ref().unwrap();
        assert_eq!(sc.states.len(), 2);
        assert_eq!(sc.states[0].transitions.len(), 2);
        assert_eq!(
            t.analytics[0].algorithm.hyperparameters[0].value,
            Literal::Int(1)
        );
        assert_eq!(m.configurations[0].connectors.len(), 1);
    }

    #[test]
    fn data_analytics_missing_field() {
        let d = errs("thing T { data_analytics d { features: a label: b } }");
        assert_eq!(d.len(), 1);
        assert!(
            d[0].message.contains("dataset, algorithm, prediction"),
            "{}",
            d[0].message
        );
    }

    #[test]
    fn negative_hyperparameter_literal() {
        let m = ok(
            r#"thing T { data_analytics d { features: a label: b dataset: "x"
            algorithm: LinearRegression(lambda = -1.0) prediction: c } }"#,
        );
        assert_eq!(
            m.things[0].analytics[0].algorithm.hyperparameters[0].value,
            Literal::Real(-1.0)
        );
    }
}
