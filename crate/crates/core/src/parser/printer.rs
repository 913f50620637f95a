use std::fmt::Write;

use crate::ast::*;

const INDENT: &str = "    ";

/// Renders a model in canonical form: 4-space indentation, one declaration
/// per line, a blank line between top-level declarations, members grouped
/// by kind, and minimal parentheses in expressions.
pub fn pretty_print(model: &Model) -> String {
    let mut p = Printer::default();
    let mut first = true;
    for thing in &model.things {
        if !first {
            p.out.push('\n');
        }
        first = false;
        p.thing(thing);
    }
    for config in &model.configurations {
        if !first {
            p.out.push('\n');
        }
        first = false;
        p.configuration(config);
    }
    p.out
}

#[derive(Default)]
struct Printer {
    out: String,
    depth: usize,
}

impl Printer {
    fn line(&mut self, text: &str) {
        for _ in 0..self.depth {
            self.out.push_str(INDENT);
        }
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn open(&mut self, header: &str) {
        self.line(&format!("{header} {{"));
        self.depth += 1;
    }

    fn close(&mut self) {
        self.depth -= 1;
        self.line("}");
    }

    fn thing(&mut self, t: &Thing) {
        self.open(&format!("thing {}", t.name));
        for prop in &t.properties {
            let mut s = format!("property {} : {}", prop.name, prop.ty);
            if let Some(init) = &prop.initial {
                s.push_str(" = ");
                s.push_str(&expr_to_string(init));
            }
            self.line(&s);
        }
        for msg in &t.messages {
            let params: Vec<String> = msg
                .params
                .iter()
                .map(|p| format!("{} : {}", p.name, p.ty))
                .collect();
            self.line(&format!("message {}({})", msg.name, params.join(", ")));
        }
        for port in &t.ports {
            self.open(&format!("{} port {}", port.direction.keyword(), port.name));
            if !port.sends.is_empty() {
                self.line(&format!("sends {}", join_idents(&port.sends)));
            }
            if !port.receives.is_empty() {
                self.line(&format!("receives {}", join_idents(&port.receives)));
            }
            self.close();
        }
        if let Some(sc) = &t.statechart {
            self.statechart(sc);
        }
        for da in &t.analytics {
            self.analytics(da);
        }
        self.close();
    }

    fn statechart(&mut self, sc: &StateChart) {
        self.open(&format!("statechart init {}", sc.initial));
        for state in &sc.states {
            self.open(&format!("state {}", state.name));
            if let Some(entry) = &state.entry {
                self.block("entry", entry);
            }
            if let Some(exit) = &state.exit {
                self.block("exit", exit);
            }
            for tr in &state.transitions {
                self.transition(tr);
            }
            self.close();
        }
        self.close();
    }

    fn transition(&mut self, tr: &Transition) {
        let mut head = String::from("transition");
        if let Some(trig) = &tr.trigger {
            let _ = write!(head, " event {}?{}", trig.port, trig.message);
        }
        if let Some(g) = &tr.guard {
            let _ = write!(head, " guard {}", expr_to_string(g));
        }
        match &tr.kind {
            TransitionKind::External(target) => {
                let _ = write!(head, " -> {target}");
            }
            TransitionKind::Internal => head.push_str(" internal"),
        }
        match &tr.action {
            Some(action) => {
                head.push_str(" action");
                self.block(&head, action);
            }
            None => self.line(&head),
        }
    }

    fn analytics(&mut self, da: &DataAnalyticsBlock) {
        self.open(&format!("data_analytics {}", da.name));
        self.line(&format!("features: {}", join_idents(&da.features)));
        self.line(&format!("label: {}", da.label));
        self.line(&format!("dataset: {}", quote(&da.dataset)));
        let mut alg = format!("algorithm: {}", da.algorithm.name);
        if !da.algorithm.hyperparameters.is_empty() {
            let hps: Vec<String> = da
                .algorithm
                .hyperparameters
                .iter()
                .map(|hp| format!("{} = {}", hp.name, literal_to_string(&hp.value)))
                .collect();
            let _ = write!(alg, "({})", hps.join(", "));
        }
        self.line(&alg);
        self.line(&format!("prediction: {}", da.prediction));
        self.close();
    }

    fn configuration(&mut self, c: &Configuration) {
        self.open(&format!("configuration {}", c.name));
        for inst in &c.instances {
            self.line(&format!("instance {} : {}", inst.name, inst.thing));
        }
        for conn in &c.connectors {
            self.line(&format!(
                "connector {}.{} => {}.{}",
                conn.from.instance, conn.from.port, conn.to.instance, conn.to.port
            ));
        }
        self.close();
    }

    fn block(&mut self, header: &str, block: &Block) {
        self.open(header);
        self.stmts(block);
        self.close();
    }

    fn stmts(&mut self, block: &Block) {
        for stmt in &block.stmts {
            self.stmt(stmt);
        }
    }

    fn stmt(&mut self, stmt: &Stmt) {
        match &stmt.kind {
            StmtKind::VarDecl { name, ty, init } => {
                self.line(&format!("var {name} : {ty} = {};", expr_to_string(init)))
            }
            StmtKind::Assign { target, value } => {
                self.line(&format!("{target} = {};", expr_to_string(value)))
            }
            StmtKind::Send {
                port,
                message,
                args,
            } => {
                let args: Vec<String> = args.iter().map(expr_to_string).collect();
                self.line(&format!("{port}!{message}({});", args.join(", ")));
            }
            StmtKind::If {
                cond,
                then_block,
                else_block,
            } => {
                self.open(&format!("if ({})", expr_to_string(cond)));
                self.stmts(then_block);
                if let Some(else_block) = else_block {
                    self.depth -= 1;
                    self.line("} else {");
                    self.depth += 1;
                    self.stmts(else_block);
                }
                self.close();
            }
            StmtKind::While { cond, body } => {
                self.block(&format!("while ({})", expr_to_string(cond)), body)
            }
            StmtKind::Print(e) => self.line(&format!("print({});", expr_to_string(e))),
            StmtKind::DaPreprocess(da) => self.line(&format!("da_preprocess({da});")),
            StmtKind::DaTrain(da) => self.line(&format!("da_train({da});")),
            StmtKind::DaPredict(da) => self.line(&format!("da_predict({da});")),
            StmtKind::DaSave(da, path) => self.line(&format!("da_save({da}, {});", quote(path))),
        }
    }
}

fn join_idents(ids: &[Ident]) -> String {
    ids.iter()
        .map(|i| i.name.as_str())
        .collect::<Vec<_>>()
        .join(", ")
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Shortest round-trip rendering that always carries a decimal point, so the
/// lexer reads it back as a Real.
pub(crate) fn real_to_string(r: f64) -> String {
    let s = format!("{r:?}");
    if s.contains('.') || !r.is_finite() {
        s
    } else if let Some(e) = s.find('e') {
        format!("{}.0{}", &s[..e], &s[e..])
    } else {
        format!("{s}.0")
    }
}

fn literal_to_string(lit: &Literal) -> String {
    match lit {
        Literal::Int(i) => i.to_string(),
        Literal::Real(r) => real_to_string(*r),
        Literal::Bool(b) => b.to_string(),
        Literal::Str(s) => quote(s),
    }
}

const UNARY_PREC: u8 = 6;

pub(crate) fn expr_to_string(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e, 0);
    out
}

fn write_expr(out: &mut String, e: &Expr, min_prec: u8) {
    match &e.kind {
        ExprKind::Literal(lit) => out.push_str(&literal_to_string(lit)),
        ExprKind::Name(n) => out.push_str(n),
        ExprKind::Now => out.push_str("Now()"),
        ExprKind::Unary(op, operand) => {
            out.push_str(match op {
                UnaryOp::Neg => "-",
                UnaryOp::Not => "not ",
            });
            write_expr(out, operand, UNARY_PREC);
        }
        ExprKind::Binary(op, lhs, rhs) => {
            let prec = op.precedence();
            let parens = prec < min_prec;
            if parens {
                out.push('(');
            }
            write_expr(out, lhs, prec);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            write_expr(out, rhs, prec + 1);
            if parens {
                out.push(')');
            }
        }
    }
}
