//! Cross-reference, typing and well-formedness checks.
//!
//! A model that validates with `ok == true` can be simulated without any
//! name-resolution or static-type failure; only dynamic errors (division by
//! zero, livelock, I/O) remain possible.

use std::collections::{HashMap, HashSet};

use crate::ast::*;
use crate::diagnostic::{Code, Diagnostic, Severity};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    /// Sorted by (file, line, column).
    pub diagnostics: Vec<Diagnostic>,
    pub ok: bool,
}

impl ValidationReport {
    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(|d| d.is_error())
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics
            .iter()
            .filter(|d| d.severity == Severity::Warning)
    }

    pub fn codes(&self) -> Vec<Code> {
        self.diagnostics.iter().map(|d| d.code).collect()
    }
}

pub fn validate(model: &Model) -> ValidationReport {
    let mut v = Validator {
        file: &model.source_name,
        diagnostics: Vec::new(),
    };
    v.model(model);
    let mut diagnostics = v.diagnostics;
    diagnostics.sort_by(|a, b| (&a.file, a.line, a.column).cmp(&(&b.file, b.line, b.column)));
    let ok = !diagnostics.iter().any(Diagnostic::is_error);
    ValidationReport { diagnostics, ok }
}

struct Validator<'a> {
    file: &'a str,
    diagnostics: Vec<Diagnostic>,
}

/// Name scope for type checking inside one thing.
struct Scope<'a> {
    thing: &'a Thing,
    /// Properties visible here; initializers only see earlier properties.
    properties: &'a [Property],
    params: &'a [Param],
    locals: Vec<Vec<(String, ValueType)>>,
}

enum Binding {
    Local(ValueType),
    Param(ValueType),
    Property(ValueType),
}

impl Scope<'_> {
    fn lookup(&self, name: &str) -> Option<Binding> {
        for frame in self.locals.iter().rev() {
            if let Some((_, ty)) = frame.iter().rev().find(|(n, _)| n == name) {
                return Some(Binding::Local(*ty));
            }
        }
        if let Some(p) = self.params.iter().find(|p| p.name.name == name) {
            return Some(Binding::Param(p.ty));
        }
        self.properties
            .iter()
            .find(|p| p.name.name == name)
            .map(|p| Binding::Property(p.ty))
    }
}

fn binding_type(b: &Binding) -> ValueType {
    match *b {
        Binding::Local(t) | Binding::Param(t) | Binding::Property(t) => t,
    }
}

/// Static type of a binary operation, or `None` when the operands do not fit.
pub(crate) fn binary_result(op: BinaryOp, l: ValueType, r: ValueType) -> Option<ValueType> {
    use ValueType::*;
    if op.is_arithmetic() {
        match (l, r) {
            (Int, Int) => Some(Int),
            (a, b) if a.is_numeric() && b.is_numeric() => Some(Real),
            _ => None,
        }
    } else if op.is_ordering() {
        (l.is_numeric() && r.is_numeric()).then_some(Bool)
    } else if matches!(op, BinaryOp::Eq | BinaryOp::Ne) {
        (l == r || (l.is_numeric() && r.is_numeric())).then_some(Bool)
    } else {
        (l == Bool && r == Bool).then_some(Bool)
    }
}

impl<'a> Validator<'a> {
    fn report(&mut self, code: Code, pos: Pos, message: impl Into<String>) {
        self.diagnostics
            .push(Diagnostic::new(code, self.file, pos, message));
    }

    fn duplicates<'i>(&mut self, what: &str, names: impl IntoIterator<Item = &'i Ident>) {
        let mut seen = HashSet::new();
        for id in names {
            if !seen.insert(id.name.as_str()) {
                self.report(Code::V001, id.pos, format!("duplicate {what} `{id}`"));
            }
        }
    }

    fn model(&mut self, m: &'a Model) {
        self.duplicates("thing", m.things.iter().map(|t| &t.name));
        self.duplicates("configuration", m.configurations.iter().map(|c| &c.name));
        for t in &m.things {
            self.thing(t);
        }
        for c in &m.configurations {
            self.configuration(m, c);
        }
    }

    fn thing(&mut self, t: &'a Thing) {
        self.duplicates("property", t.properties.iter().map(|p| &p.name));
        self.duplicates("message", t.messages.iter().map(|p| &p.name));
        self.duplicates("port", t.ports.iter().map(|p| &p.name));
        self.duplicates("data_analytics block", t.analytics.iter().map(|p| &p.name));

        for msg in &t.messages {
            self.duplicates("parameter", msg.params.iter().map(|p| &p.name));
        }

        for port in &t.ports {
            self.duplicates("message in `sends`", &port.sends);
            self.duplicates("message in `receives`", &port.receives);
            for m in port.sends.iter().chain(&port.receives) {
                if t.message(&m.name).is_none() {
                    self.report(
                        Code::V002,
                        m.pos,
                        format!("port `{}` lists undeclared message `{m}`", port.name),
                    );
                }
            }
        }

        for (i, prop) in t.properties.iter().enumerate() {
            if let Some(init) = &prop.initial {
                let mut scope = Scope {
                    thing: t,
                    properties: &t.properties[..i],
                    params: &[],
                    locals: Vec::new(),
                };
                if let Some(ty) = self.expr(&mut scope, init) {
                    if !prop.ty.accepts(ty) {
                        self.report(
                            Code::V006,
                            init.pos,
                            format!(
                                "initial value of property `{}` has type {ty}, expected {}",
                                prop.name, prop.ty
                            ),
                        );
                    }
                }
            }
        }

        if let Some(sc) = &t.statechart {
            self.statechart(t, sc);
        }

        for da in &t.analytics {
            self.analytics(t, da);
        }

        self.thing_warnings(t);
    }

    fn statechart(&mut self, t: &'a Thing, sc: &'a StateChart) {
        self.duplicates("state", sc.states.iter().map(|s| &s.name));
        if sc.state(&sc.initial.name).is_none() {
            self.report(
                Code::V003,
                sc.initial.pos,
                format!("initial state `{}` is not defined", sc.initial),
            );
        }
        for state in &sc.states {
            for block in [&state.entry, &state.exit].into_iter().flatten() {
                self.block_in(t, &[], block);
            }
            for tr in &state.transitions {
                if let Some(target) = tr.target() {
                    if sc.state(&target.name).is_none() {
                        self.report(
                            Code::V004,
                            target.pos,
                            format!("transition target `{target}` is not a state"),
                        );
                    }
                }
                let params: &[Param] = match &tr.trigger {
                    Some(trig) => self.trigger(t, trig),
                    None => &[],
                };
                if let Some(guard) = &tr.guard {
                    let mut scope = Scope {
                        thing: t,
                        properties: &t.properties,
                        params,
                        locals: Vec::new(),
                    };
                    self.condition(&mut scope, guard, "guard");
                }
                if let Some(action) = &tr.action {
                    self.block_in(t, params, action);
                }
            }
        }
    }

    /// Checks a trigger and returns the parameters it brings into scope.
    fn trigger(&mut self, t: &'a Thing, trig: &Trigger) -> &'a [Param] {
        let Some(port) = t.port(&trig.port.name) else {
            self.report(
                Code::V005,
                trig.port.pos,
                format!("trigger references unknown port `{}`", trig.port),
            );
            return &[];
        };
        if !port.receives(&trig.message.name) {
            self.report(
                Code::V005,
                trig.message.pos,
                format!(
                    "port `{}` does not receive message `{}`",
                    port.name, trig.message
                ),
            );
            return &[];
        }
        t.message(&trig.message.name)
            .map(|m| m.params.as_slice())
            .unwrap_or(&[])
    }

    fn block_in(&mut self, t: &'a Thing, params: &'a [Param], block: &Block) {
        let mut scope = Scope {
            thing: t,
            properties: &t.properties,
            params,
            locals: Vec::new(),
        };
        self.block(&mut scope, block);
    }

    fn block(&mut self, scope: &mut Scope<'a>, block: &Block) {
        scope.locals.push(Vec::new());
        for stmt in &block.stmts {
            self.stmt(scope, stmt);
        }
        scope.locals.pop();
    }

    fn condition(&mut self, scope: &mut Scope<'a>, e: &Expr, what: &str) {
        if let Some(ty) = self.expr(scope, e) {
            if ty != ValueType::Bool {
                self.report(
                    Code::V006,
                    e.pos,
                    format!("{what} must be Bool, found {ty}"),
                );
            }
        }
    }

    fn stmt(&mut self, scope: &mut Scope<'a>, stmt: &Stmt) {
        match &stmt.kind {
            StmtKind::VarDecl { name, ty, init } => {
                if let Some(found) = self.expr(scope, init) {
                    if !ty.accepts(found) {
                        self.report(
                            Code::V006,
                            init.pos,
                            format!("variable `{name}` declared {ty} but initialized with {found}"),
                        );
                    }
                }
                let frame = scope.locals.last_mut().expect("block frame");
                if frame.iter().any(|(n, _)| *n == name.name) {
                    self.report(Code::V001, name.pos, format!("duplicate variable `{name}`"));
                } else {
                    frame.push((name.name.clone(), *ty));
                }
            }
            StmtKind::Assign { target, value } => {
                let found = self.expr(scope, value);
                let slot = match scope.lookup(&target.name) {
                    Some(Binding::Local(t)) | Some(Binding::Property(t)) => t,
                    Some(Binding::Param(_)) => {
                        self.report(
                            Code::V007,
                            target.pos,
                            format!("cannot assign to trigger parameter `{target}`"),
                        );
                        return;
                    }
                    None => {
                        self.report(
                            Code::V007,
                            target.pos,
                            format!("assignment to undeclared property or variable `{target}`"),
                        );
                        return;
                    }
                };
                if let Some(found) = found {
                    if !slot.accepts(found) {
                        self.report(
                            Code::V006,
                            value.pos,
                            format!("cannot assign {found} to `{target}` of type {slot}"),
                        );
                    }
                }
            }
            StmtKind::Send {
                port,
                message,
                args,
            } => {
                let arg_types: Vec<Option<ValueType>> =
                    args.iter().map(|a| self.expr(scope, a)).collect();
                let thing = scope.thing;
                let Some(p) = thing.port(&port.name) else {
                    self.report(
                        Code::V006,
                        port.pos,
                        format!("send on unknown port `{port}`"),
                    );
                    return;
                };
                if !p.sends(&message.name) {
                    self.report(
                        Code::V006,
                        message.pos,
                        format!("port `{port}` does not send message `{message}`"),
                    );
                    return;
                }
                let Some(decl) = thing.message(&message.name) else {
                    // already reported as V002 on the port
                    return;
                };
                if decl.params.len() != args.len() {
                    self.report(
                        Code::V006,
                        stmt.pos,
                        format!(
                            "message `{message}` takes {} argument(s), {} given",
                            decl.params.len(),
                            args.len()
                        ),
                    );
                    return;
                }
                for ((param, found), arg) in decl.params.iter().zip(arg_types).zip(args) {
                    if let Some(found) = found {
                        if !param.ty.accepts(found) {
                            self.report(
                                Code::V006,
                                arg.pos,
                                format!(
                                    "argument `{}` of `{message}` expects {}, found {found}",
                                    param.name, param.ty
                                ),
                            );
                        }
                    }
                }
            }
            StmtKind::If {
                cond,
                then_block,
                else_block,
            } => {
                self.condition(scope, cond, "if condition");
                self.block(scope, then_block);
                if let Some(b) = else_block {
                    self.block(scope, b);
                }
            }
            StmtKind::While { cond, body } => {
                self.condition(scope, cond, "while condition");
                self.block(scope, body);
            }
            StmtKind::Print(e) => {
                self.expr(scope, e);
            }
            StmtKind::DaPreprocess(da)
            | StmtKind::DaTrain(da)
            | StmtKind::DaPredict(da)
            | StmtKind::DaSave(da, _) => {
                let thing = scope.thing;
                if thing.analytics.is_empty() {
                    self.report(
                        Code::V014,
                        da.pos,
                        format!("thing `{}` has no data_analytics block", thing.name),
                    );
                } else if thing.analytics_block(&da.name).is_none() {
                    self.report(
                        Code::V014,
                        da.pos,
                        format!("undeclared data_analytics block `{da}`"),
                    );
                }
            }
        }
    }

    fn expr(&mut self, scope: &mut Scope<'a>, e: &Expr) -> Option<ValueType> {
        match &e.kind {
            ExprKind::Literal(l) => Some(l.value_type()),
            ExprKind::Now => Some(ValueType::Int),
            ExprKind::Name(n) => match scope.lookup(n) {
                Some(b) => Some(binding_type(&b)),
                None => {
                    self.report(Code::V006, e.pos, format!("unknown name `{n}`"));
                    None
                }
            },
            ExprKind::Unary(op, operand) => {
                let ty = self.expr(scope, operand)?;
                let ok = match op {
                    UnaryOp::Neg => ty.is_numeric(),
                    UnaryOp::Not => ty == ValueType::Bool,
                };
                if !ok {
                    let sym = if *op == UnaryOp::Neg { "-" } else { "not" };
                    self.report(
                        Code::V006,
                        e.pos,
                        format!("operator `{sym}` cannot be applied to {ty}"),
                    );
                    return None;
                }
                Some(ty)
            }
            ExprKind::Binary(op, lhs, rhs) => {
                let l = self.expr(scope, lhs);
                let r = self.expr(scope, rhs);
                let (l, r) = (l?, r?);
                match binary_result(*op, l, r) {
                    Some(t) => Some(t),
                    None => {
                        self.report(
                            Code::V006,
                            e.pos,
                            format!(
                                "operator `{}` cannot be applied to {l} and {r}",
                                op.symbol()
                            ),
                        );
                        None
                    }
                }
            }
        }
    }

    fn analytics(&mut self, t: &Thing, da: &DataAnalyticsBlock) {
        self.duplicates("feature", &da.features);
        let property = |v: &mut Self, id: &Ident, role: &str| -> Option<ValueType> {
            match t.property(&id.name) {
                Some(p) => Some(p.ty),
                None => {
                    v.report(
                        Code::V008,
                        id.pos,
                        format!(
                            "{role} `{id}` of data_analytics `{}` is not a property",
                            da.name
                        ),
                    );
                    None
                }
            }
        };
        for f in &da.features {
            if let Some(ty) = property(self, f, "feature") {
                if !ty.is_numeric() {
                    self.report(
                        Code::V009,
                        f.pos,
                        format!("feature `{f}` must be Int or Real, found {ty}"),
                    );
                }
            }
        }
        if let Some(ty) = property(self, &da.label, "label") {
            if !ty.is_numeric() {
                self.report(
                    Code::V009,
                    da.label.pos,
                    format!("label `{}` must be Int or Real, found {ty}", da.label),
                );
            }
        }
        let prediction = property(self, &da.prediction, "prediction");
        for (id, role) in [(&da.label, "label"), (&da.prediction, "prediction")] {
            if da.features.iter().any(|f| f.name == id.name) {
                self.report(
                    Code::V009,
                    id.pos,
                    format!("{role} `{id}` must not also be a feature"),
                );
            }
        }
        match da.algorithm.resolve() {
            Ok(alg) => {
                let want = alg.kind().prediction_type();
                if let Some(ty) = prediction {
                    if ty != want {
                        self.report(
                            Code::V009,
                            da.prediction.pos,
                            format!(
                                "prediction `{}` of a {} model must be {want}, found {ty}",
                                da.prediction,
                                alg.kind()
                            ),
                        );
                    }
                }
            }
            Err(err) => {
                let pos = match &err {
                    AlgorithmError::UnknownKind(_) => da.algorithm.name.pos,
                    AlgorithmError::UnknownHyperparameter { pos, .. }
                    | AlgorithmError::DuplicateHyperparameter { pos, .. }
                    | AlgorithmError::WrongType { pos, .. }
                    | AlgorithmError::OutOfRange { pos, .. } => *pos,
                };
                self.report(Code::V010, pos, err.to_string());
            }
        }
    }

    fn thing_warnings(&mut self, t: &Thing) {
        for msg in &t.messages {
            let used = t
                .ports
                .iter()
                .any(|p| p.sends(&msg.name.name) || p.receives(&msg.name.name));
            if !used {
                self.report(
                    Code::V102,
                    msg.name.pos,
                    format!("message `{}` is not used by any port", msg.name),
                );
            }
        }

        let mut used_da = HashSet::new();
        if let Some(sc) = &t.statechart {
            let mut inbound: HashSet<&str> = HashSet::new();
            for state in &sc.states {
                for tr in &state.transitions {
                    if let Some(target) = tr.target() {
                        if target.name != state.name.name {
                            inbound.insert(&target.name);
                        }
                    }
                    if let Some(a) = &tr.action {
                        collect_da(a, &mut used_da);
                    }
                }
                for b in [&state.entry, &state.exit].into_iter().flatten() {
                    collect_da(b, &mut used_da);
                }
            }
            for state in &sc.states {
                if state.name.name != sc.initial.name && !inbound.contains(state.name.as_str()) {
                    self.report(
                        Code::V101,
                        state.name.pos,
                        format!("state `{}` is unreachable", state.name),
                    );
                }
            }
        }
        for da in &t.analytics {
            if !used_da.contains(da.name.as_str()) {
                self.report(
                    Code::V103,
                    da.name.pos,
                    format!(
                        "data_analytics `{}` is never used by a da_* statement",
                        da.name
                    ),
                );
            }
        }
    }

    fn configuration(&mut self, m: &Model, c: &Configuration) {
        self.duplicates("instance", c.instances.iter().map(|i| &i.name));
        let mut things: HashMap<&str, &Thing> = HashMap::new();
        for inst in &c.instances {
            match m.thing(&inst.thing.name) {
                Some(t) => {
                    things.entry(inst.name.as_str()).or_insert(t);
                }
                None => self.report(
                    Code::V011,
                    inst.thing.pos,
                    format!(
                        "instance `{}` references undeclared thing `{}`",
                        inst.name, inst.thing
                    ),
                ),
            }
        }
        for conn in &c.connectors {
            let resolve = |v: &mut Self, ep: &Endpoint| -> Option<(&Thing, &Port)> {
                if c.instance(&ep.instance.name).is_none() {
                    v.report(
                        Code::V012,
                        ep.instance.pos,
                        format!("connector references unknown instance `{}`", ep.instance),
                    );
                    return None;
                }
                // instance of an undeclared thing: already V011
                let thing = *things.get(ep.instance.as_str())?;
                match thing.port(&ep.port.name) {
                    Some(p) => Some((thing, p)),
                    None => {
                        v.report(
                            Code::V012,
                            ep.port.pos,
                            format!("thing `{}` has no port `{}`", thing.name, ep.port),
                        );
                        None
                    }
                }
            };
            let from = resolve(self, &conn.from);
            let to = resolve(self, &conn.to);
            if let (Some(from), Some(to)) = (from, to) {
                self.connector(conn, from, to);
            }
        }
    }

    fn connector(&mut self, conn: &Connector, from: (&Thing, &Port), to: (&Thing, &Port)) {
        if from.1.direction == to.1.direction {
            self.report(
                Code::V013,
                conn.pos,
                format!(
                    "connector joins two {} ports; exactly one must be required and one provided",
                    from.1.direction.keyword()
                ),
            );
            return;
        }
        for ((src_thing, src), (dst_thing, dst)) in [(from, to), (to, from)] {
            for msg in &src.sends {
                if !dst.receives(&msg.name) {
                    self.report(
                        Code::V013,
                        conn.pos,
                        format!(
                            "`{}.{}` sends `{msg}` but `{}.{}` does not receive it",
                            src_thing.name, src.name, dst_thing.name, dst.name
                        ),
                    );
                    continue;
                }
                let sig = |t: &Thing| {
                    t.message(&msg.name)
                        .map(|m| m.params.iter().map(|p| p.ty).collect::<Vec<_>>())
                };
                if let (Some(a), Some(b)) = (sig(src_thing), sig(dst_thing)) {
                    if a != b {
                        self.report(
                            Code::V013,
                            conn.pos,
                            format!(
                                "message `{msg}` has different parameter types in `{}` and `{}`",
                                src_thing.name, dst_thing.name
                            ),
                        );
                    }
                }
            }
        }
    }
}

fn collect_da<'b>(block: &'b Block, out: &mut HashSet<&'b str>) {
    for stmt in &block.stmts {
        match &stmt.kind {
            StmtKind::DaPreprocess(d)
            | StmtKind::DaTrain(d)
            | StmtKind::DaPredict(d)
            | StmtKind::DaSave(d, _) => {
                out.insert(d.as_str());
            }
            StmtKind::If {
                then_block,
                else_block,
                ..
            } => {
                collect_da(then_block, out);
                if let Some(b) = else_block {
                    collect_da(b, out);
                }
            }
            StmtKind::While { body, .. } => collect_da(body, out),
            _ => {}
        }
    }
}

/// Names of DA blocks on which the thing's statechart calls `da_preprocess`.
pub fn preprocessed_blocks(t: &Thing) -> HashSet<&str> {
    fn walk<'b>(block: &'b Block, out: &mut HashSet<&'b str>) {
        for stmt in &block.stmts {
            match &stmt.kind {
                StmtKind::DaPreprocess(d) => {
                    out.insert(d.as_str());
                }
                StmtKind::If {
                    then_block,
                    else_block,
                    ..
                } => {
                    walk(then_block, out);
                    if let Some(b) = else_block {
                        walk(b, out);
                    }
                }
                StmtKind::While { body, .. } => walk(body, out),
                _ => {}
            }
        }
    }
    let mut out = HashSet::new();
    if let Some(sc) = &t.statechart {
        for state in &sc.states {
            for b in [&state.entry, &state.exit].into_iter().flatten() {
                walk(b, &mut out);
            }
            for tr in &state.transitions {
                if let Some(a) = &tr.action {
                    walk(a, &mut out);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn report(src: &str) -> ValidationReport {
        validate(&parse(src, "v.tml2").unwrap_or_else(|d| panic!("{d:#?}")))
    }

    #[test]
    fn diagnostics_are_sorted() {
        let r = report("thing T { property a : Int = true property b : Bool = 1 }\nthing T {}");
        let keys: Vec<_> = r.diagnostics.iter().map(|d| (d.line, d.column)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(!r.ok);
    }

    #[test]
    fn ok_iff_no_errors() {
        let r = report("thing T { message m() }");
        assert_eq!(r.codes(), vec![Code::V102]);
        assert!(r.ok);
    }

    #[test]
    fn property_initializers_see_only_earlier_properties() {
        assert!(report("thing T { property a : Int = 1 property b : Int = a + 1 }").ok);
        assert_eq!(
            report("thing T { property b : Int = a property a : Int = 1 }").codes(),
            vec![Code::V006]
        );
    }

    #[test]
    fn expression_typing() {
        let ok = |e: &str, ty: &str| {
            let src = format!(
                "thing T {{ property i : Int property r : Real property s : String property x : {ty} = {e} }}"
            );
            report(&src).ok
        };
        assert!(ok("7 / 2", "Int"));
        assert!(!ok("7.0 / 2", "Int"));
        assert!(ok("7.0 / 2", "Real"));
        assert!(ok("i", "Real"));
        assert!(ok("i < r and not (s == \"a\")", "Bool"));
        assert!(!ok("s < s", "Bool"));
        assert!(!ok("i and true", "Bool"));
        assert!(!ok("-s", "String"));
        assert!(ok("Now() % 3", "Int"));
    }

    #[test]
    fn trigger_params_are_readonly_but_visible() {
        let src = |body: &str| {
            format!(
                "thing T {{ message m(v : Int) property x : Int provided port p {{ receives m }}
                statechart init S {{ state S {{ transition event p?m guard v > 0 internal action {{ {body} }} }} }} }}"
            )
        };
        assert!(report(&src("x = v;")).ok);
        assert_eq!(report(&src("v = 1;")).codes(), vec![Code::V007]);
        assert_eq!(report(&src("y = 1;")).codes(), vec![Code::V007]);
    }

    #[test]
    fn locals_are_block_scoped() {
        let src = |body: &str| {
            format!("thing T {{ statechart init S {{ state S {{ entry {{ {body} }} }} }} }}")
        };
        assert!(
            report(&src(
                "var a : Int = 1; if (a > 0) { var b : Int = a; a = b; }"
            ))
            .ok
        );
        assert_eq!(
            report(&src("if (true) { var b : Int = 1; } print(b);")).codes(),
            vec![Code::V006]
        );
        assert_eq!(
            report(&src("var a : Int = 1; var a : Int = 2;")).codes(),
            vec![Code::V001]
        );
    }

    #[test]
    fn send_checks() {
        let src = |send: &str| {
            format!(
                "thing T {{ message m(v : Real) message n() required port p {{ sends m receives n }}
                statechart init S {{ state S {{ entry {{ {send} }} }} }} }}"
            )
        };
        assert!(report(&src("p!m(1);")).ok);
        assert_eq!(report(&src("p!m();")).codes(), vec![Code::V006]);
        assert_eq!(report(&src("p!m(true);")).codes(), vec![Code::V006]);
        assert_eq!(report(&src("p!n();")).codes(), vec![Code::V006]);
        assert_eq!(report(&src("q!m(1.0);")).codes(), vec![Code::V006]);
    }

    #[test]
    fn warnings() {
        let r = report("thing T { statechart init A { state A { } state B { transition -> B } } }");
        assert_eq!(r.codes(), vec![Code::V101]);
        assert!(r.ok);
        let r = report(
            r#"thing T { property x : Int property y : Int
               data_analytics d { features: x label: y dataset: "d.csv" algorithm: KNN prediction: y } }"#,
        );
        assert_eq!(r.codes(), vec![Code::V103]);
    }

    #[test]
    fn prediction_type_convention() {
        let src = |alg: &str, ty: &str| {
            format!(
                r#"thing T {{ property x : Real property y : {ty}
                data_analytics d {{ features: x label: y dataset: "d.csv" algorithm: {alg} prediction: y }}
                statechart init S {{ state S {{ entry {{ da_train(d); }} }} }} }}"#
            )
        };
        assert!(report(&src("LinearRegression", "Real")).ok);
        assert!(report(&src("GaussianNB", "Int")).ok);
        assert_eq!(
            report(&src("LinearRegression", "Int")).codes(),
            vec![Code::V009]
        );
        assert_eq!(report(&src("KNN", "Real")).codes(), vec![Code::V009]);
    }

    #[test]
    fn connector_message_signatures_must_match() {
        let r = report(
            "thing A { message m(v : Int) required port p { sends m } }
             thing B { message m(v : Real) provided port q { receives m } }
             configuration c { instance a : A instance b : B connector a.p => b.q }",
        );
        assert_eq!(r.codes(), vec![Code::V013]);
    }

    #[test]
    fn deterministic() {
        let src = "thing T { property a : Int = true }\nthing T { message m() }";
        assert_eq!(report(src), report(src));
    }
}
