//! Type checker for MinC.
//!
//! All violations are collected rather than stopping at the first one. The
//! checker enforces, beyond the usual rules:
//!
//! - exactly one `main`, taking no parameters;
//! - arrays are second-class: no array parameters or returns, no whole-array
//!   assignment, and record fields of array type only contribute to the
//!   record size (they cannot be read or written);
//! - `let x: [int; n] = e;` requires an `int` initializer, which fills every
//!   slot;
//! - conditions and all binary operands are `int` (comparisons yield 0/1);
//! - no shadowing: a `let` may not reuse a name visible in an enclosing
//!   scope;
//! - every control path through a value-returning function ends in `return`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::ast::*;

/// Expression type as seen by the checker; `Void` marks calls of
/// value-less functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ty {
    Int,
    Str,
    Ref(String),
    Array(u32),
    Void,
}

impl From<&MinType> for Ty {
    fn from(t: &MinType) -> Ty {
        match t {
            MinType::Int => Ty::Int,
            MinType::Str => Ty::Str,
            MinType::Ref(r) => Ty::Ref(r.clone()),
            MinType::Array(n) => Ty::Array(*n),
        }
    }
}

impl core::fmt::Display for Ty {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Ty::Int => write!(f, "int"),
            Ty::Str => write!(f, "str"),
            Ty::Ref(r) => write!(f, "Ref({r})"),
            Ty::Array(n) => write!(f, "[int; {n}]"),
            Ty::Void => write!(f, "void"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeError {
    pub span: Span,
    pub message: String,
}

impl core::fmt::Display for TypeError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "type error at {}: {}", self.span, self.message)
    }
}

/// A type-checked program: the AST plus a type for every expression node.
#[derive(Debug, Clone)]
pub struct TypedProgram {
    pub program: Program,
    types: BTreeMap<NodeId, Ty>,
}

impl TypedProgram {
    pub fn ty(&self, id: NodeId) -> &Ty {
        &self.types[&id]
    }
}

/// Size in bytes of a MinC type: int 4, str 8, Ref 8, `[int; n]` 4n.
pub fn size_of(t: &MinType) -> u32 {
    match t {
        MinType::Int => 4,
        MinType::Str => 8,
        MinType::Ref(_) => 8,
        MinType::Array(n) => 4 * n,
    }
}

/// Size of a whole record: the sum of its field sizes.
pub fn record_size(name: &str, records: &[RecordDecl]) -> u32 {
    records
        .iter()
        .find(|r| r.name == name)
        .map(|r| r.fields.iter().map(|(_, t)| size_of(t)).sum())
        .unwrap_or(0)
}

pub fn typecheck(program: Program) -> Result<TypedProgram, Vec<TypeError>> {
    let mut ck = Checker {
        program: &program,
        types: BTreeMap::new(),
        errors: Vec::new(),
    };
    ck.check_decls();
    for f in &program.functions {
        ck.check_function(f);
    }
    let Checker { types, errors, .. } = ck;
    if errors.is_empty() {
        Ok(TypedProgram { program, types })
    } else {
        Err(errors)
    }
}

struct Checker<'a> {
    program: &'a Program,
    types: BTreeMap<NodeId, Ty>,
    errors: Vec<TypeError>,
}

impl<'a> Checker<'a> {
    fn error(&mut self, span: Span, message: String) {
        self.errors.push(TypeError { span, message });
    }

    fn check_decls(&mut self) {
        let mut seen = BTreeMap::new();
        for r in &self.program.records {
            if seen.insert(r.name.clone(), ()).is_some() {
                self.error(r.span, format!("duplicate record `{}`", r.name));
            }
            let mut fields = BTreeMap::new();
            for (fname, fty) in &r.fields {
                if fields.insert(fname.clone(), ()).is_some() {
                    self.error(r.span, format!("duplicate field `{}` in record `{}`", fname, r.name));
                }
                self.check_type_wf(fty, r.span);
            }
        }
        let mut fnames = BTreeMap::new();
        for f in &self.program.functions {
            if fnames.insert(f.name.clone(), ()).is_some() {
                self.error(f.span, format!("duplicate function `{}`", f.name));
            }
            if seen.contains_key(&f.name) {
                self.error(f.span, format!("`{}` names both a record and a function", f.name));
            }
            for (_, pty) in &f.params {
                self.check_type_wf(pty, f.span);
                if matches!(pty, MinType::Array(_)) {
                    self.error(f.span, "array parameters are not supported".into());
                }
            }
            if let Some(rt) = &f.ret {
                self.check_type_wf(rt, f.span);
                if matches!(rt, MinType::Array(_)) {
                    self.error(f.span, "array return types are not supported".into());
                }
            }
        }
        match self.program.function("main") {
            None => self.error(Span::ZERO, "no function named `main`".into()),
            Some(m) if !m.params.is_empty() => {
                self.error(m.span, "`main` takes no parameters".into())
            }
            _ => {}
        }
    }

    fn check_type_wf(&mut self, t: &MinType, span: Span) {
        if let MinType::Ref(r) = t {
            if self.program.record(r).is_none() {
                self.error(span, format!("unknown record `{r}`"));
            }
        }
    }

    fn check_function(&mut self, f: &FunctionDecl) {
        let mut scopes: Vec<BTreeMap<String, Ty>> = Vec::new();
        let mut params = BTreeMap::new();
        for (name, ty) in &f.params {
            if params.insert(name.clone(), Ty::from(ty)).is_some() {
                self.error(f.span, format!("duplicate parameter `{name}`"));
            }
        }
        scopes.push(params);
        self.check_block(&f.body, &mut scopes, f);
        if f.ret.is_some() && !Self::block_returns(&f.body) {
            self.error(
                f.span,
                format!("function `{}` must return a value on every path", f.name),
            );
        }
    }

    fn block_returns(b: &Block) -> bool {
        b.stmts.iter().any(|s| match &s.kind {
            StmtKind::Return { .. } => true,
            StmtKind::If { then_blk, else_blk: Some(e), .. } => {
                Self::block_returns(then_blk) && Self::block_returns(e)
            }
            _ => false,
        })
    }

    fn lookup(scopes: &[BTreeMap<String, Ty>], name: &str) -> Option<Ty> {
        scopes.iter().rev().find_map(|s| s.get(name).cloned())
    }

    fn check_block(&mut self, b: &Block, scopes: &mut Vec<BTreeMap<String, Ty>>, f: &FunctionDecl) {
        scopes.push(BTreeMap::new());
        for stmt in &b.stmts {
            self.check_stmt(stmt, scopes, f);
        }
        scopes.pop();
    }

    fn check_stmt(&mut self, s: &Stmt, scopes: &mut Vec<BTreeMap<String, Ty>>, f: &FunctionDecl) {
        match &s.kind {
            StmtKind::Let { name, ty, init } => {
                self.check_type_wf(ty, s.span);
                let init_ty = self.check_expr(init, scopes);
                let want = match ty {
                    // array lets take an int fill value
                    MinType::Array(_) => Ty::Int,
                    other => Ty::from(other),
                };
                if init_ty != Ty::Void && init_ty != want {
                    self.error(
                        s.span,
                        format!("`{name}` declared `{ty}` but initialized with `{init_ty}`"),
                    );
                }
                if Self::lookup(scopes, name).is_some() {
                    self.error(s.span, format!("`{name}` is already declared"));
                }
                scopes.last_mut().unwrap().insert(name.clone(), Ty::from(ty));
            }
            StmtKind::Assign { target, value } => {
                let vty = self.check_expr(value, scopes);
                let tty = self.check_lvalue(target, scopes, s.span);
                if let Some(tty) = tty {
                    if matches!(tty, Ty::Array(_)) {
                        self.error(s.span, "arrays cannot be assigned as a whole".into());
                    } else if vty != tty {
                        self.error(s.span, format!("cannot assign `{vty}` to `{tty}`"));
                    }
                }
            }
            StmtKind::If { cond, then_blk, else_blk } => {
                let cty = self.check_expr(cond, scopes);
                if cty != Ty::Int {
                    self.error(cond.span, format!("condition must be `int`, got `{cty}`"));
                }
                self.check_block(then_blk, scopes, f);
                if let Some(e) = else_blk {
                    self.check_block(e, scopes, f);
                }
            }
            StmtKind::While { cond, body } => {
                let cty = self.check_expr(cond, scopes);
                if cty != Ty::Int {
                    self.error(cond.span, format!("condition must be `int`, got `{cty}`"));
                }
                self.check_block(body, scopes, f);
            }
            StmtKind::Return { value } => match (&f.ret, value) {
                (None, Some(v)) => {
                    self.check_expr(v, scopes);
                    self.error(s.span, format!("function `{}` returns no value", f.name));
                }
                (Some(rt), None) => {
                    self.error(s.span, format!("function `{}` must return `{rt}`", f.name));
                }
                (Some(rt), Some(v)) => {
                    let vty = self.check_expr(v, scopes);
                    if vty != Ty::from(rt) {
                        self.error(s.span, format!("expected return type `{rt}`, got `{vty}`"));
                    }
                }
                (None, None) => {}
            },
            StmtKind::Free { target } => {
                let tty = self.check_expr(target, scopes);
                if !matches!(tty, Ty::Ref(_)) {
                    self.error(s.span, format!("free requires a reference, got `{tty}`"));
                }
            }
            StmtKind::ExprStmt { expr } => {
                self.check_expr(expr, scopes);
            }
        }
    }

    fn check_lvalue(
        &mut self,
        lv: &LValue,
        scopes: &mut Vec<BTreeMap<String, Ty>>,
        span: Span,
    ) -> Option<Ty> {
        match lv {
            LValue::Var(name) => match Self::lookup(scopes, name) {
                Some(t) => Some(t),
                None => {
                    self.error(span, format!("unknown variable `{name}`"));
                    None
                }
            },
            LValue::Field { base, field } => {
                let bty = self.check_expr(base, scopes);
                self.field_ty(&bty, field, span)
            }
            LValue::Index { array, index } => {
                let ity = self.check_expr(index, scopes);
                if ity != Ty::Int {
                    self.error(span, format!("array index must be `int`, got `{ity}`"));
                }
                match Self::lookup(scopes, array) {
                    Some(Ty::Array(_)) => Some(Ty::Int),
                    Some(t) => {
                        self.error(span, format!("`{array}` is `{t}`, not an array"));
                        None
                    }
                    None => {
                        self.error(span, format!("unknown variable `{array}`"));
                        None
                    }
                }
            }
        }
    }

    fn field_ty(&mut self, base: &Ty, field: &str, span: Span) -> Option<Ty> {
        match base {
            Ty::Ref(rname) => match self.program.record(rname) {
                Some(r) => match r.fields.iter().find(|(n, _)| n == field) {
                    Some((_, MinType::Array(_))) => {
                        self.error(span, format!("array field `{field}` cannot be accessed"));
                        None
                    }
                    Some((_, t)) => Some(Ty::from(t)),
                    None => {
                        self.error(span, format!("record `{rname}` has no field `{field}`"));
                        None
                    }
                },
                None => None,
            },
            other => {
                self.error(span, format!("field access requires a reference, got `{other}`"));
                None
            }
        }
    }

    fn check_expr(&mut self, e: &Expr, scopes: &mut Vec<BTreeMap<String, Ty>>) -> Ty {
        let ty = self.expr_ty(e, scopes);
        self.types.insert(e.id, ty.clone());
        ty
    }

    fn expr_ty(&mut self, e: &Expr, scopes: &mut Vec<BTreeMap<String, Ty>>) -> Ty {
        match &e.kind {
            ExprKind::IntLit(_) => Ty::Int,
            ExprKind::StrLit(_) => Ty::Str,
            ExprKind::Var(name) => match Self::lookup(scopes, name) {
                Some(t) => t,
                None => {
                    self.error(e.span, format!("unknown variable `{name}`"));
                    Ty::Int
                }
            },
            ExprKind::Field { base, field } => {
                let bty = self.check_expr(base, scopes);
                self.field_ty(&bty, field, e.span).unwrap_or(Ty::Int)
            }
            ExprKind::Index { array, index } => {
                let ity = self.check_expr(index, scopes);
                if ity != Ty::Int {
                    self.error(e.span, format!("array index must be `int`, got `{ity}`"));
                }
                match Self::lookup(scopes, array) {
                    Some(Ty::Array(_)) => {}
                    Some(t) => self.error(e.span, format!("`{array}` is `{t}`, not an array")),
                    None => self.error(e.span, format!("unknown variable `{array}`")),
                }
                Ty::Int
            }
            ExprKind::Bin { op, lhs, rhs } => {
                let lt = self.check_expr(lhs, scopes);
                let rt = self.check_expr(rhs, scopes);
                if lt != Ty::Int {
                    self.error(lhs.span, format!("operand of `{}` must be `int`, got `{lt}`", op.symbol()));
                }
                if rt != Ty::Int {
                    self.error(rhs.span, format!("operand of `{}` must be `int`, got `{rt}`", op.symbol()));
                }
                Ty::Int
            }
            ExprKind::Not(inner) => {
                let it = self.check_expr(inner, scopes);
                if it != Ty::Int {
                    self.error(e.span, format!("operand of `!` must be `int`, got `{it}`"));
                }
                Ty::Int
            }
            ExprKind::Call { name, args } => {
                let arg_tys: Vec<Ty> = args.iter().map(|a| self.check_expr(a, scopes)).collect();
                match self.program.function(name) {
                    None => {
                        self.error(e.span, format!("unknown function `{name}`"));
                        Ty::Int
                    }
                    Some(callee) => {
                        if callee.params.len() != args.len() {
                            self.error(
                                e.span,
                                format!(
                                    "`{name}` takes {} argument(s), got {}",
                                    callee.params.len(),
                                    args.len()
                                ),
                            );
                        }
                        for ((pname, pty), aty) in callee.params.iter().zip(arg_tys.iter()) {
                            if *aty != Ty::from(pty) {
                                self.error(
                                    e.span,
                                    format!("argument `{pname}` of `{name}` expects `{pty}`, got `{aty}`"),
                                );
                            }
                        }
                        match &callee.ret {
                            Some(rt) => Ty::from(rt),
                            None => Ty::Void,
                        }
                    }
                }
            }
            ExprKind::Alloc { record } => {
                if self.program.record(record).is_none() {
                    self.error(e.span, format!("unknown record `{record}`"));
                }
                Ty::Ref(record.clone())
            }
            ExprKind::Input => Ty::Int,
            ExprKind::InputStr => Ty::Str,
            ExprKind::Sanitize(inner) => {
                let it = self.check_expr(inner, scopes);
                if it != Ty::Str {
                    self.error(e.span, format!("sanitize takes `str`, got `{it}`"));
                }
                Ty::Str
            }
            ExprKind::DbQuery(inner) => {
                let it = self.check_expr(inner, scopes);
                if it != Ty::Str {
                    self.error(e.span, format!("db_query takes `str`, got `{it}`"));
                }
                Ty::Int
            }
            ExprKind::Concat(a, b) => {
                let at = self.check_expr(a, scopes);
                let bt = self.check_expr(b, scopes);
                if at != Ty::Str {
                    self.error(a.span, format!("concat takes `str`, got `{at}`"));
                }
                if bt != Ty::Str {
                    self.error(b.span, format!("concat takes `str`, got `{bt}`"));
                }
                Ty::Str
            }
        }
    }
}
