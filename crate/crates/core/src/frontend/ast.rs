//! Abstract syntax tree for MinC.
//!
//! Every expression node carries a [`NodeId`] so the type checker can attach
//! types in a side table without rebuilding the tree, and a [`Span`] for
//! diagnostics.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

/// Source position, 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub const ZERO: Span = Span { line: 0, col: 0 };

    pub fn new(line: u32, col: u32) -> Self {
        Span { line, col }
    }
}

impl core::fmt::Display for Span {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Identity of an expression node, unique within one parsed program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub u32);

/// MinC types. Arrays always hold `int` elements and have a fixed length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum MinType {
    Int,
    Str,
    Ref(String),
    Array(u32),
}

impl core::fmt::Display for MinType {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            MinType::Int => write!(f, "int"),
            MinType::Str => write!(f, "str"),
            MinType::Ref(r) => write!(f, "Ref({r})"),
            MinType::Array(n) => write!(f, "[int; {n}]"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::And => "&&",
            BinOp::Or => "||",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
    pub id: NodeId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ExprKind {
    IntLit(i32),
    StrLit(String),
    Var(String),
    /// `base->field`, base must be a reference.
    Field { base: Box<Expr>, field: String },
    /// `array[index]`, array must be a local array variable.
    Index { array: String, index: Box<Expr> },
    Bin { op: BinOp, lhs: Box<Expr>, rhs: Box<Expr> },
    Not(Box<Expr>),
    /// Call of a user function (builtins have dedicated nodes).
    Call { name: String, args: Vec<Expr> },
    Alloc { record: String },
    Input,
    InputStr,
    Sanitize(Box<Expr>),
    DbQuery(Box<Expr>),
    Concat(Box<Expr>, Box<Expr>),
}

/// Assignment target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LValue {
    Var(String),
    Field { base: Expr, field: String },
    Index { array: String, index: Expr },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum StmtKind {
    Let { name: String, ty: MinType, init: Expr },
    Assign { target: LValue, value: Expr },
    If { cond: Expr, then_blk: Block, else_blk: Option<Block> },
    While { cond: Expr, body: Block },
    Return { value: Option<Expr> },
    Free { target: Expr },
    ExprStmt { expr: Expr },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Block {
    pub stmts: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordDecl {
    pub name: String,
    pub fields: Vec<(String, MinType)>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionDecl {
    pub name: String,
    pub params: Vec<(String, MinType)>,
    /// `None` means the function returns no value.
    pub ret: Option<MinType>,
    pub body: Block,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Program {
    pub records: Vec<RecordDecl>,
    pub functions: Vec<FunctionDecl>,
}

impl Program {
    pub fn function(&self, name: &str) -> Option<&FunctionDecl> {
        self.functions.iter().find(|f| f.name == name)
    }

    pub fn record(&self, name: &str) -> Option<&RecordDecl> {
        self.records.iter().find(|r| r.name == name)
    }
}

/// Strips spans and node ids so two parses of equivalent source compare equal.
pub fn normalize(p: &Program) -> Program {
    struct Norm;
    impl Norm {
        fn expr(&self, e: &Expr) -> Expr {
            let kind = match &e.kind {
                ExprKind::Field { base, field } => ExprKind::Field {
                    base: Box::new(self.expr(base)),
                    field: field.clone(),
                },
                ExprKind::Index { array, index } => ExprKind::Index {
                    array: array.clone(),
                    index: Box::new(self.expr(index)),
                },
                ExprKind::Bin { op, lhs, rhs } => ExprKind::Bin {
                    op: *op,
                    lhs: Box::new(self.expr(lhs)),
                    rhs: Box::new(self.expr(rhs)),
                },
                ExprKind::Not(e) => ExprKind::Not(Box::new(self.expr(e))),
                ExprKind::Call { name, args } => ExprKind::Call {
                    name: name.clone(),
                    args: args.iter().map(|a| self.expr(a)).collect(),
                },
                ExprKind::Sanitize(e) => ExprKind::Sanitize(Box::new(self.expr(e))),
                ExprKind::DbQuery(e) => ExprKind::DbQuery(Box::new(self.expr(e))),
                ExprKind::Concat(a, b) => {
                    ExprKind::Concat(Box::new(self.expr(a)), Box::new(self.expr(b)))
                }
                plain => plain.clone(),
            };
            Expr { kind, span: Span::ZERO, id: NodeId(0) }
        }

        fn stmt(&self, s: &Stmt) -> Stmt {
            let kind = match &s.kind {
                StmtKind::Let { name, ty, init } => StmtKind::Let {
                    name: name.clone(),
                    ty: ty.clone(),
                    init: self.expr(init),
                },
                StmtKind::Assign { target, value } => StmtKind::Assign {
                    target: match target {
                        LValue::Var(v) => LValue::Var(v.clone()),
                        LValue::Field { base, field } => LValue::Field {
                            base: self.expr(base),
                            field: field.clone(),
                        },
                        LValue::Index { array, index } => LValue::Index {
                            array: array.clone(),
                            index: self.expr(index),
                        },
                    },
                    value: self.expr(value),
                },
                StmtKind::If { cond, then_blk, else_blk } => StmtKind::If {
                    cond: self.expr(cond),
                    then_blk: self.block(then_blk),
                    else_blk: else_blk.as_ref().map(|b| self.block(b)),
                },
                StmtKind::While { cond, body } => StmtKind::While {
                    cond: self.expr(cond),
                    body: self.block(body),
                },
                StmtKind::Return { value } => StmtKind::Return {
                    value: value.as_ref().map(|e| self.expr(e)),
                },
                StmtKind::Free { target } => StmtKind::Free { target: self.expr(target) },
                StmtKind::ExprStmt { expr } => StmtKind::ExprStmt { expr: self.expr(expr) },
            };
            Stmt { kind, span: Span::ZERO }
        }

        fn block(&self, b: &Block) -> Block {
            Block { stmts: b.stmts.iter().map(|s| self.stmt(s)).collect() }
        }
    }

    let n = Norm;
    Program {
        records: p
            .records
            .iter()
            .map(|r| RecordDecl { name: r.name.clone(), fields: r.fields.clone(), span: Span::ZERO })
            .collect(),
        functions: p
            .functions
            .iter()
            .map(|f| FunctionDecl {
                name: f.name.clone(),
                params: f.params.clone(),
                ret: f.ret.clone(),
                body: n.block(&f.body),
                span: Span::ZERO,
            })
            .collect(),
    }
}
