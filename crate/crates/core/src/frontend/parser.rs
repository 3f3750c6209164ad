//! Recursive-descent parser for MinC.
//!
//! Binary operators are parsed by precedence climbing, all left-associative:
//! `!` and postfix `->`/`[]` bind tightest, then `*`, then `+ -`, then the
//! relational operators, then `== !=`, then `&&`, then `||`. There is no
//! parenthesized expression form; `(` only appears in calls and around
//! `if`/`while` conditions.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::ast::*;
use super::lexer::{lex, Tok};
use super::ParseError;

pub fn parse_program(source: &str) -> Result<Program, ParseError> {
    let toks = lex(source)?;
    let mut p = Parser { toks, pos: 0, next_id: 0 };
    p.program()
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    next_id: u32,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, desc: &str) -> Result<Span, ParseError> {
        if *self.peek() == want {
            Ok(self.bump().1)
        } else {
            Err(self.err_expected(&[desc]))
        }
    }

    fn err_expected(&self, expected: &[&str]) -> ParseError {
        ParseError {
            span: self.span(),
            message: alloc::format!("unexpected token `{}`", self.peek()),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn fresh_id(&mut self) -> NodeId {
        let id = NodeId(self.next_id);
        self.next_id += 1;
        id
    }

    fn ident(&mut self) -> Result<(String, Span), ParseError> {
        match self.peek() {
            Tok::Ident(_) => {
                let (tok, span) = self.bump();
                match tok {
                    Tok::Ident(s) => Ok((s, span)),
                    _ => unreachable!(),
                }
            }
            _ => Err(self.err_expected(&["identifier"])),
        }
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        let mut prog = Program::default();
        loop {
            match self.peek() {
                Tok::Record => prog.records.push(self.record_decl()?),
                Tok::Fn => prog.functions.push(self.fn_decl()?),
                Tok::Eof => return Ok(prog),
                _ => return Err(self.err_expected(&["record", "fn"])),
            }
        }
    }

    fn record_decl(&mut self) -> Result<RecordDecl, ParseError> {
        let span = self.expect(Tok::Record, "record")?;
        let (name, _) = self.ident()?;
        self.expect(Tok::LBrace, "{")?;
        let mut fields = Vec::new();
        while *self.peek() != Tok::RBrace {
            let (fname, _) = self.ident()?;
            self.expect(Tok::Colon, ":")?;
            let ty = self.min_type()?;
            self.expect(Tok::Semi, ";")?;
            fields.push((fname, ty));
        }
        self.expect(Tok::RBrace, "}")?;
        Ok(RecordDecl { name, fields, span })
    }

    fn fn_decl(&mut self) -> Result<FunctionDecl, ParseError> {
        let span = self.expect(Tok::Fn, "fn")?;
        let (name, _) = self.ident()?;
        self.expect(Tok::LParen, "(")?;
        let mut params = Vec::new();
        if *self.peek() != Tok::RParen {
            loop {
                let (pname, _) = self.ident()?;
                self.expect(Tok::Colon, ":")?;
                let ty = self.min_type()?;
                params.push((pname, ty));
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RParen, ")")?;
        let ret = if *self.peek() == Tok::Arrow {
            self.bump();
            Some(self.min_type()?)
        } else {
            None
        };
        let body = self.block()?;
        Ok(FunctionDecl { name, params, ret, body, span })
    }

    fn min_type(&mut self) -> Result<MinType, ParseError> {
        match self.peek().clone() {
            Tok::KwInt => {
                self.bump();
                Ok(MinType::Int)
            }
            Tok::KwStr => {
                self.bump();
                Ok(MinType::Str)
            }
            Tok::KwRef => {
                self.bump();
                self.expect(Tok::LParen, "(")?;
                let (name, _) = self.ident()?;
                self.expect(Tok::RParen, ")")?;
                Ok(MinType::Ref(name))
            }
            Tok::LBracket => {
                self.bump();
                self.expect(Tok::KwInt, "int")?;
                self.expect(Tok::Semi, ";")?;
                let len = match self.peek() {
                    Tok::Int(n) => {
                        let n = *n;
                        self.bump();
                        n
                    }
                    _ => return Err(self.err_expected(&["integer literal"])),
                };
                if len < 1 {
                    return Err(ParseError::new(self.span(), "array length must be >= 1"));
                }
                self.expect(Tok::RBracket, "]")?;
                Ok(MinType::Array(len as u32))
            }
            _ => Err(self.err_expected(&["int", "str", "Ref", "["])),
        }
    }

    fn block(&mut self) -> Result<Block, ParseError> {
        self.expect(Tok::LBrace, "{")?;
        let mut stmts = Vec::new();
        while *self.peek() != Tok::RBrace {
            stmts.push(self.stmt()?);
        }
        self.expect(Tok::RBrace, "}")?;
        Ok(Block { stmts })
    }

    fn stmt(&mut self) -> Result<Stmt, ParseError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Let => {
                self.bump();
                let (name, _) = self.ident()?;
                self.expect(Tok::Colon, ":")?;
                let ty = self.min_type()?;
                self.expect(Tok::Assign, "=")?;
                let init = self.expr()?;
                self.expect(Tok::Semi, ";")?;
                Ok(Stmt { kind: StmtKind::Let { name, ty, init }, span })
            }
            Tok::If => {
                self.bump();
                self.expect(Tok::LParen, "(")?;
                let cond = self.expr()?;
                self.expect(Tok::RParen, ")")?;
                let then_blk = self.block()?;
                let else_blk = if *self.peek() == Tok::Else {
                    self.bump();
                    Some(self.block()?)
                } else {
                    None
                };
                Ok(Stmt { kind: StmtKind::If { cond, then_blk, else_blk }, span })
            }
            Tok::While => {
                self.bump();
                self.expect(Tok::LParen, "(")?;
                let cond = self.expr()?;
                self.expect(Tok::RParen, ")")?;
                let body = self.block()?;
                Ok(Stmt { kind: StmtKind::While { cond, body }, span })
            }
            Tok::Return => {
                self.bump();
                let value = if *self.peek() == Tok::Semi { None } else { Some(self.expr()?) };
                self.expect(Tok::Semi, ";")?;
                Ok(Stmt { kind: StmtKind::Return { value }, span })
            }
            Tok::Free => {
                self.bump();
                self.expect(Tok::LParen, "(")?;
                let target = self.expr()?;
                self.expect(Tok::RParen, ")")?;
                self.expect(Tok::Semi, ";")?;
                Ok(Stmt { kind: StmtKind::Free { target }, span })
            }
            _ => {
                let expr = self.expr()?;
                if *self.peek() == Tok::Assign {
                    self.bump();
                    let target = Self::expr_to_lvalue(expr)
                        .ok_or_else(|| ParseError::new(span, "invalid assignment target"))?;
                    let value = self.expr()?;
                    self.expect(Tok::Semi, ";")?;
                    Ok(Stmt { kind: StmtKind::Assign { target, value }, span })
                } else {
                    self.expect(Tok::Semi, ";")?;
                    Ok(Stmt { kind: StmtKind::ExprStmt { expr }, span })
                }
            }
        }
    }

    fn expr_to_lvalue(e: Expr) -> Option<LValue> {
        match e.kind {
            ExprKind::Var(name) => Some(LValue::Var(name)),
            ExprKind::Field { base, field } => Some(LValue::Field { base: *base, field }),
            ExprKind::Index { array, index } => Some(LValue::Index { array, index: *index }),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.bin_expr(0)
    }

    fn bin_op_at(&self, level: u8) -> Option<BinOp> {
        let op = match (level, self.peek()) {
            (0, Tok::OrOr) => BinOp::Or,
            (1, Tok::AndAnd) => BinOp::And,
            (2, Tok::EqEq) => BinOp::Eq,
            (2, Tok::NotEq) => BinOp::Ne,
            (3, Tok::Lt) => BinOp::Lt,
            (3, Tok::Le) => BinOp::Le,
            (3, Tok::Gt) => BinOp::Gt,
            (3, Tok::Ge) => BinOp::Ge,
            (4, Tok::Plus) => BinOp::Add,
            (4, Tok::Minus) => BinOp::Sub,
            (5, Tok::Star) => BinOp::Mul,
            _ => return None,
        };
        Some(op)
    }

    fn bin_expr(&mut self, level: u8) -> Result<Expr, ParseError> {
        if level > 5 {
            return self.unary_expr();
        }
        let mut lhs = self.bin_expr(level + 1)?;
        while let Some(op) = self.bin_op_at(level) {
            let span = self.span();
            self.bump();
            let rhs = self.bin_expr(level + 1)?;
            lhs = Expr {
                kind: ExprKind::Bin { op, lhs: Box::new(lhs), rhs: Box::new(rhs) },
                span,
                id: self.fresh_id(),
            };
        }
        Ok(lhs)
    }

    fn unary_expr(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Bang {
            let span = self.span();
            self.bump();
            let inner = self.unary_expr()?;
            return Ok(Expr { kind: ExprKind::Not(Box::new(inner)), span, id: self.fresh_id() });
        }
        self.postfix_expr()
    }

    fn postfix_expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.primary_expr()?;
        loop {
            match self.peek() {
                Tok::Arrow => {
                    let span = self.span();
                    self.bump();
                    let (field, _) = self.ident()?;
                    e = Expr {
                        kind: ExprKind::Field { base: Box::new(e), field },
                        span,
                        id: self.fresh_id(),
                    };
                }
                Tok::LBracket => {
                    // indexing only applies to a plain array variable
                    let array = match &e.kind {
                        ExprKind::Var(name) => name.clone(),
                        _ => {
                            return Err(ParseError::new(
                                self.span(),
                                "indexing requires an array variable",
                            ))
                        }
                    };
                    let span = self.span();
                    self.bump();
                    let index = self.expr()?;
                    self.expect(Tok::RBracket, "]")?;
                    e = Expr {
                        kind: ExprKind::Index { array, index: Box::new(index) },
                        span,
                        id: self.fresh_id(),
                    };
                }
                _ => return Ok(e),
            }
        }
    }

    fn primary_expr(&mut self) -> Result<Expr, ParseError> {
        let span = self.span();
        let kind = match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                ExprKind::IntLit(n)
            }
            Tok::Str(s) => {
                self.bump();
                ExprKind::StrLit(s)
            }
            Tok::Alloc => {
                self.bump();
                self.expect(Tok::LParen, "(")?;
                let (record, _) = self.ident()?;
                self.expect(Tok::RParen, ")")?;
                ExprKind::Alloc { record }
            }
            Tok::Input => {
                self.bump();
                self.expect(Tok::LParen, "(")?;
                self.expect(Tok::RParen, ")")?;
                ExprKind::Input
            }
            Tok::InputStr => {
                self.bump();
                self.expect(Tok::LParen, "(")?;
                self.expect(Tok::RParen, ")")?;
                ExprKind::InputStr
            }
            Tok::Sanitize => {
                self.bump();
                self.expect(Tok::LParen, "(")?;
                let inner = self.expr()?;
                self.expect(Tok::RParen, ")")?;
                ExprKind::Sanitize(Box::new(inner))
            }
            Tok::DbQuery => {
                self.bump();
                self.expect(Tok::LParen, "(")?;
                let inner = self.expr()?;
                self.expect(Tok::RParen, ")")?;
                ExprKind::DbQuery(Box::new(inner))
            }
            Tok::Concat => {
                self.bump();
                self.expect(Tok::LParen, "(")?;
                let a = self.expr()?;
                self.expect(Tok::Comma, ",")?;
                let b = self.expr()?;
                self.expect(Tok::RParen, ")")?;
                ExprKind::Concat(Box::new(a), Box::new(b))
            }
            Tok::Ident(_) => {
                if *self.peek2() == Tok::LParen {
                    let (name, _) = self.ident()?;
                    self.bump(); // (
                    let mut args = Vec::new();
                    if *self.peek() != Tok::RParen {
                        loop {
                            args.push(self.expr()?);
                            if *self.peek() == Tok::Comma {
                                self.bump();
                            } else {
                                break;
                            }
                        }
                    }
                    self.expect(Tok::RParen, ")")?;
                    ExprKind::Call { name, args }
                } else {
                    let (name, _) = self.ident()?;
                    ExprKind::Var(name)
                }
            }
            _ => return Err(self.err_expected(&["expression"])),
        };
        Ok(Expr { kind, span, id: self.fresh_id() })
    }
}
