//! Pretty-printer for MinC. Output reparses to a structurally identical AST
//! (modulo spans and node ids); binary expressions rely on the parser's
//! precedence and associativity, so no parentheses are emitted.

use alloc::string::String;
use alloc::vec::Vec;

use super::ast::*;

pub fn print_program(p: &Program) -> String {
    let mut out = String::new();
    for r in &p.records {
        out.push_str(&alloc::format!("record {} {{\n", r.name));
        for (name, ty) in &r.fields {
            out.push_str(&alloc::format!("    {name}: {ty};\n"));
        }
        out.push_str("}\n\n");
    }
    for f in &p.functions {
        let params: Vec<String> = f
            .params
            .iter()
            .map(|(n, t)| alloc::format!("{n}: {t}"))
            .collect();
        out.push_str(&alloc::format!("fn {}({})", f.name, params.join(", ")));
        if let Some(rt) = &f.ret {
            out.push_str(&alloc::format!(" -> {rt}"));
        }
        out.push(' ');
        print_block(&mut out, &f.body, 0);
        out.push('\n');
    }
    out
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("    ");
    }
}

fn print_block(out: &mut String, b: &Block, level: usize) {
    out.push_str("{\n");
    for s in &b.stmts {
        indent(out, level + 1);
        print_stmt(out, s, level + 1);
        out.push('\n');
    }
    indent(out, level);
    out.push('}');
}

/// One-line rendering of a statement, used for CFG block labels.
pub fn stmt_text(s: &Stmt) -> String {
    let mut out = String::new();
    match &s.kind {
        StmtKind::If { cond, .. } => {
            out.push_str("if (");
            print_expr(&mut out, cond);
            out.push(')');
        }
        StmtKind::While { cond, .. } => {
            out.push_str("while (");
            print_expr(&mut out, cond);
            out.push(')');
        }
        _ => print_stmt(&mut out, s, 0),
    }
    out
}

fn print_stmt(out: &mut String, s: &Stmt, level: usize) {
    match &s.kind {
        StmtKind::Let { name, ty, init } => {
            out.push_str(&alloc::format!("let {name}: {ty} = "));
            print_expr(out, init);
            out.push(';');
        }
        StmtKind::Assign { target, value } => {
            match target {
                LValue::Var(v) => out.push_str(v),
                LValue::Field { base, field } => {
                    print_expr(out, base);
                    out.push_str(&alloc::format!("->{field}"));
                }
                LValue::Index { array, index } => {
                    out.push_str(array);
                    out.push('[');
                    print_expr(out, index);
                    out.push(']');
                }
            }
            out.push_str(" = ");
            print_expr(out, value);
            out.push(';');
        }
        StmtKind::If { cond, then_blk, else_blk } => {
            out.push_str("if (");
            print_expr(out, cond);
            out.push_str(") ");
            print_block(out, then_blk, level);
            if let Some(e) = else_blk {
                out.push_str(" else ");
                print_block(out, e, level);
            }
        }
        StmtKind::While { cond, body } => {
            out.push_str("while (");
            print_expr(out, cond);
            out.push_str(") ");
            print_block(out, body, level);
        }
        StmtKind::Return { value } => {
            out.push_str("return");
            if let Some(v) = value {
                out.push(' ');
                print_expr(out, v);
            }
            out.push(';');
        }
        StmtKind::Free { target } => {
            out.push_str("free(");
            print_expr(out, target);
            out.push_str(");");
        }
        StmtKind::ExprStmt { expr } => {
            print_expr(out, expr);
            out.push(';');
        }
    }
}

fn prec(op: BinOp) -> u8 {
    match op {
        BinOp::Or => 0,
        BinOp::And => 1,
        BinOp::Eq | BinOp::Ne => 2,
        BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 3,
        BinOp::Add | BinOp::Sub => 4,
        BinOp::Mul => 5,
    }
}

pub fn print_expr(out: &mut String, e: &Expr) {
    print_expr_prec(out, e, 0)
}

pub fn expr_text(e: &Expr) -> String {
    let mut s = String::new();
    print_expr(&mut s, e);
    s
}

fn print_expr_prec(out: &mut String, e: &Expr, min_prec: u8) {
    match &e.kind {
        ExprKind::IntLit(n) => out.push_str(&alloc::format!("{n}")),
        ExprKind::StrLit(s) => {
            out.push('"');
            for c in s.chars() {
                match c {
                    '"' => out.push_str("\\\""),
                    '\\' => out.push_str("\\\\"),
                    '\n' => out.push_str("\\n"),
                    '\t' => out.push_str("\\t"),
                    other => out.push(other),
                }
            }
            out.push('"');
        }
        ExprKind::Var(v) => out.push_str(v),
        ExprKind::Field { base, field } => {
            // postfix binds tightest
            print_expr_prec(out, base, 6);
            out.push_str(&alloc::format!("->{field}"));
        }
        ExprKind::Index { array, index } => {
            out.push_str(array);
            out.push('[');
            print_expr_prec(out, index, 0);
            out.push(']');
        }
        ExprKind::Bin { op, lhs, rhs } => {
            debug_assert!(
                prec(*op) >= min_prec,
                "expression nesting not printable without parentheses"
            );
            let p = prec(*op);
            print_expr_prec(out, lhs, p);
            out.push_str(&alloc::format!(" {} ", op.symbol()));
            print_expr_prec(out, rhs, p + 1);
        }
        ExprKind::Not(inner) => {
            out.push('!');
            print_expr_prec(out, inner, 6);
        }
        ExprKind::Call { name, args } => {
            out.push_str(name);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                print_expr_prec(out, a, 0);
            }
            out.push(')');
        }
        ExprKind::Alloc { record } => out.push_str(&alloc::format!("alloc({record})")),
        ExprKind::Input => out.push_str("input()"),
        ExprKind::InputStr => out.push_str("input_str()"),
        ExprKind::Sanitize(inner) => {
            out.push_str("sanitize(");
            print_expr_prec(out, inner, 0);
            out.push(')');
        }
        ExprKind::DbQuery(inner) => {
            out.push_str("db_query(");
            print_expr_prec(out, inner, 0);
            out.push(')');
        }
        ExprKind::Concat(a, b) => {
            out.push_str("concat(");
            print_expr_prec(out, a, 0);
            out.push_str(", ");
            print_expr_prec(out, b, 0);
            out.push(')');
        }
    }
}
