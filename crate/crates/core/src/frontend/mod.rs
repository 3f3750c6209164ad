//! MinC frontend: lexer, parser, type checker and pretty-printer.

pub mod ast;
mod lexer;
mod parser;
pub mod pretty;
mod typeck;

use alloc::string::String;
use alloc::vec::Vec;

pub use ast::{
    BinOp, Block, Expr, ExprKind, FunctionDecl, LValue, MinType, NodeId, Program, RecordDecl,
    Span, Stmt, StmtKind,
};
pub use parser::parse_program;
pub use typeck::{record_size, size_of, typecheck, Ty, TypeError, TypedProgram};

/// Parse failure at a single position with the tokens that would have been
/// accepted there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub span: Span,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    pub fn new(span: Span, message: impl Into<String>) -> Self {
        ParseError { span, message: message.into(), expected: Vec::new() }
    }
}

impl core::fmt::Display for ParseError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "parse error at {}: {}", self.span, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

/// Parse and type-check in one step.
pub fn check_source(source: &str) -> Result<TypedProgram, FrontendError> {
    let program = parse_program(source).map_err(FrontendError::Parse)?;
    typeck::typecheck(program).map_err(FrontendError::Type)
}

#[derive(Debug, Clone, PartialEq)]
pub enum FrontendError {
    Parse(ParseError),
    Type(Vec<TypeError>),
}

impl core::fmt::Display for FrontendError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            FrontendError::Parse(e) => write!(f, "{e}"),
            FrontendError::Type(errs) => {
                for (i, e) in errs.iter().enumerate() {
                    if i > 0 {
                        writeln!(f)?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;

    #[test]
    fn minimal_program_parses() {
        let p = parse_program("fn main() { let x: int = 1; }").unwrap();
        assert_eq!(p.functions.len(), 1);
        assert!(p.records.is_empty());
        assert_eq!(p.functions[0].name, "main");
    }

    #[test]
    fn two_param_function_parses() {
        let src = "fn f(x: int, y: int) -> int { if (x > 10) { return y; } else { return x; } }";
        let p = parse_program(src).unwrap();
        let f = p.function("f").unwrap();
        assert_eq!(f.params.len(), 2);
        assert_eq!(f.params[0], ("x".into(), MinType::Int));
        assert_eq!(f.params[1], ("y".into(), MinType::Int));
        assert_eq!(f.ret, Some(MinType::Int));
    }

    #[test]
    fn malformed_input_reports_line_one() {
        let err = parse_program("fn f( {").unwrap_err();
        assert_eq!(err.span.line, 1);
        assert!(!err.expected.is_empty());
    }

    #[test]
    fn comments_are_skipped() {
        let src = "// header\nfn main() { // trailing\n let x: int = 2; }";
        assert!(parse_program(src).is_ok());
    }

    #[test]
    fn alloc_assignment_typechecks() {
        let src = "record Node { val: int; }\nfn main() { let p: Ref(Node) = alloc(Node); p->val = 3; }";
        assert!(check_source(src).is_ok());
    }

    #[test]
    fn free_requires_reference() {
        let src = "fn main() { free(5); }";
        match check_source(src) {
            Err(FrontendError::Type(errs)) => {
                assert!(errs.iter().any(|e| e.message.contains("free requires a reference")));
            }
            other => panic!("expected type error, got {other:?}"),
        }
    }

    /// Every builtin signature mismatch must be rejected.
    #[test]
    fn builtin_signature_mismatches_rejected() {
        let cases = [
            // db_query takes str, input() is int
            "fn main() { db_query(input()); }",
            "fn main() { sanitize(1); }",
            "fn main() { concat(\"a\", 2); }",
            "fn main() { concat(3, \"b\"); }",
            "fn main() { let x: int = input_str(); }",
            "fn main() { let s: str = input(); }",
            "record R { v: int; }\nfn main() { let p: Ref(R) = alloc(R); let q: int = p; }",
        ];
        for src in cases {
            match check_source(src) {
                Err(FrontendError::Type(_)) => {}
                other => panic!("`{src}` should be a type error, got {other:?}"),
            }
        }
    }

    #[test]
    fn errors_are_collected_not_first_only() {
        let src = "fn main() { free(5); db_query(input()); }";
        match check_source(src) {
            Err(FrontendError::Type(errs)) => assert!(errs.len() >= 2),
            other => panic!("expected type errors, got {other:?}"),
        }
    }

    #[test]
    fn non_void_function_must_return_on_all_paths() {
        let src = "fn f(x: int) -> int { if (x > 0) { return 1; } }\nfn main() { f(1); }";
        assert!(matches!(check_source(src), Err(FrontendError::Type(_))));
    }

    #[test]
    fn size_table() {
        assert_eq!(size_of(&MinType::Int), 4);
        assert_eq!(size_of(&MinType::Str), 8);
        assert_eq!(size_of(&MinType::Ref("T".into())), 8);
        assert_eq!(size_of(&MinType::Array(10)), 40);
        // record {a: int, b: Ref(T)} -> 4 + 8 = 12
        let recs = alloc::vec![
            RecordDecl {
                name: "T".into(),
                fields: alloc::vec![],
                span: Span::ZERO,
            },
            RecordDecl {
                name: "R".into(),
                fields: alloc::vec![("a".into(), MinType::Int), ("b".into(), MinType::Ref("T".into()))],
                span: Span::ZERO,
            },
        ];
        assert_eq!(record_size("R", &recs), 12);
    }

    #[test]
    fn pretty_print_round_trips() {
        let src = "record Node { val: int; next: Ref(Node); }\n\
                   fn helper(x: int, s: str) -> int { \n\
                     let buf: [int; 4] = 0; \n\
                     buf[x] = x * 2 + 1; \n\
                     while (x < 3) { x = x + 1; } \n\
                     if (x > 1 && x < 9 || !x) { db_query(concat(sanitize(s), \"q\")); } \n\
                     return buf[1]; \n\
                   }\n\
                   fn main() { let p: Ref(Node) = alloc(Node); helper(input(), input_str()); free(p); }";
        let p1 = parse_program(src).unwrap();
        let printed = pretty::print_program(&p1);
        let p2 = parse_program(&printed).unwrap_or_else(|e| panic!("reparse failed: {e}\n{printed}"));
        assert_eq!(ast::normalize(&p1), ast::normalize(&p2), "round trip changed AST:\n{printed}");
    }

    #[test]
    fn no_shadowing() {
        let src = "fn main() { let x: int = 1; if (x > 0) { let x: int = 2; } }";
        assert!(matches!(check_source(src), Err(FrontendError::Type(_))));
    }

    #[test]
    fn duplicate_names_rejected() {
        for src in [
            "fn f() {} fn f() {} fn main() {}",
            "record R { a: int; a: int; } fn main() {}",
            "record R {} record R {} fn main() {}",
            "fn main(x: int) {}",
        ] {
            assert!(matches!(check_source(src), Err(FrontendError::Type(_))), "{src}");
        }
    }

    #[test]
    fn parse_error_display_is_positioned() {
        let err = parse_program("fn f( {").unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("1:"), "{msg}");
    }
}
