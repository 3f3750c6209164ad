//! Symbolic values and constraints.
//!
//! A [`SymValue`] is an expression tree over integer constants, input-tape
//! reads, function parameters, unconstrained unknowns and heap references.
//! Booleans are integers with C truthiness: a constraint holds when the
//! expression is non-zero. Input leaves are indexed relative to the context
//! they were created in (the k-th value consumed by this function's path) and
//! are shifted when a summary is applied in a caller.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::frontend::BinOp;

use super::heap::BlockId;

/// Fresh-unknown identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UncId(pub u32);

/// A function parameter, named by its owning function.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParamVar {
    pub function: String,
    pub name: String,
}

impl ParamVar {
    pub fn new(function: impl Into<String>, name: impl Into<String>) -> Self {
        ParamVar { function: function.into(), name: name.into() }
    }
}

/// Where a reference value comes from. With path-sensitive exploration a
/// reference is never a phi: along one path it is exactly one of these.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RefOrigin {
    /// A heap block resolved in the current context.
    Block(BlockId),
    /// A reference-typed parameter of the current function.
    Param(ParamVar),
    /// Known null (e.g. a never-written record field).
    Null,
    /// Unknown provenance (clobbered heap read, truncated callee).
    Opaque(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymValue {
    Int(i32),
    Str(TaintString),
    /// The k-th `input()` consumed in the current context.
    InputInt(usize),
    /// An integer-typed parameter.
    Param(ParamVar),
    /// An integer whose value the analysis does not track.
    Unconstrained(UncId),
    Ref(RefOrigin),
    Unit,
    Bin(BinOp, Box<SymValue>, Box<SymValue>),
    Not(Box<SymValue>),
}

/// A boolean condition; holds when non-zero.
pub type Constraint = SymValue;

pub const TRUE: Constraint = SymValue::Int(1);

/// Canonical solver variable, ordered parameters < inputs < unknowns.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VarKey {
    Param(String, String),
    Input(usize),
    Unc(u32),
}

impl core::fmt::Display for VarKey {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            VarKey::Param(func, name) => write!(f, "{func}.{name}"),
            VarKey::Input(i) => write!(f, "input[{i}]"),
            VarKey::Unc(id) => write!(f, "unc{id}"),
        }
    }
}

fn concrete_bin(op: BinOp, a: i32, b: i32) -> i32 {
    match op {
        BinOp::Add => a.wrapping_add(b),
        BinOp::Sub => a.wrapping_sub(b),
        BinOp::Mul => a.wrapping_mul(b),
        BinOp::Eq => (a == b) as i32,
        BinOp::Ne => (a != b) as i32,
        BinOp::Lt => (a < b) as i32,
        BinOp::Le => (a <= b) as i32,
        BinOp::Gt => (a > b) as i32,
        BinOp::Ge => (a >= b) as i32,
        BinOp::And => (a != 0 && b != 0) as i32,
        BinOp::Or => (a != 0 || b != 0) as i32,
    }
}

impl SymValue {
    pub fn param(function: &str, name: &str) -> SymValue {
        SymValue::Param(ParamVar::new(function, name))
    }

    pub fn is_true(&self) -> bool {
        matches!(self, SymValue::Int(c) if *c != 0)
    }

    pub fn is_false(&self) -> bool {
        matches!(self, SymValue::Int(0))
    }

    /// Normalizes a value used as a condition into 0/1 form.
    pub fn truth(self) -> SymValue {
        match &self {
            SymValue::Int(c) => SymValue::Int((*c != 0) as i32),
            SymValue::Bin(op, ..)
                if matches!(
                    op,
                    BinOp::Eq
                        | BinOp::Ne
                        | BinOp::Lt
                        | BinOp::Le
                        | BinOp::Gt
                        | BinOp::Ge
                        | BinOp::And
                        | BinOp::Or
                ) =>
            {
                self
            }
            SymValue::Not(_) => self,
            _ => SymValue::Bin(BinOp::Ne, Box::new(self), Box::new(SymValue::Int(0))),
        }
    }

    /// Folding constructor: ground subtrees evaluate immediately (32-bit
    /// wrap-around), and the usual identities collapse (`x+0`, `x*1`, `x*0`,
    /// short-circuits on constant logical operands).
    pub fn bin(op: BinOp, lhs: SymValue, rhs: SymValue) -> SymValue {
        if let (SymValue::Int(a), SymValue::Int(b)) = (&lhs, &rhs) {
            return SymValue::Int(concrete_bin(op, *a, *b));
        }
        match (op, &lhs, &rhs) {
            (BinOp::Add, _, SymValue::Int(0)) => lhs,
            (BinOp::Add, SymValue::Int(0), _) => rhs,
            (BinOp::Sub, _, SymValue::Int(0)) => lhs,
            (BinOp::Mul, _, SymValue::Int(1)) => lhs,
            (BinOp::Mul, SymValue::Int(1), _) => rhs,
            (BinOp::Mul, _, SymValue::Int(0)) | (BinOp::Mul, SymValue::Int(0), _) => {
                SymValue::Int(0)
            }
            (BinOp::And, SymValue::Int(0), _) | (BinOp::And, _, SymValue::Int(0)) => {
                SymValue::Int(0)
            }
            (BinOp::And, SymValue::Int(_), _) => rhs.truth(),
            (BinOp::And, _, SymValue::Int(_)) => lhs.truth(),
            (BinOp::Or, SymValue::Int(c), _) if *c != 0 => SymValue::Int(1),
            (BinOp::Or, _, SymValue::Int(c)) if *c != 0 => SymValue::Int(1),
            (BinOp::Or, SymValue::Int(0), _) => rhs.truth(),
            (BinOp::Or, _, SymValue::Int(0)) => lhs.truth(),
            _ => SymValue::Bin(op, Box::new(lhs), Box::new(rhs)),
        }
    }

    /// `!v`, folding constants and flipping comparisons.
    pub fn negate(v: SymValue) -> SymValue {
        match v {
            SymValue::Int(c) => SymValue::Int((c == 0) as i32),
            SymValue::Not(inner) => inner.truth(),
            SymValue::Bin(op, l, r) => {
                let flipped = match op {
                    BinOp::Eq => Some(BinOp::Ne),
                    BinOp::Ne => Some(BinOp::Eq),
                    BinOp::Lt => Some(BinOp::Ge),
                    BinOp::Le => Some(BinOp::Gt),
                    BinOp::Gt => Some(BinOp::Le),
                    BinOp::Ge => Some(BinOp::Lt),
                    _ => None,
                };
                match flipped {
                    Some(f) => SymValue::Bin(f, l, r),
                    None => SymValue::Not(Box::new(SymValue::Bin(op, l, r))),
                }
            }
            other => SymValue::Not(Box::new(other)),
        }
    }

    pub fn and(lhs: SymValue, rhs: SymValue) -> SymValue {
        SymValue::bin(BinOp::And, lhs, rhs)
    }

    pub fn or(lhs: SymValue, rhs: SymValue) -> SymValue {
        SymValue::bin(BinOp::Or, lhs, rhs)
    }

    /// Conjunction of a clause list; empty is `true`.
    pub fn conjoin(clauses: &[Constraint]) -> Constraint {
        let mut acc = TRUE;
        for c in clauses {
            acc = SymValue::and(acc, c.clone());
        }
        acc
    }

    pub fn collect_vars(&self, into: &mut BTreeSet<VarKey>) {
        match self {
            SymValue::InputInt(i) => {
                into.insert(VarKey::Input(*i));
            }
            SymValue::Param(p) => {
                into.insert(VarKey::Param(p.function.clone(), p.name.clone()));
            }
            SymValue::Unconstrained(u) => {
                into.insert(VarKey::Unc(u.0));
            }
            SymValue::Bin(_, l, r) => {
                l.collect_vars(into);
                r.collect_vars(into);
            }
            SymValue::Not(e) => e.collect_vars(into),
            _ => {}
        }
    }

    pub fn vars(&self) -> BTreeSet<VarKey> {
        let mut s = BTreeSet::new();
        self.collect_vars(&mut s);
        s
    }

    /// Exact ground evaluation over integer leaves resolved by `lookup`.
    /// Arithmetic saturates in i64; the solver domain keeps values far from
    /// the 32-bit edge, so this matches the wrap-around engine semantics for
    /// everything the solver reasons about.
    pub fn eval_ground<F>(&self, lookup: &F) -> i64
    where
        F: Fn(&VarKey) -> i64,
    {
        match self {
            SymValue::Int(c) => i64::from(*c),
            SymValue::InputInt(i) => lookup(&VarKey::Input(*i)),
            SymValue::Param(p) => lookup(&VarKey::Param(p.function.clone(), p.name.clone())),
            SymValue::Unconstrained(u) => lookup(&VarKey::Unc(u.0)),
            SymValue::Bin(op, l, r) => {
                let a = l.eval_ground(lookup);
                let b = r.eval_ground(lookup);
                match op {
                    BinOp::Add => a.saturating_add(b),
                    BinOp::Sub => a.saturating_sub(b),
                    BinOp::Mul => a.saturating_mul(b),
                    BinOp::Eq => (a == b) as i64,
                    BinOp::Ne => (a != b) as i64,
                    BinOp::Lt => (a < b) as i64,
                    BinOp::Le => (a <= b) as i64,
                    BinOp::Gt => (a > b) as i64,
                    BinOp::Ge => (a >= b) as i64,
                    BinOp::And => (a != 0 && b != 0) as i64,
                    BinOp::Or => (a != 0 || b != 0) as i64,
                }
            }
            SymValue::Not(e) => (e.eval_ground(lookup) == 0) as i64,
            SymValue::Str(_) | SymValue::Ref(_) | SymValue::Unit => 0,
        }
    }

    /// True when the model satisfies this constraint.
    pub fn holds_under(&self, model: &BTreeMap<VarKey, i32>) -> bool {
        self.eval_ground(&|k| model.get(k).copied().map(i64::from).unwrap_or(0)) != 0
    }
}

/// A string value: an ordered list of segments, each either literal text or
/// data derived from an input (or from an untracked source), carrying a
/// sanitized flag.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TaintString {
    pub segments: Vec<Segment>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Segment {
    Literal(String),
    /// The k-th `input_str()` consumed in the current context.
    Input { index: usize, sanitized: bool },
    /// A string-typed parameter of the current function.
    Param { function: String, name: String, sanitized: bool },
    /// A string of unknown provenance; never input-derived as far as the
    /// analysis can tell.
    Opaque { id: u32, sanitized: bool },
}

impl TaintString {
    pub fn literal(s: impl Into<String>) -> TaintString {
        TaintString { segments: alloc::vec![Segment::Literal(s.into())] }
    }

    pub fn input(index: usize) -> TaintString {
        TaintString { segments: alloc::vec![Segment::Input { index, sanitized: false }] }
    }

    pub fn param(function: &str, name: &str) -> TaintString {
        TaintString {
            segments: alloc::vec![Segment::Param {
                function: function.into(),
                name: name.into(),
                sanitized: false,
            }],
        }
    }

    pub fn opaque(id: u32) -> TaintString {
        TaintString { segments: alloc::vec![Segment::Opaque { id, sanitized: false }] }
    }

    /// Marks every non-literal segment sanitized.
    pub fn sanitize(&self) -> TaintString {
        TaintString {
            segments: self
                .segments
                .iter()
                .map(|s| match s {
                    Segment::Literal(t) => Segment::Literal(t.clone()),
                    Segment::Input { index, .. } => Segment::Input { index: *index, sanitized: true },
                    Segment::Param { function, name, .. } => Segment::Param {
                        function: function.clone(),
                        name: name.clone(),
                        sanitized: true,
                    },
                    Segment::Opaque { id, .. } => Segment::Opaque { id: *id, sanitized: true },
                })
                .collect(),
        }
    }

    pub fn concat(&self, other: &TaintString) -> TaintString {
        let mut segments = self.segments.clone();
        for seg in &other.segments {
            match (segments.last_mut(), seg) {
                (Some(Segment::Literal(a)), Segment::Literal(b)) => a.push_str(b),
                _ => segments.push(seg.clone()),
            }
        }
        TaintString { segments }
    }

    /// Input-tape string indices that reach this value unsanitized.
    pub fn unsanitized_inputs(&self) -> Vec<usize> {
        self.segments
            .iter()
            .filter_map(|s| match s {
                Segment::Input { index, sanitized: false } => Some(*index),
                _ => None,
            })
            .collect()
    }

    pub fn has_unsanitized_input(&self) -> bool {
        !self.unsanitized_inputs().is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folding_identities() {
        let x = SymValue::param("f", "x");
        assert_eq!(SymValue::bin(BinOp::Add, x.clone(), SymValue::Int(0)), x);
        assert_eq!(SymValue::bin(BinOp::Mul, x.clone(), SymValue::Int(1)), x);
        assert_eq!(SymValue::bin(BinOp::Mul, x.clone(), SymValue::Int(0)), SymValue::Int(0));
        assert_eq!(
            SymValue::bin(BinOp::Gt, SymValue::Int(7), SymValue::Int(10)),
            SymValue::Int(0)
        );
    }

    #[test]
    fn wrapping_fold() {
        assert_eq!(
            SymValue::bin(BinOp::Add, SymValue::Int(i32::MAX), SymValue::Int(1)),
            SymValue::Int(i32::MIN)
        );
    }

    #[test]
    fn negate_flips_comparisons() {
        let x = SymValue::param("f", "x");
        let gt = SymValue::bin(BinOp::Gt, x.clone(), SymValue::Int(10));
        assert_eq!(
            SymValue::negate(gt),
            SymValue::bin(BinOp::Le, x, SymValue::Int(10))
        );
    }

    #[test]
    fn var_order_is_param_then_input_then_unc() {
        let mut keys = alloc::vec![
            VarKey::Unc(0),
            VarKey::Input(3),
            VarKey::Param("f".into(), "x".into()),
            VarKey::Param("f".into(), "a".into()),
        ];
        keys.sort();
        assert_eq!(
            keys,
            alloc::vec![
                VarKey::Param("f".into(), "a".into()),
                VarKey::Param("f".into(), "x".into()),
                VarKey::Input(3),
                VarKey::Unc(0),
            ]
        );
    }

    #[test]
    fn taint_concat_and_sanitize() {
        let q = TaintString::literal("SELECT * FROM t WHERE name=").concat(&TaintString::input(0));
        assert_eq!(q.unsanitized_inputs(), alloc::vec![0]);
        assert!(q.sanitize().unsanitized_inputs().is_empty());
        let lit = TaintString::literal("a").concat(&TaintString::literal("b"));
        assert_eq!(lit.segments.len(), 1);
    }
}
