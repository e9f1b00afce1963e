//! Expression evaluation from raw strings and randomized rooted-tree
//! isomorphism, both computed by tree contraction.

pub mod error;
pub mod eval;
pub mod iso;
pub mod lexer;
pub mod parens;
pub mod simplify;

pub use error::{ExprError, ExprFault};
pub use eval::{evaluate_expression, show, Arith, Evaluation, ExprNode, Mobius, Q};
pub use iso::{tree_isomorphism, IsoReport, Verdict};
pub use lexer::{tokenize, Op};
pub use parens::{match_parens, stack_match, ParenMatch, Unbalanced};
pub use simplify::{simplify_expression, ExprTree, OpNode};
