//! Script language and driver for the `svlab` command.

pub mod ast;
pub mod error;
pub mod eval;
pub mod lexer;
pub mod parser;
pub mod printer;
pub mod report;

pub use error::{Pos, ScriptError};
pub use eval::{run_script, Options, Run};
pub use parser::parse;
pub use printer::print;
pub use report::{Report, Status};
