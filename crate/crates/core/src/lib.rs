pub mod qpoly;
pub mod certify;
pub mod targets;
pub mod log;
pub mod builder;
pub mod checker;
pub mod evaluator;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/arithmetic.md")]
    pub struct Arithmetic;
    #[doc = include_str!("../../../book/src/targets.md")]
    pub struct Targets;
    #[doc = include_str!("../../../book/src/construction.md")]
    pub struct Construction;
    #[doc = include_str!("../../../book/src/certificates.md")]
    pub struct Certificates;
    #[doc = include_str!("../../../book/src/verification.md")]
    pub struct Verification;
    #[doc = include_str!("../../../book/src/evaluation.md")]
    pub struct Evaluation;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
