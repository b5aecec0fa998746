use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("{vertices} vertices exceed the enumeration cap of {cap}")]
    SizeLimit { vertices: usize, cap: usize },

    #[error("maximin share undefined: {components} components cannot form {bundles} bundles")]
    UndefinedMms { components: usize, bundles: usize },

    #[error("graph is not {expected}")]
    ClassMismatch { expected: &'static str },

    #[error("block is neither a cycle nor a clique")]
    UnsupportedBlock,

    /// A step the correctness argument rules out has happened. Always a bug.
    #[error("internal guarantee violated: {0}")]
    InternalGuarantee(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn guarantee(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InternalGuarantee(msg()))
    }
}
