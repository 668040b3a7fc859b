use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value has a nonzero Y part; operation is only defined on Y-free elements")]
    NotYFree,

    #[error("consistency failure: {0}")]
    ConsistencyFailure(String),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("malformed network: {0}")]
    MalformedNetwork(String),

    #[error("tower height {0} is even; towers have odd height")]
    EvenHeight(u32),

    #[error("braid on {strands} strands exceeds the dense evaluation limit of {limit}")]
    TooManyStrands { strands: usize, limit: usize },

    #[error("generator {generator} out of range for {strands} strands")]
    GeneratorOutOfRange { generator: i32, strands: usize },

    #[error("tangle tensor is not a scalar multiple of the identity")]
    NotScalarMultiple,

    #[error("unknown link {0:?}")]
    UnknownLink(String),

    #[error("bad pretzel parameters ({0}, {1}, {2}): need distinct odd integers greater than 1")]
    BadPretzelParams(u32, u32, u32),

    #[error("parse error at {token:?}: {reason}")]
    Parse { token: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(token: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            token: token.into(),
            reason: reason.into(),
        }
    }
}
