//! Error types shared by every layer of the model.
//!
//! Errors carry the offending field or block name so the CLI can print a
//! single machine-parsable `context:field:message` line.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A profile or scenario file could not be read or parsed.
    #[error("parse:{context}:{message}")]
    Parse { context: String, message: String },

    /// A loaded value violates an invariant; names the field.
    #[error("validation:{field}:{message}")]
    Validation { field: String, message: String },

    /// Inconsistent configuration (unknown memory level, unsupported
    /// constellation, non-integral codeword count, ...).
    #[error("config:{field}:{message}")]
    Config { field: String, message: String },

    /// An operation was called outside its mathematical domain.
    #[error("domain:{context}:{message}")]
    Domain { context: String, message: String },

    /// A pipeline block's dimensions do not chain.
    #[error("shape:{block}:{message}")]
    Shape { block: String, message: String },

    /// A statistic diverges (e.g. a link that never succeeds).
    #[error("divergence:{context}:{message}")]
    Divergence { context: String, message: String },
}

impl Error {
    pub fn parse(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { context: context.into(), message: message.into() }
    }

    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation { field: field.into(), message: message.into() }
    }

    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config { field: field.into(), message: message.into() }
    }

    pub fn domain(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Domain { context: context.into(), message: message.into() }
    }

    pub fn shape(block: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Shape { block: block.into(), message: message.into() }
    }

    pub fn divergence(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Divergence { context: context.into(), message: message.into() }
    }
}
