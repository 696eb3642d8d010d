use std::fmt;

/// Exit status 2: the request itself is invalid.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Library errors caused by bad parameters count as usage errors.
pub fn classify_core(e: mubwit::Error) -> anyhow::Error {
    use mubwit::Error as E;
    match e {
        E::OutOfRange(_) | E::Unsupported(_) | E::DimensionMismatch { .. } => usage(e.to_string()),
        other => other.into(),
    }
}

pub fn exit_code(e: &anyhow::Error) -> i32 {
    if e.downcast_ref::<UsageError>().is_some() {
        2
    } else {
        1
    }
}
