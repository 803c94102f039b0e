use crate::residual::Residual;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// A hypothesis of the check does not hold at the point.
    Skipped,
}

impl CheckStatus {
    pub fn name(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        }
    }
}

/// Outcome of one named check at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckRecord<T> {
    pub name: String,
    pub status: CheckStatus,
    pub residual: Option<Residual<T>>,
    pub note: Option<String>,
    /// Named intermediate quantities, in insertion order.
    pub values: Vec<(String, T)>,
}

impl<T: Scalar> CheckRecord<T> {
    /// Passes iff the residual is within `tol`.
    pub fn measured(name: &str, residual: Residual<T>, tol: T) -> Self {
        CheckRecord {
            name: name.to_string(),
            status: CheckStatus::from_bool(residual.passes(tol)),
            residual: Some(residual),
            note: None,
            values: Vec::new(),
        }
    }

    /// A verdict without a single numeric residual (equivalences, implications).
    pub fn logical(name: &str, ok: bool) -> Self {
        CheckRecord {
            name: name.to_string(),
            status: CheckStatus::from_bool(ok),
            residual: None,
            note: None,
            values: Vec::new(),
        }
    }

    pub fn skipped(name: &str, note: impl Into<String>) -> Self {
        CheckRecord {
            name: name.to_string(),
            status: CheckStatus::Skipped,
            residual: None,
            note: Some(note.into()),
            values: Vec::new(),
        }
    }

    /// Keeps the residual for reporting but marks the hypothesis as unmet.
    pub fn downgrade(mut self, note: impl Into<String>) -> Self {
        self.status = CheckStatus::Skipped;
        self.note = Some(note.into());
        self
    }

    pub fn with_value(mut self, key: &str, value: T) -> Self {
        self.values.push((key.to_string(), value));
        self
    }

    pub fn with_values<'a>(mut self, values: impl IntoIterator<Item = (&'a str, T)>) -> Self {
        self.values.extend(values.into_iter().map(|(k, v)| (k.to_string(), v)));
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn value(&self, key: &str) -> Option<T> {
        self.values.iter().find(|(k, _)| k == key).map(|&(_, v)| v)
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// Finds a record by name.
pub fn find<'a, T>(records: &'a [CheckRecord<T>], name: &str) -> Option<&'a CheckRecord<T>> {
    records.iter().find(|r| r.name == name)
}
