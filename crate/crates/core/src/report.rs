/// One failed check together with the tuple that witnesses it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub check: &'static str,
    pub witness: Vec<usize>,
    pub message: String,
}

/// Outcome of a validator. An empty report means every check passed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fail(&mut self, check: &'static str, witness: Vec<usize>, message: String) {
        self.violations.push(Violation {
            check,
            witness,
            message,
        });
    }

    /// Records only the first failure of each named check.
    pub fn fail_once(&mut self, check: &'static str, witness: Vec<usize>, message: String) {
        if !self.has_check(check) {
            self.fail(check, witness, message);
        }
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_check(&self, check: &str) -> bool {
        self.violations.iter().any(|v| v.check == check)
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    /// `Ok(())` when empty, else a precondition error listing every violation.
    pub fn into_result(self, context: &str) -> crate::Result<()> {
        if self.is_ok() {
            return Ok(());
        }
        let lines: Vec<String> = self
            .violations
            .iter()
            .map(|v| format!("{} at {:?}: {}", v.check, v.witness, v.message))
            .collect();
        Err(crate::Error::Precondition(format!("{context}: {}", lines.join("; "))))
    }
}
