//! Check-line reports: a fixed, diffable text format shared by the CLI
//! commands and the corpus suite.

use num_rational::BigRational;

use crate::hp::{Ctx, HPReal};

/// Significant digits used for values in check lines.
pub const LINE_DIGITS: usize = 21;

/// One verified inequality or identity.
///
/// Renders as `CHECK <name> lhs=<v> rhs=<v> const=<p/q> margin=<v> PASS|FAIL`
/// with `margin = rhs - lhs`.
pub struct CheckLine {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub constant: String,
    pub margin: String,
    pub pass: bool,
}

impl CheckLine {
    /// Builds a line from high-precision sides; the pass flag is the
    /// caller's verdict, not re-derived from the printed digits.
    pub fn from_values(
        ctx: &Ctx,
        name: impl Into<String>,
        lhs: &HPReal,
        rhs: &HPReal,
        constant: impl Into<String>,
        pass: bool,
    ) -> Self {
        let margin = ctx.sub(rhs, lhs);
        CheckLine {
            name: name.into(),
            lhs: ctx.format_sig(lhs, LINE_DIGITS),
            rhs: ctx.format_sig(rhs, LINE_DIGITS),
            constant: constant.into(),
            margin: ctx.format_sig(&margin, LINE_DIGITS),
            pass,
        }
    }

    /// A FAIL line recording that an entry could not be processed.
    pub fn error(name: impl Into<String>) -> Self {
        CheckLine {
            name: name.into(),
            lhs: "error".into(),
            rhs: "error".into(),
            constant: "1".into(),
            margin: "0".into(),
            pass: false,
        }
    }

    pub fn render(&self) -> String {
        format!(
            "CHECK {} lhs={} rhs={} const={} margin={} {}",
            self.name,
            self.lhs,
            self.rhs,
            self.constant,
            self.margin,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

/// Display form of an exact rational constant (`4/3`, or `2` when the
/// denominator is one).
pub fn rational_label(q: &BigRational) -> String {
    q.to_string()
}

/// An ordered list of report lines with an aggregate verdict.
#[derive(Default)]
pub struct Report {
    lines: Vec<String>,
    checks: usize,
    failures: usize,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    /// Appends an informational line that does not affect the verdict.
    pub fn push_info(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    pub fn push_check(&mut self, check: CheckLine) {
        if !check.pass {
            self.failures += 1;
        }
        self.checks += 1;
        self.lines.push(check.render());
    }

    pub fn lines(&self) -> &[String] {
        &self.lines
    }

    pub fn checks(&self) -> usize {
        self.checks
    }

    pub fn failures(&self) -> usize {
        self.failures
    }

    pub fn all_pass(&self) -> bool {
        self.failures == 0
    }

    /// 0 when every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn render(&self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }
}
