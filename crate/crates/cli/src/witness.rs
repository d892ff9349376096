//! Failure witnesses as replayable input documents.

use std::fmt::Write;

use tracekernel::suite::Witness;
use tracekernel::FieldSpec;

/// A document that rebuilds the algebra and modules of `w` from explicit
/// structure constants and action matrices, with one `check` task.
pub fn witness_document(w: &Witness) -> String {
    let field = FieldSpec::parse(&w.field).expect("witness field names parse");
    let fmt = |xs: &[u32]| xs.iter().map(|&x| field.format(x)).collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    let _ = writeln!(out, "version = 1");
    let _ = writeln!(out, "field = {}", w.field);
    let _ = writeln!(out, "\n[algebra A]");
    if let Some(fam) = &w.family {
        let _ = writeln!(out, "# family {fam}");
    }
    let _ = writeln!(out, "labels = {}", w.labels.join(" "));
    let _ = writeln!(out, "constants = {}", fmt(&w.constants));
    let _ = writeln!(out, "unit = {}", fmt(&w.unit));
    for m in &w.modules {
        let _ = writeln!(out, "\n[module {}]", m.role);
        let _ = writeln!(out, "# {}", m.name);
        let _ = writeln!(out, "algebra = A");
        let _ = writeln!(out, "dim = {}", m.dim);
        for (i, action) in m.actions.iter().enumerate() {
            let rows: Vec<String> = action.iter().map(|r| fmt(r)).collect();
            let _ = writeln!(out, "action[{i}] = {}", rows.join("; "));
        }
    }
    let _ = writeln!(out, "\n[task replay]");
    let _ = writeln!(out, "op = check");
    let _ = writeln!(out, "check = {}", w.check.name());
    for m in &w.modules {
        let _ = writeln!(out, "{} = {}", m.role, m.role);
    }
    out
}
