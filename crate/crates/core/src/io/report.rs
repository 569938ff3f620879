use std::fmt::Write as _;

use crate::experiment::Comparison;
use crate::io::format_value;

/// Plain-text summary of a QM/HV comparison.
pub fn comparison_report(c: &Comparison) -> String {
    let mut out = String::new();
    out.push_str("QM vs hidden-variable comparison (entangled ancilla, detector D0)\n\n");
    out.push_str("Largest |QM - HV| over phi, per alpha and partner branch:\n");
    let _ = writeln!(out, "{:>16} {:>7} {:>16} {:>16}", "alpha", "branch", "max|QM-HV|", "at phi");
    for s in &c.summaries {
        let _ = writeln!(
            out,
            "{:>16} {:>7} {:>16} {:>16}",
            format_value(s.alpha),
            s.branch,
            format_value(s.max_divergence),
            format_value(s.at_phi)
        );
    }

    let hv_spread = hv_spread(c);
    out.push('\n');
    if hv_spread <= crate::tol::ALGEBRAIC {
        out.push_str("HV identical across alpha (max spread ");
    } else {
        out.push_str("HV VARIES across alpha (max spread ");
    }
    let _ = writeln!(out, "{}).", format_value(hv_spread));

    let d = &c.discrepancy;
    out.push_str("\nClosed form as-printed vs simulation:\n");
    let _ = writeln!(
        out,
        "  at alpha={}, phi={}, branch={}: as-printed {}, simulated conditional {}, simulated joint {}",
        format_value(d.alpha),
        format_value(d.phi),
        d.branch,
        format_value(d.printed),
        format_value(d.conditional),
        format_value(d.joint)
    );
    if d.is_discrepant(crate::tol::COMPOSED) {
        out.push_str("  DISCREPANCY: the as-printed value matches neither simulated reading.\n");
        out.push_str("  Simulated values are used for all comparisons above.\n");
    } else {
        out.push_str("  as-printed value agrees with simulation.\n");
    }
    out
}

fn hv_spread(c: &Comparison) -> f64 {
    use std::collections::BTreeMap;
    let mut by_phi: BTreeMap<u64, (f64, f64)> = BTreeMap::new();
    for r in &c.rows {
        let e = by_phi.entry(r.phi.to_bits()).or_insert((r.hv_e0, r.hv_e0));
        e.0 = e.0.min(r.hv_e0);
        e.1 = e.1.max(r.hv_e0);
    }
    by_phi.values().map(|(lo, hi)| hi - lo).fold(0.0, f64::max)
}
