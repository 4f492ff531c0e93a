use std::io::{self, Write};

use revolve_core::monotone::{Direction, HypothesisReport, MonotonePartition, Violation};
use revolve_core::volume::VolumeReport;

use crate::{KeplerOutput, PartitionOutput};

/// `v` rounded to `digits` significant digits. Plain decimal notation for
/// magnitudes in `[1e-5, 1e15)`, scientific otherwise.
pub fn significant(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.*e}", digits - 1)
    }
}

fn direction(d: Direction) -> &'static str {
    match d {
        Direction::Increasing => "increasing",
        Direction::Decreasing => "decreasing",
    }
}

fn partition_lines(out: &mut dyn Write, p: &MonotonePartition) -> io::Result<()> {
    for (piece, d) in p.pieces() {
        writeln!(
            out,
            "  [{}, {}]  {}",
            significant(piece.lo, 12),
            significant(piece.hi, 12),
            direction(d)
        )?;
    }
    Ok(())
}

pub fn violations(out: &mut dyn Write, vs: &[Violation]) -> io::Result<()> {
    for v in vs {
        let rule = serde_json::to_value(v.rule).map_err(io::Error::from)?;
        writeln!(
            out,
            "  {} at {}: {}",
            rule.as_str().unwrap_or("?"),
            significant(v.location, 12),
            v.detail
        )?;
    }
    Ok(())
}

pub fn volume(out: &mut dyn Write, r: &VolumeReport) -> io::Result<()> {
    writeln!(out, "value           {}", significant(r.value, 12))?;
    writeln!(out, "method          {}", r.method)?;
    writeln!(out, "sign_factor     {:+}", r.sign_factor)?;
    writeln!(out, "error_estimate  {:.3e}", r.error_estimate)?;
    writeln!(out, "converged       {}", r.converged)?;
    if let Some(p) = &r.partition {
        writeln!(out, "partition")?;
        partition_lines(out, p)?;
    }
    if !r.cross_checks.is_empty() {
        writeln!(out, "cross-checks")?;
        writeln!(
            out,
            "  {:<18} {:>20} {:>11} {:>11}  ok",
            "method", "value", "|delta|", "tolerance"
        )?;
        for c in &r.cross_checks {
            writeln!(
                out,
                "  {:<18} {:>20} {:>11.3e} {:>11.3e}  {}",
                c.method.to_string(),
                significant(c.value, 12),
                c.delta,
                c.tolerance,
                if c.passed { "yes" } else { "NO" }
            )?;
        }
    }
    if !r.warnings.is_empty() {
        writeln!(out, "warnings")?;
        for w in &r.warnings {
            writeln!(out, "  {w}")?;
        }
    }
    Ok(())
}

pub fn partition(out: &mut dyn Write, r: &PartitionOutput) -> io::Result<()> {
    writeln!(out, "interior extrema  {}", r.partition.interior_count())?;
    writeln!(out, "pieces")?;
    partition_lines(out, &r.partition)?;
    writeln!(
        out,
        "f(a) = {}, f(b) = {}",
        significant(r.f_a, 12),
        significant(r.f_b, 12)
    )?;
    match (r.lemma1, &r.lemma1_detail) {
        (Some(true), _) => writeln!(out, "lemma 1 parity   holds"),
        (Some(false), _) => writeln!(out, "lemma 1 parity   fails"),
        (None, detail) => writeln!(
            out,
            "lemma 1 parity   not applicable: {}",
            detail.as_deref().unwrap_or("")
        ),
    }
}

pub fn hypotheses(out: &mut dyn Write, r: &HypothesisReport) -> io::Result<()> {
    writeln!(out, "satisfied  {}", r.satisfied)?;
    writeln!(
        out,
        "c = {}, d = {}",
        significant(r.c, 12),
        significant(r.d, 12)
    )?;
    if let Some(p) = &r.partition {
        writeln!(out, "partition")?;
        partition_lines(out, p)?;
    }
    if !r.violations.is_empty() {
        writeln!(out, "violations")?;
        violations(out, &r.violations)?;
    }
    Ok(())
}

pub fn kepler(out: &mut dyn Write, r: &KeplerOutput) -> io::Result<()> {
    writeln!(out, "eps  {}", r.eps)?;
    for p in &r.forward {
        writeln!(
            out,
            "forward  y = {}  ->  x = {}",
            significant(p.y, 12),
            significant(p.x, 12)
        )?;
    }
    for p in &r.inverse {
        writeln!(
            out,
            "inverse  x = {}  ->  y = {}  (residual {:.1e}, {} iterations)",
            significant(p.x, 12),
            significant(p.y, 12),
            p.residual,
            p.iterations
        )?;
    }
    writeln!(out, "V_Y  {}", significant(r.reference_volumes.v_y, 12))?;
    writeln!(out, "V_X  {}", significant(r.reference_volumes.v_x, 12))
}

#[cfg(test)]
mod tests {
    use super::significant;

    #[test]
    fn significant_digits() {
        assert_eq!(significant(122.16182208515694, 12), "122.161822085");
        assert_eq!(significant(-0.5, 3), "-0.500");
        assert_eq!(significant(1.234567890123456, 15), "1.23456789012346");
        assert_eq!(significant(0.0, 15), "0");
        assert_eq!(significant(1.5e-9, 3), "1.50e-9");
        assert_eq!(significant(1e20, 2), "1.0e20");
    }
}
