//! Text and machine-readable rendering of resource reports and traces.

use edgecore::datapath::CycleTrace;
use edgecore::resource::{compare_with_paper, paper_row, ResourceReport, PAPER_ROWS};
use edgecore::word::BitWord;
use std::fmt::Write;

fn opt_u32(v: Option<u32>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}

fn opt_f64(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| format!("{x:.2}"))
}

/// Human-readable report: the modeled table, the published reference table,
/// and per-variant deltas.
pub fn text_report(reports: &[ResourceReport]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<22} {:>9} {:>6} {:>10} {:>14} {:>11} {:>9}",
        "variant", "total_les", "luts", "logic_regs", "dedicated_bits", "path_levels", "crossings"
    )
    .unwrap();
    for r in reports {
        writeln!(
            out,
            "{:<22} {:>9} {:>6} {:>10} {:>14} {:>11} {:>9}",
            r.variant.name(),
            r.total_les,
            r.lut_functions,
            r.logic_registers,
            r.dedicated_register_bits,
            r.critical_path_levels,
            r.column_crossings
        )
        .unwrap();
    }

    out.push('\n');
    out.push_str("against the published build:\n");
    for r in reports {
        writeln!(out, "  {}:", r.variant.name()).unwrap();
        for c in compare_with_paper(r) {
            let delta = match (c.abs_delta(), c.rel_delta()) {
                (Some(a), Some(rel)) => format!("{a:+.0} ({:+.1}%)", rel * 100.0),
                _ => "-".to_string(),
            };
            writeln!(
                out,
                "    {:<24} modeled {:>8}  published {:>8}  delta {}",
                c.metric,
                opt_f64(c.modeled),
                opt_f64(c.paper),
                delta
            )
            .unwrap();
        }
    }

    out.push('\n');
    out.push_str("published reference designs:\n");
    writeln!(
        out,
        "  {:<22} {:>9} {:>6} {:>10} {:>14} {:>9}",
        "design", "total_les", "luts", "logic_regs", "dedicated_bits", "mhz"
    )
    .unwrap();
    for row in &PAPER_ROWS {
        writeln!(
            out,
            "  {:<22} {:>9} {:>6} {:>10} {:>14} {:>9}",
            row.name,
            opt_u32(row.total_les),
            opt_u32(row.lut_functions),
            opt_u32(row.logic_registers),
            opt_u32(row.dedicated_register_bits),
            opt_f64(row.max_frequency_mhz)
        )
        .unwrap();
    }
    out
}

/// Stable `key=value` lines, one block per variant. Keys are namespaced
/// `resource.`, `path.` and `paper.`; absent published values render as NA.
pub fn machine_report(reports: &[ResourceReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let row = paper_row(r.variant);
        writeln!(out, "variant={}", r.variant.name()).unwrap();
        writeln!(out, "resource.total_les={}", r.total_les).unwrap();
        writeln!(out, "resource.lut_functions={}", r.lut_functions).unwrap();
        writeln!(out, "resource.logic_registers={}", r.logic_registers).unwrap();
        writeln!(out, "resource.dedicated_register_bits={}", r.dedicated_register_bits).unwrap();
        writeln!(out, "resource.line_buffer_bits={}", r.line_buffer_bits).unwrap();
        writeln!(out, "path.levels={}", r.critical_path_levels).unwrap();
        writeln!(out, "path.column_crossings={}", r.column_crossings).unwrap();
        writeln!(out, "paper.total_les={}", opt_u32(row.total_les)).unwrap();
        writeln!(out, "paper.lut_functions={}", opt_u32(row.lut_functions)).unwrap();
        writeln!(out, "paper.logic_registers={}", opt_u32(row.logic_registers)).unwrap();
        writeln!(
            out,
            "paper.dedicated_register_bits={}",
            opt_u32(row.dedicated_register_bits)
        )
        .unwrap();
        writeln!(out, "paper.max_frequency_mhz={}", opt_f64(row.max_frequency_mhz)).unwrap();
    }
    out
}

fn chain(entries: &[Option<BitWord>; 2]) -> String {
    let show = |e: &Option<BitWord>| e.map_or_else(|| "-".to_string(), |w| w.to_string());
    format!("[{}, {}]", show(&entries[0]), show(&entries[1]))
}

/// Per-cycle dump of everything the datapath computed.
pub fn trace_dump(traces: &[CycleTrace]) -> String {
    let mut out = String::new();
    for t in traces {
        let p = t.window.pixels();
        writeln!(out, "cycle {} center=({},{})", t.cycle, t.row, t.col).unwrap();
        writeln!(
            out,
            "  window   [{:>3} {:>3} {:>3} | {:>3} {:>3} {:>3} | {:>3} {:>3} {:>3}]",
            p[0][0], p[0][1], p[0][2], p[1][0], p[1][1], p[1][2], p[2][0], p[2][1], p[2][2]
        )
        .unwrap();
        if let Some(u) = t.u_now {
            writeln!(out, "  colsum   u_now={} chain={}", u, chain(&t.colsum_chain)).unwrap();
        }
        if let Some(v) = t.v_now {
            writeln!(out, "  coldiff  v_now={} chain={}", v, chain(&t.coldiff_chain)).unwrap();
        }
        match t.gx_pair {
            Some(pair) => writeln!(
                out,
                "  gx       4:2 sum={} carry={} -> {} ({})",
                pair.sum,
                pair.carry,
                t.gradient.gx,
                t.gradient.gx_value()
            )
            .unwrap(),
            None => writeln!(out, "  gx       {} ({})", t.gradient.gx, t.gradient.gx_value())
                .unwrap(),
        }
        match t.gy_pair {
            Some(pair) => writeln!(
                out,
                "  gy       p2pp sum={} carry={} -> {} ({})",
                pair.sum,
                pair.carry,
                t.gradient.gy,
                t.gradient.gy_value()
            )
            .unwrap(),
            None => writeln!(out, "  gy       {} ({})", t.gradient.gy, t.gradient.gy_value())
                .unwrap(),
        }
        writeln!(out, "  out      magnitude={} value={}", t.magnitude, t.output).unwrap();
    }
    out
}
