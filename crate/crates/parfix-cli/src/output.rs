//! Trace and summary rendering.
//!
//! Floats are printed with 17 significant digits so that written values
//! parse back bit-exactly and repeated runs diff clean.

use parfix::{RunResult, RunTrace};

pub fn float17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Comma-separated trace with one fixed header row. `selected_index` is
/// printed 1-based, matching operator positions in the problem file;
/// absent values render as empty fields.
pub fn trace_csv(trace: &RunTrace) -> String {
    let mut out =
        String::from("n,alpha_n,selected_index,selected_displacement,residual,dist_to_oracle\n");
    for row in &trace.rows {
        let alpha = row.alpha_n.map(float17).unwrap_or_default();
        let dist = row.dist_to_reference.map(float17).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.n,
            alpha,
            row.selected_index + 1,
            float17(row.selected_displacement),
            float17(row.residual),
            dist,
        ));
    }
    out
}

pub fn summary_toml(scheme: &str, result: &RunResult) -> String {
    let coords: Vec<String> = result
        .final_iterate
        .coords()
        .iter()
        .map(|&c| float17(c))
        .collect();
    format!(
        "scheme = \"{}\"\nconverged = {}\nstop_reason = \"{}\"\niterations = {}\nfinal_residual = {}\nfinal_iterate = [{}]\n",
        scheme,
        result.converged,
        result.stop_reason.name(),
        result.iterations_used,
        float17(result.final_residual),
        coords.join(", "),
    )
}
