//! `opstab orbit`: tabulate c_n = ⟨Tⁿx, y⟩ with running density and
//! Wiener statistics as CSV, optionally with a static SVG plot.

use std::path::Path;

use opstab_core::stability::{correlation_sequence, density_profile};
use opstab_core::{Error, Result};

use crate::csvout::orbit_csv;
use crate::output::{emit_text, write_atomic};
use crate::probes::parse_probe_list;
use crate::sources::resolve_operator;
use crate::svg::orbit_plot;

pub fn run(
    spec: &str,
    probe_args: &[String],
    horizon: u64,
    eps: f64,
    seed: u64,
    out: Option<&Path>,
    plot: Option<&Path>,
) -> Result<()> {
    let op = resolve_operator(spec)?;
    let probes = parse_probe_list(probe_args, seed, &op)?;
    let (x, y) = match probes.as_slice() {
        [x] => (x, x),
        [x, y] => (x, y),
        _ => {
            return Err(Error::domain(format!(
                "orbit takes one probe (x = y) or two (x, y); got {}",
                probes.len()
            )))
        }
    };
    let series = correlation_sequence(&op, x, y, horizon)?;
    let profile = density_profile(&series, eps)?;
    emit_text(out, &orbit_csv(&series, &profile))?;
    if let Some(path) = plot {
        write_atomic(path, orbit_plot(&series, &profile, spec).as_bytes())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_probes_are_rejected() {
        let args: Vec<String> = ["e1", "e2", "e3"].iter().map(|s| s.to_string()).collect();
        let e = run("preset:shift", &args, 10, 0.5, 0, None, None).unwrap_err();
        assert!(e.to_string().contains("orbit takes"));
    }

    #[test]
    fn csv_and_plot_land_on_disk() {
        let dir = std::env::temp_dir().join(format!("opstab-orbit-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let csv = dir.join("orbit.csv");
        let svg = dir.join("orbit.svg");
        let args = vec!["e1".to_string(), "e5".to_string()];
        run("preset:shift", &args, 12, 0.5, 0, Some(&csv), Some(&svg)).unwrap();
        let text = std::fs::read_to_string(&csv).unwrap();
        assert!(text.lines().nth(4).unwrap().starts_with("4,1.0,"));
        assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
