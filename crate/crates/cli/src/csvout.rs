//! CSV emission for orbit data. Floats use the shortest round-trip form
//! so reruns are byte-identical.

use opstab_core::stability::{CorrelationSeries, DensityProfile};

pub const ORBIT_HEADER: &str = "n,re_c_n,im_c_n,abs_c_n,density,wiener";

/// One row per exponent `n = 1..=N`: the correlation value, its modulus,
/// the running density of sub-ε terms, and the running Wiener average.
pub fn orbit_csv(series: &CorrelationSeries, profile: &DensityProfile) -> String {
    let n_max = series.n_max().min(profile.horizon());
    let mut out = String::with_capacity(64 * (n_max as usize + 1));
    out.push_str(ORBIT_HEADER);
    out.push('\n');
    for n in 1..=n_max {
        let c = series.value(n).expect("value within horizon");
        out.push_str(&format!(
            "{},{:?},{:?},{:?},{:?},{:?}\n",
            n,
            c.re,
            c.im,
            c.norm(),
            profile.density(n).expect("density within horizon"),
            series.wiener(n).expect("wiener within horizon"),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use opstab_core::operator::OperatorRep;
    use opstab_core::space::{CompositeIndex, SparseVector, Vector};
    use opstab_core::stability::{correlation_sequence, density_profile};

    #[test]
    fn rows_start_at_one_and_carry_all_columns() {
        let op = OperatorRep::identity();
        let x = Vector::Sparse(SparseVector::basis(CompositeIndex::new(0, 0)));
        let series = correlation_sequence(&op, &x, &x, 3).unwrap();
        let profile = density_profile(&series, 0.5).unwrap();
        let csv = orbit_csv(&series, &profile);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], ORBIT_HEADER);
        assert_eq!(lines[1], "1,1.0,0.0,1.0,0.0,1.0");
        assert_eq!(lines[2], "2,1.0,0.0,1.0,0.0,1.0");
        assert_eq!(lines[3], "3,1.0,0.0,1.0,0.0,1.0");
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn shift_orbit_has_a_single_nonzero_row() {
        let op = OperatorRep::RightShift { branches: 1 };
        let x = Vector::Sparse(SparseVector::basis(CompositeIndex::new(0, 0)));
        let y = Vector::Sparse(SparseVector::basis(CompositeIndex::new(0, 2)));
        let series = correlation_sequence(&op, &x, &y, 5).unwrap();
        let profile = density_profile(&series, 0.5).unwrap();
        let csv = orbit_csv(&series, &profile);
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[2].starts_with("2,1.0,0.0,1.0,"));
        for n in [1usize, 3, 4, 5] {
            assert!(lines[n].starts_with(&format!("{n},0.0,")), "row {}: {}", n, lines[n]);
        }
    }
}
