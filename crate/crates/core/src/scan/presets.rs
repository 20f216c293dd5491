//! Named scan configurations.

use super::{OutputFormat, Range, ScanConfig, TruncationChoice};
use crate::realspace::{GridConfig, DEFAULT_ZERO_THRESHOLD};

/// `(name, description)` of every preset.
pub const PRESETS: &[(&str, &str)] = &[
    ("fig1a", "omega=0.01, lambda in [-1,1] x201, g in [0,3] g_s x201; A_norm"),
    ("fig1b", "omega=2, lambda in [-1,1] x201, g in [0,6] g_s x201; sigma_x"),
    ("fig1c", "omega=0.1, lambda in [-1,1] x201, g in [0,4] g_s x201; gap"),
    ("fig1d", "omega=0.5, lambda in [-1,1] x201, g in [0,6] g_s x201; gap"),
    ("fig1e", "omega=0.1, lambda in [-1,1] x201, g in [0,4] g_s x201; AP"),
    ("fig1f", "omega=0.5, lambda in [-1,1] x201, g in [0,6] g_s x201; AP"),
    ("fig2", "omega=0.01, lambda=0.5, g in [0,2] g_s x201; p_x, p_sigma"),
    ("fig3", "omega=0.5, lambda in [0,1] x101, g in [0,6] g_s x121; parity, n_z"),
    ("fig4", "omega=0.5, lambda in [-1,1] x201, g=5 g_s; parity, excitation, duality_mod, n_z"),
];

fn base(omega: f64, lambda: Range, g: Range, n_z: bool) -> ScanConfig {
    ScanConfig {
        omega,
        qubit_splitting: 1.0,
        lambda,
        g,
        truncation: TruncationChoice::Adaptive,
        n_z,
        grid: GridConfig::default(),
        zero_threshold: DEFAULT_ZERO_THRESHOLD,
        output: None,
        format: OutputFormat::Csv,
    }
}

/// Preset by name; panel suffixes such as `fig3c` resolve to their base preset.
pub fn preset(name: &str) -> Option<ScanConfig> {
    let full = Range::new(-1.0, 1.0, 201);
    let cfg = match name {
        "fig1a" => base(0.01, full, Range::new(0.0, 3.0, 201), false),
        "fig1b" => base(2.0, full, Range::new(0.0, 6.0, 201), false),
        "fig1c" => base(0.1, full, Range::new(0.0, 4.0, 201), false),
        "fig1d" => base(0.5, full, Range::new(0.0, 6.0, 201), false),
        "fig1e" => base(0.1, full, Range::new(0.0, 4.0, 201), false),
        "fig1f" => base(0.5, full, Range::new(0.0, 6.0, 201), false),
        "fig2" => base(0.01, Range::fixed(0.5), Range::new(0.0, 2.0, 201), false),
        "fig3" => base(0.5, Range::new(0.0, 1.0, 101), Range::new(0.0, 6.0, 121), true),
        "fig4" => base(0.5, full, Range::fixed(5.0), true),
        _ => {
            let stem = name.trim_end_matches(|c: char| c.is_ascii_lowercase());
            return if stem != name && PRESETS.iter().any(|(n, _)| *n == stem) { preset(stem) } else { None };
        }
    };
    Some(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_validate() {
        for (name, _) in PRESETS {
            preset(name).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn panel_aliases() {
        assert_eq!(preset("fig3c"), preset("fig3"));
        assert_eq!(preset("fig2b"), preset("fig2"));
        assert_eq!(preset("fig1e"), preset("fig1e"));
        assert!(preset("fig9").is_none());
        assert!(preset("fig1").is_none());
    }
}
