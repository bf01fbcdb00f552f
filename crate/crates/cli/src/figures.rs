//! Figure presets. Each returns the curve data as a table; nothing is plotted.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use su_interferometry::analysis::{exponent_estimate, g_factor_su11, g_factor_su2, su11_scaling_points, su2_scaling_points};
use su_interferometry::interferometer::MixerParam;
use su_interferometry::table::{Cell, Table};
use su_interferometry::verify::{SU11_SWEEP_L_MAX, SU2_SWEEP_N_MAX};
use su_interferometry::{HalfInt, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig2,
    Fig3,
    Fig4,
    Fig6,
    Fig7,
    Fig8,
}

pub const ALL_PRESETS: [Preset; 6] = [Preset::Fig2, Preset::Fig3, Preset::Fig4, Preset::Fig6, Preset::Fig7, Preset::Fig8];

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig6 => "fig6",
            Preset::Fig7 => "fig7",
            Preset::Fig8 => "fig8",
        };
        f.write_str(s)
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ALL_PRESETS
            .into_iter()
            .find(|p| p.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown preset `{}`, expected one of fig2, fig3, fig4, fig6, fig7, fig8", s.trim()))
    }
}

pub const FIG2_J: HalfInt = HalfInt::from_int(15);
pub const FIG6_K: HalfInt = HalfInt::HALF;
pub const FIG6_L_MAX: usize = 10;
pub const FIG7_K: HalfInt = HalfInt::HALF;
pub const FIG7_SINH_SQ: f64 = 1.0;
pub const FIG3_ETAS: [f64; 5] = [0.05, 0.2, 0.5, 0.8, 0.95];
pub const FIG7_ETAS: [f64; 5] = [0.05, 0.2, 0.5, 1.0, 2.0];

fn grid(n: usize, step: f64) -> Vec<f64> {
    (1..=n).map(|i| (i as f64 * step * 1e12).round() / 1e12).collect()
}

/// `eta = 0.02, 0.04, ..., 1` for SU(2).
pub fn fig2_etas() -> Vec<f64> {
    grid(50, 0.02)
}

/// `eta = 0.05, 0.10, ..., 0.95`.
pub fn fig4_etas() -> Vec<f64> {
    grid(19, 0.05)
}

/// `eta = 0.1, 0.2, ..., 5`.
pub fn fig6_etas() -> Vec<f64> {
    grid(50, 0.1)
}

/// `eta = 0.05, 0.10, ..., 2`.
pub fn fig8_etas() -> Vec<f64> {
    grid(40, 0.05)
}

fn fig7_mixer() -> MixerParam {
    MixerParam::from_sinh_sq(FIG7_SINH_SQ).expect("unit gain is a valid mixer")
}

pub fn figure_table(preset: Preset) -> Result<Table> {
    match preset {
        Preset::Fig2 => {
            let mut t = Table::new(["eta", "j", "m0", "G"]);
            for m in 0..=FIG2_J.doubled() / 2 {
                let m0 = HalfInt::from_int(m);
                for &eta in &fig2_etas() {
                    let g = g_factor_su2(FIG2_J, m0, eta)?;
                    t.push(vec![eta.into(), FIG2_J.value().into(), m0.value().into(), g.value.into()]);
                }
            }
            Ok(t)
        }
        Preset::Fig3 => {
            let mut t = Table::new(["eta", "m0", "N", "ln_N", "ln_delta_phi"]);
            for eta in FIG3_ETAS {
                for (n, d) in su2_scaling_points(eta, SU2_SWEEP_N_MAX)? {
                    t.push(vec![eta.into(), Cell::Num(0.0), n.into(), n.ln().into(), d.ln().into()]);
                }
            }
            Ok(t)
        }
        Preset::Fig4 => {
            let rows = fig4_etas()
                .into_par_iter()
                .map(|eta| {
                    let e = exponent_estimate(&su2_scaling_points(eta, SU2_SWEEP_N_MAX)?)?;
                    Ok(vec![
                        eta.into(),
                        Cell::Num(0.0),
                        SU2_SWEEP_N_MAX.into(),
                        e.e.into(),
                        e.residual.into(),
                        e.points_used.into(),
                    ])
                })
                .collect::<Result<Vec<_>>>()?;
            let mut t = Table::new(["eta", "m0", "n_max", "E", "residual", "points_used"]);
            rows.into_iter().for_each(|r| t.push(r));
            Ok(t)
        }
        Preset::Fig6 => {
            let mut t = Table::new(["eta", "k", "l", "G"]);
            for l in 0..=FIG6_L_MAX {
                for &eta in &fig6_etas() {
                    let g = g_factor_su11(FIG6_K, l, eta)?;
                    t.push(vec![eta.into(), FIG6_K.value().into(), l.into(), g.value.into()]);
                }
            }
            Ok(t)
        }
        Preset::Fig7 => {
            let mut t = Table::new(["eta", "k", "sinh2beta", "l", "n_bar", "ln_n_bar", "ln_delta_phi"]);
            for eta in FIG7_ETAS {
                let pts = su11_scaling_points(FIG7_K, eta, fig7_mixer(), SU11_SWEEP_L_MAX)?;
                for (i, (n, d)) in pts.into_iter().enumerate() {
                    t.push(vec![
                        eta.into(),
                        FIG7_K.value().into(),
                        FIG7_SINH_SQ.into(),
                        (i + 1).into(),
                        n.into(),
                        n.ln().into(),
                        d.ln().into(),
                    ]);
                }
            }
            Ok(t)
        }
        Preset::Fig8 => {
            let rows = fig8_etas()
                .into_par_iter()
                .map(|eta| {
                    let e = exponent_estimate(&su11_scaling_points(FIG7_K, eta, fig7_mixer(), SU11_SWEEP_L_MAX)?)?;
                    Ok(vec![
                        eta.into(),
                        FIG7_K.value().into(),
                        FIG7_SINH_SQ.into(),
                        SU11_SWEEP_L_MAX.into(),
                        e.e.into(),
                        e.residual.into(),
                        e.points_used.into(),
                    ])
                })
                .collect::<Result<Vec<_>>>()?;
            let mut t = Table::new(["eta", "k", "sinh2beta", "l_max", "E", "residual", "points_used"]);
            rows.into_iter().for_each(|r| t.push(r));
            Ok(t)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_hit_round_values() {
        assert!(fig2_etas().contains(&0.5) && fig2_etas().last() == Some(&1.0));
        assert_eq!(fig4_etas()[0], 0.05);
        assert_eq!(*fig4_etas().last().unwrap(), 0.95);
        assert_eq!(*fig8_etas().last().unwrap(), 2.0);
    }

    #[test]
    fn preset_names_round_trip() {
        for p in ALL_PRESETS {
            assert_eq!(p.to_string().parse::<Preset>().unwrap(), p);
        }
        assert!("fig5".parse::<Preset>().is_err());
    }
}
