//! Grid sweeps over intelligent-state inputs.

use std::collections::BTreeMap;

use rayon::prelude::*;
use su_interferometry::analysis::{exponent_estimate, intelligent_sensitivity, IntelligentParams};
use su_interferometry::interferometer::{output_observable, phase_uncertainty, MixerParam};
use su_interferometry::state::Group;
use su_interferometry::su11::{su11_intelligent, su11_state_moments, Su11IntelligentSpec};
use su_interferometry::su2::{su2_intelligent, su2_state_moments, Su2IntelligentSpec, Su2Irrep};
use su_interferometry::table::{Cell, Table};

use crate::config::{Quantity, SweepConfig};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy)]
struct Point {
    params: IntelligentParams,
    eta: f64,
    mixer: Option<MixerParam>,
    phi: f64,
    /// Position in the grid with the j or l index dropped; points sharing it form one curve.
    curve: [usize; 4],
}

struct Evaluated {
    g: f64,
    delta_phi_sq: f64,
    n_bar: f64,
}

fn require<T>(field: &str, xs: &[T]) -> CliResult<()> {
    if xs.is_empty() {
        return Err(CliError::validation(field, "grid is empty"));
    }
    Ok(())
}

fn reject<T>(field: &str, xs: &[T], group: &str) -> CliResult<()> {
    if !xs.is_empty() {
        return Err(CliError::validation(field, format!("not a parameter of the {group} interferometer")));
    }
    Ok(())
}

fn check_eta(eta: &[f64]) -> CliResult<()> {
    require("eta", eta)?;
    if let Some(e) = eta.iter().find(|e| **e == 0.0) {
        return Err(CliError::validation("eta", format!("eta = {e} is excluded; intelligent states need eta != 0")));
    }
    Ok(())
}

fn su2_points(cfg: &SweepConfig) -> CliResult<Vec<Point>> {
    reject("k", &cfg.k, "SU(2)")?;
    reject("l", &cfg.l, "SU(2)")?;
    reject("beta", &cfg.beta, "SU(2)")?;
    reject("sinh2beta", &cfg.sinh2beta, "SU(2)")?;
    require("j", &cfg.j)?;
    require("m0", &cfg.m0)?;
    check_eta(&cfg.eta)?;
    let phis = if cfg.phi.is_empty() { vec![0.0] } else { cfg.phi.clone() };
    let mut out = Vec::new();
    for &j in &cfg.j {
        if j.doubled() <= 0 {
            return Err(CliError::validation("j", format!("j = {j} must be positive")));
        }
        for (im, &m0) in cfg.m0.iter().enumerate() {
            if m0.abs().doubled() > j.doubled() {
                return Err(CliError::validation("m0", format!("|m0| = {} exceeds j = {j}", m0.abs())));
            }
            if j.int_diff(m0).is_none() {
                return Err(CliError::validation("m0", format!("j - m0 must be an integer (j = {j}, m0 = {m0})")));
            }
            for (ie, &eta) in cfg.eta.iter().enumerate() {
                for (ip, &phi) in phis.iter().enumerate() {
                    out.push(Point {
                        params: IntelligentParams::Su2 { j, m0 },
                        eta,
                        mixer: None,
                        phi,
                        curve: [im, ie, 0, ip],
                    });
                }
            }
        }
    }
    Ok(out)
}

fn su11_points(cfg: &SweepConfig) -> CliResult<Vec<Point>> {
    reject("j", &cfg.j, "SU(1,1)")?;
    reject("m0", &cfg.m0, "SU(1,1)")?;
    require("k", &cfg.k)?;
    require("l", &cfg.l)?;
    check_eta(&cfg.eta)?;
    let mixers: Vec<MixerParam> = match (cfg.beta.is_empty(), cfg.sinh2beta.is_empty()) {
        (false, false) => return Err(CliError::validation("beta", "give either beta or sinh2beta, not both")),
        (true, true) => return Err(CliError::validation("beta", "the SU(1,1) interferometer needs beta or sinh2beta")),
        (false, true) => cfg.beta.iter().map(|&b| MixerParam::new(b)).collect::<Result<_, _>>()?,
        (true, false) => cfg
            .sinh2beta
            .iter()
            .map(|&s| MixerParam::from_sinh_sq(s).map_err(|e| CliError::validation("sinh2beta", e.to_string())))
            .collect::<Result<_, _>>()?,
    };
    let phis = if cfg.phi.is_empty() { vec![0.0] } else { cfg.phi.clone() };
    let mut out = Vec::new();
    for (ik, &k) in cfg.k.iter().enumerate() {
        if k.doubled() <= 0 {
            return Err(CliError::validation("k", format!("k = {k} must be positive")));
        }
        for &l in &cfg.l {
            for (ie, &eta) in cfg.eta.iter().enumerate() {
                for (ib, &mixer) in mixers.iter().enumerate() {
                    for (ip, &phi) in phis.iter().enumerate() {
                        out.push(Point {
                            params: IntelligentParams::Su11 { k, l },
                            eta,
                            mixer: Some(mixer),
                            phi,
                            curve: [ik, ie, ib, ip],
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

fn evaluate(p: &Point) -> su_interferometry::Result<Evaluated> {
    let r = intelligent_sensitivity(p.params, p.eta, p.mixer)?;
    let delta_phi_sq = if p.phi == 0.0 {
        r.delta_phi_sq.value()
    } else {
        let moments = match p.params {
            IntelligentParams::Su2 { j, m0 } => {
                su2_state_moments(&su2_intelligent(&Su2IntelligentSpec::new(Su2Irrep::new(j)?, m0, p.eta)?)?)?
            }
            IntelligentParams::Su11 { k, l } => su11_state_moments(&su11_intelligent(&Su11IntelligentSpec::new(k, l, p.eta)?)?)?,
        };
        let obs = output_observable(p.params.group(), p.phi, p.mixer.map(|m| m.beta()))?;
        phase_uncertainty(&moments, &obs).value()
    };
    Ok(Evaluated {
        g: r.g_factor.unwrap_or(f64::NAN),
        delta_phi_sq,
        n_bar: r.n_bar,
    })
}

/// Evaluates the configured grid. Rows follow the grid order of the config
/// (outermost j or k, then m0 or l, eta, beta, phi) regardless of thread count.
pub fn sweep_table(cfg: &SweepConfig) -> CliResult<Table> {
    let group = cfg.group.ok_or_else(|| CliError::validation("group", "missing; set group = SU2 or group = SU11"))?;
    let points = match group {
        Group::Su2 => su2_points(cfg)?,
        Group::Su11 => su11_points(cfg)?,
    };
    let values = points.par_iter().map(evaluate).collect::<Result<Vec<_>, _>>()?;
    let quantities = cfg.quantities();

    let exponents = if quantities.contains(&Quantity::E) {
        let sweep_field = if group == Group::Su2 { "j" } else { "l" };
        let mut curves: BTreeMap<[usize; 4], Vec<usize>> = BTreeMap::new();
        for (i, p) in points.iter().enumerate() {
            curves.entry(p.curve).or_default().push(i);
        }
        let mut e = vec![f64::NAN; points.len()];
        for idx in curves.values() {
            let pts: Vec<(f64, f64)> = idx.iter().map(|&i| (values[i].n_bar, values[i].delta_phi_sq.sqrt())).collect();
            let est = exponent_estimate(&pts)
                .map_err(|err| CliError::validation(sweep_field, format!("the exponent E needs an increasing {sweep_field} grid of at least 5 values: {err}")))?;
            idx.iter().for_each(|&i| e[i] = est.e);
        }
        Some(e)
    } else {
        None
    };

    let mut header: Vec<&str> = match group {
        Group::Su2 => vec!["group", "j", "m0", "eta", "phi"],
        Group::Su11 => vec!["group", "k", "l", "eta", "beta", "sinh2beta", "phi"],
    };
    header.extend(quantities.iter().map(|q| q.column()));
    let mut table = Table::new(header);
    for (i, (p, v)) in points.iter().zip(&values).enumerate() {
        let mut row: Vec<Cell> = match p.params {
            IntelligentParams::Su2 { j, m0 } => vec!["SU2".into(), j.value().into(), m0.value().into(), p.eta.into(), p.phi.into()],
            IntelligentParams::Su11 { k, l } => {
                let m = p.mixer.expect("SU(1,1) points carry a mixer");
                vec![
                    "SU11".into(),
                    k.value().into(),
                    l.into(),
                    p.eta.into(),
                    m.beta().into(),
                    m.sinh_sq().into(),
                    p.phi.into(),
                ]
            }
        };
        for q in &quantities {
            row.push(Cell::Num(match q {
                Quantity::G => v.g,
                Quantity::DeltaPhiSq => v.delta_phi_sq,
                Quantity::NBar => v.n_bar,
                Quantity::E => exponents.as_ref().expect("computed above")[i],
            }));
        }
        table.push(row);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(text: &str) -> CliResult<Table> {
        sweep_table(&SweepConfig::parse(text, "t").unwrap())
    }

    fn num(t: &Table, row: usize, col: &str) -> f64 {
        match &t.rows[row][t.column(col).unwrap()] {
            Cell::Num(x) => *x,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn su2_unit_eta_example() {
        let t = run("group = SU2\nj = 1\nm0 = 0\neta = 1\n").unwrap();
        assert_eq!(t.rows.len(), 1);
        assert!((num(&t, 0, "delta_phi_sq") - 0.5).abs() < 1e-15);
    }

    #[test]
    fn su11_vacuum_like_example() {
        let t = run("group = SU11\nk = 1/2\nl = 0\neta = 0.5\nsinh2beta = 1\n").unwrap();
        assert!((num(&t, 0, "delta_phi_sq") - 1.0).abs() < 1e-14);
        assert!((num(&t, 0, "G") - 1.0).abs() < 1e-14);
    }

    #[test]
    fn validation_names_the_field() {
        let e = run("group = SU2\nj = 1\nm0 = 2\neta = 0.5\n").unwrap_err();
        assert!(matches!(&e, CliError::Validation { field, .. } if field == "m0"), "{e}");
        let e = run("group = SU2\nj = 1\nm0 = 1/2\neta = 0.5\n").unwrap_err();
        assert!(matches!(&e, CliError::Validation { field, .. } if field == "m0"), "{e}");
        let e = run("group = SU11\nk = 1/2\nl = 0\neta = 0.5\n").unwrap_err();
        assert!(matches!(&e, CliError::Validation { field, .. } if field == "beta"), "{e}");
        let e = run("j = 1\n").unwrap_err();
        assert!(matches!(&e, CliError::Validation { field, .. } if field == "group"), "{e}");
        let e = run("group = SU2\nj = 1\nm0 = 0\neta = 0\n").unwrap_err();
        assert!(matches!(&e, CliError::Validation { field, .. } if field == "eta"), "{e}");
        let e = run("group = SU2\nj = 1\nm0 = 0\neta = 0.5\nl = 3\n").unwrap_err();
        assert!(matches!(&e, CliError::Validation { field, .. } if field == "l"), "{e}");
    }

    #[test]
    fn propagated_phi_matches_closed_form_near_zero() {
        let t = run("group = SU2\nj = 3\nm0 = 1\neta = 0.4\nphi = 0, 1e-7\n").unwrap();
        let (a, b) = (num(&t, 0, "delta_phi_sq"), num(&t, 1, "delta_phi_sq"));
        assert!((a - b).abs() < 1e-6 * a, "{a} {b}");
    }

    #[test]
    fn exponent_column_is_shared_along_a_curve() {
        let t = run("group = SU2\nj = 10:200:10\nm0 = 0\neta = 0.5, 0.9\nquantity = E, delta_phi_sq\n").unwrap();
        assert_eq!(t.header.last().unwrap(), "delta_phi_sq");
        let e0 = num(&t, 0, "E");
        let e1 = num(&t, 1, "E");
        assert!(e0 != e1);
        assert_eq!(e0, num(&t, 2, "E"));
        assert!((0.45..0.6).contains(&e1));
        assert!(run("group = SU2\nj = 1:3:1\nm0 = 0\neta = 0.5\nquantity = E\n").is_err());
    }
}
