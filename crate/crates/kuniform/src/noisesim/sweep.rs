use std::io::{self, Write};

use serde::Deserialize;

use super::{Experiment, FidelityEstimate, Mode, NoiseError, NoiseModel};
use crate::circuits::{
    assemble_hybrid, gen_approx_kuniform, gen_color_kuniform, gen_ghz, gen_surface_kuniform, ghz_output_qubits,
    Circuit, GhzVariant,
};
use crate::codes::{build_code, CodeId};
use crate::stab::StabilizerTableau;

/// A sweep file: schemes × sizes × noise points, all sharing one seed.
///
/// ```toml
/// seed = 7
/// shots = 100000
///
/// [noise]
/// p = [1e-4, 1e-3]              # p0 = p/100, p1 = p/10, p2 = p3 = p
/// rates = [[1e-5, 1e-4, 1e-3, 1e-3]]
///
/// [[scheme]]
/// name = "hybrid"
/// family = "color"
/// code = "color422"
/// mode = "detect"
/// k = [1, 2]
/// n = [30]
/// ```
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub seed: u64,
    pub shots: u64,
    pub noise: NoiseGrid,
    #[serde(rename = "scheme")]
    pub schemes: Vec<SchemeSpec>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseGrid {
    #[serde(default)]
    pub p: Vec<f64>,
    #[serde(default)]
    pub rates: Vec<[f64; 4]>,
}

impl NoiseGrid {
    pub fn points(&self) -> Result<Vec<NoiseModel>, NoiseError> {
        let mut out: Vec<NoiseModel> = self
            .p
            .iter()
            .map(|&p| NoiseModel::scaled(p))
            .collect::<Result<_, _>>()?;
        for r in &self.rates {
            out.push(NoiseModel::new(r[0], r[1], r[2], r[3])?);
        }
        if out.is_empty() {
            return Err(NoiseError::Sweep("no noise points".into()));
        }
        Ok(out)
    }
}

fn default_k() -> Vec<usize> {
    vec![1]
}

fn default_mode() -> Mode {
    Mode::AcceptAll
}

/// One scheme. With `code` set it is the hybrid scheme over that code,
/// otherwise the physical circuit of `family` itself.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSpec {
    pub name: String,
    pub family: String,
    #[serde(default)]
    pub variant: Option<String>,
    #[serde(default)]
    pub code: Option<String>,
    #[serde(default = "default_mode")]
    pub mode: Mode,
    #[serde(default = "default_k")]
    pub k: Vec<usize>,
    pub n: Vec<usize>,
}

impl SchemeSpec {
    fn circuit(&self, k: usize, n: usize) -> Result<(Circuit, Vec<usize>, Option<GhzVariant>), NoiseError> {
        Ok(match self.family.as_str() {
            "surface" => (gen_surface_kuniform(k, n)?, (0..n).collect(), None),
            "color" => (gen_color_kuniform(k, n)?, (0..n).collect(), None),
            "approx" => (gen_approx_kuniform(k, n)?, (0..n).collect(), None),
            "ghz" => {
                let v: GhzVariant = self.variant.as_deref().unwrap_or("log").parse()?;
                (gen_ghz(n, v)?, ghz_output_qubits(n, v), Some(v))
            }
            f => return Err(NoiseError::Sweep(format!("unknown family {f:?}"))),
        })
    }

    /// The experiment for one `(k, N)` grid point.
    pub fn experiment(&self, k: usize, n: usize) -> Result<Experiment, NoiseError> {
        let (circuit, outputs, ghz) = self.circuit(k, n)?;
        match &self.code {
            Some(code) => {
                let code = build_code(code.parse::<CodeId>()?)?;
                let h = assemble_hybrid(&code, &circuit)?;
                Experiment::hybrid(&h)
            }
            None => {
                let target = match ghz {
                    Some(_) => prepared(&gen_ghz(n, GhzVariant::LogDepth)?)?,
                    None => prepared(&circuit)?,
                };
                Experiment::physical(&circuit, &outputs, &target)
            }
        }
    }

    fn ks(&self) -> Vec<usize> {
        if self.family == "ghz" {
            vec![1]
        } else {
            self.k.clone()
        }
    }
}

fn prepared(c: &Circuit) -> Result<StabilizerTableau, NoiseError> {
    let mut t = StabilizerTableau::new(c.n_qubits());
    t.apply_all(&c.cliffords()?)
        .map_err(crate::circuits::CircuitError::from)?;
    Ok(t)
}

impl Sweep {
    pub fn parse(src: &str) -> Result<Self, NoiseError> {
        let s: Sweep = toml::from_str(src).map_err(|e| NoiseError::Sweep(e.to_string()))?;
        if s.shots == 0 {
            return Err(NoiseError::NoShots);
        }
        if s.schemes.is_empty() {
            return Err(NoiseError::Sweep("no schemes".into()));
        }
        for sc in &s.schemes {
            if sc.name.is_empty() || sc.name.contains([',', '"', '\n']) {
                return Err(NoiseError::Sweep(format!("bad scheme name {:?}", sc.name)));
            }
        }
        s.noise.points()?;
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub scheme: String,
    pub family: String,
    pub k: usize,
    pub n: usize,
    pub noise: NoiseModel,
    pub estimate: FidelityEstimate,
}

pub const CSV_HEADER: &str = "scheme,family,k,N,p0,p1,p2,p3,shots,accepted,correct,fidelity,ci_lo,ci_hi";

impl SweepRow {
    pub fn csv_line(&self) -> String {
        let e = &self.estimate;
        let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.scheme,
            self.family,
            self.k,
            self.n,
            self.noise.p0,
            self.noise.p1,
            self.noise.p2,
            self.noise.p3,
            e.shots,
            e.accepted,
            e.correct,
            opt(e.fidelity),
            opt(e.ci.map(|c| c.0)),
            opt(e.ci.map(|c| c.1)),
        )
    }
}

/// Runs every scheme at every grid point, in file order.
pub fn compare_schemes(sweep: &Sweep) -> Result<Vec<SweepRow>, NoiseError> {
    let points = sweep.noise.points()?;
    let mut rows = Vec::new();
    for sc in &sweep.schemes {
        for k in sc.ks() {
            for &n in &sc.n {
                let exp = sc.experiment(k, n)?;
                for nm in &points {
                    rows.push(SweepRow {
                        scheme: sc.name.clone(),
                        family: sc.family.clone(),
                        k,
                        n,
                        noise: *nm,
                        estimate: exp.estimate(nm, sc.mode, sweep.shots, sweep.seed)?,
                    });
                }
            }
        }
    }
    Ok(rows)
}

pub fn write_csv(rows: &[SweepRow], mut w: impl Write) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(w, "{}", r.csv_line())?;
    }
    Ok(())
}
