//! Sensor solutions (state + measurement + estimators + provenance) and the
//! JSON interchange format.
//!
//! Floats are written in scientific notation with 17 significant digits so
//! transcribed constants survive a round trip bit-exactly.

use std::fmt::Write as _;
use std::path::Path;

use crate::cost::{CostReport, EstimatorSet};
use crate::error::{Error, Result};
use crate::linalg::{c, CMat, CVec};
use crate::povm::Povm;
use crate::prior::GaussianPrior;

pub const SENSOR_FILE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasurementClass {
    Povm,
    Projective,
}

impl MeasurementClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            MeasurementClass::Povm => "povm",
            MeasurementClass::Projective => "projective",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Optimized,
    Catalog,
    Circuit,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Optimized => "optimized",
            Provenance::Catalog => "catalog",
            Provenance::Circuit => "circuit",
        }
    }
}

/// A complete sensor: input state, measurement, single-shot estimators, the
/// prior they were optimized for, and provenance metadata.
#[derive(Debug, Clone)]
pub struct SensorSolution {
    pub n_atoms: u32,
    pub d: usize,
    pub psi_in: CVec,
    pub povm: Povm,
    pub estimators: EstimatorSet,
    pub prior_used: GaussianPrior,
    pub cost_report: Option<CostReport>,
    pub class: MeasurementClass,
    pub provenance: Provenance,
    pub seed: Option<u64>,
    /// Largest eigenvalue clipped when projecting optimizer output onto the
    /// PSD cone; zero for exact constructions.
    pub clip_magnitude: f64,
}

impl SensorSolution {
    pub fn validate(&self) -> Result<()> {
        let dim = self.n_atoms as usize + 1;
        if self.psi_in.len() != dim {
            return Err(Error::ContractViolation(format!(
                "state length {} does not match dimension {dim}",
                self.psi_in.len()
            )));
        }
        let nrm: f64 = self.psi_in.iter().map(|z| z.norm_sqr()).sum();
        if (nrm - 1.0).abs() > 1e-9 {
            return Err(Error::ContractViolation(format!(
                "state is not normalized (|psi|^2 = {nrm:.12})"
            )));
        }
        self.povm.validate()?;
        if self.povm.dim() != dim {
            return Err(Error::ContractViolation(
                "POVM dimension does not match the state".into(),
            ));
        }
        if self.estimators.len() != self.povm.len() {
            return Err(Error::ContractViolation(
                "estimator count does not match POVM outcomes".into(),
            ));
        }
        for e in &self.estimators {
            if e.len() != self.d || e.iter().any(|x| !x.is_finite()) {
                return Err(Error::ContractViolation(
                    "estimators must be finite vectors of length d".into(),
                ));
            }
        }
        if self.class == MeasurementClass::Projective && !self.povm.is_projective(1e-8) {
            return Err(Error::ContractViolation(
                "projective-class sensor has non-projective effects".into(),
            ));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = String::new();
        s.push_str("{\n");
        let _ = writeln!(s, "  \"version\": {},", SENSOR_FILE_VERSION);
        let _ = writeln!(s, "  \"n\": {},", self.n_atoms);
        let _ = writeln!(s, "  \"d\": {},", self.d);
        s.push_str("  \"state\": ");
        push_cvec(&mut s, &self.psi_in);
        s.push_str(",\n  \"povm\": [");
        for (k, m) in self.povm.effects().iter().enumerate() {
            if k > 0 {
                s.push(',');
            }
            s.push_str("\n    ");
            push_cmat(&mut s, m);
        }
        s.push_str("\n  ],\n  \"labels\": [");
        for (k, l) in self.povm.labels().iter().enumerate() {
            if k > 0 {
                s.push_str(", ");
            }
            let _ = write!(s, "{:?}", l);
        }
        s.push_str("],\n  \"estimators\": [");
        for (k, e) in self.estimators.iter().enumerate() {
            if k > 0 {
                s.push_str(", ");
            }
            push_f64_list(&mut s, e);
        }
        s.push_str("],\n  \"metadata\": {\n");
        let _ = writeln!(s, "    \"provenance\": \"{}\",", self.provenance.as_str());
        let _ = writeln!(s, "    \"class\": \"{}\",", self.class.as_str());
        s.push_str("    \"prior\": {\"center\": ");
        push_f64_list(&mut s, &self.prior_used.center);
        s.push_str(", \"covariance\": [");
        for i in 0..self.prior_used.d() {
            if i > 0 {
                s.push_str(", ");
            }
            let row: Vec<f64> = (0..self.prior_used.d())
                .map(|j| self.prior_used.covariance[(i, j)])
                .collect();
            push_f64_list(&mut s, &row);
        }
        let _ = write!(
            s,
            "], \"nodes_per_axis\": {}}},\n",
            self.prior_used.nodes_per_axis
        );
        match self.seed {
            Some(seed) => {
                let _ = writeln!(s, "    \"seed\": {},", seed);
            }
            None => {
                let _ = writeln!(s, "    \"seed\": null,");
            }
        }
        let _ = writeln!(s, "    \"clip_magnitude\": {}", fmt_f64(self.clip_magnitude));
        s.push_str("  }\n}\n");
        s
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad JSON: {e}")))?;
        let n_atoms = v
            .get("n")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::Parse("missing field: n".into()))? as u32;
        let d = v
            .get("d")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::Parse("missing field: d".into()))? as usize;
        let state = parse_cvec(
            v.get("state")
                .ok_or_else(|| Error::Parse("missing field: state".into()))?,
        )?;
        let povm_val = v
            .get("povm")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Parse("missing field: povm".into()))?;
        let effects: Result<Vec<CMat>> = povm_val.iter().map(parse_cmat).collect();
        let labels: Vec<String> = match v.get("labels").and_then(|x| x.as_array()) {
            Some(arr) => arr
                .iter()
                .map(|x| x.as_str().unwrap_or_default().to_string())
                .collect(),
            None => (0..povm_val.len()).map(|i| i.to_string()).collect(),
        };
        let povm = Povm::with_labels(effects?, labels)?;
        let estimators: EstimatorSet = match v.get("estimators").and_then(|x| x.as_array()) {
            Some(arr) => arr
                .iter()
                .map(|e| parse_f64_list(e))
                .collect::<Result<_>>()?,
            None => vec![vec![0.0; d]; povm.len()],
        };
        let meta = v
            .get("metadata")
            .ok_or_else(|| Error::Parse("missing field: metadata".into()))?;
        let provenance = match meta.get("provenance").and_then(|x| x.as_str()) {
            Some("optimized") => Provenance::Optimized,
            Some("circuit") => Provenance::Circuit,
            _ => Provenance::Catalog,
        };
        let class = match meta.get("class").and_then(|x| x.as_str()) {
            Some("projective") => MeasurementClass::Projective,
            _ => MeasurementClass::Povm,
        };
        let prior = match meta.get("prior") {
            Some(p) if !p.is_null() => {
                let center = parse_f64_list(
                    p.get("center")
                        .ok_or_else(|| Error::Parse("prior missing center".into()))?,
                )?;
                let cov_rows = p
                    .get("covariance")
                    .and_then(|x| x.as_array())
                    .ok_or_else(|| Error::Parse("prior missing covariance".into()))?;
                let dd = center.len();
                let mut cov = ndarray::Array2::<f64>::zeros((dd, dd));
                for (i, row) in cov_rows.iter().enumerate() {
                    let row = parse_f64_list(row)?;
                    for (j, x) in row.iter().enumerate() {
                        cov[(i, j)] = *x;
                    }
                }
                let nodes = p
                    .get("nodes_per_axis")
                    .and_then(|x| x.as_u64())
                    .unwrap_or(crate::prior::DEFAULT_NODES as u64) as usize;
                GaussianPrior::new(center, cov, nodes)?
            }
            _ => GaussianPrior::isotropic(vec![0.0; d], 2f64.powi(-5), crate::prior::DEFAULT_NODES)?,
        };
        let seed = meta.get("seed").and_then(|x| x.as_u64());
        let clip = meta
            .get("clip_magnitude")
            .and_then(|x| x.as_f64())
            .unwrap_or(0.0);
        let solution = SensorSolution {
            n_atoms,
            d,
            psi_in: state,
            povm,
            estimators,
            prior_used: prior,
            cost_report: None,
            class,
            provenance,
            seed,
            clip_magnitude: clip,
        };
        solution.validate()?;
        Ok(solution)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }
}

/// 17 significant digits; round-trips any f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0.0".into();
    }
    format!("{:.16e}", x)
}

fn push_f64_list(s: &mut String, xs: &[f64]) {
    s.push('[');
    for (k, x) in xs.iter().enumerate() {
        if k > 0 {
            s.push_str(", ");
        }
        s.push_str(&fmt_f64(*x));
    }
    s.push(']');
}

fn push_cvec(s: &mut String, v: &CVec) {
    s.push('[');
    for (k, z) in v.iter().enumerate() {
        if k > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "[{}, {}]", fmt_f64(z.re), fmt_f64(z.im));
    }
    s.push(']');
}

fn push_cmat(s: &mut String, m: &CMat) {
    s.push('[');
    for r in 0..m.nrows() {
        if r > 0 {
            s.push_str(", ");
        }
        let row = m.row(r).to_owned();
        push_cvec(s, &row);
    }
    s.push(']');
}

fn parse_f64_list(v: &serde_json::Value) -> Result<Vec<f64>> {
    v.as_array()
        .ok_or_else(|| Error::Parse("expected a number list".into()))?
        .iter()
        .map(|x| {
            x.as_f64()
                .ok_or_else(|| Error::Parse("expected a number".into()))
        })
        .collect()
}

fn parse_cvec(v: &serde_json::Value) -> Result<CVec> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse("expected a complex vector".into()))?;
    let mut out = CVec::zeros(arr.len());
    for (k, pair) in arr.iter().enumerate() {
        let pair = parse_f64_list(pair)?;
        if pair.len() != 2 {
            return Err(Error::Parse("complex entries are [re, im] pairs".into()));
        }
        out[k] = c(pair[0], pair[1]);
    }
    Ok(out)
}

fn parse_cmat(v: &serde_json::Value) -> Result<CMat> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("expected a matrix".into()))?;
    let n = rows.len();
    let mut out = CMat::zeros((n, n));
    for (r, row) in rows.iter().enumerate() {
        let row = parse_cvec(row)?;
        if row.len() != n {
            return Err(Error::Parse("matrix must be square".into()));
        }
        for (cidx, z) in row.iter().enumerate() {
            out[(r, cidx)] = *z;
        }
    }
    Ok(out)
}
