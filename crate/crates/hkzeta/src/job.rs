//! A fully resolved request: variety, bundle, curve and enumeration limits.

use std::path::PathBuf;

use hkzeta_core::curve::CurveData;
use hkzeta_core::hkgeom::{anticanonical, HKVariety, LineBundle};
use hkzeta_core::{Error, Result};
use serde::{Deserialize, Serialize};

use crate::format::{rational_curve, CurveFile};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BundleChoice {
    Anticanonical,
    Explicit(LineBundle),
}

impl Serialize for BundleChoice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            BundleChoice::Anticanonical => s.serialize_str("anticanonical"),
            BundleChoice::Explicit(l) => s.serialize_str(&l.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for BundleChoice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        BundleChoice::parse(&s).map_err(serde::de::Error::custom)
    }
}

impl BundleChoice {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "anticanonical" | "-K" => Ok(BundleChoice::Anticanonical),
            other => Ok(BundleChoice::Explicit(LineBundle::parse(other)?)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JobSpec {
    pub variety: String,
    pub bundle: BundleChoice,
    pub q: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<PathBuf>,
    pub terms: usize,
    pub m_min: u32,
    pub m_max: u32,
    pub jobs: usize,
    /// Largest enumeration cost (parameter tuples) a job may attempt.
    pub budget: f64,
    /// Degree cutoff for the `Q_L` divisor series.
    pub cutoff: u32,
}

impl Default for JobSpec {
    fn default() -> Self {
        JobSpec {
            variety: String::from("HK(r=1,t=2;a=1)"),
            bundle: BundleChoice::Anticanonical,
            q: 2,
            curve: None,
            terms: 10,
            m_min: 0,
            m_max: 4,
            jobs: 1,
            budget: 1e9,
            cutoff: 10,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Job {
    pub spec: JobSpec,
    pub variety: HKVariety,
    pub bundle: LineBundle,
    pub curve: CurveData,
}

impl Job {
    pub fn resolve(spec: JobSpec) -> Result<Job> {
        let variety = HKVariety::parse(&spec.variety)?;
        let bundle = match spec.bundle {
            BundleChoice::Anticanonical => anticanonical(&variety),
            BundleChoice::Explicit(l) => l,
        };
        let curve = match &spec.curve {
            Some(path) => CurveFile::read(path)?,
            None => rational_curve(spec.q)?,
        };
        if spec.curve.is_some() && curve.q() != spec.q {
            return Err(Error::Domain(format!("--q {} disagrees with the curve file (q = {})", spec.q, curve.q())));
        }
        if spec.m_min > spec.m_max {
            return Err(Error::Domain(format!("empty M range {}..={}", spec.m_min, spec.m_max)));
        }
        Ok(Job { spec, variety, bundle, curve })
    }

    pub fn is_anticanonical(&self) -> bool {
        self.spec.bundle == BundleChoice::Anticanonical
    }
}
