//! Orchestration: screening, reduction, concurrent lanes, certificates.

mod batch;
mod runner;
mod verify;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use batch::{dataset_of, summarize, BatchRecord, DatasetRow};
pub use runner::{run_lane, run_portfolio, LaneOutcome};
pub use verify::verify_certificate;

use crate::detectors::{HullCertificate, Pattern38};
use crate::election::Election;
use crate::ilp::{ClosureCertificate, IlpCertificate, IlpConfig};
use crate::qcp::{Embedding, QcpConfig};
use crate::reducer::ReductionTrace;

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Error)]
pub enum PortfolioError {
    #[error("corrupt certificate: {0}")]
    CorruptCertificate(String),
    #[error("bad configuration: {0}")]
    Config(String),
    #[error("unknown lane `{0}`")]
    UnknownLane(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Euclidean,
    NotEuclidean,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Euclidean => "2-Euclidean",
            Status::NotEuclidean => "not 2-Euclidean",
            Status::Unknown => "unknown",
        })
    }
}

/// Conditions under which every election is two-dimensional Euclidean.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrivialRule {
    AtMostThreeCandidates,
    AtMostTwoVotes,
    ThreeVotesSevenCandidates,
}

/// Lanes in tie-breaking priority order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Lane {
    #[serde(rename = "38")]
    Pattern38,
    #[serde(rename = "hull")]
    HullQuad,
    #[serde(rename = "hull-full")]
    HullFull,
    #[serde(rename = "closure")]
    Closure,
    #[serde(rename = "ilp")]
    Ilp,
    #[serde(rename = "qcp")]
    Embed,
}

impl Lane {
    pub const ALL: [Lane; 6] = [
        Lane::Pattern38,
        Lane::HullQuad,
        Lane::Closure,
        Lane::Embed,
        Lane::HullFull,
        Lane::Ilp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Lane::Pattern38 => "38",
            Lane::HullQuad => "hull",
            Lane::HullFull => "hull-full",
            Lane::Closure => "closure",
            Lane::Ilp => "ilp",
            Lane::Embed => "qcp",
        }
    }
}

impl fmt::Display for Lane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Lane {
    type Err = PortfolioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Lane::ALL
            .into_iter()
            .find(|l| l.name() == s.trim())
            .ok_or_else(|| PortfolioError::UnknownLane(s.to_string()))
    }
}

pub fn parse_lanes(list: &str) -> Result<Vec<Lane>, PortfolioError> {
    list.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect()
}

/// An embedding kept at full precision next to its 12-significant-digit rounding.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingCertificate {
    pub embedding: Embedding,
    pub rounded: Embedding,
    pub rounded_verified: bool,
    pub min_gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload")]
pub enum Certificate {
    Trivial(TrivialRule),
    Pattern38(Pattern38),
    Hull(HullCertificate),
    Closure(ClosureCertificate),
    Ilp(IlpCertificate),
    Embedding(EmbeddingCertificate),
}

impl Certificate {
    pub fn status(&self) -> Status {
        match self {
            Certificate::Trivial(_) | Certificate::Embedding(_) => Status::Euclidean,
            _ => Status::NotEuclidean,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Trivial(_) => "Trivial",
            Certificate::Pattern38(_) => "Pattern38",
            Certificate::Hull(_) => "Hull",
            Certificate::Closure(_) => "Closure",
            Certificate::Ilp(_) => "Ilp",
            Certificate::Embedding(_) => "Embedding",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaneTiming {
    pub lane: Lane,
    pub secs: f64,
    pub outcome: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub certificate: Option<Certificate>,
    pub trace: ReductionTrace,
    pub reduced_digest: String,
    pub reduced_candidates: usize,
    pub reduced_votes: usize,
    pub lane: Option<Lane>,
    pub timings: Vec<LaneTiming>,
    pub diagnostics: Vec<String>,
    pub elapsed_secs: f64,
}

impl Verdict {
    pub fn is_definitive(&self) -> bool {
        self.status != Status::Unknown
    }

    pub fn certificate_file(&self) -> Option<CertificateFile> {
        Some(CertificateFile {
            status: self.status,
            reduced_digest: self.reduced_digest.clone(),
            trace: self.trace.clone(),
            certificate: self.certificate.clone()?,
            tool_version: TOOL_VERSION.to_string(),
        })
    }
}

/// What `--emit-cert` writes: `kind` and `payload` come from the certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub status: Status,
    pub reduced_digest: String,
    pub trace: ReductionTrace,
    #[serde(flatten)]
    pub certificate: Certificate,
    pub tool_version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PortfolioConfig {
    pub budget_secs: f64,
    pub lanes: Vec<Lane>,
    pub hull_cap: usize,
    /// Bound on re-solving an ILP certificate during verification.
    pub verify_secs: f64,
}

impl Default for PortfolioConfig {
    fn default() -> Self {
        PortfolioConfig {
            budget_secs: 60.0,
            lanes: Lane::ALL.to_vec(),
            hull_cap: 6,
            verify_secs: 60.0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    pub portfolio: PortfolioConfig,
    pub ilp: IlpConfig,
    pub qcp: QcpConfig,
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Config, PortfolioError> {
        toml::from_str(text).map_err(|e| PortfolioError::Config(e.to_string()))
    }
}

/// Elections that are Euclidean for simple counting reasons.
pub fn triviality_screen(e: &Election) -> Option<TrivialRule> {
    let (m, n) = (e.num_candidates(), e.num_votes());
    if m <= 3 {
        Some(TrivialRule::AtMostThreeCandidates)
    } else if n <= 2 {
        Some(TrivialRule::AtMostTwoVotes)
    } else if n <= 3 && m <= 7 {
        Some(TrivialRule::ThreeVotesSevenCandidates)
    } else {
        None
    }
}
