
use super::{Certificate, CertificateFile, Config, PortfolioError, TrivialRule};
use crate::budget::secs;
use crate::detectors::{verify_38, verify_hull};
use crate::election::Election;
use crate::ilp::{verify_closure, verify_ilp};
use crate::qcp::verify_embedding;
use crate::reducer::replay;

fn corrupt(msg: impl Into<String>) -> PortfolioError {
    PortfolioError::CorruptCertificate(msg.into())
}

/// Replays the reduction trace against `e`, then checks the certificate against the
/// reduced election without running any search.
pub fn verify_certificate(e: &Election, file: &CertificateFile, cfg: &Config) -> Result<(), PortfolioError> {
    let r = replay(e, &file.trace).map_err(|err| corrupt(err.to_string()))?;
    if r.digest() != file.reduced_digest {
        return Err(corrupt("reduced election digest mismatch"));
    }
    if file.status != file.certificate.status() {
        return Err(corrupt("status does not match the certificate kind"));
    }
    let (m, n) = (r.num_candidates(), r.num_votes());
    match &file.certificate {
        Certificate::Trivial(rule) => {
            let holds = match rule {
                TrivialRule::AtMostThreeCandidates => m <= 3,
                TrivialRule::AtMostTwoVotes => n <= 2,
                TrivialRule::ThreeVotesSevenCandidates => n <= 3 && m <= 7,
            };
            if !holds {
                return Err(corrupt(format!("{rule:?} does not apply")));
            }
        }
        Certificate::Pattern38(p) => verify_38(&r, p).map_err(corrupt)?,
        Certificate::Hull(h) => verify_hull(&r, h).map_err(corrupt)?,
        Certificate::Closure(c) => verify_closure(&r, c).map_err(corrupt)?,
        Certificate::Ilp(c) => {
            let budget = secs(cfg.portfolio.verify_secs);
            verify_ilp(&r, c, budget).map_err(corrupt)?
        }
        Certificate::Embedding(c) => {
            if !verify_embedding(&r, &c.embedding, 0.0).map_err(|err| corrupt(err.to_string()))? {
                return Err(corrupt("embedding does not realise the reduced election"));
            }
            if c.embedding.candidates.len() != m || c.embedding.voters.len() != n {
                return Err(corrupt("embedding has extra points"));
            }
        }
    }
    Ok(())
}
