//! Certificate files and their replay.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use topocert::checkers::{
    check_collapse, check_shelling, verify_endocollapse, verify_nonevasive, CollapseCertificate, EndoCertificate,
    LinkAggregate, NonevasiveTree, PlLinksReport, ShellingCertificate,
};
use topocert::constructions::sd_m;
use topocert::{Simplex, SimplicialComplex, Verdict};

use crate::Fail;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Collapse,
    Shelling,
    NonevasiveTree,
    Endocollapse,
    PlLinks,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub kind: Kind,
    pub source_hash: String,
    pub payload: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlLinksPayload {
    pub rounds: i64,
    pub report: PlLinksReport,
}

/// SHA-256 of the canonical facet list; labels do not count.
pub fn source_hash(c: &SimplicialComplex) -> String {
    let bytes = serde_json::to_vec(c.facets()).expect("serializable");
    hex::encode(Sha256::digest(bytes))
}

impl CertificateFile {
    pub fn new<T: Serialize>(kind: Kind, source: &SimplicialComplex, payload: &T) -> Self {
        CertificateFile {
            kind,
            source_hash: source_hash(source),
            payload: serde_json::to_value(payload).expect("serializable"),
        }
    }

    /// Accepts a bare certificate file or an outcome document that embeds one.
    pub fn parse(name: &str, text: &str) -> Result<Self, Fail> {
        let doc: Value =
            serde_json::from_str(text).map_err(|e| Fail::data(format!("{name}:{}:{}: {e}", e.line(), e.column())))?;
        let inner = match doc.get("certificate") {
            Some(c) if doc.get("kind").is_none() => c.clone(),
            _ => doc,
        };
        serde_json::from_value(inner).map_err(|e| Fail::data(format!("{name}: not a certificate: {e}")))
    }

    fn payload<T: for<'de> Deserialize<'de>>(&self) -> Result<T, String> {
        serde_json::from_value(self.payload.clone()).map_err(|e| format!("malformed {:?} payload: {e}", self.kind))
    }

    /// Replays the certificate against `source`. `Err` carries the reason it
    /// was refused.
    pub fn verify(&self, source: &SimplicialComplex) -> Result<(), String> {
        let actual = source_hash(source);
        if actual != self.source_hash {
            return Err(format!("source hash mismatch: certificate has {}, input is {actual}", self.source_hash));
        }
        match self.kind {
            Kind::Collapse => {
                check_collapse(source, &self.payload::<CollapseCertificate>()?).map_err(|e| e.to_string())
            }
            Kind::Shelling => {
                check_shelling(source, &self.payload::<ShellingCertificate>()?).map_err(|e| e.to_string())
            }
            Kind::NonevasiveTree => {
                let tree: NonevasiveTree = self.payload()?;
                verify_nonevasive(source, &tree).then_some(()).ok_or_else(|| "decision tree does not replay".into())
            }
            Kind::Endocollapse => {
                let cert: EndoCertificate = self.payload()?;
                verify_endocollapse(source, &cert).then_some(()).ok_or_else(|| "endocollapse does not replay".into())
            }
            Kind::PlLinks => verify_pl_links(source, &self.payload()?),
        }
    }
}

/// Only the positive link claims can be replayed; the aggregate must agree
/// with the per-vertex verdicts.
fn verify_pl_links(source: &SimplicialComplex, p: &PlLinksPayload) -> Result<(), String> {
    let sub = sd_m(source, p.rounds).map_err(|e| e.to_string())?;
    if sub != p.report.subdivision {
        return Err("subdivision differs from the recomputed one".into());
    }
    let listed: Vec<_> = p.report.per_vertex.iter().map(|l| l.vertex).collect();
    if listed != sub.vertices() {
        return Err("per-vertex list does not cover the vertices of the subdivision".into());
    }
    for l in &p.report.per_vertex {
        let link = sub.link(&Simplex::from([l.vertex])).map_err(|e| e.to_string())?;
        if let Verdict::Positive(cert) = &l.outcome.verdict {
            let ok = if link.is_empty() {
                cert.removal_order.is_empty() && cert.target.is_empty()
            } else {
                check_shelling(&link, cert).is_ok()
            };
            if !ok {
                return Err(format!("shelling of the link of vertex {} does not replay", l.vertex));
            }
        }
    }
    let outcomes = || p.report.per_vertex.iter().map(|l| &l.outcome);
    let expected = if outcomes().any(|o| o.is_negative()) {
        LinkAggregate::AnyNegative
    } else if outcomes().any(|o| o.is_unknown()) {
        LinkAggregate::AnyUnknown
    } else {
        LinkAggregate::AllPositive
    };
    if expected != p.report.aggregate {
        return Err("aggregate verdict disagrees with the per-vertex verdicts".into());
    }
    Ok(())
}
