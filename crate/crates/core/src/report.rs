//! Byte-stable JSON and CSV reports. Rationals are reduced `p/q` strings and
//! keys appear in declaration order.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ifs::{IFSystem, Ratios};
use crate::rational::format_rat;
use crate::shadowing::VerificationOutcome;
use crate::space::Point;
use crate::systems::CounterexampleRun;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn parse(s: &str) -> Result<Format> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Parse(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub word: Vec<String>,
    pub points: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerdictReport {
    pub verdict: &'static str,
    pub method: &'static str,
    pub horizon: usize,
    pub epsilon: String,
    pub certificate: Option<CertificateReport>,
    pub nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<String>,
}

impl VerdictReport {
    pub fn new(system: &IFSystem, outcome: &VerificationOutcome) -> VerdictReport {
        VerdictReport {
            verdict: outcome.verdict.as_str(),
            method: outcome.method.as_str(),
            horizon: outcome.horizon,
            epsilon: format_rat(&outcome.epsilon),
            certificate: outcome.certificate.as_ref().map(|c| CertificateReport {
                word: c.word.iter().map(|&s| system.symbol_id(s).to_string()).collect(),
                points: c.points.clone(),
            }),
            nodes: outcome.nodes,
            resolution: outcome.resolution.as_ref().map(format_rat),
        }
    }

    pub fn csv(&self) -> String {
        let word = self.certificate.as_ref().map(|c| c.word.join(" ")).unwrap_or_default();
        format!(
            "verdict,method,horizon,epsilon,nodes,word\n{},{},{},{},{},{}\n",
            self.verdict, self.method, self.horizon, self.epsilon, self.nodes, word
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterexampleReport {
    pub beta: [String; 2],
    pub alpha: String,
    pub delta: String,
    pub shadowing: VerdictReport,
    pub weak_shadowing: VerdictReport,
}

impl CounterexampleReport {
    pub fn new(run: &CounterexampleRun) -> CounterexampleReport {
        let (lo, hi) = run.beta.bounds();
        CounterexampleReport {
            beta: [format_rat(&lo), format_rat(&hi)],
            alpha: format_rat(&run.alpha),
            delta: format_rat(&run.pseudo.delta),
            shadowing: VerdictReport::new(&run.system, &run.shadowing),
            weak_shadowing: VerdictReport::new(&run.system, &run.weak_shadowing),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RatioRow {
    pub system: String,
    pub beta: String,
    pub alpha: String,
    pub contracting: bool,
    pub expanding: bool,
}

impl RatioRow {
    pub fn new(name: &str, r: &Ratios) -> RatioRow {
        RatioRow {
            system: name.to_string(),
            beta: format_rat(&r.beta),
            alpha: format_rat(&r.alpha),
            contracting: r.contracting,
            expanding: r.expanding,
        }
    }
}

pub fn ratio_csv(rows: &[RatioRow]) -> String {
    let mut out = String::from("system,beta,alpha,contracting,expanding\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{},{}\n", csv_field(&r.system), r.beta, r.alpha, r.contracting, r.expanding));
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Pretty JSON with a trailing newline.
pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::ratios;
    use crate::rational::rat;
    use crate::shadowing::{Certificate, ProofMethod, Verdict};
    use crate::systems;

    #[test]
    fn verdict_json_always_has_method_and_horizon() {
        let sys = systems::doubling();
        let out = VerificationOutcome {
            verdict: Verdict::Refuted,
            method: ProofMethod::RotationDp,
            horizon: 7,
            epsilon: rat(1, 5),
            certificate: None,
            resolution: None,
            nodes: 3,
        };
        let text = serde_json::to_string(&VerdictReport::new(&sys, &out)).unwrap();
        assert_eq!(text, r#"{"verdict":"refuted","method":"rotation-dp","horizon":7,"epsilon":"1/5","certificate":null,"nodes":3}"#);
    }

    #[test]
    fn certificate_uses_symbol_ids() {
        let sys = systems::doubling_pair();
        let out = VerificationOutcome {
            verdict: Verdict::Certified,
            method: ProofMethod::ExactArcset,
            horizon: 1,
            epsilon: rat(1, 10),
            certificate: Some(Certificate { word: vec![1], points: vec![Point::circle(rat(1, 4)), Point::circle(rat(0, 1))] }),
            resolution: None,
            nodes: 2,
        };
        let rep = VerdictReport::new(&sys, &out);
        assert!(json(&rep).contains("\"word\": [\n      \"2\"\n    ]"));
        assert_eq!(rep.csv(), "verdict,method,horizon,epsilon,nodes,word\ncertified,exact-arcset,1,1/10,2,2\n");
    }

    #[test]
    fn ratio_table_schema() {
        let rows = vec![RatioRow::new("cantor", &ratios(&systems::cantor())), RatioRow::new("doubling", &ratios(&systems::doubling()))];
        assert_eq!(
            ratio_csv(&rows),
            "system,beta,alpha,contracting,expanding\ncantor,1/3,1/3,true,false\ndoubling,2/1,2/1,false,true\n"
        );
    }
}
