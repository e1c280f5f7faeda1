use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Rwgm,
    RwgmProportional,
    Greedy,
    Optimal,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Rwgm,
        Algorithm::RwgmProportional,
        Algorithm::Greedy,
        Algorithm::Optimal,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::Rwgm => "rwgm",
            Algorithm::RwgmProportional => "rwgm-proportional",
            Algorithm::Greedy => "greedy",
            Algorithm::Optimal => "optimal",
        }
    }

    pub fn is_randomized(self) -> bool {
        matches!(self, Algorithm::Rwgm | Algorithm::RwgmProportional)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown algorithm tag `{0}`")]
pub struct UnknownAlgorithm(pub String);

impl FromStr for Algorithm {
    type Err = UnknownAlgorithm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.tag() == s)
            .ok_or_else(|| UnknownAlgorithm(s.to_owned()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub request: usize,
    pub server: usize,
    pub cost: f64,
}

/// Every decision of one episode, in request order.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingTrace {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub episode: u64,
    pub decisions: Vec<Decision>,
    pub total_cost: f64,
}

impl MatchingTrace {
    pub fn new(algorithm: Algorithm, seed: u64, episode: u64, decisions: Vec<Decision>) -> Self {
        let total_cost = decisions.iter().map(|d| d.cost).fold(0.0, |acc, c| acc + c);
        Self {
            algorithm,
            seed,
            episode,
            decisions,
            total_cost,
        }
    }
}

#[derive(Serialize)]
struct TraceRow {
    episode: u64,
    step: usize,
    request_point: usize,
    server_point: usize,
    cost: f64,
}

/// Writes `episode,step,request_point,server_point,cost` rows, one per
/// decision, episodes in the order given.
pub fn write_trace_csv<W: Write>(out: W, traces: &[MatchingTrace]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for t in traces {
        for (step, d) in t.decisions.iter().enumerate() {
            w.serialize(TraceRow {
                episode: t.episode,
                step,
                request_point: d.request,
                server_point: d.server,
                cost: d.cost,
            })?;
        }
    }
    if traces.iter().all(|t| t.decisions.is_empty()) {
        w.write_record(["episode", "step", "request_point", "server_point", "cost"])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.tag().parse::<Algorithm>().unwrap(), a);
            assert_eq!(serde_json::to_string(&a).unwrap(), format!("\"{}\"", a.tag()));
        }
        assert!("random".parse::<Algorithm>().is_err());
    }

    #[test]
    fn csv_layout() {
        let t = MatchingTrace::new(
            Algorithm::Greedy,
            7,
            0,
            vec![
                Decision {
                    request: 0,
                    server: 1,
                    cost: 1.0,
                },
                Decision {
                    request: 1,
                    server: 2,
                    cost: 2.5,
                },
            ],
        );
        assert_eq!(t.total_cost, 3.5);
        let mut buf = Vec::new();
        write_trace_csv(&mut buf, &[t]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "episode,step,request_point,server_point,cost\n0,0,0,1,1.0\n0,1,1,2,2.5\n"
        );
    }

    #[test]
    fn empty_trace_still_has_header() {
        let mut buf = Vec::new();
        write_trace_csv(&mut buf, &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "episode,step,request_point,server_point,cost\n"
        );
    }
}
