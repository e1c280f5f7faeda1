use super::{MatchError, OnlineMatcher, Served};
use crate::metric::Instance;

/// Deterministic greedy: each request takes the nearest unused server,
/// ties going to the lowest point index.
#[derive(Debug, Clone)]
pub struct Greedy<'a> {
    inst: &'a Instance,
    used: Vec<bool>,
}

impl<'a> Greedy<'a> {
    pub fn new(inst: &'a Instance) -> Self {
        Self {
            inst,
            used: vec![false; inst.size()],
        }
    }

    /// Marks as used every server instance at the listed points, one
    /// instance per entry.
    pub fn with_used(inst: &'a Instance, used_points: &[usize]) -> Self {
        let mut g = Self::new(inst);
        for &p in used_points {
            if let Some(i) = (0..inst.size()).find(|&i| !g.used[i] && inst.servers()[i] == p) {
                g.used[i] = true;
            }
        }
        g
    }
}

impl OnlineMatcher for Greedy<'_> {
    fn serve(&mut self, request: usize) -> Result<Served, MatchError> {
        let metric = self.inst.metric();
        if request >= metric.len() {
            return Err(MatchError::UnknownPoint(request));
        }
        let servers = self.inst.servers();
        let best = (0..servers.len())
            .filter(|&i| !self.used[i])
            .min_by(|&a, &b| {
                let da = metric.distance(request, servers[a]);
                let db = metric.distance(request, servers[b]);
                da.total_cmp(&db).then(servers[a].cmp(&servers[b])).then(a.cmp(&b))
            })
            .ok_or(MatchError::Exhausted)?;
        self.used[best] = true;
        Ok(Served {
            server: servers[best],
            cost: metric.distance(request, servers[best]),
        })
    }
}
