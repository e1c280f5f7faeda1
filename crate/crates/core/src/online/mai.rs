use super::{MatchError, OnlineMatcher};
use crate::metric::Instance;

/// Nearest server point to `request`, ties broken by lowest point index.
pub fn discretize_request(inst: &Instance, request: usize) -> Result<usize, MatchError> {
    nearest(inst, &inst.distinct_servers(), request)
}

fn nearest(inst: &Instance, server_points: &[usize], request: usize) -> Result<usize, MatchError> {
    let metric = inst.metric();
    if request >= metric.len() {
        return Err(MatchError::UnknownPoint(request));
    }
    // server_points is sorted, so min_by keeps the lowest index on ties
    server_points
        .iter()
        .copied()
        .min_by(|&a, &b| metric.distance(request, a).total_cmp(&metric.distance(request, b)))
        .ok_or(MatchError::NoServers)
}

/// One decision of the discretizing wrapper.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaiDecision {
    pub request: usize,
    /// Server point the request was moved to before the inner matcher saw it.
    pub discretized: usize,
    pub server: usize,
    /// `d(request, server)` in the instance metric.
    pub cost: f64,
    /// The inner matcher's own cost for serving `discretized`.
    pub inner_cost: f64,
    /// `d(discretized, server)` in the instance metric.
    pub inner_metric_cost: f64,
    /// `d(request, discretized)`.
    pub shift: f64,
}

impl MaiDecision {
    /// `cost <= inner_metric_cost + shift`, up to rounding.
    pub fn satisfies_triangle_bound(&self) -> bool {
        let bound = self.inner_metric_cost + self.shift;
        self.cost <= bound + 1e-9 * bound.max(1.0)
    }
}

/// Wraps a matcher that only understands requests at server points: each
/// request `r` is replaced by its nearest server point `g(r)`, the inner
/// matcher picks a server `s` for `g(r)`, and `r` is served by `s`.
#[derive(Debug, Clone)]
pub struct Mai<'a, M> {
    inst: &'a Instance,
    server_points: Vec<usize>,
    inner: M,
}

impl<'a, M: OnlineMatcher> Mai<'a, M> {
    pub fn new(inst: &'a Instance, inner: M) -> Self {
        Self {
            inst,
            server_points: inst.distinct_servers(),
            inner,
        }
    }

    pub fn inner(&self) -> &M {
        &self.inner
    }

    pub fn serve(&mut self, request: usize) -> Result<MaiDecision, MatchError> {
        let discretized = nearest(self.inst, &self.server_points, request)?;
        let served = self.inner.serve(discretized)?;
        let metric = self.inst.metric();
        Ok(MaiDecision {
            request,
            discretized,
            server: served.server,
            cost: metric.distance(request, served.server),
            inner_cost: served.cost,
            inner_metric_cost: metric.distance(discretized, served.server),
            shift: metric.distance(request, discretized),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::FiniteMetric;
    use crate::online::Served;

    /// Line with points at coordinates 0..=10, servers at 0 and 10.
    fn line_inst(requests: Vec<usize>) -> Instance {
        let coords: Vec<f64> = (0..=10).map(f64::from).collect();
        Instance::new(FiniteMetric::line(&coords).unwrap(), vec![0, 10], requests).unwrap()
    }

    #[test]
    fn discretization() {
        let inst = line_inst(vec![4, 9]);
        assert_eq!(discretize_request(&inst, 10).unwrap(), 10);
        assert_eq!(discretize_request(&inst, 4).unwrap(), 0);
        assert_eq!(discretize_request(&inst, 5).unwrap(), 0);
        assert_eq!(discretize_request(&inst, 6).unwrap(), 10);
        assert_eq!(discretize_request(&inst, 11), Err(MatchError::UnknownPoint(11)));
    }

    #[test]
    fn no_servers() {
        let inst = Instance::new(FiniteMetric::line(&[0.0]).unwrap(), vec![], vec![]).unwrap();
        assert_eq!(discretize_request(&inst, 0), Err(MatchError::NoServers));
    }

    /// Serves every request with the server at the same point.
    struct Identity;

    impl OnlineMatcher for Identity {
        fn serve(&mut self, request: usize) -> Result<Served, MatchError> {
            Ok(Served {
                server: request,
                cost: 0.0,
            })
        }
    }

    #[test]
    fn wrapper_hand_trace() {
        let inst = line_inst(vec![4, 9]);
        let mut mai = Mai::new(&inst, Identity);
        let a = mai.serve(4).unwrap();
        let b = mai.serve(9).unwrap();
        assert_eq!((a.discretized, a.server, a.cost), (0, 0, 4.0));
        assert_eq!((b.discretized, b.server, b.cost), (10, 10, 1.0));
        assert_eq!(a.cost + b.cost, 5.0);
        assert!(a.satisfies_triangle_bound() && b.satisfies_triangle_bound());
    }

    #[test]
    fn request_at_server_point() {
        let inst = line_inst(vec![0, 10]);
        let d = Mai::new(&inst, Identity).serve(0).unwrap();
        assert_eq!(d.cost, 0.0);
        assert_eq!(d.shift, 0.0);
    }
}
