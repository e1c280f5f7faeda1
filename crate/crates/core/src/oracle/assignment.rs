use super::OracleError;
use crate::metric::Instance;

/// Minimum-cost perfect matching between server instances and requests.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalMatching {
    /// `(server index, request index)`, indexes into the instance's lists,
    /// sorted by request index.
    pub pairs: Vec<(usize, usize)>,
    pub cost: f64,
}

/// Solves the square assignment problem `min Σ cost[i][σ(i)]` with the
/// shortest-augmenting-path Hungarian method, `O(n³)`.
///
/// Returns `σ` as `row -> column` and the optimal total.
pub fn min_cost_assignment(cost: &[Vec<f64>]) -> Result<(Vec<usize>, f64), OracleError> {
    let n = cost.len();
    if cost.iter().any(|row| row.len() != n) {
        return Err(OracleError::NotSquare);
    }
    if n == 0 {
        return Ok((vec![], 0.0));
    }
    // 1-based potentials; column 0 is a virtual source
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let reduced = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if reduced < minv[j] {
                    minv[j] = reduced;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut col_of = vec![0usize; n];
    for j in 1..=n {
        col_of[row_of[j] - 1] = j - 1;
    }
    let total = col_of
        .iter()
        .enumerate()
        .map(|(i, &j)| cost[i][j])
        .fold(0.0, |acc, c| acc + c);
    Ok((col_of, total))
}

/// Exact offline optimum for `inst` under its own metric.
pub fn optimal_matching(inst: &Instance) -> Result<OptimalMatching, OracleError> {
    let servers = inst.servers();
    let requests = inst.requests();
    if servers.len() != requests.len() {
        return Err(OracleError::SizeMismatch {
            servers: servers.len(),
            requests: requests.len(),
        });
    }
    let metric = inst.metric();
    let cost: Vec<Vec<f64>> = requests
        .iter()
        .map(|&r| servers.iter().map(|&s| metric.distance(r, s)).collect())
        .collect();
    let (server_of, total) = min_cost_assignment(&cost)?;
    Ok(OptimalMatching {
        pairs: server_of.into_iter().enumerate().map(|(r, s)| (s, r)).collect(),
        cost: total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::FiniteMetric;

    #[test]
    fn identical_multisets_cost_nothing() {
        let metric = FiniteMetric::line(&[0.0, 3.0, 8.0]).unwrap();
        let inst = Instance::new(metric, vec![0, 2, 2, 1], vec![2, 1, 0, 2]).unwrap();
        assert_eq!(optimal_matching(&inst).unwrap().cost, 0.0);
    }

    #[test]
    fn line_pair() {
        // points: 0 -> 0.0, 1 -> 10.0, 2 -> 1.0, 3 -> 9.0
        let metric = FiniteMetric::line(&[0.0, 10.0, 1.0, 9.0]).unwrap();
        let inst = Instance::new(metric, vec![0, 1], vec![2, 3]).unwrap();
        let m = optimal_matching(&inst).unwrap();
        assert_eq!(m.cost, 2.0);
        assert_eq!(m.pairs, vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn classic_matrix() {
        let cost = vec![vec![4.0, 1.0, 3.0], vec![2.0, 0.0, 5.0], vec![3.0, 2.0, 2.0]];
        let (assign, total) = min_cost_assignment(&cost).unwrap();
        assert_eq!(total, 5.0);
        assert_eq!(assign, vec![1, 0, 2]);
    }

    #[test]
    fn rejects_ragged() {
        assert_eq!(
            min_cost_assignment(&[vec![1.0, 2.0], vec![1.0]]),
            Err(OracleError::NotSquare)
        );
        assert_eq!(min_cost_assignment(&[]).unwrap(), (vec![], 0.0));
    }
}
