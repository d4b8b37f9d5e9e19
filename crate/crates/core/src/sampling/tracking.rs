/// How the leader proportion `beta_n(i, j)` is chosen each round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrackingMode {
    FixedBeta(f64),
    /// `N_j / (N_i + N_j)`.
    Ids,
    /// `N_j / ((1 - eps)^2 N_i + N_j)`.
    IdsMultiplicative(f64),
}

impl TrackingMode {
    pub fn proportion(&self, n_leader: u64, n_challenger: u64) -> f64 {
        let (ni, nj) = (n_leader as f64, n_challenger as f64);
        match *self {
            TrackingMode::FixedBeta(b) => b,
            TrackingMode::Ids => nj / (ni + nj),
            TrackingMode::IdsMultiplicative(eps) => nj / ((1.0 - eps).powi(2) * ni + nj),
        }
    }
}

/// `K(K-1)` independent tracking procedures, one per ordered (leader, challenger) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackingTable {
    k: usize,
    pair_counts: Vec<u64>,
    challenger_pulls: Vec<u64>,
    beta_bar: Vec<f64>,
}

impl TrackingTable {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            pair_counts: vec![0; k * k],
            challenger_pulls: vec![0; k * k],
            beta_bar: vec![0.0; k * k],
        }
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.k + j
    }

    /// Records one round for pair `(leader, challenger)` with proportion `beta` and
    /// returns the arm to pull.
    pub fn select(&mut self, leader: usize, challenger: usize, beta: f64) -> usize {
        debug_assert_ne!(leader, challenger);
        let at = self.idx(leader, challenger);
        let t = self.pair_counts[at] as f64;
        let t_next = t + 1.0;
        self.beta_bar[at] = (t * self.beta_bar[at] + beta) / t_next;
        self.pair_counts[at] += 1;
        if self.challenger_pulls[at] as f64 <= (1.0 - self.beta_bar[at]) * t_next {
            self.challenger_pulls[at] += 1;
            challenger
        } else {
            leader
        }
    }

    pub fn pair_count(&self, i: usize, j: usize) -> u64 {
        self.pair_counts[self.idx(i, j)]
    }

    pub fn challenger_pulls(&self, i: usize, j: usize) -> u64 {
        self.challenger_pulls[self.idx(i, j)]
    }

    pub fn beta_bar(&self, i: usize, j: usize) -> f64 {
        self.beta_bar[self.idx(i, j)]
    }

    /// `N^i_j - (1 - beta_bar(i, j)) T(i, j)`.
    pub fn deviation(&self, i: usize, j: usize) -> f64 {
        let at = self.idx(i, j);
        self.challenger_pulls[at] as f64 - (1.0 - self.beta_bar[at]) * self.pair_counts[at] as f64
    }

    /// True when every pair lies in the bracket `[-1/2, 1]`.
    pub fn within_bracket(&self) -> bool {
        (0..self.k).all(|i| {
            (0..self.k).filter(|&j| j != i).all(|j| {
                let d = self.deviation(i, j);
                (-0.5 - 1e-9..=1.0 + 1e-9).contains(&d)
                    && self.challenger_pulls(i, j) <= self.pair_count(i, j)
            })
        })
    }
}
