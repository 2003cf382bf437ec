use crate::numerics::GaussianRational;

/// Parameter grid: powers `0..=p_max`, term counts `1..=t_max`, and `(a, d)` samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    pub p_max: u32,
    pub t_max: u64,
    pub samples: Vec<(GaussianRational, GaussianRational)>,
}

impl Default for Grid {
    fn default() -> Self {
        default_grid()
    }
}

/// The eight `(a, d)` pairs, all with `d ≠ 0`: real, fractional, complex start and
/// complex step.
pub fn default_samples() -> Vec<(GaussianRational, GaussianRational)> {
    [("1", "1"), ("0", "1"), ("2", "3"), ("-1", "2"), ("1/2", "1/3"), ("i", "1"), ("1+i", "1-i"), ("3/2+5/7i", "2")]
        .into_iter()
        .map(|(a, d)| (a.parse().expect("valid literal"), d.parse().expect("valid literal")))
        .collect()
}

/// `p ≤ 12`, `t ≤ 8`, [`default_samples`].
pub fn default_grid() -> Grid {
    Grid { p_max: 12, t_max: 8, samples: default_samples() }
}
