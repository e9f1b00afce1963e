use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("epsilon must lie in (0, 1), got {0}")]
    Epsilon(f64),
    #[error("problem size must be positive")]
    EmptyProblem,
    #[error("constant {name} must be positive")]
    Constant { name: &'static str },
}

/// Model parameters. All budgets are in machine words.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub epsilon: f64,
    pub n: usize,
    /// Local space constant: `S = ceil(c_s * n^epsilon)`.
    pub c_s: f64,
    /// Per-round read and write allowance, in units of `S`.
    pub c_q: u64,
    /// Global space multiplier on `n`.
    pub total_budget_factor: u64,
    pub seed: u64,
    pub strict: bool,
    /// Worker threads for machine programs; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl SimConfig {
    pub fn new(n: usize, epsilon: f64) -> Self {
        SimConfig {
            epsilon,
            n,
            c_s: 64.0,
            c_q: 4,
            total_budget_factor: 64,
            seed: 0,
            strict: false,
            threads: None,
        }
    }

    pub fn strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(ConfigError::Epsilon(self.epsilon));
        }
        if self.n == 0 {
            return Err(ConfigError::EmptyProblem);
        }
        if !(self.c_s > 0.0) {
            return Err(ConfigError::Constant { name: "c_s" });
        }
        if self.c_q == 0 {
            return Err(ConfigError::Constant { name: "c_q" });
        }
        if self.total_budget_factor == 0 {
            return Err(ConfigError::Constant {
                name: "total_budget_factor",
            });
        }
        Ok(())
    }

    /// `n^epsilon` as a real number.
    pub fn n_eps(&self) -> f64 {
        (self.n as f64).powf(self.epsilon)
    }

    /// Local space `S`, at least 4 words.
    pub fn space(&self) -> u64 {
        ((self.c_s * self.n_eps()).ceil() as u64).max(4)
    }

    /// Integer stand-in for `n^epsilon`: `max(2, floor(n^epsilon))`.
    pub fn fan(&self) -> usize {
        ((self.n_eps() + 1e-9).floor() as usize).max(2)
    }

    /// `ceil(1/epsilon)`.
    pub fn inv_eps(&self) -> u64 {
        ((1.0 / self.epsilon) - 1e-9).ceil() as u64
    }

    pub fn io_limit(&self) -> u64 {
        self.c_q * self.space()
    }

    pub fn max_machines(&self) -> u64 {
        (self.total_budget_factor * self.n as u64).div_ceil(self.space())
    }

    pub fn total_limit(&self) -> u64 {
        self.total_budget_factor * self.n as u64
    }
}
