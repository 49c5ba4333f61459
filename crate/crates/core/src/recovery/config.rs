use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Named constant set. `Theory` uses the constants under which the recovery
/// guarantee is proved; `Empirical` uses constants calibrated so that instances
/// with a few thousand vertices behave as the asymptotic analysis predicts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Theory,
    Empirical,
}

impl std::str::FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theory" => Ok(Profile::Theory),
            "empirical" => Ok(Profile::Empirical),
            other => Err(Error::InvalidConfig(format!("unknown profile {other:?}"))),
        }
    }
}

impl std::fmt::Display for Profile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Profile::Theory => "theory",
            Profile::Empirical => "empirical",
        })
    }
}

/// Reference size for the first vote's cut.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VoteScale {
    /// `(p - q) s' * vote_fraction`.
    SizeEstimate,
    /// `(p - q) |S| * vote_fraction`, tracking the ball that actually votes.
    BallSize,
}

/// Fractions used by the candidate tests of one clustering round.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// A candidate ball must hold at least `s' * s_fraction_big` vertices.
    pub s_fraction_big: f64,
    /// First vote: `N_S(v) >= q|S| + (p - q) s' * vote_fraction`.
    pub vote_fraction: f64,
    pub vote_scale: VoteScale,
    /// Second vote: `N_T1(v) >= q|T1| + (p - q) |T1| * refine_vote_fraction`.
    pub refine_vote_fraction: f64,
    /// `T1` must be larger than `s' * t1_min_fraction`.
    pub t1_min_fraction: f64,
    /// Degree cut `(mix.0 p + mix.1 q) |T1|` separating members of `T1` from the rest of `W`.
    pub purity_mix: (f64, f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveryConfig {
    pub profile: Profile,
    /// Constant in the size threshold `s_bar`.
    pub c_size: f64,
    /// Plural-set slack; the separation radius is `sqrt(2 epsilon) (p - q) sqrt(s')`.
    pub epsilon: f64,
    /// Ball radius as a multiple of the separation radius.
    pub radius_factor: f64,
    /// Multiplier on `sqrt(n) ln n` for the number of size samples and center rounds.
    pub h_factor: f64,
    pub thresholds: Thresholds,
    /// Re-run the purity test on the merged set against all of `V` before returning it.
    pub verify_merged: bool,
    pub svd_tol: f64,
    pub svd_max_iterations: usize,
    /// Replaces the computed projection dimension when set.
    pub k_prime_override: Option<usize>,
    pub max_peel_rounds: usize,
    pub seed: u64,
}

impl RecoveryConfig {
    pub fn theory(seed: u64) -> Self {
        Self {
            profile: Profile::Theory,
            c_size: 8192.0,
            epsilon: 0.002,
            radius_factor: 1.0 / 20.0,
            h_factor: 1.0,
            thresholds: Thresholds {
                s_fraction_big: 1.0 / 21.0,
                vote_fraction: 1.0 / 56.0,
                vote_scale: VoteScale::SizeEstimate,
                refine_vote_fraction: 1.0 / 56.0,
                t1_min_fraction: 1.0 / 6.0,
                purity_mix: (0.9, 0.1),
            },
            verify_merged: false,
            svd_tol: 1e-6,
            svd_max_iterations: 200,
            k_prime_override: None,
            max_peel_rounds: 64,
            seed,
        }
    }

    pub fn empirical(seed: u64) -> Self {
        Self {
            profile: Profile::Empirical,
            c_size: 1.0,
            radius_factor: 6.0,
            thresholds: Thresholds {
                s_fraction_big: 1.0 / 21.0,
                vote_fraction: 1.0 / 2.0,
                vote_scale: VoteScale::BallSize,
                refine_vote_fraction: 1.0 / 2.0,
                t1_min_fraction: 1.0 / 6.0,
                purity_mix: (0.7, 0.3),
            },
            verify_merged: true,
            svd_tol: 5e-3,
            ..Self::theory(seed)
        }
    }

    pub fn for_profile(profile: Profile, seed: u64) -> Self {
        match profile {
            Profile::Theory => Self::theory(seed),
            Profile::Empirical => Self::empirical(seed),
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.thresholds;
        let fractions = [
            ("s_fraction_big", t.s_fraction_big),
            ("vote_fraction", t.vote_fraction),
            ("refine_vote_fraction", t.refine_vote_fraction),
            ("t1_min_fraction", t.t1_min_fraction),
            ("purity_mix.0", t.purity_mix.0),
            ("purity_mix.1", t.purity_mix.1),
        ];
        for (name, f) in fractions {
            if !(f > 0.0 && f < 1.0) {
                return Err(Error::InvalidConfig(format!("{name} = {f} is not in (0, 1)")));
            }
        }
        if ((t.purity_mix.0 + t.purity_mix.1) - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidConfig("purity_mix must sum to 1".into()));
        }
        let positive = [
            ("c_size", self.c_size),
            ("epsilon", self.epsilon),
            ("radius_factor", self.radius_factor),
            ("h_factor", self.h_factor),
            ("svd_tol", self.svd_tol),
        ];
        for (name, x) in positive {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::InvalidConfig(format!("{name} = {x} must be positive")));
            }
        }
        if self.k_prime_override == Some(0) {
            return Err(Error::InvalidConfig("k' override must be positive".into()));
        }
        Ok(())
    }

    /// `ceil(h_factor * sqrt(n) * ln n)`, at least 1.
    pub fn budget(&self, n: usize) -> usize {
        let nf = n as f64;
        ((self.h_factor * nf.sqrt() * nf.ln()).ceil() as usize).max(1)
    }
}
