use std::path::PathBuf;

use riwgm::{ConditionalD, EdgeRule, LambdaShape};
use serde::{Deserialize, Serialize};

use crate::args::{ConditionalDArg, FitArgs, LambdaShapeArg, PriorArg, RuleArg};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prior {
    Riw,
    Iw,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaShapeKey {
    Paper,
    Derived,
    FullConditional,
}

impl From<LambdaShapeKey> for LambdaShape {
    fn from(k: LambdaShapeKey) -> Self {
        match k {
            LambdaShapeKey::Paper => LambdaShape::PaperPlusOne,
            LambdaShapeKey::Derived => LambdaShape::Derived,
            LambdaShapeKey::FullConditional => LambdaShape::FullConditional,
        }
    }
}

impl From<PriorArg> for Prior {
    fn from(a: PriorArg) -> Self {
        match a {
            PriorArg::Riw => Prior::Riw,
            PriorArg::Iw => Prior::Iw,
        }
    }
}

impl From<ConditionalDArg> for ConditionalD {
    fn from(a: ConditionalDArg) -> Self {
        match a {
            ConditionalDArg::PaperIg => ConditionalD::PaperIg,
            ConditionalDArg::ExactGig => ConditionalD::ExactGig,
        }
    }
}

impl From<LambdaShapeArg> for LambdaShapeKey {
    fn from(a: LambdaShapeArg) -> Self {
        match a {
            LambdaShapeArg::Paper => LambdaShapeKey::Paper,
            LambdaShapeArg::Derived => LambdaShapeKey::Derived,
            LambdaShapeArg::FullConditional => LambdaShapeKey::FullConditional,
        }
    }
}

impl From<RuleArg> for EdgeRule {
    fn from(a: RuleArg) -> Self {
        match a {
            RuleArg::And => EdgeRule::And,
            RuleArg::Or => EdgeRule::Or,
        }
    }
}

/// Settings of a fit and of the downstream selection steps. Stored as
/// `run.json` in every chain directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub data_path: Option<PathBuf>,
    pub seed: u64,
    pub iters: usize,
    pub burnin: usize,
    pub thin: usize,
    pub prior: Prior,
    pub conditional_d: ConditionalD,
    pub lambda_shape: LambdaShapeKey,
    pub delta_count: usize,
    pub rule: EdgeRule,
    pub eta: f64,
    pub store_draws: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            data_path: None,
            seed: 1,
            iters: 15_000,
            burnin: 5_000,
            thin: 1,
            prior: Prior::Riw,
            conditional_d: ConditionalD::PaperIg,
            lambda_shape: LambdaShapeKey::Paper,
            delta_count: 50,
            rule: EdgeRule::And,
            eta: 0.1,
            store_draws: false,
        }
    }
}

impl RunConfig {
    pub fn apply(mut self, a: &FitArgs) -> Self {
        if let Some(d) = &a.data {
            self.data_path = Some(d.clone());
        }
        if let Some(v) = a.seed {
            self.seed = v;
        }
        if let Some(v) = a.iters {
            self.iters = v;
        }
        if let Some(v) = a.burnin {
            self.burnin = v;
        }
        if let Some(v) = a.thin {
            self.thin = v;
        }
        if let Some(v) = a.prior {
            self.prior = v.into();
        }
        if let Some(v) = a.conditional_d {
            self.conditional_d = v.into();
        }
        if let Some(v) = a.lambda_shape {
            self.lambda_shape = v.into();
        }
        self.store_draws |= a.store_draws;
        self
    }
}
