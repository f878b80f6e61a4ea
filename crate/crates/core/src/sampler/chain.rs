use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::rng::RngStream;
use crate::sampler::data::DataMatrix;
use crate::sampler::hyper::Hyperparameters;
use crate::sampler::moments::NodeMoments;
use crate::sampler::state::ChainState;
use crate::sampler::steps::gibbs_sweep;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainConfig {
    /// Total sweeps, burn-in included.
    pub iters: usize,
    pub burnin: usize,
    pub thin: usize,
    pub store_draws: bool,
}

impl Default for ChainConfig {
    fn default() -> Self {
        Self {
            iters: 15_000,
            burnin: 5_000,
            thin: 1,
            store_draws: false,
        }
    }
}

impl ChainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iters <= self.burnin {
            return Err(Error::invalid(
                "iters",
                format!("must exceed burn-in ({} <= {})", self.iters, self.burnin),
            ));
        }
        if self.thin == 0 {
            return Err(Error::invalid("thin", "must be at least 1"));
        }
        Ok(())
    }

    /// Number of draws kept after burn-in and thinning.
    pub fn retained(&self) -> usize {
        (self.iters - self.burnin) / self.thin
    }

    fn keeps(&self, iteration: usize) -> bool {
        iteration > self.burnin && (iteration - self.burnin) % self.thin == 0
    }
}

/// One retained draw of all unknowns.
#[derive(Clone, Debug, PartialEq)]
pub struct StoredDraw<T> {
    pub omega: Array2<T>,
    pub d: Vec<T>,
    pub lambda: Vec<T>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainMeta {
    pub iters: usize,
    pub burnin: usize,
    pub thin: usize,
    pub seed: u64,
    pub stream: u64,
    pub retained: usize,
    pub n: usize,
    pub p: usize,
}

/// Posterior summaries of one chain.
#[derive(Clone, Debug)]
pub struct ChainSamples<T> {
    omega_sum: Array2<T>,
    node_moments: NodeMoments<T>,
    stored_draws: Option<Vec<StoredDraw<T>>>,
    meta: ChainMeta,
    hyper: Option<Hyperparameters<T>>,
}

impl<T: Real> ChainSamples<T> {
    fn empty(p: usize, meta: ChainMeta, hyper: Option<Hyperparameters<T>>, store: bool) -> Self {
        Self {
            omega_sum: Array2::zeros((p, p)),
            node_moments: NodeMoments::new(p),
            stored_draws: store.then(Vec::new),
            meta,
            hyper,
        }
    }

    /// Summaries of an explicit list of precision draws.
    pub fn from_omega_draws<'a>(p: usize, draws: impl IntoIterator<Item = ArrayView2<'a, T>>) -> Self {
        let meta = ChainMeta {
            iters: 0,
            burnin: 0,
            thin: 1,
            seed: 0,
            stream: 0,
            retained: 0,
            n: 0,
            p,
        };
        let mut s = Self::empty(p, meta, None, false);
        for w in draws {
            s.push(w, None);
        }
        s.meta.iters = s.meta.retained;
        s
    }

    /// Rebuilds summaries from persisted parts.
    pub fn from_parts(
        omega_mean: Array2<T>,
        node_moments: NodeMoments<T>,
        meta: ChainMeta,
        hyper: Option<Hyperparameters<T>>,
    ) -> Self {
        let omega_sum = omega_mean * T::from_count(meta.retained.max(1));
        Self {
            omega_sum,
            node_moments,
            stored_draws: None,
            meta,
            hyper,
        }
    }

    /// Attaches draws read back from storage.
    pub fn with_stored_draws(mut self, draws: Vec<StoredDraw<T>>) -> Self {
        self.stored_draws = Some(draws);
        self
    }

    fn push(&mut self, omega: ArrayView2<T>, extra: Option<(&[T], &[T])>) {
        self.omega_sum += &omega;
        self.node_moments.push_omega(omega);
        self.meta.retained += 1;
        if let (Some(store), Some((d, lambda))) = (self.stored_draws.as_mut(), extra) {
            store.push(StoredDraw {
                omega: omega.to_owned(),
                d: d.to_vec(),
                lambda: lambda.to_vec(),
            });
        }
    }

    pub fn p(&self) -> usize {
        self.meta.p
    }

    pub fn count(&self) -> usize {
        self.meta.retained
    }

    /// Posterior mean `Ω̂`.
    pub fn omega_mean(&self) -> Array2<T> {
        let c = T::from_count(self.meta.retained.max(1));
        &self.omega_sum / c
    }

    pub fn node_moments(&self) -> &NodeMoments<T> {
        &self.node_moments
    }

    pub fn stored_draws(&self) -> Option<&[StoredDraw<T>]> {
        self.stored_draws.as_deref()
    }

    pub fn meta(&self) -> &ChainMeta {
        &self.meta
    }

    pub fn hyperparameters(&self) -> Option<&Hyperparameters<T>> {
        self.hyper.as_ref()
    }
}

/// Runs the Gibbs sampler on standardized data.
pub fn run_chain<T: Real>(
    data: &DataMatrix<T>,
    hyper: &Hyperparameters<T>,
    config: &ChainConfig,
    rng: &mut RngStream,
) -> Result<ChainSamples<T>> {
    run_chain_with_progress(data, hyper, config, rng, |_, _| {})
}

/// As [`run_chain`], calling `progress(iteration, state)` after every sweep.
pub fn run_chain_with_progress<T: Real>(
    data: &DataMatrix<T>,
    hyper: &Hyperparameters<T>,
    config: &ChainConfig,
    rng: &mut RngStream,
    mut progress: impl FnMut(usize, &ChainState<T>),
) -> Result<ChainSamples<T>> {
    if !data.is_standardized() {
        return Err(Error::invalid("data", "the sampler expects standardized columns"));
    }
    config.validate()?;
    let (n, p) = (data.n(), data.p());
    if p < 2 {
        return Err(Error::invalid("p", format!("need at least 2 variables, got {p}")));
    }
    hyper.validate(p)?;
    let gram = data.gram();
    let mut state = ChainState::initial(&gram, n, hyper)?;
    let meta = ChainMeta {
        iters: config.iters,
        burnin: config.burnin,
        thin: config.thin,
        seed: rng.seed(),
        stream: rng.stream_id(),
        retained: 0,
        n,
        p,
    };
    let mut samples = ChainSamples::empty(p, meta, Some(hyper.clone()), config.store_draws);
    for it in 1..=config.iters {
        gibbs_sweep(&mut state, &gram, n, hyper, rng).map_err(|e| Error::ChainFailure {
            iteration: it,
            source: Box::new(e),
        })?;
        if config.keeps(it) {
            samples.push(state.omega.view(), Some((&state.d, &state.lambda)));
        }
        progress(it, &state);
    }
    Ok(samples)
}
