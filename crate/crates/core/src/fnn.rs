//! Feed-forward regression network.
//!
//! Parameters are laid out layer by layer. Within a layer the weight matrix
//! is row-major with shape `(out, in)`, followed by its bias vector. This
//! order is shared by [`Network::encode`], [`Network::decode`] and
//! [`gradient`].

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Sigmoid,
    Linear,
}

impl Activation {
    #[inline]
    fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Sigmoid => 1.0 / (1.0 + (-z).exp()),
            Activation::Linear => z,
        }
    }

    /// Derivative expressed through the activation value `a`.
    #[inline]
    fn derivative(self, a: f64) -> f64 {
        match self {
            Activation::Sigmoid => a * (1.0 - a),
            Activation::Linear => 1.0,
        }
    }
}

/// Borrowed row-major inputs with aligned scalar targets.
#[derive(Debug, Clone, Copy)]
pub struct Batch<'a> {
    inputs: &'a [f64],
    n_in: usize,
    targets: &'a [f64],
}

impl<'a> Batch<'a> {
    pub fn new(inputs: &'a [f64], n_in: usize, targets: &'a [f64]) -> Result<Self> {
        if n_in == 0 || inputs.len() != targets.len() * n_in {
            return Err(Error::LengthMismatch {
                expected: targets.len() * n_in,
                actual: inputs.len(),
            });
        }
        Ok(Self {
            inputs,
            n_in,
            targets,
        })
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn targets(&self) -> &'a [f64] {
        self.targets
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'a [f64], f64)> + 'a {
        self.inputs
            .chunks_exact(self.n_in)
            .zip(self.targets.iter().copied())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    sizes: Vec<usize>,
    /// One `(out, in)` row-major matrix per layer.
    weights: Vec<Vec<f64>>,
    biases: Vec<Vec<f64>>,
    hidden: Activation,
    output: Activation,
}

/// At least two layers, all non-empty, single output.
pub fn validate_sizes(sizes: &[usize]) -> Result<()> {
    let bad = |message: &str| {
        Err(Error::InvalidShape {
            sizes: sizes.to_vec(),
            message: message.to_string(),
        })
    };
    if sizes.len() < 2 {
        return bad("need an input and an output layer");
    }
    if sizes.contains(&0) {
        return bad("layer sizes must be at least 1");
    }
    if sizes.last() != Some(&1) {
        return bad("output layer must have width 1");
    }
    Ok(())
}

/// Total weights and biases for a layer shape.
pub fn param_count(sizes: &[usize]) -> usize {
    sizes.windows(2).map(|w| w[0] * w[1] + w[1]).sum()
}

impl Network {
    /// Sigmoid hidden layers, linear output. Weights uniform in
    /// `[-1/sqrt(fan_in), 1/sqrt(fan_in)]`, biases zero.
    pub fn init(sizes: &[usize], seed: u64) -> Result<Self> {
        validate_sizes(sizes)?;
        let mut rng = rng::seeded(seed);
        let weights = sizes
            .windows(2)
            .map(|w| {
                let limit = 1.0 / (w[0] as f64).sqrt();
                (0..w[0] * w[1])
                    .map(|_| rng.random_range(-limit..=limit))
                    .collect()
            })
            .collect();
        let biases = sizes[1..].iter().map(|&n| vec![0.0; n]).collect();
        Ok(Self {
            sizes: sizes.to_vec(),
            weights,
            biases,
            hidden: Activation::Sigmoid,
            output: Activation::Linear,
        })
    }

    /// Rebuilds a network from a flat parameter vector in codec order.
    pub fn decode(sizes: &[usize], params: &[f64]) -> Result<Self> {
        validate_sizes(sizes)?;
        let expected = param_count(sizes);
        if params.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: params.len(),
            });
        }
        let mut weights = Vec::with_capacity(sizes.len() - 1);
        let mut biases = Vec::with_capacity(sizes.len() - 1);
        let mut rest = params;
        for w in sizes.windows(2) {
            let (wm, tail) = rest.split_at(w[0] * w[1]);
            let (bv, tail) = tail.split_at(w[1]);
            weights.push(wm.to_vec());
            biases.push(bv.to_vec());
            rest = tail;
        }
        Ok(Self {
            sizes: sizes.to_vec(),
            weights,
            biases,
            hidden: Activation::Sigmoid,
            output: Activation::Linear,
        })
    }

    pub fn with_activations(mut self, hidden: Activation, output: Activation) -> Self {
        self.hidden = hidden;
        self.output = output;
        self
    }

    pub fn encode(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        for (w, b) in self.weights.iter().zip(&self.biases) {
            out.extend_from_slice(w);
            out.extend_from_slice(b);
        }
        out
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn n_inputs(&self) -> usize {
        self.sizes[0]
    }

    pub fn param_count(&self) -> usize {
        param_count(&self.sizes)
    }

    pub fn activations(&self) -> (Activation, Activation) {
        (self.hidden, self.output)
    }

    fn layer_activation(&self, layer: usize) -> Activation {
        if layer + 1 == self.weights.len() {
            self.output
        } else {
            self.hidden
        }
    }

    /// Fills `acts` with every layer's activations, input first.
    fn forward_into(&self, x: &[f64], acts: &mut Vec<Vec<f64>>) {
        acts.resize(self.sizes.len(), Vec::new());
        acts[0].clear();
        acts[0].extend_from_slice(x);
        for l in 0..self.weights.len() {
            let (n_in, n_out) = (self.sizes[l], self.sizes[l + 1]);
            let act = self.layer_activation(l);
            let (prev, next) = acts.split_at_mut(l + 1);
            let input = &prev[l];
            let out = &mut next[0];
            out.clear();
            for j in 0..n_out {
                let row = &self.weights[l][j * n_in..(j + 1) * n_in];
                let z = row.iter().zip(input).map(|(w, a)| w * a).sum::<f64>() + self.biases[l][j];
                out.push(act.apply(z));
            }
        }
    }

    pub fn forward(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n_inputs() {
            return Err(Error::LengthMismatch {
                expected: self.n_inputs(),
                actual: x.len(),
            });
        }
        let mut acts = Vec::new();
        self.forward_into(x, &mut acts);
        Ok(acts.last().expect("at least two layers")[0])
    }

    pub fn predict(&self, batch: &Batch<'_>) -> Result<Vec<f64>> {
        self.check_batch(batch)?;
        let mut acts = Vec::new();
        Ok(batch
            .iter()
            .map(|(x, _)| {
                self.forward_into(x, &mut acts);
                acts[acts.len() - 1][0]
            })
            .collect())
    }

    /// Mean squared error over `batch`.
    pub fn loss(&self, batch: &Batch<'_>) -> Result<f64> {
        let preds = self.predict(batch)?;
        mse(batch.targets(), &preds)
    }

    fn check_batch(&self, batch: &Batch<'_>) -> Result<()> {
        if batch.n_in() != self.n_inputs() {
            return Err(Error::LengthMismatch {
                expected: self.n_inputs(),
                actual: batch.n_in(),
            });
        }
        Ok(())
    }
}

/// `Σ (y − ŷ)² / n`.
pub fn mse(y: &[f64], yhat: &[f64]) -> Result<f64> {
    if y.len() != yhat.len() {
        return Err(Error::LengthMismatch {
            expected: y.len(),
            actual: yhat.len(),
        });
    }
    if y.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(y.iter()
        .zip(yhat)
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        / y.len() as f64)
}

/// Analytic gradient of the batch MSE, in codec order.
pub fn gradient(net: &Network, batch: &Batch<'_>) -> Result<Vec<f64>> {
    Ok(loss_and_gradient(net, batch)?.1)
}

/// Batch MSE and its gradient from one forward/backward sweep.
pub fn loss_and_gradient(net: &Network, batch: &Batch<'_>) -> Result<(f64, Vec<f64>)> {
    net.check_batch(batch)?;
    if batch.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let n = batch.len() as f64;
    let n_layers = net.weights.len();
    let mut gw: Vec<Vec<f64>> = net.weights.iter().map(|w| vec![0.0; w.len()]).collect();
    let mut gb: Vec<Vec<f64>> = net.biases.iter().map(|b| vec![0.0; b.len()]).collect();
    let mut acts = Vec::new();
    let mut delta: Vec<f64> = Vec::new();
    let mut prev_delta: Vec<f64> = Vec::new();
    let mut loss = 0.0;

    for (x, y) in batch.iter() {
        net.forward_into(x, &mut acts);
        let yhat = acts[n_layers][0];
        loss += (yhat - y).powi(2);

        delta.clear();
        delta.push(2.0 * (yhat - y) / n * net.output.derivative(yhat));
        for l in (0..n_layers).rev() {
            let n_in = net.sizes[l];
            let input = &acts[l];
            for (j, &dj) in delta.iter().enumerate() {
                let row = &mut gw[l][j * n_in..(j + 1) * n_in];
                for (g, a) in row.iter_mut().zip(input) {
                    *g += dj * a;
                }
                gb[l][j] += dj;
            }
            if l > 0 {
                let act = net.layer_activation(l - 1);
                prev_delta.clear();
                prev_delta.extend((0..n_in).map(|i| {
                    let back: f64 = delta
                        .iter()
                        .enumerate()
                        .map(|(j, dj)| net.weights[l][j * n_in + i] * dj)
                        .sum();
                    back * act.derivative(input[i])
                }));
                std::mem::swap(&mut delta, &mut prev_delta);
            }
        }
    }

    let mut flat = Vec::with_capacity(net.param_count());
    for (w, b) in gw.iter().zip(&gb) {
        flat.extend_from_slice(w);
        flat.extend_from_slice(b);
    }
    Ok((loss / n, flat))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub max_epochs: usize,
    /// Stop once the training loss reaches this value.
    pub goal: f64,
    /// Consecutive epochs of rising validation loss that end training.
    pub max_validation_failures: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.05,
            max_epochs: 2000,
            goal: 1e-6,
            max_validation_failures: 50,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::InvalidConfig {
                field: "learning_rate",
                message: format!("must be positive, got {}", self.learning_rate),
            });
        }
        if self.max_epochs == 0 {
            return Err(Error::InvalidConfig {
                field: "max_epochs",
                message: "must be at least 1".into(),
            });
        }
        if self.goal.is_nan() {
            return Err(Error::InvalidConfig {
                field: "goal",
                message: "is NaN".into(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    MaxEpochs,
    GoalReached,
    ValidationFailures,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub network: Network,
    /// Training loss after each epoch's update.
    pub history: Vec<f64>,
    pub validation_history: Vec<f64>,
    pub stop: StopReason,
    pub epochs: usize,
}

/// Full-batch gradient descent on the MSE.
///
/// Stops after `max_epochs`, when the training loss reaches `goal`, or when
/// the validation loss has risen for `max_validation_failures` consecutive
/// epochs. In the last case the network with the best validation loss is
/// returned.
pub fn train_backprop(
    net: Network,
    train: &Batch<'_>,
    val: Option<&Batch<'_>>,
    cfg: &TrainConfig,
) -> Result<TrainOutcome> {
    cfg.validate()?;
    if train.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let val = val.filter(|v| !v.is_empty());
    let mut params = net.encode();
    let sizes = net.sizes.clone();
    let (hidden, output) = net.activations();
    let rebuild =
        |p: &[f64]| Network::decode(&sizes, p).map(|n| n.with_activations(hidden, output));
    let mut current = net;
    let mut history = Vec::with_capacity(cfg.max_epochs);
    let mut validation_history = Vec::new();
    let mut best_val = f64::INFINITY;
    let mut best_params = params.clone();
    let mut prev_val = f64::INFINITY;
    let mut failures = 0;
    let mut stop = StopReason::MaxEpochs;

    for _ in 0..cfg.max_epochs {
        let (_, grad) = loss_and_gradient(&current, train)?;
        for (p, g) in params.iter_mut().zip(&grad) {
            *p -= cfg.learning_rate * g;
        }
        current = rebuild(&params)?;
        let loss = current.loss(train)?;
        history.push(loss);

        if let Some(v) = val {
            let vl = current.loss(v)?;
            validation_history.push(vl);
            if vl < best_val {
                best_val = vl;
                best_params.clone_from(&params);
            }
            failures = if vl > prev_val { failures + 1 } else { 0 };
            prev_val = vl;
            if cfg.max_validation_failures > 0 && failures >= cfg.max_validation_failures {
                stop = StopReason::ValidationFailures;
                current = rebuild(&best_params)?;
                break;
            }
        }
        if loss <= cfg.goal {
            stop = StopReason::GoalReached;
            break;
        }
    }
    let epochs = history.len();
    Ok(TrainOutcome {
        network: current,
        history,
        validation_history,
        stop,
        epochs,
    })
}

/// JSON form of a network: shape, activations, flat parameters in codec
/// order, and the seed that initialized it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkRecord {
    pub layer_sizes: Vec<usize>,
    pub hidden_activation: Activation,
    pub output_activation: Activation,
    pub params: Vec<f64>,
    pub seed: Option<u64>,
}

impl NetworkRecord {
    pub fn from_network(net: &Network, seed: Option<u64>) -> Self {
        Self {
            layer_sizes: net.sizes.clone(),
            hidden_activation: net.hidden,
            output_activation: net.output,
            params: net.encode(),
            seed,
        }
    }

    pub fn to_network(&self) -> Result<Network> {
        Ok(Network::decode(&self.layer_sizes, &self.params)?
            .with_activations(self.hidden_activation, self.output_activation))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::Rng;

    /// Central finite differences of the batch loss.
    fn numeric_gradient(net: &Network, batch: &Batch<'_>, h: f64) -> Vec<f64> {
        let p = net.encode();
        (0..p.len())
            .map(|k| {
                let mut plus = p.clone();
                let mut minus = p.clone();
                plus[k] += h;
                minus[k] -= h;
                let lp = Network::decode(net.sizes(), &plus)
                    .unwrap()
                    .loss(batch)
                    .unwrap();
                let lm = Network::decode(net.sizes(), &minus)
                    .unwrap()
                    .loss(batch)
                    .unwrap();
                (lp - lm) / (2.0 * h)
            })
            .collect()
    }

    #[test]
    fn combo_one_shape_has_113_params() {
        let net = Network::init(&[6, 14, 1], 7).unwrap();
        assert_eq!(net.param_count(), 113);
        assert_eq!(net.encode().len(), 113);
    }

    #[test]
    fn init_rejects_bad_shapes() {
        assert!(Network::init(&[2], 0).is_err());
        assert!(Network::init(&[2, 0, 1], 0).is_err());
        assert!(Network::init(&[2, 3, 2], 0).is_err());
    }

    #[test]
    fn init_is_seeded_and_bounded() {
        let a = Network::init(&[6, 14, 1], 7).unwrap();
        assert_eq!(a, Network::init(&[6, 14, 1], 7).unwrap());
        assert_ne!(a, Network::init(&[6, 14, 1], 8).unwrap());
        let lim = 1.0 / 6f64.sqrt();
        assert!(a.weights[0].iter().all(|w| w.abs() <= lim));
        assert!(a.biases.iter().flatten().all(|&b| b == 0.0));
    }

    #[test]
    fn zero_parameters_give_zero_output() {
        let net = Network::decode(&[3, 4, 1], &vec![0.0; param_count(&[3, 4, 1])]).unwrap();
        assert_eq!(net.forward(&[0.3, -2.0, 9.0]).unwrap(), 0.0);
    }

    #[test]
    fn single_path_is_monotone() {
        // x -> sigmoid(w x) -> linear, w > 0
        let net = Network::decode(&[1, 1, 1], &[2.0, 0.0, 1.0, 0.0]).unwrap();
        let ys: Vec<f64> = (-5..=5)
            .map(|i| net.forward(&[i as f64 * 0.5]).unwrap())
            .collect();
        assert!(ys.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn forward_rejects_wrong_width() {
        let net = Network::init(&[3, 2, 1], 0).unwrap();
        assert!(matches!(
            net.forward(&[1.0, 2.0]),
            Err(Error::LengthMismatch {
                expected: 3,
                actual: 2
            })
        ));
    }

    #[test]
    fn mse_cases() {
        assert_eq!(mse(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(mse(&[1.0, 2.0], &[0.0, 0.0]).unwrap(), 2.5);
        assert_eq!(mse(&[0.0], &[3.0]).unwrap(), 9.0);
        assert!(mse(&[1.0], &[1.0, 2.0]).is_err());
        assert!(mse(&[], &[]).is_err());
    }

    #[test]
    fn linear_layer_gradient_by_hand() {
        // Single linear layer: yhat = w·x + b, grad = 2 (yhat − y) (x, 1).
        let net = Network::decode(&[2, 1], &[0.5, -1.0, 0.25]).unwrap();
        let x = [2.0, 3.0];
        let y = [1.0];
        let batch = Batch::new(&x, 2, &y).unwrap();
        let yhat = 0.5 * 2.0 - 3.0 + 0.25;
        let g = gradient(&net, &batch).unwrap();
        let e = 2.0 * (yhat - 1.0);
        assert_eq!(g, vec![e * 2.0, e * 3.0, e]);
    }

    #[test]
    fn zero_error_gives_zero_gradient() {
        let net = Network::init(&[2, 3, 1], 4).unwrap();
        let x = [0.2, 0.9, 0.5, 0.1];
        let y = [net.forward(&x[..2]).unwrap(), net.forward(&x[2..]).unwrap()];
        let batch = Batch::new(&x, 2, &y).unwrap();
        assert!(gradient(&net, &batch).unwrap().iter().all(|g| *g == 0.0));
    }

    #[test]
    fn codec_length_error_names_counts() {
        let err = Network::decode(&[6, 14, 1], &[0.0; 112]).unwrap_err();
        assert!(matches!(
            err,
            Error::LengthMismatch {
                expected: 113,
                actual: 112
            }
        ));
    }

    fn linear_data() -> (Vec<f64>, Vec<f64>) {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in 0..20 {
            let a = i as f64 / 19.0;
            let b = ((i * 7) % 20) as f64 / 19.0;
            xs.extend([a, b]);
            ys.push(0.3 * a + 0.5 * b + 0.1);
        }
        (xs, ys)
    }

    #[test]
    fn backprop_reduces_loss_and_is_deterministic() {
        let (xs, ys) = linear_data();
        let batch = Batch::new(&xs, 2, &ys).unwrap();
        // Loss descends monotonically up to lr ≈ 0.3 here; 0.5 oscillates.
        let cfg = TrainConfig {
            learning_rate: 0.2,
            max_epochs: 500,
            goal: 0.0,
            max_validation_failures: 0,
            seed: 1,
        };
        let net = Network::init(&[2, 5, 1], 1).unwrap();
        let initial = net.loss(&batch).unwrap();
        let out = train_backprop(net.clone(), &batch, None, &cfg).unwrap();
        assert_eq!(out.stop, StopReason::MaxEpochs);
        assert_eq!(out.history.len(), 500);
        assert!(*out.history.last().unwrap() < initial);
        // Below the stability threshold of this fixture every epoch descends.
        assert!(out.history.windows(2).all(|w| w[1] <= w[0]));
        let again = train_backprop(net, &batch, None, &cfg).unwrap();
        assert_eq!(out.history, again.history);
    }

    #[test]
    fn goal_stops_early() {
        let (xs, ys) = linear_data();
        let batch = Batch::new(&xs, 2, &ys).unwrap();
        let cfg = TrainConfig {
            goal: 1e9,
            ..TrainConfig::default()
        };
        let out =
            train_backprop(Network::init(&[2, 3, 1], 0).unwrap(), &batch, None, &cfg).unwrap();
        assert_eq!(out.stop, StopReason::GoalReached);
        assert_eq!(out.epochs, 1);
    }

    #[test]
    fn rising_validation_returns_best_snapshot() {
        let (xs, ys) = linear_data();
        let train = Batch::new(&xs, 2, &ys).unwrap();
        // Validation targets inverted so fitting the train set hurts them.
        let vy: Vec<f64> = ys.iter().map(|y| 1.0 - y).collect();
        let val = Batch::new(&xs, 2, &vy).unwrap();
        let cfg = TrainConfig {
            learning_rate: 0.5,
            max_epochs: 5000,
            goal: 0.0,
            max_validation_failures: 5,
            seed: 0,
        };
        let out = train_backprop(
            Network::init(&[2, 4, 1], 3).unwrap(),
            &train,
            Some(&val),
            &cfg,
        )
        .unwrap();
        assert_eq!(out.stop, StopReason::ValidationFailures);
        let best = out
            .validation_history
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        assert_relative_eq!(out.network.loss(&val).unwrap(), best, epsilon = 1e-15);
    }

    #[test]
    fn rejects_bad_config() {
        let (xs, ys) = linear_data();
        let batch = Batch::new(&xs, 2, &ys).unwrap();
        let net = Network::init(&[2, 3, 1], 0).unwrap();
        let bad = TrainConfig {
            learning_rate: 0.0,
            ..TrainConfig::default()
        };
        assert!(train_backprop(net.clone(), &batch, None, &bad).is_err());
        let bad = TrainConfig {
            max_epochs: 0,
            ..TrainConfig::default()
        };
        assert!(train_backprop(net, &batch, None, &bad).is_err());
    }

    #[test]
    fn fits_three_points() {
        let xs = [0.0, 0.5, 1.0];
        let ys = [0.2, 0.8, 0.4];
        let batch = Batch::new(&xs, 1, &ys).unwrap();
        let cfg = TrainConfig {
            learning_rate: 0.5,
            max_epochs: 20000,
            goal: 1e-6,
            max_validation_failures: 0,
            seed: 0,
        };
        let out =
            train_backprop(Network::init(&[1, 6, 1], 2).unwrap(), &batch, None, &cfg).unwrap();
        let preds = out.network.predict(&batch).unwrap();
        for (p, y) in preds.iter().zip(ys) {
            assert!((p - y).abs() < 5e-3, "{p} vs {y}");
        }
    }

    #[test]
    fn record_round_trip() {
        let net = Network::init(&[4, 10, 1], 9).unwrap();
        let rec = NetworkRecord::from_network(&net, Some(9));
        let json = serde_json::to_string(&rec).unwrap();
        let back: NetworkRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_network().unwrap(), net);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn gradient_matches_finite_differences(
            n_in in 1usize..=6,
            hidden in 1usize..=8,
            n in 1usize..=6,
            seed in 0u64..1000,
        ) {
            let net = Network::init(&[n_in, hidden, 1], seed).unwrap();
            let mut r = rng::seeded(seed + 1);
            let xs: Vec<f64> = (0..n * n_in).map(|_| r.random_range(0.0..1.0)).collect();
            let ys: Vec<f64> = (0..n).map(|_| r.random_range(0.0..1.0)).collect();
            let batch = Batch::new(&xs, n_in, &ys).unwrap();
            let analytic = gradient(&net, &batch).unwrap();
            let numeric = numeric_gradient(&net, &batch, 1e-6);
            for (a, f) in analytic.iter().zip(&numeric) {
                let err = (a - f).abs() / a.abs().max(f.abs()).max(1e-3);
                prop_assert!(err < 1e-5, "analytic {a} numeric {f}");
            }
        }

        #[test]
        fn codec_is_bijective(params in proptest::collection::vec(-10.0..10.0f64, 28)) {
            let sizes = [3, 5, 1, 1];
            prop_assert_eq!(param_count(&sizes), 28);
            let net = Network::decode(&sizes, &params).unwrap();
            prop_assert_eq!(net.encode(), params);
        }

        #[test]
        fn outputs_finite(params in proptest::collection::vec(-1e3..1e3f64, 21), x in proptest::collection::vec(-1e3..1e3f64, 3)) {
            let net = Network::decode(&[3, 4, 1], &params).unwrap();
            prop_assert!(net.forward(&x).unwrap().is_finite());
        }
    }
}
