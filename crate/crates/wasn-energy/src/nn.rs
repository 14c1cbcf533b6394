//! Cost models for neural-network inference blocks: fully-connected layers,
//! activations, convolution, pooling and batch normalization.
//!
//! Each function emits a [`CostReport`]; no weights or data values are ever
//! touched here, only dimension arithmetic.

use crate::error::{Error, Result};
use crate::hwcost::{CostReport, OpClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActivationKind {
    Relu,
    Logistic,
    Tanh,
    Softmax,
}

impl ActivationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ActivationKind::Relu => "relu",
            ActivationKind::Logistic => "logistic",
            ActivationKind::Tanh => "tanh",
            ActivationKind::Softmax => "softmax",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoolMode {
    Max,
    Avg,
}

/// Geometry of a convolutional layer: `n_templates` kernels of shape
/// `template_dims` slid over `input_dims` with the given strides and
/// zero padding, any number of axes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvSpec {
    pub n_templates: u64,
    pub template_dims: Vec<u64>,
    pub strides: Vec<u64>,
    pub padding: Vec<u64>,
    pub input_dims: Vec<u64>,
}

/// Geometry of a pooling layer; the window plays the template's role.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoolSpec {
    pub mode: PoolMode,
    pub window_dims: Vec<u64>,
    pub strides: Vec<u64>,
    pub padding: Vec<u64>,
    pub input_dims: Vec<u64>,
    /// Charge one division per output for average pooling (the window-combine
    /// formula alone counts no divide). On by default.
    pub charge_avg_pool_div: bool,
}

fn product(dims: &[u64]) -> u64 {
    dims.iter().product()
}

/// Fully-connected layer: `n_neurons * (n_inputs + 1)` MACs (bias included via
/// the augmented input), four accesses per MAC, and weights plus output
/// storage of `n_neurons * (n_inputs + 2)` words.
pub fn cost_fc(n_inputs: u64, n_neurons: u64, word_bits: u32, level: &str) -> CostReport {
    let macs = n_neurons * (n_inputs + 1);
    let mut r = CostReport::new("fc");
    r.ops.add(OpClass::Mac, macs);
    r.add_accesses(level, 4 * macs);
    r.add_stored(level, n_neurons * (n_inputs + 2) * word_bits as u64);
    r
}

/// Element-wise activation over `size` values.
pub fn cost_activation(kind: ActivationKind, size: u64, level: &str) -> CostReport {
    let mut r = CostReport::new(kind.as_str());
    match kind {
        ActivationKind::Relu => {
            r.ops.add(OpClass::Cmp, size);
            r.add_accesses(level, 3 * size);
        }
        ActivationKind::Tanh => {
            r.ops.add(OpClass::Add, 2 * size);
            r.ops.add(OpClass::Div, size);
            r.ops.add(OpClass::Exp, size);
            r.add_accesses(level, 12 * size);
        }
        ActivationKind::Logistic | ActivationKind::Softmax => {
            r.ops.add(OpClass::Add, size);
            r.ops.add(OpClass::Div, size);
            r.ops.add(OpClass::Exp, size);
            r.add_accesses(level, 9 * size);
        }
    }
    r
}

fn check_axes(spec_name: &str, dims: &[u64], strides: &[u64], padding: &[u64], input: &[u64]) -> Result<()> {
    let axes = input.len();
    if axes == 0 {
        return Err(Error::shape(spec_name, "at least one input axis is required"));
    }
    if dims.len() != axes || strides.len() != axes || padding.len() != axes {
        return Err(Error::shape(
            spec_name,
            format!(
                "axis count mismatch: input has {axes} axes, template {}, strides {}, padding {}",
                dims.len(),
                strides.len(),
                padding.len()
            ),
        ));
    }
    for (k, (&d, (&s, &i))) in dims.iter().zip(strides.iter().zip(input.iter())).enumerate() {
        if d == 0 || s == 0 || i == 0 {
            return Err(Error::shape(
                spec_name,
                format!("axis {k}: dimensions and strides must be >= 1"),
            ));
        }
    }
    Ok(())
}

fn output_dims(
    spec_name: &str,
    dims: &[u64],
    strides: &[u64],
    padding: &[u64],
    input: &[u64],
) -> Result<Vec<u64>> {
    check_axes(spec_name, dims, strides, padding, input)?;
    let mut out = Vec::with_capacity(input.len());
    for k in 0..input.len() {
        let padded = input[k] + 2 * padding[k];
        if padded < dims[k] {
            return Err(Error::shape(
                spec_name,
                format!("axis {k}: template size {} exceeds padded input {padded}", dims[k]),
            ));
        }
        let span = padded - dims[k];
        if !span.is_multiple_of(strides[k]) {
            return Err(Error::shape(
                spec_name,
                format!(
                    "axis {k}: ({} - {} + 2*{}) is not divisible by stride {}",
                    input[k], dims[k], padding[k], strides[k]
                ),
            ));
        }
        out.push(span / strides[k] + 1);
    }
    Ok(out)
}

/// Output extent per axis: `(L_in - T + 2*pad) / stride + 1`. A non-integral
/// extent is a hard error naming the axis, never a silent floor.
pub fn conv_output_dims(spec: &ConvSpec) -> Result<Vec<u64>> {
    output_dims("conv", &spec.template_dims, &spec.strides, &spec.padding, &spec.input_dims)
}

/// Convolutional layer cost. MAC count is
/// `n_templates * prod(output_dims) * (prod(template_dims) + 1)` (the +1 is
/// the bias), accesses are four per MAC, and storage covers the weights plus
/// one output plane.
pub fn cost_conv(spec: &ConvSpec, word_bits: u32, level: &str) -> Result<CostReport> {
    if spec.n_templates == 0 {
        return Err(Error::shape("conv", "n_templates must be >= 1"));
    }
    let out = conv_output_dims(spec)?;
    let template_volume = product(&spec.template_dims);
    let macs = spec.n_templates * product(&out) * (template_volume + 1);
    let mut r = CostReport::new("conv");
    r.ops.add(OpClass::Mac, macs);
    r.add_accesses(level, 4 * macs);
    let weight_bits = spec.n_templates * (template_volume + 1) * word_bits as u64;
    let output_bits = product(&out) * word_bits as u64;
    r.add_stored(level, weight_bits + output_bits);
    Ok(r)
}

/// Pooling layer: combining a window of `prod(window_dims)` values takes
/// `prod(window_dims) - 1` operations per output, comparisons for max pooling
/// and additions for average pooling, three accesses per operation.
pub fn cost_pool(spec: &PoolSpec, word_bits: u32, level: &str) -> Result<CostReport> {
    let out = output_dims("pool", &spec.window_dims, &spec.strides, &spec.padding, &spec.input_dims)?;
    let n_outputs = product(&out);
    let combine_ops = n_outputs * (product(&spec.window_dims) - 1);
    let mut r = CostReport::new("pool");
    match spec.mode {
        PoolMode::Max => r.ops.add(OpClass::Cmp, combine_ops),
        PoolMode::Avg => {
            r.ops.add(OpClass::Add, combine_ops);
            if spec.charge_avg_pool_div {
                r.ops.add(OpClass::Div, n_outputs);
            }
        }
    }
    r.add_accesses(level, 3 * combine_ops);
    r.add_stored(level, n_outputs * word_bits as u64);
    Ok(r)
}

/// Output size of a pooling layer (for dimension chaining).
pub fn pool_output_dims(spec: &PoolSpec) -> Result<Vec<u64>> {
    output_dims("pool", &spec.window_dims, &spec.strides, &spec.padding, &spec.input_dims)
}

/// Inference-time batch normalization: one scale and one shift per value.
pub fn cost_batchnorm(size: u64, word_bits: u32, level: &str) -> CostReport {
    let mut r = CostReport::new("batchnorm");
    r.ops.add(OpClass::Add, size);
    r.ops.add(OpClass::Mul, size);
    r.add_accesses(level, 6 * size);
    r.add_stored(level, 2 * size * word_bits as u64);
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    const LEVEL: &str = "on_chip_sram";

    #[test]
    fn fc_counts() {
        let r = cost_fc(64, 10, 32, LEVEL);
        assert_eq!(r.ops.get(OpClass::Mac), 650);
        assert_eq!(r.accesses_total(), 2600);
        assert_eq!(r.stored_total(), 10 * 66 * 32);
    }

    #[test]
    fn fc_minimal_and_linear() {
        assert_eq!(cost_fc(1, 1, 32, LEVEL).ops.get(OpClass::Mac), 2);
        let single = cost_fc(64, 10, 32, LEVEL);
        let double = cost_fc(64, 20, 32, LEVEL);
        assert_eq!(double.ops.get(OpClass::Mac), 2 * single.ops.get(OpClass::Mac));
        assert_eq!(double.accesses_total(), 2 * single.accesses_total());
        assert_eq!(double.stored_total(), 2 * single.stored_total());
    }

    #[test]
    fn activation_counts() {
        let relu = cost_activation(ActivationKind::Relu, 100, LEVEL);
        assert_eq!(relu.ops.get(OpClass::Cmp), 100);
        assert_eq!(relu.accesses_total(), 300);

        let tanh = cost_activation(ActivationKind::Tanh, 1, LEVEL);
        assert_eq!(tanh.ops.get(OpClass::Add), 2);
        assert_eq!(tanh.ops.get(OpClass::Div), 1);
        assert_eq!(tanh.ops.get(OpClass::Exp), 1);
        assert_eq!(tanh.accesses_total(), 12);

        let softmax = cost_activation(ActivationKind::Softmax, 10, LEVEL);
        assert_eq!(softmax.ops.get(OpClass::Add), 10);
        assert_eq!(softmax.ops.get(OpClass::Div), 10);
        assert_eq!(softmax.ops.get(OpClass::Exp), 10);
        assert_eq!(softmax.accesses_total(), 90);

        let zero = cost_activation(ActivationKind::Logistic, 0, LEVEL);
        assert_eq!(zero.ops.total(), 0);
        assert_eq!(zero.accesses_total(), 0);
    }

    fn conv_2d() -> ConvSpec {
        ConvSpec {
            n_templates: 8,
            template_dims: vec![3, 3],
            strides: vec![1, 1],
            padding: vec![1, 1],
            input_dims: vec![32, 32],
        }
    }

    #[test]
    fn conv_output_dims_cases() {
        assert_eq!(conv_output_dims(&conv_2d()).unwrap(), vec![32, 32]);

        // Template covering the whole input gives a single output.
        let full = ConvSpec {
            n_templates: 3,
            template_dims: vec![5, 7],
            strides: vec![1, 1],
            padding: vec![0, 0],
            input_dims: vec![5, 7],
        };
        assert_eq!(conv_output_dims(&full).unwrap(), vec![1, 1]);

        // (5 - 2) not divisible by stride 2 -> error naming the axis.
        let bad = ConvSpec {
            n_templates: 1,
            template_dims: vec![2],
            strides: vec![2],
            padding: vec![0],
            input_dims: vec![5],
        };
        let err = conv_output_dims(&bad).unwrap_err();
        assert!(err.to_string().contains("axis 0"), "{err}");
    }

    #[test]
    fn conv_counts() {
        let r = cost_conv(&conv_2d(), 32, LEVEL).unwrap();
        assert_eq!(r.ops.get(OpClass::Mac), 81_920); // 8 * 1024 * 10
        assert_eq!(r.accesses_total(), 4 * 81_920);
        assert_eq!(r.stored_total(), (8 * 10 + 1024) * 32);

        let unit = ConvSpec {
            n_templates: 1,
            template_dims: vec![1],
            strides: vec![1],
            padding: vec![0],
            input_dims: vec![1],
        };
        assert_eq!(cost_conv(&unit, 32, LEVEL).unwrap().ops.get(OpClass::Mac), 2);
    }

    #[test]
    fn conv_degenerates_to_fc() {
        // A template covering the padded input exactly once per template is a
        // fully-connected layer: n_templates = n_neurons, template volume =
        // n_inputs.
        let conv = ConvSpec {
            n_templates: 10,
            template_dims: vec![64],
            strides: vec![1],
            padding: vec![0],
            input_dims: vec![64],
        };
        let as_conv = cost_conv(&conv, 32, LEVEL).unwrap();
        let as_fc = cost_fc(64, 10, 32, LEVEL);
        assert_eq!(as_conv.ops.get(OpClass::Mac), as_fc.ops.get(OpClass::Mac));
        assert_eq!(as_conv.accesses_total(), as_fc.accesses_total());
    }

    fn pool_2x2(mode: PoolMode) -> PoolSpec {
        PoolSpec {
            mode,
            window_dims: vec![2, 2],
            strides: vec![2, 2],
            padding: vec![0, 0],
            input_dims: vec![32, 32],
            charge_avg_pool_div: true,
        }
    }

    #[test]
    fn pool_counts() {
        let max = cost_pool(&pool_2x2(PoolMode::Max), 32, LEVEL).unwrap();
        assert_eq!(max.ops.get(OpClass::Cmp), 768); // 256 outputs * 3
        assert_eq!(max.accesses_total(), 2304);
        assert_eq!(max.stored_total(), 256 * 32);

        let avg = cost_pool(&pool_2x2(PoolMode::Avg), 32, LEVEL).unwrap();
        assert_eq!(avg.ops.get(OpClass::Add), 768);
        assert_eq!(avg.ops.get(OpClass::Div), 256);
        assert_eq!(avg.accesses_total(), max.accesses_total());

        let mut no_div = pool_2x2(PoolMode::Avg);
        no_div.charge_avg_pool_div = false;
        let r = cost_pool(&no_div, 32, LEVEL).unwrap();
        assert_eq!(r.ops.get(OpClass::Div), 0);
    }

    #[test]
    fn pool_window_of_one_is_free() {
        let spec = PoolSpec {
            mode: PoolMode::Max,
            window_dims: vec![1, 1],
            strides: vec![1, 1],
            padding: vec![0, 0],
            input_dims: vec![4, 4],
        charge_avg_pool_div: true,
        };
        let r = cost_pool(&spec, 32, LEVEL).unwrap();
        assert_eq!(r.ops.total(), 0);
        assert_eq!(r.accesses_total(), 0);
    }

    #[test]
    fn batchnorm_counts() {
        let r = cost_batchnorm(128, 32, LEVEL);
        assert_eq!(r.ops.get(OpClass::Add), 128);
        assert_eq!(r.ops.get(OpClass::Mul), 128);
        assert_eq!(r.accesses_total(), 768);
        assert_eq!(r.stored_total(), 8192);
        assert_eq!(cost_batchnorm(0, 32, LEVEL).ops.total(), 0);
    }

    #[test]
    fn counts_monotone_in_dimensions() {
        let base = cost_conv(&conv_2d(), 32, LEVEL).unwrap();
        let mut bigger = conv_2d();
        bigger.n_templates += 4;
        let r = cost_conv(&bigger, 32, LEVEL).unwrap();
        assert!(r.ops.get(OpClass::Mac) > base.ops.get(OpClass::Mac));
        assert!(r.stored_total() > base.stored_total());
    }
}
