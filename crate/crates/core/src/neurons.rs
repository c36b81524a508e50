//! Built-in neuron types.
//!
//! | name              | M | N | output                                        |
//! |-------------------|---|---|-----------------------------------------------|
//! | `identity`        | 1 | 1 | `x`                                           |
//! | `const`           | 0 | 1 | the `matrix` parameter, every step            |
//! | `acc2`            | 2 | 1 | `x + dx`                                      |
//! | `self2`           | 2 | 1 | `x + dx` (the network-matrix accumulator)     |
//! | `hadamard`        | 2 | 1 | `a .* b`                                      |
//! | `relu`/`sigmoid`/`tanh` | 1 | 1 | entrywise nonlinearity                  |
//! | `update4`         | 4 | 1 | `(γ→) .* (↑α) .* (↑(βᵀA))`                    |
//! | `subsel_overall`  | 3 | 1 | `((↑α) ⊔ (β→)) .* A`                          |
//! | `subsel_internal` | 3 | 1 | `(↑α) .* (β→) .* A`                           |
//! | `inport`          | 0 | 1 | element `t` of the supplied sequence, else 0  |

use crate::dense::DenseMatrix;
use crate::engine::registry::{NeuronBody, NeuronError, NeuronType, Params, Registry, StepContext};
use crate::fd_matrix::{self, FdVector};
use crate::matrix::{Key, Matrix, Shape};

pub const IDENTITY: &str = "identity";
pub const CONST: &str = "const";
pub const ACC2: &str = "acc2";
pub const SELF2: &str = "self2";
pub const HADAMARD: &str = "hadamard";
pub const RELU: &str = "relu";
pub const SIGMOID: &str = "sigmoid";
pub const TANH: &str = "tanh";
pub const UPDATE4: &str = "update4";
pub const SUBSEL_OVERALL: &str = "subsel_overall";
pub const SUBSEL_INTERNAL: &str = "subsel_internal";
pub const INPORT: &str = "inport";

pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pointwise {
    Relu,
    Sigmoid,
    Tanh,
}

impl Pointwise {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Pointwise::Relu => crate::warmus::relu(x),
            Pointwise::Sigmoid => sigmoid(x),
            Pointwise::Tanh => x.tanh(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subgraph {
    Overall,
    Internal,
}

pub fn identity_step(x: &Matrix) -> Matrix {
    x.clone()
}

pub fn accumulator_step_matrix(x: &Matrix, dx: &Matrix) -> Result<Matrix, NeuronError> {
    Ok(x.add(dx)?)
}

pub fn hadamard_step(a: &Matrix, b: &Matrix) -> Result<Matrix, NeuronError> {
    Ok(a.hadamard(b)?)
}

pub fn pointwise_step(f: Pointwise, x: &Matrix) -> Matrix {
    x.map_entries(|v| f.apply(v))
}

fn dense_row(m: &DenseMatrix, name: &'static str) -> Result<Vec<f64>, NeuronError> {
    m.as_lifted_row().ok_or(NeuronError::NotLifted(name))
}

fn dense_col(m: &DenseMatrix, name: &'static str) -> Result<Vec<f64>, NeuronError> {
    m.as_lifted_col().ok_or(NeuronError::NotLifted(name))
}

fn same_kind<'a>(
    inputs: &'a [&'a Matrix],
) -> Result<Either<Vec<&'a DenseMatrix>, Vec<&'a fd_matrix::FdMatrix<Key>>>, NeuronError> {
    let first = inputs[0];
    for m in &inputs[1..] {
        if m.shape() != first.shape() {
            return Err(crate::matrix::ShapeMismatch {
                left: first.shape(),
                right: m.shape(),
            }
            .into());
        }
    }
    Ok(match first {
        Matrix::Dense(_) => Either::Left(inputs.iter().map(|m| m.as_dense().unwrap()).collect()),
        Matrix::Fd(_) => Either::Right(inputs.iter().map(|m| m.as_fd().unwrap()).collect()),
    })
}

enum Either<L, R> {
    Left(L),
    Right(R),
}

/// Delta for the network-matrix update: entry `(i, j)` is
/// `γ_i · α_j · Σ_k β_k A[k, j]`, with `α` read from a lifted row and `β`, `γ`
/// from lifted columns.
pub fn update_neuron_step(
    alpha: &Matrix,
    beta: &Matrix,
    gamma: &Matrix,
    a: &Matrix,
) -> Result<Matrix, NeuronError> {
    match same_kind(&[alpha, beta, gamma, a])? {
        Either::Left(d) => {
            let alpha = dense_row(d[0], "alpha")?;
            let beta = dense_col(d[1], "beta")?;
            let gamma = dense_col(d[2], "gamma")?;
            let a = d[3];
            let combined: Vec<f64> = (0..a.cols())
                .map(|j| (0..a.rows()).map(|k| beta[k] * a.get(k, j)).sum())
                .collect();
            let mut out = DenseMatrix::zeros(a.rows(), a.cols());
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    out.set(i, j, gamma[i] * alpha[j] * combined[j]);
                }
            }
            Ok(Matrix::Dense(out))
        }
        Either::Right(f) => {
            let alpha = f[0]
                .as_lifted_row()
                .ok_or(NeuronError::NotLifted("alpha"))?;
            let beta = f[1].as_lifted_col().ok_or(NeuronError::NotLifted("beta"))?;
            let gamma = f[2]
                .as_lifted_col()
                .ok_or(NeuronError::NotLifted("gamma"))?;
            Ok(Matrix::Fd(
                fd_matrix::update_delta(f[3], &alpha, &beta, &gamma)?.compact(),
            ))
        }
    }
}

pub fn subgraph_mask_step(
    variant: Subgraph,
    alpha: &Matrix,
    beta: &Matrix,
    a: &Matrix,
) -> Result<Matrix, NeuronError> {
    let is_mask = |v: &[f64]| v.iter().all(|x| *x == 0.0 || *x == 1.0);
    match same_kind(&[alpha, beta, a])? {
        Either::Left(d) => {
            let alpha = dense_row(d[0], "alpha")?;
            let beta = dense_col(d[1], "beta")?;
            if !is_mask(&alpha) {
                return Err(NeuronError::NotAMask("alpha"));
            }
            if !is_mask(&beta) {
                return Err(NeuronError::NotAMask("beta"));
            }
            let a = d[2];
            let mut out = DenseMatrix::zeros(a.rows(), a.cols());
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    let mask = match variant {
                        Subgraph::Overall => alpha[j].max(beta[i]),
                        Subgraph::Internal => alpha[j] * beta[i],
                    };
                    out.set(i, j, mask * a.get(i, j));
                }
            }
            Ok(Matrix::Dense(out))
        }
        Either::Right(f) => {
            let alpha = f[0]
                .as_lifted_row()
                .ok_or(NeuronError::NotLifted("alpha"))?;
            let beta = f[1].as_lifted_col().ok_or(NeuronError::NotLifted("beta"))?;
            if !alpha.is_mask() {
                return Err(NeuronError::NotAMask("alpha"));
            }
            if !beta.is_mask() {
                return Err(NeuronError::NotAMask("beta"));
            }
            let out = match variant {
                Subgraph::Overall => fd_matrix::subgraph_overall(f[2], &alpha, &beta)?,
                Subgraph::Internal => fd_matrix::subgraph_internal(f[2], &alpha, &beta)?,
            };
            Ok(Matrix::Fd(out))
        }
    }
}

/// Element `t` (1-based) of an externally supplied stream; zero once the
/// stream is exhausted.
pub fn input_port_step(sequence: &[Matrix], t: u64, shape: Shape) -> Matrix {
    usize::try_from(t)
        .ok()
        .and_then(|t| t.checked_sub(1))
        .and_then(|i| sequence.get(i))
        .cloned()
        .unwrap_or_else(|| Matrix::zero(shape))
}

/// 1-of-N encoding of a symbol: a single 1 in the cell reserved for it.
pub fn one_hot_cell(shape: Shape, row: &str, col: &str) -> Option<Matrix> {
    match shape {
        Shape::Dense { rows, cols } => {
            let i: usize = row.parse().ok()?;
            let j: usize = col.parse().ok()?;
            if i >= rows || j >= cols {
                return None;
            }
            let mut d = DenseMatrix::zeros(rows, cols);
            d.set(i, j, 1.0);
            Some(Matrix::Dense(d))
        }
        Shape::Countable => Some(Matrix::Fd(fd_matrix::FdMatrix::outer(
            FdVector::unit(row.to_string()),
            FdVector::unit(col.to_string()),
        ))),
    }
}

fn expect_inputs(inputs: &[Matrix], n: usize) -> Result<(), NeuronError> {
    if inputs.len() == n {
        Ok(())
    } else {
        Err(NeuronError::BadParam(format!(
            "expected {n} inputs, got {}",
            inputs.len()
        )))
    }
}

#[derive(Clone, Debug)]
struct Identity;

impl NeuronBody for Identity {
    fn step(&mut self, _: &StepContext, inputs: &[Matrix]) -> Result<Vec<Matrix>, NeuronError> {
        expect_inputs(inputs, 1)?;
        Ok(vec![identity_step(&inputs[0])])
    }

    fn clone_box(&self) -> Box<dyn NeuronBody> {
        Box::new(self.clone())
    }
}

#[derive(Clone, Debug)]
struct Constant(Matrix);

impl NeuronBody for Constant {
    fn initial_outputs(&self, _: Shape, _: usize) -> Vec<Matrix> {
        vec![self.0.clone()]
    }

    fn step(&mut self, _: &StepContext, _: &[Matrix]) -> Result<Vec<Matrix>, NeuronError> {
        Ok(vec![self.0.clone()])
    }

    fn clone_box(&self) -> Box<dyn NeuronBody> {
        Box::new(self.clone())
    }
}

#[derive(Clone, Debug)]
struct Accumulator;

impl NeuronBody for Accumulator {
    fn step(&mut self, _: &StepContext, inputs: &[Matrix]) -> Result<Vec<Matrix>, NeuronError> {
        expect_inputs(inputs, 2)?;
        Ok(vec![accumulator_step_matrix(&inputs[0], &inputs[1])?])
    }

    fn clone_box(&self) -> Box<dyn NeuronBody> {
        Box::new(self.clone())
    }
}

#[derive(Clone, Debug)]
struct Hadamard;

impl NeuronBody for Hadamard {
    fn step(&mut self, _: &StepContext, inputs: &[Matrix]) -> Result<Vec<Matrix>, NeuronError> {
        expect_inputs(inputs, 2)?;
        Ok(vec![hadamard_step(&inputs[0], &inputs[1])?])
    }

    fn clone_box(&self) -> Box<dyn NeuronBody> {
        Box::new(self.clone())
    }
}

#[derive(Clone, Debug)]
struct Nonlinear(Pointwise);

impl NeuronBody for Nonlinear {
    fn step(&mut self, _: &StepContext, inputs: &[Matrix]) -> Result<Vec<Matrix>, NeuronError> {
        expect_inputs(inputs, 1)?;
        Ok(vec![pointwise_step(self.0, &inputs[0])])
    }

    fn clone_box(&self) -> Box<dyn NeuronBody> {
        Box::new(self.clone())
    }
}

#[derive(Clone, Debug)]
struct Update;

impl NeuronBody for Update {
    fn step(&mut self, _: &StepContext, inputs: &[Matrix]) -> Result<Vec<Matrix>, NeuronError> {
        expect_inputs(inputs, 4)?;
        Ok(vec![update_neuron_step(
            &inputs[0], &inputs[1], &inputs[2], &inputs[3],
        )?])
    }

    fn clone_box(&self) -> Box<dyn NeuronBody> {
        Box::new(self.clone())
    }
}

#[derive(Clone, Debug)]
struct SubgraphMask(Subgraph);

impl NeuronBody for SubgraphMask {
    fn step(&mut self, _: &StepContext, inputs: &[Matrix]) -> Result<Vec<Matrix>, NeuronError> {
        expect_inputs(inputs, 3)?;
        Ok(vec![subgraph_mask_step(
            self.0, &inputs[0], &inputs[1], &inputs[2],
        )?])
    }

    fn clone_box(&self) -> Box<dyn NeuronBody> {
        Box::new(self.clone())
    }
}

#[derive(Clone, Debug)]
struct InputPort(Vec<Matrix>);

impl NeuronBody for InputPort {
    fn step(&mut self, ctx: &StepContext, _: &[Matrix]) -> Result<Vec<Matrix>, NeuronError> {
        Ok(vec![input_port_step(&self.0, ctx.t, ctx.shape)])
    }

    fn clone_box(&self) -> Box<dyn NeuronBody> {
        Box::new(self.clone())
    }
}

fn check_shape(m: &Matrix, shape: Shape) -> Result<(), NeuronError> {
    if m.shape() == shape {
        Ok(())
    } else {
        Err(crate::matrix::ShapeMismatch {
            left: shape,
            right: m.shape(),
        }
        .into())
    }
}

fn stateless(name: &str, m: usize, body: impl NeuronBody + Clone + 'static) -> NeuronType {
    NeuronType::new(name, m, 1, move |_, _| Ok(Box::new(body.clone())))
}

/// Registry holding every built-in type.
pub fn builtin_registry() -> Registry {
    let mut r = Registry::new();
    let types = [
        stateless(IDENTITY, 1, Identity),
        NeuronType::new(CONST, 0, 1, |p: &Params, shape| {
            let k = p
                .matrix
                .clone()
                .ok_or(NeuronError::MissingParam("matrix"))?;
            check_shape(&k, shape)?;
            Ok(Box::new(Constant(k)))
        }),
        stateless(ACC2, 2, Accumulator),
        stateless(SELF2, 2, Accumulator),
        stateless(HADAMARD, 2, Hadamard),
        stateless(RELU, 1, Nonlinear(Pointwise::Relu)),
        stateless(SIGMOID, 1, Nonlinear(Pointwise::Sigmoid)),
        stateless(TANH, 1, Nonlinear(Pointwise::Tanh)),
        stateless(UPDATE4, 4, Update),
        stateless(SUBSEL_OVERALL, 3, SubgraphMask(Subgraph::Overall)),
        stateless(SUBSEL_INTERNAL, 3, SubgraphMask(Subgraph::Internal)),
        NeuronType::new(INPORT, 0, 1, |p: &Params, shape| {
            for m in &p.sequence {
                check_shape(m, shape)?;
            }
            Ok(Box::new(InputPort(p.sequence.clone())))
        }),
    ];
    for t in types {
        r.register(t).expect("built-in names are distinct");
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd_matrix::FdMatrix;
    use crate::index::ArityLookup;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const D: Shape = Shape::Dense { rows: 4, cols: 5 };

    fn random_dense(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                d.set(i, j, rng.gen_range(-2.0..2.0));
            }
        }
        d
    }

    fn lifted_row(v: &[f64], rows: usize) -> Matrix {
        Matrix::Dense(DenseMatrix::from_rows(&vec![v.to_vec(); rows]).unwrap())
    }

    fn lifted_col(v: &[f64], cols: usize) -> Matrix {
        let rows: Vec<Vec<f64>> = v.iter().map(|x| vec![*x; cols]).collect();
        Matrix::Dense(DenseMatrix::from_rows(&rows).unwrap())
    }

    #[test]
    fn catalog_arities() {
        let r = builtin_registry();
        let expect = [
            (IDENTITY, (1, 1)),
            (CONST, (0, 1)),
            (ACC2, (2, 1)),
            (SELF2, (2, 1)),
            (HADAMARD, (2, 1)),
            (RELU, (1, 1)),
            (SIGMOID, (1, 1)),
            (TANH, (1, 1)),
            (UPDATE4, (4, 1)),
            (SUBSEL_OVERALL, (3, 1)),
            (SUBSEL_INTERNAL, (3, 1)),
            (INPORT, (0, 1)),
        ];
        for (name, ar) in expect {
            assert_eq!(r.arity(name), Some(ar), "{name}");
        }
        assert_eq!(r.names().count(), expect.len());
    }

    #[test]
    fn identity_and_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let zero = Matrix::zero(D);
        assert_eq!(identity_step(&zero), zero);
        let seven = Matrix::scalar(Shape::Countable, 7.0);
        assert_eq!(identity_step(&seven), seven);
        let d = Matrix::Dense(random_dense(&mut rng, 4, 5));
        assert_eq!(identity_step(&d), d);

        let reg = builtin_registry();
        let k = Matrix::Dense(random_dense(&mut rng, 4, 5));
        let mut body = reg
            .get(CONST)
            .unwrap()
            .instantiate(&Params::matrix(k.clone()), D)
            .unwrap();
        assert_eq!(body.initial_outputs(D, 1), vec![k.clone()]);
        let at = |t| StepContext { t, shape: D };
        let o1 = body.step(&at(1), &[]).unwrap();
        let o6 = body.step(&at(6), &[]).unwrap();
        assert_eq!(o1, vec![k.clone()]);
        assert_eq!(o1, o6);
        assert!(matches!(
            reg.get(CONST).unwrap().instantiate(&Params::none(), D),
            Err(NeuronError::MissingParam("matrix"))
        ));
    }

    #[test]
    fn accumulator_adds() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = random_dense(&mut rng, 4, 5);
        let dx = random_dense(&mut rng, 4, 5);
        let out =
            accumulator_step_matrix(&Matrix::Dense(x.clone()), &Matrix::Dense(dx.clone())).unwrap();
        let out = out.as_dense().unwrap();
        for i in 0..4 {
            for j in 0..5 {
                assert_eq!(out.get(i, j), x.get(i, j) + dx.get(i, j));
            }
        }
        let same = accumulator_step_matrix(&Matrix::Dense(x.clone()), &Matrix::zero(D)).unwrap();
        assert_eq!(same, Matrix::Dense(x));
    }

    #[test]
    fn hadamard_gates() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b = Matrix::Dense(random_dense(&mut rng, 4, 5));
        let closed = hadamard_step(&Matrix::scalar(D, 0.0), &b).unwrap();
        assert!(closed.same_values(&Matrix::zero(D)));
        assert_eq!(hadamard_step(&Matrix::scalar(D, 1.0), &b).unwrap(), b);
        let half = hadamard_step(&Matrix::scalar(D, 0.5), &b).unwrap();
        assert_eq!(half, b.scale(0.5));
    }

    #[test]
    fn pointwise_examples() {
        let r = pointwise_step(Pointwise::Relu, &Matrix::scalar(Shape::Countable, -2.0));
        assert_eq!(r.constant_value(), Some(0.0));
        let s = pointwise_step(Pointwise::Sigmoid, &Matrix::scalar(Shape::Countable, 0.0));
        assert_eq!(s.constant_value(), Some(0.5));
        let s = pointwise_step(Pointwise::Sigmoid, &Matrix::scalar(D, 0.0));
        assert_eq!(s.constant_value(), Some(0.5));

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = random_dense(&mut rng, 4, 5);
        let t = pointwise_step(Pointwise::Tanh, &Matrix::Dense(x.clone()));
        let t = t.as_dense().unwrap();
        for i in 0..4 {
            for j in 0..5 {
                assert_eq!(t.get(i, j), x.get(i, j).tanh());
            }
        }
    }

    #[test]
    fn update_neuron_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let a = random_dense(&mut rng, 4, 5);
            let alpha: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let beta: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let gamma: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let out = update_neuron_step(
                &lifted_row(&alpha, 4),
                &lifted_col(&beta, 5),
                &lifted_col(&gamma, 5),
                &Matrix::Dense(a.clone()),
            )
            .unwrap();
            let out = out.as_dense().unwrap();
            for i in 0..4 {
                for j in 0..5 {
                    let mut s = 0.0;
                    for k in 0..4 {
                        s += beta[k] * a.get(k, j);
                    }
                    let want = gamma[i] * alpha[j] * s;
                    assert!((out.get(i, j) - want).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn update_neuron_zero_gamma_and_shape_errors() {
        let a = Matrix::scalar(D, 3.0);
        let out = update_neuron_step(
            &Matrix::scalar(D, 1.0),
            &lifted_col(&[1.0, 0.0, 0.0, 0.0], 5),
            &Matrix::zero(D),
            &a,
        )
        .unwrap();
        assert!(out.same_values(&Matrix::zero(D)));

        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let not_lifted = Matrix::Dense(random_dense(&mut rng, 4, 5));
        assert_eq!(
            update_neuron_step(&not_lifted, &a, &a, &a),
            Err(NeuronError::NotLifted("alpha"))
        );
        let fa = Matrix::Fd(FdMatrix::lift_scalar(1.0));
        let fbeta = Matrix::Fd(FdMatrix::lift_col(&FdVector::ones()));
        assert!(matches!(
            update_neuron_step(&fa, &fbeta, &fbeta, &fa),
            Err(NeuronError::Fd(_))
        ));
    }

    #[test]
    fn subgraph_masks() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_dense(&mut rng, 4, 5);
        let am = Matrix::Dense(a.clone());
        let ones = Matrix::scalar(D, 1.0);
        let zeros = Matrix::zero(D);
        for v in [Subgraph::Overall, Subgraph::Internal] {
            assert_eq!(subgraph_mask_step(v, &ones, &ones, &am).unwrap(), am);
            assert!(subgraph_mask_step(v, &zeros, &zeros, &am)
                .unwrap()
                .same_values(&zeros));
        }
        for _ in 0..20 {
            let alpha: Vec<f64> = (0..5).map(|_| f64::from(rng.gen_range(0..2u8))).collect();
            let beta: Vec<f64> = (0..4).map(|_| f64::from(rng.gen_range(0..2u8))).collect();
            let ra = lifted_row(&alpha, 4);
            let cb = lifted_col(&beta, 5);
            let o = subgraph_mask_step(Subgraph::Overall, &ra, &cb, &am).unwrap();
            let n = subgraph_mask_step(Subgraph::Internal, &ra, &cb, &am).unwrap();
            for i in 0..4 {
                for j in 0..5 {
                    let keep_o = beta[i] == 1.0 || alpha[j] == 1.0;
                    let keep_n = beta[i] == 1.0 && alpha[j] == 1.0;
                    assert_eq!(
                        o.value(&i.to_string(), &j.to_string()),
                        if keep_o { a.get(i, j) } else { 0.0 }
                    );
                    assert_eq!(
                        n.value(&i.to_string(), &j.to_string()),
                        if keep_n { a.get(i, j) } else { 0.0 }
                    );
                }
            }
        }
        let half = Matrix::scalar(D, 0.5);
        assert_eq!(
            subgraph_mask_step(Subgraph::Overall, &half, &ones, &am),
            Err(NeuronError::NotAMask("alpha"))
        );
    }

    #[test]
    fn input_port_sequence() {
        let a1 = Matrix::scalar(D, 1.0);
        let a2 = Matrix::scalar(D, 2.0);
        let seq = vec![a1.clone(), a2.clone()];
        assert_eq!(input_port_step(&seq, 1, D), a1);
        assert_eq!(input_port_step(&seq, 2, D), a2);
        assert_eq!(input_port_step(&seq, 3, D), Matrix::zero(D));
        assert_eq!(input_port_step(&seq, 0, D), Matrix::zero(D));

        let sym = one_hot_cell(D, "3", "2").unwrap();
        let d = sym.as_dense().unwrap();
        assert_eq!(d.nonzeros().collect::<Vec<_>>(), vec![(3, 2, 1.0)]);
        assert!(one_hot_cell(D, "4", "0").is_none());
        let c = one_hot_cell(Shape::Countable, "t@i1\\a", "t@o1%b").unwrap();
        assert_eq!(c.triplets().unwrap().len(), 1);
    }
}
