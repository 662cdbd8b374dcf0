//! Subsystem bookkeeping: tensor products, partial traces and
//! operator-weighted contractions of single factors.

use crate::error::{Error, Result};
use crate::opalg::operator::HermitianOperator;
use crate::scalar::{Mat, Real, C};

/// Ordered factor dimensions of a composite Hilbert space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubsystemLayout {
    dims: Vec<usize>,
}

impl SubsystemLayout {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::Layout(format!("invalid factor dimensions {dims:?}")));
        }
        Ok(Self { dims })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_factors(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn check_operator(&self, dim: usize) -> Result<()> {
        if self.total_dim() != dim {
            return Err(Error::Layout(format!(
                "layout {:?} has dimension {} but operator has dimension {dim}",
                self.dims,
                self.total_dim()
            )));
        }
        Ok(())
    }

    fn check_indices(&self, idx: &[usize]) -> Result<()> {
        for (pos, &i) in idx.iter().enumerate() {
            if i >= self.dims.len() {
                return Err(Error::Layout(format!("factor index {i} out of range for {} factors", self.dims.len())));
            }
            if idx[..pos].contains(&i) {
                return Err(Error::Layout(format!("factor index {i} repeated")));
            }
        }
        Ok(())
    }

    /// Layout with the given factors removed. Removing every factor leaves a
    /// single factor of dimension 1.
    pub fn without(&self, removed: &[usize]) -> Result<Self> {
        self.check_indices(removed)?;
        let dims: Vec<usize> =
            self.dims.iter().enumerate().filter(|(i, _)| !removed.contains(i)).map(|(_, &d)| d).collect();
        if dims.is_empty() {
            Ok(Self { dims: vec![1] })
        } else {
            Ok(Self { dims })
        }
    }
}

/// Ancilla of dimension `ancilla` (1 when absent) followed by `copies`
/// factors of dimension `factor`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SymmetricLayout {
    pub ancilla: usize,
    pub factor: usize,
    pub copies: usize,
}

impl SymmetricLayout {
    pub fn new(ancilla: usize, factor: usize, copies: usize) -> Result<Self> {
        if ancilla == 0 || factor == 0 {
            return Err(Error::Layout(format!("invalid dimensions ancilla={ancilla}, factor={factor}")));
        }
        Ok(Self { ancilla, factor, copies })
    }

    pub fn total_dim(&self) -> usize {
        self.ancilla * self.factor.pow(self.copies as u32)
    }

    /// Factor 0 is always the ancilla, even when its dimension is 1.
    pub fn layout(&self) -> SubsystemLayout {
        let mut dims = Vec::with_capacity(self.copies + 1);
        dims.push(self.ancilla);
        dims.extend(std::iter::repeat_n(self.factor, self.copies));
        SubsystemLayout { dims }
    }

    pub fn with_copies(&self, copies: usize) -> Self {
        Self { copies, ..*self }
    }

    /// Treat the ancilla together with the first `absorbed` copies as a new
    /// ancilla.
    pub fn absorb(&self, absorbed: usize) -> Self {
        Self {
            ancilla: self.ancilla * self.factor.pow(absorbed as u32),
            factor: self.factor,
            copies: self.copies - absorbed,
        }
    }
}

/// Kronecker product `a ⊗ b`.
pub fn tensor_product<R: Real>(a: &HermitianOperator<R>, b: &HermitianOperator<R>) -> HermitianOperator<R> {
    HermitianOperator::from_hermitian_part(a.matrix().kronecker(b.matrix()))
}

/// `ops[0] ⊗ ops[1] ⊗ …`; the empty product is the 1×1 identity.
pub fn tensor_all<R: Real, H: AsRef<HermitianOperator<R>>>(ops: &[H]) -> HermitianOperator<R> {
    ops.iter().fold(HermitianOperator::identity(1), |acc, op| tensor_product(&acc, op.as_ref()))
}

/// `h^{⊗n}`.
pub fn tensor_power<R: Real>(h: &HermitianOperator<R>, n: usize) -> HermitianOperator<R> {
    (0..n).fold(HermitianOperator::identity(1), |acc, _| tensor_product(&acc, h))
}

/// `tr_f((id ⊗ op_f ⊗ id) · m)` for factor `f` of `dims`; `None` means the
/// plain partial trace.
pub(crate) fn contract_factor<R: Real>(m: &Mat<R>, dims: &[usize], f: usize, op: Option<&Mat<R>>) -> Mat<R> {
    let df = dims[f];
    let inner: usize = dims[f + 1..].iter().product();
    let outer: usize = dims[..f].iter().product();
    let reduced = outer * inner;
    let full = |hi: usize, b: usize, lo: usize| (hi * df + b) * inner + lo;
    let mut out = Mat::<R>::zeros(reduced, reduced);
    for rh in 0..outer {
        for rl in 0..inner {
            let r = rh * inner + rl;
            for ch in 0..outer {
                for cl in 0..inner {
                    let col = ch * inner + cl;
                    let mut acc = C::new(R::zero(), R::zero());
                    match op {
                        None => {
                            for b in 0..df {
                                acc += m[(full(rh, b, rl), full(ch, b, cl))];
                            }
                        }
                        Some(op) => {
                            // Σ_{b,b'} op[b', b] · m[(…b…), (…b'…)]
                            for b in 0..df {
                                for bp in 0..df {
                                    let w = op[(bp, b)];
                                    if w.re != R::zero() || w.im != R::zero() {
                                        acc += w * m[(full(rh, b, rl), full(ch, bp, cl))];
                                    }
                                }
                            }
                        }
                    }
                    out[(r, col)] = acc;
                }
            }
        }
    }
    out
}

/// Applies `op_f` on each listed factor, then traces out those factors and
/// every factor in `traced`.
pub(crate) fn apply_and_trace<R: Real>(
    m: &Mat<R>,
    layout: &SubsystemLayout,
    applied: &[(usize, &Mat<R>)],
    traced: &[usize],
) -> Result<Mat<R>> {
    layout.check_operator(m.nrows())?;
    let mut removed: Vec<(usize, Option<&Mat<R>>)> =
        applied.iter().map(|&(f, op)| (f, Some(op))).chain(traced.iter().map(|&f| (f, None))).collect();
    let idx: Vec<usize> = removed.iter().map(|(f, _)| *f).collect();
    layout.check_indices(&idx)?;
    for &(f, op) in applied {
        if op.nrows() != layout.dims()[f] {
            return Err(Error::DimensionMismatch(op.nrows(), layout.dims()[f]));
        }
    }
    removed.sort_by_key(|r| std::cmp::Reverse(r.0));
    let mut dims = layout.dims().to_vec();
    let mut cur = m.clone();
    for (f, op) in removed {
        cur = contract_factor(&cur, &dims, f, op);
        dims.remove(f);
    }
    Ok(cur)
}

/// Partial trace over the listed factors. Tracing every factor gives `tr(w)`
/// as a 1×1 operator.
pub fn partial_trace<R: Real>(
    w: &HermitianOperator<R>,
    layout: &SubsystemLayout,
    traced: &[usize],
) -> Result<HermitianOperator<R>> {
    let m = apply_and_trace(w.matrix(), layout, &[], traced)?;
    Ok(HermitianOperator::from_hermitian_part(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::spectral::trace_distance;

    fn pauli(which: char) -> HermitianOperator<f64> {
        let mut m = Mat::zeros(2, 2);
        match which {
            'x' => {
                m[(0, 1)] = C::new(1.0, 0.0);
                m[(1, 0)] = C::new(1.0, 0.0);
            }
            'z' => {
                m[(0, 0)] = C::new(1.0, 0.0);
                m[(1, 1)] = C::new(-1.0, 0.0);
            }
            _ => unreachable!(),
        }
        HermitianOperator::new(m).unwrap()
    }

    #[test]
    fn identity_tensor_identity() {
        let id = HermitianOperator::<f64>::identity(2);
        assert_eq!(tensor_product(&id, &id), HermitianOperator::identity(4));
    }

    #[test]
    fn basis_projector_tensor() {
        let p0 = HermitianOperator::<f64>::basis_projector(2, 0);
        let p1 = HermitianOperator::<f64>::basis_projector(2, 1);
        assert_eq!(tensor_product(&p0, &p1), HermitianOperator::basis_projector(4, 1));
    }

    #[test]
    fn z_tensor_x_blocks() {
        let zx = tensor_product(&pauli('z'), &pauli('x'));
        let x = pauli('x');
        for r in 0..2 {
            for col in 0..2 {
                assert_eq!(zx.matrix()[(r, col)], x.matrix()[(r, col)]);
                assert_eq!(zx.matrix()[(r + 2, col + 2)], -x.matrix()[(r, col)]);
                assert_eq!(zx.matrix()[(r, col + 2)], C::new(0.0, 0.0));
                assert_eq!(zx.matrix()[(r + 2, col)], C::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn partial_trace_of_product() {
        let sigma = HermitianOperator::<f64>::diag(&[0.3, 0.7]);
        let tau = HermitianOperator::<f64>::diag(&[2.0, 0.5, 1.0]);
        let layout = SubsystemLayout::new(vec![2, 3]).unwrap();
        let red = partial_trace(&tensor_product(&sigma, &tau), &layout, &[1]).unwrap();
        assert!(red.max_abs_diff(&sigma.scale(3.5)) < 1e-14);
        let red = partial_trace(&tensor_product(&sigma, &tau), &layout, &[0]).unwrap();
        assert!(red.max_abs_diff(&tau) < 1e-14);
    }

    #[test]
    fn bell_state_reduces_to_maximally_mixed() {
        let mut m = Mat::<f64>::zeros(4, 4);
        for &(r, c) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
            m[(r, c)] = C::new(0.5, 0.0);
        }
        let bell = HermitianOperator::new(m).unwrap();
        let layout = SubsystemLayout::new(vec![2, 2]).unwrap();
        let red = partial_trace(&bell, &layout, &[1]).unwrap();
        assert!(red.max_abs_diff(&HermitianOperator::identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn tracing_everything_gives_the_trace() {
        let h = HermitianOperator::<f64>::diag(&[1.0, 2.0, 3.0, 4.0]);
        let layout = SubsystemLayout::new(vec![2, 2]).unwrap();
        let t = partial_trace(&h, &layout, &[0, 1]).unwrap();
        assert_eq!(t.dim(), 1);
        assert!((t.trace() - 10.0).abs() < 1e-14);
    }

    #[test]
    fn out_of_range_factor_is_layout_error() {
        let h = HermitianOperator::<f64>::identity(4);
        let layout = SubsystemLayout::new(vec![2, 2]).unwrap();
        assert!(matches!(partial_trace(&h, &layout, &[2]), Err(Error::Layout(_))));
        assert!(matches!(partial_trace(&h, &layout, &[1, 1]), Err(Error::Layout(_))));
    }

    #[test]
    fn partial_traces_commute() {
        let a = HermitianOperator::<f64>::diag(&[0.1, 0.9]);
        let b = pauli('x');
        let cc = pauli('z');
        let mut w = tensor_all(&[a.clone(), b.clone(), cc.clone()]);
        w = &w + &tensor_all(&[b.clone(), cc.clone(), a.clone()]);
        let layout = SubsystemLayout::new(vec![2, 2, 2]).unwrap();
        let both = partial_trace(&w, &layout, &[1, 2]).unwrap();
        let step = partial_trace(&w, &layout, &[1]).unwrap();
        let step = partial_trace(&step, &SubsystemLayout::new(vec![2, 2]).unwrap(), &[1]).unwrap();
        let other = partial_trace(&w, &layout, &[2]).unwrap();
        let other = partial_trace(&other, &SubsystemLayout::new(vec![2, 2]).unwrap(), &[1]).unwrap();
        assert!(both.max_abs_diff(&step) < 1e-14);
        assert!(both.max_abs_diff(&other) < 1e-14);
        assert!(trace_distance(&both, &step).unwrap() < 1e-12);
    }

    #[test]
    fn partial_trace_in_single_precision() {
        let sigma = HermitianOperator::<f32>::diag(&[0.25, 0.75]);
        let layout = SubsystemLayout::new(vec![2, 2]).unwrap();
        let red = partial_trace(&tensor_product(&sigma, &sigma), &layout, &[0]).unwrap();
        assert!(red.max_abs_diff(&sigma) < 1e-6);
    }
}
