use crate::error::{Error, Result};
use crate::opalg::HermitianOperator;
use crate::povm::family::Povm;
use crate::scalar::{Mat, Real, C};

/// `θ_d = 1/(d²(d+1))`, the common overlap `tr(F_z F_{z'})` of a SIC-POVM.
pub fn sic_overlap(d: usize) -> f64 {
    let d = d as f64;
    1.0 / (d * d * (d + 1.0))
}

/// Vertices of a regular tetrahedron on the Bloch sphere.
pub fn tetrahedron() -> [[f64; 3]; 4] {
    let s2 = 2f64.sqrt();
    [
        [0.0, 0.0, 1.0],
        [2.0 * s2 / 3.0, 0.0, -1.0 / 3.0],
        [-s2 / 3.0, (2.0f64 / 3.0).sqrt(), -1.0 / 3.0],
        [-s2 / 3.0, -(2.0f64 / 3.0).sqrt(), -1.0 / 3.0],
    ]
}

/// `(id + r·σ)/2`.
pub fn bloch_projector<R: Real>(r: [f64; 3]) -> HermitianOperator<R> {
    let h = |re: f64, im: f64| C::new(R::lit(re / 2.0), R::lit(im / 2.0));
    let m = Mat::from_row_slice(2, 2, &[h(1.0 + r[2], 0.0), h(r[0], -r[1]), h(r[0], r[1]), h(1.0 - r[2], 0.0)]);
    HermitianOperator::new(m).expect("hermitian by construction")
}

/// The qubit SIC-POVM `F_z = ½ P_z` with `P_z` the projectors onto the
/// tetrahedron states; labels `0..4`.
pub fn sic_povm<R: Real>(d: usize) -> Result<Povm<R>> {
    if d != 2 {
        return Err(Error::UnsupportedDimension { what: "SIC-POVM", dim: d });
    }
    let elements = tetrahedron().iter().map(|&r| bloch_projector::<R>(r).scale(R::lit(0.5))).collect();
    Povm::with_index_labels(elements)
}
