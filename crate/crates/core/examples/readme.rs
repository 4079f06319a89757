use kronlab_core::{kron, nearest_kron, BlockShape, DenseMatrix};

fn main() -> kronlab_core::Result<()> {
    let b = DenseMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]])?;
    let c = DenseMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]])?;
    let a = kron(&b, &c)?;

    let fit = nearest_kron(&a, BlockShape::new(2, 2, 2, 2)?)?;
    assert!(fit.residual <= 1e-12 * a.fro_norm());
    println!("sigma {} residual {:e}", fit.sigma, fit.residual);
    Ok(())
}
