//! Rank-revealing SVD of a step coupling and the objects derived from it.
//!
//! Run with `cargo run --example svd_pseudoinverse`.

use dle::linalg::{self, FundamentalSpace, Matrix, DEFAULT_REL_TOL};

fn main() -> dle::Result<()> {
    // every vertex of one slice couples to the single real vertex of the next
    let r = Matrix::from_row_slice(3, 3, &[0., 2., 0., 0., 2., 0., 0., 2., 0.]);
    let svd = linalg::svd(&r, DEFAULT_REL_TOL)?;
    println!("rank {} of a {}x{} matrix", svd.rank, svd.nrows(), svd.ncols());
    println!("singular values {}", svd.sigma_r.transpose());
    println!("threshold used {:e}", svd.tolerance_used);

    let pinv = svd.pinv();
    println!("pseudoinverse {pinv}");
    let penrose = (&r * &pinv * &r - &r).amax();
    println!("|R R+ R - R| = {penrose:e}");

    let left_null = svd.projector(FundamentalSpace::LeftNullSpace);
    println!("projector onto the kernel of R^T {left_null}");
    println!("reconstruction error {:e}", (svd.reconstruct() - &r).amax());
    Ok(())
}
