//! Malliavin derivative of a cylindrical functional and its difference
//! quotients along a Cameron–Martin shift.
//!
//! For `Z = W(h')²` the residual `X_ε - ⟨∇Z, h⟩` equals `ε⟨h', h⟩²` on every
//! path.
//!
//! ```text
//! cargo run --release --example cylindrical_derivative
//! ```

use malliavin_lab::functional::{mc_difference_quotient, CylindricalFunctional, WienerFunctional};
use malliavin_lab::wiener::{cm_inner, sample_path, CameronMartinDirection};

fn main() -> malliavin_lab::Result<()> {
    let hp = CameronMartinDirection::uniform_cells(1.0, vec![2.0, -1.0, 0.5, 1.0])?;
    let h = CameronMartinDirection::uniform_cells(1.0, vec![1.0, 1.0])?;
    let z = CylindricalFunctional::power_of(hp.clone(), 2);
    let dz = z.malliavin_derivative();
    let ip = cm_inner(&hp, &h)?;
    println!("Z = W(h')^2, <h', h> = {ip}");

    let path = sample_path(hp.grid(), 3);
    let pairing = z.pairing_with_h(&h, &path)?.0;
    println!("Z(w) = {:.6}, <DZ, h> = {pairing:.6}, |DZ|_H = {:.6}", z.eval(&path)?, dz.h_norm(&path)?);
    for k in 1..=8 {
        let eps = 0.5f64.powi(k);
        let x = mc_difference_quotient(&z, &h, eps, &path)?;
        println!(
            "eps = {eps:<10} X_eps = {x:>12.8}  residual = {:>11.4e}  eps<h',h>^2 = {:.4e}",
            x - pairing,
            eps * ip * ip
        );
    }
    Ok(())
}
