//! Both sides of `E[Z∘τ_h] = E[Z e^{W(h) - ½‖h‖²}]` by Monte Carlo with
//! common random numbers.
//!
//! ```text
//! cargo run --release --example cameron_martin
//! ```

use malliavin_lab::diagnostics::cameron_martin_check;
use malliavin_lab::functional::{CylindricalFunctional, Polynomial};
use malliavin_lab::wiener::CameronMartinDirection;

fn main() -> malliavin_lab::Result<()> {
    let h = CameronMartinDirection::constant(1.0, 1.0)?;
    let n = 200_000;
    let cases = [
        ("W(h)^2", CylindricalFunctional::power_of(h.clone(), 2), 2.0),
        ("W(h)", CylindricalFunctional::power_of(h.clone(), 1), 1.0),
        ("1", CylindricalFunctional::new(vec![h.clone()], Polynomial::constant(1, 1.0))?, 1.0),
    ];
    for (name, z, exact) in cases {
        let c = cameron_martin_check(&z, &h, n, 7)?;
        println!(
            "Z = {name:7} lhs {:.5} ± {:.1e}  rhs {:.5} ± {:.1e}  exact {exact}  agree: {}",
            c.lhs.mean,
            c.lhs.std_error,
            c.rhs.mean,
            c.rhs.std_error,
            c.agrees()
        );
    }

    // A direction with a sign change and a degree-3 functional of two coordinates.
    let g = CameronMartinDirection::uniform_cells(1.0, vec![1.5, -0.5])?;
    let z = CylindricalFunctional::new(vec![h.clone(), g], "x1*x2^2 - x1".parse()?)?;
    let c = cameron_martin_check(&z, &h, n, 11)?;
    println!("Z = {}  lhs {:.4}  rhs {:.4}  agree: {}", z.polynomial(), c.lhs.mean, c.rhs.mean, c.agrees());
    Ok(())
}
