//! Finite, semi-infinite and endpoint-singular integrals with their
//! verdicts.
//!
//! ```text
//! cargo run --release --example improper_quadrature
//! ```

use malliavin_lab::quadrature::{
    gaussian_expectation, integrate_adaptive, integrate_semi_infinite, integrate_singular_origin, Integrand,
    QuadSettings,
};
use malliavin_lab::functional::Abscissa;
use malliavin_lab::LogValue;

fn main() -> malliavin_lab::Result<()> {
    let s = QuadSettings::default();

    let x2 = Integrand::new(|x| x * x);
    let x4 = Integrand::new(|x| x.powi(4));
    println!("E[W^2]            {}", gaussian_expectation(&x2, &s)?);
    println!("E[W^4]            {}", gaussian_expectation(&x4, &s)?);
    println!("int_0^1 x dx      {}", integrate_adaptive(&Integrand::new(|x| x), 0.0, 1.0, &s)?);

    let quartic = Integrand::new(|x| x.powi(-4));
    let harmonic = Integrand::new(|x| x.recip());
    println!("int_2^inf x^-4    {}  (closed form {:e})", integrate_semi_infinite(&quartic, 2.0, &s)?, 1.0 / 24.0);
    println!("int_2^inf 1/x     {}", integrate_semi_infinite(&harmonic, 2.0, &s)?);

    // 1/(x |ln x|^6), evaluated from ln x so the route u = -ln x can reach
    // x far below 1e-308.
    let bertrand = Integrand::from_log(|at| {
        let t = match at {
            Abscissa::Log(t) => t,
            Abscissa::Linear(x) => x.ln(),
        };
        LogValue::from_ln(-t - 6.0 * t.abs().ln())
    })
    .with_singularities(vec![0.0]);
    let mu = (-10f64).exp();
    println!(
        "int_0^mu Bertrand {}  (closed form {:e})",
        integrate_singular_origin(&bertrand, mu, &s)?,
        10f64.powi(-5) / 5.0
    );
    let pole = Integrand::new(|x| x.recip()).with_singularities(vec![0.0]);
    println!("int_0^0.1 1/x     {}", integrate_singular_origin(&pole, 0.1, &s)?);

    // A 10x tighter tolerance must not flip a verdict.
    let tight = s.tightened(10.0);
    println!("tightened x^-4    {}", integrate_semi_infinite(&quartic, 2.0, &tight)?);
    Ok(())
}
