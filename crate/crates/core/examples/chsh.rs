//! From a pioneer spec to the CHSH inequality, its tightness certificate,
//! and the quantum statistics that violate it.
//!
//! ```sh
//! cargo run --release -p multidev --example chsh
//! ```

use multidev::algebra::{format_rational, rational_to_f64, ElementSet};
use multidev::contexts::EventSpace;
use multidev::pioneer::{coefficients, gamma_set, simplest_inequality, PioneerSpec};
use multidev::quantum::{maximize_violation, statistics, SpinConfig};
use multidev::tbic::{tbic_check, TbicVerdict};

fn main() -> multidev::Result<()> {
    // the top-level pioneer spec with profile S = {{A,B}}
    let spec = PioneerSpec::top_level(2, vec![ElementSet::full(2)])?;
    let ineq = coefficients(&spec)?;
    println!("constant: {}", format_rational(ineq.constant()));
    for term in ineq.terms() {
        let ids: Vec<u32> =
            term.rho.iter().map(|o| ineq.space().observable_id(o)).collect();
        println!("  {:+} · Q^{ids:?}", rational_to_f64(&term.coeff));
    }

    // exact tightness certificate for its member set
    let space = EventSpace::binary(2);
    let gamma = gamma_set(&spec).omni_indices(&space)?;
    match tbic_check(&space, &gamma)? {
        TbicVerdict::Tight { nullity, .. } => {
            println!("tight Bell inequality (nullity {nullity}, |Γ| = {})", gamma.len())
        }
        other => println!("unexpected verdict {other:?}"),
    }

    // the even-correlation state violates it at the optimal spread
    let (d, value) = maximize_violation(2)?;
    let stats = statistics(&SpinConfig::for_violation(2, d)?)?;
    let observed = simplest_inequality(2, ElementSet::EMPTY, 1)?.evaluate(&stats)?;
    println!(
        "optimal d/π = {:.6}, closed form {value:.6}, from statistics {:.6}",
        d / std::f64::consts::PI,
        rational_to_f64(&observed)
    );
    Ok(())
}
