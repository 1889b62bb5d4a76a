// Limits of repeating parity units and of value cycles.

use collatz_lab::collatz::default_bound;
use collatz_lab::{alpha_cycle_limit, classify_unit, is_alpha_vs_beta, rational_string, unit_limit, PeriodicUnit, Seed, UnitLimit};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for bits in ["100", "110", "01", "10", "1101000"] {
        let u: PeriodicUnit = bits.parse()?;
        let limit = match unit_limit(&u) {
            UnitLimit::Converges { b_inf } => format!("B_inf = {}", rational_string(&b_inf)),
            UnitLimit::Diverges => "diverges".to_string(),
        };
        let verdict = classify_unit(&u)?;
        println!(
            "unit {bits}: a = {}, b = {}, {limit}, {:?}, {}",
            u.a_s(),
            u.b_s(),
            is_alpha_vs_beta(&u),
            verdict.label
        );
    }

    let r = alpha_cycle_limit(&Seed::try_from(7)?, 1000, &default_bound())
        .map_err(|e| e.to_string())?;
    println!(
        "seed 7 enters the cycle {:?}; B_n(c) = {}, formula limit {}, min phase limit {}",
        r.cycle.iter().map(ToString::to_string).collect::<Vec<_>>(),
        r.b_period,
        rational_string(&r.b_inf_formula),
        r.b_inf_min
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
