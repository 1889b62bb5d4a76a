// The two named sequential series and a series built from prefixes.

use collatz_lab::parity::prefixes;
use collatz_lab::{build_series, parity_vector, series_limits, Family, Seed};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for family in [Family::OnesThenZeros, Family::ZerosThenOnes] {
        let report = build_series(&family, 32)?;
        let short = build_series(&family, 6)?;
        print!("{}", short.table());
        let limits = series_limits(&report)?;
        println!(
            "{} up to 32: seeds {}, A {}, B {}, terminal {} => {} ({:?})\n",
            family.name(),
            report.seed_trend,
            report.a_trend,
            report.b_trend,
            report.terminal_trend,
            limits.label,
            limits.grade
        );
    }

    let history = parity_vector(&Seed::try_from(27)?, 120);
    let report = build_series(&Family::FromPrefixes(prefixes(&history)), 120)?;
    let limits = series_limits(&report)?;
    println!("prefixes of 27's history settle at {:?}: {}", limits.p_inf.map(|p| p.to_string()), limits.label);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
