// Encode seeds as parity vectors, solve vectors back to residue classes, and
// probe nested prefixes for a stable minimal seed.

use collatz_lab::parity::{prefixes, ProbeVerdict};
use collatz_lab::{convertibility_probe, minimal_seed, parity_vector, solve_parity, ParityVector, Seed};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let v = parity_vector(&Seed::try_from(3)?, 4);
    let class = solve_parity(&v);
    println!("v(3, 4) = {v}, solved back to {class}");
    assert_eq!(class.to_string(), "3 mod 2^4");

    let zeros: ParityVector = "000".parse()?;
    let z = minimal_seed(&zeros);
    println!("{zeros}: minimal seed {} (zero residue: {})", z.seed, z.zero_residue);

    // seed 7's own history settles on 7
    let history = parity_vector(&Seed::try_from(7)?, 20);
    let report = convertibility_probe(&prefixes(&history))?;
    println!("prefixes of {history}: {:?}", report.verdict);
    assert!(matches!(report.verdict, ProbeVerdict::ConvertibleEvidence { .. }));

    // a repeating 110 keeps pushing its minimal seed up
    let unit: ParityVector = "110".parse()?;
    let report = convertibility_probe(&prefixes(&unit.repeat(10)))?;
    let last = report.minimal_seeds.last().expect("non-empty");
    println!("prefixes of (110)^10: trend {}, last minimal seed {last}", report.trend);
    assert_eq!(report.verdict, ProbeVerdict::NonConvertibleEvidence);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
