// Classify individual seeds and survey a range.

use collatz_lab::classify::{survey, SurveySummary};
use collatz_lab::collatz::default_bound;
use collatz_lab::config::ClassifyOptions;
use collatz_lab::{classify_seed, conjecture_watchlist, Seed};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for p in [1u64, 7, 27, 9663] {
        let v = classify_seed(&Seed::try_from(p)?, 10_000, &default_bound())?;
        println!("{p}: {} {:?}, b_inf {:?}, watch {:?}", v.label, v.grade, v.b_inf, conjecture_watchlist(&v));
    }

    let tight = classify_seed(&Seed::try_from(27)?, 10_000, &1000u32.into())?;
    println!("27 with bound 1000: {} {:?}", tight.label, tight.grade);

    let summary: SurveySummary = survey(1..=20_000, &ClassifyOptions::default());
    println!("{}", serde_json::to_string(&summary)?);
    assert!(summary.is_clean());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
