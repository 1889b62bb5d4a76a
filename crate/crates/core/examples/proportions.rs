// Exact class proportions and convergence sweeps.

use collatz_lab::proportions::{threshold, write_csv, ClassTag, SweepTarget};
use collatz_lab::{convergence_sweep, proportion_a, proportion_s, rational_string, Mode};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let reports = [4, 8, 16, 64, 256]
        .into_iter()
        .map(|n| proportion_a(n, Mode::ExactBinomial))
        .collect::<Result<Vec<_>, _>>()?;
    write_csv(&reports, std::io::stdout().lock())?;

    for n in [64, 256, 1024, 4096] {
        println!("m*({n}) = {}, m*/n = {:.5}", threshold(n), threshold(n) as f64 / n as f64);
    }

    for n in [1, 2, 4, 8, 12] {
        let s = proportion_s(n)?;
        println!(
            "n = {n}: r(S+) = {}, r(A+) = {}",
            rational_string(&s.ratios[&ClassTag::SPlus]),
            rational_string(&s.ratios[&ClassTag::APlus])
        );
    }

    let sweep = convergence_sweep(&[4, 8, 16, 32, 64], SweepTarget::AProportion)?;
    println!("A+ sweep: {:?}", sweep.verdict);
    let odd = convergence_sweep(&[4, 8, 12], SweepTarget::OddFraction)?;
    println!("{}", serde_json::to_string(&odd)?);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
