// Decompose `T^n(p) = A_n·p + B_n` and check it against direct iteration.
//
// `cargo run --example trajectory_decomposition`

use collatz_lab::{coeffs_of_seed, evaluate, trajectory, Seed};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let seed: Seed = "7".parse()?;
    let traj = trajectory(&seed, 11);
    let terms: Vec<String> = traj.terms().iter().map(ToString::to_string).collect();
    println!("Sy(7, 11) = {}", terms.join(" "));

    for (p, n) in [(7u64, 11usize), (661, 11), (27, 70)] {
        let p = Seed::try_from(p)?;
        let c = coeffs_of_seed(&p, n);
        let via_coeffs = evaluate(&c, &p)?;
        let direct = trajectory(&p, n).last().clone();
        assert_eq!(via_coeffs, direct);
        println!("T^{n}({p}) = {} * {p} + {} = {direct}", c.a, c.b);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
