// Build the order-4 complete matrices, print them, and check that the
// structural (parity) form covers every vector exactly once.

use collatz_lab::build_matrix;
use collatz_lab::config::DEFAULT_MATRIX_ORDER_CAP;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for generator in [1, 2] {
        let m = build_matrix(generator, 4, DEFAULT_MATRIX_ORDER_CAP)?;
        println!("generator {generator}, order 4:");
        m.write_table(std::io::stdout().lock())?;
        assert!(m.structural_is_complete());
    }

    let mut csv = Vec::new();
    build_matrix(1, 3, DEFAULT_MATRIX_ORDER_CAP)?.write_csv(&mut csv)?;
    print!("{}", String::from_utf8(csv)?);

    let big = build_matrix(1, 16, DEFAULT_MATRIX_ORDER_CAP)?;
    println!("order 16: {} rows, structurally complete: {}", big.row_count(), big.structural_is_complete());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
