//! Lists the monomials of a homogeneous system and counts coefficient slots.
//!
//! ```bash
//! cargo run -p polyode --example enumerate_monomials
//! ```

use polyode::enumerate_multi_indices;
use polyode::polysys::binomial;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let quartic = enumerate_multi_indices(2, 4)?;
    let names: Vec<String> = quartic.iter().map(|m| format!("({m})")).collect();
    println!("N = 2, M = 4: {}", names.join(" "));
    println!("coefficient slots for two equations: {}", 2 * quartic.len());

    println!("\n  N  M  monomials  binomial(M+N-1, N-1)");
    for n in 2..=4 {
        for m in 2..=5u32 {
            let count = enumerate_multi_indices(n, m)?.len();
            let expected = binomial(m as u64 + n as u64 - 1, n as u64 - 1);
            assert_eq!(count as u64, expected);
            println!("{n:>3}{m:>3}{count:>11}{expected:>22}");
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
