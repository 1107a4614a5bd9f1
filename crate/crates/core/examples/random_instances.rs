//! Generates seeded random instances and round-trips them through the JSON file format.
//!
//! ```bash
//! cargo run -p polyode --example random_instances
//! ```

use polyode::generate_random_instance;
use polyode::io::{parse_instance_file, write_instance_file};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("polyode-random-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    for (n, m, density) in [(2, 2, 1.0), (3, 4, 0.3), (4, 5, 0.1)] {
        let inst = generate_random_instance(n, m, 42, density)?;
        let path = dir.join(format!("instance_n{n}_m{m}.json"));
        write_instance_file(&path, &inst)?;
        let back = parse_instance_file(&path)?;
        assert_eq!(back, inst);
        println!(
            "N = {n}, M = {m}, density {density}: {} terms, residual {:.1e} -> {}",
            inst.system().num_terms(),
            inst.residual().max_modulus(),
            path.display()
        );
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
