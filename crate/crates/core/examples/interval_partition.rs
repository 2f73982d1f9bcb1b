//! Partition the subsets of size at least k into set-intervals whose
//! endpoints have equal componentwise maxima, then verify by enumeration.

use kmono::partition::{partition_upper, verify_partition, VectorFamily};
use kmono::{rat, Result};

fn run(label: &str, vectors: Vec<Vec<i64>>) -> Result<()> {
    let family = VectorFamily::new(
        vectors
            .into_iter()
            .map(|v| v.into_iter().map(rat).collect())
            .collect(),
    )?;
    let k = family.k();
    let partition = partition_upper(&family, k)?;
    println!("{label} (d = {}, k = {k}):", family.d());
    for interval in partition.intervals() {
        println!("  ⟨{}, {}⟩", interval.sigma(), interval.tau());
    }
    let diag = verify_partition(&partition, &family, k)?;
    println!(
        "  valid: {}, covers {} of {} subsets",
        diag.is_valid(),
        diag.total_size,
        diag.expected_size
    );
    Ok(())
}

fn main() -> Result<()> {
    run("chain", vec![vec![1], vec![2], vec![3]])?;
    run("corner", vec![vec![0, 0], vec![1, 0], vec![0, 1]])?;
    run(
        "random-looking",
        vec![
            vec![3, 0, 1],
            vec![1, 2, 2],
            vec![0, 3, 0],
            vec![2, 2, 3],
            vec![1, 1, 1],
            vec![3, 3, 0],
        ],
    )?;
    Ok(())
}
