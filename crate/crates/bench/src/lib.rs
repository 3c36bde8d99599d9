//! Fixed workloads shared by the criterion benches.

use zernike_roots::PolyIndex;

/// Indices spanning short and long continued fractions.
pub fn sample_indices() -> Vec<PolyIndex> {
    [(4, 0), (12, 2), (20, 0), (20, 10), (40, 0), (60, 0)]
        .into_iter()
        .map(|(n, m)| PolyIndex::new(n, m).expect("valid index"))
        .collect()
}
