//! Workloads shared by the benchmarks.

use gw_core::rules::{verify_rule, Rule, VerifyParams};
use gw_core::Oracle;

/// Both plane recursions up to degree `d` on a cold memo.
pub fn cold_recursions(d: i64) {
    let oracle = Oracle::new();
    for k in 1..=d {
        oracle.kontsevich_p2(k).expect("kontsevich");
        oracle.wdvv_f1(k, -1).expect("wdvv");
        oracle.wdvv_f1(k, 0).expect("wdvv");
    }
}

/// The full verification sweep on a cold memo.
pub fn full_sweep(max_degree: i64) -> usize {
    let oracle = Oracle::new();
    let params = VerifyParams {
        max_degree,
        ..VerifyParams::default()
    };
    Rule::ALL
        .into_iter()
        .map(|r| verify_rule(r, &params, &oracle).expect("sweep").len())
        .sum()
}
