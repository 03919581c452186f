//! Exhaustive checks of the index bookkeeping over the grid
//! `n ∈ 2..=5`, `ν ∈ 1..=4`, `k_i ∈ 1..=3`, `g ∈ {0, 1}`, `l⁺ ∈ 1..=ν`.

use gw_core::index::{
    component_vanishes, index_minus, index_plus, index_sum, point_blowup_slack,
    point_constraint_equality_slack, ComponentProfile, Scenario, VanishReason,
};

fn contact_lists(nu: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..nu {
        out = out
            .into_iter()
            .flat_map(|ks: Vec<i64>| {
                (1..=3).map(move |k| {
                    let mut v = ks.clone();
                    v.push(k);
                    v
                })
            })
            .collect();
    }
    out
}

struct Point {
    n: i64,
    nu: i64,
    sum_k: i64,
    g: i64,
    g_plus: i64,
    l_plus: i64,
}

fn grid() -> Vec<Point> {
    let mut out = Vec::new();
    for n in 2..=5 {
        for nu in 1..=4usize {
            for ks in contact_lists(nu) {
                for g in 0..=1 {
                    for g_plus in 0..=g {
                        for l_plus in 1..=nu as i64 {
                            out.push(Point {
                                n,
                                nu: nu as i64,
                                sum_k: ks.iter().sum(),
                                g,
                                g_plus,
                                l_plus,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

#[test]
fn index_is_additive_across_every_cut() {
    let mut cases = 0;
    for p in grid() {
        for scenario in Scenario::ALL {
            for c1a in [-3, 0, 1, 7] {
                let plus = index_plus(scenario, p.n, p.g_plus, p.l_plus, p.sum_k, p.nu).unwrap();
                let minus = index_minus(p.n, c1a, p.g, p.g_plus, p.l_plus, p.nu, p.sum_k, scenario).unwrap();
                let total = index_sum(p.n, p.nu, scenario.cut_class_c1(p.n, c1a), p.g);
                assert_eq!(
                    plus.value + minus.value,
                    total,
                    "{scenario:?} n={} nu={} g={}",
                    p.n,
                    p.nu,
                    p.g
                );
                cases += 1;
            }
        }
    }
    assert!(cases > 10_000);
}

#[test]
fn point_blowup_slack_is_negative() {
    for p in grid() {
        assert!(point_blowup_slack(p.n, p.l_plus, p.g_plus, p.sum_k, p.nu) < 0);
    }
}

#[test]
fn point_constraint_equality_case() {
    let mut equalities = 0;
    for p in grid() {
        let slack = point_constraint_equality_slack(p.n, p.l_plus, p.sum_k, p.nu);
        assert!(slack <= 0);
        let equal = p.l_plus == p.nu && p.nu == p.sum_k;
        assert_eq!(
            slack == 0,
            equal,
            "n={} l={} nu={} sk={}",
            p.n,
            p.l_plus,
            p.nu,
            p.sum_k
        );
        equalities += equal as usize;
    }
    assert!(equalities > 0);
}

/// Every cut component of a genus-zero plane curve count is excluded by
/// the degree gate, leaving only the uncut component.
#[test]
fn point_blowup_components_vanish_for_plane_curves() {
    for d in 1..=6i64 {
        let degrees = vec![4; (3 * d - 1) as usize];
        for nu in 1..=4usize {
            for ks in contact_lists(nu) {
                for l_plus in 1..=nu as i64 {
                    let profile = ComponentProfile {
                        n: 2,
                        c1a: 3 * d,
                        g: 0,
                        g_plus: 0,
                        l_plus,
                        m_plus: 0,
                        ks: ks.clone(),
                        plus_insertions_vanish: true,
                    };
                    let v = component_vanishes(&profile, &degrees, Scenario::PointBlowup).unwrap();
                    assert!(v.vanishes);
                    assert_eq!(v.reason, VanishReason::DegreeVsIndex);
                }
            }
        }
        let uncut = ComponentProfile {
            n: 2,
            c1a: 3 * d,
            g: 0,
            g_plus: 0,
            l_plus: 0,
            m_plus: 0,
            ks: vec![],
            plus_insertions_vanish: true,
        };
        let v = component_vanishes(&uncut, &degrees, Scenario::PointBlowup).unwrap();
        assert!(!v.vanishes);
        assert_eq!(v.reason, VanishReason::NotExcluded);
    }
}
