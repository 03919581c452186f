//! Identities between the plane recursion, the blown-up plane recursion
//! and the axiom reductions.

use gw_core::lattice::{CurveClass, DivisorClass, Manifold};
use gw_core::oracle::{pn_three_point, reduce_divisor, Evaluation, MemoTable, ZeroReason};
use gw_core::{Insertion, InvariantQuery, Oracle};

#[test]
fn point_constraint_class_matches_plane_counts() {
    let o = Oracle::new();
    for d in 1..=6 {
        assert_eq!(o.wdvv_f1(d, -1).unwrap(), o.kontsevich_p2(d).unwrap(), "d = {d}");
    }
}

#[test]
fn total_transform_matches_plane_counts() {
    let o = Oracle::new();
    for d in 1..=6 {
        assert_eq!(o.wdvv_f1(d, 0).unwrap(), o.kontsevich_p2(d).unwrap(), "d = {d}");
    }
}

#[test]
fn recursions_agree_beyond_the_acceptance_range() {
    let o = Oracle::new();
    for d in 7..=9 {
        let n = o.kontsevich_p2(d).unwrap();
        assert_eq!(o.wdvv_f1(d, -1).unwrap(), n);
        assert_eq!(o.wdvv_f1(d, 0).unwrap(), n);
    }
}

#[test]
fn divisor_axiom_agrees_with_three_point_values() {
    let o = Oracle::new();
    for n in 2..=6u32 {
        let m = Manifold::proj_space(n).unwrap();
        for c in 0..=n {
            for k in 1..=3i64 {
                // k·H paired with a line
                let q = InvariantQuery::new(
                    m.clone(),
                    CurveClass::new([1]),
                    0,
                    vec![
                        Insertion::divisor(DivisorClass::new([k])),
                        Insertion::Point,
                        Insertion::HyperplanePower { k: c },
                    ],
                );
                let (scalar, residual) = reduce_divisor(&q).unwrap();
                assert_eq!(scalar, k.into());
                // H^1 is a divisor as well and is stripped with factor 1
                let kept = if c == 1 { 1 } else { 2 };
                assert_eq!(residual.insertions.len(), kept);
                let direct = pn_three_point(n, 1, n, c, 1).unwrap();
                let expected = direct * gw_core::ExactRational::from(k);
                assert_eq!(
                    o.evaluate(&q).unwrap().value(),
                    Some(expected),
                    "n={n} c={c} k={k}"
                );
            }
        }
    }
}

#[test]
fn divisor_insertions_on_the_blowup_scale_by_pairings() {
    let o = Oracle::new();
    let m = Manifold::blowup_point(2).unwrap();
    for (a, b) in [(1, 0), (2, -1), (3, -1), (3, 0), (4, -2)] {
        let class = CurveClass::new([a, b]);
        let points = (3 * a + b - 1) as usize;
        let base = o
            .evaluate(&InvariantQuery::points(m.clone(), class.clone(), points))
            .unwrap();
        let base = base.value().unwrap();
        for (dh, de) in [(1, 0), (0, 1), (2, -1), (1, 1)] {
            let d = DivisorClass::new([dh, de]);
            let mut insertions = vec![Insertion::divisor(d)];
            insertions.extend(std::iter::repeat_n(Insertion::Point, points));
            let q = InvariantQuery::new(m.clone(), class.clone(), 0, insertions);
            // h·(a f + b e) = a, E·(a f + b e) = -b
            let factor = dh * a - de * b;
            let expected = base.clone() * gw_core::ExactRational::from(factor);
            assert_eq!(o.evaluate(&q).unwrap().value(), Some(expected));
        }
    }
}

#[test]
fn exceptional_two_point_value() {
    let m = Manifold::blowup_point(2).unwrap();
    let q = InvariantQuery::new(m, CurveClass::new([0, 1]), 0, vec![Insertion::ExcDual; 2]);
    let (scalar, residual) = reduce_divisor(&q).unwrap();
    assert_eq!(scalar, 1.into());
    assert!(residual.insertions.is_empty());
    assert_eq!(
        Oracle::new().evaluate(&q).unwrap(),
        Evaluation::Exact { value: 1.into() }
    );
}

#[test]
fn lines_through_two_points() {
    for n in 2..=5 {
        let q = InvariantQuery::points(Manifold::proj_space(n).unwrap(), CurveClass::new([1]), 2);
        assert_eq!(q.required_degree(), Some(q.total_degree()));
        assert_eq!(Oracle::new().evaluate(&q).unwrap().value(), Some(1.into()));
    }
}

#[test]
fn exceptional_classes_with_pullbacks_vanish() {
    let m = Manifold::blowup_point(2).unwrap();
    let o = Oracle::new();
    for r in 1..=5 {
        for extra in 0..=2usize {
            let mut insertions = vec![Insertion::pullback(Insertion::Point)];
            insertions.extend(std::iter::repeat_n(Insertion::ExcDual, extra));
            let q = InvariantQuery::new(m.clone(), CurveClass::new([0, r]), 0, insertions);
            let v = o.evaluate(&q).unwrap();
            assert_eq!(v.zero_reason(), Some(ZeroReason::ExceptionalPullback), "{q}");
        }
    }
}

#[test]
fn cold_warm_and_reloaded_memos_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("memo.json");
    let cold = Oracle::with_memo(MemoTable::cold(&path));
    let values: Vec<_> = (1..=6)
        .map(|d| {
            (
                cold.kontsevich_p2(d).unwrap(),
                cold.wdvv_f1(d, -1).unwrap(),
                cold.wdvv_f1(d, 0).unwrap(),
            )
        })
        .collect();
    cold.memo().save().unwrap();
    let first = std::fs::read_to_string(&path).unwrap();

    let warm = Oracle::with_memo(MemoTable::open(&path).unwrap());
    let again: Vec<_> = (1..=6)
        .map(|d| {
            (
                warm.kontsevich_p2(d).unwrap(),
                warm.wdvv_f1(d, -1).unwrap(),
                warm.wdvv_f1(d, 0).unwrap(),
            )
        })
        .collect();
    assert_eq!(values, again);
    assert!(!warm.memo().is_dirty());
    warm.memo().save().unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), first);
}

#[test]
fn plane_counts_are_positive_integers() {
    let o = Oracle::new();
    for d in 1..=10 {
        let v = o.kontsevich_p2(d).unwrap();
        assert!(v.is_integer() && !v.is_negative() && !v.is_zero());
    }
}
