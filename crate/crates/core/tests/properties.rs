//! Property tests for the core operations and the evaluator.

use proptest::prelude::*;
use raspl::ir::{evaluate_reference, Plan};
use raspl::ops::{self, max_aggregation_attention_check};
use raspl::{evaluate, AggKind, Kind, MapFn, Predicate, Program, ProgramBuilder, Value, ValueSeq, ZipFn};

fn pred() -> impl Strategy<Value = Predicate> {
    prop::sample::select(Predicate::ALL.to_vec())
}

fn agg() -> impl Strategy<Value = AggKind> {
    prop::sample::select(vec![AggKind::Mean, AggKind::Min, AggKind::Max])
}

fn tokens(max_len: usize, lo: Value, hi: Value) -> impl Strategy<Value = Vec<Value>> {
    prop::collection::vec(lo..=hi, 1..=max_len)
}

fn tok(v: &[Value]) -> ValueSeq {
    ValueSeq::tokens(v.to_vec()).unwrap()
}

/// Three equally long token sequences.
fn triple(max_len: usize) -> impl Strategy<Value = (Vec<Value>, Vec<Value>, Vec<Value>)> {
    (1..=max_len).prop_flat_map(|n| {
        (
            prop::collection::vec(-4i16..=4, n),
            prop::collection::vec(-4i16..=4, n),
            prop::collection::vec(-20i16..=20, n),
        )
    })
}

proptest! {
    #[test]
    fn selectors_are_causal((k, q, _) in triple(24), p in pred()) {
        let s = ops::select(&tok(&k), &tok(&q), p).unwrap();
        prop_assert!(s.is_causal());
        for (i, row) in s.rows().iter().enumerate() {
            let expected: Vec<usize> = (0..=i).filter(|&j| p.holds(k[j], q[i])).collect();
            prop_assert_eq!(row, &expected);
        }
    }

    #[test]
    fn select_then_aggregate_is_kqv((k, q, v) in triple(24), p in pred(), a in agg(), default in -5i16..5) {
        let (k, q, v) = (tok(&k), tok(&q), tok(&v));
        let two_step = ops::aggregate(&ops::select(&k, &q, p).unwrap(), &v, a, default).unwrap();
        prop_assert_eq!(two_step, ops::kqv(&k, &q, &v, p, a, default).unwrap());
    }

    #[test]
    fn singleton_rows_agree_across_reductions(v in tokens(24, -50, 50)) {
        // the query selects exactly the diagonal
        let v = tok(&v);
        let idx = ops::indices(&v);
        let sel = ops::select(&idx, &idx, Predicate::Eq).unwrap();
        let mean = ops::aggregate(&sel, &v, AggKind::Mean, 0).unwrap();
        prop_assert_eq!(&mean, &ops::aggregate(&sel, &v, AggKind::Min, 0).unwrap());
        prop_assert_eq!(&mean, &ops::aggregate(&sel, &v, AggKind::Max, 0).unwrap());
        prop_assert_eq!(mean.values(), v.values());
    }

    #[test]
    fn mean_matches_rational_rounding(vals in prop::collection::vec(-128i32..=127, 1..40)) {
        let sum: i32 = vals.iter().sum();
        let c = vals.len() as i32;
        let exact = f64::from(sum) / f64::from(c);
        let expected = exact.abs().round() * exact.signum();
        prop_assert_eq!(f64::from(ops::mean_round(sum, c)), expected);
    }

    #[test]
    fn max_aggregation_attention_construction(
        (k, q, v) in (1usize..=16).prop_flat_map(|n| (
            prop::collection::vec(0i16..4, n),
            prop::collection::vec(0i16..4, n),
            prop::collection::vec(-4i16..4, n),
        )),
        p in pred(),
    ) {
        let r = max_aggregation_attention_check(&tok(&k), &tok(&q), &tok(&v), p).unwrap();
        prop_assert!(r.agrees, "{:?}", r.mismatched_rows);
    }
}

/// One random instruction; operands are picked modulo the variables defined so far.
#[derive(Clone, Debug)]
enum Step {
    Indices(usize),
    Map(usize, u8, i16),
    Zip(usize, usize, u8, Predicate),
    Kqv(usize, usize, usize, Predicate, AggKind, i16),
    Width(usize, usize, Predicate),
}

fn step() -> impl Strategy<Value = Step> {
    let v = 0usize..64;
    prop_oneof![
        1 => v.clone().prop_map(Step::Indices),
        3 => (v.clone(), 0u8..5, -3i16..=3).prop_map(|(x, f, c)| Step::Map(x, f, c)),
        3 => (v.clone(), v.clone(), 0u8..5, pred()).prop_map(|(x, y, f, p)| Step::Zip(x, y, f, p)),
        4 => (v.clone(), v.clone(), v.clone(), pred(), agg(), -3i16..=3)
            .prop_map(|(k, q, x, p, a, d)| Step::Kqv(k, q, x, p, a, d)),
        1 => (v.clone(), v, pred()).prop_map(|(k, q, p)| Step::Width(k, q, p)),
    ]
}

/// Builds a well-kinded program, substituting a legal operation whenever a step
/// does not fit the kinds it landed on.
fn build(steps: &[Step]) -> Program {
    let mut b = ProgramBuilder::new("random");
    let x = b.input("seq");
    let mut vars = vec![x];
    for s in steps {
        let pick = |i: usize| vars[i % vars.len()];
        let next = match *s {
            Step::Indices(i) => b.indices(pick(i)),
            Step::Map(i, f, c) => {
                let a = pick(i);
                if b.kind_of(a) == Kind::Token {
                    let f = match f {
                        0 => MapFn::AddConst(c),
                        1 => MapFn::Neg,
                        2 => MapFn::ModConst(c.abs() + 1),
                        3 => MapFn::Cmp { pred: Predicate::Lt, rhs: c },
                        _ => MapFn::Not,
                    };
                    b.tok_map(a, f)
                } else {
                    b.tok_map(a, MapFn::AddConst(if c < 0 { -1 } else { 1 }))
                }
            }
            Step::Zip(i, j, f, p) => {
                let (a, c) = (pick(i), pick(j));
                let (ka, kc) = (b.kind_of(a), b.kind_of(c));
                if ka == kc {
                    b.seq_map(a, c, ZipFn::Cmp(p))
                } else if kc == Kind::Token {
                    b.seq_map(a, c, ZipFn::Gate { fill: 0 })
                } else if ka == Kind::Token {
                    let f = [ZipFn::Add, ZipFn::Sub, ZipFn::And, ZipFn::Or, ZipFn::AndNot][f as usize];
                    b.seq_map(a, a, f)
                } else {
                    b.seq_map(a, a, ZipFn::Cmp(p))
                }
            }
            Step::Kqv(k, q, v, p, a, d) => {
                let (k, mut q, v) = (pick(k), pick(q), pick(v));
                if b.kind_of(k) != b.kind_of(q) {
                    q = k;
                }
                let a = if b.kind_of(v) != Kind::Token && a == AggKind::Mean { AggKind::Max } else { a };
                b.kqv(k, q, v, p, a, d)
            }
            Step::Width(k, q, p) => {
                let (k, mut q) = (pick(k), pick(q));
                if b.kind_of(k) != b.kind_of(q) {
                    q = k;
                }
                let sel = b.select(k, q, p);
                b.sel_width(sel)
            }
        };
        vars.push(next);
    }
    let out = *vars.last().unwrap();
    b.finish(out)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn random_programs_type_check(steps in prop::collection::vec(step(), 1..20)) {
        let p = build(&steps);
        prop_assert!(raspl::check_program(&p).is_empty(), "{:?}", raspl::check_program(&p));
    }

    #[test]
    fn incremental_matches_reference(steps in prop::collection::vec(step(), 1..20), x in tokens(20, -3, 3)) {
        let p = build(&steps);
        let input = [tok(&x)];
        let fast = evaluate(&p, &input);
        let slow = evaluate_reference(&p, &input);
        match (fast, slow) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "evaluators disagree: {:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn prefixes_evaluate_to_truncations(steps in prop::collection::vec(step(), 1..20), x in tokens(20, -3, 3)) {
        let p = build(&steps);
        if let Ok(full) = evaluate(&p, &[tok(&x)]) {
            let plan = Plan::compile(&p).unwrap();
            for t in 1..=x.len() {
                let prefix = plan.run(&[tok(&x[..t])]).unwrap();
                prop_assert_eq!(prefix.output(), &full.values()[..t]);
            }
        }
    }

    #[test]
    fn ir_json_round_trips(steps in prop::collection::vec(step(), 1..20)) {
        let p = build(&steps);
        prop_assert_eq!(Program::from_json(&p.to_json()).unwrap(), p);
    }
}
