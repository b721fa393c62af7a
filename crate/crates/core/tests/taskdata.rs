use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use raspl::ir::{evaluate_reference, Plan};
use raspl::programs::{Answer, Instance, Task};
use raspl::taskdata::sample::{self, longest_carry_chain};
use raspl::taskdata::{gen_instances, length_rng, oracle, sample_instance, verify, CarryMode, DataTask, GenConfig, VerifyConfig};
use raspl::{analyze, ValueSeq};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn hard_carry_chains_span_every_digit() {
    let mut r = rng(1);
    for len in 1..=60 {
        for _ in 0..20 {
            let (a, b) = sample::hard_carry_summands(&mut r, len);
            assert_eq!(a.len(), len);
            assert_eq!(longest_carry_chain(&a, &b), len, "{a}+{b}");
        }
    }
}

#[test]
fn hard_carry_length_three_looks_like_381_plus_619() {
    let mut r = rng(3);
    for _ in 0..50 {
        let (a, b) = sample::hard_carry_summands(&mut r, 3);
        let sum = oracle::sum(&a, &b).unwrap();
        assert_eq!(sum.len(), 4);
        assert!(sum.starts_with('1'));
    }
    assert_eq!(longest_carry_chain("381", "619"), 3);
}

#[test]
fn zero_chain_has_no_carry() {
    let mut r = rng(4);
    for len in 1..30 {
        let (a, b) = sample::summands_with_chain(&mut r, len, 0, 0);
        let digit = |s: &str, i: usize| s.as_bytes().iter().rev().nth(i).map_or(0, |c| c - b'0');
        for i in 0..len {
            assert!(digit(&a, i) + digit(&b, i) <= 9);
        }
    }
}

#[test]
fn chains_land_where_requested() {
    let mut r = rng(8);
    for len in 1..=12 {
        for chain in 0..=len {
            for start in 0..=len - chain {
                let (a, b) = sample::summands_with_chain(&mut r, len, chain, start);
                assert_eq!(longest_carry_chain(&a, &b), chain, "len {len} chain {chain} start {start}: {a}+{b}");
            }
        }
    }
}

#[test]
fn balanced_chain_lengths_are_uniform() {
    // chi-squared with 10 degrees of freedom; 29.6 is the 0.999 quantile
    let len = 10;
    let draws = 10_000;
    let mut hist = vec![0usize; len + 1];
    let mut r = rng(5);
    for _ in 0..draws {
        let (a, b) = sample::balanced_carry_sampler(&mut r, len);
        hist[longest_carry_chain(&a, &b)] += 1;
    }
    let expected = draws as f64 / (len + 1) as f64;
    let chi2: f64 = hist.iter().map(|&h| (h as f64 - expected).powi(2) / expected).sum();
    assert!(chi2 < 29.6, "{hist:?} chi2={chi2}");
}

#[test]
fn mode_instances_have_a_unique_mode() {
    let mut r = rng(6);
    let mut repaired = 0;
    for len in 1..=60 {
        for _ in 0..50 {
            let (tokens, repairs) = sample::mode_tokens(&mut r, len);
            assert_eq!(tokens.len(), len);
            assert!(oracle::unique_mode(&tokens).is_ok());
            repaired += usize::from(repairs > 0);
        }
    }
    assert!(repaired > 0);
}

#[test]
fn unique_tokens_are_distinct_and_infeasible_lengths_fail() {
    let mut r = rng(7);
    let t = sample::copy_tokens(&mut r, 100);
    let mut s = t.clone();
    s.sort_unstable();
    s.dedup();
    assert_eq!(s.len(), 100);
    assert!(sample_instance(&mut r, Task::CopyUnique, 101, CarryMode::Independent).is_err());
    assert!(sample_instance(&mut r, Task::Count, 156, CarryMode::Independent).is_err());
}

#[test]
fn length_streams_are_independent() {
    use rand::Rng;
    let a: u64 = length_rng(9, 5).random();
    let b: u64 = length_rng(9, 6).random();
    assert_ne!(a, b);
    assert_eq!(a, length_rng(9, 5).random::<u64>());
}

#[test]
fn every_data_task_generates() {
    for t in DataTask::all() {
        let cfg = GenConfig::new(t, 12, 1);
        let records = gen_instances(&cfg, 40).unwrap();
        assert_eq!(records.len(), 40);
        for r in records {
            assert!(r.length >= 1 && r.length <= 12);
            assert!(!r.prompt.is_empty() && !r.target.is_empty());
        }
    }
}

/// The program's prediction at each position equals the next token of the correct sequence.
#[test]
fn teacher_forcing_consistency() {
    for task in Task::ALL {
        let spec = task.spec();
        let plan = Plan::compile(&spec.program).unwrap();
        let mut r = rng(10);
        for len in 1..=24 {
            let (inst, _) = sample_instance(&mut r, task, len, CarryMode::Balanced).unwrap();
            let prompt = spec.encode_prompt(&inst).unwrap();
            let target = oracle::oracle(task, &inst).unwrap();
            let full: Vec<_> = prompt.iter().chain(&target).copied().collect();
            let out = plan.run(&[ValueSeq::tokens(full.clone()).unwrap()]).unwrap();
            for i in prompt.len() - 1..full.len() - 1 {
                assert_eq!(out.output()[i], full[i + 1], "{task} {inst:?} at {i}");
            }
        }
    }
}

#[test]
fn reverse_and_forward_agree() {
    let (rev, fwd) = (Task::AddRev.spec(), Task::AddFwd.spec());
    let mut r = rng(12);
    for len in 1..=40 {
        for mode in [CarryMode::Independent, CarryMode::Hard] {
            let (a, b) = sample::summands(&mut r, len, mode);
            let inst = Instance::Addition { a, b };
            let answers: Vec<Answer> = [&rev, &fwd]
                .iter()
                .map(|spec| {
                    let p = spec.encode_prompt(&inst).unwrap();
                    let run = raspl::sample_autoregressive(spec, &p, false).unwrap();
                    spec.decode_answer(&run.full_sequence, run.prompt_len).unwrap()
                })
                .collect();
            assert_eq!(answers[0], answers[1]);
        }
    }
}

#[test]
fn forward_addition_is_the_longer_program() {
    let rev = analyze(&Task::AddRev.spec().program);
    let fwd = analyze(&Task::AddFwd.spec().program);
    assert!(fwd.attention_op_count > rev.attention_op_count);
    assert!(fwd.parallel_depth > rev.parallel_depth);
}

#[test]
fn sort_verifies_up_to_64() {
    let cfg = VerifyConfig { max_len: 64, per_length: 16, seed: 3, ..VerifyConfig::default() };
    let r = verify(&Task::Sort.spec(), &cfg).unwrap();
    assert!(r.passed());
    assert_eq!(r.instances, 64 * 16);
}

#[test]
fn reference_evaluation_agrees_on_shipped_programs() {
    for task in Task::ALL {
        let spec = task.spec();
        let mut r = rng(13);
        let (inst, _) = sample_instance(&mut r, task, 9, CarryMode::Independent).unwrap();
        let prompt = spec.encode_prompt(&inst).unwrap();
        let input = [ValueSeq::tokens(prompt).unwrap()];
        assert_eq!(raspl::evaluate(&spec.program, &input).unwrap(), evaluate_reference(&spec.program, &input).unwrap());
    }
}
