use nfold::steinitz_reorder;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn zero_sum_sequence(rng: &mut ChaCha8Rng, dim: usize, delta: i64, len: usize) -> Vec<Vec<i64>> {
    loop {
        let mut vs: Vec<Vec<i64>> = (0..len - 1)
            .map(|_| (0..dim).map(|_| rng.gen_range(-delta..=delta)).collect())
            .collect();
        let closing: Vec<i64> = (0..dim)
            .map(|k| -vs.iter().map(|v| v[k]).sum::<i64>())
            .collect();
        if closing.iter().all(|x| x.abs() <= delta) {
            vs.push(closing);
            return vs;
        }
    }
}

#[test]
fn prefix_sums_stay_within_dimension_times_delta() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..200 {
        let dim = rng.gen_range(1..=3);
        let delta = rng.gen_range(1..=3);
        let len = rng.gen_range(1..=8);
        let vs = zero_sum_sequence(&mut rng, dim, delta, len);
        let order = steinitz_reorder(&vs, delta as u64).unwrap();

        let mut seen = order.permutation.clone();
        seen.sort_unstable();
        assert_eq!(seen, (0..len).collect::<Vec<_>>());

        let mut prefix = vec![0i64; dim];
        for &i in &order.permutation {
            prefix.iter_mut().zip(&vs[i]).for_each(|(p, v)| *p += v);
            let norm = prefix.iter().map(|x| x.abs()).max().unwrap();
            assert!(
                norm <= dim as i64 * delta,
                "{vs:?} in order {:?}",
                order.permutation
            );
        }
    }
}

#[test]
fn rejects_sequences_that_do_not_cancel() {
    assert!(steinitz_reorder(&[vec![1, 0], vec![0, 1]], 1).is_err());
}
