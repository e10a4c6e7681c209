use nfold::graver::finest_partition_bound;
use nfold::matrix::{is_conformal, l1_norm};
use nfold::model::{Brick, NFoldInstance, Objective};
use nfold::oracle::oracle_graver;
use nfold::{
    conformal_decompose, graver_basis, is_indecomposable, lemma2_bound, nfold_graver_bound,
    nfold_partition_params, IntMatrix,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, delta: i64) -> IntMatrix {
    let data = (0..rows * cols)
        .map(|_| rng.gen_range(-delta..=delta))
        .collect();
    IntMatrix::new(rows, cols, data).unwrap()
}

fn small_matrices(seed: u64, count: usize) -> Vec<IntMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let rows = rng.gen_range(1..=3);
            let cols = rng.gen_range(1..=4);
            random_matrix(&mut rng, rows, cols, 2)
        })
        .collect()
}

/// Kernel vectors of `m` with l1-norm in `1..=radius`, in lexicographic order.
fn cycles_up_to(m: &IntMatrix, radius: i64) -> Vec<Vec<i64>> {
    fn walk(m: &IntMatrix, left: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == m.cols() {
            if prefix.iter().any(|x| *x != 0) && m.mul_vec(prefix).unwrap().iter().all(|v| *v == 0)
            {
                out.push(prefix.clone());
            }
            return;
        }
        for v in -left..=left {
            prefix.push(v);
            walk(m, left - v.abs(), prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    walk(m, radius, &mut Vec::new(), &mut out);
    out
}

#[test]
fn graver_basis_agrees_with_the_definition() {
    for (i, m) in small_matrices(21, 120).iter().enumerate() {
        let fast = graver_basis(m, None).unwrap();
        let slow = oracle_graver(m).unwrap();
        assert_eq!(
            fast.elements,
            slow.elements,
            "matrix {i}: {:?}",
            m.to_rows()
        );
    }
}

#[test]
fn graver_norms_respect_the_finest_partition_bound() {
    assert_eq!(lemma2_bound(1, 1), 3);
    assert_eq!(lemma2_bound(2, 1), 25);
    for m in small_matrices(22, 120) {
        let basis = graver_basis(&m, None).unwrap();
        assert!(
            basis.max_norm() <= finest_partition_bound(&m),
            "{:?}",
            m.to_rows()
        );
    }
}

fn random_nfold(rng: &mut ChaCha8Rng) -> NFoldInstance {
    let n = rng.gen_range(1..=2);
    let r = rng.gen_range(1..=2);
    let delta = rng.gen_range(1..=2);
    let bricks: Vec<Brick> = (0..n)
        .map(|_| {
            let t = rng.gen_range(1..=2);
            let s = rng.gen_range(0..=2);
            Brick {
                a: random_matrix(rng, r, t, delta),
                b: random_matrix(rng, s, t, delta),
                b_local: vec![0; s],
                lower: vec![-1; t],
                upper: vec![1; t],
            }
        })
        .collect();
    let width = bricks.iter().map(Brick::width).sum();
    NFoldInstance::new(bricks, vec![0; r], Objective::zero(width)).unwrap()
}

#[test]
fn nfold_graver_elements_respect_the_block_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..60 {
        let inst = random_nfold(&mut rng);
        let params = nfold_partition_params(&inst);
        let bound = nfold_graver_bound(
            params.s_a as u64,
            params.p_a as u64,
            params.p_b as u64,
            inst.delta() as u64,
        );
        let assembled = inst.assemble();
        let basis = oracle_graver(&assembled).unwrap();
        for g in &basis.elements {
            assert!(
                l1_norm(g) <= bound,
                "{g:?} exceeds {bound} for {:?}",
                assembled.to_rows()
            );
        }
    }
}

#[test]
fn cycles_split_into_conformal_graver_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let mut checked = 0;
    for m in small_matrices(25, 120) {
        let cycles = cycles_up_to(&m, 6);
        if cycles.is_empty() {
            continue;
        }
        let basis = graver_basis(&m, None).unwrap();
        for _ in 0..3 {
            let y = &cycles[rng.gen_range(0..cycles.len())];
            let parts = conformal_decompose(&m, y, &basis).unwrap();
            let mut sum = vec![0i64; y.len()];
            for z in &parts {
                assert!(
                    basis.contains(z) && is_indecomposable(&m, z),
                    "{z:?} is not a Graver element"
                );
                assert!(is_conformal(z, y), "{z:?} is not conformal to {y:?}");
                sum.iter_mut().zip(z).for_each(|(s, v)| *s += v);
            }
            assert_eq!(&sum, y);
            checked += 1;
        }
    }
    assert!(checked >= 100, "only {checked} cycles exercised");
}
