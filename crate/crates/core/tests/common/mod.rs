#![allow(dead_code)]

//! Shared generators for the integration suites: families of racks and
//! randomized labelled diagrams driven by the move engine.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use rackkit_core::cobordism::{enumerate_moves, LabelledDiagram, Move, MoveOptions};
use rackkit_core::rack::{check_rack_axioms, Rack};

/// The multiplication table of the symmetric group on three letters.
pub fn s3_multiplication() -> Vec<Vec<usize>> {
    let elems: Vec<Vec<usize>> = vec![
        vec![0, 1, 2],
        vec![0, 2, 1],
        vec![1, 0, 2],
        vec![1, 2, 0],
        vec![2, 0, 1],
        vec![2, 1, 0],
    ];
    let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { (0..3).map(|x| q[p[x]]).collect() };
    elems
        .iter()
        .map(|p| {
            elems
                .iter()
                .map(|q| elems.iter().position(|r| *r == compose(p, q)).unwrap())
                .collect()
        })
        .collect()
}

/// The twisted affine rack `a^b = t*a + (1-t)*b (mod n)` for t invertible.
pub fn alexander_rack(n: usize, t: usize) -> Option<Rack> {
    let one_minus_t = (n + 1 - (t % n)) % n;
    let table: Vec<Vec<usize>> =
        (0..n).map(|a| (0..n).map(|b| (t * a + one_minus_t * b) % n).collect()).collect();
    Rack::from_table(table).ok()
}

/// The product rack on pairs, componentwise.
pub fn product_rack(x: &Rack, y: &Rack) -> Rack {
    let (nx, ny) = (x.size(), y.size());
    let n = nx * ny;
    let table = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let (a1, a2) = (a / ny, a % ny);
                    let (b1, b2) = (b / ny, b % ny);
                    x.op(a1, b1) * ny + y.op(a2, b2)
                })
                .collect()
        })
        .collect();
    Rack::from_table(table).expect("product of racks is a rack")
}

/// A reproducible mixed family of valid racks with at most `max_size`
/// elements.
pub fn sample_racks(max_size: usize, count: usize, seed: u64) -> Vec<Rack> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let kind = rng.gen_range(0..7);
        let rack = match kind {
            6 if max_size >= 6 => Rack::conjugation(&s3_multiplication()).unwrap(),
            6 => continue,
            0 => Rack::trivial(rng.gen_range(1..=max_size)).unwrap(),
            1 => Rack::dihedral(rng.gen_range(1..=max_size)).unwrap(),
            2 => Rack::cyclic(rng.gen_range(1..=max_size)).unwrap(),
            3 => {
                let n = rng.gen_range(1..=max_size);
                let mut rho: Vec<usize> = (0..n).collect();
                rho.shuffle(&mut rng);
                Rack::permutation(&rho).unwrap()
            }
            4 => {
                let n = rng.gen_range(2..=max_size);
                let units: Vec<usize> =
                    (1..n).filter(|t| num_gcd(*t, n) == 1).collect();
                let t = units[rng.gen_range(0..units.len())];
                match alexander_rack(n, t) {
                    Some(r) => r,
                    None => continue,
                }
            }
            _ => {
                let a = rng.gen_range(1..=3usize);
                let b = rng.gen_range(1..=(max_size / a).max(1));
                if a * b > max_size || a * b == 0 {
                    continue;
                }
                let x = Rack::dihedral(a).unwrap();
                let y = Rack::cyclic(b).unwrap();
                product_rack(&x, &y)
            }
        };
        assert!(check_rack_axioms(rack.table()).is_ok());
        out.push(rack);
    }
    out
}

fn num_gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

/// Every rack on `0..n`, by brute force over column permutations with
/// pruning by the conjugation constraint
/// `sigma_c . sigma_b = sigma_{sigma_c(b)} . sigma_c`.
pub fn all_racks_of_size(n: usize) -> Vec<Rack> {
    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        let mut items: Vec<usize> = (0..n).collect();
        heap_permutations(&mut items, n, &mut out);
        out.sort();
        out
    }
    fn heap_permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap_permutations(items, k - 1, out);
            if k % 2 == 0 {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    let perms = permutations(n);
    let mut columns: Vec<usize> = Vec::new(); // indices into perms
    let mut found = Vec::new();

    fn consistent(perms: &[Vec<usize>], columns: &[usize], n: usize) -> bool {
        let assigned = columns.len();
        for c in 0..assigned {
            for b in 0..assigned {
                let sc = &perms[columns[c]];
                let sb = &perms[columns[b]];
                let target = sc[b];
                if target < assigned {
                    let st = &perms[columns[target]];
                    // sigma_c(sigma_b(a)) == sigma_target(sigma_c(a)) for all a
                    if (0..n).any(|a| sc[sb[a]] != st[sc[a]]) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn search(
        perms: &[Vec<usize>],
        columns: &mut Vec<usize>,
        n: usize,
        found: &mut Vec<Rack>,
    ) {
        if columns.len() == n {
            let table: Vec<Vec<usize>> =
                (0..n).map(|a| (0..n).map(|b| perms[columns[b]][a]).collect()).collect();
            if let Ok(rack) = Rack::from_table(table) {
                found.push(rack);
            }
            return;
        }
        for p in 0..perms.len() {
            columns.push(p);
            if consistent(perms, columns, n) {
                search(perms, columns, n, found);
            }
            columns.pop();
        }
    }

    search(&perms, &mut columns, n, &mut found);
    found
}

/// Grows a labelled diagram from the empty one by random non-shrinking
/// moves until it carries roughly `target` real crossings.
pub fn random_labelled_diagram(
    rack: &Rack,
    rng: &mut ChaCha8Rng,
    target: usize,
) -> LabelledDiagram {
    let mut ld = LabelledDiagram::empty(rack.clone());
    let opts = MoveOptions { allowed_labels: None, max_crossings: Some(target) };
    for _ in 0..40 {
        if ld.diagram().real_crossing_count() >= target {
            break;
        }
        let moves: Vec<Move> = enumerate_moves(&ld, &opts)
            .into_iter()
            .filter(|m| {
                matches!(
                    m,
                    Move::Birth { .. }
                        | Move::Bridge { .. }
                        | Move::R2Plus { .. }
                        | Move::R11Plus { .. }
                )
            })
            .collect();
        if moves.is_empty() {
            break;
        }
        let mv = &moves[rng.gen_range(0..moves.len())];
        if let Ok(next) = ld.apply_move(mv) {
            ld = next;
        }
    }
    ld
}

/// Picks a random applicable move, sampling first by kind so shrinking
/// moves are exercised despite the growing moves dominating by count.
pub fn random_move(
    ld: &LabelledDiagram,
    rng: &mut ChaCha8Rng,
    opts: &MoveOptions,
) -> Option<Move> {
    let moves = enumerate_moves(ld, opts);
    if moves.is_empty() {
        return None;
    }
    let kind_of = |m: &Move| -> usize {
        match m {
            Move::Birth { .. } => 0,
            Move::Death { .. } => 1,
            Move::Bridge { .. } => 2,
            Move::R2Plus { .. } => 3,
            Move::R2Minus { .. } => 4,
            Move::R3 { .. } => 5,
            Move::R11Plus { .. } => 6,
            Move::R11Minus { .. } => 7,
        }
    };
    let mut kinds: Vec<usize> = moves.iter().map(kind_of).collect();
    kinds.sort();
    kinds.dedup();
    let kind = kinds[rng.gen_range(0..kinds.len())];
    let of_kind: Vec<&Move> = moves.iter().filter(|m| kind_of(m) == kind).collect();
    Some(of_kind[rng.gen_range(0..of_kind.len())].clone())
}
