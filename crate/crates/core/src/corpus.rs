//! Small formula and block-structure corpora for exhaustive checks, plus a
//! seeded random DNF generator.
//!
//! Canonical form: literals sorted by variable, no variable twice in a term,
//! and terms listed in strictly increasing order of [`all_terms`].

use rand::seq::index::sample;
use rand::Rng;

use crate::formula::{BlockStructure, Dnf, Literal, PhpInstance, Term, VarId};

/// Every term of width `1..=r` over `n` variables, by width, then variable
/// set, then sign pattern (positive first).
pub fn all_terms(n: usize, r: usize) -> Vec<Term> {
    let mut out = Vec::new();
    for w in 1..=r.min(n) {
        for vars in combinations(n, w) {
            for signs in 0..(1u32 << w) {
                let lits = vars
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| Literal {
                        var: VarId(v),
                        positive: signs & (1 << (w - 1 - i)) == 0,
                    })
                    .collect();
                out.push(Term::new(lits).expect("distinct variables"));
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            go(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All canonical DNFs with at most `max_terms` terms, the empty one included.
pub fn canonical_dnfs(n: usize, r: usize, max_terms: usize) -> Vec<Dnf> {
    let terms = all_terms(n, r);
    let mut out = Vec::new();
    for k in 0..=max_terms.min(terms.len()) {
        for idx in combinations(terms.len(), k) {
            let ts = idx.iter().map(|&i| terms[i].clone()).collect();
            out.push(Dnf::new(n, r, ts).expect("terms fit"));
        }
    }
    out
}

/// A canonical DNF with `k` distinct terms drawn uniformly from [`all_terms`].
pub fn random_dnf<R: Rng + ?Sized>(n: usize, r: usize, k: usize, rng: &mut R) -> Dnf {
    let terms = all_terms(n, r);
    let mut idx = sample(rng, terms.len(), k.min(terms.len())).into_vec();
    idx.sort_unstable();
    Dnf::new(n, r, idx.into_iter().map(|i| terms[i].clone()).collect()).expect("terms fit")
}

/// Every partition of `0..n` into blocks of size at most `max_size`, in
/// every internal order.
pub fn block_structures(n: usize, max_size: usize) -> Vec<BlockStructure> {
    fn go(rest: Vec<usize>, max: usize, cur: &mut Vec<Vec<VarId>>, out: &mut Vec<Vec<Vec<VarId>>>) {
        let Some((&first, others)) = rest.split_first() else {
            out.push(cur.clone());
            return;
        };
        for k in 0..max.min(others.len() + 1) {
            for pick in combinations(others.len(), k) {
                let mut block: Vec<usize> = vec![first];
                block.extend(pick.iter().map(|&i| others[i]));
                let remaining: Vec<usize> = others
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !pick.contains(i))
                    .map(|(_, &v)| v)
                    .collect();
                for order in permutations(&block) {
                    cur.push(order.into_iter().map(VarId).collect());
                    go(remaining.clone(), max, cur, out);
                    cur.pop();
                }
            }
        }
    }
    let mut raw = Vec::new();
    go((0..n).collect(), max_size, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .map(|b| BlockStructure::new(n, b).expect("partition"))
        .collect()
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Independent-restriction corpus: `n <= 3`, `r` in `{1, 2}`, at most three terms.
pub fn indep_corpus() -> Vec<Dnf> {
    let mut out = Vec::new();
    for n in 1..=3 {
        for r in 1..=2 {
            out.extend(canonical_dnfs(n, r, 3));
        }
    }
    out
}

/// Block corpus: `n <= 4`, blocks of size at most 2, `r = 2`; at most three
/// terms for `n <= 3` and two for `n = 4`.
pub fn block_corpus() -> Vec<(BlockStructure, Vec<Dnf>)> {
    let mut out = Vec::new();
    for n in 1..=4 {
        let dnfs = canonical_dnfs(n, 2, if n <= 3 { 3 } else { 2 });
        for b in block_structures(n, 2) {
            out.push((b, dnfs.clone()));
        }
    }
    out
}

/// Pigeonhole corpus over `p_xy` with `r <= 2`: every canonical DNF of up to
/// three terms at `n = 1`, two terms at `n = 2`; at `n = 3` every single-term
/// DNF plus `random` seeded DNFs of two or three terms.
pub fn php_corpus<R: Rng + ?Sized>(random: usize, rng: &mut R) -> Vec<(PhpInstance, Dnf)> {
    let mut out = Vec::new();
    for (n, k) in [(1, 3), (2, 2)] {
        let inst = PhpInstance::new(n);
        out.extend(canonical_dnfs(inst.num_vars(), 2, k).into_iter().map(|f| (inst, f)));
    }
    let inst = PhpInstance::new(3);
    out.extend(canonical_dnfs(inst.num_vars(), 2, 1).into_iter().map(|f| (inst, f)));
    for _ in 0..random {
        let k = rng.gen_range(2..=3);
        out.push((inst, random_dnf(inst.num_vars(), 2, k, rng)));
    }
    out
}
