use omem_core::solver::*;
use omem_core::union_product::*;
use omem_core::completeness::is_k_wise_eps_complete;
use omem_core::zoo;

fn main() {
    let b1 = zoo::two_a_io();
    let b2 = zoo::two_b_io();
    let (k1, c1) = compute_memory(&b1, &SolverOptions::default()).unwrap();
    let (k2, c2) = compute_memory(&b2, &SolverOptions::default()).unwrap();
    let (a1, _, p1) = build_blowup(&b1, k1, &c1.routing).unwrap();
    let a1eps = canonical_completion(&a1, &p1, &c1.signatures).unwrap();
    let (a2, _, p2) = build_blowup(&b2, k2, &c2.routing).unwrap();
    let a2eps = canonical_completion(&a2, &p2, &c2.signatures).unwrap();
    let (a2z, a2zeps, p2z, _rep) = zero_free_transform(&a2, &a2eps, &p2).unwrap();
    let uc = union_completion(&a1, &a1eps, &p1, &a2z, &a2zeps, &p2z).unwrap();
    let comp = is_k_wise_eps_complete(&uc.completion, &uc.partition).unwrap();
    let selfs = comp.violations.iter().filter(|v| v.q == v.q2).count();
    let others = comp.violations.len() - selfs;
    eprintln!("violations: {} self, {} non-self", selfs, others);
    use std::collections::BTreeMap;
    let mut by_x: BTreeMap<u32, usize> = BTreeMap::new();
    for v in &comp.violations { *by_x.entry(v.x).or_default() += 1; }
    eprintln!("by level: {by_x:?}");
    for v in comp.violations.iter().filter(|v| v.q != v.q2).take(4) {
        eprintln!("  sample non-self: x={} {} vs {}", v.x, uc.completion.states[v.q], uc.completion.states[v.q2]);
    }
}
