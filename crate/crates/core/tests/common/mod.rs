//! Generators and property checks shared by the property suite and the
//! acceptance harness.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use itertools::Itertools;
use num_traits::One;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use polyprod_core::graph_assoc::Graph;
use polyprod_core::hochster::bigraded_betti_table;
use polyprod_core::koszul::{differential, multiply, KoszulCochain, KoszulMonomial};
use polyprod_core::linalg::{rat, Rational};
use polyprod_core::massey::{
    build_defining_system_with, canonical_wedge_input, massey_value, strict_conditions_check, BuildOutcome, SystemOptions,
};
use polyprod_core::multiwedge::{j_construction, WedgeVector};
use polyprod_core::real_dga::{real_differential, real_multiply, RealCochain, RealMonomial};
use polyprod_core::{SimplicialComplex, VertexSet};

pub fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

/// Complexes on `1..=max_m` vertices from up to five random non-faces.
pub fn arb_complex(max_m: usize) -> impl Strategy<Value = SimplicialComplex> {
    (1..=max_m).prop_flat_map(|m| {
        let full = (1u64 << m) - 1;
        prop::collection::vec(1..=full, 0..6).prop_map(move |masks| {
            let sets = masks.into_iter().map(VertexSet::from_bits).filter(|s| s.len() >= 2);
            SimplicialComplex::from_minimal_nonfaces(m, sets).expect("valid non-faces")
        })
    })
}

pub fn koszul_monomials(k: &SimplicialComplex) -> Vec<KoszulMonomial> {
    let all = k.vertices();
    let mut out = Vec::new();
    for tau in all.all_subsets().filter(|t| k.is_face(*t)) {
        for sigma in all.difference(tau).all_subsets() {
            out.push(KoszulMonomial::new(sigma, tau));
        }
    }
    out
}

pub fn real_monomials(k: &SimplicialComplex) -> Vec<RealMonomial> {
    let all = k.vertices();
    let mut out = Vec::new();
    for sigma in all.all_subsets().filter(|s| k.is_face(*s)) {
        for tau in all.difference(sigma).all_subsets() {
            out.push(RealMonomial { sigma, tau });
        }
    }
    out
}

/// A complex with random picks `(index, coefficient)` into its monomial list.
fn arb_complex_with_picks(max_m: usize, picks: usize) -> impl Strategy<Value = (SimplicialComplex, Vec<(usize, i64)>)> {
    arb_complex(max_m).prop_flat_map(move |k| {
        (Just(k), prop::collection::vec((any::<usize>(), -4i64..=4), 1..=picks))
    })
}

fn koszul_from(k: &Arc<SimplicialComplex>, monos: &[KoszulMonomial], picks: &[(usize, i64)]) -> KoszulCochain {
    KoszulCochain::from_terms(k, picks.iter().map(|&(i, c)| (monos[i % monos.len()], rat(c)))).expect("valid terms")
}

fn real_from(k: &Arc<SimplicialComplex>, monos: &[RealMonomial], picks: &[(usize, i64)]) -> RealCochain {
    RealCochain::from_terms(k, picks.iter().map(|&(i, c)| (monos[i % monos.len()], rat(c)))).expect("valid terms")
}

fn sign(p: usize) -> Rational {
    if p.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

/// `d ∘ d = 0` in both cochain algebras.
pub fn check_d_squared(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&arb_complex_with_picks(6, 6), |(k, picks)| {
            let k = Arc::new(k);
            let c = koszul_from(&k, &koszul_monomials(&k), &picks);
            prop_assert!(differential(&differential(&c)).is_zero(), "d d ({c}) != 0");
            let r = real_from(&k, &real_monomials(&k), &picks);
            prop_assert!(real_differential(&real_differential(&r)).is_zero());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// `d(ab) = d(a) b + (-1)^|a| a d(b)` on monomials.
pub fn check_leibniz(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&arb_complex_with_picks(5, 2), |(k, picks)| {
            let k = Arc::new(k);
            let monos = koszul_monomials(&k);
            let a = koszul_from(&k, &monos, &picks[..1]);
            let b = koszul_from(&k, &monos, &picks[picks.len() - 1..]);
            let deg = a.degree().unwrap_or(0);
            let lhs = differential(&multiply(&a, &b).map_err(|e| fail(e.to_string()))?);
            let rhs = multiply(&differential(&a), &b)
                .and_then(|x| x.add(&multiply(&a, &differential(&b))?.scale(&sign(deg))))
                .map_err(|e| fail(e.to_string()))?;
            prop_assert_eq!(lhs.terms(), rhs.terms());

            let rmonos = real_monomials(&k);
            let a = real_from(&k, &rmonos, &picks[..1]);
            let b = real_from(&k, &rmonos, &picks[picks.len() - 1..]);
            let deg = a.terms().keys().next().map_or(0, |m| m.degree());
            let lhs = real_differential(&real_multiply(&a, &b).map_err(|e| fail(e.to_string()))?);
            let rhs = real_multiply(&real_differential(&a), &b)
                .and_then(|x| x.add(&real_multiply(&a, &real_differential(&b))?.scale(&sign(deg))))
                .map_err(|e| fail(e.to_string()))?;
            prop_assert_eq!(lhs.terms(), rhs.terms());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// `ab = (-1)^{|a||b|} ba` on monomials of `R(K)`. The real model is not
/// commutative on cochains (`u_i t_i = u_i`, `t_i u_i = 0`).
pub fn check_graded_commutativity(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&arb_complex_with_picks(5, 2), |(k, picks)| {
            let k = Arc::new(k);
            let monos = koszul_monomials(&k);
            let a = koszul_from(&k, &monos, &picks[..1]);
            let b = koszul_from(&k, &monos, &picks[picks.len() - 1..]);
            let (da, db) = (a.degree().unwrap_or(0), b.degree().unwrap_or(0));
            let ab = multiply(&a, &b).map_err(|e| fail(e.to_string()))?;
            let ba = multiply(&b, &a).map_err(|e| fail(e.to_string()))?;
            let flipped = ba.scale(&sign(da * db));
            prop_assert_eq!(ab.terms(), flipped.terms());

            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn arb_heads() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..=2, 2..=3)
}

/// Every built system satisfies `d c_{ij} = Σ c̄_{ip} c_{pj}` exactly, and its value is a cocycle.
pub fn check_residuals(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(arb_heads(), any::<u64>()), |(heads, seed)| {
            let (alg, input) = canonical_wedge_input(&heads).map_err(|e| fail(e.to_string()))?;
            let options = SystemOptions { perturbation_seed: Some(seed) };
            let BuildOutcome::Built(system) = build_defining_system_with(&alg, &input, options).map_err(|e| fail(e.to_string()))?
            else {
                return Err(fail(format!("no system for heads {heads:?}")));
            };
            for (cell, r) in system.residuals(&alg).map_err(|e| fail(e.to_string()))? {
                prop_assert!(r.is_zero(), "residual at {cell:?}: {r}");
            }
            prop_assert!(system.relations_hold(&alg).map_err(|e| fail(e.to_string()))?);
            massey_value(&alg, &input, &system).map_err(|e| fail(e.to_string()))?;
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Inputs meeting the strictness conditions give one value for every seed.
pub fn check_seeded_determinism(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(prop::collection::vec(1usize..=2, 3), any::<u64>(), any::<u64>()), |(heads, s1, s2)| {
            let (alg, input) = canonical_wedge_input(&heads).map_err(|e| fail(e.to_string()))?;
            let table = strict_conditions_check(&alg, &input).map_err(|e| fail(e.to_string()))?;
            prop_assume!(table.guarantees_strict);
            let value = |seed: Option<u64>| -> Result<_, TestCaseError> {
                match build_defining_system_with(&alg, &input, SystemOptions { perturbation_seed: seed }) {
                    Ok(BuildOutcome::Built(system)) => {
                        let v = massey_value(&alg, &input, &system).map_err(|e| fail(e.to_string()))?;
                        let cells: Vec<_> = system.cells().iter().map(|(c, x)| (*c, x.terms().clone())).collect();
                        Ok((cells, v))
                    }
                    other => Err(fail(format!("build failed: {other:?}"))),
                }
            };
            let (cells_a, a) = value(Some(s1))?;
            let (cells_b, _) = value(Some(s1))?;
            let (_, b) = value(Some(s2))?;
            let (_, base) = value(None)?;
            prop_assert_eq!(cells_a, cells_b);
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(&a, &base);
            prop_assert!(!a.is_zero());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn convolve(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn arb_wedge(m: usize) -> impl Strategy<Value = WedgeVector> {
    prop::collection::vec(1usize..=2, m).prop_map(|v| WedgeVector::new(v).expect("positive entries"))
}

/// Poincaré series multiply under joins; J-constructions compose.
pub fn check_join_and_multiwedge(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(arb_complex(3), arb_complex(3)), |(k, l)| {
            let joined = k.join(&l).map_err(|e| fail(e.to_string()))?;
            let pk = bigraded_betti_table(&k).map_err(|e| fail(e.to_string()))?.zk_poincare;
            let pl = bigraded_betti_table(&l).map_err(|e| fail(e.to_string()))?.zk_poincare;
            let pj = bigraded_betti_table(&joined).map_err(|e| fail(e.to_string()))?.zk_poincare;
            prop_assert_eq!(pj, convolve(&pk, &pl));
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    let composite = arb_complex(4).prop_flat_map(|k| {
        let m = k.m();
        (Just(k), arb_wedge(m)).prop_flat_map(|(k, j1)| {
            let total = j1.total();
            (Just(k), Just(j1), arb_wedge(total))
        })
    });
    runner(cases)
        .run(&composite, |(k, j1, j2)| {
            let step = j_construction(&j_construction(&k, &j1).map_err(|e| fail(e.to_string()))?, &j2)
                .map_err(|e| fail(e.to_string()))?;
            let direct = j_construction(&k, &j1.compose(&j2).map_err(|e| fail(e.to_string()))?)
                .map_err(|e| fail(e.to_string()))?;
            prop_assert_eq!(step.minimal_nonfaces(), direct.minimal_nonfaces());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Isomorphism of complexes by brute force over vertex permutations.
pub fn isomorphic(a: &SimplicialComplex, b: &SimplicialComplex) -> bool {
    if a.m() != b.m() || a.minimal_nonfaces().len() != b.minimal_nonfaces().len() {
        return false;
    }
    let target: BTreeSet<VertexSet> = b.minimal_nonfaces().iter().copied().collect();
    (1..=a.m()).permutations(a.m()).any(|p| {
        a.minimal_nonfaces().iter().all(|s| target.contains(&s.iter().map(|v| p[v - 1]).collect()))
    })
}

/// One representative per isomorphism class of connected graphs on `n` vertices.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (1..=n).tuple_combinations().collect();
    let mut seen: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        let g = Graph::new(n, &edges).expect("simple graph");
        if g.components().len() != 1 {
            continue;
        }
        let canonical = (1..=n)
            .permutations(n)
            .map(|p| {
                let mut e: Vec<(usize, usize)> =
                    edges.iter().map(|&(a, b)| (p[a - 1].min(p[b - 1]), p[a - 1].max(p[b - 1]))).collect();
                e.sort();
                e
            })
            .min()
            .expect("at least one permutation");
        if seen.insert(canonical) {
            out.push(g);
        }
    }
    out
}

/// `Σ_{|J| = j} rank H̃^{j-i-1}(K_J)`, keyed `(i, j)`, straight from homology of full subcomplexes.
pub fn hochster_oracle(k: &SimplicialComplex) -> std::collections::BTreeMap<(usize, usize), usize> {
    let mut out = std::collections::BTreeMap::new();
    for j in k.vertices().all_subsets() {
        let profile = polyprod_core::homology::reduced_cohomology_within(k, j);
        for i in 0..=j.len() {
            let rank = profile.rank(j.len() as i64 - i as i64 - 1);
            if rank > 0 {
                *out.entry((i, j.len())).or_insert(0) += rank;
            }
        }
    }
    out
}

/// `rank H^p(R_K) = Σ_J rank H̃^{p-1}(K_J)`.
pub fn real_oracle(k: &SimplicialComplex) -> Vec<usize> {
    let mut out = vec![0; k.m() + 1];
    for j in k.vertices().all_subsets() {
        let profile = polyprod_core::homology::reduced_cohomology_within(k, j);
        for (p, slot) in out.iter_mut().enumerate() {
            *slot += profile.rank(p as i64 - 1);
        }
    }
    while out.len() > 1 && out.last() == Some(&0) {
        out.pop();
    }
    out
}

pub fn trim(mut v: Vec<usize>) -> Vec<usize> {
    while v.len() > 1 && v.last() == Some(&0) {
        v.pop();
    }
    v
}
