mod common;

use std::collections::BTreeSet;

use common::{board, random_board, Oracle};
use oredango::ilp::{build_model, enumerate_model, export_lp, model_to_coloring, solve_model};
use oredango::{check_coloring, Coloring};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn lp_rows(lp: &str) -> usize {
    let body = lp.split("Subject To\n").nth(1).unwrap_or("");
    let body = body.split("Binaries\n").next().unwrap();
    body.lines().filter(|l| l.starts_with(' ') && !l.starts_with("   ")).count()
}

#[test]
fn fig1_census() {
    let m = build_model(&board("fig1.odg"));
    assert_eq!(m.variables.len(), 13);
    assert_eq!(m.equalities().count(), 4);
    let ranges: Vec<&str> = m.ranges().map(|c| c.name.as_str()).collect();
    assert_eq!(ranges.iter().filter(|n| n.starts_with("tb")).count(), 7);
    assert_eq!(ranges.iter().filter(|n| n.starts_with("tr")).count(), 5);
    assert_eq!(ranges.iter().filter(|n| n.starts_with("tc")).count(), 5);
    assert_eq!(ranges.len(), 17);
    let lp = export_lp(&m);
    assert_eq!(lp_rows(&lp), 38);
    assert!(lp.contains(" tr3_1_lo: x_3_1 + x_3_2 + x_3_4 >= 1\n"), "{lp}");
    assert!(lp.contains(" tr3_1_hi: x_3_1 + x_3_2 + x_3_4 <= 2\n"));
    assert!(lp.contains(" sk2: x_1_4 + x_2_3 + x_3_4 + x_4_3 + x_4_2 + x_3_1 = 4\n"));
    assert!(lp.starts_with("\\ Oredango 0-1 model\nMinimize\n obj:"));
    assert!(lp.ends_with("End\n"));
}

#[test]
fn fig1_feasible_set_is_the_solution_set() {
    let b = board("fig1.odg");
    let m = build_model(&b);
    let got: BTreeSet<Coloring> = enumerate_model(&m).iter().map(|a| model_to_coloring(&m, a, &b).unwrap()).collect();
    assert_eq!(got, Oracle::new(&b).solution_set());
    let one = model_to_coloring(&m, &solve_model(&m).unwrap(), &b).unwrap();
    assert!(check_coloring(&b, &one).unwrap().is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn model_feasibility_matches_checker(seed in any::<u64>(), mask in any::<u32>()) {
        let b = random_board(&mut ChaCha8Rng::seed_from_u64(seed), 16).build();
        let m = build_model(&b);
        let oracle = Oracle::new(&b);
        let mask = mask & ((1u64 << oracle.cells.len()) - 1) as u32;
        let col = oracle.to_coloring(mask);
        let bits: Vec<bool> = m.variables.iter().map(|v| col.get(v.cell).unwrap().is_black()).collect();
        prop_assert_eq!(m.is_feasible(&bits), check_coloring(&b, &col).unwrap().is_empty());
        prop_assert_eq!(model_to_coloring(&m, &bits, &b).unwrap(), col);
    }

    #[test]
    fn lp_export_is_injective_on_models(s1 in any::<u64>(), s2 in any::<u64>()) {
        let b1 = random_board(&mut ChaCha8Rng::seed_from_u64(s1), 16).build();
        let b2 = random_board(&mut ChaCha8Rng::seed_from_u64(s2), 16).build();
        let (m1, m2) = (build_model(&b1), build_model(&b2));
        prop_assert_eq!(m1 == m2, export_lp(&m1) == export_lp(&m2));
    }

    #[test]
    fn lp_row_count_follows_the_census(seed in any::<u64>()) {
        let b = random_board(&mut ChaCha8Rng::seed_from_u64(seed), 25).build();
        let m = build_model(&b);
        let lp = export_lp(&m);
        prop_assert_eq!(lp_rows(&lp), m.equalities().count() + 2 * m.ranges().count());
        let idx = oredango::TripleIndex::new(&b);
        let family = |p: &str| m.ranges().filter(|c| c.name.starts_with(p)).count();
        let path_windows: usize = b.skewers().iter().map(|s| s.size().saturating_sub(2)).sum();
        prop_assert_eq!(family("tb"), path_windows);
        prop_assert_eq!(family("tr"), idx.row_triples.iter().map(Vec::len).sum::<usize>());
        prop_assert_eq!(family("tc"), idx.col_triples.iter().map(Vec::len).sum::<usize>());
        let clued = (0..b.skewers().len()).filter(|&s| b.skewer_clue(s).is_some()).count();
        prop_assert_eq!(m.equalities().count(), clued);
        let names: BTreeSet<&str> = m.constraints.iter().map(|c| c.name.as_str()).collect();
        prop_assert_eq!(names.len(), m.constraints.len());
    }
}
