mod common;

use std::collections::BTreeSet;

use common::*;
use fimi::itemset::{support, Itemset, TransactionDb};
use fimi::miners::{apriori, eclat, fpgrowth, generate_rules, mfi_mine, EclatOpts};
use proptest::prelude::*;

fn all_opts() -> Vec<EclatOpts> {
    let mut v = Vec::new();
    for d in [false, true] {
        for o in [false, true] {
            for c in [false, true] {
                v.push(EclatOpts {
                    use_diffsets: d,
                    dynamic_order: o,
                    closure_opt: c,
                });
            }
        }
    }
    v
}

#[test]
fn apriori_golden() {
    let fis = as_map(&apriori(&apriori_db(), 2));
    let level = |k: usize| -> Vec<(Itemset, usize)> {
        fis.iter().filter(|(u, _)| u.len() == k).map(|(u, &s)| (u.clone(), s)).collect()
    };
    assert_eq!(
        level(1),
        vec![([1].into(), 3), ([2].into(), 3), ([3].into(), 2), ([5].into(), 4)]
    );
    assert_eq!(
        level(2),
        vec![([1, 2].into(), 2), ([1, 3].into(), 2), ([1, 5].into(), 3), ([2, 5].into(), 3), ([3, 5].into(), 2)]
    );
    // The printed tables omit {3,5} (tids 2, 4) and hence {1,3,5}.
    assert_eq!(level(3), vec![([1, 2, 5].into(), 2), ([1, 3, 5].into(), 2)]);
    assert_eq!(fis, brute_force(&apriori_db(), 2));
    assert!(level(4).is_empty());
}

#[test]
fn minsup_above_db_is_empty() {
    let db = example15();
    assert!(apriori(&db, 16).is_empty());
    assert!(fpgrowth(&db, 16).is_empty());
    assert!(eclat(&db, 16, EclatOpts::default()).0.is_empty());
}

#[test]
fn example15_has_25_fis() {
    let db = example15();
    let bf = brute_force(&db, 5);
    assert_eq!(bf.len(), 25);
    assert_eq!(as_map(&apriori(&db, 5)), bf);
    assert_eq!(as_map(&fpgrowth(&db, 5)), bf);
    for o in all_opts() {
        assert_eq!(as_map(&eclat(&db, 5, o).0), bf, "{o:?}");
    }
}

#[test]
fn eclat_appendix_db() {
    let db = eclat_db();
    let fis = as_map(&eclat(&db, 2, EclatOpts::default()).0);
    assert_eq!(fis.get(&Itemset::from([1, 2, 3, 4])), Some(&2));
    assert_eq!(fimi::itemset::tidlist(&db, &Itemset::from([1, 2, 3, 4])), vec![1, 6]);
    assert_eq!(fis.get(&Itemset::from([2, 3])), Some(&2));
    assert_eq!(fis.get(&Itemset::from([2, 5])), None);
    assert_eq!(support(&db, &Itemset::from([2, 5])), 1);
}

#[test]
fn fptree_example() {
    let fis = as_map(&fpgrowth(&fptree_db(), 2));
    assert_eq!(fis.get(&Itemset::from([5, 6])), Some(&2));
    assert_eq!(fis, brute_force(&fptree_db(), 2));
}

#[test]
fn single_transaction_all_subsets() {
    let db = TransactionDb::from_rows(vec![vec![2, 4, 7, 9]]);
    let fis = fpgrowth(&db, 1);
    assert_eq!(fis.len(), 15);
    assert!(fis.iter().all(|r| r.support == 1));
}

#[test]
fn mfi_example() {
    let db = example15();
    let roots = db.frequent_items(5);
    let (m, _) = mfi_mine(&db, 5, &roots);
    assert_eq!(m.into_iter().collect::<BTreeSet<_>>(), example15_mfis());
    let (m5, _) = mfi_mine(&db, 5, &[5]);
    assert!(m5.contains(&Itemset::from([5, 6])));
}

#[test]
fn mfi_maximality_random() {
    for seed in 0..60 {
        let db = random_db(seed, 8, 25);
        for minsup in 1..4 {
            let bf = brute_force(&db, minsup);
            let want = maximal(bf.keys().cloned());
            let (got, _) = mfi_mine(&db, minsup, &db.frequent_items(minsup));
            let got: BTreeSet<Itemset> = got.into_iter().collect();
            assert_eq!(got, want, "seed {seed} minsup {minsup}");
            for u in bf.keys() {
                assert!(got.iter().any(|m| u.is_subset_of(m)));
            }
        }
    }
}

#[test]
fn closure_and_order_only_change_work() {
    let db = random_db(11, 10, 40);
    let base = eclat(&db, 3, EclatOpts { use_diffsets: false, dynamic_order: false, closure_opt: false });
    let opt = eclat(&db, 3, EclatOpts::default());
    assert_eq!(as_map(&base.0), as_map(&opt.0));
    assert!(opt.1.intersections <= base.1.intersections);
}

#[test]
fn closure_events_are_sound() {
    let db = example15();
    let (_, st) = eclat(&db, 5, EclatOpts::default());
    for (pre, w) in &st.closures {
        assert_eq!(support(&db, pre), support(&db, &pre.union(w)));
    }
}

#[test]
fn rules_trivial_and_golden() {
    let fis = apriori(&apriori_db(), 2);
    let all = generate_rules(&fis, 0.0).unwrap();
    // Every nonempty proper split of every FI of size >= 2.
    let expected: usize = fis
        .iter()
        .filter(|r| r.itemset.len() >= 2)
        .map(|r| (1usize << r.itemset.len()) - 2)
        .sum();
    assert_eq!(all.len(), expected);
    assert!(generate_rules(&fis, 1.01).unwrap().is_empty());

    let sure = generate_rules(&fis, 1.0).unwrap();
    let has = |a: &[u32], c: &[u32]| {
        sure.iter()
            .any(|r| r.antecedent == Itemset::from(a.to_vec()) && r.consequent == Itemset::from(c.to_vec()))
    };
    assert!(has(&[1, 2], &[5]));
    // Brute force over splits.
    let map = as_map(&fis);
    let mut want = BTreeSet::new();
    for (u, &su) in &map {
        for mask in 1u32..(1 << u.len()) - 1 {
            let v: Itemset = Itemset::from(
                (0..u.len()).filter(|k| mask >> k & 1 == 1).map(|k| u.items()[k]).collect::<Vec<_>>(),
            );
            if su as f64 / map[&v] as f64 >= 1.0 {
                want.insert((v.clone(), u.difference(&v)));
            }
        }
    }
    let got: BTreeSet<_> = sure.iter().map(|r| (r.antecedent.clone(), r.consequent.clone())).collect();
    assert_eq!(got, want);
}

#[test]
fn rules_missing_subset_is_error() {
    let fis = vec![fimi::FiRecord { itemset: Itemset::from([1, 2]), support: 2 }];
    assert!(generate_rules(&fis, 0.5).is_err());
}

#[test]
fn stream_format() {
    let r = fimi::FiRecord { itemset: Itemset::from([1, 3]), support: 7 };
    assert_eq!(r.to_string(), "1 3:7");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn miners_agree(seed in 0u64..1_000_000, minsup in 1usize..5) {
        let db = random_db(seed, 8, 20);
        let bf = brute_force(&db, minsup);
        prop_assert_eq!(&as_map(&apriori(&db, minsup)), &bf);
        prop_assert_eq!(&as_map(&fpgrowth(&db, minsup)), &bf);
        for o in all_opts() {
            prop_assert_eq!(&as_map(&eclat(&db, minsup, o).0), &bf);
        }
    }
}

#[test]
fn fi_listing_round_trip() {
    let fis = apriori(&example15(), 5);
    let text: String = fis.iter().map(|r| format!("{r}\n")).collect();
    let back = fimi::miners::parse_fi_records(&format!("# header\n{text}\n")).unwrap();
    assert_eq!(as_map(&back), as_map(&fis));
    assert!(matches!(fimi::miners::parse_fi_records("1 2:3\n1 x:2\n"), Err(fimi::Error::Parse { line: 2, .. })));
}
