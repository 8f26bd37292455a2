use multicut::twosat::{almost2sat_vars, sat2_solve, var_to_clause_reduce, Clause, Lit, TwoCnf};
use proptest::prelude::*;

fn lit() -> impl Strategy<Value = (usize, bool)> {
    (0usize..64, any::<bool>())
}

fn formula(max_vars: usize, max_clauses: usize) -> impl Strategy<Value = TwoCnf> {
    (
        1..=max_vars,
        proptest::collection::vec((lit(), proptest::option::of(lit())), 0..=max_clauses),
    )
        .prop_map(|(n, raw)| {
            let mk = |(v, pos): (usize, bool)| Lit {
                var: v % n,
                positive: pos,
            };
            let mut f = TwoCnf::new(n);
            for (a, b) in raw {
                f.push(match b {
                    None => Clause::unit(mk(a)),
                    Some(b) => Clause::pair(mk(a), mk(b)),
                });
            }
            f
        })
}

fn satisfiable(f: &TwoCnf) -> bool {
    (0u32..1 << f.var_count).any(|mask| {
        let a: Vec<bool> = (0..f.var_count).map(|i| mask >> i & 1 == 1).collect();
        f.satisfied_by(&a)
    })
}

/// Smallest deletion size by trying every variable subset.
fn min_deletion(f: &TwoCnf) -> usize {
    (0u32..1 << f.var_count)
        .filter(|mask| {
            let vars: Vec<usize> = (0..f.var_count).filter(|i| mask >> i & 1 == 1).collect();
            satisfiable(&f.without_vars(&vars))
        })
        .map(|mask| mask.count_ones() as usize)
        .min()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn solver_agrees_with_exhaustive_search(f in formula(12, 24)) {
        match sat2_solve(&f) {
            Ok(a) => prop_assert!(f.satisfied_by(&a)),
            Err(c) => {
                prop_assert!(!satisfiable(&f));
                prop_assert!(c.var < f.var_count);
                let mut core = TwoCnf::new(f.var_count);
                for &i in &c.cycle {
                    core.push(f.clauses[i]);
                }
                prop_assert!(!satisfiable(&core), "cycle clauses {:?} are satisfiable", c.cycle);
            }
        }
    }

    #[test]
    fn deletion_size_is_optimal(f in formula(8, 12), slack in 0usize..=2) {
        let m = min_deletion(&f);
        let got = almost2sat_vars(&f, m + slack);
        prop_assert_eq!(got.as_ref().map(Vec::len), Some(m));
        prop_assert!(sat2_solve(&f.without_vars(&got.unwrap())).is_ok());
        if m > 0 {
            prop_assert_eq!(almost2sat_vars(&f, m - 1), None);
        }
    }

    #[test]
    fn special_clauses_carry_every_conflict(f in formula(8, 16)) {
        let r = var_to_clause_reduce(&f);
        prop_assert_eq!(r.formula.var_count, 2 * f.var_count);
        let mut rest = TwoCnf::new(r.formula.var_count);
        for (i, c) in r.formula.clauses.iter().enumerate() {
            if r.is_special(i) {
                prop_assert_eq!(*c, Clause::pair(Lit::neg(r.var_map(i).0), Lit::neg(r.var_map(i).1)));
            } else {
                prop_assert!(c.lits().all(|l| l.positive));
                rest.push(*c);
            }
        }
        prop_assert!(sat2_solve(&rest).is_ok());
        if let Err(c) = sat2_solve(&r.formula) {
            prop_assert!(c.cycle.iter().any(|&i| r.is_special(i)));
        }
    }
}

#[test]
fn translation_examples() {
    let mut f = TwoCnf::new(3);
    f.push(Clause::pair(Lit::pos(0), Lit::neg(1)));
    f.push(Clause::unit(Lit::pos(2)));
    let r = var_to_clause_reduce(&f);
    let translated = &r.formula.clauses[3..];
    assert_eq!(translated[0], Clause::pair(Lit::pos(1), Lit::pos(2)));
    assert_eq!(translated[1], Clause::unit(Lit::pos(5)));
}
