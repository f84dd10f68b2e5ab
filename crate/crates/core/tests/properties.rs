use ::magnum::{derive_counting, magnum, parse_surnat, SetExpr};
use proptest::prelude::*;

fn arith() -> impl Strategy<Value = SetExpr> {
    (1i64..=9).prop_flat_map(|k| (Just(k), 0..k)).prop_map(|(k, r)| SetExpr::arith(k, -r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn display_round_trips(a in arith(), b in arith(), op in 0usize..3) {
        let e = match op {
            0 => a.union(b),
            1 => a.inter(b),
            _ => SetExpr::N.diff(a),
        };
        let back = SetExpr::parse(&e.to_string()).unwrap();
        prop_assert_eq!(back.enumerate(300).unwrap(), e.enumerate(300).unwrap());
    }

    #[test]
    fn counting_form_matches_enumeration(a in arith(), b in arith()) {
        let e = a.union(b);
        let form = derive_counting(&e);
        prop_assume!(form.is_symbolic());
        let xs = e.enumerate(500).unwrap();
        for n in 1..=500i64 {
            let want = xs.iter().filter(|x| **x <= n).count() as i64;
            prop_assert_eq!(form.eval(n), Some(want), "{} at n = {}", e, n);
        }
    }

    #[test]
    fn residue_classes_have_magnum_w_over_k(k in 1i64..=12, r in 0i64..12) {
        let r = r % k;
        let m = magnum(&SetExpr::arith(k, -r)).unwrap();
        prop_assert_eq!(m.value, parse_surnat(&format!("w/{k}")).unwrap());
    }

    #[test]
    fn surnat_render_round_trips(a in -20i64..20, b in 1i64..9, c in -50i64..50) {
        let v = parse_surnat(&format!("{a}*w/{b} + {c}")).unwrap();
        prop_assert_eq!(parse_surnat(&v.to_string()).unwrap(), v);
    }
}

#[test]
fn finite_sets_are_born_on_their_size() {
    let m = magnum(&SetExpr::parse("{2,5,9}").unwrap()).unwrap();
    assert_eq!(m.value, parse_surnat("3").unwrap());
}
