//! Per-window counts X_A(n) = |A ∩ R_n| and their prefix sums K_A(n).

use rayon::prelude::*;

use crate::magnum::RefContext;
use crate::setexpr::SetExpr;

pub fn window_counts(a: &SetExpr, ctx: &RefContext, count: usize) -> (Vec<u64>, Vec<u64>) {
    let wins = ctx.windows(count);
    let x: Vec<u64> = wins.par_iter().map(|w| w.iter().filter(|e| ctx.member(a, e)).count() as u64).collect();
    let k = x
        .iter()
        .scan(0u64, |acc, v| {
            *acc += v;
            Some(*acc)
        })
        .collect();
    (x, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubleton_windows_hold_one_natural() {
        let (x, _) = window_counts(&SetExpr::N, &RefContext::doubleton_half_n(), 50);
        assert!(x.iter().all(|&v| v == 1));
    }

    #[test]
    fn first_band_counts_farey_terms() {
        let ctx = RefContext::square_q();
        let (_, k) = window_counts(&SetExpr::Band(1), &ctx, 40);
        for (i, v) in k.iter().enumerate() {
            assert_eq!(*v, crate::counting::totient_sum(i as u64 + 1));
        }
        let (_, k0) = window_counts(&SetExpr::N, &ctx, 0);
        assert!(k0.is_empty());
    }
}
