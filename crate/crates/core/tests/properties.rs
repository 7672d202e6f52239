mod common;

use common::{e_oracle, eta_oracle};
use eta_cover::arith::int;
use eta_cover::certifier::{certify, Branch, CertConfig};
use eta_cover::eta::{expand_e, expand_eta, reduce_index, EtaProduct};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // E_{g+N} = -E_g falls out of the raw product; the library must agree
    // for any integer index, including large and negative ones
    #[test]
    fn raw_index_matches_oracle(n in 2i64..25, g in -500i64..500) {
        prop_assume!(g.rem_euclid(n) != 0);
        let oracle = e_oracle(g, n, 12);
        let prod = EtaProduct::from_factors(n as u64, "E", [(g, 1)]).unwrap();
        let bound = &oracle.base + int(12);
        prop_assert_eq!(prod.leading_exponent(), oracle.base.clone());
        prop_assert!(oracle.agrees_with(&prod.expand(&bound), &bound));
        let idx = reduce_index(g, n as u64).unwrap();
        let flips = g.div_euclid(n) % 2 != 0;
        prop_assert_eq!(idx.sign < 0, flips);
    }

    #[test]
    fn product_of_two_matches_oracle(n in 3i64..20, g1 in 1i64..40, g2 in 1i64..40) {
        prop_assume!(g1 % n != 0 && g2 % n != 0);
        let oracle = e_oracle(g1, n, 10).mul(&e_oracle(g2, n, 10));
        let prod = EtaProduct::from_factors(n as u64, "E", [(g1, 1), (g2, 1)]).unwrap();
        let bound = &oracle.base + int(10);
        prop_assert!(oracle.agrees_with(&prod.expand(&bound), &bound));
    }

    #[test]
    fn eta_matches_oracle(s in 1i64..12) {
        let oracle = eta_oracle(s, 15);
        let bound = &oracle.base + int(15);
        prop_assert!(oracle.agrees_with(&expand_eta(s as u64, &bound), &bound));
    }
}

#[test]
fn oracle_sees_sign_errors() {
    let bound = e_oracle(1, 7, 1).base + int(5);
    let e = expand_e(1, 7, &bound).unwrap();
    assert!(e_oracle(1, 7, 5).agrees_with(&e, &bound));
    assert!(!e_oracle(8, 7, 5).agrees_with(&e, &bound));
    assert!(e_oracle(8, 7, 5).neg().agrees_with(&e, &bound));
}

#[test]
fn one_prime_per_branch() {
    let cfg = CertConfig { group_samples: 4, ..CertConfig::default() };
    for (p, branch) in [(5, Branch::FChi), (7, Branch::FPsi), (11, Branch::G), (37, Branch::FChi), (43, Branch::FPsi)] {
        let r = certify(p, &cfg).unwrap();
        assert!(r.overall, "{}", r.to_json());
        assert_eq!(r.branch, branch);
        assert_eq!(r.np, (p as u64 - 1) / num_integer::gcd(p as u64 - 1, 12));
        assert_eq!(r.degree, 2 * r.np);
        assert_eq!(r.k * 2 * r.ell, p as u64 - 1);
        let widths: u64 = r.cusps.iter().map(|c| c.width).sum();
        let index = if r.ell == 1 { (p as u64 * p as u64 - 1) / 2 } else { (p as u64 + 1) * r.k };
        assert_eq!(widths, index);
    }
}
