use lpgroupoid::conv::{convolve, i_norm, involution, AlgElem};
use lpgroupoid::gpd::{
    groupoid_isomorphic, is_isomorphism, Groupoid, GroupoidDoc, DEFAULT_SEARCH_BUDGET,
};
use lpgroupoid::lprep::{fp_norm, sym_norm, PNorm, SolverConfig};
use lpgroupoid::recon::{builtin, reconstruct, ReconOptions, Status};
use lpgroupoid::sample::stream_rng;
use lpgroupoid::structure::NormKind;
use lpgroupoid::Complex64;
use proptest::prelude::*;
use rand::seq::SliceRandom;

const NAMES: [&str; 6] = [
    "cyclic:3",
    "klein",
    "symmetric:3",
    "pair:3",
    "swap-action",
    "union:cyclic:2+pair:2",
];

fn element(g: &Groupoid, raw: &[(f64, f64)]) -> AlgElem {
    AlgElem::from_coeffs(
        g.arrows()
            .map(|x| {
                let (re, im) = raw[x % raw.len()];
                Complex64::new(re, im)
            })
            .collect(),
    )
}

fn coeffs() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn convolution_is_associative_and_involution_reverses(
        k in 0..NAMES.len(), a in coeffs(), b in coeffs(), c in coeffs(),
    ) {
        let g = builtin(NAMES[k]).unwrap();
        let (a, b, c) = (element(&g, &a), element(&g, &b), element(&g, &c));
        let left = convolve(&g, &convolve(&g, &a, &b).unwrap(), &c).unwrap();
        let right = convolve(&g, &a, &convolve(&g, &b, &c).unwrap()).unwrap();
        prop_assert!(left.approx_eq(&right, 1e-9));
        let star_ab = involution(&g, &convolve(&g, &a, &b).unwrap());
        let b_star_a_star = convolve(&g, &involution(&g, &b), &involution(&g, &a)).unwrap();
        prop_assert!(star_ab.approx_eq(&b_star_a_star, 1e-9));
    }

    #[test]
    fn reduced_norms_sit_between_sup_and_i(k in 0..NAMES.len(), a in coeffs(), p in 1.0..4.0f64) {
        let g = builtin(NAMES[k]).unwrap();
        let f = element(&g, &a);
        let cfg = SolverConfig::with_seed(3);
        let p = PNorm::new(p).unwrap();
        let red = fp_norm(&g, &f, p, &cfg).unwrap().value;
        let sym = sym_norm(&g, &f, p, &cfg).unwrap().value;
        let i = i_norm(&g, &f);
        prop_assert!(f.sup_norm() <= red + 1e-6);
        prop_assert!(red <= sym + 1e-6);
        prop_assert!(sym <= i + 1e-6);
    }

    #[test]
    fn documents_round_trip(k in 0..NAMES.len()) {
        let g = builtin(NAMES[k]).unwrap();
        let text = serde_json::to_string(&GroupoidDoc::from_groupoid(&g)).unwrap();
        let back = serde_json::from_str::<GroupoidDoc>(&text).unwrap().to_groupoid().unwrap();
        prop_assert_eq!(back.names(), g.names());
        let identity: Vec<usize> = g.arrows().collect();
        prop_assert!(is_isomorphism(&g, &back, &identity));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn reconstruction_is_invariant_under_relabeling(
        k in 0..NAMES.len(), perm_seed in any::<u64>(), p in prop::sample::select(vec![1.0, 1.5, 3.0]),
    ) {
        let g = builtin(NAMES[k]).unwrap();
        let mut perm: Vec<usize> = g.arrows().collect();
        perm.shuffle(&mut stream_rng(perm_seed, 0));
        let h = g.relabel(&perm).unwrap();
        let kind = NormKind::SymFp(PNorm::new(p).unwrap());
        let r = reconstruct(&h, kind, &ReconOptions::default()).unwrap();
        prop_assert_eq!(r.report.status, Status::Success);
        let iso = groupoid_isomorphic(r.groupoid(), &g, DEFAULT_SEARCH_BUDGET).unwrap();
        prop_assert!(iso.is_some_and(|m| is_isomorphism(r.groupoid(), &g, &m)));
    }
}
