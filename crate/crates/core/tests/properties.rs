mod common;

use common::props;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn square_zero_rejection(seed in any::<u64>()) { props::square_zero_rejection(seed)?; }

    #[test]
    fn rank_nullity(seed in any::<u64>()) { props::rank_nullity(seed)?; }

    #[test]
    fn kunneth(seed in any::<u64>()) { props::kunneth(seed)?; }

    #[test]
    fn suspension_shift(seed in any::<u64>()) { props::suspension_shift(seed)?; }

    #[test]
    fn cone_identity_acyclic(seed in any::<u64>()) { props::cone_identity_acyclic(seed)?; }

    #[test]
    fn minimality(seed in any::<u64>()) { props::minimality(seed)?; }

    #[test]
    fn syzygy_bookkeeping(seed in any::<u64>()) { props::syzygy_bookkeeping(seed)?; }

    #[test]
    fn tor_symmetry(seed in any::<u64>()) { props::tor_symmetry(seed)?; }

    #[test]
    fn truncation_stability(seed in any::<u64>()) { props::truncation_stability(seed)?; }
}
