use schmidt_spectrum::ensemble::EnsembleStats;
use schmidt_spectrum::sampler::{sample_ensemble, sample_spectrum, SamplerConfig};
use schmidt_spectrum::BipartiteDims;

#[test]
fn sharded_merge_matches_single_pass() {
    let dims = BipartiteDims::new(4, 6).unwrap();
    let total = 3000u64;
    let mut single = EnsembleStats::new(dims);
    let mut shards = vec![EnsembleStats::new(dims); 7];
    for j in 0..total {
        let s = sample_spectrum(dims, 21, j).unwrap();
        single.accumulate(&s).unwrap();
        shards[(j * 7 / total) as usize].accumulate(&s).unwrap();
    }
    let merged = shards.iter().try_fold(EnsembleStats::new(dims), |acc, s| acc.merge(s)).unwrap();
    assert_eq!(merged.count(), single.count());
    for (a, b) in merged.means().iter().zip(single.means()) {
        assert!((a - b).abs() < 1e-10);
    }
    for (a, b) in merged.widths().unwrap().iter().zip(single.widths().unwrap()) {
        assert!((a - b).abs() < 1e-10);
    }

    let parallel = sample_ensemble(&SamplerConfig::new(dims, total, 21).unwrap(), Some(3), None).unwrap();
    for (a, b) in parallel.means().iter().zip(single.means()) {
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn merge_rejects_mismatched_dims() {
    let a = EnsembleStats::new(BipartiteDims::new(2, 2).unwrap());
    let b = EnsembleStats::new(BipartiteDims::new(2, 3).unwrap());
    assert!(a.merge(&b).is_err());
}
