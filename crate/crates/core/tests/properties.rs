//! Property tests for the transform/index laws and codec roundtrips.

use mdc_core::array::{index_decode, index_encode, md, sd};
use mdc_core::coord::CoordSet;
use mdc_core::oracle::{find_identical_cubes, find_zero_boxes, find_zero_cubes};
use mdc_core::semi::{cr_complete, SemiKind, SemiSquare};
use mdc_core::squares_unique;
use mdc_core::zero_boxes::ZeroBoxesCodec;
use mdc_core::zero_cubes::ZeroCubesCodec;
use mdc_core::NdArray;
use proptest::prelude::*;

fn arb_coord_set() -> impl Strategy<Value = CoordSet> {
    prop_oneof![
        (1usize..=3, 2usize..=5).prop_map(|(d, n)| CoordSet::Cube { d, n }),
        (1usize..=3, 2usize..=5).prop_map(|(d, n)| CoordSet::CubeMinusFirst { d, n }),
        (1usize..=3, 2usize..=5).prop_map(|(d, n)| CoordSet::CubeMinusLast { d, n }),
        proptest::collection::vec(1usize..=5, 1..=3).prop_map(|sides| CoordSet::Box { sides }),
        (2usize..=6, any::<u64>()).prop_map(|(n, seed)| {
            // pseudo-random bottom semi-square domain as an explicit set
            let corner = [(seed % n as u64) as usize, ((seed >> 8) % n as u64) as usize];
            let mut coords = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if !(i >= corner[0] && j >= corner[1]) {
                        coords.push(vec![i, j]);
                    }
                }
            }
            CoordSet::explicit(2, coords)
        }),
    ]
}

proptest! {
    #[test]
    fn md_sd_identity(set in arb_coord_set(), seed in any::<u64>(), q in 2usize..=4) {
        let mut state = seed | 1;
        let vals: Vec<u8> = (0..set.len()).map(|_| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as usize % q) as u8
        }).collect();
        let x = NdArray::new(set.clone(), q, vals.clone()).unwrap();
        let seq = sd(&x);
        prop_assert_eq!(&seq, &vals);
        let back = md(&seq, set, q).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn index_codes_are_two_sided_inverses(set in arb_coord_set(), q in 2usize..=3) {
        prop_assume!(!set.is_empty());
        let mut width = 0;
        let mut p = 1usize;
        while p < set.len() {
            p *= q;
            width += 1;
        }
        for v in set.iter() {
            let digits = index_encode(&v, &set, q, width).unwrap();
            prop_assert_eq!(digits.len(), width);
            prop_assert_eq!(index_decode(&digits, &set, q).unwrap(), v);
        }
    }

    #[test]
    fn zero_cubes_codec_roundtrip(
        d in 1usize..=3,
        qi in 0usize..=1,
        ni in 0usize..=1,
        seed in any::<u64>(),
    ) {
        let q = [2usize, 3][qi];
        let n = [5usize, 8][ni];
        let codec = ZeroCubesCodec::new(n, d, q).unwrap();
        let dom = CoordSet::CubeMinusLast { d, n };
        let mut state = seed | 1;
        let vals: Vec<u8> = (0..dom.len()).map(|_| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as usize % q) as u8
        }).collect();
        let w = NdArray::new(dom, q, vals).unwrap();
        let x = codec.encode(&w).unwrap();
        prop_assert!(find_zero_cubes(&x, codec.cube_side()).unwrap().is_empty());
        prop_assert_eq!(codec.decode(&x).unwrap(), w);
    }

    #[test]
    fn zero_boxes_codec_roundtrip(ni in 0usize..=1, dense in 0u32..=9, seed in any::<u64>()) {
        let n = [16usize, 32][ni];
        let codec = ZeroBoxesCodec::new(n, 2, 2).unwrap();
        let dom = CoordSet::CubeMinusFirst { d: 2, n };
        let mut state = seed | 1;
        let vals: Vec<u8> = (0..dom.len()).map(|_| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let r = (state >> 33) % 10;
            (r < dense as u64) as u8
        }).collect();
        let w = NdArray::new(dom, 2, vals).unwrap();
        let x = codec.encode(&w).unwrap();
        prop_assert!(find_zero_boxes(&x, codec.volume()).unwrap().is_empty());
        prop_assert_eq!(codec.decode(&x).unwrap(), w);
    }

    #[test]
    fn cr_complete_restriction_is_identity(n in 2usize..=6, c0 in 0usize..=5, c1 in 0usize..=5, seed in any::<u64>()) {
        let corner = [c0.min(n - 1), c1.min(n - 1)];
        prop_assume!(corner != [0, 0]);
        let mut coords = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if !(i >= corner[0] && j >= corner[1]) {
                    coords.push([i, j]);
                }
            }
        }
        let mut state = seed | 1;
        let vals: Vec<u8> = (0..coords.len()).map(|_| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) & 1) as u8
        }).collect();
        let x = SemiSquare::new(n, corner, SemiKind::Bottom, 2, vals.clone()).unwrap();
        let full = cr_complete(&x).unwrap();
        for (c, v) in coords.iter().zip(&vals) {
            prop_assert_eq!(full.get(&[c[0], c[1]]).unwrap(), *v);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn squares_unique_codec_roundtrip(seed in any::<u64>(), dense in 0u32..=10) {
        let n = 16;
        let codec = squares_unique::params(n).unwrap();
        let dom = CoordSet::CubeMinusFirst { d: 2, n };
        let mut state = seed | 1;
        let vals: Vec<u8> = (0..dom.len()).map(|_| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (((state >> 33) % 11) < dense as u64) as u8
        }).collect();
        let w = NdArray::new(dom, 2, vals).unwrap();
        let x = codec.encode(&w).unwrap();
        prop_assert!(find_identical_cubes(&x, codec.square_side()).unwrap().is_empty());
        prop_assert_eq!(codec.decode(&x).unwrap(), w);
    }
}
