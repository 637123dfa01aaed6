//! Minimal d-dimensional boxes of a given volume: the antichain of shapes
//! that every volume-V box contains, with counting bounds and a base-q
//! index code over the family.

use crate::array::{rank_decode, rank_encode};
use crate::error::{Error, Result};

/// An axis-aligned box shape `[x_0] x ... x [x_{d-1}]`, every side >= 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoxShape {
    sides: Vec<usize>,
}

impl BoxShape {
    pub fn new(sides: Vec<usize>) -> Result<Self> {
        if sides.is_empty() || sides.iter().any(|&s| s == 0) {
            return Err(Error::InvalidParameter(format!(
                "box sides must be positive, got {sides:?}"
            )));
        }
        Ok(BoxShape { sides })
    }

    pub fn sides(&self) -> &[usize] {
        &self.sides
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn volume(&self) -> usize {
        self.sides.iter().product()
    }

    /// Componentwise `<=` with at least one strict inequality.
    pub fn strictly_inside(&self, other: &BoxShape) -> bool {
        self.sides.len() == other.sides.len()
            && self.sides.iter().zip(&other.sides).all(|(a, b)| a <= b)
            && self.sides != other.sides
    }
}

/// The minimal boxes of volume at least `V` in dimension `d`, sorted
/// lexicographically by sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalBoxFamily {
    d: usize,
    v: usize,
    shapes: Vec<BoxShape>,
}

impl MinimalBoxFamily {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn volume(&self) -> usize {
        self.v
    }

    pub fn shapes(&self) -> &[BoxShape] {
        &self.shapes
    }

    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    pub fn rank(&self, shape: &BoxShape) -> Result<usize> {
        self.shapes
            .binary_search(shape)
            .map_err(|_| Error::InvalidParameter(format!("{:?} not in the family", shape.sides)))
    }
}

/// True when the volume is >= `v` and decrementing any side drops it below.
fn is_minimal(sides: &[usize], v: usize) -> bool {
    let vol: usize = sides.iter().product();
    if vol < v {
        return false;
    }
    sides
        .iter()
        .all(|&s| s == 1 || vol / s * (s - 1) < v)
}

/// Enumerate the minimal boxes: every shape with volume >= `v` whose every
/// single-side decrement drops the volume below `v`. Sorted by sides.
pub fn enumerate_minimal(d: usize, v: usize) -> Result<MinimalBoxFamily> {
    if d == 0 || v == 0 {
        return Err(Error::InvalidParameter(
            "dimension and volume must be positive".into(),
        ));
    }
    let mut shapes = Vec::new();
    // Choose the first d-1 sides freely; the last side is forced to
    // ceil(v / prefix_volume) by minimality. Any minimal shape has volume
    // < 2v, which bounds the prefix products.
    let mut prefix = vec![1usize; d];
    fn recurse(
        level: usize,
        d: usize,
        v: usize,
        prefix: &mut Vec<usize>,
        product: usize,
        out: &mut Vec<BoxShape>,
    ) {
        if level == d - 1 {
            let last = v.div_ceil(product);
            prefix[level] = last;
            if is_minimal(prefix, v) {
                out.push(BoxShape {
                    sides: prefix.clone(),
                });
            }
            return;
        }
        // any side of a minimal shape is <= v, and the whole volume is < 2v
        let mut side = 1;
        while side <= v && product * side <= 2 * v {
            prefix[level] = side;
            recurse(level + 1, d, v, prefix, product * side, out);
            side += 1;
        }
    }
    recurse(0, d, v, &mut prefix, 1, &mut shapes);
    shapes.sort();
    shapes.dedup();
    Ok(MinimalBoxFamily { d, v, shapes })
}

/// Number of minimal boxes `f_d(V)`.
pub fn family_size(d: usize, v: usize) -> Result<usize> {
    Ok(enumerate_minimal(d, v)?.len())
}

/// Upper bound `sqrt(2)^(d-2) d! (d-1)! V^((d-1)/d)` on the family size.
pub fn family_size_upper(d: usize, v: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidParameter(
            "the counting bounds need d >= 2".into(),
        ));
    }
    Ok(box_count_constant(d) * (v as f64).powf((d - 1) as f64 / d as f64))
}

/// The constant `sqrt(2)^(d-2) d! (d-1)!` in front of the upper bound.
pub fn box_count_constant(d: usize) -> f64 {
    let fact = |m: usize| (1..=m).map(|x| x as f64).product::<f64>();
    2f64.sqrt().powi(d as i32 - 2) * fact(d) * fact(d - 1)
}

/// Lower bound `d * floor(V^(1/d))^(d-1) - d + 1` on the family size.
pub fn family_size_lower(d: usize, v: usize) -> Result<usize> {
    if d < 2 {
        return Err(Error::InvalidParameter(
            "the counting bounds need d >= 2".into(),
        ));
    }
    let root = integer_root(v, d);
    Ok(d * root.pow(d as u32 - 1) - d + 1)
}

/// Largest r with r^d <= v.
pub fn integer_root(v: usize, d: usize) -> usize {
    let mut r = (v as f64).powf(1.0 / d as f64).round() as usize;
    while r.pow(d as u32) > v {
        r -= 1;
    }
    while (r + 1).pow(d as u32) <= v {
        r += 1;
    }
    r
}

/// Rank of a member shape written base-q, least-significant digit first.
pub fn shape_index(
    shape: &BoxShape,
    family: &MinimalBoxFamily,
    q: usize,
    width: usize,
) -> Result<Vec<u8>> {
    rank_encode(family.rank(shape)?, q, width)
}

pub fn shape_unindex(digits: &[u8], family: &MinimalBoxFamily, q: usize) -> Result<BoxShape> {
    let rank = rank_decode(digits, q)?;
    family
        .shapes()
        .get(rank)
        .cloned()
        .ok_or(Error::RankOutOfRange {
            rank,
            size: family.len(),
        })
}
