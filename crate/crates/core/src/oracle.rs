//! Ground-truth predicates for the four constraint families and exact
//! counting of satisfying arrays by exhaustive enumeration.

use crate::array::NdArray;
use crate::coord::{for_each_coord, CoordSet};
use crate::error::{Error, Result};
use crate::minimal_boxes::{enumerate_minimal, BoxShape};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    ZeroCubesFree,
    CubesUnique,
    ZeroBoxesFree,
    BoxesUnique,
}

impl Family {
    pub fn is_box_family(self) -> bool {
        matches!(self, Family::ZeroBoxesFree | Family::BoxesUnique)
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::ZeroCubesFree => "zero-cubes-free",
            Family::CubesUnique => "cubes-unique",
            Family::ZeroBoxesFree => "zero-boxes-free",
            Family::BoxesUnique => "boxes-unique",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "zero-cubes" | "zero-cubes-free" => Family::ZeroCubesFree,
            "cubes-unique" | "squares-unique" => Family::CubesUnique,
            "zero-boxes" | "zero-boxes-free" => Family::ZeroBoxesFree,
            "boxes-unique" => Family::BoxesUnique,
            other => return Err(Error::Parse(format!("unknown family {other:?}"))),
        })
    }
}

/// Which constraint to test or count: the family plus (d, q, n) and the
/// size parameter (L for cube families, V for box families).
#[derive(Debug, Clone, Copy)]
pub struct ConstraintParams {
    pub family: Family,
    pub d: usize,
    pub q: usize,
    pub n: usize,
    pub param: usize,
}

impl ConstraintParams {
    pub fn new(family: Family, d: usize, q: usize, n: usize, param: usize) -> Result<Self> {
        if d == 0 || n == 0 || q < 2 || param == 0 {
            return Err(Error::InvalidParameter(format!(
                "need d,n >= 1, q >= 2, parameter >= 1; got d={d} n={n} q={q} param={param}"
            )));
        }
        Ok(ConstraintParams {
            family,
            d,
            q,
            n,
            param,
        })
    }

    pub fn cells(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    /// q^(n^d) as u128, saturating on overflow.
    pub fn space_size(&self) -> u128 {
        let mut total: u128 = 1;
        for _ in 0..self.cells() {
            total = total.saturating_mul(self.q as u128);
        }
        total
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroOccurrence {
    pub pos: Vec<usize>,
    pub shape: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DupOccurrence {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub shape: Vec<usize>,
}

/// Everything the predicates found; empty means the array satisfies the
/// constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolationReport {
    pub family: Family,
    pub zeros: Vec<ZeroOccurrence>,
    pub dups: Vec<DupOccurrence>,
}

impl ViolationReport {
    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty() && self.dups.is_empty()
    }
}

fn fmt_coord(v: &[usize]) -> String {
    let inner: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    format!("({})", inner.join(","))
}

impl fmt::Display for ViolationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for z in &self.zeros {
            writeln!(f, "ZERO v={} shape={}", fmt_coord(&z.pos), fmt_coord(&z.shape))?;
        }
        for d in &self.dups {
            writeln!(
                f,
                "DUP u={} v={} shape={}",
                fmt_coord(&d.a),
                fmt_coord(&d.b),
                fmt_coord(&d.shape)
            )?;
        }
        Ok(())
    }
}

fn cube_dims(w: &NdArray) -> Result<(usize, usize)> {
    match w.domain() {
        CoordSet::Cube { d, n } => Ok((*d, *n)),
        other => Err(Error::InvalidParameter(format!(
            "constraint predicates need a full cube domain, got {other:?}"
        ))),
    }
}

fn strides(d: usize, n: usize) -> Vec<usize> {
    let mut s = vec![1usize; d];
    for i in (0..d.saturating_sub(1)).rev() {
        s[i] = s[i + 1] * n;
    }
    s
}

/// Linear offsets of every cell of the box `shape` relative to its anchor.
fn window_offsets(shape: &[usize], strides: &[usize]) -> Vec<usize> {
    let mut offs = Vec::with_capacity(shape.iter().product());
    for_each_coord(shape, |u| {
        offs.push(u.iter().zip(strides).map(|(&c, &s)| c * s).sum());
    });
    offs
}

/// Anchor offsets (and positions) at which `shape` fits inside `[n]^d`.
fn anchors(shape: &[usize], d: usize, n: usize, strides: &[usize]) -> Vec<(Vec<usize>, usize)> {
    let mut bases = Vec::new();
    if shape.iter().any(|&a| a > n) {
        return bases;
    }
    let limits: Vec<usize> = shape.iter().map(|&a| n - a + 1).collect();
    let _ = d;
    for_each_coord(&limits, |v| {
        let off = v.iter().zip(strides).map(|(&c, &s)| c * s).sum();
        bases.push((v.to_vec(), off));
    });
    bases
}

/// Every position of an all-zero `L x ... x L` subarray.
pub fn find_zero_cubes(w: &NdArray, l: usize) -> Result<ViolationReport> {
    let (d, n) = cube_dims(w)?;
    if l == 0 || l > n {
        return Err(Error::InvalidParameter(format!(
            "cube side {l} not in [1, {n}]"
        )));
    }
    let st = strides(d, n);
    let shape = vec![l; d];
    let offs = window_offsets(&shape, &st);
    let vals = w.values();
    let mut zeros = Vec::new();
    for (pos, base) in anchors(&shape, d, n, &st) {
        if offs.iter().all(|&o| vals[base + o] == 0) {
            zeros.push(ZeroOccurrence {
                pos,
                shape: shape.clone(),
            });
        }
    }
    Ok(ViolationReport {
        family: Family::ZeroCubesFree,
        zeros,
        dups: Vec::new(),
    })
}

/// Every unordered pair of equal `L x ... x L` subarrays, first position
/// smaller under the coordinate order.
pub fn find_identical_cubes(w: &NdArray, l: usize) -> Result<ViolationReport> {
    let (d, n) = cube_dims(w)?;
    if l == 0 || l > n {
        return Err(Error::InvalidParameter(format!(
            "cube side {l} not in [1, {n}]"
        )));
    }
    let shape = vec![l; d];
    Ok(ViolationReport {
        family: Family::CubesUnique,
        zeros: Vec::new(),
        dups: equal_window_pairs(w, &shape),
    })
}

/// Group windows of one shape by content and expand the equal groups into
/// ordered pairs.
fn equal_window_pairs(w: &NdArray, shape: &[usize]) -> Vec<DupOccurrence> {
    let (d, n) = cube_dims(w).expect("checked by callers");
    let st = strides(d, n);
    let offs = window_offsets(shape, &st);
    let vals = w.values();
    let wins: Vec<(Vec<u8>, Vec<usize>)> = anchors(shape, d, n, &st)
        .into_iter()
        .map(|(pos, base)| {
            let content: Vec<u8> = offs.iter().map(|&o| vals[base + o]).collect();
            (content, pos)
        })
        .collect();
    let mut sorted = wins;
    sorted.sort();
    let mut dups = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j].0 == sorted[i].0 {
            j += 1;
        }
        if j - i > 1 {
            let mut group: Vec<&Vec<usize>> = sorted[i..j].iter().map(|(_, p)| p).collect();
            group.sort();
            for a in 0..group.len() {
                for b in a + 1..group.len() {
                    dups.push(DupOccurrence {
                        a: group[a].clone(),
                        b: group[b].clone(),
                        shape: shape.to_vec(),
                    });
                }
            }
        }
        i = j;
    }
    dups.sort_by(|x, y| (&x.a, &x.b, &x.shape).cmp(&(&y.a, &y.b, &y.shape)));
    dups
}

/// Every all-zero box of volume >= `v`. Checking the minimal shapes (clipped
/// to the grid) suffices: a bigger zero box contains a minimal zero box.
pub fn find_zero_boxes(w: &NdArray, v: usize) -> Result<ViolationReport> {
    let (d, n) = cube_dims(w)?;
    if v == 0 {
        return Err(Error::InvalidParameter("volume must be >= 1".into()));
    }
    let st = strides(d, n);
    let vals = w.values();
    let mut zeros = Vec::new();
    let family = enumerate_minimal(d, v)?;
    let fitting: Vec<&BoxShape> = family
        .shapes()
        .iter()
        .filter(|s| s.sides().iter().all(|&a| a <= n))
        .collect();
    let mut hits: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for shape in &fitting {
        let offs = window_offsets(shape.sides(), &st);
        for (pos, base) in anchors(shape.sides(), d, n, &st) {
            if offs.iter().all(|&o| vals[base + o] == 0) {
                hits.push((pos, shape.sides().to_vec()));
            }
        }
    }
    hits.sort();
    for (pos, shape) in hits {
        zeros.push(ZeroOccurrence { pos, shape });
    }
    Ok(ViolationReport {
        family: Family::ZeroBoxesFree,
        zeros,
        dups: Vec::new(),
    })
}

/// Every pair of equal boxes whose shape is minimal for volume `v`.
pub fn find_identical_boxes(w: &NdArray, v: usize) -> Result<ViolationReport> {
    let (d, n) = cube_dims(w)?;
    if v == 0 {
        return Err(Error::InvalidParameter("volume must be >= 1".into()));
    }
    let family = enumerate_minimal(d, v)?;
    let mut dups = Vec::new();
    for shape in family.shapes() {
        if shape.sides().iter().any(|&a| a > n) {
            continue;
        }
        dups.extend(equal_window_pairs(w, shape.sides()));
    }
    dups.sort_by(|x, y| (&x.a, &x.b, &x.shape).cmp(&(&y.a, &y.b, &y.shape)));
    Ok(ViolationReport {
        family: Family::BoxesUnique,
        zeros: Vec::new(),
        dups,
    })
}

/// Does the array satisfy the constraint? Used by both the report functions
/// above (indirectly, by emptiness) and the exhaustive counter.
pub fn satisfies(w: &NdArray, params: &ConstraintParams) -> Result<bool> {
    let pred = Predicate::build(params)?;
    Ok(pred.eval(w.values()))
}

/// Precompiled window tables for one constraint instance. A cube-family
/// parameter larger than n leaves no window to check, so every array
/// satisfies vacuously.
struct Predicate {
    /// (anchor offsets, cell offsets) per shape to test for all-zero
    zero_windows: Vec<(Vec<usize>, Vec<usize>)>,
    /// (anchor offsets, cell offsets) per shape to test pairwise
    dup_windows: Vec<(Vec<usize>, Vec<usize>)>,
}

impl Predicate {
    fn build(params: &ConstraintParams) -> Result<Predicate> {
        let d = params.d;
        let n = params.n;
        let st = strides(d, n);
        let shapes: Vec<Vec<usize>> = if params.family.is_box_family() {
            enumerate_minimal(d, params.param)?
                .shapes()
                .iter()
                .map(|s| s.sides().to_vec())
                .filter(|s| s.iter().all(|&a| a <= n))
                .collect()
        } else {
            if params.param <= n {
                vec![vec![params.param; d]]
            } else {
                vec![]
            }
        };
        let tables: Vec<(Vec<usize>, Vec<usize>)> = shapes
            .iter()
            .map(|shape| {
                let bases = anchors(shape, d, n, &st)
                    .into_iter()
                    .map(|(_, b)| b)
                    .collect();
                (bases, window_offsets(shape, &st))
            })
            .collect();
        Ok(match params.family {
            Family::ZeroCubesFree | Family::ZeroBoxesFree => Predicate {
                zero_windows: tables,
                dup_windows: Vec::new(),
            },
            Family::CubesUnique | Family::BoxesUnique => Predicate {
                zero_windows: Vec::new(),
                dup_windows: tables,
            },
        })
    }

    fn eval(&self, vals: &[u8]) -> bool {
        for (bases, offs) in &self.zero_windows {
            for &base in bases {
                if offs.iter().all(|&o| vals[base + o] == 0) {
                    return false;
                }
            }
        }
        for (bases, offs) in &self.dup_windows {
            for i in 0..bases.len() {
                for j in i + 1..bases.len() {
                    let (a, b) = (bases[i], bases[j]);
                    if offs.iter().all(|&o| vals[a + o] == vals[b + o]) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Exact number of arrays over `[q]^(n^d)` that satisfy the constraint,
/// by enumerating all of them. `workers` splits the odometer range; the
/// result does not depend on the split.
pub fn exhaustive_count(params: &ConstraintParams, budget: u128, workers: usize) -> Result<u64> {
    let total = params.space_size();
    if total > budget {
        return Err(Error::BudgetExceeded { total, budget });
    }
    let pred = Predicate::build(params)?;
    let cells = params.cells();
    let q = params.q as u8;
    let total = total as u64;
    let workers = workers.clamp(1, 64).min(total.max(1) as usize);

    let count_range = |lo: u64, hi: u64, pred: &Predicate| -> u64 {
        // odometer seeded at index `lo`, least-significant symbol first
        let mut vals = vec![0u8; cells];
        let mut x = lo;
        for v in vals.iter_mut() {
            *v = (x % q as u64) as u8;
            x /= q as u64;
        }
        let mut count = 0u64;
        for _ in lo..hi {
            if pred.eval(&vals) {
                count += 1;
            }
            for v in vals.iter_mut() {
                *v += 1;
                if *v < q {
                    break;
                }
                *v = 0;
            }
        }
        count
    };

    if workers == 1 {
        return Ok(count_range(0, total, &pred));
    }
    let chunk = total.div_ceil(workers as u64);
    let counts = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for w in 0..workers as u64 {
            let lo = (w * chunk).min(total);
            let hi = ((w + 1) * chunk).min(total);
            let pred = &pred;
            handles.push(scope.spawn(move || count_range(lo, hi, pred)));
        }
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect::<Vec<u64>>()
    });
    Ok(counts.iter().sum())
}

/// `n^d - log_q(count)`; infinite when the constraint admits no array.
pub fn redundancy(params: &ConstraintParams, count: u64) -> f64 {
    if count == 0 {
        return f64::INFINITY;
    }
    params.cells() as f64 - (count as f64).ln() / (params.q as f64).ln()
}
