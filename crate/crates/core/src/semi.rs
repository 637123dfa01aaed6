//! Semi-squares: squares missing a translated quadrant, their concatenation,
//! and completion to a full square by iterated self-concatenation.

use crate::array::NdArray;
use crate::coord::{Coord, CoordSet};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemiKind {
    /// Domain `[n]^2 \ (v + [n]^2)`: everything except the cells >= `v`.
    Bottom,
    /// Domain `[n]^2 \ (v - [n]^2)`: everything except the cells <= `v`.
    Upper,
}

/// A square over `[n]^2` missing the quadrant anchored at `corner`.
/// A bottom semi-square with `corner = (0,0)` is empty; corners with an
/// entry >= n describe a full square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiSquare {
    n: usize,
    corner: [usize; 2],
    kind: SemiKind,
    q: usize,
    values: Vec<u8>, // in increasing coordinate order of the domain
}

fn bottom_domain(n: usize, corner: [usize; 2]) -> Vec<Coord> {
    let mut coords = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if !(i >= corner[0] && j >= corner[1]) {
                coords.push(vec![i, j]);
            }
        }
    }
    coords
}

fn upper_domain(n: usize, corner: [usize; 2]) -> Vec<Coord> {
    let mut coords = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if !(i <= corner[0] && j <= corner[1]) {
                coords.push(vec![i, j]);
            }
        }
    }
    coords
}

impl SemiSquare {
    pub fn new(
        n: usize,
        corner: [usize; 2],
        kind: SemiKind,
        q: usize,
        values: Vec<u8>,
    ) -> Result<Self> {
        let dom = match kind {
            SemiKind::Bottom => bottom_domain(n, corner),
            SemiKind::Upper => upper_domain(n, corner),
        };
        if values.len() != dom.len() {
            return Err(Error::LengthMismatch {
                got: values.len(),
                want: dom.len(),
            });
        }
        if let Some(&bad) = values.iter().find(|&&s| s as usize >= q) {
            return Err(Error::SymbolOutOfRange(bad as usize, q));
        }
        Ok(SemiSquare {
            n,
            corner,
            kind,
            q,
            values,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn corner(&self) -> [usize; 2] {
        self.corner
    }

    pub fn kind(&self) -> SemiKind {
        self.kind
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn domain(&self) -> CoordSet {
        let coords = match self.kind {
            SemiKind::Bottom => bottom_domain(self.n, self.corner),
            SemiKind::Upper => upper_domain(self.n, self.corner),
        };
        CoordSet::Explicit { d: 2, coords }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.n * self.n
    }

    fn in_domain(&self, w: [usize; 2]) -> bool {
        if w[0] >= self.n || w[1] >= self.n {
            return false;
        }
        match self.kind {
            SemiKind::Bottom => !(w[0] >= self.corner[0] && w[1] >= self.corner[1]),
            SemiKind::Upper => !(w[0] <= self.corner[0] && w[1] <= self.corner[1]),
        }
    }

    /// Index of `w` within the value vector, counting domain cells before it.
    fn pos(&self, w: [usize; 2]) -> Option<usize> {
        if !self.in_domain(w) {
            return None;
        }
        let mut idx = 0;
        for i in 0..=w[0] {
            for j in 0..self.n {
                if i == w[0] && j == w[1] {
                    return Some(idx);
                }
                if self.in_domain([i, j]) {
                    idx += 1;
                }
            }
        }
        unreachable!()
    }

    pub fn get(&self, w: [usize; 2]) -> Option<u8> {
        self.pos(w).map(|i| self.values[i])
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    /// Mirror image under `w -> (n-1, n-1) - w`; swaps bottom and upper kinds.
    pub fn reflect(&self) -> SemiSquare {
        let n = self.n;
        let corner = [n - 1 - self.corner[0].min(n - 1), n - 1 - self.corner[1].min(n - 1)];
        let kind = match self.kind {
            SemiKind::Bottom => SemiKind::Upper,
            SemiKind::Upper => SemiKind::Bottom,
        };
        let dom = match kind {
            SemiKind::Bottom => bottom_domain(n, corner),
            SemiKind::Upper => upper_domain(n, corner),
        };
        let values = dom
            .iter()
            .map(|w| self.get([n - 1 - w[0], n - 1 - w[1]]).expect("mirror cell"))
            .collect();
        SemiSquare {
            n,
            corner,
            kind,
            q: self.q,
            values,
        }
    }
}

/// Concatenation of two bottom semi-squares: `y` is placed at `x`'s corner
/// and the result is restricted to `[n]^2`. Cells that `y` defines win over
/// `x`'s. The result is an `(n, v+u)`-semi-square provided, per axis,
/// `u_i = 0` or `v_i + t >= n`.
pub fn semi_concat(x: &SemiSquare, y: &SemiSquare) -> Result<SemiSquare> {
    if x.kind != SemiKind::Bottom || y.kind != SemiKind::Bottom {
        return Err(Error::InvalidParameter(
            "concatenation is defined on bottom semi-squares".into(),
        ));
    }
    if x.q != y.q {
        return Err(Error::InvalidParameter("alphabet mismatch".into()));
    }
    let n = x.n;
    let t = y.n;
    let v = x.corner;
    let u = y.corner;
    for i in 0..2 {
        if !(u[i] == 0 || v[i] + t >= n) {
            return Err(Error::InvalidParameter(format!(
                "concat condition fails on axis {i}: corner {u:?}, base corner {v:?}, size {t}"
            )));
        }
    }
    let corner = [v[0] + u[0], v[1] + u[1]];
    let dom = bottom_domain(n, corner);
    let mut values = Vec::with_capacity(dom.len());
    for w in &dom {
        let w = [w[0], w[1]];
        // y placed at v takes precedence where it defines a cell
        let from_y = if w[0] >= v[0] && w[1] >= v[1] {
            y.get([w[0] - v[0], w[1] - v[1]])
        } else {
            None
        };
        match from_y.or_else(|| x.get(w)) {
            Some(s) => values.push(s),
            None => {
                return Err(Error::InvalidParameter(format!(
                    "cell {w:?} of the concatenation is undefined"
                )))
            }
        }
    }
    SemiSquare::new(n, corner, SemiKind::Bottom, x.q, values)
}

/// `x` concatenated with itself `m - 1` times (so `self_concat_power(x, 1)`
/// is `x` itself).
pub fn self_concat_power(x: &SemiSquare, m: usize) -> Result<SemiSquare> {
    if m == 0 {
        return Err(Error::InvalidParameter("power must be >= 1".into()));
    }
    let mut z = x.clone();
    for _ in 1..m {
        z = semi_concat(&z, x)?;
    }
    Ok(z)
}

/// Completion of a semi-square to a full n-square by iterated
/// self-concatenation. Each missing cell `w` receives the value of
/// `w - m*corner` for the largest `m` that keeps the source in the domain.
pub fn cr_complete(x: &SemiSquare) -> Result<NdArray> {
    if x.kind == SemiKind::Upper {
        let completed = cr_complete(&x.reflect())?;
        let n = x.n;
        let mut vals = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                vals[i * n + j] = completed.get(&[n - 1 - i, n - 1 - j])?;
            }
        }
        return NdArray::new(CoordSet::cube(2, n), x.q, vals);
    }
    let v = x.corner;
    if v == [0, 0] {
        return Err(Error::InvalidParameter(
            "cannot complete the empty semi-square".into(),
        ));
    }
    let n = x.n;
    let mut vals = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let w = [i, j];
            let m = [0, 1]
                .iter()
                .filter(|&&ax| v[ax] > 0)
                .map(|&ax| w[ax] / v[ax])
                .min()
                .expect("corner is nonzero");
            let src = [w[0] - m * v[0], w[1] - m * v[1]];
            vals.push(x.get(src).expect("source cell in domain"));
        }
    }
    NdArray::new(CoordSet::cube(2, n), x.q, vals)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn digits(s: &str) -> Vec<u8> {
        s.bytes().filter(|b| b.is_ascii_digit()).map(|b| b - b'0').collect()
    }

    /// The (5,(3,2))-semi-square printed in the concatenation example.
    pub(crate) fn semi_x() -> SemiSquare {
        SemiSquare::new(
            5,
            [3, 2],
            SemiKind::Bottom,
            2,
            digits("11001 10111 00010 00 01"),
        )
        .unwrap()
    }

    /// The (3,(1,1))-semi-square from the same example.
    pub(crate) fn semi_y() -> SemiSquare {
        SemiSquare::new(3, [1, 1], SemiKind::Bottom, 2, digits("001 1 0")).unwrap()
    }

    #[test]
    fn concat_example() {
        let z = semi_concat(&semi_x(), &semi_y()).unwrap();
        assert_eq!(z.corner(), [4, 3]);
        assert_eq!(z.values(), &digits("11001 10111 00010 00001 011")[..]);
    }

    #[test]
    fn concat_with_empty_is_identity() {
        let x = semi_x();
        let empty = SemiSquare::new(3, [0, 0], SemiKind::Bottom, 2, vec![]).unwrap();
        let z = semi_concat(&x, &empty).unwrap();
        assert_eq!(z, x);
    }

    #[test]
    fn concat_onto_full_square_is_identity() {
        let full = SemiSquare::new(2, [2, 2], SemiKind::Bottom, 2, digits("1011")).unwrap();
        assert!(full.is_full());
        let y = semi_y();
        let z = semi_concat(&full, &y).unwrap();
        assert_eq!(z.values(), full.values());
        assert!(z.is_full());
    }

    #[test]
    fn concat_condition_violation() {
        // u_1 != 0 and v_1 + t < n
        let x = SemiSquare::new(5, [1, 2], SemiKind::Bottom, 2, vec![0; 13]).unwrap();
        let y = SemiSquare::new(2, [1, 1], SemiKind::Bottom, 2, vec![0; 3]).unwrap();
        assert!(semi_concat(&x, &y).is_err());
    }

    #[test]
    fn cr_example() {
        let cx = cr_complete(&semi_x()).unwrap();
        assert_eq!(cx.values(), &digits("11001 10111 00010 00110 01101")[..]);
        let cy = cr_complete(&semi_y()).unwrap();
        assert_eq!(cy.values(), &digits("001 100 010")[..]);
    }

    #[test]
    fn cr_single_missing_cell() {
        // n = 2, corner (1,1): only (1,1) missing; one concatenation fills it
        // with the (0,0) value.
        let x = SemiSquare::new(2, [1, 1], SemiKind::Bottom, 2, digits("101")).unwrap();
        let c = cr_complete(&x).unwrap();
        assert_eq!(c.get(&[1, 1]).unwrap(), 1);
        assert_eq!(c.values(), &digits("1011")[..]);
    }

    #[test]
    fn cr_rejects_empty() {
        let x = SemiSquare::new(3, [0, 0], SemiKind::Bottom, 2, vec![]).unwrap();
        assert!(cr_complete(&x).is_err());
    }

    #[test]
    fn powers_have_expected_domains() {
        // X^m is an (n, m*v)-semi-square, and CR equals the last power.
        for corner in [[1, 0], [0, 2], [2, 1], [1, 1], [3, 2], [2, 3]] {
            let n = 5;
            let dom = bottom_domain(n, corner);
            let values: Vec<u8> = (0..dom.len()).map(|i| (i % 2) as u8).collect();
            let x = SemiSquare::new(n, corner, SemiKind::Bottom, 2, values).unwrap();
            let vmin = corner.iter().copied().filter(|&c| c > 0).min().unwrap();
            let steps = n.div_ceil(vmin);
            for m in 1..=steps {
                let p = self_concat_power(&x, m).unwrap();
                assert_eq!(p.corner(), [m * corner[0], m * corner[1]]);
                assert_eq!(
                    p.len(),
                    bottom_domain(n, [
                        (m * corner[0]).min(n),
                        (m * corner[1]).min(n)
                    ])
                    .len()
                );
            }
            let last = self_concat_power(&x, steps).unwrap();
            assert!(last.is_full());
            assert_eq!(cr_complete(&x).unwrap().values(), last.values());
        }
    }

    #[test]
    fn upper_semi_squares_mirror_bottom() {
        let x = semi_x();
        let r = x.reflect();
        assert_eq!(r.kind(), SemiKind::Upper);
        assert_eq!(r.len(), x.len());
        assert_eq!(r.reflect(), x);
        // completing the reflection mirrors the completion
        let cx = cr_complete(&x).unwrap();
        let cr = cr_complete(&r).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(
                    cr.get(&[i, j]).unwrap(),
                    cx.get(&[4 - i, 4 - j]).unwrap()
                );
            }
        }
    }
}
