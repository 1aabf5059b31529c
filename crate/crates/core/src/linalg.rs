//! Small fixed-size linear algebra used by the extension and tangent code.

use std::ops::Mul;

pub type Vec3 = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const IDENTITY: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn from_fn(f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = [[0.0; 3]; 3];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, x) in row.iter_mut().enumerate() {
                *x = f(r, c);
            }
        }
        Mat3(m)
    }

    /// Permutation matrix exchanging coordinates `0` and `i` (identity for `i = 0`).
    ///
    /// It is symmetric and its own inverse, and conjugates the letter-0
    /// extension matrices into the letter-`i` ones.
    pub fn swap_with_zero(i: usize) -> Self {
        let mut perm = [0usize, 1, 2];
        perm.swap(0, i);
        Self::from_fn(|r, c| if perm[r] == c { 1.0 } else { 0.0 })
    }

    pub fn apply(&self, v: &Vec3) -> Vec3 {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_fn(|r, c| self.0[r][c] * s)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|r, c| self.0[c][r])
    }

    pub fn row_sums(&self) -> Vec3 {
        let m = &self.0;
        [
            m[0].iter().sum(),
            m[1].iter().sum(),
            m[2].iter().sum(),
        ]
    }

    pub fn max_abs_diff(&self, other: &Mat3) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..3 {
            for c in 0..3 {
                worst = worst.max((self.0[r][c] - other.0[r][c]).abs());
            }
        }
        worst
    }
}

impl Mul for Mat3 {
    type Output = Mat3;

    fn mul(self, rhs: Mat3) -> Mat3 {
        Mat3::from_fn(|r, c| (0..3).map(|k| self.0[r][k] * rhs.0[k][c]).sum())
    }
}

impl Mul<Vec3> for Mat3 {
    type Output = Vec3;

    fn mul(self, rhs: Vec3) -> Vec3 {
        self.apply(&rhs)
    }
}

pub fn max_abs_diff(a: &Vec3, b: &Vec3) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn max_abs(a: &Vec3) -> f64 {
    a.iter().map(|x| x.abs()).fold(0.0, f64::max)
}
