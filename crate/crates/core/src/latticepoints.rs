//! The finite set of grid points where the cleared q-Dyson polynomial does not vanish.
//!
//! Every such point orders its coordinates by a permutation `pi`; consecutive gaps
//! are `a_{pi(r)} + [pi(r) > pi(r+1)]` plus a slack `m_{r+1} >= 0`, and the total
//! slack is bounded by the budget
//! `B(pi) = delta_{pi(n)} - des(pi) + c_{pi(n)} - c_{pi(1)}`.

use std::fmt;

use itertools::Itertools;
use num_integer::binomial;

use crate::error::{Error, Result, check_len};
use crate::par::{self, Execution};
use crate::qpochhammer::GridSpec;
use crate::symforms::AffineForm;

/// A permutation of `0..n`, stored as its image sequence.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; image.len()];
        for &i in &image {
            if i >= image.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidInput(format!("{image:?} is not a permutation")));
            }
        }
        Ok(Permutation(image))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn image(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Positions `r` with `pi(r) > pi(r+1)`.
    pub fn descents(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.windows(2).positions(|w| w[0] > w[1])
    }

    pub fn descent_count(&self) -> usize {
        self.descents().count()
    }

    /// All permutations of `0..n` in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (0..n).permutations(n).map(Permutation)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(|i| i + 1).join(","))
    }
}

/// Offsets `c_i` of the interpolation grids.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ShiftVector(pub Vec<i64>);

impl ShiftVector {
    pub fn zero(n: usize) -> Self {
        ShiftVector(vec![0; n])
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    fn l1(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).sum()
    }
}

impl fmt::Display for ShiftVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EvaluationPoint {
    pub perm: Permutation,
    pub m: Vec<u64>,
    pub alpha: Vec<AffineForm>,
}

impl EvaluationPoint {
    pub fn specialize(&self, a: &[i64]) -> Vec<i64> {
        self.alpha.iter().map(|l| l.substitute(a)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct EvaluationSet {
    pub points: Vec<EvaluationPoint>,
    pub grid: GridSpec,
    pub delta: Vec<i64>,
}

fn check_delta(delta: &[i64]) -> Result<()> {
    if delta.is_empty() {
        return Err(Error::InvalidInput("empty exponent vector".into()));
    }
    if delta.iter().sum::<i64>() != 0 {
        return Err(Error::InvalidInput(format!("exponents {delta:?} do not sum to 0")));
    }
    Ok(())
}

/// `B(pi)`; negative means `pi` contributes nothing.
pub fn budget(perm: &Permutation, delta: &[i64], shift: &[i64]) -> i64 {
    let img = perm.image();
    let (first, last) = (img[0], img[img.len() - 1]);
    delta[last] - perm.descent_count() as i64 + shift[last] - shift[first]
}

/// Nonnegative integer vectors of length `n` with sum at most `bound`, in lex order.
fn bounded_compositions(n: usize, bound: u64) -> Vec<Vec<u64>> {
    fn rec(n: usize, left: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur.push(v);
            rec(n, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, bound, &mut Vec::with_capacity(n), &mut out);
    out
}

/// `alpha_{pi(1)} = c_{pi(1)} + m_1`,
/// `alpha_{pi(i)} = c_{pi(1)} + sum_{r<=i} m_r + sum_{r<i} (a_{pi(r)} + [pi(r) > pi(r+1)])`.
fn alpha_for(perm: &Permutation, m: &[u64], shift: &[i64]) -> Vec<AffineForm> {
    let img = perm.image();
    let n = img.len();
    let mut alpha = vec![AffineForm::zero(n); n];
    let mut acc = AffineForm::constant(n, shift[img[0]]);
    for i in 0..n {
        acc = acc.plus(m[i] as i64);
        alpha[img[i]] = acc.clone();
        if i + 1 < n {
            let step = AffineForm::var(n, img[i]).plus(i64::from(img[i] > img[i + 1]));
            acc = &acc + &step;
        }
    }
    alpha
}

pub fn enumerate_evaluation_set(delta: &[i64], shift: &ShiftVector) -> Result<EvaluationSet> {
    check_delta(delta)?;
    let n = delta.len();
    check_len(n, shift.0.len())?;
    let grid = GridSpec::new(delta, &shift.0)?;
    let mut points = Vec::new();
    for perm in Permutation::all(n) {
        let b = budget(&perm, delta, &shift.0);
        if b < 0 {
            continue;
        }
        for m in bounded_compositions(n, b as u64) {
            let alpha = alpha_for(&perm, &m, &shift.0);
            points.push(EvaluationPoint { perm: perm.clone(), m, alpha });
        }
    }
    let mut seen: Vec<&Vec<AffineForm>> = points.iter().map(|p| &p.alpha).collect();
    seen.sort();
    if seen.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::inconsistency("two evaluation points share the same symbolic coordinates"));
    }
    Ok(EvaluationSet { points, grid, delta: delta.to_vec() })
}

/// `|S_delta|` under `shift`, from the budget formula alone.
pub fn evaluation_set_size(delta: &[i64], shift: &ShiftVector) -> Result<u64> {
    check_delta(delta)?;
    check_len(delta.len(), shift.0.len())?;
    Ok(size_unchecked(delta, &shift.0))
}

fn size_unchecked(delta: &[i64], shift: &[i64]) -> u64 {
    let n = delta.len() as u64;
    Permutation::all(delta.len())
        .map(|p| budget(&p, delta, shift))
        .filter(|&b| b >= 0)
        .map(|b| binomial(b as u64 + n, n))
        .sum()
}

pub fn default_radius(delta: &[i64]) -> i64 {
    delta.iter().map(|d| d.abs()).max().unwrap_or(0).max(1) + 1
}

/// Shift minimizing `|S_delta|`.
///
/// Exhaustive over `c_1 = 0, c_i in [-radius, radius]` for `n <= 5`, coordinate descent
/// from the zero shift otherwise. Ties prefer the smaller `sum |c_i|`, then the
/// lexicographically smaller shift.
pub fn best_shift(delta: &[i64], radius: i64) -> Result<(ShiftVector, u64)> {
    best_shift_with(delta, radius, Execution::default())
}

pub fn best_shift_with(delta: &[i64], radius: i64, exec: Execution) -> Result<(ShiftVector, u64)> {
    check_delta(delta)?;
    if radius < 0 {
        return Err(Error::InvalidInput(format!("negative search radius {radius}")));
    }
    let n = delta.len();
    let key = |s: &ShiftVector, size: u64| (size, s.l1(), s.clone());
    if n <= 5 {
        let candidates: Vec<ShiftVector> = std::iter::repeat_n(-radius..=radius, n - 1)
            .multi_cartesian_product()
            .map(|tail| ShiftVector(std::iter::once(0).chain(tail).collect()))
            .collect();
        let candidates = if candidates.is_empty() { vec![ShiftVector::zero(n)] } else { candidates };
        let sized = par::map(exec, &candidates, |s| (size_unchecked(delta, &s.0), s.clone()));
        let (size, shift) = sized
            .into_iter()
            .min_by_key(|(size, s)| key(s, *size))
            .expect("at least one candidate");
        return Ok((shift, size));
    }
    let mut cur = ShiftVector::zero(n);
    let mut cur_size = size_unchecked(delta, &cur.0);
    loop {
        let mut improved = false;
        for i in 1..n {
            let trials: Vec<ShiftVector> = (-radius..=radius)
                .map(|v| {
                    let mut s = cur.clone();
                    s.0[i] = v;
                    s
                })
                .collect();
            let sized = par::map(exec, &trials, |s| (size_unchecked(delta, &s.0), s.clone()));
            let (size, s) = sized.into_iter().min_by_key(|(size, s)| key(s, *size)).unwrap();
            if key(&s, size) < key(&cur, cur_size) {
                cur = s;
                cur_size = size;
                improved = true;
            }
        }
        if !improved {
            return Ok((cur, cur_size));
        }
    }
}

/// True when some pair `i < j` has `-(a_i - 1) <= alpha_i - alpha_j <= a_j`, which forces
/// the cleared product to vanish at `x = q^alpha`.
pub fn vanishing_condition_holds(alpha: &[i64], a: &[i64]) -> bool {
    let n = alpha.len();
    (0..n).any(|i| {
        (i + 1..n).any(|j| {
            let d = alpha[i] - alpha[j];
            -(a[i] - 1) <= d && d <= a[j]
        })
    })
}
