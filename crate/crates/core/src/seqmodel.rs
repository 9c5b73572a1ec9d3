//! Symbolic diagonal-type operators on `l2(N)`.
//!
//! A [`DiagonalSpec`] is a direct sum of branches, each a sequence
//! `c (n + a)^p (ln(n + b))^q`, plus finitely many overridden entries, an
//! optional weighted-shift offset, an explicit kernel, and pieces of
//! continuous spectrum (multiplication by `t` on `L2[lo, hi]`).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::Matrix;

/// Branches must be monotone from some index at most this large.
pub const MONOTONE_SCAN: u64 = 10_000;
/// Largest index the monotone inversion will probe; counts beyond this are
/// reported as [`ModelError::CountOverflow`].
pub const INDEX_LIMIT: u64 = 1 << 53;
/// Upper bound on `mu_sequence` lengths.
pub const MU_LIMIT: usize = 1_000_000;

const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid term: {0}")]
    InvalidTerm(String),
    #[error("term {0} is still not monotone past n = {MONOTONE_SCAN}")]
    NonMonotone(String),
    #[error("invalid override: {0}")]
    InvalidOverride(String),
    #[error("invalid interval part [{0}, {1}]")]
    InvalidInterval(f64, f64),
    #[error("operator is not compact: {0}")]
    NotCompact(String),
    #[error("counting window needs 0 < alpha <= beta, got [{0}, {1}]")]
    InvalidWindow(f64, f64),
    #[error("Schatten exponent must be positive, got {0}")]
    InvalidExponent(f64),
    #[error("count exceeds {INDEX_LIMIT} indices")]
    CountOverflow,
    #[error("requested {0} singular values; the limit is {MU_LIMIT}")]
    TooMany(usize),
}

pub type Result<T> = std::result::Result<T, ModelError>;

/// `value(n) = c (n + a)^p (ln(n + b))^q` for `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymTerm {
    pub c: f64,
    pub a: f64,
    pub p: f64,
    pub b: f64,
    pub q: f64,
}

/// Eventual behaviour of a branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Trend {
    Decaying,
    Constant,
    Growing,
}

impl SymTerm {
    pub fn new(c: f64, a: f64, p: f64, b: f64, q: f64) -> Result<Self> {
        let t = Self { c, a, p, b, q };
        t.validate()?;
        Ok(t)
    }

    /// `c n^p`.
    pub fn power(c: f64, p: f64) -> Self {
        Self { c, a: 0.0, p, b: 1.0, q: 0.0 }
    }

    /// The constant sequence `c`.
    pub fn constant(c: f64) -> Self {
        Self::power(c, 0.0)
    }

    fn validate(&self) -> Result<()> {
        let all_finite = [self.c, self.a, self.p, self.b, self.q].iter().all(|x| x.is_finite());
        if !all_finite {
            return Err(ModelError::InvalidTerm(format!("{self}: non-finite parameter")));
        }
        if self.c <= 0.0 {
            return Err(ModelError::InvalidTerm(format!("{self}: c must be positive")));
        }
        if self.a < 0.0 {
            return Err(ModelError::InvalidTerm(format!("{self}: a must be >= 0")));
        }
        if self.b < 1.0 {
            return Err(ModelError::InvalidTerm(format!("{self}: b must be >= 1")));
        }
        let v1 = self.eval(1);
        if !(v1.is_finite() && v1 > 0.0) {
            return Err(ModelError::InvalidTerm(format!("{self}: value at n = 1 is {v1}")));
        }
        Ok(())
    }

    pub fn eval(&self, n: u64) -> f64 {
        let x = n as f64;
        let mut v = self.c;
        if self.p != 0.0 {
            v *= (x + self.a).powf(self.p);
        }
        if self.q != 0.0 {
            v *= (x + self.b).ln().powf(self.q);
        }
        v
    }

    pub fn trend(&self) -> Trend {
        if self.p < 0.0 || (self.p == 0.0 && self.q < 0.0) {
            Trend::Decaying
        } else if self.p == 0.0 && self.q == 0.0 {
            Trend::Constant
        } else {
            Trend::Growing
        }
    }

    /// Sign of `d/dx ln value(x)` up to a positive factor:
    /// `g(x) = p (x+b) ln(x+b) + q (x+a)`, and its derivative.
    fn slope_sign(&self, x: f64) -> (f64, f64) {
        let l = (x + self.b).ln();
        (self.p * (x + self.b) * l + self.q * (x + self.a), self.p * (l + 1.0) + self.q)
    }

    /// First index from which the sequence is monotone in its eventual
    /// direction.
    pub fn monotone_from(&self) -> Result<u64> {
        if self.p == 0.0 || self.q == 0.0 || self.p.signum() == self.q.signum() {
            return Ok(1);
        }
        let falling = self.p < 0.0;
        for n in 1..=MONOTONE_SCAN {
            let (g, dg) = self.slope_sign(n as f64);
            let settled = if falling { g <= 0.0 && dg <= 0.0 } else { g >= 0.0 && dg >= 0.0 };
            if settled {
                return Ok(n);
            }
        }
        Err(ModelError::NonMonotone(self.to_string()))
    }

    /// `lim value(n)` as `n -> inf` (0, c or infinity).
    pub fn limit(&self) -> f64 {
        match self.trend() {
            Trend::Decaying => 0.0,
            Trend::Constant => self.c,
            Trend::Growing => f64::INFINITY,
        }
    }
}

impl fmt::Display for SymTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.c != 1.0 || (self.p == 0.0 && self.q == 0.0) {
            parts.push(format!("{}", self.c));
        }
        if self.p != 0.0 {
            let base = if self.a == 0.0 { "n".to_string() } else { format!("(n+{})", self.a) };
            parts.push(if self.p == 1.0 { base } else { format!("{base}^{}", self.p) });
        }
        if self.q != 0.0 {
            let base = format!("ln(n+{})", self.b);
            parts.push(if self.q == 1.0 { base } else { format!("{base}^{}", self.q) });
        }
        f.write_str(&parts.join("*"))
    }
}

/// Value of a term at `n >= 1`.
pub fn eval_term(t: &SymTerm, n: u64) -> f64 {
    t.eval(n)
}

/// Hamel dimension: finite, or the continuum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CardinalDim {
    Finite(u64),
    Continuum,
}

impl Add for CardinalDim {
    type Output = CardinalDim;

    fn add(self, rhs: CardinalDim) -> CardinalDim {
        match (self, rhs) {
            (CardinalDim::Finite(a), CardinalDim::Finite(b)) => CardinalDim::Finite(a + b),
            _ => CardinalDim::Continuum,
        }
    }
}

impl fmt::Display for CardinalDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CardinalDim::Finite(n) => write!(f, "{n}"),
            CardinalDim::Continuum => write!(f, "continuum"),
        }
    }
}

/// Value of the counting function: a count or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum SpectralCount {
    Finite(u64),
    Infinite,
}

impl SpectralCount {
    pub fn finite(self) -> Option<u64> {
        match self {
            SpectralCount::Finite(n) => Some(n),
            SpectralCount::Infinite => None,
        }
    }

    fn checked_add(self, rhs: SpectralCount) -> Result<SpectralCount> {
        match (self, rhs) {
            (SpectralCount::Finite(a), SpectralCount::Finite(b)) => a
                .checked_add(b)
                .filter(|&s| s <= INDEX_LIMIT)
                .map(SpectralCount::Finite)
                .ok_or(ModelError::CountOverflow),
            _ => Ok(SpectralCount::Infinite),
        }
    }
}

impl fmt::Display for SpectralCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralCount::Finite(n) => write!(f, "{n}"),
            SpectralCount::Infinite => write!(f, "inf"),
        }
    }
}

/// Replaces entry `index` (1-based) of branch `branch`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Override {
    pub branch: usize,
    pub index: u64,
    pub value: f64,
}

/// Symbolic model of a closed diagonal-type operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalSpec {
    branches: Vec<SymTerm>,
    overrides: BTreeMap<(usize, u64), f64>,
    shift_offset: u64,
    kernel_dim: CardinalDim,
    interval_parts: Vec<(f64, f64)>,
    monotone_from: Vec<u64>,
}

impl DiagonalSpec {
    pub fn new(
        branches: Vec<SymTerm>,
        overrides: Vec<Override>,
        shift_offset: u64,
        kernel_dim: CardinalDim,
        interval_parts: Vec<(f64, f64)>,
    ) -> Result<Self> {
        let mut monotone_from = Vec::with_capacity(branches.len());
        for t in &branches {
            t.validate()?;
            monotone_from.push(t.monotone_from()?);
        }
        let mut map = BTreeMap::new();
        for o in overrides {
            if o.branch >= branches.len() {
                return Err(ModelError::InvalidOverride(format!(
                    "branch {} does not exist ({} branches)",
                    o.branch,
                    branches.len()
                )));
            }
            if o.index == 0 {
                return Err(ModelError::InvalidOverride("indices start at 1".into()));
            }
            if !(o.value.is_finite() && o.value > 0.0) {
                return Err(ModelError::InvalidOverride(format!("value {} is not positive", o.value)));
            }
            if map.insert((o.branch, o.index), o.value).is_some() {
                return Err(ModelError::InvalidOverride(format!(
                    "duplicate override for branch {} index {}",
                    o.branch, o.index
                )));
            }
        }
        for &(lo, hi) in &interval_parts {
            if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
                return Err(ModelError::InvalidInterval(lo, hi));
            }
        }
        Ok(Self { branches, overrides: map, shift_offset, kernel_dim, interval_parts, monotone_from })
    }

    /// A plain diagonal operator with one branch.
    pub fn single(term: SymTerm) -> Result<Self> {
        Self::new(vec![term], Vec::new(), 0, CardinalDim::Finite(0), Vec::new())
    }

    /// Direct sum of plain branches.
    pub fn direct_sum(terms: Vec<SymTerm>) -> Result<Self> {
        Self::new(terms, Vec::new(), 0, CardinalDim::Finite(0), Vec::new())
    }

    pub fn with_shift(mut self, offset: u64) -> Self {
        self.shift_offset = offset;
        self
    }

    pub fn with_kernel(mut self, kernel: CardinalDim) -> Self {
        self.kernel_dim = kernel;
        self
    }

    pub fn with_interval(mut self, lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
            return Err(ModelError::InvalidInterval(lo, hi));
        }
        self.interval_parts.push((lo, hi));
        Ok(self)
    }

    /// Graph model of the pair `E1 = K ⊕ 0`, `E2 = ran [[C², CS], [CS, S²]]`
    /// with `C = diag(cos θ_n)`, `S = diag(sin θ_n)`, `θ_n` in `(0, π/2]`.
    ///
    /// `E2` is the graph of `S C⁻¹` wherever `cos θ_n > 0`, which is boundedly
    /// isomorphic to the graph of `S`; coordinates with `sin θ_n = 1` form an
    /// orthogonal pair, again the same as the graph of `1`. So the model is the
    /// diagonal `sin θ_n` itself.
    pub fn cos_sin_pair(sin_theta: SymTerm) -> Result<Self> {
        let first = sin_theta.eval(1);
        if sin_theta.trend() == Trend::Growing || first > 1.0 {
            return Err(ModelError::InvalidTerm(format!("{sin_theta}: sin θ must stay in (0, 1]")));
        }
        let m = sin_theta.monotone_from()?;
        let head_ok = (1..m).all(|n| sin_theta.eval(n) <= 1.0);
        if !head_ok {
            return Err(ModelError::InvalidTerm(format!("{sin_theta}: sin θ must stay in (0, 1]")));
        }
        Self::single(sin_theta)
    }

    /// `(K ⊕ K; K ⊕ 0, 0 ⊕ K)`, modelled by the graph of the identity.
    pub fn orthogonal_pair() -> Self {
        Self::single(SymTerm::constant(1.0)).expect("constant term is valid")
    }

    pub fn branches(&self) -> &[SymTerm] {
        &self.branches
    }

    pub fn overrides(&self) -> Vec<Override> {
        self.overrides
            .iter()
            .map(|(&(branch, index), &value)| Override { branch, index, value })
            .collect()
    }

    pub fn shift_offset(&self) -> u64 {
        self.shift_offset
    }

    pub fn kernel_dim(&self) -> CardinalDim {
        self.kernel_dim
    }

    pub fn interval_parts(&self) -> &[(f64, f64)] {
        &self.interval_parts
    }

    pub fn monotone_from(&self, branch: usize) -> u64 {
        self.monotone_from[branch]
    }

    /// Entry `n` of branch `branch`, overrides applied.
    pub fn value(&self, branch: usize, n: u64) -> f64 {
        self.overrides
            .get(&(branch, n))
            .copied()
            .unwrap_or_else(|| self.branches[branch].eval(n))
    }

    fn branch_overrides(&self, branch: usize) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.overrides.range((branch, 0)..=(branch, u64::MAX)).map(|(&(_, n), &v)| (n, v))
    }

    /// No continuous spectrum and every branch decays to zero.
    pub fn is_compact(&self) -> bool {
        self.interval_parts.is_empty() && self.branches.iter().all(|t| t.trend() == Trend::Decaying)
    }

    /// Closed range: the nonzero diagonal values are bounded away from zero.
    pub fn range_closed(&self) -> bool {
        self.branches.iter().all(|t| t.trend() != Trend::Decaying)
    }

    /// Everywhere defined, i.e. bounded.
    pub fn domain_total(&self) -> bool {
        self.branches.iter().all(|t| t.trend() != Trend::Growing)
    }

    /// Codimension of the closure of the range: kernel plus shift offset.
    pub fn cokernel_dim(&self) -> CardinalDim {
        self.kernel_dim + CardinalDim::Finite(self.shift_offset)
    }

    /// Injective, onto, with bounded inverse.
    pub fn has_bounded_inverse(&self) -> bool {
        self.kernel_dim == CardinalDim::Finite(0)
            && self.shift_offset == 0
            && self.range_closed()
            && (!self.branches.is_empty() || !self.interval_parts.is_empty())
    }

    /// Infimum of the Schatten exponents, `f64::INFINITY` when the operator
    /// lies in no Schatten class (including every non-compact operator).
    pub fn sh_exponent(&self) -> f64 {
        if !self.interval_parts.is_empty() {
            return f64::INFINITY;
        }
        self.branches
            .iter()
            .map(|t| if t.p < 0.0 { -1.0 / t.p } else { f64::INFINITY })
            .fold(0.0, f64::max)
    }

    /// `Tr |T|^alpha < inf`.
    pub fn schatten_member(&self, alpha: f64) -> Result<bool> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(ModelError::InvalidExponent(alpha));
        }
        if !self.interval_parts.is_empty() {
            return Ok(false);
        }
        Ok(self.branches.iter().all(|t| {
            if t.p >= 0.0 {
                return false;
            }
            let e = t.p * alpha;
            if (e + 1.0).abs() <= BOUNDARY_TOL {
                t.q * alpha < -1.0 - BOUNDARY_TOL
            } else {
                e < -1.0
            }
        }))
    }

    /// `N(alpha, beta)`: number of diagonal entries in `[alpha, beta]`,
    /// infinite when a constant branch or a continuous piece meets the window.
    pub fn counting(&self, alpha: f64, beta: f64) -> Result<SpectralCount> {
        if !(alpha > 0.0 && alpha <= beta && alpha.is_finite()) {
            return Err(ModelError::InvalidWindow(alpha, beta));
        }
        if self.interval_parts.iter().any(|&(lo, hi)| lo <= beta && hi >= alpha) {
            return Ok(SpectralCount::Infinite);
        }
        let mut total = SpectralCount::Finite(0);
        for (i, t) in self.branches.iter().enumerate() {
            let mut c = count_branch(t, self.monotone_from[i], alpha, beta)?;
            if let SpectralCount::Finite(k) = c {
                let mut k = k as i128;
                for (n, v) in self.branch_overrides(i) {
                    let raw = t.eval(n);
                    k -= i128::from(alpha <= raw && raw <= beta);
                    k += i128::from(alpha <= v && v <= beta);
                }
                c = SpectralCount::Finite(k.max(0) as u64);
            }
            total = total.checked_add(c)?;
        }
        Ok(total)
    }

    /// Whether a constant branch level or a continuous piece lies in
    /// `[alpha, beta]`.
    pub fn flat_meets(&self, alpha: f64, beta: f64) -> bool {
        self.interval_parts.iter().any(|&(lo, hi)| lo <= beta && hi >= alpha)
            || self
                .branches
                .iter()
                .any(|t| t.trend() == Trend::Constant && alpha <= t.c && t.c <= beta)
    }

    /// Number of entries `>= x` (`> x` when `strict`) outside the flat part
    /// (constant levels and continuous pieces). Infinite when a growing
    /// branch is present.
    pub fn count_above_isolated(&self, x: f64, strict: bool) -> Result<SpectralCount> {
        let above = |v: f64| if strict { v > x } else { v >= x };
        let mut total = SpectralCount::Finite(0);
        for (i, t) in self.branches.iter().enumerate() {
            let mut k: u64 = match t.trend() {
                Trend::Growing => return Ok(SpectralCount::Infinite),
                Trend::Constant => 0,
                Trend::Decaying => {
                    let n0 = self.monotone_from[i];
                    let head = (1..n0).filter(|&n| above(t.eval(n))).count() as u64;
                    head + prefix_len(n0, |n| above(t.eval(n)))?
                }
            };
            for (n, v) in self.branch_overrides(i) {
                if t.trend() == Trend::Decaying && above(t.eval(n)) {
                    k -= 1;
                }
                k += u64::from(above(v));
            }
            total = total.checked_add(SpectralCount::Finite(k))?;
        }
        Ok(total)
    }

    /// First `count` singular values: the decreasing rearrangement of all
    /// entries. The shift offset does not change them.
    pub fn mu_sequence(&self, count: usize) -> Result<Vec<f64>> {
        if !self.is_compact() {
            return Err(ModelError::NotCompact(self.describe()));
        }
        if count > MU_LIMIT {
            return Err(ModelError::TooMany(count));
        }
        let mut all = Vec::new();
        for i in 0..self.branches.len() {
            all.extend(self.branch_top(i, count));
        }
        all.sort_by(|a, b| b.total_cmp(a));
        all.truncate(count);
        Ok(all)
    }

    /// Largest `count` entries of one branch, descending.
    fn branch_top(&self, branch: usize, count: usize) -> Vec<f64> {
        let t = &self.branches[branch];
        let overridden: Vec<(u64, f64)> = self.branch_overrides(branch).collect();
        let end = self.monotone_from[branch] - 1 + count as u64 + overridden.len() as u64;
        let mut vals: Vec<f64> = (1..=end)
            .filter(|n| !self.overrides.contains_key(&(branch, *n)))
            .map(|n| t.eval(n))
            .collect();
        vals.extend(overridden.iter().map(|&(_, v)| v));
        vals.sort_by(|a, b| b.total_cmp(a));
        vals.truncate(count);
        vals
    }

    /// Largest and smallest entries over all branches (infimum 0 for decaying
    /// branches); intervals included.
    pub fn value_range(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for (i, t) in self.branches.iter().enumerate() {
            let head = (1..self.monotone_from[i] + 1).map(|n| self.value(i, n));
            let over = self.branch_overrides(i).map(|(_, v)| v);
            for v in head.chain(over) {
                lo = lo.min(v);
                hi = hi.max(v);
            }
            match t.trend() {
                Trend::Decaying => lo = 0.0,
                Trend::Growing => hi = f64::INFINITY,
                Trend::Constant => {}
            }
        }
        for &(a, b) in &self.interval_parts {
            lo = lo.min(a);
            hi = hi.max(b);
        }
        (lo, hi)
    }

    /// Splits into the part with closed range (non-decaying branches and
    /// continuous pieces) and the compact part (decaying branches). Kernel and
    /// shift stay with the compact part.
    pub fn split_closed_compact(&self) -> (DiagonalSpec, DiagonalSpec) {
        let (mut closed_b, mut compact_b) = (Vec::new(), Vec::new());
        let (mut closed_o, mut compact_o) = (Vec::new(), Vec::new());
        for (i, t) in self.branches.iter().enumerate() {
            let (terms, overs) = if t.trend() == Trend::Decaying {
                (&mut compact_b, &mut compact_o)
            } else {
                (&mut closed_b, &mut closed_o)
            };
            let idx = terms.len();
            terms.push(*t);
            for (n, v) in self.branch_overrides(i) {
                overs.push(Override { branch: idx, index: n, value: v });
            }
        }
        let closed = DiagonalSpec::new(
            closed_b,
            closed_o,
            0,
            CardinalDim::Finite(0),
            self.interval_parts.clone(),
        )
        .expect("sub-spec of a valid spec");
        let compact = DiagonalSpec::new(compact_b, compact_o, self.shift_offset, self.kernel_dim, Vec::new())
            .expect("sub-spec of a valid spec");
        (closed, compact)
    }

    /// No branches and no continuous spectrum.
    pub fn is_trivial(&self) -> bool {
        self.branches.is_empty() && self.interval_parts.is_empty()
    }

    /// Bounded representative with the same bounded-isomorphism class of
    /// graph system: every growing branch becomes the constant equal to its
    /// smallest entry. A branch bounded below has closed range, so its graph
    /// system is the orthogonal pair whatever the entries.
    pub fn bounded_model(&self) -> DiagonalSpec {
        let mut branches = Vec::with_capacity(self.branches.len());
        let mut overrides = Vec::new();
        for (i, t) in self.branches.iter().enumerate() {
            if t.trend() == Trend::Growing {
                let head = (1..=self.monotone_from[i]).map(|n| self.value(i, n));
                let m = head.chain(self.branch_overrides(i).map(|(_, v)| v)).fold(f64::INFINITY, f64::min);
                branches.push(SymTerm::constant(m));
            } else {
                branches.push(*t);
                for (n, v) in self.branch_overrides(i) {
                    overrides.push(Override { branch: i, index: n, value: v });
                }
            }
        }
        DiagonalSpec::new(branches, overrides, self.shift_offset, self.kernel_dim, self.interval_parts.clone())
            .expect("bounded model of a valid spec")
    }

    /// First `n` diagonal entries in a fixed enumeration: kernel zeros first
    /// (a quarter of `n` for a continuum kernel), then branches interleaved
    /// round-robin with each continuous piece sampled at dyadic points.
    pub fn diagonal_prefix(&self, n: usize) -> Vec<f64> {
        let zeros = match self.kernel_dim {
            CardinalDim::Finite(k) => (k as usize).min(n),
            CardinalDim::Continuum => n / 4,
        };
        let mut out = vec![0.0; zeros];
        let streams = self.branches.len() + self.interval_parts.len();
        if streams == 0 {
            return out;
        }
        let mut idx: u64 = 1;
        while out.len() < n {
            for i in 0..self.branches.len() {
                if out.len() < n {
                    out.push(self.value(i, idx));
                }
            }
            for &(lo, hi) in &self.interval_parts {
                if out.len() < n {
                    // dyadic points 1/2, 1/4, 3/4, 1/8, ... of [lo, hi]
                    let k = idx;
                    let level = 64 - k.leading_zeros();
                    let denom = (1u64 << level) as f64;
                    let num = (2 * (k - (1u64 << (level - 1))) + 1) as f64;
                    out.push(lo + (hi - lo) * num / denom);
                }
            }
            idx += 1;
        }
        out
    }

    /// Finite `(n + shift) x n` truncation: the diagonal prefix placed
    /// `shift_offset` rows below the main diagonal.
    pub fn truncate(&self, n: usize) -> Matrix {
        let d = self.diagonal_prefix(n);
        let s = self.shift_offset as usize;
        let mut m = Matrix::zeros(n + s, n);
        for (j, &v) in d.iter().enumerate() {
            m[(j + s, j)] = v;
        }
        m
    }

    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = self.branches.iter().map(|t| t.to_string()).collect();
        parts.extend(self.interval_parts.iter().map(|(lo, hi)| format!("t on [{lo}, {hi}]")));
        let mut s = if parts.is_empty() { "0".to_string() } else { parts.join(" ⊕ ") };
        if !self.overrides.is_empty() {
            s.push_str(&format!(" ({} overrides)", self.overrides.len()));
        }
        if self.shift_offset > 0 {
            s.push_str(&format!(", shifted by {}", self.shift_offset));
        }
        if self.kernel_dim != CardinalDim::Finite(0) {
            s.push_str(&format!(", kernel {}", self.kernel_dim));
        }
        s
    }
}

/// Number of `n >= start` with `pred(n)`, for `pred` true on a prefix.
fn prefix_len(start: u64, pred: impl Fn(u64) -> bool) -> Result<u64> {
    if !pred(start) {
        return Ok(0);
    }
    let mut good = start;
    let mut step = 1u64;
    let bad = loop {
        let probe = start + step;
        if probe > INDEX_LIMIT {
            return Err(ModelError::CountOverflow);
        }
        if !pred(probe) {
            break probe;
        }
        good = probe;
        step *= 2;
    };
    let (mut lo, mut hi) = (good, bad);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo - start + 1)
}

/// Counting for a raw branch (no overrides).
fn count_branch(t: &SymTerm, n0: u64, alpha: f64, beta: f64) -> Result<SpectralCount> {
    let inside = |v: f64| alpha <= v && v <= beta;
    if t.trend() == Trend::Constant {
        return Ok(if inside(t.c) { SpectralCount::Infinite } else { SpectralCount::Finite(0) });
    }
    let head = (1..n0).filter(|&n| inside(t.eval(n))).count() as u64;
    let tail = match t.trend() {
        Trend::Decaying => {
            let ge = prefix_len(n0, |n| t.eval(n) >= alpha)?;
            let gt = prefix_len(n0, |n| t.eval(n) > beta)?;
            ge - gt.min(ge)
        }
        Trend::Growing => {
            let le = prefix_len(n0, |n| t.eval(n) <= beta)?;
            let lt = prefix_len(n0, |n| t.eval(n) < alpha)?;
            le - lt.min(le)
        }
        Trend::Constant => unreachable!(),
    };
    Ok(SpectralCount::Finite(head + tail))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv_n() -> SymTerm {
        SymTerm::power(1.0, -1.0)
    }

    fn nlogn() -> SymTerm {
        SymTerm::new(1.0, 1.0, -1.0, 1.0, -1.0).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval_term(&inv_n(), 4), 0.25);
        assert_eq!(eval_term(&nlogn(), 1), 1.0 / (2.0 * 2f64.ln()));
        assert_eq!(eval_term(&SymTerm::power(1.0, 2.0), 3), 9.0);
    }

    #[test]
    fn term_validation() {
        assert!(SymTerm::new(0.0, 0.0, -1.0, 1.0, 0.0).is_err());
        assert!(SymTerm::new(1.0, -0.5, -1.0, 1.0, 0.0).is_err());
        assert!(SymTerm::new(1.0, 0.0, -1.0, 0.5, 1.0).is_err());
        assert!(SymTerm::new(f64::NAN, 0.0, -1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn monotone_start() {
        assert_eq!(inv_n().monotone_from().unwrap(), 1);
        // ln(n+1)^3 / n rises at first
        let t = SymTerm::new(1.0, 0.0, -1.0, 1.0, 3.0).unwrap();
        let n0 = t.monotone_from().unwrap();
        assert!(n0 > 1);
        assert!((n0..n0 + 200).all(|n| t.eval(n + 1) <= t.eval(n)));
        assert!(t.eval(n0 - 1) < t.eval(n0) || n0 <= 2);
        // needs ln(n) ~ 50 before it turns: out of reach
        let bad = SymTerm::new(1.0, 0.0, -0.02, 1.0, 1.0).unwrap();
        assert!(matches!(bad.monotone_from(), Err(ModelError::NonMonotone(_))));
    }

    #[test]
    fn sh_examples() {
        for s in [0.5, 1.0, 2.0, 3.0] {
            let spec = DiagonalSpec::single(SymTerm::power(1.0, -s)).unwrap();
            assert_eq!(spec.sh_exponent(), 1.0 / s);
        }
        assert_eq!(DiagonalSpec::single(nlogn()).unwrap().sh_exponent(), 1.0);
        assert_eq!(DiagonalSpec::single(SymTerm::constant(2.0)).unwrap().sh_exponent(), f64::INFINITY);
        let log_only = SymTerm::new(1.0, 0.0, 0.0, 1.0, -1.0).unwrap();
        assert_eq!(DiagonalSpec::single(log_only).unwrap().sh_exponent(), f64::INFINITY);
    }

    #[test]
    fn schatten_membership() {
        let h = DiagonalSpec::single(inv_n()).unwrap();
        assert!(!h.schatten_member(1.0).unwrap());
        assert!(h.schatten_member(2.0).unwrap());
        let l = DiagonalSpec::single(nlogn()).unwrap();
        assert!(!l.schatten_member(1.0).unwrap());
        assert!(l.schatten_member(1.01).unwrap());
        // (n log^2 n)^-1 converges at the boundary exponent
        let l2 = DiagonalSpec::single(SymTerm::new(1.0, 1.0, -1.0, 1.0, -2.0).unwrap()).unwrap();
        assert!(l2.schatten_member(1.0).unwrap());
        assert!(h.schatten_member(0.0).is_err());
    }

    #[test]
    fn mu_examples() {
        let one = DiagonalSpec::single(inv_n()).unwrap();
        assert_eq!(one.mu_sequence(3).unwrap(), vec![1.0, 0.5, 1.0 / 3.0]);
        let two = DiagonalSpec::direct_sum(vec![inv_n(), inv_n()]).unwrap();
        assert_eq!(two.mu_sequence(4).unwrap(), vec![1.0, 1.0, 0.5, 0.5]);
        let mixed = DiagonalSpec::direct_sum(vec![SymTerm::power(1.0, -2.0), SymTerm::power(1.0, -3.0)]).unwrap();
        assert_eq!(mixed.mu_sequence(4).unwrap(), vec![1.0, 1.0, 0.25, 0.125]);
        let closed = DiagonalSpec::single(SymTerm::constant(2.0)).unwrap();
        assert!(matches!(closed.mu_sequence(3), Err(ModelError::NotCompact(_))));
    }

    #[test]
    fn mu_respects_far_overrides() {
        let spec = DiagonalSpec::new(
            vec![inv_n()],
            vec![Override { branch: 0, index: 1_000_000, value: 7.0 }],
            0,
            CardinalDim::Finite(0),
            vec![],
        )
        .unwrap();
        assert_eq!(spec.mu_sequence(2).unwrap(), vec![7.0, 1.0]);
    }

    #[test]
    fn counting_examples() {
        let h = DiagonalSpec::single(inv_n()).unwrap();
        assert_eq!(h.counting(0.25, 0.5).unwrap(), SpectralCount::Finite(3));
        let iv = DiagonalSpec::direct_sum(vec![]).unwrap().with_interval(2.0, 3.0).unwrap();
        assert_eq!(iv.counting(2.5, 2.6).unwrap(), SpectralCount::Infinite);
        assert_eq!(iv.counting(3.5, 4.0).unwrap(), SpectralCount::Finite(0));
        let sq = DiagonalSpec::single(SymTerm::power(1.0, 2.0)).unwrap();
        assert_eq!(sq.counting(4.0, 16.0).unwrap(), SpectralCount::Finite(3));
        let two = DiagonalSpec::single(SymTerm::constant(2.0)).unwrap();
        assert_eq!(two.counting(1.0, 2.0).unwrap(), SpectralCount::Infinite);
        assert!(h.counting(0.5, 0.25).is_err());
        assert!(h.counting(0.0, 0.25).is_err());
    }

    #[test]
    fn counting_large_and_overflow() {
        let h = DiagonalSpec::single(SymTerm::power(1.0, -2.0)).unwrap();
        // 1/n^2 >= 1e-18  <=>  n <= 1e9
        assert_eq!(h.counting(1e-18, 1.0).unwrap(), SpectralCount::Finite(1_000_000_000));
        let slow = DiagonalSpec::single(SymTerm::new(1.0, 0.0, 0.0, 1.0, -1.0).unwrap()).unwrap();
        assert_eq!(slow.counting(0.01, 1.0), Err(ModelError::CountOverflow));
    }

    #[test]
    fn counting_with_overrides() {
        let spec = DiagonalSpec::new(
            vec![inv_n()],
            vec![Override { branch: 0, index: 2, value: 5.0 }],
            0,
            CardinalDim::Finite(0),
            vec![],
        )
        .unwrap();
        assert_eq!(spec.counting(0.25, 0.5).unwrap(), SpectralCount::Finite(2));
        assert_eq!(spec.counting(4.0, 6.0).unwrap(), SpectralCount::Finite(1));
    }

    #[test]
    fn range_domain_kernel() {
        let two = DiagonalSpec::single(SymTerm::constant(2.0)).unwrap();
        let h = DiagonalSpec::single(inv_n()).unwrap();
        let sq = DiagonalSpec::single(SymTerm::power(1.0, 2.0)).unwrap();
        assert!(two.range_closed() && !h.range_closed() && sq.range_closed());
        assert!(two.domain_total() && h.domain_total() && !sq.domain_total());
        assert_eq!(h.cokernel_dim(), CardinalDim::Finite(0));
        assert_eq!(h.clone().with_shift(1).cokernel_dim(), CardinalDim::Finite(1));
        assert_eq!(h.with_kernel(CardinalDim::Continuum).cokernel_dim(), CardinalDim::Continuum);
    }

    #[test]
    fn cos_sin_model() {
        let s = DiagonalSpec::cos_sin_pair(inv_n()).unwrap();
        assert!(!s.range_closed());
        assert!(DiagonalSpec::cos_sin_pair(SymTerm::constant(2.0)).is_err());
        assert!(DiagonalSpec::orthogonal_pair().range_closed());
    }

    #[test]
    fn spec_validation() {
        let bad_over = DiagonalSpec::new(
            vec![inv_n()],
            vec![Override { branch: 1, index: 1, value: 1.0 }],
            0,
            CardinalDim::Finite(0),
            vec![],
        );
        assert!(matches!(bad_over, Err(ModelError::InvalidOverride(_))));
        let bad_iv = DiagonalSpec::new(vec![], vec![], 0, CardinalDim::Finite(0), vec![(3.0, 2.0)]);
        assert!(matches!(bad_iv, Err(ModelError::InvalidInterval(..))));
    }

    #[test]
    fn truncation_shapes() {
        let h = DiagonalSpec::single(inv_n()).unwrap().with_shift(1);
        let m = h.truncate(3);
        assert_eq!(m.shape(), (4, 3));
        assert_eq!(m[(1, 0)], 1.0);
        assert_eq!(m[(3, 2)], 1.0 / 3.0);
        let iv = DiagonalSpec::single(SymTerm::power(1.0, -2.0)).unwrap().with_interval(2.0, 3.0).unwrap();
        let d = iv.diagonal_prefix(6);
        assert_eq!(d, vec![1.0, 2.5, 0.25, 2.25, 1.0 / 9.0, 2.75]);
    }

    #[test]
    fn bounded_model_replaces_growth() {
        let s = DiagonalSpec::direct_sum(vec![SymTerm::power(1.0, 2.0), SymTerm::power(1.0, -2.0)]).unwrap();
        let b = s.bounded_model();
        assert_eq!(b.branches()[0], SymTerm::constant(1.0));
        assert!(b.domain_total());
    }
}
