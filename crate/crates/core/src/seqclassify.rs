//! Verdict engine for graph systems over symbolic diagonal operators.
//!
//! Rules are tried in a fixed order and the first one that applies decides.
//! Exact symbolic rules come before numeric searches; anything the rules do
//! not settle is reported as [`Relation::Undecided`].

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seqmodel::{CardinalDim, DiagonalSpec, ModelError, Trend};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("operator must be compact with nonzero singular values: {0}")]
    NotCompact(String),
    #[error("operator needs a bounded inverse: {0}")]
    NotInvertible(String),
    #[error("diagonal entries must be nonzero: {0}")]
    ZeroEntries(String),
}

pub type Result<T> = std::result::Result<T, ClassifyError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    UnitarilyIsomorphic,
    NotUnitarilyIsomorphic,
    BoundedlyIsomorphic,
    NotBoundedlyIsomorphic,
    AlgebraicallyIsomorphic,
    NotAlgebraicallyIsomorphic,
    Undecided,
}

impl Relation {
    pub fn is_decided(self) -> bool {
        self != Relation::Undecided
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Relation::UnitarilyIsomorphic => "unitarily isomorphic",
            Relation::NotUnitarilyIsomorphic => "not unitarily isomorphic",
            Relation::BoundedlyIsomorphic => "boundedly isomorphic",
            Relation::NotBoundedlyIsomorphic => "not boundedly isomorphic",
            Relation::AlgebraicallyIsomorphic => "algebraically isomorphic",
            Relation::NotAlgebraicallyIsomorphic => "not algebraically isomorphic",
            Relation::Undecided => "undecided",
        };
        f.write_str(s)
    }
}

/// Outcome of one classification with the rule that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub relation: Relation,
    pub rule_id: String,
    pub citation: String,
    pub detail: String,
}

impl Verdict {
    pub fn new(relation: Relation, rule: Rule, detail: impl Into<String>) -> Self {
        Self {
            relation,
            rule_id: rule.id().to_string(),
            citation: rule.citation().to_string(),
            detail: detail.into(),
        }
    }
}

/// Stable rule identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    KernelMismatch,
    CokernelMismatch,
    ClosedSumMismatch,
    ClosedRanges,
    RatioComparison,
    DirectSum,
    SchattenMismatch,
    CountingObstruction,
    InversePerturbation,
    NoRule,
    AlgClosedMismatch,
    AlgCodimMismatch,
    AlgInvariantsAgree,
    DerivedBoundedness,
    FiniteDimQuadruple,
    FiniteAngles,
}

impl Rule {
    pub const BOUNDED_ORDER: [Rule; 9] = [
        Rule::KernelMismatch,
        Rule::CokernelMismatch,
        Rule::ClosedSumMismatch,
        Rule::ClosedRanges,
        Rule::RatioComparison,
        Rule::DirectSum,
        Rule::SchattenMismatch,
        Rule::CountingObstruction,
        Rule::InversePerturbation,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Rule::KernelMismatch => "R1",
            Rule::CokernelMismatch => "R2",
            Rule::ClosedSumMismatch => "R3",
            Rule::ClosedRanges => "R4",
            Rule::RatioComparison => "R5",
            Rule::DirectSum => "R5D",
            Rule::SchattenMismatch => "R6",
            Rule::CountingObstruction => "R7",
            Rule::InversePerturbation => "R8",
            Rule::NoRule => "R9",
            Rule::AlgClosedMismatch => "A1",
            Rule::AlgCodimMismatch => "A2",
            Rule::AlgInvariantsAgree => "A3",
            Rule::DerivedBoundedness => "D1",
            Rule::FiniteDimQuadruple => "F1",
            Rule::FiniteAngles => "F2",
        }
    }

    pub fn from_id(id: &str) -> Option<Rule> {
        Rule::BOUNDED_ORDER.iter().copied().find(|r| r.id().eq_ignore_ascii_case(id))
    }

    pub fn citation(self) -> &'static str {
        match self {
            Rule::KernelMismatch => "kernel dimension is a bounded-isomorphism invariant of graph systems",
            Rule::CokernelMismatch => "codimension of the range closure is a unitary invariant of the range",
            Rule::ClosedSumMismatch => "bounded isomorphisms preserve closedness of E1 + E2",
            Rule::ClosedRanges => {
                "graph systems of closed-range operators with equal kernel and cokernel are boundedly isomorphic"
            }
            Rule::RatioComparison => {
                "ranges of compact operators are equivalent iff singular values are comparable up to constants"
            }
            Rule::DirectSum => "direct sums of boundedly isomorphic graph systems are boundedly isomorphic",
            Rule::SchattenMismatch => "the Schatten exponent is a bounded-isomorphism invariant of graph systems",
            Rule::CountingObstruction => {
                "Fillmore–Williams counting lemma: equivalent ranges force N(a, b) <= N'(a/K, Kb) for some K"
            }
            Rule::InversePerturbation => "operators whose inverses differ by less than 1 in norm have equal ranges",
            Rule::NoRule => "no applicable criterion",
            Rule::AlgClosedMismatch => "a closed operator range has finite or closed codimension, a non-closed one has continuum codimension",
            Rule::AlgCodimMismatch => "algebraic codimension of the range is a linear-isomorphism invariant",
            Rule::AlgInvariantsAgree => "two-subspace systems with equal Hamel-dimension invariants are algebraically isomorphic",
            Rule::DerivedBoundedness => {
                "a bounded isomorphism of derived three-subspace systems carries bounded graph operators to bounded ones"
            }
            Rule::FiniteDimQuadruple => "finite systems are boundedly isomorphic iff their dimension quadruples agree",
            Rule::FiniteAngles => {
                "finite systems are unitarily isomorphic iff Halmos part dimensions and principal angles agree"
            }
        }
    }
}

/// Numeric search budgets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Budgets {
    /// Singular values compared in the ratio scan.
    pub mu_terms: usize,
    /// Largest dilation constant tried by the counting search.
    pub k_max: u64,
    /// Points in the log-spaced window grid.
    pub grid: usize,
    /// Explicit head scan for perturbation bounds.
    pub head_scan: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Self { mu_terms: 100_000, k_max: 1 << 30, grid: 200, head_scan: 10_000 }
    }
}

/// Counting searches with a smaller dilation cap never claim an obstruction.
pub const MIN_OBSTRUCTION_K: u64 = 1 << 16;
const DEPTH_PER_K: u64 = 256;
const MAX_DEPTH: u64 = 1 << 40;
const GAMMA_MARGIN: f64 = 0.01;

/// Classification engine: budgets plus optionally disabled rules.
#[derive(Debug, Clone, Default)]
pub struct Engine {
    pub budgets: Budgets,
    pub disabled: BTreeSet<Rule>,
}

/// Comparison of `mu_n(A) / mu_n(B)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioBounds {
    pub bounded_above: bool,
    pub bounded_below: bool,
    pub gamma1: Option<f64>,
    pub gamma2: Option<f64>,
}

/// Every dilation constant up to the cap fails one counting inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountingObstruction {
    pub k_max: u64,
    /// Violating window found at `k_max`.
    pub alpha: f64,
    pub beta: f64,
    /// `N_first(alpha, beta)` and `N_second(alpha/K, K beta)`; `None` is infinite.
    pub count_first: Option<u64>,
    pub count_second: Option<u64>,
    /// Whether the first spec is the one with too many entries.
    pub first_exceeds: bool,
    pub symbolic: Option<String>,
}

impl fmt::Display for CountingObstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |c: Option<u64>| c.map_or("inf".to_string(), |n| n.to_string());
        let (x, y) = if self.first_exceeds { ("A", "B") } else { ("B", "A") };
        write!(
            f,
            "no K <= {} satisfies both counting inequalities; at K = {}: N_{x}[{:.6e}, {:.6e}] = {} > N_{y}[a/K, Kb] = {}",
            self.k_max,
            self.k_max,
            self.alpha,
            self.beta,
            show(self.count_first),
            show(self.count_second)
        )?;
        if let Some(s) = &self.symbolic {
            write!(f, "; {s}")?;
        }
        Ok(())
    }
}

/// `sup_n |1/a(n) - 1/b(n)| < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerturbationCertificate {
    pub s: f64,
}

/// Dominant decay `(p, q)` and the limit of `mu_n / (n^p ln(n)^q)`.
fn dominant_decay(spec: &DiagonalSpec) -> (f64, f64, f64) {
    let lead = spec
        .branches()
        .iter()
        .map(|t| (t.p, t.q))
        .fold((f64::NEG_INFINITY, f64::NEG_INFINITY), |m, x| if x > m { x } else { m });
    let same: Vec<f64> = spec
        .branches()
        .iter()
        .filter(|t| (t.p, t.q) == lead)
        .map(|t| t.c)
        .collect();
    let c = if lead.0 < 0.0 {
        let e = -lead.0;
        same.iter().map(|c| c.powf(1.0 / e)).sum::<f64>().powf(e)
    } else {
        same.iter().copied().fold(0.0, f64::max)
    };
    (lead.0, lead.1, c)
}

fn require_compact(spec: &DiagonalSpec) -> Result<()> {
    if spec.is_compact() && !spec.branches().is_empty() {
        Ok(())
    } else {
        Err(ClassifyError::NotCompact(spec.describe()))
    }
}

/// Ratio test on singular values: a numeric scan over the first `mu_terms`
/// values combined with the symbolic limit of the ratio.
pub fn ratio_bounded(a: &DiagonalSpec, b: &DiagonalSpec, budgets: &Budgets) -> Result<RatioBounds> {
    require_compact(a)?;
    require_compact(b)?;
    let n = budgets.mu_terms.clamp(1, crate::seqmodel::MU_LIMIT);
    let ma = a.mu_sequence(n)?;
    let mb = b.mu_sequence(n)?;
    let ratios: Vec<f64> = ma.iter().zip(&mb).map(|(x, y)| x / y).collect();
    let head_min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let head_max = ratios.iter().copied().fold(0.0, f64::max);
    let (pa, qa, ca) = dominant_decay(a);
    let (pb, qb, cb) = dominant_decay(b);
    let limit = match (pa, qa).partial_cmp(&(pb, qb)) {
        Some(std::cmp::Ordering::Equal) => ca / cb,
        Some(std::cmp::Ordering::Greater) => f64::INFINITY,
        _ => 0.0,
    };
    let above = limit.is_finite();
    let below = limit > 0.0;
    let exact = head_min == head_max && head_min == limit;
    let widen = |x: f64, up: bool| {
        if exact {
            x
        } else if up {
            x * (1.0 + GAMMA_MARGIN)
        } else {
            x * (1.0 - GAMMA_MARGIN)
        }
    };
    Ok(RatioBounds {
        bounded_above: above,
        bounded_below: below,
        gamma1: below.then(|| widen(head_min.min(limit), false)),
        gamma2: above.then(|| widen(head_max.max(limit), true)),
    })
}

/// Graph system over `E1 + E2 = K ⊕ ran T`: closed iff the range is closed.
pub fn sum_closed_graph(spec: &DiagonalSpec) -> bool {
    spec.range_closed()
}

/// Level sets of infinite multiplicity.
fn flat_levels(spec: &DiagonalSpec) -> Vec<(f64, f64)> {
    let mut v: Vec<(f64, f64)> = spec
        .branches()
        .iter()
        .filter(|t| t.trend() == Trend::Constant)
        .map(|t| (t.c, t.c))
        .collect();
    v.extend_from_slice(spec.interval_parts());
    v
}

/// Smallest grid point worth probing for dilation constant `k`.
fn grid_floor(spec: &DiagonalSpec, k: u64) -> f64 {
    let depth = k.saturating_mul(DEPTH_PER_K).min(MAX_DEPTH);
    let decaying = spec
        .branches()
        .iter()
        .filter(|t| t.trend() == Trend::Decaying)
        .map(|t| t.eval(depth))
        .fold(f64::INFINITY, f64::min);
    if decaying.is_finite() {
        decaying
    } else {
        spec.value_range().0 / 2.0
    }
}

/// Counts `N(x_i, x_j)` for one spec on a fixed set of lower and upper window
/// ends.
struct CountTable {
    ge: Vec<Option<u64>>,
    gt: Vec<Option<u64>>,
    lows: Vec<f64>,
    highs: Vec<f64>,
    flat: Vec<(f64, f64)>,
}

enum Cell {
    Finite(u64),
    Infinite,
    Unknown,
}

impl CountTable {
    fn new(spec: &DiagonalSpec, lows: Vec<f64>, highs: Vec<f64>) -> Self {
        let fin = |r: std::result::Result<crate::seqmodel::SpectralCount, ModelError>| r.ok().and_then(|c| c.finite());
        let ge = lows.iter().map(|&x| fin(spec.count_above_isolated(x, false))).collect();
        let gt = highs.iter().map(|&x| fin(spec.count_above_isolated(x, true))).collect();
        Self { ge, gt, lows, highs, flat: flat_levels(spec) }
    }

    fn cell(&self, i: usize, j: usize) -> Cell {
        let (lo, hi) = (self.lows[i], self.highs[j]);
        if self.flat.iter().any(|&(a, b)| a <= hi && b >= lo) {
            return Cell::Infinite;
        }
        match (self.ge[i], self.gt[j]) {
            (Some(g), Some(t)) => Cell::Finite(g.saturating_sub(t)),
            _ => Cell::Unknown,
        }
    }
}

/// A violating window `(i, j, n_first, n_second)` of `N_x(g_i, g_j) <= N_y(g_i/K, K g_j)`.
type Violation = (usize, usize, Option<u64>, Option<u64>);

fn find_violation(x: &CountTable, y: &CountTable) -> Option<Violation> {
    let g = x.lows.len();
    for i in 0..g {
        for j in i..g {
            let lhs = x.cell(i, j);
            let rhs = y.cell(i, j);
            let hit = match (&lhs, &rhs) {
                (Cell::Unknown, _) | (_, Cell::Unknown) => None,
                (Cell::Infinite, Cell::Finite(m)) => Some((None, Some(*m))),
                (Cell::Finite(n), Cell::Finite(m)) if n > m => Some((Some(*n), Some(*m))),
                _ => None,
            };
            if let Some((n, m)) = hit {
                return Some((i, j, n, m));
            }
        }
    }
    None
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    let (l, h) = (lo.ln(), hi.ln());
    (0..n).map(|i| (l + (h - l) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// The decaying part is one pure power `c n^p` with no overrides.
fn pure_power_compact(spec: &DiagonalSpec) -> Option<f64> {
    let (_, compact) = spec.split_closed_compact();
    match compact.branches() {
        [t] if t.a == 0.0 && t.q == 0.0 && compact.overrides().is_empty() => Some(t.p),
        _ => None,
    }
}

fn round9(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

fn symbolic_counting_note(a: &DiagonalSpec, b: &DiagonalSpec) -> Option<String> {
    let (pa, pb) = (pure_power_compact(a)?, pure_power_compact(b)?);
    if pa == pb {
        return None;
    }
    let (slow, fast) = if pa > pb { (pa, pb) } else { (pb, pa) };
    Some(format!(
        "symbolically N grows like a^(-1/{}) against (K/a)^(1/{}), and taking a below K^(-{}) with b under the smallest flat level breaks any fixed K",
        -slow,
        -fast,
        round9(1.0 / (1.0 / -slow - 1.0 / -fast) / -fast)
    ))
}

/// Searches for a violation of the counting lemma for every dilation
/// constant `K = 2^j <= k_max`. Growing branches are first replaced by
/// constants, which leaves the bounded-isomorphism class unchanged.
pub fn counting_obstructed(a: &DiagonalSpec, b: &DiagonalSpec, budgets: &Budgets) -> Option<CountingObstruction> {
    let (ba, bb) = (a.bounded_model(), b.bounded_model());
    let top = ba.value_range().1.max(bb.value_range().1);
    if !(top.is_finite() && top > 0.0) {
        return None;
    }
    let k_max = budgets.k_max.max(1);
    let mut last = None;
    let mut k: u64 = 1;
    while k <= k_max {
        let lo = grid_floor(&ba, k).min(grid_floor(&bb, k));
        if !(lo > 0.0 && lo < top) {
            return None;
        }
        let grid = log_grid(lo, 2.0 * top, budgets.grid);
        let kf = k as f64;
        let lows_k: Vec<f64> = grid.iter().map(|x| x / kf).collect();
        let highs_k: Vec<f64> = grid.iter().map(|x| x * kf).collect();
        let a_plain = CountTable::new(&ba, grid.clone(), grid.clone());
        let b_plain = CountTable::new(&bb, grid.clone(), grid.clone());
        let a_wide = CountTable::new(&ba, lows_k.clone(), highs_k.clone());
        let b_wide = CountTable::new(&bb, lows_k, highs_k);
        let found = match find_violation(&a_plain, &b_wide) {
            Some(v) => Some((v, true)),
            None => find_violation(&b_plain, &a_wide).map(|v| (v, false)),
        };
        match found {
            None => return None,
            Some(((i, j, n, m), first_exceeds)) => {
                last = Some(CountingObstruction {
                    k_max: k,
                    alpha: grid[i],
                    beta: grid[j],
                    count_first: n,
                    count_second: m,
                    first_exceeds,
                    symbolic: None,
                })
            }
        }
        match k.checked_mul(2) {
            Some(next) => k = next,
            None => break,
        }
    }
    let mut ob = last?;
    if ob.k_max < MIN_OBSTRUCTION_K {
        return None;
    }
    ob.symbolic = symbolic_counting_note(a, b);
    Some(ob)
}

/// Bounds `sup_n |1/a(n) - 1/b(n)|` branch by branch (branches paired in
/// order) and certifies when it is below 1.
pub fn inverse_perturbation_iso(
    a: &DiagonalSpec,
    b: &DiagonalSpec,
    budgets: &Budgets,
) -> Result<Option<PerturbationCertificate>> {
    for s in [a, b] {
        if !s.has_bounded_inverse() {
            return Err(ClassifyError::NotInvertible(s.describe()));
        }
    }
    if a.branches().len() != b.branches().len() || a.interval_parts() != b.interval_parts() {
        return Ok(None);
    }
    let mut sup: f64 = 0.0;
    for i in 0..a.branches().len() {
        let (ta, tb) = (a.branches()[i], b.branches()[i]);
        let h = budgets.head_scan.max(a.monotone_from(i)).max(b.monotone_from(i));
        let gap = |n: u64| (1.0 / a.value(i, n) - 1.0 / b.value(i, n)).abs();
        for n in 1..=h {
            sup = sup.max(gap(n));
        }
        let far: BTreeSet<u64> = a
            .overrides()
            .iter()
            .chain(b.overrides().iter())
            .filter(|o| o.branch == i && o.index > h)
            .map(|o| o.index)
            .collect();
        for &n in &far {
            sup = sup.max(gap(n));
        }
        // past h both reciprocals are monotone between their value at h + 1
        // and their limit
        let (ua, la) = (1.0 / ta.eval(h + 1), 1.0 / ta.limit());
        let (ub, lb) = (1.0 / tb.eval(h + 1), 1.0 / tb.limit());
        let tail = if ta == tb { 0.0 } else { (ua.max(la) - lb.min(ub)).max(ub.max(lb) - la.min(ua)) };
        sup = sup.max(tail);
    }
    Ok((sup < 1.0).then_some(PerturbationCertificate { s: sup }))
}

impl Engine {
    pub fn new(budgets: Budgets) -> Self {
        Self { budgets, disabled: BTreeSet::new() }
    }

    pub fn without(mut self, rule: Rule) -> Self {
        self.disabled.insert(rule);
        self
    }

    fn on(&self, rule: Rule) -> bool {
        !self.disabled.contains(&rule)
    }

    /// Bounded classification of the graph systems of `a` and `b`.
    pub fn classify_bounded_graph(&self, a: &DiagonalSpec, b: &DiagonalSpec) -> Verdict {
        use Relation::{BoundedlyIsomorphic as Iso, NotBoundedlyIsomorphic as Not};
        if self.on(Rule::KernelMismatch) && a.kernel_dim() != b.kernel_dim() {
            return Verdict::new(
                Not,
                Rule::KernelMismatch,
                format!("dim ker {} vs {}", a.kernel_dim(), b.kernel_dim()),
            );
        }
        if self.on(Rule::CokernelMismatch) && a.cokernel_dim() != b.cokernel_dim() {
            return Verdict::new(
                Not,
                Rule::CokernelMismatch,
                format!("codim of range closure {} vs {}", a.cokernel_dim(), b.cokernel_dim()),
            );
        }
        let (ca, cb) = (a.range_closed(), b.range_closed());
        if self.on(Rule::ClosedSumMismatch) && ca != cb {
            return Verdict::new(
                Not,
                Rule::ClosedSumMismatch,
                format!("E1 + E2 closed: {ca} vs {cb}"),
            );
        }
        if self.on(Rule::ClosedRanges) && ca && cb && a.kernel_dim() == b.kernel_dim() && a.cokernel_dim() == b.cokernel_dim() {
            return Verdict::new(Iso, Rule::ClosedRanges, "both ranges closed");
        }
        let sh = (a.sh_exponent(), b.sh_exponent());
        if self.on(Rule::RatioComparison) && a.is_compact() && b.is_compact() {
            if let Ok(r) = ratio_bounded(a, b, &self.budgets) {
                let note = format!("Sh = {} vs {}", fmt_sh(sh.0), fmt_sh(sh.1));
                return if r.bounded_above && r.bounded_below {
                    Verdict::new(
                        Iso,
                        Rule::RatioComparison,
                        format!(
                            "mu_n(A)/mu_n(B) in [{}, {}]; {note}",
                            r.gamma1.unwrap_or(0.0),
                            r.gamma2.unwrap_or(f64::INFINITY)
                        ),
                    )
                } else {
                    let side = if r.bounded_above { "-> 0" } else { "-> inf" };
                    Verdict::new(Not, Rule::RatioComparison, format!("mu_n(A)/mu_n(B) {side}; {note}"))
                };
            }
        }
        if self.on(Rule::DirectSum) {
            if let Some(detail) = self.direct_sum_iso(a, b) {
                return Verdict::new(Iso, Rule::DirectSum, detail);
            }
        }
        if self.on(Rule::SchattenMismatch) && sh.0.is_finite() && sh.1.is_finite() && sh.0 != sh.1 {
            return Verdict::new(
                Not,
                Rule::SchattenMismatch,
                format!("Sh = {} vs {}", fmt_sh(sh.0), fmt_sh(sh.1)),
            );
        }
        if self.on(Rule::CountingObstruction) {
            if let Some(ob) = counting_obstructed(a, b, &self.budgets) {
                return Verdict::new(Not, Rule::CountingObstruction, ob.to_string());
            }
        }
        if self.on(Rule::InversePerturbation) {
            if let Ok(Some(c)) = inverse_perturbation_iso(a, b, &self.budgets) {
                return Verdict::new(
                    Iso,
                    Rule::InversePerturbation,
                    format!("sup |1/a(n) - 1/b(n)| = {}", c.s),
                );
            }
        }
        Verdict::new(Relation::Undecided, Rule::NoRule, "no rule decided this pair within budget")
    }

    /// Closed-range parts both present (or both absent) and compact parts
    /// isomorphic by the ratio test.
    fn direct_sum_iso(&self, a: &DiagonalSpec, b: &DiagonalSpec) -> Option<String> {
        let (closed_a, compact_a) = a.split_closed_compact();
        let (closed_b, compact_b) = b.split_closed_compact();
        if closed_a.is_trivial() != closed_b.is_trivial() || compact_a.branches().is_empty() {
            return None;
        }
        let r = ratio_bounded(&compact_a, &compact_b, &self.budgets).ok()?;
        (r.bounded_above && r.bounded_below).then(|| {
            format!(
                "closed parts {} and {}; compact parts {} and {} comparable with mu ratio in [{}, {}]",
                closed_a.describe(),
                closed_b.describe(),
                compact_a.describe(),
                compact_b.describe(),
                r.gamma1.unwrap_or(0.0),
                r.gamma2.unwrap_or(f64::INFINITY)
            )
        })
    }

    /// Algebraic classification by Hamel-dimension invariants. Graph systems
    /// of injective operators have trivial meet and continuum-dimensional
    /// subspaces, so only the codimension of `E1 + E2` can differ.
    pub fn classify_algebraic_graph(&self, a: &DiagonalSpec, b: &DiagonalSpec) -> Result<Verdict> {
        use Relation::{AlgebraicallyIsomorphic as Iso, NotAlgebraicallyIsomorphic as Not};
        for s in [a, b] {
            if s.kernel_dim() != CardinalDim::Finite(0) || s.is_trivial() {
                return Err(ClassifyError::ZeroEntries(s.describe()));
            }
        }
        let (ca, cb) = (a.range_closed(), b.range_closed());
        if ca != cb {
            return Ok(Verdict::new(
                Not,
                Rule::AlgClosedMismatch,
                format!("range closed: {ca} vs {cb}"),
            ));
        }
        let codim = |s: &DiagonalSpec| {
            if s.range_closed() {
                CardinalDim::Finite(s.shift_offset())
            } else {
                CardinalDim::Continuum
            }
        };
        let (da, db) = (codim(a), codim(b));
        if da != db {
            return Ok(Verdict::new(
                Not,
                Rule::AlgCodimMismatch,
                format!("Hamel codimension of E1 + E2: {da} vs {db}"),
            ));
        }
        Ok(Verdict::new(
            Iso,
            Rule::AlgInvariantsAgree,
            format!("meet 0, codimension of E1 + E2 {da} on both sides"),
        ))
    }

    /// Bounded classification of the derived systems `(H; E1, E1⊥, E2)`.
    pub fn derived_three_compatible(&self, a: &DiagonalSpec, b: &DiagonalSpec) -> Verdict {
        match (a.domain_total(), b.domain_total()) {
            (true, true) => self.classify_bounded_graph(a, b),
            (false, false) => Verdict::new(
                Relation::Undecided,
                Rule::NoRule,
                "both operators unbounded; no criterion for derived systems",
            ),
            (da, db) => Verdict::new(
                Relation::NotBoundedlyIsomorphic,
                Rule::DerivedBoundedness,
                format!("operator bounded: {da} vs {db}"),
            ),
        }
    }
}

fn fmt_sh(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else {
        "inf".to_string()
    }
}

/// [`Engine::classify_bounded_graph`] with default budgets.
pub fn classify_bounded_graph(a: &DiagonalSpec, b: &DiagonalSpec) -> Verdict {
    Engine::default().classify_bounded_graph(a, b)
}

/// [`Engine::classify_algebraic_graph`] with default budgets.
pub fn classify_algebraic_graph(a: &DiagonalSpec, b: &DiagonalSpec) -> Result<Verdict> {
    Engine::default().classify_algebraic_graph(a, b)
}

/// [`Engine::derived_three_compatible`] with default budgets.
pub fn derived_three_compatible(a: &DiagonalSpec, b: &DiagonalSpec) -> Verdict {
    Engine::default().derived_three_compatible(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqmodel::SymTerm;

    fn single(t: SymTerm) -> DiagonalSpec {
        DiagonalSpec::single(t).unwrap()
    }

    fn pw(p: f64) -> DiagonalSpec {
        single(SymTerm::power(1.0, p))
    }

    fn nlogn() -> DiagonalSpec {
        single(SymTerm::new(1.0, 1.0, -1.0, 1.0, -1.0).unwrap())
    }

    fn konst(c: f64) -> DiagonalSpec {
        single(SymTerm::constant(c))
    }

    fn sum(ts: Vec<SymTerm>) -> DiagonalSpec {
        DiagonalSpec::direct_sum(ts).unwrap()
    }

    fn b() -> Budgets {
        Budgets::default()
    }

    #[test]
    fn ratio_examples() {
        let r = ratio_bounded(&pw(-1.0), &pw(-1.0), &b()).unwrap();
        assert_eq!(r, RatioBounds { bounded_above: true, bounded_below: true, gamma1: Some(1.0), gamma2: Some(1.0) });
        let r = ratio_bounded(&pw(-1.0), &nlogn(), &b()).unwrap();
        assert!(!r.bounded_above && r.bounded_below);
        let r = ratio_bounded(&pw(-1.0), &pw(-2.0), &b()).unwrap();
        assert!(!r.bounded_above);
        assert!(ratio_bounded(&konst(2.0), &pw(-1.0), &b()).is_err());
    }

    #[test]
    fn ratio_gammas_ordered() {
        let r = ratio_bounded(&single(SymTerm::new(3.0, 2.0, -1.0, 1.0, 0.0).unwrap()), &pw(-1.0), &b()).unwrap();
        let (g1, g2) = (r.gamma1.unwrap(), r.gamma2.unwrap());
        assert!(g1 <= 1.0 && 3.0 * 0.99 < g2 && g1 <= g2);
    }

    #[test]
    fn multi_branch_ratio() {
        // two copies of 1/n merge to mu_n ~ 2/n
        let r = ratio_bounded(&sum(vec![SymTerm::power(1.0, -1.0); 2]), &pw(-1.0), &b()).unwrap();
        assert!(r.bounded_above && r.bounded_below);
        assert!((r.gamma2.unwrap() - 2.0).abs() < 0.05);
    }

    #[test]
    fn bounded_rules_fire_as_expected() {
        let e = Engine::default();
        let v = e.classify_bounded_graph(&pw(-1.0), &nlogn());
        assert_eq!((v.relation, v.rule_id.as_str()), (Relation::NotBoundedlyIsomorphic, "R5"));
        assert!(v.detail.contains("Sh = 1 vs 1"));
        let v = e.classify_bounded_graph(&pw(2.0), &konst(2.0));
        assert_eq!((v.relation, v.rule_id.as_str()), (Relation::BoundedlyIsomorphic, "R4"));
        let v = e.classify_bounded_graph(&pw(-1.0), &pw(-2.0));
        assert_eq!((v.relation, v.rule_id.as_str()), (Relation::NotBoundedlyIsomorphic, "R5"));
        let v = e.classify_bounded_graph(&pw(-1.0).with_shift(1), &pw(-1.0));
        assert_eq!(v.rule_id, "R2");
        let v = e.classify_bounded_graph(&pw(-1.0).with_kernel(CardinalDim::Finite(1)), &pw(-1.0));
        assert_eq!(v.rule_id, "R1");
        let v = e.classify_bounded_graph(&konst(1.0), &pw(-1.0));
        assert_eq!(v.rule_id, "R3");
    }

    #[test]
    fn direct_sum_rule() {
        let a = sum(vec![SymTerm::power(1.0, 2.0), SymTerm::power(1.0, -2.0)]);
        let c = sum(vec![SymTerm::constant(2.0), SymTerm::power(1.0, -2.0)]);
        let v = classify_bounded_graph(&a, &c);
        assert_eq!((v.relation, v.rule_id.as_str()), (Relation::BoundedlyIsomorphic, "R5D"));
    }

    #[test]
    fn counting_rule_on_mixed_sums() {
        let a = sum(vec![SymTerm::power(1.0, 2.0), SymTerm::power(1.0, -2.0)]);
        let c = sum(vec![SymTerm::power(1.0, 3.0), SymTerm::power(1.0, -3.0)]);
        let v = classify_bounded_graph(&a, &c);
        assert_eq!((v.relation, v.rule_id.as_str()), (Relation::NotBoundedlyIsomorphic, "R7"));
        assert!(v.detail.contains("symbolically"));
        let low = Engine::new(Budgets { k_max: 2, ..Budgets::default() });
        assert_eq!(low.classify_bounded_graph(&a, &c).relation, Relation::Undecided);
    }

    #[test]
    fn counting_self_is_none() {
        let a = sum(vec![SymTerm::power(1.0, 2.0), SymTerm::power(1.0, -2.0)]);
        assert!(counting_obstructed(&a, &a, &b()).is_none());
        let iv = pw(-2.0).with_interval(2.0, 3.0).unwrap();
        assert!(counting_obstructed(&iv, &iv, &b()).is_none());
    }

    #[test]
    fn perturbation_examples() {
        let c = inverse_perturbation_iso(&pw(2.0), &pw(2.0), &b()).unwrap().unwrap();
        assert_eq!(c.s, 0.0);
        let shifted = single(SymTerm::new(1.0, 1.0, 2.0, 1.0, 0.0).unwrap());
        let c = inverse_perturbation_iso(&pw(2.0), &shifted, &b()).unwrap().unwrap();
        assert!((c.s - 0.75).abs() < 1e-15);
        assert!(inverse_perturbation_iso(&konst(2.0), &konst(0.5), &b()).unwrap().is_none());
        assert!(inverse_perturbation_iso(&pw(-1.0), &konst(1.0), &b()).is_err());
    }

    #[test]
    fn algebraic_examples() {
        let e = Engine::default();
        let v = e.classify_algebraic_graph(&pw(-1.0), &pw(-2.0)).unwrap();
        assert_eq!((v.relation, v.rule_id.as_str()), (Relation::AlgebraicallyIsomorphic, "A3"));
        let v = e.classify_algebraic_graph(&konst(2.0), &pw(-1.0)).unwrap();
        assert_eq!(v.relation, Relation::NotAlgebraicallyIsomorphic);
        let v = e.classify_algebraic_graph(&konst(2.0), &konst(3.0)).unwrap();
        assert_eq!(v.relation, Relation::AlgebraicallyIsomorphic);
        assert!(e.classify_algebraic_graph(&pw(-1.0).with_kernel(CardinalDim::Finite(2)), &pw(-1.0)).is_err());
    }

    #[test]
    fn derived_examples() {
        assert_eq!(derived_three_compatible(&pw(-1.0), &pw(2.0)).relation, Relation::NotBoundedlyIsomorphic);
        assert_eq!(derived_three_compatible(&pw(-1.0), &pw(-1.0)).relation, Relation::BoundedlyIsomorphic);
        assert_eq!(derived_three_compatible(&pw(2.0), &pw(3.0)).relation, Relation::Undecided);
    }

    #[test]
    fn sum_closed_examples() {
        assert!(!sum_closed_graph(&DiagonalSpec::cos_sin_pair(SymTerm::power(1.0, -1.0)).unwrap()));
        assert!(sum_closed_graph(&konst(2.0)));
        assert!(!sum_closed_graph(&pw(-1.0)));
    }

    #[test]
    fn disabling_ratio_rule_changes_verdict() {
        let e = Engine::default().without(Rule::RatioComparison);
        let v = e.classify_bounded_graph(&pw(-1.0), &pw(-2.0));
        assert_eq!(v.rule_id, "R6");
    }
}
