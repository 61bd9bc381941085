//! Brute-force verification over a prime field.
//!
//! Each trial fixes a prime and a seed, draws a second quadric `Q′` and the
//! points on `D = {xw − yz = 0} ∩ Q′`, then computes the space of degree-d
//! forms with the prescribed multiplicities by exact elimination. Sampling
//! probes look for base points and for length-2 schemes the sections fail to
//! separate.

mod curve;
pub mod field;
pub mod geometry;
pub mod linalg;
pub mod monomials;
mod probes;

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use field::PrimeField;
pub use geometry::GeometrySetup;
pub use probes::{ProbeCategory, ProbeOutcome};

use crate::criteria::Mode;
use crate::divclass::ThreefoldClass;
use crate::error::{Error, Result};
use linalg::Rref;
use monomials::{MonomialBasis, Point};

/// Three primes just below 2³¹, all ≡ 3 (mod 4).
pub const DEFAULT_PRIMES: [u64; 3] = [2147483647, 2147483587, 2147483579];
pub const DEFAULT_TRIALS: usize = 5;
pub const DEFAULT_PROBES: usize = 64;
/// Fresh second quadrics tried when point sampling keeps failing.
const QUADRIC_ATTEMPTS: usize = 8;

/// Primes, seeds and probe budget of an oracle run. Trial `k` of prime `p`
/// uses seed `seed + k`; all randomness is derived from `(p, seed + k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldConfig {
    pub primes: Vec<u64>,
    pub seed: u64,
    pub trials: usize,
    /// Probe points per probe kind; 0 skips probing.
    pub probes: usize,
}

impl Default for FieldConfig {
    fn default() -> Self {
        Self { primes: DEFAULT_PRIMES.to_vec(), seed: 0, trials: DEFAULT_TRIALS, probes: DEFAULT_PROBES }
    }
}

impl FieldConfig {
    pub fn fields(&self) -> Result<Vec<PrimeField>> {
        self.primes.iter().map(|&p| PrimeField::new(p)).collect()
    }

    /// Every `(prime, seed)` pair, primes outermost.
    pub fn trial_keys(&self) -> Vec<(u64, u64)> {
        self.primes
            .iter()
            .flat_map(|&p| (0..self.trials as u64).map(move |k| (p, self.seed.wrapping_add(k))))
            .collect()
    }

    pub fn check_degree(&self, d: i64) -> Result<()> {
        for &p in &self.primes {
            if d >= 0 && p <= d as u64 {
                return Err(Error::PrimeTooSmall { p, d });
            }
        }
        Ok(())
    }
}

fn trial_rng(prime: u64, seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(prime << 1 | stream);
    rng
}

/// The geometry of trial `(prime, seed)` with `r` points. The points for a
/// smaller `r` are a prefix of those for a larger one.
pub fn trial_geometry(prime: u64, seed: u64, mode: Mode, r: usize) -> Result<GeometrySetup> {
    let field = PrimeField::new(prime)?;
    let mut rng = trial_rng(prime, seed, 0);
    let mut last = Error::Sampling(0);
    for _ in 0..QUADRIC_ATTEMPTS {
        let mut g = GeometrySetup::new(field, mode, &mut rng);
        match g.sample_points(r, &mut rng) {
            Ok(()) => return Ok(g),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Probe randomness of trial `(prime, seed)`, independent of the geometry stream.
pub fn probe_rng(prime: u64, seed: u64) -> ChaCha8Rng {
    trial_rng(prime, seed, 1)
}

fn check_entries(c: &ThreefoldClass) -> Result<()> {
    if c.d < 0 || c.mults.iter().any(|&m| m < 0) {
        return Err(Error::NegativeEntries(c.to_string()));
    }
    Ok(())
}

/// The multiplicity conditions of `c` at the points of `g`, one row per
/// Taylor coefficient, columns indexed by the degree-d monomials.
pub fn conditions_matrix(c: &ThreefoldClass, g: &GeometrySetup) -> Result<Vec<Vec<u64>>> {
    check_entries(c)?;
    if g.field.p() <= c.d as u64 {
        return Err(Error::PrimeTooSmall { p: g.field.p(), d: c.d });
    }
    if g.r() < c.r() {
        return Err(Error::Invariant(format!("{} needs {} points, geometry has {}", c, c.r(), g.r())));
    }
    let basis = MonomialBasis::new(c.d as u32);
    Ok(c.mults
        .iter()
        .zip(&g.points)
        .flat_map(|(&m, p)| basis.multiplicity_rows(&g.field, p, m as u32))
        .collect())
}

/// The sections of `c` in one trial, kept as the row-reduced conditions.
#[derive(Clone, Debug)]
pub struct SectionSpace {
    basis: MonomialBasis,
    conditions: Rref,
    rows: usize,
    mults: Vec<u32>,
    /// Columns without a pivot, one per kernel basis vector.
    free: Vec<usize>,
    /// `pivot_coeffs[i][j]`: entry of kernel vector `j` at the pivot of row `i`.
    pivot_coeffs: Vec<Vec<u64>>,
}

impl SectionSpace {
    pub fn build(c: &ThreefoldClass, g: &GeometrySetup) -> Result<Self> {
        let matrix = conditions_matrix(c, g)?;
        let basis = MonomialBasis::new(c.d as u32);
        let rows = matrix.len();
        let conditions = Rref::from_rows(g.field, basis.len(), matrix.iter().cloned());
        let kernel = conditions.kernel_basis();
        let free = (0..basis.len()).filter(|c| !conditions.pivots().contains(c)).collect();
        let pivot_coeffs = conditions.pivots().iter().map(|&piv| kernel.iter().map(|k| k[piv]).collect()).collect();
        let mults = c.mults.iter().map(|&m| m as u32).collect();
        let space = Self { basis, conditions, rows, mults, free, pivot_coeffs };
        space.check_random_section(&matrix, &mut trial_rng(g.field.p(), rows as u64, 1))?;
        Ok(space)
    }

    /// A random section must satisfy every condition row, pivot or not.
    fn check_random_section<R: Rng + ?Sized>(&self, matrix: &[Vec<u64>], rng: &mut R) -> Result<()> {
        let f = self.random_section(rng);
        let field = self.field();
        for (i, row) in matrix.iter().enumerate() {
            if field.dot(row, &f) != 0 {
                return Err(Error::Invariant(format!("section violates condition row {i}")));
            }
        }
        Ok(())
    }

    fn field(&self) -> PrimeField {
        self.conditions.field()
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.mults
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.basis.len()
    }

    pub fn rank(&self) -> usize {
        self.conditions.rank()
    }

    pub fn h0(&self) -> usize {
        self.conditions.nullity()
    }

    /// A functional on forms, restricted to the sections: its values on the kernel basis.
    fn restrict(&self, functional: Vec<u64>) -> Vec<u64> {
        let p = self.field().p() as u128;
        let mut acc: Vec<u128> = self.free.iter().map(|&f| functional[f] as u128).collect();
        for (coeffs, &piv) in self.pivot_coeffs.iter().zip(self.conditions.pivots()) {
            let v = functional[piv];
            if v == 0 {
                continue;
            }
            for (a, &c) in acc.iter_mut().zip(coeffs) {
                *a += (c * v) as u128;
            }
        }
        acc.into_iter().map(|a| (a % p) as u64).collect()
    }

    /// Whether every section vanishes at `x`.
    pub fn vanishes_at(&self, x: &Point) -> bool {
        self.h0() == 0 || self.restrict(self.basis.evaluation(&self.field(), x)).iter().all(|&c| c == 0)
    }

    /// Rank of two linear functionals restricted to the sections.
    pub fn separation_rank(&self, a: Vec<u64>, b: Vec<u64>) -> usize {
        if self.h0() == 0 {
            return 0;
        }
        let (a, b) = (self.restrict(a), self.restrict(b));
        Rref::from_rows(self.field(), a.len(), [a, b]).rank()
    }

    /// A uniformly random section (zero when there are none).
    pub fn random_section<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u64> {
        self.conditions.random_kernel_vector(rng)
    }

    /// A random nonzero section vanishing at `x`, if one exists.
    pub fn random_section_through<R: Rng + ?Sized>(&self, x: &Point, rng: &mut R) -> Option<Vec<u64>> {
        let mut e = self.conditions.clone();
        e.insert(self.basis.evaluation(&self.field(), x));
        (e.nullity() > 0).then(|| e.random_kernel_vector(rng))
    }
}

/// Dimension data of one trial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub prime: u64,
    pub seed: u64,
    pub rank: usize,
    pub h0: i64,
    pub dim: i64,
}

/// One probe kind, merged over all trials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeSummary {
    pub name: String,
    pub category: ProbeCategory,
    pub tested: usize,
    pub fired: usize,
    /// First firing, as `p=… seed=… <points>`.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub schema: u32,
    pub class: ThreefoldClass,
    pub mode: Mode,
    pub primes: Vec<u64>,
    pub seed: u64,
    pub trials: usize,
    pub rows: usize,
    pub cols: usize,
    pub vdim: i64,
    pub edim: i64,
    /// Rank in the trial attaining the minimum dimension.
    pub rank: usize,
    pub h0: i64,
    /// Minimum over trials.
    pub dim: i64,
    pub dim_max: i64,
    pub h1: i64,
    pub special: bool,
    pub per_trial: Vec<TrialSummary>,
    pub probes: Vec<ProbeSummary>,
    /// Some base-locus probe fired, so separation results are not meaningful.
    pub separation_flagged: bool,
    /// No base-locus probe fired; `None` when probing was skipped.
    pub bpf_evidence: Option<bool>,
    /// No probe of either kind fired; `None` when probing was skipped.
    pub va_evidence: Option<bool>,
}

/// Everything one trial contributes to a report.
#[derive(Clone, Debug)]
pub struct TrialOutcome {
    pub summary: TrialSummary,
    pub probes: Vec<ProbeOutcome>,
}

/// Dimension and probes of `c` on an already sampled geometry.
pub fn run_trial(c: &ThreefoldClass, g: &GeometrySetup, seed: u64, probes: usize) -> Result<TrialOutcome> {
    let space = SectionSpace::build(c, g)?;
    let prime = g.field.p();
    let h0 = space.h0() as i64;
    let summary = TrialSummary { prime, seed, rank: space.rank(), h0, dim: h0 - 1 };
    let mut outcomes = Vec::new();
    if probes > 0 {
        let mut rng = probe_rng(prime, seed);
        outcomes.extend(probes::probe_base_locus(&space, g, probes, &mut rng));
        outcomes.extend(probes::probe_separation(&space, g, probes, &mut rng));
    }
    Ok(TrialOutcome { summary, probes: outcomes })
}

/// Folds trial outcomes (in trial order) into a report and checks its invariants.
pub fn merge_report(
    c: &ThreefoldClass,
    mode: Mode,
    cfg: &FieldConfig,
    outcomes: Vec<TrialOutcome>,
) -> Result<OracleReport> {
    let vdim = c.vdim()?;
    let edim = c.edim()?;
    let rows = c.condition_count();
    let cols = crate::divclass::binom3(c.d + 3) as usize;
    let best = outcomes
        .iter()
        .min_by_key(|t| t.summary.dim)
        .ok_or_else(|| Error::Invariant("no trials configured".into()))?;
    let (rank, h0, dim) = (best.summary.rank, best.summary.h0, best.summary.dim);
    let dim_max = outcomes.iter().map(|t| t.summary.dim).max().unwrap_or(dim);
    let h1 = h0 - (vdim + 1);
    for t in &outcomes {
        let s = &t.summary;
        if s.h0 - (vdim + 1) < 0 || s.dim < edim {
            return Err(Error::Invariant(format!(
                "{c}: trial p={} seed={} has dim {} below edim {edim}",
                s.prime, s.seed, s.dim
            )));
        }
    }

    let mut probes: Vec<ProbeSummary> = Vec::new();
    for t in &outcomes {
        for o in &t.probes {
            let witness = o.witness.as_ref().map(|w| format!("p={} seed={} {w}", t.summary.prime, t.summary.seed));
            match probes.iter_mut().find(|s| s.name == o.name) {
                Some(s) => {
                    s.tested += o.tested;
                    s.fired += o.fired;
                    if s.witness.is_none() {
                        s.witness = witness;
                    }
                }
                None => probes.push(ProbeSummary {
                    name: o.name.to_string(),
                    category: o.category,
                    tested: o.tested,
                    fired: o.fired,
                    witness,
                }),
            }
        }
    }
    let fired = |cat| probes.iter().any(|p| p.category == cat && p.fired > 0);
    let probed = !probes.is_empty();
    let base = fired(ProbeCategory::BaseLocus);
    let sep = fired(ProbeCategory::Separation);

    Ok(OracleReport {
        schema: 1,
        class: c.clone(),
        mode,
        primes: cfg.primes.clone(),
        seed: cfg.seed,
        trials: cfg.trials,
        rows,
        cols,
        vdim,
        edim,
        rank,
        h0,
        dim,
        dim_max,
        h1,
        special: h1 > 0,
        per_trial: outcomes.into_iter().map(|t| t.summary).collect(),
        probes,
        separation_flagged: base,
        bpf_evidence: probed.then_some(!base),
        va_evidence: probed.then_some(!base && !sep),
    })
}

/// Runs the full battery for one class, trials in parallel.
pub fn verify(c: &ThreefoldClass, mode: Mode, cfg: &FieldConfig) -> Result<OracleReport> {
    check_entries(c)?;
    cfg.fields()?;
    cfg.check_degree(c.d)?;
    let outcomes = cfg
        .trial_keys()
        .into_par_iter()
        .map(|(p, seed)| {
            let g = trial_geometry(p, seed, mode, c.r())?;
            run_trial(c, &g, seed, cfg.probes)
        })
        .collect::<Result<Vec<_>>>()?;
    merge_report(c, mode, cfg, outcomes)
}

/// Dimension only, without probes.
pub fn dim_system(c: &ThreefoldClass, mode: Mode, cfg: &FieldConfig) -> Result<OracleReport> {
    verify(c, mode, &FieldConfig { probes: 0, ..cfg.clone() })
}

impl OracleReport {
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "class        {}", self.class);
        let _ = writeln!(s, "matrix       {} x {}", self.rows, self.cols);
        let _ = writeln!(s, "vdim / edim  {} / {}", self.vdim, self.edim);
        let _ = writeln!(s, "dim          {} (max over trials {})", self.dim, self.dim_max);
        let _ = writeln!(s, "h1           {}{}", self.h1, if self.special { " (special)" } else { "" });
        let _ = writeln!(s, "trials       {} primes x {} seeds from {}", self.primes.len(), self.trials, self.seed);
        for p in &self.probes {
            let _ = write!(s, "  {:<20} {:>5} tested {:>5} fired", p.name, p.tested, p.fired);
            if let Some(w) = &p.witness {
                let _ = write!(s, "  e.g. {w}");
            }
            s.push('\n');
        }
        let show = |e: Option<bool>| e.map_or("not probed".to_string(), |b| b.to_string());
        let _ = writeln!(s, "bpf evidence {}", show(self.bpf_evidence));
        let _ = write!(s, "va evidence  {}", show(self.va_evidence));
        if self.separation_flagged {
            s.push_str(" (base points found; separation not meaningful)");
        }
        s.push('\n');
        s
    }

    pub fn probe(&self, name: &str) -> Option<&ProbeSummary> {
        self.probes.iter().find(|p| p.name == name)
    }
}
