//! Exact finite-size ground truth for the two-walk vesicle model.
//!
//! Two routes to Z_n(c,s,q):
//!
//! 1. Brute force: enumerate every pair of same-length, same-endpoint,
//!    non-crossing NE paths, compute each configuration's statistics by
//!    direct geometry, and tally exact big-integer monomials. Maximally
//!    transparent; n <= 16.
//! 2. Transfer recursion: diagonal-time DP over the vertical separation of
//!    the two walks, with per-step normalization and weighted accumulators
//!    for the mean contact and area counts. O(n) states, O(n^2) total work;
//!    usable to n ~ 1000 and beyond.
//!
//! The DP's per-step area rule (half the sum of separations before and after
//! the step pair) is certified against the brute-force oracle, not derived
//! here; see the oracle-agreement tests.

use crate::error::{Error, Result};
use crate::poly::LaurentPoly3;
use crate::qseries::ModelPoint;
use crate::scaling::{loglog_fit, ScalingFit};

/// Hard cap for brute-force enumeration; the config count grows like 4^n/n.
pub const MAX_BRUTE_FORCE_N: usize = 16;

/// One unit lattice step of a directed walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    E,
    N,
}

/// A pair of non-crossing NE paths of equal length with a common endpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkPairConfig {
    pub top: Vec<Step>,
    pub bottom: Vec<Step>,
}

/// Statistics of one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConfigStats {
    /// n = n_x + n_y, the number of steps of each walk.
    pub length: usize,
    /// Shared sites along the common progression, origin excluded.
    pub contacts: u32,
    /// h = n_y - n_x of the common endpoint.
    pub displacement: i32,
    /// Enclosed unit plaquettes.
    pub area: u32,
}

/// Mean contact and area counts at fixed length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanObservables {
    pub contacts: f64,
    pub area: f64,
}

/// Which observable a finite-size fit tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    Contacts,
    Area,
}

fn check_n(n: usize) -> Result<()> {
    if n > MAX_BRUTE_FORCE_N {
        return Err(Error::OutOfBounds {
            what: "n",
            value: n as i64,
            max: MAX_BRUTE_FORCE_N as i64,
        });
    }
    Ok(())
}

/// Streaming enumeration of all configurations of length `n`, in
/// lexicographic order of the joint step sequence with
/// (E,E) < (E,N) < (N,E) < (N,N) per position.
pub fn enumerate_pairs(n: usize) -> Result<WalkPairs> {
    check_n(n)?;
    Ok(WalkPairs::new(n))
}

/// Iterator over walk pairs; backtracking DFS over joint step choices,
/// pruned by the non-crossing and return-to-zero-separation constraints.
pub struct WalkPairs {
    n: usize,
    top: Vec<Step>,
    bottom: Vec<Step>,
    // separation y_top - y_bottom after each completed step (index 0 = origin)
    sep: Vec<i32>,
    // per-depth index into PAIR_CHOICES of the branch currently taken
    choice: Vec<u8>,
    state: IterState,
}

enum IterState {
    Fresh,
    Running,
    Done,
}

// (top step, bottom step, separation delta)
const PAIR_CHOICES: [(Step, Step, i32); 4] = [
    (Step::E, Step::E, 0),
    (Step::E, Step::N, -1),
    (Step::N, Step::E, 1),
    (Step::N, Step::N, 0),
];

impl WalkPairs {
    fn new(n: usize) -> Self {
        WalkPairs {
            n,
            top: Vec::with_capacity(n),
            bottom: Vec::with_capacity(n),
            sep: vec![0],
            choice: Vec::with_capacity(n),
            state: IterState::Fresh,
        }
    }

    /// A branch is viable if the walks stay weakly ordered and the
    /// separation can still return to zero in the remaining steps.
    fn viable(&self, depth: usize, delta: i32) -> bool {
        let s = self.sep[depth] + delta;
        s >= 0 && s <= (self.n - depth - 1) as i32
    }

    fn push(&mut self, idx: u8) {
        let depth = self.choice.len();
        let (t, b, d) = PAIR_CHOICES[idx as usize];
        self.top.push(t);
        self.bottom.push(b);
        self.sep.push(self.sep[depth] + d);
        self.choice.push(idx);
    }

    fn pop(&mut self) -> u8 {
        self.top.pop();
        self.bottom.pop();
        self.sep.pop();
        self.choice.pop().expect("pop on empty prefix")
    }

    /// Extend the current prefix to the lexicographically first leaf.
    fn descend(&mut self) {
        while self.choice.len() < self.n {
            let depth = self.choice.len();
            let idx = (0..4)
                .find(|&i| self.viable(depth, PAIR_CHOICES[i as usize].2))
                .expect("(E,E) is always viable");
            self.push(idx);
        }
    }

    /// Backtrack to the next unexplored branch and descend; false when exhausted.
    fn advance(&mut self) -> bool {
        loop {
            if self.choice.is_empty() {
                return false;
            }
            let last = self.pop();
            let depth = self.choice.len();
            let mut idx = last + 1;
            while idx < 4 {
                if self.viable(depth, PAIR_CHOICES[idx as usize].2) {
                    self.push(idx);
                    self.descend();
                    return true;
                }
                idx += 1;
            }
        }
    }

    fn current(&self) -> WalkPairConfig {
        WalkPairConfig {
            top: self.top.clone(),
            bottom: self.bottom.clone(),
        }
    }
}

impl Iterator for WalkPairs {
    type Item = WalkPairConfig;

    fn next(&mut self) -> Option<WalkPairConfig> {
        match self.state {
            IterState::Fresh => {
                self.state = IterState::Running;
                self.descend();
                Some(self.current())
            }
            IterState::Running => {
                if self.advance() {
                    Some(self.current())
                } else {
                    self.state = IterState::Done;
                    None
                }
            }
            IterState::Done => None,
        }
    }
}

/// Validate a configuration and compute its statistics.
///
/// The area is an exact scanline count: for each abscissa column, the number
/// of plaquettes strictly between the two paths is the height of the top
/// path's east step minus the height of the bottom path's east step.
pub fn config_stats(cfg: &WalkPairConfig) -> Result<ConfigStats> {
    let n = cfg.top.len();
    if cfg.bottom.len() != n {
        return Err(Error::Domain(format!(
            "walks must have equal length (top {}, bottom {})",
            n,
            cfg.bottom.len()
        )));
    }

    let (mut y_top, mut y_bot) = (0i32, 0i32);
    let mut contacts = 0u32;
    let mut top_east_heights = Vec::new();
    let mut bot_east_heights = Vec::new();

    for k in 0..n {
        match cfg.top[k] {
            Step::E => top_east_heights.push(y_top),
            Step::N => y_top += 1,
        }
        match cfg.bottom[k] {
            Step::E => bot_east_heights.push(y_bot),
            Step::N => y_bot += 1,
        }
        if y_top < y_bot {
            return Err(Error::CrossingPaths { step: k + 1 });
        }
        if y_top == y_bot {
            contacts += 1;
        }
    }

    if top_east_heights.len() != bot_east_heights.len() || y_top != y_bot {
        return Err(Error::Domain(
            "walks must share their endpoint".to_string(),
        ));
    }
    // Shared endpoint means the final shared-site count included it; the
    // contact tally above counted every k with equal positions, which is
    // exactly the shared sites excluding the origin.

    let area: i32 = top_east_heights
        .iter()
        .zip(&bot_east_heights)
        .map(|(t, b)| t - b)
        .sum();
    debug_assert!(area >= 0);

    let n_x = top_east_heights.len() as i32;
    let n_y = y_top;
    Ok(ConfigStats {
        length: n,
        contacts,
        displacement: n_y - n_x,
        area: area as u32,
    })
}

/// Exact partition function Z_n(c,s,q) by explicit enumeration.
pub fn brute_force_zn(n: usize) -> Result<LaurentPoly3> {
    check_n(n)?;
    let mut z = LaurentPoly3::new();
    for cfg in enumerate_pairs(n)? {
        let st = config_stats(&cfg)?;
        z.tally(st.contacts, st.displacement, st.area);
    }
    Ok(z)
}

// ---------------------------------------------------------------------------
// Transfer recursion
// ---------------------------------------------------------------------------

/// Per-separation accumulators: total weight, weight-summed contacts,
/// weight-summed doubled area.
#[derive(Debug, Clone, Copy, Default)]
struct DpCell {
    w: f64,
    wm: f64,
    wa2: f64,
}

/// Full DP sweep to `n_max`. Returns, for every length k in 0..=n_max,
/// (ln Z_k, <m>_k, <a>_k) read off the zero-separation cell.
fn transfer_sweep(n_max: usize, point: &ModelPoint) -> Result<Vec<(f64, f64, f64)>> {
    point.require_positive()?;
    let (c, s, q) = (point.c, point.s, point.q);
    let r = q.sqrt(); // area enters through half-integer plaquette increments
    let s_inv = 1.0 / s;

    let mut cur = vec![DpCell::default(); n_max + 1];
    let mut new = vec![DpCell::default(); n_max + 1];
    cur[0].w = 1.0;
    let mut ln_norm = 0.0f64;

    let mut out = Vec::with_capacity(n_max + 1);
    out.push((0.0, 0.0, 0.0)); // Z_0 = 1, no contacts, no area

    for k in 0..n_max {
        for cell in new.iter_mut() {
            *cell = DpCell::default();
        }
        let max_sep = k.min(n_max - 1);
        for sep in 0..=max_sep {
            let cell = cur[sep];
            if cell.w == 0.0 {
                continue;
            }
            // (top, bottom) step pairs; s weight follows the bottom step,
            // area weight is r^(sep_before + sep_after), contacts pick up a
            // factor c whenever the pair lands at zero separation.
            let mut apply = |sep_new: usize, mult: f64, da2: f64| {
                let contact = sep_new == 0;
                let m = if contact { mult * c } else { mult };
                let dst = &mut new[sep_new];
                dst.w += cell.w * m;
                dst.wm += (cell.wm + if contact { cell.w } else { 0.0 }) * m;
                dst.wa2 += (cell.wa2 + cell.w * da2) * m;
            };
            let r2 = r.powi(2 * sep as i32);
            // (E,E): separation unchanged
            apply(sep, s_inv * r2, 2.0 * sep as f64);
            // (N,N): separation unchanged
            apply(sep, s * r2, 2.0 * sep as f64);
            // (N,E): separation grows
            if sep + 1 <= n_max {
                apply(sep + 1, s_inv * r2 * r, 2.0 * sep as f64 + 1.0);
            }
            // (E,N): separation shrinks
            if sep >= 1 {
                apply(sep - 1, s * r2 / r, 2.0 * sep as f64 - 1.0);
            }
        }
        std::mem::swap(&mut cur, &mut new);

        let total: f64 = cur.iter().map(|cl| cl.w).sum();
        if !total.is_finite() || total <= 0.0 {
            return Err(Error::Overflow {
                context: "transfer recursion normalization",
                advice: "weights left the f64 range in one step",
            });
        }
        let inv = 1.0 / total;
        for cell in cur.iter_mut() {
            cell.w *= inv;
            cell.wm *= inv;
            cell.wa2 *= inv;
        }
        ln_norm += total.ln();

        if cur[0].w == 0.0 {
            // At q > 1 the weight piles up at wide separations; once the
            // return weight underflows, Z_n is unrecoverable in f64.
            return Err(Error::Overflow {
                context: "transfer recursion at q > 1",
                advice: "the separation weight spread exceeded the f64 range; \
                         this regime is exact only at small n, reduce n",
            });
        }

        let zero = cur[0];
        let ln_z = ln_norm + zero.w.ln();
        out.push((ln_z, zero.wm / zero.w, 0.5 * zero.wa2 / zero.w));
    }
    Ok(out)
}

/// ln Z_n(c,s,q) by the transfer recursion; stable at any feasible n.
pub fn transfer_ln_zn(n: usize, point: &ModelPoint) -> Result<f64> {
    Ok(transfer_sweep(n, point)?[n].0)
}

/// Z_n(c,s,q) by the transfer recursion.
///
/// Errors with an overflow hint when ln Z exceeds the f64 exponent range
/// (large n with q > 1); `transfer_ln_zn` stays finite there.
pub fn transfer_zn(n: usize, point: &ModelPoint) -> Result<f64> {
    let ln_z = transfer_ln_zn(n, point)?;
    if ln_z > (f64::MAX).ln() {
        return Err(Error::Overflow {
            context: "transfer_zn exponentiation",
            advice: "use transfer_ln_zn (log-space accumulation)",
        });
    }
    Ok(ln_z.exp())
}

/// Mean contact and area counts at length n via exact weighted accumulators
/// (no finite differences).
pub fn mean_observables(n: usize, point: &ModelPoint) -> Result<MeanObservables> {
    let sweep = transfer_sweep(n, point)?;
    let (_, m, a) = sweep[n];
    Ok(MeanObservables {
        contacts: m,
        area: a,
    })
}

/// Means at every length 0..=n_max from a single DP sweep.
pub fn mean_observables_profile(n_max: usize, point: &ModelPoint) -> Result<Vec<MeanObservables>> {
    Ok(transfer_sweep(n_max, point)?
        .into_iter()
        .map(|(_, m, a)| MeanObservables {
            contacts: m,
            area: a,
        })
        .collect())
}

/// Log-log fit of <m>_n or <a>_n against n over `n_grid`, with a
/// successive-slope extrapolant for the strong finite-size corrections.
pub fn finite_size_exponent(
    observable: Observable,
    point: &ModelPoint,
    n_grid: &[usize],
) -> Result<ScalingFit> {
    if n_grid.len() < 4 {
        return Err(Error::FitDomain(format!(
            "need at least 4 grid points, got {}",
            n_grid.len()
        )));
    }
    if n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::FitDomain("n grid must be strictly increasing".into()));
    }
    let n_max = *n_grid.last().expect("grid nonempty");
    let profile = mean_observables_profile(n_max, point)?;
    let mut xs = Vec::with_capacity(n_grid.len());
    let mut ys = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let v = match observable {
            Observable::Contacts => profile[n].contacts,
            Observable::Area => profile[n].area,
        };
        if v <= 0.0 {
            return Err(Error::FitDomain(format!(
                "observable mean {v} at n = {n} is not positive"
            )));
        }
        xs.push(n as f64);
        ys.push(v);
    }
    loglog_fit(&xs, &ys)
}
