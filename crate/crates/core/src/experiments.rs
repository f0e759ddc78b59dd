//! Batch simulation over board sizes and seeds, with checks of the proven
//! round bounds.

use std::io;

use serde::Serialize;

use crate::error::Error;
use crate::game::{default_round_cap, play_game_observed};
use crate::strategies::{composed_round_bound, cube_dimension, StrategySpec};

/// Largest board the harness will allocate.
pub const MAX_BOARD: usize = 1 << 24;

/// Which bound checks applied to a game, and whether they held.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BoundFlags {
    /// Greedy Claimer: at most `floor(log2 n) + 1` rounds.
    pub greedy_upper: Option<bool>,
    /// Composed Claimer: terminal within `(4k - 1) * 3 + 1` rounds.
    pub composed_upper: Option<bool>,
    /// Composed Claimer never needed more than `2k` lazy moves on a side.
    pub composed_lazy_phase: Option<bool>,
    /// Greedy Namer: every round starting from `|A| >= 100` leaves at least
    /// `0.99 |A|^2 / (4n)` points.
    pub greedy_namer_growth: Option<bool>,
}

/// One simulated game.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatchRecord {
    pub n: usize,
    pub namer: String,
    pub claimer: String,
    pub seed: u64,
    pub rounds: usize,
    pub terminal: bool,
    /// `|A_i|` after each round.
    pub per_round_sizes: Vec<usize>,
    /// The round bound that applies to this claimer, if any.
    pub bound: Option<usize>,
    pub bound_ok: Option<bool>,
    pub flags: BoundFlags,
    /// The transcript passed replay validation.
    pub transcript_valid: bool,
}

/// `floor(log2 n) + 1`: halving the board each round empties it in this many rounds.
pub fn greedy_round_bound(n: usize) -> usize {
    n.max(1).ilog2() as usize + 1
}

/// The round bound attached to a Claimer spec on `[n]`, if one is proven.
pub fn claimer_bound(claimer: &StrategySpec, n: usize) -> Option<usize> {
    match claimer {
        StrategySpec::Greedy => Some(greedy_round_bound(n)),
        StrategySpec::Composed { k, .. } => Some(composed_round_bound(k.unwrap_or_else(|| cube_dimension(n)))),
        StrategySpec::Block => Some(3),
        _ => None,
    }
}

/// Checks the greedy-Namer inequality on a size sequence starting from `n`.
/// Returns the index of the first violating round.
pub fn growth_violation(n: usize, sizes: &[usize]) -> Option<usize> {
    let mut before = n;
    for (i, &after) in sizes.iter().enumerate() {
        if before >= 100 {
            let need = 0.99 * (before as f64).powi(2) / (4.0 * n as f64);
            if (after as f64) < need {
                return Some(i);
            }
        }
        before = after;
    }
    None
}

/// Plays one game and records it.
pub fn run_game(namer: &StrategySpec, claimer: &StrategySpec, n: usize, seed: u64) -> Result<MatchRecord, Error> {
    if n > MAX_BOARD {
        return Err(Error::Capacity(format!("n = {n} exceeds the harness limit {MAX_BOARD}")));
    }
    if n == 0 {
        return Err(Error::Capacity("the board must have at least one point".into()));
    }
    let bound = claimer_bound(claimer, n);
    let cap = default_round_cap(n).max(bound.map_or(0, |b| b + 1));
    let mut namer_h = namer.namer(n, seed)?;
    let mut claimer_h = claimer.claimer(n, seed)?;
    let mut sizes = Vec::new();
    let t = play_game_observed(namer_h.as_mut(), claimer_h.as_mut(), n, cap, |_, a| sizes.push(a.len()))?;
    let rounds = t.len();
    let bound_ok = bound.map(|b| t.terminal && rounds <= b);

    let mut flags = BoundFlags::default();
    match claimer {
        StrategySpec::Greedy => flags.greedy_upper = bound_ok,
        StrategySpec::Composed { .. } => {
            flags.composed_upper = bound_ok;
            flags.composed_lazy_phase = Some(!claimer_h.bound_violated());
        }
        _ => {}
    }
    if *namer == StrategySpec::Greedy {
        flags.greedy_namer_growth = Some(growth_violation(n, &sizes).is_none());
    }
    Ok(MatchRecord {
        n,
        namer: namer.to_string(),
        claimer: claimer.to_string(),
        seed,
        rounds,
        terminal: t.terminal,
        per_round_sizes: sizes,
        bound,
        bound_ok,
        flags,
        transcript_valid: t.is_valid(),
    })
}

/// One record per `(n, seed)`; pairs with no randomness run only the first seed.
pub fn run_matchup(
    namer: &StrategySpec,
    claimer: &StrategySpec,
    n_list: &[usize],
    seeds: &[u64],
) -> Result<Vec<MatchRecord>, Error> {
    let seeds = if namer.is_randomized() || claimer.is_randomized() {
        seeds
    } else {
        &seeds[..seeds.len().min(1)]
    };
    let mut out = Vec::with_capacity(n_list.len() * seeds.len());
    for &n in n_list {
        for &seed in seeds {
            out.push(run_game(namer, claimer, n, seed)?);
        }
    }
    out.sort_by(|a, b| (a.n, a.seed, &a.namer, &a.claimer).cmp(&(b.n, b.seed, &b.namer, &b.claimer)));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub n: usize,
    pub seed: u64,
    pub namer: String,
    pub claimer: String,
    pub check: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub records: usize,
    pub checks: usize,
    pub violations: Vec<Violation>,
}

impl BoundsReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Re-derives every applicable bound from the records and lists the failures.
pub fn check_bounds(records: &[MatchRecord]) -> BoundsReport {
    let mut report = BoundsReport {
        records: records.len(),
        ..Default::default()
    };
    for r in records {
        let mut fail = |check: &'static str, detail: String| {
            report.violations.push(Violation {
                n: r.n,
                seed: r.seed,
                namer: r.namer.clone(),
                claimer: r.claimer.clone(),
                check,
                detail,
            })
        };
        report.checks += 1;
        if !r.transcript_valid {
            fail("transcript", "transcript did not revalidate".into());
        }
        let claimer: Option<StrategySpec> = r.claimer.parse().ok();
        match claimer {
            Some(StrategySpec::Greedy) => {
                report.checks += 1;
                let b = greedy_round_bound(r.n);
                if !r.terminal || r.rounds > b {
                    fail("greedy-upper", format!("{} rounds (terminal {}) > {b}", r.rounds, r.terminal));
                }
            }
            Some(StrategySpec::Composed { k, .. }) => {
                report.checks += 2;
                let b = composed_round_bound(k.unwrap_or_else(|| cube_dimension(r.n)));
                if !r.terminal || r.rounds > b {
                    fail("composed-upper", format!("{} rounds (terminal {}) > {b}", r.rounds, r.terminal));
                }
                if r.flags.composed_lazy_phase == Some(false) {
                    fail("composed-lazy-phase", "a lazy side needed more than 2k moves".into());
                }
            }
            _ => {}
        }
        if r.namer == "greedy" {
            report.checks += 1;
            if let Some(i) = growth_violation(r.n, &r.per_round_sizes) {
                fail("greedy-namer-growth", format!("round {} left too few points", i + 1));
            }
        }
    }
    report
}

/// Median, min and max rounds at one board size.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    pub log2_log2_n: f64,
    pub games: usize,
    pub median_rounds: f64,
    pub min_rounds: usize,
    pub max_rounds: usize,
    /// Rounds minus the fitted `c * log2 log2 n`.
    pub residual: f64,
}

/// Least-squares fit `rounds ≈ c * log2 log2 n` through the origin, on medians.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    pub namer: String,
    pub claimer: String,
    pub rows: Vec<GrowthRow>,
    pub c: f64,
}

fn median(values: &mut [usize]) -> f64 {
    values.sort_unstable();
    let m = values.len();
    if m == 0 {
        return f64::NAN;
    }
    if m % 2 == 1 {
        values[m / 2] as f64
    } else {
        (values[m / 2 - 1] + values[m / 2]) as f64 / 2.0
    }
}

/// Simulates a pair over a grid of sizes and summarises the growth of the game length.
pub fn growth_table(
    namer: &StrategySpec,
    claimer: &StrategySpec,
    n_grid: &[usize],
    seeds: &[u64],
) -> Result<(GrowthReport, Vec<MatchRecord>), Error> {
    let records = run_matchup(namer, claimer, n_grid, seeds)?;
    let mut grid: Vec<usize> = n_grid.to_vec();
    grid.sort_unstable();
    grid.dedup();
    let mut rows = Vec::new();
    for n in grid {
        let mut rounds: Vec<usize> = records.iter().filter(|r| r.n == n).map(|r| r.rounds).collect();
        if rounds.is_empty() {
            continue;
        }
        let x = if n >= 2 { (n as f64).log2().max(1.0).log2() } else { 0.0 };
        rows.push(GrowthRow {
            n,
            log2_log2_n: x,
            games: rounds.len(),
            min_rounds: *rounds.iter().min().unwrap(),
            max_rounds: *rounds.iter().max().unwrap(),
            median_rounds: median(&mut rounds),
            residual: 0.0,
        });
    }
    let sxx: f64 = rows.iter().map(|r| r.log2_log2_n.powi(2)).sum();
    let sxy: f64 = rows.iter().map(|r| r.log2_log2_n * r.median_rounds).sum();
    let c = if sxx > 0.0 { sxy / sxx } else { f64::NAN };
    for r in &mut rows {
        r.residual = r.median_rounds - c * r.log2_log2_n;
    }
    Ok((
        GrowthReport {
            namer: namer.to_string(),
            claimer: claimer.to_string(),
            rows,
            c,
        },
        records,
    ))
}

/// Writes records as CSV with columns `n,seed,namer,claimer,rounds,bound,bound_ok`.
pub fn write_csv<W: io::Write>(records: &[MatchRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "seed", "namer", "claimer", "rounds", "bound", "bound_ok"])?;
    for r in records {
        w.write_record([
            r.n.to_string(),
            r.seed.to_string(),
            r.namer.clone(),
            r.claimer.clone(),
            r.rounds.to_string(),
            r.bound.map(|b| b.to_string()).unwrap_or_default(),
            r.bound_ok.map(|b| b.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> StrategySpec {
        s.parse().unwrap()
    }

    #[test]
    fn greedy_pair_on_sixteen_takes_five_rounds() {
        let recs = run_matchup(&spec("greedy"), &spec("greedy"), &[16], &[0, 1, 2]).unwrap();
        assert_eq!(recs.len(), 1, "deterministic pairs run once");
        assert_eq!(recs[0].rounds, 5);
        assert_eq!(recs[0].per_round_sizes, vec![8, 4, 2, 1, 0]);
        assert_eq!(recs[0].bound, Some(5));
        assert!(check_bounds(&recs).ok());
    }

    #[test]
    fn block_responder_against_repeat() {
        for d in [1, 2, 3, 7, 50, 99] {
            let recs = run_matchup(&spec(&format!("repeat:d={d}")), &spec("block"), &[100], &[0]).unwrap();
            assert!(recs[0].terminal && recs[0].rounds <= 3, "d={d}");
        }
    }

    #[test]
    fn randomized_pairs_run_every_seed() {
        let recs = run_matchup(&spec("random"), &spec("greedy"), &[64, 32], &[3, 1, 2]).unwrap();
        assert_eq!(recs.len(), 6);
        let order: Vec<(usize, u64)> = recs.iter().map(|r| (r.n, r.seed)).collect();
        assert_eq!(order, vec![(32, 1), (32, 2), (32, 3), (64, 1), (64, 2), (64, 3)]);
        assert!(recs.iter().all(|r| r.transcript_valid));
    }

    #[test]
    fn reports_are_reproducible() {
        let a = growth_table(&spec("doubling"), &spec("composed"), &[64, 256], &[0, 1, 2]).unwrap();
        let b = growth_table(&spec("doubling"), &spec("composed"), &[64, 256], &[0, 1, 2]).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
        let mut csv_a = Vec::new();
        write_csv(&a.1, &mut csv_a).unwrap();
        let mut csv_b = Vec::new();
        write_csv(&b.1, &mut csv_b).unwrap();
        assert_eq!(csv_a, csv_b);
        let text = String::from_utf8(csv_a).unwrap();
        assert!(text.starts_with("n,seed,namer,claimer,rounds,bound,bound_ok\n64,0,doubling,composed:k=auto,"));
    }

    #[test]
    fn single_cell_growth_table() {
        let (report, records) = growth_table(&spec("greedy"), &spec("greedy"), &[256], &[4]).unwrap();
        assert_eq!(report.rows.len(), 1);
        assert_eq!(records.len(), 1);
        let row = &report.rows[0];
        assert_eq!(row.median_rounds, records[0].rounds as f64);
        assert!(row.residual.abs() < 1e-9);
    }

    #[test]
    fn violations_are_reported_as_data() {
        let mut recs = run_matchup(&spec("greedy"), &spec("greedy"), &[16], &[0]).unwrap();
        recs[0].rounds = 9;
        let report = check_bounds(&recs);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].check, "greedy-upper");
    }

    #[test]
    fn growth_inequality() {
        assert_eq!(growth_violation(1000, &[250, 70, 0]), None);
        assert_eq!(growth_violation(1000, &[200]), Some(0));
        // below 100 points nothing is asserted
        assert_eq!(growth_violation(1000, &[300, 99, 0]), None);
    }

    #[test]
    fn board_limit() {
        assert!(matches!(
            run_game(&spec("greedy"), &spec("greedy"), MAX_BOARD + 1, 0),
            Err(Error::Capacity(_))
        ));
    }
}
