//! One function per subcommand. Each returns the named output tables in a
//! fixed order; rows follow grid order regardless of scheduling.

use std::time::Instant;

use hybridcorr_core::correlations::{
    correlation_report, entropic_discord_digitalized, entropic_discord_numeric, geometric_discord,
    geometric_discord_asymptote, negativity, negativity_asymptote, ReportOptions,
};
use hybridcorr_core::digitalize::{digitalize_channel, digitalized_target, DigitalizeConfig, FailPolicy};
use hybridcorr_core::linalg::C64;
use hybridcorr_core::optimize::SphereSearch;
use hybridcorr_core::oscillator::{
    containment_dim, purity, thermal_state_with, truncation_report, TruncationReport,
};
use hybridcorr_core::protocols::{
    payoff, resolve_cutoff, rsp_payoff_bounds, rsp_unitary_fidelity_asymptote,
    rsp_unitary_payoff_asymptote, teleport_fidelity_asymptote, teleport_per_input_closed_form,
    RspConfig, RspMode, RspSimulator, TeleportConfig, Teleporter,
};
use hybridcorr_core::{
    DisplacementAmplitude, Error, Exec, FockCutoff, InputPureState, QubitParams, ResourceState,
    Tolerances,
};

use crate::config::SweepConfig;
use crate::table::{Cell, Table};

/// Exit-code classification of a failure.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self {
            code: if e.is_numerical() { 3 } else { 2 },
            message: e.to_string(),
        }
    }
}

pub type CmdResult<T> = Result<T, CliError>;

pub const PARAM_COLUMNS: &[&str] = &["p", "r_abs", "r_arg", "beta_re", "beta_im", "nbar", "mu", "dim"];
pub const DIAG_COLUMNS: &[&str] = &["branch_overlap", "trace_deficit", "tail_eps", "containment_margin"];

pub const CORRELATION_COLUMNS: &[&str] = &[
    "negativity",
    "negativity_asymptote",
    "geometric_discord",
    "geometric_discord_asymptote",
    "dz_digitalized",
    "dz_numeric",
];
pub const TELEPORT_COLUMNS: &[&str] = &[
    "kraus_cutoff",
    "input_theta",
    "input_phi",
    "per_input_fidelity",
    "per_input_closed_form",
    "average_fidelity",
    "average_asymptote",
    "classical_threshold",
    "payoff",
    "payoff_asymptote",
    "negativity",
    "success_prob",
    "fail_prob",
];
pub const RSP_COLUMNS: &[&str] = &[
    "mode",
    "phi",
    "kraus_cutoff",
    "fidelity_at_phi",
    "average_fidelity",
    "average_asymptote",
    "classical_threshold",
    "payoff",
    "payoff_asymptote",
    "geometric_discord",
    "payoff_lower_bound",
    "payoff_upper_bound",
    "prob_plus",
    "prob_minus",
    "fail_prob",
];
pub const DIGITALIZE_COLUMNS: &[&str] = &[
    "kraus_cutoff",
    "fail_policy",
    "success_prob",
    "fidelity",
    "fidelity_conditional",
    "negativity_digitalized",
    "negativity_target",
    "dz_digitalized",
    "dz_numeric",
    "raw_completeness_deviation",
];
pub const CONVERGE_COLUMNS: &[&str] = &[
    "p",
    "r_abs",
    "nbar",
    "beta",
    "dim",
    "containment_dim",
    "below_containment",
    "branch_overlap",
    "negativity",
    "negativity_gap",
    "geometric_discord",
    "geometric_discord_gap",
    "teleport_average",
    "teleport_gap",
    "rsp_average",
    "rsp_gap",
    "trace_deficit",
    "tail_eps",
    "containment_margin",
];
pub const FIGURE2_COLUMNS: &[&str] = &[
    "r_abs",
    "negativity_asymptote",
    "dz_digitalized",
    "dg_asymptote_mu_0.5",
    "dg_asymptote_mu_0.1",
    "negativity_numeric",
    "dz_numeric",
    "dg_numeric_mu_0.5",
    "dg_numeric_mu_0.1",
];
pub const FIGURE3A_COLUMNS: &[&str] = &["r_abs", "negativity", "payoff_teleport"];
pub const FIGURE3B_COLUMNS: &[&str] = &[
    "r_abs",
    "mu",
    "nbar",
    "geometric_discord",
    "sqrt_dg",
    "payoff_rsp_unitary",
    "lower_bound",
];
pub const FIGURE3B_BOUNDS_COLUMNS: &[&str] = &["sqrt_dg", "dg", "upper_bound", "lower_bound"];
pub const FIGURE3C_COLUMNS: &[&str] = &["r_abs", "negativity", "payoff_rsp_digitalizing", "payoff_rsp_digitalizing_nbar_1"];

/// One point of the parameter grid.
#[derive(Debug, Clone, Copy)]
struct Point {
    p: f64,
    r_abs: f64,
    r_arg: f64,
    beta: C64,
    nbar: f64,
    dim: usize,
    kraus: Option<usize>,
}

impl Point {
    fn beta(&self) -> CmdResult<DisplacementAmplitude> {
        Ok(DisplacementAmplitude::new(self.beta)?)
    }

    fn params(&self) -> Vec<Cell> {
        vec![
            self.p.into(),
            self.r_abs.into(),
            self.r_arg.into(),
            self.beta.re.into(),
            self.beta.im.into(),
            self.nbar.into(),
            mu_of(self.nbar).into(),
            self.dim.into(),
        ]
    }

    fn resource(&self, tol: &Tolerances) -> CmdResult<ResourceState> {
        let q = QubitParams::polar(self.p, self.r_abs, self.r_arg)?;
        let dim = FockCutoff::new(self.dim)?;
        let osc = thermal_state_with(self.nbar, dim, tol)?;
        Ok(ResourceState::with_tolerances(q, osc, self.beta()?, tol)?)
    }
}

fn mu_of(nbar: f64) -> f64 {
    1.0 / (2.0 * nbar + 1.0)
}

fn nbar_of(mu: f64) -> f64 {
    0.5 * (1.0 / mu - 1.0)
}

fn auto_dim(beta: f64, nbar: f64) -> usize {
    containment_dim(beta, nbar)
}

fn expand(cfg: &SweepConfig) -> Vec<Point> {
    let mut out = Vec::new();
    for &p in &cfg.p.values() {
        for &r_abs in &cfg.r_abs.values() {
            for &r_arg in &cfg.r_arg.values() {
                for &re in &cfg.beta_re.values() {
                    for &im in &cfg.beta_im.values() {
                        for &nbar in &cfg.nbar.values() {
                            let beta = C64::new(re, im);
                            let need = auto_dim(beta.norm(), nbar);
                            for dim in cfg.dim.values() {
                                let dim = dim.unwrap_or(need);
                                for kraus in cfg.kraus_cutoff.values() {
                                    out.push(Point {
                                        p,
                                        r_abs,
                                        r_arg,
                                        beta,
                                        nbar,
                                        dim,
                                        kraus,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn warn_containment(points: &[Point]) {
    for pt in points {
        let need = auto_dim(pt.beta.norm(), pt.nbar);
        if pt.dim < need {
            log::warn!(
                "dim {} is below the containment estimate {} for |beta| = {}, nbar = {}",
                pt.dim,
                need,
                pt.beta.norm(),
                pt.nbar
            );
        }
    }
}

fn diagnostics(resource: &ResourceState, kraus: Option<usize>) -> (f64, TruncationReport) {
    let beta = resource.beta;
    let rep = truncation_report(&resource.initial, &[beta, -beta], kraus);
    (resource.branch_overlap(), rep)
}

fn diag_cells(resource: &ResourceState, kraus: Option<usize>) -> Vec<Cell> {
    let (overlap, rep) = diagnostics(resource, kraus);
    vec![
        overlap.into(),
        rep.trace_deficit.into(),
        rep.tail_eps.into(),
        rep.containment_margin.into(),
    ]
}

fn header(extra: &[&str], diag: bool, wall_time: bool) -> Vec<String> {
    let mut cols: Vec<&str> = PARAM_COLUMNS.to_vec();
    cols.extend_from_slice(extra);
    if diag {
        cols.extend_from_slice(DIAG_COLUMNS);
    }
    if wall_time {
        cols.push("wall_time_s");
    }
    cols.into_iter().map(String::from).collect()
}

/// Evaluate every grid point on the worker pool and collect rows in grid order.
fn sweep(
    cfg: &SweepConfig,
    columns: Vec<String>,
    f: impl Fn(&Point) -> CmdResult<Vec<Cell>> + Sync + Send,
) -> CmdResult<Table> {
    let points = expand(cfg);
    warn_containment(&points);
    let rows = Exec::Parallel.try_map(points.len(), |i| {
        let start = Instant::now();
        let mut row = f(&points[i])?;
        if cfg.wall_time {
            row.push(start.elapsed().as_secs_f64().into());
        }
        Ok::<_, CliError>(row)
    })?;
    let mut table = Table {
        columns,
        rows: Vec::new(),
    };
    for row in rows {
        table.push(row);
    }
    Ok(table)
}

pub fn correlations(cfg: &SweepConfig) -> CmdResult<Table> {
    let tol = cfg.tolerances();
    sweep(cfg, header(CORRELATION_COLUMNS, true, cfg.wall_time), |pt| {
        let res = pt.resource(&tol)?;
        let opts = ReportOptions {
            dz_numeric: cfg.dz_numeric,
            kraus_cutoff: pt.kraus,
            search: SphereSearch::default(),
            exec: Exec::Sequential,
        };
        let rep = correlation_report(&res, &opts)?;
        let mut row = pt.params();
        row.extend([
            rep.negativity.into(),
            rep.negativity_asymptote.into(),
            rep.geometric_discord.into(),
            rep.geometric_discord_asymptote.into(),
            rep.dz_digitalized.into(),
            rep.dz_numeric.into(),
        ]);
        row.extend(diag_cells(&res, pt.kraus));
        Ok(row)
    })
}

pub fn teleport(cfg: &SweepConfig) -> CmdResult<Table> {
    let tol = cfg.tolerances();
    let input = InputPureState::from_bloch(cfg.input_theta, cfg.input_phi);
    let average = cfg.input_average();
    sweep(cfg, header(TELEPORT_COLUMNS, true, cfg.wall_time), |pt| {
        let res = pt.resource(&tol)?;
        let tcfg = TeleportConfig {
            kraus_cutoff: pt.kraus,
            average,
        };
        let out = Teleporter::new(&res, &tcfg)?.simulate(&input, average);
        let mut row = pt.params();
        row.extend([
            out.kraus_cutoff.into(),
            cfg.input_theta.into(),
            cfg.input_phi.into(),
            out.per_input_fidelity.into(),
            teleport_per_input_closed_form(&input, pt.r_abs).into(),
            out.average_fidelity.into(),
            teleport_fidelity_asymptote(pt.r_abs).into(),
            out.classical_threshold.into(),
            out.payoff.into(),
            (2.0 * pt.r_abs).into(),
            negativity(&res.state).into(),
            out.success_prob.into(),
            out.fail_prob.into(),
        ]);
        row.extend(diag_cells(&res, Some(out.kraus_cutoff)));
        Ok(row)
    })
}

pub fn rsp(cfg: &SweepConfig) -> CmdResult<Table> {
    let tol = cfg.tolerances();
    let mode: RspMode = cfg.mode.into();
    sweep(cfg, header(RSP_COLUMNS, true, cfg.wall_time), |pt| {
        let res = pt.resource(&tol)?;
        let rcfg = RspConfig {
            mode,
            kraus_cutoff: pt.kraus,
            phase_points: cfg.phase_points,
            fail_policy: cfg.fail_policy.into(),
            exec: Exec::Sequential,
        };
        let out = RspSimulator::new(&res, &rcfg)?.simulate(cfg.phi)?;
        let mu = purity(&res.initial);
        let (avg_limit, payoff_limit, mode_name) = match mode {
            RspMode::UnitaryCorrection => (
                rsp_unitary_fidelity_asymptote(mu, pt.r_abs),
                rsp_unitary_payoff_asymptote(mu, pt.r_abs),
                "unitary",
            ),
            RspMode::DigitalizingCorrection => (0.5 + pt.r_abs, 2.0 * pt.r_abs, "digitalizing"),
        };
        let dg = geometric_discord(&res.state);
        let (lower, upper) = rsp_payoff_bounds(dg);
        let mut row = pt.params();
        row.extend([
            mode_name.into(),
            cfg.phi.into(),
            out.kraus_cutoff.into(),
            out.fidelity_at_phi.into(),
            out.average_fidelity.into(),
            avg_limit.into(),
            out.classical_threshold.into(),
            out.payoff.into(),
            payoff_limit.into(),
            dg.into(),
            lower.into(),
            upper.into(),
            out.probabilities[0].into(),
            out.probabilities[1].into(),
            out.fail_prob.into(),
        ]);
        row.extend(diag_cells(&res, Some(out.kraus_cutoff)));
        Ok(row)
    })
}

pub fn digitalize(cfg: &SweepConfig) -> CmdResult<Table> {
    let tol = cfg.tolerances();
    let policy: FailPolicy = cfg.fail_policy.into();
    sweep(cfg, header(DIGITALIZE_COLUMNS, true, cfg.wall_time), |pt| {
        let res = pt.resource(&tol)?;
        let cutoff = resolve_cutoff(&res.initial, res.beta, pt.kraus).max(1);
        let dcfg = DigitalizeConfig::new(cutoff, res.beta)?.with_policy(policy);
        let out = digitalize_channel(&res.state, &res.initial, &dcfg)?;
        let target = digitalized_target(&res.qubit);
        let dz = if cfg.dz_numeric {
            Some(entropic_discord_numeric(&out.state.as_hybrid(), &SphereSearch::default(), Exec::Sequential)?.value)
        } else {
            None
        };
        let mut row = pt.params();
        row.extend([
            cutoff.into(),
            match policy {
                FailPolicy::TrackFailFlag => "track",
                FailPolicy::RenormalizeSuccess => "renormalize",
            }
            .into(),
            out.success_prob.into(),
            out.fidelity(&target).into(),
            hybridcorr_core::digitalize::fidelity_two_qubit(&out.state, &target).into(),
            negativity(&out.state.as_hybrid()).into(),
            negativity(&target.as_hybrid()).into(),
            entropic_discord_digitalized(&res.qubit).into(),
            dz.into(),
            out.raw_completeness_deviation.into(),
        ]);
        row.extend(diag_cells(&res, Some(cutoff)));
        Ok(row)
    })
}

/// Fixed physics (first grid value of each parameter), swept over `beta_re` and `dim`.
pub fn converge(cfg: &SweepConfig) -> CmdResult<Table> {
    let tol = cfg.tolerances();
    let p = cfg.p.values()[0];
    let r_abs = cfg.r_abs.values()[0];
    let r_arg = cfg.r_arg.values()[0];
    let nbar = cfg.nbar.values()[0];
    let mut points = Vec::new();
    for &b in &cfg.beta_re.values() {
        let need = auto_dim(b.abs(), nbar);
        for dim in cfg.dim.values() {
            points.push(Point {
                p,
                r_abs,
                r_arg,
                beta: C64::new(b, 0.0),
                nbar,
                dim: dim.unwrap_or(need),
                kraus: cfg.kraus_cutoff.values()[0],
            });
        }
    }
    warn_containment(&points);
    let mut columns: Vec<String> = CONVERGE_COLUMNS.iter().map(|s| s.to_string()).collect();
    if cfg.wall_time {
        columns.push("wall_time_s".into());
    }
    let width = columns.len();
    let rows = Exec::Parallel.try_map(points.len(), |i| {
        let pt = &points[i];
        let start = Instant::now();
        let need = auto_dim(pt.beta.norm(), pt.nbar);
        let mut row: Vec<Cell> = vec![
            p.into(),
            r_abs.into(),
            nbar.into(),
            pt.beta.re.into(),
            pt.dim.into(),
            need.into(),
            (pt.dim < need).into(),
        ];
        match converge_row(pt, &tol) {
            Ok(cells) => row.extend(cells),
            Err(e) if e.code == 3 && pt.dim < need => {
                log::warn!("beta = {}, dim = {}: {}", pt.beta.re, pt.dim, e.message);
                row.resize(width - cfg.wall_time as usize, Cell::Empty);
            }
            Err(e) => return Err(e),
        }
        if cfg.wall_time {
            row.push(start.elapsed().as_secs_f64().into());
        }
        Ok(row)
    })?;
    let mut table = Table {
        columns,
        rows: Vec::new(),
    };
    for row in rows {
        table.push(row);
    }
    Ok(table)
}

fn converge_row(pt: &Point, tol: &Tolerances) -> CmdResult<Vec<Cell>> {
    let res = pt.resource(tol)?;
    let mu = purity(&res.initial);
    let neg = negativity(&res.state);
    let dg = geometric_discord(&res.state);
    let tel = Teleporter::new(
        &res,
        &TeleportConfig {
            kraus_cutoff: pt.kraus,
            ..Default::default()
        },
    )?;
    let tel_avg = tel.average_fidelity(Default::default());
    let rsp_avg = RspSimulator::new(
        &res,
        &RspConfig {
            kraus_cutoff: pt.kraus,
            exec: Exec::Sequential,
            ..Default::default()
        },
    )?
    .average_fidelity()?;
    let (overlap, rep) = diagnostics(&res, Some(tel.kraus_cutoff()));
    Ok(vec![
        overlap.into(),
        neg.into(),
        (negativity_asymptote(&res.qubit) - neg).abs().into(),
        dg.into(),
        (geometric_discord_asymptote(&res.qubit, mu) - dg).abs().into(),
        tel_avg.into(),
        (teleport_fidelity_asymptote(pt.r_abs) - tel_avg).abs().into(),
        rsp_avg.into(),
        (rsp_unitary_fidelity_asymptote(mu, pt.r_abs) - rsp_avg).abs().into(),
        rep.trace_deficit.into(),
        rep.tail_eps.into(),
        rep.containment_margin.into(),
    ])
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn half_qubit(r_abs: f64) -> CmdResult<QubitParams> {
    Ok(QubitParams::new(0.5, C64::new(r_abs, 0.0))?)
}

fn figure_resource(r_abs: f64, nbar: f64, beta: f64, tol: &Tolerances) -> CmdResult<ResourceState> {
    Point {
        p: 0.5,
        r_abs,
        r_arg: 0.0,
        beta: C64::new(beta, 0.0),
        nbar,
        dim: auto_dim(beta, nbar),
        kraus: None,
    }
    .resource(tol)
}

fn collect(columns: &[&str], rows: Vec<Vec<Cell>>) -> Table {
    let mut t = Table::new(columns);
    for row in rows {
        t.push(row);
    }
    t
}

/// Negativity, entropic and geometric discord against `|r|` at `p = ½`.
pub fn figure2(cfg: &SweepConfig) -> CmdResult<Vec<(String, Table)>> {
    let tol = cfg.tolerances();
    let rs = linspace(0.0, 0.5, cfg.figure_points);
    let rows = Exec::Parallel.try_map(rs.len(), |i| {
        let r = rs[i];
        let q = half_qubit(r)?;
        let vac = figure_resource(r, 0.0, 4.0, &tol)?;
        let half = figure_resource(r, nbar_of(0.5), 4.0, &tol)?;
        let tenth = figure_resource(r, nbar_of(0.1), 6.0, &tol)?;
        let cutoff = resolve_cutoff(&vac.initial, vac.beta, None).max(1);
        let dig = digitalize_channel(&vac.state, &vac.initial, &DigitalizeConfig::new(cutoff, vac.beta)?)?;
        let dz = entropic_discord_numeric(&dig.state.as_hybrid(), &SphereSearch::default(), Exec::Sequential)?;
        Ok::<_, CliError>(vec![
            r.into(),
            negativity_asymptote(&q).into(),
            entropic_discord_digitalized(&q).into(),
            geometric_discord_asymptote(&q, 0.5).into(),
            geometric_discord_asymptote(&q, 0.1).into(),
            negativity(&vac.state).into(),
            dz.value.into(),
            geometric_discord(&half.state).into(),
            geometric_discord(&tenth.state).into(),
        ])
    })?;
    Ok(vec![("figure2".into(), collect(FIGURE2_COLUMNS, rows))])
}

const FIGURE3_MUS: [f64; 5] = [1.0, 0.8, 0.6, 0.4, 0.2];

/// Payoffs: teleportation (a), unitary RSP against `√D_G` (b), digitalizing RSP (c).
pub fn figure3(cfg: &SweepConfig) -> CmdResult<Vec<(String, Table)>> {
    let tol = cfg.tolerances();
    let rs = linspace(0.0, 0.5, cfg.figure_points);

    let a = Exec::Parallel.try_map(rs.len(), |i| {
        let res = figure_resource(rs[i], 0.0, 4.0, &tol)?;
        let tel = Teleporter::new(&res, &TeleportConfig::default())?;
        let f = tel.average_fidelity(Default::default());
        Ok::<_, CliError>(vec![
            rs[i].into(),
            negativity(&res.state).into(),
            payoff(f, 2.0 / 3.0).into(),
        ])
    })?;

    let rs_b = linspace(0.0, 0.5, 11);
    let grid: Vec<(f64, f64)> = FIGURE3_MUS
        .iter()
        .flat_map(|&mu| rs_b.iter().map(move |&r| (r, mu)))
        .collect();
    let b = Exec::Parallel.try_map(grid.len(), |i| {
        let (r, mu) = grid[i];
        let nbar = nbar_of(mu);
        let res = figure_resource(r, nbar, 4.0, &tol)?;
        let sim = RspSimulator::new(
            &res,
            &RspConfig {
                exec: Exec::Sequential,
                ..Default::default()
            },
        )?;
        let dg = geometric_discord(&res.state);
        Ok::<_, CliError>(vec![
            r.into(),
            mu.into(),
            nbar.into(),
            dg.into(),
            dg.sqrt().into(),
            payoff(sim.average_fidelity()?, sim.classical_threshold()).into(),
            rsp_payoff_bounds(dg).0.into(),
        ])
    })?;

    let bounds: Vec<Vec<Cell>> = linspace(0.0, 1.0, 101)
        .into_iter()
        .map(|s| {
            let dg = s * s;
            let (lo, hi) = rsp_payoff_bounds(dg);
            vec![s.into(), dg.into(), hi.into(), lo.into()]
        })
        .collect();

    let c = Exec::Parallel.try_map(rs.len(), |i| {
        let digital = |nbar: f64| -> CmdResult<(f64, f64)> {
            let res = figure_resource(rs[i], nbar, 4.0, &tol)?;
            let sim = RspSimulator::new(
                &res,
                &RspConfig {
                    mode: RspMode::DigitalizingCorrection,
                    exec: Exec::Sequential,
                    ..Default::default()
                },
            )?;
            Ok((
                negativity(&res.state),
                payoff(sim.average_fidelity()?, sim.classical_threshold()),
            ))
        };
        let (neg, pay) = digital(0.0)?;
        let (_, pay_thermal) = digital(1.0)?;
        Ok::<_, CliError>(vec![rs[i].into(), neg.into(), pay.into(), pay_thermal.into()])
    })?;

    Ok(vec![
        ("figure3a".into(), collect(FIGURE3A_COLUMNS, a)),
        ("figure3b".into(), collect(FIGURE3B_COLUMNS, b)),
        ("figure3b_bounds".into(), collect(FIGURE3B_BOUNDS_COLUMNS, bounds)),
        ("figure3c".into(), collect(FIGURE3C_COLUMNS, c)),
    ])
}

/// Column listing for `--help`.
pub fn column_help() -> String {
    let mut s = String::from("Output columns (every sweep row starts with the parameter columns):\n");
    let line = |name: &str, cols: &[&str]| format!("  {name}: {}\n", cols.join(","));
    s += &line("parameters", PARAM_COLUMNS);
    s += &line("correlations", &[CORRELATION_COLUMNS, DIAG_COLUMNS].concat());
    s += &line("teleport", &[TELEPORT_COLUMNS, DIAG_COLUMNS].concat());
    s += &line("rsp", &[RSP_COLUMNS, DIAG_COLUMNS].concat());
    s += &line("digitalize", &[DIGITALIZE_COLUMNS, DIAG_COLUMNS].concat());
    s += &line("converge", CONVERGE_COLUMNS);
    s += &line("figure2", FIGURE2_COLUMNS);
    s += &line("figure3a", FIGURE3A_COLUMNS);
    s += &line("figure3b", FIGURE3B_COLUMNS);
    s += &line("figure3b_bounds", FIGURE3B_BOUNDS_COLUMNS);
    s += &line("figure3c", FIGURE3C_COLUMNS);
    s += "  wall_time_s is appended to sweep tables when wall_time = true.\n";
    s
}
