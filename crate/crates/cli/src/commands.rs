use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde_json::json;

use qdce::analytic::{hv_intensity, hv_monte_carlo};
use qdce::circuit::Scheme;
use qdce::experiment::{
    alpha_grid, compare_qm_hv, periodic_phi_grid, phi_grid, run_sweep, visibility_by_alpha, IntensityRecord, Mode,
    SweepConfig, DEFAULT_PHI_STEPS,
};
use qdce::io::{
    emit_svg_heatmap, emit_svg_lineplot, format_value, load_noise, manifest_path, parse_config, records_to_csv,
    table_to_csv, Heatmap, PlotLabels, RunManifest, Series,
};

use crate::{CliResult, CompareArgs, GridArgs, HvMcArgs, ModeArg, OutputArgs, SchemeArg, SweepArgs, VisibilityArgs};

const VISIBILITY_ALPHA_STEPS: usize = 9;
const VISIBILITY_PHI_STEPS: usize = 256;

impl GridArgs {
    fn alphas(&self, default_steps: usize) -> Option<Vec<f64>> {
        if !self.alpha.is_empty() {
            let scale = if self.degrees { PI / 180.0 } else { 1.0 };
            Some(self.alpha.iter().map(|a| a * scale).collect())
        } else {
            self.alpha_steps.or(Some(default_steps).filter(|&n| n > 0)).map(alpha_grid)
        }
    }
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Sampled => Mode::Sampled,
        }
    }
}

/// Reads a sweep config, or the config echoed inside a run manifest.
fn read_base_config(path: &Path) -> CliResult<SweepConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    if value.get("config_hash").is_some() {
        let config = value.get("config").cloned().unwrap_or_default();
        return Ok(parse_config(&config.to_string())?);
    }
    Ok(parse_config(&text)?)
}

/// Writes `text` to `out` (or stdout) and a manifest next to it.
fn finish(
    command: &str,
    output: &OutputArgs,
    text: &str,
    seed: Option<u64>,
    config: serde_json::Value,
    extra: &[&Path],
) -> CliResult<()> {
    let Some(out) = &output.out else {
        print!("{text}");
        return Ok(());
    };
    std::fs::write(out, text).map_err(|e| format!("{}: {e}", out.display()))?;
    let outputs = std::iter::once(out.as_path())
        .chain(output.svg.as_deref())
        .chain(extra.iter().copied())
        .map(|p| p.display().to_string())
        .collect();
    let timestamp = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    RunManifest::new(command, timestamp, seed, config, outputs).write(manifest_path(out))?;
    Ok(())
}

/// `α=π/2` for multiples of π/8, decimal otherwise.
fn alpha_label(alpha: f64) -> String {
    let eighths = alpha / (PI / 8.0);
    let k = eighths.round();
    if (eighths - k).abs() > 1e-4 {
        return format!("α={alpha:.4}");
    }
    let k = k as i64;
    if k == 0 {
        return "α=0".into();
    }
    let g = gcd(k.unsigned_abs(), 8) as i64;
    let (num, den) = (k / g, 8 / g);
    let num = match num {
        1 => String::new(),
        -1 => "-".into(),
        n => n.to_string(),
    };
    if den == 1 {
        format!("α={num}π")
    } else {
        format!("α={num}π/{den}")
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn curves(records: &[IntensityRecord]) -> Vec<Series> {
    let mut groups: Vec<Series> = Vec::new();
    let mut index: BTreeMap<(u64, Option<u8>), usize> = BTreeMap::new();
    for r in records {
        let key = (r.alpha.to_bits(), r.branch);
        let i = *index.entry(key).or_insert_with(|| {
            let label = match r.branch {
                Some(b) => format!("{}, q2={b}", alpha_label(r.alpha)),
                None => alpha_label(r.alpha),
            };
            groups.push(Series::new(label, Vec::new()));
            groups.len() - 1
        });
        groups[i].points.push((r.phi, r.e0));
    }
    groups
}

fn heatmap(records: &[IntensityRecord], config: &SweepConfig, scheme: Scheme) -> Heatmap {
    let branch = match scheme {
        Scheme::Qdce => None,
        Scheme::EaQdce => Some(config.branch.unwrap_or(0)),
    };
    let cells = config
        .alpha_values
        .iter()
        .map(|a| {
            config
                .phi_values
                .iter()
                .map(|p| {
                    records
                        .iter()
                        .find(|r| r.alpha == *a && r.phi == *p && r.branch == branch)
                        .map_or(0.0, |r| r.e0.clamp(0.0, 1.0))
                })
                .collect()
        })
        .collect();
    let title = match branch {
        Some(b) => format!("{scheme} detector-0 intensity, q2={b}"),
        None => format!("{scheme} detector-0 intensity"),
    };
    Heatmap {
        labels: PlotLabels::new(title, "φ (rad)", "α (rad)"),
        x_values: config.phi_values.clone(),
        y_values: config.alpha_values.clone(),
        cells,
    }
}

pub(crate) fn sweep(scheme: Scheme, args: SweepArgs, invocation: &str) -> CliResult<()> {
    let mut config = match &args.config {
        Some(path) => {
            let c = read_base_config(path)?;
            if c.scheme != scheme {
                return Err(format!("config is for {}, not {scheme}", c.scheme).into());
            }
            c
        }
        None => SweepConfig::new(scheme),
    };
    let explicit_grid = args.grid.alpha_steps.is_some() || !args.grid.alpha.is_empty();
    if args.config.is_none() || explicit_grid {
        if let Some(alphas) = args.grid.alphas(0) {
            config.alpha_values = alphas;
        }
    }
    if let Some(n) = args.grid.phi_steps {
        config.phi_values = phi_grid(n);
    }
    if let Some(m) = args.mode {
        config.mode = m.into();
    }
    if let Some(s) = args.shots {
        config.shots = s;
    }
    if let Some(r) = args.reps {
        config.repetitions = r;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    if args.branch.is_some() {
        config.branch = args.branch;
    }
    if let Some(path) = &args.noise {
        config.noise = Some(load_noise(path).map_err(|e| format!("{}: {e}", path.display()))?);
    }

    let records = run_sweep(&config)?;
    let text = records_to_csv(&records)?;

    if let Some(svg) = &args.output.svg {
        let labels = PlotLabels::new(format!("{scheme} detector-0 intensity"), "φ (rad)", "intensity");
        emit_svg_lineplot(&labels, &curves(&records), svg)?;
    }
    if let Some(path) = &args.heatmap {
        emit_svg_heatmap(&heatmap(&records, &config, scheme), path)?;
    }
    let seed = (config.mode == Mode::Sampled).then_some(config.seed);
    let extra: Vec<&Path> = args.heatmap.iter().map(PathBuf::as_path).collect();
    finish(invocation, &args.output, &text, seed, serde_json::to_value(&config)?, &extra)
}

pub(crate) fn visibility(args: VisibilityArgs, invocation: &str) -> CliResult<()> {
    let scheme = match args.scheme {
        SchemeArg::Qdce => Scheme::Qdce,
        SchemeArg::EaQdce => Scheme::EaQdce,
    };
    let mut config = SweepConfig::new(scheme);
    config.alpha_values = args.grid.alphas(VISIBILITY_ALPHA_STEPS).unwrap_or_default();
    // one full period without the duplicated endpoint, so φ = π is sampled
    config.phi_values = periodic_phi_grid(args.grid.phi_steps.unwrap_or(VISIBILITY_PHI_STEPS));
    if let Some(m) = args.mode {
        config.mode = m.into();
    }
    if let Some(s) = args.shots {
        config.shots = s;
    }
    if let Some(r) = args.reps {
        config.repetitions = r;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    config.branch = args.branch;
    if let Some(path) = &args.noise {
        config.noise = Some(load_noise(path).map_err(|e| format!("{}: {e}", path.display()))?);
    }

    let records = run_sweep(&config)?;
    let points = visibility_by_alpha(&records)?;
    let rows = points.iter().map(|p| {
        vec![
            format_value(p.alpha),
            p.branch.map(|b| b.to_string()).unwrap_or_default(),
            format_value(p.e_max),
            format_value(p.e_min),
            format_value(p.visibility),
            format_value(p.alpha.sin().powi(2)),
        ]
    });
    let text = table_to_csv(&["alpha", "branch", "e_max", "e_min", "visibility", "sin2_alpha"], rows)?;

    if let Some(svg) = &args.output.svg {
        let mut series: Vec<Series> = Vec::new();
        for p in &points {
            let label = match p.branch {
                Some(b) => format!("visibility, q2={b}"),
                None => "visibility".to_owned(),
            };
            match series.iter_mut().find(|s| s.label == label) {
                Some(s) => s.points.push((p.alpha, p.visibility)),
                None => series.push(Series::new(label, vec![(p.alpha, p.visibility)])),
            }
        }
        let dense: Vec<(f64, f64)> = (0..=64)
            .map(|k| {
                let lo = config.alpha_values.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = config.alpha_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let a = lo + (hi - lo) * k as f64 / 64.0;
                (a, a.sin().powi(2))
            })
            .collect();
        series.push(Series::new("sin²α", dense));
        let labels = PlotLabels::new(format!("{scheme} fringe visibility"), "α (rad)", "visibility");
        emit_svg_lineplot(&labels, &series, svg)?;
    }
    let seed = (config.mode == Mode::Sampled).then_some(config.seed);
    finish(invocation, &args.output, &text, seed, serde_json::to_value(&config)?, &[])
}

pub(crate) fn compare_hv(args: CompareArgs, invocation: &str) -> CliResult<()> {
    let alphas = args.grid.alphas(5).unwrap_or_default();
    let phis = phi_grid(args.grid.phi_steps.unwrap_or(DEFAULT_PHI_STEPS));
    let comparison = compare_qm_hv(&alphas, &phis)?;
    let rows = comparison.rows.iter().map(|r| {
        vec![
            format_value(r.alpha),
            format_value(r.phi),
            r.branch.to_string(),
            format_value(r.qm_e0),
            format_value(r.qm_joint_e0),
            format_value(r.branch_prob),
            format_value(r.hv_e0),
            format_value(r.printed_e0),
            format_value(r.divergence()),
        ]
    });
    let header = [
        "alpha", "phi", "branch", "qm_e0", "qm_joint_e0", "branch_prob", "hv_e0", "printed_e0", "abs_diff",
    ];
    let text = table_to_csv(&header, rows)?;
    let report = qdce::io::comparison_report(&comparison);

    if let Some(svg) = &args.output.svg {
        let mut series: Vec<Series> = alphas
            .iter()
            .map(|&a| Series::new(format!("QM {}, q2=0", alpha_label(a)), comparison.curve(a, 0, false)))
            .collect();
        series.push(Series::new("HV", comparison.curve(alphas[0], 0, true)));
        let labels = PlotLabels::new("QM vs hidden-variable model", "φ (rad)", "intensity");
        emit_svg_lineplot(&labels, &series, svg)?;
    }

    let report_path = args.output.out.as_ref().map(|out| {
        let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        out.with_file_name(format!("{stem}.report.txt"))
    });
    match &report_path {
        Some(p) => std::fs::write(p, &report).map_err(|e| format!("{}: {e}", p.display()))?,
        None => eprint!("{report}"),
    }
    let config = json!({
        "alpha_values": alphas,
        "phi_values": phis,
        "hv_model": "uniform lambda1",
    });
    let extra: Vec<&Path> = report_path.iter().map(PathBuf::as_path).collect();
    finish(invocation, &args.output, &text, None, config, &extra)
}

pub(crate) fn hv_mc(args: HvMcArgs, invocation: &str) -> CliResult<()> {
    let phis = phi_grid(args.phi_steps);
    if phis.is_empty() {
        return Err("invalid value for `phi_steps`: must be at least 1".into());
    }
    let mut rows = Vec::with_capacity(phis.len());
    let mut estimates = Vec::with_capacity(phis.len());
    for (k, &phi) in phis.iter().enumerate() {
        let estimate = hv_monte_carlo(phi, args.samples, args.seed.wrapping_add(k as u64))?;
        let exact = hv_intensity(phi);
        let sigma = (exact * (1.0 - exact) / args.samples as f64).sqrt();
        let z = if sigma > 0.0 { (estimate - exact) / sigma } else { 0.0 };
        estimates.push((phi, estimate));
        rows.push(vec![
            format_value(phi),
            format_value(estimate),
            format_value(exact),
            format_value(sigma),
            format_value(z),
        ]);
    }
    let text = table_to_csv(&["phi", "hv_mc", "hv_exact", "sigma", "z"], rows)?;

    if let Some(svg) = &args.output.svg {
        let exact: Vec<(f64, f64)> = (0..=128)
            .map(|k| k as f64 * 2.0 * PI / 128.0)
            .map(|p| (p, hv_intensity(p)))
            .collect();
        let series = [Series::new("Monte Carlo", estimates), Series::new("closed form", exact)];
        let labels = PlotLabels::new("Hidden-variable model", "φ (rad)", "intensity");
        emit_svg_lineplot(&labels, &series, svg)?;
    }
    let config = json!({
        "phi_values": phis,
        "samples": args.samples,
        "seed": args.seed,
    });
    finish(invocation, &args.output, &text, Some(args.seed), config, &[])
}
