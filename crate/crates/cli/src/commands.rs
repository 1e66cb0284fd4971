use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::Serialize;

use curved_landau::geometry::{self, FrameData, Point};
use curved_landau::oracle::{compare_radial, compare_z, residual_scan, Expectation, GridSpec, OracleComparison};
use curved_landau::spectra::{
    closed_form_flat_limit, enumerate_candidates, flat_limit_scan, surviving_variants, EnumerateOptions, NormLadder,
    QuantumNumbers,
};
use curved_landau::wavefunctions::assemble_jet;
use curved_landau::{FieldParams, RVariant, SpectrumRecord, TwiceM, ZVariant};

use crate::cli::{
    Cli, Command, FieldArgs, FlatLimitArgs, GeometryArgs, OracleArgs, ResidualArgs, SpectrumArgs, VerifyCommand,
    WavefunctionArgs,
};
use crate::output::{require_json, write_json, write_rows};
use crate::CliError;

pub fn dispatch(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Spectrum(args) => spectrum(cli, args),
        Command::Wavefunction(args) => wavefunction(cli, args),
        Command::Verify(VerifyCommand::Residual(args)) => verify_residual(cli, args),
        Command::Verify(VerifyCommand::Oracle(args)) => verify_oracle(cli, args),
        Command::Verify(VerifyCommand::FlatLimit(args)) => verify_flat_limit(cli, args),
        Command::Geometry(args) => geometry(cli, args),
    }
}

fn params(field: &FieldArgs) -> Result<FieldParams, CliError> {
    Ok(FieldParams::new(field.b, field.mass)?)
}

const SPECTRUM_HEADER: [&str; 12] = [
    "r_variant", "z_variant", "twice_m", "n", "N", "B", "M", "lambda", "p", "energy", "admissible", "normalizable",
];

#[derive(Serialize)]
struct SpectrumRow {
    r_variant: u8,
    z_variant: u8,
    twice_m: i64,
    n: u32,
    #[serde(rename = "N")]
    big_n: u32,
    #[serde(rename = "B")]
    b: f64,
    #[serde(rename = "M")]
    mass: f64,
    lambda: f64,
    p: f64,
    energy: f64,
    admissible: bool,
    normalizable: bool,
}

impl From<&SpectrumRecord> for SpectrumRow {
    fn from(r: &SpectrumRecord) -> Self {
        Self {
            r_variant: r.r_variant.index(),
            z_variant: r.z_variant.index(),
            twice_m: r.qn.twice_m.get(),
            n: r.qn.n,
            big_n: r.qn.big_n,
            b: r.params.strength(),
            mass: r.params.mass(),
            lambda: r.lambda,
            p: r.p,
            energy: r.eps,
            admissible: r.admissible,
            normalizable: r.normalizable,
        }
    }
}

fn spectrum(cli: &Cli, args: &SpectrumArgs) -> Result<(), CliError> {
    let params = params(&args.field)?;
    let defaults = EnumerateOptions::default();
    let opts = EnumerateOptions {
        r_variants: if args.r_variant.is_empty() { defaults.r_variants } else { args.r_variant.clone() },
        z_variants: if args.z_variant.is_empty() { defaults.z_variants } else { args.z_variant.clone() },
        expand_branches: args.expand_branches,
        ladder: NormLadder {
            r_grid: GridSpec::radial(args.ladder.norm_points, args.ladder.norm_levels),
            z_grid: GridSpec::polar(args.ladder.norm_points, args.ladder.norm_levels),
        },
    };
    // an explicitly requested variant must pass the gate for every requested m
    for &v in &args.r_variant {
        for &m in &args.twice_m {
            let gate = curved_landau::spectra::admissible(v, m, params.strength());
            if !gate.ok {
                return Err(curved_landau::Error::Inadmissible {
                    variant: v.index(),
                    violated: format!("{} (twice_m = {})", gate.violated.join(", "), m.get()),
                }
                .into());
            }
        }
    }
    let mut records = enumerate_candidates(params, &args.twice_m, args.n_max, args.big_n_max, &opts)?;
    records.par_iter_mut().try_for_each(|r| r.classify(&opts.ladder).map(|_| ()))?;
    match cli.format {
        crate::cli::Format::Json => write_json(&records, cli.output.as_deref()),
        crate::cli::Format::Csv => {
            let rows: Vec<SpectrumRow> = records.iter().map(SpectrumRow::from).collect();
            write_rows(&rows, &SPECTRUM_HEADER, cli.format, cli.output.as_deref())
        }
    }
}

const WAVE_HEADER: [&str; 10] = ["r", "z", "re_f1", "im_f1", "re_f2", "im_f2", "re_f3", "im_f3", "re_f4", "im_f4"];

#[derive(Serialize)]
struct WaveRow {
    r: f64,
    z: f64,
    re_f1: f64,
    im_f1: f64,
    re_f2: f64,
    im_f2: f64,
    re_f3: f64,
    im_f3: f64,
    re_f4: f64,
    im_f4: f64,
}

fn interior(lower: f64, upper: f64, count: usize) -> Vec<f64> {
    let h = (upper - lower) / (count + 1) as f64;
    (1..=count).map(|i| lower + i as f64 * h).collect()
}

fn resolve(params: FieldParams, rv: RVariant, zv: ZVariant, qn: QuantumNumbers) -> Result<SpectrumRecord, CliError> {
    Ok(SpectrumRecord::resolve(params, rv, zv, qn)?)
}

fn wavefunction(cli: &Cli, args: &WavefunctionArgs) -> Result<(), CliError> {
    if args.r_points == 0 || args.z_points == 0 {
        return Err(CliError::Usage("grid needs at least one point per axis".into()));
    }
    let qn = QuantumNumbers { twice_m: args.twice_m, n: args.n, big_n: args.big_n, branch: args.branch };
    let rec = resolve(params(&args.field)?, args.r_variant, args.z_variant, qn)?;
    let rs = interior(0.0, PI, args.r_points);
    let zs = interior(-FRAC_PI_2, FRAC_PI_2, args.z_points);
    let rows: Vec<Vec<WaveRow>> = rs
        .par_iter()
        .map(|&r| {
            zs.iter()
                .map(|&z| {
                    let f = assemble_jet(&rec, r, z)?.f;
                    Ok(WaveRow {
                        r,
                        z,
                        re_f1: f[0].re,
                        im_f1: f[0].im,
                        re_f2: f[1].re,
                        im_f2: f[1].im,
                        re_f3: f[2].re,
                        im_f3: f[2].im,
                        re_f4: f[3].re,
                        im_f4: f[3].im,
                    })
                })
                .collect::<Result<Vec<_>, curved_landau::Error>>()
        })
        .collect::<Result<_, _>>()?;
    let rows: Vec<WaveRow> = rows.into_iter().flatten().collect();
    write_rows(&rows, &WAVE_HEADER, cli.format, cli.output.as_deref())
}

#[derive(Serialize)]
struct ResidualRow {
    r_variant: u8,
    z_variant: u8,
    twice_m: i64,
    n: u32,
    #[serde(rename = "N")]
    big_n: u32,
    branch: &'static str,
    lambda: f64,
    p: f64,
    energy: f64,
    absolute: f64,
    relative: f64,
    pass: bool,
}

#[derive(Serialize)]
struct ResidualReport {
    tolerance: f64,
    measure: &'static str,
    r_points: usize,
    z_points: usize,
    states: Vec<ResidualRow>,
    pass: bool,
}

const RESIDUAL_HEADER: [&str; 12] = [
    "r_variant", "z_variant", "twice_m", "n", "N", "branch", "lambda", "p", "energy", "absolute", "relative", "pass",
];

fn verify_residual(cli: &Cli, args: &ResidualArgs) -> Result<(), CliError> {
    let params = params(&args.field)?;
    let opts = EnumerateOptions { expand_branches: args.expand_branches, ..Default::default() };
    let records = enumerate_candidates(params, &args.twice_m, args.n_max, args.big_n_max, &opts)?;
    let grid_r = GridSpec::radial(args.r_points, 1);
    let grid_z = GridSpec::polar(args.z_points, 1);
    let states: Vec<ResidualRow> = records
        .par_iter()
        .map(|rec| {
            let rep = residual_scan(rec, &grid_r, &grid_z)?;
            Ok(ResidualRow {
                r_variant: rec.r_variant.index(),
                z_variant: rec.z_variant.index(),
                twice_m: rec.qn.twice_m.get(),
                n: rec.qn.n,
                big_n: rec.qn.big_n,
                branch: if rec.qn.branch.sign() > 0.0 { "+" } else { "-" },
                lambda: rec.lambda,
                p: rec.p,
                energy: rec.eps,
                absolute: rep.absolute,
                relative: rep.relative,
                pass: rep.relative < args.tolerance,
            })
        })
        .collect::<Result<_, curved_landau::Error>>()?;
    let pass = states.iter().all(|s| s.pass);
    match cli.format {
        crate::cli::Format::Csv => write_rows(&states, &RESIDUAL_HEADER, cli.format, cli.output.as_deref())?,
        crate::cli::Format::Json => write_json(
            &ResidualReport {
                tolerance: args.tolerance,
                measure: "max residual / max component modulus",
                r_points: args.r_points,
                z_points: args.z_points,
                states,
                pass,
            },
            cli.output.as_deref(),
        )?,
    }
    if pass {
        Ok(())
    } else {
        Err(CliError::Failed)
    }
}

#[derive(Serialize)]
struct RadialSection {
    twice_m: i64,
    #[serde(rename = "B")]
    b: f64,
    comparison: OracleComparison,
}

#[derive(Serialize)]
struct ZSection {
    lambda: f64,
    comparison: OracleComparison,
}

#[derive(Serialize)]
struct OracleReport {
    radial: Vec<RadialSection>,
    z: Vec<ZSection>,
    pass: bool,
}

fn verify_oracle(cli: &Cli, args: &OracleArgs) -> Result<(), CliError> {
    require_json(cli.format, "verify oracle")?;
    if !(args.b >= 0.0 && args.b.is_finite()) {
        return Err(CliError::Usage(format!("B = {} must be >= 0", args.b)));
    }
    let grid = GridSpec::new(0.0, PI, args.points, args.levels)?;
    let z_grid = GridSpec::new(-FRAC_PI_2, FRAC_PI_2, args.z_points, args.z_levels)?;
    let radial: Vec<RadialSection> = args
        .twice_m
        .par_iter()
        .map(|&m| {
            let comparison = compare_radial(m, args.b, &grid, args.cutoff, args.scheme.into(), args.tolerance)?;
            Ok(RadialSection { twice_m: m.get(), b: args.b, comparison })
        })
        .collect::<Result<_, curved_landau::Error>>()?;

    let lambdas: Vec<f64> = if args.lambda.is_empty() {
        let mut l2: Vec<f64> = radial
            .iter()
            .flat_map(|s| &s.comparison.entries)
            .filter(|e| e.status == Expectation::Expected && e.closed_form > 0.0)
            .map(|e| e.closed_form)
            .collect();
        l2.sort_by(f64::total_cmp);
        l2.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        l2.into_iter().take(3).map(f64::sqrt).collect()
    } else {
        args.lambda.clone()
    };
    let z: Vec<ZSection> = lambdas
        .par_iter()
        .map(|&lambda| {
            let comparison = compare_z(lambda, &z_grid, args.big_n_max, args.tolerance)?;
            Ok(ZSection { lambda, comparison })
        })
        .collect::<Result<_, curved_landau::Error>>()?;

    let pass = radial.iter().all(|s| s.comparison.pass) && z.iter().all(|s| s.comparison.pass);
    write_json(&OracleReport { radial, z, pass }, cli.output.as_deref())?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Failed)
    }
}

#[derive(Serialize)]
struct FlatEntry {
    rho: f64,
    #[serde(rename = "B")]
    b: f64,
    value: Option<f64>,
    error: Option<String>,
    deviation: Option<f64>,
}

#[derive(Serialize)]
struct Survival {
    rho: f64,
    twice_m: i64,
    variants: Vec<u8>,
}

#[derive(Serialize)]
struct FlatReport {
    b: f64,
    twice_m: i64,
    r_variant: u8,
    z_variant: u8,
    n: u32,
    #[serde(rename = "N")]
    big_n: u32,
    limit: Option<f64>,
    entries: Vec<FlatEntry>,
    /// `log(d_i / d_{i+1}) / log(rho_{i+1} / rho_i)` for consecutive radii.
    exponents: Vec<f64>,
    survival: Vec<Survival>,
    survival_ok: bool,
    pass: bool,
}

fn verify_flat_limit(cli: &Cli, args: &FlatLimitArgs) -> Result<(), CliError> {
    require_json(cli.format, "verify flat-limit")?;
    if !(args.b > 0.0 && args.b.is_finite()) {
        return Err(CliError::Usage(format!("b = {} must be > 0", args.b)));
    }
    if args.rho.is_empty() {
        return Err(CliError::Usage("at least one rho is required".into()));
    }
    let limit = closed_form_flat_limit(args.b, args.twice_m, args.r_variant, args.n);
    let scan = flat_limit_scan(args.b, args.twice_m, args.r_variant, args.z_variant, args.n, args.big_n, &args.rho);
    let entries: Vec<FlatEntry> = scan
        .into_iter()
        .map(|e| {
            let (value, error) = match e.value {
                Ok(v) => (Some(v), None),
                Err(err) => (None, Some(err.to_string())),
            };
            FlatEntry {
                rho: e.rho,
                b: args.b * e.rho * e.rho,
                value,
                error,
                deviation: value.zip(limit).map(|(v, l)| (v - l).abs()),
            }
        })
        .collect();
    let exponents: Vec<f64> = entries
        .windows(2)
        .filter_map(|w| {
            let (d0, d1) = (w[0].deviation?, w[1].deviation?);
            Some((d0 / d1).ln() / (w[1].rho / w[0].rho).ln())
        })
        .collect();

    let magnitude = args.twice_m.get().abs();
    let mut survival = Vec::new();
    let mut survival_ok = true;
    for &rho in &args.rho {
        for signed in [magnitude, -magnitude] {
            let m = TwiceM::new(signed)?;
            let variants = surviving_variants(args.b, m, rho);
            survival_ok &= if signed > 0 {
                variants.contains(&RVariant::V1) && variants.iter().all(|v| matches!(v, RVariant::V1 | RVariant::V4))
            } else {
                variants == [RVariant::V4]
            };
            survival.push(Survival { rho, twice_m: signed, variants: variants.iter().map(|v| v.index()).collect() });
        }
    }

    let converging = entries.windows(2).all(|w| match (w[0].deviation, w[1].deviation) {
        (Some(a), Some(b)) => b < a,
        _ => false,
    });
    let rate_ok = exponents.last().is_some_and(|e| (e - 1.0).abs() <= args.rate_tolerance);
    let pass = limit.is_some()
        && entries.iter().all(|e| e.value.is_some())
        && (entries.len() < 2 || (converging && rate_ok))
        && survival_ok;
    write_json(
        &FlatReport {
            b: args.b,
            twice_m: args.twice_m.get(),
            r_variant: args.r_variant.index(),
            z_variant: args.z_variant.index(),
            n: args.n,
            big_n: args.big_n,
            limit,
            entries,
            exponents,
            survival,
            survival_ok,
            pass,
        },
        cli.output.as_deref(),
    )?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Failed)
    }
}

#[derive(Serialize)]
struct GeometryReport {
    point: Point,
    embedding: [f64; 4],
    embedding_norm: f64,
    frame: FrameData,
    orthonormality_defect: f64,
}

fn geometry(cli: &Cli, args: &GeometryArgs) -> Result<(), CliError> {
    require_json(cli.format, "geometry")?;
    let point = Point::new(args.r, args.z, args.phi)?;
    let embedding = geometry::embed(&point);
    let frame = geometry::frame_at(&point)?;
    write_json(
        &GeometryReport {
            point,
            embedding,
            embedding_norm: embedding.iter().map(|u| u * u).sum::<f64>().sqrt(),
            orthonormality_defect: frame.orthonormality_defect(),
            frame,
        },
        cli.output.as_deref(),
    )
}
