use clap::{Args, Subcommand};
use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};
use std::f64::consts::PI;

use bolab_core::correspondence::{part1_action_report, verify_theorem1};
use bolab_core::fock::{
    commutator_norm, diagonalize, grade_block, hamiltonian, hierarchy_down, hierarchy_up, resolvent_identity_error,
    OperatorBlock, QuantumParams,
};
use bolab_core::multiphase::{
    bo_residual, gfz_action, multi_phase, periodicity_check, phase_loop_action, GridField, PhaseParams,
};
use bolab_core::profiles::{check_quantization, partition_profile, profile_partition, Anisotropy, Profile};
use bolab_core::report::to_stable_json;
use bolab_core::scalar::Scalar;
use bolab_core::spectral::{self, hierarchy, lax_matrix, perturbation_determinant, poisson_check, resolvent_element};
use bolab_core::Partition;

use crate::field::{parse_field, parse_list, parse_phase};
use crate::{CliError, Format, Outcome};

fn json<S: Serialize>(value: &S) -> Result<String, CliError> {
    Ok(to_stable_json(value)?)
}

fn csv_unsupported(fmt: Format) -> Result<(), CliError> {
    match fmt {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::Input("CSV output is not available for this command".into())),
    }
}

fn parse_complex(text: &str) -> Result<Complex64, CliError> {
    match parse_list(text)?.as_slice() {
        [re] => Ok(Complex64::new(*re, 0.0)),
        [re, im] => Ok(Complex64::new(*re, *im)),
        _ => Err(CliError::Input(format!("expected re or re,im: {text:?}"))),
    }
}

fn parse_parts(text: &str) -> Result<Partition, CliError> {
    let parts = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>().map_err(|_| CliError::Input(format!("not a part: {s:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Partition::new(parts)?)
}

fn cplx(z: Complex64) -> Value {
    json!([z.re, z.im])
}

// ---------------------------------------------------------------------------
// profile

#[derive(Args, Debug, Clone)]
pub struct ProfileSource {
    /// Minima (descending or not), comma separated.
    #[arg(long, allow_hyphen_values = true)]
    minima: Option<String>,
    /// Maxima, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    maxima: Option<String>,
    /// Partition parts, comma separated; used with the anisotropy.
    #[arg(long)]
    parts: Option<String>,
    /// Row scale (negative); defaults to the renormalized ε₂ of --eps/--hbar.
    #[arg(long, allow_hyphen_values = true)]
    r2: Option<f64>,
    /// Column scale (positive); defaults to the renormalized ε₁.
    #[arg(long, allow_hyphen_values = true)]
    r1: Option<f64>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    center: f64,
    #[arg(long, default_value_t = 1.0)]
    eps: f64,
    #[arg(long, default_value_t = 2.0)]
    hbar: f64,
}

impl ProfileSource {
    fn anisotropy(&self) -> Result<Anisotropy, CliError> {
        Ok(match (self.r2, self.r1) {
            (Some(r2), Some(r1)) => Anisotropy::new(r2, r1)?,
            (None, None) => Anisotropy::renormalized(self.eps, self.hbar)?,
            _ => return Err(CliError::Input("give both --r2 and --r1, or neither".into())),
        })
    }

    fn profile(&self) -> Result<Profile, CliError> {
        match (&self.parts, &self.minima, &self.maxima) {
            (Some(parts), None, None) => Ok(partition_profile(&parse_parts(parts)?, self.anisotropy()?, self.center)),
            (None, Some(mn), Some(mx)) => Ok(Profile::from_corners(&parse_list(mn)?, &parse_list(mx)?)?),
            _ => Err(CliError::Input("give either --parts or both --minima and --maxima".into())),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum ProfileCmd {
    /// Profile of a partition under an anisotropy.
    Partition(ProfileSource),
    /// Recover the partition and center from profile corners.
    Invert {
        #[command(flatten)]
        src: ProfileSource,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Energy and moments of a profile.
    Energy {
        #[command(flatten)]
        src: ProfileSource,
        #[arg(long, default_value_t = 4)]
        lmax: usize,
    },
    /// Vertices of the profile graph.
    PlotData(ProfileSource),
    /// Bohr–Sommerfeld test of band and gap lengths.
    Check {
        #[command(flatten)]
        src: ProfileSource,
        /// Use classical units `ε̄`, `ℏ/ε̄` instead of the renormalized ones.
        #[arg(long)]
        classical: bool,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

fn profile_json(f: &Profile) -> Value {
    json!({ "center": f.center(), "minima": f.minima(), "maxima": f.maxima() })
}

pub fn profile(cmd: ProfileCmd, fmt: Format) -> Result<Outcome, CliError> {
    match cmd {
        ProfileCmd::Partition(src) => {
            let f = src.profile()?;
            if fmt == Format::Csv {
                return Ok(Outcome::ok(f.to_csv()));
            }
            let anis = src.anisotropy()?;
            let mut body = json!({
                "anisotropy": { "r2": anis.r2, "r1": anis.r1 },
                "profile": profile_json(&f),
                "band_lengths": f.band_lengths(),
                "gap_lengths": f.gap_lengths(),
                "area": f.area(),
                "minima": f.minima(),
                "maxima": f.maxima(),
            });
            if let Some(parts) = &src.parts {
                let lambda = parse_parts(parts)?;
                let (bands, gaps) = bolab_core::correspondence::multipliers(&lambda);
                body["partition"] = json!(lambda);
                body["band_multipliers"] = json!(bands);
                body["gap_multipliers"] = json!(gaps);
            }
            Ok(Outcome::ok(json(&body)?))
        }
        ProfileCmd::Invert { src, tol } => {
            csv_unsupported(fmt)?;
            let f = src.profile()?;
            let (lambda, a) = profile_partition(&f, src.anisotropy()?, tol)?;
            Ok(Outcome::ok(json(&json!({ "partition": lambda, "center": a }))?))
        }
        ProfileCmd::Energy { src, lmax } => {
            csv_unsupported(fmt)?;
            let f = src.profile()?;
            Ok(Outcome::ok(json(&json!({
                "profile": profile_json(&f),
                "energy": f.energy(),
                "moments": f.moments(lmax),
            }))?))
        }
        ProfileCmd::PlotData(src) => {
            let f = src.profile()?;
            match fmt {
                Format::Csv => Ok(Outcome::ok(f.to_csv())),
                Format::Json => Ok(Outcome::ok(json(&json!({ "vertices": f.vertices() }))?)),
            }
        }
        ProfileCmd::Check { src, classical, tol } => {
            csv_unsupported(fmt)?;
            let f = src.profile()?;
            let report = check_quantization(&f, src.eps, src.hbar, !classical, tol)?;
            Ok(Outcome {
                pass: report.pass(),
                body: json(&report)?,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// multiphase

#[derive(Args, Debug, Clone)]
pub struct PhaseArgs {
    /// `s1,...,s2n+1;chi1,...,chin`, ascending spectral parameters.
    #[arg(long, allow_hyphen_values = true)]
    phase: String,
    #[arg(long, default_value_t = 1.0)]
    eps: f64,
}

impl PhaseArgs {
    fn params(&self) -> Result<PhaseParams, CliError> {
        parse_phase(&self.phase, self.eps)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Cycle {
    /// Cycle dual to gap `i`: its action is `2πε̄·gap_i`.
    Gap,
    /// Loop in `χ_i` alone.
    Phase,
}

#[derive(Subcommand, Debug)]
pub enum MultiphaseCmd {
    /// Evaluate the solution at a point or on a grid.
    Eval {
        #[command(flatten)]
        p: PhaseArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, default_value_t = 256)]
        samples: usize,
    },
    /// Sup-norm residual of the Benjamin–Ono equation on a grid.
    Residual {
        #[command(flatten)]
        p: PhaseArgs,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long, default_value_t = 1e-6)]
        dt: f64,
        /// Fail (exit 1) when the residual is not below this bound.
        #[arg(long)]
        max: Option<f64>,
    },
    /// Action integrals around torus cycles.
    Action {
        #[command(flatten)]
        p: PhaseArgs,
        /// Cycle index; all cycles when omitted.
        #[arg(long)]
        i: Option<usize>,
        #[arg(long, value_enum, default_value_t = Cycle::Gap)]
        cycle: Cycle,
        #[arg(long, default_value_t = 256)]
        loop_samples: usize,
        #[arg(long, default_value_t = 127)]
        modes: usize,
    },
    /// Integer band ratios `N_i`.
    Periodicity {
        #[command(flatten)]
        p: PhaseArgs,
        #[arg(long, default_value_t = bolab_core::multiphase::PERIODICITY_TOL)]
        tol: f64,
    },
}

pub fn multiphase(cmd: MultiphaseCmd, fmt: Format) -> Result<Outcome, CliError> {
    match cmd {
        MultiphaseCmd::Eval { p, x, t, samples } => {
            let params = p.params()?;
            if let Some(x) = x {
                let v = multi_phase(&params, x, t)?;
                return Ok(Outcome::ok(match fmt {
                    Format::Csv => format!("x,v\n{x},{v}\n"),
                    Format::Json => json(&json!({ "x": x, "t": t, "v": v }))?,
                }));
            }
            let g = GridField::sample(&params, samples, t)?;
            Ok(Outcome::ok(match fmt {
                Format::Csv => g.to_csv(),
                Format::Json => {
                    let (xs, vs): (Vec<f64>, Vec<f64>) = g.points().unzip();
                    json(&json!({ "t": t, "x": xs, "v": vs }))?
                }
            }))
        }
        MultiphaseCmd::Residual { p, samples, dt, max } => {
            csv_unsupported(fmt)?;
            let r = bo_residual(&p.params()?, samples, dt)?;
            Ok(Outcome {
                pass: max.map_or(true, |m| r < m),
                body: json(&json!({ "residual": r, "samples": samples, "dt": dt }))?,
            })
        }
        MultiphaseCmd::Action {
            p,
            i,
            cycle,
            loop_samples,
            modes,
        } => {
            csv_unsupported(fmt)?;
            let params = p.params()?;
            let indices: Vec<usize> = match i {
                Some(i) => vec![i],
                None => (1..=params.phases()).collect(),
            };
            let rows = indices
                .into_iter()
                .map(|i| {
                    let (action, gaps) = match cycle {
                        Cycle::Gap => (gfz_action(&params, i, loop_samples, modes)?, params.gap(i)),
                        Cycle::Phase => (
                            phase_loop_action(&params, i, loop_samples, modes)?,
                            (i..=params.phases()).map(|j| params.gap(j)).sum(),
                        ),
                    };
                    Ok(json!({ "i": i, "action": action, "target": 2.0 * PI * params.eps() * gaps }))
                })
                .collect::<Result<Vec<Value>, CliError>>()?;
            Ok(Outcome::ok(json(&json!({ "cycle": format!("{cycle:?}").to_lowercase(), "actions": rows }))?))
        }
        MultiphaseCmd::Periodicity { p, tol } => {
            csv_unsupported(fmt)?;
            let n = periodicity_check(&p.params()?, tol)?;
            Ok(Outcome::ok(json(&json!({ "N": n }))?))
        }
    }
}

// ---------------------------------------------------------------------------
// lax

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// `const:a`, `cos:a,delta,k`, `phase:s...;chi...` or a CSV file with `x,v` rows.
    #[arg(long, allow_hyphen_values = true)]
    field: String,
    #[arg(long, default_value_t = 1.0)]
    eps: f64,
    /// Grid size used when sampling a `phase:` field.
    #[arg(long, default_value_t = 256)]
    samples: usize,
}

impl FieldArgs {
    fn field(&self) -> Result<bolab_core::multiphase::FourierField, CliError> {
        parse_field(&self.field, self.eps, self.samples)
    }
}

#[derive(Subcommand, Debug)]
pub enum LaxCmd {
    /// Eigenvalues of the truncated Lax operator, in decreasing order.
    Spectrum {
        #[command(flatten)]
        f: FieldArgs,
        #[arg(long, default_value_t = spectral::DEFAULT_DIM)]
        dim: usize,
    },
    /// Gaps and dispersive action profile.
    Profile {
        #[command(flatten)]
        f: FieldArgs,
        #[arg(long, default_value_t = spectral::DEFAULT_DIM)]
        dim: usize,
        #[arg(long, default_value_t = spectral::DEFAULT_GAP_TOL)]
        gap_tol: f64,
        #[arg(long, default_value_t = spectral::DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Conserved quantities `T_l = ⟨0|L^l|0⟩` and the energy `O_3`.
    Hierarchy {
        #[command(flatten)]
        f: FieldArgs,
        #[arg(long, default_value = "0,1,2,3,4")]
        l: String,
    },
    /// Resolvent element and perturbation determinant at `u`.
    Resolvent {
        #[command(flatten)]
        f: FieldArgs,
        /// `re` or `re,im`.
        #[arg(long, allow_hyphen_values = true, default_value = "10")]
        u: String,
        #[arg(long, default_value_t = spectral::DEFAULT_DIM)]
        dim: usize,
    },
    /// Poisson bracket `{T_l1, T_l2}` from exact gradients.
    Poisson {
        #[command(flatten)]
        f: FieldArgs,
        #[arg(long, default_value_t = 2)]
        l1: usize,
        #[arg(long, default_value_t = 3)]
        l2: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

pub fn lax(cmd: LaxCmd, fmt: Format) -> Result<Outcome, CliError> {
    match cmd {
        LaxCmd::Spectrum { f, dim } => {
            let ev = lax_matrix(&f.field()?, f.eps, dim)?.eigenvalues();
            Ok(Outcome::ok(match fmt {
                Format::Csv => {
                    let mut s = String::from("h,eigenvalue\n");
                    for (h, e) in ev.iter().enumerate() {
                        s.push_str(&format!("{h},{e}\n"));
                    }
                    s
                }
                Format::Json => json(&json!({ "dim": dim, "eigenvalues": ev }))?,
            }))
        }
        LaxCmd::Profile { f, dim, gap_tol, depth } => {
            let report = spectral::spectral_report(&f.field()?, f.eps, dim, gap_tol, depth)?;
            Ok(Outcome::ok(match fmt {
                Format::Csv => report.profile.to_csv(),
                Format::Json => json(&json!({
                    "gaps": report.gaps,
                    "profile": profile_json(&report.profile),
                    "top_eigenvalues": report.eigenvalues.iter().take(depth + 1).collect::<Vec<_>>(),
                }))?,
            }))
        }
        LaxCmd::Hierarchy { f, l } => {
            csv_unsupported(fmt)?;
            let field = f.field()?;
            let ls = l
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| CliError::Input(format!("bad order {s:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let mut t = serde_json::Map::new();
            for &l in &ls {
                t.insert(l.to_string(), json!(hierarchy(&field, f.eps, l)));
            }
            let a = field.a;
            let o3 = 3.0 * hierarchy(&field, f.eps, 3) - 3.0 * a * hierarchy(&field, f.eps, 2) + a.powi(3);
            Ok(Outcome::ok(json(&json!({ "T": t, "O3": o3 }))?))
        }
        LaxCmd::Resolvent { f, u, dim } => {
            csv_unsupported(fmt)?;
            let field = f.field()?;
            let u = parse_complex(&u)?;
            let (r, _) = resolvent_element(&field, f.eps, u, dim)?;
            let det = perturbation_determinant(&field, f.eps, u, dim)?;
            Ok(Outcome::ok(json(&json!({
                "u": cplx(u),
                "resolvent": cplx(r),
                "determinant": cplx(det),
            }))?))
        }
        LaxCmd::Poisson { f, l1, l2, tol } => {
            csv_unsupported(fmt)?;
            let b = poisson_check(l1, l2, &f.field()?, f.eps);
            Ok(Outcome {
                pass: b < tol,
                body: json(&json!({ "l1": l1, "l2": l2, "bracket": b }))?,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// quantum

#[derive(Args, Debug, Clone)]
pub struct QArgs {
    #[arg(long, default_value_t = 1.0)]
    eps: f64,
    #[arg(long, default_value_t = 2.0)]
    hbar: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, default_value_t = 4)]
    degree: usize,
}

impl QArgs {
    fn float(&self) -> Result<QuantumParams<f64>, CliError> {
        Ok(QuantumParams::from_f64(self.eps, self.hbar, self.a)?)
    }

    fn exact(&self) -> Result<QuantumParams<BigRational>, CliError> {
        Ok(QuantumParams::from_f64(self.eps, self.hbar, self.a)?)
    }
}

#[derive(Subcommand, Debug)]
pub enum QuantumCmd {
    /// Print a block: `grade`, `T<l>`, `Tdown<l>` or `O3`.
    Block {
        #[command(flatten)]
        q: QArgs,
        #[arg(long, default_value = "O3")]
        op: String,
        /// Exact rational arithmetic (parameters are read as exact binary fractions).
        #[arg(long)]
        exact: bool,
    },
    /// Labeled eigenstates of the Hamiltonian.
    Diag {
        #[command(flatten)]
        q: QArgs,
    },
    /// Norm of `[T_l1, T_l2]`.
    Commute {
        #[command(flatten)]
        q: QArgs,
        #[arg(long, default_value_t = 3)]
        l1: usize,
        #[arg(long, default_value_t = 4)]
        l2: usize,
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// `(u − a − T↓(u))⁻¹ = T↑(u)` for every degree up to --degree.
    ResolventIdentity {
        #[command(flatten)]
        q: QArgs,
        #[arg(long, allow_hyphen_values = true, default_value = "10")]
        u: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

fn select_block<T: Scalar + std::fmt::Display>(d: usize, op: &str, params: &QuantumParams<T>) -> Result<Value, CliError> {
    let render = |m: &nalgebra::DMatrix<T>| -> Vec<Vec<String>> {
        m.row_iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
    };
    let op_block = |b: OperatorBlock<T>| {
        json!({
            "degree": b.degree,
            "label": b.label,
            "basis": b.basis.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "matrix": render(&b.matrix),
        })
    };
    if op == "grade" {
        let g = grade_block(d, params);
        return Ok(json!({
            "grade": g.grade,
            "states": g.states.iter().map(|(mu, h)| json!({ "partition": mu.to_string(), "height": h })).collect::<Vec<_>>(),
            "matrix": render(&g.matrix),
        }));
    }
    if op == "O3" {
        return Ok(op_block(hamiltonian(d, params)));
    }
    let order = |s: &str| s.parse::<usize>().map_err(|_| CliError::Input(format!("unknown operator {op:?}")));
    if let Some(l) = op.strip_prefix("Tdown") {
        return Ok(op_block(hierarchy_down(d, order(l)?, params).pop().expect("nonempty")));
    }
    if let Some(l) = op.strip_prefix('T') {
        return Ok(op_block(hierarchy_up(d, order(l)?, params).pop().expect("nonempty")));
    }
    Err(CliError::Input(format!("unknown operator {op:?}")))
}

pub fn quantum(cmd: QuantumCmd, fmt: Format) -> Result<Outcome, CliError> {
    csv_unsupported(fmt)?;
    match cmd {
        QuantumCmd::Block { q, op, exact } => {
            let body = if exact {
                select_block(q.degree, &op, &q.exact()?)?
            } else {
                select_block(q.degree, &op, &q.float()?)?
            };
            Ok(Outcome::ok(json(&body)?))
        }
        QuantumCmd::Diag { q } => {
            let d = diagonalize(q.degree, &q.float()?)?;
            Ok(Outcome::ok(json(&d.to_json())?))
        }
        QuantumCmd::Commute { q, l1, l2, exact, tol } => {
            let norm = if exact {
                commutator_norm(q.degree, l1, l2, &q.exact()?)
            } else {
                commutator_norm(q.degree, l1, l2, &q.float()?)
            };
            Ok(Outcome {
                pass: norm < tol,
                body: json(&json!({ "degree": q.degree, "l1": l1, "l2": l2, "norm": norm, "exact": exact }))?,
            })
        }
        QuantumCmd::ResolventIdentity { q, u, tol } => {
            let u = parse_complex(&u)?;
            let params = q.float()?;
            let errors = (0..=q.degree)
                .map(|d| resolvent_identity_error(d, &params, u))
                .collect::<Result<Vec<f64>, _>>()?;
            let worst = errors.iter().copied().fold(0.0, f64::max);
            Ok(Outcome {
                pass: worst < tol,
                body: json(&json!({ "u": cplx(u), "errors": errors, "max_error": worst }))?,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// verify

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// Quantum spectrum against renormalized Bohr–Sommerfeld energies.
    Theorem1 {
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
        #[arg(long, default_value_t = 2.0)]
        hbar: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Gap actions of a multi-phase solution in units of `2πℏ`.
    Part1 {
        #[command(flatten)]
        p: PhaseArgs,
        #[arg(long, default_value_t = 2.0)]
        hbar: f64,
        #[arg(long, default_value_t = 256)]
        loop_samples: usize,
        #[arg(long, default_value_t = 127)]
        modes: usize,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
    },
}

pub fn verify(cmd: VerifyCmd, fmt: Format) -> Result<Outcome, CliError> {
    csv_unsupported(fmt)?;
    match cmd {
        VerifyCmd::Theorem1 {
            eps,
            hbar,
            a,
            max_degree,
            tol,
        } => {
            let r = verify_theorem1(eps, hbar, a, max_degree, tol)?;
            Ok(Outcome {
                pass: r.pass,
                body: json(&r)?,
            })
        }
        VerifyCmd::Part1 {
            p,
            hbar,
            loop_samples,
            modes,
            tol,
        } => {
            let r = part1_action_report(&p.params()?, hbar, loop_samples, modes, tol)?;
            Ok(Outcome {
                pass: r.pass,
                body: json(&r)?,
            })
        }
    }
}
