//! Command-line front end. `run` parses arguments, dispatches, and returns
//! the process exit code: 0 on success, 2 on an inconclusive or unknown
//! outcome, 1 on input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::cohom::h0_bundle;
use crate::k3lat::{
    expected_dim, expected_dim_on, gram_of, genus, not_effective_cert, pair, pullback_chern, quartic_region_run, rigid_rank2_classes,
    CoverSpec, EffectivityOutcome, GramLattice, LatticeClass,
};
use crate::monad::{chern_monad, MonadComplex, MonadDocument, SurfaceDocument};
use crate::poly::MultiDegree;
use crate::stability::{certify, verify, CertifyOptions, CoreMode, Polarization, StabilityCertificate};
use crate::zeta::{assemble_charpoly, count_points, rank_upper_bound};

#[derive(Debug, Parser)]
#[command(name = "k3monad", version, about = "Stability certificates for monad bundles and Picard bounds for K3 surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify slope stability of a monad bundle.
    Certify(CertifyArgs),
    /// h0 of a twisted exterior power of a monad bundle.
    H0(H0Args),
    /// Chern data of a monad bundle, optionally pulled back to a double cover.
    Chern(ChernArgs),
    /// Lattice arithmetic and effectivity.
    #[command(subcommand)]
    Lattice(LatticeCommand),
    /// Stability of a kernel bundle on a quartic surface.
    QuarticRun(QuarticArgs),
    /// Points of the double cover branched along a curve, over F_{p^n}.
    CountPoints(ZetaArgs),
    /// Upper bound for the geometric Picard number from point counts.
    PicardBound(PicardArgs),
    /// Recompute a certificate and compare.
    Verify { certificate: PathBuf },
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub monad: PathBuf,
    /// Ample class, e.g. `1` or `1,1`; lattice coordinates with `--lattice`.
    #[arg(long, allow_hyphen_values = true)]
    pub polarization: Option<String>,
    #[arg(long)]
    pub lattice: Option<String>,
    /// Fiber point `a:b` for tail rules.
    #[arg(long, value_parser = parse_point)]
    pub fiber_point: Option<(i64, i64)>,
    #[arg(long, allow_hyphen_values = true)]
    pub margin: Option<i64>,
    #[arg(long, value_enum, default_value_t = CoreArg::Full)]
    pub core_mode: CoreArg,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CoreArg {
    Full,
    Maximal,
}

#[derive(Debug, Args)]
pub struct H0Args {
    #[arg(long)]
    pub monad: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub twist: String,
    #[arg(long, default_value_t = 1)]
    pub exterior: usize,
}

#[derive(Debug, Args)]
pub struct ChernArgs {
    #[arg(long)]
    pub monad: PathBuf,
    /// `double_plane` or `double_quadric`.
    #[arg(long)]
    pub cover: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum LatticeCommand {
    Pair {
        #[arg(long)]
        lattice: String,
        #[arg(long = "class", allow_hyphen_values = true, num_args = 1)]
        classes: Vec<String>,
    },
    Gram {
        #[arg(long)]
        lattice: String,
        #[arg(long = "class", allow_hyphen_values = true, num_args = 1)]
        classes: Vec<String>,
    },
    Genus {
        #[arg(long)]
        lattice: String,
        #[arg(long = "class", allow_hyphen_values = true)]
        class: String,
    },
    Effectivity {
        #[arg(long)]
        lattice: String,
        #[arg(long = "class", allow_hyphen_values = true)]
        class: String,
        #[arg(long, allow_hyphen_values = true)]
        polarization: String,
    },
    ExpectedDim {
        #[arg(long)]
        rank: i64,
        #[arg(long, allow_hyphen_values = true)]
        c1_squared: i64,
        #[arg(long, allow_hyphen_values = true)]
        c2: i64,
        /// Holomorphic Euler characteristic of the surface; 2 for a K3.
        #[arg(long, default_value_t = 2)]
        chi: i64,
    },
    RigidClasses {
        #[arg(long, default_value_t = 5)]
        max_k: i64,
    },
}

#[derive(Debug, Args)]
pub struct QuarticArgs {
    #[arg(long)]
    pub surface: PathBuf,
    #[arg(long)]
    pub monad: PathBuf,
    #[arg(long, default_value = "[4 5 2]")]
    pub lattice: String,
    #[arg(long, default_value = "1,0")]
    pub polarization: String,
}

#[derive(Debug, Args)]
pub struct ZetaArgs {
    #[arg(long)]
    pub surface: PathBuf,
    #[arg(long)]
    pub prime: u64,
    #[arg(long, default_value_t = 9)]
    pub max_n: u32,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct PicardArgs {
    #[command(flatten)]
    pub zeta: ZetaArgs,
    /// Number of known algebraic classes with eigenvalue q.
    #[arg(long, default_value_t = 2)]
    pub k_alg: usize,
}

/// Rendered result of one command.
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

type CliResult = Result<Output, String>;

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let out = cli.out.clone();
    match execute(&cli) {
        Ok(o) => {
            let written = match &out {
                Some(path) => fs::write(path, &o.text).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    print!("{}", o.text);
                    Ok(())
                }
            };
            match written {
                Ok(()) => o.code,
                Err(e) => {
                    eprintln!("error: {e}");
                    1
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

pub fn execute(cli: &Cli) -> CliResult {
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Certify(a) => cmd_certify(a, json),
        Command::H0(a) => cmd_h0(a, json),
        Command::Chern(a) => cmd_chern(a, json),
        Command::Lattice(l) => cmd_lattice(l, json),
        Command::QuarticRun(a) => cmd_quartic(a, json),
        Command::CountPoints(a) => cmd_count(a, json),
        Command::PicardBound(a) => cmd_picard(a, json),
        Command::Verify { certificate } => cmd_verify(certificate, json),
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_monad(path: &Path) -> Result<(MonadDocument, MonadComplex), String> {
    let doc = MonadDocument::from_json(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    let m = doc.build().map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((doc, m))
}

fn load_surface(path: &Path) -> Result<SurfaceDocument, String> {
    SurfaceDocument::from_json(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

/// A catalogue name such as `U(2)` or a path to a lattice document.
fn load_lattice(spec: &str) -> Result<Arc<GramLattice>, String> {
    if let Some(l) = GramLattice::named(spec) {
        return Ok(Arc::new(l));
    }
    let text = read(Path::new(spec)).map_err(|e| format!("not a catalogued lattice, and {e}"))?;
    serde_json::from_str::<GramLattice>(&text).map(Arc::new).map_err(|e| format!("{spec}: {e}"))
}

fn parse_ints(s: &str) -> Result<Vec<i64>, String> {
    s.split(',').map(|t| t.trim().parse::<i64>().map_err(|_| format!("`{s}` is not a comma-separated integer list"))).collect()
}

fn parse_point(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("`{s}` is not of the form a:b"))?;
    let p = |t: &str| t.trim().parse::<i64>().map_err(|_| format!("`{t}` is not an integer"));
    Ok((p(a)?, p(b)?))
}

fn lattice_class(lat: &Arc<GramLattice>, s: &str) -> Result<LatticeClass, String> {
    if let Some(c) = LatticeClass::by_name(lat, s) {
        return Ok(c);
    }
    LatticeClass::new(lat, parse_ints(s)?).map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn cert_output(cert: &StabilityCertificate, json: bool) -> Output {
    let text = if json { cert.to_json() + "\n" } else { cert.summary() };
    Output { text, code: if cert.verdict.is_stable() { 0 } else { 2 } }
}

fn cmd_certify(a: &CertifyArgs, json: bool) -> CliResult {
    let (_, m) = load_monad(&a.monad)?;
    let h = match (&a.lattice, &a.polarization) {
        (Some(l), Some(p)) => {
            let lat = load_lattice(l)?;
            Polarization::on_lattice(lattice_class(&lat, p)?).map_err(|e| e.to_string())?
        }
        (Some(_), None) => return Err("--lattice needs --polarization".into()),
        (None, Some(p)) => {
            Polarization::for_ambient(m.ambient(), MultiDegree::from_slice(&parse_ints(p)?)).map_err(|e| e.to_string())?
        }
        (None, None) => Polarization::standard(m.ambient()),
    };
    let mut opts = CertifyOptions {
        core_mode: match a.core_mode {
            CoreArg::Full => CoreMode::Full,
            CoreArg::Maximal => CoreMode::Maximal,
        },
        margin: a.margin,
        threads: a.threads,
        ..CertifyOptions::default()
    };
    if let Some(p) = a.fiber_point {
        opts.fiber_point = p;
    }
    let cert = certify(&m, &h, &opts).map_err(|e| e.to_string())?;
    Ok(cert_output(&cert, json))
}

fn cmd_h0(a: &H0Args, json: bool) -> CliResult {
    let (_, m) = load_monad(&a.monad)?;
    let twist = MultiDegree::from_slice(&parse_ints(&a.twist)?);
    if twist.arity() != m.ambient().arity() {
        return Err(format!("twist {twist} does not match the ambient grading"));
    }
    let r = h0_bundle(&m, a.exterior, &twist, true).map_err(|e| e.to_string())?;
    let code = if r.value.exact().is_some() { 0 } else { 2 };
    let text = if json { to_json(&r) } else { format!("{}\n", r.value) };
    Ok(Output { text, code })
}

fn cmd_chern(a: &ChernArgs, json: bool) -> CliResult {
    let (_, m) = load_monad(&a.monad)?;
    let c = chern_monad(&m).map_err(|e| e.to_string())?;
    let pulled = match &a.cover {
        Some(name) => {
            let cover = CoverSpec::named(name).ok_or_else(|| format!("unknown cover `{name}`"))?;
            Some(pullback_chern(&c, m.ambient(), &cover).ok_or_else(|| format!("{name} is not a cover of this ambient"))?)
        }
        None => None,
    };
    let dim = pulled.map(|p| expected_dim(p.rank, p.c1_squared, p.c2));
    // P^2 and P^1 x P^1 both have χ(O) = 1
    let base_dim = match m.ambient().dim() {
        2 => Some(expected_dim_on(c.rank, c.c1_squared(m.ambient()).map_err(|e| e.to_string())?, c.c2, 1)),
        _ => None,
    };
    if json {
        let v = json!({ "chern": c, "base_expected_dim": base_dim, "pullback": pulled, "expected_dim": dim });
        return Ok(Output::ok(to_json(&v)));
    }
    let mut text = format!("rank {}, c1 {}, c2 {}\n", c.rank, c.c1, c.c2);
    if let Some(d) = base_dim {
        text += &format!("expected moduli dimension on the base: {d}\n");
    }
    if let (Some(p), Some(d)) = (pulled, dim) {
        text += &format!("on the cover: c1 = pullback of {}, c1^2 {}, c2 {}, expected dimension {d}\n", p.c1_base, p.c1_squared, p.c2);
    }
    Ok(Output::ok(text))
}

fn cmd_lattice(cmd: &LatticeCommand, json: bool) -> CliResult {
    match cmd {
        LatticeCommand::Pair { lattice, classes } => {
            let lat = load_lattice(lattice)?;
            let [a, b] = classes.as_slice() else {
                return Err("pair needs exactly two --class arguments".into());
            };
            let v = pair(&lattice_class(&lat, a)?, &lattice_class(&lat, b)?).map_err(|e| e.to_string())?;
            Ok(Output::ok(if json { to_json(&json!({ "pairing": v })) } else { format!("{v}\n") }))
        }
        LatticeCommand::Gram { lattice, classes } => {
            let lat = load_lattice(lattice)?;
            let cs = classes.iter().map(|c| lattice_class(&lat, c)).collect::<Result<Vec<_>, _>>()?;
            let g = gram_of(&cs).map_err(|e| e.to_string())?;
            let relation = g.relation();
            let solved = g.solve_last().map(|v| v.iter().map(ToString::to_string).collect::<Vec<_>>());
            if json {
                return Ok(Output::ok(to_json(&json!({ "gram": g, "relation": relation, "last_in_terms_of_others": solved }))));
            }
            let mut text = String::new();
            for (name, row) in g.names.iter().zip(&g.matrix) {
                text += &format!("{name}: {row:?}\n");
            }
            text += &format!("det {}\n", g.det);
            if let Some(r) = relation {
                text += &format!("relation {r:?}\n");
            }
            if let Some(s) = solved {
                text += &format!("last = {}\n", s.join(", "));
            }
            Ok(Output::ok(text))
        }
        LatticeCommand::Genus { lattice, class } => {
            let lat = load_lattice(lattice)?;
            let g = genus(&lattice_class(&lat, class)?).map_err(|e| e.to_string())?;
            Ok(Output::ok(if json { to_json(&json!({ "genus": g })) } else { format!("{g}\n") }))
        }
        LatticeCommand::Effectivity { lattice, class, polarization } => {
            let lat = load_lattice(lattice)?;
            let d = lattice_class(&lat, class)?;
            let h = lattice_class(&lat, polarization)?;
            let out = not_effective_cert(&d, &h).map_err(|e| e.to_string())?;
            let code = if matches!(out, EffectivityOutcome::NotEffective(_)) { 0 } else { 2 };
            let text = if json {
                to_json(&out)
            } else {
                match &out {
                    EffectivityOutcome::NotEffective(c) => format!("{d} is not effective ({:?}, degree {})\n", c.rule, c.degree),
                    EffectivityOutcome::TrivialClass { note } => format!("{d}: {note}\n"),
                    EffectivityOutcome::Unknown { reason } => format!("{d}: unknown ({reason})\n"),
                }
            };
            Ok(Output { text, code })
        }
        LatticeCommand::ExpectedDim { rank, c1_squared, c2, chi } => {
            let v = expected_dim_on(*rank, *c1_squared, *c2, *chi);
            Ok(Output::ok(if json { to_json(&json!({ "expected_dim": v })) } else { format!("{v}\n") }))
        }
        LatticeCommand::RigidClasses { max_k } => {
            let rows: Vec<(i64, i64, i64)> = (0..=*max_k)
                .map(|k| {
                    let (x, y) = rigid_rank2_classes(k);
                    (k, x, y)
                })
                .collect();
            if json {
                let v: Vec<_> = rows.iter().map(|&(k, x, y)| json!({ "k": k, "c1_base": x, "c2": y })).collect();
                return Ok(Output::ok(to_json(&v)));
            }
            Ok(Output::ok(rows.iter().map(|(k, x, y)| format!("k={k}: c1^2 = 2*{x}^2, c2 = {y}\n")).collect()))
        }
    }
}

fn cmd_quartic(a: &QuarticArgs, json: bool) -> CliResult {
    let surface = load_surface(&a.surface)?;
    let (doc, _) = load_monad(&a.monad)?;
    let lat = load_lattice(&a.lattice)?;
    let h = Polarization::on_lattice(lattice_class(&lat, &a.polarization)?).map_err(|e| e.to_string())?;
    let cert = quartic_region_run(&surface, &doc, &h).map_err(|e| e.to_string())?;
    Ok(cert_output(&cert, json))
}

fn counts(a: &ZetaArgs) -> Result<Vec<u64>, String> {
    let (_, f) = load_surface(&a.surface)?.build().map_err(|e| e.to_string())?;
    (1..=a.max_n).map(|n| count_points(&f, a.prime, n, a.threads).map_err(|e| e.to_string())).collect()
}

fn cmd_count(a: &ZetaArgs, json: bool) -> CliResult {
    let ns = counts(a)?;
    let rows: Vec<(u32, u128, u64, i128)> = ns
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let q = (a.prime as u128).pow(i as u32 + 1);
            (i as u32 + 1, q, c, c as i128 - 1 - (q * q) as i128)
        })
        .collect();
    if json {
        let v: Vec<_> = rows.iter().map(|&(n, q, c, t)| json!({ "n": n, "q": q as u64, "count": c, "trace": t as i64 })).collect();
        return Ok(Output::ok(to_json(&v)));
    }
    Ok(Output::ok(rows.iter().map(|(n, q, c, t)| format!("{n}, {q}, {c}, {t}\n")).collect()))
}

fn cmd_picard(a: &PicardArgs, json: bool) -> CliResult {
    let ns = counts(&a.zeta)?;
    let profile = assemble_charpoly(&ns, a.zeta.prime, a.k_alg).map_err(|e| e.to_string())?;
    let bound = rank_upper_bound(&profile).map_err(|e| e.to_string())?;
    if json {
        return Ok(Output::ok(to_json(&json!({ "profile": profile, "bound": bound }))));
    }
    let mut text = String::new();
    for c in &profile.candidates {
        let coeffs: Vec<String> = c.coefficients.iter().map(ToString::to_string).collect();
        let mid = c.middle.as_ref().map(|m| format!(" e_mid={m}")).unwrap_or_default();
        text += &format!("candidate sign {:+}{mid}: [{}]; {} eigenvalues q*zeta\n", c.sign, coeffs.join(", "), c.roots_of_unity);
    }
    for e in &profile.eliminated {
        text += &format!("eliminated sign {:+}: {}\n", e.sign, e.reason);
    }
    for n in &bound.notes {
        text += &format!("{n}\n");
    }
    text += &format!("bound {}\n", bound.bound);
    Ok(Output::ok(text))
}

fn cmd_verify(path: &Path, json: bool) -> CliResult {
    let cert = StabilityCertificate::from_json(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    let report = verify(&cert).map_err(|e| e.to_string())?;
    let text = if json {
        to_json(&report)
    } else if report.ok {
        "verified\n".to_string()
    } else {
        format!("mismatch: {}\n", report.mismatches.join(", "))
    };
    Ok(Output { text, code: if report.ok { 0 } else { 2 } })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(name: &str) -> String {
        format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
    }

    fn exec(args: &[&str]) -> Output {
        let cli = Cli::try_parse_from(std::iter::once("k3monad").chain(args.iter().copied())).unwrap();
        execute(&cli).unwrap()
    }

    #[test]
    fn h0_table_entry() {
        let o = exec(&["h0", "--monad", &data("k_rank3.monad"), "--exterior", "2", "--twist", "3,3"]);
        assert_eq!((o.text.as_str(), o.code), ("4\n", 0));
    }

    #[test]
    fn certify_round_trip_through_verify() {
        let o = exec(&["certify", "--monad", &data("euler.monad"), "--polarization", "1", "--format", "json"]);
        assert_eq!(o.code, 0);
        let dir = std::env::temp_dir().join(format!("k3monad-cli-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("euler.cert.json");
        fs::write(&path, &o.text).unwrap();
        let v = exec(&["verify", path.to_str().unwrap()]);
        assert_eq!((v.text.as_str(), v.code), ("verified\n", 0));
    }

    #[test]
    fn lattice_commands() {
        assert_eq!(exec(&["lattice", "pair", "--lattice", "[4 5 2]", "--class", "C", "--class", "H"]).text, "5\n");
        assert_eq!(exec(&["lattice", "genus", "--lattice", "U(2)", "--class", "2,2"]).text, "9\n");
        let g = exec(&["lattice", "gram", "--lattice", "U(2)", "--class", "E1", "--class", "E2", "--class", "2,2"]);
        assert!(g.text.contains("det 0") && g.text.contains("last = 2, 2"), "{}", g.text);
        let e = exec(&["lattice", "effectivity", "--lattice", "[4 5 2]", "--class", "-2,2", "--polarization", "H"]);
        assert_eq!(e.code, 0);
        assert_eq!(exec(&["lattice", "expected-dim", "--rank", "3", "--c1-squared", "64", "--c2", "24"]).text, "0\n");
    }

    #[test]
    fn count_lines() {
        let o = exec(&["count-points", "--surface", &data("b44.poly"), "--prime", "3", "--max-n", "2"]);
        assert_eq!(o.text, "1, 3, 14, 4\n2, 9, 98, 16\n");
    }

    #[test]
    fn input_errors() {
        assert_eq!(run(["k3monad", "h0", "--monad", "/nonexistent", "--twist", "1"]), 1);
        assert_eq!(run(["k3monad", "frobnicate"]), 1);
        assert!(parse_point("1,2").is_err());
        assert_eq!(parse_point("0:1"), Ok((0, 1)));
    }
}
