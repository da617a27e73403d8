//! Command-line front end.

use std::collections::BTreeMap;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::expansion::{CurveCase, Expansion, Filtration};
use crate::goldman::{goldman_bracket, lie_membership, sigma_action, GoldmanElement};
use crate::group::{Alphabet, GroupRingElement, GroupWord};
use crate::sac;
use crate::scalar::{format_rational, parse_rational, Rational};
use crate::tensor::{SurfaceSignature, TruncatedTensor};
use crate::twists::{
    classical_twist, figure_eight_obstruction, johnson_tau, twist_operator, xy_label, MappingClassAction, StandardCurve,
};

/// Environment variable bounding the width of pretty output lines.
pub const WIDTH_VAR: &str = "GOLDMAN_WIDTH";

#[derive(Parser, Debug)]
#[command(
    name = "goldman",
    version,
    about = "Exact computations in the completed Goldman Lie algebra"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate an expansion on a group word.
    Expand {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        word: String,
    },
    /// Generator table of the symplectic expansion.
    SympExp {
        #[command(flatten)]
        surface: SurfaceArgs,
    },
    /// λ-image of the Goldman bracket of two loops.
    Bracket {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Two loops, given twice.
        #[arg(long = "loop", num_args = 1, required = true)]
        loops: Vec<String>,
    },
    /// Action of a loop on a group word, in tensor coordinates.
    Sigma {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long = "loop")]
        loop_word: String,
        #[arg(long)]
        word: String,
    },
    /// Generalized Dehn twist applied to the image of a word.
    Twist {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Standard curve: a1, b1, zeta, sep:h.
        #[arg(long, conflicts_with = "loop_word")]
        curve: Option<String>,
        /// Arbitrary loop word (generalized twist).
        #[arg(long = "loop")]
        loop_word: Option<String>,
        #[arg(long)]
        word: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        z: String,
    },
    /// Figure-eight obstruction report.
    Fig8 {
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 3)]
        trunc: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Johnson image of a product of standard twists (applied right to left).
    Johnson {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long = "curve", required = true)]
        curves: Vec<String>,
    },
    /// Annulus groupoid: exp of `D(gamma0) = log(x) gamma0`.
    SacDemo {
        #[arg(long, default_value_t = 5)]
        trunc: usize,
        /// Groupoid fixture file; defaults to the bundled annulus.
        #[arg(long)]
        fixture: Option<std::path::PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Args, Debug, Clone)]
pub struct SurfaceArgs {
    #[arg(long, default_value_t = 1)]
    pub genus: usize,
    #[arg(long, default_value_t = 1)]
    pub boundary: usize,
    #[arg(long, default_value_t = 4)]
    pub trunc: usize,
    /// exp | symp | curve:<nonsep|sep-hom:k,h|sep-null:h>
    #[arg(long, default_value = "symp")]
    pub expansion: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Pretty,
}

/// Parsed job: surface, truncation, expansion choice and output format.
#[derive(Clone, Debug)]
pub struct JobConfig {
    pub signature: SurfaceSignature,
    pub expansion: ExpansionChoice,
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpansionChoice {
    Exponential,
    Symplectic,
    CurveAdapted(CurveCase),
}

impl ExpansionChoice {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "exp" | "exponential" => Ok(ExpansionChoice::Exponential),
            "symp" | "symplectic" => Ok(ExpansionChoice::Symplectic),
            _ => match text.strip_prefix("curve:") {
                Some(rest) => Ok(ExpansionChoice::CurveAdapted(CurveCase::parse(rest)?)),
                None => Err(Error::Parse(format!("unknown expansion `{text}`"))),
            },
        }
    }
}

impl JobConfig {
    pub fn from_args(a: &SurfaceArgs) -> Result<Self> {
        if a.trunc == 0 {
            return Err(Error::Config("truncation must be at least 1".into()));
        }
        Ok(JobConfig {
            signature: SurfaceSignature::new(a.genus, a.boundary, a.trunc)?,
            expansion: ExpansionChoice::parse(&a.expansion)?,
            format: a.format,
        })
    }

    pub fn expansion(&self) -> Result<Expansion> {
        match &self.expansion {
            ExpansionChoice::Exponential => Ok(Expansion::exponential(self.signature)),
            ExpansionChoice::Symplectic => Expansion::symplectic(self.signature),
            ExpansionChoice::CurveAdapted(c) => Expansion::curve_adapted(self.signature, c.clone()),
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::surface(self.signature.homology())
    }

    pub fn word(&self, text: &str) -> Result<GroupWord> {
        self.alphabet().parse(text)
    }
}

/// Report of one run: a JSON value plus its human-readable rendering.
pub struct Report {
    pub json: Value,
    pub pretty: Vec<String>,
}

impl Report {
    pub fn render(&self, format: Format, width: Option<usize>) -> String {
        match format {
            Format::Json => serde_json::to_string(&self.json).expect("report serialization"),
            Format::Pretty => {
                let lines: Vec<String> = self.pretty.iter().flat_map(|l| wrap(l, width)).collect();
                lines.join("\n")
            }
        }
    }
}

fn wrap(line: &str, width: Option<usize>) -> Vec<String> {
    let Some(w) = width.filter(|&w| w > 0) else {
        return vec![line.to_string()];
    };
    let mut out = Vec::new();
    let mut cur = String::new();
    for tok in line.split(' ') {
        if !cur.is_empty() && cur.len() + 1 + tok.len() > w {
            out.push(std::mem::take(&mut cur));
            cur.push_str("    ");
        } else if !cur.is_empty() {
            cur.push(' ');
        }
        cur.push_str(tok);
    }
    out.push(cur);
    out
}

fn tensor_report(label: &str, t: &TruncatedTensor) -> Report {
    Report {
        json: t.to_json_value(),
        pretty: vec![format!("{label} = {t}")],
    }
}

fn parse_z(text: &str) -> Result<Rational> {
    parse_rational(text)
}

/// Executes a parsed command.
pub fn execute(cmd: &Command) -> Result<(Report, Format)> {
    match cmd {
        Command::Expand { surface, word } => {
            let cfg = JobConfig::from_args(surface)?;
            let theta = cfg.expansion()?;
            let w = cfg.word(word)?;
            let t = theta.evaluate(&w)?;
            Ok((
                tensor_report(&format!("θ({})", cfg.alphabet().format(&w)), &t),
                cfg.format,
            ))
        }
        Command::SympExp { surface } => {
            let mut cfg = JobConfig::from_args(surface)?;
            cfg.expansion = ExpansionChoice::Symplectic;
            let theta = cfg.expansion()?;
            let al = cfg.alphabet();
            let pretty = (0..al.len())
                .map(|i| format!("θ({}) = {}", al.names()[i], theta.generator_image(i)))
                .collect();
            Ok((
                Report {
                    json: theta.to_json(),
                    pretty,
                },
                cfg.format,
            ))
        }
        Command::Bracket { surface, loops } => {
            let cfg = JobConfig::from_args(surface)?;
            if loops.len() != 2 {
                return Err(Error::Parse("bracket takes exactly two --loop arguments".into()));
            }
            let theta = cfg.expansion()?;
            let u = GoldmanElement::from_loop(&cfg.word(&loops[0])?);
            let v = GoldmanElement::from_loop(&cfg.word(&loops[1])?);
            let t = goldman_bracket(&u, &v, &theta)?;
            Ok((tensor_report("λ[u,v]", &t), cfg.format))
        }
        Command::Sigma {
            surface,
            loop_word,
            word,
        } => {
            let cfg = JobConfig::from_args(surface)?;
            let theta = cfg.expansion()?;
            let u = GoldmanElement::from_loop(&cfg.word(loop_word)?);
            let v = GroupRingElement::from_word(cfg.word(word)?);
            let t = sigma_action(&u, &v, &theta)?;
            Ok((tensor_report("θ(σ(u)v)", &t), cfg.format))
        }
        Command::Twist {
            surface,
            curve,
            loop_word,
            word,
            z,
        } => {
            let cfg = JobConfig::from_args(surface)?;
            let h = cfg.signature.homology();
            let z = parse_z(z)?;
            let loop_w = match (curve, loop_word) {
                (Some(c), None) => StandardCurve::parse(c)?.loop_word(h)?,
                (None, Some(l)) => cfg.word(l)?,
                _ => return Err(Error::Parse("twist needs exactly one of --curve or --loop".into())),
            };
            let theta = cfg.expansion()?;
            let w = cfg.word(word)?;
            let op = twist_operator(&loop_w, &theta, &z)?;
            let t = op.apply(&theta.evaluate(&w)?)?;
            let mut pretty = vec![format!("t(θ({})) = {t}", cfg.alphabet().format(&w))];
            if let Some(c) = curve {
                let cw = classical_twist(StandardCurve::parse(c)?, &w, h)?;
                pretty.push(format!("classical image: {}", cfg.alphabet().format(&cw)));
            }
            Ok((
                Report {
                    json: t.to_json_value(),
                    pretty,
                },
                cfg.format,
            ))
        }
        Command::Fig8 { z, trunc, format } => {
            if *trunc < 3 {
                return Err(Error::Config(
                    "the figure-eight report needs truncation at least 3".into(),
                ));
            }
            let z = parse_z(z)?;
            let r = figure_eight_obstruction(&z)?;
            let res2 = r.residual2.format_with(&xy_label);
            let res3 = r.residual3_text();
            let json = json!({
                "z": format_rational(&r.z),
                "b": format_rational(&r.b),
                "c": format_rational(&r.c),
                "residual2": res2,
                "residual3": res3,
            });
            let pretty = vec![
                format!("z         = {}", format_rational(&r.z)),
                format!("b         = {}", format_rational(&r.b)),
                format!("c         = {}", format_rational(&r.c)),
                format!("residual2 = {res2}"),
                format!("residual3 = {res3}"),
            ];
            Ok((Report { json, pretty }, *format))
        }
        Command::Johnson { surface, curves } => {
            let cfg = JobConfig::from_args(surface)?;
            let h = cfg.signature.homology();
            let theta = cfg.expansion()?;
            let mut phi = MappingClassAction::identity(h);
            for c in curves {
                phi = phi.compose(&MappingClassAction::twist(StandardCurve::parse(c)?, h)?)?;
            }
            let tau = johnson_tau(&phi, &theta)?;
            let m = lie_membership(&tau)?;
            let filt = Filtration::of(&tau);
            let json = json!({
                "tau": tau.to_json_value(),
                "lowest_degree": filt.to_string(),
                "l_plus": m.l_plus,
            });
            let pretty = vec![
                format!("τ = {tau}"),
                format!("lowest degree: {filt}"),
                format!("l_g⁺: {}", m.l_plus),
            ];
            Ok((Report { json, pretty }, cfg.format))
        }
        Command::SacDemo { trunc, fixture, format } => {
            let text = match fixture {
                Some(p) => std::fs::read_to_string(p)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))?,
                None => sac::ANNULUS_FIXTURE.to_string(),
            };
            let fx: sac::SacFixture =
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("fixture JSON: {e}")))?;
            let spec = sac::FreeGroupoidSpec::from_json_struct(&fx.groupoid)?.with_trunc(*trunc);
            let d = spec.derivation_from_json(&fx.derivation)?;
            let u = d.exp()?;
            let mut images = BTreeMap::new();
            let mut pretty = Vec::new();
            for (j, name) in spec.objects().iter().enumerate() {
                if let Some(arc) = spec.arc_name(j) {
                    let g = spec.arc(arc)?;
                    let img = spec.format_payload(&u.apply(&g)?.payload);
                    let dv = spec.format_payload(&d.apply(&g)?.payload);
                    pretty.push(format!("D({arc}) = ({dv})·{arc}"));
                    pretty.push(format!("exp(D)({arc}) = ({img})·{arc}"));
                    images.insert(arc.to_string(), json!({"target": name, "derivation": dv, "exp": img}));
                }
            }
            for (x, name) in spec.loops().iter().enumerate() {
                let img = spec.format_payload(u.loop_image(x));
                pretty.push(format!("exp(D)({name}) = {img}"));
                images.insert(name.clone(), json!({"exp": img}));
            }
            let mut json = json!({"trunc": trunc, "generators": images});
            if fixture.is_none() {
                let g = spec.arc("gamma0")?;
                let expected = spec.loop_element("x")?.compose(&g)?;
                let ok = u.apply(&g)? == expected;
                json["matches_gamma0_x"] = json!(ok);
                pretty.push(format!("exp(D)(gamma0) = gamma0·x: {ok}"));
            }
            Ok((Report { json, pretty }, *format))
        }
    }
}

fn width_from_env() -> Option<usize> {
    std::env::var(WIDTH_VAR).ok().and_then(|v| v.parse().ok())
}

pub fn error_json(e: &Error) -> String {
    let (category, message) = match e {
        Error::Config(m)
        | Error::Domain(m)
        | Error::Parse(m)
        | Error::Unsupported(m)
        | Error::Convergence(m)
        | Error::Composition(m)
        | Error::Hypothesis(m) => (e.category(), m),
    };
    json!({"error": {"category": category, "message": message, "exit_code": e.exit_code()}}).to_string()
}

/// Runs the front end on an argument vector; returns `(exit code, stdout, stderr)`.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (0, e.to_string(), String::new()),
                _ => (
                    2,
                    String::new(),
                    error_json(&Error::Parse(e.to_string().trim().to_string())),
                ),
            };
        }
    };
    match execute(&cli.command) {
        Ok((report, format)) => (0, report.render(format, width_from_env()), String::new()),
        Err(e) => (e.exit_code(), String::new(), error_json(&e)),
    }
}
