//! The `finlie` command line.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use finlie_core::abelian::Character;
use finlie_core::decomp::{iwahori_decompose, BruhatFrame, Rank1Constants};
use finlie_core::group::{build_group, Group, Preset};
use finlie_core::oracle::{enumerate_group, Scope};
use finlie_core::ring::{make_ring, RingKind};
use finlie_core::torus::{make_torus, FixedGroup, RegularityTable, Torus};
use finlie_core::variety::{inner_product_rhs, TorusCharacter, VarietyFrame};
use finlie_core::{Budget, Error};
use serde::Serialize;
use serde_json::{json, Value};

use crate::driver;
use crate::pointset::{write_pointset, Point, PointSetHeader};
use crate::records::{elem, factor, parse_elem, parse_qz, CharacterRecord, GroupRecord, ReportRecord};

pub const BUDGET_ENV: &str = "FINLIE_BUDGET";

#[derive(Debug, Parser, Serialize)]
#[command(name = "finlie", version, about = "Reductive groups over finite local rings")]
pub struct Cli {
    #[command(flatten)]
    pub group: GroupArgs,
    /// Cap on the size of any single enumeration.
    #[arg(long, global = true, env = BUDGET_ENV, default_value_t = Budget::DEFAULT.0)]
    pub budget: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct GroupArgs {
    #[arg(long, global = true, default_value = "sl2", value_parser = parse_preset)]
    #[serde(serialize_with = "preset_name")]
    pub preset: Preset,
    #[arg(long, global = true, default_value_t = 2)]
    pub p: u32,
    #[arg(long, global = true, default_value_t = 2)]
    pub r: u32,
    #[arg(long, global = true, default_value_t = 1)]
    pub n: u32,
    #[arg(long, global = true, default_value = "witt", value_parser = parse_kind)]
    #[serde(serialize_with = "kind_name")]
    pub kind: RingKind,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Order of G(R), by formula or by enumeration.
    Order {
        #[arg(long)]
        enumerate: bool,
    },
    /// Iwahori or Bruhat decomposition of one element.
    Decompose {
        #[arg(long, value_enum)]
        mode: DecompMode,
        #[arg(long)]
        element: String,
        /// Weyl element v' fixing U' = n_v' U n_v'^-1.
        #[arg(long, default_value = "id")]
        v_prime: String,
    },
    /// Commutator of two elements, or of two root elements in closed form.
    Commutator {
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        elements: Option<Vec<String>>,
        /// Root labels such as `e1-e2`.
        #[arg(long, requires_all = ["beta", "x", "y"], allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        /// Levels of x and y.
        #[arg(long, default_value_t = 0)]
        b: u32,
        #[arg(long, default_value_t = 0)]
        c: u32,
    },
    /// Maximal tori T_w with their fixed-point groups.
    Tori {
        #[arg(long)]
        twist: Option<String>,
    },
    /// Characters of T_w^F.
    Chars {
        #[arg(long, default_value = "id")]
        twist: String,
        /// Only regular characters, with the minimal-m certificate.
        #[arg(long)]
        regular: bool,
        #[arg(long, default_value_t = 6)]
        n_max: u32,
    },
    /// Right-hand side of the inner-product formula.
    InnerProduct {
        /// `reg[:k]`, `triv`, an index, or generator images such as `1/2,0`.
        #[arg(long)]
        theta: String,
        #[arg(long)]
        theta_prime: String,
        #[arg(long, default_value = "id")]
        w_twist: String,
        #[arg(long, default_value = "id")]
        w_twist_prime: String,
        /// Skip the regularity precondition.
        #[arg(long = "override")]
        override_regularity: bool,
        #[arg(long, default_value_t = 6)]
        n_max: u32,
    },
    /// Points of Σ over R_n, split by Bruhat cell.
    Sigma {
        #[arg(long, default_value = "id")]
        w_twist: String,
        #[arg(long, default_value = "id")]
        w_twist_prime: String,
        #[arg(long, default_value = "id")]
        v_prime: String,
        #[arg(long, default_value_t = 1)]
        level: u32,
        /// PointSet file for the points.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run oracle suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1)]
        level: u32,
        #[arg(long, default_value_t = 6)]
        n_max: u32,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecompMode {
    Iwahori,
    Bruhat,
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<RingKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn preset_name<S: serde::Serializer>(p: &Preset, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(p.name())
}

fn kind_name<S: serde::Serializer>(k: &RingKind, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(k.name())
}

/// A failed command with its exit status.
#[derive(Debug)]
struct Failure {
    status: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let status = if matches!(e, Error::BudgetExceeded { .. }) { 3 } else { 2 };
        Failure { status, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure { status: 2, message: e.to_string() }
    }
}

type Out<T> = Result<T, Failure>;

/// Records for stdout and a summary for stderr.
struct Emitter<'a> {
    out: &'a mut dyn Write,
    summary: Vec<String>,
    timing: serde_json::Map<String, Value>,
}

impl Emitter<'_> {
    fn record(&mut self, v: Value) -> Out<()> {
        writeln!(self.out, "{v}")?;
        Ok(())
    }
}

/// Parse `args` and run; returns the process status.
pub fn run(args: impl IntoIterator<Item = OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let t0 = Instant::now();
    let mut em = Emitter { out, summary: Vec::new(), timing: serde_json::Map::new() };
    let status = match em.record(json!({ "config": &cli })).and_then(|_| dispatch(&cli, &mut em)) {
        Ok(s) => s,
        Err(f) => {
            let note = if f.status == 3 { "partial result: enumeration stopped at the budget" } else { "no result" };
            let _ = em.record(json!({ "error": f.message, "status": f.status, "note": note }));
            em.summary.push(format!("error: {}", f.message));
            f.status
        }
    };
    em.timing.insert("wall_ms".into(), json!(t0.elapsed().as_millis() as u64));
    let _ = writeln!(em.out, "{}", json!({ "timing": em.timing }));
    for line in &em.summary {
        let _ = writeln!(err, "{line}");
    }
    status
}

fn dispatch(cli: &Cli, em: &mut Emitter) -> Out<i32> {
    let budget = Budget(cli.budget);
    let ga = &cli.group;
    let g = build_group(ga.preset, make_ring(ga.p, ga.r, ga.n, ga.kind)?, 0)?;
    let scope = format!("{} {}({},{},{})", ga.preset.name(), ga.kind.name(), ga.p, ga.r, ga.n);
    match &cli.command {
        Command::Order { enumerate } => {
            let formula = g.order_formula();
            em.record(json!({ "order": formula, "mode": "formula", "scope": scope }))?;
            em.summary.push(format!("|G| = {formula}"));
            if *enumerate {
                let count = enumerate_group(&g, budget)?.len();
                em.record(json!({ "order": count, "mode": "exhaustive", "scope": scope }))?;
            }
            Ok(0)
        }
        Command::Decompose { mode, element, v_prime } => {
            let x = parse_elem(&g, element)?;
            let factors = match mode {
                DecompMode::Iwahori => {
                    let rec = iwahori_decompose(&g, &x)?;
                    em.record(json!({ "mode": "iwahori", "scope": scope }))?;
                    vec![factor(&g, "U-", &rec.u_minus), factor(&g, "T", &rec.t), factor(&g, "U", &rec.u)]
                }
                DecompMode::Bruhat => {
                    let frame = BruhatFrame::new(&g, weyl(&g, v_prime)?);
                    let rec = frame.decompose(&g, &x)?;
                    let w = word(&g, rec.w);
                    em.record(json!({ "mode": "bruhat", "w": w, "scope": scope }))?;
                    em.summary.push(format!("cell w = {w}"));
                    vec![
                        factor(&g, "U", &rec.u),
                        factor(&g, "n_w", &rec.lift),
                        factor(&g, "T'", &rec.t_prime),
                        factor(&g, "K", &rec.k),
                        factor(&g, "U'", &rec.u_prime),
                    ]
                }
            };
            em.record(json!({ "factors": factors }))?;
            Ok(0)
        }
        Command::Commutator { elements, alpha, beta, x, y, b, c } => {
            if let Some(els) = elements {
                let (a, bb) = (parse_elem(&g, &els[0])?, parse_elem(&g, &els[1])?);
                let k = g.commutator(&a, &bb);
                em.record(json!({ "commutator": elem(&g, &k), "level": g.level(&k), "scope": scope }))?;
                return Ok(0);
            }
            let (Some(alpha), Some(beta), Some(x), Some(y)) = (alpha, beta, x, y) else {
                return Err(Failure { status: 2, message: "give --elements A B or --alpha/--beta/--x/--y".into() });
            };
            let dat = g.datum();
            let root = |s: &str| dat.find_label(s).ok_or_else(|| Error::InvalidArgument(format!("unknown root {s:?}")));
            let (ra, rb) = (root(alpha)?, root(beta)?);
            let (vx, vy) = (ring_elem(&g, x)?, ring_elem(&g, y)?);
            if rb == dat.neg(ra) {
                let consts = Rank1Constants::solve(&g)?;
                let (tau, u) = finlie_core::decomp::rank1_commutator(&g, &consts, ra, vx, *b, vy, *c)?;
                em.record(json!({ "form": "rank-one", "factors": [factor(&g, "T", &tau), factor(&g, "U_alpha", &u)], "scope": scope }))?;
            } else {
                let terms = finlie_core::decomp::chevalley_commutator(&g, ra, vx, *b, rb, vy, *c)?;
                let list: Vec<Value> = terms
                    .iter()
                    .map(|&(r, v)| json!({ "root": dat.label(r), "coefficient": g.ring().coords(v) }))
                    .collect();
                em.record(json!({ "form": "chevalley", "terms": list, "scope": scope }))?;
            }
            Ok(0)
        }
        Command::Tori { twist } => {
            let ws: Vec<usize> = match twist {
                Some(t) => vec![weyl(&g, t)?],
                None => (0..g.datum().weyl().len()).collect(),
            };
            for w in ws {
                let t = make_torus(&g, w)?;
                let tf = t.fixed_group(1, budget)?;
                em.record(json!({
                    "twist": word(&g, w),
                    "lift": elem(&g, t.lift()),
                    "fixed_order": tf.structure.order(),
                    "invariant_factors": tf.structure.factors(),
                    "minimal_m": t.minimal_m(),
                    "mode": "exhaustive",
                    "scope": scope,
                }))?;
            }
            Ok(0)
        }
        Command::Chars { twist, regular, n_max } => {
            let t = make_torus(&g, weyl(&g, twist)?)?;
            let tf = t.fixed_group(1, budget)?;
            let table = RegularityTable::new(&t, &tf, *n_max, budget)?;
            let mut shown = 0;
            for (i, ch) in tf.characters(budget)?.iter().enumerate() {
                let reg = table.is_regular(&tf, ch)?;
                if *regular && !reg.regular {
                    continue;
                }
                shown += 1;
                em.record(json!({
                    "index": i,
                    "character": CharacterRecord::of(ch),
                    "regular": reg.regular,
                    "certificate_m": reg.m,
                    "mode": "exhaustive",
                    "scope": scope,
                }))?;
            }
            em.summary.push(format!("{shown} characters listed"));
            Ok(0)
        }
        Command::InnerProduct { theta, theta_prime, w_twist, w_twist_prime, override_regularity, n_max } => {
            let side = Side::new(&g, w_twist, *n_max, budget)?;
            let other = Side::new(&g, w_twist_prime, *n_max, budget)?;
            let th = side.select(theta, budget)?;
            let thp = other.select(theta_prime, budget)?;
            let a = TorusCharacter { torus: &side.torus, fixed: &side.fixed, theta: &th, regularity: &side.table };
            let b = TorusCharacter { torus: &other.torus, fixed: &other.fixed, theta: &thp, regularity: &other.table };
            let rep = inner_product_rhs(&a, &b, *override_regularity)?;
            let witnesses: Vec<Value> =
                rep.witnesses.iter().map(|(w, lift)| json!({ "w": word(&g, *w), "lift": elem(&g, lift) })).collect();
            em.record(json!({ "count": rep.count, "witnesses": witnesses, "mode": "exhaustive", "scope": scope }))?;
            em.summary.push(format!("count {}", rep.count));
            Ok(0)
        }
        Command::Sigma { w_twist, w_twist_prime, v_prime, level, out } => {
            let t = make_torus(&g, weyl(&g, w_twist)?)?;
            let tp = make_torus(&g, weyl(&g, w_twist_prime)?)?;
            let vf = VarietyFrame::new(&t, &tp, weyl(&g, v_prime)?, *level, budget)?;
            let sigma = vf.sigma_points(budget)?;
            let mut cells = Vec::new();
            for w in 0..g.datum().weyl().len() {
                let n = vf.sigma_w_points(&sigma, w).len();
                cells.push(json!({ "w": word(&g, w), "count": n }));
            }
            em.record(json!({ "level": level, "sigma": sigma.len(), "cells": cells, "mode": "exhaustive", "scope": scope }))?;
            if let Some(path) = out {
                let h = vf.group();
                let points: Vec<Point> = sigma
                    .iter()
                    .map(|p| vec![("x".into(), elem(h, &p.x)), ("x'".into(), elem(h, &p.x_prime)), ("y".into(), elem(h, &p.y))])
                    .collect();
                let header = PointSetHeader {
                    group: GroupRecord::of(h),
                    twists: (g.datum().weyl()[t.twist()].word.clone(), g.datum().weyl()[tp.twist()].word.clone()),
                    level: *level,
                    predicate: "(x, x', y) in F(U) x F(U') x G(R_n) with x F(y) = y x'".into(),
                    count: points.len(),
                };
                let mut f = BufWriter::new(File::create(path)?);
                write_pointset(&mut f, &header, &points)?;
                f.flush()?;
            }
            em.summary.push(format!("|Σ| = {}", sigma.len()));
            Ok(0)
        }
        Command::Verify { suite, level, n_max, samples, seed } => {
            let mut s = Scope::new(ga.preset, ga.p, ga.r, ga.n, ga.kind);
            s.level = *level;
            s.n_max = *n_max;
            s.samples = *samples;
            s.budget = budget;
            if let Some(seed) = seed {
                s.seed = *seed;
            }
            let reports = driver::run_suite(suite, &s)?;
            let mut times = serde_json::Map::new();
            for rep in &reports {
                em.record(serde_json::to_value(ReportRecord::of(rep)).map_err(|e| Failure { status: 2, message: e.to_string() })?)?;
                times.insert(rep.property.clone(), json!(rep.wall_micros / 1000));
                em.summary.push(format!("{:<18} {:?}", rep.property, rep.outcome));
            }
            em.timing.insert("check_ms".into(), Value::Object(times));
            Ok(driver::status(&reports))
        }
    }
}

/// A torus with its fixed points and regularity table.
struct Side {
    torus: Torus,
    fixed: FixedGroup,
    table: RegularityTable,
}

impl Side {
    fn new(g: &Group, twist: &str, n_max: u32, budget: Budget) -> Out<Side> {
        let torus = make_torus(g, weyl(g, twist)?)?;
        let fixed = torus.fixed_group(1, budget)?;
        let table = RegularityTable::new(&torus, &fixed, n_max, budget)?;
        Ok(Side { torus, fixed, table })
    }

    /// `reg[:k]`, `triv`, an index, or a comma-separated list of images.
    fn select(&self, sel: &str, budget: Budget) -> Out<Character> {
        let st = &self.fixed.structure;
        if sel == "triv" {
            return Ok(st.trivial_character());
        }
        if let Some(rest) = sel.strip_prefix("reg") {
            let k: usize = match rest.strip_prefix(':') {
                Some(k) => k.parse().map_err(|_| Error::InvalidArgument(format!("bad selector {sel:?}")))?,
                None if rest.is_empty() => 0,
                None => return Err(Error::InvalidArgument(format!("bad selector {sel:?}")).into()),
            };
            let mut regs = Vec::new();
            for ch in st.characters(budget)? {
                if self.table.is_regular(&self.fixed, &ch)?.regular {
                    regs.push(ch);
                }
            }
            let count = regs.len();
            return regs
                .into_iter()
                .nth(k)
                .ok_or_else(|| Error::InvalidArgument(format!("only {count} regular characters")).into());
        }
        if let Ok(i) = sel.parse::<usize>() {
            if i >= st.order() {
                return Err(Error::InvalidArgument(format!("character index {i} ≥ {}", st.order())).into());
            }
            return Ok(st.character(i));
        }
        let images = sel.split(',').map(parse_qz).collect::<Result<Vec<_>, _>>()?;
        Ok(st.character_from_images(&images)?)
    }
}

/// A Weyl element from `id`, `w0`, `s` (rank one), a word `s1s2…`, or `#k`.
pub fn weyl(g: &Group, s: &str) -> Result<usize, Error> {
    let dat = g.datum();
    let bad = || Error::InvalidArgument(format!("bad Weyl element {s:?}"));
    match s {
        "id" | "1" | "e" => return Ok(dat.weyl_identity()),
        "w0" => return Ok(dat.weyl_longest()),
        "s" if dat.simple().len() == 1 => return dat.weyl_from_word(&[0]),
        _ => {}
    }
    if let Some(k) = s.strip_prefix('#') {
        let k: usize = k.parse().map_err(|_| bad())?;
        return if k < dat.weyl().len() { Ok(k) } else { Err(bad()) };
    }
    let mut w = Vec::new();
    for part in s.split('s').skip(1) {
        let i: usize = part.parse().map_err(|_| bad())?;
        if i == 0 || i > dat.simple().len() {
            return Err(bad());
        }
        w.push(i - 1);
    }
    if w.is_empty() || !s.starts_with('s') {
        return Err(bad());
    }
    dat.weyl_from_word(&w)
}

/// `id` or `s1s2…` (1-based simple reflections).
pub fn word(g: &Group, w: usize) -> String {
    let wd = &g.datum().weyl()[w].word;
    if wd.is_empty() {
        "id".into()
    } else {
        wd.iter().map(|i| format!("s{}", i + 1)).collect()
    }
}

/// A ring element: an integer or a JSON coefficient list.
fn ring_elem(g: &Group, s: &str) -> Result<u32, Error> {
    let r = g.ring();
    if let Ok(v) = s.trim().parse::<i64>() {
        return Ok(r.from_int(v));
    }
    let cs: Vec<u32> = serde_json::from_str(s).map_err(|e| Error::InvalidArgument(format!("ring element {s:?}: {e}")))?;
    r.from_coords(&cs)
}
