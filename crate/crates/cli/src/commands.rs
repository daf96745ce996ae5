//! The analyses behind each command, generic over the coefficient field.

use std::fmt::Write as _;

use anyhow::{bail, Result};
use pairs_core::betti::BettiTable;
use pairs_core::derivations::{
    der_dim_direct, der_module, free_hilbert_prediction, ilog_generators, pdim_bounds, recipe_check, DerivationModule,
};
use pairs_core::field::Field;
use pairs_core::graded::GradedEngine;
use pairs_core::groebner::resolution::pairs_betti;
use pairs_core::matroid::{labels_of, Realization, Set};
use pairs_core::pairs::{LoopPolicy, PairsIdeal};
use pairs_core::poly::binomial;
use pairs_core::primes::{
    associated_primes, codim_check, minimal_primes, slice_associated_primes, uniform_checks, verify_min_primes, LinearPrime,
    PrimeTag, PrimesError, Side,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::input::InputSpec;
use crate::report::{Evidence, Report, Verdict};

/// A realization with its pairs ideal and the scan parameters.
pub struct Ctx<K: Field> {
    pub name: String,
    pub spec: InputSpec,
    pub pi: PairsIdeal<K>,
    pub window: usize,
    pub bound: usize,
    pub warnings: Vec<String>,
}

impl<K: Field> Ctx<K> {
    pub fn new(spec: InputSpec, k: &K, window: Option<usize>, bound: Option<usize>, drop_loops: bool, allow_small_prime: bool) -> Result<Self> {
        let mut warnings = Vec::new();
        if let Some(w) = spec.check_prime(allow_small_prime)? {
            warnings.push(w);
        }
        let re = spec.realization(k)?;
        let policy = if drop_loops || spec.options.drop_loops { LoopPolicy::Drop } else { LoopPolicy::Reject };
        let pi = PairsIdeal::build(&re, policy)?;
        if !pi.dropped_loops().is_empty() {
            warnings.push(format!("deleted loops {:?}; labels below are the original column numbers", pi.dropped_loops()));
        }
        if pi.char_warning() {
            warnings.push("char-warning: positive characteristic; Euler-derivation statements are computed but not canonically split".into());
        }
        let n = pi.n();
        Ok(Ctx {
            name: spec.name.clone(),
            window: window.or(spec.options.window).unwrap_or(n + 2),
            bound: bound.or(spec.options.bound).unwrap_or(4),
            spec,
            pi,
            warnings,
        })
    }

    fn k(&self) -> &K {
        self.pi.field()
    }

    fn report(&self, command: &str) -> Report {
        let mut r = Report::new(command, &self.name);
        r.warnings = self.warnings.clone();
        r
    }

    /// Original labels of a set of (post loop deletion) positions.
    fn labels(&self, s: Set) -> Vec<usize> {
        let map = self.pi.realization().labels();
        labels_of(s).iter().map(|&p| map[p - 1]).collect()
    }

    fn fmt(&self, s: Set) -> String {
        fmt_labels(&self.labels(s), self.pi.realization().labels().len())
    }

    fn prime_json(&self, p: &LinearPrime) -> Value {
        json!({
            "I": self.labels(p.i),
            "J": self.labels(p.j),
            "codim": p.codim,
            "tag": p.tag,
            "maximal_ideal": p.maximal_ideal,
            "certificate": p.certificate,
        })
    }

    fn prime_line(&self, p: &LinearPrime) -> String {
        let tag = match p.tag {
            PrimeTag::Minimal => "minimal",
            PrimeTag::Embedded => "embedded",
            PrimeTag::RejectedCandidate => "rejected",
        };
        let mut s = format!("  p({}, {})  codim {}  {}", self.fmt(p.i), self.fmt(p.j), p.codim, tag);
        if p.maximal_ideal {
            s.push_str("  [maximal ideal]");
        }
        if let Some(c) = &p.certificate {
            let _ = write!(s, "  witness h = {}", shorten(c, 80));
        }
        s
    }
}

/// `1246`-style when every label is a single digit, `[n]` for the full set.
fn fmt_labels(l: &[usize], n: usize) -> String {
    if l.is_empty() {
        return "∅".into();
    }
    if l.len() == n && n > 1 {
        return format!("[{n}]");
    }
    if l.iter().all(|&x| x < 10) {
        l.iter().map(|x| x.to_string()).collect()
    } else {
        format!("{{{}}}", l.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
    }
}

fn shorten(s: &str, max: usize) -> String {
    if s.chars().count() <= max {
        s.to_string()
    } else {
        format!("{}...", s.chars().take(max).collect::<String>())
    }
}

fn first_mismatch<I: IntoIterator<Item = (String, usize, usize)>>(it: I) -> Option<String> {
    it.into_iter().find(|(_, a, b)| a != b).map(|(where_, a, b)| format!("{where_}: {a} vs {b}"))
}

// ----- summary and flats ----------------------------------------------------

fn summary<K: Field>(ctx: &Ctx<K>) -> (Value, String) {
    let pi = &ctx.pi;
    let k = ctx.k();
    let re = pi.realization();
    let matrix: Vec<Vec<String>> = re.matrix().rows_vec().iter().map(|r| r.iter().map(|x| k.format(x)).collect()).collect();
    let gens = pi.format_generators();
    let mut text = format!(
        "field {}, n = {}, r = {}, window {}, bound {}\n",
        k.descriptor(),
        pi.n(),
        pi.r(),
        ctx.window,
        ctx.bound
    );
    for (i, g) in gens.iter().enumerate() {
        let _ = writeln!(text, "  f{0}g{0} = {1}", re.labels()[i], g);
    }
    let v = json!({
        "name": ctx.name,
        "field": k.descriptor().to_string(),
        "n": pi.n(),
        "r": pi.r(),
        "labels": re.labels(),
        "matrix": matrix,
        "generators": gens,
        "window": ctx.window,
        "bound": ctx.bound,
    });
    (v, text)
}

pub fn flats<K: Field>(ctx: &Ctx<K>) -> Report {
    let mut rep = ctx.report("flats");
    let (v, t) = summary(ctx);
    rep.section("realization", v, t);
    let m = ctx.pi.matroid();
    let cyc: Vec<Value> = m.cyclic_flats().iter().map(|&f| json!({"flat": ctx.labels(f), "rank": m.rank(f)})).collect();
    let mins = m.minimal_nonempty_cyclic_flats();
    let comps = ctx.pi.components();
    let mut text = format!(
        "rank {}, {} flats, {} biflats, kappa = {}, uniform: {}\nloops {:?}, coloops {:?}\ncomponents: {}\ncyclic flats:\n",
        m.rank_total(),
        m.flats().len(),
        m.biflats().len(),
        m.kappa(),
        m.is_uniform(),
        ctx.labels(m.loops()),
        ctx.labels(m.coloops()),
        comps.iter().map(|&c| ctx.fmt(c)).collect::<Vec<_>>().join(" "),
    );
    for &f in m.cyclic_flats() {
        let _ = writeln!(text, "  {:<12} rank {}", ctx.fmt(f), m.rank(f));
    }
    let _ = writeln!(text, "minimal nonempty cyclic flats: {}", mins.iter().map(|&f| ctx.fmt(f)).collect::<Vec<_>>().join(" "));
    let mut by_rank = vec![0usize; m.rank_total() + 1];
    for &f in m.flats() {
        by_rank[m.rank(f)] += 1;
    }
    let _ = writeln!(text, "flats per rank: {by_rank:?}");
    rep.section(
        "matroid",
        json!({
            "rank": m.rank_total(),
            "flats_per_rank": by_rank,
            "biflats": m.biflats().len(),
            "kappa": m.kappa(),
            "uniform": m.is_uniform(),
            "components": comps.iter().map(|&c| ctx.labels(c)).collect::<Vec<_>>(),
            "cyclic_flats": cyc,
            "minimal_nonempty_cyclic_flats": mins.iter().map(|&f| ctx.labels(f)).collect::<Vec<_>>(),
        }),
        text,
    );
    rep
}

// ----- Betti tables ---------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum BettiMethod {
    Koszul,
    Resolution,
    Both,
}

pub struct BettiResult {
    pub koszul: Option<(BettiTable, bool)>,
    pub resolution: Option<(BettiTable, usize)>,
}

pub fn betti_tables<K: Field>(ctx: &Ctx<K>, method: BettiMethod) -> BettiResult {
    let koszul = (method != BettiMethod::Resolution).then(|| {
        let e = GradedEngine::new(&ctx.pi);
        e.koszul_betti_auto(ctx.window, ctx.window + ctx.pi.n())
    });
    let resolution = (method != BettiMethod::Koszul).then(|| pairs_betti(&ctx.pi));
    BettiResult { koszul, resolution }
}

pub fn betti<K: Field>(ctx: &Ctx<K>, method: BettiMethod, quotient: bool) -> Report {
    let mut rep = ctx.report("betti");
    let res = betti_tables(ctx, method);
    add_betti_sections(ctx, &mut rep, &res, quotient);
    rep
}

fn add_betti_sections<K: Field>(ctx: &Ctx<K>, rep: &mut Report, res: &BettiResult, quotient: bool) {
    let shown = |t: &BettiTable| if quotient { t.clone() } else { t.to_ideal() };
    let what = if quotient { "S/a" } else { "a" };
    if let Some((t, closed)) = &res.koszul {
        let w = t.window.unwrap_or(ctx.window);
        let text = format!(
            "Koszul homology, Tor_p({what})_(i,j) for i+j <= {w}{}; rows j, columns i, cells sum_p dim t^p\n{}",
            if *closed { "" } else { " (window still growing at the cap)" },
            shown(t).format_grid()
        );
        rep.section("betti_koszul", json!({"table": shown(t).to_json(), "edge_clear": closed}), text);
        if res.resolution.is_none() {
            let pdim = t.max_p().unwrap_or(0);
            rep.section(
                "pdim",
                json!({"pdim_quotient": pdim, "evidence": "observed-in-window", "window": w}),
                format!("pdim S/a >= {pdim} (observed-in-window)"),
            );
        }
    }
    if let Some((t, pdim)) = &res.resolution {
        let text = format!("Schreyer resolution, Tor_p({what})_(i,j), all bidegrees\n{}", shown(t).format_grid());
        rep.section("betti_resolution", json!({"table": shown(t).to_json()}), text);
        rep.section(
            "pdim",
            json!({"pdim_quotient": pdim, "pdim_ideal": pdim.saturating_sub(1), "evidence": "certificate: minimal Betti numbers of a free resolution"}),
            format!("pdim_S(S/a) = {pdim}, pdim_S(a) = {} (certified by the resolution)", pdim.saturating_sub(1)),
        );
    }
    if let (Some((k, _)), Some((r, _))) = (&res.koszul, &res.resolution) {
        let w = k.window.unwrap_or(ctx.window);
        let r = r.restrict(w);
        let failure = first_mismatch(
            k.entries()
                .map(|(key, _)| key)
                .chain(r.entries().map(|(key, _)| key))
                .map(|(p, i, j)| (format!("Tor_{p}(S/a)_({i},{j})"), k.get(p, i, j).unwrap_or(0), r.get(p, i, j).unwrap_or(0))),
        );
        rep.verdict(Verdict::new("Koszul and resolution Betti numbers agree", failure, Evidence::ObservedInWindow { window: w }));
    }
}

// ----- primes ---------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum SliceArg {
    /// `(S/a)_(.,1)` over R
    X,
    /// `(S/a)_(1,.)` over the dual ring
    Y,
}

impl SliceArg {
    fn side(self) -> Side {
        match self {
            SliceArg::X => Side::XSlice,
            SliceArg::Y => Side::YSlice,
        }
    }
    fn label(self) -> &'static str {
        match self {
            SliceArg::X => "(.,1)",
            SliceArg::Y => "(1,.)",
        }
    }
}

fn prime_list<K: Field>(ctx: &Ctx<K>, ps: &[LinearPrime]) -> (Value, String) {
    let v: Vec<Value> = ps.iter().map(|p| ctx.prime_json(p)).collect();
    let t: String = ps.iter().map(|p| ctx.prime_line(p) + "\n").collect();
    (json!(v), t)
}

pub fn primes<K: Field>(ctx: &Ctx<K>, slice: Option<SliceArg>, rejected: bool) -> Result<Report> {
    let mut rep = ctx.report("primes");
    let min = minimal_primes(&ctx.pi);
    let (v, t) = prime_list(ctx, &min);
    rep.section("minimal_primes", v, format!("from the cyclic flats:\n{t}"));
    let ass = associated_primes(&ctx.pi, rejected)?;
    let (v, t) = prime_list(ctx, &ass);
    let embedded = ass.iter().filter(|p| p.tag == PrimeTag::Embedded).count();
    rep.section(
        "associated_primes",
        json!({"primes": v, "embedded": embedded, "origin_means": "the homogeneous maximal ideal"}),
        format!("biflat candidates decided by colon ideals ({embedded} embedded):\n{t}"),
    );
    let certified_min: Vec<(Set, Set)> = ass.iter().filter(|p| p.tag == PrimeTag::Minimal).map(|p| (p.i, p.j)).collect();
    let combinatorial: Vec<(Set, Set)> = min.iter().map(|p| (p.i, p.j)).collect();
    let failure = (certified_min != combinatorial).then(|| format!("certified minimal {certified_min:?} vs cyclic flats {combinatorial:?}"));
    rep.verdict(Verdict::new(
        "minimal primes from cyclic flats = minimal associated primes",
        failure,
        Evidence::cert("per-candidate associatedness witnesses"),
    ));
    if let Some(s) = slice {
        let sl = slice_associated_primes(&ctx.pi, s.side())?;
        let (v, t) = prime_list(ctx, &sl);
        let emb = sl.iter().filter(|p| p.tag == PrimeTag::Embedded).count();
        rep.section(
            "slice_primes",
            json!({"side": s.label(), "primes": v, "embedded": emb}),
            format!("associated primes of the slice {} ({emb} embedded):\n{t}", s.label()),
        );
    }
    Ok(rep)
}

// ----- derivations ----------------------------------------------------------

fn der_section<K: Field>(ctx: &Ctx<K>, d: &DerivationModule<K>) -> (Value, String) {
    let k = ctx.k();
    let names = ctx.pi.spec().names();
    let gens: Vec<Value> = d
        .generators
        .iter()
        .map(|g| {
            json!({
                "degree": g.degree,
                "theta": g.theta.iter().map(|p| p.format(k, names)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let betti: Vec<Value> = d.betti.iter().map(|(&(p, e), &v)| json!({"p": p, "degree": e, "dim": v})).collect();
    let mut text = format!(
        "free: {}  pdim_R der = {} (certified by a resolution)\nexponents (generator degrees): {:?}  (+1 = coexponents {:?})\n",
        d.free,
        d.pdim,
        d.exponents,
        d.coexponents()
    );
    if let Some(s) = d.saito {
        let _ = writeln!(text, "Saito determinant check: {}", if s { "passes" } else { "FAILS" });
    }
    let _ = writeln!(text, "Tor_p(der)_e: {}", d.betti.iter().map(|(&(p, e), v)| format!("({p},{e}):{v}")).collect::<Vec<_>>().join(" "));
    for g in &d.generators {
        let terms: Vec<String> = g
            .theta
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(i, p)| format!("({}) d/d{}", p.format(k, names), names[i]))
            .collect();
        let _ = writeln!(text, "  deg {}: {}", g.degree, shorten(&terms.join(" + "), 160));
    }
    (
        json!({
            "free": d.free,
            "pdim": d.pdim,
            "exponents": d.exponents,
            "coexponents": d.coexponents(),
            "exponent_convention": "generator degree with deg(d/dx) = -1; coexponent = degree + 1",
            "saito": d.saito,
            "tor": betti,
            "generators": gens,
        }),
        text,
    )
}

pub fn der<K: Field>(ctx: &Ctx<K>) -> Result<Report> {
    let mut rep = ctx.report("der");
    let d = der_module(&ctx.pi)?;
    let (v, t) = der_section(ctx, &d);
    rep.section("derivations", v, t);
    let b = pdim_bounds(&ctx.pi);
    let text = format!(
        "cyclic-flat bound on pdim_S(S/a): {} (terms {})\nbound on pdim_R der from minimal cyclic flats: {}\nZiegler flag: {}  freeness obstruction: {}\n",
        b.cyclic_flat_bound,
        b.cyclic_flat_terms.iter().map(|(f, v)| format!("{f}:{v}")).collect::<Vec<_>>().join(" "),
        b.kung_schenck_bound.map_or("none".into(), |v| v.to_string()),
        b.ziegler_flag,
        b.free_obstruction
    );
    rep.section("bounds", serde_json::to_value(&b)?, text);
    let ks = b.kung_schenck_bound.unwrap_or(0).max(0) as usize;
    rep.verdict(Verdict::new(
        format!("pdim_R der ({}) >= minimal-cyclic-flat bound ({ks})", d.pdim),
        (d.pdim < ks).then(|| format!("pdim {} < bound {ks}", d.pdim)),
        Evidence::cert("resolution of der"),
    ));
    if b.free_obstruction {
        rep.verdict(Verdict::new(
            "a minimal cyclic flat of rank >= 3 forces non-freeness",
            d.free.then(|| "module reported free".to_string()),
            Evidence::cert("resolution of der"),
        ));
    }
    let e = GradedEngine::new(&ctx.pi);
    let top = ctx.window.saturating_sub(1).max(1);
    let rows: Vec<(usize, usize, usize)> = (1..=top).map(|dd| (dd, e.derivation_slice_dim(dd), der_dim_direct(&ctx.pi, dd - 1))).collect();
    rep.verdict(Verdict::new(
        "dim K_(d,1) = dim der_(d-1) computed directly",
        first_mismatch(rows.iter().map(|&(dd, a, b)| (format!("d = {dd}"), a, b))),
        Evidence::ObservedInWindow { window: top + 1 },
    ));
    if d.free {
        let r = ctx.pi.r();
        rep.verdict(Verdict::new(
            "free: dim K_(d,1) = sum over exponents e of dim R_(d-1-e)",
            first_mismatch(rows.iter().map(|&(dd, a, _)| (format!("d = {dd}"), a, free_hilbert_prediction(r, &d.exponents, dd)))),
            Evidence::ObservedInWindow { window: top + 1 },
        ));
    }
    Ok(rep)
}

// ----- analyze --------------------------------------------------------------

pub fn analyze<K: Field>(ctx: &Ctx<K>) -> Result<Report> {
    let mut rep = flats(ctx);
    rep.command = "analyze".into();
    let res = betti_tables(ctx, BettiMethod::Both);
    add_betti_sections(ctx, &mut rep, &res, false);
    let p = primes(ctx, None, false)?;
    let d = der(ctx)?;
    merge(&mut rep, p);
    merge(&mut rep, d);
    Ok(rep)
}

fn merge(into: &mut Report, from: Report) {
    let verdicts = from.verdicts.clone();
    for (k, v, t) in from.sections_owned() {
        if k != "realization" {
            into.section(&k, v, t);
        }
    }
    for v in verdicts {
        into.verdict(v);
    }
}

// ----- verify ---------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Theorem {
    Slices,
    #[value(name = "a-deg1")]
    ADeg1,
    MinPrimes,
    TorOfDer,
    MinPrimes2,
    Unif,
    #[value(name = "coordsofX", alias = "coordsofx")]
    CoordsOfX,
    LinearType,
}

pub fn verify<K: Field>(ctx: &Ctx<K>, theorem: Theorem) -> Result<Report> {
    let mut rep = ctx.report("verify");
    rep.section("theorem", json!(format!("{theorem:?}")), String::new());
    match theorem {
        Theorem::Slices => verify_slices(ctx, &mut rep),
        Theorem::ADeg1 => verify_adeg1(ctx, &mut rep)?,
        Theorem::MinPrimes => verify_minp(ctx, &mut rep)?,
        Theorem::TorOfDer => verify_tor_of_der(ctx, &mut rep)?,
        Theorem::MinPrimes2 => verify_minp2(ctx, &mut rep)?,
        Theorem::Unif => verify_unif(ctx, &mut rep)?,
        Theorem::CoordsOfX => verify_coords(ctx, &mut rep)?,
        Theorem::LinearType => verify_linear_type(ctx, &mut rep)?,
    }
    Ok(rep)
}

fn verify_slices<K: Field>(ctx: &Ctx<K>, rep: &mut Report) {
    let pi = &ctx.pi;
    let e = GradedEngine::new(pi);
    let kappa = pi.kappa();
    let dim = e.derivation_slice_dim(1);
    rep.verdict(Verdict::new(
        format!("dim K_(1,1) = kappa = {kappa}"),
        (dim != kappa).then(|| format!("dim K_(1,1) = {dim}")),
        Evidence::cert("kernel of k^n -> S_(1,1)"),
    ));
    let bad = pi.euler_vectors().iter().position(|c| !pi.combination(c).is_zero());
    rep.verdict(Verdict::new(
        "each component C gives the relation sum_(i in C) f_i g_i = 0",
        bad.map(|c| format!("component {}", ctx.fmt(pi.components()[c]))),
        Evidence::cert("expansion of the Euler relations"),
    ));
    if pi.matroid().coloops() == 0 {
        let span = e.ideal_piece(1, 1).dim();
        rep.verdict(Verdict::new(
            "without coloops, a has n - kappa minimal generators",
            (span + kappa != pi.n()).then(|| format!("dim a_(1,1) = {span}")),
            Evidence::cert("rank of the generators"),
        ));
    }
    let swapped = pi.swap_roles();
    if let Ok(s) = swapped {
        let ds = GradedEngine::new(&s).derivation_slice_dim(1);
        rep.verdict(Verdict::new(
            "the dual realization has dim K_(1,1) = kappa as well",
            (ds != kappa).then(|| format!("dual dim {ds}")),
            Evidence::cert("kernel of k^n -> S_(1,1) for the dual"),
        ));
    }
}

fn verify_adeg1<K: Field>(ctx: &Ctx<K>, rep: &mut Report) -> Result<()> {
    let d = der_module(&ctx.pi)?;
    let il = ilog_generators(&ctx.pi, &d)?;
    let e = GradedEngine::new(&ctx.pi);
    let top = ctx.window.saturating_sub(2);
    let mut rows = Vec::new();
    let mut text = String::from("x-degree: dim (I_X)_(x;1), dim (I_log)_(x;1), dim K_(x+1,1), dim der_x\n");
    for x in 0..=top {
        let ix = e.ix_slice(x, 1)?;
        let lg = e.ilog_slice(x, 1, &il)?;
        let kd = e.derivation_slice_dim(x + 1);
        let dd = der_dim_direct(&ctx.pi, x);
        let _ = writeln!(text, "  {x}: {} {} {} {}", ix.dim(), lg.dim(), kd, dd);
        rows.push((x, ix.dim(), lg.dim(), kd, dd, ix.contains(ctx.k(), &lg)));
    }
    rep.section(
        "a_degree_one",
        json!(rows.iter().map(|r| json!({"x_degree": r.0, "ix": r.1, "ilog": r.2, "k_slice": r.3, "der": r.4})).collect::<Vec<_>>()),
        text,
    );
    let w = Evidence::ObservedInWindow { window: top + 2 };
    rep.verdict(Verdict::new(
        "(I_log)_(x;1) is contained in (I_X)_(x;1)",
        rows.iter().find(|r| !r.5).map(|r| format!("x-degree {}", r.0)),
        w.clone(),
    ));
    for (name, f) in [
        ("dim (I_X)_(x;1) = dim (I_log)_(x;1)", (|r: &(usize, usize, usize, usize, usize, bool)| (r.1, r.2)) as fn(&_) -> (usize, usize)),
        ("dim (I_X)_(x;1) = dim K_(x+1,1)", |r| (r.1, r.3)),
        ("dim K_(x+1,1) = dim der_x", |r| (r.3, r.4)),
    ] {
        rep.verdict(Verdict::new(name, first_mismatch(rows.iter().map(|r| (format!("x-degree {}", r.0), f(r).0, f(r).1))), w.clone()));
    }
    Ok(())
}

fn verify_minp<K: Field>(ctx: &Ctx<K>, rep: &mut Report) -> Result<()> {
    match verify_min_primes(&ctx.pi) {
        Ok(cert) => {
            let text = format!(
                "{} minimal primes; {} generator containments; {} intersection generators in the radical\n",
                cert.primes.len(),
                cert.containments.len(),
                cert.intersection.len()
            );
            rep.section("certificate", serde_json::to_value(&cert)?, text);
            let bad = cert.intersection.iter().find(|w| !w.in_radical).map(|w| w.element.clone());
            rep.verdict(Verdict::new(
                "V(a) is the union of the L_(F,F^c) over cyclic flats F",
                bad,
                Evidence::cert("generator containments and radical-membership witnesses"),
            ));
        }
        Err(PrimesError::Verification(msg)) => {
            rep.verdict(Verdict::new("V(a) is the union of the L_(F,F^c) over cyclic flats F", Some(msg), Evidence::cert("radical membership")));
        }
        Err(e) => return Err(e.into()),
    }
    let codims = codim_check(&ctx.pi);
    rep.verdict(Verdict::new(
        "codim p_(F,F^c) = 2 rank(F) - |F| + n - r",
        first_mismatch(codims.iter().map(|&(f, a, b)| (format!("F = {}", ctx.fmt(f)), a, b))),
        Evidence::cert("rank of the generating linear forms"),
    ));
    Ok(())
}

fn tor_of_der_rows<K: Field>(pi: &PairsIdeal<K>, top: usize) -> Result<(Vec<(String, usize, usize)>, Vec<Value>, usize)> {
    let d = der_module(pi)?;
    let e = GradedEngine::new(pi);
    let r = pi.r();
    let kappa = pi.kappa();
    let maxp = d.pdim + 1;
    let mut iso = Vec::new();
    let mut p0 = Vec::new();
    for i in 1..=top {
        let tor = e.koszul_tor(i, 1);
        for p in 1..=maxp {
            let lhs = tor.get(p + 2).copied().unwrap_or(0);
            iso.push((format!("p = {p}, bidegree ({i},1)"), lhs, d.tor_dim(p, i - 1)));
        }
        let lhs = tor.get(2).copied().unwrap_or(0) as i64;
        let gens = d.minimal_generators_in_degree(i - 1) as i64;
        let printed = gens - (binomial(i + r - 2, r - 1) * kappa) as i64;
        let corrected = gens - if i == 1 { kappa as i64 } else { 0 };
        p0.push(json!({"i": i, "tor1": lhs, "der_gens": gens, "printed_formula": printed, "printed_holds": lhs == printed, "corrected": corrected}));
    }
    Ok((iso, p0, maxp))
}

fn verify_tor_of_der<K: Field>(ctx: &Ctx<K>, rep: &mut Report) -> Result<()> {
    let top = ctx.window.saturating_sub(1).max(1);
    let (iso, p0, _) = tor_of_der_rows(&ctx.pi, top)?;
    let w = Evidence::ObservedInWindow { window: top + 1 };
    rep.verdict(Verdict::new(
        "dim Tor_(p+1)(a)_(i,1) = dim Tor_p(der)_(i-1) for p >= 1",
        first_mismatch(iso.clone()),
        w.clone(),
    ));
    let corrected = p0.iter().find(|v| v["tor1"] != v["corrected"]).map(|v| format!("i = {}", v["i"]));
    rep.verdict(Verdict::new("dim Tor_1(a)_(i,1) = dim (der (x) k)_(i-1) - kappa [i = 1]", corrected, w.clone()));
    let mut text = String::from("i: Tor_1(a)_(i,1)  (der (x) k)_(i-1)  binomial formula  corrected\n");
    for v in &p0 {
        let _ = writeln!(text, "  {}: {} {} {} {}", v["i"], v["tor1"], v["der_gens"], v["printed_formula"], v["corrected"]);
    }
    text.push_str("the binomial form dim(der (x) k)_(i-1) - C(i+r-2, r-1) kappa is listed for comparison only; it is not asserted\n");
    rep.section("p_zero", json!(p0), text);
    if ctx.pi.matroid().coloops() == 0 {
        let dual = ctx.pi.swap_roles()?;
        let (iso, _, _) = tor_of_der_rows(&dual, top)?;
        rep.verdict(Verdict::new(
            "the same identity on the (1,j) side, via the dual realization",
            first_mismatch(iso),
            w,
        ));
    }
    Ok(())
}

fn verify_minp2<K: Field>(ctx: &Ctx<K>, rep: &mut Report) -> Result<()> {
    let m = ctx.pi.matroid();
    let ass = associated_primes(&ctx.pi, false)?;
    for s in [SliceArg::X, SliceArg::Y] {
        let sl = slice_associated_primes(&ctx.pi, s.side())?;
        let (v, t) = prime_list(ctx, &sl);
        rep.section(&format!("slice {}", s.label()), v, t);
        let (mm, pick): (_, fn(&LinearPrime) -> Set) = match s {
            SliceArg::X => (m.clone(), |p| p.i),
            SliceArg::Y => (m.dual(), |p| p.j),
        };
        let mut expected: Vec<Vec<usize>> = mm.minimal_nonempty_cyclic_flats().iter().map(|&f| ctx.labels(f)).collect();
        let mut got: Vec<Vec<usize>> = sl.iter().filter(|p| p.tag == PrimeTag::Minimal).map(|p| ctx.labels(pick(p))).collect();
        expected.sort();
        got.sort();
        rep.verdict(Verdict::new(
            format!("minimal primes of the slice {} are P_F for minimal nonempty cyclic flats F", s.label()),
            (expected != got).then(|| format!("expected {expected:?}, found {got:?}")),
            Evidence::cert("associatedness witnesses over all flats"),
        ));
        let parts: Vec<Set> = ass.iter().map(pick).collect();
        let stray = sl.iter().find(|p| !parts.contains(&pick(p)));
        rep.verdict(Verdict::new(
            format!("associated primes of the slice {} restrict associated primes of S/a", s.label()),
            stray.map(|p| format!("P_{} has no associated prime of S/a above it", ctx.fmt(pick(p)))),
            Evidence::cert("associatedness witnesses"),
        ));
    }
    Ok(())
}

fn verify_unif<K: Field>(ctx: &Ctx<K>, rep: &mut Report) -> Result<()> {
    let u = uniform_checks(&ctx.pi);
    let text = format!(
        "uniform: {}; {} tuple products checked, {} failing; {} basis products checked, {} failing\n",
        u.uniform,
        u.tuples_checked,
        u.tuple_failures.len(),
        u.basis_products_checked,
        u.basis_failures.len()
    );
    rep.section("products", serde_json::to_value(&u)?, text);
    let cert = Evidence::cert("degreewise membership in bidegree (1, r)");
    rep.verdict(Verdict::new(
        "(prod_(i in B) g_i) f_a is in a for every basis B and every a",
        u.basis_failures.first().map(|(b, a)| format!("B = {b:?}, a = {a}")),
        cert.clone(),
    ));
    if !u.uniform {
        rep.section("note", json!("not uniform: the tuple lemma does not apply"), "matroid is not uniform; tuple failures are informative only\n".into());
        return Ok(());
    }
    rep.verdict(Verdict::new(
        "g_(i1)...g_(ir) f_a is in a for every tuple",
        u.tuple_failures.first().map(|(t, a)| format!("tuple {t:?}, a = {a}")),
        cert,
    ));
    let n = ctx.pi.n();
    let full = ctx.pi.matroid().ground();
    let ass = associated_primes(&ctx.pi, false)?;
    let got: Vec<(Set, Set)> = ass.iter().map(|p| (p.i, p.j)).collect();
    let allowed: Vec<(Set, Set)> = if ctx.pi.r() == n {
        vec![(full, 0)]
    } else if ctx.pi.r() == 0 {
        vec![(0, full)]
    } else {
        vec![(full, 0), (0, full), (full, full)]
    };
    let minimal_present = allowed.iter().filter(|&&p| p != (full, full)).all(|p| got.contains(p));
    let stray = got.iter().any(|p| !allowed.contains(p)) || !minimal_present;
    rep.verdict(Verdict::new(
        "Ass(S/a) lies in {p_([n],0), p_(0,[n]), p_([n],[n])} and contains both minimal primes",
        stray.then(|| format!("found {}", ass.iter().map(|p| ctx.prime_line(p).trim().to_string()).collect::<Vec<_>>().join("; "))),
        Evidence::cert("associatedness witnesses over all biflats"),
    ));
    rep.section(
        "maximal_ideal",
        json!(got.contains(&(full, full))),
        format!("the maximal ideal is {}associated\n", if got.contains(&(full, full)) { "" } else { "not " }),
    );
    if ctx.pi.r() < n && ctx.pi.r() > 0 {
        let sl = slice_associated_primes(&ctx.pi, Side::XSlice)?;
        let only_full = sl.len() == 1 && sl[0].i == full;
        rep.verdict(Verdict::new(
            "the slice (.,1) has the single associated prime P_[n]",
            (!only_full).then(|| format!("found {}", sl.iter().map(|p| ctx.fmt(p.i)).collect::<Vec<_>>().join(" "))),
            Evidence::cert("associatedness witnesses over all flats"),
        ));
    }
    Ok(())
}

fn verify_coords<K: Field>(ctx: &Ctx<K>, rep: &mut Report) -> Result<()> {
    let pi = &ctx.pi;
    let k = ctx.k();
    let r = pi.r();
    let n = pi.n();
    let e = GradedEngine::new(pi);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let points: Vec<(Vec<i64>, Vec<i64>)> =
        (0..5).map(|_| ((0..r).map(|_| rng.gen_range(-9..=9)).collect(), (0..n - r).map(|_| rng.gen_range(-9..=9)).collect())).collect();
    let mut failure = None;
    let mut checked = 0;
    'outer: for (p, q) in &points {
        let mut full: Vec<K::Elem> = p.iter().chain(q.iter()).map(|&v| k.from_i64(v)).collect();
        let mut a_vals = Vec::with_capacity(n);
        for i in 0..n {
            let fi = pi.f(i).evaluate(k, &full)?;
            let gi = pi.g(i).evaluate(k, &full)?;
            a_vals.push(k.mul(&fi, &gi));
        }
        full.truncate(r);
        full.extend(a_vals);
        for (x, j) in [(0, 1), (1, 1), (2, 1), (0, 2), (1, 2), (0, 3)] {
            for poly in e.ix_slice(x, j)?.polys(k, r + n) {
                checked += 1;
                if !k.is_zero(&poly.evaluate(k, &full)?) {
                    failure = Some(format!("element of (I_X)_({x};{j}) at p = {p:?}, q = {q:?}"));
                    break 'outer;
                }
            }
        }
    }
    rep.section(
        "points",
        json!({"points": points.iter().map(|(p, q)| json!({"p": p, "q": q})).collect::<Vec<_>>(), "relations_checked": checked}),
        format!("{} sampled (p, q); {checked} relation evaluations\n", points.len()),
    );
    rep.verdict(Verdict::new(
        "relations of I_X vanish on (p, f_1(p)g_1(q), ..., f_n(p)g_n(q))",
        failure,
        Evidence::ObservedInWindow { window: 3 },
    ));
    Ok(())
}

fn verify_linear_type<K: Field>(ctx: &Ctx<K>, rep: &mut Report) -> Result<()> {
    let e = GradedEngine::new(&ctx.pi);
    let v = e.linear_type_check(ctx.bound)?;
    let text = match v.first_failure {
        None => format!("J = L in every multidegree up to B = {} (bounded evidence only)\n", ctx.bound),
        Some((i, j, q)) => format!("J != L at S-bidegree ({i},{j}), a-degree {q}: a is not of linear type\n"),
    };
    rep.section(
        "linear_type",
        json!({"bound": v.bound, "equal_up_to_bound": v.equal_up_to_bound(), "first_failure": v.first_failure, "label": "bounded evidence"}),
        text,
    );
    if v.equal_up_to_bound() {
        let d = der_module(&ctx.pi)?;
        let il = ilog_generators(&ctx.pi, &d)?;
        let mut failure = None;
        'scan: for j in 1..=ctx.bound {
            for x in 0..=ctx.bound.saturating_sub(j) {
                let a = e.ix_slice(x, j)?.dim();
                let b = e.ilog_slice(x, j, &il)?.dim();
                if a != b {
                    failure = Some(format!("(I_log)_({x};{j}) has dim {b}, (I_X) has {a}"));
                    break 'scan;
                }
            }
        }
        rep.verdict(Verdict::new(
            "J = L up to B is accompanied by I_log = I_X up to B",
            failure,
            Evidence::ObservedInWindow { window: ctx.bound },
        ));
    }
    Ok(())
}

// ----- compare --------------------------------------------------------------

pub fn compare<K: Field>(a: &Ctx<K>, b: &Ctx<K>, recipe: bool) -> Result<Report> {
    let mut rep = Report::new("compare", &format!("{} {}", a.name, b.name));
    rep.warnings = a.warnings.iter().chain(&b.warnings).cloned().collect();
    let same = a.pi.matroid().rank_table() == b.pi.matroid().rank_table();
    rep.section("same_matroid", json!(same), format!("same labelled matroid: {same}\n"));
    if recipe {
        let ra: Realization<K> = a.spec.realization(a.k())?;
        let rb: Realization<K> = b.spec.realization(a.k())?;
        let cert = recipe_check(&ra, &rb)?;
        let text = match &cert {
            Some(c) => format!(
                "flat F = {} of rank {} spans different subspaces\n  A: {:?}\n  B: {:?}\nverdict: {}\n",
                fmt_labels(&c.flat, ra.n()),
                c.rank,
                c.span_a,
                c.span_b,
                c.verdict
            ),
            None => "no certificate: every minimal cyclic flat of rank >= 3 spans the same subspace (or none exists)\n".into(),
        };
        rep.section("recipe", json!({"certificate": cert}), text);
        return Ok(rep);
    }
    if !same {
        bail!("compare-realizations needs two realizations of the same labelled matroid");
    }
    let mut sides = serde_json::Map::new();
    let mut text = String::from("slice associated primes side by side (evidence only, no claim):\n");
    for s in [SliceArg::X, SliceArg::Y] {
        let la = slice_associated_primes(&a.pi, s.side())?;
        let lb = slice_associated_primes(&b.pi, s.side())?;
        let fmt = |c: &Ctx<K>, l: &[LinearPrime]| -> Vec<String> {
            l.iter().map(|p| format!("{}{}", c.fmt(p.i | p.j), if p.tag == PrimeTag::Embedded { "*" } else { "" })).collect()
        };
        let (fa, fb) = (fmt(a, &la), fmt(b, &lb));
        let _ = writeln!(text, "  {}  {}: {}\n  {}  {}: {}", s.label(), a.name, fa.join(" "), s.label(), b.name, fb.join(" "));
        sides.insert(s.label().into(), json!({"a": fa, "b": fb, "agree": fa == fb}));
    }
    text.push_str("  (* marks embedded primes)\n");
    rep.section("compare_realizations", Value::Object(sides), text);
    Ok(rep)
}

pub fn check_same_ground<K: Field>(a: &Ctx<K>, b: &Ctx<K>) -> Result<()> {
    if a.pi.n() != b.pi.n() {
        bail!("ground sets differ: {} vs {}", a.pi.n(), b.pi.n());
    }
    Ok(())
}
