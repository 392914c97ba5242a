use std::path::Path;

use quasibool::bundles::{find_section, quotient_bundle};
use quasibool::cohomology::{induced_map, involution_profile, quillen_map, tower_colimit, Caps, CohomClass, GroupCohomology};
use quasibool::embed::{classify_problem, make_lifting_data, obstruction_class, reduce_to_2_embedding, solve};
use quasibool::error::Error;
use quasibool::formats::{
    BundleFile, GroupFile, HomFile, ImagesFile, PresentationFile, ProblemFile, RingFile, SnapshotFile, SpaceFile,
};
use quasibool::freeprod::{evaluate_hom, involution_class_trace, normalize, parse_letters, quotient_tower};
use quasibool::gf2::{BitMatrix, BitVec};
use quasibool::graded::GradedAlgebra;
use quasibool::groups::{group_quotient, involution_data, sylow_transfer, FiniteGroup};
use quasibool::reconstruct::{classify, decompose, reconstruct_presentation, roundtrip, verify_reconstruction};
use quasibool::stone::{
    atoms, clopen_partition_refine, duality_roundtrip, points_of, profinite_completion, spectrum, BooleanRing, FiniteSpace,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::{BundleCmd, CohCmd, Command, EmbedCmd, GroupCmd, Opts, ReconstructCmd, StoneCmd, WordCmd, MAX_NMAX};

/// A failed command: exit code 2 for unusable input, 1 for a domain refusal.
#[derive(Debug)]
pub struct Failure {
    kind: String,
    message: String,
    code: u8,
}

impl Failure {
    pub fn validation(kind: &str, message: String) -> Self {
        Failure {
            kind: kind.into(),
            message,
            code: 2,
        }
    }

    pub fn domain(kind: &str, message: String) -> Self {
        Failure {
            kind: kind.into(),
            message,
            code: 1,
        }
    }

    pub fn exit_code(&self) -> u8 {
        self.code
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": self.kind, "message": self.message })
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_validation() { 2 } else { 1 };
        Failure {
            kind: e.kind().into(),
            message: e.to_string(),
            code,
        }
    }
}

type Out = Result<Value, Failure>;

fn load<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::validation("io", format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::validation("parse", format!("{}: {e}", path.display())))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("output types serialize")
}

fn caps() -> Caps {
    Caps {
        max_degree: MAX_NMAX,
        ..Caps::default()
    }
}

fn columns(m: &BitMatrix) -> Vec<BitVec> {
    (0..m.cols()).map(|j| m.column(j)).collect()
}

pub fn run(command: &Command, opts: &Opts) -> Out {
    match command {
        Command::Stone(c) => stone(c),
        Command::Bundle(c) => bundle(c),
        Command::Group(c) => group(c),
        Command::Word(c) => word(c),
        Command::Coh(c) => coh(c, opts),
        Command::Embed(c) => embed(c),
        Command::Reconstruct(c) => reconstruct(c, opts),
    }
}

fn ring(path: &Path) -> Result<BooleanRing, Failure> {
    Ok(load::<RingFile>(path)?.into_ring()?)
}

fn space(path: &Path) -> Result<FiniteSpace, Failure> {
    Ok(load::<SpaceFile>(path)?.into_space()?)
}

fn stone(c: &StoneCmd) -> Out {
    match c {
        StoneCmd::Atoms { ring: path } => {
            let r = ring(path)?;
            Ok(json!({ "dim": r.dim(), "atoms": atoms(&r) }))
        }
        StoneCmd::Spec { ring: path } => {
            let r = ring(path)?;
            let s = spectrum(&r);
            Ok(json!({ "atoms": s.atoms, "space": SpaceFile::from_space(&s.space) }))
        }
        StoneCmd::Dual { ring: path, space: x } => {
            let r = ring(path)?;
            let x = match x {
                Some(p) => space(p)?,
                None => spectrum(&r).space,
            };
            Ok(to_value(&duality_roundtrip(&r, &x, None)))
        }
        StoneCmd::Complete { space: path } => {
            let c = profinite_completion(&space(path)?);
            Ok(json!({
                "classes": c.classes.iter().map(|&m| points_of(m)).collect::<Vec<_>>(),
                "map": c.map.point_map,
                "space": SpaceFile::from_space(&c.space),
                "matches_spectrum": c.matches_spectrum,
            }))
        }
        StoneCmd::Refine { space: path, cover } => {
            let x = space(path)?;
            let lists: Vec<Vec<usize>> = load(cover)?;
            let mut masks = Vec::with_capacity(lists.len());
            for l in &lists {
                let mut m = 0u64;
                for &p in l {
                    if p >= x.points() {
                        return Err(Failure::validation("invalid", format!("cover point {p} is not in the space")));
                    }
                    m |= 1 << p;
                }
                masks.push(m);
            }
            let parts = clopen_partition_refine(&x, &masks)?;
            Ok(json!({ "partition": parts.iter().map(|&m| points_of(m)).collect::<Vec<_>>() }))
        }
    }
}

fn bundle(c: &BundleCmd) -> Out {
    match c {
        BundleCmd::Section { bundle } => {
            let b = load::<BundleFile>(bundle)?.into_bundle()?;
            Ok(json!({ "section": find_section(&b)? }))
        }
        BundleCmd::Quotient { bundle, normal } => {
            let b = load::<BundleFile>(bundle)?.into_bundle()?;
            let n = b.group().subgroup(normal)?;
            let q = quotient_bundle(&b, &n)?;
            Ok(json!({
                "bundle": BundleFile::from_bundle(&q.bundle),
                "orbit_map": q.orbit_map,
                "group_map": q.group_map.map(),
            }))
        }
    }
}

fn group(c: &GroupCmd) -> Out {
    match c {
        GroupCmd::Info { group } => {
            let g = load::<GroupFile>(group)?.into_group()?;
            let inv = involution_data(&g);
            Ok(json!({
                "order": g.order(),
                "abelian": g.is_abelian(),
                "two_group": g.is_two_group(),
                "element_orders": (0..g.order()).map(|x| g.element_order(x)).collect::<Vec<_>>(),
                "center": g.center().elements(),
                "generators": g.generating_set(),
                "involution_classes": inv.classes,
            }))
        }
        GroupCmd::Quotient { group, normal } => {
            let g = load::<GroupFile>(group)?.into_group()?;
            let n = g.subgroup(normal)?;
            let (q, map) = group_quotient(&g, &n)?;
            Ok(json!({ "quotient": GroupFile::from_group(&q), "map": map.map() }))
        }
        GroupCmd::Sylow { hom, element } => {
            let f = load::<HomFile>(hom)?.into_hom()?;
            let t = sylow_transfer(&f, element.unwrap_or(0))?;
            Ok(json!({
                "sylow": t.sylow.elements(),
                "conjugator": t.conjugator,
                "conjugate": t.conjugate,
            }))
        }
        GroupCmd::Builtin { name } => Ok(to_value(&GroupFile::from_group(&FiniteGroup::builtin(name)?))),
    }
}

fn word(c: &WordCmd) -> Out {
    match c {
        WordCmd::Normalize { presentation, word } => {
            let p: PresentationFile = load(presentation)?;
            p.validate()?;
            let w = normalize(&p, &parse_letters(word)?)?;
            Ok(json!({ "word": w.to_string(), "length": w.len() }))
        }
        WordCmd::Eval {
            presentation,
            group,
            images,
            word,
        } => {
            let p: PresentationFile = load(presentation)?;
            p.validate()?;
            let g = load::<GroupFile>(group)?.into_group()?;
            let images: ImagesFile = load(images)?;
            let ev = evaluate_hom(&p, &images.images, g.clone())?;
            let w = normalize(&p, &parse_letters(word)?)?;
            let x = ev.eval(&w)?;
            // the trace needs every involution generator to reach an involution
            let trace = involution_class_trace(&ev).ok();
            Ok(json!({
                "word": w.to_string(),
                "element": x,
                "label": g.label(x),
                "image": ev.image.elements(),
                "trace": trace,
            }))
        }
    }
}

fn coh(c: &CohCmd, opts: &Opts) -> Out {
    let caps = caps();
    match c {
        CohCmd::Basis { group } => {
            let g = load::<GroupFile>(group)?.into_group()?;
            let coh = GroupCohomology::new(g, opts.nmax, &caps)?;
            let res = coh.resolution();
            Ok(json!({
                "dims": coh.dims(),
                "resolution_ranks": (0..=opts.nmax).map(|n| res.rank(n)).collect::<Vec<_>>(),
                "minimal": res.is_minimal(),
            }))
        }
        CohCmd::Cup { group } => {
            let g = load::<GroupFile>(group)?.into_group()?;
            let coh = GroupCohomology::new(g, opts.nmax, &caps)?;
            let s: SnapshotFile = coh.snapshot(opts.nmax)?.to_snapshot();
            Ok(to_value(&s))
        }
        CohCmd::Restrict { hom } => {
            let f = load::<HomFile>(hom)?.into_hom()?;
            let target = GroupCohomology::new(f.target().clone(), opts.nmax, &caps)?;
            let source = GroupCohomology::new(f.source().clone(), opts.nmax, &caps)?;
            let m = induced_map(&f, &target, &source, opts.nmax)?;
            Ok(json!({
                "matrices": (0..=opts.nmax).map(|n| columns(m.matrix(n))).collect::<Vec<_>>(),
                "ranks": (0..=opts.nmax).map(|n| m.rank(n)).collect::<Vec<_>>(),
            }))
        }
        CohCmd::Quillen { group, degree } => {
            let g = load::<GroupFile>(group)?.into_group()?;
            let degrees: Vec<usize> = match degree {
                Some(d) => vec![*d],
                None => (1..=opts.nmax).collect(),
            };
            let reports = parallel_map(&degrees, opts.jobs, |&n| {
                quillen_map(&g, n, opts.nilbound, opts.powbound, &caps)
            });
            let reports = reports.into_iter().collect::<Result<Vec<_>, _>>()?;
            Ok(json!({ "reports": reports }))
        }
        CohCmd::Profile { group, degree, class } => {
            let g = load::<GroupFile>(group)?.into_group()?;
            let coh = GroupCohomology::new(g, *degree, &caps)?;
            let classes = match class {
                Some(s) => vec![CohomClass {
                    degree: *degree,
                    coords: parse_bits(s)?,
                }],
                None => coh.elements(*degree)?.into_iter().filter(|c| !c.is_zero()).collect(),
            };
            let mut out = Vec::with_capacity(classes.len());
            for c in &classes {
                let p = involution_profile(&coh, c)?;
                out.push(json!({ "class": c.coords, "profile": p }));
            }
            Ok(json!({ "degree": degree, "profiles": out }))
        }
        CohCmd::Tower { presentation } => {
            let p: PresentationFile = load(presentation)?;
            p.validate()?;
            let t = quotient_tower(&p, opts.depth)?;
            Ok(to_value(&tower_colimit(&t, opts.nmax, &caps)?))
        }
    }
}

/// `"0110"` or `"0,1,1,0"`.
fn parse_bits(s: &str) -> Result<BitVec, Failure> {
    let bits: Option<Vec<u8>> = s
        .chars()
        .filter(|c| *c != ',' && !c.is_whitespace())
        .map(|c| c.to_digit(2).map(|d| d as u8))
        .collect();
    bits.map(|b| BitVec::from_bits(&b))
        .ok_or_else(|| Failure::validation("parse", format!("`{s}` is not a list of bits")))
}

/// Applies `f` to each item on up to `jobs` threads; results keep input order.
fn parallel_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    if jobs <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| {
                let f = &f;
                s.spawn(move || part.iter().map(f).collect::<Vec<R>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

fn embed(c: &EmbedCmd) -> Out {
    let caps = caps();
    let problem = match c {
        EmbedCmd::Classify { problem }
        | EmbedCmd::Reduce { problem }
        | EmbedCmd::Obstruct { problem }
        | EmbedCmd::Solve { problem }
        | EmbedCmd::Liftdata { problem } => problem,
    };
    let (e, lifting) = load::<ProblemFile>(problem)?.into_problem()?;
    match c {
        EmbedCmd::Classify { .. } => Ok(to_value(&classify_problem(&e))),
        EmbedCmd::Reduce { .. } => {
            let r = reduce_to_2_embedding(&e)?;
            Ok(json!({
                "problem": ProblemFile::from_problem(&r.problem, None),
                "sylow_inclusion": r.sylow_inclusion.map(),
                "image_inclusion": r.image_inclusion.map(),
            }))
        }
        EmbedCmd::Obstruct { .. } => {
            let o = obstruction_class(&e, &caps)?;
            let mut v = to_value(&o);
            v["zero"] = json!(o.is_zero());
            Ok(v)
        }
        EmbedCmd::Solve { .. } => Ok(to_value(&solve(&e, lifting.as_ref(), &caps)?)),
        EmbedCmd::Liftdata { .. } => {
            let l = make_lifting_data(&e)?;
            Ok(to_value(&ProblemFile::from_problem(&e, Some(&l))))
        }
    }
}

fn algebra(path: &Path) -> Result<GradedAlgebra, Failure> {
    Ok(GradedAlgebra::from_snapshot(&load::<SnapshotFile>(path)?)?)
}

fn reconstruct(c: &ReconstructCmd, opts: &Opts) -> Out {
    match c {
        ReconstructCmd::Decompose { snapshot } => {
            let d = decompose(&algebra(snapshot)?)?;
            Ok(json!({
                "d1": d.d1.basis(),
                "ring": RingFile::from_ring(&d.ring),
                "coset": d.coset,
                "identifications": d.identifications.iter().map(columns).collect::<Vec<_>>(),
                "degenerate": d.degenerate,
                "free_rank": d.y_count(),
                "X_points": d.x_points(),
            }))
        }
        ReconstructCmd::Classify { snapshot } => Ok(json!({ "classification": classify(&algebra(snapshot)?) })),
        ReconstructCmd::Run { snapshot, verify_depth } => {
            let a = algebra(snapshot)?;
            let p = reconstruct_presentation(&a)?;
            let verification = match verify_depth {
                Some(depth) => {
                    if *depth == 0 || *depth > crate::MAX_DEPTH {
                        return Err(Failure::validation(
                            "option",
                            format!("--verify-depth = {depth} is outside 1..={}", crate::MAX_DEPTH),
                        ));
                    }
                    Some(verify_reconstruction(&p, &a, *depth, opts.nmax, &caps())?)
                }
                None => None,
            };
            Ok(json!({
                "presentation": p.presentation(),
                "result": p,
                "space": SpaceFile::from_space(&p.space),
                "verification": verification,
            }))
        }
        ReconstructCmd::Roundtrip { d1, dimb } => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let b = BooleanRing::standard(*dimb);
            let r = roundtrip(*d1, &b, opts.nmax, Some(&mut rng))?;
            Ok(json!({ "d1": d1, "dimb": dimb, "seed": opts.seed, "report": r }))
        }
    }
}
