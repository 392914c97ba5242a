//! Words in the free product of a free group on `Y` with copies of `Z/2`
//! indexed by `X`, homomorphisms out of it, and curated towers of finite
//! quotients.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{abelian_2torsion_quotient, involution_data, FiniteGroup, GroupHom, Subgroup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    #[serde(rename = "Y")]
    pub free_gens: Vec<String>,
    #[serde(rename = "X")]
    pub involution_gens: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    Free,
    Involution,
}

impl Presentation {
    pub fn new(free_gens: Vec<String>, involution_gens: Vec<String>) -> Result<Self> {
        let p = Presentation {
            free_gens,
            involution_gens,
        };
        p.validate()?;
        Ok(p)
    }

    /// `y1..ym` free and `x1..xn` involution generators.
    pub fn with_counts(y: usize, x: usize) -> Self {
        Presentation {
            free_gens: (1..=y).map(|i| format!("y{i}")).collect(),
            involution_gens: (1..=x).map(|i| format!("x{i}")).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for l in self.generators() {
            if l.is_empty() || l.contains(char::is_whitespace) || l.contains('^') {
                return Err(Error::invalid("presentation", format!("bad generator label `{l}`")));
            }
            if !seen.insert(l) {
                return Err(Error::invalid("presentation", format!("label `{l}` is used twice")));
            }
        }
        Ok(())
    }

    /// Free generators first, then involution generators.
    pub fn generators(&self) -> impl Iterator<Item = &String> {
        self.free_gens.iter().chain(self.involution_gens.iter())
    }

    pub fn rank(&self) -> usize {
        self.free_gens.len() + self.involution_gens.len()
    }

    pub fn kind(&self, label: &str) -> Result<GenKind> {
        if self.free_gens.iter().any(|l| l == label) {
            Ok(GenKind::Free)
        } else if self.involution_gens.iter().any(|l| l == label) {
            Ok(GenKind::Involution)
        } else {
            Err(Error::UnknownLabel(label.to_string()))
        }
    }

    /// Position in [`Presentation::generators`].
    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.generators()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub label: String,
    /// `±1`; always `+1` for involution generators.
    pub exp: i8,
}

impl Letter {
    pub fn new(label: impl Into<String>, exp: i8) -> Self {
        Letter {
            label: label.into(),
            exp,
        }
    }
}

/// A reduced word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self, p: &Presentation) -> bool {
        self.letters.windows(2).all(|w| {
            let involution = p.kind(&w[0].label).ok() == Some(GenKind::Involution);
            !(w[0].label == w[1].label && (involution || w[0].exp == -w[1].exp))
        })
    }

    pub fn inverse(&self, p: &Presentation) -> Result<Word> {
        let mut letters = Vec::with_capacity(self.len());
        for l in self.letters.iter().rev() {
            let exp = match p.kind(&l.label)? {
                GenKind::Free => -l.exp,
                GenKind::Involution => 1,
            };
            letters.push(Letter::new(l.label.clone(), exp));
        }
        Ok(Word { letters })
    }

    /// `self · other`, reduced.
    pub fn mul(&self, p: &Presentation, other: &Word) -> Result<Word> {
        let raw: Vec<Letter> = self.letters.iter().chain(other.letters.iter()).cloned().collect();
        normalize(p, &raw)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| if l.exp == -1 { format!("{}^-1", l.label) } else { l.label.clone() })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Free reduction with `xx = 1` for involution generators.
///
/// A single left-to-right pass with a stack yields the unique reduced form.
pub fn normalize(p: &Presentation, raw: &[Letter]) -> Result<Word> {
    let mut stack: Vec<Letter> = Vec::with_capacity(raw.len());
    for l in raw {
        if l.exp != 1 && l.exp != -1 {
            return Err(Error::invalid("word", format!("exponent {} on `{}`", l.exp, l.label)));
        }
        let involution = p.kind(&l.label)? == GenKind::Involution;
        let letter = Letter::new(l.label.clone(), if involution { 1 } else { l.exp });
        match stack.last() {
            Some(top) if top.label == letter.label && (involution || top.exp == -letter.exp) => {
                stack.pop();
            }
            _ => stack.push(letter),
        }
    }
    Ok(Word { letters: stack })
}

/// Parses `y x1 y^-1` style words; letters are separated by spaces or `*`.
pub fn parse_letters(s: &str) -> Result<Vec<Letter>> {
    let mut out = Vec::new();
    for tok in s.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
        if tok == "1" {
            continue;
        }
        let (label, exp) = match tok.split_once('^') {
            Some((l, e)) => {
                let e: i8 = e
                    .parse()
                    .map_err(|_| Error::invalid("word", format!("bad exponent in `{tok}`")))?;
                (l, e)
            }
            None => (tok, 1),
        };
        if exp != 1 && exp != -1 {
            return Err(Error::invalid("word", format!("exponent must be ±1 in `{tok}`")));
        }
        out.push(Letter::new(label, exp));
    }
    Ok(out)
}

/// A homomorphism from the free product to a finite 2-group.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub presentation: Presentation,
    pub group: Arc<FiniteGroup>,
    /// Images in [`Presentation::generators`] order.
    pub images: Vec<usize>,
    pub image: Subgroup,
}

impl Evaluation {
    pub fn eval(&self, w: &Word) -> Result<usize> {
        let mut acc = 0;
        for l in w.letters() {
            let g = self.images[self.presentation.index_of(&l.label)?];
            let g = if l.exp == -1 { self.group.inv(g) } else { g };
            acc = self.group.mul(acc, g);
        }
        Ok(acc)
    }

    pub fn image_of(&self, label: &str) -> Result<usize> {
        Ok(self.images[self.presentation.index_of(label)?])
    }
}

pub fn evaluate_hom(p: &Presentation, images: &BTreeMap<String, usize>, g: Arc<FiniteGroup>) -> Result<Evaluation> {
    p.validate()?;
    if !g.is_two_group() {
        return Err(Error::NotTwoGroup { order: g.order() });
    }
    for label in images.keys() {
        p.index_of(label)?;
    }
    let mut imgs = Vec::with_capacity(p.rank());
    for label in p.generators() {
        let v = *images
            .get(label)
            .ok_or_else(|| Error::invalid("images", format!("no image for `{label}`")))?;
        if v >= g.order() {
            return Err(Error::invalid("images", format!("image {v} of `{label}` out of range")));
        }
        imgs.push(v);
    }
    for (i, label) in p.generators().enumerate() {
        if p.kind(label)? == GenKind::Involution && g.mul(imgs[i], imgs[i]) != 0 {
            return Err(Error::NotInvolution { element: imgs[i] });
        }
    }
    let image = g.generated(&imgs);
    Ok(Evaluation {
        presentation: p.clone(),
        group: g,
        images: imgs,
        image,
    })
}

/// `F₂^{Y ⊔ X}`, generator `i` of [`Presentation::generators`] being bit `i`.
pub fn abelianized_2torsion(p: &Presentation) -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::elementary_abelian(p.rank()))
}

/// The map `F₂^{Y ⊔ X} → G_*` induced by an evaluation, where `G_*` is the
/// abelian 2-torsion quotient of the target.
pub fn induced_abelian_map(ev: &Evaluation) -> Result<(GroupHom, GroupHom)> {
    let source = abelianized_2torsion(&ev.presentation);
    let (gstar, q) = abelian_2torsion_quotient(&ev.group);
    let basis: Vec<usize> = ev.images.iter().map(|&g| q.apply(g)).collect();
    let map = (0..source.order())
        .map(|m| {
            basis
                .iter()
                .enumerate()
                .filter(|(i, _)| (m >> i) & 1 == 1)
                .fold(0, |acc, (_, &b)| gstar.mul(acc, b))
        })
        .collect();
    Ok((GroupHom::new(source, gstar, map)?, q))
}

/// The class in `F₂^{Y ⊔ X}` of a word: exponent sums mod 2.
pub fn abelian_class(p: &Presentation, w: &Word) -> Result<usize> {
    let mut m = 0;
    for l in w.letters() {
        m ^= 1 << p.index_of(&l.label)?;
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceReport {
    /// Involution class index of each involution generator.
    pub classes: Vec<usize>,
    /// Least-index representative of each class of the target.
    pub class_reps: Vec<usize>,
    pub injective: bool,
    /// Classes of the target not hit by any generator.
    pub missed: Vec<usize>,
}

pub fn involution_class_trace(ev: &Evaluation) -> Result<TraceReport> {
    let data = involution_data(&ev.group);
    let mut classes = Vec::new();
    for label in &ev.presentation.involution_gens {
        let g = ev.image_of(label)?;
        if g == 0 {
            return Err(Error::TrivialInvolutionImage {
                generator: label.clone(),
            });
        }
        classes.push(data.class_of(g).expect("images of involution generators are involutions"));
    }
    let mut sorted = classes.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let injective = sorted.len() == classes.len();
    let missed = (0..data.classes.len()).filter(|c| !sorted.contains(c)).collect();
    Ok(TraceReport {
        classes,
        class_reps: data.representatives(),
        injective,
        missed,
    })
}

/// One finite quotient with the images of the generators.
#[derive(Clone, Debug)]
pub struct TowerStage {
    pub group: Arc<FiniteGroup>,
    pub images: Vec<usize>,
}

/// Stages `G_1 ← G_2 ← …`; `maps[k]` goes from stage `k + 1` to stage `k`.
#[derive(Clone, Debug)]
pub struct Tower {
    pub presentation: Presentation,
    pub stages: Vec<TowerStage>,
    pub maps: Vec<GroupHom>,
}

impl Tower {
    /// The composite surjection from stage `from` down to stage `to ≤ from`.
    pub fn composite(&self, from: usize, to: usize) -> GroupHom {
        let mut h = GroupHom::identity(self.stages[from].group.clone());
        for k in (to..from).rev() {
            h = h.then(&self.maps[k]).expect("consecutive maps compose");
        }
        h
    }
}

/// Tower shapes with a curated library of quotients.
pub fn tower_shape_supported(free: usize, involutions: usize) -> bool {
    matches!((free, involutions), (0, 0) | (0, 1) | (0, 2) | (1, 0) | (2, 0))
}

/// The stage-`k` quotient of the free product on two generators of order 2
/// with exponent 2 lower central length `k`: the dihedral group of order `2^{k+1}`.
fn dihedral_stage(k: usize) -> TowerStage {
    let order = 1usize << (k + 1);
    let m = order / 2;
    TowerStage {
        group: Arc::new(FiniteGroup::dihedral(order)),
        images: vec![m, m + 1],
    }
}

/// `(i, j, c)` with `i, j ∈ Z/4`, `c ∈ Z/2` at index `i + 4j + 16c`, product
/// `(i,j,c)(i',j',c') = (i+i', j+j', c+c'+j·i')`. This is the free group on two
/// generators modulo the third term of its exponent-2 lower central series.
fn two_generator_class_two() -> FiniteGroup {
    let split = |x: usize| (x % 4, (x / 4) % 4, x / 16);
    let labels = (0..32)
        .map(|x| {
            let (i, j, c) = split(x);
            format!("({i},{j},{c})")
        })
        .collect();
    FiniteGroup::from_fn(32, Some(labels), |a, b| {
        let (i, j, c) = split(a);
        let (k, l, d) = split(b);
        (i + k) % 4 + 4 * ((j + l) % 4) + 16 * ((c + d + j * k) % 2)
    })
    .expect("valid group law")
}

pub fn quotient_tower(p: &Presentation, depth: usize) -> Result<Tower> {
    p.validate()?;
    let (ny, nx) = (p.free_gens.len(), p.involution_gens.len());
    if depth == 0 {
        return Err(Error::invalid("tower", "depth must be at least 1"));
    }
    let unsupported = |why: &str| Err(Error::Unsupported(format!("no curated tower for |Y| = {ny}, |X| = {nx}{why}")));
    let stages: Vec<TowerStage> = match (ny, nx) {
        (0, 0) => (0..depth)
            .map(|_| TowerStage {
                group: Arc::new(FiniteGroup::trivial()),
                images: vec![],
            })
            .collect(),
        (0, 1) => (0..depth)
            .map(|_| TowerStage {
                group: Arc::new(FiniteGroup::cyclic(2)),
                images: vec![1],
            })
            .collect(),
        (0, 2) => {
            if depth > 6 {
                return unsupported(" beyond depth 6");
            }
            (1..=depth).map(dihedral_stage).collect()
        }
        (1, 0) => {
            if depth > 7 {
                return unsupported(" beyond depth 7");
            }
            (1..=depth)
                .map(|k| TowerStage {
                    group: Arc::new(FiniteGroup::cyclic(1 << k)),
                    images: vec![1],
                })
                .collect()
        }
        (2, 0) => {
            if depth > 2 {
                return unsupported(" beyond depth 2");
            }
            let mut s = vec![TowerStage {
                group: Arc::new(FiniteGroup::elementary_abelian(2)),
                images: vec![1, 2],
            }];
            if depth == 2 {
                s.push(TowerStage {
                    group: Arc::new(two_generator_class_two()),
                    images: vec![1, 4],
                });
            }
            s
        }
        _ => return unsupported(""),
    };
    let mut maps = Vec::new();
    for k in 0..stages.len().saturating_sub(1) {
        let (lo, hi) = (&stages[k], &stages[k + 1]);
        let gens = hi.images.clone();
        let map = crate::groups::extend_to_hom(&hi.group, &lo.group, &gens, &lo.images)
            .ok_or_else(|| Error::invalid("tower", format!("stage {} does not map onto stage {}", k + 2, k + 1)))?;
        let hom = GroupHom::new(hi.group.clone(), lo.group.clone(), map)?;
        if !hom.is_surjective() {
            return Err(Error::invalid("tower", format!("connecting map {} is not onto", k + 1)));
        }
        maps.push(hom);
    }
    for (k, s) in stages.iter().enumerate() {
        if s.group.generated(&s.images).order() != s.group.order() {
            return Err(Error::invalid("tower", format!("stage {} is not generated by the images", k + 1)));
        }
        for &x in &s.images[ny..] {
            if x == 0 || s.group.mul(x, x) != 0 {
                return Err(Error::invalid("tower", format!("stage {} sends an involution generator to {x}", k + 1)));
            }
        }
    }
    Ok(Tower {
        presentation: p.clone(),
        stages,
        maps,
    })
}
