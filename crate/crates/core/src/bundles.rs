//! Finite principal bundles and their sections.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::groups::{group_quotient, FiniteGroup, GroupHom, Subgroup};

/// A free action of a finite group on `Y` whose orbits are the fibres of `Y → X`.
#[derive(Clone, Debug)]
pub struct FiniteBundle {
    group: Arc<FiniteGroup>,
    total: usize,
    base: usize,
    proj: Vec<usize>,
    /// `action[g][y] = g·y`.
    action: Vec<Vec<usize>>,
}

impl FiniteBundle {
    pub fn new(group: Arc<FiniteGroup>, total: usize, base: usize, proj: Vec<usize>, action: Vec<Vec<usize>>) -> Result<Self> {
        if proj.len() != total {
            return Err(Error::invalid("bundle", format!("projection has {} entries for {total} points", proj.len())));
        }
        if proj.iter().any(|&x| x >= base) {
            return Err(Error::invalid("bundle", "projection leaves the base"));
        }
        if action.len() != group.order() || action.iter().any(|row| row.len() != total) {
            return Err(Error::invalid("bundle", "action table must be |G| × |Y|"));
        }
        if action.iter().flatten().any(|&y| y >= total) {
            return Err(Error::invalid("bundle", "action leaves the total space"));
        }
        let b = FiniteBundle {
            group,
            total,
            base,
            proj,
            action,
        };
        b.verify()?;
        Ok(b)
    }

    fn verify(&self) -> Result<()> {
        let g = &self.group;
        for y in 0..self.total {
            if self.action[0][y] != y {
                return Err(Error::BundleInvariant(format!("identity moves point {y}")));
            }
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                for y in 0..self.total {
                    if self.act(a, self.act(b, y)) != self.act(g.mul(a, b), y) {
                        return Err(Error::BundleInvariant(format!(
                            "action is not compatible at ({a}, {b}, {y})"
                        )));
                    }
                }
            }
        }
        for a in 1..g.order() {
            if let Some(y) = (0..self.total).find(|&y| self.act(a, y) == y) {
                return Err(Error::NotFree { element: a, point: y });
            }
        }
        let mut hit = vec![false; self.base];
        for &x in &self.proj {
            hit[x] = true;
        }
        if let Some(x) = hit.iter().position(|h| !h) {
            return Err(Error::BundleInvariant(format!("base point {x} has an empty fibre")));
        }
        for a in 0..g.order() {
            for y in 0..self.total {
                if self.proj[self.act(a, y)] != self.proj[y] {
                    return Err(Error::BundleInvariant(format!("projection is not invariant at ({a}, {y})")));
                }
            }
        }
        // a free action has orbits of size |G|, so fibres are orbits iff they have that size
        for x in 0..self.base {
            let size = self.proj.iter().filter(|&&p| p == x).count();
            if size != g.order() {
                return Err(Error::BundleInvariant(format!(
                    "fibre over {x} has {size} points, not a single orbit"
                )));
            }
        }
        Ok(())
    }

    /// `X × G` with `(x, g)` at index `x·|G| + g` and `h·(x, g) = (x, hg)`.
    pub fn trivial(group: Arc<FiniteGroup>, base: usize) -> Self {
        let n = group.order();
        let proj = (0..base * n).map(|y| y / n).collect();
        let action = (0..n)
            .map(|h| (0..base * n).map(|y| (y / n) * n + group.mul(h, y % n)).collect())
            .collect();
        FiniteBundle {
            group,
            total: base * n,
            base,
            proj,
            action,
        }
    }

    /// A trivial bundle with the total space randomly relabelled and each
    /// fibre twisted by a random right translation.
    pub fn random<R: Rng>(group: Arc<FiniteGroup>, base: usize, rng: &mut R) -> Self {
        let n = group.order();
        let total = base * n;
        let mut relabel: Vec<usize> = (0..total).collect();
        relabel.shuffle(rng);
        let twists: Vec<usize> = (0..base).map(|_| rng.gen_range(0..n)).collect();
        // point (x, g) ↦ relabel[x·n + g·t_x]
        let point = |x: usize, g: usize| relabel[x * n + group.mul(g, twists[x])];
        let mut proj = vec![0; total];
        let mut action = vec![vec![0; total]; n];
        for x in 0..base {
            for g in 0..n {
                proj[point(x, g)] = x;
                for h in 0..n {
                    action[h][point(x, g)] = point(x, group.mul(h, g));
                }
            }
        }
        FiniteBundle {
            group,
            total,
            base,
            proj,
            action,
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn projection(&self) -> &[usize] {
        &self.proj
    }

    pub fn action_table(&self) -> &[Vec<usize>] {
        &self.action
    }

    #[inline]
    pub fn act(&self, g: usize, y: usize) -> usize {
        self.action[g][y]
    }

    pub fn is_section(&self, s: &[usize]) -> bool {
        s.len() == self.base && s.iter().enumerate().all(|(x, &y)| y < self.total && self.proj[y] == x)
    }
}

/// The least-index point of every fibre.
pub fn find_section(b: &FiniteBundle) -> Result<Vec<usize>> {
    b.verify()?;
    let mut s = vec![usize::MAX; b.base];
    for (y, &x) in b.proj.iter().enumerate() {
        if s[x] == usize::MAX {
            s[x] = y;
        }
    }
    debug_assert!(b.is_section(&s));
    Ok(s)
}

/// `N\Y → X` as a bundle for `G/N`, with the orbit map `Y → N\Y`.
#[derive(Clone, Debug)]
pub struct QuotientBundle {
    pub bundle: FiniteBundle,
    pub orbit_map: Vec<usize>,
    pub group_map: GroupHom,
}

pub fn quotient_bundle(b: &FiniteBundle, n: &Subgroup) -> Result<QuotientBundle> {
    let (q, group_map) = group_quotient(&b.group, n)?;
    let mut orbit_map = vec![usize::MAX; b.total];
    let mut reps = Vec::new();
    for y in 0..b.total {
        if orbit_map[y] == usize::MAX {
            for &e in n.elements() {
                orbit_map[b.act(e, y)] = reps.len();
            }
            reps.push(y);
        }
    }
    let coset_reps = group_map.least_preimages();
    let proj: Vec<usize> = reps.iter().map(|&y| b.proj[y]).collect();
    let action: Vec<Vec<usize>> = (0..q.order())
        .map(|c| {
            let g = coset_reps[c].expect("quotient map is onto");
            reps.iter().map(|&y| orbit_map[b.act(g, y)]).collect()
        })
        .collect();
    let bundle = FiniteBundle::new(q, reps.len(), b.base, proj, action)?;
    for y in 0..b.total {
        if bundle.proj[orbit_map[y]] != b.proj[y] {
            return Err(Error::BundleInvariant(format!("orbit map does not commute with projections at {y}")));
        }
        for g in 0..b.group.order() {
            if orbit_map[b.act(g, y)] != bundle.act(group_map.apply(g), orbit_map[y]) {
                return Err(Error::BundleInvariant(format!("orbit map is not equivariant at ({g}, {y})")));
            }
        }
    }
    Ok(QuotientBundle {
        bundle,
        orbit_map,
        group_map,
    })
}
