//! Finite groups given by multiplication tables.
//!
//! Elements are indices `0..order` and index 0 is always the identity.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest order accepted by [`FiniteGroup::new`] unless a cap is given.
pub const DEFAULT_ORDER_CAP: usize = 128;

/// Names accepted by [`FiniteGroup::builtin`] for one group of each
/// isomorphism type of order 2 to 16 that is a 2-group.
pub const TWO_GROUPS_TO_16: [&str; 22] = [
    "Z2", "Z4", "F2^2", "Z8", "Z4xZ2", "F2^3", "D8", "Q8", "Z16", "Z8xZ2", "Z4xZ4", "Z4xF2^2", "F2^4", "D16",
    "Q16", "SD16", "M16", "D8xZ2", "Q8xZ2", "Z4:Z4", "F2^2:Z4", "Pauli",
];

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order {})", self.order)
    }
}

impl FiniteGroup {
    /// Validates a table: identity at 0, Latin square, associativity.
    pub fn new(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        Self::with_cap(table, labels, DEFAULT_ORDER_CAP)
    }

    pub fn with_cap(table: Vec<Vec<usize>>, labels: Option<Vec<String>>, cap: usize) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::invalid("group", "order must be positive"));
        }
        if n > cap {
            return Err(Error::cap("group order", n as u128, cap as u128));
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::invalid("group", format!("{} labels for order {n}", l.len())));
            }
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid("group", format!("row {i} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::invalid("group", format!("entry {bad} out of range in row {i}")));
            }
            flat.extend_from_slice(row);
        }
        for i in 0..n {
            if flat[i] != i || flat[i * n] != i {
                return Err(Error::invalid("group", "index 0 is not the identity"));
            }
        }
        for i in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for j in 0..n {
                if std::mem::replace(&mut row_seen[flat[i * n + j]], true) {
                    return Err(Error::invalid("group", format!("row {i} repeats an entry")));
                }
                if std::mem::replace(&mut col_seen[flat[j * n + i]], true) {
                    return Err(Error::invalid("group", format!("column {i} repeats an entry")));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = flat[a * n + b];
                for c in 0..n {
                    if flat[ab * n + c] != flat[a * n + flat[b * n + c]] {
                        return Err(Error::invalid(
                            "group",
                            format!("associativity fails at ({a}, {b}, {c})"),
                        ));
                    }
                }
            }
        }
        Ok(Self::from_flat(n, flat, labels))
    }

    fn from_flat(n: usize, table: Vec<usize>, labels: Option<Vec<String>>) -> Self {
        let mut inverses = vec![0; n];
        for a in 0..n {
            inverses[a] = (0..n).find(|&b| table[a * n + b] == 0).expect("Latin square");
        }
        FiniteGroup {
            order: n,
            table,
            inverses,
            labels,
        }
    }

    /// Builds a group from a product rule; the result is validated.
    pub fn from_fn(order: usize, labels: Option<Vec<String>>, mul: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let table = (0..order).map(|a| (0..order).map(|b| mul(a, b)).collect()).collect();
        Self::new(table, labels)
    }

    pub fn trivial() -> Self {
        Self::from_flat(1, vec![0], Some(vec!["1".into()]))
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        Self::from_flat(n, table, Some((0..n).map(|i| i.to_string()).collect()))
    }

    /// `F₂^rank`, element `m` being the vector with bitmask `m`.
    pub fn elementary_abelian(rank: usize) -> Self {
        let n = 1usize << rank;
        let table = (0..n * n).map(|k| (k / n) ^ (k % n)).collect();
        let labels = (0..n)
            .map(|m| (0..rank).map(|i| if (m >> i) & 1 == 1 { '1' } else { '0' }).collect())
            .collect();
        Self::from_flat(n, table, Some(labels))
    }

    /// `G × H` with `(g, h)` at index `g·|H| + h`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let (m, k) = (g.order, h.order);
        let n = m * k;
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = g.mul(a / k, b / k) * k + h.mul(a % k, b % k);
            }
        }
        let labels = (0..n)
            .map(|a| format!("({},{})", g.label(a / k), h.label(a % k)))
            .collect();
        Self::from_flat(n, table, Some(labels))
    }

    /// The dihedral group of order `2m`: index `i` is `r^i`, index `m + i` is `s·r^i`.
    pub fn dihedral(order: usize) -> Self {
        assert!(order >= 2 && order.is_multiple_of(2));
        let m = order / 2;
        let mul = |a: usize, b: usize| -> usize {
            let (sa, ia) = (a / m, a % m);
            let (sb, ib) = (b / m, b % m);
            match (sa, sb) {
                (0, 0) => (ia + ib) % m,
                (1, 0) => m + (ia + ib) % m,
                (0, 1) => m + (ib + m - ia) % m,
                _ => (ib + m - ia) % m,
            }
        };
        let table = (0..order * order).map(|k| mul(k / order, k % order)).collect();
        let power = |i: usize| match i {
            0 => String::new(),
            1 => "r".to_string(),
            _ => format!("r^{i}"),
        };
        let labels = (0..order)
            .map(|a| {
                if a < m {
                    if a == 0 {
                        "1".into()
                    } else {
                        power(a)
                    }
                } else {
                    format!("s{}", power(a - m))
                }
            })
            .collect();
        Self::from_flat(order, table, Some(labels))
    }

    /// Generalized quaternion group of order `4m`: `a^i b^j` at index `i + 2m·j`,
    /// with `a^{2m} = 1`, `b² = a^m`, `b⁻¹ab = a⁻¹`.
    pub fn quaternion(order: usize) -> Self {
        assert!(order >= 8 && order.is_multiple_of(4));
        let n2 = order / 2;
        let m = order / 4;
        let mul = |x: usize, y: usize| -> usize {
            let (i, j) = (x % n2, x / n2);
            let (k, l) = (y % n2, y / n2);
            if j == 0 {
                (i + k) % n2 + n2 * l
            } else {
                let e = (i + n2 - k) % n2;
                if l == 0 {
                    e + n2
                } else {
                    (e + m) % n2
                }
            }
        };
        let table = (0..order * order).map(|k| mul(k / order, k % order)).collect();
        let labels = (0..order)
            .map(|x| {
                let (i, j) = (x % n2, x / n2);
                let a = match i {
                    0 => String::new(),
                    1 => "a".into(),
                    _ => format!("a^{i}"),
                };
                match (a.is_empty(), j) {
                    (true, 0) => "1".into(),
                    (_, 0) => a,
                    _ => format!("{a}b"),
                }
            })
            .collect();
        Self::from_flat(order, table, Some(labels))
    }

    /// `⟨a, b | a^n, b², b a b = a^t⟩` with `a^i b^j` at index `i + n·j`.
    pub fn metacyclic_involution(n: usize, t: usize) -> Result<Self> {
        if (t * t) % n != 1 % n {
            return Err(Error::invalid("group", format!("t = {t} does not square to 1 mod {n}")));
        }
        let order = 2 * n;
        let twist = |j: usize, k: usize| if j == 0 { k } else { (t * k) % n };
        let labels = (0..order)
            .map(|x| {
                let (i, j) = (x % n, x / n);
                match (i, j) {
                    (0, 0) => "1".into(),
                    (0, _) => "b".into(),
                    (_, 0) => format!("a^{i}"),
                    _ => format!("a^{i}b"),
                }
            })
            .collect();
        Self::from_fn(order, Some(labels), |x, y| {
            let (i, j) = (x % n, x / n);
            let (k, l) = (y % n, y / n);
            (i + twist(j, k)) % n + n * ((j + l) % 2)
        })
    }

    /// `N ⋊ H` with `(n, h)` at index `n + |N|·h` and product
    /// `(n₁,h₁)(n₂,h₂) = (n₁·(h₁·n₂), h₁h₂)`. `act(h, n)` must be an action by automorphisms.
    pub fn semidirect(nn: &FiniteGroup, hh: &FiniteGroup, act: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let (a, b) = (nn.order, hh.order);
        let labels = (0..a * b)
            .map(|x| format!("({},{})", nn.label(x % a), hh.label(x / a)))
            .collect();
        Self::from_fn(a * b, Some(labels), |x, y| {
            let (n1, h1) = (x % a, x / a);
            let (n2, h2) = (y % a, y / a);
            nn.mul(n1, act(h1, n2)) + a * hh.mul(h1, h2)
        })
    }

    /// A group by name: `Z<n>` (or `C<n>`), `F2^<r>`, `D<n>`, `Q<n>`, `SD<n>`,
    /// `M<n>` (dihedral, quaternion, semidihedral and modular of order `n`),
    /// `S<n>`, `Z4:Z4`, `F2^2:Z4`, `Pauli`, and direct products joined by `x`.
    pub fn builtin(name: &str) -> Result<Self> {
        let unknown = || Error::UnknownLabel(name.to_string());
        let factors: Vec<&str> = name.split('x').map(str::trim).collect();
        if factors.len() > 1 {
            let mut g = Self::builtin(factors[0])?;
            for f in &factors[1..] {
                g = Self::direct_product(&g, &Self::builtin(f)?);
            }
            return Ok(g);
        }
        let num = |s: &str| s.parse::<usize>().map_err(|_| unknown());
        let two_power = |n: usize, min: usize| if n.is_power_of_two() && n >= min { Ok(n) } else { Err(unknown()) };
        match name {
            "Z4:Z4" => {
                let z4 = Self::cyclic(4);
                return Self::semidirect(&z4, &z4, |h, n| if h % 2 == 1 { (4 - n) % 4 } else { n });
            }
            "F2^2:Z4" => {
                return Self::semidirect(&Self::elementary_abelian(2), &Self::cyclic(4), |h, n| {
                    if h % 2 == 1 {
                        ((n & 1) << 1) | (n >> 1)
                    } else {
                        n
                    }
                });
            }
            "Pauli" => {
                // (Z4 × Z2) ⋊ Z2 with the involution sending (a, x) to (a + 2x, x)
                let n = Self::direct_product(&Self::cyclic(4), &Self::cyclic(2));
                return Self::semidirect(&n, &Self::cyclic(2), |h, v| {
                    if h == 1 {
                        let (a, x) = (v / 2, v % 2);
                        ((a + 2 * x) % 4) * 2 + x
                    } else {
                        v
                    }
                });
            }
            _ => {}
        }
        if let Some(r) = name.strip_prefix("F2^") {
            let r = num(r)?;
            return if r <= 7 { Ok(Self::elementary_abelian(r)) } else { Err(unknown()) };
        }
        if let Some(n) = name.strip_prefix("SD") {
            let n = two_power(num(n)?, 16)?;
            return Self::metacyclic_involution(n / 2, n / 4 - 1);
        }
        let (head, tail) = name.split_at(name.find(|c: char| c.is_ascii_digit()).ok_or_else(unknown)?);
        let n = num(tail)?;
        match head {
            "Z" | "C" if n >= 1 => Ok(Self::cyclic(n)),
            "D" if n >= 4 && n % 2 == 0 => Ok(Self::dihedral(n)),
            "Q" => Ok(Self::quaternion(two_power(n, 8)?)),
            "M" => {
                let n = two_power(n, 16)?;
                Self::metacyclic_involution(n / 2, n / 4 + 1)
            }
            "S" if (1..=5).contains(&n) => Ok(Self::symmetric(n)),
            _ => Err(unknown()),
        }
    }

    /// The symmetric group on `n ≤ 5` letters, elements ordered by support size and
    /// then by cycle notation. Products compose right to left.
    pub fn symmetric(n: usize) -> Self {
        assert!((1..=5).contains(&n));
        let mut perms: Vec<Vec<usize>> = vec![(0..n).collect()];
        // Heap-free enumeration of all permutations
        fn extend(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
            if prefix.len() == n {
                out.push(prefix.clone());
                return;
            }
            for v in 0..n {
                if !prefix.contains(&v) {
                    prefix.push(v);
                    extend(prefix, n, out);
                    prefix.pop();
                }
            }
        }
        perms.clear();
        extend(&mut Vec::new(), n, &mut perms);
        let notation = |p: &Vec<usize>| -> String {
            let mut seen = vec![false; n];
            let mut s = String::new();
            for start in 0..n {
                if seen[start] || p[start] == start {
                    continue;
                }
                s.push('(');
                let mut x = start;
                while !seen[x] {
                    seen[x] = true;
                    s.push_str(&(x + 1).to_string());
                    x = p[x];
                }
                s.push(')');
            }
            if s.is_empty() {
                "e".into()
            } else {
                s
            }
        };
        perms.sort_by_key(|p| {
            let support = (0..n).filter(|&i| p[i] != i).count();
            (support, notation(p))
        });
        let index: BTreeMap<Vec<usize>, usize> =
            perms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let order = perms.len();
        let mut table = vec![0; order * order];
        for (a, pa) in perms.iter().enumerate() {
            for (b, pb) in perms.iter().enumerate() {
                let prod: Vec<usize> = (0..n).map(|i| pa[pb[i]]).collect();
                table[a * order + b] = index[&prod];
            }
        }
        let labels = perms.iter().map(notation).collect();
        Self::from_flat(order, table, Some(labels))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `x⁻¹ y x`.
    #[inline]
    pub fn conj(&self, x: usize, y: usize) -> usize {
        self.mul(self.mul(self.inv(x), y), x)
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn element_by_label(&self, label: &str) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }

    pub fn is_two_group(&self) -> bool {
        self.order.is_power_of_two()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_central(&self, a: usize) -> bool {
        (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a))
    }

    pub fn center(&self) -> Subgroup {
        Subgroup::from_sorted(self.order, (0..self.order).filter(|&a| self.is_central(a)).collect())
    }

    /// Elements of order exactly 2, ascending.
    pub fn involutions(&self) -> Vec<usize> {
        (1..self.order).filter(|&a| self.mul(a, a) == 0).collect()
    }

    pub fn conjugacy_class(&self, a: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = (0..self.order).map(|x| self.conj(x, a)).collect();
        set.into_iter().collect()
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted(self.order, (0..self.order).collect())
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_sorted(self.order, vec![0])
    }

    /// Subgroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> Subgroup {
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    queue.push_back(y);
                }
            }
        }
        Subgroup::from_mask(member)
    }

    /// Greedy generating set: every element not yet generated, in index order.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut current = self.trivial_subgroup();
        for g in 1..self.order {
            if !current.contains(g) {
                gens.push(g);
                current = self.generated(&gens);
            }
        }
        gens
    }

    /// Validated subgroup from an element list.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup> {
        let mut member = vec![false; self.order];
        for &e in elements {
            if e >= self.order {
                return Err(Error::invalid("subgroup", format!("element {e} out of range")));
            }
            member[e] = true;
        }
        if !member[0] {
            return Err(Error::invalid("subgroup", "missing the identity"));
        }
        let s = Subgroup::from_mask(member);
        for &a in s.elements() {
            for &b in s.elements() {
                if !s.contains(self.mul(a, b)) {
                    return Err(Error::invalid("subgroup", format!("not closed: {a}·{b}")));
                }
            }
        }
        Ok(s)
    }

    /// A witness `(n, x)` with `x⁻¹ n x ∉ N`, or `None` if `N` is normal.
    pub fn normality_witness(&self, n: &Subgroup) -> Option<(usize, usize)> {
        for &e in n.elements() {
            for x in 0..self.order {
                if !n.contains(self.conj(x, e)) {
                    return Some((e, x));
                }
            }
        }
        None
    }

    pub fn is_normal(&self, n: &Subgroup) -> bool {
        self.normality_witness(n).is_none()
    }

    pub fn conjugate_subgroup(&self, s: &Subgroup, x: usize) -> Subgroup {
        let mut member = vec![false; self.order];
        for &e in s.elements() {
            member[self.conj(x, e)] = true;
        }
        Subgroup::from_mask(member)
    }

    pub fn normalizer(&self, s: &Subgroup) -> Subgroup {
        let members = (0..self.order)
            .filter(|&x| s.elements().iter().all(|&e| s.contains(self.conj(x, e))))
            .collect();
        Subgroup::from_sorted(self.order, members)
    }

    /// All subgroups, sorted by order and then by element list.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let cyclic: BTreeSet<Vec<usize>> = (0..self.order)
            .map(|g| self.generated(&[g]).elements().to_vec())
            .collect();
        let cyclic_gens: Vec<usize> = {
            let mut seen = BTreeSet::new();
            (0..self.order)
                .filter(|&g| seen.insert(self.generated(&[g]).elements().to_vec()))
                .collect()
        };
        let mut frontier: Vec<Vec<usize>> = cyclic.into_iter().collect();
        while let Some(s) = frontier.pop() {
            if !found.insert(s.clone()) {
                continue;
            }
            let member: BTreeSet<usize> = s.iter().copied().collect();
            for &g in &cyclic_gens {
                if !member.contains(&g) {
                    let mut gens = s.clone();
                    gens.push(g);
                    let joined = self.generated(&gens).elements().to_vec();
                    if !found.contains(&joined) {
                        frontier.push(joined);
                    }
                }
            }
        }
        let mut out: Vec<Subgroup> = found
            .into_iter()
            .map(|e| Subgroup::from_sorted(self.order, e))
            .collect();
        out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements().cmp(b.elements())));
        out
    }

    pub fn normal_subgroups(&self) -> Vec<Subgroup> {
        self.all_subgroups().into_iter().filter(|s| self.is_normal(s)).collect()
    }

    /// All elementary abelian 2-subgroups including the trivial one, sorted by
    /// order and then by element list.
    pub fn elementary_abelian_subgroups(&self) -> Vec<Subgroup> {
        let invs = self.involutions();
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut frontier = vec![vec![0usize]];
        while let Some(s) = frontier.pop() {
            if !found.insert(s.clone()) {
                continue;
            }
            let member: BTreeSet<usize> = s.iter().copied().collect();
            for &t in &invs {
                if member.contains(&t) || !s.iter().all(|&e| self.mul(e, t) == self.mul(t, e)) {
                    continue;
                }
                let mut next: BTreeSet<usize> = member.clone();
                for &e in &s {
                    next.insert(self.mul(e, t));
                }
                let next: Vec<usize> = next.into_iter().collect();
                if !found.contains(&next) {
                    frontier.push(next);
                }
            }
        }
        let mut out: Vec<Subgroup> = found
            .into_iter()
            .map(|e| Subgroup::from_sorted(self.order, e))
            .collect();
        out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements().cmp(b.elements())));
        out
    }

    /// A 2-Sylow subgroup, grown from the trivial group by adjoining the
    /// least-index element of the normalizer whose square already lies inside.
    pub fn sylow2(&self) -> Subgroup {
        let target = 1usize << self.order.trailing_zeros();
        let mut p = self.trivial_subgroup();
        while p.order() < target {
            let norm = self.normalizer(&p);
            let g = norm
                .elements()
                .iter()
                .copied()
                .find(|&g| !p.contains(g) && p.contains(self.mul(g, g)))
                .expect("a larger 2-subgroup exists below the Sylow order");
            let mut gens = p.elements().to_vec();
            gens.push(g);
            p = self.generated(&gens);
        }
        p
    }

    /// The subgroup as a group of its own, element `i` being `s.elements()[i]`.
    pub fn subgroup_as_group(&self, s: &Subgroup) -> (FiniteGroup, Vec<usize>) {
        let els = s.elements().to_vec();
        let pos: BTreeMap<usize, usize> = els.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let k = els.len();
        let mut table = vec![0; k * k];
        for (i, &a) in els.iter().enumerate() {
            for (j, &b) in els.iter().enumerate() {
                table[i * k + j] = pos[&self.mul(a, b)];
            }
        }
        let labels = els.iter().map(|&e| self.label(e)).collect();
        (Self::from_flat(k, table, Some(labels)), els)
    }
}

/// A subgroup stored as a sorted element list with a membership mask.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subgroup {
    elements: Vec<usize>,
    member: Vec<bool>,
}

impl Subgroup {
    fn from_mask(member: Vec<bool>) -> Self {
        let elements = (0..member.len()).filter(|&i| member[i]).collect();
        Subgroup { elements, member }
    }

    fn from_sorted(order: usize, elements: Vec<usize>) -> Self {
        let mut member = vec![false; order];
        for &e in &elements {
            member[e] = true;
        }
        Subgroup { elements, member }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn contains(&self, g: usize) -> bool {
        self.member.get(g).copied().unwrap_or(false)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&e| other.contains(e))
    }
}

/// A verified homomorphism between table groups.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    map: Vec<usize>,
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupHom({:?})", self.map)
    }
}

impl GroupHom {
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.order() {
            return Err(Error::invalid(
                "hom",
                format!("map has {} entries for source of order {}", map.len(), source.order()),
            ));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= target.order()) {
            return Err(Error::invalid("hom", format!("image {bad} out of range")));
        }
        if map[0] != 0 {
            return Err(Error::invalid("hom", "identity is not sent to the identity"));
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(Error::invalid("hom", format!("not multiplicative at ({a}, {b})")));
                }
            }
        }
        Ok(GroupHom { source, target, map })
    }

    /// Skips verification; callers guarantee the hom property.
    pub(crate) fn new_unchecked(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, map: Vec<usize>) -> Self {
        debug_assert_eq!(map.len(), source.order());
        GroupHom { source, target, map }
    }

    pub fn identity(g: Arc<FiniteGroup>) -> Self {
        let map = (0..g.order()).collect();
        GroupHom {
            source: g.clone(),
            target: g,
            map,
        }
    }

    /// Inclusion of a subgroup presented by [`FiniteGroup::subgroup_as_group`].
    pub fn inclusion(g: Arc<FiniteGroup>, s: &Subgroup) -> (Arc<FiniteGroup>, Self) {
        let (h, els) = g.subgroup_as_group(s);
        let h = Arc::new(h);
        (h.clone(), GroupHom::new_unchecked(h, g, els))
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, g: usize) -> usize {
        self.map[g]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.target != other.source {
            return Err(Error::invalid("hom", "composition of incompatible maps"));
        }
        Ok(GroupHom {
            source: self.source.clone(),
            target: other.target.clone(),
            map: self.map.iter().map(|&x| other.map[x]).collect(),
        })
    }

    pub fn image(&self) -> Subgroup {
        let mut member = vec![false; self.target.order()];
        for &y in &self.map {
            member[y] = true;
        }
        Subgroup::from_mask(member)
    }

    pub fn kernel(&self) -> Subgroup {
        Subgroup::from_sorted(
            self.source.order(),
            (0..self.source.order()).filter(|&g| self.map[g] == 0).collect(),
        )
    }

    pub fn is_surjective(&self) -> bool {
        self.image().order() == self.target.order()
    }

    pub fn surjectivity_witness(&self) -> Option<usize> {
        let im = self.image();
        (0..self.target.order()).find(|&y| !im.contains(y))
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().order() == 1
    }

    /// Least-index preimage of each element in the image.
    pub fn least_preimages(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.target.order()];
        for (g, &y) in self.map.iter().enumerate() {
            if out[y].is_none() {
                out[y] = Some(g);
            }
        }
        out
    }
}

/// Every homomorphism `G → A`, in lexicographic order of generator images.
pub fn homomorphisms(g: &Arc<FiniteGroup>, a: &Arc<FiniteGroup>) -> Vec<GroupHom> {
    let gens = g.generating_set();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            let o = g.element_order(s);
            (0..a.order()).filter(|&t| o.is_multiple_of(a.element_order(t))).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let images: Vec<usize> = choice.iter().enumerate().map(|(i, &c)| candidates[i][c]).collect();
        if let Some(map) = extend_to_hom(g, a, &gens, &images) {
            out.push(GroupHom::new_unchecked(g.clone(), a.clone(), map));
        }
        // odometer with the last generator fastest
        let mut k = gens.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

/// Extends generator images to a homomorphism if one exists.
pub fn extend_to_hom(g: &FiniteGroup, a: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    const UNSET: usize = usize::MAX;
    let mut map = vec![UNSET; g.order()];
    map[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (&s, &t) in gens.iter().zip(images) {
            let y = g.mul(x, s);
            let v = a.mul(map[x], t);
            if map[y] == UNSET {
                map[y] = v;
                queue.push_back(y);
            } else if map[y] != v {
                return None;
            }
        }
    }
    if map.contains(&UNSET) {
        return None;
    }
    Some(map)
}

/// Conjugacy classes of involutions with least-index representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutionData {
    pub involutions: Vec<usize>,
    /// Each class sorted ascending; classes sorted by representative.
    pub classes: Vec<Vec<usize>>,
}

impl InvolutionData {
    pub fn representatives(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c[0]).collect()
    }

    pub fn class_of(&self, g: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.binary_search(&g).is_ok())
    }
}

pub fn involution_data(g: &FiniteGroup) -> InvolutionData {
    let involutions = g.involutions();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &t in &involutions {
        if classes.iter().any(|c| c.binary_search(&t).is_ok()) {
            continue;
        }
        classes.push(g.conjugacy_class(t));
    }
    InvolutionData { involutions, classes }
}

/// The outcome of [`sylow_transfer`].
#[derive(Clone, Debug)]
pub struct SylowTransfer {
    pub sylow: Subgroup,
    pub conjugator: usize,
    /// `h⁻¹ x h`.
    pub conjugate: usize,
}

/// A 2-Sylow `P` of the source and the least-index `h` with `h⁻¹xh ∈ P` and
/// `f(h⁻¹xh) = f(x)`.
pub fn sylow_transfer(f: &GroupHom, x: usize) -> Result<SylowTransfer> {
    let c = f.source();
    if !f.target().is_two_group() {
        return Err(Error::NotTwoGroup {
            order: f.target().order(),
        });
    }
    if let Some(missing) = f.surjectivity_witness() {
        return Err(Error::NotSurjective { missing });
    }
    if x >= c.order() || c.mul(x, x) != 0 {
        return Err(Error::NotInvolution { element: x });
    }
    let p = c.sylow2();
    let image: BTreeSet<usize> = p.elements().iter().map(|&e| f.apply(e)).collect();
    assert_eq!(image.len(), f.target().order(), "restriction to the Sylow subgroup is onto");
    let h = (0..c.order())
        .find(|&h| {
            let y = c.conj(h, x);
            p.contains(y) && f.apply(y) == f.apply(x)
        })
        .expect("a conjugator into the Sylow subgroup preserving the image exists");
    let conjugate = c.conj(h, x);
    Ok(SylowTransfer {
        sylow: p,
        conjugator: h,
        conjugate,
    })
}

/// `G / N` with cosets indexed by ascending least representative.
pub fn group_quotient(g: &Arc<FiniteGroup>, n: &Subgroup) -> Result<(Arc<FiniteGroup>, GroupHom)> {
    if let Some((element, conjugator)) = g.normality_witness(n) {
        return Err(Error::NotNormal { element, conjugator });
    }
    let order = g.order();
    let mut coset_of = vec![usize::MAX; order];
    let mut reps = Vec::new();
    for x in 0..order {
        if coset_of[x] == usize::MAX {
            let idx = reps.len();
            reps.push(x);
            for &e in n.elements() {
                coset_of[g.mul(x, e)] = idx;
            }
        }
    }
    let k = reps.len();
    let mut table = vec![0; k * k];
    for i in 0..k {
        for j in 0..k {
            table[i * k + j] = coset_of[g.mul(reps[i], reps[j])];
        }
    }
    let labels = reps.iter().map(|&r| g.label(r)).collect();
    let q = Arc::new(FiniteGroup::from_flat(k, table, Some(labels)));
    let hom = GroupHom::new_unchecked(g.clone(), q.clone(), coset_of);
    Ok((q, hom))
}

/// `G` modulo squares and commutators, returned as `F₂^r` with bitmask indices.
///
/// The basis is chosen greedily: the least-index element of `G` whose image is
/// outside the span found so far becomes the next basis vector.
pub fn abelian_2torsion_quotient(g: &Arc<FiniteGroup>) -> (Arc<FiniteGroup>, GroupHom) {
    let mut gens: Vec<usize> = (0..g.order()).map(|a| g.mul(a, a)).collect();
    for a in 0..g.order() {
        for b in 0..a {
            gens.push(g.commutator(a, b));
        }
    }
    gens.sort_unstable();
    gens.dedup();
    let n = g.generated(&gens);
    let (q, proj) = group_quotient(g, &n).expect("squares and commutators form a normal subgroup");
    // coordinates on the quotient by greedy basis choice
    let mut mask = vec![usize::MAX; q.order()];
    mask[0] = 0;
    let mut rank = 0;
    for a in 0..g.order() {
        let c = proj.apply(a);
        if mask[c] != usize::MAX {
            continue;
        }
        let bit = 1usize << rank;
        rank += 1;
        let known: Vec<(usize, usize)> = (0..q.order())
            .filter(|&y| mask[y] != usize::MAX)
            .map(|y| (y, mask[y]))
            .collect();
        for (y, m) in known {
            mask[q.mul(y, c)] = m | bit;
        }
    }
    let e = Arc::new(FiniteGroup::elementary_abelian(rank));
    let map = (0..g.order()).map(|a| mask[proj.apply(a)]).collect();
    (e.clone(), GroupHom::new_unchecked(g.clone(), e, map))
}

/// Objects and conjugation morphisms of the elementary abelian 2-subgroups.
#[derive(Clone, Debug)]
pub struct ElementaryAbelianCategory {
    pub objects: Vec<Subgroup>,
    pub morphisms: Vec<ConjugationMorphism>,
    pub rank: usize,
}

/// `y ↦ x⁻¹ y x` from `objects[source]` into `objects[target]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugationMorphism {
    pub source: usize,
    pub target: usize,
    pub conjugator: usize,
    /// Images of the elements of the source object in order.
    pub map: Vec<usize>,
}

impl ElementaryAbelianCategory {
    pub fn object_index(&self, s: &Subgroup) -> Option<usize> {
        self.objects.iter().position(|o| o == s)
    }

    /// Looks up the morphism with the given source, target and element map.
    pub fn find(&self, source: usize, target: usize, map: &[usize]) -> Option<&ConjugationMorphism> {
        self.morphisms
            .iter()
            .find(|m| m.source == source && m.target == target && m.map == map)
    }
}

pub fn elementary_abelian_category(g: &FiniteGroup) -> ElementaryAbelianCategory {
    let objects = g.elementary_abelian_subgroups();
    let rank = objects.iter().map(|o| o.order().trailing_zeros() as usize).max().unwrap_or(0);
    let mut morphisms = Vec::new();
    for (i, a) in objects.iter().enumerate() {
        let mut images: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for x in 0..g.order() {
            let map: Vec<usize> = a.elements().iter().map(|&y| g.conj(x, y)).collect();
            images.entry(map).or_insert(x);
        }
        for (j, b) in objects.iter().enumerate() {
            if b.order() < a.order() {
                continue;
            }
            for (map, &x) in &images {
                if map.iter().all(|&y| b.contains(y)) {
                    morphisms.push(ConjugationMorphism {
                        source: i,
                        target: j,
                        conjugator: x,
                        map: map.clone(),
                    });
                }
            }
        }
    }
    ElementaryAbelianCategory {
        objects,
        morphisms,
        rank,
    }
}
