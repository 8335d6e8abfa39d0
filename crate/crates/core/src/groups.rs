//! Finite groups given by multiplication tables, their subgroups and
//! quotients, linear characters, representations over a prime field, the
//! averaging projector, and irreducible representations of split group
//! algebras.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{intertwiners, stack_rows, Mat, Prime};

/// A finite group stored as a validated Cayley table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    unit: usize,
    inverse: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order {}, {:?})", self.order(), self.names)
    }
}

impl FiniteGroup {
    /// Validates a Cayley table. The first violated axiom is reported.
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if names.len() != n {
            return Err(Error::InvalidGroup(format!("{} names for a table of order {n}", names.len())));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {i} has length {} (expected {n})", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidGroup(format!("row {i} contains out-of-range index {bad}")));
            }
        }
        for i in 0..n {
            let mut seen = vec![false; n];
            for &v in &table[i] {
                if seen[v] {
                    return Err(Error::InvalidGroup(format!("not a Latin square: row {i} ({}) repeats {v} ({})", names[i], names[v])));
                }
                seen[v] = true;
            }
            let mut seen = vec![false; n];
            for row in &table {
                let v = row[i];
                if seen[v] {
                    return Err(Error::InvalidGroup(format!("not a Latin square: column {i} ({}) repeats {v} ({})", names[i], names[v])));
                }
                seen[v] = true;
            }
        }
        let unit = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::InvalidGroup("no two-sided unit".into()))?;
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| table[a][b] == unit && table[b][a] == unit)
                .ok_or_else(|| Error::InvalidGroup(format!("element {a} ({}) has no inverse", names[a])))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "not associative at ({}, {}, {}) = ({a}, {b}, {c})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup { names, table, unit, inverse })
    }

    /// Group generated by permutations of `0..degree` (given as image lists),
    /// with product `(a * b)(i) = b(a(i))`. Element 0 is the identity; the
    /// rest are listed in breadth-first order over the generators.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> Result<Self> {
        for (k, g) in generators.iter().enumerate() {
            let set: BTreeSet<usize> = g.iter().copied().collect();
            if g.len() != degree || set.len() != degree || set.iter().any(|&v| v >= degree) {
                return Err(Error::InvalidGroup(format!("generator {k} is not a permutation of 0..{degree}")));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { a.iter().map(|&i| b[i]).collect() };
        let mut elems = vec![id.clone()];
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let next = compose(&elems[i], g);
                if !index.contains_key(&next) {
                    index.insert(next.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(next);
                }
            }
        }
        let n = elems.len();
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| index[&compose(&elems[a], &elems[b])]).collect()).collect();
        let names = elems.iter().map(|e| cycle_name(e)).collect();
        FiniteGroup::from_table(names, table)
    }

    pub fn cyclic(n: usize) -> Self {
        let names = (0..n).map(|k| if k == 0 { "e".to_string() } else { format!("g{k}") }).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(names, table).expect("cyclic table is a group")
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            let mut t: Vec<usize> = (0..n).collect();
            t.swap(0, 1);
            gens.push(t);
        }
        if n >= 3 {
            gens.push((0..n).map(|i| (i + 1) % n).collect());
        }
        FiniteGroup::from_permutations(n, &gens).expect("symmetric group generators")
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order(), b.order());
        let names = (0..na * nb).map(|k| format!("({},{})", a.names[k / nb], b.names[k % nb])).collect();
        let table = (0..na * nb).map(|x| (0..na * nb).map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)).collect()).collect();
        FiniteGroup::from_table(names, table).expect("direct product of groups is a group")
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn unit(&self) -> usize {
        self.unit
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.unit {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        self.elements().map(|a| self.element_order(a)).fold(1, lcm)
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order()];
        let mut classes = Vec::new();
        for g in self.elements() {
            if seen[g] {
                continue;
            }
            let class: BTreeSet<usize> = self.elements().map(|h| self.mul(self.mul(self.inv(h), g), h)).collect();
            for &c in &class {
                seen[c] = true;
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }

    /// Checks that `map: self -> target` is a homomorphism; reports the first failing pair.
    pub fn check_homomorphism(&self, target: &FiniteGroup, map: &[usize]) -> Result<()> {
        if map.len() != self.order() || map.iter().any(|&v| v >= target.order()) {
            return Err(Error::Precondition("homomorphism map has the wrong length or range".into()));
        }
        for a in self.elements() {
            for b in self.elements() {
                if map[self.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(Error::Precondition(format!("not a homomorphism at ({}, {})", self.name(a), self.name(b))));
                }
            }
        }
        Ok(())
    }
}

fn cycle_name(perm: &[usize]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            continue;
        }
        let mut cyc = vec![start];
        seen[start] = true;
        let mut x = perm[start];
        while x != start {
            seen[x] = true;
            cyc.push(x);
            x = perm[x];
        }
        let body: Vec<String> = cyc.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("({})", body.join(" ")));
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// A subgroup, stored as a sorted set of element indices of its parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    elements: Vec<usize>,
}

impl Subgroup {
    /// Validates closure, unit and inverses of an explicit element set.
    pub fn new(parent: Arc<FiniteGroup>, elements: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set: BTreeSet<usize> = elements.into_iter().collect();
        if set.iter().any(|&a| a >= parent.order()) {
            return Err(Error::InvalidGroup("subgroup element out of range".into()));
        }
        if !set.contains(&parent.unit()) {
            return Err(Error::InvalidGroup("subgroup does not contain the unit".into()));
        }
        for &a in &set {
            if !set.contains(&parent.inv(a)) {
                return Err(Error::InvalidGroup(format!("subgroup not closed under inverse at {}", parent.name(a))));
            }
            for &b in &set {
                if !set.contains(&parent.mul(a, b)) {
                    return Err(Error::InvalidGroup(format!("subgroup not closed at ({}, {})", parent.name(a), parent.name(b))));
                }
            }
        }
        Ok(Subgroup { parent, elements: set.into_iter().collect() })
    }

    /// Subgroup generated by the given elements, by closure.
    pub fn generated_by(parent: Arc<FiniteGroup>, gens: &[usize]) -> Self {
        let mut set = BTreeSet::from([parent.unit()]);
        let mut queue: VecDeque<usize> = VecDeque::from([parent.unit()]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = parent.mul(x, g);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        Subgroup { parent, elements: set.into_iter().collect() }
    }

    pub fn trivial(parent: Arc<FiniteGroup>) -> Self {
        let e = parent.unit();
        Subgroup { parent, elements: vec![e] }
    }

    pub fn whole(parent: Arc<FiniteGroup>) -> Self {
        let elements = parent.elements().collect();
        Subgroup { parent, elements }
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.order()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.elements.binary_search(&a).is_ok()
    }

    pub fn is_normal(&self) -> bool {
        let g = &self.parent;
        self.elements.iter().all(|&h| g.elements().all(|x| self.contains(g.mul(g.mul(g.inv(x), h), x))))
    }

    /// The subgroup as a group in its own right, with the embedding into the parent.
    pub fn as_group(&self) -> (Arc<FiniteGroup>, Vec<usize>) {
        let g = &self.parent;
        let pos = |a: usize| self.elements.binary_search(&a).expect("closed subgroup");
        let names = self.elements.iter().map(|&a| g.name(a).to_string()).collect();
        let table = self.elements.iter().map(|&a| self.elements.iter().map(|&b| pos(g.mul(a, b))).collect()).collect();
        let group = FiniteGroup::from_table(names, table).expect("a subgroup is a group");
        (Arc::new(group), self.elements.clone())
    }

    /// Right coset representatives `g_1 = e, g_2, ...` of `H` in `G`, each the
    /// first element (in parent order) of its coset `H g`.
    pub fn right_coset_reps(&self) -> Vec<usize> {
        let g = &self.parent;
        let mut assigned = vec![false; g.order()];
        let mut reps = Vec::new();
        let order = std::iter::once(g.unit()).chain(g.elements().filter(|&a| a != g.unit()));
        for x in order {
            if assigned[x] {
                continue;
            }
            reps.push(x);
            for &h in &self.elements {
                assigned[g.mul(h, x)] = true;
            }
        }
        reps
    }

    /// For a right transversal `reps`, writes `x = h * reps[j]` and returns `(h, j)`.
    pub fn decompose(&self, reps: &[usize], x: usize) -> (usize, usize) {
        let g = &self.parent;
        for (j, &r) in reps.iter().enumerate() {
            let h = g.mul(x, g.inv(r));
            if self.contains(h) {
                return (h, j);
            }
        }
        unreachable!("transversal does not cover {}", g.name(x))
    }
}

/// Subgroup generated by all commutators.
pub fn commutator_subgroup(g: &Arc<FiniteGroup>) -> Subgroup {
    let comms: BTreeSet<usize> = g.elements().flat_map(|a| g.elements().map(move |b| (a, b))).map(|(a, b)| g.commutator(a, b)).collect();
    let comms: Vec<usize> = comms.into_iter().collect();
    Subgroup::generated_by(g.clone(), &comms)
}

/// A quotient `G/N` with its projection and coset representatives.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: Arc<FiniteGroup>,
    /// `projection[g]` is the coset index of `g`.
    pub projection: Vec<usize>,
    /// `reps[0]` is the unit of `G`.
    pub reps: Vec<usize>,
}

pub fn quotient_group(n: &Subgroup) -> Result<Quotient> {
    if !n.is_normal() {
        return Err(Error::Precondition("subgroup is not normal".into()));
    }
    let g = n.parent();
    let reps = n.right_coset_reps();
    let projection: Vec<usize> = g.elements().map(|x| n.decompose(&reps, x).1).collect();
    let k = reps.len();
    let names = reps.iter().map(|&r| g.name(r).to_string()).collect();
    let table = (0..k).map(|i| (0..k).map(|j| projection[g.mul(reps[i], reps[j])]).collect()).collect();
    let group = Arc::new(FiniteGroup::from_table(names, table)?);
    Ok(Quotient { group, projection, reps })
}

/// A linear character `G -> F_p^x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    pub group: Arc<FiniteGroup>,
    pub p: Prime,
    pub values: Vec<u32>,
}

impl Character {
    pub fn trivial(group: Arc<FiniteGroup>, p: Prime) -> Self {
        let values = vec![1; group.order()];
        Character { group, p, values }
    }

    pub fn value(&self, g: usize) -> u32 {
        self.values[g]
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 1)
    }

    pub fn product(&self, other: &Character) -> Character {
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| self.p.mul(a, b)).collect();
        Character { group: self.group.clone(), p: self.p, values }
    }

    pub fn inverse(&self) -> Character {
        let values = self.values.iter().map(|&a| self.p.inv(a).expect("character values are units")).collect();
        Character { group: self.group.clone(), p: self.p, values }
    }

    pub fn is_homomorphism(&self) -> bool {
        let g = &self.group;
        self.values[g.unit()] == 1
            && g.elements().all(|a| g.elements().all(|b| self.values[g.mul(a, b)] == self.p.mul(self.values[a], self.values[b])))
    }

    pub fn as_rep(&self) -> Rep {
        let matrices = self.values.iter().map(|&v| Mat::scalar(self.p, 1, v)).collect();
        Rep { group: self.group.clone(), p: self.p, dim: 1, matrices }
    }
}

fn require_coprime(g: &FiniteGroup, p: Prime) -> Result<()> {
    if g.order().is_multiple_of(p.get() as usize) {
        return Err(Error::Precondition(format!("p = {p} divides |G| = {}", g.order())));
    }
    Ok(())
}

/// All homomorphisms `G -> F_p^x`, trivial first, then sorted by value list.
///
/// Enumerated by assigning roots of unity to a generating set of the
/// abelianization and keeping the consistent assignments.
pub fn characters(g: &Arc<FiniteGroup>, p: Prime) -> Result<Vec<Character>> {
    require_coprime(g, p)?;
    let q = quotient_group(&commutator_subgroup(g))?;
    let ab = &q.group;
    let e = ab.exponent();
    let roots: Vec<u32> = (1..p.get()).filter(|&x| p.pow(x, e as u64) == 1).collect();

    let mut gens: Vec<usize> = Vec::new();
    let mut span = Subgroup::trivial(ab.clone());
    for x in ab.elements() {
        if !span.contains(x) {
            gens.push(x);
            span = Subgroup::generated_by(ab.clone(), &gens);
        }
    }

    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let mut vals: Vec<Option<u32>> = vec![None; ab.order()];
        vals[ab.unit()] = Some(1);
        let mut queue = VecDeque::from([ab.unit()]);
        let mut ok = true;
        'bfs: while let Some(x) = queue.pop_front() {
            for (k, &gen) in gens.iter().enumerate() {
                let y = ab.mul(x, gen);
                let v = p.mul(vals[x].unwrap(), roots[choice[k]]);
                match vals[y] {
                    None => {
                        vals[y] = Some(v);
                        queue.push_back(y);
                    }
                    Some(w) if w != v => {
                        ok = false;
                        break 'bfs;
                    }
                    _ => {}
                }
            }
        }
        if ok {
            let vals: Vec<u32> = vals.into_iter().map(|v| v.expect("generators span")).collect();
            let chi = Character { group: g.clone(), p, values: g.elements().map(|x| vals[q.projection[x]]).collect() };
            if chi.is_homomorphism() {
                out.push(chi);
            }
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                out.sort_by(|a, b| (!a.is_trivial(), &a.values).cmp(&(!b.is_trivial(), &b.values)));
                return Ok(out);
            }
            choice[k] += 1;
            if choice[k] < roots.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// The character group `G^*` as an abstract group; element `i` is `chars[i]`.
pub fn character_group(chars: &[Character]) -> Result<Arc<FiniteGroup>> {
    let n = chars.len();
    let find = |c: &Character| chars.iter().position(|d| d.values == c.values);
    let mut table = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            table[i][j] =
                find(&chars[i].product(&chars[j])).ok_or_else(|| Error::Invariant("character list is not closed under product".into()))?;
        }
    }
    let names = (0..n).map(|i| format!("chi{i}")).collect();
    Ok(Arc::new(FiniteGroup::from_table(names, table)?))
}

/// A representation `G -> GL(V)^op`: row vectors, `rho(g) * rho(h) == rho(g h)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rep {
    pub group: Arc<FiniteGroup>,
    pub p: Prime,
    pub dim: usize,
    pub matrices: Vec<Mat>,
}

impl Rep {
    pub fn new(group: Arc<FiniteGroup>, p: Prime, matrices: Vec<Mat>) -> Result<Self> {
        let dim = matrices.first().map_or(0, |m| m.rows());
        let rep = Rep { group, p, dim, matrices };
        rep.validate()?;
        Ok(rep)
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.group;
        if self.matrices.len() != g.order() {
            return Err(Error::Invariant(format!("{} matrices for a group of order {}", self.matrices.len(), g.order())));
        }
        for (a, m) in self.matrices.iter().enumerate() {
            if m.rows() != self.dim || m.cols() != self.dim || m.modulus() != self.p {
                return Err(Error::Dimension(format!("matrix for {} has the wrong shape", g.name(a))));
            }
        }
        if !self.matrices[g.unit()].is_identity() {
            return Err(Error::Invariant("rho(e) is not the identity".into()));
        }
        for a in g.elements() {
            for b in g.elements() {
                if &self.matrices[a] * &self.matrices[b] != self.matrices[g.mul(a, b)] {
                    return Err(Error::Invariant(format!("rho({}) rho({}) != rho({}{})", g.name(a), g.name(b), g.name(a), g.name(b))));
                }
            }
        }
        Ok(())
    }

    pub fn trivial(group: Arc<FiniteGroup>, p: Prime) -> Self {
        Character::trivial(group, p).as_rep()
    }

    /// Right regular representation: `e_x * g = e_{xg}`.
    pub fn regular(group: Arc<FiniteGroup>, p: Prime) -> Self {
        let n = group.order();
        let matrices = group.elements().map(|g| Mat::from_fn(p, n, n, |x, y| u32::from(group.mul(x, g) == y))).collect();
        Rep { group, p, dim: n, matrices }
    }

    /// Permutation representation on right cosets `H g_i` (basis ordered as `right_coset_reps`).
    pub fn coset_permutation(h: &Subgroup, p: Prime) -> Self {
        let group = h.parent().clone();
        let reps = h.right_coset_reps();
        let n = reps.len();
        let matrices =
            group.elements().map(|g| Mat::from_fn(p, n, n, |i, j| u32::from(h.decompose(&reps, group.mul(reps[i], g)).1 == j))).collect();
        Rep { group, p, dim: n, matrices }
    }

    pub fn matrix(&self, g: usize) -> &Mat {
        &self.matrices[g]
    }

    pub fn tensor(&self, other: &Rep) -> Result<Rep> {
        let matrices = self.matrices.iter().zip(&other.matrices).map(|(a, b)| a.kron(b)).collect::<Result<Vec<_>>>()?;
        Ok(Rep { group: self.group.clone(), p: self.p, dim: self.dim * other.dim, matrices })
    }

    pub fn traces(&self) -> Vec<u32> {
        self.matrices.iter().map(|m| (0..self.dim).fold(0, |acc, i| self.p.add(acc, m.get(i, i)))).collect()
    }

    pub fn endomorphism_dim(&self) -> usize {
        intertwiners(self.p, self.dim, self.dim, self.matrices.iter().map(|m| (m, m))).len()
    }

    /// Image of a group-algebra element `sum_g c_g g` acting on the representation.
    pub fn act_group_algebra(&self, coeffs: &[u32]) -> Mat {
        let mut out = Mat::zeros(self.p, self.dim, self.dim);
        for (g, &c) in coeffs.iter().enumerate() {
            out.add_scaled(&self.matrices[g], c);
        }
        out
    }
}

/// The averaging projector `(1/|G|) * sum_g rho(g)` onto the fixed vectors.
pub fn reynolds(r: &Rep) -> Result<Mat> {
    require_coprime(&r.group, r.p)?;
    let inv = r.p.inv(r.p.residue(r.group.order())).expect("coprime order");
    let coeffs = vec![inv; r.group.order()];
    Ok(r.act_group_algebra(&coeffs))
}

/// An irreducible representation together with its block data.
#[derive(Clone, Debug)]
pub struct Irreducible {
    pub rep: Rep,
    /// Multiplicity in the regular representation (equals the dimension).
    pub multiplicity: usize,
    /// Central primitive idempotent of the block, as group-algebra coefficients.
    pub idempotent: Vec<u32>,
}

fn ga_mul(g: &FiniteGroup, p: Prime, x: &[u32], y: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; g.order()];
    for (a, &xa) in x.iter().enumerate() {
        if xa == 0 {
            continue;
        }
        for (b, &yb) in y.iter().enumerate() {
            if yb == 0 {
                continue;
            }
            let c = g.mul(a, b);
            out[c] = p.add(out[c], p.mul(xa, yb));
        }
    }
    out
}

fn ga_basis_elem(n: usize, g: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[g] = 1;
    v
}

/// Coordinates of each `f(b_k)` in the echelon basis `basis` (rows).
fn operator_on(basis: &Mat, images: Vec<Vec<u32>>) -> Mat {
    let p = basis.modulus();
    let img = stack_rows(p, basis.cols(), images);
    basis.solve_left(&img).expect("shapes agree").expect("image lies in the subspace")
}

/// Complete set of irreducible representations of `G` over `F_p`.
///
/// Requires `p = 1 mod exp(G)`. Blocks are found by splitting the centre of
/// the group algebra with random central elements; inside each block a
/// simple right ideal is cut out by the kernel of a random element whose
/// eigenvalue has geometric multiplicity one on a simple module.
pub fn irreducibles(g: &Arc<FiniteGroup>, p: Prime, seed: u64) -> Result<Vec<Irreducible>> {
    let n = g.order();
    let exp = g.exponent();
    if (p.get() as usize) % exp != 1 % exp {
        return Err(Error::Precondition(format!("p = {p} is not 1 mod exp(G) = {exp}; choose a larger prime with p = 1 mod {exp}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes = g.conjugacy_classes();
    let class_sums: Vec<Vec<u32>> = classes.iter().map(|c| (0..n).map(|x| u32::from(c.contains(&x))).collect()).collect();
    let one = ga_basis_elem(n, g.unit());

    let mut done: Vec<Vec<u32>> = Vec::new();
    let mut pending = vec![one.clone()];
    let budget = 64;
    while let Some(e) = pending.pop() {
        let ideal = stack_rows(p, n, class_sums.iter().map(|c| ga_mul(g, p, &e, c))).row_basis();
        let r = ideal.rows();
        if r == 1 {
            done.push(e);
            continue;
        }
        let mut split = false;
        for _ in 0..budget {
            let mut z = vec![0u32; n];
            for c in &class_sums {
                let coef = rng.gen_range(0..p.get());
                for (zi, &ci) in z.iter_mut().zip(c) {
                    *zi = p.add(*zi, p.mul(coef, ci));
                }
            }
            let w = ga_mul(g, p, &e, &z);
            let op = operator_on(&ideal, (0..r).map(|k| ga_mul(g, p, &w, ideal.row(k))).collect());
            let eigen: Vec<u32> = (0..p.get()).filter(|&t| (&op - &Mat::scalar(p, r, t)).rank() < r).collect();
            if eigen.len() < 2 {
                continue;
            }
            for &t in &eigen {
                let mut idem = e.clone();
                for &s in eigen.iter().filter(|&&s| s != t) {
                    let denom = p.inv(p.sub(t, s)).expect("distinct eigenvalues");
                    let factor: Vec<u32> = w.iter().zip(&e).map(|(&wi, &ei)| p.mul(p.sub(wi, p.mul(s, ei)), denom)).collect();
                    idem = ga_mul(g, p, &idem, &factor);
                }
                if ga_mul(g, p, &idem, &idem) != idem {
                    return Err(Error::Invariant("eigen-idempotent is not idempotent; centre is not split".into()));
                }
                pending.push(idem);
            }
            split = true;
            break;
        }
        if !split {
            return Err(Error::Invariant(format!("failed to split a central ideal of dimension {r}")));
        }
    }

    let mut out = Vec::new();
    for e in done {
        let block = stack_rows(p, n, g.elements().map(|x| ga_mul(g, p, &e, &ga_basis_elem(n, x)))).row_basis();
        let bdim = block.rows();
        let d = (1..=bdim).find(|d| d * d >= bdim).unwrap_or(0);
        if d * d != bdim {
            return Err(Error::Invariant(format!("block dimension {bdim} is not a square")));
        }
        let simple = simple_in_block(g, p, &e, &block, d, &mut rng)?;
        let rep = Rep::new(g.clone(), p, simple)?;
        if rep.endomorphism_dim() != 1 {
            return Err(Error::Invariant("irreducible is not absolutely irreducible".into()));
        }
        out.push(Irreducible { rep, multiplicity: d, idempotent: e });
    }
    out.sort_by(|a, b| {
        let ka = (a.rep.dim, !a.rep.traces().iter().all(|&t| t == 1), a.rep.traces());
        let kb = (b.rep.dim, !b.rep.traces().iter().all(|&t| t == 1), b.rep.traces());
        ka.cmp(&kb)
    });
    let total: usize = out.iter().map(|i| i.rep.dim * i.rep.dim).sum();
    if total != n {
        return Err(Error::Invariant(format!("sum of squared dimensions {total} != |G| = {n}")));
    }
    Ok(out)
}

fn simple_in_block(g: &FiniteGroup, p: Prime, e: &[u32], block: &Mat, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Mat>> {
    let n = g.order();
    let bdim = block.rows();
    for _ in 0..256 {
        let coeffs: Vec<u32> = (0..bdim).map(|_| rng.gen_range(0..p.get())).collect();
        let c = block.apply_row(&coeffs);
        let right = operator_on(block, (0..bdim).map(|k| ga_mul(g, p, block.row(k), &c)).collect());
        let Some(t) = (0..p.get()).find(|&t| bdim - (&right - &Mat::scalar(p, bdim, t)).rank() == d) else {
            continue;
        };
        let shifted: Vec<u32> = c.iter().zip(e).map(|(&ci, &ei)| p.sub(ci, p.mul(t, ei))).collect();
        let op = operator_on(block, (0..bdim).map(|k| ga_mul(g, p, block.row(k), &shifted)).collect());
        let kernel = op.left_kernel();
        if kernel.rows() == 0 {
            continue;
        }
        let y = block.apply_row(kernel.row(0));
        let sub = stack_rows(p, n, g.elements().map(|x| ga_mul(g, p, &y, &ga_basis_elem(n, x)))).row_basis();
        if sub.rows() != d {
            continue;
        }
        let mats =
            g.elements().map(|x| operator_on(&sub, (0..d).map(|k| ga_mul(g, p, sub.row(k), &ga_basis_elem(n, x))).collect())).collect();
        return Ok(mats);
    }
    Err(Error::Invariant(format!("no simple module of dimension {d} found in block")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prime(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn s3() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::symmetric(3))
    }

    #[test]
    fn c2_table_is_valid() {
        let g = FiniteGroup::from_table(vec!["e".into(), "s".into()], vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.unit(), 0);
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn s3_cayley_table() {
        // standard Cayley table of S3 on {e, r, r2, s, sr, sr2} with r^3 = s^2 = e, r s = s r^2
        let names: Vec<String> = ["e", "r", "r2", "s", "sr", "sr2"].iter().map(|s| s.to_string()).collect();
        let table = vec![
            vec![0, 1, 2, 3, 4, 5],
            vec![1, 2, 0, 5, 3, 4],
            vec![2, 0, 1, 4, 5, 3],
            vec![3, 4, 5, 0, 1, 2],
            vec![4, 5, 3, 2, 0, 1],
            vec![5, 3, 4, 1, 2, 0],
        ];
        let g = FiniteGroup::from_table(names, table).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
    }

    #[test]
    fn non_latin_rejected() {
        let err = FiniteGroup::from_table(vec!["a".into(), "b".into()], vec![vec![0, 1], vec![0, 1]]).unwrap_err();
        assert!(err.to_string().contains("Latin"), "{err}");
    }

    #[test]
    fn non_associative_rejected() {
        // a Latin square with unit 0 that is not associative (order 5 loop)
        let t = vec![vec![0, 1, 2, 3, 4], vec![1, 0, 3, 4, 2], vec![2, 4, 0, 1, 3], vec![3, 2, 4, 0, 1], vec![4, 3, 1, 2, 0]];
        let names = (0..5).map(|i| i.to_string()).collect();
        let err = FiniteGroup::from_table(names, t).unwrap_err();
        assert!(err.to_string().contains("associative"), "{err}");
    }

    #[test]
    fn commutator_subgroups() {
        let c4 = Arc::new(FiniteGroup::cyclic(4));
        assert_eq!(commutator_subgroup(&c4).order(), 1);
        let k4 = Arc::new(FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)));
        assert_eq!(commutator_subgroup(&k4).order(), 1);
        let g = s3();
        let d = commutator_subgroup(&g);
        assert_eq!(d.order(), 3);
        // brute force: every non-identity element of the derived subgroup has order 3
        for &x in d.elements() {
            assert!(x == g.unit() || g.element_order(x) == 3);
        }
    }

    #[test]
    fn quotients() {
        let g = s3();
        let q = quotient_group(&commutator_subgroup(&g)).unwrap();
        assert_eq!(q.group.order(), 2);
        assert_eq!(q.reps[0], g.unit());
        g.check_homomorphism(&q.group, &q.projection).unwrap();

        let c4 = Arc::new(FiniteGroup::cyclic(4));
        let c2 = Subgroup::generated_by(c4.clone(), &[2]);
        let q = quotient_group(&c2).unwrap();
        assert_eq!(q.group.order(), 2);
        assert!(q.group.is_abelian());

        let triv = quotient_group(&Subgroup::trivial(g.clone())).unwrap();
        assert_eq!(triv.group.order(), 6);
        g.check_homomorphism(&triv.group, &triv.projection).unwrap();

        let non_normal = Subgroup::generated_by(g.clone(), &[1]);
        assert_eq!(non_normal.order(), 2);
        assert!(quotient_group(&non_normal).is_err());
    }

    #[test]
    fn character_counts() {
        let c2 = Arc::new(FiniteGroup::cyclic(2));
        let ch = characters(&c2, prime(5)).unwrap();
        assert_eq!(ch.len(), 2);
        assert_eq!(ch[0].values, vec![1, 1]);
        assert_eq!(ch[1].values, vec![1, 4]);

        let ch = characters(&s3(), prime(7)).unwrap();
        assert_eq!(ch.len(), 2);
        assert!(ch[1].values.iter().all(|&v| v == 1 || v == 6));

        let c3 = Arc::new(FiniteGroup::cyclic(3));
        let ch = characters(&c3, prime(7)).unwrap();
        assert_eq!(ch.len(), 3);
        let gen_values: BTreeSet<u32> = ch.iter().map(|c| c.values[1]).collect();
        assert_eq!(gen_values, BTreeSet::from([1, 2, 4]));

        // p = 5 has no primitive cube roots of unity
        assert_eq!(characters(&c3, prime(5)).unwrap().len(), 1);
        assert!(characters(&c2, prime(2)).is_err());
    }

    #[test]
    fn characters_form_a_group() {
        let g = Arc::new(FiniteGroup::cyclic(4));
        let ch = characters(&g, prime(5)).unwrap();
        assert_eq!(ch.len(), 4);
        let cg = character_group(&ch).unwrap();
        assert_eq!(cg.unit(), 0);
        assert!(cg.is_abelian());
    }

    #[test]
    fn reynolds_examples() {
        let f5 = prime(5);
        let c2 = Arc::new(FiniteGroup::cyclic(2));
        let t = reynolds(&Rep::trivial(c2.clone(), f5)).unwrap();
        assert!(t.is_identity());

        let reg = reynolds(&Rep::regular(c2.clone(), f5)).unwrap();
        assert_eq!(reg, Mat::from_rows(f5, &[[3, 3], [3, 3]]).unwrap());
        assert_eq!(reg.rank(), 1);

        let sign = characters(&c2, f5).unwrap()[1].as_rep();
        assert!(reynolds(&sign).unwrap().is_zero());
    }

    #[test]
    fn irreducible_dimensions() {
        let cases: Vec<(Arc<FiniteGroup>, u64, Vec<usize>)> = vec![
            (Arc::new(FiniteGroup::cyclic(2)), 5, vec![1, 1]),
            (Arc::new(FiniteGroup::cyclic(3)), 7, vec![1, 1, 1]),
            (s3(), 7, vec![1, 1, 2]),
            (Arc::new(FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2))), 5, vec![1, 1, 1, 1]),
        ];
        for (g, p, dims) in cases {
            let irr = irreducibles(&g, prime(p), 11).unwrap();
            let got: Vec<usize> = irr.iter().map(|i| i.rep.dim).collect();
            assert_eq!(got, dims);
            assert!(irr[0].rep.traces().iter().all(|&t| t == 1), "trivial first");
            for i in &irr {
                assert_eq!(i.rep.endomorphism_dim(), 1);
                assert_eq!(i.multiplicity, i.rep.dim);
            }
        }
    }

    #[test]
    fn irreducibles_need_splitting_prime() {
        let err = irreducibles(&s3(), prime(5), 0).unwrap_err();
        assert!(err.to_string().contains("larger prime"), "{err}");
    }

    #[test]
    fn permutation_groups() {
        let g = FiniteGroup::from_permutations(4, &[vec![1, 2, 3, 0], vec![1, 0, 2, 3]]).unwrap();
        assert_eq!(g.order(), 24);
        assert_eq!(g.name(0), "e");
        assert!(FiniteGroup::from_permutations(3, &[vec![0, 0, 1]]).is_err());
    }

    #[test]
    fn coset_reps_start_with_unit() {
        let g = s3();
        let h = Subgroup::generated_by(g.clone(), &[1]);
        let reps = h.right_coset_reps();
        assert_eq!(reps.len(), 3);
        assert_eq!(reps[0], g.unit());
        let rep = Rep::coset_permutation(&h, prime(7));
        rep.validate().unwrap();
    }
}
