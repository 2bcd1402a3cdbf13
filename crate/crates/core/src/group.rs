//! Finite groups as explicit multiplication tables, with conjugacy and
//! twisted-conjugacy machinery.
//!
//! All representative and ordering conventions are deterministic: class
//! elements are sorted ascending, classes are ordered by their minimal
//! element, and that minimal element is the class representative.

use std::collections::{HashMap, VecDeque};

use crate::{Error, Result, DEFAULT_SIZE_BOUND};

/// A finite group given by its full multiplication table.
#[derive(Clone, Debug)]
pub struct GroupTable {
    pub n: usize,
    mult: Vec<usize>, // flattened n x n
    pub inv: Vec<usize>,
    pub id: usize,
    pub element_names: Option<Vec<String>>,
}

impl GroupTable {
    /// Validates the group axioms on the full table.
    pub fn from_mult_table(table: Vec<Vec<usize>>) -> Result<GroupTable> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        let mut mult = Vec::with_capacity(n * n);
        for row in &table {
            if row.len() != n {
                return Err(Error::InvalidGroup("table is not square".into()));
            }
            for &v in row {
                if v >= n {
                    return Err(Error::InvalidGroup(format!("entry {v} out of range")));
                }
                mult.push(v);
            }
        }
        Self::from_flat(n, mult, None)
    }

    fn from_flat(
        n: usize,
        mult: Vec<usize>,
        element_names: Option<Vec<String>>,
    ) -> Result<GroupTable> {
        // identity
        let mut id = None;
        for e in 0..n {
            if (0..n).all(|x| mult[e * n + x] == x && mult[x * n + e] == x) {
                id = Some(e);
                break;
            }
        }
        let id = id.ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        // inverses
        let mut inv = vec![usize::MAX; n];
        for x in 0..n {
            match (0..n).find(|&y| mult[x * n + y] == id && mult[y * n + x] == id) {
                Some(y) => inv[x] = y,
                None => return Err(Error::InvalidGroup(format!("element {x} has no inverse"))),
            }
        }
        // associativity; the full check is cubic, fine at the sizes we build
        if n <= 1024 {
            for a in 0..n {
                for b in 0..n {
                    let ab = mult[a * n + b];
                    for c in 0..n {
                        if mult[ab * n + c] != mult[a * n + mult[b * n + c]] {
                            return Err(Error::InvalidGroup(format!(
                                "associativity fails at ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        } else {
            // deterministic sparse check for very large explicit tables
            let mut state = 0x9e3779b97f4a7c15u64;
            for _ in 0..2_000_000 {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let a = (state >> 33) as usize % n;
                let b = (state >> 13) as usize % n;
                let c = state as usize % n;
                if mult[mult[a * n + b] * n + c] != mult[a * n + mult[b * n + c]] {
                    return Err(Error::InvalidGroup(format!(
                        "associativity fails at ({a},{b},{c})"
                    )));
                }
            }
        }
        Ok(GroupTable { n, mult, inv, id, element_names })
    }

    /// The subgroup of permutations generated by `gens` (closure by orbit
    /// enumeration), elements sorted lexicographically as permutations.
    pub fn from_perm_generators(gens: &[Vec<usize>], bound: usize) -> Result<PermGroup> {
        if gens.is_empty() {
            return Err(Error::InvalidGroup("no generators".into()));
        }
        let deg = gens[0].len();
        for g in gens {
            if g.len() != deg {
                return Err(Error::InvalidGroup("generator degrees differ".into()));
            }
            let mut seen = vec![false; deg];
            for &v in g {
                if v >= deg || seen[v] {
                    return Err(Error::InvalidGroup("generator is not a permutation".into()));
                }
                seen[v] = true;
            }
        }
        let identity: Vec<usize> = (0..deg).collect();
        let mut words: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        words.insert(identity.clone(), vec![]);
        let mut queue = VecDeque::new();
        queue.push_back(identity);
        while let Some(cur) = queue.pop_front() {
            let cur_word = words[&cur].clone();
            for (gi, g) in gens.iter().enumerate() {
                // right multiply: (cur * g)(x) = cur[g[x]]
                let next: Vec<usize> = (0..deg).map(|x| cur[g[x]]).collect();
                if !words.contains_key(&next) {
                    if words.len() >= bound {
                        return Err(Error::SizeBound { bound, actual: words.len() + 1 });
                    }
                    let mut w = cur_word.clone();
                    w.push(gi);
                    words.insert(next.clone(), w);
                    queue.push_back(next);
                }
            }
        }
        let mut perms: Vec<Vec<usize>> = words.keys().cloned().collect();
        perms.sort();
        let n = perms.len();
        let index: HashMap<&Vec<usize>, usize> = perms.iter().zip(0..).collect();
        let mut mult = vec![0usize; n * n];
        for (i, a) in perms.iter().enumerate() {
            for (j, b) in perms.iter().enumerate() {
                let prod: Vec<usize> = (0..deg).map(|x| a[b[x]]).collect();
                mult[i * n + j] = index[&prod];
            }
        }
        let word_list = perms.iter().map(|p| words[p].clone()).collect();
        let table = Self::from_flat(n, mult, None)?;
        Ok(PermGroup { table, perms, words: word_list })
    }

    /// Abelian group with the given invariant factors, e.g. [2,2] or [3].
    pub fn abelian(factors: &[usize]) -> GroupTable {
        assert!(!factors.is_empty() && factors.iter().all(|&f| f >= 1));
        let n: usize = factors.iter().product();
        let digits = |mut v: usize| -> Vec<usize> {
            factors
                .iter()
                .map(|&f| {
                    let d = v % f;
                    v /= f;
                    d
                })
                .collect()
        };
        let combine = |ds: &[usize]| -> usize {
            let mut v = 0;
            for (d, &f) in ds.iter().zip(factors).rev() {
                v = v * f + d;
            }
            v
        };
        let mut mult = vec![0usize; n * n];
        for a in 0..n {
            let da = digits(a);
            for b in 0..n {
                let db = digits(b);
                let sum: Vec<usize> = da
                    .iter()
                    .zip(&db)
                    .zip(factors)
                    .map(|((&x, &y), &f)| (x + y) % f)
                    .collect();
                mult[a * n + b] = combine(&sum);
            }
        }
        Self::from_flat(n, mult, None).expect("abelian table is a group")
    }

    pub fn cyclic(n: usize) -> GroupTable {
        Self::abelian(&[n])
    }

    /// Dihedral group of order 2n: rotations r^k and reflections r^k s,
    /// indexed k and n + k.
    pub fn dihedral(n: usize) -> GroupTable {
        let order = 2 * n;
        let mut mult = vec![0usize; order * order];
        let code = |rot: usize, refl: bool| if refl { n + rot } else { rot };
        for a in 0..order {
            let (ka, ra) = if a < n { (a, false) } else { (a - n, true) };
            for b in 0..order {
                let (kb, rb) = if b < n { (b, false) } else { (b - n, true) };
                // r^ka s^ra * r^kb s^rb, using s r^k = r^{-k} s
                let (k, r) = if !ra { ((ka + kb) % n, rb) } else { ((ka + n - kb) % n, !rb) };
                mult[a * order + b] = code(k, r);
            }
        }
        Self::from_flat(order, mult, None).expect("dihedral table is a group")
    }

    /// The quaternion group of order 8: indices 0..7 are
    /// 1, -1, i, -i, j, -j, k, -k.
    pub fn quaternion8() -> GroupTable {
        // (axis, sign) with axis 0=1, 1=i, 2=j, 3=k
        let decode = |x: usize| (x % 2 == 1, x / 2);
        let encode = |neg: bool, axis: usize| axis * 2 + neg as usize;
        let axis_mul = |a: usize, b: usize| -> (bool, usize) {
            match (a, b) {
                (0, x) => (false, x),
                (x, 0) => (false, x),
                (x, y) if x == y => (true, 0),
                (1, 2) => (false, 3),
                (2, 3) => (false, 1),
                (3, 1) => (false, 2),
                (2, 1) => (true, 3),
                (3, 2) => (true, 1),
                (1, 3) => (true, 2),
                _ => unreachable!(),
            }
        };
        let mut mult = vec![0usize; 64];
        for x in 0..8 {
            let (nx, ax) = decode(x);
            for y in 0..8 {
                let (ny, ay) = decode(y);
                let (nz, az) = axis_mul(ax, ay);
                mult[x * 8 + y] = encode(nx ^ ny ^ nz, az);
            }
        }
        let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        Self::from_flat(8, mult, Some(names)).expect("quaternion table is a group")
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.n + b]
    }

    /// h x h^{-1}
    #[inline]
    pub fn conj(&self, h: usize, x: usize) -> usize {
        self.mul(self.mul(h, x), self.inv[h])
    }

    pub fn pow(&self, x: usize, k: usize) -> usize {
        let mut acc = self.id;
        for _ in 0..k {
            acc = self.mul(acc, x);
        }
        acc
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut acc = x;
        let mut ord = 1;
        while acc != self.id {
            acc = self.mul(acc, x);
            ord += 1;
        }
        ord
    }

    pub fn exponent(&self) -> usize {
        (0..self.n).fold(1usize, |acc, x| lcm(acc, self.element_order(x)))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn name_of(&self, x: usize) -> String {
        match &self.element_names {
            Some(names) => names[x].clone(),
            None => format!("g{x}"),
        }
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Closure of permutation generators: the table plus the underlying
/// permutations and a defining word (in generator indices) per element.
pub struct PermGroup {
    pub table: GroupTable,
    pub perms: Vec<Vec<usize>>,
    pub words: Vec<Vec<usize>>,
}

impl PermGroup {
    /// Automorphism determined by images of the generators (each image given
    /// as a permutation that must itself lie in the group).
    pub fn automorphism_from_gen_images(&self, images: &[Vec<usize>]) -> Result<GroupAutomorphism> {
        let index_of = |p: &Vec<usize>| -> Result<usize> {
            self.perms
                .iter()
                .position(|q| q == p)
                .ok_or_else(|| Error::InvalidGroup("generator image not in group".into()))
        };
        let image_idx: Vec<usize> = images.iter().map(index_of).collect::<Result<_>>()?;
        let map: Vec<usize> = self
            .words
            .iter()
            .map(|word| {
                word.iter()
                    .fold(self.table.id, |acc, &gi| self.table.mul(acc, image_idx[gi]))
            })
            .collect();
        GroupAutomorphism::new(&self.table, map)
    }
}

/// A validated automorphism of a [`GroupTable`].
#[derive(Clone, Debug)]
pub struct GroupAutomorphism {
    pub map: Vec<usize>,
    pub inv_map: Vec<usize>,
    pub order: usize,
}

impl GroupAutomorphism {
    pub fn new(g: &GroupTable, map: Vec<usize>) -> Result<GroupAutomorphism> {
        if map.len() != g.n {
            return Err(Error::InvalidGroup("automorphism has wrong length".into()));
        }
        let mut inv_map = vec![usize::MAX; g.n];
        for (x, &y) in map.iter().enumerate() {
            if y >= g.n || inv_map[y] != usize::MAX {
                return Err(Error::InvalidGroup("automorphism is not a bijection".into()));
            }
            inv_map[y] = x;
        }
        for a in 0..g.n {
            for b in 0..g.n {
                if map[g.mul(a, b)] != g.mul(map[a], map[b]) {
                    return Err(Error::InvalidGroup(format!(
                        "map is not a homomorphism at ({a},{b})"
                    )));
                }
            }
        }
        let mut order = 1;
        let mut cur = map.clone();
        let identity: Vec<usize> = (0..g.n).collect();
        while cur != identity {
            cur = cur.iter().map(|&x| map[x]).collect();
            order += 1;
        }
        Ok(GroupAutomorphism { map, inv_map, order })
    }

    pub fn identity(g: &GroupTable) -> GroupAutomorphism {
        GroupAutomorphism { map: (0..g.n).collect(), inv_map: (0..g.n).collect(), order: 1 }
    }

    /// Conjugation x -> h x h^{-1}.
    pub fn inner(g: &GroupTable, h: usize) -> GroupAutomorphism {
        let map: Vec<usize> = (0..g.n).map(|x| g.conj(h, x)).collect();
        GroupAutomorphism::new(g, map).expect("conjugation is an automorphism")
    }

    /// Inversion x -> x^{-1}; an automorphism exactly for abelian groups.
    pub fn inversion(g: &GroupTable) -> Result<GroupAutomorphism> {
        GroupAutomorphism::new(g, g.inv.clone())
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    #[inline]
    pub fn apply_inv(&self, x: usize) -> usize {
        self.inv_map[x]
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// The composite x -> a F(x) a^{-1}.
    pub fn twist_by(&self, g: &GroupTable, a: usize) -> GroupAutomorphism {
        let map: Vec<usize> = (0..g.n).map(|x| g.conj(a, self.apply(x))).collect();
        GroupAutomorphism::new(g, map).expect("ad(a) composed with an automorphism")
    }
}

/// Conjugacy class data with transporters.
#[derive(Clone, Debug)]
pub struct ClassData {
    /// Classes ordered by minimal element; each class sorted ascending.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    /// transporter[y] = h with y = h * rep * h^{-1} for rep of y's class.
    pub transporter: Vec<usize>,
    pub centralizer_orders: Vec<usize>,
}

impl ClassData {
    pub fn rep(&self, class: usize) -> usize {
        self.classes[class][0]
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn reps(&self) -> impl Iterator<Item = usize> + '_ {
        self.classes.iter().map(|c| c[0])
    }

    /// Index of the class containing the inverses of `class`.
    pub fn inverse_class(&self, g: &GroupTable, class: usize) -> usize {
        self.class_of[g.inv[self.rep(class)]]
    }
}

/// Orbits of conjugation h: x -> h x h^{-1}.
pub fn conjugacy_classes(g: &GroupTable) -> ClassData {
    let mut class_of = vec![usize::MAX; g.n];
    let mut transporter = vec![g.id; g.n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for rep in 0..g.n {
        if class_of[rep] != usize::MAX {
            continue;
        }
        let cls_idx = classes.len();
        class_of[rep] = cls_idx;
        transporter[rep] = g.id;
        let mut members = vec![rep];
        let mut queue = VecDeque::from([rep]);
        while let Some(y) = queue.pop_front() {
            for h in 0..g.n {
                let z = g.conj(h, y);
                if class_of[z] == usize::MAX {
                    class_of[z] = cls_idx;
                    transporter[z] = g.mul(h, transporter[y]);
                    members.push(z);
                    queue.push_back(z);
                }
            }
        }
        members.sort_unstable();
        classes.push(members);
    }
    let centralizer_orders = classes.iter().map(|c| g.n / c.len()).collect();
    ClassData { classes, class_of, transporter, centralizer_orders }
}

/// Orbit data for the twisted conjugation action h: t -> h t F(h)^{-1}.
#[derive(Clone, Debug)]
pub struct TwistedClassData {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    /// transporter[t'] = h with t' = h * rep * F(h)^{-1}.
    pub transporter: Vec<usize>,
}

impl TwistedClassData {
    pub fn rep(&self, class: usize) -> usize {
        self.classes[class][0]
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }
}

pub fn f_twisted_classes(g: &GroupTable, f: &GroupAutomorphism) -> TwistedClassData {
    let mut class_of = vec![usize::MAX; g.n];
    let mut transporter = vec![g.id; g.n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for rep in 0..g.n {
        if class_of[rep] != usize::MAX {
            continue;
        }
        let cls_idx = classes.len();
        class_of[rep] = cls_idx;
        let mut members = vec![rep];
        let mut queue = VecDeque::from([rep]);
        while let Some(y) = queue.pop_front() {
            for h in 0..g.n {
                let z = g.mul(g.mul(h, y), g.inv[f.apply(h)]);
                if class_of[z] == usize::MAX {
                    class_of[z] = cls_idx;
                    transporter[z] = g.mul(h, transporter[y]);
                    members.push(z);
                    queue.push_back(z);
                }
            }
        }
        members.sort_unstable();
        classes.push(members);
    }
    TwistedClassData { classes, class_of, transporter }
}

/// A subgroup realised with its own table and an embedding into the parent.
#[derive(Clone, Debug)]
pub struct Subgroup {
    /// Sorted parent indices.
    pub elements: Vec<usize>,
    pub table: GroupTable,
    parent_to_sub: HashMap<usize, usize>,
}

impl Subgroup {
    pub fn from_elements(parent: &GroupTable, mut elements: Vec<usize>) -> Result<Subgroup> {
        elements.sort_unstable();
        elements.dedup();
        if !elements.contains(&parent.id) {
            return Err(Error::NotSubgroup("missing identity".into()));
        }
        let parent_to_sub: HashMap<usize, usize> = elements.iter().copied().zip(0..).collect();
        let k = elements.len();
        let mut mult = vec![0usize; k * k];
        for (i, &a) in elements.iter().enumerate() {
            for (j, &b) in elements.iter().enumerate() {
                let ab = parent.mul(a, b);
                match parent_to_sub.get(&ab) {
                    Some(&idx) => mult[i * k + j] = idx,
                    None => {
                        return Err(Error::NotSubgroup(format!(
                            "not closed: {a} * {b} = {ab} escapes"
                        )))
                    }
                }
            }
        }
        let names = parent
            .element_names
            .as_ref()
            .map(|ns| elements.iter().map(|&e| ns[e].clone()).collect());
        let table = GroupTable::from_flat(k, mult, names)?;
        Ok(Subgroup { elements, table, parent_to_sub })
    }

    /// Subgroup generated by the given parent elements.
    pub fn generated(parent: &GroupTable, gens: &[usize]) -> Subgroup {
        let mut seen = vec![false; parent.n];
        seen[parent.id] = true;
        let mut queue: VecDeque<usize> = VecDeque::from([parent.id]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = parent.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        let elements: Vec<usize> = (0..parent.n).filter(|&x| seen[x]).collect();
        Subgroup::from_elements(parent, elements).expect("generated set is closed")
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn to_parent(&self, i: usize) -> usize {
        self.elements[i]
    }

    pub fn from_parent(&self, p: usize) -> Option<usize> {
        self.parent_to_sub.get(&p).copied()
    }

    pub fn contains(&self, p: usize) -> bool {
        self.parent_to_sub.contains_key(&p)
    }
}

/// Fixed points of an automorphism, as a subgroup.
pub fn fixed_subgroup(g: &GroupTable, phi: &GroupAutomorphism) -> Subgroup {
    let elements: Vec<usize> = (0..g.n).filter(|&x| phi.apply(x) == x).collect();
    Subgroup::from_elements(g, elements).expect("fixed points form a subgroup")
}

/// Centralizer of x, as a subgroup.
pub fn centralizer(g: &GroupTable, x: usize) -> Subgroup {
    let elements: Vec<usize> = (0..g.n).filter(|&h| g.mul(h, x) == g.mul(x, h)).collect();
    Subgroup::from_elements(g, elements).expect("centralizer is a subgroup")
}

/// The semidirect product C x| <sigma> for sigma of finite order m.
/// Element (c, sigma^i) has index i * |C| + c.
pub struct SemidirectProduct {
    pub table: GroupTable,
    pub base_order: usize,
    pub cyclic_order: usize,
}

impl SemidirectProduct {
    pub fn index(&self, c: usize, i: usize) -> usize {
        (i % self.cyclic_order) * self.base_order + c
    }

    pub fn decode(&self, idx: usize) -> (usize, usize) {
        (idx % self.base_order, idx / self.base_order)
    }

    /// Indices of the coset C * sigma^{-1} in base-group element order.
    /// For m = 1 this is the group itself.
    pub fn twisted_coset(&self) -> Vec<usize> {
        let i = (self.cyclic_order - 1) % self.cyclic_order;
        (0..self.base_order).map(|c| self.index(c, i)).collect()
    }
}

pub fn semidirect_cyclic(c: &GroupTable, sigma: &GroupAutomorphism) -> SemidirectProduct {
    let m = sigma.order;
    let n = c.n * m;
    let mut powers: Vec<Vec<usize>> = vec![(0..c.n).collect()];
    for _ in 1..m {
        let prev = powers.last().unwrap();
        powers.push(prev.iter().map(|&x| sigma.apply(x)).collect());
    }
    let mut mult = vec![0usize; n * n];
    for i in 0..m {
        for a in 0..c.n {
            for j in 0..m {
                for b in 0..c.n {
                    // (a, s^i)(b, s^j) = (a * s^i(b), s^{i+j})
                    let prod = c.mul(a, powers[i][b]);
                    mult[(i * c.n + a) * n + (j * c.n + b)] = ((i + j) % m) * c.n + prod;
                }
            }
        }
    }
    let names = Some(
        (0..n)
            .map(|idx| {
                let (a, i) = (idx % c.n, idx / c.n);
                if i == 0 {
                    c.name_of(a)
                } else {
                    format!("{}.s{}", c.name_of(a), i)
                }
            })
            .collect(),
    );
    let table = GroupTable::from_flat(n, mult, names).expect("semidirect product is a group");
    SemidirectProduct { table, base_order: c.n, cyclic_order: m }
}

/// The supported group descriptions (mirrors the CLI input schema).
pub enum GroupSource {
    Mult(Vec<Vec<usize>>),
    PermGens(Vec<Vec<usize>>),
    Abelian(Vec<usize>),
}

pub fn group_make(source: GroupSource) -> Result<GroupTable> {
    group_make_bounded(source, DEFAULT_SIZE_BOUND)
}

pub fn group_make_bounded(source: GroupSource, bound: usize) -> Result<GroupTable> {
    let g = match source {
        GroupSource::Mult(t) => GroupTable::from_mult_table(t)?,
        GroupSource::PermGens(gens) => GroupTable::from_perm_generators(&gens, bound)?.table,
        GroupSource::Abelian(factors) => GroupTable::abelian(&factors),
    };
    if g.n > bound {
        return Err(Error::SizeBound { bound, actual: g.n });
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> PermGroup {
        GroupTable::from_perm_generators(&[vec![1, 0, 2], vec![1, 2, 0]], 100).unwrap()
    }

    #[test]
    fn group_make_examples() {
        let c3 = GroupTable::abelian(&[3]);
        assert_eq!(c3.n, 3);
        assert_eq!(s3().table.n, 6);
        let klein = GroupTable::abelian(&[2, 2]);
        assert_eq!(klein.n, 4);
        assert!(klein.is_abelian());
        assert_eq!(klein.exponent(), 2);
    }

    #[test]
    fn invalid_tables_rejected() {
        // a latin square with identity that is not associative
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(GroupTable::from_mult_table(t).is_err());
        assert!(GroupTable::from_mult_table(vec![vec![1]]).is_err());
    }

    #[test]
    fn closure_bound() {
        let res = GroupTable::from_perm_generators(&[vec![1, 2, 3, 4, 5, 0]], 4);
        assert!(matches!(res, Err(Error::SizeBound { .. })));
    }

    #[test]
    fn conjugacy_class_examples() {
        let cd = conjugacy_classes(&s3().table);
        let mut sizes: Vec<usize> = cd.classes.iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);

        let c4 = GroupTable::cyclic(4);
        assert_eq!(conjugacy_classes(&c4).num_classes(), 4);

        let q8 = GroupTable::quaternion8();
        assert_eq!(conjugacy_classes(&q8).num_classes(), 5);

        // transporters verify y = h rep h^{-1}
        let g = GroupTable::dihedral(4);
        let cd = conjugacy_classes(&g);
        for y in 0..g.n {
            let rep = cd.rep(cd.class_of[y]);
            let h = cd.transporter[y];
            assert_eq!(y, g.conj(h, rep));
        }
        // |class| * |centralizer| = |G|
        for (cls, &zo) in cd.classes.iter().zip(&cd.centralizer_orders) {
            assert_eq!(cls.len() * zo, g.n);
            let z = centralizer(&g, cls[0]);
            assert_eq!(z.order(), zo);
        }
    }

    #[test]
    fn twisted_class_examples() {
        // (C3, inversion): single twisted class
        let c3 = GroupTable::cyclic(3);
        let inv = GroupAutomorphism::inversion(&c3).unwrap();
        let tc = f_twisted_classes(&c3, &inv);
        assert_eq!(tc.num_classes(), 1);

        // (C2 x C2, swap): two twisted classes {00,11} and {10,01}
        let klein = GroupTable::abelian(&[2, 2]);
        let swap = GroupAutomorphism::new(&klein, vec![0, 2, 1, 3]).unwrap();
        let tc = f_twisted_classes(&klein, &swap);
        assert_eq!(tc.num_classes(), 2);
        assert_eq!(tc.classes[0], vec![0, 3]);
        assert_eq!(tc.classes[1], vec![1, 2]);

        // F = id reproduces ordinary conjugacy
        let g = s3().table;
        let id = GroupAutomorphism::identity(&g);
        let tc = f_twisted_classes(&g, &id);
        let cd = conjugacy_classes(&g);
        assert_eq!(tc.classes, cd.classes);

        // transporters verify t' = h rep F(h)^{-1}
        let tc = f_twisted_classes(&klein, &swap);
        for t in 0..klein.n {
            let rep = tc.rep(tc.class_of[t]);
            let h = tc.transporter[t];
            assert_eq!(t, klein.mul(klein.mul(h, rep), klein.inv[swap.apply(h)]));
        }
    }

    #[test]
    fn fixed_subgroup_examples() {
        let c3 = GroupTable::cyclic(3);
        let inv = GroupAutomorphism::inversion(&c3).unwrap();
        assert_eq!(fixed_subgroup(&c3, &inv).order(), 1);

        let klein = GroupTable::abelian(&[2, 2]);
        let swap = GroupAutomorphism::new(&klein, vec![0, 2, 1, 3]).unwrap();
        let fixed = fixed_subgroup(&klein, &swap);
        assert_eq!(fixed.order(), 2);
        assert_eq!(fixed.elements, vec![0, 3]);

        let g = s3().table;
        let id = GroupAutomorphism::identity(&g);
        assert_eq!(fixed_subgroup(&g, &id).order(), g.n);
    }

    #[test]
    fn semidirect_examples() {
        // C3 x| inversion has the defining relations of the order-6 dihedral
        let c3 = GroupTable::cyclic(3);
        let inv = GroupAutomorphism::inversion(&c3).unwrap();
        let sd = semidirect_cyclic(&c3, &inv);
        assert_eq!(sd.table.n, 6);
        assert!(!sd.table.is_abelian());
        // a^3 = 1, t^2 = 1, t a t^{-1} = a^{-1}
        let a = sd.index(1, 0);
        let t = sd.index(0, 1);
        assert_eq!(sd.table.pow(a, 3), sd.table.id);
        assert_eq!(sd.table.pow(t, 2), sd.table.id);
        assert_eq!(sd.table.conj(t, a), sd.table.inv[a]);

        // trivial twist returns the base group
        let id = GroupAutomorphism::identity(&c3);
        let sd = semidirect_cyclic(&c3, &id);
        assert_eq!(sd.table.n, 3);

        // C4 x| inversion matches the dihedral group of order 8
        let c4 = GroupTable::cyclic(4);
        let inv = GroupAutomorphism::inversion(&c4).unwrap();
        let sd = semidirect_cyclic(&c4, &inv);
        assert_eq!(sd.table.n, 8);
        let d4 = GroupTable::dihedral(4);
        let mut sd_sizes: Vec<usize> =
            conjugacy_classes(&sd.table).classes.iter().map(|c| c.len()).collect();
        let mut d4_sizes: Vec<usize> =
            conjugacy_classes(&d4).classes.iter().map(|c| c.len()).collect();
        sd_sizes.sort_unstable();
        d4_sizes.sort_unstable();
        assert_eq!(sd_sizes, d4_sizes);
    }

    #[test]
    fn automorphism_validation() {
        let c3 = GroupTable::cyclic(3);
        assert!(GroupAutomorphism::new(&c3, vec![0, 1, 1]).is_err());
        assert!(GroupAutomorphism::new(&c3, vec![1, 2, 0]).is_err()); // translation, not hom
        let inv = GroupAutomorphism::inversion(&c3).unwrap();
        assert_eq!(inv.order, 2);
        // inversion is not an automorphism of a nonabelian group
        assert!(GroupAutomorphism::inversion(&s3().table).is_err());
    }

    #[test]
    fn gen_image_automorphism() {
        // conjugation by the transposition swapping the first two points
        let pg = s3();
        let g01 = [1usize, 0, 2];
        let conj = |p: &[usize; 3]| -> Vec<usize> { (0..3).map(|x| g01[p[g01[x]]]).collect() };
        let images: Vec<Vec<usize>> = [[1usize, 0, 2], [1usize, 2, 0]].iter().map(conj).collect();
        let aut = pg.automorphism_from_gen_images(&images).unwrap();
        assert_eq!(aut.order, 2);
    }
}
