//! Finite racks: operation tables, axiom checking, orbits, presented racks
//! and homomorphism search, and the abelianised associated group.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::Deserialize;
use thiserror::Error;

use crate::homology::snf::smith_normal_form;
use crate::homology::SparseIntMatrix;

/// How a rack was constructed. Purely informational; the operation table is
/// always the source of truth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RackKind {
    Explicit,
    Trivial,
    Dihedral,
    Permutation,
    Cyclic,
    Conjugation,
}

impl fmt::Display for RackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RackKind::Explicit => "explicit",
            RackKind::Trivial => "trivial",
            RackKind::Dihedral => "dihedral",
            RackKind::Permutation => "permutation",
            RackKind::Cyclic => "cyclic",
            RackKind::Conjugation => "conjugation",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RackError {
    #[error("rack must have at least one element")]
    Empty,
    #[error("table is ragged: row {row} has {got} entries, expected {expected}")]
    Ragged { row: usize, got: usize, expected: usize },
    #[error("entry out of range: table[{a}][{b}] = {value}, size is {size}")]
    OutOfRange { a: usize, b: usize, value: usize, size: usize },
    #[error("column {col} is not a bijection: value {value} repeats")]
    NotBijective { col: usize, value: usize },
    #[error("rack identity fails at (a,b,c)=({a},{b},{c}): (a^b)^c = {lhs} but (a^c)^(b^c) = {rhs}")]
    IdentityFailure { a: usize, b: usize, c: usize, lhs: usize, rhs: usize },
    #[error("not a permutation of 0..{size}: {reason}")]
    BadPermutation { size: usize, reason: String },
    #[error("not a group table: {reason}")]
    BadGroup { reason: String },
    #[error("bad rack spec `{spec}`: {reason}")]
    BadSpec { spec: String, reason: String },
}

/// A single rack-axiom violation, with its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    /// Column `col` repeats `value`, so `a -> a^col` is not a bijection.
    NotBijective { col: usize, value: usize },
    /// `(a^b)^c != (a^c)^(b^c)`.
    Identity { a: usize, b: usize, c: usize, lhs: usize, rhs: usize },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::NotBijective { col, value } => {
                write!(f, "bijectivity: column {col} repeats value {value}")
            }
            AxiomViolation::Identity { a, b, c, lhs, rhs } => {
                write!(f, "rack identity: (a,b,c)=({a},{b},{c}): (a^b)^c = {lhs} != (a^c)^(b^c) = {rhs}")
            }
        }
    }
}

/// A finite rack on elements `0..n-1`, stored as the full operation table
/// `table[a][b] = a^b` together with the inverse table solving `x^b = a`.
///
/// Values are immutable after construction, so racks can be shared freely
/// across threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rack {
    size: usize,
    table: Vec<Vec<usize>>,
    inv_table: Vec<Vec<usize>>,
    kind: RackKind,
}

#[derive(Deserialize)]
struct RackFile {
    size: usize,
    table: Vec<Vec<usize>>,
}

impl Rack {
    /// Builds a rack from an explicit table, verifying both axioms.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Rack, RackError> {
        Self::from_table_kind(table, RackKind::Explicit)
    }

    fn from_table_kind(table: Vec<Vec<usize>>, kind: RackKind) -> Result<Rack, RackError> {
        let rack = Self::from_table_unchecked_kind(table, kind)?;
        match check_rack_axioms(&rack.table) {
            Ok(()) => Ok(rack),
            Err(violations) => match &violations[0] {
                AxiomViolation::NotBijective { col, value } => {
                    Err(RackError::NotBijective { col: *col, value: *value })
                }
                AxiomViolation::Identity { a, b, c, lhs, rhs } => Err(RackError::IdentityFailure {
                    a: *a,
                    b: *b,
                    c: *c,
                    lhs: *lhs,
                    rhs: *rhs,
                }),
            },
        }
    }

    /// Builds a rack from a table without verifying the rack axioms.
    /// Shape and range are still validated. Intended for experiments with
    /// non-racks; almost everything downstream assumes the axioms hold.
    pub fn from_table_unchecked(table: Vec<Vec<usize>>) -> Result<Rack, RackError> {
        Self::from_table_unchecked_kind(table, RackKind::Explicit)
    }

    fn from_table_unchecked_kind(table: Vec<Vec<usize>>, kind: RackKind) -> Result<Rack, RackError> {
        let n = table.len();
        if n == 0 {
            return Err(RackError::Empty);
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(RackError::Ragged { row: a, got: row.len(), expected: n });
            }
            for (b, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(RackError::OutOfRange { a, b, value: v, size: n });
                }
            }
        }
        // Inverse columns; meaningful only when each column is a bijection.
        let mut inv = vec![vec![0usize; n]; n];
        for b in 0..n {
            for a in 0..n {
                inv[table[a][b]][b] = a;
            }
        }
        Ok(Rack { size: n, table, inv_table: inv, kind })
    }

    /// The trivial rack: `a^b = a`.
    pub fn trivial(n: usize) -> Result<Rack, RackError> {
        if n == 0 {
            return Err(RackError::Empty);
        }
        let table = (0..n).map(|a| vec![a; n]).collect();
        Self::from_table_kind(table, RackKind::Trivial)
    }

    /// The dihedral rack: `a^b = 2b - a (mod n)`.
    pub fn dihedral(n: usize) -> Result<Rack, RackError> {
        if n == 0 {
            return Err(RackError::Empty);
        }
        let table = (0..n)
            .map(|a| (0..n).map(|b| (2 * b + n - a % n) % n).collect())
            .collect();
        Self::from_table_kind(table, RackKind::Dihedral)
    }

    /// The permutation rack of `rho`: `a^b = rho(a)` for every `b`.
    pub fn permutation(rho: &[usize]) -> Result<Rack, RackError> {
        let n = rho.len();
        if n == 0 {
            return Err(RackError::Empty);
        }
        let mut seen = vec![false; n];
        for &v in rho {
            if v >= n {
                return Err(RackError::BadPermutation {
                    size: n,
                    reason: format!("value {v} out of range"),
                });
            }
            if seen[v] {
                return Err(RackError::BadPermutation {
                    size: n,
                    reason: format!("value {v} repeats"),
                });
            }
            seen[v] = true;
        }
        let table = (0..n).map(|a| vec![rho[a]; n]).collect();
        Self::from_table_kind(table, RackKind::Permutation)
    }

    /// The cyclic rack of order `w`: the permutation rack of the single
    /// w-cycle `i -> i+1 (mod w)`.
    pub fn cyclic(w: usize) -> Result<Rack, RackError> {
        if w == 0 {
            return Err(RackError::Empty);
        }
        let table = (0..w).map(|a| vec![(a + 1) % w; w]).collect();
        Self::from_table_kind(table, RackKind::Cyclic)
    }

    /// The conjugation rack of a group given by its multiplication table:
    /// `a^b = b^-1 a b`. The table is validated (identity, inverses,
    /// associativity) and the failing witness is reported otherwise.
    pub fn conjugation(mul: &[Vec<usize>]) -> Result<Rack, RackError> {
        let n = mul.len();
        if n == 0 {
            return Err(RackError::Empty);
        }
        for (a, row) in mul.iter().enumerate() {
            if row.len() != n {
                return Err(RackError::BadGroup {
                    reason: format!("row {a} has {} entries, expected {n}", row.len()),
                });
            }
            for (b, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(RackError::BadGroup {
                        reason: format!("entry ({a},{b}) = {v} out of range"),
                    });
                }
            }
        }
        let id = (0..n)
            .find(|&e| (0..n).all(|a| mul[e][a] == a && mul[a][e] == a))
            .ok_or_else(|| RackError::BadGroup { reason: "no identity element".into() })?;
        let mut inv = vec![None; n];
        for a in 0..n {
            for b in 0..n {
                if mul[a][b] == id && mul[b][a] == id {
                    inv[a] = Some(b);
                }
            }
        }
        let inv: Vec<usize> = inv
            .into_iter()
            .enumerate()
            .map(|(a, i)| i.ok_or_else(|| RackError::BadGroup { reason: format!("element {a} has no inverse") }))
            .collect::<Result<_, _>>()?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(RackError::BadGroup {
                            reason: format!("not associative at ({a},{b},{c})"),
                        });
                    }
                }
            }
        }
        let table = (0..n)
            .map(|a| (0..n).map(|b| mul[mul[inv[b]][a]][b]).collect())
            .collect();
        Self::from_table_kind(table, RackKind::Conjugation)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn kind(&self) -> RackKind {
        self.kind
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// `a^b`.
    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    /// The unique `x` with `x^b = a`.
    #[inline]
    pub fn op_inv(&self, a: usize, b: usize) -> usize {
        self.inv_table[a][b]
    }

    /// Orbit partition of `0..n-1` under all maps `a -> a^b` and their
    /// inverses: the finest partition closed under the rack operation.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.size;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut x = x;
            while parent[x] != r {
                let next = parent[x];
                parent[x] = r;
                x = next;
            }
            r
        }
        for a in 0..n {
            for b in 0..n {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, self.table[a][b]));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for a in 0..n {
            let r = find(&mut parent, a);
            groups.entry(r).or_default().push(a);
        }
        groups.into_values().collect()
    }

    /// Abelianisation of the associated group `< x in X | a^b = b^-1 a b >`,
    /// i.e. the free abelian group on the elements modulo `a = a^b`, in
    /// invariant-factor form.
    pub fn associated_group_abelianized(&self) -> AbelianGroup {
        let n = self.size;
        let mut entries = Vec::new();
        let mut row = 0usize;
        for a in 0..n {
            for b in 0..n {
                let c = self.table[a][b];
                if c != a {
                    entries.push((row, a, BigInt::from(1)));
                    entries.push((row, c, BigInt::from(-1)));
                    row += 1;
                }
            }
        }
        let m = SparseIntMatrix::from_triplets(row, n, entries).expect("valid relation matrix");
        let snf = smith_normal_form(&m);
        let torsion: Vec<BigInt> = snf.factors.iter().filter(|d| **d > BigInt::from(1)).cloned().collect();
        AbelianGroup::new(n - snf.rank, torsion)
    }

    /// Canonical byte-exact file form: `{"size":n,"table":[[...],...]}` with
    /// no internal whitespace and no trailing newline.
    pub fn to_canonical_json(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("{{\"size\":{},\"table\":[", self.size));
        for (a, row) in self.table.iter().enumerate() {
            if a > 0 {
                s.push(',');
            }
            s.push('[');
            for (b, v) in row.iter().enumerate() {
                if b > 0 {
                    s.push(',');
                }
                s.push_str(&v.to_string());
            }
            s.push(']');
        }
        s.push_str("]}");
        s
    }

    /// Reads a group multiplication table from JSON
    /// (`{"size": n, "mul": [[...], ...]}`) and builds its conjugation rack.
    pub fn conjugation_from_json(text: &str) -> Result<Rack, RackError> {
        #[derive(Deserialize)]
        struct GroupFile {
            size: usize,
            mul: Vec<Vec<usize>>,
        }
        let file: GroupFile = serde_json::from_str(text).map_err(|e| RackError::BadSpec {
            spec: "<group json>".into(),
            reason: e.to_string(),
        })?;
        if file.mul.len() != file.size {
            return Err(RackError::BadGroup {
                reason: format!("table has {} rows, expected {}", file.mul.len(), file.size),
            });
        }
        Self::conjugation(&file.mul)
    }

    /// Reads the JSON rack format, rejecting ragged or out-of-range tables
    /// and verifying the rack axioms.
    pub fn from_json(text: &str) -> Result<Rack, RackError> {
        Self::from_table(Self::table_from_json(text)?)
    }

    /// Reads just the operation table from the JSON rack format, validating
    /// shape and range but not the rack axioms.
    pub fn table_from_json(text: &str) -> Result<Vec<Vec<usize>>, RackError> {
        let file: RackFile = serde_json::from_str(text).map_err(|e| RackError::BadSpec {
            spec: "<json>".into(),
            reason: e.to_string(),
        })?;
        if file.table.len() != file.size {
            return Err(RackError::Ragged {
                row: file.table.len(),
                got: file.table.len(),
                expected: file.size,
            });
        }
        let checked = Self::from_table_unchecked(file.table)?;
        Ok(checked.table().to_vec())
    }

    /// Parses the inline rack grammar used by the CLI:
    /// `trivial:N`, `dihedral:N`, `cyclic:W`, `perm:(0 1 2)(3 4)`.
    pub fn parse_spec(spec: &str) -> Result<Rack, RackError> {
        let bad = |reason: &str| RackError::BadSpec { spec: spec.to_string(), reason: reason.to_string() };
        let (kind, params) = spec.split_once(':').ok_or_else(|| bad("expected kind:params"))?;
        match kind {
            "trivial" | "dihedral" | "cyclic" => {
                let n: usize = params.parse().map_err(|_| bad("expected a positive integer"))?;
                match kind {
                    "trivial" => Rack::trivial(n),
                    "dihedral" => Rack::dihedral(n),
                    _ => Rack::cyclic(n),
                }
            }
            "perm" => {
                let cycles = parse_cycles(params).map_err(|r| bad(&r))?;
                let n = 1 + cycles.iter().flatten().copied().max().ok_or_else(|| bad("no cycles given"))?;
                let mut rho: Vec<usize> = (0..n).collect();
                for cycle in &cycles {
                    for w in 0..cycle.len() {
                        rho[cycle[w]] = cycle[(w + 1) % cycle.len()];
                    }
                }
                Rack::permutation(&rho)
            }
            _ => Err(bad("unknown kind (expected trivial, dihedral, cyclic or perm)")),
        }
    }
}

fn parse_cycles(text: &str) -> Result<Vec<Vec<usize>>, String> {
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    let mut seen = std::collections::BTreeSet::new();
    while !rest.is_empty() {
        if !rest.starts_with('(') {
            return Err(format!("expected '(' at `{rest}`"));
        }
        let end = rest.find(')').ok_or("unclosed cycle")?;
        let inner = &rest[1..end];
        let cycle: Vec<usize> = inner
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| format!("bad index `{t}`")))
            .collect::<Result<_, _>>()?;
        if cycle.is_empty() {
            return Err("empty cycle".into());
        }
        for &v in &cycle {
            if !seen.insert(v) {
                return Err(format!("index {v} repeats across cycles"));
            }
        }
        cycles.push(cycle);
        rest = rest[end + 1..].trim_start();
    }
    if cycles.is_empty() {
        return Err("no cycles given".into());
    }
    Ok(cycles)
}

/// Checks the two rack axioms on a square table. `Ok(())` means every column
/// is a bijection and the rack identity `(a^b)^c = (a^c)^(b^c)` holds for all
/// triples; otherwise all violations are reported with witnesses.
pub fn check_rack_axioms(table: &[Vec<usize>]) -> Result<(), Vec<AxiomViolation>> {
    let n = table.len();
    for (a, row) in table.iter().enumerate() {
        assert_eq!(row.len(), n, "malformed table: row {a} is ragged");
        for (b, &v) in row.iter().enumerate() {
            assert!(v < n, "malformed table: entry ({a},{b}) out of range");
        }
    }
    let mut violations = Vec::new();
    for b in 0..n {
        let mut seen = vec![false; n];
        for a in 0..n {
            let v = table[a][b];
            if seen[v] {
                violations.push(AxiomViolation::NotBijective { col: b, value: v });
            }
            seen[v] = true;
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let lhs = table[table[a][b]][c];
                let rhs = table[table[a][c]][table[b][c]];
                if lhs != rhs {
                    violations.push(AxiomViolation::Identity { a, b, c, lhs, rhs });
                }
            }
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// A finitely generated abelian group in invariant-factor form:
/// `Z^rank + Z/d1 + Z/d2 + ...` with `d1 | d2 | ...`, every `di >= 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn new(rank: usize, torsion: Vec<BigInt>) -> AbelianGroup {
        for w in torsion.windows(2) {
            debug_assert!((&w[1] % &w[0]).sign() == num_bigint::Sign::NoSign, "divisibility chain");
        }
        debug_assert!(torsion.iter().all(|d| *d >= BigInt::from(2)));
        AbelianGroup { rank, torsion }
    }

    pub fn free(rank: usize) -> AbelianGroup {
        AbelianGroup { rank, torsion: Vec::new() }
    }

    /// `r;d1,d2,...` on one line.
    pub fn machine_format(&self) -> String {
        let factors: Vec<String> = self.torsion.iter().map(|d| d.to_string()).collect();
        format!("{};{}", self.rank, factors.join(","))
    }
}

impl fmt::Display for AbelianGroup {
    /// Canonical print: `Z^r` if there is no torsion, else
    /// `Z^r + Z/d1 + Z/d2 ...` with factors ascending.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z^{}", self.rank)?;
        for d in &self.torsion {
            write!(f, " + Z/{d}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("relation {index} names unknown generator `{name}`")]
    UnknownGenerator { index: usize, name: String },
}

/// A rack presented by generators and relations `g^h = k`. The free rack on
/// n generators is the presentation with no relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedRack {
    generators: Vec<String>,
    /// `[g, h, k]` meaning `g^h = k`, as indices into `generators`.
    relations: Vec<[usize; 3]>,
}

impl PresentedRack {
    pub fn new(generators: Vec<String>, relations: Vec<[usize; 3]>) -> PresentedRack {
        for r in &relations {
            assert!(r.iter().all(|&g| g < generators.len()), "relation index out of range");
        }
        PresentedRack { generators, relations }
    }

    /// Builds a presentation from named relations, rejecting relations that
    /// mention a generator missing from the list.
    pub fn from_named(
        generators: Vec<String>,
        relations: &[(String, String, String)],
    ) -> Result<PresentedRack, PresentationError> {
        let index: BTreeMap<&str, usize> =
            generators.iter().enumerate().map(|(i, g)| (g.as_str(), i)).collect();
        let mut rels = Vec::with_capacity(relations.len());
        for (i, (g, h, k)) in relations.iter().enumerate() {
            let look = |name: &String| {
                index.get(name.as_str()).copied().ok_or_else(|| PresentationError::UnknownGenerator {
                    index: i,
                    name: name.clone(),
                })
            };
            rels.push([look(g)?, look(h)?, look(k)?]);
        }
        Ok(PresentedRack { generators, relations: rels })
    }

    /// The free rack on `n` generators.
    pub fn free(n: usize) -> PresentedRack {
        PresentedRack {
            generators: (0..n).map(|i| format!("a{i}")).collect(),
            relations: Vec::new(),
        }
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relations(&self) -> &[[usize; 3]] {
        &self.relations
    }
}

/// What `enumerate_homs` should produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomSearchMode {
    Count,
    List,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSearch {
    pub count: usize,
    /// One assignment per homomorphism, indexed like the generator list.
    /// Present in `List` mode only, in lexicographic order.
    pub homs: Option<Vec<Vec<usize>>>,
}

/// Enumerates all rack homomorphisms from a presented rack to a finite rack:
/// assignments generator -> element satisfying every relation `g^h = k`.
///
/// Backtracking with forward propagation: a relation with two of its three
/// slots assigned forces the third (`k = g^h`, or `g = k` op-inverse `h`).
/// Generators are tried most-constrained first (descending relation degree,
/// ties by index); the result does not depend on the order.
pub fn enumerate_homs(src: &PresentedRack, dst: &Rack, mode: HomSearchMode) -> HomSearch {
    let n = src.generators.len();
    let mut degree = vec![0usize; n];
    for r in src.relations() {
        for &g in r {
            degree[g] += 1;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&g| (std::cmp::Reverse(degree[g]), g));

    // relations touching each generator, for propagation
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (ri, r) in src.relations().iter().enumerate() {
        for &g in r {
            if !touching[g].contains(&ri) {
                touching[g].push(ri);
            }
        }
    }

    let mut assignment: Vec<Option<usize>> = vec![None; n];
    let mut count = 0usize;
    let mut homs = Vec::new();
    let list = mode == HomSearchMode::List;

    // Propagates consequences of assigning `g`; returns the stack of forced
    // generators (including `g`) or None on conflict.
    fn propagate(
        src: &PresentedRack,
        dst: &Rack,
        touching: &[Vec<usize>],
        assignment: &mut [Option<usize>],
        g: usize,
        v: usize,
    ) -> Option<Vec<usize>> {
        let mut trail = vec![g];
        assignment[g] = Some(v);
        let mut queue = vec![g];
        while let Some(g) = queue.pop() {
            for &ri in &touching[g] {
                let [x, y, z] = src.relations()[ri];
                match (assignment[x], assignment[y], assignment[z]) {
                    (Some(a), Some(b), Some(c)) => {
                        if dst.op(a, b) != c {
                            for t in trail {
                                assignment[t] = None;
                            }
                            return None;
                        }
                    }
                    (Some(a), Some(b), None) => {
                        assignment[z] = Some(dst.op(a, b));
                        trail.push(z);
                        queue.push(z);
                    }
                    (None, Some(b), Some(c)) => {
                        assignment[x] = Some(dst.op_inv(c, b));
                        trail.push(x);
                        queue.push(x);
                    }
                    // g^h = k with h unknown does not force h.
                    _ => {}
                }
            }
        }
        Some(trail)
    }

    fn search(
        src: &PresentedRack,
        dst: &Rack,
        order: &[usize],
        touching: &[Vec<usize>],
        assignment: &mut [Option<usize>],
        count: &mut usize,
        homs: &mut Vec<Vec<usize>>,
        list: bool,
    ) {
        let next = order.iter().copied().find(|&g| assignment[g].is_none());
        let Some(g) = next else {
            *count += 1;
            if list {
                homs.push(assignment.iter().map(|v| v.unwrap()).collect());
            }
            return;
        };
        for v in 0..dst.size() {
            if let Some(trail) = propagate(src, dst, touching, assignment, g, v) {
                search(src, dst, order, touching, assignment, count, homs, list);
                for t in trail {
                    assignment[t] = None;
                }
            }
        }
    }

    search(src, dst, &order, &touching, &mut assignment, &mut count, &mut homs, list);
    if list {
        homs.sort();
        HomSearch { count, homs: Some(homs) }
    } else {
        HomSearch { count, homs: None }
    }
}
