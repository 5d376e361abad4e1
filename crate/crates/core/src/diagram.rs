//! Oriented classical and virtual link diagrams at the Gauss-code level:
//! parsing, arcs, writhe, the fundamental rack presentation, and colorings.

use std::collections::BTreeMap;
use std::fmt;

use serde::Deserialize;
use thiserror::Error;

use crate::rack::{enumerate_homs, HomSearch, HomSearchMode, PresentedRack, Rack};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Role {
    Over,
    Under,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossingKind {
    Real,
    Virtual,
}

/// A crossing record. For virtual crossings the over/under roles are slot
/// names only and the sign is unused.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub sign: i8,
    pub kind: CrossingKind,
}

/// One passage of a strand through a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Passage {
    pub crossing: usize,
    pub role: Role,
}

/// A gap between consecutive passages of a component: the edge following
/// passage `gap` (a crossing-free circle has the single gap 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GapRef {
    pub component: usize,
    pub gap: usize,
}

impl fmt::Display for GapRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}.{}", self.component, self.gap)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("parse error at token {token}: {reason}")]
    Parse { token: usize, reason: String },
    #[error("invalid diagram: {reason}")]
    Invalid { reason: String },
    #[error("diagram has no Gauss code: {reason}")]
    UnrepresentableGauss { reason: String },
    #[error("labelling error: {reason}")]
    Labelling { reason: String },
}

fn parse_err(token: usize, reason: impl Into<String>) -> DiagramError {
    DiagramError::Parse { token, reason: reason.into() }
}

/// An oriented (virtual) link diagram, stored at the Gauss-code level:
/// components are cyclic passage sequences, and edges are the gaps between
/// consecutive passages. A component with no passages is a crossing-free
/// circle with a single edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    components: Vec<Vec<Passage>>,
}

impl LinkDiagram {
    /// Validates that every crossing is traversed exactly once as Over and
    /// once as Under.
    pub fn from_components(
        crossings: Vec<Crossing>,
        components: Vec<Vec<Passage>>,
    ) -> Result<LinkDiagram, DiagramError> {
        let mut seen: Vec<[usize; 2]> = vec![[0, 0]; crossings.len()];
        for comp in &components {
            for p in comp {
                if p.crossing >= crossings.len() {
                    return Err(DiagramError::Invalid {
                        reason: format!("passage names unknown crossing {}", p.crossing),
                    });
                }
                seen[p.crossing][(p.role == Role::Under) as usize] += 1;
            }
        }
        for (c, counts) in seen.iter().enumerate() {
            if *counts != [1, 1] {
                return Err(DiagramError::Invalid {
                    reason: format!(
                        "crossing {c} traversed {} times over and {} under",
                        counts[0], counts[1]
                    ),
                });
            }
        }
        for (c, x) in crossings.iter().enumerate() {
            if x.sign != 1 && x.sign != -1 {
                return Err(DiagramError::Invalid { reason: format!("crossing {c} has sign {}", x.sign) });
            }
        }
        Ok(LinkDiagram { crossings, components })
    }

    /// The crossing-free unknot: one circle.
    pub fn unknot() -> LinkDiagram {
        LinkDiagram { crossings: Vec::new(), components: vec![Vec::new()] }
    }

    /// The empty diagram.
    pub fn empty() -> LinkDiagram {
        LinkDiagram { crossings: Vec::new(), components: Vec::new() }
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn components(&self) -> &[Vec<Passage>] {
        &self.components
    }

    pub fn real_crossing_count(&self) -> usize {
        self.crossings.iter().filter(|c| c.kind == CrossingKind::Real).count()
    }

    /// Number of gaps (edges) of a component.
    pub fn gap_count(&self, component: usize) -> usize {
        self.components[component].len().max(1)
    }

    /// Sum of signs over real crossings.
    pub fn writhe(&self) -> i64 {
        self.crossings
            .iter()
            .filter(|c| c.kind == CrossingKind::Real)
            .map(|c| c.sign as i64)
            .sum()
    }

    /// Where each crossing is traversed: (over passage, under passage) as
    /// (component, position) pairs.
    pub fn passage_positions(&self) -> Vec<[(usize, usize); 2]> {
        let mut out = vec![[(usize::MAX, usize::MAX); 2]; self.crossings.len()];
        for (ci, comp) in self.components.iter().enumerate() {
            for (pi, p) in comp.iter().enumerate() {
                out[p.crossing][(p.role == Role::Under) as usize] = (ci, pi);
            }
        }
        out
    }

    /// Arc decomposition: arcs are maximal gap runs not interrupted at
    /// over-passages or virtual crossings, broken exactly at under-passages
    /// of real crossings.
    pub fn arcs(&self) -> Arcs {
        let mut arc_of: Vec<Vec<usize>> = Vec::with_capacity(self.components.len());
        let mut count = 0usize;
        for comp in &self.components {
            let m = comp.len().max(1);
            let mut ids = vec![usize::MAX; m];
            let breaking: Vec<bool> = if comp.is_empty() {
                vec![false]
            } else {
                comp.iter()
                    .map(|p| {
                        p.role == Role::Under && self.crossings[p.crossing].kind == CrossingKind::Real
                    })
                    .collect()
            };
            if breaking.iter().all(|b| !b) {
                ids.fill(count);
                count += 1;
            } else {
                // gap g-1 and gap g join unless passage g breaks; scan with
                // wrap-around so the arc through gap 0 keeps one id
                let mut local: Vec<usize> = vec![usize::MAX; m];
                let mut next_local = 0usize;
                for g in 0..m {
                    if g == 0 || breaking[g] {
                        local[g] = next_local;
                        next_local += 1;
                    } else {
                        local[g] = local[g - 1];
                    }
                }
                // wrap: gap m-1 joins gap 0 unless passage 0 breaks
                if !breaking[0] {
                    let tail = local[m - 1];
                    for v in local.iter_mut() {
                        if *v == tail {
                            *v = 0;
                        }
                    }
                }
                // renumber by first appearance, offset by the global count
                let mut remap: BTreeMap<usize, usize> = BTreeMap::new();
                for g in 0..m {
                    let next_id = count + remap.len();
                    let id = *remap.entry(local[g]).or_insert(next_id);
                    ids[g] = id;
                }
                count += remap.len();
            }
            arc_of.push(ids);
        }
        // incidences at real crossings
        let positions = self.passage_positions();
        let mut crossing_arcs = BTreeMap::new();
        for (x, pos) in positions.iter().enumerate() {
            if self.crossings[x].kind != CrossingKind::Real {
                continue;
            }
            let (oc, op) = pos[0];
            let (uc, up) = pos[1];
            let m = self.components[uc].len();
            let under_in = arc_of[uc][(up + m - 1) % m];
            let under_out = arc_of[uc][up];
            let over = arc_of[oc][op];
            crossing_arcs.insert(x, CrossingArcs { under_in, over, under_out });
        }
        Arcs { arc_of, count, crossing_arcs }
    }

    /// One generator per arc; one relation per real crossing, reading
    /// `under_out = under_in ^ over` at positive crossings and
    /// `under_in = under_out ^ over` at negative ones. Virtual crossings
    /// contribute nothing.
    pub fn fundamental_rack(&self) -> PresentedRack {
        let arcs = self.arcs();
        let generators: Vec<String> = (0..arcs.count).map(|i| format!("a{i}")).collect();
        let mut relations = Vec::new();
        for (x, inc) in &arcs.crossing_arcs {
            let relation = if self.crossings[*x].sign > 0 {
                [inc.under_in, inc.over, inc.under_out]
            } else {
                [inc.under_out, inc.over, inc.under_in]
            };
            relations.push(relation);
        }
        PresentedRack::new(generators, relations)
    }

    /// Counts (or lists) the labellings of the diagram by a rack: rack
    /// homomorphisms from the fundamental rack.
    pub fn colorings(&self, rack: &Rack, mode: HomSearchMode) -> Colorings {
        let arcs = self.arcs();
        let search: HomSearch = enumerate_homs(&self.fundamental_rack(), rack, mode);
        let labellings = search.homs.map(|homs| {
            homs.into_iter()
                .map(|assignment| Labelling {
                    labels: assignment.into_iter().enumerate().collect(),
                })
                .collect()
        });
        let _ = arcs;
        Colorings { count: search.count, labellings }
    }

    /// The Gauss code of the diagram: `O<k><sign>` / `U<k><sign>` tokens,
    /// components joined by ` / `, crossings renumbered from 1 by first
    /// appearance. Fails on crossing-free circles (the grammar has no token
    /// for them) and on virtual crossings (they are unrecorded).
    pub fn print_gauss(&self) -> Result<String, DiagramError> {
        if self.crossings.iter().any(|c| c.kind == CrossingKind::Virtual) {
            return Err(DiagramError::UnrepresentableGauss {
                reason: "virtual crossings are not recorded in Gauss codes".into(),
            });
        }
        if self.components.iter().any(|c| c.is_empty()) {
            return Err(DiagramError::UnrepresentableGauss {
                reason: "crossing-free circles have no tokens".into(),
            });
        }
        let mut numbers: BTreeMap<usize, usize> = BTreeMap::new();
        let mut parts: Vec<String> = Vec::new();
        for comp in &self.components {
            let mut tokens = Vec::with_capacity(comp.len());
            for p in comp {
                let next = numbers.len() + 1;
                let k = *numbers.entry(p.crossing).or_insert(next);
                let role = if p.role == Role::Over { 'O' } else { 'U' };
                let sign = if self.crossings[p.crossing].sign > 0 { '+' } else { '-' };
                tokens.push(format!("{role}{k}{sign}"));
            }
            parts.push(tokens.join(" "));
        }
        Ok(parts.join(" / "))
    }

    /// Parses a Gauss code: whitespace-separated `O<k><sign>` / `U<k><sign>`
    /// tokens, components separated by `/`. Every crossing label must occur
    /// exactly once as O and once as U, with equal signs. Empty input is the
    /// empty diagram; an empty component between separators is an error.
    pub fn parse_gauss(text: &str) -> Result<LinkDiagram, DiagramError> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.is_empty() {
            return Ok(LinkDiagram::empty());
        }
        struct Occurrence {
            token: usize,
            role: Role,
            sign: i8,
        }
        let mut label_info: BTreeMap<String, Vec<Occurrence>> = BTreeMap::new();
        let mut components: Vec<Vec<(String, Role)>> = Vec::new();
        let mut current: Vec<(String, Role)> = Vec::new();
        let mut last_sep_token = 0usize;
        for (idx, tok) in tokens.iter().enumerate() {
            let tno = idx + 1;
            if *tok == "/" {
                if current.is_empty() {
                    return Err(parse_err(tno, "empty component"));
                }
                components.push(std::mem::take(&mut current));
                last_sep_token = tno;
                continue;
            }
            let mut chars = tok.chars();
            let role = match chars.next() {
                Some('O') => Role::Over,
                Some('U') => Role::Under,
                _ => return Err(parse_err(tno, format!("expected O<k><sign> or U<k><sign>, got `{tok}`"))),
            };
            let rest: String = chars.collect();
            let sign = match rest.chars().last() {
                Some('+') => 1i8,
                Some('-') => -1i8,
                _ => return Err(parse_err(tno, format!("missing sign in `{tok}`"))),
            };
            let label = &rest[..rest.len() - 1];
            if label.is_empty() || !label.chars().all(|c| c.is_ascii_digit()) {
                return Err(parse_err(tno, format!("bad crossing label in `{tok}`")));
            }
            label_info
                .entry(label.to_string())
                .or_default()
                .push(Occurrence { token: tno, role, sign });
            current.push((label.to_string(), role));
        }
        if current.is_empty() {
            return Err(parse_err(last_sep_token, "empty component"));
        }
        components.push(current);

        // assign crossing indices by first appearance, validating pairs
        let mut order: Vec<(usize, String)> = label_info
            .iter()
            .map(|(label, occ)| (occ.iter().map(|o| o.token).min().unwrap(), label.clone()))
            .collect();
        order.sort();
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let mut crossings = Vec::new();
        for (_, label) in order {
            let occ = &label_info[&label];
            if occ.len() != 2 {
                return Err(parse_err(
                    occ.last().unwrap().token,
                    format!("crossing {label} appears {} times, expected exactly 2", occ.len()),
                ));
            }
            if occ[0].role == occ[1].role {
                return Err(parse_err(
                    occ[1].token,
                    format!("crossing {label} appears twice as {:?}", occ[0].role),
                ));
            }
            if occ[0].sign != occ[1].sign {
                return Err(parse_err(occ[1].token, format!("sign mismatch on crossing {label}")));
            }
            index.insert(label, crossings.len());
            crossings.push(Crossing { sign: occ[0].sign, kind: CrossingKind::Real });
        }
        let components = components
            .into_iter()
            .map(|comp| {
                comp.into_iter()
                    .map(|(label, role)| Passage { crossing: index[&label], role })
                    .collect()
            })
            .collect();
        LinkDiagram::from_components(crossings, components)
    }

    /// Parses planar-diagram notation: whitespace-separated `X[a,b,c,d]`
    /// (real) and `V[a,b,c,d]` (virtual) tokens. Edge ids counterclockwise
    /// starting at the under-incoming edge; the under strand runs a -> c;
    /// the over strand orientation is inferred from edge succession, and the
    /// sign is +1 when the over strand crosses the oriented under strand
    /// left to right.
    pub fn parse_pd(text: &str) -> Result<LinkDiagram, DiagramError> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.is_empty() {
            return Ok(LinkDiagram::empty());
        }
        struct PdCrossing {
            token: usize,
            kind: CrossingKind,
            edges: [u64; 4],
        }
        let mut pd = Vec::new();
        for (idx, tok) in tokens.iter().enumerate() {
            let tno = idx + 1;
            let (kind, body) = if let Some(b) = tok.strip_prefix("X[") {
                (CrossingKind::Real, b)
            } else if let Some(b) = tok.strip_prefix("V[") {
                (CrossingKind::Virtual, b)
            } else {
                return Err(parse_err(tno, format!("expected X[a,b,c,d] or V[a,b,c,d], got `{tok}`")));
            };
            let body = body
                .strip_suffix(']')
                .ok_or_else(|| parse_err(tno, format!("missing `]` in `{tok}`")))?;
            let nums: Vec<u64> = body
                .split(',')
                .map(|s| s.parse().map_err(|_| parse_err(tno, format!("bad edge id `{s}`"))))
                .collect::<Result<_, _>>()?;
            if nums.len() != 4 {
                return Err(parse_err(tno, format!("expected 4 edge ids, got {}", nums.len())));
            }
            pd.push(PdCrossing { token: tno, kind, edges: [nums[0], nums[1], nums[2], nums[3]] });
        }

        // Every edge id must appear exactly twice.
        #[derive(Clone, Copy, PartialEq)]
        enum Slot {
            UnderIn,  // a: the edge ends here
            B,        // unknown until resolved
            UnderOut, // c: the edge starts here
            D,
        }
        let slots = [Slot::UnderIn, Slot::B, Slot::UnderOut, Slot::D];
        let mut occurrences: BTreeMap<u64, Vec<(usize, usize)>> = BTreeMap::new();
        for (x, c) in pd.iter().enumerate() {
            for (s, &e) in c.edges.iter().enumerate() {
                occurrences.entry(e).or_default().push((x, s));
            }
        }
        for (e, occ) in &occurrences {
            if occ.len() != 2 {
                let tok = pd[occ.last().unwrap().0].token;
                return Err(parse_err(tok, format!("edge {e} used {} times, expected 2", occ.len())));
            }
        }

        // Resolve whether each edge starts or ends at each occurrence.
        // ends[e] = (crossing, slot) where edge e terminates.
        // Roles at a/c slots are fixed; over-pair slots propagate: within a
        // crossing, exactly one of b/d is the over entry.
        let mut is_end: BTreeMap<(usize, usize), bool> = BTreeMap::new();
        let mut queue: Vec<(usize, usize, bool)> = Vec::new();
        for (x, c) in pd.iter().enumerate() {
            let _ = c;
            queue.push((x, 0, true));
            queue.push((x, 2, false));
        }
        let mut conflict: Option<usize> = None;
        let resolve = |queue: &mut Vec<(usize, usize, bool)>,
                           is_end: &mut BTreeMap<(usize, usize), bool>,
                           conflict: &mut Option<usize>| {
            while let Some((x, s, end)) = queue.pop() {
                if let Some(&prev) = is_end.get(&(x, s)) {
                    if prev != end {
                        *conflict = Some(pd[x].token);
                        return;
                    }
                    continue;
                }
                is_end.insert((x, s), end);
                // partner slot within an over pair carries the opposite role
                if s == 1 || s == 3 {
                    let partner = if s == 1 { 3 } else { 1 };
                    queue.push((x, partner, !end));
                }
                // the other occurrence of this edge carries the opposite role
                let e = pd[x].edges[s];
                let occ = &occurrences[&e];
                for &(ox, os) in occ {
                    if (ox, os) != (x, s) {
                        queue.push((ox, os, !end));
                    }
                }
            }
        };
        resolve(&mut queue, &mut is_end, &mut conflict);
        // orient leftover over-only loops: b is the entry by convention
        for x in 0..pd.len() {
            if !is_end.contains_key(&(x, 1)) {
                queue.push((x, 1, true));
                resolve(&mut queue, &mut is_end, &mut conflict);
            }
        }
        if let Some(token) = conflict {
            return Err(parse_err(token, "inconsistent edge orientations"));
        }

        // Build crossings with resolved ports and signs.
        let mut crossings = Vec::with_capacity(pd.len());
        let mut succ: BTreeMap<u64, u64> = BTreeMap::new();
        // where each edge ends: (crossing, role at that port)
        let mut end_port: BTreeMap<u64, (usize, Role)> = BTreeMap::new();
        for (x, c) in pd.iter().enumerate() {
            let b_is_entry = is_end[&(x, 1)];
            let (over_in_slot, over_out_slot) = if b_is_entry { (1, 3) } else { (3, 1) };
            let sign = match c.kind {
                // over entering at d crosses the upward under strand west
                // to east: positive
                CrossingKind::Real => {
                    if b_is_entry {
                        -1
                    } else {
                        1
                    }
                }
                CrossingKind::Virtual => 1,
            };
            crossings.push(Crossing { sign, kind: c.kind });
            let a = c.edges[0];
            let out_c = c.edges[2];
            let over_in = c.edges[over_in_slot];
            let over_out = c.edges[over_out_slot];
            if succ.insert(a, out_c).is_some() {
                return Err(parse_err(c.token, format!("edge {a} terminates twice")));
            }
            end_port.insert(a, (x, Role::Under));
            if succ.insert(over_in, over_out).is_some() {
                return Err(parse_err(c.token, format!("edge {over_in} terminates twice")));
            }
            end_port.insert(over_in, (x, Role::Over));
            let _ = slots;
        }

        // Trace circuits; components ordered by smallest edge id.
        let mut components = Vec::new();
        let mut visited: BTreeMap<u64, bool> = succ.keys().map(|e| (*e, false)).collect();
        let edge_ids: Vec<u64> = succ.keys().copied().collect();
        for &start in &edge_ids {
            if visited[&start] {
                continue;
            }
            let mut passages = Vec::new();
            let mut e = start;
            loop {
                visited.insert(e, true);
                let (x, role) = end_port[&e];
                passages.push(Passage { crossing: x, role });
                e = succ[&e];
                if e == start {
                    break;
                }
            }
            components.push(passages);
        }
        LinkDiagram::from_components(crossings, components)
    }
}

/// Arc incidences of one real crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrossingArcs {
    pub under_in: usize,
    pub over: usize,
    pub under_out: usize,
}

/// The arc decomposition of a diagram: arc index per gap, the number of
/// arcs, and the (under-in, over, under-out) arcs at every real crossing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arcs {
    arc_of: Vec<Vec<usize>>,
    count: usize,
    crossing_arcs: BTreeMap<usize, CrossingArcs>,
}

impl Arcs {
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn arc_of(&self, gap: GapRef) -> usize {
        self.arc_of[gap.component][gap.gap]
    }

    pub fn at_crossing(&self, crossing: usize) -> Option<&CrossingArcs> {
        self.crossing_arcs.get(&crossing)
    }

    pub fn crossing_arcs(&self) -> &BTreeMap<usize, CrossingArcs> {
        &self.crossing_arcs
    }
}

/// An arc labelling: arc index to rack element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labelling {
    pub labels: BTreeMap<usize, usize>,
}

#[derive(Deserialize)]
struct LabellingFile {
    rack: String,
    labels: BTreeMap<String, usize>,
}

impl Labelling {
    /// Checks the crossing invariant everywhere: at a positive crossing
    /// `under_out = under_in ^ over`, at a negative one
    /// `under_in = under_out ^ over`; every arc labelled, labels in range.
    pub fn validate(&self, diagram: &LinkDiagram, rack: &Rack) -> Result<(), DiagramError> {
        let arcs = diagram.arcs();
        for arc in 0..arcs.count() {
            match self.labels.get(&arc) {
                None => {
                    return Err(DiagramError::Labelling { reason: format!("arc {arc} unlabelled") })
                }
                Some(&v) if v >= rack.size() => {
                    return Err(DiagramError::Labelling {
                        reason: format!("arc {arc} labelled {v}, rack has {} elements", rack.size()),
                    })
                }
                _ => {}
            }
        }
        for (x, inc) in arcs.crossing_arcs() {
            let a_in = self.labels[&inc.under_in];
            let over = self.labels[&inc.over];
            let a_out = self.labels[&inc.under_out];
            let ok = if diagram.crossings()[*x].sign > 0 {
                rack.op(a_in, over) == a_out
            } else {
                rack.op(a_out, over) == a_in
            };
            if !ok {
                return Err(DiagramError::Labelling {
                    reason: format!(
                        "crossing {x} violates the crossing relation: arcs ({}, {}, {}) labelled ({a_in}, {over}, {a_out})",
                        inc.under_in, inc.over, inc.under_out
                    ),
                });
            }
        }
        Ok(())
    }

    /// Labelling file: `{"rack": <spec-or-path>, "labels": {"<arc>": elem}}`.
    /// Returns the rack reference string alongside the labelling.
    pub fn from_json(text: &str) -> Result<(String, Labelling), DiagramError> {
        let file: LabellingFile = serde_json::from_str(text)
            .map_err(|e| DiagramError::Labelling { reason: e.to_string() })?;
        let mut labels = BTreeMap::new();
        for (k, v) in file.labels {
            let arc: usize = k
                .parse()
                .map_err(|_| DiagramError::Labelling { reason: format!("bad arc id `{k}`") })?;
            labels.insert(arc, v);
        }
        Ok((file.rack, Labelling { labels }))
    }

    pub fn to_json(&self, rack_ref: &str) -> String {
        let entries: Vec<String> =
            self.labels.iter().map(|(arc, v)| format!("\"{arc}\":{v}")).collect();
        format!("{{\"rack\":\"{rack_ref}\",\"labels\":{{{}}}}}", entries.join(","))
    }
}

/// Result of a coloring count or enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Colorings {
    pub count: usize,
    pub labellings: Option<Vec<Labelling>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rack::HomSearchMode;

    pub(crate) const TREFOIL: &str = "O1+ U2+ O3+ U1+ O2+ U3+";
    pub(crate) const FIGURE_EIGHT: &str = "O1+ U2+ O3- U4- O2+ U1+ O4- U3-";
    pub(crate) const VIRTUAL_TREFOIL: &str = "O1+ O2+ U1+ U2+";

    #[test]
    fn gauss_trefoil_shape() {
        let d = LinkDiagram::parse_gauss(TREFOIL).unwrap();
        assert_eq!(d.crossings().len(), 3);
        assert_eq!(d.components().len(), 1);
        assert_eq!(d.writhe(), 3);
        assert_eq!(d.arcs().count(), 3);
    }

    #[test]
    fn gauss_empty_and_errors() {
        assert_eq!(LinkDiagram::parse_gauss("").unwrap(), LinkDiagram::empty());
        assert!(matches!(
            LinkDiagram::parse_gauss("O1+ U1-"),
            Err(DiagramError::Parse { token: 2, .. })
        ));
        assert!(LinkDiagram::parse_gauss("O1+ U2+").is_err()); // unmatched labels
        assert!(LinkDiagram::parse_gauss("O1+ U1+ /").is_err()); // empty component
        assert!(LinkDiagram::parse_gauss("O1+ O1+").is_err()); // twice over
        assert!(LinkDiagram::parse_gauss("Q1+").is_err());
    }

    #[test]
    fn gauss_round_trip() {
        for code in [TREFOIL, FIGURE_EIGHT, VIRTUAL_TREFOIL, "O1+ U1+", "O1- U2- / U1- O2-"] {
            let d = LinkDiagram::parse_gauss(code).unwrap();
            let printed = d.print_gauss().unwrap();
            assert_eq!(LinkDiagram::parse_gauss(&printed).unwrap(), d, "{code}");
        }
    }

    #[test]
    fn gauss_print_refuses_circles() {
        assert!(LinkDiagram::unknot().print_gauss().is_err());
    }

    #[test]
    fn writhe_examples() {
        assert_eq!(LinkDiagram::parse_gauss(TREFOIL).unwrap().writhe(), 3);
        let mirror = TREFOIL.replace('+', "-");
        assert_eq!(LinkDiagram::parse_gauss(&mirror).unwrap().writhe(), -3);
        assert_eq!(LinkDiagram::empty().writhe(), 0);
        assert_eq!(LinkDiagram::parse_gauss(FIGURE_EIGHT).unwrap().writhe(), 0);
    }

    #[test]
    fn arcs_examples() {
        assert_eq!(LinkDiagram::unknot().arcs().count(), 1);
        // virtual trefoil: two real crossings in the Gauss code, one virtual
        // crossing in any planar picture; two arcs
        let vt = LinkDiagram::parse_gauss(VIRTUAL_TREFOIL).unwrap();
        assert_eq!(vt.arcs().count(), 2);
    }

    #[test]
    fn trefoil_fundamental_rack_relations() {
        let d = LinkDiagram::parse_gauss(TREFOIL).unwrap();
        let p = d.fundamental_rack();
        assert_eq!(p.generators().len(), 3);
        let mut rels = p.relations().to_vec();
        rels.sort();
        // cyclic pattern: each arc operated on by one of the others gives
        // the third, around the cycle 0 -> 2 -> 1 -> 0 in appearance order
        assert_eq!(rels, vec![[0, 2, 1], [1, 0, 2], [2, 1, 0]]);
    }

    #[test]
    fn unknot_fundamental_rack_is_free() {
        assert_eq!(LinkDiagram::unknot().fundamental_rack(), PresentedRack::free(1));
        let two = LinkDiagram::from_components(Vec::new(), vec![Vec::new(), Vec::new()]).unwrap();
        assert_eq!(two.fundamental_rack(), PresentedRack::free(2));
    }

    #[test]
    fn coloring_counts() {
        let d3 = Rack::dihedral(3).unwrap();
        let trefoil = LinkDiagram::parse_gauss(TREFOIL).unwrap();
        assert_eq!(trefoil.colorings(&d3, HomSearchMode::Count).count, 9);

        // brute-force oracle straight off the crossing incidences
        let arcs = trefoil.arcs();
        let mut oracle = 0usize;
        for bits in 0..27usize {
            let labels = [bits % 3, (bits / 3) % 3, (bits / 9) % 3];
            let ok = arcs.crossing_arcs().iter().all(|(x, inc)| {
                let (a, b, c) = (labels[inc.under_in], labels[inc.over], labels[inc.under_out]);
                if trefoil.crossings()[*x].sign > 0 {
                    d3.op(a, b) == c
                } else {
                    d3.op(c, b) == a
                }
            });
            if ok {
                oracle += 1;
            }
        }
        assert_eq!(oracle, 9);

        let fig8 = LinkDiagram::parse_gauss(FIGURE_EIGHT).unwrap();
        assert_eq!(fig8.arcs().count(), 4);
        assert_eq!(fig8.colorings(&d3, HomSearchMode::Count).count, 3);
        // the figure eight is 5-colorable
        let d5 = Rack::dihedral(5).unwrap();
        assert_eq!(fig8.colorings(&d5, HomSearchMode::Count).count, 25);

        assert_eq!(LinkDiagram::unknot().colorings(&d3, HomSearchMode::Count).count, 3);
        let t2 = Rack::trivial(2).unwrap();
        assert_eq!(trefoil.colorings(&t2, HomSearchMode::Count).count, 2);
    }

    #[test]
    fn listed_colorings_are_valid() {
        let d3 = Rack::dihedral(3).unwrap();
        let trefoil = LinkDiagram::parse_gauss(TREFOIL).unwrap();
        let cols = trefoil.colorings(&d3, HomSearchMode::List);
        let labellings = cols.labellings.unwrap();
        assert_eq!(labellings.len(), 9);
        for l in &labellings {
            l.validate(&trefoil, &d3).unwrap();
        }
    }

    #[test]
    fn pd_trefoil() {
        let d = LinkDiagram::parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap();
        assert_eq!(d.crossings().len(), 3);
        assert_eq!(d.components().len(), 1);
        assert_eq!(d.writhe(), -3);
        assert_eq!(d.arcs().count(), 3);
        let d3 = Rack::dihedral(3).unwrap();
        assert_eq!(d.colorings(&d3, HomSearchMode::Count).count, 9);
    }

    #[test]
    fn pd_one_crossing_loop() {
        // self-consistent one-crossing code: under strand 1 -> 1 and over
        // strand 2 -> 2 close up separately, meeting at the one crossing
        let d = LinkDiagram::parse_pd("X[1,2,1,2]").unwrap();
        assert_eq!(d.crossings().len(), 1);
        assert_eq!(d.writhe().abs(), 1);
        assert_eq!(d.components().len(), 2);
    }

    #[test]
    fn pd_kink_is_one_component() {
        let d = LinkDiagram::parse_pd("X[1,2,2,1]").unwrap();
        assert_eq!(d.crossings().len(), 1);
        assert_eq!(d.components().len(), 1);
        assert_eq!(d.writhe().abs(), 1);
    }

    #[test]
    fn pd_rejects_unbalanced_edges() {
        assert!(matches!(
            LinkDiagram::parse_pd("X[1,2,3,4]"),
            Err(DiagramError::Parse { .. })
        ));
    }

    #[test]
    fn pd_virtual_crossings() {
        let d = LinkDiagram::parse_pd("V[1,3,2,4] V[4,2,3,1]").unwrap();
        assert_eq!(d.components().len(), 2);
        assert_eq!(d.real_crossing_count(), 0);
        assert_eq!(d.writhe(), 0);
        assert_eq!(d.arcs().count(), 2);
    }

    #[test]
    fn labelling_json_round_trip() {
        let l = Labelling { labels: [(0, 2), (1, 0)].into_iter().collect() };
        let text = l.to_json("dihedral:3");
        assert_eq!(text, "{\"rack\":\"dihedral:3\",\"labels\":{\"0\":2,\"1\":0}}");
        let (rack_ref, back) = Labelling::from_json(&text).unwrap();
        assert_eq!(rack_ref, "dihedral:3");
        assert_eq!(back, l);
    }
}
