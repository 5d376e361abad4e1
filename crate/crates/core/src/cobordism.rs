//! Labelled-diagram move calculus (births/deaths, bridges, R2, R3, R11)
//! with the rack compatibility conditions, the degree-2 cycle class of a
//! labelled diagram (the framed virtual-link cobordism invariant), and a
//! bounded reduction search.

use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::cubical::CubicalSet;
use crate::diagram::{
    Crossing, CrossingKind, DiagramError, GapRef, Labelling, LinkDiagram, Passage, Role,
};
use crate::homology::{
    ChainComplex, ClassCoordinates, CycleClassifier, HomologyError, HomologyGroup,
};
use crate::rack::Rack;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MoveError {
    #[error("no component {0}")]
    NoSuchComponent(usize),
    #[error("no gap {0}")]
    NoSuchGap(GapRef),
    #[error("no real crossing x{0}")]
    NoSuchCrossing(usize),
    #[error("label {0} is out of range for the rack")]
    LabelOutOfRange(usize),
    #[error("death needs a crossing-free circle, but component {0} has crossings")]
    DeathNeedsCircle(usize),
    #[error("bridge needs equal labels, but {a} is labelled {la} and {b} is labelled {lb}")]
    BridgeLabelsDiffer { a: GapRef, b: GapRef, la: usize, lb: usize },
    #[error("the two sites coincide")]
    SameSite,
    #[error("crossings x{first}, x{second} are not a cancellable pair: {reason}")]
    NotCancellable { first: usize, second: usize, reason: String },
    #[error("crossings x{r}, x{s}, x{t} do not form a triangle pattern: {reason}")]
    NotTriangle { r: usize, s: usize, t: usize, reason: String },
    #[error("bad move syntax: {0}")]
    Syntax(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// A diagram whose arcs are labelled by a rack, stored with one label per
/// gap so that moves can manipulate labels locally. Values are immutable:
/// moves return new diagrams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelledDiagram {
    diagram: LinkDiagram,
    gap_labels: Vec<Vec<usize>>,
    rack: Rack,
}

impl LabelledDiagram {
    pub fn new(
        diagram: LinkDiagram,
        rack: Rack,
        labelling: &Labelling,
    ) -> Result<LabelledDiagram, DiagramError> {
        labelling.validate(&diagram, &rack)?;
        let arcs = diagram.arcs();
        let gap_labels = (0..diagram.components().len())
            .map(|c| {
                (0..diagram.gap_count(c))
                    .map(|g| labelling.labels[&arcs.arc_of(GapRef { component: c, gap: g })])
                    .collect()
            })
            .collect();
        Ok(LabelledDiagram { diagram, gap_labels, rack })
    }

    pub fn empty(rack: Rack) -> LabelledDiagram {
        LabelledDiagram { diagram: LinkDiagram::empty(), gap_labels: Vec::new(), rack }
    }

    pub fn diagram(&self) -> &LinkDiagram {
        &self.diagram
    }

    pub fn rack(&self) -> &Rack {
        &self.rack
    }

    pub fn gap_label(&self, gap: GapRef) -> usize {
        self.gap_labels[gap.component][gap.gap]
    }

    /// The labels present anywhere in the diagram.
    pub fn label_set(&self) -> BTreeSet<usize> {
        self.gap_labels.iter().flatten().copied().collect()
    }

    /// The arc labelling determined by the gap labels.
    pub fn labelling(&self) -> Labelling {
        let arcs = self.diagram.arcs();
        let mut labels = BTreeMap::new();
        for (c, comp_labels) in self.gap_labels.iter().enumerate() {
            for (g, &v) in comp_labels.iter().enumerate() {
                labels.insert(arcs.arc_of(GapRef { component: c, gap: g }), v);
            }
        }
        Labelling { labels }
    }

    /// Checks that labels are constant along arcs and satisfy the crossing
    /// relation at every real crossing.
    fn validate_labels(&self) -> Result<(), DiagramError> {
        let crossings = self.diagram.crossings();
        for (c, comp) in self.diagram.components().iter().enumerate() {
            let m = comp.len();
            for (t, p) in comp.iter().enumerate() {
                let breaks =
                    p.role == Role::Under && crossings[p.crossing].kind == CrossingKind::Real;
                let before = self.gap_labels[c][(t + m - 1) % m];
                let after = self.gap_labels[c][t];
                if !breaks && before != after {
                    return Err(DiagramError::Labelling {
                        reason: format!(
                            "labels change across a non-breaking passage in component {c} at position {t}"
                        ),
                    });
                }
            }
        }
        let positions = self.diagram.passage_positions();
        for (x, crossing) in crossings.iter().enumerate() {
            if crossing.kind != CrossingKind::Real {
                continue;
            }
            let (uc, up) = positions[x][1];
            let (oc, op) = positions[x][0];
            let m = self.diagram.components()[uc].len();
            let a_in = self.gap_labels[uc][(up + m - 1) % m];
            let a_out = self.gap_labels[uc][up];
            let b = self.gap_labels[oc][op];
            let ok = if crossing.sign > 0 {
                self.rack.op(a_in, b) == a_out
            } else {
                self.rack.op(a_out, b) == a_in
            };
            if !ok {
                return Err(DiagramError::Labelling {
                    reason: format!("crossing {x} violates the crossing relation"),
                });
            }
        }
        Ok(())
    }

    /// The square (a, b) carried by each real crossing: b is the over label
    /// and a the under-in label at positive crossings, the under-out label
    /// at negative ones (so a^b always names the other under arc).
    pub fn crossing_squares(&self) -> Vec<(usize, (usize, usize))> {
        let positions = self.diagram.passage_positions();
        let mut out = Vec::new();
        for (x, crossing) in self.diagram.crossings().iter().enumerate() {
            if crossing.kind != CrossingKind::Real {
                continue;
            }
            let (uc, up) = positions[x][1];
            let (oc, op) = positions[x][0];
            let m = self.diagram.components()[uc].len();
            let a_in = self.gap_labels[uc][(up + m - 1) % m];
            let a_out = self.gap_labels[uc][up];
            let b = self.gap_labels[oc][op];
            let a = if crossing.sign > 0 { a_in } else { a_out };
            out.push((x, (a, b)));
        }
        out
    }

    /// The 2-chain in the rack space carried by the diagram: the signed sum
    /// of crossing squares, as a dense coefficient vector over the 2-cells
    /// (pairs (a, b) indexed a * n + b). Telescoping along each component
    /// makes it a cycle.
    pub fn crossing_chain(&self) -> Vec<BigInt> {
        let n = self.rack.size();
        let mut chain = vec![BigInt::zero(); n * n];
        for (x, (a, b)) in self.crossing_squares() {
            let sign = self.diagram.crossings()[x].sign;
            chain[a * n + b] += BigInt::from(sign);
        }
        chain
    }

    /// The homology class of the crossing chain in degree 2 of the rack
    /// space. Builds the classifier from scratch; use [`RackH2`] to amortise
    /// over many diagrams.
    pub fn cycle_class(&self) -> Result<CycleClass, HomologyError> {
        RackH2::new(&self.rack).class_of(self)
    }
}

/// The degree-2 homology of a rack space with the data needed to locate
/// cycle classes, cached for repeated evaluation.
pub struct RackH2 {
    classifier: CycleClassifier,
}

impl RackH2 {
    pub fn new(rack: &Rack) -> RackH2 {
        let set = CubicalSet::rack_space(rack, 3);
        let cc = ChainComplex::from_cubical(&set);
        let classifier = CycleClassifier::new(&cc, 2).expect("built to dimension 3");
        RackH2 { classifier }
    }

    pub fn group(&self) -> &HomologyGroup {
        self.classifier.group()
    }

    pub fn class_of(&self, ld: &LabelledDiagram) -> Result<CycleClass, HomologyError> {
        let coords = self.classifier.coordinates(&ld.crossing_chain())?;
        Ok(CycleClass { group: self.classifier.group().clone(), coords })
    }
}

/// A homology class: the ambient group and coordinates against its pinned
/// Smith-form basis (free coordinates first, then torsion).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleClass {
    pub group: HomologyGroup,
    pub coords: ClassCoordinates,
}

impl fmt::Display for CycleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.group, self.coords)
    }
}

/// A cobordism move on a labelled diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    /// A circle with the given label appears.
    Birth { label: usize },
    /// A crossing-free circle disappears.
    Death { component: usize },
    /// Saddle between two equally-labelled edges. The same edge twice
    /// splits off a circle with that label.
    Bridge { a: GapRef, b: GapRef },
    /// Slide the `under` edge beneath the `over` edge: two new crossings
    /// carrying the same square with opposite signs. `first_sign` is the
    /// sign of the first crossing met along the under edge; `reversed`
    /// flips the over strand's traversal order.
    R2Plus { under: GapRef, over: GapRef, first_sign: i8, reversed: bool },
    /// Cancel an adjacent opposite-sign pair carrying the same square;
    /// `first` is the crossing whose under-passage comes first.
    R2Minus { first: usize, second: usize },
    /// Slide a strand across the crossing of two others: a triangle
    /// pattern of crossings (r, s, t) with equal signs.
    R3 { r: usize, s: usize, t: usize },
    /// Insert an opposite-twist kink pair on one edge.
    R11Plus { gap: GapRef, first_sign: i8 },
    /// Remove an opposite-twist kink pair.
    R11Minus { first: usize, second: usize },
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Birth { label } => write!(f, "birth @ - [label={label}]"),
            Move::Death { component } => write!(f, "death @ c{component}"),
            Move::Bridge { a, b } => write!(f, "bridge @ {a} {b}"),
            Move::R2Plus { under, over, first_sign, reversed } => {
                write!(f, "r2+ @ {under} {over} [first={first_sign} rev={}]", *reversed as u8)
            }
            Move::R2Minus { first, second } => write!(f, "r2- @ x{first} x{second}"),
            Move::R3 { r, s, t } => write!(f, "r3 @ x{r} x{s} x{t}"),
            Move::R11Plus { gap, first_sign } => write!(f, "r11+ @ {gap} [first={first_sign}]"),
            Move::R11Minus { first, second } => write!(f, "r11- @ x{first} x{second}"),
        }
    }
}

impl Move {
    /// Parses one line of the trace format `<kind> @ <site> [params]`.
    pub fn parse_line(line: &str) -> Result<Move, MoveError> {
        let syntax = |m: &str| MoveError::Syntax(format!("{m} in `{line}`"));
        let (kind, rest) =
            line.split_once(" @ ").ok_or_else(|| syntax("expected `<kind> @ <site>`"))?;
        let (sites_part, params_part) = match rest.split_once(" [") {
            Some((s, p)) => (s, Some(p.strip_suffix(']').ok_or_else(|| syntax("unclosed `[`"))?)),
            None => (rest, None),
        };
        let sites: Vec<&str> = sites_part.split_whitespace().collect();
        let mut params: BTreeMap<&str, &str> = BTreeMap::new();
        if let Some(p) = params_part {
            for kv in p.split_whitespace() {
                let (k, v) = kv.split_once('=').ok_or_else(|| syntax("expected key=value"))?;
                params.insert(k, v);
            }
        }
        let gap = |s: &str| -> Result<GapRef, MoveError> {
            let body = s.strip_prefix('c').ok_or_else(|| syntax("expected c<comp>.<gap>"))?;
            let (c, g) = body.split_once('.').ok_or_else(|| syntax("expected c<comp>.<gap>"))?;
            Ok(GapRef {
                component: c.parse().map_err(|_| syntax("bad component"))?,
                gap: g.parse().map_err(|_| syntax("bad gap"))?,
            })
        };
        let crossing = |s: &str| -> Result<usize, MoveError> {
            s.strip_prefix('x')
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| syntax("expected x<crossing>"))
        };
        let int_param = |key: &str| -> Result<i8, MoveError> {
            params
                .get(key)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| syntax(&format!("missing or bad `{key}`")))
        };
        match kind {
            "birth" => Ok(Move::Birth {
                label: params
                    .get("label")
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| syntax("missing or bad `label`"))?,
            }),
            "death" => {
                let comp = sites
                    .first()
                    .and_then(|s| s.strip_prefix('c'))
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| syntax("expected c<comp>"))?;
                Ok(Move::Death { component: comp })
            }
            "bridge" => {
                if sites.len() != 2 {
                    return Err(syntax("expected two sites"));
                }
                Ok(Move::Bridge { a: gap(sites[0])?, b: gap(sites[1])? })
            }
            "r2+" => {
                if sites.len() != 2 {
                    return Err(syntax("expected two sites"));
                }
                Ok(Move::R2Plus {
                    under: gap(sites[0])?,
                    over: gap(sites[1])?,
                    first_sign: int_param("first")?,
                    reversed: int_param("rev")? != 0,
                })
            }
            "r2-" => {
                if sites.len() != 2 {
                    return Err(syntax("expected two sites"));
                }
                Ok(Move::R2Minus { first: crossing(sites[0])?, second: crossing(sites[1])? })
            }
            "r3" => {
                if sites.len() != 3 {
                    return Err(syntax("expected three sites"));
                }
                Ok(Move::R3 { r: crossing(sites[0])?, s: crossing(sites[1])?, t: crossing(sites[2])? })
            }
            "r11+" => {
                if sites.len() != 1 {
                    return Err(syntax("expected one site"));
                }
                Ok(Move::R11Plus { gap: gap(sites[0])?, first_sign: int_param("first")? })
            }
            "r11-" => {
                if sites.len() != 2 {
                    return Err(syntax("expected two sites"));
                }
                Ok(Move::R11Minus { first: crossing(sites[0])?, second: crossing(sites[1])? })
            }
            _ => Err(syntax("unknown move kind")),
        }
    }
}

struct Parts {
    crossings: Vec<Crossing>,
    components: Vec<Vec<Passage>>,
    gap_labels: Vec<Vec<usize>>,
}

impl LabelledDiagram {
    fn parts(&self) -> Parts {
        Parts {
            crossings: self.diagram.crossings().to_vec(),
            components: self.diagram.components().to_vec(),
            gap_labels: self.gap_labels.clone(),
        }
    }

    fn rebuild(&self, mut parts: Parts) -> Result<LabelledDiagram, MoveError> {
        // drop crossings that lost all their passages, renumbering the rest
        let used: BTreeSet<usize> =
            parts.components.iter().flatten().map(|p| p.crossing).collect();
        if used.len() != parts.crossings.len() {
            let remap: BTreeMap<usize, usize> =
                used.iter().enumerate().map(|(new, old)| (*old, new)).collect();
            parts.crossings = used.iter().map(|&old| parts.crossings[old]).collect();
            for comp in &mut parts.components {
                for p in comp {
                    p.crossing = remap[&p.crossing];
                }
            }
        }
        let diagram = LinkDiagram::from_components(parts.crossings, parts.components)?;
        let out =
            LabelledDiagram { diagram, gap_labels: parts.gap_labels, rack: self.rack.clone() };
        out.validate_labels()?;
        Ok(out)
    }

    fn check_gap(&self, g: GapRef) -> Result<(), MoveError> {
        if g.component >= self.diagram.components().len() {
            return Err(MoveError::NoSuchComponent(g.component));
        }
        if g.gap >= self.diagram.gap_count(g.component) {
            return Err(MoveError::NoSuchGap(g));
        }
        Ok(())
    }

    fn check_crossing(&self, x: usize) -> Result<(), MoveError> {
        if x >= self.diagram.crossings().len()
            || self.diagram.crossings()[x].kind != CrossingKind::Real
        {
            return Err(MoveError::NoSuchCrossing(x));
        }
        Ok(())
    }

    /// Applies a move, returning the new labelled diagram. The cycle class
    /// is an invariant of every successful application; R2/R3/R11 also
    /// preserve the coloring count.
    pub fn apply_move(&self, mv: &Move) -> Result<LabelledDiagram, MoveError> {
        match mv {
            Move::Birth { label } => {
                if *label >= self.rack.size() {
                    return Err(MoveError::LabelOutOfRange(*label));
                }
                let mut parts = self.parts();
                parts.components.push(Vec::new());
                parts.gap_labels.push(vec![*label]);
                self.rebuild(parts)
            }
            Move::Death { component } => {
                if *component >= self.diagram.components().len() {
                    return Err(MoveError::NoSuchComponent(*component));
                }
                if !self.diagram.components()[*component].is_empty() {
                    return Err(MoveError::DeathNeedsCircle(*component));
                }
                let mut parts = self.parts();
                parts.components.remove(*component);
                parts.gap_labels.remove(*component);
                self.rebuild(parts)
            }
            Move::Bridge { a, b } => self.apply_bridge(*a, *b),
            Move::R2Plus { under, over, first_sign, reversed } => {
                self.apply_r2_plus(*under, *over, *first_sign, *reversed)
            }
            Move::R2Minus { first, second } => self.apply_r2_minus(*first, *second),
            Move::R3 { r, s, t } => self.apply_r3(*r, *s, *t),
            Move::R11Plus { gap, first_sign } => self.apply_r11_plus(*gap, *first_sign),
            Move::R11Minus { first, second } => self.apply_r11_minus(*first, *second),
        }
    }

    fn apply_bridge(&self, a: GapRef, b: GapRef) -> Result<LabelledDiagram, MoveError> {
        self.check_gap(a)?;
        self.check_gap(b)?;
        let la = self.gap_label(a);
        let lb = self.gap_label(b);
        if la != lb {
            return Err(MoveError::BridgeLabelsDiffer { a, b, la, lb });
        }
        let mut parts = self.parts();
        if a == b {
            // saddle across one edge: splits off a circle with its label
            parts.components.push(Vec::new());
            parts.gap_labels.push(vec![la]);
            return self.rebuild(parts);
        }
        let a_circle = parts.components[a.component].is_empty();
        let b_circle = parts.components[b.component].is_empty();
        if a_circle || b_circle {
            // absorbing a circle into an equally-labelled edge changes nothing
            let dead = if a_circle { a.component } else { b.component };
            parts.components.remove(dead);
            parts.gap_labels.remove(dead);
            return self.rebuild(parts);
        }
        if a.component == b.component {
            // split one component into two at the cut gaps
            let (i, j) = if a.gap < b.gap { (a.gap, b.gap) } else { (b.gap, a.gap) };
            let comp = parts.components.remove(a.component);
            let gaps = parts.gap_labels.remove(a.component);
            let mut first_p = Vec::new();
            let mut first_g = Vec::new();
            for t in i + 1..=j {
                first_p.push(comp[t]);
                first_g.push(if t == j { la } else { gaps[t] });
            }
            let mut second_p = Vec::new();
            let mut second_g = Vec::new();
            for t in (j + 1..comp.len()).chain(0..=i) {
                second_p.push(comp[t]);
                second_g.push(if t == i { la } else { gaps[t] });
            }
            parts.components.push(first_p);
            parts.gap_labels.push(first_g);
            parts.components.push(second_p);
            parts.gap_labels.push(second_g);
            return self.rebuild(parts);
        }
        // merge two components, splicing crosswise at the cut gaps
        let (keep, other) = (a.component.min(b.component), a.component.max(b.component));
        let (kg, og) = if keep == a.component { (a.gap, b.gap) } else { (b.gap, a.gap) };
        let other_p = parts.components.remove(other);
        let other_g = parts.gap_labels.remove(other);
        let keep_p = std::mem::take(&mut parts.components[keep]);
        let keep_g = std::mem::take(&mut parts.gap_labels[keep]);
        let mut merged_p = Vec::with_capacity(keep_p.len() + other_p.len());
        let mut merged_g = Vec::with_capacity(keep_p.len() + other_p.len());
        for t in 0..=kg {
            merged_p.push(keep_p[t]);
            merged_g.push(if t == kg { la } else { keep_g[t] });
        }
        for t in (og + 1..other_p.len()).chain(0..=og) {
            merged_p.push(other_p[t]);
            merged_g.push(if t == og { la } else { other_g[t] });
        }
        for t in kg + 1..keep_p.len() {
            merged_p.push(keep_p[t]);
            merged_g.push(keep_g[t]);
        }
        parts.components[keep] = merged_p;
        parts.gap_labels[keep] = merged_g;
        self.rebuild(parts)
    }

    fn apply_r2_plus(
        &self,
        under: GapRef,
        over: GapRef,
        first_sign: i8,
        reversed: bool,
    ) -> Result<LabelledDiagram, MoveError> {
        self.check_gap(under)?;
        self.check_gap(over)?;
        if under == over {
            return Err(MoveError::SameSite);
        }
        if first_sign != 1 && first_sign != -1 {
            return Err(MoveError::Syntax("first_sign must be +1 or -1".into()));
        }
        let a = self.gap_label(under);
        let b = self.gap_label(over);
        let middle = if first_sign > 0 { self.rack.op(a, b) } else { self.rack.op_inv(a, b) };
        let mut parts = self.parts();
        let c1 = parts.crossings.len();
        let c2 = c1 + 1;
        parts.crossings.push(Crossing { sign: first_sign, kind: CrossingKind::Real });
        parts.crossings.push(Crossing { sign: -first_sign, kind: CrossingKind::Real });
        let mut over_pair = vec![
            Passage { crossing: c1, role: Role::Over },
            Passage { crossing: c2, role: Role::Over },
        ];
        if reversed {
            over_pair.reverse();
        }
        let under_pair = vec![
            Passage { crossing: c1, role: Role::Under },
            Passage { crossing: c2, role: Role::Under },
        ];
        // insert at the later gap first so the earlier index stays valid
        let mut insertions =
            vec![(under, under_pair, vec![middle, a]), (over, over_pair, vec![b, b])];
        insertions.sort_by_key(|(g, _, _)| std::cmp::Reverse(*g));
        for (g, passages, labels) in insertions {
            insert_after(
                &mut parts.components[g.component],
                &mut parts.gap_labels[g.component],
                g.gap,
                passages,
                labels,
            );
        }
        self.rebuild(parts)
    }

    fn apply_r2_minus(&self, first: usize, second: usize) -> Result<LabelledDiagram, MoveError> {
        self.check_crossing(first)?;
        self.check_crossing(second)?;
        let fail =
            |reason: &str| MoveError::NotCancellable { first, second, reason: reason.to_string() };
        if first == second {
            return Err(fail("sites coincide"));
        }
        let crossings = self.diagram.crossings();
        if crossings[first].sign != -crossings[second].sign {
            return Err(fail("signs are not opposite"));
        }
        let positions = self.diagram.passage_positions();
        let (uc1, up1) = positions[first][1];
        let (uc2, up2) = positions[second][1];
        if uc1 != uc2 {
            return Err(fail("under passages are on different components"));
        }
        let m = self.diagram.components()[uc1].len();
        if (up1 + 1) % m != up2 {
            return Err(fail("under passages are not adjacent in order"));
        }
        let (oc1, op1) = positions[first][0];
        let (oc2, op2) = positions[second][0];
        if oc1 != oc2 {
            return Err(fail("over passages are on different components"));
        }
        let l = self.diagram.components()[oc1].len();
        if (op1 + 1) % l != op2 && (op2 + 1) % l != op1 {
            return Err(fail("over passages are not adjacent"));
        }
        let squares: BTreeMap<usize, (usize, usize)> =
            self.crossing_squares().into_iter().collect();
        if squares[&first] != squares[&second] {
            return Err(fail("the two double points do not carry the same square"));
        }
        self.remove_passage_sets(&[(uc1, vec![up1, up2]), (oc1, vec![op1, op2])])
            .map_err(|reason| fail(&reason))
    }

    fn apply_r11_plus(&self, gap: GapRef, first_sign: i8) -> Result<LabelledDiagram, MoveError> {
        self.check_gap(gap)?;
        if first_sign != 1 && first_sign != -1 {
            return Err(MoveError::Syntax("first_sign must be +1 or -1".into()));
        }
        let x = self.gap_label(gap);
        let middle = if first_sign > 0 { self.rack.op(x, x) } else { self.rack.op_inv(x, x) };
        let mut parts = self.parts();
        let c1 = parts.crossings.len();
        let c2 = c1 + 1;
        parts.crossings.push(Crossing { sign: first_sign, kind: CrossingKind::Real });
        parts.crossings.push(Crossing { sign: -first_sign, kind: CrossingKind::Real });
        insert_after(
            &mut parts.components[gap.component],
            &mut parts.gap_labels[gap.component],
            gap.gap,
            vec![
                Passage { crossing: c1, role: Role::Under },
                Passage { crossing: c2, role: Role::Under },
                Passage { crossing: c1, role: Role::Over },
                Passage { crossing: c2, role: Role::Over },
            ],
            vec![middle, x, x, x],
        );
        self.rebuild(parts)
    }

    fn apply_r11_minus(&self, first: usize, second: usize) -> Result<LabelledDiagram, MoveError> {
        self.check_crossing(first)?;
        self.check_crossing(second)?;
        let fail =
            |reason: &str| MoveError::NotCancellable { first, second, reason: reason.to_string() };
        if first == second {
            return Err(fail("sites coincide"));
        }
        let crossings = self.diagram.crossings();
        if crossings[first].sign != -crossings[second].sign {
            return Err(fail("signs are not opposite"));
        }
        let positions = self.diagram.passage_positions();
        let (uc, up1) = positions[first][1];
        let comp_len = self.diagram.components()[uc].len();
        if comp_len < 4 {
            return Err(fail("component too short for a kink pair"));
        }
        let expect =
            [(second, Role::Under), (first, Role::Over), (second, Role::Over)];
        for (offset, (x, role)) in expect.iter().enumerate() {
            let p = self.diagram.components()[uc][(up1 + 1 + offset) % comp_len];
            if p.crossing != *x || p.role != *role {
                return Err(fail("passages do not form a consecutive kink pair"));
            }
        }
        let mut pos: Vec<usize> = (0..4).map(|offset| (up1 + offset) % comp_len).collect();
        pos.sort();
        self.remove_passage_sets(&[(uc, pos)]).map_err(|reason| fail(&reason))
    }

    fn apply_r3(&self, r: usize, s: usize, t: usize) -> Result<LabelledDiagram, MoveError> {
        self.check_crossing(r)?;
        self.check_crossing(s)?;
        self.check_crossing(t)?;
        let fail = |reason: &str| MoveError::NotTriangle { r, s, t, reason: reason.to_string() };
        if r == s || s == t || r == t {
            return Err(fail("crossings must be distinct"));
        }
        let crossings = self.diagram.crossings();
        let sigma = crossings[r].sign;
        if crossings[s].sign != sigma || crossings[t].sign != sigma {
            return Err(fail("signs must agree"));
        }
        let positions = self.diagram.passage_positions();
        let (ac, pa) = positions[r][1]; // U_r
        let a_len = self.diagram.components()[ac].len();
        if positions[s][1].0 != ac || positions[s][1].1 != (pa + 1) % a_len {
            return Err(fail("the under passages of r and s are not adjacent"));
        }
        let (bc, p_or) = positions[r][0]; // O_r
        let (cc_, p_os) = positions[s][0]; // O_s
        let at = |comp: usize, p: usize, delta: isize| -> Passage {
            let m = self.diagram.components()[comp].len() as isize;
            let idx = ((p as isize + delta) % m + m) % m;
            self.diagram.components()[comp][idx as usize]
        };
        let op =
            |a: usize, b: usize| if sigma > 0 { self.rack.op(a, b) } else { self.rack.op_inv(a, b) };
        let swap_pair = |components: &mut Vec<Vec<Passage>>, comp: usize, p: usize| {
            let m = components[comp].len();
            let q = (p + 1) % m;
            components[comp].swap(p, q);
        };

        // Pattern 1: middle strand (O_r, U_t); top strand (O_s, O_t).
        let p1 = at(bc, p_or, 1) == Passage { crossing: t, role: Role::Under }
            && at(cc_, p_os, 1) == Passage { crossing: t, role: Role::Over };
        // Pattern 2 (the image of pattern 1): middle (U_t, O_s); top (O_t, O_r).
        let p2 = at(cc_, p_os, -1) == Passage { crossing: t, role: Role::Under }
            && at(bc, p_or, -1) == Passage { crossing: t, role: Role::Over };

        let mut parts = self.parts();
        if p1 {
            let x = self.gap_labels[ac][(pa + a_len - 1) % a_len];
            let y = self.gap_labels[bc][p_or];
            let z = self.gap_labels[cc_][p_os];
            swap_pair(&mut parts.components, ac, pa);
            swap_pair(&mut parts.components, bc, p_or);
            swap_pair(&mut parts.components, cc_, p_os);
            parts.gap_labels[ac][pa] = op(x, z);
            parts.gap_labels[bc][p_or] = op(y, z);
            self.rebuild(parts)
        } else if p2 {
            let x = self.gap_labels[ac][(pa + a_len - 1) % a_len];
            let (tc, pt) = positions[t][1]; // U_t, on the middle strand
            let t_len = self.diagram.components()[tc].len();
            let y = self.gap_labels[tc][(pt + t_len - 1) % t_len];
            let (otc, p_ot) = positions[t][0]; // O_t, on the top strand
            swap_pair(&mut parts.components, ac, pa);
            swap_pair(&mut parts.components, tc, pt);
            swap_pair(&mut parts.components, otc, p_ot);
            parts.gap_labels[ac][pa] = op(x, y);
            parts.gap_labels[tc][pt] = y;
            self.rebuild(parts)
        } else {
            Err(fail("no matching adjacency pattern"))
        }
    }

    /// Removes the listed passage positions (grouped per component) and
    /// their gaps. Callers guarantee each removed run is cyclically
    /// contiguous so the surviving gap labels stay consistent; the rebuild
    /// re-validates everything. A component losing all passages becomes a
    /// circle labelled by its last surviving gap value.
    fn remove_passage_sets(&self, sets: &[(usize, Vec<usize>)]) -> Result<LabelledDiagram, String> {
        let mut by_component: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for (comp, positions) in sets {
            by_component.entry(*comp).or_default().extend(positions.iter().copied());
        }
        let mut parts = self.parts();
        for (comp, remove) in &by_component {
            let passages = &parts.components[*comp];
            let gaps = &parts.gap_labels[*comp];
            let m = passages.len();
            if remove.len() == m {
                let label = gaps[*remove.iter().next_back().unwrap()];
                parts.components[*comp] = Vec::new();
                parts.gap_labels[*comp] = vec![label];
                continue;
            }
            let mut new_p = Vec::with_capacity(m - remove.len());
            let mut new_g = Vec::with_capacity(m - remove.len());
            for t in 0..m {
                if !remove.contains(&t) {
                    new_p.push(passages[t]);
                    new_g.push(gaps[t]);
                }
            }
            parts.components[*comp] = new_p;
            parts.gap_labels[*comp] = new_g;
        }
        self.rebuild(parts).map_err(|e| e.to_string())
    }
}

fn insert_after(
    passages: &mut Vec<Passage>,
    gaps: &mut Vec<usize>,
    gap: usize,
    new_passages: Vec<Passage>,
    new_gaps: Vec<usize>,
) {
    debug_assert_eq!(new_passages.len(), new_gaps.len());
    if passages.is_empty() {
        // a circle: the inserted run becomes the whole component; the last
        // gap keeps the circle's label
        let label = gaps[0];
        *passages = new_passages;
        *gaps = new_gaps;
        let last = gaps.len() - 1;
        gaps[last] = label;
        return;
    }
    let at = gap + 1;
    passages.splice(at..at, new_passages);
    gaps.splice(at..at, new_gaps);
}

/// Restrictions applied while enumerating candidate moves.
#[derive(Clone, Debug, Default)]
pub struct MoveOptions {
    /// Only moves keeping every label inside this set are offered
    /// (the colour-scheme restriction).
    pub allowed_labels: Option<BTreeSet<usize>>,
    /// Skip growing moves that would push the real crossing count past this.
    pub max_crossings: Option<usize>,
}

/// All moves applicable to the diagram under the given options, in a
/// deterministic order: shrinking moves first, then neutral, then growing.
pub fn enumerate_moves(ld: &LabelledDiagram, opts: &MoveOptions) -> Vec<Move> {
    let mut moves = Vec::new();
    let diagram = ld.diagram();
    let crossings = diagram.crossings();
    let n_real = diagram.real_crossing_count();
    let label_ok = |l: usize| opts.allowed_labels.as_ref().map_or(true, |s| s.contains(&l));

    for (c, comp) in diagram.components().iter().enumerate() {
        if comp.is_empty() {
            moves.push(Move::Death { component: c });
        }
    }
    // cancellable pairs: adjacent under-passages in traversal order
    for comp in diagram.components() {
        let m = comp.len();
        for p in 0..m {
            let first = comp[p];
            let second = comp[(p + 1) % m];
            if first.role == Role::Under
                && second.role == Role::Under
                && crossings[first.crossing].kind == CrossingKind::Real
                && crossings[second.crossing].kind == CrossingKind::Real
                && first.crossing != second.crossing
            {
                let mv = Move::R2Minus { first: first.crossing, second: second.crossing };
                if ld.apply_move(&mv).is_ok() {
                    moves.push(mv);
                }
                let mv = Move::R11Minus { first: first.crossing, second: second.crossing };
                if ld.apply_move(&mv).is_ok() {
                    moves.push(mv);
                }
            }
        }
    }
    // triangles rooted at adjacent under-passage pairs
    let positions = diagram.passage_positions();
    for r in 0..crossings.len() {
        if crossings[r].kind != CrossingKind::Real {
            continue;
        }
        let (ac, pa) = positions[r][1];
        let m = diagram.components()[ac].len();
        let next = diagram.components()[ac][(pa + 1) % m];
        if next.role != Role::Under || crossings[next.crossing].kind != CrossingKind::Real {
            continue;
        }
        let s = next.crossing;
        if s == r {
            continue;
        }
        for t in 0..crossings.len() {
            if t == r || t == s || crossings[t].kind != CrossingKind::Real {
                continue;
            }
            let mv = Move::R3 { r, s, t };
            if ld.apply_move(&mv).is_ok() {
                moves.push(mv);
            }
        }
    }
    // bridges between distinct equally-labelled gaps
    let mut gaps: Vec<GapRef> = Vec::new();
    for c in 0..diagram.components().len() {
        for g in 0..diagram.gap_count(c) {
            gaps.push(GapRef { component: c, gap: g });
        }
    }
    for (i, &a) in gaps.iter().enumerate() {
        for &b in &gaps[i + 1..] {
            if ld.gap_label(a) == ld.gap_label(b) {
                moves.push(Move::Bridge { a, b });
            }
        }
    }
    // growing moves, gated by the crossing budget
    let grow_ok = opts.max_crossings.map_or(true, |max| n_real + 2 <= max);
    if grow_ok {
        for &g in &gaps {
            let x = ld.gap_label(g);
            for sign in [1i8, -1] {
                let middle = if sign > 0 { ld.rack().op(x, x) } else { ld.rack().op_inv(x, x) };
                if label_ok(middle) {
                    moves.push(Move::R11Plus { gap: g, first_sign: sign });
                }
            }
        }
        for &u in &gaps {
            for &o in &gaps {
                if u == o {
                    continue;
                }
                let a = ld.gap_label(u);
                let b = ld.gap_label(o);
                for sign in [1i8, -1] {
                    let middle = if sign > 0 { ld.rack().op(a, b) } else { ld.rack().op_inv(a, b) };
                    if !label_ok(middle) {
                        continue;
                    }
                    for reversed in [false, true] {
                        moves.push(Move::R2Plus { under: u, over: o, first_sign: sign, reversed });
                    }
                }
            }
        }
    }
    for label in 0..ld.rack().size() {
        if label_ok(label) {
            moves.push(Move::Birth { label });
        }
    }
    moves
}

/// A canonical key for a labelled diagram, invariant under component
/// rotation and reordering and under crossing renaming: greedy minimal
/// encoding over start positions, with crossings renamed in discovery
/// order.
pub fn canonical_form(ld: &LabelledDiagram) -> String {
    fn encode_component(
        ld: &LabelledDiagram,
        comp: usize,
        rotation: usize,
        renaming: &mut BTreeMap<usize, usize>,
    ) -> String {
        let passages = &ld.diagram().components()[comp];
        let m = passages.len();
        if m == 0 {
            return format!("(o:{})", ld.gap_label(GapRef { component: comp, gap: 0 }));
        }
        let mut s = String::from("(");
        for k in 0..m {
            let t = (rotation + k) % m;
            let p = passages[t];
            let next = renaming.len();
            let id = *renaming.entry(p.crossing).or_insert(next);
            let c = ld.diagram().crossings()[p.crossing];
            let role = match (p.role, c.kind) {
                (Role::Over, CrossingKind::Real) => 'O',
                (Role::Under, CrossingKind::Real) => 'U',
                (Role::Over, CrossingKind::Virtual) => 'o',
                (Role::Under, CrossingKind::Virtual) => 'u',
            };
            let sign = if c.sign > 0 { '+' } else { '-' };
            s.push_str(&format!(
                "{role}{id}{sign}:{};",
                ld.gap_label(GapRef { component: comp, gap: t })
            ));
        }
        s.push(')');
        s
    }
    let n = ld.diagram().components().len();
    let mut used = vec![false; n];
    let mut renaming: BTreeMap<usize, usize> = BTreeMap::new();
    let mut out = String::new();
    for _ in 0..n {
        let mut best: Option<(String, BTreeMap<usize, usize>, usize)> = None;
        for comp in 0..n {
            if used[comp] {
                continue;
            }
            let m = ld.diagram().components()[comp].len().max(1);
            for rot in 0..m {
                let mut trial = renaming.clone();
                let enc = encode_component(ld, comp, rot, &mut trial);
                if best.as_ref().map_or(true, |(b, _, _)| enc < *b) {
                    best = Some((enc, trial, comp));
                }
            }
        }
        let (enc, new_renaming, comp) = best.expect("component available");
        used[comp] = true;
        renaming = new_renaming;
        out.push_str(&enc);
    }
    out
}

/// Outcome of a bounded reduction search. The search is one-sided: reaching
/// a smaller diagram certifies cobordism to it, exhaustion certifies
/// nothing.
#[derive(Debug)]
pub struct ReduceReport {
    pub best: LabelledDiagram,
    pub trace: Vec<Move>,
    pub steps: usize,
    /// True when the budget ran out before reaching a crossing-free diagram.
    pub exhausted: bool,
}

/// Best-first search over compatible moves, preferring crossing-count
/// decreasing sequences, deduplicating states via canonical forms.
/// `budget` caps the number of move applications. With
/// `scheme_colours_only`, every intermediate diagram must use only labels
/// present in the input.
pub fn reduce(ld: &LabelledDiagram, budget: usize, scheme_colours_only: bool) -> ReduceReport {
    let start_crossings = ld.diagram().real_crossing_count();
    let opts = MoveOptions {
        allowed_labels: scheme_colours_only.then(|| ld.label_set()),
        max_crossings: Some(start_crossings + 2),
    };
    let mut states: Vec<LabelledDiagram> = vec![ld.clone()];
    let mut parents: Vec<Option<(usize, Move)>> = vec![None];
    let mut seen: BTreeSet<String> = [canonical_form(ld)].into_iter().collect();
    // min-heap on (crossing count, discovery order)
    let mut frontier: BinaryHeap<std::cmp::Reverse<(usize, usize)>> = BinaryHeap::new();
    frontier.push(std::cmp::Reverse((start_crossings, 0)));
    let mut best_idx = 0usize;
    let mut best_crossings = start_crossings;
    let mut steps = 0usize;

    'search: while let Some(std::cmp::Reverse((crossings, idx))) = frontier.pop() {
        if crossings == 0 {
            break;
        }
        if steps >= budget {
            break;
        }
        let current = states[idx].clone();
        for mv in enumerate_moves(&current, &opts) {
            if steps >= budget {
                break 'search;
            }
            steps += 1;
            let Ok(next) = current.apply_move(&mv) else { continue };
            if let Some(allowed) = &opts.allowed_labels {
                if !next.label_set().is_subset(allowed) {
                    continue;
                }
            }
            let key = canonical_form(&next);
            if !seen.insert(key) {
                continue;
            }
            let n_crossings = next.diagram().real_crossing_count();
            states.push(next);
            parents.push(Some((idx, mv)));
            let new_idx = states.len() - 1;
            if n_crossings < best_crossings {
                best_crossings = n_crossings;
                best_idx = new_idx;
            }
            if n_crossings == 0 {
                break 'search;
            }
            frontier.push(std::cmp::Reverse((n_crossings, new_idx)));
        }
    }

    let mut trace = Vec::new();
    let mut at = best_idx;
    while let Some((parent, mv)) = &parents[at] {
        trace.push(mv.clone());
        at = *parent;
    }
    trace.reverse();
    ReduceReport {
        best: states[best_idx].clone(),
        trace,
        steps,
        exhausted: best_crossings > 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rack::HomSearchMode;

    fn d3() -> Rack {
        Rack::dihedral(3).unwrap()
    }

    fn trefoil_labelled() -> LabelledDiagram {
        let diagram = LinkDiagram::parse_gauss("O1+ U2+ O3+ U1+ O2+ U3+").unwrap();
        let rack = d3();
        let cols = diagram.colorings(&rack, HomSearchMode::List);
        // pick a labelling with more than one colour
        let labelling = cols
            .labellings
            .unwrap()
            .into_iter()
            .find(|l| {
                let values: BTreeSet<usize> = l.labels.values().copied().collect();
                values.len() > 1
            })
            .unwrap();
        LabelledDiagram::new(diagram, rack, &labelling).unwrap()
    }

    #[test]
    fn crossing_chain_is_a_cycle() {
        let ld = trefoil_labelled();
        let set = CubicalSet::rack_space(ld.rack(), 3);
        let cc = ChainComplex::from_cubical(&set);
        let boundary = cc.boundary(2).apply(&ld.crossing_chain());
        assert!(boundary.iter().all(|v| v.is_zero()));
    }

    #[test]
    fn unknot_has_zero_class() {
        let rack = d3();
        let ld = LabelledDiagram::new(
            LinkDiagram::unknot(),
            rack,
            &Labelling { labels: [(0, 1)].into_iter().collect() },
        )
        .unwrap();
        let class = ld.cycle_class().unwrap();
        assert!(class.coords.is_zero());
    }

    #[test]
    fn trivial_rack_class_is_writhe() {
        let t1 = Rack::trivial(1).unwrap();
        let diagram = LinkDiagram::parse_gauss("O1+ U2+ O3+ U1+ O2+ U3+").unwrap();
        let labelling = Labelling { labels: [(0, 0), (1, 0), (2, 0)].into_iter().collect() };
        let ld = LabelledDiagram::new(diagram, t1, &labelling).unwrap();
        let class = ld.cycle_class().unwrap();
        assert_eq!(class.group.rank, 1);
        assert_eq!(class.coords.free, vec![BigInt::from(3)]);
        assert_eq!(class.to_string(), "Z^1 [3]");
    }

    #[test]
    fn forgetting_labels_gives_writhe() {
        // the coefficient sum of the crossing chain is its image over the
        // one-element rack
        let ld = trefoil_labelled();
        let total: BigInt = ld.crossing_chain().iter().sum();
        assert_eq!(total, BigInt::from(ld.diagram().writhe()));
    }

    #[test]
    fn trefoil_class_is_nonzero_over_dihedral_three() {
        let ld = trefoil_labelled();
        let class = ld.cycle_class().unwrap();
        assert_eq!(class.group.rank, 1);
        assert!(!class.coords.is_zero());
    }

    #[test]
    fn birth_then_death_round_trip() {
        let ld = LabelledDiagram::empty(d3());
        let born = ld.apply_move(&Move::Birth { label: 2 }).unwrap();
        assert_eq!(born.diagram().components().len(), 1);
        assert_eq!(born.gap_label(GapRef { component: 0, gap: 0 }), 2);
        let back = born.apply_move(&Move::Death { component: 0 }).unwrap();
        assert_eq!(canonical_form(&back), canonical_form(&ld));
        assert!(matches!(
            born.apply_move(&Move::Birth { label: 7 }),
            Err(MoveError::LabelOutOfRange(7))
        ));
    }

    #[test]
    fn death_requires_circle() {
        let ld = trefoil_labelled();
        assert!(matches!(
            ld.apply_move(&Move::Death { component: 0 }),
            Err(MoveError::DeathNeedsCircle(0))
        ));
    }

    #[test]
    fn r2_round_trip_restores_diagram() {
        let ld = trefoil_labelled();
        let key = canonical_form(&ld);
        for first_sign in [1i8, -1] {
            for reversed in [false, true] {
                let mv = Move::R2Plus {
                    under: GapRef { component: 0, gap: 0 },
                    over: GapRef { component: 0, gap: 3 },
                    first_sign,
                    reversed,
                };
                let grown = ld.apply_move(&mv).unwrap();
                assert_eq!(grown.diagram().real_crossing_count(), 5);
                let back = grown.apply_move(&Move::R2Minus { first: 3, second: 4 }).unwrap();
                assert_eq!(canonical_form(&back), key, "sign {first_sign} rev {reversed}");
            }
        }
    }

    #[test]
    fn r2_minus_rejects_mismatched_pair() {
        let ld = trefoil_labelled();
        let err = ld.apply_move(&Move::R2Minus { first: 0, second: 1 }).unwrap_err();
        assert!(matches!(err, MoveError::NotCancellable { .. }));
    }

    #[test]
    fn r11_round_trip_and_labels() {
        let ld = trefoil_labelled();
        let key = canonical_form(&ld);
        for sign in [1i8, -1] {
            let gap = GapRef { component: 0, gap: 2 };
            let grown = ld.apply_move(&Move::R11Plus { gap, first_sign: sign }).unwrap();
            assert_eq!(grown.diagram().real_crossing_count(), 5);
            let back = grown.apply_move(&Move::R11Minus { first: 3, second: 4 }).unwrap();
            assert_eq!(canonical_form(&back), key);
        }
    }

    #[test]
    fn bridge_requires_equal_labels() {
        let ld = trefoil_labelled();
        let mut found = None;
        'outer: for g1 in 0..6 {
            for g2 in 0..6 {
                let (a, b) = (GapRef { component: 0, gap: g1 }, GapRef { component: 0, gap: g2 });
                if ld.gap_label(a) != ld.gap_label(b) {
                    found = Some((a, b));
                    break 'outer;
                }
            }
        }
        let (a, b) = found.unwrap();
        assert!(matches!(
            ld.apply_move(&Move::Bridge { a, b }),
            Err(MoveError::BridgeLabelsDiffer { .. })
        ));
    }

    #[test]
    fn bridge_split_and_merge_preserve_class() {
        let ld = trefoil_labelled();
        let h2 = RackH2::new(ld.rack());
        let class = h2.class_of(&ld).unwrap();
        let mut site = None;
        'outer: for g1 in 0..6 {
            for g2 in g1 + 1..6 {
                let (a, b) = (GapRef { component: 0, gap: g1 }, GapRef { component: 0, gap: g2 });
                if ld.gap_label(a) == ld.gap_label(b) {
                    site = Some((a, b));
                    break 'outer;
                }
            }
        }
        let (a, b) = site.unwrap();
        let split = ld.apply_move(&Move::Bridge { a, b }).unwrap();
        assert_eq!(split.diagram().components().len(), 2);
        assert_eq!(h2.class_of(&split).unwrap(), class);
        // splice back through any equal-labelled gap pair across components
        let mut join = None;
        'outer: for g0 in 0..split.diagram().gap_count(0) {
            for g1 in 0..split.diagram().gap_count(1) {
                let (a, b) =
                    (GapRef { component: 0, gap: g0 }, GapRef { component: 1, gap: g1 });
                if split.gap_label(a) == split.gap_label(b) {
                    join = Some((a, b));
                    break 'outer;
                }
            }
        }
        let (a, b) = join.unwrap();
        let merged = split.apply_move(&Move::Bridge { a, b }).unwrap();
        assert_eq!(merged.diagram().components().len(), 1);
        assert_eq!(h2.class_of(&merged).unwrap(), class);
    }

    #[test]
    fn moves_preserve_class_and_colorings() {
        let ld = trefoil_labelled();
        let h2 = RackH2::new(ld.rack());
        let class = h2.class_of(&ld).unwrap();
        let colorings = ld.diagram().colorings(ld.rack(), HomSearchMode::Count).count;
        let opts = MoveOptions { allowed_labels: None, max_crossings: Some(5) };
        for mv in enumerate_moves(&ld, &opts) {
            let next = ld.apply_move(&mv).unwrap();
            assert_eq!(h2.class_of(&next).unwrap(), class, "move {mv}");
            match mv {
                Move::R2Plus { .. }
                | Move::R2Minus { .. }
                | Move::R3 { .. }
                | Move::R11Plus { .. }
                | Move::R11Minus { .. } => {
                    assert_eq!(
                        next.diagram().colorings(ld.rack(), HomSearchMode::Count).count,
                        colorings,
                        "move {mv}"
                    );
                }
                _ => {}
            }
        }
    }

    /// The closure of the braid word with three positive crossings on three
    /// strands: two components, containing an exact triangle pattern.
    fn braid_closure_labelled() -> LabelledDiagram {
        let diagram = LinkDiagram::parse_gauss("O1+ O2+ U2+ U3+ / U1+ O3+").unwrap();
        let rack = d3();
        let cols = diagram.colorings(&rack, HomSearchMode::List);
        let labelling = cols
            .labellings
            .unwrap()
            .into_iter()
            .max_by_key(|l| l.labels.values().collect::<BTreeSet<_>>().len())
            .unwrap();
        LabelledDiagram::new(diagram, rack, &labelling).unwrap()
    }

    #[test]
    fn r3_on_braid_triangle_preserves_class() {
        let ld = braid_closure_labelled();
        // crossing ids by first appearance: label1 -> 0, label2 -> 1, label3 -> 2;
        // the triangle is (r, s, t) = (1, 2, 0) in the mirrored pattern
        let h2 = RackH2::new(ld.rack());
        let before = h2.class_of(&ld).unwrap();
        let mv = Move::R3 { r: 1, s: 2, t: 0 };
        let after = ld.apply_move(&mv).unwrap();
        assert_eq!(h2.class_of(&after).unwrap(), before);
        // applying the move with r and s swapped undoes it
        let back = after.apply_move(&Move::R3 { r: 2, s: 1, t: 0 }).unwrap();
        assert_eq!(canonical_form(&back), canonical_form(&ld));
        // the enumerator finds the same site
        let opts = MoveOptions { allowed_labels: None, max_crossings: Some(3) };
        assert!(enumerate_moves(&ld, &opts).iter().any(|m| matches!(m, Move::R3 { .. })));
    }

    #[test]
    fn r3_rejects_mixed_signs() {
        let ld = braid_closure_labelled();
        assert!(matches!(
            ld.apply_move(&Move::R3 { r: 0, s: 1, t: 3 }),
            Err(MoveError::NoSuchCrossing(3))
        ));
        let err = ld.apply_move(&Move::R3 { r: 0, s: 2, t: 1 }).unwrap_err();
        assert!(matches!(err, MoveError::NotTriangle { .. }));
    }

    #[test]
    fn reduce_cancels_r2_pair() {
        let rack = d3();
        let ld = LabelledDiagram::empty(rack)
            .apply_move(&Move::Birth { label: 0 })
            .unwrap()
            .apply_move(&Move::Birth { label: 1 })
            .unwrap()
            .apply_move(&Move::R2Plus {
                under: GapRef { component: 0, gap: 0 },
                over: GapRef { component: 1, gap: 0 },
                first_sign: 1,
                reversed: false,
            })
            .unwrap();
        assert_eq!(ld.diagram().real_crossing_count(), 2);
        let report = reduce(&ld, 10, false);
        assert_eq!(report.best.diagram().real_crossing_count(), 0);
        assert!(!report.exhausted);
        assert!(!report.trace.is_empty());
    }

    #[test]
    fn reduce_unknots_double_kink() {
        let rack = d3();
        let ld = LabelledDiagram::empty(rack)
            .apply_move(&Move::Birth { label: 2 })
            .unwrap()
            .apply_move(&Move::R11Plus { gap: GapRef { component: 0, gap: 0 }, first_sign: 1 })
            .unwrap();
        assert_eq!(ld.diagram().real_crossing_count(), 2);
        assert_eq!(ld.diagram().writhe(), 0);
        let report = reduce(&ld, 50, false);
        assert_eq!(report.best.diagram().real_crossing_count(), 0);
    }

    #[test]
    fn reduce_exhausts_on_trefoil() {
        // writhe 3 obstructs any crossing-free result
        let t1 = Rack::trivial(1).unwrap();
        let diagram = LinkDiagram::parse_gauss("O1+ U2+ O3+ U1+ O2+ U3+").unwrap();
        let labelling = Labelling { labels: [(0, 0), (1, 0), (2, 0)].into_iter().collect() };
        let ld = LabelledDiagram::new(diagram, t1, &labelling).unwrap();
        let report = reduce(&ld, 500, false);
        assert!(report.exhausted);
        assert_eq!(report.best.diagram().real_crossing_count(), 3);
    }

    #[test]
    fn trace_format_round_trip() {
        let moves = vec![
            Move::Birth { label: 2 },
            Move::Death { component: 3 },
            Move::Bridge {
                a: GapRef { component: 0, gap: 1 },
                b: GapRef { component: 1, gap: 0 },
            },
            Move::R2Plus {
                under: GapRef { component: 0, gap: 1 },
                over: GapRef { component: 2, gap: 5 },
                first_sign: -1,
                reversed: true,
            },
            Move::R2Minus { first: 1, second: 2 },
            Move::R3 { r: 0, s: 1, t: 5 },
            Move::R11Plus { gap: GapRef { component: 1, gap: 2 }, first_sign: 1 },
            Move::R11Minus { first: 4, second: 5 },
        ];
        for mv in moves {
            let line = mv.to_string();
            assert_eq!(Move::parse_line(&line).unwrap(), mv, "{line}");
        }
        assert!(Move::parse_line("frob @ x1").is_err());
    }

    #[test]
    fn scheme_colour_restriction_limits_moves() {
        // over the cyclic rack a kink forces the label x^x = x+1, so with
        // the colour scheme restricted to the labels present, R11+ on a
        // single-label diagram is filtered out
        let c3 = Rack::cyclic(3).unwrap();
        let ld = LabelledDiagram::empty(c3).apply_move(&Move::Birth { label: 0 }).unwrap();
        let restricted = MoveOptions {
            allowed_labels: Some([0].into_iter().collect()),
            max_crossings: Some(4),
        };
        let moves = enumerate_moves(&ld, &restricted);
        assert!(moves.iter().all(|m| !matches!(m, Move::R11Plus { .. })));
        let unrestricted = MoveOptions { allowed_labels: None, max_crossings: Some(4) };
        let moves = enumerate_moves(&ld, &unrestricted);
        assert!(moves.iter().any(|m| matches!(m, Move::R11Plus { .. })));
    }
}
