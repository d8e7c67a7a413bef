//! Group presentations, word enumeration, orbit tables and limit-set samples.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::f64::consts::{PI, TAU};

use crate::cartan::{cartan_projection, CartanVector, RootFunctional};
use crate::error::{Error, Result};
use crate::hypdisc::{
    apply_isometry, classify, dist_h, fixed_points, BoundaryPoint, Class, DiscPoint, Mobius, Orientation,
};
use crate::reps::{Representation, ScaledMatrix};

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: usize,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: usize, inv: bool) -> Self {
        Letter { gen, inv }
    }

    pub fn inverse(self) -> Self {
        Letter { gen: self.gen, inv: !self.inv }
    }

    fn rank(self) -> usize {
        2 * self.gen + self.inv as usize
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

/// Freely reduced word. Ordered by length, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        let mut w = Word::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    /// Append a letter, cancelling against the last one if they are inverse.
    pub fn push(&mut self, l: Letter) {
        if self.letters.last() == Some(&l.inverse()) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut w = self.clone();
        for &l in &o.letters {
            w.push(l);
        }
        w
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(a), Some(b)) => self.letters.len() == 1 || *a != b.inverse(),
            _ => true,
        }
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.letters.cmp(&other.letters))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    FreeSchottky,
    Modular,
    Custom,
}

/// Default rounding precision for hash deduplication.
pub const DEDUP_PRECISION: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub kind: GroupKind,
    pub generators: Vec<Mobius>,
    /// One character per generator; inverses print with the case toggled.
    pub names: Vec<char>,
    pub dedup_precision: f64,
    pub label: String,
}

fn default_names(k: usize) -> Vec<char> {
    (0..k).map(|i| (b'a' + (i % 26) as u8) as char).collect()
}

impl GroupSpec {
    /// Schottky group; validates hyperbolicity and the ping-pong condition.
    pub fn free_schottky(generators: Vec<Mobius>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidInput("a Schottky group needs generators".into()));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.orientation() != Orientation::Plus || classify(g)? != Class::Hyperbolic {
                return Err(Error::InvalidInput(format!("generator {i} is not hyperbolic")));
            }
        }
        let mut circles = Vec::new();
        for g in &generators {
            for h in [*g, g.inverse()] {
                circles.push(h.isometric_circle().ok_or_else(|| Error::InvalidInput("generator fixes the origin".into()))?);
            }
        }
        for i in 0..circles.len() {
            for j in i + 1..circles.len() {
                let (ci, ri) = circles[i];
                let (cj, rj) = circles[j];
                if (ci - cj).norm() <= ri + rj {
                    return Err(Error::InvalidInput(format!(
                        "isometric circles {i} and {j} intersect: ping-pong fails"
                    )));
                }
            }
        }
        Ok(GroupSpec::free_unchecked(generators))
    }

    fn free_unchecked(generators: Vec<Mobius>) -> Self {
        let k = generators.len();
        GroupSpec {
            kind: GroupKind::FreeSchottky,
            generators,
            names: default_names(k),
            dedup_precision: DEDUP_PRECISION,
            label: format!("schottky_rank_{k}"),
        }
    }

    /// PSL(2, ℤ) with `S = [[0,−1],[1,0]]`, `T = [[1,1],[0,1]]`.
    pub fn modular() -> Self {
        GroupSpec {
            kind: GroupKind::Modular,
            generators: vec![Mobius::raw(0.0, -1.0, 1.0, 0.0), Mobius::raw(1.0, 1.0, 0.0, 1.0)],
            names: vec!['S', 'T'],
            dedup_precision: DEDUP_PRECISION,
            label: "modular".into(),
        }
    }

    pub fn custom(generators: Vec<Mobius>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidInput("a group needs generators".into()));
        }
        let k = generators.len();
        Ok(GroupSpec {
            kind: GroupKind::Custom,
            generators,
            names: default_names(k),
            dedup_precision: DEDUP_PRECISION,
            label: format!("custom_rank_{k}"),
        })
    }

    /// Rank-2 Schottky group with perpendicular axes through the origin and
    /// translation length `len` (ping-pong needs `len > 2·asinh(1)`).
    pub fn schottky_cross(len: f64) -> Result<Self> {
        let mut g = GroupSpec::free_schottky(vec![Mobius::translation(len, 0.0), Mobius::translation(len, PI / 2.0)])?;
        g.label = format!("schottky_cross_{len}");
        Ok(g)
    }

    /// Pair-of-pants Schottky group: `a = ρ₀ρ₁`, `b = ρ₁ρ₂` for the
    /// reflections `ρ_j` in three geodesics perpendicular to the rays at
    /// angles `2πj/3`, each at distance `s` from the origin. The boundary
    /// elements `a`, `b`, `ab` have pairwise disjoint axes.
    pub fn pants(s: f64) -> Result<Self> {
        // mirror j subtends a half-angle acos(tanh s) from the origin
        if !(s.tanh() > 0.5) {
            return Err(Error::InvalidInput(format!("pants mirrors overlap for s = {s}")));
        }
        let refl = pants_mirrors(s);
        let a = refl[0].compose(&refl[1]).renormalized();
        let b = refl[1].compose(&refl[2]).renormalized();
        // the pairing circles are mirror 0, mirror 2 and their images under
        // mirror 1, so isometric circles at the origin need not be disjoint
        let mut g = GroupSpec::free_unchecked(vec![a, b]);
        g.label = format!("pants_{s}");
        Ok(g)
    }

    /// Built-in groups by name: `modular`, `schottky` (perpendicular axes,
    /// translation 3) and `pants` (mirror distance 0.8).
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "modular" => Ok(GroupSpec::modular()),
            "schottky" => GroupSpec::schottky_cross(3.0),
            "pants" => GroupSpec::pants(0.8),
            _ => Err(Error::Parse(format!("unknown built-in group '{name}'"))),
        }
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generator(&self, l: Letter) -> Mobius {
        let g = self.generators[l.gen];
        if l.inv {
            g.inverse()
        } else {
            g
        }
    }

    pub fn evaluate(&self, w: &Word) -> Mobius {
        let mut m = Mobius::identity();
        for &l in w.letters() {
            m = m.compose(&self.generator(l));
        }
        m.renormalized()
    }

    /// Letters used to extend words during enumeration.
    pub fn alphabet(&self) -> Vec<Letter> {
        match self.kind {
            // S is an involution, so S⁻¹ is never needed
            GroupKind::Modular => vec![Letter::new(0, false), Letter::new(1, false), Letter::new(1, true)],
            _ => (0..self.rank()).flat_map(|g| [Letter::new(g, false), Letter::new(g, true)]).collect(),
        }
    }

    pub fn letter_char(&self, l: Letter) -> char {
        let c = self.names.get(l.gen).copied().unwrap_or('?');
        if !l.inv {
            c
        } else if c.is_uppercase() {
            c.to_ascii_lowercase()
        } else {
            c.to_ascii_uppercase()
        }
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "e".into();
        }
        w.letters().iter().map(|&l| self.letter_char(l)).collect()
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        if s == "e" || s.is_empty() {
            return Ok(Word::identity());
        }
        let mut letters = Vec::new();
        for ch in s.chars() {
            let l = (0..self.rank())
                .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
                .find(|&l| self.letter_char(l) == ch)
                .ok_or_else(|| Error::Parse(format!("unknown letter '{ch}'")))?;
            letters.push(l);
        }
        Ok(Word::from_letters(letters))
    }

    pub fn is_exact(&self) -> bool {
        self.kind != GroupKind::Custom
    }
}

/// Reflections in the three mirrors of [`GroupSpec::pants`].
pub fn pants_mirrors(s: f64) -> [Mobius; 3] {
    // inversion in |z| = e^s, i.e. the geodesic crossing the ray to angle 0 at distance s
    let base = Mobius::raw(0.0, (s).exp(), (-s).exp(), 0.0).renormalized();
    let mut out = [base; 3];
    for (j, o) in out.iter_mut().enumerate() {
        let r = Mobius::rotation(-(j as f64) * TAU / 6.0);
        *o = r.compose(&base).compose(&r.inverse());
    }
    out
}

/// Exact PSL(2, ℤ) element, normalized so the first nonzero entry is positive.
pub(crate) fn int_key(m: [i64; 4]) -> [i64; 4] {
    let first = m.iter().copied().find(|&x| x != 0).unwrap_or(1);
    if first < 0 {
        [-m[0], -m[1], -m[2], -m[3]]
    } else {
        m
    }
}

fn int_mul(a: [i64; 4], b: [i64; 4]) -> Result<[i64; 4]> {
    let f = |x: i64, y: i64, z: i64, w: i64| -> Result<i64> {
        x.checked_mul(y)
            .and_then(|p| z.checked_mul(w).and_then(|q| p.checked_add(q)))
            .ok_or(Error::Overflow)
    };
    Ok([
        f(a[0], b[0], a[1], b[2])?,
        f(a[0], b[1], a[1], b[3])?,
        f(a[2], b[0], a[3], b[2])?,
        f(a[2], b[1], a[3], b[3])?,
    ])
}

fn int_letter(l: Letter) -> [i64; 4] {
    match (l.gen, l.inv) {
        (0, false) => [0, -1, 1, 0],
        (0, true) => [0, 1, -1, 0],
        (1, false) => [1, 1, 0, 1],
        _ => [1, -1, 0, 1],
    }
}

/// Rounding key of a projective matrix, with orientation.
pub(crate) fn round_key(m: &Mobius, prec: f64) -> [i64; 5] {
    let e = m.entries();
    // grid relative to the entry size, bucketed by powers of two
    let big = e.iter().fold(1.0f64, |a, x| a.max(x.abs()));
    let prec = prec * big.log2().ceil().exp2();
    let first = e.iter().copied().find(|x| x.abs() > 4.0 * prec).unwrap_or(1.0);
    let s = if first < 0.0 { -1.0 } else { 1.0 };
    [
        (s * e[0] / prec).round() as i64,
        (s * e[1] / prec).round() as i64,
        (s * e[2] / prec).round() as i64,
        (s * e[3] / prec).round() as i64,
        (m.orientation() == Orientation::Minus) as i64,
    ]
}

#[derive(Clone, Debug)]
struct Node {
    word: Word,
    m: Mobius,
    int: [i64; 4],
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Key {
    Int([i64; 4]),
    Round([i64; 5]),
}

/// Breadth-first stream of group elements ordered by (length, lexicographic).
pub struct Enumeration<'g> {
    group: &'g GroupSpec,
    max_len: usize,
    alphabet: Vec<Letter>,
    layer: Vec<Node>,
    pos: usize,
    len: usize,
    seen: HashSet<Key>,
    /// False when deduplication relied on rounding.
    pub exhaustive: bool,
    pub warnings: Vec<String>,
    error: Option<Error>,
}

impl<'g> Enumeration<'g> {
    fn key(&self, n: &Node) -> Option<Key> {
        match self.group.kind {
            GroupKind::FreeSchottky => None,
            GroupKind::Modular => Some(Key::Int(int_key(n.int))),
            GroupKind::Custom => Some(Key::Round(round_key(&n.m, self.group.dedup_precision))),
        }
    }

    fn advance(&mut self) -> bool {
        if self.len >= self.max_len {
            return false;
        }
        let mut next = Vec::new();
        let near_identity = 1e-6;
        for node in &self.layer {
            for &l in &self.alphabet {
                if node.word.last() == Some(l.inverse()) {
                    continue;
                }
                let mut word = node.word.clone();
                word.push(l);
                let m = node.m.compose(&self.group.generator(l)).renormalized();
                let int = if self.group.kind == GroupKind::Modular {
                    match int_mul(node.int, int_letter(l)) {
                        Ok(v) => v,
                        Err(e) => {
                            self.error = Some(e);
                            return false;
                        }
                    }
                } else {
                    [0; 4]
                };
                next.push(Node { word, m, int });
            }
        }
        let mut kept = Vec::with_capacity(next.len());
        for n in next {
            match self.key(&n) {
                None => kept.push(n),
                Some(k) => {
                    if self.seen.insert(k) {
                        if self.group.kind == GroupKind::Custom
                            && n.m.approx_eq(&Mobius::identity(), near_identity)
                            && self.warnings.is_empty()
                        {
                            self.warnings.push(format!(
                                "element {} lies within {near_identity:e} of the identity; the group may not be discrete",
                                self.group.format_word(&n.word)
                            ));
                        }
                        kept.push(n);
                    }
                }
            }
        }
        self.layer = kept;
        self.pos = 0;
        self.len += 1;
        !self.layer.is_empty()
    }

    /// Error that stopped the stream early, if any.
    pub fn error(&self) -> Option<&Error> {
        self.error.as_ref()
    }
}

impl Iterator for Enumeration<'_> {
    type Item = (Word, Mobius);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if self.pos < self.layer.len() {
                let n = &self.layer[self.pos];
                self.pos += 1;
                return Some((n.word.clone(), n.m));
            }
            if !self.advance() {
                return None;
            }
        }
    }
}

/// Each group element of word length at most `max_len` exactly once.
pub fn enumerate(group: &GroupSpec, max_len: usize) -> Enumeration<'_> {
    let root = Node { word: Word::identity(), m: Mobius::identity(), int: [1, 0, 0, 1] };
    let mut seen = HashSet::new();
    match group.kind {
        GroupKind::FreeSchottky => {}
        GroupKind::Modular => {
            seen.insert(Key::Int(root.int));
        }
        GroupKind::Custom => {
            seen.insert(Key::Round(round_key(&root.m, group.dedup_precision)));
        }
    }
    Enumeration {
        group,
        max_len,
        alphabet: group.alphabet(),
        layer: vec![root],
        pos: 0,
        len: 0,
        seen,
        exhaustive: group.is_exact(),
        warnings: Vec::new(),
        error: None,
    }
}

/// Collect an enumeration, surfacing any arithmetic error.
pub fn enumerate_all(group: &GroupSpec, max_len: usize) -> Result<Vec<(Word, Mobius)>> {
    let mut e = enumerate(group, max_len);
    let out: Vec<_> = e.by_ref().collect();
    match e.error() {
        Some(err) => Err(err.clone()),
        None => Ok(out),
    }
}

/// Elements with displacement at most `radius`, with a completeness certificate.
#[derive(Clone, Debug)]
pub struct Ball {
    pub elements: Vec<(Word, Mobius)>,
    pub radius: f64,
    /// Every element with displacement ≤ `complete_to` is present.
    pub complete_to: f64,
    pub exhaustive: bool,
}

/// Word for an element of SL(2, ℤ) in the letters S, T, T⁻¹, found by the
/// Euclidean algorithm on the first column.
pub fn modular_word(m: [i64; 4]) -> Word {
    let [mut a, mut b, mut c, mut d] = m;
    let mut letters = Vec::new();
    let push_t = |letters: &mut Vec<Letter>, q: i64| {
        for _ in 0..q.unsigned_abs() {
            letters.push(Letter::new(1, q < 0));
        }
    };
    while c != 0 {
        // γ = T^q · S · γ'' with |c''| ≤ |c|/2
        let q = (a as f64 / c as f64).round() as i64;
        push_t(&mut letters, q);
        letters.push(Letter::new(0, false));
        let (a2, b2) = (a - q * c, b - q * d);
        a = c;
        b = d;
        c = -a2;
        d = -b2;
    }
    // remaining ±T^k
    let k = if a > 0 { b } else { -b };
    push_t(&mut letters, k);
    Word::from_letters(letters)
}

/// Exact ball in PSL(2, ℤ) around `i`, using `a² + b² + c² + d² = 2 cosh(dist(i, γi))`.
pub fn modular_ball(radius: f64) -> Result<Ball> {
    if !(radius >= 0.0) || radius > 30.0 {
        return Err(Error::InvalidInput(format!("modular ball radius {radius} outside [0, 30]")));
    }
    let bound = 2.0 * radius.cosh() * (1.0 + 1e-12);
    let bmax = bound.sqrt().floor() as i64;
    let mut elems: Vec<([i64; 4], f64)> = Vec::new();
    for a in 0..=bmax {
        for b in -bmax..=bmax {
            let n1 = (a * a + b * b) as f64;
            if n1 + 1.0 > bound || (a == 0 && b <= 0) || gcd(a, b) != 1 {
                continue;
            }
            // a·d − b·c = 1: particular solution from the extended gcd
            let (g, x, y) = ext_gcd(a, b);
            debug_assert_eq!(g, 1);
            // a·x + b·y = 1  ⇒  d0 = x, c0 = −y
            let (c0, d0) = (-y, x);
            // (c, d) = (c0 + k a, d0 + k b), minimize c² + d² over k
            let q = (a * a + b * b) as f64;
            let lin = (a * c0 + b * d0) as f64;
            let k0 = (-lin / q).round() as i64;
            let rest = bound - n1;
            for dir in [1i64, -1] {
                let mut k = if dir == 1 { k0 } else { k0 - 1 };
                loop {
                    let c = c0 + k * a;
                    let d = d0 + k * b;
                    let n2 = (c * c + d * d) as f64;
                    if n2 > rest {
                        break;
                    }
                    let norm = n1 + n2;
                    let disp = (norm / 2.0).max(1.0).acosh();
                    if disp <= radius {
                        elems.push(([a, b, c, d], disp));
                    }
                    k += dir;
                }
            }
        }
    }
    elems.sort_by(|x, y| x.1.total_cmp(&y.1).then(x.0.cmp(&y.0)));
    let elements = elems
        .into_iter()
        .map(|(m, _)| {
            let mob = Mobius::raw(m[0] as f64, m[1] as f64, m[2] as f64, m[3] as f64);
            (modular_word(m), mob)
        })
        .collect();
    Ok(Ball { elements, radius, complete_to: radius, exhaustive: true })
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `(g, x, y)` with `a x + b y = g`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        return if a >= 0 { (a, 1, 0) } else { (-a, -1, 0) };
    }
    let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
    // b x + (a mod b) y = g, a mod b = a − q b
    let q = a.div_euclid(b);
    (g, y, x - q * y)
}

/// Breadth-first ball around `b0` over an arbitrary alphabet of isometries,
/// expanding only elements within `radius + margin`. Deduplication is by
/// free reduction when `free` is set, otherwise by rounding hash.
pub fn pruned_ball(
    gens: &[Mobius],
    alphabet: &[Letter],
    free: bool,
    b0: &DiscPoint,
    radius: f64,
    margin: f64,
    prec: f64,
) -> Ball {
    let gen = |l: Letter| if l.inv { gens[l.gen].inverse() } else { gens[l.gen] };
    let keep = radius + margin;
    let mut seen: HashSet<[i64; 5]> = HashSet::new();
    seen.insert(round_key(&Mobius::identity(), prec));
    let mut layer = vec![(Word::identity(), Mobius::identity(), 0.0f64)];
    let mut out = vec![(Word::identity(), Mobius::identity())];
    let mut min_rejected = f64::INFINITY;
    let mut slack = 0.0f64;
    while !layer.is_empty() {
        let mut next = Vec::new();
        for (w, m, dparent) in &layer {
            for &l in alphabet {
                if w.last() == Some(l.inverse()) {
                    continue;
                }
                let child = m.compose(&gen(l)).renormalized();
                let disp = dist_h(b0, &apply_isometry(&child, b0));
                if disp > keep {
                    min_rejected = min_rejected.min(disp);
                    continue;
                }
                if !free && !seen.insert(round_key(&child, prec)) {
                    continue;
                }
                slack = slack.max(dparent - disp);
                let mut cw = w.clone();
                cw.push(l);
                if disp <= radius {
                    out.push((cw.clone(), child));
                }
                next.push((cw, child, disp));
            }
        }
        layer = next;
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    let complete_to = radius.min(min_rejected - slack);
    Ball { elements: out, radius, complete_to, exhaustive: free }
}

/// Ball of displacement `radius` around `b0` for any supported group.
pub fn displacement_ball(group: &GroupSpec, radius: f64, margin: f64, b0: &DiscPoint) -> Result<Ball> {
    match group.kind {
        GroupKind::Modular if *b0 == DiscPoint::origin() => modular_ball(radius),
        GroupKind::FreeSchottky => Ok(pruned_ball(&group.generators, &group.alphabet(), true, b0, radius, margin, group.dedup_precision)),
        _ => {
            let mut b = pruned_ball(&group.generators, &group.alphabet(), false, b0, radius, margin, group.dedup_precision);
            b.exhaustive = false;
            Ok(b)
        }
    }
}

#[derive(Clone, Debug)]
pub struct OrbitRecord {
    pub word: Word,
    pub displacement: f64,
    pub kappa: CartanVector,
    pub phi_values: BTreeMap<String, f64>,
}

impl OrbitRecord {
    pub fn len(&self) -> usize {
        self.word.len()
    }
}

fn same_generators(a: &[Mobius], b: &[Mobius]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.approx_eq(y, 1e-14))
}

fn record(rep: &Representation, w: &Word, m: &Mobius, b0: &DiscPoint, direct: bool) -> Result<OrbitRecord> {
    let sm = if direct {
        ScaledMatrix::from_matrix(rep.image_of_mobius(m).expect("symmetric power"))
    } else {
        rep.evaluate(w)?
    };
    Ok(OrbitRecord {
        word: w.clone(),
        displacement: dist_h(b0, &apply_isometry(m, b0)),
        kappa: cartan_projection(&sm, rep.lie_type)?,
        phi_values: BTreeMap::new(),
    })
}

/// Orbit records for a list of elements, order preserved.
pub fn orbit_records(group: &GroupSpec, rep: &Representation, elements: &[(Word, Mobius)], b0: &DiscPoint) -> Result<Vec<OrbitRecord>> {
    if rep.generator_count() != group.rank() {
        return Err(Error::DimensionMismatch(format!(
            "representation has {} generator images, group has {} generators",
            rep.generator_count(),
            group.rank()
        )));
    }
    let direct = rep.image_of_mobius(&Mobius::identity()).is_some() && same_generators(rep.source_generators(), &group.generators);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        elements.par_iter().map(|(w, m)| record(rep, w, m, b0, direct)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        elements.iter().map(|(w, m)| record(rep, w, m, b0, direct)).collect()
    }
}

/// One record per element of word length at most `max_len`.
pub fn orbit_table(group: &GroupSpec, rep: &Representation, max_len: usize, b0: &DiscPoint) -> Result<Vec<OrbitRecord>> {
    let elements = enumerate_all(group, max_len)?;
    orbit_records(group, rep, &elements, b0)
}

/// Fill `phi_values` for each functional.
pub fn attach_functionals(records: &mut [OrbitRecord], phis: &[RootFunctional]) -> Result<()> {
    for r in records.iter_mut() {
        for phi in phis {
            let v = phi.value(&r.kappa)?;
            r.phi_values.insert(phi.name(), v);
        }
    }
    Ok(())
}

/// Certificate for a word-length enumeration: values below the result are
/// all present. Uses the minimum over the length frontier minus the largest
/// drop observed from a word to its one-letter extension.
pub fn frontier_certificate(words: &[Word], values: &[f64], max_len: usize) -> f64 {
    let index: std::collections::HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut slack = 0.0f64;
    let mut frontier = f64::INFINITY;
    for (i, w) in words.iter().enumerate() {
        if w.len() == max_len {
            frontier = frontier.min(values[i]);
        }
        if let Some(l) = w.last() {
            let mut parent = w.clone();
            parent.push(l.inverse());
            if let Some(&p) = index.get(&parent) {
                slack = slack.max(values[p] - values[i]);
            }
        }
    }
    (frontier - slack).max(0.0)
}

/// Attracting fixed points of hyperbolic elements, with their defining words.
#[derive(Clone, Debug)]
pub struct LimitSample {
    pub points: Vec<BoundaryPoint>,
    pub words: Vec<Word>,
    pub elements: Vec<Mobius>,
}

impl LimitSample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest angular gap between consecutive points, closing edge included.
    pub fn max_gap(&self) -> f64 {
        let n = self.points.len();
        if n < 2 {
            return TAU;
        }
        let mut g = TAU - self.points[n - 1].theta + self.points[0].theta;
        for i in 1..n {
            g = g.max(self.points[i].theta - self.points[i - 1].theta);
        }
        g
    }
}

pub fn limit_sample(group: &GroupSpec, depth: usize) -> Result<LimitSample> {
    let mut raw: Vec<(BoundaryPoint, Word, Mobius)> = Vec::new();
    for (w, m) in enumerate_all(group, depth)? {
        if w.is_empty() || (group.kind == GroupKind::FreeSchottky && !w.is_cyclically_reduced()) {
            continue;
        }
        if classify(&m)? != Class::Hyperbolic {
            continue;
        }
        let (att, _) = fixed_points(&m)?;
        raw.push((att, w, m));
    }
    raw.sort_by(|a, b| a.0.theta.total_cmp(&b.0.theta).then_with(|| a.1.cmp(&b.1)));
    let mut out = LimitSample { points: Vec::new(), words: Vec::new(), elements: Vec::new() };
    for (p, w, m) in raw {
        if let Some(last) = out.points.last() {
            if p.theta - last.theta <= 1e-12 {
                continue;
            }
        }
        out.points.push(p);
        out.words.push(w);
        out.elements.push(m);
    }
    if out.points.len() >= 2 && out.points[0].theta + TAU - out.points[out.points.len() - 1].theta <= 1e-12 {
        out.points.pop();
        out.words.pop();
        out.elements.pop();
    }
    if out.points.len() <= 2 {
        return Err(Error::NonElementaryRequired(format!(
            "only {} limit points found at depth {depth}",
            out.points.len()
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reps::Representation;

    fn schottky() -> GroupSpec {
        GroupSpec::schottky_cross(3.0).unwrap()
    }

    #[test]
    fn free_count() {
        let g = schottky();
        assert_eq!(enumerate(&g, 2).count(), 17);
        assert_eq!(enumerate(&g, 0).count(), 1);
        let first = enumerate(&g, 0).next().unwrap();
        assert!(first.0.is_empty());
        assert_eq!(enumerate(&GroupSpec::modular(), 0).count(), 1);
    }

    #[test]
    fn enumeration_order_is_length_then_lex() {
        let g = schottky();
        let words: Vec<_> = enumerate(&g, 3).map(|(w, _)| w).collect();
        for pair in words.windows(2) {
            assert!(pair[0] < pair[1]);
        }
        let names: Vec<_> = words[..5].iter().map(|w| g.format_word(w)).collect();
        assert_eq!(names, ["e", "a", "A", "b", "B"]);
    }

    /// Projective classes of SL(2, ℤ) with entries in {−1, 0, 1}.
    fn small_entry_classes() -> HashSet<[i64; 4]> {
        let mut out = HashSet::new();
        let vals = [-1i64, 0, 1];
        for &a in &vals {
            for &b in &vals {
                for &c in &vals {
                    for &d in &vals {
                        if a * d - b * c == 1 {
                            out.insert(int_key([a, b, c, d]));
                        }
                    }
                }
            }
        }
        out
    }

    fn as_int(m: &Mobius) -> [i64; 4] {
        let e = m.entries();
        int_key([e[0].round() as i64, e[1].round() as i64, e[2].round() as i64, e[3].round() as i64])
    }

    #[test]
    fn modular_small_entries() {
        let scan = small_entry_classes();
        assert_eq!(scan.len(), 10);
        let found: HashSet<_> = enumerate(&GroupSpec::modular(), 8)
            .map(|(_, m)| as_int(&m))
            .filter(|k| k.iter().all(|x| x.abs() <= 1))
            .collect();
        assert_eq!(found, scan);
    }

    #[test]
    fn modular_enumeration_matches_integer_box() {
        // every matrix with entries bounded by 2 has a word of length ≤ 10
        let mut scan = HashSet::new();
        for a in -2i64..=2 {
            for b in -2i64..=2 {
                for c in -2i64..=2 {
                    for d in -2i64..=2 {
                        if a * d - b * c == 1 {
                            scan.insert(int_key([a, b, c, d]));
                        }
                    }
                }
            }
        }
        let mut found = HashSet::new();
        let mut all = Vec::new();
        for (_, m) in enumerate(&GroupSpec::modular(), 10) {
            let k = as_int(&m);
            all.push(k);
            if k.iter().all(|x| x.abs() <= 2) {
                found.insert(k);
            }
        }
        assert_eq!(found, scan);
        let distinct: HashSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), all.len());
    }

    #[test]
    fn modular_word_reconstructs_matrix() {
        let g = GroupSpec::modular();
        for m in [[2i64, 1, 1, 1], [5, 3, 3, 2], [1, 0, 7, 1], [-3, 2, 1, -1], [0, -1, 1, 4], [1, 5, 0, 1]] {
            let w = modular_word(m);
            assert_eq!(as_int(&g.evaluate(&w)), int_key(m), "{}", g.format_word(&w));
        }
    }

    #[test]
    fn modular_ball_matches_enumeration() {
        let r = 4.0;
        let ball = modular_ball(r).unwrap();
        let from_ball: HashSet<_> = ball.elements.iter().map(|(_, m)| as_int(m)).collect();
        assert_eq!(from_ball.len(), ball.elements.len());
        let o = DiscPoint::origin();
        let from_words: HashSet<_> = enumerate(&GroupSpec::modular(), 14)
            .filter(|(_, m)| dist_h(&o, &apply_isometry(m, &o)) <= r)
            .map(|(_, m)| as_int(&m))
            .collect();
        assert_eq!(from_ball, from_words);
    }

    #[test]
    fn orbit_record_examples() {
        let g = GroupSpec::modular();
        let rep = Representation::fuchsian(&g.generators);
        let elems = vec![(Word::identity(), Mobius::identity()), (g.parse_word("T").unwrap(), g.generators[1])];
        let recs = orbit_records(&g, &rep, &elems, &DiscPoint::origin()).unwrap();
        assert_eq!(recs[0].displacement, 0.0);
        assert!(recs[0].kappa.lambdas.iter().all(|x| x.abs() < 1e-15));
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((recs[1].kappa.root_value(1).unwrap() - 2.0 * golden.ln()).abs() < 1e-12);
        assert!((recs[1].kappa.root_value(1).unwrap() - 0.962424).abs() < 1e-6);
        let o = DiscPoint::origin();
        assert!((recs[1].displacement - dist_h(&o, &apply_isometry(&g.generators[1], &o))).abs() < 1e-15);

        let e = std::f64::consts::E;
        let s = GroupSpec::custom(vec![Mobius::diag(e)]).unwrap();
        let rep = Representation::fuchsian(&s.generators);
        for n in 1..6 {
            let w = Word::from_letters(vec![Letter::new(0, false); n]);
            let r = orbit_records(&s, &rep, &[(w.clone(), s.evaluate(&w))], &o).unwrap();
            assert!((r[0].kappa.root_value(1).unwrap() - 2.0 * n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn limit_sample_examples() {
        let s = limit_sample(&schottky(), 1).unwrap();
        assert_eq!(s.len(), 4);
        let single = GroupSpec::custom(vec![Mobius::translation(1.0, 0.3)]).unwrap();
        assert!(matches!(limit_sample(&single, 5), Err(Error::NonElementaryRequired(_))));
        let m = GroupSpec::modular();
        let mut last = f64::INFINITY;
        for depth in [4, 6, 8, 10] {
            let gap = limit_sample(&m, depth).unwrap().max_gap();
            assert!(gap < last, "depth {depth}: gap {gap} vs {last}");
            last = gap;
        }
    }

    #[test]
    fn limit_points_are_fixed() {
        let g = schottky();
        let s = limit_sample(&g, 4).unwrap();
        for (p, m) in s.points.iter().zip(&s.elements) {
            let q = crate::hypdisc::apply_boundary(m, p);
            assert!(q.angular_distance(p) < 1e-8);
        }
    }

    #[test]
    fn ping_pong_rejects_short_translations() {
        assert!(GroupSpec::schottky_cross(1.5).is_err());
        assert!(GroupSpec::schottky_cross(2.0).is_ok());
    }

    #[test]
    fn pants_boundary_axes_are_disjoint() {
        assert!(GroupSpec::pants(0.5).is_err());
        let g = GroupSpec::pants(1.0).unwrap();
        let ab = g.generators[0].compose(&g.generators[1]);
        for m in [g.generators[0], g.generators[1], ab] {
            assert_eq!(classify(&m).unwrap(), Class::Hyperbolic);
        }
    }

    #[test]
    fn pruned_ball_agrees_with_word_enumeration() {
        let g = schottky();
        let o = DiscPoint::origin();
        let ball = displacement_ball(&g, 7.0, 3.0, &o).unwrap();
        let mut from_words: Vec<_> = enumerate(&g, 6)
            .filter(|(_, m)| dist_h(&o, &apply_isometry(m, &o)) <= 7.0)
            .map(|(w, _)| w)
            .collect();
        from_words.sort();
        let got: Vec<_> = ball.elements.iter().map(|(w, _)| w.clone()).collect();
        assert_eq!(got, from_words);
        assert!(ball.complete_to >= 7.0 - 1e-12);
    }

    #[test]
    fn word_parse_roundtrip() {
        let g = schottky();
        let w = g.parse_word("abAB").unwrap();
        assert_eq!(g.format_word(&w), "abAB");
        assert_eq!(g.parse_word("aA").unwrap(), Word::identity());
        let m = GroupSpec::modular();
        assert_eq!(m.format_word(&m.parse_word("STt").unwrap()), "S");
    }

    #[test]
    fn frontier_certifies_longer_words() {
        let g = schottky();
        let o = DiscPoint::origin();
        let all = enumerate_all(&g, 8).unwrap();
        let disp = |m: &Mobius| dist_h(&o, &apply_isometry(m, &o));
        let short: Vec<_> = all.iter().filter(|(w, _)| w.len() <= 6).collect();
        let words: Vec<Word> = short.iter().map(|(w, _)| w.clone()).collect();
        let values: Vec<f64> = short.iter().map(|(_, m)| disp(m)).collect();
        let ct = frontier_certificate(&words, &values, 6);
        assert!(ct > 0.0);
        let beyond = all.iter().filter(|(w, _)| w.len() > 6).map(|(_, m)| disp(m)).fold(f64::INFINITY, f64::min);
        assert!(beyond > ct, "{beyond} vs {ct}");
    }
}
