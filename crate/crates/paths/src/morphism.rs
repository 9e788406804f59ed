use fincat_core::{BudgetExceeded, FinCat, MorId};
use thiserror::Error;

use crate::path::{is_forward, Path};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("reparametrization is not a monotone zig-zag map: {0}")]
    BadReparam(String),
    #[error("component {0} has the wrong endpoints")]
    BadComponent(usize),
    #[error("naturality fails at generator {0}")]
    NotNatural(usize),
    #[error("morphisms do not compose")]
    NotComposable,
    #[error("leg {0} does not start where the previous leg ends")]
    BrokenChain(usize),
    #[error("backward leg {0} is not a pure reparametrization")]
    NotInW(usize),
    #[error("zig-zag inverts {len} W-arrows, bound is {bound}")]
    TooLong { len: usize, bound: usize },
}

/// A map `{0..m} → {0..n}` between zig-zag shapes. It starts at 0, ends at
/// `n`, and moves by 0 or 1; a move at `i` is only allowed when `F(i)` has
/// the parity of `i`, so arrows land on arrows of the same direction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Reparam {
    target_len: usize,
    map: Vec<usize>,
}

impl Reparam {
    pub fn new(target_len: usize, map: Vec<usize>) -> Result<Reparam, MorphismError> {
        let r = Reparam { target_len, map };
        r.check()?;
        Ok(r)
    }

    pub fn identity(len: usize) -> Reparam {
        Reparam {
            target_len: len,
            map: (0..=len).collect(),
        }
    }

    pub fn check(&self) -> Result<(), MorphismError> {
        let bad = |s: &str| Err(MorphismError::BadReparam(s.to_string()));
        if self.map.is_empty() || self.map[0] != 0 {
            return bad("F(0) must be 0");
        }
        if *self.map.last().unwrap() != self.target_len {
            return bad("F(m) must be n");
        }
        for i in 0..self.map.len() - 1 {
            match self.map[i + 1].checked_sub(self.map[i]) {
                Some(0) => {}
                Some(1) if self.map[i] % 2 == i % 2 => {}
                _ => return bad("steps must be 0 or a parity-matching 1"),
            }
        }
        Ok(())
    }

    pub fn source_len(&self) -> usize {
        self.map.len() - 1
    }

    pub fn target_len(&self) -> usize {
        self.target_len
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Reparam) -> Reparam {
        Reparam {
            target_len: next.target_len,
            map: self.map.iter().map(|&i| next.map[i]).collect(),
        }
    }

    pub fn steps_at(&self, i: usize) -> bool {
        self.map[i + 1] != self.map[i]
    }
}

/// A morphism `(F, α): I → J`: a reparametrization and components
/// `α_i: I(i) → J(F(i))`, natural over every arrow of `I`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathMorphism {
    from: Path,
    to: Path,
    reparam: Reparam,
    components: Vec<MorId>,
}

/// Naturality of the square at generator `i`, given components at `i` and `i + 1`.
pub(crate) fn square_commutes(
    base: &FinCat,
    from: &Path,
    to: &Path,
    reparam_i: usize,
    steps: bool,
    i: usize,
    a_i: MorId,
    a_next: MorId,
) -> bool {
    let src = from.arrow(i);
    let tgt = if steps {
        to.arrow(reparam_i)
    } else {
        base.identity(to.object(reparam_i))
    };
    if is_forward(i) {
        base.compose(tgt, a_i) == base.compose(a_next, src)
    } else {
        base.compose(tgt, a_next) == base.compose(a_i, src)
    }
}

impl PathMorphism {
    pub fn new(
        base: &FinCat,
        from: Path,
        to: Path,
        reparam: Reparam,
        components: Vec<MorId>,
    ) -> Result<PathMorphism, MorphismError> {
        let m = PathMorphism {
            from,
            to,
            reparam,
            components,
        };
        m.check(base)?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(from: Path, to: Path, reparam: Reparam, components: Vec<MorId>) -> PathMorphism {
        PathMorphism {
            from,
            to,
            reparam,
            components,
        }
    }

    pub fn identity(base: &FinCat, p: &Path) -> PathMorphism {
        PathMorphism {
            from: p.clone(),
            to: p.clone(),
            reparam: Reparam::identity(p.len()),
            components: p.objects().iter().map(|&o| base.identity(o)).collect(),
        }
    }

    pub fn check(&self, base: &FinCat) -> Result<(), MorphismError> {
        self.reparam.check()?;
        if self.reparam.source_len() != self.from.len() || self.reparam.target_len() != self.to.len() {
            return Err(MorphismError::BadReparam("lengths differ from the paths".into()));
        }
        if self.components.len() != self.from.len() + 1 {
            return Err(MorphismError::BadComponent(self.components.len()));
        }
        for (i, &c) in self.components.iter().enumerate() {
            let j = self.reparam.apply(i);
            if base.dom(c) != self.from.object(i) || base.cod(c) != self.to.object(j) {
                return Err(MorphismError::BadComponent(i));
            }
        }
        for i in 0..self.from.len() {
            let ok = square_commutes(
                base,
                &self.from,
                &self.to,
                self.reparam.apply(i),
                self.reparam.steps_at(i),
                i,
                self.components[i],
                self.components[i + 1],
            );
            if !ok {
                return Err(MorphismError::NotNatural(i));
            }
        }
        Ok(())
    }

    pub fn from(&self) -> &Path {
        &self.from
    }

    pub fn to(&self) -> &Path {
        &self.to
    }

    pub fn reparam(&self) -> &Reparam {
        &self.reparam
    }

    pub fn components(&self) -> &[MorId] {
        &self.components
    }

    /// Pure reparametrization: every component is an identity.
    pub fn is_w(&self, base: &FinCat) -> bool {
        self.components.iter().all(|&c| base.is_identity(c))
    }

    /// `next ∘ self`.
    pub fn then(&self, base: &FinCat, next: &PathMorphism) -> Result<PathMorphism, MorphismError> {
        if self.to != next.from {
            return Err(MorphismError::NotComposable);
        }
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(i, &a)| base.compose(next.components[self.reparam.apply(i)], a).unwrap())
            .collect();
        Ok(PathMorphism {
            from: self.from.clone(),
            to: next.to.clone(),
            reparam: self.reparam.then(&next.reparam),
            components,
        })
    }

    /// Endpoint components `(α_0, α_m)`.
    pub fn endpoint_components(&self) -> (MorId, MorId) {
        (self.components[0], *self.components.last().unwrap())
    }
}

/// One step of a zig-zag in the localized path category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Leg {
    Forward(PathMorphism),
    /// A W-arrow traversed from its target back to its source.
    Backward(PathMorphism),
}

impl Leg {
    pub fn start(&self) -> &Path {
        match self {
            Leg::Forward(m) => m.from(),
            Leg::Backward(w) => w.to(),
        }
    }

    pub fn end(&self) -> &Path {
        match self {
            Leg::Forward(m) => m.to(),
            Leg::Backward(w) => w.from(),
        }
    }
}

/// A morphism of the localized path category as a zig-zag of legs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizedPathMorphism {
    legs: Vec<Leg>,
}

impl LocalizedPathMorphism {
    pub fn new(base: &FinCat, legs: Vec<Leg>, bound: usize) -> Result<Self, MorphismError> {
        let m = LocalizedPathMorphism { legs };
        m.check(base, bound)?;
        Ok(m)
    }

    pub fn single(m: PathMorphism) -> Self {
        LocalizedPathMorphism {
            legs: vec![Leg::Forward(m)],
        }
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    pub fn source(&self) -> &Path {
        self.legs[0].start()
    }

    pub fn target(&self) -> &Path {
        self.legs.last().unwrap().end()
    }

    pub fn check(&self, base: &FinCat, bound: usize) -> Result<(), MorphismError> {
        let inverted = self.legs.iter().filter(|l| matches!(l, Leg::Backward(_))).count();
        if self.legs.is_empty() || inverted > bound {
            return Err(MorphismError::TooLong { len: inverted, bound });
        }
        for (i, leg) in self.legs.iter().enumerate() {
            match leg {
                Leg::Forward(m) => m.check(base)?,
                Leg::Backward(w) => {
                    w.check(base)?;
                    if !w.is_w(base) {
                        return Err(MorphismError::NotInW(i));
                    }
                }
            }
            if i > 0 && self.legs[i - 1].end() != leg.start() {
                return Err(MorphismError::BrokenChain(i));
            }
        }
        Ok(())
    }

    /// The induced pair of base morphisms at the two ends. W-legs contribute
    /// identities, so only forward legs matter.
    pub fn endpoint_components(&self, base: &FinCat) -> (MorId, MorId) {
        let mut first = base.identity(self.source().start());
        let mut last = base.identity(self.source().end());
        for leg in &self.legs {
            if let Leg::Forward(m) = leg {
                let (a, b) = m.endpoint_components();
                first = base.compose(a, first).unwrap();
                last = base.compose(b, last).unwrap();
            }
        }
        (first, last)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Paddings of the source may be inverted (up to the zig-zag bound).
    Localized,
    /// No inversion: both paths are padded on the right to a common length
    /// and compared by componentwise natural transformations only.
    Strict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathSearchOutcome {
    Found(LocalizedPathMorphism),
    /// `exhaustive` is true when absence is proven, false when the search
    /// only covered the configured bound.
    NotFound { exhaustive: bool },
}

#[derive(Debug, Clone, Copy)]
pub struct PathSearchOptions {
    pub zigzag_bound: usize,
    pub mode: SearchMode,
    pub node_budget: u64,
}

impl Default for PathSearchOptions {
    fn default() -> Self {
        PathSearchOptions {
            zigzag_bound: 3,
            mode: SearchMode::Localized,
            node_budget: 1_000_000,
        }
    }
}

struct Searcher<'a> {
    base: &'a FinCat,
    nodes: u64,
    budget: u64,
}

impl Searcher<'_> {
    fn tick(&mut self) -> Result<(), BudgetExceeded> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(BudgetExceeded::new("path morphism search nodes", self.budget));
        }
        Ok(())
    }

    /// First `(F, α): from → to` in canonical order, with `F` fixed when given.
    fn find(
        &mut self,
        from: &Path,
        to: &Path,
        fixed: Option<&Reparam>,
    ) -> Result<Option<PathMorphism>, BudgetExceeded> {
        let (m, n) = (from.len(), to.len());
        let mut map = vec![0usize; m + 1];
        let mut comps = vec![MorId(0); m + 1];
        if self.go(from, to, fixed, 0, &mut map, &mut comps)? {
            let reparam = Reparam {
                target_len: n,
                map,
            };
            return Ok(Some(PathMorphism::new_unchecked(from.clone(), to.clone(), reparam, comps)));
        }
        Ok(None)
    }

    fn go(
        &mut self,
        from: &Path,
        to: &Path,
        fixed: Option<&Reparam>,
        i: usize,
        map: &mut Vec<usize>,
        comps: &mut Vec<MorId>,
    ) -> Result<bool, BudgetExceeded> {
        self.tick()?;
        let (m, n) = (from.len(), to.len());
        let base = self.base;
        let positions: Vec<usize> = if let Some(r) = fixed {
            vec![r.apply(i)]
        } else if i == 0 {
            vec![0]
        } else {
            let p = map[i - 1];
            let mut v = vec![p];
            if p < n && p % 2 == (i - 1) % 2 {
                v.push(p + 1);
            }
            v
        };
        for j in positions {
            // Remaining steps must still reach n.
            if n - j > m - i || (i == m && j != n) {
                continue;
            }
            map[i] = j;
            for &c in base.hom(from.object(i), to.object(j)) {
                if i > 0 {
                    let steps = map[i] != map[i - 1];
                    if !square_commutes(base, from, to, map[i - 1], steps, i - 1, comps[i - 1], c) {
                        continue;
                    }
                }
                comps[i] = c;
                if i == m || self.go(from, to, fixed, i + 1, map, comps)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

/// Paths obtained from `p` by inserting `d` pairs of identities, in
/// canonical order of insertion positions, with the W-arrow back to `p`.
pub fn stutter_expansions(base: &FinCat, p: &Path, d: usize) -> Vec<PathMorphism> {
    let mut out = Vec::new();
    let mut positions = vec![0usize; d];
    fn rec(base: &FinCat, p: &Path, k: usize, start: usize, positions: &mut Vec<usize>, out: &mut Vec<PathMorphism>) {
        if k == positions.len() {
            out.push(expand(base, p, positions));
            return;
        }
        for pos in start..=p.len() {
            positions[k] = pos;
            rec(base, p, k + 1, pos, positions, out);
        }
    }
    rec(base, p, 0, 0, &mut positions, &mut out);
    out
}

/// Inserts an identity pair at each given object position (sorted).
fn expand(base: &FinCat, p: &Path, positions: &[usize]) -> PathMorphism {
    let mut objects = Vec::new();
    let mut arrows = Vec::new();
    let mut map = Vec::new();
    let mut next = 0;
    for i in 0..=p.len() {
        objects.push(p.object(i));
        map.push(i);
        while next < positions.len() && positions[next] == i {
            let o = p.object(i);
            arrows.push(base.identity(o));
            arrows.push(base.identity(o));
            objects.push(o);
            objects.push(o);
            map.push(i);
            map.push(i);
            next += 1;
        }
        if i < p.len() {
            arrows.push(p.arrow(i));
        }
    }
    let k = Path::new_unchecked(objects, arrows);
    let components = k.objects().iter().map(|&o| base.identity(o)).collect();
    PathMorphism::new_unchecked(
        k,
        p.clone(),
        Reparam {
            target_len: p.len(),
            map,
        },
        components,
    )
}

/// Searches for a morphism `from → to` in the localized path category.
///
/// Localized mode tries, for `d = 0..=zigzag_bound`, every padding `K` of
/// `from` with `d` inserted identity pairs and looks for `K → to`; the
/// answer is `w⁻¹` followed by that morphism. Absence is only proven when
/// no base morphism joins the start points or the end points. Strict mode
/// pads both paths to a common length and looks for a componentwise
/// natural transformation; its answer is always exhaustive.
pub fn find_path_morphism(
    base: &FinCat,
    from: &Path,
    to: &Path,
    options: PathSearchOptions,
) -> Result<PathSearchOutcome, BudgetExceeded> {
    let mut s = Searcher {
        base,
        nodes: 0,
        budget: options.node_budget,
    };
    match options.mode {
        SearchMode::Strict => {
            let len = from.len().max(to.len());
            let a = from.pad_right(base, len);
            let b = to.pad_right(base, len);
            match s.find(&a, &b, Some(&Reparam::identity(len)))? {
                None => Ok(PathSearchOutcome::NotFound { exhaustive: true }),
                Some(m) => {
                    let mut legs = Vec::new();
                    if a != *from {
                        legs.push(Leg::Backward(right_padding(base, from, len)));
                    }
                    legs.push(Leg::Forward(m));
                    if b != *to {
                        legs.push(Leg::Forward(right_padding(base, to, len)));
                    }
                    Ok(PathSearchOutcome::Found(LocalizedPathMorphism { legs }))
                }
            }
        }
        SearchMode::Localized => {
            if from == to {
                return Ok(PathSearchOutcome::Found(LocalizedPathMorphism::single(PathMorphism::identity(
                    base, from,
                ))));
            }
            for d in 0..=options.zigzag_bound {
                for w in stutter_expansions(base, from, d) {
                    if let Some(m) = s.find(w.from(), to, None)? {
                        let legs = if d == 0 {
                            vec![Leg::Forward(m)]
                        } else {
                            vec![Leg::Backward(w), Leg::Forward(m)]
                        };
                        return Ok(PathSearchOutcome::Found(LocalizedPathMorphism { legs }));
                    }
                }
            }
            let proven = base.hom(from.start(), to.start()).is_empty() || base.hom(from.end(), to.end()).is_empty();
            Ok(PathSearchOutcome::NotFound { exhaustive: proven })
        }
    }
}

/// The W-arrow from the right padding of `p` to length `len` back onto `p`.
pub fn right_padding(base: &FinCat, p: &Path, len: usize) -> PathMorphism {
    let padded = p.pad_right(base, len);
    let map = (0..=len).map(|i| i.min(p.len())).collect();
    let components = padded.objects().iter().map(|&o| base.identity(o)).collect();
    PathMorphism::new_unchecked(
        padded,
        p.clone(),
        Reparam {
            target_len: p.len(),
            map,
        },
        components,
    )
}
