use std::fmt;

use fincat_core::{FinCat, MorId, ObjId};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("arrow {index} does not fit the zig-zag shape")]
    ShapeMismatch { index: usize },
    #[error("expected {expected} arrows for {objects} objects")]
    WrongArrowCount { objects: usize, expected: usize },
    #[error("path has odd length {0}")]
    OddLength(usize),
    #[error("end of the first path differs from the start of the second")]
    EndpointMismatch,
    #[error("unknown id `{0}` in path literal")]
    UnknownId(String),
    #[error("path literal must alternate objects and arrows")]
    BadLiteral,
    #[error("path of length {len} exceeds truncation {limit}")]
    TruncationExceeded { len: usize, limit: usize },
}

/// Does arrow `i` run forward, i.e. `o_i → o_{i+1}`?
pub fn is_forward(i: usize) -> bool {
    i % 2 == 0
}

/// A zig-zag `o_0 → o_1 ← o_2 → ...` in a base category. Arrow `i` goes
/// from `o_i` to `o_{i+1}` when `i` is even and back when `i` is odd.
/// [`Path::new`] only accepts even lengths; odd shapes go through
/// [`normalize_path`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    objects: Vec<ObjId>,
    arrows: Vec<MorId>,
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Path{:?}/{:?}", self.objects, self.arrows)
    }
}

fn check_shape(base: &FinCat, objects: &[ObjId], arrows: &[MorId]) -> Result<(), PathError> {
    if objects.len() != arrows.len() + 1 {
        return Err(PathError::WrongArrowCount {
            objects: objects.len(),
            expected: objects.len().saturating_sub(1),
        });
    }
    for (i, &a) in arrows.iter().enumerate() {
        let (d, c) = if is_forward(i) {
            (objects[i], objects[i + 1])
        } else {
            (objects[i + 1], objects[i])
        };
        if a.index() >= base.num_morphisms() || base.dom(a) != d || base.cod(a) != c {
            return Err(PathError::ShapeMismatch { index: i });
        }
    }
    Ok(())
}

impl Path {
    pub fn new(base: &FinCat, objects: Vec<ObjId>, arrows: Vec<MorId>) -> Result<Path, PathError> {
        check_shape(base, &objects, &arrows)?;
        if arrows.len() % 2 == 1 {
            return Err(PathError::OddLength(arrows.len()));
        }
        Ok(Path { objects, arrows })
    }

    pub(crate) fn new_unchecked(objects: Vec<ObjId>, arrows: Vec<MorId>) -> Path {
        Path { objects, arrows }
    }

    pub fn constant(base: &FinCat, o: ObjId, len: usize) -> Path {
        assert!(len % 2 == 0, "paths have even length");
        Path {
            objects: vec![o; len + 1],
            arrows: vec![base.identity(o); len],
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn objects(&self) -> &[ObjId] {
        &self.objects
    }

    pub fn arrows(&self) -> &[MorId] {
        &self.arrows
    }

    pub fn object(&self, i: usize) -> ObjId {
        self.objects[i]
    }

    pub fn arrow(&self, i: usize) -> MorId {
        self.arrows[i]
    }

    pub fn start(&self) -> ObjId {
        self.objects[0]
    }

    pub fn end(&self) -> ObjId {
        *self.objects.last().unwrap()
    }

    pub fn endpoints(&self) -> (ObjId, ObjId) {
        (self.start(), self.end())
    }

    pub fn check(&self, base: &FinCat) -> Result<(), PathError> {
        check_shape(base, &self.objects, &self.arrows)?;
        if self.len() % 2 == 1 {
            return Err(PathError::OddLength(self.len()));
        }
        Ok(())
    }

    pub fn is_constant(&self, base: &FinCat) -> bool {
        self.arrows.iter().all(|&a| base.is_identity(a))
    }

    /// `o'_i = o_{m-i}`; the arrows keep their direction.
    pub fn reverse(&self) -> Path {
        let mut objects = self.objects.clone();
        objects.reverse();
        let mut arrows = self.arrows.clone();
        arrows.reverse();
        Path { objects, arrows }
    }

    pub fn concat(&self, next: &Path) -> Result<Path, PathError> {
        if self.end() != next.start() {
            return Err(PathError::EndpointMismatch);
        }
        let mut objects = self.objects.clone();
        objects.extend_from_slice(&next.objects[1..]);
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&next.arrows);
        Ok(Path { objects, arrows })
    }

    /// Extends by identities at the end up to length `len`.
    pub fn pad_right(&self, base: &FinCat, len: usize) -> Path {
        assert!(len >= self.len() && (len - self.len()) % 2 == 0);
        let mut p = self.clone();
        let e = self.end();
        for _ in self.len()..len {
            p.objects.push(e);
            p.arrows.push(base.identity(e));
        }
        p
    }

    /// Adds `k` identities on each side; `k` must be even.
    pub fn pad_both(&self, base: &FinCat, k: usize) -> Path {
        assert!(k % 2 == 0);
        let (s, e) = self.endpoints();
        let mut objects = vec![s; k];
        objects.extend_from_slice(&self.objects);
        objects.extend(std::iter::repeat(e).take(k));
        let mut arrows = vec![base.identity(s); k];
        arrows.extend_from_slice(&self.arrows);
        arrows.extend(std::iter::repeat(base.identity(e)).take(k));
        Path { objects, arrows }
    }

    /// The image under a functor applied pointwise.
    pub fn map(&self, f: &fincat_core::Functor) -> Path {
        Path {
            objects: self.objects.iter().map(|&o| f.obj(o)).collect(),
            arrows: self.arrows.iter().map(|&a| f.mor(a)).collect(),
        }
    }

    /// Truncates to positions `0..=j` and continues constantly to length `len`.
    pub fn truncate_then_constant(&self, base: &FinCat, j: usize, len: usize) -> Path {
        let mut objects = self.objects[..=j].to_vec();
        let mut arrows = self.arrows[..j].to_vec();
        let e = self.objects[j];
        while arrows.len() < len {
            arrows.push(base.identity(e));
            objects.push(e);
        }
        Path { objects, arrows }
    }

    pub fn normal_form(&self, base: &FinCat) -> Path {
        reduce(base, self.objects.clone(), self.arrows.clone())
    }

    pub fn is_reduced(&self, base: &FinCat) -> bool {
        !self
            .arrows
            .windows(2)
            .any(|w| base.is_identity(w[0]) && base.is_identity(w[1]))
    }

    /// Alternating object and arrow names.
    pub fn to_literal(&self, base: &FinCat) -> Vec<String> {
        let mut out = vec![base.object_name(self.objects[0]).to_string()];
        for (i, &a) in self.arrows.iter().enumerate() {
            out.push(base.morphism_name(a).to_string());
            out.push(base.object_name(self.objects[i + 1]).to_string());
        }
        out
    }

    pub fn label(&self, base: &FinCat) -> String {
        format!("[{}]", self.to_literal(base).join(" "))
    }
}

/// Parses an alternating literal such as `["x","f","y","g","x"]` into its
/// object and arrow sequences, without the even-length requirement.
pub fn parse_literal<S: AsRef<str>>(base: &FinCat, literal: &[S]) -> Result<(Vec<ObjId>, Vec<MorId>), PathError> {
    if literal.len() % 2 == 0 {
        return Err(PathError::BadLiteral);
    }
    let mut objects = Vec::new();
    let mut arrows = Vec::new();
    for (i, s) in literal.iter().enumerate() {
        let s = s.as_ref();
        if i % 2 == 0 {
            objects.push(base.object_by_name(s).ok_or_else(|| PathError::UnknownId(s.to_string()))?);
        } else {
            arrows.push(base.morphism_by_name(s).ok_or_else(|| PathError::UnknownId(s.to_string()))?);
        }
    }
    check_shape(base, &objects, &arrows)?;
    Ok((objects, arrows))
}

/// Parses a literal and normalizes it.
pub fn path_from_literal<S: AsRef<str>>(base: &FinCat, literal: &[S]) -> Result<Path, PathError> {
    let (o, a) = parse_literal(base, literal)?;
    normalize_path(base, o, a)
}

/// Parses a literal that must already have even length; no reduction.
pub fn exact_path_from_literal<S: AsRef<str>>(base: &FinCat, literal: &[S]) -> Result<Path, PathError> {
    let (o, a) = parse_literal(base, literal)?;
    Path::new(base, o, a)
}

fn reduce(base: &FinCat, mut objects: Vec<ObjId>, mut arrows: Vec<MorId>) -> Path {
    let mut i = 0;
    while i + 1 < arrows.len() {
        if base.is_identity(arrows[i]) && base.is_identity(arrows[i + 1]) {
            arrows.drain(i..i + 2);
            objects.drain(i + 1..i + 3);
            i = i.saturating_sub(1);
        } else {
            i += 1;
        }
    }
    Path { objects, arrows }
}

/// Pads odd shapes with a trailing identity, then removes adjacent pairs of
/// identity arrows, leftmost first.
pub fn normalize_path(base: &FinCat, mut objects: Vec<ObjId>, mut arrows: Vec<MorId>) -> Result<Path, PathError> {
    check_shape(base, &objects, &arrows)?;
    if arrows.len() % 2 == 1 {
        let e = *objects.last().unwrap();
        objects.push(e);
        arrows.push(base.identity(e));
    }
    Ok(reduce(base, objects, arrows))
}

pub fn reverse_path(p: &Path) -> Path {
    p.reverse()
}

pub fn concat_paths(p: &Path, q: &Path) -> Result<Path, PathError> {
    p.concat(q)
}

pub fn endpoints(p: &Path) -> (ObjId, ObjId) {
    p.endpoints()
}

/// Every path of exactly length `len`, in lexicographic order of
/// (objects, arrows) ids, optionally restricted to given start objects.
pub fn all_paths(base: &FinCat, len: usize, starts: Option<&[ObjId]>) -> Vec<Path> {
    let mut out = Vec::new();
    let starts: Vec<ObjId> = match starts {
        Some(s) => s.to_vec(),
        None => base.objects().collect(),
    };
    let mut objects = Vec::new();
    let mut arrows = Vec::new();
    fn go(base: &FinCat, len: usize, objects: &mut Vec<ObjId>, arrows: &mut Vec<MorId>, out: &mut Vec<Path>) {
        let i = arrows.len();
        if i == len {
            out.push(Path::new_unchecked(objects.clone(), arrows.clone()));
            return;
        }
        let cur = objects[i];
        let options: Vec<(MorId, ObjId)> = if is_forward(i) {
            base.outgoing(cur).iter().map(|&a| (a, base.cod(a))).collect()
        } else {
            base.incoming(cur).iter().map(|&a| (a, base.dom(a))).collect()
        };
        for (a, next) in options {
            arrows.push(a);
            objects.push(next);
            go(base, len, objects, arrows, out);
            arrows.pop();
            objects.pop();
        }
    }
    for s in starts {
        objects.push(s);
        go(base, len, &mut objects, &mut arrows, &mut out);
        objects.pop();
    }
    out.sort();
    out
}
