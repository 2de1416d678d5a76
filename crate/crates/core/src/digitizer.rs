//! Cubical digitization of implicit regions, hypersurfaces and polylines.
//!
//! A shape is sampled on the closed lattice cubes `[L·x, L·(x+1)]` of a window.
//! Membership is decided on a 3 × … × 3 grid of corner and centre samples per cube:
//! a region `f ≤ 0` takes a cube when some sample satisfies the inequality, a
//! hypersurface `f = 0` when the samples change sign or hit zero exactly, and a
//! polyline when one of its sample points (spaced at most `L/4` apart) lies in the
//! cube. The model graph joins cubes whose closed cells meet, i.e. lattice points at
//! Chebyshev distance one.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use num_traits::{CheckedAdd, CheckedMul, CheckedSub};
use serde::{Deserialize, Serialize};

use crate::covers::BoxCell;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::homotopy::{reduce, HomotopyTrace};
use crate::invariants::{clique_vector, homology};
use crate::io::GraphDoc;
use crate::rational::Q;

/// Samples per axis in each cube: both corners and the centre.
pub const SAMPLES_PER_AXIS: usize = 3;

/// Largest supported ambient dimension.
pub const MAX_AMBIENT: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Const(Q),
    Var(usize),
    Add(Vec<Expr>),
    /// Unary negation with one argument, left-to-right subtraction otherwise.
    Sub(Vec<Expr>),
    Mul(Vec<Expr>),
    Abs(Box<Expr>),
    Min(Vec<Expr>),
    Max(Vec<Expr>),
    Square(Box<Expr>),
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr> {
        let mut p = Parser { text, pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < text.len() {
            return Err(p.error("trailing input"));
        }
        Ok(e)
    }

    /// Exact evaluation; fails only on arithmetic overflow.
    pub fn eval(&self, point: &[Q]) -> Result<Q> {
        let overflow = || Error::Digitize("arithmetic overflow while evaluating the shape".into());
        let all = |args: &[Expr]| {
            args.iter()
                .map(|a| a.eval(point))
                .collect::<Result<Vec<Q>>>()
        };
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var(i) => point[*i],
            Expr::Add(args) => {
                let mut acc = Q::zero().0;
                for v in all(args)? {
                    acc = acc.checked_add(&v.0).ok_or_else(overflow)?;
                }
                Q(acc)
            }
            Expr::Sub(args) => {
                let vals = all(args)?;
                if vals.len() == 1 {
                    -vals[0]
                } else {
                    let mut acc = vals[0].0;
                    for v in &vals[1..] {
                        acc = acc.checked_sub(&v.0).ok_or_else(overflow)?;
                    }
                    Q(acc)
                }
            }
            Expr::Mul(args) => {
                let mut acc = Q::int(1).0;
                for v in all(args)? {
                    acc = acc.checked_mul(&v.0).ok_or_else(overflow)?;
                }
                Q(acc)
            }
            Expr::Abs(a) => {
                let v = a.eval(point)?;
                if v < Q::zero() {
                    -v
                } else {
                    v
                }
            }
            Expr::Min(args) => all(args)?.into_iter().min().expect("min has arguments"),
            Expr::Max(args) => all(args)?.into_iter().max().expect("max has arguments"),
            Expr::Square(a) => {
                let v = a.eval(point)?.0;
                Q(v.checked_mul(&v).ok_or_else(overflow)?)
            }
        })
    }

    /// One more than the largest variable index used.
    pub fn arity(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(i) => i + 1,
            Expr::Abs(a) | Expr::Square(a) => a.arity(),
            Expr::Add(v) | Expr::Sub(v) | Expr::Mul(v) | Expr::Min(v) | Expr::Max(v) => {
                v.iter().map(Expr::arity).max().unwrap_or(0)
            }
        }
    }
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let list = |f: &mut std::fmt::Formatter<'_>, op: &str, args: &[Expr]| {
            write!(f, "({op}")?;
            for a in args {
                write!(f, " {a}")?;
            }
            write!(f, ")")
        };
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(i) => write!(f, "{}", ["x", "y", "z"][*i]),
            Expr::Add(v) => list(f, "+", v),
            Expr::Sub(v) => list(f, "-", v),
            Expr::Mul(v) => list(f, "*", v),
            Expr::Min(v) => list(f, "min", v),
            Expr::Max(v) => list(f, "max", v),
            Expr::Abs(a) => write!(f, "(abs {a})"),
            Expr::Square(a) => write!(f, "(sq {a})"),
        }
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::parse(format!("expr, offset {}", self.pos), msg)
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.text[self.pos..]
                .chars()
                .next()
                .map_or(1, char::len_utf8);
        }
    }

    fn atom(&mut self) -> &str {
        let rest = &self.text[self.pos..];
        let len = rest
            .find(|c: char| c.is_whitespace() || c == '(' || c == ')')
            .unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn expr(&mut self) -> Result<Expr> {
        self.skip_ws();
        if self.pos >= self.text.len() {
            return Err(self.error("unexpected end of expression"));
        }
        if self.text[self.pos..].starts_with(')') {
            return Err(self.error("unexpected \")\""));
        }
        if !self.text[self.pos..].starts_with('(') {
            let start = self.pos;
            let tok = self.atom();
            return match tok {
                "x" => Ok(Expr::Var(0)),
                "y" => Ok(Expr::Var(1)),
                "z" => Ok(Expr::Var(2)),
                _ => tok.parse::<Q>().map(Expr::Const).map_err(|_| {
                    Error::parse(
                        format!("expr, offset {start}"),
                        format!("unknown symbol {tok:?}"),
                    )
                }),
            };
        }
        self.pos += 1;
        self.skip_ws();
        let op_at = self.pos;
        let op = self.atom().to_owned();
        let mut args = Vec::new();
        loop {
            self.skip_ws();
            if self.text[self.pos..].starts_with(')') {
                self.pos += 1;
                break;
            }
            if self.pos >= self.text.len() {
                return Err(self.error("missing \")\""));
            }
            args.push(self.expr()?);
        }
        let bad =
            |what: &str| Error::parse(format!("expr, offset {op_at}"), format!("{op:?} {what}"));
        let unary = |mut args: Vec<Expr>| {
            if args.len() == 1 {
                Ok(Box::new(args.pop().unwrap()))
            } else {
                Err(bad("takes exactly one argument"))
            }
        };
        if args.is_empty() {
            return Err(bad("needs arguments"));
        }
        match op.as_str() {
            "+" => Ok(Expr::Add(args)),
            "-" => Ok(Expr::Sub(args)),
            "*" => Ok(Expr::Mul(args)),
            "min" => Ok(Expr::Min(args)),
            "max" => Ok(Expr::Max(args)),
            "abs" => Ok(Expr::Abs(unary(args)?)),
            "sq" | "square" => Ok(Expr::Square(unary(args)?)),
            _ => Err(bad("is not an operator (expected + - * abs min max sq)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeKind {
    /// `f ≤ 0`.
    Region,
    /// `f = 0`.
    Hypersurface,
    /// Polyline through `points`.
    Curve,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeSpec {
    pub kind: ShapeKind,
    pub expr: Option<Expr>,
    pub points: Vec<Vec<Q>>,
    pub closed: bool,
    pub window: BoxCell,
    pub pitch: Option<Q>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ShapeJson {
    kind: ShapeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    expr: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    points: Vec<Vec<Q>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    closed: bool,
    window: BoxCell,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pitch: Option<Q>,
}

impl ShapeSpec {
    pub fn region(expr: &str, window: BoxCell) -> Result<ShapeSpec> {
        ShapeSpec::implicit(ShapeKind::Region, expr, window)
    }

    pub fn hypersurface(expr: &str, window: BoxCell) -> Result<ShapeSpec> {
        ShapeSpec::implicit(ShapeKind::Hypersurface, expr, window)
    }

    fn implicit(kind: ShapeKind, expr: &str, window: BoxCell) -> Result<ShapeSpec> {
        let s = ShapeSpec {
            kind,
            expr: Some(Expr::parse(expr)?),
            points: Vec::new(),
            closed: false,
            window,
            pitch: None,
        };
        s.check()?;
        Ok(s)
    }

    pub fn curve(points: Vec<Vec<Q>>, closed: bool, window: BoxCell) -> Result<ShapeSpec> {
        let s = ShapeSpec {
            kind: ShapeKind::Curve,
            expr: None,
            points,
            closed,
            window,
            pitch: None,
        };
        s.check()?;
        Ok(s)
    }

    pub fn with_pitch(mut self, pitch: Q) -> Self {
        self.pitch = Some(pitch);
        self
    }

    pub fn ambient(&self) -> usize {
        self.window.ambient()
    }

    fn check(&self) -> Result<()> {
        let p = self.ambient();
        if p == 0 || p > MAX_AMBIENT {
            return Err(Error::Digitize(format!(
                "ambient dimension {p} is outside 1..={MAX_AMBIENT}"
            )));
        }
        if self.window.dimension() != p {
            return Err(Error::Digitize(
                "window must have positive extent on every axis".into(),
            ));
        }
        match self.kind {
            ShapeKind::Curve => {
                if self.points.is_empty() {
                    return Err(Error::Digitize("a curve needs at least one point".into()));
                }
                if let Some(q) = self.points.iter().find(|q| q.len() != p) {
                    return Err(Error::Digitize(format!(
                        "point {q:?} does not have {p} coordinates"
                    )));
                }
            }
            _ => {
                let e = self
                    .expr
                    .as_ref()
                    .ok_or_else(|| Error::Digitize("implicit shapes need \"expr\"".into()))?;
                if e.arity() > p {
                    return Err(Error::Digitize(format!(
                        "expression uses more than {p} coordinates"
                    )));
                }
            }
        }
        if let Some(l) = self.pitch {
            if !l.is_positive() {
                return Err(Error::Digitize(format!("pitch {l} is not positive")));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<ShapeSpec> {
        let raw: ShapeJson = serde_json::from_str(text).map_err(|e| {
            Error::parse(
                format!("line {}, column {}", e.line(), e.column()),
                e.to_string(),
            )
        })?;
        let expr = raw.expr.as_deref().map(Expr::parse).transpose()?;
        let s = ShapeSpec {
            kind: raw.kind,
            expr,
            points: raw.points,
            closed: raw.closed,
            window: raw.window,
            pitch: raw.pitch,
        };
        s.check().map_err(|e| match e {
            Error::Digitize(m) => Error::parse("shape", m),
            other => other,
        })?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ShapeJson {
            kind: self.kind,
            expr: self.expr.as_ref().map(Expr::to_string),
            points: self.points.clone(),
            closed: self.closed,
            window: self.window.clone(),
            pitch: self.pitch,
        })
        .expect("shape serializes")
    }
}

/// Lattice cubes `[L·x, L·(x+1)]`, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicalModel {
    pub pitch: Q,
    pub ambient: usize,
    pub cubes: BTreeSet<Vec<i64>>,
}

impl CubicalModel {
    pub fn new(
        pitch: Q,
        ambient: usize,
        cubes: impl IntoIterator<Item = Vec<i64>>,
    ) -> Result<CubicalModel> {
        if !pitch.is_positive() {
            return Err(Error::Digitize(format!("pitch {pitch} is not positive")));
        }
        let cubes: BTreeSet<Vec<i64>> = cubes.into_iter().collect();
        if let Some(c) = cubes.iter().find(|c| c.len() != ambient) {
            return Err(Error::Digitize(format!(
                "cube {c:?} does not have {ambient} coordinates"
            )));
        }
        Ok(CubicalModel {
            pitch,
            ambient,
            cubes,
        })
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    /// Plain PGM (P2) image of a planar mask: white cubes, `y` increasing upwards.
    pub fn to_pgm(&self) -> Result<String> {
        let (xs, ys, cells) = self.planar_grid()?;
        let mut out = format!("P2\n{} {}\n1\n", xs.len(), ys.len());
        for row in cells.iter().rev() {
            let line: Vec<&str> = row.iter().map(|&b| if b { "1" } else { "0" }).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
        Ok(out)
    }

    /// CSV of a planar mask; the header row lists x indices, the first column y.
    pub fn to_csv(&self) -> Result<String> {
        let (xs, ys, cells) = self.planar_grid()?;
        let mut out = String::from("y\\x");
        for x in &xs {
            write!(out, ",{x}").unwrap();
        }
        out.push('\n');
        for (row, y) in cells.iter().zip(&ys).rev() {
            write!(out, "{y}").unwrap();
            for &b in row {
                out.push_str(if b { ",1" } else { ",0" });
            }
            out.push('\n');
        }
        Ok(out)
    }

    #[allow(clippy::type_complexity)]
    fn planar_grid(&self) -> Result<(Vec<i64>, Vec<i64>, Vec<Vec<bool>>)> {
        if self.ambient != 2 {
            return Err(Error::Digitize("mask dumps need a planar model".into()));
        }
        let (Some(x0), Some(x1)) = (
            self.cubes.iter().map(|c| c[0]).min(),
            self.cubes.iter().map(|c| c[0]).max(),
        ) else {
            return Ok((vec![], vec![], vec![]));
        };
        let y0 = self.cubes.iter().map(|c| c[1]).min().unwrap();
        let y1 = self.cubes.iter().map(|c| c[1]).max().unwrap();
        let xs: Vec<i64> = (x0..=x1).collect();
        let ys: Vec<i64> = (y0..=y1).collect();
        let cells = ys
            .iter()
            .map(|&y| {
                xs.iter()
                    .map(|&x| self.cubes.contains(&vec![x, y]))
                    .collect()
            })
            .collect();
        Ok((xs, ys, cells))
    }
}

/// Lattice index range `lo..=hi` of cubes lying inside `[a, b]` at pitch `l`.
fn cube_range(a: Q, b: Q, l: Q) -> (i64, i64) {
    ((a / l).ceil(), (b / l).floor() - 1)
}

fn window_cubes(window: &BoxCell, l: Q) -> Vec<Vec<i64>> {
    let ranges: Vec<(i64, i64)> = (0..window.ambient())
        .map(|a| cube_range(window.lo[a], window.hi[a], l))
        .collect();
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for &(lo, hi) in &ranges {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (lo..=hi).map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

/// Corner and centre samples of the cube at `x`.
fn samples(x: &[i64], l: Q) -> Vec<Vec<Q>> {
    let steps: Vec<Q> = (0..SAMPLES_PER_AXIS as i64)
        .map(|s| Q::new(s, SAMPLES_PER_AXIS as i64 - 1))
        .collect();
    let mut out: Vec<Vec<Q>> = vec![vec![]];
    for &xi in x {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                steps.iter().map(move |&s| {
                    let mut p = prefix.clone();
                    p.push((Q::int(xi) + s) * l);
                    p
                })
            })
            .collect();
    }
    out
}

pub fn cubical_model(shape: &ShapeSpec, window: &BoxCell, pitch: Q) -> Result<CubicalModel> {
    if !pitch.is_positive() {
        return Err(Error::Digitize(format!("pitch {pitch} is not positive")));
    }
    if window.ambient() != shape.ambient() {
        return Err(Error::MixedDimensions(shape.ambient(), window.ambient()));
    }
    let p = shape.ambient();
    let mut cubes = BTreeSet::new();
    match shape.kind {
        ShapeKind::Curve => {
            let inside: BTreeSet<Vec<i64>> = window_cubes(window, pitch).into_iter().collect();
            for q in polyline_samples(&shape.points, shape.closed, pitch) {
                for c in cubes_containing(&q, pitch) {
                    if inside.contains(&c) {
                        cubes.insert(c);
                    }
                }
            }
        }
        kind => {
            let f = shape
                .expr
                .as_ref()
                .expect("implicit shapes carry an expression");
            for x in window_cubes(window, pitch) {
                let mut neg = false;
                let mut pos = false;
                let mut zero = false;
                for s in samples(&x, pitch) {
                    let v = f.eval(&s)?;
                    neg |= v < Q::zero();
                    pos |= v > Q::zero();
                    zero |= v == Q::zero();
                }
                let hit = match kind {
                    ShapeKind::Region => neg || zero,
                    _ => zero || (neg && pos),
                };
                if hit {
                    cubes.insert(x);
                }
            }
        }
    }
    CubicalModel::new(pitch, p, cubes)
}

/// Points along the polyline, consecutive ones at most `l/4` apart in the L1 norm.
fn polyline_samples(points: &[Vec<Q>], closed: bool, l: Q) -> Vec<Vec<Q>> {
    let mut segs: Vec<(&Vec<Q>, &Vec<Q>)> = points.windows(2).map(|w| (&w[0], &w[1])).collect();
    if closed && points.len() > 2 {
        segs.push((&points[points.len() - 1], &points[0]));
    }
    let mut out = vec![points[0].clone()];
    let step = l / Q::int(4);
    for (a, b) in segs {
        let l1 = a.iter().zip(b).fold(Q::zero(), |s, (&u, &v)| {
            let d = v - u;
            s + if d < Q::zero() { -d } else { d }
        });
        let m = (l1 / step).ceil().max(1);
        for j in 1..=m {
            let t = Q::new(j, m);
            out.push(a.iter().zip(b).map(|(&u, &v)| u + (v - u) * t).collect());
        }
    }
    out
}

/// Every closed cube containing `q`: two choices on axes where `q` sits on a grid line.
fn cubes_containing(q: &[Q], l: Q) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for &c in q {
        let t = c / l;
        let f = t.floor();
        let choices: Vec<i64> = if Q::int(f) == t {
            vec![f - 1, f]
        } else {
            vec![f]
        };
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |&x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

/// Label of the cube at lattice point `x`, e.g. `"-1,2"`.
pub fn cube_label(x: &[i64]) -> String {
    x.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

/// Intersection graph of the closed cubes.
pub fn model_graph(m: &CubicalModel) -> Graph {
    let cubes: Vec<&Vec<i64>> = m.cubes.iter().collect();
    let index: HashMap<&Vec<i64>, usize> = cubes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let offsets = chebyshev_offsets(m.ambient);
    let mut edges = Vec::new();
    for (i, c) in cubes.iter().enumerate() {
        for off in &offsets {
            let nb: Vec<i64> = c.iter().zip(off).map(|(a, b)| a + b).collect();
            if let Some(&j) = index.get(&nb) {
                if i < j {
                    edges.push((i, j));
                }
            }
        }
    }
    Graph::from_index_edges(cubes.iter().map(|c| cube_label(c)).collect(), &edges)
}

fn chebyshev_offsets(p: usize) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..p {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                [-1, 0, 1].into_iter().map(move |d| {
                    let mut v = prefix.clone();
                    v.push(d);
                    v
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().any(|&d| d != 0));
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct DigitizeReport {
    pub pitch: Q,
    pub cubes: usize,
    pub graph: GraphDoc,
    pub residue: GraphDoc,
    pub trace: HomotopyTrace,
    pub euler: i64,
    pub betti_q: Vec<usize>,
    pub betti_z2: Vec<usize>,
    pub torsion: Vec<Vec<u64>>,
}

impl DigitizeReport {
    pub fn residue_graph(&self) -> Graph {
        self.residue
            .to_graph()
            .expect("residue is a well-formed graph")
    }

    pub fn model_graph(&self) -> Graph {
        self.graph.to_graph().expect("model graph is well formed")
    }
}

/// Digitize, build the model graph, reduce it, and compute invariants. The Euler
/// characteristic is counted on the model graph; homology on the residue, which
/// has the same homotopy type.
pub fn digitize_reduce(shape: &ShapeSpec, window: &BoxCell, pitch: Q) -> Result<DigitizeReport> {
    let model = cubical_model(shape, window, pitch)?;
    let g = model_graph(&model);
    let red = reduce(&g);
    let euler = clique_vector(&g)?.euler();
    let h = homology(&red.residue)?;
    Ok(DigitizeReport {
        pitch,
        cubes: model.len(),
        graph: GraphDoc::from(&g),
        residue: GraphDoc::from(&red.residue),
        trace: red.trace,
        euler,
        betti_q: h.betti_rational,
        betti_z2: h.betti_mod2,
        torsion: h.torsion,
    })
}

/// Names of the bundled shapes.
pub const BUNDLED: [&str; 5] = ["segment", "disk", "circle", "annulus", "sphere"];

/// Bundled test shapes: unit segment on a line, unit disk and circle, the annulus
/// `1 ≤ r ≤ 2`, and the unit sphere in space.
pub fn bundled(name: &str) -> Result<ShapeSpec> {
    let win = |r: i64, p: usize| BoxCell::int(&vec![-r; p], &vec![r; p]).expect("window");
    match name {
        "segment" => ShapeSpec::region("(* x (- x 1))", BoxCell::int(&[-1], &[2])?),
        "disk" => ShapeSpec::region("(- (+ (sq x) (sq y)) 1)", win(2, 2)),
        "circle" => ShapeSpec::hypersurface("(- (+ (sq x) (sq y)) 1)", win(2, 2)),
        "annulus" => ShapeSpec::region(
            "(max (- (+ (sq x) (sq y)) 4) (- 1 (+ (sq x) (sq y))))",
            win(3, 2),
        ),
        "sphere" => ShapeSpec::hypersurface("(- (+ (sq x) (sq y) (sq z)) 1)", win(2, 3)),
        other => Err(Error::UnknownEntry(other.to_owned())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn expressions() {
        let e = Expr::parse("(- (+ (sq x) (sq y)) 1)").unwrap();
        assert_eq!(e.eval(&[Q::int(1), Q::int(1)]).unwrap(), Q::int(1));
        assert_eq!(e.arity(), 2);
        assert_eq!(Expr::parse(&e.to_string()).unwrap(), e);
        let m = Expr::parse("(max (abs (- x)) 1/2 (min y 0.25))").unwrap();
        assert_eq!(m.eval(&[Q::new(-1, 3), Q::int(3)]).unwrap(), Q::new(1, 2));
        for bad in ["(+ x", "(foo x)", "(sq x y)", "x)", "(+ w 1)", "()"] {
            assert!(
                matches!(Expr::parse(bad), Err(Error::Parse { .. })),
                "{bad}"
            );
        }
    }

    #[test]
    fn segment_run() {
        let s = bundled("segment").unwrap();
        let m = cubical_model(&s, &s.window, Q::new(1, 2)).unwrap();
        let xs: Vec<i64> = m.cubes.iter().map(|c| c[0]).collect();
        assert_eq!(xs, vec![-1, 0, 1, 2]);
        assert!(model_graph(&m).is_isomorphic(&path(4)));
    }

    #[test]
    fn circle_and_disk_origin() {
        let half = Q::new(1, 2);
        let c = bundled("circle").unwrap();
        let ring = cubical_model(&c, &c.window, half).unwrap();
        assert!(!ring.cubes.contains(&vec![0, 0]) && !ring.cubes.contains(&vec![-1, -1]));
        let d = bundled("disk").unwrap();
        let disk = cubical_model(&d, &d.window, half).unwrap();
        assert!(disk.cubes.contains(&vec![0, 0]));
        assert!(ring.cubes.is_subset(&disk.cubes));
    }

    #[test]
    fn model_graphs() {
        let m = CubicalModel::new(
            Q::int(1),
            2,
            [vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]],
        )
        .unwrap();
        assert!(model_graph(&m).is_isomorphic(&complete(4)));
        let corner = CubicalModel::new(Q::int(1), 2, [vec![0, 0], vec![1, 1]]).unwrap();
        assert_eq!(model_graph(&corner).size(), 1);
        assert_eq!(chebyshev_offsets(3).len(), 26);
    }

    #[test]
    fn curves() {
        let pts = vec![vec![Q::zero(), Q::zero()], vec![Q::int(1), Q::zero()]];
        let s = ShapeSpec::curve(pts, false, BoxCell::int(&[-1, -1], &[2, 2]).unwrap()).unwrap();
        let m = cubical_model(&s, &s.window, Q::int(1)).unwrap();
        // The segment runs along the grid line y = 0, touching both rows of cubes.
        assert_eq!(m.len(), 6);
    }

    #[test]
    fn reductions() {
        let s = bundled("segment").unwrap();
        let r = digitize_reduce(&s, &s.window, Q::new(1, 2)).unwrap();
        assert_eq!(r.residue_graph().order(), 1);
        let c = bundled("circle").unwrap();
        let r = digitize_reduce(&c, &c.window, Q::new(1, 2)).unwrap();
        assert_eq!(r.euler, 0);
        assert_eq!(r.betti_q, vec![1, 1]);
        assert_eq!(
            crate::classify::surface_dimension(&r.residue_graph()),
            Some(1)
        );
    }

    #[test]
    fn masks_and_json() {
        let d = bundled("disk").unwrap();
        let m = cubical_model(&d, &d.window, Q::int(1)).unwrap();
        let pgm = m.to_pgm().unwrap();
        assert!(pgm.starts_with("P2\n4 4\n1\n"));
        assert!(m.to_csv().unwrap().starts_with("y\\x,-2,-1,0,1\n"));
        let back = ShapeSpec::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
        let bad = r#"{"kind":"region","expr":"(+ x","window":{"lo":[0],"hi":[1]}}"#;
        assert!(
            matches!(ShapeSpec::from_json(bad), Err(Error::Parse { position, .. }) if position.starts_with("expr"))
        );
    }
}
