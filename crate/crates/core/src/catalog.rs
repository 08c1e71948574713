//! Built-in charts and Lie pairs with the facts expected of them.

use crate::algebra::linalg::{self, Matrix};
use crate::algebra::{parse_rational, rat, Rational};
use crate::domain::Domain;
use crate::frames::ChartSpec;
use crate::liepair::{semidirect_from_rep, LieAlgebra, Representation, Subalgebra};
use num::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown chart `{name}`; available: {available}")]
    UnknownChart { name: String, available: String },
    #[error("unknown Lie pair `{name}`; available: {available}")]
    UnknownPair { name: String, available: String },
}

pub const CHART_NAMES: [&str; 6] = ["abelian2", "heisenberg3", "hyperbolic2", "deformed2", "affine-exp2", "su2-euler"];

pub const PAIR_NAMES: [&str; 11] = [
    "so3/so2",
    "e2/so2",
    "so21/so2",
    "sl2/borel",
    "sl3/borel",
    "p-subdiag2/b2",
    "p-subdiag3/b3",
    "p-subdiag4/b4",
    "so2xR2/so2",
    "heis3/center",
    "gl2/center-so2",
];

/// How an expected value is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// Stated for this example in the source literature.
    Reference(&'static str),
    /// Immediate from the definitions.
    Immediate,
    /// Established by an independent computation, described here.
    Derived(&'static str),
}

impl Evidence {
    pub fn kind(&self) -> &'static str {
        match self {
            Evidence::Reference(_) => "reference",
            Evidence::Immediate => "immediate",
            Evidence::Derived(_) => "derived",
        }
    }

    pub fn note(&self) -> &'static str {
        match self {
            Evidence::Reference(s) | Evidence::Derived(s) => s,
            Evidence::Immediate => "",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Fact {
    /// Verdict `max|R| ≤ tol`.
    Homogeneous(bool),
    /// `R^i_{rj,k}` (0-based, uncalibrated sign) at `point`.
    CurvatureComponent { form: [usize; 2], i: usize, k: usize, point: Vec<Rational>, value: Rational },
    /// Order of the pair; `None` means ineffective.
    Order(Option<usize>),
}

impl Fact {
    pub fn describe(&self) -> (String, String) {
        match self {
            Fact::Homogeneous(b) => ("locally_homogeneous".into(), b.to_string()),
            Fact::CurvatureComponent { form, i, k, point, value } => {
                let pt: Vec<String> = point.iter().map(crate::algebra::format_rational).collect();
                (
                    format!("R^{}_{{{}{},{}}}({})", i + 1, form[0] + 1, form[1] + 1, k + 1, pt.join(",")),
                    crate::algebra::format_rational(value),
                )
            }
            Fact::Order(Some(k)) => ("order".into(), k.to_string()),
            Fact::Order(None) => ("order".into(), "ineffective".into()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Chart,
    LiePair,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub kind: Kind,
    /// Constructor parameters, human readable.
    pub parameters: Vec<(&'static str, String)>,
    /// Needs the numeric backend.
    pub numeric_only: bool,
    pub facts: Vec<(Fact, Evidence)>,
}

fn box_domain(bounds: &[(&str, &str)]) -> Domain {
    Domain::new(bounds.iter().map(|(a, b)| (parse_rational(a).unwrap(), parse_rational(b).unwrap())).collect()).unwrap()
}

fn rows(r: &[&[&str]]) -> Vec<Vec<String>> {
    r.iter().map(|row| row.iter().map(|s| s.to_string()).collect()).collect()
}

/// `abelian<N>`: the identity frame on `[−1, 1]^N`.
fn abelian(n: usize) -> ChartSpec {
    let frame: Vec<Vec<String>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { "1".to_string() } else { "0".to_string() }).collect()).collect();
    ChartSpec::parse(&format!("abelian{n}"), Domain::symmetric_unit(n), &frame).expect("identity frame parses")
}

pub fn chart(name: &str) -> Result<ChartSpec, CatalogError> {
    let unit = ("-1", "1");
    let (domain, frame) = match name {
        "heisenberg3" => (box_domain(&[unit; 3]), rows(&[&["1", "0", "0"], &["0", "1", "0"], &["0", "x1", "1"]])),
        "hyperbolic2" => (box_domain(&[unit, ("1", "2")]), rows(&[&["x2", "0"], &["0", "x2"]])),
        "deformed2" => (box_domain(&[unit; 2]), rows(&[&["1", "0"], &["0", "1 + x1^2"]])),
        "affine-exp2" => (box_domain(&[unit; 2]), rows(&[&["1", "0"], &["0", "exp(x1)"]])),
        // coordinates (φ, θ, ψ); the polar angle stays away from 0 and π
        "su2-euler" => (
            box_domain(&[("0", "3"), ("1/5", "147/50"), ("0", "3")]),
            rows(&[
                &["cos(x3)/sin(x2)", "sin(x3)/sin(x2)", "0"],
                &["-sin(x3)", "cos(x3)", "0"],
                &["-cos(x3)*cos(x2)/sin(x2)", "-sin(x3)*cos(x2)/sin(x2)", "1"],
            ]),
        ),
        _ => {
            let n = name.strip_prefix("abelian").and_then(|d| d.parse::<usize>().ok());
            return match n {
                Some(n) if (1..=8).contains(&n) => Ok(abelian(n)),
                _ => Err(CatalogError::UnknownChart {
                    name: name.to_string(),
                    available: format!("{} (abelian<N> for N in 1..=8)", CHART_NAMES.join(", ")),
                }),
            };
        }
    };
    Ok(ChartSpec::parse(name, domain, &frame).expect("built-in charts parse"))
}

fn elementary(n: usize, i: usize, j: usize) -> Matrix {
    let mut m = linalg::zeros(n, n);
    m[i][j] = Rational::from_integer(1.into());
    m
}

fn diag_step(n: usize, i: usize) -> Matrix {
    let mut m = elementary(n, i, i);
    m[i + 1][i + 1] = Rational::from_integer((-1).into());
    m
}

/// Traceless upper-triangular basis of `sl(n)` plus the listed lower entries.
/// Returns the algebra and the indices of the upper-triangular part.
fn triangular_with(n: usize, lower: &[(usize, usize)], all_lower: bool) -> (LieAlgebra, Vec<usize>) {
    let mut basis: Vec<Matrix> = (0..n - 1).map(|i| diag_step(n, i)).collect();
    for i in 0..n {
        for j in i + 1..n {
            basis.push(elementary(n, i, j));
        }
    }
    let upper = (0..basis.len()).collect();
    if all_lower {
        for i in 0..n {
            for j in 0..i {
                basis.push(elementary(n, i, j));
            }
        }
    } else {
        for &(i, j) in lower {
            basis.push(elementary(n, i, j));
        }
    }
    (LieAlgebra::from_matrices(&basis).expect("matrix algebra"), upper)
}

fn span(g: &LieAlgebra, idx: &[usize]) -> Subalgebra {
    Subalgebra::new(g, idx.iter().map(|&i| g.unit(i)).collect()).expect("catalog subalgebra")
}

fn q(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from_integer(x.into())).collect()
}

pub fn lie_pair(name: &str) -> Result<(LieAlgebra, Subalgebra), CatalogError> {
    let pair = match name {
        "so3/so2" => {
            let g = LieAlgebra::from_brackets(3, &[(0, 1, q(&[0, 0, 1])), (1, 2, q(&[1, 0, 0])), (0, 2, q(&[0, -1, 0]))]).unwrap();
            let h = span(&g, &[2]);
            (g, h)
        }
        "e2/so2" => {
            // J, P1, P2
            let g = LieAlgebra::from_brackets(3, &[(0, 1, q(&[0, 0, 1])), (0, 2, q(&[0, -1, 0]))]).unwrap();
            let h = span(&g, &[0]);
            (g, h)
        }
        "so21/so2" => {
            // J, K1, K2 with [K1, K2] = −J
            let g = LieAlgebra::from_brackets(3, &[(0, 1, q(&[0, 0, 1])), (0, 2, q(&[0, -1, 0])), (1, 2, q(&[-1, 0, 0]))])
                .unwrap();
            let h = span(&g, &[0]);
            (g, h)
        }
        "sl2/borel" => {
            // H, E, F
            let g = LieAlgebra::from_brackets(3, &[(0, 1, q(&[0, 2, 0])), (0, 2, q(&[0, 0, -2])), (1, 2, q(&[1, 0, 0]))]).unwrap();
            let h = span(&g, &[0, 1]);
            (g, h)
        }
        "sl3/borel" => {
            let (g, upper) = triangular_with(3, &[], true);
            let h = span(&g, &upper);
            (g, h)
        }
        "p-subdiag2/b2" | "p-subdiag3/b3" | "p-subdiag4/b4" => {
            let n: usize = name[9..10].parse().unwrap();
            let (g, upper) = triangular_with(n, &[(1, 0)], false);
            let h = span(&g, &upper);
            (g, h)
        }
        "so2xR2/so2" => {
            let so2 = LieAlgebra::new(vec![vec![vec![Rational::zero()]]]).unwrap();
            let rot = Representation::new(&so2, 2, vec![vec![q(&[0, -1]), q(&[1, 0])]]).unwrap();
            semidirect_from_rep(&so2, &rot).unwrap()
        }
        "heis3/center" => {
            let g = LieAlgebra::from_brackets(3, &[(0, 1, q(&[0, 0, 1]))]).unwrap();
            let h = span(&g, &[2]);
            (g, h)
        }
        "gl2/center-so2" => {
            let basis = vec![elementary(2, 0, 0), elementary(2, 0, 1), elementary(2, 1, 0), elementary(2, 1, 1)];
            let g = LieAlgebra::from_matrices(&basis).unwrap();
            let h = Subalgebra::new(&g, vec![q(&[1, 0, 0, 1]), q(&[0, 1, -1, 0])]).unwrap();
            (g, h)
        }
        _ => {
            return Err(CatalogError::UnknownPair { name: name.to_string(), available: PAIR_NAMES.join(", ") });
        }
    };
    Ok(pair)
}

fn chart_entry(name: &'static str, numeric_only: bool, facts: Vec<(Fact, Evidence)>) -> CatalogEntry {
    let spec = chart(name).expect("built-in");
    let frame = spec.entries.iter().map(|r| r.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", "));
    let bounds: Vec<String> = spec
        .domain
        .bounds()
        .iter()
        .map(|(a, b)| format!("[{}, {}]", crate::algebra::format_rational(a), crate::algebra::format_rational(b)))
        .collect();
    CatalogEntry {
        name,
        kind: Kind::Chart,
        parameters: vec![
            ("frame", frame.map(|r| format!("[{r}]")).collect::<Vec<_>>().join(", ")),
            ("domain", bounds.join(" x ")),
        ],
        numeric_only,
        facts,
    }
}

fn pair_entry(name: &'static str, order: Option<usize>, evidence: Evidence) -> CatalogEntry {
    let (g, h) = lie_pair(name).expect("built-in");
    CatalogEntry {
        name,
        kind: Kind::LiePair,
        parameters: vec![("dim g", g.dim().to_string()), ("dim h", h.dim().to_string())],
        numeric_only: false,
        facts: vec![(Fact::Order(order), evidence)],
    }
}

/// Entries whose listed fact the filtration algorithm does not reproduce.
///
/// For `n ≥ 3` the algebra `b(n) + E21` has the unipotent radical of the
/// parabolic together with its centre inside `b(n)` as an ideal, so the
/// filtration stalls at a nonzero stage and the pair is ineffective.
pub const KNOWN_DISAGREEMENTS: [&str; 2] = ["p-subdiag3/b3", "p-subdiag4/b4"];

/// Every built-in entry with its expected facts.
pub fn entries() -> Vec<CatalogEntry> {
    let group = Evidence::Derived("left-invariant frame of a Lie group; exact evaluation of the curvature");
    vec![
        chart_entry("abelian2", false, vec![(Fact::Homogeneous(true), Evidence::Immediate)]),
        chart_entry("heisenberg3", false, vec![(Fact::Homogeneous(true), group.clone())]),
        chart_entry("hyperbolic2", false, vec![(Fact::Homogeneous(true), group.clone())]),
        chart_entry(
            "deformed2",
            false,
            vec![
                (Fact::Homogeneous(false), Evidence::Derived("hand evaluation of the curvature at the origin")),
                (
                    Fact::CurvatureComponent {
                        form: [0, 1],
                        i: 1,
                        k: 0,
                        point: vec![Rational::zero(), Rational::zero()],
                        value: rat(2, 1),
                    },
                    Evidence::Derived("d/dx1 of 2 x1/(1 + x1^2) at 0, cross-checked by finite differences"),
                ),
            ],
        ),
        chart_entry("affine-exp2", true, vec![(Fact::Homogeneous(true), group.clone())]),
        chart_entry("su2-euler", true, vec![(Fact::Homogeneous(true), group)]),
        pair_entry("so3/so2", Some(1), Evidence::Reference("Klein geometries of constant curvature have order one")),
        pair_entry("e2/so2", Some(1), Evidence::Reference("Klein geometries of constant curvature have order one")),
        pair_entry("so21/so2", Some(1), Evidence::Reference("Klein geometries of constant curvature have order one")),
        pair_entry("sl2/borel", Some(2), Evidence::Reference("projective line: ord(P/B) = 2")),
        pair_entry("sl3/borel", Some(2), Evidence::Derived("filtration computed by hand: h1 = span{E13}, h2 = 0")),
        pair_entry("p-subdiag2/b2", Some(2), Evidence::Reference("ord(P/B) = n for one sub-diagonal entry")),
        pair_entry("p-subdiag3/b3", Some(3), Evidence::Reference("ord(P/B) = n for one sub-diagonal entry")),
        pair_entry("p-subdiag4/b4", Some(4), Evidence::Reference("ord(P/B) = n for one sub-diagonal entry")),
        pair_entry("so2xR2/so2", Some(1), Evidence::Reference("semidirect product with g/h = W has order one")),
        pair_entry("heis3/center", None, Evidence::Derived("the center is an ideal of g inside h")),
        pair_entry("gl2/center-so2", None, Evidence::Derived("the center is an ideal of g inside h")),
    ]
}
