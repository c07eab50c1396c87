//! Closed-form classification of a scenario into one of 41 instance groups.
//!
//! Each group is a row of data: the inequalities that select it and the
//! formulas for its optimal investments, loadshed and prices. Formulas are
//! kept as text over the symbols `CIr CPr Mr CIf CPf Mf CL D1 D2` so the
//! table can be exported as written.

use std::fmt::Write as _;
use std::sync::LazyLock;

use serde::Serialize;
use thiserror::Error;

use crate::model::{ModelError, PrimalDecision, SystemParams, Tech};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error(transparent)]
    Params(#[from] ModelError),
    #[error("outside the classified domain: {0}")]
    OutsideAssumptions(String),
    #[error("group {group} does not match the parameters")]
    GroupMismatch { group: u8 },
    #[error("no instance group matches the parameters")]
    Unmatched,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sym {
    CIr,
    CPr,
    Mr,
    CIf,
    CPf,
    Mf,
    CL,
    D1,
    D2,
}

#[derive(Debug, Clone, PartialEq)]
enum Expr {
    Num(i64),
    Sym(Sym),
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>),
}

impl Expr {
    fn eval<T: Scalar>(&self, p: &SystemParams<T>) -> T {
        match self {
            Expr::Num(n) => T::from_i64_exact(*n),
            Expr::Sym(s) => match s {
                Sym::CIr => p.renewable.invest_cost.clone(),
                Sym::CPr => p.renewable.operating_cost.clone(),
                Sym::Mr => p.renewable.max_capacity.clone(),
                Sym::CIf => p.fossil.invest_cost.clone(),
                Sym::CPf => p.fossil.operating_cost.clone(),
                Sym::Mf => p.fossil.max_capacity.clone(),
                Sym::CL => p.loadshed_cost.clone(),
                Sym::D1 => p.demand[0].clone(),
                Sym::D2 => p.demand[1].clone(),
            },
            Expr::Neg(e) => -e.eval(p),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(p), b.eval(p));
                match op {
                    '+' => a + b,
                    '-' => a - b,
                    '*' => a * b,
                    _ => a / b,
                }
            }
        }
    }
}

/// Recursive-descent parser for `+ - * /`, parentheses, integers and symbols.
struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn parse(text: &'a str) -> Result<Expr, String> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
        };
        let e = p.sum()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(format!("trailing input in `{text}` at {}", p.pos));
        }
        Ok(e)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<Expr, String> {
        let mut lhs = self.product()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.product()?;
            lhs = Expr::Bin(c as char, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr, String> {
        let mut lhs = self.atom()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.atom()?;
            lhs = Expr::Bin(c as char, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn atom(&mut self) -> Result<Expr, String> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.atom()?)))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err("missing `)`".into());
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                s.parse().map(Expr::Num).map_err(|e| e.to_string())
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let sym = match name {
                    "CIr" => Sym::CIr,
                    "CPr" => Sym::CPr,
                    "Mr" => Sym::Mr,
                    "CIf" => Sym::CIf,
                    "CPf" => Sym::CPf,
                    "Mf" => Sym::Mf,
                    "CL" => Sym::CL,
                    "D1" => Sym::D1,
                    "D2" => Sym::D2,
                    _ => return Err(format!("unknown symbol `{name}`")),
                };
                Ok(Expr::Sym(sym))
            }
            other => Err(format!("unexpected {:?}", other.map(|c| c as char))),
        }
    }
}

/// A strict inequality `lhs < rhs`, written as text.
#[derive(Debug, Clone)]
struct Condition {
    lhs: Expr,
    rhs: Expr,
}

impl Condition {
    fn parse(text: &'static str) -> Self {
        let (l, r) = text.split_once('<').expect("condition has `<`");
        Self {
            lhs: Parser::parse(l).unwrap_or_else(|e| panic!("{text}: {e}")),
            rhs: Parser::parse(r).unwrap_or_else(|e| panic!("{text}: {e}")),
        }
    }

    /// `rhs - lhs` and the scale used to judge it.
    fn margin<T: Scalar>(&self, p: &SystemParams<T>) -> (T, T) {
        let (l, r) = (self.lhs.eval(p), self.rhs.eval(p));
        let scale = T::one() + T::max_of(l.abs(), r.abs());
        (r - l, scale)
    }
}

/// One group of the table, in source form.
struct RawGroup {
    id: u8,
    conditions: &'static [&'static str],
    /// `I_r1, I_r2, I_f1, I_f2, L1, L2`.
    decision: [&'static str; 6],
    lambda: [&'static str; 2],
    profile: u8,
    tech: Option<Tech>,
}

macro_rules! group {
    ($id:expr, [$($c:expr),*], [$($d:expr),*], [$l1:expr, $l2:expr], $profile:expr, $tech:expr) => {
        RawGroup {
            id: $id,
            conditions: &[$($c),*],
            decision: [$($d),*],
            lambda: [$l1, $l2],
            profile: $profile,
            tech: $tech,
        }
    };
}

const R: Option<Tech> = Some(Tech::Renewable);
const F: Option<Tech> = Some(Tech::Fossil);

const CLUSTERS: [&[&str]; 6] = [
    &["D1<D2", "D1<Mr"],
    &["D1<D2", "Mr<D1", "D1<Mr+Mf"],
    &["D1<D2", "Mr+Mf<D1"],
    &["D2<D1", "D2<Mr"],
    &["D2<D1", "Mr<D2", "D2<Mr+Mf"],
    &["D2<D1", "Mr+Mf<D2"],
];

#[rustfmt::skip]
static RAW: [RawGroup; 41] = [
    group!(1, ["CL<CIr/2+CPr"], ["0", "0", "0", "0", "D1", "D2"], ["CL", "CL"], 1, None),
    group!(2, ["CIr/2+CPr<CL", "CL<CIr+CPr"], ["D1", "0", "0", "0", "0", "D2-D1"], ["CIr+2*CPr-CL", "CL"], 2, R),
    group!(3, ["CIr+CPr<CL", "D2<D1+Mr"], ["D1", "D2-D1", "0", "0", "0", "0"], ["CPr", "CIr+CPr"], 3, R),
    group!(4, ["CIr+CPr<CL", "D1+Mr<D2", "D2<2*Mr"], ["D2-Mr", "Mr", "0", "0", "0", "0"], ["CPr", "CIr+CPr"], 3, R),
    group!(5, ["CIr+CPr<CL", "CL<CIf+CPf", "2*Mr<D2"], ["Mr", "Mr", "0", "0", "0", "D2-2*Mr"], ["CPr", "CL"], 4, R),
    group!(6, ["CIf+CPf<CL", "2*Mr<D2", "D2<2*Mr+Mf"], ["Mr", "Mr", "0", "D2-2*Mr", "0", "0"], ["CPr", "CIf+CPf"], 6, None),
    group!(7, ["CIf+CPf<CL", "2*Mr+Mf<D2", "D2<2*Mr+2*Mf"], ["Mr", "Mr", "D2-2*Mr-Mf", "Mf", "0", "0"], ["CPr", "CIf+CPf"], 6, None),
    group!(8, ["CIf+CPf<CL", "2*Mr+2*Mf<D2"], ["Mr", "Mr", "Mf", "Mf", "0", "D2-2*Mr-2*Mf"], ["CPr", "CL"], 4, R),
    group!(9, ["CL<CIr/2+CPr"], ["0", "0", "0", "0", "D1", "D2"], ["CL", "CL"], 1, None),
    group!(10, ["CIr/2+CPr<CL", "CL<CIf/2+CPf"], ["Mr", "0", "0", "0", "D1-Mr", "D2-Mr"], ["CL", "CL"], 1, None),
    group!(11, ["CIf/2+CPf<CL", "CL<CIr+CPr"], ["Mr", "0", "D1-Mr", "0", "0", "D2-D1"], ["CIf+2*CPf-CL", "CL"], 2, F),
    group!(12, ["CIr+CPr<CL", "D2<D1+Mr"], ["Mr", "D2-D1", "D1-Mr", "0", "0", "0"], ["CIf+2*CPf-(CIr+CPr)", "CIr+CPr"], 7, None),
    group!(13, ["CIr+CPr<CL", "CL<CIf+CPf", "D1+Mr<D2"], ["Mr", "Mr", "D1-Mr", "0", "0", "D2-D1-Mr"], ["CIf+2*CPf-CL", "CL"], 2, F),
    group!(14, ["CIf+CPf<CL", "D1+Mr<D2", "D2<D1+Mr+Mf"], ["Mr", "Mr", "D1-Mr", "D2-D1-Mr", "0", "0"], ["CPf", "CIf+CPf"], 3, F),
    group!(15, ["CIf+CPf<CL", "D1+Mr+Mf<D2", "D2<2*Mr+2*Mf"], ["Mr", "Mr", "D2-2*Mr-Mf", "Mf", "0", "0"], ["CPf", "CIf+CPf"], 3, F),
    group!(16, ["CIf+CPf<CL", "2*Mr+2*Mf<D2"], ["Mr", "Mr", "Mf", "Mf", "0", "D2-2*Mr-2*Mf"], ["CPf", "CL"], 4, F),
    group!(17, ["CL<CIr/2+CPr"], ["0", "0", "0", "0", "D1", "D2"], ["CL", "CL"], 1, None),
    group!(18, ["CIr/2+CPr<CL", "CL<CIf/2+CPf"], ["Mr", "0", "0", "0", "D1-Mr", "D2-Mr"], ["CL", "CL"], 1, None),
    group!(19, ["CIf/2+CPf<CL", "CL<CIr+CPr"], ["Mr", "0", "Mf", "0", "D1-Mr-Mf", "D2-Mr-Mf"], ["CL", "CL"], 1, None),
    group!(20, ["CIr+CPr<CL", "D2<2*Mr+Mf"], ["Mr", "D2-Mr-Mf", "Mf", "0", "D1-Mr-Mf", "0"], ["CL", "CIr+CPr"], 5, R),
    group!(21, ["CIr+CPr<CL", "CL<CIf+CPf", "2*Mr+Mf<D2"], ["Mr", "Mr", "Mf", "0", "D1-Mr-Mf", "D2-2*Mr-Mf"], ["CL", "CL"], 1, None),
    group!(22, ["CIf+CPf<CL", "2*Mr+Mf<D2", "D2<2*Mr+2*Mf"], ["Mr", "Mr", "Mf", "D2-2*Mr-Mf", "D1-Mr-Mf", "0"], ["CL", "CIf+CPf"], 5, F),
    group!(23, ["CIf+CPf<CL", "2*Mr+2*Mf<D2"], ["Mr", "Mr", "Mf", "Mf", "D1-Mr-Mf", "D2-2*Mr-2*Mf"], ["CL", "CL"], 1, None),
    group!(24, ["CL<CIr/2+CPr"], ["0", "0", "0", "0", "D1", "D2"], ["CL", "CL"], 1, None),
    group!(25, ["CIr/2+CPr<CL", "CL<CIr+CPr"], ["D2", "0", "0", "0", "D1-D2", "0"], ["CL", "CIr+2*CPr-CL"], 2, R),
    group!(26, ["CIr+CPr<CL", "D1<Mr"], ["D1", "0", "0", "0", "0", "0"], ["CIr+CPr", "CPr"], 3, R),
    group!(27, ["CIr+CPr<CL", "CL<CIf+CPf", "Mr<D1"], ["Mr", "0", "0", "0", "D1-Mr", "0"], ["CL", "CPr"], 4, R),
    group!(28, ["CIf+CPf<CL", "Mr<D1", "D1<Mr+Mf"], ["Mr", "0", "D1-Mr", "0", "0", "0"], ["CIf+CPf", "CPr"], 6, None),
    group!(29, ["CIf+CPf<CL", "Mr+Mf<D1"], ["Mr", "0", "Mf", "0", "D1-Mr-Mf", "0"], ["CL", "CPr"], 4, R),
    group!(30, ["CL<CIr/2+CPr"], ["0", "0", "0", "0", "D1", "D2"], ["CL", "CL"], 1, None),
    group!(31, ["CIr/2+CPr<CL", "CL<CIf/2+CPf"], ["Mr", "0", "0", "0", "D1-Mr", "D2-Mr"], ["CL", "CL"], 1, None),
    group!(32, ["CIf/2+CPf<CL", "CL<CIf+CPf"], ["Mr", "0", "D2-Mr", "0", "D1-D2", "0"], ["CL", "CIf+2*CPf-CL"], 2, F),
    group!(33, ["CIf+CPf<CL", "D1<Mr+Mf"], ["Mr", "0", "D1-Mr", "0", "0", "0"], ["CIf+CPf", "CPf"], 3, F),
    group!(34, ["CIf+CPf<CL", "Mr+Mf<D1"], ["Mr", "0", "Mf", "0", "D1-Mr-Mf", "0"], ["CL", "CPf"], 4, F),
    group!(35, ["CL<CIr/2+CPr"], ["0", "0", "0", "0", "D1", "D2"], ["CL", "CL"], 1, None),
    group!(36, ["CIr/2+CPr<CL", "CL<CIf/2+CPf"], ["Mr", "0", "0", "0", "D1-Mr", "D2-Mr"], ["CL", "CL"], 1, None),
    group!(37, ["CIf/2+CPf<CL", "CL<CIr+CPr"], ["Mr", "0", "Mf", "0", "D1-Mr-Mf", "D2-Mr-Mf"], ["CL", "CL"], 1, None),
    group!(38, ["CIr+CPr<CL", "D2<2*Mr+Mf"], ["Mr", "D2-Mr-Mf", "Mf", "0", "D1-Mr-Mf", "0"], ["CL", "CIr+CPr"], 5, R),
    group!(39, ["CIr+CPr<CL", "CL<CIf+CPf", "2*Mr+Mf<D2"], ["Mr", "Mr", "Mf", "0", "D1-Mr-Mf", "D2-2*Mr-Mf"], ["CL", "CL"], 1, None),
    group!(40, ["CIf+CPf<CL", "2*Mr+Mf<D2", "D2<2*Mr+2*Mf"], ["Mr", "Mr", "Mf", "D2-2*Mr-Mf", "D1-Mr-Mf", "0"], ["CL", "CIf+CPf"], 5, F),
    group!(41, ["CIf+CPf<CL", "2*Mr+2*Mf<D2"], ["Mr", "Mr", "Mf", "Mf", "D1-Mr-Mf", "D2-2*Mr-2*Mf"], ["CL", "CL"], 1, None),
];

struct Group {
    raw: &'static RawGroup,
    cluster: u8,
    conditions: Vec<Condition>,
    decision: Vec<Expr>,
    lambda: Vec<Expr>,
}

fn parse_expr(text: &'static str) -> Expr {
    Parser::parse(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

static CLUSTER_CONDITIONS: LazyLock<Vec<Vec<Condition>>> = LazyLock::new(|| {
    CLUSTERS
        .iter()
        .map(|c| c.iter().map(|t| Condition::parse(t)).collect())
        .collect()
});

static TABLE: LazyLock<Vec<Group>> = LazyLock::new(|| {
    RAW.iter()
        .map(|raw| Group {
            raw,
            cluster: cluster_of_group(raw.id),
            conditions: raw.conditions.iter().map(|t| Condition::parse(t)).collect(),
            decision: raw.decision.iter().map(|t| parse_expr(t)).collect(),
            lambda: raw.lambda.iter().map(|t| parse_expr(t)).collect(),
        })
        .collect()
});

/// Cluster (1..=6) containing group `id` (1..=41).
pub fn cluster_of_group(id: u8) -> u8 {
    match id {
        1..=8 => 1,
        9..=16 => 2,
        17..=23 => 3,
        24..=29 => 4,
        30..=34 => 5,
        35..=41 => 6,
        _ => panic!("group id {id} out of range"),
    }
}

fn group(id: u8) -> &'static Group {
    &TABLE[usize::from(id) - 1]
}

/// Profile id and, where the profile depends on one, its technology.
pub fn group_profile(id: u8) -> (u8, Option<Tech>) {
    let g = &RAW[usize::from(id) - 1];
    (g.profile, g.tech)
}

/// All inequalities (cluster then group) defining group `id`, as text.
pub fn group_conditions(id: u8) -> Vec<&'static str> {
    let g = group(id);
    let mut v: Vec<&'static str> = CLUSTERS[usize::from(g.cluster) - 1].to_vec();
    v.extend(g.raw.conditions.iter().copied());
    v
}

fn all_conditions(id: u8) -> impl Iterator<Item = &'static Condition> {
    let g = group(id);
    CLUSTER_CONDITIONS[usize::from(g.cluster) - 1]
        .iter()
        .chain(g.conditions.iter())
}

/// Smallest relative margin `(rhs - lhs) / scale` over the defining
/// inequalities of group `id`, as `f64`. Positive means strictly inside.
pub fn group_margin<T: Scalar>(params: &SystemParams<T>, id: u8) -> f64 {
    all_conditions(id)
        .map(|c| {
            let (m, s) = c.margin(params);
            m.to_f64_lossy() / s.to_f64_lossy()
        })
        .fold(f64::INFINITY, f64::min)
}

/// True when every defining inequality of group `id` holds strictly.
pub fn conditions_hold<T: Scalar>(params: &SystemParams<T>, id: u8) -> bool {
    all_conditions(id).all(|c| c.margin(params).0 > T::zero())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GenOption {
    SharedRenewable,
    NonSharedRenewable,
    SharedFossil,
    NonSharedFossil,
}

impl GenOption {
    pub const ALL: [GenOption; 4] = [
        GenOption::SharedRenewable,
        GenOption::NonSharedRenewable,
        GenOption::SharedFossil,
        GenOption::NonSharedFossil,
    ];

    pub fn label(self) -> &'static str {
        match self {
            GenOption::SharedRenewable => "SR",
            GenOption::NonSharedRenewable => "R",
            GenOption::SharedFossil => "SF",
            GenOption::NonSharedFossil => "F",
        }
    }

    pub fn tech(self) -> Tech {
        match self {
            GenOption::SharedRenewable | GenOption::NonSharedRenewable => Tech::Renewable,
            _ => Tech::Fossil,
        }
    }

    pub fn is_shared(self) -> bool {
        matches!(self, GenOption::SharedRenewable | GenOption::SharedFossil)
    }

    /// Average cost per unit of energy served.
    pub fn average_cost<T: Scalar>(self, params: &SystemParams<T>) -> T {
        let g = params.tech(self.tech());
        if self.is_shared() {
            g.shared_cost()
        } else {
            g.non_shared_cost()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AffordabilityLadder {
    pub shared_renewable: bool,
    pub non_shared_renewable: bool,
    pub shared_fossil: bool,
    pub non_shared_fossil: bool,
}

impl AffordabilityLadder {
    pub fn allows(&self, option: GenOption) -> bool {
        match option {
            GenOption::SharedRenewable => self.shared_renewable,
            GenOption::NonSharedRenewable => self.non_shared_renewable,
            GenOption::SharedFossil => self.shared_fossil,
            GenOption::NonSharedFossil => self.non_shared_fossil,
        }
    }

    /// Number of affordable options.
    pub fn level(&self) -> usize {
        GenOption::ALL.iter().filter(|o| self.allows(**o)).count()
    }
}

pub fn affordability<T: Scalar>(params: &SystemParams<T>) -> Result<AffordabilityLadder, ClassifyError> {
    params.validate()?;
    let cl = &params.loadshed_cost;
    let ok = |o: GenOption| o.average_cost(params) < *cl;
    Ok(AffordabilityLadder {
        shared_renewable: ok(GenOption::SharedRenewable),
        non_shared_renewable: ok(GenOption::NonSharedRenewable),
        shared_fossil: ok(GenOption::SharedFossil),
        non_shared_fossil: ok(GenOption::NonSharedFossil),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InstanceGroup {
    pub id: u8,
    pub cluster: u8,
    /// Peak period, 1 or 2.
    pub peak: usize,
    pub boundary: bool,
}

impl InstanceGroup {
    pub fn off_peak(&self) -> usize {
        3 - self.peak
    }
}

pub fn classify<T: Scalar>(params: &SystemParams<T>) -> Result<InstanceGroup, ClassifyError> {
    classify_with(params, 1e-9)
}

/// Classifies with inequalities taken weakly; the lowest matching group
/// wins, and `boundary` is set when any defining inequality has a relative
/// margin below `tol_bound` or a demand is zero.
pub fn classify_with<T: Scalar>(
    params: &SystemParams<T>,
    tol_bound: f64,
) -> Result<InstanceGroup, ClassifyError> {
    params.validate()?;
    let b = params.fossil.shared_cost();
    let c = params.renewable.non_shared_cost();
    let scale = T::one() + T::max_of(b.abs(), c.abs());
    if b.clone() - c.clone() > T::tol(tol_bound) * scale {
        return Err(ClassifyError::OutsideAssumptions(format!(
            "CI_f/2+CP_f = {b} exceeds CI_r+CP_r = {c}"
        )));
    }
    let tol = T::tol(tol_bound);
    let weak = |c: &Condition| {
        let (m, s) = c.margin(params);
        m >= -(tol.clone() * s)
    };
    let cluster = CLUSTER_CONDITIONS
        .iter()
        .position(|cs| cs.iter().all(weak))
        .ok_or(ClassifyError::Unmatched)? as u8
        + 1;
    let g = TABLE
        .iter()
        .filter(|g| g.cluster == cluster)
        .find(|g| g.conditions.iter().all(weak))
        .ok_or(ClassifyError::Unmatched)?;
    let id = g.raw.id;
    let boundary = all_conditions(id).any(|c| {
        let (m, s) = c.margin(params);
        m.abs() <= tol.clone() * s
    }) || params.demand.iter().any(|d| d.is_zero());
    Ok(InstanceGroup {
        id,
        cluster,
        peak: if cluster <= 3 { 2 } else { 1 },
        boundary,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyticResult<T> {
    pub group: u8,
    pub decision: PrimalDecision<T>,
    pub lrmc: [T; 2],
    pub profile: u8,
    /// Technology the profile formula refers to, where it has one.
    pub profile_tech: Option<Tech>,
    /// Options generating in each period.
    pub used: [Vec<GenOption>; 2],
    /// Most expensive technology generating in each period.
    pub marginal: [Option<Tech>; 2],
}

/// Options generating in each period of `decision`. Output produced in both
/// periods counts as shared use; the excess of a period is non-shared.
pub fn used_options<T: Scalar>(decision: &PrimalDecision<T>, tol: f64) -> [Vec<GenOption>; 2] {
    let mut used = [Vec::new(), Vec::new()];
    for g in Tech::ALL {
        let (p1, p2) = (decision.p(g, 0).clone(), decision.p(g, 1).clone());
        let shared = T::min_of(p1.clone(), p2.clone());
        let eps = T::tol(tol) * (T::one() + T::max_of(p1.abs(), p2.abs()));
        let (s_opt, n_opt) = match g {
            Tech::Renewable => (GenOption::SharedRenewable, GenOption::NonSharedRenewable),
            Tech::Fossil => (GenOption::SharedFossil, GenOption::NonSharedFossil),
        };
        for t in 0..2 {
            if shared > eps {
                used[t].push(s_opt);
            }
            if decision.p(g, t).clone() - shared.clone() > eps {
                used[t].push(n_opt);
            }
        }
    }
    used
}

/// Most expensive technology with output in each period.
pub fn marginal_techs<T: Scalar>(decision: &PrimalDecision<T>, tol: f64) -> [Option<Tech>; 2] {
    std::array::from_fn(|t| {
        [Tech::Fossil, Tech::Renewable]
            .into_iter()
            .find(|g| *decision.p(*g, t) > T::tol(tol) * (T::one() + decision.p(*g, t).abs()))
    })
}

/// Closed-form decision and prices of `group` evaluated on `params`.
///
/// Generation is reconstructed by filling the served demand of each period
/// from renewable capacity first, then fossil.
pub fn analytic_solution<T: Scalar>(
    params: &SystemParams<T>,
    group_id: &InstanceGroup,
) -> Result<AnalyticResult<T>, ClassifyError> {
    params.validate()?;
    let id = group_id.id;
    if !(1..=41).contains(&id) {
        return Err(ClassifyError::GroupMismatch { group: id });
    }
    let tol = T::tol(1e-9);
    let fits = all_conditions(id).all(|c| {
        let (m, s) = c.margin(params);
        m >= -(tol.clone() * s)
    });
    if !fits {
        return Err(ClassifyError::GroupMismatch { group: id });
    }
    let g = group(id);
    let v: Vec<T> = g.decision.iter().map(|e| e.eval(params)).collect();
    let mut decision = PrimalDecision::zero();
    decision.invest = [[v[0].clone(), v[1].clone()], [v[2].clone(), v[3].clone()]];
    decision.loadshed = [v[4].clone(), v[5].clone()];
    for t in 0..2 {
        let served = params.demand[t].clone() - decision.loadshed[t].clone();
        let pr = T::min_of(served.clone(), decision.capacity(Tech::Renewable, t));
        decision.production[1][t] = served - pr.clone();
        decision.production[0][t] = pr;
    }
    let lrmc = [g.lambda[0].eval(params), g.lambda[1].eval(params)];
    Ok(AnalyticResult {
        group: id,
        used: used_options(&decision, 1e-9),
        marginal: marginal_techs(&decision, 1e-9),
        decision,
        lrmc,
        profile: g.raw.profile,
        profile_tech: g.raw.tech,
    })
}

/// The embedded group table as CSV, one row per group.
pub fn table_csv() -> String {
    let mut out = String::from(
        "group,cluster,peak,conditions,I_r1,I_r2,I_f1,I_f2,L1,L2,lambda1,lambda2,profile,tech\n",
    );
    for g in TABLE.iter() {
        let id = g.raw.id;
        let tech = g.raw.tech.map_or(String::new(), |t| t.symbol().to_string());
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            id,
            g.cluster,
            if g.cluster <= 3 { 2 } else { 1 },
            group_conditions(id).join(" & "),
            g.raw.decision.join(","),
            g.raw.lambda.join(","),
            g.raw.profile,
            tech,
        );
    }
    out
}
