//! Case table: convolution shape, factor measures, stationary measure and
//! eigenvalue recipes for every supported chain.

use std::fmt;
use std::str::FromStr;

use crate::chains::convolution::{ConvolutionType, Factor};
use crate::chains::params::Params;
use crate::error::{Error, Result};
use crate::families::{Family, FamilyId};
use crate::numerics::pochhammer::{pochhammer, q_pochhammer};
use crate::numerics::{rat, Rational, Scalar, SeriesSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseId {
    KI,
    KII,
    KIII,
    KIV,
    KV,
    HI,
    HII,
    HIII,
    HIV,
    QHI,
    QHIII,
    QHIV,
    CConv1,
    CConv3,
    CIV,
    CV,
    MI,
    MIII,
    MIV,
    QMI,
    QMIII,
    QMIV,
}

/// Allowed range of a case parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamDomain {
    /// open interval (0, 1)
    Unit,
    /// (0, ∞)
    Positive,
}

/// Static description of a case.
#[derive(Clone, Copy, Debug)]
pub struct CaseInfo {
    pub id: CaseId,
    pub token: &'static str,
    pub conv: ConvolutionType,
    pub semi_infinite: bool,
    pub params: &'static [(&'static str, ParamDomain)],
    pub stationary: FamilyId,
}

use ParamDomain::{Positive as P, Unit as U};

const AB_UNIT: &[(&str, ParamDomain)] = &[("a", U), ("b", U)];
const ABC_UNIT: &[(&str, ParamDomain)] = &[("a", U), ("b", U), ("c", U)];
const ABC_POS: &[(&str, ParamDomain)] = &[("a", P), ("b", P), ("c", P)];
const FOUR_POS: &[(&str, ParamDomain)] = &[("a1", P), ("b1", P), ("a2", P), ("b2", P)];
const ABCQ_UNIT: &[(&str, ParamDomain)] = &[("a", U), ("b", U), ("c", U), ("q", U)];
const FOURQ_UNIT: &[(&str, ParamDomain)] = &[("a1", U), ("b1", U), ("a2", U), ("b2", U), ("q", U)];

const CASES: &[CaseInfo] = &[
    CaseInfo { id: CaseId::KI, token: "K-i", conv: ConvolutionType::I, semi_infinite: false, params: AB_UNIT, stationary: FamilyId::Krawtchouk },
    CaseInfo { id: CaseId::KII, token: "K-ii", conv: ConvolutionType::II, semi_infinite: false, params: AB_UNIT, stationary: FamilyId::Krawtchouk },
    CaseInfo { id: CaseId::KIII, token: "K-iii", conv: ConvolutionType::III, semi_infinite: false, params: AB_UNIT, stationary: FamilyId::Krawtchouk },
    CaseInfo { id: CaseId::KIV, token: "K-iv", conv: ConvolutionType::IV, semi_infinite: false, params: ABC_UNIT, stationary: FamilyId::Krawtchouk },
    CaseInfo { id: CaseId::KV, token: "K-v", conv: ConvolutionType::V, semi_infinite: false, params: ABC_UNIT, stationary: FamilyId::Krawtchouk },
    CaseInfo { id: CaseId::HI, token: "H-i", conv: ConvolutionType::I, semi_infinite: false, params: ABC_POS, stationary: FamilyId::Hahn },
    CaseInfo { id: CaseId::HII, token: "H-ii", conv: ConvolutionType::II, semi_infinite: false, params: ABC_POS, stationary: FamilyId::Hahn },
    CaseInfo { id: CaseId::HIII, token: "H-iii", conv: ConvolutionType::III, semi_infinite: false, params: ABC_POS, stationary: FamilyId::Hahn },
    CaseInfo { id: CaseId::HIV, token: "H-iv", conv: ConvolutionType::IV, semi_infinite: false, params: FOUR_POS, stationary: FamilyId::Hahn },
    CaseInfo { id: CaseId::QHI, token: "qH-i", conv: ConvolutionType::I, semi_infinite: false, params: ABCQ_UNIT, stationary: FamilyId::QHahn },
    CaseInfo { id: CaseId::QHIII, token: "qH-iii", conv: ConvolutionType::III, semi_infinite: false, params: ABCQ_UNIT, stationary: FamilyId::QHahn },
    CaseInfo { id: CaseId::QHIV, token: "qH-iv", conv: ConvolutionType::IV, semi_infinite: false, params: FOURQ_UNIT, stationary: FamilyId::QHahn },
    CaseInfo { id: CaseId::CConv1, token: "C-conv1", conv: ConvolutionType::I, semi_infinite: true, params: &[("a", U), ("b", P)], stationary: FamilyId::Charlier },
    CaseInfo { id: CaseId::CConv3, token: "C-conv3", conv: ConvolutionType::III, semi_infinite: true, params: &[("a", P), ("b", U)], stationary: FamilyId::Charlier },
    CaseInfo { id: CaseId::CIV, token: "C-iv", conv: ConvolutionType::IV, semi_infinite: true, params: &[("a", U), ("b", P), ("c", U)], stationary: FamilyId::Charlier },
    CaseInfo { id: CaseId::CV, token: "C-v", conv: ConvolutionType::V, semi_infinite: true, params: &[("a", U), ("b", P), ("c", U)], stationary: FamilyId::Charlier },
    CaseInfo { id: CaseId::MI, token: "M-i", conv: ConvolutionType::I, semi_infinite: true, params: &[("a", P), ("b", P), ("c", U)], stationary: FamilyId::Meixner },
    CaseInfo { id: CaseId::MIII, token: "M-iii", conv: ConvolutionType::III, semi_infinite: true, params: &[("a", P), ("b", U), ("c", P)], stationary: FamilyId::Meixner },
    CaseInfo { id: CaseId::MIV, token: "M-iv", conv: ConvolutionType::IV, semi_infinite: true, params: &[("a1", P), ("b1", P), ("a2", P), ("b2", U)], stationary: FamilyId::Meixner },
    CaseInfo { id: CaseId::QMI, token: "qM-i", conv: ConvolutionType::I, semi_infinite: true, params: &[("a", U), ("b", U), ("c", P), ("q", U)], stationary: FamilyId::QMeixner },
    CaseInfo { id: CaseId::QMIII, token: "qM-iii", conv: ConvolutionType::III, semi_infinite: true, params: &[("a", U), ("b", P), ("c", U), ("q", U)], stationary: FamilyId::QMeixner },
    CaseInfo { id: CaseId::QMIV, token: "qM-iv", conv: ConvolutionType::IV, semi_infinite: true, params: &[("a1", U), ("b1", U), ("a2", U), ("b2", P), ("q", U)], stationary: FamilyId::QMeixner },
];

/// Tokens that name cases known to be unusable.
const REJECTED: &[(&str, &str)] = &[(
    "qH-ii",
    "the type (ii) q-Hahn convolution has no matching q-Hahn stationary measure",
)];

impl CaseId {
    pub fn all() -> impl Iterator<Item = CaseId> {
        CASES.iter().map(|c| c.id)
    }

    pub fn finite() -> impl Iterator<Item = CaseId> {
        CASES.iter().filter(|c| !c.semi_infinite).map(|c| c.id)
    }

    pub fn semi_infinite() -> impl Iterator<Item = CaseId> {
        CASES.iter().filter(|c| c.semi_infinite).map(|c| c.id)
    }

    pub fn info(self) -> &'static CaseInfo {
        CASES.iter().find(|c| c.id == self).expect("every case is registered")
    }

    pub fn token(self) -> &'static str {
        self.info().token
    }

    pub fn param_names(self) -> Vec<&'static str> {
        self.info().params.iter().map(|(n, _)| *n).collect()
    }

    pub fn is_semi_infinite(self) -> bool {
        self.info().semi_infinite
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some((_, why)) = REJECTED.iter().find(|(t, _)| *t == s) {
            return Err(Error::Case(format!("{s} is rejected: {why}")));
        }
        CASES
            .iter()
            .find(|c| c.token == s)
            .map(|c| c.id)
            .ok_or_else(|| Error::Case(format!("unknown case {s:?}")))
    }
}

/// A parameter that may depend on the eigenvalue index `n`.
#[derive(Clone, Debug, PartialEq)]
pub enum NParam<S> {
    Const(S),
    /// n + s
    PlusN(S),
    /// s q^n
    TimesQn(S),
}

impl<S: Scalar> NParam<S> {
    fn at(&self, n: usize, q: Option<&S>) -> S {
        match self {
            NParam::Const(s) => s.clone(),
            NParam::PlusN(s) => S::from_usize(n) + s.clone(),
            NParam::TimesQn(s) => s.clone() * q.expect("q-series parameter").powi(n as i64),
        }
    }
}

/// A terminating series in `n` for κ(n).
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesTemplate<S> {
    pub q: Option<S>,
    pub upper: Vec<NParam<S>>,
    pub lower: Vec<NParam<S>>,
    pub argument: NParam<S>,
}

impl<S: Scalar> SeriesTemplate<S> {
    pub fn at(&self, n: usize) -> SeriesSpec<S> {
        let q = self.q.as_ref();
        let upper = self.upper.iter().map(|p| p.at(n, q)).collect();
        let lower = self.lower.iter().map(|p| p.at(n, q)).collect();
        let arg = self.argument.at(n, q);
        match q {
            None => SeriesSpec::hyper(n, upper, lower, arg),
            Some(q) => SeriesSpec::qhyper(n, upper, lower, q.clone(), arg),
        }
    }
}

/// Product form of κ(n) when one is known.
#[derive(Clone, Debug, PartialEq)]
pub enum KappaProduct<S> {
    /// base^n
    Power(S),
    /// Π (num)_n / Π (den)_n
    Rising { num: Vec<S>, den: Vec<S> },
    /// scale^n Π (num;q)_n / Π (den;q)_n
    QRising { scale: S, num: Vec<S>, den: Vec<S>, q: S },
}

impl<S: Scalar> KappaProduct<S> {
    pub fn at(&self, n: usize) -> S {
        match self {
            KappaProduct::Power(b) => b.powi(n as i64),
            KappaProduct::Rising { num, den } => {
                let t = num.iter().fold(S::one(), |a, v| a * pochhammer(v, n));
                den.iter().fold(t, |a, v| a / pochhammer(v, n))
            }
            KappaProduct::QRising { scale, num, den, q } => {
                let t = num.iter().fold(scale.powi(n as i64), |a, v| a * q_pochhammer(v, q, n));
                den.iter().fold(t, |a, v| a / q_pochhammer(v, q, n))
            }
        }
    }
}

/// Everything a builder needs for one case at one parameter point.
#[derive(Clone, Debug)]
pub struct Wiring<S> {
    pub case: CaseId,
    pub conv: ConvolutionType,
    /// λ1, λ2 and, for types IV and V, λ3
    pub factors: Vec<Factor<S>>,
    pub stationary: Family<S>,
    pub product: Option<KappaProduct<S>>,
    pub series: SeriesTemplate<S>,
}

fn validate_domains<S: Scalar>(case: CaseId, params: &Params<S>) -> Result<()> {
    for (name, dom) in case.info().params {
        let v = params.get(name)?;
        let ok = match dom {
            ParamDomain::Unit => v > S::zero() && v < S::one(),
            ParamDomain::Positive => v > S::zero(),
        };
        if !ok {
            let range = match dom {
                ParamDomain::Unit => "(0, 1)",
                ParamDomain::Positive => "(0, inf)",
            };
            return Err(Error::Domain(format!("{case}: {name} = {v} outside {range}")));
        }
    }
    Ok(())
}

fn power_series<S: Scalar>(base: S) -> SeriesTemplate<S> {
    SeriesTemplate { q: None, upper: vec![], lower: vec![], argument: NParam::Const(S::one() - base) }
}

/// Resolves a case at a parameter point.
pub fn wiring<S: Scalar>(case: CaseId, params: &Params<S>) -> Result<Wiring<S>> {
    let params = params.conform(&case.param_names())?;
    validate_domains(case, &params)?;
    let g = |n: &str| params.get(n).expect("conformed");
    let one = S::one();
    let conv = case.info().conv;
    use NParam::{Const as C, PlusN, TimesQn};
    let kr = |p: S| Factor::Measure(Family::Krawtchouk { p });
    let hahn = |a: S, b: S| Factor::Measure(Family::Hahn { a, b });
    let (factors, stationary, product, series) = match case {
        CaseId::KI | CaseId::KII | CaseId::KIII => {
            let (a, b) = (g("a"), g("b"));
            let (p, base) = match case {
                CaseId::KI => (
                    b.clone() / (one.clone() - a.clone() + a.clone() * b.clone()),
                    a.clone() * (one.clone() - b.clone()),
                ),
                CaseId::KII => (b.clone() / (one.clone() - a.clone() + b.clone()), a.clone() - b.clone()),
                _ => (
                    a.clone() * b.clone() / (one.clone() - b.clone() + a.clone() * b.clone()),
                    (one.clone() - a.clone()) * b.clone(),
                ),
            };
            (
                vec![kr(a), kr(b)],
                Family::Krawtchouk { p },
                Some(KappaProduct::Power(base.clone())),
                power_series(base),
            )
        }
        CaseId::KIV | CaseId::KV => {
            let (a, b, c) = (g("a"), g("b"), g("c"));
            let bc = b.clone() * c.clone();
            let (p, base) = if case == CaseId::KIV {
                (
                    bc.clone() / (bc.clone() + (one.clone() - a.clone()) * (one.clone() - c.clone())),
                    a.clone() + c.clone() - a.clone() * c.clone() - bc,
                )
            } else {
                (bc.clone() / (one.clone() - a.clone() + bc.clone()), a.clone() - bc)
            };
            (
                vec![kr(a), kr(b), kr(c)],
                Family::Krawtchouk { p },
                Some(KappaProduct::Power(base.clone())),
                power_series(base),
            )
        }
        CaseId::HI | CaseId::HII | CaseId::HIII => {
            let (a, b, c) = (g("a"), g("b"), g("c"));
            let s = a.clone() + b.clone() + c.clone();
            match case {
                CaseId::HI => (
                    vec![hahn(a.clone(), b.clone()), hahn(b.clone(), c.clone())],
                    Family::Hahn { a: a.clone() + b.clone(), b: c.clone() },
                    Some(KappaProduct::Rising {
                        num: vec![a.clone(), c.clone()],
                        den: vec![a.clone() + b.clone(), b.clone() + c.clone()],
                    }),
                    SeriesTemplate {
                        q: None,
                        upper: vec![PlusN(s - one.clone()), C(b.clone())],
                        lower: vec![C(a.clone() + b.clone()), C(b.clone() + c.clone())],
                        argument: C(one),
                    },
                ),
                CaseId::HII => (
                    vec![hahn(a.clone(), b.clone()), hahn(b.clone(), c.clone())],
                    Family::Hahn { a: a.clone() + b.clone(), b: b.clone() + c.clone() },
                    None,
                    SeriesTemplate {
                        q: None,
                        upper: vec![PlusN(s + b.clone() - one.clone()), C(b.clone())],
                        lower: vec![C(a.clone() + b.clone()), C(b.clone() + c.clone())],
                        argument: C(one),
                    },
                ),
                _ => (
                    vec![hahn(a.clone(), b.clone()), hahn(c.clone(), a.clone())],
                    Family::Hahn { a: c.clone(), b: a.clone() + b.clone() },
                    Some(KappaProduct::Rising {
                        num: vec![b.clone(), c.clone()],
                        den: vec![a.clone() + b.clone(), a.clone() + c.clone()],
                    }),
                    SeriesTemplate {
                        q: None,
                        upper: vec![PlusN(s - one.clone()), C(a.clone())],
                        lower: vec![C(a.clone() + b.clone()), C(a.clone() + c.clone())],
                        argument: C(one),
                    },
                ),
            }
        }
        CaseId::HIV => {
            let (a1, b1, a2, b2) = (g("a1"), g("b1"), g("a2"), g("b2"));
            let s = a1.clone() + b1.clone() + a2.clone() + b2.clone();
            (
                vec![hahn(a1.clone(), b1.clone()), hahn(a2.clone(), b2.clone()), hahn(b1.clone(), a2.clone())],
                Family::Hahn { a: a1.clone() + b1.clone(), b: a2.clone() + b2.clone() },
                None,
                SeriesTemplate {
                    q: None,
                    upper: vec![PlusN(s - one.clone()), C(b1.clone()), C(a2.clone())],
                    lower: vec![C(a1 + b1.clone()), C(b1 + a2.clone()), C(a2 + b2)],
                    argument: C(one),
                },
            )
        }
        CaseId::QHI | CaseId::QHIII => {
            let (a, b, c, q) = (g("a"), g("b"), g("c"), g("q"));
            let qh = |a: S, b: S| Factor::Measure(Family::QHahn { a, b, q: q.clone() });
            let abc_n = a.clone() * b.clone() * c.clone() / q.clone();
            if case == CaseId::QHI {
                (
                    vec![qh(a.clone(), b.clone()), qh(b.clone(), c.clone())],
                    Family::QHahn { a: a.clone() * b.clone(), b: c.clone(), q: q.clone() },
                    Some(KappaProduct::QRising {
                        scale: b.clone(),
                        num: vec![a.clone(), c.clone()],
                        den: vec![a.clone() * b.clone(), b.clone() * c.clone()],
                        q: q.clone(),
                    }),
                    SeriesTemplate {
                        q: Some(q.clone()),
                        upper: vec![TimesQn(abc_n), C(b.clone())],
                        lower: vec![C(a.clone() * b.clone()), C(b.clone() * c.clone())],
                        argument: C(q.clone()),
                    },
                )
            } else {
                (
                    vec![qh(a.clone(), b.clone()), qh(c.clone(), a.clone())],
                    Family::QHahn { a: c.clone(), b: a.clone() * b.clone(), q: q.clone() },
                    Some(KappaProduct::QRising {
                        scale: a.clone(),
                        num: vec![b.clone(), c.clone()],
                        den: vec![a.clone() * b.clone(), a.clone() * c.clone()],
                        q: q.clone(),
                    }),
                    SeriesTemplate {
                        q: Some(q.clone()),
                        upper: vec![TimesQn(abc_n), C(a.clone())],
                        lower: vec![C(a.clone() * b.clone()), C(a.clone() * c.clone())],
                        argument: C(q.clone()),
                    },
                )
            }
        }
        CaseId::QHIV => {
            let (a1, b1, a2, b2, q) = (g("a1"), g("b1"), g("a2"), g("b2"), g("q"));
            let qh = |a: S, b: S| Factor::Measure(Family::QHahn { a, b, q: q.clone() });
            let prod = a1.clone() * b1.clone() * a2.clone() * b2.clone();
            (
                vec![qh(a1.clone(), b1.clone()), qh(a2.clone(), b2.clone()), qh(b1.clone(), a2.clone())],
                Family::QHahn { a: a1.clone() * b1.clone(), b: a2.clone() * b2.clone(), q: q.clone() },
                None,
                SeriesTemplate {
                    q: Some(q.clone()),
                    upper: vec![TimesQn(prod / q.clone()), C(b1.clone()), C(a2.clone())],
                    lower: vec![C(a1 * b1.clone()), C(b1 * a2.clone()), C(a2 * b2)],
                    argument: C(q),
                },
            )
        }
        CaseId::CConv1 | CaseId::CConv3 => {
            let (a, b) = (g("a"), g("b"));
            let ch = |a: S| Factor::Measure(Family::Charlier { a });
            if case == CaseId::CConv1 {
                (
                    vec![kr(a.clone()), ch(b.clone())],
                    Family::Charlier { a: b / (one.clone() - a.clone()) },
                    Some(KappaProduct::Power(a.clone())),
                    power_series(a),
                )
            } else {
                (
                    vec![ch(a.clone()), kr(b.clone())],
                    Family::Charlier { a: a * b.clone() / (one.clone() - b.clone()) },
                    Some(KappaProduct::Power(b.clone())),
                    power_series(b),
                )
            }
        }
        CaseId::CIV | CaseId::CV => {
            let (a, b, c) = (g("a"), g("b"), g("c"));
            let ch = Factor::Measure(Family::Charlier { a: b.clone() });
            let factors = vec![kr(a.clone()), ch, kr(c.clone())];
            if case == CaseId::CIV {
                let base = a.clone() + c.clone() - a.clone() * c.clone();
                (
                    factors,
                    Family::Charlier {
                        a: b * c.clone() / ((one.clone() - a) * (one.clone() - c)),
                    },
                    Some(KappaProduct::Power(base.clone())),
                    power_series(base),
                )
            } else {
                (
                    factors,
                    Family::Charlier { a: b * c / (one.clone() - a.clone()) },
                    Some(KappaProduct::Power(a.clone())),
                    power_series(a),
                )
            }
        }
        CaseId::MI | CaseId::MIII => {
            let (a, b, c) = (g("a"), g("b"), g("c"));
            let mx = |a: S, b: S| Factor::Measure(Family::Meixner { a, b });
            if case == CaseId::MI {
                (
                    vec![hahn(a.clone(), b.clone()), mx(b.clone(), c.clone())],
                    Family::Meixner { a: a.clone() + b.clone(), b: c },
                    Some(KappaProduct::Rising { num: vec![a.clone()], den: vec![a.clone() + b.clone()] }),
                    SeriesTemplate {
                        q: None,
                        upper: vec![C(b.clone())],
                        lower: vec![C(a + b)],
                        argument: C(one),
                    },
                )
            } else {
                (
                    vec![mx(a.clone(), b.clone()), hahn(c.clone(), a.clone())],
                    Family::Meixner { a: c.clone(), b },
                    Some(KappaProduct::Rising { num: vec![c.clone()], den: vec![a.clone() + c.clone()] }),
                    SeriesTemplate {
                        q: None,
                        upper: vec![C(a.clone())],
                        lower: vec![C(a + c)],
                        argument: C(one),
                    },
                )
            }
        }
        CaseId::MIV => {
            let (a1, b1, a2, b2) = (g("a1"), g("b1"), g("a2"), g("b2"));
            (
                vec![
                    hahn(a1.clone(), b1.clone()),
                    Factor::Measure(Family::Meixner { a: a2.clone(), b: b2.clone() }),
                    hahn(b1.clone(), a2.clone()),
                ],
                Family::Meixner { a: a1.clone() + b1.clone(), b: b2 },
                None,
                SeriesTemplate {
                    q: None,
                    upper: vec![C(b1.clone()), C(a2.clone())],
                    lower: vec![C(a1 + b1.clone()), C(b1 + a2)],
                    argument: C(one),
                },
            )
        }
        CaseId::QMI | CaseId::QMIII => {
            let (a, b, c, q) = (g("a"), g("b"), g("c"), g("q"));
            let qh = |a: S, b: S| Factor::Measure(Family::QHahn { a, b, q: q.clone() });
            let kernel = |beta: S, gamma: S| Factor::QMeixnerKernel { beta, gamma, q: q.clone() };
            if case == CaseId::QMI {
                let ab = a.clone() * b.clone();
                (
                    vec![qh(a.clone(), b.clone()), kernel(b.clone(), c.clone())],
                    Family::QMeixner { b: ab.clone() / q.clone(), c: c / ab.clone(), q: q.clone() },
                    Some(KappaProduct::QRising {
                        scale: one,
                        num: vec![a.clone()],
                        den: vec![ab.clone()],
                        q: q.clone(),
                    }),
                    SeriesTemplate {
                        q: Some(q),
                        upper: vec![C(b)],
                        lower: vec![C(ab)],
                        argument: TimesQn(a),
                    },
                )
            } else {
                let ac = a.clone() * c.clone();
                (
                    vec![kernel(a.clone(), b.clone()), qh(c.clone(), a.clone())],
                    Family::QMeixner { b: c.clone() / q.clone(), c: b / ac.clone(), q: q.clone() },
                    Some(KappaProduct::QRising {
                        scale: one,
                        num: vec![c.clone()],
                        den: vec![ac.clone()],
                        q: q.clone(),
                    }),
                    SeriesTemplate {
                        q: Some(q),
                        upper: vec![C(a)],
                        lower: vec![C(ac)],
                        argument: TimesQn(c),
                    },
                )
            }
        }
        CaseId::QMIV => {
            let (a1, b1, a2, b2, q) = (g("a1"), g("b1"), g("a2"), g("b2"), g("q"));
            let qh = |a: S, b: S| Factor::Measure(Family::QHahn { a, b, q: q.clone() });
            let a1b1 = a1.clone() * b1.clone();
            (
                vec![
                    qh(a1.clone(), b1.clone()),
                    Factor::QMeixnerKernel { beta: a2.clone(), gamma: b2.clone(), q: q.clone() },
                    qh(b1.clone(), a2.clone()),
                ],
                Family::QMeixner {
                    b: a1b1.clone() / q.clone(),
                    c: b2 / (a1b1.clone() * a2.clone()),
                    q: q.clone(),
                },
                None,
                SeriesTemplate {
                    q: Some(q),
                    upper: vec![C(b1.clone()), C(a2.clone())],
                    lower: vec![C(a1b1.clone()), C(b1 * a2)],
                    argument: TimesQn(a1b1),
                },
            )
        }
    };
    for f in &factors {
        f.validate()?;
    }
    stationary.validate()?;
    Ok(Wiring { case, conv, factors, stationary, product, series })
}

/// Deterministic sample of admissible parameter points for a case.
pub fn sample_points(case: CaseId, count: usize) -> Vec<Params<Rational>> {
    const UNIT: [(i64, i64); 11] =
        [(1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (2, 5), (3, 5), (1, 5), (4, 5), (2, 7), (5, 7)];
    const POS: [(i64, i64); 11] =
        [(1, 1), (1, 2), (2, 1), (3, 2), (1, 3), (5, 2), (3, 4), (3, 1), (2, 3), (7, 4), (5, 3)];
    const QS: [(i64, i64); 4] = [(1, 2), (1, 3), (2, 3), (3, 5)];
    let info = case.info();
    (0..count)
        .map(|i| {
            Params::new(info.params.iter().enumerate().map(|(j, (name, dom))| {
                let (n, d) = if *name == "q" {
                    QS[i % QS.len()]
                } else {
                    let k = (i * (2 * j + 1) + 3 * j) % UNIT.len();
                    match dom {
                        ParamDomain::Unit => UNIT[k],
                        ParamDomain::Positive => POS[k],
                    }
                };
                (*name, rat(n, d))
            }))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_round_trip() {
        for c in CaseId::all() {
            assert_eq!(c.token().parse::<CaseId>().unwrap(), c);
        }
        assert!(matches!("qH-ii".parse::<CaseId>(), Err(Error::Case(_))));
        assert!(matches!("X-1".parse::<CaseId>(), Err(Error::Case(_))));
    }

    #[test]
    fn samples_are_admissible() {
        for c in CaseId::all() {
            for p in sample_points(c, 6) {
                wiring(c, &p).unwrap_or_else(|e| panic!("{c} {p}: {e}"));
            }
        }
    }

    #[test]
    fn product_and_series_agree() {
        for c in CaseId::all() {
            for p in sample_points(c, 5) {
                let w = wiring(c, &p).unwrap();
                if let Some(prod) = &w.product {
                    for n in 0..8 {
                        assert_eq!(prod.at(n), w.series.at(n).evaluate().unwrap(), "{c} {p} n={n}");
                    }
                }
            }
        }
    }
}
