//! Mass-action kinetics in binary64: right-hand side, equilibrium residual,
//! closed-form equilibrium parametrizations of the three Wnt models, and
//! the ACR sampling scan.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::decomp::fid;
use crate::error::{Error, Result};
use crate::fixtures;
use crate::network::{Network, SpeciesId};

/// Positive rate constants keyed by reaction label (`k_i` pairs with `Ri`).
#[derive(Clone, Debug, PartialEq, Default)]
pub struct RateAssignment {
    k: BTreeMap<String, f64>,
}

impl RateAssignment {
    pub fn new(k: BTreeMap<String, f64>) -> Result<Self> {
        if let Some((label, _)) = k.iter().find(|(_, v)| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::NonPositive {
                what: format!("rate constant for {label}"),
            });
        }
        Ok(Self { k })
    }

    /// Log-uniform draw over `[1e-2, 1e2]` for every reaction of `net`.
    pub fn random(net: &Network, rng: &mut impl Rng) -> Self {
        let k = (0..net.num_reactions())
            .map(|j| (net.label(j), log_uniform(rng)))
            .collect();
        Self { k }
    }

    pub fn by_label(&self, label: &str) -> Option<f64> {
        self.k.get(label).copied()
    }

    /// `k_i`, the constant of reaction `Ri`.
    pub fn k(&self, i: u32) -> Result<f64> {
        self.by_label(&format!("R{i}")).ok_or(Error::MissingRate(i))
    }

    pub fn set(&mut self, label: impl Into<String>, value: f64) -> Result<()> {
        let label = label.into();
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::NonPositive {
                what: format!("rate constant for {label}"),
            });
        }
        self.k.insert(label, value);
        Ok(())
    }

    /// Constants in reaction order of `net`.
    pub fn for_network(&self, net: &Network) -> Result<Vec<f64>> {
        (0..net.num_reactions())
            .map(|j| {
                let label = net.label(j);
                self.by_label(&label).ok_or_else(|| {
                    let digits: String = label.chars().filter(char::is_ascii_digit).collect();
                    match digits.parse() {
                        Ok(i) => Error::MissingRate(i),
                        Err(_) => Error::Invalid(format!("missing rate constant for {label}")),
                    }
                })
            })
            .collect()
    }
}

pub fn log_uniform(rng: &mut impl Rng) -> f64 {
    10f64.powf(rng.random_range(-2.0..=2.0))
}

/// Concentrations in the species order of `net`.
pub fn concentrations(net: &Network, x: &BTreeMap<SpeciesId, f64>) -> Result<Vec<f64>> {
    net.species()
        .iter()
        .map(|s| {
            x.get(s)
                .copied()
                .ok_or_else(|| Error::UnknownSpecies(s.to_string()))
        })
        .collect()
}

fn check_positive(net: &Network, x: &[f64]) -> Result<()> {
    if x.len() != net.num_species() {
        return Err(Error::DimensionMismatch {
            expected: net.num_species(),
            actual: x.len(),
        });
    }
    if let Some(i) = x.iter().position(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::NonPositive {
            what: format!("concentration of {}", net.species()[i]),
        });
    }
    Ok(())
}

/// Rates `k_r * prod x^y_r` in reaction order.
pub fn reaction_rates(net: &Network, k: &RateAssignment, x: &[f64]) -> Result<Vec<f64>> {
    check_positive(net, x)?;
    let kv = k.for_network(net)?;
    Ok(net
        .reactions()
        .iter()
        .zip(kv)
        .map(|(r, kr)| {
            r.reactant.terms().fold(kr, |acc, (s, c)| {
                acc * x[net.species_index(s).unwrap()].powi(c as i32)
            })
        })
        .collect())
}

/// `f(x) = N K(x)` in the species order of `net`.
pub fn mass_action_rhs(net: &Network, k: &RateAssignment, x: &[f64]) -> Result<Vec<f64>> {
    let rates = reaction_rates(net, k, x)?;
    let mut f = vec![0.0; net.num_species()];
    for (j, rate) in rates.iter().enumerate() {
        for (i, n) in net.reaction_vector(j).into_iter().enumerate() {
            if n != 0 {
                f[i] += rate * n as f64;
            }
        }
    }
    Ok(f)
}

/// `max_i |f_i| / max(1, gross production of species i)`.
pub fn equilibrium_residual(net: &Network, k: &RateAssignment, x: &[f64]) -> Result<f64> {
    let rates = reaction_rates(net, k, x)?;
    let m = net.num_species();
    let mut f = vec![0.0; m];
    let mut production = vec![0.0; m];
    for (j, rate) in rates.iter().enumerate() {
        for (i, n) in net.reaction_vector(j).into_iter().enumerate() {
            let term = rate * n as f64;
            f[i] += term;
            if n > 0 {
                production[i] += term;
            }
        }
    }
    Ok(f.iter()
        .zip(&production)
        .map(|(fi, p)| fi.abs() / p.max(1.0))
        .fold(0.0, f64::max))
}

/// Residual on the whole network and on each FID block (block networks use
/// the same constants and concentrations).
pub fn blockwise_residuals(
    net: &Network,
    k: &RateAssignment,
    x: &BTreeMap<SpeciesId, f64>,
) -> Result<(f64, Vec<f64>)> {
    let whole = equilibrium_residual(net, k, &concentrations(net, x)?)?;
    let d = fid(net);
    let blocks = (0..d.len())
        .map(|i| {
            let b = d.block_network(i);
            equilibrium_residual(&b, k, &concentrations(&b, x)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok((whole, blocks))
}

/// The three models with published positive-equilibrium parametrizations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Schmitz,
    Fal,
    Maclean,
}

impl Model {
    pub const ALL: [Model; 3] = [Model::Schmitz, Model::Fal, Model::Maclean];

    pub fn name(self) -> &'static str {
        match self {
            Model::Schmitz => "schmitz",
            Model::Fal => "fal",
            Model::Maclean => "maclean",
        }
    }

    pub fn network(self) -> Network {
        match self {
            Model::Schmitz => fixtures::schmitz(),
            Model::Fal => fixtures::fal(),
            Model::Maclean => fixtures::maclean(),
        }
    }

    pub fn free_parameter_names(self) -> &'static [&'static str] {
        match self {
            Model::Schmitz => &["sigma1", "tau2"],
            Model::Fal => &["sigma2", "a7", "a23"],
            Model::Maclean => &["sigma1", "sigma2", "d12", "tau12", "tau13"],
        }
    }

    /// Equilibrium concentrations at the given free parameters.
    pub fn parametrization(
        self,
        k: &RateAssignment,
        free: &[f64],
    ) -> Result<BTreeMap<SpeciesId, f64>> {
        let names = self.free_parameter_names();
        if free.len() != names.len() {
            return Err(Error::DimensionMismatch {
                expected: names.len(),
                actual: free.len(),
            });
        }
        if let Some(i) = free.iter().position(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::NonPositive {
                what: format!("free parameter {}", names[i]),
            });
        }
        let values = match self {
            Model::Schmitz => schmitz(k, free[0], free[1])?,
            Model::Fal => fal(k, free[0], free[1], free[2])?,
            Model::Maclean => maclean(k, free[0], free[1], free[2], free[3], free[4])?,
        };
        Ok(values
            .into_iter()
            .map(|(i, v)| (SpeciesId::new(format!("A{i}")).expect("valid name"), v))
            .collect())
    }

    /// Random constants for the model network and random free parameters,
    /// both log-uniform over `[1e-2, 1e2]`.
    pub fn random_point(
        self,
        rng: &mut impl Rng,
    ) -> Result<(RateAssignment, BTreeMap<SpeciesId, f64>)> {
        let k = RateAssignment::random(&self.network(), rng);
        let free: Vec<f64> = self
            .free_parameter_names()
            .iter()
            .map(|_| log_uniform(rng))
            .collect();
        let x = self.parametrization(&k, &free)?;
        Ok((k, x))
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "schmitz" => Ok(Model::Schmitz),
            "fal" => Ok(Model::Fal),
            "maclean" => Ok(Model::Maclean),
            _ => Err(Error::UnknownModel(s.to_string())),
        }
    }
}

/// Values `a_i` keyed by species number `i`.
type Values = Vec<(u32, f64)>;

/// Lazily checked access to `k_i`.
struct K<'a>(&'a RateAssignment);

impl K<'_> {
    fn get(&self, i: u32) -> Result<f64> {
        self.0.k(i)
    }

    fn all<const N: usize>(&self, idx: [u32; N]) -> Result<[f64; N]> {
        let mut out = [0.0; N];
        for (o, i) in out.iter_mut().zip(idx) {
            *o = self.get(i)?;
        }
        Ok(out)
    }
}

fn schmitz(k: &RateAssignment, s1: f64, t2: f64) -> Result<Values> {
    let k = K(k);
    let [k1, k2, k3, k4, k5, k6, k7, k8, k9, k10, k11, k12, k13, k14, k15, k16, k17] =
        k.all([1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17])?;
    let s2 = k16 * k6 * k11 * (k5 + k10) * s1 / (k17 * k4 * k10 * (k7 + k11));
    let d = k2 * s2 + k3 * s1 + s1 * s2;
    Ok(vec![
        (1, s1 * (k5 + k10) / (k4 * k10)),
        (2, k14 * s1 * (k5 + k10) / (k4 * k10 * k15)),
        (3, s2 * (k7 + k11) / (k6 * k11)),
        (4, k1 * (k3 + s2) / d),
        (5, k1 * k2 / d),
        (6, t2),
        (7, k1 * k2 * k8 * t2 / (k9 * d)),
        (8, k1 * s1 * (k3 + s2) / (k10 * d)),
        (9, k1 * k2 * s2 / (k11 * d)),
        (10, k1 * s1 * (k3 + s2) / (k12 * d)),
        (11, k1 * k2 * s2 / (k13 * d)),
    ])
}

fn fal(k: &RateAssignment, s2: f64, a7: f64, a23: f64) -> Result<Values> {
    let k = K(k);
    let [k1, k4, k5, k12, k14, k15, k18, k19, k38, k43, k44, k45, k46, k47, k48] =
        k.all([1, 4, 5, 12, 14, 15, 18, 19, 38, 43, 44, 45, 46, 47, 48])?;
    let [k49, k50, k51, k52, k53, k54, k55, k56] = k.all([49, 50, 51, 52, 53, 54, 55, 56])?;
    let a2 = k55 * s2 * a23 / (k54 * (k53 + s2));
    let e = k38 * k5 * k14 + k38 * k14 * k45 + a2 * k4 * k15 * k45;
    let a13 = k54 / s2;
    let a27 = a23 * k1 * k14 * k44 * k48 * k51 * (k5 + k45) / (k43 * k47 * k52 * e);
    Ok(vec![
        (1, a2 * k15 / k14),
        (2, a2),
        (4, k1 * k14 * (k5 + k45) / e),
        (6, a7 * k50 * e / (k1 * k14 * k49 * (k5 + k45))),
        (7, a7),
        (8, a2 * k1 * k4 * k15 / e),
        (10, a2 * k1 * k4 * k15 * k45 / (k12 * e)),
        (12, a13 * k19 / k18),
        (13, a13),
        (23, a23),
        (24, a27 * k52 * e / (k1 * k14 * k51 * (k5 + k45))),
        (25, a2 * k1 * k4 * k15 * k45 / (k46 * e)),
        (26, k47 / k48),
        (27, a27),
        (28, a23 * k53 * k55 / (k56 * (k53 + s2))),
    ])
}

fn maclean(k: &RateAssignment, s1: f64, s2: f64, d12: f64, t12: f64, t13: f64) -> Result<Values> {
    let k = K(k);
    let [k1, k2, k3, k4, k5, k6, k7, k8, k9] = k.all([1, 2, 3, 4, 5, 6, 7, 8, 9])?;
    let [k18, k19, k20, k21, k22, k23, k24, k25, k26, k27, k28, k29] =
        k.all([18, 19, 20, 21, 22, 23, 24, 25, 26, 27, 28, 29])?;
    let [k30, k31, k32, k33, k35, k36, k37, k38, k39] =
        k.all([30, 31, 32, 33, 35, 36, 37, 38, 39])?;
    let k34 = k.get(34)?;

    let inner = k2 * k7 + k2 * k37 + s2 * k37 + k39 * k37 + k3 * k7 + k39 * k7;
    let big1 = (k5 + k36) * s1 * k6 * k1 * inner;
    let big2 = k4 * k6 * k1 * (k5 + k36) * (k37 * s2 + (k3 + k39) * (k7 + k37));
    let big3 = k4 * k6 * k2 * k1 * (k5 + k36) * (k7 + k37);
    let big4 = k4 * k2 * s2 * k1 * (k5 + k36) * (k7 + k37);
    let big5 = k4 * s1 * k6 * k1 * inner;
    let big6 = k4
        * k6
        * (k36 * s1 * (k7 * k2 + k7 * k3 + k37 * k2 + k7 * k39 + k37 * k39 + k37 * s2)
            + (k5 + k36)
                * (k37 * s2 * k2
                    + k7 * k39 * k2
                    + k37 * k39 * k2
                    + k37 * s2 * k38
                    + k7 * k3 * k38
                    + k7 * k39 * k38
                    + k37 * k3 * k38
                    + k37 * k39 * k38));
    let big7 = k4 * k6 * k2 * s2 * k1 * (k5 + k36);

    let ratio = (big1 * big3) / (big2 * big4);
    let d_an = (k25 + k26) / (k24 * k26) * k29 * (big3 / big4) * t13;
    let common = k21 / k20 * k29 * k30 / (k24 * k26) * (k25 + k26) / (k31 + k32) * ratio * t13;
    Ok(vec![
        (1, big1 / big2),
        (2, k23 / k22 * (k28 + k29) / k27 * t13 / t12),
        (3, big4 / big3),
        (4, big2 / big6),
        (5, big3 / big6),
        (6, d12),
        (7, k8 / k9 * big3 / big6 * d12),
        (8, big5 / big6),
        (9, big7 / big6),
        (12, k19 / k18 * k21 / k20 * d_an),
        (13, k21 / k20 * d_an),
        (14, d_an),
        (15, (k28 + k29) / k27 * t13 / t12),
        (
            16,
            k21 / k20 * k22 / k23 * k29 / k35 * k27 / (k24 * k26) * (k25 + k26) / (k28 + k29)
                * k30
                * k32
                / k33
                * (k34 + k35)
                / (k31 + k32)
                * ratio
                * t12,
        ),
        (17, t12),
        (18, common),
        (19, k29 / k26 * t13),
        (20, k32 / k35 * common),
        (21, t13),
    ])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AcrEntry {
    pub species: String,
    pub constant: bool,
    /// `(max - min) / max |value|` over the samples.
    pub spread: f64,
    pub min: f64,
    pub max: f64,
}

pub const ACR_TOLERANCE: f64 = 1e-9;

/// Samples the free parameters with `k` fixed and flags species whose
/// relative spread stays below [`ACR_TOLERANCE`].
pub fn acr_scan(
    model: Model,
    k: &RateAssignment,
    samples: usize,
    seed: u64,
) -> Result<Vec<AcrEntry>> {
    if samples < 2 {
        return Err(Error::Invalid(
            "an ACR scan needs at least 2 samples".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ranges: BTreeMap<SpeciesId, (f64, f64)> = BTreeMap::new();
    for _ in 0..samples {
        let free: Vec<f64> = model
            .free_parameter_names()
            .iter()
            .map(|_| log_uniform(&mut rng))
            .collect();
        for (s, v) in model.parametrization(k, &free)? {
            let e = ranges
                .entry(s)
                .or_insert((f64::INFINITY, f64::NEG_INFINITY));
            e.0 = e.0.min(v);
            e.1 = e.1.max(v);
        }
    }
    let net = model.network();
    Ok(net
        .species()
        .iter()
        .filter_map(|s| ranges.get(s).map(|r| (s, *r)))
        .map(|(s, (min, max))| {
            let spread = (max - min) / max.abs().max(min.abs());
            AcrEntry {
                species: s.to_string(),
                constant: spread < ACR_TOLERANCE,
                spread,
                min,
                max,
            }
        })
        .collect())
}
