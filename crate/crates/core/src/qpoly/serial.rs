//! JSON forms: rationals as `"p/q"` strings, Gaussian rationals as
//! `"p/q+r/s*i"`, polynomials tagged with `"form": "dense" | "factored"`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, parse_rational, Rational};
use super::{Factor, FactoredPoly, GaussianRational, QPoly};

/// `#[serde(with = "rational_str")]` for `Rational` fields.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}

/// `#[serde(with = "opt_rational_str")]` for `Option<Rational>` fields.
pub mod opt_rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(x) => s.serialize_some(&format_rational(x)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_rational(&s).map_err(D::Error::custom))
            .transpose()
    }
}

/// `#[serde(with = "rational_vec")]` for `Vec<Rational>` fields.
pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect()
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        GaussianRational::parse(&s).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "lowercase")]
enum PolyRepr {
    Dense {
        #[serde(with = "rational_vec")]
        coefficients: Vec<Rational>,
    },
    Factored {
        #[serde(with = "rational_str")]
        scalar: Rational,
        factors: Vec<FactorRepr>,
    },
}

#[derive(Serialize, Deserialize)]
struct FactorRepr {
    poly: QPoly,
    exponent: u32,
}

impl Serialize for QPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyRepr::Dense {
            coefficients: self.coeffs().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match PolyRepr::deserialize(d)? {
            PolyRepr::Dense { coefficients } => {
                if coefficients.last().is_some_and(|c| c == &Rational::from_integer(0.into())) {
                    return Err(D::Error::custom("dense polynomial with zero leading coefficient"));
                }
                Ok(QPoly::from_coeffs(coefficients))
            }
            PolyRepr::Factored { .. } => Err(D::Error::custom("expected a dense polynomial")),
        }
    }
}

impl Serialize for FactoredPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyRepr::Factored {
            scalar: self.scalar().clone(),
            factors: self
                .factors()
                .iter()
                .map(|f| FactorRepr {
                    poly: f.poly.clone(),
                    exponent: f.exponent,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FactoredPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match PolyRepr::deserialize(d)? {
            PolyRepr::Factored { scalar, factors } => {
                let factors = factors
                    .into_iter()
                    .map(|f| {
                        if f.exponent == 0 {
                            Err(D::Error::custom("factor exponent must be positive"))
                        } else {
                            Ok(Factor {
                                poly: f.poly,
                                exponent: f.exponent,
                            })
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                FactoredPoly::new(scalar, factors).map_err(D::Error::custom)
            }
            PolyRepr::Dense { coefficients } => {
                let p = QPoly::from_coeffs(coefficients);
                if p.is_zero() {
                    return Err(D::Error::custom("zero polynomial"));
                }
                Ok(FactoredPoly::from(p))
            }
        }
    }
}
