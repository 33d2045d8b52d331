//! Siegel mass of the standard lattice I_n via Körner's formula, its two-sided bounds,
//! and the large-rank asymptotics.

mod asymptotic;
mod bounds;
mod korner;
mod psi;

pub use asymptotic::{ck_dyadic_factor, log_mass_expansion, mass_asymptotic_ck};
pub use bounds::{f_n, mass_lower_in, mass_upper_in, mass_upper_unimodular, zeta_k_product_infinite, zeta_product_infinite};
pub use korner::{korner_mass, l_psi_euler_product, sigma_n, xi_factor, zeta_k_exact};
pub use psi::{psi_dyadic, psi_values, DyadicPsi};

use rug::Rational;
use serde_json::{json, Value as Json};

use crate::arith::{ExactFactored, RealEnclosure};

/// Requested evaluation path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MassMode {
    Exact,
    Enclosure,
}

/// A factor of the mass, exact where the field allows it.
#[derive(Clone, Debug, PartialEq)]
pub enum MassValue {
    Exact(ExactFactored),
    Enclosure(RealEnclosure),
}

impl MassValue {
    pub fn to_enclosure(&self, prec: u32) -> RealEnclosure {
        match self {
            MassValue::Exact(x) => x.to_enclosure(prec),
            MassValue::Enclosure(e) => e.clone(),
        }
    }

    pub fn exact(&self) -> Option<&ExactFactored> {
        match self {
            MassValue::Exact(x) => Some(x),
            MassValue::Enclosure(_) => None,
        }
    }

    fn to_json(&self, prec: u32) -> Json {
        match self {
            MassValue::Exact(x) => exact_json(x, prec),
            MassValue::Enclosure(e) => json!({ "enclosure": e.to_json() }),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MassTotal {
    Exact(Rational),
    Enclosure(RealEnclosure),
}

impl MassTotal {
    pub fn to_enclosure(&self, prec: u32) -> RealEnclosure {
        match self {
            MassTotal::Exact(q) => RealEnclosure::from_rational(q, prec),
            MassTotal::Enclosure(e) => e.clone(),
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            MassTotal::Exact(q) => Some(q),
            MassTotal::Enclosure(_) => None,
        }
    }
}

/// The factors of m_K(I_n), in the order they appear in Körner's formula.
#[derive(Clone, Debug, PartialEq)]
pub struct MassBreakdown {
    pub field: String,
    pub rank: u32,
    pub prec: u32,
    pub sigma: MassValue,
    /// (2 Γ(1/2) ⋯ Γ(n/2) / π^{n(n+1)/4})^d.
    pub gamma_factor: ExactFactored,
    /// Exponent n(n-1)/4 on the discriminant.
    pub disc_power: Rational,
    pub xi: Vec<Rational>,
    pub zeta_product: MassValue,
    pub total: MassTotal,
}

impl MassBreakdown {
    pub fn to_json(&self, breakdown: bool) -> Json {
        let total = match &self.total {
            MassTotal::Exact(q) => json!({
                "exact": q.to_string(),
                "enclosure": RealEnclosure::from_rational(q, self.prec).to_json(),
            }),
            MassTotal::Enclosure(e) => json!({ "enclosure": e.to_json() }),
        };
        let mut out = json!({
            "schema": 1,
            "field": self.field,
            "rank": self.rank,
            "total": total,
        });
        if breakdown {
            out["breakdown"] = json!({
                "sigma": self.sigma.to_json(self.prec),
                "gamma_factor": exact_json(&self.gamma_factor, self.prec),
                "disc_power": self.disc_power.to_string(),
                "xi": self.xi.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "zeta_product": self.zeta_product.to_json(self.prec),
            });
        }
        out
    }
}

pub(crate) fn exact_json(x: &ExactFactored, prec: u32) -> Json {
    json!({
        "coeff": x.coeff().to_string(),
        "pi_half_exp": x.pi_half_exp(),
        "radical_base": x.base().to_string(),
        "radical_quarter_exp": x.disc_quarter_exp(),
        "enclosure": x.to_enclosure(prec).to_json(),
    })
}
