//! Physical inputs and their Bopp-shifted commutative counterparts.
//!
//! The noncommutative operators are realized on the ordinary Heisenberg
//! algebra through
//!
//! ```text
//! X1~ = x1 - (theta/2hbar) p2     P1~ = p1 + (eta/2hbar) x2
//! X2~ = x2 + (theta/2hbar) p1     P2~ = p2 - (eta/2hbar) x1
//! ```
//!
//! with the scale factor fixed to one. Substituting into the anisotropic
//! oscillator gives two ordinary oscillators (masses `mu_i`, frequencies
//! `w_i`) coupled by `nu1 {x2,p1} - nu2 {x1,p2}`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Mat4;
use crate::scalar::Real;

/// The six experimental inputs plus the Planck constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalParams<T> {
    pub m1: T,
    pub m2: T,
    /// Bare angular frequency along the first axis.
    pub wt1: T,
    /// Bare angular frequency along the second axis.
    pub wt2: T,
    /// Position-position deformation, `[X1~, X2~] = i theta`.
    pub theta: T,
    /// Momentum-momentum deformation, `[P1~, P2~] = i eta`.
    pub eta: T,
    pub hbar: T,
}

/// Parameters of the equivalent commutative-space Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CommutativeParams<T> {
    pub mu1: T,
    pub mu2: T,
    pub w1: T,
    pub w2: T,
    pub nu1: T,
    pub nu2: T,
    /// Carried along so downstream moments come out in physical units.
    pub hbar: T,
}

/// Names of the scalar inputs, as used by scans and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamName {
    M1,
    M2,
    W1,
    W2,
    Theta,
    Eta,
    Hbar,
}

impl ParamName {
    pub const ALL: [ParamName; 7] = [
        ParamName::M1,
        ParamName::M2,
        ParamName::W1,
        ParamName::W2,
        ParamName::Theta,
        ParamName::Eta,
        ParamName::Hbar,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ParamName::M1 => "m1",
            ParamName::M2 => "m2",
            ParamName::W1 => "w1",
            ParamName::W2 => "w2",
            ParamName::Theta => "theta",
            ParamName::Eta => "eta",
            ParamName::Hbar => "hbar",
        }
    }
}

impl fmt::Display for ParamName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ParamName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ParamName::ALL
            .into_iter()
            .find(|p| p.as_str() == s.trim())
            .ok_or_else(|| Error::InvalidAxisName(s.to_string()))
    }
}

impl<T: Real> PhysicalParams<T> {
    /// Parameters at `hbar = 1`.
    pub fn new(m1: T, m2: T, wt1: T, wt2: T, theta: T, eta: T) -> Self {
        Self {
            m1,
            m2,
            wt1,
            wt2,
            theta,
            eta,
            hbar: T::one(),
        }
    }

    pub fn with_hbar(mut self, hbar: T) -> Self {
        self.hbar = hbar;
        self
    }

    pub fn get(&self, name: ParamName) -> T {
        match name {
            ParamName::M1 => self.m1,
            ParamName::M2 => self.m2,
            ParamName::W1 => self.wt1,
            ParamName::W2 => self.wt2,
            ParamName::Theta => self.theta,
            ParamName::Eta => self.eta,
            ParamName::Hbar => self.hbar,
        }
    }

    pub fn set(&mut self, name: ParamName, value: T) {
        let slot = match name {
            ParamName::M1 => &mut self.m1,
            ParamName::M2 => &mut self.m2,
            ParamName::W1 => &mut self.wt1,
            ParamName::W2 => &mut self.wt2,
            ParamName::Theta => &mut self.theta,
            ParamName::Eta => &mut self.eta,
            ParamName::Hbar => &mut self.hbar,
        };
        *slot = value;
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("m1", self.m1),
            ("m2", self.m2),
            ("w1", self.wt1),
            ("w2", self.wt2),
            ("hbar", self.hbar),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > T::zero()) {
                return Err(Error::NonPositiveParameter(name));
            }
        }
        for (name, v) in [("theta", self.theta), ("eta", self.eta)] {
            if !(v.is_finite() && v >= T::zero()) {
                return Err(Error::NegativeDeformation(name));
            }
        }
        Ok(())
    }

    /// `hbar_e = (1 + theta eta / 4 hbar^2) hbar`.
    pub fn effective_planck(&self) -> T {
        let h = self.hbar;
        (T::one() + self.theta * self.eta / (T::lit(4.0) * h * h)) * h
    }

    /// Linear map from `(x1, p1, x2, p2)` to `(X1~, P1~, X2~, P2~)`.
    pub fn bopp_matrix(&self) -> Mat4<T> {
        let a = self.theta / (T::two() * self.hbar);
        let b = self.eta / (T::two() * self.hbar);
        let (o, l) = (T::zero(), T::one());
        Mat4::from_rows([
            [l, o, o, -a],
            [o, l, b, o],
            [o, a, l, o],
            [-b, o, o, l],
        ])
    }

    /// Commutators `[Y_a, Y_b] / (i hbar)` of the deformed operators, obtained
    /// by conjugating the canonical structure with [`Self::bopp_matrix`].
    pub fn deformed_commutators(&self) -> Mat4<T> {
        let t = self.bopp_matrix();
        t * canonical_commutators() * t.transpose()
    }

    pub fn to_commutative(&self) -> CommutativeParams<T> {
        let four = T::lit(4.0);
        let h = self.hbar;
        let h2 = h * h;
        let (m1, m2, w1, w2) = (self.m1, self.m2, self.wt1, self.wt2);
        let (th, et) = (self.theta, self.eta);

        // m / (1 + m x) rather than 1 / (1/m + x): exact when undeformed
        let mu1 = m1 / (T::one() + m1 * m2 * w2 * w2 * th * th / (four * h2));
        let mu2 = m2 / (T::one() + m1 * m2 * w1 * w1 * th * th / (four * h2));
        let k1 = m1 * w1 * w1 + et * et / (four * h2 * m2);
        let k2 = m2 * w2 * w2 + et * et / (four * h2 * m1);
        let nu1 = (et + m1 * m2 * w2 * w2 * th) / (four * m1 * h);
        let nu2 = (et + m1 * m2 * w1 * w1 * th) / (four * m2 * h);

        CommutativeParams {
            mu1,
            mu2,
            w1: (k1 / mu1).sqrt(),
            w2: (k2 / mu2).sqrt(),
            nu1,
            nu2,
            hbar: h,
        }
    }

    /// `theta m1 wt1 - eta / (m2 wt2)`; zero on the separable surface.
    pub fn constraint_residual(&self) -> T {
        self.theta * self.m1 * self.wt1 - self.eta / (self.m2 * self.wt2)
    }

    /// The momentum deformation that puts the point on the separable surface
    /// for the current `theta`.
    pub fn separable_eta(&self) -> T {
        self.theta * self.m1 * self.wt1 * self.m2 * self.wt2
    }
}

/// `[X_a, X_b] / (i hbar)` for `X = (x1, p1, x2, p2)`.
pub fn canonical_commutators<T: Real>() -> Mat4<T> {
    let (o, l) = (T::zero(), T::one());
    Mat4::from_rows([[o, l, o, o], [-l, o, o, o], [o, o, o, l], [o, o, -l, o]])
}

impl<T: Real> CommutativeParams<T> {
    /// `(mu1 w1^2 / 4 mu2 nu2^2, mu2 w2^2 / 4 mu1 nu1^2)`, both at least one
    /// for Bopp-shifted inputs. `None` when either coupling vanishes.
    pub fn coupling_bounds(&self) -> Option<(T, T)> {
        if self.nu1 * self.nu2 > T::zero() {
            let four = T::lit(4.0);
            Some((
                self.mu1 * self.w1 * self.w1 / (four * self.mu2 * self.nu2 * self.nu2),
                self.mu2 * self.w2 * self.w2 / (four * self.mu1 * self.nu1 * self.nu1),
            ))
        } else {
            None
        }
    }

    pub fn is_decoupled(&self) -> bool {
        self.nu1 == T::zero() || self.nu2 == T::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(m1: f64, m2: f64, w1: f64, w2: f64, th: f64, et: f64) -> PhysicalParams<f64> {
        PhysicalParams::new(m1, m2, w1, w2, th, et)
    }

    #[test]
    fn validation_examples() {
        assert!(p(1.0, 1.0, 1.0, 2.0, 0.0, 0.0).validate().is_ok());
        assert!(p(1.0, 1.0, 1.0, 2.0, 0.1, 0.1).validate().is_ok());
        assert_eq!(
            p(-1.0, 1.0, 1.0, 2.0, 0.0, 0.0).validate(),
            Err(Error::NonPositiveParameter("m1"))
        );
        assert_eq!(
            p(1.0, 1.0, 1.0, 0.0, 0.0, 0.0).validate(),
            Err(Error::NonPositiveParameter("w2"))
        );
        assert_eq!(
            p(1.0, 1.0, 1.0, 2.0, -0.1, 0.0).validate(),
            Err(Error::NegativeDeformation("theta"))
        );
        assert_eq!(
            p(1.0, 1.0, 1.0, 2.0, 0.0, f64::NAN).validate(),
            Err(Error::NegativeDeformation("eta"))
        );
        assert_eq!(
            p(1.0, 1.0, 1.0, 2.0, 0.0, 0.0).with_hbar(0.0).validate(),
            Err(Error::NonPositiveParameter("hbar"))
        );
    }

    #[test]
    fn effective_planck_examples() {
        assert_eq!(p(1.0, 1.0, 1.0, 2.0, 0.0, 0.0).effective_planck(), 1.0);
        assert_eq!(p(1.0, 1.0, 1.0, 2.0, 2.0, 2.0).effective_planck(), 2.0);
        assert!((p(1.0, 1.0, 1.0, 2.0, 0.1, 0.4).effective_planck() - 1.01).abs() < 1e-15);
    }

    #[test]
    fn bopp_matrix_examples() {
        assert_eq!(p(1.0, 1.0, 1.0, 2.0, 0.0, 0.0).bopp_matrix(), Mat4::identity());
        let t = p(1.0, 1.0, 1.0, 2.0, 2.0, 0.0).bopp_matrix();
        assert_eq!(t.0[0], [1.0, 0.0, 0.0, -1.0]);
        assert_eq!(t.0[2], [0.0, 1.0, 1.0, 0.0]);
        assert_eq!(t.0[1], [0.0, 1.0, 0.0, 0.0]);
        assert_eq!(t.0[3], [0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn commutative_map_examples() {
        let cp = p(1.0, 1.0, 1.0, 2.0, 0.0, 0.0).to_commutative();
        assert_eq!((cp.mu1, cp.mu2, cp.w1, cp.w2, cp.nu1, cp.nu2), (1.0, 1.0, 1.0, 2.0, 0.0, 0.0));

        let cp = p(1.0, 1.0, 1.0, 1.0, 0.2, 0.0).to_commutative();
        assert!((1.0 / cp.mu1 - 1.01).abs() < 1e-15);
        assert!((cp.nu1 - 0.05).abs() < 1e-15);

        let cp = p(1.3, 1.3, 0.7, 0.7, 0.3, 0.2).to_commutative();
        assert_eq!(cp.nu1, cp.nu2);
        assert_eq!(cp.mu1, cp.mu2);
        assert_eq!(cp.w1, cp.w2);
    }

    #[test]
    fn param_names_round_trip() {
        for n in ParamName::ALL {
            assert_eq!(n.as_str().parse::<ParamName>().unwrap(), n);
        }
        assert_eq!("mass".parse::<ParamName>(), Err(Error::InvalidAxisName("mass".into())));
    }

    fn valid() -> impl Strategy<Value = PhysicalParams<f64>> {
        (0.2f64..5.0, 0.2f64..5.0, 0.2f64..5.0, 0.2f64..5.0, 0.0f64..2.0, 0.0f64..2.0, 0.3f64..3.0)
            .prop_map(|(m1, m2, w1, w2, th, et, h)| p(m1, m2, w1, w2, th, et).with_hbar(h))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn bopp_conjugation_reproduces_deformed_algebra(pp in valid()) {
            let k = pp.deformed_commutators();
            let h = pp.hbar;
            let expect = [
                (0, 1, pp.effective_planck() / h),
                (2, 3, pp.effective_planck() / h),
                (0, 2, pp.theta / h),
                (1, 3, pp.eta / h),
                (0, 3, 0.0),
                (1, 2, 0.0),
            ];
            for (a, b, v) in expect {
                let scale = v.abs().max(1.0);
                prop_assert!((k[(a, b)] - v).abs() <= 1e-14 * scale, "({a},{b}) {} vs {v}", k[(a, b)]);
                prop_assert!((k[(b, a)] + v).abs() <= 1e-14 * scale);
            }
            for i in 0..4 {
                prop_assert_eq!(k[(i, i)], 0.0);
            }
        }

        #[test]
        fn coupling_bounds_hold(pp in valid()) {
            prop_assume!(pp.theta * pp.eta > 1e-6);
            let cp = pp.to_commutative();
            let (r1, r2) = cp.coupling_bounds().unwrap();
            prop_assert!(r1 >= 1.0 - 1e-12, "r1 = {r1}");
            prop_assert!(r2 >= 1.0 - 1e-12, "r2 = {r2}");
            prop_assert!(cp.mu1 > 0.0 && cp.mu2 > 0.0 && cp.w1 > 0.0 && cp.w2 > 0.0);
        }

        #[test]
        fn undeformed_map_is_identity(m1 in 0.1f64..10.0, m2 in 0.1f64..10.0, w1 in 0.1f64..10.0, w2 in 0.1f64..10.0) {
            let cp = p(m1, m2, w1, w2, 0.0, 0.0).to_commutative();
            prop_assert_eq!(cp.mu1, m1);
            prop_assert_eq!(cp.mu2, m2);
            prop_assert!((cp.w1 - w1).abs() <= 2.0 * f64::EPSILON * w1);
            prop_assert!((cp.w2 - w2).abs() <= 2.0 * f64::EPSILON * w2);
            prop_assert_eq!((cp.nu1, cp.nu2), (0.0, 0.0));
        }
    }
}
