use serde::{Deserialize, Serialize};

use super::MetricsError;
use crate::match_data::Position;

/// Shape of the pressure zone around the ball carrier. The zone reaches
/// `d_front` toward the attacking direction and `d_back` behind the carrier,
/// blending between the two with the cosine of the approach angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PressureParams {
    pub d_front: f64,
    pub d_back: f64,
    pub exponent: f64,
}

impl Default for PressureParams {
    fn default() -> Self {
        PressureParams {
            d_front: 9.0,
            d_back: 3.0,
            exponent: 1.0,
        }
    }
}

impl PressureParams {
    pub fn validate(&self) -> Result<(), MetricsError> {
        let ok = self.d_back > 0.0
            && self.d_front >= self.d_back
            && self.d_front.is_finite()
            && self.exponent > 0.0
            && self.exponent.is_finite();
        if ok {
            Ok(())
        } else {
            Err(MetricsError::InvalidParams(format!("{self:?}")))
        }
    }

    /// Zone radius for a defender whose bearing has cosine `cos_phi` against
    /// the attacking direction.
    pub fn reach(&self, cos_phi: f64) -> f64 {
        self.d_back + (self.d_front - self.d_back) * (1.0 + cos_phi) / 2.0
    }
}

/// Pressure contribution of a single defender.
fn term(carrier: &Position, dir: (f64, f64), defender: &Position, params: &PressureParams) -> f64 {
    let (dx, dy) = (defender.x - carrier.x, defender.y - carrier.y);
    let d = dx.hypot(dy);
    if d == 0.0 {
        return 1.0;
    }
    let cos_phi = ((dx * dir.0 + dy * dir.1) / d).clamp(-1.0, 1.0);
    let reach = params.reach(cos_phi);
    (1.0 - d / reach).max(0.0).powf(params.exponent)
}

/// Pressure on the ball carrier: the sum over defenders of
/// `max(0, 1 - d / L(phi))^q`. Returns 0 with no defenders.
pub fn pressure(
    carrier: &Position,
    attack_dir: (f64, f64),
    defenders: &[Position],
    params: &PressureParams,
) -> Result<f64, MetricsError> {
    params.validate()?;
    let norm = attack_dir.0.hypot(attack_dir.1);
    if !(norm.is_finite() && norm > 0.0) {
        return Err(MetricsError::InvalidParams(format!(
            "attack direction {attack_dir:?} has no length"
        )));
    }
    let dir = (attack_dir.0 / norm, attack_dir.1 / norm);
    if let Some(p) = std::iter::once(carrier)
        .chain(defenders)
        .find(|p| !p.is_finite())
    {
        return Err(MetricsError::NonFinite { x: p.x, y: p.y });
    }
    Ok(defenders
        .iter()
        .map(|d| term(carrier, dir, d, params))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    const FORWARD: (f64, f64) = (1.0, 0.0);

    #[test]
    fn empty_and_far() {
        let p = PressureParams::default();
        let c = Position::new(50.0, 34.0);
        assert_eq!(pressure(&c, FORWARD, &[], &p).unwrap(), 0.0);
        assert_eq!(
            pressure(&c, FORWARD, &[Position::new(59.5, 34.0)], &p).unwrap(),
            0.0
        );
    }

    #[test]
    fn half_distance_straight_ahead() {
        // phi = 0 so L = d_front = 9; d = 4.5 gives 1 - 0.5
        let p = PressureParams::default();
        let v = pressure(
            &Position::new(50.0, 34.0),
            FORWARD,
            &[Position::new(54.5, 34.0)],
            &p,
        )
        .unwrap();
        assert_eq!(v, 0.5);
    }

    #[test]
    fn behind_vanishes_at_d_back() {
        let p = PressureParams::default();
        let c = Position::new(50.0, 34.0);
        assert_eq!(
            pressure(&c, FORWARD, &[Position::new(47.0, 34.0)], &p).unwrap(),
            0.0
        );
        assert!(pressure(&c, FORWARD, &[Position::new(47.5, 34.0)], &p).unwrap() > 0.0);
    }

    #[test]
    fn sideways_uses_mean_reach() {
        // phi = pi/2: L = 3 + 6 * 0.5 = 6; d = 3 -> 0.5, squared with q = 2
        let p = PressureParams {
            exponent: 2.0,
            ..Default::default()
        };
        let v = pressure(
            &Position::new(50.0, 34.0),
            FORWARD,
            &[Position::new(50.0, 37.0)],
            &p,
        )
        .unwrap();
        assert!((v - 0.25).abs() < 1e-12);
    }

    #[test]
    fn invalid_params() {
        let c = Position::new(0.0, 0.0);
        let bad = PressureParams {
            d_front: 2.0,
            d_back: 3.0,
            exponent: 1.0,
        };
        assert!(pressure(&c, FORWARD, &[], &bad).is_err());
        let bad = PressureParams {
            d_back: 0.0,
            ..Default::default()
        };
        assert!(pressure(&c, FORWARD, &[], &bad).is_err());
        assert!(pressure(&c, (0.0, 0.0), &[], &PressureParams::default()).is_err());
    }
}
