use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// Frequency configuration `(xi, eta, sigma)`; `rho = xi - eta - sigma` is
/// always recomputed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhasePoint {
    pub xi: [f64; 2],
    pub eta: [f64; 2],
    pub sigma: [f64; 2],
}

impl PhasePoint {
    pub fn new(xi: [f64; 2], eta: [f64; 2], sigma: [f64; 2]) -> Self {
        PhasePoint { xi, eta, sigma }
    }

    /// Point with prescribed `rho`: `xi = eta + sigma + rho`.
    pub fn from_rho(eta: [f64; 2], sigma: [f64; 2], rho: [f64; 2]) -> Self {
        PhasePoint {
            xi: [eta[0] + sigma[0] + rho[0], eta[1] + sigma[1] + rho[1]],
            eta,
            sigma,
        }
    }

    pub fn rho(&self) -> [f64; 2] {
        [
            self.xi[0] - self.eta[0] - self.sigma[0],
            self.xi[1] - self.eta[1] - self.sigma[1],
        ]
    }

    /// `(xi_a, eta_a, sigma_a, rho_a)`
    pub fn block_a(&self) -> [f64; 4] {
        [self.xi[0], self.eta[0], self.sigma[0], self.rho()[0]]
    }

    /// `(xi_b, eta_b, sigma_b, rho_b)`
    pub fn block_b(&self) -> [f64; 4] {
        [self.xi[1], self.eta[1], self.sigma[1], self.rho()[1]]
    }

    pub fn norm_a(&self) -> f64 {
        norm(&self.block_a())
    }

    pub fn norm_b(&self) -> f64 {
        norm(&self.block_b())
    }

    /// `|omega|` with `omega = (xi, eta, sigma, rho)` in `R^8`.
    pub fn scale(&self) -> f64 {
        self.norm_a().hypot(self.norm_b())
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        let s = |v: [f64; 2]| [lambda * v[0], lambda * v[1]];
        PhasePoint::new(s(self.xi), s(self.eta), s(self.sigma))
    }

    /// `(xi_a, eta_a, sigma_a, xi_b, eta_b, sigma_b)`
    pub fn to_vars(&self) -> [f64; 6] {
        [
            self.xi[0],
            self.eta[0],
            self.sigma[0],
            self.xi[1],
            self.eta[1],
            self.sigma[1],
        ]
    }

    pub fn from_vars(v: &[f64; 6]) -> Self {
        PhasePoint::new([v[0], v[3]], [v[1], v[4]], [v[2], v[5]])
    }
}

impl Serialize for PhasePoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("PhasePoint", 4)?;
        st.serialize_field("xi", &self.xi)?;
        st.serialize_field("eta", &self.eta)?;
        st.serialize_field("sigma", &self.sigma)?;
        st.serialize_field("rho", &self.rho())?;
        st.end()
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn cube(x: f64) -> f64 {
    x * x * x
}

/// `phi = Omega(xi) - Omega(eta) - Omega(sigma) - Omega(rho)`, `Omega(k) = k_a^3 + k_b^3`.
pub fn phase(p: &PhasePoint) -> f64 {
    let r = p.rho();
    (0..2)
        .map(|c| cube(p.xi[c]) - cube(p.eta[c]) - cube(p.sigma[c]) - cube(r[c]))
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseGradients {
    pub eta: [f64; 2],
    pub sigma: [f64; 2],
    pub xi: [f64; 2],
}

/// Closed-form gradients of `phase` in `eta`, `sigma` and `xi` (with the other
/// two held fixed and `rho` dependent).
pub fn phase_gradients(p: &PhasePoint) -> PhaseGradients {
    let r = p.rho();
    let g = |u: [f64; 2], sign: f64| {
        [
            3.0 * sign * (r[0] * r[0] - u[0] * u[0]),
            3.0 * sign * (r[1] * r[1] - u[1] * u[1]),
        ]
    };
    PhaseGradients {
        eta: g(p.eta, 1.0),
        sigma: g(p.sigma, 1.0),
        xi: g(p.xi, -1.0),
    }
}

/// Largest relative gap between [`phase_gradients`] and central differences
/// of [`phase`] over `n` seeded random points in `[-range, range]^6`. The gap
/// is measured against `max(1, |gradient|)`.
pub fn gradient_fd_check(n: usize, range: f64, seed: u64) -> f64 {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..n {
        let mut v = [0.0; 6];
        v.iter_mut().for_each(|x| *x = rng.gen_range(-range..range));
        let p = PhasePoint::from_vars(&v);
        let g = phase_gradients(&p);
        // Variable order (xi_a, eta_a, sigma_a, xi_b, eta_b, sigma_b).
        let exact = [g.xi[0], g.eta[0], g.sigma[0], g.xi[1], g.eta[1], g.sigma[1]];
        for (k, &e) in exact.iter().enumerate() {
            let h = 1e-5 * (1.0 + v[k].abs());
            let (mut up, mut dn) = (v, v);
            up[k] += h;
            dn[k] -= h;
            let fd = (phase(&PhasePoint::from_vars(&up)) - phase(&PhasePoint::from_vars(&dn))) / (2.0 * h);
            worst = worst.max((fd - e).abs() / e.abs().max(1.0));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_is_derived() {
        let p = PhasePoint::from_rho([1.0, 2.0], [-0.5, 0.25], [3.0, -1.0]);
        assert_eq!(p.rho(), [3.0, -1.0]);
        assert_eq!(PhasePoint::from_vars(&p.to_vars()), p);
    }

    #[test]
    fn serialized_point_carries_rho() {
        let p = PhasePoint::from_rho([1.0, 0.0], [1.0, 0.0], [1.0, 0.0]);
        let json = serde_json::to_value(p).unwrap();
        assert_eq!(json["rho"][0], 1.0);
    }
}
