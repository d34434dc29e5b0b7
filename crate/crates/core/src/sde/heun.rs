use super::system::SdeSystem;
use super::wiener::WienerStream;
use crate::error::{Error, Result};

/// One stochastic Heun step from `s` at time `t` with increment `dw`.
///
/// The predictor is an Euler-Maruyama step; the corrector averages drift and
/// diffusion at `s` and at the predicted state with the same `dw`. The drift
/// used in both stages is the Itô drift minus the Stratonovich correction.
#[inline]
pub fn heun_step<S, const N: usize, const M: usize>(
    system: &S,
    t: f64,
    dt: f64,
    s: &[f64; N],
    dw: &[f64; M],
) -> [f64; N]
where
    S: SdeSystem<N, M> + ?Sized,
{
    let a0 = effective_drift(system, t, s);
    let g0 = system.diffusion(t, s);
    let mut pred = *s;
    for i in 0..N {
        pred[i] += a0[i] * dt + dot(&g0[i], dw);
    }
    let a1 = effective_drift(system, t + dt, &pred);
    let g1 = system.diffusion(t + dt, &pred);
    let mut next = *s;
    for i in 0..N {
        next[i] += 0.5 * (a0[i] + a1[i]) * dt + 0.5 * (dot(&g0[i], dw) + dot(&g1[i], dw));
    }
    next
}

#[inline]
fn effective_drift<S, const N: usize, const M: usize>(system: &S, t: f64, s: &[f64; N]) -> [f64; N]
where
    S: SdeSystem<N, M> + ?Sized,
{
    let mut a = system.drift(t, s);
    let c = system.stratonovich_correction(t, s);
    for i in 0..N {
        a[i] -= c[i];
    }
    a
}

#[inline]
fn dot<const M: usize>(row: &[f64; M], dw: &[f64; M]) -> f64 {
    row.iter().zip(dw).map(|(g, w)| g * w).sum()
}

/// Integrates `n_steps` Heun steps from `initial` at `t = 0`, calling
/// `observe(k, t_k, state_k)` for `k = 0..=n_steps`. Returns the final state.
pub fn integrate<S, F, const N: usize, const M: usize>(
    system: &S,
    initial: [f64; N],
    n_steps: usize,
    stream: &mut WienerStream,
    mut observe: F,
) -> Result<[f64; N]>
where
    S: SdeSystem<N, M> + ?Sized,
    F: FnMut(usize, f64, &[f64; N]),
{
    if initial.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("initial state"));
    }
    let dt = stream.dt();
    let mut state = initial;
    observe(0, 0.0, &state);
    for k in 1..=n_steps {
        let t = (k - 1) as f64 * dt;
        let dw = stream.increments::<M>();
        state = heun_step(system, t, dt, &state, &dw);
        if state.iter().any(|v| !v.is_finite()) {
            return Err(Error::PathBlowUp { step: k });
        }
        observe(k, k as f64 * dt, &state);
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sde::system::FnSystem;

    #[test]
    fn deterministic_heun_is_second_order() {
        // dx = -x dt, no noise: error at t = 1 scales as dt^2.
        let sys = FnSystem::new("decay", |_, s: &[f64; 1]| [-s[0]], |_, _: &[f64; 1]| [[0.0]]);
        let err = |n: usize| {
            let mut w = WienerStream::new(0, 0, 1.0 / n as f64).unwrap();
            let end = integrate(&sys, [1.0], n, &mut w, |_, _, _| {}).unwrap();
            (end[0] - (-1.0f64).exp()).abs()
        };
        let ratio = err(100) / err(200);
        assert!((ratio - 4.0).abs() < 0.1, "{ratio}");
    }

    #[test]
    fn blow_up_reports_step() {
        let sys = FnSystem::new("explode", |_, s: &[f64; 1]| [s[0] * s[0]], |_, _: &[f64; 1]| [[0.0]]);
        let mut w = WienerStream::new(0, 0, 0.5).unwrap();
        match integrate(&sys, [10.0], 100, &mut w, |_, _, _| {}) {
            Err(Error::PathBlowUp { step }) => assert!(step > 1 && step < 100),
            other => panic!("expected blow-up, got {other:?}"),
        }
    }

    #[test]
    fn stratonovich_correction_recovers_ito_mean() {
        // Geometric Brownian motion dX = X dW (Itô): E[X_t] = X_0.
        struct Gbm;
        impl SdeSystem<1, 1> for Gbm {
            fn drift(&self, _: f64, _: &[f64; 1]) -> [f64; 1] {
                [0.0]
            }
            fn diffusion(&self, _: f64, s: &[f64; 1]) -> [[f64; 1]; 1] {
                [[s[0]]]
            }
            fn stratonovich_correction(&self, _: f64, s: &[f64; 1]) -> [f64; 1] {
                [0.5 * s[0]]
            }
            fn describe(&self) -> String {
                "gbm".into()
            }
        }
        let n_paths = 20_000;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for id in 0..n_paths {
            let mut w = WienerStream::new(11, id, 0.01).unwrap();
            let end = integrate(&Gbm, [1.0], 100, &mut w, |_, _, _| {}).unwrap()[0];
            sum += end;
            sum_sq += end * end;
        }
        let mean = sum / n_paths as f64;
        let se = ((sum_sq / n_paths as f64 - mean * mean) / n_paths as f64).sqrt();
        // Without the correction the mean would be e^{1/2} ~ 1.65.
        assert!((mean - 1.0).abs() < 4.0 * se, "{mean} +- {se}");
    }
}
