/// An Itô system `ds = a(t, s) dt + G(t, s) dW` with `N` state components
/// and `M` independent Wiener channels.
///
/// `M < N` means several components consume the same increment, as in the
/// phase-space systems where `x` and `p` share `dW+`.
pub trait SdeSystem<const N: usize, const M: usize>: Sync {
    fn drift(&self, t: f64, s: &[f64; N]) -> [f64; N];

    /// Row `i` maps the `M` increments onto component `i`.
    fn diffusion(&self, t: f64, s: &[f64; N]) -> [[f64; M]; N];

    /// Itô-to-Stratonovich drift shift `1/2 sum_{j,k} G_jk d_j G_ik`.
    ///
    /// Zero for additive noise. Heun's predictor-corrector converges to the
    /// Stratonovich solution, so the integrator subtracts this term.
    fn stratonovich_correction(&self, _t: f64, _s: &[f64; N]) -> [f64; N] {
        [0.0; N]
    }

    fn shared_noise(&self) -> bool {
        M < N
    }

    /// Short label recorded in path metadata.
    fn describe(&self) -> String;
}

/// System assembled from closures, mainly for tests and quick experiments.
pub struct FnSystem<A, G, const N: usize, const M: usize> {
    drift: A,
    diffusion: G,
    label: String,
}

impl<A, G, const N: usize, const M: usize> FnSystem<A, G, N, M>
where
    A: Fn(f64, &[f64; N]) -> [f64; N] + Sync,
    G: Fn(f64, &[f64; N]) -> [[f64; M]; N] + Sync,
{
    pub fn new(label: impl Into<String>, drift: A, diffusion: G) -> Self {
        Self { drift, diffusion, label: label.into() }
    }
}

impl<A, G, const N: usize, const M: usize> SdeSystem<N, M> for FnSystem<A, G, N, M>
where
    A: Fn(f64, &[f64; N]) -> [f64; N] + Sync,
    G: Fn(f64, &[f64; N]) -> [[f64; M]; N] + Sync,
{
    fn drift(&self, t: f64, s: &[f64; N]) -> [f64; N] {
        (self.drift)(t, s)
    }

    fn diffusion(&self, t: f64, s: &[f64; N]) -> [[f64; M]; N] {
        (self.diffusion)(t, s)
    }

    fn describe(&self) -> String {
        self.label.clone()
    }
}
