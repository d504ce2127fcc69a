//! `bo describe <kind>`: config schema and output columns.

use crate::config::ExperimentKind;
use crate::error::CliError;

const COMMON: &str = "\
Top-level keys
  experiment = \"<kind>\"            required
  seed       = <u64>                default 0
  output_dir = \"<path>\"            default bo-output/<kind>; relative paths are
                                   resolved against $BO_OUTPUT_ROOT when set
Every run writes manifest.json (config sha256, versions, wall time, status,
exit code, outputs). Floats in CSV files carry 17 significant digits.
";

const GRID: &str = "\
[grid]
  lambda = <f64 > 0>   default 1; the period is 2*pi*lambda
  M      = <even int>  number of samples (= Fourier modes)
";

const SOLVER: &str = "\
[solver]             all optional
  dt               default 1e-3
  dealias_fraction default 2/3, in (0, 1]
  quadrature_order default 4 (Gauss-Legendre points per Picard panel)
  blowup_threshold default 1e6 (max |u| before exit code 3)
  max_phase_step   default 0.25
";

const EVOLVE: &str = "\
[evolve]
  u0         = \"<trig sum>\"  e.g. \"0.1*cos(x) - 0.2*sin(3*x) + 0.5\"
  T          = <f64 > 0>
  save_every = <int >= 1>    stride of the trajectory export, default 1

Solves u_t + H u_xx - u u_x = 0 by integrating-factor RK4; a nonzero mean m
is removed and restored through u(t, x) = v(t, x + m t) + m.

trajectory.csv  t,x,u
monitors.csv    t,mean,momentum,energy_plus,energy_minus
  mean          (1/2pi lambda) * integral of u; conserved
  momentum      integral of u^2; conserved
  energy_minus  1/2 |D^(1/2) u|^2 - (1/6) integral u^3; conserved
  energy_plus   same with +1/6; not conserved (control column)
final_state.bin binary spectral record of u(T)
";

const GAUGE: &str = "\
[gauge]
  u0         = \"<trig sum>\"  mean zero (no constant term)
  T          = <f64 > 0>
  save_every = <int >= 1>    stride of identities.csv, default 1

Evolves u, then forms F = antiderivative of u, W = P+(exp(-iF/2)), w = W_x.
Time derivatives are fourth-order differences taken in the interaction
picture of the linear flow.

gauge_residuals.csv  t,residual_F,residual_w,residual_w2
  residual_F   L2 residual of F_t + H F_xx = F_x^2/2 - P0(F_x^2)/2
  residual_w   L2 residual of w_t - i w_xx = -d_x P+(W P-(u_x)) + (i/4) P0(F_x^2) w
  residual_w2  same equation with P-(u_x) rewritten through w and exp(-iF/2)
identities.csv       t,residual_bo,inversion,negative_modes,high_modes
  residual_bo     L2 residual of u_t + H u_xx - u u_x
  inversion       u = 2i exp(iF/2) w + 2i exp(iF/2) d_x P-(exp(-iF/2))
  negative_modes  P-u = -2i P-(exp(-iF/2) conj(w)) - 2i P-(exp(-iF/2) d_x P+(exp(iF/2)))
  high_modes      P>1 u = 2i P>1(exp(iF/2) w) + 2i P>1(P>1(exp(iF/2)) d_x P-(exp(-iF/2)))
";

const NORMS: &str = "\
[norms]
  u0    = \"<trig sum>\"
  T     = <f64 > 0>          window [0, T], sampled at the solver step
  b, s  = <f64 in [-2, 2]>
  taper = \"bump\" | \"boxcar\"  default bump

All values are windowed surrogates: norms of the tapered field on the
sampled window, an upper bound for the restriction norm up to the taper.

norms.csv      family,value for X, Xdot, Z, A, Y, L4, L4tilde, N, Ms
  X        (sum <xi>^2s <sigma>^2b |u^|^2)^(1/2),  sigma = tau + xi|xi|
  Xdot     homogeneous weights |xi|^s |sigma|^b
  Z        l2 in xi of <xi>^s times l1 in tau of <sigma>^b |u^|
  A        l1 in (tau, xi) of <sigma>^b |u^|
  Y        X^(1/2,s) + Z^(0,s)
  L4       L4 in space-time
  L4tilde  (sum over blocks of squared L4 norms of the blocks)^(1/2)
  N        Z^(0,0) + X^(7/8,-1) restricted to |xi| > 3 + L4tilde
  Ms       X^(1/2,s) + Z^(0,s) + X^(1,-1) restricted to |xi| > 1
lp_blocks.csv  j,X     X^(b,s) norm of each sharp Littlewood-Paley block
norms.json     the same values with parameters and the surrogate note
";

const STRICHARTZ: &str = "\
[strichartz]        uses [grid] lambda and M
  n_t        = <int >= 8>   time samples
  samples    = <int >= 1>
  T          = <f64 > 0>    window length, default 1
  band       = <int>        largest |n| drawn; default chosen so that time
                            frequencies stay below half the time Nyquist
  modulation = <int>        temporal harmonics per mode, default 2
  taper      = \"bump\" | \"boxcar\"

Draws free waves with complex Gaussian coefficients modulated in time
(sample i uses ChaCha8 stream i of the seed).

ratios.csv    sample_id,ratio    ratio = L4 / X^(3/8,0); bounded uniformly
summary.json  seed, band, min/mean/max ratio, 0.5/0.9/0.99 quantiles
";

const PICARD: &str = "\
[picard]
  phi = \"<trig sum>\"  mean zero
  K   = <int in 1..=12>
  T   = <f64 > 0>
  s   = <f64>           Sobolev index of the error, default 0
  eps = [<f64>, ...]    amplitudes

Compares the solution from eps*phi with the truncated power series
sum_{k<=K} eps^k A_k(phi), A_1 = free evolution, A_k from the Duhamel
recursion.

series.csv  K,eps,t,error   H^s distance at each solver time
orders.csv  K,order         slope of log(max_t error) against log(eps);
                            expected K+1 (needs two or more eps values)
";

const ILLPOSED: &str = "\
[illposed]          no [grid] or [solver] section
  s      = <f64 in [-2, 0)>
  t      = <f64 > 0>
  N_list = [<int>, ...]
  grid_factor | grid_modes   grid M = next_pow2(factor * max N) (default
                             factor 8) or a fixed M with 4N <= M
  eps0, c_k, c, k            constants of eps_N, defaults 0.1, 1, 1, 4

Third iterate A_3(t, Psi_N) of Psi_N = N^(-s) cos(Nx).

illposed.csv  N,norm_psi,norm_A3,ratio,eps_N
  norm_psi  |Psi_N|_(H^s)
  norm_A3   |A_3(t, Psi_N)|_(H^s)
  ratio     norm_A3 / (t N^(-2s) norm_psi^3); stays of order one, so A_3
            grows like t N^(-2s) and the flow map is not C^3 in H^s
  eps_N     min(eps0/2, t/(4 c_k), (t N^s / (4 c))^(1/k))
";

/// Schema and column documentation for `kind`.
pub fn describe(kind: &str) -> Result<String, CliError> {
    let kind: ExperimentKind = kind.parse()?;
    let body = match kind {
        ExperimentKind::Evolve => format!("{GRID}{SOLVER}{EVOLVE}"),
        ExperimentKind::GaugeCheck => format!("{GRID}{SOLVER}{GAUGE}"),
        ExperimentKind::Norms => format!("{GRID}{SOLVER}{NORMS}"),
        ExperimentKind::Strichartz => format!("{GRID}{STRICHARTZ}"),
        ExperimentKind::Picard => format!("{GRID}{SOLVER}{PICARD}"),
        ExperimentKind::Illposed => ILLPOSED.to_string(),
    };
    Ok(format!("experiment: {kind}\n\n{COMMON}\n{body}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_kind_documents_its_section() {
        for k in ExperimentKind::ALL {
            let text = describe(k.name()).unwrap();
            assert!(text.contains(&format!("[{}]", k.section())), "{k}");
        }
    }

    #[test]
    fn unknown_kind_errors() {
        assert_eq!(describe("bogus").unwrap_err().exit_code(), 2);
    }
}
