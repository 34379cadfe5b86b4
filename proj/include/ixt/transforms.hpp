#pragma once

// Forward transform F (three routes), adjoint G (two routes), both inversion
// formulas, Mellin / Fourier-cosine helpers, norms and the inequality reports.
//
//   (F f)(tau) = int_0^inf Psi_tau(x) f(x) dx
//   (G g)(x)   = int_R Psi_tau(x) g(tau) dtau

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ixt/kernel.hpp"
#include "ixt/quadrature.hpp"
#include "ixt/types.hpp"

namespace ixt::transforms {

using quad::Decay;
using quad::DecayKind;
using quad::SampledFunction;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct LebesgueParams {
    double nu = 0.5;
    /// In (1, inf]; 1 is accepted where the weighted norm itself is asked for.
    double p = 2.0;

    double q() const;
    void validate() const;
};

struct GridNode {
    double abscissa = 0.0;
    double value = 0.0;
    double err_est = 0.0;
};

struct TransformResult {
    std::vector<GridNode> grid;
    std::string route;
    /// Truncation and tolerance choices actually used.
    std::vector<std::pair<std::string, double>> params;
};

struct MellinSample {
    ComplexScalar s;
    ComplexScalar value;
};

/// f*(s) = int_0^inf f(x) x^{s-1} dx. Throws DivergenceError when the
/// metadata rules out convergence at Re s.
ComplexEvalResult mellin_numeric(const SampledFunction& f, ComplexScalar s,
                                 const quad::QuadratureSpec& spec = {});
std::vector<MellinSample> mellin_line(const SampledFunction& f, double re_s,
                                      const std::vector<double>& im_s);

/// sqrt(2/pi) int_0^inf f(t) cos(x t) dt.
EvalResult fourier_cosine(const std::function<double(double)>& f, double x,
                          const Decay& decay = {}, const quad::QuadratureSpec& spec = {});

EvalResult forward_F(const SampledFunction& f, double tau, const quad::QuadratureSpec& spec = {});

/// Contour route. fstar is the Mellin transform f*; the integrand uses
/// f*(1 - s) for s on the contour Re s = contour.gamma.
EvalResult forward_F_mellin(const std::function<ComplexScalar(ComplexScalar)>& fstar, double tau,
                            const quad::ContourSpec& contour = {},
                            const quad::QuadratureSpec& spec = {});

/// Meijer-type transform -sqrt(2/pi) int_0^inf Re K_0(4 e^{i pi/4} sqrt(x t)) f(t) dt.
EvalResult meijer_k0(const SampledFunction& f, double x, const quad::QuadratureSpec& spec = {});

/// Fourier-cosine transform of t -> (meijer_k0 f)(cosh t), evaluated at tau.
EvalResult forward_F_composition(const SampledFunction& f, double tau);

EvalResult adjoint_G(const SampledFunction& g, double x, const quad::QuadratureSpec& spec = {});

/// int_R Psi_tau(x) e^{theta tau} g(tau) dtau on the same quadrature path as
/// adjoint_G (theta = 0 reproduces it bit for bit).
EvalResult adjoint_G_weighted(const SampledFunction& g, double x, double theta,
                              const quad::QuadratureSpec& spec = {});

/// d/dx (G g)(x) with the kernel derivative from the contour route.
EvalResult adjoint_G_derivative(const SampledFunction& g, double x);

/// Route through Re K_0 of rotated argument and the Fourier transform of g;
/// the transform is computed numerically from g.
EvalResult adjoint_G_fourier_route(const SampledFunction& g, double x);

/// Same route with the Fourier transform (1/sqrt(2 pi)) int g(t) e^{i x t} dt
/// of an even g supplied in closed form.
EvalResult adjoint_G_fourier_route(const std::function<double(double)>& fourier_g, double x);

/// d/dx of the cosine route, differentiated under the integral.
EvalResult adjoint_G_derivative_fourier_route(const SampledFunction& g, double x);
EvalResult adjoint_G_derivative_fourier_route(const std::function<double(double)>& fourier_g, double x);

/// Index-side truncation: |tau| <= returned T keeps the neglected part of
/// int |Psi_tau(x)| |g(tau)| e^{theta tau} dtau below tol. Throws
/// TruncationError when the kernel decay cannot beat e^{theta tau}.
double index_truncation(const SampledFunction& g, double x, double theta, double tol);

enum class InversionMode { contour_derivative, outer_difference };

struct InversionOptions {
    InversionMode mode = InversionMode::contour_derivative;
    quad::ContourSpec contour{};
    /// Truncate the tau-integral once |integrand| falls below this.
    double envelope_tol = 1e-12;
    /// Largest acceptable int_T^{2T} |h| / int_0^T |h|.
    double tail_tol = 1e-6;
};

struct InversionResult : EvalResult {
    double truncation = 0.0;
    double tail_mass = 0.0;
};

/// f(x) = -(4/pi) d/dx int_0^inf tau F(tau) / cosh(pi tau / 2) Phi_tau(x) dtau.
InversionResult invert_F(const std::function<double(double)>& Fvals, double x,
                         const InversionOptions& options = {});
InversionResult invert_F(const std::function<double(double)>& Fvals, double x,
                         const quad::ContourSpec& contour);

/// g(x) = (4/pi) x sinh(pi x / 2) int_0^inf Phi_x(y) G'(y) dy.
EvalResult invert_G(const std::function<double(double)>& Gprime, double x,
                    const quad::QuadratureSpec& spec = {});

/// int_0^inf K_0^2(sqrt(2x)) |f(x)| dx
double norm_L0(const SampledFunction& f);

/// (int_0^inf x^{nu p - 1} |f|^p dx)^{1/p}; p = inf is the maximum of |x^nu f|
/// over a 10^4-point logarithmic grid.
double norm_nu_p(const SampledFunction& f, const LebesgueParams& params);

/// (int_R |g|^p dtau)^{1/p}
double norm_index_p(const SampledFunction& g, double p);

enum class BoundSelector {
    embedding,          // L0 norm against the weighted L_{nu,p} norm
    forward_lp,         // L_p(R) norm of F f
    forward_sup,        // |F f(tau)| <= (4/pi) ||f||_{L0} at each node
    adjoint_pointwise,  // |G g(x)| against ||g||_p at each node
    adjoint_weighted,   // ||G g||_{nu,r} against ||g||_p
};

struct InequalityReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = false;
    std::vector<std::pair<std::string, double>> params;
};

struct BoundRequest {
    BoundSelector selector = BoundSelector::embedding;
    SampledFunction fn;
    LebesgueParams params;
    /// Exponent of the target norm for adjoint_weighted.
    double r = 2.0;
    /// tau nodes (forward_sup) or x nodes (adjoint_pointwise); upper tau
    /// limit of the truncated norm for forward_lp is nodes.back().
    std::vector<double> nodes;
};

std::vector<InequalityReport> bound_report(const BoundRequest& request);

/// Closed-form right-hand constants of the inequalities.
double embedding_constant(const LebesgueParams& params);
double forward_lp_constant(const LebesgueParams& params);
double adjoint_pointwise_constant(double p, double x);
double adjoint_weighted_constant(double nu, double p, double r);

struct HilbertSchmidtReport {
    double truncated = 0.0;
    double err_est = 0.0;
    double tail_bound = 0.0;
    double trunc = 0.0;
};

/// 2 int_0^trunc int_0^inf |Psi_tau(x)|^q x^{(1-nu) q - 1} dx dtau plus a tail
/// bound for tau > trunc.
HilbertSchmidtReport hilbert_schmidt_diagnostic(const LebesgueParams& params, double trunc);

/// Runs fn over the abscissae on `jobs` workers; grid order is preserved.
TransformResult evaluate_grid(const std::vector<double>& abscissae, int jobs, std::string route,
                              const std::function<EvalResult(double)>& fn);

/// Thread-safe memo for expensive real functions reused across calls.
std::function<double(double)> memoize(std::function<double(double)> fn);

namespace canonical {

/// (1 - x) e^{-x}: zero mean, Mellin transform Gamma(s)(1 - s).
SampledFunction zero_mean();
ComplexScalar zero_mean_mellin(ComplexScalar s);

/// e^{-x} - 2 e^{-2x}: zero mean, Mellin transform Gamma(s)(1 - 2^{1-s}).
SampledFunction two_exponentials();
ComplexScalar two_exponentials_mellin(ComplexScalar s);

/// tau^2 e^{-tau^2}
SampledFunction gaussian_index();
/// (1/sqrt(2 pi)) int tau^2 e^{-tau^2} e^{i t tau} dtau
double gaussian_index_fourier(double t);

/// tau^2 e^{-|tau|}
SampledFunction slow_index();

}  // namespace canonical

}  // namespace ixt::transforms
