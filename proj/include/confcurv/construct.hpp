#ifndef CONFCURV_CONSTRUCT_HPP
#define CONFCURV_CONSTRUCT_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "confcurv/chart.hpp"
#include "confcurv/cones.hpp"
#include "confcurv/conformal.hpp"
#include "confcurv/curvature.hpp"

namespace confcurv {

/// Largest admissible N·max(v); keeps e^{2Nv} inside double range.
inline constexpr double kOverflowGuard = 250.0;
/// Smallest admissible |∇v|_g on the grid.
inline constexpr double kCriticalThreshold = 1e-6;

enum class PreconditionCode { VBelowOne, CriticalPoint, Overflow, MetricNotSPD };

std::string to_string(PreconditionCode code);

/// A verifier input violates the assumptions the construction needs.
class PreconditionError : public std::runtime_error {
 public:
  PreconditionError(PreconditionCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  PreconditionCode code() const { return code_; }

 private:
  PreconditionCode code_;
};

/**
 * The potential u = e^{Nv} built from a function v without critical points.
 *
 * Construction checks, on the given grid, that v >= 1 (after the optional
 * shift v ← v − min v + 1), that |∇v|_g >= kCriticalThreshold, that g is SPD
 * and that N·max v <= kOverflowGuard.
 */
class Potential {
 public:
  Potential(const MetricField& g, const ScalarField& v, double n_factor, const SampleGrid& grid,
            bool shift_v = false);

  const ScalarField& v() const { return v_; }
  double N() const { return n_factor_; }
  double v_min() const { return v_min_; }
  double v_max() const { return v_max_; }
  double min_grad_norm() const { return min_grad_; }
  bool shifted() const { return shifted_; }

  /// u = exp(N v) as a scalar field.
  ScalarField u() const;

  /// Checks v and g on the grid without fixing N; returns the (possibly
  /// shifted) v with its extremes.
  struct Checked {
    ScalarField v;
    double v_min;
    double v_max;
    double min_grad;
    bool shifted;
  };
  static Checked check(const MetricField& g, const ScalarField& v, const SampleGrid& grid,
                       bool shift_v);

  /// From an already checked v; only the overflow guard is tested.
  Potential(Checked c, double n_factor);

 private:

  ScalarField v_;
  double n_factor_;
  double v_min_;
  double v_max_;
  double min_grad_;
  bool shifted_;
};

/**
 * Closed-form eigenvalues of g⁻¹[(1 + γe^{Nv})|∇v|² g + ϱ(e^{Nv} − 1) dv⊗dv]:
 *
 *   |∇v|² (1 + γe^{Nv}, ..., 1 + γe^{Nv}, 1 + γe^{Nv} + ϱ(e^{Nv} − 1)).
 *
 * The last entry is the dv direction; the vector is not sorted.
 */
VectorXd key3_spectrum(double grad_norm2, double v_at_x, double n_factor, double tau, int n);

/// The tensor whose spectrum key3_spectrum gives in closed form.
MatrixXd key3_tensor(const CovariantJet<double>& v, const MatrixXd& g, double n_factor,
                     double tau);

/// Covariant jet of u = e^{Nv} from that of v by the chain rule.
CovariantJet<double> exp_potential_jet(const CovariantJet<double>& v, double n_factor);

/**
 * V[u] for u = e^{Nv}, expanded:
 *
 *   N²e^{Nv}((1 + γe^{Nv})|∇v|² g + ϱ(e^{Nv} − 1) dv⊗dv) + Ne^{Nv}(Δv g − ϱ∇²v) + A.
 *
 * Throws PreconditionError(Overflow) when N·v exceeds kOverflowGuard.
 */
MatrixXd v_of_exp_potential(const CovariantJet<double>& v, const MatrixXd& g, double n_factor,
                            const MatrixXd& a, double tau);

/// −A_{g_u} for u = e^{Nv}:
///   −A_g + Ne^{Nv}∇²v + N²e^{Nv} dv⊗dv + N²e^{2Nv}(½|∇v|² g − dv⊗dv).
MatrixXd minus_schouten_exp_potential(const MatrixXd& a_g, const CovariantJet<double>& v,
                                      const MatrixXd& g, double n_factor);

struct VerifyConfig {
  double tau = 2.0;
  int alpha = 1;
  Cone cone = Cone(3, 3);
  int jobs = 1;
  bool shift_v = false;
};

struct ProbeRecord {
  double N;
  double min_margin;
  friend bool operator==(const ProbeRecord&, const ProbeRecord&) = default;
};

struct SearchSummary {
  bool found = false;
  double N_max = 64;
  double N_cap = 0;  ///< largest N allowed by the overflow guard
  std::vector<ProbeRecord> probes;
  std::optional<ProbeRecord> recheck;  ///< verification at 2N*, when admissible
  bool non_monotone = false;
  friend bool operator==(const SearchSummary&, const SearchSummary&) = default;
};

struct SectionalSummary {
  int planes_per_point = 0;
  std::uint64_t seed = 0;
  double max_sectional = 0;
  double min_einstein_eig = 0;
  double max_identity_residual = 0;
  std::size_t max_sectional_point = 0;
  std::size_t min_einstein_point = 0;
  friend bool operator==(const SectionalSummary&, const SectionalSummary&) = default;
};

/**
 * Outcome of a grid verification. Sectional curvatures and Einstein
 * eigenvalues are reported for the pointwise renormalized metric
 * e^{2(u − u(x))} g at each x, i.e. multiplied by e^{2u(x)}; signs and ratios
 * are those of g_u.
 */
struct VerificationReport {
  std::string metric;
  std::string potential;
  std::vector<double> lower;
  std::vector<double> upper;
  int resolution = 0;
  double tau = 0;
  int alpha = 1;
  int cone_n = 0;
  int cone_k = 0;
  bool v_shifted = false;
  double N = 0;
  std::vector<double> margins;
  double min_margin = 0;
  std::size_t min_margin_point = 0;
  double cross_check_residual = 0;
  std::optional<SearchSummary> search;
  std::optional<SectionalSummary> sectional;

  bool verified() const;
  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

/**
 * Cone margins of λ(g⁻¹ α A^τ_{g_u}) at every grid point for u = e^{Nv}.
 *
 * For τ != 1 the tensor is assembled from the expanded V[u] with
 * A = (n−2)/(τ−1) A^τ_g and rescaled by (τ−1)/(n−2); for τ = 1 from the
 * expansion of −A_{g_u}. A zero tensor gets margin 0.
 */
VerificationReport verify_at_N(const MetricField& g, const ScalarField& v, double n_factor,
                               const VerifyConfig& cfg, const SampleGrid& grid);

struct SearchResult {
  bool found = false;
  int N_star = 0;
  VerificationReport report;
};

/**
 * Smallest integer N with positive minimal margin on the probed lattice:
 * doubling ladder 1, 2, 4, ... up to N_max (and the overflow cap), then
 * integer bisection between the last failure and the first success.
 * Assumes success is upward closed; a failed recheck at 2N* is flagged as
 * non-monotone rather than treated as an error.
 */
SearchResult search_min_N(const MetricField& g, const ScalarField& v, const VerifyConfig& cfg,
                          const SampleGrid& grid, int n_max = 64);

/**
 * Curvature of g_u = e^{2u} g computed directly (n = 3 only): the smallest
 * eigenvalue of λ(g_u⁻¹ G_{g_u}) and the largest sectional curvature over
 * `planes_per_point` random planes per grid point, with the identity
 * G(n⃗, n⃗) = −K(Σ) residual tracked for each sampled plane.
 */
SectionalSummary verify_negative_sectional_dim3(const MetricField& g, const ScalarField& u,
                                                const SampleGrid& grid, int planes_per_point,
                                                std::uint64_t seed, int jobs = 1);

}  // namespace confcurv

#endif  // CONFCURV_CONSTRUCT_HPP
