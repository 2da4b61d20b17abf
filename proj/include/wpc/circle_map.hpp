#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wpc/fourier.hpp"

namespace wpc {

/// Closed-form description of the lift φ of a circle homeomorphism
/// h(e^{iθ}) = e^{iφ(θ)} on one period.
///
/// Implementations return φ on [0, 2π] as a continuous strictly increasing
/// function with φ(2π) = φ(0) + 2π; CircleMap handles the periodic extension.
class ClosedForm {
 public:
  virtual ~ClosedForm() = default;

  virtual Real lift(Real theta) const = 0;
  /// φ'(θ); may be 0 or +inf at isolated points.
  virtual Real lift_derivative(Real theta) const = 0;

  virtual std::string family() const = 0;
  virtual std::vector<std::pair<std::string, Real>> params() const { return {}; }

  /// Sampling on which derivative data is best represented.
  virtual Sampling derivative_sampling() const { return Sampling::kNodes; }

  /// φ(2πj/n), j = 0..n-1. Forms with a fast path override these.
  virtual RealVector lift_on_nodes(long n) const;
  /// φ' on an n-point grid of the given sampling.
  virtual RealVector derivative_on(long n, Sampling s) const;
};

/// A sense-preserving circle homeomorphism represented by its lift sampled on
/// the nodes θ_j = 2πj/N, optionally backed by a closed form.
///
/// The periodic part φ(θ_j) - θ_j is what is stored. Evaluation between nodes
/// uses the closed form when present and a monotone piecewise-cubic
/// interpolant otherwise.
class CircleMap {
 public:
  /// Sampled map from lift values ψ_j = φ(θ_j); requires ψ strictly increasing
  /// with ψ_{N-1} < ψ_0 + 2π.
  static CircleMap from_lift(RealVector lift);
  static CircleMap from_closed_form(std::shared_ptr<const ClosedForm> form, long n);

  static CircleMap identity(long n);
  static CircleMap rotation(Real beta, long n);
  /// h(z) = e^{iβ}(z - a)/(1 - ā z), |a| < 1.
  static CircleMap mobius(Complex a, Real beta, long n);
  /// φ(θ) = θ + ε sin θ, |ε| <= 1.
  static CircleMap sine(Real amplitude, long n);

  long size() const { return periodic_.size(); }
  Real spacing() const { return kTwoPi / static_cast<Real>(size()); }
  Real theta(long j) const { return kTwoPi * static_cast<Real>(j) / static_cast<Real>(size()); }

  const RealVector& periodic_part() const { return periodic_; }
  RealVector lift_samples() const;

  /// φ(θ) for any real θ.
  Real lift(Real theta) const;
  /// φ'(θ); requires a closed form.
  Real lift_derivative(Real theta) const;

  bool has_closed_form() const { return form_ != nullptr; }
  const std::shared_ptr<const ClosedForm>& closed_form() const { return form_; }
  /// Family tag of the closed form, or "samples".
  std::string family() const;
  /// Constant added to the closed-form lift (normalization and winding).
  Real offset() const { return offset_; }

  CircleMap resampled(long n) const;
  /// Post-rotated so that φ(0) = 0, i.e. h(1) = 1.
  CircleMap normalized() const;

 private:
  CircleMap() = default;
  void build_slopes();
  Real interpolate(Real theta) const;

  RealVector periodic_;
  RealVector slopes_;  // lift derivative estimates at the nodes (sampled maps)
  std::shared_ptr<const ClosedForm> form_;
  Real offset_ = 0;
};

/// Sup-distance between the lifts of two maps on the finer of their grids.
Real lift_distance(const CircleMap& a, const CircleMap& b);

/// h ∘ k. Closed forms compose into a closed form; otherwise the outer lift is
/// interpolated monotonically. Throws ConsistencyError when the result is not
/// strictly increasing (grid too coarse).
CircleMap compose(const CircleMap& h, const CircleMap& k);

/// h^{-1} by monotone root finding on the lift.
CircleMap invert(const CircleMap& h);

enum class Provenance { kAnalytic, kSpectral };

struct DerivativeData {
  GridFunction phi_prime;
  GridFunction log_phi_prime;
  /// φ(θ) - θ on the same samples.
  GridFunction periodic;
  Provenance provenance = Provenance::kAnalytic;
  /// φ' <= 0 at some sample or node; log φ' is clamped there.
  bool degenerate = false;
  /// φ' = +inf at some node; samples were moved to cell centres.
  bool unbounded = false;

  /// log h' = log φ' + i(φ(θ) - θ).
  GridFunction log_h_prime() const;
};

/// Derivative data: analytic when a closed form is present, spectral
/// differentiation of the periodic part otherwise. Without an explicit
/// sampling the closed form's preference is used, switching to cell centres
/// when φ' vanishes or blows up at a node.
DerivativeData derivative(const CircleMap& h, std::optional<Sampling> sampling = {});
DerivativeData spectral_derivative_data(const CircleMap& h, Sampling sampling = Sampling::kNodes);

/// Homeomorphism with lift φ(θ) = c ∫_0^θ e^{u(t)} dt.
///
/// With `renormalize` set, c = 2π / ∫_0^{2π} e^u; otherwise c = 1 and the
/// integral must already equal 2π to within 1e-8. The lift is the exact
/// integral of the trigonometric interpolant of e^u.
CircleMap from_boundary_density(const GridFunction& u, bool renormalize);

// Closed forms, exposed for serialization and for building derived families.

class IdentityForm final : public ClosedForm {
 public:
  Real lift(Real theta) const override { return theta; }
  Real lift_derivative(Real) const override { return 1; }
  std::string family() const override { return "identity"; }
};

class RotationForm final : public ClosedForm {
 public:
  explicit RotationForm(Real beta) : beta_(beta) {}
  Real lift(Real theta) const override { return theta + beta_; }
  Real lift_derivative(Real) const override { return 1; }
  std::string family() const override { return "rotation"; }
  std::vector<std::pair<std::string, Real>> params() const override { return {{"beta", beta_}}; }
  Real beta() const { return beta_; }

 private:
  Real beta_;
};

class MobiusForm final : public ClosedForm {
 public:
  MobiusForm(Complex a, Real beta);
  Real lift(Real theta) const override;
  Real lift_derivative(Real theta) const override;
  std::string family() const override { return "mobius"; }
  std::vector<std::pair<std::string, Real>> params() const override;
  Complex a() const { return a_; }
  Real beta() const { return beta_; }

 private:
  Complex a_;
  Real beta_;
};

/// φ(θ) = θ + ε sin θ. With ε = -1 this is the flat map θ - sin θ, whose
/// derivative 1 - cos θ vanishes at θ = 0.
class SineForm final : public ClosedForm {
 public:
  explicit SineForm(Real amplitude);
  Real lift(Real theta) const override;
  Real lift_derivative(Real theta) const override;
  std::string family() const override { return amplitude_ == -1.0 ? "sine_flat" : "sine"; }
  std::vector<std::pair<std::string, Real>> params() const override;
  Sampling derivative_sampling() const override {
    return std::abs(amplitude_) == 1.0 ? Sampling::kCellCenters : Sampling::kNodes;
  }
  Real amplitude() const { return amplitude_; }

 private:
  Real amplitude_;
};

class DensityForm final : public ClosedForm {
 public:
  DensityForm(GridFunction u, bool renormalize);
  Real lift(Real theta) const override;
  Real lift_derivative(Real theta) const override;
  std::string family() const override { return "from_u"; }
  Sampling derivative_sampling() const override { return u_.sampling(); }
  RealVector lift_on_nodes(long n) const override;
  RealVector derivative_on(long n, Sampling s) const override;
  const GridFunction& density_log() const { return u_; }
  bool renormalize() const { return renormalize_; }
  /// The constant c of the lift.
  Real scale() const { return scale_; }

 private:
  GridFunction u_;
  bool renormalize_;
  Real scale_ = 1;
  ComplexVector coeffs_;  // e^u coefficients for n = -(N/2-1)..N/2-1
  Real nyquist_ = 0;      // Nyquist term, cosine (nodes) or sine (cell centres)
};

class CompositeForm final : public ClosedForm {
 public:
  CompositeForm(CircleMap outer, CircleMap inner)
      : outer_(std::move(outer)), inner_(std::move(inner)) {}
  Real lift(Real theta) const override { return outer_.lift(inner_.lift(theta)); }
  Real lift_derivative(Real theta) const override;
  std::string family() const override { return "composite"; }
  Sampling derivative_sampling() const override;

 private:
  CircleMap outer_, inner_;
};

class InverseForm final : public ClosedForm {
 public:
  explicit InverseForm(CircleMap base) : base_(std::move(base)) {}
  Real lift(Real theta) const override;
  Real lift_derivative(Real theta) const override;
  std::string family() const override { return "inverse"; }
  Sampling derivative_sampling() const override;

 private:
  CircleMap base_;
};

/// x with h.lift(x) = y, for any real y.
Real solve_lift(const CircleMap& h, Real y);

}  // namespace wpc
