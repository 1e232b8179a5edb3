#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <utility>

namespace netmeasure {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Drift field f : R^n -> R^n with an optional analytic Jacobian.
///
/// Evaluators write into caller-owned storage so the SDE integrator can run
/// without per-step allocation. A field is immutable once built and may be
/// shared across threads as long as its callables are reentrant.
class VectorField {
 public:
  using Evaluator = std::function<void(const Eigen::Ref<const VectorXd>&, Eigen::Ref<VectorXd>)>;
  using JacobianEvaluator = std::function<void(const Eigen::Ref<const VectorXd>&, Eigen::Ref<MatrixXd>)>;

  VectorField() = default;
  VectorField(Index dimension, Evaluator f, JacobianEvaluator df = {}, std::string description = {})
      : dimension_(dimension), f_(std::move(f)), df_(std::move(df)), description_(std::move(description)) {}

  Index dimension() const noexcept { return dimension_; }
  bool has_jacobian() const noexcept { return static_cast<bool>(df_); }
  const std::string& description() const noexcept { return description_; }

  void evaluate(const Eigen::Ref<const VectorXd>& x, Eigen::Ref<VectorXd> out) const { f_(x, out); }

  VectorXd operator()(const Eigen::Ref<const VectorXd>& x) const {
    VectorXd out(dimension_);
    f_(x, out);
    return out;
  }

  /// Analytic Jacobian; callers must check has_jacobian() first.
  void analytic_jacobian(const Eigen::Ref<const VectorXd>& x, Eigen::Ref<MatrixXd> out) const { df_(x, out); }

 private:
  Index dimension_ = 0;
  Evaluator f_;
  JacobianEvaluator df_;
  std::string description_;
};

/// f + delta * g. The result carries an analytic Jacobian only when both
/// operands do.
VectorField perturbed(const VectorField& f, const VectorField& g, double delta);

/// Linear field x -> M x.
VectorField linear_field(const MatrixXd& m, std::string description = {});

}  // namespace netmeasure
