#pragma once

// Continuous Lyapunov equation S J^T + J S + A = 0 and principal-submatrix
// log-determinants. Templated on the scalar type of the operands.

#include "netmeasure/errors.hpp"
#include "netmeasure/index_set.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <sstream>

namespace netmeasure {

enum class LyapunovMethod {
  Automatic,  ///< Kronecker for n <= 25, Schur above
  Kronecker,  ///< dense (J (x) I + I (x) J) vec(S) = -vec(A)
  Schur,      ///< Bartels-Stewart on the complex Schur form of J
};

struct LyapunovDiagnostics {
  double residual = 0.0;            ///< ||S J^T + J S + A||_inf
  double tolerance = 0.0;           ///< 1e-10 (1 + ||A||_inf)
  double reciprocal_condition = 1.0;  ///< LU rcond estimate (Kronecker path)
  double spectral_abscissa = 0.0;
  int refinement_steps = 0;
  bool ill_conditioned = false;
  LyapunovMethod method = LyapunovMethod::Automatic;
};

template <typename Derived>
typename Derived::RealScalar inf_norm(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(const Eigen::MatrixBase<DerivedA>& a,
                                                                              const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// S J^T + J S + A
template <typename DJ, typename DA, typename DS>
Eigen::Matrix<typename DJ::Scalar, Eigen::Dynamic, Eigen::Dynamic> lyapunov_residual(
    const Eigen::MatrixBase<DJ>& J, const Eigen::MatrixBase<DA>& A, const Eigen::MatrixBase<DS>& S) {
  return S * J.transpose() + J * S + A;
}

namespace detail {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Solves T Y + Y T^H = -F for upper-triangular T by column recursion from the
// right (T^H is lower triangular, so column j couples to columns > j).
template <typename Scalar>
Mat<std::complex<Scalar>> triangular_lyapunov(const Mat<std::complex<Scalar>>& T, const Mat<std::complex<Scalar>>& F) {
  using C = std::complex<Scalar>;
  const Eigen::Index n = T.rows();
  Mat<C> Y = Mat<C>::Zero(n, n);
  Mat<C> I = Mat<C>::Identity(n, n);
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    Eigen::Matrix<C, Eigen::Dynamic, 1> rhs = -F.col(j);
    for (Eigen::Index k = j + 1; k < n; ++k) rhs -= std::conj(T(j, k)) * Y.col(k);
    Mat<C> M = T + std::conj(T(j, j)) * I;
    Y.col(j) = M.template triangularView<Eigen::Upper>().solve(rhs);
  }
  return Y;
}

}  // namespace detail

/// Unique symmetric S with S J^T + J S + A = 0 for stable J.
///
/// Refuses unstable J with InstabilityError carrying the spectral abscissa.
/// The result is symmetrized and iteratively refined until the residual is
/// within 1e-10 (1 + ||A||_inf) or two refinement steps have been spent.
template <typename DJ, typename DA>
Eigen::Matrix<typename DJ::Scalar, Eigen::Dynamic, Eigen::Dynamic> solve_lyapunov(
    const Eigen::MatrixBase<DJ>& J_in, const Eigen::MatrixBase<DA>& A_in,
    LyapunovMethod method = LyapunovMethod::Automatic, LyapunovDiagnostics* diagnostics = nullptr) {
  using Scalar = typename DJ::Scalar;
  using M = detail::Mat<Scalar>;
  using C = std::complex<Scalar>;
  using CM = detail::Mat<C>;

  const M J = J_in;
  const M A = A_in;
  const Eigen::Index n = J.rows();
  if (J.cols() != n || A.rows() != n || A.cols() != n || n == 0)
    throw InvalidArgument("solve_lyapunov: J and A must be square and of equal size");
  if (!J.allFinite() || !A.allFinite()) throw InvalidArgument("solve_lyapunov: non-finite input");

  Eigen::ComplexSchur<M> schur(J);
  if (schur.info() != Eigen::Success) throw ConvergenceError("solve_lyapunov: Schur decomposition failed");
  const Scalar abscissa = schur.matrixT().diagonal().real().maxCoeff();
  if (!(abscissa < 0)) {
    std::ostringstream os;
    os << "Lyapunov equation requires a stable Jacobian; spectral abscissa = " << abscissa;
    throw InstabilityError(os.str(), static_cast<double>(abscissa));
  }

  if (method == LyapunovMethod::Automatic) method = n <= 25 ? LyapunovMethod::Kronecker : LyapunovMethod::Schur;

  LyapunovDiagnostics diag;
  diag.method = method;
  diag.spectral_abscissa = static_cast<double>(abscissa);
  diag.tolerance = 1e-10 * (1.0 + static_cast<double>(inf_norm(A)));

  M S;
  if (method == LyapunovMethod::Kronecker) {
    const M I = M::Identity(n, n);
    // Column-major vec: vec(J S) = (I (x) J) vec S, vec(S J^T) = (J (x) I) vec S.
    const M K = kron(I, J) + kron(J, I);
    Eigen::PartialPivLU<M> lu(K);
    diag.reciprocal_condition = static_cast<double>(lu.rcond());
    auto solve = [&](const M& rhs) {
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v = lu.solve(-Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>(rhs.data(), n * n));
      return M(Eigen::Map<M>(v.data(), n, n));
    };
    S = solve(A);
    S = (S + S.transpose()).eval() / Scalar(2);
    for (; diag.refinement_steps < 2; ++diag.refinement_steps) {
      const M R = lyapunov_residual(J, A, S);
      if (static_cast<double>(inf_norm(R)) <= diag.tolerance) break;
      M dS = solve(R);
      S += (dS + dS.transpose()) / Scalar(2);
    }
  } else {
    const CM& T = schur.matrixT();
    const CM& U = schur.matrixU();
    auto solve = [&](const M& rhs) {
      CM F = U.adjoint() * rhs.template cast<C>() * U;
      CM Y = detail::triangular_lyapunov<Scalar>(T, F);
      return M((U * Y * U.adjoint()).real());
    };
    S = solve(A);
    S = (S + S.transpose()).eval() / Scalar(2);
    for (; diag.refinement_steps < 2; ++diag.refinement_steps) {
      const M R = lyapunov_residual(J, A, S);
      if (static_cast<double>(inf_norm(R)) <= diag.tolerance) break;
      M dS = solve(R);
      S += (dS + dS.transpose()) / Scalar(2);
    }
    diag.reciprocal_condition = std::abs(static_cast<double>(abscissa)) /
                                std::max(1e-300, static_cast<double>(T.cwiseAbs().rowwise().sum().maxCoeff()));
  }
  diag.residual = static_cast<double>(inf_norm(lyapunov_residual(J, A, S)));
  diag.ill_conditioned = diag.reciprocal_condition < 1e-12;
  if (diagnostics) *diagnostics = diag;
  return S;
}

/// S(idx): rows and columns of `s` listed in `idx`.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> principal_submatrix(
    const Eigen::MatrixBase<Derived>& s, const IndexSet& idx) {
  return s(idx.indices(), idx.indices());
}

/// log det S(idx) via Cholesky; 0 for the empty set. Throws
/// NotPositiveDefiniteError naming `idx` when S(idx) is not SPD.
template <typename Derived>
typename Derived::Scalar principal_logdet(const Eigen::MatrixBase<Derived>& s, const IndexSet& idx) {
  using Scalar = typename Derived::Scalar;
  if (idx.empty()) return Scalar(0);
  if (idx.max_index() >= s.rows() || s.rows() != s.cols())
    throw InvalidArgument("principal_logdet: index set " + idx.to_string() + " out of range");
  Eigen::LLT<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> llt(principal_submatrix(s, idx));
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefiniteError("principal submatrix " + idx.to_string() + " is not positive definite");
  const auto diag = llt.matrixLLT().diagonal();
  Scalar out(0);
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (!(diag[i] > Scalar(0)))
      throw NotPositiveDefiniteError("principal submatrix " + idx.to_string() + " is not positive definite");
    out += Scalar(2) * std::log(diag[i]);
  }
  return out;
}

}  // namespace netmeasure
