#pragma once

// Matrix form of one step: p(t+1) = A(t) p(t) + k'(t), with rows and columns
// indexed by directed edges. Dense storage; 2|E| stays small at the network
// sizes this library targets.

#include <span>
#include <string>
#include <vector>

#include "recip/model.hpp"

namespace recip {

/// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<double> multiply(std::span<const double> v) const;
  /// Row vector times matrix: v^T M.
  std::vector<double> left_multiply(std::span<const double> v) const;
  DenseMatrix operator*(const DenseMatrix& rhs) const;

  double max_row_sum() const;
  double max_abs_entry() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct DynamicsMatrix {
  DenseMatrix entries;
  std::vector<AgentId> active_set;

  std::size_t size() const noexcept { return entries.rows(); }
};

struct KindnessVector {
  std::vector<double> entries;
};

/// A(t) for the given acting set. Inactive agents get identity rows; acting
/// Floating agents keep their own-action weight on the diagonal; acting Fixed
/// agents do not.
DynamicsMatrix build_matrix(std::span<const AgentSpec> agents, const InteractionGraph& g,
                            std::span<const AgentId> active);
/// Synchronous matrix (every agent acts).
DynamicsMatrix build_matrix(std::span<const AgentSpec> agents, const InteractionGraph& g);

/// k'(t): (1 - r_i - r'_i) k_i on the edges of acting Fixed agents, else 0.
KindnessVector build_kindness_vector(std::span<const AgentSpec> agents, const InteractionGraph& g,
                                     std::span<const AgentId> active);
KindnessVector build_kindness_vector(std::span<const AgentSpec> agents, const InteractionGraph& g);

/// A p + k'.
ActionVector apply(const DynamicsMatrix& m, const ActionVector& p, const KindnessVector& k);

/// Raised when power iteration hits its cap; carries the last estimate.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& what, double estimate)
      : Error(ErrorKind::NoConvergence, what), estimate_(estimate) {}
  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

/// Dominant eigenvalue modulus of a non-negative square matrix by power
/// iteration from the all-ones vector. Iterates on A + I, whose Perron root
/// is rho(A) + 1 and which is aperiodic, so bipartite-type matrices such as
/// [[0,a],[b,0]] converge too.
double spectral_radius(const DenseMatrix& m, double tol = 1e-10, int max_iterations = 100'000);
double spectral_radius(const DynamicsMatrix& m, double tol = 1e-10,
                       int max_iterations = 100'000);

/// Solves (I - A) x = k' by Gaussian elimination with partial pivoting.
/// Throws SingularSystem for a (numerically) singular I - A, which is the
/// case when no acting Fixed agent pulls the row sums below one.
ActionVector solve_fixed_point(const DynamicsMatrix& m, const KindnessVector& k);

/// Dense solve of a x = b with partial pivoting; throws SingularSystem.
std::vector<double> solve_dense(DenseMatrix a, std::vector<double> b);

/// ||v A - v||_inf.
double left_eigen_residual(const DynamicsMatrix& m, std::span<const double> v);

/// A(first + count - 1) ... A(first + 1) A(first) for the schedule's acting sets.
DenseMatrix schedule_product(std::span<const AgentSpec> agents, const InteractionGraph& g,
                             const ActivationSchedule& schedule, TimeStep first, TimeStep count);

enum class LimitTheorem {
  AllFloatingNetwork,  // common limit, weighted kindness average
  MixedNetwork,        // limit solves (I - A) x = k'
  PairwiseOnly,        // no network theorem; two-agent results apply
  None,
};

std::string_view to_string(LimitTheorem t);

struct StructureReport {
  bool connected = false;
  bool odd_cycle = false;
  bool has_floating_slack = false;  // some Floating agent with r + r' < 1
  bool any_fixed = false;           // some Fixed agent with r + r' < 1
  bool all_rprime_positive = false;
  bool aperiodic = false;           // odd_cycle || has_floating_slack
  LimitTheorem verdict = LimitTheorem::None;
  std::string explanation;
};

StructureReport check_structure(std::span<const AgentSpec> agents, const InteractionGraph& g);

}  // namespace recip
