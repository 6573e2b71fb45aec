#include "recip/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace recip {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<double> DenseMatrix::multiply(std::span<const double> v) const {
  if (v.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "matrix-vector product");
  std::vector<double> out(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) s += data_[r * cols_ + c] * v[c];
    out[r] = s;
  }
  return out;
}

std::vector<double> DenseMatrix::left_multiply(std::span<const double> v) const {
  if (v.size() != rows_) throw Error(ErrorKind::DimensionMismatch, "vector-matrix product");
  std::vector<double> out(cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out[c] += v[r] * data_[r * cols_ + c];
  }
  return out;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw Error(ErrorKind::DimensionMismatch, "matrix product");
  DenseMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = (*this)(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

double DenseMatrix::max_row_sum() const {
  double best = 0.0;
  for (std::size_t r = 0; r < rows_; ++r) {
    auto rw = row(r);
    double s = 0.0;
    for (double v : rw) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

double DenseMatrix::max_abs_entry() const {
  double best = 0.0;
  for (double v : data_) best = std::max(best, std::abs(v));
  return best;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<char> acting_mask(int n, std::span<const AgentId> active) {
  std::vector<char> acting(n, 0);
  for (AgentId a : active) {
    if (a < 0 || a >= n) {
      throw Error(ErrorKind::InvalidAgent, "active agent " + std::to_string(a) + " out of range");
    }
    acting[a] = 1;
  }
  return acting;
}

std::vector<AgentId> everyone(int n) {
  std::vector<AgentId> all(n);
  std::iota(all.begin(), all.end(), 0);
  return all;
}

}  // namespace

DynamicsMatrix build_matrix(std::span<const AgentSpec> agents, const InteractionGraph& g,
                            std::span<const AgentId> active) {
  validate_agents(agents, g);
  const auto acting = acting_mask(g.agent_count(), active);
  const std::size_t m = g.directed_edge_count();
  DynamicsMatrix out{DenseMatrix(m, m), {}};
  for (AgentId a = 0; a < g.agent_count(); ++a) {
    if (acting[a]) out.active_set.push_back(a);
  }

  for (std::size_t row = 0; row < m; ++row) {
    const auto [i, j] = g.edge_of(row);
    if (!acting[i]) {
      out.entries(row, row) = 1.0;
      continue;
    }
    const AgentSpec& a = agents[i];
    const double share = a.r_prime / g.degree(i);
    // Columns (l, i): everything agent i receives.
    for (std::size_t col : g.incoming(i)) out.entries(row, col) = share;
    out.entries(row, g.reverse_of(row)) = a.r + share;
    if (a.attitude == Attitude::Floating) out.entries(row, row) = a.self_weight();
  }
  return out;
}

DynamicsMatrix build_matrix(std::span<const AgentSpec> agents, const InteractionGraph& g) {
  return build_matrix(agents, g, everyone(g.agent_count()));
}

KindnessVector build_kindness_vector(std::span<const AgentSpec> agents, const InteractionGraph& g,
                                     std::span<const AgentId> active) {
  validate_agents(agents, g);
  const auto acting = acting_mask(g.agent_count(), active);
  KindnessVector k{std::vector<double>(g.directed_edge_count(), 0.0)};
  for (std::size_t e = 0; e < k.entries.size(); ++e) {
    const AgentId i = g.edge_of(e).from;
    if (acting[i] && agents[i].attitude == Attitude::Fixed) {
      k.entries[e] = agents[i].self_weight() * agents[i].kindness;
    }
  }
  return k;
}

KindnessVector build_kindness_vector(std::span<const AgentSpec> agents,
                                     const InteractionGraph& g) {
  return build_kindness_vector(agents, g, everyone(g.agent_count()));
}

ActionVector apply(const DynamicsMatrix& m, const ActionVector& p, const KindnessVector& k) {
  if (p.size() != m.size() || k.entries.size() != m.size()) {
    throw Error(ErrorKind::DimensionMismatch, "matrix, state and kindness vector sizes differ");
  }
  auto out = m.entries.multiply(p.values());
  for (std::size_t e = 0; e < out.size(); ++e) out[e] += k.entries[e];
  return ActionVector(std::move(out));
}

// ---------------------------------------------------------------------------

double spectral_radius(const DenseMatrix& m, double tol, int max_iterations) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "spectral radius needs a non-empty square matrix");
  }
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (double v : m.row(r)) {
      if (v < 0.0) throw Error(ErrorKind::InvalidArgument, "matrix has a negative entry");
    }
  }
  const std::size_t n = m.rows();
  std::vector<double> v(n, 1.0);
  // Reducible matrices may never close the bracket; accept a norm that has
  // stopped moving, but only after it has held still for a while.
  constexpr int kStallRun = 10;
  double previous = -1.0;
  double estimate = 0.0;
  int stalled = 0;
  for (int it = 0; it < max_iterations; ++it) {
    auto w = m.multiply(v);
    double norm = 0.0;
    double lower = std::numeric_limits<double>::infinity();
    double upper = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] += v[i];  // shifted operator A + I
      norm = std::max(norm, w[i]);
      if (v[i] > 0.0) {
        const double ratio = w[i] / v[i];
        lower = std::min(lower, ratio);
        upper = std::max(upper, ratio);
      }
    }
    estimate = norm - 1.0;
    // Collatz-Wielandt bounds bracket the Perron root when v > 0.
    if (upper - lower < tol) return 0.5 * (upper + lower) - 1.0;
    stalled = std::abs(norm - previous) < tol ? stalled + 1 : 0;
    if (stalled >= kStallRun) return estimate;
    previous = norm;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
  }
  throw NoConvergenceError("power iteration did not converge in " +
                               std::to_string(max_iterations) + " iterations (estimate " +
                               std::to_string(estimate) + ")",
                           estimate);
}

double spectral_radius(const DynamicsMatrix& m, double tol, int max_iterations) {
  return spectral_radius(m.entries, tol, max_iterations);
}

std::vector<double> solve_dense(DenseMatrix a, std::vector<double> b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "linear system is not square");
  }
  const double scale = std::max(a.max_abs_entry(), 1e-300);
  constexpr double kPivotFloor = 1e-12;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    if (std::abs(a(pivot, col)) <= kPivotFloor * scale) {
      throw Error(ErrorKind::SingularSystem,
                  "pivot " + std::to_string(col) + " vanishes; I - A is singular");
    }
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(col, c), a(pivot, c));
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      a(r, col) = 0.0;
      for (std::size_t c = col + 1; c < n; ++c) a(r, c) -= f * a(col, c);
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a(i, c) * x[c];
    x[i] = s / a(i, i);
  }
  return x;
}

ActionVector solve_fixed_point(const DynamicsMatrix& m, const KindnessVector& k) {
  const std::size_t n = m.size();
  if (k.entries.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "kindness vector does not match the matrix");
  }
  DenseMatrix system(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) system(r, c) = (r == c ? 1.0 : 0.0) - m.entries(r, c);
  }
  auto x = solve_dense(system, k.entries);

  // Residual gate on the original system.
  auto ax = system.multiply(x);
  double resid = 0.0;
  double knorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    resid = std::max(resid, std::abs(ax[i] - k.entries[i]));
    knorm = std::max(knorm, std::abs(k.entries[i]));
  }
  if (!(resid < 1e-9 * std::max(1.0, knorm))) {
    throw Error(ErrorKind::SingularSystem,
                "solution residual " + std::to_string(resid) + " exceeds the acceptance bound");
  }
  return ActionVector(std::move(x));
}

double left_eigen_residual(const DynamicsMatrix& m, std::span<const double> v) {
  auto va = m.entries.left_multiply(v);
  double d = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) d = std::max(d, std::abs(va[i] - v[i]));
  return d;
}

DenseMatrix schedule_product(std::span<const AgentSpec> agents, const InteractionGraph& g,
                             const ActivationSchedule& schedule, TimeStep first, TimeStep count) {
  DenseMatrix product = DenseMatrix::identity(g.directed_edge_count());
  for (TimeStep t = first; t < first + count; ++t) {
    const auto active = schedule.activations_at(t);
    product = build_matrix(agents, g, active).entries * product;
  }
  return product;
}

// ---------------------------------------------------------------------------

std::string_view to_string(LimitTheorem t) {
  switch (t) {
    case LimitTheorem::AllFloatingNetwork: return "all-floating network limit";
    case LimitTheorem::MixedNetwork: return "mixed network fixed point";
    case LimitTheorem::PairwiseOnly: return "pairwise results";
    case LimitTheorem::None: return "none";
  }
  return "none";
}

StructureReport check_structure(std::span<const AgentSpec> agents, const InteractionGraph& g) {
  validate_agents(agents, g);
  StructureReport rep;
  rep.connected = true;  // InteractionGraph::build rejects disconnected graphs
  rep.odd_cycle = has_odd_cycle(g);
  rep.all_rprime_positive = true;
  for (const auto& a : agents) {
    if (a.anchored()) rep.any_fixed = true;
    if (a.attitude == Attitude::Floating && a.self_weight() > 0.0) rep.has_floating_slack = true;
    if (!(a.r_prime > 0.0)) rep.all_rprime_positive = false;
  }
  rep.aperiodic = rep.odd_cycle || rep.has_floating_slack;

  if (rep.connected && rep.all_rprime_positive && rep.aperiodic) {
    rep.verdict = rep.any_fixed ? LimitTheorem::MixedNetwork : LimitTheorem::AllFloatingNetwork;
    rep.explanation = rep.any_fixed
                          ? "synchronous network theorem: limits solve (I - A) x = k'"
                          : "synchronous network theorem: common limit is the weighted "
                            "kindness average";
  } else if (g.agent_count() == 2) {
    rep.verdict = LimitTheorem::PairwiseOnly;
    rep.explanation = "network hypotheses fail; two-agent results apply";
  } else {
    rep.verdict = LimitTheorem::None;
    rep.explanation = !rep.all_rprime_positive
                          ? "some agent has r' = 0"
                          : "no odd cycle and no Floating agent with r + r' < 1";
  }
  return rep;
}

}  // namespace recip
