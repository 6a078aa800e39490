#pragma once

// Second adjacency eigenvalue of a regular Cayley multigraph.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Eigenvalues>

#include "taulab/cayley_graph.hpp"
#include "taulab/random.hpp"

namespace taulab {

struct SpectralReport {
  /// Largest adjacency eigenvalue on the complement of the constant vector.
  double lambda2 = 0;
  /// Smallest adjacency eigenvalue.
  double lambda_min = 0;
  /// k_reg - lambda2.
  double gap = 0;
  std::size_t iterations = 0;
  /// Residual estimate |A x - lambda2 x| for the Ritz vector x.
  double residual = 0;
  bool converged = false;
  /// Dense-eigensolver value, filled in for graphs with <= kDenseLimit vertices.
  std::optional<double> dense_lambda2;
  std::optional<double> dense_lambda_min;

  double normalized_gap(std::size_t k) const { return gap / static_cast<double>(k); }
};

inline constexpr std::size_t kDenseLimit = 512;

/// y = A x with multiplicities.
inline void adjacency_apply(const CayleyGraph& g, const std::vector<double>& x, std::vector<double>& y) {
  const std::size_t n = g.vertex_count();
  for (std::uint32_t u = 0; u < n; ++u) {
    double s = 0;
    for (const std::uint32_t v : g.neighbors(u)) s += x[v];
    y[u] = s;
  }
}

/// Full spectrum, ascending, by dense symmetric decomposition.
inline std::vector<double> dense_spectrum(const CayleyGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (std::uint32_t u = 0; u < g.vertex_count(); ++u)
    for (const std::uint32_t v : g.neighbors(u)) a(u, v) += 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

/// Lanczos iteration of the adjacency operator restricted to the orthogonal
/// complement of the all-ones vector (eigenvalue k_reg). Stops when both
/// extreme Ritz residuals drop below tol, the Krylov space is exhausted, or
/// after max_iter steps (converged = false; best estimates are reported).
/// lambda2 is the largest signed eigenvalue there, which is what the
/// gap refers to even when |lambda_min| exceeds it.
inline SpectralReport spectral_gap(const CayleyGraph& g, double tol = 1e-8, std::size_t max_iter = 2000) {
  const std::size_t n = g.vertex_count();
  if (n < 2) throw Error("spectral_gap: graph needs at least two vertices");
  const double k = static_cast<double>(g.k_reg());

  auto deflate = [&](std::vector<double>& x) {
    double mean = 0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    for (double& v : x) v -= mean;
  };
  auto norm2 = [](const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
  };

  std::vector<double> v(n), v_prev(n, 0.0), w(n);
  SplitMix64 rng(0x1a2c05ULL);
  for (double& x : v) x = static_cast<double>(rng.next() >> 11) * 0x1.0p-53 - 0.5;
  deflate(v);
  double nv = norm2(v);
  for (double& x : v) x /= nv;

  std::vector<double> alpha, beta;  // beta[j] couples v_j and v_{j+1}
  SpectralReport rep;
  const std::size_t limit = std::min(max_iter, n - 1);
  double beta_prev = 0;
  auto ritz = [&] {
    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::VectorXd diag(m), sub(std::max<Eigen::Index>(m - 1, 0));
    for (Eigen::Index i = 0; i < m; ++i) diag(i) = alpha[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 0; i + 1 < m; ++i) sub(i) = beta[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const auto& vals = tri.eigenvalues();
    const auto& vecs = tri.eigenvectors();
    const double b = beta.size() == alpha.size() ? beta.back() : 0.0;
    rep.lambda2 = vals(m - 1);
    rep.lambda_min = vals(0);
    rep.residual = std::fabs(b * vecs(m - 1, m - 1));
    const double res_min = std::fabs(b * vecs(m - 1, 0));
    rep.converged = rep.residual < tol && res_min < tol;
  };

  for (std::size_t j = 0; j < limit; ++j) {
    double a = 0;
    for (std::uint32_t u = 0; u < n; ++u) {
      double s = 0;
      for (const std::uint32_t x : g.neighbors(u)) s += v[x];
      s -= beta_prev * v_prev[u];
      w[u] = s;
      a += s * v[u];
    }
    double mean = 0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] -= a * v[i];
      mean += w[i];
    }
    mean /= static_cast<double>(n);
    double bb = 0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] -= mean;
      bb += w[i] * w[i];
    }
    alpha.push_back(a);
    const double b = std::sqrt(bb);
    beta.push_back(b);
    rep.iterations = j + 1;
    const bool exhausted = b <= 1e-12 * k;
    if (exhausted || (j + 1) % 8 == 0 || j + 1 == limit) {
      ritz();
      if (exhausted) {
        rep.residual = 0;
        rep.converged = true;
      }
      if (rep.converged) break;
    }
    v_prev.swap(v);
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / b;
    beta_prev = b;
  }
  rep.gap = k - rep.lambda2;

  if (n <= kDenseLimit) {
    const auto eig = dense_spectrum(g);
    rep.dense_lambda2 = eig[n - 2];
    rep.dense_lambda_min = eig[0];
  }
  return rep;
}

}  // namespace taulab
