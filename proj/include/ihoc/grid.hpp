#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ihoc {

struct GridError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Strictly increasing time nodes on [0, t_max].
struct Grid {
  std::vector<double> nodes;
  double tail_tol = 1e-10;

  std::size_t size() const { return nodes.size(); }
  double t_max() const { return nodes.empty() ? 0.0 : nodes.back(); }

  void validate() const {
    if (nodes.size() < 2) throw GridError("grid needs at least 2 nodes");
    if (nodes.front() < 0.0) throw GridError("grid starts before 0");
    for (std::size_t i = 1; i < nodes.size(); ++i)
      if (!(nodes[i] > nodes[i - 1])) throw GridError("grid nodes not strictly increasing");
  }
};

// Default grid: geometric refinement near 0, uniform body.
inline Grid make_default_grid(double t_max = 60.0, std::size_t n = 4096) {
  if (!(t_max > 0.0) || n < 16) throw GridError("bad grid parameters");
  Grid g;
  g.nodes.reserve(n);
  std::size_t n_geo = n / 8;
  double t_join = 0.02 * t_max;
  double t_first = 1e-7 * t_max;
  g.nodes.push_back(0.0);
  double r = std::pow(t_join / t_first, 1.0 / double(n_geo - 1));
  double t = t_first;
  for (std::size_t i = 0; i < n_geo; ++i) {
    g.nodes.push_back(t);
    t *= r;
  }
  std::size_t n_body = n - g.nodes.size();
  double h = (t_max - t_join) / double(n_body);
  for (std::size_t i = 1; i <= n_body; ++i) g.nodes.push_back(t_join + h * double(i));
  g.nodes.back() = t_max;
  g.validate();
  return g;
}

inline Grid make_uniform_grid(double t_max, std::size_t n) {
  Grid g;
  g.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.nodes[i] = t_max * double(i) / double(n - 1);
  return g;
}

// Vector-valued function sampled on a grid, node-major storage.
struct SampledFn {
  Grid grid;
  std::size_t dim = 1;
  std::vector<double> values;                          // size() * dim
  std::optional<std::vector<double>> derivatives;      // optional, same layout

  std::size_t size() const { return grid.size(); }

  double value(std::size_t node, std::size_t c = 0) const { return values[node * dim + c]; }
  double deriv(std::size_t node, std::size_t c = 0) const { return (*derivatives)[node * dim + c]; }

  void validate() const {
    grid.validate();
    if (dim == 0) throw GridError("SampledFn dim must be positive");
    if (values.size() != grid.size() * dim) throw GridError("SampledFn value count mismatch");
    if (derivatives && derivatives->size() != values.size())
      throw GridError("SampledFn derivative count mismatch");
  }

  // Piecewise-linear evaluation, constant extrapolation outside the grid.
  double eval(double t, std::size_t c = 0) const {
    const auto& ts = grid.nodes;
    if (t <= ts.front()) return value(0, c);
    if (t >= ts.back()) return value(ts.size() - 1, c);
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    std::size_t i = std::size_t(it - ts.begin()) - 1;
    double w = (t - ts[i]) / (ts[i + 1] - ts[i]);
    return (1.0 - w) * value(i, c) + w * value(i + 1, c);
  }

  static SampledFn from_function(const Grid& g, std::size_t dim,
                                 const std::function<std::vector<double>(double)>& f,
                                 const std::function<std::vector<double>(double)>& df = nullptr) {
    SampledFn s;
    s.grid = g;
    s.dim = dim;
    s.values.resize(g.size() * dim);
    if (df) s.derivatives = std::vector<double>(g.size() * dim);
    for (std::size_t i = 0; i < g.size(); ++i) {
      auto v = f(g.nodes[i]);
      for (std::size_t c = 0; c < dim; ++c) s.values[i * dim + c] = v[c];
      if (df) {
        auto d = df(g.nodes[i]);
        for (std::size_t c = 0; c < dim; ++c) (*s.derivatives)[i * dim + c] = d[c];
      }
    }
    return s;
  }

  static SampledFn scalar(const Grid& g, const std::function<double(double)>& f,
                          const std::function<double(double)>& df = nullptr) {
    SampledFn s;
    s.grid = g;
    s.dim = 1;
    s.values.resize(g.size());
    if (df) s.derivatives = std::vector<double>(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      s.values[i] = f(g.nodes[i]);
      if (df) (*s.derivatives)[i] = df(g.nodes[i]);
    }
    return s;
  }
};

// 4th-order finite differences of grid samples (used when no derivative
// samples are supplied; 2nd order falls short of the residual tolerances).
inline std::vector<double> finite_difference(const Grid& g, const std::vector<double>& v,
                                             std::size_t dim) {
  const auto& t = g.nodes;
  std::size_t n = t.size();
  std::vector<double> d(v.size());
  auto fit_deriv = [&](std::size_t i0, double at, std::size_t c) {
    // 5-point polynomial derivative, nodes i0..i0+4
    double r = 0.0;
    for (std::size_t j = 0; j < 5; ++j) {
      double dsum = 0.0;
      for (std::size_t m = 0; m < 5; ++m) {
        if (m == j) continue;
        double prod = 1.0;
        for (std::size_t k = 0; k < 5; ++k) {
          if (k == j || k == m) continue;
          prod *= (at - t[i0 + k]) / (t[i0 + j] - t[i0 + k]);
        }
        dsum += prod / (t[i0 + j] - t[i0 + m]);
      }
      r += v[(i0 + j) * dim + c] * dsum;
    }
    return r;
  };
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t i0 = (i < 2) ? 0 : (i + 2 >= n ? n - 5 : i - 2);
    for (std::size_t c = 0; c < dim; ++c) d[i * dim + c] = fit_deriv(i0, t[i], c);
  }
  return d;
}

}  // namespace ihoc
