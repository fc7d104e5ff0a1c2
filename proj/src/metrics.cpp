#include "svdmds/metrics.hpp"

#include <algorithm>
#include <numeric>

namespace svdmds {

void BoundParams::validate() const {
  require(n > 0 && std::isfinite(n), "BoundParams: n must be positive");
  require(m > 0 && std::isfinite(m), "BoundParams: m must be positive");
  require(m <= n * n, "BoundParams: m cannot exceed n^2");
  require(r > 0 && std::isfinite(r), "BoundParams: r must be positive");
  require(d > 0 && std::isfinite(d), "BoundParams: d must be positive");
  require(zeta >= 0 && std::isfinite(zeta), "BoundParams: zeta must be nonnegative");
  require(nu >= 0 && std::isfinite(nu), "BoundParams: nu must be nonnegative");
  require(c_const > 0 && std::isfinite(c_const), "BoundParams: constant must be positive");
}

std::vector<std::string> BoundParams::warnings() const {
  std::vector<std::string> out;
  if (m < n * std::log(n)) out.emplace_back("m < n log n: expectation bound hypothesis violated");
  if (r * n < 512.0 * std::log(2.0))
    out.emplace_back("r n < 512 log 2: minimax bound hypothesis violated");
  return out;
}

double expectation_bound(const BoundParams& bp) {
  bp.validate();
  return bp.c_const * std::sqrt(bp.r * bp.n / bp.m) * (bp.zeta + bp.nu);
}

double tail_bound(double t, const BoundParams& bp) {
  bp.validate();
  require(t >= 0 && std::isfinite(t), "tail_bound: t must be nonnegative");
  const double s = bp.zeta + bp.nu;
  require(s > 0, "tail_bound: zeta + nu must be positive");
  const double quadratic = bp.m * t * t / (bp.n * bp.n * bp.n * bp.r * s * s);
  const double linear = bp.m * t / (bp.n * bp.n * std::sqrt(bp.r) * s);
  return bp.n * std::exp(-bp.c_const * std::min(quadratic, linear));
}

double tail_probability(double t, const BoundParams& bp) {
  return std::min(1.0, tail_bound(t, bp));
}

double tail_branch_point(const BoundParams& bp) {
  bp.validate();
  return bp.n * std::sqrt(bp.r) * (bp.zeta + bp.nu);
}

double coordinate_bound(const BoundParams& bp) {
  bp.validate();
  return bp.c_const * std::sqrt(bp.d * bp.n / bp.m) * (bp.zeta + bp.nu);
}

double minimax_lower_bound(const BoundParams& bp) {
  bp.validate();
  return bp.n * bp.nu / 64.0 * std::sqrt(bp.r * bp.n / bp.m);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), "fit_line: x and y lengths differ");
  require(x.size() >= 3, "fit_line: need at least 3 points");
  const double k = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / k;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / k;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  require(sxx > 0, "fit_line: x values are degenerate");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

double fit_rate(std::span<const double> log_x, std::span<const double> log_y) {
  require(log_x.size() >= 3, "fit_rate: need at least 3 points");
  for (std::size_t i = 1; i < log_x.size(); ++i)
    require(log_x[i] > log_x[i - 1], "fit_rate: x must be strictly increasing");
  return fit_line(log_x, log_y).slope;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, "spearman: need two equal-length samples");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double k = static_cast<double>(rx.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / k;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / k;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  require(sxx > 0 && syy > 0, "spearman: constant sample");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace svdmds
