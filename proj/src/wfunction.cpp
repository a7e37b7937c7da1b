#include "fluctlab/wfunction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fluctlab {

WProfile::WProfile(double slope, std::vector<WJump> jumps)
    : slope_(slope), jumps_(std::move(jumps)) {
  if (!(slope_ > 0.0))
    throw std::invalid_argument("w profile: slope must be > 0");
  std::sort(jumps_.begin(), jumps_.end(),
            [](const WJump& a, const WJump& b) { return a.location < b.location; });
  std::vector<WJump> merged;
  for (const auto& j : jumps_) {
    if (!(j.size > 0.0))
      throw std::invalid_argument("w profile: jump size must be > 0");
    if (!(j.location >= 0.0 && j.location < 1.0))
      throw std::invalid_argument("w profile: jump location must lie in [0,1)");
    if (!merged.empty() && merged.back().location == j.location)
      merged.back().size += j.size;
    else
      merged.push_back(j);
  }
  jumps_ = std::move(merged);
  period_increment_ = slope_;
  for (const auto& j : jumps_) period_increment_ += j.size;
}

double WProfile::eval(double x) const {
  const double k = std::floor(x);
  double frac = x - k;
  if (frac >= 1.0) frac = 0.0;  // guard against rounding at the period edge
  double val = slope_ * frac + k * period_increment_;
  for (const auto& j : jumps_) {
    if (j.location > frac) break;
    val += j.size;  // right continuity: jumps at locations <= frac included
  }
  return val;
}

double WProfile::increment(int n, int cell) const {
  if (n < 1) throw std::invalid_argument("w increment: N must be >= 1");
  if (cell < 0 || cell >= n) throw std::invalid_argument("w increment: cell out of range");
  return eval(static_cast<double>(cell + 1) / n) - eval(static_cast<double>(cell) / n);
}

std::vector<double> WProfile::increments(int n) const {
  std::vector<double> dw(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) dw[static_cast<std::size_t>(i)] = increment(n, i);
  return dw;
}

double WFunction::eval_point(std::span<const double> x) const {
  double s = 0.0;
  for (int k = 0; k < dim(); ++k) s += axes_[static_cast<std::size_t>(k)].eval(x[k]);
  return s;
}

double w_quadrature(const WFunction& wf, int axis, const LatticeFunction& g) {
  const Lattice& lat = *g.lat;
  if (axis < 0 || axis >= lat.dim())
    throw std::invalid_argument("w_quadrature: axis out of range");
  const int n = lat.n();
  const auto dw = wf.axis(axis).increments(n);
  double s = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i)
    s += g[i] * dw[static_cast<std::size_t>(lat.coord(i, axis))];
  // one power of N cancels against the axis measure dW_j
  return s * std::pow(static_cast<double>(n), -(lat.dim() - 1));
}

}  // namespace fluctlab
