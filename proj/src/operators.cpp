#include "fluctlab/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace fluctlab {

LatticeOperator::LatticeOperator(LatticePtr lat, WFunction wf, EnvironmentField field)
    : lat_(std::move(lat)), wf_(std::move(wf)), field_(std::move(field)) {
  const int d = lat_->dim();
  const int n = lat_->n();
  if (wf_.dim() != d)
    throw std::invalid_argument("operator: W profile dimension mismatch");
  if (field_.dim != d || field_.n != n)
    throw std::invalid_argument("operator: environment field dimension mismatch");

  dw_.resize(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) dw_[static_cast<std::size_t>(j)] = wf_.axis(j).increments(n);
  cond_ = bond_conductances(wf_, field_, *lat_);
}

std::vector<std::vector<double>> bond_conductances(const WFunction& wf,
                                                   const EnvironmentField& field,
                                                   const Lattice& lat) {
  const int d = lat.dim();
  const int n = lat.n();
  if (wf.dim() != d || field.dim != d || field.n != n)
    throw std::invalid_argument("bond_conductances: dimension mismatch");
  std::vector<std::vector<double>> cond(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    const auto dw = wf.axis(j).increments(n);
    auto& cj = cond[static_cast<std::size_t>(j)];
    cj.resize(lat.size());
    const auto& aj = field.a[static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < lat.size(); ++i) {
      const double dwj = dw[static_cast<std::size_t>(lat.coord(i, j))];
      // N^2 * xi = N^2 * a_j(x) / (N * DW) = N a_j(x) / DW
      cj[i] = static_cast<double>(n) * aj[i] / dwj;
    }
  }
  return cond;
}

LatticeOperator assemble(const WFunction& wf, const EnvironmentField& field) {
  return LatticeOperator(make_lattice(field.dim, field.n), wf, field);
}

LatticeFunction LatticeOperator::apply_rate_form(const LatticeFunction& f) const {
  LatticeFunction out(lat_);
  const int d = lat_->dim();
  const double n2 = static_cast<double>(lat_->n()) * static_cast<double>(lat_->n());
  for (std::size_t i = 0; i < lat_->size(); ++i) {
    double acc = 0.0;
    for (int j = 0; j < d; ++j) {
      const std::size_t u = lat_->up(j, i);
      const std::size_t dn = lat_->down(j, i);
      const double xi_fwd = cond_[static_cast<std::size_t>(j)][i] / n2;
      const double xi_bwd = cond_[static_cast<std::size_t>(j)][dn] / n2;
      acc += n2 * (xi_fwd * (f[u] - f[i]) + xi_bwd * (f[dn] - f[i]));
    }
    out[i] = acc;
  }
  return out;
}

LatticeFunction LatticeOperator::apply_difference_form(const LatticeFunction& f) const {
  LatticeFunction out(lat_);
  const int d = lat_->dim();
  const double nn = static_cast<double>(lat_->n());
  // flux g_j(x) = a_j(x) * (d^N_{W_j} f)(x) on the bond (x, x+e_j)
  for (std::size_t i = 0; i < lat_->size(); ++i) out[i] = 0.0;
  std::vector<double> flux(lat_->size());
  for (int j = 0; j < d; ++j) {
    const auto& aj = field_.a[static_cast<std::size_t>(j)];
    const auto& dwj = dw_[static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < lat_->size(); ++i) {
      const double grad =
          (f[lat_->up(j, i)] - f[i]) / dwj[static_cast<std::size_t>(lat_->coord(i, j))];
      flux[i] = aj[i] * grad;
    }
    for (std::size_t i = 0; i < lat_->size(); ++i)
      out[i] += nn * (flux[i] - flux[lat_->down(j, i)]);
  }
  return out;
}

LatticeFunction LatticeOperator::apply_axis(int axis, const LatticeFunction& f) const {
  LatticeFunction out(lat_);
  const double n2 = static_cast<double>(lat_->n()) * static_cast<double>(lat_->n());
  const auto& cj = cond_[static_cast<std::size_t>(axis)];
  for (std::size_t i = 0; i < lat_->size(); ++i) {
    const std::size_t u = lat_->up(axis, i);
    const std::size_t dn = lat_->down(axis, i);
    const double xi_fwd = cj[i] / n2;
    const double xi_bwd = cj[dn] / n2;
    out[i] = n2 * (xi_fwd * (f[u] - f[i]) + xi_bwd * (f[dn] - f[i]));
  }
  return out;
}

double LatticeOperator::w_gradient(int axis, std::size_t site, const LatticeFunction& f) const {
  const double dwj =
      dw_[static_cast<std::size_t>(axis)][static_cast<std::size_t>(lat_->coord(site, axis))];
  return (f[lat_->up(axis, site)] - f[site]) / dwj;
}

double LatticeOperator::w_gradient_energy(const LatticeFunction& f) const {
  const int d = lat_->dim();
  double total = 0.0;
  for (int j = 0; j < d; ++j) {
    const auto& aj = field_.a[static_cast<std::size_t>(j)];
    const auto& dwj = dw_[static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < lat_->size(); ++i) {
      const double dw = dwj[static_cast<std::size_t>(lat_->coord(i, j))];
      const double grad = (f[lat_->up(j, i)] - f[i]) / dw;
      total += aj[i] * grad * grad * dw;
    }
  }
  return total * std::pow(static_cast<double>(lat_->n()), 1 - d);
}

}  // namespace fluctlab
