#pragma once

// The lattice generator L_N = grad^N A^N grad^N_W as a bond-conductance
// stencil. Bond (x, x+e_j) carries conductance N^2 xi_{x,x+e_j} =
// N a_j(x) / [W_j((x_j+1)/N) - W_j(x_j/N)]. Row sums vanish, the operator is
// symmetric for the counting measure, and -L_N is positive semidefinite.

#include <functional>
#include <memory>
#include <vector>

#include "fluctlab/environment.hpp"
#include "fluctlab/lattice.hpp"
#include "fluctlab/wfunction.hpp"

namespace fluctlab {

// Continuum function on T^d = [0,1)^d.
using ContinuumFn = std::function<double(std::span<const double>)>;

class LatticeOperator {
 public:
  LatticeOperator() = default;
  LatticeOperator(LatticePtr lat, WFunction wf, EnvironmentField field);

  const Lattice& lattice() const { return *lat_; }
  LatticePtr lattice_ptr() const { return lat_; }
  int dim() const { return lat_->dim(); }
  int n() const { return lat_->n(); }
  const WFunction& w() const { return wf_; }
  const EnvironmentField& environment() const { return field_; }

  // N^2 xi_{x,x+e_j} for the bond leaving `site` along `axis`.
  double bond_conductance(int axis, std::size_t site) const {
    return cond_[static_cast<std::size_t>(axis)][site];
  }
  // The unscaled symmetric rate xi_{x,x+e_j}.
  double xi(int axis, std::size_t site) const {
    return cond_[static_cast<std::size_t>(axis)][site] /
           (static_cast<double>(lat_->n()) * static_cast<double>(lat_->n()));
  }
  double w_increment(int axis, int cell) const {
    return dw_[static_cast<std::size_t>(axis)][static_cast<std::size_t>(cell)];
  }

  // (L_N f)(x) via the jump-rate form
  //   sum_j N^2 [ xi_{x,x+e_j} (f(x+e_j)-f(x)) + xi_{x-e_j,x} (f(x-e_j)-f(x)) ].
  LatticeFunction apply_rate_form(const LatticeFunction& f) const;

  // (L_N f)(x) via the composed difference form sum_j d^N_{x_j}(a_j d^N_{W_j} f),
  // with the divergence taken backward so the two forms agree identically.
  LatticeFunction apply_difference_form(const LatticeFunction& f) const;

  // Canonical application (rate form).
  LatticeFunction apply(const LatticeFunction& f) const { return apply_rate_form(f); }

  // Per-axis piece L^j_N f.
  LatticeFunction apply_axis(int axis, const LatticeFunction& f) const;

  // W-gradient on bonds: (d^N_{W_j} f)(x) = [f(x+e_j)-f(x)] / DW_j(x_j).
  double w_gradient(int axis, std::size_t site, const LatticeFunction& f) const;

  // N^{1-d} sum_j sum_x a_j (d^N_{W_j} f)^2 DW_j  (equals <f, -L f>_N).
  double w_gradient_energy(const LatticeFunction& f) const;

 private:
  LatticePtr lat_;
  WFunction wf_;
  EnvironmentField field_;
  std::vector<std::vector<double>> cond_;  // cond_[j][site] = N^2 xi
  std::vector<std::vector<double>> dw_;    // dw_[j][cell]
};

// Build the operator for consistent (wf, field); throws on dimension mismatch.
LatticeOperator assemble(const WFunction& wf, const EnvironmentField& field);

// Per-axis bond conductances N^2 xi_{x,x+e_j}; shared by operator assembly
// and the particle/walk dynamics.
std::vector<std::vector<double>> bond_conductances(const WFunction& wf,
                                                   const EnvironmentField& field,
                                                   const Lattice& lat);

// Restriction of a continuum function u(x/N) to the grid.
template <typename F>
LatticeFunction restrict_to_lattice(const F& fn, const LatticePtr& lat) {
  LatticeFunction g(lat);
  const int d = lat->dim();
  const double inv_n = 1.0 / lat->n();
  std::vector<double> u(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < lat->size(); ++i) {
    for (int j = 0; j < d; ++j) u[static_cast<std::size_t>(j)] = lat->coord(i, j) * inv_n;
    g[i] = fn(std::span<const double>(u));
  }
  return g;
}

}  // namespace fluctlab
