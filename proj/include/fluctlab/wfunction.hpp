#pragma once

// Conductance profiles W_k: strictly increasing cadlag functions of the form
// "affine slope plus finitely many positive jumps", extended periodically by
// W_k(u+1) = W_k(u) + P_k. Jumps model membranes: a jump inside a lattice
// cell inflates that cell's increment and suppresses the bond rate through it.

#include <span>
#include <string>
#include <vector>

#include "fluctlab/lattice.hpp"

namespace fluctlab {

struct WJump {
  double location;  // in [0,1)
  double size;      // > 0
};

class WProfile {
 public:
  WProfile() : slope_(1.0), period_increment_(1.0) {}
  WProfile(double slope, std::vector<WJump> jumps);

  // W(x) for any real x, right continuous, strictly increasing.
  double eval(double x) const;

  // W(1) - W(0) = slope + total jump mass.
  double period_increment() const { return period_increment_; }

  // W((cell+1)/n) - W(cell/n), cell in [0, n).
  double increment(int n, int cell) const;

  // All n cell increments of one period.
  std::vector<double> increments(int n) const;

  double slope() const { return slope_; }
  const std::vector<WJump>& jumps() const { return jumps_; }
  bool is_identity() const { return jumps_.empty() && slope_ == 1.0; }

 private:
  double slope_;
  std::vector<WJump> jumps_;  // sorted by location, locations unique
  double period_increment_;
};

class WFunction {
 public:
  WFunction() = default;
  explicit WFunction(std::vector<WProfile> axes) : axes_(std::move(axes)) {}

  static WFunction identity(int dim) {
    return WFunction(std::vector<WProfile>(static_cast<std::size_t>(dim)));
  }

  int dim() const { return static_cast<int>(axes_.size()); }
  const WProfile& axis(int k) const { return axes_.at(static_cast<std::size_t>(k)); }

  double eval(int k, double x) const { return axis(k).eval(x); }
  double period_increment(int k) const { return axis(k).period_increment(); }
  double increment(int k, int n, int cell) const { return axis(k).increment(n, cell); }

  // Separable W(x) = sum_k W_k(x_k).
  double eval_point(std::span<const double> x) const;

 private:
  std::vector<WProfile> axes_;
};

// N^{-(d-1)} sum_x g(x) [W_j((x_j+1)/N) - W_j(x_j/N)], the grid quadrature
// against the product measure d(x^j (x) W_j).
double w_quadrature(const WFunction& wf, int axis, const LatticeFunction& g);

}  // namespace fluctlab
