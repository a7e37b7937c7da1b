#pragma once

// Discrete torus T_N^d: row-major site indexing and precomputed periodic
// neighbor tables shared by operators and dynamics.

#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace fluctlab {

class Lattice {
 public:
  Lattice(int dim, int n) : dim_(dim), n_(n) {
    if (dim < 1) throw std::invalid_argument("lattice: dimension must be >= 1");
    if (n < 2) throw std::invalid_argument("lattice: size must be >= 2");
    size_ = 1;
    stride_.resize(dim);
    for (int j = 0; j < dim; ++j) {
      stride_[j] = size_;
      size_ *= static_cast<std::size_t>(n);
      if (size_ > (std::size_t{1} << 26))
        throw std::invalid_argument("lattice: N^d too large");
    }
    up_.resize(dim);
    down_.resize(dim);
    for (int j = 0; j < dim; ++j) {
      up_[j].resize(size_);
      down_[j].resize(size_);
    }
    for (std::size_t i = 0; i < size_; ++i) {
      for (int j = 0; j < dim; ++j) {
        const auto s = static_cast<std::ptrdiff_t>(stride_[j]);
        const auto base = static_cast<std::ptrdiff_t>(i);
        const int xj = coord(i, j);
        up_[j][i] = static_cast<std::size_t>(base + ((xj + 1 == n) ? s * (1 - n) : s));
        down_[j][i] = static_cast<std::size_t>(base - ((xj == 0) ? s * (1 - n) : s));
      }
    }
  }

  int dim() const { return dim_; }
  int n() const { return n_; }
  std::size_t size() const { return size_; }

  int coord(std::size_t site, int axis) const {
    return static_cast<int>((site / stride_[axis]) % static_cast<std::size_t>(n_));
  }

  std::size_t index(std::span<const int> x) const {
    std::size_t i = 0;
    for (int j = 0; j < dim_; ++j) {
      int c = x[j] % n_;
      if (c < 0) c += n_;
      i += static_cast<std::size_t>(c) * stride_[j];
    }
    return i;
  }

  std::vector<int> coords(std::size_t site) const {
    std::vector<int> x(dim_);
    for (int j = 0; j < dim_; ++j) x[j] = coord(site, j);
    return x;
  }

  std::size_t up(int axis, std::size_t site) const { return up_[axis][site]; }
  std::size_t down(int axis, std::size_t site) const { return down_[axis][site]; }

  // site shifted by k steps along axis (k may be negative or exceed N).
  std::size_t shifted(int axis, std::size_t site, int k) const {
    const int old_c = coord(site, axis);
    int xj = (old_c + k) % n_;
    if (xj < 0) xj += n_;
    const auto delta = static_cast<std::ptrdiff_t>(xj - old_c) *
                       static_cast<std::ptrdiff_t>(stride_[axis]);
    return static_cast<std::size_t>(static_cast<std::ptrdiff_t>(site) + delta);
  }

 private:
  int dim_;
  int n_;
  std::size_t size_;
  std::vector<std::size_t> stride_;
  std::vector<std::vector<std::size_t>> up_, down_;
};

using LatticePtr = std::shared_ptr<const Lattice>;

inline LatticePtr make_lattice(int dim, int n) {
  return std::make_shared<const Lattice>(dim, n);
}

// Real-valued function on the sites of T_N^d.
struct LatticeFunction {
  LatticePtr lat;
  std::vector<double> v;

  LatticeFunction() = default;
  explicit LatticeFunction(LatticePtr l, double fill = 0.0)
      : lat(std::move(l)), v(lat->size(), fill) {}

  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }
  std::size_t size() const { return v.size(); }
};

// Inner product on ell^2(m_N) normalized by N^{-d}.
inline double inner_product(const LatticeFunction& f, const LatticeFunction& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i];
  return s / static_cast<double>(f.size());
}

inline double norm_l2(const LatticeFunction& f) {
  return std::sqrt(inner_product(f, f));
}

}  // namespace fluctlab
