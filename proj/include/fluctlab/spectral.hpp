#pragma once

// Eigenstructure of -L_N and the discrete W-Sobolev ladder norms.
//
// For environments that are constant per axis the operator separates, and the
// d-dimensional eigenbasis is the tensor product of per-axis 1-D bases with
// eigenvalue sums. Otherwise a dense symmetric eigensolve is used (guarded by
// a size limit). Eigenvectors are orthonormal for <f,g>_N = N^{-d} sum f g,
// ordered by ascending eigenvalue with the first nonvanishing component made
// positive so that the enumeration is deterministic.

#include <Eigen/Dense>

#include "fluctlab/operators.hpp"

namespace fluctlab {

struct AxisSpectrum {
  Eigen::VectorXd alpha;  // ascending eigenvalues of the unit-coefficient -T
  Eigen::MatrixXd v;      // columns: plain l2-orthonormal eigenvectors
};

// Dense eigendecomposition of the 1-D operator -d^N_x d^N_W at size n, a == 1.
AxisSpectrum axis_spectrum(const WProfile& profile, int n);

struct EigenBasis {
  int dim = 0;
  int n = 0;
  std::vector<double> alpha;  // ascending, alpha[0] = 0
  Eigen::MatrixXd vectors;    // size x K, orthonormal in <.,.>_N
  LatticePtr lat;

  int modes() const { return static_cast<int>(alpha.size()); }
  double lambda(int k) const { return 1.0 + alpha[static_cast<std::size_t>(k)]; }
  LatticeFunction mode(int k) const;
  // coefficient <f, phi_k>_N
  double coefficient(int k, const LatticeFunction& f) const;
};

// K smallest eigenpairs of -L_N.
EigenBasis eigendecompose(const LatticeOperator& op, int k_count);

// max_k ||-L phi_k - alpha_k phi_k||_N / max(1, alpha_k); used by tests.
double eigen_residual(const EigenBasis& basis, const LatticeOperator& op);

// Ladder norm ||f||_n^2 = sum_k <f,phi_k>^2 lambda_k^{2n} k^{2n} (k 1-based).
// Requires the basis to capture all but 1e-10 of ||f||^2.
double sobolev_norm(const LatticeFunction& f, int order, const EigenBasis& basis);

// Constant-coefficient operator lambda - sum_j a_j T_j with exact spectral
// solves through per-axis transforms; also the PCG preconditioner.
class ConstantCoefficientSolver {
 public:
  ConstantCoefficientSolver(const WFunction& wf, std::vector<double> coeff, LatticePtr lat);

  // u = (lambda - sum_j a_j T_j)^{-1} f, exact up to roundoff.
  LatticeFunction solve(double lambda, const LatticeFunction& f) const;

  // Mode representation helpers (plain l2 coefficients, axis-ordered).
  void to_modes(const LatticeFunction& f, std::vector<double>& modes) const;
  void from_modes(const std::vector<double>& modes, LatticeFunction& f) const;
  // Eigenvalue of -sum_j a_j T_j for the flattened mode index.
  double mode_eigenvalue(std::size_t flat_mode) const;
  double mode_eigenvalue_with(std::span<const double> coeff, std::size_t flat_mode) const;

  const std::vector<double>& coefficients() const { return coeff_; }
  LatticePtr lattice_ptr() const { return lat_; }

 private:
  LatticePtr lat_;
  std::vector<double> coeff_;
  std::vector<AxisSpectrum> axes_;
  void axis_contract(std::vector<double>& data, int axis, bool transpose) const;
};

}  // namespace fluctlab
