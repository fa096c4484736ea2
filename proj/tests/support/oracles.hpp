#pragma once

#include <Eigen/Dense>
#include <functional>

#include "pnpmri/forward_model.hpp"
#include "pnpmri/phantom.hpp"
#include "pnpmri/tensor.hpp"

// Test-only reference machinery, kept independent of the implementation paths
// it checks: dense operator materialization, a monotone-FISTA solver for the
// l1-analysis objective, subgradient optimality residuals, and closed-form
// Gaussian integrals for the scalar soft-thresholding MSE.
namespace oracles {

using pnpmri::ComplexTensor;
using pnpmri::ForwardModel;
using pnpmri::Shape;
using pnpmri::cplx;

Eigen::VectorXcd to_eigen(const ComplexTensor& t);
ComplexTensor from_eigen(const Eigen::VectorXcd& v, const Shape& shape);

/// Materializes a complex-linear operator column by column.
Eigen::MatrixXcd dense_matrix(const std::function<ComplexTensor(const ComplexTensor&)>& op,
                              const Shape& input_shape, std::size_t output_numel);

Eigen::MatrixXcd dense_forward(const ForwardModel& model);

/// Minimum-norm least-squares solution via a dense pseudoinverse solve.
ComplexTensor least_squares_dense(const ForwardModel& model, const ComplexTensor& y);

/// Random tensor with i.i.d. standard complex-normal entries.
ComplexTensor random_tensor(const Shape& shape, std::uint64_t seed);

/// Small acquisition model built from the harness generators.
ForwardModel make_test_model(std::size_t nx, std::size_t ny, std::size_t nt, std::size_t coils,
                             double R, double sigma2, std::uint64_t seed,
                             std::size_t acs_lines = 1);

/// l1-analysis objective 1/(2 sigma2)|y - A x|^2 + lambda |Psi x|_1 with the
/// orthonormal Haar transform.
double l1_objective(const ForwardModel& model, const ComplexTensor& y, double lambda, int levels,
                    const ComplexTensor& x);

struct MfistaResult {
  ComplexTensor x;
  double objective;
};

/// Monotone FISTA on the l1-analysis objective (orthonormal Haar); the
/// objective sequence is nonincreasing by construction.
MfistaResult mfista_l1(const ForwardModel& model, const ComplexTensor& y, double lambda,
                       int levels, int iters);

/// Max violation of the soft-thresholding subgradient conditions for
///   xstar = argmin lambda |Psi x|_1 + 1/(2 eta) |x - z|^2
/// in the orthonormal Haar coefficient domain.
double prox_l1_subgrad_residual(const ComplexTensor& z, const ComplexTensor& xstar, double lambda,
                                double eta, int levels);

/// Closed-form E|soft(x + n, c*sqrt(eta)) - x|^2 for the Bernoulli-Gaussian
/// prior (active component N(0,1)) and n ~ N(0, eta).
double bg_soft_mse(double rho, double eta, double c);

/// Closed-form effective-noise recursion using bg_soft_mse; returns eta_1..eta_iters.
std::vector<double> se_closed_form(double rho, double c, double sigma2, int M, int N, int iters);

}  // namespace oracles
