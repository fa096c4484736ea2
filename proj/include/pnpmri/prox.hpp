#pragma once

#include <memory>
#include <string>

#include "pnpmri/forward_model.hpp"
#include "pnpmri/tensor.hpp"

namespace pnpmri {

/// Inner solver for the data proximal map
///   h(z; eta) = argmin_x { 1/(2 sigma2) |y - A x|^2 + 1/(2 eta) |x - z|^2 }
///             = (A^H A + (sigma2/eta) I)^{-1} (A^H y + (sigma2/eta) z).
/// `exact` factorizes the normal matrix densely (small problems only);
/// `cg` / `gd` run exactly `iters` iterations warm-started from z.
struct InnerSpec {
  enum class Kind { exact, cg, gd };
  Kind kind = Kind::cg;
  int iters = 4;
  double step = 0.0;  // gd stepsize; 0 selects 1/(|A|^2 + sigma2/eta)

  static InnerSpec exact() { return {Kind::exact, 0, 0.0}; }
  static InnerSpec cg(int iters) { return {Kind::cg, iters, 0.0}; }
  static InnerSpec gd(int iters, double step = 0.0) { return {Kind::gd, iters, step}; }

  std::string str() const;
};

/// Reusable prox evaluator. sigma2 is passed explicitly because solvers treat
/// it as an algorithm parameter that may differ from the model's noise level.
/// The dense factorization (exact mode) is built once on first use; set_y
/// caches A^H y.
class DataProx {
 public:
  DataProx(const ForwardModel& model, double eta, double sigma2, InnerSpec spec);
  ~DataProx();
  DataProx(DataProx&&) noexcept;
  DataProx& operator=(DataProx&&) noexcept;

  void set_y(const ComplexTensor& y);
  ComplexTensor apply(const ComplexTensor& z) const;

  double eta() const { return eta_; }
  const InnerSpec& spec() const { return spec_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double eta_;
  InnerSpec spec_;
};

/// One-shot form using the model's own sigma2.
ComplexTensor prox_data(const ForwardModel& model, const ComplexTensor& y, const ComplexTensor& z,
                        double eta, const InnerSpec& spec);

/// Value of the prox objective 1/(2 sigma2)|y-Ax|^2 + 1/(2 eta)|x-z|^2,
/// with sigma2 taken from the model.
double prox_objective(const ForwardModel& model, const ComplexTensor& y, const ComplexTensor& z,
                      double eta, const ComplexTensor& x);

}  // namespace pnpmri
