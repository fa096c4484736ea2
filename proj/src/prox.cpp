#include "pnpmri/prox.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "pnpmri/errors.hpp"

namespace pnpmri {

std::string InnerSpec::str() const {
  switch (kind) {
    case Kind::exact:
      return "exact";
    case Kind::cg:
      return "cg(" + std::to_string(iters) + ")";
    case Kind::gd:
      return "gd(" + std::to_string(iters) + ")";
  }
  return "?";
}

namespace {
constexpr std::size_t kDenseLimit = 4096;
}

struct DataProx::Impl {
  const ForwardModel& model;
  double c;  // sigma2 / eta (solver sigma2, not necessarily the model's)
  ComplexTensor ahy;
  bool have_y = false;
  Eigen::LLT<Eigen::MatrixXcd> llt;
  bool factored = false;

  Impl(const ForwardModel& m, double c_) : model(m), c(c_) {}

  // B v with B = A^H A + c I
  ComplexTensor normal_apply(const ComplexTensor& v) const {
    ComplexTensor w = model.apply_adjoint(model.apply(v));
    axpy(c, v, w);
    return w;
  }

  void factorize() {
    const std::size_t n = model.image_numel();
    if (n > kDenseLimit)
      throw ConfigError("DataProx: problem too large for the exact inner solver (" +
                        std::to_string(n) + " unknowns)");
    Eigen::MatrixXcd B(n, n);
    ComplexTensor e(model.image_shape());
    for (std::size_t j = 0; j < n; ++j) {
      std::fill(e.data.begin(), e.data.end(), cplx(0.0, 0.0));
      e.data[j] = 1.0;
      const ComplexTensor col = normal_apply(e);
      for (std::size_t i = 0; i < n; ++i) B(i, j) = col.data[i];
    }
    llt.compute(B);
    if (llt.info() != Eigen::Success) throw NumericError("DataProx: dense factorization failed");
    factored = true;
  }
};

DataProx::DataProx(const ForwardModel& model, double eta, double sigma2, InnerSpec spec)
    : eta_(eta), spec_(spec) {
  if (!(eta > 0.0)) throw ConfigError("DataProx: eta must be positive");
  if (!(sigma2 > 0.0)) throw ConfigError("DataProx: sigma2 must be positive");
  if (spec.kind != InnerSpec::Kind::exact && spec.iters < 1)
    throw ConfigError("DataProx: iterative inner solver needs iters >= 1");
  impl_ = std::make_unique<Impl>(model, sigma2 / eta);
}

DataProx::~DataProx() = default;
DataProx::DataProx(DataProx&&) noexcept = default;
DataProx& DataProx::operator=(DataProx&&) noexcept = default;

void DataProx::set_y(const ComplexTensor& y) {
  impl_->ahy = impl_->model.apply_adjoint(y);
  impl_->have_y = true;
}

ComplexTensor DataProx::apply(const ComplexTensor& z) const {
  if (!impl_->have_y) throw ConfigError("DataProx: set_y not called");
  const ForwardModel& model = impl_->model;
  if (z.shape != model.image_shape()) throw ShapeError("DataProx: z has wrong shape");
  const double c = impl_->c;
  ComplexTensor b = impl_->ahy;
  axpy(c, z, b);

  switch (spec_.kind) {
    case InnerSpec::Kind::exact: {
      if (!impl_->factored) impl_->factorize();
      const std::size_t n = b.size();
      Eigen::VectorXcd rhs(n);
      for (std::size_t i = 0; i < n; ++i) rhs(i) = b.data[i];
      Eigen::VectorXcd sol = impl_->llt.solve(rhs);
      ComplexTensor x(model.image_shape());
      for (std::size_t i = 0; i < n; ++i) x.data[i] = sol(i);
      return x;
    }
    case InnerSpec::Kind::cg: {
      ComplexTensor x = z;
      ComplexTensor r = b - impl_->normal_apply(x);
      ComplexTensor p = r;
      double rs = norm2(r);
      for (int it = 0; it < spec_.iters; ++it) {
        if (rs == 0.0) break;
        const ComplexTensor q = impl_->normal_apply(p);
        const double pq = std::real(dot(p, q));
        if (pq <= 0.0) break;  // rounding artifact; B is positive definite
        const double alpha = rs / pq;
        axpy(alpha, p, x);
        axpy(-alpha, q, r);
        const double rs_new = norm2(r);
        const double beta = rs_new / rs;
        p = lincomb(1.0, r, beta, p);
        rs = rs_new;
      }
      return x;
    }
    case InnerSpec::Kind::gd: {
      double step = spec_.step;
      if (step <= 0.0) {
        const double an = model.op_norm();
        step = 1.0 / (an * an + c);
      }
      ComplexTensor x = z;
      for (int it = 0; it < spec_.iters; ++it) {
        ComplexTensor g = impl_->normal_apply(x);
        g -= b;
        axpy(-step, g, x);
      }
      return x;
    }
  }
  throw ConfigError("DataProx: unknown inner kind");
}

ComplexTensor prox_data(const ForwardModel& model, const ComplexTensor& y, const ComplexTensor& z,
                        double eta, const InnerSpec& spec) {
  DataProx prox(model, eta, model.sigma2(), spec);
  prox.set_y(y);
  return prox.apply(z);
}

double prox_objective(const ForwardModel& model, const ComplexTensor& y, const ComplexTensor& z,
                      double eta, const ComplexTensor& x) {
  return model.data_fidelity(x, y) + 0.5 / eta * norm2(x - z);
}

}  // namespace pnpmri
