#include "normkit/core.hpp"

#include <sstream>

#include "normkit/spaces.hpp"

namespace normkit {

std::string Exponent::to_string() const {
  if (infinite_) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << value_;
  return os.str();
}

template <class Scalar>
NormSpec<Scalar> NormSpec<Scalar>::inner_product(const Mat<Scalar>& gram, double eps) {
  require(gram.rows() > 0 && gram.rows() == gram.cols(), "Gram matrix must be square and nonempty");
  const double scale = std::max(1.0, gram.norm());
  require((gram - gram.adjoint()).norm() <= eps * scale, "Gram matrix must be Hermitian");
  const Mat<Scalar> sym = (gram + gram.adjoint()) / 2.0;

  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> eig(sym, Eigen::EigenvaluesOnly);
  require(eig.info() == Eigen::Success, "Gram matrix eigen-decomposition failed");
  const double min_eig = eig.eigenvalues().minCoeff();
  require(min_eig > 0.0, "Gram matrix must be positive definite");

  Eigen::LLT<Mat<Scalar>> llt(sym);
  require(llt.info() == Eigen::Success, "Gram matrix must be positive definite");

  auto data = std::make_shared<GramData>();
  data->gram = sym;
  data->chol_upper = llt.matrixU();
  data->inverse = llt.solve(Mat<Scalar>::Identity(sym.rows(), sym.cols()));
  data->min_eig = min_eig;
  data->max_eig = eig.eigenvalues().maxCoeff();

  NormSpec s;
  s.kind_ = Kind::InnerProduct;
  s.gram_ = std::move(data);
  return s;
}

template <class Scalar>
double NormSpec<Scalar>::operator()(const Vec<Scalar>& v) const {
  switch (kind_) {
    case Kind::PNorm:
      return p_norm(v, exponent_);
    case Kind::InnerProduct:
      require(v.size() == gram_->gram.rows(), "norm: dimension does not match the Gram matrix");
      return (gram_->chol_upper * v).norm();
    case Kind::Custom:
      return (*custom_)(v);
  }
  return 0.0;
}

template <class Scalar>
std::optional<NormSpec<Scalar>> NormSpec<Scalar>::dual() const {
  switch (kind_) {
    case Kind::PNorm:
      return NormSpec::p(conjugate_exponent(exponent_));
    case Kind::InnerProduct:
      // sup |w^T v| over v^* G v <= 1 equals sqrt(w^* conj(G^{-1}) w).
      return NormSpec::inner_product(Mat<Scalar>(gram_->inverse.conjugate()));
    case Kind::Custom:
      return std::nullopt;
  }
  return std::nullopt;
}

template <class Scalar>
std::string NormSpec<Scalar>::describe() const {
  switch (kind_) {
    case Kind::PNorm:
      return "p=" + exponent_.to_string();
    case Kind::InnerProduct:
      return "gram(" + std::to_string(gram_->gram.rows()) + ")";
    case Kind::Custom:
      return name_;
  }
  return {};
}

template class NormSpec<double>;
template class NormSpec<Complex>;

}  // namespace normkit
