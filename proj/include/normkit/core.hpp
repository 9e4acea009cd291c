#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>

#include <Eigen/Dense>

namespace normkit {

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Complex = std::complex<double>;

template <class Scalar>
inline constexpr bool is_complex_v = !std::is_same_v<Scalar, typename Eigen::NumTraits<Scalar>::Real>;

/// Raised when an operation's precondition does not hold (bad exponent,
/// dimension mismatch, point inside the set, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an iterative solver exhausts its iteration cap. Carries the
/// best bracket found so far.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double lower, double upper)
      : std::runtime_error(what), lower_(lower), upper_(upper) {}
  double lower() const { return lower_; }
  double upper() const { return upper_; }

 private:
  double lower_;
  double upper_;
};

inline void require(bool condition, const char* message) {
  if (!condition) throw PreconditionError(message);
}

/// Exponent p in [1, inf]. Infinity is its own state, never a float sentinel.
class Exponent {
 public:
  explicit Exponent(double p) {
    if (std::isnan(p) || p < 1.0)
      throw PreconditionError("exponent p must satisfy p >= 1 (the unit ball is not convex otherwise)");
    if (std::isinf(p)) {
      infinite_ = true;
      value_ = 0.0;
    } else {
      value_ = p;
    }
  }

  static Exponent inf() {
    Exponent e(1.0);
    e.infinite_ = true;
    e.value_ = 0.0;
    return e;
  }

  bool is_inf() const { return infinite_; }

  /// Finite value; calling this on infinity is a logic error.
  double value() const {
    if (infinite_) throw std::logic_error("Exponent::value() on infinity");
    return value_;
  }

  /// 1/p with the convention 1/inf = 0.
  double reciprocal() const { return infinite_ ? 0.0 : 1.0 / value_; }

  bool operator==(const Exponent& o) const {
    return infinite_ == o.infinite_ && (infinite_ || value_ == o.value_);
  }
  bool operator!=(const Exponent& o) const { return !(*this == o); }
  bool operator<=(const Exponent& o) const {
    if (o.infinite_) return true;
    if (infinite_) return false;
    return value_ <= o.value_;
  }

  bool is(double p) const { return !infinite_ && value_ == p; }

  std::string to_string() const;

 private:
  bool infinite_ = false;
  double value_ = 1.0;
};

/// q with 1/p + 1/q = 1.
inline Exponent conjugate_exponent(Exponent p) {
  if (p.is_inf()) return Exponent(1.0);
  if (p.is(1.0)) return Exponent::inf();
  return Exponent(p.value() / (p.value() - 1.0));
}

struct Tolerances {
  double eps_exact = 1e-9;
  double eps_iter = 1e-7;
  int max_iter = 10000;

  void validate() const {
    require(eps_exact > 0.0 && eps_exact <= eps_iter, "tolerances must satisfy 0 < eps_exact <= eps_iter");
    require(max_iter >= 1, "max_iter must be at least 1");
  }
};

/// A bracket [lower, upper] for a quantity with no closed form. `exact`
/// means the two ends agree to eps_exact.
template <class Scalar = double>
struct CertifiedValue {
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;
  std::optional<Vec<Scalar>> witness;
  int iterations = 0;

  double value() const { return exact ? upper : 0.5 * (lower + upper); }

  static CertifiedValue exactly(double v, std::optional<Vec<Scalar>> w = std::nullopt) {
    return CertifiedValue{v, v, true, std::move(w), 0};
  }
};

/// Describes a norm on Scalar^n: a p-norm, an inner-product norm with a
/// Hermitian positive-definite Gram matrix, or an arbitrary evaluator.
template <class Scalar>
class NormSpec {
 public:
  enum class Kind { PNorm, InnerProduct, Custom };
  using Evaluator = std::function<double(const Vec<Scalar>&)>;

  static NormSpec p(Exponent e) {
    NormSpec s;
    s.kind_ = Kind::PNorm;
    s.exponent_ = e;
    return s;
  }
  static NormSpec p(double e) { return p(Exponent(e)); }
  static NormSpec inf() { return p(Exponent::inf()); }

  /// Throws PreconditionError unless `gram` is Hermitian positive definite.
  static NormSpec inner_product(const Mat<Scalar>& gram, double eps = 1e-9);

  static NormSpec custom(Evaluator f, std::string name = "custom") {
    NormSpec s;
    s.kind_ = Kind::Custom;
    s.custom_ = std::make_shared<const Evaluator>(std::move(f));
    s.name_ = std::move(name);
    return s;
  }

  Kind kind() const { return kind_; }
  bool is_p() const { return kind_ == Kind::PNorm; }
  bool is_p(double e) const { return kind_ == Kind::PNorm && exponent_.is(e); }
  bool is_inf() const { return kind_ == Kind::PNorm && exponent_.is_inf(); }
  bool is_inner_product() const { return kind_ == Kind::InnerProduct; }
  bool is_custom() const { return kind_ == Kind::Custom; }
  /// True for the p = 2 norm and for every Gram norm.
  bool is_euclidean_like() const { return is_p(2.0) || is_inner_product(); }

  Exponent exponent() const {
    if (kind_ != Kind::PNorm) throw std::logic_error("NormSpec::exponent() on a non-p norm");
    return exponent_;
  }
  const Mat<Scalar>& gram() const { return gram_data().gram; }
  /// Upper Cholesky factor R with gram = R^* R.
  const Mat<Scalar>& cholesky_upper() const { return gram_data().chol_upper; }
  const Mat<Scalar>& gram_inverse() const { return gram_data().inverse; }
  double gram_min_eigenvalue() const { return gram_data().min_eig; }
  double gram_max_eigenvalue() const { return gram_data().max_eig; }
  const std::string& name() const { return name_; }

  double operator()(const Vec<Scalar>& v) const;

  /// Norm of the dual space under the unconjugated pairing sum_j v_j w_j.
  /// Not available for custom evaluators.
  std::optional<NormSpec> dual() const;

  std::string describe() const;

 private:
  struct GramData {
    Mat<Scalar> gram;
    Mat<Scalar> chol_upper;
    Mat<Scalar> inverse;
    double min_eig = 0.0;
    double max_eig = 0.0;
  };
  const GramData& gram_data() const {
    if (!gram_) throw std::logic_error("NormSpec: not an inner-product norm");
    return *gram_;
  }

  Kind kind_ = Kind::PNorm;
  Exponent exponent_ = Exponent(2.0);
  std::shared_ptr<const GramData> gram_;
  std::shared_ptr<const Evaluator> custom_;
  std::string name_;
};

}  // namespace normkit
