// Neumann-Laplacian cosine spectral discretisation of [0, pi]^dim.
//
// Fields are R^3-valued. Spectral coefficients are stored mode-major,
// component-minor; collocation values are stored point-major with the first
// axis slowest. Nonlinear products are formed at cell-centred collocation
// points, x_q = (q + 1/2) pi / Q, whose midpoint rule is exact for cos(mx)
// with m < 2Q.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace llb {

struct ModeIndex {
  int k1 = 0;
  int k2 = 0;
  bool operator==(const ModeIndex&) const = default;
};

template <typename Scalar>
class BasicSpectralGrid {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasicSpectralGrid(int dim, int modes_per_dim, int colloc_per_dim)
      : dim_(dim), n_(modes_per_dim), q_(colloc_per_dim) {
    if (dim != 1 && dim != 2) {
      throw std::invalid_argument("grid dimension must be 1 or 2, got " +
                                  std::to_string(dim));
    }
    if (modes_per_dim < 1) {
      throw std::invalid_argument("modes_per_dim must be >= 1");
    }
    if (colloc_per_dim < 2 * modes_per_dim) {
      throw std::invalid_argument(
          "colloc_per_dim must be >= 2 * modes_per_dim (got " +
          std::to_string(colloc_per_dim) + " < " +
          std::to_string(2 * modes_per_dim) + ")");
    }
    const Scalar pi = std::numbers::pi_v<Scalar>;
    weight1d_ = pi / Scalar(q_);
    points_.resize(q_);
    for (int q = 0; q < q_; ++q) points_(q) = (Scalar(q) + Scalar(0.5)) * weight1d_;

    basis_.resize(q_, n_);
    dbasis_.resize(q_, n_);
    for (int k = 0; k < n_; ++k) {
      const Scalar c = k == 0 ? std::sqrt(Scalar(1) / pi) : std::sqrt(Scalar(2) / pi);
      for (int q = 0; q < q_; ++q) {
        basis_(q, k) = c * std::cos(Scalar(k) * points_(q));
        dbasis_(q, k) = -c * Scalar(k) * std::sin(Scalar(k) * points_(q));
      }
    }

    if (dim_ == 1) {
      for (int k = 0; k < n_; ++k) modes_.push_back({k, 0});
    } else {
      for (int k1 = 0; k1 < n_; ++k1)
        for (int k2 = 0; k2 < n_; ++k2) modes_.push_back({k1, k2});
      std::stable_sort(modes_.begin(), modes_.end(),
                       [](const ModeIndex& a, const ModeIndex& b) {
                         return a.k1 * a.k1 + a.k2 * a.k2 < b.k1 * b.k1 + b.k2 * b.k2;
                       });
    }
    eigenvalues_.resize(static_cast<Eigen::Index>(modes_.size()));
    tensor_slot_.resize(modes_.size());
    for (std::size_t i = 0; i < modes_.size(); ++i) {
      const auto& m = modes_[i];
      eigenvalues_(static_cast<Eigen::Index>(i)) = Scalar(m.k1 * m.k1 + m.k2 * m.k2);
      tensor_slot_[i] = m.k1 * n_ + m.k2;
    }
  }

  int dim() const { return dim_; }
  int modes_per_dim() const { return n_; }
  int colloc_per_dim() const { return q_; }
  Eigen::Index num_modes() const { return static_cast<Eigen::Index>(modes_.size()); }
  Eigen::Index num_points() const { return dim_ == 1 ? q_ : Eigen::Index(q_) * q_; }

  const std::vector<ModeIndex>& modes() const { return modes_; }
  const Vector& eigenvalues() const { return eigenvalues_; }
  /// Cell-centred collocation abscissae along one axis.
  const Vector& points() const { return points_; }
  /// e_k(x_q), Q x n.
  const Matrix& basis() const { return basis_; }
  /// d/dx e_k(x_q), Q x n.
  const Matrix& dbasis() const { return dbasis_; }
  Scalar quadrature_weight() const { return dim_ == 1 ? weight1d_ : weight1d_ * weight1d_; }
  Scalar domain_measure() const {
    const Scalar pi = std::numbers::pi_v<Scalar>;
    return dim_ == 1 ? pi : pi * pi;
  }

  /// Row of the mode (k1, k2) in coefficient storage, or -1 when unresolved.
  Eigen::Index mode_row(int k1, int k2 = 0) const {
    for (std::size_t i = 0; i < modes_.size(); ++i)
      if (modes_[i].k1 == k1 && modes_[i].k2 == k2) return static_cast<Eigen::Index>(i);
    return -1;
  }

  /// Collocation coordinates of flattened point p.
  std::array<Scalar, 2> point(Eigen::Index p) const {
    if (dim_ == 1) return {points_(p), Scalar(0)};
    return {points_(p / q_), points_(p % q_)};
  }

  bool same_layout(const BasicSpectralGrid& o) const {
    return dim_ == o.dim_ && n_ == o.n_ && q_ == o.q_;
  }

  // Coefficient column (sorted modes) <-> n x n tensor array A(k1, k2).
  Matrix to_tensor(const Eigen::Ref<const Vector>& column) const {
    Matrix a = Matrix::Zero(n_, n_);
    for (std::size_t i = 0; i < tensor_slot_.size(); ++i)
      a(tensor_slot_[i] / n_, tensor_slot_[i] % n_) = column(static_cast<Eigen::Index>(i));
    return a;
  }
  Vector from_tensor(const Matrix& a) const {
    Vector c(num_modes());
    for (std::size_t i = 0; i < tensor_slot_.size(); ++i)
      c(static_cast<Eigen::Index>(i)) = a(tensor_slot_[i] / n_, tensor_slot_[i] % n_);
    return c;
  }

 private:
  int dim_;
  int n_;
  int q_;
  Scalar weight1d_{};
  Vector points_;
  Matrix basis_;
  Matrix dbasis_;
  std::vector<ModeIndex> modes_;
  Vector eigenvalues_;
  std::vector<int> tensor_slot_;
};

template <typename Scalar>
using GridPtr = std::shared_ptr<const BasicSpectralGrid<Scalar>>;

template <typename Scalar>
GridPtr<Scalar> build_grid(int dim, int modes_per_dim, int colloc_per_dim) {
  return std::make_shared<const BasicSpectralGrid<Scalar>>(dim, modes_per_dim, colloc_per_dim);
}

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Columns3 = Eigen::Matrix<Scalar, Eigen::Dynamic, 3>;

/// Spectral coefficients of an R^3-valued field, one row per mode.
template <typename Scalar>
class BasicField {
 public:
  using Coeffs = Columns3<Scalar>;

  BasicField() = default;
  explicit BasicField(GridPtr<Scalar> grid)
      : grid_(std::move(grid)), coeffs_(Coeffs::Zero(grid_->num_modes(), 3)) {}
  BasicField(GridPtr<Scalar> grid, Coeffs coeffs) : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
    if (coeffs_.rows() != grid_->num_modes())
      throw std::invalid_argument("coefficient count does not match grid modes");
  }

  const GridPtr<Scalar>& grid() const { return grid_; }
  const Coeffs& coeffs() const { return coeffs_; }
  Coeffs& coeffs() { return coeffs_; }

  bool all_finite() const { return coeffs_.allFinite(); }

  BasicField& operator+=(const BasicField& o) { coeffs_ += o.coeffs_; return *this; }
  BasicField& operator-=(const BasicField& o) { coeffs_ -= o.coeffs_; return *this; }
  BasicField& operator*=(Scalar s) { coeffs_ *= s; return *this; }

  friend BasicField operator+(BasicField a, const BasicField& b) { return a += b; }
  friend BasicField operator-(BasicField a, const BasicField& b) { return a -= b; }
  friend BasicField operator*(Scalar s, BasicField a) { return a *= s; }
  friend BasicField operator*(BasicField a, Scalar s) { return a *= s; }
  friend BasicField operator-(BasicField a) { a.coeffs_ = -a.coeffs_; return a; }

 private:
  GridPtr<Scalar> grid_;
  Coeffs coeffs_;
};

/// Collocation values of an R^3-valued field, one row per point.
template <typename Scalar>
class BasicPhysField {
 public:
  using Values = Columns3<Scalar>;

  BasicPhysField() = default;
  explicit BasicPhysField(GridPtr<Scalar> grid)
      : grid_(std::move(grid)), values_(Values::Zero(grid_->num_points(), 3)) {}
  BasicPhysField(GridPtr<Scalar> grid, Values values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.rows() != grid_->num_points())
      throw std::invalid_argument("value count does not match collocation points");
  }

  const GridPtr<Scalar>& grid() const { return grid_; }
  const Values& values() const { return values_; }
  Values& values() { return values_; }

  BasicPhysField& operator+=(const BasicPhysField& o) { values_ += o.values_; return *this; }
  BasicPhysField& operator-=(const BasicPhysField& o) { values_ -= o.values_; return *this; }
  BasicPhysField& operator*=(Scalar s) { values_ *= s; return *this; }
  friend BasicPhysField operator+(BasicPhysField a, const BasicPhysField& b) { return a += b; }
  friend BasicPhysField operator-(BasicPhysField a, const BasicPhysField& b) { return a -= b; }
  friend BasicPhysField operator*(Scalar s, BasicPhysField a) { return a *= s; }

 private:
  GridPtr<Scalar> grid_;
  Values values_;
};

template <typename Scalar>
struct BasicNormReport {
  Scalar l2{};
  Scalar h1{};
  Scalar h2{};
  Scalar l4{};
  Scalar linf{};
  Scalar x_negbeta{};
};

using SpectralGrid = BasicSpectralGrid<double>;
using Grid = GridPtr<double>;
using Field = BasicField<double>;
using PhysField = BasicPhysField<double>;
using NormReport = BasicNormReport<double>;
using Vec3d = Vec3<double>;

namespace detail {

template <typename Scalar>
void require_same_grid(const BasicSpectralGrid<Scalar>& a, const BasicSpectralGrid<Scalar>& b) {
  if (&a != &b && !a.same_layout(b)) throw std::invalid_argument("fields live on different grids");
}

// Per-component transform helpers; `table` is basis() or dbasis() per axis.
template <typename Scalar>
typename BasicSpectralGrid<Scalar>::Vector synth_column(
    const BasicSpectralGrid<Scalar>& g,
    const Eigen::Ref<const typename BasicSpectralGrid<Scalar>::Vector>& c,
    const typename BasicSpectralGrid<Scalar>::Matrix& t1,
    const typename BasicSpectralGrid<Scalar>::Matrix& t2) {
  using Matrix = typename BasicSpectralGrid<Scalar>::Matrix;
  using Vector = typename BasicSpectralGrid<Scalar>::Vector;
  if (g.dim() == 1) return t1 * c;
  const Matrix v = t1 * g.to_tensor(c) * t2.transpose();
  // Row-major flatten: point index q1 * Q + q2.
  Vector out(g.num_points());
  const int q = g.colloc_per_dim();
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) out(Eigen::Index(a) * q + b) = v(a, b);
  return out;
}

template <typename Scalar>
typename BasicSpectralGrid<Scalar>::Vector analyse_column(
    const BasicSpectralGrid<Scalar>& g,
    const Eigen::Ref<const typename BasicSpectralGrid<Scalar>::Vector>& v) {
  using Matrix = typename BasicSpectralGrid<Scalar>::Matrix;
  const auto& e = g.basis();
  if (g.dim() == 1) return g.quadrature_weight() * (e.transpose() * v);
  const int q = g.colloc_per_dim();
  Matrix vm(q, q);
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) vm(a, b) = v(Eigen::Index(a) * q + b);
  const Matrix a = g.quadrature_weight() * (e.transpose() * vm * e);
  return g.from_tensor(a);
}

}  // namespace detail

/// Evaluates f at the collocation points.
template <typename Scalar>
BasicPhysField<Scalar> synthesize(const BasicField<Scalar>& f) {
  const auto& g = *f.grid();
  BasicPhysField<Scalar> out(f.grid());
  for (int c = 0; c < 3; ++c)
    out.values().col(c) = detail::synth_column<Scalar>(g, f.coeffs().col(c), g.basis(), g.basis());
  return out;
}

/// Partial derivative along `axis` (0 or 1) at the collocation points.
template <typename Scalar>
BasicPhysField<Scalar> synthesize_gradient(const BasicField<Scalar>& f, int axis) {
  const auto& g = *f.grid();
  if (axis < 0 || axis >= g.dim()) throw std::invalid_argument("gradient axis out of range");
  BasicPhysField<Scalar> out(f.grid());
  const auto& t1 = axis == 0 ? g.dbasis() : g.basis();
  const auto& t2 = axis == 0 ? g.basis() : g.dbasis();
  for (int c = 0; c < 3; ++c)
    out.values().col(c) = detail::synth_column<Scalar>(g, f.coeffs().col(c), t1, t2);
  return out;
}

/// Orthogonal projection P_n by cosine quadrature.
template <typename Scalar>
BasicField<Scalar> project(const BasicPhysField<Scalar>& p) {
  const auto& g = *p.grid();
  BasicField<Scalar> out(p.grid());
  for (int c = 0; c < 3; ++c)
    out.coeffs().col(c) = detail::analyse_column<Scalar>(g, p.values().col(c));
  return out;
}

/// Delta f, i.e. -A f.
template <typename Scalar>
BasicField<Scalar> laplacian(const BasicField<Scalar>& f) {
  BasicField<Scalar> out(f.grid());
  out.coeffs() = -(f.grid()->eigenvalues().asDiagonal() * f.coeffs());
  return out;
}

/// L2 inner product from coefficients.
template <typename Scalar>
Scalar inner(const BasicField<Scalar>& a, const BasicField<Scalar>& b) {
  detail::require_same_grid(*a.grid(), *b.grid());
  return (a.coeffs().array() * b.coeffs().array()).sum();
}

/// L2 inner product by collocation quadrature.
template <typename Scalar>
Scalar inner(const BasicPhysField<Scalar>& a, const BasicPhysField<Scalar>& b) {
  detail::require_same_grid(*a.grid(), *b.grid());
  return a.grid()->quadrature_weight() * (a.values().array() * b.values().array()).sum();
}

/// Pointwise cross product a x b.
template <typename Scalar>
BasicPhysField<Scalar> cross(const BasicPhysField<Scalar>& a, const BasicPhysField<Scalar>& b) {
  detail::require_same_grid(*a.grid(), *b.grid());
  BasicPhysField<Scalar> out(a.grid());
  const auto& x = a.values();
  const auto& y = b.values();
  auto& z = out.values();
  z.col(0) = x.col(1).cwiseProduct(y.col(2)) - x.col(2).cwiseProduct(y.col(1));
  z.col(1) = x.col(2).cwiseProduct(y.col(0)) - x.col(0).cwiseProduct(y.col(2));
  z.col(2) = x.col(0).cwiseProduct(y.col(1)) - x.col(1).cwiseProduct(y.col(0));
  return out;
}

/// Pointwise Euclidean norms |p(xi)|.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> pointwise_norm(const BasicPhysField<Scalar>& p) {
  return p.values().rowwise().norm();
}

template <typename Scalar>
Scalar l2_norm(const BasicField<Scalar>& f) {
  return f.coeffs().norm();
}

template <typename Scalar>
Scalar h1_norm(const BasicField<Scalar>& f) {
  const auto w = (Scalar(1) + f.grid()->eigenvalues().array()).matrix();
  return std::sqrt((w.asDiagonal() * f.coeffs().cwiseAbs2()).sum());
}

template <typename Scalar>
Scalar l2_norm(const BasicPhysField<Scalar>& p) {
  return std::sqrt(inner(p, p));
}

template <typename Scalar>
BasicNormReport<Scalar> norms(const BasicField<Scalar>& f, Scalar beta = Scalar(0.5)) {
  const auto& g = *f.grid();
  const auto one_plus = (Scalar(1) + g.eigenvalues().array()).eval();
  const auto sq = f.coeffs().cwiseAbs2().rowwise().sum().array().eval();
  BasicNormReport<Scalar> r;
  r.l2 = std::sqrt(sq.sum());
  r.h1 = std::sqrt((one_plus * sq).sum());
  r.h2 = std::sqrt((one_plus.square() * sq).sum());
  r.x_negbeta = std::sqrt((one_plus.pow(-Scalar(2) * beta) * sq).sum());
  const auto mag2 = synthesize(f).values().rowwise().squaredNorm().array().eval();
  r.l4 = std::pow(g.quadrature_weight() * mag2.square().sum(), Scalar(0.25));
  r.linf = std::sqrt(mag2.maxCoeff());
  return r;
}

/// Multipliers of the four drift terms; all 1 for the verified scenarios.
struct LlbCoefficients {
  double exchange = 1.0;  // Laplacian
  double gyro = 1.0;      // m x Lap m
  double damping = 1.0;   // linear part of (1 + |m|^2) m
  double cubic = 1.0;     // |m|^2 m
};

/// P_n(v x Lap v).
template <typename Scalar>
BasicField<Scalar> cross_laplacian_term(const BasicField<Scalar>& v) {
  return project(cross(synthesize(v), synthesize(laplacian(v))));
}

/// P_n((a + b |v|^2) v).
template <typename Scalar>
BasicField<Scalar> damping_term(const BasicField<Scalar>& v, Scalar linear = Scalar(1), Scalar cubic = Scalar(1)) {
  auto p = synthesize(v);
  const auto factor = (linear + cubic * p.values().rowwise().squaredNorm().array()).eval();
  p.values() = p.values().array().colwise() * factor;
  return project(p);
}

/// Galerkin drift F_n(v) = Lap v + P_n(v x Lap v) - P_n((1 + |v|^2) v).
template <typename Scalar>
BasicField<Scalar> nonlinear_F(const BasicField<Scalar>& v, const LlbCoefficients& k = {}) {
  const auto vp = synthesize(v);
  const auto lap = laplacian(v);
  auto pointwise = cross(vp, synthesize(lap));
  pointwise.values() *= Scalar(k.gyro);
  const auto factor =
      (Scalar(k.damping) + Scalar(k.cubic) * vp.values().rowwise().squaredNorm().array()).eval();
  pointwise.values() -= (vp.values().array().colwise() * factor).matrix();
  auto out = project(pointwise);
  out.coeffs() += Scalar(k.exchange) * lap.coeffs();
  return out;
}

/// gbar_n(v) = P_n(v x h + h).
template <typename Scalar>
BasicField<Scalar> gbar(const BasicField<Scalar>& v, const BasicPhysField<Scalar>& h) {
  detail::require_same_grid(*v.grid(), *h.grid());
  auto p = cross(synthesize(v), h);
  p += h;
  return project(p);
}

/// Embeds a coarse field into a finer grid (or truncates into a coarser one)
/// by matching mode indices.
template <typename Scalar>
BasicField<Scalar> transfer(const BasicField<Scalar>& f, const GridPtr<Scalar>& target) {
  if (f.grid()->dim() != target->dim()) throw std::invalid_argument("transfer across dimensions");
  BasicField<Scalar> out(target);
  const auto& modes = f.grid()->modes();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const auto row = target->mode_row(modes[i].k1, modes[i].k2);
    if (row >= 0) out.coeffs().row(row) = f.coeffs().row(static_cast<Eigen::Index>(i));
  }
  return out;
}

}  // namespace llb
