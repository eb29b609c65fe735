#include "llb/marcus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace llb {

MarcusParams::MarcusParams(PhysField h_field, MarcusMode m, double step,
                           std::optional<double> w1inf)
    : h(std::move(h_field)), mode(m), rk4_step(step), h_w1inf(w1inf) {
  if (!h.grid()) throw std::invalid_argument("Marcus parameters need h on a grid");
  if (!(rk4_step > 0.0 && rk4_step <= 1.0))
    throw std::invalid_argument("rk4 step must lie in (0, 1]");
  if (!h.values().allFinite()) throw std::invalid_argument("h must be finite");
}

namespace {

Vec3d flow_rhs(double l, const Vec3d& y, const Vec3d& h) { return l * (y.cross(h) + h); }

// Rotation generated by y -> y x h over "time" tau, plus the translation
// tau h along the rotation axis.
Vec3d closed_form_point(double tau, const Vec3d& x, const Vec3d& h) {
  const double a = h.norm();
  if (a == 0.0) return x;
  const Vec3d u = h / a;
  const double angle = -tau * a;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return x * c + u.cross(x) * s + u * (u.dot(x) * (1.0 - c)) + tau * h;
}

Vec3d rk4_point(double t, double l, const Vec3d& x, const Vec3d& h, double step) {
  const int n = std::max(1, static_cast<int>(std::ceil(t / step - 1e-12)));
  const double dt = t / n;
  Vec3d y = x;
  for (int i = 0; i < n; ++i) {
    const Vec3d k1 = flow_rhs(l, y, h);
    const Vec3d k2 = flow_rhs(l, y + 0.5 * dt * k1, h);
    const Vec3d k3 = flow_rhs(l, y + 0.5 * dt * k2, h);
    const Vec3d k4 = flow_rhs(l, y + dt * k3, h);
    y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

}  // namespace

PhysField phi_flow(double eps_time, double l, const PhysField& x, const MarcusParams& params) {
  if (!x.grid()->same_layout(*params.grid()))
    throw std::invalid_argument("phi_flow: state and h live on different grids");
  if (!(eps_time >= 0.0)) throw std::invalid_argument("phi_flow: time must be >= 0");
  if (eps_time == 0.0 || l == 0.0) return x;

  PhysField out(x.grid());
  const auto& hv = params.h.values();
  const auto& xv = x.values();
  const double tau = eps_time * l;
  for (Eigen::Index p = 0; p < xv.rows(); ++p) {
    const Vec3d xp = xv.row(p).transpose();
    const Vec3d hp = hv.row(p).transpose();
    const Vec3d y = params.mode == MarcusMode::closed_form
                        ? closed_form_point(tau, xp, hp)
                        : rk4_point(eps_time, l, xp, hp, params.rk4_step);
    out.values().row(p) = y.transpose();
  }
  return out;
}

Field g_op(double eps, double l, const Field& v, const MarcusParams& params) {
  const auto x = synthesize(v);
  return project(phi_flow(eps, l, x, params) - x);
}

Field h_op(double eps, double l, const Field& v, const MarcusParams& params) {
  auto out = g_op(eps, l, v, params);
  out -= (eps * l) * gbar(v, params.h);
  return out;
}

Field b_op(double eps, const Field& v, const LevyMeasure& nu, const MarcusParams& params) {
  if (!(eps > 0.0)) throw std::invalid_argument("b_op: eps must be > 0");
  Field out(v.grid());
  for (const auto& a : nu.atoms()) out += a.weight * h_op(eps, a.mark, v, params);
  out *= 1.0 / eps;
  return out;
}

Field marcus_compensator_drift(double eps, const Field& v, const LevyMeasure& nu,
                               const MarcusParams& params) {
  if (!(eps > 0.0)) throw std::invalid_argument("compensator drift: eps must be > 0");
  const double moment = nu.first_moment();
  if (moment == 0.0) return Field(v.grid());
  return -moment * gbar(v, params.h);
}

MarcusBounds::MarcusBounds(const MarcusParams& params) {
  h_sup = pointwise_norm(params.h).maxCoeff();
  h_l2 = l2_norm(params.h);
  h_w1inf = params.h_w1inf.value_or(h_sup);
}

double MarcusBounds::phi_lipschitz(double l) const { return std::exp(h_sup * std::abs(l)); }

double MarcusBounds::g_lipschitz(double l) const { return std::expm1(h_sup * std::abs(l)); }

double MarcusBounds::g_lipschitz_printed(double l) const {
  const double a = h_sup * std::abs(l);
  return a * std::expm1(a);
}

double MarcusBounds::h_lipschitz(double l) const {
  return 1.0 + g_lipschitz(l) + std::abs(l) * h_sup;
}

double MarcusBounds::gbar_growth() const { return std::max(h_sup, h_l2); }

double MarcusBounds::phi_growth_sq(double l, double x_l2) const {
  const double c = 4.0 * gbar_growth() * std::abs(l);
  return (x_l2 * x_l2 + c) * std::exp(c);
}

double MarcusBounds::eps_growth_constant() const { return std::max({h_w1inf, h_l2, 1.0}); }

double MarcusBounds::eps_growth(double eps, double l) const {
  const double c = eps_growth_constant();
  return c * std::abs(l) * std::expm1(c * eps);
}

}  // namespace llb
