// Marcus map Phi(t, l, x): the time-t flow of y' = l (y x h + h), applied
// pointwise at collocation points, and the jump operators built from it.
#pragma once

#include <optional>

#include "llb/levy.hpp"
#include "llb/spectral.hpp"

namespace llb {

enum class MarcusMode { closed_form, rk4 };

struct MarcusParams {
  PhysField h;
  MarcusMode mode = MarcusMode::closed_form;
  double rk4_step = 1e-3;
  /// sup|h| + sup|grad h|; defaults to the collocation sup of |h| when the
  /// gradient is unknown.
  std::optional<double> h_w1inf;

  explicit MarcusParams(PhysField h_field, MarcusMode m = MarcusMode::closed_form,
                        double step = 1e-3, std::optional<double> w1inf = std::nullopt);

  const Grid& grid() const { return h.grid(); }
};

/// Phi(eps_time, l, x). Depends on (eps_time, l) only through their product,
/// so Phi(eps, l, x) == Phi(1, eps * l, x) bit for bit.
PhysField phi_flow(double eps_time, double l, const PhysField& x, const MarcusParams& params);

/// G(eps, l, v) = P_n(Phi(eps, l, v) - v).
Field g_op(double eps, double l, const Field& v, const MarcusParams& params);

/// H(eps, l, v) = G(eps, l, v) - eps l gbar(v).
Field h_op(double eps, double l, const Field& v, const MarcusParams& params);

/// b(eps, v) = eps^{-1} sum_j w_j H(eps, l_j, v).
Field b_op(double eps, const Field& v, const LevyMeasure& nu, const MarcusParams& params);

/// b(eps, v) - eps^{-1} sum_j w_j G(eps, l_j, v) = -(sum_j w_j l_j) gbar(v).
Field marcus_compensator_drift(double eps, const Field& v, const LevyMeasure& nu,
                               const MarcusParams& params);

/// Explicit constants from the growth and Lipschitz estimates for the
/// Marcus operators, evaluated for a given h.
struct MarcusBounds {
  double h_sup = 0.0;    // max |h| over collocation points
  double h_l2 = 0.0;
  double h_w1inf = 0.0;

  explicit MarcusBounds(const MarcusParams& params);

  /// |Phi(l,u) - Phi(l,v)| <= e^{|h|_inf |l|} |u - v|.
  double phi_lipschitz(double l) const;
  /// |G(l,u) - G(l,v)| <= (e^{|h|_inf |l|} - 1) |u - v|.
  double g_lipschitz(double l) const;
  /// The constant as printed in the Lipschitz lemma, |h|_inf |l| (e^{|h|_inf |l|} - 1).
  double g_lipschitz_printed(double l) const;
  /// |H(l,u) - H(l,v)| <= (1 + c_G + |l| |h|_inf) |u - v|.
  double h_lipschitz(double l) const;
  /// |gbar(v)| <= C0 (1 + |v|) with C0 = max(|h|_inf, |h|_L2).
  double gbar_growth() const;
  /// |Phi(l,x)|^2 <= (|x|^2 + 4 C0 |l|) e^{4 C0 |l|}.
  double phi_growth_sq(double l, double x_l2) const;
  /// C = max(|h|_{W1inf}, |h|_L2, 1) of the eps-growth estimate.
  double eps_growth_constant() const;
  /// |G(eps,l,v)|, |H(eps,l,v)| <= C |l| (e^{C eps} - 1) (1 + |v|).
  double eps_growth(double eps, double l) const;
};

}  // namespace llb
