#pragma once

#include "supercurve/chart.hpp"
#include "supercurve/connection.hpp"
#include "supercurve/operators.hpp"

#include <optional>
#include <vector>

namespace supercurve {

// The operator rho d_z + d_theta on a (z; theta, rho) chart; tilde_d(f) is
// its dtheta coefficient under the trivialization by dtheta.
ChartFunction tilde_d(const ChartFunction& f);

bool is_dual_function(const ChartFunction& f);

// Psi(f + theta g) = f + rho(theta d_z f + g): the chart isomorphism from
// functions on (z; theta) into the dual subalgebra of the diagonal chart.
ChartFunction psi(const ChartFunction& h, const Chart& delta);

// Inverse of psi on the dual subalgebra.  Throws std::domain_error when f
// is not in ker(tilde_d) of the expected shape.
ChartFunction psi_inverse(const ChartFunction& f, const Chart& x);

// tau = 1 - theta nabla_theta + rho(theta nabla_z + nabla_theta) acting on
// columns of the pullback of a module on the (z; theta) chart; omega is the
// connection pulled back to the diagonal chart.
std::vector<ChartFunction> tau(const ConnectionForm& omega_delta,
                               const std::vector<ChartFunction>& h);

// Covariant derivatives in the dual coordinate system (u, rho, theta),
// acting on the pullback module over the diagonal chart.
std::vector<ChartFunction> hat_nabla_u(const ConnectionForm& omega_delta,
                                       const std::vector<ChartFunction>& v);
std::vector<ChartFunction> hat_nabla_rho(const ConnectionForm& omega_delta,
                                         const std::vector<ChartFunction>& v);
std::vector<ChartFunction> hat_nabla_theta(const ConnectionForm& omega_delta,
                                           const std::vector<ChartFunction>& v);

// Operator transport along psi: z -> u, theta -> rho, d_z -> d_u,
// d_theta -> d_rho; the result acts on the dual chart.
ChartOperator psi_op(const ChartOperator& m, const Chart& dual);

// nu(f + theta g) = f + rho theta d_z f, or the generator version
// D(gen.h) D(gen)^{-1} with D = rho d_z + d_theta for an odd generator of
// the injection ideal.
ChartFunction nu_map(const ChartFunction& h, const Chart& delta);
ChartFunction nu_map_generator(const ChartFunction& h, const ChartFunction& generator,
                               const Chart& delta);

// For a projected chart change Z = f(z), Theta = theta g(z) + L(z), returns
// r(z) with lambda = rho r(z), r = f' g^{-1}.
ChartFunction lambda_of_change(const CoordinateChange& c);

// Substitution images of the diagonal coordinates induced by a chart change
// (z, theta) -> (Z, Theta):  z -> Z, theta -> Theta, rho -> T(Z) T(Theta)^{-1}
// with T = rho d_z + d_theta.
std::map<std::string, ChartFunction> delta_images(const CoordinateChange& c,
                                                  const Chart& delta);

// Transition operator D_ij = Psi_i^{-1} Psi_j of two chart systems given as
// coordinate changes from a common reference chart; acts on reference-chart
// functions.
ChartOperator transition_cocycle(const CoordinateChange& ci, const CoordinateChange& cj,
                                 int max_order = 2, int max_coeff_deg = 4);

// Double-dual identification: the function on the diagonal chart obtained
// by applying the dual-coordinate construction twice, pulled back through
// u - rho du/drho -> z; returns the (z; theta) chart function it induces.
ChartFunction double_dual_roundtrip(const ChartFunction& h, const Chart& delta);

} // namespace supercurve
