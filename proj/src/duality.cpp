#include "supercurve/duality.hpp"

#include <stdexcept>

namespace supercurve {

namespace {

void require_delta(const Chart& c) {
    if (c.odd_coords.size() != 2)
        throw std::invalid_argument("expected a (z; theta, rho) chart");
}

} // namespace

ChartFunction tilde_d(const ChartFunction& f) {
    require_delta(f.chart());
    const Chart& c = f.chart();
    ChartFunction rho = ChartFunction::odd_coordinate(c, c.odd_coords[1]);
    return rho * f.d_even() + f.d_odd(c.odd_coords[0]);
}

bool is_dual_function(const ChartFunction& f) { return tilde_d(f).is_zero(); }

ChartFunction psi(const ChartFunction& h, const Chart& delta) {
    require_delta(delta);
    const Chart& x = h.chart();
    if (x.odd_coords.size() != 1 || x.even_coord != delta.even_coord ||
        x.odd_coords[0] != delta.odd_coords[0])
        throw std::invalid_argument("psi: charts do not align");
    ChartFunction z = ChartFunction::even_coordinate(delta);
    ChartFunction theta = ChartFunction::odd_coordinate(delta, delta.odd_coords[0]);
    ChartFunction rho = ChartFunction::odd_coordinate(delta, delta.odd_coords[1]);
    return h.substitute({{x.even_coord, z - theta * rho}, {x.odd_coords[0], rho}});
}

ChartFunction psi_inverse(const ChartFunction& f, const Chart& x) {
    require_delta(f.chart());
    if (x.odd_coords.size() != 1)
        throw std::invalid_argument("psi_inverse: target must have one odd coordinate");
    DeltaComponents comps = delta_components(f);
    if (!comps.alpha.is_zero() || !(comps.b == -comps.a.d_even()))
        throw std::domain_error("psi_inverse: input is not in the dual subalgebra");
    Chart bare(f.chart().algebra, f.chart().even_coord, {});
    ChartFunction a0 = demote(comps.a, bare);
    ChartFunction b0 = demote(comps.beta, bare);
    std::map<std::string, ChartFunction> ren{
        {f.chart().even_coord, ChartFunction::even_coordinate(x)}};
    ChartFunction theta = ChartFunction::odd_coordinate(x, x.odd_coords[0]);
    return a0.substitute(ren) + theta * b0.substitute(ren);
}

std::vector<ChartFunction> tau(const ConnectionForm& omega_delta,
                               const std::vector<ChartFunction>& h) {
    const Chart& c = omega_delta.chart;
    require_delta(c);
    ChartFunction theta = ChartFunction::odd_coordinate(c, c.odd_coords[0]);
    ChartFunction rho = ChartFunction::odd_coordinate(c, c.odd_coords[1]);
    auto vt = omega_delta.nabla_odd(c.odd_coords[0], h);
    auto vz = omega_delta.nabla_even(h);
    std::vector<ChartFunction> out;
    out.reserve(h.size());
    for (std::size_t i = 0; i < h.size(); ++i)
        out.push_back(h[i] - theta * vt[i] + rho * (theta * vz[i] + vt[i]));
    return out;
}

std::vector<ChartFunction> hat_nabla_u(const ConnectionForm& omega_delta,
                                       const std::vector<ChartFunction>& v) {
    return omega_delta.nabla_even(v);
}

std::vector<ChartFunction> hat_nabla_rho(const ConnectionForm& omega_delta,
                                         const std::vector<ChartFunction>& v) {
    const Chart& c = omega_delta.chart;
    require_delta(c);
    ChartFunction theta = ChartFunction::odd_coordinate(c, c.odd_coords[0]);
    auto a = omega_delta.nabla_odd(c.odd_coords[1], v);
    auto b = omega_delta.nabla_even(v);
    for (std::size_t i = 0; i < v.size(); ++i)
        a[i] = a[i] - theta * b[i];
    return a;
}

std::vector<ChartFunction> hat_nabla_theta(const ConnectionForm& omega_delta,
                                           const std::vector<ChartFunction>& v) {
    const Chart& c = omega_delta.chart;
    require_delta(c);
    ChartFunction rho = ChartFunction::odd_coordinate(c, c.odd_coords[1]);
    auto a = omega_delta.nabla_odd(c.odd_coords[0], v);
    auto b = omega_delta.nabla_even(v);
    for (std::size_t i = 0; i < v.size(); ++i)
        a[i] = a[i] + rho * b[i];
    return a;
}

ChartOperator psi_op(const ChartOperator& m, const Chart& dual) {
    return rename_chart(m, dual);
}

ChartFunction nu_map(const ChartFunction& h, const Chart& delta) {
    ChartFunction theta = ChartFunction::odd_coordinate(delta, delta.odd_coords[0]);
    return tilde_d(theta * promote(h, delta));
}

ChartFunction nu_map_generator(const ChartFunction& h, const ChartFunction& generator,
                               const Chart& delta) {
    ChartFunction gen = promote(generator, delta);
    auto gp = gen.parity();
    if (gen.is_zero() || !gp || *gp != 1)
        throw std::invalid_argument("nu_map_generator: generator must be odd");
    ChartFunction dgen = tilde_d(gen);
    return tilde_d(gen * promote(h, delta)) * dgen.inverse();
}

ChartFunction lambda_of_change(const CoordinateChange& c) {
    const Chart& chart = c.chart();
    if (c.Z.depends_on_odd(chart.odd_coords[0]))
        throw std::invalid_argument("lambda_of_change: Z must not involve theta");
    // Theta = theta g(z) + L(z): collect g from the theta-coefficients.
    ChartFunction g(chart);
    for (const auto& [k, coeff] : c.Theta.terms())
        if (k.second == 1)
            g.add_term(k.first, 0, coeff.parity_flip());
    return c.Z.d_even() * g.inverse();
}

std::map<std::string, ChartFunction> delta_images(const CoordinateChange& c,
                                                  const Chart& delta) {
    require_delta(delta);
    const Chart& x = c.chart();
    ChartFunction zp = promote(c.Z, delta);
    ChartFunction tp = promote(c.Theta, delta);
    ChartFunction rho_image = tilde_d(zp) * tilde_d(tp).inverse();
    return {{x.even_coord, zp},
            {x.odd_coords[0], tp},
            {delta.odd_coords[1], rho_image}};
}

ChartOperator transition_cocycle(const CoordinateChange& ci, const CoordinateChange& cj,
                                 int max_order, int max_coeff_deg) {
    const Chart& x = ci.chart();
    Chart delta(x.algebra, x.even_coord, {x.odd_coords[0], "rho_aux"});
    CoordinateChange inv_i = invert_affine(ci);
    CoordinateChange inv_j = invert_affine(cj);
    auto to_delta_i = delta_images(inv_i, delta);
    auto to_delta_j = delta_images(cj, delta);
    auto action = [&](const ChartFunction& h) {
        ChartFunction hj = apply_change(h, inv_j);
        ChartFunction f = psi(hj, delta);
        f = f.substitute(to_delta_j);   // j diagonal coordinates -> reference
        f = f.substitute(to_delta_i);   // reference -> i diagonal coordinates
        ChartFunction gi = psi_inverse(f, x);
        return apply_change(gi, ci);
    };
    return operator_from_action(x, action, max_order, max_coeff_deg);
}

ChartFunction double_dual_roundtrip(const ChartFunction& h, const Chart& delta) {
    const Chart& x = h.chart();
    ChartFunction f1 = psi(h, delta);
    Chart dual(x.algebra, "u_dd", {delta.odd_coords[1]});
    ChartFunction hd = psi_inverse(f1, dual);
    Chart delta2(x.algebra, "u_dd", {delta.odd_coords[1], "th_dd"});
    ChartFunction f2 = psi(hd, delta2);
    return psi_inverse(f2, x);
}

} // namespace supercurve
