#include "supercurve/elliptic.hpp"

#include "supercurve/connection.hpp"
#include "supercurve/duality.hpp"

#include <stdexcept>

namespace supercurve {

namespace {

void require_odd_constant(const GrassmannElement& g, const char* what) {
    if (g.is_zero())
        return;
    auto p = g.parity();
    if (!p || *p != 1)
        throw std::invalid_argument(std::string(what) + " must be odd");
    if (g.body() != 0)
        throw std::invalid_argument(std::string(what) + " must have zero body");
}

GrassmannElement odd_or_zero(const std::optional<GrassmannElement>& g,
                             const AlgebraSignature& sig) {
    return g ? *g : GrassmannElement::zero(sig);
}

} // namespace

SuperEllipticCurve::SuperEllipticCurve(AlgebraSignature sig_, GrassmannElement modulus_,
                                       GrassmannElement eps_, GrassmannElement del_)
    : sig(std::move(sig_)), modulus(std::move(modulus_)), eps(std::move(eps_)),
      del(std::move(del_)) {
    if (!modulus.is_zero()) {
        auto p = modulus.parity();
        if (!p || *p != 0)
            throw std::invalid_argument("modulus must be even");
    }
    require_odd_constant(eps, "eps");
    require_odd_constant(del, "del");
    CoordinateChange st = compose(generator_s(), generator_t());
    CoordinateChange ts = compose(generator_t(), generator_s());
    if (!(st.Z == ts.Z) || !(st.Theta == ts.Theta))
        throw std::invalid_argument("generators do not commute");
}

CoordinateChange SuperEllipticCurve::generator_s() const {
    Chart x = x_chart(sig);
    ChartFunction z = ChartFunction::even_coordinate(x);
    ChartFunction theta = ChartFunction::odd_coordinate(x, x.odd_coords[0]);
    return CoordinateChange(z + ChartFunction::from_coefficient(x, modulus) + theta * eps,
                           theta + ChartFunction::from_coefficient(x, del));
}

CoordinateChange SuperEllipticCurve::generator_t() const {
    Chart x = x_chart(sig);
    ChartFunction z = ChartFunction::even_coordinate(x);
    return CoordinateChange(z + ChartFunction::one(x),
                            ChartFunction::odd_coordinate(x, x.odd_coords[0]));
}

std::map<std::string, ChartFunction> SuperEllipticCurve::generator_s_delta() const {
    return delta_images(generator_s(), delta_chart(sig));
}

EllipticMultiplier::EllipticMultiplier(std::pair<long, long> lattice_, GrassmannElement a_,
                                       GrassmannElement alpha_,
                                       std::optional<GrassmannElement> rho_term_)
    : lattice(lattice_), a(std::move(a_)), alpha(std::move(alpha_)),
      rho_term(std::move(rho_term_)) {
    if (!a.is_zero()) {
        auto p = a.parity();
        if (!p || *p != 0)
            throw std::invalid_argument("multiplier exponent A must be even");
    }
    require_odd_constant(alpha, "alpha");
    if (rho_term)
        require_odd_constant(*rho_term, "rho_term");
}

EllipticOneForm::EllipticOneForm(GrassmannElement a_, GrassmannElement b_)
    : a(std::move(a_)), b(std::move(b_)) {
    if (!a.is_zero()) {
        auto p = a.parity();
        if (!p || *p != 0)
            throw std::invalid_argument("one-form coefficient A must be even");
    }
    require_odd_constant(b, "one-form coefficient B");
}

SuperEllipticCurve dual_curve(const SuperEllipticCurve& x) {
    Chart delta = delta_chart(x.sig);
    ChartFunction z = ChartFunction::even_coordinate(delta);
    ChartFunction theta = ChartFunction::odd_coordinate(delta, delta.odd_coords[0]);
    ChartFunction rho = ChartFunction::odd_coordinate(delta, delta.odd_coords[1]);
    auto img = x.generator_s_delta();
    ChartFunction u = z - theta * rho;
    ChartFunction u_hat = u.substitute(img);
    ChartFunction d = u_hat - u;
    for (const auto& [k, c] : d.terms())
        if (k.first != 0 || (k.second & 1u)) // z^k or theta factors
            throw std::domain_error("dual_curve: generator is not affine in (u, rho)");
    GrassmannElement modulus_hat = d.coefficient(0, 0);
    // d = modulus_hat + rho * eps_hat; the stored left coefficient of rho is
    // -eps_hat for odd eps_hat.
    GrassmannElement eps_hat = -d.coefficient(0, 2);
    ChartFunction rho_shift = img.at(delta.odd_coords[1]) - rho;
    for (const auto& [k, c] : rho_shift.terms())
        if (k.first != 0 || k.second != 0)
            throw std::domain_error("dual_curve: rho image is not a constant shift");
    GrassmannElement del_hat = rho_shift.coefficient(0, 0);
    return SuperEllipticCurve(x.sig, modulus_hat, eps_hat, del_hat);
}

CurveClass classify_curve(const SuperEllipticCurve& x) {
    CurveClass c;
    c.projected = x.eps.is_zero();
    c.injected = x.del.is_zero();
    c.self_dual = (x.eps - x.del).is_zero();
    c.split = c.projected && c.injected;
    return c;
}

namespace {

// Constant section with the given slot coefficients on the (z; theta) chart
// of the curve, f = A + theta alpha.
ChartFunction curve_section(const Chart& x, const GrassmannElement& a,
                            const GrassmannElement& alpha) {
    return ChartFunction::from_coefficient(x, a) +
           ChartFunction::odd_coordinate(x, x.odd_coords[0]) * alpha;
}

std::array<GrassmannElement, 2> curve_components(const ChartFunction& f) {
    if (f.even_coord_degree() > 0)
        throw std::domain_error("expected a constant section");
    SuperCoefficients sc = super_coefficients(f, 0);
    return {sc.a, sc.b};
}

ChartFunction delta_section(const Chart& delta, const DeltaCocycle& c) {
    return from_delta_components(delta, ChartFunction::from_coefficient(delta, c[0]),
                                 ChartFunction::from_coefficient(delta, c[1]),
                                 ChartFunction::from_coefficient(delta, c[2]),
                                 ChartFunction::from_coefficient(delta, c[3]));
}

DeltaCocycle delta_cocycle_of(const ChartFunction& f) {
    if (f.even_coord_degree() > 0)
        throw std::domain_error("expected a constant section");
    DeltaComponents dc = delta_components(f);
    return {dc.a.coefficient(0, 0), dc.alpha.coefficient(0, 0), dc.beta.coefficient(0, 0),
            dc.b.coefficient(0, 0)};
}

// Components of f.S - f for the constant section with monomial m in the
// given slot; the invariance system and the coboundary module of both
// cohomology computations.
std::vector<GrassmannElement> curve_coboundary(const SuperEllipticCurve& x, std::size_t slot,
                                               const GrassmannElement& m) {
    Chart chart = x_chart(x.sig);
    GrassmannElement zero = GrassmannElement::zero(x.sig);
    ChartFunction f = curve_section(chart, slot == 0 ? m : zero, slot == 1 ? m : zero);
    ChartFunction diff = apply_change(f, x.generator_s()) - f;
    auto c = curve_components(diff);
    return {c[0], c[1]};
}

std::vector<GrassmannElement> delta_coboundary(const SuperEllipticCurve& x, std::size_t slot,
                                               const GrassmannElement& m) {
    Chart delta = delta_chart(x.sig);
    GrassmannElement zero = GrassmannElement::zero(x.sig);
    DeltaCocycle in{zero, zero, zero, zero};
    in[slot] = m;
    ChartFunction f = delta_section(delta, in);
    ChartFunction diff = f.substitute(x.generator_s_delta()) - f;
    auto c = delta_cocycle_of(diff);
    return {c[0], c[1], c[2], c[3]};
}

std::vector<std::function<std::vector<GrassmannElement>(const GrassmannElement&)>>
delta_coboundary_generators(const SuperEllipticCurve& x) {
    std::vector<std::function<std::vector<GrassmannElement>(const GrassmannElement&)>> gens;
    for (std::size_t slot = 0; slot < 4; ++slot)
        gens.push_back([&x, slot](const GrassmannElement& m) {
            return delta_coboundary(x, slot, m);
        });
    return gens;
}

} // namespace

LambdaModuleDescription h0_structure(Space space, const SuperEllipticCurve& x) {
    if (space == Space::Xhat)
        return h0_structure(Space::X, dual_curve(x));
    if (space == Space::X)
        return kernel_of_map(
            x.sig, {0, 1}, 2,
            [&x](std::size_t slot, const GrassmannElement& m) {
                return curve_coboundary(x, slot, m);
            });
    return kernel_of_map(x.sig, {0, 1, 1, 0}, 4,
                         [&x](std::size_t slot, const GrassmannElement& m) {
                             return delta_coboundary(x, slot, m);
                         });
}

LambdaModuleDescription h1_structure(Space space, const SuperEllipticCurve& x) {
    if (space == Space::Xhat)
        return h1_structure(Space::X, dual_curve(x));
    if (space == Space::X) {
        std::vector<std::function<std::vector<GrassmannElement>(const GrassmannElement&)>>
            gens;
        for (std::size_t slot = 0; slot < 2; ++slot)
            gens.push_back([&x, slot](const GrassmannElement& m) {
                return curve_coboundary(x, slot, m);
            });
        return slot_quotient(x.sig, {0, 1}, gens);
    }
    return slot_quotient(x.sig, {0, 1, 1, 0}, delta_coboundary_generators(x));
}

bool is_trivial_bundle(const EllipticMultiplier& m, Space on, const SuperEllipticCurve& x) {
    if (on == Space::Delta)
        throw std::invalid_argument("is_trivial_bundle: use delta_classes_equal on Delta");
    if (m.lattice != std::pair<long, long>{0, 0})
        throw std::domain_error("is_trivial_bundle: reduce the lattice part first");
    if (!m.alpha.is_zero() || !odd_or_zero(m.rho_term, x.sig).is_zero())
        return false;
    const GrassmannElement& gen = on == Space::X ? x.del : x.eps;
    return in_span(m.a, {gen});
}

bool admits_flat_connection(const EllipticMultiplier& m, Space on,
                            const SuperEllipticCurve& x) {
    if (on == Space::Delta)
        throw std::invalid_argument("admits_flat_connection: X or Xhat only");
    const GrassmannElement& gen = on == Space::X ? x.eps : x.del;
    return in_span(m.alpha, {gen}) && in_span(odd_or_zero(m.rho_term, x.sig), {gen});
}

EllipticMultiplier reduce_by_lattice(const EllipticMultiplier& m,
                                     const SuperEllipticCurve& x) {
    auto [mm, nn] = m.lattice;
    GrassmannElement a = m.a + GrassmannElement::scalar(x.sig, Rational(mm)) +
                         GrassmannElement::scalar(x.sig, Rational(nn)) * x.modulus;
    GrassmannElement alpha = m.alpha + GrassmannElement::scalar(x.sig, Rational(nn)) * x.eps;
    return EllipticMultiplier({0, 0}, a, alpha, m.rho_term);
}

EllipticMultiplier transform_bundle(const EllipticMultiplier& m, const EllipticOneForm& omega,
                                    const SuperEllipticCurve& x) {
    if (!gmul(omega.a, x.eps).is_zero())
        throw std::domain_error("transform_bundle: one-form is not invariant (A eps != 0)");
    Chart chart = x_chart(x.sig);
    Chart delta = delta_chart(x.sig);
    ChartFunction phi0 =
        transform_line_bundle(ChartFunction::from_coefficient(chart, omega.a),
                              ChartFunction::from_coefficient(chart, omega.b), delta);
    ChartFunction q = phi0.substitute(x.generator_s_delta()) * phi0.inverse();
    DeltaCocycle e = delta_cocycle_of(q.logn());
    if (!e[3].is_zero())
        throw std::domain_error("transform_bundle: unexpected theta rho term in exponent");
    // e[2] is the right coefficient beta of rho beta = (-beta) rho.
    GrassmannElement r = odd_or_zero(m.rho_term, x.sig) - e[2];
    std::optional<GrassmannElement> rho_term;
    if (m.rho_term || !r.is_zero())
        rho_term = r;
    return EllipticMultiplier(m.lattice, m.a + e[0], m.alpha + e[1], rho_term);
}

EllipticMultiplier transform_trivial_with_connection(const EllipticOneForm& omega,
                                                     const SuperEllipticCurve& x) {
    GrassmannElement zero = GrassmannElement::zero(x.sig);
    return transform_bundle(EllipticMultiplier({0, 0}, zero, zero), omega, x);
}

EllipticMultiplier transform_pullback_case(const EllipticOneForm& omega,
                                           const SuperEllipticCurve& x) {
    if (!x.eps.is_zero())
        throw std::domain_error("transform_pullback_case: curve must be projected");
    if (!omega.b.is_zero())
        throw std::domain_error("transform_pullback_case: requires B = 0");
    GrassmannElement zero = GrassmannElement::zero(x.sig);
    return EllipticMultiplier({0, 0}, zero, zero, -gmul(x.del, omega.a));
}

EllipticMultiplier direct_image_projected(const EllipticOneForm& omega,
                                          const SuperEllipticCurve& x) {
    if (!x.eps.is_zero())
        throw std::domain_error("direct_image_projected: curve must be projected");
    Chart chart = x_chart(x.sig);
    ChartFunction phi0 = ChartFunction::one(chart) -
                         ChartFunction::odd_coordinate(chart, chart.odd_coords[0]) * omega.b;
    ChartFunction q = apply_change(phi0, x.generator_s()) * phi0.inverse();
    auto e = curve_components(q.logn());
    if (!e[1].is_zero())
        throw std::domain_error("direct_image_projected: exponent has an odd part");
    return EllipticMultiplier({0, 0}, e[0], GrassmannElement::zero(x.sig));
}

DeltaCocycle lift_to_delta(const EllipticMultiplier& m, Space from,
                           const SuperEllipticCurve& x) {
    if (from == Space::Delta)
        throw std::invalid_argument("lift_to_delta: source must be X or Xhat");
    EllipticMultiplier red = reduce_by_lattice(m, x);
    GrassmannElement zero = GrassmannElement::zero(x.sig);
    GrassmannElement r = odd_or_zero(red.rho_term, x.sig);
    if (from == Space::X)
        return {red.a, red.alpha, -r, zero};
    // On the dual curve the odd coordinate is rho: A + rho alpha + r rho.
    return {red.a, zero, red.alpha - r, zero};
}

bool delta_classes_equal(const DeltaCocycle& c1, const DeltaCocycle& c2,
                         const SuperEllipticCurve& x) {
    std::vector<GrassmannElement> diff;
    int trunc = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        diff.push_back(c1[i] - c2[i]);
        trunc = std::max(trunc, diff.back().max_even_degree());
    }
    return slot_in_span(x.sig, diff, delta_coboundary_generators(x), trunc);
}

LambdaModuleDescription closed_invariant_one_forms(const SuperEllipticCurve& x) {
    GrassmannElement zero = GrassmannElement::zero(x.sig);
    return kernel_of_map(x.sig, {1, 0}, 1,
                         [&x, zero](std::size_t slot, const GrassmannElement& m) {
                             return std::vector<GrassmannElement>{
                                 slot == 0 ? gmul(m, x.eps) : zero};
                         });
}

BerezinianReport berezinian_dimension_check(const SuperEllipticCurve& x) {
    BerezinianReport r;
    auto forms = closed_invariant_one_forms(x);
    auto h0 = h0_structure(Space::Xhat, x);
    if (!forms.graded_dim || !h0.graded_dim)
        throw std::domain_error("berezinian_dimension_check: graded dimension unavailable");
    r.one_forms_dim = *forms.graded_dim;
    r.h0_dual_dim = *h0.graded_dim;
    r.equal = r.one_forms_dim == r.h0_dual_dim;
    return r;
}

} // namespace supercurve
