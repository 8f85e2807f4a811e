#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "supercurve/duality.hpp"

using namespace supercurve;
using supercurve::testing::Rng;

namespace {

const AlgebraSignature sig({"e1", "e2"}, {"t"});

// A function of z alone on the given chart.
ChartFunction z_function(const Chart& c, Rng& rng, int zdeg = 2, int parity = 0) {
    ChartFunction out(c);
    std::uniform_int_distribution<int> pick(0, 1);
    for (int k = 0; k <= zdeg; ++k) {
        GrassmannElement g = testing::rand_element(c.algebra, rng, 1, parity);
        if (pick(rng) == 0 && !g.is_zero())
            out.add_term(k, 0, g);
    }
    return out;
}

// a + rho b - theta rho a' : the general element of ker(tilde_d).
ChartFunction dual_element(const Chart& delta, Rng& rng) {
    ChartFunction a = z_function(delta, rng, 3, -1);
    ChartFunction b = z_function(delta, rng, 3, -1);
    ChartFunction theta = ChartFunction::odd_coordinate(delta, delta.odd_coords[0]);
    ChartFunction rho = ChartFunction::odd_coordinate(delta, delta.odd_coords[1]);
    return a + rho * b - theta * rho * a.d_even();
}

bool all_zero(const std::vector<ChartFunction>& v) {
    for (const auto& f : v)
        if (!f.is_zero())
            return false;
    return true;
}

std::vector<ChartFunction> scale(const ChartFunction& s,
                                 const std::vector<ChartFunction>& v) {
    std::vector<ChartFunction> out;
    for (const auto& f : v)
        out.push_back(s * f);
    return out;
}

std::vector<ChartFunction> diff(const std::vector<ChartFunction>& x,
                                const std::vector<ChartFunction>& y) {
    std::vector<ChartFunction> out;
    for (std::size_t i = 0; i < x.size(); ++i)
        out.push_back(x[i] - y[i]);
    return out;
}

} // namespace

TEST_CASE("tilde_d on coordinates and the dual kernel") {
    Chart d = delta_chart(sig);
    ChartFunction z = ChartFunction::even_coordinate(d);
    ChartFunction theta = ChartFunction::odd_coordinate(d, "theta");
    ChartFunction rho = ChartFunction::odd_coordinate(d, "rho");
    CHECK(tilde_d(z) == rho);
    CHECK(tilde_d(theta) == ChartFunction::one(d));
    CHECK(tilde_d(rho).is_zero());
    CHECK(tilde_d(z - theta * rho).is_zero());
    CHECK(is_dual_function(z - theta * rho));
    CHECK(is_dual_function(rho));
    CHECK(!is_dual_function(theta));
    CHECK(!is_dual_function(z));

    Rng rng(201);
    for (int it = 0; it < 25; ++it) {
        ChartFunction f = dual_element(d, rng);
        CHECK(is_dual_function(f));
        // Perturbing the theta or theta-rho part leaves the kernel.
        ChartFunction bad1 = f + theta;
        ChartFunction bad2 = f + theta * rho;
        CHECK(!is_dual_function(bad1));
        CHECK(!is_dual_function(bad2));
        // tilde_d squares to zero.
        ChartFunction g = testing::rand_function(d, rng, 3);
        CHECK(tilde_d(tilde_d(g)).is_zero());
    }
}

TEST_CASE("psi lands in the dual subalgebra and inverts") {
    Chart x = x_chart(sig);
    Chart d = delta_chart(sig);
    Rng rng(203);
    for (int it = 0; it < 25; ++it) {
        ChartFunction h = testing::rand_function(x, rng, 3);
        ChartFunction f = psi(h, d);
        CHECK(is_dual_function(f));
        CHECK(psi_inverse(f, x) == h);
        // psi is a ring homomorphism.
        ChartFunction h2 = testing::rand_function(x, rng, 2);
        CHECK(psi(h * h2, d) == psi(h, d) * psi(h2, d));
    }
    // Every dual function is in the image.
    for (int it = 0; it < 10; ++it) {
        ChartFunction f = dual_element(d, rng);
        CHECK(psi(psi_inverse(f, x), d) == f);
    }
    ChartFunction theta = ChartFunction::odd_coordinate(d, "theta");
    CHECK_THROWS_AS(psi_inverse(theta, x), std::domain_error);
}

TEST_CASE("tau with the trivial connection is psi") {
    Chart x = x_chart(sig);
    Chart d = delta_chart(sig);
    ConnectionForm triv = ConnectionForm::zero(d, 1, 0);
    Rng rng(207);
    for (int it = 0; it < 20; ++it) {
        ChartFunction h = testing::rand_function(x, rng, 3);
        auto image = tau(triv, {promote(h, d)});
        CHECK(image[0] == psi(h, d));
    }
}

TEST_CASE("tau intertwines the module structures") {
    Chart x = x_chart(sig);
    Chart d = delta_chart(sig);
    ChartFunction z = ChartFunction::even_coordinate(d);
    ChartFunction theta = ChartFunction::odd_coordinate(d, "theta");
    ChartFunction rho = ChartFunction::odd_coordinate(d, "rho");
    ChartFunction u = z - theta * rho;
    Rng rng(211);
    std::vector<std::pair<int, int>> ranks{{1, 0}, {1, 1}, {2, 1}};
    for (auto [p, q] : ranks)
        for (int rep = 0; rep < 4; ++rep) {
            SuperMatrix g = testing::rand_gauge(x, p, q, rng);
            ConnectionForm base = testing::gauge_flat_connection(g);
            REQUIRE(flat_check(base).flat);
            ConnectionForm omega = pullback_connection(base, d);
            for (int it = 0; it < 4; ++it) {
                std::vector<ChartFunction> h;
                for (int i = 0; i < p + q; ++i)
                    h.push_back(promote(testing::rand_function(x, rng, 2), d));
                auto th = tau(omega, h);
                CHECK(all_zero(diff(tau(omega, scale(z, h)), scale(u, th))));
                CHECK(all_zero(diff(tau(omega, scale(theta, h)), scale(rho, th))));
                CHECK(all_zero(diff(tau(omega, omega.nabla_even(h)),
                                    hat_nabla_u(omega, th))));
                CHECK(all_zero(diff(tau(omega, omega.nabla_odd("theta", h)),
                                    hat_nabla_rho(omega, th))));
                // The image is flat along the remaining odd direction.
                CHECK(all_zero(hat_nabla_theta(omega, th)));
            }
        }
}

TEST_CASE("dual covariant derivatives are flat derivations") {
    Chart x = x_chart(sig);
    Chart d = delta_chart(sig);
    ChartFunction z = ChartFunction::even_coordinate(d);
    ChartFunction theta = ChartFunction::odd_coordinate(d, "theta");
    ChartFunction rho = ChartFunction::odd_coordinate(d, "rho");
    ChartFunction u = z - theta * rho;
    Rng rng(213);
    for (int rep = 0; rep < 6; ++rep) {
        SuperMatrix g = testing::rand_gauge(x, 1, 1, rng);
        ConnectionForm omega = pullback_connection(testing::gauge_flat_connection(g), d);
        for (int it = 0; it < 4; ++it) {
            auto v = testing::rand_column(d, rng, 2, 2);
            // Derivation identities against the dual coordinates.
            auto lhs = diff(hat_nabla_u(omega, scale(u, v)), scale(u, hat_nabla_u(omega, v)));
            CHECK(all_zero(diff(lhs, v)));
            auto lr = hat_nabla_rho(omega, scale(rho, v));
            CHECK(all_zero(diff(lr, diff(v, scale(rho, hat_nabla_rho(omega, v))))));
            auto lt = hat_nabla_theta(omega, scale(theta, v));
            CHECK(all_zero(diff(lt, diff(v, scale(theta, hat_nabla_theta(omega, v))))));
            // u is constant for the odd dual derivatives, rho for the even one.
            CHECK(all_zero(diff(hat_nabla_rho(omega, scale(u, v)),
                                scale(u, hat_nabla_rho(omega, v)))));
            CHECK(all_zero(diff(hat_nabla_theta(omega, scale(u, v)),
                                scale(u, hat_nabla_theta(omega, v)))));
            CHECK(all_zero(diff(hat_nabla_u(omega, scale(rho, v)),
                                scale(rho, hat_nabla_u(omega, v)))));
            // Graded brackets vanish.
            CHECK(all_zero(hat_nabla_rho(omega, hat_nabla_rho(omega, v))));
            CHECK(all_zero(hat_nabla_theta(omega, hat_nabla_theta(omega, v))));
            auto mixed = hat_nabla_rho(omega, hat_nabla_theta(omega, v));
            auto mixed2 = hat_nabla_theta(omega, hat_nabla_rho(omega, v));
            for (std::size_t i = 0; i < v.size(); ++i)
                CHECK((mixed[i] + mixed2[i]).is_zero());
            auto c1 = hat_nabla_u(omega, hat_nabla_rho(omega, v));
            auto c2 = hat_nabla_rho(omega, hat_nabla_u(omega, v));
            CHECK(all_zero(diff(c1, c2)));
        }
    }
}

TEST_CASE("nu map") {
    Chart x = x_chart(sig);
    Chart d = delta_chart(sig);
    ChartFunction theta = ChartFunction::odd_coordinate(d, "theta");
    ChartFunction rho = ChartFunction::odd_coordinate(d, "rho");
    Rng rng(217);
    for (int it = 0; it < 15; ++it) {
        ChartFunction h = testing::rand_function(x, rng, 3);
        SuperCoefficients dummy = super_coefficients(h, 0); // shape sanity
        (void)dummy;
        // nu(f + theta g) = f - theta rho f'.
        ChartFunction f_part(d);
        for (const auto& [k, c] : h.terms())
            if (k.second == 0)
                f_part.add_term(k.first, 0, c);
        ChartFunction want = f_part - theta * rho * f_part.d_even();
        CHECK(nu_map(h, d) == want);
        // The generator form with generator theta agrees.
        ChartFunction gen = ChartFunction::odd_coordinate(x, "theta");
        CHECK(nu_map_generator(h, gen, d) == want);
        // Images are dual functions.
        CHECK(is_dual_function(nu_map(h, d)));
    }
}

TEST_CASE("lambda of a projected change") {
    Chart x = x_chart(sig);
    ChartFunction z = ChartFunction::even_coordinate(x);
    ChartFunction theta = ChartFunction::odd_coordinate(x, "theta");
    ChartFunction ell = ChartFunction::from_coefficient(x, parse_element(sig, "e1"));
    CoordinateChange c(z * Rational(2) + ChartFunction::one(x),
                       theta * Rational(3) + ell);
    ChartFunction r = lambda_of_change(c);
    CHECK(r == ChartFunction::scalar(x, Rational(2, 3)));
    // Z with a theta term is rejected.
    CoordinateChange bad(z + theta * ChartFunction::from_coefficient(
                                         x, parse_element(sig, "e2")),
                         theta);
    CHECK_THROWS_AS(lambda_of_change(bad), std::invalid_argument);
}

TEST_CASE("delta images preserve duality and respect composition") {
    Chart x = x_chart(sig);
    Chart d = delta_chart(sig);
    ChartFunction z = ChartFunction::even_coordinate(x);
    ChartFunction theta = ChartFunction::odd_coordinate(x, "theta");
    ChartFunction ell = ChartFunction::from_coefficient(x, parse_element(sig, "e1"));
    CoordinateChange c(z * Rational(3) + ChartFunction::scalar(x, Rational(1, 2)),
                       theta * Rational(2) + ell);
    auto images = delta_images(c, d);
    Rng rng(219);
    for (int it = 0; it < 10; ++it) {
        // Substituting the images into a dual function gives a dual function.
        ChartFunction f = dual_element(d, rng);
        CHECK(is_dual_function(f.substitute(images)));
    }
    // Identity change induces the identity images.
    auto id_images = delta_images(identity_change(x), d);
    ChartFunction g = testing::rand_function(d, rng, 2);
    CHECK(g.substitute(id_images) == g);
    // Functorial under composition of changes.
    CoordinateChange c2(z + theta * ell, theta * Rational(2));
    auto im1 = delta_images(c, d);
    auto im2 = delta_images(c2, d);
    auto im12 = delta_images(compose(c, c2), d);
    ChartFunction f = dual_element(d, rng) + testing::rand_function(d, rng, 2);
    CHECK(f.substitute(im12) == f.substitute(im1).substitute(im2));
    // Explicit scaling example: Z = 2z, Theta = theta gives rho -> 2 rho.
    CoordinateChange scalec(z * Rational(2), theta);
    auto ims = delta_images(scalec, d);
    ChartFunction rho_d = ChartFunction::odd_coordinate(d, "rho");
    CHECK(ims.at("rho") == rho_d * Rational(2));
}

TEST_CASE("transition operators form a cocycle") {
    Chart x = x_chart(sig);
    ChartFunction z = ChartFunction::even_coordinate(x);
    ChartFunction theta = ChartFunction::odd_coordinate(x, "theta");
    ChartFunction e1 = ChartFunction::from_coefficient(x, parse_element(sig, "e1"));
    ChartFunction e2 = ChartFunction::from_coefficient(x, parse_element(sig, "e2"));
    CoordinateChange ci(z + ChartFunction::one(x), theta);
    CoordinateChange cj(z * Rational(2) + theta * e1, theta * Rational(3) + e2);
    CoordinateChange ck(z - theta * e2, theta + e1);
    CHECK(transition_cocycle(ci, ci) == ChartOperator::identity(x));
    ChartOperator dij = transition_cocycle(ci, cj);
    ChartOperator djk = transition_cocycle(cj, ck);
    ChartOperator dik = transition_cocycle(ci, ck);
    CHECK(dij * djk == dik);
}

TEST_CASE("double dual round trip is the identity") {
    Chart x = x_chart(sig);
    Chart d = delta_chart(sig);
    Rng rng(223);
    for (int it = 0; it < 15; ++it) {
        ChartFunction h = testing::rand_function(x, rng, 3);
        CHECK(double_dual_roundtrip(h, d) == h);
    }
}
