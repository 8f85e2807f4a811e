#pragma once

#include "supercurve/chart.hpp"
#include "supercurve/connection.hpp"

#include <random>
#include <vector>

namespace supercurve::testing {

using Rng = std::mt19937;

inline Rational rand_rational(Rng& rng) {
    std::uniform_int_distribution<int> num(-4, 4);
    std::uniform_int_distribution<int> den(1, 3);
    return Rational(num(rng), den(rng));
}

// Random element with even-symbol degree <= deg; parity -1 = mixed.
inline GrassmannElement rand_element(const AlgebraSignature& sig, Rng& rng, int deg = 1,
                                     int parity = -1) {
    GrassmannElement out(sig);
    std::uniform_int_distribution<int> pick(0, 2);
    std::uint32_t masks = std::uint32_t(1) << sig.odd.size();
    for (std::uint32_t mask = 0; mask < masks; ++mask) {
        if (parity >= 0 && (std::popcount(mask) & 1) != parity)
            continue;
        for (int d = 0; d <= deg; ++d) {
            if (pick(rng) != 0)
                continue;
            std::vector<int> pow(sig.even.size(), 0);
            if (!pow.empty())
                pow[0] = d;
            else if (d > 0)
                continue;
            out.add_term(GrassmannMonomial{mask, pow}, rand_rational(rng));
        }
    }
    return out;
}

inline GrassmannElement rand_nilpotent(const AlgebraSignature& sig, Rng& rng, int parity) {
    GrassmannElement g = rand_element(sig, rng, 0, parity);
    if (parity == 0)
        g = g - GrassmannElement::scalar(sig, g.body());
    return g;
}

inline ChartFunction rand_function(const Chart& c, Rng& rng, int zdeg = 2, int parity = -1) {
    ChartFunction out(c);
    std::uniform_int_distribution<int> pick(0, 2);
    std::uint32_t masks = std::uint32_t(1) << c.odd_coords.size();
    for (std::uint32_t mask = 0; mask < masks; ++mask)
        for (int k = 0; k <= zdeg; ++k) {
            if (pick(rng) != 0)
                continue;
            int want = parity < 0 ? -1 : (parity + std::popcount(mask)) & 1;
            GrassmannElement g = rand_element(c.algebra, rng, 1, want);
            if (!g.is_zero())
                out.add_term(k, mask, g);
        }
    return out;
}

// Invertible gauge with every entry an even-parity function: identity body
// plus nilpotent even souls.  Conjugating d by such a matrix stays in the
// standard form d + omega and is flat by construction.
inline SuperMatrix rand_gauge(const Chart& c, int p, int q, Rng& rng, int zdeg = 1) {
    SuperMatrix g = SuperMatrix::identity(c, p, q);
    int n = p + q;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            ChartFunction f = rand_function(c, rng, zdeg, 0);
            ChartFunction soul(c);
            for (const auto& [k, coeff] : f.terms())
                soul.add_term(k.first, k.second,
                              k.second == 0 ? coeff.soul() : coeff);
            g.set(i, j, g.at(i, j) + soul);
        }
    return g;
}

// Flat connection g^{-1} d g of an all-even gauge.
inline ConnectionForm gauge_flat_connection(const SuperMatrix& g) {
    const Chart& c = g.chart();
    ConnectionForm omega = ConnectionForm::zero(c, g.p(), g.q());
    SuperMatrix ginv = g.inverse();
    omega.omega_even = ginv * g.map_entries([](const ChartFunction& f) { return f.d_even(); }, 0);
    for (const auto& name : c.odd_coords)
        omega.omega_odd[name] = ginv * g.map_entries(
            [&name](const ChartFunction& f) { return f.d_odd(name); }, 1);
    return omega;
}

inline std::vector<ChartFunction> rand_column(const Chart& c, Rng& rng, int rows,
                                              int zdeg = 2) {
    std::vector<ChartFunction> v;
    for (int i = 0; i < rows; ++i)
        v.push_back(rand_function(c, rng, zdeg));
    return v;
}

} // namespace supercurve::testing
