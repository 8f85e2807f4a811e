#include "supercurve/expansion.hpp"

#include <bit>
#include <stdexcept>

namespace supercurve {

namespace {

std::vector<ChartFunction> scale_left(const ChartFunction& s,
                                      const std::vector<ChartFunction>& v) {
    std::vector<ChartFunction> out;
    out.reserve(v.size());
    for (const auto& x : v)
        out.push_back(s * x);
    return out;
}

std::vector<ChartFunction> sub(const std::vector<ChartFunction>& x,
                               const std::vector<ChartFunction>& y) {
    std::vector<ChartFunction> out;
    out.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out.push_back(x[i] - y[i]);
    return out;
}

bool all_zero(const std::vector<ChartFunction>& v) {
    for (const auto& x : v)
        if (!x.is_zero())
            return false;
    return true;
}

} // namespace

OddExpansion expand_odd(const std::vector<ChartFunction>& a,
                        const std::vector<std::string>& fiber,
                        const std::vector<FiberDerivative>& nabla) {
    if (a.empty())
        throw std::invalid_argument("expand_odd: empty element");
    if (fiber.size() != nabla.size())
        throw std::invalid_argument("expand_odd: fiber/derivative count mismatch");
    const Chart& chart = a[0].chart();

    // Peel variables in ascending order.  At step i every stored component
    // has odd word over fiber indices < i; splitting x = x0 + theta_i x1
    // appends theta_i on the right of the word, keeping it ascending.
    std::map<std::uint32_t, std::vector<ChartFunction>> right;
    right[0] = a;
    for (std::size_t i = 0; i < fiber.size(); ++i) {
        ChartFunction theta = ChartFunction::odd_coordinate(chart, fiber[i]);
        std::map<std::uint32_t, std::vector<ChartFunction>> next;
        for (const auto& [mask, x] : right) {
            std::vector<ChartFunction> x1 = nabla[i](x);
            std::vector<ChartFunction> x0 = sub(x, scale_left(theta, x1));
            if (!all_zero(x0))
                next[mask] = std::move(x0);
            if (!all_zero(x1))
                next[mask | (std::uint32_t(1) << i)] = std::move(x1);
        }
        right = std::move(next);
    }

    if (right.empty())
        right[0] = std::vector<ChartFunction>(a.size(), ChartFunction::zero(chart));

    OddExpansion out;
    out.fiber = fiber;
    for (auto& [mask, x] : right) {
        // theta^mu x = flip^{|mu|}(x) theta^mu.
        if (std::popcount(mask) & 1)
            for (auto& c : x)
                c = c.parity_flip();
        out.components[mask] = std::move(x);
    }
    return out;
}

std::vector<ChartFunction> reassemble(const OddExpansion& e) {
    if (e.components.empty())
        throw std::invalid_argument("reassemble: no components");
    const Chart& chart = e.components.begin()->second[0].chart();
    std::size_t width = e.components.begin()->second.size();
    std::vector<ChartFunction> out(width, ChartFunction::zero(chart));
    for (const auto& [mask, x] : e.components) {
        ChartFunction word = ChartFunction::one(chart);
        for (std::size_t i = 0; i < e.fiber.size(); ++i)
            if (mask & (std::uint32_t(1) << i))
                word = word * ChartFunction::odd_coordinate(chart, e.fiber[i]);
        for (std::size_t k = 0; k < width; ++k)
            out[k] = out[k] + x[k] * word;
    }
    return out;
}

} // namespace supercurve
