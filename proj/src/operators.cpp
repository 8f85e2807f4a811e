#include "supercurve/operators.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace supercurve {

ChartOperator ChartOperator::zero(const Chart& c) { return ChartOperator(c); }

ChartOperator ChartOperator::identity(const Chart& c) {
    ChartOperator op(c);
    op.add_term(0, 0, ChartFunction::one(c));
    return op;
}

ChartOperator ChartOperator::multiplication(const ChartFunction& f) {
    ChartOperator op(f.chart());
    op.add_term(0, 0, f);
    return op;
}

ChartOperator ChartOperator::d_even_op(const Chart& c) {
    ChartOperator op(c);
    op.add_term(1, 0, ChartFunction::one(c));
    return op;
}

ChartOperator ChartOperator::d_odd_op(const Chart& c, const std::string& name) {
    int i = c.odd_index(name);
    if (i < 0)
        throw std::invalid_argument("d_odd_op: unknown odd coordinate " + name);
    ChartOperator op(c);
    op.add_term(0, std::uint32_t(1) << i, ChartFunction::one(c));
    return op;
}

bool ChartOperator::operator==(const ChartOperator& o) const {
    return chart_ == o.chart_ && terms_ == o.terms_;
}

void ChartOperator::add_term(int p, std::uint32_t q, const ChartFunction& c) {
    if (c.is_zero())
        return;
    auto key = std::make_pair(p, q);
    auto [it, inserted] = terms_.try_emplace(key, c);
    if (!inserted) {
        it->second = it->second + c;
        if (it->second.is_zero())
            terms_.erase(it);
    }
}

int ChartOperator::max_even_order() const {
    int m = 0;
    for (const auto& [k, c] : terms_)
        m = std::max(m, k.first);
    return m;
}

ChartOperator ChartOperator::operator+(const ChartOperator& o) const {
    if (!(chart_ == o.chart_))
        throw std::invalid_argument("operator chart mismatch");
    ChartOperator r = *this;
    for (const auto& [k, c] : o.terms_)
        r.add_term(k.first, k.second, c);
    return r;
}

ChartOperator ChartOperator::operator-(const ChartOperator& o) const {
    if (!(chart_ == o.chart_))
        throw std::invalid_argument("operator chart mismatch");
    ChartOperator r = *this;
    for (const auto& [k, c] : o.terms_)
        r.add_term(k.first, k.second, -c);
    return r;
}

namespace {

// Applies the left odd derivative word of `mask` (ascending word, rightmost
// factor acts first) to f.
ChartFunction apply_odd_word(const ChartFunction& f, std::uint32_t mask) {
    ChartFunction r = f;
    const Chart& c = f.chart();
    for (int i = static_cast<int>(c.odd_coords.size()) - 1; i >= 0; --i)
        if (mask & (std::uint32_t(1) << i))
            r = r.d_odd(c.odd_coords[i]);
    return r;
}

} // namespace

ChartFunction ChartOperator::apply(const ChartFunction& f) const {
    ChartFunction out(chart_);
    for (const auto& [k, c] : terms_) {
        ChartFunction g = apply_odd_word(f, k.second);
        for (int p = 0; p < k.first; ++p)
            g = g.d_even();
        out = out + c * g;
    }
    return out;
}

ChartOperator ChartOperator::operator*(const ChartOperator& o) const {
    if (!(chart_ == o.chart_))
        throw std::invalid_argument("operator chart mismatch");
    ChartOperator result(chart_);
    for (const auto& [k1, c1] : terms_) {
        for (const auto& [k2, c2] : o.terms_) {
            // Normalize  d_z^{p1} d^{q1} . c2  by pushing derivative factors
            // in from the right end of the word.
            std::map<std::pair<int, std::uint32_t>, ChartFunction> cur;
            cur[{0, 0}] = c2;
            auto push = [&](auto&& emit_term) {
                std::map<std::pair<int, std::uint32_t>, ChartFunction> next;
                auto add = [&](int r, std::uint32_t s, const ChartFunction& a) {
                    if (a.is_zero())
                        return;
                    auto [it, ins] = next.try_emplace({r, s}, a);
                    if (!ins) {
                        it->second = it->second + a;
                        if (it->second.is_zero())
                            next.erase(it);
                    }
                };
                for (const auto& [rs, a] : cur)
                    emit_term(rs.first, rs.second, a, add);
                cur = std::move(next);
            };
            for (int i = static_cast<int>(chart_.odd_coords.size()) - 1; i >= 0; --i) {
                std::uint32_t bit = std::uint32_t(1) << i;
                if (!(k1.second & bit))
                    continue;
                push([&](int r, std::uint32_t s, const ChartFunction& a, auto&& add) {
                    // d_i . (a d_z^r d^s) = (d_i a) d_z^r d^s
                    //                      + sigma(a) d_z^r (d_i d^s)
                    add(r, s, a.d_odd(chart_.odd_coords[i]));
                    if (!(s & bit)) {
                        int sign = (std::popcount(s & (bit - 1)) & 1) ? -1 : 1;
                        ChartFunction sa = a.parity_flip();
                        add(r, s | bit, sign == 1 ? sa : -sa);
                    }
                });
            }
            for (int p = 0; p < k1.first; ++p) {
                push([&](int r, std::uint32_t s, const ChartFunction& a, auto&& add) {
                    add(r, s, a.d_even());
                    add(r + 1, s, a);
                });
            }
            // Left coefficient c1, then append the derivative word of k2.
            for (const auto& [rs, a] : cur) {
                int sign = merge_sign(rs.second, k2.second);
                if (sign == 0)
                    continue;
                ChartFunction coeff = c1 * a * Rational(sign);
                result.add_term(rs.first + k2.first, rs.second | k2.second, coeff);
            }
        }
    }
    return result;
}

ChartOperator operator_from_action(const Chart& chart,
                                   const std::function<ChartFunction(const ChartFunction&)>& action,
                                   int max_order, int max_coeff_deg) {
    std::uint32_t masks = std::uint32_t(1) << chart.odd_coords.size();
    auto monomial = [&](int p, std::uint32_t q) {
        ChartFunction m = ChartFunction::one(chart);
        for (int j = 0; j < p; ++j)
            m = m * ChartFunction::even_coordinate(chart);
        for (std::size_t i = 0; i < chart.odd_coords.size(); ++i)
            if (q & (std::uint32_t(1) << i))
                m = m * ChartFunction::odd_coordinate(chart, chart.odd_coords[i]);
        return m;
    };
    ChartOperator op(chart);
    for (std::uint32_t q = 0; q < masks; ++q) {
        // d^q(theta^q) is +-1; fix the scalar once per mask.
        ChartFunction word = monomial(0, q);
        ChartFunction s = apply_odd_word(word, q);
        Rational sq = s.coefficient(0, 0).body();
        Rational pfact = 1;
        for (int p = 0; p <= max_order; ++p) {
            if (p > 0)
                pfact *= p;
            ChartFunction m = monomial(p, q);
            ChartFunction r = action(m) - op.apply(m);
            op.add_term(p, q, r * Rational(Rational(1) / (pfact * sq)));
        }
    }
    for (std::uint32_t q = 0; q < masks; ++q)
        for (int p = 0; p <= max_order + max_coeff_deg; ++p) {
            ChartFunction m = monomial(p, q);
            if (!(action(m) == op.apply(m)))
                throw std::domain_error(
                    "operator_from_action: map is not an operator within the stated bounds");
        }
    return op;
}

ChartOperator rename_chart(const ChartOperator& op, const Chart& target) {
    const Chart& src = op.chart();
    if (src.odd_coords.size() != target.odd_coords.size() ||
        !(src.algebra == target.algebra))
        throw std::invalid_argument("rename_chart: incompatible charts");
    std::map<std::string, ChartFunction> images;
    images[src.even_coord] = ChartFunction::even_coordinate(target);
    for (std::size_t i = 0; i < src.odd_coords.size(); ++i)
        images[src.odd_coords[i]] =
            ChartFunction::odd_coordinate(target, target.odd_coords[i]);
    ChartOperator out(target);
    for (const auto& [k, c] : op.terms())
        out.add_term(k.first, k.second, c.substitute(images));
    return out;
}

std::string ChartOperator::to_string() const {
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first)
            os << " + ";
        first = false;
        os << "(" << c.to_string() << ")";
        if (k.first > 0)
            os << " D" << chart_.even_coord << (k.first > 1 ? "^" + std::to_string(k.first) : "");
        for (std::size_t i = 0; i < chart_.odd_coords.size(); ++i)
            if (k.second & (std::uint32_t(1) << i))
                os << " D" << chart_.odd_coords[i];
    }
    return os.str();
}

} // namespace supercurve
