#include "supercurve/chart.hpp"
#include "supercurve/detail/lex.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace supercurve {

Chart::Chart(AlgebraSignature sig, std::string even, std::vector<std::string> odd)
    : algebra(std::move(sig)), even_coord(std::move(even)), odd_coords(std::move(odd)) {
    for (const auto& n : odd_coords)
        if (algebra.odd_index(n) >= 0 || algebra.even_index(n) >= 0 || n == even_coord)
            throw std::invalid_argument("chart coordinate name collides: " + n);
    if (odd_coords.size() > 31)
        throw std::invalid_argument("too many odd coordinates");
}

int Chart::odd_index(const std::string& name) const {
    auto it = std::find(odd_coords.begin(), odd_coords.end(), name);
    return it == odd_coords.end() ? -1 : static_cast<int>(it - odd_coords.begin());
}

Chart x_chart(const AlgebraSignature& sig) { return Chart(sig, "z", {"theta"}); }
Chart dual_chart(const AlgebraSignature& sig) { return Chart(sig, "u", {"rho"}); }
Chart delta_chart(const AlgebraSignature& sig) { return Chart(sig, "z", {"theta", "rho"}); }

ChartFunction ChartFunction::zero(const Chart& c) { return ChartFunction(c); }

ChartFunction ChartFunction::one(const Chart& c) { return scalar(c, 1); }

ChartFunction ChartFunction::scalar(const Chart& c, const Rational& r) {
    ChartFunction f(c);
    f.add_term(0, 0, GrassmannElement::scalar(c.algebra, r));
    return f;
}

ChartFunction ChartFunction::from_coefficient(const Chart& c, const GrassmannElement& g) {
    if (!(g.signature() == c.algebra))
        throw std::invalid_argument("coefficient signature does not match chart algebra");
    ChartFunction f(c);
    f.add_term(0, 0, g);
    return f;
}

ChartFunction ChartFunction::even_coordinate(const Chart& c) {
    ChartFunction f(c);
    f.add_term(1, 0, GrassmannElement::one(c.algebra));
    return f;
}

ChartFunction ChartFunction::odd_coordinate(const Chart& c, const std::string& name) {
    int i = c.odd_index(name);
    if (i < 0)
        throw std::invalid_argument("unknown odd coordinate: " + name);
    ChartFunction f(c);
    f.add_term(0, std::uint32_t(1) << i, GrassmannElement::one(c.algebra));
    return f;
}

bool ChartFunction::operator==(const ChartFunction& o) const {
    return chart_ == o.chart_ && terms_ == o.terms_;
}

void ChartFunction::add_term(int z_deg, std::uint32_t mask, const GrassmannElement& g) {
    if (g.is_zero())
        return;
    auto key = std::make_pair(z_deg, mask);
    auto [it, inserted] = terms_.try_emplace(key, g);
    if (!inserted) {
        it->second = it->second + g;
        if (it->second.is_zero())
            terms_.erase(it);
    }
}

GrassmannElement ChartFunction::coefficient(int z_deg, std::uint32_t mask) const {
    auto it = terms_.find({z_deg, mask});
    return it == terms_.end() ? GrassmannElement::zero(chart_.algebra) : it->second;
}

static void require_same_chart(const ChartFunction& x, const ChartFunction& y) {
    if (!(x.chart() == y.chart()))
        throw std::invalid_argument("chart mismatch");
}

ChartFunction ChartFunction::operator+(const ChartFunction& o) const {
    require_same_chart(*this, o);
    ChartFunction r = *this;
    for (const auto& [k, g] : o.terms_)
        r.add_term(k.first, k.second, g);
    return r;
}

ChartFunction ChartFunction::operator-(const ChartFunction& o) const { return *this + (-o); }

ChartFunction ChartFunction::operator-() const {
    ChartFunction r(chart_);
    for (const auto& [k, g] : terms_)
        r.terms_[k] = -g;
    return r;
}

ChartFunction ChartFunction::operator*(const ChartFunction& o) const {
    require_same_chart(*this, o);
    ChartFunction r(chart_);
    for (const auto& [k1, g1] : terms_) {
        for (const auto& [k2, g2] : o.terms_) {
            int s = merge_sign(k1.second, k2.second);
            if (s == 0)
                continue;
            // Move g2 left through the odd-coordinate word of the first term.
            GrassmannElement c2 = (std::popcount(k1.second) & 1) ? g2.parity_flip() : g2;
            GrassmannElement g = gmul(g1, c2) * Rational(s);
            r.add_term(k1.first + k2.first, k1.second | k2.second, g);
        }
    }
    return r;
}

ChartFunction ChartFunction::operator*(const Rational& c) const {
    ChartFunction r(chart_);
    if (c == 0)
        return r;
    for (const auto& [k, g] : terms_)
        r.terms_[k] = g * c;
    return r;
}

ChartFunction ChartFunction::operator*(const GrassmannElement& g) const {
    return *this * from_coefficient(chart_, g);
}

ChartFunction operator*(const GrassmannElement& g, const ChartFunction& f) {
    return ChartFunction::from_coefficient(f.chart(), g) * f;
}

ChartFunction operator*(const Rational& c, const ChartFunction& f) { return f * c; }

std::optional<int> ChartFunction::parity() const {
    std::optional<int> p;
    for (const auto& [k, g] : terms_) {
        auto gp = g.parity();
        if (!gp)
            return std::nullopt;
        int tp = (*gp + std::popcount(k.second)) & 1;
        if (!p)
            p = tp;
        else if (*p != tp)
            return std::nullopt;
    }
    return p ? p : std::optional<int>(0);
}

ChartFunction ChartFunction::parity_flip() const {
    ChartFunction r(chart_);
    for (const auto& [k, g] : terms_) {
        GrassmannElement gg = g.parity_flip();
        if (std::popcount(k.second) & 1)
            gg = -gg;
        r.terms_[k] = gg;
    }
    return r;
}

ChartFunction ChartFunction::d_even() const {
    ChartFunction r(chart_);
    for (const auto& [k, g] : terms_)
        if (k.first > 0)
            r.add_term(k.first - 1, k.second, g * Rational(k.first));
    return r;
}

ChartFunction ChartFunction::d_odd(const std::string& name) const {
    int i = chart_.odd_index(name);
    if (i < 0)
        throw std::invalid_argument("unknown odd coordinate: " + name);
    std::uint32_t bit = std::uint32_t(1) << i;
    ChartFunction r(chart_);
    for (const auto& [k, g] : terms_) {
        if (!(k.second & bit))
            continue;
        // Left derivative: pass over the coefficient, then over the odd
        // coordinates preceding xi_i in the word.
        int preceding = std::popcount(k.second & (bit - 1));
        GrassmannElement gg = g.parity_flip();
        if (preceding & 1)
            gg = -gg;
        r.add_term(k.first, k.second & ~bit, gg);
    }
    return r;
}

bool ChartFunction::depends_on_odd(const std::string& name) const {
    int i = chart_.odd_index(name);
    if (i < 0)
        return false;
    std::uint32_t bit = std::uint32_t(1) << i;
    return std::any_of(terms_.begin(), terms_.end(),
                       [&](const auto& t) { return (t.first.second & bit) != 0; });
}

int ChartFunction::even_coord_degree() const {
    int d = 0;
    for (const auto& [k, g] : terms_)
        d = std::max(d, k.first);
    return d;
}

ChartFunction ChartFunction::substitute(const std::map<std::string, ChartFunction>& images) const {
    auto zit = images.find(chart_.even_coord);
    if (zit == images.end())
        throw std::invalid_argument("substitute: missing image of " + chart_.even_coord);
    const Chart& target = zit->second.chart();
    {
        auto zp = zit->second.parity();
        if (!zp || *zp != 0)
            if (!zit->second.is_zero())
                throw std::invalid_argument("substitute: image of even coordinate must be even");
    }
    std::vector<const ChartFunction*> odd_images(chart_.odd_coords.size(), nullptr);
    for (std::size_t i = 0; i < chart_.odd_coords.size(); ++i) {
        auto it = images.find(chart_.odd_coords[i]);
        if (it != images.end()) {
            if (!(it->second.chart() == target))
                throw std::invalid_argument("substitute: images on different charts");
            auto p = it->second.parity();
            if (!it->second.is_zero() && (!p || *p != 1))
                throw std::invalid_argument("substitute: image of odd coordinate must be odd");
            odd_images[i] = &it->second;
        }
    }
    ChartFunction result(target);
    // Cache powers of the even image.
    std::vector<ChartFunction> zpow{ChartFunction::one(target)};
    for (const auto& [k, g] : terms_) {
        while (static_cast<int>(zpow.size()) <= k.first)
            zpow.push_back(zpow.back() * zit->second);
        ChartFunction term = ChartFunction::from_coefficient(target, g) * zpow[k.first];
        std::uint32_t m = k.second;
        while (m) {
            int i = std::countr_zero(m);
            m &= m - 1;
            if (!odd_images[i])
                throw std::invalid_argument("substitute: missing image of " +
                                            chart_.odd_coords[i]);
            term = term * *odd_images[i];
        }
        result = result + term;
    }
    return result;
}

namespace {

// Every term must carry odd content somewhere; such elements are nilpotent.
bool term_nilpotent(const std::pair<int, std::uint32_t>& key, const GrassmannElement& g) {
    if (key.second != 0)
        return true;
    return g.is_nilpotent();
}

} // namespace

ChartFunction ChartFunction::inverse() const {
    Rational c = coefficient(0, 0).body();
    if (c == 0)
        throw std::domain_error("inverse: zero constant term");
    ChartFunction rest = *this - scalar(chart_, c);
    for (const auto& [k, g] : rest.terms_)
        if (!term_nilpotent(k, g))
            throw std::domain_error("inverse: non-nilpotent remainder");
    ChartFunction n = rest * Rational(Rational(1) / c);
    ChartFunction acc = one(chart_);
    ChartFunction pw = one(chart_);
    std::size_t bound = chart_.algebra.odd.size() + chart_.odd_coords.size() + 1;
    for (std::size_t j = 1; j <= bound; ++j) {
        pw = pw * (-n);
        if (pw.is_zero())
            break;
        acc = acc + pw;
    }
    return acc * Rational(Rational(1) / c);
}

ChartFunction ChartFunction::expn() const {
    for (const auto& [k, g] : terms_)
        if (!term_nilpotent(k, g))
            throw std::domain_error("expn: exponent must be nilpotent");
    auto p = parity();
    if (!p || *p != 0)
        throw std::domain_error("expn: exponent must be even");
    ChartFunction acc = one(chart_);
    ChartFunction pw = one(chart_);
    Rational fact = 1;
    std::size_t bound = chart_.algebra.odd.size() + chart_.odd_coords.size() + 1;
    for (std::size_t j = 1; j <= bound; ++j) {
        pw = pw * *this;
        if (pw.is_zero())
            break;
        fact *= int(j);
        acc = acc + pw * Rational(Rational(1) / fact);
    }
    return acc;
}

ChartFunction ChartFunction::logn() const {
    if (coefficient(0, 0).body() != 1)
        throw std::domain_error("logn: constant term must be 1");
    ChartFunction n = *this - one(chart_);
    for (const auto& [k, g] : n.terms_)
        if (!term_nilpotent(k, g))
            throw std::domain_error("logn: argument must be 1 + nilpotent");
    ChartFunction acc = zero(chart_);
    ChartFunction pw = one(chart_);
    std::size_t bound = chart_.algebra.odd.size() + chart_.odd_coords.size() + 1;
    for (std::size_t j = 1; j <= bound; ++j) {
        pw = pw * n;
        if (pw.is_zero())
            break;
        Rational coeff = Rational(1) / Rational(int(j));
        if (j % 2 == 0)
            coeff = -coeff;
        acc = acc + pw * coeff;
    }
    return acc;
}

SuperCoefficients super_coefficients(const ChartFunction& f, int z_deg) {
    if (f.chart().odd_coords.size() != 1)
        throw std::invalid_argument("super_coefficients: chart must have one odd coordinate");
    // f = z^k (a + theta b):  theta b = flip(b) theta, so the stored
    // coefficient of the theta word is flip(b).
    return {f.coefficient(z_deg, 0), f.coefficient(z_deg, 1).parity_flip()};
}

DeltaComponents delta_components(const ChartFunction& f) {
    const Chart& c = f.chart();
    if (c.odd_coords.size() != 2)
        throw std::invalid_argument("delta_components: chart must have two odd coordinates");
    Chart base(c.algebra, c.even_coord, {});
    auto pick = [&](std::uint32_t mask, bool flip) {
        ChartFunction out(c);
        for (const auto& [k, g] : f.terms())
            if (k.second == mask)
                out.add_term(k.first, 0, flip ? g.parity_flip() : g);
        return out;
    };
    // f = A + theta alpha + rho beta + theta rho B; the stored coefficients
    // are A, flip(alpha), flip(beta), B respectively.
    return {pick(0, false), pick(1, true), pick(2, true), pick(3, false)};
}

ChartFunction from_delta_components(const Chart& c, const ChartFunction& a,
                                    const ChartFunction& alpha, const ChartFunction& beta,
                                    const ChartFunction& b) {
    ChartFunction theta = ChartFunction::odd_coordinate(c, c.odd_coords[0]);
    ChartFunction rho = ChartFunction::odd_coordinate(c, c.odd_coords[1]);
    return a + theta * alpha + rho * beta + theta * rho * b;
}

ChartFunction promote(const ChartFunction& f, const Chart& target) {
    const Chart& src = f.chart();
    if (!(src.algebra == target.algebra) || src.even_coord != target.even_coord)
        throw std::invalid_argument("promote: incompatible charts");
    std::vector<int> remap(src.odd_coords.size());
    for (std::size_t i = 0; i < src.odd_coords.size(); ++i) {
        remap[i] = target.odd_index(src.odd_coords[i]);
        if (remap[i] < 0)
            throw std::invalid_argument("promote: target lacks coordinate " +
                                        src.odd_coords[i]);
    }
    ChartFunction out(target);
    for (const auto& [k, g] : f.terms()) {
        std::uint32_t mask = 0;
        int sign = 1;
        // Remap preserves relative order when target lists the shared
        // coordinates in the same order; count inversions to be safe.
        std::vector<int> letters;
        std::uint32_t m = k.second;
        while (m) {
            int i = std::countr_zero(m);
            m &= m - 1;
            letters.push_back(remap[i]);
        }
        for (std::size_t a2 = 0; a2 < letters.size(); ++a2)
            for (std::size_t b2 = a2 + 1; b2 < letters.size(); ++b2)
                if (letters[a2] > letters[b2])
                    sign = -sign;
        for (int l : letters)
            mask |= std::uint32_t(1) << l;
        out.add_term(k.first, mask, sign == 1 ? g : -g);
    }
    return out;
}

CoordinateChange::CoordinateChange(ChartFunction z_image, ChartFunction theta_image)
    : Z(std::move(z_image)), Theta(std::move(theta_image)) {
    if (!(Z.chart() == Theta.chart()))
        throw std::invalid_argument("coordinate change images on different charts");
    auto zp = Z.parity();
    if (!Z.is_zero() && (!zp || *zp != 0))
        throw std::invalid_argument("coordinate change: Z must be even");
    auto tp = Theta.parity();
    if (!Theta.is_zero() && (!tp || *tp != 1))
        throw std::invalid_argument("coordinate change: Theta must be odd");
}

ChartFunction apply_change(const ChartFunction& f, const CoordinateChange& c) {
    if (f.chart().odd_coords.size() != 1)
        throw std::invalid_argument("apply_change: expected a (z; theta) chart function");
    return f.substitute({{f.chart().even_coord, c.Z}, {f.chart().odd_coords[0], c.Theta}});
}

CoordinateChange compose(const CoordinateChange& outer, const CoordinateChange& inner) {
    return CoordinateChange(apply_change(outer.Z, inner), apply_change(outer.Theta, inner));
}

CoordinateChange identity_change(const Chart& c) {
    return CoordinateChange(ChartFunction::even_coordinate(c),
                            ChartFunction::odd_coordinate(c, c.odd_coords[0]));
}

CoordinateChange invert_affine(const CoordinateChange& c) {
    const Chart& chart = c.chart();
    const std::string& theta = chart.odd_coords[0];
    for (const auto& [k, g] : c.Z.terms())
        if (!((k.first == 0 && k.second <= 1) || (k.first == 1 && k.second == 0)))
            throw std::domain_error("invert_affine: Z is not affine");
    for (const auto& [k, g] : c.Theta.terms())
        if (!(k.first == 0 && k.second <= 1))
            throw std::domain_error("invert_affine: Theta is not affine");
    GrassmannElement a = c.Z.coefficient(1, 0);
    GrassmannElement b = c.Z.coefficient(0, 0);
    GrassmannElement nu = c.Z.coefficient(0, 1);    // stored coefficient of theta
    GrassmannElement cc = c.Theta.coefficient(0, 1);
    GrassmannElement mu = c.Theta.coefficient(0, 0);
    GrassmannElement ai = ginv(a);
    GrassmannElement ci = ginv(cc);
    ChartFunction th = ChartFunction::odd_coordinate(chart, theta);
    ChartFunction zf = ChartFunction::even_coordinate(chart);
    // Theta = cc theta + mu  =>  theta' = (theta - mu) cc^{-1} (entries even
    // or absorbed termwise; cc is even so left/right division agree).
    ChartFunction theta_inv = (th - ChartFunction::from_coefficient(chart, mu)) *
                              ChartFunction::from_coefficient(chart, ci);
    // Z = a z + b + (stored nu) theta  =>  z' = a^{-1}(z - b - nu theta').
    ChartFunction z_inv =
        (zf - ChartFunction::from_coefficient(chart, b) -
         ChartFunction::from_coefficient(chart, nu) * theta_inv) *
        ChartFunction::from_coefficient(chart, ai);
    CoordinateChange inv(z_inv, theta_inv);
    // Verify on generators.
    if (!(apply_change(c.Z, inv) == zf) || !(apply_change(c.Theta, inv) == th))
        throw std::domain_error("invert_affine: inversion failed verification");
    return inv;
}

ChartFunction parse_chart_function(const Chart& chart, const std::string& text) {
    using detail::Token;
    auto tokens = detail::lex(text);
    ChartFunction total(chart);
    std::size_t i = 0;
    bool first = true;
    while (i < tokens.size() || first) {
        Rational sign = 1;
        if (i < tokens.size() &&
            (tokens[i].kind == Token::Plus || tokens[i].kind == Token::Minus)) {
            if (tokens[i].kind == Token::Minus)
                sign = -1;
            ++i;
        } else if (!first) {
            throw std::runtime_error("parse error at offset " +
                                     std::to_string(tokens[i].pos) + ": expected '+' or '-'");
        }
        first = false;
        if (i >= tokens.size())
            throw std::runtime_error("parse error: empty term at end of input");
        ChartFunction term = ChartFunction::scalar(chart, sign);
        bool got_factor = false;
        while (i < tokens.size() && tokens[i].kind != Token::Plus &&
               tokens[i].kind != Token::Minus) {
            const Token& t = tokens[i];
            if (t.kind == Token::Rat || t.kind == Token::Int) {
                auto r = parse_rational(t.text);
                if (!r)
                    throw std::runtime_error("parse error at offset " + std::to_string(t.pos) +
                                             ": malformed rational '" + t.text + "'");
                term = term * *r;
                ++i;
            } else if (t.kind == Token::Name) {
                int power = 1;
                bool has_power = false;
                std::size_t next = i + 1;
                if (next < tokens.size() && tokens[next].kind == Token::Caret) {
                    if (next + 1 >= tokens.size() || tokens[next + 1].kind != Token::Int)
                        throw std::runtime_error("parse error at offset " +
                                                 std::to_string(tokens[next].pos) +
                                                 ": expected integer exponent after '^'");
                    power = std::stoi(tokens[next + 1].text);
                    has_power = true;
                    i = next + 2;
                } else {
                    ++i;
                }
                if (t.text == chart.even_coord) {
                    ChartFunction zf = ChartFunction::even_coordinate(chart);
                    for (int p = 0; p < power; ++p)
                        term = term * zf;
                } else if (chart.odd_index(t.text) >= 0) {
                    if (has_power && power != 1)
                        throw std::runtime_error("parse error at offset " +
                                                 std::to_string(t.pos) +
                                                 ": odd coordinate cannot carry an exponent");
                    term = term * ChartFunction::odd_coordinate(chart, t.text);
                } else if (chart.algebra.even_index(t.text) >= 0) {
                    term = term * ChartFunction::from_coefficient(
                                      chart, GrassmannElement::symbol(chart.algebra, t.text,
                                                                      power));
                } else if (chart.algebra.odd_index(t.text) >= 0) {
                    if (has_power && power != 1)
                        throw std::runtime_error("parse error at offset " +
                                                 std::to_string(t.pos) +
                                                 ": odd generator cannot carry an exponent");
                    term = term * ChartFunction::from_coefficient(
                                      chart, GrassmannElement::generator(chart.algebra, t.text));
                } else {
                    throw std::runtime_error("parse error at offset " + std::to_string(t.pos) +
                                             ": unknown name '" + t.text + "'");
                }
            } else {
                throw std::runtime_error("parse error at offset " + std::to_string(t.pos) +
                                         ": unexpected token '" + t.text + "'");
            }
            got_factor = true;
        }
        if (!got_factor)
            throw std::runtime_error("parse error: empty term");
        total = total + term;
    }
    return total;
}

std::string ChartFunction::to_string() const {
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    // One term per Grassmann monomial, in the shared grammar: rational,
    // even symbols, odd generators, z power, odd coordinates.
    for (const auto& [k, g] : terms_) {
        for (const auto& [m, c] : g.terms()) {
            bool neg = c < 0;
            if (first) {
                if (neg)
                    os << "-";
                first = false;
            } else {
                os << (neg ? " - " : " + ");
            }
            std::vector<std::string> factors;
            for (std::size_t i = 0; i < m.pow.size(); ++i)
                if (m.pow[i] > 0)
                    factors.push_back(chart_.algebra.even[i] +
                                      (m.pow[i] > 1 ? "^" + std::to_string(m.pow[i]) : ""));
            for (std::size_t i = 0; i < chart_.algebra.odd.size(); ++i)
                if (m.mask & (std::uint32_t(1) << i))
                    factors.push_back(chart_.algebra.odd[i]);
            if (k.first > 0)
                factors.push_back(chart_.even_coord +
                                  (k.first > 1 ? "^" + std::to_string(k.first) : ""));
            for (std::size_t i = 0; i < chart_.odd_coords.size(); ++i)
                if (k.second & (std::uint32_t(1) << i))
                    factors.push_back(chart_.odd_coords[i]);
            Rational mag = neg ? Rational(-c) : c;
            if (mag != 1 || factors.empty())
                os << rational_to_string(mag) << (factors.empty() ? "" : " ");
            for (std::size_t i = 0; i < factors.size(); ++i)
                os << factors[i] << (i + 1 < factors.size() ? " " : "");
        }
    }
    return os.str();
}

} // namespace supercurve
