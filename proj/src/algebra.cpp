#include "supercurve/algebra.hpp"
#include "supercurve/detail/lex.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <numeric>
#include <set>
#include <sstream>

namespace supercurve {

std::string rational_to_string(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

std::optional<Rational> parse_rational(const std::string& text) {
    if (text.empty())
        return std::nullopt;
    std::size_t pos = 0;
    bool neg = false;
    if (text[pos] == '-' || text[pos] == '+') {
        neg = text[pos] == '-';
        ++pos;
    }
    auto digits = [&](std::string& out) {
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            out.push_back(text[pos++]);
        return !out.empty();
    };
    std::string num, den;
    if (!digits(num))
        return std::nullopt;
    if (pos < text.size() && text[pos] == '/') {
        ++pos;
        if (!digits(den))
            return std::nullopt;
    }
    if (pos != text.size())
        return std::nullopt;
    Rational r{boost::multiprecision::cpp_int(num),
               den.empty() ? boost::multiprecision::cpp_int(1)
                           : boost::multiprecision::cpp_int(den)};
    if (den == "0" || (!den.empty() && boost::multiprecision::cpp_int(den) == 0))
        return std::nullopt;
    return neg ? Rational(-r) : r;
}

AlgebraSignature::AlgebraSignature(std::vector<std::string> odd_gens,
                                   std::vector<std::string> even_syms)
    : odd(std::move(odd_gens)), even(std::move(even_syms)) {
    std::set<std::string> seen;
    for (const auto& n : odd)
        if (!seen.insert(n).second)
            throw std::invalid_argument("duplicate name in algebra signature: " + n);
    for (const auto& n : even)
        if (!seen.insert(n).second)
            throw std::invalid_argument("duplicate name in algebra signature: " + n);
    if (odd.size() > 31)
        throw std::invalid_argument("too many odd generators");
}

int AlgebraSignature::odd_index(const std::string& name) const {
    auto it = std::find(odd.begin(), odd.end(), name);
    return it == odd.end() ? -1 : static_cast<int>(it - odd.begin());
}

int AlgebraSignature::even_index(const std::string& name) const {
    auto it = std::find(even.begin(), even.end(), name);
    return it == even.end() ? -1 : static_cast<int>(it - even.begin());
}

int merge_sign(std::uint32_t a, std::uint32_t b) {
    if (a & b)
        return 0;
    // Count pairs (i in a, j in b) with i > j: each such pair is one
    // transposition when sorting the word (a-letters then b-letters).
    int inversions = 0;
    std::uint32_t bb = b;
    while (bb) {
        int j = std::countr_zero(bb);
        bb &= bb - 1;
        inversions += std::popcount(a >> (j + 1));
    }
    return (inversions % 2 == 0) ? 1 : -1;
}

GrassmannElement::GrassmannElement(AlgebraSignature sig, const Rational& scalar)
    : sig_(std::move(sig)) {
    if (scalar != 0)
        terms_[GrassmannMonomial{0, std::vector<int>(sig_.even.size(), 0)}] = scalar;
}

GrassmannElement GrassmannElement::zero(const AlgebraSignature& sig) {
    return GrassmannElement(sig);
}

GrassmannElement GrassmannElement::one(const AlgebraSignature& sig) {
    return GrassmannElement(sig, Rational(1));
}

GrassmannElement GrassmannElement::scalar(const AlgebraSignature& sig, const Rational& c) {
    return GrassmannElement(sig, c);
}

GrassmannElement GrassmannElement::generator(const AlgebraSignature& sig,
                                             const std::string& name) {
    int i = sig.odd_index(name);
    if (i < 0)
        throw std::invalid_argument("unknown odd generator: " + name);
    GrassmannElement x(sig);
    x.terms_[GrassmannMonomial{std::uint32_t(1) << i,
                               std::vector<int>(sig.even.size(), 0)}] = 1;
    return x;
}

GrassmannElement GrassmannElement::symbol(const AlgebraSignature& sig,
                                          const std::string& name, int power) {
    int i = sig.even_index(name);
    if (i < 0)
        throw std::invalid_argument("unknown even symbol: " + name);
    if (power < 0)
        throw std::invalid_argument("negative symbol power");
    GrassmannElement x(sig);
    std::vector<int> pow(sig.even.size(), 0);
    pow[static_cast<std::size_t>(i)] = power;
    x.terms_[GrassmannMonomial{0, std::move(pow)}] = 1;
    return x;
}

bool GrassmannElement::operator==(const GrassmannElement& o) const {
    return sig_ == o.sig_ && terms_ == o.terms_;
}

void GrassmannElement::add_term(const GrassmannMonomial& m, const Rational& c) {
    if (c == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

static void require_same_signature(const GrassmannElement& x, const GrassmannElement& y) {
    if (!(x.signature() == y.signature()))
        throw std::invalid_argument("algebra signature mismatch");
}

GrassmannElement GrassmannElement::operator+(const GrassmannElement& o) const {
    require_same_signature(*this, o);
    GrassmannElement r = *this;
    for (const auto& [m, c] : o.terms_)
        r.add_term(m, c);
    return r;
}

GrassmannElement GrassmannElement::operator-(const GrassmannElement& o) const {
    return *this + (-o);
}

GrassmannElement GrassmannElement::operator-() const {
    GrassmannElement r(sig_);
    for (const auto& [m, c] : terms_)
        r.terms_[m] = -c;
    return r;
}

GrassmannElement GrassmannElement::operator*(const GrassmannElement& o) const {
    return gmul(*this, o);
}

GrassmannElement GrassmannElement::operator*(const Rational& c) const {
    GrassmannElement r(sig_);
    if (c == 0)
        return r;
    for (const auto& [m, k] : terms_)
        r.terms_[m] = k * c;
    return r;
}

GrassmannElement operator*(const Rational& c, const GrassmannElement& x) {
    return x * c;
}

GrassmannElement gmul(const GrassmannElement& x, const GrassmannElement& y) {
    require_same_signature(x, y);
    GrassmannElement r(x.signature());
    for (const auto& [mx, cx] : x.terms()) {
        for (const auto& [my, cy] : y.terms()) {
            int s = merge_sign(mx.mask, my.mask);
            if (s == 0)
                continue;
            GrassmannMonomial m;
            m.mask = mx.mask | my.mask;
            m.pow = mx.pow;
            for (std::size_t i = 0; i < m.pow.size(); ++i)
                m.pow[i] += my.pow[i];
            r.add_term(m, cx * cy * s);
        }
    }
    return r;
}

std::optional<int> GrassmannElement::parity() const {
    std::optional<int> p;
    for (const auto& [m, c] : terms_) {
        int tp = std::popcount(m.mask) & 1;
        if (!p)
            p = tp;
        else if (*p != tp)
            return std::nullopt;
    }
    return p ? p : std::optional<int>(0);
}

Rational GrassmannElement::body() const {
    for (const auto& [m, c] : terms_) {
        if (m.mask != 0)
            continue;
        bool constant = std::all_of(m.pow.begin(), m.pow.end(), [](int e) { return e == 0; });
        if (constant)
            return c;
    }
    return 0;
}

GrassmannElement GrassmannElement::soul() const {
    GrassmannElement r(sig_);
    for (const auto& [m, c] : terms_)
        if (m.mask != 0)
            r.terms_[m] = c;
    return r;
}

bool GrassmannElement::is_nilpotent() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& t) { return t.first.mask != 0; });
}

GrassmannElement GrassmannElement::parity_flip() const {
    GrassmannElement r(sig_);
    for (const auto& [m, c] : terms_)
        r.terms_[m] = (std::popcount(m.mask) & 1) ? -c : c;
    return r;
}

int GrassmannElement::max_even_degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_)
        d = std::max(d, std::accumulate(m.pow.begin(), m.pow.end(), 0));
    return d;
}

GrassmannElement ginv(const GrassmannElement& x) {
    Rational b = x.body();
    if (b == 0)
        throw std::domain_error("ginv: non-invertible body");
    GrassmannElement rest = x - GrassmannElement::scalar(x.signature(), b);
    for (const auto& [m, c] : rest.terms())
        if (m.mask == 0)
            throw std::domain_error("ginv: body depends on even symbols");
    // x = b(1 + n) with n nilpotent; 1/x = (1/b) sum (-n)^k.
    GrassmannElement n = rest * Rational(Rational(1) / b);
    GrassmannElement acc = GrassmannElement::one(x.signature());
    GrassmannElement pw = GrassmannElement::one(x.signature());
    std::size_t bound = x.signature().odd.size() + 1;
    for (std::size_t k = 1; k <= bound; ++k) {
        pw = gmul(pw, -n);
        if (pw.is_zero())
            break;
        acc = acc + pw;
    }
    return acc * Rational(Rational(1) / b);
}

GrassmannElement gexp(const GrassmannElement& x) {
    if (!x.is_nilpotent())
        throw std::domain_error("gexp: exponent must be purely nilpotent");
    auto p = x.parity();
    if (!p || *p != 0)
        throw std::domain_error("gexp: exponent must be even");
    GrassmannElement acc = GrassmannElement::one(x.signature());
    GrassmannElement pw = GrassmannElement::one(x.signature());
    Rational fact = 1;
    std::size_t bound = x.signature().odd.size() + 1;
    for (std::size_t k = 1; k <= bound; ++k) {
        pw = gmul(pw, x);
        if (pw.is_zero())
            break;
        fact *= int(k);
        acc = acc + pw * Rational(Rational(1) / fact);
    }
    return acc;
}

// ---- grammar ----------------------------------------------------------

using detail::Token;
using detail::lex;

GrassmannElement parse_element(const AlgebraSignature& sig, const std::string& text) {
    auto tokens = lex(text);
    GrassmannElement total(sig);
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
        GrassmannElement term = GrassmannElement::scalar(sig, sign);
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
                std::size_t next = i + 1;
                if (next + 1 < tokens.size() + 1 && next < tokens.size() &&
                    tokens[next].kind == Token::Caret) {
                    if (next + 1 >= tokens.size() || tokens[next + 1].kind != Token::Int)
                        throw std::runtime_error("parse error at offset " +
                                                 std::to_string(tokens[next].pos) +
                                                 ": expected integer exponent after '^'");
                    power = std::stoi(tokens[next + 1].text);
                    i = next + 2;
                } else {
                    ++i;
                }
                if (sig.even_index(t.text) >= 0) {
                    term = gmul(term, GrassmannElement::symbol(sig, t.text, power));
                } else if (sig.odd_index(t.text) >= 0) {
                    if (power != 1)
                        throw std::runtime_error("parse error at offset " +
                                                 std::to_string(t.pos) +
                                                 ": odd generator cannot carry an exponent");
                    term = gmul(term, GrassmannElement::generator(sig, t.text));
                } else {
                    throw std::runtime_error("parse error at offset " + std::to_string(t.pos) +
                                             ": unknown generator name '" + t.text + "'");
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

std::string GrassmannElement::to_string() const {
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rational a = c < 0 ? Rational(-c) : c;
        if (first) {
            if (c < 0)
                os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        std::vector<std::string> factors;
        bool unit_monomial = true;
        for (std::size_t i = 0; i < m.pow.size(); ++i) {
            if (m.pow[i] == 0)
                continue;
            unit_monomial = false;
            factors.push_back(m.pow[i] == 1
                                  ? sig_.even[i]
                                  : sig_.even[i] + "^" + std::to_string(m.pow[i]));
        }
        for (std::size_t i = 0; i < sig_.odd.size(); ++i)
            if (m.mask & (std::uint32_t(1) << i)) {
                unit_monomial = false;
                factors.push_back(sig_.odd[i]);
            }
        if (a != 1 || unit_monomial)
            os << rational_to_string(a) << (unit_monomial ? "" : " ");
        for (std::size_t i = 0; i < factors.size(); ++i)
            os << factors[i] << (i + 1 < factors.size() ? " " : "");
    }
    return os.str();
}

} // namespace supercurve
