#pragma once

#include "supercurve/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace supercurve {

// Names of the odd (anticommuting) generators and the formal even central
// symbols of the coefficient algebra Lambda.  Even symbols are polynomial
// variables: never inverted, never exponentiated.
struct AlgebraSignature {
    std::vector<std::string> odd;
    std::vector<std::string> even;

    AlgebraSignature() = default;
    AlgebraSignature(std::vector<std::string> odd_gens,
                     std::vector<std::string> even_syms);

    int odd_index(const std::string& name) const;   // -1 if absent
    int even_index(const std::string& name) const;  // -1 if absent

    bool operator==(const AlgebraSignature& o) const = default;
};

// Monomial key: subset of odd generators (bitmask, bit i = odd[i]) plus
// exponent vector over the even symbols.
struct GrassmannMonomial {
    std::uint32_t mask = 0;
    std::vector<int> pow;

    auto operator<=>(const GrassmannMonomial&) const = default;
};

// Element of Lambda[t...]: finitely supported rational combination of
// Grassmann monomials times even-symbol monomials.  Immutable value type.
class GrassmannElement {
  public:
    GrassmannElement() = default;
    explicit GrassmannElement(AlgebraSignature sig) : sig_(std::move(sig)) {}
    GrassmannElement(AlgebraSignature sig, const Rational& scalar);

    static GrassmannElement zero(const AlgebraSignature& sig);
    static GrassmannElement one(const AlgebraSignature& sig);
    static GrassmannElement scalar(const AlgebraSignature& sig, const Rational& c);
    static GrassmannElement generator(const AlgebraSignature& sig, const std::string& name);
    static GrassmannElement symbol(const AlgebraSignature& sig, const std::string& name,
                                   int power = 1);

    const AlgebraSignature& signature() const { return sig_; }
    const std::map<GrassmannMonomial, Rational>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool operator==(const GrassmannElement& o) const;
    bool operator!=(const GrassmannElement& o) const { return !(*this == o); }

    GrassmannElement operator+(const GrassmannElement& o) const;
    GrassmannElement operator-(const GrassmannElement& o) const;
    GrassmannElement operator-() const;
    GrassmannElement operator*(const GrassmannElement& o) const;
    GrassmannElement operator*(const Rational& c) const;

    // 0 = even, 1 = odd, nullopt = inhomogeneous.
    std::optional<int> parity() const;

    // Rational constant term (no generators, no even symbols).
    Rational body() const;
    // Part with at least one odd generator; nilpotent by construction.
    GrassmannElement soul() const;
    // True iff every term carries at least one odd generator.
    bool is_nilpotent() const;
    // x_even - x_odd; algebra automorphism.
    GrassmannElement parity_flip() const;

    int max_even_degree() const;

    void add_term(const GrassmannMonomial& m, const Rational& c);

    std::string to_string() const;

  private:
    AlgebraSignature sig_;
    std::map<GrassmannMonomial, Rational> terms_;
};

GrassmannElement operator*(const Rational& c, const GrassmannElement& x);

// Product with the supercommutative sign rule; generators anticommute,
// even symbols are central.  Throws std::invalid_argument on signature
// mismatch.
GrassmannElement gmul(const GrassmannElement& x, const GrassmannElement& y);

// Inverse via body inverse times a finite Neumann series in the soul.
// Throws std::domain_error unless the body is an invertible scalar and
// every remaining term is nilpotent.
GrassmannElement ginv(const GrassmannElement& x);

// exp of an even purely nilpotent element, as a finite exact series.
// Throws std::domain_error on nonzero body, non-nilpotent terms, or odd
// parity.
GrassmannElement gexp(const GrassmannElement& x);

// Parses the shared element grammar:
//   element := term (('+'|'-') term)*
//   term    := rational? (symbol ['^' int])* generator*
// Juxtaposition is product in written order (so "del eps" = -"eps del").
// Throws std::runtime_error with a located message on malformed input.
GrassmannElement parse_element(const AlgebraSignature& sig, const std::string& text);

// Sign of sorting the concatenation of two disjoint ascending generator
// subsets; 0 if the subsets intersect.
int merge_sign(std::uint32_t a, std::uint32_t b);

} // namespace supercurve
