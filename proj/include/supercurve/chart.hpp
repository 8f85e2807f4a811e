#pragma once

#include "supercurve/algebra.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace supercurve {

// A local coordinate chart: one even coordinate plus an ordered list of odd
// coordinates, over the Grassmann coefficient algebra.
struct Chart {
    AlgebraSignature algebra;
    std::string even_coord = "z";
    std::vector<std::string> odd_coords;

    Chart() = default;
    Chart(AlgebraSignature sig, std::string even, std::vector<std::string> odd);

    int odd_index(const std::string& name) const; // -1 if absent
    bool operator==(const Chart& o) const = default;
};

Chart x_chart(const AlgebraSignature& sig);      // (z; theta)
Chart dual_chart(const AlgebraSignature& sig);   // (u; rho)
Chart delta_chart(const AlgebraSignature& sig);  // (z; theta, rho)

// Polynomial chart function: finite sum of  z^k * g * xi^mask  with g a
// GrassmannElement and xi^mask the ascending product of odd coordinates.
// Pure value type; all operations exact.
class ChartFunction {
  public:
    ChartFunction() = default;
    explicit ChartFunction(Chart chart) : chart_(std::move(chart)) {}

    static ChartFunction zero(const Chart& c);
    static ChartFunction one(const Chart& c);
    static ChartFunction scalar(const Chart& c, const Rational& r);
    static ChartFunction from_coefficient(const Chart& c, const GrassmannElement& g);
    static ChartFunction even_coordinate(const Chart& c);
    static ChartFunction odd_coordinate(const Chart& c, const std::string& name);

    const Chart& chart() const { return chart_; }
    const std::map<std::pair<int, std::uint32_t>, GrassmannElement>& terms() const {
        return terms_;
    }

    bool is_zero() const { return terms_.empty(); }
    bool operator==(const ChartFunction& o) const;
    bool operator!=(const ChartFunction& o) const { return !(*this == o); }

    ChartFunction operator+(const ChartFunction& o) const;
    ChartFunction operator-(const ChartFunction& o) const;
    ChartFunction operator-() const;
    ChartFunction operator*(const ChartFunction& o) const;
    ChartFunction operator*(const Rational& c) const;
    ChartFunction operator*(const GrassmannElement& g) const;

    // Coefficient of z^k xi^mask (the Grassmann element written left of the
    // odd-coordinate word).
    GrassmannElement coefficient(int z_deg, std::uint32_t mask) const;
    void add_term(int z_deg, std::uint32_t mask, const GrassmannElement& g);

    std::optional<int> parity() const;  // 0/1/nullopt as for GrassmannElement
    ChartFunction parity_flip() const;

    ChartFunction d_even() const;                       // d/dz
    ChartFunction d_odd(const std::string& name) const; // left derivative

    bool depends_on_odd(const std::string& name) const;
    int even_coord_degree() const;

    // Ring-homomorphic substitution.  `images` must provide a value for the
    // even coordinate and for every odd coordinate actually present; all
    // images live on a common target chart with the same coefficient
    // algebra.  Parity of images is enforced.
    ChartFunction substitute(const std::map<std::string, ChartFunction>& images) const;

    // Inverse of an element whose constant term is a nonzero rational and
    // whose remaining terms are all nilpotent.  Throws std::domain_error.
    ChartFunction inverse() const;
    // exp/log of purely nilpotent (resp. 1 + nilpotent) arguments, exact.
    ChartFunction expn() const;
    ChartFunction logn() const;

    std::string to_string() const;

  private:
    Chart chart_;
    std::map<std::pair<int, std::uint32_t>, GrassmannElement> terms_;
};

ChartFunction operator*(const GrassmannElement& g, const ChartFunction& f);
ChartFunction operator*(const Rational& c, const ChartFunction& f);

// Superfunction view on an (z; theta) chart: f = sum_k z^k (a_k + theta b_k).
struct SuperCoefficients {
    GrassmannElement a;
    GrassmannElement b;
};
SuperCoefficients super_coefficients(const ChartFunction& f, int z_deg);

// Delta-function view on a (z; theta, rho) chart, components of
// f = A + theta*alpha + rho*beta + theta*rho*B (each component theta,rho-free).
struct DeltaComponents {
    ChartFunction a;      // A
    ChartFunction alpha;  // alpha
    ChartFunction beta;   // beta
    ChartFunction b;      // B
};
DeltaComponents delta_components(const ChartFunction& f);
// Reassembles A + theta*alpha + rho*beta + theta*rho*B.
ChartFunction from_delta_components(const Chart& c, const ChartFunction& a,
                                    const ChartFunction& alpha, const ChartFunction& beta,
                                    const ChartFunction& b);

// Promotion between charts that share the even coordinate name space:
// reinterprets f on a chart with more odd coordinates (by name).
ChartFunction promote(const ChartFunction& f, const Chart& target);

// A chart morphism on a (z; theta)-type chart: images of z and theta.
// Z must be even, Theta odd (checked on construction).
struct CoordinateChange {
    ChartFunction Z;
    ChartFunction Theta;

    CoordinateChange(ChartFunction z_image, ChartFunction theta_image);
    const Chart& chart() const { return Z.chart(); }
};

ChartFunction apply_change(const ChartFunction& f, const CoordinateChange& c);
CoordinateChange compose(const CoordinateChange& outer, const CoordinateChange& inner);
CoordinateChange identity_change(const Chart& c);

// Inverse of an affine change  Z = a z + b + theta nu, Theta = c theta + mu
// with a, c invertible constants.  Throws std::domain_error otherwise.
CoordinateChange invert_affine(const CoordinateChange& c);

// Text grammar for chart functions: element grammar extended with factors
// z^k and the odd coordinate names.
ChartFunction parse_chart_function(const Chart& chart, const std::string& text);

} // namespace supercurve
