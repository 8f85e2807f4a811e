#pragma once

#include "supercurve/chart.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>

namespace supercurve {

// Scalar differential operator on a chart, in normal form: finite sum of
//   c_{p,q}(z, xi) d_z^p d^q
// with coefficients to the left and all derivatives to the right.  d^q is
// the ascending product of left odd derivatives over the mask q.
class ChartOperator {
  public:
    ChartOperator() = default;
    explicit ChartOperator(Chart chart) : chart_(std::move(chart)) {}

    static ChartOperator zero(const Chart& c);
    static ChartOperator identity(const Chart& c);
    static ChartOperator multiplication(const ChartFunction& f);
    static ChartOperator d_even_op(const Chart& c);
    static ChartOperator d_odd_op(const Chart& c, const std::string& name);

    const Chart& chart() const { return chart_; }
    const std::map<std::pair<int, std::uint32_t>, ChartFunction>& terms() const {
        return terms_;
    }
    bool is_zero() const { return terms_.empty(); }
    bool operator==(const ChartOperator& o) const;

    ChartOperator operator+(const ChartOperator& o) const;
    ChartOperator operator-(const ChartOperator& o) const;
    // Composition this after o, renormalized.
    ChartOperator operator*(const ChartOperator& o) const;

    ChartFunction apply(const ChartFunction& f) const;

    void add_term(int p, std::uint32_t q, const ChartFunction& c);
    int max_even_order() const;

    std::string to_string() const;

  private:
    Chart chart_;
    std::map<std::pair<int, std::uint32_t>, ChartFunction> terms_;
};

// Recovers the normal form of a linear map known to be a differential
// operator with d_z-order <= max_order and coefficient z-degree <=
// max_coeff_deg, by triangular extraction over the monomials z^p xi^q.
// Verifies the result against the action on a spanning set and throws
// std::domain_error if the map is not such an operator.
ChartOperator operator_from_action(const Chart& chart,
                                   const std::function<ChartFunction(const ChartFunction&)>& action,
                                   int max_order, int max_coeff_deg);

// Transports an operator along a structural chart renaming (same number of
// odd coordinates, same algebra): z -> even coordinate of target, i-th odd
// -> i-th odd of target.
ChartOperator rename_chart(const ChartOperator& op, const Chart& target);

} // namespace supercurve
