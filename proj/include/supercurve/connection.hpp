#pragma once

#include "supercurve/chart.hpp"
#include "supercurve/expansion.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace supercurve {

// (p|q)-block matrix over chart functions.  parity 0: diagonal blocks even,
// off-diagonal odd; parity 1: reversed.
class SuperMatrix {
  public:
    SuperMatrix() = default;
    SuperMatrix(Chart chart, int p, int q, int parity);

    static SuperMatrix identity(const Chart& c, int p, int q);
    static SuperMatrix zero(const Chart& c, int p, int q, int parity);

    const Chart& chart() const { return chart_; }
    int p() const { return p_; }
    int q() const { return q_; }
    int n() const { return p_ + q_; }
    int parity() const { return parity_; }
    int row_parity(int i) const { return i < p_ ? 0 : 1; }

    const ChartFunction& at(int i, int j) const { return entries_[i][j]; }
    void set(int i, int j, ChartFunction f);

    bool is_zero() const;
    bool operator==(const SuperMatrix& o) const;

    // True iff every entry's parity is compatible with the block pattern.
    bool parity_consistent() const;

    SuperMatrix operator+(const SuperMatrix& o) const;
    SuperMatrix operator-(const SuperMatrix& o) const;
    SuperMatrix operator-() const;
    SuperMatrix operator*(const SuperMatrix& o) const;
    std::vector<ChartFunction> operator*(const std::vector<ChartFunction>& v) const;

    SuperMatrix parity_flip() const;
    SuperMatrix map_entries(const std::function<ChartFunction(const ChartFunction&)>& f,
                            int new_parity) const;

    // Inverse of a matrix whose body is an invertible constant rational
    // matrix and whose remainder has nilpotent terms only.  Verified by
    // multiplication; throws std::domain_error.
    SuperMatrix inverse() const;

    std::string to_string() const;

  private:
    Chart chart_;
    int p_ = 0, q_ = 0, parity_ = 0;
    std::vector<std::vector<ChartFunction>> entries_;
};

// Connection  d + omega  on the trivial rank p|q bundle of a chart:
// omega = dz.omega_even + sum_c dc.omega_odd[c] over the odd coordinates.
// omega_even is an even matrix, each omega_odd[c] odd.
struct ConnectionForm {
    Chart chart;
    int p = 1, q = 0;
    SuperMatrix omega_even;
    std::map<std::string, SuperMatrix> omega_odd;

    static ConnectionForm zero(const Chart& c, int p, int q);

    std::vector<ChartFunction> nabla_even(const std::vector<ChartFunction>& v) const;
    std::vector<ChartFunction> nabla_odd(const std::string& name,
                                         const std::vector<ChartFunction>& v) const;
};

struct CurvatureReport {
    bool flat = true;
    // Residual matrices labeled by the coordinate pair that produced them.
    std::vector<std::pair<std::string, SuperMatrix>> residuals;
};

// Symbolic zero-curvature test via graded brackets of the covariant
// derivatives applied to the identity columns.
CurvatureReport flat_check(const ConnectionForm& omega);

struct ParallelFrame {
    SuperMatrix a0;
    std::vector<std::string> fiber;
};

// A0 = prod_i (1 - theta_i nabla_i)(I); columns are flat along the fiber.
ParallelFrame parallel_frame(const ConnectionForm& omega,
                             const std::vector<std::string>& fiber);

// -(d_c A0) A0^{-1} == omega_c for every fiber coordinate c.
bool frame_identity_holds(const ConnectionForm& omega, const ParallelFrame& frame);

struct DirectImage {
    ParallelFrame frame;
    ConnectionForm base;  // induced connection, on base_chart
};

// Pushes the connection down a purely odd projection that forgets the named
// fiber coordinates; the base chart keeps the remaining coordinates.
DirectImage direct_image_module(const ConnectionForm& omega,
                                const std::vector<std::string>& fiber,
                                const Chart& base_chart);

// Pulls a base connection back along the projection (fiber components 0).
ConnectionForm pullback_connection(const ConnectionForm& base, const Chart& total_chart);

// Restriction of a fiber-independent function to the base chart.
ChartFunction demote(const ChartFunction& f, const Chart& base);

// Rank 1 duality transform: omega = dz.A + dtheta.B an odd
// closed one-form on the (z; theta) chart, returns phi0 on the (z; theta,
// rho) chart: the rho-free part of the expansion of 1 along the dual fiber.
ChartFunction transform_line_bundle(const ChartFunction& a, const ChartFunction& b,
                                    const Chart& delta);

// One-form exterior derivative on a (z; theta) chart, in the basis
// {dtheta dz, dtheta^2}:  d(dz.A + dtheta.B).
std::pair<ChartFunction, ChartFunction> one_form_d(const ChartFunction& a,
                                                   const ChartFunction& b);

struct SequenceReport {
    std::string name;
    bool exact = false;
    int left_dim = 0, middle_dim = 0, right_dim = 0;
};

// Exactness of the three constant-truncation sequences relating nilpotent
// functions, the superdiagonal, and closed one-forms.
std::vector<SequenceReport> closed_form_sequences_check(const AlgebraSignature& sig);

} // namespace supercurve
