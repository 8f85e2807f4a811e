#pragma once

#include "supercurve/chart.hpp"
#include "supercurve/linear.hpp"

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace supercurve {

enum class Space { X, Xhat, Delta };

// Genus-one supercurve as a quotient of the (z; theta) plane by the group
// generated by  T(z,theta) = (z+1, theta)  and
// S(z,theta) = (z + tau + theta eps, theta + del),  with tau the even
// modulus element and eps, del odd constants from the coefficient algebra.
struct SuperEllipticCurve {
    AlgebraSignature sig;
    GrassmannElement modulus;  // tau: an even element, typically the symbol t
    GrassmannElement eps;
    GrassmannElement del;

    SuperEllipticCurve(AlgebraSignature sig, GrassmannElement modulus,
                       GrassmannElement eps, GrassmannElement del);

    CoordinateChange generator_s() const;  // on x_chart(sig)
    CoordinateChange generator_t() const;
    // The diagonal action on (z; theta, rho):
    // z -> z + tau + theta eps, theta -> theta + del, rho -> rho + eps.
    std::map<std::string, ChartFunction> generator_s_delta() const;

    bool operator==(const SuperEllipticCurve& o) const = default;
};

// Degree-zero line bundle datum: transition multiplier exp(A + theta alpha)
// attached to S (the T-multiplier is normalized to 1), with the lattice
// class (m, n) kept as exact integers instead of an exponential, and an
// optional rho-coefficient for exponents living on the dual curve, written
// exp(A + theta alpha + rho_term rho).
struct EllipticMultiplier {
    std::pair<long, long> lattice{0, 0};
    GrassmannElement a;
    GrassmannElement alpha;
    std::optional<GrassmannElement> rho_term;

    EllipticMultiplier(std::pair<long, long> lattice, GrassmannElement a,
                       GrassmannElement alpha,
                       std::optional<GrassmannElement> rho_term = std::nullopt);
};

// Invariant one-form  omega = dz A + dtheta B  with constant coefficients;
// A even, B odd.
struct EllipticOneForm {
    GrassmannElement a;
    GrassmannElement b;

    EllipticOneForm(GrassmannElement a, GrassmannElement b);
};

// Transports the generators through the dual coordinates (u, rho) and reads
// off the dual curve's modulus and odd parameters.
SuperEllipticCurve dual_curve(const SuperEllipticCurve& x);

struct CurveClass {
    bool projected = false;  // eps = 0
    bool injected = false;   // del = 0
    bool self_dual = false;  // eps = del
    bool split = false;      // both zero
};
CurveClass classify_curve(const SuperEllipticCurve& x);

// Constant global functions: sections A + theta alpha (A + rho alpha on the
// dual curve, the four-component version on the superdiagonal) invariant
// under the group, as a base-field module with graded dimension.
LambdaModuleDescription h0_structure(Space space, const SuperEllipticCurve& x);

// Constant S-cocycles modulo coboundaries of constant sections.
LambdaModuleDescription h1_structure(Space space, const SuperEllipticCurve& x);

// Requires lattice (0,0); tests alpha = 0 and A in del*Lambda (eps*Lambda
// on the dual curve).  Throws std::domain_error on an unreduced lattice.
bool is_trivial_bundle(const EllipticMultiplier& m, Space on, const SuperEllipticCurve& x);

// True iff the odd exponent part is a multiple of the curve's eps (of the
// dual eps, i.e. del, when the multiplier lives on the dual curve).
bool admits_flat_connection(const EllipticMultiplier& m, Space on,
                            const SuperEllipticCurve& x);

// Folds the lattice class into the exponent: A += m + n tau, alpha += n eps.
EllipticMultiplier reduce_by_lattice(const EllipticMultiplier& m,
                                     const SuperEllipticCurve& x);

// Multiplier of the dual transform of the bundle exp(A + theta alpha) with
// the flat connection d + omega; computed from the rho-free expansion
// component phi0 through (phi0 . S) phi0^{-1}.  With a trivial input
// multiplier this is exp(-del(B + rho A)).
EllipticMultiplier transform_bundle(const EllipticMultiplier& m, const EllipticOneForm& omega,
                                    const SuperEllipticCurve& x);

EllipticMultiplier transform_trivial_with_connection(const EllipticOneForm& omega,
                                                     const SuperEllipticCurve& x);

// Direct construction for the pullback case (projected curve, B = 0):
// exponent -del rho A.
EllipticMultiplier transform_pullback_case(const EllipticOneForm& omega,
                                           const SuperEllipticCurve& x);

// Multiplier of the direct image on the underlying even curve (projected
// case): exp(-del B).
EllipticMultiplier direct_image_projected(const EllipticOneForm& omega,
                                          const SuperEllipticCurve& x);

// Constant S-cocycle on the superdiagonal, components of
// A + theta alpha + rho beta + theta rho B.
using DeltaCocycle = std::array<GrassmannElement, 4>;

DeltaCocycle lift_to_delta(const EllipticMultiplier& m, Space from,
                           const SuperEllipticCurve& x);

// Equality modulo coboundaries of constant sections on the superdiagonal.
bool delta_classes_equal(const DeltaCocycle& c1, const DeltaCocycle& c2,
                         const SuperEllipticCurve& x);

// Solutions of A eps = 0 (B free) in omega = dz A + dtheta B.
LambdaModuleDescription closed_invariant_one_forms(const SuperEllipticCurve& x);

struct BerezinianReport {
    std::pair<int, int> one_forms_dim;
    std::pair<int, int> h0_dual_dim;
    bool equal = false;
};
BerezinianReport berezinian_dimension_check(const SuperEllipticCurve& x);

} // namespace supercurve
