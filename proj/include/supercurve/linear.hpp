#pragma once

#include "supercurve/algebra.hpp"

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace supercurve {

using QVec = std::vector<Rational>;
using QMat = std::vector<QVec>;

// Row reduction in place; returns pivot column indices.
std::vector<std::size_t> rref(QMat& m);

std::size_t qrank(QMat m);

struct AffineSolution {
    bool consistent = false;
    QVec particular;   // one solution of A x = b, empty if inconsistent
    QMat kernel;       // basis of ker A, one vector per row
};

AffineSolution solve_affine(const QMat& a, const QVec& b);

// Base-field description of a Lambda-submodule / quotient / solution set.
// Basis vectors are tuples of GrassmannElements (one slot per unknown).
struct LambdaModuleDescription {
    std::vector<std::string> ambient_basis;                 // monomial labels
    std::vector<std::vector<GrassmannElement>> basis;       // kernel / module basis
    std::vector<GrassmannElement> particular;               // solve_linear only
    bool consistent = true;
    int dim = 0;
    std::optional<std::pair<int, int>> graded_dim;          // (even | odd)
};

// Monomial basis of Lambda with total even-symbol degree <= degree.
std::vector<GrassmannMonomial> monomial_basis(const AlgebraSignature& sig, int degree);
std::string monomial_label(const AlgebraSignature& sig, const GrassmannMonomial& m);
GrassmannElement monomial_element(const AlgebraSignature& sig, const GrassmannMonomial& m);

// Solves  system * x = rhs  over Lambda by expanding every Grassmann and
// even-symbol monomial into base-field coordinates.  Unknown entries range
// over monomials of even-symbol degree <= truncation (default: max degree
// occurring in the inputs).  Inconsistency is a valid outcome, reported in
// the result.
LambdaModuleDescription solve_linear(const std::vector<std::vector<GrassmannElement>>& system,
                                     const std::vector<GrassmannElement>& rhs,
                                     std::optional<int> truncation = std::nullopt);

// Base-field basis of Lambda / <generators> with graded dimension.
LambdaModuleDescription module_quotient(const AlgebraSignature& sig,
                                        const std::vector<GrassmannElement>& generators,
                                        int truncation = 0);

// Convenience membership test: is x in the Lambda-span of the generators?
bool in_span(const GrassmannElement& x, const std::vector<GrassmannElement>& generators);

// Additive map from tuples of Lambda elements (one per slot) to tuples of
// Lambda elements, evaluated on (slot, monomial) pairs.
using SlotMap = std::function<std::vector<GrassmannElement>(std::size_t slot,
                                                            const GrassmannElement& m)>;

// Kernel of a slot map as a base-field module description.  slot_shifts
// give the intrinsic parity contribution of each slot, used for the graded
// dimension: a kernel vector putting monomial m in slot j has section
// parity parity(m) + shift_j.
LambdaModuleDescription kernel_of_map(const AlgebraSignature& sig,
                                      const std::vector<int>& slot_shifts, std::size_t rows,
                                      const SlotMap& map, int truncation = 0);

// Quotient of the free slot module by the joint image of the given slot
// maps (each generator g evaluated over all monomials spans part of the
// trivial submodule).  Returns a basis of a complement with graded
// dimension by section parity.
LambdaModuleDescription
slot_quotient(const AlgebraSignature& sig, const std::vector<int>& slot_shifts,
              const std::vector<std::function<std::vector<GrassmannElement>(
                  const GrassmannElement& m)>>& generators,
              int truncation = 0);

// Membership of a slot vector in the base-field span of the generator
// family (each generator evaluated over all monomials).
bool slot_in_span(const AlgebraSignature& sig, const std::vector<GrassmannElement>& x,
                  const std::vector<std::function<std::vector<GrassmannElement>(
                      const GrassmannElement& m)>>& generators,
                  int truncation = 0);

} // namespace supercurve
