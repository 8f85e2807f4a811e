#include "supercurve/linear.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <stdexcept>

namespace supercurve {

std::vector<std::size_t> rref(QMat& m) {
    std::vector<std::size_t> pivots;
    if (m.empty())
        return pivots;
    std::size_t rows = m.size(), cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t sel = rows;
        for (std::size_t i = r; i < rows; ++i)
            if (m[i][c] != 0) {
                sel = i;
                break;
            }
        if (sel == rows)
            continue;
        std::swap(m[r], m[sel]);
        Rational inv = Rational(1) / m[r][c];
        for (std::size_t j = c; j < cols; ++j)
            m[r][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0)
                continue;
            Rational f = m[i][c];
            for (std::size_t j = c; j < cols; ++j)
                m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

std::size_t qrank(QMat m) {
    return rref(m).size();
}

AffineSolution solve_affine(const QMat& a, const QVec& b) {
    AffineSolution out;
    std::size_t rows = a.size();
    std::size_t cols = rows == 0 ? 0 : a[0].size();
    QMat aug(rows, QVec(cols + 1, 0));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j)
            aug[i][j] = a[i][j];
        aug[i][cols] = b[i];
    }
    auto pivots = rref(aug);
    for (std::size_t p : pivots)
        if (p == cols)
            return out; // 0 = nonzero row: inconsistent
    out.consistent = true;
    out.particular.assign(cols, 0);
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        is_pivot[pivots[r]] = true;
        out.particular[pivots[r]] = aug[r][cols];
    }
    for (std::size_t c = 0; c < cols; ++c) {
        if (is_pivot[c])
            continue;
        QVec v(cols, 0);
        v[c] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = -aug[r][c];
        out.kernel.push_back(std::move(v));
    }
    return out;
}

std::vector<GrassmannMonomial> monomial_basis(const AlgebraSignature& sig, int degree) {
    std::vector<std::vector<int>> pows;
    std::vector<int> cur(sig.even.size(), 0);
    // All exponent vectors of total degree <= degree.
    auto rec = [&](auto&& self, std::size_t i, int remaining) -> void {
        if (i == cur.size()) {
            pows.push_back(cur);
            return;
        }
        for (int e = 0; e <= remaining; ++e) {
            cur[i] = e;
            self(self, i + 1, remaining - e);
        }
        cur[i] = 0;
    };
    rec(rec, 0, degree);
    std::vector<GrassmannMonomial> out;
    std::uint32_t masks = std::uint32_t(1) << sig.odd.size();
    for (std::uint32_t mask = 0; mask < masks; ++mask)
        for (const auto& p : pows)
            out.push_back(GrassmannMonomial{mask, p});
    std::sort(out.begin(), out.end());
    return out;
}

std::string monomial_label(const AlgebraSignature& sig, const GrassmannMonomial& m) {
    return monomial_element(sig, m).to_string();
}

GrassmannElement monomial_element(const AlgebraSignature& sig, const GrassmannMonomial& m) {
    GrassmannElement x(sig);
    x.add_term(m, 1);
    return x;
}

namespace {

int monomial_parity(const GrassmannMonomial& m) {
    return std::popcount(m.mask) & 1;
}

struct CoordinateSpace {
    std::map<std::pair<std::size_t, GrassmannMonomial>, std::size_t> index;
    std::size_t get(std::size_t slot, const GrassmannMonomial& m) {
        auto [it, ins] = index.try_emplace({slot, m}, index.size());
        return it->second;
    }
};

// Kernel dimension when unknown coordinates are restricted to monomials of
// the given parity.
int restricted_kernel_dim(const std::vector<std::vector<GrassmannElement>>& system,
                          const std::vector<GrassmannMonomial>& monos, int parity) {
    std::size_t unknowns = system.empty() ? 0 : system[0].size();
    std::vector<std::pair<std::size_t, GrassmannMonomial>> cols;
    for (std::size_t j = 0; j < unknowns; ++j)
        for (const auto& m : monos)
            if (monomial_parity(m) == parity)
                cols.push_back({j, m});
    CoordinateSpace eq;
    std::vector<std::map<std::size_t, Rational>> colvals(cols.size());
    const AlgebraSignature& sig = system[0][0].signature();
    for (std::size_t c = 0; c < cols.size(); ++c) {
        auto [j, m] = cols[c];
        GrassmannElement xm = monomial_element(sig, m);
        for (std::size_t i = 0; i < system.size(); ++i) {
            GrassmannElement prod = gmul(system[i][j], xm);
            for (const auto& [tm, tc] : prod.terms())
                colvals[c][eq.get(i, tm)] += tc;
        }
    }
    std::size_t rows = eq.index.size();
    QMat a(rows, QVec(cols.size(), 0));
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (const auto& [r, v] : colvals[c])
            a[r][c] = v;
    return static_cast<int>(cols.size() - qrank(a));
}

} // namespace

LambdaModuleDescription solve_linear(const std::vector<std::vector<GrassmannElement>>& system,
                                     const std::vector<GrassmannElement>& rhs,
                                     std::optional<int> truncation) {
    if (system.empty() || system[0].empty())
        throw std::invalid_argument("solve_linear: empty system");
    if (rhs.size() != system.size())
        throw std::invalid_argument("solve_linear: rhs size mismatch");
    const AlgebraSignature& sig = system[0][0].signature();
    for (const auto& row : system)
        for (const auto& e : row)
            if (!(e.signature() == sig))
                throw std::invalid_argument("solve_linear: signature mismatch");
    int trunc = 0;
    if (truncation) {
        trunc = *truncation;
    } else {
        for (const auto& row : system)
            for (const auto& e : row)
                trunc = std::max(trunc, e.max_even_degree());
        for (const auto& e : rhs)
            trunc = std::max(trunc, e.max_even_degree());
    }
    auto monos = monomial_basis(sig, trunc);
    std::size_t unknowns = system[0].size();

    std::vector<std::pair<std::size_t, GrassmannMonomial>> cols;
    for (std::size_t j = 0; j < unknowns; ++j)
        for (const auto& m : monos)
            cols.push_back({j, m});

    CoordinateSpace eq;
    std::vector<std::map<std::size_t, Rational>> colvals(cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        auto [j, m] = cols[c];
        GrassmannElement xm = monomial_element(sig, m);
        for (std::size_t i = 0; i < system.size(); ++i) {
            GrassmannElement prod = gmul(system[i][j], xm);
            for (const auto& [tm, tc] : prod.terms())
                colvals[c][eq.get(i, tm)] += tc;
        }
    }
    std::map<std::size_t, Rational> rhsvals;
    for (std::size_t i = 0; i < rhs.size(); ++i)
        for (const auto& [tm, tc] : rhs[i].terms())
            rhsvals[eq.get(i, tm)] += tc;

    // At least one row so solve_affine sees the column count.
    std::size_t rows = std::max<std::size_t>(eq.index.size(), 1);
    QMat a(rows, QVec(cols.size(), 0));
    QVec b(rows, 0);
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (const auto& [r, v] : colvals[c])
            a[r][c] = v;
    for (const auto& [r, v] : rhsvals)
        b[r] = v;

    AffineSolution sol = solve_affine(a, b);

    LambdaModuleDescription out;
    for (const auto& m : monos)
        out.ambient_basis.push_back(monomial_label(sig, m));
    out.consistent = sol.consistent;
    auto to_elements = [&](const QVec& v) {
        std::vector<GrassmannElement> xs(unknowns, GrassmannElement::zero(sig));
        for (std::size_t c = 0; c < cols.size(); ++c)
            if (v[c] != 0)
                xs[cols[c].first].add_term(cols[c].second, v[c]);
        return xs;
    };
    if (sol.consistent) {
        out.particular = to_elements(sol.particular);
        for (const auto& kv : sol.kernel)
            out.basis.push_back(to_elements(kv));
    }
    out.dim = static_cast<int>(out.basis.size());
    int e = restricted_kernel_dim(system, monos, 0);
    int o = restricted_kernel_dim(system, monos, 1);
    if (e + o == out.dim)
        out.graded_dim = {e, o};
    return out;
}

LambdaModuleDescription module_quotient(const AlgebraSignature& sig,
                                        const std::vector<GrassmannElement>& generators,
                                        int truncation) {
    auto monos = monomial_basis(sig, truncation);
    std::map<GrassmannMonomial, std::size_t> index;
    for (std::size_t i = 0; i < monos.size(); ++i)
        index[monos[i]] = i;

    QMat span;
    for (const auto& g : generators) {
        if (!(g.signature() == sig))
            throw std::invalid_argument("module_quotient: signature mismatch");
        for (const auto& m : monos) {
            GrassmannElement v = gmul(g, monomial_element(sig, m));
            QVec row(monos.size(), 0);
            bool in_range = true;
            for (const auto& [tm, tc] : v.terms()) {
                auto it = index.find(tm);
                if (it == index.end()) {
                    in_range = false;
                    break;
                }
                row[it->second] = tc;
            }
            // Products leaving the truncated window are dropped only when the
            // whole vector leaves it; partial overflow would corrupt the span.
            if (!in_range) {
                for (const auto& [tm, tc] : v.terms())
                    if (index.count(tm))
                        throw std::invalid_argument(
                            "module_quotient: truncation too small for generator products");
                continue;
            }
            if (std::any_of(row.begin(), row.end(), [](const Rational& r) { return r != 0; }))
                span.push_back(std::move(row));
        }
    }

    LambdaModuleDescription out;
    for (const auto& m : monos)
        out.ambient_basis.push_back(monomial_label(sig, m));
    std::vector<bool> pivot_col(monos.size(), false);
    if (!span.empty()) {
        auto pivots = rref(span);
        for (std::size_t p : pivots)
            pivot_col[p] = true;
    }
    int e = 0, o = 0;
    for (std::size_t i = 0; i < monos.size(); ++i) {
        if (pivot_col[i])
            continue;
        out.basis.push_back({monomial_element(sig, monos[i])});
        (monomial_parity(monos[i]) == 0 ? e : o) += 1;
    }
    out.dim = static_cast<int>(out.basis.size());
    bool homogeneous = std::all_of(generators.begin(), generators.end(),
                                   [](const GrassmannElement& g) {
                                       return g.is_zero() || g.parity().has_value();
                                   });
    if (homogeneous)
        out.graded_dim = {e, o};
    return out;
}

namespace {

struct SlotAmbient {
    std::vector<GrassmannMonomial> monos;
    std::map<GrassmannMonomial, std::size_t> index;
    std::size_t slots = 0;

    SlotAmbient(const AlgebraSignature& sig, std::size_t slots_, int truncation)
        : monos(monomial_basis(sig, truncation)), slots(slots_) {
        for (std::size_t i = 0; i < monos.size(); ++i)
            index[monos[i]] = i;
    }
    std::size_t cols() const { return slots * monos.size(); }
    std::size_t col(std::size_t slot, std::size_t mi) const {
        return slot * monos.size() + mi;
    }
    // Expands a slot vector into ambient coordinates; returns false when the
    // vector lies entirely outside the truncated window, throws on partial
    // overflow (the window would then be unsound).
    bool expand(const std::vector<GrassmannElement>& v, QVec& row) const {
        row.assign(cols(), 0);
        bool inside = false, outside = false;
        for (std::size_t j = 0; j < v.size(); ++j)
            for (const auto& [tm, tc] : v[j].terms()) {
                auto it = index.find(tm);
                if (it == index.end()) {
                    outside = true;
                } else {
                    inside = true;
                    row[col(j, it->second)] += tc;
                }
            }
        if (inside && outside)
            throw std::invalid_argument("slot module: truncation too small");
        return inside || !outside;
    }
};

} // namespace

LambdaModuleDescription kernel_of_map(const AlgebraSignature& sig,
                                      const std::vector<int>& slot_shifts, std::size_t rows,
                                      const SlotMap& map, int truncation) {
    SlotAmbient amb(sig, slot_shifts.size(), truncation);
    CoordinateSpace eq;
    std::vector<std::map<std::size_t, Rational>> colvals(amb.cols());
    for (std::size_t j = 0; j < amb.slots; ++j)
        for (std::size_t mi = 0; mi < amb.monos.size(); ++mi) {
            auto v = map(j, monomial_element(sig, amb.monos[mi]));
            if (v.size() != rows)
                throw std::invalid_argument("kernel_of_map: row count mismatch");
            for (std::size_t i = 0; i < rows; ++i)
                for (const auto& [tm, tc] : v[i].terms())
                    colvals[amb.col(j, mi)][eq.get(i, tm)] += tc;
        }
    QMat a(std::max<std::size_t>(eq.index.size(), 1), QVec(amb.cols(), 0));
    for (std::size_t c = 0; c < amb.cols(); ++c)
        for (const auto& [r, val] : colvals[c])
            a[r][c] = val;
    AffineSolution sol = solve_affine(a, QVec(a.size(), 0));

    LambdaModuleDescription out;
    for (const auto& m : amb.monos)
        out.ambient_basis.push_back(monomial_label(sig, m));
    for (const auto& kv : sol.kernel) {
        std::vector<GrassmannElement> xs(amb.slots, GrassmannElement::zero(sig));
        for (std::size_t c = 0; c < amb.cols(); ++c)
            if (kv[c] != 0)
                xs[c / amb.monos.size()].add_term(amb.monos[c % amb.monos.size()], kv[c]);
        out.basis.push_back(std::move(xs));
    }
    out.dim = static_cast<int>(out.basis.size());

    // Graded dimension via parity-restricted re-solves, accepted only when
    // the homogeneous pieces account for the whole kernel.
    int graded[2] = {0, 0};
    for (int par = 0; par < 2; ++par) {
        std::vector<std::size_t> keep;
        for (std::size_t c = 0; c < amb.cols(); ++c) {
            std::size_t j = c / amb.monos.size();
            int p = (monomial_parity(amb.monos[c % amb.monos.size()]) + slot_shifts[j]) & 1;
            if (p == par)
                keep.push_back(c);
        }
        QMat sub(a.size(), QVec(keep.size(), 0));
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t k = 0; k < keep.size(); ++k)
                sub[i][k] = a[i][keep[k]];
        graded[par] = static_cast<int>(keep.size() - qrank(std::move(sub)));
    }
    if (graded[0] + graded[1] == out.dim)
        out.graded_dim = {graded[0], graded[1]};
    return out;
}

LambdaModuleDescription
slot_quotient(const AlgebraSignature& sig, const std::vector<int>& slot_shifts,
              const std::vector<std::function<std::vector<GrassmannElement>(
                  const GrassmannElement& m)>>& generators,
              int truncation) {
    SlotAmbient amb(sig, slot_shifts.size(), truncation);
    QMat span;
    for (const auto& g : generators)
        for (const auto& m : amb.monos) {
            auto v = g(monomial_element(sig, m));
            if (v.size() != amb.slots)
                throw std::invalid_argument("slot_quotient: slot count mismatch");
            QVec row;
            if (!amb.expand(v, row))
                continue;
            if (std::any_of(row.begin(), row.end(), [](const Rational& r) { return r != 0; }))
                span.push_back(std::move(row));
        }
    std::vector<bool> pivot_col(amb.cols(), false);
    if (!span.empty())
        for (std::size_t p : rref(span))
            pivot_col[p] = true;

    LambdaModuleDescription out;
    for (const auto& m : amb.monos)
        out.ambient_basis.push_back(monomial_label(sig, m));
    int e = 0, o = 0;
    for (std::size_t c = 0; c < amb.cols(); ++c) {
        if (pivot_col[c])
            continue;
        std::size_t j = c / amb.monos.size();
        const auto& m = amb.monos[c % amb.monos.size()];
        std::vector<GrassmannElement> xs(amb.slots, GrassmannElement::zero(sig));
        xs[j].add_term(m, 1);
        out.basis.push_back(std::move(xs));
        ((monomial_parity(m) + slot_shifts[j]) & 1 ? o : e) += 1;
    }
    out.dim = static_cast<int>(out.basis.size());
    out.graded_dim = {e, o};
    return out;
}

bool slot_in_span(const AlgebraSignature& sig, const std::vector<GrassmannElement>& x,
                  const std::vector<std::function<std::vector<GrassmannElement>(
                      const GrassmannElement& m)>>& generators,
                  int truncation) {
    SlotAmbient amb(sig, x.size(), truncation);
    QVec target;
    if (!amb.expand(x, target))
        throw std::invalid_argument("slot_in_span: vector outside truncation window");
    QMat span;
    for (const auto& g : generators)
        for (const auto& m : amb.monos) {
            auto v = g(monomial_element(sig, m));
            QVec row;
            if (amb.expand(v, row))
                span.push_back(std::move(row));
        }
    // Columns of the solve are the span rows.
    QMat a(amb.cols(), QVec(span.size(), 0));
    for (std::size_t i = 0; i < span.size(); ++i)
        for (std::size_t c = 0; c < amb.cols(); ++c)
            a[c][i] = span[i][c];
    return solve_affine(a, target).consistent;
}

bool in_span(const GrassmannElement& x, const std::vector<GrassmannElement>& generators) {
    if (x.is_zero())
        return true;
    if (generators.empty())
        return false;
    std::vector<std::vector<GrassmannElement>> system{generators};
    int trunc = x.max_even_degree();
    for (const auto& g : generators)
        trunc = std::max(trunc, g.max_even_degree());
    return solve_linear(system, {x}, trunc).consistent;
}

} // namespace supercurve
