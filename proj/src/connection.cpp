#include "supercurve/connection.hpp"
#include "supercurve/linear.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace supercurve {

SuperMatrix::SuperMatrix(Chart chart, int p, int q, int parity)
    : chart_(std::move(chart)), p_(p), q_(q), parity_(parity) {
    if (p < 0 || q < 0 || p + q == 0)
        throw std::invalid_argument("SuperMatrix: bad rank");
    entries_.assign(p + q, std::vector<ChartFunction>(p + q, ChartFunction::zero(chart_)));
}

SuperMatrix SuperMatrix::identity(const Chart& c, int p, int q) {
    SuperMatrix m(c, p, q, 0);
    for (int i = 0; i < p + q; ++i)
        m.set(i, i, ChartFunction::one(c));
    return m;
}

SuperMatrix SuperMatrix::zero(const Chart& c, int p, int q, int parity) {
    return SuperMatrix(c, p, q, parity);
}

void SuperMatrix::set(int i, int j, ChartFunction f) {
    entries_.at(i).at(j) = std::move(f);
}

bool SuperMatrix::is_zero() const {
    for (const auto& row : entries_)
        for (const auto& e : row)
            if (!e.is_zero())
                return false;
    return true;
}

bool SuperMatrix::operator==(const SuperMatrix& o) const {
    if (p_ != o.p_ || q_ != o.q_ || !(chart_ == o.chart_))
        return false;
    return entries_ == o.entries_;
}

bool SuperMatrix::parity_consistent() const {
    for (int i = 0; i < n(); ++i)
        for (int j = 0; j < n(); ++j) {
            const ChartFunction& e = entries_[i][j];
            if (e.is_zero())
                continue;
            auto par = e.parity();
            if (!par)
                return false;
            if (*par != ((parity_ + row_parity(i) + row_parity(j)) & 1))
                return false;
        }
    return true;
}

SuperMatrix SuperMatrix::operator+(const SuperMatrix& o) const {
    SuperMatrix r = *this;
    for (int i = 0; i < n(); ++i)
        for (int j = 0; j < n(); ++j)
            r.entries_[i][j] = r.entries_[i][j] + o.entries_[i][j];
    return r;
}

SuperMatrix SuperMatrix::operator-(const SuperMatrix& o) const {
    SuperMatrix r = *this;
    for (int i = 0; i < n(); ++i)
        for (int j = 0; j < n(); ++j)
            r.entries_[i][j] = r.entries_[i][j] - o.entries_[i][j];
    return r;
}

SuperMatrix SuperMatrix::operator-() const {
    SuperMatrix r = *this;
    for (auto& row : r.entries_)
        for (auto& e : row)
            e = -e;
    return r;
}

SuperMatrix SuperMatrix::operator*(const SuperMatrix& o) const {
    if (p_ != o.p_ || q_ != o.q_)
        throw std::invalid_argument("SuperMatrix: rank mismatch");
    SuperMatrix r(chart_, p_, q_, (parity_ + o.parity_) & 1);
    for (int i = 0; i < n(); ++i)
        for (int j = 0; j < n(); ++j) {
            ChartFunction s = ChartFunction::zero(chart_);
            for (int k = 0; k < n(); ++k)
                s = s + entries_[i][k] * o.entries_[k][j];
            r.entries_[i][j] = s;
        }
    return r;
}

std::vector<ChartFunction> SuperMatrix::operator*(const std::vector<ChartFunction>& v) const {
    if (static_cast<int>(v.size()) != n())
        throw std::invalid_argument("SuperMatrix: vector size mismatch");
    std::vector<ChartFunction> r(n(), ChartFunction::zero(chart_));
    for (int i = 0; i < n(); ++i)
        for (int k = 0; k < n(); ++k)
            r[i] = r[i] + entries_[i][k] * v[k];
    return r;
}

SuperMatrix SuperMatrix::parity_flip() const {
    SuperMatrix r = *this;
    for (auto& row : r.entries_)
        for (auto& e : row)
            e = e.parity_flip();
    return r;
}

SuperMatrix SuperMatrix::map_entries(
    const std::function<ChartFunction(const ChartFunction&)>& f, int new_parity) const {
    SuperMatrix r(chart_, p_, q_, new_parity);
    for (int i = 0; i < n(); ++i)
        for (int j = 0; j < n(); ++j)
            r.entries_[i][j] = f(entries_[i][j]);
    return r;
}

SuperMatrix SuperMatrix::inverse() const {
    // Constant rational body block.
    QMat body(n(), QVec(n(), 0));
    for (int i = 0; i < n(); ++i)
        for (int j = 0; j < n(); ++j)
            body[i][j] = entries_[i][j].coefficient(0, 0).body();
    QMat aug(n(), QVec(2 * n(), 0));
    for (int i = 0; i < n(); ++i) {
        for (int j = 0; j < n(); ++j)
            aug[i][j] = body[i][j];
        aug[i][n() + i] = 1;
    }
    auto pivots = rref(aug);
    if (static_cast<int>(pivots.size()) != n() || pivots.back() >= static_cast<std::size_t>(n()))
        throw std::domain_error("SuperMatrix::inverse: body not invertible");
    SuperMatrix binv(chart_, p_, q_, 0);
    for (int i = 0; i < n(); ++i)
        for (int j = 0; j < n(); ++j)
            binv.entries_[i][j] = ChartFunction::scalar(chart_, aug[i][n() + j]);
    SuperMatrix b(chart_, p_, q_, 0);
    for (int i = 0; i < n(); ++i)
        for (int j = 0; j < n(); ++j)
            b.entries_[i][j] = ChartFunction::scalar(chart_, body[i][j]);
    SuperMatrix nrest = *this - b;
    SuperMatrix m = binv * nrest;  // nilpotent entries required
    SuperMatrix acc = identity(chart_, p_, q_);
    SuperMatrix pw = identity(chart_, p_, q_);
    int bound = static_cast<int>(chart_.algebra.odd.size() + chart_.odd_coords.size()) + 1;
    for (int k = 1; k <= bound; ++k) {
        pw = pw * m;
        if (pw.is_zero())
            break;
        if (k % 2 == 1)
            acc = acc - pw;
        else
            acc = acc + pw;
    }
    SuperMatrix inv = acc * binv;
    if (!((*this * inv) == identity(chart_, p_, q_)))
        throw std::domain_error("SuperMatrix::inverse: verification failed");
    return inv;
}

std::string SuperMatrix::to_string() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < n(); ++i) {
        os << (i ? "; " : "");
        for (int j = 0; j < n(); ++j)
            os << (j ? ", " : "") << entries_[i][j].to_string();
    }
    os << "]";
    return os.str();
}

ConnectionForm ConnectionForm::zero(const Chart& c, int p, int q) {
    ConnectionForm f;
    f.chart = c;
    f.p = p;
    f.q = q;
    f.omega_even = SuperMatrix::zero(c, p, q, 0);
    for (const auto& name : c.odd_coords)
        f.omega_odd.emplace(name, SuperMatrix::zero(c, p, q, 1));
    return f;
}

std::vector<ChartFunction> ConnectionForm::nabla_even(
    const std::vector<ChartFunction>& v) const {
    std::vector<ChartFunction> r = omega_even * v;
    for (std::size_t i = 0; i < v.size(); ++i)
        r[i] = r[i] + v[i].d_even();
    return r;
}

std::vector<ChartFunction> ConnectionForm::nabla_odd(
    const std::string& name, const std::vector<ChartFunction>& v) const {
    auto it = omega_odd.find(name);
    if (it == omega_odd.end())
        throw std::invalid_argument("nabla_odd: no component for " + name);
    std::vector<ChartFunction> r = it->second * v;
    for (std::size_t i = 0; i < v.size(); ++i)
        r[i] = r[i] + v[i].d_odd(name);
    return r;
}

namespace {

std::vector<ChartFunction> basis_column(const Chart& c, int nn, int j) {
    std::vector<ChartFunction> e(nn, ChartFunction::zero(c));
    e[j] = ChartFunction::one(c);
    return e;
}

SuperMatrix columns_to_matrix(const ConnectionForm& omega,
                              const std::vector<std::vector<ChartFunction>>& cols) {
    SuperMatrix m(omega.chart, omega.p, omega.q, 0);
    for (int j = 0; j < m.n(); ++j)
        for (int i = 0; i < m.n(); ++i)
            m.set(i, j, cols[j][i]);
    return m;
}

} // namespace

CurvatureReport flat_check(const ConnectionForm& omega) {
    CurvatureReport rep;
    int nn = omega.p + omega.q;
    const Chart& c = omega.chart;
    auto record = [&](const std::string& label,
                      const std::vector<std::vector<ChartFunction>>& cols) {
        SuperMatrix m = columns_to_matrix(omega, cols);
        if (!m.is_zero()) {
            rep.flat = false;
            rep.residuals.emplace_back(label, m);
        }
    };
    // [nabla_z, nabla_c] for odd c.
    for (const auto& name : c.odd_coords) {
        std::vector<std::vector<ChartFunction>> cols;
        for (int j = 0; j < nn; ++j) {
            auto e = basis_column(c, nn, j);
            auto a = omega.nabla_even(omega.nabla_odd(name, e));
            auto b = omega.nabla_odd(name, omega.nabla_even(e));
            for (int i = 0; i < nn; ++i)
                a[i] = a[i] - b[i];
            cols.push_back(std::move(a));
        }
        record(c.even_coord + "," + name, cols);
    }
    // {nabla_c, nabla_d} for odd pairs, including c = d.
    for (std::size_t x = 0; x < c.odd_coords.size(); ++x)
        for (std::size_t y = x; y < c.odd_coords.size(); ++y) {
            const std::string& cx = c.odd_coords[x];
            const std::string& cy = c.odd_coords[y];
            std::vector<std::vector<ChartFunction>> cols;
            for (int j = 0; j < nn; ++j) {
                auto e = basis_column(c, nn, j);
                auto a = omega.nabla_odd(cx, omega.nabla_odd(cy, e));
                if (x != y) {
                    auto b = omega.nabla_odd(cy, omega.nabla_odd(cx, e));
                    for (int i = 0; i < nn; ++i)
                        a[i] = a[i] + b[i];
                }
                cols.push_back(std::move(a));
            }
            record(cx + "," + cy, cols);
        }
    return rep;
}

ParallelFrame parallel_frame(const ConnectionForm& omega,
                             const std::vector<std::string>& fiber) {
    const Chart& c = omega.chart;
    int nn = omega.p + omega.q;
    SuperMatrix m = SuperMatrix::identity(c, omega.p, omega.q);
    for (const auto& name : fiber) {
        ChartFunction theta = ChartFunction::odd_coordinate(c, name);
        std::vector<std::vector<ChartFunction>> cols;
        for (int j = 0; j < nn; ++j) {
            std::vector<ChartFunction> col(nn, ChartFunction::zero(c));
            for (int i = 0; i < nn; ++i)
                col[i] = m.at(i, j);
            auto d = omega.nabla_odd(name, col);
            for (int i = 0; i < nn; ++i)
                col[i] = col[i] - theta * d[i];
            cols.push_back(std::move(col));
        }
        m = columns_to_matrix(omega, cols);
    }
    ParallelFrame f;
    f.a0 = std::move(m);
    f.fiber = fiber;
    return f;
}

bool frame_identity_holds(const ConnectionForm& omega, const ParallelFrame& frame) {
    SuperMatrix inv = frame.a0.inverse();
    for (const auto& name : frame.fiber) {
        SuperMatrix d = frame.a0.map_entries(
            [&](const ChartFunction& e) { return e.d_odd(name); }, 1);
        if (!((-d) * inv == omega.omega_odd.at(name)))
            return false;
    }
    return true;
}

ChartFunction demote(const ChartFunction& f, const Chart& base) {
    const Chart& src = f.chart();
    if (!(src.algebra == base.algebra) || src.even_coord != base.even_coord)
        throw std::invalid_argument("demote: incompatible charts");
    ChartFunction out(base);
    for (const auto& [k, g] : f.terms()) {
        std::vector<int> letters;
        std::uint32_t m = k.second;
        while (m) {
            int i = std::countr_zero(m);
            m &= m - 1;
            int t = base.odd_index(src.odd_coords[i]);
            if (t < 0)
                throw std::invalid_argument("demote: function depends on fiber coordinate " +
                                            src.odd_coords[i]);
            letters.push_back(t);
        }
        int sign = 1;
        std::uint32_t mask = 0;
        for (std::size_t a = 0; a < letters.size(); ++a)
            for (std::size_t b = a + 1; b < letters.size(); ++b)
                if (letters[a] > letters[b])
                    sign = -sign;
        for (int l : letters)
            mask |= std::uint32_t(1) << l;
        out.add_term(k.first, mask, sign == 1 ? g : -g);
    }
    return out;
}

DirectImage direct_image_module(const ConnectionForm& omega,
                                const std::vector<std::string>& fiber,
                                const Chart& base_chart) {
    auto rep = flat_check(omega);
    if (!rep.flat)
        throw std::domain_error("direct_image_module: connection is not flat");
    DirectImage out;
    out.frame = parallel_frame(omega, fiber);
    const SuperMatrix& a0 = out.frame.a0;
    SuperMatrix inv = a0.inverse();
    SuperMatrix flip_inv = a0.parity_flip().inverse();

    auto induced = [&](const SuperMatrix& omega_c, const std::string& dname, bool odd_dir) {
        SuperMatrix d = a0.map_entries(
            [&](const ChartFunction& e) {
                return odd_dir ? e.d_odd(dname) : e.d_even();
            },
            odd_dir ? 1 : 0);
        SuperMatrix raw = (odd_dir ? flip_inv : inv) * (d + omega_c * a0);
        SuperMatrix r(base_chart, omega.p, omega.q, odd_dir ? 1 : 0);
        for (int i = 0; i < raw.n(); ++i)
            for (int j = 0; j < raw.n(); ++j)
                r.set(i, j, demote(raw.at(i, j), base_chart));
        return r;
    };

    ConnectionForm base = ConnectionForm::zero(base_chart, omega.p, omega.q);
    base.omega_even = induced(omega.omega_even, "", false);
    for (const auto& name : base_chart.odd_coords)
        base.omega_odd[name] = induced(omega.omega_odd.at(name), name, true);
    out.base = std::move(base);
    return out;
}

ConnectionForm pullback_connection(const ConnectionForm& base, const Chart& total_chart) {
    ConnectionForm out = ConnectionForm::zero(total_chart, base.p, base.q);
    auto lift = [&](const SuperMatrix& m, int parity) {
        SuperMatrix r(total_chart, base.p, base.q, parity);
        for (int i = 0; i < m.n(); ++i)
            for (int j = 0; j < m.n(); ++j)
                r.set(i, j, promote(m.at(i, j), total_chart));
        return r;
    };
    out.omega_even = lift(base.omega_even, 0);
    for (const auto& name : base.chart.odd_coords)
        out.omega_odd[name] = lift(base.omega_odd.at(name), 1);
    return out;
}

std::pair<ChartFunction, ChartFunction> one_form_d(const ChartFunction& a,
                                                   const ChartFunction& b) {
    const Chart& c = a.chart();
    const std::string& theta = c.odd_coords[0];
    return {b.d_even() - a.d_odd(theta), b.d_odd(theta)};
}

ChartFunction transform_line_bundle(const ChartFunction& a, const ChartFunction& b,
                                    const Chart& delta) {
    auto [r1, r2] = one_form_d(a, b);
    if (!r1.is_zero() || !r2.is_zero())
        throw std::domain_error("transform_line_bundle: one-form is not closed");
    ChartFunction ap = promote(a, delta);
    ChartFunction bp = promote(b, delta);
    ChartFunction theta = ChartFunction::odd_coordinate(delta, delta.odd_coords[0]);
    ChartFunction rho = ChartFunction::odd_coordinate(delta, delta.odd_coords[1]);
    // phi0 = 1 - theta nabla^hat_theta(1),  nabla^hat_theta = nabla_theta
    // + rho nabla_z  acting on the pulled-back rank-1 module.
    return ChartFunction::one(delta) - theta * (bp + rho * ap);
}

namespace {

struct CoordSpace {
    std::map<std::pair<int, GrassmannMonomial>, std::size_t> index;
    std::size_t get(int slot, const GrassmannMonomial& m) {
        auto [it, ins] = index.try_emplace({slot, m}, index.size());
        return it->second;
    }
};

// Exactness of  0 -> L -> M -> R -> 0  given the middle-space basis, the
// inclusion image of each left basis vector, and the right-map image of
// each middle basis vector, all as coordinate vectors.
SequenceReport check_exact(const std::string& name, std::size_t left_dim,
                           const QMat& left_vectors, std::size_t middle_dim,
                           const QMat& right_map, std::size_t right_dim) {
    SequenceReport rep;
    rep.name = name;
    rep.left_dim = static_cast<int>(left_dim);
    rep.middle_dim = static_cast<int>(middle_dim);
    rep.right_dim = static_cast<int>(right_dim);
    std::size_t rank_left = qrank(left_vectors);
    QMat rm = right_map;
    std::size_t rank_right = qrank(rm);
    // Composite is zero iff every left vector maps to zero under the right
    // map; left_vectors rows are middle coordinates, right_map rows are
    // middle basis -> right coordinates.
    bool composite_zero = true;
    for (const auto& lv : left_vectors) {
        QVec img(right_dim, 0);
        for (std::size_t j = 0; j < middle_dim; ++j)
            if (lv[j] != 0)
                for (std::size_t r = 0; r < right_dim; ++r)
                    img[r] += lv[j] * right_map[j][r];
        for (const auto& v : img)
            if (v != 0)
                composite_zero = false;
    }
    rep.exact = composite_zero && rank_left == left_dim && rank_right == right_dim &&
                rank_left + rank_right == middle_dim;
    return rep;
}

} // namespace

std::vector<SequenceReport> closed_form_sequences_check(const AlgebraSignature& sig) {
    std::vector<SequenceReport> out;
    // Grassmann masks of even-symbol degree zero.
    std::vector<GrassmannMonomial> monos;
    std::uint32_t nmask = std::uint32_t(1) << sig.odd.size();
    for (std::uint32_t m = 0; m < nmask; ++m)
        monos.push_back({m, std::vector<int>(sig.even.size(), 0)});
    auto par = [](const GrassmannMonomial& m) { return std::popcount(m.mask) & 1; };
    auto soul = [](const GrassmannMonomial& m) { return m.mask != 0; };

    Chart dc = delta_chart(sig);
    ChartFunction th = ChartFunction::odd_coordinate(dc, "theta");
    ChartFunction rh = ChartFunction::odd_coordinate(dc, "rho");
    auto tilde = [&](const ChartFunction& f) {
        return rh * f.d_even() + f.d_odd("theta");
    };
    auto elem = [&](const GrassmannMonomial& m) {
        return ChartFunction::from_coefficient(dc, monomial_element(sig, m));
    };

    // Sequence 1:  0 -> (N_Xhat)_0 -> (N_Delta)_0 -> (closed one-forms)_1 -> 0
    {
        // Middle slots: 0 = A (even soul), 1 = alpha (odd), 2 = beta (odd),
        // 3 = B (even).  Right slots: 0 = dz coefficient (even), 1 = dtheta
        // coefficient (odd).
        std::vector<std::pair<int, GrassmannMonomial>> middle, right;
        for (const auto& m : monos) {
            if (par(m) == 0 && soul(m))
                middle.push_back({0, m});
            if (par(m) == 1)
                middle.push_back({1, m});
            if (par(m) == 1)
                middle.push_back({2, m});
            if (par(m) == 0)
                middle.push_back({3, m});
            if (par(m) == 0)
                right.push_back({0, m});
            if (par(m) == 1)
                right.push_back({1, m});
        }
        auto midx = [&](int slot, const GrassmannMonomial& m) {
            for (std::size_t i = 0; i < middle.size(); ++i)
                if (middle[i].first == slot && middle[i].second == m)
                    return i;
            throw std::logic_error("sequence 1: missing middle coordinate");
        };
        auto build = [&](int slot, const GrassmannMonomial& m) {
            ChartFunction g = elem(m);
            if (slot == 0)
                return g;
            if (slot == 1)
                return th * g;
            if (slot == 2)
                return rh * g;
            return th * rh * g;
        };
        // Left space: A-hat (even soul) in slot A, beta-hat (odd) in slot beta.
        QMat left;
        for (const auto& m : monos) {
            if (par(m) == 0 && soul(m)) {
                QVec v(middle.size(), 0);
                v[midx(0, m)] = 1;
                left.push_back(v);
            }
            if (par(m) == 1) {
                QVec v(middle.size(), 0);
                v[midx(2, m)] = 1;
                left.push_back(v);
            }
        }
        // Right map: tilde_d of each middle basis element; the dtheta
        // coefficient A' + rho B' encodes the one-form dz.B' + dtheta.A'.
        QMat rmap;
        for (const auto& [slot, m] : middle) {
            ChartFunction img = tilde(build(slot, m));
            QVec v(right.size(), 0);
            DeltaComponents comps = delta_components(img);
            for (std::size_t r = 0; r < right.size(); ++r) {
                const ChartFunction& src = right[r].first == 0 ? comps.beta : comps.a;
                GrassmannElement coeff = src.coefficient(0, 0);
                auto it = coeff.terms().find(right[r].second);
                if (it != coeff.terms().end())
                    v[r] = it->second;
            }
            rmap.push_back(v);
        }
        out.push_back(check_exact("superdiagonal", left.size(), left, middle.size(), rmap,
                                  right.size()));
    }

    // Sequence 2:  0 -> N_X0 -> N_X -> relative closed one-forms -> 0
    {
        Chart xc = x_chart(sig);
        ChartFunction txc = ChartFunction::odd_coordinate(xc, "theta");
        std::vector<std::pair<int, GrassmannMonomial>> middle;  // 0 = a (soul), 1 = alpha
        for (const auto& m : monos) {
            if (soul(m))
                middle.push_back({0, m});
            middle.push_back({1, m});
        }
        QMat left;
        for (std::size_t i = 0; i < middle.size(); ++i)
            if (middle[i].first == 0) {
                QVec v(middle.size(), 0);
                v[i] = 1;
                left.push_back(v);
            }
        QMat rmap;
        for (const auto& [slot, m] : middle) {
            ChartFunction f = ChartFunction::from_coefficient(xc, monomial_element(sig, m));
            if (slot == 1)
                f = txc * f;
            ChartFunction img = f.d_odd("theta");  // dtheta coefficient of d_rel
            QVec v(monos.size(), 0);
            GrassmannElement coeff = img.coefficient(0, 0);
            for (std::size_t r = 0; r < monos.size(); ++r) {
                auto it = coeff.terms().find(monos[r]);
                if (it != coeff.terms().end())
                    v[r] = it->second;
            }
            rmap.push_back(v);
        }
        out.push_back(check_exact("relative", left.size(), left, middle.size(), rmap,
                                  monos.size()));
    }

    // Sequence 3:  0 -> I -> I.O_X -> one-forms on X0 -> 0
    {
        std::vector<std::pair<int, GrassmannMonomial>> middle;  // 0 = rho.a, 1 = rho.theta.b
        for (const auto& m : monos) {
            middle.push_back({0, m});
            middle.push_back({1, m});
        }
        QMat left;
        for (std::size_t i = 0; i < middle.size(); ++i)
            if (middle[i].first == 0) {
                QVec v(middle.size(), 0);
                v[i] = 1;
                left.push_back(v);
            }
        QMat rmap;
        for (const auto& [slot, m] : middle) {
            ChartFunction g = elem(m);
            ChartFunction f = slot == 0 ? rh * g : rh * th * g;
            ChartFunction img = tilde(f);  // of the form rho.c = dz coefficient c
            DeltaComponents comps = delta_components(img);
            QVec v(monos.size(), 0);
            GrassmannElement coeff = comps.beta.coefficient(0, 0);
            for (std::size_t r = 0; r < monos.size(); ++r) {
                auto it = coeff.terms().find(monos[r]);
                if (it != coeff.terms().end())
                    v[r] = it->second;
            }
            rmap.push_back(v);
        }
        out.push_back(check_exact("ideal", left.size(), left, middle.size(), rmap,
                                  monos.size()));
    }
    return out;
}

} // namespace supercurve
