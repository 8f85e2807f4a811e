#include "supercurve/job.hpp"

#include "supercurve/connection.hpp"
#include "supercurve/duality.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <sstream>

namespace supercurve {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw JobParseError(where + ": " + what);
}

GrassmannElement element_field(const AlgebraSignature& sig, const YAML::Node& node,
                               const std::string& where, const char* key,
                               bool required = true) {
    if (!node[key]) {
        if (required)
            fail(where, std::string("missing field '") + key + "'");
        return GrassmannElement::zero(sig);
    }
    try {
        return parse_element(sig, node[key].as<std::string>());
    } catch (const std::exception& e) {
        fail(where + "." + key, e.what());
    }
}

Space parse_space(const std::string& s, const std::string& where) {
    if (s == "X")
        return Space::X;
    if (s == "Xhat")
        return Space::Xhat;
    if (s == "Delta")
        return Space::Delta;
    fail(where, "space must be one of X, Xhat, Delta");
}

SuperEllipticCurve parse_curve(const AlgebraSignature& sig, const YAML::Node& payload) {
    const YAML::Node& c = payload["curve"];
    if (!c || !c.IsMap())
        fail("payload.curve", "missing or not a map");
    try {
        return SuperEllipticCurve(sig, element_field(sig, c, "payload.curve", "modulus"),
                                  element_field(sig, c, "payload.curve", "epsilon"),
                                  element_field(sig, c, "payload.curve", "delta"));
    } catch (const std::invalid_argument& e) {
        fail("payload.curve", e.what());
    }
}

EllipticMultiplier parse_multiplier(const AlgebraSignature& sig, const YAML::Node& m,
                                    const std::string& where) {
    if (!m || !m.IsMap())
        fail(where, "missing or not a map");
    std::pair<long, long> lattice{0, 0};
    if (m["lattice"]) {
        if (!m["lattice"].IsSequence() || m["lattice"].size() != 2)
            fail(where + ".lattice", "expected a pair of integers");
        lattice = {m["lattice"][0].as<long>(), m["lattice"][1].as<long>()};
    }
    std::optional<GrassmannElement> rho;
    if (m["rho_term"])
        rho = element_field(sig, m, where, "rho_term");
    try {
        return EllipticMultiplier(lattice, element_field(sig, m, where, "A", false),
                                  element_field(sig, m, where, "alpha", false), rho);
    } catch (const std::invalid_argument& e) {
        fail(where, e.what());
    }
}

std::pair<EllipticMultiplier, Space> parse_lift_operand(const AlgebraSignature& sig,
                                                        const YAML::Node& n,
                                                        const std::string& where) {
    if (!n || !n.IsMap())
        fail(where, "missing or not a map");
    if (!n["from"])
        fail(where, "missing field 'from'");
    Space from = parse_space(n["from"].as<std::string>(), where + ".from");
    if (from == Space::Delta)
        fail(where + ".from", "lift source must be X or Xhat");
    return {parse_multiplier(sig, n["multiplier"], where + ".multiplier"), from};
}

EllipticOneForm parse_one_form(const AlgebraSignature& sig, const YAML::Node& payload) {
    const YAML::Node& f = payload["one_form"];
    if (!f || !f.IsMap())
        fail("payload.one_form", "missing or not a map");
    try {
        return EllipticOneForm(element_field(sig, f, "payload.one_form", "A", false),
                               element_field(sig, f, "payload.one_form", "B", false));
    } catch (const std::invalid_argument& e) {
        fail("payload.one_form", e.what());
    }
}

void emit_multiplier(YAML::Emitter& out, const EllipticMultiplier& m) {
    out << YAML::BeginMap;
    out << YAML::Key << "lattice" << YAML::Value << YAML::Flow << YAML::BeginSeq
        << m.lattice.first << m.lattice.second << YAML::EndSeq;
    out << YAML::Key << "A" << YAML::Value << m.a.to_string();
    out << YAML::Key << "alpha" << YAML::Value << m.alpha.to_string();
    if (m.rho_term)
        out << YAML::Key << "rho_term" << YAML::Value << m.rho_term->to_string();
    out << YAML::EndMap;
}

std::string multiplier_text(const EllipticMultiplier& m) {
    std::ostringstream os;
    os << "lattice (" << m.lattice.first << ", " << m.lattice.second << "), exp( "
       << m.a.to_string() << " + theta ( " << m.alpha.to_string() << " )";
    if (m.rho_term)
        os << " + ( " << m.rho_term->to_string() << " ) rho";
    os << " )";
    return os.str();
}

void emit_module(YAML::Emitter& out, const LambdaModuleDescription& d) {
    out << YAML::BeginMap;
    out << YAML::Key << "dim" << YAML::Value << d.dim;
    if (d.graded_dim)
        out << YAML::Key << "graded" << YAML::Value << YAML::Flow << YAML::BeginSeq
            << d.graded_dim->first << d.graded_dim->second << YAML::EndSeq;
    out << YAML::Key << "basis" << YAML::Value << YAML::BeginSeq;
    for (const auto& vec : d.basis) {
        out << YAML::Flow << YAML::BeginSeq;
        for (const auto& g : vec)
            out << g.to_string();
        out << YAML::EndSeq;
    }
    out << YAML::EndSeq;
    out << YAML::EndMap;
}

std::string space_name(Space s) {
    switch (s) {
    case Space::X: return "X";
    case Space::Xhat: return "Xhat";
    default: return "Delta";
    }
}

struct Check {
    std::string name;
    bool pass = false;
};

std::vector<Check> identity_checks(const SuperEllipticCurve& x) {
    std::vector<Check> out;
    const AlgebraSignature& sig = x.sig;
    GrassmannElement zero = GrassmannElement::zero(sig);

    SuperEllipticCurve xh = dual_curve(x);
    out.push_back({"dual-involution", dual_curve(xh) == x});

    EllipticMultiplier mx({0, 0}, zero, x.eps);
    EllipticMultiplier mh({0, 0}, zero, x.del);
    out.push_back({"lift-coincidence",
                   delta_classes_equal(lift_to_delta(mx, Space::X, x),
                                       lift_to_delta(mh, Space::Xhat, x), x)});

    bool flat_ok = true;
    {
        EllipticOneForm om(zero, x.del.is_zero() ? x.eps : x.del);
        auto tr = transform_trivial_with_connection(om, x);
        flat_ok = admits_flat_connection(tr, Space::Xhat, x);
    }
    out.push_back({"transform-admits-flat", flat_ok});

    // A transform against the zero one-form leaves every multiplier's
    // exponent data unchanged.
    bool identity_ok = true;
    {
        EllipticMultiplier m({0, 0}, gmul(x.eps, x.del), x.eps);
        auto tr = transform_bundle(m, EllipticOneForm(zero, zero), x);
        identity_ok = (tr.a - m.a).is_zero() && (tr.alpha - m.alpha).is_zero() &&
                      !tr.rho_term.has_value() && tr.lattice == m.lattice;
    }
    out.push_back({"zero-form-transform-is-identity", identity_ok});

    // On the split curve the dual transform followed by the direct image
    // equals the direct image alone.
    bool split_ok = true;
    {
        SuperEllipticCurve sp(sig, x.modulus, zero, zero);
        EllipticOneForm om(zero, x.eps);
        auto direct = direct_image_projected(om, sp);
        auto transformed = transform_trivial_with_connection(om, sp);
        split_ok = transformed.a.is_zero() && transformed.alpha.is_zero() &&
                   (!transformed.rho_term || transformed.rho_term->is_zero()) &&
                   direct.a.is_zero() && direct.alpha.is_zero();
    }
    out.push_back({"split-case-identity", split_ok});

    auto ber = berezinian_dimension_check(x);
    out.push_back({"berezinian-dimensions", ber.equal});

    // d(dz del + dtheta theta eps) = dtheta^2 eps: global but not closed.
    {
        Chart chart = x_chart(sig);
        ChartFunction a = ChartFunction::from_coefficient(chart, x.del);
        ChartFunction b =
            ChartFunction::odd_coordinate(chart, chart.odd_coords[0]) * x.eps;
        auto [dzd, dtt] = one_form_d(a, b);
        out.push_back({"one-form-counterexample",
                       dzd.is_zero() &&
                           dtt == ChartFunction::from_coefficient(chart, x.eps)});
    }

    bool seq_ok = true;
    for (const auto& s : closed_form_sequences_check(sig))
        seq_ok = seq_ok && s.exact;
    out.push_back({"exact-sequences", seq_ok});

    return out;
}

} // namespace

JobDescription parse_job(const std::string& text) {
    YAML::Node doc;
    try {
        doc = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw JobParseError(std::string("document: ") + e.what());
    }
    if (!doc.IsMap())
        fail("document", "top level must be a map");
    for (const char* key : {"algebra", "command", "payload"})
        if (!doc[key])
            fail("document", std::string("missing top-level key '") + key + "'");

    JobDescription job;
    const YAML::Node& alg = doc["algebra"];
    if (!alg.IsMap() || !alg["odd"])
        fail("algebra", "expected a map with 'odd' (and optional 'even') name lists");
    try {
        std::vector<std::string> odd = alg["odd"].as<std::vector<std::string>>();
        std::vector<std::string> even;
        if (alg["even"])
            even = alg["even"].as<std::vector<std::string>>();
        job.algebra = AlgebraSignature(std::move(odd), std::move(even));
    } catch (const std::exception& e) {
        fail("algebra", e.what());
    }

    job.command = doc["command"].as<std::string>();
    static const std::vector<std::string> commands{
        "dual-curve",   "classify",     "cohomology",      "transform-bundle",
        "direct-image", "lift-delta",   "check-identities"};
    if (std::find(commands.begin(), commands.end(), job.command) == commands.end())
        fail("command", "unknown command '" + job.command + "'");

    const YAML::Node& payload = doc["payload"];
    if (!payload.IsMap())
        fail("payload", "must be a map");
    job.curve = parse_curve(job.algebra, payload);

    if (job.command == "cohomology") {
        if (!payload["space"])
            fail("payload", "cohomology requires 'space'");
        job.space = parse_space(payload["space"].as<std::string>(), "payload.space");
    } else if (job.command == "transform-bundle") {
        job.one_form = parse_one_form(job.algebra, payload);
        if (payload["multiplier"])
            job.multiplier =
                parse_multiplier(job.algebra, payload["multiplier"], "payload.multiplier");
    } else if (job.command == "direct-image") {
        job.one_form = parse_one_form(job.algebra, payload);
    } else if (job.command == "lift-delta") {
        job.first = parse_lift_operand(job.algebra, payload["first"], "payload.first");
        if (payload["second"])
            job.second = parse_lift_operand(job.algebra, payload["second"], "payload.second");
    }
    return job;
}

JobResult run_job(const JobDescription& job) {
    const SuperEllipticCurve& x = *job.curve;
    YAML::Emitter out;
    std::ostringstream text;
    out << YAML::BeginMap;
    out << YAML::Key << "command" << YAML::Value << job.command;
    out << YAML::Key << "status" << YAML::Value << "ok";
    out << YAML::Key << "result" << YAML::Value;

    try {
        if (job.command == "dual-curve") {
            SuperEllipticCurve d = dual_curve(x);
            out << YAML::BeginMap;
            out << YAML::Key << "modulus" << YAML::Value << d.modulus.to_string();
            out << YAML::Key << "epsilon" << YAML::Value << d.eps.to_string();
            out << YAML::Key << "delta" << YAML::Value << d.del.to_string();
            out << YAML::EndMap;
            text << "dual curve parameters:\n  modulus: " << d.modulus.to_string()
                 << "\n  epsilon: " << d.eps.to_string()
                 << "\n  delta:   " << d.del.to_string() << "\n";
        } else if (job.command == "classify") {
            CurveClass c = classify_curve(x);
            out << YAML::BeginMap;
            out << YAML::Key << "projected" << YAML::Value << c.projected;
            out << YAML::Key << "injected" << YAML::Value << c.injected;
            out << YAML::Key << "self_dual" << YAML::Value << c.self_dual;
            out << YAML::Key << "split" << YAML::Value << c.split;
            out << YAML::EndMap;
            text << "projected: " << (c.projected ? "yes" : "no")
                 << "\ninjected: " << (c.injected ? "yes" : "no")
                 << "\nself-dual: " << (c.self_dual ? "yes" : "no")
                 << "\nsplit: " << (c.split ? "yes" : "no") << "\n";
        } else if (job.command == "cohomology") {
            auto h0 = h0_structure(*job.space, x);
            auto h1 = h1_structure(*job.space, x);
            out << YAML::BeginMap;
            out << YAML::Key << "space" << YAML::Value << space_name(*job.space);
            out << YAML::Key << "h0" << YAML::Value;
            emit_module(out, h0);
            out << YAML::Key << "h1" << YAML::Value;
            emit_module(out, h1);
            out << YAML::EndMap;
            auto dims = [](const LambdaModuleDescription& d) {
                std::ostringstream os;
                os << d.dim;
                if (d.graded_dim)
                    os << " (" << d.graded_dim->first << "|" << d.graded_dim->second << ")";
                return os.str();
            };
            text << "space " << space_name(*job.space) << ":\n  dim H0 = " << dims(h0)
                 << "\n  dim H1 = " << dims(h1) << "\n";
        } else if (job.command == "transform-bundle") {
            EllipticMultiplier m =
                job.multiplier
                    ? *job.multiplier
                    : EllipticMultiplier({0, 0}, GrassmannElement::zero(x.sig),
                                         GrassmannElement::zero(x.sig));
            EllipticMultiplier r = transform_bundle(m, *job.one_form, x);
            out << YAML::BeginMap;
            out << YAML::Key << "multiplier" << YAML::Value;
            emit_multiplier(out, r);
            out << YAML::EndMap;
            text << "dual multiplier: " << multiplier_text(r) << "\n";
        } else if (job.command == "direct-image") {
            EllipticMultiplier r = direct_image_projected(*job.one_form, x);
            out << YAML::BeginMap;
            out << YAML::Key << "multiplier" << YAML::Value;
            emit_multiplier(out, r);
            out << YAML::EndMap;
            text << "direct image multiplier: " << multiplier_text(r) << "\n";
        } else if (job.command == "lift-delta") {
            auto emit_class = [&out](const DeltaCocycle& c) {
                out << YAML::Flow << YAML::BeginSeq;
                for (const auto& g : c)
                    out << g.to_string();
                out << YAML::EndSeq;
            };
            DeltaCocycle c1 = lift_to_delta(job.first->first, job.first->second, x);
            out << YAML::BeginMap;
            out << YAML::Key << "first_class" << YAML::Value;
            emit_class(c1);
            text << "first class (A, alpha, beta, B): [" << c1[0].to_string() << ", "
                 << c1[1].to_string() << ", " << c1[2].to_string() << ", "
                 << c1[3].to_string() << "]\n";
            if (job.second) {
                DeltaCocycle c2 = lift_to_delta(job.second->first, job.second->second, x);
                bool eq = delta_classes_equal(c1, c2, x);
                out << YAML::Key << "second_class" << YAML::Value;
                emit_class(c2);
                out << YAML::Key << "classes_equal" << YAML::Value << eq;
                text << "second class (A, alpha, beta, B): [" << c2[0].to_string() << ", "
                     << c2[1].to_string() << ", " << c2[2].to_string() << ", "
                     << c2[3].to_string() << "]\n"
                     << "classes equal: " << (eq ? "yes" : "no") << "\n";
            }
            out << YAML::EndMap;
        } else { // check-identities
            auto checks = identity_checks(x);
            bool all = true;
            out << YAML::BeginMap;
            out << YAML::Key << "checks" << YAML::Value << YAML::BeginSeq;
            for (const auto& c : checks) {
                all = all && c.pass;
                out << YAML::BeginMap << YAML::Key << "name" << YAML::Value << c.name
                    << YAML::Key << "pass" << YAML::Value << c.pass << YAML::EndMap;
                text << (c.pass ? "PASS  " : "FAIL  ") << c.name << "\n";
            }
            out << YAML::EndSeq;
            out << YAML::Key << "all_pass" << YAML::Value << all;
            out << YAML::EndMap;
            text << (all ? "all checks passed" : "some checks FAILED") << "\n";
        }
    } catch (const std::domain_error& e) {
        throw std::domain_error(job.command + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw std::domain_error(job.command + ": " + e.what());
    }

    out << YAML::EndMap;
    JobResult result;
    result.structured = std::string(out.c_str()) + "\n";
    result.rendered = text.str();
    return result;
}

} // namespace supercurve
