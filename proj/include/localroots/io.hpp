#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "localroots/cartan.hpp"
#include "localroots/errors.hpp"
#include "localroots/fq.hpp"
#include "localroots/laurent.hpp"
#include "localroots/matrix.hpp"
#include "localroots/numbers.hpp"
#include "localroots/padic.hpp"

namespace localroots {

using Json = nlohmann::ordered_json;

/// Machine-readable output is key-ordered and indented identically on every
/// run, so byte comparison is a valid equality test for reports.
inline std::string json_dump(const Json& j) { return j.dump(2) + "\n"; }

inline const char* tri_name(Tri t) {
    switch (t) {
    case Tri::yes: return "yes";
    case Tri::no: return "no";
    default: return "unknown";
    }
}

inline std::string rational_to_string(const Rational& r) {
    Integer num = rat_num(r), den = rat_den(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

inline Rational rational_from_string(const std::string& s) {
    auto bad = [&] { throw parse_error("not a rational literal: \"" + s + "\""); };
    std::string::size_type slash = s.find('/');
    std::string ns = (slash == std::string::npos) ? s : s.substr(0, slash);
    std::string ds = (slash == std::string::npos) ? "1" : s.substr(slash + 1);
    auto digits_ok = [&](const std::string& t, bool sign) {
        std::size_t i = (sign && !t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
        if (i >= t.size()) return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    };
    if (!digits_ok(ns, true) || !digits_ok(ds, false)) bad();
    Integer num(ns), den(ds);
    if (den == 0) bad();
    return Rational(num) / Rational(den);
}

/// Integers that fit a 64-bit word stay JSON numbers; larger ones are
/// decimal strings, so nothing silently loses digits.
inline Json integer_to_json(const Integer& n) {
    static const Integer lo = std::numeric_limits<std::int64_t>::min();
    static const Integer hi = std::numeric_limits<std::int64_t>::max();
    if (n >= lo && n <= hi) return Json(static_cast<std::int64_t>(n));
    return Json(n.str());
}

inline Integer integer_from_json(const Json& j) {
    if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
    if (j.is_string()) {
        Rational r = rational_from_string(j.get<std::string>());
        if (rat_den(r) != 1) throw parse_error("expected an integer, got a fraction");
        return rat_num(r);
    }
    throw parse_error("expected an integer (number or decimal string)");
}

// -- field profiles ---------------------------------------------------------

inline Json field_to_json_rational() { return Json{{"kind", "rational"}}; }

inline Json field_to_json(const PadicProfile& prof) {
    return Json{{"kind", "padic"}, {"p", prof.p}, {"precision", prof.precision}};
}

inline Json field_to_json(const LaurentProfile& prof) {
    return Json{{"kind", "laurent"},
                {"p", prof.field.p()},
                {"s", prof.field.s()},
                {"modulus", prof.field.modulus()},
                {"precision", prof.precision}};
}

namespace detail {

inline const Json& member(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw parse_error(std::string("missing field \"") + key + "\"");
    return *it;
}

inline std::int64_t int_member(const Json& j, const char* key) {
    const Json& v = member(j, key);
    if (!v.is_number_integer()) throw parse_error(std::string("field \"") + key +
                                                  "\" must be an integer");
    return v.get<std::int64_t>();
}

}  // namespace detail

inline PadicProfile parse_padic_profile(const Json& j) {
    std::int64_t p = detail::int_member(j, "p");
    std::int64_t prec = detail::int_member(j, "precision");
    if (prec < 1 || prec > (1 << 20)) throw parse_error("precision out of range");
    try {
        return PadicProfile{p, static_cast<int>(prec)};
    } catch (const std::exception& e) {
        throw parse_error(std::string("bad p-adic profile: ") + e.what());
    }
}

inline LaurentProfile parse_laurent_profile(const Json& j) {
    std::int64_t p = detail::int_member(j, "p");
    std::int64_t s = detail::int_member(j, "s");
    std::int64_t prec = detail::int_member(j, "precision");
    if (prec < 1 || prec > (1 << 20)) throw parse_error("precision out of range");
    const Json& mj = detail::member(j, "modulus");
    if (!mj.is_array()) throw parse_error("field \"modulus\" must be an array");
    std::vector<std::int64_t> mod;
    for (const auto& c : mj) {
        if (!c.is_number_integer()) throw parse_error("modulus coefficients must be integers");
        mod.push_back(c.get<std::int64_t>());
    }
    try {
        return LaurentProfile{Fq(p, s, std::move(mod)), static_cast<int>(prec)};
    } catch (const std::exception& e) {
        throw parse_error(std::string("bad Laurent profile: ") + e.what());
    }
}

// -- scalars ----------------------------------------------------------------

/// Standalone window form: {"p", "precision", "valuation", "unit_digits"}.
/// Exact values are flattened to a full-width window here; inside matrix
/// files they keep their exact "a/b" form instead.
inline Json scalar_to_json(const PadicScalar& x) {
    const PadicProfile& prof = x.profile();
    Json j{{"p", prof.p}, {"precision", x.known_digits() > 0 ? x.known_digits()
                                                             : prof.precision}};
    if (x.is_exact_zero()) {
        j["valuation"] = "inf";
        return j;
    }
    if (x.state() == PadicScalar::State::pseudo_zero)
        throw insufficient_precision(
            "serialize: value is indistinguishable from zero; no faithful digits to write");
    j["valuation"] = x.valuation();
    j["unit_digits"] = x.unit_digits(x.known_digits()).str();
    return j;
}

inline PadicScalar parse_padic_scalar(const Json& j, const PadicProfile& prof) {
    if (j.is_string()) return PadicScalar::from_rational(rational_from_string(j.get<std::string>()), prof);
    if (!j.is_object()) throw parse_error("p-adic scalar must be an object or \"a/b\" string");
    if (j.contains("p") && detail::int_member(j, "p") != prof.p)
        throw parse_error("scalar p disagrees with the ambient field");
    const Json& v = detail::member(j, "valuation");
    if (v.is_string()) {
        if (v.get<std::string>() != "inf") throw parse_error("valuation must be an integer or \"inf\"");
        return PadicScalar::zero(prof);
    }
    if (!v.is_number_integer()) throw parse_error("valuation must be an integer or \"inf\"");
    Integer u = integer_from_json(detail::member(j, "unit_digits"));
    std::int64_t digits = prof.precision;
    if (j.contains("digits")) digits = detail::int_member(j, "digits");
    else if (j.contains("precision"))
        digits = std::min<std::int64_t>(detail::int_member(j, "precision"), prof.precision);
    if (digits < 1 || digits > prof.precision) throw parse_error("digits out of range");
    try {
        return PadicScalar::from_digits(prof, v.get<std::int64_t>(), u,
                                        static_cast<int>(digits));
    } catch (const std::exception& e) {
        throw parse_error(std::string("bad p-adic scalar: ") + e.what());
    }
}

inline Json scalar_to_json(const LaurentScalar& x) {
    const LaurentProfile& prof = x.profile();
    Json j = field_to_json(prof);
    j.erase("kind");
    if (x.is_exact_zero()) {
        j["valuation"] = "inf";
        j["coeffs"] = Json::array();
        j["exact"] = true;
        return j;
    }
    if (x.state() == LaurentScalar::State::pseudo_zero)
        throw insufficient_precision(
            "serialize: value is indistinguishable from zero; no faithful digits to write");
    if (x.is_exact()) {
        auto [v, coeffs] = x.exact_coeffs();
        j["valuation"] = v;
        j["coeffs"] = coeffs;
        j["exact"] = true;
        return j;
    }
    auto [v, coeffs, width] = x.to_window();
    coeffs.resize(static_cast<std::size_t>(width), prof.field.zero());
    j["valuation"] = v;
    j["coeffs"] = coeffs;
    return j;
}

inline LaurentScalar parse_laurent_scalar(const Json& j, const LaurentProfile& prof) {
    if (j.is_string()) {
        Rational r = rational_from_string(j.get<std::string>());
        Integer num = rat_num(r), den = rat_den(r);
        if (den % prof.field.p() == 0)
            throw parse_error("rational entry has characteristic in the denominator");
        std::int64_t ni = static_cast<std::int64_t>(num % prof.field.p());
        std::int64_t di = static_cast<std::int64_t>(den % prof.field.p());
        Fq::Elem e = prof.field.mul(prof.field.from_int(ni),
                                    prof.field.inv(prof.field.from_int(di)));
        return LaurentScalar::from_constant(e, prof);
    }
    if (!j.is_object()) throw parse_error("Laurent scalar must be an object");
    const Json& v = detail::member(j, "valuation");
    bool exact = j.contains("exact") && j["exact"].is_boolean() && j["exact"].get<bool>();
    if (v.is_string()) {
        if (v.get<std::string>() != "inf") throw parse_error("valuation must be an integer or \"inf\"");
        if (!exact) throw parse_error("only exact zero may have infinite valuation");
        return LaurentScalar::zero(prof);
    }
    if (!v.is_number_integer()) throw parse_error("valuation must be an integer or \"inf\"");
    const Json& cj = detail::member(j, "coeffs");
    if (!cj.is_array()) throw parse_error("field \"coeffs\" must be an array");
    std::vector<Fq::Elem> coeffs;
    for (const auto& c : cj) {
        if (!c.is_array()) throw parse_error("each coefficient must be an array of integers");
        std::vector<std::int64_t> raw;
        for (const auto& x : c) {
            if (!x.is_number_integer()) throw parse_error("coefficient entries must be integers");
            raw.push_back(x.get<std::int64_t>());
        }
        coeffs.push_back(prof.field.from_coeffs(raw));
    }
    try {
        if (exact) return LaurentScalar::from_polynomial(prof, v.get<std::int64_t>(), coeffs);
        return LaurentScalar::from_window(prof, v.get<std::int64_t>(), coeffs);
    } catch (const std::exception& e) {
        throw parse_error(std::string("bad Laurent scalar: ") + e.what());
    }
}

// -- matrices ---------------------------------------------------------------

using AnyMatrix = std::variant<Matrix<Rational>, Matrix<PadicScalar>, Matrix<LaurentScalar>>;

inline Json matrix_to_json(const Matrix<Rational>& M) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < M.size(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < M.size(); ++j)
            row.push_back(rational_to_string(M.at(i, j)));
        rows.push_back(std::move(row));
    }
    return Json{{"field", field_to_json_rational()}, {"n", M.size()}, {"entries", rows}};
}

inline Json matrix_to_json(const Matrix<PadicScalar>& M) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < M.size(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < M.size(); ++j) {
            const PadicScalar& x = M.at(i, j);
            if (x.is_exact())
                row.push_back(rational_to_string(x.exact_value()));
            else {
                Json e = scalar_to_json(x);
                e.erase("p");
                e.erase("precision");
                if (x.state() == PadicScalar::State::window)
                    e["digits"] = x.known_digits();
                row.push_back(std::move(e));
            }
        }
        rows.push_back(std::move(row));
    }
    return Json{{"field", field_to_json(M.proto().profile())},
                {"n", M.size()},
                {"entries", rows}};
}

inline Json matrix_to_json(const Matrix<LaurentScalar>& M) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < M.size(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < M.size(); ++j) {
            Json e = scalar_to_json(M.at(i, j));
            e.erase("p");
            e.erase("s");
            e.erase("modulus");
            e.erase("precision");
            row.push_back(std::move(e));
        }
        rows.push_back(std::move(row));
    }
    return Json{{"field", field_to_json(M.proto().profile())},
                {"n", M.size()},
                {"entries", rows}};
}

inline Json matrix_to_json(const AnyMatrix& M) {
    return std::visit([](const auto& m) { return matrix_to_json(m); }, M);
}

namespace detail {

template <class T, class ParseEntry>
Matrix<T> parse_matrix_entries(const Json& j, const T& fill, ParseEntry parse_entry) {
    std::int64_t n = int_member(j, "n");
    if (n < 1 || n > 64) throw parse_error("matrix dimension out of range");
    const Json& rows = member(j, "entries");
    if (!rows.is_array() || static_cast<std::int64_t>(rows.size()) != n)
        throw parse_error("entries must be an n-row array");
    Matrix<T> M(static_cast<std::size_t>(n), fill);
    for (std::int64_t i = 0; i < n; ++i) {
        const Json& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<std::int64_t>(row.size()) != n)
            throw parse_error("each row must have n entries");
        for (std::int64_t k = 0; k < n; ++k)
            M.at(static_cast<std::size_t>(i), static_cast<std::size_t>(k)) =
                parse_entry(row[static_cast<std::size_t>(k)]);
    }
    return M;
}

}  // namespace detail

/// Override hook: precision > 0 replaces the profile precision from the file.
inline AnyMatrix parse_matrix(const Json& j, int precision_override = 0) {
    if (!j.is_object()) throw parse_error("matrix file must be a JSON object");
    const Json& fj = detail::member(j, "field");
    std::string kind;
    if (fj.is_string()) kind = fj.get<std::string>();
    else if (fj.is_object()) {
        const Json& kj = detail::member(fj, "kind");
        if (!kj.is_string()) throw parse_error("field kind must be a string");
        kind = kj.get<std::string>();
    } else throw parse_error("field must be an object or string");
    if (kind == "rational")
        return detail::parse_matrix_entries<Rational>(j, Rational(0), [](const Json& e) {
            if (!e.is_string()) throw parse_error("rational entries must be \"a/b\" strings");
            return rational_from_string(e.get<std::string>());
        });
    if (kind == "padic") {
        PadicProfile prof = parse_padic_profile(fj);
        if (precision_override > 0) prof.precision = precision_override;
        return detail::parse_matrix_entries<PadicScalar>(
            j, PadicScalar::zero(prof),
            [&](const Json& e) { return parse_padic_scalar(e, prof); });
    }
    if (kind == "laurent") {
        LaurentProfile prof = parse_laurent_profile(fj);
        if (precision_override > 0) prof.precision = precision_override;
        return detail::parse_matrix_entries<LaurentScalar>(
            j, LaurentScalar::zero(prof),
            [&](const Json& e) { return parse_laurent_scalar(e, prof); });
    }
    throw parse_error("unknown field kind \"" + kind + "\"");
}

// -- group specs and density reports ----------------------------------------

inline Json group_spec_to_json(const GroupSpec& spec) {
    return Json{{"n", spec.n},
                {"gamma", Json{{"angle", rational_to_string(spec.gamma.angle)},
                               {"component", spec.gamma.component}}}};
}

inline GroupSpec parse_group_spec(const Json& j) {
    if (!j.is_object()) throw parse_error("group spec must be a JSON object");
    GroupSpec spec;
    spec.n = detail::int_member(j, "n");
    const Json& gj = detail::member(j, "gamma");
    if (!gj.is_object()) throw parse_error("gamma must be an object");
    const Json& aj = detail::member(gj, "angle");
    if (!aj.is_string()) throw parse_error("gamma angle must be an \"a/b\" string");
    spec.gamma.angle = rational_from_string(aj.get<std::string>());
    spec.gamma.component = detail::int_member(gj, "component");
    validate(spec);
    return spec;
}

inline Json cartan_class_to_json(const CartanClass& c) {
    if (c.kind == CartanClass::Kind::torus) return Json{{"kind", "torus"}};
    return Json{{"kind", "cyclic"},
                {"order", integer_to_json(c.order)},
                {"representative",
                 Json{{"angle", rational_to_string(c.representative.angle)},
                      {"component", c.representative.component}}}};
}

inline Json density_report_json(const GroupSpec& spec, std::int64_t k) {
    Json classes = Json::array();
    for (const auto& c : cartan_classes(spec)) classes.push_back(cartan_class_to_json(c));
    bool dense = is_power_dense(spec, k);
    bool oracle = density_gcd_oracle(spec, k);
    return Json{{"op", "density"},
                {"classes", std::move(classes)},
                {"k", k},
                {"dense", dense},
                {"oracle_agrees", dense == oracle}};
}

// -- report envelope and file helpers ---------------------------------------

inline Json make_report(const std::string& op, Json verdict, Json certificate,
                        int precision_used) {
    return Json{{"op", op},
                {"verdict", std::move(verdict)},
                {"certificate", std::move(certificate)},
                {"precision_used", precision_used}};
}

inline Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open \"" + path + "\"");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error("invalid JSON in \"" + path + "\": " + e.what());
    }
}

inline AnyMatrix load_matrix(const std::string& path, int precision_override = 0) {
    return parse_matrix(load_json(path), precision_override);
}

}  // namespace localroots
