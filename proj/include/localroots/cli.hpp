#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "localroots/cartan.hpp"
#include "localroots/global.hpp"
#include "localroots/io.hpp"
#include "localroots/matrix_roots.hpp"
#include "localroots/power_bounds.hpp"

namespace localroots {

namespace cli_detail {

/// Exit codes are part of the interface: 0 = decided (either way),
/// 1 = malformed or invalid input, 2 = honestly undecided at the
/// precision that was available.
constexpr int kOk = 0;
constexpr int kBadInput = 1;
constexpr int kUndecided = 2;

inline void emit(std::ostream& out, const Json& report, bool as_json) {
    if (as_json) {
        out << json_dump(report);
        return;
    }
    out << report["op"].get<std::string>() << "\n";
    const Json& v = report["verdict"];
    for (auto it = v.begin(); it != v.end(); ++it)
        out << "  " << it.key() << ": " << it.value().dump() << "\n";
    if (!report["certificate"].is_null())
        out << "  certificate: " << report["certificate"].dump() << "\n";
}

inline Json opt_integer(const std::optional<Integer>& v) {
    return v ? integer_to_json(*v) : Json(nullptr);
}

/// Serialize a witness matrix, degrading to an explanatory string when the
/// entries cannot be faithfully written at this precision.
template <class T>
Json safe_matrix_json(const Matrix<T>& M) {
    try {
        return matrix_to_json(M);
    } catch (const insufficient_precision& e) {
        return Json{{"unserializable", e.what()}};
    }
}

template <class T>
Json blocked_to_json(const AllOrdersReport<T>& rep) {
    if (!rep.blocked) return Json(nullptr);
    return Json{{"blocked_order", integer_to_json(rep.blocked->k)},
                {"verified", rep.blocked->verified},
                {"reason", rep.blocked->reason}};
}

template <class T>
int analyze_local(const Matrix<T>& M, int precision_used, bool as_json,
                  std::ostream& out) {
    Json verdict;
    int undecided = 0;
    try {
        verdict["distal"] = is_distal(M);
    } catch (const insufficient_precision&) {
        verdict["distal"] = "unknown";
        ++undecided;
    }
    Tri uni;
    try {
        uni = detail::unipotent_from_charpoly(char_poly(M));
    } catch (const insufficient_precision&) {
        uni = Tri::unknown;
    }
    if (uni == Tri::unknown) { verdict["unipotent"] = "unknown"; ++undecided; }
    else verdict["unipotent"] = (uni == Tri::yes);
    try {
        verdict["unipotent_power_exponent"] = opt_integer(unipotent_power_exponent(M));
    } catch (const insufficient_precision&) {
        verdict["unipotent_power_exponent"] = "unknown";
        ++undecided;
    }
    try {
        verdict["order"] = opt_integer(matrix_order(M));
    } catch (const insufficient_precision&) {
        verdict["order"] = "unknown";
        ++undecided;
    }
    Json certificate;
    try {
        AllOrdersReport<T> rep = roots_all_orders(M);
        verdict["roots_all_orders"] = tri_name(rep.all_orders);
        if (rep.all_orders == Tri::unknown) ++undecided;
        if (rep.blocked) certificate = blocked_to_json(rep);
        else if (rep.direction) certificate = Json{{"direction", safe_matrix_json(*rep.direction)},
                                                   {"reason", rep.reason}};
        else certificate = Json{{"reason", rep.reason}};
    } catch (const insufficient_precision& e) {
        verdict["roots_all_orders"] = "unknown";
        certificate = Json{{"reason", std::string("undecided: ") + e.what()}};
        ++undecided;
    }
    emit(out, make_report("analyze", std::move(verdict), std::move(certificate),
                          precision_used),
         as_json);
    return undecided > 0 ? kUndecided : kOk;
}

inline int analyze_rational_global(const Matrix<Rational>& M, bool as_json,
                                   std::ostream& out) {
    Json verdict;
    auto f = char_poly(M);
    if (f[0] == 0) throw std::domain_error("analyze: matrix is singular");
    verdict["unipotent"] = detail::unipotent_from_charpoly(f) == Tri::yes;
    verdict["unipotent_power_exponent"] = opt_integer(unipotent_power_exponent(M));
    verdict["order"] = opt_integer(matrix_order(M));
    verdict["torsion_bound"] =
        integer_to_json(torsion_exponent_bound_rational(static_cast<std::int64_t>(M.size())));
    GlobalAllOrders g = global_roots_all_orders(M);
    verdict["roots_all_orders"] = g.all_orders ? "yes" : "no";
    Json certificate;
    if (g.direction)
        certificate = Json{{"direction", safe_matrix_json(*g.direction)}, {"reason", g.reason}};
    else if (g.blocked)
        certificate = Json{{"blocked_order", integer_to_json(g.blocked->k)},
                           {"verified", g.blocked->verified},
                           {"prime", g.certificate_prime},
                           {"reason", g.reason}};
    else certificate = Json{{"reason", g.reason}};
    emit(out, make_report("analyze", std::move(verdict), std::move(certificate), 0), as_json);
    return kOk;
}

template <class T>
int root_verb(const Matrix<T>& M, const Integer& k, int precision_used, bool as_json,
              std::ostream& out) {
    RootWitness<T> w = has_kth_root(M, k);
    Json verdict{{"k", integer_to_json(k)},
                 {"exists", tri_name(w.status)},
                 {"reason", w.reason}};
    Json certificate;
    if (w.root) certificate = Json{{"witness", safe_matrix_json(*w.root)}};
    emit(out, make_report("root", std::move(verdict), std::move(certificate), precision_used),
         as_json);
    return w.status == Tri::unknown ? kUndecided : kOk;
}

template <class T>
int tower_verb(const Matrix<T>& M, const Integer& q, std::int64_t depth,
               int precision_used, bool as_json, std::ostream& out) {
    std::vector<Integer> ks(static_cast<std::size_t>(depth), q);
    TowerOutcome<T> oc = build_root_tower(M, ks);
    Json verdict{{"q", integer_to_json(q)},
                 {"depth", depth},
                 {"status", tri_name(oc.status)},
                 {"stages_built", oc.stages_built},
                 {"reason", oc.reason}};
    Json certificate;
    if (oc.tower) {
        Json steps = Json::array();
        for (const auto& st : oc.tower->steps)
            steps.push_back(Json{{"k", integer_to_json(st.k)},
                                 {"root", safe_matrix_json(st.root)}});
        Tri v = Tri::unknown;
        try { v = verify_tower(*oc.tower); } catch (const insufficient_precision&) {}
        certificate = Json{{"steps", std::move(steps)}, {"verified", tri_name(v)}};
    }
    emit(out, make_report("tower", std::move(verdict), std::move(certificate), precision_used),
         as_json);
    return oc.status == Tri::unknown ? kUndecided : kOk;
}

inline std::vector<std::int64_t> parse_prime_list(const std::string& text) {
    std::vector<std::int64_t> primes;
    if (text.rfind("first", 0) == 0) {
        std::string rest = text.substr(5);
        if (!rest.empty() && rest[0] == ':') rest = rest.substr(1);
        std::size_t pos = 0;
        long n = 0;
        try { n = std::stol(rest, &pos); } catch (const std::exception&) { pos = 0; }
        if (pos != rest.size() || n < 1 || n > 1000)
            throw parse_error("prime list: expected \"firstN\" with 1 <= N <= 1000");
        for (std::int64_t p = 2; static_cast<long>(primes.size()) < n; ++p)
            if (is_prime_i64(p)) primes.push_back(p);
        return primes;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string tok = text.substr(start, comma == std::string::npos ? std::string::npos
                                                                        : comma - start);
        if (tok.empty()) throw parse_error("prime list: empty entry");
        std::size_t pos = 0;
        long p = 0;
        try { p = std::stol(tok, &pos); } catch (const std::exception&) { pos = 0; }
        if (pos != tok.size()) throw parse_error("prime list: \"" + tok + "\" is not a number");
        if (!is_prime_i64(p)) throw parse_error("prime list: " + tok + " is not prime");
        primes.push_back(p);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (primes.empty()) throw parse_error("prime list: no primes given");
    return primes;
}

inline int global_verb(const Matrix<Rational>& M, const std::vector<std::int64_t>& primes,
                       int precision, const std::string& id, bool as_json,
                       std::ostream& out) {
    GlobalReport rep = global_unipotent_power(M, primes, precision, id);
    GlobalAllOrders g = global_roots_all_orders(M, precision);
    Json per_prime = Json::array();
    for (const auto& e : rep.primes)
        per_prime.push_back(Json{{"prime", e.prime},
                                 {"distal", e.distal},
                                 {"unipotent_power_exponent", opt_integer(e.exponent)}});
    Json verdict{{"id", rep.id},
                 {"unipotent", rep.unipotent},
                 {"common_exponent", opt_integer(rep.common_exponent)},
                 {"primes", std::move(per_prime)},
                 {"roots_all_orders", g.all_orders ? "yes" : "no"},
                 {"order", opt_integer(rep.order)},
                 {"torsion_bound", integer_to_json(rep.torsion_bound)}};
    Json certificate;
    if (g.direction)
        certificate = Json{{"direction", safe_matrix_json(*g.direction)}, {"reason", g.reason}};
    else if (g.blocked)
        certificate = Json{{"blocked_order", integer_to_json(g.blocked->k)},
                           {"verified", g.blocked->verified},
                           {"prime", g.certificate_prime},
                           {"reason", g.reason}};
    else certificate = Json{{"reason", g.reason}};
    emit(out, make_report("global", std::move(verdict), std::move(certificate), precision),
         as_json);
    return kOk;
}

inline int bound_verb(std::int64_t n, std::int64_t prime, std::int64_t laurent_q,
                      bool as_json, std::ostream& out) {
    PowerBound b;
    std::string field;
    if (prime > 0) {
        b = unipotent_power_bound_padic(n, prime);
        field = "Q_" + std::to_string(prime);
    } else {
        std::int64_t q = laurent_q, p = 0;
        for (std::int64_t d = 2; d * d <= q; ++d)
            if (q % d == 0) { p = d; break; }
        if (p == 0) p = q;
        std::int64_t s = 0, pw = 1;
        while (pw < q) { pw *= p; ++s; }
        if (pw != q || !is_prime_i64(p))
            throw parse_error("--laurent expects a prime power residue field size");
        b = unipotent_power_bound_laurent(n, q, p);
        field = "F_" + std::to_string(q) + "((t))";
    }
    Json fact = Json::object();
    for (const auto& [pr, e] : b.factorization) fact[pr.str()] = e;
    Json orders = Json::array();
    for (const auto& [f, o] : b.unramified_orders)
        orders.push_back(Json{{"degree", f}, {"order", integer_to_json(o)}});
    Json verdict{{"n", n},
                 {"field", field},
                 {"value", integer_to_json(b.value)},
                 {"wild_part", integer_to_json(b.wild_part)},
                 {"tame_part", integer_to_json(b.tame_part)},
                 {"factorization", std::move(fact)},
                 {"unramified_orders", std::move(orders)}};
    emit(out, make_report("bound", std::move(verdict), Json(nullptr), 0), as_json);
    return kOk;
}

}  // namespace cli_detail

/// Entry point shared by the binary and the tests; args exclude the program
/// name.  Never throws: every failure is mapped onto the exit-code contract.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using namespace cli_detail;
    CLI::App app{"exact k-th roots of matrices over Q, Q_p and F_q((t))", "localroots"};
    app.require_subcommand(1);

    std::string file, spec_file, primes_text;
    std::int64_t prime = 0, k = 1, q = 2, depth = 1, n = 1, laurent_q = 0;
    int precision = 0;
    bool as_json = false;

    CLI::App* analyze = app.add_subcommand("analyze", "distality, unipotence and root orders");
    analyze->add_option("--prime", prime, "analyze a rational matrix inside Q_p");
    analyze->add_option("--precision", precision, "working precision in digits");
    analyze->add_option("file", file, "matrix file")->required();
    analyze->add_flag("--json", as_json, "machine-readable report");

    CLI::App* root = app.add_subcommand("root", "decide and construct one k-th root");
    root->add_option("--k", k, "root order")->required();
    root->add_option("--precision", precision, "working precision in digits");
    root->add_option("file", file, "matrix file")->required();
    root->add_flag("--json", as_json, "machine-readable report");

    CLI::App* tower = app.add_subcommand("tower", "iterated q-th roots to a given depth");
    tower->add_option("--q", q, "root order per stage")->required();
    tower->add_option("--depth", depth, "number of stages")->required();
    tower->add_option("--precision", precision, "working precision in digits");
    tower->add_option("file", file, "matrix file")->required();
    tower->add_flag("--json", as_json, "machine-readable report");

    CLI::App* density = app.add_subcommand("density", "density of k-th powers in the compact family");
    density->add_option("--spec", spec_file, "group spec file")->required();
    density->add_option("--k", k, "power exponent")->required();
    density->add_flag("--json", as_json, "machine-readable report");

    CLI::App* global = app.add_subcommand("global", "rational matrix across several completions");
    global->add_option("--primes", primes_text, "comma-separated primes or \"firstN\"")->required();
    global->add_option("--precision", precision, "working precision in digits");
    global->add_option("file", file, "matrix file")->required();
    global->add_flag("--json", as_json, "machine-readable report");

    CLI::App* bound = app.add_subcommand("bound", "uniform power/torsion exponent bounds");
    bound->add_option("--n", n, "matrix dimension")->required();
    CLI::Option* bp = bound->add_option("--prime", prime, "residue characteristic of Q_p");
    CLI::Option* bl = bound->add_option("--laurent", laurent_q, "residue field size of F_q((t))");
    bp->excludes(bl);
    bound->add_flag("--json", as_json, "machine-readable report");

    std::vector<const char*> argv;
    argv.push_back("localroots");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kBadInput;
    }

    try {
        if (analyze->parsed()) {
            int file_precision = precision;
            AnyMatrix M = load_matrix(file, file_precision);
            if (std::holds_alternative<Matrix<Rational>>(M)) {
                const auto& MR = std::get<Matrix<Rational>>(M);
                if (prime == 0) return analyze_rational_global(MR, as_json, out);
                if (!is_prime_i64(prime)) throw parse_error("--prime must be prime");
                int eff = precision > 0 ? precision : 64;
                PadicProfile prof{prime, eff};
                return analyze_local(embed_matrix(MR, prof), eff, as_json, out);
            }
            if (std::holds_alternative<Matrix<PadicScalar>>(M)) {
                const auto& MP = std::get<Matrix<PadicScalar>>(M);
                if (prime != 0 && prime != MP.proto().profile().p)
                    throw parse_error("--prime disagrees with the matrix field");
                return analyze_local(MP, MP.proto().profile().precision, as_json, out);
            }
            const auto& ML = std::get<Matrix<LaurentScalar>>(M);
            if (prime != 0 && prime != ML.proto().field().p())
                throw parse_error("--prime disagrees with the matrix characteristic");
            return analyze_local(ML, ML.proto().profile().precision, as_json, out);
        }
        if (root->parsed()) {
            if (k < 1) throw parse_error("--k must be a positive integer");
            AnyMatrix M = load_matrix(file, precision);
            return std::visit(
                [&](const auto& Mt) {
                    int prec_used = 0;
                    using S = std::decay_t<decltype(Mt.at(0, 0))>;
                    if constexpr (!std::is_same_v<S, Rational>)
                        prec_used = Mt.proto().profile().precision;
                    return root_verb(Mt, Integer(k), prec_used, as_json, out);
                },
                M);
        }
        if (tower->parsed()) {
            if (q < 1) throw parse_error("--q must be a positive integer");
            if (depth < 0) throw parse_error("--depth must be nonnegative");
            AnyMatrix M = load_matrix(file, precision);
            return std::visit(
                [&](const auto& Mt) {
                    int prec_used = 0;
                    using S = std::decay_t<decltype(Mt.at(0, 0))>;
                    if constexpr (!std::is_same_v<S, Rational>)
                        prec_used = Mt.proto().profile().precision;
                    return tower_verb(Mt, Integer(q), depth, prec_used, as_json, out);
                },
                M);
        }
        if (density->parsed()) {
            if (k < 1) throw parse_error("--k must be a positive integer");
            GroupSpec spec = parse_group_spec(load_json(spec_file));
            Json rep = density_report_json(spec, k);
            if (as_json) out << json_dump(rep);
            else {
                out << "density\n  k: " << k << "\n  dense: "
                    << (rep["dense"].get<bool>() ? "true" : "false")
                    << "\n  classes: " << rep["classes"].dump()
                    << "\n  oracle_agrees: "
                    << (rep["oracle_agrees"].get<bool>() ? "true" : "false") << "\n";
            }
            return kOk;
        }
        if (global->parsed()) {
            auto primes = parse_prime_list(primes_text);
            AnyMatrix M = load_matrix(file, 0);
            if (!std::holds_alternative<Matrix<Rational>>(M))
                throw parse_error("global analysis requires a rational matrix");
            int eff = precision > 0 ? precision : 64;
            return global_verb(std::get<Matrix<Rational>>(M), primes, eff, file, as_json, out);
        }
        // bound
        if (n < 1) throw parse_error("--n must be a positive integer");
        if ((prime > 0) == (laurent_q > 0))
            throw parse_error("bound needs exactly one of --prime or --laurent");
        if (prime > 0 && !is_prime_i64(prime)) throw parse_error("--prime must be prime");
        return bound_verb(n, prime, laurent_q, as_json, out);
    } catch (const parse_error& e) {
        err << "input error: " << e.what() << "\n";
        return kBadInput;
    } catch (const insufficient_precision& e) {
        err << "undecided: " << e.what() << "\n";
        return kUndecided;
    } catch (const std::invalid_argument& e) {
        err << "input error: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::domain_error& e) {
        err << "input error: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kBadInput;
    }
}

}  // namespace localroots
