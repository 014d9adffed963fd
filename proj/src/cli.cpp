#include "formclass/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "formclass/arithmetic_apps.hpp"
#include "formclass/classgroups.hpp"
#include "formclass/exact_algebra.hpp"
#include "formclass/modfuncs.hpp"
#include "formclass/numerics.hpp"
#include "formclass/orders.hpp"

namespace formclass::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using classgroups::ClassGroup;
using classgroups::LevelStructure;
using exact_algebra::IntPoly;
using numerics::PrecCtx;

constexpr int kFormatVersion = 1;
constexpr long kMaxSafeInt = 9007199254740992L;  // 2^53

json mpz_to_json(const mpz_class& v) {
    if (abs(v) < kMaxSafeInt) return json(v.get_si());
    return json(v.get_str());
}

json form_to_json(const quadforms::Form& f) {
    return json::array({mpz_to_json(f.a), mpz_to_json(f.b), mpz_to_json(f.c)});
}

json poly_to_json(const std::vector<mpz_class>& coeffs, long digits_used,
                  const std::string& residual) {
    json coeff_list = json::array();
    for (const auto& c : coeffs) coeff_list.push_back(c.get_str());
    return json{{"degree", coeffs.empty() ? 0 : static_cast<long>(coeffs.size()) - 1},
                {"coefficients", coeff_list},
                {"digits_used", digits_used},
                {"residual", residual}};
}

json factors_to_json(const exact_algebra::Factorization& f) {
    json out = json::array();
    for (const auto& [p, e] : f.factors) out.push_back(json::array({p.get_str(), e}));
    return out;
}

struct Common {
    long digits = 200;
    long guard = 20;
    std::string cache_dir = ".formclass-cache";
    std::string format = "json";
    double factor_budget = 60.0;

    PrecCtx ctx() const { return PrecCtx(digits, guard); }
};

std::vector<long> parse_subgroup(const std::string& text, long n) {
    if (text == "trivial") return {1};
    if (text == "full") return LevelStructure::full(n).residues;
    std::vector<long> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stol(tok));
    }
    if (out.empty()) throw UsageError("subgroup list is empty");
    return out;
}

std::string subgroup_hash(const std::vector<long>& g) {
    // FNV-1a over the comma-joined residues; keeps cache names short
    unsigned long long h = 1469598103934665603ull;
    for (long v : g) {
        std::string s = std::to_string(v) + ",";
        for (char c : s) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", h);
    return buf;
}

void write_atomic(const fs::path& path, const std::string& data) {
    fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        f << data;
    }
    fs::rename(tmp, path);
}

void emit(const json& doc, const std::string& format, std::ostream& out,
          const std::string& text_summary) {
    if (format == "text")
        out << text_summary << "\n";
    else
        out << doc.dump(2) << "\n";
}

int cmd_classgroup(const Common& common, long disc, long level_n, const std::string& subgroup,
                   bool with_table, std::ostream& out) {
    LevelStructure level(level_n, parse_subgroup(subgroup, level_n));
    auto ord = orders::order_from_disc(mpz_class(disc));
    ClassGroup cg = classgroups::enumerate_classes(ord, level);
    if (with_table) classgroups::build_table(cg);

    json doc;
    doc["disc"] = disc;
    doc["N"] = level_n;
    doc["G"] = level.residues;
    json classes = json::array();
    for (const auto& f : cg.reps) classes.push_back(form_to_json(f));
    doc["classes"] = classes;
    if (cg.table) doc["table"] = *cg.table;

    std::ostringstream text;
    text << cg.size() << " classes of discriminant " << disc << " at level " << level_n;
    emit(doc, common.format, out, text.str());
    return 0;
}

struct MinpolyResult {
    json doc;
    bool from_cache = false;
};

MinpolyResult minpoly_pipeline(const Common& common, const mpz_class& disc, long level_n,
                               const std::vector<long>& g_res) {
    LevelStructure level(level_n, g_res);
    auto ord = orders::order_from_disc(disc);

    fs::path cache_file;
    if (!common.cache_dir.empty()) {
        std::string name = "minpoly_D" + disc.get_str() + "_N" + std::to_string(level_n) + "_G" +
                           subgroup_hash(level.residues) + ".json";
        cache_file = fs::path(common.cache_dir) / name;
        if (fs::exists(cache_file)) {
            std::ifstream f(cache_file);
            json cached = json::parse(f, nullptr, false);
            if (!cached.is_discarded() && cached.value("format_version", -1) == kFormatVersion &&
                cached.value("digits", -1l) == common.digits) {
                // re-verify the stored residual before trusting the entry
                std::vector<mpz_class> coeffs;
                for (const auto& c : cached["polynomial"]["coefficients"])
                    coeffs.emplace_back(c.get<std::string>());
                PrecCtx ctx = common.ctx();
                long bits = ctx.scale_bits();
                numerics::BigComplex alpha(
                    numerics::BigReal::from_decimal(cached["alpha"]["re"].get<std::string>(), bits),
                    numerics::BigReal::from_decimal(cached["alpha"]["im"].get<std::string>(), bits));
                auto rel = modfuncs::poly_eval_check(IntPoly(coeffs), alpha, ctx);
                if (rel.abs_less_pow10(-(common.digits / 2))) {
                    return {cached, true};
                }
            }
        }
    }

    ClassGroup cg = classgroups::enumerate_classes(ord, level);
    auto spec = modfuncs::invariant_for(level);
    auto av = modfuncs::minpoly_over_Q(ord, level, spec, cg, common.ctx());
    IntPoly poly(av.minpoly);
    mpz_class pdisc = exact_algebra::poly_disc(poly);
    auto fac = exact_algebra::factor_int(pdisc, common.factor_budget);

    json doc;
    doc["format_version"] = kFormatVersion;
    doc["digits"] = common.digits;
    doc["disc"] = mpz_to_json(disc);
    doc["N"] = level_n;
    doc["G"] = level.residues;
    json classes = json::array();
    for (const auto& f : cg.reps) classes.push_back(form_to_json(f));
    doc["classes"] = classes;
    doc["polynomial"] = poly_to_json(av.minpoly, av.digits_used, av.residual.to_sci());
    doc["poly_disc"] = pdisc.get_str();
    doc["poly_disc_factors"] = factors_to_json(fac);
    doc["poly_disc_factored_completely"] = fac.complete;
    const long frac = common.digits;
    doc["alpha"] = json{{"re", av.conjugates[0].re.to_decimal(frac)},
                        {"im", av.conjugates[0].im.to_decimal(frac)}};

    if (!cache_file.empty()) write_atomic(cache_file, doc.dump(2) + "\n");
    return {doc, false};
}

int cmd_minpoly(const Common& common, const std::optional<long>& nval,
                const std::optional<long>& disc_in, long level_n, const std::string& subgroup,
                std::ostream& out) {
    if (nval.has_value() == disc_in.has_value())
        throw UsageError("give exactly one of --n and --disc");
    mpz_class disc = nval ? mpz_class(-4 * *nval) : mpz_class(*disc_in);
    if (disc == -3 || disc == -4) throw UsageError("discriminants -3 and -4 are out of scope");
    if (level_n < 2) throw UsageError("level must be at least 2");
    auto res = minpoly_pipeline(common, disc, level_n, parse_subgroup(subgroup, level_n));

    std::ostringstream text;
    text << "degree " << res.doc["polynomial"]["degree"] << " polynomial for disc "
         << disc.get_str() << (res.from_cache ? " (cached)" : "");
    emit(res.doc, common.format, out, text.str());
    return 0;
}

int cmd_primes(const Common& common, long nval, long level_n, const std::string& subgroup,
               long bound, std::ostream& out) {
    auto rep = arithmetic_apps::equivalence_harness(mpz_class(nval), level_n,
                                                    parse_subgroup(subgroup, level_n),
                                                    mpz_class(bound), common.ctx());
    json doc;
    doc["n"] = nval;
    doc["N"] = level_n;
    doc["G"] = rep.subgroup;
    doc["bound"] = bound;
    doc["agree"] = rep.agree;
    json ex = json::array();
    for (const auto& p : rep.excluded) ex.push_back(mpz_to_json(p));
    doc["excluded"] = ex;
    json dis = json::array();
    for (const auto& p : rep.disagreements) dis.push_back(mpz_to_json(p));
    doc["disagreements"] = dis;

    std::ostringstream text;
    text << rep.agree << " primes agree, " << rep.disagreements.size() << " disagree below "
         << bound;
    emit(doc, common.format, out, text.str());
    return rep.disagreements.empty() ? 0 : 3;
}

int cmd_kronecker(const Common& common, long disc, long level_n, const std::string& subgroup,
                  long prime, std::ostream& out) {
    auto rep = arithmetic_apps::verify_kronecker(mpz_class(disc), level_n,
                                                 parse_subgroup(subgroup, level_n),
                                                 mpz_class(prime), common.ctx());
    json doc;
    doc["disc"] = disc;
    doc["N"] = level_n;
    doc["G"] = rep.subgroup;
    doc["p"] = prime;
    doc["s"] = mpz_to_json(rep.s);
    const long frac = 50;
    doc["A"] = json{{"re", rep.value_at_omega.re.to_decimal(frac)},
                    {"im", rep.value_at_omega.im.to_decimal(frac)}};
    doc["B"] = json{{"re", rep.value_at_omega_over_p.re.to_decimal(frac)},
                    {"im", rep.value_at_omega_over_p.im.to_decimal(frac)}};
    doc["charpoly"] = poly_to_json(rep.charpoly.coeffs, rep.digits_used,
                                   rep.max_residual.to_sci());
    doc["verdict"] = rep.verdict;

    std::ostringstream text;
    text << "congruence at p = " << prime << ": " << (rep.verdict ? "holds" : "fails");
    emit(doc, common.format, out, text.str());
    return rep.verdict ? 0 : 3;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"form class groups, class invariants and prime criteria"};
    app.require_subcommand(1);

    Common common;
    if (const char* env = std::getenv("FORMCLASS_DIGITS")) common.digits = std::atol(env);
    if (const char* env = std::getenv("FORMCLASS_CACHE")) common.cache_dir = env;
    app.add_option("--digits", common.digits, "decimal working precision");
    app.add_option("--guard", common.guard, "guard digits");
    app.add_option("--cache-dir", common.cache_dir, "directory for cached results");
    app.add_option("--format", common.format, "output format: json or text")
        ->check(CLI::IsMember({"json", "text"}));
    app.add_option("--factor-budget", common.factor_budget, "factorization budget in seconds");

    long disc = 0, level_n = 0, nval = 0, bound = 0, prime = 0;
    std::string subgroup;
    bool with_table = false;

    auto* c_cg = app.add_subcommand("classgroup", "enumerate level-N form classes");
    c_cg->fallthrough();
    c_cg->add_option("--disc", disc, "order discriminant (negative)")->required();
    c_cg->add_option("--level", level_n, "level N")->required();
    c_cg->add_option("--subgroup", subgroup, "trivial | full | comma list")->required();
    c_cg->add_flag("--table", with_table, "emit the composition table");

    auto* c_mp = app.add_subcommand("minpoly", "synthesize the minimal polynomial over Q");
    c_mp->fallthrough();
    std::optional<long> mp_n, mp_disc;
    c_mp->add_option("--n", mp_n, "positive n for disc -4n");
    c_mp->add_option("--disc", mp_disc, "order discriminant (negative)");
    c_mp->add_option("--level", level_n, "level N")->required();
    c_mp->add_option("--subgroup", subgroup, "trivial | full | comma list")->required();

    auto* c_pr = app.add_subcommand("primes", "x^2 + n y^2 representation harness");
    c_pr->fallthrough();
    c_pr->add_option("--n", nval, "positive n")->required();
    c_pr->add_option("--level", level_n, "level N")->required();
    c_pr->add_option("--subgroup", subgroup, "trivial | full | comma list")->required();
    c_pr->add_option("--bound", bound, "upper bound on scanned primes")->required();

    auto* c_kr = app.add_subcommand("kronecker", "verify the congruence at a split prime");
    c_kr->fallthrough();
    c_kr->add_option("--disc", disc, "order discriminant (negative)")->required();
    c_kr->add_option("--level", level_n, "level N")->required();
    c_kr->add_option("--subgroup", subgroup, "trivial | full | comma list")->required();
    c_kr->add_option("--prime", prime, "prime to test")->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (common.digits < 50 || common.digits > numerics::kDigitsCap) {
            err << "error: digits must lie in [50, " << numerics::kDigitsCap << "]\n";
            return 1;
        }
        if (c_cg->parsed()) return cmd_classgroup(common, disc, level_n, subgroup, with_table, out);
        if (c_mp->parsed()) return cmd_minpoly(common, mp_n, mp_disc, level_n, subgroup, out);
        if (c_pr->parsed()) return cmd_primes(common, nval, level_n, subgroup, bound, out);
        if (c_kr->parsed()) return cmd_kronecker(common, disc, level_n, subgroup, prime, out);
        err << "error: no subcommand\n";
        return 1;
    } catch (const ConditionViolated& e) {
        err << "error: condition (" << ConditionViolated::roman(e.which) << ") violated\n";
        return 1;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const PrecisionExhausted& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const AmbiguousClass& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const NotPrimitive& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, out, err);
}

}  // namespace formclass::cli
