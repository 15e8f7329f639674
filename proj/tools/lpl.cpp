// lpl: power means of |L'/L(1+it0, chi)| over Dirichlet characters mod q.
//
// Subcommands: characters, lvalues, moments, dist, verify.  Every command
// emits a machine-readable table (CSV with a one-line JSON metadata header,
// or plain JSON) either to --out or to stdout.  Progress goes to stderr;
// stdout carries nothing but the table.
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure (partial output
// is still written where it exists).

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lpl/characters.hpp"
#include "lpl/distribution.hpp"
#include "lpl/io.hpp"
#include "lpl/lfun.hpp"
#include "lpl/moments.hpp"
#include "lpl/verify.hpp"

namespace {

using lpl::format_float;
using lpl::ordered_json;

struct sink {
    std::optional<std::string> path;

    void write(const lpl::output_table& table, const std::string& format) const {
        if (path) {
            std::ofstream os(*path, std::ios::binary);
            if (!os) throw std::invalid_argument("cannot open output file: " + *path);
            lpl::write_table(os, table, format);
            std::cerr << "wrote " << *path << "\n";
        } else {
            lpl::write_table(std::cout, table, format);
        }
    }
};

ordered_json base_meta(const std::string& command) {
    ordered_json m;
    m["tool"] = "lpl";
    m["version"] = lpl::version_string;
    m["command"] = command;
    return m;
}

std::string exponents_str(const std::vector<lpl::uint32_t>& e) {
    std::string s;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(e[i]);
    }
    return s.empty() ? "-" : s;
}

int cmd_characters(lpl::uint64_t q, const std::string& format, const sink& out) {
    const lpl::character_group group(q);
    lpl::output_table t;
    t.meta = base_meta("characters");
    t.meta["config"] = {{"q", q}};
    ordered_json comps = ordered_json::array();
    for (const auto& c : group.components())
        comps.push_back({{"prime_power", c.prime_power},
                         {"generators", c.generators},
                         {"orders", c.orders}});
    t.meta["components"] = comps;
    t.meta["indexing"] =
        "index = lexicographic rank of the exponent vector against the listed "
        "generator orders (first generator most significant); index 0 is principal";
    t.meta["phi"] = group.phi();

    // sample columns: chi at the first few units mod q
    std::vector<lpl::uint64_t> sample_units;
    for (lpl::uint64_t a = 1; a < q && sample_units.size() < 6; ++a)
        if (group.is_unit(static_cast<lpl::int64_t>(a))) sample_units.push_back(a);

    t.columns = {"index", "exponents", "conjugate_index"};
    for (lpl::uint64_t a : sample_units) t.columns.push_back("chi(" + std::to_string(a) + ")");

    for (std::size_t i = 0; i < group.size(); ++i) {
        const auto chi = group.character_at(i);
        std::vector<std::string> row{std::to_string(i), exponents_str(chi.exponents()),
                                     std::to_string(chi.conjugate().index())};
        for (lpl::uint64_t a : sample_units) {
            const auto v = chi.evaluate(static_cast<lpl::int64_t>(a));
            row.push_back(v.zero ? "0"
                                 : "e(" + std::to_string(v.root.num) + "/" +
                                       std::to_string(v.root.den) + ")");
        }
        t.rows.push_back(std::move(row));
    }
    out.write(t, format);
    return 0;
}

int cmd_lvalues(lpl::uint64_t q, double t0, double eps, const std::string& format,
                const sink& out) {
    lpl::eval_params params;
    params.target_eps = eps;
    const lpl::character_group group(q);
    const lpl::l_sweep sweep(group, {1.0, t0}, params);
    const bool exclude_principal = (t0 == 0.0);

    lpl::output_table t;
    t.meta = base_meta("lvalues");
    t.meta["config"] = {{"q", q}, {"t0", t0}, {"eps", eps}};
    t.meta["point"] = "s = 1 + i*t0";
    t.meta["note"] = exclude_principal ? "principal character excluded (t0 = 0)"
                                       : "all characters mod q included";
    t.columns = {"index",    "L_re",  "L_im",  "L_err",  "Lprime_re", "Lprime_im",
                 "Lprime_err", "ld_re", "ld_im", "ld_err", "abs_ld_sq", "status"};

    bool numerical_failure = false;
    for (std::size_t i = exclude_principal ? 1 : 0; i < group.size(); ++i) {
        const auto chi = group.character_at(i);
        std::vector<std::string> row{std::to_string(i)};
        try {
            const auto lv = sweep.l(chi);
            const auto lp = sweep.l_prime(chi);
            const auto ld = sweep.log_derivative(chi);
            const double mag = std::abs(ld.value);
            for (double v : {lv.value.real(), lv.value.imag(), lv.error, lp.value.real(),
                             lp.value.imag(), lp.error, ld.value.real(), ld.value.imag(),
                             ld.error, mag * mag})
                row.push_back(format_float(v));
            row.push_back("ok");
        } catch (const lpl::numeric_error& e) {
            row.resize(11, "nan");
            row.push_back(std::string("error: ") + e.what());
            numerical_failure = true;
        }
        t.rows.push_back(std::move(row));
    }
    out.write(t, format);
    return numerical_failure ? 2 : 0;
}

int cmd_moments(const std::vector<lpl::uint64_t>& q_list, const std::vector<unsigned>& k_list,
                double t0, lpl::uint64_t trunc_m, double eps, unsigned threads,
                const std::string& format, const sink& out) {
    lpl::eval_params params;
    params.target_eps = eps;

    lpl::output_table t;
    // threads affect scheduling only, never values; keeping them out of the
    // echo preserves byte-identical output across thread counts
    t.meta = base_meta("moments");
    t.meta["config"] = {{"q_list", q_list}, {"k_list", k_list}, {"t0", t0},
                        {"trunc_M", trunc_m}, {"eps", eps}};
    t.meta["main_term"] =
        "unrestricted for prime q, coprimality-restricted otherwise; tail_bound is the "
        "rigorous bound on the truncated mass";
    t.columns = {"q",          "k",          "t0",         "empirical", "main_term",
                 "deviation",  "predicted_scale", "tail_bound", "status"};

    bool numerical_failure = false;
    for (unsigned k : k_list) {
        std::cerr << "k=" << k << ": sweeping " << q_list.size() << " moduli...\n";
        const lpl::deviation_report rep =
            lpl::deviation_sweep(k, q_list, t0, trunc_m, params, threads);
        for (const auto& row : rep.rows) {
            std::vector<std::string> cells{std::to_string(row.q), std::to_string(row.k),
                                           format_float(row.t0)};
            if (row.ok) {
                cells.push_back(format_float(row.empirical));
                cells.push_back(format_float(row.main_term));
                cells.push_back(format_float(row.deviation));
                cells.push_back(format_float(row.predicted_scale));
                cells.push_back(format_float(row.tail_bound));
                cells.push_back("ok");
            } else {
                for (int i = 0; i < 5; ++i) cells.push_back("nan");
                cells.push_back("error: " + row.error);
                numerical_failure = true;
            }
            t.rows.push_back(std::move(cells));
        }
    }
    out.write(t, format);
    return numerical_failure ? 2 : 0;
}

int cmd_dist(const std::vector<lpl::uint64_t>& q_list, double t0, double vmax, double eps,
             unsigned threads, const std::string& format, const sink& out,
             const std::string& hankel_path) {
    lpl::eval_params params;
    params.target_eps = eps;

    std::vector<lpl::empirical_distribution> dists;
    ordered_json hankel_doc;
    hankel_doc["meta"] = base_meta("dist");
    hankel_doc["meta"]["config"] = {{"q_list", q_list}, {"t0", t0}, {"eps", eps}};
    if (std::isfinite(vmax)) hankel_doc["meta"]["config"]["plot_vmax"] = vmax;
    ordered_json reports = ordered_json::array();
    int rc = 0;
    try {
        for (lpl::uint64_t q : q_list) {
            std::cerr << "building distribution for q=" << q << "...\n";
            dists.push_back(lpl::build_distribution(q, t0, params, threads));
            const auto& d = dists.back();
            const auto seq = lpl::moments_from_distribution(d, 8);
            const auto rep = lpl::build_hankel_report(seq, 3);
            ordered_json j;
            j["q"] = q;
            j["t0"] = t0;
            j["samples"] = d.samples.size();
            j["moments"] = seq.moments;
            j["delta"] = rep.delta;
            j["delta_star"] = rep.delta_star;
            j["min_eigenvalue"] = rep.min_eig;
            j["min_eigenvalue_star"] = rep.min_eig_star;
            j["numerically_singular"] = rep.singular;
            j["numerically_singular_star"] = rep.singular_star;
            j["noise_floor"] = rep.noise_floor;
            j["noise_floor_star"] = rep.noise_floor_star;
            j["carleman_partial"] = rep.carleman_partial;
            j["factorial_ratio"] = rep.factorial_ratio;
            reports.push_back(std::move(j));
        }
    } catch (const lpl::numeric_error& e) {
        std::cerr << "numerical failure: " << e.what() << " (partial output preserved)\n";
        rc = 2;
    }
    hankel_doc["reports"] = std::move(reports);

    lpl::output_table t;
    t.meta = base_meta("dist");
    t.meta["config"] = hankel_doc["meta"]["config"];
    t.meta["cdf"] = "D_q(v) = #'{chi : |L'/L(1+it0,chi)|^2 <= v} / phi(q); primed count "
                    "excludes the principal character when t0 = 0";
    t.columns = {"q", "v", "D"};
    for (const auto& p : lpl::export_plot_data(dists, vmax)) {
        t.rows.push_back({std::to_string(p.q), format_float(p.v), format_float(p.cdf)});
    }
    out.write(t, format);

    std::ofstream hs(hankel_path, std::ios::binary);
    if (!hs) throw std::invalid_argument("cannot open output file: " + hankel_path);
    hs << hankel_doc.dump(2) << "\n";
    std::cerr << "wrote " << hankel_path << "\n";
    return rc;
}

int cmd_verify(const std::string& level, unsigned threads) {
    const bool full = (level == "full");
    const auto results = lpl::run_verification(full, threads);
    bool all = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "ok   " : "FAIL ") << r.name;
        if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
        std::cout << "\n";
        all = all && r.pass;
    }
    std::cout << (all ? "verify: all checks passed\n" : "verify: FAILURES present\n");
    return all ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"power means of |L'/L(1+it0,chi)| over Dirichlet characters mod q"};
    app.require_subcommand(1);

    std::string format = "csv";
    std::string out_path;
    unsigned threads = 1;
    double t0 = 0.0;
    double eps = 1e-13;

    auto add_common = [&](CLI::App* sub, bool with_threads) {
        sub->add_option("--format", format, "output format: csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", out_path, "output file (stdout when omitted)");
        if (with_threads)
            sub->add_option("--threads", threads, "worker threads (character-parallel)")
                ->check(CLI::Range(1u, 256u));
    };

    // characters
    lpl::uint64_t q = 0;
    auto* sc_chars = app.add_subcommand("characters", "character table mod q");
    sc_chars->add_option("--q", q, "modulus (q >= 2)")->required();
    add_common(sc_chars, false);

    // lvalues
    auto* sc_lval = app.add_subcommand("lvalues", "per-character L, L', L'/L at s = 1+it0");
    sc_lval->add_option("--q", q, "modulus (q >= 3)")->required();
    sc_lval->add_option("--t0", t0, "imaginary shift t0 (|t0| <= 10)");
    sc_lval->add_option("--eps", eps, "target evaluation precision");
    add_common(sc_lval, false);

    // moments
    std::vector<lpl::uint64_t> q_list;
    std::vector<unsigned> k_list{1};
    lpl::uint64_t trunc_m = 1'000'000;
    auto* sc_mom = app.add_subcommand("moments", "empirical vs main-term deviation report");
    sc_mom->add_option("--q-list", q_list, "moduli (comma separated)")
        ->required()
        ->delimiter(',');
    sc_mom->add_option("--k-list", k_list, "power-mean exponents k")->delimiter(',');
    sc_mom->add_option("--t0", t0, "imaginary shift t0 (|t0| <= 10)");
    sc_mom->add_option("--trunc-M", trunc_m, "main-term truncation point");
    sc_mom->add_option("--eps", eps, "target evaluation precision");
    add_common(sc_mom, true);

    // dist
    double vmax = INFINITY;
    auto* sc_dist = app.add_subcommand("dist", "empirical CDF plot data + Hankel report");
    sc_dist->add_option("--q-list", q_list, "moduli (comma separated)")
        ->required()
        ->delimiter(',');
    sc_dist->add_option("--t0", t0, "imaginary shift t0 (|t0| <= 10)");
    sc_dist->add_option("--plot-vmax", vmax, "truncate exported breakpoints at v <= vmax");
    sc_dist->add_option("--eps", eps, "target evaluation precision");
    add_common(sc_dist, true);

    // verify
    std::string level = "quick";
    auto* sc_verify = app.add_subcommand("verify", "run the module invariant suites");
    sc_verify->add_option("level", level, "quick or full")
        ->check(CLI::IsMember({"quick", "full"}));
    sc_verify->add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 256u));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1; // usage errors are exit 1; --help is 0
    }

    try {
        if (std::abs(t0) > 10.0)
            throw std::invalid_argument("|t0| > 10 unsupported: the theorem's error term "
                                        "degrades; rerun with |t0| <= 10");
        sink out{out_path.empty() ? std::nullopt : std::optional<std::string>(out_path)};

        if (sc_chars->parsed()) return cmd_characters(q, format, out);
        if (sc_lval->parsed()) {
            if (q < 3) throw std::invalid_argument("lvalues: q must be >= 3");
            return cmd_lvalues(q, t0, eps, format, out);
        }
        if (sc_mom->parsed())
            return cmd_moments(q_list, k_list, t0, trunc_m, eps, threads, format, out);
        if (sc_dist->parsed()) {
            const std::string hankel_path = out_path.empty()
                                                ? std::string("dist.hankel.json")
                                                : out_path + ".hankel.json";
            return cmd_dist(q_list, t0, vmax, eps, threads, format, out, hankel_path);
        }
        if (sc_verify->parsed()) return cmd_verify(level, threads);
    } catch (const lpl::numeric_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
