// Command-line front end: identity verification, moment sweeps, Gauss-sum
// tables, A_q evaluation, family counts, and export of cached ledgers.
//
// Exit codes: 0 success, 1 check failure, 2 invalid config, 3 budget refusal.

#include "cubicmoments/verify.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

using namespace cubicmoments;

namespace {

struct RunConfig {
    int64_t q = 5;
    int g = 2;
    int A = -1;
    int trunc_u = 4;
    int trunc_z = 3;
    double tol = 1e-8;
    std::string out;
    std::string format = "json";
    int jobs = 1;
    std::string cache_dir;
    bool force = false;
};

// q must be an odd prime power with q = 2 mod 3; returns (p, e)
std::pair<int64_t, int> validate_q(int64_t q) {
    if (q < 3) throw std::invalid_argument("q must be an odd prime power >= 3");
    int64_t p = 0;
    for (int64_t d = 2; d * d <= q; ++d)
        if (q % d == 0) {
            p = d;
            break;
        }
    if (p == 0) p = q;
    int e = 0;
    int64_t t = q;
    while (t > 1) {
        if (t % p != 0) throw std::invalid_argument("q must be a prime power");
        t /= p;
        ++e;
    }
    if (p == 2) throw std::invalid_argument("q must be odd");
    if (q % 3 != 2)
        throw std::invalid_argument("q = " + std::to_string(q) + " is " + std::to_string(q % 3) +
                                    " mod 3; the non-Kummer family needs q = 2 mod 3");
    return {p, e};
}

std::string cache_dir_or_default(const RunConfig& cfg) {
    if (!cfg.cache_dir.empty()) return cfg.cache_dir;
    if (const char* env = std::getenv("CACHE_DIR")) return env;
    return "cache";
}

std::ostream& output_stream(const RunConfig& cfg, std::ofstream& file) {
    if (cfg.out.empty()) return std::cout;
    std::filesystem::path p(cfg.out);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    file.open(cfg.out, std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open output file " + cfg.out);
    return file;
}

int cmd_verify(const RunConfig& cfg) {
    auto [p, e] = validate_q(cfg.q);
    FamilySpec spec(p, e, cfg.g);
    FieldTower T = make_tower(p, e);
    auto results = run_verify(T, spec, cfg.jobs);
    // two battery entries reproduce printed forms of the paper known to fail;
    // they are reported but do not gate the exit status (see README)
    auto diagnostic = [](const CheckResult& r) {
        return r.name.find("documented failing form") != std::string::npos ||
               r.name == "dual term: definition == Gauss-sum route (all t)";
    };
    bool ok = true;
    for (const auto& r : results) {
        bool gate = !diagnostic(r);
        std::cout << (r.pass ? "[ ok ]" : (gate ? "[FAIL]" : "[info]")) << " " << r.name;
        if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
        std::cout << "\n";
        if (gate && !r.pass) ok = false;
    }
    if (!cfg.out.empty()) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : results)
            j.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"gating", !diagnostic(r)}});
        std::ofstream f(cfg.out, std::ios::trunc);
        f << j.dump(2) << "\n";
    }
    std::cout << (ok ? "verify: all gating checks passed" : "verify: FAILURES present") << "\n";
    return ok ? 0 : 1;
}

int cmd_sweep(const RunConfig& cfg) {
    auto [p, e] = validate_q(cfg.q);
    FamilySpec spec(p, e, cfg.g);
    FieldTower T = make_tower(p, e);

    std::string cache = cache_dir_or_default(cfg);
    std::string chars_path = characters_file(cache, spec.q, spec.g);
    auto loaded = load_char_records(T.Fq2, spec.q, chars_path);
    if (!loaded.errors.empty()) {
        for (const auto& err : loaded.errors) std::cerr << "corrupt cache record: " << err << "\n";
        return 2;
    }
    auto family = family_conductors(T, spec.m);
    std::map<Poly, CharRecord> have;
    for (auto& r : loaded.records) have[r.F] = std::move(r);
    bool complete = have.size() == family.size();
    if (complete)
        for (const auto& F : family)
            if (!have.count(F)) complete = false;

    // budget gate on the whole family sweep before any work
    double base_cost = sweep_cost_estimate(spec, spec.g + 1);
    if (base_cost > kEvalBudget && !cfg.force)
        throw BudgetExceeded("sweep: estimated " + std::to_string(base_cost) +
                             " character evaluations exceeds budget; pass --force to override");

    // resume: compute only the conductors missing from the cache
    MomentLedger led;
    led.p = spec.p;
    led.e = spec.e;
    led.q = spec.q;
    led.g = spec.g;
    led.family_count = family.size();
    led.m1 = QuadExtNumber(spec.q);
    led.m2 = QuadExtNumber(spec.q);
    size_t computed = 0;
    {
        std::vector<size_t> missing;
        for (size_t i = 0; i < family.size(); ++i)
            if (!have.count(family[i])) missing.push_back(i);
        computed = missing.size();
        std::vector<CharRecord> fresh(missing.size());
        int jobs = std::max(1, cfg.jobs);
        auto work = [&](size_t lo, size_t hi) {
            for (size_t k = lo; k < hi; ++k)
                fresh[k] = analyze_character(T, spec.g, family[missing[k]]);
        };
        if (jobs == 1 || missing.size() < 2) {
            work(0, missing.size());
        } else {
            std::vector<std::thread> threads;
            size_t chunk = (missing.size() + static_cast<size_t>(jobs) - 1) / static_cast<size_t>(jobs);
            for (int j = 0; j < jobs; ++j) {
                size_t lo = static_cast<size_t>(j) * chunk, hi = std::min(missing.size(), lo + chunk);
                if (lo >= hi) break;
                threads.emplace_back(work, lo, hi);
            }
            for (auto& th : threads) th.join();
        }
        for (size_t k = 0; k < missing.size(); ++k) have[family[missing[k]]] = std::move(fresh[k]);
        for (const auto& F : family) {
            led.m1 += have.at(F).cv1;
            led.m2 += have.at(F).cv2;
            led.records.push_back(have.at(F));
        }
    }
    bool wrote = false;
    if (!complete) {
        save_char_records(T.Fq2, led.records, chars_path);
        wrote = true;
        std::cout << "sweep: computed " << computed << " of " << family.size() << " characters ("
                  << family.size() - computed << " cached)\n";
    } else {
        std::cout << "sweep: cache complete (" << family.size() << " characters), records untouched\n";
    }

    // S-term aggregation happens in a separate full pass when its larger
    // table budget fits (or under --force); its moment must reproduce the
    // record-level moment exactly
    double st_cost = sweep_cost_estimate(spec, std::max(spec.g + 1, 2 * spec.g - 1));
    if (cfg.force || st_cost <= kEvalBudget) {
        SweepOptions opts;
        opts.jobs = cfg.jobs;
        opts.force = cfg.force;
        opts.with_sterms = true;
        opts.with_gauss = true;
        opts.keep_records = false;
        MomentLedger agg = sweep(T, spec, opts);
        if (agg.m2 != led.m2) {
            std::cerr << "sweep: cached records disagree with a fresh sweep; cache is stale\n";
            return 2;
        }
        led.has_sterms = true;
        led.s_prin = std::move(agg.s_prin);
        led.s_prin_cube = std::move(agg.s_prin_cube);
        led.s_prin_noncube = std::move(agg.s_prin_noncube);
        led.s_dual = std::move(agg.s_dual);
        led.s_dual_gauss = std::move(agg.s_dual_gauss);
    }

    CompareReport rep = compare_report(led, Rat(1, static_cast<int64_t>(1.0 / cfg.tol)));
    nlohmann::json j = report_json(rep);
    std::string rpath = cfg.out.empty() ? report_file(cache, spec.q, spec.g) : cfg.out;
    std::filesystem::create_directories(std::filesystem::path(rpath).parent_path());
    {
        // idempotence: do not touch the file if the content is unchanged
        std::string next = j.dump(2) + "\n";
        std::ifstream in(rpath);
        std::string prev((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        if (prev != next) {
            std::ofstream f(rpath, std::ios::trunc);
            f << next;
            wrote = true;
        }
    }
    std::cout << "family " << led.family_count << ", second moment " << rep.m2_float
              << ", main term " << rep.main_term_mid << ", deviation(vs main) "
              << rep.rel_deviation_vs_main << (wrote ? "" : " [cache unchanged]") << "\n";
    return 0;
}

int cmd_family_count(const RunConfig& cfg) {
    auto [p, e] = validate_q(cfg.q);
    FamilySpec spec(p, e, cfg.g);
    FieldTower T = make_tower(p, e);
    auto fam = family_conductors(T, spec.m);
    BigInt oracle = family_count_oracle(T, spec.m);
    uint64_t weak = family_count_weak_condition(T, spec.m);
    if (cfg.format == "json") {
        nlohmann::json j{{"q", spec.q},
                         {"g", spec.g},
                         {"count", fam.size()},
                         {"oracle", oracle.str()},
                         {"weak_condition_count", weak}};
        std::ofstream f;
        output_stream(cfg, f) << j.dump(2) << "\n";
    } else {
        std::ofstream f;
        output_stream(cfg, f) << fam.size() << "\n";
    }
    return BigInt(fam.size()) == oracle ? 0 : 1;
}

int cmd_aq_eval(const RunConfig& cfg) {
    auto [p, e] = validate_q(cfg.q);
    (void)p;
    (void)e;
    Rat tol(1, static_cast<int64_t>(std::max(1.0, 1.0 / cfg.tol)));
    AqValue aq = a_q_value(static_cast<uint32_t>(cfg.q), tol);
    // decimal midpoint with width-matched precision
    double mid = aq.value.mid();
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15f", mid);
    nlohmann::json j{{"q", cfg.q},
                     {"value_decimal", std::string(buf)},
                     {"enclosure_width", rat_double(aq.value.width())},
                     {"truncation_degree", aq.truncation_degree}};
    std::ofstream f;
    output_stream(cfg, f) << j.dump(2) << "\n";
    return 0;
}

int cmd_gauss_table(const RunConfig& cfg) {
    auto [p, e] = validate_q(cfg.q);
    FieldTower T = make_tower(p, e);
    std::vector<GaussSumValue> rows;
    std::vector<Poly> vs;
    vs.push_back(Poly{});
    for (int d = 0; d <= cfg.trunc_u; ++d) {
        uint64_t cnt = static_cast<uint64_t>(monic_count(T.Fq2.q, d));
        for (uint64_t k = 0; k < cnt; ++k) vs.push_back(monic_at(T.Fq2.q, d, k));
    }
    for (int d = 1; d <= cfg.trunc_z; ++d) {
        uint64_t cnt = static_cast<uint64_t>(monic_count(T.Fq2.q, d));
        for (uint64_t k = 0; k < cnt; ++k) {
            Poly f = monic_at(T.Fq2.q, d, k);
            for (const Poly& V : vs) rows.push_back(gen_gauss(T, V, f));
        }
    }
    std::ofstream f;
    write_gauss_table_csv(output_stream(cfg, f), T, rows);
    return 0;
}

int cmd_export(const RunConfig& cfg) {
    auto [p, e] = validate_q(cfg.q);
    FamilySpec spec(p, e, cfg.g);
    FieldTower T = make_tower(p, e);
    std::string cache = cache_dir_or_default(cfg);
    auto loaded = load_char_records(T.Fq2, spec.q, characters_file(cache, spec.q, spec.g));
    if (!loaded.errors.empty()) {
        for (const auto& err : loaded.errors) std::cerr << "corrupt cache record: " << err << "\n";
        return 2;
    }
    if (loaded.records.empty()) {
        std::cerr << "export: no cached characters for q=" << spec.q << " g=" << spec.g
                  << " under " << cache << " (run sweep first)\n";
        return 2;
    }
    std::ofstream f;
    std::ostream& os = output_stream(cfg, f);
    if (cfg.format == "csv") {
        write_export_csv(os, T.Fq2, loaded.records);
    } else {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : loaded.records)
            arr.push_back({{"conductor", poly_encode(T.Fq2, r.F)},
                           {"omega", quadext_encode(r.omega)},
                           {"central_value_k1", quadext_encode(r.cv1)},
                           {"central_value_k2", quadext_encode(r.cv2)}});
        os << arr.dump(2) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact moments of cubic Dirichlet L-functions over F_q(T), non-Kummer case"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--q", cfg.q, "family base field size (odd prime power, 2 mod 3)");
        sub->add_option("--g", cfg.g, "genus (even, >= 0)");
        sub->add_option("--A", cfg.A, "AFE cutoff override");
        sub->add_option("--trunc-u", cfg.trunc_u, "u-truncation / V-degree bound");
        sub->add_option("--trunc-z", cfg.trunc_z, "z-truncation / f-degree bound");
        sub->add_option("--tol", cfg.tol, "tolerance for certified evaluations");
        sub->add_option("--out", cfg.out, "output path (default: stdout or cache)");
        sub->add_option("--format", cfg.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json", "text"}));
        sub->add_option("--jobs", cfg.jobs, "worker count for sweeps");
        sub->add_option("--cache-dir", cfg.cache_dir, "ledger store (default $CACHE_DIR or ./cache)");
        sub->add_flag("--force", cfg.force, "override the evaluation budget");
    };
    CLI::App* verify = app.add_subcommand("verify", "run the exact-identity battery for (q, g)");
    CLI::App* sweep = app.add_subcommand("sweep", "family sweep: moments, ledger, report");
    CLI::App* gtab = app.add_subcommand("gauss-table", "emit a CSV of generalized Gauss sums");
    CLI::App* aq = app.add_subcommand("aq-eval", "certified evaluation of A_q(1/q^2, 1/q^{3/2})");
    CLI::App* fc = app.add_subcommand("family-count", "count the genus-g family");
    CLI::App* ex = app.add_subcommand("export", "export cached per-character records");
    for (auto* sub : {verify, sweep, gtab, aq, fc, ex}) add_common(sub);

    CLI11_PARSE(app, argc, argv);
    try {
        if (app.got_subcommand(verify)) return cmd_verify(cfg);
        if (app.got_subcommand(sweep)) return cmd_sweep(cfg);
        if (app.got_subcommand(gtab)) return cmd_gauss_table(cfg);
        if (app.got_subcommand(aq)) return cmd_aq_eval(cfg);
        if (app.got_subcommand(fc)) return cmd_family_count(cfg);
        if (app.got_subcommand(ex)) return cmd_export(cfg);
    } catch (const BudgetExceeded& ex2) {
        std::cerr << "budget refusal: " << ex2.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& ex2) {
        std::cerr << "invalid config: " << ex2.what() << "\n";
        return 2;
    } catch (const std::exception& ex2) {
        std::cerr << "error: " << ex2.what() << "\n";
        return 1;
    }
    return 2;
}
