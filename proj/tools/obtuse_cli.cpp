// Command-line front end: bounds, sphere model, Monte Carlo, fixed point,
// configuration search and exact enumeration.

#include "obtuse.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifndef OBTUSE_VERSION
#define OBTUSE_VERSION "dev"
#endif

using nlohmann::json;
using namespace obtuse;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInvariant = 4;

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

unsigned default_workers() {
    if (const char* env = std::getenv("OBTUSE_WORKERS")) {
        try {
            return static_cast<unsigned>(std::stoul(env));
        } catch (const std::exception&) {
            throw UsageError(std::string("OBTUSE_WORKERS is not a number: ") + env);
        }
    }
    return 0;
}

struct Common {
    std::optional<std::uint64_t> seed;
    std::string out;
    unsigned workers = 0;
    bool workers_set = false;
};

class Runner {
public:
    explicit Runner(std::vector<std::string> args) : args_(std::move(args)) {}

    int run() {
        CLI::App app{"Obtuse-triangle bounds, constructions and simulations", "obtuse"};
        app.set_version_flag("--version", OBTUSE_VERSION);
        app.require_subcommand(1);

        add_bound(app);
        add_table(app);
        add_sphere(app);
        add_mc(app);
        add_fixedpoint(app);
        add_search(app);
        add_enumerate(app);
        add_replay(app);

        try {
            std::vector<std::string> reversed(args_.rbegin(), args_.rend() - 1);
            app.parse(reversed);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e);
            return code == 0 ? kExitOk : kExitUsage;
        }
        try {
            if (workers_opt_ && workers_opt_->count() == 0) common_.workers = default_workers();
            action_();
            return kExitOk;
        } catch (const UsageError& e) {
            std::cerr << "usage error: " << e.what() << "\n";
            return kExitUsage;
        } catch (const InvariantViolation& e) {
            std::cerr << "invariant violation: " << e.what() << "\n";
            return kExitInvariant;
        } catch (const NumericalError& e) {
            std::cerr << "numerical failure: " << e.what() << "\n";
            return kExitNumerical;
        }
    }

private:
    void add_common(CLI::App* sub, bool with_workers) {
        sub->add_option("--seed", common_.seed, "64-bit seed (drawn from entropy and recorded when omitted)");
        sub->add_option("-o,--out", common_.out, "write the result here instead of stdout");
        if (with_workers)
            workers_opt_ = sub->add_option("--workers", common_.workers,
                                           "worker threads (0 = all cores; default from OBTUSE_WORKERS)");
    }

    std::uint64_t resolved_seed() {
        if (!common_.seed) common_.seed = entropy_seed();
        return *common_.seed;
    }

    // argv with the resolved seed pinned, so the manifest replays exactly.
    json manifest(const std::string& sub, json params) {
        std::vector<std::string> argv(args_.begin() + 1, args_.end());
        bool has_seed = false;
        for (const auto& a : argv) has_seed = has_seed || a == "--seed" || a.rfind("--seed=", 0) == 0;
        if (!has_seed) {
            argv.push_back("--seed");
            argv.push_back(std::to_string(resolved_seed()));
        }
        json m{{"tool", "obtuse"},
               {"version", OBTUSE_VERSION},
               {"subcommand", sub},
               {"argv", argv},
               {"params", std::move(params)},
               {"seed", resolved_seed()},
               {"timestamp", utc_timestamp()},
               {"outputs", common_.out.empty() ? json::array() : json::array({common_.out})}};
        return m;
    }

    void emit_text(const std::string& text) {
        if (common_.out.empty()) {
            std::cout << text;
            std::cout.flush();
            return;
        }
        std::ofstream f(common_.out);
        if (!f) throw UsageError("cannot write " + common_.out);
        f << text;
    }

    void emit_json(const json& j) { emit_text(j.dump(2) + "\n"); }

    static std::string csv_manifest_line(const json& m) { return "# manifest: " + m.dump() + "\n"; }

    // bound ---------------------------------------------------------------
    void add_bound(CLI::App& app) {
        auto* sub = app.add_subcommand("bound", "recursion lower bound for one dimension");
        sub->add_option("--dim", bound_.d, "dimension d >= 2")->required();
        sub->add_option("--n-max", bound_.n_max, "last point count")->default_val(1'000'000);
        sub->add_option("--format", bound_.format, "csv or json")
            ->default_val("json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--stride", bound_.stride, "CSV row spacing in n (default n_max/1000)");
        add_common(sub, false);
        sub->callback([this] { action_ = [this] { cmd_bound(); }; });
    }

    void cmd_bound() {
        if (bound_.d < 2 || bound_.d > 62) throw UsageError("--dim must lie in [2, 62]");
        const json params{{"dim", bound_.d}, {"n_max", bound_.n_max}, {"format", bound_.format}};
        const json m = manifest("bound", params);
        if (bound_.format == "json") {
            const auto r = limit_bound(bound_.d, bound_.n_max);
            json out = summary_json(r);
            out["manifest"] = m;
            emit_json(out);
            return;
        }
        const std::uint64_t stride = bound_.stride ? bound_.stride : std::max<std::uint64_t>(1, bound_.n_max / 1000);
        std::ostringstream os;
        os << csv_manifest_line(m);
        write_bound_csv_header(os);
        const auto r = limit_bound(bound_.d, bound_.n_max, stride,
                                   [&](const BoundRecord& rec) { write_bound_csv_row(os, rec); });
        os << "# summary: " << summary_json(r).dump() << "\n";
        emit_text(os.str());
    }

    // table ---------------------------------------------------------------
    void add_table(CLI::App& app) {
        auto* sub = app.add_subcommand("table", "extrapolated lower bounds for a range of dimensions");
        sub->add_option("--dims", table_.dims, "range lo..hi")->default_val("4..8");
        sub->add_option("--n-max", table_.n_max, "last point count")->default_val(1'000'000);
        sub->add_flag("--pretty", table_.pretty, "aligned console table, 6 significant digits");
        add_common(sub, false);
        sub->callback([this] { action_ = [this] { cmd_table(); }; });
    }

    static std::pair<int, int> parse_range(const std::string& s) {
        const auto dots = s.find("..");
        try {
            if (dots == std::string::npos) {
                const int d = std::stoi(s);
                return {d, d};
            }
            return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
        } catch (const std::exception&) {
            throw UsageError("bad range '" + s + "', expected lo..hi");
        }
    }

    static std::string sig(double v, int digits) {
        std::ostringstream os;
        os << std::setprecision(digits) << v;
        return os.str();
    }

    void cmd_table() {
        const auto [lo, hi] = parse_range(table_.dims);
        if (lo < 2 || hi < lo || hi > 20) throw UsageError("--dims must satisfy 2 <= lo <= hi <= 20");
        const json m = manifest("table", {{"dims", table_.dims}, {"n_max", table_.n_max}});
        std::ostringstream os;
        if (table_.pretty) {
            os << std::left << std::setw(4) << "d" << std::setw(14) << "lower" << std::setw(14)
               << "envelope" << std::setw(14) << "asymptotic" << std::setw(14) << "naive"
               << "lower/naive\n";
        } else {
            os << csv_manifest_line(m);
            os << "d,base_n,n_max,lower_bound,upper_envelope,lower_3sf,asymptotic,naive,lower_over_naive\n";
        }
        for (int d = lo; d <= hi; ++d) {
            const auto r = limit_bound(d, std::max<std::uint64_t>(table_.n_max, base_case(d).n));
            const double lower = to_double(r.lower_bound);
            const double env = to_double(r.upper_envelope);
            const double asym = to_double(asymptotic_bound(d));
            const double naive = to_double(naive_bound(d));
            if (table_.pretty) {
                os << std::left << std::setw(4) << d << std::setw(14) << sig(lower, 6) << std::setw(14)
                   << sig(env, 6) << std::setw(14) << sig(asym, 6) << std::setw(14) << sig(naive, 6)
                   << sig(lower / naive, 6) << "\n";
            } else {
                os << d << ',' << r.base_n << ',' << r.n_max << ',' << sig(lower, 17) << ','
                   << sig(env, 17) << ',' << sig(lower, 3) << ',' << sig(asym, 17) << ','
                   << sig(naive, 17) << ',' << sig(lower / naive, 17) << "\n";
            }
        }
        emit_text(os.str());
    }

    // sphere --------------------------------------------------------------
    void add_sphere(CLI::App& app) {
        auto* sub = app.add_subcommand("sphere", "obtuse probability for uniform points on S_{d-1}");
        sub->add_option("--dim", sphere_.d, "ambient dimension d >= 2")->required();
        sub->add_option("--mc-samples", sphere_.samples, "Monte Carlo triples (0 skips)")->default_val(100'000);
        sub->add_option("--tol", sphere_.tol, "quadrature tolerance")->default_val(1e-10);
        add_common(sub, true);
        sub->callback([this] { action_ = [this] { cmd_sphere(); }; });
    }

    void cmd_sphere() {
        if (sphere_.d < 2) throw UsageError("--dim must be at least 2");
        const std::uint64_t seed = resolved_seed();
        const auto q = obtuse_prob_sphere_detailed(sphere_.d, sphere_.tol);
        const double asym = asymptotic_sphere(sphere_.d);
        json out{{"d", sphere_.d},
                 {"quadrature", q.value},
                 {"quadrature_error", q.error},
                 {"asymptotic", asym},
                 {"relative_gap", asym > 0 ? json(std::abs(q.value / asym - 1)) : json(nullptr)}};
        if (sphere_.samples > 0) {
            auto e = estimate(SphereSampler{sphere_.d}, sphere_.samples, seed, kDefaultTolerance,
                              common_.workers);
            e.spec = {{"kind", "sphere"}, {"params", {{"d", sphere_.d}}}};
            out["mc"] = to_json(e);
        } else {
            out["mc"] = nullptr;
        }
        out["manifest"] = manifest("sphere", {{"dim", sphere_.d}, {"mc_samples", sphere_.samples}, {"tol", sphere_.tol}});
        emit_json(out);
    }

    // mc ------------------------------------------------------------------
    void add_mc(CLI::App& app) {
        auto* sub = app.add_subcommand("mc", "Monte Carlo estimate for a distribution spec");
        sub->add_option("--spec", mc_.spec_path, "distribution spec JSON file")->required();
        sub->add_option("--samples", mc_.samples, "triples")->default_val(1'000'000);
        sub->add_option("--tol", mc_.tol, "classification tolerance (default: the distribution's own, else 1e-12)");
        sub->add_flag("--report", mc_.report, "add the per-pattern breakdown for constructions");
        sub->add_option("--csv-append", mc_.csv_append, "append one summary row to this CSV file");
        add_common(sub, true);
        sub->callback([this] { action_ = [this] { cmd_mc(); }; });
    }

    void cmd_mc() {
        const std::uint64_t seed = resolved_seed();
        if (mc_.samples == 0) throw UsageError("--samples must be at least 1");
        const DistributionSpec spec = parse_distribution_spec(read_json_file(mc_.spec_path));
        const double tol = mc_.tol.value_or(spec_tolerance(spec));
        json out;
        Estimate est;
        if (mc_.report && std::holds_alternative<ArcTripleParams>(spec.params)) {
            const auto rep = arc_triple_pattern_report(std::get<ArcTripleParams>(spec.params),
                                                       mc_.samples, seed, tol, common_.workers);
            est = rep.overall;
            json pats = json::object();
            for (auto p : kAllArcPatterns) {
                json row = to_json(rep.tally(p));
                row["n"] = rep.total(p);
                row["acute_fraction"] = rep.fraction(p, TriangleClass::Acute);
                if (pattern_expected_acute(p) && p != ArcPattern::ABC)
                    row["failure_constant"] = rep.failure_constant(p);
                pats[std::string(to_string(p))] = row;
            }
            out["patterns"] = pats;
            out["acute"] = rep.acute_fraction();
            out["predicted_acute"] = PatternReport::predicted_acute;
        } else if (mc_.report && std::holds_alternative<SelfSimilarParams>(spec.params)) {
            const auto rep = mc_self_similar(std::get<SelfSimilarParams>(spec.params), mc_.samples,
                                             seed, tol, common_.workers);
            est = rep.overall;
            const char* names[] = {"one_shallow", "two_shallow", "three_shallow"};
            json pats = json::object();
            for (int i = 0; i < 3; ++i) {
                const auto lp = static_cast<LevelPattern>(i);
                json row = to_json(rep.by_pattern[static_cast<std::size_t>(i)]);
                row["n"] = rep.total(lp);
                row["acute_rate"] = rep.acute_rate(lp);
                pats[names[i]] = row;
            }
            out["level_patterns"] = pats;
            out["level_counts"] = rep.level_counts;
            out["tail_mass"] = static_cast<double>(rep.tail_mass);
            out["acute"] = rep.acute_fraction();
            out["accounted_acute"] = rep.accounted_acute();
            const double p = static_cast<double>(rep.p);
            out["fixed_point_acute"] = p < 1 ? json(fixed_point_acute(p)) : json(5.0 / 9.0);
        } else {
            const DistributionSampler sampler(spec);
            est = estimate(sampler, mc_.samples, seed, tol, common_.workers);
        }
        est.spec = to_json(spec);
        out["estimate"] = to_json(est);
        out["manifest"] = manifest("mc", {{"spec", to_json(spec)},
                                          {"spec_path", mc_.spec_path},
                                          {"samples", mc_.samples},
                                          {"tol", tol}});
        if (!mc_.csv_append.empty()) append_csv_row(est, tol);
        emit_json(out);
    }

    void append_csv_row(const Estimate& e, double tol) {
        const bool fresh = !std::ifstream(mc_.csv_append).good();
        std::ofstream f(mc_.csv_append, std::ios::app);
        if (!f) throw UsageError("cannot append to " + mc_.csv_append);
        if (fresh) f << "spec_path,samples,seed,tol,acute,right,obtuse,degenerate,p_hat,ci_lo,ci_hi\n";
        f << std::setprecision(17) << mc_.spec_path << ',' << e.samples << ',' << e.seed << ','
          << tol << ',' << e.counts[0] << ',' << e.counts[1] << ',' << e.counts[2] << ','
          << e.counts[3] << ',' << e.p_hat << ',' << e.ci95.lo << ',' << e.ci95.hi << "\n";
    }

    // fixedpoint ----------------------------------------------------------
    void add_fixedpoint(CLI::App& app) {
        auto* sub = app.add_subcommand("fixedpoint", "acute probability of the nested-cap construction");
        auto* g = sub->add_option_group("mode");
        g->add_flag("--scan", fp_.scan, "CSV of p, x(p), 1 - x(p)");
        g->add_flag("--optimize", fp_.optimize, "maximizing p and x (default)");
        g->require_option(0, 1);
        sub->add_option("--steps", fp_.steps, "scan points")->default_val(1000);
        add_common(sub, false);
        sub->callback([this] { action_ = [this] { cmd_fixedpoint(); }; });
    }

    void cmd_fixedpoint() {
        if (fp_.scan) {
            if (fp_.steps < 2) throw UsageError("--steps must be at least 2");
            const json m = manifest("fixedpoint", {{"mode", "scan"}, {"steps", fp_.steps}});
            std::ostringstream os;
            os << csv_manifest_line(m) << "p,x,obtuse\n" << std::setprecision(17);
            for (int i = 1; i < fp_.steps; ++i) {
                const double p = static_cast<double>(i) / fp_.steps;
                const double x = fixed_point_acute(p);
                os << p << ',' << x << ',' << 1 - x << "\n";
            }
            emit_text(os.str());
            return;
        }
        json out = to_json(maximize_acute());
        out["manifest"] = manifest("fixedpoint", {{"mode", "optimize"}});
        emit_json(out);
    }

    // search --------------------------------------------------------------
    void add_search(CLI::App& app) {
        auto* sub = app.add_subcommand("search", "anneal n points in R^d toward few bad triangles");
        sub->add_option("--n", search_.n, "points")->required();
        sub->add_option("--dim", search_.d, "dimension")->required();
        sub->add_option("--mode", search_mode_, "non-acute or strict-obtuse")->default_val("non-acute");
        sub->add_option("--restarts", search_.restarts)->default_val(10);
        sub->add_option("--iterations", search_.iterations)->default_val(50'000);
        sub->add_option("--cooling", search_.cooling)->default_val(0.9998);
        sub->add_option("--temperature", search_.initial_temperature)->default_val(1.0);
        sub->add_option("--tol", search_.tol)->default_val(kDefaultTolerance);
        sub->add_flag("--no-warm-start", no_warm_, "start every restart from random points");
        add_common(sub, true);
        sub->callback([this] { action_ = [this] { cmd_search(); }; });
    }

    void cmd_search() {
        search_.seed = resolved_seed();
        search_.mode = parse_count_mode(search_mode_);
        search_.warm_starts = !no_warm_;
        search_.workers = common_.workers;
        const auto r = search_min(search_);
        json out = to_json(r);
        out["manifest"] = manifest("search", to_json(search_));
        emit_json(out);
    }

    // enumerate -----------------------------------------------------------
    void add_enumerate(CLI::App& app) {
        auto* sub = app.add_subcommand("enumerate", "exact class counts of a saved configuration");
        sub->add_option("--config", enum_.path, "configuration JSON, or a search result")->required();
        sub->add_option("--tol", enum_.tol, "tolerance for the non-rational fallback")->default_val(kDefaultTolerance);
        add_common(sub, false);
        sub->callback([this] { action_ = [this] { cmd_enumerate(); }; });
    }

    void cmd_enumerate() {
        json in = read_json_file(enum_.path);
        if (in.contains("configuration")) in = in.at("configuration");
        const Configuration cfg = configuration_from_json(in);
        json out = to_json(enumerate_exact(cfg, enum_.tol));
        out["n"] = cfg.size();
        out["dim"] = cfg.dim();
        out["manifest"] = manifest("enumerate", {{"config", enum_.path}, {"tol", enum_.tol}});
        emit_json(out);
    }

    // replay --------------------------------------------------------------
    void add_replay(CLI::App& app) {
        auto* sub = app.add_subcommand("replay", "rerun the command recorded in a result's manifest");
        sub->add_option("--manifest", replay_path_, "result JSON carrying a manifest")->required();
        sub->callback([this] { action_ = [this] { cmd_replay(); }; });
    }

    void cmd_replay() {
        const json in = read_json_file(replay_path_);
        const json& m = in.contains("manifest") ? in.at("manifest") : in;
        if (!m.contains("argv")) throw UsageError(replay_path_ + " has no manifest argv");
        std::vector<std::string> args{"obtuse"};
        for (const auto& a : m.at("argv")) {
            const std::string s = a.get<std::string>();
            if (s == "replay") throw UsageError("refusing to replay a replay");
            args.push_back(s);
        }
        Runner inner(std::move(args));
        const int code = inner.run();
        if (code == kExitUsage) throw UsageError("replayed command failed");
        if (code == kExitNumerical) throw NumericalError("replayed command failed");
        if (code == kExitInvariant) throw InvariantViolation("replayed command failed");
    }

    std::vector<std::string> args_;
    std::function<void()> action_;
    Common common_;
    CLI::Option* workers_opt_ = nullptr;

    struct {
        int d = 2;
        std::uint64_t n_max = 1'000'000;
        std::string format = "json";
        std::uint64_t stride = 0;
    } bound_;
    struct {
        std::string dims = "4..8";
        std::uint64_t n_max = 1'000'000;
        bool pretty = false;
    } table_;
    struct {
        int d = 3;
        std::uint64_t samples = 100'000;
        double tol = 1e-10;
    } sphere_;
    struct {
        std::string spec_path;
        std::uint64_t samples = 1'000'000;
        std::optional<double> tol;
        bool report = false;
        std::string csv_append;
    } mc_;
    struct {
        bool scan = false;
        bool optimize = false;
        int steps = 1000;
    } fp_;
    SearchParams search_;
    std::string search_mode_ = "non-acute";
    bool no_warm_ = false;
    struct {
        std::string path;
        double tol = kDefaultTolerance;
    } enum_;
    std::string replay_path_;
};

}  // namespace

int main(int argc, char** argv) {
    try {
        return Runner(std::vector<std::string>(argv, argv + argc)).run();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
