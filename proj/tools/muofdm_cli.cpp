// Command-line front end.  Talks to the library exclusively through the C
// API in muofdm/muofdm.h; all policy here is presentation: flag parsing,
// validation-to-exit-code mapping, CSV/JSON/key=value serialization, and
// the default sweep grids for the figure reproductions.
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "muofdm/muofdm.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitValidation = 4;

std::string g17(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

// ---------------------------------------------------------------------------
// CSV writing

struct CsvRow {
    std::optional<int> figure_id;
    int m = 0;
    int beta = 0;
    int p = 0;
    double ebn0_db = 0.0;
    int n = 0;
    double a = 1.0;
    double b = 1.0;
    double power_sum = 0.0;
    std::optional<double> ber_analytic;
    std::optional<double> ber_mc;
    std::optional<double> ci_low;
    std::optional<double> ci_high;
    std::optional<std::uint64_t> bits;
    std::optional<std::uint64_t> seed;
};

constexpr const char* kCsvHeader =
    "figure_id,m,beta,p,ebn0_db,n,a,b,power_sum,ber_analytic,ber_mc,ci_low,"
    "ci_high,bits,seed";

std::string csv_line(const CsvRow& row) {
    std::string line;
    const auto cell = [&line](const std::string& text) {
        if (!line.empty()) line += ',';
        line += text;
    };
    cell(row.figure_id ? std::to_string(*row.figure_id) : "");
    cell(std::to_string(row.m));
    cell(std::to_string(row.beta));
    cell(std::to_string(row.p));
    cell(g17(row.ebn0_db));
    cell(std::to_string(row.n));
    cell(g17(row.a));
    cell(g17(row.b));
    cell(g17(row.power_sum));
    cell(row.ber_analytic ? g17(*row.ber_analytic) : "");
    cell(row.ber_mc ? g17(*row.ber_mc) : "");
    cell(row.ci_low ? g17(*row.ci_low) : "");
    cell(row.ci_high ? g17(*row.ci_high) : "");
    cell(row.bits ? std::to_string(*row.bits) : "");
    cell(row.seed ? std::to_string(*row.seed) : "");
    return line;
}

int write_csv(const std::string& path, const std::vector<CsvRow>& rows) {
    std::ofstream out(path, std::ios::binary);  // binary: LF on every platform
    if (!out) {
        std::fprintf(stderr, "error: cannot open '%s' for writing\n", path.c_str());
        return kExitIo;
    }
    out << kCsvHeader << '\n';
    for (const CsvRow& row : rows) {
        out << csv_line(row) << '\n';
    }
    out.flush();
    if (!out) {
        std::fprintf(stderr, "error: short write to '%s'\n", path.c_str());
        return kExitIo;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// Result emission: one key=value line (or a JSON object with --json)

struct ResultEmitter {
    bool json = false;
    nlohmann::ordered_json doc;
    std::string line;

    void add(const std::string& key, double value) {
        doc[key] = value;
        line += (line.empty() ? "" : " ") + key + "=" + g17(value);
    }
    void add(const std::string& key, std::int64_t value) {
        doc[key] = value;
        line += (line.empty() ? "" : " ") + key + "=" + std::to_string(value);
    }
    void add(const std::string& key, std::uint64_t value) {
        doc[key] = value;
        line += (line.empty() ? "" : " ") + key + "=" + std::to_string(value);
    }
    void add(const std::string& key, int value) { add(key, std::int64_t{value}); }
    void add(const std::string& key, const std::string& value) {
        doc[key] = value;
        line += (line.empty() ? "" : " ") + key + "=" + value;
    }

    void emit() const {
        if (json) {
            std::printf("%s\n", doc.dump(2).c_str());
        } else {
            std::printf("result: %s\n", line.c_str());
        }
    }
};

// ---------------------------------------------------------------------------
// Shared options and validation plumbing

struct CommonOpts {
    int m = 64;
    int beta = 128;
    int p = 1;
    double ebn0_db = 10.0;
    double n0 = 1.0;
    int n = 1;
    double a = 1.0;
    double b = 1.0;
    double ct = 1.0;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    int shards = 0;
    std::string out;
    bool json = false;
    std::string map = "chebyshev2";
    std::string inner = "numeric";
    std::string config;
};

muofdm_params make_params(const CommonOpts& opt) {
    muofdm_params params;
    params.m = opt.m;
    params.beta = opt.beta;
    params.p = opt.p;
    params.n0 = opt.n0;
    params.eb = 0.0;  // filled below; validation reports it if conversion failed
    double eb = 0.0;
    if (muofdm_ebn0_db_to_linear(opt.ebn0_db, opt.n0, &eb) == MUOFDM_OK) {
        params.eb = eb;
    }
    return params;
}

// Returns kExitOk or prints the violations and returns kExitValidation.
int check_valid(const muofdm_params& params, const muofdm_alloc* alloc,
                const double* budget) {
    char msg[1024];
    int32_t count = 0;
    const muofdm_status status =
        muofdm_validate(&params, alloc, budget, msg, sizeof msg, &count);
    if (status == MUOFDM_OK) return kExitOk;
    std::fprintf(stderr, "validation failed (%d issue%s):\n%s\n", count,
                 count == 1 ? "" : "s", msg);
    return kExitValidation;
}

void add_common_flags(CLI::App* cmd, CommonOpts& opt, bool with_alloc,
                      bool with_sim) {
    // Later occurrences win, so explicit flags override config-file values.
    cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cmd->add_option("--m", opt.m, "Sub-carriers per user");
    cmd->add_option("--beta", opt.beta, "Spreading factor");
    cmd->add_option("--p", opt.p, "Number of users");
    cmd->add_option("--ebn0-db", opt.ebn0_db, "Eb/N0 in dB");
    cmd->add_option("--n0", opt.n0, "Noise density N0");
    if (with_alloc) {
        cmd->add_option("--n", opt.n, "Reference sub-carrier count");
        cmd->add_option("--a", opt.a, "Data sub-carrier power");
        cmd->add_option("--b", opt.b, "Reference sub-carrier power");
    }
    if (with_sim) {
        cmd->add_option("--trials", opt.trials, "Monte Carlo frames");
        cmd->add_option("--seed", opt.seed, "Random seed");
        cmd->add_option("--shards", opt.shards,
                        "Worker threads (0 = hardware concurrency)");
        cmd->add_option("--map", opt.map, "Chaotic map")
            ->check(CLI::IsMember({"chebyshev2", "logistic"}));
    }
    cmd->add_option("--out", opt.out, "Output CSV path");
    cmd->add_flag("--json", opt.json, "Emit a JSON result object");
    // Consumed before parsing (see expand_config); registered for --help only.
    cmd->add_option("--config", opt.config,
                    "Read options from a key=value file (# comments; explicit "
                    "flags win)");
}

// ---------------------------------------------------------------------------
// Config file expansion.  Grammar: one `key=value` per line, blank lines and
// `#` comments ignored, keys are long option names without the leading
// dashes.  The pairs are spliced into the argument list directly after the
// subcommand name, ahead of the explicitly typed flags, so explicit flags
// take precedence.  Returns an exit code, or kExitOk to continue.

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

int expand_config(const CLI::App& app, std::vector<std::string>& args) {
    std::string path;
    std::size_t erased_at = std::string::npos;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const bool split_form = args[i] == "--config";
        const bool joined_form = args[i].rfind("--config=", 0) == 0;
        if (!split_form && !joined_form) continue;
        if (!path.empty()) {
            std::fprintf(stderr, "error: --config given more than once\n");
            return kExitUsage;
        }
        if (split_form) {
            if (i + 1 >= args.size()) {
                std::fprintf(stderr, "error: --config requires a file path\n");
                return kExitUsage;
            }
            path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
        } else {
            path = args[i].substr(std::string("--config=").size());
            args.erase(args.begin() + i);
        }
        erased_at = i;
        --i;
    }
    if (path.empty()) return kExitOk;
    (void)erased_at;

    std::ifstream file(path);
    if (!file) {
        std::fprintf(stderr, "error: cannot read config file '%s'\n", path.c_str());
        return kExitIo;
    }

    // Keys are filtered against the chosen subcommand so one config file can
    // serve several subcommands; inapplicable keys get a note, not an error.
    const CLI::App* sub = nullptr;
    for (const std::string& arg : args) {
        if (!arg.empty() && arg.front() != '-') {
            for (const CLI::App* candidate : app.get_subcommands(nullptr)) {
                if (candidate->get_name() == arg) {
                    sub = candidate;
                    break;
                }
            }
            break;
        }
    }

    std::vector<std::string> expanded;
    std::string line;
    int line_no = 0;
    while (std::getline(file, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "error: %s:%d: expected key=value\n", path.c_str(),
                         line_no);
            return kExitUsage;
        }
        const std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            value = value.substr(1, value.size() - 2);
        }
        if (key.empty()) {
            std::fprintf(stderr, "error: %s:%d: empty key\n", path.c_str(), line_no);
            return kExitUsage;
        }
        if (sub != nullptr && sub->get_option_no_throw("--" + key) == nullptr) {
            std::fprintf(stderr, "note: config key '%s' does not apply to '%s'\n",
                         key.c_str(), sub->get_name().c_str());
            continue;
        }
        if (key == "json") {  // the only boolean flag
            if (value == "true" || value == "1" || value == "yes" || value == "on") {
                expanded.push_back("--json");
            } else if (value != "false" && value != "0" && value != "no" &&
                       value != "off") {
                std::fprintf(stderr, "error: %s:%d: json expects a boolean\n",
                             path.c_str(), line_no);
                return kExitUsage;
            }
            continue;
        }
        expanded.push_back("--" + key + "=" + value);
    }

    // Splice after the subcommand name (first non-dash token).
    auto anchor = args.begin();
    while (anchor != args.end() && !anchor->empty() && anchor->front() == '-') {
        ++anchor;
    }
    if (anchor != args.end()) ++anchor;
    args.insert(anchor, expanded.begin(), expanded.end());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// Subcommand bodies

int run_ber(const CommonOpts& opt, bool psa_mode) {
    const muofdm_params params = make_params(opt);
    muofdm_alloc alloc;
    alloc.n = opt.n;
    alloc.a = psa_mode ? opt.a : 1.0;
    alloc.b = psa_mode ? opt.b : 1.0;
    if (const int rc = check_valid(params, &alloc, nullptr); rc != kExitOk) return rc;

    ResultEmitter result;
    result.json = opt.json;
    result.add("scheme", std::string(psa_mode ? "psa" : "sa"));
    result.add("m", params.m);
    result.add("beta", params.beta);
    result.add("p", params.p);
    result.add("ebn0_db", opt.ebn0_db);
    result.add("n", alloc.n);
    double ber = 0.0;
    if (psa_mode) {
        double u = 0.0;
        muofdm_ratio_u(&params, &alloc, &u);
        muofdm_ber_psa(&params, &alloc, &ber);
        result.add("a", alloc.a);
        result.add("b", alloc.b);
        result.add("power_sum", (params.m - alloc.n) * alloc.a + alloc.n * alloc.b);
        result.add("u", u);
    } else {
        double objective = 0.0;
        muofdm_objective_sa(&params, alloc.n, &objective);
        muofdm_ber_sa(&params, alloc.n, &ber);
        result.add("objective", objective);
    }
    result.add("ber", ber);
    if (!opt.json) {
        std::printf("%s BER at n=%d: %.6e\n", psa_mode ? "power-allocated" : "equal-power",
                    alloc.n, ber);
    }
    result.emit();
    return kExitOk;
}

int run_optimal_n(const CommonOpts& opt) {
    const muofdm_params params = make_params(opt);
    if (const int rc = check_valid(params, nullptr, nullptr); rc != kExitOk) return rc;

    int32_t n_closed = 0;
    int32_t n_brute = 0;
    muofdm_optimal_n_closed_form(&params, &n_closed);
    muofdm_optimal_n_bruteforce(&params, &n_brute);
    double ber = 0.0;
    muofdm_ber_sa(&params, n_closed, &ber);
    double zeta = 0.0, xi = 0.0, delta = 0.0, shift = 0.0;
    muofdm_depressed_cubic(&params, &zeta, &xi, &delta, &shift);

    if (!opt.json) {
        std::printf("optimal reference count: %d (exhaustive scan agrees: %s)\n",
                    n_closed, n_closed == n_brute ? "yes" : "NO");
    }
    ResultEmitter result;
    result.json = opt.json;
    result.add("n_star", n_closed);
    result.add("n_star_bruteforce", n_brute);
    result.add("ber_at_n_star", ber);
    result.add("zeta", zeta);
    result.add("xi", xi);
    result.add("delta", delta);
    result.add("shift", shift);
    result.emit();
    return kExitOk;
}

int run_joint_opt(const CommonOpts& opt) {
    const muofdm_params params = make_params(opt);
    if (const int rc = check_valid(params, nullptr, nullptr); rc != kExitOk) return rc;
    if (!(opt.ct > 0.0)) {
        std::fprintf(stderr, "validation failed (1 issue):\n--ct must be > 0\n");
        return kExitValidation;
    }

    muofdm_solve_options options;
    options.epsilon = 1e-9;
    options.q_hi_init = 1.0;
    options.max_doublings = 128;
    options.max_bisections = 200;
    options.inner = opt.inner == "kkt" ? 1 : 0;
    muofdm_dinkelbach_result solved;
    const muofdm_status status =
        muofdm_dinkelbach_solve(&params, opt.ct, &options, &solved);
    if (status != MUOFDM_OK && status != MUOFDM_ERR_NO_CONVERGENCE) {
        std::fprintf(stderr, "joint-opt failed: %s\n", muofdm_status_name(status));
        return kExitValidation;
    }

    double u_check = 0.0;
    muofdm_ratio_u(&params, &solved.alloc_star, &u_check);
    double ber = 0.0;
    muofdm_ber_psa(&params, &solved.alloc_star, &ber);

    if (!opt.json) {
        std::printf("joint optimum: n=%d a=%.6e b=%.6e  (ber %.6e, %s)\n",
                    solved.alloc_star.n, solved.alloc_star.a, solved.alloc_star.b, ber,
                    solved.converged ? "converged" : "NOT converged");
    }
    ResultEmitter result;
    result.json = opt.json;
    result.add("q_star", solved.q_star);
    result.add("n_star", solved.alloc_star.n);
    result.add("a_star", solved.alloc_star.a);
    result.add("b_star", solved.alloc_star.b);
    result.add("u_star", solved.u_star);
    result.add("u_check", u_check);
    result.add("ber", ber);
    result.add("power_sum", (params.m - solved.alloc_star.n) * solved.alloc_star.a +
                                solved.alloc_star.n * solved.alloc_star.b);
    result.add("v_residual", solved.v_residual);
    result.add("converged", solved.converged);
    result.add("bracket_iterations", solved.bracket_iterations);
    result.add("bisection_iterations", solved.bisection_iterations);
    result.emit();
    return solved.converged ? kExitOk : kExitValidation;
}

int run_simulate(const CommonOpts& opt, bool psa_mode) {
    const muofdm_params params = make_params(opt);
    muofdm_alloc alloc;
    alloc.n = opt.n;
    alloc.a = psa_mode ? opt.a : 1.0;
    alloc.b = psa_mode ? opt.b : 1.0;
    if (const int rc = check_valid(params, &alloc, nullptr); rc != kExitOk) return rc;
    if (opt.trials == 0) {
        std::fprintf(stderr, "validation failed (1 issue):\n--trials must be > 0\n");
        return kExitValidation;
    }

    muofdm_sim_options sim_options;
    sim_options.seed = opt.seed;
    sim_options.shards = opt.shards;
    sim_options.map = opt.map == "logistic" ? 1 : 0;
    sim_options.confidence = 0.99;

    muofdm_sim* sim = nullptr;
    muofdm_status status = muofdm_sim_create(&params, &alloc, &sim_options, &sim);
    if (status != MUOFDM_OK) {
        std::fprintf(stderr, "simulate failed: %s\n", muofdm_status_name(status));
        return kExitValidation;
    }
    muofdm_ber_estimate estimate;
    status = muofdm_sim_run(sim, opt.trials, &estimate);
    muofdm_sim_destroy(sim);
    if (status != MUOFDM_OK) {
        std::fprintf(stderr, "simulate failed: %s\n", muofdm_status_name(status));
        return kExitValidation;
    }

    double ber_analytic = 0.0;
    if (psa_mode) {
        muofdm_ber_psa(&params, &alloc, &ber_analytic);
    } else {
        muofdm_ber_sa(&params, alloc.n, &ber_analytic);
    }

    if (!opt.out.empty()) {
        CsvRow row;
        row.m = params.m;
        row.beta = params.beta;
        row.p = params.p;
        row.ebn0_db = opt.ebn0_db;
        row.n = alloc.n;
        row.a = alloc.a;
        row.b = alloc.b;
        row.power_sum = (params.m - alloc.n) * alloc.a + alloc.n * alloc.b;
        row.ber_analytic = ber_analytic;
        row.ber_mc = estimate.ber;
        row.ci_low = estimate.ci_low;
        row.ci_high = estimate.ci_high;
        row.bits = estimate.bits;
        row.seed = opt.seed;
        if (const int rc = write_csv(opt.out, {row}); rc != kExitOk) return rc;
    }

    if (!opt.json) {
        std::printf("simulated %" PRIu64 " bits: ber %.6e (99%% CI [%.6e, %.6e]), "
                    "analytic %.6e\n",
                    estimate.bits, estimate.ber, estimate.ci_low, estimate.ci_high,
                    ber_analytic);
    }
    ResultEmitter result;
    result.json = opt.json;
    result.add("ber_mc", estimate.ber);
    result.add("ci_low", estimate.ci_low);
    result.add("ci_high", estimate.ci_high);
    result.add("bits", estimate.bits);
    result.add("errors", estimate.errors);
    result.add("ber_analytic", ber_analytic);
    result.add("seed", opt.seed);
    result.emit();
    return kExitOk;
}

int run_errata(const CommonOpts& opt) {
    char* text = nullptr;
    const muofdm_status status = muofdm_errata_report(&text);
    if (status != MUOFDM_OK || text == nullptr) {
        std::fprintf(stderr, "errata failed: %s\n", muofdm_status_name(status));
        return kExitValidation;
    }
    const std::string report = text;
    muofdm_string_free(text);
    if (!opt.out.empty()) {
        std::ofstream file(opt.out, std::ios::binary);
        if (!file) {
            std::fprintf(stderr, "error: cannot open '%s' for writing\n",
                         opt.out.c_str());
            return kExitIo;
        }
        file << report;
        if (!file.flush()) {
            std::fprintf(stderr, "error: short write to '%s'\n", opt.out.c_str());
            return kExitIo;
        }
    } else {
        std::fputs(report.c_str(), stdout);
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// Figure sweeps.  Defaults follow the documented grids; every row is pure
// closed-form evaluation, so a rerun with equal flags is byte-identical.

std::vector<double> log_grid(double lo, double hi, int points) {
    std::vector<double> grid;
    grid.reserve(points);
    for (int i = 0; i < points; ++i) {
        grid.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
    }
    return grid;
}

CsvRow base_row(int figure_id, const muofdm_params& params, double ebn0_db) {
    CsvRow row;
    row.figure_id = figure_id;
    row.m = params.m;
    row.beta = params.beta;
    row.p = params.p;
    row.ebn0_db = ebn0_db;
    return row;
}

void push_sa_row(std::vector<CsvRow>& rows, int figure_id, muofdm_params params,
                 double ebn0_db, int n) {
    double ber = 0.0;
    muofdm_ber_sa(&params, n, &ber);
    CsvRow row = base_row(figure_id, params, ebn0_db);
    row.n = n;
    row.a = 1.0;
    row.b = 1.0;
    row.power_sum = params.m;
    row.ber_analytic = ber;
    rows.push_back(row);
}

void push_psa_row(std::vector<CsvRow>& rows, int figure_id, muofdm_params params,
                  double ebn0_db, const muofdm_alloc& alloc) {
    double ber = 0.0;
    muofdm_ber_psa(&params, &alloc, &ber);
    CsvRow row = base_row(figure_id, params, ebn0_db);
    row.n = alloc.n;
    row.a = alloc.a;
    row.b = alloc.b;
    row.power_sum = (params.m - alloc.n) * alloc.a + alloc.n * alloc.b;
    row.ber_analytic = ber;
    rows.push_back(row);
}

muofdm_params params_at_db(CommonOpts opt, double ebn0_db) {
    opt.ebn0_db = ebn0_db;
    return make_params(opt);
}

int run_figure(const CommonOpts& opt, int figure_id) {
    if (opt.out.empty()) {
        std::fprintf(stderr, "error: figure requires --out <path>\n");
        return kExitUsage;
    }

    // Figures with a scalar user count default to the multi-user running
    // example (p=2); the equal-power surfaces sweep p themselves.
    std::vector<CsvRow> rows;
    const std::vector<double> db_sweep = [] {
        std::vector<double> v;
        for (int db = 0; db <= 14; ++db) v.push_back(db);
        return v;
    }();

    switch (figure_id) {
        case 4: {
            // Equal-power BER surface over n and p at fixed Eb/N0.
            for (int p = 1; p <= 4; ++p) {
                CommonOpts local = opt;
                local.p = p;
                const muofdm_params params = make_params(local);
                if (const int rc = check_valid(params, nullptr, nullptr); rc != kExitOk)
                    return rc;
                for (int n = 1; n <= params.m - 1; ++n) {
                    push_sa_row(rows, 4, params, local.ebn0_db, n);
                }
            }
            break;
        }
        case 5: {
            // Equal-power BER vs Eb/N0 for (p, n) combinations.
            for (int p : {1, 2, 3}) {
                for (int n : {1, 3, 12}) {
                    for (double db : db_sweep) {
                        CommonOpts local = opt;
                        local.p = p;
                        const muofdm_params params = params_at_db(local, db);
                        if (const int rc = check_valid(params, nullptr, nullptr);
                            rc != kExitOk)
                            return rc;
                        push_sa_row(rows, 5, params, db, n);
                    }
                }
            }
            break;
        }
        case 6: {
            // Optimized reference count (recomputed per point) vs fixed
            // non-optimal counts, single user.
            for (double db : db_sweep) {
                CommonOpts local = opt;
                local.p = 1;
                const muofdm_params params = params_at_db(local, db);
                if (const int rc = check_valid(params, nullptr, nullptr); rc != kExitOk)
                    return rc;
                int32_t n_star = 0;
                muofdm_optimal_n_closed_form(&params, &n_star);
                push_sa_row(rows, 6, params, db, n_star);
                for (int n : {1, 2, 3, 6}) {
                    push_sa_row(rows, 6, params, db, n);
                }
            }
            break;
        }
        case 7: {
            // Power-allocated BER surface over n, a, b at fixed Eb/N0.
            CommonOpts local = opt;
            local.p = opt.p == 1 ? 2 : opt.p;  // multi-user running example
            const muofdm_params params = make_params(local);
            if (const int rc = check_valid(params, nullptr, nullptr); rc != kExitOk)
                return rc;
            for (int n = 1; n <= 10 && n < params.m; ++n) {
                for (double a : log_grid(1e-4, 1e-1, 16)) {
                    for (double b : log_grid(1e-4, 1.0, 16)) {
                        muofdm_alloc alloc;
                        alloc.n = n;
                        alloc.a = a;
                        alloc.b = b;
                        push_psa_row(rows, 7, params, local.ebn0_db, alloc);
                    }
                }
            }
            break;
        }
        case 8: {
            // Equal-power (optimal n) vs jointly optimized, per user count.
            for (int p : {1, 2, 3}) {
                for (double db : db_sweep) {
                    CommonOpts local = opt;
                    local.p = p;
                    const muofdm_params params = params_at_db(local, db);
                    if (const int rc = check_valid(params, nullptr, nullptr);
                        rc != kExitOk)
                        return rc;
                    int32_t n_star = 0;
                    muofdm_optimal_n_closed_form(&params, &n_star);
                    push_sa_row(rows, 8, params, db, n_star);
                    muofdm_dinkelbach_result solved;
                    muofdm_dinkelbach_solve(&params, opt.ct, nullptr, &solved);
                    push_psa_row(rows, 8, params, db, solved.alloc_star);
                }
            }
            break;
        }
        case 9: {
            // Both schemes vs Eb/N0 for spreading factors 16, 64, 128.
            for (int beta : {16, 64, 128}) {
                for (double db : db_sweep) {
                    CommonOpts local = opt;
                    local.beta = beta;
                    local.p = opt.p == 1 ? 2 : opt.p;
                    const muofdm_params params = params_at_db(local, db);
                    if (const int rc = check_valid(params, nullptr, nullptr);
                        rc != kExitOk)
                        return rc;
                    int32_t n_star = 0;
                    muofdm_optimal_n_closed_form(&params, &n_star);
                    push_sa_row(rows, 9, params, db, n_star);
                    muofdm_dinkelbach_result solved;
                    muofdm_dinkelbach_solve(&params, opt.ct, nullptr, &solved);
                    push_psa_row(rows, 9, params, db, solved.alloc_star);
                }
            }
            break;
        }
        case 10: {
            // Data-power sweep at fixed reference power for two n values.
            CommonOpts local = opt;
            local.p = opt.p == 1 ? 2 : opt.p;
            const muofdm_params params = make_params(local);
            if (const int rc = check_valid(params, nullptr, nullptr); rc != kExitOk)
                return rc;
            for (int n : {3, 6}) {
                for (double a : log_grid(1e-4, 1.0, 60)) {
                    muofdm_alloc alloc;
                    alloc.n = n;
                    alloc.a = a;
                    alloc.b = 0.01;
                    push_psa_row(rows, 10, params, local.ebn0_db, alloc);
                }
            }
            break;
        }
        case 11: {
            // Data-power sweep at n=3 for several reference powers.
            CommonOpts local = opt;
            local.p = opt.p == 1 ? 2 : opt.p;
            const muofdm_params params = make_params(local);
            if (const int rc = check_valid(params, nullptr, nullptr); rc != kExitOk)
                return rc;
            for (double b : {0.05, 0.1, 0.2, 0.3}) {
                for (double a : log_grid(1e-4, 1.0, 60)) {
                    muofdm_alloc alloc;
                    alloc.n = 3;
                    alloc.a = a;
                    alloc.b = b;
                    push_psa_row(rows, 11, params, local.ebn0_db, alloc);
                }
            }
            break;
        }
        default:
            std::fprintf(stderr, "error: unknown figure id %d (expected 4..11)\n",
                         figure_id);
            return kExitUsage;
    }

    if (const int rc = write_csv(opt.out, rows); rc != kExitOk) return rc;
    if (!opt.json) {
        std::printf("figure %d: wrote %zu rows to %s\n", figure_id, rows.size(),
                    opt.out.c_str());
    }
    ResultEmitter result;
    result.json = opt.json;
    result.add("figure_id", figure_id);
    result.add("rows", static_cast<std::int64_t>(rows.size()));
    result.add("out", opt.out);
    result.emit();
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Resource allocation toolkit for multi-user OFDM-DCSK links"};
    app.require_subcommand(1);

    CommonOpts opt;
    int figure_id = 0;

    CLI::App* cmd_ber = app.add_subcommand("ber", "Closed-form BER at one point");
    add_common_flags(cmd_ber, opt, /*with_alloc=*/true, /*with_sim=*/false);

    CLI::App* cmd_optimal = app.add_subcommand(
        "optimal-n", "Optimal reference count for the equal-power system");
    add_common_flags(cmd_optimal, opt, /*with_alloc=*/false, /*with_sim=*/false);

    CLI::App* cmd_joint = app.add_subcommand(
        "joint-opt", "Joint reference-count and power optimization");
    add_common_flags(cmd_joint, opt, /*with_alloc=*/false, /*with_sim=*/false);
    cmd_joint->add_option("--ct", opt.ct, "Total transmit power budget");
    cmd_joint->add_option("--inner", opt.inner, "Inner maximizer")
        ->check(CLI::IsMember({"numeric", "kkt"}));

    CLI::App* cmd_sim = app.add_subcommand("simulate", "Monte Carlo BER estimate");
    add_common_flags(cmd_sim, opt, /*with_alloc=*/true, /*with_sim=*/true);

    CLI::App* cmd_fig = app.add_subcommand("figure", "Reproduce a figure as CSV");
    add_common_flags(cmd_fig, opt, /*with_alloc=*/false, /*with_sim=*/false);
    cmd_fig->add_option("id", figure_id, "Figure id (4..11)")->required();
    cmd_fig->add_option("--ct", opt.ct, "Power budget for optimizer-driven rows");

    CLI::App* cmd_errata = app.add_subcommand(
        "errata", "Report inconsistencies among the transcribed closed forms");
    cmd_errata->add_option("--out", opt.out, "Write the report to a file");
    cmd_errata->add_flag("--json", opt.json, "(accepted for symmetry; text output)");

    std::vector<std::string> args(argv + 1, argv + argc);
    if (const int rc = expand_config(app, args); rc != kExitOk) return rc;

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::FileError& e) {
        std::fflush(stdout);
        app.exit(e);
        return kExitIo;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (cmd_ber->parsed()) {
            const bool psa = cmd_ber->count("--a") > 0 || cmd_ber->count("--b") > 0;
            return run_ber(opt, psa);
        }
        if (cmd_optimal->parsed()) return run_optimal_n(opt);
        if (cmd_joint->parsed()) return run_joint_opt(opt);
        if (cmd_sim->parsed()) {
            const bool psa = cmd_sim->count("--a") > 0 || cmd_sim->count("--b") > 0;
            return run_simulate(opt, psa);
        }
        if (cmd_fig->parsed()) return run_figure(opt, figure_id);
        if (cmd_errata->parsed()) return run_errata(opt);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    }
    return kExitUsage;
}
