#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string_view>
#include <system_error>

#include "hbp/gradcheck.hpp"

namespace hbp::cli {
namespace fs = std::filesystem;

namespace {

constexpr std::array<std::string_view, 13> kOptionKeys = {
    "function", "optimizer", "hidden", "samples", "train_fraction", "seed", "eta",
    "epochs",   "max_iters", "grad_tol", "c1",     "c2",             "out"};
// Written into manifests; accepted on read and otherwise ignored.
constexpr std::array<std::string_view, 3> kManifestKeys = {"tool_version", "command", "artifacts"};

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::string canonical_key(std::string key) {
    std::replace(key.begin(), key.end(), '-', '_');
    return key;
}

bool is_option_key(std::string_view key) {
    return std::find(kOptionKeys.begin(), kOptionKeys.end(), key) != kOptionKeys.end();
}

bool is_manifest_key(std::string_view key) {
    return std::find(kManifestKeys.begin(), kManifestKeys.end(), key) != kManifestKeys.end();
}

template <typename T>
T parse_number(const std::string& key, const ConfigEntry& entry) {
    T value{};
    const char* first = entry.value.data();
    const char* last = first + entry.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw UsageError("config line " + std::to_string(entry.line) + ": invalid value '" + entry.value +
                         "' for key '" + key + "'");
    }
    return value;
}

std::string hex(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

std::ofstream open_for_write(const fs::path& path) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw UsageError("cannot write " + path.string());
    return file;
}

void prepare_out_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw UsageError("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
    }
    // Probe writability before spending time on training.
    const fs::path probe = dir / ".hbp-write-probe";
    {
        std::ofstream file(probe);
        if (!file) throw UsageError("output directory " + dir.string() + " is not writable");
    }
    fs::remove(probe, ec);
}

// ---------------------------------------------------------------------------
// Flag registration shared by the training subcommands.

struct FlagSet {
    std::map<std::string, CLI::Option*> by_key;
    CLI::Option* config = nullptr;
    std::string config_path;
};

void add_training_flags(CLI::App& cmd, Options& opts, FlagSet& flags) {
    flags.by_key["function"] = cmd.add_option("--function", opts.function, "Test surface: beale or booth");
    flags.by_key["optimizer"] = cmd.add_option("--optimizer", opts.optimizer, "gd or bfgs");
    flags.by_key["hidden"] = cmd.add_option("--hidden", opts.hidden, "Hidden-layer width");
    flags.by_key["samples"] = cmd.add_option("--samples", opts.samples, "Number of sampled points");
    flags.by_key["train_fraction"] = cmd.add_option("--train-fraction", opts.train_fraction, "Training share");
    flags.by_key["seed"] = cmd.add_option("--seed", opts.seed, "Seed for sampling and weight init");
    flags.by_key["eta"] = cmd.add_option("--eta", opts.eta, "GD learning rate");
    flags.by_key["epochs"] = cmd.add_option("--epochs", opts.epochs, "GD epochs");
    flags.by_key["max_iters"] = cmd.add_option("--max-iters", opts.max_iters, "BFGS iteration cap");
    flags.by_key["grad_tol"] = cmd.add_option("--grad-tol", opts.grad_tol, "BFGS gradient-norm tolerance");
    flags.by_key["c1"] = cmd.add_option("--c1", opts.c1, "Wolfe sufficient-decrease constant");
    flags.by_key["c2"] = cmd.add_option("--c2", opts.c2, "Wolfe curvature constant");
    flags.by_key["out"] = cmd.add_option("--out", opts.out, "Output directory");
    flags.config = cmd.add_option("--config", flags.config_path, "key = value configuration file");
}

// `forbidden` names a key that conflicts with this subcommand.
void resolve(Options& opts, const FlagSet& flags, const std::string& command, std::string_view forbidden) {
    if (!forbidden.empty() && flags.by_key.at(std::string(forbidden))->count() > 0) {
        throw UsageError("--" + std::string(forbidden) + " cannot be used with '" + command + "'");
    }
    if (flags.config->count() == 0) return;
    for (const auto& [key, entry] : parse_config(flags.config_path)) {
        if (is_manifest_key(key)) continue;
        if (key == forbidden) {
            throw UsageError("config line " + std::to_string(entry.line) + ": key '" + key +
                             "' cannot be used with '" + command + "'");
        }
        if (flags.by_key.at(key)->count() > 0) continue;  // command line wins
        apply_config_value(opts, key, entry);
    }
}

void print_summary(std::ostream& out, const std::string& fn, const TrainReport& r) {
    out << fn << " / " << to_string(r.optimizer) << ": status " << to_string(r.status) << ", " << r.iterations
        << " iterations\n"
        << "  training error: " << r.train_error_pct << "%\n"
        << "  test error:     " << r.test_error_pct << "%\n"
        << "  wall clock:     " << r.wall_clock_s << " s\n";
}

int train_one(const Options& opts, const fs::path& dir, const std::string& command, std::ostream& out) {
    prepare_out_dir(dir);
    const TrainReport report = run_benchmark(to_bench_config(opts));
    write_history_csv(dir / "history.csv", report);
    write_report(dir / "report.txt", opts, report);
    write_manifest(dir / "manifest.txt", command, opts, {"history.csv", "report.txt", "manifest.txt"});
    print_summary(out, opts.function, report);
    return is_success(report.status) ? kExitOk : kExitNumerical;
}

int cmd_train(const Options& opts, std::ostream& out) { return train_one(opts, opts.out, "train", out); }

int cmd_bench(Options opts, std::ostream& out) {
    int code = kExitOk;
    const fs::path root = opts.out;
    for (const char* fn : {"beale", "booth"}) {
        opts.function = fn;
        code = std::max(code, train_one(opts, root / fn, "bench", out));
    }
    return code;
}

int cmd_compare(const Options& opts, std::ostream& out) {
    const fs::path dir = opts.out;
    prepare_out_dir(dir);
    const Comparison cmp = run_comparison(to_bench_config(opts));

    write_comparison_csv(dir / "comparison.csv", cmp);
    write_history_csv(dir / "history_gd.csv", cmp.gd);
    write_history_csv(dir / "history_bfgs.csv", cmp.bfgs);
    {
        auto file = open_for_write(dir / "report.txt");
        file << "function = " << opts.function << '\n';
        for (const TrainReport* r : {&cmp.gd, &cmp.bfgs}) {
            const std::string p(to_string(r->optimizer));
            file << p << "_status = " << to_string(r->status) << '\n'
                 << p << "_iterations = " << r->iterations << '\n'
                 << p << "_train_error_pct = " << format_double(r->train_error_pct) << '\n'
                 << p << "_test_error_pct = " << format_double(r->test_error_pct) << '\n'
                 << p << "_wall_clock_s = " << format_double(r->wall_clock_s) << '\n'
                 << p << "_initial_param_hash = " << hex(r->initial_param_hash) << '\n'
                 << p << "_dataset_hash = " << hex(r->dataset_hash) << '\n';
        }
    }
    Options recorded = opts;
    recorded.optimizer.clear();
    write_manifest(dir / "manifest.txt", "compare", recorded,
                   {"comparison.csv", "history_gd.csv", "history_bfgs.csv", "report.txt", "manifest.txt"});

    out << "Training Algorithm        % Of Error (" << opts.function << ")\n"
        << std::left << std::setw(26) << "" << std::setw(14) << "train" << "test\n";
    auto row = [&](const char* name, const TrainReport& r) {
        out << std::left << std::setw(26) << name << std::setw(14) << r.train_error_pct << r.test_error_pct << '\n';
    };
    row("Proposed Algorithm (BFGS)", cmp.bfgs);
    row("Gradient Descent", cmp.gd);
    out << "initial parameter hash: gd " << hex(cmp.gd.initial_param_hash) << ", bfgs "
        << hex(cmp.bfgs.initial_param_hash) << '\n';

    return is_success(cmp.gd.status) && is_success(cmp.bfgs.status) ? kExitOk : kExitNumerical;
}

int cmd_gradcheck(std::size_t trials, std::uint64_t seed, std::size_t hidden, bool sabotage, std::ostream& out) {
    if (trials < 1) throw UsageError("--trials must be >= 1");
    double worst = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t h = hidden > 0 ? hidden : 1 + t % 5;
        const auto c = random_gradcheck_case(seed + t, h);
        ParamVector analytic = grad_backprop(c.net, c.data, RowSet::train);
        if (sabotage) {
            // Negative control: flip the largest-magnitude coordinate.
            std::size_t idx = 0;
            for (std::size_t i = 1; i < analytic.size(); ++i) {
                if (std::abs(analytic[i]) > std::abs(analytic[idx])) idx = i;
            }
            analytic[idx] = -analytic[idx];
        }
        const ParamVector numeric = finite_diff_grad(c.net, c.data, RowSet::train, kGradCheckStep);
        worst = std::max(worst, max_relative_error(analytic.values(), numeric.values()));
    }
    out << "gradcheck: " << trials << " trials, max relative error " << std::scientific << std::setprecision(3)
        << worst << std::defaultfloat << " (tolerance " << kGradCheckTolerance << ")\n";
    return worst <= kGradCheckTolerance ? kExitOk : kExitNumerical;
}

}  // namespace

std::string tool_version() { return "hbp 0.3.0"; }

ConfigValues parse_config(const fs::path& path) {
    std::ifstream file(path);
    if (!file) throw UsageError("cannot read config file " + path.string());
    ConfigValues values;
    std::string line;
    std::size_t number = 0;
    while (std::getline(file, line)) {
        ++number;
        std::string_view body = line;
        if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
        if (trim(body).empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw UsageError("config line " + std::to_string(number) + ": expected 'key = value'");
        }
        const std::string key = canonical_key(trim(body.substr(0, eq)));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty()) throw UsageError("config line " + std::to_string(number) + ": missing key");
        if (!is_option_key(key) && !is_manifest_key(key)) {
            throw UsageError("config line " + std::to_string(number) + ": unknown key '" + key + "'");
        }
        if (value.empty()) {
            throw UsageError("config line " + std::to_string(number) + ": missing value for '" + key + "'");
        }
        values[key] = ConfigEntry{value, number};
    }
    return values;
}

void apply_config_value(Options& opts, const std::string& key, const ConfigEntry& entry) {
    if (key == "function") opts.function = entry.value;
    else if (key == "optimizer") opts.optimizer = entry.value;
    else if (key == "hidden") opts.hidden = parse_number<std::size_t>(key, entry);
    else if (key == "samples") opts.samples = parse_number<std::size_t>(key, entry);
    else if (key == "train_fraction") opts.train_fraction = parse_number<double>(key, entry);
    else if (key == "seed") opts.seed = parse_number<std::uint64_t>(key, entry);
    else if (key == "eta") opts.eta = parse_number<double>(key, entry);
    else if (key == "epochs") opts.epochs = parse_number<std::size_t>(key, entry);
    else if (key == "max_iters") opts.max_iters = parse_number<std::size_t>(key, entry);
    else if (key == "grad_tol") opts.grad_tol = parse_number<double>(key, entry);
    else if (key == "c1") opts.c1 = parse_number<double>(key, entry);
    else if (key == "c2") opts.c2 = parse_number<double>(key, entry);
    else if (key == "out") opts.out = entry.value;
    else throw UsageError("config line " + std::to_string(entry.line) + ": unknown key '" + key + "'");
}

void validate(const Options& opts) {
    if (!find_function(opts.function)) {
        throw UsageError("invalid value '" + opts.function + "' for --function (expected beale or booth)");
    }
    if (opts.optimizer != "gd" && opts.optimizer != "bfgs") {
        throw UsageError("invalid value '" + opts.optimizer + "' for --optimizer (expected gd or bfgs)");
    }
    if (opts.hidden < 1) throw UsageError("--hidden must be >= 1");
    if (opts.samples < 10) throw UsageError("--samples must be >= 10");
    if (!(opts.train_fraction > 0.0 && opts.train_fraction < 1.0)) {
        throw UsageError("--train-fraction must lie in (0, 1)");
    }
    const auto split = std::llround(opts.train_fraction * static_cast<double>(opts.samples));
    if (split < 1 || split >= static_cast<long long>(opts.samples)) {
        throw UsageError("--train-fraction leaves an empty train or test split");
    }
    if (!(opts.eta > 0.0) || !std::isfinite(opts.eta)) throw UsageError("--eta must be positive");
    if (opts.epochs < 1) throw UsageError("--epochs must be >= 1");
    if (opts.max_iters < 1) throw UsageError("--max-iters must be >= 1");
    if (!(opts.grad_tol > 0.0)) throw UsageError("--grad-tol must be positive");
    if (!(0.0 < opts.c1 && opts.c1 < opts.c2 && opts.c2 < 1.0)) throw UsageError("need 0 < --c1 < --c2 < 1");
    if (opts.out.empty()) throw UsageError("--out must not be empty");
}

BenchConfig to_bench_config(const Options& opts) {
    BenchConfig cfg;
    cfg.function = *find_function(opts.function);
    cfg.n_samples = opts.samples;
    cfg.train_fraction = opts.train_fraction;
    cfg.seed = opts.seed;
    cfg.hidden = opts.hidden;
    cfg.optimizer = opts.optimizer == "gd" ? OptimizerKind::gd : OptimizerKind::bfgs;
    cfg.gd = GdConfig{opts.eta, opts.epochs, GdMode::online};
    cfg.stop = StopCriteria{opts.grad_tol, opts.max_iters, 0.0};
    cfg.wolfe.c1 = opts.c1;
    cfg.wolfe.c2 = opts.c2;
    return cfg;
}

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return ec == std::errc{} ? std::string(buf.data(), ptr) : std::string("nan");
}

void write_history_csv(const fs::path& path, const TrainReport& report) {
    auto file = open_for_write(path);
    file << "iter,train_error_pct,test_error_pct,grad_norm\n";
    for (const auto& row : report.history) {
        file << row.iter << ',' << format_double(row.train_error_pct) << ',' << format_double(row.test_error_pct)
             << ',' << format_double(row.grad_norm) << '\n';
    }
    if (!file) throw UsageError("failed writing " + path.string());
}

void write_comparison_csv(const fs::path& path, const Comparison& cmp) {
    auto file = open_for_write(path);
    file << "optimizer,train_error_pct,test_error_pct,iterations,wall_clock_s\n";
    for (const TrainReport* r : {&cmp.gd, &cmp.bfgs}) {
        file << to_string(r->optimizer) << ',' << format_double(r->train_error_pct) << ','
             << format_double(r->test_error_pct) << ',' << r->iterations << ',' << format_double(r->wall_clock_s)
             << '\n';
    }
    if (!file) throw UsageError("failed writing " + path.string());
}

void write_report(const fs::path& path, const Options& opts, const TrainReport& r) {
    auto file = open_for_write(path);
    file << "function = " << opts.function << '\n'
         << "optimizer = " << to_string(r.optimizer) << '\n'
         << "status = " << to_string(r.status) << '\n'
         << "iterations = " << r.iterations << '\n'
         << "train_error_pct = " << format_double(r.train_error_pct) << '\n'
         << "test_error_pct = " << format_double(r.test_error_pct) << '\n'
         << "train_rows = " << r.train_rows << '\n'
         << "test_rows = " << r.test_rows << '\n'
         << "wall_clock_s = " << format_double(r.wall_clock_s) << '\n'
         << "initial_param_hash = " << hex(r.initial_param_hash) << '\n'
         << "dataset_hash = " << hex(r.dataset_hash) << '\n';
    if (!file) throw UsageError("failed writing " + path.string());
}

void write_manifest(const fs::path& path, const std::string& command, const Options& opts,
                    const std::vector<std::string>& artifacts) {
    auto file = open_for_write(path);
    file << "tool_version = " << tool_version() << '\n'
         << "command = " << command << '\n'
         << "function = " << opts.function << '\n';
    if (!opts.optimizer.empty()) file << "optimizer = " << opts.optimizer << '\n';
    file << "hidden = " << opts.hidden << '\n'
         << "samples = " << opts.samples << '\n'
         << "train_fraction = " << format_double(opts.train_fraction) << '\n'
         << "seed = " << opts.seed << '\n'
         << "eta = " << format_double(opts.eta) << '\n'
         << "epochs = " << opts.epochs << '\n'
         << "max_iters = " << opts.max_iters << '\n'
         << "grad_tol = " << format_double(opts.grad_tol) << '\n'
         << "c1 = " << format_double(opts.c1) << '\n'
         << "c2 = " << format_double(opts.c2) << '\n'
         << "out = " << opts.out << '\n'
         << "artifacts =";
    for (const auto& a : artifacts) file << ' ' << a;
    file << '\n';
    if (!file) throw UsageError("failed writing " + path.string());
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hybrid back-propagation benchmarks: gradient descent vs BFGS", "hbp"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version());

    Options train_opts, bench_opts, compare_opts;
    FlagSet train_flags, bench_flags, compare_flags;
    auto* train = app.add_subcommand("train", "Train one network and write history/report/manifest");
    add_training_flags(*train, train_opts, train_flags);
    auto* bench = app.add_subcommand("bench", "Run `train` over both beale and booth");
    add_training_flags(*bench, bench_opts, bench_flags);
    auto* compare = app.add_subcommand("compare", "Train GD and BFGS from identical initial conditions");
    add_training_flags(*compare, compare_opts, compare_flags);

    std::size_t trials = 20;
    std::uint64_t gc_seed = 42;
    std::size_t gc_hidden = 0;
    bool sabotage = false;
    auto* gradcheck = app.add_subcommand("gradcheck", "Compare backprop gradients against finite differences");
    gradcheck->add_option("--trials", trials, "Number of random networks");
    gradcheck->add_option("--seed", gc_seed, "Base seed");
    gradcheck->add_option("--hidden", gc_hidden, "Hidden width (default: cycle 1..5)");
#ifdef HBP_ENABLE_TEST_HOOKS
    gradcheck->add_flag("--sabotage", sabotage)->group("");
#endif

    std::vector<std::string> storage;
    storage.reserve(args.size() + 1);
    storage.emplace_back("hbp");
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (train->parsed()) {
            resolve(train_opts, train_flags, "train", "");
            validate(train_opts);
            return cmd_train(train_opts, out);
        }
        if (bench->parsed()) {
            resolve(bench_opts, bench_flags, "bench", "function");
            validate(bench_opts);
            return cmd_bench(bench_opts, out);
        }
        if (compare->parsed()) {
            resolve(compare_opts, compare_flags, "compare", "optimizer");
            validate(compare_opts);
            return cmd_compare(compare_opts, out);
        }
        return cmd_gradcheck(trials, gc_seed, gc_hidden, sabotage, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\nRun with --help for usage.\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace hbp::cli
