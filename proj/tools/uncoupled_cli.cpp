// Command-line front end: synthetic sweeps, benchmark runs, weight tuning and
// the Monte-Carlo property checks.

#include "uncoupled/dataio.hpp"
#include "uncoupled/distributions.hpp"
#include "uncoupled/errors.hpp"
#include "uncoupled/eval.hpp"
#include "uncoupled/ra.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace uncoupled;

constexpr std::uint64_t kDefaultSeed = 20190530;

struct ExperimentFlags {
    std::string preset;
    std::vector<std::string> methods;
    Eigen::Index n_u = 0;
    std::vector<Eigen::Index> n_r;
    int repeats = 0;
    std::uint64_t seed = kDefaultSeed;
    double noise_std = 0.1;
    int dim = 5;
    Eigen::Index test_size = 1000;
    int jobs = 1;
    std::string lambda_mode = "average";
    bool empirical_cdf = false;
    double ranker_reg = 1e-4;
    std::string output;
    std::string plot_data;
};

void add_experiment_flags(CLI::App* cmd, ExperimentFlags& f, bool synthetic)
{
    cmd->add_option("--preset", f.preset,
                    "desk: n_U=20000, n_R in {100,1000,5000}, 20 repeats; "
                    "full: n_U=100000, n_R 20..10240, 100 repeats (default)")
        ->check(CLI::IsMember({"desk", "full"}));
    cmd->add_option("--methods", f.methods, "Subset of lr, rank, ra, tt (default: all)")
        ->delimiter(',');
    if (synthetic) {
        cmd->add_option("--n-u", f.n_u, "Unlabeled sample size")->check(CLI::PositiveNumber);
        cmd->add_option("--noise-std", f.noise_std, "Target noise standard deviation")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--dim", f.dim, "Feature dimension")->check(CLI::PositiveNumber);
        cmd->add_option("--test-size", f.test_size, "Held-out test size")->check(CLI::PositiveNumber);
    }
    cmd->add_option("--n-r", f.n_r, "Comparison counts (repeatable or comma separated)")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    cmd->add_option("--repeats", f.repeats, "Repeats per cell")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", f.seed, "Base seed")->capture_default_str();
    cmd->add_option("--jobs", f.jobs, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--lambda-mode", f.lambda_mode,
                    "RA lambda: average = (w1+w2)/2, optimal = two-stage variance-optimal")
        ->check(CLI::IsMember({"average", "optimal"}));
    cmd->add_flag("--empirical-cdf", f.empirical_cdf,
                  "Replace f_Y by the empirical CDF of the available targets");
    cmd->add_option("--ranker-reg", f.ranker_reg, "RANK baseline L2 strength")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("-o,--output", f.output, "Result CSV path (default: stdout only)");
    cmd->add_option("--plot-data", f.plot_data, "Whitespace table for gnuplot");
}

ExperimentSpec build_spec(const ExperimentFlags& f)
{
    ExperimentSpec spec;
    if (f.preset == "desk") {
        spec.n_u = 20000;
        spec.n_r_values = {100, 1000, 5000};
        spec.repeats = 20;
    }
    if (!f.methods.empty()) {
        spec.methods.clear();
        for (const auto& m : f.methods)
            spec.methods.push_back(parse_method(m));
    }
    if (f.n_u > 0)
        spec.n_u = f.n_u;
    if (!f.n_r.empty())
        spec.n_r_values = f.n_r;
    if (f.repeats > 0)
        spec.repeats = f.repeats;
    spec.seed = f.seed;
    spec.noise_std = f.noise_std;
    spec.dim = f.dim;
    spec.test_size = f.test_size;
    spec.jobs = f.jobs;
    spec.lambda_mode = f.lambda_mode == "optimal" ? LambdaMode::Optimal : LambdaMode::Average;
    spec.use_empirical_cdf = f.empirical_cdf;
    spec.ranker_reg = f.ranker_reg;
    return spec;
}

std::string join_methods(const ExperimentSpec& spec)
{
    std::string out;
    for (auto m : spec.methods) {
        if (!out.empty())
            out += ' ';
        out += method_name(m);
    }
    return out;
}

std::string join_nr(const ExperimentSpec& spec)
{
    std::string out;
    for (auto n : spec.n_r_values) {
        if (!out.empty())
            out += ' ';
        out += std::to_string(n);
    }
    return out;
}

CsvMetadata base_metadata(std::string_view command, const ExperimentSpec& spec)
{
    return {
        {"uncoupled", std::string(library_version())},
        {"command", std::string(command)},
        {"seed", std::to_string(spec.seed)},
        {"methods", join_methods(spec)},
        {"n_r", join_nr(spec)},
        {"repeats", std::to_string(spec.repeats)},
        {"lambda_mode", spec.lambda_mode == LambdaMode::Optimal ? "optimal" : "average"},
        {"empirical_cdf", spec.use_empirical_cdf ? "true" : "false"},
        {"ranker_reg", format_double(spec.ranker_reg)},
        {"std_mse", "sample std over repeats (divisor repeats-1); 0 when a single repeat succeeded"},
    };
}

template <class Writer>
void write_file(const std::string& path, Writer&& writer)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    writer(out);
    if (!out)
        throw IoError("failed writing '" + path + "'");
}

int emit_results(const ResultTable& table, const CsvMetadata& metadata, const ExperimentFlags& f)
{
    print_result_table(std::cout, table);
    if (!f.output.empty())
        write_file(f.output, [&](std::ostream& out) { write_result_csv(out, table, metadata); });
    if (!f.plot_data.empty())
        write_file(f.plot_data, [&](std::ostream& out) { write_plot_data(out, table); });
    return 0;
}

struct BenchFlags {
    std::string data;
    std::string target = "-1";
    std::vector<std::string> categorical;
    bool no_header = false;
    char delimiter = ',';
    bool standardize = false;
    bool fit_intercept = true;
    double test_fraction = 0.2;
};

struct TuneFlags {
    std::string dist;
    double a = 0.0, b = 1.0, mean = 0.0, std = 1.0;
    std::string targets_file;
    RaTuning tuning;
    std::string output;
};

struct CheckFlags {
    std::vector<std::string> only;
    std::uint64_t seed = kDefaultSeed;
    std::string output;
};

std::vector<double> read_values(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read '" + path + "'");
    std::vector<double> values;
    std::string token;
    std::size_t line_no = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        for (char& c : line)
            if (c == ',' || c == ';' || c == '\t' || c == '\r')
                c = ' ';
        std::istringstream words(line);
        while (words >> token) {
            try {
                std::size_t used = 0;
                const double v = std::stod(token, &used);
                if (used != token.size())
                    throw std::invalid_argument(token);
                values.push_back(v);
            } catch (const std::exception&) {
                // A non-numeric first line is a header.
                if (line_no == 1 && values.empty())
                    break;
                throw IoError(path + ":" + std::to_string(line_no) + ": bad value '" + token + "'");
            }
        }
    }
    if (values.empty())
        throw EmptyDataError("no target values in '" + path + "'");
    return values;
}

int run_tune(const TuneFlags& f)
{
    RiskConfig cfg;
    std::string source;
    if (!f.targets_file.empty()) {
        const auto values = read_values(f.targets_file);
        cfg = tune_weights_empirical(values, f.tuning);
        source = "empirical:" + f.targets_file;
    } else {
        DistributionPtr dist;
        if (f.dist == "uniform") {
            dist = uniform_distribution(f.a, f.b);
            source = "uniform(" + format_double(f.a) + "," + format_double(f.b) + ")";
        } else if (f.dist == "gaussian") {
            dist = gaussian_distribution(f.mean, f.std);
            source = "gaussian(" + format_double(f.mean) + "," + format_double(f.std) + ")";
        } else {
            throw ParameterError("tune needs --dist or --targets-file");
        }
        cfg = tune_weights(*dist, f.tuning);
    }
    std::cout << "w1 = " << format_double(cfg.w1) << "\nw2 = " << format_double(cfg.w2)
              << "\nlambda = " << format_double(cfg.lambda) << '\n';
    if (!f.output.empty())
        write_file(f.output, [&](std::ostream& out) {
            out << "# uncoupled=" << library_version() << "\n# source=" << source
                << "\n# n_split=" << f.tuning.n_split << "\nw1,w2,lambda\n"
                << format_double(cfg.w1) << ',' << format_double(cfg.w2) << ','
                << format_double(cfg.lambda) << '\n';
        });
    return 0;
}

int run_check(const CheckFlags& f)
{
    const auto lines = run_checks(f.only, f.seed);
    bool all = true;
    for (const auto& l : lines) {
        std::cout << (l.passed ? "PASS " : "FAIL ") << l.check << ' ' << l.statistic << " = "
                  << format_double(l.value) << ' ' << l.relation << ' ' << format_double(l.tolerance)
                  << '\n';
        all = all && l.passed;
    }
    if (!f.output.empty())
        write_file(f.output, [&](std::ostream& out) {
            out << "# uncoupled=" << library_version() << "\n# seed=" << f.seed
                << "\ncheck,statistic,value,relation,tolerance,passed\n";
            for (const auto& l : lines)
                out << l.check << ',' << l.statistic << ',' << format_double(l.value) << ','
                    << l.relation << ',' << format_double(l.tolerance) << ','
                    << (l.passed ? "true" : "false") << '\n';
        });
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Uncoupled regression from pairwise comparisons"};
    app.set_version_flag("--version", std::string(library_version()));
    app.require_subcommand(1);

    ExperimentFlags synth_flags;
    auto* synth = app.add_subcommand("synth", "Synthetic n_R sweep comparing LR, RANK, RA and TT");
    add_experiment_flags(synth, synth_flags, true);

    ExperimentFlags bench_flags;
    BenchFlags bench_opts;
    auto* bench = app.add_subcommand("bench", "Repeated 80/20 benchmark on a CSV dataset");
    add_experiment_flags(bench, bench_flags, false);
    bench->add_option("--data", bench_opts.data, "CSV file")->required();
    bench->add_option("--target", bench_opts.target, "Target column name or index (default: last)");
    bench->add_option("--categorical", bench_opts.categorical, "One-hot encoded columns")
        ->delimiter(',');
    bench->add_flag("--no-header", bench_opts.no_header, "The CSV has no header row");
    bench->add_option("--delimiter", bench_opts.delimiter, "Field delimiter");
    bench->add_flag("--standardize", bench_opts.standardize,
                    "Standardize features with training statistics");
    bench->add_flag("!--no-intercept", bench_opts.fit_intercept, "Fit models without a bias term");
    bench->add_option("--test-fraction", bench_opts.test_fraction, "Held-out fraction")
        ->check(CLI::Range(0.01, 0.99));

    TuneFlags tune_flags;
    auto* tune = app.add_subcommand("tune", "Minimize Err(w1, w2) for a target distribution");
    tune->add_option("--dist", tune_flags.dist, "Analytic target distribution")
        ->check(CLI::IsMember({"uniform", "gaussian"}));
    tune->add_option("--a", tune_flags.a, "Uniform lower bound");
    tune->add_option("--b", tune_flags.b, "Uniform upper bound");
    tune->add_option("--mean", tune_flags.mean, "Gaussian mean");
    tune->add_option("--std", tune_flags.std, "Gaussian standard deviation");
    tune->add_option("--targets-file", tune_flags.targets_file,
                     "Target values (one or more per line); uses the empirical objective");
    tune->add_option("--n-split", tune_flags.tuning.n_split, "Grid intervals")
        ->check(CLI::PositiveNumber);
    tune->add_option("--rounds", tune_flags.tuning.grid_rounds, "Zoom rounds")
        ->check(CLI::PositiveNumber);
    tune->add_option("--points", tune_flags.tuning.grid_points_per_axis, "Grid points per axis")
        ->check(CLI::Range(3, 100001));
    tune->add_option("--bound", tune_flags.tuning.weight_search_bound,
                     "Half-width of the weight search box (default: from the target range)");
    tune->add_option("-o,--output", tune_flags.output, "CSV path");

    CheckFlags check_flags;
    auto* check = app.add_subcommand("check", "Monte-Carlo property checks");
    check->add_option("--only", check_flags.only, "lemma1, theorem1, counterexample, unbiasedness")
        ->delimiter(',');
    check->add_option("--seed", check_flags.seed, "Seed")->capture_default_str();
    check->add_option("-o,--output", check_flags.output, "CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*synth) {
            const ExperimentSpec spec = build_spec(synth_flags);
            auto metadata = base_metadata("synth", spec);
            metadata.insert(metadata.begin() + 4, {"n_u", std::to_string(spec.n_u)});
            metadata.emplace_back("dim", std::to_string(spec.dim));
            metadata.emplace_back("noise_std", format_double(spec.noise_std));
            metadata.emplace_back("test_size", std::to_string(spec.test_size));
            return emit_results(run_synthetic(spec), metadata, synth_flags);
        }
        if (*bench) {
            ExperimentSpec spec = build_spec(bench_flags);
            if (bench_flags.n_r.empty() && bench_flags.preset.empty())
                spec.n_r_values = {5000};
            spec.standardize = bench_opts.standardize;
            spec.fit_intercept = bench_opts.fit_intercept;
            spec.test_fraction = bench_opts.test_fraction;

            CsvSchema schema;
            schema.target_column = ColumnRef::parse(bench_opts.target);
            for (const auto& c : bench_opts.categorical)
                schema.categorical_columns.push_back(ColumnRef::parse(c));
            schema.has_header = !bench_opts.no_header;
            schema.delimiter = bench_opts.delimiter;
            const LoadedCsv loaded = load_csv(bench_opts.data, schema);
            if (loaded.dropped_rows > 0)
                std::cerr << "dropped " << loaded.dropped_rows << " row(s) with missing values\n";

            auto metadata = base_metadata("bench", spec);
            metadata.insert(metadata.begin() + 2, {"data", bench_opts.data});
            metadata.emplace_back("rows", std::to_string(loaded.data.rows()));
            metadata.emplace_back("dropped_rows", std::to_string(loaded.dropped_rows));
            metadata.emplace_back("features", std::to_string(loaded.data.dim()));
            metadata.emplace_back("test_fraction", format_double(spec.test_fraction));
            metadata.emplace_back("standardize", spec.standardize ? "true" : "false");
            metadata.emplace_back("intercept", spec.fit_intercept ? "true" : "false");
            return emit_results(run_benchmark(loaded.data, spec), metadata, bench_flags);
        }
        if (*tune)
            return run_tune(tune_flags);
        if (*check)
            return run_check(check_flags);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
