// Copyright 2026 The qbarcode Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qbarcode/cli/commands.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "qbarcode/advantage.h"
#include "qbarcode/classifier.h"
#include "qbarcode/cli/grid.h"
#include "qbarcode/dataset.h"
#include "qbarcode/discrimination_bounds.h"
#include "qbarcode/errors.h"
#include "qbarcode/pattern_bounds.h"

namespace qbarcode::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char *kDeskFlipGrid = "0,0.02,0.04,0.06,0.08,0.1,0.12,0.14,0.16,0.18,0.2,0.25,0.3,0.35,0.4,0.45,0.5";

std::vector<OptionSpec> shared_options() {
    return {
        {"eta-b", "0.9", "transmissivity of a black pixel"},
        {"eta-w", "0.95", "transmissivity of a white pixel"},
        {"seed", "0", "root seed for every random draw"},
        {"format", "csv", "output format: csv or json"},
        {"scale", "desk", "desk or full"},
        {"out", "", "output path (stdout when empty)"},
    };
}

std::vector<OptionSpec> dataset_options() {
    return {
        {"dataset-dir", "", "directory with the MNIST IDX files (default: $QBARCODE_MNIST_DIR)"},
        {"threshold", "128", "grey level at or above which a pixel is white"},
    };
}

std::vector<OptionSpec> nn_curve_options() {
    auto out = dataset_options();
    out.push_back({"grid", "", "flip probabilities p (default: desk grid 0..0.2 step 0.02, then 0.25..0.5)"});
    out.push_back({"trials", "10", "noise trials per test image and p"});
    out.push_back({"test-size", "", "test images used (default 1000 at desk scale, 10000 at full scale)"});
    out.push_back({"train-size", "", "training images used (default: all)"});
    return out;
}

std::vector<OptionSpec> specific_options(std::string_view command) {
    if (command == "fidelity") {
        return {
            {"n-signal", "0.001,0.01,0.1,1", "mean photons per probe"},
            {"probes", "1", "number of probes M"},
            {"n-total", "", "optional total photon numbers for the M -> infinity table"},
        };
    }
    if (command == "bounds") {
        return {
            {"mode", "barcode", "barcode or kcpf"},
            {"n-pixels", "1,2,4,8,16", "pixel counts n"},
            {"k-whites", "", "white pixels k for kcpf mode (default n/2)"},
            {"probes", "1,2,5,10", "probe counts M"},
            {"fidelity", "0.5,0.9,0.99", "single-pixel fidelities F"},
            {"n-signal", "", "if set, also evaluate F_q and F_c of the pair at these N_S"},
        };
    }
    if (command == "advantage-map") {
        return {
            {"resolution", "101", "grid points per axis"},
            {"slice-resolution", "1001", "points on the eta_w = 1 slice"},
        };
    }
    if (command == "dataset-stats") {
        auto out = dataset_options();
        out.push_back({"split", "train", "train or test"});
        out.push_back({"limit", "", "use only the first images of the split"});
        out.push_back({"sampling", "all", "all or subsample"});
        out.push_back({"pairs", "1000000", "pairs drawn per class pair when subsampling"});
        return out;
    }
    if (command == "nn-curve") {
        return nn_curve_options();
    }
    if (command == "pipeline") {
        auto out = nn_curve_options();
        out.push_back({"curve", "", "nn-curve output (csv or json) to reuse instead of recomputing"});
        out.push_back({"n-total", "0,10,20,50,100,200,500,1000", "total photons per pixel"});
        out.push_back({"sources", "all", "comma list of QUANTUM_HELSTROM, CLASSICAL_HELSTROM, ..."});
        out.push_back({"photodet-mode", "exact", "exact or gaussian TMSV photodetection model"});
        return out;
    }
    throw UsageError("unknown command '" + std::string(command) + "'");
}

std::string json_to_text(const nlohmann::json &v, const std::string &key) {
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_number_integer() || v.is_number_unsigned()) {
        return v.dump();
    }
    if (v.is_number_float()) {
        return format_double(v.get<double>());
    }
    if (v.is_boolean()) {
        return v.get<bool>() ? "true" : "false";
    }
    if (v.is_array()) {
        std::string out;
        for (size_t i = 0; i < v.size(); i++) {
            out += (i ? "," : "") + json_to_text(v[i], key);
        }
        return out;
    }
    throw UsageError("config key '" + key + "' has an unsupported value type");
}

std::string normalize_key(std::string key) {
    for (char &c : key) {
        if (c == '_') {
            c = '-';
        }
    }
    return key;
}

std::string dataset_dir(const RunConfig &config) {
    std::string dir = config.text("dataset-dir");
    if (dir.empty()) {
        if (const char *env = std::getenv("QBARCODE_MNIST_DIR")) {
            dir = env;
        }
    }
    if (dir.empty()) {
        throw UsageError("--dataset-dir: no dataset directory given and QBARCODE_MNIST_DIR is unset");
    }
    return dir;
}

uint8_t threshold(const RunConfig &config) {
    int64_t t = config.integer("threshold");
    if (t < 0 || t > 255) {
        throw UsageError("--threshold: must lie in 0..255");
    }
    return uint8_t(t);
}

std::optional<size_t> optional_size(const RunConfig &config, const std::string &key) {
    if (config.text(key).empty()) {
        return std::nullopt;
    }
    int64_t v = config.integer(key);
    if (v < 1) {
        throw UsageError("--" + key + ": must be positive");
    }
    return size_t(v);
}

LabeledDataset load_split(const RunConfig &config, DatasetRole role, std::optional<size_t> limit) {
    std::string dir = dataset_dir(config);
    auto paths = find_mnist(dir);
    if (!paths) {
        throw ParseError(dir, 0, "MNIST IDX files (train-images-idx3-ubyte[.gz], ...) not found");
    }
    auto data = role == DatasetRole::TRAIN ? load_idx(paths->train_images, paths->train_labels)
                                           : load_idx(paths->test_images, paths->test_labels);
    return binarize_dataset(data, role, threshold(config), limit);
}

bool full_scale(const RunConfig &config) {
    const auto &s = config.text("scale");
    if (s != "desk" && s != "full") {
        throw UsageError("--scale: expected desk or full");
    }
    return s == "full";
}

NoisyErrorCurve compute_nn_curve(const RunConfig &config) {
    auto grid = config.text("grid").empty() ? parse_grid(kDeskFlipGrid, "grid") : config.grid("grid");
    int64_t trials = config.integer("trials");
    if (trials < 1) {
        throw UsageError("--trials: must be positive");
    }
    size_t test_size = optional_size(config, "test-size").value_or(full_scale(config) ? 10000 : 1000);
    auto train = load_split(config, DatasetRole::TRAIN, optional_size(config, "train-size"));
    auto test = load_split(config, DatasetRole::TEST, test_size);
    return noisy_error_curve(train, test, grid, int(trials), uint64_t(config.integer("seed")), config.threads);
}

Table curve_table(const NoisyErrorCurve &curve) {
    Table t{"noisy_error_curve", {"p", "error", "standard_error", "trials", "wrong"}, {}};
    for (const auto &pt : curve.points) {
        t.add_row({pt.p, pt.error, pt.standard_error, pt.trials, pt.wrong});
    }
    return t;
}

NoisyErrorCurve read_curve(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path, 0, "cannot open curve file");
    }
    TextTable table = path.ends_with(".json") ? read_json_table(in, "noisy_error_curve", path)
                                              : read_csv_table(in, "noisy_error_curve", path);
    NoisyErrorCurve curve;
    try {
        size_t p = table.column("p");
        size_t e = table.column("error");
        size_t se = table.column("standard_error");
        size_t tr = table.column("trials");
        size_t wr = table.column("wrong");
        for (const auto &row : table.rows) {
            curve.points.push_back({parse_double(row[p], "curve"), parse_double(row[e], "curve"),
                                    parse_double(row[se], "curve"), parse_integer(row[tr], "curve"),
                                    parse_integer(row[wr], "curve")});
        }
    } catch (const std::out_of_range &ex) {
        throw ParseError(path, 0, ex.what());
    } catch (const UsageError &ex) {
        throw ParseError(path, 0, ex.what());
    }
    if (curve.points.empty()) {
        throw ParseError(path, 0, "curve table is empty");
    }
    return curve;
}

std::vector<PipelineSource> parse_sources(const std::string &text) {
    std::vector<PipelineSource> all = {PipelineSource::QUANTUM_HELSTROM, PipelineSource::CLASSICAL_HELSTROM,
                                       PipelineSource::QUANTUM_PHOTODET, PipelineSource::CLASSICAL_PHOTODET};
    if (text == "all") {
        return all;
    }
    std::vector<PipelineSource> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto s = parse_pipeline_source(item);
        if (!s) {
            throw UsageError("--sources: unknown source '" + item + "'");
        }
        out.push_back(*s);
    }
    return out;
}

Document start(const RunConfig &config) {
    Document doc;
    doc.command = config.command;
    doc.config = config.metadata();
    return doc;
}

}  // namespace

const std::string &RunConfig::text(const std::string &key) const {
    auto it = values.find(key);
    if (it == values.end()) {
        throw UsageError("--" + key + ": not an option of '" + command + "'");
    }
    return it->second;
}

bool RunConfig::has(const std::string &key) const {
    auto it = values.find(key);
    return it != values.end() && !it->second.empty();
}

double RunConfig::real(const std::string &key) const {
    return parse_double(text(key), key);
}

int64_t RunConfig::integer(const std::string &key) const {
    return parse_integer(text(key), key);
}

std::vector<double> RunConfig::grid(const std::string &key) const {
    return parse_grid(text(key), key);
}

std::vector<int64_t> RunConfig::integer_grid(const std::string &key) const {
    return parse_integer_grid(text(key), key);
}

TransmissivityPair RunConfig::pair() const {
    double b = real("eta-b");
    double w = real("eta-w");
    if (!(b >= 0 && b <= 1)) {
        throw UsageError("--eta-b: must lie in [0, 1]");
    }
    if (!(w >= 0 && w <= 1)) {
        throw UsageError("--eta-w: must lie in [0, 1]");
    }
    return TransmissivityPair(b, w);
}

nlohmann::json RunConfig::metadata() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto &[k, v] : values) {
        if (k == "out" || k == "format") {
            continue;
        }
        j[k] = v;
    }
    return j;
}

std::vector<OptionSpec> command_options(std::string_view command) {
    auto out = shared_options();
    for (auto &o : specific_options(command)) {
        out.push_back(std::move(o));
    }
    return out;
}

std::vector<std::string> command_names() {
    return {"fidelity", "bounds", "advantage-map", "dataset-stats", "nn-curve", "pipeline"};
}

Document cmd_fidelity(const RunConfig &config) {
    auto pair = config.pair();
    auto d = delta_coefficients(pair);
    Document doc = start(config);
    Table t{"fidelity",
            {"n_signal", "probes", "n_total", "delta_q", "delta_c", "fidelity_quantum", "fidelity_classical",
             "power_quantum", "power_classical", "asymptotic_quantum", "asymptotic_classical"},
            {}};
    for (double ns : config.grid("n-signal")) {
        for (int64_t m : config.integer_grid("probes")) {
            auto budget = ProbeBudget::finite(ns, m);
            double fq = fidelity_quantum(ns, pair);
            double fc = fidelity_classical(ns, pair);
            t.add_row({ns, m, budget.n_total, d.delta_q, d.delta_c, fq, fc,
                       std::exp(-double(m) * std::log1p(ns * d.delta_q)), std::exp(-double(m) * ns * d.delta_c),
                       asymptotic_fidelity_power(budget.n_total, d.delta_q),
                       asymptotic_fidelity_power(budget.n_total, d.delta_c)});
        }
    }
    doc.tables.push_back(std::move(t));
    if (config.has("n-total")) {
        Table a{"asymptotic", {"n_total", "asymptotic_quantum", "asymptotic_classical"}, {}};
        for (double n : config.grid("n-total")) {
            a.add_row({n, asymptotic_fidelity_power(n, d.delta_q), asymptotic_fidelity_power(n, d.delta_c)});
        }
        doc.tables.push_back(std::move(a));
    }
    return doc;
}

Document cmd_bounds(const RunConfig &config) {
    const auto &mode = config.text("mode");
    if (mode != "barcode" && mode != "kcpf") {
        throw UsageError("--mode: expected barcode or kcpf");
    }
    struct FidelityCase {
        std::string family;
        double n_signal;
        double f;
    };
    std::vector<FidelityCase> cases;
    for (double f : config.grid("fidelity")) {
        cases.push_back({"given", kNaN, f});
    }
    if (config.has("n-signal")) {
        auto pair = config.pair();
        for (double ns : config.grid("n-signal")) {
            cases.push_back({"quantum", ns, fidelity_quantum(ns, pair)});
            cases.push_back({"classical", ns, fidelity_classical(ns, pair)});
        }
    }
    Document doc = start(config);
    if (mode == "barcode") {
        Table t{"barcode_bounds",
                {"n_pixels", "probes", "family", "n_signal", "fidelity", "pairwise_sum", "global_lower",
                 "global_upper", "log_global_lower", "log_global_upper", "simplified_lower", "simplified_upper",
                 "log_simplified_lower", "log_simplified_upper", "local_lower", "local_upper", "log_local_lower",
                 "log_local_upper"},
                {}};
        for (int64_t n : config.integer_grid("n-pixels")) {
            for (int64_t m : config.integer_grid("probes")) {
                for (const auto &c : cases) {
                    BarcodeSpec spec{n, m, c.f};
                    auto g = barcode_error_bounds(spec);
                    auto s = barcode_error_bounds_simplified(spec);
                    auto l = local_measurement_bounds(spec);
                    t.add_row({n, m, c.family, c.n_signal, c.f, pairwise_fidelity_sum(n, c.f), g.lower, g.upper,
                               g.log_lower, g.log_upper, s.lower, s.upper, s.log_lower, s.log_upper, l.lower,
                               l.upper, l.log_lower, l.log_upper});
                }
            }
        }
        doc.tables.push_back(std::move(t));
        return doc;
    }
    Table t{"kcpf_bounds",
            {"n_pixels", "k_whites", "probes", "family", "n_signal", "fidelity", "pairwise_sum", "lower", "upper",
             "log_lower", "log_upper", "asymptotic_lower", "asymptotic_upper", "log_asymptotic_lower",
             "log_asymptotic_upper"},
            {}};
    for (int64_t n : config.integer_grid("n-pixels")) {
        std::vector<int64_t> ks = config.has("k-whites") ? config.integer_grid("k-whites") : std::vector<int64_t>{n / 2};
        for (int64_t k : ks) {
            if (k < 1 || k > n - 1) {
                throw UsageError("--k-whites: k = " + std::to_string(k) + " is outside 1..n-1 for n = " +
                                 std::to_string(n));
            }
            for (int64_t m : config.integer_grid("probes")) {
                for (const auto &c : cases) {
                    auto b = kcpf_error_bounds(n, k, c.f, m);
                    t.add_row({n, k, m, c.family, c.n_signal, c.f, kcpf_pairwise_sum(n, k, c.f), b.exact.lower,
                               b.exact.upper, b.exact.log_lower, b.exact.log_upper, b.asymptotic.lower,
                               b.asymptotic.upper, b.asymptotic.log_lower, b.asymptotic.log_upper});
                }
            }
        }
    }
    doc.tables.push_back(std::move(t));
    return doc;
}

Document cmd_advantage_map(const RunConfig &config) {
    Document doc = start(config);
    Table grid{"nu_threshold_grid", {"eta_b", "eta_w", "nu_threshold"}, {}};
    for (const auto &pt : advantage_region_grid(int(config.integer("resolution")))) {
        grid.add_row({pt.eta_b, pt.eta_w, pt.nu_threshold});
    }
    Table slice{"eta_w_one_slice", {"eta_b", "eta_w", "nu_threshold"}, {}};
    for (const auto &pt : advantage_eta_w_one_slice(int(config.integer("slice-resolution")))) {
        slice.add_row({pt.eta_b, pt.eta_w, pt.nu_threshold});
    }
    doc.tables.push_back(std::move(grid));
    doc.tables.push_back(std::move(slice));
    return doc;
}

Document cmd_dataset_stats(const RunConfig &config) {
    const auto &split = config.text("split");
    if (split != "train" && split != "test") {
        throw UsageError("--split: expected train or test");
    }
    const auto &sampling_name = config.text("sampling");
    PairSampling sampling;
    if (sampling_name == "all") {
        sampling = PairSampling::all_pairs();
    } else if (sampling_name == "subsample") {
        int64_t pairs = config.integer("pairs");
        if (pairs < 1) {
            throw UsageError("--pairs: must be positive");
        }
        sampling = PairSampling::subsample(uint64_t(pairs), uint64_t(config.integer("seed")));
    } else {
        throw UsageError("--sampling: expected all or subsample");
    }
    auto dataset =
        load_split(config, split == "train" ? DatasetRole::TRAIN : DatasetRole::TEST, optional_size(config, "limit"));
    auto stats = class_pair_statistics(dataset, sampling, config.threads);

    Document doc = start(config);
    if (stats.cross_class_duplicates > 0) {
        doc.warnings.push_back(std::to_string(stats.cross_class_duplicates) +
                               " cross-class image pairs are identical after binarization (h = 0)");
    }
    for (int c : stats.empty_classes) {
        doc.warnings.push_back("class " + std::to_string(c) + " has no images; its pairs are skipped");
    }
    Table pairs{"class_pairs", {"class_a", "class_b", "pairs", "mu", "sigma", "h_min"}, {}};
    Table hist{"histograms", {"class_a", "class_b", "h", "count", "probability"}, {}};
    int64_t h_min = -1;
    for (size_t i = 0; i < stats.histograms.size(); i++) {
        const auto &h = stats.histograms[i];
        const auto &s = stats.summaries[i];
        pairs.add_row({int64_t(h.class_a), int64_t(h.class_b), int64_t(h.total()), s.mu, s.sigma, s.h_min});
        if (s.h_min >= 0 && (h_min < 0 || s.h_min < h_min)) {
            h_min = s.h_min;
        }
        auto probs = h.normalized();
        for (size_t d = 0; d < h.counts.size(); d++) {
            if (h.counts[d] != 0) {
                hist.add_row({int64_t(h.class_a), int64_t(h.class_b), int64_t(d), int64_t(h.counts[d]), probs[d]});
            }
        }
    }
    Table summary{"dataset", {"images", "classes", "h_min", "cross_class_duplicates", "exact"}, {}};
    summary.add_row({int64_t(dataset.size()), int64_t(dataset.num_classes()), h_min,
                     int64_t(stats.cross_class_duplicates),
                     std::string(sampling.kind == PairSampling::Kind::ALL_PAIRS ? "true" : "false")});
    doc.tables.push_back(std::move(summary));
    doc.tables.push_back(std::move(pairs));
    doc.tables.push_back(std::move(hist));
    return doc;
}

Document cmd_nn_curve(const RunConfig &config) {
    full_scale(config);
    Document doc = start(config);
    doc.tables.push_back(curve_table(compute_nn_curve(config)));
    return doc;
}

Document cmd_pipeline(const RunConfig &config) {
    auto pair = config.pair();
    const auto &mode_name = config.text("photodet-mode");
    PhotodetMode mode;
    if (mode_name == "exact") {
        mode = PhotodetMode::EXACT_SUM;
    } else if (mode_name == "gaussian") {
        mode = PhotodetMode::GAUSSIAN_APPROX;
    } else {
        throw UsageError("--photodet-mode: expected exact or gaussian");
    }
    auto sources = parse_sources(config.text("sources"));
    auto n_grid = config.grid("n-total");
    full_scale(config);

    Document doc = start(config);
    bool fresh = !config.has("curve");
    NoisyErrorCurve raw = fresh ? compute_nn_curve(config) : read_curve(config.text("curve"));
    auto fitted = MonotoneCurve::fit(raw);
    auto curves = compose_pipeline(fitted, pair, n_grid, sources, mode);

    Table t{"pipeline", {"source", "n_total", "p_lower", "p_upper", "e_lower", "e_upper", "e_photodet"}, {}};
    for (const auto &c : curves) {
        for (const auto &pt : c.points) {
            t.add_row({std::string(pipeline_source_name(c.source)), pt.n_total, pt.p_lower, pt.p_upper, pt.e_lower,
                       pt.e_upper, pt.e_photodet});
        }
    }
    Table fit{"fitted_curve", {"p", "error"}, {}};
    for (size_t i = 0; i < fitted.x().size(); i++) {
        fit.add_row({fitted.x()[i], fitted.y()[i]});
    }
    doc.tables.push_back(std::move(t));
    doc.tables.push_back(std::move(fit));
    if (fresh) {
        doc.tables.push_back(curve_table(raw));
    }
    return doc;
}

Document run_command(const RunConfig &config) {
    const auto &c = config.command;
    if (c == "fidelity") {
        return cmd_fidelity(config);
    }
    if (c == "bounds") {
        return cmd_bounds(config);
    }
    if (c == "advantage-map") {
        return cmd_advantage_map(config);
    }
    if (c == "dataset-stats") {
        return cmd_dataset_stats(config);
    }
    if (c == "nn-curve") {
        return cmd_nn_curve(config);
    }
    if (c == "pipeline") {
        return cmd_pipeline(config);
    }
    throw UsageError("unknown command '" + c + "'");
}

namespace {

std::string command_summary(std::string_view command) {
    static const std::map<std::string_view, std::string> summaries{
        {"fidelity", "TMSV and coherent-state fidelities and their asymptotic powers"},
        {"bounds", "barcode or k-CPF error-probability bounds"},
        {"advantage-map", "nu_th over the (eta_b, eta_w) square and the eta_w = 1 slice"},
        {"dataset-stats", "cross-class Hamming histograms of a binarized IDX dataset"},
        {"nn-curve", "nearest-neighbor error versus pixel flip probability"},
        {"pipeline", "classification error versus photons per pixel for each readout"},
    };
    return summaries.at(command);
}

}  // namespace

int run_cli(int argc, char **argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Quantum-enhanced barcode decoding and pattern recognition bounds", "qbarcode"};
    app.require_subcommand(1);
    std::map<std::string, std::map<std::string, std::string>> flag_values;
    std::map<std::string, std::string> config_paths;
    std::map<std::string, int> threads;
    for (const auto &name : command_names()) {
        auto *sub = app.add_subcommand(name, command_summary(name));
        auto &values = flag_values[name];
        for (const auto &opt : command_options(name)) {
            sub->add_option("--" + opt.name, values[opt.name], opt.help + " [default: " + opt.default_value + "]");
        }
        sub->add_option("--config", config_paths[name], "JSON file supplying any option; flags override it");
        threads[name] = 0;
        sub->add_option("--threads", threads[name], "worker threads (0 = all cores)");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        CLI::App *sub = app.get_subcommands().front();
        RunConfig config;
        config.command = sub->get_name();
        config.threads = threads[config.command];
        if (config.threads < 0) {
            throw UsageError("--threads: must be non-negative");
        }
        auto options = command_options(config.command);
        for (const auto &opt : options) {
            config.values[opt.name] = opt.default_value;
        }
        const auto &config_path = config_paths[config.command];
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                throw ParseError(config_path, 0, "cannot open config file");
            }
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(in);
            } catch (const nlohmann::json::parse_error &e) {
                throw ParseError(config_path, e.byte, e.what());
            }
            if (!j.is_object()) {
                throw ParseError(config_path, 0, "config must be a JSON object");
            }
            for (const auto &[k, v] : j.items()) {
                std::string key = normalize_key(k);
                if (key == "threads") {
                    if (sub->count("--threads") == 0) {
                        config.threads = int(parse_integer(json_to_text(v, key), key));
                    }
                    continue;
                }
                if (key == "command") {
                    continue;
                }
                if (!config.values.count(key)) {
                    throw UsageError("config key '" + k + "' is not an option of '" + config.command + "'");
                }
                config.values[key] = json_to_text(v, key);
            }
        }
        for (const auto &opt : options) {
            if (sub->count("--" + opt.name) > 0) {
                config.values[opt.name] = flag_values[config.command][opt.name];
            }
        }
        const auto &format = config.text("format");
        if (format != "csv" && format != "json") {
            throw UsageError("--format: expected csv or json");
        }

        Document doc = run_command(config);
        for (const auto &w : doc.warnings) {
            err << "warning: " << w << "\n";
        }
        std::ostringstream buffer;
        if (format == "csv") {
            write_csv(buffer, doc);
        } else {
            write_json(buffer, doc);
        }
        const auto &out_path = config.text("out");
        if (out_path.empty()) {
            out << buffer.str();
        } else {
            std::ofstream f(out_path, std::ios::binary);
            if (!f || !(f << buffer.str())) {
                throw ParseError(out_path, 0, "cannot write output file");
            }
        }
        return kExitOk;
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError &e) {
        err << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const DomainError &e) {
        err << "numeric domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const ExtrapolationError &e) {
        err << "numeric domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const IncompleteInputError &e) {
        err << "numeric domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace qbarcode::cli
