// Command-line front end: pair selection, calibration, batch runs, hashing
// and the duplication experiment.
//
// Exit codes: 0 success, 1 data/runtime error, 2 usage error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dualcascade/calibration.hpp"
#include "dualcascade/cascade.hpp"
#include "dualcascade/complementarity.hpp"
#include "dualcascade/error.hpp"
#include "dualcascade/metering.hpp"
#include "dualcascade/phash.hpp"
#include "dualcascade/records.hpp"

namespace fs = std::filesystem;
using namespace dualcascade;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string stem(const std::string& path) { return fs::path(path).stem().string(); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << text;
}

std::string num(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

// ---- complementarity -------------------------------------------------------

struct ComplementarityArgs {
    std::vector<std::string> files;
    std::string out;
};

int cmd_complementarity(const ComplementarityArgs& args) {
    if (args.files.size() < 2) throw UsageError("complementarity needs at least 2 record files");
    std::vector<NamedRecords> models;
    for (const auto& f : args.files) models.push_back({stem(f), load_prediction_records(f)});
    const auto matrix = complementarity_matrix(models);
    write_file(args.out, matrix_to_csv(matrix));

    std::cout << "complementarity x10:\n";
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        std::cout << "  " << matrix.names[i];
        for (std::size_t j = 0; j < matrix.size(); ++j) std::cout << ' ' << num(10.0 * matrix.at(i, j), 2);
        std::cout << '\n';
    }
    const auto [i, j] = pick_best_pair(matrix);
    std::cout << "best pair: " << matrix.names[i] << ',' << matrix.names[j]
              << " score=" << num(10.0 * matrix.at(i, j), 4) << '\n';
    return 0;
}

// ---- calibrate -------------------------------------------------------------

struct CalibrateArgs {
    std::string records_a;
    std::string records_b;
    std::string score;
    bool no_post_check = false;
    std::string out;
    std::string curve;
};

int cmd_calibrate(const CalibrateArgs& args) {
    if (args.score == "auto" && args.no_post_check) {
        throw UsageError("--no-post-check cannot be combined with --score auto");
    }
    const auto paired = align_records(load_prediction_records(args.records_a),
                                      load_prediction_records(args.records_b), stem(args.records_a),
                                      stem(args.records_b));
    const auto result = args.score == "auto"
                            ? auto_select(paired)
                            : find_lambda_star(paired, parse_score_kind(args.score), !args.no_post_check);
    save_config(args.out, result.config);
    if (!args.curve.empty()) write_file(args.curve, curve_to_csv(result.curve));

    std::cout << "first=" << result.config.first_model << " second=" << result.config.second_model
              << " score=" << score_kind_name(result.config.score_fn) << " lambda=" << num(result.config.lambda, 6)
              << " post_check=" << (result.config.post_check ? "true" : "false")
              << " accuracy=" << num(result.accuracy, 4) << " usage=" << num(result.second_model_usage, 4) << '\n';
    return 0;
}

// ---- run / duplication shared inputs ---------------------------------------

struct DataArgs {
    std::string records_a;
    std::string records_b;
    std::string images;
    std::string costs;
    bool labels = false;
};

struct LoadedData {
    std::vector<PredictionRecord> records_a;
    std::vector<PredictionRecord> records_b;
    PairedDataset paired;
    CostProfile costs;
};

LoadedData load_data(const DataArgs& args) {
    LoadedData d;
    d.records_a = load_prediction_records(args.records_a);
    d.records_b = load_prediction_records(args.records_b);
    d.paired = align_records(d.records_a, d.records_b, stem(args.records_a), stem(args.records_b));
    d.costs = load_cost_profile(args.costs);
    return d;
}

ImageBuffer load_sample_image(const std::string& dir, const std::string& id) {
    for (const char* ext : {".pgm", ".ppm"}) {
        const fs::path p = fs::path(dir) / (id + ext);
        if (fs::exists(p)) return load_image_file(p.string());
    }
    throw DataError("no image for sample " + id + " in " + dir);
}

std::vector<SampleRef> build_samples(const LoadedData& data, const DataArgs& args, bool need_images) {
    std::vector<SampleRef> samples;
    samples.reserve(data.paired.size());
    for (const auto& s : data.paired.samples) {
        SampleRef ref;
        ref.id = s.id;
        if (need_images) ref.image = load_sample_image(args.images, s.id);
        if (args.labels) ref.label = s.label;
        samples.push_back(std::move(ref));
    }
    return samples;
}

std::unique_ptr<Engine> make_engine(const CascadeConfig& config, const LoadedData& data,
                                    std::optional<std::size_t> capacity) {
    return std::make_unique<Engine>(config, std::make_shared<ReplayClassifier>(config.first_model, data.records_a),
                                    std::make_shared<ReplayClassifier>(config.second_model, data.records_b),
                                    capacity);
}

// ---- run -------------------------------------------------------------------

struct RunArgs {
    std::string config;
    DataArgs data;
    std::string report;
    std::string traces;
    std::string format = "json";
    std::string store;
    std::size_t store_capacity = 0;
};

int cmd_run(const RunArgs& args) {
    const auto config = load_config(args.config);
    const bool memory = config.memory != MemoryMethod::None;
    if (memory && args.data.images.empty()) {
        throw UsageError("memory method " + std::string(memory_method_name(config.memory)) + " requires --images");
    }
    const auto data = load_data(args.data);
    const auto samples = build_samples(data, args.data, memory);

    std::optional<std::size_t> capacity;
    if (args.store_capacity > 0) capacity = args.store_capacity;
    auto engine = make_engine(config, data, capacity);
    if (!args.store.empty() && memory && fs::exists(args.store)) {
        load_store_json(engine->store(), read_file(args.store), config.memory == MemoryMethod::DHash);
    }

    const auto batch = run_batch(*engine, samples);
    auto report = aggregate(batch.traces, data.costs.for_pair(config.first_model, config.second_model), batch.metrics);
    report.config = config;

    write_file(args.report, args.format == "csv" ? report_csv_header() + report_to_csv_row(report)
                                                 : report_to_json(report));
    if (!args.traces.empty()) {
        std::string lines;
        for (const auto& t : batch.traces) lines += trace_to_json_line(t) + "\n";
        write_file(args.traces, lines);
    }
    if (!args.store.empty() && memory) write_file(args.store, store_to_json(engine->store()));

    std::cout << "samples=" << report.samples;
    if (report.metrics) std::cout << " accuracy=" << num(report.metrics->accuracy, 4);
    std::cout << " energy_wh=" << num(report.total_energy_wh, 6) << " mean_ms=" << num(report.mean_latency_ms, 3)
              << " p95_ms=" << num(report.p95_latency_ms, 3) << " p99_ms=" << num(report.p99_latency_ms, 3)
              << " hits=" << report.paths.memory_hit << " second_model=" << report.paths.model_ab << '\n';
    return 0;
}

// ---- hash ------------------------------------------------------------------

struct HashArgs {
    std::string method;
    std::string image;
};

int cmd_hash(const HashArgs& args) {
    const auto gray = to_grayscale(load_image_file(args.image));
    if (args.method == "dhash") {
        std::cout << "dhash: " << fingerprint_text(dhash(gray)) << '\n';
        return 0;
    }
    const auto inv = moment_invariants(gray);
    std::cout << "moments: " << quantize_key(moments_scalar(inv)) << " phi=[";
    for (std::size_t i = 0; i < inv.phi.size(); ++i) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "%.17g", inv.phi[i]);
        std::cout << (i ? "," : "") << buf;
    }
    std::cout << "]\n";
    return 0;
}

// ---- duplication -----------------------------------------------------------

struct DuplicationArgs {
    std::vector<std::string> configs;
    DataArgs data;
    std::vector<double> ratios;
    std::string transform = "identity";
    std::string out;
    std::uint64_t seed = 0;
};

int cmd_duplication(const DuplicationArgs& args) {
    std::vector<CascadeConfig> configs;
    bool memory = false;
    for (const auto& path : args.configs) {
        configs.push_back(load_config(path));
        memory = memory || configs.back().memory != MemoryMethod::None;
    }
    const auto transform = parse_transform(args.transform);
    const bool need_images = memory || transform != DuplicateTransform::Identity;
    if (need_images && args.data.images.empty()) {
        throw UsageError("memory methods and non-identity transforms require --images");
    }
    for (double r : args.ratios) {
        if (!(r >= 0.0 && r <= 1.0)) throw UsageError("ratios must lie in [0,1]");
    }
    const auto data = load_data(args.data);
    const auto samples = build_samples(data, args.data, need_images);

    std::vector<NamedEngine> engines;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const auto config = configs[i];
        engines.push_back({stem(args.configs[i]), [config, &data] { return make_engine(config, data, std::nullopt); },
                           data.costs.for_pair(config.first_model, config.second_model)});
    }
    const auto curve = duplication_experiment(samples, args.ratios, transform, engines, data.costs, args.seed);
    write_file(args.out, curve_to_csv(curve));
    for (const auto& p : curve) {
        std::cout << p.engine << " ratio=" << num(p.ratio, 2) << " energy_wh=" << num(p.total_energy_wh, 6)
                  << " hits=" << p.hits << '\n';
    }
    return 0;
}

// ---- report ----------------------------------------------------------------

struct ReportArgs {
    std::string baseline;
    std::string candidate;
};

int cmd_report(const ReportArgs& args) {
    const auto base = report_from_json(read_file(args.baseline));
    const auto cand = report_from_json(read_file(args.candidate));
    const auto red = compare(base, cand);
    std::cout << "metric,baseline,candidate,reduction_pct\n"
              << "energy_wh," << num(base.total_energy_wh) << ',' << num(cand.total_energy_wh) << ','
              << num(red.energy, 2) << '\n'
              << "mean_latency_ms," << num(base.mean_latency_ms, 3) << ',' << num(cand.mean_latency_ms, 3) << ','
              << num(red.mean_latency, 2) << '\n'
              << "p95_latency_ms," << num(base.p95_latency_ms, 3) << ',' << num(cand.p95_latency_ms, 3) << ','
              << num(red.p95_latency, 2) << '\n'
              << "p99_latency_ms," << num(base.p99_latency_ms, 3) << ',' << num(cand.p99_latency_ms, 3) << ','
              << num(red.p99_latency, 2) << '\n';
    std::cout << "candidate uses " << num(red.energy, 1) << "% "
              << (red.energy >= 0 ? "less" : "more") << " energy than the baseline\n";
    return 0;
}

void add_data_options(CLI::App* cmd, DataArgs& data) {
    cmd->add_option("--records-a", data.records_a, "Prediction records of the first model (JSON Lines)")
        ->required();
    cmd->add_option("--records-b", data.records_b, "Prediction records of the second model (JSON Lines)")
        ->required();
    cmd->add_option("--images", data.images, "Directory holding <id>.pgm or <id>.ppm per sample");
    cmd->add_option("--costs", data.costs, "Cost profile JSON")->required();
    cmd->add_flag("--labels", data.labels, "Score predictions against the records' true labels");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-model confidence cascade with perceptual-hash memoisation"};
    app.require_subcommand(1);

    ComplementarityArgs comp;
    auto* comp_cmd = app.add_subcommand("complementarity", "All-pairs complementarity matrix and best pair");
    comp_cmd->add_option("files", comp.files, "Prediction record files, one per model (name = file stem)")
        ->required();
    comp_cmd->add_option("--out", comp.out, "Matrix CSV output")->required();

    CalibrateArgs cal;
    auto* cal_cmd = app.add_subcommand("calibrate", "Search the accuracy-maximising threshold");
    cal_cmd->add_option("--records-a", cal.records_a, "Validation records of the first model")
        ->required();
    cal_cmd->add_option("--records-b", cal.records_b, "Validation records of the second model")
        ->required();
    cal_cmd->add_option("--score", cal.score, "Score function: max, diff, entropy or auto")
        ->required()
        ->check(CLI::IsMember({"max", "diff", "entropy", "auto"}));
    cal_cmd->add_flag("--no-post-check", cal.no_post_check, "Take model B unconditionally after escalation");
    cal_cmd->add_option("--out", cal.out, "Config JSON output")->required();
    cal_cmd->add_option("--curve", cal.curve, "Optional lambda,accuracy,usage CSV output");

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Run the cascade over a record set and write a report");
    run_cmd->add_option("--config", run.config, "Cascade config JSON")->required();
    add_data_options(run_cmd, run.data);
    run_cmd->add_option("--report", run.report, "Report output")->required();
    run_cmd->add_option("--traces", run.traces, "Optional per-sample trace output (JSON Lines)");
    run_cmd->add_option("--format", run.format, "Report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    run_cmd->add_option("--store", run.store, "Memo store JSON, loaded if present and written after the run");
    run_cmd->add_option("--store-capacity", run.store_capacity, "LRU capacity of the memo store (0 = unbounded)")
        ->capture_default_str();

    HashArgs hash;
    auto* hash_cmd = app.add_subcommand("hash", "Print the fingerprint of a PGM/PPM image");
    hash_cmd->add_option("--method", hash.method, "dhash or moments")
        ->required()
        ->check(CLI::IsMember({"dhash", "moments"}));
    hash_cmd->add_option("image", hash.image, "Binary PNM image (P5/P6)")->required();

    DuplicationArgs dup;
    auto* dup_cmd = app.add_subcommand("duplication", "Energy vs duplicated-sample ratio");
    dup_cmd->add_option("--config", dup.configs, "Cascade config JSON; repeat for several engines")
        ->required();
    add_data_options(dup_cmd, dup.data);
    dup_cmd->add_option("--ratios", dup.ratios, "Duplication ratios, comma separated")
        ->required()
        ->delimiter(',');
    dup_cmd->add_option("--transform", dup.transform,
                        "identity, rot90, rot180, mirror_h, mirror_v or random_of_these")
        ->check(CLI::IsMember({"identity", "rot90", "rot180", "mirror_h", "mirror_v", "random_of_these"}))
        ->capture_default_str();
    dup_cmd->add_option("--seed", dup.seed, "Seed for random_of_these")->capture_default_str();
    dup_cmd->add_option("--out", dup.out, "Curve CSV output")->required();

    ReportArgs rep;
    auto* rep_cmd = app.add_subcommand("report", "Percentage reductions of a candidate report vs a baseline");
    rep_cmd->add_option("baseline", rep.baseline, "Baseline report JSON")->required();
    rep_cmd->add_option("candidate", rep.candidate, "Candidate report JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*comp_cmd) return cmd_complementarity(comp);
        if (*cal_cmd) return cmd_calibrate(cal);
        if (*run_cmd) return cmd_run(run);
        if (*hash_cmd) return cmd_hash(hash);
        if (*dup_cmd) return cmd_duplication(dup);
        if (*rep_cmd) return cmd_report(rep);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
