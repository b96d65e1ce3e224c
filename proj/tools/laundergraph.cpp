// laundergraph: command-line front end for the detection pipeline.
//
//   synth -> build -> extract -> featurize -> train / evaluate -> score / monitor
//
// Exit status: 0 clean, 2 finished with skipped input, 1 fatal.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "laundergraph/classifier.hpp"
#include "laundergraph/community.hpp"
#include "laundergraph/error.hpp"
#include "laundergraph/eval_report.hpp"
#include "laundergraph/features.hpp"
#include "laundergraph/holdout.hpp"
#include "laundergraph/labels.hpp"
#include "laundergraph/monitor.hpp"
#include "laundergraph/pipeline_config.hpp"
#include "laundergraph/reports.hpp"
#include "laundergraph/snapshot.hpp"
#include "laundergraph/synth.hpp"

namespace lg = laundergraph;

namespace {

constexpr int kClean = 0;
constexpr int kFatal = 1;
constexpr int kPartial = 2;

struct Overrides {
    std::string config_path;
    std::optional<int> k;
    std::vector<std::size_t> n_max;
    std::vector<double> w_min;
    std::optional<double> theta;
    std::optional<double> tau;
    std::optional<double> beta;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::string model;
    std::string out;
};

void add_shared_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_path, "JSON pipeline config")->check(CLI::ExistingFile);
    cmd->add_option("--k", o.k, "extraction steps");
    cmd->add_option("--n-max", o.n_max, "gate threshold per round (one value broadcasts)");
    cmd->add_option("--w-min", o.w_min, "supplementary weight floor per round (one value broadcasts)");
    cmd->add_option("--theta", o.theta, "overlap threshold for merging");
    cmd->add_option("--tau", o.tau, "alert score cutoff");
    cmd->add_option("--beta", o.beta, "F-beta used to pick tau");
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--workers", o.workers, "worker threads (0 = all cores)");
    cmd->add_option("--model", o.model, "model file");
    cmd->add_option("--out", o.out, "output file");
}

lg::PipelineConfig resolve(const Overrides& o) {
    lg::PipelineConfig c = o.config_path.empty() ? lg::PipelineConfig{} : lg::load_pipeline_config(o.config_path);
    if (o.k) c.k = *o.k;
    if (!o.n_max.empty()) c.n_max = o.n_max;
    if (!o.w_min.empty()) c.w_min = o.w_min;
    if (o.theta) c.theta = *o.theta;
    if (o.tau) c.tau = *o.tau;
    if (o.beta) c.beta = *o.beta;
    if (o.seed) c.seed = *o.seed;
    if (o.workers) c.workers = *o.workers;
    if (!o.model.empty()) c.model_path = o.model;
    if (!o.out.empty()) c.output_path = o.out;
    c.validate();
    return c;
}

std::string require(const std::string& value, const char* what) {
    if (value.empty()) throw lg::Error(std::string("missing ") + what);
    return value;
}

// Writes to the configured output file, or stdout when none is set.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw lg::Error("cannot open '" + path + "' for writing");
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw lg::Error("cannot open '" + path + "'");
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);) {
        line.erase(line.find_last_not_of(" \t\r") + 1);
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

std::vector<lg::CommunityRecord> read_communities(const lg::TransactionGraph& g, const std::string& path) {
    std::vector<lg::CommunityRecord> out;
    for (const auto& line : read_lines(path)) out.push_back(lg::community_from_json(g, line));
    return out;
}

lg::FeatureTable read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw lg::Error("cannot open '" + path + "'");
    auto table = lg::read_feature_csv(in);
    if (table.names != lg::FeatureSchema::standard().names()) {
        throw lg::SchemaMismatchError("feature file columns do not match the standard feature schema");
    }
    return table;
}

// Labeled rows only.
std::pair<lg::Matrix, std::vector<int>> labeled_rows(const lg::FeatureTable& table) {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (table.labels[i] < 0) continue;
        rows.push_back(table.rows[i]);
        labels.push_back(table.labels[i]);
    }
    if (rows.empty()) throw lg::Error("feature file has no labeled rows");
    return {lg::Matrix::from_rows(rows), std::move(labels)};
}

int run_synth(const Overrides& o, std::size_t parties, std::size_t reports, std::size_t groups,
              const std::string& truth_path) {
    const auto config = resolve(o);
    lg::SynthConfig sc;
    sc.n_parties = parties;
    sc.n_reports = reports;
    sc.n_injected_groups = groups;
    sc.seed = config.seed;
    const auto corpus = lg::generate(sc);
    Output out(config.output_path);
    lg::write_corpus(out.stream(), corpus);
    if (!truth_path.empty()) lg::write_ground_truth(std::filesystem::path(truth_path), corpus.truth);
    std::cerr << "synth: " << corpus.parties.size() << " parties, " << corpus.reports.size() << " reports, "
              << corpus.truth.groups.size() << " injected groups\n";
    return kClean;
}

int run_build(const Overrides& o, std::vector<std::string> inputs) {
    const auto config = resolve(o);
    if (inputs.empty()) inputs.push_back(require(config.reports_path, "--reports or reports_path"));
    std::vector<lg::PartyRecord> parties;
    std::vector<lg::ReportRecord> reports;
    std::size_t errors = 0;
    for (const auto& path : inputs) {
        auto parsed = lg::parse_reports(std::filesystem::path(path));
        for (const auto& e : parsed.errors) std::cerr << path << ":" << e.line << ": " << e.message << "\n";
        errors += parsed.errors.size();
        parties.insert(parties.end(), parsed.parties.begin(), parsed.parties.end());
        reports.insert(reports.end(), parsed.reports.begin(), parsed.reports.end());
    }
    const auto graph = lg::build_graph(parties, reports);
    const auto out = require(config.output_path.empty() ? config.snapshot_path : config.output_path,
                             "--out or snapshot_path");
    lg::save_snapshot(graph, out, inputs);
    const auto s = graph.summary();
    std::cerr << "build: " << s.parties << " parties, " << s.transaction_edges << " transaction edges, "
              << s.supplementary_edges << " supplementary edges, " << s.components << " components\n";
    return errors == 0 ? kClean : kPartial;
}

int run_extract(const Overrides& o, const std::string& snapshot, const std::string& seeds_path, bool labeled) {
    const auto config = resolve(o);
    const auto graph = lg::load_snapshot(require(snapshot.empty() ? config.snapshot_path : snapshot, "--snapshot"));
    const auto params = config.extraction();

    std::vector<lg::PartyIndex> seeds;
    std::vector<char> positive(graph.party_count(), 0);
    std::size_t unknown = 0;
    if (labeled) {
        std::vector<lg::PartyIndex> tagged;
        for (lg::PartyIndex p = 0; p < graph.party_count(); ++p) {
            if (graph.party(p).tagged_suspicious) tagged.push_back(p);
        }
        const auto labels = lg::assign_labels(graph, tagged, config.labeling());
        for (auto p : labels.positives) positive[p] = 1;
        seeds = labels.positives;
        seeds.insert(seeds.end(), labels.negatives.begin(), labels.negatives.end());
        std::cerr << "extract: " << labels.positives.size() << " positive and " << labels.negatives.size()
                  << " negative seeds\n";
    } else {
        for (const auto& id : read_lines(require(seeds_path, "--seeds or --labeled"))) {
            if (auto p = graph.find(id)) {
                seeds.push_back(*p);
            } else {
                std::cerr << "extract: unknown seed '" << id << "' skipped\n";
                ++unknown;
            }
        }
    }

    const auto batch = lg::extract_batch(graph, seeds, params, config.workers);
    for (const auto& e : batch.errors) std::cerr << "extract: seed " << e.seed << ": " << e.message << "\n";
    Output out(config.output_path);
    for (const auto& c : batch.communities) {
        std::optional<int> label;
        if (labeled) {
            // A community reached from any positive seed is positive.
            label = std::any_of(c.lineage.begin(), c.lineage.end(), [&](auto s) { return positive[s] != 0; }) ? 1 : 0;
        }
        out.stream() << lg::to_json_line(graph, c, label) << '\n';
    }
    std::cerr << "extract: " << batch.communities.size() << " distinct communities\n";
    return unknown + batch.errors.size() == 0 ? kClean : kPartial;
}

int run_featurize(const Overrides& o, const std::string& snapshot, const std::string& communities) {
    const auto config = resolve(o);
    const auto graph = lg::load_snapshot(require(snapshot.empty() ? config.snapshot_path : snapshot, "--snapshot"));
    const auto records = read_communities(graph, require(communities, "--communities"));
    std::vector<lg::Community> list;
    for (const auto& r : records) list.push_back(r.community);
    const auto& schema = lg::FeatureSchema::standard();
    const auto vectors = lg::featurize_all(graph, list, schema, config.features(), config.workers);

    lg::FeatureTable table;
    table.names = schema.names();
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        table.seeds.push_back(graph.party(vectors[i].seed).id);
        table.labels.push_back(records[i].label.value_or(-1));
        table.rows.push_back(vectors[i].values);
    }
    Output out(config.output_path);
    lg::write_feature_csv(out.stream(), table);
    return kClean;
}

int run_train(const Overrides& o, const std::string& features, const std::string& kind) {
    auto config = resolve(o);
    if (!kind.empty()) config.model_kind = kind;
    const auto table = read_table(require(features, "--features"));
    const auto [x, y] = labeled_rows(table);
    const auto model = lg::train(x, y, config.training(), lg::SchemaTag::of(lg::FeatureSchema::standard()));
    lg::save_model(model, require(config.model_path.empty() ? config.output_path : config.model_path,
                                  "--model or --out"));
    std::cerr << "train: " << lg::model_id(model) << " on " << x.rows() << " rows\n";
    return kClean;
}

int run_evaluate(const Overrides& o, const std::string& features) {
    const auto config = resolve(o);
    const auto table = read_table(require(features, "--features"));
    const auto [x, y] = labeled_rows(table);
    lg::TrainConfig rf = config.training();
    rf.kind = lg::ModelKind::random_forest;
    lg::TrainConfig svm = config.training();
    svm.kind = lg::ModelKind::linear_svm;
    const std::vector<lg::ModelSpec> models{{"random forest", rf}, {"SVM", svm}};
    auto eval = config.evaluation();
    if (std::find(eval.betas.begin(), eval.betas.end(), config.beta) == eval.betas.end()) {
        eval.betas.push_back(config.beta);
    }
    const auto summary = lg::repeated_holdout(x, y, models, eval);
    std::cout << lg::eval_report_table(summary);
    if (!config.output_path.empty()) {
        Output out(config.output_path);
        out.stream() << lg::eval_report_json(summary);
    }
    return kClean;
}

int run_score(const Overrides& o, const std::string& snapshot, const std::string& communities) {
    const auto config = resolve(o);
    const auto graph = lg::load_snapshot(require(snapshot.empty() ? config.snapshot_path : snapshot, "--snapshot"));
    const auto& schema = lg::FeatureSchema::standard();
    const auto model = lg::load_model(require(config.model_path, "--model"), lg::SchemaTag::of(schema));
    Output out(config.output_path);
    out.stream() << "seed,score,alert\n";
    for (const auto& r : read_communities(graph, require(communities, "--communities"))) {
        const auto fv = lg::featurize(graph, r.community, schema, config.features());
        const double s = lg::score(model, fv.values);
        out.stream() << graph.party(r.community.seed).id << ',' << s << ',' << (s >= config.tau ? 1 : 0) << '\n';
    }
    return kClean;
}

int run_monitor(const Overrides& o, const std::string& snapshot, const std::string& stream) {
    const auto config = resolve(o);
    const auto graph = lg::load_snapshot(require(snapshot.empty() ? config.snapshot_path : snapshot, "--snapshot"));
    const auto model =
        lg::load_model(require(config.model_path, "--model"), lg::SchemaTag::of(lg::FeatureSchema::standard()));
    lg::MonitorOptions options;
    options.params = config.extraction();
    options.features = config.features();
    options.tau = config.tau;
    options.theta = config.theta;
    options.window_size = config.window_size;
    options.window_seconds = config.window_seconds;
    lg::Monitor monitor(graph, model, options);

    // Parties arrive before the reports that mention them; the stream file
    // is processed in order.
    std::ifstream in(require(stream, "--stream"));
    if (!in) throw lg::Error("cannot open stream '" + stream + "'");
    Output out(config.output_path);
    std::size_t bad_lines = 0;
    std::size_t alerts = 0;
    auto emit = [&](const std::vector<lg::Alert>& batch) {
        for (const auto& a : batch) out.stream() << lg::to_json_line(monitor.graph(), a) << '\n';
        alerts += batch.size();
    };
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            if (line.find("\"report_id\"") != std::string::npos) {
                emit(monitor.process(lg::parse_report_line(line)));
            } else {
                monitor.add_party(lg::parse_party_line(line));
            }
        } catch (const lg::FormatError& e) {
            std::cerr << stream << ":" << line_no << ": " << e.what() << "\n";
            ++bad_lines;
        } catch (const std::invalid_argument& e) {
            std::cerr << stream << ":" << line_no << ": " << e.what() << "\n";
            ++bad_lines;
        }
    }
    emit(monitor.flush());
    for (const auto& s : monitor.skipped()) std::cerr << "monitor: skipped " << s.report_id << ": " << s.reason << "\n";
    std::cerr << "monitor: " << monitor.processed() << " transactions, " << alerts << " alerts\n";
    return bad_lines + monitor.skipped().size() == 0 ? kClean : kPartial;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Group money-laundering detection over transaction report networks"};
    app.require_subcommand(1);
    Overrides o;

    auto* synth = app.add_subcommand("synth", "generate a synthetic report corpus");
    std::size_t parties = 20000;
    std::size_t reports = 0;
    std::size_t groups = 20;
    std::string truth;
    synth->add_option("--parties", parties, "number of parties");
    synth->add_option("--reports", reports, "number of reports (0 = 1.5 per party)");
    synth->add_option("--groups", groups, "injected laundering groups");
    synth->add_option("--truth", truth, "ground-truth output file");

    auto* build = app.add_subcommand("build", "ingest report files into a graph snapshot");
    std::vector<std::string> inputs;
    build->add_option("--reports", inputs, "report JSONL files");

    std::string snapshot;
    auto* extract = app.add_subcommand("extract", "extract seed communities");
    std::string seeds;
    bool labeled = false;
    extract->add_option("--snapshot", snapshot, "graph snapshot");
    auto* seeds_opt = extract->add_option("--seeds", seeds, "file with one party id per line");
    extract->add_flag("--labeled", labeled, "seed on labeled positives and sampled negatives")->excludes(seeds_opt);

    auto* featurize = app.add_subcommand("featurize", "compute the feature matrix for communities");
    std::string communities;
    featurize->add_option("--snapshot", snapshot, "graph snapshot");
    featurize->add_option("--communities", communities, "community JSONL");

    auto* train = app.add_subcommand("train", "train a classifier on a feature matrix");
    std::string features;
    std::string kind;
    train->add_option("--features", features, "feature CSV");
    train->add_option("--kind", kind, "rf or svm");

    auto* evaluate = app.add_subcommand("evaluate", "repeated balanced holdout of both classifiers");
    evaluate->add_option("--features", features, "feature CSV");

    auto* score = app.add_subcommand("score", "score communities with a trained model");
    score->add_option("--snapshot", snapshot, "graph snapshot");
    score->add_option("--communities", communities, "community JSONL");

    auto* monitor = app.add_subcommand("monitor", "score a live report stream and emit alerts");
    std::string stream;
    monitor->add_option("--snapshot", snapshot, "graph snapshot");
    monitor->add_option("--stream", stream, "report JSONL in arrival order");

    for (auto* cmd : {synth, build, extract, featurize, train, evaluate, score, monitor}) add_shared_options(cmd, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kClean : kFatal;
    }

    try {
        if (*synth) return run_synth(o, parties, reports, groups, truth);
        if (*build) return run_build(o, inputs);
        if (*extract) return run_extract(o, snapshot, seeds, labeled);
        if (*featurize) return run_featurize(o, snapshot, communities);
        if (*train) return run_train(o, features, kind);
        if (*evaluate) return run_evaluate(o, features);
        if (*score) return run_score(o, snapshot, communities);
        if (*monitor) return run_monitor(o, snapshot, stream);
    } catch (const std::exception& e) {
        std::cerr << "laundergraph: " << e.what() << "\n";
        return kFatal;
    }
    return kFatal;
}
