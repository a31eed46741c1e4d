#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "g3ad/checkpoint.hpp"
#include "g3ad/errors.hpp"
#include "g3ad/experiment.hpp"
#include "g3ad/graph_io.hpp"
#include "g3ad/injection.hpp"
#include "g3ad/manifest.hpp"
#include "g3ad/metrics.hpp"
#include "g3ad/model.hpp"
#include "g3ad/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace g3ad_cli {

namespace {

std::string out_path(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    return (fs::path(dir) / name).string();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw g3ad::FormatError("cannot write " + path);
    out << text;
}

void write_scores_csv(const std::string& path, const std::vector<double>& scores) {
    std::ofstream out(path);
    if (!out) throw g3ad::FormatError("cannot write " + path);
    out << "node,score\n";
    char buf[40];
    for (size_t i = 0; i < scores.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", scores[i]);
        out << i << ',' << buf << '\n';
    }
}

std::vector<double> read_scores_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw g3ad::FormatError("cannot open scores file " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("node,score", 0) != 0)
        throw g3ad::FormatError(path + ": expected a 'node,score' header");
    std::vector<std::pair<long, double>> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw g3ad::FormatError(path + ":" + std::to_string(line_no) + ": malformed row");
        try {
            rows.emplace_back(std::stol(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw g3ad::FormatError(path + ":" + std::to_string(line_no) + ": malformed row");
        }
    }
    std::vector<double> scores(rows.size(), 0.0);
    for (const auto& [node, score] : rows) {
        if (node < 0 || node >= static_cast<long>(scores.size()))
            throw g3ad::FormatError(path + ": node index " + std::to_string(node) + " out of range");
        scores[node] = score;
    }
    return scores;
}

void write_history_csv(const std::string& path, const std::vector<g3ad::LossBreakdown>& history) {
    std::ofstream out(path);
    if (!out) throw g3ad::FormatError("cannot write " + path);
    out << "epoch,loss_attr,loss_topo,loss_cons,loss_cc,loss_total\n";
    char buf[200];
    for (size_t e = 0; e < history.size(); ++e) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n", e, history[e].attr,
                      history[e].topo, history[e].cons, history[e].cc, history[e].total);
        out << buf;
    }
}

std::vector<g3ad::LossBreakdown> read_history_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw g3ad::FormatError("cannot open loss history " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<g3ad::LossBreakdown> history;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
        if (vals.size() != 6) throw g3ad::FormatError(path + ": expected 6 columns per row");
        history.push_back({vals[1], vals[2], vals[3], vals[4], vals[5]});
    }
    return history;
}

// Shared model/train flags for `train` and `sweep`.
struct TrainFlags {
    double lambda1 = 0.8;
    double lambda2 = 0.2;
    double lr = 5e-3;
    int epochs = 200;
    int dim = 64;
    std::string backbone = "gat";
    std::string readout = "mean";
    std::string arch = "full";
    std::vector<std::string> ablate;
    double cons_floor = 2.718281828459045;
    double leaky_slope = 0.01;
    bool no_self_loops = false;
    std::uint64_t seed = 0;

    void attach(CLI::App* cmd, bool with_seed = true) {
        cmd->add_option("--lambda1", lambda1, "Attribute/topology balance in [0,1]")->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--lambda2", lambda2, "Consistency alignment weight")->check(CLI::NonNegativeNumber);
        cmd->add_option("--lr", lr, "Adam learning rate")->check(CLI::PositiveNumber);
        cmd->add_option("--epochs", epochs, "Training epochs")->check(CLI::PositiveNumber);
        cmd->add_option("--dim", dim, "Embedding size")->check(CLI::PositiveNumber);
        cmd->add_option("--backbone", backbone, "GNN encoder: gat|gcn|sage|gin")
            ->check(CLI::IsMember({"gat", "gcn", "sage", "gin"}));
        cmd->add_option("--readout", readout, "Graph summary pooling: mean|min|max|attention")
            ->check(CLI::IsMember({"mean", "min", "max", "attention"}));
        cmd->add_option("--arch", arch, "Encoder architecture: full|shared|separated")
            ->check(CLI::IsMember({"full", "shared", "separated"}));
        cmd->add_option("--ablate", ablate, "Disable components: ar,tr,ca,cc")->delimiter(',');
        cmd->add_option("--cons-floor", cons_floor, "Additive constant inside the alignment log")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--leaky-slope", leaky_slope, "LeakyReLU negative slope");
        cmd->add_flag("--no-self-loops", no_self_loops, "Exclude nodes from their own aggregation sets");
        if (with_seed) cmd->add_option("--seed", seed, "Random seed");
    }

    g3ad::G3adConfig config() const {
        g3ad::G3adConfig cfg;
        cfg.embed_dim = dim;
        cfg.lambda1 = lambda1;
        cfg.lambda2 = lambda2;
        cfg.backbone = g3ad::backbone_from_string(backbone);
        cfg.readout = g3ad::readout_from_string(readout);
        cfg.arch = g3ad::arch_from_string(arch);
        cfg.cons_floor = cons_floor;
        cfg.leaky_slope = leaky_slope;
        cfg.include_self = !no_self_loops;
        for (const std::string& piece : ablate) {
            if (piece == "ar")
                cfg.use_attr_recon = false;
            else if (piece == "tr")
                cfg.use_topo_recon = false;
            else if (piece == "ca")
                cfg.use_cons_align = false;
            else if (piece == "cc")
                cfg.use_correlation_constraint = false;
            else
                throw g3ad::ConfigError("unknown ablation '" + piece + "' (expected ar,tr,ca,cc)");
        }
        cfg.validate();
        return cfg;
    }

    json snapshot() const {
        return json::parse(g3ad::config_to_json_string(config()));
    }
};

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"Unsupervised graph anomaly detection with a guarded GNN autoencoder"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a TOML file (flags override)");
    app.set_version_flag("--version", std::string(g3ad::kToolVersion));

    int exit_code = 0;

    // ---- synth ----
    auto* synth = app.add_subcommand("synth", "Generate a planted-partition base graph");
    struct {
        int nodes = 0, dim = 0, clusters = 5;
        double avg_degree = 8.0;
        double ratio = 20.0, noise_sigma = 0.3, mean_sigma = 1.0;
        std::uint64_t seed = 0;
        std::string out;
    } sy;
    synth->add_option("--nodes", sy.nodes, "Node count")->required()->check(CLI::PositiveNumber);
    synth->add_option("--dim", sy.dim, "Attribute dimension")->required()->check(CLI::PositiveNumber);
    synth->add_option("--avg-degree", sy.avg_degree, "Expected average degree")->check(CLI::NonNegativeNumber);
    synth->add_option("--clusters", sy.clusters, "Planted cluster count")->check(CLI::PositiveNumber);
    synth->add_option("--intra-inter-ratio", sy.ratio, "Intra/inter edge probability ratio");
    synth->add_option("--noise-sigma", sy.noise_sigma, "Per-node attribute noise");
    synth->add_option("--mean-sigma", sy.mean_sigma, "Cluster mean spread");
    synth->add_option("--seed", sy.seed, "Random seed");
    synth->add_option("--out", sy.out, "Output directory")->required();
    synth->callback([&] {
        g3ad::Rng rng(sy.seed);
        const g3ad::Graph g =
            g3ad::synth_base_graph(sy.nodes, sy.dim, sy.avg_degree, sy.clusters, rng,
                                   {sy.ratio, sy.mean_sigma, sy.noise_sigma});
        const std::string edges = out_path(sy.out, "edges.tsv");
        const std::string attrs = out_path(sy.out, "attrs.csv");
        g3ad::save_graph(g, edges, attrs);

        g3ad::RunManifest manifest;
        manifest.command = "synth";
        manifest.config_json = json{{"nodes", sy.nodes},
                                    {"dim", sy.dim},
                                    {"avg_degree", sy.avg_degree},
                                    {"clusters", sy.clusters},
                                    {"intra_inter_ratio", sy.ratio},
                                    {"noise_sigma", sy.noise_sigma},
                                    {"mean_sigma", sy.mean_sigma}}
                                   .dump();
        manifest.seeds = {sy.seed};
        manifest.outputs = {edges, attrs};
        g3ad::write_manifest(out_path(sy.out, "manifest.json"), manifest);
        std::cout << "synth: " << g.n() << " nodes, " << g.edge_count() << " edges -> " << sy.out << "\n";
    });

    // ---- inject ----
    auto* inject = app.add_subcommand("inject", "Plant topological cliques and attribute swaps");
    struct {
        std::string edges, attrs, out;
        g3ad::InjectionConfig cfg;
    } in;
    inject->add_option("--edges", in.edges, "Input edge list")->required()->check(CLI::ExistingFile);
    inject->add_option("--attrs", in.attrs, "Input attribute CSV")->required()->check(CLI::ExistingFile);
    inject->add_option("--cliques", in.cfg.num_cliques, "Number of planted cliques (q)")
        ->check(CLI::NonNegativeNumber);
    inject->add_option("--clique-size", in.cfg.clique_size, "Clique size (p)")->check(CLI::PositiveNumber);
    inject->add_option("--attr-anomalies", in.cfg.num_attr_anomalies,
                       "Attribute anomaly count (-1 matches the clique total)");
    inject->add_option("--candidates", in.cfg.attr_candidates, "Candidate set size per swap (k)")
        ->check(CLI::PositiveNumber);
    inject->add_option("--seed", in.cfg.seed, "Random seed");
    inject->add_option("--out", in.out, "Output directory")->required();
    inject->callback([&] {
        const g3ad::Graph g = g3ad::load_graph(in.edges, in.attrs);
        const g3ad::InjectionResult result = g3ad::inject_anomalies(g, in.cfg);
        const std::string edges = out_path(in.out, "edges.tsv");
        const std::string attrs = out_path(in.out, "attrs.csv");
        const std::string labels = out_path(in.out, "labels.txt");
        const std::string prov = out_path(in.out, "provenance.json");
        g3ad::save_graph(result.graph, edges, attrs);
        g3ad::save_labels(result.truth, labels);
        g3ad::write_provenance_json(result.truth, in.cfg, prov);

        g3ad::RunManifest manifest;
        manifest.command = "inject";
        manifest.config_json = json{{"cliques", in.cfg.num_cliques},
                                    {"clique_size", in.cfg.clique_size},
                                    {"attr_anomalies", in.cfg.resolved_attr_anomalies()},
                                    {"candidates", in.cfg.attr_candidates}}
                                   .dump();
        manifest.seeds = {in.cfg.seed};
        manifest.input_digests = {{in.edges, g3ad::file_digest(in.edges)},
                                  {in.attrs, g3ad::file_digest(in.attrs)}};
        manifest.outputs = {edges, attrs, labels, prov};
        g3ad::write_manifest(out_path(in.out, "manifest.json"), manifest);
        std::cout << "inject: " << result.truth.positives() << " anomalies ("
                  << in.cfg.clique_size * in.cfg.num_cliques << " topological, "
                  << in.cfg.resolved_attr_anomalies() << " attributed) -> " << in.out << "\n";
    });

    // ---- train ----
    auto* train_cmd = app.add_subcommand("train", "Train the detector and emit anomaly scores");
    struct {
        std::string edges, attrs, out;
        TrainFlags flags;
    } tr;
    train_cmd->add_option("--edges", tr.edges, "Input edge list")->required()->check(CLI::ExistingFile);
    train_cmd->add_option("--attrs", tr.attrs, "Input attribute CSV")->required()->check(CLI::ExistingFile);
    train_cmd->add_option("--out", tr.out, "Output directory")->required();
    tr.flags.attach(train_cmd);
    train_cmd->callback([&] {
        const g3ad::Graph g = g3ad::load_graph(tr.edges, tr.attrs);
        const g3ad::G3adConfig cfg = tr.flags.config();
        g3ad::TrainOptions opts;
        opts.epochs = tr.flags.epochs;
        opts.lr = tr.flags.lr;
        opts.seed = tr.flags.seed;

        const std::string history_path = out_path(tr.out, "loss_history.csv");
        g3ad::TrainResult result;
        try {
            result = g3ad::train(g, cfg, opts);
        } catch (const g3ad::TrainDivergence& err) {
            write_history_csv(history_path, err.history());
            std::cerr << "error: " << err.what() << " (partial loss history written)\n";
            exit_code = 1;
            return;
        }

        const std::string ckpt = out_path(tr.out, "checkpoint.bin");
        const std::string scores = out_path(tr.out, "scores.csv");
        g3ad::save_checkpoint(ckpt, result.params, cfg, g.n(), g.d());
        write_scores_csv(scores, result.artifacts.scores);
        write_history_csv(history_path, result.history);

        g3ad::RunManifest manifest;
        manifest.command = "train";
        json snapshot = tr.flags.snapshot();
        snapshot["epochs"] = opts.epochs;
        snapshot["lr"] = opts.lr;
        manifest.config_json = snapshot.dump();
        manifest.seeds = {opts.seed};
        manifest.input_digests = {{tr.edges, g3ad::file_digest(tr.edges)},
                                  {tr.attrs, g3ad::file_digest(tr.attrs)}};
        manifest.outputs = {ckpt, scores, history_path};
        g3ad::write_manifest(out_path(tr.out, "manifest.json"), manifest);
        std::cout << "train: " << opts.epochs << " epochs, final loss " << result.artifacts.losses.total
                  << " -> " << tr.out << "\n";
    });

    // ---- eval ----
    auto* eval_cmd = app.add_subcommand("eval", "Compute AUC and AP from scores and labels");
    struct {
        std::vector<std::string> scores;
        std::vector<std::string> run_files;
        std::string labels, out;
    } ev;
    eval_cmd->add_option("--scores", ev.scores, "Scores CSV (repeat for multi-run aggregation)")
        ->check(CLI::ExistingFile);
    eval_cmd->add_option("--runs", ev.run_files, "Score CSVs to aggregate into mean±std, comma separated")
        ->delimiter(',')
        ->check(CLI::ExistingFile);
    eval_cmd->add_option("--labels", ev.labels, "Labels file")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--out", ev.out, "Output directory")->required();
    eval_cmd->callback([&] {
        ev.scores.insert(ev.scores.end(), ev.run_files.begin(), ev.run_files.end());
        if (ev.scores.empty()) throw g3ad::ConfigError("eval needs --scores or --runs");
        std::vector<std::vector<double>> runs;
        for (const std::string& path : ev.scores) runs.push_back(read_scores_csv(path));
        const g3ad::AnomalyGroundTruth truth = g3ad::load_labels(ev.labels, static_cast<int>(runs.front().size()));

        std::vector<double> aucs, aps;
        for (const auto& scores : runs) {
            if (scores.size() != truth.labels.size())
                throw g3ad::MetricError("scores/labels length mismatch");
            aucs.push_back(g3ad::roc_auc(scores, truth.labels));
            aps.push_back(g3ad::average_precision(scores, truth.labels));
        }
        auto mean_of = [](const std::vector<double>& xs) {
            double m = 0;
            for (double x : xs) m += x;
            return m / static_cast<double>(xs.size());
        };
        auto std_of = [&](const std::vector<double>& xs, double m) {
            double v = 0;
            for (double x : xs) v += (x - m) * (x - m);
            return std::sqrt(v / static_cast<double>(xs.size()));
        };
        const double auc_mean = mean_of(aucs), ap_mean = mean_of(aps);

        json metrics{{"auc", auc_mean}, {"ap", ap_mean}};
        std::ostringstream csv;
        csv << "run,auc,ap\n";
        for (size_t r = 0; r < runs.size(); ++r) csv << ev.scores[r] << ',' << aucs[r] << ',' << aps[r] << '\n';
        if (runs.size() > 1) {
            metrics["auc_std"] = std_of(aucs, auc_mean);
            metrics["ap_std"] = std_of(aps, ap_mean);
            std::cout << "auc=" << auc_mean << "±" << std_of(aucs, auc_mean) << " ap=" << ap_mean << "±"
                      << std_of(aps, ap_mean) << " over " << runs.size() << " runs\n";
        } else {
            std::cout << "auc=" << auc_mean << " ap=" << ap_mean << "\n";
        }

        const std::string metrics_path = out_path(ev.out, "metrics.json");
        const std::string csv_path = out_path(ev.out, "metrics.csv");
        write_text(metrics_path, metrics.dump(2) + "\n");
        write_text(csv_path, csv.str());

        g3ad::RunManifest manifest;
        manifest.command = "eval";
        manifest.config_json = json{{"runs", runs.size()}}.dump();
        for (const std::string& path : ev.scores) manifest.input_digests[path] = g3ad::file_digest(path);
        manifest.input_digests[ev.labels] = g3ad::file_digest(ev.labels);
        manifest.outputs = {metrics_path, csv_path};
        g3ad::write_manifest(out_path(ev.out, "manifest.json"), manifest);
    });

    // ---- report ----
    auto* report_cmd = app.add_subcommand("report", "Render score histograms and loss curves");
    struct {
        std::string scores, labels, history, out;
        int bins = 50;
    } rp;
    report_cmd->add_option("--scores", rp.scores, "Scores CSV")->required()->check(CLI::ExistingFile);
    report_cmd->add_option("--labels", rp.labels, "Labels file (adds the anomaly series)")
        ->check(CLI::ExistingFile);
    report_cmd->add_option("--history", rp.history, "Loss history CSV (adds the loss curve)")
        ->check(CLI::ExistingFile);
    report_cmd->add_option("--bins", rp.bins, "Histogram bin count")->check(CLI::PositiveNumber);
    report_cmd->add_option("--out", rp.out, "Output directory")->required();
    report_cmd->callback([&] {
        const std::vector<double> scores = read_scores_csv(rp.scores);
        std::vector<int> labels;
        if (!rp.labels.empty())
            labels = g3ad::load_labels(rp.labels, static_cast<int>(scores.size())).labels;
        const g3ad::ScoreHistogram hist = g3ad::score_histogram(scores, labels, rp.bins);

        const std::string svg_path = out_path(rp.out, "score_hist.svg");
        const std::string csv_path = out_path(rp.out, "score_hist.csv");
        write_text(svg_path, g3ad::histogram_svg(hist));
        write_text(csv_path, g3ad::histogram_csv(hist));

        g3ad::RunManifest manifest;
        manifest.command = "report";
        manifest.config_json = json{{"bins", rp.bins}, {"labeled", !labels.empty()}}.dump();
        manifest.input_digests[rp.scores] = g3ad::file_digest(rp.scores);
        if (!rp.labels.empty()) manifest.input_digests[rp.labels] = g3ad::file_digest(rp.labels);
        manifest.outputs = {svg_path, csv_path};
        if (!rp.history.empty()) {
            const std::string curve_path = out_path(rp.out, "loss_curve.svg");
            write_text(curve_path, g3ad::loss_curve_svg(read_history_csv(rp.history)));
            manifest.input_digests[rp.history] = g3ad::file_digest(rp.history);
            manifest.outputs.push_back(curve_path);
        }
        g3ad::write_manifest(out_path(rp.out, "manifest.json"), manifest);
        std::cout << "report: " << manifest.outputs.size() << " artifacts -> " << rp.out << "\n";
    });

    // ---- sweep ----
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a variant comparison along one axis");
    struct {
        std::string edges, attrs, labels, axis, out;
        std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
        int workers = 0;
        TrainFlags flags;
    } sw;
    sweep_cmd->add_option("--edges", sw.edges, "Input edge list")->required()->check(CLI::ExistingFile);
    sweep_cmd->add_option("--attrs", sw.attrs, "Input attribute CSV")->required()->check(CLI::ExistingFile);
    sweep_cmd->add_option("--labels", sw.labels, "Ground-truth labels")->required()->check(CLI::ExistingFile);
    sweep_cmd->add_option("--axis", sw.axis, "ablation|backbone|readout|lambda-grid")->required();
    sweep_cmd->add_option("--seeds", sw.seeds, "Seeds, comma separated")->delimiter(',');
    sweep_cmd->add_option("--workers", sw.workers, "Parallel training workers (0 = hardware)");
    sweep_cmd->add_option("--out", sw.out, "Output directory")->required();
    sw.flags.attach(sweep_cmd, /*with_seed=*/false);
    sweep_cmd->callback([&] {
        const g3ad::Graph g = g3ad::load_graph(sw.edges, sw.attrs);
        const g3ad::AnomalyGroundTruth truth = g3ad::load_labels(sw.labels, g.n());
        const g3ad::SweepAxis axis = g3ad::sweep_axis_from_string(sw.axis);
        g3ad::TrainOptions opts;
        opts.epochs = sw.flags.epochs;
        opts.lr = sw.flags.lr;

        const auto rows =
            g3ad::sweep(g, truth.labels, sw.flags.config(), opts, axis, sw.seeds, sw.workers);
        const std::string md = g3ad::sweep_markdown(rows);
        const std::string md_path = out_path(sw.out, "sweep.md");
        const std::string csv_path = out_path(sw.out, "sweep.csv");
        write_text(md_path, md);
        write_text(csv_path, g3ad::sweep_csv(rows));
        std::cout << md;

        g3ad::RunManifest manifest;
        manifest.command = "sweep";
        json snapshot = sw.flags.snapshot();
        snapshot["axis"] = sw.axis;
        snapshot["epochs"] = opts.epochs;
        snapshot["lr"] = opts.lr;
        manifest.config_json = snapshot.dump();
        manifest.seeds = sw.seeds;
        manifest.input_digests = {{sw.edges, g3ad::file_digest(sw.edges)},
                                  {sw.attrs, g3ad::file_digest(sw.attrs)},
                                  {sw.labels, g3ad::file_digest(sw.labels)}};
        manifest.outputs = {md_path, csv_path};
        g3ad::write_manifest(out_path(sw.out, "manifest.json"), manifest);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const g3ad::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}

}  // namespace g3ad_cli
