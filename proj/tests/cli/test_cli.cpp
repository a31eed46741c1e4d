#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "support/test_util.hpp"

using test_support::TempDir;
using test_support::read_file;
using test_support::write_file;

namespace {

struct CliResult {
    int code;
    std::string output;
};

CliResult run_cli(const TempDir& tmp, const std::string& args) {
    const std::string log = tmp.file("cli.log");
    const std::string cmd = std::string(G3AD_CLI_PATH) + " " + args + " > " + log + " 2>&1";
    const int raw = std::system(cmd.c_str());
    return {WEXITSTATUS(raw), read_file(log)};
}

// Small bundled graph so most tests skip the synth step.
void write_toy_graph(const TempDir& tmp) {
    write_file(tmp.file("edges.tsv"), "0\t1\n1\t2\n2\t3\n3\t4\n4\t5\n5\t0\n0\t3\n");
    write_file(tmp.file("attrs.csv"),
               "0.1,1.0\n0.2,0.9\n0.0,1.1\n2.0,0.1\n2.1,0.2\n1.9,0.0\n");
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("synth writes two data files plus a manifest, byte-stable per seed") {
    TempDir tmp;
    const std::string flags = "synth --nodes 60 --dim 4 --avg-degree 5 --clusters 3 --seed 11 --out ";
    CHECK(run_cli(tmp, flags + tmp.file("a")).code == 0);
    CHECK(run_cli(tmp, flags + tmp.file("b")).code == 0);
    const std::string edges_a = read_file(tmp.file("a/edges.tsv"));
    CHECK_FALSE(edges_a.empty());
    CHECK(edges_a == read_file(tmp.file("b/edges.tsv")));
    CHECK(read_file(tmp.file("a/attrs.csv")) == read_file(tmp.file("b/attrs.csv")));
    const std::string manifest = read_file(tmp.file("a/manifest.json"));
    CHECK(manifest.find("\"command\": \"synth\"") != std::string::npos);
    CHECK(manifest.find("tool_version") != std::string::npos);
}

TEST_CASE("synth rejects zero nodes as a usage error") {
    TempDir tmp;
    const CliResult r = run_cli(tmp, "synth --nodes 0 --dim 4 --out " + tmp.file("x"));
    CHECK(r.code != 0);
}

TEST_CASE("inject defaults follow the standard protocol sizes") {
    TempDir tmp;
    REQUIRE(run_cli(tmp, "synth --nodes 400 --dim 4 --avg-degree 5 --clusters 4 --seed 3 --out " +
                             tmp.file("base"))
                .code == 0);
    const CliResult r = run_cli(tmp, "inject --edges " + tmp.file("base/edges.tsv") + " --attrs " +
                                         tmp.file("base/attrs.csv") + " --seed 5 --out " + tmp.file("inj"));
    CHECK(r.code == 0);
    // defaults: 5 cliques of 15 plus an equal count of attribute anomalies
    CHECK(r.output.find("150 anomalies (75 topological, 75 attributed)") != std::string::npos);
    const std::string prov = read_file(tmp.file("inj/provenance.json"));
    CHECK(prov.find("\"clique_size\": 15") != std::string::npos);
    CHECK(prov.find("\"attr_candidates\": 50") != std::string::npos);
    CHECK(prov.find("\"num_anomalies\": 150") != std::string::npos);

    // label positives equal provenance entries
    const std::string labels = read_file(tmp.file("inj/labels.txt"));
    int positives = 0;
    for (char c : labels)
        if (c == '1') ++positives;
    CHECK(positives == 150);
}

TEST_CASE("inject with zero anomalies leaves labels all zero") {
    TempDir tmp;
    write_toy_graph(tmp);
    const CliResult r =
        run_cli(tmp, "inject --edges " + tmp.file("edges.tsv") + " --attrs " + tmp.file("attrs.csv") +
                         " --cliques 0 --attr-anomalies 0 --candidates 2 --out " + tmp.file("inj"));
    CHECK(r.code == 0);
    const std::string labels = read_file(tmp.file("inj/labels.txt"));
    CHECK(labels.find('1') == std::string::npos);
}

TEST_CASE("infeasible clique demand exits nonzero") {
    TempDir tmp;
    write_toy_graph(tmp);
    const CliResult r = run_cli(tmp, "inject --edges " + tmp.file("edges.tsv") + " --attrs " +
                                         tmp.file("attrs.csv") + " --cliques 4 --clique-size 15 --out " +
                                         tmp.file("inj"));
    CHECK(r.code != 0);
    CHECK(r.output.find("error") != std::string::npos);
}

TEST_CASE("train uses a 64-dim embedding by default and reproduces per seed") {
    TempDir tmp;
    write_toy_graph(tmp);
    const std::string base = "train --edges " + tmp.file("edges.tsv") + " --attrs " + tmp.file("attrs.csv") +
                             " --epochs 4 --seed 7 --out ";
    CHECK(run_cli(tmp, base + tmp.file("r1")).code == 0);
    CHECK(run_cli(tmp, base + tmp.file("r2")).code == 0);
    const std::string manifest = read_file(tmp.file("r1/manifest.json"));
    CHECK(manifest.find("\"embed_dim\": 64") != std::string::npos);
    const std::string scores = read_file(tmp.file("r1/scores.csv"));
    CHECK(scores.rfind("node,score", 0) == 0);
    CHECK(scores == read_file(tmp.file("r2/scores.csv")));
    CHECK(read_file(tmp.file("r1/loss_history.csv")) == read_file(tmp.file("r2/loss_history.csv")));
}

TEST_CASE("ablation flags reduce training to attribute autoencoding") {
    TempDir tmp;
    write_toy_graph(tmp);
    const CliResult r =
        run_cli(tmp, "train --edges " + tmp.file("edges.tsv") + " --attrs " + tmp.file("attrs.csv") +
                         " --lambda1 1.0 --lambda2 0 --ablate tr,ca,cc --epochs 3 --dim 4 --out " +
                         tmp.file("run"));
    CHECK(r.code == 0);
    // loss history: topo/cons/cc columns are identically zero
    const std::string history = read_file(tmp.file("run/loss_history.csv"));
    std::istringstream lines(history);
    std::string line;
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        REQUIRE(cells.size() == 6);
        CHECK(std::stod(cells[2]) == 0.0);  // topo
        CHECK(std::stod(cells[3]) == 0.0);  // cons
        CHECK(std::stod(cells[4]) == 0.0);  // cc
        CHECK(std::stod(cells[1]) == doctest::Approx(std::stod(cells[5])));  // attr == total
    }
}

TEST_CASE("diverging training exits nonzero but keeps the partial history") {
    TempDir tmp;
    write_toy_graph(tmp);
    const CliResult r =
        run_cli(tmp, "train --edges " + tmp.file("edges.tsv") + " --attrs " + tmp.file("attrs.csv") +
                         " --lr 1e40 --epochs 10 --dim 4 --out " + tmp.file("run"));
    CHECK(r.code != 0);
    CHECK(r.output.find("non-finite loss") != std::string::npos);
    const std::string history = read_file(tmp.file("run/loss_history.csv"));
    CHECK(history.rfind("epoch,", 0) == 0);
    CHECK(std::count(history.begin(), history.end(), '\n') >= 2);  // header + at least epoch 0
}

TEST_CASE("report draws a loss curve when given a history") {
    TempDir tmp;
    write_toy_graph(tmp);
    REQUIRE(run_cli(tmp, "train --edges " + tmp.file("edges.tsv") + " --attrs " + tmp.file("attrs.csv") +
                             " --epochs 3 --dim 4 --out " + tmp.file("run"))
                .code == 0);
    const CliResult r =
        run_cli(tmp, "report --scores " + tmp.file("run/scores.csv") + " --history " +
                         tmp.file("run/loss_history.csv") + " --out " + tmp.file("rep"));
    CHECK(r.code == 0);
    const std::string curve = read_file(tmp.file("rep/loss_curve.svg"));
    CHECK(curve.find("<polyline") != std::string::npos);
}

TEST_CASE("eval on a perfect fixture reports unit metrics") {
    TempDir tmp;
    write_file(tmp.file("scores.csv"), "node,score\n0,0.9\n1,0.8\n2,0.1\n3,0.2\n");
    write_file(tmp.file("labels.txt"), "1\n1\n0\n0\n");
    const CliResult r = run_cli(tmp, "eval --scores " + tmp.file("scores.csv") + " --labels " +
                                         tmp.file("labels.txt") + " --out " + tmp.file("m"));
    CHECK(r.code == 0);
    const std::string metrics = read_file(tmp.file("m/metrics.json"));
    CHECK(metrics.find("\"auc\": 1.0") != std::string::npos);
    CHECK(metrics.find("\"ap\": 1.0") != std::string::npos);
}

TEST_CASE("eval aggregates several score files into mean and std") {
    TempDir tmp;
    write_file(tmp.file("labels.txt"), "1\n0\n0\n");
    write_file(tmp.file("s1.csv"), "node,score\n0,0.9\n1,0.1\n2,0.2\n");
    write_file(tmp.file("s2.csv"), "node,score\n0,0.5\n1,0.6\n2,0.2\n");
    write_file(tmp.file("s3.csv"), "node,score\n0,0.8\n1,0.2\n2,0.3\n");
    const CliResult r = run_cli(tmp, "eval --scores " + tmp.file("s1.csv") + " --scores " + tmp.file("s2.csv") +
                                         " --scores " + tmp.file("s3.csv") + " --labels " +
                                         tmp.file("labels.txt") + " --out " + tmp.file("m"));
    CHECK(r.code == 0);
    CHECK(r.output.find("over 3 runs") != std::string::npos);
    const std::string metrics = read_file(tmp.file("m/metrics.json"));
    CHECK(metrics.find("auc_std") != std::string::npos);
    // one CSV row per run
    const std::string csv = read_file(tmp.file("m/metrics.csv"));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("eval --runs aggregates a comma-separated file list") {
    TempDir tmp;
    write_file(tmp.file("labels.txt"), "1\n0\n0\n");
    write_file(tmp.file("s1.csv"), "node,score\n0,0.9\n1,0.1\n2,0.2\n");
    write_file(tmp.file("s2.csv"), "node,score\n0,0.5\n1,0.6\n2,0.2\n");
    const CliResult r = run_cli(tmp, "eval --runs " + tmp.file("s1.csv") + "," + tmp.file("s2.csv") +
                                         " --labels " + tmp.file("labels.txt") + " --out " + tmp.file("m"));
    CHECK(r.code == 0);
    CHECK(r.output.find("over 2 runs") != std::string::npos);
    const CliResult none = run_cli(tmp, "eval --labels " + tmp.file("labels.txt") + " --out " + tmp.file("m2"));
    CHECK(none.code != 0);
}

TEST_CASE("eval without a labels file exits nonzero") {
    TempDir tmp;
    write_file(tmp.file("scores.csv"), "node,score\n0,0.9\n");
    const CliResult r = run_cli(tmp, "eval --scores " + tmp.file("scores.csv") + " --labels " +
                                         tmp.file("missing.txt") + " --out " + tmp.file("m"));
    CHECK(r.code != 0);
}

TEST_CASE("eval rejects single-class labels") {
    TempDir tmp;
    write_file(tmp.file("scores.csv"), "node,score\n0,0.9\n1,0.8\n");
    write_file(tmp.file("labels.txt"), "0\n0\n");
    const CliResult r = run_cli(tmp, "eval --scores " + tmp.file("scores.csv") + " --labels " +
                                         tmp.file("labels.txt") + " --out " + tmp.file("m"));
    CHECK(r.code != 0);
}

TEST_CASE("report renders two series with labels and one without") {
    TempDir tmp;
    write_file(tmp.file("scores.csv"), "node,score\n0,0.9\n1,0.8\n2,0.1\n3,0.2\n");
    write_file(tmp.file("labels.txt"), "1\n1\n0\n0\n");
    CHECK(run_cli(tmp, "report --scores " + tmp.file("scores.csv") + " --labels " + tmp.file("labels.txt") +
                           " --bins 10 --out " + tmp.file("with"))
              .code == 0);
    const std::string labeled = read_file(tmp.file("with/score_hist.svg"));
    CHECK(labeled.find("#4878cf") != std::string::npos);
    CHECK(labeled.find("#d1434b") != std::string::npos);
    CHECK(labeled.find("stroke-dasharray") != std::string::npos);

    CHECK(run_cli(tmp, "report --scores " + tmp.file("scores.csv") + " --bins 10 --out " + tmp.file("plain"))
              .code == 0);
    const std::string plain = read_file(tmp.file("plain/score_hist.svg"));
    CHECK(plain.find("#d1434b") == std::string::npos);
    // bins flag controls the CSV row count
    const std::string csv = read_file(tmp.file("plain/score_hist.csv"));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);
}

TEST_CASE("report on an empty scores file exits nonzero") {
    TempDir tmp;
    write_file(tmp.file("scores.csv"), "node,score\n");
    const CliResult r =
        run_cli(tmp, "report --scores " + tmp.file("scores.csv") + " --out " + tmp.file("rep"));
    CHECK(r.code != 0);
}

TEST_CASE("sweep over the ablation axis emits the seven-variant table") {
    TempDir tmp;
    write_toy_graph(tmp);
    write_file(tmp.file("labels.txt"), "0\n0\n1\n0\n0\n1\n");
    const CliResult r = run_cli(tmp, "sweep --edges " + tmp.file("edges.tsv") + " --attrs " +
                                         tmp.file("attrs.csv") + " --labels " + tmp.file("labels.txt") +
                                         " --axis ablation --seeds 1 --epochs 2 --dim 4 --out " +
                                         tmp.file("sw"));
    CHECK(r.code == 0);
    const std::string md = read_file(tmp.file("sw/sweep.md"));
    CHECK(std::count(md.begin(), md.end(), '\n') == 9);  // header + divider + 7 variants
    for (const char* name : {"full", "wo_ar", "wo_tr", "wo_ca", "wo_ar_ca", "wo_tr_ca", "wo_ar_tr"})
        CHECK(md.find(name) != std::string::npos);
}

TEST_CASE("sweep rejects an unknown axis") {
    TempDir tmp;
    write_toy_graph(tmp);
    write_file(tmp.file("labels.txt"), "0\n0\n1\n0\n0\n1\n");
    const CliResult r = run_cli(tmp, "sweep --edges " + tmp.file("edges.tsv") + " --attrs " +
                                         tmp.file("attrs.csv") + " --labels " + tmp.file("labels.txt") +
                                         " --axis bogus --seeds 1 --out " + tmp.file("sw"));
    CHECK(r.code != 0);
}

TEST_CASE("a config file supplies defaults and flags override it") {
    TempDir tmp;
    write_toy_graph(tmp);
    write_file(tmp.file("run.toml"), "[train]\nepochs=3\ndim=6\nseed=9\n");
    const CliResult r = run_cli(tmp, "--config " + tmp.file("run.toml") + " train --edges " +
                                         tmp.file("edges.tsv") + " --attrs " + tmp.file("attrs.csv") +
                                         " --dim 8 --out " + tmp.file("run"));
    CHECK(r.code == 0);
    const std::string manifest = read_file(tmp.file("run/manifest.json"));
    CHECK(manifest.find("\"epochs\": 3") != std::string::npos);      // from the config file
    CHECK(manifest.find("\"embed_dim\": 8") != std::string::npos);  // flag wins
}

}  // TEST_SUITE
