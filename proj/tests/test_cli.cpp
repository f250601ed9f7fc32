// End-to-end runs of the command line tool. The binary path and config
// directory arrive via TRXCAT_BIN / TRXCAT_CONFIGS (set by ctest).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

std::string binary() {
    const char* env = std::getenv("TRXCAT_BIN");
    REQUIRE(env != nullptr);
    return env;
}

std::string configs() {
    const char* env = std::getenv("TRXCAT_CONFIGS");
    REQUIRE(env != nullptr);
    return env;
}

struct Workdir {
    fs::path path;
    Workdir() {
        path = fs::temp_directory_path() / ("trxcat_cli_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
    const std::string cmd = binary() + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::size_t line_count(const std::string& text) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("usage errors exit 1, help exits 0") {
    CHECK(run("no-such-subcommand") == 1);
    CHECK(run("synth --no-such-flag") == 1);
    CHECK(run("--help") == 0);
    CHECK(run("synth --help") == 0);
}

TEST_CASE("data errors exit 2") {
    Workdir wd;
    std::ofstream(wd.file("bad.jsonl")) << "{\"id\":\"a\"}\n";
    CHECK(run("preprocess --cleaning " + configs() + "/cleaning.default.toml --names " +
              configs() + "/names.sample.txt --in " + wd.file("bad.jsonl") + " --out " +
              wd.file("t.jsonl")) == 2);
    CHECK(run("synth --config " + wd.file("missing.toml") + " --out " + wd.file("x.jsonl")) == 2);
}

TEST_CASE("synth is byte-deterministic and seed-sensitive") {
    Workdir wd;
    const std::string base = "synth --config " + configs() + "/synth.default.toml --n 500 ";
    CHECK(run(base + "--out " + wd.file("a.jsonl")) == 0);
    CHECK(run(base + "--out " + wd.file("b.jsonl")) == 0);
    CHECK(slurp(wd.file("a.jsonl")) == slurp(wd.file("b.jsonl")));

    CHECK(run("--seed 99 " + base + "--out " + wd.file("c.jsonl")) == 0);
    CHECK(slurp(wd.file("a.jsonl")) != slurp(wd.file("c.jsonl")));

    // env seed, flag precedence
    const std::string env_cmd = "TRXCAT_SEED=99 " + binary() + " " + base + "--out " +
                                wd.file("d.jsonl") + " >/dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(env_cmd.c_str())) == 0);
    CHECK(slurp(wd.file("c.jsonl")) == slurp(wd.file("d.jsonl")));

    // a rerun of the identical command reproduces the manifest bytes, and
    // hashes track content: same output bytes hash alike, seeded ones differ
    const std::string first_manifest = slurp(wd.file("a.jsonl.manifest.json"));
    CHECK(run(base + "--out " + wd.file("a.jsonl")) == 0);
    CHECK(slurp(wd.file("a.jsonl.manifest.json")) == first_manifest);

    const auto ma = nlohmann::json::parse(slurp(wd.file("a.jsonl.manifest.json")));
    const auto mb = nlohmann::json::parse(slurp(wd.file("b.jsonl.manifest.json")));
    const auto mc = nlohmann::json::parse(slurp(wd.file("c.jsonl.manifest.json")));
    CHECK(ma.at("outputs")[0].at("fnv1a64") == mb.at("outputs")[0].at("fnv1a64"));
    CHECK(ma.at("outputs")[0].at("fnv1a64") != mc.at("outputs")[0].at("fnv1a64"));
    CHECK(ma.at("configs")[0].at("fnv1a64") == mc.at("configs")[0].at("fnv1a64"));
}

TEST_CASE("manifest accompanies outputs and tracks config hashes") {
    Workdir wd;
    CHECK(run("synth --config " + configs() + "/synth.default.toml --n 50 --out " +
              wd.file("m.jsonl")) == 0);
    const auto manifest = nlohmann::json::parse(slurp(wd.file("m.jsonl.manifest.json")));
    CHECK(manifest.at("command") == "synth");
    CHECK(manifest.at("seed") == 7);
    CHECK(manifest.at("configs").size() == 1);
    CHECK(manifest.at("outputs")[0].at("fnv1a64").get<std::string>().size() == 16);
}

TEST_CASE("full pipeline: synth to evaluate to predict") {
    Workdir wd;
    const std::string cfg = " --cleaning " + configs() + "/cleaning.default.toml --names " +
                            configs() + "/names.sample.txt";

    CHECK(run("synth --config " + configs() + "/synth.default.toml --n 2500 --out " +
              wd.file("corpus.jsonl")) == 0);
    CHECK(run("preprocess" + cfg + " --in " + wd.file("corpus.jsonl") + " --out " +
              wd.file("tokens.jsonl")) == 0);
    CHECK(line_count(slurp(wd.file("tokens.jsonl"))) == 2500);

    CHECK(run("dedup --threshold 0.85 --block-rows 1024 --in " + wd.file("corpus.jsonl") +
              " --out " + wd.file("deduped.jsonl") + " --report " + wd.file("drops.jsonl") + cfg) ==
          0);
    const std::size_t kept = line_count(slurp(wd.file("deduped.jsonl")));
    const std::size_t dropped = line_count(slurp(wd.file("drops.jsonl")));
    CHECK(kept + dropped == 2500);
    CHECK(dropped > 0);

    CHECK(run("label --rules " + configs() + "/rules.default.toml --in " + wd.file("deduped.jsonl") +
              " --out " + wd.file("labeled.jsonl") + " --report " + wd.file("coverage.json") +
              " --force") == 0);
    const auto coverage = nlohmann::json::parse(slurp(wd.file("coverage.json")));
    CHECK(coverage.at("total").get<std::size_t>() == kept);
    CHECK(coverage.at("unlabeled_fraction").get<double>() <= 0.05);

    CHECK(run("featurize --features ngram-tfidf" + cfg + " --in " + wd.file("labeled.jsonl") +
              " --out " + wd.file("featurizer.bin") + " --matrix " + wd.file("features.bin")) == 0);

    CHECK(run("train --model linear_svm --features ngram-tfidf" + cfg + " --in " +
              wd.file("labeled.jsonl") + " --out " + wd.file("model.bin")) == 0);

    CHECK(run("evaluate --model " + wd.file("model.bin") + " --test " + wd.file("labeled.jsonl") +
              " --report " + wd.file("report.json")) == 0);
    const auto report = nlohmann::json::parse(slurp(wd.file("report.json")));
    CHECK(report.at("weighted").at("f1").get<double>() > 0.9);

    CHECK(run("predict --model " + wd.file("model.bin") + " --in " + wd.file("corpus.jsonl") +
              " --out " + wd.file("pred.jsonl")) == 0);
    CHECK(line_count(slurp(wd.file("pred.jsonl"))) == 2500);

    CHECK(run("report --in " + wd.file("report.json") + " --out " + wd.file("report.txt")) == 0);
    CHECK(slurp(wd.file("report.txt")).find("Weighted precision") != std::string::npos);
}

TEST_CASE("train --fine-tune searches before the final fit") {
    Workdir wd;
    const std::string cfg = " --cleaning " + configs() + "/cleaning.default.toml --names " +
                            configs() + "/names.sample.txt";
    CHECK(run("synth --config " + configs() + "/synth.default.toml --n 600 --out " +
              wd.file("corpus.jsonl")) == 0);
    CHECK(run("train --model linear_svm --features ngram-tfidf --fine-tune" + cfg + " --in " +
              wd.file("corpus.jsonl") + " --out " + wd.file("tuned.bin")) == 0);
    CHECK(run("evaluate --model " + wd.file("tuned.bin") + " --test " + wd.file("corpus.jsonl") +
              " --report " + wd.file("tuned.json")) == 0);
    const auto report = nlohmann::json::parse(slurp(wd.file("tuned.json")));
    CHECK(report.at("weighted").at("f1").get<double>() > 0.9);
}

TEST_CASE("predict on an empty corpus exits 0 with a valid empty output") {
    Workdir wd;
    const std::string cfg = " --cleaning " + configs() + "/cleaning.default.toml --names " +
                            configs() + "/names.sample.txt";
    CHECK(run("synth --config " + configs() + "/synth.default.toml --n 200 --out " +
              wd.file("corpus.jsonl")) == 0);
    CHECK(run("train --model naive_bayes --features ngram-tfidf" + cfg + " --in " +
              wd.file("corpus.jsonl") + " --out " + wd.file("model.bin")) == 0);

    std::ofstream(wd.file("empty.jsonl")).close();
    CHECK(run("predict --model " + wd.file("model.bin") + " --in " + wd.file("empty.jsonl") +
              " --out " + wd.file("pred.jsonl")) == 0);
    CHECK(slurp(wd.file("pred.jsonl")).empty());
}

TEST_CASE("experiment command writes results and tables") {
    Workdir wd;
    const std::string cfg = " --cleaning " + configs() + "/cleaning.default.toml --names " +
                            configs() + "/names.sample.txt";
    CHECK(run("synth --config " + configs() + "/synth.default.toml --n 1200 --out " +
              wd.file("corpus.jsonl")) == 0);
    CHECK(run("dedup --in " + wd.file("corpus.jsonl") + " --out " + wd.file("deduped.jsonl") + cfg) ==
          0);
    CHECK(run("label --rules " + configs() + "/rules.default.toml --in " +
              wd.file("deduped.jsonl") + " --out " + wd.file("labeled.jsonl") + " --force") == 0);

    // small sweep config
    std::ofstream(wd.file("exp.toml")) << "seed = 42\n"
                                       << "fractions = [0.8, 0.5]\n"
                                       << "split_seeds = [1, 2]\n"
                                       << "cleaning = \"" << configs() << "/cleaning.default.toml\"\n"
                                       << "names = \"" << configs() << "/names.sample.txt\"\n"
                                       << "[featurizer]\n"
                                       << "kind = \"ngram_tfidf\"\n"
                                       << "max_n = 3\n"
                                       << "[[models]]\n"
                                       << "kind = \"naive_bayes\"\n";
    CHECK(run("experiment --config " + wd.file("exp.toml") + " --in " + wd.file("labeled.jsonl") +
              " --out " + wd.file("results")) == 0);
    const auto results = nlohmann::json::parse(slurp(wd.file("results/results.json")));
    CHECK(results.at("rows").size() == 4);
    CHECK(slurp(wd.file("results/tables.txt")).find("naive_bayes") != std::string::npos);

    CHECK(run("report --in " + wd.file("results/results.json")) == 0);

    // byte-determinism of a rerun
    const std::string first = slurp(wd.file("results/results.json"));
    CHECK(run("experiment --config " + wd.file("exp.toml") + " --in " + wd.file("labeled.jsonl") +
              " --out " + wd.file("results2")) == 0);
    CHECK(first == slurp(wd.file("results2/results.json")));
}
