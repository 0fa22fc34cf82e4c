#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "json.hpp"
#include "sparse_rls/cli.hpp"
#include "sparse_rls/config.hpp"
#include "sparse_rls/signal_model.hpp"

using namespace sparse_rls;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("sparse_rls_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path operator/(const std::string& name) const { return path / name; }
};

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "sparse-rls");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

const char* kSmoke = R"(# tiny experiment
[experiment]
m = 8
r_true = 2
noise_variance = 0.01
lambda = 0.99
n_iters = 10
n_trials = 2
seed = 4

[algorithm RLS]
kind = rls

[algorithm CR-l1]
kind = cr-rls
gamma = 0.1
penalty = l1

[algorithm EM-p0.5]
kind = em
p = 0.5
gamma = 0.28
)";

}  // namespace

TEST_CASE("missing required field is a usage error naming the field") {
    TempDir dir;
    std::string text = kSmoke;
    text.erase(text.find("lambda = 0.99\n"), 14);
    write_file(dir / "c.conf", text);
    const auto r = run({"simulate", "--config", (dir / "c.conf").string(), "--out", (dir / "o.csv").string()});
    CHECK(r.code == cli::kExitUsage);
    CHECK(r.err.find("lambda") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "o.csv"));
}

TEST_CASE("unknown keys and bad values are rejected") {
    CHECK_THROWS_AS(parse_experiment_config(std::string(kSmoke) + "colour = red\n"), ConfigError);
    std::string bad = kSmoke;
    bad.replace(bad.find("m = 8"), 5, "m = x");
    CHECK_THROWS_AS(parse_experiment_config(bad), ConfigError);
}

TEST_CASE("simulate writes curves and a manifest") {
    TempDir dir;
    write_file(dir / "c.conf", kSmoke);
    const auto r = run({"simulate", "--config", (dir / "c.conf").string(), "--out", (dir / "o.csv").string()});
    REQUIRE(r.code == cli::kExitOk);
    const auto lines = lines_of(read_file(dir / "o.csv"));
    REQUIRE(lines.size() == 11);
    CHECK(lines[0] == "iter,RLS,CR-l1,EM-p0.5");
    CHECK(lines[1].rfind("1,", 0) == 0);
    CHECK(lines[10].rfind("10,", 0) == 0);

    const auto manifest = nlohmann::json::parse(read_file(cli::manifest_path(dir / "o.csv")));
    for (const char* key : {"artifact", "version", "command", "config", "seed", "timestamp", "schema_version"})
        CHECK(manifest.contains(key));
    CHECK(manifest["seed"] == 4);

    SUBCASE("rerunning from the manifest reproduces the output byte for byte") {
        write_file(dir / "m.json", manifest.dump());
        const auto again = run({"simulate", "--config", (dir / "m.json").string(), "--out", (dir / "p.csv").string()});
        REQUIRE(again.code == cli::kExitOk);
        CHECK(read_file(dir / "p.csv") == read_file(dir / "o.csv"));
    }
    SUBCASE("json output") {
        const auto j = run({"simulate", "--config", (dir / "c.conf").string(), "--out", (dir / "o.json").string(),
                            "--format", "json", "--window", "5"});
        REQUIRE(j.code == cli::kExitOk);
        const auto doc = nlohmann::json::parse(read_file(dir / "o.json"));
        CHECK(doc["kind"] == "learning_curves");
        CHECK(doc["mse"]["EM-p0.5"].size() == 10);
        CHECK(doc["steady_state"]["window"] == 5);
    }
    SUBCASE("thread count does not change the output") {
        const auto t = run({"simulate", "--config", (dir / "c.conf").string(), "--out", (dir / "t.csv").string(),
                            "--threads", "3"});
        REQUIRE(t.code == cli::kExitOk);
        CHECK(read_file(dir / "t.csv") == read_file(dir / "o.csv"));
    }
}

TEST_CASE("parse_grid") {
    CHECK(cli::parse_grid("0.05:0.05:0.40").size() == 8);
    CHECK(cli::parse_grid("0.05:0.05:0.40").back() == 0.4);
    CHECK(cli::parse_grid("0.1:1:0.1") == std::vector<double>{0.1});
    CHECK_THROWS_AS(cli::parse_grid("0.3:0.1:0.1"), ConfigError);
    CHECK_THROWS_AS(cli::parse_grid("0:0:1"), ConfigError);
    CHECK_THROWS_AS(cli::parse_grid("0:1"), ConfigError);
    CHECK_THROWS_AS(cli::parse_grid("a:b:c"), ConfigError);
}

TEST_CASE("sweep") {
    TempDir dir;
    write_file(dir / "c.conf", kSmoke);
    const auto base = std::vector<std::string>{"sweep", "--config", (dir / "c.conf").string(), "--algo", "CR-l1",
                                               "--out", (dir / "s.csv").string(), "--grid"};
    auto args = base;
    args.push_back("0.4:0.1:0.1");
    CHECK(run(args).code == cli::kExitUsage);

    args = base;
    args.push_back("0.05:0.05:0.40");
    REQUIRE(run(args).code == cli::kExitOk);
    const auto lines = lines_of(read_file(dir / "s.csv"));
    REQUIRE(lines.size() == 10);
    CHECK(lines[0].rfind("# algorithm=CR-l1", 0) == 0);
    CHECK(lines[1] == "gamma,steady_mse");

    args = base;
    args.push_back("0.2:1:0.2");
    REQUIRE(run(args).code == cli::kExitOk);
    CHECK(read_file(dir / "s.csv").find("best_gamma=0.2") != std::string::npos);

    args = base;
    args[4] = "RLS";
    args.push_back("0.1:0.1:0.2");
    CHECK(run(args).code == cli::kExitUsage);
}

TEST_CASE("identify") {
    TempDir dir;
    const std::size_t m = 16;
    const auto sys = generate_sparse_system(m, 3, 9);
    SampleStream stream(sys, SignalConfig{m, 1.0 / m, 0.0, 10});
    std::vector<SamplePair> samples;
    for (int i = 0; i < 3000; ++i) samples.push_back(stream.next());
    write_samples(dir / "x.csv", samples, m);

    // lambda = 0.99 keeps the EM recursion contractive at this input power
    write_file(dir / "em.conf", "[experiment]\nlambda = 0.99\nnoise_variance = 0.0001\n"
                                "[algorithm EM]\nkind = em\np = 0.5\ngamma = 0.01\n");
    write_file(dir / "rls.conf", "[experiment]\nlambda = 0.999\nnoise_variance = 0.0001\n"
                                 "[algorithm RLS]\nkind = rls\n");

    SUBCASE("empty sample file") {
        write_file(dir / "empty.csv", "");
        const auto r = run({"identify", "--samples", (dir / "empty.csv").string(), "--algo-config",
                            (dir / "em.conf").string(), "--out", (dir / "r.json").string()});
        CHECK(r.code == cli::kExitUsage);
    }
    SUBCASE("sparse estimate covers the true support") {
        const auto r = run({"identify", "--samples", (dir / "x.csv").string(), "--algo-config",
                            (dir / "em.conf").string(), "--out", (dir / "r.json").string()});
        REQUIRE(r.code == cli::kExitOk);
        const auto doc = nlohmann::json::parse(read_file(dir / "r.json"));
        const auto support = doc["support"].get<std::vector<std::size_t>>();
        for (auto i : sys.support) CHECK(std::find(support.begin(), support.end(), i) != support.end());
        CHECK(doc["w_hat"].size() == m);
        CHECK(doc["xi"].size() == 3000);
        CHECK(doc["alpha_condition"].contains("satisfied"));
        CHECK(fs::exists(cli::manifest_path(dir / "r.json")));
    }
    SUBCASE("plain RLS estimate is dense") {
        const auto r = run({"identify", "--samples", (dir / "x.csv").string(), "--algo-config",
                            (dir / "rls.conf").string(), "--out", (dir / "r.json").string()});
        REQUIRE(r.code == cli::kExitOk);
        const auto doc = nlohmann::json::parse(read_file(dir / "r.json"));
        CHECK(doc["support"].size() == m);
    }
}

TEST_CASE("numeric failure maps to its own exit code") {
    TempDir dir;
    std::string text = kSmoke;
    text.insert(text.find("lambda"), "input_variance = 1e300\n");
    write_file(dir / "c.conf", text);
    const auto r = run({"simulate", "--config", (dir / "c.conf").string(), "--out", (dir / "o.csv").string()});
    CHECK(r.code == cli::kExitNumeric);
    CHECK(r.err.find("[algorithm ") != std::string::npos);
    CHECK(r.err.find("[trial 0]") != std::string::npos);
}

TEST_CASE("bad command line") {
    CHECK(run({"frobnicate"}).code == cli::kExitUsage);
    CHECK(run({"simulate"}).code == cli::kExitUsage);
}
