#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>

#include "apv/cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "temp_dir.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kData = fs::path(APV_SOURCE_DIR) / "data" / "synthetic";

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = apv::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> with_data(std::vector<std::string> args, const fs::path& out_dir) {
    std::vector<std::string> full{"--config", (kData / "apv.conf").string(), "--out", out_dir.string()};
    full.insert(full.end(), args.begin(), args.end());
    return full;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
    CHECK(run({}).code == apv::cli::kExitUsage);
    const auto unknown = run({"paint"});
    CHECK(unknown.code == apv::cli::kExitUsage);
    CHECK(nlohmann::json::parse(unknown.err)["error"] == "usage");
    CHECK(run({"--help"}).code == apv::cli::kExitOk);
    CHECK(run({"--set", "colour=red", "describe"}).code == apv::cli::kExitUsage);
    CHECK(run({"--min-price", "abc", "describe"}).code == apv::cli::kExitUsage);
}

TEST_CASE("describe one artist writes summary files") {
    apv::testing::TempDir dir("cli_describe");
    const auto r = run(with_data({"describe", "--artist", "renoir"}, dir.path()));
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["status"] == "ok");
    CHECK(fs::exists(dir.path() / "describe_summary.csv"));
    CHECK(fs::exists(dir.path() / "describe.json"));
    CHECK(fs::exists(dir.path() / "describe_plot.csv"));
    const auto j = nlohmann::json::parse(slurp(dir.path() / "describe.json"));
    REQUIRE(j["tables"]["summary"]["rows"].size() == 1);
    CHECK(j["tables"]["summary"]["rows"][0][0] == "renoir");
}

TEST_CASE("compare-artists with one artist fails with a data error") {
    apv::testing::TempDir dir("cli_compare");
    const auto r = run(with_data({"compare-artists", "--artist", "monet"}, dir.path()));
    CHECK(r.code == apv::cli::kExitDataError);
    const auto j = nlohmann::json::parse(r.err);
    CHECK(j["error"] == "insufficient_data");
    CHECK(j["message"].get<std::string>().find("need >= 2 groups") != std::string::npos);
    CHECK(fs::exists(dir.path() / "error.json"));
}

TEST_CASE("hpm with a quartic age term on 30 rows is rejected") {
    apv::testing::TempDir dir("cli_hpm");
    std::ifstream in(kData / "sales.csv");
    std::ofstream toy(dir.path() / "toy.csv");
    std::string line;
    std::getline(in, line);
    toy << line << '\n';
    for (int i = 0, kept = 0; std::getline(in, line) && kept < 30; ++i) {
        if (i % 131 == 0) {
            toy << line << '\n';
            ++kept;
        }
    }
    toy.close();
    const auto r = run(with_data({"--sales", (dir.path() / "toy.csv").string(), "hpm", "--degrees", "age=4"},
                                 dir.path() / "out"));
    CHECK(r.code == apv::cli::kExitDataError);
    const std::string kind = nlohmann::json::parse(r.err)["error"];
    CHECK((kind == "underdetermined" || kind == "rank_deficient"));
}

TEST_CASE("missing input file is a data error") {
    apv::testing::TempDir dir("cli_missing");
    const auto r = run({"--sales", (dir.path() / "none.csv").string(), "--cpi", (kData / "cpi.csv").string(), "--out",
                        dir.path().string(), "returns"});
    CHECK(r.code == apv::cli::kExitDataError);
    CHECK(nlohmann::json::parse(r.err)["error"] == "io");
}

TEST_CASE("default config comes from the environment") {
    apv::testing::TempDir dir("cli_env");
    ::setenv("APV_CONFIG", (kData / "apv.conf").c_str(), 1);
    const auto r = run({"--out", dir.path().string(), "index"});
    ::unsetenv("APV_CONFIG");
    CHECK(r.code == 0);
    CHECK(fs::exists(dir.path() / "index_index.csv"));
}

TEST_CASE("bundled dataset matches the generator") {
    apv::testing::TempDir dir("cli_synth");
    REQUIRE(run({"--seed", "1", "synth", "--dir", dir.path().string()}).code == 0);
    for (const char* name : {"sales.csv", "cpi.csv", "artists.csv", "apv.conf"}) {
        INFO(name);
        CHECK(slurp(dir.path() / name) == slurp(kData / name));
    }
}

TEST_CASE("two runs give byte-identical artifacts") {
    apv::testing::TempDir a("cli_det_a"), b("cli_det_b");
    for (const char* cmd : {"returns", "cohorts", "repeat-sales"}) {
        REQUIRE(run(with_data({cmd}, a.path())).code == 0);
        REQUIRE(run(with_data({cmd}, b.path())).code == 0);
    }
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(a.path())) {
        CHECK(slurp(entry.path()) == slurp(b.path() / entry.path().filename()));
        ++compared;
    }
    CHECK(compared > 10);
}
