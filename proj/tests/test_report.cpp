#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "groupaudit/audit.hpp"
#include "groupaudit/errors.hpp"
#include "groupaudit/forest.hpp"

using namespace groupaudit;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("report_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// synthetic corpus with sentiment planted per group. Every sentence embeds
// a unique token early enough to defeat 5-gram dedup, and sentence shape
// (length x word repetition) varies independently of sentiment so the
// ttr and token-count covariates are informative but not degenerate.
void write_corpus(const std::filesystem::path& file, double p_pos_in,
                  double p_pos_out, std::size_t per_group, unsigned seed) {
    static const char* glad[] = {" glad and fine.", " glad glad fine.",
                                 " glad so truly fine.", " glad glad so fine."};
    static const char* sad[] = {" upset and sad.", " upset upset sad.",
                                " upset so truly sad.", " upset upset so sad."};
    static const char* go[] = {" toward the station.", " toward toward station.",
                               " toward the busy station.",
                               " toward the the station."};
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::ofstream out(file);
    std::size_t id = 0;
    auto emit = [&](const std::string& prefix, double p_pos) {
        for (std::size_t i = 0; i < per_group; ++i) {
            const std::string uniq = "u" + std::to_string(id++);
            const unsigned shape = rng() % 4;
            std::string sentence;
            const double roll = u(rng);
            if (roll < p_pos)
                sentence = prefix + " happy " + uniq + glad[shape];
            else if (roll < p_pos + 0.25)
                sentence = prefix + " angry " + uniq + sad[shape];
            else
                sentence = prefix + " going " + uniq + go[shape];
            nlohmann::json j = {{"id", "d" + std::to_string(id)},
                                {"text", sentence},
                                {"source", "corpus"}};
            out << j.dump() << '\n';
        }
    };
    emit("We are", p_pos_in);
    emit("They are", p_pos_out);
}

AuditRunConfig base_config(const TempDir& tmp) {
    AuditRunConfig cfg;
    cfg.data_dir = GROUPAUDIT_DATA_DIR;
    cfg.out_dir = tmp.path / "out";
    cfg.filter.quota_per_group = 1000;
    return cfg;
}

}  // namespace

TEST_CASE("planted solidarity odds ratio is recovered end to end") {
    TempDir tmp;
    // P(pos | ingroup)=.5 vs .25: odds 1 vs 1/3, planted OR 3... use 2.0:
    // .5 odds=1 vs 1/3 odds=.5 gives OR 2
    write_corpus(tmp.path / "m.jsonl", 0.5, 1.0 / 3.0, 1200, 11);
    auto cfg = base_config(tmp);
    cfg.units = {{"m", tmp.path / "m.jsonl"}};
    auto result = run_audit(cfg);
    REQUIRE(result.units.size() == 1);
    REQUIRE(result.units[0].ok);
    const double or_ = result.units[0].report->ingroup_solidarity.estimate.or_;
    CHECK(or_ > 1.7);
    CHECK(or_ < 2.3);
    CHECK(std::filesystem::exists(cfg.out_dir / "m.json"));
    CHECK(std::filesystem::exists(cfg.out_dir / "summary.csv"));
    CHECK(std::filesystem::exists(cfg.out_dir / "forest.svg"));
}

TEST_CASE("identical units produce identical reports and rerun bytes") {
    TempDir tmp;
    write_corpus(tmp.path / "a.jsonl", 0.45, 0.3, 1150, 21);
    std::filesystem::copy_file(tmp.path / "a.jsonl", tmp.path / "b.jsonl");

    auto cfg = base_config(tmp);
    cfg.units = {{"a", tmp.path / "a.jsonl"}, {"b", tmp.path / "b.jsonl"}};
    auto result = run_audit(cfg);
    REQUIRE(result.units.size() == 2);
    REQUIRE(result.units[0].ok);
    REQUIRE(result.units[1].ok);
    CHECK(result.units[0].report->ingroup_solidarity.estimate.or_ ==
          result.units[1].report->ingroup_solidarity.estimate.or_);

    // same input, same bytes, and the pooled artifact exists for two units
    auto cfg2 = cfg;
    cfg2.out_dir = tmp.path / "out2";
    run_audit(cfg2);
    for (const char* name : {"a.json", "b.json", "summary.csv", "forest.svg",
                             "pooled.json"}) {
        CAPTURE(name);
        CHECK(slurp(cfg.out_dir / name) == slurp(cfg2.out_dir / name));
    }
}

TEST_CASE("a failing unit is isolated, not fatal") {
    TempDir tmp;
    write_corpus(tmp.path / "ok.jsonl", 0.5, 0.3, 1100, 31);
    std::ofstream(tmp.path / "tiny.jsonl")
        << R"({"id":"t","text":"We are short."})" << '\n';

    auto cfg = base_config(tmp);
    cfg.units = {{"ok", tmp.path / "ok.jsonl"}, {"tiny", tmp.path / "tiny.jsonl"}};
    auto result = run_audit(cfg);
    REQUIRE(result.units.size() == 2);
    CHECK(result.units[0].ok);
    CHECK_FALSE(result.units[1].ok);
    CHECK_FALSE(result.units[1].error.empty());
    CHECK_FALSE(result.all_ok());
}

TEST_CASE("csv and json report identical numbers") {
    TempDir tmp;
    write_corpus(tmp.path / "m.jsonl", 0.5, 0.3, 1100, 41);
    auto cfg = base_config(tmp);
    cfg.units = {{"m", tmp.path / "m.jsonl"}};
    run_audit(cfg);

    nlohmann::json j = nlohmann::json::parse(slurp(cfg.out_dir / "m.json"));
    const double json_or =
        j.at("ingroup_solidarity").at("estimate").at("OR").get<double>();

    std::ifstream csv(cfg.out_dir / "summary.csv");
    std::string header, row;
    std::getline(csv, header);
    std::getline(csv, row);
    std::stringstream ss(row);
    std::string field;
    std::getline(ss, field, ',');  // unit
    CHECK(field == "m");
    std::getline(ss, field, ',');  // ok
    std::getline(ss, field, ',');  // solidarity_or
    CHECK(std::stod(field) == doctest::Approx(json_or).epsilon(1e-6));

    // the svg renders the same value rounded to two decimals
    char want[32];
    std::snprintf(want, sizeof(want), ">%.2f [", json_or);
    CHECK(slurp(cfg.out_dir / "forest.svg").find(want) != std::string::npos);
}

TEST_CASE("forest geometry: OR 1 sits on the reference line") {
    ForestPlotSpec spec;
    spec.title = "t";
    spec.rows = {{"null unit", "solidarity", 1.0, 0.8, 1.25}};
    auto svg = render_forest_svg(spec);
    // the marker rect is centered at x_of(1) = reference line position
    auto line_pos = svg.find("stroke-dasharray");
    REQUIRE(line_pos != std::string::npos);
    auto x1 = svg.rfind("x1=\"", line_pos);
    const std::string ref_x = svg.substr(x1 + 4, svg.find('"', x1 + 4) - x1 - 4);
    const double ref = std::stod(ref_x);

    auto rect = svg.find("<rect x=\"", line_pos);
    REQUIRE(rect != std::string::npos);
    const auto xs = svg.substr(rect + 9, svg.find('"', rect + 9) - rect - 9);
    CHECK(std::stod(xs) + 4.0 == doctest::Approx(ref).epsilon(1e-6));
}

TEST_CASE("a CI excluding 1 renders fully right of the line") {
    ForestPlotSpec spec;
    spec.title = "t";
    spec.rows = {{"biased unit", "solidarity", 2.0, 1.5, 2.7}};
    auto svg = render_forest_svg(spec);
    auto line_pos = svg.find("stroke-dasharray");
    auto x1 = svg.rfind("x1=\"", line_pos);
    const double ref = std::stod(
        svg.substr(x1 + 4, svg.find('"', x1 + 4) - x1 - 4));

    auto whisker = svg.find("<line x1=\"", line_pos);
    REQUIRE(whisker != std::string::npos);
    const double whisker_lo = std::stod(svg.substr(
        whisker + 10, svg.find('"', whisker + 10) - whisker - 10));
    CHECK(whisker_lo > ref);
}

TEST_CASE("forest output matches its golden file byte for byte") {
    ForestPlotSpec spec;
    spec.title = "Fixture models";
    spec.rows = {{"model-a", "solidarity", 1.93, 1.71, 2.18},
                 {"model-a", "hostility", 2.15, 1.89, 2.44},
                 {"model-b", "solidarity", 1.12, 0.97, 1.29},
                 {"model-b", "hostility", 0.94, 0.81, 1.09}};
    const auto golden =
        std::string(GROUPAUDIT_TEST_DATA_DIR) + "/forest_golden.svg";
    CHECK(render_forest_svg(spec) == slurp(golden));
}

TEST_CASE("empty forest spec is rejected") {
    ForestPlotSpec spec;
    CHECK_THROWS_AS(render_forest_svg(spec), ConfigError);
    spec.rows = {{"bad", "solidarity", 2.0, 2.5, 3.0}};  // lo > OR
    CHECK_THROWS_AS(render_forest_svg(spec), ConfigError);
}
