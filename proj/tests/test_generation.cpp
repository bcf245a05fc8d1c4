#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <thread>
#include <unistd.h>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "groupaudit/errors.hpp"
#include "groupaudit/generation.hpp"

using namespace groupaudit;

namespace {

class StubCompletions {
public:
    StubCompletions() {
        server_.Post("/v1/completions", [this](const httplib::Request& req,
                                               httplib::Response& res) {
            const int n = ++requests_;
            auto j = nlohmann::json::parse(req.body);
            last_prompt_ = j.at("prompt").get<std::string>();
            // distinct completions so callers can tell responses apart
            res.set_content(
                nlohmann::json{
                    {"choices",
                     {{{"text", " quite sure about answer " +
                                    std::to_string(n) + ". And more."}}}}}
                    .dump(),
                "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~StubCompletions() {
        server_.stop();
        thread_.join();
    }

    EndpointConfig config() const {
        EndpointConfig cfg;
        cfg.base_url = "http://127.0.0.1:" + std::to_string(port_);
        cfg.model_name = "stub-model";
        return cfg;
    }

    int requests() const { return requests_; }
    std::string last_prompt() const { return last_prompt_; }

private:
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::atomic<int> requests_{0};
    std::string last_prompt_;
};

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("gen_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("prompt rendering") {
    GenerationTask task;
    task.mode = PromptMode::DefaultPrompt;
    task.group = Group::Ingroup;
    CHECK(render_prompt(task, std::nullopt) == "We are");
    task.group = Group::Outgroup;
    CHECK(render_prompt(task, std::nullopt) == "They are");

    task.mode = PromptMode::InstructionPrompt;
    CHECK(render_prompt(task, std::string("The sky was clear.")) ==
          "Context: The sky was clear. Now generate a sentence starting with "
          "'They are'");
    CHECK_THROWS_AS(render_prompt(task, std::nullopt), ConfigError);
}

TEST_CASE("context sampling is deterministic and uniform") {
    std::vector<std::string> corpus;
    for (int i = 0; i < 100; ++i) corpus.push_back("sentence " + std::to_string(i));

    CHECK(sample_context(corpus, 7) == sample_context(corpus, 7));

    // chi-squared uniformity over 10000 draws and 100 cells
    std::map<std::string, int> counts;
    for (std::uint64_t s = 0; s < 10000; ++s) ++counts[sample_context(corpus, s)];
    double chi2 = 0;
    const double expected = 100.0;
    for (const auto& c : corpus) chi2 += (counts[c] - expected) * (counts[c] - expected) / expected;
    // 99 degrees of freedom, upper 1% point is about 134.6
    CHECK(chi2 < 134.6);
    CHECK(counts.size() == 100);

    CHECK_THROWS_AS(sample_context(std::vector<std::string>{}, 1), ConfigError);
}

TEST_CASE("default-mode batch collects the requested count") {
    StubCompletions server;
    TempDir cache;
    GenerationTask task;
    task.group = Group::Ingroup;
    task.target_raw_count = 10;
    auto docs = generate_batch(task, server.config(), cache.path);
    REQUIRE(docs.size() == 10);
    CHECK(server.requests() == 10);
    for (const auto& d : docs) {
        CHECK(d.text.rfind("We are", 0) == 0);
        CHECK(d.source == Source::generated);
        CHECK(d.meta.at("model") == "stub-model");
        // only the first sentence of each completion is kept
        CHECK(d.text.find("And more") == std::string::npos);
    }
    CHECK(server.last_prompt() == "We are");
}

TEST_CASE("cached runs replay byte-identically without network traffic") {
    StubCompletions server;
    TempDir cache;
    GenerationTask task;
    task.group = Group::Outgroup;
    task.target_raw_count = 5;

    auto first = generate_batch(task, server.config(), cache.path);
    const int sent = server.requests();
    auto second = generate_batch(task, server.config(), cache.path);
    CHECK(server.requests() == sent);
    REQUIRE(second.size() == first.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(second[i].text == first[i].text);
        CHECK(second[i].meta == first[i].meta);
    }
}

TEST_CASE("interrupted runs resume without duplicate spend") {
    StubCompletions server;
    TempDir cache;
    GenerationTask task;
    task.group = Group::Ingroup;
    task.target_raw_count = 3;
    generate_batch(task, server.config(), cache.path);
    const int sent = server.requests();

    // asking for more reuses the first three requests verbatim
    task.target_raw_count = 7;
    auto docs = generate_batch(task, server.config(), cache.path);
    CHECK(server.requests() == sent + 4);
    CHECK(docs.size() == 7);
}

TEST_CASE("instruction mode embeds a context sentence from the pool") {
    StubCompletions server;
    TempDir cache;
    std::ofstream ctx(cache.path / "pool.txt");
    ctx << "The sky was clear.\nRain fell all night.\n";
    ctx.close();

    GenerationTask task;
    task.mode = PromptMode::InstructionPrompt;
    task.group = Group::Outgroup;
    task.target_raw_count = 2;
    task.context_corpus = cache.path / "pool.txt";
    auto docs = generate_batch(task, server.config(), cache.path / "c");
    REQUIRE(docs.size() == 2);
    CHECK(server.last_prompt().rfind("Context: ", 0) == 0);
    CHECK(server.last_prompt().find("Now generate a sentence starting with "
                                    "'They are'") != std::string::npos);
    CHECK(docs[0].meta.count("context") == 1);

    task.context_corpus.reset();
    CHECK_THROWS_AS(generate_batch(task, server.config(), cache.path / "d"),
                    ConfigError);
}
