#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <thread>
#include <unistd.h>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "groupaudit/errors.hpp"
#include "groupaudit/remote.hpp"

using namespace groupaudit;

namespace {

// stub classifier: anything containing "good" is Positive, "bad" Negative
class StubServer {
public:
    StubServer() {
        server_.Post("/classify", [this](const httplib::Request& req,
                                         httplib::Response& res) {
            ++requests_;
            auto j = nlohmann::json::parse(req.body);
            nlohmann::json labels = nlohmann::json::array();
            const auto& texts = j.at("texts");
            for (const auto& t : texts) {
                const auto s = t.get<std::string>();
                if (short_by_one_ && labels.size() + 1 == texts.size())
                    break;  // drop the last label to break arity
                if (s.find("good") != std::string::npos)
                    labels.push_back("Positive");
                else if (s.find("bad") != std::string::npos)
                    labels.push_back("Negative");
                else
                    labels.push_back("Neutral");
            }
            res.set_content(nlohmann::json{{"labels", labels}}.dump(),
                            "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~StubServer() {
        server_.stop();
        thread_.join();
    }

    RemoteClassifierConfig config() const {
        RemoteClassifierConfig cfg;
        cfg.base_url = "http://127.0.0.1:" + std::to_string(port_);
        return cfg;
    }

    int requests() const { return requests_; }
    void break_arity() { short_by_one_ = true; }

private:
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::atomic<int> requests_{0};
    std::atomic<bool> short_by_one_{false};
};

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("remote_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("labels come back in request order") {
    StubServer server;
    auto labels = classify_remote({"a good day", "a bad day", "a day"},
                                  server.config());
    REQUIRE(labels.size() == 3);
    CHECK(labels[0] == SentimentLabel::Positive);
    CHECK(labels[1] == SentimentLabel::Negative);
    CHECK(labels[2] == SentimentLabel::Neutral);
}

TEST_CASE("batching splits large inputs") {
    StubServer server;
    auto cfg = server.config();
    cfg.max_batch = 4;
    std::vector<std::string> texts;
    for (int i = 0; i < 10; ++i)
        texts.push_back(i % 2 ? "good thing " + std::to_string(i)
                              : "bad thing " + std::to_string(i));
    auto labels = classify_remote(texts, cfg);
    REQUIRE(labels.size() == 10);
    CHECK(server.requests() == 3);  // 4 + 4 + 2
    for (int i = 0; i < 10; ++i)
        CHECK(labels[i] ==
              (i % 2 ? SentimentLabel::Positive : SentimentLabel::Negative));
}

TEST_CASE("cached repeats never touch the network") {
    StubServer server;
    TempDir tmp;
    auto cfg = server.config();
    cfg.cache_dir = tmp.path;

    auto first = classify_remote({"good one", "bad one"}, cfg);
    const int after_first = server.requests();
    CHECK(after_first >= 1);

    auto second = classify_remote({"good one", "bad one"}, cfg);
    CHECK(server.requests() == after_first);
    CHECK(second == first);

    // a mixed batch sends only the unseen sentence
    auto third = classify_remote({"good one", "something new"}, cfg);
    CHECK(server.requests() == after_first + 1);
    CHECK(third[0] == SentimentLabel::Positive);
}

TEST_CASE("arity mismatch is a protocol error") {
    StubServer server;
    server.break_arity();
    CHECK_THROWS_AS(classify_remote({"good", "bad"}, server.config()),
                    ProtocolError);
}

TEST_CASE("unreachable endpoint fails after retries with partial results") {
    RemoteClassifierConfig cfg;
    cfg.base_url = "http://127.0.0.1:1";  // nothing listens here
    cfg.max_retries = 1;
    cfg.backoff_ms = 1;
    CHECK_THROWS_AS(classify_remote({"good"}, cfg), BatchFailed);
}

TEST_CASE("content hash is stable and collision-unfriendly") {
    CHECK(content_hash("abc") == content_hash("abc"));
    CHECK(content_hash("abc") != content_hash("abd"));
    CHECK(content_hash("").size() == 16);
}
